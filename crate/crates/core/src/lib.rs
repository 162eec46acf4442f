//! Finite-quotient certificates for non-conjugacy and omnipotence in free groups.
//!
//! Words live in [`words`], finite covers of the rose in [`covers`], the first
//! homology of a cover and the retraction search in [`homology`], the
//! induced maps into wreath products in [`wreath`], and the certificate
//! pipelines and verifiers in [`certify`].

pub mod certify;
pub mod covers;
pub mod error;
pub mod homology;
pub mod words;
pub mod wreath;

pub use certify::{
    certify_nonconjugate, certify_omnipotence, from_json, to_canonical_json, verify, verify_nonconjugate,
    verify_omnipotence, Certificate, NonconjugacyCertificate, OmnipotenceCertificate, VerificationReport,
};
pub use covers::CoverGraph;
pub use error::{Error, Result};
pub use homology::search::{Achieved, Caps, SearchMode};
pub use words::Word;
