//! Canonical certificate JSON: compact, keys sorted, integers in base 10.

use serde::{Deserialize, Serialize};

use super::{Certificate, NonconjugacyCertificate, OmnipotenceCertificate};
use crate::covers::CoverGraph;
use crate::error::{Error, Result};
use crate::homology::search::Achieved;
use crate::homology::Functional;
use crate::words::Word;

pub const VERSION: u32 = 1;

// Field order is alphabetical so serde emits sorted keys.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateJson {
    cover: CoverGraph,
    functional: Vec<Vec<i64>>,
    kind: String,
    m: Vec<u64>,
    mode: String,
    modulus: Vec<u64>,
    rank: usize,
    targets: Vec<u64>,
    version: u32,
    words: Vec<String>,
}

fn to_json(cert: &Certificate) -> CertificateJson {
    match cert {
        Certificate::Nonconjugacy(c) => CertificateJson {
            cover: c.cover.clone(),
            functional: vec![c.functional.0.clone()],
            kind: "nonconjugacy".into(),
            m: vec![c.m as u64, c.n as u64],
            mode: c.mode.to_string(),
            modulus: vec![c.modulus],
            rank: c.rank,
            targets: Vec::new(),
            version: VERSION,
            words: vec![c.a.to_string(), c.b.to_string()],
        },
        Certificate::Omnipotence(c) => CertificateJson {
            cover: c.cover.clone(),
            functional: c.functionals.iter().map(|f| f.0.clone()).collect(),
            kind: "omnipotence".into(),
            m: c.m.iter().map(|&x| x as u64).collect(),
            mode: Achieved::Strong.to_string(),
            modulus: c.moduli.clone(),
            rank: c.rank,
            targets: c.targets.clone(),
            version: VERSION,
            words: c.elements.iter().map(|w| w.to_string()).collect(),
        },
    }
}

pub fn to_canonical_json(cert: &Certificate) -> String {
    serde_json::to_string(&to_json(cert)).expect("plain data serializes")
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::Malformed(msg.into())
}

fn parse_words(words: &[String], rank: usize) -> Result<Vec<Word>> {
    words.iter().map(|s| Word::parse(s, rank).map_err(|e| malformed(format!("word {s:?}: {e}")))).collect()
}

fn usize_of(x: u64) -> Result<usize> {
    usize::try_from(x).map_err(|_| malformed("count out of range"))
}

/// Parses a certificate. Only the shape is checked here; every
/// mathematical claim is left to the verifiers.
pub fn from_json(text: &str) -> Result<Certificate> {
    let j: CertificateJson = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
    if j.version != VERSION {
        return Err(malformed(format!("unsupported version {}", j.version)));
    }
    if j.cover.rank() != j.rank {
        return Err(malformed("cover rank differs from certificate rank"));
    }
    let words = parse_words(&j.words, j.rank)?;
    match j.kind.as_str() {
        "nonconjugacy" => {
            let [a, b]: [Word; 2] = words.try_into().map_err(|_| malformed("need exactly two words"))?;
            let [m, n]: [u64; 2] = j.m.try_into().map_err(|_| malformed("need m = [m, n]"))?;
            let [functional]: [Vec<i64>; 1] = j.functional.try_into().map_err(|_| malformed("need one functional"))?;
            let [modulus]: [u64; 1] = j.modulus.try_into().map_err(|_| malformed("need one modulus"))?;
            let mode = match j.mode.as_str() {
                "strong" => Achieved::Strong,
                "weak" => Achieved::Weak,
                other => return Err(malformed(format!("unknown mode {other:?}"))),
            };
            if !j.targets.is_empty() {
                return Err(malformed("nonconjugacy certificates carry no targets"));
            }
            Ok(Certificate::Nonconjugacy(NonconjugacyCertificate {
                rank: j.rank,
                a,
                b,
                cover: j.cover,
                m: usize_of(m)?,
                n: usize_of(n)?,
                functional: Functional(functional),
                modulus,
                mode,
            }))
        }
        "omnipotence" => {
            if j.mode != "strong" {
                return Err(malformed("omnipotence certificates are strong"));
            }
            Ok(Certificate::Omnipotence(OmnipotenceCertificate {
                rank: j.rank,
                elements: words,
                targets: j.targets,
                cover: j.cover,
                m: j.m.into_iter().map(usize_of).collect::<Result<_>>()?,
                functionals: j.functional.into_iter().map(Functional).collect(),
                moduli: j.modulus,
            }))
        }
        other => Err(malformed(format!("unknown kind {other:?}"))),
    }
}
