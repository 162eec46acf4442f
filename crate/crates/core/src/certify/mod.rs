//! Certificate pipelines and their independent verifiers.
//!
//! A non-conjugacy certificate names a normal cover `K`, a retraction
//! functional `φ` and a modulus `N`; the verifier rebuilds the extension
//! `τ: G → (ℤ/N) ≀ Q` and checks that `τ(a^{mn})` and `τ(b^{mn})` are not
//! conjugate. An omnipotence certificate names one normal cover and, per
//! element, a functional and modulus; the verifier computes the orders of
//! every `σ_i(a_j)` directly in the wreath products.
//!
//! Verifiers only use the word, cover, homology and wreath primitives.

pub mod format;

use std::fmt;

use crate::covers::{intersect, regular_closure, CoverGraph};
use crate::error::{Error, Result};
use crate::homology::search::{independence_search, Achieved, Caps, CoverData, SearchMode};
use crate::homology::{find_functional, Functional, HomologyBasis};
use crate::words::{are_independent, conjugator, oracle_conjugate, Word};
use crate::wreath::{base_conjugate_test, predicted_order, wreath_order, ExtendedHom, FiniteQuotient, MAX_MODULUS};

pub use format::{from_json, to_canonical_json};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonconjugacyCertificate {
    pub rank: usize,
    pub a: Word,
    pub b: Word,
    pub cover: CoverGraph,
    pub m: usize,
    pub n: usize,
    pub functional: Functional,
    pub modulus: u64,
    pub mode: Achieved,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmnipotenceCertificate {
    pub rank: usize,
    pub elements: Vec<Word>,
    pub targets: Vec<u64>,
    pub cover: CoverGraph,
    pub m: Vec<usize>,
    pub functionals: Vec<Functional>,
    pub moduli: Vec<u64>,
}

impl OmnipotenceCertificate {
    /// `∏ m_j`.
    pub fn k_const(&self) -> u64 {
        self.m.iter().map(|&x| x as u64).product()
    }

    /// The orders `p_i · ∏ m_j` the certificate promises.
    pub fn promised_orders(&self) -> Vec<u64> {
        self.targets.iter().map(|p| p * self.k_const()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Nonconjugacy(NonconjugacyCertificate),
    Omnipotence(OmnipotenceCertificate),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fact {
    pub description: String,
    pub passed: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub facts: Vec<Fact>,
    /// For omnipotence: the directly computed `o(η(a_i))`.
    pub orders: Vec<u64>,
}

impl VerificationReport {
    pub fn accepted(&self) -> bool {
        !self.facts.is_empty() && self.facts.iter().all(|f| f.passed)
    }

    pub fn first_failure(&self) -> Option<&Fact> {
        self.facts.iter().find(|f| !f.passed)
    }

    fn check(&mut self, description: impl Into<String>, passed: bool) -> bool {
        self.facts.push(Fact { description: description.into(), passed });
        passed
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for fact in &self.facts {
            writeln!(f, "[{}] {}", if fact.passed { "pass" } else { "FAIL" }, fact.description)?;
        }
        write!(f, "verdict: {}", if self.accepted() { "accept" } else { "reject" })
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn smallest_modulus(m: i64, n: i64, values: &[i64]) -> u64 {
    (2u64..)
        .find(|&big_n| {
            let bn = big_n as i128;
            values.iter().all(|&v| (m as i128 * v as i128 - n as i128).rem_euclid(bn) != 0)
        })
        .expect("all differences are nonzero")
}

/// Builds a non-conjugacy certificate for `a` and `b`.
pub fn certify_nonconjugate(a: &Word, b: &Word, mode: SearchMode, caps: &Caps) -> Result<NonconjugacyCertificate> {
    if a.rank() != b.rank() {
        return Err(Error::RankMismatch(a.rank(), b.rank()));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::TrivialWord);
    }
    if let Some(h) = conjugator(a, b)? {
        return Err(Error::ElementsConjugate { conjugator: h });
    }
    let found = independence_search(a, std::slice::from_ref(b), mode, caps)?;
    let data = CoverData::new(&found.cover, a, std::slice::from_ref(b))?;
    let (n, classes) = &data.elevations[0];
    let values: Vec<i64> = classes.iter().map(|c| found.functional.eval(c)).collect();
    let modulus = smallest_modulus(found.m as i64, *n as i64, &values);
    Ok(NonconjugacyCertificate {
        rank: a.rank(),
        a: a.clone(),
        b: b.clone(),
        cover: found.cover,
        m: found.m,
        n: *n,
        functional: found.functional,
        modulus,
        mode: found.achieved,
    })
}

/// Classes of the closed lifts of `w^deg` at every vertex.
fn all_elevation_classes(basis: &HomologyBasis, w: &Word, deg: usize) -> Vec<crate::homology::ClassVector> {
    (0..basis.cover().degree()).map(|v| basis.trace(v, w.letters(), deg).1).collect()
}

pub fn verify_nonconjugate(cert: &NonconjugacyCertificate) -> VerificationReport {
    let mut r = VerificationReport::default();
    let (a, b) = (&cert.a, &cert.b);
    let ranks_ok = a.rank() == cert.rank && b.rank() == cert.rank && cert.cover.rank() == cert.rank;
    if !r.check("words and cover share the certificate rank", ranks_ok) {
        return r;
    }
    if !r.check("words are nontrivial", !a.is_empty() && !b.is_empty()) {
        return r;
    }
    let conj = oracle_conjugate(a, b).unwrap_or(true);
    r.check(format!("{a} and {b} are not conjugate (cyclic-word oracle)"), !conj);
    if !r.check("cover is normal", cert.cover.is_normal()) {
        return r;
    }
    let cover = &cert.cover;
    let (m, n) = (cover.degree_of(a), cover.degree_of(b));
    let degrees_ok = r.check(format!("m = deg(a) = {m}"), cert.m == m);
    let degrees_ok = r.check(format!("n = deg(b) = {n}"), cert.n == n) && degrees_ok;
    let quotient = FiniteQuotient::new(cover).expect("normality checked");
    let basis = quotient.basis();
    if !r.check(format!("functional has dimension {}", basis.dim()), cert.functional.dim() == basis.dim())
        || !degrees_ok
    {
        return r;
    }
    let phi = &cert.functional;
    let target = basis.trace(0, a.letters(), m).1;
    r.check("φ(a^m at the basepoint) = 1", phi.eval_wide(&target) == 1);

    let values: Vec<i128> = all_elevation_classes(basis, b, n).iter().map(|c| phi.eval_wide(c)).collect();
    let (mi, ni) = (m as i128, n as i128);
    match cert.mode {
        Achieved::Strong => r.check("φ vanishes on every elevation of b^n", values.iter().all(|&v| v == 0)),
        Achieved::Weak => r.check("m·φ(elevation of b^n) ≠ n at every vertex", values.iter().all(|&v| mi * v != ni)),
    };
    let big_n = cert.modulus;
    if !r.check(format!("modulus N = {big_n} lies in [2, 2^62]"), (2..=MAX_MODULUS).contains(&big_n)) {
        return r;
    }
    let bn = big_n as i128;
    r.check(
        "m·φ(elevation of b^n) ≢ n (mod N) at every vertex",
        values.iter().all(|&v| (mi * v - ni).rem_euclid(bn) != 0),
    );
    // every k below a minimal N divides some difference, so N ≤ max|difference| + 1
    let widest = values.iter().map(|&v| (mi * v - ni).unsigned_abs()).max().unwrap_or(0);
    let minimal = (big_n as u128) <= widest + 1
        && (2..big_n).all(|k| values.iter().any(|&v| (mi * v - ni).rem_euclid(k as i128) == 0));
    r.check("N is the least modulus with that property", minimal);

    let tau = ExtendedHom::new(&quotient, phi.clone(), big_n).expect("checked shape");
    let mn = (m * n) as i64;
    let (ta, tb) = match (tau.eval(&a.power(mn)), tau.eval(&b.power(mn))) {
        (Ok(x), Ok(y)) => (x, y),
        _ => {
            r.check("τ evaluates on a^{mn} and b^{mn}", false);
            return r;
        }
    };
    if !r.check("τ(a^{mn}) and τ(b^{mn}) lie in the base", ta.is_base() && tb.is_base()) {
        return r;
    }
    let conj = base_conjugate_test(&quotient, &ta, &tb).unwrap_or(true);
    r.check("τ(a^{mn}) is not conjugate to τ(b^{mn}) in (ℤ/N) ≀ Q", !conj);
    r
}

/// Builds an omnipotence certificate: one normal cover with a retraction
/// `φ_i` for each element killing every elevation of the others.
pub fn certify_omnipotence(elements: &[Word], targets: &[u64], caps: &Caps) -> Result<OmnipotenceCertificate> {
    if elements.is_empty() || elements.len() != targets.len() {
        return Err(Error::BadArgument("need as many targets as elements, at least one".into()));
    }
    if targets.contains(&0) {
        return Err(Error::BadArgument("targets must be positive".into()));
    }
    let rank = elements[0].rank();
    if let Some(w) = elements.iter().find(|w| w.rank() != rank) {
        return Err(Error::RankMismatch(rank, w.rank()));
    }
    if elements.iter().any(|w| w.is_empty()) {
        return Err(Error::TrivialWord);
    }
    if let Some((i, j)) = are_independent(elements)? {
        return Err(Error::NotIndependent { i, j });
    }
    let others = |i: usize| -> Vec<Word> {
        elements.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, w)| w.clone()).collect()
    };

    let mut shared = CoverGraph::rose(rank)?;
    let mut functionals: Vec<Option<Functional>> = vec![None; elements.len()];
    for _ in 0..=caps.max_rounds {
        let mut all = true;
        for (i, a) in elements.iter().enumerate() {
            let data = CoverData::new(&shared, a, &others(i))?;
            let kill: Vec<_> = data.elevations.iter().flat_map(|(_, cs)| cs.iter().cloned()).collect();
            functionals[i] = find_functional(&data.target, &kill)?;
            all &= functionals[i].is_some();
        }
        if all {
            let m: Vec<usize> = elements.iter().map(|a| shared.degree_of(a)).collect();
            let moduli = (0..elements.len())
                .map(|i| {
                    let rest: u64 = m.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x as u64).product();
                    targets[i] * rest
                })
                .collect();
            return Ok(OmnipotenceCertificate {
                rank,
                elements: elements.to_vec(),
                targets: targets.to_vec(),
                cover: shared,
                m,
                functionals: functionals.into_iter().map(Option::unwrap).collect(),
                moduli,
            });
        }
        // refine the shared cover by each failing element's own search
        let before = shared.degree();
        for (i, a) in elements.iter().enumerate() {
            if functionals[i].is_some() {
                continue;
            }
            let found = independence_search(a, &others(i), SearchMode::Strong, caps)?;
            shared = regular_closure(&intersect(&shared, &found.cover)?, caps.max_index)
                .map_err(|e| Error::SearchExhausted { obstruction: e.to_string() })?;
        }
        if shared.degree() == before {
            break;
        }
    }
    Err(Error::SearchExhausted { obstruction: format!("no shared cover found up to degree {}", shared.degree()) })
}

pub fn verify_omnipotence(cert: &OmnipotenceCertificate) -> VerificationReport {
    let mut r = VerificationReport::default();
    let l = cert.elements.len();
    let shapes =
        l >= 1 && cert.targets.len() == l && cert.m.len() == l && cert.functionals.len() == l && cert.moduli.len() == l;
    if !r.check(format!("{l} elements with matching targets, degrees, functionals, moduli"), shapes) {
        return r;
    }
    let ranks_ok = cert.cover.rank() == cert.rank && cert.elements.iter().all(|w| w.rank() == cert.rank);
    if !r.check("elements and cover share the certificate rank", ranks_ok) {
        return r;
    }
    if !r.check("elements are nontrivial", cert.elements.iter().all(|w| !w.is_empty())) {
        return r;
    }
    r.check("targets are positive", cert.targets.iter().all(|&p| p >= 1));
    let indep = matches!(are_independent(&cert.elements), Ok(None));
    r.check("elements form an independent set", indep);
    if !r.check("cover is normal", cert.cover.is_normal()) {
        return r;
    }
    let cover = &cert.cover;
    let m: Vec<usize> = cert.elements.iter().map(|a| cover.degree_of(a)).collect();
    if !r.check(format!("m = {m:?}"), cert.m == m) {
        return r;
    }
    let quotient = FiniteQuotient::new(cover).expect("normality checked");
    let basis = quotient.basis();
    let dims_ok = cert.functionals.iter().all(|f| f.dim() == basis.dim());
    if !r.check(format!("functionals have dimension {}", basis.dim()), dims_ok) {
        return r;
    }
    let elevations: Vec<Vec<crate::homology::ClassVector>> =
        cert.elements.iter().zip(&m).map(|(a, &mi)| all_elevation_classes(basis, a, mi)).collect();
    for i in 0..l {
        let phi = &cert.functionals[i];
        r.check(format!("φ_{i}(a_{i}^m at the basepoint) = 1"), phi.eval_wide(&elevations[i][0]) == 1);
        for j in (0..l).filter(|&j| j != i) {
            r.check(
                format!("φ_{i} vanishes on every elevation of a_{j} (d = 0)"),
                elevations[j].iter().all(|c| phi.eval_wide(c) == 0),
            );
        }
    }
    let mut expected_moduli = Vec::with_capacity(l);
    for i in 0..l {
        let rest = (0..l).filter(|&j| j != i).try_fold(cert.targets[i], |acc, j| acc.checked_mul(m[j] as u64));
        expected_moduli.push(rest);
        r.check(format!("N_{i} = p_{i}·∏_(j≠{i}) m_j"), rest.is_some() && rest == Some(cert.moduli[i]));
    }
    if !r.check("moduli lie in [1, 2^62]", cert.moduli.iter().all(|&n| (1..=MAX_MODULUS).contains(&n))) {
        return r;
    }

    // direct order computations in each wreath product
    let homs: Vec<ExtendedHom> = (0..l)
        .map(|i| ExtendedHom::new(&quotient, cert.functionals[i].clone(), cert.moduli[i]).expect("checked"))
        .collect();
    let mut orders = vec![vec![0u64; l]; l];
    for (i, h) in homs.iter().enumerate() {
        for (j, a) in cert.elements.iter().enumerate() {
            let x = h.eval(a).expect("rank checked");
            orders[i][j] = wreath_order(&x);
            let d = h.d_value(a).expect("nontrivial");
            r.check(
                format!("order formula agrees for σ_{i}(a_{j})"),
                orders[i][j] == predicted_order(m[j] as u64, cert.moduli[i], d),
            );
        }
    }
    for i in 0..l {
        let ni_mi = cert.moduli[i].checked_mul(m[i] as u64);
        r.check(format!("o(σ_{i}(a_{i})) = N_{i}·m_{i} = {}", orders[i][i]), Some(orders[i][i]) == ni_mi);
        for j in (0..l).filter(|&j| j != i) {
            r.check(format!("o(σ_{i}(a_{j})) = m_{j} = {}", m[j]), orders[i][j] == m[j] as u64);
        }
    }
    let k_const = m.iter().try_fold(1u64, |acc, &x| acc.checked_mul(x as u64));
    let eta: Vec<u64> =
        (0..l).map(|j| (0..l).fold(1u64, |acc, i| acc / gcd(acc, orders[i][j]) * orders[i][j])).collect();
    for (i, &o) in eta.iter().enumerate() {
        let want = k_const.and_then(|k| k.checked_mul(cert.targets[i]));
        r.check(format!("o(η(a_{i})) = p_{i}·∏ m_j = {o}"), Some(o) == want);
    }
    r.orders = eta;
    r
}

pub fn verify(cert: &Certificate) -> VerificationReport {
    match cert {
        Certificate::Nonconjugacy(c) => verify_nonconjugate(c),
        Certificate::Omnipotence(c) => verify_omnipotence(c),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn generators_at_the_rose() {
        let c = certify_nonconjugate(&w("a"), &w("b"), SearchMode::Auto, &caps()).unwrap();
        assert_eq!(c.cover.degree(), 1);
        assert_eq!((c.m, c.n), (1, 1));
        assert_eq!(c.functional.0, vec![1, 0]);
        assert_eq!(c.modulus, 2);
        assert!(verify_nonconjugate(&c).accepted());
    }

    #[test]
    fn conjugate_inputs_return_witness() {
        let err = certify_nonconjugate(&w("ab"), &w("ba"), SearchMode::Auto, &caps()).unwrap_err();
        assert_eq!(err, Error::ElementsConjugate { conjugator: w("a") });
        let err = certify_nonconjugate(&w("a"), &w("a"), SearchMode::Auto, &caps()).unwrap_err();
        assert_eq!(err, Error::ElementsConjugate { conjugator: w("1") });
        assert_eq!(certify_nonconjugate(&w("1"), &w("a"), SearchMode::Auto, &caps()).unwrap_err(), Error::TrivialWord);
    }

    #[test]
    fn tampered_modulus_rejected() {
        let mut c = certify_nonconjugate(&w("a"), &w("b"), SearchMode::Auto, &caps()).unwrap();
        c.modulus = 1;
        let rep = verify_nonconjugate(&c);
        assert!(!rep.accepted());
        assert!(rep.first_failure().unwrap().description.contains("modulus"));
    }

    #[test]
    fn conjugate_claim_rejected() {
        let mut c = certify_nonconjugate(&w("a"), &w("b"), SearchMode::Auto, &caps()).unwrap();
        c.b = w("a").conjugate(&w("b")).unwrap();
        let rep = verify_nonconjugate(&c);
        assert!(!rep.accepted());
        assert!(rep.first_failure().unwrap().description.contains("not conjugate"));
    }

    #[test]
    fn omnipotence_at_the_rose() {
        let c = certify_omnipotence(&[w("a"), w("b")], &[2, 3], &caps()).unwrap();
        assert_eq!(c.cover.degree(), 1);
        assert_eq!(c.m, vec![1, 1]);
        assert_eq!(c.k_const(), 1);
        assert_eq!(c.functionals[0].0, vec![1, 0]);
        assert_eq!(c.functionals[1].0, vec![0, 1]);
        assert_eq!(c.moduli, vec![2, 3]);
        let rep = verify_omnipotence(&c);
        assert!(rep.accepted(), "{rep}");
        assert_eq!(rep.orders, vec![2, 3]);
    }

    #[test]
    fn omnipotence_single_element() {
        let c = certify_omnipotence(&[w("a")], &[5], &caps()).unwrap();
        let rep = verify_omnipotence(&c);
        assert!(rep.accepted());
        assert_eq!(rep.orders, vec![5]);
    }

    #[test]
    fn omnipotence_rejects_dependent_sets() {
        assert_eq!(
            certify_omnipotence(&[w("a"), w("aa")], &[1, 1], &caps()).unwrap_err(),
            Error::NotIndependent { i: 0, j: 1 }
        );
    }

    #[test]
    fn omnipotence_tampering() {
        let c = certify_omnipotence(&[w("a"), w("b")], &[2, 3], &caps()).unwrap();
        let mut t = c.clone();
        t.moduli[0] = 4;
        assert!(!verify_omnipotence(&t).accepted());
        let mut t = c.clone();
        t.functionals[0] = Functional(vec![1, 1]);
        let rep = verify_omnipotence(&t);
        assert!(rep.first_failure().unwrap().description.contains("d = 0"));
    }
}
