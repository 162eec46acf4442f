//! Search for a normal cover carrying a retraction functional.
//!
//! Given a target word `a` and words `bs`, find a normal cover `K` and an
//! integer functional `φ` on `H₁(K)` with `φ(x_a) = 1` on the basepoint
//! elevation of `a^m`, and, for every elevation of every `b`, either
//! `φ(x_b) = 0` (strong form) or `m·φ(x_b) ≠ n` (weak form).
//!
//! The schedule is a greedy descent. Round 0 tries the rose and the regular
//! closure of the Marshall Hall cover of `a`; each later round refines the
//! current base cover by intersecting it with cyclic covers of the rose that
//! kill `a`'s abelianized image but not that of an obstructing `b`, and with
//! the Marshall Hall covers of obstructing `b`s, re-normalizing each result.
//! Candidates are tried smallest degree first, ties broken by permutations.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use rayon::prelude::*;

use super::{cyclic_cover, find_functional, perturb_weak, ClassVector, Functional, HomologyBasis, Inequality};
use crate::covers::{intersect, marshall_hall_cover, regular_closure, root_orbit_vertices, CoverGraph};
use crate::error::{Error, Result};
use crate::words::{are_independent, conjugator, cyclic_reduce, Word};

#[derive(Clone, Debug)]
pub struct Caps {
    pub max_index: usize,
    pub max_prime: u64,
    pub max_rounds: usize,
    pub perturb_bound: i64,
    pub jobs: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_index: 10_000, max_prime: 13, max_rounds: 50, perturb_bound: 5, jobs: 1 }
    }
}

/// Which retraction condition the search must reach.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Strong,
    Weak,
    /// Strong where possible, weak otherwise, decided per candidate cover.
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Achieved {
    Strong,
    Weak,
}

impl fmt::Display for Achieved {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Achieved::Strong => "strong",
            Achieved::Weak => "weak",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub cover: CoverGraph,
    pub functional: Functional,
    pub m: usize,
    pub achieved: Achieved,
    pub rounds: usize,
    pub covers_tried: usize,
}

/// Everything about `a` and the `bs` that one candidate cover determines.
pub(crate) struct CoverData {
    pub m: usize,
    pub target: ClassVector,
    /// Per `b`: its degree and one class per centralizer orbit.
    pub elevations: Vec<(usize, Vec<ClassVector>)>,
}

impl CoverData {
    pub fn new(cover: &CoverGraph, a: &Word, bs: &[Word]) -> Result<CoverData> {
        let basis = HomologyBasis::new(cover);
        let m = cover.degree_of(a);
        let target = basis.trace(0, a.letters(), m).1;
        let elevations = bs
            .iter()
            .map(|b| {
                let n = cover.degree_of(b);
                let classes =
                    root_orbit_vertices(cover, b)?.into_iter().map(|v| basis.trace(v, b.letters(), n).1).collect();
                Ok((n, classes))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CoverData { m, target, elevations })
    }

    fn kill_set(&self) -> Vec<ClassVector> {
        self.elevations.iter().flat_map(|(_, cs)| cs.iter().cloned()).collect()
    }

    fn inequalities(&self) -> Vec<Inequality> {
        self.elevations
            .iter()
            .flat_map(|(n, cs)| cs.iter().map(move |c| Inequality { class: c.clone(), m: self.m as i64, n: *n as i64 }))
            .collect()
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn is_primitive(c: &ClassVector) -> bool {
    c.entries.iter().fold(0, |g, &(_, x)| gcd(g, x)) == 1
}

#[derive(Debug)]
enum Outcome {
    Found(Functional, Achieved),
    /// Indices of the `b`s blocking progress, and a description.
    Blocked(Vec<usize>, String),
}

fn attempt(cover: &CoverGraph, a: &Word, bs: &[Word], mode: SearchMode, bound: i64) -> Result<Outcome> {
    match try_cover(cover, a, bs, mode, bound) {
        Err(Error::Overflow) => {
            Ok(Outcome::Blocked((0..bs.len()).collect(), format!("coefficient overflow at degree {}", cover.degree())))
        }
        other => other,
    }
}

fn try_cover(cover: &CoverGraph, a: &Word, bs: &[Word], mode: SearchMode, bound: i64) -> Result<Outcome> {
    let data = CoverData::new(cover, a, bs)?;
    if !is_primitive(&data.target) {
        return Ok(Outcome::Blocked(
            (0..bs.len()).collect(),
            format!("target class not primitive at degree {}", cover.degree()),
        ));
    }
    if mode != SearchMode::Weak {
        if let Some(phi) = find_functional(&data.target, &data.kill_set())? {
            return Ok(Outcome::Found(phi, Achieved::Strong));
        }
    }
    if mode != SearchMode::Strong {
        if let Some(phi) = perturb_weak(&data.target, &data.inequalities(), bound)? {
            return Ok(Outcome::Found(phi, Achieved::Weak));
        }
    }
    // locate the b's that block on their own
    let mut blocking = Vec::new();
    for (j, (n, classes)) in data.elevations.iter().enumerate() {
        let blocked = if mode == SearchMode::Strong {
            find_functional(&data.target, classes)?.is_none()
        } else {
            let forced = data.target.scaled(*n as i64);
            classes.iter().any(|c| c.scaled(data.m as i64) == forced)
        };
        if blocked {
            blocking.push(j);
        }
    }
    if blocking.is_empty() {
        blocking = (0..bs.len()).collect();
    }
    let names: Vec<String> = blocking.iter().map(|&j| bs[j].to_string()).collect();
    Ok(Outcome::Blocked(
        blocking,
        format!("no {:?} functional at degree {}; blocked by {}", mode, cover.degree(), names.join(",")),
    ))
}

fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)).collect()
}

/// Nonzero residue vectors mod `p`, normalized so the first nonzero entry is 1.
fn projective_points(rank: usize, p: u64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for lead in 0..rank {
        let tail = rank - lead - 1;
        let count = (p as usize).pow(tail as u32);
        for mut k in 0..count {
            let mut r = vec![0i64; rank];
            r[lead] = 1;
            for slot in r.iter_mut().skip(lead + 1) {
                *slot = (k % p as usize) as i64;
                k /= p as usize;
            }
            out.push(r);
        }
    }
    out
}

fn dot_mod(r: &[i64], v: &[i64], p: i64) -> i64 {
    r.iter().zip(v).map(|(x, y)| x * y).sum::<i64>().rem_euclid(p)
}

fn refinements(base: &CoverGraph, a: &Word, blockers: &[&Word], caps: &Caps) -> Vec<CoverGraph> {
    let rank = a.rank();
    let ab_a = a.abelianization();
    let mut out = Vec::new();
    let mut push = |c: Result<CoverGraph>| {
        if let Ok(c) = c {
            if c.degree() <= caps.max_index && c.degree() > base.degree() {
                out.push(c);
            }
        }
    };
    for p in primes_up_to(caps.max_prime) {
        if (base.degree() as u64).saturating_mul(p) > caps.max_index as u64 {
            continue;
        }
        for r in projective_points(rank, p) {
            let pi = p as i64;
            if dot_mod(&r, &ab_a, pi) != 0 {
                continue;
            }
            if blockers.iter().all(|b| dot_mod(&r, &b.abelianization(), pi) == 0) {
                continue;
            }
            push(cyclic_cover(rank, &r, p).and_then(|c| intersect(base, &c)));
        }
    }
    for b in blockers {
        let core = cyclic_reduce(b).as_word();
        push(
            marshall_hall_cover(&core)
                .and_then(|mh| intersect(base, &mh))
                .and_then(|c| regular_closure(&c, caps.max_index)),
        );
    }
    out
}

fn cover_key(c: &CoverGraph) -> (usize, Vec<Vec<u32>>) {
    (c.degree(), c.perms().to_vec())
}

/// Index of the winning candidate, its functional and the form reached.
type Success = (usize, Functional, Achieved);

/// Evaluates candidates in preference order and returns the first success,
/// together with the outcomes of everything tried before it.
fn first_success(
    candidates: &[CoverGraph],
    a: &Word,
    bs: &[Word],
    mode: SearchMode,
    caps: &Caps,
) -> Result<(Option<Success>, Vec<Outcome>)> {
    let run = |c: &CoverGraph| attempt(c, a, bs, mode, caps.perturb_bound);
    if caps.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(caps.jobs)
            .build()
            .map_err(|e| Error::BadArgument(e.to_string()))?;
        let outcomes: Vec<Result<Outcome>> = pool.install(|| candidates.par_iter().map(run).collect());
        let mut seen = Vec::new();
        for (i, o) in outcomes.into_iter().enumerate() {
            match o? {
                Outcome::Found(phi, ach) => return Ok((Some((i, phi, ach)), seen)),
                blocked => seen.push(blocked),
            }
        }
        return Ok((None, seen));
    }
    let mut seen = Vec::new();
    for (i, c) in candidates.iter().enumerate() {
        match run(c)? {
            Outcome::Found(phi, ach) => return Ok((Some((i, phi, ach)), seen)),
            blocked => seen.push(blocked),
        }
    }
    Ok((None, seen))
}

/// Finds a normal cover and retraction functional for `a` against `bs`.
///
/// `Strong` requires `a` to be independent from every `b`; `Weak` and
/// `Auto` require `a` to be non-conjugate to every `b`.
pub fn independence_search(a: &Word, bs: &[Word], mode: SearchMode, caps: &Caps) -> Result<SearchResult> {
    if a.is_empty() || bs.iter().any(|b| b.is_empty()) {
        return Err(Error::TrivialWord);
    }
    for b in bs {
        if b.rank() != a.rank() {
            return Err(Error::RankMismatch(a.rank(), b.rank()));
        }
    }
    let mut mode = mode;
    let independent = bs.iter().enumerate().find_map(|(j, b)| match are_independent(&[a.clone(), b.clone()]) {
        Ok(None) => None,
        _ => Some(j),
    });
    match (mode, independent) {
        (SearchMode::Strong, Some(j)) => return Err(Error::NotIndependent { i: 0, j: j + 1 }),
        (SearchMode::Auto, Some(_)) => mode = SearchMode::Weak,
        _ => {}
    }
    for b in bs {
        if let Some(h) = conjugator(a, b)? {
            return Err(Error::ElementsConjugate { conjugator: h });
        }
    }

    let rank = a.rank();
    let core = cyclic_reduce(a).as_word();
    let rose = CoverGraph::rose(rank)?;
    let start = match regular_closure(&marshall_hall_cover(&core)?, caps.max_index) {
        Ok(c) => c,
        Err(Error::ClosureTooLarge { .. }) => rose.clone(),
        Err(e) => return Err(e),
    };
    let mut tried: HashSet<(usize, Vec<Vec<u32>>)> = HashSet::new();
    let mut round0 = vec![rose];
    if start.degree() > 1 {
        round0.push(start.clone());
    }
    let mut covers_tried = 0;
    let (found, outcomes) = first_success(&round0, a, bs, mode, caps)?;
    covers_tried += outcomes.len() + found.is_some() as usize;
    if let Some((i, functional, achieved)) = found {
        let cover = round0.swap_remove(i);
        let m = cover.degree_of(a);
        return Ok(SearchResult { cover, functional, m, achieved, rounds: 0, covers_tried });
    }
    for c in &round0 {
        tried.insert(cover_key(c));
    }
    let mut base = start;
    let mut blockers = match outcomes.into_iter().last() {
        Some(Outcome::Blocked(js, msg)) => (js, msg),
        _ => ((0..bs.len()).collect(), String::new()),
    };
    for round in 1..=caps.max_rounds {
        let blocking: Vec<&Word> = blockers.0.iter().map(|&j| &bs[j]).collect();
        let mut cands: BTreeMap<(usize, Vec<Vec<u32>>), CoverGraph> = BTreeMap::new();
        for c in refinements(&base, a, &blocking, caps) {
            let key = cover_key(&c);
            if !tried.contains(&key) {
                cands.insert(key, c);
            }
        }
        if cands.is_empty() {
            break;
        }
        let cands: Vec<CoverGraph> = cands.into_values().collect();
        let (found, outcomes) = first_success(&cands, a, bs, mode, caps)?;
        covers_tried += outcomes.len() + found.is_some() as usize;
        if let Some((i, functional, achieved)) = found {
            let cover = cands[i].clone();
            let m = cover.degree_of(a);
            return Ok(SearchResult { cover, functional, m, achieved, rounds: round, covers_tried });
        }
        for c in &cands {
            tried.insert(cover_key(c));
        }
        base = cands[0].clone();
        if let Some(Outcome::Blocked(js, msg)) = outcomes.into_iter().next() {
            blockers = (js, msg);
        }
    }
    Err(Error::SearchExhausted { obstruction: blockers.1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    #[test]
    fn rose_suffices_for_generators() {
        let r = independence_search(&w("a"), &[w("b")], SearchMode::Strong, &Caps::default()).unwrap();
        assert_eq!(r.cover.degree(), 1);
        assert_eq!(r.functional.0, vec![1, 0]);
        assert_eq!(r.achieved, Achieved::Strong);
    }

    #[test]
    fn commutator_needs_a_proper_cover() {
        let a = w("abAB");
        let r = independence_search(&a, &[w("a"), w("b")], SearchMode::Strong, &Caps::default()).unwrap();
        assert!(r.cover.degree() > 1);
        assert!(r.cover.is_normal());
        let data = CoverData::new(&r.cover, &a, &[w("a"), w("b")]).unwrap();
        assert_eq!(r.functional.eval(&data.target), 1);
        for (_, classes) in &data.elevations {
            for c in classes {
                assert_eq!(r.functional.eval(c), 0);
            }
        }
    }

    #[test]
    fn dependent_inputs_are_rejected() {
        assert_eq!(
            independence_search(&w("a"), &[w("a")], SearchMode::Strong, &Caps::default()).unwrap_err(),
            Error::NotIndependent { i: 0, j: 1 }
        );
        assert!(matches!(
            independence_search(&w("a"), &[w("a")], SearchMode::Weak, &Caps::default()),
            Err(Error::ElementsConjugate { .. })
        ));
    }

    #[test]
    fn projective_point_count() {
        assert_eq!(projective_points(2, 5).len(), 6);
        assert_eq!(projective_points(3, 2).len(), 7);
    }
}
