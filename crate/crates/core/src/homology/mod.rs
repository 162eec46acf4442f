//! First homology of cover graphs and retraction functionals.
//!
//! The basis of `H₁` is the set of edges outside the BFS spanning tree of
//! [`CoverGraph::spanning_tree`], ordered by `(vertex, generator)`. A closed
//! path's class counts signed crossings of those edges.

mod lattice;
pub mod search;

use crate::covers::{CoverGraph, Elevation, SpanningTree};
use crate::error::{Error, Result};
use crate::words::Word;

use lattice::Eliminator;

pub use search::{independence_search, Caps, SearchMode, SearchResult};

const TREE: u32 = u32::MAX;

pub struct HomologyBasis {
    cover: CoverGraph,
    tree: SpanningTree,
    /// Basis index of edge `v * rank + i`, or `TREE`.
    edge_index: Vec<u32>,
    basis_edges: Vec<(u32, u32)>,
}

/// Sparse integer vector in basis coordinates, sorted by index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassVector {
    pub dim: usize,
    pub entries: Vec<(u32, i64)>,
}

/// Integer covector on `H₁`, dense in basis order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functional(pub Vec<i64>);

impl ClassVector {
    pub fn zero(dim: usize) -> Self {
        ClassVector { dim, entries: Vec::new() }
    }

    pub fn from_dense(v: &[i64]) -> Self {
        let entries = v.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (i as u32, x)).collect();
        ClassVector { dim: v.len(), entries }
    }

    pub fn to_dense(&self) -> Vec<i64> {
        let mut v = vec![0; self.dim];
        for &(i, x) in &self.entries {
            v[i as usize] = x;
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    fn from_crossings(dim: usize, mut crossings: Vec<(u32, i64)>) -> Self {
        crossings.sort_unstable_by_key(|&(i, _)| i);
        let mut entries: Vec<(u32, i64)> = Vec::with_capacity(crossings.len());
        for (i, x) in crossings {
            match entries.last_mut() {
                Some((j, y)) if *j == i => *y += x,
                _ => entries.push((i, x)),
            }
        }
        entries.retain(|&(_, x)| x != 0);
        ClassVector { dim, entries }
    }

    pub fn scaled(&self, k: i64) -> ClassVector {
        let entries = if k == 0 { Vec::new() } else { self.entries.iter().map(|&(i, x)| (i, x * k)).collect() };
        ClassVector { dim: self.dim, entries }
    }
}

impl Functional {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn eval(&self, c: &ClassVector) -> i64 {
        c.entries.iter().map(|&(i, x)| self.0[i as usize] * x).sum()
    }

    /// Overflow-free evaluation for untrusted coefficients.
    pub fn eval_wide(&self, c: &ClassVector) -> i128 {
        c.entries.iter().map(|&(i, x)| self.0[i as usize] as i128 * x as i128).sum()
    }
}

impl HomologyBasis {
    pub fn new(cover: &CoverGraph) -> HomologyBasis {
        let tree = cover.spanning_tree();
        let mut edge_index = vec![TREE; tree.tree.len()];
        let mut basis_edges = Vec::new();
        let r = cover.rank();
        for v in 0..cover.degree() {
            for i in 0..r {
                if !tree.tree[v * r + i] {
                    edge_index[v * r + i] = basis_edges.len() as u32;
                    basis_edges.push((v as u32, i as u32));
                }
            }
        }
        HomologyBasis { cover: cover.clone(), tree, edge_index, basis_edges }
    }

    pub fn cover(&self) -> &CoverGraph {
        &self.cover
    }

    pub fn coset_reps(&self) -> &[Word] {
        &self.tree.reps
    }

    /// First Betti number `rank·d − d + 1`.
    pub fn dim(&self) -> usize {
        self.basis_edges.len()
    }

    pub fn basis_edges(&self) -> &[(u32, u32)] {
        &self.basis_edges
    }

    /// Traces `letters` from `start`, `times` times over, returning the end
    /// vertex and the signed crossing counts of basis edges.
    pub fn trace(&self, start: usize, letters: &[i32], times: usize) -> (usize, ClassVector) {
        let r = self.cover.rank();
        let mut v = start;
        let mut crossings = Vec::with_capacity(letters.len() * times);
        for _ in 0..times {
            for &l in letters {
                let (edge, sign, next) = if l > 0 {
                    let next = self.cover.act_letter(v, l);
                    (v * r + (l - 1) as usize, 1, next)
                } else {
                    let next = self.cover.act_letter(v, l);
                    (next * r + (-l - 1) as usize, -1, next)
                };
                let idx = self.edge_index[edge];
                if idx != TREE {
                    crossings.push((idx, sign));
                }
                v = next;
            }
        }
        (v, ClassVector::from_crossings(self.dim(), crossings))
    }

    pub fn homology_class(&self, e: &Elevation) -> Result<ClassVector> {
        if e.vertex >= self.cover.degree() {
            return Err(Error::VertexOutOfRange { vertex: e.vertex, degree: self.cover.degree() });
        }
        if e.base.rank() != self.cover.rank() {
            return Err(Error::RankMismatch(self.cover.rank(), e.base.rank()));
        }
        Ok(self.trace(e.vertex, e.base.letters(), e.degree).1)
    }

    /// Class of the closed lift of `w` at `v`; `None` if the lift is open.
    pub fn loop_class(&self, v: usize, w: &Word) -> Option<ClassVector> {
        let (end, c) = self.trace(v, w.letters(), 1);
        (end == v).then_some(c)
    }
}

fn check_dims(target: &ClassVector, others: &[&ClassVector]) -> Result<()> {
    for o in others {
        if o.dim != target.dim {
            return Err(Error::DimensionMismatch(target.dim, o.dim));
        }
    }
    Ok(())
}

/// Restricts the problem to the coordinates that actually occur.
struct Support {
    coords: Vec<u32>,
}

impl Support {
    fn of<'a>(vs: impl Iterator<Item = &'a ClassVector>) -> Support {
        let mut coords: Vec<u32> = vs.flat_map(|v| v.entries.iter().map(|&(i, _)| i)).collect();
        coords.sort_unstable();
        coords.dedup();
        Support { coords }
    }

    fn local(&self, v: &ClassVector) -> Vec<(u32, i64)> {
        v.entries.iter().map(|&(i, x)| (self.coords.binary_search(&i).expect("in support") as u32, x)).collect()
    }

    fn global(&self, dim: usize, v: &[(u32, i64)]) -> Vec<i64> {
        let mut out = vec![0; dim];
        for &(i, x) in v {
            out[self.coords[i as usize] as usize] = x;
        }
        out
    }
}

/// Integer covector `φ` with `φ·target = 1` and `φ·k = 0` for every `k` in
/// `kill`, or `None` when no integral solution exists.
pub fn find_functional(target: &ClassVector, kill: &[ClassVector]) -> Result<Option<Functional>> {
    check_dims(target, &kill.iter().collect::<Vec<_>>())?;
    let support = Support::of(std::iter::once(target).chain(kill));
    let mut elim = Eliminator::new(support.coords.len());
    let mut seen = std::collections::HashSet::new();
    for k in kill {
        if k.is_zero() || !seen.insert(&k.entries) {
            continue;
        }
        elim.kill(&support.local(k))?;
    }
    Ok(elim.solve_unit(&support.local(target))?.map(|(phi, _)| Functional(support.global(target.dim, &phi))))
}

/// A weak-form constraint: `m · φ(class) ≠ n`.
#[derive(Clone, Debug)]
pub struct Inequality {
    pub class: ClassVector,
    pub m: i64,
    pub n: i64,
}

fn satisfies(values: &[i64], constraints: &[Inequality]) -> bool {
    values.iter().zip(constraints).all(|(&v, c)| c.m * v != c.n)
}

/// `φ` with `φ·target = 1` and `m·φ(class) ≠ n` for every constraint.
/// Tries the all-zero solution first, then perturbs a particular solution
/// along the null-space generators of the target with coefficients
/// `±1, ±2, …, ±bound`.
pub fn find_functional_weak(
    target: &ClassVector,
    constraints: &[Inequality],
    bound: i64,
) -> Result<Option<Functional>> {
    let kill: Vec<ClassVector> = constraints.iter().map(|c| c.class.clone()).collect();
    if constraints.iter().all(|c| c.n != 0) {
        if let Some(phi) = find_functional(target, &kill)? {
            return Ok(Some(phi));
        }
    }
    perturb_weak(target, constraints, bound)
}

pub(crate) fn perturb_weak(target: &ClassVector, constraints: &[Inequality], bound: i64) -> Result<Option<Functional>> {
    check_dims(target, &constraints.iter().map(|c| &c.class).collect::<Vec<_>>())?;
    let support = Support::of(std::iter::once(target).chain(constraints.iter().map(|c| &c.class)));
    let locals: Vec<Vec<(u32, i64)>> = constraints.iter().map(|c| support.local(&c.class)).collect();
    let Some((phi0, null)) = Eliminator::new(support.coords.len()).solve_unit(&support.local(target))? else {
        return Ok(None);
    };
    let dot = |a: &[(u32, i64)], b: &[(u32, i64)]| -> i64 {
        // both sorted by index
        let (mut i, mut j, mut s) = (0, 0, 0i64);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    s += a[i].1 * b[j].1;
                    i += 1;
                    j += 1;
                }
            }
        }
        s
    };
    let mut locals_sorted = locals;
    for l in &mut locals_sorted {
        l.sort_unstable();
    }
    let base: Vec<i64> = locals_sorted.iter().map(|c| dot(&phi0, c)).collect();
    let finish = |phi: Vec<(u32, i64)>| Functional(support.global(target.dim, &phi));
    if satisfies(&base, constraints) {
        return Ok(Some(finish(phi0)));
    }
    let bad: Vec<usize> = (0..constraints.len()).filter(|&q| constraints[q].m * base[q] == constraints[q].n).collect();
    let mut useful = Vec::new();
    for g in &null {
        let deltas: Vec<i64> = locals_sorted.iter().map(|c| dot(g, c)).collect();
        if bad.iter().any(|&q| deltas[q] != 0) {
            useful.push((g, deltas));
        }
    }
    for c in 1..=bound {
        for (g, deltas) in &useful {
            for s in [c, -c] {
                let values: Vec<i64> = base.iter().zip(deltas).map(|(b, d)| b + s * d).collect();
                if satisfies(&values, constraints) {
                    let mut phi: std::collections::BTreeMap<u32, i64> = phi0.iter().copied().collect();
                    for &(i, x) in g.iter() {
                        *phi.entry(i).or_insert(0) += s * x;
                    }
                    return Ok(Some(finish(phi.into_iter().collect())));
                }
            }
        }
    }
    Ok(None)
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// The cyclic cover of the rose for `ψ: F → ℤ/p`, `ψ(x_i) = residues[i]`.
pub fn cyclic_cover(rank: usize, residues: &[i64], p: u64) -> Result<CoverGraph> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if residues.len() != rank {
        return Err(Error::DimensionMismatch(rank, residues.len()));
    }
    let pi = p as i64;
    if residues.iter().all(|r| r.rem_euclid(pi) == 0) {
        return Err(Error::AllZeroResidues(p));
    }
    let perms = residues.iter().map(|r| (0..pi).map(|v| (v + r).rem_euclid(pi) as u32).collect()).collect();
    CoverGraph::new(rank, perms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::marshall_hall_cover;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn cv(v: &[i64]) -> ClassVector {
        ClassVector::from_dense(v)
    }

    fn elevation_at(c: &CoverGraph, s: &str, v: usize) -> Elevation {
        Elevation::new(c, &w(s), v, &c.coset_reps()).unwrap()
    }

    #[test]
    fn betti_number() {
        for c in [
            CoverGraph::rose(2).unwrap(),
            marshall_hall_cover(&w("abAB")).unwrap(),
            cyclic_cover(2, &[1, 1], 5).unwrap(),
        ] {
            assert_eq!(HomologyBasis::new(&c).dim(), 2 * c.degree() - c.degree() + 1);
        }
    }

    #[test]
    fn class_examples() {
        let rose = CoverGraph::rose(2).unwrap();
        let h = HomologyBasis::new(&rose);
        assert_eq!(h.homology_class(&elevation_at(&rose, "a", 0)).unwrap().to_dense(), vec![1, 0]);
        assert!(h.homology_class(&elevation_at(&rose, "abAB", 0)).unwrap().is_zero());

        let c = CoverGraph::new(2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        let h = HomologyBasis::new(&c);
        // tree edge is (0, a); basis is (0, b), (1, a), (1, b)
        assert_eq!(h.basis_edges(), &[(0, 1), (1, 0), (1, 1)]);
        let e = elevation_at(&c, "a", 0);
        assert_eq!(e.degree, 2);
        assert_eq!(h.homology_class(&e).unwrap().to_dense(), vec![0, 1, 0]);

        let bad = Elevation { vertex: 5, ..e };
        assert!(matches!(h.homology_class(&bad), Err(Error::VertexOutOfRange { .. })));
    }

    #[test]
    fn functional_examples() {
        let phi = find_functional(&cv(&[1, 0]), &[cv(&[0, 1])]).unwrap().unwrap();
        assert_eq!(phi.0, vec![1, 0]);
        assert_eq!(find_functional(&cv(&[2, 0]), &[]).unwrap(), None);
        let phi = find_functional(&cv(&[1, 1]), &[cv(&[1, -1])]).unwrap();
        assert_eq!(phi, None, "φ₁+φ₂=1 and φ₁=φ₂ has no integer solution");
        let phi = find_functional(&cv(&[1, 2]), &[cv(&[1, 1])]).unwrap().unwrap();
        assert_eq!(phi.0, vec![-1, 1]);
        assert!(matches!(find_functional(&cv(&[1, 0]), &[cv(&[1, 0, 0])]), Err(Error::DimensionMismatch(2, 3))));
    }

    #[test]
    fn weak_examples() {
        let ineq = |v: &[i64], m, n| Inequality { class: cv(v), m, n };
        let phi = find_functional_weak(&cv(&[1, 0]), &[ineq(&[0, 1], 1, 1)], 5).unwrap().unwrap();
        assert_eq!(phi.0, vec![1, 0]);
        assert_eq!(find_functional_weak(&cv(&[1, 0]), &[ineq(&[1, 0], 1, 1)], 5).unwrap(), None);
        let phi = find_functional_weak(&cv(&[1, 0]), &[ineq(&[2, 0], 1, 1)], 5).unwrap().unwrap();
        assert_eq!(phi.0, vec![1, 0]);
        // forced to perturb: φ = (1, 0) gives 1·1 = 1 on (1, 1)
        let phi = find_functional_weak(&cv(&[1, 0]), &[ineq(&[1, 1], 1, 1)], 5).unwrap().unwrap();
        assert_eq!(phi.eval(&cv(&[1, 0])), 1);
        assert_ne!(phi.eval(&cv(&[1, 1])), 1);
    }

    #[test]
    fn cyclic_cover_examples() {
        let c = cyclic_cover(2, &[0, 1], 2).unwrap();
        assert_eq!(c.perms(), &[vec![0, 1], vec![1, 0]]);
        let c = cyclic_cover(2, &[1, 1], 3).unwrap();
        assert_eq!(c.degree(), 3);
        assert!(c.contains(&w("aB")));
        assert!(!c.contains(&w("ab")));
        assert_eq!(cyclic_cover(2, &[0, 0], 3), Err(Error::AllZeroResidues(3)));
        assert_eq!(cyclic_cover(2, &[3, 6], 3), Err(Error::AllZeroResidues(3)));
        assert_eq!(cyclic_cover(2, &[1, 0], 4), Err(Error::NotPrime(4)));
    }
}
