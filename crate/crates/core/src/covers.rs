//! Finite covers of the rose, stored as one vertex permutation per generator.
//!
//! The cover with basepoint 0 corresponds to the subgroup `K` of words whose
//! lift at 0 is closed. Crossing the `i`-th edge forwards sends `v` to
//! `perms[i][v]`; reading a word left to right lifts it as a path.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{primitive_root, Word, MAX_RANK};

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "CoverJson", into = "CoverJson")]
pub struct CoverGraph {
    rank: usize,
    perms: Vec<Vec<u32>>,
    inverses: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoverJson {
    degree: usize,
    perms: Vec<Vec<u32>>,
    rank: usize,
}

impl TryFrom<CoverJson> for CoverGraph {
    type Error = Error;

    fn try_from(j: CoverJson) -> Result<Self> {
        if j.perms.len() != j.rank {
            return Err(Error::Malformed(format!("{} permutations for rank {}", j.perms.len(), j.rank)));
        }
        if j.perms.iter().any(|p| p.len() != j.degree) {
            return Err(Error::Malformed("permutation length differs from degree".into()));
        }
        CoverGraph::new(j.rank, j.perms)
    }
}

impl From<CoverGraph> for CoverJson {
    fn from(c: CoverGraph) -> Self {
        CoverJson { degree: c.degree(), perms: c.perms, rank: c.rank }
    }
}

/// Checks that `perms` are bijections of a common vertex set and generate a
/// transitive action.
pub fn validate(rank: usize, perms: &[Vec<u32>]) -> Result<()> {
    if rank == 0 || rank > MAX_RANK {
        return Err(Error::BadRank(rank));
    }
    if perms.len() != rank {
        return Err(Error::Malformed(format!("{} permutations for rank {rank}", perms.len())));
    }
    let degree = perms[0].len();
    if degree == 0 {
        return Err(Error::EmptyCover);
    }
    for (generator, p) in perms.iter().enumerate() {
        let mut seen = vec![false; degree];
        let ok = p.len() == degree
            && p.iter().all(|&x| {
                let x = x as usize;
                x < degree && !std::mem::replace(&mut seen[x], true)
            });
        if !ok {
            return Err(Error::NotAPermutation { generator, degree });
        }
    }
    let mut seen = vec![false; degree];
    seen[0] = true;
    let mut stack = vec![0usize];
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for p in perms {
            let v = p[u] as usize;
            if !seen[v] {
                seen[v] = true;
                count += 1;
                stack.push(v);
            }
        }
    }
    // transitivity under the group only needs forward edges: finite orbits
    if count != degree {
        return Err(Error::NotConnected);
    }
    Ok(())
}

fn invert(p: &[u32]) -> Vec<u32> {
    let mut inv = vec![0u32; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x as usize] = i as u32;
    }
    inv
}

/// BFS spanning tree rooted at the basepoint. Vertices are dequeued in
/// discovery order; each vertex scans generators in index order, the
/// forward edge before the backward one.
#[derive(Clone, Debug)]
pub struct SpanningTree {
    /// Letter sequence of the tree path from 0 to each vertex.
    pub reps: Vec<Word>,
    /// `tree[v * rank + i]` is true when the edge `v --i--> perms[i][v]` is in the tree.
    pub tree: Vec<bool>,
    /// Vertices in discovery order.
    pub order: Vec<u32>,
}

impl CoverGraph {
    pub fn new(rank: usize, perms: Vec<Vec<u32>>) -> Result<CoverGraph> {
        validate(rank, &perms)?;
        let inverses = perms.iter().map(|p| invert(p)).collect();
        Ok(CoverGraph { rank, perms, inverses })
    }

    /// The rose itself: the degree-1 cover, `K` is the whole group.
    pub fn rose(rank: usize) -> Result<CoverGraph> {
        CoverGraph::new(rank, vec![vec![0]; rank])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> usize {
        self.perms[0].len()
    }

    pub fn perms(&self) -> &[Vec<u32>] {
        &self.perms
    }

    fn check_rank(&self, w: &Word) -> Result<()> {
        if w.rank() != self.rank {
            return Err(Error::RankMismatch(self.rank, w.rank()));
        }
        Ok(())
    }

    #[inline]
    pub fn act_letter(&self, v: usize, l: i32) -> usize {
        if l > 0 {
            self.perms[(l - 1) as usize][v] as usize
        } else {
            self.inverses[(-l - 1) as usize][v] as usize
        }
    }

    /// End vertex of the lift of `w` starting at `v`.
    pub fn act(&self, v: usize, w: &Word) -> usize {
        w.letters().iter().fold(v, |v, &l| self.act_letter(v, l))
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.act(0, w) == 0
    }

    /// Length of the cycle through `v` of the permutation induced by `w`.
    pub fn cycle_length(&self, v: usize, w: &Word) -> usize {
        let mut u = self.act(v, w);
        let mut n = 1;
        while u != v {
            u = self.act(u, w);
            n += 1;
        }
        n
    }

    /// Least `n ≥ 1` with `w^n ∈ K`.
    pub fn degree_of(&self, w: &Word) -> usize {
        self.cycle_length(0, w)
    }

    /// The permutation `v ↦ act(v, w)`.
    pub fn word_permutation(&self, w: &Word) -> Vec<u32> {
        (0..self.degree()).map(|v| self.act(v, w) as u32).collect()
    }

    pub fn spanning_tree(&self) -> SpanningTree {
        let d = self.degree();
        let r = self.rank;
        let mut reps: Vec<Option<Vec<i32>>> = vec![None; d];
        let mut tree = vec![false; d * r];
        let mut order = Vec::with_capacity(d);
        let mut queue = VecDeque::new();
        reps[0] = Some(Vec::new());
        queue.push_back(0usize);
        while let Some(u) = queue.pop_front() {
            order.push(u as u32);
            for i in 0..r {
                let fwd = self.perms[i][u] as usize;
                if reps[fwd].is_none() {
                    let mut p = reps[u].clone().unwrap();
                    p.push(i as i32 + 1);
                    reps[fwd] = Some(p);
                    tree[u * r + i] = true;
                    queue.push_back(fwd);
                }
                let back = self.inverses[i][u] as usize;
                if reps[back].is_none() {
                    let mut p = reps[u].clone().unwrap();
                    p.push(-(i as i32 + 1));
                    reps[back] = Some(p);
                    tree[back * r + i] = true;
                    queue.push_back(back);
                }
            }
        }
        let reps = reps.into_iter().map(|p| Word::reduce(&p.expect("connected"), r).expect("valid letters")).collect();
        SpanningTree { reps, tree, order }
    }

    /// One word per vertex: the spanning-tree path from the basepoint.
    pub fn coset_reps(&self) -> Vec<Word> {
        self.spanning_tree().reps
    }

    /// Relabels vertices in spanning-tree discovery order.
    pub fn canonical(&self) -> CoverGraph {
        let order = self.spanning_tree().order;
        let mut label = vec![0u32; order.len()];
        for (new, &old) in order.iter().enumerate() {
            label[old as usize] = new as u32;
        }
        let perms =
            self.perms.iter().map(|p| order.iter().map(|&old| label[p[old as usize] as usize]).collect()).collect();
        CoverGraph::new(self.rank, perms).expect("relabelling preserves validity")
    }

    /// Tries to build the deck transformation sending the basepoint to `v`.
    fn deck_map(&self, v: usize, reps: &[Word]) -> Option<Vec<u32>> {
        let d = self.degree();
        let f: Vec<u32> = reps.iter().map(|g| self.act(v, g) as u32).collect();
        let mut hit = vec![false; d];
        for &x in &f {
            if std::mem::replace(&mut hit[x as usize], true) {
                return None;
            }
        }
        for p in &self.perms {
            for u in 0..d {
                if f[p[u] as usize] != p[f[u] as usize] {
                    return None;
                }
            }
        }
        Some(f)
    }

    /// Exact normality test: the deck group must act transitively, which it
    /// does iff deck transformations exist onto each neighbour of 0.
    pub fn is_normal(&self) -> bool {
        let reps = self.coset_reps();
        self.perms.iter().all(|p| self.deck_map(p[0] as usize, &reps).is_some())
    }
}

/// A lift of `base^degree` starting at `vertex`, where `degree` is the
/// smallest power whose lift closes up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Elevation {
    pub base: Word,
    pub vertex: usize,
    pub degree: usize,
    /// Tree path word from the basepoint to `vertex`.
    pub rep_conjugator: Word,
}

impl Elevation {
    pub fn new(cover: &CoverGraph, base: &Word, vertex: usize, reps: &[Word]) -> Result<Elevation> {
        cover.check_rank(base)?;
        if vertex >= cover.degree() {
            return Err(Error::VertexOutOfRange { vertex, degree: cover.degree() });
        }
        Ok(Elevation {
            base: base.clone(),
            vertex,
            degree: cover.cycle_length(vertex, base),
            rep_conjugator: reps[vertex].clone(),
        })
    }
}

/// Builds the cover in which `w` lifts at the basepoint to an embedded cycle
/// of length `|w|`. Each generator's partial injection is completed by
/// pairing unmatched sources with unmatched targets in ascending order.
pub fn marshall_hall_cover(w: &Word) -> Result<CoverGraph> {
    if w.is_empty() {
        return Err(Error::TrivialWord);
    }
    if !w.is_cyclically_reduced() {
        return Err(Error::NotCyclicallyReduced);
    }
    let n = w.len();
    let r = w.rank();
    let mut partial: Vec<Vec<Option<u32>>> = vec![vec![None; n]; r];
    for (j, &l) in w.letters().iter().enumerate() {
        let next = ((j + 1) % n) as u32;
        if l > 0 {
            partial[(l - 1) as usize][j] = Some(next);
        } else {
            partial[(-l - 1) as usize][next as usize] = Some(j as u32);
        }
    }
    let perms = partial
        .into_iter()
        .map(|p| {
            let mut used = vec![false; n];
            for &t in p.iter().flatten() {
                used[t as usize] = true;
            }
            let mut free_targets = (0..n as u32).filter(|&t| !used[t as usize]);
            p.into_iter().map(|t| t.unwrap_or_else(|| free_targets.next().expect("counts match"))).collect()
        })
        .collect();
    CoverGraph::new(r, perms)
}

/// The basepoint component of the fibre product; its subgroup is `K₁ ∩ K₂`.
pub fn intersect(c1: &CoverGraph, c2: &CoverGraph) -> Result<CoverGraph> {
    if c1.rank != c2.rank {
        return Err(Error::RankMismatch(c1.rank, c2.rank));
    }
    let r = c1.rank;
    let mut index: HashMap<(u32, u32), u32> = HashMap::new();
    let mut pairs = vec![(0u32, 0u32)];
    index.insert((0, 0), 0);
    let mut perms: Vec<Vec<u32>> = vec![Vec::new(); r];
    let mut k = 0;
    while k < pairs.len() {
        let (u1, u2) = pairs[k];
        for (i, perm) in perms.iter_mut().enumerate() {
            let img = (c1.perms[i][u1 as usize], c2.perms[i][u2 as usize]);
            let next = pairs.len() as u32;
            let id = *index.entry(img).or_insert_with(|| {
                pairs.push(img);
                next
            });
            perm.push(id);
        }
        k += 1;
    }
    Ok(CoverGraph::new(r, perms)?.canonical())
}

/// The cover of the kernel of the action `F → Sym(d)`: vertices are the
/// elements of the group generated by `c`'s permutations.
pub fn regular_closure(c: &CoverGraph, cap: usize) -> Result<CoverGraph> {
    if c.degree() > cap {
        return Err(Error::ClosureTooLarge { cap });
    }
    if c.is_normal() {
        return Ok(c.canonical());
    }
    let d = c.degree();
    let r = c.rank;
    let identity: Vec<u32> = (0..d as u32).collect();
    let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
    index.insert(identity.clone(), 0);
    let mut elements = vec![identity];
    let mut perms: Vec<Vec<u32>> = vec![Vec::new(); r];
    let mut k = 0;
    while k < elements.len() {
        for (i, perm) in perms.iter_mut().enumerate() {
            let g: Vec<u32> = elements[k].iter().map(|&x| c.perms[i][x as usize]).collect();
            let id = match index.get(&g) {
                Some(&id) => id,
                None => {
                    if elements.len() >= cap {
                        return Err(Error::ClosureTooLarge { cap });
                    }
                    let id = elements.len() as u32;
                    index.insert(g.clone(), id);
                    elements.push(g);
                    id
                }
            };
            perm.push(id);
        }
        k += 1;
    }
    Ok(CoverGraph::new(r, perms)?.canonical())
}

/// Vertices representing the orbits of right multiplication by the
/// primitive root of `b`, least vertex first. Assumes nothing about
/// normality; see [`double_coset_reps`] for the checked version.
pub fn root_orbit_vertices(c: &CoverGraph, b: &Word) -> Result<Vec<usize>> {
    c.check_rank(b)?;
    let (root, _) = primitive_root(b)?;
    let perm = c.word_permutation(&root);
    let mut seen = vec![false; c.degree()];
    let mut out = Vec::new();
    for v in 0..c.degree() {
        if seen[v] {
            continue;
        }
        out.push(v);
        let mut u = v;
        while !seen[u] {
            seen[u] = true;
            u = perm[u] as usize;
        }
    }
    Ok(out)
}

/// Coset representatives for the double cosets `K\G/Z(b)` of a normal
/// cover, one per orbit of the centralizer of `b` on the vertices.
pub fn double_coset_reps(c: &CoverGraph, b: &Word) -> Result<Vec<Word>> {
    if b.is_empty() {
        return Err(Error::TrivialWord);
    }
    if !c.is_normal() {
        return Err(Error::NotNormal);
    }
    let reps = c.coset_reps();
    Ok(root_orbit_vertices(c, b)?.into_iter().map(|v| reps[v].clone()).collect())
}

/// The elevations of `b` in a normal cover, one per centralizer orbit.
pub fn elevations(c: &CoverGraph, b: &Word, reps: &[Word]) -> Result<Vec<Elevation>> {
    root_orbit_vertices(c, b)?.into_iter().map(|v| Elevation::new(c, b, v, reps)).collect()
}
