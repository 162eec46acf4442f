//! Exact integer solving of `x·φ = 1, k·φ = 0` by unimodular column
//! operations on a sparse change-of-variables matrix.
//!
//! `φ = V t` where `V` starts as the identity. Each equation is rewritten in
//! the parameters `t`, reduced to a single nonzero coefficient by Euclidean
//! column operations, and the surviving parameter is then fixed. The alive
//! columns of `V` always form a lattice basis of the solutions of the
//! homogeneous equations processed so far.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};

fn add_mul(a: i128, q: i128, b: i128) -> Result<i128> {
    q.checked_mul(b).and_then(|x| a.checked_add(x)).ok_or(Error::Overflow)
}

fn narrow(x: i128) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Overflow)
}

type Sparse = Vec<(u32, i64)>;

pub(crate) struct Eliminator {
    rows: Vec<HashMap<u32, i128>>,
    cols: Vec<HashMap<u32, i128>>,
    alive: Vec<bool>,
}

impl Eliminator {
    pub fn new(dim: usize) -> Self {
        let rows = (0..dim).map(|i| HashMap::from([(i as u32, 1i128)])).collect();
        let cols = (0..dim).map(|i| HashMap::from([(i as u32, 1i128)])).collect();
        Eliminator { rows, cols, alive: vec![true; dim] }
    }

    /// The equation `row·φ` expressed in the current parameters.
    fn transform(&self, row: &[(u32, i64)]) -> Result<BTreeMap<u32, i128>> {
        let mut out = BTreeMap::new();
        for &(r, c) in row {
            for (&col, &v) in &self.rows[r as usize] {
                let e = out.entry(col).or_insert(0i128);
                *e = add_mul(*e, c as i128, v)?;
            }
        }
        out.retain(|_, v| *v != 0);
        Ok(out)
    }

    /// `col_a += q · col_b`.
    fn col_op(&mut self, a: u32, b: u32, q: i128) -> Result<()> {
        let entries: Vec<(u32, i128)> = self.cols[b as usize].iter().map(|(&r, &v)| (r, v)).collect();
        for (r, v) in entries {
            let cur = self.cols[a as usize].get(&r).copied().unwrap_or(0);
            let new = add_mul(cur, q, v)?;
            if new == 0 {
                self.cols[a as usize].remove(&r);
                self.rows[r as usize].remove(&a);
            } else {
                self.cols[a as usize].insert(r, new);
                self.rows[r as usize].insert(a, new);
            }
        }
        Ok(())
    }

    /// Euclid on the coefficients; returns the pivot column and its value.
    /// Among the smallest coefficients the sparsest column is the pivot,
    /// which keeps entries of `V` from growing.
    fn reduce(&mut self, mut coef: BTreeMap<u32, i128>) -> Result<Option<(u32, i128)>> {
        loop {
            let Some((&p, &g)) = coef.iter().min_by_key(|(&c, &v)| (v.unsigned_abs(), self.cols[c as usize].len(), c))
            else {
                return Ok(None);
            };
            if coef.len() == 1 {
                return Ok(Some((p, g)));
            }
            let others: Vec<(u32, i128)> = coef.iter().filter(|(&c, _)| c != p).map(|(&c, &v)| (c, v)).collect();
            for (a, v) in others {
                let q = v / g;
                self.col_op(a, p, -q)?;
                let rem = v - q * g;
                if rem == 0 {
                    coef.remove(&a);
                } else {
                    coef.insert(a, rem);
                }
            }
        }
    }

    fn drop_col(&mut self, p: u32) {
        for &r in self.cols[p as usize].keys() {
            self.rows[r as usize].remove(&p);
        }
        self.cols[p as usize].clear();
        self.alive[p as usize] = false;
    }

    /// Imposes `row·φ = 0`.
    pub fn kill(&mut self, row: &[(u32, i64)]) -> Result<()> {
        let coef = self.transform(row)?;
        if let Some((p, _)) = self.reduce(coef)? {
            self.drop_col(p);
        }
        Ok(())
    }

    /// Imposes `row·φ = 1`. Returns a particular solution and the lattice
    /// basis of the remaining homogeneous solutions, or `None`.
    pub fn solve_unit(mut self, row: &[(u32, i64)]) -> Result<Option<(Sparse, Vec<Sparse>)>> {
        let coef = self.transform(row)?;
        let Some((p, g)) = self.reduce(coef)? else {
            return Ok(None);
        };
        if g.abs() != 1 {
            return Ok(None);
        }
        let to_vec = |m: &HashMap<u32, i128>, s: i128| -> Result<Vec<(u32, i64)>> {
            let mut v = m.iter().map(|(&r, &x)| Ok((r, narrow(x * s)?))).collect::<Result<Vec<_>>>()?;
            v.sort_unstable();
            Ok(v)
        };
        let particular = to_vec(&self.cols[p as usize], g)?;
        let null = (0..self.cols.len() as u32)
            .filter(|&c| c != p && self.alive[c as usize])
            .map(|c| to_vec(&self.cols[c as usize], 1))
            .collect::<Result<_>>()?;
        Ok(Some((particular, null)))
    }
}
