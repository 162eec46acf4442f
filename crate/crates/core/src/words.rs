//! Words in a free group of rank at most 26.
//!
//! Generators are written `a`..`z` and their inverses `A`..`Z`; the identity
//! is written `1`. Internally a letter is a signed 1-based generator index,
//! so `abAB` is `[1, 2, -1, -2]`. Conjugation follows `g^h = h⁻¹ g h`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

pub const MAX_RANK: usize = 26;

/// A freely reduced word.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word {
    rank: usize,
    letters: Vec<i32>,
}

fn check_rank(rank: usize) -> Result<()> {
    if rank == 0 || rank > MAX_RANK {
        return Err(Error::BadRank(rank));
    }
    Ok(())
}

fn push_reduced(out: &mut Vec<i32>, l: i32) {
    if out.last() == Some(&-l) {
        out.pop();
    } else {
        out.push(l);
    }
}

impl Word {
    /// Freely reduces `raw` into a word of the given rank.
    pub fn reduce(raw: &[i32], rank: usize) -> Result<Word> {
        check_rank(rank)?;
        let mut letters = Vec::with_capacity(raw.len());
        for &l in raw {
            if l == 0 || l.unsigned_abs() as usize > rank {
                return Err(Error::IndexOutOfRange { index: l, rank });
            }
            push_reduced(&mut letters, l);
        }
        Ok(Word { rank, letters })
    }

    pub fn identity(rank: usize) -> Result<Word> {
        check_rank(rank)?;
        Ok(Word { rank, letters: Vec::new() })
    }

    /// The `i`-th generator (1-based).
    pub fn generator(rank: usize, i: usize) -> Result<Word> {
        Word::reduce(&[i as i32], rank)
    }

    /// Parses `a`-`z` / `A`-`Z` text; `"1"` is the identity.
    pub fn parse(text: &str, rank: usize) -> Result<Word> {
        check_rank(rank)?;
        if text == "1" {
            return Word::identity(rank);
        }
        if text.is_empty() {
            return Err(Error::BadSyntax(text.to_string()));
        }
        let mut raw = Vec::with_capacity(text.len());
        for c in text.chars() {
            let l = match c {
                'a'..='z' => (c as u8 - b'a') as i32 + 1,
                'A'..='Z' => -((c as u8 - b'A') as i32 + 1),
                _ => return Err(Error::BadSyntax(text.to_string())),
            };
            raw.push(l);
        }
        Word::reduce(&raw, rank)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    fn same_rank(&self, other: &Word) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        Ok(())
    }

    pub fn inverse(&self) -> Word {
        let letters = self.letters.iter().rev().map(|l| -l).collect();
        Word { rank: self.rank, letters }
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        self.same_rank(other)?;
        let mut letters = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut letters, l);
        }
        Ok(Word { rank: self.rank, letters })
    }

    /// `self^k`; negative `k` powers the inverse.
    pub fn power(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            for &l in &base.letters {
                push_reduced(&mut letters, l);
            }
        }
        Word { rank: self.rank, letters }
    }

    /// `h⁻¹ · self · h`.
    pub fn conjugate(&self, h: &Word) -> Result<Word> {
        h.inverse().concat(self)?.concat(h)
    }

    /// Exponent sum of each generator.
    pub fn abelianization(&self) -> Vec<i64> {
        let mut v = vec![0i64; self.rank];
        for &l in &self.letters {
            v[l.unsigned_abs() as usize - 1] += l.signum() as i64;
        }
        v
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(&f), Some(&l)) => self.letters.len() == 1 || f != -l,
            _ => true,
        }
    }

    /// Splits `self = x · core · x⁻¹` with `core` cyclically reduced.
    fn strip(&self) -> (Word, &[i32]) {
        let w = &self.letters;
        let (mut i, mut j) = (0, w.len());
        while j - i >= 2 && w[i] == -w[j - 1] {
            i += 1;
            j -= 1;
        }
        let x = Word { rank: self.rank, letters: w[..i].to_vec() };
        (x, &w[i..j])
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for &l in &self.letters {
            let c = if l > 0 { (b'a' + (l - 1) as u8) as char } else { (b'A' + (-l - 1) as u8) as char };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Canonical representative of a conjugacy class: cyclically reduced and
/// rotated to the lexicographically least rotation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CyclicWord {
    pub rank: usize,
    pub letters: Vec<i32>,
    /// `conjugator⁻¹ · original · conjugator == letters`.
    pub conjugator: Word,
}

impl CyclicWord {
    pub fn as_word(&self) -> Word {
        Word { rank: self.rank, letters: self.letters.clone() }
    }
}

fn least_rotation(core: &[i32]) -> usize {
    let n = core.len();
    let rot_cmp = |i: usize, j: usize| -> Ordering {
        for k in 0..n {
            match core[(i + k) % n].cmp(&core[(j + k) % n]) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    };
    (0..n).fold(0, |best, i| if rot_cmp(i, best) == Ordering::Less { i } else { best })
}

pub fn cyclic_reduce(w: &Word) -> CyclicWord {
    let (x, core) = w.strip();
    if core.is_empty() {
        return CyclicWord { rank: w.rank, letters: Vec::new(), conjugator: x };
    }
    let k = least_rotation(core);
    let mut letters = core[k..].to_vec();
    letters.extend_from_slice(&core[..k]);
    let prefix = Word { rank: w.rank, letters: core[..k].to_vec() };
    let conjugator = x.concat(&prefix).expect("same rank");
    CyclicWord { rank: w.rank, letters, conjugator }
}

/// Decides conjugacy by comparing canonical cyclic forms.
pub fn oracle_conjugate(u: &Word, v: &Word) -> Result<bool> {
    u.same_rank(v)?;
    Ok(cyclic_reduce(u).letters == cyclic_reduce(v).letters)
}

/// Some `h` with `conjugate(u, h) == v`, if `u` and `v` are conjugate.
///
/// The conjugator is `x_u · p · x_v⁻¹`, where `x_u`, `x_v` strip the
/// cancelling ends and `p` is the shortest prefix of `u`'s core whose
/// rotation gives `v`'s core.
pub fn conjugator(u: &Word, v: &Word) -> Result<Option<Word>> {
    u.same_rank(v)?;
    let (xu, cu) = u.strip();
    let (xv, cv) = v.strip();
    if cu.len() != cv.len() {
        return Ok(None);
    }
    let n = cu.len();
    for k in 0..n.max(1) {
        let matches = (0..n).all(|i| cu[(i + k) % n] == cv[i]);
        if matches {
            let p = Word { rank: u.rank, letters: cu[..k.min(n)].to_vec() };
            return Ok(Some(xu.concat(&p)?.concat(&xv.inverse())?));
        }
    }
    Ok(None)
}

/// Returns `(root, e)` with `w = root^e` and `e` maximal. The centralizer of
/// a nontrivial `w` is the cyclic group generated by `root`.
pub fn primitive_root(w: &Word) -> Result<(Word, u32)> {
    if w.is_empty() {
        return Err(Error::TrivialWord);
    }
    let (x, core) = w.strip();
    let n = core.len();
    let period = (1..=n).find(|&t| n % t == 0 && (t..n).all(|i| core[i] == core[i - t])).expect("n is a period");
    let piece = Word { rank: w.rank, letters: core[..period].to_vec() };
    let root = x.concat(&piece)?.concat(&x.inverse())?;
    Ok((root, (n / period) as u32))
}

/// `None` when the words are pairwise independent (no conjugate of one
/// commutes with another), otherwise the first offending pair `(i, j)`,
/// 0-based with `i < j`.
pub fn are_independent(ws: &[Word]) -> Result<Option<(usize, usize)>> {
    let roots = ws
        .iter()
        .map(|w| {
            if let Some(first) = ws.first() {
                first.same_rank(w)?;
            }
            primitive_root(w).map(|(r, _)| cyclic_reduce(&r).letters)
        })
        .collect::<Result<Vec<_>>>()?;
    let inverses: Vec<Vec<i32>> = ws
        .iter()
        .map(|w| {
            let (r, _) = primitive_root(w).expect("checked above");
            cyclic_reduce(&r.inverse()).letters
        })
        .collect();
    for i in 0..ws.len() {
        for j in i + 1..ws.len() {
            if roots[i] == roots[j] || roots[i] == inverses[j] {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}
