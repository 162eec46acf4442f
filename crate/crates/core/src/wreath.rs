//! Wreath products `(ℤ/N) ≀ Q` over the finite quotient `Q = G/K` of a
//! normal cover, and the extension of `σ: K → ℤ/N` to all of `G`.
//!
//! `Q` is never built as an abstract group. Its elements are the cover's
//! vertices (`v ↔ K·g_v` for the tree path `g_v`), the identity is vertex 0,
//! and `q_u · q_v = act(u, g_v)`. A wreath element stores its top as the
//! permutation `q ↦ t·q` of the vertex set, so the base is acted on by left
//! translation and
//!
//! ```text
//! (f₁, t₁)(f₂, t₂) = (q ↦ f₁(q) + f₂(t₁⁻¹q), t₁t₂).
//! ```

use crate::covers::CoverGraph;
use crate::error::{Error, Result};
use crate::homology::{ClassVector, Functional, HomologyBasis};
use crate::words::Word;

/// `Q = G/K` for a normal cover `K`.
pub struct FiniteQuotient {
    cover: CoverGraph,
    basis: HomologyBasis,
}

impl FiniteQuotient {
    pub fn new(cover: &CoverGraph) -> Result<FiniteQuotient> {
        if !cover.is_normal() {
            return Err(Error::NotNormal);
        }
        Ok(FiniteQuotient { cover: cover.clone(), basis: HomologyBasis::new(cover) })
    }

    pub fn cover(&self) -> &CoverGraph {
        &self.cover
    }

    pub fn basis(&self) -> &HomologyBasis {
        &self.basis
    }

    pub fn reps(&self) -> &[Word] {
        self.basis.coset_reps()
    }

    pub fn order(&self) -> usize {
        self.cover.degree()
    }

    /// Image of `g` in `Q`, as a vertex.
    pub fn project(&self, g: &Word) -> usize {
        self.cover.act(0, g)
    }

    /// `q_u · q_v`.
    pub fn multiply(&self, u: usize, v: usize) -> usize {
        self.cover.act(u, &self.reps()[v])
    }

    /// The permutation `q ↦ t·q`.
    pub fn translation(&self, t: usize) -> Vec<u32> {
        (0..self.order()).map(|v| self.multiply(t, v) as u32).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WreathElement {
    pub modulus: u64,
    pub base: Vec<u64>,
    pub top: Vec<u32>,
}

fn invert_perm(p: &[u32]) -> Vec<u32> {
    let mut inv = vec![0u32; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x as usize] = i as u32;
    }
    inv
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

impl WreathElement {
    pub fn identity(modulus: u64, size: usize) -> WreathElement {
        WreathElement { modulus, base: vec![0; size], top: (0..size as u32).collect() }
    }

    pub fn base_only(modulus: u64, base: Vec<u64>) -> WreathElement {
        let size = base.len();
        let base = base.into_iter().map(|x| x % modulus).collect();
        WreathElement { modulus, base, top: (0..size as u32).collect() }
    }

    pub fn is_base(&self) -> bool {
        self.top.iter().enumerate().all(|(i, &t)| i as u32 == t)
    }

    fn same_shape(&self, other: &WreathElement) -> Result<()> {
        if self.modulus != other.modulus || self.base.len() != other.base.len() {
            return Err(Error::ShapeMismatch);
        }
        Ok(())
    }

    /// Additive order of the base.
    fn base_order(&self) -> u64 {
        let g = self.base.iter().fold(self.modulus, |g, &x| gcd(g, x));
        self.modulus / g
    }
}

pub fn wreath_multiply(x: &WreathElement, y: &WreathElement) -> Result<WreathElement> {
    x.same_shape(y)?;
    let n = x.modulus;
    let x_inv = invert_perm(&x.top);
    let base = (0..x.base.len()).map(|q| (x.base[q] + y.base[x_inv[q] as usize]) % n).collect();
    let top = y.top.iter().map(|&q| x.top[q as usize]).collect();
    Ok(WreathElement { modulus: n, base, top })
}

pub fn wreath_inverse(x: &WreathElement) -> WreathElement {
    let n = x.modulus;
    let base = x.top.iter().map(|&t| (n - x.base[t as usize] % n) % n).collect();
    WreathElement { modulus: n, base, top: invert_perm(&x.top) }
}

pub fn wreath_power(x: &WreathElement, mut k: u64) -> WreathElement {
    let mut acc = WreathElement::identity(x.modulus, x.base.len());
    let mut sq = x.clone();
    while k > 0 {
        if k & 1 == 1 {
            acc = wreath_multiply(&acc, &sq).expect("same shape");
        }
        sq = wreath_multiply(&sq, &sq).expect("same shape");
        k >>= 1;
    }
    acc
}

fn perm_order(p: &[u32]) -> u64 {
    let mut seen = vec![false; p.len()];
    let mut order = 1u64;
    for s in 0..p.len() {
        let mut len = 0u64;
        let mut v = s;
        while !seen[v] {
            seen[v] = true;
            v = p[v] as usize;
            len += 1;
        }
        if len > 0 {
            order = lcm(order, len);
        }
    }
    order
}

/// Order of `x`: with `r` the order of the top, `x^r` lies in the base and
/// the answer is `r` times its additive order.
pub fn wreath_order(x: &WreathElement) -> u64 {
    let r = perm_order(&x.top);
    r.saturating_mul(wreath_power(x, r).base_order())
}

/// Whether the base elements `x` and `y` are conjugate in `(ℤ/N) ≀ Q`,
/// i.e. some left translation of `Q` carries `x` to `y`.
pub fn base_conjugate_test(quotient: &FiniteQuotient, x: &WreathElement, y: &WreathElement) -> Result<bool> {
    x.same_shape(y)?;
    if x.base.len() != quotient.order() || !x.is_base() || !y.is_base() {
        return Err(Error::ShapeMismatch);
    }
    Ok((0..quotient.order()).any(|t| {
        let shift = quotient.translation(t);
        (0..shift.len()).all(|q| x.base[shift[q] as usize] == y.base[q])
    }))
}

/// The homomorphism `G → (ℤ/N) ≀ Q` extending `σ = φ mod N` on `K`.
pub struct ExtendedHom<'a> {
    quotient: &'a FiniteQuotient,
    functional: Functional,
    residues: Vec<i64>,
    modulus: u64,
}

/// Largest modulus accepted, so that sums of two residues never overflow.
pub const MAX_MODULUS: u64 = 1 << 62;

impl<'a> ExtendedHom<'a> {
    pub fn new(quotient: &'a FiniteQuotient, functional: Functional, modulus: u64) -> Result<Self> {
        if functional.dim() != quotient.basis.dim() {
            return Err(Error::DimensionMismatch(quotient.basis.dim(), functional.dim()));
        }
        if modulus == 0 || modulus > MAX_MODULUS {
            return Err(Error::BadArgument(format!("modulus {modulus} out of range")));
        }
        let residues = functional.0.iter().map(|&x| x.rem_euclid(modulus as i64)).collect();
        Ok(ExtendedHom { quotient, functional, residues, modulus })
    }

    pub fn quotient(&self) -> &FiniteQuotient {
        self.quotient
    }

    pub fn functional(&self) -> &Functional {
        &self.functional
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    fn sigma_of_class(&self, class: &ClassVector) -> u64 {
        let n = self.modulus as i128;
        let s = class.entries.iter().fold(0i128, |s, &(i, x)| (s + self.residues[i as usize] as i128 * x as i128) % n);
        s.rem_euclid(n) as u64
    }

    /// `σ` of the loop read off `parts` in sequence from the basepoint.
    fn sigma_of_path(&self, parts: &[&[i32]]) -> u64 {
        let letters: Vec<i32> = parts.iter().flat_map(|p| p.iter().copied()).collect();
        let (end, class) = self.quotient.basis.trace(0, &letters, 1);
        debug_assert_eq!(end, 0, "path must close");
        self.sigma_of_class(&class)
    }

    /// `σ(k)` for `k ∈ K`, `None` when `k ∉ K`.
    pub fn sigma(&self, k: &Word) -> Option<u64> {
        let class = self.quotient.basis.loop_class(0, k)?;
        Some(self.sigma_of_class(&class))
    }

    pub fn eval(&self, g: &Word) -> Result<WreathElement> {
        let cover = self.quotient.cover();
        if g.rank() != cover.rank() {
            return Err(Error::RankMismatch(cover.rank(), g.rank()));
        }
        let eta = self.quotient.project(g);
        let top = self.quotient.translation(eta);
        let top_inv = invert_perm(&top);
        let reps = self.quotient.reps();
        // base(q) = σ(g_q⁻¹ · g · g_{η(g)⁻¹q})
        let base = (0..self.quotient.order())
            .map(|q| {
                let back = reps[q].inverse();
                let fwd = &reps[top_inv[q] as usize];
                self.sigma_of_path(&[back.letters(), g.letters(), fwd.letters()])
            })
            .collect();
        Ok(WreathElement { modulus: self.modulus, base, top })
    }

    /// `d_b`: gcd of the functional over the elevations of `b^n`, `n = deg(b)`,
    /// one per centralizer orbit; 0 when all vanish.
    pub fn d_value(&self, b: &Word) -> Result<u64> {
        if b.is_empty() {
            return Err(Error::TrivialWord);
        }
        let cover = self.quotient.cover();
        let n = cover.degree_of(b);
        let verts = crate::covers::root_orbit_vertices(cover, b)?;
        Ok(verts.into_iter().fold(0u64, |g, v| {
            let class = self.quotient.basis.trace(v, b.letters(), n).1;
            gcd(g, self.functional.eval_wide(&class).unsigned_abs() as u64)
        }))
    }
}

/// `n · lcm(N, d) / d`, reading `lcm(N, 0)/0` as 1.
pub fn predicted_order(n: u64, modulus: u64, d: u64) -> u64 {
    lcm(modulus, d).checked_div(d).map_or(n, |k| n * k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn swap_a() -> CoverGraph {
        CoverGraph::new(2, vec![vec![1, 0], vec![0, 1]]).unwrap()
    }

    #[test]
    fn trivial_quotient_is_sigma() {
        let q = FiniteQuotient::new(&CoverGraph::rose(2).unwrap()).unwrap();
        let h = ExtendedHom::new(&q, Functional(vec![1, 0]), 5).unwrap();
        let x = h.eval(&w("a")).unwrap();
        assert_eq!(x.base, vec![1]);
        assert!(x.is_base());
        assert_eq!(h.eval(&w("1")).unwrap(), WreathElement::identity(5, 1));
    }

    #[test]
    fn swap_quotient_square() {
        let q = FiniteQuotient::new(&swap_a()).unwrap();
        // basis (0,b), (1,a), (1,b); unit on the non-tree a-edge
        let h = ExtendedHom::new(&q, Functional(vec![0, 1, 0]), 4).unwrap();
        let x = h.eval(&w("aa")).unwrap();
        assert_eq!(x.base, vec![1, 1]);
        assert!(x.is_base());
        assert_eq!(h.eval(&w("1")).unwrap(), WreathElement::identity(4, 2));
        let y = h.eval(&w("a")).unwrap();
        assert!(!y.is_base());
        assert_eq!(wreath_multiply(&y, &y).unwrap(), x);
    }

    #[test]
    fn group_laws() {
        let x = WreathElement { modulus: 3, base: vec![1, 2, 0], top: vec![1, 2, 0] };
        let e = WreathElement::identity(3, 3);
        assert_eq!(wreath_multiply(&x, &e).unwrap(), x);
        assert_eq!(wreath_multiply(&x, &wreath_inverse(&x)).unwrap(), e);
        assert_eq!(wreath_multiply(&wreath_inverse(&x), &x).unwrap(), e);
        let p = WreathElement::base_only(2, vec![1, 0]);
        let r = WreathElement::base_only(2, vec![0, 1]);
        assert_eq!(wreath_multiply(&p, &r).unwrap().base, vec![1, 1]);
        let other = WreathElement::identity(2, 3);
        assert_eq!(wreath_multiply(&p, &other), Err(Error::ShapeMismatch));
    }

    #[test]
    fn order_examples() {
        assert_eq!(wreath_order(&WreathElement::identity(6, 2)), 1);
        assert_eq!(wreath_order(&WreathElement::base_only(6, vec![4])), 3);
        // top a 2-cycle, base summing to 1 mod 5: square is (1,1), order 2·5
        let x = WreathElement { modulus: 5, base: vec![1, 0], top: vec![1, 0] };
        assert_eq!(wreath_order(&x), 10);
    }

    #[test]
    fn predicted_order_examples() {
        assert_eq!(predicted_order(1, 7, 1), 7);
        assert_eq!(predicted_order(3, 6, 0), 3);
        assert_eq!(predicted_order(2, 6, 4), 6);
    }

    #[test]
    fn d_value_examples() {
        let q = FiniteQuotient::new(&CoverGraph::rose(2).unwrap()).unwrap();
        let h = ExtendedHom::new(&q, Functional(vec![1, 0]), 5).unwrap();
        assert_eq!(h.d_value(&w("a")).unwrap(), 1);
        assert_eq!(h.d_value(&w("aa")).unwrap(), 2);
        assert_eq!(h.d_value(&w("b")).unwrap(), 0);
        assert_eq!(h.d_value(&w("1")), Err(Error::TrivialWord));
    }

    #[test]
    fn base_conjugacy_in_c2_wreath_c2() {
        let q = FiniteQuotient::new(&swap_a()).unwrap();
        let e = |b: Vec<u64>| WreathElement::base_only(2, b);
        assert!(base_conjugate_test(&q, &e(vec![1, 0]), &e(vec![1, 0])).unwrap());
        assert!(base_conjugate_test(&q, &e(vec![1, 0]), &e(vec![0, 1])).unwrap());
        assert!(!base_conjugate_test(&q, &e(vec![1, 0]), &e(vec![1, 1])).unwrap());
    }

    #[test]
    fn non_normal_quotient_rejected() {
        let s3 = CoverGraph::new(2, vec![vec![1, 0, 2], vec![0, 2, 1]]).unwrap();
        assert!(matches!(FiniteQuotient::new(&s3), Err(Error::NotNormal)));
    }
}
