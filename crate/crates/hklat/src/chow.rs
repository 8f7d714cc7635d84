//! Graded-ring Schubert/Chern calculus on ℙⁿ, G(2,4), and their products —
//! just enough intersection theory to evaluate Lagrangian degeneracy-locus
//! classes of the form c₁c₂ − 2c₃.
//!
//! Rings are finitely presented with explicit integer structure constants:
//! ℙⁿ in the monomial basis hᵏ, G(2,4) in the six Schubert classes of the
//! 2×2 box, and products in the Künneth pair basis. All coefficients are
//! exact integers.

use crate::{bi, Error, Result};
use num::bigint::BigInt;
use num::{One, Zero};
use std::sync::Arc;

/// A finitely presented graded ring with a distinguished point class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChowRing {
    labels: Vec<String>,
    degrees: Vec<usize>,
    /// mult[i][j]: sparse expansion of basisᵢ·basisⱼ.
    mult: Vec<Vec<Vec<(usize, i64)>>>,
    dim: usize,
    point: usize,
    product_of: Option<(Arc<ChowRing>, Arc<ChowRing>)>,
}

impl ChowRing {
    pub fn basis_len(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.degrees[i]
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point_label(&self) -> &str {
        &self.labels[self.point]
    }
}

/// The Chow ring of ℙⁿ: basis 1, h, …, hⁿ with hᵃ·hᵇ = hᵃ⁺ᵇ (0 past hⁿ).
pub fn ring_pn(n: usize) -> Result<Arc<ChowRing>> {
    if n < 1 {
        return Err(Error::OutOfRange("projective space needs n ≥ 1".into()));
    }
    let labels: Vec<String> = (0..=n)
        .map(|k| match k {
            0 => "1".to_string(),
            1 => "h".to_string(),
            _ => format!("h^{}", k),
        })
        .collect();
    let degrees: Vec<usize> = (0..=n).collect();
    let mut mult = vec![vec![Vec::new(); n + 1]; n + 1];
    for i in 0..=n {
        for j in 0..=n {
            if i + j <= n {
                mult[i][j] = vec![(i + j, 1)];
            }
        }
    }
    Ok(Arc::new(ChowRing { labels, degrees, mult, dim: n, point: n, product_of: None }))
}

/// The Chow ring of G(2,4) in the Schubert basis 1, σ₁, σ₂, σ₁₁, σ₂₁, σ₂₂:
/// σ₁² = σ₂ + σ₁₁, σ₁σ₂ = σ₁σ₁₁ = σ₂₁, σ₂² = σ₁₁² = σ₂₂, σ₂σ₁₁ = 0,
/// σ₁σ₂₁ = σ₂₂.
pub fn ring_g24() -> Arc<ChowRing> {
    let labels: Vec<String> =
        ["1", "s1", "s2", "s11", "s21", "s22"].iter().map(|s| s.to_string()).collect();
    let degrees = vec![0, 1, 2, 2, 3, 4];
    let n = 6;
    let mut mult = vec![vec![Vec::new(); n]; n];
    let mut set = |i: usize, j: usize, val: Vec<(usize, i64)>| {
        mult[i][j] = val.clone();
        mult[j][i] = val;
    };
    for k in 0..n {
        set(0, k, vec![(k, 1)]);
    }
    set(1, 1, vec![(2, 1), (3, 1)]);
    set(1, 2, vec![(4, 1)]);
    set(1, 3, vec![(4, 1)]);
    set(1, 4, vec![(5, 1)]);
    set(1, 5, vec![]);
    set(2, 2, vec![(5, 1)]);
    set(2, 3, vec![]);
    set(2, 4, vec![]);
    set(2, 5, vec![]);
    set(3, 3, vec![(5, 1)]);
    set(3, 4, vec![]);
    set(3, 5, vec![]);
    set(4, 4, vec![]);
    set(4, 5, vec![]);
    set(5, 5, vec![]);
    Arc::new(ChowRing { labels, degrees, mult, dim: 4, point: 5, product_of: None })
}

/// Künneth product ring: basis pairs labeled "a|b", degrees added, structure
/// constants multiplied factor-wise.
pub fn ring_product(a: &Arc<ChowRing>, b: &Arc<ChowRing>) -> Arc<ChowRing> {
    let na = a.basis_len();
    let nb = b.basis_len();
    let idx = |i: usize, j: usize| i * nb + j;
    let mut labels = Vec::with_capacity(na * nb);
    let mut degrees = Vec::with_capacity(na * nb);
    for i in 0..na {
        for j in 0..nb {
            labels.push(format!("{}|{}", a.labels[i], b.labels[j]));
            degrees.push(a.degrees[i] + b.degrees[j]);
        }
    }
    let mut mult = vec![vec![Vec::new(); na * nb]; na * nb];
    for i1 in 0..na {
        for j1 in 0..nb {
            for i2 in 0..na {
                for j2 in 0..nb {
                    let mut val = Vec::new();
                    for &(ka, ca) in &a.mult[i1][i2] {
                        for &(kb, cb) in &b.mult[j1][j2] {
                            val.push((idx(ka, kb), ca * cb));
                        }
                    }
                    mult[idx(i1, j1)][idx(i2, j2)] = val;
                }
            }
        }
    }
    Arc::new(ChowRing {
        labels,
        degrees,
        mult,
        dim: a.dim + b.dim,
        point: idx(a.point, b.point),
        product_of: Some((a.clone(), b.clone())),
    })
}

/// An element of a [`ChowRing`] with integer coefficients.
#[derive(Debug, Clone)]
pub struct ChowClass {
    pub ring: Arc<ChowRing>,
    coeffs: Vec<BigInt>,
}

impl PartialEq for ChowClass {
    fn eq(&self, other: &Self) -> bool {
        *self.ring == *other.ring && self.coeffs == other.coeffs
    }
}
impl Eq for ChowClass {}

fn same_ring(a: &ChowClass, b: &ChowClass) -> Result<()> {
    if *a.ring != *b.ring {
        return Err(Error::ShapeMismatch("classes live in different rings".into()));
    }
    Ok(())
}

impl ChowClass {
    pub fn zero(ring: &Arc<ChowRing>) -> ChowClass {
        ChowClass { ring: ring.clone(), coeffs: vec![BigInt::zero(); ring.basis_len()] }
    }

    pub fn one(ring: &Arc<ChowRing>) -> ChowClass {
        let mut c = ChowClass::zero(ring);
        c.coeffs[0] = BigInt::one();
        c
    }

    /// The basis class with the given label.
    pub fn basis(ring: &Arc<ChowRing>, label: &str) -> Result<ChowClass> {
        let i = ring
            .labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::OutOfRange(format!("no basis class '{}'", label)))?;
        let mut c = ChowClass::zero(ring);
        c.coeffs[i] = BigInt::one();
        Ok(c)
    }

    pub fn coeff(&self, label: &str) -> Result<&BigInt> {
        let i = self
            .ring
            .labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::OutOfRange(format!("no basis class '{}'", label)))?;
        Ok(&self.coeffs[i])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &ChowClass) -> Result<ChowClass> {
        same_ring(self, other)?;
        let coeffs =
            self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(ChowClass { ring: self.ring.clone(), coeffs })
    }

    pub fn sub(&self, other: &ChowClass) -> Result<ChowClass> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ChowClass {
        ChowClass { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, k: i64) -> ChowClass {
        ChowClass {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| c * bi(k)).collect(),
        }
    }

    pub fn mul(&self, other: &ChowClass) -> Result<ChowClass> {
        same_ring(self, other)?;
        let mut out = ChowClass::zero(&self.ring);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for &(k, c) in &self.ring.mult[i][j] {
                    out.coeffs[k] += &ab * bi(c);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<ChowClass> {
        let mut acc = ChowClass::one(&self.ring);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Homogeneous component of the given degree.
    pub fn component(&self, degree: usize) -> ChowClass {
        let mut out = ChowClass::zero(&self.ring);
        for i in 0..self.coeffs.len() {
            if self.ring.degrees[i] == degree {
                out.coeffs[i] = self.coeffs[i].clone();
            }
        }
        out
    }

    pub fn is_homogeneous(&self, degree: usize) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| c.is_zero() || self.ring.degrees[i] == degree)
    }

    /// Multiplicative inverse of a class with constant term 1, by the
    /// geometric series truncated at the ring dimension.
    pub fn invert(&self) -> Result<ChowClass> {
        if !self.coeffs[0].is_one() {
            return Err(Error::ShapeMismatch("inversion needs constant term 1".into()));
        }
        let m = self.sub(&ChowClass::one(&self.ring))?;
        let mut acc = ChowClass::one(&self.ring);
        let mut pw = ChowClass::one(&self.ring);
        for k in 1..=self.ring.dim {
            pw = pw.mul(&m)?;
            if k % 2 == 1 {
                acc = acc.sub(&pw)?;
            } else {
                acc = acc.add(&pw)?;
            }
        }
        Ok(acc)
    }
}

impl std::fmt::Display for ChowClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if self.ring.degrees[i] == 0 {
                parts.push(format!("{}", c));
            } else if c.is_one() {
                parts.push(self.ring.labels[i].clone());
            } else {
                parts.push(format!("{}*{}", c, self.ring.labels[i]));
            }
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Coefficient of the point class (the degree of the zero-cycle part).
pub fn integrate(x: &ChowClass) -> BigInt {
    x.coeffs[x.ring.point].clone()
}

/// Pull a class back from the left factor of a product ring.
pub fn pull_left(prod: &Arc<ChowRing>, x: &ChowClass) -> Result<ChowClass> {
    let (a, b) = prod
        .product_of
        .as_ref()
        .ok_or_else(|| Error::ShapeMismatch("not a product ring".into()))?;
    if *x.ring != **a {
        return Err(Error::ShapeMismatch("class is not in the left factor".into()));
    }
    let nb = b.basis_len();
    let mut out = ChowClass::zero(prod);
    for (i, c) in x.coeffs.iter().enumerate() {
        out.coeffs[i * nb] = c.clone();
    }
    Ok(out)
}

/// Pull a class back from the right factor of a product ring.
pub fn pull_right(prod: &Arc<ChowRing>, x: &ChowClass) -> Result<ChowClass> {
    let (a, b) = prod
        .product_of
        .as_ref()
        .ok_or_else(|| Error::ShapeMismatch("not a product ring".into()))?;
    if *x.ring != **b {
        return Err(Error::ShapeMismatch("class is not in the right factor".into()));
    }
    let nb = b.basis_len();
    let _ = a;
    let mut out = ChowClass::zero(prod);
    for (j, c) in x.coeffs.iter().enumerate() {
        out.coeffs[j] = c.clone();
    }
    let _ = nb;
    Ok(out)
}

/// Total Chern class of a bundle of known rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChernClass {
    pub rank: usize,
    pub total: ChowClass,
}

impl ChernClass {
    /// Validate c₀ = 1 and vanishing above the rank.
    pub fn new(rank: usize, total: ChowClass) -> Result<ChernClass> {
        if !total.coeffs[0].is_one() {
            return Err(Error::RankMismatch("total Chern class must start at 1".into()));
        }
        for i in 0..total.coeffs.len() {
            if total.ring.degrees[i] > rank && !total.coeffs[i].is_zero() {
                return Err(Error::RankMismatch(format!(
                    "component of degree {} exceeds rank {}",
                    total.ring.degrees[i], rank
                )));
            }
        }
        Ok(ChernClass { rank, total })
    }

    pub fn ring(&self) -> &Arc<ChowRing> {
        &self.total.ring
    }

    /// The k-th Chern class as a homogeneous element.
    pub fn c(&self, k: usize) -> ChowClass {
        self.total.component(k)
    }
}

/// The trivial bundle of the given rank (total class 1).
pub fn chern_trivial(ring: &Arc<ChowRing>, rank: usize) -> ChernClass {
    ChernClass { rank, total: ChowClass::one(ring) }
}

/// A line bundle with first Chern class `c1` (must be homogeneous of
/// degree 1).
pub fn chern_line(c1: &ChowClass) -> Result<ChernClass> {
    if !c1.is_homogeneous(1) {
        return Err(Error::ShapeMismatch("line bundle class must be degree 1".into()));
    }
    let total = ChowClass::one(&c1.ring).add(c1)?;
    Ok(ChernClass { rank: 1, total })
}

/// Whitney sum: c(E ⊕ F) = c(E)·c(F).
pub fn chern_sum(e: &ChernClass, f: &ChernClass) -> Result<ChernClass> {
    Ok(ChernClass { rank: e.rank + f.rank, total: e.total.mul(&f.total)? })
}

/// Dual bundle: cₖ(E∨) = (−1)ᵏ cₖ(E).
pub fn chern_dual(e: &ChernClass) -> ChernClass {
    let mut total = ChowClass::zero(&e.total.ring);
    for i in 0..e.total.coeffs.len() {
        let d = e.total.ring.degrees[i];
        total.coeffs[i] = if d % 2 == 0 {
            e.total.coeffs[i].clone()
        } else {
            -&e.total.coeffs[i]
        };
    }
    ChernClass { rank: e.rank, total }
}

fn binom(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * bi(n - i) / bi(i + 1);
    }
    acc
}

/// Twist by a line bundle: cₖ(E ⊗ L) = Σⱼ C(r−j, k−j) cⱼ(E) c₁(L)^{k−j}.
pub fn chern_twist(e: &ChernClass, l: &ChowClass) -> Result<ChernClass> {
    same_ring(&e.total, l)?;
    if !l.is_homogeneous(1) {
        return Err(Error::ShapeMismatch("twist class must be degree 1".into()));
    }
    let r = e.rank as i64;
    let ring = &e.total.ring;
    let mut total = ChowClass::one(ring);
    let max_k = e.rank.min(ring.dim);
    for k in 1..=max_k {
        let mut ck = ChowClass::zero(ring);
        for j in 0..=k {
            let b = binom(r - j as i64, (k - j) as i64);
            if b.is_zero() {
                continue;
            }
            let term = e.c(j).mul(&l.pow((k - j) as u32)?)?;
            let mut scaled = term;
            for c in scaled.coeffs.iter_mut() {
                *c = &*c * &b;
            }
            ck = ck.add(&scaled)?;
        }
        total = total.add(&ck)?;
    }
    ChernClass::new(e.rank, total)
}

/// ∧² of a rank-3 bundle via ∧²E ≅ E∨ ⊗ det E.
pub fn chern_lambda2_rank3(e: &ChernClass) -> Result<ChernClass> {
    if e.rank != 3 {
        return Err(Error::RankMismatch(format!(
            "lambda² shortcut needs rank 3, got {}",
            e.rank
        )));
    }
    let c1 = e.c(1);
    chern_twist(&chern_dual(e), &c1)
}

/// Middle term of a short exact sequence: c(mid) = c(sub)·c(quot).
pub fn chern_from_sequence(sub: &ChernClass, quot: &ChernClass) -> Result<ChernClass> {
    chern_sum(sub, quot)
}

/// Quotient term of a short exact sequence: c(quot) = c(mid)/c(sub).
pub fn chern_quotient(mid: &ChernClass, sub: &ChernClass) -> Result<ChernClass> {
    if sub.rank > mid.rank {
        return Err(Error::RankMismatch("sub-bundle rank exceeds the middle term".into()));
    }
    let total = mid.total.mul(&sub.total.invert()?)?;
    ChernClass::new(mid.rank - sub.rank, total)
}

/// Lagrangian degeneracy-locus class c₁c₂ − 2c₃ of the stored bundle.
pub fn lagrangian_d2(e: &ChernClass) -> Result<ChowClass> {
    if e.rank < 3 {
        return Err(Error::RankTooSmall);
    }
    e.c(1).mul(&e.c(2))?.sub(&e.c(3).scale(2))
}

/// The same degeneracy class evaluated on the dual bundle; the two differ
/// by a global sign in odd total degree.
pub fn lagrangian_d2_dual(e: &ChernClass) -> Result<ChowClass> {
    lagrangian_d2(&chern_dual(e))
}

/// Tangent bundle of ℙⁿ: c = (1+h)ⁿ⁺¹ truncated, rank n.
pub fn tangent_pn(ring: &Arc<ChowRing>) -> Result<ChernClass> {
    if ring.product_of.is_some() || ring.labels.get(1).map(|s| s.as_str()) != Some("h") {
        return Err(Error::ShapeMismatch("not a projective-space ring".into()));
    }
    let n = ring.dim;
    let h = ChowClass::basis(ring, "h")?;
    let total = ChowClass::one(ring).add(&h)?.pow((n + 1) as u32)?;
    ChernClass::new(n, total)
}

/// Tautological rank-2 sub-bundle U on G(2,4): c = 1 − σ₁ + σ₁₁.
pub fn taut_sub_g24(ring: &Arc<ChowRing>) -> Result<ChernClass> {
    let s1 = ChowClass::basis(ring, "s1")?;
    let s11 = ChowClass::basis(ring, "s11")?;
    let total = ChowClass::one(ring).sub(&s1)?.add(&s11)?;
    ChernClass::new(2, total)
}

/// Tautological rank-2 quotient bundle Q on G(2,4): c = 1 + σ₁ + σ₂.
pub fn taut_quot_g24(ring: &Arc<ChowRing>) -> Result<ChernClass> {
    let s1 = ChowClass::basis(ring, "s1")?;
    let s2 = ChowClass::basis(ring, "s2")?;
    let total = ChowClass::one(ring).add(&s1)?.add(&s2)?;
    ChernClass::new(2, total)
}

/// Tangent bundle of G(2,4) = Hom(U, Q):
/// c = 1 + 4σ₁ + 7σ₂ + 7σ₁₁ + 12σ₂₁ + 6σ₂₂.
///
/// The table is pinned by two independent identities verified in the test
/// suite: the quadric sequence c(Tℙ⁵)|_G = c(T_G)·(1+2σ₁), and the Euler
/// number ∫c₄ = 6.
pub fn tangent_g24(ring: &Arc<ChowRing>) -> Result<ChernClass> {
    let mut total = ChowClass::one(ring);
    for (label, k) in [("s1", 4), ("s2", 7), ("s11", 7), ("s21", 12), ("s22", 6)] {
        total = total.add(&ChowClass::basis(ring, label)?.scale(k))?;
    }
    ChernClass::new(4, total)
}

/// Dual of the affine tangent bundle of the cone over G(2,4) ⊂ ℙ⁵:
/// rank 5 with total class 1/(1 − σ₁).
///
/// Derivation: the cone tangent T̂ = U∧W sits in 0 → ∧²U → T̂ → U⊗Q → 0 and
/// U⊗Q = T_G ⊗ ∧²U, giving c(T̂∨) = (1+σ₁)·c(T_G∨ ⊗ O(1)) = 1/(1−σ₁); the
/// test suite checks that identity against the tangent table.
pub fn affine_tangent_dual_g24(ring: &Arc<ChowRing>) -> Result<ChernClass> {
    let s1 = ChowClass::basis(ring, "s1")?;
    let total = ChowClass::one(ring).sub(&s1)?.invert()?;
    ChernClass::new(5, total)
}

/// Rank-4 bundle U ⊕ Q∨ on G(2,4) (the restriction of the relevant
/// projective tangent bundle to a Grassmannian fixed-locus component).
pub fn t3_minus(ring: &Arc<ChowRing>) -> Result<ChernClass> {
    chern_sum(&taut_sub_g24(ring)?, &chern_dual(&taut_quot_g24(ring)?))
}

/// The doubled bundle (∧²(T_ℙ³(−1)))^⊕2 on ℙ³ whose degeneracy class counts
/// the 16 distinguished points; built by twisting the tangent bundle first
/// and then taking ∧².
pub fn t1_plus(ring: &Arc<ChowRing>) -> Result<ChernClass> {
    let t = tangent_pn(ring)?;
    let h = ChowClass::basis(ring, "h")?;
    let tm1 = chern_twist(&t, &h.neg())?;
    let w = chern_lambda2_rank3(&tm1)?;
    chern_sum(&w, &w)
}

/// The alternative reading (∧²T_ℙ³)(−1): wedge first, twist second.
/// Exposed so the two parses can be compared; c₁ = 5h for this one.
pub fn t1_plus_wedge_first(ring: &Arc<ChowRing>) -> Result<ChernClass> {
    let t = tangent_pn(ring)?;
    // ∧² of rank 3 via the dual-twist identity applies to any rank-3 bundle
    let w = chern_lambda2_rank3(&t)?;
    let h = ChowClass::basis(ring, "h")?;
    chern_twist(&w, &h.neg())
}

/// Bundles on ℙ¹ × G(2,4) used by the Segre fixed-locus computation.
pub struct SegreBundles {
    pub ring: Arc<ChowRing>,
    /// The literal rank-7 middle term of the displayed sequence:
    /// sub = π₁*O(−1) ⊕ π₂*T∨_G, quot = π₁*O(1) ⊕ π₂*O_G(1).
    pub literal: ChernClass,
    /// The rank-6 dual affine tangent bundle of the Segre-embedded product,
    /// from 0 → L₁L₂ → L₁⊗T̂_G ⊕ W⁺⊗L₂ → T̂_X → 0 dualized.
    pub derived: ChernClass,
}

/// Assemble both readings of the tangent-restriction bundle on ℙ¹×G(2,4).
pub fn segre_tangent_class() -> Result<SegreBundles> {
    let p1 = ring_pn(1)?;
    let g = ring_g24();
    let prod = ring_product(&p1, &g);
    let t = pull_left(&prod, &ChowClass::basis(&p1, "h")?)?;
    let s1 = pull_right(&prod, &ChowClass::basis(&g, "s1")?)?;

    // literal reading of the displayed sub/quotient
    let tg_dual = {
        let on_g = chern_dual(&tangent_g24(&g)?);
        ChernClass::new(4, pull_right(&prod, &on_g.total)?)?
    };
    let sub = chern_sum(&chern_line(&t.neg())?, &tg_dual)?;
    let quot = chern_sum(&chern_line(&t)?, &chern_line(&s1)?)?;
    let literal = chern_from_sequence(&sub, &quot)?;

    // derived reading: dual affine tangent of the Segre embedding
    let that_dual = {
        let on_g = affine_tangent_dual_g24(&g)?;
        ChernClass::new(5, pull_right(&prod, &on_g.total)?)?
    };
    let a = chern_twist(&that_dual, &t)?; // T̂_G∨ ⊗ L₁∨
    let b = chern_sum(&chern_line(&s1)?, &chern_line(&s1)?)?; // (W⁺)∨ ⊗ L₂∨
    let mid = chern_sum(&a, &b)?;
    let l1l2 = chern_line(&t.add(&s1)?)?; // L₁∨ ⊗ L₂∨
    let derived = chern_quotient(&mid, &l1l2)?;

    Ok(SegreBundles { ring: prod, literal, derived })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Split-bundle oracle: the exact total class of ⊕ᵢ O(lᵢ).
    fn split_total(ring: &Arc<ChowRing>, lines: &[ChowClass]) -> ChowClass {
        let mut acc = ChowClass::one(ring);
        for l in lines {
            acc = acc.mul(&ChowClass::one(ring).add(l).unwrap()).unwrap();
        }
        acc
    }

    #[test]
    fn pn_ring_basics() {
        let p3 = ring_pn(3).unwrap();
        let h = ChowClass::basis(&p3, "h").unwrap();
        let h3 = h.pow(3).unwrap();
        assert_eq!(integrate(&h3), bi(1));
        assert!(h.pow(4).unwrap().is_zero());
        assert_eq!(format!("{}", h3), "h^3");
    }

    #[test]
    fn g24_ring_table() {
        let g = ring_g24();
        let s1 = ChowClass::basis(&g, "s1").unwrap();
        let s2 = ChowClass::basis(&g, "s2").unwrap();
        let s11 = ChowClass::basis(&g, "s11").unwrap();
        let s21 = ChowClass::basis(&g, "s21").unwrap();
        let s22 = ChowClass::basis(&g, "s22").unwrap();
        assert_eq!(s1.mul(&s1).unwrap(), s2.add(&s11).unwrap());
        assert_eq!(s1.mul(&s2).unwrap(), s21);
        assert_eq!(s1.mul(&s11).unwrap(), s21);
        assert_eq!(s2.mul(&s2).unwrap(), s22);
        assert_eq!(s11.mul(&s11).unwrap(), s22);
        assert!(s2.mul(&s11).unwrap().is_zero());
        assert_eq!(s1.mul(&s21).unwrap(), s22);
        // degree of the Grassmannian: σ₁⁴ = 2·point
        assert_eq!(integrate(&s1.pow(4).unwrap()), bi(2));
        // σ₁²·σ₁₁ = σ₂₂
        assert_eq!(integrate(&s1.pow(2).unwrap().mul(&s11).unwrap()), bi(1));
    }

    #[test]
    fn g24_ring_is_commutative_and_associative() {
        let g = ring_g24();
        let n = g.basis_len();
        let cls: Vec<ChowClass> = (0..n)
            .map(|i| ChowClass::basis(&g, &g.label(i).to_string()).unwrap())
            .collect();
        for a in &cls {
            for b in &cls {
                assert_eq!(a.mul(b).unwrap(), b.mul(a).unwrap());
                for c in &cls {
                    assert_eq!(
                        a.mul(b).unwrap().mul(c).unwrap(),
                        a.mul(&b.mul(c).unwrap()).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn product_ring_point_class() {
        let p1 = ring_pn(1).unwrap();
        let p2 = ring_pn(2).unwrap();
        let prod = ring_product(&p1, &p2);
        let h1 = pull_left(&prod, &ChowClass::basis(&p1, "h").unwrap()).unwrap();
        let h2 = pull_right(&prod, &ChowClass::basis(&p2, "h").unwrap()).unwrap();
        let top = h1.mul(&h2.pow(2).unwrap()).unwrap();
        assert_eq!(integrate(&top), bi(1));
        assert!(h1.pow(2).unwrap().is_zero());
    }

    #[test]
    fn tangent_p3_total_class() {
        let p3 = ring_pn(3).unwrap();
        let t = tangent_pn(&p3).unwrap();
        let h = ChowClass::basis(&p3, "h").unwrap();
        let expect = ChowClass::one(&p3)
            .add(&h.scale(4))
            .unwrap()
            .add(&h.pow(2).unwrap().scale(6))
            .unwrap()
            .add(&h.pow(3).unwrap().scale(4))
            .unwrap();
        assert_eq!(t.total, expect);
    }

    #[test]
    fn tangent_g24_pinned_by_quadric_sequence() {
        // G(2,4) ⊂ ℙ⁵ is a quadric: c(Tℙ⁵)|_G = c(T_G)·(1 + 2σ₁)
        let g = ring_g24();
        let t = tangent_g24(&g).unwrap();
        let s1 = ChowClass::basis(&g, "s1").unwrap();
        let lhs = ChowClass::one(&g).add(&s1).unwrap().pow(6).unwrap();
        let rhs = t.total.mul(&ChowClass::one(&g).add(&s1.scale(2)).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        // Euler number 6
        assert_eq!(integrate(&t.c(4)), bi(6));
        // and the universal sequence: c(U)·c(Q) = 1
        let u = taut_sub_g24(&g).unwrap();
        let q = taut_quot_g24(&g).unwrap();
        assert_eq!(u.total.mul(&q.total).unwrap(), ChowClass::one(&g));
    }

    #[test]
    fn affine_tangent_dual_identity() {
        // c(T̂∨) = (1+σ₁)·c(T_G∨ ⊗ O(1)) must equal 1/(1−σ₁)
        let g = ring_g24();
        let s1 = ChowClass::basis(&g, "s1").unwrap();
        let tw = chern_twist(&chern_dual(&tangent_g24(&g).unwrap()), &s1).unwrap();
        let built = chern_sum(&chern_line(&s1).unwrap(), &tw).unwrap();
        let stated = affine_tangent_dual_g24(&g).unwrap();
        assert_eq!(built.total, stated.total);
        assert_eq!(stated.rank, 5);
    }

    #[test]
    fn twist_matches_split_oracle() {
        // E = O(h) ⊕ O(2h) ⊕ O(−h) on ℙ⁴, twisted by 3h
        let p4 = ring_pn(4).unwrap();
        let h = ChowClass::basis(&p4, "h").unwrap();
        let lines = [h.clone(), h.scale(2), h.neg()];
        let e = ChernClass::new(3, split_total(&p4, &lines)).unwrap();
        let twisted = chern_twist(&e, &h.scale(3)).unwrap();
        let expect_lines = [h.scale(4), h.scale(5), h.scale(2)];
        assert_eq!(twisted.total, split_total(&p4, &expect_lines));
    }

    #[test]
    fn lambda2_matches_split_oracle() {
        // ∧²(O(a) ⊕ O(b) ⊕ O(c)) = O(a+b) ⊕ O(a+c) ⊕ O(b+c)
        let p4 = ring_pn(4).unwrap();
        let h = ChowClass::basis(&p4, "h").unwrap();
        let (a, b, c) = (1i64, 2i64, -1i64);
        let e = ChernClass::new(
            3,
            split_total(&p4, &[h.scale(a), h.scale(b), h.scale(c)]),
        )
        .unwrap();
        let w = chern_lambda2_rank3(&e).unwrap();
        let expect = split_total(&p4, &[h.scale(a + b), h.scale(a + c), h.scale(b + c)]);
        assert_eq!(w.total, expect);
        // rank restriction is enforced
        let r2 = ChernClass::new(2, split_total(&p4, &[h.clone(), h.scale(2)])).unwrap();
        assert!(matches!(chern_lambda2_rank3(&r2), Err(Error::RankMismatch(_))));
    }

    #[test]
    fn dual_is_an_involution_and_twists_compose() {
        let p3 = ring_pn(3).unwrap();
        let t = tangent_pn(&p3).unwrap();
        assert_eq!(chern_dual(&chern_dual(&t)), t);
        let h = ChowClass::basis(&p3, "h").unwrap();
        let once = chern_twist(&chern_twist(&t, &h).unwrap(), &h.scale(2)).unwrap();
        let both = chern_twist(&t, &h.scale(3)).unwrap();
        assert_eq!(once.total, both.total);
    }

    #[test]
    fn wedge_then_twist_has_c1_5h() {
        let p3 = ring_pn(3).unwrap();
        let w = t1_plus_wedge_first(&p3).unwrap();
        let h = ChowClass::basis(&p3, "h").unwrap();
        assert_eq!(w.c(1), h.scale(5));
        // its doubled degeneracy class is 230 points, kept for comparison
        let doubled = chern_sum(&w, &w).unwrap();
        assert_eq!(integrate(&lagrangian_d2(&doubled).unwrap()), bi(230));
    }

    #[test]
    fn degeneracy_class_of_t1_plus_is_16_points() {
        let p3 = ring_pn(3).unwrap();
        let e = t1_plus(&p3).unwrap();
        // twist-then-wedge: each factor has total class 1 + 2h + 2h²
        let h = ChowClass::basis(&p3, "h").unwrap();
        let factor = ChowClass::one(&p3)
            .add(&h.scale(2))
            .unwrap()
            .add(&h.pow(2).unwrap().scale(2))
            .unwrap();
        assert_eq!(e.total, factor.mul(&factor).unwrap());
        let d2 = lagrangian_d2(&e).unwrap();
        assert_eq!(integrate(&d2), bi(16));
    }

    #[test]
    fn degeneracy_class_of_t3_minus() {
        let g = ring_g24();
        let e = t3_minus(&g).unwrap();
        assert_eq!(e.c(1), ChowClass::basis(&g, "s1").unwrap().scale(-2));
        let raw = lagrangian_d2(&e).unwrap();
        let s21 = ChowClass::basis(&g, "s21").unwrap();
        assert_eq!(raw, s21.scale(-4));
        let dualed = lagrangian_d2_dual(&e).unwrap();
        assert_eq!(dualed, s21.scale(4));
        // 2σ₁³ = 4σ₂₁: matches the stated count under the dual convention
        let s1 = ChowClass::basis(&g, "s1").unwrap();
        assert_eq!(dualed, s1.pow(3).unwrap().scale(2));
    }

    #[test]
    fn degeneracy_class_of_trivial_bundle_vanishes() {
        let p3 = ring_pn(3).unwrap();
        let e = chern_trivial(&p3, 4);
        assert!(lagrangian_d2(&e).unwrap().is_zero());
        let small = chern_trivial(&p3, 2);
        assert!(matches!(lagrangian_d2(&small), Err(Error::RankTooSmall)));
    }

    #[test]
    fn trivial_summand_does_not_shift_degeneracy_class() {
        let p3 = ring_pn(3).unwrap();
        let e = t1_plus(&p3).unwrap();
        let padded = chern_sum(&chern_trivial(&p3, 1), &e).unwrap();
        assert_eq!(lagrangian_d2(&padded).unwrap(), lagrangian_d2(&e).unwrap());
    }

    #[test]
    fn whitney_sum_equals_sequence_middle() {
        let g = ring_g24();
        let u = taut_sub_g24(&g).unwrap();
        let q = taut_quot_g24(&g).unwrap();
        assert_eq!(chern_sum(&u, &q).unwrap(), chern_from_sequence(&u, &q).unwrap());
        // and quotient recovery inverts it
        let mid = chern_sum(&u, &q).unwrap();
        let rec = chern_quotient(&mid, &u).unwrap();
        assert_eq!(rec.total, q.total);
        assert_eq!(rec.rank, 2);
    }

    #[test]
    fn segre_bundles_ranks_and_classes() {
        let sb = segre_tangent_class().unwrap();
        assert_eq!(sb.literal.rank, 7);
        assert_eq!(sb.derived.rank, 6);

        let g = ring_g24();
        let p1 = ring_pn(1).unwrap();
        let s21 = pull_right(&sb.ring, &ChowClass::basis(&g, "s21").unwrap()).unwrap();
        let t = pull_left(&sb.ring, &ChowClass::basis(&p1, "h").unwrap()).unwrap();
        let s2 = pull_right(&sb.ring, &ChowClass::basis(&g, "s2").unwrap()).unwrap();
        let s11 = pull_right(&sb.ring, &ChowClass::basis(&g, "s11").unwrap()).unwrap();

        // literal reading: the ℙ¹ factor cancels and the class is −22σ₂₁,
        // with no component along the ℙ¹ point at all
        let lit = lagrangian_d2(&sb.literal).unwrap();
        assert_eq!(lit, s21.scale(-22));

        // derived reading: exactly 12·t·(σ₂ + σ₁₁) = 12 h₁² h₂
        let der = lagrangian_d2(&sb.derived).unwrap();
        let expect = t.mul(&s2.add(&s11).unwrap()).unwrap().scale(12);
        assert_eq!(der, expect);

        // pairing against [ℙ¹×ℙ²] with [ℙ²] = σ₁₁ gives 12 points
        let s11_cycle = pull_right(&sb.ring, &ChowClass::basis(&g, "s11").unwrap()).unwrap();
        assert_eq!(integrate(&der.mul(&s11_cycle).unwrap()), bi(12));
        // while the literal reading pairs to zero there (pure residual)
        assert_eq!(integrate(&lit.mul(&s11_cycle).unwrap()), bi(0));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        /// Twist agrees with the split-bundle oracle for random split
        /// bundles on ℙ⁴.
        #[test]
        fn twist_split_oracle_random(
            coeffs in proptest::collection::vec(-3i64..4, 3),
            b in -3i64..4,
        ) {
            let p4 = ring_pn(4).unwrap();
            let h = ChowClass::basis(&p4, "h").unwrap();
            let lines: Vec<ChowClass> = coeffs.iter().map(|&a| h.scale(a)).collect();
            let e = ChernClass::new(3, split_total(&p4, &lines)).unwrap();
            let twisted = chern_twist(&e, &h.scale(b)).unwrap();
            let expect: Vec<ChowClass> = coeffs.iter().map(|&a| h.scale(a + b)).collect();
            prop_assert_eq!(twisted.total, split_total(&p4, &expect));
        }

        /// ∧² agrees with the split-bundle oracle.
        #[test]
        fn lambda2_split_oracle_random(coeffs in proptest::collection::vec(-2i64..3, 3)) {
            let p4 = ring_pn(4).unwrap();
            let h = ChowClass::basis(&p4, "h").unwrap();
            let lines: Vec<ChowClass> = coeffs.iter().map(|&a| h.scale(a)).collect();
            let e = ChernClass::new(3, split_total(&p4, &lines)).unwrap();
            let w = chern_lambda2_rank3(&e).unwrap();
            let expect = split_total(
                &p4,
                &[
                    h.scale(coeffs[0] + coeffs[1]),
                    h.scale(coeffs[0] + coeffs[2]),
                    h.scale(coeffs[1] + coeffs[2]),
                ],
            );
            prop_assert_eq!(w.total, expect);
        }
    }
}
