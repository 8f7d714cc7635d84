//! Mukai-vector arithmetic, order-2 Brauer classes as 𝔽₂ functionals on a
//! transcendental lattice, twisted Picard lattices built from B-lifts, and
//! Picard lattices of moduli spaces of (twisted) sheaves.
//!
//! Sign convention, fixed throughout: the Mukai pairing of (r, c, s) and
//! (r′, c′, s′) is c·c′ − r·s′ − r′·s, so (0, H, 0)² = H² and
//! (r, 0, s)² = −2rs.

use crate::exact::IMat;
use crate::glue::complement_of_columns;
use crate::lattice::{direct_sum, make_standard, Lattice, StandardName};
use crate::{bi, Error, Result};
use num::bigint::BigInt;
use num::{Integer, Zero};

/// A Mukai vector (r, c, s): rank, a class in a designated middle lattice,
/// and the degree-4 component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MukaiVector {
    pub r: BigInt,
    pub c: Vec<BigInt>,
    pub s: BigInt,
}

impl MukaiVector {
    pub fn new(r: i64, c: Vec<i64>, s: i64) -> MukaiVector {
        MukaiVector { r: bi(r), c: c.into_iter().map(bi).collect(), s: bi(s) }
    }

    pub fn from_big(r: BigInt, c: Vec<BigInt>, s: BigInt) -> MukaiVector {
        MukaiVector { r, c, s }
    }
}

/// Mukai pairing c_v·c_w − r_v·s_w − r_w·s_v with c-classes paired in
/// `middle`.
pub fn mukai_pairing(v: &MukaiVector, w: &MukaiVector, middle: &Lattice) -> Result<BigInt> {
    let n = middle.rank();
    if v.c.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: v.c.len() });
    }
    if w.c.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: w.c.len() });
    }
    let mut cc = BigInt::zero();
    for i in 0..n {
        for j in 0..n {
            cc += &v.c[i] * middle.gram().get(i, j) * &w.c[j];
        }
    }
    Ok(cc - &v.r * &w.s - &w.r * &v.s)
}

/// Self-pairing v² = c·c − 2rs; always even because the middle lattice is.
pub fn mukai_square(v: &MukaiVector, middle: &Lattice) -> Result<BigInt> {
    let sq = mukai_pairing(v, v, middle)?;
    debug_assert!(sq.is_even());
    Ok(sq)
}

/// Dimension of the moduli space for a Mukai vector: v² + 2.
pub fn moduli_dimension_mukai(v: &MukaiVector, middle: &Lattice) -> Result<BigInt> {
    let sq = mukai_square(v, middle)?;
    if sq < bi(-2) {
        return Err(Error::NegativeSquare);
    }
    Ok(sq + bi(2))
}

/// Picard part of the twisted algebraic Mukai lattice.
///
/// For order n = 1 (untwisted) this is U ⊕ picS, spanned by (1,0,0), (0,0,1)
/// and Pic(S). For n ≥ 2 the lattice is spanned by Pic(S) together with
/// B₁ = (n, s, 0) and B₂ = (0, 0, 1), where s (the projection of n·B to the
/// transcendental part) pairs to zero with Pic(S); the adjoined block has
/// Gram [[s², −n], [−n, 0]] with s² passed in as `s_sq`.
pub fn twisted_picard(pic_s: &Lattice, n: i64, s_sq: i64) -> Result<Lattice> {
    if n < 1 {
        return Err(Error::InvalidOrder);
    }
    if n == 1 {
        let u = make_standard(StandardName::U, 1)?;
        return direct_sum(&[&u, pic_s]);
    }
    let block = Lattice::from_rows_i64(&[vec![s_sq, -n], vec![-n, 0]], None)?;
    direct_sum(&[pic_s, &block])
}

/// Coordinates of a Mukai vector in the basis of [`twisted_picard`]'s
/// output: for n = 1 the vector r·e − s·f + c over the leading U block;
/// for n ≥ 2 the vector c + (r/n)·B₁ + s·B₂, which requires n | r.
pub fn twisted_coords(v: &MukaiVector, pic_rank: usize, n: i64) -> Result<Vec<BigInt>> {
    if v.c.len() != pic_rank {
        return Err(Error::DimensionMismatch { expected: pic_rank, got: v.c.len() });
    }
    if n < 1 {
        return Err(Error::InvalidOrder);
    }
    if n == 1 {
        let mut x = vec![v.r.clone(), -v.s.clone()];
        x.extend(v.c.iter().cloned());
        return Ok(x);
    }
    let (q, rem) = v.r.div_rem(&bi(n));
    if !rem.is_zero() {
        return Err(Error::VectorNotInLattice);
    }
    let mut x: Vec<BigInt> = v.c.to_vec();
    x.push(q);
    x.push(v.s.clone());
    Ok(x)
}

/// Picard lattice of the moduli space M_v: the saturated orthogonal
/// complement of v inside the twisted Picard lattice.
pub fn moduli_picard(pic_s: &Lattice, n: i64, s_sq: i64, v: &MukaiVector) -> Result<Lattice> {
    let ambient = twisted_picard(pic_s, n, s_sq)?;
    let coords = twisted_coords(v, pic_s.rank(), n)?;
    let mut col = IMat::zeros(ambient.rank(), 1);
    for (i, x) in coords.iter().enumerate() {
        col.set(i, 0, x.clone());
    }
    complement_of_columns(&ambient, &col)?.source_lattice()
}

/// An order-2 Brauer class on a transcendental lattice T, given as the
/// 𝔽₂ functional x ↦ Σ aᵢxᵢ mod 2 in the coordinates of T.
#[derive(Debug, Clone)]
pub struct BrauerClass2 {
    pub t: Lattice,
    pub functional: Vec<u8>,
    /// Indices of the coordinates forming the maximal unimodular U² block,
    /// when T has the shape used by the B-lift reduction.
    pub unimodular_block: Vec<usize>,
}

impl BrauerClass2 {
    pub fn new(t: Lattice, functional: Vec<u8>) -> Result<BrauerClass2> {
        if functional.len() != t.rank() {
            return Err(Error::DimensionMismatch { expected: t.rank(), got: functional.len() });
        }
        Ok(BrauerClass2 { t, functional, unimodular_block: Vec::new() })
    }

    pub fn is_trivial(&self) -> bool {
        self.functional.iter().all(|&a| a & 1 == 0)
    }
}

/// Gram of the kernel Γ_α = {x ∈ T : α(x) ≡ 0 mod 2}, an index-2
/// sublattice; its determinant is 4·det(T).
pub fn brauer_kernel(alpha: &BrauerClass2) -> Result<Lattice> {
    if alpha.is_trivial() {
        return Err(Error::TrivialClass);
    }
    let n = alpha.t.rank();
    let i0 = alpha
        .functional
        .iter()
        .position(|&a| a & 1 == 1)
        .expect("nontrivial class has a nonzero coefficient");
    // basis: eⱼ for α(eⱼ)=0, eⱼ+e_{i0} for the other j with α(eⱼ)=1, and 2·e_{i0}
    let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for j in 0..n {
        if j == i0 {
            continue;
        }
        let mut col = vec![BigInt::zero(); n];
        col[j] = bi(1);
        if alpha.functional[j] & 1 == 1 {
            col[i0] = bi(1);
        }
        cols.push(col);
    }
    let mut dbl = vec![BigInt::zero(); n];
    dbl[i0] = bi(2);
    cols.push(dbl);
    let mut basis = IMat::zeros(n, n);
    for (j, col) in cols.iter().enumerate() {
        for i in 0..n {
            basis.set(i, j, col[i].clone());
        }
    }
    let gram = basis.transpose().mul(alpha.t.gram()).mul(&basis);
    let kernel = Lattice::new(gram, None)?;
    // index-2 sublattice: determinant scales by 2² = 4
    assert_eq!(*kernel.det(), bi(4) * alpha.t.det());
    Ok(kernel)
}

/// B-lift data for an order-2 class on T = U² ⊕ (non-unimodular block):
/// the projections of 2B to the U² block and to the rest.
#[derive(Debug, Clone)]
pub struct BLiftData {
    pub s_part: Vec<i64>,
    pub t_part: Vec<i64>,
    pub n: i64,
}

/// Result of reducing a B-lift to its canonical representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BLiftReduction {
    /// λ_α ∈ U²/2U² as a 4-bit vector: the s-part mod 2.
    pub canonical_s: Vec<u8>,
    /// True iff the class stays nontrivial after absorbing the t-part
    /// (s ∉ 2U²); the t-part alone is always absorbable into the ample part.
    pub in_i: bool,
}

/// The standard shape T = U² ⊕ E8(−2) ⊕ ⟨−2⟩ used by the B-lift reduction.
pub fn standard_transcendental() -> Lattice {
    let u = make_standard(StandardName::U, 1).unwrap();
    let e8m2 = make_standard(StandardName::E8, -2).unwrap();
    let m2 = make_standard(StandardName::Diag(-2), 1).unwrap();
    direct_sum(&[&u, &u, &e8m2, &m2]).unwrap()
}

/// Absorb the non-unimodular projection of a B-lift: any t-part is
/// equivalent to a Picard shift mod 2, so only the U²-projection matters.
/// Returns the canonical λ_α and whether the class remains nontrivial.
pub fn b_lift_reduce(alpha: &BrauerClass2, lift: &BLiftData) -> Result<BLiftReduction> {
    let expected = standard_transcendental();
    if *alpha.t.gram() != *expected.gram() {
        return Err(Error::ShapeMismatch(
            "B-lift reduction requires T = U² ⊕ E8(−2) ⊕ ⟨−2⟩".into(),
        ));
    }
    if alpha.unimodular_block != [0, 1, 2, 3] {
        return Err(Error::ShapeMismatch("U² block must occupy coordinates 0..4".into()));
    }
    if lift.n != 2 {
        return Err(Error::ShapeMismatch("reduction is specific to order 2".into()));
    }
    if lift.s_part.len() != 4 {
        return Err(Error::ShapeMismatch("s-part must have 4 coordinates".into()));
    }
    if lift.t_part.len() != 9 {
        return Err(Error::ShapeMismatch("t-part must have 9 coordinates".into()));
    }
    let canonical_s: Vec<u8> = lift.s_part.iter().map(|&x| (x.rem_euclid(2)) as u8).collect();
    let in_i = canonical_s.iter().any(|&b| b == 1);
    Ok(BLiftReduction { canonical_s, in_i })
}

/// All 15 nonzero classes λ_α ∈ U²/2U² as 4-bit vectors (e₁, f₁, e₂, f₂).
pub fn nonzero_lambda_classes() -> Vec<[u8; 4]> {
    (1u8..16).map(|m| [m & 1, (m >> 1) & 1, (m >> 2) & 1, (m >> 3) & 1]).collect()
}

/// Whether λ_α admits an integer representative s with s² = 0 exactly:
/// for s = a·e₁ + b·f₁ + c·e₂ + d·f₂ + 2u the square is 2(ab + cd) mod 4,
/// so exact isotropy is decided by ab + cd mod 2.
pub fn lambda_admits_isotropic_rep(lambda: &[u8; 4]) -> bool {
    (lambda[0] & lambda[1]) ^ (lambda[2] & lambda[3]) == 0
}

/// Evaluate the α-form on T = U² ⊕ E8(−2) ⊕ ⟨−2⟩:
/// α(x) = ½⟨Σαᵢrᵢ, Σnᵢrᵢ⟩ + ⟨λ, λ_α⟩ mod 2,
/// where x = λ + Σnᵢrᵢ splits into the U² part λ = (x₀..x₃) and the
/// coordinates nᵢ over the basis r₁..r₉ of E8(−2) ⊕ ⟨−2⟩.
pub fn alpha_form_eval(alpha9: &[u8], lambda_alpha: &[u8], x: &[i64]) -> Result<u8> {
    if alpha9.len() != 9 {
        return Err(Error::ShapeMismatch("nine α coefficients required".into()));
    }
    if lambda_alpha.len() != 4 {
        return Err(Error::ShapeMismatch("λ_α must have 4 coordinates".into()));
    }
    if x.len() != 13 {
        return Err(Error::ShapeMismatch("x must have 13 coordinates".into()));
    }
    let t = standard_transcendental();
    let g = t.gram();
    // ⟨Σαᵢrᵢ, Σnᵢrᵢ⟩ over the rescaled block: always even, take half
    let mut pair = BigInt::zero();
    for i in 0..9 {
        if alpha9[i] & 1 == 0 {
            continue;
        }
        for j in 0..9 {
            pair += g.get(4 + i, 4 + j) * bi(x[4 + j]);
        }
    }
    debug_assert!(pair.is_even());
    let half = pair / bi(2);
    // ⟨λ, λ_α⟩ inside U²
    let mut upair = BigInt::zero();
    for i in 0..4 {
        for j in 0..4 {
            if lambda_alpha[j] & 1 == 1 {
                upair += bi(x[i]) * g.get(i, j);
            }
        }
    }
    let total = half + upair;
    Ok(if total.is_even() { 0 } else { 1 })
}
