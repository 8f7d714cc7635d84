//! Even lattices presented by Gram matrices, and their per-lattice
//! invariants: discriminant group/form, signature, 2-elementary invariants,
//! divisibility, and bounded vector search.
//!
//! A [`Lattice`] is basis-explicit: all operations work on the Gram matrix
//! with exact integer/rational arithmetic. Isometry testing is offered only
//! in the 2-elementary indefinite regime, where the invariant triple decides
//! it; everything else is rejected rather than approximated.

use crate::exact::{kernel, snf, IMat, QMat};
use crate::{bi, Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Zero};

/// Standard lattice names accepted by [`make_standard`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardName {
    /// Hyperbolic plane, Gram [[0,1],[1,0]].
    U,
    /// Even unimodular positive-definite rank-8 root lattice.
    E8,
    /// Rank-4 root lattice with determinant 4.
    D4,
    /// Rank-1 lattice ⟨2⟩.
    A1,
    /// Rank-1 lattice ⟨m⟩ (m even after scaling).
    Diag(i64),
}

/// Even nondegenerate lattice with an explicit Gram matrix.
///
/// Rank 0 is allowed (empty Gram, determinant 1): it arises naturally as
/// the invariant or coinvariant lattice of ±id and as the "rest" part of a
/// purely hyperbolic ambient lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    rank: usize,
    gram: IMat,
    det: BigInt,
    label: Option<String>,
}

/// Discriminant group `A_L = L∨/L` with its finite quadratic form.
///
/// Generators come from the Smith normal form transform of the Gram matrix;
/// `lifts` holds their rational coordinate vectors in the ambient basis.
/// `q_diag` is canonicalized to `[0,2)` (values mod 2ℤ) and `b_pairings`
/// to `[0,1)` (values mod ℤ).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteQuadraticForm {
    /// Elementary divisors > 1, in the SNF divisibility chain order.
    pub orders: Vec<BigInt>,
    /// q(gᵢ) mod 2ℤ, each in [0, 2).
    pub q_diag: Vec<BigRational>,
    /// b(gᵢ, gⱼ) mod ℤ, each in [0, 1); symmetric, diagonal = q mod ℤ.
    pub b_pairings: QMat,
    /// Columns are rational lifts of the generators in ambient coordinates.
    pub lifts: QMat,
    /// Gram matrix of the ambient lattice (needed to re-derive pairings).
    pub ambient_gram: IMat,
}

/// The invariants (r, signature, a, δ) classifying indefinite 2-elementary
/// lattices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct TwoElemInvariants {
    pub r: usize,
    pub sig: (usize, usize),
    pub a: usize,
    pub delta: u8,
}

impl std::fmt::Display for TwoElemInvariants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(r={}, sig=({},{}), a={}, delta={})", self.r, self.sig.0, self.sig.1, self.a, self.delta)
    }
}

/// Result of [`Lattice::delta_set_profile`]: status of the wall-vector set
/// {square −2} ∪ {square −10 with divisibility 2}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaProfile {
    /// True when the mod-4 certificate proves every square is ≡ 0 (mod 4),
    /// which excludes both −2 and −10 outright (they are ≡ 2 mod 4).
    pub certified_empty: bool,
    /// A vector of square −2 within the bound, if one was found.
    pub minus2: Option<Vec<i64>>,
    /// A vector of square −10 and divisibility 2 within the bound, if found.
    pub minus10_div2: Option<Vec<i64>>,
}

impl DeltaProfile {
    pub fn has_minus2(&self) -> bool {
        self.minus2.is_some()
    }
    pub fn has_minus10_div2(&self) -> bool {
        self.minus10_div2.is_some()
    }
}

impl Lattice {
    /// Build a lattice from a Gram matrix, validating symmetry, evenness of
    /// the diagonal, and nondegeneracy.
    pub fn new(gram: IMat, label: Option<String>) -> Result<Lattice> {
        if gram.rows != gram.cols {
            return Err(Error::NonSquare);
        }
        if !gram.is_symmetric() {
            return Err(Error::ShapeMismatch("Gram matrix must be symmetric".into()));
        }
        for i in 0..gram.rows {
            if gram.get(i, i).is_odd() {
                return Err(Error::NotEven);
            }
        }
        let det = gram.det();
        if gram.rows > 0 && det.is_zero() {
            return Err(Error::DegenerateGram);
        }
        Ok(Lattice { rank: gram.rows, gram, det, label })
    }

    pub fn from_rows_i64(rows: &[Vec<i64>], label: Option<String>) -> Result<Lattice> {
        Lattice::new(IMat::from_rows_i64(rows), label)
    }

    /// The rank-0 lattice (empty Gram, determinant 1).
    pub fn zero() -> Lattice {
        Lattice { rank: 0, gram: IMat::zeros(0, 0), det: BigInt::one(), label: Some("0".into()) }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram(&self) -> &IMat {
        &self.gram
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Lattice {
        self.label = Some(label.into());
        self
    }

    /// Gram matrix as i64 entries; errors if any entry overflows (search
    /// operations require machine-word arithmetic).
    pub fn gram_i64(&self) -> Result<Vec<Vec<i64>>> {
        let mut out = vec![vec![0i64; self.rank]; self.rank];
        for i in 0..self.rank {
            for j in 0..self.rank {
                out[i][j] = i64::try_from(self.gram.get(i, j))
                    .map_err(|_| Error::OutOfRange("Gram entry exceeds i64".into()))?;
            }
        }
        Ok(out)
    }

    /// Entrywise rescale of the Gram matrix by a nonzero integer.
    pub fn rescale(&self, n: i64) -> Result<Lattice> {
        if n == 0 {
            return Err(Error::OutOfRange("rescale factor must be nonzero".into()));
        }
        let gram = self.gram.scale(&bi(n));
        let label = self.label.as_ref().map(|l| format!("({})({})", l, n));
        Lattice::new(gram, label)
    }

    /// Exact signature: (positive, negative) eigenvalue counts, via
    /// Descartes' rule of signs on the characteristic polynomial.
    pub fn signature(&self) -> (usize, usize) {
        if self.rank == 0 {
            return (0, 0);
        }
        self.gram.signature_symmetric()
    }

    pub fn is_indefinite(&self) -> bool {
        let (p, m) = self.signature();
        p > 0 && m > 0
    }

    /// Discriminant group `L∨/L` with its quadratic/bilinear form data.
    pub fn discriminant_group(&self) -> FiniteQuadraticForm {
        let n = self.rank;
        if n == 0 {
            return FiniteQuadraticForm {
                orders: vec![],
                q_diag: vec![],
                b_pairings: QMat::zeros(0, 0),
                lifts: QMat::zeros(0, 0),
                ambient_gram: self.gram.clone(),
            };
        }
        let s = snf(&self.gram);
        let ginv = self.gram.to_q().inverse().expect("nondegenerate Gram");
        let mut sel = Vec::new();
        for (i, d) in s.diag.iter().enumerate() {
            if d > &BigInt::one() {
                sel.push(i);
            }
        }
        let orders: Vec<BigInt> = sel.iter().map(|&i| s.diag[i].clone()).collect();
        // generator i of Z^n/D corresponds to column i of pinv in Z^n/(G Z^n);
        // its lift into L∨ (coordinates in the L-basis) is G^{-1} * that column.
        let k = sel.len();
        let mut cols = IMat::zeros(n, k);
        for (jj, &i) in sel.iter().enumerate() {
            for r in 0..n {
                cols.set(r, jj, s.pinv.get(r, i).clone());
            }
        }
        let lifts = ginv.mul(&cols.to_q());
        // pairings: liftsᵀ G lifts
        let pair = lifts.transpose().mul(&self.gram.to_q()).mul(&lifts);
        let mut q_diag = Vec::with_capacity(k);
        let mut b = QMat::zeros(k, k);
        for i in 0..k {
            q_diag.push(mod_into(pair.get(i, i).clone(), 2));
            for j in 0..k {
                b.set(i, j, mod_into(pair.get(i, j).clone(), 1));
            }
        }
        FiniteQuadraticForm {
            orders,
            q_diag,
            b_pairings: b,
            lifts,
            ambient_gram: self.gram.clone(),
        }
    }

    /// (r, signature, a, δ) for a 2-elementary lattice.
    pub fn two_elementary_invariants(&self) -> Result<TwoElemInvariants> {
        let disc = self.discriminant_group();
        if !disc.is_two_elementary() {
            return Err(Error::NotTwoElementary);
        }
        let a = disc.orders.len();
        // δ = 0 iff q is integral on every generator; sufficient for all
        // elements because 2b is integral on a 2-elementary group.
        let delta = if disc.q_diag.iter().all(|q| q.is_integer()) { 0 } else { 1 };
        Ok(TwoElemInvariants { r: self.rank, sig: self.signature(), a, delta })
    }

    /// gcd of the pairing values of `v` against the whole lattice
    /// (the positive generator of the pairing ideal).
    pub fn divisibility(&self, v: &[i64]) -> Result<BigInt> {
        if v.len() != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, got: v.len() });
        }
        if v.iter().all(|&x| x == 0) {
            return Err(Error::ZeroVector);
        }
        let mut g = BigInt::zero();
        for i in 0..self.rank {
            let mut row = BigInt::zero();
            for j in 0..self.rank {
                row += self.gram.get(i, j) * bi(v[j]);
            }
            g = g.gcd(&row);
        }
        Ok(g)
    }

    /// One-sided certificate: true iff m | gᵢᵢ for all i and m | 2gᵢⱼ for all
    /// i ≠ j. True implies m | v·v for every lattice vector; false proves
    /// nothing.
    pub fn square_multiple_certificate(&self, m: i64) -> Result<bool> {
        if m < 1 {
            return Err(Error::InvalidOrder);
        }
        let mb = bi(m);
        for i in 0..self.rank {
            if !(self.gram.get(i, i) % &mb).is_zero() {
                return Ok(false);
            }
            for j in (i + 1)..self.rank {
                if !((self.gram.get(i, j) * bi(2)) % &mb).is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Largest m with square_multiple_certificate true: gcd of all diagonal
    /// entries and doubled off-diagonal entries (0 means "no information",
    /// which only happens for the zero Gram).
    fn square_gcd(&self) -> BigInt {
        let mut g = BigInt::zero();
        for i in 0..self.rank {
            g = g.gcd(self.gram.get(i, i));
            for j in (i + 1)..self.rank {
                g = g.gcd(&(self.gram.get(i, j) * bi(2)));
            }
        }
        g
    }

    /// Bounded exhaustive search for a nonzero vector with `v·v = n` and
    /// (optionally) divisibility `div`, coefficients in [−bound, bound].
    ///
    /// The search is ordered by the ℓ¹-norm of the coefficient vector, then
    /// coordinate-by-coordinate with per-coordinate value order 1, −1, 2,
    /// −2, …, 0, so the first witness returned is a smallest one in a
    /// documented, deterministic sense (basis vectors come before deeper
    /// combinations). `None` within a bound is not a nonexistence proof
    /// unless paired with [`Lattice::square_multiple_certificate`].
    ///
    /// A gcd certificate is applied first: if every square is provably a
    /// multiple of g and g ∤ n, the search exits immediately.
    pub fn find_vector_of_square(
        &self,
        n: i64,
        div: Option<i64>,
        bound: u32,
    ) -> Result<Option<Vec<i64>>> {
        if bound < 1 {
            return Err(Error::InvalidOrder);
        }
        if self.rank == 0 {
            return Ok(None);
        }
        // even lattice: odd squares cannot occur
        if n % 2 != 0 {
            return Ok(None);
        }
        let g = self.square_gcd();
        if !g.is_zero() && !(bi(n) % &g).is_zero() {
            return Ok(None); // certificate: every square is a multiple of g
        }
        let gram = self.gram_i64()?;
        let r = self.rank;
        let b = bound as i64;

        // incremental state: partial[i] = sum_j gram[i][j] * v[j] over assigned j
        struct Search<'a> {
            gram: &'a [Vec<i64>],
            r: usize,
            b: i64,
            n: i64,
            div: Option<i64>,
            v: Vec<i64>,
            partial: Vec<i64>, // running gram·v over assigned coordinates
            square: i64,       // running vᵀ·gram·v over assigned coordinates
        }
        impl Search<'_> {
            fn rec(&mut self, k: usize, budget: i64) -> Option<Vec<i64>> {
                if k == self.r {
                    if budget != 0 || self.square != self.n {
                        return None;
                    }
                    if let Some(d) = self.div {
                        let mut g: i64 = 0;
                        for p in &self.partial {
                            g = gcd_i64(g, *p);
                        }
                        if g != d {
                            return None;
                        }
                    }
                    return Some(self.v.clone());
                }
                // remaining coordinates must be able to consume the budget
                if budget > (self.r - k) as i64 * self.b {
                    return None;
                }
                let mut vals: Vec<i64> = Vec::with_capacity((2 * self.b + 1) as usize);
                for a in 1..=self.b.min(budget) {
                    vals.push(a);
                    vals.push(-a);
                }
                vals.push(0);
                for val in vals {
                    // update incrementally: square += g_kk v^2 + 2 v * partial_k
                    let delta_sq = self.gram[k][k] * val * val + 2 * val * self.partial[k];
                    self.square += delta_sq;
                    if val != 0 {
                        for i in 0..self.r {
                            self.partial[i] += self.gram[i][k] * val;
                        }
                    }
                    self.v[k] = val;
                    if let Some(found) = self.rec(k + 1, budget - val.abs()) {
                        return Some(found);
                    }
                    self.v[k] = 0;
                    if val != 0 {
                        for i in 0..self.r {
                            self.partial[i] -= self.gram[i][k] * val;
                        }
                    }
                    self.square -= delta_sq;
                }
                None
            }
        }

        let mut s = Search {
            gram: &gram,
            r,
            b,
            n,
            div,
            v: vec![0; r],
            partial: vec![0; r],
            square: 0,
        };
        for level in 1..=(r as i64) * b {
            if let Some(found) = s.rec(0, level) {
                return Ok(Some(found));
            }
        }
        Ok(None)
    }

    /// Wall-vector profile of `self`: combines the mod-4 certificate with
    /// bounded searches for squares −2 and (−10, divisibility 2).
    pub fn delta_set_profile(&self, bound: u32) -> Result<DeltaProfile> {
        if bound < 1 {
            return Err(Error::InvalidOrder);
        }
        // −2 and −10 are both ≡ 2 (mod 4), so the mod-4 certificate kills both.
        if self.square_multiple_certificate(4)? {
            return Ok(DeltaProfile { certified_empty: true, minus2: None, minus10_div2: None });
        }
        let minus2 = self.find_vector_of_square(-2, None, bound)?;
        let minus10_div2 = self.find_vector_of_square(-10, Some(2), bound)?;
        Ok(DeltaProfile { certified_empty: false, minus2, minus10_div2 })
    }

    /// Square of an explicit coefficient vector (exact, BigInt).
    pub fn square_of(&self, v: &[i64]) -> Result<BigInt> {
        if v.len() != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, got: v.len() });
        }
        let mut s = BigInt::zero();
        for i in 0..self.rank {
            for j in 0..self.rank {
                s += self.gram.get(i, j) * bi(v[i]) * bi(v[j]);
            }
        }
        Ok(s)
    }
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Reduce a rational into [0, m) modulo the integer m (m = 1 or 2 here).
pub(crate) fn mod_into(x: BigRational, m: i64) -> BigRational {
    let m = BigRational::from(bi(m));
    let q = (&x / &m).floor();
    x - q * m
}

/// Standard Gram matrices, rescaled entrywise by `scale`.
pub fn make_standard(name: StandardName, scale: i64) -> Result<Lattice> {
    if scale == 0 {
        return Err(Error::OutOfRange("scale must be nonzero".into()));
    }
    let (rows, base_label): (Vec<Vec<i64>>, String) = match name {
        StandardName::U => (vec![vec![0, 1], vec![1, 0]], "U".into()),
        StandardName::E8 => {
            // chain c1..c7 with the eighth node attached to c3
            // (arm lengths 1, 2, 4 from the branch node; determinant 1)
            let mut g = vec![vec![0i64; 8]; 8];
            for i in 0..8 {
                g[i][i] = 2;
            }
            for i in 0..6 {
                g[i][i + 1] = -1;
                g[i + 1][i] = -1;
            }
            g[7][2] = -1;
            g[2][7] = -1;
            (g, "E8".into())
        }
        StandardName::D4 => {
            // central node c0 attached to three leaves (determinant 4)
            let mut g = vec![vec![0i64; 4]; 4];
            for i in 0..4 {
                g[i][i] = 2;
            }
            for leaf in 1..4 {
                g[0][leaf] = -1;
                g[leaf][0] = -1;
            }
            (g, "D4".into())
        }
        StandardName::A1 => (vec![vec![2]], "A1".into()),
        StandardName::Diag(m) => (vec![vec![m]], format!("<{}>", m)),
    };
    let label = match name {
        StandardName::Diag(m) => format!("<{}>", m * scale),
        _ if scale == 1 => base_label,
        _ => format!("{}({})", base_label, scale),
    };
    let scaled: Vec<Vec<i64>> =
        rows.iter().map(|r| r.iter().map(|&v| v * scale).collect()).collect();
    Lattice::from_rows_i64(&scaled, Some(label))
}

/// Block-diagonal direct sum. Requires a nonempty list.
pub fn direct_sum(parts: &[&Lattice]) -> Result<Lattice> {
    if parts.is_empty() {
        return Err(Error::OutOfRange("direct_sum of empty list".into()));
    }
    let grams: Vec<&IMat> = parts.iter().map(|l| l.gram()).collect();
    let gram = IMat::block_diag(&grams);
    let label = parts
        .iter()
        .map(|l| l.label().unwrap_or("?").to_string())
        .collect::<Vec<_>>()
        .join(" + ");
    Lattice::new(gram, Some(label))
}

/// Decide isometry of two indefinite 2-elementary lattices by their
/// invariant triples (unique in that regime). Anything outside the regime
/// is rejected, not guessed.
pub fn is_isometric_2elem(l1: &Lattice, l2: &Lattice) -> Result<bool> {
    let i1 = l1.two_elementary_invariants().map_err(|_| {
        Error::OutOfRegime("first lattice is not 2-elementary".into())
    })?;
    let i2 = l2.two_elementary_invariants().map_err(|_| {
        Error::OutOfRegime("second lattice is not 2-elementary".into())
    })?;
    if !l1.is_indefinite() || !l2.is_indefinite() {
        return Err(Error::OutOfRegime(
            "isometry by invariants is only decided for indefinite lattices".into(),
        ));
    }
    Ok(i1 == i2)
}

impl FiniteQuadraticForm {
    /// |A_L| = product of the elementary divisors.
    pub fn order(&self) -> BigInt {
        self.orders.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn is_two_elementary(&self) -> bool {
        self.orders.iter().all(|d| d == &bi(2))
    }

    /// Number of generators (= 𝔽₂-rank when 2-elementary).
    pub fn gen_count(&self) -> usize {
        self.orders.len()
    }

    /// q of an 𝔽₂-combination of generators, mod 2ℤ in [0, 2).
    /// Only meaningful for 2-elementary groups.
    pub fn q_of_f2(&self, coords: &[u8]) -> BigRational {
        assert_eq!(coords.len(), self.gen_count());
        let mut acc = BigRational::zero();
        for i in 0..coords.len() {
            if coords[i] & 1 == 1 {
                acc += &self.q_diag[i];
                for j in (i + 1)..coords.len() {
                    if coords[j] & 1 == 1 {
                        acc += self.b_pairings.get(i, j) * BigRational::from(bi(2));
                    }
                }
            }
        }
        mod_into(acc, 2)
    }

    /// b of two 𝔽₂-combinations, mod ℤ in [0, 1).
    pub fn b_of_f2(&self, x: &[u8], y: &[u8]) -> BigRational {
        assert_eq!(x.len(), self.gen_count());
        assert_eq!(y.len(), self.gen_count());
        let mut acc = BigRational::zero();
        for i in 0..x.len() {
            if x[i] & 1 == 0 {
                continue;
            }
            for j in 0..y.len() {
                if y[j] & 1 == 1 {
                    acc += self.b_pairings.get(i, j);
                }
            }
        }
        mod_into(acc, 1)
    }

    /// Rational lift (ambient coordinates) of an 𝔽₂-combination.
    pub fn lift_of_f2(&self, coords: &[u8]) -> QMat {
        assert_eq!(coords.len(), self.gen_count());
        let n = self.lifts.rows;
        let mut out = QMat::zeros(n, 1);
        for (j, &c) in coords.iter().enumerate() {
            if c & 1 == 1 {
                for i in 0..n {
                    let v = out.get(i, 0) + self.lifts.get(i, j);
                    out.set(i, 0, v);
                }
            }
        }
        out
    }
}

/// Saturated kernel of an integer matrix acting on the ambient lattice,
/// exposed here for reuse by the glue module.
pub(crate) fn saturated_kernel_lattice(ambient: &Lattice, m: &IMat) -> Result<(Lattice, IMat)> {
    let basis = kernel(m); // columns, saturated
    let k = basis.cols;
    let gram = basis.transpose().mul(ambient.gram()).mul(&basis);
    if k > 0 && gram.det().is_zero() {
        return Err(Error::DegenerateComplement);
    }
    Ok((Lattice::new(gram, None)?, basis))
}

/// A random even nondegenerate lattice of the given rank from a seed of
/// entries; None if the seeded Gram is singular. Shared across the crate's
/// property suites.
#[cfg(test)]
pub(crate) fn random_even_lattice(seed: &[i64], rank: usize) -> Option<Lattice> {
    assert!(seed.len() >= rank * rank);
    let mut rows = vec![vec![0i64; rank]; rank];
    for i in 0..rank {
        rows[i][i] = 2 * seed[i * rank + i];
        for j in (i + 1)..rank {
            rows[i][j] = seed[i * rank + j];
            rows[j][i] = seed[i * rank + j];
        }
    }
    Lattice::from_rows_i64(&rows, None).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::Signed;
    use proptest::prelude::*;

    fn std_lat(name: StandardName, scale: i64) -> Lattice {
        make_standard(name, scale).unwrap()
    }

    #[test]
    fn standard_grams_and_determinants() {
        let u = std_lat(StandardName::U, 1);
        assert_eq!(u.gram(), &IMat::from_rows_i64(&[vec![0, 1], vec![1, 0]]));
        assert_eq!(u.det(), &bi(-1));

        // the E8 Gram must be unimodular and positive definite
        let e8 = std_lat(StandardName::E8, 1);
        assert_eq!(e8.det(), &bi(1));
        assert_eq!(e8.signature(), (8, 0));

        let e8m2 = std_lat(StandardName::E8, -2);
        assert_eq!(e8m2.rank(), 8);
        assert_eq!(e8m2.det(), &bi(256));
        assert_eq!(e8m2.signature(), (0, 8));

        let d4m1 = std_lat(StandardName::D4, -1);
        assert_eq!(d4m1.rank(), 4);
        assert_eq!(d4m1.det(), &bi(4));
        assert_eq!(d4m1.signature(), (0, 4));

        // odd diagonal rejected
        assert_eq!(make_standard(StandardName::Diag(1), 1).unwrap_err(), Error::NotEven);
        assert_eq!(make_standard(StandardName::U, 0).unwrap_err(), Error::OutOfRange("scale must be nonzero".into()));
    }

    #[test]
    fn direct_sums() {
        let u = std_lat(StandardName::U, 1);
        let uu = direct_sum(&[&u, &u]).unwrap();
        assert_eq!(uu.rank(), 4);
        assert_eq!(uu.det(), &bi(1));

        let u2 = std_lat(StandardName::U, 2);
        let e8m2 = std_lat(StandardName::E8, -2);
        let l = direct_sum(&[&u2, &e8m2]).unwrap();
        assert_eq!(l.rank(), 10);
        assert_eq!(l.det(), &bi(-1024)); // |det| = 4 · 256
        assert_eq!(l.det().magnitude().to_string(), "1024");

        let single = direct_sum(&[&u]).unwrap();
        assert_eq!(single.gram(), u.gram());
    }

    #[test]
    fn discriminant_groups_small() {
        let u = std_lat(StandardName::U, 1);
        assert!(u.discriminant_group().is_trivial());

        // U(2): (Z/2)^2 with q = (0,0) and b(g1,g2) = 1/2
        let u2 = std_lat(StandardName::U, 2);
        let d = u2.discriminant_group();
        assert_eq!(d.orders, vec![bi(2), bi(2)]);
        assert!(d.q_diag.iter().all(|q| q.is_zero()));
        let half = BigRational::new(bi(1), bi(2));
        assert_eq!(d.b_pairings.get(0, 1), &half);
        // q(g1+g2) = q1 + q2 + 2b = 1 mod 2
        assert_eq!(d.q_of_f2(&[1, 1]), BigRational::from(bi(1)));

        // <2>: Z/2 with q = 1/2
        let a = std_lat(StandardName::Diag(2), 1);
        let d = a.discriminant_group();
        assert_eq!(d.orders, vec![bi(2)]);
        assert_eq!(d.q_diag[0], half);

        // E8(-2): (Z/2)^8, q on generators ≡ 1 mod 2 (dual roots halved)
        let e8m2 = std_lat(StandardName::E8, -2);
        let d = e8m2.discriminant_group();
        assert_eq!(d.orders.len(), 8);
        assert!(d.is_two_elementary());
    }

    #[test]
    fn signatures() {
        assert_eq!(std_lat(StandardName::U, 1).signature(), (1, 1));
        assert_eq!(std_lat(StandardName::E8, -2).signature(), (0, 8));
        let l = direct_sum(&[&std_lat(StandardName::U, 2), &std_lat(StandardName::D4, -1)]).unwrap();
        assert_eq!(l.signature(), (1, 5));
    }

    #[test]
    fn invariant_triples() {
        let u2 = std_lat(StandardName::U, 2);
        let e8m2 = std_lat(StandardName::E8, -2);
        let t = direct_sum(&[&u2, &e8m2]).unwrap();
        let inv = t.two_elementary_invariants().unwrap();
        assert_eq!(inv, TwoElemInvariants { r: 10, sig: (1, 9), a: 10, delta: 0 });

        let u = std_lat(StandardName::U, 1);
        let t2 = direct_sum(&[&u, &e8m2]).unwrap();
        assert_eq!(
            t2.two_elementary_invariants().unwrap(),
            TwoElemInvariants { r: 10, sig: (1, 9), a: 8, delta: 0 }
        );

        let d4m1 = std_lat(StandardName::D4, -1);
        let t3 = direct_sum(&[&u2, &d4m1]).unwrap();
        assert_eq!(
            t3.two_elementary_invariants().unwrap(),
            TwoElemInvariants { r: 6, sig: (1, 5), a: 4, delta: 0 }
        );

        // <2> ⊕ <-2>^4: delta = 1 (q = ±1/2 on generators)
        let p2 = std_lat(StandardName::Diag(2), 1);
        let m2 = std_lat(StandardName::Diag(-2), 1);
        let t4 = direct_sum(&[&p2, &m2, &m2, &m2, &m2]).unwrap();
        assert_eq!(
            t4.two_elementary_invariants().unwrap(),
            TwoElemInvariants { r: 5, sig: (1, 4), a: 5, delta: 1 }
        );

        // non-2-elementary rejected
        let d6 = std_lat(StandardName::Diag(6), 1);
        assert_eq!(d6.two_elementary_invariants().unwrap_err(), Error::NotTwoElementary);
    }

    #[test]
    fn isometry_by_invariants() {
        let u2 = std_lat(StandardName::U, 2);
        let um2 = std_lat(StandardName::U, -2);
        assert!(is_isometric_2elem(&u2, &um2).unwrap());

        let e8m2 = std_lat(StandardName::E8, -2);
        let u = std_lat(StandardName::U, 1);
        let a = direct_sum(&[&u2, &e8m2]).unwrap();
        let b = direct_sum(&[&u, &e8m2]).unwrap();
        assert!(!is_isometric_2elem(&a, &b).unwrap()); // a differs: 10 vs 8

        // definite inputs are out of regime
        assert!(matches!(is_isometric_2elem(&e8m2, &e8m2), Err(Error::OutOfRegime(_))));
    }

    #[test]
    fn divisibility_values() {
        let u = std_lat(StandardName::U, 1);
        assert_eq!(u.divisibility(&[1, 0]).unwrap(), bi(1));
        let u2 = std_lat(StandardName::U, 2);
        assert_eq!(u2.divisibility(&[1, 0]).unwrap(), bi(2));
        let e8m2 = std_lat(StandardName::E8, -2);
        for i in 0..8 {
            let mut v = vec![0i64; 8];
            v[i] = 1;
            assert_eq!(e8m2.divisibility(&v).unwrap(), bi(2));
        }
        assert_eq!(u.divisibility(&[0, 0]).unwrap_err(), Error::ZeroVector);
    }

    #[test]
    fn certificates() {
        let u2 = std_lat(StandardName::U, 2);
        let e8m2 = std_lat(StandardName::E8, -2);
        let t = direct_sum(&[&u2, &e8m2]).unwrap();
        assert!(t.square_multiple_certificate(4).unwrap());
        let u = std_lat(StandardName::U, 1);
        assert!(u.square_multiple_certificate(2).unwrap());
        let t2 = direct_sum(&[&u, &e8m2]).unwrap();
        assert!(!t2.square_multiple_certificate(4).unwrap());
    }

    #[test]
    fn vector_search_first_witnesses() {
        // first −2 vector of U⊕E8(−2) in the documented order is e−f
        let u = std_lat(StandardName::U, 1);
        let e8m2 = std_lat(StandardName::E8, -2);
        let t = direct_sum(&[&u, &e8m2]).unwrap();
        let w = t.find_vector_of_square(-2, None, 1).unwrap().unwrap();
        let mut expect = vec![0i64; 10];
        expect[0] = 1;
        expect[1] = -1;
        assert_eq!(w, expect);

        // U(2)⊕E8(−2): certificate short-circuits to None
        let u2 = std_lat(StandardName::U, 2);
        let t2 = direct_sum(&[&u2, &e8m2]).unwrap();
        assert_eq!(t2.find_vector_of_square(-2, None, 3).unwrap(), None);

        // isotropic vector in U
        let w = u.find_vector_of_square(0, None, 1).unwrap().unwrap();
        assert_eq!(w, vec![1, 0]);

        // witness square re-checked by Gram evaluation
        let d4m1 = std_lat(StandardName::D4, -1);
        let t3 = direct_sum(&[&u2, &d4m1]).unwrap();
        let w = t3.find_vector_of_square(-2, None, 2).unwrap().unwrap();
        assert_eq!(t3.square_of(&w).unwrap(), bi(-2));
        // the witness is a D4(−1) root: its U(2) coordinates vanish
        assert_eq!(&w[0..2], &[0, 0]);
    }

    #[test]
    fn delta_profiles() {
        let u2 = std_lat(StandardName::U, 2);
        let e8m2 = std_lat(StandardName::E8, -2);
        let t = direct_sum(&[&u2, &e8m2]).unwrap();
        let p = t.delta_set_profile(2).unwrap();
        assert!(p.certified_empty);
        assert!(!p.has_minus2());

        let u = std_lat(StandardName::U, 1);
        let t2 = direct_sum(&[&u, &e8m2]).unwrap();
        let p = t2.delta_set_profile(2).unwrap();
        assert!(!p.certified_empty);
        assert!(p.has_minus2());

        let d4m1 = std_lat(StandardName::D4, -1);
        let t3 = direct_sum(&[&u2, &d4m1]).unwrap();
        let p = t3.delta_set_profile(2).unwrap();
        assert!(p.has_minus2());
    }

    #[test]
    fn divisibility_constrained_search() {
        // in U(2), e has divisibility 2 and square 0
        let u2 = std_lat(StandardName::U, 2);
        let w = u2.find_vector_of_square(0, Some(2), 1).unwrap().unwrap();
        assert_eq!(u2.divisibility(&w).unwrap(), bi(2));
        // in U, nothing has divisibility 2 within bound 1
        let u = std_lat(StandardName::U, 1);
        assert_eq!(u.find_vector_of_square(0, Some(2), 1).unwrap(), None);
    }

    #[test]
    fn rank_zero_lattice() {
        let z = Lattice::zero();
        assert_eq!(z.rank(), 0);
        assert_eq!(z.det(), &bi(1));
        assert_eq!(z.signature(), (0, 0));
        assert!(z.discriminant_group().is_trivial());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// |A_L| = |det| on random even lattices.
        #[test]
        fn disc_order_equals_det(seed in proptest::collection::vec(-3i64..=3, 16)) {
            if let Some(l) = random_even_lattice(&seed, 4) {
                let d = l.discriminant_group();
                prop_assert_eq!(d.order(), l.det().abs());
            }
        }

        /// q is well defined: shifting a generator lift by a lattice vector
        /// changes q only by elements of 2Z.
        #[test]
        fn q_well_defined_modulo_lattice(seed in proptest::collection::vec(-3i64..=3, 16), shift in proptest::collection::vec(-2i64..=2, 4)) {
            if let Some(l) = random_even_lattice(&seed, 4) {
                let d = l.discriminant_group();
                if d.gen_count() > 0 {
                    let g = l.gram().to_q();
                    let mut lift = QMat::zeros(4, 1);
                    for i in 0..4 {
                        lift.set(i, 0, d.lifts.get(i, 0) + BigRational::from(bi(shift[i])));
                    }
                    let q_shifted = lift.transpose().mul(&g).mul(&lift);
                    let diff = q_shifted.get(0,0) - {
                        let l0 = {
                            let mut m = QMat::zeros(4, 1);
                            for i in 0..4 { m.set(i, 0, d.lifts.get(i, 0).clone()); }
                            m
                        };
                        l0.transpose().mul(&g).mul(&l0).get(0,0).clone()
                    };
                    // difference must be an even integer
                    prop_assert!(diff.is_integer());
                    prop_assert!(diff.to_integer().is_even());
                }
            }
        }

        /// rescale consistency: |A_{L(n)}| = |det L|·|n|^rank.
        #[test]
        fn rescale_disc_order(seed in proptest::collection::vec(-3i64..=3, 9), n in prop_oneof![Just(-2i64), Just(2i64), Just(3i64)]) {
            if let Some(l) = random_even_lattice(&seed, 3) {
                let ln = l.rescale(n).unwrap();
                let expect = l.det().abs() * bi(n).abs().pow(3);
                prop_assert_eq!(ln.discriminant_group().order(), expect);
            }
        }

        /// delta generator-sufficiency: the generator test agrees with the
        /// brute-force test over every element of a 2-elementary group.
        #[test]
        fn delta_generators_suffice(seed in proptest::collection::vec(-2i64..=2, 9)) {
            if let Some(l) = random_even_2elem(&seed, 3) {
                let d = l.discriminant_group();
                let a = d.gen_count();
                if a > 0 && d.is_two_elementary() {
                    let by_gens = d.q_diag.iter().all(|q| q.is_integer());
                    let mut by_all = true;
                    for mask in 1u32..(1 << a) {
                        let coords: Vec<u8> = (0..a).map(|i| ((mask >> i) & 1) as u8).collect();
                        if !d.q_of_f2(&coords).is_integer() {
                            by_all = false;
                            break;
                        }
                    }
                    prop_assert_eq!(by_gens, by_all);
                }
            }
        }

        /// every find_vector_of_square witness re-checks by Gram evaluation.
        #[test]
        fn witness_squares_recheck(seed in proptest::collection::vec(-3i64..=3, 9), n in prop_oneof![Just(-2i64), Just(0i64), Just(2i64), Just(4i64)]) {
            if let Some(l) = random_even_lattice(&seed, 3) {
                if let Some(w) = l.find_vector_of_square(n, None, 2).unwrap() {
                    prop_assert_eq!(l.square_of(&w).unwrap(), bi(n));
                }
            }
        }

        /// certificate soundness: if the certificate holds for m, every
        /// witness square is a multiple of m.
        #[test]
        fn certificate_sound(seed in proptest::collection::vec(-3i64..=3, 9), m in prop_oneof![Just(2i64), Just(4i64)]) {
            if let Some(l) = random_even_lattice(&seed, 3) {
                if l.square_multiple_certificate(m).unwrap() {
                    for n in [-8i64, -6, -4, -2, 0, 2, 4, 6, 8] {
                        if let Some(w) = l.find_vector_of_square(n, None, 2).unwrap() {
                            let sq = l.square_of(&w).unwrap();
                            prop_assert!((sq % bi(m)).is_zero());
                        }
                    }
                }
            }
        }
    }

    /// A random even lattice whose discriminant group is 2-elementary,
    /// built as a direct sum of scaled rank-1 and U(2)/U blocks.
    fn random_even_2elem(seed: &[i64], blocks: usize) -> Option<Lattice> {
        let mut parts: Vec<Lattice> = Vec::new();
        for i in 0..blocks {
            let s = seed[i].rem_euclid(4);
            let part = match s {
                0 => make_standard(StandardName::Diag(2), 1).ok()?,
                1 => make_standard(StandardName::Diag(-2), 1).ok()?,
                2 => make_standard(StandardName::U, 2).ok()?,
                _ => make_standard(StandardName::U, 1).ok()?,
            };
            parts.push(part);
        }
        let refs: Vec<&Lattice> = parts.iter().collect();
        direct_sum(&refs).ok()
    }
}
