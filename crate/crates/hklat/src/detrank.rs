//! Truncated multivariate polynomial arithmetic over exact rationals:
//! determinants of polynomial matrices modulo a total-degree cutoff,
//! homogeneous slices Φ₀, Φ₁, Φ₂, …, quadratic rank, and the jet-level
//! transversal-D4 criterion (corank-2 quadratic part plus a square-free
//! binary cubic on its kernel).

use crate::{bi, Error, Result};
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::collections::{BTreeMap, HashMap};

/// Variable names accepted by the parser, in positional order.
pub const VAR_NAMES: [char; 5] = ['x', 'y', 'z', 't', 'u'];

fn br(n: i64) -> BigRational {
    BigRational::from_integer(bi(n))
}

/// A polynomial with exact rational coefficients, truncated at a total
/// degree bound: products silently drop terms beyond the cutoff.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedPoly {
    n_vars: usize,
    cutoff: u32,
    /// exponent tuple (length n_vars, total degree ≤ cutoff) → coefficient;
    /// zero coefficients are never stored
    terms: BTreeMap<Vec<u16>, BigRational>,
}

impl TruncatedPoly {
    pub fn zero(n_vars: usize, cutoff: u32) -> TruncatedPoly {
        TruncatedPoly { n_vars, cutoff, terms: BTreeMap::new() }
    }

    pub fn constant(n_vars: usize, cutoff: u32, value: BigRational) -> TruncatedPoly {
        let mut p = TruncatedPoly::zero(n_vars, cutoff);
        if !value.is_zero() {
            p.terms.insert(vec![0; n_vars], value);
        }
        p
    }

    pub fn one(n_vars: usize, cutoff: u32) -> TruncatedPoly {
        TruncatedPoly::constant(n_vars, cutoff, BigRational::one())
    }

    pub fn var(n_vars: usize, cutoff: u32, i: usize) -> Result<TruncatedPoly> {
        if i >= n_vars {
            return Err(Error::OutOfRange(format!("variable {} of {}", i, n_vars)));
        }
        let mut p = TruncatedPoly::zero(n_vars, cutoff);
        if cutoff >= 1 {
            let mut e = vec![0u16; n_vars];
            e[i] = 1;
            p.terms.insert(e, BigRational::one());
        }
        Ok(p)
    }

    /// Insert one monomial term; exponents beyond the cutoff are dropped,
    /// matching the truncation semantics of all arithmetic.
    pub fn monomial(
        n_vars: usize,
        cutoff: u32,
        exps: &[u16],
        coeff: BigRational,
    ) -> Result<TruncatedPoly> {
        if exps.len() != n_vars {
            return Err(Error::DimensionMismatch { expected: n_vars, got: exps.len() });
        }
        let mut p = TruncatedPoly::zero(n_vars, cutoff);
        let deg: u32 = exps.iter().map(|&e| e as u32).sum();
        if deg <= cutoff && !coeff.is_zero() {
            p.terms.insert(exps.to_vec(), coeff);
        }
        Ok(p)
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u16]) -> BigRational {
        self.terms.get(exps).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(&vec![0; self.n_vars])
    }

    fn check_shape(&self, other: &TruncatedPoly) -> Result<()> {
        if self.n_vars != other.n_vars || self.cutoff != other.cutoff {
            return Err(Error::ShapeMismatch(format!(
                "polynomials disagree: {} vars cutoff {} vs {} vars cutoff {}",
                self.n_vars, self.cutoff, other.n_vars, other.cutoff
            )));
        }
        Ok(())
    }

    fn insert(&mut self, exps: Vec<u16>, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &TruncatedPoly) -> Result<TruncatedPoly> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> TruncatedPoly {
        TruncatedPoly {
            n_vars: self.n_vars,
            cutoff: self.cutoff,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &TruncatedPoly) -> Result<TruncatedPoly> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigRational) -> TruncatedPoly {
        if k.is_zero() {
            return TruncatedPoly::zero(self.n_vars, self.cutoff);
        }
        TruncatedPoly {
            n_vars: self.n_vars,
            cutoff: self.cutoff,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &TruncatedPoly) -> Result<TruncatedPoly> {
        self.check_shape(other)?;
        let mut out = TruncatedPoly::zero(self.n_vars, self.cutoff);
        for (e1, c1) in &self.terms {
            let d1: u32 = e1.iter().map(|&e| e as u32).sum();
            for (e2, c2) in &other.terms {
                let d2: u32 = e2.iter().map(|&e| e as u32).sum();
                if d1 + d2 > self.cutoff {
                    continue;
                }
                let e: Vec<u16> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert(e, c1 * c2);
            }
        }
        Ok(out)
    }

    /// Drop all terms of total degree above k, keeping the cutoff.
    pub fn truncate_to(&self, k: u32) -> TruncatedPoly {
        TruncatedPoly {
            n_vars: self.n_vars,
            cutoff: self.cutoff,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().map(|&x| x as u32).sum::<u32>() <= k)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// The homogeneous slice of total degree k.
    pub fn homogeneous_part(&self, k: u32) -> Result<TruncatedPoly> {
        if k > self.cutoff {
            return Err(Error::OutOfRange(format!(
                "degree {} beyond cutoff {}",
                k, self.cutoff
            )));
        }
        Ok(TruncatedPoly {
            n_vars: self.n_vars,
            cutoff: self.cutoff,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().map(|&x| x as u32).sum::<u32>() == k)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        })
    }

    /// Rebuild with a different cutoff, dropping any terms beyond it.
    pub fn with_cutoff(&self, cutoff: u32) -> TruncatedPoly {
        TruncatedPoly {
            n_vars: self.n_vars,
            cutoff,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().map(|&x| x as u32).sum::<u32>() <= cutoff)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Substitute xᵢ ↦ Σⱼ subst[i][j]·xⱼ (an exact linear change of
    /// variables; subst must be n_vars × n_vars).
    pub fn substitute_linear(&self, subst: &[Vec<BigRational>]) -> Result<TruncatedPoly> {
        if subst.len() != self.n_vars || subst.iter().any(|r| r.len() != self.n_vars) {
            return Err(Error::ShapeMismatch("substitution matrix shape".into()));
        }
        let images: Vec<TruncatedPoly> = subst
            .iter()
            .map(|row| {
                let mut p = TruncatedPoly::zero(self.n_vars, self.cutoff);
                for (j, c) in row.iter().enumerate() {
                    if !c.is_zero() && self.cutoff >= 1 {
                        let mut e = vec![0u16; self.n_vars];
                        e[j] = 1;
                        p.insert(e, c.clone());
                    }
                }
                p
            })
            .collect();
        let mut out = TruncatedPoly::zero(self.n_vars, self.cutoff);
        for (e, c) in &self.terms {
            let mut term = TruncatedPoly::constant(self.n_vars, self.cutoff, c.clone());
            for (i, &exp) in e.iter().enumerate() {
                for _ in 0..exp {
                    term = term.mul(&images[i])?;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }
}

fn var_symbol(n_vars: usize, i: usize) -> String {
    if n_vars <= VAR_NAMES.len() {
        VAR_NAMES[i].to_string()
    } else {
        format!("v{}", i)
    }
}

impl std::fmt::Display for TruncatedPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let mut factors: Vec<String> = Vec::new();
            let is_const = e.iter().all(|&x| x == 0);
            if is_const || !c.abs().is_one() {
                factors.push(format!("{}", c.abs()));
            }
            for (i, &exp) in e.iter().enumerate() {
                match exp {
                    0 => {}
                    1 => factors.push(var_symbol(self.n_vars, i)),
                    _ => factors.push(format!("{}^{}", var_symbol(self.n_vars, i), exp)),
                }
            }
            let body = factors.join("*");
            if first {
                if c < &BigRational::zero() {
                    write!(f, "-{}", body)?;
                } else {
                    write!(f, "{}", body)?;
                }
                first = false;
            } else if c < &BigRational::zero() {
                write!(f, " - {}", body)?;
            } else {
                write!(f, " + {}", body)?;
            }
        }
        Ok(())
    }
}

/// Determinant of a square matrix of truncated polynomials, modulo terms of
/// degree above the cutoff. Memoized Laplace expansion over row subsets —
/// fraction-free, so exact over the rationals.
pub fn truncated_det(m: &[Vec<TruncatedPoly>], cutoff: u32) -> Result<TruncatedPoly> {
    let n = m.len();
    if n == 0 || m.iter().any(|row| row.len() != n) {
        return Err(Error::NonSquare);
    }
    if n > 14 {
        return Err(Error::RankTooLarge);
    }
    let n_vars = m[0][0].n_vars;
    let mut mat: Vec<Vec<TruncatedPoly>> = Vec::with_capacity(n);
    for row in m {
        let mut out_row = Vec::with_capacity(n);
        for e in row {
            if e.n_vars != n_vars {
                return Err(Error::ShapeMismatch(
                    "matrix entries disagree on variable count".into(),
                ));
            }
            out_row.push(e.with_cutoff(cutoff));
        }
        mat.push(out_row);
    }

    // det over rows in `mask`, columns n−|mask| .. n
    fn go(
        mask: u32,
        n: usize,
        n_vars: usize,
        cutoff: u32,
        mat: &[Vec<TruncatedPoly>],
        memo: &mut HashMap<u32, TruncatedPoly>,
    ) -> Result<TruncatedPoly> {
        if mask == 0 {
            return Ok(TruncatedPoly::one(n_vars, cutoff));
        }
        if let Some(hit) = memo.get(&mask) {
            return Ok(hit.clone());
        }
        let col = n - mask.count_ones() as usize;
        let mut acc = TruncatedPoly::zero(n_vars, cutoff);
        let mut sign = true;
        for i in 0..n {
            if mask & (1 << i) == 0 {
                continue;
            }
            if !mat[i][col].is_zero() {
                let minor = go(mask & !(1 << i), n, n_vars, cutoff, mat, memo)?;
                let term = mat[i][col].mul(&minor)?;
                acc = if sign { acc.add(&term)? } else { acc.sub(&term)? };
            }
            sign = !sign;
        }
        memo.insert(mask, acc.clone());
        Ok(acc)
    }

    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut memo = HashMap::new();
    go(full, n, n_vars, cutoff, &mat, &mut memo)
}

/// The homogeneous degree-k slice of f.
pub fn homogeneous_part(f: &TruncatedPoly, k: u32) -> Result<TruncatedPoly> {
    f.homogeneous_part(k)
}

/// Entrywise truncation of a square polynomial matrix to degree ≤ 1.
pub fn linear_truncation(m: &[Vec<TruncatedPoly>]) -> Result<Vec<Vec<TruncatedPoly>>> {
    let n = m.len();
    if n == 0 || m.iter().any(|row| row.len() != n) {
        return Err(Error::NonSquare);
    }
    Ok(m.iter().map(|row| row.iter().map(|e| e.truncate_to(1)).collect()).collect())
}

/// A quadratic form presented by its symmetric rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticForm {
    pub n_vars: usize,
    pub matrix: Vec<Vec<BigRational>>,
}

impl QuadraticForm {
    /// Read the symmetric matrix off a homogeneous quadratic polynomial.
    pub fn from_poly(phi2: &TruncatedPoly) -> Result<QuadraticForm> {
        let n = phi2.n_vars;
        let mut matrix = vec![vec![BigRational::zero(); n]; n];
        let half = BigRational::new(bi(1), bi(2));
        for (e, c) in &phi2.terms {
            let deg: u32 = e.iter().map(|&x| x as u32).sum();
            if deg != 2 {
                return Err(Error::NotHomogeneousQuadratic);
            }
            let nz: Vec<usize> = (0..n).filter(|&i| e[i] > 0).collect();
            match nz.len() {
                1 => {
                    let i = nz[0];
                    matrix[i][i] = c.clone();
                }
                2 => {
                    let (i, j) = (nz[0], nz[1]);
                    let v = c * &half;
                    matrix[i][j] = v.clone();
                    matrix[j][i] = v;
                }
                _ => unreachable!("degree-2 exponent with more than two variables"),
            }
        }
        Ok(QuadraticForm { n_vars: n, matrix })
    }

    /// Rank over ℚ by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.matrix.clone();
        let n = self.n_vars;
        let mut rank = 0;
        let mut row = 0;
        for col in 0..n {
            let pivot = (row..n).find(|&r| !m[r][col].is_zero());
            let Some(p) = pivot else { continue };
            m.swap(row, p);
            let inv = m[row][col].clone();
            for r in row + 1..n {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = &m[r][col] / &inv;
                for c in col..n {
                    let sub = &factor * &m[row][c];
                    m[r][c] = &m[r][c] - sub;
                }
            }
            rank += 1;
            row += 1;
        }
        rank
    }

    /// A basis of the radical {v : Mv = 0}.
    pub fn kernel_basis(&self) -> Vec<Vec<BigRational>> {
        let n = self.n_vars;
        let mut m = self.matrix.clone();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut row = 0;
        for col in 0..n {
            let pivot = (row..n).find(|&r| !m[r][col].is_zero());
            let Some(p) = pivot else { continue };
            m.swap(row, p);
            let inv = m[row][col].clone();
            for c in col..n {
                m[row][c] = &m[row][c] / &inv;
            }
            for r in 0..n {
                if r != row && !m[r][col].is_zero() {
                    let factor = m[r][col].clone();
                    for c in col..n {
                        let sub = &factor * &m[row][c];
                        m[r][c] = &m[r][c] - sub;
                    }
                }
            }
            pivots.push((row, col));
            row += 1;
        }
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let mut basis = Vec::new();
        for free in (0..n).filter(|c| !pivot_cols.contains(c)) {
            let mut v = vec![BigRational::zero(); n];
            v[free] = BigRational::one();
            for &(r, c) in &pivots {
                v[c] = -m[r][free].clone();
            }
            basis.push(v);
        }
        basis
    }
}

/// Rank of the symmetric matrix behind a homogeneous quadratic slice.
pub fn quadratic_rank(phi2: &TruncatedPoly) -> Result<usize> {
    Ok(QuadraticForm::from_poly(phi2)?.rank())
}

/// Discriminant 18abcd − 4b³d + b²c² − 4ac³ − 27a²d² of a binary cubic
/// a·s³ + b·s²u + c·su² + d·u³.
fn binary_cubic_discriminant(co: &[BigRational; 4]) -> BigRational {
    let (a, b, c, d) = (&co[0], &co[1], &co[2], &co[3]);
    br(18) * a * b * c * d - br(4) * b * b * b * d + b * b * c * c
        - br(4) * a * c * c * c
        - br(27) * a * a * d * d
}

/// Jet-level transversal-D4 test: the quadratic part must have corank
/// exactly 2, and the cubic part restricted to its 2-dimensional kernel
/// must be a binary cubic with three distinct roots (nonzero discriminant)
/// — the transversal content of the normal form F² + G·H·(G+H).
pub fn d4_type_check(f: &TruncatedPoly, n_vars: usize) -> Result<bool> {
    if n_vars != f.n_vars {
        return Err(Error::DimensionMismatch { expected: f.n_vars, got: n_vars });
    }
    if f.cutoff < 3 {
        return Err(Error::OutOfRange(format!("cutoff {} below 3", f.cutoff)));
    }
    if !f.constant_term().is_zero() {
        return Err(Error::OutOfRange("nonzero constant term".into()));
    }
    if !f.homogeneous_part(1)?.is_zero() {
        return Err(Error::HasLinearPart);
    }
    let q = QuadraticForm::from_poly(&f.homogeneous_part(2)?)?;
    if q.rank() + 2 != n_vars {
        return Ok(false);
    }
    let kernel = q.kernel_basis();
    debug_assert_eq!(kernel.len(), 2);
    let (v, w) = (&kernel[0], &kernel[1]);

    // restrict the cubic slice to s·v + u·w, collecting a binary cubic
    let cubic = f.homogeneous_part(3)?;
    let mut co = [
        BigRational::zero(),
        BigRational::zero(),
        BigRational::zero(),
        BigRational::zero(),
    ];
    for (e, c) in &cubic.terms {
        // product over variables of (s·vᵢ + u·wᵢ)^eᵢ as a binary cubic
        let mut acc = vec![c.clone()]; // coefficients in u, degree 0
        for i in 0..n_vars {
            for _ in 0..e[i] {
                let mut next = vec![BigRational::zero(); acc.len() + 1];
                for (k, a) in acc.iter().enumerate() {
                    next[k] = &next[k] + a * &v[i];
                    next[k + 1] = &next[k + 1] + a * &w[i];
                }
                acc = next;
            }
        }
        for (k, a) in acc.iter().enumerate() {
            co[k] = &co[k] + a;
        }
    }
    Ok(!binary_cubic_discriminant(&co).is_zero())
}

// ---------------------------------------------------------------------------
// parsing
// ---------------------------------------------------------------------------

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::ParseError { line, msg: msg.into() }
}

fn parse_factor(
    tok: &str,
    n_vars: usize,
    cutoff: u32,
    line: usize,
) -> Result<TruncatedPoly> {
    let tok = tok.trim();
    if tok.is_empty() {
        return Err(parse_err(line, "empty factor"));
    }
    let first = tok.chars().next().unwrap();
    if first.is_ascii_digit() {
        let value: BigRational = tok
            .parse()
            .map_err(|_| parse_err(line, format!("bad rational '{}'", tok)))?;
        return Ok(TruncatedPoly::constant(n_vars, cutoff, value));
    }
    let (name, exp) = match tok.split_once('^') {
        Some((v, e)) => {
            let exp: u16 =
                e.parse().map_err(|_| parse_err(line, format!("bad exponent '{}'", e)))?;
            (v.trim(), exp)
        }
        None => (tok, 1),
    };
    if name.chars().count() != 1 {
        return Err(parse_err(line, format!("unknown factor '{}'", name)));
    }
    let ch = name.chars().next().unwrap();
    let idx = VAR_NAMES
        .iter()
        .position(|&v| v == ch)
        .filter(|&i| i < n_vars)
        .ok_or_else(|| parse_err(line, format!("unknown variable '{}'", ch)))?;
    let mut exps = vec![0u16; n_vars];
    exps[idx] = exp;
    TruncatedPoly::monomial(n_vars, cutoff, &exps, BigRational::one())
}

/// Parse one polynomial in the variables x, y, z, t, u: terms joined by
/// + and −, factors joined by *, exponents by ^, rational coefficients as
/// `p` or `p/q`.
pub fn parse_poly(s: &str, n_vars: usize, cutoff: u32) -> Result<TruncatedPoly> {
    parse_poly_at(s, n_vars, cutoff, 1)
}

fn parse_poly_at(s: &str, n_vars: usize, cutoff: u32, line: usize) -> Result<TruncatedPoly> {
    if n_vars > VAR_NAMES.len() {
        return Err(parse_err(line, "at most five named variables"));
    }
    let s = s.trim();
    if s.is_empty() {
        return Err(parse_err(line, "empty polynomial"));
    }
    let mut out = TruncatedPoly::zero(n_vars, cutoff);
    let mut term = String::new();
    let mut sign = 1i64;
    let mut pending_sign = 1i64;
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    let flush = |term: &str,
                 sign: i64,
                 out: &mut TruncatedPoly|
     -> Result<()> {
        if term.trim().is_empty() {
            return Err(parse_err(line, "empty term"));
        }
        let mut acc = TruncatedPoly::constant(
            n_vars,
            cutoff,
            BigRational::from_integer(bi(sign)),
        );
        for factor in term.split('*') {
            acc = acc.mul(&parse_factor(factor, n_vars, cutoff, line)?)?;
        }
        *out = out.add(&acc)?;
        Ok(())
    };
    while i < chars.len() {
        let ch = chars[i];
        if ch == '+' || ch == '-' {
            if term.trim().is_empty() {
                // leading sign of the next term
                pending_sign *= if ch == '-' { -1 } else { 1 };
            } else {
                flush(&term, sign, &mut out)?;
                term.clear();
                pending_sign = if ch == '-' { -1 } else { 1 };
            }
            sign = pending_sign;
        } else if !ch.is_whitespace() {
            sign = pending_sign;
            term.push(ch);
        }
        i += 1;
    }
    flush(&term, sign, &mut out)?;
    Ok(out)
}

/// Parse a square matrix of polynomials: one row per line, cells separated
/// by `;`, blank lines and `#` comments skipped.
pub fn parse_poly_matrix(
    text: &str,
    n_vars: usize,
    cutoff: u32,
) -> Result<Vec<Vec<TruncatedPoly>>> {
    let mut rows: Vec<Vec<TruncatedPoly>> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut row = Vec::new();
        for cell in line.split(';') {
            row.push(parse_poly_at(cell, n_vars, cutoff, lineno + 1)?);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_err(0, "no rows"));
    }
    let n = rows.len();
    if let Some(bad) = rows.iter().position(|r| r.len() != n) {
        return Err(parse_err(bad + 1, format!("row has {} cells, expected {}", rows[bad].len(), n)));
    }
    Ok(rows)
}
