//! Exact integer and rational linear algebra.
//!
//! Everything in this crate that touches a Gram matrix goes through the
//! routines here: Smith and Hermite normal forms with unimodular transform
//! matrices, fraction-free determinants, saturated integer kernels, exact
//! rational inverses, and characteristic polynomials. No floating point is
//! used anywhere; signatures are extracted from the characteristic
//! polynomial by Descartes' rule of signs, which is exact for the
//! real-rooted polynomials that symmetric matrices produce.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};

/// Dense row-major matrix over the integers.
#[derive(Clone, PartialEq, Eq)]
pub struct IMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

/// Dense row-major matrix over the rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigRational>,
}

impl std::fmt::Debug for IMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::fmt::Debug for QMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "QMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl IMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let mut m = IMat::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(v));
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> IMat {
        let mut t = IMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IMat) -> IMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in IMat::mul");
        let mut out = IMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * other.get(k, j);
                    let cur = out.get(i, j) + add;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> IMat {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v = &*v * k;
        }
        out
    }

    pub fn neg(&self) -> IMat {
        self.scale(&BigInt::from(-1))
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self.get(i, j) != self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn block_diag(blocks: &[&IMat]) -> IMat {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = IMat::zeros(rows, cols);
        let (mut ro, mut co) = (0usize, 0usize);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(ro + i, co + j, b.get(i, j).clone());
                }
            }
            ro += b.rows;
            co += b.cols;
        }
        out
    }

    /// Columns `sel` of `self`, in the given order.
    pub fn select_cols(&self, sel: &[usize]) -> IMat {
        let mut out = IMat::zeros(self.rows, sel.len());
        for i in 0..self.rows {
            for (jj, &j) in sel.iter().enumerate() {
                out.set(i, jj, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_q(&self) -> QMat {
        let mut q = QMat::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                q.set(i, j, BigRational::from(self.get(i, j).clone()));
            }
        }
        q
    }

    /// Fraction-free determinant (Bareiss). Exact for any square integer matrix.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                // find a pivot row below and swap
                let mut found = None;
                for i in k + 1..n {
                    if !a.get(i, k).is_zero() {
                        found = Some(i);
                        break;
                    }
                }
                match found {
                    Some(i) => {
                        for j in 0..n {
                            let tmp = a.get(k, j).clone();
                            a.set(k, j, a.get(i, j).clone());
                            a.set(i, j, tmp);
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j);
                    let (q, r) = num.div_rem(&prev);
                    debug_assert!(r.is_zero(), "Bareiss division must be exact");
                    a.set(i, j, q);
                }
                a.set(i, k, BigInt::zero());
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1).clone()
    }

    /// Characteristic polynomial coefficients `[1, c1, ..., cn]` of a square
    /// integer matrix, i.e. `p(x) = x^n + c1 x^(n-1) + ... + cn`, computed by
    /// Faddeev-LeVerrier over the rationals (result is always integral).
    pub fn charpoly(&self) -> Vec<BigInt> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let a = self.to_q();
        let mut coeffs: Vec<BigRational> = vec![BigRational::one()];
        let mut m = QMat::zeros(n, n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{k-1} I
            let mut am = a.mul(&m);
            for i in 0..n {
                let v = am.get(i, i) + &coeffs[k - 1];
                am.set(i, i, v);
            }
            m = am;
            let tr: BigRational =
                (0..n).map(|i| a.row_dot_col(i, &m, i)).fold(BigRational::zero(), |s, v| s + v);
            let ck = -tr / BigRational::from(BigInt::from(k as i64));
            coeffs.push(ck);
        }
        coeffs
            .into_iter()
            .map(|c| {
                assert!(c.is_integer(), "characteristic polynomial must be integral");
                c.to_integer()
            })
            .collect()
    }

    /// (positive, negative) eigenvalue counts of a symmetric nonsingular
    /// integer matrix, via Descartes' rule of signs on the characteristic
    /// polynomial (exact, since all roots are real and nonzero).
    pub fn signature_symmetric(&self) -> (usize, usize) {
        assert!(self.is_symmetric(), "signature of non-symmetric matrix");
        let n = self.rows;
        let coeffs = self.charpoly();
        debug_assert!(!coeffs[n].is_zero(), "signature of singular matrix");
        let pos = descartes_variations(&coeffs);
        (pos, n - pos)
    }
}

/// Sign variations in a coefficient sequence, zeros skipped. For a
/// polynomial with all roots real this equals the number of positive roots.
fn descartes_variations(coeffs: &[BigInt]) -> usize {
    let mut var = 0usize;
    let mut last: Option<bool> = None;
    for c in coeffs {
        if c.is_zero() {
            continue;
        }
        let s = c.is_positive();
        if let Some(prev) = last {
            if prev != s {
                var += 1;
            }
        }
        last = Some(s);
    }
    var
}

/// Smith normal form `p * a * q = diag(d)` with all four transforms.
/// `p`, `q` are unimodular; `pinv`, `qinv` their exact inverses; `diag`
/// has nonnegative entries satisfying the divisibility chain.
pub struct Snf {
    pub p: IMat,
    pub pinv: IMat,
    pub q: IMat,
    pub qinv: IMat,
    pub diag: Vec<BigInt>,
}

pub fn snf(a0: &IMat) -> Snf {
    let (m, n) = (a0.rows, a0.cols);
    let mut a = a0.clone();
    let mut p = IMat::identity(m);
    let mut pinv = IMat::identity(m);
    let mut q = IMat::identity(n);
    let mut qinv = IMat::identity(n);

    // row i <- row i + k * row j on `a` and `p`; pinv gets the inverse column op
    let row_addmul = |a: &mut IMat, p: &mut IMat, pinv: &mut IMat, i: usize, j: usize, k: &BigInt| {
        for c in 0..a.cols {
            let v = a.get(i, c) + k * a.get(j, c);
            a.set(i, c, v);
        }
        for c in 0..p.cols {
            let v = p.get(i, c) + k * p.get(j, c);
            p.set(i, c, v);
        }
        // (L^-1 subtracts) applied on the right of pinv: col j -= k * col i
        for r in 0..pinv.rows {
            let v = pinv.get(r, j) - k * pinv.get(r, i);
            pinv.set(r, j, v);
        }
    };
    let row_swap = |a: &mut IMat, p: &mut IMat, pinv: &mut IMat, i: usize, j: usize| {
        if i == j {
            return;
        }
        for c in 0..a.cols {
            let t = a.get(i, c).clone();
            a.set(i, c, a.get(j, c).clone());
            a.set(j, c, t);
        }
        for c in 0..p.cols {
            let t = p.get(i, c).clone();
            p.set(i, c, p.get(j, c).clone());
            p.set(j, c, t);
        }
        for r in 0..pinv.rows {
            let t = pinv.get(r, i).clone();
            pinv.set(r, i, pinv.get(r, j).clone());
            pinv.set(r, j, t);
        }
    };
    let row_neg = |a: &mut IMat, p: &mut IMat, pinv: &mut IMat, i: usize| {
        for c in 0..a.cols {
            let v = -a.get(i, c).clone();
            a.set(i, c, v);
        }
        for c in 0..p.cols {
            let v = -p.get(i, c).clone();
            p.set(i, c, v);
        }
        for r in 0..pinv.rows {
            let v = -pinv.get(r, i).clone();
            pinv.set(r, i, v);
        }
    };
    let col_addmul = |a: &mut IMat, q: &mut IMat, qinv: &mut IMat, j: usize, i: usize, k: &BigInt| {
        // col j <- col j + k * col i
        for r in 0..a.rows {
            let v = a.get(r, j) + k * a.get(r, i);
            a.set(r, j, v);
        }
        for r in 0..q.rows {
            let v = q.get(r, j) + k * q.get(r, i);
            q.set(r, j, v);
        }
        // inverse row op on qinv: row i -= k * row j
        for c in 0..qinv.cols {
            let v = qinv.get(i, c) - k * qinv.get(j, c);
            qinv.set(i, c, v);
        }
    };
    let col_swap = |a: &mut IMat, q: &mut IMat, qinv: &mut IMat, i: usize, j: usize| {
        if i == j {
            return;
        }
        for r in 0..a.rows {
            let t = a.get(r, i).clone();
            a.set(r, i, a.get(r, j).clone());
            a.set(r, j, t);
        }
        for r in 0..q.rows {
            let t = q.get(r, i).clone();
            q.set(r, i, q.get(r, j).clone());
            q.set(r, j, t);
        }
        for c in 0..qinv.cols {
            let t = qinv.get(i, c).clone();
            qinv.set(i, c, qinv.get(j, c).clone());
            qinv.set(j, c, t);
        }
    };

    let k = m.min(n);
    for t in 0..k {
        'pivot: loop {
            // smallest nonzero entry in the trailing submatrix
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if !a.get(i, j).is_zero()
                        && best
                            .map(|(bi, bj)| a.get(i, j).abs() < a.get(bi, bj).abs())
                            .unwrap_or(true)
                    {
                        best = Some((i, j));
                    }
                }
            }
            let (bi, bj) = match best {
                Some(x) => x,
                None => break 'pivot, // trailing submatrix is zero
            };
            row_swap(&mut a, &mut p, &mut pinv, t, bi);
            col_swap(&mut a, &mut q, &mut qinv, t, bj);

            let mut dirty = false;
            for i in t + 1..m {
                if !a.get(i, t).is_zero() {
                    let kq = a.get(i, t) / a.get(t, t);
                    row_addmul(&mut a, &mut p, &mut pinv, i, t, &-kq);
                    if !a.get(i, t).is_zero() {
                        dirty = true; // remainder smaller than pivot; re-pick pivot
                    }
                }
            }
            for j in t + 1..n {
                if !a.get(t, j).is_zero() {
                    let kq = a.get(t, j) / a.get(t, t);
                    col_addmul(&mut a, &mut q, &mut qinv, j, t, &-kq);
                    if !a.get(t, j).is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue 'pivot;
            }
            // divisibility: pivot must divide every remaining entry
            let piv = a.get(t, t).clone();
            let mut fixed = true;
            'scan: for i in t + 1..m {
                for j in t + 1..n {
                    if !(a.get(i, j) % &piv).is_zero() {
                        row_addmul(&mut a, &mut p, &mut pinv, t, i, &BigInt::one());
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break 'pivot;
            }
        }
        if a.get(t, t).is_negative() {
            row_neg(&mut a, &mut p, &mut pinv, t);
        }
    }

    let diag: Vec<BigInt> = (0..k).map(|t| a.get(t, t).clone()).collect();
    debug_assert!({
        let chk = p.mul(a0).mul(&q);
        let mut ok = true;
        for i in 0..m {
            for j in 0..n {
                let want = if i == j && i < k { diag[i].clone() } else { BigInt::zero() };
                ok &= *chk.get(i, j) == want;
            }
        }
        ok && pinv.mul(&p) == IMat::identity(m) && q.mul(&qinv) == IMat::identity(n)
    });
    Snf { p, pinv, q, qinv, diag }
}

/// Row-style Hermite normal form. Returns the nonzero rows: each pivot is
/// positive, entries above a pivot are reduced into `[0, pivot)`, and the
/// row span over the integers is preserved.
pub fn hnf_rows(a0: &IMat) -> IMat {
    let (m, n) = (a0.rows, a0.cols);
    let mut a = a0.clone();
    let mut r = 0usize;
    for j in 0..n {
        if r == m {
            break;
        }
        loop {
            // smallest nonzero |entry| in column j at or below row r
            let mut best: Option<usize> = None;
            for i in r..m {
                if !a.get(i, j).is_zero()
                    && best.map(|b| a.get(i, j).abs() < a.get(b, j).abs()).unwrap_or(true)
                {
                    best = Some(i);
                }
            }
            let bi = match best {
                Some(x) => x,
                None => break,
            };
            if bi != r {
                for c in 0..n {
                    let t = a.get(r, c).clone();
                    a.set(r, c, a.get(bi, c).clone());
                    a.set(bi, c, t);
                }
            }
            let mut clean = true;
            for i in r + 1..m {
                if !a.get(i, j).is_zero() {
                    let kq = a.get(i, j) / a.get(r, j);
                    for c in 0..n {
                        let v = a.get(i, c) - &kq * a.get(r, c);
                        a.set(i, c, v);
                    }
                    if !a.get(i, j).is_zero() {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        if a.get(r, j).is_zero() {
            continue;
        }
        if a.get(r, j).is_negative() {
            for c in 0..n {
                let v = -a.get(r, c).clone();
                a.set(r, c, v);
            }
        }
        // reduce entries above the pivot into [0, pivot)
        for i in 0..r {
            let kq = a.get(i, j).div_floor(a.get(r, j));
            if !kq.is_zero() {
                for c in 0..n {
                    let v = a.get(i, c) - &kq * a.get(r, c);
                    a.set(i, c, v);
                }
            }
        }
        r += 1;
    }
    let mut out = IMat::zeros(r, n);
    for i in 0..r {
        for j in 0..n {
            out.set(i, j, a.get(i, j).clone());
        }
    }
    out
}

/// Basis of the integer kernel of `a`, as columns. The result is saturated
/// (it spans the full rational kernel intersected with the integer lattice)
/// because the columns come from a unimodular transform.
pub fn kernel(a: &IMat) -> IMat {
    let s = snf(a);
    let rank = s.diag.iter().filter(|d| !d.is_zero()).count();
    let sel: Vec<usize> = (rank..a.cols).collect();
    s.q.select_cols(&sel)
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> QMat {
        let mut t = QMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in QMat::mul");
        let mut out = QMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * other.get(k, j);
                    let cur = out.get(i, j) + add;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    fn row_dot_col(&self, i: usize, other: &QMat, j: usize) -> BigRational {
        (0..self.cols).map(|k| self.get(i, k) * other.get(k, j)).fold(BigRational::zero(), |s, v| s + v)
    }

    /// Exact inverse by Gauss-Jordan elimination; `None` if singular.
    pub fn inverse(&self) -> Option<QMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = QMat::identity(n);
        for col in 0..n {
            let piv = (col..n).find(|&i| !a.get(i, col).is_zero())?;
            if piv != col {
                for j in 0..n {
                    let t = a.get(col, j).clone();
                    a.set(col, j, a.get(piv, j).clone());
                    a.set(piv, j, t);
                    let t = inv.get(col, j).clone();
                    inv.set(col, j, inv.get(piv, j).clone());
                    inv.set(piv, j, t);
                }
            }
            let p = a.get(col, col).clone();
            for j in 0..n {
                let v = a.get(col, j) / &p;
                a.set(col, j, v);
                let v = inv.get(col, j) / &p;
                inv.set(col, j, v);
            }
            for i in 0..n {
                if i == col || a.get(i, col).is_zero() {
                    continue;
                }
                let f = a.get(i, col).clone();
                for j in 0..n {
                    let v = a.get(i, j) - &f * a.get(col, j);
                    a.set(i, j, v);
                    let v = inv.get(i, j) - &f * inv.get(col, j);
                    inv.set(i, j, v);
                }
            }
        }
        Some(inv)
    }

    /// Smallest positive integer `d` with `d * self` integral.
    pub fn denominator_lcm(&self) -> BigInt {
        let mut l = BigInt::one();
        for v in &self.data {
            l = l.lcm(v.denom());
        }
        l
    }

    /// `self` scaled by integer `d`, asserted integral.
    pub fn scale_to_int(&self, d: &BigInt) -> IMat {
        let mut out = IMat::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j) * BigRational::from(d.clone());
                assert!(v.is_integer(), "scale_to_int: entry not integral");
                out.set(i, j, v.to_integer());
            }
        }
        out
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|v| v.is_integer())
    }

    pub fn to_int(&self) -> Option<IMat> {
        if !self.is_integral() {
            return None;
        }
        let mut out = IMat::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).to_integer());
            }
        }
        Some(out)
    }
}

/// Solve `a * x = b` exactly for square nonsingular rational `a`.
/// Returns the solution columns (same shape as `b`).
pub fn solve(a: &QMat, b: &QMat) -> Option<QMat> {
    let inv = a.inverse()?;
    Some(inv.mul(b))
}
