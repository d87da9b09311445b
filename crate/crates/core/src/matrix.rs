//! Square matrices over rational functions and over truncated series, with
//! exact linear algebra, plus the constant-matrix spectral helpers used by
//! the reduction pipeline.

use num_rational::BigRational;

use crate::error::{CoreError, Result};
use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::scalar::ConstantScalar;
use crate::series::PuiseuxSeries;

/// Square matrix with [`RatFunc`] entries, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    n: usize,
    entries: Vec<RatFunc>,
}

impl RatMatrix {
    pub fn from_rows(rows: Vec<Vec<RatFunc>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(CoreError::InvalidInput("matrix must be square".into()));
        }
        Ok(RatMatrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> RatFunc) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        RatMatrix { n, entries }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { RatFunc::one() } else { RatFunc::zero() })
    }

    pub fn zero(n: usize) -> Self {
        Self::from_fn(n, |_, _| RatFunc::zero())
    }

    pub fn diagonal(d: Vec<RatFunc>) -> Self {
        let n = d.len();
        Self::from_fn(n, |i, j| if i == j { d[i].clone() } else { RatFunc::zero() })
    }

    pub fn from_scalars(n: usize, entries: Vec<ConstantScalar>) -> Self {
        assert_eq!(entries.len(), n * n);
        RatMatrix {
            n,
            entries: entries.into_iter().map(RatFunc::constant).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &RatFunc {
        &self.entries[i * self.n + j]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, v: RatFunc) {
        self.entries[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[RatFunc] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<RatFunc> {
        (0..self.n).map(|i| self.entry(i, j).clone()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self == &Self::identity(self.n)
    }

    pub fn is_constant(&self) -> bool {
        self.entries.iter().all(|e| e.is_constant())
    }

    /// Constant reading of the matrix, when every entry is constant.
    pub fn as_scalar_entries(&self) -> Option<Vec<ConstantScalar>> {
        self.entries.iter().map(|e| e.as_scalar()).collect()
    }

    pub fn map(&self, mut f: impl FnMut(&RatFunc) -> RatFunc) -> Self {
        RatMatrix {
            n: self.n,
            entries: self.entries.iter().map(|e| f(e)).collect(),
        }
    }

    pub fn try_map(&self, mut f: impl FnMut(&RatFunc) -> Result<RatFunc>) -> Result<Self> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            entries.push(f(e)?);
        }
        Ok(RatMatrix {
            n: self.n,
            entries,
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        RatMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        RatMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(|e| e.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self::from_fn(self.n, |i, j| {
            let mut acc = RatFunc::zero();
            for k in 0..self.n {
                let a = self.entry(i, k);
                if a.is_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(other.entry(k, j)));
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[RatFunc]) -> Vec<RatFunc> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                let mut acc = RatFunc::zero();
                for k in 0..self.n {
                    acc = acc.add(&self.entry(i, k).mul(&v[k]));
                }
                acc
            })
            .collect()
    }

    pub fn scale(&self, c: &RatFunc) -> Self {
        self.map(|e| e.mul(c))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn det(&self) -> RatFunc {
        // Gaussian elimination over the rational function field
        let mut m = self.clone();
        let mut det = RatFunc::one();
        for col in 0..self.n {
            let pivot = (col..self.n).find(|&r| !m.entry(r, col).is_zero());
            let Some(p) = pivot else {
                return RatFunc::zero();
            };
            if p != col {
                for j in 0..self.n {
                    let a = m.entry(col, j).clone();
                    let b = m.entry(p, j).clone();
                    m.set_entry(col, j, b);
                    m.set_entry(p, j, a);
                }
                det = det.neg();
            }
            let pv = m.entry(col, col).clone();
            det = det.mul(&pv);
            let pinv = pv.inv().expect("nonzero pivot");
            for r in (col + 1)..self.n {
                let factor = m.entry(r, col).mul(&pinv);
                if factor.is_zero() {
                    continue;
                }
                for j in col..self.n {
                    let v = m.entry(r, j).sub(&factor.mul(m.entry(col, j)));
                    m.set_entry(r, j, v);
                }
            }
        }
        det
    }

    /// Exact inverse by Gauss-Jordan; errors on a singular matrix, carrying
    /// the determinant in the message.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut m = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m.entry(r, col).is_zero());
            let Some(p) = pivot else {
                return Err(CoreError::SingularMatrix {
                    det: "0".to_string(),
                });
            };
            if p != col {
                for j in 0..n {
                    let (a, b) = (m.entry(col, j).clone(), m.entry(p, j).clone());
                    m.set_entry(col, j, b);
                    m.set_entry(p, j, a);
                    let (a, b) = (inv.entry(col, j).clone(), inv.entry(p, j).clone());
                    inv.set_entry(col, j, b);
                    inv.set_entry(p, j, a);
                }
            }
            let pinv = m.entry(col, col).inv().expect("nonzero pivot");
            for j in 0..n {
                m.set_entry(col, j, m.entry(col, j).mul(&pinv));
                inv.set_entry(col, j, inv.entry(col, j).mul(&pinv));
            }
            for r in 0..n {
                if r == col || m.entry(r, col).is_zero() {
                    continue;
                }
                let factor = m.entry(r, col).clone();
                for j in 0..n {
                    let v = m.entry(r, j).sub(&factor.mul(m.entry(col, j)));
                    m.set_entry(r, j, v);
                    let v = inv.entry(r, j).sub(&factor.mul(inv.entry(col, j)));
                    inv.set_entry(r, j, v);
                }
            }
        }
        Ok(inv)
    }

    /// A kernel vector of a singular matrix, if one exists.
    pub fn kernel_vector(&self) -> Option<Vec<RatFunc>> {
        let n = self.n;
        let mut m = self.clone();
        // reduced row echelon form, tracking pivot columns
        let mut pivots: Vec<usize> = Vec::new();
        let mut row = 0;
        for col in 0..n {
            let Some(p) = (row..n).find(|&r| !m.entry(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..n {
                    let (a, b) = (m.entry(row, j).clone(), m.entry(p, j).clone());
                    m.set_entry(row, j, b);
                    m.set_entry(p, j, a);
                }
            }
            let pinv = m.entry(row, col).inv().expect("nonzero pivot");
            for j in 0..n {
                m.set_entry(row, j, m.entry(row, j).mul(&pinv));
            }
            for r in 0..n {
                if r == row || m.entry(r, col).is_zero() {
                    continue;
                }
                let factor = m.entry(r, col).clone();
                for j in 0..n {
                    let v = m.entry(r, j).sub(&factor.mul(m.entry(row, j)));
                    m.set_entry(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
            if row == n {
                break;
            }
        }
        let free = (0..n).find(|c| !pivots.contains(c))?;
        let mut v = vec![RatFunc::zero(); n];
        v[free] = RatFunc::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = m.entry(r, free).neg();
        }
        Some(v)
    }

    /// Entry-wise substitution x -> x^p.
    pub fn subst_pow(&self, p: u32) -> Self {
        self.map(|e| e.subst_pow(p))
    }

    pub fn subst_scale(&self, c: &ConstantScalar) -> Self {
        self.map(|e| e.subst_scale(c))
    }

    pub fn subst_shift(&self, c: &ConstantScalar) -> Self {
        self.map(|e| e.subst_shift(c))
    }

    pub fn derivative(&self) -> Self {
        self.map(|e| e.derivative())
    }

    pub fn euler_derivative(&self) -> Self {
        self.map(|e| e.euler_derivative())
    }

    /// Evaluate all entries at x = 0; errors when an entry has a pole there.
    pub fn eval_at_zero(&self) -> Result<Vec<ConstantScalar>> {
        let mut out = Vec::with_capacity(self.n * self.n);
        for e in &self.entries {
            out.push(e.eval(&ConstantScalar::zero())?);
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.entry(j, i).clone())
    }

    pub fn render(&self, names: &[String]) -> String {
        let rows: Vec<String> = (0..self.n)
            .map(|i| {
                let cells: Vec<String> = (0..self.n)
                    .map(|j| self.entry(i, j).render(names))
                    .collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }
}

impl std::fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.render(&[]))
    }
}

/// Square matrix with truncated-series entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesMatrix {
    n: usize,
    entries: Vec<PuiseuxSeries>,
}

impl SeriesMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> PuiseuxSeries) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        SeriesMatrix { n, entries }
    }

    pub fn identity(n: usize, trunc: i64) -> Self {
        Self::from_fn(n, |i, j| {
            if i == j {
                PuiseuxSeries::one(trunc)
            } else {
                PuiseuxSeries::zero(trunc)
            }
        })
    }

    pub fn zero(n: usize, trunc: i64) -> Self {
        Self::from_fn(n, |_, _| PuiseuxSeries::zero(trunc))
    }

    pub fn from_constants(n: usize, c: &[ConstantScalar], trunc: i64) -> Self {
        assert_eq!(c.len(), n * n);
        Self::from_fn(n, |i, j| {
            PuiseuxSeries::monomial(c[i * n + j].clone(), 0, 1, trunc)
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &PuiseuxSeries {
        &self.entries[i * self.n + j]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, v: PuiseuxSeries) {
        self.entries[i * self.n + j] = v;
    }

    pub fn map(&self, mut f: impl FnMut(&PuiseuxSeries) -> PuiseuxSeries) -> Self {
        SeriesMatrix {
            n: self.n,
            entries: self.entries.iter().map(|e| f(e)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        SeriesMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        SeriesMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self::from_fn(self.n, |i, j| {
            let mut acc: Option<PuiseuxSeries> = None;
            for k in 0..self.n {
                let t = self.entry(i, k).mul(other.entry(k, j));
                acc = Some(match acc {
                    None => t,
                    Some(s) => s.add(&t),
                });
            }
            acc.unwrap()
        })
    }

    pub fn subst_pow(&self, p: u32) -> Self {
        self.map(|e| e.subst_pow(p))
    }

    pub fn truncate_to(&self, trunc: i64) -> Self {
        self.map(|e| e.truncate_to(trunc))
    }

    /// Minimum truncation across entries (the honest known order).
    pub fn trunc(&self) -> i64 {
        self.entries.iter().map(|e| e.trunc()).min().unwrap()
    }

    /// Minimum valuation index over entries, with the common ramification.
    pub fn min_valuation(&self) -> Option<BigRational> {
        self.entries
            .iter()
            .filter_map(|e| e.valuation_rational())
            .min()
    }

    pub fn is_zero_to_order(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero_to_order())
    }

    /// Constant term matrix.
    pub fn constant_term(&self) -> Vec<ConstantScalar> {
        self.entries
            .iter()
            .map(|e| e.coeff_exponent(&BigRational::from_integer(0.into())))
            .collect()
    }

    /// Newton iteration inverse; requires an invertible constant term and
    /// entries of valuation >= 0.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let trunc = self.trunc();
        if let Some(v) = self.min_valuation() {
            if v < BigRational::from_integer(0.into()) {
                return Err(CoreError::InvalidInput(
                    "series matrix inverse needs valuation >= 0 entries".into(),
                ));
            }
        }
        let c0 = self.constant_term();
        let c0m = RatMatrix::from_scalars(n, c0);
        let c0_inv = c0m.inverse()?;
        let c0_inv_s: Vec<ConstantScalar> = c0_inv
            .as_scalar_entries()
            .expect("constant inverse");
        let mut x = SeriesMatrix::from_constants(n, &c0_inv_s, trunc);
        // X <- X (2I - A X), doubling correct order each step
        let two_i = SeriesMatrix::identity(n, trunc).map(|e| e.scale(&ConstantScalar::from_integer(2)));
        let steps = (64 - (trunc.max(1) as u64).leading_zeros()) as usize + 2;
        for _ in 0..steps {
            x = x.mul(&two_i.sub(&self.mul(&x)));
        }
        // verify
        let prod = self.mul(&x);
        let id = SeriesMatrix::identity(n, prod.trunc());
        if !prod.sub(&id).is_zero_to_order() {
            return Err(CoreError::Internal("series inverse verification failed".into()));
        }
        Ok(x)
    }
}

/// Exact matrix of constants (a thin wrapper over RatMatrix with constant
/// entries) used for spectral work.
pub fn constant_matrix(n: usize, entries: Vec<ConstantScalar>) -> RatMatrix {
    RatMatrix::from_scalars(n, entries)
}

/// Characteristic polynomial det(t I - M) of a constant matrix, as a
/// polynomial in t with scalar coefficients.
pub fn char_poly(m: &RatMatrix) -> Result<Poly> {
    // det over the rational-function field in the indeterminate t reuses the
    // RatFunc machinery by treating t as the polynomial variable.
    let n = m.dim();
    let scalars = m
        .as_scalar_entries()
        .ok_or_else(|| CoreError::InvalidInput("characteristic polynomial needs a constant matrix".into()))?;
    let ti = RatMatrix::from_fn(n, |i, j| {
        let diag = if i == j { RatFunc::x() } else { RatFunc::zero() };
        diag.sub(&RatFunc::constant(scalars[i * n + j].clone()))
    });
    let d = ti.det();
    if !d.is_polynomial() {
        return Err(CoreError::Internal("characteristic polynomial not polynomial".into()));
    }
    Ok(d.num().clone())
}

/// Eigenvalues of a constant matrix when its characteristic polynomial has
/// generator-free coefficients and splits into rational roots (with
/// multiplicity). Errors otherwise.
pub fn rational_eigenvalues(m: &RatMatrix) -> Result<Vec<BigRational>> {
    let cp = char_poly(m)?;
    let roots = cp
        .rational_roots()
        .ok_or_else(|| CoreError::SpectrumSplit("symbolic coefficients in characteristic polynomial".into()))?;
    // count multiplicities by deflation
    let mut out = Vec::new();
    let mut rest = cp;
    for r in roots {
        let lin = Poly::from_coeffs(vec![
            ConstantScalar::from_rational(-r.clone()),
            ConstantScalar::one(),
        ]);
        loop {
            match rest.div_rem(&lin) {
                Ok((q, rem)) if rem.is_zero() => {
                    out.push(r.clone());
                    rest = q;
                }
                _ => break,
            }
        }
    }
    if rest.degree().unwrap_or(0) != 0 {
        return Err(CoreError::SpectrumSplit(format!(
            "irreducible factor of degree {} remains",
            rest.degree().unwrap()
        )));
    }
    out.sort();
    Ok(out)
}

/// Kernel basis of a constant matrix over the scalar field.
pub fn scalar_kernel(m: &RatMatrix) -> Vec<Vec<ConstantScalar>> {
    let n = m.dim();
    let mut mm = m.clone();
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..n).find(|&r| !mm.entry(r, col).is_zero()) else {
            continue;
        };
        if p != row {
            for j in 0..n {
                let (a, b) = (mm.entry(row, j).clone(), mm.entry(p, j).clone());
                mm.set_entry(row, j, b);
                mm.set_entry(p, j, a);
            }
        }
        let pinv = mm.entry(row, col).inv().expect("nonzero pivot");
        for j in 0..n {
            mm.set_entry(row, j, mm.entry(row, j).mul(&pinv));
        }
        for r in 0..n {
            if r == row || mm.entry(r, col).is_zero() {
                continue;
            }
            let f = mm.entry(r, col).clone();
            for j in 0..n {
                let v = mm.entry(r, j).sub(&f.mul(mm.entry(row, j)));
                mm.set_entry(r, j, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![ConstantScalar::zero(); n];
        v[free] = ConstantScalar::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = mm
                .entry(r, free)
                .as_scalar()
                .expect("constant rref")
                .neg();
        }
        basis.push(v);
    }
    basis
}

/// Solve the Sylvester equation A X - X B = C over the scalar field, where
/// the spectra of A and B are disjoint (unique solution). All matrices are
/// constant; sizes may differ (A is m x m, B is k x k, C and X are m x k).
pub fn solve_sylvester(
    a: &[Vec<ConstantScalar>],
    b: &[Vec<ConstantScalar>],
    c: &[Vec<ConstantScalar>],
) -> Result<Vec<Vec<ConstantScalar>>> {
    let m = a.len();
    let k = b.len();
    // vectorize: (I_k (x) A - B^T (x) I_m) vec(X) = vec(C), column-major vec
    let dim = m * k;
    let mut big = vec![vec![ConstantScalar::zero(); dim + 1]; dim];
    let idx = |i: usize, j: usize| j * m + i;
    for j in 0..k {
        for i in 0..m {
            let r = idx(i, j);
            for l in 0..m {
                big[r][idx(l, j)] = big[r][idx(l, j)].add(&a[i][l]);
            }
            for l in 0..k {
                big[r][idx(i, l)] = big[r][idx(i, l)].sub(&b[l][j]);
            }
            big[r][dim] = c[i][j].clone();
        }
    }
    let sol = solve_linear_system(&mut big, dim)?;
    let mut x = vec![vec![ConstantScalar::zero(); k]; m];
    for j in 0..k {
        for i in 0..m {
            x[i][j] = sol[idx(i, j)].clone();
        }
    }
    Ok(x)
}

/// Gaussian elimination on an augmented system (n unknowns); errors when the
/// system is singular or inconsistent.
pub fn solve_linear_system(
    aug: &mut [Vec<ConstantScalar>],
    n: usize,
) -> Result<Vec<ConstantScalar>> {
    let rows = aug.len();
    let mut row = 0;
    let mut pivots = Vec::new();
    for col in 0..n {
        let Some(p) = (row..rows).find(|&r| !aug[r][col].is_zero()) else {
            continue;
        };
        aug.swap(row, p);
        let pinv = aug[row][col].inv()?;
        for j in col..=n {
            aug[row][j] = aug[row][j].mul(&pinv);
        }
        for r in 0..rows {
            if r == row || aug[r][col].is_zero() {
                continue;
            }
            let f = aug[r][col].clone();
            for j in col..=n {
                let v = aug[r][j].sub(&f.mul(&aug[row][j]));
                aug[r][j] = v;
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    if pivots.len() < n {
        return Err(CoreError::SingularMatrix {
            det: "0".to_string(),
        });
    }
    for r in row..rows {
        if !aug[r][n].is_zero() {
            return Err(CoreError::Internal("inconsistent linear system".into()));
        }
    }
    let mut out = vec![ConstantScalar::zero(); n];
    for (r, &pc) in pivots.iter().enumerate() {
        out[pc] = aug[r][n].clone();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::ratfunc;

    #[test]
    fn identity_inverse() {
        let i2 = RatMatrix::identity(2);
        assert_eq!(i2.inverse().unwrap(), i2);
    }

    #[test]
    fn unipotent_inverse() {
        // [[1,0],[x,1]] -> [[1,0],[-x,1]]
        let m = RatMatrix::from_rows(vec![
            vec![RatFunc::one(), RatFunc::zero()],
            vec![RatFunc::x(), RatFunc::one()],
        ])
        .unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(inv.entry(1, 0), &RatFunc::x().neg());
        assert!(m.mul(&inv).is_identity());
    }

    #[test]
    fn adjugate_2x2_example() {
        // [[x,1],[1,x]]^{-1} = 1/(x^2-1) [[x,-1],[-1,x]]
        let m = RatMatrix::from_rows(vec![
            vec![RatFunc::x(), RatFunc::one()],
            vec![RatFunc::one(), RatFunc::x()],
        ])
        .unwrap();
        let inv = m.inverse().unwrap();
        let d = ratfunc(&[-1, 0, 1], &[1]);
        assert_eq!(inv.entry(0, 0), &RatFunc::x().div(&d).unwrap());
        assert_eq!(inv.entry(0, 1), &RatFunc::one().neg().div(&d).unwrap());
        assert!(m.mul(&inv).is_identity());
    }

    #[test]
    fn singular_matrix_rejected() {
        let m = RatMatrix::from_rows(vec![
            vec![RatFunc::x(), RatFunc::x()],
            vec![RatFunc::one(), RatFunc::one()],
        ])
        .unwrap();
        assert!(matches!(m.inverse(), Err(CoreError::SingularMatrix { .. })));
        let v = m.kernel_vector().unwrap();
        assert!(!v.iter().all(|e| e.is_zero()));
        assert!(m.mul_vec(&v).iter().all(|e| e.is_zero()));
    }

    #[test]
    fn characteristic_polynomial_and_eigenvalues() {
        // [[0,1],[-2,3]]: char poly t^2 - 3t + 2, eigenvalues 1, 2
        let m = constant_matrix(
            2,
            vec![
                ConstantScalar::from_integer(0),
                ConstantScalar::from_integer(1),
                ConstantScalar::from_integer(-2),
                ConstantScalar::from_integer(3),
            ],
        );
        let cp = char_poly(&m).unwrap();
        assert_eq!(cp, Poly::from_i64(&[2, -3, 1]));
        let ev = rational_eigenvalues(&m).unwrap();
        assert_eq!(
            ev,
            vec![
                BigRational::from_integer(1.into()),
                BigRational::from_integer(2.into())
            ]
        );
    }

    #[test]
    fn unsplit_spectrum_reported() {
        // rotation-like matrix with irrational eigenvalues
        let m = constant_matrix(
            2,
            vec![
                ConstantScalar::from_integer(0),
                ConstantScalar::from_integer(1),
                ConstantScalar::from_integer(1),
                ConstantScalar::from_integer(0),
            ],
        );
        // t^2 - 1 splits; use t^2 - 2 instead
        let m2 = constant_matrix(
            2,
            vec![
                ConstantScalar::from_integer(0),
                ConstantScalar::from_integer(2),
                ConstantScalar::from_integer(1),
                ConstantScalar::from_integer(0),
            ],
        );
        assert!(rational_eigenvalues(&m).is_ok());
        assert!(matches!(
            rational_eigenvalues(&m2),
            Err(CoreError::SpectrumSplit(_))
        ));
    }

    #[test]
    fn sylvester_solve() {
        // A = [[1]], B = [[2]], C = [[3]] -> X = -3
        let a = vec![vec![ConstantScalar::from_integer(1)]];
        let b = vec![vec![ConstantScalar::from_integer(2)]];
        let c = vec![vec![ConstantScalar::from_integer(3)]];
        let x = solve_sylvester(&a, &b, &c).unwrap();
        assert_eq!(x[0][0], ConstantScalar::from_integer(-3));
    }

    #[test]
    fn series_matrix_inverse() {
        use crate::series::{expand_ratfunc, ExpansionPoint};
        let n = 12;
        let a = SeriesMatrix::from_fn(2, |i, j| {
            let f = match (i, j) {
                (0, 0) => ratfunc(&[1, 1], &[1]),
                (0, 1) => ratfunc(&[0, 1], &[1]),
                (1, 0) => ratfunc(&[0, 0, 3], &[1]),
                (1, 1) => ratfunc(&[2], &[1, -1]),
                _ => unreachable!(),
            };
            expand_ratfunc(&f, ExpansionPoint::Zero, n, 1).unwrap()
        });
        let inv = a.inverse().unwrap();
        let prod = a.mul(&inv);
        let id = SeriesMatrix::identity(2, prod.trunc());
        assert!(prod.sub(&id).is_zero_to_order());
    }
}
