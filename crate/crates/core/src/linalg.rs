//! Dense real matrices: symmetric eigen-decomposition by cyclic Jacobi
//! rotations, definiteness tests, spectral PSD splitting, pivoted inversion
//! and the Perron root of nonnegative matrices.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative factor of the symmetry tolerance: `tau_sym = 1e-12 * max|entry|`.
pub const SYMMETRY_RTOL: f64 = 1e-12;

/// Sweep cap of the Jacobi eigensolver.
pub const JACOBI_MAX_SWEEPS: usize = 30;

/// Dense row-major real matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Input(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::Input(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                expected: (self.cols, other.cols),
                found: other.shape(),
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                expected: self.shape(),
                found: other.shape(),
            });
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Matrix { data, ..*self })
    }

    pub fn scaled(&self, s: f64) -> Matrix {
        Matrix {
            data: self.data.iter().map(|x| x * s).collect(),
            ..*self
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// `max|entry| * max(rows, cols)`, an upper bound on the spectral norm.
    pub fn norm_bound(&self) -> f64 {
        self.max_abs() * self.rows.max(self.cols) as f64
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.shape(), other.shape());
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.rows.min(self.cols) {
            for j in (i + 1)..self.cols.min(self.rows) {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|&x| x >= 0.0)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| format!("{x:>10.4}")).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        Matrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// Square real matrix that is exactly symmetric.
///
/// Construction symmetrizes through `(A + Aᵀ)/2` and remembers how far the
/// input was from symmetric.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    inner: Matrix,
    asymmetry: f64,
}

impl SymMatrix {
    /// Checked constructor: rejects non-square, non-finite, or visibly
    /// asymmetric input (beyond `1e-12 * max|entry|`).
    pub fn from_matrix(m: &Matrix) -> Result<Self> {
        if m.as_slice().iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let sym = Self::symmetrize(m.clone())?;
        let allowed = SYMMETRY_RTOL * m.max_abs();
        if sym.asymmetry > allowed {
            return Err(Error::Asymmetric {
                asymmetry: sym.asymmetry,
                allowed,
            });
        }
        Ok(sym)
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::from_matrix(&Matrix::from_rows(rows)?)
    }

    /// Unchecked symmetrization of a computed square matrix.
    pub fn symmetrize(mut m: Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::ShapeMismatch {
                expected: (m.rows, m.rows),
                found: m.shape(),
            });
        }
        let asymmetry = m.max_asymmetry();
        let n = m.rows;
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
                m[(i, j)] = avg;
                m[(j, i)] = avg;
            }
        }
        Ok(Self { inner: m, asymmetry })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            inner: Matrix::zeros(n, n),
            asymmetry: 0.0,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            inner: Matrix::identity(n),
            asymmetry: 0.0,
        }
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        Self {
            inner: Matrix::from_diagonal(d),
            asymmetry: 0.0,
        }
    }

    pub fn n(&self) -> usize {
        self.inner.rows
    }

    pub fn asymmetry(&self) -> f64 {
        self.asymmetry
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.inner
    }

    pub fn into_matrix(self) -> Matrix {
        self.inner
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.inner.to_rows()
    }

    pub fn norm_bound(&self) -> f64 {
        self.inner.norm_bound()
    }

    pub fn max_abs(&self) -> f64 {
        self.inner.max_abs()
    }

    pub fn scaled(&self, s: f64) -> SymMatrix {
        SymMatrix {
            inner: self.inner.scaled(s),
            asymmetry: 0.0,
        }
    }

    /// `self += s * other`, keeping exact symmetry.
    pub fn add_scaled(&mut self, s: f64, other: &SymMatrix) {
        assert_eq!(self.n(), other.n(), "dimension mismatch");
        for (a, b) in self.inner.data.iter_mut().zip(&other.inner.data) {
            *a += s * b;
        }
    }

    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.inner.matvec(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }
}

impl Index<(usize, usize)> for SymMatrix {
    type Output = f64;

    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.inner[idx]
    }
}

impl Serialize for SymMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.inner.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = Matrix::deserialize(d)?;
        SymMatrix::from_matrix(&m).map_err(serde::de::Error::custom)
    }
}

/// Tolerance policy for definiteness decisions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Tolerance {
    /// `tau = c * (1 + norm)`.
    Scaled(f64),
    /// A fixed absolute `tau`.
    Fixed(f64),
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::Scaled(1e-10)
    }
}

impl Tolerance {
    pub fn resolve(&self, norm: f64) -> f64 {
        match *self {
            Tolerance::Scaled(c) => c * (1.0 + norm),
            Tolerance::Fixed(t) => t,
        }
    }

    pub fn for_matrix(&self, a: &SymMatrix) -> f64 {
        self.resolve(a.norm_bound())
    }
}

/// Default definiteness tolerance `1e-10 * (1 + ‖A‖)`.
pub fn default_tolerance(a: &SymMatrix) -> f64 {
    Tolerance::default().for_matrix(a)
}

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// stored as the columns of `vectors`.
#[derive(Clone, Debug)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

fn jacobi(a: &SymMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<Matrix>)> {
    let n = a.n();
    let mut m = a.inner.clone();
    if m.data.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let mut v = want_vectors.then(|| Matrix::identity(n));

    let frob = m.data.iter().map(|x| x * x).sum::<f64>().sqrt();
    let off_norm = |m: &Matrix| {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += m[(i, j)] * m[(i, j)];
            }
        }
        (2.0 * s).sqrt()
    };

    let mut converged = false;
    for _ in 0..=JACOBI_MAX_SWEEPS {
        let off = off_norm(&m);
        if off <= f64::EPSILON * frob || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (m[(k, p)], m[(k, q)]);
                    m[(k, p)] = c * akp - s * akq;
                    m[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (m[(p, k)], m[(q, k)]);
                    m[(p, k)] = c * apk - s * aqk;
                    m[(q, k)] = s * apk + c * aqk;
                }
                m[(p, q)] = 0.0;
                m[(q, p)] = 0.0;
                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                        v[(k, p)] = c * vkp - s * vkq;
                        v[(k, q)] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    if !converged {
        return Err(Error::NotConverged {
            sweeps: JACOBI_MAX_SWEEPS,
        });
    }
    let values = (0..n).map(|i| m[(i, i)]).collect();
    Ok((values, v))
}

/// Symmetric eigen-decomposition `A = Q diag(values) Qᵀ`.
pub fn eig_sym(a: &SymMatrix) -> Result<SymEigen> {
    let (values, vectors) = jacobi(a, true)?;
    let vectors = vectors.expect("vectors requested");
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut q = Matrix::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        for k in 0..n {
            q[(k, new)] = vectors[(k, old)];
        }
    }
    Ok(SymEigen {
        values: order.iter().map(|&i| values[i]).collect(),
        vectors: q,
    })
}

/// Eigenvalues only, ascending.
pub fn eigenvalues_sym(a: &SymMatrix) -> Result<Vec<f64>> {
    let (mut values, _) = jacobi(a, false)?;
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Smallest eigenvalue; `+inf` for the empty matrix.
pub fn min_eig(a: &SymMatrix) -> Result<f64> {
    Ok(eigenvalues_sym(a)?.first().copied().unwrap_or(f64::INFINITY))
}

pub fn is_psd(a: &SymMatrix, tau: f64) -> Result<bool> {
    Ok(min_eig(a)? >= -tau)
}

pub fn is_pd(a: &SymMatrix, tau: f64) -> Result<bool> {
    Ok(min_eig(a)? > tau)
}

/// Positive semidefiniteness or positive definiteness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Property {
    Psd,
    Pd,
}

impl Property {
    /// Whether a smallest eigenvalue passes at tolerance `tau`.
    pub fn holds(self, min_eig: f64, tau: f64) -> bool {
        match self {
            Property::Psd => min_eig >= -tau,
            Property::Pd => min_eig > tau,
        }
    }

    pub fn check(self, a: &SymMatrix, tau: f64) -> Result<bool> {
        Ok(self.holds(min_eig(a)?, tau))
    }
}

/// A symmetric matrix written as the difference of two PSD matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct PsdSplit {
    pub plus: SymMatrix,
    pub minus: SymMatrix,
}

/// Spectral split `A = Q Λ⁺ Qᵀ - Q Λ⁻ Qᵀ`.
///
/// Semidefinite input is passed through unchanged: a matrix with no negative
/// eigenvalue gives `plus = A, minus = 0`, one with no positive eigenvalue
/// gives `plus = 0, minus = -A`.
pub fn psd_split(a: &SymMatrix) -> Result<PsdSplit> {
    let n = a.n();
    let eig = eig_sym(a)?;
    if eig.values.iter().all(|&l| l >= 0.0) {
        return Ok(PsdSplit {
            plus: a.clone(),
            minus: SymMatrix::zeros(n),
        });
    }
    if eig.values.iter().all(|&l| l <= 0.0) {
        return Ok(PsdSplit {
            plus: SymMatrix::zeros(n),
            minus: a.scaled(-1.0),
        });
    }
    let q = &eig.vectors;
    let mut plus = Matrix::zeros(n, n);
    let mut minus = Matrix::zeros(n, n);
    for (k, &lambda) in eig.values.iter().enumerate() {
        let (target, weight) = if lambda > 0.0 {
            (&mut plus, lambda)
        } else if lambda < 0.0 {
            (&mut minus, -lambda)
        } else {
            continue;
        };
        for i in 0..n {
            for j in i..n {
                target[(i, j)] += weight * q[(i, k)] * q[(j, k)];
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            plus[(i, j)] = plus[(j, i)];
            minus[(i, j)] = minus[(j, i)];
        }
    }
    Ok(PsdSplit {
        plus: SymMatrix::symmetrize(plus)?,
        minus: SymMatrix::symmetrize(minus)?,
    })
}

struct Lu {
    n: usize,
    lu: Matrix,
    perm: Vec<usize>,
    swaps: usize,
    min_pivot: f64,
}

fn lu_decompose(a: &Matrix) -> Result<Lu> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch {
            expected: (a.rows, a.rows),
            found: a.shape(),
        });
    }
    let n = a.rows;
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut swaps = 0;
    let mut min_pivot = f64::INFINITY;
    for col in 0..n {
        let (mut best, mut best_abs) = (col, lu[(col, col)].abs());
        for r in (col + 1)..n {
            if lu[(r, col)].abs() > best_abs {
                best = r;
                best_abs = lu[(r, col)].abs();
            }
        }
        min_pivot = min_pivot.min(best_abs);
        if best != col {
            for j in 0..n {
                lu.data.swap(col * n + j, best * n + j);
            }
            perm.swap(col, best);
            swaps += 1;
        }
        let pivot = lu[(col, col)];
        if pivot == 0.0 {
            continue;
        }
        for r in (col + 1)..n {
            let f = lu[(r, col)] / pivot;
            lu[(r, col)] = f;
            if f != 0.0 {
                for j in (col + 1)..n {
                    let u = lu[(col, j)];
                    lu[(r, j)] -= f * u;
                }
            }
        }
    }
    Ok(Lu {
        n,
        lu,
        perm,
        swaps,
        min_pivot,
    })
}

/// Determinant through Gaussian elimination with partial pivoting.
pub fn determinant(a: &Matrix) -> Result<f64> {
    let lu = lu_decompose(a)?;
    let sign = if lu.swaps % 2 == 0 { 1.0 } else { -1.0 };
    Ok((0..lu.n).fold(sign, |d, i| d * lu.lu[(i, i)]))
}

/// Inverse through Gaussian elimination with partial pivoting.
///
/// Fails with [`Error::Singular`] when the smallest pivot falls below
/// `1e-12 * ‖A‖`.
pub fn invert(a: &Matrix) -> Result<Matrix> {
    let Lu {
        n, lu, perm, min_pivot, ..
    } = lu_decompose(a)?;
    let threshold = 1e-12 * a.norm_bound();
    if n > 0 && (min_pivot <= threshold || min_pivot == 0.0) {
        return Err(Error::Singular { pivot: min_pivot });
    }
    let mut inv = Matrix::zeros(n, n);
    let mut col = vec![0.0; n];
    for j in 0..n {
        // solve L U x = P e_j
        for i in 0..n {
            col[i] = if perm[i] == j { 1.0 } else { 0.0 };
        }
        for i in 0..n {
            let mut s = col[i];
            for k in 0..i {
                s -= lu[(i, k)] * col[k];
            }
            col[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = col[i];
            for k in (i + 1)..n {
                s -= lu[(i, k)] * col[k];
            }
            col[i] = s / lu[(i, i)];
        }
        for i in 0..n {
            inv[(i, j)] = col[i];
        }
    }
    Ok(inv)
}

/// Perron root bracket of a nonnegative matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PerronRoot {
    /// Upper end of the Collatz–Wielandt bracket; this is the reported radius.
    pub value: f64,
    pub lower: f64,
    pub converged: bool,
    pub iterations: usize,
}

pub const PERRON_BRACKET_WIDTH: f64 = 1e-9;
pub const PERRON_MAX_ITERATIONS: usize = 10_000;

/// Spectral radius of a nonnegative matrix by power iteration from the
/// vector of ones with Collatz–Wielandt bracketing.
///
/// Iterates with `R + I` so the iterate stays strictly positive and periodic
/// matrices still converge; the bounds are for `R` itself. A result with
/// `converged == false` carries a valid upper bound only.
pub fn spectral_radius_nonneg(r: &Matrix) -> Result<PerronRoot> {
    if !r.is_square() {
        return Err(Error::ShapeMismatch {
            expected: (r.rows, r.rows),
            found: r.shape(),
        });
    }
    if !r.is_nonnegative() || r.as_slice().iter().any(|x| !x.is_finite()) {
        return Err(Error::Input("spectral radius needs a finite nonnegative matrix".into()));
    }
    let n = r.rows;
    if n == 0 {
        return Ok(PerronRoot {
            value: 0.0,
            lower: 0.0,
            converged: true,
            iterations: 0,
        });
    }
    let mut x = vec![1.0; n];
    let (mut lower, mut upper) = (0.0f64, f64::INFINITY);
    let mut iterations = 0;
    let mut converged = false;
    while iterations < PERRON_MAX_ITERATIONS {
        iterations += 1;
        let y = r.matvec(&x);
        let (lo, hi) = y
            .iter()
            .zip(&x)
            .map(|(yi, xi)| yi / xi)
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), q| (lo.min(q), hi.max(q)));
        lower = lower.max(lo);
        upper = upper.min(hi);
        if upper - lower < PERRON_BRACKET_WIDTH {
            converged = true;
            break;
        }
        let scale = y.iter().zip(&x).map(|(yi, xi)| yi + xi).fold(0.0f64, f64::max);
        for (xi, yi) in x.iter_mut().zip(&y) {
            // the bracket is only valid for a strictly positive iterate
            *xi = ((*xi + yi) / scale).max(f64::MIN_POSITIVE);
        }
    }

    let max_diag = (0..n).map(|i| r[(i, i)]).fold(0.0f64, f64::max);
    let max_row = (0..n).map(|i| r.row(i).iter().sum::<f64>()).fold(0.0f64, f64::max);
    let slack = 1e-12 * (1.0 + max_row);
    assert!(
        upper >= max_diag - slack && upper <= max_row + slack,
        "Perron bracket {upper} escapes [{max_diag}, {max_row}]"
    );
    Ok(PerronRoot {
        value: upper,
        lower,
        converged,
        iterations,
    })
}
