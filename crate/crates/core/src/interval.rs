//! Closed real intervals and interval matrices.
//!
//! Bounds are rounded outward with error-free transformations: the rounding
//! error of each floating-point sum or product is recovered exactly (two-sum,
//! fused multiply-add), and a bound moves one unit in the last place only when
//! the exact result lies on the wrong side of the rounded one. Exact operations
//! therefore keep exact endpoints, which matters for small-integer data.

use std::fmt;
use std::ops::{Add, Mul, Neg};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, SymMatrix};

/// How interval bounds are rounded.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Rounding {
    /// Directed rounding toward the enclosing side (at most one ulp per bound).
    #[default]
    Outward,
    /// Round-to-nearest; no enclosure guarantee. For heuristic paths only.
    Nearest,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

pub(crate) fn add_down(a: f64, b: f64) -> f64 {
    let (s, err) = two_sum(a, b);
    if s.is_infinite() {
        return if s > 0.0 && a.is_finite() && b.is_finite() {
            f64::MAX
        } else {
            s
        };
    }
    if err < 0.0 {
        s.next_down()
    } else {
        s
    }
}

pub(crate) fn add_up(a: f64, b: f64) -> f64 {
    let (s, err) = two_sum(a, b);
    if s.is_infinite() {
        return if s < 0.0 && a.is_finite() && b.is_finite() {
            f64::MIN
        } else {
            s
        };
    }
    if err > 0.0 {
        s.next_up()
    } else {
        s
    }
}

// Below this magnitude the fma residual may itself be inexact.
const UNDERFLOW_GUARD: f64 = 1e-290;

pub(crate) fn mul_down(a: f64, b: f64) -> f64 {
    let p = a * b;
    if p.is_infinite() {
        return if p > 0.0 { f64::MAX } else { p };
    }
    if p.abs() < UNDERFLOW_GUARD && a != 0.0 && b != 0.0 {
        return p.next_down();
    }
    if a.mul_add(b, -p) < 0.0 {
        p.next_down()
    } else {
        p
    }
}

pub(crate) fn mul_up(a: f64, b: f64) -> f64 {
    let p = a * b;
    if p.is_infinite() {
        return if p < 0.0 { f64::MIN } else { p };
    }
    if p.abs() < UNDERFLOW_GUARD && a != 0.0 && b != 0.0 {
        return p.next_up();
    }
    if a.mul_add(b, -p) > 0.0 {
        p.next_up()
    } else {
        p
    }
}

/// Closed interval `[inf, sup]` with finite bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInterval")]
pub struct Interval {
    inf: f64,
    sup: f64,
}

#[derive(Deserialize)]
struct RawInterval {
    inf: f64,
    sup: f64,
}

impl TryFrom<RawInterval> for Interval {
    type Error = Error;

    fn try_from(raw: RawInterval) -> Result<Self> {
        Interval::new(raw.inf, raw.sup)
    }
}

impl Interval {
    pub fn new(inf: f64, sup: f64) -> Result<Self> {
        if !inf.is_finite() || !sup.is_finite() || inf > sup {
            return Err(Error::InvalidInterval { inf, sup });
        }
        Ok(Self { inf, sup })
    }

    /// Degenerate interval `[x, x]`.
    ///
    /// # Panics
    /// If `x` is not finite.
    pub fn point(x: f64) -> Self {
        assert!(x.is_finite(), "interval bound must be finite");
        Self { inf: x, sup: x }
    }

    pub fn zero() -> Self {
        Self::point(0.0)
    }

    pub fn inf(&self) -> f64 {
        self.inf
    }

    pub fn sup(&self) -> f64 {
        self.sup
    }

    pub fn mid(&self) -> f64 {
        let m = 0.5 * (self.inf + self.sup);
        if m.is_finite() {
            m
        } else {
            0.5 * self.inf + 0.5 * self.sup
        }
    }

    /// Radius, rounded up so that `[mid - rad, mid + rad]` covers the interval.
    pub fn rad(&self) -> f64 {
        let m = self.mid();
        add_up(self.sup, -m).max(add_up(m, -self.inf))
    }

    pub fn width(&self) -> f64 {
        add_up(self.sup, -self.inf)
    }

    pub fn is_degenerate(&self) -> bool {
        self.inf == self.sup
    }

    pub fn contains(&self, x: f64) -> bool {
        self.inf <= x && x <= self.sup
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.inf <= other.inf && other.sup <= self.sup
    }

    pub fn add_with(self, other: Interval, rounding: Rounding) -> Interval {
        match rounding {
            Rounding::Outward => Interval {
                inf: add_down(self.inf, other.inf),
                sup: add_up(self.sup, other.sup),
            },
            Rounding::Nearest => Interval {
                inf: self.inf + other.inf,
                sup: self.sup + other.sup,
            },
        }
    }

    pub fn mul_with(self, other: Interval, rounding: Rounding) -> Interval {
        let pairs = [
            (self.inf, other.inf),
            (self.inf, other.sup),
            (self.sup, other.inf),
            (self.sup, other.sup),
        ];
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for (x, y) in pairs {
            let (down, up) = match rounding {
                Rounding::Outward => (mul_down(x, y), mul_up(x, y)),
                Rounding::Nearest => (x * y, x * y),
            };
            lo = lo.min(down);
            hi = hi.max(up);
        }
        Interval { inf: lo, sup: hi }
    }
}

impl Add for Interval {
    type Output = Interval;

    fn add(self, other: Interval) -> Interval {
        self.add_with(other, Rounding::Outward)
    }
}

impl Mul for Interval {
    type Output = Interval;

    fn mul(self, other: Interval) -> Interval {
        self.mul_with(other, Rounding::Outward)
    }
}

impl Neg for Interval {
    type Output = Interval;

    fn neg(self) -> Interval {
        Interval {
            inf: -self.sup,
            sup: -self.inf,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_degenerate() {
            write!(f, "{}", self.inf)
        } else {
            write!(f, "[{}, {}]", self.inf, self.sup)
        }
    }
}

pub fn interval_add(a: Interval, b: Interval) -> Interval {
    a + b
}

pub fn interval_mul(a: Interval, b: Interval) -> Interval {
    a * b
}

/// Dense row-major matrix of intervals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawIntervalMatrix", into = "RawIntervalMatrix")]
pub struct IntervalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Interval>,
}

#[derive(Serialize, Deserialize)]
struct RawIntervalMatrix {
    rows: usize,
    cols: usize,
    inf: Vec<Vec<f64>>,
    sup: Vec<Vec<f64>>,
}

impl TryFrom<RawIntervalMatrix> for IntervalMatrix {
    type Error = Error;

    fn try_from(raw: RawIntervalMatrix) -> Result<Self> {
        let shape_ok = |m: &Vec<Vec<f64>>| m.len() == raw.rows && m.iter().all(|r| r.len() == raw.cols);
        if !shape_ok(&raw.inf) || !shape_ok(&raw.sup) {
            return Err(Error::Input(format!(
                "interval matrix bounds must be {}x{}",
                raw.rows, raw.cols
            )));
        }
        let entries = raw
            .inf
            .iter()
            .flatten()
            .zip(raw.sup.iter().flatten())
            .map(|(&lo, &hi)| Interval::new(lo, hi))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            rows: raw.rows,
            cols: raw.cols,
            entries,
        })
    }
}

impl From<IntervalMatrix> for RawIntervalMatrix {
    fn from(m: IntervalMatrix) -> Self {
        let bound = |f: fn(&Interval) -> f64| {
            m.entries
                .chunks(m.cols.max(1))
                .take(m.rows)
                .map(|row| row.iter().map(f).collect())
                .collect()
        };
        RawIntervalMatrix {
            rows: m.rows,
            cols: m.cols,
            inf: bound(Interval::inf),
            sup: bound(Interval::sup),
        }
    }
}

impl IntervalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Interval>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Input(format!(
                "{} entries supplied for a {rows}x{cols} interval matrix",
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Interval::zero(); rows * cols],
        }
    }

    /// Degenerate interval matrix holding exactly `m`.
    pub fn from_point(m: &Matrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.as_slice().iter().map(|&x| Interval::point(x)).collect(),
        }
    }

    pub fn from_bounds(inf: &Matrix, sup: &Matrix) -> Result<Self> {
        if inf.shape() != sup.shape() {
            return Err(Error::ShapeMismatch {
                expected: inf.shape(),
                found: sup.shape(),
            });
        }
        let entries = inf
            .as_slice()
            .iter()
            .zip(sup.as_slice())
            .map(|(&lo, &hi)| Interval::new(lo, hi))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            rows: inf.rows(),
            cols: inf.cols(),
            entries,
        })
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

    pub fn get(&self, i: usize, j: usize) -> Interval {
        self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[Interval] {
        &self.entries
    }

    fn map_real(&self, f: fn(&Interval) -> f64) -> Matrix {
        let data = self.entries.iter().map(f).collect();
        Matrix::new(self.rows, self.cols, data).expect("shape is consistent")
    }

    pub fn inf(&self) -> Matrix {
        self.map_real(Interval::inf)
    }

    pub fn sup(&self) -> Matrix {
        self.map_real(Interval::sup)
    }

    /// Midpoint matrix `Mid A`.
    pub fn mid(&self) -> Matrix {
        self.map_real(Interval::mid)
    }

    /// Radius matrix `Rad A`, entries rounded up.
    pub fn rad(&self) -> Matrix {
        self.map_real(Interval::rad)
    }

    pub fn add_with(&self, other: &IntervalMatrix, rounding: Rounding) -> Result<IntervalMatrix> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                expected: self.shape(),
                found: other.shape(),
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add_with(*b, rounding))
            .collect();
        Ok(IntervalMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Membership test `inf <= m <= sup` entrywise.
    pub fn contains(&self, m: &Matrix) -> Result<bool> {
        if self.shape() != m.shape() {
            return Err(Error::ShapeMismatch {
                expected: self.shape(),
                found: m.shape(),
            });
        }
        Ok(self.entries.iter().zip(m.as_slice()).all(|(iv, &x)| iv.contains(x)))
    }

    /// `Mid A` and `Rad A` as symmetric matrices.
    ///
    /// Fails unless both are symmetric within `1e-12 * max|entry|`.
    pub fn symmetric_parts(&self) -> Result<(SymMatrix, SymMatrix)> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch {
                expected: (self.rows, self.rows),
                found: self.shape(),
            });
        }
        let mid = SymMatrix::from_matrix(&self.mid())?;
        let rad = SymMatrix::from_matrix(&self.rad())?;
        Ok((mid, rad))
    }
}

/// Entrywise interval sum `A + B`.
pub fn im_add(a: &IntervalMatrix, b: &IntervalMatrix) -> Result<IntervalMatrix> {
    a.add_with(b, Rounding::Outward)
}

/// Interval scaling of a real matrix: entry `(i, j)` is `[a_ij, a_ij] * p`.
pub fn scale(a: &Matrix, p: Interval) -> IntervalMatrix {
    scale_with(a, p, Rounding::Outward)
}

pub fn scale_with(a: &Matrix, p: Interval, rounding: Rounding) -> IntervalMatrix {
    let entries = a
        .as_slice()
        .iter()
        .map(|&x| Interval::point(x).mul_with(p, rounding))
        .collect();
    IntervalMatrix {
        rows: a.rows(),
        cols: a.cols(),
        entries,
    }
}

pub fn contains(a: &IntervalMatrix, m: &Matrix) -> Result<bool> {
    a.contains(m)
}
