//! Linear parametric symmetric matrices `A(p) = Σ A⁽ᵏ⁾ pₖ` over a parameter box.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{im_add, scale, Interval, IntervalMatrix};
use crate::linalg::{eigenvalues_sym, invert, Matrix, Property, SymMatrix, Tolerance};

/// Absolute slack (relative to the bound magnitude) allowed when checking that
/// a point lies in the box.
const BOX_SLACK: f64 = 1e-12;

/// Default cap on the number of enumerated parameter vertices.
pub const DEFAULT_VERTEX_BUDGET: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParameterBox {
    intervals: Vec<Interval>,
}

impl ParameterBox {
    pub fn new(intervals: Vec<Interval>) -> Self {
        Self { intervals }
    }

    pub fn from_bounds(bounds: &[(f64, f64)]) -> Result<Self> {
        let intervals = bounds
            .iter()
            .map(|&(lo, hi)| Interval::new(lo, hi))
            .collect::<Result<_>>()?;
        Ok(Self { intervals })
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn get(&self, k: usize) -> Interval {
        self.intervals[k]
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn inf(&self) -> Vec<f64> {
        self.intervals.iter().map(Interval::inf).collect()
    }

    pub fn sup(&self) -> Vec<f64> {
        self.intervals.iter().map(Interval::sup).collect()
    }

    pub fn mid(&self) -> Vec<f64> {
        self.intervals.iter().map(Interval::mid).collect()
    }

    pub fn rad(&self) -> Vec<f64> {
        self.intervals.iter().map(Interval::rad).collect()
    }

    /// Checks `p ∈ box` with a `1e-12 * (1 + |bound|)` slack per bound.
    pub fn check_point(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.len() {
            return Err(Error::Dimension(format!(
                "parameter vector has length {}, box has {}",
                p.len(),
                self.len()
            )));
        }
        for (index, (iv, &value)) in self.intervals.iter().zip(p).enumerate() {
            let lo_ok = value >= iv.inf() - BOX_SLACK * (1.0 + iv.inf().abs());
            let hi_ok = value <= iv.sup() + BOX_SLACK * (1.0 + iv.sup().abs());
            if !(lo_ok && hi_ok) {
                return Err(Error::OutsideBox {
                    index,
                    value,
                    inf: iv.inf(),
                    sup: iv.sup(),
                });
            }
        }
        Ok(())
    }

    /// Clamps `p` into the box coordinatewise.
    pub fn project(&self, p: &mut [f64]) {
        for (x, iv) in p.iter_mut().zip(&self.intervals) {
            *x = x.clamp(iv.inf(), iv.sup());
        }
    }
}

/// `A(p) = Σₖ A⁽ᵏ⁾ pₖ` with symmetric `n×n` coefficients and `p` in a box.
#[derive(Clone, Debug, PartialEq)]
pub struct ParametricSymMatrix {
    n: usize,
    coeffs: Vec<SymMatrix>,
    params: ParameterBox,
}

impl ParametricSymMatrix {
    pub fn new(coeffs: Vec<SymMatrix>, params: ParameterBox) -> Result<Self> {
        if coeffs.len() != params.len() {
            return Err(Error::Dimension(format!(
                "{} coefficient matrices but {} parameters",
                coeffs.len(),
                params.len()
            )));
        }
        let n = match coeffs.first() {
            Some(c) => c.n(),
            None => return Err(Error::Dimension("at least one coefficient matrix is required".into())),
        };
        if let Some(bad) = coeffs.iter().position(|c| c.n() != n) {
            return Err(Error::Dimension(format!(
                "coefficient {bad} is {0}x{0}, expected {n}x{n}",
                coeffs[bad].n()
            )));
        }
        Ok(Self { n, coeffs, params })
    }

    /// Dimension `n` of the matrices.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of parameters `K`.
    pub fn k(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[SymMatrix] {
        &self.coeffs
    }

    pub fn params(&self) -> &ParameterBox {
        &self.params
    }

    /// Replaces the parameter box, keeping the coefficients.
    pub fn with_params(&self, params: ParameterBox) -> Result<Self> {
        Self::new(self.coeffs.clone(), params)
    }

    /// Upper bound on `‖A(p)‖` over the box, in the `max|entry| * n` norm.
    pub fn norm_bound(&self) -> f64 {
        self.coeffs
            .iter()
            .zip(self.params.intervals())
            .map(|(c, iv)| c.norm_bound() * iv.inf().abs().max(iv.sup().abs()))
            .sum()
    }

    /// The problem-wide definiteness tolerance under `policy`.
    ///
    /// All deciders and the oracle share this value, so a matrix anywhere in
    /// the family is judged against the same `tau`.
    pub fn tolerance(&self, policy: Tolerance) -> f64 {
        policy.resolve(self.norm_bound())
    }

    /// `A(p)`; `p` must lie in the box.
    pub fn evaluate(&self, p: &[f64]) -> Result<SymMatrix> {
        self.params.check_point(p)?;
        Ok(self.combine(p))
    }

    /// `Σ A⁽ᵏ⁾ wₖ` for arbitrary weights, no box check.
    pub(crate) fn combine(&self, w: &[f64]) -> SymMatrix {
        let mut acc = SymMatrix::zeros(self.n);
        for (c, &x) in self.coeffs.iter().zip(w) {
            if x != 0.0 {
                acc.add_scaled(x, c);
            }
        }
        acc
    }

    /// Interval evaluation `Σ A⁽ᵏ⁾ 𝒑ₖ`; encloses every `A(p)`.
    pub fn relax(&self) -> IntervalMatrix {
        let mut acc = IntervalMatrix::zeros(self.n, self.n);
        for (c, &iv) in self.coeffs.iter().zip(self.params.intervals()) {
            acc = im_add(&acc, &scale(c.as_matrix(), iv)).expect("conformable");
        }
        acc
    }

    /// Midpoint preconditioning: `C = A(mid p)⁻¹` and `M = Σ (C A⁽ᵏ⁾) 𝒑ₖ`.
    ///
    /// `C A⁽ᵏ⁾` is generally not symmetric, so `M` is a general interval matrix.
    pub fn precondition_relax(&self) -> Result<Preconditioned> {
        let a_mid = self.combine(&self.params.mid());
        let c = invert(a_mid.as_matrix())?;
        let mut m = IntervalMatrix::zeros(self.n, self.n);
        for (coeff, &iv) in self.coeffs.iter().zip(self.params.intervals()) {
            let ca = c.matmul(coeff.as_matrix())?;
            m = im_add(&m, &scale(&ca, iv))?;
        }
        Ok(Preconditioned {
            preconditioner: c,
            relaxation: m,
        })
    }

    /// Vertex set `pₖ ∈ {p̲ₖ, p̄ₖ}` after fixing coordinates that cannot matter.
    ///
    /// A coordinate is fixed when its interval is degenerate, at `p̲ₖ` when
    /// `A⁽ᵏ⁾` is PSD, and at `p̄ₖ` when `A⁽ᵏ⁾` is NSD (semidefiniteness judged
    /// with `tolerance` applied to each coefficient). The same reductions are
    /// valid for both PSD and PD checks. Free coordinates are enumerated in
    /// Gray-code order.
    pub fn vertices(&self, _property: Property, tolerance: Tolerance) -> Result<VertexEnumeration> {
        let mut fixed = Vec::with_capacity(self.k());
        for (c, iv) in self.coeffs.iter().zip(self.params.intervals()) {
            if iv.is_degenerate() {
                fixed.push(Some(iv.inf()));
                continue;
            }
            let eig = eigenvalues_sym(c)?;
            let tau = tolerance.for_matrix(c);
            let lo = eig.first().copied().unwrap_or(0.0);
            let hi = eig.last().copied().unwrap_or(0.0);
            fixed.push(if lo >= -tau {
                Some(iv.inf())
            } else if hi <= tau {
                Some(iv.sup())
            } else {
                None
            });
        }
        Ok(VertexEnumeration::new(&self.params, fixed))
    }

    pub fn to_problem(&self) -> ProblemFile {
        ProblemFile {
            n: self.n,
            k: self.k(),
            coefficients: self.coeffs.iter().map(SymMatrix::to_rows).collect(),
            parameters: self.params.intervals().to_vec(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ProblemFile = serde_json::from_str(text).map_err(|e| Error::Input(e.to_string()))?;
        file.into_parametric()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_problem()).expect("serializable")
    }
}

/// Result of midpoint preconditioning.
#[derive(Clone, Debug)]
pub struct Preconditioned {
    pub preconditioner: Matrix,
    pub relaxation: IntervalMatrix,
}

/// On-disk problem layout:
/// `{"n":2,"K":2,"coefficients":[[[..]]],"parameters":[{"inf":..,"sup":..}]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProblemFile {
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub coefficients: Vec<Vec<Vec<f64>>>,
    pub parameters: Vec<Interval>,
}

impl ProblemFile {
    pub fn into_parametric(self) -> Result<ParametricSymMatrix> {
        if self.coefficients.len() != self.k || self.parameters.len() != self.k {
            return Err(Error::Input(format!(
                "K = {} but {} coefficient matrices and {} parameters given",
                self.k,
                self.coefficients.len(),
                self.parameters.len()
            )));
        }
        let coeffs = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(k, rows)| {
                if rows.len() != self.n || rows.iter().any(|r| r.len() != self.n) {
                    return Err(Error::Input(format!("coefficient {k} is not {0}x{0}", self.n)));
                }
                SymMatrix::from_rows(rows)
            })
            .collect::<Result<Vec<_>>>()?;
        ParametricSymMatrix::new(coeffs, ParameterBox::new(self.parameters))
    }
}

/// One parameter vertex, with the coordinates fixed by reductions marked.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexAssignment {
    pub values: Vec<f64>,
    pub fixed_mask: Vec<bool>,
}

/// Gray-code enumeration of reduced parameter vertices.
#[derive(Clone, Debug)]
pub struct VertexEnumeration {
    base: Vec<f64>,
    fixed_mask: Vec<bool>,
    free: Vec<(usize, f64, f64)>,
    next: u64,
    end: Option<u64>,
}

impl VertexEnumeration {
    fn new(params: &ParameterBox, fixed: Vec<Option<f64>>) -> Self {
        let mut base = Vec::with_capacity(fixed.len());
        let mut free = Vec::new();
        for (k, f) in fixed.iter().enumerate() {
            let iv = params.get(k);
            match f {
                Some(v) => base.push(*v),
                None => {
                    base.push(iv.inf());
                    free.push((k, iv.inf(), iv.sup()));
                }
            }
        }
        let end = (free.len() < 64).then(|| 1u64 << free.len());
        Self {
            base,
            fixed_mask: fixed.iter().map(Option::is_some).collect(),
            free,
            next: 0,
            end,
        }
    }

    pub fn free_count(&self) -> usize {
        self.free.len()
    }

    pub fn fixed_mask(&self) -> &[bool] {
        &self.fixed_mask
    }

    /// Total number of vertices, `None` if it does not fit in a `u64`.
    pub fn total(&self) -> Option<u64> {
        self.end
    }

    pub fn within_budget(&self, budget: u64) -> bool {
        self.end.is_some_and(|n| n <= budget)
    }

    fn assignment(&self, index: u64) -> VertexAssignment {
        let gray = index ^ (index >> 1);
        let mut values = self.base.clone();
        for (bit, &(k, lo, hi)) in self.free.iter().enumerate() {
            values[k] = if gray >> bit & 1 == 1 { hi } else { lo };
        }
        VertexAssignment {
            values,
            fixed_mask: self.fixed_mask.clone(),
        }
    }
}

impl Iterator for VertexEnumeration {
    type Item = VertexAssignment;

    fn next(&mut self) -> Option<VertexAssignment> {
        let end = self.end.unwrap_or(u64::MAX);
        if self.next >= end {
            return None;
        }
        let v = self.assignment(self.next);
        self.next += 1;
        Some(v)
    }
}
