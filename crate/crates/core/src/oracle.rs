//! Brute-force reference checks. Exponential and slow on purpose; the
//! decision procedures never call into this module.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::definiteness::{Certificate, Status, Verdict};
use crate::error::{Error, Result};
use crate::linalg::{min_eig, spectral_radius_nonneg, Property, Tolerance};
use crate::parametric::ParametricSymMatrix;

pub const ORACLE_SEED: u64 = 0x5EED;

/// Largest `K` accepted by the unreduced vertex enumeration.
pub const MAX_VERTEX_PARAMETERS: usize = 20;

/// Largest number of grid points evaluated by [`SampleScheme::Grid`].
pub const MAX_GRID_POINTS: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleScheme {
    /// `d` equally spaced points per non-degenerate coordinate, endpoints included.
    Grid(usize),
    /// `count` uniform samples from the box.
    Random { count: usize, seed: u64 },
    /// All `2^K` endpoint combinations, no reductions.
    Vertices,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleMin {
    pub min_eig: f64,
    pub argmin: Vec<f64>,
    pub samples: u64,
}

fn vertex_point(p: &ParametricSymMatrix, mask: u64) -> Vec<f64> {
    p.params()
        .intervals()
        .iter()
        .enumerate()
        .map(|(k, iv)| if mask >> k & 1 == 1 { iv.sup() } else { iv.inf() })
        .collect()
}

fn check_vertex_budget(p: &ParametricSymMatrix) -> Result<()> {
    if p.k() > MAX_VERTEX_PARAMETERS {
        return Err(Error::Budget(format!(
            "{} parameters exceed the oracle limit of {MAX_VERTEX_PARAMETERS}",
            p.k()
        )));
    }
    Ok(())
}

/// Minimum of `min_eig(A(p))` over a sample of the box.
pub fn sample_min_eig(p: &ParametricSymMatrix, scheme: SampleScheme) -> Result<SampleMin> {
    let mut best = SampleMin {
        min_eig: f64::INFINITY,
        argmin: Vec::new(),
        samples: 0,
    };
    let mut visit = |point: Vec<f64>| -> Result<()> {
        let lambda = min_eig(&p.evaluate(&point)?)?;
        best.samples += 1;
        if lambda < best.min_eig || best.argmin.is_empty() {
            best.min_eig = lambda;
            best.argmin = point;
        }
        Ok(())
    };
    match scheme {
        SampleScheme::Vertices => {
            check_vertex_budget(p)?;
            for mask in 0..(1u64 << p.k()) {
                visit(vertex_point(p, mask))?;
            }
        }
        SampleScheme::Random { count, seed } => {
            if count == 0 {
                return Err(Error::Input("random sampling needs at least one sample".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..count {
                let point = p
                    .params()
                    .intervals()
                    .iter()
                    .map(|iv| rng.gen_range(iv.inf()..=iv.sup()))
                    .collect();
                visit(point)?;
            }
        }
        SampleScheme::Grid(d) => {
            if d < 2 {
                return Err(Error::Input("grid sampling needs at least 2 points per axis".into()));
            }
            let axes: Vec<Vec<f64>> = p
                .params()
                .intervals()
                .iter()
                .map(|iv| {
                    if iv.is_degenerate() {
                        vec![iv.inf()]
                    } else {
                        (0..d)
                            .map(|i| {
                                let t = i as f64 / (d - 1) as f64;
                                if i + 1 == d {
                                    iv.sup()
                                } else {
                                    iv.inf() + t * (iv.sup() - iv.inf())
                                }
                            })
                            .collect()
                    }
                })
                .collect();
            let total = axes
                .iter()
                .try_fold(1u64, |acc, a| acc.checked_mul(a.len() as u64))
                .filter(|&t| t <= MAX_GRID_POINTS)
                .ok_or_else(|| Error::Budget("grid too large".into()))?;
            let mut idx = vec![0usize; axes.len()];
            for _ in 0..total {
                visit(idx.iter().zip(&axes).map(|(&i, a)| a[i]).collect())?;
                for (i, a) in idx.iter_mut().zip(&axes) {
                    *i += 1;
                    if *i < a.len() {
                        break;
                    }
                    *i = 0;
                }
            }
        }
    }
    Ok(best)
}

/// Ground truth for strong definiteness: the property at every one of the
/// `2^K` parameter vertices.
pub fn full_vertex_check(p: &ParametricSymMatrix, property: Property, tolerance: Tolerance) -> Result<bool> {
    check_vertex_budget(p)?;
    let tau = p.tolerance(tolerance);
    for mask in 0..(1u64 << p.k()) {
        let a = p.evaluate(&vertex_point(p, mask))?;
        if !property.holds(min_eig(&a)?, tau) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

/// Re-verifies the certificate carried by a verdict against the problem.
pub fn recheck(p: &ParametricSymMatrix, v: &Verdict) -> Result<bool> {
    let tau = v.tolerance;
    let holds = |lambda: f64| v.property.holds(lambda, tau);
    Ok(match &v.certificate {
        Certificate::CounterexampleVertex { p: point, min_eig: m } => {
            let lambda = min_eig(&p.evaluate(point)?)?;
            close(lambda, *m) && !holds(lambda) && v.status == Status::Disproved
        }
        Certificate::VertexList {
            worst_vertex,
            min_eig: m,
            ..
        } => {
            let lambda = min_eig(&p.evaluate(worst_vertex)?)?;
            close(lambda, *m) && holds(lambda) && v.status == Status::Proved
        }
        Certificate::SplitWitness { matrix, min_eig: m } => {
            let lambda = min_eig(matrix)?;
            close(lambda, *m) && (v.status != Status::Proved || holds(lambda))
        }
        Certificate::NecessaryFailure { matrix, min_eig: m } => {
            let lambda = min_eig(matrix)?;
            close(lambda, *m) && (v.status != Status::Disproved || !holds(lambda))
        }
        Certificate::BeeckWitness { rho, .. } => {
            let pre = p.precondition_relax()?;
            let again = spectral_radius_nonneg(&pre.relaxation.rad())?;
            close(again.value, *rho) && (v.status != Status::Proved || *rho < 1.0)
        }
        Certificate::Witness { p: point, min_eig: m } => {
            let lambda = min_eig(&p.evaluate(point)?)?;
            close(lambda, *m) && holds(lambda)
        }
        Certificate::None => v.status == Status::Unknown,
    })
}
