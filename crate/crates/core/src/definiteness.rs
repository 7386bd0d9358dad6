//! Decision procedures for strong and weak positive (semi)definiteness of a
//! parametric matrix, plus the classical sign-vertex checks for plain
//! symmetric interval matrices.
//!
//! Every decider returns a three-valued [`Verdict`]. Vertex checks decide
//! exactly (at the problem tolerance). One-shot splitting conditions and the
//! regularity route are sufficient only and answer `Unknown` when they fail;
//! the weak necessary conditions can only disprove.

use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::IntervalMatrix;
use crate::linalg::{
    eigenvalues_sym, min_eig, psd_split, spectral_radius_nonneg, Property, PsdSplit, SymMatrix, Tolerance,
};
use crate::parametric::{ParametricSymMatrix, DEFAULT_VERTEX_BUDGET};

/// `rho(Rad M)` must stay below `1 - BEECK_MARGIN`.
pub const BEECK_MARGIN: f64 = 1e-9;

/// Largest dimension accepted by the `2^(n-1)` sign-vertex checks.
pub const MAX_SIGN_DIMENSION: usize = 24;

pub const DEFAULT_SEED: u64 = 0x5EED;
pub const DEFAULT_RESTARTS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Proved,
    Disproved,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Proved => "proved",
            Status::Disproved => "disproved",
            Status::Unknown => "unknown",
        })
    }
}

/// The procedure that produced a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// PSD splitting sufficient condition.
    Split,
    /// Positive definiteness at the midpoint plus the Beeck regularity test.
    Regularity,
    /// Reduced vertex enumeration.
    Vertex,
    /// Splitting necessary condition for weak definiteness.
    Necessary,
    /// Heuristic search for a weakly definite member.
    Witness,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Split => "split",
            Method::Regularity => "regularity",
            Method::Vertex => "vertex",
            Method::Necessary => "necessary",
            Method::Witness => "witness",
        })
    }
}

/// What the caller wants decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Goal {
    StrongPsd,
    StrongPd,
    WeakPsd,
    WeakPd,
}

impl Goal {
    pub fn property(self) -> Property {
        match self {
            Goal::StrongPsd | Goal::WeakPsd => Property::Psd,
            Goal::StrongPd | Goal::WeakPd => Property::Pd,
        }
    }

    pub fn is_strong(self) -> bool {
        matches!(self, Goal::StrongPsd | Goal::StrongPd)
    }
}

impl fmt::Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Goal::StrongPsd => "strong-psd",
            Goal::StrongPd => "strong-pd",
            Goal::WeakPsd => "weak-psd",
            Goal::WeakPd => "weak-pd",
        })
    }
}

/// Evidence attached to a verdict. Proved and Disproved verdicts always
/// carry one that can be re-checked independently.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Every reduced vertex passed; `worst_vertex` attains `min_eig`.
    VertexList {
        checked: u64,
        worst_vertex: Vec<f64>,
        min_eig: f64,
    },
    CounterexampleVertex {
        p: Vec<f64>,
        min_eig: f64,
    },
    SplitWitness {
        matrix: SymMatrix,
        min_eig: f64,
    },
    BeeckWitness {
        rho: f64,
        rho_lower: f64,
        converged: bool,
        midpoint_min_eig: f64,
    },
    NecessaryFailure {
        matrix: SymMatrix,
        min_eig: f64,
    },
    /// A parameter point whose matrix has the target property.
    Witness {
        p: Vec<f64>,
        min_eig: f64,
    },
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub method: Method,
    pub property: Property,
    pub certificate: Certificate,
    /// Problem tolerance the decision was made at.
    pub tolerance: f64,
    /// The deciding eigenvalue was within `±tolerance` of zero.
    pub marginal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Verdict {
    fn new(status: Status, method: Method, property: Property, tolerance: f64) -> Self {
        Self {
            status,
            method,
            property,
            certificate: Certificate::None,
            tolerance,
            marginal: false,
            note: None,
        }
    }

    fn with_certificate(mut self, certificate: Certificate) -> Self {
        self.certificate = certificate;
        self
    }

    fn with_margin(mut self, value: f64) -> Self {
        self.marginal = value.abs() <= self.tolerance;
        self
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn is_proved(&self) -> bool {
        self.status == Status::Proved
    }

    pub fn is_disproved(&self) -> bool {
        self.status == Status::Disproved
    }
}

/// Tuning knobs shared by the deciders.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Options {
    pub tolerance: Tolerance,
    pub vertex_budget: u64,
    pub seed: u64,
    pub restarts: usize,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            tolerance: Tolerance::default(),
            vertex_budget: DEFAULT_VERTEX_BUDGET,
            seed: DEFAULT_SEED,
            restarts: DEFAULT_RESTARTS,
        }
    }
}

/// A sign vector `z ∈ {±1}ⁿ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignVector {
    z: Vec<i8>,
}

impl SignVector {
    pub fn new(z: Vec<i8>) -> Result<Self> {
        if z.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Input("sign vector entries must be +1 or -1".into()));
        }
        Ok(Self { z })
    }

    pub fn signs(&self) -> &[i8] {
        &self.z
    }

    /// All sign vectors of length `n` with `z₁ = +1`; `z` and `-z` give the
    /// same vertex matrix, so the other half is redundant.
    pub fn half_cube(n: usize) -> impl Iterator<Item = SignVector> {
        let count = if n == 0 { 1u64 } else { 1u64 << (n - 1) };
        (0..count).map(move |mask| SignVector {
            z: (0..n)
                .map(|i| if i > 0 && mask >> (i - 1) & 1 == 1 { -1 } else { 1 })
                .collect(),
        })
    }

    /// `Mid - diag(z) Rad diag(z)`.
    pub fn vertex_matrix(&self, mid: &SymMatrix, rad: &SymMatrix) -> SymMatrix {
        let n = mid.n();
        let mut m = mid.as_matrix().clone();
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] -= f64::from(self.z[i] * self.z[j]) * rad[(i, j)];
            }
        }
        SymMatrix::symmetrize(m).expect("square")
    }
}

fn split_for_condition(c: &SymMatrix, tolerance: Tolerance) -> Result<PsdSplit> {
    let eig = eigenvalues_sym(c)?;
    let tau = tolerance.for_matrix(c);
    let n = c.n();
    let (lo, hi) = (eig.first().copied().unwrap_or(0.0), eig.last().copied().unwrap_or(0.0));
    if lo >= -tau {
        Ok(PsdSplit {
            plus: c.clone(),
            minus: SymMatrix::zeros(n),
        })
    } else if hi <= tau {
        Ok(PsdSplit {
            plus: SymMatrix::zeros(n),
            minus: c.scaled(-1.0),
        })
    } else {
        psd_split(c)
    }
}

/// `Σ (A₁⁽ᵏ⁾ p̲ₖ - A₂⁽ᵏ⁾ p̄ₖ)` when `lower_first`, else `Σ (A₁⁽ᵏ⁾ p̄ₖ - A₂⁽ᵏ⁾ p̲ₖ)`.
fn split_sum(p: &ParametricSymMatrix, tolerance: Tolerance, lower_first: bool) -> Result<SymMatrix> {
    let mut acc = SymMatrix::zeros(p.n());
    for (c, iv) in p.coeffs().iter().zip(p.params().intervals()) {
        let split = split_for_condition(c, tolerance)?;
        let (for_plus, for_minus) = if lower_first {
            (iv.inf(), iv.sup())
        } else {
            (iv.sup(), iv.inf())
        };
        acc.add_scaled(for_plus, &split.plus);
        acc.add_scaled(-for_minus, &split.minus);
    }
    Ok(acc)
}

/// The matrix `S = Σ (A₁⁽ᵏ⁾ p̲ₖ - A₂⁽ᵏ⁾ p̄ₖ)` of the splitting sufficient condition.
pub fn split_sufficient_matrix(p: &ParametricSymMatrix, tolerance: Tolerance) -> Result<SymMatrix> {
    split_sum(p, tolerance, true)
}

/// The matrix `N = Σ (A₁⁽ᵏ⁾ p̄ₖ - A₂⁽ᵏ⁾ p̲ₖ)` of the weak necessary condition.
pub fn split_necessary_matrix(p: &ParametricSymMatrix, tolerance: Tolerance) -> Result<SymMatrix> {
    split_sum(p, tolerance, false)
}

fn split_condition(p: &ParametricSymMatrix, property: Property, opts: &Options) -> Result<Verdict> {
    let tau = p.tolerance(opts.tolerance);
    let s = split_sufficient_matrix(p, opts.tolerance)?;
    let lambda = min_eig(&s)?;
    let status = if property.holds(lambda, tau) {
        Status::Proved
    } else {
        Status::Unknown
    };
    Ok(Verdict::new(status, Method::Split, property, tau)
        .with_certificate(Certificate::SplitWitness {
            matrix: s,
            min_eig: lambda,
        })
        .with_margin(lambda))
}

/// Splitting sufficient condition for strong positive semidefiniteness.
pub fn strong_psd_split(p: &ParametricSymMatrix, opts: &Options) -> Result<Verdict> {
    split_condition(p, Property::Psd, opts)
}

/// Splitting sufficient condition for strong positive definiteness.
pub fn strong_pd_split(p: &ParametricSymMatrix, opts: &Options) -> Result<Verdict> {
    split_condition(p, Property::Pd, opts)
}

fn necessary_condition(p: &ParametricSymMatrix, property: Property, opts: &Options) -> Result<Verdict> {
    let tau = p.tolerance(opts.tolerance);
    let n = split_necessary_matrix(p, opts.tolerance)?;
    let lambda = min_eig(&n)?;
    let status = if property.holds(lambda, tau) {
        Status::Unknown
    } else {
        Status::Disproved
    };
    Ok(Verdict::new(status, Method::Necessary, property, tau)
        .with_certificate(Certificate::NecessaryFailure {
            matrix: n,
            min_eig: lambda,
        })
        .with_margin(lambda))
}

/// Necessary condition for weak positive semidefiniteness; can only disprove.
pub fn weak_psd_necessary(p: &ParametricSymMatrix, opts: &Options) -> Result<Verdict> {
    necessary_condition(p, Property::Psd, opts)
}

/// Necessary condition for weak positive definiteness; can only disprove.
pub fn weak_pd_necessary(p: &ParametricSymMatrix, opts: &Options) -> Result<Verdict> {
    necessary_condition(p, Property::Pd, opts)
}

/// Strong positive definiteness through regularity: `A(mid p)` positive
/// definite and the preconditioned relaxation passing `rho(Rad M) < 1`.
pub fn strong_pd_regularity(p: &ParametricSymMatrix, opts: &Options) -> Result<Verdict> {
    let tau = p.tolerance(opts.tolerance);
    let unknown = Verdict::new(Status::Unknown, Method::Regularity, Property::Pd, tau);
    let midpoint_min_eig = min_eig(&p.combine(&p.params().mid()))?;
    if !Property::Pd.holds(midpoint_min_eig, tau) {
        return Ok(unknown
            .with_margin(midpoint_min_eig)
            .with_note("midpoint matrix is not positive definite"));
    }
    let pre = match p.precondition_relax() {
        Ok(pre) => pre,
        Err(Error::Singular { .. }) => {
            return Ok(unknown.with_note("midpoint matrix is singular to working precision"));
        }
        Err(e) => return Err(e),
    };
    let rho = spectral_radius_nonneg(&pre.relaxation.rad())?;
    let certificate = Certificate::BeeckWitness {
        rho: rho.value,
        rho_lower: rho.lower,
        converged: rho.converged,
        midpoint_min_eig,
    };
    // A non-converged bracket still bounds rho from above.
    if rho.value < 1.0 - BEECK_MARGIN {
        Ok(Verdict::new(Status::Proved, Method::Regularity, Property::Pd, tau)
            .with_certificate(certificate)
            .with_margin(midpoint_min_eig))
    } else {
        Ok(unknown
            .with_certificate(certificate)
            .with_note("regularity not confirmed: rho(Rad M) >= 1"))
    }
}

fn strong_vertex(p: &ParametricSymMatrix, property: Property, opts: &Options) -> Result<Verdict> {
    let tau = p.tolerance(opts.tolerance);
    let verts = p.vertices(property, opts.tolerance)?;
    if !verts.within_budget(opts.vertex_budget) {
        return Ok(
            Verdict::new(Status::Unknown, Method::Vertex, property, tau).with_note(format!(
                "2^{} reduced vertices exceed the budget of {}",
                verts.free_count(),
                opts.vertex_budget
            )),
        );
    }
    let mut checked = 0u64;
    let mut worst: Option<(Vec<f64>, f64)> = None;
    for v in verts {
        checked += 1;
        let lambda = min_eig(&p.combine(&v.values))?;
        if !property.holds(lambda, tau) {
            return Ok(Verdict::new(Status::Disproved, Method::Vertex, property, tau)
                .with_certificate(Certificate::CounterexampleVertex {
                    p: v.values,
                    min_eig: lambda,
                })
                .with_margin(lambda));
        }
        if worst.as_ref().is_none_or(|(_, w)| lambda < *w) {
            worst = Some((v.values, lambda));
        }
    }
    let (worst_vertex, lambda) = worst.expect("at least one vertex");
    Ok(Verdict::new(Status::Proved, Method::Vertex, property, tau)
        .with_certificate(Certificate::VertexList {
            checked,
            worst_vertex,
            min_eig: lambda,
        })
        .with_margin(lambda))
}

/// Strong positive semidefiniteness by reduced vertex enumeration.
pub fn strong_psd(p: &ParametricSymMatrix, opts: &Options) -> Result<Verdict> {
    strong_vertex(p, Property::Psd, opts)
}

/// Strong positive definiteness by reduced vertex enumeration.
pub fn strong_pd(p: &ParametricSymMatrix, opts: &Options) -> Result<Verdict> {
    strong_vertex(p, Property::Pd, opts)
}

fn sign_parts(a: &IntervalMatrix) -> Result<(SymMatrix, SymMatrix)> {
    let (mid, rad) = a.symmetric_parts()?;
    if mid.n() > MAX_SIGN_DIMENSION {
        return Err(Error::Budget(format!(
            "sign-vertex enumeration needs 2^{} matrices",
            mid.n() - 1
        )));
    }
    Ok((mid, rad))
}

/// Tolerance used for plain interval matrices: the default policy applied to
/// `‖Mid A‖ + ‖Rad A‖`.
pub fn interval_tolerance(a: &IntervalMatrix) -> f64 {
    Tolerance::default().resolve(a.mid().norm_bound() + a.rad().norm_bound())
}

fn sign_vertex_check(a: &IntervalMatrix, property: Property) -> Result<bool> {
    let (mid, rad) = sign_parts(a)?;
    let tau = interval_tolerance(a);
    for z in SignVector::half_cube(mid.n()) {
        if !property.check(&z.vertex_matrix(&mid, &rad), tau)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether every symmetric member of `A` is positive semidefinite.
pub fn strong_psd_interval(a: &IntervalMatrix) -> Result<bool> {
    sign_vertex_check(a, Property::Psd)
}

/// Whether every symmetric member of `A` is positive definite.
pub fn strong_pd_interval(a: &IntervalMatrix) -> Result<bool> {
    sign_vertex_check(a, Property::Pd)
}

/// Exact smallest eigenvalue over the symmetric members of `A`:
/// the minimum over sign vectors of `min_eig(Mid - diag(z) Rad diag(z))`.
pub fn hertz_min_eig(a: &IntervalMatrix) -> Result<f64> {
    let (mid, rad) = sign_parts(a)?;
    let mut best = f64::INFINITY;
    for z in SignVector::half_cube(mid.n()) {
        best = best.min(min_eig(&z.vertex_matrix(&mid, &rad))?);
    }
    Ok(best)
}

/// Cheap lower bound `min_eig(Mid A) - rho(Rad A)` on the smallest
/// eigenvalue over the symmetric members of `A`.
pub fn rohn_min_eig_bound(a: &IntervalMatrix) -> Result<f64> {
    let (mid, rad) = a.symmetric_parts()?;
    let rad_eig = eigenvalues_sym(&rad)?;
    let rho = rad_eig.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    Ok(min_eig(&mid)? - rho)
}

fn maximize_on_coordinate(p: &ParametricSymMatrix, point: &mut [f64], k: usize, current: f64) -> Result<f64> {
    const GOLDEN: f64 = 0.618_033_988_749_895;
    const ITERS: usize = 40;
    let iv = p.params().get(k);
    let (mut lo, mut hi) = (iv.inf(), iv.sup());
    if lo == hi {
        return Ok(current);
    }
    let eval = |x: f64, point: &mut [f64]| -> Result<f64> {
        point[k] = x;
        min_eig(&p.combine(point))
    };
    let original = point[k];
    let mut best = (original, current);
    for x in [lo, hi] {
        let f = eval(x, point)?;
        if f > best.1 {
            best = (x, f);
        }
    }
    // min_eig of an affine family is concave, so golden section is exact
    // up to bracketing.
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let mut f1 = eval(x1, point)?;
    let mut f2 = eval(x2, point)?;
    for _ in 0..ITERS {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN * (hi - lo);
            f2 = eval(x2, point)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN * (hi - lo);
            f1 = eval(x1, point)?;
        }
    }
    for (x, f) in [(x1, f1), (x2, f2)] {
        if f > best.1 {
            best = (x, f);
        }
    }
    point[k] = best.0;
    Ok(best.1)
}

/// Multi-start coordinate ascent on `min_eig(A(p))` over the box. Returns the
/// first point where `property` holds at the problem tolerance.
///
/// A returned point is a constructive certificate of weak definiteness; a
/// `None` proves nothing.
pub fn find_witness(
    p: &ParametricSymMatrix,
    property: Property,
    restarts: usize,
    seed: u64,
    tolerance: Tolerance,
) -> Result<Option<(Vec<f64>, f64)>> {
    const SWEEPS: usize = 30;
    let tau = p.tolerance(tolerance);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let box_ = p.params();
    for restart in 0..restarts.max(1) {
        let mut point: Vec<f64> = if restart == 0 {
            box_.mid()
        } else {
            box_.intervals()
                .iter()
                .map(|iv| rng.gen_range(iv.inf()..=iv.sup()))
                .collect()
        };
        let mut value = min_eig(&p.combine(&point))?;
        for _ in 0..SWEEPS {
            if property.holds(value, tau) {
                break;
            }
            let before = value;
            for k in 0..p.k() {
                value = maximize_on_coordinate(p, &mut point, k, value)?;
            }
            if value - before <= 1e-12 * (1.0 + value.abs()) {
                break;
            }
        }
        if property.holds(value, tau) {
            box_.project(&mut point);
            return Ok(Some((point, value)));
        }
    }
    Ok(None)
}

/// Searches for a parameter point with `A(p)` positive definite.
pub fn weak_pd_witness(p: &ParametricSymMatrix, restarts: usize, opts: &Options) -> Result<Option<Vec<f64>>> {
    Ok(find_witness(p, Property::Pd, restarts, opts.seed, opts.tolerance)?.map(|(pt, _)| pt))
}

fn witness_verdict(p: &ParametricSymMatrix, property: Property, opts: &Options) -> Result<Verdict> {
    let tau = p.tolerance(opts.tolerance);
    Ok(
        match find_witness(p, property, opts.restarts, opts.seed, opts.tolerance)? {
            Some((point, lambda)) => Verdict::new(Status::Proved, Method::Witness, property, tau)
                .with_certificate(Certificate::Witness {
                    p: point,
                    min_eig: lambda,
                })
                .with_margin(lambda),
            None => Verdict::new(Status::Unknown, Method::Witness, property, tau)
                .with_note("no witness found; absence of a witness proves nothing"),
        },
    )
}

/// Which procedure `decide_with` may use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MethodChoice {
    #[default]
    Auto,
    Split,
    Regularity,
    Vertex,
    Necessary,
}

/// One stage of a decision cascade.
#[derive(Clone, Debug, PartialEq)]
pub struct Stage {
    pub method: Method,
    pub status: Status,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct Decision {
    pub verdict: Verdict,
    pub stages: Vec<Stage>,
}

struct Trace {
    stages: Vec<Stage>,
}

impl Trace {
    fn run(&mut self, f: impl FnOnce() -> Result<Verdict>) -> Result<Verdict> {
        let start = Instant::now();
        let v = f()?;
        self.stages.push(Stage {
            method: v.method,
            status: v.status,
            elapsed: start.elapsed(),
        });
        Ok(v)
    }
}

/// Carries a strong verdict over to a weak goal: strong implies weak on a
/// nonempty box, but a strong failure says nothing about weak.
fn strong_to_weak(mut v: Verdict) -> Verdict {
    if v.status == Status::Disproved {
        v.status = Status::Unknown;
        v.note = Some("strong failure does not decide the weak goal".into());
    }
    v
}

/// Carries a weak necessary-condition failure over to a strong goal: with no
/// definite member at all, the family is not strongly definite either.
fn weak_to_strong(mut v: Verdict) -> Verdict {
    if v.status == Status::Unknown {
        v.note = Some("necessary condition holds; strong goal undecided".into());
    }
    v
}

fn cascade(p: &ParametricSymMatrix, goal: Goal, opts: &Options, trace: &mut Trace) -> Result<Verdict> {
    let property = goal.property();
    if goal.is_strong() {
        let split = trace.run(|| split_condition(p, property, opts))?;
        if split.is_proved() {
            return Ok(split);
        }
        if property == Property::Pd {
            let reg = trace.run(|| strong_pd_regularity(p, opts))?;
            if reg.is_proved() {
                return Ok(reg);
            }
        }
        trace.run(|| strong_vertex(p, property, opts))
    } else {
        let nec = trace.run(|| necessary_condition(p, property, opts))?;
        if nec.is_disproved() {
            return Ok(nec);
        }
        let wit = trace.run(|| witness_verdict(p, property, opts))?;
        if wit.is_proved() {
            return Ok(wit);
        }
        Ok(wit.with_note("weak goal undecided: necessary condition holds and no witness was found"))
    }
}

/// Runs a decision with an explicit method choice and records each stage.
pub fn decide_with(p: &ParametricSymMatrix, goal: Goal, choice: MethodChoice, opts: &Options) -> Result<Decision> {
    let mut trace = Trace { stages: Vec::new() };
    let property = goal.property();
    let verdict = match choice {
        MethodChoice::Auto => cascade(p, goal, opts, &mut trace)?,
        MethodChoice::Split => {
            let v = trace.run(|| split_condition(p, property, opts))?;
            if goal.is_strong() {
                v
            } else {
                strong_to_weak(v)
            }
        }
        MethodChoice::Regularity => {
            // Strong positive definiteness implies the semidefinite goals.
            let mut v = trace.run(|| strong_pd_regularity(p, opts))?;
            v.property = property;
            if goal.is_strong() {
                v
            } else {
                strong_to_weak(v)
            }
        }
        MethodChoice::Vertex => {
            let v = trace.run(|| strong_vertex(p, property, opts))?;
            if goal.is_strong() {
                v
            } else {
                strong_to_weak(v)
            }
        }
        MethodChoice::Necessary => {
            let v = trace.run(|| necessary_condition(p, property, opts))?;
            if goal.is_strong() {
                weak_to_strong(v)
            } else {
                v
            }
        }
    };
    Ok(Decision {
        verdict,
        stages: trace.stages,
    })
}

/// Cheap-to-expensive cascade.
///
/// Strong goals: splitting condition, then (PD only) the regularity route,
/// then reduced vertex enumeration within the budget. Weak goals: the
/// necessary condition, then the witness search.
pub fn decide(p: &ParametricSymMatrix, goal: Goal, opts: &Options) -> Result<Verdict> {
    Ok(decide_with(p, goal, MethodChoice::Auto, opts)?.verdict)
}
