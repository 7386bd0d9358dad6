//! Acceptance criteria. Runs every criterion, prints one line each, and exits
//! non-zero if any fails.

#![allow(clippy::needless_range_loop)]

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::Instant;

use jsonschema::JSONSchema;
use psdparam::definiteness::{
    hertz_min_eig, split_sufficient_matrix, strong_pd, strong_pd_regularity, strong_pd_split, strong_psd,
    strong_psd_interval, strong_psd_split, weak_pd_necessary, weak_psd_necessary,
};
use psdparam::hessian::{certify_convexity, hessian};
use psdparam::linalg::{determinant, eig_sym, is_pd, min_eig, psd_split, spectral_radius_nonneg};
use psdparam::oracle::full_vertex_check;
use psdparam::{
    decide, CubicPolynomial, Goal, IntervalMatrix, Matrix, Method, Options, ParameterBox, ParametricSymMatrix,
    Property, Status, SymMatrix,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const TOL: f64 = 5e-4;

type Check = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sym(rows: &[&[f64]]) -> SymMatrix {
    SymMatrix::from_rows(rows).unwrap()
}

fn family(coeffs: Vec<SymMatrix>, bounds: &[(f64, f64)]) -> ParametricSymMatrix {
    ParametricSymMatrix::new(coeffs, ParameterBox::from_bounds(bounds).unwrap()).unwrap()
}

fn close_matrix(actual: &Matrix, expected: &[[f64; 2]; 2], tol: f64) -> bool {
    (0..2).all(|i| (0..2).all(|j| (actual[(i, j)] - expected[i][j]).abs() <= tol))
}

fn close_intervals(actual: &IntervalMatrix, expected: &[[(f64, f64); 2]; 2], tol: f64) -> bool {
    (0..2).all(|i| {
        (0..2).all(|j| {
            let iv = actual.get(i, j);
            (iv.inf() - expected[i][j].0).abs() <= tol && (iv.sup() - expected[i][j].1).abs() <= tol
        })
    })
}

fn example1() -> ParametricSymMatrix {
    family(vec![sym(&[&[1.0, 1.0], &[1.0, 1.0]])], &[(0.0, 1.0)])
}

fn example2() -> ParametricSymMatrix {
    family(
        vec![sym(&[&[1.5, 0.0], &[0.0, 1.1]]), sym(&[&[-1.0, 1.0], &[1.0, 1.0]])],
        &[(1.0, 1.0), (0.0, 1.0)],
    )
}

fn example3() -> ParametricSymMatrix {
    family(
        vec![
            sym(&[&[3.3, 0.25], &[0.25, 3.3]]),
            sym(&[&[1.0, 2.0], &[2.0, 0.0]]),
            sym(&[&[0.0, 2.0], &[2.0, 1.0]]),
        ],
        &[(1.0, 1.0), (0.0, 1.0), (0.0, 1.0)],
    )
}

const CUBIC: &str = "x^3 + 2x^2y - xyz + 3yz^2 + 5y^2";
const CUBIC_BOX: [(f64, f64); 3] = [(2.0, 3.0), (1.0, 2.0), (0.0, 1.0)];

fn criterion_1() -> Check {
    let opts = Options::default();
    let p = example1();
    let relax = p.relax();
    ensure(
        relax.entries().iter().all(|iv| iv.inf() == 0.0 && iv.sup() == 1.0),
        || format!("relaxation entries are not all exactly [0, 1]: {:?}", relax.entries()),
    )?;
    let v = strong_psd(&p, &opts).map_err(|e| e.to_string())?;
    ensure(v.status == Status::Proved, || format!("strong_psd = {}", v.status))?;
    let d = decide(&p, Goal::StrongPsd, &opts).map_err(|e| e.to_string())?;
    ensure(d.status == Status::Proved, || format!("decide = {}", d.status))?;
    let interval = strong_psd_interval(&relax).map_err(|e| e.to_string())?;
    ensure(!interval, || "relaxation reported strongly PSD".into())?;
    let member = Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
    ensure(relax.contains(&member).unwrap(), || {
        "[[0,1],[1,0]] not in relaxation".into()
    })?;
    Ok("relax = [0,1] entrywise; parametric PSD proved; relaxation not PSD".into())
}

fn criterion_2() -> Check {
    let opts = Options::default();
    let split = psd_split(&sym(&[&[-1.0, 1.0], &[1.0, 1.0]])).unwrap();
    ensure(
        close_matrix(split.plus.as_matrix(), &[[0.2071, 0.5], [0.5, 1.2071]], TOL),
        || format!("plus = {:?}", split.plus.to_rows()),
    )?;
    ensure(
        close_matrix(split.minus.as_matrix(), &[[1.2071, -0.5], [-0.5, 0.2071]], TOL),
        || format!("minus = {:?}", split.minus.to_rows()),
    )?;
    let p = example2();
    let s = split_sufficient_matrix(&p, opts.tolerance).unwrap();
    ensure(
        close_matrix(s.as_matrix(), &[[0.2929, 0.5], [0.5, 0.8929]], TOL),
        || format!("split sum = {:?}", s.to_rows()),
    )?;
    ensure(is_pd(&s, p.tolerance(opts.tolerance)).unwrap(), || {
        "split sum not PD".into()
    })?;
    let pre = p.precondition_relax().unwrap();
    let expected = [
        [(0.2222, 1.7778), (-0.4075, 0.4075)],
        [(-0.5556, 0.5556), (0.8148, 1.1852)],
    ];
    ensure(close_intervals(&pre.relaxation, &expected, TOL), || {
        format!(
            "M = inf {:?} sup {:?}",
            pre.relaxation.inf().to_rows(),
            pre.relaxation.sup().to_rows()
        )
    })?;
    let rho = spectral_radius_nonneg(&pre.relaxation.rad()).unwrap();
    ensure((rho.value - 1.0419).abs() <= TOL, || format!("rho = {}", rho.value))?;
    let reg = strong_pd_regularity(&p, &opts).unwrap();
    ensure(reg.status == Status::Unknown, || format!("regularity = {}", reg.status))?;
    let spl = strong_pd_split(&p, &opts).unwrap();
    ensure(spl.status == Status::Proved, || format!("split = {}", spl.status))?;
    Ok(format!(
        "rho(Rad M) = {:.6}; split proved, regularity unknown",
        rho.value
    ))
}

fn criterion_3() -> Check {
    let opts = Options::default();
    let p = example3();
    let spl = strong_pd_split(&p, &opts).unwrap();
    ensure(spl.status == Status::Unknown, || format!("split = {}", spl.status))?;
    let pre = p.precondition_relax().unwrap();
    let expected = [
        [(0.7227, 1.2773), (-0.6905, 0.6905)],
        [(-0.6905, 0.6905), (0.7227, 1.2773)],
    ];
    ensure(close_intervals(&pre.relaxation, &expected, TOL), || {
        format!(
            "M = inf {:?} sup {:?}",
            pre.relaxation.inf().to_rows(),
            pre.relaxation.sup().to_rows()
        )
    })?;
    let rho = spectral_radius_nonneg(&pre.relaxation.rad()).unwrap();
    ensure((rho.value - 0.9678).abs() <= TOL && rho.value < 1.0, || {
        format!("rho = {}", rho.value)
    })?;
    let reg = strong_pd_regularity(&p, &opts).unwrap();
    ensure(reg.status == Status::Proved, || format!("regularity = {}", reg.status))?;
    Ok(format!(
        "rho(Rad M) = {:.6}; split unknown, regularity proved",
        rho.value
    ))
}

fn criterion_4() -> Check {
    let f = CubicPolynomial::parse(CUBIC).map_err(|e| e.to_string())?;
    let domain = ParameterBox::from_bounds(&CUBIC_BOX).unwrap();
    let h = hessian(&f, &domain).map_err(|e| e.to_string())?;
    let expected: [[[f64; 3]; 3]; 4] = [
        [[6.0, 4.0, 0.0], [4.0, 0.0, -1.0], [0.0, -1.0, 0.0]],
        [[4.0, 0.0, -1.0], [0.0, 0.0, 0.0], [-1.0, 0.0, 6.0]],
        [[0.0, -1.0, 0.0], [-1.0, 0.0, 6.0], [0.0, 6.0, 0.0]],
        [[0.0, 0.0, 0.0], [0.0, 10.0, 0.0], [0.0, 0.0, 0.0]],
    ];
    ensure(h.k() == 4, || format!("K = {}", h.k()))?;
    for (k, (c, e)) in h.coeffs().iter().zip(&expected).enumerate() {
        let rows: Vec<Vec<f64>> = e.iter().map(|r| r.to_vec()).collect();
        ensure(c.to_rows() == rows, || format!("coefficient {k} = {:?}", c.to_rows()))?;
    }
    let relax = h.relax();
    let printed = [
        [(16.0, 26.0), (7.0, 12.0), (-2.0, -1.0)],
        [(7.0, 12.0), (10.0, 10.0), (-3.0, 4.0)],
        [(-2.0, -1.0), (-3.0, 4.0), (6.0, 12.0)],
    ];
    for i in 0..3 {
        for j in 0..3 {
            let iv = relax.get(i, j);
            ensure((iv.inf(), iv.sup()) == printed[i][j], || {
                format!("relax[{i}][{j}] = {iv}")
            })?;
        }
    }
    let report = certify_convexity(&f, &domain, &Options::default()).map_err(|e| e.to_string())?;
    let v = &report.decision.verdict;
    let convex = v.status == Status::Proved && v.method == Method::Split;
    let not_psd = report.relaxation_strong_psd == Some(false);
    let hertz = hertz_min_eig(&relax).unwrap();
    let detail = format!(
        "hertz = {hertz:.6} (expected -2.8950 +/- 5e-4); rohn bound = {:.6}; relaxation strongly PSD = {:?}; convexity {} by {}",
        report.rohn_bound, report.relaxation_strong_psd, v.status, v.method
    );
    ensure(convex && not_psd, || detail.clone())?;
    ensure((hertz - -2.8950).abs() <= TOL, || detail.clone())?;
    Ok(detail)
}

fn random_sym(r: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> SymMatrix {
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let x = r.gen_range(lo..=hi);
            rows[i][j] = x;
            rows[j][i] = x;
        }
    }
    SymMatrix::from_rows(&rows).unwrap()
}

fn random_bounds(r: &mut ChaCha8Rng, k: usize) -> Vec<(f64, f64)> {
    (0..k)
        .map(|_| {
            let a: f64 = r.gen_range(-1.0..=2.0);
            let b: f64 = r.gen_range(-1.0..=2.0);
            (a.min(b), a.max(b))
        })
        .collect()
}

/// `n ≤ 4`, `K ≤ 4`, entries in `[-2, 2]`, boxes in `[-1, 2]`. Odd instances
/// get a diagonally dominant first coefficient on a positive parameter so
/// that definite families are common.
fn corpus() -> Vec<ParametricSymMatrix> {
    let mut r = ChaCha8Rng::seed_from_u64(0xACCE);
    (0..500)
        .map(|i| {
            let n = r.gen_range(1..=4);
            let k = r.gen_range(1..=4);
            let mut coeffs: Vec<SymMatrix> = (0..k).map(|_| random_sym(&mut r, n, -2.0, 2.0)).collect();
            let mut bounds = random_bounds(&mut r, k);
            if i % 2 == 1 {
                let mut rows = coeffs[0].to_rows();
                for (a, row) in rows.iter_mut().enumerate() {
                    for (b, x) in row.iter_mut().enumerate() {
                        *x = if a == b { 1.5 + *x / 4.0 } else { *x / 5.0 };
                    }
                }
                coeffs[0] = SymMatrix::from_rows(&rows).unwrap();
                let lo = r.gen_range(1.0..1.8);
                bounds[0] = (lo, r.gen_range(lo..=2.0));
                for b in bounds.iter_mut().skip(1) {
                    let w = (b.1 - b.0) / 4.0;
                    b.1 = b.0 + w;
                }
                for c in coeffs.iter_mut().skip(1) {
                    *c = c.scaled(0.25);
                }
            }
            family(coeffs, &bounds)
        })
        .collect()
}

fn criterion_5(corpus: &[ParametricSymMatrix]) -> Check {
    let opts = Options::default();
    let mut compared = [0usize; 2];
    let mut unknown = 0;
    for (idx, p) in corpus.iter().enumerate() {
        for (g, goal) in [Goal::StrongPsd, Goal::StrongPd].into_iter().enumerate() {
            let v = decide(p, goal, &opts).map_err(|e| e.to_string())?;
            if v.status == Status::Unknown {
                unknown += 1;
                continue;
            }
            let truth = full_vertex_check(p, goal.property(), opts.tolerance).map_err(|e| e.to_string())?;
            ensure(truth == (v.status == Status::Proved), || {
                format!(
                    "instance {idx} {goal}: decide {} by {}, vertex oracle {truth}",
                    v.status, v.method
                )
            })?;
            compared[g] += 1;
        }
    }
    ensure(compared.iter().all(|&c| c > 0), || {
        format!("nothing compared: {compared:?}")
    })?;
    Ok(format!(
        "{} strong-psd and {} strong-pd verdicts agree with the vertex oracle; {unknown} unknown",
        compared[0], compared[1]
    ))
}

fn criterion_6(corpus: &[ParametricSymMatrix]) -> Check {
    let opts = Options::default();
    let mut r = ChaCha8Rng::seed_from_u64(0x1A7);
    let mut counts = [0usize; 4];
    for (idx, p) in corpus.iter().enumerate() {
        let e = |x: psdparam::Result<psdparam::Verdict>| x.map_err(|e| e.to_string());
        let vpsd = e(strong_psd(p, &opts))?.status == Status::Proved;
        let vpd = e(strong_pd(p, &opts))?.status == Status::Proved;
        let fail = |what: &str| format!("instance {idx}: {what}");
        if e(strong_psd_split(p, &opts))?.is_proved() {
            counts[0] += 1;
            ensure(vpsd, || fail("psd split proved but vertex psd not"))?;
        }
        if e(strong_pd_split(p, &opts))?.is_proved() {
            counts[0] += 1;
            ensure(vpd, || fail("pd split proved but vertex pd not"))?;
        }
        if e(strong_pd_regularity(p, &opts))?.is_proved() {
            counts[1] += 1;
            ensure(vpd, || fail("regularity proved but vertex pd not"))?;
        }
        if vpd {
            counts[2] += 1;
            ensure(vpsd, || fail("vertex pd proved but vertex psd not"))?;
            ensure(e(weak_pd_necessary(p, &opts))?.status != Status::Disproved, || {
                fail("weak pd necessary disproved")
            })?;
            for _ in 0..1000 {
                let x: Vec<f64> = p
                    .params()
                    .intervals()
                    .iter()
                    .map(|iv| r.gen_range(iv.inf()..=iv.sup()))
                    .collect();
                let a = p.evaluate(&x).unwrap();
                let det = determinant(a.as_matrix()).unwrap();
                ensure(det != 0.0 && min_eig(&a).unwrap() > 0.0, || {
                    fail(&format!("singular member at {x:?}"))
                })?;
            }
        }
        if vpsd {
            counts[3] += 1;
            ensure(e(weak_psd_necessary(p, &opts))?.status != Status::Disproved, || {
                fail("weak psd necessary disproved")
            })?;
        }
    }
    Ok(format!(
        "zero violations; split proved {}, regularity proved {}, vertex pd {}, vertex psd {}",
        counts[0], counts[1], counts[2], counts[3]
    ))
}

/// `Q diag(d) Qᵀ` from two random Householder reflections.
fn with_spectrum(r: &mut ChaCha8Rng, d: &[f64]) -> SymMatrix {
    let n = d.len();
    let mut m = Matrix::from_diagonal(d);
    for _ in 0..2 {
        let v: Vec<f64> = (0..n).map(|_| r.gen_range(-1.0..1.0)).collect();
        let vv: f64 = v.iter().map(|x| x * x).sum();
        if vv < 1e-6 {
            continue;
        }
        let mut h = Matrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                h[(i, j)] -= 2.0 * v[i] * v[j] / vv;
            }
        }
        m = h.matmul(&m).unwrap().matmul(&h).unwrap();
    }
    SymMatrix::symmetrize(m).unwrap()
}

fn criterion_7() -> Check {
    let opts = Options::default();
    let mut r = ChaCha8Rng::seed_from_u64(0x5E111);
    let (mut agree, mut marginal, mut proved) = (0, 0, 0);
    for idx in 0..200 {
        let n = r.gen_range(1..=4);
        let k = r.gen_range(1..=4);
        let coeffs: Vec<SymMatrix> = (0..k)
            .map(|_| {
                let d: Vec<f64> = (0..n)
                    .map(|_| if r.gen_bool(0.2) { 0.0 } else { r.gen_range(0.0..2.0) })
                    .collect();
                let a = with_spectrum(&mut r, &d);
                if r.gen_bool(0.3) {
                    a.scaled(-1.0)
                } else {
                    a
                }
            })
            .collect();
        let p = family(coeffs, &random_bounds(&mut r, k));
        let v = strong_psd_split(&p, &opts).map_err(|e| e.to_string())?;
        if v.marginal {
            marginal += 1;
            continue;
        }
        let truth = full_vertex_check(&p, Property::Psd, opts.tolerance).map_err(|e| e.to_string())?;
        ensure(truth == (v.status == Status::Proved), || {
            format!("instance {idx}: split {} but vertex oracle {truth}", v.status)
        })?;
        agree += 1;
        proved += usize::from(truth);
    }
    Ok(format!(
        "{agree} agree ({proved} PSD, {} not); {marginal} marginal excluded",
        agree - proved
    ))
}

fn random_cubic(r: &mut ChaCha8Rng, n: usize) -> CubicPolynomial {
    let terms: Vec<(f64, Vec<usize>)> = (0..r.gen_range(1..=8))
        .map(|_| {
            let degree = r.gen_range(0..=3);
            (
                (r.gen_range(-5.0..5.0)),
                (0..degree).map(|_| r.gen_range(1..=n)).collect(),
            )
        })
        .collect();
    CubicPolynomial::new(n, &terms).unwrap()
}

fn fd_entry(f: &CubicPolynomial, x: &[f64], i: usize, j: usize, h: f64) -> f64 {
    let at = |di: f64, dj: f64| {
        let mut y = x.to_vec();
        y[i] += di;
        y[j] += dj;
        f.eval(&y)
    };
    if i == j {
        let mut y = x.to_vec();
        y[i] += h;
        let up = f.eval(&y);
        y[i] -= 2.0 * h;
        (up - 2.0 * f.eval(x) + f.eval(&y)) / (h * h)
    } else {
        (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h)
    }
}

fn criterion_8() -> Check {
    let mut r = ChaCha8Rng::seed_from_u64(0x8);
    let (mut worst_res, mut worst_orth) = (0.0f64, 0.0f64);
    for i in 0..1000 {
        let n = 1 + i % 20;
        let a = if i % 2 == 0 {
            random_sym(&mut r, n, -1.0, 1.0).scaled(10f64.powi(r.gen_range(-3..=3)))
        } else {
            let d: Vec<f64> = (0..n).map(|_| f64::from(r.gen_range(-2i32..=2))).collect();
            with_spectrum(&mut r, &d)
        };
        let e = eig_sym(&a).map_err(|e| e.to_string())?;
        let v = &e.vectors;
        let mut recon = Matrix::zeros(n, n);
        for p in 0..n {
            for q in 0..n {
                recon[(p, q)] = (0..n).map(|k| v[(p, k)] * e.values[k] * v[(q, k)]).sum();
            }
        }
        let res = recon.max_abs_diff(a.as_matrix());
        let bound = 1e-10 * (1.0 + a.max_abs() * n as f64);
        worst_res = worst_res.max(res / bound);
        ensure(res <= bound, || {
            format!("matrix {i} (n={n}): residual {res:e} > {bound:e}")
        })?;
        let orth = v.transpose().matmul(v).unwrap().max_abs_diff(&Matrix::identity(n));
        worst_orth = worst_orth.max(orth);
        ensure(orth <= 1e-10, || format!("matrix {i} (n={n}): orthogonality {orth:e}"))?;

        let tau = 1e-10 * (1.0 + a.norm_bound());
        let s = psd_split(&a).map_err(|e| e.to_string())?;
        let diff = s
            .plus
            .as_matrix()
            .sub(s.minus.as_matrix())
            .unwrap()
            .max_abs_diff(a.as_matrix());
        ensure(diff <= tau, || format!("matrix {i}: plus - minus off by {diff:e}"))?;
        ensure(
            min_eig(&s.plus).unwrap() >= -tau && min_eig(&s.minus).unwrap() >= -tau,
            || format!("matrix {i}: split part not PSD"),
        )?;
    }
    let mut worst_fd = 0.0f64;
    for c in 0..1000 {
        let n = r.gen_range(1..=6);
        let f = random_cubic(&mut r, n);
        let bounds: Vec<(f64, f64)> = (0..n)
            .map(|_| (r.gen_range(-2.0..0.0), r.gen_range(0.0..2.0)))
            .collect();
        let domain = ParameterBox::from_bounds(&bounds).unwrap();
        let h = hessian(&f, &domain).map_err(|e| e.to_string())?;
        let x: Vec<f64> = bounds.iter().map(|&(lo, hi)| r.gen_range(lo..=hi)).collect();
        let mut p = x.clone();
        p.push(1.0);
        let exact = h.evaluate(&p).unwrap();
        for i in 0..n {
            for j in 0..n {
                let fd = fd_entry(&f, &x, i, j, 1e-2);
                let rel = (exact[(i, j)] - fd).abs() / (1.0 + exact[(i, j)].abs());
                worst_fd = worst_fd.max(rel);
                ensure(rel <= 1e-4, || {
                    format!("cubic {c}: H[{i}][{j}] = {} vs fd {fd}", exact[(i, j)])
                })?;
            }
        }
    }
    Ok(format!(
        "worst residual/bound {worst_res:.2e}, orthogonality {worst_orth:.2e}, hessian vs fd {worst_fd:.2e}"
    ))
}

fn criterion_9() -> Check {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let schema: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("schema/run_report.schema.json")).unwrap()).unwrap();
    let schema = JSONSchema::compile(&schema).map_err(|e| e.to_string())?;
    let data = |name: &str| dir.join("tests/data").join(name).display().to_string();
    let cases: Vec<(Vec<String>, i32)> = vec![
        (
            vec![
                "check".into(),
                data("example2.json"),
                "--goal".into(),
                "strong-pd".into(),
            ],
            0,
        ),
        (
            vec![
                "check".into(),
                data("example3.json"),
                "--goal".into(),
                "strong-pd".into(),
            ],
            0,
        ),
        (
            vec![
                "check".into(),
                data("truncated.json"),
                "--goal".into(),
                "strong-pd".into(),
            ],
            64,
        ),
        (
            ["convex", CUBIC, "--box", "x=2:3", "--box", "y=1:2", "--box", "z=0:1"]
                .map(String::from)
                .to_vec(),
            0,
        ),
        (["convex", "x1^2", "--box", "x1=0:1"].map(String::from).to_vec(), 0),
        (["convex", "-x1^3", "--box", "x1=1:2"].map(String::from).to_vec(), 1),
    ];
    let mut reports = Vec::new();
    for (args, expected) in &cases {
        let out = Command::new(env!("CARGO_BIN_EXE_psdparam"))
            .args(args)
            .env_remove("PSDPARAM_TOL")
            .output()
            .map_err(|e| e.to_string())?;
        let code = out.status.code().unwrap_or(-1);
        ensure(code == *expected, || {
            format!("{args:?}: exit {code}, expected {expected}")
        })?;
        if *expected == 64 {
            ensure(out.stdout.is_empty(), || {
                format!("{args:?}: report printed on input error")
            })?;
            continue;
        }
        let v: Value = serde_json::from_slice(&out.stdout).map_err(|e| format!("{args:?}: {e}"))?;
        if let Err(errors) = schema.validate(&v) {
            let msgs: Vec<String> = errors.map(|e| format!("{e} at {}", e.instance_path)).collect();
            return Err(format!("{args:?}: schema violations {msgs:?}"));
        }
        reports.push(v);
    }
    ensure(reports[0]["method"] == "split", || {
        format!("example 2 method {}", reports[0]["method"])
    })?;
    ensure(reports[1]["method"] == "regularity", || {
        format!("example 3 method {}", reports[1]["method"])
    })?;
    let rho = reports[1]["certificate"]["rho"].as_f64().unwrap_or(f64::NAN);
    ensure((rho - 0.9678).abs() <= TOL, || format!("example 3 rho {rho}"))?;
    let conv = &reports[2]["convexity"];
    Ok(format!(
        "6 invocations, exit codes and schema ok; cubic report hertz_min_eig = {}, rohn_bound = {}",
        conv["hertz_min_eig"], conv["rohn_bound"]
    ))
}

fn main() -> ExitCode {
    let corpus = corpus();
    let criteria: Vec<Criterion> = vec![
        ("example 1 reproduction", Box::new(criterion_1)),
        ("example 2 reproduction", Box::new(criterion_2)),
        ("example 3 reproduction", Box::new(criterion_3)),
        ("cubic convexity example", Box::new(criterion_4)),
        ("oracle equivalence", Box::new(|| criterion_5(&corpus))),
        ("implication chain", Box::new(|| criterion_6(&corpus))),
        ("semidefinite coefficients", Box::new(criterion_7)),
        ("numerical kernels", Box::new(criterion_8)),
        ("cli conformance", Box::new(criterion_9)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} {:<28} PASS ({secs:.2}s) {detail}", i + 1, name),
            Err(detail) => {
                failed += 1;
                println!("criterion {} {:<28} FAIL ({secs:.2}s) {detail}", i + 1, name);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
