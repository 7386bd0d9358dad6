#![allow(dead_code, clippy::needless_range_loop)]

use psdparam::{ParameterBox, ParametricSymMatrix, SymMatrix};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn random_sym(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> SymMatrix {
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let x = rng.gen_range(lo..=hi);
            rows[i][j] = x;
            rows[j][i] = x;
        }
    }
    SymMatrix::from_rows(&rows).unwrap()
}

/// `Q diag(d) Qᵀ` with a random orthogonal `Q` built from Householder reflections.
pub fn with_spectrum(rng: &mut ChaCha8Rng, d: &[f64]) -> SymMatrix {
    let n = d.len();
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        m[i][i] = d[i];
    }
    for _ in 0..2 {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let vv: f64 = v.iter().map(|x| x * x).sum();
        if vv < 1e-6 {
            continue;
        }
        // m <- H m H with H = I - 2 v vᵀ / vᵀv
        let mv: Vec<f64> = (0..n).map(|i| (0..n).map(|j| m[i][j] * v[j]).sum()).collect();
        let vmv: f64 = (0..n).map(|i| v[i] * mv[i]).sum();
        let c = 2.0 / vv;
        for i in 0..n {
            for j in 0..n {
                m[i][j] += -c * (v[i] * mv[j] + mv[i] * v[j]) + c * c * vmv * v[i] * v[j];
            }
        }
    }
    SymMatrix::symmetrize(psdparam::Matrix::from_rows(&m).unwrap()).unwrap()
}

pub fn random_box(rng: &mut ChaCha8Rng, k: usize, lo: f64, hi: f64) -> ParameterBox {
    let bounds: Vec<(f64, f64)> = (0..k)
        .map(|_| {
            let a = rng.gen_range(lo..=hi);
            let b = rng.gen_range(lo..=hi);
            if rng.gen_bool(0.1) {
                (a, a)
            } else {
                (a.min(b), a.max(b))
            }
        })
        .collect();
    ParameterBox::from_bounds(&bounds).unwrap()
}

/// Random family with `n ≤ n_max`, `K ≤ k_max`, entries in `[-2, 2]` and box in `[-1, 2]`.
/// With `dominant`, the first coefficient is shifted to be positive definite
/// and its parameter kept positive, so definite instances are common.
pub fn random_family(rng: &mut ChaCha8Rng, n_max: usize, k_max: usize, dominant: bool) -> ParametricSymMatrix {
    let n = rng.gen_range(1..=n_max);
    let k = rng.gen_range(1..=k_max);
    let mut coeffs: Vec<SymMatrix> = (0..k).map(|_| random_sym(rng, n, -2.0, 2.0)).collect();
    let mut params = random_box(rng, k, -1.0, 2.0);
    if dominant {
        let shift = rng.gen_range(1.0..4.0) * n as f64;
        let mut a = coeffs[0].clone();
        a.add_scaled(shift, &SymMatrix::identity(n));
        coeffs[0] = a;
        let lo = rng.gen_range(0.5..1.5);
        let mut iv = params.intervals().to_vec();
        iv[0] = psdparam::Interval::new(lo, lo + rng.gen_range(0.0..0.5)).unwrap();
        params = ParameterBox::new(iv);
    }
    ParametricSymMatrix::new(coeffs, params).unwrap()
}

pub fn random_point(rng: &mut ChaCha8Rng, b: &ParameterBox) -> Vec<f64> {
    b.intervals()
        .iter()
        .map(|iv| rng.gen_range(iv.inf()..=iv.sup()))
        .collect()
}
