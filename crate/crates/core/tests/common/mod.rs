//! Test-only oracles, independent of the library's evaluation paths.
#![allow(dead_code)]

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                let (mut q0, mut q1) = (1.0, x);
                for k in 2..=n {
                    let q2 = ((2 * k - 1) as f64 * x * q1 - (k - 1) as f64 * q0) / k as f64;
                    q0 = q1;
                    q1 = q2;
                }
                let dq = n as f64 * (x * q1 - q0) / (x * x - 1.0);
                weights[i] = 2.0 / ((1.0 - x * x) * dq * dq);
                break;
            }
        }
        nodes[i] = x;
    }
    (nodes, weights)
}

/// Composite Gauss-Legendre quadrature of `f` on [a, b] with `panels` panels.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let (x, w) = gauss_legendre(16);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        for (xi, wi) in x.iter().zip(&w) {
            total += wi * f(mid + 0.5 * h * xi);
        }
    }
    total * 0.5 * h
}

pub fn assert_close(actual: f64, expected: f64, tol: f64, what: &str) {
    assert!(
        (actual - expected).abs() <= tol,
        "{what}: got {actual}, expected {expected} (|diff| = {:e} > {tol:e})",
        (actual - expected).abs()
    );
}

/// Gauss-Legendre nodes and weights on (0, b] with dyadic panels toward the
/// origin, for integrands with a weak power singularity there.
pub fn nodes_from_origin(b: f64, levels: usize, outer_panels: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(16);
    let mut out = Vec::new();
    let mut push_panel = |lo: f64, hi: f64| {
        let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        for (xi, wi) in x.iter().zip(&w) {
            out.push((mid + half * xi, wi * half));
        }
    };
    let inner = b.min(1.0);
    let mut hi = inner;
    for _ in 0..levels {
        push_panel(0.5 * hi, hi);
        hi *= 0.5;
    }
    if b > inner {
        let h = (b - inner) / outer_panels as f64;
        for p in 0..outer_panels {
            push_panel(inner + p as f64 * h, inner + (p + 1) as f64 * h);
        }
    }
    out
}
