use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::potential::SampledPotential;
use crate::glm::RadialGrid;
use crate::{Error, Result};

/// Target for the accumulated relative Numerov error near the origin.
const START_ACCURACY: f64 = 1e-12;
/// The power series is used only inside this radius.
const SERIES_REACH: f64 = 0.002;
const SERIES_TERMS: usize = 14;
const RESCALE_ABOVE: f64 = 1e150;
/// Runge-Kutta substeps per grid step when crossing a discontinuity.
const CROSSING_SUBSTEPS: usize = 64;

/// Samples of the regular solution normalized as `r^(l+1) / (2l+1)!!` at the
/// origin, up to the factor `exp(log_scale)` removed while integrating.
#[derive(Clone, Debug, PartialEq)]
pub struct RegularWave {
    pub ell: u32,
    pub grid: RadialGrid,
    pub phi: Vec<f64>,
    pub log_scale: f64,
    pub rescalings: u32,
}

/// `phi = r^(l+1) sum_k a_k r^k` for `phi'' = [l(l+1)/r^2 + V] phi` with
/// `V(r) = q(r) - 1` replaced by a quadratic.
struct Frobenius {
    power: i32,
    a: [f64; SERIES_TERMS],
}

impl Frobenius {
    fn new(q: &SampledPotential, ell: u32, reach: f64) -> Self {
        let (q0, q1, q2) = (q.value(0.0), q.value(0.5 * reach), q.value(reach));
        // Quadratic through (0, q0), (reach/2, q1), (reach, q2).
        let v = [
            q0 - 1.0,
            (4.0 * q1 - q2 - 3.0 * q0) / reach,
            2.0 * (q2 - 2.0 * q1 + q0) / (reach * reach),
        ];
        let mut a = [0.0; SERIES_TERMS];
        a[0] = 1.0 / double_factorial(2 * ell + 1);
        let l2 = 2.0 * ell as f64 + 1.0;
        for k in 2..SERIES_TERMS {
            let sum: f64 = (0..=(k - 2).min(2)).map(|j| v[j] * a[k - 2 - j]).sum();
            a[k] = sum / (k as f64 * (k as f64 + l2));
        }
        Self {
            power: ell as i32 + 1,
            a,
        }
    }

    fn eval(&self, r: f64) -> f64 {
        self.a.iter().rev().fold(0.0, |acc, &c| acc * r + c) * r.powi(self.power)
    }
}

fn double_factorial(n: u32) -> f64 {
    (1..=n).rev().step_by(2).map(f64::from).product()
}

/// Node index from which fixed-step Numerov is accurate to about
/// `START_ACCURACY`. Near the origin `phi ~ r^(l+1)` and the local error at
/// node `n` is about `C_l / n^6` relative, independent of the step, so the
/// accumulated error past `n` is `C_l / (5 n^5)`.
fn start_index(ell: u32) -> usize {
    let l = f64::from(ell);
    let c = ((0..6)
        .map(|j| (l + 1.0 - j as f64).max(0.0))
        .product::<f64>())
    .max(1.0)
        / 240.0;
    ((c / (5.0 * START_ACCURACY)).powf(0.2).ceil() as usize).max(4)
}

/// One Numerov stage with step `h` over nodes `j h`, `j = first..=last`,
/// given the values at `first` and `first + 1`.
fn numerov_span(
    f: &impl Fn(f64) -> f64,
    h: f64,
    first: usize,
    last: usize,
    y0: f64,
    y1: f64,
) -> Vec<f64> {
    let k = h * h / 12.0;
    let mut y = Vec::with_capacity(last - first + 1);
    y.extend([y0, y1]);
    let mut f_cur = f((first + 1) as f64 * h);
    let (mut w_prev, mut w_cur) = ((1.0 - k * f(first as f64 * h)) * y0, (1.0 - k * f_cur) * y1);
    for j in first + 2..=last {
        let f_next = f(j as f64 * h);
        let w_next = 2.0 * w_cur - w_prev + h * h * f_cur * y[y.len() - 1];
        y.push(w_next / (1.0 - k * f_next));
        (w_prev, w_cur, f_cur) = (w_cur, w_next, f_next);
    }
    y
}

/// Fixed-step Numerov integration of `phi'' = [l(l+1)/r^2 - 1 + q] phi` on
/// `grid`.
///
/// The start is built on a ladder of finer grids: the power series seeds two
/// nodes inside `SERIES_REACH` on a step `h / 2^K`, and each stage doubles
/// the step once its node index is large enough for the centrifugal term,
/// until the grid step is reached. A jump in `q` is stepped over with a fine
/// Runge-Kutta bridge restarted from the Numerov values and a fourth-order
/// derivative. Growth beyond `1e150` rescales the stored samples and
/// accumulates `log_scale`.
pub fn integrate_regular(q: &SampledPotential, ell: u32, grid: &RadialGrid) -> Result<RegularWave> {
    let h = grid.step();
    let n = grid.len();
    let cent = f64::from(ell) * (f64::from(ell) + 1.0);
    let big_f = |r: f64, v: f64| cent / (r * r) - 1.0 + v;
    let f_of = |r: f64| big_f(r, q.value(r));
    let mut n0 = start_index(ell);
    if let Some(b) = q.breakpoint() {
        // Hand over to the grid before the jump.
        n0 = n0.min(((b / h).floor() as usize).saturating_sub(3));
    }
    if n0 < 4 {
        return Err(Error::Domain(
            "potential jumps too close to the origin; refine the grid",
        ));
    }
    if n0 + 2 >= n {
        return Err(Error::Domain("grid too short for the centrifugal start"));
    }
    let doublings = ((n0 as f64 * h / SERIES_REACH).log2().ceil()).max(0.0) as i32;
    let mut step = h * 0.5f64.powi(doublings);
    let series = Frobenius::new(q, ell, n0 as f64 * step);

    let mut phi = vec![0.0; n];
    // Grid nodes not reached by any stage lie inside the series region.
    for (i, p) in phi.iter_mut().enumerate().take(n0) {
        let r = grid.r(i);
        if r <= n0 as f64 * step {
            *p = series.eval(r);
        }
    }
    let (mut y0, mut y1) = (
        series.eval((n0 - 1) as f64 * step),
        series.eval(n0 as f64 * step),
    );
    for _ in 0..doublings {
        let ys = numerov_span(&f_of, step, n0 - 1, 2 * n0, y0, y1);
        // Record grid nodes on this stage: node j sits at r = j step.
        let ratio = (h / step).round() as usize;
        for (offset, &y) in ys.iter().enumerate() {
            let j = n0 - 1 + offset;
            if j % ratio == 0 && j / ratio >= 1 && j / ratio <= n0 {
                phi[j / ratio - 1] = y;
            }
        }
        (y0, y1) = (ys[n0 - 1], ys[n0 + 1]);
        step *= 2.0;
    }
    let seed = n0 - 2;
    phi[seed] = y0;
    phi[seed + 1] = y1;

    let k = h * h / 12.0;
    let mut log_scale = 0.0;
    let mut rescalings = 0;
    let mut pending = q.breakpoint().filter(|&b| b < grid.r_max());

    let mut f_cur = f_of(grid.r(seed + 1));
    let mut w_prev = (1.0 - k * f_of(grid.r(seed))) * phi[seed];
    let mut w_cur = (1.0 - k * f_cur) * phi[seed + 1];
    let mut i = seed + 2;
    while i < n {
        if let Some(b) = pending.filter(|&b| b <= grid.r(i)) {
            pending = None;
            // The previous node is the last one left of the jump.
            let m = i - 1;
            let left = |r: f64| big_f(r, q.value_left(r));
            let right = |r: f64| big_f(r, q.value(r));
            let (ra, rm) = (grid.r(m - 2), grid.r(m));
            let slope = ((1.0 - 2.0 * k * left(rm)) * phi[m]
                - (1.0 - 2.0 * k * left(ra)) * phi[m - 2])
                / (2.0 * h);
            let state = rk4(grid.r(m - 1), b, (phi[m - 1], slope), h, &left);
            let mut state = rk4(b, grid.r(m + 1), state, h, &right);
            phi[m + 1] = state.0;
            if m + 2 >= n {
                break;
            }
            state = rk4(grid.r(m + 1), grid.r(m + 2), state, h, &right);
            phi[m + 2] = state.0;
            f_cur = right(grid.r(m + 2));
            w_prev = (1.0 - k * right(grid.r(m + 1))) * phi[m + 1];
            w_cur = (1.0 - k * f_cur) * phi[m + 2];
            i = m + 3;
            continue;
        }
        let f_next = f_of(grid.r(i));
        let w_next = 2.0 * w_cur - w_prev + h * h * f_cur * phi[i - 1];
        phi[i] = w_next / (1.0 - k * f_next);
        if phi[i].abs() > RESCALE_ABOVE {
            let s = RESCALE_ABOVE.recip();
            phi[..=i].iter_mut().for_each(|p| *p *= s);
            log_scale -= s.ln();
            rescalings += 1;
            w_prev = w_cur * s;
            w_cur = w_next * s;
        } else {
            w_prev = w_cur;
            w_cur = w_next;
        }
        f_cur = f_next;
        i += 1;
    }
    Ok(RegularWave {
        ell,
        grid: *grid,
        phi,
        log_scale,
        rescalings,
    })
}

/// Classical RK4 for `(y, y')` with `y'' = f(r) y`, using substeps of at most
/// `h / CROSSING_SUBSTEPS`.
fn rk4(
    from: f64,
    to: f64,
    (mut y, mut p): (f64, f64),
    h: f64,
    f: &impl Fn(f64) -> f64,
) -> (f64, f64) {
    let span = to - from;
    if span <= 0.0 {
        return (y, p);
    }
    let steps = ((span / h * CROSSING_SUBSTEPS as f64).ceil() as usize).max(1);
    let dt = span / steps as f64;
    for s in 0..steps {
        let r = from + s as f64 * dt;
        // Land exactly on `to` so a one-sided `f` sees the intended branch.
        let end = if s + 1 == steps { to } else { r + dt };
        let mid = r + 0.5 * dt;
        let (fa, fm, fb) = (f(r), f(mid), f(end));
        let (k1y, k1p) = (p, fa * y);
        let (k2y, k2p) = (p + 0.5 * dt * k1p, fm * (y + 0.5 * dt * k1y));
        let (k3y, k3p) = (p + 0.5 * dt * k2p, fm * (y + 0.5 * dt * k2y));
        let (k4y, k4p) = (p + dt * k3p, fb * (y + dt * k3y));
        y += dt / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        p += dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    }
    (y, p)
}
