use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::scan::{locate_zeros, sample_radii, scan_zeros, settled, ScanOptions};
use crate::ctcore::{AngularSet, COLLISION_TOLERANCE};
use crate::linalg::Matrix;
use crate::specfun::{riccati, wronskian_of, FunctionPair, Order};
use crate::trig::centrifugal;
use crate::{Error, Result};

/// `(L1 from, L1 to, L2 from, L2 to)`.
pub type MapBox = (f64, f64, f64, f64);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellStatus {
    Admissible,
    /// The determinant vanishes somewhere on `(0, lambda]`.
    Zero,
    /// No zero found, but settlement was not reached.
    Unsettled,
    /// `L1 = L2` or a member of `T` coincides with `S`.
    Excluded,
    /// The scan itself failed; recorded, not fatal.
    Failed,
}

impl CellStatus {
    pub fn is_admissible(self) -> bool {
        self == CellStatus::Admissible
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdmissibilityMap {
    pub s: AngularSet,
    /// Cell centres along `L1` and `L2`.
    pub axis1: Vec<f64>,
    pub axis2: Vec<f64>,
    /// Row-major over `(axis1, axis2)`.
    pub status: Vec<CellStatus>,
}

impl AdmissibilityMap {
    pub fn cell(&self, i: usize, j: usize) -> CellStatus {
        self.status[i * self.axis2.len() + j]
    }

    /// Boolean lattice, row-major.
    pub fn cells(&self) -> Vec<bool> {
        self.status.iter().map(|c| c.is_admissible()).collect()
    }

    /// Index of the cell containing `(l1, l2)`, if inside the box.
    pub fn locate(&self, l1: f64, l2: f64) -> Option<(usize, usize)> {
        Some((nearest(&self.axis1, l1)?, nearest(&self.axis2, l2)?))
    }
}

fn nearest(axis: &[f64], x: f64) -> Option<usize> {
    let h = if axis.len() > 1 {
        axis[1] - axis[0]
    } else {
        f64::INFINITY
    };
    let (i, d) = axis
        .iter()
        .enumerate()
        .map(|(i, a)| (i, (a - x).abs()))
        .fold((0, f64::INFINITY), |b, c| if c.1 < b.1 { c } else { b });
    (d <= 0.5 * h || axis.len() == 1).then_some(i)
}

/// Cell centres of `[from, to]` at the given resolution; a resolution coarser
/// than the range yields a single cell.
pub fn map_axis(from: f64, to: f64, resolution: f64) -> Vec<f64> {
    let n = ((to - from) / resolution).floor().max(1.0) as usize;
    let h = (to - from) / n as f64;
    (0..n).map(|k| from + (k as f64 + 0.5) * h).collect()
}

/// Shared data for the cells of one map: the sampling radii and the Riccati
/// values of `S` and of every axis value at each radius. Cells are
/// independent, so callers may evaluate them in any order or concurrently.
pub struct MapPlan {
    s: AngularSet,
    axis1: Vec<f64>,
    axis2: Vec<f64>,
    options: ScanOptions,
    radii: Vec<f64>,
    s_pairs: Vec<Vec<FunctionPair>>,
    /// Indexed by position in `orders`, then radius.
    order_pairs: Vec<Vec<FunctionPair>>,
    orders: Vec<f64>,
}

impl MapPlan {
    /// One cutoff serves every cell: `50 + 10 max(S u box)`, the largest
    /// per-cell default, unless `options.lambda` is set.
    pub fn new(
        s: &AngularSet,
        bounds: MapBox,
        resolution: f64,
        options: &ScanOptions,
    ) -> Result<Self> {
        if s.len() != 2 {
            return Err(Error::InvalidSet("an admissibility map needs |S| = 2"));
        }
        let (a, b, c, d) = bounds;
        if !(a < b && c < d && a > -0.5 && c > -0.5 && resolution > 0.0) {
            return Err(Error::Domain("map box must be non-empty and above -1/2"));
        }
        let axis1 = map_axis(a, b, resolution);
        let axis2 = map_axis(c, d, resolution);
        let lambda = options
            .lambda
            .unwrap_or(50.0 + 10.0 * b.max(d).max(s.max()));
        let radii = sample_radii(lambda, options.step);
        let mut orders: Vec<f64> = axis1.iter().chain(&axis2).copied().collect();
        orders.sort_by(f64::total_cmp);
        orders.dedup();
        let table = |l: f64| -> Result<Vec<FunctionPair>> {
            let o = Order::new(l)?;
            radii.iter().map(|&r| riccati(o, r)).collect()
        };
        let s_pairs = s
            .values()
            .iter()
            .map(|&l| table(l))
            .collect::<Result<_>>()?;
        let order_pairs = orders.iter().map(|&l| table(l)).collect::<Result<_>>()?;
        Ok(Self {
            s: s.clone(),
            axis1,
            axis2,
            options: *options,
            radii,
            s_pairs,
            order_pairs,
            orders,
        })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.axis1.len(), self.axis2.len())
    }

    fn order_index(&self, l: f64) -> usize {
        self.orders
            .binary_search_by(|o| o.total_cmp(&l))
            .expect("axis value is tabulated")
    }

    /// Verdict for cell `(i, j)`. Cells that fail to settle at the shared
    /// cutoff are rescanned from scratch with the usual doubling.
    pub fn cell(&self, i: usize, j: usize) -> CellStatus {
        let (l1, l2) = (self.axis1[i], self.axis2[j]);
        if (l1 - l2).abs() <= COLLISION_TOLERANCE {
            return CellStatus::Excluded;
        }
        let t = match AngularSet::new([l1.min(l2), l1.max(l2)]) {
            Ok(t) if self.s.collision_with(&t).is_none() => t,
            Ok(_) => return CellStatus::Excluded,
            Err(_) => return CellStatus::Failed,
        };
        self.evaluate(&t).unwrap_or(CellStatus::Failed)
    }

    fn evaluate(&self, t: &AngularSet) -> Result<CellStatus> {
        let (sv, tv) = (self.s.values(), t.values());
        let idx = [self.order_index(tv[0]), self.order_index(tv[1])];
        let inv_den: [[f64; 2]; 2] = core::array::from_fn(|a| {
            core::array::from_fn(|b| 1.0 / (centrifugal(sv[a]) - centrifugal(tv[b])))
        });
        let entries = |k: usize| -> [[f64; 2]; 2] {
            core::array::from_fn(|a| {
                core::array::from_fn(|b| {
                    wronskian_of(&self.order_pairs[idx[b]][k], &self.s_pairs[a][k]) * inv_den[a][b]
                })
            })
        };
        let matrix_at = |k: usize| {
            let e = entries(k);
            Matrix::from_fn(2, 2, |a, b| e[a][b])
        };
        // A sign change settles the cell; stop at the first one.
        let mut dets = Vec::with_capacity(self.radii.len());
        for k in 0..self.radii.len() {
            let d = det2(entries(k));
            if let Some(&(prev, _)) = dets.last() {
                let prev: f64 = prev;
                if prev == 0.0 || (prev.signum() != d.0.signum() && d.0 != 0.0) {
                    return Ok(CellStatus::Zero);
                }
            }
            dets.push(d);
        }
        if !locate_zeros(&self.s, t, &self.radii, &dets, false)?.is_empty() {
            return Ok(CellStatus::Zero);
        }
        let last = self.radii.len() - 1;
        let lambda = self.radii[last];
        let env = |p: &FunctionPair| p.modulus().max(1.0);
        let es: Vec<f64> = self.s_pairs.iter().map(|p| env(&p[last])).collect();
        let et: Vec<f64> = idx
            .iter()
            .map(|&i| env(&self.order_pairs[i][last]))
            .collect();
        if settled(&self.s, t, &matrix_at(last), &es, &et, lambda)? {
            return Ok(CellStatus::Admissible);
        }
        let retry = ScanOptions {
            lambda: Some(2.0 * lambda),
            refine: false,
            max_doublings: self.options.max_doublings.saturating_sub(1),
            ..self.options
        };
        let verdict = scan_zeros(&self.s, t, &retry)?;
        Ok(if verdict.admissible {
            CellStatus::Admissible
        } else if verdict.zeros_found.is_empty() {
            CellStatus::Unsettled
        } else {
            CellStatus::Zero
        })
    }

    /// Collects cell verdicts given in row-major order.
    pub fn assemble(self, status: Vec<CellStatus>) -> AdmissibilityMap {
        assert_eq!(status.len(), self.axis1.len() * self.axis2.len());
        AdmissibilityMap {
            s: self.s,
            axis1: self.axis1,
            axis2: self.axis2,
            status,
        }
    }
}

/// `(det, normalized det)` of a 2x2 matrix, matching [`Matrix::normalized_det`].
fn det2(m: [[f64; 2]; 2]) -> (f64, f64) {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let c = [
        m[0][0].abs().max(m[1][0].abs()),
        m[0][1].abs().max(m[1][1].abs()),
    ];
    if c[0] == 0.0 || c[1] == 0.0 {
        return (det, 0.0);
    }
    let row = |i: usize| ((m[i][0] / c[0]).powi(2) + (m[i][1] / c[1]).powi(2)).sqrt();
    (det, det / (row(0) * row(1) * c[0] * c[1]))
}

/// Sequential map over the box. Symmetric under swapping the axes when the
/// box is square, since each cell scans the set `{L1, L2}`.
pub fn admissibility_map(
    s: &AngularSet,
    bounds: MapBox,
    resolution: f64,
    options: &ScanOptions,
) -> Result<AdmissibilityMap> {
    let plan = MapPlan::new(s, bounds, resolution, options)?;
    let (n1, n2) = plan.shape();
    let status = (0..n1 * n2).map(|k| plan.cell(k / n2, k % n2)).collect();
    Ok(plan.assemble(status))
}
