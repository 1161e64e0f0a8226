use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::grid::RadialGrid;
use crate::ctcore::{check_pair, AngularSet};
use crate::linalg::{Lu, Matrix};
use crate::specfun::{regular_wronskian_of, riccati, wronskian_of, FunctionPair, Order};
use crate::trig::{centrifugal, cos_half_pi};
use crate::{Error, Result};

/// Normalized determinants below this count as zeros of `D(r)`.
pub const SINGULAR_NORMALIZED_DET: f64 = 1e-12;

pub(crate) fn pairs(set: &AngularSet, r: f64) -> Result<Vec<FunctionPair>> {
    set.values()
        .iter()
        .map(|&l| riccati(Order::new(l)?, r))
        .collect()
}

/// `(W(u_L, v_l) / (l(l+1) - L(L+1)))_{lL}` from precomputed Riccati pairs.
pub(crate) fn matrix_from_pairs(
    s: &AngularSet,
    t: &AngularSet,
    sp: &[FunctionPair],
    tp: &[FunctionPair],
) -> Matrix {
    let (sv, tv) = (s.values(), t.values());
    Matrix::from_fn(sv.len(), tv.len(), |i, j| {
        wronskian_of(&tp[j], &sp[i]) / (centrifugal(sv[i]) - centrifugal(tv[j]))
    })
}

/// The coefficient matrix of the algebraic kernel equations at `r`.
pub fn glm_matrix(s: &AngularSet, t: &AngularSet, r: f64) -> Result<Matrix> {
    check_pair(s, t)?;
    if !(r > 0.0) {
        return Err(Error::Domain("radius must be positive"));
    }
    Ok(matrix_from_pairs(s, t, &pairs(s, r)?, &pairs(t, r)?))
}

/// `D(r)`, the determinant of [`glm_matrix`].
pub fn fredholm_det(s: &AngularSet, t: &AngularSet, r: f64) -> Result<f64> {
    Ok(glm_matrix(s, t, r)?.det())
}

/// Large-`r` limit of [`glm_matrix`]: `cos((l - L) pi/2) / (l(l+1) - L(L+1))`.
pub fn glm_matrix_limit(s: &AngularSet, t: &AngularSet) -> Result<Matrix> {
    check_pair(s, t)?;
    let (sv, tv) = (s.values(), t.values());
    Ok(Matrix::from_fn(sv.len(), tv.len(), |i, j| {
        cos_half_pi(sv[i] - tv[j]) / (centrifugal(sv[i]) - centrifugal(tv[j]))
    }))
}

/// Kernel coefficients on a grid, stored point-major.
#[derive(Clone, Debug)]
pub struct KernelSolution {
    pub s: AngularSet,
    pub t: AngularSet,
    pub grid: RadialGrid,
    a: Vec<f64>,
    a_prime: Vec<f64>,
    s_pairs: Vec<FunctionPair>,
    t_pairs: Vec<FunctionPair>,
    /// `K(r,r) = sum_L A_L u_L`.
    pub k_diag: Vec<f64>,
    /// `d/dr K(r,r) = sum_L (A_L' u_L + A_L u_L')`.
    pub k_prime: Vec<f64>,
    pub det: Vec<f64>,
    pub normalized_det: Vec<f64>,
    /// Largest relative residual of the linear solves.
    pub max_residual: f64,
}

impl KernelSolution {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// `A_L(r_i)` for every `L` in `T`.
    pub fn a(&self, i: usize) -> &[f64] {
        let n = self.t.len();
        &self.a[i * n..(i + 1) * n]
    }

    pub fn a_prime(&self, i: usize) -> &[f64] {
        let n = self.t.len();
        &self.a_prime[i * n..(i + 1) * n]
    }

    fn s_pairs(&self, i: usize) -> &[FunctionPair] {
        let n = self.s.len();
        &self.s_pairs[i * n..(i + 1) * n]
    }

    fn t_pairs(&self, i: usize) -> &[FunctionPair] {
        let n = self.t.len();
        &self.t_pairs[i * n..(i + 1) * n]
    }

    /// `phi_l(r) = u_l - sum_L A_L (u_L u_l' - u_L' u_l) / (l(l+1) - L(L+1))`
    /// for the `index`-th element of `S`.
    pub fn transformed_wave(&self, index: usize) -> Vec<f64> {
        let l = self.s.values()[index];
        (0..self.len())
            .map(|i| {
                let ul = &self.s_pairs(i)[index];
                let corr: f64 = self
                    .a(i)
                    .iter()
                    .zip(self.t_pairs(i))
                    .zip(self.t.values())
                    .map(|((a, tp), &big)| {
                        a * regular_wronskian_of(tp, ul) / (centrifugal(l) - centrifugal(big))
                    })
                    .sum();
                ul.u - corr
            })
            .collect()
    }

    /// `K(r,r) = sum_l c_l phi_l(r) v_l(r)`, an independent evaluation of the diagonal.
    pub fn kernel_diag_series(&self, c: &[f64]) -> Vec<f64> {
        let waves: Vec<Vec<f64>> = (0..self.s.len())
            .map(|j| self.transformed_wave(j))
            .collect();
        (0..self.len())
            .map(|i| {
                c.iter()
                    .enumerate()
                    .map(|(j, cj)| cj * waves[j][i] * self.s_pairs(i)[j].v)
                    .sum()
            })
            .collect()
    }
}

/// Solves the algebraic kernel equations at every grid point, with the
/// derivatives `A'` from the differentiated system `M A' = v' - M' A`, where
/// `M'_{lL} = u_L v_l / r^2`.
///
/// Fails with [`Error::Inadmissible`] at the first point where `D` changes
/// sign or its normalized value drops below [`SINGULAR_NORMALIZED_DET`].
pub fn solve_kernel(s: &AngularSet, t: &AngularSet, grid: &RadialGrid) -> Result<KernelSolution> {
    solve(s, t, grid, true)
}

/// [`solve_kernel`] without the admissibility guard, for studying
/// potentials whose kernel passes through a zero of `D`.
pub fn solve_kernel_unchecked(
    s: &AngularSet,
    t: &AngularSet,
    grid: &RadialGrid,
) -> Result<KernelSolution> {
    solve(s, t, grid, false)
}

fn solve(s: &AngularSet, t: &AngularSet, grid: &RadialGrid, guard: bool) -> Result<KernelSolution> {
    check_pair(s, t)?;
    let n = t.len();
    let points = grid.len();
    let mut out = KernelSolution {
        s: s.clone(),
        t: t.clone(),
        grid: *grid,
        a: Vec::with_capacity(points * n),
        a_prime: Vec::with_capacity(points * n),
        s_pairs: Vec::with_capacity(points * n),
        t_pairs: Vec::with_capacity(points * n),
        k_diag: Vec::with_capacity(points),
        k_prime: Vec::with_capacity(points),
        det: Vec::with_capacity(points),
        normalized_det: Vec::with_capacity(points),
        max_residual: 0.0,
    };
    let mut previous_sign = 0.0;
    for r in grid.points() {
        let sp = pairs(s, r)?;
        let tp = pairs(t, r)?;
        let m = matrix_from_pairs(s, t, &sp, &tp);
        let lu = Lu::new(&m);
        let det = lu.det();
        let scale = m.equilibrated_norm_product();
        let nd = if scale > 0.0 { det / scale } else { 0.0 };
        if guard
            && (nd.abs() < SINGULAR_NORMALIZED_DET
                || (previous_sign != 0.0 && det.signum() != previous_sign))
        {
            return Err(Error::Inadmissible { r });
        }
        previous_sign = det.signum();
        let rhs: Vec<f64> = sp.iter().map(|p| p.v).collect();
        let a = lu.solve(&rhs)?;
        let mut res = 0.0f64;
        for (i, (mv, v)) in m.mul_vec(&a).iter().zip(&rhs).enumerate() {
            let mag: f64 = m
                .row(i)
                .iter()
                .zip(&a)
                .map(|(x, y)| (x * y).abs())
                .sum::<f64>()
                + v.abs();
            if mag > 0.0 {
                res = res.max((mv - v).abs() / mag);
            }
        }
        out.max_residual = out.max_residual.max(res);

        let inv_r2 = 1.0 / (r * r);
        let ma: Vec<f64> = sp
            .iter()
            .map(|spl| {
                tp.iter()
                    .zip(&a)
                    .map(|(tl, al)| tl.u * spl.v * inv_r2 * al)
                    .sum()
            })
            .collect();
        let rhs_prime: Vec<f64> = sp.iter().zip(&ma).map(|(p, x)| p.v_prime - x).collect();
        let ap = lu.solve(&rhs_prime)?;
        let k: f64 = a.iter().zip(&tp).map(|(al, p)| al * p.u).sum();
        let kp: f64 = a
            .iter()
            .zip(&ap)
            .zip(&tp)
            .map(|((al, apl), p)| apl * p.u + al * p.u_prime)
            .sum();
        out.k_diag.push(k);
        out.k_prime.push(kp);
        out.det.push(det);
        out.normalized_det.push(nd);
        out.a.extend_from_slice(&a);
        out.a_prime.extend_from_slice(&ap);
        out.s_pairs.extend_from_slice(&sp);
        out.t_pairs.extend_from_slice(&tp);
    }
    Ok(out)
}
