use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::{Error, Result};

/// Two angular momenta closer than this are treated as the same value.
pub const COLLISION_TOLERANCE: f64 = 1e-9;

/// Sorted set of distinct real angular indices, each above `-1/2`.
///
/// Serves both as the physical set `S` (read as reals) and as the shifted
/// set `T`.
#[derive(Clone, Debug, PartialEq)]
pub struct AngularSet(Vec<f64>);

/// The shifted angular momenta `T`.
pub type ShiftedSet = AngularSet;

impl AngularSet {
    pub fn new(values: impl Into<Vec<f64>>) -> Result<Self> {
        let mut v = values.into();
        if v.is_empty() {
            return Err(Error::InvalidSet("set must not be empty"));
        }
        if v.iter().any(|x| !x.is_finite() || *x <= -0.5) {
            return Err(Error::InvalidSet(
                "every element must be finite and exceed -1/2",
            ));
        }
        v.sort_by(f64::total_cmp);
        if v.windows(2).any(|w| w[1] - w[0] < COLLISION_TOLERANCE) {
            return Err(Error::InvalidSet("elements must be distinct"));
        }
        Ok(Self(v))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.0[self.0.len() - 1]
    }

    /// First element of `self` lying within [`COLLISION_TOLERANCE`] of `other`.
    pub fn collision_with(&self, other: &AngularSet) -> Option<f64> {
        self.0
            .iter()
            .copied()
            .find(|a| other.0.iter().any(|b| (a - b).abs() < COLLISION_TOLERANCE))
    }
}

/// Checks the pairing rules for `S` and `T`: equal sizes and no shared element.
pub fn check_pair(s: &AngularSet, t: &AngularSet) -> Result<()> {
    if s.len() != t.len() {
        return Err(Error::InvalidSet("S and T must have the same size"));
    }
    match t.collision_with(s) {
        Some(value) => Err(Error::SetCollision { value }),
        None => Ok(()),
    }
}

/// Reduces a phase shift modulo `pi` into `(-pi/2, pi/2]`.
pub fn reduce_phase(delta: f64) -> f64 {
    let mut d = delta - PI * (delta / PI).round();
    if d <= -FRAC_PI_2 {
        d += PI;
    } else if d > FRAC_PI_2 {
        d -= PI;
    }
    d
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Physical angular momenta with their measured phase shifts, sorted by `l`.
#[derive(Clone, Debug, PartialEq)]
pub struct InputSet {
    ells: Vec<u32>,
    deltas: Vec<f64>,
}

impl InputSet {
    /// Phase shifts are reduced into `(-pi/2, pi/2]`.
    pub fn new(pairs: impl IntoIterator<Item = (u32, f64)>) -> Result<Self> {
        let mut pairs: Vec<(u32, f64)> = pairs.into_iter().collect();
        if pairs.is_empty() {
            return Err(Error::InvalidSet("at least one phase shift is required"));
        }
        if pairs.iter().any(|p| !p.1.is_finite()) {
            return Err(Error::InvalidSet("phase shifts must be finite"));
        }
        pairs.sort_by_key(|p| p.0);
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidSet("angular momenta must be distinct"));
        }
        let (ells, deltas) = pairs.into_iter().map(|(l, d)| (l, reduce_phase(d))).unzip();
        Ok(Self { ells, deltas })
    }

    pub fn ells(&self) -> &[u32] {
        &self.ells
    }

    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }

    pub fn len(&self) -> usize {
        self.ells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ells.is_empty()
    }

    pub fn max_ell(&self) -> u32 {
        self.ells[self.ells.len() - 1]
    }

    pub fn angular_set(&self) -> AngularSet {
        AngularSet(self.ells.iter().map(|&l| l as f64).collect())
    }

    /// `Some` when every `l` has the same parity.
    pub fn parity(&self) -> Option<Parity> {
        if self.ells.iter().all(|l| l % 2 == 0) {
            Some(Parity::Even)
        } else if self.ells.iter().all(|l| l % 2 == 1) {
            Some(Parity::Odd)
        } else {
            None
        }
    }
}
