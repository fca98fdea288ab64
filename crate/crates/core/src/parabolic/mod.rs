//! Flag configurations over marked curves: stability, group actions and
//! canonical moduli coordinates in the optimum chambers.
//!
//! In even degree the underlying bundle is `O(-k) + O(-k)`, every flag is a
//! point of `CP^1` and automorphisms act by Möbius transformations. In odd
//! degree the bundle is `O(-k-1) + O(-k)`; flags are affine coordinates
//! `u_i` with `[0, 1]` reserved for the fiber of the distinguished `O(-k)`.

mod even;
mod odd;

pub use even::{
    act_even, destabilizers_even, is_stable_even, moduli_point_even, normalize_even, Destabilizer,
};
pub use odd::{
    act_odd, affine_graph_test, destabilizers_odd, is_stable_odd, moduli_point_odd,
    normalize_odd, OddAutomorphism, OddDestabilizer,
};

use std::collections::HashSet;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{GaussianRational, ProjectivePoint};
use crate::weights::{check_chamber, ParabolicWeights};

/// Distinct marked points `z_1..z_n` on the sphere. Only `z_n` may be
/// infinite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct MarkedCurve {
    points: Vec<ProjectivePoint>,
}

impl MarkedCurve {
    pub fn new(points: Vec<ProjectivePoint>) -> Result<Self> {
        if points.len() < 4 {
            return Err(Error::TooFewPoints(points.len()));
        }
        let distinct: HashSet<_> = points.iter().collect();
        if distinct.len() != points.len() {
            return Err(Error::InvalidCurve);
        }
        if points[..points.len() - 1].iter().any(|p| p.is_infinite()) {
            return Err(Error::InvalidCurve);
        }
        Ok(Self { points })
    }

    /// `(z_1, .., z_{n-3}, 1, 0, inf)`.
    pub fn standard_gauge(interior: Vec<GaussianRational>) -> Result<Self> {
        let mut points: Vec<_> = interior.into_iter().map(ProjectivePoint::affine).collect();
        points.push(ProjectivePoint::affine(GaussianRational::one()));
        points.push(ProjectivePoint::affine(GaussianRational::zero()));
        points.push(ProjectivePoint::infinity());
        Self::new(points)
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[ProjectivePoint] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &ProjectivePoint {
        &self.points[i]
    }

    /// Affine value of a finite marked point.
    pub fn finite(&self, i: usize) -> Option<&GaussianRational> {
        self.points[i].affine_value()
    }

    /// `z_{n-2} = 1, z_{n-1} = 0, z_n = inf`.
    pub fn is_standard_gauge(&self) -> bool {
        let n = self.n();
        self.points[n - 3] == ProjectivePoint::from_int(1)
            && self.points[n - 2] == ProjectivePoint::from_int(0)
            && self.points[n - 1].is_infinite()
    }

    pub fn require_standard_gauge(&self) -> Result<()> {
        if self.is_standard_gauge() {
            Ok(())
        } else {
            Err(Error::GaugeViolation("marked points must end with (1, 0, inf)"))
        }
    }
}

impl<'de> Deserialize<'de> for MarkedCurve {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let points = Vec::<ProjectivePoint>::deserialize(d)?;
        MarkedCurve::new(points).map_err(serde::de::Error::custom)
    }
}

/// One line per marked point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FlagConfig {
    lines: Vec<ProjectivePoint>,
}

impl FlagConfig {
    pub fn new(lines: Vec<ProjectivePoint>) -> Self {
        Self { lines }
    }

    /// Flags given by finite affine coordinates.
    pub fn affine(values: Vec<GaussianRational>) -> Self {
        Self::new(values.into_iter().map(ProjectivePoint::affine).collect())
    }

    pub fn lines(&self) -> &[ProjectivePoint] {
        &self.lines
    }

    pub fn line(&self, i: usize) -> &ProjectivePoint {
        &self.lines[i]
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// Affine coordinates, failing on the first infinite flag.
    pub fn affine_values(&self) -> Result<Vec<GaussianRational>> {
        self.lines
            .iter()
            .enumerate()
            .map(|(index, l)| {
                l.affine_value()
                    .cloned()
                    .ok_or(Error::InfiniteFlag { index: index + 1 })
            })
            .collect()
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.lines.len() == n {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: n,
                got: self.lines.len(),
            })
        }
    }
}

pub(crate) fn require_chamber(w: &ParabolicWeights) -> Result<()> {
    let report = check_chamber(w);
    if report.in_chamber {
        Ok(())
    } else {
        Err(Error::ChamberViolation(Box::new(report)))
    }
}
