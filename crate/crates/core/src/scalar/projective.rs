//! Points of the projective line and of higher projective spaces.

use std::fmt;

use num_traits::{One, Zero};
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

use super::GaussianRational;
use crate::error::{Error, Result};

/// A point `[x0, x1]` of the projective line in canonical form: `x0 = 1`
/// when `x0 != 0`, otherwise the point is `[0, 1]` (infinity).
///
/// The affine chart is `u = x1 / x0`, so `[1, u]` is the point `u`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjectivePoint {
    x0: GaussianRational,
    x1: GaussianRational,
}

impl ProjectivePoint {
    /// Canonicalizes a homogeneous pair; fails on `(0, 0)`.
    pub fn new(x0: GaussianRational, x1: GaussianRational) -> Result<Self> {
        if x0.is_zero() {
            if x1.is_zero() {
                return Err(Error::InvalidProjectivePoint);
            }
            return Ok(Self::infinity());
        }
        let x1 = &x1 / &x0;
        Ok(Self {
            x0: GaussianRational::one(),
            x1,
        })
    }

    pub fn affine(u: GaussianRational) -> Self {
        Self {
            x0: GaussianRational::one(),
            x1: u,
        }
    }

    pub fn infinity() -> Self {
        Self {
            x0: GaussianRational::zero(),
            x1: GaussianRational::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::affine(GaussianRational::from_int(n))
    }

    pub fn x0(&self) -> &GaussianRational {
        &self.x0
    }

    pub fn x1(&self) -> &GaussianRational {
        &self.x1
    }

    pub fn is_infinite(&self) -> bool {
        self.x0.is_zero()
    }

    /// The affine coordinate `u`, or `None` at infinity.
    pub fn affine_value(&self) -> Option<&GaussianRational> {
        (!self.is_infinite()).then_some(&self.x1)
    }
}

/// Shorthand for `proj_canonical`.
pub fn proj_canonical(x0: GaussianRational, x1: GaussianRational) -> Result<ProjectivePoint> {
    ProjectivePoint::new(x0, x1)
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.affine_value() {
            Some(u) => write!(f, "{u}"),
            None => f.write_str("inf"),
        }
    }
}

impl fmt::Debug for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.x0, self.x1)
    }
}

impl std::str::FromStr for ProjectivePoint {
    type Err = Error;

    /// `inf` (or `∞`) is the point at infinity; anything else is read as an
    /// affine coordinate.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Self::infinity()),
            other => other.parse().map(Self::affine),
        }
    }
}

impl Serialize for ProjectivePoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        [&self.x0, &self.x1].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ProjectivePoint {
    /// Accepts the canonical `[x0, x1]` array, or the shorthand of an affine
    /// coordinate / `"inf"`.
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Pair([GaussianRational; 2]),
            Text(String),
            Scalar(GaussianRational),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Pair([x0, x1]) => ProjectivePoint::new(x0, x1).map_err(de::Error::custom),
            Repr::Text(s) => s.parse().map_err(de::Error::custom),
            Repr::Scalar(u) => Ok(ProjectivePoint::affine(u)),
        }
    }
}

/// A point of `CP^m` stored as `m + 1` homogeneous coordinates with the
/// first nonzero coordinate scaled to 1.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct HomogeneousPoint(Vec<GaussianRational>);

impl HomogeneousPoint {
    pub fn new(coords: Vec<GaussianRational>) -> Result<Self> {
        let Some(lead) = coords.iter().find(|c| !c.is_zero()).cloned() else {
            return Err(Error::InvalidProjectivePoint);
        };
        Ok(Self(coords.iter().map(|c| c / &lead).collect()))
    }

    pub fn coords(&self) -> &[GaussianRational] {
        &self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.len() - 1
    }
}

impl<'de> Deserialize<'de> for HomogeneousPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let coords = Vec::<GaussianRational>::deserialize(deserializer)?;
        HomogeneousPoint::new(coords).map_err(de::Error::custom)
    }
}

impl fmt::Debug for HomogeneousPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" : ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}
