use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{require_chamber, FlagConfig, MarkedCurve};
use crate::error::{Error, Result};
use crate::scalar::{serde_rational, GaussianRational, HomogeneousPoint, Matrix2, ProjectivePoint};
use crate::weights::{ParabolicWeights, Parity};

/// Automorphism of `O(-k-1) + O(-k)`: diagonal part `(b11, b22)` and the
/// off-diagonal section `b(z) = beta0 + beta1 z` of `O(1)`.
///
/// At `z = inf` the section is read in the chart of the bundle at infinity,
/// where its value is the leading coefficient `beta1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OddAutomorphism {
    b11: GaussianRational,
    b22: GaussianRational,
    beta0: GaussianRational,
    beta1: GaussianRational,
}

impl OddAutomorphism {
    pub fn new(
        b11: GaussianRational,
        b22: GaussianRational,
        beta0: GaussianRational,
        beta1: GaussianRational,
    ) -> Result<Self> {
        if b11.is_zero() || b22.is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(Self {
            b11,
            b22,
            beta0,
            beta1,
        })
    }

    pub fn from_ints(b11: i64, b22: i64, beta0: i64, beta1: i64) -> Result<Self> {
        Self::new(b11.into(), b22.into(), beta0.into(), beta1.into())
    }

    pub fn identity() -> Self {
        Self::unipotent(GaussianRational::zero(), GaussianRational::zero())
    }

    pub fn unipotent(beta0: GaussianRational, beta1: GaussianRational) -> Self {
        Self {
            b11: GaussianRational::one(),
            b22: GaussianRational::one(),
            beta0,
            beta1,
        }
    }

    pub fn b11(&self) -> &GaussianRational {
        &self.b11
    }

    pub fn b22(&self) -> &GaussianRational {
        &self.b22
    }

    pub fn beta0(&self) -> &GaussianRational {
        &self.beta0
    }

    pub fn beta1(&self) -> &GaussianRational {
        &self.beta1
    }

    pub fn section_at(&self, z: &ProjectivePoint) -> GaussianRational {
        section_value(&self.beta0, &self.beta1, z)
    }

    /// Lower-triangular fiber matrix `[[b11, 0], [b(z), b22]]`.
    pub fn matrix_at(&self, z: &ProjectivePoint) -> Matrix2 {
        Matrix2::new(
            self.b11.clone(),
            GaussianRational::zero(),
            self.section_at(z),
            self.b22.clone(),
        )
    }

    /// `u -> (b22 u + b(z)) / b11`; the distinguished line is fixed.
    pub fn apply_at(&self, z: &ProjectivePoint, line: &ProjectivePoint) -> ProjectivePoint {
        match line.affine_value() {
            Some(u) => {
                let v = &(&(&self.b22 * u) + &self.section_at(z)) / &self.b11;
                ProjectivePoint::affine(v)
            }
            None => ProjectivePoint::infinity(),
        }
    }
}

fn section_value(
    beta0: &GaussianRational,
    beta1: &GaussianRational,
    z: &ProjectivePoint,
) -> GaussianRational {
    match z.affine_value() {
        Some(z) => beta0 + &(beta1 * z),
        None => beta1.clone(),
    }
}

/// The unique section `beta0 + beta1 z` taking the values `va` at `za` and
/// `vb` at `zb` (distinct points).
fn section_through(
    za: &ProjectivePoint,
    va: &GaussianRational,
    zb: &ProjectivePoint,
    vb: &GaussianRational,
) -> (GaussianRational, GaussianRational) {
    // rows (x0, x1) of each point: beta0 x0 + beta1 x1 = v
    let det = za.x0() * zb.x1() - zb.x0() * za.x1();
    let beta0 = &(va * zb.x1() - vb * za.x1()) / &det;
    let beta1 = &(za.x0() * vb - zb.x0() * va) / &det;
    (beta0, beta1)
}

/// The affine-linear section whose graph passes through every flag, if one
/// exists. Any infinite flag rules a graph out.
pub fn affine_graph_test(
    curve: &MarkedCurve,
    flags: &FlagConfig,
) -> Option<(GaussianRational, GaussianRational)> {
    let u = flags.affine_values().ok()?;
    if u.len() != curve.n() {
        return None;
    }
    let (beta0, beta1) = section_through(curve.point(0), &u[0], curve.point(1), &u[1]);
    let fits = (2..curve.n()).all(|i| section_value(&beta0, &beta1, curve.point(i)) == u[i]);
    fits.then_some((beta0, beta1))
}

/// Destabilizing subbundles for odd degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "subbundle", rename_all = "kebab-case")]
pub enum OddDestabilizer {
    /// The distinguished `O(-k)`, through the flags at `indices` (1-based).
    DistinguishedLine {
        indices: Vec<usize>,
        #[serde(with = "serde_rational")]
        slope: BigRational,
    },
    /// A copy of `O(-k-1)` given by a section through every flag.
    Section {
        beta0: GaussianRational,
        beta1: GaussianRational,
        #[serde(with = "serde_rational")]
        slope: BigRational,
    },
}

fn require_odd(curve: &MarkedCurve, flags: &FlagConfig, w: &ParabolicWeights) -> Result<()> {
    if w.parity() != Parity::Odd {
        return Err(Error::ParityMismatch { expected: "odd" });
    }
    flags.check_len(curve.n())?;
    if w.n() != curve.n() {
        return Err(Error::LengthMismatch {
            expected: curve.n(),
            got: w.n(),
        });
    }
    require_chamber(w)
}

pub fn destabilizers_odd(
    curve: &MarkedCurve,
    flags: &FlagConfig,
    w: &ParabolicWeights,
) -> Result<Vec<OddDestabilizer>> {
    require_odd(curve, flags, w)?;
    let k = w.k();
    let mut out = Vec::new();
    let on_line: Vec<usize> = (0..curve.n())
        .filter(|&i| flags.line(i).is_infinite())
        .collect();
    let slope = w.slope(-k, |i| on_line.contains(&i));
    if !slope.is_negative() {
        out.push(OddDestabilizer::DistinguishedLine {
            indices: on_line.iter().map(|i| i + 1).collect(),
            slope,
        });
    }
    if let Some((beta0, beta1)) = affine_graph_test(curve, flags) {
        let slope = w.slope(-k - 1, |_| true);
        if !slope.is_negative() {
            out.push(OddDestabilizer::Section {
                beta0,
                beta1,
                slope,
            });
        }
    }
    Ok(out)
}

/// Stable iff no flag lies on the distinguished line and no section graph
/// passes through all flags.
pub fn is_stable_odd(curve: &MarkedCurve, flags: &FlagConfig, w: &ParabolicWeights) -> Result<bool> {
    require_odd(curve, flags, w)?;
    let finite = flags.lines().iter().all(|l| !l.is_infinite());
    Ok(finite && affine_graph_test(curve, flags).is_none())
}

pub fn act_odd(g: &OddAutomorphism, curve: &MarkedCurve, flags: &FlagConfig) -> Result<FlagConfig> {
    flags.check_len(curve.n())?;
    let lines = curve
        .points()
        .iter()
        .zip(flags.lines())
        .map(|(z, l)| g.apply_at(z, l))
        .collect();
    Ok(FlagConfig::new(lines))
}

/// The unipotent automorphism moving `u_{n-1}` and `u_n` to 0, and the
/// resulting flags.
pub fn normalize_odd(
    curve: &MarkedCurve,
    flags: &FlagConfig,
) -> Result<(OddAutomorphism, FlagConfig)> {
    flags.check_len(curve.n())?;
    let u = flags.affine_values()?;
    let n = curve.n();
    let (beta0, beta1) = section_through(
        curve.point(n - 2),
        &-&u[n - 2],
        curve.point(n - 1),
        &-&u[n - 1],
    );
    let g = OddAutomorphism::unipotent(beta0, beta1);
    let normalized = act_odd(&g, curve, flags)?;
    Ok((g, normalized))
}

/// The class `[u'_1 : .. : u'_{n-2}]` in `CP^{n-3}` of the normalized flags.
pub fn moduli_point_odd(
    curve: &MarkedCurve,
    flags: &FlagConfig,
    w: &ParabolicWeights,
) -> Result<HomogeneousPoint> {
    if !is_stable_odd(curve, flags, w)? {
        return Err(Error::UnstableInput);
    }
    let (_, normalized) = normalize_odd(curve, flags)?;
    let u = normalized.affine_values()?;
    HomogeneousPoint::new(u[..curve.n() - 2].to_vec())
}
