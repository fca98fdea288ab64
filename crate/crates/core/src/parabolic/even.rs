use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::{require_chamber, FlagConfig, MarkedCurve};
use crate::error::{Error, Result};
use crate::scalar::{serde_rational, Matrix2, ProjectivePoint};
use crate::weights::{ParabolicWeights, Parity};

/// A degree `-k` line subbundle (a point of `CP^1`) with non-negative
/// parabolic slope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Destabilizer {
    pub line: ProjectivePoint,
    #[serde(with = "serde_rational")]
    pub slope: BigRational,
}

fn require_even(w: &ParabolicWeights) -> Result<()> {
    if w.parity() == Parity::Even {
        Ok(())
    } else {
        Err(Error::ParityMismatch { expected: "even" })
    }
}

/// Every destabilizing `O(-k)` subbundle. Inside the chamber only lines
/// that coincide with at least one flag can reach slope `>= 0`, and lower
/// degree subbundles never do, so the candidates are the distinct flags.
pub fn destabilizers_even(
    curve: &MarkedCurve,
    flags: &FlagConfig,
    w: &ParabolicWeights,
) -> Result<Vec<Destabilizer>> {
    require_even(w)?;
    flags.check_len(curve.n())?;
    if w.n() != curve.n() {
        return Err(Error::LengthMismatch {
            expected: curve.n(),
            got: w.n(),
        });
    }
    require_chamber(w)?;
    let mut seen: Vec<&ProjectivePoint> = Vec::new();
    let mut out = Vec::new();
    for line in flags.lines() {
        if seen.contains(&line) {
            continue;
        }
        seen.push(line);
        let slope = w.slope(-w.k(), |i| flags.line(i) == line);
        if !slope.is_negative() {
            out.push(Destabilizer {
                line: line.clone(),
                slope,
            });
        }
    }
    Ok(out)
}

pub fn is_stable_even(curve: &MarkedCurve, flags: &FlagConfig, w: &ParabolicWeights) -> Result<bool> {
    Ok(destabilizers_even(curve, flags, w)?.is_empty())
}

pub fn act_even(a: &Matrix2, flags: &FlagConfig) -> Result<FlagConfig> {
    let lines = flags
        .lines()
        .iter()
        .map(|l| a.mobius_apply(l))
        .collect::<Result<_>>()?;
    Ok(FlagConfig::new(lines))
}

/// The Möbius matrix sending the last three lines to `(1, 0, inf)`,
/// normalized so its first nonzero entry is 1, together with the image.
pub fn normalize_even(flags: &FlagConfig) -> Result<(Matrix2, FlagConfig)> {
    let n = flags.len();
    if n < 3 {
        return Err(Error::TooFewPoints(n));
    }
    let (p, q, r) = (flags.line(n - 3), flags.line(n - 2), flags.line(n - 1));
    if p == q || p == r || q == r {
        return Err(Error::DegenerateTriple);
    }
    // M = [lambda q | mu r] sends [1,0] -> q, [0,1] -> r and [1,1] -> p
    // when lambda q + mu r = p.
    let det = q.x0() * r.x1() - r.x0() * q.x1();
    let lambda = &(p.x0() * r.x1() - r.x0() * p.x1()) / &det;
    let mu = &(q.x0() * p.x1() - p.x0() * q.x1()) / &det;
    let m = Matrix2::new(
        &lambda * q.x0(),
        &mu * r.x0(),
        &lambda * q.x1(),
        &mu * r.x1(),
    );
    let a = m.adjugate().projectively_normalized();
    let image = act_even(&a, flags)?;
    debug_assert_eq!(image.line(n - 1), &ProjectivePoint::infinity());
    Ok((a, image))
}

/// Coordinates of the isomorphism class in `(CP^1)^{n-3}`.
pub fn moduli_point_even(
    curve: &MarkedCurve,
    flags: &FlagConfig,
    w: &ParabolicWeights,
) -> Result<Vec<ProjectivePoint>> {
    if !is_stable_even(curve, flags, w)? {
        return Err(Error::UnstableInput);
    }
    let (_, normalized) = normalize_even(flags)?;
    Ok(normalized.lines()[..curve.n() - 3].to_vec())
}
