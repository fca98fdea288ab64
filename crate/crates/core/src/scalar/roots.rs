//! Exact Gaussian-rational roots of a polynomial.
//!
//! Candidates are located in floating point, snapped to nearby fractions
//! and accepted only after exact evaluation, so a returned root is always
//! exact. Roots that are not Gaussian rationals are reported as an error.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use super::{GaussianRational, Poly};
use crate::error::{Error, Result};

const MAX_DENOMINATOR: i128 = 1 << 40;

/// Distinct roots of `p`, ignoring multiplicity.
pub fn gaussian_rational_roots(p: &Poly) -> Result<Vec<GaussianRational>> {
    let Some(deg) = p.degree() else {
        return Err(Error::ZeroDifferential);
    };
    if deg == 0 {
        return Ok(Vec::new());
    }
    let mut rest = p.div_exact(&p.gcd(&p.derivative())).monic();
    let mut found = Vec::new();
    for approx in complex_roots(&rest) {
        let Some(r) = snap(approx) else { continue };
        if rest.degree().unwrap_or(0) > 0 && rest.eval(&r).is_zero() {
            rest = rest.div_exact(&Poly::linear_root(&r));
            found.push(r);
        }
    }
    if rest.degree().unwrap_or(0) > 0 {
        return Err(Error::NonRationalRoot);
    }
    Ok(found)
}

fn to_complex(z: &GaussianRational) -> Complex64 {
    let (re, im) = z.to_f64_pair();
    Complex64::new(re, im)
}

/// Durand-Kerner iteration on a monic polynomial, followed by Newton
/// polishing against the original coefficients.
fn complex_roots(p: &Poly) -> Vec<Complex64> {
    let coeffs: Vec<Complex64> = p.coeffs().iter().map(to_complex).collect();
    let deg = coeffs.len() - 1;
    let eval = |z: Complex64| coeffs.iter().rev().fold(Complex64::zero(), |acc, c| acc * z + c);
    let deriv = |z: Complex64| {
        coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(Complex64::zero(), |acc, (k, c)| acc * z + c * k as f64)
    };
    let radius = 1.0 + coeffs[..deg].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..deg).map(|k| seed.powu(k as u32) * radius).collect();
    for _ in 0..1000 {
        let mut moved = 0.0f64;
        for i in 0..deg {
            let zi = roots[i];
            let denom = (0..deg)
                .filter(|&j| j != i)
                .fold(Complex64::new(1.0, 0.0), |acc, j| acc * (zi - roots[j]));
            if denom.norm() == 0.0 {
                continue;
            }
            let step = eval(zi) / denom;
            roots[i] = zi - step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 {
            break;
        }
    }
    for z in roots.iter_mut() {
        for _ in 0..5 {
            let d = deriv(*z);
            if d.norm() == 0.0 {
                break;
            }
            *z -= eval(*z) / d;
        }
    }
    roots
}

fn snap(z: Complex64) -> Option<GaussianRational> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return None;
    }
    Some(GaussianRational::new(snap_real(z.re)?, snap_real(z.im)?))
}

/// Continued-fraction convergent of `x` within a relative tolerance.
fn snap_real(x: f64) -> Option<BigRational> {
    let tol = 1e-9 * x.abs().max(1.0);
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        if a.abs() > 1e15 {
            return None;
        }
        let a = a as i128;
        let (p2, q2) = (a.checked_mul(p1)?.checked_add(p0)?, a.checked_mul(q1)?.checked_add(q0)?);
        if q2 > MAX_DENOMINATOR {
            return None;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        if (x - p1 as f64 / q1 as f64).abs() <= tol {
            return Some(BigRational::new(BigInt::from(p1), BigInt::from(q1)));
        }
        let frac = rest - rest.floor();
        if frac == 0.0 {
            return None;
        }
        rest = 1.0 / frac;
    }
    None
}
