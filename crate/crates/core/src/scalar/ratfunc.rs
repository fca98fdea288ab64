//! Rational functions in one variable and their residues.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{GaussianRational, Poly, ProjectivePoint};
use crate::error::{Error, Result};

/// `numerator / denominator` with the common factor cancelled and the
/// denominator monic. The zero function is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct RationalFunction {
    numerator: Poly,
    denominator: Poly,
}

impl RationalFunction {
    pub fn new(numerator: Poly, denominator: Poly) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if numerator.is_zero() {
            return Ok(Self::zero());
        }
        let g = numerator.gcd(&denominator);
        let num = numerator.div_exact(&g);
        let den = denominator.div_exact(&g);
        let lead_inv = den.leading().inv().expect("nonzero denominator");
        Ok(Self {
            numerator: num.scale(&lead_inv),
            denominator: den.scale(&lead_inv),
        })
    }

    /// `numerator / prod (z - r)^m` over distinct roots `r`. Common factors
    /// are cancelled by evaluating at each root, which avoids a polynomial
    /// gcd.
    pub fn over_linear_factors(numerator: Poly, factors: &[(GaussianRational, u32)]) -> Self {
        if numerator.is_zero() {
            return Self::zero();
        }
        let mut num = numerator;
        let mut den = Poly::one();
        for (root, m) in factors {
            let linear = Poly::linear_root(root);
            let mut left = *m;
            while left > 0 && num.eval(root).is_zero() {
                num = num.div_exact(&linear);
                left -= 1;
            }
            den = &den * &linear.pow(left);
        }
        Self {
            numerator: num,
            denominator: den,
        }
    }

    pub fn zero() -> Self {
        Self {
            numerator: Poly::zero(),
            denominator: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        Self {
            numerator: p,
            denominator: Poly::one(),
        }
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    /// `c / (z - a)`
    pub fn simple_pole(c: GaussianRational, a: &GaussianRational) -> Self {
        Self::new(Poly::constant(c), Poly::linear_root(a)).expect("nonzero denominator")
    }

    pub fn numerator(&self) -> &Poly {
        &self.numerator
    }

    pub fn denominator(&self) -> &Poly {
        &self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self {
            numerator: self.numerator.scale(s),
            denominator: self.denominator.clone(),
        }
    }

    /// Value at a finite point, `None` at a pole.
    pub fn eval(&self, z: &GaussianRational) -> Option<GaussianRational> {
        let d = self.denominator.eval(z);
        if d.is_zero() {
            return None;
        }
        Some(&self.numerator.eval(z) / &d)
    }

    /// Residue of `f dz` at `z0`. At infinity this is minus the coefficient
    /// of `1/z` in the expansion of `f` there.
    pub fn residue_at(&self, z0: &ProjectivePoint) -> GaussianRational {
        match z0.affine_value() {
            Some(a) => self.residue_finite(a),
            None => self.residue_infinity(),
        }
    }

    fn residue_finite(&self, a: &GaussianRational) -> GaussianRational {
        let den = self.denominator.taylor_shift(a);
        let order = den.order_at_zero();
        if order == 0 || self.is_zero() {
            return GaussianRational::zero();
        }
        // f = F(t) / (t^m H(t)) with t = z - a; the residue is the t^{m-1}
        // coefficient of the power series F/H.
        let num = self.numerator.taylor_shift(a);
        let h: Vec<GaussianRational> = den.coeffs()[order..].to_vec();
        let h0_inv = h[0].inv().expect("H(0) != 0 after removing t^m");
        let mut series: Vec<GaussianRational> = Vec::with_capacity(order);
        for k in 0..order {
            let mut acc = num.coeff(k);
            for j in 1..=k.min(h.len() - 1) {
                acc -= &(&h[j] * &series[k - j]);
            }
            series.push(&acc * &h0_inv);
        }
        series.pop().unwrap_or_default()
    }

    fn residue_infinity(&self) -> GaussianRational {
        let (_, rem) = self.numerator.div_rem(&self.denominator);
        match (rem.degree(), self.denominator.degree()) {
            (Some(r), Some(d)) if r + 1 == d => -(&rem.leading() / &self.denominator.leading()),
            _ => GaussianRational::zero(),
        }
    }
}

pub fn residue_at(f: &RationalFunction, z0: &ProjectivePoint) -> GaussianRational {
    f.residue_at(z0)
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.denominator == rhs.denominator {
            return RationalFunction::new(&self.numerator + &rhs.numerator, self.denominator.clone())
                .expect("nonzero denominator");
        }
        let num = &(&self.numerator * &rhs.denominator) + &(&rhs.numerator * &self.denominator);
        RationalFunction::new(num, &self.denominator * &rhs.denominator)
            .expect("nonzero denominator")
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction::new(
            &self.numerator * &rhs.numerator,
            &self.denominator * &rhs.denominator,
        )
        .expect("nonzero denominator")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            numerator: -&self.numerator,
            denominator: self.denominator.clone(),
        }
    }
}

impl Zero for RationalFunction {
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn is_zero(&self) -> bool {
        RationalFunction::is_zero(self)
    }
}

impl Add for RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: RationalFunction) -> RationalFunction {
        &self + &rhs
    }
}

impl One for RationalFunction {
    fn one() -> Self {
        Self::constant(GaussianRational::one())
    }
}

impl Mul for RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: RationalFunction) -> RationalFunction {
        &self * &rhs
    }
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            numerator: Poly,
            denominator: Poly,
        }
        let raw = Raw::deserialize(d)?;
        RationalFunction::new(raw.numerator, raw.denominator).map_err(serde::de::Error::custom)
    }
}
