use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{GaussianRational, ProjectivePoint};
use crate::error::{Error, Result};

/// A 2x2 matrix over the Gaussian rationals, acting on homogeneous columns
/// `(x0, x1)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Matrix2 {
    pub a11: GaussianRational,
    pub a12: GaussianRational,
    pub a21: GaussianRational,
    pub a22: GaussianRational,
}

impl Matrix2 {
    pub fn new(
        a11: GaussianRational,
        a12: GaussianRational,
        a21: GaussianRational,
        a22: GaussianRational,
    ) -> Self {
        Self { a11, a12, a21, a22 }
    }

    pub fn from_ints(a11: i64, a12: i64, a21: i64, a22: i64) -> Self {
        Self::new(a11.into(), a12.into(), a21.into(), a22.into())
    }

    pub fn identity() -> Self {
        Self::from_ints(1, 0, 0, 1)
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn trace(&self) -> GaussianRational {
        &self.a11 + &self.a22
    }

    pub fn det(&self) -> GaussianRational {
        &self.a11 * &self.a22 - &self.a12 * &self.a21
    }

    pub fn is_zero(&self) -> bool {
        self.a11.is_zero() && self.a12.is_zero() && self.a21.is_zero() && self.a22.is_zero()
    }

    pub fn is_nilpotent(&self) -> bool {
        self.trace().is_zero() && self.det().is_zero()
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        Self::new(&self.a11 * s, &self.a12 * s, &self.a21 * s, &self.a22 * s)
    }

    pub fn adjugate(&self) -> Self {
        Self::new(self.a22.clone(), -&self.a12, -&self.a21, self.a11.clone())
    }

    pub fn inverse(&self) -> Result<Self> {
        let d = self.det().inv().ok_or(Error::SingularMatrix)?;
        Ok(self.adjugate().scale(&d))
    }

    /// Conjugation `self * m * self^{-1}`.
    pub fn conjugate(&self, m: &Matrix2) -> Result<Self> {
        Ok(&(self * m) * &self.inverse()?)
    }

    /// Applies the matrix to a column vector.
    pub fn apply_vec(
        &self,
        x0: &GaussianRational,
        x1: &GaussianRational,
    ) -> (GaussianRational, GaussianRational) {
        (
            &self.a11 * x0 + &self.a12 * x1,
            &self.a21 * x0 + &self.a22 * x1,
        )
    }

    /// Projective action; in the chart `u = x1/x0` this is
    /// `u -> (a21 + a22 u) / (a11 + a12 u)`.
    pub fn mobius_apply(&self, p: &ProjectivePoint) -> Result<ProjectivePoint> {
        if self.det().is_zero() {
            return Err(Error::SingularMatrix);
        }
        let (y0, y1) = self.apply_vec(p.x0(), p.x1());
        ProjectivePoint::new(y0, y1)
    }

    /// Scales so that the first nonzero entry (row-major) equals 1.
    pub fn projectively_normalized(&self) -> Self {
        let lead = [&self.a11, &self.a12, &self.a21, &self.a22]
            .into_iter()
            .find(|e| !e.is_zero())
            .cloned();
        match lead.and_then(|l| l.inv()) {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }
}

pub fn mobius_apply(a: &Matrix2, p: &ProjectivePoint) -> Result<ProjectivePoint> {
    a.mobius_apply(p)
}

impl<'a> Mul<&'a Matrix2> for &'a Matrix2 {
    type Output = Matrix2;
    fn mul(self, b: &Matrix2) -> Matrix2 {
        Matrix2::new(
            &self.a11 * &b.a11 + &self.a12 * &b.a21,
            &self.a11 * &b.a12 + &self.a12 * &b.a22,
            &self.a21 * &b.a11 + &self.a22 * &b.a21,
            &self.a21 * &b.a12 + &self.a22 * &b.a22,
        )
    }
}

impl<'a> Add<&'a Matrix2> for &'a Matrix2 {
    type Output = Matrix2;
    fn add(self, b: &Matrix2) -> Matrix2 {
        Matrix2::new(
            &self.a11 + &b.a11,
            &self.a12 + &b.a12,
            &self.a21 + &b.a21,
            &self.a22 + &b.a22,
        )
    }
}

impl<'a> Sub<&'a Matrix2> for &'a Matrix2 {
    type Output = Matrix2;
    fn sub(self, b: &Matrix2) -> Matrix2 {
        Matrix2::new(
            &self.a11 - &b.a11,
            &self.a12 - &b.a12,
            &self.a21 - &b.a21,
            &self.a22 - &b.a22,
        )
    }
}

impl Neg for &Matrix2 {
    type Output = Matrix2;
    fn neg(self) -> Matrix2 {
        Matrix2::new(-&self.a11, -&self.a12, -&self.a21, -&self.a22)
    }
}

impl One for Matrix2 {
    fn one() -> Self {
        Self::identity()
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;
    fn mul(self, rhs: Matrix2) -> Matrix2 {
        &self * &rhs
    }
}

impl Serialize for Matrix2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [[&self.a11, &self.a12], [&self.a21, &self.a22]].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix2 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [[a11, a12], [a21, a22]] = <[[GaussianRational; 2]; 2]>::deserialize(d)?;
        Ok(Matrix2::new(a11, a12, a21, a22))
    }
}
