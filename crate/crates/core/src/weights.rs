//! Parabolic weights, the optimum chamber inequalities, and samplers for
//! points inside those chambers.
//!
//! Indices in reports are 1-based, matching how marked points are usually
//! numbered. The last three indices `n-2, n-1, n` are the distinguished
//! triple for even degree.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, serde_rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

impl std::str::FromStr for Parity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            _ => Err(Error::Parse {
                what: "parity",
                input: s.to_string(),
            }),
        }
    }
}

/// Validated weights `(a_i1, a_i2)` at `n` marked points, with
/// `deg E = -sum(a_i1 + a_i2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicWeights {
    pairs: Vec<(BigRational, BigRational)>,
    degree: i64,
}

#[derive(Serialize, Deserialize)]
struct WeightsRecord {
    #[serde(with = "serde_rational::pairs")]
    pairs: Vec<(BigRational, BigRational)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    degree: Option<i64>,
}

impl Serialize for ParabolicWeights {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WeightsRecord {
            pairs: self.pairs.clone(),
            degree: Some(self.degree),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ParabolicWeights {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let record = WeightsRecord::deserialize(d)?;
        let w = ParabolicWeights::validate(record.pairs).map_err(serde::de::Error::custom)?;
        match record.degree {
            Some(degree) if degree != w.degree => Err(serde::de::Error::custom(format!(
                "stated degree {degree} does not match the weights ({})",
                w.degree
            ))),
            _ => Ok(w),
        }
    }
}

impl ParabolicWeights {
    pub fn validate(pairs: Vec<(BigRational, BigRational)>) -> Result<Self> {
        let n = pairs.len();
        if n < 4 {
            return Err(Error::TooFewPoints(n));
        }
        let zero = BigRational::zero();
        let one = BigRational::one();
        for (index, (a1, a2)) in pairs.iter().enumerate() {
            if !(a1 >= &zero && a1 < a2 && a2 < &one) {
                return Err(Error::WeightOrderViolation { index: index + 1 });
            }
        }
        let total: BigRational = pairs.iter().map(|(a1, a2)| a1 + a2).sum();
        if !total.is_integer() {
            return Err(Error::NonIntegerTotal(format_rational(&total)));
        }
        let degree = -total
            .to_integer()
            .to_i64()
            .expect("total is bounded by 2n");
        if !(degree > -2 * n as i64 && degree <= -2) {
            return Err(Error::DegreeOutOfRange { degree, n });
        }
        Ok(Self { pairs, degree })
    }

    pub fn n(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(BigRational, BigRational)] {
        &self.pairs
    }

    pub fn lower(&self, i: usize) -> &BigRational {
        &self.pairs[i].0
    }

    pub fn upper(&self, i: usize) -> &BigRational {
        &self.pairs[i].1
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// `floor(-deg / 2)`.
    pub fn k(&self) -> i64 {
        Integer::div_floor(&(-self.degree), &2)
    }

    pub fn parity(&self) -> Parity {
        if self.degree % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn lower_sum(&self) -> BigRational {
        self.pairs.iter().map(|(a1, _)| a1.clone()).sum()
    }

    pub fn upper_sum(&self) -> BigRational {
        self.pairs.iter().map(|(_, a2)| a2.clone()).sum()
    }

    /// `deg L + sum a'_i` for a subbundle of degree `sub_degree` whose fiber
    /// matches the flag exactly at the indices where `matches` is true.
    pub fn slope(&self, sub_degree: i64, matches: impl Fn(usize) -> bool) -> BigRational {
        let base = BigRational::from_integer(BigInt::from(sub_degree));
        self.pairs
            .iter()
            .enumerate()
            .fold(base, |acc, (i, (a1, a2))| if matches(i) { acc + a2 } else { acc + a1 })
    }
}

/// One inequality cutting out an optimum chamber.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Inequality {
    /// `sum a_i1 > k - 1`
    EvenlySplit,
    /// `a_i2 + a_j2 + sum_{l != i,j} a_l1 > k` for `i, j` in the last three.
    Normalization { i: usize, j: usize },
    /// `a_i2 + sum_{j != i} a_j1 > k`
    Infinity { i: usize },
    /// `sum a_i1 < k`
    LargeBruhat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub inequality: Inequality,
    #[serde(with = "serde_rational")]
    pub lhs: BigRational,
    #[serde(with = "serde_rational")]
    pub bound: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChamberReport {
    pub parity: Parity,
    pub in_chamber: bool,
    pub violations: Vec<Violation>,
}

fn int(k: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

struct Checker {
    violations: Vec<Violation>,
}

impl Checker {
    fn greater(&mut self, inequality: Inequality, lhs: BigRational, bound: BigRational) {
        if lhs <= bound {
            self.violations.push(Violation { inequality, lhs, bound });
        }
    }

    fn less(&mut self, inequality: Inequality, lhs: BigRational, bound: BigRational) {
        if lhs >= bound {
            self.violations.push(Violation { inequality, lhs, bound });
        }
    }

    fn finish(self, parity: Parity) -> ChamberReport {
        ChamberReport {
            parity,
            in_chamber: self.violations.is_empty(),
            violations: self.violations,
        }
    }
}

pub fn check_chamber_even(w: &ParabolicWeights) -> Result<ChamberReport> {
    if w.parity() != Parity::Even {
        return Err(Error::ParityMismatch { expected: "even" });
    }
    let n = w.n();
    let k = w.k();
    let mut check = Checker { violations: vec![] };
    check.greater(Inequality::EvenlySplit, w.lower_sum(), int(k - 1));
    for (i, j) in [(n - 3, n - 2), (n - 3, n - 1), (n - 2, n - 1)] {
        let lhs = w.slope(0, |l| l == i || l == j);
        check.greater(Inequality::Normalization { i: i + 1, j: j + 1 }, lhs, int(k));
    }
    Ok(check.finish(Parity::Even))
}

pub fn check_chamber_odd(w: &ParabolicWeights) -> Result<ChamberReport> {
    if w.parity() != Parity::Odd {
        return Err(Error::ParityMismatch { expected: "odd" });
    }
    let k = w.k();
    let lower = w.lower_sum();
    let mut check = Checker { violations: vec![] };
    check.greater(Inequality::EvenlySplit, lower.clone(), int(k - 1));
    for i in 0..w.n() {
        check.greater(Inequality::Infinity { i: i + 1 }, w.slope(0, |l| l == i), int(k));
    }
    check.less(Inequality::LargeBruhat, lower, int(k));
    Ok(check.finish(Parity::Odd))
}

/// Dispatches on the parity of the weights.
pub fn check_chamber(w: &ParabolicWeights) -> ChamberReport {
    match w.parity() {
        Parity::Even => check_chamber_even(w),
        Parity::Odd => check_chamber_odd(w),
    }
    .expect("parity matches by construction")
}

/// The two-parameter even-degree family, without any precondition checks:
/// `a_i1 = (1-eps)k/n, a_i2 = (1+eps)k/n` for `i <= n-3` and the same with
/// `delta` on the last three points.
pub fn even_family(
    n: usize,
    k: usize,
    eps: &BigRational,
    delta: &BigRational,
) -> Vec<(BigRational, BigRational)> {
    let one = BigRational::one();
    let base = int(k as i64) / int(n as i64);
    (0..n)
        .map(|i| {
            let t = if i + 3 < n { eps } else { delta };
            (&base * (&one - t), &base * (&one + t))
        })
        .collect()
}

/// The one-parameter odd-degree family
/// `a_i1 = k(1-eps)/n, a_i2 = (k(1+eps)+1)/n`, unchecked.
pub fn odd_family(n: usize, k: usize, eps: &BigRational) -> Vec<(BigRational, BigRational)> {
    let one = BigRational::one();
    let kq = int(k as i64);
    let nq = int(n as i64);
    let a1 = &kq * (&one - eps) / &nq;
    let a2 = (&kq * (&one + eps) + &one) / &nq;
    vec![(a1, a2); n]
}

fn require(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::ConstraintViolation(what.to_string()))
    }
}

pub fn sample_even(
    n: usize,
    k: usize,
    eps: &BigRational,
    delta: &BigRational,
) -> Result<ParabolicWeights> {
    require(n >= 4, "n >= 4")?;
    require(k >= 1 && k < n, "1 <= k <= n-1")?;
    let zero = BigRational::zero();
    let cap = BigRational::one().min(int(n as i64) / int(k as i64) - BigRational::one());
    require(eps > &zero && eps < &cap, "0 < eps < min(1, n/k - 1)")?;
    require(delta > &zero && delta < &cap, "0 < delta < min(1, n/k - 1)")?;
    require(&(int(n as i64 - 3) * eps) < delta, "(n-3) eps < delta")?;
    require(delta < &(int(n as i64) / int(4 * k as i64)), "delta < n/(4k)")?;
    ParabolicWeights::validate(even_family(n, k, eps, delta))
}

pub fn sample_odd(n: usize, k: usize, eps: &BigRational) -> Result<ParabolicWeights> {
    require(n >= 4, "n >= 4")?;
    require(k >= 1 && k + 2 <= n, "1 <= k <= n-2")?;
    require(eps.is_positive(), "0 < eps")?;
    require(
        eps < &(BigRational::one() / int((k * (n - 2)) as i64)),
        "eps < 1/(k(n-2))",
    )?;
    ParabolicWeights::validate(odd_family(n, k, eps))
}

/// Whether every pair satisfies `a_i2 = 1 - a_i1 > 1/2`.
pub fn check_su2(w: &ParabolicWeights) -> bool {
    let one = BigRational::one();
    let half = int(1) / int(2);
    w.pairs
        .iter()
        .all(|(a1, a2)| a2 == &(&one - a1) && a2 > &half)
}
