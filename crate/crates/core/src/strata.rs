//! Quadratic differentials with at most simple poles on the marked points,
//! their zero-multiplicity strata, and the nilpotent-cone trace for four
//! points.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::higgs::{cone_equations, higgs_basis_even, higgs_basis_odd, validate_higgs_even, validate_higgs_odd, HiggsField};
use crate::parabolic::{FlagConfig, MarkedCurve};
use crate::scalar::{gaussian_rational_roots, GaussianRational, HomogeneousPoint, Poly, ProjectivePoint, RationalFunction};
use crate::weights::Parity;

fn interior_points(curve: &MarkedCurve) -> Vec<GaussianRational> {
    (0..curve.n() - 3)
        .map(|i| curve.finite(i).cloned().expect("interior points are finite"))
        .collect()
}

/// `P_i(z) = 1/(z - z_i) + (z_i - 1)/z - z_i/(z - 1)`, with `i` 1-based.
pub fn basis_function(i: usize, curve: &MarkedCurve) -> Result<RationalFunction> {
    curve.require_standard_gauge()?;
    let max = curve.n() - 3;
    if i == 0 || i > max {
        return Err(Error::IndexOutOfRange { index: i, max });
    }
    let zi = curve.finite(i - 1).expect("interior points are finite");
    let one = GaussianRational::from(1);
    let zero = GaussianRational::zero();
    Ok(&(&RationalFunction::simple_pole(one.clone(), zi)
        + &RationalFunction::simple_pole(zi - &one, &zero))
        - &RationalFunction::simple_pole(zi.clone(), &one))
}

/// A quadratic differential `q(z) dz^2` in the span of `P_1..P_{n-3}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadDiff {
    coeffs: Vec<GaussianRational>,
    function: RationalFunction,
}

impl QuadDiff {
    pub fn new(coeffs: Vec<GaussianRational>, curve: &MarkedCurve) -> Result<Self> {
        curve.require_standard_gauge()?;
        if coeffs.len() != curve.n() - 3 {
            return Err(Error::LengthMismatch {
                expected: curve.n() - 3,
                got: coeffs.len(),
            });
        }
        // sum of c_i P_i over the common denominator z (z - 1) prod (z - z_i)
        let zero = GaussianRational::zero();
        let one = GaussianRational::from(1);
        let mut poles = vec![(zero, 1), (one.clone(), 1)];
        poles.extend(interior_points(curve).into_iter().map(|z| (z, 1)));
        let linear: Vec<Poly> = poles.iter().map(|(r, _)| Poly::linear_root(r)).collect();
        let full = linear.iter().fold(Poly::one(), |acc, l| &acc * l);
        let mut numerator = Poly::zero();
        for (i, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let zi = &poles[i + 2].0;
            let term = &(&full.div_exact(&linear[i + 2]) + &full.div_exact(&linear[0]).scale(&(zi - &one)))
                - &full.div_exact(&linear[1]).scale(zi);
            numerator = &numerator + &term.scale(c);
        }
        let function = RationalFunction::over_linear_factors(numerator, &poles);
        Ok(Self { coeffs, function })
    }

    /// Reads the coordinates off the residues at `z_1..z_{n-3}` and checks
    /// that `f` lies in the span.
    pub fn from_function(f: &RationalFunction, curve: &MarkedCurve) -> Result<Self> {
        curve.require_standard_gauge()?;
        let coeffs = (0..curve.n() - 3).map(|i| f.residue_at(curve.point(i))).collect();
        let q = Self::new(coeffs, curve)?;
        if &q.function != f {
            return Err(Error::ConstraintViolation(
                "function has poles or growth outside the span of the basis".into(),
            ));
        }
        Ok(q)
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn function(&self) -> &RationalFunction {
        &self.function
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

/// Zero multiplicities of a quadratic differential and its membership in
/// `U` (no coordinate vanishes) and `U'` (in `U` with simple zeros only).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    pub partition: Vec<u32>,
    #[serde(rename = "in_U")]
    pub in_u: bool,
    #[serde(rename = "in_Uprime")]
    pub in_uprime: bool,
}

/// Numerator of `q` over the fixed denominator `z (z - 1) prod (z - z_i)`.
pub fn cleared_numerator(q: &QuadDiff, curve: &MarkedCurve) -> Poly {
    let zero = GaussianRational::zero();
    let one = GaussianRational::from(1);
    let fixed = interior_points(curve)
        .iter()
        .fold(&Poly::linear_root(&zero) * &Poly::linear_root(&one), |acc, zi| {
            &acc * &Poly::linear_root(zi)
        });
    let f = q.function();
    &f.numerator().clone() * &fixed.div_exact(f.denominator())
}

pub fn zero_partition(q: &QuadDiff, curve: &MarkedCurve) -> Result<Stratum> {
    curve.require_standard_gauge()?;
    if q.is_zero() {
        return Err(Error::ZeroDifferential);
    }
    let numerator = cleared_numerator(q, curve);
    let degree = numerator.degree().expect("nonzero numerator");
    let mut partition: Vec<u32> = Vec::new();
    for (factor, m) in numerator.squarefree_decomposition() {
        let d = factor.degree().unwrap_or(0);
        partition.extend(std::iter::repeat_n(m, d));
    }
    let generic = curve.n() - 4;
    if degree < generic {
        partition.push((generic - degree) as u32);
    }
    partition.sort_unstable_by(|a, b| b.cmp(a));
    let in_u = q.coeffs().iter().all(|c| !c.is_zero());
    let in_uprime = in_u && partition.iter().all(|&m| m == 1);
    Ok(Stratum {
        partition,
        in_u,
        in_uprime,
    })
}

/// A point of the moduli space in the coordinates used by
/// `moduli_point_even` and `moduli_point_odd`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum ModuliPoint {
    Even(Vec<ProjectivePoint>),
    Odd(HomogeneousPoint),
}

impl std::fmt::Display for ModuliPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModuliPoint::Even(lines) => {
                let parts: Vec<String> = lines.iter().map(|l| l.to_string()).collect();
                write!(f, "({})", parts.join(", "))
            }
            ModuliPoint::Odd(p) => {
                let parts: Vec<String> = p.coords().iter().map(|c| c.to_string()).collect();
                write!(f, "[{}]", parts.join(":"))
            }
        }
    }
}

/// Flags of the normalized representative for chart value `t`:
/// `(t, 1, 0, inf)` in even degree, `(t, 1, 0, 0)` in odd degree.
fn chart_flags(parity: Parity, t: Option<&GaussianRational>) -> FlagConfig {
    let p = ProjectivePoint::from_int;
    match (parity, t) {
        (Parity::Even, Some(t)) => FlagConfig::new(vec![ProjectivePoint::affine(t.clone()), p(1), p(0), ProjectivePoint::infinity()]),
        (Parity::Even, None) => FlagConfig::new(vec![ProjectivePoint::infinity(), p(1), p(0), ProjectivePoint::infinity()]),
        (Parity::Odd, Some(t)) => FlagConfig::new(vec![ProjectivePoint::affine(t.clone()), p(1), p(0), p(0)]),
        (Parity::Odd, None) => FlagConfig::new(vec![p(1), p(0), p(0), p(0)]),
    }
}

fn chart_point(parity: Parity, t: Option<&GaussianRational>) -> ModuliPoint {
    match (parity, t) {
        (Parity::Even, Some(t)) => ModuliPoint::Even(vec![ProjectivePoint::affine(t.clone())]),
        (Parity::Even, None) => ModuliPoint::Even(vec![ProjectivePoint::infinity()]),
        (Parity::Odd, Some(t)) => ModuliPoint::Odd(HomogeneousPoint::new(vec![t.clone(), 1.into()]).expect("nonzero")),
        (Parity::Odd, None) => ModuliPoint::Odd(HomogeneousPoint::new(vec![1.into(), 0.into()]).expect("nonzero")),
    }
}

fn det3(m: &[[Poly; 3]; 3]) -> Poly {
    let minor = |a: &Poly, b: &Poly, c: &Poly, d: &Poly| &(a * d) - &(b * c);
    let t0 = &m[0][0] * &minor(&m[1][1], &m[1][2], &m[2][1], &m[2][2]);
    let t1 = &m[0][1] * &minor(&m[1][0], &m[1][2], &m[2][0], &m[2][2]);
    let t2 = &m[0][2] * &minor(&m[1][0], &m[1][1], &m[2][0], &m[2][1]);
    &(&t0 - &t1) + &t2
}

/// Residue constraints on the chart, as three rows of polynomials in `t`.
fn chart_rows(parity: Parity, z1: &GaussianRational) -> [[Poly; 4]; 3] {
    let t = Poly::from_ints(&[0, 1]);
    let k = |n: i64| Poly::from_ints(&[n]);
    match parity {
        // entries (1,1), (1,2), (2,1) of the unit nilpotents at (t, 1, 0, inf)
        Parity::Even => [
            [-&t, k(-1), k(0), k(0)],
            [k(1), k(1), k(1), k(0)],
            [-&(&t * &t), k(-1), k(0), k(1)],
        ],
        Parity::Odd => [
            [k(1), k(1), k(1), k(0)],
            [Poly::constant(z1.clone()), k(1), k(0), k(1)],
            [t, k(1), k(0), k(0)],
        ],
    }
}

/// The moduli points over which some nonzero Higgs field lies in the
/// nilpotent cone, for `n = 4`.
///
/// The fiber over the chart value `t` is spanned by the signed maximal
/// minors of the constraint matrix, so the cone value is a polynomial in
/// `t` whose roots are found exactly. The point at the end of the chart is
/// checked directly.
pub fn cone_trace_n4(curve: &MarkedCurve, parity: Parity) -> Result<Vec<ModuliPoint>> {
    if curve.n() != 4 {
        return Err(Error::WrongN(curve.n()));
    }
    curve.require_standard_gauge()?;
    let z1 = curve.finite(0).expect("finite").clone();
    let rows = chart_rows(parity, &z1);
    let c: Vec<Poly> = (0..4)
        .map(|skip| {
            let m: [[Poly; 3]; 3] = std::array::from_fn(|r| {
                let mut cols = (0..4).filter(|&j| j != skip).map(|j| rows[r][j].clone());
                std::array::from_fn(|_| cols.next().expect("three columns"))
            });
            let d = det3(&m);
            if skip % 2 == 1 { -&d } else { d }
        })
        .collect();
    let common = c.iter().fold(Poly::zero(), |acc, p| acc.gcd(p));

    // cone_1 = c_1 sum_{j = 2, 3} c_j tr(N(u_1) N(u_j)) / (z_1 - z_j)
    let t = Poly::from_ints(&[0, 1]);
    let others = [(GaussianRational::from(1), GaussianRational::from(1)), (GaussianRational::zero(), GaussianRational::zero())];
    let mut inner = Poly::zero();
    for (j, (uj, zj)) in others.iter().enumerate() {
        let d = &t - &Poly::constant(uj.clone());
        let w = (&z1 - zj).inv().expect("distinct marked points");
        inner = &inner - &(&(&d * &d) * &c[j + 1]).scale(&w);
    }
    let cone = &c[0] * &inner;
    if cone.is_zero() {
        return Err(Error::ConstraintViolation("cone value vanishes on the whole chart".into()));
    }
    let reduced = cone.div_exact(&(&common * &common));

    let mut roots = gaussian_rational_roots(&reduced)?;
    for r in gaussian_rational_roots(&common)? {
        if !roots.contains(&r) {
            roots.push(r);
        }
    }
    let mut points: Vec<ModuliPoint> = roots.iter().map(|r| chart_point(parity, Some(r))).collect();
    if end_of_chart_in_trace(curve, parity)? {
        points.push(chart_point(parity, None));
    }
    points.sort_by_key(|p| p.to_string());
    Ok(points)
}

fn end_of_chart_in_trace(curve: &MarkedCurve, parity: Parity) -> Result<bool> {
    let flags = chart_flags(parity, None);
    let basis = match parity {
        Parity::Even => higgs_basis_even(curve, &flags)?,
        Parity::Odd => higgs_basis_odd(curve, &flags)?,
    };
    if basis.len() != 1 {
        // a quadratic form on a space of dimension two or more has
        // isotropic vectors
        return Ok(!basis.is_empty());
    }
    let h: HiggsField = match parity {
        Parity::Even => validate_higgs_even(curve, &flags, basis[0].clone())?.into(),
        Parity::Odd => validate_higgs_odd(curve, &flags, basis[0].clone())?.into(),
    };
    Ok(cone_equations(&h)?.iter().all(Zero::is_zero))
}
