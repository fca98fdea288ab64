//! Parabolic Higgs fields on the optimum-chamber models, the quadratic
//! Hitchin map and the nilpotent-cone equations.
//!
//! A Higgs field is stored by its residue data: one scale `c_i` per marked
//! point, with the residue at `z_i` equal to `c_i` times the nilpotent
//! matrix whose kernel is the flag line `L_i`. The marked points must be in
//! the gauge `(z_1, .., z_{n-3}, 1, 0, inf)`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parabolic::{act_even, act_odd, FlagConfig, MarkedCurve, OddAutomorphism};
use crate::scalar::linalg::kernel_basis;
use crate::scalar::{GaussianRational, Matrix2, Poly, ProjectivePoint, RationalFunction};
use crate::weights::Parity;

/// `c` times the nilpotent matrix with kernel `kernel`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NilpotentResidue {
    pub c: GaussianRational,
    pub kernel: ProjectivePoint,
}

impl NilpotentResidue {
    pub fn new(c: GaussianRational, kernel: ProjectivePoint) -> Self {
        Self { c, kernel }
    }

    pub fn matrix(&self) -> Matrix2 {
        nilp_matrix(self)
    }
}

/// `c [[-u, 1], [-u^2, u]]` for kernel `[1, u]`, and `c [[0, 0], [1, 0]]`
/// for kernel `[0, 1]`.
pub fn nilp_matrix(r: &NilpotentResidue) -> Matrix2 {
    let unit = match r.kernel.affine_value() {
        Some(u) => Matrix2::new(-u, 1.into(), -(u * u), u.clone()),
        None => Matrix2::from_ints(0, 0, 1, 0),
    };
    unit.scale(&r.c)
}

/// `tr(B B')`; equals `-c c' (u - u')^2` for finite kernels.
pub fn trace_pair(r: &NilpotentResidue, s: &NilpotentResidue) -> GaussianRational {
    (&r.matrix() * &s.matrix()).trace()
}

/// Scalar coefficients of `c_i` in the entries (1,1), (1,2), (2,1) of the
/// unit nilpotent matrix with kernel `line`.
fn unit_entries(line: &ProjectivePoint) -> [GaussianRational; 3] {
    let m = nilp_matrix(&NilpotentResidue::new(1.into(), line.clone()));
    [m.a11, m.a12, m.a21]
}

fn check_lengths(curve: &MarkedCurve, flags: &FlagConfig, c: &[GaussianRational]) -> Result<()> {
    flags.check_len(curve.n())?;
    if c.len() != curve.n() {
        return Err(Error::LengthMismatch {
            expected: curve.n(),
            got: c.len(),
        });
    }
    Ok(())
}

fn violations(residuals: &[GaussianRational]) -> Result<()> {
    if residuals.iter().all(Zero::is_zero) {
        Ok(())
    } else {
        Err(Error::ResidueConstraintViolation {
            residuals: residuals.iter().map(|r| r.to_string()).collect(),
        })
    }
}

fn even_constraint_rows(flags: &FlagConfig) -> Vec<Vec<GaussianRational>> {
    let cols: Vec<[GaussianRational; 3]> = flags.lines().iter().map(unit_entries).collect();
    (0..3)
        .map(|e| cols.iter().map(|col| col[e].clone()).collect())
        .collect()
}

/// Rows of the odd-degree residue conditions in the unknowns `c_1..c_n`:
/// `sum_{i<n} c_i = 0`, `c_n + sum_{i<n} c_i z_i = 0`,
/// `sum_{i<n} c_i u_i + c_n u_n = 0`.
fn odd_constraint_rows(curve: &MarkedCurve, u: &[GaussianRational]) -> Vec<Vec<GaussianRational>> {
    let n = curve.n();
    let one = GaussianRational::from(1);
    let zero = GaussianRational::zero();
    let mut sum_row: Vec<_> = vec![one.clone(); n];
    sum_row[n - 1] = zero;
    let mut moment_row: Vec<_> = (0..n - 1)
        .map(|i| curve.finite(i).cloned().expect("interior points are finite"))
        .collect();
    moment_row.push(one);
    vec![sum_row, moment_row, u.to_vec()]
}

fn apply_rows(rows: &[Vec<GaussianRational>], c: &[GaussianRational]) -> Vec<GaussianRational> {
    rows.iter()
        .map(|row| {
            row.iter()
                .zip(c)
                .fold(GaussianRational::zero(), |acc, (a, b)| &acc + &(a * b))
        })
        .collect()
}

/// An even-degree Higgs field: `Phi = sum_{i<n} B_i / (z - z_i) dz` with
/// `sum_i B_i = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HiggsEven {
    curve: MarkedCurve,
    flags: FlagConfig,
    c: Vec<GaussianRational>,
}

/// An odd-degree Higgs field:
/// `Phi = (sum_{i<n} B_i / (z - z_i) + c_n [[0, 0], [u_n^2, 0]]) dz`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HiggsOdd {
    curve: MarkedCurve,
    flags: FlagConfig,
    c: Vec<GaussianRational>,
}

pub fn validate_higgs_even(
    curve: &MarkedCurve,
    flags: &FlagConfig,
    c: Vec<GaussianRational>,
) -> Result<HiggsEven> {
    curve.require_standard_gauge()?;
    check_lengths(curve, flags, &c)?;
    violations(&apply_rows(&even_constraint_rows(flags), &c))?;
    Ok(HiggsEven {
        curve: curve.clone(),
        flags: flags.clone(),
        c,
    })
}

pub fn validate_higgs_odd(
    curve: &MarkedCurve,
    flags: &FlagConfig,
    c: Vec<GaussianRational>,
) -> Result<HiggsOdd> {
    curve.require_standard_gauge()?;
    check_lengths(curve, flags, &c)?;
    let u = flags.affine_values()?;
    violations(&apply_rows(&odd_constraint_rows(curve, &u), &c))?;
    Ok(HiggsOdd {
        curve: curve.clone(),
        flags: flags.clone(),
        c,
    })
}

/// Basis of the residue scales `c` admissible for these flags.
pub fn higgs_basis_even(curve: &MarkedCurve, flags: &FlagConfig) -> Result<Vec<Vec<GaussianRational>>> {
    flags.check_len(curve.n())?;
    Ok(kernel_basis(&even_constraint_rows(flags), curve.n()))
}

pub fn higgs_basis_odd(curve: &MarkedCurve, flags: &FlagConfig) -> Result<Vec<Vec<GaussianRational>>> {
    curve.require_standard_gauge()?;
    flags.check_len(curve.n())?;
    let u = flags.affine_values()?;
    Ok(kernel_basis(&odd_constraint_rows(curve, &u), curve.n()))
}

/// A validated Higgs record of either parity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "parity", rename_all = "lowercase")]
pub enum HiggsField {
    Even(HiggsEven),
    Odd(HiggsOdd),
}

impl From<HiggsEven> for HiggsField {
    fn from(h: HiggsEven) -> Self {
        HiggsField::Even(h)
    }
}

impl From<HiggsOdd> for HiggsField {
    fn from(h: HiggsOdd) -> Self {
        HiggsField::Odd(h)
    }
}

macro_rules! record_accessors {
    ($t:ty) => {
        impl $t {
            pub fn curve(&self) -> &MarkedCurve {
                &self.curve
            }
            pub fn flags(&self) -> &FlagConfig {
                &self.flags
            }
            pub fn c(&self) -> &[GaussianRational] {
                &self.c
            }
            pub fn residue(&self, i: usize) -> NilpotentResidue {
                NilpotentResidue::new(self.c[i].clone(), self.flags.line(i).clone())
            }
        }
    };
}
record_accessors!(HiggsEven);
record_accessors!(HiggsOdd);

impl HiggsField {
    pub fn parity(&self) -> Parity {
        match self {
            HiggsField::Even(_) => Parity::Even,
            HiggsField::Odd(_) => Parity::Odd,
        }
    }

    pub fn curve(&self) -> &MarkedCurve {
        match self {
            HiggsField::Even(h) => h.curve(),
            HiggsField::Odd(h) => h.curve(),
        }
    }

    pub fn flags(&self) -> &FlagConfig {
        match self {
            HiggsField::Even(h) => h.flags(),
            HiggsField::Odd(h) => h.flags(),
        }
    }

    pub fn c(&self) -> &[GaussianRational] {
        match self {
            HiggsField::Even(h) => h.c(),
            HiggsField::Odd(h) => h.c(),
        }
    }

    pub fn residue(&self, i: usize) -> NilpotentResidue {
        NilpotentResidue::new(self.c()[i].clone(), self.flags().line(i).clone())
    }

    /// The holomorphic part of `Phi` on the affine chart (zero in even
    /// degree).
    pub fn constant_term(&self) -> Matrix2 {
        match self {
            HiggsField::Even(_) => Matrix2::zero(),
            HiggsField::Odd(h) => {
                let n = h.c.len();
                let un = h.flags.line(n - 1).affine_value().expect("odd flags are finite");
                Matrix2::new(0.into(), 0.into(), &h.c[n - 1] * &(un * un), 0.into())
            }
        }
    }

    /// `Phi(z)` at a finite point that is not a pole.
    pub fn eval(&self, z: &GaussianRational) -> Matrix2 {
        let n = self.c().len();
        (0..n - 1).fold(self.constant_term(), |acc, i| {
            let zi = self.curve().finite(i).expect("finite interior point");
            let w = (z - zi).inv().expect("z is not a marked point");
            &acc + &self.residue(i).matrix().scale(&w)
        })
    }
}

/// Image of a Higgs field under the quadratic Hitchin map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HitchinImage {
    /// Coordinates in the basis `P_1..P_{n-3}`.
    pub coeffs: Vec<GaussianRational>,
    /// `tr(Phi(z)^2)` as a rational function on the affine chart.
    pub q: RationalFunction,
}

/// `tr(Phi^2)` and its residues at `z_1..z_{n-3}`.
pub fn hitchin(h: &HiggsField) -> HitchinImage {
    let n = h.c().len();
    let curve = h.curve();
    let points: Vec<&GaussianRational> = (0..n - 1)
        .map(|i| curve.finite(i).expect("finite interior point"))
        .collect();
    let residues: Vec<Matrix2> = (0..n - 1).map(|i| h.residue(i).matrix()).collect();
    let constant = h.constant_term();

    let linear: Vec<Poly> = points.iter().map(|&z| Poly::linear_root(z)).collect();
    let full = linear.iter().fold(Poly::one(), |acc, l| &(&acc * l) * l);
    let mut numerator = &Poly::constant((&constant * &constant).trace()) * &full;
    for i in 0..n - 1 {
        let without_i = full.div_exact(&linear[i]);
        let cross = (&residues[i] * &constant).trace();
        if !cross.is_zero() {
            let two = GaussianRational::from(2);
            numerator = &numerator + &without_i.scale(&(&two * &cross));
        }
        for j in i..n - 1 {
            let t = (&residues[i] * &residues[j]).trace();
            if t.is_zero() {
                continue;
            }
            let weight = if i == j { t } else { &t * &GaussianRational::from(2) };
            numerator = &numerator + &without_i.div_exact(&linear[j]).scale(&weight);
        }
    }
    let poles: Vec<(GaussianRational, u32)> = points.iter().map(|&z| (z.clone(), 2)).collect();
    let q = RationalFunction::over_linear_factors(numerator, &poles);
    let coeffs = (0..n - 3).map(|i| q.residue_at(curve.point(i))).collect();
    HitchinImage { coeffs, q }
}

fn require_odd_gauge(h: &HiggsOdd, also_second_to_last: bool) -> Result<()> {
    let n = h.c.len();
    let zero = ProjectivePoint::from_int(0);
    if h.flags.line(n - 1) != &zero {
        return Err(Error::GaugeViolation("odd cone equations need u_n = 0"));
    }
    if also_second_to_last && h.flags.line(n - 2) != &zero {
        return Err(Error::GaugeViolation("expanded cone equations need u_(n-1) = u_n = 0"));
    }
    Ok(())
}

/// `sum_{j != i, j < n} tr(B_i B_j) / (z_i - z_j)` for `i = 1..n-3`.
pub fn cone_equations(h: &HiggsField) -> Result<Vec<GaussianRational>> {
    if let HiggsField::Odd(odd) = h {
        require_odd_gauge(odd, false)?;
    }
    let n = h.c().len();
    let curve = h.curve();
    let z = |i: usize| curve.finite(i).expect("finite interior point");
    Ok((0..n - 3)
        .map(|i| {
            let bi = h.residue(i);
            (0..n - 1)
                .filter(|&j| j != i)
                .fold(GaussianRational::zero(), |acc, j| {
                    let t = trace_pair(&bi, &h.residue(j));
                    &acc + &(&t / &(z(i) - z(j)))
                })
        })
        .collect())
}

/// The cone equations written in the normalized odd coordinates:
/// `c_i (sum_{j != i, j <= n-2} c_j (u_i - u_j)^2 / (z_i - z_j)
///       - sum_{j <= n-2} c_j u_i^2 / z_i)`.
pub fn cone_expanded_odd(h: &HiggsOdd) -> Result<Vec<GaussianRational>> {
    require_odd_gauge(h, true)?;
    let n = h.c.len();
    let u = h.flags.affine_values()?;
    let z = |i: usize| h.curve.finite(i).expect("finite interior point");
    let c = &h.c;
    Ok((0..n - 3)
        .map(|i| {
            let mut first = GaussianRational::zero();
            let mut c_sum = GaussianRational::zero();
            for j in 0..n - 2 {
                c_sum += &c[j];
                if j != i {
                    let d = &u[i] - &u[j];
                    first += &(&(&c[j] * &(&d * &d)) / &(z(i) - z(j)));
                }
            }
            let second = &(&c_sum * &(&u[i] * &u[i])) / z(i);
            &c[i] * &(&first - &second)
        })
        .collect())
}

/// Bundle automorphism acting on a Higgs record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupElement {
    Even(Matrix2),
    Odd(OddAutomorphism),
}

/// Recovers the scale of a nilpotent matrix with known kernel line.
fn scale_of(m: &Matrix2, kernel: &ProjectivePoint) -> GaussianRational {
    if kernel.is_infinite() {
        m.a21.clone()
    } else {
        m.a12.clone()
    }
}

/// Transforms flags by the group action and each residue by conjugation
/// with the automorphism's value at its marked point.
pub fn act_on_higgs(g: &GroupElement, h: &HiggsField) -> Result<HiggsField> {
    match (g, h) {
        (GroupElement::Even(a), HiggsField::Even(h)) => {
            let flags = act_even(a, &h.flags)?;
            let c = (0..h.c.len())
                .map(|i| {
                    let conj = a.conjugate(&h.residue(i).matrix())?;
                    Ok(scale_of(&conj, flags.line(i)))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(validate_higgs_even(&h.curve, &flags, c)?.into())
        }
        (GroupElement::Odd(g), HiggsField::Odd(h)) => {
            let flags = act_odd(g, &h.curve, &h.flags)?;
            let n = h.c.len();
            let mut c = (0..n - 1)
                .map(|i| {
                    let conj = g.matrix_at(h.curve.point(i)).conjugate(&h.residue(i).matrix())?;
                    Ok(scale_of(&conj, flags.line(i)))
                })
                .collect::<Result<Vec<_>>>()?;
            c.push(&(&h.c[n - 1] * g.b11()) / g.b22());
            Ok(validate_higgs_odd(&h.curve, &flags, c)?.into())
        }
        (GroupElement::Even(_), HiggsField::Odd(_)) => Err(Error::ParityMismatch { expected: "odd" }),
        (GroupElement::Odd(_), HiggsField::Even(_)) => Err(Error::ParityMismatch { expected: "even" }),
    }
}
