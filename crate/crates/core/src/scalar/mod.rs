//! Exact scalar and projective-line machinery shared by every other module.

mod gaussian;
pub mod linalg;
mod matrix;
mod poly;
mod projective;
mod ratfunc;
mod roots;
pub mod serde_rational;

pub use gaussian::{format_rational, parse_rational, rat, GaussianRational};
pub use matrix::{mobius_apply, Matrix2};
pub use poly::Poly;
pub use projective::{proj_canonical, HomogeneousPoint, ProjectivePoint};
pub use ratfunc::{residue_at, RationalFunction};
pub use roots::gaussian_rational_roots;
