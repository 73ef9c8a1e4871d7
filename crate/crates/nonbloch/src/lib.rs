//! Floquet non-Bloch band theory for one-dimensional non-Hermitian lattices.
//!
//! The crate computes open-boundary quasienergy spectra of periodically
//! driven non-Hermitian chains in the thermodynamic limit by constructing
//! the Floquet generalized Brillouin zone (GBZ): auxiliary curves where
//! characteristic roots from different Floquet zones share a modulus are
//! traced with polynomial resultants, then filtered by the middle-root
//! condition. A brute-force real-space oracle (Floquet operators from
//! ordered products of matrix exponentials, dense diagonalization) provides
//! ground truth at finite size, and observable helpers derive PT phase
//! diagrams, critical driving periods, and Lyapunov dynamics.
//!
//! All numerics are generic over the real scalar via [`scalar::Real`];
//! `f64` aliases are exported at the crate root.

pub mod eig;
pub mod error;
pub mod expm;
pub mod export;
pub mod gbz;
pub mod lattice;
pub mod laurent;
pub mod linalg;
pub mod observables;
pub mod polyroots;
pub mod resultant;
pub mod scalar;
pub mod spectrum;

pub use error::Error;
pub use scalar::Real;

/// Default concrete scalar for the CLI and most applications.
pub type Scalar = f64;
/// Complex number over the default scalar.
pub type C64 = num_complex::Complex<f64>;
/// Dense complex matrix over the default scalar.
pub type CMat64 = linalg::CMat<f64>;

pub type LaurentPoly64 = laurent::LaurentPoly<f64>;
pub type LaurentMatrixPoly64 = laurent::LaurentMatrixPoly<f64>;
pub type CharPoly64 = laurent::CharPoly<f64>;
pub type TimedLaurentPoly64 = laurent::TimedLaurentPoly<f64>;
pub type RootList64 = polyroots::RootList<f64>;
pub type GbzCurve64 = resultant::GbzCurve<f64>;
pub type FloquetGbz64 = gbz::FloquetGbz<f64>;
pub type SpectrumSet64 = spectrum::SpectrumSet<f64>;
pub type DriveProtocol64 = lattice::DriveProtocol<f64>;
pub type Error64 = error::Error<f64>;
