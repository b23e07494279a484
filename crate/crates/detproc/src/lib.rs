//! Determinantal point processes at desk scale: integrable kernels, exact
//! window samplers, Fredholm determinants, and the symmetric-function engine
//! needed to check characteristic-polynomial ratio identities and Giambelli
//! compatibility numerically.
//!
//! Layout:
//! - [`scalar`], [`linalg`]: exact complex-rational arithmetic and generic
//!   small determinants shared by everything downstream.
//! - [`symfun`]: partitions, truncated symmetric-function series, Schur
//!   evaluation by four routes, Giambelli determinants.
//! - [`quad`], [`weights`]: Gauss rules and reference weights with exact
//!   (shifted, possibly negative-index) moments.
//! - [`kernels`]: integrable kernels K(x,y) = (A(x)B(y) − A(y)B(x))/(x−y)
//!   with a small zoo (sine, discrete sine, Christoffel–Darboux, Airy, Bessel).
//! - [`sampling`]: exact projection-DPP window sampling and N-point ensembles.
//! - [`functionals`]: regularized multiplicative functionals and their
//!   power-sum specializations.
//! - [`fredholm`]: finite-window Fredholm determinants and expected ratios.
//! - [`identities`]: the verification reports that tie all of the above
//!   together (Cauchy determinants, ratio identities, moment determinants,
//!   Monte Carlo Giambelli checks, contour coefficient extraction).

pub mod scalar;
pub mod linalg;
pub mod symfun;
pub mod quad;
pub mod weights;
pub mod kernels;
pub mod sampling;
pub mod functionals;
pub mod fredholm;
pub mod identities;
