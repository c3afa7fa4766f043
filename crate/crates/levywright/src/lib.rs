//! Numerics for a two-parameter family of spectrally negative Lévy
//! processes, the Wright hypergeometric functions pΨq, closed-form laws of
//! exponential functionals, and self-similar CBI semigroups — together with
//! an independent verification layer (adaptive quadrature, numerical Laplace
//! inversion, Monte Carlo path simulation, KS tests).
//!
//! Module map:
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`specfun`] | Γ, Ψ (digamma), incomplete beta, Bessel I, Pochhammer |
//! | [`quad`] | adaptive Gauss–Kronrod quadrature |
//! | [`wright`] | pΨq series, asymptotics, contour quadrature, dispatcher |
//! | [`levy`] | the ψ^(γ) and ψ^(0,δ) exponent families, triplets, roots, scale function |
//! | [`expfun`] | exponential-functional density, Laplace transform 𝒩, mode, limits |
//! | [`cbi`] | self-similar CBI semigroups: transition/entrance densities, first passage, OU |
//! | [`sim`] | Lévy path simulation, functional sampling, Laplace inversion, KS |
//! | [`verify`] | the acceptance checks, shared by `cargo test` and the CLI's `verify all` |
//!
//! Accuracy contracts are stated per operation; every closed form is
//! cross-validated against at least one independent representation
//! (quadrature, Monte Carlo, or Laplace inversion) in the test suite.

pub mod error;
pub mod specfun;
pub mod quad;
pub mod wright;
pub mod levy;
pub mod expfun;
pub mod cbi;
pub mod sim;
pub mod verify;

pub use error::{Error, Result};
