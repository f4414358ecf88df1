//! Exact computation of Abelian integrals for planar systems whose
//! unperturbed part vanishes on families of parallel or orthogonal straight
//! lines, together with zero-count bounds obtained by a derivation-division
//! argument, and independent numerical oracles (quadrature and a Poincaré
//! return-map harness) that validate both.
//!
//! The pipeline, end to end:
//!
//! 1. [`abelian::closed_form`] turns a line configuration and a polynomial
//!    perturbation into an exact closed form: a polynomial in `ρ = r²` plus
//!    radical terms `S(ρ)/√(c−ρ)` and, for mixed configurations, pole terms
//!    `S(ρ)/((d−ρ)√(c−ρ))`.
//! 2. [`abelian::clear_poles`] multiplies by the product of the distinct
//!    pole factors, leaving a pure radical form.
//! 3. [`abelian::to_radical_function`] substitutes `x = −ρ`, producing a
//!    [`radical::RadicalFunction`] `P⁰(x) + Σ Pʲ(x)/√(x+cⱼ)`.
//! 4. [`radical::derivation_division`] runs the derivation-division
//!    procedure symbolically and certifies a zero bound;
//!    [`bounds::thm11_bound`] gives the same bound from configuration
//!    combinatorics alone.
//! 5. [`numeric`] checks everything: adaptive quadrature of the defining
//!    integral, zero isolation, and displacement of the perturbed flow.

pub mod abelian;
pub mod algebra;
pub mod bounds;
pub mod config;
pub mod numeric;
pub mod radical;
pub mod real;
pub mod sample;
pub mod trig;

pub use abelian::{ClosedForm, LineConfig, Perturbation};
pub use algebra::{BiPoly, Poly, Rat};
pub use radical::{GenTerm, PipelineTrace, RadicalFunction};
pub use real::{Real, RealCtx};

/// Top-level error type aggregating every module's failure modes.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] algebra::AlgebraError),
    #[error(transparent)]
    Trig(#[from] trig::TrigError),
    #[error(transparent)]
    Abelian(#[from] abelian::AbelianError),
    #[error(transparent)]
    Radical(#[from] radical::RadicalError),
    #[error(transparent)]
    Bounds(#[from] bounds::BoundsError),
    #[error(transparent)]
    Numeric(#[from] numeric::NumericError),
    #[error(transparent)]
    Config(#[from] config::ConfigError),
}
