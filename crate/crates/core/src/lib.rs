//! Numerical toolkit for su(n)-valued differential forms on flat structured
//! meshes, and for the gauge-theoretic functionals built from them.
//!
//! The crate provides, bottom to top:
//!
//! * [`lie`] — the fibre algebra: validated su(n)/SU(n) values, commutator,
//!   trace pairing, exponential;
//! * [`mesh`] / [`form`] — flat tori Tᵈ and cylinders \[0,1\]×Tᵈ⁻¹ with a
//!   finite-difference exterior calculus (d, ∧, ⋆, δ, integration, boundary
//!   restriction);
//! * [`gauge`] — connections as matrix-valued 1-forms: curvature, gauge
//!   action, covariant derivative, holonomy, flat extensions;
//! * [`functionals`] — Chern–Simons and characteristic integrals, mapping
//!   degree, topological sector charge;
//! * [`cotangent`] — the canonical 1-/2-forms on pairs (A, λ), Yang–Mills
//!   energy and its Hamiltonian vector field, moment maps;
//! * [`presymplectic`] — the boundary-corrected 2-form σ^cs, the boundary
//!   2-form ω and 3-form κ, variational exterior derivatives, contraction
//!   and Lie-derivative identities;
//! * [`elliptic`] — covariant Laplacians with Dirichlet/Neumann data, Green
//!   operators, Coulomb-type gauge decompositions, a quadratic deformation
//!   map, and a dense direct-solver oracle;
//! * [`harness`] — a registry of named verification checks with deterministic
//!   reports and convergence-order estimation, driven by the `presymp` CLI.
//!
//! Everything numeric is generic over the scalar via [`Real`]; the aliases at
//! the crate root fix `f64`, which all stated tolerances refer to.

pub mod error;
pub mod scalar;
pub mod tol;
mod kernels;
pub mod conventions;
pub mod lie;
pub mod mesh;
pub mod form;
pub mod gauge;
pub mod functionals;
pub mod cotangent;
pub mod presymplectic;
pub mod elliptic;
pub mod io;
pub mod harness;

pub use error::{Error, Result};
pub use scalar::Real;

/// su(n) element over f64.
pub type AlgElement = lie::AlgElement<f64>;
/// SU(n) element over f64.
pub type GroupElement = lie::GroupElement<f64>;
/// Structured mesh over f64.
pub type Mesh = mesh::Mesh<f64>;
/// su(n)-valued form field over f64.
pub type FormField = form::FormField<f64>;
/// Gauge transformation field over f64.
pub type GaugeMap = gauge::GaugeMap<f64>;
/// Connection on the default scalar type.
pub type Connection = gauge::Connection<f64>;
/// Cotangent point (A, λ) over f64.
pub type CotangentPoint = cotangent::CotangentPoint<f64>;
/// Cotangent tangent vector (a, α) over f64.
pub type CotangentTangent = cotangent::CotangentTangent<f64>;
