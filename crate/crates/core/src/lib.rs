//! Symmetry-preserving finite element schemes on one-dimensional meshes.
//!
//! The crate covers piecewise-linear hat-function meshes, the Lie point
//! symmetry groups of a handful of model ODEs and of viscous Burgers'
//! equation, discrete moving frames, invariant three-point schemes with an
//! implicit marching driver, method-of-lines Burgers discretizations on
//! fixed and moving meshes, and a small experiment harness.

// `!(x < tol)` style checks are used on purpose so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod frames;
pub mod group;
pub mod mesh;
pub mod ode;
pub mod solvers;
pub mod burgers;

pub use error::{Error, Result};
pub use frames::{
    frame_burgers, frame_painleve, frame_sl2_cubic, frame_superposition, invariantize_point,
    invariantize_u, painleve_invariants, PainleveInvariants,
};
pub use group::{
    BurgersElement, ExpGroupElement, HomogeneousPair, PainleveElement, PlaneAction, Point,
    Sl2Element, SpaceTimePoint, SuperpositionElement,
};
pub use mesh::{build_uniform_mesh, hat_deriv, hat_eval, stencil_quantities, DiscreteJet, Mesh, StencilQuantities};
pub use ode::{
    march_ivp, residual_cubic_alt, residual_cubic_invariant, residual_exp, residual_linear_invariant,
    residual_linear_weak_form, residual_painleve_inv, residual_painleve_noninv, LinearProblem,
    MarchOptions, Scheme, SchemeId, Startup,
};
pub use solvers::{
    estimate_order, newton_scalar, solve_tridiagonal, ConvergenceRow, ConvergenceTable, NewtonConfig,
};
pub use burgers::{
    assemble_galerkin_fixed, assemble_invariant_lagrangian, assemble_invariant_radaptive, rk4_step,
    simulate, BurgersScheme, BurgersState, MeshMotion, SemiDiscreteRhs,
};
pub use experiments::{
    relative_linf_error, run_burgers, run_convergence, run_invariance_audit, run_painleve_error_series,
    BurgersConfig, ExactSolution, IvpSpec, ProblemId,
};
