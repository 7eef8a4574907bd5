//! Three-point finite element schemes for second-order ODEs and the
//! implicit marching driver that integrates them as initial value problems.
//!
//! Residuals are written as "left side minus right side" of the scheme, so a
//! discrete solution is a zero of the residual at every interior node.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::frames::{frame_superposition, painleve_invariants, require_positive};
use crate::group::{HomogeneousPair, ScalarFn};
use crate::mesh::{DiscreteJet, Mesh};
use crate::solvers::{central_difference, newton_scalar, NewtonConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeId {
    ExpInvariant,
    CubicInvariant,
    CubicAlternative,
    PainleveInvariant,
    PainleveNonInvariant,
    LinearInvariant,
}

impl SchemeId {
    pub const ALL: [SchemeId; 6] = [
        SchemeId::ExpInvariant,
        SchemeId::CubicInvariant,
        SchemeId::CubicAlternative,
        SchemeId::PainleveInvariant,
        SchemeId::PainleveNonInvariant,
        SchemeId::LinearInvariant,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeId::ExpInvariant => "exp-invariant",
            SchemeId::CubicInvariant => "cubic-invariant",
            SchemeId::CubicAlternative => "cubic-alternative",
            SchemeId::PainleveInvariant => "painleve-invariant",
            SchemeId::PainleveNonInvariant => "painleve-noninvariant",
            SchemeId::LinearInvariant => "linear-invariant",
        }
    }

    /// Start-up rule used when the caller does not choose one.
    pub fn default_startup(self) -> Startup {
        match self {
            SchemeId::ExpInvariant | SchemeId::CubicInvariant | SchemeId::CubicAlternative => {
                Startup::Euler
            }
            SchemeId::PainleveInvariant => Startup::Exponential,
            SchemeId::PainleveNonInvariant | SchemeId::LinearInvariant => Startup::Taylor2,
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::config("scheme", format!("unknown scheme `{s}`")))
    }
}

/// How `u_1` is obtained from the initial data `u(x_0)`, `u_x(x_0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Startup {
    /// `u_1 = u_0 + h u_x`
    Euler,
    /// `u_1 = u_0 + h u_x + h²/2 Δ(x_0, u_0, u_x)` with the strong-form right-hand side.
    Taylor2,
    /// `u_1 = u_0 exp(h u_x / u_0)`, exact for `c₁ exp(c₂ x)`.
    Exponential,
}

impl FromStr for Startup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euler" => Ok(Startup::Euler),
            "taylor2" => Ok(Startup::Taylor2),
            "exponential" => Ok(Startup::Exponential),
            _ => Err(Error::config("startup", format!("unknown start-up rule `{s}`"))),
        }
    }
}

// ---------------------------------------------------------------------------
// residuals

fn nonzero(u: [f64; 3]) -> Result<()> {
    match u.iter().position(|v| *v == 0.0) {
        Some(i) => Err(Error::SingularScheme(format!("u at offset {} is zero", i as i32 - 1))),
        None => Ok(()),
    }
}

/// `(Δx_k + Δx_{k-1}) u_xx - Δx_{k-1} exp(-u_x^{k-1}) - Δx_k exp(-u_x^k)`
pub fn residual_exp(jet: &DiscreteJet) -> f64 {
    let s = jet.stencil();
    s.span() * s.uxx - s.dx_left * (-s.ux_left).exp() - s.dx_right * (-s.ux_right).exp()
}

fn d_residual_exp(jet: &DiscreteJet) -> f64 {
    let s = jet.stencil();
    2.0 / s.dx_right + (-s.ux_right).exp()
}

/// Invariant scheme for `u_xx = u⁻³`.
pub fn residual_cubic_invariant(jet: &DiscreteJet) -> Result<f64> {
    nonzero(jet.u)?;
    let s = jet.stencil();
    let [x0, x1, x2] = jet.x;
    let [u0, u1, u2] = jet.u;
    let bracket = |x: f64| (x - s.x_bar) * s.ux_centered + s.u_bar;
    let (b0, b1, b2) = (bracket(x0), bracket(x1), bracket(x2));
    if [b0, b1, b2].iter().any(|b| b.abs() < 1e-14) {
        return Err(Error::SingularScheme("bracket (x - x̄)u_x + ū vanishes".into()));
    }
    Ok(-s.ux_right + s.ux_left
        + s.dx_left * b0 * b0 / (6.0 * u0.powi(3) * b1 * b1)
        + s.span() * b1 * b1 / (3.0 * u1.powi(3) * b2 * b0)
        + s.dx_right * b2 * b2 / (6.0 * u2.powi(3) * b1 * b1))
}

/// Alternative invariant scheme for `u_xx = u⁻³`.
pub fn residual_cubic_alt(jet: &DiscreteJet) -> Result<f64> {
    nonzero(jet.u)?;
    let s = jet.stencil();
    let [u0, u1, u2] = jet.u;
    Ok(s.ux_right - s.ux_left - s.dx_right / (2.0 * u1 * u1 * u2) - s.dx_left / (2.0 * u1 * u1 * u0))
}

fn d_residual_cubic_alt(jet: &DiscreteJet) -> f64 {
    let s = jet.stencil();
    let [_, u1, u2] = jet.u;
    1.0 / s.dx_right + s.dx_right / (2.0 * u1 * u1 * u2 * u2)
}

/// Plain finite element discretization of `u_xx = u_x²/u`.
pub fn residual_painleve_noninv(jet: &DiscreteJet) -> Result<f64> {
    require_positive(jet)?;
    let s = jet.stencil();
    let [u0, u1, u2] = jet.u;
    Ok(-2.0 * (s.ux_right - s.ux_left)
        + u0 / s.dx_left * (u0 / u1).ln()
        + u2 / s.dx_right * (u2 / u1).ln())
}

fn d_residual_painleve_noninv(jet: &DiscreteJet) -> f64 {
    let s = jet.stencil();
    let [_, u1, u2] = jet.u;
    ((u2 / u1).ln() - 1.0) / s.dx_right
}

/// Invariant scheme for `u_xx = u_x²/u`, written in the invariants `I_k`, `J_k`.
pub fn residual_painleve_inv(jet: &DiscreteJet) -> Result<f64> {
    let inv = painleve_invariants(jet)?;
    let s = jet.stencil();
    let (i, j) = (inv.i_k, inv.j_k);
    Ok(-2.0 * ((i - 1.0) / s.dx_right - (1.0 - j) / s.dx_left)
        + j * j.ln() / s.dx_left
        + i * i.ln() / s.dx_right)
}

fn d_residual_painleve_inv(jet: &DiscreteJet) -> Result<f64> {
    let inv = painleve_invariants(jet)?;
    let s = jet.stencil();
    let w = s.dx_left / (s.span() * jet.u[2]);
    let (di, dj) = (inv.i_k * w, inv.j_k * w);
    Ok(di * (inv.i_k.ln() - 1.0) / s.dx_right + dj * (inv.j_k.ln() - 1.0) / s.dx_left)
}

/// Coefficients of `u_xx + p(x) u_x + q(x) u = f(x)` with two independent
/// homogeneous solutions.
#[derive(Clone)]
pub struct LinearProblem {
    pub p: ScalarFn,
    pub q: ScalarFn,
    pub f: ScalarFn,
    pub basis: HomogeneousPair,
}

impl LinearProblem {
    pub fn new(
        p: impl Fn(f64) -> f64 + Send + Sync + 'static,
        q: impl Fn(f64) -> f64 + Send + Sync + 'static,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        basis: HomogeneousPair,
    ) -> Self {
        Self {
            p: Arc::new(p),
            q: Arc::new(q),
            f: Arc::new(f),
            basis,
        }
    }

    /// `u_xx - u = 0` with `α = eˣ`, `γ = e⁻ˣ`.
    pub fn helmholtz() -> Self {
        Self::new(|_| 0.0, |_| -1.0, |_| 0.0, HomogeneousPair::new(f64::exp, |x| (-x).exp()))
    }

    fn strong_rhs(&self, x: f64, u: f64, ux: f64) -> f64 {
        (self.f)(x) - (self.p)(x) * ux - (self.q)(x) * u
    }
}

impl fmt::Debug for LinearProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LinearProblem").finish_non_exhaustive()
    }
}

/// `∫₀¹ a b c` for three linear functions given by their end values.
fn triple_product(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    let [a0, a1] = a;
    let [b0, b1] = b;
    let [c0, c1] = c;
    (3.0 * a0 * b0 * c0
        + a0 * b0 * c1
        + a0 * b1 * c0
        + a1 * b0 * c0
        + a0 * b1 * c1
        + a1 * b0 * c1
        + a1 * b1 * c0
        + 3.0 * a1 * b1 * c1)
        / 12.0
}

/// `∫ [-w_x φ_k' + (p w_x + q w) φ_k]` for piecewise-linear `w` and nodal
/// interpolants of `p`, `q` on the stencil.
fn linear_operator(x: [f64; 3], w: [f64; 3], p: [f64; 3], q: [f64; 3]) -> f64 {
    let dl = x[1] - x[0];
    let dr = x[2] - x[1];
    let sl = (w[1] - w[0]) / dl;
    let sr = (w[2] - w[1]) / dr;
    let left = -sl
        + sl * dl * (p[0] / 6.0 + p[1] / 3.0)
        + dl * triple_product([q[0], q[1]], [w[0], w[1]], [0.0, 1.0]);
    let right = sr
        + sr * dr * (p[1] / 3.0 + p[2] / 6.0)
        + dr * triple_product([q[1], q[2]], [w[1], w[2]], [1.0, 0.0]);
    left + right
}

fn load(x: [f64; 3], f: [f64; 3]) -> f64 {
    let dl = x[1] - x[0];
    let dr = x[2] - x[1];
    dl * (f[0] / 6.0 + f[1] / 3.0) + dr * (f[1] / 3.0 + f[2] / 6.0)
}

/// Plain Galerkin weak form of the linear ODE at node `k`.
pub fn residual_linear_weak_form(jet: &DiscreteJet, problem: &LinearProblem) -> f64 {
    let x = jet.x;
    linear_operator(x, jet.u, x.map(&*problem.p), x.map(&*problem.q)) - load(x, x.map(&*problem.f))
}

/// Weak form invariantized under `u ↦ u + ε₁α + ε₂γ`.
pub fn residual_linear_invariant(jet: &DiscreteJet, problem: &LinearProblem) -> Result<f64> {
    let frame = frame_superposition(jet, &problem.basis)?;
    let x = jet.x;
    let p = x.map(&*problem.p);
    let q = x.map(&*problem.q);
    let alpha = x.map(&*problem.basis.alpha);
    let gamma = x.map(&*problem.basis.gamma);
    Ok(linear_operator(x, jet.u, p, q) - load(x, x.map(&*problem.f))
        + frame.eps1 * linear_operator(x, alpha, p, q)
        + frame.eps2 * linear_operator(x, gamma, p, q))
}

// ---------------------------------------------------------------------------
// scheme dispatch

/// A concrete scheme: the identifier plus any problem data it needs.
#[derive(Debug, Clone)]
pub enum Scheme {
    ExpInvariant,
    CubicInvariant,
    CubicAlternative,
    PainleveInvariant,
    PainleveNonInvariant,
    LinearInvariant(LinearProblem),
}

impl Scheme {
    /// Scheme for `id`; `LinearInvariant` gets the `u_xx = u` problem.
    pub fn from_id(id: SchemeId) -> Self {
        match id {
            SchemeId::ExpInvariant => Scheme::ExpInvariant,
            SchemeId::CubicInvariant => Scheme::CubicInvariant,
            SchemeId::CubicAlternative => Scheme::CubicAlternative,
            SchemeId::PainleveInvariant => Scheme::PainleveInvariant,
            SchemeId::PainleveNonInvariant => Scheme::PainleveNonInvariant,
            SchemeId::LinearInvariant => Scheme::LinearInvariant(LinearProblem::helmholtz()),
        }
    }

    pub fn id(&self) -> SchemeId {
        match self {
            Scheme::ExpInvariant => SchemeId::ExpInvariant,
            Scheme::CubicInvariant => SchemeId::CubicInvariant,
            Scheme::CubicAlternative => SchemeId::CubicAlternative,
            Scheme::PainleveInvariant => SchemeId::PainleveInvariant,
            Scheme::PainleveNonInvariant => SchemeId::PainleveNonInvariant,
            Scheme::LinearInvariant(_) => SchemeId::LinearInvariant,
        }
    }

    pub fn residual(&self, jet: &DiscreteJet) -> Result<f64> {
        match self {
            Scheme::ExpInvariant => Ok(residual_exp(jet)),
            Scheme::CubicInvariant => residual_cubic_invariant(jet),
            Scheme::CubicAlternative => residual_cubic_alt(jet),
            Scheme::PainleveInvariant => residual_painleve_inv(jet),
            Scheme::PainleveNonInvariant => residual_painleve_noninv(jet),
            Scheme::LinearInvariant(problem) => residual_linear_invariant(jet, problem),
        }
    }

    /// Derivative of the residual with respect to `u_{k+1}`.
    pub fn d_residual_d_next(&self, jet: &DiscreteJet) -> Result<f64> {
        match self {
            Scheme::ExpInvariant => Ok(d_residual_exp(jet)),
            Scheme::CubicAlternative => {
                nonzero(jet.u)?;
                Ok(d_residual_cubic_alt(jet))
            }
            Scheme::PainleveInvariant => d_residual_painleve_inv(jet),
            Scheme::PainleveNonInvariant => {
                require_positive(jet)?;
                Ok(d_residual_painleve_noninv(jet))
            }
            Scheme::CubicInvariant | Scheme::LinearInvariant(_) => {
                central_difference(|v| self.residual(&jet.with_next(v)), jet.u[2])
            }
        }
    }

    /// Right-hand side `Δ` of the ODE written as `u_xx = Δ(x, u, u_x)`.
    pub fn strong_rhs(&self, x: f64, u: f64, ux: f64) -> f64 {
        match self {
            Scheme::ExpInvariant => (-ux).exp(),
            Scheme::CubicInvariant | Scheme::CubicAlternative => u.powi(-3),
            Scheme::PainleveInvariant | Scheme::PainleveNonInvariant => ux * ux / u,
            Scheme::LinearInvariant(problem) => problem.strong_rhs(x, u, ux),
        }
    }

    /// Solve `residual = 0` for `u_{k+1}` with `u_{k-1}`, `u_k` fixed.
    pub fn solve_next(&self, jet: &DiscreteJet, guess: f64, cfg: NewtonConfig) -> Result<f64> {
        let root = newton_scalar(
            |v| self.residual(&jet.with_next(v)),
            |v| self.d_residual_d_next(&jet.with_next(v)),
            guess,
            cfg,
        )?;
        Ok(root.root)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct MarchOptions {
    /// `None` uses the scheme's default start-up.
    pub startup: Option<Startup>,
    pub newton: NewtonConfig,
}

/// First step from the initial data.
pub fn startup_value(scheme: &Scheme, rule: Startup, x0: f64, h: f64, u0: f64, ux0: f64) -> Result<f64> {
    match rule {
        Startup::Euler => Ok(u0 + h * ux0),
        Startup::Taylor2 => Ok(u0 + h * ux0 + 0.5 * h * h * scheme.strong_rhs(x0, u0, ux0)),
        Startup::Exponential => {
            if !(u0 > 0.0) {
                return Err(Error::NonPositive { value: u0, offset: -1 });
            }
            Ok(u0 * (h * ux0 / u0).exp())
        }
    }
}

/// Integrate the scheme as an initial value problem from the left end of
/// `mesh`, one Newton solve per node. Returns `u` at every node.
pub fn march_ivp(scheme: &Scheme, mesh: &Mesh, u0: f64, ux0: f64, opts: MarchOptions) -> Result<Vec<f64>> {
    if !(u0.is_finite() && ux0.is_finite()) {
        return Err(Error::InvalidArgument(format!("initial data ({u0}, {ux0}) not finite")));
    }
    let x = mesh.nodes();
    let rule = opts.startup.unwrap_or_else(|| scheme.id().default_startup());
    let mut u = Vec::with_capacity(x.len());
    u.push(u0);
    let u1 = startup_value(scheme, rule, x[0], x[1] - x[0], u0, ux0)
        .map_err(|e| Error::March { index: 1, source: Box::new(e) })?;
    u.push(u1);
    for k in 1..x.len() - 1 {
        let guess = 2.0 * u[k] - u[k - 1];
        let next = DiscreteJet::new(k as i64, [x[k - 1], x[k], x[k + 1]], [u[k - 1], u[k], guess])
            .and_then(|jet| scheme.solve_next(&jet, guess, opts.newton))
            .map_err(|e| Error::March { index: k + 1, source: Box::new(e) })?;
        u.push(next);
    }
    Ok(u)
}
