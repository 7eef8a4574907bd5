//! Experiment registry: exact solutions, error metrics, convergence studies,
//! invariance audits and configurable Burgers runs.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::burgers::{
    assemble, simulate, transform_rhs, transform_state, AssemblyContext, Boundary, BoundaryNodes,
    BurgersScheme, BurgersState, Dirichlet, FieldFn, MeshMotion, SimulationConfig, Trajectory,
    TravelingWave,
};
use crate::error::{Error, Result};
use crate::group::{sampling, BurgersElement, PlaneAction};
use crate::mesh::{build_uniform_mesh, DiscreteJet};
use crate::ode::{march_ivp, LinearProblem, MarchOptions, Scheme, SchemeId, Startup};
use crate::solvers::{ConvergenceRow, ConvergenceTable, NewtonConfig};

/// One entry per worked example.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProblemId {
    #[serde(rename = "exp")]
    ExpOde,
    #[serde(rename = "cubic")]
    CubicOde,
    #[serde(rename = "painleve")]
    PainleveOde,
    #[serde(rename = "linear")]
    LinearOde,
    #[serde(rename = "burgers")]
    Burgers,
}

impl ProblemId {
    pub const ALL: [ProblemId; 5] = [
        ProblemId::ExpOde,
        ProblemId::CubicOde,
        ProblemId::PainleveOde,
        ProblemId::LinearOde,
        ProblemId::Burgers,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProblemId::ExpOde => "exp",
            ProblemId::CubicOde => "cubic",
            ProblemId::PainleveOde => "painleve",
            ProblemId::LinearOde => "linear",
            ProblemId::Burgers => "burgers",
        }
    }

    /// Schemes that discretize this problem.
    pub fn schemes(self) -> &'static [SchemeId] {
        match self {
            ProblemId::ExpOde => &[SchemeId::ExpInvariant],
            ProblemId::CubicOde => &[SchemeId::CubicInvariant, SchemeId::CubicAlternative],
            ProblemId::PainleveOde => &[SchemeId::PainleveInvariant, SchemeId::PainleveNonInvariant],
            ProblemId::LinearOde => &[SchemeId::LinearInvariant],
            ProblemId::Burgers => &[],
        }
    }

    /// Interval and initial data `(u(a), u_x(a))` used by default.
    pub fn default_ivp(self) -> ((f64, f64), (f64, f64)) {
        match self {
            ProblemId::PainleveOde => ((0.0, 1.0), (1.0, 1.0)),
            _ => ((0.0, 1.0), (1.0, 0.0)),
        }
    }

    pub fn check_scheme(self, scheme: SchemeId) -> Result<()> {
        if self.schemes().contains(&scheme) {
            Ok(())
        } else {
            Err(Error::config(
                "scheme",
                format!("scheme `{scheme}` does not discretize problem `{}`", self.name()),
            ))
        }
    }

    /// `Δ` in `u_xx = Δ(x, u, u_x)`.
    fn ode_rhs(self, x: f64, u: f64, ux: f64) -> Result<f64> {
        let canonical = match self {
            ProblemId::ExpOde => SchemeId::ExpInvariant,
            ProblemId::CubicOde => SchemeId::CubicInvariant,
            ProblemId::PainleveOde => SchemeId::PainleveInvariant,
            ProblemId::LinearOde => SchemeId::LinearInvariant,
            ProblemId::Burgers => {
                return Err(Error::InvalidArgument("Burgers is not an ODE problem".into()))
            }
        };
        Ok(Scheme::from_id(canonical).strong_rhs(x, u, ux))
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProblemId::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::config("problem", format!("unknown problem `{s}`")))
    }
}

/// Closed-form solution of a registered problem.
#[derive(Clone)]
pub struct ExactSolution {
    pub problem: ProblemId,
    pub params: Vec<(&'static str, f64)>,
    eval: FieldFn,
}

impl fmt::Debug for ExactSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExactSolution")
            .field("problem", &self.problem)
            .field("params", &self.params)
            .finish_non_exhaustive()
    }
}

impl ExactSolution {
    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x, 0.0)
    }

    pub fn eval_xt(&self, x: f64, t: f64) -> f64 {
        (self.eval)(x, t)
    }

    pub fn field(&self) -> FieldFn {
        self.eval.clone()
    }

    /// Solution of the ODE `problem` with `u(a) = u0`, `u_x(a) = ux0`.
    pub fn for_ivp(problem: ProblemId, a: f64, u0: f64, ux0: f64) -> Result<Self> {
        let (params, eval): (Vec<(&'static str, f64)>, FieldFn) = match problem {
            ProblemId::ExpOde => {
                let c1 = ux0.exp() - a;
                let c2 = u0 - ux0 * ux0.exp() + a;
                (vec![("c1", c1), ("c2", c2)], Arc::new(move |x, _| (x + c1) * (x + c1).ln() - x + c2))
            }
            ProblemId::CubicOde => {
                if u0 == 0.0 {
                    return Err(Error::InvalidArgument("u0 must be nonzero for u_xx = u^-3".into()));
                }
                let c1 = (1.0 + u0 * u0 * ux0 * ux0) / (u0 * u0);
                let c2 = u0 * ux0 / c1 - a;
                let sign = u0.signum();
                (
                    vec![("c1", c1), ("c2", c2)],
                    Arc::new(move |x, _| sign * (1.0 / c1 + c1 * (x + c2) * (x + c2)).sqrt()),
                )
            }
            ProblemId::PainleveOde => {
                if u0 == 0.0 {
                    return Err(Error::InvalidArgument("u0 must be nonzero for u_xx = u_x^2/u".into()));
                }
                let c2 = ux0 / u0;
                let c1 = u0 * (-c2 * a).exp();
                (vec![("c1", c1), ("c2", c2)], Arc::new(move |x, _| c1 * (c2 * x).exp()))
            }
            ProblemId::LinearOde => {
                let c1 = 0.5 * (u0 + ux0) * (-a).exp();
                let c2 = 0.5 * (u0 - ux0) * a.exp();
                (vec![("c1", c1), ("c2", c2)], Arc::new(move |x, _| c1 * x.exp() + c2 * (-x).exp()))
            }
            ProblemId::Burgers => {
                return Err(Error::InvalidArgument("use ExactSolution::traveling_wave for Burgers".into()))
            }
        };
        Ok(Self { problem, params, eval })
    }

    pub fn traveling_wave(wave: TravelingWave) -> Self {
        Self {
            problem: ProblemId::Burgers,
            params: vec![("nu", wave.nu), ("a", wave.a), ("c", wave.c)],
            eval: wave.as_field(),
        }
    }

    /// Substitute into the strong form at 20 points of `[a, b]` (and
    /// `t ∈ [0, 1]` for Burgers) using central differences. The residual
    /// must stay below `1e-6` times the size of the largest term (at least 1).
    pub fn self_check(&self, a: f64, b: f64) -> Result<()> {
        const TOL: f64 = 1e-6;
        let h = 1e-4;
        for i in 0..20 {
            let x = a + (b - a) * (i as f64 + 0.5) / 20.0;
            let t = i as f64 / 19.0;
            let f = |x: f64, t: f64| self.eval_xt(x, t);
            let u = f(x, t);
            let ux = (f(x + h, t) - f(x - h, t)) / (2.0 * h);
            let uxx = (f(x + h, t) - 2.0 * u + f(x - h, t)) / (h * h);
            let (residual, scale) = match self.problem {
                ProblemId::Burgers => {
                    let nu = self.params.iter().find(|(k, _)| *k == "nu").map(|p| p.1).unwrap_or(0.0);
                    let ut = (f(x, t + h) - f(x, t - h)) / (2.0 * h);
                    (ut + u * ux - nu * uxx, ut.abs() + (u * ux).abs() + (nu * uxx).abs())
                }
                p => {
                    let rhs = p.ode_rhs(x, u, ux)?;
                    (uxx - rhs, uxx.abs() + rhs.abs())
                }
            };
            if !(residual.abs() <= TOL * scale.max(1.0)) {
                return Err(Error::ExactSolutionCheck {
                    name: self.problem.name().to_string(),
                    residual,
                    x,
                });
            }
        }
        Ok(())
    }
}

/// `max|numeric - exact| / max|exact|`.
pub fn relative_linf_error(numeric: &[f64], exact: &[f64]) -> Result<f64> {
    if numeric.len() != exact.len() {
        return Err(Error::Dimension(format!("{} vs {} entries", numeric.len(), exact.len())));
    }
    let norm = exact.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if !(norm > 0.0) {
        return Err(Error::InvalidArgument("exact solution has zero norm".into()));
    }
    let diff = numeric.iter().zip(exact).fold(0.0f64, |m, (n, e)| m.max((n - e).abs()));
    Ok(diff / norm)
}

/// Per-node relative error `|numeric - exact| / |exact|`.
pub fn pointwise_relative_error(numeric: &[f64], exact: &[f64]) -> Vec<f64> {
    numeric.iter().zip(exact).map(|(n, e)| (n - e).abs() / e.abs()).collect()
}

pub fn default_ladder() -> Vec<usize> {
    (0..8).map(|k| 10usize << k).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IvpSpec {
    pub interval: (f64, f64),
    pub u0: f64,
    pub ux0: f64,
    pub startup: Option<Startup>,
}

impl IvpSpec {
    pub fn default_for(problem: ProblemId) -> Self {
        let (interval, (u0, ux0)) = problem.default_ivp();
        Self { interval, u0, ux0, startup: None }
    }
}

/// Numerical and exact solution of one march.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeSolution {
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    pub exact: Vec<f64>,
}

impl OdeSolution {
    pub fn relative_error(&self) -> Result<f64> {
        relative_linf_error(&self.u, &self.exact)
    }

    /// CSV with header `k,x,u,exact`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "k,x,u,exact")?;
        for (k, ((x, u), e)) in self.x.iter().zip(&self.u).zip(&self.exact).enumerate() {
            writeln!(w, "{k},{x:.16e},{u:.16e},{e:.16e}")?;
        }
        Ok(())
    }
}

/// March `scheme` on a uniform mesh with `n` elements.
pub fn solve_ode(problem: ProblemId, scheme: SchemeId, n: usize, ivp: &IvpSpec) -> Result<OdeSolution> {
    problem.check_scheme(scheme)?;
    let (a, b) = ivp.interval;
    let exact = ExactSolution::for_ivp(problem, a, ivp.u0, ivp.ux0)?;
    exact.self_check(a, b)?;
    let mesh = build_uniform_mesh(a, b, n)?;
    let opts = MarchOptions { startup: ivp.startup, newton: NewtonConfig::default() };
    let u = march_ivp(&Scheme::from_id(scheme), &mesh, ivp.u0, ivp.ux0, opts)?;
    let x = mesh.nodes().to_vec();
    let exact = x.iter().map(|&x| exact.eval(x)).collect();
    Ok(OdeSolution { x, u, exact })
}

/// Relative l∞ error on every resolution of `n_list` and the fitted order.
/// Resolutions run in parallel; rows come back sorted by mesh width.
pub fn run_convergence(problem: ProblemId, scheme: SchemeId, n_list: &[usize], ivp: &IvpSpec) -> Result<ConvergenceTable> {
    problem.check_scheme(scheme)?;
    if n_list.len() < 3 {
        return Err(Error::config("n_list", "need at least 3 resolutions"));
    }
    let (a, b) = ivp.interval;
    let rows = n_list
        .par_iter()
        .map(|&n| {
            let sol = solve_ode(problem, scheme, n, ivp).map_err(|e| Error::Resolution { n, source: Box::new(e) })?;
            Ok(ConvergenceRow {
                n_elements: n,
                h: (b - a) / n as f64,
                rel_linf_error: sol.relative_error()?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ConvergenceTable::from_rows(rows)
}

// ---------------------------------------------------------------------------
// invariance audits

/// A sample on which the scheme is demonstrably not invariant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub sample: usize,
    pub drift: f64,
    pub jet_x: Vec<f64>,
    pub jet_u: Vec<f64>,
    pub group_params: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub problem: ProblemId,
    pub scheme: String,
    pub seed: u64,
    pub samples: usize,
    /// Samples where no base point or no admissible group element was found.
    pub skipped: usize,
    pub max_drift: f64,
    /// First sample whose drift exceeds [`WITNESS_THRESHOLD`].
    pub witness: Option<Witness>,
}

/// Drift above which a sample counts as a non-invariance witness.
pub const WITNESS_THRESHOLD: f64 = 1e-6;

fn random_stencil(rng: &mut ChaCha8Rng) -> ([f64; 3], [f64; 2], f64) {
    let x0 = rng.random_range(-0.5..0.5);
    let x1 = x0 + rng.random_range(0.1..0.5);
    let x2 = x1 + rng.random_range(0.1..0.5);
    let u = [rng.random_range(0.5..2.0), rng.random_range(0.5..2.0)];
    (
        [x0, x1, x2],
        u,
        rng.random_range(0.5..2.0),
    )
}

enum GroupSample {
    Exp(crate::group::ExpGroupElement),
    Sl2(crate::group::Sl2Element),
    Painleve(crate::group::PainleveElement),
    Superposition(crate::group::SuperpositionElement),
}

impl GroupSample {
    fn act(&self, z: &DiscreteJet) -> Result<(DiscreteJet, Vec<f64>)> {
        match self {
            GroupSample::Exp(g) => Ok((g.act_jet(z)?, vec![g.eps, g.a, g.b])),
            GroupSample::Sl2(g) => Ok((g.act_jet(z)?, g.params().to_vec())),
            GroupSample::Painleve(g) => Ok((g.act_jet(z)?, vec![g.a, g.b])),
            GroupSample::Superposition(g) => Ok((g.act_jet(z)?, vec![g.eps1, g.eps2])),
        }
    }
}

/// Zero-set equivariance audit: build `z` with `residual(z) = 0` by one
/// Newton solve from random data, act with a random near-identity group
/// element and record `|residual(g·z)|`.
pub fn run_invariance_audit(problem: ProblemId, scheme: SchemeId, seed: u64, n_samples: usize) -> Result<InvarianceReport> {
    problem.check_scheme(scheme)?;
    let s = Scheme::from_id(scheme);
    let basis = match &s {
        Scheme::LinearInvariant(LinearProblem { basis, .. }) => Some(basis.clone()),
        _ => None,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = InvarianceReport {
        problem,
        scheme: scheme.name().to_string(),
        seed,
        samples: n_samples,
        skipped: 0,
        max_drift: 0.0,
        witness: None,
    };
    for sample in 0..n_samples {
        let (x, u, guess) = random_stencil(&mut rng);
        let g = match problem {
            ProblemId::ExpOde => GroupSample::Exp(sampling::exp_group(&mut rng)),
            ProblemId::CubicOde => GroupSample::Sl2(sampling::sl2(&mut rng, x[2].abs().max(x[0].abs()))),
            ProblemId::PainleveOde => GroupSample::Painleve(sampling::painleve(&mut rng)),
            ProblemId::LinearOde => {
                GroupSample::Superposition(sampling::superposition(&mut rng, basis.as_ref().expect("linear scheme")))
            }
            ProblemId::Burgers => unreachable!("no ODE scheme for Burgers"),
        };
        let base = DiscreteJet::new(1, x, [u[0], u[1], guess])
            .and_then(|z| s.solve_next(&z, guess, NewtonConfig::default()).map(|r| z.with_next(r)));
        let Ok(z) = base else {
            report.skipped += 1;
            continue;
        };
        let Ok((gz, params)) = g.act(&z) else {
            report.skipped += 1;
            continue;
        };
        let drift = match s.residual(&gz) {
            Ok(r) => r.abs(),
            Err(_) => f64::INFINITY,
        };
        report.max_drift = report.max_drift.max(drift);
        if drift > WITNESS_THRESHOLD && report.witness.is_none() {
            report.witness = Some(Witness {
                sample,
                drift,
                jet_x: z.x.to_vec(),
                jet_u: z.u.to_vec(),
                group_params: params,
            });
        }
    }
    Ok(report)
}

/// Random Burgers state on a perturbed mesh of `n` nodes.
pub fn random_burgers_state<R: Rng + ?Sized>(rng: &mut R, n: usize) -> BurgersState {
    let mut x = vec![rng.random_range(-1.0..0.0)];
    for _ in 1..n {
        let last = *x.last().expect("nonempty");
        x.push(last + rng.random_range(0.05..0.3));
    }
    let u = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    BurgersState {
        t: rng.random_range(0.0..1.0),
        nodes: x,
        values: u,
        nu: rng.random_range(0.01..0.5),
    }
}

/// Galilean equivariance of a Burgers assembler: compare `A(g·s)` with the
/// transformed rates `g·A(s)` for random states and boosts. For the
/// r-adaptive scheme the mesh follows the Lagrangian law.
pub fn run_burgers_equivariance_audit(scheme: BurgersScheme, seed: u64, n_samples: usize) -> Result<InvarianceReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let motion = match scheme {
        BurgersScheme::GalerkinFixed => MeshMotion::Fixed,
        _ => MeshMotion::Lagrangian,
    };
    let ctx = AssemblyContext::default();
    let mut report = InvarianceReport {
        problem: ProblemId::Burgers,
        scheme: scheme.name().to_string(),
        seed,
        samples: n_samples,
        skipped: 0,
        max_drift: 0.0,
        witness: None,
    };
    for sample in 0..n_samples {
        let state = random_burgers_state(&mut rng, 12);
        let g = BurgersElement::boost(rng.random_range(-1.0..1.0));
        let gs = transform_state(&g, &state)?;
        let lhs = assemble(scheme, &gs, &motion, &ctx)?;
        let rhs = transform_rhs(&g, &assemble(scheme, &state, &motion, &ctx)?);
        let drift = lhs.du_dt.iter().zip(&rhs.du_dt).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        report.max_drift = report.max_drift.max(drift);
        if drift > WITNESS_THRESHOLD && report.witness.is_none() {
            report.witness = Some(Witness {
                sample,
                drift,
                jet_x: state.nodes.clone(),
                jet_u: state.values.clone(),
                group_params: vec![g.lambda(), g.a, g.b, g.v],
            });
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Painlevé error series

#[derive(Debug, Clone, PartialEq)]
pub struct PainleveSeries {
    pub x: Vec<f64>,
    pub err_invariant: Vec<f64>,
    pub err_noninvariant: Vec<f64>,
}

impl PainleveSeries {
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "x,err_invariant,err_noninvariant")?;
        for i in 0..self.x.len() {
            writeln!(w, "{:.16e},{:.16e},{:.16e}", self.x[i], self.err_invariant[i], self.err_noninvariant[i])?;
        }
        Ok(())
    }
}

/// Pointwise relative errors of both Painlevé schemes on `[0, 1]` with
/// `Δx = 0.01`, `u(0) = 1`, `u_x(0) = 1`.
pub fn run_painleve_error_series() -> Result<PainleveSeries> {
    let ivp = IvpSpec::default_for(ProblemId::PainleveOde);
    let inv = solve_ode(ProblemId::PainleveOde, SchemeId::PainleveInvariant, 100, &ivp)?;
    let non = solve_ode(ProblemId::PainleveOde, SchemeId::PainleveNonInvariant, 100, &ivp)?;
    Ok(PainleveSeries {
        err_invariant: pointwise_relative_error(&inv.u, &inv.exact),
        err_noninvariant: pointwise_relative_error(&non.u, &non.exact),
        x: inv.x,
    })
}

// ---------------------------------------------------------------------------
// Burgers runs

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialCondition {
    Constant { value: f64 },
    TravelingWave { a: f64, c: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryKind {
    DirichletExact,
    DirichletConst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MotionKind {
    Fixed,
    Lagrangian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryNodeKind {
    #[default]
    Pinned,
    Moving,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BurgersConfig {
    pub nu: f64,
    pub interval: [f64; 2],
    /// Number of elements.
    pub n: usize,
    pub dt: f64,
    pub t_end: f64,
    pub scheme: String,
    pub motion: MotionKind,
    pub ic: InitialCondition,
    pub boundary: BoundaryKind,
    pub snapshot_stride: usize,
    #[serde(default)]
    pub boundary_nodes: BoundaryNodeKind,
    /// Galilean boost for an end-to-end equivariance comparison.
    #[serde(default)]
    pub boost: Option<f64>,
    /// Distance from the end nodes excluded from error and drift measurements.
    #[serde(default)]
    pub interior_margin: f64,
}

impl BurgersConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::config("config", e.to_string()))
    }

    pub fn scheme(&self) -> Result<BurgersScheme> {
        self.scheme.parse()
    }

    fn validate(&self) -> Result<()> {
        if !(self.nu >= 0.0) || !self.nu.is_finite() {
            return Err(Error::config("nu", format!("must be >= 0, got {}", self.nu)));
        }
        let [a, b] = self.interval;
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::config("interval", format!("[{a}, {b}] is empty")));
        }
        if self.n < 2 {
            return Err(Error::config("n", format!("need at least 2 elements, got {}", self.n)));
        }
        if !(self.interior_margin >= 0.0) {
            return Err(Error::config("interior_margin", "must be >= 0"));
        }
        if let InitialCondition::TravelingWave { a, .. } = self.ic {
            if !(self.nu > 0.0) {
                return Err(Error::config("nu", "traveling wave needs nu > 0"));
            }
            if !a.is_finite() {
                return Err(Error::config("ic", "traveling wave amplitude must be finite"));
            }
        }
        Ok(())
    }

    fn exact(&self) -> FieldFn {
        match self.ic {
            InitialCondition::Constant { value } => Arc::new(move |_, _| value),
            InitialCondition::TravelingWave { a, c } => TravelingWave { nu: self.nu, a, c }.as_field(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BurgersSummary {
    pub scheme: String,
    pub motion: MotionKind,
    pub n: usize,
    pub steps: usize,
    pub t_end: f64,
    /// Interior l∞ error against the exact solution at `t_end`.
    pub final_interior_linf_error: Option<f64>,
    pub equivariance_drift: Option<f64>,
    pub min_spacing_final: f64,
}

#[derive(Debug, Clone)]
pub struct BurgersRun {
    pub trajectory: Trajectory,
    pub summary: BurgersSummary,
}

fn simulation_for(cfg: &BurgersConfig, exact: FieldFn, initial: &BurgersState) -> Result<SimulationConfig> {
    let scheme = cfg.scheme()?;
    let motion = match cfg.motion {
        MotionKind::Fixed => MeshMotion::Fixed,
        MotionKind::Lagrangian => MeshMotion::Lagrangian,
    };
    let n = initial.len();
    let data = match cfg.boundary {
        BoundaryKind::DirichletExact => Dirichlet::Function(exact),
        BoundaryKind::DirichletConst => Dirichlet::Constant { left: initial.values[0], right: initial.values[n - 1] },
    };
    let nodes = match cfg.boundary_nodes {
        BoundaryNodeKind::Pinned => BoundaryNodes::Pinned,
        BoundaryNodeKind::Moving => BoundaryNodes::Moving,
    };
    Ok(SimulationConfig {
        scheme,
        motion,
        dt: cfg.dt,
        t_end: cfg.t_end,
        boundary: Boundary { data, nodes },
        snapshot_stride: cfg.snapshot_stride,
    })
}

fn interior(state: &BurgersState, margin: f64) -> impl Iterator<Item = usize> + '_ {
    let n = state.len();
    let (lo, hi) = (state.nodes[0] + margin, state.nodes[n - 1] - margin);
    (1..n - 1).filter(move |&l| state.nodes[l] >= lo && state.nodes[l] <= hi)
}

/// Interior l∞ error of `state` against `exact(x, t)`.
pub fn interior_linf_error(state: &BurgersState, exact: &dyn Fn(f64, f64) -> f64, margin: f64) -> f64 {
    interior(state, margin)
        .map(|l| (state.values[l] - exact(state.nodes[l], state.t)).abs())
        .fold(0.0, f64::max)
}

/// Piecewise-linear interpolant of a state at `x` (inside its node range).
fn interpolate(state: &BurgersState, x: f64) -> Option<f64> {
    let nodes = &state.nodes;
    if x < nodes[0] || x > nodes[nodes.len() - 1] {
        return None;
    }
    let i = nodes.partition_point(|&v| v <= x).clamp(1, nodes.len() - 1);
    let (x0, x1) = (nodes[i - 1], nodes[i]);
    let w = (x - x0) / (x1 - x0);
    Some(state.values[i - 1] * (1.0 - w) + state.values[i] * w)
}

/// Compare a run with its Galilean-boosted twin at the final time: every
/// interior node of the boosted run, shifted back by `v t`, is checked
/// against the interpolated base run.
pub fn galilean_drift(base: &BurgersState, boosted: &BurgersState, v: f64, margin: f64) -> f64 {
    let shift = v * (boosted.t - 0.0);
    interior(boosted, margin)
        .filter_map(|l| {
            let y = boosted.nodes[l] - shift;
            if y < base.nodes[0] + margin || y > base.nodes[base.len() - 1] - margin {
                return None;
            }
            interpolate(base, y).map(|u| (boosted.values[l] - v - u).abs())
        })
        .fold(0.0, f64::max)
}

/// Run a configured Burgers experiment from `t = 0`.
pub fn run_burgers(cfg: &BurgersConfig) -> Result<BurgersRun> {
    cfg.validate()?;
    let exact = cfg.exact();
    if let InitialCondition::TravelingWave { a, c } = cfg.ic {
        let sol = ExactSolution::traveling_wave(TravelingWave { nu: cfg.nu, a, c });
        sol.self_check(cfg.interval[0], cfg.interval[1])?;
    }
    let mesh = build_uniform_mesh(cfg.interval[0], cfg.interval[1], cfg.n)?;
    let initial = BurgersState::sample(&mesh, 0.0, cfg.nu, |x| exact(x, 0.0))?;
    let sim = simulation_for(cfg, exact.clone(), &initial)?;
    let trajectory = simulate(&initial, &sim)?;
    let last = trajectory.last();

    let equivariance_drift = match cfg.boost {
        None => None,
        Some(v) => {
            let g = BurgersElement::boost(v);
            let boosted_exact: FieldFn = {
                let e = exact.clone();
                Arc::new(move |x, t| e(x - v * t, t) + v)
            };
            let boosted_initial = transform_state(&g, &initial)?;
            let mut boosted_sim = simulation_for(cfg, boosted_exact, &boosted_initial)?;
            boosted_sim.snapshot_stride = usize::MAX;
            let twin = simulate(&boosted_initial, &boosted_sim)?;
            Some(galilean_drift(last, twin.last(), v, cfg.interior_margin))
        }
    };

    let summary = BurgersSummary {
        scheme: cfg.scheme.clone(),
        motion: cfg.motion,
        n: cfg.n,
        steps: trajectory.steps,
        t_end: last.t,
        final_interior_linf_error: Some(interior_linf_error(last, &*exact, cfg.interior_margin)),
        equivariance_drift,
        min_spacing_final: last.nodes.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min),
    };
    Ok(BurgersRun { trajectory, summary })
}
