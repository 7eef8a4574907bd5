//! Method-of-lines discretizations of viscous Burgers' equation
//! `u_t + u u_x = ν u_xx` on fixed and moving hat-function meshes, with
//! classical RK4 in time.
//!
//! Every assembler produces the nodal time derivatives of `u` and of the
//! node positions. Boundary nodes are Dirichlet nodes: their `du/dt` is
//! supplied by the caller (or by a [`Boundary`] during time stepping) and
//! the interior rows are solved as a tridiagonal system.

use std::fmt;
use std::io::{self, Write};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{BurgersElement, SpaceTimePoint};
use crate::mesh::Mesh;
use crate::solvers::{solve_tridiagonal, strictly_diagonally_dominant};

#[derive(Debug, Clone, PartialEq)]
pub struct BurgersState {
    pub t: f64,
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
    /// Viscosity. Zero is accepted for inviscid experiments.
    pub nu: f64,
}

impl BurgersState {
    pub fn new(t: f64, nodes: Vec<f64>, values: Vec<f64>, nu: f64) -> Result<Self> {
        let s = Self { t, nodes, values, nu };
        s.validate()?;
        Ok(s)
    }

    /// Sample `u(x)` on the nodes of `mesh`.
    pub fn sample(mesh: &Mesh, t: f64, nu: f64, u: impl Fn(f64) -> f64) -> Result<Self> {
        let nodes = mesh.nodes().to_vec();
        let values = nodes.iter().map(|&x| u(x)).collect();
        Self::new(t, nodes, values, nu)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes.len() != self.values.len() {
            return Err(Error::Dimension(format!(
                "{} nodes but {} values",
                self.nodes.len(),
                self.values.len()
            )));
        }
        if self.nodes.len() < 3 {
            return Err(Error::InvalidMesh(format!("need at least 3 nodes, got {}", self.nodes.len())));
        }
        if !(self.nu >= 0.0) || !self.nu.is_finite() {
            return Err(Error::InvalidArgument(format!("viscosity must be >= 0, got {}", self.nu)));
        }
        if self.nodes.iter().chain(&self.values).any(|v| !v.is_finite()) || !self.t.is_finite() {
            return Err(Error::InvalidArgument("non-finite state entry".into()));
        }
        check_ordering(&self.nodes)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

fn check_ordering(nodes: &[f64]) -> Result<()> {
    match nodes.windows(2).position(|w| !(w[0] < w[1])) {
        Some(index) => Err(Error::MeshTangling { index }),
        None => Ok(()),
    }
}

pub type VelocityFn = Arc<dyn Fn(&BurgersState) -> Vec<f64> + Send + Sync>;

/// Law for the node velocities `dx_ℓ/dt`.
#[derive(Clone)]
pub enum MeshMotion {
    Fixed,
    /// `dx_ℓ/dt = u_ℓ`
    Lagrangian,
    /// One velocity per node, computed from the current state.
    Prescribed(VelocityFn),
}

impl fmt::Debug for MeshMotion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeshMotion::Fixed => f.write_str("Fixed"),
            MeshMotion::Lagrangian => f.write_str("Lagrangian"),
            MeshMotion::Prescribed(_) => f.write_str("Prescribed(..)"),
        }
    }
}

impl MeshMotion {
    pub fn velocities(&self, state: &BurgersState) -> Result<Vec<f64>> {
        match self {
            MeshMotion::Fixed => Ok(vec![0.0; state.len()]),
            MeshMotion::Lagrangian => Ok(state.values.clone()),
            MeshMotion::Prescribed(f) => {
                let v = f(state);
                if v.len() != state.len() {
                    return Err(Error::Dimension(format!(
                        "prescribed motion returned {} velocities for {} nodes",
                        v.len(),
                        state.len()
                    )));
                }
                Ok(v)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SemiDiscreteRhs {
    pub du_dt: Vec<f64>,
    pub dx_dt: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BurgersScheme {
    /// Consistent-mass Galerkin on a fixed mesh.
    GalerkinFixed,
    /// Invariant scheme with nodes advected by `dx/dt = u`.
    InvariantLagrangian,
    /// Invariant moving-mesh scheme with an arbitrary mesh velocity.
    InvariantRAdaptive,
}

impl BurgersScheme {
    pub fn name(self) -> &'static str {
        match self {
            BurgersScheme::GalerkinFixed => "galerkin",
            BurgersScheme::InvariantLagrangian => "lagrangian",
            BurgersScheme::InvariantRAdaptive => "radaptive",
        }
    }
}

impl std::str::FromStr for BurgersScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "galerkin" => Ok(BurgersScheme::GalerkinFixed),
            "lagrangian" => Ok(BurgersScheme::InvariantLagrangian),
            "radaptive" => Ok(BurgersScheme::InvariantRAdaptive),
            _ => Err(Error::config("scheme", format!("unknown Burgers scheme `{s}`"))),
        }
    }
}

/// Interior rows `ℓ = 1..n-2` of an assembled scheme:
/// `lower·u̇_{ℓ-1} + diag·u̇_ℓ + upper·u̇_{ℓ+1} = forcing + mesh_coupling`.
#[derive(Debug, Clone, PartialEq)]
pub struct InteriorSystem {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
    pub forcing: Vec<f64>,
    /// Mesh-velocity terms moved to the right-hand side.
    pub mesh_coupling: Vec<f64>,
}

impl InteriorSystem {
    fn with_capacity(n: usize) -> Self {
        Self {
            lower: Vec::with_capacity(n),
            diag: Vec::with_capacity(n),
            upper: Vec::with_capacity(n),
            forcing: Vec::with_capacity(n),
            mesh_coupling: Vec::with_capacity(n),
        }
    }

    /// Solve for the interior `du/dt` given the boundary rates.
    pub fn solve(&self, boundary_du_dt: [f64; 2]) -> Result<Vec<f64>> {
        if let Some(row) = strictly_diagonally_dominant(&self.lower, &self.diag, &self.upper) {
            return Err(Error::NotDiagonallyDominant { row: row + 1 });
        }
        let mut rhs: Vec<f64> = self.forcing.iter().zip(&self.mesh_coupling).map(|(f, c)| f + c).collect();
        let last = rhs.len() - 1;
        rhs[0] -= self.lower[0] * boundary_du_dt[0];
        rhs[last] -= self.upper[last] * boundary_du_dt[1];
        solve_tridiagonal(&self.lower, &self.diag, &self.upper, &rhs)
    }
}

/// Stencil data at interior node `ℓ`.
struct Row {
    dl: f64,
    dr: f64,
    span: f64,
    um: f64,
    u: f64,
    up: f64,
}

impl Row {
    fn ux(&self) -> f64 {
        (self.up - self.um) / self.span
    }

    fn uxx(&self) -> f64 {
        2.0 / self.span * ((self.up - self.u) / self.dr - (self.u - self.um) / self.dl)
    }
}

fn rows(state: &BurgersState) -> impl Iterator<Item = Row> + '_ {
    let x = &state.nodes;
    let u = &state.values;
    (1..x.len() - 1).map(move |l| Row {
        dl: x[l] - x[l - 1],
        dr: x[l + 1] - x[l],
        span: x[l + 1] - x[l - 1],
        um: u[l - 1],
        u: u[l],
        up: u[l + 1],
    })
}

/// Fixed-mesh Galerkin rows, from exact element integration of the weak
/// form with the flux `-ν u_x + u²/2`.
pub fn galerkin_system(state: &BurgersState) -> InteriorSystem {
    let mut sys = InteriorSystem::with_capacity(state.len() - 2);
    for r in rows(state) {
        sys.lower.push(r.dl / 6.0);
        sys.diag.push((r.dl + r.dr) / 3.0);
        sys.upper.push(r.dr / 6.0);
        let viscous = state.nu * ((r.up - r.u) / r.dr - (r.u - r.um) / r.dl);
        let convective = ((r.um * r.um + r.um * r.u + r.u * r.u) - (r.u * r.u + r.u * r.up + r.up * r.up)) / 6.0;
        sys.forcing.push(viscous + convective);
        sys.mesh_coupling.push(0.0);
    }
    sys
}

fn invariant_mass(sys: &mut InteriorSystem, r: &Row) {
    sys.lower.push(r.dl / (3.0 * r.span));
    sys.diag.push(2.0 / 3.0);
    sys.upper.push(r.dr / (3.0 * r.span));
}

/// Invariant Lagrangian rows.
pub fn lagrangian_system(state: &BurgersState) -> InteriorSystem {
    let mut sys = InteriorSystem::with_capacity(state.len() - 2);
    for r in rows(state) {
        invariant_mass(&mut sys, &r);
        sys.forcing.push(state.nu * r.uxx() - (r.up - 2.0 * r.u + r.um) / 3.0 * r.ux());
        sys.mesh_coupling.push(0.0);
    }
    sys
}

/// Invariant moving-mesh rows for node velocities `dx_dt`.
pub fn radaptive_system(state: &BurgersState, dx_dt: &[f64]) -> Result<InteriorSystem> {
    if dx_dt.len() != state.len() {
        return Err(Error::Dimension(format!("{} velocities for {} nodes", dx_dt.len(), state.len())));
    }
    let mut sys = InteriorSystem::with_capacity(state.len() - 2);
    for (i, r) in rows(state).enumerate() {
        let (vm, v, vp) = (dx_dt[i], dx_dt[i + 1], dx_dt[i + 2]);
        invariant_mass(&mut sys, &r);
        sys.forcing.push(state.nu * r.uxx() - (r.up + r.u + r.um) / 3.0 * r.ux());
        sys.mesh_coupling.push(
            (r.u - r.um) / (3.0 * r.span) * vm + 2.0 / 3.0 * r.ux() * v + (r.up - r.u) / (3.0 * r.span) * vp,
        );
    }
    Ok(sys)
}

/// Boundary information an assembler needs but cannot compute itself.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AssemblyContext {
    /// `du/dt` at the first and last node.
    pub boundary_du_dt: [f64; 2],
    /// Hold the first and last node in place regardless of the motion law.
    pub pin_boundary_nodes: bool,
}

fn finish(sys: &InteriorSystem, boundary_du_dt: [f64; 2], dx_dt: Vec<f64>) -> Result<SemiDiscreteRhs> {
    let interior = sys.solve(boundary_du_dt)?;
    let mut du_dt = Vec::with_capacity(dx_dt.len());
    du_dt.push(boundary_du_dt[0]);
    du_dt.extend(interior);
    du_dt.push(boundary_du_dt[1]);
    Ok(SemiDiscreteRhs { du_dt, dx_dt })
}

/// Assemble `scheme` with an explicit motion law and boundary context.
///
/// `GalerkinFixed` ignores `motion` (its nodes never move) and
/// `InvariantLagrangian` always advects nodes with `u`.
pub fn assemble(
    scheme: BurgersScheme,
    state: &BurgersState,
    motion: &MeshMotion,
    ctx: &AssemblyContext,
) -> Result<SemiDiscreteRhs> {
    state.validate()?;
    let n = state.len();
    let pin = |mut v: Vec<f64>| {
        if ctx.pin_boundary_nodes {
            v[0] = 0.0;
            v[n - 1] = 0.0;
        }
        v
    };
    match scheme {
        BurgersScheme::GalerkinFixed => finish(&galerkin_system(state), ctx.boundary_du_dt, vec![0.0; n]),
        BurgersScheme::InvariantLagrangian => {
            finish(&lagrangian_system(state), ctx.boundary_du_dt, pin(state.values.clone()))
        }
        BurgersScheme::InvariantRAdaptive => {
            let dx_dt = pin(motion.velocities(state)?);
            finish(&radaptive_system(state, &dx_dt)?, ctx.boundary_du_dt, dx_dt)
        }
    }
}

pub fn assemble_galerkin_fixed(state: &BurgersState) -> Result<SemiDiscreteRhs> {
    assemble(BurgersScheme::GalerkinFixed, state, &MeshMotion::Fixed, &AssemblyContext::default())
}

pub fn assemble_invariant_lagrangian(state: &BurgersState) -> Result<SemiDiscreteRhs> {
    assemble(BurgersScheme::InvariantLagrangian, state, &MeshMotion::Lagrangian, &AssemblyContext::default())
}

pub fn assemble_invariant_radaptive(state: &BurgersState, motion: &MeshMotion) -> Result<SemiDiscreteRhs> {
    assemble(BurgersScheme::InvariantRAdaptive, state, motion, &AssemblyContext::default())
}

/// Act with a Burgers symmetry on a state: `X = λ(x + vt) + a`,
/// `T = λ²t + b`, `U = (u + v)/λ`.
pub fn transform_state(g: &BurgersElement, state: &BurgersState) -> Result<BurgersState> {
    let mut nodes = Vec::with_capacity(state.len());
    let mut values = Vec::with_capacity(state.len());
    let mut t = state.t;
    for (&x, &u) in state.nodes.iter().zip(&state.values) {
        let p = g.act_point(SpaceTimePoint { x, t: state.t, u });
        nodes.push(p.x);
        values.push(p.u);
        t = p.t;
    }
    BurgersState::new(t, nodes, values, state.nu)
}

/// Transformation law of the nodal rates: `dU/dT = λ⁻³ du/dt`,
/// `dX/dT = λ⁻¹(dx/dt + v)`.
pub fn transform_rhs(g: &BurgersElement, rhs: &SemiDiscreteRhs) -> SemiDiscreteRhs {
    let l = g.lambda();
    SemiDiscreteRhs {
        du_dt: rhs.du_dt.iter().map(|d| d / (l * l * l)).collect(),
        dx_dt: rhs.dx_dt.iter().map(|d| (d + g.v) / l).collect(),
    }
}

// ---------------------------------------------------------------------------
// boundaries and time stepping

pub type FieldFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Dirichlet data `u(x, t)` at the two end nodes.
#[derive(Clone)]
pub enum Dirichlet {
    Constant { left: f64, right: f64 },
    /// The same function of `(x, t)` at both ends, typically an exact solution.
    Function(FieldFn),
}

impl fmt::Debug for Dirichlet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dirichlet::Constant { left, right } => write!(f, "Constant({left}, {right})"),
            Dirichlet::Function(_) => f.write_str("Function(..)"),
        }
    }
}

impl Dirichlet {
    fn value(&self, side: usize, x: f64, t: f64) -> f64 {
        match self {
            Dirichlet::Constant { left, right } => [*left, *right][side],
            Dirichlet::Function(g) => g(x, t),
        }
    }

    /// `d/dt u(x_b(t), t)` along a boundary node moving with velocity `xdot`.
    fn rate(&self, x: f64, t: f64, xdot: f64) -> f64 {
        match self {
            Dirichlet::Constant { .. } => 0.0,
            Dirichlet::Function(g) => {
                let tau = 1e-6 * t.abs().max(1.0);
                (g(x + xdot * tau, t + tau) - g(x - xdot * tau, t - tau)) / (2.0 * tau)
            }
        }
    }
}

/// Whether the end nodes stay put or follow the mesh motion law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryNodes {
    #[default]
    Pinned,
    Moving,
}

#[derive(Debug, Clone)]
pub struct Boundary {
    pub data: Dirichlet,
    pub nodes: BoundaryNodes,
}

impl Boundary {
    /// Overwrite the end values from the Dirichlet data at the current
    /// node positions and time.
    pub fn apply(&self, state: &mut BurgersState) {
        let n = state.len();
        state.values[0] = self.data.value(0, state.nodes[0], state.t);
        state.values[n - 1] = self.data.value(1, state.nodes[n - 1], state.t);
    }

    fn context(&self, scheme: BurgersScheme, motion: &MeshMotion, state: &BurgersState) -> Result<AssemblyContext> {
        let n = state.len();
        let xdot = match (self.nodes, scheme) {
            (BoundaryNodes::Pinned, _) | (_, BurgersScheme::GalerkinFixed) => [0.0, 0.0],
            (BoundaryNodes::Moving, BurgersScheme::InvariantLagrangian) => [state.values[0], state.values[n - 1]],
            (BoundaryNodes::Moving, BurgersScheme::InvariantRAdaptive) => {
                let v = motion.velocities(state)?;
                [v[0], v[n - 1]]
            }
        };
        Ok(AssemblyContext {
            boundary_du_dt: [
                self.data.rate(state.nodes[0], state.t, xdot[0]),
                self.data.rate(state.nodes[n - 1], state.t, xdot[1]),
            ],
            pin_boundary_nodes: self.nodes == BoundaryNodes::Pinned,
        })
    }
}

fn axpy(base: &BurgersState, h: f64, k: &SemiDiscreteRhs) -> BurgersState {
    BurgersState {
        t: base.t + h,
        nodes: base.nodes.iter().zip(&k.dx_dt).map(|(x, d)| x + h * d).collect(),
        values: base.values.iter().zip(&k.du_dt).map(|(u, d)| u + h * d).collect(),
        nu: base.nu,
    }
}

/// One classical RK4 step. After every stage and after the update the end
/// values are reset by `boundary` (if given) and the node ordering is
/// checked.
pub fn rk4_step<A>(state: &BurgersState, dt: f64, assembler: A, boundary: Option<&Boundary>) -> Result<BurgersState>
where
    A: Fn(&BurgersState) -> Result<SemiDiscreteRhs>,
{
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidArgument(format!("time step must be > 0, got {dt}")));
    }
    let fix = |mut s: BurgersState| -> Result<BurgersState> {
        check_ordering(&s.nodes)?;
        if let Some(b) = boundary {
            b.apply(&mut s);
        }
        Ok(s)
    };
    let k1 = assembler(state)?;
    let k2 = assembler(&fix(axpy(state, 0.5 * dt, &k1))?)?;
    let k3 = assembler(&fix(axpy(state, 0.5 * dt, &k2))?)?;
    let k4 = assembler(&fix(axpy(state, dt, &k3))?)?;
    let combine = |a: &[f64], b: &[f64], c: &[f64], d: &[f64], base: &[f64]| -> Vec<f64> {
        (0..base.len())
            .map(|i| base[i] + dt / 6.0 * (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i]))
            .collect()
    };
    let next = BurgersState {
        t: state.t + dt,
        nodes: combine(&k1.dx_dt, &k2.dx_dt, &k3.dx_dt, &k4.dx_dt, &state.nodes),
        values: combine(&k1.du_dt, &k2.du_dt, &k3.du_dt, &k4.du_dt, &state.values),
        nu: state.nu,
    };
    fix(next)
}

#[derive(Debug, Clone)]
pub struct SimulationConfig {
    pub scheme: BurgersScheme,
    pub motion: MeshMotion,
    /// Requested step; shortened so that an integer number of steps ends at `t_end`.
    pub dt: f64,
    pub t_end: f64,
    pub boundary: Boundary,
    /// Keep every `snapshot_stride`-th state (the first and last are always kept).
    pub snapshot_stride: usize,
}

impl SimulationConfig {
    fn check(&self, t0: f64) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::config("dt", format!("must be > 0, got {}", self.dt)));
        }
        if !(self.t_end >= t0) || !self.t_end.is_finite() {
            return Err(Error::config("t_end", format!("must be >= initial time {t0}, got {}", self.t_end)));
        }
        if self.snapshot_stride == 0 {
            return Err(Error::config("snapshot_stride", "must be >= 1"));
        }
        match (self.scheme, &self.motion) {
            (BurgersScheme::GalerkinFixed, MeshMotion::Fixed)
            | (BurgersScheme::InvariantLagrangian, MeshMotion::Lagrangian)
            | (BurgersScheme::InvariantRAdaptive, _) => Ok(()),
            (scheme, motion) => Err(Error::config(
                "motion",
                format!("{motion:?} motion is not compatible with the {} scheme", scheme.name()),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub snapshots: Vec<BurgersState>,
    pub steps: usize,
}

impl Trajectory {
    pub fn last(&self) -> &BurgersState {
        self.snapshots.last().expect("trajectory always holds the initial state")
    }

    /// CSV with header `t,l,x,u`, one row per node per snapshot.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "t,l,x,u")?;
        for s in &self.snapshots {
            for (l, (x, u)) in s.nodes.iter().zip(&s.values).enumerate() {
                writeln!(w, "{:.16e},{l},{x:.16e},{u:.16e}", s.t)?;
            }
        }
        Ok(())
    }
}

/// Step `initial` to `cfg.t_end` with RK4.
pub fn simulate(initial: &BurgersState, cfg: &SimulationConfig) -> Result<Trajectory> {
    initial.validate()?;
    cfg.check(initial.t)?;
    let span = cfg.t_end - initial.t;
    let steps = (span / cfg.dt - 1e-9).ceil().max(0.0) as usize;
    let dt = if steps == 0 { 0.0 } else { span / steps as f64 };

    let assembler = |s: &BurgersState| {
        let ctx = cfg.boundary.context(cfg.scheme, &cfg.motion, s)?;
        assemble(cfg.scheme, s, &cfg.motion, &ctx)
    };
    let mut state = initial.clone();
    cfg.boundary.apply(&mut state);
    let mut snapshots = vec![state.clone()];
    for step in 1..=steps {
        let t = state.t;
        state = rk4_step(&state, dt, assembler, Some(&cfg.boundary))
            .map_err(|e| Error::Step { step, t, source: Box::new(e) })?;
        if step == steps {
            // land exactly on t_end
            state.t = cfg.t_end;
            cfg.boundary.apply(&mut state);
        }
        if step % cfg.snapshot_stride == 0 || step == steps {
            snapshots.push(state.clone());
        }
    }
    Ok(Trajectory { snapshots, steps })
}

/// `u = c - a tanh(a (x - c t) / (2ν))`, an exact solution for every `ν > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TravelingWave {
    pub nu: f64,
    pub a: f64,
    pub c: f64,
}

impl TravelingWave {
    pub fn eval(&self, x: f64, t: f64) -> f64 {
        self.c - self.a * (self.a * (x - self.c * t) / (2.0 * self.nu)).tanh()
    }

    pub fn as_field(&self) -> FieldFn {
        let w = *self;
        Arc::new(move |x, t| w.eval(x, t))
    }
}
