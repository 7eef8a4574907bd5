//! Lie point symmetry groups of the model equations, as concrete
//! transformations of the `(x, u)` plane (or `(x, t, u)` for Burgers).
//!
//! Every group here is projectable: the transformed `X` depends on `x` and
//! the group parameters only. Composition follows the convention
//! `g.compose(h)` acts as "first `h`, then `g`".

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mesh::{DiscreteJet, Mesh};

/// Smallest admissible `|γx + δ|` for the fractional-linear action.
pub const POLE_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub u: f64,
}

impl Point {
    pub fn new(x: f64, u: f64) -> Self {
        Self { x, u }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceTimePoint {
    pub x: f64,
    pub t: f64,
    pub u: f64,
}

/// A group acting on the `(x, u)` plane, and through the product action on
/// discrete jets.
pub trait PlaneAction: Sized {
    fn act_point(&self, p: Point) -> Result<Point>;

    /// `self ∘ other`: acts with `other` first.
    fn compose(&self, other: &Self) -> Self;

    fn inverse(&self) -> Self;

    /// Componentwise action on the three stencil points; `k` is fixed.
    fn act_jet(&self, jet: &DiscreteJet) -> Result<DiscreteJet> {
        let mut x = [0.0; 3];
        let mut u = [0.0; 3];
        for i in 0..3 {
            let p = self.act_point(Point::new(jet.x[i], jet.u[i]))?;
            x[i] = p.x;
            u[i] = p.u;
        }
        DiscreteJet::new(jet.k, x, u).map_err(|e| Error::StencilFolded(e.to_string()))
    }
}

// ---------------------------------------------------------------------------
// SL(2, R)

/// Fractional-linear transformation
/// `X = (αx + β)/(γx + δ)`, `U = u/(γx + δ)` with `αδ - βγ = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sl2Element {
    alpha: f64,
    beta: f64,
    gamma: f64,
    delta: f64,
}

impl Sl2Element {
    /// Scales the matrix to unit determinant. A non-positive determinant
    /// cannot be reached by real scaling and is rejected.
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        let det = alpha * delta - beta * gamma;
        if !(det > 0.0) || !det.is_finite() {
            return Err(Error::InvalidElement(format!(
                "SL(2) matrix has determinant {det}"
            )));
        }
        let s = det.sqrt().recip();
        Ok(Self {
            alpha: alpha * s,
            beta: beta * s,
            gamma: gamma * s,
            delta: delta * s,
        })
    }

    pub fn identity() -> Self {
        Self {
            alpha: 1.0,
            beta: 0.0,
            gamma: 0.0,
            delta: 1.0,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn params(&self) -> [f64; 4] {
        [self.alpha, self.beta, self.gamma, self.delta]
    }

    pub fn det(&self) -> f64 {
        self.alpha * self.delta - self.beta * self.gamma
    }

    /// `γx + δ`, checked against the pole.
    pub fn denom(&self, x: f64) -> Result<f64> {
        let d = self.gamma * x + self.delta;
        if d.abs() < POLE_TOL || !d.is_finite() {
            return Err(Error::Pole { x, denom: d });
        }
        Ok(d)
    }

    pub fn map_x(&self, x: f64) -> Result<f64> {
        Ok((self.alpha * x + self.beta) / self.denom(x)?)
    }

    /// Transformed hat function `Φ_k(X) = φ_k(x)(γx_k + δ)/(γx + δ)`.
    pub fn transform_hat(&self, mesh: &Mesh, k: usize, x: f64) -> Result<f64> {
        let phi = crate::mesh::hat_eval(mesh, k, x)?;
        let xk = mesh.nodes()[k];
        Ok(phi * self.denom(xk)? / self.denom(x)?)
    }

    /// `Φ'_k(X) = (γx_k + δ)[(γx + δ)φ'_k(x) - γφ_k(x)]`.
    pub fn transform_hat_deriv(&self, mesh: &Mesh, k: usize, x: f64) -> Result<f64> {
        let phi = crate::mesh::hat_eval(mesh, k, x)?;
        let dphi = crate::mesh::hat_deriv(mesh, k, x)?;
        let xk = mesh.nodes()[k];
        Ok(self.denom(xk)? * (self.denom(x)? * dphi - self.gamma * phi))
    }

    /// Density of `g·dx` against `dx`: `1/(γx + δ)²`.
    pub fn form_factor(&self, x: f64) -> Result<f64> {
        Ok(self.denom(x)?.powi(-2))
    }
}

impl PlaneAction for Sl2Element {
    fn act_point(&self, p: Point) -> Result<Point> {
        let d = self.denom(p.x)?;
        Ok(Point::new((self.alpha * p.x + self.beta) / d, p.u / d))
    }

    fn compose(&self, o: &Self) -> Self {
        // plain matrix product; the determinant stays 1 up to rounding
        Self {
            alpha: self.alpha * o.alpha + self.beta * o.gamma,
            beta: self.alpha * o.beta + self.beta * o.delta,
            gamma: self.gamma * o.alpha + self.delta * o.gamma,
            delta: self.gamma * o.beta + self.delta * o.delta,
        }
    }

    fn inverse(&self) -> Self {
        Self {
            alpha: self.delta,
            beta: -self.beta,
            gamma: -self.gamma,
            delta: self.alpha,
        }
    }

    fn act_jet(&self, jet: &DiscreteJet) -> Result<DiscreteJet> {
        let d: Vec<f64> = jet.x.iter().map(|&x| self.denom(x)).collect::<Result<_>>()?;
        if d.iter().any(|v| v.signum() != d[0].signum()) {
            return Err(Error::StencilFolded(format!(
                "pole of the fractional-linear map lies inside {:?}",
                jet.x
            )));
        }
        let mut x = [0.0; 3];
        let mut u = [0.0; 3];
        for i in 0..3 {
            x[i] = (self.alpha * jet.x[i] + self.beta) / d[i];
            u[i] = jet.u[i] / d[i];
        }
        DiscreteJet::new(jet.k, x, u).map_err(|e| Error::StencilFolded(e.to_string()))
    }
}

// ---------------------------------------------------------------------------
// u_xx = exp(-u_x)

/// `X = e^ε x + a`, `U = e^ε u + ε e^ε x + b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpGroupElement {
    pub eps: f64,
    pub a: f64,
    pub b: f64,
}

impl ExpGroupElement {
    pub fn new(eps: f64, a: f64, b: f64) -> Self {
        Self { eps, a, b }
    }

    pub fn identity() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }
}

impl PlaneAction for ExpGroupElement {
    fn act_point(&self, p: Point) -> Result<Point> {
        let s = self.eps.exp();
        Ok(Point::new(s * p.x + self.a, s * p.u + self.eps * s * p.x + self.b))
    }

    fn compose(&self, o: &Self) -> Self {
        let s = self.eps.exp();
        Self {
            eps: self.eps + o.eps,
            a: s * o.a + self.a,
            b: s * o.b + self.eps * s * o.a + self.b,
        }
    }

    fn inverse(&self) -> Self {
        let s = (-self.eps).exp();
        Self {
            eps: -self.eps,
            a: -self.a * s,
            b: (self.eps * self.a - self.b) * s,
        }
    }
}

// ---------------------------------------------------------------------------
// Linear superposition

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Two linearly independent solutions `α(x)`, `γ(x)` of the homogeneous
/// linear equation.
#[derive(Clone)]
pub struct HomogeneousPair {
    pub alpha: ScalarFn,
    pub gamma: ScalarFn,
}

impl HomogeneousPair {
    pub fn new(
        alpha: impl Fn(f64) -> f64 + Send + Sync + 'static,
        gamma: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            alpha: Arc::new(alpha),
            gamma: Arc::new(gamma),
        }
    }

    pub fn same_as(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.alpha, &other.alpha) && Arc::ptr_eq(&self.gamma, &other.gamma)
    }
}

impl fmt::Debug for HomogeneousPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HomogeneousPair").finish_non_exhaustive()
    }
}

/// `X = x`, `U = u + ε₁α(x) + ε₂γ(x)`.
#[derive(Debug, Clone)]
pub struct SuperpositionElement {
    pub eps1: f64,
    pub eps2: f64,
    pub basis: HomogeneousPair,
}

impl SuperpositionElement {
    pub fn new(eps1: f64, eps2: f64, basis: HomogeneousPair) -> Self {
        Self { eps1, eps2, basis }
    }

    pub fn identity(basis: HomogeneousPair) -> Self {
        Self::new(0.0, 0.0, basis)
    }
}

impl PlaneAction for SuperpositionElement {
    fn act_point(&self, p: Point) -> Result<Point> {
        Ok(Point::new(
            p.x,
            p.u + self.eps1 * (self.basis.alpha)(p.x) + self.eps2 * (self.basis.gamma)(p.x),
        ))
    }

    /// Both elements must share the same homogeneous pair.
    fn compose(&self, o: &Self) -> Self {
        assert!(
            self.basis.same_as(&o.basis),
            "superposition elements built on different homogeneous solutions"
        );
        Self::new(self.eps1 + o.eps1, self.eps2 + o.eps2, self.basis.clone())
    }

    fn inverse(&self) -> Self {
        Self::new(-self.eps1, -self.eps2, self.basis.clone())
    }
}

// ---------------------------------------------------------------------------
// Painlevé subgroup

/// `X = x`, `U = u e^{ax + b}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PainleveElement {
    pub a: f64,
    pub b: f64,
}

impl PainleveElement {
    pub fn new(a: f64, b: f64) -> Self {
        Self { a, b }
    }

    pub fn identity() -> Self {
        Self::new(0.0, 0.0)
    }
}

impl PlaneAction for PainleveElement {
    fn act_point(&self, p: Point) -> Result<Point> {
        Ok(Point::new(p.x, p.u * (self.a * p.x + self.b).exp()))
    }

    fn compose(&self, o: &Self) -> Self {
        Self::new(self.a + o.a, self.b + o.b)
    }

    fn inverse(&self) -> Self {
        Self::new(-self.a, -self.b)
    }
}

// ---------------------------------------------------------------------------
// Burgers four-parameter subgroup

/// `X = λ(x + vt) + a`, `T = λ²t + b`, `U = (u + v)/λ`, `λ > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurgersElement {
    lambda: f64,
    pub a: f64,
    pub b: f64,
    pub v: f64,
}

impl BurgersElement {
    pub fn new(lambda: f64, a: f64, b: f64, v: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidElement(format!("Burgers scaling λ = {lambda} must be > 0")));
        }
        Ok(Self { lambda, a, b, v })
    }

    pub fn identity() -> Self {
        Self {
            lambda: 1.0,
            a: 0.0,
            b: 0.0,
            v: 0.0,
        }
    }

    /// Pure Galilean boost `X = x + vt`, `U = u + v`.
    pub fn boost(v: f64) -> Self {
        Self { v, ..Self::identity() }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn act_point(&self, p: SpaceTimePoint) -> SpaceTimePoint {
        SpaceTimePoint {
            x: self.lambda * (p.x + self.v * p.t) + self.a,
            t: self.lambda * self.lambda * p.t + self.b,
            u: (p.u + self.v) / self.lambda,
        }
    }

    /// Transformed slope `U_X = u_x / λ²`.
    pub fn act_slope(&self, ux: f64) -> f64 {
        ux / (self.lambda * self.lambda)
    }

    pub fn compose(&self, o: &Self) -> Self {
        Self {
            lambda: self.lambda * o.lambda,
            a: self.lambda * (o.a + self.v * o.b) + self.a,
            b: self.lambda * self.lambda * o.b + self.b,
            v: o.v + o.lambda * self.v,
        }
    }

    pub fn inverse(&self) -> Self {
        let l = self.lambda;
        Self {
            lambda: 1.0 / l,
            a: -self.a / l + self.v * self.b / (l * l),
            b: -self.b / (l * l),
            v: -self.v / l,
        }
    }
}

/// Random group elements near the identity for property tests and audits:
/// parameters in `[-0.3, 0.3]`, `λ ∈ [0.75, 1.3]`.
pub mod sampling {
    use super::*;
    use rand::Rng;

    pub const PARAM_RADIUS: f64 = 0.3;

    fn p<R: Rng + ?Sized>(rng: &mut R) -> f64 {
        rng.random_range(-PARAM_RADIUS..=PARAM_RADIUS)
    }

    /// Near-identity SL(2) element keeping `γx + δ ≥ 0.2` on `[-reach, reach]`.
    pub fn sl2<R: Rng + ?Sized>(rng: &mut R, reach: f64) -> Sl2Element {
        loop {
            let (a, b, c) = (1.0 + p(rng), p(rng), p(rng));
            let d = (1.0 + b * c) / a;
            let g = Sl2Element::new(a, b, c, d).expect("positive determinant");
            if (d - c.abs() * reach) >= 0.2 {
                return g;
            }
        }
    }

    pub fn exp_group<R: Rng + ?Sized>(rng: &mut R) -> ExpGroupElement {
        ExpGroupElement::new(p(rng), p(rng), p(rng))
    }

    pub fn painleve<R: Rng + ?Sized>(rng: &mut R) -> PainleveElement {
        PainleveElement::new(p(rng), p(rng))
    }

    pub fn superposition<R: Rng + ?Sized>(rng: &mut R, basis: &HomogeneousPair) -> SuperpositionElement {
        SuperpositionElement::new(p(rng), p(rng), basis.clone())
    }

    pub fn burgers<R: Rng + ?Sized>(rng: &mut R) -> BurgersElement {
        let lambda = rng.random_range(0.75..=1.3);
        BurgersElement::new(lambda, p(rng), p(rng), p(rng)).expect("λ > 0")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::hat_eval;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
    }

    fn assert_pt(a: Point, b: Point, tol: f64) {
        assert!(close(a.x, b.x, tol) && close(a.u, b.u, tol), "{a:?} vs {b:?}");
    }

    #[test]
    fn identities_fix_points() {
        let p = Point::new(0.7, -1.3);
        assert_eq!(Sl2Element::identity().act_point(p).unwrap(), p);
        assert_eq!(ExpGroupElement::identity().act_point(p).unwrap(), p);
        assert_eq!(PainleveElement::identity().act_point(p).unwrap(), p);
        let basis = HomogeneousPair::new(f64::exp, |x| (-x).exp());
        assert_eq!(SuperpositionElement::identity(basis).act_point(p).unwrap(), p);
        let q = SpaceTimePoint { x: 1.0, t: 2.0, u: 3.0 };
        assert_eq!(BurgersElement::identity().act_point(q), q);
    }

    #[test]
    fn sl2_pure_scaling() {
        let g = Sl2Element::new(2.0, 0.0, 0.0, 0.5).unwrap();
        assert_eq!(g.act_point(Point::new(3.0, 1.0)).unwrap().x, 12.0);
    }

    #[test]
    fn sl2_renormalizes_and_rejects() {
        let g = Sl2Element::new(2.0, 0.0, 0.0, 2.0).unwrap();
        assert!((g.det() - 1.0).abs() < 1e-15);
        assert_eq!(g.params(), [1.0, 0.0, 0.0, 1.0]);
        assert!(Sl2Element::new(0.0, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn sl2_pole_is_error() {
        let g = Sl2Element::new(1.0, 0.0, 1.0, 1.0).unwrap();
        assert!(matches!(g.act_point(Point::new(-1.0, 1.0)), Err(Error::Pole { .. })));
        assert!(g.form_factor(-1.0).is_err());
    }

    #[test]
    fn burgers_galilean_boost() {
        let g = BurgersElement::new(1.0, 0.0, 0.0, 2.0).unwrap();
        let q = g.act_point(SpaceTimePoint { x: 1.0, t: 3.0, u: 5.0 });
        assert_eq!((q.x, q.t, q.u), (7.0, 3.0, 7.0));
        assert!(BurgersElement::new(0.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn painleve_on_jet() {
        let g = PainleveElement::new(0.0, 2f64.ln());
        let jet = DiscreteJet::new(3, [0.0, 1.0, 2.0], [1.0; 3]).unwrap();
        let z = g.act_jet(&jet).unwrap();
        assert_eq!(z.x, jet.x);
        for u in z.u {
            assert!((u - 2.0).abs() < 1e-15);
        }
        assert_eq!(z.k, 3);
    }

    #[test]
    fn sl2_on_jet_by_hand() {
        let g = Sl2Element::new(1.0, 0.0, 1.0, 1.0).unwrap();
        let jet = DiscreteJet::new(1, [0.0, 1.0, 2.0], [1.0; 3]).unwrap();
        let z = g.act_jet(&jet).unwrap();
        let x_expected = [0.0, 0.5, 2.0 / 3.0];
        let u_expected = [1.0, 0.5, 1.0 / 3.0];
        for i in 0..3 {
            assert!((z.x[i] - x_expected[i]).abs() < 1e-15);
            assert!((z.u[i] - u_expected[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn sl2_folding_stencil_is_error() {
        // pole at x = 1.5 sits inside the stencil
        let g = Sl2Element::new(1.0, 0.0, -2.0 / 3.0, 1.0).unwrap();
        let jet = DiscreteJet::new(1, [0.0, 1.0, 2.0], [1.0; 3]).unwrap();
        assert!(matches!(g.act_jet(&jet), Err(Error::StencilFolded(_))));
    }

    #[test]
    fn compose_with_inverse_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = sampling::sl2(&mut rng, 2.0);
        let id = g.compose(&g.inverse());
        for (a, b) in id.params().iter().zip([1.0, 0.0, 0.0, 1.0]) {
            assert!((a - b).abs() < 1e-14);
        }
        let e = sampling::exp_group(&mut rng);
        let id = e.compose(&e.inverse());
        assert!(id.eps.abs() < 1e-15 && id.a.abs() < 1e-15 && id.b.abs() < 1e-15);
        let b = sampling::burgers(&mut rng);
        let id = b.compose(&b.inverse());
        assert!((id.lambda() - 1.0).abs() < 1e-15 && id.a.abs() < 1e-15 && id.b.abs() < 1e-15 && id.v.abs() < 1e-15);
    }

    #[test]
    fn sl2_composition_preserves_det() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let g = sampling::sl2(&mut rng, 2.0).compose(&sampling::sl2(&mut rng, 2.0));
            assert!((g.det() - 1.0).abs() < 1e-13);
        }
    }

    fn check_axioms<G: PlaneAction + Clone>(mut sample: impl FnMut(&mut ChaCha8Rng) -> G, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..100 {
            let (g, h, k) = (sample(&mut rng), sample(&mut rng), sample(&mut rng));
            let p = Point::new(rng.random_range(-1.5..1.5), rng.random_range(0.5..2.0));
            // composition is pointwise action
            let lhs = g.compose(&h).act_point(p).unwrap();
            let rhs = g.act_point(h.act_point(p).unwrap()).unwrap();
            assert_pt(lhs, rhs, 1e-10);
            // associativity
            let a = g.compose(&h).compose(&k).act_point(p).unwrap();
            let b = g.compose(&h.compose(&k)).act_point(p).unwrap();
            assert_pt(a, b, 1e-10);
            // inverse
            let back = g.inverse().act_point(g.act_point(p).unwrap()).unwrap();
            assert_pt(back, p, 1e-10);
        }
    }

    #[test]
    fn group_axioms_pointwise() {
        check_axioms(|r| sampling::sl2(r, 2.5), 10);
        check_axioms(sampling::exp_group, 11);
        check_axioms(sampling::painleve, 12);
        let basis = HomogeneousPair::new(f64::cos, f64::sin);
        check_axioms(move |r| sampling::superposition(r, &basis), 13);
    }

    #[test]
    fn burgers_axioms_pointwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let close3 = |a: SpaceTimePoint, b: SpaceTimePoint| {
            close(a.x, b.x, 1e-10) && close(a.t, b.t, 1e-10) && close(a.u, b.u, 1e-10)
        };
        for _ in 0..100 {
            let (g, h, k) = (
                sampling::burgers(&mut rng),
                sampling::burgers(&mut rng),
                sampling::burgers(&mut rng),
            );
            let p = SpaceTimePoint {
                x: rng.random_range(-2.0..2.0),
                t: rng.random_range(0.0..2.0),
                u: rng.random_range(-1.0..1.0),
            };
            assert!(close3(g.compose(&h).act_point(p), g.act_point(h.act_point(p))));
            assert!(close3(
                g.compose(&h).compose(&k).act_point(p),
                g.compose(&h.compose(&k)).act_point(p)
            ));
            assert!(close3(g.inverse().act_point(g.act_point(p)), p));
        }
    }

    #[test]
    fn exp_group_composition_matches_pointwise_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let g1 = ExpGroupElement::new(0.2, -0.1, 0.3);
        let g2 = ExpGroupElement::new(-0.25, 0.15, 0.05);
        let c = g1.compose(&g2);
        // oracle: the composed law read off from acting on (0,0), (1,0), (0,1)
        let raw = |g: &ExpGroupElement, x: f64, u: f64| {
            let s = g.eps.exp();
            (s * x + g.a, s * u + g.eps * s * x + g.b)
        };
        let chain = |x: f64, u: f64| {
            let (x1, u1) = raw(&g2, x, u);
            raw(&g1, x1, u1)
        };
        let (a, b) = chain(0.0, 0.0);
        let (x10, _) = chain(1.0, 0.0);
        let eps = (x10 - a).ln();
        assert!((c.eps - eps).abs() < 1e-14 && (c.a - a).abs() < 1e-14 && (c.b - b).abs() < 1e-14);
        for _ in 0..10 {
            let (x, u) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let p = c.act_point(Point::new(x, u)).unwrap();
            let (xe, ue) = chain(x, u);
            assert!((p.x - xe).abs() < 1e-13 && (p.u - ue).abs() < 1e-13);
        }
    }

    #[test]
    fn transformed_hat_examples() {
        let mesh = Mesh::new(vec![0.0, 1.0, 2.0]).unwrap();
        let id = Sl2Element::identity();
        for x in [0.25, 0.5, 1.3, 1.9] {
            assert_eq!(id.transform_hat(&mesh, 1, x).unwrap(), hat_eval(&mesh, 1, x).unwrap());
            assert_eq!(
                id.transform_hat_deriv(&mesh, 1, x).unwrap(),
                crate::mesh::hat_deriv(&mesh, 1, x).unwrap()
            );
        }
        let g = Sl2Element::new(1.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(g.transform_hat(&mesh, 1, 1.0).unwrap(), 1.0);
        assert!((g.transform_hat(&mesh, 1, 0.5).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(id.form_factor(0.3).unwrap(), 1.0);
        assert_eq!(g.form_factor(1.0).unwrap(), 0.25);
    }

    #[test]
    fn form_factor_matches_finite_difference() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let g = sampling::sl2(&mut rng, 2.0);
            let x: f64 = rng.random_range(-2.0..2.0);
            let h = 1e-5;
            let fd = (g.map_x(x + h).unwrap() - g.map_x(x - h).unwrap()) / (2.0 * h);
            assert!((fd - g.form_factor(x).unwrap()).abs() < 1e-8);
        }
    }

    #[test]
    fn transformed_hat_equals_hat_on_transformed_mesh() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mesh = Mesh::new(vec![-1.0, -0.4, 0.1, 0.9, 1.5]).unwrap();
        for _ in 0..50 {
            let g = sampling::sl2(&mut rng, 2.0);
            let image = Mesh::new(mesh.nodes().iter().map(|&x| g.map_x(x).unwrap()).collect()).unwrap();
            let k = rng.random_range(0..mesh.len());
            let x = rng.random_range(-1.0..1.5);
            let formula = g.transform_hat(&mesh, k, x).unwrap();
            let rebuilt = hat_eval(&image, k, g.map_x(x).unwrap()).unwrap();
            assert!((formula - rebuilt).abs() < 1e-10, "{formula} vs {rebuilt}");
        }
    }

    #[test]
    fn transformed_hat_derivative_chain_rule() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mesh = Mesh::new(vec![-1.0, -0.4, 0.1, 0.9, 1.5]).unwrap();
        let mut checked = 0;
        while checked < 50 {
            let g = sampling::sl2(&mut rng, 2.0);
            let k = rng.random_range(0..mesh.len());
            let x = rng.random_range(-1.0..1.5);
            let h = 1e-6;
            if mesh.nodes().iter().any(|&n| (n - x).abs() < 10.0 * h) {
                continue;
            }
            let dphi = (g.transform_hat(&mesh, k, x + h).unwrap() - g.transform_hat(&mesh, k, x - h).unwrap())
                / (g.map_x(x + h).unwrap() - g.map_x(x - h).unwrap());
            assert!((dphi - g.transform_hat_deriv(&mesh, k, x).unwrap()).abs() < 1e-6);
            checked += 1;
        }
    }
}
