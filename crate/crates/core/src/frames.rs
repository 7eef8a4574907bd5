//! Closed-form discrete moving frames and the invariants they produce.
//!
//! Each frame `ρ` maps a discrete jet to the unique group element sending it
//! onto a fixed cross-section, and satisfies `ρ(g·z) = ρ(z) g⁻¹`.

use crate::error::{Error, Result};
use crate::group::{
    BurgersElement, HomogeneousPair, PainleveElement, PlaneAction, Point, Sl2Element,
    SuperpositionElement,
};
use crate::mesh::DiscreteJet;

/// Denominators below this magnitude make a frame undefined.
pub const DEGENERACY_TOL: f64 = 1e-12;

fn nondegenerate(value: f64, what: &str) -> Result<f64> {
    if value.abs() < DEGENERACY_TOL || !value.is_finite() {
        Err(Error::DegenerateFrame(format!("{what} = {value:e}")))
    } else {
        Ok(value)
    }
}

/// `(x - x̄_k) u_x^k + ū_k`, the affine factor that appears in every SL(2)
/// invariant built from this jet.
fn sl2_bracket(jet: &DiscreteJet, x: f64) -> f64 {
    let s = jet.stencil();
    (x - s.x_bar) * s.ux_centered + s.u_bar
}

/// SL(2) frame for the cross-section `{x_k = 0, u_k = 1, u_x^k = 0}`.
pub fn frame_sl2_cubic(jet: &DiscreteJet) -> Result<Sl2Element> {
    let s = jet.stencil();
    let xk = jet.x[1];
    let uk = nondegenerate(jet.u[1], "u_k")?;
    let denom = nondegenerate(sl2_bracket(jet, xk), "(x_k - x̄)u_x + ū")?;
    let alpha = 1.0 / uk;
    let beta = -xk / uk;
    let gamma = uk * s.ux_centered / denom;
    let delta = uk * (s.u_bar - s.x_bar * s.ux_centered) / denom;
    Sl2Element::new(alpha, beta, gamma, delta)
}

/// Frame for the superposition group with cross-section `{u_k = 0, u_x^k = 0}`.
pub fn frame_superposition(jet: &DiscreteJet, basis: &HomogeneousPair) -> Result<SuperpositionElement> {
    let (ak, ax) = sampled_slope(jet, &*basis.alpha);
    let (gk, gx) = sampled_slope(jet, &*basis.gamma);
    let uk = jet.u[1];
    let ux = jet.stencil().ux_centered;
    let w = nondegenerate(gk * ax - ak * gx, "discrete Wronskian γ_k α_x - α_k γ_x")?;
    Ok(SuperpositionElement::new(
        (uk * gx - gk * ux) / w,
        (ak * ux - uk * ax) / w,
        basis.clone(),
    ))
}

/// Node value and centered slope of `f` sampled on the stencil.
pub(crate) fn sampled_slope(jet: &DiscreteJet, f: &dyn Fn(f64) -> f64) -> (f64, f64) {
    let [x0, x1, x2] = jet.x;
    (f(x1), (f(x2) - f(x0)) / (x2 - x0))
}

pub(crate) fn require_positive(jet: &DiscreteJet) -> Result<()> {
    for (i, &u) in jet.u.iter().enumerate() {
        if !(u > 0.0) {
            return Err(Error::NonPositive {
                value: u,
                offset: i as i32 - 1,
            });
        }
    }
    Ok(())
}

/// Painlevé frame for the cross-section `{u_k = 1, u_x^k = 0}`.
pub fn frame_painleve(jet: &DiscreteJet) -> Result<PainleveElement> {
    require_positive(jet)?;
    let [x0, x1, x2] = jet.x;
    let [u0, u1, u2] = jet.u;
    let span = x2 - x0;
    Ok(PainleveElement::new(
        (u0 / u2).ln() / span,
        x1 * (u2 / u0).ln() / span - u1.ln(),
    ))
}

/// Burgers frame at a single node for the cross-section
/// `{x = 0, t = 0, u = 0, u_x = 1}`. Requires a positive slope.
pub fn frame_burgers(x: f64, u: f64, ux: f64, t: f64) -> Result<BurgersElement> {
    if !(ux > 0.0) {
        return Err(Error::DegenerateFrame(format!(
            "Burgers frame needs u_x > 0, got {ux}"
        )));
    }
    let lambda = ux.sqrt();
    BurgersElement::new(lambda, -lambda * (x - t * u), -t * ux, -u)
}

/// Invariantization of `u_ℓ` under the SL(2) frame at `jet`:
/// `u_ℓ[(x_k - x̄)u_x + ū] / (u_k[(x_ℓ - x̄)u_x + ū])`.
pub fn invariantize_u(jet: &DiscreteJet, x_l: f64, u_l: f64) -> Result<f64> {
    let uk = nondegenerate(jet.u[1], "u_k")?;
    let num = sl2_bracket(jet, jet.x[1]);
    nondegenerate(num, "(x_k - x̄)u_x + ū")?;
    let den = nondegenerate(sl2_bracket(jet, x_l), "(x_ℓ - x̄)u_x + ū")?;
    Ok(u_l * num / (uk * den))
}

/// Generic invariantization of a point: act on it with the frame.
pub fn invariantize_point<G: PlaneAction>(frame: &G, p: Point) -> Result<Point> {
    frame.act_point(p)
}

/// The two Painlevé invariants `I_k = ι(u_{k+1})`, `J_k = ι(u_{k-1})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PainleveInvariants {
    pub i_k: f64,
    pub j_k: f64,
}

pub fn painleve_invariants(jet: &DiscreteJet) -> Result<PainleveInvariants> {
    require_positive(jet)?;
    let [x0, x1, x2] = jet.x;
    let [u0, u1, u2] = jet.u;
    let span = x2 - x0;
    let log_ratio = (u2 / u0).ln();
    Ok(PainleveInvariants {
        i_k: (u2 / u1) * (-(x2 - x1) / span * log_ratio).exp(),
        j_k: (u0 / u1) * ((x1 - x0) / span * log_ratio).exp(),
    })
}
