//! Meshes, discrete jets and piecewise-linear hat functions.

use crate::error::{Error, Result};

/// Ordered node coordinates `x_0 < x_1 < ... < x_N` on the real line.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    nodes: Vec<f64>,
}

impl Mesh {
    pub fn new(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 3 {
            return Err(Error::InvalidMesh(format!(
                "need at least 3 nodes, got {}",
                nodes.len()
            )));
        }
        if let Some(bad) = nodes.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidMesh(format!("node {bad} is not finite")));
        }
        if let Some(i) = nodes.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidMesh(format!(
                "nodes not strictly increasing at index {i}: {} >= {}",
                nodes[i],
                nodes[i + 1]
            )));
        }
        Ok(Self { nodes })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn n_elements(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn first(&self) -> f64 {
        self.nodes[0]
    }

    pub fn last(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    /// Element widths `Δx_k = x_{k+1} - x_k`.
    pub fn widths(&self) -> impl Iterator<Item = f64> + '_ {
        self.nodes.windows(2).map(|w| w[1] - w[0])
    }

    pub fn min_width(&self) -> f64 {
        self.widths().fold(f64::INFINITY, f64::min)
    }

    /// The stencil `(k, x_{k±1}, u_{k±1})` around interior node `k`.
    pub fn jet(&self, k: usize, values: &[f64]) -> Result<DiscreteJet> {
        if values.len() != self.nodes.len() {
            return Err(Error::Dimension(format!(
                "{} values for {} nodes",
                values.len(),
                self.nodes.len()
            )));
        }
        if k == 0 || k + 1 >= self.nodes.len() {
            return Err(Error::NodeIndex {
                index: k,
                len: self.nodes.len(),
            });
        }
        DiscreteJet::new(
            k as i64,
            [self.nodes[k - 1], self.nodes[k], self.nodes[k + 1]],
            [values[k - 1], values[k], values[k + 1]],
        )
    }

    fn check_index(&self, k: usize) -> Result<()> {
        if k < self.nodes.len() {
            Ok(())
        } else {
            Err(Error::NodeIndex {
                index: k,
                len: self.nodes.len(),
            })
        }
    }
}

/// `n_elements + 1` equally spaced nodes from `a` to `b` inclusive.
pub fn build_uniform_mesh(a: f64, b: f64, n_elements: usize) -> Result<Mesh> {
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(Error::InvalidMesh(format!("interval [{a}, {b}] is empty")));
    }
    if n_elements < 2 {
        return Err(Error::InvalidMesh(format!(
            "need at least 2 elements, got {n_elements}"
        )));
    }
    let h = (b - a) / n_elements as f64;
    let mut nodes: Vec<f64> = (0..=n_elements).map(|i| a + i as f64 * h).collect();
    // pin the right end exactly
    nodes[n_elements] = b;
    Mesh::new(nodes)
}

/// Second-order discrete jet: three consecutive mesh points and the sampled
/// values there. Index `k` is carried along and never transformed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteJet {
    pub k: i64,
    pub x: [f64; 3],
    pub u: [f64; 3],
}

impl DiscreteJet {
    pub fn new(k: i64, x: [f64; 3], u: [f64; 3]) -> Result<Self> {
        if x.iter().chain(u.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidJet("non-finite entry".into()));
        }
        if !(x[0] < x[1] && x[1] < x[2]) {
            return Err(Error::InvalidJet(format!(
                "stencil not strictly ordered: {x:?}"
            )));
        }
        Ok(Self { k, x, u })
    }

    /// Same stencil with `u_{k+1}` replaced.
    pub fn with_next(&self, u_next: f64) -> Self {
        Self {
            u: [self.u[0], self.u[1], u_next],
            ..*self
        }
    }

    pub fn stencil(&self) -> StencilQuantities {
        stencil_quantities(self)
    }
}

/// Finite-difference quantities on a three-point stencil.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StencilQuantities {
    /// `x_k - x_{k-1}`
    pub dx_left: f64,
    /// `x_{k+1} - x_k`
    pub dx_right: f64,
    pub ux_left: f64,
    pub ux_right: f64,
    /// `(u_{k+1} - u_{k-1}) / (x_{k+1} - x_{k-1})`
    pub ux_centered: f64,
    pub uxx: f64,
    pub x_bar: f64,
    pub u_bar: f64,
}

impl StencilQuantities {
    /// `x_{k+1} - x_{k-1}`
    pub fn span(&self) -> f64 {
        self.dx_left + self.dx_right
    }
}

pub fn stencil_quantities(jet: &DiscreteJet) -> StencilQuantities {
    let [x0, x1, x2] = jet.x;
    let [u0, u1, u2] = jet.u;
    let dx_left = x1 - x0;
    let dx_right = x2 - x1;
    let span = x2 - x0;
    let ux_left = (u1 - u0) / dx_left;
    let ux_right = (u2 - u1) / dx_right;
    StencilQuantities {
        dx_left,
        dx_right,
        ux_left,
        ux_right,
        ux_centered: (u2 - u0) / span,
        uxx: 2.0 * (ux_right - ux_left) / span,
        x_bar: 0.5 * (x2 + x0),
        u_bar: 0.5 * (u2 + u0),
    }
}

/// Hat function `φ_k(x)`. The first and last nodes carry half-hats.
pub fn hat_eval(mesh: &Mesh, k: usize, x: f64) -> Result<f64> {
    mesh.check_index(k)?;
    let nodes = mesh.nodes();
    let xk = nodes[k];
    if x == xk {
        return Ok(1.0);
    }
    if x < xk {
        if k == 0 || x <= nodes[k - 1] {
            return Ok(0.0);
        }
        let xl = nodes[k - 1];
        Ok((x - xl) / (xk - xl))
    } else {
        if k + 1 == nodes.len() || x >= nodes[k + 1] {
            return Ok(0.0);
        }
        let xr = nodes[k + 1];
        Ok((xr - x) / (xr - xk))
    }
}

/// Derivative `φ'_k(x)`; undefined (an error) exactly at mesh nodes.
pub fn hat_deriv(mesh: &Mesh, k: usize, x: f64) -> Result<f64> {
    mesh.check_index(k)?;
    let nodes = mesh.nodes();
    if nodes.binary_search_by(|n| n.total_cmp(&x)).is_ok() {
        return Err(Error::DerivativeAtNode { x });
    }
    let xk = nodes[k];
    if x < xk {
        if k > 0 && x > nodes[k - 1] {
            return Ok(1.0 / (xk - nodes[k - 1]));
        }
    } else if k + 1 < nodes.len() && x < nodes[k + 1] {
        return Ok(-1.0 / (nodes[k + 1] - xk));
    }
    Ok(0.0)
}
