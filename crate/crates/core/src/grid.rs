//! Product quadrature grids on spheres: Gauss-Legendre nodes in the polar
//! direction, uniform nodes in azimuth.

use crate::error::{Error, Result};
use crate::kernels::Vec3;

/// Gauss-Legendre nodes and weights on [-1, 1].
///
/// Newton iteration on the Legendre polynomial, seeded with the Chebyshev
/// approximation of the roots.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n and P_n' by upward recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    nodes.reverse();
    weights.reverse();
    (nodes, weights)
}

/// One quadrature node on a sphere.
#[derive(Debug, Clone, Copy)]
pub struct SphereNode {
    /// Position on the radius-`r` sphere.
    pub position: Vec3,
    /// Unit direction.
    pub direction: Vec3,
    /// Surface-measure weight (sums to `4 pi r^2`).
    pub weight: f64,
    pub cos_theta: f64,
    pub sin_theta: f64,
    pub phi: f64,
}

/// Product quadrature grid on the radius-`radius` sphere.
#[derive(Debug, Clone)]
pub struct SphereGrid {
    pub n_theta: usize,
    pub n_phi: usize,
    pub radius: f64,
    pub nodes: Vec<SphereNode>,
}

impl SphereGrid {
    pub fn new(n_theta: usize, n_phi: usize, radius: f64) -> Result<Self> {
        if n_theta < 2 || n_phi < 4 {
            return Err(Error::InvalidArgument(format!(
                "grid too small: {n_theta} x {n_phi}"
            )));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
        }
        let (ct_nodes, ct_weights) = gauss_legendre(n_theta);
        let dphi = 2.0 * std::f64::consts::PI / n_phi as f64;
        let mut nodes = Vec::with_capacity(n_theta * n_phi);
        for (ict, &ct) in ct_nodes.iter().enumerate() {
            let st = (1.0 - ct * ct).max(0.0).sqrt();
            for iphi in 0..n_phi {
                let phi = dphi * iphi as f64;
                let dir = [st * phi.cos(), st * phi.sin(), ct];
                nodes.push(SphereNode {
                    position: [dir[0] * radius, dir[1] * radius, dir[2] * radius],
                    direction: dir,
                    weight: ct_weights[ict] * dphi * radius * radius,
                    cos_theta: ct,
                    sin_theta: st,
                    phi,
                });
            }
        }
        Ok(Self { n_theta, n_phi, radius, nodes })
    }

    /// Total quadrature weight; equals the sphere area up to roundoff.
    pub fn total_weight(&self) -> f64 {
        self.nodes.iter().map(|n| n.weight).sum()
    }
}
