//! Product grids over the sphere for scans and uniform (Haar) state averages.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Scan grids keep θ this far away from the poles, where every φ names the
/// same coherent state.
pub const POLE_CLAMP: f64 = 1e-6;

/// A θ × φ product grid with normalized weights.
///
/// φ nodes are always uniform on `[−π, π)`; the θ nodes and their weights
/// depend on the rule. Cell weights are `theta_weight[i] / n_phi` and sum to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereGrid {
    thetas: Vec<f64>,
    phis: Vec<f64>,
    theta_weights: Vec<f64>,
    theta_clamp: Option<f64>,
}

fn check_sizes(n_theta: usize, n_phi: usize) -> Result<()> {
    if n_theta < 2 {
        return Err(Error::InvalidParameter {
            name: "grid_theta",
            reason: format!("need at least 2 nodes, got {n_theta}"),
        });
    }
    if n_phi < 2 {
        return Err(Error::InvalidParameter {
            name: "grid_phi",
            reason: format!("need at least 2 nodes, got {n_phi}"),
        });
    }
    Ok(())
}

fn uniform_phis(n_phi: usize) -> Vec<f64> {
    (0..n_phi).map(|k| -PI + 2.0 * PI * k as f64 / n_phi as f64).collect()
}

impl SphereGrid {
    /// Evenly spaced θ over `[0, π]` (endpoints clamped by [`POLE_CLAMP`]),
    /// weighted by `sin θ`. Intended for phase-space pictures.
    pub fn regular(n_theta: usize, n_phi: usize) -> Result<Self> {
        check_sizes(n_theta, n_phi)?;
        let thetas: Vec<f64> =
            (0..n_theta).map(|i| (PI * i as f64 / (n_theta - 1) as f64).clamp(POLE_CLAMP, PI - POLE_CLAMP)).collect();
        let raw: Vec<f64> = thetas.iter().map(|t| t.sin()).collect();
        let total: f64 = raw.iter().sum();
        let theta_weights = raw.iter().map(|w| w / total).collect();
        Ok(Self { thetas, phis: uniform_phis(n_phi), theta_weights, theta_clamp: Some(POLE_CLAMP) })
    }

    /// Midpoint rule in cos θ: equal-area bands with equal weights.
    pub fn midpoint(n_theta: usize, n_phi: usize) -> Result<Self> {
        check_sizes(n_theta, n_phi)?;
        let thetas =
            (0..n_theta).map(|i| (-1.0 + (2 * i + 1) as f64 / n_theta as f64).clamp(-1.0, 1.0).acos()).collect();
        let theta_weights = vec![1.0 / n_theta as f64; n_theta];
        Ok(Self { thetas, phis: uniform_phis(n_phi), theta_weights, theta_clamp: None })
    }

    /// Gauss–Legendre nodes in cos θ.
    pub fn gauss_legendre(n_theta: usize, n_phi: usize) -> Result<Self> {
        check_sizes(n_theta, n_phi)?;
        let (nodes, weights) = gauss_legendre_rule(n_theta);
        let thetas = nodes.iter().map(|x| x.acos()).collect();
        let theta_weights = weights.iter().map(|w| w / 2.0).collect();
        Ok(Self { thetas, phis: uniform_phis(n_phi), theta_weights, theta_clamp: None })
    }

    /// Grid with explicit nodes; every cell gets the same weight.
    pub fn from_nodes(thetas: Vec<f64>, phis: Vec<f64>) -> Result<Self> {
        if thetas.is_empty() || phis.is_empty() {
            return Err(Error::InvalidParameter {
                name: "grid", reason: "needs at least one θ and one φ node".into()
            });
        }
        let theta_weights = vec![1.0 / thetas.len() as f64; thetas.len()];
        Ok(Self { thetas, phis, theta_weights, theta_clamp: None })
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn phis(&self) -> &[f64] {
        &self.phis
    }

    pub fn theta_weights(&self) -> &[f64] {
        &self.theta_weights
    }

    /// The pole clamp applied to θ nodes, if any.
    pub fn theta_clamp(&self) -> Option<f64> {
        self.theta_clamp
    }

    pub fn len(&self) -> usize {
        self.thetas.len() * self.phis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(θ, φ, weight)` of cell `index`, θ-major.
    pub fn cell(&self, index: usize) -> (f64, f64, f64) {
        let n_phi = self.phis.len();
        let (i, k) = (index / n_phi, index % n_phi);
        (self.thetas[i], self.phis[k], self.theta_weights[i] / n_phi as f64)
    }

    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        (0..self.len()).map(move |index| self.cell(index))
    }
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[−1, 1]`,
/// nodes in descending order.
pub fn gauss_legendre_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut derivative = 0.0;
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            derivative = dp;
            let step = p / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        if dp != 0.0 {
            derivative = dp;
        }
        let w = 2.0 / ((1.0 - x * x) * derivative * derivative);
        nodes[i] = x;
        nodes[n - 1 - i] = -x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn weights_are_normalized() {
        for grid in [
            SphereGrid::regular(7, 5).unwrap(),
            SphereGrid::midpoint(8, 16).unwrap(),
            SphereGrid::gauss_legendre(9, 4).unwrap(),
        ] {
            let total: f64 = grid.cells().map(|(_, _, w)| w).sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let n = 6;
        let (x, w) = gauss_legendre_rule(n);
        for degree in 0..2 * n {
            let quad: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(degree as i32)).sum();
            let exact = if degree % 2 == 1 { 0.0 } else { 2.0 / (degree as f64 + 1.0) };
            assert_abs_diff_eq!(quad, exact, epsilon = 1e-14);
        }
    }

    #[test]
    fn sphere_average_of_z_squared() {
        // Uniform average of cos²θ over the sphere is 1/3.
        for grid in [SphereGrid::midpoint(64, 4).unwrap(), SphereGrid::gauss_legendre(4, 4).unwrap()] {
            let avg: f64 = grid.cells().map(|(t, _, w)| w * t.cos().powi(2)).sum();
            assert_abs_diff_eq!(avg, 1.0 / 3.0, epsilon = 1e-4);
        }
    }

    #[test]
    fn regular_grid_clamps_poles() {
        let grid = SphereGrid::regular(3, 4).unwrap();
        assert_eq!(grid.thetas()[0], POLE_CLAMP);
        assert_eq!(grid.thetas()[2], PI - POLE_CLAMP);
        assert_eq!(grid.phis(), &[-PI, -PI / 2.0, 0.0, PI / 2.0]);
        assert_eq!(grid.theta_clamp(), Some(POLE_CLAMP));
    }

    #[test]
    fn rejects_tiny_grids() {
        assert!(SphereGrid::midpoint(1, 4).is_err());
        assert!(SphereGrid::regular(4, 1).is_err());
    }
}
