//! Classical kicked-top map on the unit sphere.
//!
//! One kick sends `(X, Y, Z)` to
//!
//! ```text
//! X' =  Z cos(κX) + Y sin(κX)
//! Y' = −Z sin(κX) + Y cos(κX)
//! Z' = −X
//! ```
//!
//! At κ = 3 the point (θ, φ) = (2.25, 0.63) is an elliptic fixed point. The
//! point (2.25, −2.51), often quoted alongside it, is not fixed: one kick
//! sends it near (0.89, −0.63) and a second kick returns it, so it belongs
//! to a stable period-2 orbit whose two points are parity partners.

use nalgebra::{Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_finite, Error, Result};

const DRIFT_THRESHOLD: f64 = 1e-15;

/// A point on the unit sphere of normalized angular momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl PhasePoint {
    /// Normalizes `(x, y, z)` onto the sphere.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::InvalidParameter {
                name: "point",
                reason: format!("cannot project ({x}, {y}, {z}) onto the sphere"),
            });
        }
        Ok(Self { x: x / norm, y: y / norm, z: z / norm })
    }

    /// `(sin θ cos φ, sin θ sin φ, cos θ)`.
    pub fn from_polar(theta: f64, phi: f64) -> Self {
        Self { x: theta.sin() * phi.cos(), y: theta.sin() * phi.sin(), z: theta.cos() }
    }

    /// Polar angle in `[0, π]` and azimuth in `[−π, π]`.
    pub fn to_polar(&self) -> (f64, f64) {
        (self.z.clamp(-1.0, 1.0).acos(), self.y.atan2(self.x))
    }

    pub fn norm(&self) -> f64 {
        self.as_vector().norm()
    }

    pub fn as_vector(&self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }

    /// Euclidean (chord) distance.
    pub fn distance(&self, other: &PhasePoint) -> f64 {
        (self.as_vector() - other.as_vector()).norm()
    }

    /// Great-circle distance in radians.
    pub fn angular_distance(&self, other: &PhasePoint) -> f64 {
        let a = self.as_vector();
        let b = other.as_vector();
        a.cross(&b).norm().atan2(a.dot(&b))
    }

    /// Image under the rotation by π about the y axis, a symmetry of the map.
    pub fn parity_partner(&self) -> Self {
        Self { x: -self.x, y: self.y, z: -self.z }
    }
}

/// Displacement in the ambient space, used for tangent dynamics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentVector {
    pub dx: f64,
    pub dy: f64,
    pub dz: f64,
}

impl TangentVector {
    pub fn as_vector(&self) -> Vector3<f64> {
        Vector3::new(self.dx, self.dy, self.dz)
    }

    fn from_vector(v: Vector3<f64>) -> Self {
        Self { dx: v.x, dy: v.y, dz: v.z }
    }
}

/// One kick, also returning how far the raw image drifted off the sphere.
/// The image is renormalized only when that drift exceeds `1e−15`.
pub fn kick_with_drift(p: &PhasePoint, kappa: f64) -> (PhasePoint, f64) {
    let (s, c) = (kappa * p.x).sin_cos();
    let image = PhasePoint { x: p.z * c + p.y * s, y: -p.z * s + p.y * c, z: -p.x };
    let drift = (image.norm() - 1.0).abs();
    if drift > DRIFT_THRESHOLD {
        let n = image.norm();
        (PhasePoint { x: image.x / n, y: image.y / n, z: image.z / n }, drift)
    } else {
        (image, drift)
    }
}

pub fn kick(p: &PhasePoint, kappa: f64) -> PhasePoint {
    kick_with_drift(p, kappa).0
}

/// Analytic derivative of [`kick`] with respect to `(X, Y, Z)`.
#[rustfmt::skip]
pub fn jacobian(p: &PhasePoint, kappa: f64) -> Matrix3<f64> {
    let (s, c) = (kappa * p.x).sin_cos();
    Matrix3::new(
        kappa * (p.y * c - p.z * s), s, c,
        -kappa * (p.z * c + p.y * s), c, -s,
        -1.0, 0.0, 0.0,
    )
}

/// Points visited by a classical orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Images after kicks `1..=n`.
    pub points: Vec<PhasePoint>,
    /// Sum of per-kick drifts off the sphere.
    pub drift: f64,
}

/// `n` successive kicks from `start`.
pub fn trajectory(start: &PhasePoint, kappa: f64, n: usize) -> Trajectory {
    let mut points = Vec::with_capacity(n);
    let mut drift = 0.0;
    let mut current = *start;
    for _ in 0..n {
        let (next, d) = kick_with_drift(&current, kappa);
        drift += d;
        points.push(next);
        current = next;
    }
    Trajectory { points, drift }
}

/// Largest Lyapunov exponent per kick by the Benettin tangent-space method.
///
/// The orbit first runs `transient` kicks. The tangent vector is then pushed
/// through the Jacobian for `kicks` steps and renormalized each time;
/// the exponent is the mean of the logarithmic stretch factors.
pub fn lyapunov(start: &PhasePoint, kappa: f64, kicks: usize, transient: usize, tangent: TangentVector) -> Result<f64> {
    lyapunov_with_drift(start, kappa, kicks, transient, tangent).map(|(exponent, _)| exponent)
}

/// [`lyapunov`] together with the cumulative renormalization drift of the orbit.
pub fn lyapunov_with_drift(
    start: &PhasePoint,
    kappa: f64,
    kicks: usize,
    transient: usize,
    tangent: TangentVector,
) -> Result<(f64, f64)> {
    if kicks == 0 {
        return Err(Error::InvalidParameter { name: "kicks", reason: "must be positive".into() });
    }
    let mut point = *start;
    let mut drift = 0.0;
    let mut step = |p: &PhasePoint| {
        let (image, d) = kick_with_drift(p, kappa);
        drift += d;
        image
    };
    for _ in 0..transient {
        point = step(&point);
    }
    let mut v = tangent.as_vector();
    let norm = v.norm();
    if !norm.is_finite() || norm == 0.0 {
        return Err(Error::InvalidParameter { name: "tangent", reason: "must be a non-zero finite vector".into() });
    }
    v /= norm;
    let mut sum = 0.0;
    for _ in 0..kicks {
        v = jacobian(&point, kappa) * v;
        let stretch = v.norm();
        sum += stretch.ln();
        v /= stretch;
        point = step(&point);
    }
    Ok((sum / kicks as f64, drift))
}

/// Settings for sphere-averaged Lyapunov exponents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LyapunovConfig {
    pub samples: usize,
    pub kicks: usize,
    pub transient: usize,
    pub seed: u64,
}

impl LyapunovConfig {
    pub fn new(seed: u64) -> Self {
        Self { samples: 100, kicks: 10_000, transient: 100, seed }
    }
}

/// Sphere-averaged exponent and the standard error of that mean.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalLyapunov {
    pub mean: f64,
    pub stderr: f64,
    pub per_sample: Vec<f64>,
    /// Renormalization drift summed over all sample orbits.
    pub drift: f64,
}

/// Draws a point uniformly on the sphere (uniform in cos θ and φ).
pub fn sample_sphere<R: Rng + ?Sized>(rng: &mut R) -> PhasePoint {
    let cos_theta: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    PhasePoint::from_polar(cos_theta.acos(), phi)
}

/// Random unit vector tangent to the sphere at `p`.
fn sample_tangent<R: Rng + ?Sized>(rng: &mut R, p: &PhasePoint) -> TangentVector {
    let radial = p.as_vector();
    loop {
        let raw = Vector3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let tangential = raw - radial * radial.dot(&raw);
        let norm = tangential.norm();
        if norm > 1e-3 {
            return TangentVector::from_vector(tangential / norm);
        }
    }
}

/// Mean Lyapunov exponent over uniformly drawn initial points.
///
/// Samples are drawn sequentially from a generator seeded with `config.seed`,
/// so the same seed reuses the same points for every κ. Samples run on the
/// current rayon pool; the mean is accumulated in sample order.
pub fn global_lyapunov(kappa: f64, config: &LyapunovConfig) -> Result<GlobalLyapunov> {
    check_finite("kappa", kappa)?;
    if config.samples == 0 {
        return Err(Error::InvalidParameter { name: "samples", reason: "must be positive".into() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let seeds: Vec<(PhasePoint, TangentVector)> = (0..config.samples)
        .map(|_| {
            let p = sample_sphere(&mut rng);
            let t = sample_tangent(&mut rng, &p);
            (p, t)
        })
        .collect();
    let runs = seeds
        .par_iter()
        .map(|(p, t)| lyapunov_with_drift(p, kappa, config.kicks, config.transient, *t))
        .collect::<Result<Vec<(f64, f64)>>>()?;
    let per_sample: Vec<f64> = runs.iter().map(|r| r.0).collect();
    let drift = runs.iter().map(|r| r.1).sum();
    let count = per_sample.len() as f64;
    let mean = per_sample.iter().sum::<f64>() / count;
    let stderr = if per_sample.len() > 1 {
        let var = per_sample.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (count - 1.0);
        (var / count).sqrt()
    } else {
        0.0
    };
    Ok(GlobalLyapunov { mean, stderr, per_sample, drift })
}

/// One row of a stroboscopic section.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectionPoint {
    pub trajectory: usize,
    /// Kick count, starting at 1 for the first image.
    pub kick: usize,
    pub theta: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoincareSection {
    pub points: Vec<SectionPoint>,
    pub drift: f64,
}

/// Stroboscopic section from `trajectories` uniformly random starting points.
pub fn poincare_section(kappa: f64, trajectories: usize, kicks: usize, seed: u64) -> Result<PoincareSection> {
    check_finite("kappa", kappa)?;
    if trajectories == 0 || kicks == 0 {
        return Err(Error::InvalidParameter { name: "trajectories/kicks", reason: "counts must be positive".into() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts: Vec<PhasePoint> = (0..trajectories).map(|_| sample_sphere(&mut rng)).collect();
    let orbits: Vec<Trajectory> = starts.par_iter().map(|p| trajectory(p, kappa, kicks)).collect();
    let mut points = Vec::with_capacity(trajectories * kicks);
    let mut drift = 0.0;
    for (id, orbit) in orbits.iter().enumerate() {
        drift += orbit.drift;
        for (k, p) in orbit.points.iter().enumerate() {
            let (theta, phi) = p.to_polar();
            points.push(SectionPoint { trajectory: id, kick: k + 1, theta, phi });
        }
    }
    Ok(PoincareSection { points, drift })
}
