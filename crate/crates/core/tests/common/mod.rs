#![allow(dead_code)]

use kicktop::spin::CVector;
use kicktop::{SpinState, SpinSystem};
use num_complex::Complex64;
use rand::Rng;

/// Symmetric state with independent uniform real and imaginary parts.
pub fn random_state<R: Rng>(rng: &mut R, n_qubits: usize) -> SpinState {
    let system = SpinSystem::new(n_qubits).unwrap();
    let amplitudes =
        CVector::from_fn(system.dim(), |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    SpinState::from_amplitudes(system, amplitudes).unwrap()
}

/// Random single-qubit unitary `exp(i a·σ)` up to a global phase.
pub fn random_qubit_unitary<R: Rng>(rng: &mut R) -> nalgebra::Matrix2<Complex64> {
    let a: [f64; 3] = [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)];
    let angle = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
    let n = [a[0] / angle, a[1] / angle, a[2] / angle];
    let (s, c) = angle.sin_cos();
    let i = Complex64::i();
    nalgebra::Matrix2::new(
        Complex64::new(c, 0.0) + i * s * n[2],
        i * s * n[0] + s * n[1],
        i * s * n[0] - s * n[1],
        Complex64::new(c, 0.0) - i * s * n[2],
    )
}

pub fn max_abs_diff(a: &nalgebra::Matrix4<Complex64>, b: &nalgebra::Matrix4<Complex64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
