//! Two-qubit reduced states of symmetric registers, linear entropy and
//! concurrence.
//!
//! Two-qubit matrices use the ordering `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩`, where `|↑⟩`
//! is the `+1` eigenstate of `σ_z`.

use nalgebra::{Matrix2, Matrix4, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub mod oracle;

/// Tolerance used when validating Hermiticity, trace and positivity.
pub const DENSITY_TOLERANCE: f64 = 1e-10;

/// Density-matrix eigenvalues below this magnitude are roundoff and treated
/// as exactly zero before the concurrence is formed.
pub const EIGENVALUE_FLOOR: f64 = 1e-12;

pub type Matrix4c = Matrix4<Complex64>;

/// Collective moments of a symmetric state.
///
/// `first[α] = ⟨J_α⟩`, `second[α][β] = ⟨J_αJ_β + J_βJ_α⟩`, with axes ordered x, y, z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet {
    pub first: [f64; 3],
    pub second: [[f64; 3]; 3],
}

impl MomentSet {
    /// `⟨J²⟩`, which equals `j(j+1)` inside the symmetric irrep.
    pub fn casimir(&self) -> f64 {
        (self.second[0][0] + self.second[1][1] + self.second[2][2]) / 2.0
    }
}

pub(crate) fn pauli(axis: usize) -> Matrix2<Complex64> {
    let o = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::i();
    match axis {
        0 => Matrix2::new(o, one, one, o),
        1 => Matrix2::new(o, -i, i, o),
        2 => Matrix2::new(one, o, o, -one),
        _ => panic!("axis index {axis} out of range"),
    }
}

fn kron2(a: &Matrix2<Complex64>, b: &Matrix2<Complex64>) -> Matrix4c {
    Matrix4c::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

/// `σ_y ⊗ σ_y` in the two-qubit basis.
pub fn spin_flip() -> Matrix4c {
    let y = pauli(1);
    kron2(&y, &y)
}

/// Reduced state of two qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitDensity {
    matrix: Matrix4c,
}

impl TwoQubitDensity {
    /// Wraps a matrix after checking that it is Hermitian, unit-trace and
    /// positive semidefinite within [`DENSITY_TOLERANCE`].
    pub fn new(matrix: Matrix4c) -> Result<Self> {
        let rho = Self { matrix };
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn new_unchecked(matrix: Matrix4c) -> Self {
        Self { matrix }
    }

    /// Projector onto a pure two-qubit state (normalized internally).
    pub fn pure(amplitudes: [Complex64; 4]) -> Result<Self> {
        let norm2: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if norm2 == 0.0 || !norm2.is_finite() {
            return Err(Error::InvalidDensity(format!("pure state of squared norm {norm2}")));
        }
        let matrix = Matrix4c::from_fn(|r, c| amplitudes[r] * amplitudes[c].conj() / norm2);
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &Matrix4c {
        &self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        // Tr ρ² = Σ |ρ_rc|² for Hermitian ρ.
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let eig = SymmetricEigen::new(self.matrix);
        let mut values = [eig.eigenvalues[0], eig.eigenvalues[1], eig.eigenvalues[2], eig.eigenvalues[3]];
        values.sort_by(f64::total_cmp);
        values
    }

    /// `⟨Ψ⁻|ρ|Ψ⁻⟩`, the weight on the antisymmetric singlet.
    pub fn singlet_weight(&self) -> f64 {
        let m = &self.matrix;
        ((m[(1, 1)] + m[(2, 2)] - m[(1, 2)] - m[(2, 1)]) / 2.0).re
    }

    /// Largest deviation from invariance under exchanging the two qubits.
    pub fn swap_asymmetry(&self) -> f64 {
        let swap = [0usize, 2, 1, 3];
        let mut worst: f64 = 0.0;
        for r in 0..4 {
            for c in 0..4 {
                worst = worst.max((self.matrix[(r, c)] - self.matrix[(swap[r], swap[c])]).norm());
            }
        }
        worst
    }

    pub fn validate(&self) -> Result<()> {
        let m = &self.matrix;
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidDensity("non-finite entry".into()));
        }
        let hermitian_defect = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if hermitian_defect > DENSITY_TOLERANCE {
            return Err(Error::InvalidDensity(format!("not Hermitian (defect {hermitian_defect:e})")));
        }
        let trace = m.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > DENSITY_TOLERANCE {
            return Err(Error::InvalidDensity(format!("trace {trace} differs from 1")));
        }
        let lowest = self.eigenvalues()[0];
        if lowest < -DENSITY_TOLERANCE {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {lowest:e}")));
        }
        Ok(())
    }
}

/// Two-qubit reduced state of a permutation-symmetric `N`-qubit state from its
/// collective moments.
///
/// With `a_α = 2⟨J_α⟩/N` and `b_αβ = (2⟨J_αJ_β + J_βJ_α⟩ − N δ_αβ) / (N(N−1))`,
/// `ρ₁₂ = ¼[I⊗I + Σ a_α(σ_α⊗I + I⊗σ_α) + Σ b_αβ σ_α⊗σ_β]`.
pub fn reduce_to_pair(moments: &MomentSet, n_qubits: usize) -> Result<TwoQubitDensity> {
    if n_qubits < 2 {
        return Err(Error::TooFewQubits { got: n_qubits, min: 2 });
    }
    let n = n_qubits as f64;
    let id = Matrix2::<Complex64>::identity();
    let paulis = [pauli(0), pauli(1), pauli(2)];
    let mut matrix = kron2(&id, &id);
    for (sigma, first) in paulis.iter().zip(moments.first) {
        let coeff = Complex64::new(2.0 * first / n, 0.0);
        matrix += (kron2(sigma, &id) + kron2(&id, sigma)) * coeff;
    }
    for a in 0..3 {
        for b in 0..3 {
            let delta = if a == b { n } else { 0.0 };
            // Average the two orders so exchange symmetry is exact in floating point.
            let s = (moments.second[a][b] + moments.second[b][a]) / 2.0;
            let coeff = Complex64::new((2.0 * s - delta) / (n * (n - 1.0)), 0.0);
            matrix += kron2(&paulis[a], &paulis[b]) * coeff;
        }
    }
    matrix *= Complex64::new(0.25, 0.0);
    // Restore exact Hermiticity lost to roundoff.
    let matrix = (matrix + matrix.adjoint()) * Complex64::new(0.5, 0.0);
    Ok(TwoQubitDensity::new_unchecked(matrix))
}

/// Linear entropy `1 − Tr ρ²` of the pair, which for a globally pure state
/// measures the entanglement between the pair and the remaining qubits.
pub fn linear_entropy(rho: &TwoQubitDensity) -> f64 {
    1.0 - rho.purity()
}

/// Wootters concurrence `max{0, λ₁ − λ₂ − λ₃ − λ₄}`.
///
/// The `λ_i` are the square roots of the eigenvalues of `ρ (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`.
/// They are obtained as the singular values of `Wᵀ (σ_y⊗σ_y) W` where
/// `W = [√μ_k v_k]` is built from the eigenpairs of `ρ`, which keeps roundoff
/// in `ρ` from being amplified by the square root.
pub fn concurrence(rho: &TwoQubitDensity) -> Result<f64> {
    let eig = SymmetricEigen::new(*rho.matrix());
    let mut w = eig.eigenvectors;
    for (k, &mu) in eig.eigenvalues.iter().enumerate() {
        if !mu.is_finite() || mu < -DENSITY_TOLERANCE {
            return Err(Error::InvalidDensity(format!("eigenvalue {mu:e} below -{DENSITY_TOLERANCE:e}")));
        }
        let weight = if mu < EIGENVALUE_FLOOR { 0.0 } else { mu.sqrt() };
        w.column_mut(k).scale_mut(weight);
    }
    let tau = w.transpose() * spin_flip() * w;
    let mut lambda: Vec<f64> = tau.singular_values().iter().copied().collect();
    lambda.sort_by(|a, b| b.total_cmp(a));
    Ok((lambda[0] - lambda[1] - lambda[2] - lambda[3]).max(0.0))
}

/// Concurrence from the spectrum of the non-Hermitian product
/// `ρ (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`, solved as a general eigenproblem.
///
/// Product eigenvalues down to `−1e−10` are clamped to zero; anything more
/// negative is rejected as an invalid input. Accurate for well-conditioned
/// states but loses about half the significant digits near rank-deficient ones.
pub fn concurrence_from_product_spectrum(rho: &TwoQubitDensity) -> Result<f64> {
    let y = spin_flip();
    let m = rho.matrix();
    let product = m * y * m.conjugate() * y;
    let (_, triangular) = nalgebra::linalg::Schur::try_new(product, 1e-15, 0)
        .ok_or(Error::NoConvergence("concurrence eigenvalues"))?
        .unpack();
    let mut lambda = Vec::with_capacity(4);
    for k in 0..4 {
        let value = triangular[(k, k)].re;
        if value < -DENSITY_TOLERANCE {
            return Err(Error::InvalidDensity(format!("spin-flip product eigenvalue {value:e}")));
        }
        lambda.push(value.max(0.0).sqrt());
    }
    lambda.sort_by(|a, b| b.total_cmp(a));
    Ok((lambda[0] - lambda[1] - lambda[2] - lambda[3]).max(0.0))
}
