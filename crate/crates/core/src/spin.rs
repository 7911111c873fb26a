//! Collective spin operators, Dicke and spin-coherent states.
//!
//! States of `N` qubits that are symmetric under qubit exchange live in the
//! spin `j = N/2` irrep, spanned by the Dicke states `|j,m⟩`. Amplitude
//! vectors are ordered by ascending `m`, so index `k` holds `m = -j + k` and
//! `J_z` is diagonal with increasing entries.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::entanglement::MomentSet;
use crate::error::{check_finite, Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

const NORM_TOLERANCE: f64 = 1e-12;

/// An `N`-qubit register restricted to its permutation-symmetric sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpinSystem {
    n_qubits: usize,
}

impl SpinSystem {
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::TooFewQubits { got: 0, min: 1 });
        }
        Ok(Self { n_qubits })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Total spin `j = N/2`.
    pub fn j(&self) -> f64 {
        self.n_qubits as f64 / 2.0
    }

    /// Hilbert-space dimension `2j + 1 = N + 1`.
    pub fn dim(&self) -> usize {
        self.n_qubits + 1
    }

    /// Magnetic number of basis index `k`.
    pub fn m_at(&self, k: usize) -> f64 {
        k as f64 - self.j()
    }

    /// Basis index of magnetic number `m`, if `m` is a valid value for this spin.
    pub fn index_of(&self, m: f64) -> Result<usize> {
        let j = self.j();
        let shifted = m + j;
        let k = shifted.round();
        if !m.is_finite() || (shifted - k).abs() > 1e-9 || k < 0.0 || k > 2.0 * j {
            return Err(Error::InvalidMagneticNumber { m, j });
        }
        Ok(k as usize)
    }

    /// Pairwise quantities need at least two qubits.
    pub fn require_pairs(&self) -> Result<()> {
        if self.n_qubits < 2 {
            return Err(Error::TooFewQubits { got: self.n_qubits, min: 2 });
        }
        Ok(())
    }
}

/// Unit-norm state vector over the Dicke basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinState {
    system: SpinSystem,
    amplitudes: CVector,
}

impl SpinState {
    /// Builds a state from raw amplitudes, normalizing them.
    pub fn from_amplitudes(system: SpinSystem, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != system.dim() {
            return Err(Error::DimensionMismatch { expected: system.dim(), got: amplitudes.len() });
        }
        let norm = amplitudes.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::InvalidParameter {
                name: "amplitudes",
                reason: format!("cannot normalize a vector of norm {norm}"),
            });
        }
        Ok(Self { system, amplitudes: amplitudes.unscale(norm) })
    }

    /// Wraps amplitudes that are already normalized up to roundoff.
    pub(crate) fn from_normalized(system: SpinSystem, amplitudes: CVector) -> Self {
        debug_assert_eq!(amplitudes.len(), system.dim());
        debug_assert!((amplitudes.norm() - 1.0).abs() < 1e-8);
        Self { system, amplitudes }
    }

    pub fn system(&self) -> SpinSystem {
        self.system
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> CVector {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= NORM_TOLERANCE
    }

    /// `⟨ψ|φ⟩`.
    pub fn inner(&self, other: &SpinState) -> Result<Complex64> {
        self.check_system(other.system)?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `⟨ψ|A|ψ⟩` for a dense operator.
    pub fn expectation(&self, op: &CMatrix) -> Result<Complex64> {
        if op.nrows() != self.system.dim() || op.ncols() != self.system.dim() {
            return Err(Error::DimensionMismatch { expected: self.system.dim(), got: op.nrows() });
        }
        Ok(self.amplitudes.dotc(&(op * &self.amplitudes)))
    }

    pub(crate) fn check_system(&self, other: SpinSystem) -> Result<()> {
        if self.system != other {
            return Err(Error::DimensionMismatch { expected: other.dim(), got: self.system.dim() });
        }
        Ok(())
    }
}

/// Dense `J_x`, `J_y`, `J_z` and `J_z²` in the Dicke basis.
#[derive(Debug, Clone)]
pub struct CollectiveOperators {
    system: SpinSystem,
    jx: CMatrix,
    jy: CMatrix,
    jz: CMatrix,
    jz2: CMatrix,
    /// `⟨j,m+1|J₊|j,m⟩` for each basis index.
    ladder: Vec<f64>,
}

impl CollectiveOperators {
    pub fn new(system: SpinSystem) -> Self {
        let dim = system.dim();
        let j = system.j();
        let mut jx = CMatrix::zeros(dim, dim);
        let mut jy = CMatrix::zeros(dim, dim);
        let mut jz = CMatrix::zeros(dim, dim);
        let mut jz2 = CMatrix::zeros(dim, dim);
        let mut ladder = Vec::with_capacity(dim.saturating_sub(1));
        for k in 0..dim {
            let m = system.m_at(k);
            jz[(k, k)] = Complex64::new(m, 0.0);
            jz2[(k, k)] = Complex64::new(m * m, 0.0);
            if k + 1 < dim {
                // ⟨j,m+1|J₊|j,m⟩
                let raise = (j * (j + 1.0) - m * (m + 1.0)).sqrt();
                ladder.push(raise);
                jx[(k + 1, k)] = Complex64::new(raise / 2.0, 0.0);
                jx[(k, k + 1)] = Complex64::new(raise / 2.0, 0.0);
                jy[(k + 1, k)] = Complex64::new(0.0, -raise / 2.0);
                jy[(k, k + 1)] = Complex64::new(0.0, raise / 2.0);
            }
        }
        Self { system, jx, jy, jz, jz2, ladder }
    }

    pub fn system(&self) -> SpinSystem {
        self.system
    }

    pub fn jx(&self) -> &CMatrix {
        &self.jx
    }

    pub fn jy(&self) -> &CMatrix {
        &self.jy
    }

    pub fn jz(&self) -> &CMatrix {
        &self.jz
    }

    pub fn jz2(&self) -> &CMatrix {
        &self.jz2
    }

    /// Raising operator `J₊ = J_x + i J_y`.
    pub fn j_plus(&self) -> CMatrix {
        &self.jx + &self.jy * Complex64::i()
    }

    /// `J_α |ψ⟩` for axis 0, 1, 2 (x, y, z), exploiting the tridiagonal
    /// structure instead of a dense product.
    pub fn apply(&self, axis: usize, psi: &CVector) -> CVector {
        let dim = self.system.dim();
        assert_eq!(psi.len(), dim, "state dimension");
        let half = Complex64::new(0.5, 0.0);
        match axis {
            2 => CVector::from_fn(dim, |k, _| psi[k] * self.system.m_at(k)),
            0 | 1 => CVector::from_fn(dim, |k, _| {
                // (J₊ψ)_k = c_{k-1} ψ_{k-1}, (J₋ψ)_k = c_k ψ_{k+1}
                let up = if k > 0 { psi[k - 1] * self.ladder[k - 1] } else { Complex64::new(0.0, 0.0) };
                let down = if k + 1 < dim { psi[k + 1] * self.ladder[k] } else { Complex64::new(0.0, 0.0) };
                if axis == 0 {
                    (up + down) * half
                } else {
                    (up - down) * Complex64::new(0.0, -0.5)
                }
            }),
            _ => panic!("axis index {axis} out of range"),
        }
    }

    /// Components indexed 0, 1, 2 for x, y, z.
    pub fn component(&self, axis: usize) -> &CMatrix {
        match axis {
            0 => &self.jx,
            1 => &self.jy,
            2 => &self.jz,
            _ => panic!("axis index {axis} out of range"),
        }
    }
}

/// Builds the collective operators for `system`.
pub fn build_collective_ops(system: SpinSystem) -> CollectiveOperators {
    CollectiveOperators::new(system)
}

/// The Dicke basis state `|j,m⟩`.
pub fn dicke_state(system: SpinSystem, m: f64) -> Result<SpinState> {
    let k = system.index_of(m)?;
    let mut amplitudes = CVector::zeros(system.dim());
    amplitudes[k] = Complex64::new(1.0, 0.0);
    Ok(SpinState { system, amplitudes })
}

/// `exp(i·s·H)` for Hermitian `H`, through its eigendecomposition.
pub fn hermitian_exp_i(h: &CMatrix, s: f64) -> CMatrix {
    let eig = SymmetricEigen::new(h.clone());
    let phases = eig.eigenvalues.map(|lambda| Complex64::from_polar(1.0, s * lambda));
    let v = &eig.eigenvectors;
    let mut scaled = v.clone();
    for (col, phase) in scaled.column_iter_mut().zip(phases.iter()) {
        for entry in col {
            *entry *= phase;
        }
    }
    scaled * v.adjoint()
}

/// `R(θ,φ) = exp{iθ[J_x sin φ − J_y cos φ]}`.
pub fn rotation_operator(ops: &CollectiveOperators, theta: f64, phi: f64) -> Result<CMatrix> {
    check_finite("theta", theta)?;
    check_finite("phi", phi)?;
    let generator = ops.jx() * Complex64::new(phi.sin(), 0.0) - ops.jy() * Complex64::new(phi.cos(), 0.0);
    Ok(hermitian_exp_i(&generator, theta))
}

/// Spin coherent state `|θ,φ⟩ = R(θ,φ)|j,j⟩`, the image of the maximal-weight
/// state under [`rotation_operator`].
pub fn spin_coherent_state(ops: &CollectiveOperators, theta: f64, phi: f64) -> Result<SpinState> {
    let system = ops.system();
    let rotation = rotation_operator(ops, theta, phi)?;
    let top = rotation.column(system.dim() - 1).into_owned();
    SpinState::from_amplitudes(system, top)
}

/// First moments `⟨J_α⟩` and symmetrized second moments `⟨J_αJ_β + J_βJ_α⟩`.
pub fn moments(state: &SpinState, ops: &CollectiveOperators) -> Result<MomentSet> {
    state.check_system(ops.system())?;
    let psi = state.amplitudes();
    let images: [CVector; 3] = [ops.apply(0, psi), ops.apply(1, psi), ops.apply(2, psi)];
    let mut first = [0.0; 3];
    let mut second = [[0.0; 3]; 3];
    for a in 0..3 {
        first[a] = psi.dotc(&images[a]).re;
        for b in a..3 {
            // ⟨ψ|J_aJ_b|ψ⟩ = ⟨J_aψ|J_bψ⟩, so the anticommutator is twice the real part.
            let value = 2.0 * images[a].dotc(&images[b]).re;
            second[a][b] = value;
            second[b][a] = value;
        }
    }
    Ok(MomentSet { first, second })
}
