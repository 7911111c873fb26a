//! The kicked-top Floquet operator and stroboscopic evolution.

use nalgebra::linalg::Schur;
use num_complex::Complex64;

use crate::error::{check_finite, Error, Result};
use crate::spin::{hermitian_exp_i, CMatrix, CVector, CollectiveOperators, SpinState, SpinSystem};

/// Kick angle used throughout unless configured otherwise.
pub const DEFAULT_KICK_ANGLE: f64 = std::f64::consts::FRAC_PI_2;

const SCHUR_EPS: f64 = 1e-15;
const SCHUR_MAX_ITER: usize = 0;

/// One period of the kicked top: a turn `exp(−i p J_y)` followed by a twist
/// `exp(−i κ J_z² / 2j)`, together with its eigenphase decomposition.
#[derive(Debug, Clone)]
pub struct FloquetOperator {
    system: SpinSystem,
    kappa: f64,
    kick_angle: f64,
    matrix: CMatrix,
    eigenphases: Vec<f64>,
    eigenvectors: CMatrix,
}

impl FloquetOperator {
    pub fn new(ops: &CollectiveOperators, kappa: f64, kick_angle: f64) -> Result<Self> {
        check_finite("kappa", kappa)?;
        check_finite("p", kick_angle)?;
        if kappa < 0.0 {
            return Err(Error::InvalidParameter {
                name: "kappa",
                reason: format!("must be non-negative, got {kappa}"),
            });
        }
        let system = ops.system();
        let j = system.j();
        let turn = hermitian_exp_i(ops.jy(), -kick_angle);
        // The twist is diagonal, so D·turn only rescales rows.
        let mut matrix = turn;
        for (k, mut row) in matrix.row_iter_mut().enumerate() {
            let m = system.m_at(k);
            let twist = Complex64::from_polar(1.0, -kappa * m * m / (2.0 * j));
            row *= twist;
        }

        // F is normal, so its complex Schur form is diagonal up to roundoff and
        // the Schur vectors are an orthonormal eigenbasis, degenerate or not.
        let schur = Schur::try_new(matrix.clone(), SCHUR_EPS, SCHUR_MAX_ITER)
            .ok_or(Error::NoConvergence("Floquet Schur decomposition"))?;
        let (eigenvectors, triangular) = schur.unpack();
        let eigenphases = triangular.diagonal().iter().map(|z| z.arg()).collect();

        Ok(Self { system, kappa, kick_angle, matrix, eigenphases, eigenvectors })
    }

    pub fn system(&self) -> SpinSystem {
        self.system
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn kick_angle(&self) -> f64 {
        self.kick_angle
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Eigenphases `Φ_m` with `F|Φ_m⟩ = exp(iΦ_m)|Φ_m⟩`, aligned with the
    /// columns of [`eigenvectors`](Self::eigenvectors).
    pub fn eigenphases(&self) -> &[f64] {
        &self.eigenphases
    }

    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    /// Applies `F` once by direct multiplication.
    pub fn apply(&self, state: &SpinState) -> Result<SpinState> {
        state.check_system(self.system)?;
        Ok(SpinState::from_normalized(self.system, &self.matrix * state.amplitudes()))
    }

    /// `F^n |ψ⟩` through the eigenphase expansion.
    pub fn evolve(&self, state: &SpinState, kicks: u64) -> Result<SpinState> {
        Ok(self.propagator(state)?.at(kicks))
    }

    /// Projects `state` onto the eigenbasis once so that many kick counts can
    /// be evaluated cheaply.
    pub fn propagator(&self, state: &SpinState) -> Result<Propagator<'_>> {
        state.check_system(self.system)?;
        let coefficients = self.eigenvectors.ad_mul(state.amplitudes());
        Ok(Propagator { floquet: self, coefficients })
    }
}

/// Builds the Floquet operator for chaoticity `kappa` and kick angle `p`.
pub fn floquet_operator(ops: &CollectiveOperators, kappa: f64, p: f64) -> Result<FloquetOperator> {
    FloquetOperator::new(ops, kappa, p)
}

/// `F^n |ψ(0)⟩`.
pub fn evolve(state: &SpinState, floquet: &FloquetOperator, kicks: u64) -> Result<SpinState> {
    floquet.evolve(state, kicks)
}

/// An initial state expanded in the Floquet eigenbasis.
#[derive(Debug, Clone)]
pub struct Propagator<'a> {
    floquet: &'a FloquetOperator,
    coefficients: CVector,
}

impl Propagator<'_> {
    /// State after `kicks` periods.
    pub fn at(&self, kicks: u64) -> SpinState {
        let n = kicks as f64;
        let rotated = CVector::from_iterator(
            self.coefficients.len(),
            self.coefficients
                .iter()
                .zip(&self.floquet.eigenphases)
                .map(|(c, phase)| c * Complex64::from_polar(1.0, n * phase)),
        );
        SpinState::from_normalized(self.floquet.system, &self.floquet.eigenvectors * rotated)
    }
}
