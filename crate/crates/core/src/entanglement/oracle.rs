//! Dense partial-trace reference for the two-qubit reduction.
//!
//! Expands a Dicke-basis state into the full `2^N` product basis and traces
//! out qubits `3..N` explicitly. Exponential in `N`; meant for validation.

use num_complex::Complex64;

use super::{Matrix4c, TwoQubitDensity};
use crate::error::{Error, Result};
use crate::spin::SpinState;

pub const MAX_ORACLE_QUBITS: usize = 12;

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Amplitudes over computational states; qubit 1 is the most significant bit
/// and a set bit means spin down.
pub fn expand_to_qubits(state: &SpinState) -> Result<Vec<Complex64>> {
    let n = state.system().n_qubits();
    if n > MAX_ORACLE_QUBITS {
        return Err(Error::TooLargeForOracle(n));
    }
    let amplitudes = state.amplitudes();
    let mut full = vec![Complex64::new(0.0, 0.0); 1 << n];
    for (index, slot) in full.iter_mut().enumerate() {
        let downs = index.count_ones() as usize;
        // |j,m⟩ has N/2 + m up spins, so basis index k = ups = N - downs.
        let k = n - downs;
        *slot = amplitudes[k] / binomial(n, downs).sqrt();
    }
    Ok(full)
}

/// `ρ₁₂` by explicit partial trace over all but the first two qubits.
pub fn pair_oracle(state: &SpinState) -> Result<TwoQubitDensity> {
    let n = state.system().n_qubits();
    if n < 2 {
        return Err(Error::TooFewQubits { got: n, min: 2 });
    }
    let full = expand_to_qubits(state)?;
    let rest = 1usize << (n - 2);
    let mut matrix = Matrix4c::zeros();
    for r in 0..4 {
        for c in 0..4 {
            let mut acc = Complex64::new(0.0, 0.0);
            for e in 0..rest {
                acc += full[r * rest + e] * full[c * rest + e].conj();
            }
            matrix[(r, c)] = acc;
        }
    }
    Ok(TwoQubitDensity::new_unchecked(matrix))
}
