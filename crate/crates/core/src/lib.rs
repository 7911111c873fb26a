//! Quantum kicked top simulated as a permutation-symmetric register of qubits.
//!
//! The crate covers the quantum side (collective spin operators, coherent
//! states, Floquet evolution), the pairwise and bipartite entanglement of two
//! qubits drawn from the register, the classical kicked-top map with its
//! Lyapunov exponents, and drivers for the standard numerical experiments.

pub mod classical;
pub mod entanglement;
pub mod error;
pub mod experiments;
pub mod floquet;
pub mod quadrature;
pub mod spin;

pub use classical::{
    global_lyapunov, jacobian, kick, kick_with_drift, lyapunov, lyapunov_with_drift, poincare_section, trajectory,
    GlobalLyapunov, LyapunovConfig, PhasePoint, TangentVector,
};
pub use entanglement::{concurrence, linear_entropy, reduce_to_pair, MomentSet, TwoQubitDensity};
pub use error::{Error, Result};
pub use experiments::{
    entangling_power, kappa_sweep, phase_space_scan, time_averaged, time_series, KickedTop, PowerCurve, PowerPoint,
    ScanResult, SweepConfig, TimeAverage, TimeSeries,
};
pub use floquet::{evolve, floquet_operator, FloquetOperator, DEFAULT_KICK_ANGLE};
pub use quadrature::SphereGrid;
pub use spin::{
    build_collective_ops, dicke_state, moments, rotation_operator, spin_coherent_state, CollectiveOperators, SpinState,
    SpinSystem,
};
