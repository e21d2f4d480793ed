//! Conformance checking against the exact oracle, accuracy benchmarks
//! and the guest kernels behind them.

pub mod bench;
pub mod conformance;
pub mod conformance_kernel;
pub mod kernels;
pub mod stats;
