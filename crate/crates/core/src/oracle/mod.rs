//! Arbitrary-precision reference for posit arithmetic.
//!
//! Values are exact rationals; results are produced by rounding the exact
//! value directly from the format definition. Nothing here shares code with
//! the hardware-style units in [`crate::arith`], so agreement between the
//! two is meaningful evidence of correctness.

mod batch;
mod ops;
mod rational;
mod round;

pub use batch::{eval_line, run_batch, BatchError};
pub use ops::{exact_sqrt, reference, OracleValue};
pub use rational::{format_sci, ExactRational, ParseExactError};
pub use round::{exact_value_bits, extremes, is_representable, round_to_posit};

use crate::format::{PositConfig, PositWord};

/// Exact value of a word under the `(ps, es)` format of `cfg`.
pub fn exact_value(p: PositWord, cfg: &PositConfig) -> ExactRational {
    exact_value_bits(u64::from(p.0), cfg.ps(), cfg.es())
}

/// Correctly rounded word for an exact value.
pub fn round_exact(x: &ExactRational, cfg: &PositConfig) -> PositWord {
    PositWord(round_to_posit(x, cfg.ps(), cfg.es()) as u32)
}
