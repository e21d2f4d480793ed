//! Posit arithmetic modelled at the level of a hardware floating-point
//! unit: a shared decoder/encoder, fused multiply-add, non-restoring
//! division and square root, integer conversions, and a runtime-selectable
//! es on the 32-bit datapath. An exact rational oracle checks it all.

pub mod arith;
pub mod error;
pub mod format;
pub mod op;
pub mod oracle;
pub mod scalar;

pub use error::FormatError;
pub use format::{decode, encode, DecodedPosit, EsMode, ExceptionFlags, PositConfig, PositWord, UnroundedResult};
pub use op::{CompareKind, FpuOp, IntRounding, SignInjection};
pub use scalar::{Posit, Real};

/// 8-bit posit, es=2.
pub type P8E2 = Posit<8, 2>;
/// 16-bit posit, es=2.
pub type P16E2 = Posit<16, 2>;
/// 32-bit posit, es=2.
pub type P32E2 = Posit<32, 2>;
/// 32-bit posit, es=3.
pub type P32E3 = Posit<32, 3>;
