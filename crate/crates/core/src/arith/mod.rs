//! Hardware-style posit arithmetic units. Every unit decodes its operands
//! with [`crate::format::decode`], computes a wide unrounded result, and
//! rounds once through [`crate::format::encode`].

mod compare;
mod convert;
mod div;
mod fma;
pub mod nonrestoring;
mod sqrt;

pub use compare::{classify, compare, sign_inject};
pub use convert::{convert_es, int_to_posit, posit_to_int};
pub use div::{div, div_unrounded};
pub use fma::{add, chk_add_of, chk_mul_of, fma, fma_unrounded, mul, normalize, sub, FmaControl, FB};
pub use sqrt::{sqrt, sqrt_unrounded};

use crate::format::{ExceptionFlags, PositConfig, PositWord};
use crate::op::FpuOp;

/// Runs `op` on raw operand words.
///
/// # Panics
///
/// If fewer than `op.arity()` operands are given, or if a `ConvertEs`
/// target is not selectable on this datapath.
pub fn execute(op: FpuOp, operands: &[u32], cfg: &PositConfig) -> (PositWord, ExceptionFlags) {
    assert!(operands.len() >= op.arity(), "{op} needs {} operands", op.arity());
    let w = |i: usize| PositWord(operands[i] & cfg.mask());
    let none = ExceptionFlags::NONE;
    match op {
        FpuOp::Add => add(w(0), w(1), cfg),
        FpuOp::Sub => sub(w(0), w(1), cfg),
        FpuOp::Mul => mul(w(0), w(1), cfg),
        FpuOp::MulAdd => fma(w(0), w(1), w(2), FmaControl::MADD, cfg),
        FpuOp::MulSub => fma(w(0), w(1), w(2), FmaControl::MSUB, cfg),
        FpuOp::NegMulSub => fma(w(0), w(1), w(2), FmaControl::NMSUB, cfg),
        FpuOp::NegMulAdd => fma(w(0), w(1), w(2), FmaControl::NMADD, cfg),
        FpuOp::Div => div(w(0), w(1), cfg),
        FpuOp::Sqrt => sqrt(w(0), cfg),
        FpuOp::IntToPosit { unsigned } => (int_to_posit(operands[0], unsigned, cfg), none),
        FpuOp::PositToInt { unsigned, rounding } => {
            (PositWord(posit_to_int(w(0), unsigned, rounding, cfg)), none)
        }
        FpuOp::Compare(kind) => (compare(w(0), w(1), kind, cfg), none),
        FpuOp::SignInject(kind) => (sign_inject(w(0), w(1), kind, cfg), none),
        FpuOp::Classify => (classify(w(0), cfg), none),
        FpuOp::ConvertEs { to_es } => {
            let to = cfg
                .with_es(to_es)
                .unwrap_or_else(|e| panic!("cannot convert to es={to_es}: {e}"));
            (convert_es(w(0), cfg, &to), none)
        }
    }
}
