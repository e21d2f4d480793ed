//! Operation vocabulary shared by the arithmetic units, the exact oracle,
//! the instruction decoder and the conformance harness.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Rounding applied by posit-to-integer conversion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntRounding {
    /// Round to nearest, ties to even.
    NearestEven,
    /// Round toward zero.
    TowardZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CompareKind {
    Eq,
    Lt,
    Le,
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignInjection {
    /// Sign of the second operand.
    Copy,
    /// Opposite of the sign of the second operand.
    Negate,
    /// Xor of both signs.
    Xor,
}

/// One posit operation. Operands and result are raw `ps`-bit words, except
/// for the integer side of the conversions, which is a `ps`-bit integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FpuOp {
    Add,
    Sub,
    Mul,
    /// `a*b + c`
    MulAdd,
    /// `a*b - c`
    MulSub,
    /// `-(a*b) + c`
    NegMulSub,
    /// `-(a*b) - c`
    NegMulAdd,
    Div,
    Sqrt,
    IntToPosit { unsigned: bool },
    PositToInt { unsigned: bool, rounding: IntRounding },
    Compare(CompareKind),
    SignInject(SignInjection),
    Classify,
    ConvertEs { to_es: u32 },
}

impl FpuOp {
    /// Every operation; `ConvertEs` appears once per target in `es_targets`.
    pub fn all(es_targets: &[u32]) -> Vec<FpuOp> {
        use FpuOp::*;
        let mut v = vec![
            Add,
            Sub,
            Mul,
            MulAdd,
            MulSub,
            NegMulSub,
            NegMulAdd,
            Div,
            Sqrt,
            IntToPosit { unsigned: false },
            IntToPosit { unsigned: true },
        ];
        for unsigned in [false, true] {
            for rounding in [IntRounding::NearestEven, IntRounding::TowardZero] {
                v.push(PositToInt { unsigned, rounding });
            }
        }
        for k in [CompareKind::Eq, CompareKind::Lt, CompareKind::Le, CompareKind::Min, CompareKind::Max] {
            v.push(Compare(k));
        }
        for s in [SignInjection::Copy, SignInjection::Negate, SignInjection::Xor] {
            v.push(SignInject(s));
        }
        v.push(Classify);
        v.extend(es_targets.iter().map(|&to_es| ConvertEs { to_es }));
        v
    }

    pub fn arity(self) -> usize {
        use FpuOp::*;
        match self {
            MulAdd | MulSub | NegMulSub | NegMulAdd => 3,
            Add | Sub | Mul | Div | Compare(_) | SignInject(_) => 2,
            Sqrt | IntToPosit { .. } | PositToInt { .. } | Classify | ConvertEs { .. } => 1,
        }
    }

    /// True for the fused multiply-add family and the operations built on it.
    pub fn uses_fma(self) -> bool {
        use FpuOp::*;
        matches!(self, Add | Sub | Mul | MulAdd | MulSub | NegMulSub | NegMulAdd)
    }

    pub fn name(self) -> String {
        use FpuOp::*;
        match self {
            Add => "add".into(),
            Sub => "sub".into(),
            Mul => "mul".into(),
            MulAdd => "madd".into(),
            MulSub => "msub".into(),
            NegMulSub => "nmsub".into(),
            NegMulAdd => "nmadd".into(),
            Div => "div".into(),
            Sqrt => "sqrt".into(),
            IntToPosit { unsigned: false } => "cvt.p.w".into(),
            IntToPosit { unsigned: true } => "cvt.p.wu".into(),
            PositToInt { unsigned, rounding } => format!(
                "cvt.{}.p{}",
                if unsigned { "wu" } else { "w" },
                if rounding == IntRounding::TowardZero { ".rtz" } else { "" }
            ),
            Compare(k) => match k {
                CompareKind::Eq => "eq",
                CompareKind::Lt => "lt",
                CompareKind::Le => "le",
                CompareKind::Min => "min",
                CompareKind::Max => "max",
            }
            .into(),
            SignInject(s) => match s {
                SignInjection::Copy => "sgnj",
                SignInjection::Negate => "sgnjn",
                SignInjection::Xor => "sgnjx",
            }
            .into(),
            Classify => "class".into(),
            ConvertEs { to_es } => format!("cvt.es{to_es}"),
        }
    }
}

impl fmt::Display for FpuOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown operation {0:?}")]
pub struct UnknownOp(pub String);

impl FromStr for FpuOp {
    type Err = UnknownOp;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        if let Some(es) = lower.strip_prefix("cvt.es") {
            return es
                .parse()
                .map(|to_es| FpuOp::ConvertEs { to_es })
                .map_err(|_| UnknownOp(s.to_string()));
        }
        FpuOp::all(&[])
            .into_iter()
            .find(|op| op.name() == lower)
            .ok_or_else(|| UnknownOp(s.to_string()))
    }
}
