use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::ExactRational;
use super::round::{exact_value_bits, round_to_posit};
use crate::format::{ExceptionFlags, PositConfig, PositWord};
use crate::op::{CompareKind, FpuOp, IntRounding, SignInjection};

/// Result of an exact operation. Square roots of non-squares are irrational,
/// so they are kept as their radicand and enclosed on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleValue {
    Exact(ExactRational),
    /// `sqrt(radicand)` for a positive radicand with no rational root.
    Root(ExactRational),
}

impl OracleValue {
    /// Closed dyadic-rational bounds `lo <= v <= hi` with `hi - lo` at most
    /// `2^-precision` relative to the value.
    pub fn enclose(&self, precision: u32) -> (ExactRational, ExactRational) {
        match self {
            OracleValue::Exact(x) => (x.clone(), x.clone()),
            OracleValue::Root(r) => {
                let r = r.as_ratio().expect("positive radicand");
                let n = r.numer().magnitude();
                let d = r.denom().magnitude();
                // sqrt(n/d) = sqrt(n*d)/d; scale n*d by 4^t so the integer
                // root carries about `precision` bits.
                let nd = n * d;
                let t = (u64::from(precision) + 2).saturating_sub(nd.bits() / 2) as usize;
                let s = (nd << (2 * t)).sqrt();
                let den = BigInt::from(d.clone()) << t;
                let lo = ExactRational::from_ratio(BigInt::from(s.clone()), den.clone());
                let hi = ExactRational::from_ratio(BigInt::from(s + 1u32), den);
                (lo, hi)
            }
        }
    }

    /// Correctly rounded posit pattern of this value.
    pub fn round(&self, ps: u32, es: u32) -> u64 {
        match self {
            OracleValue::Exact(x) => round_to_posit(x, ps, es),
            OracleValue::Root(_) => {
                // Rounding is monotone: once both bounds round alike the
                // value in between does too. An irrational value never sits
                // exactly on a rounding boundary, so this terminates.
                let mut precision = 2 * ps + 8;
                loop {
                    let (lo, hi) = self.enclose(precision);
                    let a = round_to_posit(&lo, ps, es);
                    if a == round_to_posit(&hi, ps, es) {
                        return a;
                    }
                    precision *= 2;
                }
            }
        }
    }
}

/// Square root; negative radicands and NaR give NaR.
pub fn exact_sqrt(x: &ExactRational) -> OracleValue {
    let r = match x {
        ExactRational::Zero => return OracleValue::Exact(ExactRational::Zero),
        ExactRational::NaR => return OracleValue::Exact(ExactRational::NaR),
        ExactRational::Finite(r) if r.is_negative() => return OracleValue::Exact(ExactRational::NaR),
        ExactRational::Finite(r) => r,
    };
    let n = r.numer().magnitude();
    let d = r.denom().magnitude();
    let (sn, sd) = (n.sqrt(), d.sqrt());
    if &sn * &sn == *n && &sd * &sd == *d {
        OracleValue::Exact(ExactRational::from_ratio(sn.into(), sd.into()))
    } else {
        OracleValue::Root(x.clone())
    }
}

fn value(w: u32, cfg: &PositConfig) -> ExactRational {
    exact_value_bits(u64::from(w), cfg.ps(), cfg.es())
}

fn word(x: &ExactRational, ps: u32, es: u32) -> PositWord {
    PositWord(round_to_posit(x, ps, es) as u32)
}

/// Rounds `x` to an integer under `rounding`.
fn round_integer(x: &ExactRational, rounding: IntRounding) -> BigInt {
    let r = match x {
        ExactRational::Finite(r) => r,
        _ => return BigInt::zero(),
    };
    let (q, rem) = r.numer().div_mod_floor(r.denom());
    if rem.is_zero() {
        return q;
    }
    match rounding {
        IntRounding::TowardZero => {
            if r.is_negative() {
                q + 1
            } else {
                q
            }
        }
        IntRounding::NearestEven => {
            let twice: BigInt = rem * 2;
            match twice.cmp(r.denom()) {
                std::cmp::Ordering::Less => q,
                std::cmp::Ordering::Greater => q + 1,
                std::cmp::Ordering::Equal => {
                    if q.is_even() {
                        q
                    } else {
                        q + 1
                    }
                }
            }
        }
    }
}

/// Exact reference semantics of `op` on raw operand words under the
/// `(ps, es)` format of `cfg`. The datapath style of `cfg` is ignored.
pub fn reference(op: FpuOp, operands: &[u32], cfg: &PositConfig) -> (PositWord, ExceptionFlags) {
    assert!(operands.len() >= op.arity(), "{op} needs {} operands", op.arity());
    let (ps, es) = (cfg.ps(), cfg.es());
    let mask = cfg.mask();
    let v = |i: usize| value(operands[i], cfg);
    let none = ExceptionFlags::NONE;
    let fused = |neg_product: bool, neg_addend: bool| {
        let mut p = v(0).mul(&v(1));
        if neg_product {
            p = p.neg();
        }
        let mut c = v(2);
        if neg_addend {
            c = c.neg();
        }
        (word(&p.add(&c), ps, es), none)
    };

    match op {
        FpuOp::Add => (word(&v(0).add(&v(1)), ps, es), none),
        FpuOp::Sub => (word(&v(0).sub(&v(1)), ps, es), none),
        FpuOp::Mul => (word(&v(0).mul(&v(1)), ps, es), none),
        FpuOp::MulAdd => fused(false, false),
        FpuOp::MulSub => fused(false, true),
        FpuOp::NegMulSub => fused(true, false),
        FpuOp::NegMulAdd => fused(true, true),
        FpuOp::Div => {
            let flags = if v(1).is_zero() { ExceptionFlags::DZ } else { none };
            (word(&v(0).div(&v(1)), ps, es), flags)
        }
        FpuOp::Sqrt => (PositWord(exact_sqrt(&v(0)).round(ps, es) as u32), none),
        FpuOp::IntToPosit { unsigned } => {
            let raw = operands[0] & mask;
            let int = if unsigned {
                BigInt::from(raw)
            } else {
                BigInt::from(cfg.to_signed(PositWord(raw)))
            };
            (word(&ExactRational::from_integer(int), ps, es), none)
        }
        FpuOp::PositToInt { unsigned, rounding } => {
            let x = v(0);
            if x.is_nar() {
                return (PositWord(1 << (ps - 1)), none);
            }
            let i = round_integer(&x, rounding);
            let (lo, hi) = if unsigned {
                (BigInt::zero(), (BigInt::one() << ps) - 1)
            } else {
                (-(BigInt::one() << (ps - 1)), (BigInt::one() << (ps - 1)) - 1)
            };
            let c = i.clamp(lo, hi);
            let bits = if c.is_negative() {
                (BigInt::one() << ps) + c
            } else {
                c
            };
            (PositWord(u32::try_from(bits).expect("fits in ps bits")), none)
        }
        FpuOp::Compare(kind) => {
            let (a, b) = (v(0), v(1));
            let w = match kind {
                CompareKind::Eq => PositWord(u32::from(a == b)),
                CompareKind::Lt => PositWord(u32::from(a < b)),
                CompareKind::Le => PositWord(u32::from(a <= b)),
                CompareKind::Min => PositWord(operands[if b < a { 1 } else { 0 }] & mask),
                CompareKind::Max => PositWord(operands[if b > a { 1 } else { 0 }] & mask),
            };
            (w, none)
        }
        FpuOp::SignInject(kind) => {
            let a = v(0);
            if a.is_nar() || a.is_zero() {
                return (PositWord(operands[0] & mask), none);
            }
            let b = v(1);
            let b_neg = b.is_nar() || b.is_negative();
            let neg = match kind {
                SignInjection::Copy => b_neg,
                SignInjection::Negate => !b_neg,
                SignInjection::Xor => a.is_negative() != b_neg,
            };
            let mag = a.abs();
            (word(&if neg { mag.neg() } else { mag }, ps, es), none)
        }
        FpuOp::Classify => {
            let a = v(0);
            let bit = if a.is_nar() {
                9
            } else if a.is_zero() {
                4
            } else if a < ExactRational::Zero {
                1
            } else {
                6
            };
            (PositWord(1 << bit), none)
        }
        FpuOp::ConvertEs { to_es } => (word(&v(0), ps, to_es), none),
    }
}
