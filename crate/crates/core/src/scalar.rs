//! Scalar types for generic numeric code: `f32`, `f64` and fixed-format
//! posits share the [`Real`] interface.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::arith;
use crate::format::{decode, encode, PositConfig, PositWord, UnroundedResult};
use crate::op::IntRounding;

/// The arithmetic a numeric kernel needs from its scalar type.
pub trait Real:
    Copy
    + PartialOrd
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Nearest value of this type.
    fn from_f64(x: f64) -> Self;
    fn from_i32(x: i32) -> Self;
    /// Exact for posits of up to 32 bits.
    fn to_f64(self) -> f64;
    fn sqrt(self) -> Self;
    /// `self * a + b` with one rounding.
    fn mul_add(self, a: Self, b: Self) -> Self;
    fn abs(self) -> Self {
        if self < Self::zero() {
            -self
        } else {
            self
        }
    }
}

impl Real for f32 {
    fn from_f64(x: f64) -> Self {
        x as f32
    }
    fn from_i32(x: i32) -> Self {
        x as f32
    }
    fn to_f64(self) -> f64 {
        f64::from(self)
    }
    fn sqrt(self) -> Self {
        f32::sqrt(self)
    }
    fn mul_add(self, a: Self, b: Self) -> Self {
        f32::mul_add(self, a, b)
    }
}

impl Real for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn from_i32(x: i32) -> Self {
        f64::from(x)
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn mul_add(self, a: Self, b: Self) -> Self {
        f64::mul_add(self, a, b)
    }
}

/// A posit of width `PS` with `ES` exponent bits, computed by the
/// hardware-style units on a fixed-es datapath.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Posit<const PS: u32, const ES: u32>(PositWord);

impl<const PS: u32, const ES: u32> Posit<PS, ES> {
    pub fn config() -> PositConfig {
        PositConfig::fixed(PS, ES).expect("valid posit format")
    }

    pub fn from_bits(bits: u32) -> Self {
        Self(PositWord(bits & Self::config().mask()))
    }

    pub fn to_bits(self) -> u32 {
        self.0 .0
    }

    pub fn word(self) -> PositWord {
        self.0
    }

    pub fn nar() -> Self {
        Self(Self::config().nar())
    }

    pub fn maxpos() -> Self {
        Self(Self::config().maxpos())
    }

    pub fn minpos() -> Self {
        Self(Self::config().minpos())
    }

    pub fn is_nar(self) -> bool {
        Self::config().is_nar(self.0)
    }

    /// Rounds to the nearest integer, ties to even, saturating.
    pub fn to_i32(self) -> i32 {
        let c = Self::config();
        c.to_signed(PositWord(arith::posit_to_int(self.0, false, IntRounding::NearestEven, &c)))
    }
}

impl<const PS: u32, const ES: u32> fmt::Debug for Posit<PS, ES> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{PS}E{ES}({:#x} = {})", self.0 .0, self.to_f64())
    }
}

impl<const PS: u32, const ES: u32> fmt::Display for Posit<PS, ES> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_nar() {
            f.write_str("NaR")
        } else {
            fmt::Display::fmt(&self.to_f64(), f)
        }
    }
}

impl<const PS: u32, const ES: u32> PartialOrd for Posit<PS, ES> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Signed-pattern order: NaR first, then the reals ascending.
impl<const PS: u32, const ES: u32> Ord for Posit<PS, ES> {
    fn cmp(&self, other: &Self) -> Ordering {
        let c = Self::config();
        c.to_signed(self.0).cmp(&c.to_signed(other.0))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $f:path) => {
        impl<const PS: u32, const ES: u32> $trait for Posit<PS, ES> {
            type Output = Self;
            fn $method(self, rhs: Self) -> Self {
                Self($f(self.0, rhs.0, &Self::config()).0)
            }
        }
    };
}

binop!(Add, add, arith::add);
binop!(Sub, sub, arith::sub);
binop!(Mul, mul, arith::mul);
binop!(Div, div, arith::div);

impl<const PS: u32, const ES: u32> Neg for Posit<PS, ES> {
    type Output = Self;
    fn neg(self) -> Self {
        Self(Self::config().negate(self.0))
    }
}

impl<const PS: u32, const ES: u32> Zero for Posit<PS, ES> {
    fn zero() -> Self {
        Self(PositWord(0))
    }
    fn is_zero(&self) -> bool {
        self.0 .0 == 0
    }
}

impl<const PS: u32, const ES: u32> One for Posit<PS, ES> {
    fn one() -> Self {
        Self(Self::config().one())
    }
}

impl<const PS: u32, const ES: u32> Real for Posit<PS, ES> {
    /// NaN and infinities map to NaR.
    fn from_f64(x: f64) -> Self {
        if !x.is_finite() {
            return Self::nar();
        }
        if x == 0.0 {
            return Self::zero();
        }
        let bits = x.to_bits();
        let biased = ((bits >> 52) & 0x7FF) as i32;
        let field = bits & ((1 << 52) - 1);
        let (mant, exp) = if biased == 0 {
            (field, -1074)
        } else {
            (field | (1 << 52), biased - 1075)
        };
        let width = 64 - mant.leading_zeros();
        let u = UnroundedResult::finite(x < 0.0, exp + width as i32 - 1, u128::from(mant), width, false);
        Self(encode(&u, &Self::config()).0)
    }

    fn from_i32(x: i32) -> Self {
        Self(arith::int_to_posit(x as u32, false, &Self::config()))
    }

    /// NaR maps to NaN.
    fn to_f64(self) -> f64 {
        let d = decode(self.0, &Self::config());
        if d.is_nar {
            return f64::NAN;
        }
        if d.is_zero {
            return 0.0;
        }
        let mag = d.frac as f64 * 2f64.powi(d.exp - (d.frac_width as i32 - 1));
        if d.sign {
            -mag
        } else {
            mag
        }
    }

    fn sqrt(self) -> Self {
        Self(arith::sqrt(self.0, &Self::config()).0)
    }

    fn mul_add(self, a: Self, b: Self) -> Self {
        Self(arith::fma(self.0, a.0, b.0, arith::FmaControl::MADD, &Self::config()).0)
    }
}
