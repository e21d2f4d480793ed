use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact real value of a posit computation: a nonzero rational in lowest
/// terms, or one of the two distinguished members zero and NaR.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExactRational {
    Zero,
    NaR,
    /// Never zero; the denominator is positive and coprime to the numerator.
    Finite(BigRational),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse {0:?} as an exact number")]
pub struct ParseExactError(pub String);

impl ExactRational {
    pub fn from_ratio(numer: BigInt, denom: BigInt) -> Self {
        if denom.is_zero() {
            return Self::NaR;
        }
        if numer.is_zero() {
            return Self::Zero;
        }
        Self::Finite(BigRational::new(numer, denom))
    }

    pub fn from_integer(v: impl Into<BigInt>) -> Self {
        Self::from_ratio(v.into(), BigInt::one())
    }

    pub fn from_big_rational(r: BigRational) -> Self {
        if r.is_zero() {
            Self::Zero
        } else {
            Self::Finite(r)
        }
    }

    /// `(-1)^negative * mant * 2^exp`.
    pub fn dyadic(negative: bool, mant: impl Into<BigUint>, exp: i64) -> Self {
        let mant: BigUint = mant.into();
        if mant.is_zero() {
            return Self::Zero;
        }
        let sign = if negative { Sign::Minus } else { Sign::Plus };
        let m = BigInt::from_biguint(sign, mant);
        let one = BigInt::one();
        if exp >= 0 {
            Self::from_ratio(m << exp as usize, one)
        } else {
            Self::from_ratio(m, one << (-exp) as usize)
        }
    }

    /// Exact value of a binary64; NaN and infinities map to NaR.
    pub fn from_f64(x: f64) -> Self {
        if !x.is_finite() {
            return Self::NaR;
        }
        if x == 0.0 {
            return Self::Zero;
        }
        let bits = x.to_bits();
        let negative = bits >> 63 == 1;
        let biased = ((bits >> 52) & 0x7FF) as i64;
        let field = bits & ((1 << 52) - 1);
        let (mant, exp) = if biased == 0 {
            (field, -1074)
        } else {
            (field | (1 << 52), biased - 1075)
        };
        Self::dyadic(negative, mant, exp)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Self::Zero)
    }

    pub fn is_nar(&self) -> bool {
        matches!(self, Self::NaR)
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Self::Finite(r) if r.is_negative())
    }

    pub fn as_ratio(&self) -> Option<&BigRational> {
        match self {
            Self::Finite(r) => Some(r),
            _ => None,
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            Self::Finite(r) => Self::Finite(-r),
            other => other.clone(),
        }
    }

    pub fn abs(&self) -> Self {
        match self {
            Self::Finite(r) => Self::Finite(r.abs()),
            other => other.clone(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        match (self, rhs) {
            (Self::NaR, _) | (_, Self::NaR) => Self::NaR,
            (Self::Zero, x) | (x, Self::Zero) => x.clone(),
            (Self::Finite(a), Self::Finite(b)) => Self::from_big_rational(a + b),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        match (self, rhs) {
            (Self::NaR, _) | (_, Self::NaR) => Self::NaR,
            (Self::Zero, _) | (_, Self::Zero) => Self::Zero,
            (Self::Finite(a), Self::Finite(b)) => Self::Finite(a * b),
        }
    }

    /// Division; any division by zero is NaR.
    pub fn div(&self, rhs: &Self) -> Self {
        match (self, rhs) {
            (Self::NaR, _) | (_, Self::NaR) | (_, Self::Zero) => Self::NaR,
            (Self::Zero, _) => Self::Zero,
            (Self::Finite(a), Self::Finite(b)) => Self::Finite(a / b),
        }
    }

    /// Nearest binary64, ties to even. Exact for every posit of up to
    /// 32 bits with es <= 4.
    pub fn to_f64(&self) -> f64 {
        let r = match self {
            Self::Zero => return 0.0,
            Self::NaR => return f64::NAN,
            Self::Finite(r) => r,
        };
        let negative = r.is_negative();
        let n = r.numer().magnitude();
        let d = r.denom().magnitude();
        let e = floor_log2_ratio(n, d);
        // 64 significant bits of |r| plus a sticky bit jammed into the LSB,
        // then one correctly rounded conversion.
        let shift = 63 - e;
        let (num, den) = if shift >= 0 {
            (n << shift as usize, d.clone())
        } else {
            (n.clone(), d << (-shift) as usize)
        };
        let (q, rem) = num.div_rem(&den);
        let mut m = q.to_u64().expect("64-bit significand");
        if !rem.is_zero() {
            m |= 1;
        }
        let mag = scale_pow2(m as f64, e - 63);
        if negative {
            -mag
        } else {
            mag
        }
    }

    /// Rounded decimal in scientific notation with an explicit exponent
    /// sign, e.g. `3.000865123284026E+40`.
    pub fn to_sci_string(&self) -> String {
        match self {
            Self::Zero => "0.0".to_string(),
            Self::NaR => "NaR".to_string(),
            Self::Finite(_) => format_sci(self.to_f64()),
        }
    }
}

impl PartialOrd for ExactRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order in which NaR sits below every real value, matching the
/// signed-integer order of posit patterns.
impl Ord for ExactRational {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExactRational::*;
        match (self, other) {
            (NaR, NaR) => Ordering::Equal,
            (NaR, _) => Ordering::Less,
            (_, NaR) => Ordering::Greater,
            (Zero, Zero) => Ordering::Equal,
            (Zero, Finite(b)) => {
                if b.is_negative() {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
            (Finite(a), Zero) => {
                if a.is_negative() {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Zero => f.write_str("0"),
            Self::NaR => f.write_str("NaR"),
            Self::Finite(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl FromStr for ExactRational {
    type Err = ParseExactError;

    /// Accepts decimal literals with an optional exponent (`-1.25e-3`),
    /// fractions (`27/10`) and `NaR`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseExactError(s.to_string());
        let t = s.trim();
        if t.eq_ignore_ascii_case("nar") {
            return Ok(Self::NaR);
        }
        if let Some((n, d)) = t.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| err())?;
            let d: BigInt = d.trim().parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            return Ok(Self::from_ratio(n, d));
        }

        let (negative, body) = match t.as_bytes().first() {
            Some(b'-') => (true, &t[1..]),
            Some(b'+') => (false, &t[1..]),
            _ => (false, t),
        };
        let (mantissa, exp10) = match body.find(['e', 'E']) {
            Some(i) => {
                let e: i64 = body[i + 1..].parse().map_err(|_| err())?;
                (&body[..i], e)
            }
            None => (body, 0),
        };
        let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err());
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let digits = format!("{int_part}{frac_part}");
        let mut numer: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| err())?
        };
        if negative {
            numer = -numer;
        }
        let scale = exp10 - frac_part.len() as i64;
        if scale.unsigned_abs() > 100_000 {
            return Err(err());
        }
        let pow = num_traits::pow(BigInt::from(10u32), scale.unsigned_abs() as usize);
        Ok(if scale >= 0 {
            Self::from_ratio(numer * pow, BigInt::one())
        } else {
            Self::from_ratio(numer, pow)
        })
    }
}

/// `floor(log2(n / d))` for positive integers.
pub(crate) fn floor_log2_ratio(n: &BigUint, d: &BigUint) -> i64 {
    let e = n.bits() as i64 - d.bits() as i64;
    let ge = if e >= 0 {
        *n >= (d << e as usize)
    } else {
        (n << (-e) as usize) >= *d
    };
    if ge {
        e
    } else {
        e - 1
    }
}

fn scale_pow2(x: f64, e: i64) -> f64 {
    // Split the scaling so intermediate powers stay finite.
    let e = e.clamp(-2200, 2200) as i32;
    let half = e / 2;
    x * 2f64.powi(half) * 2f64.powi(e - half)
}

/// Shortest round-trip decimal with an explicit exponent sign.
pub fn format_sci(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{x:E}");
    let (mant, exp) = s.split_once('E').expect("scientific format");
    let mant = if mant.contains('.') {
        mant.to_string()
    } else {
        format!("{mant}.0")
    };
    match exp.strip_prefix('-') {
        Some(e) => format!("{mant}E-{e}"),
        None => format!("{mant}E+{exp}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    #[test]
    fn parses_decimals_and_fractions() {
        assert_eq!(q("1.5"), ExactRational::from_ratio(3.into(), 2.into()));
        assert_eq!(q("27/10"), q("2.7"));
        assert_eq!(q("-0.125"), ExactRational::dyadic(true, 1u32, -3));
        assert_eq!(q("3.0E+40"), ExactRational::from_integer(BigInt::from(3) * num_traits::pow(BigInt::from(10), 40)));
        assert_eq!(q("0.0"), ExactRational::Zero);
        assert_eq!(q("nar"), ExactRational::NaR);
        assert!("1.2.3".parse::<ExactRational>().is_err());
        assert!("abc".parse::<ExactRational>().is_err());
        assert!("1/0".parse::<ExactRational>().is_err());
    }

    #[test]
    fn rational_arithmetic() {
        assert_eq!(q("3/2").add(&q("6/5")), q("27/10"));
        assert_eq!(q("1").div(&ExactRational::Zero), ExactRational::NaR);
        assert_eq!(q("1").sub(&q("1")), ExactRational::Zero);
        assert_eq!(q("-3/2").mul(&q("2")), q("-3"));
    }

    #[test]
    fn ordering_puts_nar_first() {
        let mut v = vec![q("1"), ExactRational::NaR, q("-2"), ExactRational::Zero];
        v.sort();
        assert_eq!(v, vec![ExactRational::NaR, q("-2"), ExactRational::Zero, q("1")]);
    }

    #[test]
    fn f64_roundtrip() {
        for x in [1.5, -0.1, 3.0e40, 5e-324, f64::MAX, 15.996093809604645] {
            assert_eq!(ExactRational::from_f64(x).to_f64(), x);
        }
        assert_eq!(q("0.1").to_f64(), 0.1);
        assert_eq!(q("1/3").to_f64(), 1.0 / 3.0);
    }

    #[test]
    fn sci_format() {
        assert_eq!(format_sci(3.000865123284026e40), "3.000865123284026E+40");
        assert_eq!(format_sci(2.0e-75), "2.0E-75");
        assert_eq!(format_sci(1.5), "1.5E+0");
    }

    #[test]
    fn floor_log2() {
        let b = |v: u64| BigUint::from(v);
        assert_eq!(floor_log2_ratio(&b(1), &b(1)), 0);
        assert_eq!(floor_log2_ratio(&b(3), &b(2)), 0);
        assert_eq!(floor_log2_ratio(&b(1), &b(3)), -2);
        assert_eq!(floor_log2_ratio(&b(8), &b(1)), 3);
        assert_eq!(floor_log2_ratio(&b(7), &b(8)), -1);
    }
}
