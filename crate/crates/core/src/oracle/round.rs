//! Exact posit values and correct rounding of exact values, written from
//! the format definition alone (no shared code with the hardware model).

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::{One, Signed};

use super::rational::{floor_log2_ratio, ExactRational};

/// A nonzero posit magnitude as `sig * 2^exp`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Dyadic {
    pub negative: bool,
    pub sig: u64,
    pub exp: i64,
}

/// Interprets a `ps`-bit pattern under the textbook definition.
pub(crate) fn parse_bits(bits: u64, ps: u32, es: u32) -> Option<Dyadic> {
    let mask = (1u64 << ps) - 1;
    let bits = bits & mask;
    if bits == 0 || bits == 1 << (ps - 1) {
        return None;
    }
    let negative = bits >> (ps - 1) == 1;
    let mag = if negative { bits.wrapping_neg() & mask } else { bits };

    // Walk the bits after the sign one at a time.
    let mut i = ps as i64 - 2;
    let bit = |i: i64| (mag >> i) & 1;
    let lead = bit(i);
    let mut run = 0i64;
    while i >= 0 && bit(i) == lead {
        run += 1;
        i -= 1;
    }
    i -= 1; // regime terminator (may run past the end)
    let k = if lead == 1 { run - 1 } else { -run };

    let mut e = 0i64;
    for _ in 0..es {
        e <<= 1;
        if i >= 0 {
            e |= bit(i) as i64;
            i -= 1;
        }
    }
    let frac_len = (i + 1).max(0);
    let frac = if frac_len == 0 { 0 } else { mag & ((1u64 << frac_len) - 1) };
    let sig = (1u64 << frac_len) | frac;
    let exp = k * (1i64 << es) + e - frac_len;
    Some(Dyadic { negative, sig, exp })
}

/// Exact value of a `ps`-bit posit pattern with `es` exponent bits.
pub fn exact_value_bits(bits: u64, ps: u32, es: u32) -> ExactRational {
    let mask = (1u64 << ps) - 1;
    if bits & mask == 1 << (ps - 1) {
        return ExactRational::NaR;
    }
    match parse_bits(bits, ps, es) {
        None => ExactRational::Zero,
        Some(d) => ExactRational::dyadic(d.negative, d.sig, d.exp),
    }
}

/// Compares the positive rational `n/d` with the positive dyadic `sig*2^exp`.
fn cmp_ratio_dyadic(n: &BigUint, d: &BigUint, sig: u64, exp: i64) -> Ordering {
    let mut lhs = n.clone();
    let mut rhs = d * BigUint::from(sig);
    if exp >= 0 {
        rhs <<= exp as usize;
    } else {
        lhs <<= (-exp) as usize;
    }
    lhs.cmp(&rhs)
}

/// Rounds an exact value to the nearest `ps`-bit posit, ties to the even
/// pattern, saturating at maxpos and never rounding a nonzero value to zero.
/// Returns the raw pattern in the low `ps` bits.
pub fn round_to_posit(x: &ExactRational, ps: u32, es: u32) -> u64 {
    let mask = (1u64 << ps) - 1;
    let r = match x {
        ExactRational::Zero => return 0,
        ExactRational::NaR => return 1 << (ps - 1),
        ExactRational::Finite(r) => r,
    };
    let negative = r.is_negative();
    let n = r.numer().magnitude();
    let d = r.denom().magnitude();
    let mag = round_magnitude(n, d, ps, es);
    if negative {
        mag.wrapping_neg() & mask
    } else {
        mag
    }
}

/// Rounds the positive value `n/d` to a positive posit pattern.
pub(crate) fn round_magnitude(n: &BigUint, d: &BigUint, ps: u32, es: u32) -> u64 {
    let maxpos = (1u64 << (ps - 1)) - 1;
    let max_scale = (ps as i64 - 2) << es;
    let scale = floor_log2_ratio(n, d);
    if scale >= max_scale {
        return maxpos;
    }
    if scale < -max_scale {
        return 1;
    }

    // Truncated pattern: the largest posit not above the value.
    let lo = truncate_pattern(n, d, scale, ps, es);
    debug_assert!(lo >= 1 && lo < maxpos);
    debug_assert!({
        let v = parse_bits(lo, ps, es).unwrap();
        cmp_ratio_dyadic(n, d, v.sig, v.exp) != Ordering::Less
    });

    // The midpoint between lo and lo+1 in pattern space is the (ps+1)-bit
    // posit (lo << 1) | 1.
    let mid = parse_bits((lo << 1) | 1, ps + 1, es).expect("midpoint is finite");
    match cmp_ratio_dyadic(n, d, mid.sig, mid.exp) {
        Ordering::Less => lo,
        Ordering::Greater => lo + 1,
        Ordering::Equal => {
            if lo & 1 == 0 {
                lo
            } else {
                lo + 1
            }
        }
    }
}

/// Builds the positive pattern whose value is the truncation of `n/d`
/// (whose binary scale is `scale`) to the bits available at that scale.
fn truncate_pattern(n: &BigUint, d: &BigUint, scale: i64, ps: u32, es: u32) -> u64 {
    let k = scale.div_euclid(1 << es);
    let e = scale.rem_euclid(1 << es) as u64;

    // Regime bits after the sign: k+1 ones then a zero, or -k zeros then a one.
    let (regime, regime_len) = if k >= 0 {
        (((1u64 << (k + 1)) - 1) << 1, k + 2)
    } else {
        (1u64, -k + 1)
    };
    let avail = ps as i64 - 1 - regime_len;
    debug_assert!(avail >= 0);

    // Fraction bits that fit, possibly negative (then e bits are cut too).
    let nf = avail - es as i64;
    let (e_part, frac_part, frac_len) = if nf >= 0 {
        // floor(value * 2^(nf - scale)) has nf+1 bits including the hidden one.
        let sh = nf - scale;
        let q = if sh >= 0 {
            (n << sh as usize) / d
        } else {
            n / (d << (-sh) as usize)
        };
        let q: u64 = q.try_into().expect("fraction fits");
        let frac = q & ((1u64 << nf) - 1);
        (e, frac, nf)
    } else {
        (e >> (-nf), 0, 0)
    };
    let tail = (e_part << frac_len) | frac_part;
    (regime << avail) | tail
}

/// True when `x` is exactly some `ps`-bit posit.
pub fn is_representable(x: &ExactRational, ps: u32, es: u32) -> bool {
    let p = round_to_posit(x, ps, es);
    exact_value_bits(p, ps, es) == *x
}

/// `maxpos` and `minpos` as exact values.
pub fn extremes(ps: u32, es: u32) -> (ExactRational, ExactRational) {
    let s = (ps as i64 - 2) << es;
    (
        ExactRational::dyadic(false, BigUint::one(), s),
        ExactRational::dyadic(false, BigUint::one(), -s),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    #[test]
    fn values_of_simple_patterns() {
        assert_eq!(exact_value_bits(0x4000_0000, 32, 2), q("1"));
        assert_eq!(exact_value_bits(0x4400_0000, 32, 2), q("1.5"));
        assert_eq!(exact_value_bits(0x4400_0000, 32, 3), q("2"));
        assert_eq!(exact_value_bits(0xC000_0000, 32, 2), q("-1"));
        assert_eq!(exact_value_bits(0x8000_0000, 32, 2), ExactRational::NaR);
        assert_eq!(exact_value_bits(0, 32, 2), ExactRational::Zero);
        assert_eq!(exact_value_bits(0x7FFF_FFFF, 32, 2), extremes(32, 2).0);
        assert_eq!(exact_value_bits(1, 32, 3), extremes(32, 3).1);
        // ps=8 es=2: 0x01 is 2^-24, 0x7F is 2^24.
        assert_eq!(exact_value_bits(0x7F, 8, 2), ExactRational::dyadic(false, 1u32, 24));
    }

    #[test]
    fn rounding_golden_values() {
        assert_eq!(round_to_posit(&q("1.2"), 32, 2), 0x4199_999A);
        assert_eq!(round_to_posit(&q("-1"), 32, 2), 0xC000_0000);
        assert_eq!(round_to_posit(&q("1e300"), 32, 2), 0x7FFF_FFFF);
        assert_eq!(round_to_posit(&q("-1e-300"), 32, 2), 0xFFFF_FFFF);
    }

    #[test]
    fn exhaustive_small_roundtrip() {
        for ps in [8u32, 9, 10] {
            for es in 0..=3 {
                for b in 0..(1u64 << ps) {
                    let v = exact_value_bits(b, ps, es);
                    assert_eq!(round_to_posit(&v, ps, es), b, "ps={ps} es={es} b={b:#x}");
                }
            }
        }
    }

    #[test]
    fn midpoints_round_to_even() {
        // Every (ps+1)-bit odd pattern is a midpoint of two ps-bit neighbours.
        for es in 0..=2 {
            for lo in 1u64..0x7E {
                let mid = exact_value_bits((lo << 1) | 1, 9, es);
                let expect = if lo & 1 == 0 { lo } else { lo + 1 };
                assert_eq!(round_to_posit(&mid, 8, es), expect, "es={es} lo={lo:#x}");
            }
        }
    }

    #[test]
    fn representability() {
        assert!(is_representable(&q("1.5"), 32, 2));
        assert!(!is_representable(&q("1.2"), 32, 2));
        assert!(is_representable(&extremes(32, 3).0, 32, 3));
    }
}
