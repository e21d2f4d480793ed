//! Non-restoring integer division and square root, one result bit per step
//! as the iterative hardware units produce them.

/// Divides the low `bits` bits of `n` by `d`, returning quotient and
/// remainder. Requires `d > 0`, `bits <= 126` and `d < 2^125`.
pub fn divide(n: u128, d: u128, bits: u32) -> (u128, u128) {
    assert!(d > 0, "division by zero");
    debug_assert!(bits <= 126 && d < 1 << 125);
    let d = d as i128;
    let mut r: i128 = 0;
    let mut q: u128 = 0;
    for i in (0..bits).rev() {
        let bit = ((n >> i) & 1) as i128;
        // A negative partial remainder is repaired by adding instead of
        // subtracting in the next step rather than by restoring it now.
        r = if r >= 0 { ((r << 1) | bit) - d } else { ((r << 1) | bit) + d };
        q = (q << 1) | u128::from(r >= 0);
    }
    if r < 0 {
        r += d;
    }
    (q, r as u128)
}

/// Integer square root of the low `2*pairs` bits of `x`, returning root and
/// remainder `x - root^2`. Requires `pairs <= 62`.
pub fn sqrt(x: u128, pairs: u32) -> (u128, u128) {
    debug_assert!(pairs <= 62);
    let mut r: i128 = 0;
    let mut q: u128 = 0;
    for i in (0..pairs).rev() {
        let pair = ((x >> (2 * i)) & 3) as i128;
        let qi = q as i128;
        r = if r >= 0 {
            ((r << 2) | pair) - ((qi << 2) | 1)
        } else {
            ((r << 2) | pair) + ((qi << 2) | 3)
        };
        q = (q << 1) | u128::from(r >= 0);
    }
    if r < 0 {
        r += ((q as i128) << 1) | 1;
    }
    (q, r as u128)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_cases() {
        assert_eq!(divide(7, 2, 8), (3, 1));
        assert_eq!(divide(0, 5, 8), (0, 0));
        assert_eq!(sqrt(16, 4), (4, 0));
        assert_eq!(sqrt(17, 4), (4, 1));
        assert_eq!(sqrt(0, 4), (0, 0));
        assert_eq!(sqrt(255, 4), (15, 30));
    }

    proptest! {
        #[test]
        fn divide_matches_hardware_division(n in any::<u64>(), d in 1u64..) {
            let (q, r) = divide(u128::from(n), u128::from(d), 64);
            prop_assert_eq!(q, u128::from(n / d));
            prop_assert_eq!(r, u128::from(n % d));
        }

        #[test]
        fn wide_divide(n in any::<u128>(), d in 1u128..(1u128 << 100)) {
            let n = n >> 8;
            let (q, r) = divide(n, d, 120);
            prop_assert_eq!(q, n / d);
            prop_assert_eq!(r, n % d);
        }

        #[test]
        fn sqrt_matches_isqrt(x in any::<u64>()) {
            let (q, r) = sqrt(u128::from(x), 32);
            let want = u128::from(x).isqrt();
            prop_assert_eq!(q, want);
            prop_assert_eq!(r, u128::from(x) - want * want);
        }
    }
}
