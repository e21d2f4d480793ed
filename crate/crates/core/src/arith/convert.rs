use crate::format::{decode, encode, PositConfig, PositWord, UnroundedResult};
use crate::op::IntRounding;

/// Converts a `ps`-bit integer (signed or unsigned) to the nearest posit.
pub fn int_to_posit(x: u32, unsigned: bool, cfg: &PositConfig) -> PositWord {
    let ps = cfg.ps();
    let raw = x & cfg.mask();
    let (sign, mag) = if unsigned {
        (false, u64::from(raw))
    } else {
        let v = i64::from(cfg.to_signed(PositWord(raw)));
        (v < 0, v.unsigned_abs())
    };
    if mag == 0 {
        return cfg.zero();
    }
    debug_assert!(mag < 1 << ps);
    // Position of the leading one gives the scale directly.
    let rexp = 63 - mag.leading_zeros();
    let u = UnroundedResult::finite(sign, rexp as i32, u128::from(mag), rexp + 1, false);
    encode(&u, cfg).0
}

/// Converts a posit to a `ps`-bit integer, saturating at the range limits.
/// NaR converts to `2^(ps-1)` (the most negative signed value).
pub fn posit_to_int(p: PositWord, unsigned: bool, rounding: IntRounding, cfg: &PositConfig) -> u32 {
    let ps = cfg.ps();
    let d = decode(p, cfg);
    if d.is_nar {
        return 1 << (ps - 1);
    }
    if d.is_zero {
        return 0;
    }

    let (min, max): (i128, i128) = if unsigned {
        (0, (1i128 << ps) - 1)
    } else {
        (-(1i128 << (ps - 1)), (1i128 << (ps - 1)) - 1)
    };
    let clamp = |v: i128| (v.clamp(min, max) as u128 as u32) & cfg.mask();

    // Anything at or above 2^ps saturates regardless of rounding.
    if d.exp > ps as i32 {
        return clamp(if d.sign { i128::MIN } else { i128::MAX });
    }

    let frac = u128::from(d.frac);
    let shift = d.exp - (d.frac_width as i32 - 1);
    let mag = if shift >= 0 {
        frac << shift
    } else {
        let drop = (-shift) as u32;
        if drop > 127 {
            0
        } else {
            let int = frac >> drop;
            let round = (frac >> (drop - 1)) & 1 == 1;
            let sticky = frac & ((1u128 << (drop - 1)) - 1) != 0;
            let up = match rounding {
                IntRounding::NearestEven => round && (sticky || int & 1 == 1),
                IntRounding::TowardZero => false,
            };
            int + u128::from(up)
        }
    };
    let v = mag as i128;
    clamp(if d.sign { -v } else { v })
}

/// Re-encodes `p` from the es of `from` to the es of `to` (same width).
pub fn convert_es(p: PositWord, from: &PositConfig, to: &PositConfig) -> PositWord {
    debug_assert_eq!(from.ps(), to.ps());
    encode(&decode(p, from).lift(), to).0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c() -> PositConfig {
        PositConfig::fixed(32, 2).unwrap()
    }

    #[test]
    fn integers_in() {
        let c = c();
        assert_eq!(int_to_posit(0, false, &c), PositWord(0));
        assert_eq!(int_to_posit(1, false, &c), c.one());
        assert_eq!(int_to_posit(-1i32 as u32, false, &c), c.negate(c.one()));
        assert_eq!(int_to_posit(3, true, &c), PositWord(0x4C00_0000));
        // 2^31 and -2^31 are exact.
        let big = int_to_posit(0x8000_0000, true, &c);
        let neg = int_to_posit(0x8000_0000, false, &c);
        assert_eq!(neg, c.negate(big));
    }

    #[test]
    fn integers_out() {
        let c = c();
        let half = PositWord(0x3800_0000);
        let one_half = PositWord(0x4400_0000);
        use IntRounding::*;
        assert_eq!(posit_to_int(half, false, NearestEven, &c), 0);
        assert_eq!(posit_to_int(one_half, false, NearestEven, &c), 2);
        assert_eq!(posit_to_int(one_half, false, TowardZero, &c), 1);
        assert_eq!(posit_to_int(c.negate(one_half), false, NearestEven, &c) as i32, -2);
        assert_eq!(posit_to_int(c.negate(one_half), true, NearestEven, &c), 0);
        assert_eq!(posit_to_int(c.maxpos(), false, NearestEven, &c), i32::MAX as u32);
        assert_eq!(posit_to_int(c.maxpos(), true, NearestEven, &c), u32::MAX);
        assert_eq!(posit_to_int(c.negate(c.maxpos()), false, NearestEven, &c), i32::MIN as u32);
        assert_eq!(posit_to_int(c.nar(), true, NearestEven, &c), 0x8000_0000);
        assert_eq!(posit_to_int(c.minpos(), false, NearestEven, &c), 0);
    }

    #[test]
    fn es_conversion() {
        let c2 = c();
        let c3 = PositConfig::fixed(32, 3).unwrap();
        assert_eq!(convert_es(PositWord(0x4400_0000), &c2, &c3), PositWord(0x4200_0000));
        assert_eq!(convert_es(PositWord(0x4200_0000), &c3, &c2), PositWord(0x4400_0000));
        assert_eq!(convert_es(c3.maxpos(), &c3, &c2), c2.maxpos());
    }
}
