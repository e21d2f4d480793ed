use super::nonrestoring;
use crate::format::{decode, encode, ExceptionFlags, PositConfig, PositWord, UnroundedResult};

/// Guard bits carried by the root beyond the fraction width.
const GUARD: u32 = 2;

/// Square root; negative inputs and NaR give NaR.
pub fn sqrt(a: PositWord, cfg: &PositConfig) -> (PositWord, ExceptionFlags) {
    encode(&sqrt_unrounded(a, cfg), cfg)
}

pub fn sqrt_unrounded(a: PositWord, cfg: &PositConfig) -> UnroundedResult {
    let d = decode(a, cfg);
    if d.is_nar || (d.sign && !d.is_zero) {
        return UnroundedResult::nar();
    }
    if d.is_zero {
        return UnroundedResult::zero();
    }

    // Halve the scale; an odd scale moves one factor of two into the
    // mantissa, which then lies in [1, 4).
    let rexp = d.exp >> 1;
    let m = u128::from(d.frac) << (d.exp & 1);
    let w = d.frac_width;
    // m has w-1 fractional bits; widen to an even count so the root has
    // w-1+GUARD fractional bits.
    let x = m << (w - 1 + 2 * GUARD);
    let (root, rem) = nonrestoring::sqrt(x, w + GUARD + 1);
    UnroundedResult::finite(false, rexp, root, w + GUARD, rem != 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_squares() {
        let c = PositConfig::fixed(32, 2).unwrap();
        let four = PositWord(0x5000_0000);
        let two = PositWord(0x4800_0000);
        assert_eq!(sqrt(four, &c).0, two);
        assert_eq!(sqrt(c.one(), &c).0, c.one());
        assert_eq!(sqrt(PositWord(0), &c).0, PositWord(0));
        assert_eq!(sqrt(c.negate(four), &c).0, c.nar());
        assert_eq!(sqrt(c.nar(), &c).0, c.nar());
    }
}
