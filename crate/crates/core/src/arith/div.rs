use super::nonrestoring;
use crate::format::{decode, encode, ExceptionFlags, PositConfig, PositWord, UnroundedResult};

/// `a / b`. Division by zero (including `0/0`) gives NaR and raises DZ.
pub fn div(a: PositWord, b: PositWord, cfg: &PositConfig) -> (PositWord, ExceptionFlags) {
    encode(&div_unrounded(a, b, cfg), cfg)
}

pub fn div_unrounded(a: PositWord, b: PositWord, cfg: &PositConfig) -> UnroundedResult {
    let (da, db) = (decode(a, cfg), decode(b, cfg));
    if db.is_zero {
        return UnroundedResult::nar().with_flags(ExceptionFlags::DZ);
    }
    if da.is_nar || db.is_nar {
        return UnroundedResult::nar();
    }
    if da.is_zero {
        return UnroundedResult::zero();
    }

    // fa/fb lies in (1/2, 2); two extra quotient bits beyond the fraction
    // width give a guard bit in either case.
    let w = da.frac_width;
    let n = u128::from(da.frac) << (w + 2);
    let (q, r) = nonrestoring::divide(n, u128::from(db.frac), 2 * w + 2);
    let sticky = r != 0;
    let sign = da.sign ^ db.sign;
    let exp = da.exp - db.exp;
    if q >> (w + 2) != 0 {
        UnroundedResult::finite(sign, exp, q, w + 3, sticky)
    } else {
        UnroundedResult::finite(sign, exp - 1, q, w + 2, sticky)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_quotients() {
        let c = PositConfig::fixed(32, 2).unwrap();
        let one = PositWord(0x4000_0000);
        let two = PositWord(0x4800_0000);
        let half = PositWord(0x3800_0000);
        assert_eq!(div(one, two, &c), (half, ExceptionFlags::NONE));
        assert_eq!(div(two, one, &c), (two, ExceptionFlags::NONE));
        assert_eq!(div(c.negate(two), two, &c).0, c.negate(one));
        assert_eq!(div(PositWord(0), two, &c).0, PositWord(0));
    }

    #[test]
    fn division_by_zero() {
        let c = PositConfig::fixed(32, 2).unwrap();
        assert_eq!(div(c.one(), PositWord(0), &c), (c.nar(), ExceptionFlags::DZ));
        assert_eq!(div(PositWord(0), PositWord(0), &c), (c.nar(), ExceptionFlags::DZ));
        assert_eq!(div(c.nar(), c.one(), &c), (c.nar(), ExceptionFlags::NONE));
    }
}
