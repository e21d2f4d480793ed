//! Fused multiply-add and the operations derived from it.

use crate::format::{decode, encode, DecodedPosit, ExceptionFlags, PositConfig, PositWord, UnroundedResult};

/// Fractional bits of the internal fixed-point significands. Normalized
/// significands lie in `[2^FB, 2^(FB+1))`, leaving headroom for a carry.
pub const FB: u32 = 122;

/// Controls of the fused unit: `neg` negates the product and the addend,
/// `sub` negates the addend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FmaControl {
    pub neg: bool,
    pub sub: bool,
}

impl FmaControl {
    pub const MADD: Self = Self { neg: false, sub: false };
    pub const MSUB: Self = Self { neg: false, sub: true };
    pub const NMSUB: Self = Self { neg: true, sub: true };
    pub const NMADD: Self = Self { neg: true, sub: false };
}

/// True when a product of two `width`-bit significands (each with its
/// leading one at `width - 1`) carries into bit `2*width - 1`.
pub fn chk_mul_of(product: u128, width: u32) -> bool {
    product >> (2 * width - 1) != 0
}

/// True when a sum of two `[2^fb, 2^(fb+1))` significands carried out.
pub fn chk_add_of(sum: u128, fb: u32) -> bool {
    sum >> (fb + 1) != 0
}

/// Shifts a nonzero significand so that its leading one sits at bit `fb`.
/// Returns the shifted value, the exponent adjustment and the updated
/// sticky bit.
pub fn normalize(s: u128, fb: u32, sticky: bool) -> (u128, i32, bool) {
    debug_assert!(s != 0);
    let top = 127 - s.leading_zeros();
    if top > fb {
        let sh = top - fb;
        let lost = s & ((1u128 << sh) - 1) != 0;
        (s >> sh, sh as i32, sticky || lost)
    } else {
        (s << (fb - top), -((fb - top) as i32), sticky)
    }
}

/// Significand at `FB` fractional bits with its scale.
#[derive(Debug, Clone, Copy)]
struct Term {
    sign: bool,
    exp: i32,
    sig: u128,
}

fn product_term(a: &DecodedPosit, b: &DecodedPosit, negate: bool) -> Term {
    let w = a.frac_width;
    let p = u128::from(a.frac) * u128::from(b.frac);
    let (exp, point) = if chk_mul_of(p, w) {
        (a.exp + b.exp + 1, 2 * w - 1)
    } else {
        (a.exp + b.exp, 2 * w - 2)
    };
    Term {
        sign: a.sign ^ b.sign ^ negate,
        exp,
        sig: p << (FB - point),
    }
}

fn addend_term(c: &DecodedPosit, negate: bool) -> Term {
    Term {
        sign: c.sign ^ negate,
        exp: c.exp,
        sig: u128::from(c.frac) << (FB - (c.frac_width - 1)),
    }
}

fn term_result(t: Term) -> UnroundedResult {
    UnroundedResult::finite(t.sign, t.exp, t.sig, FB + 1, false)
}

/// Computes `(-1)^neg * (a*b + (-1)^sub * c)` with a single rounding.
pub fn fma(a: PositWord, b: PositWord, c: PositWord, ctl: FmaControl, cfg: &PositConfig) -> (PositWord, ExceptionFlags) {
    encode(&fma_unrounded(a, b, c, ctl, cfg), cfg)
}

/// The fused datapath up to (but excluding) rounding.
pub fn fma_unrounded(a: PositWord, b: PositWord, c: PositWord, ctl: FmaControl, cfg: &PositConfig) -> UnroundedResult {
    let (da, db, dc) = (decode(a, cfg), decode(b, cfg), decode(c, cfg));
    if da.is_nar || db.is_nar || dc.is_nar {
        return UnroundedResult::nar();
    }
    let addend_sign_flip = ctl.neg ^ ctl.sub;
    let product_zero = da.is_zero || db.is_zero;
    match (product_zero, dc.is_zero) {
        (true, true) => return UnroundedResult::zero(),
        (true, false) => return term_result(addend_term(&dc, addend_sign_flip)),
        (false, true) => return term_result(product_term(&da, &db, ctl.neg)),
        (false, false) => {}
    }

    let p = product_term(&da, &db, ctl.neg);
    let q = addend_term(&dc, addend_sign_flip);
    let (big, small) = if (p.exp, p.sig) >= (q.exp, q.sig) { (p, q) } else { (q, p) };

    // Align the smaller term, jamming shifted-out bits into sticky.
    let d = (big.exp - small.exp) as u32;
    let (aligned, mut sticky) = if d >= FB + 2 {
        (0, true)
    } else {
        (small.sig >> d, small.sig & ((1u128 << d) - 1) != 0)
    };

    let sum = if big.sign == small.sign {
        big.sig + aligned
    } else {
        // Borrow one unit for the discarded bits; sticky stays set since
        // the true difference lies strictly inside the next unit.
        big.sig - aligned - u128::from(sticky)
    };
    if sum == 0 && !sticky {
        return UnroundedResult::zero();
    }
    debug_assert!(sum != 0);

    // A carry (chk_add_of) moves the leading one up by one place;
    // cancellation moves it down arbitrarily far.
    debug_assert!(!chk_add_of(sum, FB + 1));
    let (sig, adj, s) = normalize(sum, FB, sticky);
    sticky = s;
    UnroundedResult::finite(big.sign, big.exp + adj, sig, FB + 1, sticky)
}

/// `a + b`, computed as `a*1 + b`.
pub fn add(a: PositWord, b: PositWord, cfg: &PositConfig) -> (PositWord, ExceptionFlags) {
    fma(a, cfg.one(), b, FmaControl::MADD, cfg)
}

/// `a - b`, computed as `a*1 - b`.
pub fn sub(a: PositWord, b: PositWord, cfg: &PositConfig) -> (PositWord, ExceptionFlags) {
    fma(a, cfg.one(), b, FmaControl::MSUB, cfg)
}

/// `a * b`, computed as `a*b + 0`.
pub fn mul(a: PositWord, b: PositWord, cfg: &PositConfig) -> (PositWord, ExceptionFlags) {
    fma(a, b, cfg.zero(), FmaControl::MADD, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> PositConfig {
        PositConfig::fixed(32, 2).unwrap()
    }

    const ONE: PositWord = PositWord(0x4000_0000);
    const TWO: PositWord = PositWord(0x4800_0000);
    const THREE: PositWord = PositWord(0x4C00_0000);

    #[test]
    fn small_integers() {
        let c = cfg();
        assert_eq!(add(ONE, TWO, &c).0, THREE);
        assert_eq!(sub(THREE, TWO, &c).0, ONE);
        assert_eq!(mul(TWO, ONE, &c).0, TWO);
        assert_eq!(sub(TWO, TWO, &c).0, PositWord(0));
    }

    #[test]
    fn control_signs() {
        let c = cfg();
        // 2*2 +/- 1 under each control.
        let five = PositWord(0x5200_0000);
        let three = THREE;
        assert_eq!(fma(TWO, TWO, ONE, FmaControl::MADD, &c).0, five);
        assert_eq!(fma(TWO, TWO, ONE, FmaControl::MSUB, &c).0, three);
        assert_eq!(fma(TWO, TWO, ONE, FmaControl::NMSUB, &c).0, c.negate(three));
        assert_eq!(fma(TWO, TWO, ONE, FmaControl::NMADD, &c).0, c.negate(five));
    }

    #[test]
    fn specials() {
        let c = cfg();
        assert_eq!(add(c.nar(), ONE, &c).0, c.nar());
        assert_eq!(mul(PositWord(0), c.nar(), &c).0, c.nar());
        assert_eq!(mul(PositWord(0), TWO, &c).0, PositWord(0));
        assert_eq!(fma(PositWord(0), TWO, ONE, FmaControl::NMADD, &c).0, c.negate(ONE));
        // maxpos * maxpos saturates, minpos * minpos stays at minpos.
        assert_eq!(mul(c.maxpos(), c.maxpos(), &c).0, c.maxpos());
        assert_eq!(mul(c.minpos(), c.minpos(), &c).0, c.minpos());
    }

    #[test]
    fn tiny_addend_only_affects_sticky() {
        let c = cfg();
        // 1 + minpos rounds back to 1; 1 - minpos rounds back to 1 too.
        assert_eq!(add(ONE, c.minpos(), &c).0, ONE);
        assert_eq!(sub(ONE, c.minpos(), &c).0, ONE);
    }

    #[test]
    fn normalize_helper() {
        assert_eq!(normalize(0b1000, 2, false), (0b100, 1, false));
        assert_eq!(normalize(0b1001, 2, false), (0b100, 1, true));
        assert_eq!(normalize(0b1, 3, false), (0b1000, -3, false));
        assert!(chk_mul_of(0b11 * 0b11, 2));
        assert!(!chk_mul_of(0b10 * 0b10, 2));
        assert!(chk_add_of(0b1000, 2));
    }
}
