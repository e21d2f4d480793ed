//! Posit format: configuration, raw words, and the common decoder and
//! encoder that every arithmetic unit goes through.
//!
//! A posit word is a `ps`-bit two's-complement pattern. Positive words are
//! laid out as `sign | regime | exponent | fraction`, negative words are the
//! two's complement of their magnitude. The all-zeros pattern is zero and
//! the pattern with only the MSB set is NaR.
//!
//! The dual-es datapath is a 32-bit unit whose exponent field is sized for
//! es=3 and whose fraction field is sized for es=2. The active es is a
//! runtime selector, and decode/encode apply small fix-ups to the fields so
//! that both selections behave exactly like a dedicated fixed-es unit.

use std::fmt;
use std::ops::{BitOr, BitOrAssign};

use crate::error::FormatError;

/// Width of the dual-es datapath.
pub const DUAL_PS: u32 = 32;

/// Largest exponent field the dual datapath carries.
const DUAL_FIELD_ES: u32 = 3;
/// Smallest es the dual datapath supports; it sizes the fraction.
const DUAL_MIN_ES: u32 = 2;

/// Exponent-size selection for a datapath.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EsMode {
    /// A datapath built for one es value.
    Fixed(u32),
    /// The 32-bit dual datapath with the given active es (2 or 3).
    Dual(u32),
}

impl EsMode {
    /// The es value currently in effect.
    pub const fn es(self) -> u32 {
        match self {
            EsMode::Fixed(es) | EsMode::Dual(es) => es,
        }
    }

    pub const fn is_dual(self) -> bool {
        matches!(self, EsMode::Dual(_))
    }
}

/// A `(ps, es)` posit format together with the datapath style that
/// implements it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PositConfig {
    ps: u32,
    es_mode: EsMode,
}

impl PositConfig {
    pub fn new(ps: u32, es_mode: EsMode) -> Result<Self, FormatError> {
        if !matches!(ps, 8 | 16 | 32) {
            return Err(FormatError::UnsupportedSize(ps));
        }
        match es_mode {
            EsMode::Fixed(es) => {
                if es + 3 > ps {
                    return Err(FormatError::EsTooLarge { ps, es });
                }
            }
            EsMode::Dual(es) => {
                if ps != DUAL_PS {
                    return Err(FormatError::DualWidth(ps));
                }
                if es != 2 && es != 3 {
                    return Err(FormatError::DualEs(es));
                }
            }
        }
        Ok(Self { ps, es_mode })
    }

    pub fn fixed(ps: u32, es: u32) -> Result<Self, FormatError> {
        Self::new(ps, EsMode::Fixed(es))
    }

    /// The 32-bit dual-es datapath with `es` selected.
    pub fn dual(es: u32) -> Result<Self, FormatError> {
        Self::new(DUAL_PS, EsMode::Dual(es))
    }

    /// Same datapath with a different es selected. For fixed datapaths this
    /// yields the fixed datapath of the other es.
    pub fn with_es(self, es: u32) -> Result<Self, FormatError> {
        match self.es_mode {
            EsMode::Fixed(_) => Self::fixed(self.ps, es),
            EsMode::Dual(_) => Self::dual(es),
        }
    }

    pub const fn ps(&self) -> u32 {
        self.ps
    }

    pub const fn es_mode(&self) -> EsMode {
        self.es_mode
    }

    pub const fn es(&self) -> u32 {
        self.es_mode.es()
    }

    /// Width of the exponent field carried by the datapath.
    const fn field_es(&self) -> u32 {
        match self.es_mode {
            EsMode::Fixed(es) => es,
            EsMode::Dual(_) => DUAL_FIELD_ES,
        }
    }

    /// Maximum fraction size `ps - es - 3` of the datapath (hidden bit not
    /// included). The dual datapath is sized by its smallest es.
    pub const fn fs(&self) -> u32 {
        match self.es_mode {
            EsMode::Fixed(es) => self.ps - es - 3,
            EsMode::Dual(_) => self.ps - DUAL_MIN_ES - 3,
        }
    }

    /// Maximum exponent size `log2(ps) + es + 2` of the datapath.
    pub const fn fes(&self) -> u32 {
        self.ps.trailing_zeros() + self.field_es() + 2
    }

    pub const fn mask(&self) -> u32 {
        if self.ps == 32 {
            u32::MAX
        } else {
            (1 << self.ps) - 1
        }
    }

    pub const fn zero(&self) -> PositWord {
        PositWord(0)
    }

    pub const fn nar(&self) -> PositWord {
        PositWord(1 << (self.ps - 1))
    }

    /// Encoding of 1.0, independent of es.
    pub const fn one(&self) -> PositWord {
        PositWord(1 << (self.ps - 2))
    }

    /// Largest positive posit, pattern `2^(ps-1) - 1`.
    pub const fn maxpos(&self) -> PositWord {
        PositWord((1 << (self.ps - 1)) - 1)
    }

    /// Smallest positive posit, pattern `1`.
    pub const fn minpos(&self) -> PositWord {
        PositWord(1)
    }

    /// Scale of maxpos, `(ps - 2) * 2^es`. Minpos has the negated scale.
    pub const fn max_scale(&self) -> i32 {
        ((self.ps - 2) << self.es()) as i32
    }

    pub const fn is_zero(&self, p: PositWord) -> bool {
        p.0 & self.mask() == 0
    }

    pub const fn is_nar(&self, p: PositWord) -> bool {
        p.0 & self.mask() == 1 << (self.ps - 1)
    }

    pub const fn is_maxpos(&self, p: PositWord) -> bool {
        p.0 & self.mask() == self.maxpos().0
    }

    pub const fn is_minpos(&self, p: PositWord) -> bool {
        p.0 & self.mask() == 1
    }

    /// Sign bit of the pattern (set for negative values and for NaR).
    pub const fn sign_bit(&self, p: PositWord) -> bool {
        (p.0 >> (self.ps - 1)) & 1 == 1
    }

    /// The pattern read as a sign-extended `ps`-bit integer.
    pub const fn to_signed(&self, p: PositWord) -> i32 {
        let shift = 32 - self.ps;
        ((p.0 << shift) as i32) >> shift
    }

    pub const fn from_signed(&self, v: i32) -> PositWord {
        PositWord(v as u32 & self.mask())
    }

    /// Two's complement negation. Zero and NaR map to themselves.
    pub const fn negate(&self, p: PositWord) -> PositWord {
        PositWord(p.0.wrapping_neg() & self.mask())
    }

    /// Every pattern of this size in ascending unsigned order.
    pub fn words(&self) -> impl Iterator<Item = PositWord> {
        (0..=u64::from(self.mask())).map(|b| PositWord(b as u32))
    }
}

/// Raw posit bit pattern. Only the low `ps` bits are meaningful; the
/// configuration that gives it meaning travels separately.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct PositWord(pub u32);

impl PositWord {
    pub const fn bits(self) -> u32 {
        self.0
    }
}

impl fmt::Debug for PositWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PositWord({:#010x})", self.0)
    }
}

impl fmt::LowerHex for PositWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::LowerHex::fmt(&self.0, f)
    }
}

impl fmt::UpperHex for PositWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::UpperHex::fmt(&self.0, f)
    }
}

/// Exception flags in fflags layout. Posits only ever raise DZ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ExceptionFlags(pub u8);

impl ExceptionFlags {
    pub const NONE: Self = Self(0);
    /// Divide-by-zero, fflags bit 3.
    pub const DZ: Self = Self(1 << 3);

    pub const fn bits(self) -> u8 {
        self.0
    }

    pub const fn contains(self, other: Self) -> bool {
        self.0 & other.0 == other.0
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }
}

impl BitOr for ExceptionFlags {
    type Output = Self;
    fn bitor(self, rhs: Self) -> Self {
        Self(self.0 | rhs.0)
    }
}

impl BitOrAssign for ExceptionFlags {
    fn bitor_assign(&mut self, rhs: Self) {
        self.0 |= rhs.0;
    }
}

/// Unpacked posit.
///
/// When neither `is_zero` nor `is_nar` is set, `frac` holds `frac_width`
/// bits with the hidden one at the top and the value is
/// `(-1)^sign * 2^exp * frac / 2^(frac_width - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecodedPosit {
    pub sign: bool,
    pub exp: i32,
    pub frac: u64,
    pub frac_width: u32,
    pub is_zero: bool,
    pub is_nar: bool,
}

impl DecodedPosit {
    pub const fn is_special(&self) -> bool {
        self.is_zero || self.is_nar
    }

    /// Exact (sticky-free) encoder input describing the same value.
    pub fn lift(&self) -> UnroundedResult {
        UnroundedResult {
            sign: self.sign,
            exp: self.exp,
            frac: u128::from(self.frac),
            frac_width: self.frac_width,
            sticky: false,
            is_zero: self.is_zero,
            is_nar: self.is_nar,
            flags: ExceptionFlags::NONE,
        }
    }
}

/// Wide intermediate handed to the encoder.
///
/// `frac` is normalized: bit `frac_width - 1` is the leading one (unless a
/// special flag is set). `sticky` records whether any nonzero bit was
/// dropped below `frac` on the way here.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnroundedResult {
    pub sign: bool,
    pub exp: i32,
    pub frac: u128,
    pub frac_width: u32,
    pub sticky: bool,
    pub is_zero: bool,
    pub is_nar: bool,
    pub flags: ExceptionFlags,
}

impl UnroundedResult {
    pub const fn zero() -> Self {
        Self {
            sign: false,
            exp: 0,
            frac: 0,
            frac_width: 1,
            sticky: false,
            is_zero: true,
            is_nar: false,
            flags: ExceptionFlags::NONE,
        }
    }

    pub const fn nar() -> Self {
        Self {
            is_zero: false,
            is_nar: true,
            ..Self::zero()
        }
    }

    pub const fn finite(sign: bool, exp: i32, frac: u128, frac_width: u32, sticky: bool) -> Self {
        Self {
            sign,
            exp,
            frac,
            frac_width,
            sticky,
            is_zero: false,
            is_nar: false,
            flags: ExceptionFlags::NONE,
        }
    }

    pub const fn with_flags(mut self, flags: ExceptionFlags) -> Self {
        self.flags = flags;
        self
    }
}

const fn low_mask(n: u32) -> u128 {
    if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

/// Unpack a posit word.
pub fn decode(p: PositWord, cfg: &PositConfig) -> DecodedPosit {
    let ps = cfg.ps();
    let mask = u64::from(cfg.mask());
    let mut bits = u64::from(p.0) & mask;
    let fs = cfg.fs();

    let is_zero = bits == 0;
    let is_nar = bits == 1 << (ps - 1);
    if is_zero || is_nar {
        return DecodedPosit {
            sign: false,
            exp: 0,
            frac: 0,
            frac_width: fs + 1,
            is_zero,
            is_nar,
        };
    }

    let sign = (bits >> (ps - 1)) & 1 == 1;
    if sign {
        bits = bits.wrapping_neg() & mask;
    }

    // Regime run length, counted from the bit after the sign.
    let regime_ones = (bits >> (ps - 2)) & 1 == 1;
    let aligned = bits << (64 - (ps - 1));
    let run = if regime_ones {
        (!aligned).leading_zeros()
    } else {
        aligned.leading_zeros()
    }
    .min(ps - 1);
    let k = if regime_ones {
        run as i32 - 1
    } else {
        -(run as i32)
    };

    // Drop sign, regime and terminator; the exponent field is now on top.
    let mut rest = (bits << (run + 2)) & mask;
    let field = cfg.field_es();
    let mut e = if field == 0 {
        0
    } else {
        (rest >> (ps - field)) as i32
    };
    let es = cfg.es();
    if cfg.es_mode().is_dual() && es == 2 {
        e >>= 1;
    }
    let exp = e + k * (1 << es);

    rest = (rest << es) & mask;
    let frac = (1u64 << fs) | if fs == 0 { 0 } else { rest >> (ps - fs) };

    DecodedPosit {
        sign,
        exp,
        frac,
        frac_width: fs + 1,
        is_zero: false,
        is_nar: false,
    }
}

/// Round an intermediate result to the nearest posit, ties to even.
///
/// Magnitudes above maxpos saturate to maxpos and nonzero magnitudes below
/// minpos become minpos; only `is_zero` produces the zero word.
pub fn encode(u: &UnroundedResult, cfg: &PositConfig) -> (PositWord, ExceptionFlags) {
    if u.is_nar {
        return (cfg.nar(), u.flags);
    }
    if u.is_zero {
        return (cfg.zero(), u.flags);
    }
    debug_assert!(u.frac_width >= 1 && u.frac_width <= 128);
    debug_assert!(u.frac >> (u.frac_width - 1) == 1, "unnormalized fraction");

    let ps = cfg.ps();
    let mut sticky = u.sticky;

    // Anything beyond 64 significant bits can only matter as sticky.
    let (mut frac, mut width) = (u.frac, u.frac_width);
    if width > 64 {
        let drop = width - 64;
        sticky |= frac & low_mask(drop) != 0;
        frac >>= drop;
        width = 64;
    }
    let frac_len = width - 1;
    let frac_bits = frac & low_mask(frac_len);

    // Split the scale into regime k and exponent bits, then build the
    // exponent-fraction tail that follows the regime.
    let (k, tail, tail_len) = match cfg.es_mode() {
        EsMode::Fixed(es) => {
            let k = u.exp >> es;
            let e = (u.exp & ((1 << es) - 1)) as u128;
            (k, (e << frac_len) | frac_bits, es + frac_len)
        }
        EsMode::Dual(es) => {
            let mut e = (u.exp & 0b111) as u128;
            let mut k = u.exp >> DUAL_MIN_ES;
            if es == 2 {
                e &= !0b100;
            } else {
                k >>= 1;
            }
            let len = DUAL_FIELD_ES + frac_len;
            let mut ef = (e << frac_len) | frac_bits;
            if es == 2 {
                ef = (ef << 1) & low_mask(len);
            }
            (k, ef, len)
        }
    };

    let max_k = ps as i32 - 2;
    let apply_sign = |mag: u64| {
        let mag = mag & u64::from(cfg.mask());
        if u.sign {
            PositWord((mag.wrapping_neg() & u64::from(cfg.mask())) as u32)
        } else {
            PositWord(mag as u32)
        }
    };
    if k >= max_k {
        return (apply_sign(u64::from(cfg.maxpos().0)), u.flags);
    }
    if k < -max_k {
        return (apply_sign(1), u.flags);
    }

    let (regime, regime_len) = if k >= 0 {
        ((((1u64 << (k + 1)) - 1) << 1), k as u32 + 2)
    } else {
        (1u64, (-k) as u32 + 1)
    };
    let avail = ps - 1 - regime_len;
    let mut p = regime << avail;

    let guard = if tail_len <= avail {
        p |= (tail << (avail - tail_len)) as u64;
        false
    } else {
        let drop = tail_len - avail;
        p |= (tail >> drop) as u64;
        sticky |= tail & low_mask(drop - 1) != 0;
        (tail >> (drop - 1)) & 1 == 1
    };

    let mut round_up = guard && (sticky || p & 1 == 1);
    if p == u64::from(cfg.maxpos().0) {
        round_up = false;
    }
    if p == 0 {
        p = 1;
    }
    p += u64::from(round_up);

    (apply_sign(p), u.flags)
}

/// Two's complement negation of a word.
pub fn negate(p: PositWord, cfg: &PositConfig) -> PositWord {
    cfg.negate(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p32(es: u32) -> PositConfig {
        PositConfig::fixed(32, es).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(PositConfig::fixed(32, 2).is_ok());
        assert!(PositConfig::fixed(8, 5).is_ok());
        assert_eq!(
            PositConfig::fixed(8, 6),
            Err(FormatError::EsTooLarge { ps: 8, es: 6 })
        );
        assert_eq!(PositConfig::fixed(12, 1), Err(FormatError::UnsupportedSize(12)));
        assert_eq!(PositConfig::new(16, EsMode::Dual(2)), Err(FormatError::DualWidth(16)));
        assert_eq!(PositConfig::dual(4), Err(FormatError::DualEs(4)));
        assert_eq!(PositConfig::dual(1), Err(FormatError::DualEs(1)));
    }

    #[test]
    fn derived_sizes() {
        let c = p32(2);
        assert_eq!(c.fs(), 27);
        assert_eq!(c.fes(), 9);
        let d = PositConfig::dual(3).unwrap();
        assert_eq!(d.fs(), 27);
        assert_eq!(d.fes(), 10);
        assert_eq!(PositConfig::fixed(8, 0).unwrap().fs(), 5);
    }

    #[test]
    fn special_patterns() {
        let c = p32(2);
        assert!(c.is_zero(PositWord(0)));
        assert!(c.is_nar(PositWord(0x8000_0000)));
        assert!(c.is_maxpos(PositWord(0x7FFF_FFFF)));
        assert!(c.is_minpos(PositWord(1)));
        let c8 = PositConfig::fixed(8, 2).unwrap();
        assert_eq!(c8.nar(), PositWord(0x80));
        assert_eq!(c8.maxpos(), PositWord(0x7F));
        assert_eq!(c8.to_signed(PositWord(0xFF)), -1);
    }

    #[test]
    fn decode_zero_and_nar() {
        let c = p32(2);
        assert!(decode(PositWord(0), &c).is_zero);
        assert!(decode(PositWord(0x8000_0000), &c).is_nar);
    }

    #[test]
    fn decode_one_point_five() {
        let d = decode(PositWord(0x4400_0000), &p32(2));
        assert!(!d.sign);
        assert_eq!(d.exp, 0);
        assert_eq!(d.frac, 0b11 << 26);
        assert_eq!(d.frac_width, 28);
    }

    #[test]
    fn decode_same_word_at_es3_is_two() {
        let d = decode(PositWord(0x4400_0000), &p32(3));
        assert_eq!(d.exp, 1);
        assert_eq!(d.frac, 1 << 26);
    }

    #[test]
    fn decode_negative_one() {
        let d = decode(PositWord(0xC000_0000), &p32(2));
        assert!(d.sign);
        assert_eq!(d.exp, 0);
        assert_eq!(d.frac, 1 << 27);
    }

    #[test]
    fn decode_extremes() {
        let c = p32(2);
        let max = decode(c.maxpos(), &c);
        assert_eq!(max.exp, 120);
        assert_eq!(max.frac, 1 << 27);
        let min = decode(c.minpos(), &c);
        assert_eq!(min.exp, -120);
    }

    #[test]
    fn encode_golden_words() {
        let c = p32(2);
        let u = UnroundedResult::finite(false, 0, 0b11, 2, false);
        assert_eq!(encode(&u, &c).0, PositWord(0x4400_0000));
        let (w, f) = encode(&UnroundedResult::zero(), &c);
        assert_eq!(w, PositWord(0));
        assert!(f.is_empty());
    }

    #[test]
    fn encode_saturates() {
        let c = p32(2);
        let big = UnroundedResult::finite(false, 200, 1, 1, false);
        assert_eq!(encode(&big, &c).0, PositWord(0x7FFF_FFFF));
        let tiny = UnroundedResult::finite(false, -200, 1, 1, false);
        assert_eq!(encode(&tiny, &c).0, PositWord(1));
        let neg_tiny = UnroundedResult::finite(true, -200, 1, 1, false);
        assert_eq!(encode(&neg_tiny, &c).0, PositWord(0xFFFF_FFFF));
    }

    #[test]
    fn encode_ties_to_even() {
        // ps=8 es=0: 1.0 = 0x40 has 5 fraction bits. 1 + 2^-6 is halfway
        // between 0x40 and 0x41 and must go to the even pattern.
        let c = PositConfig::fixed(8, 0).unwrap();
        let half_ulp = UnroundedResult::finite(false, 0, 0b100_0001, 7, false);
        assert_eq!(encode(&half_ulp, &c).0, PositWord(0x40));
        let above = UnroundedResult::finite(false, 0, 0b100_0001, 7, true);
        assert_eq!(encode(&above, &c).0, PositWord(0x41));
        let odd_tie = UnroundedResult::finite(false, 0, 0b100_0011, 7, false);
        assert_eq!(encode(&odd_tie, &c).0, PositWord(0x42));
    }

    #[test]
    fn negate_fixed_points() {
        let c = p32(2);
        assert_eq!(negate(PositWord(0x4000_0000), &c), PositWord(0xC000_0000));
        assert_eq!(negate(PositWord(0), &c), PositWord(0));
        assert_eq!(negate(PositWord(0x8000_0000), &c), PositWord(0x8000_0000));
    }

    #[test]
    fn roundtrip_exhaustive_small() {
        for ps in [8, 16] {
            for es in 0..=3 {
                let c = PositConfig::fixed(ps, es).unwrap();
                for w in c.words() {
                    let back = encode(&decode(w, &c).lift(), &c).0;
                    assert_eq!(back, w, "ps={ps} es={es}");
                }
            }
        }
    }
}
