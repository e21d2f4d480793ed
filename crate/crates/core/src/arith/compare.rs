use crate::format::{PositConfig, PositWord};
use crate::op::{CompareKind, SignInjection};

/// Posits order like their patterns read as signed integers; NaR is the
/// most negative pattern and so compares below every real value.
pub fn compare(a: PositWord, b: PositWord, kind: CompareKind, cfg: &PositConfig) -> PositWord {
    let (sa, sb) = (cfg.to_signed(a), cfg.to_signed(b));
    let pick = |x: bool| PositWord(if x { b.0 } else { a.0 } & cfg.mask());
    match kind {
        CompareKind::Eq => PositWord(u32::from(sa == sb)),
        CompareKind::Lt => PositWord(u32::from(sa < sb)),
        CompareKind::Le => PositWord(u32::from(sa <= sb)),
        CompareKind::Min => pick(sb < sa),
        CompareKind::Max => pick(sb > sa),
    }
}

/// Sign injection by two's-complement negation of `a` when its sign must
/// change. Zero and NaR are their own negations and come back unchanged.
pub fn sign_inject(a: PositWord, b: PositWord, kind: SignInjection, cfg: &PositConfig) -> PositWord {
    let a = PositWord(a.0 & cfg.mask());
    let (sa, sb) = (cfg.sign_bit(a), cfg.sign_bit(b));
    let want = match kind {
        SignInjection::Copy => sb,
        SignInjection::Negate => !sb,
        SignInjection::Xor => sa ^ sb,
    };
    if want == sa {
        a
    } else {
        cfg.negate(a)
    }
}

/// Class mask: bit 1 negative, bit 4 zero, bit 6 positive, bit 9 NaR.
pub fn classify(a: PositWord, cfg: &PositConfig) -> PositWord {
    let bit = if cfg.is_nar(a) {
        9
    } else if cfg.is_zero(a) {
        4
    } else if cfg.sign_bit(a) {
        1
    } else {
        6
    };
    PositWord(1 << bit)
}
