use posit_core::arith::execute;
use posit_core::oracle::reference;
use posit_core::{FpuOp, PositConfig};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn check(op: FpuOp, operands: &[u32], cfg: &PositConfig) {
    let got = execute(op, operands, cfg);
    let want = reference(op, operands, cfg);
    assert_eq!(
        got, want,
        "{op} {:x?} ps={} es={}",
        operands,
        cfg.ps(),
        cfg.es()
    );
}

fn valid_targets(cfg: &PositConfig) -> Vec<u32> {
    (0..=3).filter(|&es| cfg.with_es(es).is_ok()).collect()
}

#[test]
fn exhaustive_8bit_unary_and_binary() {
    for es in 0..=3 {
        let cfg = PositConfig::fixed(8, es).unwrap();
        for op in FpuOp::all(&valid_targets(&cfg)) {
            match op.arity() {
                1 => (0..256).for_each(|a| check(op, &[a], &cfg)),
                2 => (0..256).for_each(|a| (0..256).for_each(|b| check(op, &[a, b], &cfg))),
                _ => {}
            }
        }
    }
}

#[test]
fn sampled_8bit_fused() {
    let mut rng = StdRng::seed_from_u64(8);
    for es in 0..=3 {
        let cfg = PositConfig::fixed(8, es).unwrap();
        for op in [FpuOp::MulAdd, FpuOp::MulSub, FpuOp::NegMulSub, FpuOp::NegMulAdd] {
            for _ in 0..20_000 {
                let v: [u32; 3] = rng.gen::<[u8; 3]>().map(u32::from);
                check(op, &v, &cfg);
            }
        }
    }
}

#[test]
fn exhaustive_16bit_unary() {
    for es in [1, 2] {
        let cfg = PositConfig::fixed(16, es).unwrap();
        for op in FpuOp::all(&valid_targets(&cfg)) {
            if op.arity() == 1 {
                (0..65536).for_each(|a| check(op, &[a], &cfg));
            }
        }
    }
}

/// Operand words biased toward the interesting corners.
fn operand(rng: &mut StdRng, cfg: &PositConfig) -> u32 {
    let m = cfg.mask();
    match rng.gen_range(0..10) {
        0 => [0, cfg.nar().0, cfg.one().0, cfg.maxpos().0, 1, m, cfg.negate(cfg.one()).0][rng.gen_range(0..7)],
        1 => rng.gen::<u32>() & 0xFF & m,
        2 => (rng.gen::<u32>() | 0x7F00_0000) & m,
        _ => rng.gen::<u32>() & m,
    }
}

#[test]
fn sampled_16_and_32bit() {
    let mut rng = StdRng::seed_from_u64(32);
    let cfgs = [
        PositConfig::fixed(16, 1).unwrap(),
        PositConfig::fixed(32, 2).unwrap(),
        PositConfig::fixed(32, 3).unwrap(),
        PositConfig::dual(2).unwrap(),
        PositConfig::dual(3).unwrap(),
    ];
    for cfg in &cfgs {
        for op in FpuOp::all(&valid_targets(cfg)) {
            for _ in 0..3000 {
                let v: Vec<u32> = (0..3).map(|_| operand(&mut rng, cfg)).collect();
                check(op, &v, cfg);
            }
        }
    }
}
