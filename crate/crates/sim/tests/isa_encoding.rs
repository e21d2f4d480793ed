use std::collections::{BTreeMap, BTreeSet};

use posit_sim::isa::{decode, encode, DecodeConfig, FcvtEsInstr, Instr, PositInstr, PositOp, OPC_CUSTOM_0, OPC_OP_FP};
use proptest::prelude::*;

fn cfg() -> DecodeConfig {
    DecodeConfig::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20_000))]

    #[test]
    fn decoded_words_reencode_exactly(w in any::<u32>()) {
        if let Ok(i) = decode(w, &cfg()) {
            let back = encode(&i).unwrap();
            // FENCE ignores its fm/rs1/rd fields.
            if !matches!(i, Instr::Fence { .. }) {
                prop_assert_eq!(back, w, "{:?}", i);
            }
            prop_assert_eq!(decode(back, &cfg()).unwrap(), i);
        }
    }

    #[test]
    fn posit_words_roundtrip(op in 0usize..24, rd in 0u8..32, rs1 in 0u8..32, rs2 in 0u8..32, rs3 in 0u8..32, rm in 0u8..8) {
        let op = PositOp::ALL[op];
        let mut p = PositInstr::fused(op, rd, rs1, rs2, rs3).with_rm(rm);
        if !op.is_fused() { p.rs3 = 0; }
        if op.sources() == 1 { p.rs2 = 0; }
        if op.fixed_funct3().is_some() { p.rm = 0; }
        if op.uses_rm() && !matches!(rm, 0 | 1 | 7) { p.rm = 1; }
        let i = Instr::Posit(p);
        prop_assert_eq!(decode(encode(&i).unwrap(), &cfg()).unwrap(), i);
    }
}

#[test]
fn every_mnemonic_has_one_decode_arm() {
    // Sweep funct7 x funct3 x rs2 over OP-FP and record which arms decode
    // to each op. Register fields are fixed.
    let mut arms: BTreeMap<&str, BTreeSet<u32>> = BTreeMap::new();
    for f7 in 0..128u32 {
        for f3 in 0..8u32 {
            for rs2 in 0..32u32 {
                let w = OPC_OP_FP | 1 << 7 | f3 << 12 | 2 << 15 | rs2 << 20 | f7 << 25;
                if let Ok(Instr::Posit(p)) = decode(w, &cfg()) {
                    arms.entry(p.op.mnemonic()).or_default().insert(f7);
                }
            }
        }
    }
    for op in PositOp::ALL {
        let w = encode(&Instr::Posit(PositInstr::fused(op, 1, 2, if op.sources() >= 2 { 3 } else { 0 }, if op.is_fused() { 4 } else { 0 }))).unwrap();
        let Instr::Posit(p) = decode(w, &cfg()).unwrap() else { panic!("{op:?}") };
        assert_eq!(p.op, op);
        if !op.is_fused() {
            assert_eq!(arms[op.mnemonic()].len(), 1, "{op:?}");
        }
    }
    // 20 OP-FP mnemonics plus the four fused R4 ones.
    assert_eq!(arms.len(), 20);
    let fcvt = Instr::FcvtEs(FcvtEsInstr { reg: 7, from_es: 3, to_es: 2, opcode: OPC_CUSTOM_0 as u8 });
    assert_eq!(decode(encode(&fcvt).unwrap(), &cfg()).unwrap(), fcvt);
}

#[test]
fn unrepresentable_fields_are_rejected() {
    use posit_sim::isa::{AluOp, BranchKind};
    assert!(encode(&Instr::OpImm { op: AluOp::Add, rd: 1, rs1: 1, imm: 2048 }).is_err());
    assert!(encode(&Instr::OpImm { op: AluOp::Sll, rd: 1, rs1: 1, imm: 32 }).is_err());
    assert!(encode(&Instr::Branch { kind: BranchKind::Beq, rs1: 0, rs2: 0, offset: 3 }).is_err());
    assert!(encode(&Instr::Jal { rd: 0, offset: 1 << 20 }).is_err());
    assert!(encode(&Instr::Lui { rd: 32, imm: 0 }).is_err());
    assert!(encode(&Instr::Posit(PositInstr::new(PositOp::FsqrtS, 1, 2, 3))).is_err());
    assert!(encode(&Instr::FcvtEs(FcvtEsInstr { reg: 1, from_es: 2, to_es: 4, opcode: OPC_CUSTOM_0 as u8 })).is_err());
    assert!(encode(&Instr::FcvtEs(FcvtEsInstr { reg: 1, from_es: 2, to_es: 3, opcode: 0x53 })).is_err());
}
