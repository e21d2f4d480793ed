// Binary literals are grouped by instruction field.
#![allow(clippy::unusual_byte_groupings)]

use super::pcsr::{CSR_FCSR, CSR_FFLAGS, CSR_FRM, FLAG_DZ};
use super::*;

fn dec(w: u32) -> Result<Instr, IllegalInstruction> {
    decode(w, &DecodeConfig::default())
}

fn posit(i: Instr) -> PositInstr {
    match i {
        Instr::Posit(p) => p,
        other => panic!("not a posit instr: {other:?}"),
    }
}

#[test]
fn fadd_ignores_rm() {
    // fadd.s f3, f1, f2 with rm=111
    let w = 0x0020_F1D3;
    let p = posit(dec(w).unwrap());
    assert_eq!((p.op, p.rd, p.rs1, p.rs2, p.rm), (PositOp::FaddS, 3, 1, 2, 7));
    assert_eq!(p.fpu_op(), Some(FpuOp::Add));
    assert_eq!(encode(&Instr::Posit(p)).unwrap(), w);
}

#[test]
fn fcvt_w_rounding_modes() {
    let base = PositInstr::unary(PositOp::FcvtWS, 10, 1);
    let rtz = encode(&Instr::Posit(base.with_rm(0b001))).unwrap();
    assert_eq!(
        posit(dec(rtz).unwrap()).fpu_op(),
        Some(FpuOp::PositToInt { unsigned: false, rounding: IntRounding::TowardZero })
    );
    for rm in [0b000, 0b111] {
        let w = encode(&Instr::Posit(base.with_rm(rm))).unwrap();
        assert_eq!(
            posit(dec(w).unwrap()).fpu_op(),
            Some(FpuOp::PositToInt { unsigned: false, rounding: IntRounding::NearestEven })
        );
    }
    let w = encode(&Instr::Posit(base)).unwrap();
    for rm in 2..7 {
        assert!(dec(w | rm << 12).is_err());
    }
    assert!(encode(&Instr::Posit(base.with_rm(0b010))).is_err());
}

#[test]
fn fcvt_es_format() {
    let i = Instr::FcvtEs(FcvtEsInstr { reg: 5, from_es: 2, to_es: 3, opcode: OPC_CUSTOM_0 as u8 });
    let w = encode(&i).unwrap();
    assert_eq!(w >> 25, 0b111_1100);
    assert_eq!((w >> 20) & 0x1F, 3);
    assert_eq!((w >> 15) & 0x1F, 2);
    assert_eq!((w >> 12) & 7, 0);
    assert_eq!((w >> 7) & 0x1F, 5);
    assert_eq!(w & 0x7F, OPC_CUSTOM_0);
    assert_eq!(dec(w).unwrap(), i);

    // Illegal es values.
    assert!(dec(w & !(0x1F << 20) | 4 << 20).is_err());
    assert!(dec(w & !(0x1F << 15) | 1 << 15).is_err());

    // On another opcode the same bits are just a custom word, unless configured.
    let w1 = w & !0x7F | OPC_CUSTOM_1;
    assert!(matches!(dec(w1).unwrap(), Instr::Custom(_)));
    let cfg = DecodeConfig { fcvt_es_opcode: OPC_CUSTOM_1 };
    assert!(matches!(decode(w1, &cfg).unwrap(), Instr::FcvtEs(_)));
}

#[test]
fn fmadd_r4_layout() {
    let i = Instr::Posit(PositInstr::fused(PositOp::FmaddS, 4, 1, 2, 3));
    let w = encode(&i).unwrap();
    assert_eq!(w & 0x7F, OPC_MADD);
    assert_eq!((w >> 7) & 0x1F, 4);
    assert_eq!((w >> 15) & 0x1F, 1);
    assert_eq!((w >> 20) & 0x1F, 2);
    assert_eq!((w >> 25) & 3, 0);
    assert_eq!(w >> 27, 3);
    // A non-single fmt field is not part of this ISA.
    assert!(dec(w | 1 << 25).is_err());
}

#[test]
fn zero_word_is_illegal() {
    assert_eq!(dec(0), Err(IllegalInstruction(0)));
    assert!(dec(0xFFFF_FFFF).is_err());
}

#[test]
fn custom_views() {
    let c = RoccInstr::from_word(0b1010101_00011_00010_110_00001_0101011);
    assert_eq!((c.funct7, c.rs2, c.rs1, c.rd), (0b1010101, 3, 2, 1));
    assert!(c.xd && c.xs1 && !c.xs2);
    assert_eq!(c.r4(), (0b10101, 0b01));
    assert_eq!(c.i_type(), (0b1010101_00011, false));
    assert_eq!(c.s_type(), (0b1010101_00001, true));
    assert_eq!(c.to_word(), 0b1010101_00011_00010_110_00001_0101011);
}

#[test]
fn disassembly_format() {
    let w = encode(&Instr::Posit(PositInstr::new(PositOp::FaddS, 3, 1, 2))).unwrap();
    assert_eq!(disassemble(w, &DecodeConfig::default()), format!("FADD.S p3, p1, p2 # raw={w:#010x}"));
    let w = encode(&Instr::Posit(PositInstr::unary(PositOp::FcvtWS, 5, 1).with_rm(1))).unwrap();
    assert!(disassemble(w, &DecodeConfig::default()).starts_with("FCVT.W.S x5, p1, rtz #"));
    assert_eq!(disassemble(0, &DecodeConfig::default()), "ILLEGAL # raw=0x00000000");
}

#[test]
fn pcsr_semantics() {
    let mut p = Pcsr::default();
    assert_eq!(p.es_mode(), 2);
    p.access(CSR_FCSR, CsrOp::ReadWrite, 3 << 8, true);
    assert_eq!(p.es_mode(), 3);
    // Illegal es values are dropped.
    p.access(CSR_FCSR, CsrOp::ReadWrite, 5 << 8, true);
    assert_eq!(p.es_mode(), 3);
    // rm is tied off.
    p.access(CSR_FRM, CsrOp::ReadWrite, 0b010, true);
    assert_eq!(p.read(CSR_FRM), Some(0));
    p.access(CSR_FCSR, CsrOp::ReadSet, 0b111 << 5, true);
    assert_eq!(p.read(CSR_FCSR).unwrap() >> 5 & 7, 0);
    // DZ is sticky until software clears it.
    p.raise(FLAG_DZ);
    p.raise(0);
    assert_eq!(p.read(CSR_FFLAGS), Some(FLAG_DZ));
    assert_eq!(p.access(CSR_FFLAGS, CsrOp::ReadClear, FLAG_DZ, true), Some(FLAG_DZ));
    assert_eq!(p.fflags(), 0);
    assert_eq!(p.read(0x300), None);
}
