use thiserror::Error;

use super::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("illegal instruction {0:#010x}")]
pub struct IllegalInstruction(pub u32);

/// Decoder options.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecodeConfig {
    /// Major opcode that carries FCVT.ES; one of the four custom opcodes.
    pub fcvt_es_opcode: u32,
}

impl Default for DecodeConfig {
    fn default() -> Self {
        Self { fcvt_es_opcode: OPC_CUSTOM_0 }
    }
}

fn rd(w: u32) -> Reg {
    ((w >> 7) & 0x1F) as Reg
}

fn rs1(w: u32) -> Reg {
    ((w >> 15) & 0x1F) as Reg
}

fn rs2(w: u32) -> Reg {
    ((w >> 20) & 0x1F) as Reg
}

fn rs3(w: u32) -> Reg {
    (w >> 27) as Reg
}

fn funct3(w: u32) -> u32 {
    (w >> 12) & 0b111
}

fn funct7(w: u32) -> u32 {
    w >> 25
}

fn i_imm(w: u32) -> i32 {
    (w as i32) >> 20
}

fn s_imm(w: u32) -> i32 {
    (((w & 0xFE00_0000) as i32) >> 20) | ((w >> 7) & 0x1F) as i32
}

fn b_imm(w: u32) -> i32 {
    (((w & 0x8000_0000) as i32) >> 19)
        | ((w & 0x80) << 4) as i32
        | ((w >> 20) & 0x7E0) as i32
        | ((w >> 7) & 0x1E) as i32
}

fn j_imm(w: u32) -> i32 {
    (((w & 0x8000_0000) as i32) >> 11)
        | (w & 0xF_F000) as i32
        | ((w >> 9) & 0x800) as i32
        | ((w >> 20) & 0x7FE) as i32
}

pub fn decode(w: u32, cfg: &DecodeConfig) -> Result<Instr, IllegalInstruction> {
    let illegal = Err(IllegalInstruction(w));
    let opcode = w & 0x7F;
    let f3 = funct3(w);
    let f7 = funct7(w);

    let instr = match opcode {
        OPC_LUI => Instr::Lui { rd: rd(w), imm: w >> 12 },
        OPC_AUIPC => Instr::Auipc { rd: rd(w), imm: w >> 12 },
        OPC_JAL => Instr::Jal { rd: rd(w), offset: j_imm(w) },
        OPC_JALR if f3 == 0 => Instr::Jalr { rd: rd(w), rs1: rs1(w), offset: i_imm(w) },
        OPC_BRANCH => {
            let kind = match f3 {
                0b000 => BranchKind::Beq,
                0b001 => BranchKind::Bne,
                0b100 => BranchKind::Blt,
                0b101 => BranchKind::Bge,
                0b110 => BranchKind::Bltu,
                0b111 => BranchKind::Bgeu,
                _ => return illegal,
            };
            Instr::Branch { kind, rs1: rs1(w), rs2: rs2(w), offset: b_imm(w) }
        }
        OPC_LOAD => {
            let kind = match f3 {
                0b000 => LoadKind::Lb,
                0b001 => LoadKind::Lh,
                0b010 => LoadKind::Lw,
                0b100 => LoadKind::Lbu,
                0b101 => LoadKind::Lhu,
                _ => return illegal,
            };
            Instr::Load { kind, rd: rd(w), rs1: rs1(w), offset: i_imm(w) }
        }
        OPC_STORE => {
            let kind = match f3 {
                0b000 => StoreKind::Sb,
                0b001 => StoreKind::Sh,
                0b010 => StoreKind::Sw,
                _ => return illegal,
            };
            Instr::Store { kind, rs1: rs1(w), rs2: rs2(w), offset: s_imm(w) }
        }
        OPC_OP_IMM => {
            let shamt = rs2(w) as i32;
            let (op, imm) = match (f3, f7) {
                (0b000, _) => (AluOp::Add, i_imm(w)),
                (0b010, _) => (AluOp::Slt, i_imm(w)),
                (0b011, _) => (AluOp::Sltu, i_imm(w)),
                (0b100, _) => (AluOp::Xor, i_imm(w)),
                (0b110, _) => (AluOp::Or, i_imm(w)),
                (0b111, _) => (AluOp::And, i_imm(w)),
                (0b001, 0) => (AluOp::Sll, shamt),
                (0b101, 0) => (AluOp::Srl, shamt),
                (0b101, 0b010_0000) => (AluOp::Sra, shamt),
                _ => return illegal,
            };
            Instr::OpImm { op, rd: rd(w), rs1: rs1(w), imm }
        }
        OPC_OP => {
            let op = match (f3, f7) {
                (0b000, 0) => AluOp::Add,
                (0b000, 0b010_0000) => AluOp::Sub,
                (0b001, 0) => AluOp::Sll,
                (0b010, 0) => AluOp::Slt,
                (0b011, 0) => AluOp::Sltu,
                (0b100, 0) => AluOp::Xor,
                (0b101, 0) => AluOp::Srl,
                (0b101, 0b010_0000) => AluOp::Sra,
                (0b110, 0) => AluOp::Or,
                (0b111, 0) => AluOp::And,
                _ => return illegal,
            };
            Instr::Op { op, rd: rd(w), rs1: rs1(w), rs2: rs2(w) }
        }
        OPC_MISC_MEM if f3 == 0 => Instr::Fence {
            pred: ((w >> 24) & 0xF) as u8,
            succ: ((w >> 20) & 0xF) as u8,
        },
        OPC_SYSTEM => match f3 {
            0b000 => match w {
                0x0000_0073 => Instr::Ecall,
                0x0010_0073 => Instr::Ebreak,
                _ => return illegal,
            },
            0b100 => return illegal,
            _ => {
                let op = match f3 & 0b11 {
                    0b01 => CsrOp::ReadWrite,
                    0b10 => CsrOp::ReadSet,
                    _ => CsrOp::ReadClear,
                };
                Instr::Csr { op, rd: rd(w), src: rs1(w), csr: (w >> 20) as u16, imm: f3 & 0b100 != 0 }
            }
        },
        OPC_LOAD_FP if f3 == 0b010 => Instr::Flw { rd: rd(w), rs1: rs1(w), offset: i_imm(w) },
        OPC_STORE_FP if f3 == 0b010 => Instr::Fsw { rs1: rs1(w), rs2: rs2(w), offset: s_imm(w) },
        OPC_MADD | OPC_MSUB | OPC_NMSUB | OPC_NMADD => {
            if (w >> 25) & 0b11 != 0 {
                return illegal;
            }
            let op = match opcode {
                OPC_MADD => PositOp::FmaddS,
                OPC_MSUB => PositOp::FmsubS,
                OPC_NMSUB => PositOp::FnmsubS,
                _ => PositOp::FnmaddS,
            };
            Instr::Posit(PositInstr { op, rd: rd(w), rs1: rs1(w), rs2: rs2(w), rs3: rs3(w), rm: f3 as u8 })
        }
        OPC_OP_FP => match decode_op_fp(w) {
            Some(p) => Instr::Posit(p),
            None => return illegal,
        },
        op if CUSTOM_OPCODES.contains(&op) => {
            if op == cfg.fcvt_es_opcode && f7 == FUNCT7_FCVT_ES && f3 == 0 {
                let (to_es, from_es) = (rs2(w), rs1(w));
                if !matches!(to_es, 2 | 3) || !matches!(from_es, 2 | 3) {
                    return illegal;
                }
                Instr::FcvtEs(FcvtEsInstr { reg: rd(w), from_es, to_es, opcode: op as u8 })
            } else {
                Instr::Custom(RoccInstr::from_word(w))
            }
        }
        _ => return illegal,
    };
    Ok(instr)
}

fn decode_op_fp(w: u32) -> Option<PositInstr> {
    use PositOp::*;
    let f3 = funct3(w);
    let r2 = rs2(w);
    let (op, rs2_field, rm) = match (funct7(w), f3, r2) {
        (0b000_0000, rm, r) => (FaddS, r, rm),
        (0b000_0100, rm, r) => (FsubS, r, rm),
        (0b000_1000, rm, r) => (FmulS, r, rm),
        (0b000_1100, rm, r) => (FdivS, r, rm),
        (0b010_1100, rm, 0) => (FsqrtS, 0, rm),
        (0b001_0000, 0b000, r) => (FsgnjS, r, 0),
        (0b001_0000, 0b001, r) => (FsgnjnS, r, 0),
        (0b001_0000, 0b010, r) => (FsgnjxS, r, 0),
        (0b001_0100, 0b000, r) => (FminS, r, 0),
        (0b001_0100, 0b001, r) => (FmaxS, r, 0),
        // Only RNE, RTZ and dynamic (frm is tied to RNE) are implemented.
        (0b110_0000, rm @ (0b000 | 0b001 | 0b111), 0) => (FcvtWS, 0, rm),
        (0b110_0000, rm @ (0b000 | 0b001 | 0b111), 1) => (FcvtWuS, 0, rm),
        (0b111_0000, 0b000, 0) => (FmvXW, 0, 0),
        (0b111_0000, 0b001, 0) => (FclassS, 0, 0),
        (0b101_0000, 0b010, r) => (FeqS, r, 0),
        (0b101_0000, 0b001, r) => (FltS, r, 0),
        (0b101_0000, 0b000, r) => (FleS, r, 0),
        (0b110_1000, rm, 0) => (FcvtSW, 0, rm),
        (0b110_1000, rm, 1) => (FcvtSWu, 0, rm),
        (0b111_1000, 0b000, 0) => (FmvWX, 0, 0),
        _ => return None,
    };
    Some(PositInstr { op, rd: rd(w), rs1: rs1(w), rs2: rs2_field, rs3: 0, rm: rm as u8 })
}
