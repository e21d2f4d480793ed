use thiserror::Error;

use super::*;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("register {0} out of range")]
    Register(u32),
    #[error("immediate {value} does not fit {what}")]
    Immediate { what: &'static str, value: i64 },
    #[error("{0} field is not encodable for this instruction")]
    Field(&'static str),
}

fn reg(r: Reg) -> Result<u32, EncodeError> {
    if r < 32 {
        Ok(u32::from(r))
    } else {
        Err(EncodeError::Register(r.into()))
    }
}

fn signed(v: i32, bits: u32, align: u32, what: &'static str) -> Result<u32, EncodeError> {
    let lo = -(1i64 << (bits - 1));
    let hi = (1i64 << (bits - 1)) - 1;
    let v64 = i64::from(v);
    if v64 < lo || v64 > hi || v64 % i64::from(align) != 0 {
        return Err(EncodeError::Immediate { what, value: v64 });
    }
    Ok(v as u32)
}

fn r_type(opcode: u32, f3: u32, f7: u32, rd: Reg, rs1: Reg, rs2: Reg) -> Result<u32, EncodeError> {
    Ok(opcode | reg(rd)? << 7 | f3 << 12 | reg(rs1)? << 15 | reg(rs2)? << 20 | f7 << 25)
}

fn i_type(opcode: u32, f3: u32, rd: Reg, rs1: Reg, imm: i32) -> Result<u32, EncodeError> {
    let imm = signed(imm, 12, 1, "12-bit I immediate")?;
    Ok(opcode | reg(rd)? << 7 | f3 << 12 | reg(rs1)? << 15 | imm << 20)
}

fn s_type(opcode: u32, f3: u32, rs1: Reg, rs2: Reg, imm: i32) -> Result<u32, EncodeError> {
    let imm = signed(imm, 12, 1, "12-bit S immediate")?;
    Ok(opcode | (imm & 0x1F) << 7 | f3 << 12 | reg(rs1)? << 15 | reg(rs2)? << 20 | (imm >> 5 & 0x7F) << 25)
}

fn upper(imm: u32) -> Result<u32, EncodeError> {
    if imm > 0xF_FFFF {
        return Err(EncodeError::Immediate { what: "20-bit upper immediate", value: imm.into() });
    }
    Ok(imm << 12)
}

pub fn encode(instr: &Instr) -> Result<u32, EncodeError> {
    Ok(match *instr {
        Instr::Lui { rd, imm } => OPC_LUI | reg(rd)? << 7 | upper(imm)?,
        Instr::Auipc { rd, imm } => OPC_AUIPC | reg(rd)? << 7 | upper(imm)?,
        Instr::Jal { rd, offset } => {
            let o = signed(offset, 21, 2, "JAL offset")?;
            OPC_JAL
                | reg(rd)? << 7
                | (o & 0xF_F000)
                | (o >> 11 & 1) << 20
                | (o >> 1 & 0x3FF) << 21
                | (o >> 20 & 1) << 31
        }
        Instr::Jalr { rd, rs1, offset } => i_type(OPC_JALR, 0, rd, rs1, offset)?,
        Instr::Branch { kind, rs1, rs2, offset } => {
            let f3 = match kind {
                BranchKind::Beq => 0b000,
                BranchKind::Bne => 0b001,
                BranchKind::Blt => 0b100,
                BranchKind::Bge => 0b101,
                BranchKind::Bltu => 0b110,
                BranchKind::Bgeu => 0b111,
            };
            let o = signed(offset, 13, 2, "branch offset")?;
            OPC_BRANCH
                | (o >> 11 & 1) << 7
                | (o >> 1 & 0xF) << 8
                | f3 << 12
                | reg(rs1)? << 15
                | reg(rs2)? << 20
                | (o >> 5 & 0x3F) << 25
                | (o >> 12 & 1) << 31
        }
        Instr::Load { kind, rd, rs1, offset } => {
            let f3 = match kind {
                LoadKind::Lb => 0b000,
                LoadKind::Lh => 0b001,
                LoadKind::Lw => 0b010,
                LoadKind::Lbu => 0b100,
                LoadKind::Lhu => 0b101,
            };
            i_type(OPC_LOAD, f3, rd, rs1, offset)?
        }
        Instr::Store { kind, rs1, rs2, offset } => {
            let f3 = match kind {
                StoreKind::Sb => 0b000,
                StoreKind::Sh => 0b001,
                StoreKind::Sw => 0b010,
            };
            s_type(OPC_STORE, f3, rs1, rs2, offset)?
        }
        Instr::OpImm { op, rd, rs1, imm } => {
            let shift = |f3: u32, f7: u32| -> Result<u32, EncodeError> {
                if !(0..32).contains(&imm) {
                    return Err(EncodeError::Immediate { what: "shift amount", value: imm.into() });
                }
                r_type(OPC_OP_IMM, f3, f7, rd, rs1, imm as Reg)
            };
            match op {
                AluOp::Add => i_type(OPC_OP_IMM, 0b000, rd, rs1, imm)?,
                AluOp::Slt => i_type(OPC_OP_IMM, 0b010, rd, rs1, imm)?,
                AluOp::Sltu => i_type(OPC_OP_IMM, 0b011, rd, rs1, imm)?,
                AluOp::Xor => i_type(OPC_OP_IMM, 0b100, rd, rs1, imm)?,
                AluOp::Or => i_type(OPC_OP_IMM, 0b110, rd, rs1, imm)?,
                AluOp::And => i_type(OPC_OP_IMM, 0b111, rd, rs1, imm)?,
                AluOp::Sll => shift(0b001, 0)?,
                AluOp::Srl => shift(0b101, 0)?,
                AluOp::Sra => shift(0b101, 0b010_0000)?,
                AluOp::Sub => return Err(EncodeError::Field("op (no SUBI)")),
            }
        }
        Instr::Op { op, rd, rs1, rs2 } => {
            let (f3, f7) = match op {
                AluOp::Add => (0b000, 0),
                AluOp::Sub => (0b000, 0b010_0000),
                AluOp::Sll => (0b001, 0),
                AluOp::Slt => (0b010, 0),
                AluOp::Sltu => (0b011, 0),
                AluOp::Xor => (0b100, 0),
                AluOp::Srl => (0b101, 0),
                AluOp::Sra => (0b101, 0b010_0000),
                AluOp::Or => (0b110, 0),
                AluOp::And => (0b111, 0),
            };
            r_type(OPC_OP, f3, f7, rd, rs1, rs2)?
        }
        Instr::Fence { pred, succ } => {
            if pred > 15 || succ > 15 {
                return Err(EncodeError::Field("fence set"));
            }
            OPC_MISC_MEM | u32::from(pred) << 24 | u32::from(succ) << 20
        }
        Instr::Ecall => 0x0000_0073,
        Instr::Ebreak => 0x0010_0073,
        Instr::Csr { op, rd, src, csr, imm } => {
            if csr > 0xFFF {
                return Err(EncodeError::Immediate { what: "CSR address", value: csr.into() });
            }
            let f3 = match op {
                CsrOp::ReadWrite => 0b001,
                CsrOp::ReadSet => 0b010,
                CsrOp::ReadClear => 0b011,
            } | if imm { 0b100 } else { 0 };
            OPC_SYSTEM | reg(rd)? << 7 | f3 << 12 | reg(src)? << 15 | u32::from(csr) << 20
        }
        Instr::Flw { rd, rs1, offset } => i_type(OPC_LOAD_FP, 0b010, rd, rs1, offset)?,
        Instr::Fsw { rs1, rs2, offset } => s_type(OPC_STORE_FP, 0b010, rs1, rs2, offset)?,
        Instr::Posit(p) => encode_posit(&p)?,
        Instr::FcvtEs(f) => {
            if !matches!(f.from_es, 2 | 3) || !matches!(f.to_es, 2 | 3) {
                return Err(EncodeError::Field("es (must be 2 or 3)"));
            }
            if !CUSTOM_OPCODES.contains(&u32::from(f.opcode)) {
                return Err(EncodeError::Field("opcode (must be a custom opcode)"));
            }
            r_type(u32::from(f.opcode), 0, FUNCT7_FCVT_ES, f.reg, f.from_es, f.to_es)?
        }
        Instr::Custom(c) => {
            if !CUSTOM_OPCODES.contains(&u32::from(c.opcode)) {
                return Err(EncodeError::Field("opcode (must be a custom opcode)"));
            }
            if c.funct7 > 0x7F {
                return Err(EncodeError::Field("funct7"));
            }
            reg(c.rd)?;
            reg(c.rs1)?;
            reg(c.rs2)?;
            c.to_word()
        }
    })
}

fn encode_posit(p: &PositInstr) -> Result<u32, EncodeError> {
    use PositOp::*;
    if p.rm > 7 {
        return Err(EncodeError::Field("rm"));
    }
    if !p.op.is_fused() && p.rs3 != 0 {
        return Err(EncodeError::Field("rs3"));
    }
    if p.op.fixed_funct3().is_some() && p.rm != 0 {
        return Err(EncodeError::Field("rm (funct3 is fixed)"));
    }
    if p.op.uses_rm() && !matches!(p.rm, 0b000 | 0b001 | 0b111) {
        return Err(EncodeError::Field("rm (only RNE, RTZ or dynamic)"));
    }
    if p.op.sources() == 1 && p.rs2 != 0 {
        return Err(EncodeError::Field("rs2"));
    }
    let rm = u32::from(p.rm);
    if p.op.is_fused() {
        let opcode = match p.op {
            FmaddS => OPC_MADD,
            FmsubS => OPC_MSUB,
            FnmsubS => OPC_NMSUB,
            _ => OPC_NMADD,
        };
        return Ok(r_type(opcode, rm, 0, p.rd, p.rs1, p.rs2)? | reg(p.rs3)? << 27);
    }
    // (funct7, rs2 selector or None for a register operand)
    let (f7, sel): (u32, Option<Reg>) = match p.op {
        FaddS => (0b000_0000, None),
        FsubS => (0b000_0100, None),
        FmulS => (0b000_1000, None),
        FdivS => (0b000_1100, None),
        FsqrtS => (0b010_1100, Some(0)),
        FsgnjS | FsgnjnS | FsgnjxS => (0b001_0000, None),
        FminS | FmaxS => (0b001_0100, None),
        FcvtWS => (0b110_0000, Some(0)),
        FcvtWuS => (0b110_0000, Some(1)),
        FmvXW | FclassS => (0b111_0000, Some(0)),
        FeqS | FltS | FleS => (0b101_0000, None),
        FcvtSW => (0b110_1000, Some(0)),
        FcvtSWu => (0b110_1000, Some(1)),
        FmvWX => (0b111_1000, Some(0)),
        FmaddS | FmsubS | FnmsubS | FnmaddS => unreachable!(),
    };
    let f3 = p.op.fixed_funct3().unwrap_or(rm);
    r_type(OPC_OP_FP, f3, f7, p.rd, p.rs1, sel.unwrap_or(p.rs2))
}
