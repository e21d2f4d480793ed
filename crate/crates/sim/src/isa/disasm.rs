use std::fmt;

use super::*;

/// `MNEMONIC operands # raw=0xXXXXXXXX`, or `ILLEGAL # raw=…`.
pub fn disassemble(word: u32, cfg: &DecodeConfig) -> String {
    match decode(word, cfg) {
        Ok(i) => format!("{i} # raw={word:#010x}"),
        Err(_) => format!("ILLEGAL # raw={word:#010x}"),
    }
}

fn reg_name(file: RegFile, r: Reg) -> String {
    match file {
        RegFile::X => format!("x{r}"),
        RegFile::P => format!("p{r}"),
    }
}

impl fmt::Display for Instr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Instr::Lui { rd, imm } => write!(f, "LUI x{rd}, {imm:#x}"),
            Instr::Auipc { rd, imm } => write!(f, "AUIPC x{rd}, {imm:#x}"),
            Instr::Jal { rd, offset } => write!(f, "JAL x{rd}, {offset}"),
            Instr::Jalr { rd, rs1, offset } => write!(f, "JALR x{rd}, {offset}(x{rs1})"),
            Instr::Branch { kind, rs1, rs2, offset } => {
                let m = match kind {
                    BranchKind::Beq => "BEQ",
                    BranchKind::Bne => "BNE",
                    BranchKind::Blt => "BLT",
                    BranchKind::Bge => "BGE",
                    BranchKind::Bltu => "BLTU",
                    BranchKind::Bgeu => "BGEU",
                };
                write!(f, "{m} x{rs1}, x{rs2}, {offset}")
            }
            Instr::Load { kind, rd, rs1, offset } => {
                let m = match kind {
                    LoadKind::Lb => "LB",
                    LoadKind::Lh => "LH",
                    LoadKind::Lw => "LW",
                    LoadKind::Lbu => "LBU",
                    LoadKind::Lhu => "LHU",
                };
                write!(f, "{m} x{rd}, {offset}(x{rs1})")
            }
            Instr::Store { kind, rs1, rs2, offset } => {
                let m = match kind {
                    StoreKind::Sb => "SB",
                    StoreKind::Sh => "SH",
                    StoreKind::Sw => "SW",
                };
                write!(f, "{m} x{rs2}, {offset}(x{rs1})")
            }
            Instr::OpImm { op, rd, rs1, imm } => write!(f, "{}I x{rd}, x{rs1}, {imm}", alu_name(op)),
            Instr::Op { op, rd, rs1, rs2 } => write!(f, "{} x{rd}, x{rs1}, x{rs2}", alu_name(op)),
            Instr::Fence { pred, succ } => write!(f, "FENCE {pred:#x}, {succ:#x}"),
            Instr::Ecall => f.write_str("ECALL"),
            Instr::Ebreak => f.write_str("EBREAK"),
            Instr::Csr { op, rd, src, csr, imm } => {
                let m = match op {
                    CsrOp::ReadWrite => "CSRRW",
                    CsrOp::ReadSet => "CSRRS",
                    CsrOp::ReadClear => "CSRRC",
                };
                if imm {
                    write!(f, "{m}I x{rd}, {csr:#05x}, {src}")
                } else {
                    write!(f, "{m} x{rd}, {csr:#05x}, x{src}")
                }
            }
            Instr::Flw { rd, rs1, offset } => write!(f, "FLW p{rd}, {offset}(x{rs1})"),
            Instr::Fsw { rs1, rs2, offset } => write!(f, "FSW p{rs2}, {offset}(x{rs1})"),
            Instr::Posit(p) => {
                let op = p.op;
                write!(f, "{} {}, {}", op.mnemonic(), reg_name(op.dst_file(), p.rd), reg_name(op.src_file(), p.rs1))?;
                if op.sources() >= 2 {
                    write!(f, ", p{}", p.rs2)?;
                }
                if op.is_fused() {
                    write!(f, ", p{}", p.rs3)?;
                }
                if op.uses_rm() && p.rm == 0b001 {
                    f.write_str(", rtz")?;
                }
                Ok(())
            }
            Instr::FcvtEs(c) => write!(f, "FCVT.ES p{}, {}, {}", c.reg, c.from_es, c.to_es),
            Instr::Custom(c) => write!(
                f,
                "CUSTOM{} f7={:#04x} rd={} rs1={} rs2={} xd={} xs1={} xs2={}",
                CUSTOM_OPCODES.iter().position(|&o| o == u32::from(c.opcode)).unwrap_or(0),
                c.funct7,
                c.rd,
                c.rs1,
                c.rs2,
                u8::from(c.xd),
                u8::from(c.xs1),
                u8::from(c.xs2)
            ),
        }
    }
}

fn alu_name(op: AluOp) -> &'static str {
    match op {
        AluOp::Add => "ADD",
        AluOp::Sub => "SUB",
        AluOp::Sll => "SLL",
        AluOp::Slt => "SLT",
        AluOp::Sltu => "SLTU",
        AluOp::Xor => "XOR",
        AluOp::Srl => "SRL",
        AluOp::Sra => "SRA",
        AluOp::Or => "OR",
        AluOp::And => "AND",
    }
}
