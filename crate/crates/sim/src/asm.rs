//! A small programmatic assembler: labels, forward references, `li`/`la`
//! and inline data words.

use std::collections::HashMap;

use thiserror::Error;

use crate::isa::{
    encode, AluOp, BranchKind, CsrOp, EncodeError, FcvtEsInstr, Instr, LoadKind, PositInstr, PositOp, Reg, StoreKind,
    OPC_CUSTOM_0,
};
use crate::loader::Image;
use crate::machine::SYS_EXIT;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AsmError {
    #[error("undefined label `{0}`")]
    Undefined(String),
    #[error("label `{0}` defined twice")]
    Duplicate(String),
    #[error("at {addr:#010x}: {source}")]
    Encode { addr: u32, source: EncodeError },
}

#[derive(Debug, Clone)]
enum Item {
    Word(u32),
    Instr(Instr),
    Branch { kind: BranchKind, rs1: Reg, rs2: Reg, label: String },
    Jal { rd: Reg, label: String },
    /// auipc + addi pair.
    La { rd: Reg, label: String },
}

impl Item {
    fn size(&self) -> u32 {
        match self {
            Item::La { .. } => 8,
            _ => 4,
        }
    }
}

pub mod reg {
    use crate::isa::Reg;
    pub const ZERO: Reg = 0;
    pub const RA: Reg = 1;
    pub const SP: Reg = 2;
    pub const T0: Reg = 5;
    pub const T1: Reg = 6;
    pub const T2: Reg = 7;
    pub const S0: Reg = 8;
    pub const S1: Reg = 9;
    pub const A0: Reg = 10;
    pub const A1: Reg = 11;
    pub const A2: Reg = 12;
    pub const A3: Reg = 13;
    pub const A4: Reg = 14;
    pub const A5: Reg = 15;
    pub const A6: Reg = 16;
    pub const A7: Reg = 17;
}

#[derive(Debug, Clone)]
pub struct Asm {
    base: u32,
    pc: u32,
    items: Vec<(u32, Item)>,
    labels: HashMap<String, u32>,
    duplicate: Option<String>,
    fcvt_es_opcode: u8,
}

/// Assembled program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub base: u32,
    pub words: Vec<u32>,
    pub labels: HashMap<String, u32>,
}

impl Program {
    pub fn bytes(&self) -> Vec<u8> {
        self.words.iter().flat_map(|w| w.to_le_bytes()).collect()
    }

    pub fn image(&self) -> Image {
        Image::flat(self.base, self.bytes())
    }

    pub fn label(&self, name: &str) -> Option<u32> {
        self.labels.get(name).copied()
    }
}

impl Asm {
    pub fn new(base: u32) -> Self {
        Self {
            base,
            pc: base,
            items: Vec::new(),
            labels: HashMap::new(),
            duplicate: None,
            fcvt_es_opcode: OPC_CUSTOM_0 as u8,
        }
    }

    pub fn with_fcvt_es_opcode(mut self, opcode: u32) -> Self {
        self.fcvt_es_opcode = opcode as u8;
        self
    }

    pub fn here(&self) -> u32 {
        self.pc
    }

    fn push(&mut self, item: Item) -> &mut Self {
        let size = item.size();
        self.items.push((self.pc, item));
        self.pc += size;
        self
    }

    pub fn label(&mut self, name: &str) -> &mut Self {
        if self.labels.insert(name.to_string(), self.pc).is_some() && self.duplicate.is_none() {
            self.duplicate = Some(name.to_string());
        }
        self
    }

    pub fn emit(&mut self, i: Instr) -> &mut Self {
        self.push(Item::Instr(i))
    }

    pub fn word(&mut self, w: u32) -> &mut Self {
        self.push(Item::Word(w))
    }

    pub fn words(&mut self, ws: &[u32]) -> &mut Self {
        for &w in ws {
            self.word(w);
        }
        self
    }

    /// Reserves `n` zero words.
    pub fn space(&mut self, n: usize) -> &mut Self {
        for _ in 0..n {
            self.word(0);
        }
        self
    }

    pub fn branch(&mut self, kind: BranchKind, rs1: Reg, rs2: Reg, label: &str) -> &mut Self {
        self.push(Item::Branch { kind, rs1, rs2, label: label.to_string() })
    }

    pub fn jal(&mut self, rd: Reg, label: &str) -> &mut Self {
        self.push(Item::Jal { rd, label: label.to_string() })
    }

    pub fn j(&mut self, label: &str) -> &mut Self {
        self.jal(0, label)
    }

    pub fn la(&mut self, rd: Reg, label: &str) -> &mut Self {
        self.push(Item::La { rd, label: label.to_string() })
    }

    /// Loads a 32-bit constant (one or two instructions).
    pub fn li(&mut self, rd: Reg, value: i32) -> &mut Self {
        if (-2048..2048).contains(&value) {
            return self.addi(rd, 0, value);
        }
        let v = value as u32;
        let hi = v.wrapping_add(0x800) >> 12;
        let lo = v.wrapping_sub(hi << 12) as i32;
        self.emit(Instr::Lui { rd, imm: hi & 0xF_FFFF });
        if lo != 0 {
            self.addi(rd, rd, lo);
        }
        self
    }

    pub fn addi(&mut self, rd: Reg, rs1: Reg, imm: i32) -> &mut Self {
        self.emit(Instr::OpImm { op: AluOp::Add, rd, rs1, imm })
    }

    pub fn op_imm(&mut self, op: AluOp, rd: Reg, rs1: Reg, imm: i32) -> &mut Self {
        self.emit(Instr::OpImm { op, rd, rs1, imm })
    }

    pub fn op(&mut self, op: AluOp, rd: Reg, rs1: Reg, rs2: Reg) -> &mut Self {
        self.emit(Instr::Op { op, rd, rs1, rs2 })
    }

    pub fn lw(&mut self, rd: Reg, rs1: Reg, offset: i32) -> &mut Self {
        self.emit(Instr::Load { kind: LoadKind::Lw, rd, rs1, offset })
    }

    pub fn sw(&mut self, rs2: Reg, rs1: Reg, offset: i32) -> &mut Self {
        self.emit(Instr::Store { kind: StoreKind::Sw, rs1, rs2, offset })
    }

    pub fn flw(&mut self, rd: Reg, rs1: Reg, offset: i32) -> &mut Self {
        self.emit(Instr::Flw { rd, rs1, offset })
    }

    pub fn fsw(&mut self, rs2: Reg, rs1: Reg, offset: i32) -> &mut Self {
        self.emit(Instr::Fsw { rs1, rs2, offset })
    }

    /// Two-source (or one-source, with `rs2` ignored) posit op.
    pub fn fop(&mut self, op: PositOp, rd: Reg, rs1: Reg, rs2: Reg) -> &mut Self {
        let rs2 = if op.sources() >= 2 { rs2 } else { 0 };
        self.emit(Instr::Posit(PositInstr::new(op, rd, rs1, rs2)))
    }

    pub fn fused(&mut self, op: PositOp, rd: Reg, rs1: Reg, rs2: Reg, rs3: Reg) -> &mut Self {
        self.emit(Instr::Posit(PositInstr::fused(op, rd, rs1, rs2, rs3)))
    }

    pub fn fcvt_es(&mut self, reg: Reg, from_es: u8, to_es: u8) -> &mut Self {
        let opcode = self.fcvt_es_opcode;
        self.emit(Instr::FcvtEs(FcvtEsInstr { reg, from_es, to_es, opcode }))
    }

    pub fn csrrw(&mut self, rd: Reg, csr: u16, rs1: Reg) -> &mut Self {
        self.emit(Instr::Csr { op: CsrOp::ReadWrite, rd, src: rs1, csr, imm: false })
    }

    pub fn csrr(&mut self, rd: Reg, csr: u16) -> &mut Self {
        self.emit(Instr::Csr { op: CsrOp::ReadSet, rd, src: 0, csr, imm: false })
    }

    /// `exit(a0)` via the ECALL convention.
    pub fn exit(&mut self) -> &mut Self {
        self.li(reg::A7, SYS_EXIT as i32).emit(Instr::Ecall)
    }

    pub fn finish(&self) -> Result<Program, AsmError> {
        if let Some(d) = &self.duplicate {
            return Err(AsmError::Duplicate(d.clone()));
        }
        let resolve = |l: &str| self.labels.get(l).copied().ok_or_else(|| AsmError::Undefined(l.to_string()));
        let enc = |addr: u32, i: Instr| encode(&i).map_err(|source| AsmError::Encode { addr, source });
        let mut words = Vec::with_capacity(self.items.len());
        for (addr, item) in &self.items {
            let addr = *addr;
            match item {
                Item::Word(w) => words.push(*w),
                Item::Instr(i) => words.push(enc(addr, *i)?),
                Item::Branch { kind, rs1, rs2, label } => {
                    let offset = resolve(label)?.wrapping_sub(addr) as i32;
                    words.push(enc(addr, Instr::Branch { kind: *kind, rs1: *rs1, rs2: *rs2, offset })?);
                }
                Item::Jal { rd, label } => {
                    let offset = resolve(label)?.wrapping_sub(addr) as i32;
                    words.push(enc(addr, Instr::Jal { rd: *rd, offset })?);
                }
                Item::La { rd, label } => {
                    let delta = resolve(label)?.wrapping_sub(addr);
                    let hi = delta.wrapping_add(0x800) >> 12;
                    let lo = delta.wrapping_sub(hi << 12) as i32;
                    words.push(enc(addr, Instr::Auipc { rd: *rd, imm: hi & 0xF_FFFF })?);
                    words.push(enc(addr + 4, Instr::OpImm { op: AluOp::Add, rd: *rd, rs1: *rd, imm: lo })?);
                }
            }
        }
        Ok(Program { base: self.base, words, labels: self.labels.clone() })
    }
}
