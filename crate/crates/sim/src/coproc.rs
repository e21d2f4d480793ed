//! Coprocessor integration: the posit register file sits behind an offload
//! boundary and is reachable only through [`OffloadTransaction`]s.
//!
//! The core forwards every posit-unit word (F-extension posit ops, FLW/FSW,
//! and custom-opcode words) unchanged. Integer operands cross the boundary
//! only when the xs1/xs2 bits ask for them, and a value comes back only
//! when xd is set; the core stalls for the response. For F-extension words
//! the three bits are implied by which register files the op uses.

use crate::isa::{decode, DecodeConfig, Instr, RegFile};
use crate::mem::Memory;
use crate::unit::{self, PositRegs, UnitResult};

/// Register-traffic bits for a posit-unit instruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Traffic {
    pub xd: bool,
    pub xs1: bool,
    pub xs2: bool,
}

impl Traffic {
    pub fn of(instr: &Instr) -> Traffic {
        match instr {
            Instr::Posit(p) => Traffic {
                xd: p.op.dst_file() == RegFile::X,
                xs1: p.op.src_file() == RegFile::X,
                xs2: false,
            },
            // rs1 is the integer base address.
            Instr::Flw { .. } | Instr::Fsw { .. } => Traffic { xd: false, xs1: true, xs2: false },
            Instr::Custom(c) => Traffic { xd: c.xd, xs1: c.xs1, xs2: c.xs2 },
            _ => Traffic::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OffloadTransaction {
    pub word: u32,
    pub rs1_value: Option<u32>,
    pub rs2_value: Option<u32>,
    /// A response value is expected (xd).
    pub xd: bool,
    /// es-mode from the core's pcsr.
    pub es_mode: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResponseStatus {
    Done,
    /// The coprocessor does not implement this word.
    Illegal,
    LoadFault { addr: u32, misaligned: bool },
    StoreFault { addr: u32, misaligned: bool },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OffloadResponse {
    pub status: ResponseStatus,
    /// Present iff the transaction had xd set and completed.
    pub value: Option<u32>,
    pub flags: u32,
}

impl OffloadResponse {
    fn status(status: ResponseStatus) -> Self {
        Self { status, value: None, flags: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coprocessor {
    pregs: PositRegs,
    decode: DecodeConfig,
}

impl Coprocessor {
    pub fn new(decode: DecodeConfig) -> Self {
        Self { pregs: [0; 32], decode }
    }

    /// Debug view of the private register file.
    pub fn pregs(&self) -> &PositRegs {
        &self.pregs
    }

    pub fn pregs_mut(&mut self) -> &mut PositRegs {
        &mut self.pregs
    }

    pub fn offload(&mut self, txn: &OffloadTransaction, mem: &mut Memory) -> OffloadResponse {
        let instr = match decode(txn.word, &self.decode) {
            Ok(i) => i,
            Err(_) => return OffloadResponse::status(ResponseStatus::Illegal),
        };
        let result = match instr {
            Instr::Posit(p) => unit::execute(&p, &self.pregs, txn.rs1_value.unwrap_or(0), txn.es_mode),
            Instr::FcvtEs(f) => unit::fcvt_es(&f, &self.pregs),
            Instr::Flw { rd, offset, .. } => {
                let addr = txn.rs1_value.unwrap_or(0).wrapping_add(offset as u32);
                if !addr.is_multiple_of(4) {
                    return OffloadResponse::status(ResponseStatus::LoadFault { addr, misaligned: true });
                }
                match mem.load_word(addr) {
                    Ok(v) => UnitResult { p_write: Some((rd, v)), ..UnitResult::default() },
                    Err(_) => return OffloadResponse::status(ResponseStatus::LoadFault { addr, misaligned: false }),
                }
            }
            Instr::Fsw { rs2, offset, .. } => {
                let addr = txn.rs1_value.unwrap_or(0).wrapping_add(offset as u32);
                if !addr.is_multiple_of(4) {
                    return OffloadResponse::status(ResponseStatus::StoreFault { addr, misaligned: true });
                }
                if mem.store_word(addr, self.pregs[usize::from(rs2)]).is_err() {
                    return OffloadResponse::status(ResponseStatus::StoreFault { addr, misaligned: false });
                }
                UnitResult::default()
            }
            // Only FCVT.ES is populated in the custom space.
            _ => return OffloadResponse::status(ResponseStatus::Illegal),
        };
        if let Some((rd, v)) = result.p_write {
            self.pregs[usize::from(rd)] = v;
        }
        OffloadResponse {
            status: ResponseStatus::Done,
            value: if txn.xd { Some(result.x_write.map_or(0, |(_, v)| v)) } else { None },
            flags: result.flags,
        }
    }
}
