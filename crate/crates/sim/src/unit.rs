//! The posit execution unit shared by both integration modes. Execution is
//! a pure function of the operands; the caller commits the returned writes
//! and flags together at write-back.

use posit_core::{arith, PositConfig, PositWord};

use crate::isa::{FcvtEsInstr, PositInstr, PositOp, Reg, RegFile};

pub type PositRegs = [u32; 32];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct UnitResult {
    pub x_write: Option<(Reg, u32)>,
    pub p_write: Option<(Reg, u32)>,
    pub flags: u32,
}

fn datapath(es: u32) -> PositConfig {
    PositConfig::dual(es).unwrap_or_else(|e| panic!("es-mode {es} reached the datapath: {e}"))
}

/// Runs one posit instruction. `x1` is the integer rs1 value, used only by
/// ops whose source lives in the integer file.
pub fn execute(instr: &PositInstr, p: &PositRegs, x1: u32, es_mode: u32) -> UnitResult {
    let src = |r: Reg| p[usize::from(r)];
    let (word, flags) = match instr.op {
        PositOp::FmvXW => (src(instr.rs1), 0),
        PositOp::FmvWX => (x1, 0),
        _ => {
            let op = instr.fpu_op().expect("non-move posit op");
            let operands = match instr.op.src_file() {
                RegFile::X => [x1, 0, 0],
                RegFile::P => [src(instr.rs1), src(instr.rs2), src(instr.rs3)],
            };
            let (w, f) = arith::execute(op, &operands, &datapath(es_mode));
            (w.0, u32::from(f.bits()))
        }
    };
    let write = Some((instr.rd, word));
    match instr.op.dst_file() {
        RegFile::X => UnitResult { x_write: write, p_write: None, flags },
        RegFile::P => UnitResult { x_write: None, p_write: write, flags },
    }
}

/// FCVT.ES ignores the es-mode in pcsr.
pub fn fcvt_es(instr: &FcvtEsInstr, p: &PositRegs) -> UnitResult {
    let (from, to) = (datapath(instr.from_es.into()), datapath(instr.to_es.into()));
    let w = arith::convert_es(PositWord(p[usize::from(instr.reg)]), &from, &to);
    UnitResult { x_write: None, p_write: Some((instr.reg, w.0)), flags: 0 }
}
