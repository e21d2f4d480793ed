use crate::isa::{Instr, PositOp};

/// Per-instruction latencies. Every retired instruction is charged its full
/// latency; back-to-back posit ops never overlap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleModel {
    posit: [u64; PositOp::ALL.len()],
    pub fcvt_es: u64,
    /// Everything that is not a posit arithmetic instruction, FLW/FSW included.
    pub base: u64,
    /// Extra cycles per offloaded instruction in coprocessor mode.
    pub offload_overhead: u64,
}

fn index(op: PositOp) -> usize {
    PositOp::ALL.iter().position(|&o| o == op).unwrap()
}

impl Default for CycleModel {
    fn default() -> Self {
        use PositOp::*;
        let mut posit = [0; PositOp::ALL.len()];
        for op in PositOp::ALL {
            posit[index(op)] = match op {
                FmaddS | FmsubS | FnmsubS | FnmaddS => 8,
                FaddS | FsubS | FmulS => 6,
                FdivS => 20,
                FsqrtS => 32,
                FcvtWS | FcvtWuS | FcvtSW | FcvtSWu => 3,
                FeqS | FltS | FleS | FminS | FmaxS => 1,
                FsgnjS | FsgnjnS | FsgnjxS => 1,
                FmvXW | FmvWX => 1,
                FclassS => 1,
            };
        }
        Self { posit, fcvt_es: 4, base: 1, offload_overhead: 0 }
    }
}

impl CycleModel {
    pub fn posit_latency(&self, op: PositOp) -> u64 {
        self.posit[index(op)]
    }

    pub fn set_posit_latency(&mut self, op: PositOp, cycles: u64) {
        self.posit[index(op)] = cycles;
    }

    /// Overrides by mnemonic ("FDIV.S", "FCVT.ES", ...). Returns false if
    /// the mnemonic is unknown.
    pub fn set(&mut self, mnemonic: &str, cycles: u64) -> bool {
        if mnemonic.eq_ignore_ascii_case("FCVT.ES") {
            self.fcvt_es = cycles;
            return true;
        }
        match PositOp::ALL.iter().find(|op| op.mnemonic().eq_ignore_ascii_case(mnemonic)) {
            Some(&op) => {
                self.set_posit_latency(op, cycles);
                true
            }
            None => false,
        }
    }

    /// Latency of one retired instruction, excluding offload overhead.
    pub fn latency(&self, instr: &Instr) -> u64 {
        match instr {
            Instr::Posit(p) => self.posit_latency(p.op),
            Instr::FcvtEs(_) => self.fcvt_es,
            _ => self.base,
        }
    }
}
