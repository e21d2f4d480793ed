//! A guest program that drives every posit instruction (both rounding
//! variants of the integer conversions, and FCVT.ES both ways) over a
//! table of operand triples at es=2 and es=3, storing every result.
//! Used to compare integration modes and to check the simulator end to
//! end against the oracle.

use posit_core::oracle::reference;
use posit_core::PositConfig;
use posit_sim::asm::reg::*;
use posit_sim::isa::pcsr::{CSR_FCSR, CSR_FFLAGS};
use posit_sim::isa::{BranchKind, Instr, PositInstr, PositOp, RegFile};
use posit_sim::mem::DEFAULT_BASE;
use posit_sim::{Asm, Machine, Program};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::conformance::special_corpus;

const S2: u8 = 18;
const S3: u8 = 19;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotOp {
    Posit(PositInstr),
    FcvtEs { from: u32, to: u32 },
}

/// One instruction swept over the whole operand table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slot {
    pub es: u32,
    pub op: SlotOp,
    pub label: String,
}

#[derive(Debug, Clone)]
pub struct ConformanceKernel {
    pub program: Program,
    pub operands: Vec<[u32; 3]>,
    pub slots: Vec<Slot>,
}

/// Operand triples: every pairing of the special corpus, then random
/// words (biased towards small magnitudes half the time).
pub fn operand_table(random: usize, seed: u64) -> Vec<[u32; 3]> {
    let corpus = special_corpus(&PositConfig::dual(2).expect("es 2"));
    let mut v = Vec::new();
    for (i, &a) in corpus.iter().enumerate() {
        for &b in &corpus {
            v.push([a, b, corpus[(i + 1) % corpus.len()]]);
        }
    }
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..random {
        let mut w = || {
            let x: u32 = rng.gen();
            if rng.gen_bool(0.5) {
                x
            } else {
                // Near one: regime of length 1 or 2.
                (x & 0x8fff_ffff) | 0x3000_0000
            }
        };
        v.push([w(), w(), w()]);
    }
    v
}

fn instructions() -> Vec<PositInstr> {
    let mut v = Vec::new();
    for op in PositOp::ALL {
        // p1..p3 hold the posit operands, a0 the integer one; results go
        // to p4 or a1.
        let rs1 = if op.src_file() == RegFile::X { A0 } else { 1 };
        let rd = if op.dst_file() == RegFile::X { A1 } else { 4 };
        let rs2 = if op.sources() >= 2 { 2 } else { 0 };
        let rs3 = if op.is_fused() { 3 } else { 0 };
        let base = PositInstr::fused(op, rd, rs1, rs2, rs3);
        if op.uses_rm() {
            v.push(base.with_rm(0));
            v.push(base.with_rm(1));
        } else {
            v.push(base);
        }
    }
    v
}

impl ConformanceKernel {
    pub fn build(operands: Vec<[u32; 3]>) -> Self {
        let mut a = Asm::new(DEFAULT_BASE);
        let mut slots = Vec::new();
        for es in [2u32, 3] {
            a.li(T0, (es << 8) as i32).csrrw(0, CSR_FCSR, T0);
            let mut ops: Vec<SlotOp> = instructions().into_iter().map(SlotOp::Posit).collect();
            ops.push(SlotOp::FcvtEs { from: es, to: 5 - es });
            ops.push(SlotOp::FcvtEs { from: 5 - es, to: es });
            for op in ops {
                let label = format!("r{}_{}", es, slots.len());
                let top = format!("{label}_loop");
                a.la(S0, "operands").la(S1, &label).li(T1, operands.len() as i32);
                a.label(&top);
                a.flw(1, S0, 0).flw(2, S0, 4).flw(3, S0, 8).lw(A0, S0, 0);
                match op {
                    SlotOp::Posit(p) => {
                        a.emit(Instr::Posit(p));
                        if p.op.dst_file() == RegFile::X {
                            a.sw(A1, S1, 0);
                        } else {
                            a.fsw(4, S1, 0);
                        }
                    }
                    SlotOp::FcvtEs { from, to } => {
                        a.fcvt_es(1, from as u8, to as u8).fsw(1, S1, 0);
                    }
                }
                a.addi(S0, S0, 12).addi(S1, S1, 4).addi(T1, T1, -1);
                a.branch(BranchKind::Bne, T1, 0, &top);
                slots.push(Slot { es, op, label });
            }
        }
        // Leave the accumulated flags in a register too.
        a.csrr(S2, CSR_FFLAGS).addi(S3, 0, slots.len() as i32);
        a.addi(A0, 0, 0).exit();
        a.label("operands");
        for t in &operands {
            a.words(t);
        }
        for s in &slots {
            a.label(&s.label).space(operands.len());
        }
        let program = a.finish().expect("conformance kernel assembles");
        ConformanceKernel { program, operands, slots }
    }

    /// Expected result word for `slot` on operand triple `t`.
    pub fn expected(slot: &Slot, t: &[u32; 3]) -> u32 {
        match slot.op {
            SlotOp::FcvtEs { from, to } => {
                let cfg = PositConfig::fixed(32, from).expect("es");
                reference(posit_core::FpuOp::ConvertEs { to_es: to }, &t[..1], &cfg).0 .0
            }
            SlotOp::Posit(p) => {
                let cfg = PositConfig::fixed(32, slot.es).expect("es");
                match p.fpu_op() {
                    Some(op) => reference(op, &t[..op.arity()], &cfg).0 .0,
                    // FMV.X.W / FMV.W.X copy bits.
                    None => t[0],
                }
            }
        }
    }

    /// Every stored result that disagrees with the oracle.
    pub fn mismatches(&self, m: &Machine) -> Vec<String> {
        let mut bad = Vec::new();
        for s in &self.slots {
            let base = self.program.label(&s.label).expect("slot label");
            for (i, t) in self.operands.iter().enumerate() {
                let got = m.mem().load_word(base + 4 * i as u32).expect("result in memory");
                let want = Self::expected(s, t);
                if got != want {
                    bad.push(format!("es={} {:?} operands={:08x?}: got {got:#010x}, want {want:#010x}", s.es, s.op, t));
                }
            }
        }
        bad
    }

    /// Result table as raw bytes, for comparing runs.
    pub fn results<'m>(&self, m: &'m Machine) -> &'m [u8] {
        let start = self.program.label(&self.slots[0].label).expect("slot label");
        let len = 4 * self.operands.len() * self.slots.len();
        m.mem().read_bytes(start, len).expect("result tables in memory")
    }
}
