use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::coproc::{Coprocessor, OffloadTransaction, ResponseStatus, Traffic};
use crate::cycles::CycleModel;
use crate::isa::{decode, disassemble, AluOp, BranchKind, CsrOp, DecodeConfig, Instr, LoadKind, Pcsr, Reg, StoreKind};
use crate::loader::Image;
use crate::mem::{self, Memory};
use crate::report::{RunReport, Status};
use crate::unit::{self, PositRegs, UnitResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    /// Posit register file and unit inside the core.
    #[default]
    Tight,
    /// Posit register file behind an offload boundary.
    Coproc,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Tight => "tight",
            Mode::Coproc => "coproc",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tight" | "tightly-coupled" => Ok(Mode::Tight),
            "coproc" | "coprocessor" => Ok(Mode::Coproc),
            _ => Err(format!("unknown mode `{s}` (expected tight or coproc)")),
        }
    }
}

pub mod cause {
    pub const INSTR_MISALIGNED: u32 = 0;
    pub const INSTR_FAULT: u32 = 1;
    pub const ILLEGAL: u32 = 2;
    pub const BREAKPOINT: u32 = 3;
    pub const LOAD_MISALIGNED: u32 = 4;
    pub const LOAD_FAULT: u32 = 5;
    pub const STORE_MISALIGNED: u32 = 6;
    pub const STORE_FAULT: u32 = 7;
    pub const ECALL: u32 = 11;
}

/// Syscall number (in a7) of the exit convention.
pub const SYS_EXIT: u32 = 93;

const CSR_CYCLE: u16 = 0xC00;
const CSR_TIME: u16 = 0xC01;
const CSR_INSTRET: u16 = 0xC02;
const CSR_CYCLEH: u16 = 0xC80;
const CSR_TIMEH: u16 = 0xC81;
const CSR_INSTRETH: u16 = 0xC82;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Trap {
    pub cause: u32,
    /// Faulting address or instruction word.
    pub tval: u32,
    pub pc: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimConfig {
    pub mode: Mode,
    pub mem_base: u32,
    pub mem_size: usize,
    pub cycles: CycleModel,
    pub decode: DecodeConfig,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Tight,
            mem_base: mem::DEFAULT_BASE,
            mem_size: mem::DEFAULT_SIZE,
            cycles: CycleModel::default(),
            decode: DecodeConfig::default(),
        }
    }
}

impl SimConfig {
    pub fn with_mode(mode: Mode) -> Self {
        Self { mode, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum PositSide {
    Tight(PositRegs),
    Coproc(Coprocessor),
}

pub struct Machine {
    x: [u32; 32],
    pc: u32,
    pcsr: Pcsr,
    mem: Memory,
    cycles: u64,
    retired: u64,
    side: PositSide,
    cfg: SimConfig,
    trace: Option<Box<dyn Write + Send>>,
}

impl fmt::Debug for Machine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Machine")
            .field("pc", &format_args!("{:#010x}", self.pc))
            .field("x", &self.x)
            .field("p", self.pregs())
            .field("pcsr", &self.pcsr)
            .field("cycles", &self.cycles)
            .field("retired", &self.retired)
            .field("mode", &self.cfg.mode)
            .finish()
    }
}

/// Register writes of one instruction, for the trace.
#[derive(Default)]
struct Log(Vec<String>);

impl Log {
    fn push(&mut self, s: String) {
        self.0.push(s);
    }
}

impl Machine {
    pub fn new(cfg: SimConfig) -> Self {
        let mem = Memory::new(cfg.mem_base, cfg.mem_size);
        let side = match cfg.mode {
            Mode::Tight => PositSide::Tight([0; 32]),
            Mode::Coproc => PositSide::Coproc(Coprocessor::new(cfg.decode)),
        };
        let mut x = [0; 32];
        // Stack pointer starts at the top of RAM.
        x[2] = cfg.mem_base.wrapping_add(cfg.mem_size as u32);
        Self { x, pc: cfg.mem_base, pcsr: Pcsr::default(), mem, cycles: 0, retired: 0, side, cfg, trace: None }
    }

    /// Copies the image into memory and points pc at its entry.
    pub fn load(&mut self, image: &Image) -> Result<(), mem::AccessFault> {
        for seg in &image.segments {
            self.mem.write_bytes(seg.addr, &seg.data)?;
        }
        self.pc = image.entry;
        Ok(())
    }

    /// Streams one line per retired instruction: `cycle pc raw disasm writes`.
    pub fn set_trace(&mut self, sink: Box<dyn Write + Send>) {
        self.trace = Some(sink);
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    pub fn mode(&self) -> Mode {
        self.cfg.mode
    }

    pub fn pc(&self) -> u32 {
        self.pc
    }

    pub fn set_pc(&mut self, pc: u32) {
        self.pc = pc;
    }

    pub fn x(&self, r: Reg) -> u32 {
        self.x[usize::from(r)]
    }

    pub fn set_x(&mut self, r: Reg, v: u32) {
        if r != 0 {
            self.x[usize::from(r)] = v;
        }
    }

    pub fn xregs(&self) -> &[u32; 32] {
        &self.x
    }

    /// The posit register file, wherever it lives.
    pub fn pregs(&self) -> &PositRegs {
        match &self.side {
            PositSide::Tight(p) => p,
            PositSide::Coproc(c) => c.pregs(),
        }
    }

    /// Test/debug backdoor into the posit register file.
    pub fn set_p(&mut self, r: Reg, v: u32) {
        match &mut self.side {
            PositSide::Tight(p) => p[usize::from(r)] = v,
            PositSide::Coproc(c) => c.pregs_mut()[usize::from(r)] = v,
        }
    }

    pub fn pcsr(&self) -> &Pcsr {
        &self.pcsr
    }

    pub fn pcsr_mut(&mut self) -> &mut Pcsr {
        &mut self.pcsr
    }

    pub fn mem(&self) -> &Memory {
        &self.mem
    }

    pub fn mem_mut(&mut self) -> &mut Memory {
        &mut self.mem
    }

    pub fn cycles(&self) -> u64 {
        self.cycles
    }

    pub fn retired(&self) -> u64 {
        self.retired
    }

    /// Runs until exit, trap or `fuel` instructions.
    pub fn run(&mut self, fuel: u64) -> RunReport {
        let mut status = Status::FuelExhausted;
        for _ in 0..fuel {
            match self.step() {
                Ok(None) => {}
                Ok(Some(code)) => {
                    status = Status::Exited(code);
                    break;
                }
                Err(t) => {
                    status = Status::Trapped(t);
                    break;
                }
            }
        }
        if let Some(t) = self.trace.as_mut() {
            let _ = t.flush();
        }
        self.report(status)
    }

    pub fn report(&self, status: Status) -> RunReport {
        RunReport {
            status,
            mode: self.cfg.mode,
            retired: self.retired,
            cycles: self.cycles,
            pc: self.pc,
            fflags: self.pcsr.fflags(),
            es_mode: self.pcsr.es_mode(),
            x: self.x,
            p: *self.pregs(),
            output: self.mem.output().to_vec(),
        }
    }

    fn wx(&mut self, rd: Reg, v: u32, log: &mut Log) {
        if rd != 0 {
            self.x[usize::from(rd)] = v;
            log.push(format!("x{rd}={v:#010x}"));
        }
    }

    fn commit_unit(&mut self, r: UnitResult, log: &mut Log) {
        if let Some((rd, v)) = r.x_write {
            self.wx(rd, v, log);
        }
        if let Some((rd, v)) = r.p_write {
            if let PositSide::Tight(p) = &mut self.side {
                p[usize::from(rd)] = v;
            }
            log.push(format!("p{rd}={v:#010x}"));
        }
        self.raise(r.flags, log);
    }

    fn raise(&mut self, flags: u32, log: &mut Log) {
        if flags != 0 {
            self.pcsr.raise(flags);
            log.push(format!("fflags={:#04x}", self.pcsr.fflags()));
        }
    }

    /// Executes one instruction. `Ok(Some(code))` is the exit convention.
    /// A trapping instruction is not retired and changes no state.
    pub fn step(&mut self) -> Result<Option<i32>, Trap> {
        let pc = self.pc;
        let trap = |cause, tval| Trap { cause, tval, pc };
        if !pc.is_multiple_of(4) {
            return Err(trap(cause::INSTR_MISALIGNED, pc));
        }
        let word = self.mem.load_word(pc).map_err(|_| trap(cause::INSTR_FAULT, pc))?;
        let instr = decode(word, &self.cfg.decode).map_err(|_| trap(cause::ILLEGAL, word))?;
        let mut next = pc.wrapping_add(4);
        let mut exit = None;
        let mut log = Log::default();
        let mut offloaded = false;
        let xr = self.x;
        let x = |r: Reg| xr[usize::from(r)];

        match instr {
            Instr::Lui { rd, imm } => self.wx(rd, imm << 12, &mut log),
            Instr::Auipc { rd, imm } => self.wx(rd, pc.wrapping_add(imm << 12), &mut log),
            Instr::Jal { rd, offset } => {
                let target = pc.wrapping_add(offset as u32);
                if !target.is_multiple_of(4) {
                    return Err(trap(cause::INSTR_MISALIGNED, target));
                }
                self.wx(rd, next, &mut log);
                next = target;
            }
            Instr::Jalr { rd, rs1, offset } => {
                let target = x(rs1).wrapping_add(offset as u32) & !1;
                if target % 4 != 0 {
                    return Err(trap(cause::INSTR_MISALIGNED, target));
                }
                self.wx(rd, next, &mut log);
                next = target;
            }
            Instr::Branch { kind, rs1, rs2, offset } => {
                let (a, b) = (x(rs1), x(rs2));
                let taken = match kind {
                    BranchKind::Beq => a == b,
                    BranchKind::Bne => a != b,
                    BranchKind::Blt => (a as i32) < (b as i32),
                    BranchKind::Bge => (a as i32) >= (b as i32),
                    BranchKind::Bltu => a < b,
                    BranchKind::Bgeu => a >= b,
                };
                if taken {
                    let target = pc.wrapping_add(offset as u32);
                    if !target.is_multiple_of(4) {
                        return Err(trap(cause::INSTR_MISALIGNED, target));
                    }
                    next = target;
                }
            }
            Instr::Load { kind, rd, rs1, offset } => {
                let addr = x(rs1).wrapping_add(offset as u32);
                let width = match kind {
                    LoadKind::Lb | LoadKind::Lbu => 1,
                    LoadKind::Lh | LoadKind::Lhu => 2,
                    LoadKind::Lw => 4,
                };
                if addr % width != 0 {
                    return Err(trap(cause::LOAD_MISALIGNED, addr));
                }
                let raw = self.mem.load(addr, width as usize).map_err(|_| trap(cause::LOAD_FAULT, addr))?;
                let v = match kind {
                    LoadKind::Lb => raw as u8 as i8 as u32,
                    LoadKind::Lh => raw as u16 as i16 as u32,
                    _ => raw,
                };
                self.wx(rd, v, &mut log);
            }
            Instr::Store { kind, rs1, rs2, offset } => {
                let addr = x(rs1).wrapping_add(offset as u32);
                let width = match kind {
                    StoreKind::Sb => 1,
                    StoreKind::Sh => 2,
                    StoreKind::Sw => 4,
                };
                if addr % width != 0 {
                    return Err(trap(cause::STORE_MISALIGNED, addr));
                }
                let v = x(rs2);
                self.mem.store(addr, width as usize, v).map_err(|_| trap(cause::STORE_FAULT, addr))?;
                log.push(format!("mem[{addr:#010x}]={v:#x}"));
            }
            Instr::OpImm { op, rd, rs1, imm } => {
                let v = alu(op, x(rs1), imm as u32);
                self.wx(rd, v, &mut log);
            }
            Instr::Op { op, rd, rs1, rs2 } => {
                let v = alu(op, x(rs1), x(rs2));
                self.wx(rd, v, &mut log);
            }
            Instr::Fence { .. } => {}
            Instr::Ecall => {
                if x(17) != SYS_EXIT {
                    return Err(trap(cause::ECALL, 0));
                }
                exit = Some(x(10) as i32);
            }
            Instr::Ebreak => return Err(trap(cause::BREAKPOINT, pc)),
            Instr::Csr { op, rd, src, csr, imm } => {
                let value = if imm { u32::from(src) } else { x(src) };
                let write = op == CsrOp::ReadWrite || src != 0;
                let old = if Pcsr::handles(csr) {
                    let old = self.pcsr.access(csr, op, value, write).expect("pcsr address");
                    if write {
                        log.push(format!("pcsr={:#x}", self.pcsr.read(0x003).unwrap_or(0)));
                    }
                    old
                } else {
                    let v = match csr {
                        CSR_CYCLE | CSR_TIME => self.cycles as u32,
                        CSR_CYCLEH | CSR_TIMEH => (self.cycles >> 32) as u32,
                        CSR_INSTRET => self.retired as u32,
                        CSR_INSTRETH => (self.retired >> 32) as u32,
                        _ => return Err(trap(cause::ILLEGAL, word)),
                    };
                    if write {
                        return Err(trap(cause::ILLEGAL, word));
                    }
                    v
                };
                self.wx(rd, old, &mut log);
            }
            Instr::Flw { .. } | Instr::Fsw { .. } | Instr::Posit(_) | Instr::FcvtEs(_) | Instr::Custom(_) => {
                offloaded = self.cfg.mode == Mode::Coproc;
                self.posit_unit(&instr, word, trap, &mut log)?;
            }
        }

        let mut cost = self.cfg.cycles.latency(&instr);
        if offloaded {
            cost += self.cfg.cycles.offload_overhead;
        }
        self.cycles += cost;
        self.retired += 1;
        self.pc = next;
        if let Some(t) = self.trace.as_mut() {
            let dis = disassemble(word, &self.cfg.decode);
            let dis = dis.split(" # ").next().unwrap_or("");
            let _ = writeln!(t, "{} {pc:#010x} {word:#010x} {dis} {}", self.cycles, log.0.join(" "));
        }
        Ok(exit)
    }

    fn posit_unit(
        &mut self,
        instr: &Instr,
        word: u32,
        trap: impl Fn(u32, u32) -> Trap,
        log: &mut Log,
    ) -> Result<(), Trap> {
        let es_mode = self.pcsr.es_mode();
        let side = match &mut self.side {
            PositSide::Tight(p) => p,
            PositSide::Coproc(c) => {
                let t = Traffic::of(instr);
                let field = |shift: u32| self.x[((word >> shift) & 0x1F) as usize];
                let txn = OffloadTransaction {
                    word,
                    rs1_value: t.xs1.then(|| field(15)),
                    rs2_value: t.xs2.then(|| field(20)),
                    xd: t.xd,
                    es_mode,
                };
                let resp = c.offload(&txn, &mut self.mem);
                match resp.status {
                    ResponseStatus::Done => {}
                    ResponseStatus::Illegal => return Err(trap(cause::ILLEGAL, word)),
                    ResponseStatus::LoadFault { addr, misaligned } => {
                        return Err(trap(if misaligned { cause::LOAD_MISALIGNED } else { cause::LOAD_FAULT }, addr))
                    }
                    ResponseStatus::StoreFault { addr, misaligned } => {
                        return Err(trap(if misaligned { cause::STORE_MISALIGNED } else { cause::STORE_FAULT }, addr))
                    }
                }
                if let Some(v) = resp.value {
                    self.wx(((word >> 7) & 0x1F) as Reg, v, log);
                }
                log.push("offload".to_string());
                self.raise(resp.flags, log);
                return Ok(());
            }
        };
        let result = match *instr {
            Instr::Posit(p) => unit::execute(&p, side, self.x[usize::from(p.rs1)], es_mode),
            Instr::FcvtEs(f) => unit::fcvt_es(&f, side),
            Instr::Flw { rd, rs1, offset } => {
                let addr = self.x[usize::from(rs1)].wrapping_add(offset as u32);
                if !addr.is_multiple_of(4) {
                    return Err(trap(cause::LOAD_MISALIGNED, addr));
                }
                let v = self.mem.load_word(addr).map_err(|_| trap(cause::LOAD_FAULT, addr))?;
                UnitResult { p_write: Some((rd, v)), ..UnitResult::default() }
            }
            Instr::Fsw { rs1, rs2, offset } => {
                let addr = self.x[usize::from(rs1)].wrapping_add(offset as u32);
                if !addr.is_multiple_of(4) {
                    return Err(trap(cause::STORE_MISALIGNED, addr));
                }
                let v = side[usize::from(rs2)];
                self.mem.store_word(addr, v).map_err(|_| trap(cause::STORE_FAULT, addr))?;
                log.push(format!("mem[{addr:#010x}]={v:#x}"));
                UnitResult::default()
            }
            _ => return Err(trap(cause::ILLEGAL, word)),
        };
        self.commit_unit(result, log);
        Ok(())
    }
}

fn alu(op: AluOp, a: u32, b: u32) -> u32 {
    match op {
        AluOp::Add => a.wrapping_add(b),
        AluOp::Sub => a.wrapping_sub(b),
        AluOp::Sll => a << (b & 31),
        AluOp::Slt => u32::from((a as i32) < (b as i32)),
        AluOp::Sltu => u32::from(a < b),
        AluOp::Xor => a ^ b,
        AluOp::Srl => a >> (b & 31),
        AluOp::Sra => ((a as i32) >> (b & 31)) as u32,
        AluOp::Or => a | b,
        AluOp::And => a & b,
    }
}
