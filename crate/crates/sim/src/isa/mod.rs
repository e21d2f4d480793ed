//! RV32I plus the F extension reinterpreted over posit operands, the
//! FCVT.ES es-conversion instruction, and raw custom-opcode (RoCC) words.

mod decode;
mod disasm;
mod encode;
pub mod pcsr;

pub use decode::{decode, DecodeConfig, IllegalInstruction};
pub use disasm::disassemble;
pub use encode::{encode, EncodeError};
pub use pcsr::Pcsr;

use posit_core::{CompareKind, FpuOp, IntRounding, SignInjection};

pub type Reg = u8;

pub const OPC_LOAD: u32 = 0b000_0011;
pub const OPC_LOAD_FP: u32 = 0b000_0111;
pub const OPC_CUSTOM_0: u32 = 0b000_1011;
pub const OPC_MISC_MEM: u32 = 0b000_1111;
pub const OPC_OP_IMM: u32 = 0b001_0011;
pub const OPC_AUIPC: u32 = 0b001_0111;
pub const OPC_STORE: u32 = 0b010_0011;
pub const OPC_STORE_FP: u32 = 0b010_0111;
pub const OPC_CUSTOM_1: u32 = 0b010_1011;
pub const OPC_OP: u32 = 0b011_0011;
pub const OPC_LUI: u32 = 0b011_0111;
pub const OPC_MADD: u32 = 0b100_0011;
pub const OPC_MSUB: u32 = 0b100_0111;
pub const OPC_NMSUB: u32 = 0b100_1011;
pub const OPC_NMADD: u32 = 0b100_1111;
pub const OPC_OP_FP: u32 = 0b101_0011;
pub const OPC_CUSTOM_2: u32 = 0b101_1011;
pub const OPC_BRANCH: u32 = 0b110_0011;
pub const OPC_JALR: u32 = 0b110_0111;
pub const OPC_JAL: u32 = 0b110_1111;
pub const OPC_SYSTEM: u32 = 0b111_0011;
pub const OPC_CUSTOM_3: u32 = 0b111_1011;

pub const CUSTOM_OPCODES: [u32; 4] = [OPC_CUSTOM_0, OPC_CUSTOM_1, OPC_CUSTOM_2, OPC_CUSTOM_3];

/// funct7 of FCVT.ES.
pub const FUNCT7_FCVT_ES: u32 = 0b111_1100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BranchKind {
    Beq,
    Bne,
    Blt,
    Bge,
    Bltu,
    Bgeu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LoadKind {
    Lb,
    Lh,
    Lw,
    Lbu,
    Lhu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StoreKind {
    Sb,
    Sh,
    Sw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AluOp {
    Add,
    Sub,
    Sll,
    Slt,
    Sltu,
    Xor,
    Srl,
    Sra,
    Or,
    And,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CsrOp {
    ReadWrite,
    ReadSet,
    ReadClear,
}

/// The posit-reinterpreted F-extension operations (everything except the
/// FLW/FSW memory instructions).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PositOp {
    FmaddS,
    FmsubS,
    FnmsubS,
    FnmaddS,
    FaddS,
    FsubS,
    FmulS,
    FdivS,
    FsqrtS,
    FsgnjS,
    FsgnjnS,
    FsgnjxS,
    FminS,
    FmaxS,
    FcvtWS,
    FcvtWuS,
    FmvXW,
    FeqS,
    FltS,
    FleS,
    FclassS,
    FcvtSW,
    FcvtSWu,
    FmvWX,
}

/// Which register file an operand or result lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegFile {
    X,
    P,
}

impl PositOp {
    pub const ALL: [PositOp; 24] = [
        PositOp::FmaddS,
        PositOp::FmsubS,
        PositOp::FnmsubS,
        PositOp::FnmaddS,
        PositOp::FaddS,
        PositOp::FsubS,
        PositOp::FmulS,
        PositOp::FdivS,
        PositOp::FsqrtS,
        PositOp::FsgnjS,
        PositOp::FsgnjnS,
        PositOp::FsgnjxS,
        PositOp::FminS,
        PositOp::FmaxS,
        PositOp::FcvtWS,
        PositOp::FcvtWuS,
        PositOp::FmvXW,
        PositOp::FeqS,
        PositOp::FltS,
        PositOp::FleS,
        PositOp::FclassS,
        PositOp::FcvtSW,
        PositOp::FcvtSWu,
        PositOp::FmvWX,
    ];

    pub fn mnemonic(self) -> &'static str {
        use PositOp::*;
        match self {
            FmaddS => "FMADD.S",
            FmsubS => "FMSUB.S",
            FnmsubS => "FNMSUB.S",
            FnmaddS => "FNMADD.S",
            FaddS => "FADD.S",
            FsubS => "FSUB.S",
            FmulS => "FMUL.S",
            FdivS => "FDIV.S",
            FsqrtS => "FSQRT.S",
            FsgnjS => "FSGNJ.S",
            FsgnjnS => "FSGNJN.S",
            FsgnjxS => "FSGNJX.S",
            FminS => "FMIN.S",
            FmaxS => "FMAX.S",
            FcvtWS => "FCVT.W.S",
            FcvtWuS => "FCVT.WU.S",
            FmvXW => "FMV.X.W",
            FeqS => "FEQ.S",
            FltS => "FLT.S",
            FleS => "FLE.S",
            FclassS => "FCLASS.S",
            FcvtSW => "FCVT.S.W",
            FcvtSWu => "FCVT.S.WU",
            FmvWX => "FMV.W.X",
        }
    }

    pub fn is_fused(self) -> bool {
        matches!(self, PositOp::FmaddS | PositOp::FmsubS | PositOp::FnmsubS | PositOp::FnmaddS)
    }

    /// Number of posit/integer source registers read (rs1, rs2, rs3).
    pub fn sources(self) -> usize {
        use PositOp::*;
        match self {
            FmaddS | FmsubS | FnmsubS | FnmaddS => 3,
            FaddS | FsubS | FmulS | FdivS | FsgnjS | FsgnjnS | FsgnjxS | FminS | FmaxS | FeqS | FltS | FleS => 2,
            FsqrtS | FcvtWS | FcvtWuS | FmvXW | FclassS | FcvtSW | FcvtSWu | FmvWX => 1,
        }
    }

    /// Register file of rs1.
    pub fn src_file(self) -> RegFile {
        match self {
            PositOp::FcvtSW | PositOp::FcvtSWu | PositOp::FmvWX => RegFile::X,
            _ => RegFile::P,
        }
    }

    /// Register file of rd.
    pub fn dst_file(self) -> RegFile {
        use PositOp::*;
        match self {
            FcvtWS | FcvtWuS | FmvXW | FeqS | FltS | FleS | FclassS => RegFile::X,
            _ => RegFile::P,
        }
    }

    /// True when the rm field carries meaning (only the posit-to-integer
    /// conversions); every other op ignores it.
    pub fn uses_rm(self) -> bool {
        matches!(self, PositOp::FcvtWS | PositOp::FcvtWuS)
    }

    /// True when funct3 is part of the opcode rather than an rm field.
    pub fn fixed_funct3(self) -> Option<u32> {
        use PositOp::*;
        Some(match self {
            FsgnjS | FminS | FmvXW | FleS => 0b000,
            FsgnjnS | FmaxS | FclassS | FltS => 0b001,
            FsgnjxS | FeqS => 0b010,
            FmvWX => 0b000,
            _ => return None,
        })
    }

    /// The arithmetic operation performed, given the rm field. Moves are
    /// plain bit copies and have none.
    pub fn fpu_op(self, rm: u8) -> Option<FpuOp> {
        use PositOp::*;
        let rounding = if rm == 0b001 { IntRounding::TowardZero } else { IntRounding::NearestEven };
        Some(match self {
            FmaddS => FpuOp::MulAdd,
            FmsubS => FpuOp::MulSub,
            FnmsubS => FpuOp::NegMulSub,
            FnmaddS => FpuOp::NegMulAdd,
            FaddS => FpuOp::Add,
            FsubS => FpuOp::Sub,
            FmulS => FpuOp::Mul,
            FdivS => FpuOp::Div,
            FsqrtS => FpuOp::Sqrt,
            FsgnjS => FpuOp::SignInject(SignInjection::Copy),
            FsgnjnS => FpuOp::SignInject(SignInjection::Negate),
            FsgnjxS => FpuOp::SignInject(SignInjection::Xor),
            FminS => FpuOp::Compare(CompareKind::Min),
            FmaxS => FpuOp::Compare(CompareKind::Max),
            FcvtWS => FpuOp::PositToInt { unsigned: false, rounding },
            FcvtWuS => FpuOp::PositToInt { unsigned: true, rounding },
            FeqS => FpuOp::Compare(CompareKind::Eq),
            FltS => FpuOp::Compare(CompareKind::Lt),
            FleS => FpuOp::Compare(CompareKind::Le),
            FclassS => FpuOp::Classify,
            FcvtSW => FpuOp::IntToPosit { unsigned: false },
            FcvtSWu => FpuOp::IntToPosit { unsigned: true },
            FmvXW | FmvWX => return None,
        })
    }
}

/// A posit F-extension instruction. Unused register fields are zero; `rm`
/// is kept verbatim so encodings round-trip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PositInstr {
    pub op: PositOp,
    pub rd: Reg,
    pub rs1: Reg,
    pub rs2: Reg,
    pub rs3: Reg,
    pub rm: u8,
}

impl PositInstr {
    pub fn new(op: PositOp, rd: Reg, rs1: Reg, rs2: Reg) -> Self {
        Self { op, rd, rs1, rs2, rs3: 0, rm: 0 }
    }

    pub fn fused(op: PositOp, rd: Reg, rs1: Reg, rs2: Reg, rs3: Reg) -> Self {
        Self { op, rd, rs1, rs2, rs3, rm: 0 }
    }

    pub fn unary(op: PositOp, rd: Reg, rs1: Reg) -> Self {
        Self::new(op, rd, rs1, 0)
    }

    pub fn with_rm(mut self, rm: u8) -> Self {
        self.rm = rm;
        self
    }

    pub fn fpu_op(&self) -> Option<FpuOp> {
        self.op.fpu_op(self.rm)
    }
}

/// FCVT.ES: re-encodes the posit in `reg` from `from_es` to `to_es`,
/// independent of the es-mode in pcsr.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FcvtEsInstr {
    pub reg: Reg,
    pub from_es: u8,
    pub to_es: u8,
    pub opcode: u8,
}

/// A custom-opcode word in RoCC layout. The R4, I and S views reinterpret
/// the same bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RoccInstr {
    pub opcode: u8,
    pub funct7: u8,
    pub rs2: Reg,
    pub rs1: Reg,
    pub xd: bool,
    pub xs1: bool,
    pub xs2: bool,
    pub rd: Reg,
}

impl RoccInstr {
    pub fn from_word(w: u32) -> Self {
        Self {
            opcode: (w & 0x7F) as u8,
            rd: ((w >> 7) & 0x1F) as u8,
            xs2: (w >> 12) & 1 == 1,
            xs1: (w >> 13) & 1 == 1,
            xd: (w >> 14) & 1 == 1,
            rs1: ((w >> 15) & 0x1F) as u8,
            rs2: ((w >> 20) & 0x1F) as u8,
            funct7: (w >> 25) as u8,
        }
    }

    pub fn to_word(&self) -> u32 {
        u32::from(self.opcode & 0x7F)
            | u32::from(self.rd & 0x1F) << 7
            | u32::from(self.xs2) << 12
            | u32::from(self.xs1) << 13
            | u32::from(self.xd) << 14
            | u32::from(self.rs1 & 0x1F) << 15
            | u32::from(self.rs2 & 0x1F) << 20
            | u32::from(self.funct7 & 0x7F) << 25
    }

    /// R4 view: `(rs3, funct2)`.
    pub fn r4(&self) -> (Reg, u8) {
        (self.funct7 >> 2, self.funct7 & 0b11)
    }

    /// I view: `(imm[11:0], funct1)`; the funct1 bit sits where xs2 is.
    pub fn i_type(&self) -> (u16, bool) {
        ((u16::from(self.funct7) << 5) | u16::from(self.rs2), self.xs2)
    }

    /// S view: `(imm[11:0], funct1)`; the funct1 bit sits where xd is.
    pub fn s_type(&self) -> (u16, bool) {
        ((u16::from(self.funct7) << 5) | u16::from(self.rd), self.xd)
    }
}

/// A decoded instruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Instr {
    /// `imm` is the 20-bit upper immediate (bits 31:12 of the result).
    Lui { rd: Reg, imm: u32 },
    Auipc { rd: Reg, imm: u32 },
    Jal { rd: Reg, offset: i32 },
    Jalr { rd: Reg, rs1: Reg, offset: i32 },
    Branch { kind: BranchKind, rs1: Reg, rs2: Reg, offset: i32 },
    Load { kind: LoadKind, rd: Reg, rs1: Reg, offset: i32 },
    Store { kind: StoreKind, rs1: Reg, rs2: Reg, offset: i32 },
    /// For shifts `imm` is the shift amount.
    OpImm { op: AluOp, rd: Reg, rs1: Reg, imm: i32 },
    Op { op: AluOp, rd: Reg, rs1: Reg, rs2: Reg },
    Fence { pred: u8, succ: u8 },
    Ecall,
    Ebreak,
    /// With `imm` set, `src` is a 5-bit immediate instead of a register.
    Csr { op: CsrOp, rd: Reg, src: u8, csr: u16, imm: bool },
    Flw { rd: Reg, rs1: Reg, offset: i32 },
    Fsw { rs1: Reg, rs2: Reg, offset: i32 },
    Posit(PositInstr),
    FcvtEs(FcvtEsInstr),
    Custom(RoccInstr),
}

impl Instr {
    /// True for instructions executed by the posit unit (and offloaded in
    /// coprocessor mode).
    pub fn is_posit_unit(&self) -> bool {
        matches!(
            self,
            Instr::Flw { .. } | Instr::Fsw { .. } | Instr::Posit(_) | Instr::FcvtEs(_) | Instr::Custom(_)
        )
    }
}

#[cfg(test)]
mod tests;
