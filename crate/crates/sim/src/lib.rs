//! Functional RV32I simulator with the posit-reinterpreted F extension,
//! runnable with the posit unit tightly coupled or behind a coprocessor
//! offload boundary.

pub mod asm;
pub mod coproc;
pub mod cycles;
pub mod isa;
pub mod loader;
pub mod machine;
pub mod mem;
pub mod report;
pub mod unit;

pub use asm::{Asm, AsmError, Program};
pub use cycles::CycleModel;
pub use loader::{Image, LoadError};
pub use machine::{Machine, Mode, SimConfig, Trap};
pub use mem::Memory;
pub use report::{RunReport, Status};
