//! The posit control/status register, mapped over the F-extension CSRs.
//!
//! Layout of the full view (`fcsr`, 0x003):
//!
//! ```text
//!  31      13 12     8 7   5 4      0
//! | reserved | es-mode |  rm | fflags |
//! ```
//!
//! `rm` is tied to zero. Hardware only ever sets DZ (bit 3) in fflags;
//! software may write all five flag bits. es-mode writes other than 2 or 3
//! are dropped, so software can probe for supported values.

use super::CsrOp;

pub const CSR_FFLAGS: u16 = 0x001;
pub const CSR_FRM: u16 = 0x002;
pub const CSR_FCSR: u16 = 0x003;

pub const FLAG_DZ: u32 = 1 << 3;

const FFLAGS_MASK: u32 = 0x1F;
const ES_SHIFT: u32 = 8;
const ES_MASK: u32 = 0x1F;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Pcsr {
    fflags: u32,
    es_mode: u32,
}

impl Default for Pcsr {
    fn default() -> Self {
        Self { fflags: 0, es_mode: 2 }
    }
}

impl Pcsr {
    pub fn fflags(&self) -> u32 {
        self.fflags
    }

    pub fn es_mode(&self) -> u32 {
        self.es_mode
    }

    pub fn rm(&self) -> u32 {
        0
    }

    /// Hardware flag update at write-back; flags are sticky.
    pub fn raise(&mut self, flags: u32) {
        self.fflags |= flags & FFLAGS_MASK;
    }

    /// Sets es-mode if legal; returns whether it took effect.
    pub fn set_es_mode(&mut self, es: u32) -> bool {
        let ok = matches!(es, 2 | 3);
        if ok {
            self.es_mode = es;
        }
        ok
    }

    pub fn handles(addr: u16) -> bool {
        matches!(addr, CSR_FFLAGS | CSR_FRM | CSR_FCSR)
    }

    pub fn read(&self, addr: u16) -> Option<u32> {
        match addr {
            CSR_FFLAGS => Some(self.fflags),
            CSR_FRM => Some(0),
            CSR_FCSR => Some(self.fflags | self.es_mode << ES_SHIFT),
            _ => None,
        }
    }

    fn write(&mut self, addr: u16, v: u32) {
        match addr {
            CSR_FFLAGS => self.fflags = v & FFLAGS_MASK,
            CSR_FCSR => {
                self.fflags = v & FFLAGS_MASK;
                self.set_es_mode(v >> ES_SHIFT & ES_MASK);
            }
            _ => {}
        }
    }

    /// Standard CSR read-modify-write. Returns the old value, or `None` for an
    /// address this register does not implement. `write` is false for
    /// CSRRS/CSRRC with a zero source, which must not write.
    pub fn access(&mut self, addr: u16, op: CsrOp, value: u32, write: bool) -> Option<u32> {
        let old = self.read(addr)?;
        if write {
            let new = match op {
                CsrOp::ReadWrite => value,
                CsrOp::ReadSet => old | value,
                CsrOp::ReadClear => old & !value,
            };
            self.write(addr, new);
        }
        Some(old)
    }
}
