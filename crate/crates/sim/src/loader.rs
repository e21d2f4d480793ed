//! Program images: flat binaries and minimal ELF32 (PT_LOAD segments only).

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub addr: u32,
    pub data: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    pub entry: u32,
    pub segments: Vec<Segment>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LoadError {
    #[error("ELF file truncated")]
    Truncated,
    #[error("not a little-endian ELF32 RISC-V executable")]
    Unsupported,
    #[error("segment {0} extends past the end of the file")]
    BadSegment(usize),
}

const PT_LOAD: u32 = 1;
const EM_RISCV: u16 = 0xF3;

impl Image {
    pub fn flat(base: u32, bytes: Vec<u8>) -> Self {
        Self { entry: base, segments: vec![Segment { addr: base, data: bytes }] }
    }

    pub fn is_elf(bytes: &[u8]) -> bool {
        bytes.starts_with(b"\x7fELF")
    }

    /// ELF if the magic matches, otherwise a flat binary at `base`.
    pub fn detect(bytes: Vec<u8>, base: u32) -> Result<Self, LoadError> {
        if Self::is_elf(&bytes) {
            Self::elf32(&bytes)
        } else {
            Ok(Self::flat(base, bytes))
        }
    }

    pub fn elf32(b: &[u8]) -> Result<Self, LoadError> {
        let u16_at = |o: usize| b.get(o..o + 2).map(|s| u16::from_le_bytes([s[0], s[1]])).ok_or(LoadError::Truncated);
        let u32_at = |o: usize| {
            b.get(o..o + 4).map(|s| u32::from_le_bytes([s[0], s[1], s[2], s[3]])).ok_or(LoadError::Truncated)
        };
        if b.len() < 52 || !Self::is_elf(b) {
            return Err(LoadError::Truncated);
        }
        // ELFCLASS32, ELFDATA2LSB
        if b[4] != 1 || b[5] != 1 || u16_at(18)? != EM_RISCV {
            return Err(LoadError::Unsupported);
        }
        let entry = u32_at(24)?;
        let phoff = u32_at(28)? as usize;
        let phentsize = usize::from(u16_at(42)?);
        let phnum = usize::from(u16_at(44)?);
        let mut segments = Vec::new();
        for i in 0..phnum {
            let ph = phoff + i * phentsize;
            if u32_at(ph)? != PT_LOAD {
                continue;
            }
            let offset = u32_at(ph + 4)? as usize;
            let paddr = u32_at(ph + 12)?;
            let filesz = u32_at(ph + 16)? as usize;
            let memsz = u32_at(ph + 20)? as usize;
            let mut data = b.get(offset..offset + filesz).ok_or(LoadError::BadSegment(i))?.to_vec();
            data.resize(memsz.max(filesz), 0);
            segments.push(Segment { addr: paddr, data });
        }
        Ok(Self { entry, segments })
    }
}
