/// Flat little-endian RAM plus a single write-only character port.
#[derive(Clone, PartialEq, Eq)]
pub struct Memory {
    base: u32,
    bytes: Vec<u8>,
    output: Vec<u8>,
}

pub const DEFAULT_BASE: u32 = 0x8000_0000;
pub const DEFAULT_SIZE: usize = 64 << 20;
/// Stores of any width here append the low byte to the output stream.
pub const PUTCHAR_ADDR: u32 = 0x1000_0000;

/// Access outside RAM (or a load from the character port).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AccessFault(pub u32);

impl std::fmt::Debug for Memory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Memory")
            .field("base", &format_args!("{:#x}", self.base))
            .field("size", &self.bytes.len())
            .field("output", &String::from_utf8_lossy(&self.output))
            .finish()
    }
}

impl Default for Memory {
    fn default() -> Self {
        Self::new(DEFAULT_BASE, DEFAULT_SIZE)
    }
}

impl Memory {
    pub fn new(base: u32, size: usize) -> Self {
        assert!(u64::from(base) + size as u64 <= 1 << 32, "memory wraps the address space");
        Self { base, bytes: vec![0; size], output: Vec::new() }
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn size(&self) -> usize {
        self.bytes.len()
    }

    pub fn output(&self) -> &[u8] {
        &self.output
    }

    pub fn contents(&self) -> &[u8] {
        &self.bytes
    }

    fn range(&self, addr: u32, len: usize) -> Result<std::ops::Range<usize>, AccessFault> {
        let off = addr.wrapping_sub(self.base) as usize;
        if addr < self.base || off + len > self.bytes.len() {
            return Err(AccessFault(addr));
        }
        Ok(off..off + len)
    }

    pub fn write_bytes(&mut self, addr: u32, data: &[u8]) -> Result<(), AccessFault> {
        let r = self.range(addr, data.len())?;
        self.bytes[r].copy_from_slice(data);
        Ok(())
    }

    pub fn read_bytes(&self, addr: u32, len: usize) -> Result<&[u8], AccessFault> {
        Ok(&self.bytes[self.range(addr, len)?])
    }

    /// Little-endian load of 1, 2 or 4 bytes, zero-extended.
    pub fn load(&self, addr: u32, width: usize) -> Result<u32, AccessFault> {
        let b = self.read_bytes(addr, width)?;
        Ok(b.iter().rev().fold(0u32, |acc, &x| acc << 8 | u32::from(x)))
    }

    pub fn store(&mut self, addr: u32, width: usize, value: u32) -> Result<(), AccessFault> {
        if addr == PUTCHAR_ADDR {
            self.output.push(value as u8);
            return Ok(());
        }
        let r = self.range(addr, width)?;
        self.bytes[r].copy_from_slice(&value.to_le_bytes()[..width]);
        Ok(())
    }

    pub fn load_word(&self, addr: u32) -> Result<u32, AccessFault> {
        self.load(addr, 4)
    }

    pub fn store_word(&mut self, addr: u32, value: u32) -> Result<(), AccessFault> {
        self.store(addr, 4, value)
    }
}
