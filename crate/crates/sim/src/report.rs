//! Run reports as `key: value` lines, in a fixed key order.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::machine::{Mode, Trap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Exited(i32),
    Trapped(Trap),
    FuelExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RunReport {
    pub status: Status,
    pub mode: Mode,
    pub retired: u64,
    pub cycles: u64,
    pub pc: u32,
    pub fflags: u32,
    pub es_mode: u32,
    pub x: [u32; 32],
    pub p: [u32; 32],
    /// Bytes written to the character port.
    pub output: Vec<u8>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseReportError {
    #[error("missing key `{0}`")]
    Missing(String),
    #[error("bad value for `{key}`: {value}")]
    Bad { key: String, value: String },
    #[error("malformed line: {0}")]
    Line(String),
}

impl RunReport {
    /// Architectural state only: everything except the cycle count and mode.
    pub fn same_architectural_state(&self, other: &RunReport) -> bool {
        (self.status, self.retired, self.pc, self.fflags, self.es_mode, self.x, self.p, &self.output)
            == (other.status, other.retired, other.pc, other.fflags, other.es_mode, other.x, other.p, &other.output)
    }

    pub fn parse(text: &str) -> Result<Self, ParseReportError> {
        let mut kv = HashMap::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let (k, v) = line.split_once(':').ok_or_else(|| ParseReportError::Line(line.to_string()))?;
            kv.insert(k.trim().to_string(), v.trim().to_string());
        }
        let get = |k: &str| kv.get(k).map(String::as_str).ok_or_else(|| ParseReportError::Missing(k.to_string()));
        let bad = |k: &str, v: &str| ParseReportError::Bad { key: k.to_string(), value: v.to_string() };
        let num = |k: &str| -> Result<u64, ParseReportError> {
            let v = get(k)?;
            let r = match v.strip_prefix("0x") {
                Some(h) => u64::from_str_radix(h, 16),
                None => v.parse(),
            };
            r.map_err(|_| bad(k, v))
        };
        let word = |k: &str| num(k).and_then(|n| u32::try_from(n).map_err(|_| bad(k, &n.to_string())));

        let status = match get("status")? {
            "exited" => {
                let v = get("exit_code")?;
                Status::Exited(v.parse().map_err(|_| bad("exit_code", v))?)
            }
            "trap" => Status::Trapped(Trap { cause: word("trap_cause")?, tval: word("trap_tval")?, pc: word("trap_pc")? }),
            "fuel_exhausted" => Status::FuelExhausted,
            other => return Err(bad("status", other)),
        };
        let mode = get("mode")?.parse().map_err(|_| bad("mode", get("mode").unwrap_or("")))?;
        let mut x = [0; 32];
        let mut p = [0; 32];
        for i in 0..32 {
            x[i] = word(&format!("x{i}"))?;
            p[i] = word(&format!("p{i}"))?;
        }
        let out = get("output")?;
        let output = if out.is_empty() {
            Vec::new()
        } else {
            (0..out.len())
                .step_by(2)
                .map(|i| out.get(i..i + 2).and_then(|h| u8::from_str_radix(h, 16).ok()))
                .collect::<Option<Vec<u8>>>()
                .ok_or_else(|| bad("output", out))?
        };
        Ok(Self {
            status,
            mode,
            retired: num("retired")?,
            cycles: num("cycles")?,
            pc: word("pc")?,
            fflags: word("fflags")?,
            es_mode: word("es_mode")?,
            x,
            p,
            output,
        })
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.status {
            Status::Exited(code) => writeln!(f, "status: exited\nexit_code: {code}")?,
            Status::Trapped(t) => writeln!(
                f,
                "status: trap\ntrap_cause: {}\ntrap_tval: {:#010x}\ntrap_pc: {:#010x}",
                t.cause, t.tval, t.pc
            )?,
            Status::FuelExhausted => writeln!(f, "status: fuel_exhausted")?,
        }
        writeln!(f, "mode: {}", self.mode)?;
        writeln!(f, "retired: {}", self.retired)?;
        writeln!(f, "cycles: {}", self.cycles)?;
        writeln!(f, "pc: {:#010x}", self.pc)?;
        writeln!(f, "fflags: {:#04x}", self.fflags)?;
        writeln!(f, "es_mode: {}", self.es_mode)?;
        for (i, v) in self.x.iter().enumerate() {
            writeln!(f, "x{i}: {v:#010x}")?;
        }
        for (i, v) in self.p.iter().enumerate() {
            writeln!(f, "p{i}: {v:#010x}")?;
        }
        let hex: String = self.output.iter().map(|b| format!("{b:02x}")).collect();
        writeln!(f, "output: {hex}")
    }
}
