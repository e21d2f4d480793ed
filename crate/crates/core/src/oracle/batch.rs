//! Line-oriented batch interface: one query per line,
//! `<op> <hex operand>... [es=<n>]`, answered with the result word in hex,
//! followed by ` DZ` when the divide-by-zero flag is raised.

use std::io::{BufRead, Write};

use thiserror::Error;

use super::ops::reference;
use crate::format::PositConfig;
use crate::op::FpuOp;

#[derive(Debug, Error)]
pub enum BatchError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Answers a single query line. Blank lines and `#` comments yield `None`.
pub fn eval_line(line: &str, default: &PositConfig) -> Result<Option<String>, String> {
    let line = line.split('#').next().unwrap_or("").trim();
    if line.is_empty() {
        return Ok(None);
    }
    let mut tokens = line.split_whitespace();
    let op: FpuOp = tokens.next().unwrap().parse().map_err(|e| format!("{e}"))?;
    let mut cfg = *default;
    let mut operands = Vec::new();
    for t in tokens {
        if let Some(es) = t.strip_prefix("es=") {
            let es: u32 = es.parse().map_err(|_| format!("bad es {es:?}"))?;
            cfg = PositConfig::fixed(cfg.ps(), es).map_err(|e| e.to_string())?;
        } else {
            let hex = t.trim_start_matches("0x").trim_start_matches("0X");
            let w = u32::from_str_radix(hex, 16).map_err(|_| format!("bad operand {t:?}"))?;
            operands.push(w);
        }
    }
    if operands.len() != op.arity() {
        return Err(format!("{op} takes {} operands, got {}", op.arity(), operands.len()));
    }
    let (w, flags) = reference(op, &operands, &cfg);
    let digits = cfg.ps().div_ceil(4) as usize;
    let mut out = format!("{:0digits$x}", w.0);
    if !flags.is_empty() {
        out.push_str(" DZ");
    }
    Ok(Some(out))
}

/// Streams queries from `input` to answers on `output`.
pub fn run_batch(input: impl BufRead, mut output: impl Write, default: &PositConfig) -> Result<usize, BatchError> {
    let mut answered = 0;
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        match eval_line(&line, default) {
            Ok(Some(ans)) => {
                writeln!(output, "{ans}")?;
                answered += 1;
            }
            Ok(None) => {}
            Err(msg) => return Err(BatchError::Syntax { line: i + 1, msg }),
        }
    }
    Ok(answered)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn answers_queries() {
        let cfg = PositConfig::fixed(32, 2).unwrap();
        let input = "# comment\nadd 40000000 40000000\ndiv 40000000 0\ncvt.es3 44000000\nsqrt 40000000 es=3\n";
        let mut out = Vec::new();
        let n = run_batch(input.as_bytes(), &mut out, &cfg).unwrap();
        assert_eq!(n, 4);
        assert_eq!(String::from_utf8(out).unwrap(), "48000000\n80000000 DZ\n42000000\n40000000\n");
    }

    #[test]
    fn rejects_bad_lines() {
        let cfg = PositConfig::fixed(32, 2).unwrap();
        assert!(eval_line("add 1", &cfg).is_err());
        assert!(eval_line("nope 1 2", &cfg).is_err());
        assert!(eval_line("add zz 1", &cfg).is_err());
    }
}
