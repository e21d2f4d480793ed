use std::fs::{self, File};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use posit_bench::bench::{self, Benchmark, PositPath};
use posit_bench::conformance::{run_check, CheckMode, CheckOptions};
use posit_core::oracle::{self, ExactRational};
use posit_core::{FpuOp, PositConfig, PositWord};
use posit_sim::isa::{disassemble, DecodeConfig};
use posit_sim::mem::DEFAULT_BASE;
use posit_sim::{Image, Machine, Mode, SimConfig, Status};

/// Exit status when the guest traps.
const EXIT_TRAP: u8 = 125;
/// Exit status when the instruction budget runs out.
const EXIT_FUEL: u8 = 124;

#[derive(Parser)]
#[command(name = "posit-rv", version, about = "Posit arithmetic, RV32 posit-unit simulator and benchmarks")]
struct Cli {
    /// Posit width in bits.
    #[arg(long, global = true, default_value_t = 32)]
    ps: u32,
    /// Exponent size (also the simulator's initial es mode).
    #[arg(long, global = true, default_value_t = 2)]
    es: u32,
    /// Posit unit integration.
    #[arg(long, global = true, default_value = "tight")]
    mode: Mode,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Random cases per operation in fuzz checks.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    count: u64,
    /// Write an instruction trace here (`-` for stderr).
    #[arg(long, global = true)]
    trace: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Round a decimal to a posit word, or show the value of a hex word.
    Convert { value: String },
    /// Compare the arithmetic units against the exact oracle.
    Check {
        #[arg(value_enum)]
        kind: CheckKind,
        /// Comma-separated operation names (default: all).
        #[arg(long, value_delimiter = ',')]
        ops: Option<Vec<String>>,
        /// Random triples for fused ops in exhaustive mode.
        #[arg(long, default_value_t = 4096)]
        fused_samples: u64,
        /// Corrupt one result on purpose, to prove the checker notices.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Run a flat binary or ELF32 image.
    Run {
        image: PathBuf,
        /// Load address for flat binaries.
        #[arg(long, value_parser = parse_u32, default_value = "0x80000000")]
        base: u32,
        /// Override the entry point.
        #[arg(long, value_parser = parse_u32)]
        entry: Option<u32>,
        /// Maximum instructions to execute.
        #[arg(long, default_value_t = 100_000_000)]
        fuel: u64,
    },
    /// Accuracy benchmarks, posit vs binary32.
    Bench {
        #[arg(value_enum, default_value = "all")]
        which: BenchKind,
        /// Evaluate posits with the library instead of the simulator.
        #[arg(long)]
        direct: bool,
    },
    /// Disassemble an image or individual words.
    Disasm {
        image: Option<PathBuf>,
        #[arg(long, value_parser = parse_u32, default_value = "0x80000000")]
        base: u32,
        /// Words to disassemble instead of an image.
        #[arg(long, value_parser = parse_u32, value_delimiter = ',')]
        word: Vec<u32>,
    },
    /// Answer oracle queries, one per line (`add 0x40000000 0x40000000`).
    Oracle { input: Option<PathBuf> },
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    Exhaustive,
    Fuzz,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BenchKind {
    Sin,
    Cos,
    Exp,
    Fft,
    All,
}

fn parse_u32(s: &str) -> Result<u32, String> {
    let r = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(h) => u32::from_str_radix(&h.replace('_', ""), 16),
        None => s.replace('_', "").parse(),
    };
    r.map_err(|e| format!("{s:?}: {e}"))
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Convert { value } => convert(cli, value),
        Command::Check { kind, ops, fused_samples, inject_fault } => {
            let mode = match kind {
                CheckKind::Exhaustive => CheckMode::Exhaustive,
                CheckKind::Fuzz => CheckMode::Fuzz,
            };
            let mut opts = CheckOptions::new(cli.ps, cli.es, mode);
            opts.seed = cli.seed;
            opts.count = cli.count;
            opts.fused_samples = *fused_samples;
            opts.inject_fault = *inject_fault;
            if let Some(names) = ops {
                let parsed: Result<Vec<FpuOp>, _> = names.iter().map(|n| n.parse::<FpuOp>()).collect();
                opts.ops = Some(parsed.map_err(|e| anyhow::anyhow!("{e}"))?);
            }
            let summary = run_check(&opts).map_err(anyhow::Error::msg)?;
            write!(sink(&cli.out)?, "{summary}")?;
            Ok(if summary.passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Run { image, base, entry, fuel } => run(cli, image, *base, *entry, *fuel),
        Command::Bench { which, direct } => {
            let path = if *direct { PositPath::Direct } else { PositPath::Sim(cli.mode) };
            let set: Vec<Benchmark> = match which {
                BenchKind::Sin => vec![Benchmark::Sin],
                BenchKind::Cos => vec![Benchmark::Cos],
                BenchKind::Exp => vec![Benchmark::Exp],
                BenchKind::Fft => vec![Benchmark::FftMagnitude, Benchmark::FftAngle],
                BenchKind::All => Benchmark::ALL.to_vec(),
            };
            if cli.ps != 32 {
                bail!("benchmarks run at ps=32");
            }
            let reports = bench::run_set(&set, cli.es, path)?;
            let mut out = sink(&cli.out)?;
            for (i, r) in reports.iter().enumerate() {
                if i > 0 {
                    writeln!(out)?;
                }
                write!(out, "{r}")?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Disasm { image, base, word } => {
            let cfg = DecodeConfig::default();
            let mut out = sink(&cli.out)?;
            if !word.is_empty() {
                for &w in word {
                    writeln!(out, "{}", disassemble(w, &cfg))?;
                }
                return Ok(ExitCode::SUCCESS);
            }
            let Some(path) = image else { bail!("give an image or --word") };
            let img = load_image(path, *base)?;
            for seg in &img.segments {
                for (i, chunk) in seg.data.chunks(4).enumerate() {
                    let mut b = [0u8; 4];
                    b[..chunk.len()].copy_from_slice(chunk);
                    let addr = seg.addr + 4 * i as u32;
                    writeln!(out, "{addr:#010x}: {}", disassemble(u32::from_le_bytes(b), &cfg))?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle { input } => {
            let cfg = PositConfig::fixed(cli.ps, cli.es)?;
            let out = sink(&cli.out)?;
            match input {
                Some(p) => oracle::run_batch(BufReader::new(File::open(p)?), out, &cfg)?,
                None => oracle::run_batch(io::stdin().lock(), out, &cfg)?,
            };
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn convert(cli: &Cli, value: &str) -> Result<ExitCode> {
    let cfg = PositConfig::fixed(cli.ps, cli.es)?;
    let digits = cli.ps.div_ceil(4) as usize;
    let mut out = sink(&cli.out)?;
    writeln!(out, "input: {value}")?;
    writeln!(out, "ps: {}", cli.ps)?;
    writeln!(out, "es: {}", cli.es)?;
    let (word, exact_input) = match value.strip_prefix("0x").or_else(|| value.strip_prefix("0X")) {
        Some(hex) => {
            let w = u32::from_str_radix(hex, 16).with_context(|| format!("bad word {value:?}"))?;
            if cli.ps < 32 && w >> cli.ps != 0 {
                bail!("{value} does not fit in {} bits", cli.ps);
            }
            (PositWord(w), None)
        }
        None => {
            let x: ExactRational = value.parse().map_err(|e| anyhow::anyhow!("{e}"))?;
            (oracle::round_exact(&x, &cfg), Some(x))
        }
    };
    let v = oracle::exact_value(word, &cfg);
    writeln!(out, "word: 0x{:0digits$x}", word.0)?;
    writeln!(out, "value: {}", v.to_sci_string())?;
    if let Some(x) = exact_input {
        writeln!(out, "exact: {}", v == x)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn load_image(path: &Path, base: u32) -> Result<Image> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Image::detect(bytes, base).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

fn run(cli: &Cli, path: &Path, base: u32, entry: Option<u32>, fuel: u64) -> Result<ExitCode> {
    if cli.ps != 32 {
        bail!("the simulator's posit unit is 32 bits wide");
    }
    let mut img = load_image(path, base)?;
    if let Some(e) = entry {
        img.entry = e;
    }
    let mut m = Machine::new(SimConfig { mem_base: DEFAULT_BASE.min(base), ..SimConfig::with_mode(cli.mode) });
    if !m.pcsr_mut().set_es_mode(cli.es) {
        bail!("the simulator supports es 2 or 3, not {}", cli.es);
    }
    m.load(&img).map_err(|e| anyhow::anyhow!("image does not fit in memory: {e:?}"))?;
    match &cli.trace {
        Some(p) if p.as_os_str() == "-" => m.set_trace(Box::new(io::stderr())),
        Some(p) => m.set_trace(Box::new(File::create(p)?)),
        None => {}
    }
    let report = m.run(fuel);
    write!(sink(&cli.out)?, "{report}")?;
    Ok(match report.status {
        Status::Exited(code) => ExitCode::from((code & 0xFF) as u8),
        Status::Trapped(_) => ExitCode::from(EXIT_TRAP),
        Status::FuelExhausted => ExitCode::from(EXIT_FUEL),
    })
}
