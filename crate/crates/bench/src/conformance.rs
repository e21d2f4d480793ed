//! Datapath-vs-oracle conformance: exhaustive sweeps for small posits,
//! seeded fuzzing for 32-bit ones, and a special-value corpus that is
//! always included.

use std::fmt;

use posit_core::arith::execute;
use posit_core::oracle::reference;
use posit_core::{CompareKind, ExceptionFlags, FpuOp, IntRounding, PositConfig, PositWord, SignInjection};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    Exhaustive,
    Fuzz,
}

impl fmt::Display for CheckMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckMode::Exhaustive => "exhaustive",
            CheckMode::Fuzz => "fuzz",
        })
    }
}

#[derive(Debug, Clone)]
pub struct CheckOptions {
    pub ps: u32,
    pub es: u32,
    pub mode: CheckMode,
    /// `None` checks every operation.
    pub ops: Option<Vec<FpuOp>>,
    pub seed: u64,
    /// Random tuples per op in fuzz mode.
    pub count: u64,
    /// Random triples per fused op in exhaustive mode.
    pub fused_samples: u64,
    /// Flip the LSB of every datapath `add` result (harness self-test).
    pub inject_fault: bool,
    /// Mismatches kept for reporting.
    pub max_reported: usize,
}

impl CheckOptions {
    pub fn new(ps: u32, es: u32, mode: CheckMode) -> Self {
        Self { ps, es, mode, ops: None, seed: 1, count: 1_000_000, fused_samples: 1 << 12, inject_fault: false, max_reported: 20 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub op: FpuOp,
    pub operands: Vec<u32>,
    pub datapath: &'static str,
    pub got: (PositWord, ExceptionFlags),
    pub expected: (PositWord, ExceptionFlags),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OpTally {
    pub op: FpuOp,
    pub cases: u64,
    pub mismatches: u64,
}

#[derive(Debug, Clone)]
pub struct CheckSummary {
    pub options: CheckOptions,
    pub datapaths: Vec<&'static str>,
    pub special_cases: u64,
    pub rule_checks: u64,
    pub rule_failures: Vec<String>,
    pub ops: Vec<OpTally>,
    pub mismatches: Vec<Mismatch>,
}

impl CheckSummary {
    pub fn total_cases(&self) -> u64 {
        self.ops.iter().map(|t| t.cases).sum()
    }

    pub fn total_mismatches(&self) -> u64 {
        self.ops.iter().map(|t| t.mismatches).sum()
    }

    pub fn passed(&self) -> bool {
        self.total_mismatches() == 0 && self.rule_failures.is_empty()
    }
}

fn flags_suffix(f: ExceptionFlags) -> &'static str {
    if f.contains(ExceptionFlags::DZ) {
        " DZ"
    } else {
        ""
    }
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.op)?;
        for o in &self.operands {
            write!(f, " {o:#010x}")?;
        }
        write!(
            f,
            " got={:#010x}{} expected={:#010x}{} datapath={}",
            self.got.0 .0,
            flags_suffix(self.got.1),
            self.expected.0 .0,
            flags_suffix(self.expected.1),
            self.datapath
        )
    }
}

impl fmt::Display for CheckSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = &self.options;
        writeln!(f, "check: {}", o.mode)?;
        writeln!(f, "ps: {}", o.ps)?;
        writeln!(f, "es: {}", o.es)?;
        writeln!(f, "datapaths: {}", self.datapaths.join(","))?;
        writeln!(f, "seed: {}", o.seed)?;
        match o.mode {
            CheckMode::Fuzz => writeln!(f, "count: {}", o.count)?,
            CheckMode::Exhaustive => writeln!(f, "fused_samples: {}", o.fused_samples)?,
        }
        writeln!(f, "special_cases: {}", self.special_cases)?;
        writeln!(f, "rule_checks: {}", self.rule_checks)?;
        for r in &self.rule_failures {
            writeln!(f, "rule_failure: {r}")?;
        }
        for t in &self.ops {
            writeln!(f, "op.{}: cases={} mismatches={}", t.op, t.cases, t.mismatches)?;
        }
        for m in &self.mismatches {
            writeln!(f, "mismatch: {m}")?;
        }
        writeln!(f, "total_cases: {}", self.total_cases())?;
        writeln!(f, "total_mismatches: {}", self.total_mismatches())?;
        writeln!(f, "result: {}", if self.passed() { "pass" } else { "fail" })
    }
}

/// Datapaths under test. 32-bit es=2/3 runs both the dual-mode datapath
/// and the fixed-es build of the same width.
pub fn datapaths(ps: u32, es: u32) -> Result<Vec<(&'static str, PositConfig)>, posit_core::FormatError> {
    let fixed = PositConfig::fixed(ps, es)?;
    Ok(if ps == 32 && matches!(es, 2 | 3) {
        vec![("dual", PositConfig::dual(es)?), ("fixed", fixed)]
    } else {
        vec![("fixed", fixed)]
    })
}

/// es values reachable by FCVT.ES on every datapath under test.
pub fn convert_targets(paths: &[(&'static str, PositConfig)]) -> Vec<u32> {
    (0..=3).filter(|&e| paths.iter().all(|(_, c)| c.with_es(e).is_ok())).collect()
}

/// 0, NaR, ±maxpos, ±minpos and ±1.
pub fn special_corpus(cfg: &PositConfig) -> Vec<u32> {
    let one = cfg.one();
    vec![
        0,
        cfg.nar().0,
        cfg.maxpos().0,
        cfg.negate(cfg.maxpos()).0,
        cfg.minpos().0,
        cfg.negate(cfg.minpos()).0,
        one.0,
        cfg.negate(one).0,
    ]
}

struct Checker<'a> {
    paths: &'a [(&'static str, PositConfig)],
    inject_fault: bool,
    max_reported: usize,
    mismatches: Vec<Mismatch>,
}

impl Checker<'_> {
    /// Returns the number of mismatching datapaths for this tuple.
    fn check(&mut self, op: FpuOp, operands: &[u32]) -> u64 {
        let expected = reference(op, operands, &self.paths[0].1);
        let mut bad = 0;
        for (name, cfg) in self.paths {
            let mut got = execute(op, operands, cfg);
            if self.inject_fault && op == FpuOp::Add {
                got.0 .0 ^= 1;
            }
            if got != expected {
                bad += 1;
                if self.mismatches.len() < self.max_reported {
                    self.mismatches.push(Mismatch { op, operands: operands.to_vec(), datapath: name, got, expected });
                }
            }
        }
        bad
    }
}

fn random_operand(rng: &mut StdRng, cfg: &PositConfig, corpus: &[u32]) -> u32 {
    // Mostly uniform words, with some weight on the special corpus and on
    // patterns with long regimes.
    match rng.gen_range(0..16) {
        0 => corpus[rng.gen_range(0..corpus.len())],
        1 => rng.gen::<u32>() & 0xFFFF & cfg.mask(),
        2 => (rng.gen::<u32>() | 0x7FF0_0000) & cfg.mask(),
        _ => rng.gen::<u32>() & cfg.mask(),
    }
}

pub fn run_check(options: &CheckOptions) -> Result<CheckSummary, String> {
    let paths = datapaths(options.ps, options.es).map_err(|e| e.to_string())?;
    if options.mode == CheckMode::Exhaustive && options.ps > 16 {
        return Err(format!("exhaustive mode needs ps <= 16 (got {})", options.ps));
    }
    let cfg = paths[0].1;
    let targets = convert_targets(&paths);
    let ops = options.ops.clone().unwrap_or_else(|| FpuOp::all(&targets));
    for op in &ops {
        if let FpuOp::ConvertEs { to_es } = op {
            if !targets.contains(to_es) {
                return Err(format!("{op} is not available at ps={}", options.ps));
            }
        }
    }
    let corpus = special_corpus(&cfg);
    let mut checker =
        Checker { paths: &paths, inject_fault: options.inject_fault, max_reported: options.max_reported, mismatches: vec![] };
    let mut rng = StdRng::seed_from_u64(options.seed);
    let mut tallies = Vec::new();
    let mut special_cases = 0;

    for &op in &ops {
        let mut t = OpTally { op, cases: 0, mismatches: 0 };
        let mut run = |operands: &[u32], t: &mut OpTally| {
            t.cases += 1;
            t.mismatches += checker.check(op, operands);
        };
        // Special corpus: every tuple of corpus values.
        let n = corpus.len();
        let tuples = n.pow(op.arity() as u32);
        for i in 0..tuples {
            let v: Vec<u32> = (0..op.arity()).map(|k| corpus[i / n.pow(k as u32) % n]).collect();
            run(&v, &mut t);
            special_cases += 1;
        }
        let words = 1u64 << options.ps;
        match (options.mode, op.arity()) {
            (CheckMode::Exhaustive, 1) => {
                for a in 0..words {
                    run(&[a as u32], &mut t);
                }
            }
            (CheckMode::Exhaustive, 2) => {
                for a in 0..words {
                    for b in 0..words {
                        run(&[a as u32, b as u32], &mut t);
                    }
                }
            }
            (mode, arity) => {
                let count = if mode == CheckMode::Exhaustive { options.fused_samples } else { options.count };
                let mut v = [0u32; 3];
                for _ in 0..count {
                    for slot in v.iter_mut().take(arity) {
                        *slot = random_operand(&mut rng, &cfg, &corpus);
                    }
                    run(&v[..arity], &mut t);
                }
            }
        }
        tallies.push(t);
    }

    let mut rule_checks = 0;
    let mut rule_failures = Vec::new();
    for (name, c) in &paths {
        let (n, fails) = special_value_rules(c);
        rule_checks += n;
        rule_failures.extend(fails.into_iter().map(|f| format!("{name}: {f}")));
    }

    Ok(CheckSummary {
        options: options.clone(),
        datapaths: paths.iter().map(|(n, _)| *n).collect(),
        special_cases,
        rule_checks,
        rule_failures,
        ops: tallies,
        mismatches: checker.mismatches,
    })
}

/// Propagation rules for zero and NaR, and saturation at the extremes,
/// stated directly rather than through the oracle. Returns the number of
/// checks and a description of each failure.
pub fn special_value_rules(cfg: &PositConfig) -> (u64, Vec<String>) {
    let nar = cfg.nar().0;
    let maxpos = cfg.maxpos().0;
    let minpos = cfg.minpos().0;
    let neg = |w: u32| cfg.negate(PositWord(w)).0;
    let finite: Vec<u32> = special_corpus(cfg).into_iter().filter(|&w| w != nar).collect();
    let nonzero: Vec<u32> = finite.iter().copied().filter(|&w| w != 0).collect();
    let mut checks = 0u64;
    let mut fails = Vec::new();
    let mut expect = |op: FpuOp, v: &[u32], want: u32, flags: ExceptionFlags| {
        checks += 1;
        let got = execute(op, v, cfg);
        if got != (PositWord(want), flags) {
            fails.push(format!("{op} {v:x?} gave {:#x} flags={}, want {want:#x} flags={}", got.0 .0, got.1 .0, flags.0));
        }
    };
    let none = ExceptionFlags::NONE;
    let arith = [
        FpuOp::Add,
        FpuOp::Sub,
        FpuOp::Mul,
        FpuOp::MulAdd,
        FpuOp::MulSub,
        FpuOp::NegMulSub,
        FpuOp::NegMulAdd,
    ];

    // NaR absorbs every arithmetic operation.
    for &op in &arith {
        for &x in &finite {
            for pos in 0..op.arity() {
                let mut v = vec![x; op.arity()];
                v[pos] = nar;
                expect(op, &v, nar, none);
            }
        }
    }
    for &x in &nonzero {
        expect(FpuOp::Div, &[nar, x], nar, none);
        expect(FpuOp::Div, &[x, nar], nar, none);
        // Division by zero: NaR and DZ.
        expect(FpuOp::Div, &[x, 0], nar, ExceptionFlags::DZ);
    }
    expect(FpuOp::Div, &[0, 0], nar, ExceptionFlags::DZ);
    expect(FpuOp::Div, &[nar, 0], nar, ExceptionFlags::DZ);
    expect(FpuOp::Sqrt, &[nar], nar, none);
    expect(FpuOp::Sqrt, &[0], 0, none);
    for &x in &nonzero {
        if cfg.sign_bit(PositWord(x)) {
            expect(FpuOp::Sqrt, &[x], nar, none);
        }
    }

    // Zero is the additive identity and multiplicative annihilator.
    for &x in &finite {
        expect(FpuOp::Add, &[x, 0], x, none);
        expect(FpuOp::Add, &[0, x], x, none);
        expect(FpuOp::Sub, &[x, 0], x, none);
        expect(FpuOp::Sub, &[0, x], neg(x), none);
        expect(FpuOp::Mul, &[x, 0], 0, none);
        expect(FpuOp::MulAdd, &[0, x, x], x, none);
        expect(FpuOp::MulAdd, &[x, 0, 0], 0, none);
    }
    for &x in &nonzero {
        expect(FpuOp::Div, &[0, x], 0, none);
    }

    // Saturation instead of overflow/underflow.
    expect(FpuOp::Mul, &[maxpos, maxpos], maxpos, none);
    expect(FpuOp::Mul, &[neg(maxpos), maxpos], neg(maxpos), none);
    expect(FpuOp::Add, &[maxpos, maxpos], maxpos, none);
    expect(FpuOp::Mul, &[minpos, minpos], minpos, none);
    expect(FpuOp::Mul, &[neg(minpos), minpos], neg(minpos), none);
    expect(FpuOp::Div, &[minpos, maxpos], minpos, none);
    expect(FpuOp::Div, &[maxpos, minpos], maxpos, none);

    // Conversions.
    let int_nar = 1u32 << (cfg.ps() - 1);
    for unsigned in [false, true] {
        for rounding in [IntRounding::NearestEven, IntRounding::TowardZero] {
            expect(FpuOp::PositToInt { unsigned, rounding }, &[nar], int_nar, none);
            expect(FpuOp::PositToInt { unsigned, rounding }, &[0], 0, none);
        }
        expect(FpuOp::IntToPosit { unsigned }, &[0], 0, none);
    }
    for to_es in (0..=3).filter(|&e| cfg.with_es(e).is_ok()) {
        expect(FpuOp::ConvertEs { to_es }, &[nar], nar, none);
        expect(FpuOp::ConvertEs { to_es }, &[0], 0, none);
    }

    // Classification, ordering and sign injection.
    expect(FpuOp::Classify, &[0], 1 << 4, none);
    expect(FpuOp::Classify, &[nar], 1 << 9, none);
    expect(FpuOp::Compare(CompareKind::Eq), &[nar, nar], 1, none);
    for &x in &finite {
        expect(FpuOp::Compare(CompareKind::Lt), &[nar, x], 1, none);
        expect(FpuOp::Compare(CompareKind::Eq), &[nar, x], 0, none);
        expect(FpuOp::Compare(CompareKind::Min), &[x, nar], nar, none);
        expect(FpuOp::Compare(CompareKind::Max), &[x, nar], x, none);
        for kind in [SignInjection::Copy, SignInjection::Negate, SignInjection::Xor] {
            expect(FpuOp::SignInject(kind), &[nar, x], nar, none);
            expect(FpuOp::SignInject(kind), &[0, x], 0, none);
        }
    }
    (checks, fails)
}
