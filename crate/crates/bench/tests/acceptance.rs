//! Acceptance suite: one PASS/FAIL line per criterion, with its runtime
//! against the budget. Exits nonzero if any criterion fails that is not
//! listed as known-unattainable.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use posit_bench::bench::{self, Benchmark, PositPath};
use posit_bench::conformance::{run_check, CheckMode, CheckOptions};
use posit_bench::conformance_kernel::{operand_table, ConformanceKernel};
use posit_core::oracle::{exact_value, is_representable, reference, round_exact, ExactRational};
use posit_core::{FpuOp, IntRounding, PositConfig, PositWord, Real, P32E2, P32E3};
use posit_sim::asm::reg::*;
use posit_sim::isa::pcsr::CSR_FCSR;
use posit_sim::isa::{BranchKind, PositInstr, PositOp};
use posit_sim::mem::DEFAULT_BASE;
use posit_sim::{Asm, Machine, Mode, Program, SimConfig, Status};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

struct Suite {
    unexpected: Vec<&'static str>,
}

impl Suite {
    fn run(&mut self, id: &'static str, budget: Duration, known_unattainable: bool, f: impl FnOnce() -> Outcome) {
        let t = Instant::now();
        let outcome = f();
        let took = t.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if took <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over budget")),
            Err(d) => (false, d),
        };
        let tag = match (ok, known_unattainable) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        println!("{tag:<12} {id:<28} {:>8.2}s / {:>4}s  {detail}", took.as_secs_f64(), budget.as_secs());
        if !ok && !known_unattainable {
            self.unexpected.push(id);
        }
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cfg(es: u32) -> PositConfig {
    PositConfig::fixed(32, es).unwrap()
}

fn q(s: &str) -> ExactRational {
    s.parse().unwrap()
}

fn golden_bits() -> Outcome {
    for (x, want) in [("1.5", 0x4400_0000u32), ("1.2", 0x4199_999A)] {
        let lib = P32E2::from_f64(x.parse().unwrap()).to_bits();
        let ora = round_exact(&q(x), &cfg(2)).0;
        ensure(lib == want && ora == want, || format!("encode({x}) = {lib:#010x} / oracle {ora:#010x}, want {want:#010x}"))?;
        let back = exact_value(PositWord(want), &cfg(2));
        ensure(round_exact(&back, &cfg(2)).0 == want, || format!("decode({want:#010x}) does not re-encode"))?;
        ensure(P32E2::from_bits(want).to_f64() == back.to_f64(), || format!("decode({want:#010x}) disagrees with oracle"))?;
    }
    ensure(exact_value(PositWord(0x4400_0000), &cfg(2)) == q("3/2"), || "0x44000000 is not 1.5".into())?;
    Ok("1.5 -> 0x44000000, 1.2 -> 0x4199999a, decode inverts".into())
}

fn check(ps: u32, es: u32, mode: CheckMode, count: u64) -> Result<(u64, u64), String> {
    let mut o = CheckOptions::new(ps, es, mode);
    o.count = count;
    let s = run_check(&o)?;
    ensure(s.passed(), || format!("ps={ps} es={es}: {} mismatches, {:?}", s.total_mismatches(), s.rule_failures.first()))?;
    Ok((s.total_cases(), s.special_cases + s.rule_checks))
}

fn special_values() -> Outcome {
    let mut n = 0;
    for es in [2, 3] {
        n += check(32, es, CheckMode::Fuzz, 0)?.1;
    }
    for es in [2, 3] {
        n += check(8, es, CheckMode::Fuzz, 0)?.1;
    }
    Ok(format!("{n} corpus tuples and propagation rules, no mismatches"))
}

fn exhaustive() -> Outcome {
    let mut n = 0;
    for es in [2, 3] {
        n += check(8, es, CheckMode::Exhaustive, 0)?.0;
    }
    Ok(format!("{n} cases at ps=8 es=2,3, zero mismatches"))
}

fn fuzz() -> Outcome {
    let mut n = 0;
    for es in [2, 3] {
        n += check(32, es, CheckMode::Fuzz, 1_000_000)?.0;
    }
    Ok(format!("{n} cases at ps=32 es=2,3 (10^6 per op, dual and fixed datapaths), zero mismatches"))
}

fn range_encodings() -> Outcome {
    let w = round_exact(&q("3.0E+40"), &cfg(3));
    let printed = exact_value(w, &cfg(3)).to_sci_string();
    ensure(printed == "3.000865123284026E+40", || format!("3.0E40 at es=3 prints {printed}"))?;
    let x = 15.996093809604645;
    let p = P32E2::from_f64(x);
    ensure(p.to_f64() == x, || format!("{x} is not representable at es=2 (nearest {})", p.to_f64()))?;
    Ok(format!("3.0E40 -> {:#010x} = {printed}; {x} = {:#010x}", w.0, p.to_bits()))
}

fn range_bracket() -> Outcome {
    let c = cfg(3);
    let lo = format!("{:.0E}", P32E3::from_bits(c.minpos().0).to_f64());
    let hi = format!("{:.0E}", P32E3::from_bits(c.maxpos().0).to_f64());
    let got = format!("minpos {lo}, maxpos {hi}");
    ensure(lo == "2E-75" && hi == "5E74", || format!("{got}; expected 2E-75 to 5E74"))?;
    Ok(got)
}

fn run(program: &Program, mode: Mode, fuel: u64) -> Result<Machine, String> {
    let mut m = Machine::new(SimConfig::with_mode(mode));
    m.load(&program.image()).map_err(|e| format!("{e:?}"))?;
    let r = m.run(fuel);
    ensure(r.status == Status::Exited(0), || format!("guest ended with {:?}", r.status))?;
    Ok(m)
}

fn cycle_model() -> Outcome {
    let mut a = Asm::new(DEFAULT_BASE);
    for op in PositOp::ALL {
        if op.is_fused() {
            a.fused(op, 4, 1, 2, 3);
        } else {
            a.fop(op, 4, 1, 2);
        }
    }
    a.fcvt_es(5, 2, 3);
    let p = a.finish().unwrap();
    let mut out = Vec::new();
    for mode in [Mode::Tight, Mode::Coproc] {
        let mut m = Machine::new(SimConfig::with_mode(mode));
        m.load(&p.image()).unwrap();
        let r = m.run(PositOp::ALL.len() as u64 + 1);
        ensure(r.cycles == 129, || format!("{mode}: {} cycles", r.cycles))?;
        out.push(format!("{mode}={}", r.cycles));
    }
    Ok(format!("25 mnemonics, {}", out.join(" ")))
}

fn mode_equivalence() -> Outcome {
    let k = ConformanceKernel::build(operand_table(1000, 11));
    let t = run(&k.program, Mode::Tight, 10_000_000)?;
    let c = run(&k.program, Mode::Coproc, 10_000_000)?;
    let (rt, rc) = (t.report(Status::Exited(0)), c.report(Status::Exited(0)));
    ensure(rt.same_architectural_state(&rc), || "architectural state differs".into())?;
    ensure(t.mem().contents() == c.mem().contents(), || "memory differs".into())?;
    let bad = k.mismatches(&t);
    ensure(bad.is_empty(), || format!("{} results disagree with oracle: {}", bad.len(), bad[0]))?;
    Ok(format!(
        "{} slots x {} operand triples, {} instructions; identical state and memory",
        k.slots.len(),
        k.operands.len(),
        rt.retired
    ))
}

fn benchmarks() -> Outcome {
    let reports = bench::run_all(2, PositPath::Sim(Mode::Tight)).map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    let mut errors = Vec::new();
    for r in &reports {
        let name = r.benchmark.name();
        parts.push(format!("{name} x{:.1}", r.ratio()));
        if !r.posit_better() {
            errors.push(format!("{name}: posit not better"));
        }
        if r.ratio() < 3.0 {
            errors.push(format!("{name}: ratio {:.2} < 3", r.ratio()));
        }
        if matches!(r.benchmark, Benchmark::Sin | Benchmark::Cos | Benchmark::Exp) && r.ci_overlap() {
            errors.push(format!("{name}: confidence intervals overlap"));
        }
    }
    let s = parts.join(", ");
    ensure(errors.is_empty(), || format!("{s}; {}", errors.join("; ")))?;
    Ok(format!("{s}; sin/cos/exp CIs disjoint"))
}

/// Loop that converts each word of `inputs` with FCVT.W.S and FCVT.WU.S,
/// RNE and RTZ, storing four integers per input.
fn rtz() -> Outcome {
    let mut rng = StdRng::seed_from_u64(5);
    let mut inputs = vec![0x4400_0000u32];
    inputs.extend((0..10_000).map(|_| rng.gen::<u32>()));
    let convs = [(PositOp::FcvtWS, 0u8), (PositOp::FcvtWS, 1), (PositOp::FcvtWuS, 0), (PositOp::FcvtWuS, 1)];
    let mut a = Asm::new(DEFAULT_BASE);
    a.la(S0, "in").la(S1, "out").li(T1, inputs.len() as i32);
    a.label("loop").flw(1, S0, 0);
    for (i, &(op, rm)) in convs.iter().enumerate() {
        a.emit(posit_sim::isa::Instr::Posit(PositInstr::unary(op, A1, 1).with_rm(rm))).sw(A1, S1, 4 * i as i32);
    }
    a.addi(S0, S0, 4).addi(S1, S1, 16).addi(T1, T1, -1).branch(BranchKind::Bne, T1, 0, "loop");
    a.addi(A0, 0, 0).exit();
    a.label("in").words(&inputs).label("out").space(4 * inputs.len());
    let p = a.finish().unwrap();
    let m = run(&p, Mode::Tight, 1_000_000)?;
    let out = p.label("out").unwrap();
    let got = |i: usize, k: usize| m.mem().load_word(out + 4 * (4 * i + k) as u32).unwrap();
    ensure((got(0, 0), got(0, 1)) == (2, 1), || format!("FCVT.W.S(1.5): rne={} rtz={}", got(0, 0), got(0, 1)))?;
    for (i, &w) in inputs.iter().enumerate() {
        for (k, &(op, rm)) in convs.iter().enumerate() {
            let rounding = if rm == 1 { IntRounding::TowardZero } else { IntRounding::NearestEven };
            let unsigned = op == PositOp::FcvtWuS;
            let want = reference(FpuOp::PositToInt { unsigned, rounding }, &[w], &cfg(2)).0 .0;
            ensure(got(i, k) == want, || format!("{} rm={rm} of {w:#010x}: got {:#x}, want {want:#x}", op.mnemonic(), got(i, k)))?;
        }
    }
    Ok(format!("FCVT.W.S(1.5) = 2 (rne), 1 (rtz); {} conversions match oracle", 4 * inputs.len()))
}

fn fcvt_es() -> Outcome {
    let mut rng = StdRng::seed_from_u64(9);
    let inputs: Vec<u32> = (0..100_000).map(|_| rng.gen()).collect();
    let mut a = Asm::new(DEFAULT_BASE);
    a.li(T0, 2 << 8).csrrw(0, CSR_FCSR, T0);
    a.la(S0, "in").la(S1, "up").la(A2, "back").li(T1, inputs.len() as i32);
    a.label("loop").flw(1, S0, 0).fcvt_es(1, 2, 3).fsw(1, S1, 0).fcvt_es(1, 3, 2).fsw(1, A2, 0);
    a.addi(S0, S0, 4).addi(S1, S1, 4).addi(A2, A2, 4).addi(T1, T1, -1).branch(BranchKind::Bne, T1, 0, "loop");
    a.addi(A0, 0, 0).exit();
    a.label("in").words(&inputs).label("up").space(inputs.len()).label("back").space(inputs.len());
    let p = a.finish().unwrap();
    let m = run(&p, Mode::Tight, 2_000_000)?;
    let (up, back) = (p.label("up").unwrap(), p.label("back").unwrap());
    let mut exact = 0;
    for (i, &w) in inputs.iter().enumerate() {
        let u = m.mem().load_word(up + 4 * i as u32).unwrap();
        let b = m.mem().load_word(back + 4 * i as u32).unwrap();
        let x = exact_value(PositWord(w), &cfg(2));
        if is_representable(&x, 32, 3) {
            exact += 1;
            ensure(b == w && exact_value(PositWord(u), &cfg(3)) == x, || format!("{w:#010x}: 2->3->2 gave {b:#010x}"))?;
        } else {
            let want = round_exact(&x, &cfg(3)).0;
            ensure(u == want, || format!("{w:#010x}: 2->3 gave {u:#010x}, oracle {want:#010x}"))?;
        }
    }
    Ok(format!("{} words: {exact} exact at es=3 round-trip, {} rounded as the oracle", inputs.len(), inputs.len() - exact))
}

fn main() -> ExitCode {
    let mut s = Suite { unexpected: Vec::new() };
    let sec = Duration::from_secs;
    s.run("golden-bit-patterns", sec(1), false, golden_bits);
    s.run("special-values", sec(1), false, special_values);
    s.run("exhaustive-ps8", sec(120), false, exhaustive);
    s.run("fuzz-ps32", sec(600), false, fuzz);
    s.run("dynamic-range-encodings", sec(1), false, range_encodings);
    s.run("dynamic-range-es3-bracket", sec(1), true, range_bracket);
    s.run("cycle-model", sec(1), false, cycle_model);
    s.run("integration-mode-equivalence", sec(60), false, mode_equivalence);
    s.run("accuracy-benchmarks", sec(120), false, benchmarks);
    s.run("fcvt-w-rtz", sec(10), false, rtz);
    s.run("fcvt-es", sec(30), false, fcvt_es);
    if s.unexpected.is_empty() {
        println!("acceptance: ok");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} unexpected failure(s): {}", s.unexpected.len(), s.unexpected.join(", "));
        ExitCode::FAILURE
    }
}
