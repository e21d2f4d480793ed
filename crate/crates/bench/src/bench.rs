//! Accuracy benchmarks: posit (es=2 or 3, through the simulator or
//! directly) against binary32, both measured against an f64 reference
//! computed by the same algorithm.

use std::fmt;

use anyhow::{bail, Context, Result};
use posit_core::{Real, P32E2, P32E3};
use posit_sim::{Machine, Mode, Program, RunReport, SimConfig, Status};

use crate::kernels::{self, Sample, Series, FFT_N};
use crate::stats::{percent_error, MeanCi};

const SIM_MEM: usize = 1 << 20;
const SIM_FUEL: u64 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Benchmark {
    Sin,
    Cos,
    Exp,
    FftMagnitude,
    FftAngle,
}

impl Benchmark {
    pub const ALL: [Benchmark; 5] = [Benchmark::Sin, Benchmark::Cos, Benchmark::Exp, Benchmark::FftMagnitude, Benchmark::FftAngle];

    pub fn name(self) -> &'static str {
        match self {
            Benchmark::Sin => "sin",
            Benchmark::Cos => "cos",
            Benchmark::Exp => "exp",
            Benchmark::FftMagnitude => "fft_magnitude",
            Benchmark::FftAngle => "fft_angle",
        }
    }
}

/// How the posit side is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PositPath {
    Sim(Mode),
    Direct,
}

impl fmt::Display for PositPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PositPath::Sim(m) => write!(f, "sim-{m}"),
            PositPath::Direct => f.write_str("direct"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub benchmark: Benchmark,
    pub es: u32,
    pub path: PositPath,
    pub samples: usize,
    pub excluded: Vec<i32>,
    pub posit: MeanCi,
    pub float: MeanCi,
    /// Simulator cycles and retired instructions, when run there.
    pub cycles: Option<u64>,
    pub retired: Option<u64>,
}

impl BenchReport {
    /// float mean error / posit mean error.
    pub fn ratio(&self) -> f64 {
        self.float.mean / self.posit.mean
    }

    pub fn posit_better(&self) -> bool {
        self.posit.mean < self.float.mean
    }

    pub fn ci_overlap(&self) -> bool {
        self.posit.overlaps(&self.float)
    }
}

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ex: Vec<String> = self.excluded.iter().map(i32::to_string).collect();
        writeln!(f, "benchmark: {}", self.benchmark.name())?;
        writeln!(f, "es: {}", self.es)?;
        writeln!(f, "path: {}", self.path)?;
        writeln!(f, "samples: {}", self.samples)?;
        writeln!(f, "excluded: {}", if ex.is_empty() { "none".into() } else { ex.join(",") })?;
        for (name, m) in [("posit", &self.posit), ("float", &self.float)] {
            writeln!(f, "{name}_mean_pct_error: {:.6e}", m.mean)?;
            writeln!(f, "{name}_ci95: [{:.6e}, {:.6e}]", m.low, m.high)?;
        }
        writeln!(f, "ratio: {:.3}", self.ratio())?;
        writeln!(f, "posit_better: {}", self.posit_better())?;
        writeln!(f, "ci_overlap: {}", self.ci_overlap())?;
        if let (Some(c), Some(r)) = (self.cycles, self.retired) {
            writeln!(f, "cycles: {c}")?;
            writeln!(f, "retired: {r}")?;
        }
        Ok(())
    }
}

pub fn posit_from_f64(es: u32, x: f64) -> u32 {
    match es {
        2 => P32E2::from_f64(x).to_bits(),
        3 => P32E3::from_f64(x).to_bits(),
        _ => panic!("es {es} has no 32-bit kernel type"),
    }
}

pub fn posit_to_f64(es: u32, w: u32) -> f64 {
    match es {
        2 => P32E2::from_bits(w).to_f64(),
        3 => P32E3::from_bits(w).to_f64(),
        _ => panic!("es {es} has no 32-bit kernel type"),
    }
}

fn check_es(es: u32) -> Result<()> {
    if !matches!(es, 2 | 3) {
        bail!("benchmarks run at ps=32 with es 2 or 3, not {es}");
    }
    Ok(())
}

pub fn run_program(program: &Program, mode: Mode) -> Result<(Machine, RunReport)> {
    let mut m = Machine::new(SimConfig { mem_size: SIM_MEM, ..SimConfig::with_mode(mode) });
    m.load(&program.image()).map_err(|e| anyhow::anyhow!("loading kernel: {e:?}"))?;
    let r = m.run(SIM_FUEL);
    if r.status != Status::Exited(0) {
        bail!("kernel did not exit cleanly: {:?}", r.status);
    }
    Ok((m, r))
}

fn read_words(m: &Machine, program: &Program, label: &str, n: usize) -> Result<Vec<u32>> {
    let base = program.label(label).with_context(|| format!("no label {label}"))?;
    (0..n)
        .map(|i| m.mem().load_word(base + 4 * i as u32).map_err(|e| anyhow::anyhow!("reading {label}: {e:?}")))
        .collect()
}

/// Posit series values through the simulator, as f64, with the run report.
pub fn series_sim(series: Series, es: u32, samples: &[Sample], mode: Mode) -> Result<(Vec<f64>, RunReport)> {
    check_es(es)?;
    let inputs: Vec<u32> = samples.iter().map(|s| posit_from_f64(es, s.x)).collect();
    let signs: Vec<u32> = samples.iter().map(|s| posit_from_f64(es, if s.negate { -1.0 } else { 1.0 })).collect();
    let divisors: Vec<u32> = (1..series.terms()).map(|n| posit_from_f64(es, f64::from(series.divisor(n)))).collect();
    let program = kernels::series_program(series, es, &inputs, &signs, &divisors, posit_from_f64(es, 1.0));
    let (m, r) = run_program(&program, mode)?;
    let out = read_words(&m, &program, "outputs", samples.len())?;
    Ok((out.into_iter().map(|w| posit_to_f64(es, w)).collect(), r))
}

pub fn series_direct(series: Series, es: u32, samples: &[Sample]) -> Result<Vec<f64>> {
    check_es(es)?;
    Ok(match es {
        2 => kernels::eval_samples::<P32E2>(series, samples),
        _ => kernels::eval_samples::<P32E3>(series, samples),
    })
}

/// Posit FFT through the simulator: (magnitude, angle) and the run report.
pub fn fft_sim(es: u32, mode: Mode) -> Result<(Vec<f64>, Vec<f64>, RunReport)> {
    check_es(es)?;
    let input = kernels::fft_input();
    let bits = FFT_N.trailing_zeros();
    let perm = |f: &dyn Fn(&(f64, f64)) -> f64| -> Vec<u32> {
        (0..FFT_N).map(|i| posit_from_f64(es, f(&input[kernels::bit_reverse(i, bits)]))).collect()
    };
    let (re, im) = (perm(&|c| c.0), perm(&|c| c.1));
    let tw = kernels::twiddles();
    let twr: Vec<u32> = tw.iter().map(|c| posit_from_f64(es, c.0)).collect();
    let twi: Vec<u32> = tw.iter().map(|c| posit_from_f64(es, c.1)).collect();
    let program = kernels::fft_program(es, &re, &im, &twr, &twi);
    let (m, r) = run_program(&program, mode)?;
    let re = read_words(&m, &program, "re", FFT_N)?;
    let im = read_words(&m, &program, "im", FFT_N)?;
    let mag = read_words(&m, &program, "mag", FFT_N)?;
    let ang = re.iter().zip(&im).map(|(&r, &i)| posit_to_f64(es, i).atan2(posit_to_f64(es, r))).collect();
    Ok((mag.into_iter().map(|w| posit_to_f64(es, w)).collect(), ang, r))
}

pub fn fft_direct(es: u32) -> Result<(Vec<f64>, Vec<f64>)> {
    check_es(es)?;
    Ok(match es {
        2 => kernels::fft_polar::<P32E2>(),
        _ => kernels::fft_polar::<P32E3>(),
    })
}

fn errors(got: &[f64], reference: &[f64]) -> Vec<f64> {
    got.iter().zip(reference).map(|(&g, &r)| percent_error(g, r)).collect()
}

/// Runs one benchmark. FFT benchmarks share one transform; use
/// [`run_all`] to avoid running it twice.
pub fn run(benchmark: Benchmark, es: u32, path: PositPath) -> Result<BenchReport> {
    let mut v = run_set(&[benchmark], es, path)?;
    Ok(v.remove(0))
}

pub fn run_all(es: u32, path: PositPath) -> Result<Vec<BenchReport>> {
    run_set(&Benchmark::ALL, es, path)
}

pub fn run_set(which: &[Benchmark], es: u32, path: PositPath) -> Result<Vec<BenchReport>> {
    let mut out = Vec::new();
    let mut fft: Option<(Vec<f64>, Vec<f64>, Option<RunReport>)> = None;
    for &b in which {
        let report = match b {
            Benchmark::Sin | Benchmark::Cos | Benchmark::Exp => {
                let series = match b {
                    Benchmark::Sin => Series::Sin,
                    Benchmark::Cos => Series::Cos,
                    _ => Series::Exp,
                };
                let (samples, excluded) = kernels::samples(series);
                let reference = kernels::eval_samples::<f64>(series, &samples);
                let float = kernels::eval_samples::<f32>(series, &samples);
                let (posit, rr) = match path {
                    PositPath::Sim(mode) => {
                        let (v, r) = series_sim(series, es, &samples, mode)?;
                        (v, Some(r))
                    }
                    PositPath::Direct => (series_direct(series, es, &samples)?, None),
                };
                report(b, es, path, excluded, &posit, &float, &reference, rr.as_ref())
            }
            Benchmark::FftMagnitude | Benchmark::FftAngle => {
                if fft.is_none() {
                    fft = Some(match path {
                        PositPath::Sim(mode) => {
                            let (m, a, r) = fft_sim(es, mode)?;
                            (m, a, Some(r))
                        }
                        PositPath::Direct => {
                            let (m, a) = fft_direct(es)?;
                            (m, a, None)
                        }
                    });
                }
                let (pm, pa, rr) = fft.as_ref().expect("set above");
                let (rm, ra) = kernels::fft_polar::<f64>();
                let (fm, fa) = kernels::fft_polar::<f32>();
                if b == Benchmark::FftMagnitude {
                    report(b, es, path, Vec::new(), pm, &fm, &rm, rr.as_ref())
                } else {
                    report(b, es, path, Vec::new(), pa, &fa, &ra, rr.as_ref())
                }
            }
        };
        out.push(report);
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn report(
    benchmark: Benchmark,
    es: u32,
    path: PositPath,
    excluded: Vec<i32>,
    posit: &[f64],
    float: &[f64],
    reference: &[f64],
    run: Option<&RunReport>,
) -> BenchReport {
    BenchReport {
        benchmark,
        es,
        path,
        samples: reference.len(),
        excluded,
        posit: MeanCi::of(&errors(posit, reference)),
        float: MeanCi::of(&errors(float, reference)),
        cycles: run.map(|r| r.cycles),
        retired: run.map(|r| r.retired),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sim_matches_direct_bit_for_bit() {
        for series in [Series::Sin, Series::Cos, Series::Exp] {
            let (samples, _) = kernels::samples(series);
            for es in [2, 3] {
                let (sim, _) = series_sim(series, es, &samples, Mode::Tight).unwrap();
                let direct = series_direct(series, es, &samples).unwrap();
                assert_eq!(sim, direct, "{series:?} es={es}");
            }
        }
        for es in [2, 3] {
            let (m, a, _) = fft_sim(es, Mode::Tight).unwrap();
            assert_eq!((m, a), fft_direct(es).unwrap(), "fft es={es}");
        }
    }

    #[test]
    fn sample_sets() {
        let (s, ex) = kernels::samples(Series::Sin);
        assert_eq!((s.len(), ex), (358, vec![0, 180]));
        let (c, ex) = kernels::samples(Series::Cos);
        assert_eq!((c.len(), ex), (358, vec![90, 270]));
        assert!(s.iter().chain(&c).all(|x| x.x.abs() <= std::f64::consts::FRAC_PI_2 + 1e-12));
        assert_eq!(kernels::samples(Series::Exp).0.len(), 12);
    }

    #[test]
    fn series_are_accurate_in_f64() {
        let (s, _) = kernels::samples(Series::Sin);
        for (v, x) in kernels::eval_samples::<f64>(Series::Sin, &s).iter().zip(&s) {
            assert!((v - f64::from(x.label).to_radians().sin()).abs() < 1e-9, "{}", x.label);
        }
        let (c, _) = kernels::samples(Series::Cos);
        for (v, x) in kernels::eval_samples::<f64>(Series::Cos, &c).iter().zip(&c) {
            assert!((v - f64::from(x.label).to_radians().cos()).abs() < 1e-9, "{}", x.label);
        }
    }

    #[test]
    fn fft_matches_naive_dft() {
        let (mag, _) = kernels::fft_polar::<f64>();
        let x = kernels::fft_input();
        for k in [0usize, 1, 20, 127] {
            let (mut re, mut im) = (0.0, 0.0);
            for (n, &(a, b)) in x.iter().enumerate() {
                let t = -2.0 * std::f64::consts::PI * (k * n) as f64 / FFT_N as f64;
                re += a * t.cos() - b * t.sin();
                im += a * t.sin() + b * t.cos();
            }
            assert!((mag[k] - re.hypot(im)).abs() < 1e-9, "bin {k}");
        }
    }
}
