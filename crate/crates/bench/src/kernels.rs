//! Benchmark kernels, written once against [`Real`] and, for the posit
//! path, once more as RV32 programs whose posit instruction sequence is
//! the same operation-for-operation.

use std::f64::consts::PI;

use posit_core::Real;
use posit_sim::asm::reg::*;

const S2: u8 = 18;
const S3: u8 = 19;
use posit_sim::isa::pcsr::CSR_FCSR;
use posit_sim::isa::{AluOp, BranchKind, PositOp};
use posit_sim::mem::DEFAULT_BASE;
use posit_sim::{Asm, Program};

pub const TRIG_TERMS: i32 = 10;
pub const EXP_TERMS: i32 = 20;
pub const FFT_N: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Series {
    Sin,
    Cos,
    Exp,
}

impl Series {
    pub fn name(self) -> &'static str {
        match self {
            Series::Sin => "sin",
            Series::Cos => "cos",
            Series::Exp => "exp",
        }
    }

    /// Denominator that turns term n-1 into term n (n >= 1).
    pub fn divisor(self, n: i32) -> i32 {
        match self {
            Series::Sin => (2 * n) * (2 * n + 1),
            Series::Cos => (2 * n - 1) * (2 * n),
            Series::Exp => n,
        }
    }

    pub fn terms(self) -> i32 {
        match self {
            Series::Sin | Series::Cos => TRIG_TERMS,
            Series::Exp => EXP_TERMS,
        }
    }

    /// Truncated power series. Every operation is a single rounded
    /// multiply, divide, add or subtract, in a fixed order.
    pub fn eval<T: Real>(self, x: T) -> T {
        let step = match self {
            Series::Sin | Series::Cos => x * x,
            Series::Exp => x,
        };
        let (mut term, mut sum) = match self {
            Series::Sin => (x, x),
            Series::Cos | Series::Exp => (T::from_i32(1), T::from_i32(1)),
        };
        for n in 1..self.terms() {
            term = term * step;
            term = term / T::from_i32(self.divisor(n));
            sum = if self != Series::Exp && n % 2 == 1 { sum - term } else { sum + term };
        }
        sum
    }
}

/// One benchmark input: the argument (already reduced) and the sign to
/// apply to the series value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub label: i32,
    pub x: f64,
    pub negate: bool,
}

/// Inputs for a series benchmark, plus the labels excluded because the
/// true function value there is zero.
pub fn samples(series: Series) -> (Vec<Sample>, Vec<i32>) {
    let mut keep = Vec::new();
    let mut excluded = Vec::new();
    match series {
        Series::Exp => keep.extend((0..=11).map(|i| Sample { label: i, x: f64::from(i), negate: false })),
        Series::Sin | Series::Cos => {
            for deg in 0..360 {
                // Exact integer reduction to [-90, 90] degrees.
                let (r, negate) = match (series, deg) {
                    (_, 0..=90) => (deg, false),
                    (Series::Sin, 91..=270) => (180 - deg, false),
                    (_, 91..=270) => (180 - deg, true),
                    _ => (deg - 360, false),
                };
                let zero = match series {
                    Series::Sin => deg % 180 == 0,
                    _ => deg % 180 == 90,
                };
                if zero {
                    excluded.push(deg);
                } else {
                    keep.push(Sample { label: deg, x: f64::from(r) * PI / 180.0, negate });
                }
            }
        }
    }
    (keep, excluded)
}

/// Evaluates the series in `T` (inputs rounded into `T` first).
pub fn eval_samples<T: Real>(series: Series, samples: &[Sample]) -> Vec<f64> {
    samples
        .iter()
        .map(|s| {
            let v = series.eval(T::from_f64(s.x));
            let v = if s.negate { -v } else { v };
            v.to_f64()
        })
        .collect()
}

/// The 128-point complex input cos(n) + i sin(n), n = 0..127.
pub fn fft_input() -> Vec<(f64, f64)> {
    (0..FFT_N).map(|n| ((n as f64).cos(), (n as f64).sin())).collect()
}

pub fn bit_reverse(i: usize, bits: u32) -> usize {
    i.reverse_bits() >> (usize::BITS - bits)
}

/// exp(-2 pi i k / N) for k < N/2, computed in f64.
pub fn twiddles() -> Vec<(f64, f64)> {
    (0..FFT_N / 2)
        .map(|k| {
            let a = -2.0 * PI * k as f64 / FFT_N as f64;
            (a.cos(), a.sin())
        })
        .collect()
}

/// Radix-2 iterative Cooley-Tukey, in place, input in natural order.
/// Twiddles are rounded into `T` up front.
pub fn fft<T: Real>(re: &mut [T], im: &mut [T]) {
    let n = re.len();
    assert!(n.is_power_of_two() && im.len() == n);
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = bit_reverse(i, bits);
        if i < j {
            re.swap(i, j);
            im.swap(i, j);
        }
    }
    let tw: Vec<(T, T)> = twiddles().into_iter().map(|(c, s)| (T::from_f64(c), T::from_f64(s))).collect();
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let step = n / len;
        for i in (0..n).step_by(len) {
            for j in 0..half {
                let (wr, wi) = tw[j * step];
                let (a, b) = (i + j, i + j + half);
                let (ur, ui, br, bi) = (re[a], im[a], re[b], im[b]);
                let vr = br * wr - bi * wi;
                let vi = br * wi + bi * wr;
                re[a] = ur + vr;
                im[a] = ui + vi;
                re[b] = ur - vr;
                im[b] = ui - vi;
            }
        }
        len *= 2;
    }
}

/// FFT of [`fft_input`] in `T`, returned as (magnitude, angle). The
/// magnitude is formed in `T` with its square root; the angle is taken in
/// f64 from the `T` components.
pub fn fft_polar<T: Real>() -> (Vec<f64>, Vec<f64>) {
    let input = fft_input();
    let mut re: Vec<T> = input.iter().map(|&(r, _)| T::from_f64(r)).collect();
    let mut im: Vec<T> = input.iter().map(|&(_, i)| T::from_f64(i)).collect();
    fft(&mut re, &mut im);
    polar(&re, &im)
}

pub fn polar<T: Real>(re: &[T], im: &[T]) -> (Vec<f64>, Vec<f64>) {
    let mag = re.iter().zip(im).map(|(&r, &i)| (r * r + i * i).sqrt().to_f64()).collect();
    let ang = re.iter().zip(im).map(|(&r, &i)| i.to_f64().atan2(r.to_f64())).collect();
    (mag, ang)
}

fn set_es(a: &mut Asm, es: u32) {
    a.li(T0, (es << 8) as i32).csrrw(0, CSR_FCSR, T0);
}

/// RV32 program computing `series` for each input word. Inputs, signs
/// (as posit ±1) and divisors are posit words encoded at `es`; results
/// land at label `outputs`.
pub fn series_program(series: Series, es: u32, inputs: &[u32], signs: &[u32], divisors: &[u32], one: u32) -> Program {
    assert_eq!(inputs.len(), signs.len());
    let mut a = Asm::new(DEFAULT_BASE);
    set_es(&mut a, es);
    a.la(S0, "inputs").la(S1, "signs").la(S2, "outputs").la(S3, "consts").li(T1, inputs.len() as i32);
    a.label("loop");
    // p1 = x, p2 = step, p3 = term, p4 = sum, p5 = divisor, p6 = sign
    a.flw(1, S0, 0);
    match series {
        Series::Sin => {
            a.fop(PositOp::FmulS, 2, 1, 1).fop(PositOp::FsgnjS, 3, 1, 1).fop(PositOp::FsgnjS, 4, 1, 1);
        }
        Series::Cos => {
            a.fop(PositOp::FmulS, 2, 1, 1).flw(3, S3, 0).flw(4, S3, 0);
        }
        Series::Exp => {
            a.fop(PositOp::FsgnjS, 2, 1, 1).flw(3, S3, 0).flw(4, S3, 0);
        }
    }
    for n in 1..series.terms() {
        a.fop(PositOp::FmulS, 3, 3, 2).flw(5, S3, 4 * n).fop(PositOp::FdivS, 3, 3, 5);
        let op = if series != Series::Exp && n % 2 == 1 { PositOp::FsubS } else { PositOp::FaddS };
        a.fop(op, 4, 4, 3);
    }
    a.flw(6, S1, 0).fop(PositOp::FmulS, 4, 4, 6).fsw(4, S2, 0);
    a.addi(S0, S0, 4).addi(S1, S1, 4).addi(S2, S2, 4).addi(T1, T1, -1);
    a.branch(BranchKind::Bne, T1, 0, "loop");
    a.addi(A0, 0, 0).exit();
    a.label("consts").word(one).words(divisors);
    a.label("inputs").words(inputs);
    a.label("signs").words(signs);
    a.label("outputs").space(inputs.len());
    a.finish().expect("series kernel assembles")
}

/// RV32 FFT over posit words at `es`. `re`/`im` must already be in
/// bit-reversed order (the permutation only moves data). On exit `re`,
/// `im` hold the transform and `mag` the magnitudes.
pub fn fft_program(es: u32, re: &[u32], im: &[u32], twr: &[u32], twi: &[u32]) -> Program {
    let n = re.len();
    assert!(n.is_power_of_two() && im.len() == n && twr.len() == n / 2 && twi.len() == n / 2);
    // Register roles.
    let (len, half, step, i, j, k, nreg) = (18, 19, 20, 21, 22, 23, 24);
    let (re_b, im_b, twr_b, twi_b) = (A0, A1, A2, A3);
    let (ta, tb, tk) = (25, 26, 27);
    let (ra_, ia_, rb_, ib_) = (28, 29, 30, 31);

    let mut a = Asm::new(DEFAULT_BASE);
    set_es(&mut a, es);
    a.la(re_b, "re").la(im_b, "im").la(twr_b, "twr").la(twi_b, "twi");
    a.li(nreg, n as i32).li(len, 2).li(step, (n / 2) as i32);
    a.label("stage");
    a.op_imm(AluOp::Srl, half, len, 1).li(i, 0);
    a.label("group");
    a.li(j, 0).li(k, 0);
    a.label("bfly");
    a.op(AluOp::Add, ta, i, j).op(AluOp::Add, tb, ta, half);
    a.op_imm(AluOp::Sll, ta, ta, 2).op_imm(AluOp::Sll, tb, tb, 2).op_imm(AluOp::Sll, tk, k, 2);
    a.op(AluOp::Add, ra_, re_b, ta).op(AluOp::Add, ia_, im_b, ta);
    a.op(AluOp::Add, rb_, re_b, tb).op(AluOp::Add, ib_, im_b, tb);
    a.op(AluOp::Add, ta, twr_b, tk).op(AluOp::Add, tb, twi_b, tk);
    a.flw(1, ra_, 0).flw(2, ia_, 0).flw(3, rb_, 0).flw(4, ib_, 0).flw(5, ta, 0).flw(6, tb, 0);
    // v = b * w
    a.fop(PositOp::FmulS, 7, 3, 5).fop(PositOp::FmulS, 8, 4, 6).fop(PositOp::FsubS, 9, 7, 8);
    a.fop(PositOp::FmulS, 7, 3, 6).fop(PositOp::FmulS, 8, 4, 5).fop(PositOp::FaddS, 10, 7, 8);
    a.fop(PositOp::FaddS, 11, 1, 9).fop(PositOp::FaddS, 12, 2, 10);
    a.fop(PositOp::FsubS, 13, 1, 9).fop(PositOp::FsubS, 14, 2, 10);
    a.fsw(11, ra_, 0).fsw(12, ia_, 0).fsw(13, rb_, 0).fsw(14, ib_, 0);
    a.op(AluOp::Add, k, k, step).addi(j, j, 1);
    a.branch(BranchKind::Blt, j, half, "bfly");
    a.op(AluOp::Add, i, i, len);
    a.branch(BranchKind::Blt, i, nreg, "group");
    a.op_imm(AluOp::Sll, len, len, 1).op_imm(AluOp::Srl, step, step, 1);
    a.branch(BranchKind::Bge, nreg, len, "stage");
    // Magnitudes.
    a.la(S0, "mag").li(i, 0);
    a.label("polar");
    a.op_imm(AluOp::Sll, ta, i, 2);
    a.op(AluOp::Add, ra_, re_b, ta).op(AluOp::Add, ia_, im_b, ta).op(AluOp::Add, rb_, S0, ta);
    a.flw(1, ra_, 0).flw(2, ia_, 0);
    a.fop(PositOp::FmulS, 3, 1, 1).fop(PositOp::FmulS, 4, 2, 2).fop(PositOp::FaddS, 5, 3, 4);
    a.fop(PositOp::FsqrtS, 6, 5, 0).fsw(6, rb_, 0);
    a.addi(i, i, 1).branch(BranchKind::Blt, i, nreg, "polar");
    a.addi(A0, 0, 0).exit();
    a.label("twr").words(twr);
    a.label("twi").words(twi);
    a.label("re").words(re);
    a.label("im").words(im);
    a.label("mag").space(n);
    a.finish().expect("fft kernel assembles")
}
