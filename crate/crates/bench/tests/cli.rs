use std::process::{Command, Output};

use posit_bench::kernels::{series_program, Series};
use posit_sim::{Asm, RunReport};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_posit-rv")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(": ")))
        .unwrap_or_else(|| panic!("no {key} in\n{text}"))
}

#[test]
fn convert_examples() {
    let o = cli(&["convert", "1.5", "--es", "2"]);
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "word"), "0x44000000");
    assert_eq!(field(&stdout(&cli(&["convert", "0x80000000"])), "value"), "NaR");
    let o = stdout(&cli(&["convert", "3.0e40", "--es", "3"]));
    assert_eq!(field(&o, "value"), "3.000865123284026E+40");
    assert_eq!(field(&o, "exact"), "false");
    let o = stdout(&cli(&["convert", "0x40", "--ps", "8"]));
    assert_eq!(field(&o, "value"), "1.0E+0");
}

#[test]
fn report_keys_are_stable() {
    let o = stdout(&cli(&["convert", "1.2"]));
    let keys: Vec<&str> = o.lines().map(|l| l.split(':').next().unwrap()).collect();
    assert_eq!(keys, ["input", "ps", "es", "word", "value", "exact"]);
}

#[test]
fn check_passes_and_injected_fault_fails() {
    let o = cli(&["check", "exhaustive", "--ps", "8", "--ops", "add,sqrt"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert_eq!(field(&stdout(&o), "result"), "pass");
    let o = cli(&["check", "exhaustive", "--ps", "8", "--ops", "add", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(field(&stdout(&o), "result"), "fail");
    let o = cli(&["check", "fuzz", "--es", "3", "--count", "500", "--seed", "4"]);
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "datapaths"), "dual,fixed");
    // Exhaustive checking is only offered for small widths.
    assert_eq!(cli(&["check", "exhaustive", "--ps", "32"]).status.code(), Some(2));
}

#[test]
fn run_reports_and_exit_codes() {
    let dir = std::env::temp_dir().join(format!("posit-rv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();

    let mut a = Asm::new(0x8000_0000);
    a.li(posit_sim::asm::reg::A0, 7).exit();
    let exit7 = dir.join("exit7.bin");
    std::fs::write(&exit7, a.finish().unwrap().bytes()).unwrap();
    let trace = dir.join("trace.txt");
    let o = cli(&["run", exit7.to_str().unwrap(), "--mode", "coproc", "--trace", trace.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(7));
    let r = RunReport::parse(&stdout(&o)).unwrap();
    assert_eq!(r.mode.to_string(), "coproc");
    assert_eq!(std::fs::read_to_string(&trace).unwrap().lines().count(), 3);

    let trap = dir.join("trap.bin");
    std::fs::write(&trap, [0u8; 4]).unwrap();
    let o = cli(&["run", trap.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(125));
    assert_eq!(field(&stdout(&o), "trap_cause"), "2");

    let mut a = Asm::new(0x8000_0000);
    a.label("l").j("l");
    let spin = dir.join("spin.bin");
    std::fs::write(&spin, a.finish().unwrap().bytes()).unwrap();
    assert_eq!(cli(&["run", spin.to_str().unwrap(), "--fuel", "100"]).status.code(), Some(124));

    // The same kernel reports identical state in both modes.
    let p = series_program(Series::Exp, 2, &[0x4000_0000], &[0x4000_0000], &[0x4000_0000; 19], 0x4000_0000);
    let k = dir.join("exp.bin");
    std::fs::write(&k, p.bytes()).unwrap();
    let t = RunReport::parse(&stdout(&cli(&["run", k.to_str().unwrap()]))).unwrap();
    let c = RunReport::parse(&stdout(&cli(&["run", k.to_str().unwrap(), "--mode", "coproc"]))).unwrap();
    assert!(t.same_architectural_state(&c));

    let out = dir.join("report.txt");
    cli(&["disasm", k.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(std::fs::read_to_string(&out).unwrap().contains("FDIV.S p3, p3, p5"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn disasm_words() {
    let o = stdout(&cli(&["disasm", "--word", "0x00000073,0x0"]));
    let lines: Vec<&str> = o.lines().collect();
    assert!(lines[0].starts_with("ECALL"), "{o}");
    assert!(lines[1].starts_with("ILLEGAL"), "{o}");
}

#[test]
fn bench_direct_and_sim_agree() {
    let sim = stdout(&cli(&["bench", "exp"]));
    let direct = stdout(&cli(&["bench", "exp", "--direct"]));
    assert_eq!(field(&sim, "posit_mean_pct_error"), field(&direct, "posit_mean_pct_error"));
    assert_eq!(field(&sim, "path"), "sim-tight");
    assert_eq!(field(&sim, "posit_better"), "true");
    assert!(cli(&["bench", "sin", "--es", "4"]).status.code() == Some(2));
}

#[test]
fn oracle_batch() {
    let dir = std::env::temp_dir().join(format!("posit-rv-oracle-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let q = dir.join("q.txt");
    std::fs::write(&q, "add 0x40000000 0x40000000\n# comment\ndiv 0x40000000 0x0\n").unwrap();
    let o = cli(&["oracle", q.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "48000000\n80000000 DZ\n");
    std::fs::remove_dir_all(&dir).ok();
}
