use posit_bench::bench::run_program;
use posit_bench::conformance_kernel::{operand_table, ConformanceKernel};
use posit_sim::Mode;

#[test]
fn conformance_kernel_agrees_with_oracle_in_both_modes() {
    let k = ConformanceKernel::build(operand_table(64, 7));
    let (mt, rt) = run_program(&k.program, Mode::Tight).unwrap();
    let (mc, rc) = run_program(&k.program, Mode::Coproc).unwrap();
    assert!(rt.same_architectural_state(&rc), "{rt}\n{rc}");
    assert_eq!(k.results(&mt), k.results(&mc));
    assert_eq!(mt.mem().contents(), mc.mem().contents());
    let bad = k.mismatches(&mt);
    assert!(bad.is_empty(), "{} mismatches, first: {}", bad.len(), bad[0]);
    // 26 instruction slots plus two FCVT.ES directions, at two es values.
    assert_eq!(k.slots.len(), 56);
}
