//! Compiled execution against the reference evaluator on random arrows.

use impg::compiler::{compile_raw, lib_signature, CompiledProgram};
use impg::forest::{check_data, is_normal};
use impg::gen::{prelude, Gen};
use impg::objects::flatten;
use impg::peephole::peephole;
use impg::refeval::{eval_ref, rep, RefEnv};
use impg::stdlib::Registry;
use impg::vm::exec;

const BUDGET: u64 = 100_000;

#[test]
fn compiled_code_matches_reference_semantics() {
    let p = prelude();
    let sig = lib_signature(&p);
    let env = RefEnv::from_program(&p).unwrap();
    let prog = CompiledProgram {
        codes: Vec::new(),
        sig: sig.clone(),
        lib: Registry::standard(),
    };
    let mut checked = 0;
    for seed in 0..1500u64 {
        let mut g = Gen::new(seed);
        let (f, _, _) = g.case(5);
        let dom = env.obj_dom(&f).unwrap();
        let cod = env.obj_cod(&f).unwrap();
        let (fd, fc) = (flatten(&dom), flatten(&cod));
        let sol = compile_raw(&f, &fd, &fc, &sig).unwrap_or_else(|| panic!("seed {seed}: {f} does not compile"));
        assert_eq!(sol.elab, f, "seed {seed}: elaboration is not the identity");
        let opt = peephole(&sol.code);
        assert!(!opt.has_preopt(), "seed {seed}");
        for _ in 0..3 {
            let v = g.value(&dom).unwrap();
            let d = rep(&v, &dom).unwrap();
            assert!(check_data(&d, &fd));
            let want = rep(&eval_ref(&f, v, &env, BUDGET).unwrap(), &cod).unwrap();
            let got = exec(&opt, d.clone(), &prog, BUDGET).unwrap_or_else(|e| panic!("seed {seed}: {f}: {e}"));
            let raw = exec(&sol.code, d.clone(), &prog, BUDGET).unwrap();
            assert_eq!(got, want, "seed {seed}: {f} on {}", impg::forest::forest_to_string(&d));
            assert_eq!(raw, want, "seed {seed}: unoptimized");
            assert!(is_normal(&got) && check_data(&got, &fc));
            checked += 1;
        }
    }
    assert!(checked >= 1000);
}
