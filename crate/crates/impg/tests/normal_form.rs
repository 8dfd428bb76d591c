//! Normalized arrows have one call and compute what the original computes.

use impg::callnf::normalize;
use impg::compiler::{compile_arrow, lib_signature, CompiledProgram, Mode};
use impg::gen::{prelude, Gen};
use impg::objects::flatten;
use impg::refeval::{eval_ref, rep, RefEnv};
use impg::stdlib::Registry;
use impg::vm::exec;

const BUDGET: u64 = 1_000_000;

#[test]
fn normalization_preserves_semantics() {
    let p = prelude();
    let sig = lib_signature(&p);
    let env = RefEnv::from_program(&p).unwrap();
    let prog = CompiledProgram {
        codes: Vec::new(),
        sig: sig.clone(),
        lib: Registry::standard(),
    };
    let mut done = 0;
    let mut seed = 0u64;
    while done < 40 {
        seed += 1;
        let mut g = Gen::new(seed);
        let (f, _, _) = g.case(4);
        if !(1..=3).contains(&f.call_count()) {
            continue;
        }
        let nf = normalize(&f, &env).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        let h = nf.to_arrow();
        assert_eq!(h.call_count(), 1);
        let dom = env.obj_dom(&f).unwrap();
        let cod = env.obj_cod(&f).unwrap();
        let (fd, fc) = (flatten(&dom), flatten(&cod));
        let c1 = compile_arrow(&f, &fd, &fc, &sig, Mode::First).unwrap();
        let c2 = compile_arrow(&h, &fd, &fc, &sig, Mode::First)
            .unwrap_or_else(|_| panic!("seed {seed}: normal form of {f} does not compile: {h}"));
        for _ in 0..100 {
            let v = g.value(&dom).unwrap();
            let d = rep(&v, &dom).unwrap();
            let want = exec(&c1, d.clone(), &prog, BUDGET).unwrap();
            let got = exec(&c2, d, &prog, BUDGET).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
            assert_eq!(got, want, "seed {seed}: {f}");
            let r = eval_ref(&h, v, &env, BUDGET).unwrap();
            assert_eq!(rep(&r, &env.obj_cod(&h).unwrap()).unwrap(), want, "seed {seed}");
        }
        done += 1;
    }
}
