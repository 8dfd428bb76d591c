//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use impg::callnf::{normalize, normalize_def};
use impg::compiler::{compile_arrow, compile_program, compile_raw, lib_signature, CompileError, CompiledProgram, Mode};
use impg::forest::{check_data, forest_size, is_normal, leaf};
use impg::gen::{prelude, Gen};
use impg::objects::flatten;
use impg::peephole::peephole;
use impg::refeval::{eval_ref, rep, RefEnv, Value};
use impg::stdlib::Registry;
use impg::vm::{code_of, exec};
use impg::{parse_data, parse_program, tc_program, DiagKind, Forest, ObjExpr, Program, Tree};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

const BUDGET: u64 = 1_000_000;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn example(name: &str) -> Program {
    let path = root().join("examples").join(name);
    parse_program(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn empty_prog(p: &Program) -> CompiledProgram {
    CompiledProgram {
        codes: Vec::new(),
        sig: lib_signature(p),
        lib: Registry::standard(),
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= limit, || format!("took {t:.1?}, limit {limit:?}"))
}

/// Criteria 1 and 2 share one random corpus.
fn oracle_corpus(peephole_only: bool) -> Check {
    let start = Instant::now();
    let p = prelude();
    let sig = lib_signature(&p);
    let env = RefEnv::from_program(&p).map_err(|e| e.to_string())?;
    let prog = empty_prog(&p);
    let mut cases = 0;
    for seed in 0..1200u64 {
        let mut g = Gen::new(seed);
        let (f, _, _) = g.case(5);
        let dom = env.obj_dom(&f).map_err(|e| e.to_string())?;
        let cod = env.obj_cod(&f).map_err(|e| e.to_string())?;
        let (fd, fc) = (flatten(&dom), flatten(&cod));
        let sol = compile_raw(&f, &fd, &fc, &sig).ok_or(format!("seed {seed}: {f} does not compile"))?;
        let opt = peephole(&sol.code);
        ensure(!opt.has_preopt(), || {
            format!("seed {seed}: pre-optimization constructor left")
        })?;
        let v = g.value(&dom).ok_or(format!("seed {seed}: empty domain"))?;
        let d = rep(&v, &dom).map_err(|e| e.to_string())?;
        let got = exec(&opt, d.clone(), &prog, BUDGET).map_err(|e| format!("seed {seed}: {e}"))?;
        if peephole_only {
            let raw = exec(&sol.code, d, &prog, BUDGET).map_err(|e| format!("seed {seed}: {e}"))?;
            ensure(raw == got, || {
                format!("seed {seed}: optimized and raw code disagree on {f}")
            })?;
        } else {
            let want = eval_ref(&f, v, &env, BUDGET).map_err(|e| format!("seed {seed}: {e}"))?;
            let want = rep(&want, &cod).map_err(|e| e.to_string())?;
            ensure(got == want, || format!("seed {seed}: {f} disagrees with the reference"))?;
            ensure(is_normal(&got) && check_data(&got, &fc), || {
                format!("seed {seed}: bad output")
            })?;
        }
        cases += 1;
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{cases} arrows in {:.1?}", start.elapsed()))
}

fn c1_oracle() -> Check {
    oracle_corpus(false)
}

fn c2_peephole() -> Check {
    oracle_corpus(true)
}

fn c3_normal_form() -> Check {
    let p = prelude();
    let sig = lib_signature(&p);
    let env = RefEnv::from_program(&p).map_err(|e| e.to_string())?;
    let prog = empty_prog(&p);
    let (mut done, mut seed) = (0, 1000u64);
    while done < 25 {
        seed += 1;
        let mut g = Gen::new(seed);
        let (f, _, _) = g.case(4);
        if !(1..=3).contains(&f.call_count()) {
            continue;
        }
        let h = normalize(&f, &env).map_err(|e| format!("seed {seed}: {e}"))?.to_arrow();
        ensure(h.call_count() == 1, || {
            format!("seed {seed}: {} calls after normalizing", h.call_count())
        })?;
        let dom = env.obj_dom(&f).map_err(|e| e.to_string())?;
        let cod = env.obj_cod(&f).map_err(|e| e.to_string())?;
        let (fd, fc) = (flatten(&dom), flatten(&cod));
        let c1 = compile_arrow(&f, &fd, &fc, &sig, Mode::First)
            .map_err(|_| format!("seed {seed}: original does not compile"))?;
        let c2 = compile_arrow(&h, &fd, &fc, &sig, Mode::First)
            .map_err(|_| format!("seed {seed}: normal form does not compile"))?;
        for _ in 0..100 {
            let d = rep(&g.value(&dom).unwrap(), &dom).map_err(|e| e.to_string())?;
            let a = exec(&c1, d.clone(), &prog, BUDGET).map_err(|e| e.to_string())?;
            let b = exec(&c2, d, &prog, BUDGET).map_err(|e| e.to_string())?;
            ensure(a == b, || format!("seed {seed}: normal form of {f} disagrees"))?;
        }
        done += 1;
    }
    // The three nested loops of the corpus factorial collapse to one.
    let p = example("nested_call.imp");
    let (dom, h, cod) = normalize_def(&p, "fact").map_err(|e| e.to_string())?;
    ensure(h.call_count() == 1, || "nested factorial keeps several calls".into())?;
    let compiled = compile_program(&p, true).map_err(|e| e.to_string())?;
    let orig = code_of("fact", &compiled).map_err(|e| e.to_string())?;
    let nf = compile_arrow(&h, &flatten(&dom), &flatten(&cod), &compiled.sig, Mode::First)
        .map_err(|_| "normalized factorial does not compile".to_string())?;
    for n in 0..=8u64 {
        let a = exec(orig, vec![leaf(n)], &compiled, BUDGET).map_err(|e| e.to_string())?;
        let b = exec(&nf, vec![leaf(n)], &compiled, BUDGET).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("nested factorial disagrees at {n}"))?;
    }
    Ok(format!("{done} random arrows x 100 inputs, nested factorial on 0..=8"))
}

/// Length of the old word coding: leaves of the object's syntax tree.
fn old_length(x: &ObjExpr) -> usize {
    match x {
        ObjExpr::Basic(_) | ObjExpr::Terminal | ObjExpr::Initial => 1,
        ObjExpr::Sum(a, b) | ObjExpr::Prod(a, b) => old_length(a) + old_length(b),
    }
}

fn power(n: usize) -> ObjExpr {
    let x = ObjExpr::basic("X");
    (1..n).fold(x.clone(), |acc, _| ObjExpr::Prod(Box::new(acc), Box::new(x.clone())))
}

/// `n * X^n` as a left-nested sum, with an element in summand `k`.
fn multiple(n: usize, k: usize) -> (ObjExpr, Value) {
    let xn = power(n);
    let tuple = (1..n).fold(Value::base(0), |acc, i| Value::pair(acc, Value::base(i as u64)));
    let mut t = xn.clone();
    let mut v = if k == 0 { tuple.clone() } else { Value::Unit };
    for j in 1..n {
        t = ObjExpr::Sum(Box::new(t), Box::new(xn.clone()));
        v = match j.cmp(&k) {
            std::cmp::Ordering::Less => Value::Unit,
            std::cmp::Ordering::Equal => Value::inr(tuple.clone()),
            std::cmp::Ordering::Greater => Value::inl(v),
        };
    }
    (t, v)
}

fn c4_storage() -> Check {
    let mut pts = Vec::new();
    let mut ratios = Vec::new();
    for n in 1..=64usize {
        let (t, v) = multiple(n, n / 2);
        let d = rep(&v, &t).map_err(|e| format!("n = {n}: {e}"))?;
        let new = forest_size(&d) as f64;
        let old = old_length(&t) as f64;
        ensure(old as usize == n * n, || format!("n = {n}: old length {old}"))?;
        pts.push((n as f64, new));
        ratios.push(new / old);
    }
    let m = pts.len() as f64;
    let (mx, my) = (
        pts.iter().map(|p| p.0).sum::<f64>() / m,
        pts.iter().map(|p| p.1).sum::<f64>() / m,
    );
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    let syy: f64 = pts.iter().map(|(_, y)| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = sxy * sxy / (sxx * syy);
    ensure(r2 >= 0.999, || format!("R^2 = {r2}"))?;
    let c = pts.iter().map(|(x, y)| y / x).fold(0.0, f64::max);
    ensure(ratios.windows(2).all(|w| w[1] <= w[0]), || {
        "ratio new/old is not decreasing".into()
    })?;
    let last = *ratios.last().unwrap();
    ensure(last < 0.05, || format!("ratio at n = 64 is {last}"))?;
    Ok(format!(
        "slope {slope:.3}, R^2 {r2:.6}, size <= {c:.2} n, new/old at 64 = {last:.4}"
    ))
}

fn nat_pair(a: u64, b: u64) -> Forest {
    vec![leaf(a), leaf(b)]
}

fn nat_of(d: &[Tree]) -> Option<BigUint> {
    match d {
        [Tree::Leaf(n)] => Some(n.clone()),
        _ => None,
    }
}

fn c5_primrec_minim() -> Check {
    let start = Instant::now();
    let p = example("primrec.imp");
    let prog = compile_program(&p, true).map_err(|e| e.to_string())?;
    let f = code_of("f", &prog).map_err(|e| e.to_string())?;
    // Host recursion with the same g and h.
    let host = |m: u64, n: u64| (0..n).fold(m, |acc, _| m + acc);
    for m in 0..=6 {
        for n in 0..=6 {
            let out = exec(f, nat_pair(m, n), &prog, BUDGET).map_err(|e| e.to_string())?;
            ensure(out == vec![leaf(host(m, n))], || format!("f({m}, {n}) gave {out:?}"))?;
        }
    }
    let p = example("minim.imp");
    let prog = compile_program(&p, true).map_err(|e| e.to_string())?;
    let mu = code_of("mu", &prog).map_err(|e| e.to_string())?;
    for m in 0..=20u64 {
        let want = (0..).find(|n| m.saturating_sub(*n) == 0).unwrap();
        let out = exec(mu, vec![leaf(m)], &prog, BUDGET).map_err(|e| e.to_string())?;
        ensure(out == vec![leaf(want)], || format!("mu({m}) gave {out:?}"))?;
    }
    within(start, Duration::from_secs(10))?;
    Ok(format!("49 + 21 cases in {:.1?}", start.elapsed()))
}

fn c6_stdlib() -> Check {
    let src = "obj N;
        lib s : I + N -> N, p : N -> I + N, plus : N * N -> N, minus : N * N -> N,
            times : N * N -> N, gt : N * N -> I + I, ge : N * N -> I + I, eq : N * N -> I + I;
        def sp : N --p ; s--> N;
            ps : I + N --s ; p--> I + N;
            a : N * N --plus--> N; m : N * N --minus--> N; t : N * N --times--> N;
            g : N * N --gt--> I + I; ge2 : N * N --ge--> I + I; e : N * N --eq--> I + I.";
    let p = parse_program(src).map_err(|e| e.to_string())?;
    let prog = compile_program(&p, true).map_err(|e| e.to_string())?;
    let run = |name: &str, d: Forest| -> Result<Forest, String> {
        exec(code_of(name, &prog).map_err(|e| e.to_string())?, d, &prog, BUDGET).map_err(|e| e.to_string())
    };
    for n in 0..=1000u64 {
        ensure(run("sp", vec![leaf(n)])? == vec![leaf(n)], || {
            format!("s . p differs at {n}")
        })?;
        let d = parse_data(&if n == 0 {
            "<0,>".to_string()
        } else {
            format!("<1, {}>", n - 1)
        })
        .unwrap();
        ensure(run("ps", d.clone())? == d, || format!("p . s differs at {n}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let flag = |b: bool| vec![Tree::Node(usize::from(b), Vec::new())];
    for _ in 0..1000 {
        let (x, y): (u64, u64) = if rng.gen_bool(0.1) {
            let x = rng.gen_range(0..50);
            (x, x)
        } else {
            (rng.gen(), rng.gen())
        };
        let (bx, by) = (BigUint::from(x), BigUint::from(y));
        let d = nat_pair(x, y);
        let num = |name: &str| run(name, d.clone()).map(|o| nat_of(&o));
        ensure(num("a")? == Some(&bx + &by), || format!("{x} + {y}"))?;
        ensure(num("t")? == Some(&bx * &by), || format!("{x} * {y}"))?;
        let diff = if bx >= by { &bx - &by } else { BigUint::default() };
        ensure(num("m")? == Some(diff), || format!("{x} - {y}"))?;
        ensure(run("g", d.clone())? == flag(bx > by), || format!("{x} > {y}"))?;
        ensure(run("ge2", d.clone())? == flag(bx >= by), || format!("{x} >= {y}"))?;
        ensure(run("e", d.clone())? == flag(bx == by), || format!("{x} = {y}"))?;
    }
    Ok("s and p inverse on 0..=1000, 1000 random pairs".into())
}

fn fixture(rel: &str) -> PathBuf {
    root().join(rel)
}

fn impg(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_impg"))
        .args(args)
        .output()
        .expect("spawn impg")
}

fn c7_fixtures() -> Check {
    let p = parse_program(&std::fs::read_to_string(fixture("tests/fixtures/composable.imp")).unwrap()).unwrap();
    ensure(tc_program(&p, true).is_empty(), || {
        "term ; inj_1 into I + I rejected".into()
    })?;
    let p = example("bad_compose.imp");
    let ds = tc_program(&p, false);
    let not_from_to = ds.iter().filter(|d| matches!(d.kind, DiagKind::NotFromTo(..))).count();
    ensure(ds.len() == 2 && not_from_to == 2, || format!("bad_compose gave {ds:?}"))?;
    let p = example("twist_ambiguous.imp");
    let ds = tc_program(&p, true);
    ensure(
        matches!(ds.as_slice(), [d] if matches!(d.kind, DiagKind::Ambiguous(_))),
        || format!("twist gave {ds:?}"),
    )?;
    let def = p.def("twist").unwrap();
    let sig = lib_signature(&p);
    let step = &def.steps[0];
    match compile_arrow(
        &step.arrow,
        &flatten(&def.dom),
        &flatten(&step.cod),
        &sig,
        Mode::Exhaustive,
    ) {
        Err(CompileError::Ambiguous(codes)) => ensure(codes.len() >= 2 && codes[0] != codes[1], || {
            "twist variants coincide".into()
        })?,
        other => return Err(format!("twist compiled as {other:?}")),
    }
    let golden: [(&str, &str, bool); 6] = [
        ("dup_object", "examples/dup_object.imp", false),
        ("dup_arrow", "tests/fixtures/dup_arrow.imp", false),
        ("undeclared_objects", "tests/fixtures/undeclared_objects.imp", false),
        ("undeclared_arrows", "tests/fixtures/undeclared_arrows.imp", false),
        ("bad_compose", "examples/bad_compose.imp", false),
        ("twist_ambiguous", "examples/twist_ambiguous.imp", true),
    ];
    for (name, file, exhaustive) in golden {
        let path = fixture(file);
        let mut args = vec!["check", path.to_str().unwrap()];
        if exhaustive {
            args.push("--exhaustive");
        }
        let out = impg(&args);
        let want = std::fs::read(fixture(&format!("tests/golden/{name}.stderr"))).unwrap();
        ensure(out.stderr == want, || {
            format!("{name}: got {:?}", String::from_utf8_lossy(&out.stderr))
        })?;
        ensure(out.status.code() == Some(1) && out.stdout.is_empty(), || {
            format!("{name}: wrong status")
        })?;
    }
    Ok("composable accepted, NotFromTo, Ambiguous, 6 golden files".into())
}

fn corpus() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(root().join("examples"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "imp"))
        .collect();
    v.sort();
    v
}

fn runs_for(path: &Path) -> Vec<(&'static str, &'static str)> {
    match path.file_name().unwrap().to_str().unwrap() {
        "fact.imp" => vec![("fact", "6")],
        "add.imp" => vec![("add", "3 4")],
        "primrec.imp" => vec![("f", "3 4")],
        "minim.imp" => vec![("mu", "9")],
        "nested_call.imp" => vec![("fact", "5"), ("mul", "6 7")],
        _ => Vec::new(),
    }
}

fn c8_determinism() -> Check {
    let mut invocations = 0;
    for path in corpus() {
        let file = path.to_str().unwrap();
        let mut cmds: Vec<Vec<&str>> = vec![vec!["check", file], vec!["compile", "--dump", file]];
        for (arrow, data) in runs_for(&path) {
            cmds.push(vec!["run", file, "--arrow", arrow, "--data", data]);
        }
        for args in cmds {
            let (a, b) = (impg(&args), impg(&args));
            ensure(
                a.stdout == b.stdout && a.stderr == b.stderr && a.status == b.status,
                || format!("impg {args:?} is not deterministic"),
            )?;
            invocations += 1;
        }
    }
    Ok(format!("{invocations} commands run twice"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("oracle equivalence", c1_oracle),
        ("peephole soundness", c2_peephole),
        ("normal form preservation", c3_normal_form),
        ("linear storage", c4_storage),
        ("primitive recursion and minimization", c5_primrec_minim),
        ("stdlib laws", c6_stdlib),
        ("type checker fixtures", c7_fixtures),
        ("determinism", c8_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(note) => println!("criterion {}: PASS {name} ({note})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
