//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::collections::{BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use mbdfl_core::corpus::{corpus_dir, load_corpus, CorpusEntry, EntryKind};
use mbdfl_core::diagnose::{
    brute_force_diagnoses, failing_tests, localize_bugassist, localize_cfaults, localize_sniper, validate_diagnosis,
    Config, DiagnosisReport, Validator,
};
use mbdfl_core::encode::{decode, encode, AssertMode, Encoding};
use mbdfl_core::exec::{run_concrete, ExecStatus, Limits};
use mbdfl_core::frontend::{Program, TestCase};
use mbdfl_core::transform::{instrument, unroll};
use mbdfl_sat::{enumerate_mcses, maxsat_optimum, sat_solve, Cnf, Lit, SatOutcome, SolverOptions, Wcnf};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn corpus() -> Vec<CorpusEntry> {
    load_corpus(&corpus_dir()).expect("bundled corpus loads")
}

fn config(e: &CorpusEntry) -> Config {
    Config {
        unwind: e.meta.unwind,
        ..Config::default()
    }
}

fn max3() -> CorpusEntry {
    corpus().into_iter().find(|e| e.name == "max3").expect("max3 entry")
}

fn lines(r: &DiagnosisReport) -> Vec<BTreeSet<u32>> {
    r.diagnoses.iter().map(|d| d.lines.clone()).collect()
}

fn motivating_example() -> Outcome {
    let e = max3();
    let opts = Config {
        unwind: 1,
        width: 16,
        ..Config::default()
    };
    let start = Instant::now();
    let r = localize_cfaults(&e.program, &e.suite, &opts).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(lines(&r) == [BTreeSet::from([5, 8, 11])], || format!("diagnoses {:?}", lines(&r)))?;
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("one diagnosis, lines {{5, 8, 11}}, {elapsed:.2?}"))
}

fn sniper_reproduction() -> Outcome {
    let e = max3();
    let opts = Config {
        unwind: 1,
        ..Config::default()
    };
    let s = localize_sniper(&e.program, &e.suite, &opts).map_err(|e| e.to_string())?;
    let c = localize_cfaults(&e.program, &e.suite, &opts).map_err(|e| e.to_string())?;
    let b = localize_bugassist(&e.program, &e.suite, &opts).map_err(|e| e.to_string())?;
    ensure(lines(&s) == [BTreeSet::from([5, 8, 11])], || format!("final diagnosis {:?}", lines(&s)))?;
    ensure(s.unique_aggregated_count > c.diagnoses.len(), || {
        format!("{} aggregated vs {} cfaults", s.unique_aggregated_count, c.diagnoses.len())
    })?;
    let per_test: Vec<String> = s.per_test_counts.iter().map(|(t, n)| format!("{t}={n}")).collect();
    Ok(format!(
        "final {{5, 8, 11}}; per-test MCSes {}; sniper aggregated {}; bugassist distinct {}; cfaults {}",
        per_test.join("/"),
        s.unique_aggregated_count,
        b.unique_aggregated_count,
        c.diagnoses.len()
    ))
}

fn soundness() -> Outcome {
    let entries = corpus();
    let buggy = entries.iter().filter(|e| e.kind == EntryKind::Buggy).count();
    let correct = entries.len() - buggy;
    ensure(buggy >= 20 && correct >= 10, || format!("{buggy} buggy, {correct} correct"))?;
    let mut checked = 0;
    for e in &entries {
        let opts = config(e);
        let refined = Config {
            refine: true,
            ..opts.clone()
        };
        let err = |s: &str| {
            let name = e.name.clone();
            let s = s.to_string();
            move |x: mbdfl_core::DiagnoseError| format!("{name} {s}: {x}")
        };
        let reports = [
            localize_cfaults(&e.program, &e.suite, &opts).map_err(err("cfaults"))?,
            localize_bugassist(&e.program, &e.suite, &opts).map_err(err("bugassist"))?,
            localize_sniper(&e.program, &e.suite, &opts).map_err(err("sniper"))?,
        ];
        for r in &reports {
            if e.kind == EntryKind::Correct {
                ensure(r.diagnoses.is_empty(), || format!("{} {}: {:?}", e.name, r.strategy, lines(r)))?;
            } else {
                ensure(!r.diagnoses.is_empty(), || format!("{} {}: no diagnosis", e.name, r.strategy))?;
            }
            for d in &r.diagnoses {
                let ok = validate_diagnosis(&e.program, &e.suite, d, &opts).map_err(err("validate"))?;
                ensure(ok, || format!("{} {}: {:?} does not validate", e.name, r.strategy, d.lines))?;
                checked += 1;
            }
        }
        let r = localize_cfaults(&e.program, &e.suite, &refined).map_err(err("refined"))?;
        if let Some(base) = &r.unrefined {
            let mut v = Validator::refined(&e.program, &e.suite, &base.diagnoses[0].components, &opts)
                .map_err(err("refined validator"))?;
            for d in &r.diagnoses {
                let ok = v.is_consistent(&d.components).map_err(err("refined validate"))?;
                ensure(ok, || format!("{} refined: {:?} does not validate", e.name, d.components))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{buggy} buggy and {correct} correct programs, {checked} diagnoses validated"))
}

fn minimality() -> Outcome {
    let mut checked = 0;
    for e in corpus() {
        let opts = config(&e);
        let r = localize_cfaults(&e.program, &e.suite, &opts).map_err(|x| format!("{}: {x}", e.name))?;
        let mut v = Validator::new(&e.program, &e.suite, &opts).map_err(|x| format!("{}: {x}", e.name))?;
        for d in &r.diagnoses {
            for &c in &d.components {
                let mut smaller = d.components.clone();
                smaller.remove(&c);
                let ok = v.is_consistent(&smaller).map_err(|x| x.to_string())?;
                ensure(!ok, || format!("{}: {:?} minus {c} still validates", e.name, d.components))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} one-smaller subsets rejected"))
}

fn oracle_equivalence() -> Outcome {
    let mut programs = 0;
    let mut slowest = Duration::ZERO;
    for e in corpus() {
        let opts = config(&e);
        let n = Validator::new(&e.program, &e.suite, &opts).map_err(|x| x.to_string())?.table().len();
        if n > 16 {
            continue;
        }
        let start = Instant::now();
        let r = localize_cfaults(&e.program, &e.suite, &opts).map_err(|x| format!("{}: {x}", e.name))?;
        let bf = brute_force_diagnoses(&e.program, &e.suite, n, &opts).map_err(|x| format!("{}: {x}", e.name))?;
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        ensure(elapsed < Duration::from_secs(60), || format!("{}: {elapsed:?}", e.name))?;
        let got: HashSet<BTreeSet<usize>> = r.diagnoses.iter().map(|d| d.components.clone()).collect();
        let min = bf.iter().map(|d| d.cost).min();
        let want: HashSet<BTreeSet<usize>> = bf
            .iter()
            .filter(|d| Some(d.cost) == min && !d.is_empty())
            .map(|d| d.components.clone())
            .collect();
        ensure(got == want, || format!("{}: cfaults {got:?} vs oracle {want:?}", e.name))?;
        programs += 1;
    }
    Ok(format!("{programs} programs agree, slowest {slowest:.2?}"))
}

fn random_wcnf(rng: &mut ChaCha8Rng) -> Wcnf {
    let vars = rng.gen_range(2..=18usize);
    let mut hard = Cnf::with_vars(vars);
    let lit = |rng: &mut ChaCha8Rng| {
        let v = rng.gen_range(1..=vars as i64);
        Lit::from_dimacs(if rng.gen_bool(0.5) { v } else { -v })
    };
    for _ in 0..rng.gen_range(0..=vars) {
        let len = rng.gen_range(2..=3);
        let clause: Vec<Lit> = (0..len).map(|_| lit(rng)).collect();
        hard.add_clause(clause);
    }
    let mut w = Wcnf::new(hard);
    for _ in 0..rng.gen_range(1..=12) {
        let len = rng.gen_range(1..=2);
        let clause: Vec<Lit> = (0..len).map(|_| lit(rng)).collect();
        w.add_soft(clause, rng.gen_range(1..=5));
    }
    w
}

/// Falsified soft sets of every assignment that satisfies the hard clauses.
fn achievable(w: &Wcnf) -> HashSet<BTreeSet<usize>> {
    let n = w.num_vars();
    let holds = |clause: &[Lit], bits: u32| {
        clause
            .iter()
            .any(|l| ((bits >> l.var().index()) & 1 == 1) == l.is_positive())
    };
    let mut out = HashSet::new();
    for bits in 0..1u32 << n {
        if w.hard.clauses().iter().all(|c| holds(c, bits)) {
            let f: BTreeSet<usize> = (0..w.soft.len()).filter(|&i| !holds(&w.soft[i].0, bits)).collect();
            out.insert(f);
        }
    }
    out
}

fn maxsat_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let opts = SolverOptions::default();
    let mut instances = 0;
    let mut feasible = 0;
    while instances < 50 {
        let w = random_wcnf(&mut rng);
        instances += 1;
        let sets = achievable(&w);
        let cost = |s: &BTreeSet<usize>| s.iter().map(|&i| w.soft[i].1).sum::<u64>();
        if sets.is_empty() {
            ensure(maxsat_optimum(&w, &opts).is_err(), || format!("instance {instances}: expected hard UNSAT"))?;
            continue;
        }
        feasible += 1;
        let best = sets.iter().map(cost).min().unwrap();
        let got = maxsat_optimum(&w, &opts).map_err(|e| e.to_string())?;
        ensure(got.cost == best, || format!("instance {instances}: cost {} vs {best}", got.cost))?;
        let minimal: BTreeSet<BTreeSet<usize>> = sets
            .iter()
            .filter(|s| !sets.iter().any(|t| t != *s && t.is_subset(s)))
            .filter(|s| !s.is_empty())
            .cloned()
            .collect();
        let list = enumerate_mcses(&w, None, &opts).map_err(|e| e.to_string())?;
        ensure(list.windows(2).all(|p| p[0].1 <= p[1].1), || format!("instance {instances}: costs not sorted"))?;
        let mcses: BTreeSet<BTreeSet<usize>> = list.into_iter().map(|(s, _)| s).collect();
        ensure(mcses == minimal, || format!("instance {instances}: {mcses:?} vs {minimal:?}"))?;
    }
    Ok(format!("{instances} instances ({feasible} with satisfiable hard clauses) match exhaustive search"))
}

fn refinement() -> Outcome {
    let mut compared = 0;
    let mut improved = Vec::new();
    for e in corpus().into_iter().filter(|e| e.kind == EntryKind::Buggy) {
        let opts = Config {
            refine: true,
            ..config(&e)
        };
        let r = localize_cfaults(&e.program, &e.suite, &opts).map_err(|x| format!("{}: {x}", e.name))?;
        let base = r.unrefined.as_ref().ok_or_else(|| format!("{}: not refined", e.name))?;
        let (refined, scale, unrefined) = (r.optimum_cost, r.cost_scale, base.optimum_cost);
        ensure(refined <= unrefined * scale, || {
            format!("{}: refined {refined}/{scale} > unrefined {unrefined}", e.name)
        })?;
        compared += 1;
        let multi_fault_conditions = e.meta.faulty_lines.len() > 1
            && base.diagnoses[0]
                .components
                .iter()
                .all(|&c| base.table.get(c).kind == mbdfl_core::transform::ComponentKind::IfCondition);
        if refined < unrefined * scale && multi_fault_conditions {
            improved.push(format!("{} {refined}/{scale} < {unrefined}", e.name));
        }
    }
    ensure(!improved.is_empty(), || "no strict improvement on a multi-fault condition program".into())?;
    Ok(format!("{compared} programs monotone; strictly better: {}", improved.join(", ")))
}

fn encoding(program: &Program, tests: &[TestCase], unwind: u32, mode: AssertMode) -> Result<Encoding, String> {
    let u = unroll(program, tests).map_err(|e| e.to_string())?;
    let ip = instrument(&u, unwind).map_err(|e| e.to_string())?;
    let opts = Config {
        unwind,
        ..Config::default()
    }
    .encode_options();
    encode(program, &ip, &opts, mode).map_err(|e| e.to_string())
}

fn all_healthy(e: &Encoding) -> Option<Vec<bool>> {
    let assumptions: Vec<Lit> = e.cnf.healthy.iter().map(|v| v.pos()).collect();
    match sat_solve(&e.cnf.cnf, &assumptions, &SolverOptions::default()).expect("no budget") {
        SatOutcome::Sat(m) => Some(m),
        SatOutcome::Unsat(_) => None,
    }
}

fn encoder_fidelity() -> Outcome {
    let mut pairs = 0;
    let mut multi = 0;
    for e in corpus() {
        let opts = config(&e);
        let limits = Limits {
            max_loop_iterations: e.meta.unwind,
            ..Limits::default()
        };
        for t in &e.suite.tests {
            let r = run_concrete(&e.program, &t.inputs, &limits);
            if r.status != ExecStatus::Completed {
                continue;
            }
            let free = encoding(&e.program, std::slice::from_ref(t), opts.unwind, AssertMode::Free)?;
            let m = all_healthy(&free).ok_or_else(|| format!("{} {}: healthy trace infeasible", e.name, t.id))?;
            let sc = &free.cnf.scopes[0];
            let len = decode(&m, &sc.output_len) as usize;
            let out: Vec<i64> = sc.output[..len.min(sc.output.len())].iter().map(|b| decode(&m, b)).collect();
            ensure(out == r.output, || format!("{} {}: decoded {out:?} vs {:?}", e.name, t.id, r.output))?;
            let forced = encoding(&e.program, std::slice::from_ref(t), opts.unwind, AssertMode::Assert)?;
            let sat = all_healthy(&forced).is_some();
            ensure(sat == (r.output == t.expected_output), || {
                format!("{} {}: forced encoding SAT = {sat}", e.name, t.id)
            })?;
            pairs += 1;
        }
        let failing = failing_tests(&e.program, &e.suite, &opts);
        if !failing.is_empty() {
            let full = encoding(&e.program, &failing, opts.unwind, AssertMode::Assert)?;
            ensure(all_healthy(&full).is_none(), || format!("{}: all-healthy multi-test formula is SAT", e.name))?;
            multi += 1;
        }
    }
    Ok(format!("{pairs} program/test pairs decoded exactly; {multi} multi-test formulas UNSAT"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("motivating example", motivating_example),
        ("sniper reproduction", sniper_reproduction),
        ("soundness", soundness),
        ("minimality", minimality),
        ("oracle equivalence", oracle_equivalence),
        ("maxsat correctness", maxsat_correctness),
        ("refinement", refinement),
        ("encoder fidelity", encoder_fidelity),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {} ({name}): PASS [{t:.1?}] {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL [{t:.1?}] {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
