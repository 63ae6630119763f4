//! Differential tests against exhaustive truth-table oracles.

use std::collections::BTreeSet;

use mbdfl_sat::{
    enumerate_mcses, enumerate_optimal_solutions, maxsat_optimum, sat_solve, Cnf, Lit, SatOutcome,
    SolverOptions, Var, Wcnf,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Clause as (positive mask, negative mask) over at most 32 variables.
fn masks(clause: &[Lit]) -> (u32, u32) {
    let mut pos = 0;
    let mut neg = 0;
    for l in clause {
        let bit = 1u32 << l.var().index();
        if l.is_positive() {
            pos |= bit;
        } else {
            neg |= bit;
        }
    }
    (pos, neg)
}

fn holds(a: u32, (pos, neg): (u32, u32)) -> bool {
    a & pos != 0 || !a & neg != 0
}

fn truth_table_sat(cnf: &Cnf) -> bool {
    let clauses: Vec<_> = cnf.clauses().iter().map(|c| masks(c)).collect();
    (0u32..1 << cnf.num_vars()).any(|a| clauses.iter().all(|&c| holds(a, c)))
}

/// Every falsified-soft mask realised by some model of the hard clauses.
fn achievable_masks(w: &Wcnf) -> BTreeSet<u32> {
    let hard: Vec<_> = w.hard.clauses().iter().map(|c| masks(c)).collect();
    let soft: Vec<_> = w.soft.iter().map(|(c, _)| masks(c)).collect();
    let mut out = BTreeSet::new();
    for a in 0u32..1 << w.num_vars() {
        if hard.iter().all(|&c| holds(a, c)) {
            let mut m = 0;
            for (i, &c) in soft.iter().enumerate() {
                if !holds(a, c) {
                    m |= 1 << i;
                }
            }
            out.insert(m);
        }
    }
    out
}

fn mask_cost(w: &Wcnf, m: u32) -> u64 {
    (0..w.soft.len())
        .filter(|i| m >> i & 1 == 1)
        .map(|i| w.soft[i].1)
        .sum()
}

fn to_set(m: u32) -> BTreeSet<usize> {
    (0..32).filter(|i| m >> i & 1 == 1).collect()
}

fn random_clause(rng: &mut ChaCha8Rng, nvars: usize, len: usize) -> Vec<Lit> {
    (0..len)
        .map(|_| Var::new(rng.gen_range(0..nvars)).lit(rng.gen()))
        .collect()
}

fn random_wcnf(rng: &mut ChaCha8Rng) -> Wcnf {
    let nvars = rng.gen_range(3..=18);
    let mut hard = Cnf::with_vars(nvars);
    for _ in 0..rng.gen_range(0..=nvars * 2) {
        let len = rng.gen_range(1..=3);
        hard.add_clause(random_clause(rng, nvars, len));
    }
    let mut w = Wcnf::new(hard);
    for _ in 0..rng.gen_range(1..=12) {
        let len = if rng.gen_bool(0.7) { 1 } else { rng.gen_range(2..=3) };
        w.add_soft(random_clause(rng, nvars, len), rng.gen_range(1..=6));
    }
    w
}

#[test]
fn random_3cnf_matches_truth_table() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut sat = 0;
    for _ in 0..100 {
        let nvars = rng.gen_range(5..=20);
        let mut cnf = Cnf::with_vars(nvars);
        for _ in 0..nvars * 3 {
            cnf.add_clause(random_clause(&mut rng, nvars, 3));
        }
        let expected = truth_table_sat(&cnf);
        let got = sat_solve(&cnf, &[], &SolverOptions::default()).unwrap();
        match got {
            SatOutcome::Sat(model) => {
                assert!(expected);
                assert!(cnf.is_satisfied_by(&model));
                sat += 1;
            }
            SatOutcome::Unsat(core) => {
                assert!(!expected);
                assert!(core.is_empty());
            }
        }
    }
    // Ratio 3.0 is below the threshold, so most instances are satisfiable.
    assert!(sat > 50);
}

#[test]
fn assumption_cores_are_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..60 {
        let nvars = rng.gen_range(4..=12);
        let mut cnf = Cnf::with_vars(nvars);
        for _ in 0..nvars * 2 {
            cnf.add_clause(random_clause(&mut rng, nvars, 3));
        }
        let assumptions: Vec<Lit> = (0..rng.gen_range(1..=nvars))
            .map(|_| Var::new(rng.gen_range(0..nvars)).lit(rng.gen()))
            .collect();
        let mut with_units = cnf.clone();
        for &a in &assumptions {
            with_units.add_clause([a]);
        }
        match sat_solve(&cnf, &assumptions, &SolverOptions::default()).unwrap() {
            SatOutcome::Sat(model) => {
                assert!(truth_table_sat(&with_units));
                assert!(assumptions.iter().all(|a| model[a.var().index()] == a.is_positive()));
            }
            SatOutcome::Unsat(core) => {
                assert!(core.iter().all(|c| assumptions.contains(c)));
                let mut core_cnf = cnf.clone();
                for &c in &core {
                    core_cnf.add_clause([c]);
                }
                assert!(!truth_table_sat(&core_cnf));
            }
        }
    }
}

#[test]
fn maxsat_and_enumeration_match_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let options = SolverOptions::default();
    for _ in 0..80 {
        let w = random_wcnf(&mut rng);
        let masks = achievable_masks(&w);
        let result = maxsat_optimum(&w, &options);
        if masks.is_empty() {
            assert!(result.is_err());
            continue;
        }
        let best = masks.iter().map(|&m| mask_cost(&w, m)).min().unwrap();
        let sol = result.unwrap();
        assert_eq!(sol.cost, best);
        assert!(w.hard.is_satisfied_by(&sol.model));
        assert_eq!(w.cost_of(&sol.model), best);

        let optimal: BTreeSet<_> = masks
            .iter()
            .filter(|&&m| mask_cost(&w, m) == best)
            .map(|&m| to_set(m))
            .collect();
        let got: BTreeSet<_> = enumerate_optimal_solutions(&w, best, &options)
            .unwrap()
            .into_iter()
            .collect();
        assert_eq!(got, optimal);

        let minimal: BTreeSet<_> = masks
            .iter()
            .filter(|&&m| m != 0 && !masks.iter().any(|&o| o != m && o & m == o))
            .map(|&m| to_set(m))
            .collect();
        let list = enumerate_mcses(&w, None, &options).unwrap();
        let costs: Vec<u64> = list.iter().map(|(_, c)| *c).collect();
        assert!(costs.windows(2).all(|p| p[0] <= p[1]));
        let got: BTreeSet<_> = list.into_iter().map(|(s, _)| s).collect();
        assert_eq!(got, minimal);
    }
}

proptest! {
    #[test]
    fn dimacs_wcnf_round_trip(
        hard in prop::collection::vec(prop::collection::vec((1i64..20, any::<bool>()), 0..5), 0..10),
        soft in prop::collection::vec((prop::collection::vec((1i64..20, any::<bool>()), 1..3), 1u64..50), 0..6),
    ) {
        let lit = |(v, p): &(i64, bool)| Lit::from_dimacs(if *p { *v } else { -*v });
        let mut w = Wcnf::new(Cnf::with_vars(20));
        for c in &hard {
            w.hard.add_clause(c.iter().map(lit));
        }
        for (c, wt) in &soft {
            w.add_soft(c.iter().map(lit), *wt);
        }
        let mut buf = Vec::new();
        mbdfl_sat::dimacs::write_wcnf(&w, &mut buf).unwrap();
        let back = mbdfl_sat::dimacs::read_wcnf(buf.as_slice()).unwrap();
        prop_assert_eq!(back, w);
    }
}
