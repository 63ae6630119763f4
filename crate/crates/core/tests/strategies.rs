use std::collections::BTreeSet;

use mbdfl_core::corpus::{corpus_dir, load_corpus, CorpusEntry, EntryKind};
use mbdfl_core::diagnose::{failing_tests, localize_bugassist, localize_cfaults, localize_sniper, Config};
use mbdfl_core::TestSuite;

fn config(e: &CorpusEntry) -> Config {
    Config {
        unwind: e.meta.unwind,
        ..Config::default()
    }
}

fn buggy() -> Vec<CorpusEntry> {
    load_corpus(&corpus_dir())
        .unwrap()
        .into_iter()
        .filter(|e| e.kind == EntryKind::Buggy)
        .collect()
}

#[test]
fn sniper_dominates_cfaults() {
    for e in buggy() {
        let opts = config(&e);
        let c = localize_cfaults(&e.program, &e.suite, &opts).unwrap();
        let s = localize_sniper(&e.program, &e.suite, &opts).unwrap();
        assert!(s.unique_aggregated_count >= c.diagnoses.len(), "{}", e.name);
        for d in &c.diagnoses {
            assert!(
                s.candidates.iter().any(|a| d.components.is_subset(a)),
                "{}: {:?} is not covered by an aggregate",
                e.name,
                d.lines
            );
        }
    }
}

#[test]
fn single_failing_test_degenerates() {
    for e in buggy() {
        let opts = config(&e);
        let first = failing_tests(&e.program, &e.suite, &opts).remove(0);
        let suite = TestSuite::new(vec![first]);
        let c = localize_cfaults(&e.program, &suite, &opts).unwrap();
        let b = localize_bugassist(&e.program, &suite, &opts).unwrap();
        let s = localize_sniper(&e.program, &suite, &opts).unwrap();
        let per_test = *s.per_test_counts.values().next().unwrap();
        assert_eq!(s.unique_aggregated_count, per_test, "{}", e.name);
        assert_eq!(b.diagnoses[0].cost, c.optimum_cost, "{}", e.name);
        assert_eq!(s.diagnoses[0].cost, c.optimum_cost, "{}", e.name);
        let optimal: BTreeSet<_> = c.diagnoses.iter().map(|d| d.components.clone()).collect();
        assert!(optimal.contains(&b.diagnoses[0].components), "{}", e.name);
    }
}

#[test]
fn refined_diagnoses_stay_inside_their_parent() {
    for e in buggy() {
        let opts = Config {
            refine: true,
            ..config(&e)
        };
        let r = localize_cfaults(&e.program, &e.suite, &opts).unwrap();
        let base = r.unrefined.as_ref().unwrap();
        let parents: BTreeSet<usize> = base.diagnoses[0].components.clone();
        for d in &r.diagnoses {
            for &c in &d.components {
                let parent = r.table.get(c).refinement.unwrap().parent;
                assert!(parents.contains(&parent), "{}", e.name);
            }
        }
    }
}
