use std::collections::{BTreeSet, HashMap, HashSet};

use mbdfl_sat::{maxsat_optimum, sat_solve, Lit, SatOutcome, SolverOptions};
use proptest::prelude::*;

use super::bitblast::Blaster;
use super::term::{BvOp, Sort, TermArena, TermId};
use super::*;
use crate::exec::{run_concrete, wrap, ExecStatus, Limits};
use crate::frontend::{parse_program, visit_program, visit_stmt, NodeId, NodeRef, Program, StmtKind, TestCase};
use crate::transform::{instrument, refine_instrument, unroll, ComponentKind};

const MAX3: &str = include_str!("../../corpus/buggy/max3/program.c");

fn test(id: &str, inputs: &[i64], expected: &[i64]) -> TestCase {
    TestCase {
        id: id.into(),
        inputs: inputs.to_vec(),
        expected_output: expected.to_vec(),
    }
}

fn max3_tests() -> Vec<TestCase> {
    vec![
        test("t0", &[1, 2, 3], &[3]),
        test("t1", &[6, 2, 1], &[6]),
        test("t2", &[-1, 3, 1], &[3]),
    ]
}

fn encoded(src: &str, tests: &[TestCase], opts: &EncodeOptions, mode: AssertMode) -> (Program, Encoding) {
    let p = parse_program(src).unwrap();
    let u = unroll(&p, tests).unwrap();
    let ip = instrument(&u, opts.unwind).unwrap();
    let e = encode(&p, &ip, opts, mode).unwrap();
    (p, e)
}

fn solve_with_health(e: &Encoding, healthy: &[bool]) -> Option<Vec<bool>> {
    let assumptions: Vec<Lit> = e
        .cnf
        .healthy
        .iter()
        .zip(healthy)
        .map(|(v, &h)| if h { v.pos() } else { v.neg() })
        .collect();
    match sat_solve(&e.cnf.cnf, &assumptions, &SolverOptions::default()).unwrap() {
        SatOutcome::Sat(m) => Some(m),
        SatOutcome::Unsat(_) => None,
    }
}

/// Weight of every condition recomputed from the set of components nested
/// under it, iterated to a fixpoint.
fn weight_oracle(p: &Program, table: &crate::transform::ComponentTable, io_mult: u64) -> Vec<u64> {
    let comp_of: HashMap<NodeId, usize> = table.components.iter().map(|c| (c.node_id, c.id)).collect();
    let mut nested: HashMap<usize, Vec<usize>> = HashMap::new();
    visit_program(p, &mut |n| {
        let NodeRef::Stmt(s) = n else { return };
        let (cond, children) = match &s.kind {
            StmtKind::If {
                cond,
                then_branch,
                else_branch,
            } => (cond, then_branch.iter().chain(else_branch.iter().flatten()).collect::<Vec<_>>()),
            StmtKind::Loop { cond, body, update, .. } => (cond, body.iter().chain(update).collect()),
            _ => return,
        };
        let Some(&c) = comp_of.get(&cond.id) else { return };
        let mut inside = HashSet::new();
        for child in children {
            visit_stmt(child, &mut |m| {
                if let Some(&d) = comp_of.get(&m.id()) {
                    inside.insert(d);
                }
            });
        }
        nested.insert(c, inside.into_iter().collect());
    });
    let mut w = vec![1u64; table.len()];
    loop {
        let mut changed = false;
        for (&c, inside) in &nested {
            let sum: u64 = inside
                .iter()
                .map(|&d| if table.components[d].kind.is_io() { 1 } else { w[d] })
                .sum();
            if w[c] != sum.max(1) {
                w[c] = sum.max(1);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let non_io: u64 = table
        .components
        .iter()
        .filter(|c| !c.kind.is_io())
        .map(|c| w[c.id])
        .sum();
    for c in &table.components {
        if c.kind.is_io() {
            w[c.id] = io_mult * non_io.max(1);
        }
    }
    w
}

const NESTED: &str = "int main() {
    int a;
    int b;
    int i;
    scanf(\"%d %d\", &a, &b);
    if (a > b) {
        a = a - b;
        if (a > 3) {
            b = b + 1;
            a = 0;
        }
    } else {
        b = 2;
    }
    for (i = 0; i < 2; i++) {
        if (a == i)
            printf(\"%d\", a);
    }
    printf(\"%d\", b);
    return 0;
}
";

#[test]
fn max3_weights() {
    let (_, e) = encoded(MAX3, &max3_tests(), &EncodeOptions::default(), AssertMode::Free);
    for c in &e.table.components {
        let expected = if c.kind == ComponentKind::IfCondition { 1 } else { 300 };
        assert_eq!(c.weight, expected, "{}", c.healthy_var);
    }
    assert_eq!(e.table.cost_scale, 1);
}

#[test]
fn nested_weights_match_the_oracle() {
    let p = parse_program(NESTED).unwrap();
    let u = unroll(&p, &[test("t", &[5, 1], &[0])]).unwrap();
    let ip = instrument(&u, 3).unwrap();
    for mult in [1, 7, 100] {
        let t = compute_weights(&ip.table, &p, mult);
        assert_eq!(t.weights(), weight_oracle(&p, &ip.table, mult));
    }
    let t = compute_weights(&ip.table, &p, 100);
    let by_line = |line: u32| {
        t.components
            .iter()
            .find(|c| c.line == line && !c.kind.is_io())
            .unwrap()
            .weight
    };
    assert_eq!(by_line(8), 2, "two leaves under the inner condition");
    assert_eq!(by_line(6), 6, "two leaves, the inner condition and its two leaves");
    assert_eq!(by_line(16), 1, "only a write under it");
}

#[test]
fn refined_weights_split_the_parent() {
    let p = parse_program(MAX3).unwrap();
    let u = unroll(&p, &max3_tests()).unwrap();
    let ip = instrument(&u, 1).unwrap();
    let base = compute_weights(&ip.table, &p, 100);
    let diag: BTreeSet<usize> = base
        .components
        .iter()
        .filter(|c| c.kind == ComponentKind::IfCondition)
        .map(|c| c.id)
        .collect();
    let rip = refine_instrument(&p, &max3_tests(), &diag, &base, 1).unwrap();
    let t = compute_weights(&rip.table, &p, 100);
    assert_eq!(t.cost_scale, 2);
    assert!(t.components.iter().all(|c| c.weight == 1));
}

#[test]
fn bad_width_and_unwind_are_rejected() {
    let p = parse_program(MAX3).unwrap();
    let u = unroll(&p, &max3_tests()).unwrap();
    let ip = instrument(&u, 1).unwrap();
    let opts = EncodeOptions {
        width: 12,
        ..EncodeOptions::default()
    };
    assert_eq!(encode(&p, &ip, &opts, AssertMode::Free).unwrap_err(), EncodeError::Width(12));
    let ssa = SsaOptions {
        unwind: 0,
        width: 16,
        unwind_assert: false,
    };
    assert_eq!(ssa_translate(&ip, &ssa).unwrap_err(), EncodeError::ZeroUnwind);
}

#[test]
fn out_of_range_values_are_rejected() {
    let opts = EncodeOptions {
        width: 8,
        ..EncodeOptions::default()
    };
    let p = parse_program(MAX3).unwrap();
    let u = unroll(&p, &[test("t", &[1, 200, 3], &[3])]).unwrap();
    let ip = instrument(&u, 1).unwrap();
    let err = encode(&p, &ip, &opts, AssertMode::Free).unwrap_err();
    assert!(matches!(err, EncodeError::Range { value: 200, width: 8, .. }), "{err}");
}

#[test]
fn max3_soft_clauses() {
    let (_, e) = encoded(MAX3, &max3_tests(), &EncodeOptions::default(), AssertMode::Assert);
    assert_eq!(e.wcnf.soft.len(), 9);
    assert!(e.wcnf.soft.iter().all(|(c, _)| c.len() == 1));
    assert_eq!(e.wcnf.total_soft_weight(), 3 + 6 * 300);
    let mut buf = Vec::new();
    write_wcnf(&e.wcnf, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let header = text.lines().next().unwrap();
    assert_eq!(
        header,
        format!(
            "p wcnf {} {} {}",
            e.wcnf.num_vars(),
            e.cnf.num_clauses() + 9,
            3 + 6 * 300 + 1
        )
    );
}

#[test]
fn max3_is_unsat_when_everything_is_healthy() {
    let (_, e) = encoded(MAX3, &max3_tests(), &EncodeOptions::default(), AssertMode::Assert);
    assert!(solve_with_health(&e, &[true; 9]).is_none());
    let conds: Vec<bool> = e
        .table
        .components
        .iter()
        .map(|c| c.kind != ComponentKind::IfCondition)
        .collect();
    assert!(solve_with_health(&e, &conds).is_some());
}

#[test]
fn max3_optimum_is_the_three_conditions() {
    let (_, e) = encoded(MAX3, &max3_tests(), &EncodeOptions::default(), AssertMode::Assert);
    let sol = maxsat_optimum(&e.wcnf, &SolverOptions::default()).unwrap();
    assert_eq!(sol.cost, 3);
    assert_eq!(e.table.lines(&sol.falsified), BTreeSet::from([5, 8, 11]));
}

#[test]
fn program_without_components_has_no_softs() {
    let src = "int main() {\n    return 0;\n}\n";
    let (_, e) = encoded(src, &[test("t", &[], &[1])], &EncodeOptions::default(), AssertMode::Assert);
    assert!(e.wcnf.soft.is_empty());
    let r = sat_solve(&e.cnf.cnf, &[], &SolverOptions::default()).unwrap();
    assert!(matches!(r, SatOutcome::Unsat(_)));
}

#[test]
fn straight_line_ssa() {
    let src = "int main() {\n    int s;\n    s = 0;\n    s = s + 1;\n    printf(\"%d\", s);\n    return 0;\n}\n";
    let p = parse_program(src).unwrap();
    let u = unroll(&p, &[test("t", &[], &[1])]).unwrap();
    let ip = instrument(&u, 1).unwrap();
    let opts = SsaOptions {
        unwind: 1,
        width: 16,
        unwind_assert: false,
    };
    let s = ssa_translate(&ip, &opts).unwrap();
    assert_eq!(s.healthy.len(), 3);
    assert!(s.hard.is_empty());
    let sc = &s.scopes[0];
    assert_eq!(sc.output.len(), 1 + OUTPUT_SLACK);
    assert_eq!(sc.expected, [1]);
    let healthy = |_: u32| 1;
    let vals = s.arena.eval(&[sc.output[0], sc.output_len, sc.assertion, sc.overflow], &healthy);
    assert_eq!(vals, [1, 1, 1, 0]);
    let skipped = |id: u32| (id != 1) as i64;
    let vals = s.arena.eval(&[sc.output[0], sc.assertion], &skipped);
    assert_eq!(vals, [0, 0]);
}

const SUM_TO_N: &str = "int main() {
    int i;
    int n;
    int s;
    s = 0;
    scanf(\"%d\", &n);
    for (i = 1; i < n; i++) {
        s = s + i;
    }
    printf(\"%d\", s);
    return 0;
}
";

#[test]
fn loop_unwinding_bounds_behaviour() {
    let opts = |unwind, unwind_assert| EncodeOptions {
        unwind,
        unwind_assert,
        ..EncodeOptions::default()
    };
    let tests = [test("t", &[4], &[6])];
    let (_, e) = encoded(SUM_TO_N, &tests, &opts(2, false), AssertMode::Free);
    let n = e.table.len();
    assert!(solve_with_health(&e, &vec![true; n]).is_none(), "three iterations exceed the bound");
    let (_, e) = encoded(SUM_TO_N, &tests, &opts(3, false), AssertMode::Assert);
    let m = solve_with_health(&e, &vec![true; n]).expect("fits in three iterations");
    assert_eq!(decode(&m, &e.cnf.scopes[0].output[0]), 6);
    let (_, e) = encoded(SUM_TO_N, &tests, &opts(2, true), AssertMode::Free);
    assert!(
        solve_with_health(&e, &vec![true; n]).is_some(),
        "the bound only weakens the assertion"
    );
}

const PROGRAMS: &[&str] = &[
    MAX3,
    SUM_TO_N,
    NESTED,
    "int sq(int x) {
    return x * x;
}

int main() {
    int a[3];
    int i;
    int k;
    for (i = 0; i < 3; i++) {
        scanf(\"%d\", &k);
        a[i] = sq(k) % 7;
    }
    if (a[0] > a[2])
        a[1] += a[0];
    else
        a[1] -= a[2];
    if (a[1] != 0 && a[0] / (a[1] + 1) >= 0)
        printf(\"%d %d\", a[1], a[2] - a[0]);
    else
        printf(\"%d\", !a[0]);
    return 0;
}
",
    "int f(int x) {
    if (x < 0)
        return -x;
    while (x > 10)
        x = x - 10;
    return x;
}

int main() {
    int x;
    bool b;
    scanf(\"%d\", &x);
    b = x > 2 || x < -2;
    if (b)
        printf(\"%d\", f(x));
    printf(\"%d\", f(x + 3));
    return 0;
}
",
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn healthy_encoding_agrees_with_the_interpreter(
        prog in 0..PROGRAMS.len(),
        inputs in proptest::collection::vec(-30i64..30, 3),
    ) {
        let p = parse_program(PROGRAMS[prog]).unwrap();
        let limits = Limits { max_loop_iterations: 4, ..Limits::default() };
        let r = run_concrete(&p, &inputs, &limits);
        prop_assume!(r.status == ExecStatus::Completed);
        let t = test("t", &inputs, &r.output);
        let opts = EncodeOptions { unwind: 4, ..EncodeOptions::default() };
        let (_, e) = encoded(PROGRAMS[prog], &[t], &opts, AssertMode::Free);
        let m = solve_with_health(&e, &vec![true; e.table.len()]).expect("healthy run is feasible");
        let sc = &e.cnf.scopes[0];
        let len = decode(&m, &sc.output_len) as usize;
        let out: Vec<i64> = sc.output[..len].iter().map(|bits| decode(&m, bits)).collect();
        prop_assert_eq!(out, r.output);
        prop_assert!(m[sc.assertion.var().index()] == sc.assertion.is_positive());
    }
}

#[derive(Debug, Clone)]
enum Op {
    Bin(u8, usize, usize),
    Neg(usize),
    Cmp(bool, usize, usize),
    Ite(usize, usize, usize),
    Logic(u8, usize, usize),
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![
        (0u8..5, any::<usize>(), any::<usize>()).prop_map(|(o, a, b)| Op::Bin(o, a, b)),
        any::<usize>().prop_map(Op::Neg),
        (any::<bool>(), any::<usize>(), any::<usize>()).prop_map(|(e, a, b)| Op::Cmp(e, a, b)),
        (any::<usize>(), any::<usize>(), any::<usize>()).prop_map(|(c, a, b)| Op::Ite(c, a, b)),
        (0u8..3, any::<usize>(), any::<usize>()).prop_map(|(o, a, b)| Op::Logic(o, a, b)),
    ]
}

fn build_dag(width: u32, ops: &[Op]) -> (TermArena, Vec<TermId>, Vec<TermId>) {
    let mut a = TermArena::new(width);
    let mut bvs: Vec<TermId> = (0..3).map(|i| a.fresh(format!("x{i}"), Sort::Bv)).collect();
    let mut bools: Vec<TermId> = (0..2).map(|i| a.fresh(format!("p{i}"), Sort::Bool)).collect();
    bvs.push(a.constant(-1));
    bvs.push(a.constant(3));
    for o in ops {
        let bv = |i: usize| bvs[i % bvs.len()];
        let bl = |i: usize| bools[i % bools.len()];
        match *o {
            Op::Bin(k, x, y) => {
                let op = [BvOp::Add, BvOp::Sub, BvOp::Mul, BvOp::Div, BvOp::Rem][k as usize];
                let t = a.bin(op, bv(x), bv(y));
                bvs.push(t);
            }
            Op::Neg(x) => {
                let t = a.neg(bv(x));
                bvs.push(t);
            }
            Op::Cmp(eq, x, y) => {
                let t = if eq { a.eq(bv(x), bv(y)) } else { a.slt(bv(x), bv(y)) };
                bools.push(t);
            }
            Op::Ite(c, x, y) => {
                let t = a.ite(bl(c), bv(x), bv(y));
                bvs.push(t);
            }
            Op::Logic(k, x, y) => {
                let t = match k {
                    0 => a.and(bl(x), bl(y)),
                    1 => a.or(bl(x), bl(y)),
                    _ => a.not(bl(x)),
                };
                bools.push(t);
            }
        }
    }
    (a, bvs, bools)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bitblasting_agrees_with_term_evaluation(
        width in prop_oneof![Just(8u32), Just(16u32)],
        ops in proptest::collection::vec(op(), 1..24),
        xs in proptest::collection::vec(any::<i64>(), 3),
        ps in proptest::collection::vec(any::<bool>(), 2),
    ) {
        let (arena, bvs, bools) = build_dag(width, &ops);
        let assignment = |s: u32| {
            let s = s as usize;
            if s < 3 { wrap(xs[s], width) } else { ps[s - 3] as i64 }
        };
        let mut b = Blaster::new(&arena);
        let bv_bits: Vec<Vec<Lit>> = bvs.iter().map(|&t| b.bv(t)).collect();
        let bool_lits: Vec<Lit> = bools.iter().map(|&t| b.bool_lit(t)).collect();
        let mut assumptions = Vec::new();
        for (i, bits) in bv_bits.iter().take(3).enumerate() {
            let v = assignment(i as u32);
            for (k, &l) in bits.iter().enumerate() {
                assumptions.push(if (v >> k) & 1 == 1 { l } else { !l });
            }
        }
        for (i, &l) in bool_lits.iter().take(2).enumerate() {
            assumptions.push(if ps[i] { l } else { !l });
        }
        let SatOutcome::Sat(m) = sat_solve(&b.cnf, &assumptions, &SolverOptions::default()).unwrap() else {
            panic!("pinning the inputs cannot be contradictory");
        };
        let expected_bv = arena.eval(&bvs, &assignment);
        for (bits, want) in bv_bits.iter().zip(expected_bv) {
            prop_assert_eq!(decode(&m, bits), want);
        }
        let expected_bool = arena.eval(&bools, &assignment);
        for (&l, want) in bool_lits.iter().zip(expected_bool) {
            let got = m[l.var().index()] == l.is_positive();
            prop_assert_eq!(got as i64, want);
        }
    }
}

#[test]
fn division_corner_cases_at_width_8() {
    let cases = [(-128i64, -1i64), (-128, 1), (7, -2), (-7, 2), (-7, -2), (5, 0), (-128, 0), (127, 127)];
    for (x, y) in cases {
        let mut a = TermArena::new(8);
        let xs = a.fresh("x", Sort::Bv);
        let ys = a.fresh("y", Sort::Bv);
        let roots = [
            a.bin(BvOp::Div, xs, ys),
            a.bin(BvOp::Rem, xs, ys),
            a.bin(BvOp::Mul, xs, ys),
        ];
        let mut b = Blaster::new(&a);
        let xb = b.bv(xs);
        let yb = b.bv(ys);
        let rb: Vec<Vec<Lit>> = roots.iter().map(|&r| b.bv(r)).collect();
        let mut assumptions = Vec::new();
        for (bits, v) in [(&xb, x), (&yb, y)] {
            for (k, &l) in bits.iter().enumerate() {
                assumptions.push(if (v >> k) & 1 == 1 { l } else { !l });
            }
        }
        let SatOutcome::Sat(m) = sat_solve(&b.cnf, &assumptions, &SolverOptions::default()).unwrap() else {
            panic!("satisfiable");
        };
        let got: Vec<i64> = rb.iter().map(|bits| decode(&m, bits)).collect();
        let want = [
            if y == 0 { 0 } else { wrap(x / y, 8) },
            if y == 0 { 0 } else { wrap(x % y, 8) },
            wrap(x * y, 8),
        ];
        assert_eq!(got, want, "{x} op {y}");
    }
}
