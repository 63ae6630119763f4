use crate::cdcl::Solver;
use crate::lit::Lit;

/// Builds a totalizer over `inputs` and returns its unary outputs:
/// `outputs[k]` is forced true whenever at least `k + 1` inputs are true.
/// Only the upward direction is encoded.
pub(crate) fn build(inputs: &[Lit], solver: &mut Solver) -> Vec<Lit> {
    assert!(!inputs.is_empty());
    if inputs.len() == 1 {
        return vec![inputs[0]];
    }
    let (left, right) = inputs.split_at(inputs.len() / 2);
    let a = build(left, solver);
    let b = build(right, solver);
    let out: Vec<Lit> = (0..inputs.len()).map(|_| solver.new_var().pos()).collect();
    for i in 0..=a.len() {
        for j in 0..=b.len() {
            if i + j == 0 {
                continue;
            }
            let mut clause = Vec::with_capacity(3);
            if i > 0 {
                clause.push(!a[i - 1]);
            }
            if j > 0 {
                clause.push(!b[j - 1]);
            }
            clause.push(out[i + j - 1]);
            solver.add_clause(&clause);
        }
    }
    out
}
