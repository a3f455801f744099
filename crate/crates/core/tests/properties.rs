use clifford_core::bounds::{general_bound, stratified_bound};
use clifford_core::matrix::{rank, ExactMatrix};
use clifford_core::oracles::{direct_sum_cohomology, model_bound_audit, SheafModel};
use clifford_core::quadric::{euler_characteristic, twist};
use clifford_core::{BiDegree, ChernCharacter, Rational};
use proptest::prelude::*;

/// Plain Gauss-Jordan over `Rational`, with no pivoting strategy and no integer tricks.
fn naive_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&v| Rational::from(v)).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank && !m[i][c].is_zero() {
                let f = m[i][c] / m[rank][c];
                let pivot = m[rank].clone();
                for (x, v) in m[i].iter_mut().zip(pivot).skip(c) {
                    *x = *x - f * v;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..7, 1usize..7).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-3i64..=3, c), r))
}

fn summands() -> impl Strategy<Value = Vec<(i64, i64, i64)>> {
    prop::collection::vec((-3i64..=5, -3i64..=5, 1i64..=2), 1..4)
}

proptest! {
    #[test]
    fn rank_matches_naive_elimination(rows in small_matrix()) {
        let m = ExactMatrix::from_integer_rows(&rows).unwrap();
        prop_assert_eq!(rank(&m), naive_rank(&rows));
        prop_assert_eq!(rank(&m.transpose()), naive_rank(&rows));
    }

    #[test]
    fn twisted_chi_matches_kunneth(parts in summands(), p in -4i64..=4, q in -4i64..=4) {
        let ch = parts.iter().fold(ChernCharacter::zero(), |acc, &(a, b, k)| acc + ChernCharacter::line_bundle(a, b).scale(k));
        let direct: i64 = parts.iter().map(|&(a, b, k)| k * (a + p + 1) * (b + q + 1)).sum();
        prop_assert_eq!(euler_characteristic(&twist(&ch, p, q)).unwrap(), direct);
        let shifted: Vec<(BiDegree, i64)> = parts.iter().map(|&(a, b, k)| (BiDegree::new(a + p, b + q), k)).collect();
        prop_assert_eq!(direct_sum_cohomology(&shifted).unwrap().chi, direct);
    }

    #[test]
    fn audit_never_finds_a_violation(parts in summands()) {
        let rec = model_bound_audit(&SheafModel::direct_sum(&parts)).unwrap();
        prop_assert!(rec.passed(), "{}: {:?}", rec.model, rec.checks);
        prop_assert!(rec.cohomology.is_consistent());
    }

    #[test]
    fn stratified_never_exceeds_general(r in 1i64..=6, s_off in 0i64..6, p in 0i64..=48) {
        let s = 1 + s_off % r;
        let mu = Rational::new(p as i128, 2 * r as i128).unwrap();
        let strat = stratified_bound(s, mu).unwrap().bound;
        prop_assert!(strat <= general_bound(r, mu).unwrap().bound);
    }
}

#[test]
fn naive_rank_sanity() {
    assert_eq!(naive_rank(&[vec![1, 2], vec![2, 4]]), 1);
    assert_eq!(naive_rank(&[vec![0, 0], vec![0, 0]]), 0);
    assert_eq!(naive_rank(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]), 3);
}

#[test]
fn serialized_reports_are_stable() {
    let rep = general_bound(3, Rational::new(7, 6).unwrap()).unwrap();
    let v = serde_json::to_value(&rep).unwrap();
    assert_eq!(v["theorem"], "general");
    assert_eq!(v["bound"], 14);
    assert_eq!(v["aux"]["mu_max"], "7/6");
}
