use serde::Serialize;

use super::{
    flip_direct_sum, model_character, model_cohomology, model_mu_extremes, twist_index_j, CohomologyTable,
    MuExtremes, SheafModel,
};
use crate::bounds::{
    deficiency, general_bound, non_gg_bound, stratified_bound, unbalanced_bound_with_mu_max, BoundReport,
};
use crate::error::Result;
use crate::quadric::{BiDegree, ChernCharacter};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub report: BoundReport,
    pub holds: bool,
    pub sharp: bool,
}

impl BoundCheck {
    fn new(report: BoundReport, h0: i64) -> Self {
        BoundCheck { holds: h0 <= report.bound, sharp: h0 == report.bound, report }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditRecord {
    pub model: String,
    pub character: ChernCharacter,
    pub cohomology: CohomologyTable,
    pub mu: MuExtremes,
    /// β_{r,μ} − h⁰, when the slope is at least −1.
    pub deficiency: Option<i64>,
    pub checks: Vec<BoundCheck>,
}

impl AuditRecord {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn oracle_h0(&self) -> i64 {
        self.cohomology.h0
    }
}

fn is_effective(d: &BiDegree) -> bool {
    d.a >= 0 && d.b >= 0
}

/// Rank of the image of the evaluation map, and whether that image has full rank.
fn generated_rank(model: &SheafModel, ch: &ChernCharacter, h0: i64) -> (i64, bool) {
    match model {
        SheafModel::DirectSum(parts) => {
            let s = parts.iter().filter(|(d, _)| is_effective(d)).map(|(_, mult)| mult).sum::<i64>();
            (s, s == ch.rank)
        }
        SheafModel::IdealSheafTwist { .. } => {
            let s = i64::from(h0 > 0);
            (s, s == 1)
        }
        // a quotient of O(k,l)^{r+m+n} with k, l >= 0
        SheafModel::SteinerLike { .. } => (ch.rank, true),
    }
}

fn unbalanced_check(model: &SheafModel, ch: &ChernCharacter, mu_max: Rational) -> Result<Option<BoundReport>> {
    match model {
        SheafModel::DirectSum(parts) if parts.iter().all(|(d, _)| is_effective(d)) => {
            let oriented = if ch.c1.a > ch.c1.b { flip_direct_sum(parts) } else { parts.clone() };
            let c1 = if ch.c1.a > ch.c1.b { ch.c1.flip() } else { ch.c1 };
            let j = twist_index_j(&oriented)?;
            unbalanced_bound_with_mu_max(ch.rank, c1.a, c1.b, j, mu_max).map(Some)
        }
        _ => Ok(None),
    }
}

/// Computes h⁰ exactly and compares it with every bound that applies to the model.
pub fn model_bound_audit(model: &SheafModel) -> Result<AuditRecord> {
    let character = model_character(model)?;
    let cohomology = model_cohomology(model)?;
    let mu = model_mu_extremes(model)?;
    let h0 = cohomology.h0;
    let r = character.rank;
    let minus_one = Rational::from(-1);

    let mut checks = Vec::new();
    if mu.mu_max >= minus_one {
        checks.push(BoundCheck::new(general_bound(r, mu.mu_max)?, h0));
    }
    if let Some(rep) = unbalanced_check(model, &character, mu.mu_max)? {
        checks.push(BoundCheck::new(rep, h0));
    }
    if h0 > 0 {
        let (s, generically_generated) = generated_rank(model, &character, h0);
        if s > 0 {
            checks.push(BoundCheck::new(stratified_bound(s, mu.mu_max)?, h0));
        }
        if !generically_generated && r >= 2 {
            checks.push(BoundCheck::new(non_gg_bound(r, mu.mu_max)?, h0));
        }
    }

    let slope = character.slope()?;
    let deficiency = if slope >= minus_one { Some(deficiency(&character, h0)?) } else { None };
    Ok(AuditRecord { model: model.describe(), character, cohomology, mu, deficiency, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::TheoremTag;
    use crate::oracles::random_points;

    fn check(rec: &AuditRecord, tag: TheoremTag) -> &BoundCheck {
        rec.checks.iter().find(|c| c.report.theorem == tag).expect("bound applied")
    }

    #[test]
    fn balanced_sum_is_sharp() {
        let rec = model_bound_audit(&SheafModel::direct_sum(&[(1, 1, 3)])).unwrap();
        assert_eq!(rec.oracle_h0(), 12);
        let g = check(&rec, TheoremTag::General);
        assert_eq!(g.report.bound, 12);
        assert!(g.sharp);
        assert_eq!(rec.deficiency, Some(0));
        assert!(rec.passed());
    }

    #[test]
    fn unbalanced_line_bundle() {
        let rec = model_bound_audit(&SheafModel::direct_sum(&[(0, 2, 1)])).unwrap();
        assert_eq!(rec.oracle_h0(), 3);
        let g = check(&rec, TheoremTag::General);
        assert_eq!(g.report.bound, 4);
        assert!(!g.sharp);
        let u = check(&rec, TheoremTag::Unbalanced);
        assert_eq!(u.report.bound, 3);
        assert!(u.sharp);
        // the flipped bundle is oriented before the bound is taken
        let flipped = model_bound_audit(&SheafModel::direct_sum(&[(2, 0, 1)])).unwrap();
        assert!(check(&flipped, TheoremTag::Unbalanced).sharp);
    }

    #[test]
    fn four_points() {
        let model = SheafModel::IdealSheafTwist { points: random_points(4, 7), twist: BiDegree::new(1, 1) };
        let rec = model_bound_audit(&model).unwrap();
        assert_eq!(rec.oracle_h0(), 0);
        assert_eq!(check(&rec, TheoremTag::General).report.bound, 4);
        assert_eq!(rec.deficiency, Some(4));
        assert!(rec.passed());
    }

    #[test]
    fn non_generated_sum() {
        // O ⊕ O(−1,0): h⁰ = 1, the image has rank 1 < 2
        let rec = model_bound_audit(&SheafModel::direct_sum(&[(0, 0, 1), (-1, 0, 1)])).unwrap();
        assert_eq!(rec.oracle_h0(), 1);
        assert!(rec.checks.iter().any(|c| c.report.theorem == TheoremTag::NonGg));
        assert!(rec.checks.iter().all(|c| c.report.theorem != TheoremTag::Unbalanced));
        assert!(rec.passed());
    }

    #[test]
    fn steiner_models() {
        let rec = model_bound_audit(&SheafModel::steiner(1, 1, 3, 1, 0, 42)).unwrap();
        assert_eq!(rec.oracle_h0(), 14);
        assert!(check(&rec, TheoremTag::General).sharp);
        // only direct sums carry an exact μ_max, so no unbalanced check here
        let rec = model_bound_audit(&SheafModel::steiner(1, 3, 3, 0, 1, 4)).unwrap();
        assert!(rec.checks.iter().all(|c| c.report.theorem != TheoremTag::Unbalanced));
        assert!(rec.passed());
    }

    #[test]
    fn no_violation_on_small_sums() {
        let degrees: Vec<(i64, i64)> = (-2..=3).flat_map(|a| (-2..=3).map(move |b| (a, b))).collect();
        for (i, &(a, b)) in degrees.iter().enumerate() {
            for &(c, d) in &degrees[i..] {
                let rec = model_bound_audit(&SheafModel::direct_sum(&[(a, b, 1), (c, d, 1)])).unwrap();
                assert!(rec.passed(), "{}: {:?}", rec.model, rec.checks);
            }
        }
    }
}
