//! Clifford-type upper bounds on h⁰ for torsion-free sheaves on the quadric.
//!
//! All of these reduce to two quantities of a rank `r` and slope `μ ≥ −1`:
//!
//! * `α_μ = ⌊μ⌋ + 1`
//! * `β_{r,μ} = r·α_μ·(2μ − α_μ + 2)`, the maximal number of sections.
//!
//! [`beta`] insists that `2rμ` is an integer, which holds for every slope of a
//! rank-`≤ r` sheaf and makes the result integral. [`beta_relaxed`] drops that
//! requirement and returns a rational; it is used where the slope is a
//! representable value rather than an actual slope (stratified bounds, θ audits),
//! and the integer bound reported there is its floor.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadric::{euler_characteristic, slope, ChernCharacter};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremTag {
    General,
    Unbalanced,
    Stratified,
    NonGg,
}

impl fmt::Display for TheoremTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TheoremTag::General => "general",
            TheoremTag::Unbalanced => "unbalanced",
            TheoremTag::Stratified => "stratified",
            TheoremTag::NonGg => "non-gg",
        })
    }
}

/// A bound value together with the intermediates that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub theorem: TheoremTag,
    pub bound: i64,
    pub aux: BTreeMap<String, Rational>,
}

impl BoundReport {
    fn new(theorem: TheoremTag, bound: i64) -> Self {
        BoundReport { theorem, bound, aux: BTreeMap::new() }
    }

    fn with(mut self, key: &str, value: impl Into<Rational>) -> Self {
        self.aux.insert(key.to_owned(), value.into());
        self
    }
}

fn require_positive_rank(r: i64) -> Result<()> {
    if r < 1 {
        return Err(Error::domain(format!("rank must be positive, got {r}")));
    }
    Ok(())
}

fn require_slope_at_least(mu: Rational, floor: Rational) -> Result<()> {
    if mu < floor {
        return Err(Error::domain(format!("slope {mu} is below {floor}")));
    }
    Ok(())
}

fn to_i64(v: i128, what: &'static str) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Overflow(what))
}

pub fn alpha(mu: Rational) -> Result<i64> {
    require_slope_at_least(mu, Rational::from(-1))?;
    to_i64(mu.floor() + 1, "alpha")
}

/// β_{r,μ} without the integrality requirement on 2rμ.
pub fn beta_relaxed(r: i64, mu: Rational) -> Result<Rational> {
    require_positive_rank(r)?;
    let a = Rational::from(alpha(mu)?);
    let two = Rational::from(2);
    let inner = two.checked_mul(mu)?.checked_sub(a)?.checked_add(two)?;
    Rational::from(r).checked_mul(a)?.checked_mul(inner)
}

pub fn beta(r: i64, mu: Rational) -> Result<i64> {
    require_positive_rank(r)?;
    let twice = Rational::from(2 * r).checked_mul(mu)?;
    if !twice.is_integer() {
        return Err(Error::precondition(format!("2·r·μ = {twice} is not an integer (r = {r}, μ = {mu})")));
    }
    let value = beta_relaxed(r, mu)?;
    let v = value.to_integer().expect("integral when 2rμ is");
    to_i64(v, "beta")
}

/// h⁰(E) ≤ β_{r, μ_max(E)}.
pub fn general_bound(r: i64, mu_max: Rational) -> Result<BoundReport> {
    let bound = beta(r, mu_max)?;
    Ok(BoundReport::new(TheoremTag::General, bound)
        .with("r", r)
        .with("mu_max", mu_max)
        .with("alpha", alpha(mu_max)?))
}

fn check_oriented(r: i64, a: i64, b: i64) -> Result<i64> {
    require_positive_rank(r)?;
    if a < 0 || a > b {
        return Err(Error::domain(format!("need 0 <= a <= b, got (a,b) = ({a},{b})")));
    }
    Ok((b - a).div_euclid(r))
}

/// μ″_ℓ = (a+b)/2r − (ℓ+1)/2.
pub fn mu_double_prime(r: i64, a: i64, b: i64, l: i64) -> Result<Rational> {
    Rational::new((a + b) as i128, 2 * r as i128)?.checked_sub(Rational::new((l + 1) as i128, 2)?)
}

/// θ_ℓ = β_{r,μ″_ℓ} + (ℓ+1)(r+a).
pub fn theta(r: i64, a: i64, b: i64, l: i64) -> Result<i64> {
    let top = check_oriented(r, a, b)?;
    if l < 0 || l > top {
        return Err(Error::domain(format!("ℓ = {l} outside [0, {top}]")));
    }
    let mu = mu_double_prime(r, a, b, l)?;
    Ok(beta(r, mu)? + (l + 1) * (r + a))
}

/// True when the strict decrease θ_ℓ < θ_{ℓ−1} is not guaranteed.
pub fn theta_exception(r: i64, a: i64, b: i64, l: i64) -> Result<bool> {
    let top = check_oriented(r, a, b)?;
    if l == 0 {
        return Err(Error::domain("θ_0 has no predecessor"));
    }
    if l < 1 || l > top {
        return Err(Error::domain(format!("ℓ = {l} outside [1, {top}]")));
    }
    if l == top {
        return Ok(true);
    }
    let same_floor = mu_double_prime(r, a, b, l - 1)?.floor() == mu_double_prime(r, a, b, l)?.floor();
    Ok(l == top - 1 && same_floor)
}

/// Unbalanced bound for a semistable sheaf, where μ_max is the slope (a+b)/2r.
pub fn unbalanced_bound(r: i64, a: i64, b: i64, j: i64) -> Result<BoundReport> {
    require_positive_rank(r)?;
    let mu = Rational::new((a + b) as i128, 2 * r as i128)?;
    unbalanced_bound_with_mu_max(r, a, b, j, mu)
}

/// min{β_{r,μ″+1/2} + j(r+a), β_{r,μ″} + (j+1)(r+a)} with μ″ = μ_max − (j+1)/2.
///
/// `j` is the twist index: the largest `j ≤ ⌊(b−a)/r⌋` with E(0,−j) generically
/// globally generated. c₁ = (a,b) must be oriented so that a ≤ b.
pub fn unbalanced_bound_with_mu_max(r: i64, a: i64, b: i64, j: i64, mu_max: Rational) -> Result<BoundReport> {
    let top = check_oriented(r, a, b)?;
    if j < 0 || j > top {
        return Err(Error::domain(format!("twist index j = {j} outside [0, {top}]")));
    }
    let mu2 = mu_max.checked_sub(Rational::new((j + 1) as i128, 2)?)?;
    require_slope_at_least(mu2, Rational::from(-1))?;
    let upper = beta(r, mu2.checked_add(Rational::new(1, 2)?)?)? + j * (r + a);
    let lower = beta(r, mu2)? + (j + 1) * (r + a);
    Ok(BoundReport::new(TheoremTag::Unbalanced, upper.min(lower))
        .with("r", r)
        .with("a", a)
        .with("b", b)
        .with("j", j)
        .with("mu_max", mu_max)
        .with("mu_double_prime", mu2)
        .with("branch_twist_j", upper)
        .with("branch_twist_j_plus_1", lower))
}

/// Largest value ⌊μ·d⌋/d over d ∈ {2, 4, …, 2s}, clamped below at `floor_bound`.
pub fn best_representable_slope(mu_cap: Rational, s: i64, floor_bound: Rational) -> Result<Rational> {
    require_positive_rank(s)?;
    if floor_bound != Rational::ZERO && floor_bound != Rational::from(-1) {
        return Err(Error::domain(format!("floor bound must be 0 or -1, got {floor_bound}")));
    }
    if mu_cap < floor_bound {
        return Err(Error::domain(format!("no representable slope in [{floor_bound}, {mu_cap}]")));
    }
    let mut best = floor_bound;
    for d in (1..=s).map(|t| 2 * t as i128) {
        let cand = Rational::new(mu_cap.checked_mul(Rational::from_integer(d))?.floor(), d)?;
        best = best.max(cand);
    }
    Ok(best)
}

fn floored_beta(s: i64, mu: Rational) -> Result<(i64, Rational)> {
    let value = beta_relaxed(s, mu)?;
    Ok((to_i64(value.floor(), "beta")?, value))
}

/// h⁰(E) ≤ β_{rk S, μ′} where S is the image of the evaluation map.
pub fn stratified_bound(s: i64, mu_max: Rational) -> Result<BoundReport> {
    require_slope_at_least(mu_max, Rational::ZERO)?;
    let mu1 = best_representable_slope(mu_max, s, Rational::ZERO)?;
    let (bound, exact) = floored_beta(s, mu1)?;
    Ok(BoundReport::new(TheoremTag::Stratified, bound)
        .with("s", s)
        .with("mu_max", mu_max)
        .with("mu_prime", mu1)
        .with("beta_exact", exact))
}

/// h⁰(E) ≤ β_{r−1, μ′} for sheaves that are not generically globally generated.
pub fn non_gg_bound(r: i64, mu_max: Rational) -> Result<BoundReport> {
    if r < 2 {
        return Err(Error::domain(format!("non-gg bound needs rank >= 2, got {r}")));
    }
    let mu1 = best_representable_slope(mu_max, r - 1, Rational::from(-1))?;
    let (bound, exact) = floored_beta(r - 1, mu1)?;
    Ok(BoundReport::new(TheoremTag::NonGg, bound)
        .with("r", r)
        .with("mu_max", mu_max)
        .with("mu_prime", mu1)
        .with("beta_exact", exact))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BnDecision {
    AllOfModuli,
    Empty,
    Indeterminate,
}

impl fmt::Display for BnDecision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BnDecision::AllOfModuli => "AllOfModuli",
            BnDecision::Empty => "Empty",
            BnDecision::Indeterminate => "Indeterminate",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BnReport {
    pub decision: BnDecision,
    pub beta: i64,
    pub chi: i64,
    pub k: i64,
}

/// Decides the Brill-Noether locus B^k in the moduli space of the character.
///
/// Empty whenever k exceeds β. For slope ≥ 0: when χ = β every B^k with k ≤ β is
/// the whole space; when χ ≠ β, B^β is empty. Anything else is left undecided.
pub fn bn_locus_decision(ch: &ChernCharacter, k: i64) -> Result<BnReport> {
    if k < 0 {
        return Err(Error::domain(format!("k must be non-negative, got {k}")));
    }
    let mu = slope(ch)?;
    let chi = euler_characteristic(ch)?;
    let beta = beta(ch.rank, mu)?;
    let nonneg = mu >= Rational::ZERO;
    let decision = if k > beta {
        BnDecision::Empty
    } else if nonneg && chi == beta {
        BnDecision::AllOfModuli
    } else if nonneg && k == beta {
        BnDecision::Empty
    } else {
        BnDecision::Indeterminate
    };
    Ok(BnReport { decision, beta, chi, k })
}

/// δ = β_{r,μ} − h⁰. Signed; only semistable inputs are guaranteed δ ≥ 0.
pub fn deficiency(ch: &ChernCharacter, h0: i64) -> Result<i64> {
    let mu = slope(ch)?;
    Ok(beta(ch.rank, mu)? - h0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadric::BiDegree;
    use crate::rational::q;

    /// Definition evaluated with floating-point floor and multiplication, as an independent check.
    fn beta_f64(r: i64, mu: f64) -> f64 {
        let a = mu.floor() + 1.0;
        r as f64 * a * (2.0 * mu - a + 2.0)
    }

    #[test]
    fn alpha_values() {
        assert_eq!(alpha(Rational::ZERO).unwrap(), 1);
        assert_eq!(alpha(q(7, 6)).unwrap(), 2);
        assert_eq!(alpha(q(-1, 1)).unwrap(), 0);
        assert_eq!(alpha(q(-1, 2)).unwrap(), 0);
        assert!(matches!(alpha(q(-3, 2)), Err(Error::Domain(_))));
    }

    #[test]
    fn beta_values() {
        assert_eq!(beta(1, q(1, 1)).unwrap(), 4);
        assert_eq!(beta(2, q(1, 2)).unwrap(), 4);
        assert_eq!(beta(5, q(-1, 1)).unwrap(), 0);
        assert_eq!(beta(3, q(7, 6)).unwrap(), 14);
        assert!(matches!(beta(3, q(1, 4)), Err(Error::Precondition(_))));
        assert!(matches!(beta(3, q(-2, 1)), Err(Error::Domain(_))));
        assert!(matches!(beta(0, q(1, 1)), Err(Error::Domain(_))));
        assert_eq!(beta_relaxed(3, q(1, 4)).unwrap(), q(9, 2));
    }

    #[test]
    fn beta_integrality_and_lower_bound() {
        for r in 1..=6 {
            for p in -2 * r..=8 * r {
                let mu = q(p as i128, 2 * r as i128);
                let b = beta(r, mu).unwrap();
                let a = alpha(mu).unwrap();
                assert!(b >= r * a * a, "r={r} mu={mu}");
                assert!((b as f64 - beta_f64(r, p as f64 / (2 * r) as f64)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn balanced_table() {
        for r in 1..=4 {
            for m in 0..=4 {
                assert_eq!(beta(r, Rational::from(m)).unwrap(), r * (m + 1) * (m + 1));
                assert_eq!(beta(r, q(2 * m as i128 + 1, 2)).unwrap(), r * (m + 1) * (m + 2));
            }
        }
    }

    #[test]
    fn general_bounds() {
        assert_eq!(general_bound(1, q(1, 1)).unwrap().bound, 4);
        assert_eq!(general_bound(1, q(-1, 1)).unwrap().bound, 0);
        let rep = general_bound(2, q(1, 2)).unwrap();
        assert_eq!(rep.bound, 4);
        assert_eq!(rep.theorem, TheoremTag::General);
        assert_eq!(rep.aux["alpha"], Rational::ONE);
    }

    #[test]
    fn theta_values() {
        assert_eq!(theta(1, 0, 5, 0).unwrap(), 10);
        assert_eq!(theta(1, 0, 5, 1).unwrap(), 8);
        assert_eq!(theta(1, 0, 2, 2).unwrap(), 3);
        assert!(theta(1, 0, 2, 3).is_err());
        assert!(theta(1, 3, 2, 0).is_err());
        assert!(theta(1, -1, 2, 0).is_err());
    }

    #[test]
    fn unbalanced_values() {
        assert_eq!(unbalanced_bound(1, 2, 2, 0).unwrap().bound, 9);
        let rep = unbalanced_bound(1, 1, 3, 2).unwrap();
        assert_eq!(rep.bound, 8);
        assert_eq!(rep.aux["branch_twist_j"], Rational::from(8));
        assert_eq!(rep.aux["branch_twist_j_plus_1"], Rational::from(8));
        assert_eq!(rep.aux["mu_double_prime"], q(1, 2));
        assert_eq!(unbalanced_bound(1, 0, 2, 2).unwrap().bound, 3);
        assert!(unbalanced_bound(1, 0, 2, 3).is_err());
    }

    #[test]
    fn unbalanced_branches_are_consecutive_thetas() {
        for r in 1..=3 {
            for a in 0..=5 {
                for b in a..=9 {
                    for j in 1..=(b - a) / r {
                        let rep = unbalanced_bound(r, a, b, j).unwrap();
                        assert_eq!(rep.aux["branch_twist_j"], Rational::from(theta(r, a, b, j - 1).unwrap()));
                        assert_eq!(rep.aux["branch_twist_j_plus_1"], Rational::from(theta(r, a, b, j).unwrap()));
                    }
                }
            }
        }
    }

    #[test]
    fn theta_exceptions() {
        assert!(!theta_exception(1, 0, 5, 1).unwrap());
        assert!(theta_exception(1, 0, 2, 2).unwrap());
        assert!(theta_exception(1, 0, 2, 1).unwrap());
        assert!(matches!(theta_exception(1, 0, 2, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn theta_decreases_outside_exceptions() {
        for r in 1..=4 {
            for a in 0..=10 {
                for b in a..=10 {
                    for l in 1..=(b - a) / r {
                        if !theta_exception(r, a, b, l).unwrap() {
                            assert!(theta(r, a, b, l).unwrap() < theta(r, a, b, l - 1).unwrap(), "{r} {a} {b} {l}");
                        }
                    }
                }
            }
        }
    }

    /// Exhaustive oracle: scan every fraction p/d with d in the allowed set.
    fn best_by_scan(mu_cap: Rational, s: i64, floor_bound: Rational) -> Rational {
        let mut best = floor_bound;
        for d in (1..=s).map(|t| 2 * t as i128) {
            let mut p = floor_bound.floor() * d - 1;
            while q(p + 1, d) <= mu_cap {
                p += 1;
            }
            if q(p, d) >= floor_bound && q(p, d) > best {
                best = q(p, d);
            }
        }
        best
    }

    #[test]
    fn representable_slopes() {
        assert_eq!(best_representable_slope(q(7, 6), 2, Rational::ZERO).unwrap(), Rational::ONE);
        assert_eq!(best_representable_slope(q(5, 4), 2, Rational::ZERO).unwrap(), q(5, 4));
        assert_eq!(best_representable_slope(q(1, 3), 1, Rational::ZERO).unwrap(), Rational::ZERO);
        assert!(best_representable_slope(q(-1, 2), 2, Rational::ZERO).is_err());
        assert!(best_representable_slope(q(1, 2), 2, q(1, 2)).is_err());
        for s in 1..=5 {
            for p in -12..=40 {
                let mu = q(p, 7);
                for fb in [Rational::ZERO, Rational::from(-1)] {
                    if mu < fb {
                        continue;
                    }
                    let got = best_representable_slope(mu, s, fb).unwrap();
                    assert_eq!(got, best_by_scan(mu, s, fb), "mu={mu} s={s}");
                    assert!(fb <= got && got <= mu);
                    if fb == Rational::ZERO {
                        assert_eq!(got.floor(), mu.floor());
                    }
                }
            }
        }
    }

    #[test]
    fn stratified_and_non_gg() {
        assert_eq!(stratified_bound(2, q(7, 6)).unwrap().bound, 8);
        assert_eq!(stratified_bound(1, Rational::ZERO).unwrap().bound, 1);
        assert_eq!(stratified_bound(3, q(7, 6)).unwrap().bound, 14);
        assert!(stratified_bound(1, q(-1, 2)).is_err());
        assert_eq!(non_gg_bound(2, q(1, 2)).unwrap().bound, 2);
        assert_eq!(non_gg_bound(2, q(-1, 1)).unwrap().bound, 0);
        let rep = non_gg_bound(4, q(7, 6)).unwrap();
        assert_eq!(rep.bound, 14);
        assert_eq!(rep.aux["mu_prime"], q(7, 6));
        assert!(matches!(non_gg_bound(1, q(1, 1)), Err(Error::Domain(_))));
    }

    #[test]
    fn stratified_floor_of_non_integral_beta() {
        // s = 3 with μ′ = 1/4 gives β = 9/2
        let rep = stratified_bound(3, q(27, 100)).unwrap();
        assert_eq!(rep.aux["mu_prime"], q(1, 4));
        assert_eq!(rep.aux["beta_exact"], q(9, 2));
        assert_eq!(rep.bound, 4);
    }

    #[test]
    fn bn_decisions() {
        let steiner = ChernCharacter::new(3, BiDegree::new(4, 3), Rational::from(4)).unwrap();
        assert_eq!(bn_locus_decision(&steiner, 14).unwrap().decision, BnDecision::AllOfModuli);
        assert_eq!(bn_locus_decision(&steiner, 15).unwrap().decision, BnDecision::Empty);
        let ideal = ChernCharacter::from_chi(1, BiDegree::new(1, 1), 0).unwrap();
        assert_eq!(bn_locus_decision(&ideal, 4).unwrap().decision, BnDecision::Empty);
        assert_eq!(bn_locus_decision(&ideal, 3).unwrap().decision, BnDecision::Indeterminate);
        let negative = ChernCharacter::from_chi(2, BiDegree::new(-1, 0), 0).unwrap();
        assert_eq!(bn_locus_decision(&negative, 1).unwrap().decision, BnDecision::Empty);
        assert_eq!(bn_locus_decision(&negative, 0).unwrap().decision, BnDecision::Indeterminate);
        let half = ChernCharacter::new(1, BiDegree::new(0, 0), q(1, 2)).unwrap();
        assert!(bn_locus_decision(&half, 0).is_err());
    }

    #[test]
    fn deficiencies() {
        let ideal = ChernCharacter::from_chi(1, BiDegree::new(1, 1), 0).unwrap();
        assert_eq!(deficiency(&ideal, 0).unwrap(), 4);
        let steiner = ChernCharacter::new(3, BiDegree::new(4, 3), Rational::from(4)).unwrap();
        assert_eq!(deficiency(&steiner, 14).unwrap(), 0);
        assert_eq!(deficiency(&ChernCharacter::line_bundle(0, 0), 1).unwrap(), 0);
        assert_eq!(deficiency(&ChernCharacter::line_bundle(0, 0), 3).unwrap(), -2);
    }
}
