//! Twisted Steiner-like characters and the structure of maximal characters.
//!
//! A twisted Steiner-like sheaf is the cokernel of a general map
//!
//! ```text
//! O(k−1, l)^m ⊕ O(k, l−1)^n → O(k, l)^{r+m+n}
//! ```
//!
//! with `m + n < 2r`. It is balanced when `k = l`. Balanced ones with `k ≥ 0`
//! have `h⁰ = χ = β_{r,μ}` and are exactly the semistable sheaves of slope
//! `μ ≥ 0` attaining the general bound.

use serde::Serialize;

use crate::bounds::{alpha, beta};
use crate::error::{Error, Result};
use crate::quadric::{euler_characteristic, slope, BiDegree, ChernCharacter};
use crate::rational::Rational;

fn check_params(r: i64, m: i64, n: i64) -> Result<()> {
    if r < 1 {
        return Err(Error::domain(format!("Steiner rank must be positive, got {r}")));
    }
    if m < 0 || n < 0 {
        return Err(Error::domain(format!("m, n must be non-negative, got ({m},{n})")));
    }
    if m + n >= 2 * r {
        return Err(Error::domain(format!("need m + n < 2r, got m + n = {} with r = {r}", m + n)));
    }
    Ok(())
}

/// Character of the cokernel, by additivity over the resolution.
pub fn steiner_character(k: i64, l: i64, r: i64, m: i64, n: i64) -> Result<ChernCharacter> {
    check_params(r, m, n)?;
    let target = ChernCharacter::line_bundle(k, l).scale(r + m + n);
    let source = ChernCharacter::line_bundle(k - 1, l).scale(m) + ChernCharacter::line_bundle(k, l - 1).scale(n);
    Ok(target - source)
}

/// h⁰ of the twisted Steiner-like sheaf with `0 ≤ k ≤ l`, from its resolution.
///
/// Both kernel line bundles have vanishing higher cohomology there, so
/// `h⁰ = (r+m+n)(k+1)(l+1) − m·k(l+1) − n(k+1)l`. With `ℓ = l − k` this equals
/// `β_{r,μ(S)} + ℓ(r + rk + m)` where `S` is the balanced sheaf it twists.
pub fn twisted_steiner_h0_formula(k: i64, l: i64, r: i64, m: i64, n: i64) -> Result<i64> {
    check_params(r, m, n)?;
    if k < 0 || l < k {
        return Err(Error::domain(format!("need 0 <= k <= l, got k = {k}, l = {l}")));
    }
    Ok((r + m + n) * (k + 1) * (l + 1) - m * k * (l + 1) - n * (k + 1) * l)
}

/// The closed form `β_{r,μ′} + ℓ(r + rk + m)` for `E = S(0,ℓ)`, `S` balanced of level `k`.
///
/// Requires the orientation `0 ≤ n − m < r`, under which ℓ is the twist index of `E`.
pub fn twisted_steiner_h0_closed_form(k: i64, l: i64, r: i64, m: i64, n: i64) -> Result<i64> {
    check_params(r, m, n)?;
    if k < 0 || l < k {
        return Err(Error::domain(format!("need 0 <= k <= l, got k = {k}, l = {l}")));
    }
    if !(0..r).contains(&(n - m)) {
        return Err(Error::domain(format!("need 0 <= n - m < r, got n - m = {}", n - m)));
    }
    let shift = l - k;
    let balanced = steiner_character(k, k, r, m, n)?;
    Ok(beta(r, slope(&balanced)?)? + shift * (r + r * k + m))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MaximalStructure {
    pub rank: i64,
    /// Twist level α − 1.
    pub k: i64,
    pub m: i64,
    pub n: i64,
    /// Exponents of O(k−1,k)^m ⊕ O(k,k−1)^n → O(k,k)^{r+m+n}.
    pub short_resolution: (i64, i64, i64),
    /// Exponents (e₀, e₁ᵃ, e₁ᵇ, e₂) of
    /// O(−1,−1)^{e₀} → O(−1,0)^{e₁ᵃ} ⊕ O(0,−1)^{e₁ᵇ} → O^{e₂}.
    pub long_resolution: (i64, i64, i64, i64),
}

impl MaximalStructure {
    /// Alternating sum of the long resolution's terms.
    pub fn long_resolution_character(&self) -> ChernCharacter {
        let (e0, e1a, e1b, e2) = self.long_resolution;
        ChernCharacter::line_bundle(0, 0).scale(e2)
            - (ChernCharacter::line_bundle(-1, 0).scale(e1a) + ChernCharacter::line_bundle(0, -1).scale(e1b))
            + ChernCharacter::line_bundle(-1, -1).scale(e0)
    }

    /// Alternating sum of the short resolution's terms.
    pub fn short_resolution_character(&self) -> ChernCharacter {
        let (m, n, total) = self.short_resolution;
        let k = self.k;
        ChernCharacter::line_bundle(k, k).scale(total)
            - (ChernCharacter::line_bundle(k - 1, k).scale(m) + ChernCharacter::line_bundle(k, k - 1).scale(n))
    }

    /// Rank, c₁ and χ of both resolutions agree with `ch`.
    pub fn audit(&self, ch: &ChernCharacter) -> Result<bool> {
        let chi = euler_characteristic(ch)?;
        let mut ok = true;
        for res in [self.long_resolution_character(), self.short_resolution_character()] {
            ok &= res.rank == ch.rank && res.c1 == ch.c1 && euler_characteristic(&res)? == chi;
        }
        Ok(ok)
    }
}

/// Recovers the Steiner data of a character that can be maximal, or `None`.
///
/// With α = ⌊μ⌋ + 1, a maximal character must have c₁ = r(α−1, α−1) + (m, n)
/// with m, n ≥ 0, m + n < 2r, and χ = β_{r,μ}.
pub fn maximal_structure_check(ch: &ChernCharacter) -> Result<Option<MaximalStructure>> {
    let mu = slope(ch)?;
    if mu < Rational::ZERO {
        return Err(Error::domain(format!("maximal structure needs slope >= 0, got {mu}")));
    }
    let chi = euler_characteristic(ch)?;
    let r = ch.rank;
    let a = alpha(mu)?;
    let k = a - 1;
    let BiDegree { a: m, b: n } = ch.c1 - BiDegree::new(r * k, r * k);
    let b_top = beta(r, mu)?;
    if m < 0 || n < 0 || m + n >= 2 * r || chi != b_top {
        return Ok(None);
    }
    let e0 = beta(r, mu - Rational::ONE)?;
    let shift = r * k + e0;
    Ok(Some(MaximalStructure {
        rank: r,
        k,
        m,
        n,
        short_resolution: (m, n, r + m + n),
        long_resolution: (e0, m + shift, n + shift, b_top),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadric::twist;

    fn ch(r: i64, a: i64, b: i64, ch2: i64) -> ChernCharacter {
        ChernCharacter::new(r, BiDegree::new(a, b), Rational::from(ch2)).unwrap()
    }

    #[test]
    fn characters() {
        assert_eq!(steiner_character(1, 1, 3, 1, 0).unwrap(), ch(3, 4, 3, 4));
        assert_eq!(steiner_character(1, 1, 1, 0, 0).unwrap(), ch(1, 1, 1, 1));
        let c = steiner_character(0, 0, 2, 1, 1).unwrap();
        assert_eq!(c, ch(2, 1, 1, 0));
        assert_eq!(euler_characteristic(&c).unwrap(), 4);
        assert!(steiner_character(0, 0, 2, 2, 2).is_err());
        assert!(steiner_character(0, 0, 1, -1, 0).is_err());
    }

    #[test]
    fn twisting_the_resolution_twists_the_character() {
        for r in 1..=3 {
            for m in 0..2 * r {
                for n in 0..2 * r - m {
                    let base = steiner_character(0, 0, r, m, n).unwrap();
                    for (k, l) in [(1, 1), (2, 3), (-1, 2)] {
                        assert_eq!(steiner_character(k, l, r, m, n).unwrap(), twist(&base, k, l));
                    }
                }
            }
        }
    }

    #[test]
    fn h0_formula_values() {
        assert_eq!(twisted_steiner_h0_formula(1, 1, 3, 1, 0).unwrap(), 14);
        assert_eq!(twisted_steiner_h0_formula(0, 0, 1, 0, 0).unwrap(), 1);
        assert_eq!(twisted_steiner_h0_formula(1, 2, 3, 1, 0).unwrap(), 21);
        assert!(twisted_steiner_h0_formula(2, 1, 3, 1, 0).is_err());
        assert!(twisted_steiner_h0_formula(-1, 0, 3, 1, 0).is_err());
    }

    #[test]
    fn formula_matches_beta_and_closed_form() {
        for k in 0..=3 {
            for r in 1..=4 {
                for m in 0..2 * r {
                    for n in 0..2 * r - m {
                        let balanced = steiner_character(k, k, r, m, n).unwrap();
                        let b = beta(r, slope(&balanced).unwrap()).unwrap();
                        assert_eq!(twisted_steiner_h0_formula(k, k, r, m, n).unwrap(), b);
                        assert_eq!(euler_characteristic(&balanced).unwrap(), b);
                        for l in k..=k + 3 {
                            let direct = twisted_steiner_h0_formula(k, l, r, m, n).unwrap();
                            let chi = euler_characteristic(&steiner_character(k, l, r, m, n).unwrap()).unwrap();
                            assert_eq!(direct, chi);
                            if (0..r).contains(&(n - m)) {
                                assert_eq!(twisted_steiner_h0_closed_form(k, l, r, m, n).unwrap(), direct);
                            } else {
                                assert!(twisted_steiner_h0_closed_form(k, l, r, m, n).is_err());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn structure_examples() {
        let s = maximal_structure_check(&ch(3, 4, 3, 4)).unwrap().unwrap();
        assert_eq!((s.k, s.m, s.n), (1, 1, 0));
        assert_eq!(s.short_resolution, (1, 0, 4));
        assert_eq!(s.long_resolution, (4, 8, 7, 14));
        assert!(s.audit(&ch(3, 4, 3, 4)).unwrap());

        let o = maximal_structure_check(&ch(1, 0, 0, 0)).unwrap().unwrap();
        assert_eq!((o.k, o.m, o.n), (0, 0, 0));
        assert_eq!(o.short_resolution, (0, 0, 1));

        assert_eq!(maximal_structure_check(&ch(1, 0, 2, 0)).unwrap(), None);
        // right c₁ shape but χ ≠ β
        assert_eq!(maximal_structure_check(&ch(3, 4, 3, 3)).unwrap(), None);
        assert!(maximal_structure_check(&ch(1, -1, 0, 0)).is_err());
    }

    #[test]
    fn round_trip_and_audit() {
        for k in 0..=3 {
            for r in 1..=5 {
                for m in 0..2 * r {
                    for n in 0..2 * r - m {
                        let c = steiner_character(k, k, r, m, n).unwrap();
                        let s = maximal_structure_check(&c).unwrap().expect("maximal");
                        assert_eq!((s.k, s.m, s.n), (k, m, n));
                        assert_eq!(s.long_resolution_character().rank, r);
                        assert_eq!(s.long_resolution_character().c1, c.c1);
                        assert!(s.audit(&c).unwrap());
                        // ch₂ is additive as well
                        assert_eq!(s.long_resolution_character(), c);
                    }
                }
            }
        }
    }
}
