//! Numeric conditions for extensions 0 → S → E → Q → 0 that attain the
//! stratified bound without being generically globally generated, and an
//! exhaustive search for characters satisfying all of them.

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::best_representable_slope;
use crate::error::{Error, Result};
use crate::quadric::{anticanonical_pairing, euler_characteristic, slope, BiDegree, ChernCharacter};
use crate::rational::Rational;
use crate::steiner::steiner_character;

/// Balanced twisted Steiner-like data (k, r, m, n) for the subsheaf S.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SteinerParams {
    pub k: i64,
    pub r: i64,
    pub m: i64,
    pub n: i64,
}

impl SteinerParams {
    pub fn character(&self) -> Result<ChernCharacter> {
        steiner_character(self.k, self.k, self.r, self.m, self.n)
    }
}

pub const CONDITION_LABELS: [&str; 7] = [
    "S balanced twisted Steiner-like",
    "h0(Q) = 0 (proxy: chi(Q) <= 0, necessary only)",
    "mu(S) = best representable slope of mu(E)",
    "chi(Q) <= threshold",
    "c1(S).(-K)/rk(S) < c1(Q).(-K)/rk(Q)",
    "gcd(rk(S), c1(S).(-K)) = 1",
    "gcd(rk(Q), c1(Q).(-K)) = 1",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SharpnessReport {
    pub conditions: [bool; 7],
    pub passed: bool,
}

pub fn check_sharpness_conditions(s: SteinerParams, q: &ChernCharacter, chi_threshold: i64) -> Result<SharpnessReport> {
    let s_ch = s.character()?;
    if q.rank < 1 {
        return Err(Error::invalid_character(format!("quotient rank must be positive, got {}", q.rank)));
    }
    let q_chi = euler_characteristic(q)?;
    let e_ch = s_ch + *q;

    let e_slope = slope(&e_ch)?;
    let matches_best = e_slope >= Rational::ZERO
        && best_representable_slope(e_slope, s_ch.rank, Rational::ZERO)? == slope(&s_ch)?;

    let s_pair = anticanonical_pairing(&s_ch);
    let q_pair = anticanonical_pairing(q);
    let s_ratio = Rational::new(s_pair as i128, s_ch.rank as i128)?;
    let q_ratio = Rational::new(q_pair as i128, q.rank as i128)?;

    let conditions = [
        true,
        q_chi <= 0,
        matches_best,
        q_chi <= chi_threshold,
        s_ratio < q_ratio,
        s_ch.rank.gcd(&s_pair) == 1,
        q.rank.gcd(&q_pair) == 1,
    ];
    Ok(SharpnessReport { conditions, passed: conditions.iter().all(|&c| c) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Any,
    Even,
    Odd,
}

impl Parity {
    fn admits(self, v: i64) -> bool {
        match self {
            Parity::Any => true,
            Parity::Even => v % 2 == 0,
            Parity::Odd => v % 2 != 0,
        }
    }
}

/// Finite enumeration box for [`sharpness_search`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBox {
    /// Steiner level k ∈ [0, max_k].
    pub max_k: i64,
    /// rk(S) and rk(Q) range over [1, max_rank].
    pub max_rank: i64,
    /// Components of c₁(Q) range over [−max_c1, max_c1].
    pub max_c1: i64,
    /// χ(Q) ranges over [min_chi, 0].
    pub min_chi: i64,
    pub s_rank_parity: Parity,
}

impl SearchBox {
    pub fn new(max_k: i64, max_rank: i64, max_c1: i64) -> Self {
        SearchBox { max_k, max_rank, max_c1, min_chi: -10, s_rank_parity: Parity::Any }
    }

    fn validate(&self) -> Result<()> {
        if self.max_k < 0 || self.max_rank < 1 || self.max_c1 < 0 || self.min_chi > 0 {
            return Err(Error::domain(format!("empty search box {self:?}")));
        }
        Ok(())
    }

    fn steiner_params(&self) -> Vec<SteinerParams> {
        let mut out = Vec::new();
        for k in 0..=self.max_k {
            for r in (1..=self.max_rank).filter(|&r| self.s_rank_parity.admits(r)) {
                for m in 0..2 * r {
                    for n in 0..2 * r - m {
                        out.push(SteinerParams { k, r, m, n });
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub s: SteinerParams,
    pub s_character: ChernCharacter,
    pub q_rank: i64,
    pub q_c1: BiDegree,
    pub q_chi: i64,
    pub e_character: ChernCharacter,
    pub report: SharpnessReport,
}

impl Witness {
    fn sort_key(&self) -> (SteinerParams, i64, BiDegree, i64) {
        (self.s, self.q_rank, self.q_c1, self.q_chi)
    }
}

/// Every (S, Q) in the box passing all seven conditions, in lexicographic order
/// of (k, rk S, m, n, rk Q, c₁(Q), χ(Q)).
pub fn sharpness_search(bx: &SearchBox, chi_threshold: i64) -> Result<Vec<Witness>> {
    bx.validate()?;
    let mut witnesses: Vec<Witness> = bx
        .steiner_params()
        .into_par_iter()
        .map(|s| -> Result<Vec<Witness>> {
            let s_character = s.character()?;
            let mut found = Vec::new();
            for q_rank in 1..=bx.max_rank {
                for a in -bx.max_c1..=bx.max_c1 {
                    for b in -bx.max_c1..=bx.max_c1 {
                        for q_chi in bx.min_chi..=0 {
                            let q_c1 = BiDegree::new(a, b);
                            let q = ChernCharacter::from_chi(q_rank, q_c1, q_chi)?;
                            let report = check_sharpness_conditions(s, &q, chi_threshold)?;
                            if report.passed {
                                found.push(Witness {
                                    s,
                                    s_character,
                                    q_rank,
                                    q_c1,
                                    q_chi,
                                    e_character: s_character + q,
                                    report,
                                });
                            }
                        }
                    }
                }
            }
            Ok(found)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    witnesses.sort_by_key(Witness::sort_key);
    Ok(witnesses)
}
