//! Assumption-free cohomology for sheaves we can write down explicitly.
//!
//! Three families are modeled: direct sums of line bundles (Künneth),
//! twisted ideal sheaves of reduced points (evaluation-matrix rank), and
//! Steiner-like cokernels of seeded random matrices of forms (rank of the
//! induced map on global sections).

mod audit;
mod points;
mod steiner_sample;

use serde::Serialize;

pub use audit::{model_bound_audit, AuditRecord, BoundCheck};
pub use points::{
    evaluation_matrix, ideal_sheaf_cohomology, ideal_sheaf_h0, parse_point_file, random_points, PointOnQuadric,
};
pub use steiner_sample::{
    steiner_h0_random, steiner_h0_with_forms, GenericityReport, SteinerForms, SteinerSample, MAX_ATTEMPTS,
    POINTWISE_CHECKS,
};

use crate::error::{Error, Result};
use crate::quadric::{BiDegree, ChernCharacter};
use crate::rational::Rational;
use crate::steiner::steiner_character;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CohomologyTable {
    pub h0: i64,
    pub h1: i64,
    pub h2: i64,
    pub chi: i64,
}

impl CohomologyTable {
    pub fn new(h0: i64, h1: i64, h2: i64) -> Self {
        CohomologyTable { h0, h1, h2, chi: h0 - h1 + h2 }
    }

    pub fn get(&self, i: usize) -> i64 {
        [self.h0, self.h1, self.h2][i]
    }

    pub fn is_consistent(&self) -> bool {
        self.chi == self.h0 - self.h1 + self.h2
    }
}

impl std::ops::Add for CohomologyTable {
    type Output = CohomologyTable;
    fn add(self, o: CohomologyTable) -> CohomologyTable {
        CohomologyTable::new(self.h0 + o.h0, self.h1 + o.h1, self.h2 + o.h2)
    }
}

fn h0_p1(n: i64) -> i64 {
    (n + 1).max(0)
}

fn h1_p1(n: i64) -> i64 {
    (-n - 1).max(0)
}

/// Künneth: hᵏ(O(a,b)) = Σ_{i+j=k} hⁱ(O(a))·hʲ(O(b)).
pub fn line_bundle_cohomology(a: i64, b: i64) -> CohomologyTable {
    CohomologyTable::new(
        h0_p1(a) * h0_p1(b),
        h0_p1(a) * h1_p1(b) + h1_p1(a) * h0_p1(b),
        h1_p1(a) * h1_p1(b),
    )
}

/// Exponents (i, j) of x0^i x1^(a−i) y0^j y1^(b−j), lexicographic.
pub fn monomial_basis(a: i64, b: i64) -> Result<Vec<(i64, i64)>> {
    if a < 0 || b < 0 {
        return Err(Error::domain(format!("monomial basis of negative bidegree ({a},{b})")));
    }
    Ok((0..=a).flat_map(|i| (0..=b).map(move |j| (i, j))).collect())
}

/// How the maps of a Steiner-like model are chosen.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SteinerSource {
    Seed(u64),
    Forms(SteinerForms),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SheafModel {
    /// ⊕ O(a,b)^mult.
    DirectSum(Vec<(BiDegree, i64)>),
    /// I_Z(a,b) for a reduced set of points Z.
    IdealSheafTwist { points: Vec<PointOnQuadric>, twist: BiDegree },
    /// coker(O(k−1,l)^m ⊕ O(k,l−1)^n → O(k,l)^{r+m+n}).
    SteinerLike { k: i64, l: i64, r: i64, m: i64, n: i64, source: SteinerSource },
}

impl SheafModel {
    pub fn direct_sum(summands: &[(i64, i64, i64)]) -> Self {
        SheafModel::DirectSum(summands.iter().map(|&(a, b, mult)| (BiDegree::new(a, b), mult)).collect())
    }

    pub fn steiner(k: i64, l: i64, r: i64, m: i64, n: i64, seed: u64) -> Self {
        SheafModel::SteinerLike { k, l, r, m, n, source: SteinerSource::Seed(seed) }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SheafModel::DirectSum(parts) => {
                if parts.is_empty() {
                    return Err(Error::domain("empty direct sum"));
                }
                if let Some((d, mult)) = parts.iter().find(|(_, mult)| *mult < 1) {
                    return Err(Error::domain(format!("summand {d} has multiplicity {mult}")));
                }
                Ok(())
            }
            SheafModel::IdealSheafTwist { points, .. } => points::check_distinct(points),
            SheafModel::SteinerLike { k, l, r, m, n, .. } => steiner_character(*k, *l, *r, *m, *n).map(|_| ()),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            SheafModel::DirectSum(parts) => {
                let terms: Vec<String> = parts
                    .iter()
                    .map(|(d, mult)| if *mult == 1 { format!("O{d}") } else { format!("O{d}^{mult}") })
                    .collect();
                terms.join(" + ")
            }
            SheafModel::IdealSheafTwist { points, twist } => format!("I_Z{twist}, |Z| = {}", points.len()),
            SheafModel::SteinerLike { k, l, r, m, n, source } => {
                let src = match source {
                    SteinerSource::Seed(s) => format!("seed {s}"),
                    SteinerSource::Forms(_) => "explicit forms".to_owned(),
                };
                format!("Steiner(k={k}, l={l}, r={r}, m={m}, n={n}; {src})")
            }
        }
    }
}

pub fn model_character(model: &SheafModel) -> Result<ChernCharacter> {
    model.validate()?;
    match model {
        SheafModel::DirectSum(parts) => Ok(parts.iter().fold(ChernCharacter::zero(), |acc, (d, mult)| {
            acc + ChernCharacter::line_bundle(d.a, d.b).scale(*mult)
        })),
        SheafModel::IdealSheafTwist { points, twist } => {
            let lb = ChernCharacter::line_bundle(twist.a, twist.b);
            Ok(ChernCharacter { ch2: lb.ch2 - Rational::from(points.len() as i64), ..lb })
        }
        SheafModel::SteinerLike { k, l, r, m, n, .. } => steiner_character(*k, *l, *r, *m, *n),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MuExtremes {
    pub mu_min: Rational,
    pub mu_max: Rational,
    /// Set when the values rest on assumed semistability rather than computation.
    pub assumed: bool,
}

/// Extreme Harder-Narasimhan slopes. Exact for direct sums and for rank-one
/// ideal sheaves; for Steiner models the slope is returned with `assumed` set.
pub fn model_mu_extremes(model: &SheafModel) -> Result<MuExtremes> {
    model.validate()?;
    match model {
        SheafModel::DirectSum(parts) => {
            let slopes = parts.iter().map(|(d, _)| Rational::new((d.a + d.b) as i128, 2).expect("den 2"));
            let mu_min = slopes.clone().min().expect("nonempty");
            let mu_max = slopes.max().expect("nonempty");
            Ok(MuExtremes { mu_min, mu_max, assumed: false })
        }
        SheafModel::IdealSheafTwist { .. } => {
            let mu = model_character(model)?.slope()?;
            Ok(MuExtremes { mu_min: mu, mu_max: mu, assumed: false })
        }
        SheafModel::SteinerLike { .. } => {
            let mu = model_character(model)?.slope()?;
            Ok(MuExtremes { mu_min: mu, mu_max: mu, assumed: true })
        }
    }
}

pub fn direct_sum_cohomology(parts: &[(BiDegree, i64)]) -> Result<CohomologyTable> {
    SheafModel::DirectSum(parts.to_vec()).validate()?;
    Ok(parts.iter().fold(CohomologyTable::new(0, 0, 0), |acc, (d, mult)| {
        let t = line_bundle_cohomology(d.a, d.b);
        acc + CohomologyTable::new(mult * t.h0, mult * t.h1, mult * t.h2)
    }))
}

/// Largest j ≤ ⌊(b−a)/r⌋ with the sum twisted by (0,−j) still generically
/// globally generated. A sum of line bundles stays so exactly while every
/// summand is effective, so j is capped by the smallest second degree.
pub fn twist_index_j(parts: &[(BiDegree, i64)]) -> Result<i64> {
    SheafModel::DirectSum(parts.to_vec()).validate()?;
    if let Some((d, _)) = parts.iter().find(|(d, _)| d.a < 0 || d.b < 0) {
        return Err(Error::domain(format!("summand O{d} is not globally generated")));
    }
    let r: i64 = parts.iter().map(|(_, mult)| mult).sum();
    let total = parts.iter().fold(BiDegree::default(), |acc, (d, mult)| acc + d.scale(*mult));
    if total.a > total.b {
        return Err(Error::domain(format!("orientation requires a <= b, got c1 = {total}; flip first")));
    }
    let min_b = parts.iter().map(|(d, _)| d.b).min().expect("nonempty");
    Ok(min_b.min((total.b - total.a).div_euclid(r)))
}

/// Exchanges the factors of every summand.
pub fn flip_direct_sum(parts: &[(BiDegree, i64)]) -> Vec<(BiDegree, i64)> {
    parts.iter().map(|(d, mult)| (d.flip(), *mult)).collect()
}

/// Full cohomology table of a model.
pub fn model_cohomology(model: &SheafModel) -> Result<CohomologyTable> {
    model.validate()?;
    match model {
        SheafModel::DirectSum(parts) => direct_sum_cohomology(parts),
        SheafModel::IdealSheafTwist { points, twist } => ideal_sheaf_cohomology(points, twist.a, twist.b),
        SheafModel::SteinerLike { k, l, r, m, n, source } => {
            let sample = match source {
                SteinerSource::Seed(seed) => steiner_h0_random(*k, *l, *r, *m, *n, *seed)?,
                SteinerSource::Forms(forms) => steiner_h0_with_forms(*k, *l, forms)?,
            };
            // the resolution's terms have no h² when k, l ≥ 0
            Ok(CohomologyTable::new(sample.h0, sample.h1, 0))
        }
    }
}
