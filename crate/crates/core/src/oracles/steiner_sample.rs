use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::points::random_point;
use crate::error::{Error, Result};
use crate::matrix::{rank, ExactMatrix};
use crate::rational::Rational;
use crate::steiner::steiner_character;

/// Resampling budget before a sample is declared non-generic.
pub const MAX_ATTEMPTS: u32 = 8;
/// Random points at which the sheaf map is checked for injectivity.
pub const POINTWISE_CHECKS: usize = 20;
const COEFF_BOUND: i64 = 9;
const PROBE_COORD_BOUND: i64 = 99;

/// The (r+m+n) × (m+n) matrix of forms: m columns of bidegree (1,0)
/// `c0·x0 + c1·x1`, then n columns of bidegree (0,1) `d0·y0 + d1·y1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SteinerForms {
    pub r: i64,
    pub m: i64,
    pub n: i64,
    /// Row-major, (r+m+n) × m.
    pub x_forms: Vec<[i64; 2]>,
    /// Row-major, (r+m+n) × n.
    pub y_forms: Vec<[i64; 2]>,
}

impl SteinerForms {
    pub fn random(r: i64, m: i64, n: i64, rng: &mut ChaCha8Rng) -> Self {
        let rows = (r + m + n) as usize;
        let mut coeff = || [rng.random_range(-COEFF_BOUND..=COEFF_BOUND), rng.random_range(-COEFF_BOUND..=COEFF_BOUND)];
        let x_forms = (0..rows * m as usize).map(|_| coeff()).collect();
        let y_forms = (0..rows * n as usize).map(|_| coeff()).collect();
        SteinerForms { r, m, n, x_forms, y_forms }
    }

    fn rows(&self) -> usize {
        (self.r + self.m + self.n) as usize
    }

    fn validate(&self) -> Result<()> {
        steiner_character(0, 0, self.r, self.m, self.n)?;
        let rows = self.rows();
        if self.x_forms.len() != rows * self.m as usize || self.y_forms.len() != rows * self.n as usize {
            return Err(Error::precondition("form matrix shape does not match (r, m, n)"));
        }
        Ok(())
    }

    fn x(&self, row: usize, col: usize) -> [i64; 2] {
        self.x_forms[row * self.m as usize + col]
    }

    fn y(&self, row: usize, col: usize) -> [i64; 2] {
        self.y_forms[row * self.n as usize + col]
    }

    /// The constant (r+m+n) × (m+n) matrix of the sheaf map at a point.
    fn evaluate_at(&self, x: (Rational, Rational), y: (Rational, Rational)) -> ExactMatrix {
        let (m, n) = (self.m as usize, self.n as usize);
        let mut out = ExactMatrix::zeros(self.rows(), m + n);
        for i in 0..self.rows() {
            for c in 0..m {
                let [c0, c1] = self.x(i, c);
                out.set(i, c, Rational::from(c0) * x.0 + Rational::from(c1) * x.1);
            }
            for c in 0..n {
                let [d0, d1] = self.y(i, c);
                out.set(i, m + c, Rational::from(d0) * y.0 + Rational::from(d1) * y.1);
            }
        }
        out
    }

    /// Induced map H⁰(O(k−1,l))^m ⊕ H⁰(O(k,l−1))^n → H⁰(O(k,l))^{r+m+n} in monomial bases.
    pub fn section_matrix(&self, k: i64, l: i64) -> ExactMatrix {
        let (k, l) = (k as usize, l as usize);
        let target = (k + 1) * (l + 1);
        let idx = |p: usize, q: usize| p * (l + 1) + q;
        let x_src = k * (l + 1);
        let y_src = (k + 1) * l;
        let cols = self.m as usize * x_src + self.n as usize * y_src;
        let mut out = ExactMatrix::zeros(self.rows() * target, cols);
        let mut col = 0;
        for c in 0..self.m as usize {
            for p in 0..k {
                for q in 0..=l {
                    for i in 0..self.rows() {
                        let [c0, c1] = self.x(i, c);
                        out.set(i * target + idx(p + 1, q), col, Rational::from(c0));
                        out.set(i * target + idx(p, q), col, Rational::from(c1));
                    }
                    col += 1;
                }
            }
        }
        for c in 0..self.n as usize {
            for p in 0..=k {
                for q in 0..l {
                    for i in 0..self.rows() {
                        let [d0, d1] = self.y(i, c);
                        out.set(i * target + idx(p, q + 1), col, Rational::from(d0));
                        out.set(i * target + idx(p, q), col, Rational::from(d1));
                    }
                    col += 1;
                }
            }
        }
        debug_assert_eq!(col, cols);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenericityReport {
    pub seed: u64,
    pub attempts: u32,
    pub source_dim: usize,
    pub target_dim: usize,
    pub section_rank: usize,
    pub pointwise_checks: usize,
    pub pointwise_full_rank: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SteinerSample {
    pub h0: i64,
    pub h1: i64,
    pub report: GenericityReport,
}

fn check_twist(k: i64, l: i64) -> Result<()> {
    if k < 0 || l < 0 {
        // outside k, l >= 0 the kernel terms can carry h¹ or h², so the rank no longer gives h⁰, h¹
        return Err(Error::domain(format!("Steiner oracle only defined for k, l >= 0, got ({k},{l})")));
    }
    Ok(())
}

fn evaluate(k: i64, l: i64, forms: &SteinerForms, probe: &mut ChaCha8Rng, seed: u64, attempts: u32) -> SteinerSample {
    let full = (forms.m + forms.n) as usize;
    let pointwise_full_rank = (0..POINTWISE_CHECKS).all(|_| {
        let p = random_point(probe, PROBE_COORD_BOUND);
        rank(&forms.evaluate_at(p.x, p.y)) == full
    });
    let mat = forms.section_matrix(k, l);
    let section_rank = rank(&mat);
    let (target_dim, source_dim) = (mat.rows(), mat.cols());
    SteinerSample {
        h0: (target_dim - section_rank) as i64,
        h1: (source_dim - section_rank) as i64,
        report: GenericityReport {
            seed,
            attempts,
            source_dim,
            target_dim,
            section_rank,
            pointwise_checks: POINTWISE_CHECKS,
            pointwise_full_rank,
        },
    }
}

fn is_generic(s: &SteinerSample) -> bool {
    s.report.pointwise_full_rank && s.report.section_rank == s.report.source_dim
}

/// h⁰ and h¹ of a Steiner-like cokernel with seeded random integer forms.
///
/// The sheaf map is accepted when it is injective at `POINTWISE_CHECKS` random
/// points and injective on global sections; otherwise the forms are redrawn,
/// up to `MAX_ATTEMPTS` times.
pub fn steiner_h0_random(k: i64, l: i64, r: i64, m: i64, n: i64, seed: u64) -> Result<SteinerSample> {
    check_twist(k, l)?;
    steiner_character(k, l, r, m, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=MAX_ATTEMPTS {
        let forms = SteinerForms::random(r, m, n, &mut rng);
        let sample = evaluate(k, l, &forms, &mut rng, seed, attempt);
        if is_generic(&sample) {
            return Ok(sample);
        }
    }
    Err(Error::NonGenericSample { seed, attempts: MAX_ATTEMPTS })
}

/// Same computation for caller-supplied forms; a degenerate map is an error.
pub fn steiner_h0_with_forms(k: i64, l: i64, forms: &SteinerForms) -> Result<SteinerSample> {
    check_twist(k, l)?;
    forms.validate()?;
    let mut probe = ChaCha8Rng::seed_from_u64(0);
    let sample = evaluate(k, l, forms, &mut probe, 0, 1);
    if !is_generic(&sample) {
        return Err(Error::domain(format!(
            "supplied forms are degenerate (section rank {} of {}, pointwise injective: {})",
            sample.report.section_rank, sample.report.source_dim, sample.report.pointwise_full_rank
        )));
    }
    Ok(sample)
}
