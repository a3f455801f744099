use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{line_bundle_cohomology, monomial_basis, CohomologyTable};
use crate::error::{Error, Result};
use crate::matrix::{rank, ExactMatrix};
use crate::rational::Rational;

/// Random point coordinates are integers in [-POINT_COORD_BOUND, POINT_COORD_BOUND].
pub const POINT_COORD_BOUND: i64 = 999;

/// A point ([x0:x1], [y0:y1]) of P¹×P¹.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PointOnQuadric {
    pub x: (Rational, Rational),
    pub y: (Rational, Rational),
}

impl PointOnQuadric {
    pub fn new(x0: Rational, x1: Rational, y0: Rational, y1: Rational) -> Result<Self> {
        if (x0.is_zero() && x1.is_zero()) || (y0.is_zero() && y1.is_zero()) {
            return Err(Error::domain("homogeneous coordinates must not all vanish on a factor"));
        }
        Ok(PointOnQuadric { x: (x0, x1), y: (y0, y1) })
    }

    pub fn from_integers(x0: i64, x1: i64, y0: i64, y1: i64) -> Result<Self> {
        Self::new(x0.into(), x1.into(), y0.into(), y1.into())
    }

    /// Projective equality on both factors.
    pub fn same_point(&self, other: &PointOnQuadric) -> bool {
        let same = |(a0, a1): (Rational, Rational), (b0, b1): (Rational, Rational)| a0 * b1 == a1 * b0;
        same(self.x, other.x) && same(self.y, other.y)
    }

    /// x0^i x1^(a−i) y0^j y1^(b−j).
    pub fn eval_monomial(&self, a: i64, b: i64, i: i64, j: i64) -> Result<Rational> {
        let pow = |v: Rational, e: i64| -> Result<Rational> {
            (0..e).try_fold(Rational::ONE, |acc, _| acc.checked_mul(v))
        };
        pow(self.x.0, i)?
            .checked_mul(pow(self.x.1, a - i)?)?
            .checked_mul(pow(self.y.0, j)?)?
            .checked_mul(pow(self.y.1, b - j)?)
    }
}

pub(crate) fn check_distinct(points: &[PointOnQuadric]) -> Result<()> {
    for (i, p) in points.iter().enumerate() {
        if let Some(j) = points[..i].iter().position(|q| q.same_point(p)) {
            return Err(Error::domain(format!("points {j} and {i} coincide; only reduced point sets are supported")));
        }
    }
    Ok(())
}

/// Rows: points. Columns: the monomial basis of bidegree (a, b).
pub fn evaluation_matrix(points: &[PointOnQuadric], a: i64, b: i64) -> Result<ExactMatrix> {
    let basis = monomial_basis(a, b)?;
    let mut entries = Vec::with_capacity(points.len() * basis.len());
    for p in points {
        for &(i, j) in &basis {
            entries.push(p.eval_monomial(a, b, i, j)?);
        }
    }
    ExactMatrix::from_entries(points.len(), basis.len(), entries)
}

/// h⁰(I_Z(a,b)) = (a+1)(b+1) − rank of the evaluation matrix.
pub fn ideal_sheaf_h0(points: &[PointOnQuadric], a: i64, b: i64) -> Result<i64> {
    check_distinct(points)?;
    if a < 0 || b < 0 {
        return Ok(0);
    }
    let m = evaluation_matrix(points, a, b)?;
    Ok(m.cols() as i64 - rank(&m) as i64)
}

/// h² equals that of O(a,b) since Z is zero-dimensional; h¹ follows from χ.
pub fn ideal_sheaf_cohomology(points: &[PointOnQuadric], a: i64, b: i64) -> Result<CohomologyTable> {
    let h0 = ideal_sheaf_h0(points, a, b)?;
    let h2 = line_bundle_cohomology(a, b).h2;
    let chi = (a + 1) * (b + 1) - points.len() as i64;
    Ok(CohomologyTable::new(h0, h0 + h2 - chi, h2))
}

pub(crate) fn random_point(rng: &mut ChaCha8Rng, bound: i64) -> PointOnQuadric {
    let mut pair = || loop {
        let (u, v) = (rng.random_range(-bound..=bound), rng.random_range(-bound..=bound));
        if u != 0 || v != 0 {
            return (u, v);
        }
    };
    let (x0, x1) = pair();
    let (y0, y1) = pair();
    PointOnQuadric::from_integers(x0, x1, y0, y1).expect("nonzero pairs")
}

/// `count` distinct seeded random points.
pub fn random_points(count: usize, seed: u64) -> Vec<PointOnQuadric> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<PointOnQuadric> = Vec::with_capacity(count);
    while out.len() < count {
        let p = random_point(&mut rng, POINT_COORD_BOUND);
        if !out.iter().any(|q| q.same_point(&p)) {
            out.push(p);
        }
    }
    out
}

/// One point per line as four rationals `x0 x1 y0 y1`; `#` starts a comment.
pub fn parse_point_file(text: &str) -> Result<Vec<PointOnQuadric>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::Parse { line: line_no, message: format!("expected 4 coordinates, found {}", fields.len()) });
        }
        let mut coords = [Rational::ZERO; 4];
        for (slot, f) in coords.iter_mut().zip(&fields) {
            *slot = f.parse().map_err(|_| Error::Parse { line: line_no, message: format!("malformed rational `{f}`") })?;
        }
        let p = PointOnQuadric::new(coords[0], coords[1], coords[2], coords[3])
            .map_err(|e| Error::Parse { line: line_no, message: e.to_string() })?;
        out.push(p);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{rank_bareiss, PivotRule};
    use crate::rational::q;

    #[test]
    fn four_general_points_kill_bidegree_one_one() {
        let pts = random_points(4, 7);
        let m = evaluation_matrix(&pts, 1, 1).unwrap();
        assert_eq!((m.rows(), m.cols()), (4, 4));
        assert_eq!(rank(&m), 4);
        // second elimination order and a shuffled copy
        assert_eq!(rank_bareiss(&m, PivotRule::FirstNonzero), 4);
        assert_eq!(rank_bareiss(&m.permute_rows(&[3, 1, 0, 2]).permute_cols(&[2, 0, 3, 1]), PivotRule::LargestMagnitude), 4);
        assert_eq!(ideal_sheaf_h0(&pts, 1, 1).unwrap(), 0);
    }

    #[test]
    fn small_cases() {
        assert_eq!(ideal_sheaf_h0(&[], 2, 2).unwrap(), 9);
        let p = PointOnQuadric::from_integers(1, 2, 3, 1).unwrap();
        let r = PointOnQuadric::from_integers(2, 4, 5, 7).unwrap();
        // same first-factor coordinate: one condition on bidegree (1,0) forms
        assert_eq!(ideal_sheaf_h0(&[p, r], 1, 0).unwrap(), 1);
        assert_eq!(ideal_sheaf_h0(&[p, r], 0, 1).unwrap(), 0);
        assert_eq!(ideal_sheaf_h0(&[p], -1, 3).unwrap(), 0);
    }

    #[test]
    fn repeated_points_are_rejected() {
        let p = PointOnQuadric::from_integers(1, 2, 3, 1).unwrap();
        let same = PointOnQuadric::new(q(1, 2), Rational::ONE, q(-3, 1), q(-1, 1)).unwrap();
        assert!(matches!(ideal_sheaf_h0(&[p, same], 1, 1), Err(Error::Domain(_))));
        assert!(PointOnQuadric::from_integers(0, 0, 1, 1).is_err());
    }

    #[test]
    fn points_impose_independent_conditions() {
        for a in 0..=4 {
            for b in 0..=4 {
                let dim = (a + 1) * (b + 1);
                for seed in 0..50u64 {
                    let count = (seed as i64 % (dim + 1)) as usize;
                    let pts = random_points(count, seed * 31 + (a * 5 + b) as u64);
                    let h0 = ideal_sheaf_h0(&pts, a, b).unwrap();
                    assert!(dim - count as i64 <= h0 && h0 <= dim);
                    assert_eq!(h0, dim - count as i64, "(a,b)=({a},{b}) seed {seed}");
                }
            }
        }
    }

    #[test]
    fn cohomology_table() {
        let pts = random_points(4, 1);
        let t = ideal_sheaf_cohomology(&pts, 1, 1).unwrap();
        assert_eq!(t, CohomologyTable::new(0, 0, 0));
        let t = ideal_sheaf_cohomology(&pts, 0, 0).unwrap();
        assert_eq!(t, CohomologyTable::new(0, 3, 0));
        let t = ideal_sheaf_cohomology(&pts, -3, -2).unwrap();
        assert_eq!(t.chi, 2 - 4);
        assert_eq!(t.h2, 2);
    }

    #[test]
    fn point_files() {
        let text = "# four points\n1 0 0 1\n\n1/2 -3 2 5  # trailing comment\n0 1 1 1\n";
        let pts = parse_point_file(text).unwrap();
        assert_eq!(pts.len(), 3);
        assert_eq!(pts[1].x, (q(1, 2), q(-3, 1)));
        assert!(matches!(parse_point_file("1 2 3\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_point_file("\n1 2 3 x\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_point_file("0 0 1 1\n"), Err(Error::Parse { line: 1, .. })));
    }
}
