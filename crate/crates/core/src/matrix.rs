//! Dense rational matrices and exact rank.
//!
//! Rank is computed by fraction-free (Bareiss) elimination over big integers
//! after clearing denominators row by row. A modular pass runs first: the rank
//! modulo a prime never exceeds the rational rank, so when it already equals
//! `min(rows, cols)` the answer is certified and elimination is skipped.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

/// Row selection rule for the elimination pivot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PivotRule {
    /// Largest absolute value in the pivot column; ties go to the lowest row index.
    #[default]
    LargestMagnitude,
    /// First row (lowest index) with a nonzero entry in the pivot column.
    FirstNonzero,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, entries: vec![Rational::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::ONE);
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::precondition(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(ExactMatrix { rows, cols, entries })
    }

    pub fn from_integer_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::precondition("ragged rows"));
        }
        let entries = rows.iter().flatten().map(|&v| Rational::from(v)).collect();
        Ok(ExactMatrix { rows: rows.len(), cols, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Reorders rows so that output row `i` is input row `perm[i]`.
    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.rows);
        let entries = perm.iter().flat_map(|&r| self.row(r).iter().copied()).collect();
        ExactMatrix { rows: self.rows, cols: self.cols, entries }
    }

    /// Reorders columns so that output column `j` is input column `perm[j]`.
    pub fn permute_cols(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.cols);
        let mut out = Self::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for (j, &c) in perm.iter().enumerate() {
                out.set(r, j, self.get(r, c));
            }
        }
        out
    }

    pub fn scale_row(&mut self, r: usize, factor: Rational) -> Result<()> {
        for c in 0..self.cols {
            let v = self.get(r, c).checked_mul(factor)?;
            self.set(r, c, v);
        }
        Ok(())
    }

    /// Each row multiplied by the lcm of its denominators.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let lcm = row.iter().fold(BigInt::from(1), |acc, v| acc.lcm(&BigInt::from(v.denom())));
                row.iter()
                    .map(|v| BigInt::from(v.numer()) * (&lcm / BigInt::from(v.denom())))
                    .collect()
            })
            .collect()
    }
}

/// Rank over the rationals.
pub fn rank(m: &ExactMatrix) -> usize {
    let full = m.rows.min(m.cols);
    if full == 0 {
        return 0;
    }
    if modular_rank(m) == Some(full) {
        return full;
    }
    rank_bareiss(m, PivotRule::LargestMagnitude)
}

/// `cols - rank`.
pub fn kernel_dimension(m: &ExactMatrix) -> usize {
    m.cols - rank(m)
}

/// Fraction-free elimination with an explicit pivot rule; never takes the modular shortcut.
pub fn rank_bareiss(m: &ExactMatrix, rule: PivotRule) -> usize {
    let mut a = m.integer_rows();
    let (rows, cols) = (m.rows, m.cols);
    let mut prev = BigInt::from(1);
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let candidates = (rank..rows).filter(|&r| !a[r][col].is_zero());
        let pivot = match rule {
            PivotRule::FirstNonzero => candidates.min(),
            // max_by_key keeps the last maximum, so reverse to prefer low indices
            PivotRule::LargestMagnitude => candidates
                .collect::<Vec<_>>()
                .into_iter()
                .rev()
                .max_by(|&x, &y| a[x][col].abs().cmp(&a[y][col].abs())),
        };
        let Some(p) = pivot else { continue };
        a.swap(rank, p);
        let (head, tail) = a.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        let pv = &pivot_row[col];
        for row in tail.iter_mut() {
            let factor = row[col].clone();
            for j in col + 1..cols {
                let v = pv * &row[j] - &factor * &pivot_row[j];
                // exact by Sylvester's identity
                row[j] = v / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = pv.clone();
        rank += 1;
    }
    rank
}

const MODULUS: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MODULUS as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        exp >>= 1;
    }
    acc
}

fn reduce_mod(v: i128) -> u64 {
    v.rem_euclid(MODULUS as i128) as u64
}

/// Rank modulo a 61-bit prime, or `None` if a denominator vanishes there.
fn modular_rank(m: &ExactMatrix) -> Option<usize> {
    let mut a = Vec::with_capacity(m.entries.len());
    for v in &m.entries {
        let den = reduce_mod(v.denom());
        if den == 0 {
            return None;
        }
        a.push(mul_mod(reduce_mod(v.numer()), pow_mod(den, MODULUS - 2)));
    }
    let (rows, cols) = (m.rows, m.cols);
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| a[r * cols + col] != 0) else { continue };
        if p != rank {
            for j in 0..cols {
                a.swap(p * cols + j, rank * cols + j);
            }
        }
        let inv = pow_mod(a[rank * cols + col], MODULUS - 2);
        for r in rank + 1..rows {
            let f = mul_mod(a[r * cols + col], inv);
            if f == 0 {
                continue;
            }
            for j in col..cols {
                let sub = mul_mod(f, a[rank * cols + j]);
                let cur = a[r * cols + j];
                a[r * cols + j] = if cur >= sub { cur - sub } else { cur + MODULUS - sub };
            }
        }
        rank += 1;
    }
    Some(rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ExactMatrix {
        let entries = (0..rows * cols).map(|_| Rational::from(rng.random_range(-9i64..=9))).collect();
        ExactMatrix::from_entries(rows, cols, entries).unwrap()
    }

    #[test]
    fn trivial_ranks() {
        assert_eq!(rank(&ExactMatrix::identity(3)), 3);
        assert_eq!(rank(&ExactMatrix::zeros(4, 4)), 0);
        assert_eq!(kernel_dimension(&ExactMatrix::identity(3)), 0);
        assert_eq!(kernel_dimension(&ExactMatrix::zeros(2, 5)), 5);
        assert_eq!(rank(&ExactMatrix::zeros(0, 3)), 0);
    }

    #[test]
    fn entry_count_is_checked() {
        assert!(ExactMatrix::from_entries(2, 2, vec![Rational::ONE; 3]).is_err());
        assert!(ExactMatrix::from_integer_rows(&[vec![1, 2], vec![3]]).is_err());
    }

    #[test]
    fn rational_entries() {
        // second row is 3/4 times the first
        let m = ExactMatrix::from_entries(2, 3, vec![q(1, 3), q(2, 5), q(-1, 7), q(1, 4), q(3, 10), q(-3, 28)])
            .unwrap();
        assert_eq!(rank(&m), 1);
        assert_eq!(rank_bareiss(&m, PivotRule::FirstNonzero), 1);
    }

    #[test]
    fn rank_deficient_forces_elimination() {
        // third row = first + second, so the modular shortcut cannot certify
        let m = ExactMatrix::from_integer_rows(&[vec![1, 2, 3, 4], vec![5, -6, 7, 8], vec![6, -4, 10, 12]]).unwrap();
        assert_eq!(modular_rank(&m), Some(2));
        assert_eq!(rank(&m), 2);
        assert_eq!(kernel_dimension(&m), 2);
    }

    #[test]
    fn pivot_orders_agree_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let rows = rng.random_range(1..8);
            let cols = rng.random_range(1..8);
            let mut m = random_matrix(&mut rng, rows, cols);
            // plant a dependency half the time
            if rows > 2 && rng.random_bool(0.5) {
                for c in 0..cols {
                    let v = m.get(0, c) * Rational::from(2) - m.get(1, c);
                    m.set(rows - 1, c, v);
                }
            }
            let a = rank_bareiss(&m, PivotRule::LargestMagnitude);
            let b = rank_bareiss(&m, PivotRule::FirstNonzero);
            assert_eq!(a, b);
            assert_eq!(rank(&m), a);
            assert_eq!(rank(&m.transpose()), a);
            assert_eq!(kernel_dimension(&m) + rank(&m), cols);
        }
    }

    #[test]
    fn invariant_under_permutation_and_scaling() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let m = random_matrix(&mut rng, 5, 4);
            let mut m = m.clone();
            for c in 0..4 {
                let v = m.get(0, c) + m.get(1, c);
                m.set(4, c, v);
            }
            let base = rank(&m);
            let m2 = m.permute_rows(&[4, 2, 0, 3, 1]).permute_cols(&[3, 1, 2, 0]);
            assert_eq!(rank(&m2), base);
            let mut m3 = m.clone();
            m3.scale_row(2, q(-7, 3)).unwrap();
            assert_eq!(rank_bareiss(&m3, PivotRule::FirstNonzero), base);
        }
    }
}
