//! Numerical invariants of sheaves on P¹×P¹ with the polarization H = (1,1).

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A class in the Picard lattice, written as the bidegree (a, b).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct BiDegree {
    pub a: i64,
    pub b: i64,
}

impl BiDegree {
    pub const fn new(a: i64, b: i64) -> Self {
        BiDegree { a, b }
    }

    /// Exchanges the two factors.
    pub const fn flip(self) -> Self {
        BiDegree { a: self.b, b: self.a }
    }

    /// Intersection pairing: (a,b)·(c,d) = ad + bc.
    pub const fn dot(self, other: BiDegree) -> i64 {
        self.a * other.b + self.b * other.a
    }

    pub const fn scale(self, k: i64) -> Self {
        BiDegree { a: self.a * k, b: self.b * k }
    }
}

impl Add for BiDegree {
    type Output = BiDegree;
    fn add(self, o: BiDegree) -> BiDegree {
        BiDegree::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for BiDegree {
    type Output = BiDegree;
    fn sub(self, o: BiDegree) -> BiDegree {
        BiDegree::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for BiDegree {
    type Output = BiDegree;
    fn neg(self) -> BiDegree {
        BiDegree::new(-self.a, -self.b)
    }
}

impl fmt::Display for BiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// Curves the bounds restrict to: the two rulings and the diagonal class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CurveClass {
    /// Class (1,0); meets c₁ = (a,b) in b.
    Ruling10,
    /// Class (0,1); meets c₁ = (a,b) in a.
    Ruling01,
    /// Class (1,1); meets c₁ = (a,b) in a + b.
    Diagonal,
}

impl CurveClass {
    pub const fn class(self) -> BiDegree {
        match self {
            CurveClass::Ruling10 => BiDegree::new(1, 0),
            CurveClass::Ruling01 => BiDegree::new(0, 1),
            CurveClass::Diagonal => BiDegree::new(1, 1),
        }
    }
}

/// The triple (rank, c₁, ch₂). χ is derived by Riemann-Roch: χ = r + a + b + ch₂.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ChernCharacter {
    pub rank: i64,
    pub c1: BiDegree,
    pub ch2: Rational,
}

impl ChernCharacter {
    pub fn new(rank: i64, c1: BiDegree, ch2: Rational) -> Result<Self> {
        if rank < 0 {
            return Err(Error::invalid_character(format!("negative rank {rank}")));
        }
        Ok(ChernCharacter { rank, c1, ch2 })
    }

    /// Builds the character with the given Euler characteristic.
    pub fn from_chi(rank: i64, c1: BiDegree, chi: i64) -> Result<Self> {
        let ch2 = Rational::from(chi - rank - c1.a - c1.b);
        Self::new(rank, c1, ch2)
    }

    /// The line bundle O(a,b): (1, (a,b), ab).
    pub fn line_bundle(a: i64, b: i64) -> Self {
        ChernCharacter { rank: 1, c1: BiDegree::new(a, b), ch2: Rational::from(a * b) }
    }

    pub fn zero() -> Self {
        ChernCharacter { rank: 0, c1: BiDegree::default(), ch2: Rational::ZERO }
    }

    pub fn scale(self, k: i64) -> Self {
        ChernCharacter { rank: self.rank * k, c1: self.c1.scale(k), ch2: self.ch2 * Rational::from(k) }
    }

    pub fn flip(self) -> Self {
        ChernCharacter { c1: self.c1.flip(), ..self }
    }

    pub fn slope(&self) -> Result<Rational> {
        slope(self)
    }

    pub fn chi(&self) -> Result<i64> {
        euler_characteristic(self)
    }
}

impl Add for ChernCharacter {
    type Output = ChernCharacter;
    fn add(self, o: ChernCharacter) -> ChernCharacter {
        ChernCharacter { rank: self.rank + o.rank, c1: self.c1 + o.c1, ch2: self.ch2 + o.ch2 }
    }
}

impl Sub for ChernCharacter {
    type Output = ChernCharacter;
    fn sub(self, o: ChernCharacter) -> ChernCharacter {
        ChernCharacter { rank: self.rank - o.rank, c1: self.c1 - o.c1, ch2: self.ch2 - o.ch2 }
    }
}

impl fmt::Display for ChernCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(r={}, c1={}, ch2={})", self.rank, self.c1, self.ch2)
    }
}

/// μ_H = (a+b) / 2r.
pub fn slope(ch: &ChernCharacter) -> Result<Rational> {
    if ch.rank < 1 {
        return Err(Error::invalid_character(format!("slope undefined for rank {}", ch.rank)));
    }
    Rational::new((ch.c1.a + ch.c1.b) as i128, 2 * ch.rank as i128)
}

pub fn euler_characteristic(ch: &ChernCharacter) -> Result<i64> {
    let chi = Rational::from(ch.rank + ch.c1.a + ch.c1.b).checked_add(ch.ch2)?;
    chi.to_integer()
        .and_then(|v| i64::try_from(v).ok())
        .ok_or_else(|| Error::invalid_character(format!("non-integral Euler characteristic {chi} for {ch}")))
}

/// E ⊗ O(p,q).
pub fn twist(ch: &ChernCharacter, p: i64, q: i64) -> ChernCharacter {
    let r = ch.rank;
    let BiDegree { a, b } = ch.c1;
    ChernCharacter {
        rank: r,
        c1: BiDegree::new(a + r * p, b + r * q),
        ch2: ch.ch2 + Rational::from(a * q + b * p + r * p * q),
    }
}

/// rk + c₁·C; equals h⁰ of the restriction only under the usual
/// generic global generation hypotheses, which callers enforce.
pub fn restriction_sections(ch: &ChernCharacter, curve: CurveClass) -> Result<i64> {
    if ch.rank < 1 {
        return Err(Error::invalid_character("restriction count needs rank >= 1"));
    }
    Ok(ch.rank + ch.c1.dot(curve.class()))
}

/// c₁·(−K) = c₁·(2,2) = 2a + 2b.
pub fn anticanonical_pairing(ch: &ChernCharacter) -> i64 {
    ch.c1.dot(BiDegree::new(2, 2))
}
