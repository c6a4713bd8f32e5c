//! Exact rational vectors.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// Exact rational scalar.
pub type Q = BigRational;

/// Builds `n / d` as an exact rational.
pub fn q(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the integer `n` as an exact rational.
pub fn qi(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

/// Converts an integral rational to `i64`, if it is one and fits.
pub fn q_to_i64(x: &Q) -> Option<i64> {
    if !x.is_integer() {
        return None;
    }
    i64::try_from(x.to_integer()).ok()
}

/// A coordinate vector with exact rational entries.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RationalVector {
    coords: Vec<Q>,
}

impl RationalVector {
    pub fn new(coords: Vec<Q>) -> Self {
        RationalVector { coords }
    }

    pub fn zero(dim: usize) -> Self {
        RationalVector { coords: vec![Q::zero(); dim] }
    }

    /// The standard basis vector `e_{i+1}` (zero-based `i`).
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.coords[i] = Q::one();
        v
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        RationalVector { coords: xs.iter().map(|&x| qi(x)).collect() }
    }

    /// Vector of halves: entry `i` is `xs[i] / 2`.
    pub fn from_halves(xs: &[i64]) -> Self {
        RationalVector { coords: xs.iter().map(|&x| q(x, 2)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn dot(&self, other: &Self) -> Q {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        let mut s = Q::zero();
        for (a, b) in self.coords.iter().zip(&other.coords) {
            if !a.is_zero() && !b.is_zero() {
                s += a * b;
            }
        }
        s
    }

    pub fn norm2(&self) -> Q {
        self.dot(self)
    }

    pub fn scale(&self, c: &Q) -> Self {
        RationalVector { coords: self.coords.iter().map(|x| x * c).collect() }
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: &Q, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        RationalVector {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + c * b).collect(),
        }
    }

    /// Concatenation `(self, other)` in the direct sum.
    pub fn concat(&self, other: &Self) -> Self {
        let mut coords = self.coords.clone();
        coords.extend(other.coords.iter().cloned());
        RationalVector { coords }
    }

    /// True when the first nonzero coordinate is positive.
    pub fn is_lex_positive(&self) -> bool {
        self.coords.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_positive())
    }
}

impl Add for &RationalVector {
    type Output = RationalVector;
    fn add(self, rhs: &RationalVector) -> RationalVector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        RationalVector { coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &RationalVector {
    type Output = RationalVector;
    fn sub(self, rhs: &RationalVector) -> RationalVector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        RationalVector { coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &RationalVector {
    type Output = RationalVector;
    fn neg(self) -> RationalVector {
        RationalVector { coords: self.coords.iter().map(|a| -a).collect() }
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Solves square rational systems and computes inverses by Gauss–Jordan elimination.
pub fn invert(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(pivot_row.iter()) {
                    *x = &*x - &f * p;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Rank of a list of vectors.
pub fn rank(vs: &[RationalVector]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    let dim = vs[0].dim();
    let mut rows: Vec<Vec<Q>> = vs.iter().map(|v| v.coords.clone()).collect();
    let mut r = 0;
    for col in 0..dim {
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, piv);
        let pivot = rows[r].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = &rows[i][col] / &pivot[col];
                for (x, p) in rows[i].iter_mut().zip(pivot.iter()) {
                    *x = &*x - &f * p;
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// Least common multiple of the denominators of `xs`.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Q>) -> BigInt {
    use num_integer::Integer;
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}
