use std::fmt;
use std::ops::{Add, Index, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::scalar::Coord;

/// A point of the integer lattice Z^d.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point<T>(Vec<T>);

impl<T: Coord> Point<T> {
    pub fn new(coords: Vec<T>) -> Self {
        Point(coords)
    }

    pub fn zero(dim: usize) -> Self {
        Point(vec![T::zero(); dim])
    }

    /// Standard basis vector e_i (0-based).
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = vec![T::zero(); dim];
        v[i] = T::one();
        Point(v)
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        Point(coords.iter().map(|&c| crate::scalar::coord_from_i64(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[T] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<T> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Lies in N^d.
    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|c| !c.is_negative())
    }

    pub fn max_entry(&self) -> Option<&T> {
        self.0.iter().max()
    }

    /// Componentwise max with 0.
    pub fn positive_part(&self) -> Self {
        Point(self.0.iter().map(|c| if c.is_positive() { c.clone() } else { T::zero() }).collect())
    }

    /// Componentwise -(min with 0); `self = positive_part - negative_part`.
    pub fn negative_part(&self) -> Self {
        Point(self.0.iter().map(|c| if c.is_negative() { -c.clone() } else { T::zero() }).collect())
    }

    pub fn scale(&self, k: &T) -> Self {
        Point(self.0.iter().map(|c| c.clone() * k.clone()).collect())
    }

    /// Reduction of each coordinate into {0, 1}.
    pub fn mod2_bits(&self) -> Vec<bool> {
        let two = T::one() + T::one();
        self.0.iter().map(|c| !c.mod_floor(&two).is_zero()).collect()
    }

    pub fn dot_rational(&self, weights: &[BigRational]) -> BigRational {
        self.0
            .iter()
            .zip(weights)
            .fold(BigRational::zero(), |acc, (c, w)| acc + w * BigRational::from_integer(c.to_bigint()))
    }

    pub fn to_bigint(&self) -> Point<BigInt> {
        Point(self.0.iter().map(Coord::to_bigint).collect())
    }

    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.0.iter().map(|c| c.to_i64()).collect()
    }

    pub fn convert<U: Coord>(&self) -> Option<Point<U>> {
        self.0
            .iter()
            .map(|c| U::from_bigint(&c.to_bigint()))
            .collect::<Option<Vec<_>>>()
            .map(Point)
    }
}

impl<T> Index<usize> for Point<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

impl<T: Coord> Add for &Point<T> {
    type Output = Point<T>;
    fn add(self, rhs: &Point<T>) -> Point<T> {
        debug_assert_eq!(self.dim(), rhs.dim());
        Point(self.0.iter().zip(&rhs.0).map(|(a, b)| a.clone() + b.clone()).collect())
    }
}

impl<T: Coord> Sub for &Point<T> {
    type Output = Point<T>;
    fn sub(self, rhs: &Point<T>) -> Point<T> {
        debug_assert_eq!(self.dim(), rhs.dim());
        Point(self.0.iter().zip(&rhs.0).map(|(a, b)| a.clone() - b.clone()).collect())
    }
}

impl<T: fmt::Display> fmt::Display for Point<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positive_and_negative_parts_split_disjointly() {
        let g = Point::<i64>::from_i64s(&[-3, 0, 1, 2]);
        let pos = g.positive_part();
        let neg = g.negative_part();
        assert_eq!(pos, Point::from_i64s(&[0, 0, 1, 2]));
        assert_eq!(neg, Point::from_i64s(&[3, 0, 0, 0]));
        assert_eq!(&pos - &neg, g);
        assert!(pos.coords().iter().zip(neg.coords()).all(|(a, b)| *a == 0 || *b == 0));
    }

    #[test]
    fn mod2_handles_negatives() {
        let g = Point::<BigInt>::from_i64s(&[-3, -2, 1]);
        assert_eq!(g.mod2_bits(), vec![true, false, true]);
    }

    #[test]
    fn display_is_tuple() {
        assert_eq!(Point::<i64>::from_i64s(&[1, -2]).to_string(), "(1,-2)");
        assert_eq!(Point::<i64>::from_i64s(&[]).to_string(), "()");
    }
}
