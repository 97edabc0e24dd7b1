//! Scalar abstractions.
//!
//! Positions are vectors over an integer [`Coord`] type; linear feasibility
//! problems are solved over a [`Field`]. Certification of rule sets always
//! uses [`BigRational`](num_rational::BigRational), but the simplex code is
//! generic so the same routine can run on machine rationals or floats.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

/// Integer type used for lattice coordinates.
pub trait Coord:
    Clone
    + Eq
    + Ord
    + Hash
    + Debug
    + Display
    + Integer
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    fn to_bigint(&self) -> BigInt;

    /// `None` when the value does not fit.
    fn from_bigint(value: &BigInt) -> Option<Self>;
}

impl Coord for i32 {
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_bigint(value: &BigInt) -> Option<Self> {
        value.to_i32()
    }
}

impl Coord for i64 {
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_bigint(value: &BigInt) -> Option<Self> {
        value.to_i64()
    }
}

impl Coord for i128 {
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_bigint(value: &BigInt) -> Option<Self> {
        value.to_i128()
    }
}

impl Coord for BigInt {
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
    fn from_bigint(value: &BigInt) -> Option<Self> {
        Some(value.clone())
    }
}

/// Ordered field used by the simplex routines.
///
/// Exact types report a zero tolerance; floating point types compare against
/// a small epsilon.
pub trait Field: Clone + PartialOrd + Debug + Display + Num + Signed + Send + Sync + 'static {
    const EXACT: bool;

    fn from_bigint(value: &BigInt) -> Self;

    fn tolerance() -> Self;

    fn is_positive_tol(&self) -> bool {
        *self > Self::tolerance()
    }

    fn is_negative_tol(&self) -> bool {
        *self < -Self::tolerance()
    }

    fn is_zero_tol(&self) -> bool {
        !self.is_positive_tol() && !self.is_negative_tol()
    }
}

impl Field for BigRational {
    const EXACT: bool = true;
    fn from_bigint(value: &BigInt) -> Self {
        BigRational::from_integer(value.clone())
    }
    fn tolerance() -> Self {
        Self::zero()
    }
}

impl Field for Ratio<i64> {
    const EXACT: bool = true;
    fn from_bigint(value: &BigInt) -> Self {
        Ratio::from_integer(value.to_i64().expect("coordinate exceeds i64"))
    }
    fn tolerance() -> Self {
        Self::zero()
    }
}

impl Field for Ratio<i128> {
    const EXACT: bool = true;
    fn from_bigint(value: &BigInt) -> Self {
        Ratio::from_integer(value.to_i128().expect("coordinate exceeds i128"))
    }
    fn tolerance() -> Self {
        Self::zero()
    }
}

impl Field for f64 {
    const EXACT: bool = false;
    fn from_bigint(value: &BigInt) -> Self {
        value.to_f64().unwrap_or(f64::NAN)
    }
    fn tolerance() -> Self {
        1e-9
    }
}

impl Field for f32 {
    const EXACT: bool = false;
    fn from_bigint(value: &BigInt) -> Self {
        value.to_f32().unwrap_or(f32::NAN)
    }
    fn tolerance() -> Self {
        1e-5
    }
}

pub(crate) fn coord_from_i64<T: Coord>(value: i64) -> T {
    T::from_i64(value).expect("coordinate type cannot hold i64 value")
}
