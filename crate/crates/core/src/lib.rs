//! Lattice games on N^d.
//!
//! A game is a finite set of move vectors `Gamma` in Z^d together with a
//! board N^d minus a finite defeated set. From `p` a move goes to
//! `p - gamma`. This crate validates rule sets, computes the P/N partition of
//! bounded regions, gives the closed form for squarefree normal-play games,
//! works with rational strategies and affine stratifications, and encodes
//! finite impartial game trees as lattice games.

pub mod encode;
pub mod error;
pub mod game;
pub mod genfun;
pub mod io;
pub mod lattice;
pub mod lp;
pub mod normal;
pub mod point;
pub mod rules;
pub mod sample;
pub mod scalar;
pub mod solver;

pub use error::{Error, Result};
pub use game::{Convention, LatticeGame};
pub use point::Point;
pub use rules::{MoveVector, RuleSet};
pub use scalar::{Coord, Field};

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;
/// Arbitrary-precision lattice point.
pub type Position = Point<num_bigint::BigInt>;
/// Arbitrary-precision rule set.
pub type Rules = RuleSet<num_bigint::BigInt>;
/// Arbitrary-precision game.
pub type Game = LatticeGame<num_bigint::BigInt>;
/// Game with machine-word coordinates.
pub type SmallGame = LatticeGame<i64>;
