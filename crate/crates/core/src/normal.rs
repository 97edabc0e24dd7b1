//! Mod-2 patterns and the closed form `P = P0 + 2N^d` for squarefree
//! normal-play games.
//!
//! Vectors of Z_2^d are packed into a `u64` with coordinate `i` at bit
//! `d - 1 - i`, so integer order on the words is lexicographic order on the
//! vectors.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::game::LatticeGame;
use crate::point::Point;
use crate::rules::MoveVector;
use crate::scalar::Coord;
use crate::solver::{self, Class};

/// Largest dimension accepted by the pattern routines.
pub const MAX_PATTERN_DIM: usize = 20;

pub fn pack(bits: &[bool]) -> u64 {
    bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
}

pub fn unpack(word: u64, dim: usize) -> Vec<bool> {
    (0..dim).map(|i| word >> (dim - 1 - i) & 1 == 1).collect()
}

/// A subset of Z_2^d.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pattern {
    dim: usize,
    members: BTreeSet<u64>,
}

impl Pattern {
    pub fn new(dim: usize, members: impl IntoIterator<Item = u64>) -> Result<Self> {
        if dim > MAX_PATTERN_DIM {
            return Err(Error::PatternDimension(dim));
        }
        let members: BTreeSet<u64> = members.into_iter().collect();
        if let Some(&w) = members.iter().next_back() {
            if dim < 64 && w >> dim != 0 {
                return Err(Error::PatternDimension(dim));
            }
        }
        Ok(Pattern { dim, members })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn words(&self) -> &BTreeSet<u64> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, bits: &[bool]) -> bool {
        self.members.contains(&pack(bits))
    }

    /// Members as 0-1 vectors in lexicographic order.
    pub fn vectors(&self) -> Vec<Vec<u8>> {
        self.members.iter().map(|&w| unpack(w, self.dim).into_iter().map(u8::from).collect()).collect()
    }

    /// `P + gamma2` equals the complement of `P`.
    pub fn is_sustained(&self, gamma2: &BTreeSet<u64>) -> bool {
        let mut hit = BTreeSet::new();
        for &p in &self.members {
            for &g in gamma2 {
                let q = p ^ g;
                if self.members.contains(&q) {
                    return false;
                }
                hit.insert(q);
            }
        }
        hit.len() as u64 + self.members.len() as u64 == 1u64 << self.dim
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self
            .vectors()
            .iter()
            .map(|v| format!("({})", v.iter().map(u8::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

/// Move vectors reduced mod 2, duplicates collapsed.
pub fn reduce_mod2<T: Coord>(moves: &[MoveVector<T>]) -> BTreeSet<Vec<bool>> {
    moves.iter().map(|g| g.point().mod2_bits()).collect()
}

fn packed_gamma2<T: Coord>(moves: &[MoveVector<T>]) -> BTreeSet<u64> {
    reduce_mod2(moves).iter().map(|b| pack(b)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CandidateOrder {
    Lex,
    ReverseLex,
}

/// Greedy sustained pattern: start from `seed`, then add every candidate
/// not already covered by `P + gamma2`, in the given order.
pub fn sustained_pattern(gamma2: &BTreeSet<u64>, dim: usize, seed: u64, order: CandidateOrder) -> Result<Pattern> {
    if dim > MAX_PATTERN_DIM {
        return Err(Error::PatternDimension(dim));
    }
    if gamma2.contains(&0) {
        return Err(Error::ZeroInGamma2);
    }
    let size = 1u64 << dim;
    let mut chosen = vec![false; size as usize];
    let mut covered = vec![false; size as usize];
    let add = |x: u64, chosen: &mut Vec<bool>, covered: &mut Vec<bool>| {
        chosen[x as usize] = true;
        for &g in gamma2 {
            covered[(x ^ g) as usize] = true;
        }
    };
    add(seed, &mut chosen, &mut covered);
    let candidates: Box<dyn Iterator<Item = u64>> = match order {
        CandidateOrder::Lex => Box::new(0..size),
        CandidateOrder::ReverseLex => Box::new((0..size).rev()),
    };
    for x in candidates {
        if !chosen[x as usize] && !covered[x as usize] {
            add(x, &mut chosen, &mut covered);
        }
    }
    let pattern = Pattern::new(dim, (0..size).filter(|&x| chosen[x as usize]))?;
    assert!(pattern.is_sustained(gamma2), "greedy construction produced a non-sustained pattern");
    Ok(pattern)
}

/// Decide exactly whether `{p : p mod 2 in p0}` is the P-set of the
/// squarefree normal-play game on all of N^d.
///
/// Whether a squarefree move is legal at `p` depends only on the support of
/// `p`, and where it lands mod 2 only on `p mod 2`, so it suffices to check
/// the P/N axioms on one representative per (parity, support) pair.
pub fn is_periodic_solution<T: Coord>(moves: &[MoveVector<T>], p0: &Pattern) -> bool {
    let d = p0.dim();
    let packed: Vec<(u64, u64)> = moves
        .iter()
        .map(|g| {
            let ones: Vec<bool> = g.point().coords().iter().map(|c| c.is_one()).collect();
            (pack(&ones), pack(&g.point().mod2_bits()))
        })
        .collect();
    let full = if d == 64 { u64::MAX } else { (1u64 << d) - 1 };
    for parity in 0..=full {
        let in_p = p0.words().contains(&parity);
        // supports are the supersets of the parity bits
        let free = full & !parity;
        let mut sub = free;
        loop {
            let support = parity | sub;
            let reaches_p = packed
                .iter()
                .any(|&(need, g2)| need & !support == 0 && p0.words().contains(&(parity ^ g2)));
            if in_p == reaches_p {
                return false;
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
    }
    true
}

/// The pattern `P0` with `P = P0 + 2N^d`.
///
/// The greedy pattern seeded at the origin is tried first. Sustained
/// patterns containing the origin need not be unique, so when the greedy one
/// fails the exact periodicity check, the only possible candidate (the true
/// P-positions in {0,1}^d) is checked instead. If that also fails, the game
/// has no mod-2 periodic solution.
pub fn solve_squarefree_normal<T: Coord>(game: &LatticeGame<T>) -> Result<Pattern> {
    if !game.defeated().is_empty() {
        return Err(Error::NotNormalPlay);
    }
    let rules = game.rules();
    if !rules.is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    let d = game.dim();
    if d > MAX_PATTERN_DIM {
        return Err(Error::PatternDimension(d));
    }
    let gamma2 = packed_gamma2(rules.moves());
    let greedy = sustained_pattern(&gamma2, d, 0, CandidateOrder::Lex)?;
    if is_periodic_solution(rules.moves(), &greedy) {
        return Ok(greedy);
    }
    let ones = Point::new(vec![T::one(); d]);
    let reach: BigRational = game.ell_of(&ones);
    let solution = solver::solve(game, &reach)?;
    let words = (0..1u64 << d).filter(|&w| {
        let p = Point::new(unpack(w, d).into_iter().map(|b| if b { T::one() } else { T::zero() }).collect());
        solution.is_p(&p)
    });
    let truth = Pattern::new(d, words)?;
    if is_periodic_solution(rules.moves(), &truth) {
        Ok(truth)
    } else {
        Err(Error::NoPeriodicSolution)
    }
}

/// P iff `p mod 2` lies in the pattern.
pub fn membership_closed_form<T: Coord>(p0: &Pattern, p: &Point<T>) -> Class {
    if p0.contains(&p.mod2_bits()) {
        Class::P
    } else {
        Class::N
    }
}
