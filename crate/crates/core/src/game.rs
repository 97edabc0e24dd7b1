use std::collections::{BTreeSet, HashSet, VecDeque};

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::point::Point;
use crate::rules::RuleSet;
use crate::scalar::Coord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Convention {
    /// No defeated positions.
    Normal,
    /// Only the origin is defeated.
    Misere,
    Custom,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::Normal => "normal",
            Convention::Misere => "misere",
            Convention::Custom => "custom",
        }
    }
}

/// A rule set together with a game board N^d minus a finite defeated set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeGame<T> {
    rules: RuleSet<T>,
    defeated: BTreeSet<Point<T>>,
    convention: Convention,
}

impl<T: Coord> LatticeGame<T> {
    pub fn normal(rules: RuleSet<T>) -> Self {
        LatticeGame { rules, defeated: BTreeSet::new(), convention: Convention::Normal }
    }

    pub fn misere(rules: RuleSet<T>) -> Self {
        let zero = Point::zero(rules.dim());
        LatticeGame { rules, defeated: BTreeSet::from([zero]), convention: Convention::Misere }
    }

    /// Game with an arbitrary defeated set, checked to be a finite order
    /// ideal of N^d for the rule set's partial order.
    pub fn with_defeated(rules: RuleSet<T>, defeated: impl IntoIterator<Item = Point<T>>) -> Result<Self> {
        let defeated: BTreeSet<Point<T>> = defeated.into_iter().collect();
        let dim = rules.dim();
        for q in &defeated {
            if q.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: q.dim() });
            }
            if !q.is_nonneg() {
                return Err(Error::DefeatedOutsideOrthant(q.to_bigint()));
            }
        }
        let convention = if defeated.is_empty() {
            Convention::Normal
        } else if defeated.len() == 1 && defeated.iter().next().is_some_and(Point::is_zero) {
            Convention::Misere
        } else {
            Convention::Custom
        };
        let game = LatticeGame { rules, defeated, convention };
        check_order_ideal(&game)?;
        Ok(game)
    }

    pub fn dim(&self) -> usize {
        self.rules.dim()
    }

    pub fn rules(&self) -> &RuleSet<T> {
        &self.rules
    }

    pub fn defeated(&self) -> &BTreeSet<Point<T>> {
        &self.defeated
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn is_defeated(&self, p: &Point<T>) -> bool {
        self.defeated.contains(p)
    }

    pub fn on_board(&self, p: &Point<T>) -> bool {
        p.dim() == self.dim() && p.is_nonneg() && !self.is_defeated(p)
    }

    pub fn ell_of(&self, p: &Point<T>) -> BigRational {
        self.rules.ell_of(p)
    }

    /// Board positions reachable from `p` in one move, paired with the move
    /// index, in rule order.
    pub fn options(&self, p: &Point<T>) -> Vec<(usize, Point<T>)> {
        self.rules
            .moves()
            .iter()
            .enumerate()
            .filter_map(|(i, g)| {
                let q = p - g.point();
                self.on_board(&q).then_some((i, q))
            })
            .collect()
    }
}

/// Every `q - r` with `q` defeated, `r` in the semigroup generated by the
/// moves and `q - r` in N^d must itself be defeated.
pub fn check_order_ideal<T: Coord>(game: &LatticeGame<T>) -> Result<()> {
    let moves = game.rules().moves();
    for q in game.defeated() {
        let bound = game.ell_of(q);
        // BFS over N-combinations r of moves with ell(r) <= ell(q).
        let zero = Point::zero(game.dim());
        let mut seen: HashSet<Point<T>> = HashSet::from([zero.clone()]);
        let mut queue = VecDeque::from([zero]);
        while let Some(r) = queue.pop_front() {
            let below = q - &r;
            if below.is_nonneg() && !game.is_defeated(&below) {
                return Err(Error::NotAnOrderIdeal(below.to_bigint()));
            }
            for g in moves {
                let next = &r + g.point();
                if game.ell_of(&next) <= bound && seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    Ok(())
}
