//! P/N classification of bounded regions `{p in N^d : ell(p) <= L}`.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::game::LatticeGame;
use crate::point::Point;
use crate::rules::MoveVector;
use crate::scalar::Coord;

/// Regions larger than this are refused rather than exhausting memory.
pub const MAX_REGION: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Class {
    P,
    N,
}

impl Class {
    pub fn as_str(self) -> &'static str {
        match self {
            Class::P => "P",
            Class::N => "N",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Classification {
    P,
    N,
    Defeated,
    OutOfRegion,
}

impl From<Class> for Classification {
    fn from(c: Class) -> Self {
        match c {
            Class::P => Classification::P,
            Class::N => Classification::N,
        }
    }
}

/// The sublevel set `ell(p) <= bound` in integer form: `w . p <= budget`
/// where `ell = w / scale` and `budget = floor(bound * scale)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    bound: BigRational,
    weights: Vec<BigInt>,
    budget: BigInt,
}

impl Region {
    pub fn new<T: Coord>(game: &LatticeGame<T>, bound: &BigRational) -> Result<Self> {
        Self::from_ell(game.rules().ell(), bound)
    }

    /// Region for an arbitrary positive functional.
    pub fn from_ell(ell: &[BigRational], bound: &BigRational) -> Result<Self> {
        if bound.is_negative() {
            return Err(Error::NegativeBound);
        }
        let scale = ell.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let s = BigRational::from_integer(scale);
        let weights: Vec<BigInt> = ell.iter().map(|q| (q * &s).to_integer()).collect();
        assert!(weights.iter().all(Signed::is_positive), "region functional must be positive");
        let budget = (bound * &s).floor().to_integer();
        Ok(Region { bound: bound.clone(), weights, budget })
    }

    /// Integer weights of the functional, scaled to be integral.
    pub fn weights(&self) -> &[BigInt] {
        &self.weights
    }

    /// Largest admissible integer level.
    pub fn budget(&self) -> &BigInt {
        &self.budget
    }

    pub fn bound(&self) -> &BigRational {
        &self.bound
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// Integer level `w . p`.
    pub fn level<T: Coord>(&self, p: &Point<T>) -> BigInt {
        p.coords().iter().zip(&self.weights).map(|(c, w)| c.to_bigint() * w).sum()
    }

    pub fn contains<T: Coord>(&self, p: &Point<T>) -> bool {
        p.dim() == self.dim() && p.is_nonneg() && self.level(p) <= self.budget
    }

    /// All points of the region in lexicographic order.
    pub fn points<T: Coord>(&self) -> Result<Vec<Point<T>>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(self.dim());
        self.fill(0, self.budget.clone(), &mut cur, &mut out)?;
        Ok(out)
    }

    fn fill<T: Coord>(&self, i: usize, left: BigInt, cur: &mut Vec<BigInt>, out: &mut Vec<Point<T>>) -> Result<()> {
        if i == self.dim() {
            if out.len() >= MAX_REGION {
                return Err(Error::RegionTooLarge(out.len() as u128 + 1));
            }
            let coords = cur.iter().map(|c| T::from_bigint(c).expect("coordinate overflows the coordinate type"));
            out.push(Point::new(coords.collect()));
            return Ok(());
        }
        let w = &self.weights[i];
        let mut c = BigInt::zero();
        let mut rest = left;
        while !rest.is_negative() {
            cur.push(c.clone());
            self.fill(i + 1, rest.clone(), cur, out)?;
            cur.pop();
            c += 1;
            rest -= w;
        }
        Ok(())
    }
}

/// Classification of every board position of a region. N-positions carry
/// the index of their witness move.
#[derive(Clone, Debug)]
pub struct Solution<T> {
    game: LatticeGame<T>,
    region: Region,
    /// `None` for P, `Some(i)` for N with witness move `i`.
    entries: HashMap<Point<T>, Option<usize>>,
}

impl<T: Coord> Solution<T> {
    pub fn game(&self) -> &LatticeGame<T> {
        &self.game
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn bound(&self) -> &BigRational {
        self.region.bound()
    }

    /// Number of classified board positions.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn class_of(&self, p: &Point<T>) -> Option<Class> {
        self.entries.get(p).map(|e| if e.is_some() { Class::N } else { Class::P })
    }

    pub fn is_p(&self, p: &Point<T>) -> bool {
        matches!(self.entries.get(p), Some(None))
    }

    /// Index of the stored witness move of an N-position.
    pub fn witness(&self, p: &Point<T>) -> Option<usize> {
        self.entries.get(p).copied().flatten()
    }

    /// Board positions with their class, in lexicographic order.
    pub fn sorted(&self) -> Vec<(&Point<T>, Class)> {
        let mut v: Vec<_> = self
            .entries
            .iter()
            .map(|(p, e)| (p, if e.is_some() { Class::N } else { Class::P }))
            .collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    pub fn p_positions(&self) -> BTreeSet<Point<T>> {
        self.entries.iter().filter(|(_, e)| e.is_none()).map(|(p, _)| p.clone()).collect()
    }

    /// One JSON record per line, lexicographically sorted.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for (p, class) in self.sorted() {
            let mv = match self.witness(p) {
                Some(i) => json_vec(self.game.rules().moves()[i].point()),
                None => "null".to_string(),
            };
            let _ = writeln!(out, "{{\"p\":{},\"class\":\"{}\",\"move\":{}}}", json_vec(p), class.as_str(), mv);
        }
        out
    }
}

fn json_vec<T: Coord>(p: &Point<T>) -> String {
    let parts: Vec<String> = p.coords().iter().map(|c| c.to_string()).collect();
    format!("[{}]", parts.join(","))
}

/// Level-order construction: a position is P iff none of its options is P.
pub fn solve<T: Coord>(game: &LatticeGame<T>, bound: &BigRational) -> Result<Solution<T>> {
    let region = Region::new(game, bound)?;
    let mut order: Vec<(BigInt, Point<T>)> =
        region.points()?.into_iter().filter(|p| !game.is_defeated(p)).map(|p| (region.level(&p), p)).collect();
    order.sort();
    let mut entries: HashMap<Point<T>, Option<usize>> = HashMap::with_capacity(order.len());
    for (_, p) in order {
        let witness = game.rules().moves().iter().position(|g| {
            let q = &p - g.point();
            game.on_board(&q) && matches!(entries.get(&q), Some(None))
        });
        entries.insert(p, witness);
    }
    Ok(Solution { game: game.clone(), region, entries })
}

/// Independent oracle: memoised top-down recursion over options, on a
/// region enumerated by filtering a bounding box.
pub fn solve_naive<T: Coord>(game: &LatticeGame<T>, bound: &BigRational) -> Result<Solution<T>> {
    let region = Region::new(game, bound)?;
    let ell = game.rules().ell();
    let d = game.dim();
    let sides: Vec<i64> = (0..d)
        .map(|i| {
            let side = (bound / &ell[i]).floor().to_integer();
            i64::try_from(side).map_err(|_| Error::RegionTooLarge(u128::MAX))
        })
        .collect::<Result<_>>()?;
    let total = sides.iter().try_fold(1u128, |acc, s| acc.checked_mul(*s as u128 + 1));
    if total.is_none_or(|t| t > (MAX_REGION as u128) * 64) {
        return Err(Error::RegionTooLarge(total.unwrap_or(u128::MAX)));
    }

    let mut memo: HashMap<Point<T>, Option<usize>> = HashMap::new();
    let mut cursor = vec![0i64; d];
    loop {
        let p = Point::from_i64s(&cursor);
        if game.ell_of(&p) <= *bound && !game.is_defeated(&p) {
            naive_value(game, &p, &mut memo);
        }
        // odometer over the box
        let mut i = d;
        loop {
            if i == 0 {
                return Ok(Solution { game: game.clone(), region, entries: memo });
            }
            i -= 1;
            if cursor[i] < sides[i] {
                cursor[i] += 1;
                break;
            }
            cursor[i] = 0;
        }
    }
}

fn naive_value<T: Coord>(game: &LatticeGame<T>, start: &Point<T>, memo: &mut HashMap<Point<T>, Option<usize>>) {
    let moves = game.rules().moves();
    let mut stack = vec![start.clone()];
    while let Some(p) = stack.pop() {
        if memo.contains_key(&p) {
            continue;
        }
        let opts: Vec<(usize, Point<T>)> = game.options(&p);
        let pending: Vec<Point<T>> = opts.iter().filter(|(_, q)| !memo.contains_key(q)).map(|(_, q)| q.clone()).collect();
        if pending.is_empty() {
            let w = (0..moves.len()).find(|&i| opts.iter().any(|(j, q)| *j == i && memo[q].is_none()));
            memo.insert(p, w);
        } else {
            stack.push(p);
            stack.extend(pending);
        }
    }
}

/// Lookup that never fails.
pub fn classify<T: Coord>(solution: &Solution<T>, p: &Point<T>) -> Classification {
    if p.dim() != solution.game.dim() || !p.is_nonneg() {
        return Classification::OutOfRegion;
    }
    if solution.game.is_defeated(p) {
        return Classification::Defeated;
    }
    match solution.class_of(p) {
        Some(c) => c.into(),
        None => Classification::OutOfRegion,
    }
}

/// The lowest-index move from an N-position to a P-position.
pub fn best_move<'a, T: Coord>(solution: &'a Solution<T>, p: &Point<T>) -> Result<&'a MoveVector<T>> {
    match solution.witness(p) {
        Some(i) => Ok(&solution.game.rules().moves()[i]),
        None => Err(Error::NotAnNPosition(p.to_bigint())),
    }
}

/// Board positions of the region with no legal move.
pub fn victorious_positions<T: Coord>(game: &LatticeGame<T>, bound: &BigRational) -> Result<BTreeSet<Point<T>>> {
    let region = Region::new(game, bound)?;
    Ok(region
        .points()?
        .into_iter()
        .filter(|p| !game.is_defeated(p) && game.options(p).is_empty())
        .collect())
}

/// Bounded congruence: `p + r` and `q + r` agree on P-membership for every
/// `r` in N^d with `ell(r) <= bound`.
pub fn congruent_within<T: Coord>(solution: &Solution<T>, p: &Point<T>, q: &Point<T>, bound: &BigRational) -> Result<bool> {
    let game = &solution.game;
    for x in [p, q] {
        if !game.on_board(x) {
            return Err(Error::NotOnBoard(x.to_bigint()));
        }
    }
    let reach = game.ell_of(p).max(game.ell_of(q));
    let need = reach + bound;
    if need > *solution.bound() {
        return Err(Error::BoundTooSmall { have: Box::new(solution.bound().clone()), need: Box::new(need) });
    }
    let shifts = Region::new(game, bound)?;
    Ok(shifts.points::<T>()?.iter().all(|r| solution.is_p(&(p + r)) == solution.is_p(&(q + r))))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation<T> {
    /// A region board position missing from the classification.
    Unclassified(Point<T>),
    /// A classified position that is not on the board or not in the region.
    Spurious(Point<T>),
    /// A P-position with an option that is also P.
    PToP { from: Point<T>, to: Point<T> },
    /// An N-position with no option in P.
    NWithoutP(Point<T>),
    /// A stored witness that does not land on a P-position.
    BadWitness(Point<T>),
}

/// Check the partition and move-closure properties of a solution. An empty
/// result means no violation.
pub fn check_invariants<T: Coord>(solution: &Solution<T>) -> Result<Vec<Violation<T>>> {
    let game = &solution.game;
    let mut out = Vec::new();
    for p in solution.region.points::<T>()? {
        if !game.is_defeated(&p) && solution.class_of(&p).is_none() {
            out.push(Violation::Unclassified(p));
        }
    }
    for (p, class) in solution.sorted() {
        if !game.on_board(p) || !solution.region.contains(p) {
            out.push(Violation::Spurious(p.clone()));
            continue;
        }
        let opts = game.options(p);
        match class {
            Class::P => {
                if let Some((_, q)) = opts.iter().find(|(_, q)| solution.is_p(q)) {
                    out.push(Violation::PToP { from: p.clone(), to: q.clone() });
                }
            }
            Class::N => {
                if !opts.iter().any(|(_, q)| solution.is_p(q)) {
                    out.push(Violation::NWithoutP(p.clone()));
                }
                let i = solution.witness(p).expect("N entries carry a witness");
                let q = p - game.rules().moves()[i].point();
                if !game.on_board(&q) || !solution.is_p(&q) {
                    out.push(Violation::BadWitness(p.clone()));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::{validate_ruleset, RuleSet};

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn pt(c: &[i64]) -> Point<BigInt> {
        Point::from_i64s(c)
    }

    fn nim_rules() -> RuleSet<BigInt> {
        RuleSet::with_certificate(vec![pt(&[1, 0]), pt(&[0, 1]), pt(&[-1, 1])], 2, vec![q(1), q(2)]).unwrap()
    }

    fn line() -> RuleSet<BigInt> {
        validate_ruleset(vec![pt(&[1])], 1).unwrap()
    }

    #[test]
    fn nim_normal_p_positions_are_even_pairs() {
        let s = solve(&LatticeGame::normal(nim_rules()), &q(12)).unwrap();
        let expected: BTreeSet<_> = (0..=12i64)
            .flat_map(|a| (0..=6i64).map(move |b| (a, b)))
            .filter(|(a, b)| a % 2 == 0 && b % 2 == 0 && a + 2 * b <= 12)
            .map(|(a, b)| pt(&[a, b]))
            .collect();
        assert_eq!(s.p_positions(), expected);
    }

    #[test]
    fn nim_misere_p_positions() {
        let s = solve(&LatticeGame::misere(nim_rules()), &q(12)).unwrap();
        let expected: BTreeSet<_> = (0..=12i64)
            .flat_map(|a| (0..=6i64).map(move |b| (a, b)))
            .filter(|&(a, b)| a + 2 * b <= 12)
            .filter(|&(a, b)| (b == 0 && a % 2 == 1) || (a % 2 == 0 && b >= 2 && b % 2 == 0))
            .map(|(a, b)| pt(&[a, b]))
            .collect();
        assert_eq!(s.p_positions(), expected);
    }

    #[test]
    fn parity_game() {
        let s = solve(&LatticeGame::normal(line()), &q(7)).unwrap();
        assert_eq!(s.p_positions(), [0, 2, 4, 6].iter().map(|&a| pt(&[a])).collect());
        let m = solve_naive(&LatticeGame::misere(line()), &q(7)).unwrap();
        assert_eq!(m.p_positions(), [1, 3, 5, 7].iter().map(|&a| pt(&[a])).collect());
    }

    #[test]
    fn classify_examples() {
        let normal = solve(&LatticeGame::normal(nim_rules()), &q(10)).unwrap();
        let misere = solve(&LatticeGame::misere(nim_rules()), &q(10)).unwrap();
        assert_eq!(classify(&normal, &pt(&[0, 0])), Classification::P);
        assert_eq!(classify(&misere, &pt(&[0, 0])), Classification::Defeated);
        assert_eq!(classify(&normal, &pt(&[1, 1])), Classification::N);
        assert_eq!(classify(&normal, &pt(&[11, 0])), Classification::OutOfRegion);
        assert_eq!(classify(&normal, &pt(&[-1, 0])), Classification::OutOfRegion);
    }

    #[test]
    fn best_move_examples() {
        let normal = solve(&LatticeGame::normal(nim_rules()), &q(10)).unwrap();
        let misere = solve(&LatticeGame::misere(nim_rules()), &q(10)).unwrap();
        assert_eq!(best_move(&normal, &pt(&[1, 0])).unwrap().point(), &pt(&[1, 0]));
        assert_eq!(best_move(&misere, &pt(&[2, 0])).unwrap().point(), &pt(&[1, 0]));
        assert_eq!(best_move(&normal, &pt(&[0, 0])).unwrap_err(), Error::NotAnNPosition(pt(&[0, 0])));
        assert!(best_move(&normal, &pt(&[40, 0])).is_err());
    }

    #[test]
    fn victorious_examples() {
        let n = victorious_positions(&LatticeGame::normal(nim_rules()), &q(10)).unwrap();
        assert_eq!(n, BTreeSet::from([pt(&[0, 0])]));
        let m = victorious_positions(&LatticeGame::misere(nim_rules()), &q(10)).unwrap();
        assert_eq!(m, BTreeSet::from([pt(&[1, 0])]));
        let m2 = victorious_positions(&LatticeGame::misere(nim_rules()), &q(20)).unwrap();
        assert_eq!(m, m2);
    }

    #[test]
    fn naive_matches_level_order_on_nim() {
        for game in [LatticeGame::normal(nim_rules()), LatticeGame::misere(nim_rules())] {
            let a = solve(&game, &q(20)).unwrap();
            let b = solve_naive(&game, &q(20)).unwrap();
            assert_eq!(a.to_json_lines(), b.to_json_lines());
            assert!(check_invariants(&a).unwrap().is_empty());
        }
    }

    #[test]
    fn congruence_examples() {
        let s = solve(&LatticeGame::normal(nim_rules()), &q(14)).unwrap();
        assert!(congruent_within(&s, &pt(&[2, 0]), &pt(&[0, 0]), &q(10)).unwrap());
        assert!(congruent_within(&s, &pt(&[1, 1]), &pt(&[1, 1]), &q(10)).unwrap());
        assert!(!congruent_within(&s, &pt(&[1, 0]), &pt(&[0, 0]), &q(10)).unwrap());
        assert!(matches!(
            congruent_within(&s, &pt(&[4, 1]), &pt(&[0, 0]), &q(10)),
            Err(Error::BoundTooSmall { .. })
        ));
    }

    #[test]
    fn negative_bound_rejected() {
        assert_eq!(solve(&LatticeGame::normal(line()), &q(-1)).unwrap_err(), Error::NegativeBound);
    }

    #[test]
    fn fractional_bound_and_ell() {
        let rules = RuleSet::with_certificate(vec![pt(&[1])], 1, vec![BigRational::new(3.into(), 2.into())]).unwrap();
        // ell(p) = 1.5 p <= 4.6 gives p <= 3
        let s = solve(&LatticeGame::normal(rules), &BigRational::new(46.into(), 10.into())).unwrap();
        assert_eq!(s.len(), 4);
    }

    #[test]
    fn json_lines_format() {
        let s = solve(&LatticeGame::normal(line()), &q(2)).unwrap();
        assert_eq!(
            s.to_json_lines(),
            "{\"p\":[0],\"class\":\"P\",\"move\":null}\n{\"p\":[1],\"class\":\"N\",\"move\":[1]}\n{\"p\":[2],\"class\":\"P\",\"move\":null}\n"
        );
    }

    #[test]
    fn machine_word_coordinates_agree() {
        let small = RuleSet::<i64>::with_certificate(
            vec![Point::from_i64s(&[1, 0]), Point::from_i64s(&[0, 1]), Point::from_i64s(&[-1, 1])],
            2,
            vec![q(1), q(2)],
        )
        .unwrap();
        let a = solve(&LatticeGame::misere(small), &q(16)).unwrap();
        let b = solve(&LatticeGame::misere(nim_rules()), &q(16)).unwrap();
        assert_eq!(a.to_json_lines(), b.to_json_lines());
    }
}
