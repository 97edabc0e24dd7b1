//! Rule sets: move vectors together with the two axioms every rule set must
//! satisfy on the orthant (a positivity functional and the tangent cone
//! condition), plus the derived squarefree and saturation properties.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, PositivityWitness, Result};
use crate::lattice;
use crate::lp;
use crate::point::Point;
use crate::scalar::{Coord, Field};

/// A nonzero move vector. A move from `p` goes to `p - gamma`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MoveVector<T>(Point<T>);

impl<T: Coord> MoveVector<T> {
    pub fn new(coords: Point<T>) -> Result<Self> {
        if coords.is_zero() {
            return Err(Error::ZeroMove(0));
        }
        Ok(MoveVector(coords))
    }

    pub fn point(&self) -> &Point<T> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn positive_part(&self) -> Point<T> {
        self.0.positive_part()
    }

    pub fn negative_part(&self) -> Point<T> {
        self.0.negative_part()
    }
}

impl<T: std::fmt::Display> std::fmt::Display for MoveVector<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// A validated rule set with its positivity certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleSet<T> {
    dim: usize,
    moves: Vec<MoveVector<T>>,
    ell: Vec<BigRational>,
    squarefree: bool,
    saturated: bool,
}

impl<T: Coord> RuleSet<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn moves(&self) -> &[MoveVector<T>] {
        &self.moves
    }

    /// The certified positivity functional.
    pub fn ell(&self) -> &[BigRational] {
        &self.ell
    }

    pub fn is_squarefree(&self) -> bool {
        self.squarefree
    }

    pub fn is_saturated(&self) -> bool {
        self.saturated
    }

    pub fn ell_of(&self, p: &Point<T>) -> BigRational {
        p.dot_rational(&self.ell)
    }

    /// ell scaled to a primitive positive integer vector, with the scale
    /// factor: `ell = weights / scale`.
    pub fn integral_ell(&self) -> (Vec<BigInt>, BigInt) {
        let scale = self.ell.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let weights = self.ell.iter().map(|q| (q * BigRational::from_integer(scale.clone())).to_integer()).collect();
        (weights, scale)
    }

    /// Build from moves with a caller-supplied certificate, verified exactly.
    pub fn with_certificate(moves: Vec<Point<T>>, dim: usize, ell: Vec<BigRational>) -> Result<Self> {
        let moves = well_formed(moves, dim)?;
        if ell.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: ell.len() });
        }
        let one = BigRational::one();
        if let Some(i) = ell.iter().position(|v| *v < one) {
            return Err(Error::BadCertificate(format!("coordinate {} of ell is below 1", i + 1)));
        }
        if let Some(g) = moves.iter().find(|g| g.point().dot_rational(&ell) < one) {
            return Err(Error::BadCertificate(format!("ell({g}) is below 1")));
        }
        if let TangentCone::Violation(i) = check_tangent_cone(&moves, dim) {
            return Err(Error::TangentConeViolation(i));
        }
        Ok(Self::assemble(moves, dim, ell))
    }

    fn assemble(moves: Vec<MoveVector<T>>, dim: usize, ell: Vec<BigRational>) -> Self {
        let squarefree = is_squarefree(&moves);
        let saturated = is_saturated(&moves, dim);
        RuleSet { dim, moves, ell, squarefree, saturated }
    }
}

/// Dimension, zero-vector and duplicate checks.
pub fn well_formed<T: Coord>(moves: Vec<Point<T>>, dim: usize) -> Result<Vec<MoveVector<T>>> {
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(moves.len());
    for (i, g) in moves.into_iter().enumerate() {
        if g.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: g.dim() });
        }
        if g.is_zero() {
            return Err(Error::ZeroMove(i));
        }
        if !seen.insert(g.clone()) {
            return Err(Error::DuplicateMove(g.to_bigint()));
        }
        out.push(MoveVector(g));
    }
    Ok(out)
}

/// Validate both rule-set axioms and compute the derived flags.
pub fn validate_ruleset<T: Coord>(moves: Vec<Point<T>>, dim: usize) -> Result<RuleSet<T>> {
    let moves = well_formed(moves, dim)?;
    let ell = find_positivity_functional::<T, BigRational>(&moves, dim)?;
    if let TangentCone::Violation(i) = check_tangent_cone(&moves, dim) {
        return Err(Error::TangentConeViolation(i));
    }
    Ok(RuleSet::assemble(moves, dim, ell))
}

/// Solve `ell_i >= 1` and `ell . gamma >= 1` for every move.
///
/// Returns a feasible point, or a witness that some nonnegative combination
/// of moves is componentwise nonpositive (no positivity functional exists).
pub fn find_positivity_functional<T: Coord, F: Field>(moves: &[MoveVector<T>], dim: usize) -> Result<Vec<F>> {
    for (i, g) in moves.iter().enumerate() {
        if g.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: g.dim() });
        }
        if g.point().is_zero() {
            return Err(Error::ZeroMove(i));
        }
    }
    let k = moves.len();
    // variables: ell (dim), slack per coordinate (dim), slack per move (k)
    let n = 2 * dim + k;
    let mut a = Vec::with_capacity(dim + k);
    let mut b = Vec::with_capacity(dim + k);
    for i in 0..dim {
        let mut row = vec![F::zero(); n];
        row[i] = F::one();
        row[dim + i] = -F::one();
        a.push(row);
        b.push(F::one());
    }
    for (j, g) in moves.iter().enumerate() {
        let mut row = vec![F::zero(); n];
        for (i, c) in g.point().coords().iter().enumerate() {
            row[i] = F::from_bigint(&c.to_bigint());
        }
        row[2 * dim + j] = -F::one();
        a.push(row);
        b.push(F::one());
    }
    match lp::feasible_point(&a, &b, n) {
        Some(x) => Ok(x[..dim].to_vec()),
        None => Err(Error::PositivityInfeasible(positivity_witness(moves, dim))),
    }
}

/// Gordan alternative: find lambda >= 0 with sum 1 and sum lambda_g g <= 0.
fn positivity_witness<T: Coord>(moves: &[MoveVector<T>], dim: usize) -> PositivityWitness {
    let k = moves.len();
    let n = k + dim;
    let mut a = Vec::with_capacity(dim + 1);
    let mut b = Vec::with_capacity(dim + 1);
    for i in 0..dim {
        let mut row = vec![BigRational::zero(); n];
        for (j, g) in moves.iter().enumerate() {
            row[j] = BigRational::from_integer(g.point()[i].to_bigint());
        }
        row[k + i] = BigRational::one();
        a.push(row);
        b.push(BigRational::zero());
    }
    let mut total = vec![BigRational::zero(); n];
    for v in total.iter_mut().take(k) {
        *v = BigRational::one();
    }
    a.push(total);
    b.push(BigRational::one());
    let x = lp::feasible_point(&a, &b, n).expect("theorem of the alternative guarantees a witness");
    PositivityWitness {
        weights: x[..k].iter().cloned().enumerate().filter(|(_, w)| w.is_positive()).collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TangentCone {
    Ok,
    /// 1-based index of the least coordinate with no admissible move.
    Violation(usize),
}

/// For each coordinate `i` some move must be nonpositive off coordinate `i`.
pub fn check_tangent_cone<T: Coord>(moves: &[MoveVector<T>], dim: usize) -> TangentCone {
    for i in 0..dim {
        let ok = moves
            .iter()
            .any(|g| g.point().coords().iter().enumerate().all(|(j, c)| j == i || !c.is_positive()));
        if !ok {
            return TangentCone::Violation(i + 1);
        }
    }
    TangentCone::Ok
}

/// Every move has maximum entry exactly 1.
pub fn is_squarefree<T: Coord>(moves: &[MoveVector<T>]) -> bool {
    moves.iter().all(|g| g.point().max_entry().is_some_and(|m| m.is_one()))
}

/// A position `p` with `2p - gamma` in N^d but `p - gamma` not in N^d, for a
/// move whose maximum entry `M` exceeds 1: `p = ceil(M/2) * 1`.
pub fn squarefree_counterexample<T: Coord>(moves: &[MoveVector<T>]) -> Option<(usize, Point<T>)> {
    let two = T::one() + T::one();
    moves.iter().enumerate().find_map(|(i, g)| {
        let m = g.point().max_entry()?.clone();
        if m <= T::one() {
            return None;
        }
        let half = (m + T::one()).div_floor(&two);
        Some((i, Point::new(vec![half; g.dim()])))
    })
}

/// The moves generate Z^d as a group.
pub fn is_saturated<T: Coord>(moves: &[MoveVector<T>], dim: usize) -> bool {
    if dim == 0 {
        return true;
    }
    let matrix: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| moves.iter().map(|g| g.point()[i].to_bigint()).collect())
        .collect();
    if moves.is_empty() {
        return false;
    }
    let factors = lattice::invariant_factors(&matrix);
    factors.len() == dim && factors.iter().all(One::is_one)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConeContainment {
    Ok,
    /// 1-based coordinate whose basis vector is not a nonnegative combination.
    Failure(usize),
}

/// Each basis vector `e_i` is a nonnegative rational combination of moves.
pub fn check_cone_containment<T: Coord>(rules: &RuleSet<T>) -> ConeContainment {
    let dim = rules.dim();
    let k = rules.moves().len();
    let a: Vec<Vec<BigRational>> = (0..dim)
        .map(|i| rules.moves().iter().map(|g| BigRational::from_integer(g.point()[i].to_bigint())).collect())
        .collect();
    for i in 0..dim {
        let b: Vec<BigRational> = (0..dim).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect();
        if lp::feasible_point(&a, &b, k).is_none() {
            return ConeContainment::Failure(i + 1);
        }
    }
    ConeContainment::Ok
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(data: &[&[i64]]) -> Vec<Point<BigInt>> {
        data.iter().map(|r| Point::from_i64s(r)).collect()
    }

    fn mv(data: &[&[i64]]) -> Vec<MoveVector<BigInt>> {
        pts(data).into_iter().map(|p| MoveVector::new(p).unwrap()).collect()
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn satisfies(moves: &[MoveVector<BigInt>], ell: &[BigRational]) -> bool {
        ell.iter().all(|v| *v >= q(1)) && moves.iter().all(|g| g.point().dot_rational(ell) >= q(1))
    }

    #[test]
    fn nim_functional_is_feasible() {
        let moves = mv(&[&[1, 0], &[0, 1], &[-1, 1]]);
        let ell = find_positivity_functional::<_, BigRational>(&moves, 2).unwrap();
        assert!(satisfies(&moves, &ell));
        assert!(satisfies(&moves, &[q(1), q(2)]));
    }

    #[test]
    fn opposite_moves_are_infeasible() {
        let moves = mv(&[&[1, -1], &[-1, 1]]);
        match find_positivity_functional::<_, BigRational>(&moves, 2) {
            Err(Error::PositivityInfeasible(w)) => {
                let total = w.weights.iter().fold(q(0), |a, (_, v)| a + v);
                assert_eq!(total, q(1));
                for i in 0..2 {
                    let s = w.weights.iter().fold(q(0), |a, (j, v)| a + v * q(moves[*j].point()[i].clone().try_into().unwrap()));
                    assert!(s <= q(0));
                }
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn heap_game_functional() {
        let moves = mv(&[&[1, 0, 0], &[-2, 1, 0], &[0, -1, 1]]);
        let ell = find_positivity_functional::<_, BigRational>(&moves, 3).unwrap();
        assert!(satisfies(&moves, &ell));
        // (1,3,4) is one feasible point
        assert!(satisfies(&moves, &[q(1), q(3), q(4)]));
    }

    #[test]
    fn float_and_machine_rational_routes_agree() {
        let feasible = mv(&[&[1, 0, 0], &[-2, 1, 0], &[0, -1, 1]]);
        let infeasible = mv(&[&[1, -1], &[-1, 1]]);
        assert!(find_positivity_functional::<_, f64>(&feasible, 3).is_ok());
        assert!(find_positivity_functional::<_, num_rational::Ratio<i64>>(&feasible, 3).is_ok());
        assert!(find_positivity_functional::<_, f64>(&infeasible, 2).is_err());
    }

    #[test]
    fn tangent_cone_examples() {
        assert_eq!(check_tangent_cone(&mv(&[&[1, 0], &[0, 1], &[-1, 1]]), 2), TangentCone::Ok);
        assert_eq!(
            check_tangent_cone(&mv(&[&[1, 0, 0], &[0, 1, 0], &[1, -1, 1], &[-1, 1, 1]]), 3),
            TangentCone::Violation(3)
        );
        assert_eq!(check_tangent_cone(&mv(&[&[2, 0], &[0, 2]]), 2), TangentCone::Ok);
    }

    #[test]
    fn validate_examples() {
        let nim = validate_ruleset(pts(&[&[1, 0], &[0, 1], &[-1, 1]]), 2).unwrap();
        assert!(nim.is_squarefree() && nim.is_saturated());
        let doubled = validate_ruleset(pts(&[&[2, 0], &[0, 2]]), 2).unwrap();
        assert!(!doubled.is_squarefree() && !doubled.is_saturated());
        assert_eq!(
            validate_ruleset(pts(&[&[1, 0, 0], &[0, 1, 0], &[1, -1, 1], &[-1, 1, 1]]), 3).unwrap_err(),
            Error::TangentConeViolation(3)
        );
    }

    #[test]
    fn validate_rejects_malformed_input() {
        assert_eq!(validate_ruleset(pts(&[&[1, 0], &[0, 0]]), 2).unwrap_err(), Error::ZeroMove(1));
        assert!(matches!(validate_ruleset(pts(&[&[1, 0], &[1, 0], &[0, 1]]), 2), Err(Error::DuplicateMove(_))));
        assert!(matches!(validate_ruleset(pts(&[&[1, 0, 0]]), 2), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(validate_ruleset(pts(&[&[1, -1], &[-1, 1]]), 2), Err(Error::PositivityInfeasible(_))));
    }

    #[test]
    fn squarefree_examples() {
        assert!(is_squarefree(&mv(&[&[1, 0], &[0, 1], &[-1, 1]])));
        assert!(!is_squarefree(&mv(&[&[2, 0], &[0, 1]])));
        assert!(is_squarefree(&mv(&[&[-3, -2, 1]])));
    }

    #[test]
    fn counterexample_construction() {
        let moves = mv(&[&[0, 1], &[3, -1]]);
        let (i, p) = squarefree_counterexample(&moves).unwrap();
        assert_eq!(i, 1);
        assert_eq!(p, Point::from_i64s(&[2, 2]));
        let g = moves[1].point();
        assert!((&(&p + &p) - g).is_nonneg());
        assert!(!(&p - g).is_nonneg());
    }

    #[test]
    fn saturation_examples() {
        assert!(is_saturated(&mv(&[&[1, 0], &[0, 1], &[-1, 1]]), 2));
        assert!(!is_saturated(&mv(&[&[2, 0], &[0, 2]]), 2));
        assert!(is_saturated(&mv(&[&[2, 1], &[1, 1]]), 2));
        assert!(!is_saturated(&mv(&[&[1, 1], &[2, 2]]), 2));
    }

    #[test]
    fn cone_containment_examples() {
        let nim = validate_ruleset(pts(&[&[1, 0], &[0, 1], &[-1, 1]]), 2).unwrap();
        assert_eq!(check_cone_containment(&nim), ConeContainment::Ok);
        let doubled = validate_ruleset(pts(&[&[2, 0], &[0, 2]]), 2).unwrap();
        assert_eq!(check_cone_containment(&doubled), ConeContainment::Ok);
    }

    #[test]
    fn certificate_is_checked() {
        let moves = pts(&[&[1, 0], &[0, 1], &[-1, 1]]);
        assert!(RuleSet::with_certificate(moves.clone(), 2, vec![q(1), q(2)]).is_ok());
        assert!(matches!(
            RuleSet::with_certificate(moves, 2, vec![q(1), q(1)]),
            Err(Error::BadCertificate(_))
        ));
    }

    #[test]
    fn integral_ell_scales_to_integers() {
        let moves = pts(&[&[1, 0], &[0, 1]]);
        let half = BigRational::new(3.into(), 2.into());
        let rs = RuleSet::with_certificate(moves, 2, vec![half, q(1)]).unwrap();
        let (w, s) = rs.integral_ell();
        assert_eq!(w, vec![BigInt::from(3), BigInt::from(2)]);
        assert_eq!(s, BigInt::from(2));
    }
}
