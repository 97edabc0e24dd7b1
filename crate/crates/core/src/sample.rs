//! Random valid rule sets and game trees for property and acceptance tests.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::encode::GameTree;
use crate::point::Point;
use crate::rules::{validate_ruleset, RuleSet};

/// A candidate move vector: one coordinate positive, others in `low..=0`,
/// so that every coordinate has a move satisfying the tangent-cone axiom.
fn axis_move<R: Rng>(rng: &mut R, d: usize, i: usize, top: i64, low: i64) -> Vec<i64> {
    (0..d).map(|j| if j == i { rng.gen_range(1..=top) } else { rng.gen_range(low..=0) }).collect()
}

/// Valid rule set with `d` in `1..=max_dim`, at most `max_moves` moves
/// (at least `d`), entries in `low..=high`. Rejection-samples until valid.
pub fn random_ruleset<R: Rng>(rng: &mut R, max_dim: usize, max_moves: usize, low: i64, high: i64) -> RuleSet<BigInt> {
    loop {
        let d = rng.gen_range(1..=max_dim);
        if max_moves < d {
            continue;
        }
        let k = rng.gen_range(d..=max_moves);
        let mut moves: Vec<Vec<i64>> = (0..d).map(|i| axis_move(rng, d, i, high, low)).collect();
        while moves.len() < k {
            moves.push((0..d).map(|_| rng.gen_range(low..=high)).collect());
        }
        moves.shuffle(rng);
        moves.sort();
        moves.dedup();
        let pts = moves.iter().map(|m| Point::from_i64s(m)).collect();
        if let Ok(rules) = validate_ruleset(pts, d) {
            return rules;
        }
    }
}

/// Valid squarefree rule set: every move has maximum entry exactly 1.
pub fn random_squarefree_ruleset<R: Rng>(rng: &mut R, max_dim: usize, max_moves: usize, low: i64) -> RuleSet<BigInt> {
    loop {
        let d = rng.gen_range(1..=max_dim);
        if max_moves < d {
            continue;
        }
        let k = rng.gen_range(d..=max_moves);
        let mut moves: Vec<Vec<i64>> = (0..d).map(|i| axis_move(rng, d, i, 1, low)).collect();
        while moves.len() < k {
            let mut v: Vec<i64> = (0..d).map(|_| rng.gen_range(low..=1)).collect();
            let j = rng.gen_range(0..d);
            v[j] = 1;
            moves.push(v);
        }
        moves.shuffle(rng);
        moves.sort();
        moves.dedup();
        let pts = moves.iter().map(|m| Point::from_i64s(m)).collect();
        if let Ok(rules) = validate_ruleset(pts, d) {
            return rules;
        }
    }
}

/// Random acyclic option relation on `n` nodes; options always point to
/// higher indices, and node `n - 1` has no options.
pub fn random_tree<R: Rng>(rng: &mut R, n: usize, density: f64) -> GameTree {
    let options = (0..n)
        .map(|i| {
            let mut opts: Vec<usize> = (i + 1..n).filter(|_| rng.gen_bool(density)).collect();
            if opts.is_empty() && i + 1 < n && rng.gen_bool(0.5) {
                opts.push(rng.gen_range(i + 1..n));
            }
            opts
        })
        .collect();
    GameTree::new(options).expect("forward options are acyclic")
}
