//! Finite impartial game trees encoded as lattice games.
//!
//! Each follower with at least one option becomes a coordinate. A position
//! counts how many copies of each follower are in a disjunctive sum, and
//! moving in a copy of `G_i` to its option `G_j` is the move `e_i - e_j`.
//! Followers without options are identified with the empty position, so a
//! move to one of them is just `e_i`.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::game::{Convention, LatticeGame};
use crate::point::Point;
use crate::rules::RuleSet;

/// Followers `0..n` with node 0 the root; `options[i]` lists the indices of
/// the options of node `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameTree {
    options: Vec<Vec<usize>>,
}

impl GameTree {
    /// Option lists are deduplicated and sorted; indices are range-checked.
    pub fn new(options: Vec<Vec<usize>>) -> Result<Self> {
        if options.is_empty() {
            return Err(Error::EmptyTree);
        }
        let n = options.len();
        let mut clean = Vec::with_capacity(n);
        for opts in options {
            if let Some(&bad) = opts.iter().find(|&&j| j >= n) {
                return Err(Error::BadOption(bad));
            }
            let set: BTreeSet<usize> = opts.into_iter().collect();
            clean.push(set.into_iter().collect());
        }
        let tree = GameTree { options: clean };
        birthdays(&tree)?;
        Ok(tree)
    }

    pub fn len(&self) -> usize {
        self.options.len()
    }

    pub fn is_empty(&self) -> bool {
        self.options.is_empty()
    }

    pub fn options(&self, i: usize) -> &[usize] {
        &self.options[i]
    }

    pub fn option_lists(&self) -> &[Vec<usize>] {
        &self.options
    }

    /// Merge isomorphic subgames. Returns the quotient tree (root stays at
    /// index 0) and the class of every original node.
    pub fn merged(&self) -> Result<(GameTree, Vec<usize>)> {
        let order = topological_order(self)?;
        let mut canon: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut raw = vec![0usize; self.len()];
        for &i in &order {
            let mut key: Vec<usize> = self.options[i].iter().map(|&j| raw[j]).collect();
            key.sort_unstable();
            key.dedup();
            let next = canon.len();
            raw[i] = *canon.entry(key).or_insert(next);
        }
        // renumber classes by first occurrence in node order
        let mut renumber: HashMap<usize, usize> = HashMap::new();
        let mut class = vec![0usize; self.len()];
        for i in 0..self.len() {
            let next = renumber.len();
            class[i] = *renumber.entry(raw[i]).or_insert(next);
        }
        let mut options = vec![Vec::new(); renumber.len()];
        let mut filled = vec![false; renumber.len()];
        for i in 0..self.len() {
            if !filled[class[i]] {
                filled[class[i]] = true;
                options[class[i]] = self.options[i].iter().map(|&j| class[j]).collect();
            }
        }
        Ok((GameTree::new(options)?, class))
    }
}

/// Nodes in an order where every option precedes its parent.
fn topological_order(tree: &GameTree) -> Result<Vec<usize>> {
    let n = tree.len();
    // 0 = unseen, 1 = on stack, 2 = done
    let mut state = vec![0u8; n];
    let mut order = Vec::with_capacity(n);
    for start in 0..n {
        if state[start] != 0 {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        state[start] = 1;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if let Some(&w) = tree.options[v].get(*next) {
                *next += 1;
                match state[w] {
                    0 => {
                        state[w] = 1;
                        stack.push((w, 0));
                    }
                    1 => return Err(Error::CyclicOptionRelation(w)),
                    _ => {}
                }
            } else {
                state[v] = 2;
                order.push(v);
                stack.pop();
            }
        }
    }
    Ok(order)
}

/// Length of the longest chain of options below each node.
pub fn birthdays(tree: &GameTree) -> Result<Vec<u64>> {
    let mut b = vec![0u64; tree.len()];
    for i in topological_order(tree)? {
        b[i] = tree.options[i].iter().map(|&j| b[j] + 1).max().unwrap_or(0);
    }
    Ok(b)
}

/// Sprague-Grundy value of every node.
pub fn grundy_values(tree: &GameTree) -> Result<Vec<u64>> {
    let mut g = vec![0u64; tree.len()];
    for i in topological_order(tree)? {
        let seen: BTreeSet<u64> = tree.options[i].iter().map(|&j| g[j]).collect();
        g[i] = (0..).find(|v| !seen.contains(v)).expect("mex exists");
    }
    Ok(g)
}

/// Nodes that become coordinates, in node order.
pub fn coordinate_nodes(tree: &GameTree) -> Vec<usize> {
    (0..tree.len()).filter(|&i| !tree.options[i].is_empty()).collect()
}

/// Encoding result: the game plus the node behind each coordinate.
#[derive(Clone, Debug)]
pub struct Encoded {
    pub game: LatticeGame<BigInt>,
    /// Tree actually encoded (the quotient when merging was requested).
    pub tree: GameTree,
    pub nodes: Vec<usize>,
}

/// Encode a tree. With `merge`, isomorphic subgames are identified first.
/// The certificate is `ell = birthday + 1` on every coordinate.
pub fn encode(tree: &GameTree, convention: Convention, merge: bool) -> Result<Encoded> {
    let tree = if merge { tree.merged()?.0 } else { tree.clone() };
    let birth = birthdays(&tree)?;
    let nodes = coordinate_nodes(&tree);
    let d = nodes.len();
    let index: HashMap<usize, usize> = nodes.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let mut moves: Vec<Point<BigInt>> = Vec::new();
    let mut seen = BTreeSet::new();
    for &i in &nodes {
        for &j in tree.options(i) {
            let mut v = vec![0i64; d];
            v[index[&i]] = 1;
            if let Some(&k) = index.get(&j) {
                v[k] = -1;
            }
            if seen.insert(v.clone()) {
                moves.push(Point::from_i64s(&v));
            }
        }
    }
    let ell = nodes.iter().map(|&i| BigRational::from_integer(BigInt::from(birth[i] + 1))).collect();
    let rules = RuleSet::with_certificate(moves, d, ell)?;
    let game = match convention {
        Convention::Normal => LatticeGame::normal(rules),
        Convention::Misere => LatticeGame::misere(rules),
        Convention::Custom => return Err(Error::Parse("encoding supports only normal and misere play".into())),
    };
    Ok(Encoded { game, tree, nodes })
}

/// Normal-play Grundy value of a position of the encoded game: the xor of
/// the Grundy values of the followers present an odd number of times.
pub fn grundy_oracle(tree: &GameTree, position: &Point<BigInt>) -> Result<u64> {
    let nodes = coordinate_nodes(tree);
    if position.dim() != nodes.len() {
        return Err(Error::DimensionMismatch { expected: nodes.len(), found: position.dim() });
    }
    let g = grundy_values(tree)?;
    let mut x = 0u64;
    for (k, &i) in nodes.iter().enumerate() {
        let odd = (&position[k] % 2u8).to_i64().is_some_and(|r| r != 0);
        if odd {
            x ^= g[i];
        }
    }
    Ok(x)
}

/// `*n` with all its followers `*n-1, ..., *0` as nodes `0..=n`.
pub fn nim_heap_tree(n: usize) -> GameTree {
    GameTree::new((0..=n).map(|i| (i + 1..=n).collect()).collect()).expect("heap tree is well formed")
}
