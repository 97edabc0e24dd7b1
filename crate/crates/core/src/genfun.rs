//! Rational generating functions and affine stratifications of P-sets.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice;
use crate::normal::{unpack, Pattern};
use crate::point::Point;
use crate::scalar::Coord;
use crate::solver::{classify, Classification, Region, Solution};

pub type Exponent = Point<BigInt>;

/// Descending lexicographic order on exponents: `t1` sorts before `t2`,
/// and a constant sorts last.
fn monomial_order(a: &Exponent, b: &Exponent) -> Ordering {
    b.cmp(a)
}

/// `sum(num) / prod_{a in den} (1 - t^a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    num: Vec<(Exponent, BigInt)>,
    den: Vec<Exponent>,
}

impl Term {
    pub fn new(num: Vec<(Exponent, BigInt)>, den: Vec<Exponent>) -> Self {
        let mut merged: BTreeMap<Exponent, BigInt> = BTreeMap::new();
        for (e, c) in num {
            *merged.entry(e).or_insert_with(BigInt::zero) += c;
        }
        let mut num: Vec<(Exponent, BigInt)> = merged.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        num.sort_by(|a, b| monomial_order(&a.0, &b.0));
        let mut den = den;
        den.sort_by(monomial_order);
        Term { num, den }
    }

    pub fn numerator(&self) -> &[(Exponent, BigInt)] {
        &self.num
    }

    pub fn denominator(&self) -> &[Exponent] {
        &self.den
    }

    fn key(&self) -> (usize, Vec<Exponent>, Vec<(Exponent, BigInt)>) {
        (self.den.len(), self.den.clone(), self.num.clone())
    }
}

/// A finite sum of terms, kept in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalStrategy {
    dim: usize,
    terms: Vec<Term>,
}

impl RationalStrategy {
    pub fn new(dim: usize, terms: Vec<Term>) -> Result<Self> {
        for t in &terms {
            for e in t.num.iter().map(|(e, _)| e).chain(&t.den) {
                if e.dim() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: e.dim() });
                }
                if !e.is_nonneg() {
                    return Err(Error::NegativeExponent(e.clone()));
                }
            }
            if t.den.iter().any(Point::is_zero) {
                return Err(Error::ZeroDenominatorVector);
            }
        }
        let mut terms: Vec<Term> = terms.into_iter().filter(|t| !t.num.is_empty()).collect();
        terms.sort_by_key(Term::key);
        Ok(RationalStrategy { dim, terms })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }
}

fn monomial_text(e: &Exponent) -> String {
    let mut s = String::new();
    for (i, c) in e.coords().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        s.push_str(&format!("t{}", i + 1));
        if !c.is_one() {
            s.push_str(&format!("^{c}"));
        }
    }
    if s.is_empty() {
        s.push('1');
    }
    s
}

fn signed_monomial(e: &Exponent, c: &BigInt) -> (bool, String) {
    let body = monomial_text(e);
    let mag = c.abs();
    let text = if mag.is_one() {
        body
    } else if e.is_zero() {
        mag.to_string()
    } else {
        format!("{mag}{body}")
    };
    (c.is_negative(), text)
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut num = String::new();
        for (k, (e, c)) in self.num.iter().enumerate() {
            let (neg, text) = signed_monomial(e, c);
            match (k, neg) {
                (0, false) => num.push_str(&text),
                (0, true) => num.push_str(&format!("-{text}")),
                (_, false) => num.push_str(&format!(" + {text}")),
                (_, true) => num.push_str(&format!(" - {text}")),
            }
        }
        if self.num.len() > 1 && !self.den.is_empty() {
            num = format!("({num})");
        }
        if self.den.is_empty() {
            return write!(f, "{num}");
        }
        let factors: String = self.den.iter().map(|a| format!("(1 - {})", monomial_text(a))).collect();
        if self.den.len() == 1 {
            write!(f, "{num} / {factors}")
        } else {
            write!(f, "{num} / ({factors})")
        }
    }
}

impl fmt::Display for RationalStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// Coefficients of the power series on a region, nonzero entries only.
pub fn expand(strategy: &RationalStrategy, region: &Region) -> Result<BTreeMap<Exponent, BigInt>> {
    if region.dim() != strategy.dim {
        return Err(Error::DimensionMismatch { expected: strategy.dim, found: region.dim() });
    }
    let mut points: Vec<Exponent> = region.points()?;
    points.sort_by_cached_key(|p| region.level(p));
    let mut total: BTreeMap<Exponent, BigInt> = BTreeMap::new();
    for term in &strategy.terms {
        let mut coef: HashMap<Exponent, BigInt> = term
            .num
            .iter()
            .filter(|(e, _)| region.contains(e))
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        // multiply by 1 / (1 - t^a): c'(p) = c(p) + c'(p - a), by increasing level
        for a in &term.den {
            let mut next: HashMap<Exponent, BigInt> = HashMap::new();
            for p in &points {
                let mut v = coef.get(p).cloned().unwrap_or_default();
                let below = p - a;
                if below.is_nonneg() {
                    if let Some(w) = next.get(&below) {
                        v += w;
                    }
                }
                if !v.is_zero() {
                    next.insert(p.clone(), v);
                }
            }
            coef = next;
        }
        for (p, c) in coef {
            *total.entry(p).or_insert_with(BigInt::zero) += c;
        }
    }
    total.retain(|_, c| !c.is_zero());
    Ok(total)
}

/// `sum_{p in P0} t^p / prod_i (1 - t_i^2)`.
pub fn strategy_from_pattern(p0: &Pattern) -> RationalStrategy {
    let d = p0.dim();
    if p0.is_empty() {
        return RationalStrategy { dim: d, terms: Vec::new() };
    }
    let num = p0
        .words()
        .iter()
        .map(|&w| {
            let e = Point::new(unpack(w, d).into_iter().map(|b| BigInt::from(b as u8)).collect());
            (e, BigInt::one())
        })
        .collect();
    let den = (0..d).map(|i| Point::unit(d, i).scale(&BigInt::from(2))).collect();
    RationalStrategy::new(d, vec![Term::new(num, den)]).expect("pattern exponents are valid")
}

/// A module `F + N A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Part {
    pub translates: Vec<Exponent>,
    pub generators: Vec<Exponent>,
}

/// A finite list of modules claimed to partition the P-positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineStratification {
    dim: usize,
    parts: Vec<Part>,
}

impl AffineStratification {
    pub fn new(dim: usize, parts: Vec<Part>) -> Result<Self> {
        for (i, part) in parts.iter().enumerate() {
            if part.translates.is_empty() {
                return Err(Error::InvalidPart(i, "empty translate set".into()));
            }
            for v in part.translates.iter().chain(&part.generators) {
                if v.dim() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: v.dim() });
                }
                if v.to_i64s().is_none() {
                    return Err(Error::InvalidPart(i, format!("entry of {v} exceeds 64 bits")));
                }
            }
            for a in &part.generators {
                if a.is_zero() {
                    return Err(Error::InvalidPart(i, "zero generator".into()));
                }
                if !a.is_nonneg() {
                    return Err(Error::InvalidPart(i, format!("generator {a} has a negative entry")));
                }
            }
        }
        Ok(AffineStratification { dim, parts })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    /// Number of parts containing `p`.
    pub fn membership_count(&self, p: &Exponent) -> usize {
        let Some(p) = p.to_i64s() else { return 0 };
        let compiled: Vec<CompiledPart> = self.parts.iter().map(CompiledPart::new).collect();
        compiled.iter().filter(|c| c.contains(&p)).count()
    }
}

/// A part with entries in machine words, generators sorted for pruning.
struct CompiledPart {
    translates: Vec<Vec<i64>>,
    generators: Vec<Vec<i64>>,
    /// `reach[k][j]`: some generator with index >= k is positive on `j`.
    reach: Vec<Vec<bool>>,
}

impl CompiledPart {
    fn new(part: &Part) -> Self {
        let translates = part.translates.iter().map(|f| f.to_i64s().expect("checked on construction")).collect();
        let generators: Vec<Vec<i64>> =
            part.generators.iter().map(|a| a.to_i64s().expect("checked on construction")).collect();
        let d = generators.first().map_or(0, Vec::len);
        let mut reach = vec![vec![false; d]; generators.len() + 1];
        for k in (0..generators.len()).rev() {
            for j in 0..d {
                reach[k][j] = reach[k + 1][j] || generators[k][j] > 0;
            }
        }
        CompiledPart { translates, generators, reach }
    }

    fn contains(&self, p: &[i64]) -> bool {
        self.translates.iter().any(|f| {
            let v: Vec<i64> = p.iter().zip(f).map(|(a, b)| a - b).collect();
            v.iter().all(|&x| x >= 0) && self.in_semigroup(&v, 0)
        })
    }

    /// Is `v >= 0` a nonnegative integer combination of generators `k..`?
    fn in_semigroup(&self, v: &[i64], k: usize) -> bool {
        if v.iter().all(|&x| x == 0) {
            return true;
        }
        if k == self.generators.len() {
            return false;
        }
        if v.iter().enumerate().any(|(j, &x)| x > 0 && !self.reach[k][j]) {
            return false;
        }
        let a = &self.generators[k];
        let mut w = v.to_vec();
        loop {
            if self.in_semigroup(&w, k + 1) {
                return true;
            }
            for (x, y) in w.iter_mut().zip(a) {
                *x -= y;
            }
            if w.iter().any(|&x| x < 0) {
                return false;
            }
        }
    }
}

/// First mismatch found by [`verify_stratification`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratificationFailure {
    pub position: Exponent,
    pub class: Classification,
    /// Number of parts containing the position.
    pub count: usize,
    /// Total number of mismatching positions in the region.
    pub mismatches: usize,
}

/// Every P-position of the region lies in exactly one part and every other
/// region position in none.
pub fn verify_stratification<T: Coord>(
    strat: &AffineStratification,
    solution: &Solution<T>,
) -> Result<std::result::Result<(), StratificationFailure>> {
    let dim = solution.game().dim();
    if strat.dim != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: strat.dim });
    }
    let compiled: Vec<CompiledPart> = strat.parts.iter().map(CompiledPart::new).collect();
    let mut first = None;
    let mut mismatches = 0;
    for p in solution.region().points::<T>()? {
        let class = classify(solution, &p);
        let big = p.to_bigint();
        let coords = big.to_i64s().expect("region coordinates fit in 64 bits");
        let count = compiled.iter().filter(|c| c.contains(&coords)).count();
        let expected = usize::from(class == Classification::P);
        if count != expected {
            mismatches += 1;
            if first.is_none() {
                first = Some((big, class, count));
            }
        }
    }
    Ok(match first {
        None => Ok(()),
        Some((position, class, count)) => Err(StratificationFailure { position, class, count, mismatches }),
    })
}

/// Points of `f + N A` inside the region, by direct enumeration.
pub fn enumerate_translate(f: &Exponent, generators: &[Exponent], region: &Region) -> Result<BTreeSet<Exponent>> {
    let mut seen = BTreeSet::new();
    let mut frontier = vec![f.clone()];
    let mut visited: HashSet<Exponent> = HashSet::from([f.clone()]);
    while let Some(p) = frontier.pop() {
        if region.level(&p) > *region.budget() {
            continue;
        }
        if p.is_nonneg() {
            seen.insert(p.clone());
        }
        for a in generators {
            let q = &p + a;
            if visited.insert(q.clone()) {
                frontier.push(q);
            }
        }
    }
    Ok(seen)
}

/// One term `sum_{f in F_i} t^f / prod_{a in A_i} (1 - t^a)` per part.
/// Requires independent generators and translates that do not overlap in
/// the given region.
pub fn strategy_from_stratification(strat: &AffineStratification, region: &Region) -> Result<RationalStrategy> {
    let mut terms = Vec::with_capacity(strat.parts.len());
    for (i, part) in strat.parts.iter().enumerate() {
        if !part.generators.is_empty() {
            let rows: Vec<Vec<BigInt>> = (0..strat.dim)
                .map(|j| part.generators.iter().map(|a| a[j].clone()).collect())
                .collect();
            if lattice::rational_rank(&rows) < part.generators.len() {
                return Err(Error::DependentGenerators(i));
            }
        }
        let mut owner: HashMap<Exponent, usize> = HashMap::new();
        for (k, f) in part.translates.iter().enumerate() {
            for p in enumerate_translate(f, &part.generators, region)? {
                if let Some(&prev) = owner.get(&p) {
                    return Err(Error::OverlappingTranslates {
                        part: i,
                        f: part.translates[prev].clone(),
                        g: f.clone(),
                        witness: p,
                    });
                }
                owner.insert(p, k);
            }
        }
        let num = part.translates.iter().map(|f| (f.clone(), BigInt::one())).collect();
        terms.push(Term::new(num, part.generators.clone()));
    }
    RationalStrategy::new(strat.dim, terms)
}

/// Whether every coefficient is 0 or 1.
pub fn is_indicator(coefficients: &BTreeMap<Exponent, BigInt>) -> bool {
    coefficients.values().all(|c| c.is_one() || c.is_zero())
}

/// Support of an expansion as a set, provided it is an indicator.
pub fn support(coefficients: &BTreeMap<Exponent, BigInt>) -> BTreeSet<Exponent> {
    coefficients.iter().filter(|(_, c)| !c.is_zero()).map(|(p, _)| p.clone()).collect()
}

/// Largest expansion coefficient in absolute value, for diagnostics.
pub fn max_abs_coefficient(coefficients: &BTreeMap<Exponent, BigInt>) -> Option<u64> {
    coefficients.values().map(|c| c.abs().to_u64().unwrap_or(u64::MAX)).max()
}
