//! JSON file formats. All numbers are arbitrary-precision integers;
//! fractional or exponent notation is rejected.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{Map, Value};

use crate::encode::GameTree;
use crate::error::{Error, Result};
use crate::game::{Convention, LatticeGame};
use crate::genfun::{AffineStratification, Part, RationalStrategy, Term};
use crate::point::Point;
use crate::rules::{validate_ruleset, RuleSet};

fn parse_value(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn object<'a>(v: &'a Value, ctx: &str, allowed: &[&str]) -> Result<&'a Map<String, Value>> {
    let map = v.as_object().ok_or_else(|| Error::Parse(format!("{ctx}: expected an object")))?;
    if let Some(k) = map.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(Error::Parse(format!("{ctx}: unknown key \"{k}\"")));
    }
    Ok(map)
}

fn field<'a>(map: &'a Map<String, Value>, key: &str, ctx: &str) -> Result<&'a Value> {
    map.get(key).ok_or_else(|| Error::Parse(format!("{ctx}: missing key \"{key}\"")))
}

fn array<'a>(v: &'a Value, ctx: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Parse(format!("{ctx}: expected an array")))
}

/// An integer literal. Decimal points and exponents are not integers here,
/// even when their value is whole.
pub fn parse_int(v: &Value, ctx: &str) -> Result<BigInt> {
    let Value::Number(n) = v else {
        return Err(Error::Parse(format!("{ctx}: expected an integer")));
    };
    let text = n.to_string();
    let digits = text.strip_prefix('-').unwrap_or(&text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("{ctx}: non-integer number {text}")));
    }
    BigInt::from_str(&text).map_err(|e| Error::Parse(format!("{ctx}: {e}")))
}

fn parse_usize(v: &Value, ctx: &str) -> Result<usize> {
    let n = parse_int(v, ctx)?;
    usize::try_from(n).map_err(|_| Error::Parse(format!("{ctx}: expected a nonnegative index")))
}

fn parse_point(v: &Value, dim: usize, ctx: &str) -> Result<Point<BigInt>> {
    let items = array(v, ctx)?;
    if items.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: items.len() });
    }
    let coords = items.iter().enumerate().map(|(i, x)| parse_int(x, &format!("{ctx}[{i}]"))).collect::<Result<_>>()?;
    Ok(Point::new(coords))
}

fn parse_points(v: &Value, dim: usize, ctx: &str) -> Result<Vec<Point<BigInt>>> {
    array(v, ctx)?
        .iter()
        .enumerate()
        .map(|(i, x)| parse_point(x, dim, &format!("{ctx}[{i}]")))
        .collect()
}

/// Raw contents of a game file, before validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameSpec {
    pub dimension: usize,
    pub rules: Vec<Point<BigInt>>,
    pub board: BoardSpec,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoardSpec {
    Convention(Convention),
    Defeated(Vec<Point<BigInt>>),
}

/// Parse without running any axiom checks.
pub fn parse_game_spec(text: &str) -> Result<GameSpec> {
    let v = parse_value(text)?;
    let map = object(&v, "game", &["dimension", "rules", "defeated", "convention"])?;
    let dimension = parse_usize(field(map, "dimension", "game")?, "dimension")?;
    let rules = parse_points(field(map, "rules", "game")?, dimension, "rules")?;
    let board = match (map.get("defeated"), map.get("convention")) {
        (Some(_), Some(_)) => return Err(Error::Parse("game: both \"defeated\" and \"convention\" given".into())),
        (Some(d), None) => BoardSpec::Defeated(parse_points(d, dimension, "defeated")?),
        (None, Some(c)) => match c.as_str() {
            Some("normal") => BoardSpec::Convention(Convention::Normal),
            Some("misere") => BoardSpec::Convention(Convention::Misere),
            _ => return Err(Error::Parse("convention: expected \"normal\" or \"misere\"".into())),
        },
        (None, None) => return Err(Error::Parse("game: missing \"defeated\" or \"convention\"".into())),
    };
    Ok(GameSpec { dimension, rules, board })
}

/// Parse and fully validate a game file.
pub fn parse_game(text: &str) -> Result<LatticeGame<BigInt>> {
    game_from_spec(parse_game_spec(text)?)
}

pub fn game_from_spec(spec: GameSpec) -> Result<LatticeGame<BigInt>> {
    game_from_spec_with(spec, None)
}

/// As [`game_from_spec`], optionally with a caller-supplied positivity
/// certificate instead of a computed one.
pub fn game_from_spec_with(spec: GameSpec, ell: Option<Vec<BigRational>>) -> Result<LatticeGame<BigInt>> {
    let rules = match ell {
        Some(ell) => RuleSet::with_certificate(spec.rules, spec.dimension, ell)?,
        None => validate_ruleset(spec.rules, spec.dimension)?,
    };
    board_game(rules, spec.board)
}

pub fn board_game(rules: RuleSet<BigInt>, board: BoardSpec) -> Result<LatticeGame<BigInt>> {
    match board {
        BoardSpec::Convention(Convention::Misere) => Ok(LatticeGame::misere(rules)),
        BoardSpec::Convention(_) => Ok(LatticeGame::normal(rules)),
        BoardSpec::Defeated(d) => LatticeGame::with_defeated(rules, d),
    }
}

fn point_json(p: &Point<BigInt>) -> String {
    let parts: Vec<String> = p.coords().iter().map(BigInt::to_string).collect();
    format!("[{}]", parts.join(","))
}

fn points_json<'a>(ps: impl IntoIterator<Item = &'a Point<BigInt>>) -> String {
    let parts: Vec<String> = ps.into_iter().map(point_json).collect();
    format!("[{}]", parts.join(","))
}

/// Compact game file with keys in the documented order.
pub fn game_to_json(game: &LatticeGame<BigInt>) -> String {
    let rules = points_json(game.rules().moves().iter().map(|m| m.point()));
    let board = match game.convention() {
        Convention::Normal => "\"convention\":\"normal\"".to_string(),
        Convention::Misere => "\"convention\":\"misere\"".to_string(),
        Convention::Custom => format!("\"defeated\":{}", points_json(game.defeated())),
    };
    format!("{{\"dimension\":{},\"rules\":{},{}}}", game.dim(), rules, board)
}

pub fn parse_stratification(text: &str) -> Result<AffineStratification> {
    let v = parse_value(text)?;
    let map = object(&v, "stratification", &["dimension", "parts"])?;
    let dim = parse_usize(field(map, "dimension", "stratification")?, "dimension")?;
    let mut parts = Vec::new();
    for (i, p) in array(field(map, "parts", "stratification")?, "parts")?.iter().enumerate() {
        let ctx = format!("parts[{i}]");
        let pm = object(p, &ctx, &["F", "A"])?;
        parts.push(Part {
            translates: parse_points(field(pm, "F", &ctx)?, dim, &format!("{ctx}.F"))?,
            generators: parse_points(field(pm, "A", &ctx)?, dim, &format!("{ctx}.A"))?,
        });
    }
    AffineStratification::new(dim, parts)
}

pub fn stratification_to_json(s: &AffineStratification) -> String {
    let parts: Vec<String> = s
        .parts()
        .iter()
        .map(|p| format!("{{\"F\":{},\"A\":{}}}", points_json(&p.translates), points_json(&p.generators)))
        .collect();
    format!("{{\"dimension\":{},\"parts\":[{}]}}", s.dim(), parts.join(","))
}

pub fn parse_tree(text: &str) -> Result<GameTree> {
    let v = parse_value(text)?;
    let map = object(&v, "tree", &["options"])?;
    let lists = array(field(map, "options", "tree")?, "options")?;
    let options = lists
        .iter()
        .enumerate()
        .map(|(i, l)| {
            array(l, &format!("options[{i}]"))?
                .iter()
                .enumerate()
                .map(|(k, j)| parse_usize(j, &format!("options[{i}][{k}]")))
                .collect::<Result<Vec<usize>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    GameTree::new(options)
}

pub fn tree_to_json(tree: &GameTree) -> String {
    let lists: Vec<String> = tree
        .option_lists()
        .iter()
        .map(|l| format!("[{}]", l.iter().map(usize::to_string).collect::<Vec<_>>().join(",")))
        .collect();
    format!("{{\"options\":[{}]}}", lists.join(","))
}

/// Structural JSON form of a strategy.
pub fn strategy_to_json(s: &RationalStrategy) -> String {
    let mut out = String::from("{\"terms\":[");
    for (k, t) in s.terms().iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        let num: Vec<String> = t
            .numerator()
            .iter()
            .map(|(e, c)| format!("{{\"exp\":{},\"coef\":{}}}", point_json(e), c))
            .collect();
        let _ = write!(out, "{{\"num\":[{}],\"den\":{}}}", num.join(","), points_json(t.denominator()));
    }
    out.push_str("]}");
    out
}

pub fn parse_strategy(text: &str, dim: usize) -> Result<RationalStrategy> {
    let v = parse_value(text)?;
    let map = object(&v, "strategy", &["terms"])?;
    let mut terms = Vec::new();
    for (i, t) in array(field(map, "terms", "strategy")?, "terms")?.iter().enumerate() {
        let ctx = format!("terms[{i}]");
        let tm = object(t, &ctx, &["num", "den"])?;
        let mut num = Vec::new();
        for (k, m) in array(field(tm, "num", &ctx)?, &format!("{ctx}.num"))?.iter().enumerate() {
            let mctx = format!("{ctx}.num[{k}]");
            let mm = object(m, &mctx, &["exp", "coef"])?;
            num.push((
                parse_point(field(mm, "exp", &mctx)?, dim, &format!("{mctx}.exp"))?,
                parse_int(field(mm, "coef", &mctx)?, &format!("{mctx}.coef"))?,
            ));
        }
        let den = parse_points(field(tm, "den", &ctx)?, dim, &format!("{ctx}.den"))?;
        terms.push(Term::new(num, den));
    }
    RationalStrategy::new(dim, terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    const NIM: &str = r#"{"dimension":2,"rules":[[1,0],[0,1],[-1,1]],"convention":"normal"}"#;

    #[test]
    fn game_round_trip() {
        let g = parse_game(NIM).unwrap();
        assert_eq!(game_to_json(&g), NIM);
        let m = parse_game(r#"{"dimension":2,"rules":[[1,0],[0,1],[-1,1]],"defeated":[[0,0]]}"#).unwrap();
        assert_eq!(m.convention(), Convention::Misere);
    }

    #[test]
    fn big_integers_survive() {
        let text = r#"{"dimension":1,"rules":[[123456789012345678901234567890]],"convention":"normal"}"#;
        let spec = parse_game_spec(text).unwrap();
        assert_eq!(spec.rules[0][0].to_string(), "123456789012345678901234567890");
    }

    #[test]
    fn non_integers_rejected() {
        for bad in ["1.0", "1e2", "0.5", "\"1\""] {
            let text = format!(r#"{{"dimension":1,"rules":[[{bad}]],"convention":"normal"}}"#);
            assert!(matches!(parse_game_spec(&text), Err(Error::Parse(_))), "{bad}");
        }
    }

    #[test]
    fn malformed_input() {
        assert!(matches!(parse_game("{"), Err(Error::Parse(_))));
        assert!(matches!(parse_game(r#"{"dimension":2,"rules":[]}"#), Err(Error::Parse(_))));
        assert!(matches!(
            parse_game(r#"{"dimension":2,"rules":[[1,0,0]],"convention":"normal"}"#),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            parse_game(r#"{"dimension":1,"rules":[[1]],"convention":"normal","extra":1}"#),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn order_ideal_checked_on_load() {
        let text = r#"{"dimension":2,"rules":[[1,0],[0,1],[-1,1]],"defeated":[[0,1]]}"#;
        assert_eq!(parse_game(text).unwrap_err(), Error::NotAnOrderIdeal(Point::from_i64s(&[0, 0])));
    }

    #[test]
    fn stratification_and_tree_round_trip() {
        let text = r#"{"dimension":2,"parts":[{"F":[[1,0]],"A":[[2,0]]},{"F":[[0,2]],"A":[[2,0],[0,2]]}]}"#;
        assert_eq!(stratification_to_json(&parse_stratification(text).unwrap()), text);
        let tree = r#"{"options":[[1,2],[2],[]]}"#;
        assert_eq!(tree_to_json(&parse_tree(tree).unwrap()), tree);
    }

    #[test]
    fn strategy_round_trip() {
        let text = r#"{"terms":[{"num":[{"exp":[1,0],"coef":1}],"den":[[2,0]]},{"num":[{"exp":[0,2],"coef":1}],"den":[[2,0],[0,2]]}]}"#;
        let s = parse_strategy(text, 2).unwrap();
        assert_eq!(s.to_string(), "t1 / (1 - t1^2) + t2^2 / ((1 - t1^2)(1 - t2^2))");
        assert_eq!(strategy_to_json(&s), text);
    }
}
