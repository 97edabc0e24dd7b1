//! `latgame` command-line front end.
//!
//! Every failure prints one line `error: <Kind>: <message>` on stderr and
//! exits with a code that identifies the kind.

use std::fmt::Write as _;
use std::io::{BufRead, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use latgame::encode::encode;
use latgame::genfun::{expand, strategy_from_pattern, verify_stratification, RationalStrategy};
use latgame::io::{
    board_game, game_from_spec_with, game_to_json, parse_game_spec, parse_strategy, parse_stratification, parse_tree,
};
use latgame::normal::solve_squarefree_normal;
use latgame::rules::{
    check_cone_containment, check_tangent_cone, find_positivity_functional, is_saturated, is_squarefree,
    squarefree_counterexample, well_formed, ConeContainment, RuleSet, TangentCone,
};
use latgame::solver::{best_move, classify, congruent_within, solve, Classification, Solution};
use latgame::{Convention, Error, Game, Position, Rational};
use num_bigint::BigInt;

#[derive(Debug)]
enum Failure {
    Core(Error),
    /// Core error with extra context appended to its message.
    Detailed(Error, String),
    Usage(String),
    Io(String),
    Argument(String),
    Mismatch(String),
    ConeContainment(usize),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Core(e) | Failure::Detailed(e, _) => e.exit_code() as u8,
            Failure::Io(_) => 30,
            Failure::Argument(_) => 31,
            Failure::Mismatch(_) => 40,
            Failure::ConeContainment(_) => 41,
            Failure::Usage(_) => 64,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Core(e) | Failure::Detailed(e, _) => e.kind(),
            Failure::Io(_) => "Io",
            Failure::Argument(_) => "BadArgument",
            Failure::Mismatch(_) => "Mismatch",
            Failure::ConeContainment(_) => "ConeContainment",
            Failure::Usage(_) => "Usage",
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Detailed(e, d) => format!("{e} ({d})"),
            Failure::Usage(m) | Failure::Io(m) | Failure::Argument(m) | Failure::Mismatch(m) => m.clone(),
            Failure::ConeContainment(i) => format!("e{i} is not in the cone of the moves"),
        }
    }

    fn line(&self) -> String {
        let msg: String = self.message().split_whitespace().collect::<Vec<_>>().join(" ");
        format!("error: {}: {}", self.kind(), msg)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<String, Failure>;

#[derive(Parser, Debug)]
#[command(name = "latgame", version, about = "Solve and analyse lattice games on N^d")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct GameArgs {
    /// Game definition JSON file, or `-` for stdin.
    game: PathBuf,
    /// Positivity certificate to use instead of the computed one, e.g. "1,2,3".
    #[arg(long)]
    ell: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConventionArg {
    Normal,
    Misere,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the rule-set and board axioms one by one.
    Validate {
        /// Game definition JSON file, or `-` for stdin.
        game: PathBuf,
    },
    /// Classify every position of the bounded region.
    Solve {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, allow_hyphen_values = true)]
        bound: Option<String>,
        /// Emit one JSON object per position instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Mod-2 pattern of a squarefree normal-play game.
    Pattern {
        #[command(flatten)]
        game: GameArgs,
    },
    /// Rational strategy, checked against the solver on the region.
    Genfun {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, allow_hyphen_values = true)]
        bound: Option<String>,
        /// Emit the strategy in its JSON form.
        #[arg(long)]
        json: bool,
    },
    /// Check a stratification or strategy file against the solver.
    VerifyStrat {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long)]
        strat: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        bound: Option<String>,
    },
    /// Winning move from an N-position.
    BestMove {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, allow_hyphen_values = true)]
        pos: String,
        #[arg(long, allow_hyphen_values = true)]
        bound: Option<String>,
    },
    /// Bounded congruence of two positions.
    Congruent {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long, allow_hyphen_values = true)]
        bound: Option<String>,
    },
    /// Encode a finite game tree as a lattice game.
    EncodeTree {
        /// Tree JSON file, or `-` for stdin.
        tree: PathBuf,
        #[arg(long, value_enum)]
        convention: ConventionArg,
        /// Identify isomorphic subgames first.
        #[arg(long)]
        merge: bool,
    },
    /// Read positions from stdin and answer with class and winning move.
    Play {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, allow_hyphen_values = true)]
        bound: Option<String>,
    },
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).map_err(|e| Failure::Io(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn parse_rational(text: &str, what: &str) -> Result<Rational, Failure> {
    let t = text.trim();
    let bad = || Failure::Argument(format!("{what}: expected an integer or a fraction a/b, got \"{t}\""));
    match t.split_once('/') {
        None => BigInt::from_str(t).map(Rational::from_integer).map_err(|_| bad()),
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d == BigInt::from(0) {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
    }
}

fn strip_brackets(text: &str) -> &str {
    let t = text.trim();
    for (open, close) in [('(', ')'), ('[', ']')] {
        if let Some(inner) = t.strip_prefix(open).and_then(|s| s.strip_suffix(close)) {
            return inner;
        }
    }
    t
}

fn parse_position(text: &str, dim: usize, what: &str) -> Result<Position, Failure> {
    let inner = strip_brackets(text);
    let coords = inner
        .split(',')
        .map(|c| {
            BigInt::from_str(c.trim())
                .map_err(|_| Failure::Argument(format!("{what}: expected comma-separated integers, got \"{text}\"")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if coords.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: coords.len() }.into());
    }
    Ok(Position::new(coords))
}

fn load_game(args: &GameArgs) -> Result<Game, Failure> {
    let spec = parse_game_spec(&read_input(&args.game)?)?;
    let ell = match &args.ell {
        None => None,
        Some(text) => Some(
            strip_brackets(text)
                .split(',')
                .map(|c| parse_rational(c, "--ell"))
                .collect::<Result<Vec<_>, _>>()?,
        ),
    };
    Ok(game_from_spec_with(spec, ell)?)
}

fn fmt_ell(ell: &[Rational]) -> String {
    let parts: Vec<String> = ell.iter().map(Rational::to_string).collect();
    format!("({})", parts.join(","))
}

fn default_bound(game: &Game) -> Rational {
    let max = game.rules().moves().iter().map(|m| game.ell_of(m.point())).max().unwrap_or_default();
    max * Rational::from_integer(10.into())
}

/// The bound to use and the header line reporting it.
fn resolve_bound(game: &Game, flag: &Option<String>) -> Result<(Rational, String), Failure> {
    Ok(match flag {
        Some(text) => {
            let l = parse_rational(text, "--bound")?;
            if l < Rational::from_integer(0.into()) {
                return Err(Error::NegativeBound.into());
            }
            let line = format!("bound: {l}");
            (l, line)
        }
        None => {
            let l = default_bound(game);
            let line = format!("bound: {l} (default 10*max ell(gamma))");
            (l, line)
        }
    })
}

fn header(game: &Game, bound_line: &str) -> String {
    format!(
        "game: dimension {}, {} moves, {} play\nell: {}\n{}\n",
        game.dim(),
        game.rules().moves().len(),
        game.convention().name(),
        fmt_ell(game.rules().ell()),
        bound_line
    )
}

fn cmd_validate(path: &Path) -> Outcome {
    let spec = parse_game_spec(&read_input(path)?)?;
    let dim = spec.dimension;
    let mut out = String::new();
    let moves = match well_formed(spec.rules.clone(), dim) {
        Ok(m) => m,
        Err(e) => {
            print!("well-formed: FAIL {e}\nvalid: no\n");
            return Err(e.into());
        }
    };
    let _ = writeln!(out, "well-formed: ok ({} moves, dimension {dim})", moves.len());
    let mut first: Option<Failure> = None;

    let ell = match find_positivity_functional::<BigInt, Rational>(&moves, dim) {
        Ok(ell) => {
            let _ = writeln!(out, "positivity: ok ell={}", fmt_ell(&ell));
            Some(ell)
        }
        Err(e) => {
            let _ = writeln!(out, "positivity: FAIL {e}");
            first.get_or_insert(e.into());
            None
        }
    };
    match check_tangent_cone(&moves, dim) {
        TangentCone::Ok => out.push_str("tangent cone: ok\n"),
        TangentCone::Violation(i) => {
            let _ = writeln!(out, "tangent cone: FAIL coordinate {i}");
            first.get_or_insert(Error::TangentConeViolation(i).into());
        }
    }
    let rules = match (&ell, &first) {
        (Some(ell), None) => Some(RuleSet::with_certificate(spec.rules.clone(), dim, ell.clone())?),
        _ => None,
    };
    match &rules {
        None => out.push_str("order ideal: skipped\n"),
        Some(r) => match board_game(r.clone(), spec.board.clone()) {
            Ok(g) => {
                let _ = writeln!(out, "order ideal: ok ({} defeated)", g.defeated().len());
            }
            Err(e) => {
                let _ = writeln!(out, "order ideal: FAIL {e}");
                first.get_or_insert(e.into());
            }
        },
    }
    if is_squarefree(&moves) {
        out.push_str("squarefree: yes\n");
    } else {
        match squarefree_counterexample(&moves) {
            Some((i, p)) => {
                let _ = writeln!(out, "squarefree: no (move {} with p={p})", moves[i].point());
            }
            None => out.push_str("squarefree: no\n"),
        }
    }
    let _ = writeln!(out, "saturated: {}", if is_saturated(&moves, dim) { "yes" } else { "no" });
    match &rules {
        None => out.push_str("cone containment: skipped\n"),
        Some(r) => match check_cone_containment(r) {
            ConeContainment::Ok => out.push_str("cone containment: ok\n"),
            ConeContainment::Failure(i) => {
                let _ = writeln!(out, "cone containment: FAIL coordinate {i}");
                first.get_or_insert(Failure::ConeContainment(i));
            }
        },
    }
    match first {
        None => {
            out.push_str("valid: yes\n");
            Ok(out)
        }
        Some(f) => {
            out.push_str("valid: no\n");
            print!("{out}");
            Err(f)
        }
    }
}

fn cmd_solve(args: &GameArgs, bound: &Option<String>, json: bool) -> Outcome {
    let game = load_game(args)?;
    let (l, line) = resolve_bound(&game, bound)?;
    let sol = solve(&game, &l)?;
    if json {
        eprintln!("{line}");
        return Ok(sol.to_json_lines());
    }
    let mut out = header(&game, &line);
    let ps = sol.p_positions().len();
    let _ = writeln!(out, "positions: {}, P: {ps}, N: {}", sol.len(), sol.len() - ps);
    for (p, class) in sol.sorted() {
        match sol.witness(p) {
            Some(i) => {
                let _ = writeln!(out, "{p} {} move {}", class.as_str(), game.rules().moves()[i].point());
            }
            None => {
                let _ = writeln!(out, "{p} {}", class.as_str());
            }
        }
    }
    Ok(out)
}

fn cmd_pattern(args: &GameArgs) -> Outcome {
    let game = load_game(args)?;
    let p0 = solve_squarefree_normal(&game)?;
    Ok(format!("P0 = {p0}; P = P0 + 2N^d\n"))
}

fn no_construction(game: &Game, e: Error) -> Failure {
    let reason = match e {
        Error::NotNormalPlay => format!("{} play", game.convention().name()),
        Error::NotSquarefree => "rule set is not squarefree".to_string(),
        Error::NoPeriodicSolution => "no mod-2 periodic solution".to_string(),
        other => return other.into(),
    };
    Failure::Detailed(Error::NoStrategyConstruction, reason)
}

/// First disagreement between an expansion and the solver's P-set.
fn compare_expansion(strategy: &RationalStrategy, sol: &Solution<BigInt>) -> Result<Option<String>, Failure> {
    let coeffs = expand(strategy, sol.region())?;
    for (p, class) in sol.sorted() {
        let c = coeffs.get(p).cloned().unwrap_or_default();
        let want = BigInt::from(u8::from(class == latgame::solver::Class::P));
        if c != want {
            return Ok(Some(format!("coefficient {c} at {p}, which is {}", class.as_str())));
        }
    }
    for (p, c) in &coeffs {
        if sol.game().is_defeated(p) && *c != BigInt::from(0) {
            return Ok(Some(format!("coefficient {c} at defeated position {p}")));
        }
    }
    Ok(None)
}

fn cmd_genfun(args: &GameArgs, bound: &Option<String>, json: bool) -> Outcome {
    let game = load_game(args)?;
    let (l, line) = resolve_bound(&game, bound)?;
    let p0 = solve_squarefree_normal(&game).map_err(|e| no_construction(&game, e))?;
    let strategy = strategy_from_pattern(&p0);
    let sol = solve(&game, &l)?;
    if let Some(m) = compare_expansion(&strategy, &sol)? {
        return Err(Failure::Mismatch(m));
    }
    let mut out = String::new();
    let _ = writeln!(out, "{line}");
    let _ = writeln!(out, "{strategy}");
    if json {
        let _ = writeln!(out, "{}", latgame::io::strategy_to_json(&strategy));
    }
    let _ = writeln!(out, "check: ok ({} positions)", sol.len());
    Ok(out)
}

fn cmd_verify_strat(args: &GameArgs, strat: &Path, bound: &Option<String>) -> Outcome {
    let game = load_game(args)?;
    let (l, line) = resolve_bound(&game, bound)?;
    let text = read_input(strat)?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    let is_strategy = value.get("terms").is_some();
    let sol = solve(&game, &l)?;
    let mut out = header(&game, &line);
    if is_strategy {
        let strategy = parse_strategy(&text, game.dim())?;
        if let Some(m) = compare_expansion(&strategy, &sol)? {
            print!("{out}");
            return Err(Failure::Mismatch(m));
        }
    } else {
        let st = parse_stratification(&text)?;
        if let Err(f) = verify_stratification(&st, &sol)? {
            let class = match f.class {
                Classification::P => "P",
                Classification::N => "N",
                Classification::Defeated => "defeated",
                Classification::OutOfRegion => "outside the region",
            };
            print!("{out}");
            return Err(Failure::Mismatch(format!(
                "{} mismatching positions; first {} is {class} and lies in {} parts",
                f.mismatches, f.position, f.count
            )));
        }
    }
    let _ = writeln!(out, "ok ({} positions)", sol.len());
    Ok(out)
}

fn describe(sol: &Solution<BigInt>, p: &Position) -> Result<String, Failure> {
    Ok(match classify(sol, p) {
        Classification::N => {
            let m = best_move(sol, p)?.point();
            format!("N move {m} to {}", p - m)
        }
        Classification::P => "P".to_string(),
        Classification::Defeated => "defeated".to_string(),
        Classification::OutOfRegion => "outside region".to_string(),
    })
}

fn cmd_best_move(args: &GameArgs, pos: &str, bound: &Option<String>) -> Outcome {
    let game = load_game(args)?;
    let p = parse_position(pos, game.dim(), "--pos")?;
    let (l, line) = resolve_bound(&game, bound)?;
    let sol = solve(&game, &l)?;
    let m = best_move(&sol, &p)?.point();
    Ok(format!("{line}\nmove {m} to {}\n", &p - m))
}

fn cmd_congruent(args: &GameArgs, p: &str, q: &str, bound: &Option<String>) -> Outcome {
    let game = load_game(args)?;
    let p = parse_position(p, game.dim(), "--p")?;
    let q = parse_position(q, game.dim(), "--q")?;
    let (l, line) = resolve_bound(&game, bound)?;
    for x in [&p, &q] {
        if !game.on_board(x) {
            return Err(Error::NotOnBoard(x.clone()).into());
        }
    }
    let reach = game.ell_of(&p).max(game.ell_of(&q)) + &l;
    let sol = solve(&game, &reach)?;
    let same = congruent_within(&sol, &p, &q, &l)?;
    Ok(format!("{line}\ncongruent: {same}\n"))
}

fn cmd_encode_tree(path: &Path, convention: ConventionArg, merge: bool) -> Outcome {
    let tree = parse_tree(&read_input(path)?)?;
    let conv = match convention {
        ConventionArg::Normal => Convention::Normal,
        ConventionArg::Misere => Convention::Misere,
    };
    let enc = encode(&tree, conv, merge)?;
    Ok(format!("{}\n", game_to_json(&enc.game)))
}

fn cmd_play(args: &GameArgs, bound: &Option<String>) -> Outcome {
    let game = load_game(args)?;
    let (l, line) = resolve_bound(&game, bound)?;
    let sol = solve(&game, &l)?;
    let stdout = std::io::stdout();
    let mut w = stdout.lock();
    let _ = write!(w, "{}", header(&game, &line));
    for input in std::io::stdin().lock().lines() {
        let input = input.map_err(|e| Failure::Io(format!("stdin: {e}")))?;
        let t = input.trim();
        if t.is_empty() {
            continue;
        }
        if t == "quit" || t == "exit" {
            break;
        }
        let reply = parse_position(t, game.dim(), "position").and_then(|p| Ok(format!("{p} {}", describe(&sol, &p)?)));
        let text = match reply {
            Ok(r) => r,
            Err(f) => f.line(),
        };
        let _ = writeln!(w, "{text}");
        let _ = w.flush();
    }
    Ok(String::new())
}

fn run(cli: Cli) -> Outcome {
    match &cli.command {
        Command::Validate { game } => cmd_validate(game),
        Command::Solve { game, bound, json } => cmd_solve(game, bound, *json),
        Command::Pattern { game } => cmd_pattern(game),
        Command::Genfun { game, bound, json } => cmd_genfun(game, bound, *json),
        Command::VerifyStrat { game, strat, bound } => cmd_verify_strat(game, strat, bound),
        Command::BestMove { game, pos, bound } => cmd_best_move(game, pos, bound),
        Command::Congruent { game, p, q, bound } => cmd_congruent(game, p, q, bound),
        Command::EncodeTree { tree, convention, merge } => cmd_encode_tree(tree, *convention, *merge),
        Command::Play { game, bound } => cmd_play(game, bound),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let reason: Vec<&str> = text.lines().take_while(|l| !l.trim().is_empty()).collect();
            let reason = reason.join(" ").trim_start_matches("error: ").to_string();
            eprintln!("{}", Failure::Usage(reason).line());
            return ExitCode::from(64);
        }
    };
    match run(cli) {
        Ok(out) => {
            let mut w = std::io::stdout().lock();
            let _ = w.write_all(out.as_bytes());
            let _ = w.flush();
            ExitCode::SUCCESS
        }
        Err(f) => {
            let _ = std::io::stdout().flush();
            eprintln!("{}", f.line());
            ExitCode::from(f.code())
        }
    }
}
