//! `placement-complex`: build legal and illegal complexes, ideals and game
//! polynomials of placement games from the command line.
//!
//! Exit status: 0 on success, 1 when a verification reports a failure
//! (`verify`, `check-strong`, `iso`, `replay`), 2 on usage or size errors.

use std::error::Error;
use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use placement_core::complex::are_isomorphic;
use placement_core::play::{parse_moves, render_moves, Arena, MatchState};
use placement_core::rulesets::{builtin, check_strong_placement, MinimalIllegalRuleset, Ruleset};
use placement_core::transform::Analysis;
use placement_core::{Board, Limits, SimplicialComplex};
use serde_json::json;

type CliResult<T> = Result<T, Box<dyn Error>>;

#[derive(Parser)]
#[command(name = "placement-complex", version, about = "Placement games as simplicial complexes and monomial ideals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Facets of the legal complex (maximal legal positions).
    Complex(GameArgs),
    /// Facets of the illegal complex (minimal illegal positions).
    Illegal(GameArgs),
    /// Legal and illegal ideals.
    Ideals(GameArgs),
    /// Game polynomial.
    Poly(GameArgs),
    /// Check legal ideal = facet ideal, illegal ideal = facet ideal of the
    /// illegal complex = Stanley-Reisner ideal of the legal complex.
    Verify(GameArgs),
    /// Exhaustively check that legality is hereditary.
    CheckStrong(GameArgs),
    /// Compare two legal complexes up to vertex relabeling.
    Iso {
        #[command(flatten)]
        game: GameArgs,
        /// Second game; defaults to the first.
        #[arg(long)]
        other_game: Option<String>,
        /// Second board; defaults to the first.
        #[arg(long)]
        other_board: Option<String>,
    },
    /// Replay a move sequence such as "L:x1 R:y3 L:x4".
    Replay {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long)]
        moves: String,
        #[arg(long, value_enum, default_value_t = ArenaKind::Board)]
        arena: ArenaKind,
    },
    /// Everything above as one JSON document.
    Export(GameArgs),
}

#[derive(Args, Clone)]
struct GameArgs {
    /// trivial, snort, col, nogo, domineering, or custom:<file>.
    #[arg(long)]
    game: String,
    /// path:N, cycle:N, grid:RxC, or a board file. Optional for custom games.
    #[arg(long)]
    board: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Largest board the enumerators accept.
    #[arg(long, env = "PLACEMENT_COMPLEX_CAP")]
    cap: Option<usize>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ArenaKind {
    Board,
    Legal,
    Illegal,
}

struct Outcome {
    output: String,
    success: bool,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome { output, success: true }
    }
}

impl GameArgs {
    fn limits(&self) -> Limits {
        self.cap.map(Limits::with_board_cap).unwrap_or_default()
    }

    fn ruleset(&self) -> CliResult<Arc<dyn Ruleset>> {
        load_ruleset(&self.game)
    }

    fn board(&self, ruleset: &dyn Ruleset) -> CliResult<Board> {
        match &self.board {
            Some(spec) => load_board(spec),
            None => default_board(&self.game, ruleset),
        }
    }

    fn analysis(&self) -> CliResult<Analysis> {
        let ruleset = self.ruleset()?;
        let board = self.board(ruleset.as_ref())?;
        Ok(Analysis::new(ruleset, board, &self.limits())?)
    }
}

fn load_ruleset(game: &str) -> CliResult<Arc<dyn Ruleset>> {
    if let Some(path) = game.strip_prefix("custom:") {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
        return Ok(Arc::new(MinimalIllegalRuleset::parse(game, &text)?));
    }
    Ok(builtin(game)?)
}

fn load_board(spec: &str) -> CliResult<Board> {
    let builtin_kind = spec
        .split_once(':')
        .is_some_and(|(kind, _)| matches!(kind, "path" | "cycle" | "grid"));
    if builtin_kind || !Path::new(spec).exists() {
        return Ok(spec.parse()?);
    }
    let text = std::fs::read_to_string(spec).map_err(|e| format!("cannot read {spec}: {e}"))?;
    Board::parse(&text).map_err(|e| format!("{spec}: {e}").into())
}

/// Custom rulesets may omit the board: a path long enough for every index.
fn default_board(game: &str, ruleset: &dyn Ruleset) -> CliResult<Board> {
    if !game.starts_with("custom:") {
        return Err("--board is required for builtin games".into());
    }
    let probe = Board::path(64)?;
    let needed = ruleset
        .basic_positions(&probe)?
        .iter()
        .flat_map(|bp| bp.cells.iter().copied())
        .max()
        .unwrap_or(1);
    Ok(Board::path(needed)?)
}

fn lines<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|i| format!("{i}\n")).collect()
}

fn pretty(value: &impl serde::Serialize) -> CliResult<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn render_complex(c: &SimplicialComplex, format: Format, name: &str) -> CliResult<String> {
    match format {
        Format::Text => Ok(lines(c.facets())),
        Format::Json => pretty(&c.to_json()),
        Format::Dot => Ok(c.to_dot(name)),
    }
}

fn no_dot(format: Format, verb: &str) -> CliResult<()> {
    if format == Format::Dot {
        return Err(format!("{verb} has no DOT output").into());
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<Outcome> {
    match cli.command {
        Command::Complex(args) => {
            let a = args.analysis()?;
            Ok(Outcome::ok(render_complex(&a.legal_complex(), args.format, "legal")?))
        }
        Command::Illegal(args) => {
            let a = args.analysis()?;
            Ok(Outcome::ok(render_complex(&a.illegal_complex()?, args.format, "illegal")?))
        }
        Command::Ideals(args) => {
            no_dot(args.format, "ideals")?;
            let a = args.analysis()?;
            let (legal, illegal) = (a.legal_ideal(), a.illegal_ideal());
            Ok(Outcome::ok(match args.format {
                Format::Json => pretty(&json!({
                    "legal_ideal": legal.generators(),
                    "illegal_ideal": illegal.generators(),
                }))?,
                _ => format!("legal ideal: {legal}\nillegal ideal: {illegal}\n"),
            }))
        }
        Command::Poly(args) => {
            no_dot(args.format, "poly")?;
            let p = args.analysis()?.game_polynomial();
            Ok(Outcome::ok(match args.format {
                Format::Json => pretty(&json!({
                    "coefficients": p.coefficients,
                    "legal_positions": p.evaluate(1),
                }))?,
                _ => format!("{p}\n"),
            }))
        }
        Command::Verify(args) => {
            no_dot(args.format, "verify")?;
            let report = args.analysis()?.verify_duality();
            let output = match args.format {
                Format::Json => pretty(&report)?,
                _ => format!("{report}\n"),
            };
            Ok(Outcome {
                output,
                success: report.all_hold(),
            })
        }
        Command::CheckStrong(args) => {
            no_dot(args.format, "check-strong")?;
            let ruleset = args.ruleset()?;
            let board = args.board(ruleset.as_ref())?;
            let violation = check_strong_placement(ruleset.as_ref(), &board, &args.limits())?;
            let output = match (args.format, &violation) {
                (Format::Json, v) => pretty(&json!({
                    "strong_placement": v.is_none(),
                    "violation": v.as_ref().map(|v| v.to_string()),
                }))?,
                (_, None) => "strong placement: OK\n".to_string(),
                (_, Some(v)) => format!("strong placement: FAIL ({v})\n"),
            };
            Ok(Outcome {
                output,
                success: violation.is_none(),
            })
        }
        Command::Iso {
            game,
            other_game,
            other_board,
        } => {
            no_dot(game.format, "iso")?;
            let first = game.analysis()?.legal_complex();
            let second_args = GameArgs {
                game: other_game.unwrap_or_else(|| game.game.clone()),
                board: other_board.or_else(|| game.board.clone()),
                ..game.clone()
            };
            let second = second_args.analysis()?.legal_complex();
            let witness = are_isomorphic(&first, &second)?;
            let output = match (game.format, &witness) {
                (Format::Json, w) => pretty(&json!({
                    "isomorphic": w.is_some(),
                    "witness": w.as_ref().map(|pairs| pairs
                        .iter()
                        .map(|(a, b)| (a.to_string(), b.to_string()))
                        .collect::<Vec<_>>()),
                }))?,
                (_, Some(pairs)) => format!(
                    "isomorphic: {}\n",
                    pairs.iter().map(|(a, b)| format!("{a}->{b}")).collect::<Vec<_>>().join(" ")
                ),
                (_, None) => "not isomorphic\n".to_string(),
            };
            Ok(Outcome {
                output,
                success: witness.is_some(),
            })
        }
        Command::Replay { game, moves, arena } => {
            no_dot(game.format, "replay")?;
            let moves = parse_moves(&moves)?;
            let a = game.analysis()?;
            let arena = Arc::new(match arena {
                ArenaKind::Board => Arena::Board(a.game().clone()),
                ArenaKind::Legal => Arena::LegalComplex(a.legal_complex()),
                ArenaKind::Illegal => Arena::IllegalComplex(a.illegal_complex()?),
            });
            let result = MatchState::replay(arena, &moves);
            let (output, success) = match (game.format, result) {
                (Format::Json, Ok(state)) => (
                    pretty(&json!({ "legal": true, "position": state.occupied() }))?,
                    true,
                ),
                (Format::Json, Err((i, e))) => (
                    pretty(&json!({ "legal": false, "rejected_move": i + 1, "reason": e.to_string() }))?,
                    false,
                ),
                (_, Ok(state)) => (
                    format!("moves: {}\nposition: {}\n", render_moves(&moves), state.occupied()),
                    true,
                ),
                (_, Err((i, e))) => (
                    format!("move {} ({}) rejected: {e}\n", i + 1, render_moves(&moves[i..=i])),
                    false,
                ),
            };
            Ok(Outcome { output, success })
        }
        Command::Export(args) => {
            no_dot(args.format, "export")?;
            Ok(Outcome::ok(pretty(&args.analysis()?.export()?)?))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            print!("{}", outcome.output);
            if outcome.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
