//! `ghz`: verification, state enumeration, export and game play for the GHZ
//! argument.
//!
//! Target strings list one sign per context in the order yyx, yxy, xyy, xxx
//! (three parties) or xx, xy, yx, yy (two parties).

mod verify;

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ghz_core::games::{
    self, classical_value, exact_win_probabilities, play_contextual, play_prbox, play_quantum,
    quantum_infeasibility, quantum_share_for, ClassicalStrategy, ContextDistribution, GameSpec,
    InfeasibilityCertificate, LocalBases, PlayReport, PrBoxStrategy, QuantumStrategy,
};
use ghz_core::logic::{
    self, enumerate_states, export, is_separating, listed_partitions, partition_logic,
    ExportFormat, Hypergraph,
};
use ghz_core::quantum::{outcome_entropy, seeded_rng, GhzBasis, SignTable, ValueSet};

const TARGET_HELP: &str = "one sign per context, in the order yyx yxy xyy xxx";
const PAIR_TARGET_HELP: &str = "one sign per context, in the order xx xy yx yy";

#[derive(Parser)]
#[command(name = "ghz", version, about = "Executable GHZ argument: operators, logics and games")]
struct Cli {
    /// Human-readable output instead of JSON
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recompute the operator block, sign table and expansions
    Verify {
        /// Run a single check
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(verify::CHECKS))]
        check: Option<String>,
    },
    /// Count the two-valued states of a logic
    States {
        /// isolated, tightened, listed, or a hypergraph JSON file
        logic: String,
        /// Print every state as a bit string over the atoms
        #[arg(long)]
        list: bool,
    },
    /// Partition logic induced by the two-valued states
    Partition {
        /// isolated, tightened, listed, or a hypergraph JSON file
        logic: String,
    },
    /// Analyse or play a three-party GHZ game
    Game {
        #[arg(allow_hyphen_values = true, help = TARGET_HELP)]
        targets: String,
        #[arg(value_enum)]
        mode: Mode,
        #[arg(long, default_value_t = 10_000)]
        rounds: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Play a two-party game with a PR box
    Prbox {
        #[arg(allow_hyphen_values = true, help = PAIR_TARGET_HELP)]
        targets: String,
        #[arg(long, default_value_t = 10_000)]
        rounds: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Negate the outputs of this party
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        flip: Option<u8>,
    },
    /// Write a logic as JSON or Graphviz DOT
    Export {
        logic: String,
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Entropy of the product of three uniform outcomes
    Entropy,
}

#[derive(Copy, Clone, ValueEnum)]
enum Mode {
    Classical,
    Quantum,
    Contextual,
}

enum Failure {
    /// Bad input; exit code 2.
    Usage(String),
    /// A check failed or the request has no answer; exit code 1.
    Failed(String),
}

impl From<ghz_core::Error> for Failure {
    fn from(e: ghz_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pretty = cli.pretty;
    let result = match cli.command {
        Command::Verify { check } => cmd_verify(check.as_deref()),
        Command::States { logic, list } => cmd_states(&logic, list),
        Command::Partition { logic } => cmd_partition(&logic, pretty),
        Command::Game { targets, mode, rounds, seed } => cmd_game(&targets, mode, rounds, seed, pretty),
        Command::Prbox { targets, rounds, seed, flip } => cmd_prbox(&targets, rounds, seed, flip, pretty),
        Command::Export { logic, format } => cmd_export(&logic, &format),
        Command::Entropy => Ok(cmd_entropy()),
    };
    match result {
        Ok(out) => {
            emit(&out);
            ExitCode::SUCCESS
        }
        Err(Failure::Failed(out)) => {
            emit(&out);
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Print to stdout; a closed pipe (`ghz ... | head`) is not an error.
fn emit(out: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{out}");
}

fn to_json<T: Serialize>(value: &T, pretty: bool) -> String {
    let out = if pretty { serde_json::to_string_pretty(value) } else { serde_json::to_string(value) };
    out.expect("report types serialize")
}

fn cmd_verify(only: Option<&str>) -> Outcome {
    let names: Vec<&'static str> = match only {
        Some(name) => verify::CHECKS.iter().copied().filter(|c| *c == name).collect(),
        None => verify::CHECKS.to_vec(),
    };
    let mut out = String::new();
    let mut first_failure = None;
    for name in names {
        let r = verify::run(name);
        let tag = if r.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{tag} {}: {}", r.name, r.detail);
        if !r.passed && first_failure.is_none() {
            first_failure = Some(r.name);
        }
    }
    match first_failure {
        None => Ok(out.trim_end().to_string()),
        Some(name) => {
            let _ = write!(out, "first failing check: {name}");
            Err(Failure::Failed(out))
        }
    }
}

fn load_logic(name: &str) -> Result<Hypergraph, Failure> {
    match name {
        "isolated" => Ok(logic::ghz_isolated_logic()),
        "tightened" => Ok(logic::tightened_ghz_logic()),
        "listed" => Ok(logic::listed_partition_logic()),
        path => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))?;
            Ok(Hypergraph::from_json(&text)?)
        }
    }
}

fn cmd_states(name: &str, list: bool) -> Outcome {
    let h = load_logic(name)?;
    let states = enumerate_states(&h, None);
    let mut out = format!("{} states, separating: {}", states.len(), is_separating(&h, &states));
    if list {
        for s in &states {
            out.push('\n');
            out.extend(s.to_bits().iter().map(|&b| if b == 1 { '1' } else { '0' }));
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct PartitionReport<'a> {
    logic: &'a str,
    state_count: usize,
    contexts: Vec<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    relabeling_from_listed: Option<Vec<usize>>,
}

fn cmd_partition(name: &str, pretty: bool) -> Outcome {
    let h = load_logic(name)?;
    let states = enumerate_states(&h, None);
    let pl = partition_logic(&h, &states)?;
    let relabeling = if name == "tightened" { pl.relabeling_from(&listed_partitions()) } else { None };
    if pretty {
        let mut out = format!("{} states", pl.state_count);
        for (k, blocks) in pl.contexts.iter().enumerate() {
            let names: Vec<String> = blocks.iter().map(logic::block_name).collect();
            let _ = write!(out, "\nC{}: {}", k + 1, names.join(" "));
        }
        if let Some(pi) = &relabeling {
            let _ = write!(out, "\nrelabeling from listed partitions: {pi:?}");
        }
        return Ok(out);
    }
    let report = PartitionReport {
        logic: name,
        state_count: pl.state_count,
        contexts: pl
            .contexts
            .iter()
            .map(|blocks| blocks.iter().map(|b| b.iter().copied().collect()).collect())
            .collect(),
        relabeling_from_listed: relabeling,
    };
    Ok(to_json(&report, false))
}

#[derive(Serialize)]
struct ClassicalReport {
    game: String,
    strategy: &'static str,
    value: f64,
    witnesses: Vec<ClassicalStrategy>,
}

#[derive(Serialize)]
struct PlayOutput<'a> {
    game: String,
    strategy: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    share: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact_win_probabilities: Option<Vec<f64>>,
    rounds: u64,
    plays_by_context: &'a [u64],
    wins_by_context: &'a [u64],
    win_rate: f64,
    seed: u64,
}

impl<'a> PlayOutput<'a> {
    fn new(g: &GameSpec, strategy: &'static str, report: &'a PlayReport, seed: u64) -> Self {
        PlayOutput {
            game: g.target_string(),
            strategy,
            share: None,
            exact_win_probabilities: None,
            rounds: report.rounds,
            plays_by_context: &report.plays_by_context,
            wins_by_context: &report.wins_by_context,
            win_rate: report.win_rate,
            seed,
        }
    }
}

fn render_play(g: &GameSpec, out: &PlayOutput) -> String {
    let mut text = format!("game {} ({} play", out.game, out.strategy);
    if let Some(share) = &out.share {
        let _ = write!(text, ", share {share}");
    }
    let _ = write!(text, ", seed {})", out.seed);
    for (k, ctx) in g.contexts.iter().enumerate() {
        let _ = write!(
            text,
            "\n  {ctx} target {}: won {}/{}",
            g.targets[k], out.wins_by_context[k], out.plays_by_context[k]
        );
    }
    let _ = write!(text, "\nwin rate {:.4} over {} rounds", out.win_rate, out.rounds);
    text
}

/// Optimal strategies, with the tabulated witness first when there is one.
fn witnesses(g: &GameSpec, mut optimal: Vec<ClassicalStrategy>) -> Vec<ClassicalStrategy> {
    if let Some((_, w)) = games::classical_witnesses().into_iter().find(|(wg, _)| wg == g) {
        if let Some(k) = optimal.iter().position(|s| *s == w) {
            let w = optimal.remove(k);
            optimal.insert(0, w);
        }
    }
    optimal
}

fn fmt_strategy(s: &ClassicalStrategy) -> String {
    let part = |v: &[ghz_core::Sign]| v.iter().map(|s| s.symbol()).collect::<String>();
    format!("x = {}, y = {}", part(&s.x), part(&s.y))
}

fn cmd_game(targets: &str, mode: Mode, rounds: u64, seed: u64, pretty: bool) -> Outcome {
    let g = GameSpec::parse_three_party(targets)?;
    let uniform = ContextDistribution::uniform(g.contexts.len());
    let mut rng = seeded_rng(seed);
    match mode {
        Mode::Classical => {
            let v = classical_value(&g, &uniform)?;
            let report = ClassicalReport {
                game: g.target_string(),
                strategy: "classical",
                value: v.value,
                witnesses: witnesses(&g, v.optimal),
            };
            if pretty {
                let mut text = format!("game {}: classical value {:.4}", report.game, report.value);
                let _ = write!(text, "\n{} optimal strategies", report.witnesses.len());
                for s in &report.witnesses {
                    let _ = write!(text, "\n  {}", fmt_strategy(s));
                }
                return Ok(text);
            }
            Ok(to_json(&report, false))
        }
        Mode::Quantum => {
            let Some(row) = quantum_share_for(&g, &SignTable::reference()) else {
                return Err(Failure::Failed(format!("game {}: no GHZ share exists", g.target_string())));
            };
            let s = QuantumStrategy::new(GhzBasis::standard().upsilon(row + 1).clone())?;
            let exact = exact_win_probabilities(&g, &s)?;
            let report = play_quantum(&g, &s, rounds, &uniform, &mut rng)?;
            let mut out = PlayOutput::new(&g, "quantum", &report, seed);
            out.share = Some(format!("U{}", row + 1));
            out.exact_win_probabilities = Some(exact);
            Ok(if pretty { render_play(&g, &out) } else { to_json(&out, false) })
        }
        Mode::Contextual => {
            let h = logic::tightened_ghz_logic();
            let pl = partition_logic(&h, &enumerate_states(&h, None))?;
            let report = play_contextual(&g, &pl, rounds, &uniform, &mut rng)?;
            let out = PlayOutput::new(&g, "contextual", &report, seed);
            Ok(if pretty { render_play(&g, &out) } else { to_json(&out, false) })
        }
    }
}

#[derive(Serialize)]
struct PrBoxOutput<'a> {
    game: String,
    classical_value: f64,
    quantum: InfeasibilityCertificate,
    strategy: &'static str,
    flip: Option<u8>,
    rounds: u64,
    plays_by_context: &'a [u64],
    wins_by_context: &'a [u64],
    win_rate: f64,
    seed: u64,
}

fn cmd_prbox(targets: &str, rounds: u64, seed: u64, flip: Option<u8>, pretty: bool) -> Outcome {
    let g = GameSpec::parse_two_party(targets)?;
    let uniform = ContextDistribution::uniform(g.contexts.len());
    let classical = classical_value(&g, &uniform)?.value;
    let certificate = quantum_infeasibility(&g, &LocalBases::standard())?;
    let strategy = PrBoxStrategy { flip: flip.map(|p| usize::from(p) - 1) };
    let report = play_prbox(&g, &strategy, rounds, &uniform, &mut seeded_rng(seed))?;
    let out = PrBoxOutput {
        game: g.target_string(),
        classical_value: classical,
        quantum: certificate,
        strategy: "pr-box",
        flip,
        rounds: report.rounds,
        plays_by_context: &report.plays_by_context,
        wins_by_context: &report.wins_by_context,
        win_rate: report.win_rate,
        seed,
    };
    if !pretty {
        return Ok(to_json(&out, false));
    }
    let verdict = if out.quantum.infeasible {
        "no perfect state in the fixed local bases"
    } else {
        "perfect state not excluded"
    };
    let mut text = format!(
        "game {}: classical value {:.4}, quantum: {verdict} (rank {} of {})",
        out.game, out.classical_value, out.quantum.rank, out.quantum.unknowns
    );
    for (k, ctx) in g.contexts.iter().enumerate() {
        let _ = write!(
            text,
            "\n  {ctx} target {}: won {}/{}",
            g.targets[k], out.wins_by_context[k], out.plays_by_context[k]
        );
    }
    let _ = write!(text, "\nbox win rate {:.4} over {} rounds (seed {})", out.win_rate, out.rounds, seed);
    Ok(text)
}

fn cmd_export(name: &str, format: &str) -> Outcome {
    let format: ExportFormat = format.parse()?;
    let h = load_logic(name)?;
    Ok(export(&h, format).trim_end().to_string())
}

fn cmd_entropy() -> String {
    format!(
        "H{{0,1}}^3 = {:.4}, H{{−1,+1}}^3 = {:.4}",
        outcome_entropy(ValueSet::ZeroOne),
        outcome_entropy(ValueSet::PlusMinusOne)
    )
}
