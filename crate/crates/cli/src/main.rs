//! `qcoin`: run coin-flipping games, print bounds, sweep the angle, and
//! verify the cheating bounds numerically.

mod output;
mod suites;

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use base64::Engine;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qcoin::bounds::{solve_strong_equalization, solve_weak_equalization, BoundReport};
use qcoin::protocol::{run_exact, run_sampled, Game, OutcomeKind, Party, Strategy};
use qcoin::states::ProtocolParams;
use qcoin::strategies::{decode_adversary, named, AdversaryKind, AdversaryParams};
use qcoin::verify::{linspace, sweep};

use output::{csv, json, num, sig12, text_lines};
use suites::{Check, Suite};

#[derive(Parser)]
#[command(name = "qcoin", version, about = "Quantum weak and strong coin flipping: simulation and bound verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play one game between two strategies.
    Simulate(SimulateArgs),
    /// Print the closed-form cheating bounds at one angle.
    Bounds(BoundsArgs),
    /// Tabulate bounds and achieved cheating probabilities over an angle grid.
    Sweep(SweepArgs),
    /// Print the balancing angles of the weak and strong games.
    Optimize(OutputArgs),
    /// Run a verification suite; exits 1 if any check fails.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GameArg {
    Weak,
    Strong,
}

impl From<GameArg> for Game {
    fn from(g: GameArg) -> Self {
        match g {
            GameArg::Weak => Game::Weak,
            GameArg::Strong => Game::Strong,
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output format (default: json, or csv for sweep).
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the report to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Game, Alice's strategy and Bob's strategy, as an alternative to the flags.
    #[arg(value_name = "GAME ALICE BOB", num_args = 0..=3)]
    positional: Vec<String>,
    #[arg(long, value_enum)]
    game: Option<GameArg>,
    /// Angle in radians, or `optimal`.
    #[arg(long, default_value = "optimal")]
    alpha: String,
    #[arg(long)]
    alice: Option<String>,
    #[arg(long)]
    bob: Option<String>,
    #[arg(long, value_enum, default_value = "exact")]
    mode: Mode,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, value_enum, default_value = "weak")]
    game: GameArg,
    /// Angle in radians, or `optimal`.
    #[arg(long, default_value = "optimal")]
    alpha: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// `start:stop:points`; endpoints are radians or `pi`.
    #[arg(long, default_value = "0:pi:21")]
    grid: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    suite: Suite,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

fn resolve_alpha(spec: &str, game: Game) -> Result<f64> {
    let alpha = if spec == "optimal" {
        match game {
            Game::Weak => solve_weak_equalization(1e-12)?.alpha,
            Game::Strong => solve_strong_equalization().alpha,
        }
    } else {
        let a: f64 = spec.parse().map_err(|_| anyhow!("malformed angle `{spec}`: expected radians or `optimal`"))?;
        if !a.is_finite() {
            bail!("malformed angle `{spec}`");
        }
        a
    };
    ProtocolParams::new(alpha)?;
    Ok(alpha)
}

/// `chart:<base64>` or `chart:<kind>:<base64>`, base64 of little-endian f64s.
fn decode_chart(body: &str, seat: Party) -> Result<Strategy> {
    let (kind, data) = match body.split_once(':') {
        Some((k, d)) => {
            let kind = [AdversaryKind::AliceCommit, AdversaryKind::BobExtract, AdversaryKind::BobExtractBalanced]
                .into_iter()
                .find(|x| x.as_str() == k)
                .ok_or_else(|| anyhow!("unknown chart kind `{k}`"))?;
            (kind, d)
        }
        None if seat == Party::Alice => (AdversaryKind::AliceCommit, body),
        None => (AdversaryKind::BobExtract, body),
    };
    if kind.party() != seat {
        bail!("chart kind `{}` cannot sit in {:?}'s seat", kind.as_str(), seat);
    }
    let bytes =
        base64::engine::general_purpose::STANDARD.decode(data).context("chart parameters are not valid base64")?;
    if bytes.len() % 8 != 0 {
        bail!("chart parameters must be whole little-endian f64 values");
    }
    let values = bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect();
    Ok(decode_adversary(&AdversaryParams::new(kind, values)?)?)
}

fn strategy(name: &str, seat: Party, params: ProtocolParams) -> Result<Strategy> {
    match name.strip_prefix("chart:") {
        Some(body) => decode_chart(body, seat),
        None => named(name, seat, params).map_err(|e| anyhow!("{e}")),
    }
}

fn emit(text: String, out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct OutcomeRow {
    outcome: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    probability: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    count: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    frequency: Option<f64>,
}

#[derive(Serialize)]
struct SimulateReport {
    command: &'static str,
    game: String,
    alpha: f64,
    alice: String,
    bob: String,
    mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    generator: Option<&'static str>,
    outcomes: Vec<OutcomeRow>,
}

fn simulate(args: SimulateArgs) -> Result<()> {
    let pick = |flag: Option<String>, idx: usize, what: &str, default: &str| -> Result<String> {
        match (flag, args.positional.get(idx)) {
            (Some(f), Some(p)) if &f != p => bail!("{what} given twice: `{p}` and `{f}`"),
            (Some(f), _) => Ok(f),
            (None, Some(p)) => Ok(p.clone()),
            (None, None) => Ok(default.into()),
        }
    };
    let game_name = pick(args.game.map(|g| Game::from(g).to_string()), 0, "game", "weak")?;
    let game = match game_name.as_str() {
        "weak" => Game::Weak,
        "strong" => Game::Strong,
        other => bail!("unknown game `{other}`"),
    };
    let alice_name = pick(args.alice.clone(), 1, "Alice's strategy", "honest")?;
    let bob_name = pick(args.bob.clone(), 2, "Bob's strategy", "honest")?;
    let alpha = resolve_alpha(&args.alpha, game)?;
    let params = ProtocolParams::new(alpha)?;
    let alice = strategy(&alice_name, Party::Alice, params)?;
    let bob = strategy(&bob_name, Party::Bob, params)?;

    let mut report = SimulateReport {
        command: "simulate",
        game: game.to_string(),
        alpha: sig12(alpha),
        alice: alice_name,
        bob: bob_name,
        mode: "exact",
        trials: None,
        seed: None,
        generator: None,
        outcomes: vec![],
    };
    match args.mode {
        Mode::Exact => {
            let run = run_exact(game, &alice, &bob, params)?;
            report.outcomes = run
                .distribution()
                .into_iter()
                .map(|(k, p)| OutcomeRow {
                    outcome: k.as_str(),
                    probability: Some(sig12(p)),
                    count: None,
                    frequency: None,
                })
                .collect();
        }
        Mode::Sampled => {
            if args.trials < 1 {
                bail!("--trials must be at least 1");
            }
            let run = run_sampled(game, &alice, &bob, params, args.trials, args.seed)?;
            report.mode = "sampled";
            report.trials = Some(args.trials);
            report.seed = Some(args.seed);
            report.generator = Some("chacha20");
            report.outcomes = OutcomeKind::all_for(game)
                .iter()
                .map(|&k| OutcomeRow {
                    outcome: k.as_str(),
                    probability: None,
                    count: Some(run.count(k)),
                    frequency: Some(sig12(run.frequency(k))),
                })
                .collect();
        }
    }

    let text = match args.output.format.unwrap_or(Format::Json) {
        Format::Json => json(&report),
        Format::Csv => {
            let rows: Vec<Vec<String>> = report
                .outcomes
                .iter()
                .map(|o| match (o.probability, o.count, o.frequency) {
                    (Some(p), _, _) => vec![o.outcome.into(), num(p)],
                    (_, Some(c), Some(f)) => vec![o.outcome.into(), c.to_string(), num(f)],
                    _ => vec![o.outcome.into()],
                })
                .collect();
            match args.mode {
                Mode::Exact => csv(&["outcome", "probability"], &rows),
                Mode::Sampled => csv(&["outcome", "count", "frequency"], &rows),
            }
        }
        Format::Text => {
            let mut head = serde_json::to_value(&report)?;
            head.as_object_mut().expect("object").remove("outcomes");
            let mut s = text_lines(&head);
            for o in &report.outcomes {
                match (o.probability, o.count) {
                    (Some(p), _) => s.push_str(&format!("{} {}\n", o.outcome, num(p))),
                    (_, Some(c)) => s.push_str(&format!("{} {} {}\n", o.outcome, c, num(o.frequency.unwrap_or(0.0)))),
                    _ => {}
                }
            }
            s
        }
    };
    emit(text, &args.output.out)
}

#[derive(Serialize)]
struct BoundsReport {
    command: &'static str,
    game: String,
    alpha: f64,
    alice_weak: f64,
    bob_weak: f64,
    alice_strong: f64,
    bob_strong: f64,
    fidelity_rho: f64,
    trace_dist_rho: f64,
    weak_bias: f64,
    strong_bias: f64,
}

fn bounds(args: BoundsArgs) -> Result<()> {
    let game = Game::from(args.game);
    let r = BoundReport::at(resolve_alpha(&args.alpha, game)?)?;
    let report = BoundsReport {
        command: "bounds",
        game: game.to_string(),
        alpha: sig12(r.alpha),
        alice_weak: sig12(r.alice_weak),
        bob_weak: sig12(r.bob_weak),
        alice_strong: sig12(r.alice_strong),
        bob_strong: sig12(r.bob_strong),
        fidelity_rho: sig12(r.fidelity_rho),
        trace_dist_rho: sig12(r.trace_dist_rho),
        weak_bias: sig12(r.weak_bias),
        strong_bias: sig12(r.strong_bias),
    };
    let text = match args.output.format.unwrap_or(Format::Json) {
        Format::Json => json(&report),
        Format::Text => text_lines(&serde_json::to_value(&report)?),
        Format::Csv => flat_csv(&serde_json::to_value(&report)?),
    };
    emit(text, &args.output.out)
}

/// One header row and one value row from a flat object.
fn flat_csv(value: &serde_json::Value) -> String {
    let map = value.as_object().expect("flat report object");
    let header: Vec<&str> = map.keys().map(String::as_str).collect();
    let row = map
        .values()
        .map(|v| match v {
            serde_json::Value::String(s) => s.clone(),
            other => other.to_string(),
        })
        .collect();
    csv(&header, &[row])
}

const SWEEP_COLUMNS: [&str; 9] = [
    "alpha",
    "alice_weak_bound",
    "bob_weak_bound",
    "alice_weak_achieved",
    "bob_weak_achieved",
    "alice_strong_bound",
    "bob_strong_bound",
    "fidelity",
    "trace_distance",
];

fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, stop, points] = parts[..] else { bail!("grid must be `start:stop:points`, got `{spec}`") };
    let angle = |s: &str| -> Result<f64> {
        let v = if s == "pi" { PI } else { s.parse().map_err(|_| anyhow!("malformed grid endpoint `{s}`"))? };
        if !(0.0..=PI).contains(&v) {
            bail!("grid endpoint {s} is outside [0, pi]");
        }
        Ok(v)
    };
    let points: usize = points.parse().map_err(|_| anyhow!("malformed grid size `{points}`"))?;
    if points < 2 {
        bail!("a grid needs at least 2 points");
    }
    Ok(linspace(angle(start)?, angle(stop)?, points))
}

#[derive(Serialize)]
struct SweepJsonRow {
    alpha: f64,
    alice_weak_bound: f64,
    bob_weak_bound: f64,
    alice_weak_achieved: f64,
    bob_weak_achieved: f64,
    alice_strong_bound: f64,
    bob_strong_bound: f64,
    fidelity: f64,
    trace_distance: f64,
}

#[derive(Serialize)]
struct SweepReport {
    command: &'static str,
    rows: Vec<SweepJsonRow>,
}

fn sweep_cmd(args: SweepArgs) -> Result<()> {
    let rows = sweep(&parse_grid(&args.grid)?)?;
    let values: Vec<[f64; 9]> = rows
        .iter()
        .map(|r| {
            [
                r.alpha,
                r.alice_weak_bound,
                r.bob_weak_bound,
                r.alice_weak_achieved,
                r.bob_weak_achieved,
                r.alice_strong_bound,
                r.bob_strong_bound,
                r.fidelity,
                r.trace_distance,
            ]
            .map(sig12)
        })
        .collect();
    let text = match args.output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            csv(&SWEEP_COLUMNS, &values.iter().map(|v| v.iter().map(|&x| num(x)).collect()).collect::<Vec<_>>())
        }
        Format::Json => json(&SweepReport {
            command: "sweep",
            rows: values
                .iter()
                .map(|v| SweepJsonRow {
                    alpha: v[0],
                    alice_weak_bound: v[1],
                    bob_weak_bound: v[2],
                    alice_weak_achieved: v[3],
                    bob_weak_achieved: v[4],
                    alice_strong_bound: v[5],
                    bob_strong_bound: v[6],
                    fidelity: v[7],
                    trace_distance: v[8],
                })
                .collect(),
        }),
        Format::Text => {
            let mut s = SWEEP_COLUMNS.map(|c| format!("{c:>20}")).join("");
            s.push('\n');
            for v in &values {
                s.push_str(&v.iter().map(|&x| format!("{:>20}", num(x))).collect::<String>());
                s.push('\n');
            }
            s
        }
    };
    emit(text, &args.output.out)
}

#[derive(Serialize)]
struct Balance {
    alpha: f64,
    probability: f64,
    bias: f64,
}

#[derive(Serialize)]
struct OptimizeReport {
    command: &'static str,
    weak: Balance,
    strong: Balance,
}

fn optimize(args: OutputArgs) -> Result<()> {
    let balance = |e: qcoin::bounds::Equalization| Balance {
        alpha: sig12(e.alpha),
        probability: sig12(e.probability),
        bias: sig12(e.bias()),
    };
    let report = OptimizeReport {
        command: "optimize",
        weak: balance(solve_weak_equalization(1e-12)?),
        strong: balance(solve_strong_equalization()),
    };
    let rows = [("weak", &report.weak), ("strong", &report.strong)]
        .map(|(g, b)| vec![g.to_string(), num(b.alpha), num(b.probability), num(b.bias)]);
    let text = match args.format.unwrap_or(Format::Json) {
        Format::Json => json(&report),
        Format::Csv => csv(&["game", "alpha", "probability", "bias"], &rows),
        Format::Text => {
            rows.iter().map(|r| format!("{}: alpha {} probability {} bias {}\n", r[0], r[1], r[2], r[3])).collect()
        }
    };
    emit(text, &args.out)
}

#[derive(Serialize)]
struct VerifyReport {
    command: &'static str,
    suite: &'static str,
    seed: u64,
    passed: bool,
    checks: Vec<Check>,
}

fn verify(args: VerifyArgs) -> Result<bool> {
    let checks = suites::run(args.suite, args.seed)?;
    let report = VerifyReport {
        command: "verify",
        suite: args.suite.as_str(),
        seed: args.seed,
        passed: checks.iter().all(|c| c.pass),
        checks,
    };
    let text = match args.output.format.unwrap_or(Format::Json) {
        Format::Json => json(&report),
        Format::Csv => {
            let rows: Vec<Vec<String>> = report
                .checks
                .iter()
                .map(|c| {
                    let cmp =
                        serde_json::to_value(c.comparison).expect("enum").as_str().unwrap_or_default().to_string();
                    vec![c.name.clone(), cmp, num(c.expected), num(c.got), num(c.tolerance), c.pass.to_string()]
                })
                .collect();
            csv(&["name", "comparison", "expected", "got", "tolerance", "pass"], &rows)
        }
        Format::Text => {
            let mut s: String = report
                .checks
                .iter()
                .map(|c| {
                    format!(
                        "{} {} got={} expected={} tolerance={}\n",
                        if c.pass { "PASS" } else { "FAIL" },
                        c.name,
                        num(c.got),
                        num(c.expected),
                        num(c.tolerance)
                    )
                })
                .collect();
            s.push_str(&format!("suite {}: {}\n", report.suite, if report.passed { "pass" } else { "fail" }));
            s
        }
    };
    emit(text, &args.output.out)?;
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => simulate(a).map(|_| true),
        Command::Bounds(a) => bounds(a).map(|_| true),
        Command::Sweep(a) => sweep_cmd(a).map(|_| true),
        Command::Optimize(a) => optimize(a).map(|_| true),
        Command::Verify(a) => verify(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
