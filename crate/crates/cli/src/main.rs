//! Command-line front end for the scrip-bidding equilibrium engine: compiles
//! auction and bargaining specs into game files, solves games by either
//! solver, audits equilibrium properties, computes critical budget
//! fractions, and exports plot-ready CSV.
//!
//! Exit codes: 0 success, 1 audit failure, 2 usage error, 3 invalid input.
//! Diagnostics go to stderr; data goes to stdout or `--out`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use scripbid_core::analysis::{
    check_budget_intervals, check_monotone, check_pareto_optimal, check_surjective,
    price_trajectory, verify_pspe, AuditReport,
};
use scripbid_core::compilers::{
    compile_additive, compile_bargaining, compile_multiweight, compile_naive, fixture,
    hgame_tie_breaks, BargainingSpec, Fixture, SsaSpec, Valuation,
};
use scripbid_core::random::random_binary_tree;
use scripbid_core::richman::{richman_values, satisfaction_rank, tictactoe, to_win_lose, ZeroSumGame};
use scripbid_core::solver_fast::{find_pspe_fast, FastSolution};
use scripbid_core::solver_grid::{find_lower_pspe_grid, GridConfig, GridMode, StrategyTables};
use scripbid_core::{BiddingGame, Dyadic, OutcomeMap, Player, TieBreak};

/// Flag combination that parses but asks for something unsupported.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// An audit ran to completion and found violations.
#[derive(Debug)]
struct AuditFailure(String);

impl std::fmt::Display for AuditFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for AuditFailure {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<UsageError>() {
                ExitCode::from(2)
            } else if e.is::<AuditFailure>() {
                ExitCode::from(1)
            } else {
                ExitCode::from(3)
            }
        }
    }
}

#[derive(Parser)]
#[command(
    name = "scripbid",
    version,
    about = "Exact equilibrium engine for two-player sequential scrip-bidding games"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compile an auction or bargaining spec (JSON) into a game file.
    Compile(CompileArgs),
    /// Solve a game and report the equilibrium outcome at one budget.
    Solve(SolveArgs),
    /// Dump the full budget-to-outcome map, one row per interval.
    Sweep(SweepArgs),
    /// Audit a solved game: efficiency, monotonicity, deviation-freeness.
    Verify(VerifyArgs),
    /// Critical budget fractions of a win/lose game.
    Richman(RichmanArgs),
    /// Winning bid of each auction round along equilibrium play.
    Prices(PricesArgs),
    /// Write the built-in example games (and optional random ones) to files.
    Fixtures(FixturesArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Interval-profile solver (exact, fast on large games).
    Fast,
    /// Cell-by-cell budget-grid solver (exact; supports --epsilon/--discrete).
    Grid,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Args)]
struct GridOpts {
    /// Budget grid step, a dyadic literal `1/2^k` (grid solver only).
    #[arg(long, value_parser = parse_dyadic)]
    epsilon: Option<Dyadic>,
    /// Integer budget mode: budgets are whole numbers summing to M.
    #[arg(long, value_name = "M", conflicts_with = "epsilon")]
    discrete: Option<u32>,
}

impl GridOpts {
    fn any(&self) -> bool {
        self.epsilon.is_some() || self.discrete.is_some()
    }

    fn config(&self) -> GridConfig {
        let mode = match (&self.epsilon, self.discrete) {
            (_, Some(total)) => GridMode::Discrete { total },
            (eps, None) => GridMode::Continuous { epsilon: eps.clone() },
        };
        GridConfig { mode, tie_break: TieBreak::white() }
    }
}

#[derive(Args)]
struct CompileArgs {
    /// Spec file: `{"k", "order"?, "valuation"}` for auctions or
    /// `{"frontier": [[x, y], ...]}` for bargaining.
    #[arg(long = "spec", value_name = "FILE")]
    spec: PathBuf,
    /// Expand auctions to the full per-bundle tree instead of merging
    /// same-value states.
    #[arg(long)]
    naive: bool,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    /// Game file (JSON).
    #[arg(long, value_name = "FILE")]
    game: PathBuf,
    /// White's initial budget: a dyadic literal `p/2^k` (an integer in
    /// --discrete mode).
    #[arg(long, value_parser = parse_dyadic)]
    budget: Dyadic,
    /// Solver; defaults to fast, or to grid when a grid flag is given.
    #[arg(long, value_enum)]
    method: Option<Method>,
    #[command(flatten)]
    grid: GridOpts,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Also write the solved interval tables (fast solver only), in the
    /// format `verify --solution` reads back.
    #[arg(long, value_name = "FILE")]
    save_solution: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_name = "FILE")]
    game: PathBuf,
    /// Solver; defaults to fast, or to grid when a grid flag is given.
    #[arg(long, value_enum)]
    method: Option<Method>,
    #[command(flatten)]
    grid: GridOpts,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    Pareto,
    Monotone,
    Surjective,
    Pspe,
    Intervals,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_name = "FILE")]
    game: PathBuf,
    /// Comma-separated audits to run.
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "pareto,monotone,surjective,pspe,intervals"
    )]
    checks: Vec<Check>,
    /// Solver producing the audited outcome map; defaults to grid.
    #[arg(long, value_enum)]
    method: Option<Method>,
    /// Solved interval tables (as written by the fast solver) to audit in
    /// place of solving; applies to the outcome-map checks.
    #[arg(long, value_name = "FILE")]
    solution: Option<PathBuf>,
    #[command(flatten)]
    grid: GridOpts,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RichmanArgs {
    /// Win/lose game file (JSON with per-player move lists and winners).
    #[arg(long, value_name = "FILE")]
    game: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PricesArgs {
    #[arg(long, value_name = "FILE")]
    game: PathBuf,
    /// White's initial budget (dyadic literal `p/2^k`).
    #[arg(long, value_parser = parse_dyadic)]
    budget: Dyadic,
    #[command(flatten)]
    grid: GridOpts,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FixturesArgs {
    /// Directory to write into (created if missing).
    #[arg(long, value_name = "DIR", default_value = "fixtures")]
    dir: PathBuf,
    /// Also write this many seeded random binary trees.
    #[arg(long, value_name = "N", default_value_t = 0)]
    random: u32,
    /// First seed for --random.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_dyadic(s: &str) -> Result<Dyadic, String> {
    s.parse::<Dyadic>().map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Compile(a) => cmd_compile(a),
        Cmd::Solve(a) => cmd_solve(a),
        Cmd::Sweep(a) => cmd_sweep(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Richman(a) => cmd_richman(a),
        Cmd::Prices(a) => cmd_prices(a),
        Cmd::Fixtures(a) => cmd_fixtures(a),
    }
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_game(path: &Path) -> Result<BiddingGame> {
    let text = read_file(path)?;
    BiddingGame::from_json_str(&text).with_context(|| format!("parsing game {}", path.display()))
}

fn emit(out: &Option<PathBuf>, data: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, data).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{data}");
            Ok(())
        }
    }
}

/// Resolves the solver choice: grid flags imply the grid solver and reject
/// an explicit --method fast.
fn resolve_method(method: Option<Method>, grid: &GridOpts, default: Method) -> Result<Method> {
    match method {
        Some(Method::Fast) if grid.any() => Err(UsageError(
            "--epsilon/--discrete configure the grid solver; drop them or use --method grid"
                .into(),
        )
        .into()),
        Some(m) => Ok(m),
        None if grid.any() => Ok(Method::Grid),
        None => Ok(default),
    }
}

/// Validates a budget against the grid configuration and returns its cell.
fn budget_cell(tables: &StrategyTables, budget: &Dyadic) -> Result<u32> {
    let total = tables.total();
    if budget.is_negative() || *budget > total {
        return Err(UsageError(format!("budget {budget} is outside [0, {total}]")).into());
    }
    tables.cell_of(budget).ok_or_else(|| {
        UsageError(format!(
            "budget {budget} is not a multiple of the grid step {}",
            tables.step()
        ))
        .into()
    })
}

fn check_unit_budget(budget: &Dyadic) -> Result<()> {
    if budget.is_negative() || *budget > Dyadic::one() {
        return Err(UsageError(format!("budget {budget} is outside [0, 1]")).into());
    }
    Ok(())
}

fn cmd_compile(a: CompileArgs) -> Result<()> {
    let text = read_file(&a.spec)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", a.spec.display()))?;
    let game = if value.get("frontier").is_some() {
        let spec = BargainingSpec::from_json_str(&text)?;
        compile_bargaining(&spec)?
    } else {
        let spec = SsaSpec::from_json_str(&text)?;
        match (&spec.valuation, a.naive) {
            (Valuation::Additive { .. }, false) => compile_additive(&spec)?,
            (Valuation::MultiWeight { .. }, false) => compile_multiweight(&spec)?,
            _ => compile_naive(&spec)?,
        }
    };
    emit(&a.out, &game.to_json_string())
}

fn cmd_solve(a: SolveArgs) -> Result<()> {
    let game = load_game(&a.game)?;
    let method = resolve_method(a.method, &a.grid, Method::Fast)?;
    if a.save_solution.is_some() && method == Method::Grid {
        return Err(UsageError(
            "--save-solution writes fast-solver tables; drop --method grid".into(),
        )
        .into());
    }
    let t = match method {
        Method::Fast => {
            check_unit_budget(&a.budget)?;
            let sol = find_pspe_fast(&game)?;
            if let Some(path) = &a.save_solution {
                fs::write(path, sol.dump_csv(&game))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            sol.query(&game, &a.budget)
        }
        Method::Grid => {
            let (tables, _) = find_lower_pspe_grid(&game, &a.grid.config())?;
            let cell = budget_cell(&tables, &a.budget)?;
            tables.t_star(game.root(), cell)
        }
    };
    let (u1, u2) = game.utilities(t).expect("equilibrium outcome is a terminal");
    let ext = game.external_id(t);
    let data = match a.format {
        Format::Text => format!("terminal {ext}: ({u1}, {u2})\n"),
        Format::Csv => format!("terminal,u1,u2\n{ext},{u1},{u2}\n"),
        Format::Json => {
            let v = serde_json::json!({
                "terminal": ext,
                "u1": u1.to_string(),
                "u2": u2.to_string(),
            });
            format!("{v}\n")
        }
    };
    emit(&a.out, &data)
}

/// One sweep row: interval start, outcome terminal, utilities, and each
/// player's satisfaction rank (how many terminals they weakly beat).
fn sweep_rows(game: &BiddingGame, mu: &OutcomeMap) -> Vec<(Dyadic, u64, String, String, usize, usize)> {
    mu.cutoffs
        .iter()
        .zip(&mu.outcomes)
        .map(|(cut, &t)| {
            let (u1, u2) = game.utilities(t).expect("outcome is a terminal");
            (
                cut.clone(),
                game.external_id(t),
                u1.to_string(),
                u2.to_string(),
                satisfaction_rank(game, t, Player::White),
                satisfaction_rank(game, t, Player::Black),
            )
        })
        .collect()
}

fn cmd_sweep(a: SweepArgs) -> Result<()> {
    let game = load_game(&a.game)?;
    let method = resolve_method(a.method, &a.grid, Method::Fast)?;
    let mu = match method {
        Method::Fast => find_pspe_fast(&game)?.outcome_map(&game),
        Method::Grid => {
            let (tables, mu) = find_lower_pspe_grid(&game, &a.grid.config())?;
            let _ = tables;
            mu
        }
    };
    let rows = sweep_rows(&game, &mu);
    let data = match a.format {
        Format::Text | Format::Csv => {
            let mut s = String::from("cutoff_num,cutoff_scale,terminal,u1,u2,rank1,rank2\n");
            for (cut, ext, u1, u2, r1, r2) in &rows {
                writeln!(s, "{},{},{ext},{u1},{u2},{r1},{r2}", cut.numerator(), cut.scale())
                    .expect("string writes cannot fail");
            }
            s
        }
        Format::Json => {
            let intervals: Vec<serde_json::Value> = rows
                .iter()
                .map(|(cut, ext, u1, u2, r1, r2)| {
                    serde_json::json!({
                        "cutoff": cut.to_string(),
                        "terminal": ext,
                        "u1": u1,
                        "u2": u2,
                        "rank1": r1,
                        "rank2": r2,
                    })
                })
                .collect();
            let v = serde_json::json!({
                "total": mu.total.to_string(),
                "intervals": intervals,
            });
            format!("{v}\n")
        }
    };
    emit(&a.out, &data)
}

fn cmd_verify(a: VerifyArgs) -> Result<()> {
    let game = load_game(&a.game)?;
    let method = resolve_method(a.method, &a.grid, Method::Grid)?;
    let cfg = a.grid.config();
    // Outcome map under audit: an explicit solution file wins, then the
    // chosen solver.
    let mu = match &a.solution {
        Some(path) => {
            let text = read_file(path)?;
            let sol = FastSolution::load_csv(&game, &text)
                .with_context(|| format!("parsing solution {}", path.display()))?;
            sol.outcome_map(&game)
        }
        None => match method {
            Method::Fast => find_pspe_fast(&game)?.outcome_map(&game),
            Method::Grid => find_lower_pspe_grid(&game, &cfg)?.1,
        },
    };
    let mut reports: Vec<AuditReport> = Vec::new();
    for check in &a.checks {
        match check {
            Check::Pareto => reports.push(check_pareto_optimal(&game, &mu)),
            Check::Monotone => reports.push(check_monotone(&game, &mu)),
            Check::Surjective => reports.push(check_surjective(&game, &mu)),
            Check::Pspe => {
                let (tables, _) = find_lower_pspe_grid(&game, &cfg)?;
                reports.push(verify_pspe(&game, &tables, &cfg)?);
            }
            Check::Intervals => {
                if matches!(cfg.mode, GridMode::Discrete { .. }) {
                    return Err(UsageError(
                        "the intervals check needs the continuous grid; drop --discrete".into(),
                    )
                    .into());
                }
                let h = game.height();
                let scale = match &cfg.mode {
                    GridMode::Continuous { epsilon: Some(e) } => e.scale(),
                    _ => h + 2,
                };
                let coarse_cfg = GridConfig::with_epsilon(Dyadic::unit(scale));
                let fine_cfg = GridConfig::with_epsilon(Dyadic::unit(scale + 1));
                let (_, coarse) = find_lower_pspe_grid(&game, &coarse_cfg)?;
                let (_, fine) = find_lower_pspe_grid(&game, &fine_cfg)?;
                reports.push(check_budget_intervals(&game, &fine, &coarse));
            }
        }
    }
    let pass = reports.iter().all(|r| r.pass);
    let v = serde_json::json!({
        "game": a.game.display().to_string(),
        "pass": pass,
        "checks": reports,
    });
    emit(&a.out, &format!("{v}\n"))?;
    if pass {
        Ok(())
    } else {
        let failed: Vec<&str> =
            reports.iter().filter(|r| !r.pass).map(|r| r.property.as_str()).collect();
        Err(AuditFailure(format!("audit failed: {}", failed.join(", "))).into())
    }
}

fn cmd_richman(a: RichmanArgs) -> Result<()> {
    let text = read_file(&a.game)?;
    let game = ZeroSumGame::from_json_str(&text)
        .with_context(|| format!("parsing win/lose game {}", a.game.display()))?;
    let values = richman_values(&game)?;
    let root = values.root_value(&game).to_string();
    let data = match a.format {
        Format::Text => format!("root {root}\n"),
        Format::Csv => {
            let mut s = String::from("node,value\n");
            let mut rows: Vec<(u64, String)> = values
                .iter()
                .map(|(s, v)| (game.external_id(s), v.to_string()))
                .collect();
            rows.sort();
            for (ext, v) in rows {
                writeln!(s, "{ext},{v}").expect("string writes cannot fail");
            }
            s
        }
        Format::Json => {
            let mut rows: Vec<(u64, String)> = values
                .iter()
                .map(|(s, v)| (game.external_id(s), v.to_string()))
                .collect();
            rows.sort();
            let list: Vec<serde_json::Value> = rows
                .into_iter()
                .map(|(node, value)| serde_json::json!({ "node": node, "value": value }))
                .collect();
            let v = serde_json::json!({ "root": root, "values": list });
            format!("{v}\n")
        }
    };
    emit(&a.out, &data)
}

fn cmd_prices(a: PricesArgs) -> Result<()> {
    let game = load_game(&a.game)?;
    let cfg = a.grid.config();
    let (tables, _) = find_lower_pspe_grid(&game, &cfg)?;
    budget_cell(&tables, &a.budget)?;
    let prices = price_trajectory(&game, &tables, &a.budget)?;
    let mut s = String::from("round,bid_num,bid_scale\n");
    for (i, bid) in prices.iter().enumerate() {
        writeln!(s, "{},{},{}", i + 1, bid.numerator(), bid.scale())
            .expect("string writes cannot fail");
    }
    emit(&a.out, &s)
}

fn cmd_fixtures(a: FixturesArgs) -> Result<()> {
    fs::create_dir_all(&a.dir).with_context(|| format!("creating {}", a.dir.display()))?;
    let mut written: Vec<PathBuf> = Vec::new();
    let write = |name: String, data: String, written: &mut Vec<PathBuf>| -> Result<()> {
        let path = a.dir.join(name);
        fs::write(&path, data).with_context(|| format!("writing {}", path.display()))?;
        written.push(path);
        Ok(())
    };
    let games = [
        Fixture::GMaj,
        Fixture::GBad,
        Fixture::GTwo,
        Fixture::Gk(2),
        Fixture::Gk(3),
        Fixture::Gk(4),
        Fixture::HGame,
        Fixture::Centipede(4),
        Fixture::Centipede(7),
    ];
    for f in games {
        write(format!("{}.json", f.name()), fixture(f.clone()).to_json_string(), &mut written)?;
    }
    let ties: std::collections::BTreeMap<String, Player> =
        hgame_tie_breaks().into_iter().map(|(ext, p)| (ext.to_string(), p)).collect();
    write(
        "hgame_ties.json".into(),
        format!("{}\n", serde_json::to_string(&ties).expect("tie map serializes")),
        &mut written,
    )?;
    let majority = to_win_lose(&fixture(Fixture::GMaj), Player::White, 3);
    write("majority_winlose.json".into(), majority.to_json_string(), &mut written)?;
    write("tictactoe_winlose.json".into(), tictactoe().to_json_string(), &mut written)?;
    for i in 0..a.random {
        let seed = a.seed + u64::from(i);
        let g = random_binary_tree(seed, 5);
        write(format!("random_binary_{seed}.json"), g.to_json_string(), &mut written)?;
    }
    let mut listing = String::new();
    for path in &written {
        writeln!(listing, "{}", path.display()).expect("string writes cannot fail");
    }
    print!("{listing}");
    Ok(())
}
