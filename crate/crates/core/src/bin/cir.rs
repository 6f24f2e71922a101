use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cir::error::Result;
use cir::harness::{self, Format, Mode, RunConfig, Table, CONJECTURE_GRAPHS};

#[derive(Parser)]
#[command(name = "cir", version, about = "Cops and an invisible robber: solvers, strategies and simulations")]
struct Cli {
    /// Output format: csv or json.
    #[arg(long, global = true, default_value = "csv")]
    format: Format,
    #[arg(long, global = true, env = "CIR_SEED", default_value_t = harness::DEFAULT_SEED)]
    seed: u64,
    /// Number of cops; defaults to the cop number of the graph.
    #[arg(long, global = true)]
    cops: Option<usize>,
    /// Robber speed (edges per turn).
    #[arg(long, global = true, default_value_t = 1)]
    speed: usize,
    /// Horizon of the truncated games.
    #[arg(long, global = true)]
    horizon: Option<usize>,
    #[arg(long, global = true, default_value_t = 2000)]
    trials: usize,
    #[arg(long, global = true, default_value_t = 0.1)]
    tolerance: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Catalog values, solver brackets and estimates, e.g. `table star 1..5`.
    Table { family: String, params: Vec<String> },
    /// Truncated drunk optimum and best stationary upper bound.
    SolveDrunk { graph: String },
    /// Value and strategies of the truncated adversarial game.
    SolveAdversarial {
        graph: String,
        /// Use CFR+ instead of the linear program.
        #[arg(long)]
        iterative: bool,
        #[arg(long, default_value_t = 1000)]
        iters: usize,
        #[arg(long, default_value_t = 1e-3)]
        target: f64,
        /// Print the game tree, one node per line, before the result.
        #[arg(long)]
        dump_tree: bool,
    },
    /// Monte Carlo of a cop strategy against a robber strategy.
    Simulate { graph: String, cop: String, robber: String },
    /// Bounds catalog for a graph.
    Bounds {
        graph: String,
        /// Also evaluate the grid probability constants at `k,r,c`.
        #[arg(long, value_delimiter = ',')]
        grid_constants: Option<Vec<f64>>,
    },
    /// Truncated values for m = 0..=m_max.
    Convergence {
        graph: String,
        #[arg(long, default_value = "adversarial")]
        mode: Mode,
        #[arg(long, default_value_t = 6)]
        m_max: usize,
    },
    /// Grid search of the broom polynomial plus a simulation of the minimizer.
    BroomScan {
        #[arg(long, default_value_t = 0.5)]
        c: f64,
        #[arg(long, default_value_t = 200)]
        n: usize,
        #[arg(long, default_value_t = 11)]
        steps: usize,
    },
    /// Checks whether the ratio of adversarial to drunk values is at least 2.
    ConjectureCheck { graphs: Vec<String> },
}

fn run(cli: Cli) -> Result<String> {
    let cfg = RunConfig {
        cops: cli.cops,
        speed: cli.speed,
        horizon: cli.horizon,
        trials: cli.trials,
        seed: cli.seed,
        format: cli.format,
        tolerance: cli.tolerance,
    };
    let render = |t: Table| t.render(cfg.format);
    match cli.command {
        Command::Table { family, params } => render(harness::cmd_table(&family, &params, &cfg)?),
        Command::SolveDrunk { graph } => render(harness::cmd_solve_drunk(&graph, &cfg)?),
        Command::SolveAdversarial {
            graph,
            iterative,
            iters,
            target,
            dump_tree,
        } => {
            let run = harness::cmd_solve_adversarial(&graph, iterative, iters, target, dump_tree, &cfg)?;
            let mut out = run.dump.unwrap_or_default();
            match cfg.format {
                Format::Csv => out.push_str(&run.table.render(Format::Csv)?),
                Format::Json => {
                    let doc = serde_json::json!({
                        "schema": harness::SCHEMA,
                        "seed": cfg.seed,
                        "report": run.report,
                    });
                    out.push_str(&serde_json::to_string_pretty(&doc)?);
                    out.push('\n');
                }
            }
            Ok(out)
        }
        Command::Simulate { graph, cop, robber } => render(harness::cmd_simulate(&graph, &cop, &robber, &cfg)?),
        Command::Bounds { graph, grid_constants } => {
            let mut out = render(harness::cmd_bounds(&graph, &cfg)?)?;
            if let Some(v) = grid_constants {
                if v.len() != 3 {
                    return Err(cir::error::Error::InvalidParameter("--grid-constants takes k,r,c".into()));
                }
                out.push_str(&render(harness::cmd_grid_constants(v[0] as usize, v[1], v[2], &cfg)?)?);
            }
            Ok(out)
        }
        Command::Convergence { graph, mode, m_max } => render(harness::cmd_convergence(&graph, mode, m_max, &cfg)?),
        Command::BroomScan { c, n, steps } => render(harness::cmd_broom_scan(c, n, steps, &cfg)?),
        Command::ConjectureCheck { graphs } => {
            let graphs = if graphs.is_empty() {
                CONJECTURE_GRAPHS.iter().map(|s| s.to_string()).collect()
            } else {
                graphs
            };
            render(harness::cmd_conjecture_check(&graphs, &cfg)?)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
