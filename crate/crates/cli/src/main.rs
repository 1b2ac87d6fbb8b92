use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use epsedge_cli::compare::render_table;
use epsedge_cli::output::{json, table_csv, write_atomic, write_run};
use epsedge_cli::run::parse_point;
use epsedge_cli::target::Loaded;
use epsedge_cli::{compare, execute, exit, CliError, Method, RunOptions, Target};
use epsedge_core::dcopf::{economic_dispatch, load_network};
use epsedge_core::Point2;

#[derive(Parser)]
#[command(
    name = "epsedge",
    version,
    about = "Estimate the decision boundary of a 2D black-box classifier"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one estimator and write points.csv, report.json and optionally plot.svg.
    Run(RunArgs),
    /// Run EDGE and the grid at several ε and tabulate ASD, samples and time.
    Compare(CompareArgs),
    /// Least-cost dispatch of a network at one renewable injection.
    Dispatch(DispatchArgs),
}

#[derive(Args)]
struct Shared {
    /// Interior seed for EDGE, as x,y.
    #[arg(long, value_parser = parse_point, requires = "seed_out", allow_hyphen_values = true)]
    seed_in: Option<Point2>,
    /// Exterior seed for EDGE, as x,y.
    #[arg(long, value_parser = parse_point, requires = "seed_in", allow_hyphen_values = true)]
    seed_out: Option<Point2>,
    /// EDGE query budget [default: 10 · perimeter / ε].
    #[arg(long)]
    max_queries: Option<u64>,
    /// Resolution of the reference boundary [default: ε/10].
    #[arg(long)]
    reference_cell: Option<f64>,
    /// Override the level of a test function.
    #[arg(long, allow_hyphen_values = true)]
    threshold: Option<f64>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    /// edge or grid.
    method: Method,
    /// rosenbrock, goldstein-price, beale or dcopf:<network-file>.
    target: String,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    /// Also write plot.svg.
    #[arg(long)]
    plot: bool,
    /// Also write every classifier query to queries.csv.
    #[arg(long)]
    log_queries: bool,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Args)]
struct CompareArgs {
    target: String,
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.05")]
    epsilons: Vec<f64>,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Args)]
struct DispatchArgs {
    network: PathBuf,
    /// Renewable injection, as x,y in per-unit.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    at: Point2,
}

fn options(epsilon: f64, shared: &Shared) -> RunOptions {
    RunOptions {
        epsilon,
        seeds: shared.seed_in.zip(shared.seed_out),
        max_queries: shared.max_queries,
        reference_cell: shared.reference_cell,
        log_queries: false,
    }
}

fn cmd_run(args: RunArgs) -> Result<i32, CliError> {
    let target: Target = args.target.parse()?;
    let loaded = Loaded::load(&target, args.shared.threshold)?;
    let opts = RunOptions {
        log_queries: args.log_queries,
        ..options(args.epsilon, &args.shared)
    };
    let mut outcome = execute(&loaded, &target, args.method, &opts)?;
    write_run(&mut outcome, &args.shared.out, args.plot)?;
    let r = &outcome.report;
    println!(
        "{} {} ε={}: {} queries, ASD {:.4}, {:.4} s, {}",
        r.method,
        r.classifier,
        r.epsilon,
        r.total_queries,
        r.asd.unwrap_or(f64::NAN),
        r.wall_time,
        r.termination
    );
    println!("wrote {}", args.shared.out.display());
    let code = r.exit_code();
    if code != exit::SUCCESS {
        eprintln!("warning: run ended with {}", r.termination);
    }
    Ok(code)
}

fn cmd_compare(args: CompareArgs) -> Result<i32, CliError> {
    let target: Target = args.target.parse()?;
    let loaded = Loaded::load(&target, args.shared.threshold)?;
    let rows = compare(
        &loaded,
        &target,
        &args.epsilons,
        &options(0.0, &args.shared),
    )?;
    print!("{}", render_table(&rows));
    let path = args.shared.out.join("table.csv");
    write_atomic(&path, table_csv(&rows).as_bytes())?;
    println!("wrote {}", path.display());
    let failed = rows
        .iter()
        .find(|r| r.termination != "closed_loop" && r.termination != "complete");
    Ok(match failed {
        Some(r) if r.termination == "budget_exhausted" => exit::BUDGET_EXHAUSTED,
        Some(_) => exit::GEOMETRY,
        None => exit::SUCCESS,
    })
}

fn cmd_dispatch(args: DispatchArgs) -> Result<i32, CliError> {
    let net = load_network(&args.network)?;
    match economic_dispatch(&net, args.at)? {
        Some(d) => {
            println!("J = {:.4}", d.cost);
            print!("{}", json(&d));
        }
        None => println!("infeasible at {}", args.at),
    }
    Ok(exit::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::INPUT as u8 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Dispatch(args) => cmd_dispatch(args),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
