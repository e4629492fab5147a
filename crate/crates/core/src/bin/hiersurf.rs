use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use hiersurf::blocks::CubeSize;
use hiersurf::decoder::{MatchingProblem, Weighting};
use hiersurf::experiments::{
    cost_report, cost_scan, header_lines, parse_grid, parse_int_grid, purify_table, run_perimeter_sweep,
    run_threshold_sweep, sweep_csv, to_json, CostConfig, SweepConfig, System,
};
use hiersurf::topology::{build_layout, Distance, ModuleSpec};
use hiersurf::Error;

/// Simulator and resource estimator for the two-tier surface code on a
/// network of modules.
#[derive(Parser)]
#[command(name = "hiersurf", version)]
struct Cli {
    /// Worker threads; defaults to all cores. Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Logical failure rates over a grid of raw pair infidelities.
    Threshold(ThresholdArgs),
    /// Raw pairs needed per purified pair, by purification depth.
    PurifyTable(PurifyArgs),
    /// Physical qubits per logical qubit for a target logical error rate.
    Cost(CostArgs),
    /// Solve a matching problem given as an edge list.
    DecodeCheck(DecodeArgs),
    /// Dump a network layout as JSON.
    LayoutDump(LayoutArgs),
}

#[derive(Args, Serialize, Clone)]
struct ModuleArgs {
    /// Hierarchical modules holding a D x D patch (odd, >= 5).
    #[arg(long, value_name = "D", conflicts_with = "simple")]
    dim: Option<usize>,
    /// Simple single-client modules with 1 or 4 brokers.
    #[arg(long, value_name = "BROKERS", num_args = 0..=1, default_missing_value = "1")]
    simple: Option<usize>,
}

impl ModuleArgs {
    fn spec(&self, tiers: usize) -> Result<Option<ModuleSpec>, Failure> {
        Ok(match (self.dim, self.simple) {
            (Some(d), None) => Some(ModuleSpec::hierarchical(d, tiers)?),
            (None, Some(b)) => Some(ModuleSpec::simple(b, tiers)?),
            _ => None,
        })
    }
}

#[derive(Args, Serialize)]
struct ThresholdArgs {
    #[command(flatten)]
    module: ModuleArgs,
    /// Sweep the perimeter problem alone; --rates are then q = p_Z + p_Y.
    #[arg(long)]
    perimeter: bool,
    /// Intra-module error rate.
    #[arg(long, default_value_t = 0.001)]
    eps: f64,
    /// Raw infidelities 1 - F: `lo:hi:step` ranges and comma lists.
    #[arg(long)]
    rates: String,
    /// Code distances.
    #[arg(long = "L", default_value = "3,5,7")]
    distances: String,
    /// Purification tiers per link.
    #[arg(long, default_value_t = 0)]
    tiers: usize,
    /// Size of the tier-1 blocks used for module error rates.
    #[arg(long, value_parser = ["individual", "triple"], default_value = "individual")]
    cube: String,
    /// Equal matching weights instead of log-likelihood weights.
    #[arg(long)]
    uniform: bool,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// CSV output; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON summary with crossings and the threshold estimate.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct PurifyArgs {
    /// Raw pair fidelity, in (0.25, 1].
    #[arg(long)]
    fidelity: f64,
    #[arg(long, default_value_t = 0.001)]
    eps: f64,
    /// Required probability of finishing within the budget.
    #[arg(long, default_value_t = 0.999)]
    ps: f64,
    #[arg(long, default_value_t = 8)]
    max_tiers: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct CostArgs {
    #[command(flatten)]
    module: ModuleArgs,
    /// One monolithic device instead of a network.
    #[arg(long, conflicts_with_all = ["dim", "simple"])]
    monolithic: bool,
    #[arg(long)]
    fidelity: f64,
    #[arg(long, default_value_t = 0.001)]
    eps: f64,
    /// Target logical error rate per super-round.
    #[arg(long, default_value_t = 1e-12)]
    target: f64,
    /// `auto` scans 0..=--max-tiers; otherwise a fixed depth.
    #[arg(long, default_value = "auto")]
    tiers: String,
    #[arg(long, default_value_t = 6)]
    max_tiers: usize,
    #[arg(long = "L", default_value = "3,5,7")]
    distances: String,
    /// Completion probability for raw-pair budgets.
    #[arg(long, default_value_t = 0.999)]
    success: f64,
    /// Duration of one raw pair attempt.
    #[arg(long, default_value_t = 1.0)]
    tau: f64,
    #[arg(long)]
    uniform: bool,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct DecodeArgs {
    /// Edge-list file (`nodes N` then `u v weight` lines); `-` for stdin.
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct LayoutArgs {
    #[command(flatten)]
    module: ModuleArgs,
    #[arg(long = "L", default_value_t = 3)]
    distance: usize,
    #[arg(long, default_value_t = 0)]
    tiers: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::Parse { .. } | Error::ZeroTrials => Failure::Usage(e.to_string()),
            other => Failure::Internal(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn emit(out: &Option<PathBuf>, text: &str) -> Outcome {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => match std::io::stdout().write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
            _ => {}
        },
    }
    Ok(())
}

fn json_doc(kind: &str, config: &impl Serialize, result: &impl Serialize) -> Result<String, Failure> {
    let mut doc = to_json(kind, result)?;
    doc["config"] = serde_json::to_value(config).map_err(|e| Failure::Internal(e.to_string()))?;
    let mut text = serde_json::to_string_pretty(&doc).map_err(|e| Failure::Internal(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

fn weighting(uniform: bool) -> Weighting {
    if uniform {
        Weighting::Uniform
    } else {
        Weighting::LogLikelihood
    }
}

fn threshold(a: ThresholdArgs) -> Outcome {
    let rates = parse_grid(&a.rates)?;
    let distances = parse_int_grid(&a.distances)?;
    let spec = match (a.module.spec(a.tiers)?, a.perimeter) {
        (Some(s), false) => s,
        // the perimeter problem has no module parameters
        (None, true) => ModuleSpec::simple(1, 0)?,
        (Some(_), true) => return Err(usage("--perimeter takes no --dim/--simple")),
        (None, false) => return Err(usage("one of --dim, --simple or --perimeter is required")),
    };
    let mut cfg = SweepConfig::new(spec, distances, rates, a.eps, a.trials, a.seed);
    cfg.weighting = weighting(a.uniform);
    cfg.cube = if a.cube == "triple" { CubeSize::Triple } else { CubeSize::Individual };
    let sweep = if a.perimeter { run_perimeter_sweep(&cfg)? } else { run_threshold_sweep(&cfg)? };
    let mut csv = header_lines(&a)?;
    csv.push_str(sweep_csv(&sweep)?.lines().skip(3).map(|l| format!("{l}\n")).collect::<String>().as_str());
    emit(&a.out, &csv)?;
    for c in &sweep.crossings {
        eprintln!("crossing L={}/{}: {:.5} +- {:.5}", c.smaller, c.larger, c.x, c.sigma);
    }
    for w in &sweep.warnings {
        eprintln!("warning: {w}");
    }
    if let Some(path) = &a.json {
        std::fs::write(path, json_doc("threshold", &a, &sweep)?)?;
    }
    Ok(())
}

fn purify(a: PurifyArgs) -> Outcome {
    let rows = purify_table(a.fidelity, a.eps, a.ps, a.max_tiers)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Failure::Internal(e.to_string());
    w.write_record(["F", "eps", "P_S", "n_D", "N", "output_px", "output_py", "output_pz", "acceptance"])
        .map_err(io)?;
    for r in &rows {
        w.write_record(
            [r.fidelity, r.eps, r.success]
                .iter()
                .map(f64::to_string)
                .chain([r.n_d.to_string(), r.n.to_string()])
                .chain([r.output.p_x, r.output.p_y, r.output.p_z, r.acceptance].iter().map(f64::to_string)),
        )
        .map_err(io)?;
    }
    let body = w.into_inner().map_err(|e| Failure::Internal(e.to_string()))?;
    let mut text = header_lines(&a)?;
    text.push_str(&String::from_utf8_lossy(&body));
    emit(&a.out, &text)
}

fn cost(a: CostArgs) -> Outcome {
    if !(a.fidelity > 0.25 && a.fidelity <= 1.0) {
        return Err(usage(format!("fidelity {} outside (0.25, 1]", a.fidelity)));
    }
    let cfg = CostConfig {
        distances: parse_int_grid(&a.distances)?,
        trials: a.trials,
        seed: a.seed,
        weighting: weighting(a.uniform),
        success: a.success,
        tau: a.tau,
        ..CostConfig::default()
    };
    let infidelity = 1.0 - a.fidelity;
    let text = if a.monolithic {
        let report = cost_report(System::Monolithic, infidelity, a.eps, a.target, &cfg)?;
        json_doc("cost", &a, &report)?
    } else {
        let tiers: Vec<usize> = match a.tiers.as_str() {
            "auto" => (0..=a.max_tiers).collect(),
            k => vec![k.parse().map_err(|_| usage(format!("--tiers takes auto or an integer, not {k:?}")))?],
        };
        let base = a
            .module
            .spec(0)?
            .ok_or_else(|| usage("one of --dim, --simple or --monolithic is required"))?;
        let scan = cost_scan(base, &tiers, infidelity, a.eps, a.target, &cfg)?;
        match scan.best {
            Some(i) => {
                let r = &scan.reports[i];
                eprintln!(
                    "best: n_D = {}, module size {}, L = {}, {:.0} qubits",
                    tiers[i],
                    r.qubits_per_module,
                    r.l_min.unwrap_or(0),
                    r.total_qubits.unwrap_or(f64::NAN)
                );
            }
            None => eprintln!("not achievable at any purification depth tried"),
        }
        json_doc("cost_scan", &a, &scan)?
    };
    emit(&a.out, &text)
}

fn decode_check(a: DecodeArgs) -> Outcome {
    let mut text = String::new();
    if a.input.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(&a.input)?;
    }
    let (pairs, weight) = MatchingProblem::parse(&text)?.solve()?;
    let mut out = format!("total_weight {weight}\n");
    for (u, v) in pairs {
        out.push_str(&format!("{u} {v}\n"));
    }
    emit(&a.out, &out)
}

fn layout_dump(a: LayoutArgs) -> Outcome {
    let spec = a
        .module
        .spec(a.tiers)?
        .ok_or_else(|| usage("one of --dim or --simple is required"))?;
    let layout = build_layout(spec, Distance::new(a.distance)?)?;
    emit(&a.out, &json_doc("layout", &a, &layout.dump_json())?)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match cli.cmd {
        Cmd::Threshold(a) => threshold(a),
        Cmd::PurifyTable(a) => purify(a),
        Cmd::Cost(a) => cost(a),
        Cmd::DecodeCheck(a) => decode_check(a),
        Cmd::LayoutDump(a) => layout_dump(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(1)
        }
    }
}
