use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use curtainlab::harness::{run, CliValues, Command, ExperimentConfig, Format, Overrides, PRESETS};
use curtainlab::Error;

#[derive(Parser, Debug)]
#[command(name = "curtainlab", version, about = "Random walks, curtains and limit laws on model spaces")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Named walk configuration (see list-presets).
    #[arg(long, global = true)]
    preset: Option<String>,
    /// TOML experiment configuration.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Master seed; falls back to the config file, then CURTAINLAB_SEED.
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,
    /// Walk length.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Independent trials.
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Curtain separation parameter; chosen automatically when omitted.
    #[arg(long = "L", global = true)]
    l: Option<usize>,
    /// Slack of the geometric estimates monitor; defaults to a quarter of the drift.
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    /// Directory for tables, summary and manifest (record mode).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_parser = ["csv", "json"])]
    format: Option<String>,
    /// Worker threads.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Cmd {
    /// Trajectories, drift, Busemann gap and the geometric estimates monitor.
    Walk,
    /// Drift, ψ, the variance formula and normality of the rescaled displacement.
    Clt,
    /// Fraction of contracting walk positions along an n-grid.
    Contracting,
    /// Halfspace, thickness, star-convexity and bottleneck audits.
    CurtainAudit,
    /// The d_L lower bound against ⌈d⌉ on random pairs.
    GeometryAudit,
    /// The Busemann cocycle identity on random triples.
    CocycleAudit,
    /// Print the named walk configurations.
    ListPresets,
}

fn command(c: Cmd) -> Option<Command> {
    Some(match c {
        Cmd::Walk => Command::Walk,
        Cmd::Clt => Command::Clt,
        Cmd::Contracting => Command::Contracting,
        Cmd::CurtainAudit => Command::CurtainAudit,
        Cmd::GeometryAudit => Command::GeometryAudit,
        Cmd::CocycleAudit => Command::CocycleAudit,
        Cmd::ListPresets => return None,
    })
}

/// The canonical command line for a resolved configuration.
fn invocation(cmd: Command, cfg: &ExperimentConfig, cli: &Cli) -> String {
    let mut parts = vec!["curtainlab".to_string(), cmd.name().to_string()];
    if let Some(p) = &cli.preset {
        parts.push(format!("--preset {p}"));
    }
    if let Some(c) = &cli.config {
        parts.push(format!("--config {}", c.display()));
    }
    parts.push(format!("--seed {}", cfg.seed));
    let o = &cfg.overrides;
    for (flag, v) in [("--n", o.n), ("--trials", o.trials), ("--L", o.l)] {
        if let Some(v) = v {
            parts.push(format!("{flag} {v}"));
        }
    }
    if let Some(e) = o.epsilon {
        parts.push(format!("--epsilon {e}"));
    }
    if let Some(d) = &cfg.out {
        parts.push(format!("--out {}", d.display()));
    }
    if cfg.format == Format::Json {
        parts.push("--format json".into());
    }
    parts.join(" ")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Some(cmd) = command(cli.command) else {
        for p in PRESETS {
            println!("{:<20} {:<16} {}", p.name, p.space, p.description);
        }
        return ExitCode::SUCCESS;
    };
    match execute(cmd, &cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("curtainlab: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(cmd: Command, cli: &Cli) -> Result<bool, Error> {
    let values = CliValues {
        preset: cli.preset.clone(),
        config: cli.config.clone(),
        seed: cli.seed,
        format: cli.format.as_deref().map(str::parse).transpose()?,
        out: cli.out.clone(),
        overrides: Overrides {
            n: cli.n,
            trials: cli.trials,
            l: cli.l,
            epsilon: cli.epsilon,
            ..Overrides::default()
        },
    };
    let env_seed = std::env::var("CURTAINLAB_SEED").ok();
    let cfg = ExperimentConfig::resolve(values, env_seed.as_deref())?;
    let threads = match (cli.threads, &cli.config) {
        (Some(t), _) => Some(t),
        (None, Some(p)) => curtainlab::harness::FileConfig::load(p)?.threads,
        (None, None) => None,
    };
    if let Some(t) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    let (report, manifest) = run(cmd, &cfg, &invocation(cmd, &cfg, cli))?;
    for (name, table) in &report.tables {
        if cfg.out.is_none() && table.rows.len() <= 50 {
            println!("# {name}");
            print!("{}", table.render(cfg.format));
        }
    }
    for c in &report.checks {
        println!("{}", c.line());
    }
    for p in &manifest.outputs {
        println!("wrote {}", p.display());
    }
    println!("{:.2} s", manifest.wall_clock_seconds);
    let failures = manifest.failures();
    if !failures.is_empty() {
        eprintln!("failing checks:");
        for c in failures {
            eprintln!("  {}", c.line());
        }
    }
    Ok(manifest.passed)
}
