//! The experiments behind each CLI command.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::config::ExperimentConfig;
use super::defaults::*;
use super::output::{cell, digest, write_json, write_tables, Check, RunManifest, Table};
use super::presets::oracle;
use crate::curtains::audit::{axiom_audits, bottleneck_audits};
use crate::curtains::{d_l_lower, greedy_dual_l_chain, SearchBudget};
use crate::error::{Error, Result};
use crate::geometry::word::Word;
use crate::geometry::{ModelSpace, Point, SpaceKind};
use crate::limitlaws::boundary::{cylinder_distribution, sample_boundary};
use crate::limitlaws::clt::{boundary_estimates, clt_report, LimitLawBudget};
use crate::limitlaws::drift::{check_positive_drift, drift_estimate};
use crate::limitlaws::monitor::monitor_batch;
use crate::limitlaws::psi::psi_summary;
use crate::limitlaws::{
    cocycle_audit, displacement_busemann_gap, stationarity_check, Direction, GapReference, PsiEstimator,
};
use crate::rng::{stream, Domain};
use crate::walker::walk::trajectory_rows;
use crate::walker::{classify, contracting_fraction, Contracting, Isometry, Mobius, WalkConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Walk,
    Clt,
    Contracting,
    CurtainAudit,
    GeometryAudit,
    CocycleAudit,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Walk => "walk",
            Command::Clt => "clt",
            Command::Contracting => "contracting",
            Command::CurtainAudit => "curtain-audit",
            Command::GeometryAudit => "geometry-audit",
            Command::CocycleAudit => "cocycle-audit",
        }
    }
}

/// Everything an experiment produced, before it is written anywhere.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: Command,
    pub tables: Vec<(String, Table)>,
    pub checks: Vec<Check>,
    pub summary: Value,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Runs `cmd`, writes its tables, summary and manifest when an output
/// directory is configured, and returns both.
pub fn run(cmd: Command, cfg: &ExperimentConfig, invocation: &str) -> Result<(Report, RunManifest)> {
    let start = Instant::now();
    let report = execute(cmd, cfg)?;
    let mut outputs = Vec::new();
    if let Some(dir) = &cfg.out {
        outputs = write_tables(dir, cfg.format, &report.tables)?;
        let summary = dir.join("summary.json");
        write_json(&summary, &report.summary)?;
        outputs.push(summary);
    }
    let manifest = RunManifest {
        command: cmd.name().to_string(),
        invocation: invocation.to_string(),
        config_digest: digest(&(cmd, cfg)),
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: cfg.seed,
        outputs,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        passed: report.passed(),
        checks: report.checks.clone(),
    };
    if let Some(dir) = &cfg.out {
        write_json(&dir.join("manifest.json"), &manifest)?;
    }
    Ok((report, manifest))
}

pub fn execute(cmd: Command, cfg: &ExperimentConfig) -> Result<Report> {
    match cmd {
        Command::Walk => walk(cfg),
        Command::Clt => clt(cfg),
        Command::Contracting => contracting(cfg),
        Command::CurtainAudit => curtain_audit(cfg),
        Command::GeometryAudit => geometry_audit(cfg),
        Command::CocycleAudit => cocycle(cfg),
    }
}

fn budget(cfg: &ExperimentConfig, seed: u64) -> SearchBudget {
    budget_with(cfg, seed, FALSIFIER_CANDIDATES)
}

fn budget_with(cfg: &ExperimentConfig, seed: u64, candidates: usize) -> SearchBudget {
    SearchBudget {
        candidates: cfg.overrides.candidates.unwrap_or(candidates),
        seed,
        ..SearchBudget::default()
    }
}

/// The chosen `L` and how it was found.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LChoice {
    pub l: usize,
    /// `(L, chain lengths on the three nested segments)`.
    pub tried: Vec<(usize, Vec<usize>)>,
    pub note: Option<String>,
}

/// The smallest `L ≤ L_SEARCH_MAX` whose greedy dual `L`-chain keeps growing
/// along the quasi-axis of the contracting element `g`: chain lengths on
/// `[g^{-jk} o, g^{jk} o]` must strictly increase over `j = 1, 2, 3`.
/// Spaces without a contracting element get `L = 1`.
pub fn choose_l(space: &ModelSpace, g: Option<&Isometry>, budget: &SearchBudget) -> Result<LChoice> {
    let Some(g) = g else {
        return Ok(LChoice {
            l: 1,
            tried: Vec::new(),
            note: Some("no contracting element; L = 1".into()),
        });
    };
    let o = &space.basepoint;
    let mut k = 1;
    while 2.0 * g.power(k).displacement(space) < L_SEARCH_SEGMENT && k < 1 << 12 {
        k += 1;
    }
    let ends: Vec<(Point, Point)> = (1..=3)
        .map(|j| Ok((g.inverse().power(j * k).act(o)?, g.power(j * k).act(o)?)))
        .collect::<Result<_>>()?;
    let mut tried = Vec::new();
    for l in 1..=L_SEARCH_MAX {
        let sizes: Vec<usize> = ends
            .iter()
            .map(|(a, b)| Ok(greedy_dual_l_chain(space, a, b, l, budget)?.len()))
            .collect::<Result<_>>()?;
        let grows = sizes.windows(2).all(|w| w[1] > w[0]);
        tried.push((l, sizes));
        if grows {
            return Ok(LChoice { l, tried, note: None });
        }
    }
    Ok(LChoice {
        l: L_SEARCH_MAX,
        tried,
        note: Some(format!("no growth up to L = {L_SEARCH_MAX}")),
    })
}

/// A contracting element of the walk's support or of its two-step products.
fn contracting_element(cfg: &WalkConfig) -> Option<Isometry> {
    let yes = |g: &Isometry| classify(g).contracting == Contracting::Yes;
    if let Some(g) = cfg.support.iter().find(|g| yes(g)) {
        return Some(g.clone());
    }
    for g in &cfg.support {
        for h in &cfg.support {
            if let Ok(p) = g.compose(h) {
                if yes(&p) {
                    return Some(p);
                }
            }
        }
    }
    None
}

/// A fixed contracting element per space, for audits without a walk.
fn canonical_contracting(space: &ModelSpace) -> Option<Isometry> {
    match space.kind {
        SpaceKind::RegularTree { .. } => Some(Isometry::Tree(Word::parse("ab").expect("literal"))),
        SpaceKind::HyperbolicPlane => Some(Isometry::Mobius(Mobius::new(3.0, 4.0, 2.0, 3.0).expect("det 1"))),
        SpaceKind::EuclideanPlane | SpaceKind::TreeTimesLine { .. } => None,
    }
}

fn resolve_l(cfg: &ExperimentConfig, space: &ModelSpace, g: Option<&Isometry>) -> Result<LChoice> {
    match cfg.overrides.l {
        Some(0) => Err(Error::Config("L must be at least 1".into())),
        Some(l) => Ok(LChoice {
            l,
            tried: Vec::new(),
            note: Some("given".into()),
        }),
        None => choose_l(space, g, &budget(cfg, cfg.seed)),
    }
}

fn space_name(kind: SpaceKind) -> String {
    match kind {
        SpaceKind::RegularTree { valence } => format!("tree({valence})"),
        SpaceKind::HyperbolicPlane => "hyperbolic".into(),
        SpaceKind::EuclideanPlane => "euclidean".into(),
        SpaceKind::TreeTimesLine { valence } => format!("tree({valence})xline"),
    }
}

fn default_max_gap(kind: SpaceKind) -> f64 {
    match kind {
        SpaceKind::RegularTree { .. } => MAX_GAP_TREE,
        _ => MAX_GAP_OTHER,
    }
}

fn walk(cfg: &ExperimentConfig) -> Result<Report> {
    let wc = cfg.walk_config()?;
    let o = &cfg.overrides;
    let seed = cfg.seed;
    let n = o.n.unwrap_or(WALK_COMMAND_N);
    let trials = o.trials.unwrap_or(WALK_COMMAND_TRIALS);
    if n == 0 || trials < 2 {
        return Err(Error::Config("walk needs n ≥ 1 and at least two trials".into()));
    }
    let stride = o.stride.unwrap_or((n / 100).max(1));
    let mut traj = Table::new(&["trial", "n", "displacement", "element"]);
    for r in trajectory_rows(&wc, seed, trials, n, stride) {
        traj.push(vec![cell(r.trial), cell(r.n), cell(r.displacement), r.digest]);
    }
    let drift = drift_estimate(&wc, seed, n, trials)?;
    let mut tables = vec![("trajectories".to_string(), traj)];
    let mut checks = Vec::new();
    let mut summary = json!({ "space": space_name(wc.space.kind), "n": n, "trials": trials, "drift": drift });

    match check_positive_drift(&wc, seed) {
        Err(Error::ZeroDrift(msg)) => {
            summary["note"] = json!(format!("gap and monitor skipped: {msg}"));
        }
        Err(e) => return Err(e),
        Ok(_) => {
            let series: Vec<_> = (0..trials as u64)
                .into_par_iter()
                .map(|t| displacement_busemann_gap(&wc, seed, t, n, GapReference::ForwardLimit))
                .collect();
            let mut gaps = Table::new(&["trial", "max_gap", "slope"]);
            for s in &series {
                gaps.push(vec![cell(s.trial), cell(s.max), cell(s.slope)]);
            }
            let max_gap = series.iter().map(|s| s.max).fold(0.0, f64::max);
            let max_slope = series.iter().map(|s| s.slope).fold(f64::NEG_INFINITY, f64::max);
            let gap_bound = o.max_gap.unwrap_or_else(|| default_max_gap(wc.space.kind));
            checks.push(Check::new("gap slope", max_slope, "< 0.01 per trajectory", max_slope < 0.01));
            checks.push(Check::new("gap max", max_gap, &format!("< {gap_bound}"), max_gap < gap_bound));
            tables.push(("gaps".into(), gaps));

            summary["gap"] = json!({ "max": max_gap, "max_slope": max_slope, "bound": gap_bound });
            match contracting_element(&wc) {
                None => {
                    summary["note"] = json!("monitor skipped: the walk has no contracting element");
                }
                Some(g) => {
                    let (mt, check, mon) = monitor(cfg, &wc, &g, drift.lambda, n, trials)?;
                    checks.push(check);
                    tables.push(("monitor".into(), mt));
                    summary["monitor"] = mon;
                }
            }
        }
    }
    Ok(Report {
        command: Command::Walk,
        tables,
        checks,
        summary,
    })
}

fn monitor(
    cfg: &ExperimentConfig,
    wc: &WalkConfig,
    g: &Isometry,
    lambda: f64,
    n: usize,
    pairs: usize,
) -> Result<(Table, Check, Value)> {
    let o = &cfg.overrides;
    let epsilon = o.epsilon.unwrap_or(lambda / 4.0);
    let lc = resolve_l(cfg, &wc.space, Some(g))?;
    let n_mon = o.monitor_n.unwrap_or(n.min(MONITOR_N));
    let mon = monitor_batch(wc, cfg.seed, pairs, lambda, epsilon, lc.l, n_mon, MONITOR_STRIDE).map_err(|e| match e {
        Error::Precondition(m) => Error::Config(m),
        other => other,
    })?;
    let mut mt = Table::new(&["n", "pass_fraction"]);
    for (k, f) in &mon.per_n {
        mt.push(vec![cell(k), cell(f)]);
    }
    let rate = mon.pass_rate(MONITOR_FROM);
    let check = Check::new(
        "monitor pass rate",
        rate,
        &format!("≥ 0.95 over n ≥ {MONITOR_FROM}"),
        rate >= 0.95,
    );
    let summary = json!({
        "epsilon": epsilon, "L": lc, "n_max": n_mon, "pairs": pairs, "pass_rate": rate,
    });
    Ok((mt, check, summary))
}

fn clt(cfg: &ExperimentConfig) -> Result<Report> {
    let wc = cfg.walk_config()?;
    let o = &cfg.overrides;
    let seed = cfg.seed;
    let n = o.n.unwrap_or(WALK_N);
    let trials = o.trials.unwrap_or(TRIALS);
    if trials < KS_MIN_TRIALS || n == 0 {
        return Err(Error::Config(format!("clt needs n ≥ 1 and at least {KS_MIN_TRIALS} trials")));
    }
    let tree = matches!(wc.space.kind, SpaceKind::RegularTree { .. });
    let mut lb = LimitLawBudget::for_space(wc.space.kind);
    lb.boundary_depth = o.boundary_depth.unwrap_or(lb.boundary_depth);
    lb.psi_samples = o.psi_samples.unwrap_or(lb.psi_samples);
    lb.variance_samples = o.variance_samples.unwrap_or(lb.variance_samples);
    lb.psi_points = o.psi_points.unwrap_or(PSI_POINTS);

    let drift = drift_estimate(&wc, seed, n, trials)?;
    let lambda = drift.lambda;
    let mut checks = Vec::new();
    let mut tables = Vec::new();
    let mut summary = json!({ "space": space_name(wc.space.kind), "n": n, "trials": trials, "budget": lb });
    let oracle = cfg.preset_name().and_then(oracle);
    if let Some(or) = &oracle {
        let dev = (lambda - or.drift).abs();
        checks.push(Check::new("drift", lambda, &format!("within 0.01 of {}", or.drift), dev < 0.01));
    }

    let boundary = match boundary_estimates(&wc, seed, lambda, &lb) {
        Ok(b) => Some(b),
        Err(Error::ZeroDrift(msg)) => {
            checks.push(Check::new("positive drift", lambda, "λ̂ clearly positive", false));
            summary["drift"] = json!(drift);
            summary["note"] = json!(msg);
            return Ok(Report {
                command: Command::Clt,
                tables,
                checks,
                summary,
            });
        }
        Err(Error::Indeterminate(msg)) => {
            // no contracting direction: boundary points sit at infinite
            // Gromov product and ψ does not exist
            checks.push(Check::new("psi defined", "no", "finite Gromov products against ν̌", false));
            summary["note"] = json!(msg);
            None
        }
        Err(e) => return Err(e),
    };

    if let Some(b) = &boundary {
        // ψ at the same points with twice the ν̌ samples
        let probes: Vec<_> = b.nu.points.iter().take(lb.psi_points).cloned().collect();
        let doubled = sample_boundary(&wc, seed, Direction::Reversed, lb.boundary_depth, 2 * lb.psi_samples)?;
        let psi2 = psi_summary(&PsiEstimator::new(&wc.space, doubled)?, &probes)?;
        let psi = &b.psi_summary;
        let shift = (psi2.sup_abs - psi.sup_abs).abs();
        let psi_tol = PSI_STABILITY * psi.sup_abs.max(1.0);
        checks.push(Check::new(
            "psi stability",
            shift,
            &format!("< {psi_tol} when ν̌ samples double"),
            shift < psi_tol,
        ));
        let mut pt = Table::new(&["point", "psi", "std_error", "psi_doubled"]);
        for (i, (p, q)) in psi.points.iter().zip(&psi2.points).enumerate() {
            pt.push(vec![cell(i), cell(p.value), cell(p.std_error), cell(q.value)]);
        }
        tables.push(("psi".into(), pt));
        if let Some(or) = &oracle {
            let ok = psi.inf >= or.psi - 0.05 && psi.sup <= or.psi + 0.05;
            checks.push(Check::new(
                "psi range",
                format!("[{}, {}]", psi.inf, psi.sup),
                &format!("within [{}, {}]", or.psi - 0.05, or.psi + 0.05),
                ok,
            ));
        }
        summary["psi"] = json!({
            "inf": psi.inf, "sup": psi.sup, "sup_abs": psi.sup_abs, "sup_abs_doubled": psi2.sup_abs,
            "samples": psi.samples, "collisions": psi.collisions,
        });
    }

    if tree {
        let count = o.boundary_samples.unwrap_or(BOUNDARY_SAMPLES);
        let nu = sample_boundary(&wc, seed, Direction::Forward, lb.boundary_depth, count)?;
        let tv = stationarity_check(&wc, &nu)?;
        checks.push(Check::new("stationarity", tv, "TV < 0.03 on depth-2 cylinders", tv < 0.03));
        let cyl = cylinder_distribution(&nu, 2)?;
        let mut ct = Table::new(&["cylinder", "frequency"]);
        for (k, f) in &cyl {
            ct.push(vec![k.clone(), cell(f)]);
        }
        tables.push(("cylinders".into(), ct));
        if let Some(or) = &oracle {
            let (name, mass) = or.cylinder;
            let f = cyl.get(name).copied().unwrap_or(0.0);
            checks.push(Check::new(
                &format!("cylinder {name}"),
                f,
                &format!("within 0.01 of {mass}"),
                (f - mass).abs() < 0.01,
            ));
        }
        summary["stationarity_tv"] = json!(tv);
    }

    let sigma2 = boundary.as_ref().map(|b| b.sigma2);
    let report = clt_report(&wc, seed, n, trials, drift, sigma2)?;
    let mut st = Table::new(&["trial", "n", "S_n"]);
    for (t, s) in report.sn.iter().enumerate() {
        st.push(vec![cell(t), cell(n), cell(s)]);
    }
    tables.insert(0, ("sn".into(), st));
    let ks = report.ks_formula.unwrap_or(report.ks_empirical);
    checks.push(Check::new("ks p-value", ks.p_value, "> 0.01", ks.p_value > 0.01));
    if trials >= KS_DISTANCE_MIN_TRIALS {
        checks.push(Check::new("ks distance", ks.statistic, "< 0.05", ks.statistic < 0.05));
    }
    let emp = report.empirical_variance;
    if let Some(s2) = sigma2 {
        checks.push(Check::new(
            "non-degenerate",
            format!("σ̂² = {} (SE {})", s2.sigma2, s2.std_error),
            "σ̂² > 3 SE",
            !s2.degenerate,
        ));
        // the sample variance of M normal draws has SE σ² √(2/(M−1))
        let emp_se = emp * (2.0 / (trials - 1) as f64).sqrt();
        let var_tol = (3.0 * emp_se.hypot(s2.std_error)).max(0.05);
        let diff = (s2.sigma2 - emp).abs();
        checks.push(Check::new(
            "variance agreement",
            format!("σ̂² = {}, empirical {}", s2.sigma2, emp),
            &format!("|difference| < {var_tol} (3 combined SE, at least 0.05)"),
            diff < var_tol,
        ));
        if let Some(or) = &oracle {
            checks.push(Check::new(
                "variance",
                s2.sigma2,
                &format!("within 0.05 of {} and of the empirical variance", or.sigma2),
                (s2.sigma2 - or.sigma2).abs() < 0.05 && diff < 0.05,
            ));
        }
        summary["sigma2"] = json!(s2);
    }
    summary["drift"] = json!(report.drift);
    summary["empirical_variance"] = json!(emp);
    summary["ks"] = json!(ks);
    summary["ks_empirical"] = json!(report.ks_empirical);
    summary["anderson_darling"] = json!(report.anderson_darling);
    Ok(Report {
        command: Command::Clt,
        tables,
        checks,
        summary,
    })
}

fn contracting(cfg: &ExperimentConfig) -> Result<Report> {
    let wc = cfg.walk_config()?;
    let trials = cfg.overrides.trials.unwrap_or(CONTRACTING_TRIALS);
    let grid: Vec<usize> = match cfg.overrides.n {
        Some(n) if n >= 8 => vec![n / 8, n / 4, n / 2, n],
        Some(n) => return Err(Error::Config(format!("contracting needs n ≥ 8, got {n}"))),
        None => CONTRACTING_GRID.to_vec(),
    };
    if trials == 0 {
        return Err(Error::Config("contracting needs at least one trial".into()));
    }
    let points = contracting_fraction(&wc, cfg.seed, &grid, trials);
    let mut t = Table::new(&["n", "fraction", "std_error", "trials"]);
    for p in &points {
        t.push(vec![cell(p.n), cell(p.fraction), cell(p.std_error), cell(p.trials)]);
    }
    let mut checks = Vec::new();
    let monotone = points.windows(2).all(|w| {
        let slack = 2.0 * w[0].std_error.hypot(w[1].std_error);
        w[1].fraction >= w[0].fraction - slack
    });
    checks.push(Check::new(
        "non-decreasing",
        points.iter().map(|p| p.fraction.to_string()).collect::<Vec<_>>().join(" "),
        "within 2 SE",
        monotone,
    ));
    let rank_one = matches!(wc.space.kind, SpaceKind::RegularTree { .. } | SpaceKind::HyperbolicPlane);
    if rank_one {
        let from = grid[grid.len() / 2];
        let low = points
            .iter()
            .filter(|p| p.n >= from)
            .map(|p| p.fraction)
            .fold(1.0, f64::min);
        checks.push(Check::new("fraction", low, &format!("≥ 0.95 for n ≥ {from}"), low >= 0.95));
    } else {
        let high = points.iter().map(|p| p.fraction).fold(0.0, f64::max);
        checks.push(Check::new("fraction", high, "0 at every n (no contracting isometries)", high == 0.0));
    }
    Ok(Report {
        command: Command::Contracting,
        tables: vec![("contracting".into(), t)],
        checks,
        summary: json!({ "space": space_name(wc.space.kind), "points": points }),
    })
}

fn audit_spaces(cfg: &ExperimentConfig) -> Result<Vec<ModelSpace>> {
    Ok(match cfg.space_kind()? {
        Some(kind) => vec![ModelSpace::new(kind)],
        None => vec![
            ModelSpace::tree(4),
            ModelSpace::hyperbolic(),
            ModelSpace::euclidean(),
            ModelSpace::tree_times_line(4),
        ],
    })
}

fn curtain_audit(cfg: &ExperimentConfig) -> Result<Report> {
    let configs = cfg.overrides.configs.or(cfg.overrides.trials).unwrap_or(AUDIT_CONFIGS);
    let ls: Vec<usize> = match cfg.overrides.l {
        Some(0) => return Err(Error::Config("L must be at least 1".into())),
        Some(l) => vec![l],
        None => vec![1, 2],
    };
    let mut t = Table::new(&["space", "audit", "L", "configurations", "violations", "max_excess"]);
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    for space in audit_spaces(cfg)? {
        let name = space_name(space.kind);
        let ax = axiom_audits(&space, configs, cfg.seed);
        for (audit, v) in [
            ("partition", ax.partition_violations),
            ("thickness", ax.thickness_violations),
            ("star-convexity", ax.star_convexity_violations),
        ] {
            t.push(vec![name.clone(), audit.into(), "-".into(), cell(configs), cell(v), "-".into()]);
            checks.push(Check::new(&format!("{name} {audit}"), v, "0 violations", v == 0));
        }
        let segments = configs.div_ceil(BOTTLENECK_PER_SEGMENT);
        for &l in &ls {
            let b = bottleneck_audits(
                &space,
                l,
                segments,
                BOTTLENECK_PER_SEGMENT,
                BOTTLENECK_LENGTH,
                &budget(cfg, cfg.seed),
                cfg.seed,
            );
            let excess = b.max_bottleneck_excess.map_or("-".to_string(), cell);
            t.push(vec![
                name.clone(),
                "bottleneck".into(),
                cell(l),
                cell(b.bottleneck_configurations),
                cell(b.bottleneck_violations),
                excess,
            ]);
            checks.push(Check::new(
                &format!("{name} bottleneck L={l}"),
                b.bottleneck_violations,
                "0 violations",
                b.bottleneck_violations == 0,
            ));
            if b.bottleneck_configurations == 0 {
                notes.push(format!("{name}: no three-curtain {l}-chains found, the bottleneck bound is vacuous"));
            }
        }
    }
    Ok(Report {
        command: Command::CurtainAudit,
        tables: vec![("curtain_audit".into(), t)],
        checks,
        summary: json!({ "configurations": configs, "L": ls, "notes": notes }),
    })
}

fn geometry_audit(cfg: &ExperimentConfig) -> Result<Report> {
    let pairs = cfg.overrides.configs.or(cfg.overrides.trials).unwrap_or(GEOMETRY_PAIRS);
    let mut t = Table::new(&["space", "L", "pairs", "max_d_l_lower", "sandwich_violations", "flat_violations"]);
    let mut checks = Vec::new();
    let mut choices = Vec::new();
    for space in audit_spaces(cfg)? {
        let name = space_name(space.kind);
        let g = match &cfg.walk {
            Some(_) => contracting_element(&cfg.walk_config()?),
            None => canonical_contracting(&space),
        };
        let lc = resolve_l(cfg, &space, g.as_ref())?;
        let b = budget_with(cfg, cfg.seed, GEOMETRY_CANDIDATES);
        let rows: Vec<(u64, u64)> = (0..pairs as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = stream(cfg.seed, Domain::Audit, i);
                let x = space.random_point(&space.basepoint, GEOMETRY_RADIUS, &mut rng);
                let y = space.random_point(&space.basepoint, GEOMETRY_RADIUS, &mut rng);
                let d = space.distance(&x, &y)?;
                Ok((d_l_lower(&space, &x, &y, lc.l, &b)?, d.ceil() as u64))
            })
            .collect::<Result<_>>()?;
        let sandwich = rows.iter().filter(|(lo, up)| lo > up).count();
        let flat = if space.kind == SpaceKind::EuclideanPlane {
            rows.iter().filter(|(lo, _)| *lo > 2).count()
        } else {
            0
        };
        let max_lower = rows.iter().map(|r| r.0).max().unwrap_or(0);
        t.push(vec![name.clone(), cell(lc.l), cell(pairs), cell(max_lower), cell(sandwich), cell(flat)]);
        checks.push(Check::new(&format!("{name} sandwich"), sandwich, "d_L_lower ≤ ⌈d⌉ on every pair", sandwich == 0));
        if space.kind == SpaceKind::EuclideanPlane {
            checks.push(Check::new(&format!("{name} flat"), flat, "d_L_lower ≤ 2 on every pair", flat == 0));
        }
        choices.push(json!({ "space": name, "L": lc }));
    }
    Ok(Report {
        command: Command::GeometryAudit,
        tables: vec![("geometry_audit".into(), t)],
        checks,
        summary: json!({ "pairs": pairs, "L": choices }),
    })
}

fn cocycle(cfg: &ExperimentConfig) -> Result<Report> {
    let triples = cfg.overrides.configs.or(cfg.overrides.trials).unwrap_or(COCYCLE_TRIPLES);
    let mut t = Table::new(&["space", "triples", "max_residual"]);
    let mut checks = Vec::new();
    for space in audit_spaces(cfg)? {
        let name = space_name(space.kind);
        let a = cocycle_audit(&space, triples, COCYCLE_ELEMENT_SIZE, cfg.seed);
        t.push(vec![name.clone(), cell(a.triples), cell(a.max_residual)]);
        checks.push(Check::new(
            &format!("{name} cocycle"),
            a.max_residual,
            &format!("< {COCYCLE_TOLERANCE}"),
            a.passes(COCYCLE_TOLERANCE),
        ));
    }
    Ok(Report {
        command: Command::CocycleAudit,
        tables: vec![("cocycle_audit".into(), t)],
        checks,
        summary: json!({ "triples": triples }),
    })
}
