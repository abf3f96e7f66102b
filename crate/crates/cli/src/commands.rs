use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use dppc::facility::{
    baseline_client_cover, dp_client_cover, AlphaMode, ClientCoverOutcome, ClientCoverParams,
    ClientCoverResult, DEFAULT_ALPHA_CONSTANT,
};
use dppc::greedy_cover::partial_set_cover_greedy;
use dppc::maxcov_cover::{partial_cover_via_maxcov, MaxCovPlan};
use dppc::mechanisms::child_seed;
use dppc::model::{parse_set_system, parse_vacc_instance, write_set_system, write_vacc_instance};
use dppc::oracle::{
    exact_partial_cover, gen_psc_to_vacc, gen_random_set_system, gen_star_with_extra_edges,
    gen_synthetic_mobility, greedy_partial_cover, MobilityParams,
};
use dppc::{CoverRequirement, NoiseSource, PrivacyBudget, PrivacyLedger, SetSystem, VaccInstance};
use rayon::prelude::*;

use crate::args::{
    AlphaModeArg, BenchArgs, Cli, Command, Common, GenCommand, Problem, PscAlgo, SolvePscArgs,
    SolveVaccArgs, VaccAlgo,
};
use crate::config::FileConfig;
use crate::error::{CliError, Result};
use crate::grid::parse_grid;

pub const PSC_SCHEMA: &str = "psc-v1";
pub const VACC_SCHEMA: &str = "vacc-v1";
pub const BENCH_SCHEMA: &str = "bench-v1";

pub const PSC_HEADER: &[&str] = &[
    "schema",
    "algo",
    "instance",
    "n",
    "m",
    "rho",
    "eps",
    "delta",
    "seed",
    "trial",
    "trial_seed",
    "k",
    "sets",
    "coverage",
    "exhausted",
    "opt_guess",
    "ledger_eps",
    "ledger_delta",
    "wall_ms",
];

pub const VACC_HEADER: &[&str] = &[
    "schema",
    "algo",
    "instance",
    "people",
    "locations",
    "k",
    "rho",
    "eps",
    "delta",
    "gamma",
    "alpha_mode",
    "alpha",
    "seed",
    "trial",
    "trial_seed",
    "status",
    "facilities",
    "radius",
    "objective",
    "objective_units",
    "rounds",
    "round_sizes",
    "ledger_eps",
    "ledger_delta",
    "wall_ms",
];

pub const BENCH_HEADER: &[&str] = &[
    "schema",
    "problem",
    "algo",
    "instance",
    "k",
    "rho",
    "eps",
    "delta",
    "gamma",
    "alpha_mode",
    "seed",
    "trial_offset",
    "trials",
    "solved",
    "errors",
    "mean_objective",
    "median_objective",
    "std_objective",
    "mean_size",
    "median_size",
    "std_size",
    "baseline_objective",
    "baseline_size",
    "ledger_eps",
    "ledger_delta",
    "error",
];

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::SolvePsc(a) => solve_psc(a),
        Command::SolveVacc(a) => solve_vacc(a),
        Command::Bench(a) => bench(a),
        Command::Gen(g) => generate(g),
    }
}

fn worker_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("DPPC_THREADS") {
        let cap = v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&c| c >= 1)
            .ok_or_else(|| {
                CliError::usage(format!(
                    "DPPC_THREADS must be a positive integer, got {v:?}"
                ))
            })?;
        let available = std::thread::available_parallelism().map_or(1, |n| n.get());
        builder = builder.num_threads(cap.min(available));
    }
    builder.build().map_err(|e| CliError::usage(e.to_string()))
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })
}

fn write_text(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.into(),
            source,
        }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

fn write_csv(out: Option<&Path>, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let sink: Box<dyn Write> = match out {
        Some(path) => Box::new(std::fs::File::create(path).map_err(|source| CliError::Io {
            path: path.into(),
            source,
        })?),
        None => Box::new(std::io::stdout()),
    };
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush().map_err(|source| CliError::Io {
        path: out.map_or("<stdout>".into(), Path::to_path_buf),
        source,
    })?;
    Ok(())
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Shortest round-trip form, switching to exponent notation for extreme magnitudes.
fn num(x: f64) -> String {
    format!("{x:?}")
}

fn ms(start: Instant) -> String {
    format!("{:.3}", start.elapsed().as_secs_f64() * 1e3)
}

/// Seed, first trial and trial count shared by the solving commands.
#[derive(Debug, Clone, Copy)]
struct TrialPlan {
    seed: u64,
    offset: u64,
    count: u64,
}

impl TrialPlan {
    fn resolve(common: &Common, cfg: &FileConfig) -> Result<Self> {
        let count = cfg.pick(common.trials, "trials", Some(1))?;
        if count == 0 {
            return Err(CliError::usage("--trials must be at least 1"));
        }
        Ok(TrialPlan {
            seed: cfg.pick(common.seed, "seed", Some(0))?,
            offset: cfg.pick(common.trial_offset, "trial-offset", Some(0))?,
            count,
        })
    }

    /// `(trial, trial_seed)` for every trial.
    fn trials(&self) -> Vec<(u64, u64)> {
        (self.offset..self.offset + self.count)
            .map(|t| (t, child_seed(self.seed, t)))
            .collect()
    }
}

fn input_path(common: &Common, cfg: &FileConfig) -> Result<PathBuf> {
    cfg.pick(common.input.clone(), "in", None)
}

fn output_path(common: &Common, cfg: &FileConfig) -> Result<Option<PathBuf>> {
    Ok(common.out.clone().or(cfg.get("out")?))
}

fn ledger_cells(ledger: &PrivacyLedger) -> [String; 2] {
    let t = ledger.total();
    [num(t.epsilon()), num(t.delta())]
}

#[derive(Debug, Clone)]
struct PscRun {
    sets: Vec<usize>,
    k: usize,
    coverage: usize,
    exhausted: bool,
    opt_guess: Option<usize>,
    ledger: PrivacyLedger,
    warnings: Vec<String>,
}

fn run_psc(
    system: &SetSystem,
    algo: PscAlgo,
    rho: CoverRequirement,
    budget: Option<PrivacyBudget>,
    seed: u64,
) -> Result<PscRun> {
    let mut noise = NoiseSource::seeded(seed);
    let need = || budget.ok_or_else(|| CliError::usage("--eps is required for private algorithms"));
    Ok(match algo {
        PscAlgo::Greedy => {
            let out = partial_set_cover_greedy(system, rho, need()?, &mut noise)?;
            PscRun {
                sets: out.solution.chosen().to_vec(),
                k: out.solution.k,
                coverage: out.coverage,
                exhausted: out.exhausted,
                opt_guess: None,
                ledger: out.ledger,
                warnings: out.warnings.iter().map(|w| w.to_string()).collect(),
            }
        }
        PscAlgo::Maxcov => {
            let out = partial_cover_via_maxcov(system, rho, need()?, &mut noise)?;
            PscRun {
                k: out.sets.len(),
                sets: out.sets,
                coverage: out.coverage,
                exhausted: false,
                opt_guess: out.opt_guess,
                ledger: out.ledger,
                warnings: Vec::new(),
            }
        }
        PscAlgo::Baseline => {
            let sets = greedy_partial_cover(system, rho)?;
            let coverage = system.coverage_count(&sets)?;
            PscRun {
                k: sets.len(),
                sets,
                coverage,
                exhausted: false,
                opt_guess: None,
                ledger: PrivacyLedger::new(),
                warnings: Vec::new(),
            }
        }
        PscAlgo::Exact => {
            let res = exact_partial_cover(system, rho)?;
            let coverage = system.coverage_count(&res.witness)?;
            PscRun {
                k: res.witness.len(),
                sets: res.witness,
                coverage,
                exhausted: false,
                opt_guess: None,
                ledger: PrivacyLedger::new(),
                warnings: Vec::new(),
            }
        }
    })
}

fn solve_psc(args: SolvePscArgs) -> Result<()> {
    let cfg = FileConfig::load(args.common.config.as_deref())?;
    let algo = cfg.pick(args.algo, "algo", Some(PscAlgo::Greedy))?;
    let rho = CoverRequirement::new(cfg.pick(args.rho, "rho", None)?)?;
    let private = matches!(algo, PscAlgo::Greedy | PscAlgo::Maxcov);
    let budget = if private {
        let eps = cfg.pick(args.eps, "eps", None)?;
        let delta = cfg.pick(args.common.delta, "delta", Some(1e-6))?;
        Some(PrivacyBudget::new(eps, delta)?)
    } else {
        None
    };
    let plan = TrialPlan::resolve(&args.common, &cfg)?;
    let input = input_path(&args.common, &cfg)?;
    let out = output_path(&args.common, &cfg)?;
    let system = parse_set_system(&read_file(&input)?)?;
    if let (PscAlgo::Maxcov, Some(b)) = (algo, budget) {
        MaxCovPlan::new(system.n(), rho, b)?;
    }
    let algo_name = format!("{algo:?}").to_lowercase();
    let instance = input.display().to_string();
    let pool = worker_pool()?;
    let rows: Vec<Result<(Vec<String>, Vec<String>)>> = pool.install(|| {
        plan.trials()
            .into_par_iter()
            .map(|(trial, trial_seed)| {
                let start = Instant::now();
                let r = run_psc(&system, algo, rho, budget, trial_seed)?;
                let [le, ld] = ledger_cells(&r.ledger);
                let row = vec![
                    PSC_SCHEMA.into(),
                    algo_name.clone(),
                    instance.clone(),
                    system.n().to_string(),
                    system.m().to_string(),
                    num(rho.rho()),
                    budget.map_or(String::new(), |b| num(b.epsilon())),
                    budget.map_or(String::new(), |b| num(b.delta())),
                    plan.seed.to_string(),
                    trial.to_string(),
                    trial_seed.to_string(),
                    r.k.to_string(),
                    join(&r.sets),
                    r.coverage.to_string(),
                    r.exhausted.to_string(),
                    r.opt_guess.map_or(String::new(), |g| g.to_string()),
                    le,
                    ld,
                    ms(start),
                ];
                Ok((r.warnings, row))
            })
            .collect()
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    // the warnings depend on the parameters only, so the first trial speaks for all
    for w in rows.first().map_or(&[][..], |(w, _)| &w[..]) {
        log::warn!("{w}");
    }
    let rows: Vec<Vec<String>> = rows.into_iter().map(|(_, r)| r).collect();
    write_csv(out.as_deref(), PSC_HEADER, &rows)
}

fn alpha_mode(arg: AlphaModeArg, constant: f64) -> AlphaMode {
    match arg {
        AlphaModeArg::Heuristic => AlphaMode::Heuristic,
        AlphaModeArg::Theoretical => AlphaMode::Theoretical { constant },
    }
}

struct VaccRun {
    outcome: ClientCoverOutcome,
    /// Facilities reported: the solution, or the best round when infeasible.
    facilities: Vec<usize>,
    radius: f64,
    objective: Option<f64>,
}

fn run_vacc(
    instance: &VaccInstance,
    algo: VaccAlgo,
    params: &ClientCoverParams,
    seed: u64,
    trial: u64,
) -> Result<VaccRun> {
    let outcome = match algo {
        VaccAlgo::Private => dp_client_cover(instance, params, &mut NoiseSource::seeded(seed))?,
        VaccAlgo::Baseline => baseline_client_cover(instance, params.k, params.rho, params.gamma)?,
    };
    for r in &outcome.rounds {
        log::info!(
            "trial {trial}: radius {:.6} |F_R| = {} {}",
            r.radius,
            r.facilities.len(),
            if r.accepted { "accepted" } else { "rejected" }
        );
    }
    let (facilities, radius) = match &outcome.result {
        ClientCoverResult::Solved(s) => (s.facilities.clone(), s.radius),
        ClientCoverResult::Infeasible { best } => (best.facilities.clone(), best.radius),
    };
    let objective = if facilities.is_empty() {
        None
    } else {
        Some(instance.objective_percentile(&facilities, params.rho)?)
    };
    Ok(VaccRun {
        outcome,
        facilities,
        radius,
        objective,
    })
}

struct VaccSettings {
    algo: VaccAlgo,
    params: ClientCoverParams,
    mode: AlphaModeArg,
}

#[allow(clippy::too_many_arguments)]
fn vacc_params(
    k: usize,
    rho: f64,
    eps: f64,
    delta: f64,
    gamma: f64,
    mode: AlphaModeArg,
    constant: f64,
) -> Result<ClientCoverParams> {
    Ok(ClientCoverParams::new(
        k,
        CoverRequirement::new(rho)?,
        gamma,
        PrivacyBudget::new(eps, delta)?,
        alpha_mode(mode, constant),
    )?)
}

fn solve_vacc(args: SolveVaccArgs) -> Result<()> {
    let cfg = FileConfig::load(args.common.config.as_deref())?;
    let algo = cfg.pick(args.algo, "algo", Some(VaccAlgo::Private))?;
    let mode = cfg.pick(args.alpha_mode, "alpha-mode", Some(AlphaModeArg::Heuristic))?;
    let constant = cfg.pick(
        args.alpha_constant,
        "alpha-constant",
        Some(DEFAULT_ALPHA_CONSTANT),
    )?;
    // the baseline spends no budget; a placeholder keeps the parameter checks shared
    let eps_default = (algo == VaccAlgo::Baseline).then_some(1.0);
    let params = vacc_params(
        cfg.pick(args.k, "k", None)?,
        cfg.pick(args.rho, "rho", None)?,
        cfg.pick(args.eps, "eps", eps_default)?,
        cfg.pick(args.common.delta, "delta", Some(1e-6))?,
        cfg.pick(args.gamma, "gamma", Some(1.0 / 1024.0))?,
        mode,
        constant,
    )?;
    let settings = VaccSettings { algo, params, mode };
    let plan = TrialPlan::resolve(&args.common, &cfg)?;
    let input = input_path(&args.common, &cfg)?;
    let out = output_path(&args.common, &cfg)?;
    let instance = parse_vacc_instance(&read_file(&input)?)?;
    let name = input.display().to_string();
    let pool = worker_pool()?;
    let rows: Vec<Result<(bool, Vec<String>)>> = pool.install(|| {
        plan.trials()
            .into_par_iter()
            .map(|(trial, trial_seed)| {
                vacc_row(&instance, &name, &settings, &plan, trial, trial_seed)
            })
            .collect()
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let infeasible = rows.iter().filter(|(solved, _)| !solved).count();
    let rows: Vec<Vec<String>> = rows.into_iter().map(|(_, r)| r).collect();
    write_csv(out.as_deref(), VACC_HEADER, &rows)?;
    if infeasible > 0 {
        return Err(CliError::Infeasible {
            trials: infeasible,
            total: rows.len(),
        });
    }
    Ok(())
}

fn vacc_row(
    instance: &VaccInstance,
    name: &str,
    s: &VaccSettings,
    plan: &TrialPlan,
    trial: u64,
    trial_seed: u64,
) -> Result<(bool, Vec<String>)> {
    let start = Instant::now();
    let run = run_vacc(instance, s.algo, &s.params, trial_seed, trial)?;
    let solved = run.outcome.solution().is_some();
    let private = s.algo == VaccAlgo::Private;
    let labels = instance.location_labels();
    let [le, ld] = ledger_cells(&run.outcome.ledger);
    let row = vec![
        VACC_SCHEMA.into(),
        format!("{:?}", s.algo).to_lowercase(),
        name.into(),
        instance.num_people().to_string(),
        instance.num_locations().to_string(),
        s.params.k.to_string(),
        num(s.params.rho.rho()),
        if private {
            num(s.params.budget.epsilon())
        } else {
            String::new()
        },
        if private {
            num(s.params.budget.delta())
        } else {
            String::new()
        },
        num(s.params.gamma),
        if private {
            format!("{:?}", s.mode).to_lowercase()
        } else {
            String::new()
        },
        num(run.outcome.alpha),
        plan.seed.to_string(),
        trial.to_string(),
        trial_seed.to_string(),
        if solved { "solved" } else { "infeasible" }.into(),
        join(run.facilities.iter().map(|&j| &labels[j])),
        num(run.radius),
        run.objective.map_or(String::new(), num),
        run.objective
            .map_or(String::new(), |o| num(o * instance.scale())),
        run.outcome.rounds.len().to_string(),
        join(run.outcome.rounds.iter().map(|r| r.facilities.len())),
        le,
        ld,
        ms(start),
    ];
    Ok((solved, row))
}

#[derive(Debug, Default, Clone, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub median: f64,
    pub std: f64,
}

/// Mean, median and sample standard deviation; `None` for no values.
pub fn summarize(values: &[f64]) -> Option<Summary> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    let median = if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    };
    let std = if values.len() > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    Some(Summary { mean, median, std })
}

fn summary_cells(s: Option<Summary>) -> [String; 3] {
    match s {
        Some(s) => [num(s.mean), num(s.median), num(s.std)],
        None => Default::default(),
    }
}

/// Outcome of one trial inside a bench cell.
enum CellTrial {
    Done {
        objective: f64,
        size: f64,
        ledger: PrivacyBudget,
    },
    Infeasible {
        ledger: PrivacyBudget,
    },
    Failed(String),
}

struct BenchCell {
    k: Option<usize>,
    rho: f64,
    eps: f64,
}

fn bench(args: BenchArgs) -> Result<()> {
    let cfg = FileConfig::load(args.common.config.as_deref())?;
    let problem = cfg.pick(args.problem, "problem", Some(Problem::Vacc))?;
    let plan = TrialPlan::resolve(&args.common, &cfg)?;
    let input = input_path(&args.common, &cfg)?;
    let out = output_path(&args.common, &cfg)?;
    let delta = cfg.pick(args.common.delta, "delta", Some(1e-6))?;
    let grid_err = |e: crate::grid::GridError| CliError::usage(e.to_string());
    let rhos: Vec<f64> =
        parse_grid(&cfg.pick_text(args.rho.clone(), "rho", None)?).map_err(grid_err)?;
    let epss: Vec<f64> =
        parse_grid(&cfg.pick_text(args.eps.clone(), "eps", None)?).map_err(grid_err)?;
    let ks: Vec<Option<usize>> = match problem {
        Problem::Vacc => parse_grid(&cfg.pick_text(args.k.clone(), "k", None)?)
            .map_err(grid_err)?
            .into_iter()
            .map(Some)
            .collect(),
        Problem::Psc => {
            if args.k.is_some() || cfg.text("k").is_some() {
                return Err(CliError::usage("--k applies to clinic sweeps only"));
            }
            vec![None]
        }
    };
    let mut cells = Vec::new();
    for &rho in &rhos {
        for &eps in &epss {
            for &k in &ks {
                cells.push(BenchCell { k, rho, eps });
            }
        }
    }
    let bytes = read_file(&input)?;
    let name = input.display().to_string();
    let trials = plan.trials();
    let tasks: Vec<(usize, u64, u64)> = (0..cells.len())
        .flat_map(|c| trials.iter().map(move |&(t, s)| (c, t, s)))
        .collect();
    let pool = worker_pool()?;
    let rows = match problem {
        Problem::Vacc => {
            let instance = parse_vacc_instance(&bytes)?;
            let mode = cfg.pick(args.alpha_mode, "alpha-mode", Some(AlphaModeArg::Heuristic))?;
            let constant = cfg.pick(
                args.alpha_constant,
                "alpha-constant",
                Some(DEFAULT_ALPHA_CONSTANT),
            )?;
            let gamma = cfg.pick(args.gamma, "gamma", Some(1.0 / 1024.0))?;
            let params: Vec<Result<ClientCoverParams>> = cells
                .iter()
                .map(|c| vacc_params(c.k.unwrap_or(0), c.rho, c.eps, delta, gamma, mode, constant))
                .collect();
            let results: Vec<CellTrial> = pool.install(|| {
                tasks
                    .par_iter()
                    .map(|&(c, trial, seed)| match &params[c] {
                        Err(e) => CellTrial::Failed(e.to_string()),
                        Ok(p) => match run_vacc(&instance, VaccAlgo::Private, p, seed, trial) {
                            Err(e) => CellTrial::Failed(e.to_string()),
                            Ok(run) => match (run.outcome.solution(), run.objective) {
                                (Some(s), Some(o)) => CellTrial::Done {
                                    objective: o * instance.scale(),
                                    size: s.facilities.len() as f64,
                                    ledger: run.outcome.ledger.total(),
                                },
                                _ => CellTrial::Infeasible {
                                    ledger: run.outcome.ledger.total(),
                                },
                            },
                        },
                    })
                    .collect()
            });
            let mut rows = Vec::with_capacity(cells.len());
            for (c, cell) in cells.iter().enumerate() {
                let baseline = params[c].as_ref().ok().map(|p| {
                    baseline_client_cover(&instance, p.k, p.rho, p.gamma).map(|b| match b.result {
                        ClientCoverResult::Solved(s) => {
                            let o = instance.objective_percentile(&s.facilities, p.rho).ok();
                            (o.map(|o| o * instance.scale()), Some(s.facilities.len()))
                        }
                        ClientCoverResult::Infeasible { .. } => (None, None),
                    })
                });
                let baseline = match baseline {
                    Some(Ok(b)) => b,
                    _ => (None, None),
                };
                let slice = &results[c * trials.len()..(c + 1) * trials.len()];
                rows.push(bench_row(
                    "vacc",
                    "private",
                    &name,
                    cell,
                    delta,
                    Some(gamma),
                    Some(mode),
                    &plan,
                    slice,
                    baseline,
                ));
            }
            rows
        }
        Problem::Psc => {
            let system = parse_set_system(&bytes)?;
            let algo = cfg.pick(args.algo, "algo", Some(PscAlgo::Greedy))?;
            if !matches!(algo, PscAlgo::Greedy | PscAlgo::Maxcov) {
                return Err(CliError::usage(
                    "set-cover sweeps take --algo greedy or maxcov",
                ));
            }
            let results: Vec<CellTrial> = pool.install(|| {
                tasks
                    .par_iter()
                    .map(|&(c, _, seed)| {
                        let cell = &cells[c];
                        let run = CoverRequirement::new(cell.rho)
                            .and_then(|r| Ok((r, PrivacyBudget::new(cell.eps, delta)?)))
                            .map_err(CliError::from)
                            .and_then(|(r, b)| run_psc(&system, algo, r, Some(b), seed));
                        match run {
                            Ok(r) => CellTrial::Done {
                                objective: r.coverage as f64,
                                size: r.k as f64,
                                ledger: r.ledger.total(),
                            },
                            Err(e) => CellTrial::Failed(e.to_string()),
                        }
                    })
                    .collect()
            });
            let algo_name = format!("{algo:?}").to_lowercase();
            let mut rows = Vec::with_capacity(cells.len());
            for (c, cell) in cells.iter().enumerate() {
                let baseline = CoverRequirement::new(cell.rho)
                    .and_then(|r| greedy_partial_cover(&system, r))
                    .ok()
                    .map(|sets| {
                        (
                            system.coverage_count(&sets).ok().map(|v| v as f64),
                            Some(sets.len()),
                        )
                    })
                    .unwrap_or((None, None));
                let slice = &results[c * trials.len()..(c + 1) * trials.len()];
                rows.push(bench_row(
                    "psc", &algo_name, &name, cell, delta, None, None, &plan, slice, baseline,
                ));
            }
            rows
        }
    };
    write_csv(out.as_deref(), BENCH_HEADER, &rows)
}

#[allow(clippy::too_many_arguments)]
fn bench_row(
    problem: &str,
    algo: &str,
    instance: &str,
    cell: &BenchCell,
    delta: f64,
    gamma: Option<f64>,
    mode: Option<AlphaModeArg>,
    plan: &TrialPlan,
    results: &[CellTrial],
    baseline: (Option<f64>, Option<usize>),
) -> Vec<String> {
    let mut objectives = Vec::new();
    let mut sizes = Vec::new();
    let mut errors = 0;
    let mut first_error = String::new();
    let (mut le, mut ld) = (0.0f64, 0.0f64);
    for r in results {
        match r {
            CellTrial::Done {
                objective,
                size,
                ledger,
            } => {
                objectives.push(*objective);
                sizes.push(*size);
                le = le.max(ledger.epsilon());
                ld = ld.max(ledger.delta());
            }
            CellTrial::Infeasible { ledger } => {
                le = le.max(ledger.epsilon());
                ld = ld.max(ledger.delta());
            }
            CellTrial::Failed(msg) => {
                errors += 1;
                if first_error.is_empty() {
                    first_error = msg.clone();
                }
            }
        }
    }
    let [mo, mdo, so] = summary_cells(summarize(&objectives));
    let [ms_, mds, ss] = summary_cells(summarize(&sizes));
    let spent = errors < results.len();
    vec![
        BENCH_SCHEMA.into(),
        problem.into(),
        algo.into(),
        instance.into(),
        cell.k.map_or(String::new(), |k| k.to_string()),
        num(cell.rho),
        num(cell.eps),
        num(delta),
        gamma.map_or(String::new(), num),
        mode.map_or(String::new(), |m| format!("{m:?}").to_lowercase()),
        plan.seed.to_string(),
        plan.offset.to_string(),
        plan.count.to_string(),
        objectives.len().to_string(),
        errors.to_string(),
        mo,
        mdo,
        so,
        ms_,
        mds,
        ss,
        baseline.0.map_or(String::new(), num),
        baseline.1.map_or(String::new(), |v| v.to_string()),
        if spent { num(le) } else { String::new() },
        if spent { num(ld) } else { String::new() },
        first_error,
    ]
}

fn generate(cmd: GenCommand) -> Result<()> {
    match cmd {
        GenCommand::Star { n, extra, out } => write_text(
            out.as_deref(),
            &write_set_system(&gen_star_with_extra_edges(n, extra)?),
        ),
        GenCommand::Mobility {
            people,
            locations,
            clusters,
            spread,
            seed,
            out,
        } => {
            let inst = gen_synthetic_mobility(&MobilityParams {
                people,
                locations,
                clusters,
                spread,
                seed,
            })?;
            write_text(out.as_deref(), &write_vacc_instance(&inst))
        }
        GenCommand::ReducePsc { input, out } => {
            let system = parse_set_system(&read_file(&input)?)?;
            write_text(
                out.as_deref(),
                &write_vacc_instance(&gen_psc_to_vacc(&system)?),
            )
        }
        GenCommand::RandomPsc {
            n,
            m,
            density,
            seed,
            out,
        } => write_text(
            out.as_deref(),
            &write_set_system(&gen_random_set_system(n, m, density, seed)?),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_statistics() {
        assert_eq!(summarize(&[]), None);
        let s = summarize(&[3.0]).unwrap();
        assert_eq!((s.mean, s.median, s.std), (3.0, 3.0, 0.0));
        let s = summarize(&[1.0, 2.0, 3.0, 10.0]).unwrap();
        assert_eq!(s.mean, 4.0);
        assert_eq!(s.median, 2.5);
        assert!((s.std - (50.0f64 / 3.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn headers_have_unique_columns() {
        for h in [PSC_HEADER, VACC_HEADER, BENCH_HEADER] {
            let mut cols = h.to_vec();
            cols.sort_unstable();
            cols.dedup();
            assert_eq!(cols.len(), h.len());
            assert_eq!(h[0], "schema");
        }
    }
}
