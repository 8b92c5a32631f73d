use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use qlnet::annealer::{self, AnnealParams};
use qlnet::catalog::{TopologyKind, TopologySpec};
use qlnet::dynamics::{qld_field_norm, Init, Learner, LearnerConfig, UpdateOrder};
use qlnet::equilibria::{equilibrium_report, perturbed_gradient_residual, surprisal_gap};
use qlnet::experiments::{self, derive_seed, AlphaPolicy, BatchSpec, GameFamily, RunSettings, SweepSpec, TSearch};
use qlnet::spectral::{stability_report, verify_block_norm_bound, Condition};
use qlnet::{ExplorationRates, JointStrategy, NetworkGame};

use crate::config::resolve;
use crate::output::Output;
use crate::{CliError, CliResult};

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// TOML file; its keys override the matching flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "qlnet-out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Shapley,
    Sato,
    Chakraborty,
    Mismatching,
    Random,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct FamilyArgs {
    #[arg(long, value_enum, default_value_t = Family::Shapley)]
    pub family: Family,
    /// Shapley β.
    #[arg(long, default_value_t = 0.2)]
    pub beta: f64,
    /// Sato ε_X.
    #[arg(long, default_value_t = 0.01, allow_negative_numbers = true)]
    pub eps_x: f64,
    /// Sato ε_Y.
    #[arg(long, default_value_t = -0.05, allow_negative_numbers = true)]
    pub eps_y: f64,
    /// Chakraborty α.
    #[arg(long, default_value_t = 2.5, allow_negative_numbers = true)]
    pub payoff_alpha: f64,
    /// Chakraborty β.
    #[arg(long, default_value_t = 1.5, allow_negative_numbers = true)]
    pub payoff_beta: f64,
    /// Mismatching M.
    #[arg(long, default_value_t = 2.0)]
    pub mismatch: f64,
    /// Random games: actions per agent.
    #[arg(long, default_value_t = 2)]
    pub actions: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub low: f64,
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    pub high: f64,
    #[arg(long, default_value_t = 0)]
    pub game_seed: u64,
}

impl FamilyArgs {
    pub fn family(&self) -> GameFamily {
        match self.family {
            Family::Shapley => GameFamily::Shapley { beta: self.beta },
            Family::Sato => GameFamily::Sato {
                eps_x: self.eps_x,
                eps_y: self.eps_y,
            },
            Family::Chakraborty => GameFamily::Chakraborty {
                alpha: self.payoff_alpha,
                beta: self.payoff_beta,
            },
            Family::Mismatching => GameFamily::Mismatching { m: self.mismatch },
            Family::Random => GameFamily::Random {
                actions: self.actions,
                low: self.low,
                high: self.high,
                seed: self.game_seed,
            },
        }
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct GameArgs {
    /// Read the game from a JSON file instead of building a family.
    #[arg(long)]
    pub game_file: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilyArgs,
    #[arg(long, default_value = "ring")]
    pub topology: TopologyKind,
    #[arg(long, default_value_t = 3)]
    pub agents: usize,
}

impl GameArgs {
    pub fn build(&self) -> CliResult<NetworkGame> {
        match &self.game_file {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::Validation(format!("cannot read game {}: {e}", path.display()))
                })?;
                Ok(NetworkGame::from_json(&text)?)
            }
            None => Ok(self
                .family
                .family()
                .build(TopologySpec::new(self.topology, self.agents))?),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlphaMode {
    /// Use the learning rate as given.
    Fixed,
    /// Cap the learning rate at min T / ‖interaction matrix‖₂.
    Stable,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct RunArgs {
    #[arg(long, default_value_t = 20_000)]
    pub horizon: usize,
    #[arg(long, default_value_t = 2500)]
    pub window: usize,
    #[arg(long, default_value_t = 1e-5)]
    pub tol: f64,
    /// Learning rate α, or its cap under the stable policy.
    #[arg(long, default_value_t = 0.1)]
    pub learning_rate: f64,
    #[arg(long, value_enum, default_value_t = AlphaMode::Fixed)]
    pub alpha_policy: AlphaMode,
    #[arg(long, default_value = "sequential")]
    pub order: UpdateOrder,
}

impl RunArgs {
    fn settings(&self) -> RunSettings {
        RunSettings {
            horizon: self.horizon,
            window: self.window,
            tol: self.tol,
            alpha: match self.alpha_policy {
                AlphaMode::Fixed => AlphaPolicy::Fixed(self.learning_rate),
                AlphaMode::Stable => AlphaPolicy::Stable {
                    max: self.learning_rate,
                },
            },
            order: self.order,
        }
    }
}

fn rates_for(game: &NetworkGame, t: &[f64]) -> CliResult<ExplorationRates> {
    let n = game.num_agents();
    let v = match t.len() {
        1 => vec![t[0]; n],
        m if m == n => t.to_vec(),
        m => {
            return Err(CliError::Validation(format!(
                "{m} exploration rates for {n} agents (give one or {n})"
            )))
        }
    };
    Ok(ExplorationRates::new(v)?)
}

fn seeds(master: u64, count: usize) -> Vec<u64> {
    (0..count as u64).map(|i| derive_seed(master, i)).collect()
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> CliResult<Vec<u8>> {
    w.into_inner().map_err(|e| CliError::Other(e.to_string()))
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
    #[command(flatten)]
    #[serde(flatten)]
    pub game: GameArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub run: RunArgs,
    /// Exploration rate, one value for all agents or one per agent.
    #[arg(long = "t", value_delimiter = ',', default_value = "1.0")]
    pub t: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    pub num_inits: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Keep every `stride`-th step in the trajectory file.
    #[arg(long, default_value_t = 100)]
    pub stride: usize,
}

#[derive(Serialize)]
struct SimulateRun {
    seed: u64,
    converged: bool,
    spread: f64,
    final_strategy: JointStrategy,
    qre_residual: f64,
    epsilon: f64,
    exploitability: f64,
    qld_field_norm: f64,
}

#[derive(Serialize)]
struct SimulateSummary {
    alpha: f64,
    rates: ExplorationRates,
    runs: Vec<SimulateRun>,
}

pub fn simulate(flags: SimulateArgs) -> CliResult<PathBuf> {
    let args = resolve(&flags, flags.common.config.as_deref())?;
    if args.stride == 0 || args.num_inits == 0 {
        return Err(CliError::Validation("stride and num_inits must be positive".into()));
    }
    let game = args.game.build()?;
    let rates = rates_for(&game, &args.t)?;
    let settings = args.run.settings();
    settings.validate()?;
    let alpha = settings.alpha.resolve(&game, &rates)?;
    let seeds = seeds(args.seed, args.num_inits);

    let mut traj = csv::Writer::from_writer(Vec::new());
    traj.write_record(["init", "step", "agent", "action", "probability"])?;
    let offsets: Vec<usize> = (0..=game.num_agents())
        .map(|k| if k == game.num_agents() { game.total_actions() } else { game.offset(k) })
        .collect();
    let write_state = |w: &mut csv::Writer<Vec<u8>>, init: usize, step: usize, x: &[f64]| -> csv::Result<()> {
        for k in 0..offsets.len() - 1 {
            for (a, p) in x[offsets[k]..offsets[k + 1]].iter().enumerate() {
                w.write_record([
                    init.to_string(),
                    step.to_string(),
                    k.to_string(),
                    a.to_string(),
                    p.to_string(),
                ])?;
            }
        }
        Ok(())
    };

    let mut runs = Vec::new();
    for (init, &seed) in seeds.iter().enumerate() {
        let cfg = LearnerConfig::with_rates(rates.clone(), settings.horizon)?
            .alpha(alpha)
            .window(settings.window)
            .tolerance(settings.tol)
            .seed(seed)
            .order(settings.order);
        let mut learner = Learner::new(&game, &cfg, Init::Random)?;
        write_state(&mut traj, init, 0, learner.strategy_flat())?;
        let mut step = 0;
        let mut failure = None;
        let burn = settings.horizon - settings.window;
        learner.advance(burn, |x| {
            step += 1;
            if step % args.stride == 0 || step == settings.horizon {
                if let Err(e) = write_state(&mut traj, init, step, x) {
                    failure.get_or_insert(e);
                }
            }
        })?;
        let mut hi = vec![f64::NEG_INFINITY; game.total_actions()];
        let mut lo = vec![f64::INFINITY; game.total_actions()];
        learner.advance(settings.window, |x| {
            step += 1;
            for ((h, l), v) in hi.iter_mut().zip(lo.iter_mut()).zip(x) {
                *h = h.max(*v);
                *l = l.min(*v);
            }
            if step % args.stride == 0 || step == settings.horizon {
                if let Err(e) = write_state(&mut traj, init, step, x) {
                    failure.get_or_insert(e);
                }
            }
        })?;
        if let Some(e) = failure {
            return Err(e.into());
        }
        let spread = hi
            .iter()
            .zip(&lo)
            .map(|(h, l)| if *h > 0.0 { (h - l) / h } else { 0.0 })
            .fold(0.0, f64::max);
        let x = learner.strategy();
        let report = equilibrium_report(&game, &x, &rates)?;
        runs.push(SimulateRun {
            seed,
            converged: spread < settings.tol,
            spread,
            qre_residual: report.qre_residual,
            epsilon: report.epsilon,
            exploitability: report.exploitability,
            qld_field_norm: qld_field_norm(&game, &x, &rates)?,
            final_strategy: x,
        });
    }

    let mut out = Output::create(&flags.common.out)?;
    out.write("trajectory.csv", &finish_csv(traj)?)?;
    out.json("summary.json", &SimulateSummary { alpha, rates, runs })?;
    out.finish("simulate", &args, &seeds)
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct BoundsArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
    #[command(flatten)]
    #[serde(flatten)]
    pub game: GameArgs,
}

pub fn bounds(flags: BoundsArgs) -> CliResult<PathBuf> {
    let args = resolve(&flags, flags.common.config.as_deref())?;
    let game = args.game.build()?;
    let report = stability_report(&game)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["agent", "influence_bound", "neighbors", "c1"])?;
    for a in &report.agents {
        w.write_record([
            a.agent.to_string(),
            a.influence_bound.to_string(),
            a.neighbors.to_string(),
            a.c1.to_string(),
        ])?;
    }
    let summary = serde_json::json!({
        "sigma_i": report.sigma_i,
        "norm_inf": report.norm_inf,
        "norm_two": report.norm_two,
        "c1_max": report.c1_max(),
        "c2": report.c2,
        "c3": report.c3_applicable.then_some(report.c3),
        "min_uniform_threshold": report.min_uniform_threshold(),
        "block_norm_bound": verify_block_norm_bound(&game)?,
    });
    let mut out = Output::create(&flags.common.out)?;
    out.write("bounds.csv", &finish_csv(w)?)?;
    out.json("summary.json", &summary)?;
    out.finish("bounds", &args, &[])
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ReportArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
    #[command(flatten)]
    #[serde(flatten)]
    pub game: GameArgs,
    /// JSON file holding one probability vector per agent.
    #[arg(long)]
    pub strategy_file: Option<PathBuf>,
    #[arg(long = "t", value_delimiter = ',', default_value = "1.0")]
    pub t: Vec<f64>,
}

pub fn report(flags: ReportArgs) -> CliResult<PathBuf> {
    let args = resolve(&flags, flags.common.config.as_deref())?;
    let game = args.game.build()?;
    let path = args
        .strategy_file
        .as_ref()
        .ok_or_else(|| CliError::Validation("--strategy-file is required".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read strategy {}: {e}", path.display())))?;
    let x: JointStrategy = serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("strategy {}: {e}", path.display())))?;
    let rates = rates_for(&game, &args.t)?;
    let report = equilibrium_report(&game, &x, &rates)?;

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["agent", "T", "A_k", "eps_k"])?;
    for k in 0..game.num_agents() {
        w.write_record([
            k.to_string(),
            rates[k].to_string(),
            surprisal_gap(x.agent(k))?.to_string(),
            report.per_agent_epsilon[k].to_string(),
        ])?;
    }
    w.write_record(["max", "", "", &report.epsilon.to_string()])?;
    let summary = serde_json::json!({
        "qre_residual": report.qre_residual,
        "epsilon": report.epsilon,
        "per_agent_epsilon": report.per_agent_epsilon,
        "exploitability": report.exploitability,
        "perturbed_gradient_residual": perturbed_gradient_residual(&game, &x, &rates)?,
    });
    let mut out = Output::create(&flags.common.out)?;
    out.write("report.csv", &finish_csv(w)?)?;
    out.json("summary.json", &summary)?;
    out.finish("report", &args, &[])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Grid,
    Bisection,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SweepArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilyArgs,
    #[arg(long, default_value = "ring")]
    pub topology: TopologyKind,
    #[arg(long, value_delimiter = ',', default_value = "3,6,9,12,15")]
    pub agents: Vec<usize>,
    #[arg(long, value_enum, default_value_t = SearchMode::Grid)]
    pub search: SearchMode,
    #[arg(long, default_value_t = 0.05)]
    pub lo: f64,
    #[arg(long, default_value_t = 5.0)]
    pub hi: f64,
    /// Grid step, or the final bracket width for bisection.
    #[arg(long, default_value_t = 0.05)]
    pub resolution: f64,
    #[arg(long, default_value_t = 10)]
    pub num_inits: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub run: RunArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

pub fn sweep(flags: SweepArgs) -> CliResult<PathBuf> {
    let args = resolve(&flags, flags.common.config.as_deref())?;
    let spec = SweepSpec {
        game: args.family.family(),
        topology: args.topology,
        agents: args.agents.clone(),
        search: match args.search {
            SearchMode::Grid => TSearch::Grid {
                lo: args.lo,
                hi: args.hi,
                step: args.resolution,
            },
            SearchMode::Bisection => TSearch::Bisection {
                lo: args.lo,
                hi: args.hi,
                resolution: args.resolution,
            },
        },
        num_inits: args.num_inits,
        run: args.run.settings(),
        seed: args.seed,
    };
    let table = experiments::stability_sweep(&spec)?;
    let mut csv = Vec::new();
    table.write_csv(&mut csv)?;
    let seeds: Vec<u64> = spec.agents.iter().flat_map(|&n| spec.init_seeds(n)).collect();
    let mut out = Output::create(&flags.common.out)?;
    out.write("boundary.csv", &csv)?;
    out.json("summary.json", &table)?;
    out.finish("sweep", &args, &seeds)
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SpreadArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
    #[command(flatten)]
    #[serde(flatten)]
    pub game: GameArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub run: RunArgs,
    /// Uniform exploration rates to compare.
    #[arg(long = "t", value_delimiter = ',', default_value = "0.3,1.0,3.0")]
    pub t: Vec<f64>,
    #[arg(long, default_value_t = 3)]
    pub num_inits: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

pub fn spread(flags: SpreadArgs) -> CliResult<PathBuf> {
    let args = resolve(&flags, flags.common.config.as_deref())?;
    let game = args.game.build()?;
    let settings = args.run.settings();
    let rows = experiments::spread_report(&game, &args.t, args.num_inits, &settings, args.seed)?;
    let mut csv = Vec::new();
    experiments::write_spread_csv(&rows, &mut csv)?;
    let per_t: Vec<serde_json::Value> = args
        .t
        .iter()
        .map(|&t| {
            let widest = rows
                .iter()
                .filter(|r| r.t == t)
                .map(|r| r.range())
                .fold(0.0, f64::max);
            serde_json::json!({ "t": t, "max_range": widest, "stationary": widest < settings.tol })
        })
        .collect();
    let mut out = Output::create(&flags.common.out)?;
    out.write("spread.csv", &csv)?;
    out.json("summary.json", &per_t)?;
    out.finish("spread", &args, &seeds(args.seed, args.num_inits))
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct AnnealFlags {
    /// Rate decrement; defaults to 2% of the largest initial rate.
    #[arg(long)]
    pub delta_t: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    pub max_anneals: usize,
    /// Learning steps per anneal; defaults to max(500 N, 2500).
    #[arg(long)]
    pub anneal_horizon: Option<usize>,
    #[arg(long, default_value_t = 500)]
    pub anneal_window: usize,
    #[arg(long, default_value_t = 1e-5)]
    pub anneal_tol: f64,
    #[arg(long, default_value = "C2")]
    pub condition: Condition,
    #[arg(long, default_value_t = 1.05)]
    pub safety_margin: f64,
    #[arg(long, default_value_t = 0.1)]
    pub min_initial_rate: f64,
    #[arg(long, default_value = "sequential")]
    pub order: UpdateOrder,
}

impl AnnealFlags {
    fn params(&self, num_agents: usize) -> AnnealParams {
        let mut p = AnnealParams::for_agents(num_agents);
        p.delta_t = self.delta_t;
        p.max_anneals = self.max_anneals;
        if let Some(h) = self.anneal_horizon {
            p.horizon = h;
        }
        p.window = self.anneal_window;
        p.tol = self.anneal_tol;
        p.initial_condition = self.condition;
        p.safety_margin = self.safety_margin;
        p.min_initial_rate = self.min_initial_rate;
        p.order = self.order;
        p
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct AnnealArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
    #[command(flatten)]
    #[serde(flatten)]
    pub game: GameArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub anneal: AnnealFlags,
    #[arg(long, default_value_t = 0.1)]
    pub learning_rate: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

pub fn anneal(flags: AnnealArgs) -> CliResult<PathBuf> {
    let args = resolve(&flags, flags.common.config.as_deref())?;
    let game = args.game.build()?;
    let n = game.num_agents();
    let params = args.anneal.params(n);
    let history = annealer::anneal(&game, &params, &vec![args.learning_rate; n], args.seed)?;

    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["step".to_string(), "annealed_agent".to_string()];
    header.extend((0..n).map(|k| format!("T_{k}")));
    header.extend(
        ["epsilon", "exploitability", "converged", "qre_residual", "spread", "iterations"]
            .map(String::from),
    );
    w.write_record(&header)?;
    for s in &history.steps {
        let mut rec = vec![
            s.index.to_string(),
            s.annealed_agent.map_or_else(String::new, |a| a.to_string()),
        ];
        rec.extend(s.rates.as_slice().iter().map(f64::to_string));
        rec.extend([
            s.epsilon.to_string(),
            s.exploitability.to_string(),
            s.converged.to_string(),
            s.qre_residual.to_string(),
            s.spread.to_string(),
            s.iterations.to_string(),
        ]);
        w.write_record(&rec)?;
    }
    let result = history.result();
    let summary = serde_json::json!({
        "status": history.status,
        "delta_t": history.delta_t,
        "steps": history.steps.len(),
        "total_iterations": history.total_iterations(),
        "initial": { "epsilon": history.initial().epsilon, "exploitability": history.initial().exploitability },
        "result": {
            "index": result.index,
            "rates": result.rates,
            "qre": result.qre,
            "epsilon": result.epsilon,
            "exploitability": result.exploitability,
        },
    });
    let mut out = Output::create(&flags.common.out)?;
    out.write("history.csv", &finish_csv(w)?)?;
    out.json("summary.json", &summary)?;
    out.finish("anneal", &args, &[args.seed])
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct BatchArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
    #[arg(long, default_value_t = 50)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub master_seed: u64,
    #[arg(long, default_value_t = 15)]
    pub agents: usize,
    #[arg(long, default_value_t = 2)]
    pub actions: usize,
    #[arg(long, default_value = "ring")]
    pub topology: TopologyKind,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub low: f64,
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    pub high: f64,
    #[arg(long, default_value_t = 0.1)]
    pub learning_rate: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub anneal: AnnealFlags,
}

pub fn batch(flags: BatchArgs) -> CliResult<PathBuf> {
    let args = resolve(&flags, flags.common.config.as_deref())?;
    let spec = BatchSpec {
        num_agents: args.agents,
        actions_per_agent: args.actions,
        topology: args.topology,
        payoff_low: args.low,
        payoff_high: args.high,
        count: args.count,
        master_seed: args.master_seed,
        alpha: args.learning_rate,
        anneal: args.anneal.params(args.agents),
    };
    let rows = experiments::random_batch(&spec)?;
    let mut csv = Vec::new();
    experiments::write_batch_csv(&rows, &mut csv)?;
    let finished: Vec<_> = rows.iter().filter_map(|r| r.exploitability_decrease).collect();
    let summary = serde_json::json!({
        "games": rows.len(),
        "completed": finished.len(),
        "exploitability_decrease_nonnegative": finished.iter().filter(|d| **d >= 0.0).count(),
        "epsilon_decrease_nonnegative": rows.iter().filter_map(|r| r.epsilon_decrease).filter(|d| *d >= 0.0).count(),
    });
    let seeds: Vec<u64> = rows.iter().flat_map(|r| [r.game_seed, r.learner_seed]).collect();
    let mut out = Output::create(&flags.common.out)?;
    out.write("batch.csv", &csv)?;
    out.json("summary.json", &summary)?;
    out.finish("batch", &args, &seeds)
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct CurvesArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilyArgs,
    #[arg(long, value_delimiter = ',', default_value = "ring,star,full")]
    pub topologies: Vec<TopologyKind>,
    #[arg(long, value_delimiter = ',', default_value = "3,6,9,12,15")]
    pub agents: Vec<usize>,
}

pub fn curves(flags: CurvesArgs) -> CliResult<PathBuf> {
    let args = resolve(&flags, flags.common.config.as_deref())?;
    let rows = experiments::threshold_curves(&args.family.family(), &args.topologies, &args.agents)?;
    let mut csv = Vec::new();
    experiments::write_curves_csv(&rows, &mut csv)?;
    let mut out = Output::create(&flags.common.out)?;
    out.write("curves.csv", &csv)?;
    out.json("summary.json", &rows)?;
    out.finish("curves", &args, &[])
}
