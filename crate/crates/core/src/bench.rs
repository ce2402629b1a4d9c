//! Experiment runner: graph batches, per-algorithm trials, η summaries and
//! CSV output.

use std::fmt;
use std::fs::File;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{generate_random_graph, ConflictGraph, GraphGenConfig};
use crate::ising::{compile_problem, diagonal_table};
use crate::mwis::{
    brute_force_mwis, eta, greedy_mwis, is_independent, random_maximal_is, OptResult,
    BRUTE_FORCE_CAP,
};
use crate::optimizer::{adam_optimize, extract_schedule, feasible_fraction, OptimizationResult, OptimizerConfig};
use crate::simulator::{prepare_qaoa_state, sample_measurements, EnergyTable, MAX_QUBITS};

pub const RECORDS_HEADER: &str =
    "graph_id,algorithm,p,rho,seed,alg_weight,opt_weight,eta,feasible_sample_fraction,wall_time_ms";
pub const SUMMARY_HEADER: &str = "algorithm,p,trials,optimal_rate,mean_eta";
pub const CDF_HEADER: &str = "algorithm,p,eta,cdf";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Brute,
    Greedy,
    Qaos,
    Random,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Qaos, Algorithm::Greedy, Algorithm::Random, Algorithm::Brute];

    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Brute => "brute",
            Algorithm::Greedy => "greedy",
            Algorithm::Qaos => "qaos",
            Algorithm::Random => "random",
        }
    }

    fn tag(self) -> u64 {
        match self {
            Algorithm::Brute => 1,
            Algorithm::Greedy => 2,
            Algorithm::Qaos => 3,
            Algorithm::Random => 4,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.label())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" => Ok(Algorithm::Brute),
            "greedy" => Ok(Algorithm::Greedy),
            "qaos" => Ok(Algorithm::Qaos),
            "random" => Ok(Algorithm::Random),
            other => Err(Error::Config(format!("unknown algorithm {other:?}"))),
        }
    }
}

/// SplitMix64 finaliser.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic seed for one (graph, algorithm, p) trial.
pub fn derive_seed(master_seed: u64, graph_id: u64, tag: u64, p: u64) -> u64 {
    [graph_id, tag, p].into_iter().fold(mix64(master_seed), |acc, x| mix64(acc ^ mix64(x)))
}

fn graph_seed(master_seed: u64, graph_id: u64) -> u64 {
    derive_seed(master_seed, graph_id, 0, 0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub graph_count: usize,
    /// Per-graph seeds are derived from `master_seed`; `graph_gen.seed` is ignored.
    pub graph_gen: GraphGenConfig,
    pub algorithms: Vec<Algorithm>,
    pub p_values: Vec<usize>,
    pub rho: f64,
    pub shots: usize,
    /// `p` and `seed` are set per trial.
    pub optimizer: OptimizerConfig,
    pub master_seed: u64,
    /// When false the `wall_time_ms` column is written as 0 so reruns are
    /// byte-identical.
    pub record_wall_time: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            graph_count: 100,
            graph_gen: GraphGenConfig::default(),
            algorithms: Algorithm::ALL.to_vec(),
            p_values: vec![8, 9, 10],
            rho: 1.0,
            shots: 1000,
            optimizer: OptimizerConfig::default(),
            master_seed: 0,
            record_wall_time: false,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("malformed experiment config: {e}")))
    }

    pub fn validate(&self) -> Result<()> {
        if self.graph_count < 1 {
            return Err(Error::Config("graph_count must be at least 1".into()));
        }
        self.graph_gen.validate()?;
        if self.algorithms.is_empty() {
            return Err(Error::Config("no algorithms selected".into()));
        }
        if self.graph_gen.n > BRUTE_FORCE_CAP {
            return Err(Error::Config(format!(
                "n = {} exceeds the brute-force cap {BRUTE_FORCE_CAP} needed for eta",
                self.graph_gen.n
            )));
        }
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return Err(Error::Config(format!("rho must be a positive real, got {}", self.rho)));
        }
        if self.algorithms.contains(&Algorithm::Qaos) {
            if self.p_values.is_empty() {
                return Err(Error::Config("p_values must be non-empty when qaos is selected".into()));
            }
            if self.shots < 1 {
                return Err(Error::Config("shots must be at least 1".into()));
            }
            if self.graph_gen.n > MAX_QUBITS {
                return Err(Error::Config(format!(
                    "n = {} exceeds the simulator cap {MAX_QUBITS}",
                    self.graph_gen.n
                )));
            }
            for &p in &self.p_values {
                OptimizerConfig { p, ..self.optimizer.clone() }.validate()?;
            }
        }
        Ok(())
    }

    /// Every (algorithm, p) variant run on each graph, in output order.
    pub fn variants(&self) -> Vec<(Algorithm, usize)> {
        let mut out: Vec<(Algorithm, usize)> = Vec::new();
        for &alg in &self.algorithms {
            if alg == Algorithm::Qaos {
                out.extend(self.p_values.iter().map(|&p| (alg, p)));
            } else {
                out.push((alg, 0));
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn graph(&self, graph_id: usize) -> Result<ConflictGraph> {
        let cfg = GraphGenConfig { seed: graph_seed(self.master_seed, graph_id as u64), ..self.graph_gen.clone() };
        generate_random_graph(&cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub graph_id: usize,
    pub algorithm: Algorithm,
    pub p: usize,
    pub rho: f64,
    pub seed: u64,
    pub alg_weight: u64,
    pub opt_weight: u64,
    pub eta: f64,
    pub feasible_sample_fraction: Option<f64>,
    pub wall_time_ms: f64,
}

impl TrialRecord {
    pub fn is_optimal(&self) -> bool {
        self.alg_weight == self.opt_weight
    }
}

/// Everything a single QAOS solve produces.
#[derive(Debug, Clone)]
pub struct QaosOutcome {
    pub result: OptResult,
    pub feasible_sample_fraction: f64,
    pub optimization: OptimizationResult,
}

/// Compile, optimise, sample and extract. `seed` drives both the parameter
/// initialisation and the measurement draws.
pub fn solve_qaos(
    g: &ConflictGraph,
    p: usize,
    rho: f64,
    shots: usize,
    opt_cfg: &OptimizerConfig,
    seed: u64,
) -> Result<QaosOutcome> {
    if g.n() > MAX_QUBITS {
        return Err(Error::Capacity { what: "simulator", n: g.n(), cap: MAX_QUBITS });
    }
    let table = EnergyTable::new(diagonal_table(&compile_problem(g, rho)?)?)?;
    let cfg = OptimizerConfig { p, seed: mix64(seed ^ 1), ..opt_cfg.clone() };
    let optimization = adam_optimize(&table, &cfg)?;
    let state = prepare_qaoa_state(&table, &optimization.params_best)?;
    let counts = sample_measurements(&state, shots, mix64(seed ^ 2))?;
    Ok(QaosOutcome {
        result: extract_schedule(&counts, g)?,
        feasible_sample_fraction: feasible_fraction(&counts, g)?,
        optimization,
    })
}

/// Runs a classical algorithm once.
pub fn solve_classical(g: &ConflictGraph, alg: Algorithm, seed: u64) -> Result<OptResult> {
    match alg {
        Algorithm::Brute => brute_force_mwis(g),
        Algorithm::Greedy => Ok(greedy_mwis(g)),
        Algorithm::Random => Ok(random_maximal_is(g, seed)),
        Algorithm::Qaos => Err(Error::Config("qaos is not a classical algorithm".into())),
    }
}

fn make_record(
    g: &ConflictGraph,
    graph_id: usize,
    algorithm: Algorithm,
    p: usize,
    rho: f64,
    seed: u64,
    result: &OptResult,
    opt_weight: u64,
    feasible_sample_fraction: Option<f64>,
    wall_time_ms: f64,
) -> Result<TrialRecord> {
    if !is_independent(g, &result.schedule)? {
        return Err(Error::Consistency(format!(
            "{algorithm} returned non-independent schedule {} on graph {graph_id}",
            result.schedule
        )));
    }
    Ok(TrialRecord {
        graph_id,
        algorithm,
        p,
        rho,
        seed,
        alg_weight: result.weight,
        opt_weight,
        eta: eta(result.weight, opt_weight)?,
        feasible_sample_fraction,
        wall_time_ms,
    })
}

fn elapsed_ms(start: Instant, record: bool) -> f64 {
    if record {
        start.elapsed().as_secs_f64() * 1e3
    } else {
        0.0
    }
}

/// One QAOS trial scored against the brute-force optimum.
pub fn run_qaos_trial(
    g: &ConflictGraph,
    p: usize,
    rho: f64,
    shots: usize,
    opt_cfg: &OptimizerConfig,
    seed: u64,
) -> Result<TrialRecord> {
    let opt = brute_force_mwis(g)?;
    let outcome = solve_qaos(g, p, rho, shots, opt_cfg, seed)?;
    make_record(g, 0, Algorithm::Qaos, p, rho, seed, &outcome.result, opt.weight, Some(outcome.feasible_sample_fraction), 0.0)
}

fn run_trial(
    cfg: &ExperimentConfig,
    graph_id: usize,
    g: &ConflictGraph,
    opt_weight: u64,
    alg: Algorithm,
    p: usize,
) -> Result<TrialRecord> {
    let seed = derive_seed(cfg.master_seed, graph_id as u64, alg.tag(), p as u64);
    let start = Instant::now();
    let (result, fraction) = match alg {
        Algorithm::Qaos => {
            let o = solve_qaos(g, p, cfg.rho, cfg.shots, &cfg.optimizer, seed)?;
            (o.result, Some(o.feasible_sample_fraction))
        }
        _ => (solve_classical(g, alg, seed)?, None),
    };
    let ms = elapsed_ms(start, cfg.record_wall_time);
    make_record(g, graph_id, alg, p, cfg.rho, seed, &result, opt_weight, fraction, ms)
}

/// Runs every selected variant on `graph_count` seeded graphs. Records come
/// back ordered by (graph_id, algorithm, p) whatever the worker count.
pub fn run_benchmark(cfg: &ExperimentConfig, workers: usize) -> Result<Vec<TrialRecord>> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| {
        let graphs: Vec<(ConflictGraph, u64)> = (0..cfg.graph_count)
            .into_par_iter()
            .map(|id| {
                let g = cfg.graph(id)?;
                let opt = brute_force_mwis(&g)?.weight;
                Ok((g, opt))
            })
            .collect::<Result<_>>()?;
        let variants = cfg.variants();
        let jobs: Vec<(usize, Algorithm, usize)> = (0..cfg.graph_count)
            .flat_map(|id| variants.iter().map(move |&(a, p)| (id, a, p)))
            .collect();
        jobs.into_par_iter()
            .map(|(id, alg, p)| run_trial(cfg, id, &graphs[id].0, graphs[id].1, alg, p))
            .collect()
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariantSummary {
    pub algorithm: Algorithm,
    pub p: usize,
    pub trials: usize,
    pub optimal_rate: f64,
    pub mean_eta: f64,
    /// Empirical CDF as sorted `(eta, G(eta))` pairs, one per distinct η.
    pub cdf: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub variants: Vec<VariantSummary>,
}

impl Summary {
    pub fn get(&self, algorithm: Algorithm, p: usize) -> Option<&VariantSummary> {
        self.variants.iter().find(|v| v.algorithm == algorithm && v.p == p)
    }
}

/// Empirical CDF of a sample: distinct values ascending with the fraction of
/// samples at or below each.
pub fn empirical_cdf(values: &[f64]) -> Vec<(f64, f64)> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (i, &v) in sorted.iter().enumerate() {
        let g = (i + 1) as f64 / n;
        match out.last_mut() {
            Some(last) if last.0 == v => last.1 = g,
            _ => out.push((v, g)),
        }
    }
    out
}

/// Optimal rate, mean η and CDF per (algorithm, p).
pub fn summarize(records: &[TrialRecord]) -> Result<Summary> {
    if records.is_empty() {
        return Err(Error::Domain("cannot summarise an empty record set".into()));
    }
    let mut keys: Vec<(Algorithm, usize)> = records.iter().map(|r| (r.algorithm, r.p)).collect();
    keys.sort_unstable();
    keys.dedup();
    let variants = keys
        .into_iter()
        .map(|(algorithm, p)| {
            let group: Vec<&TrialRecord> =
                records.iter().filter(|r| r.algorithm == algorithm && r.p == p).collect();
            let trials = group.len();
            let etas: Vec<f64> = group.iter().map(|r| r.eta).collect();
            VariantSummary {
                algorithm,
                p,
                trials,
                optimal_rate: group.iter().filter(|r| r.is_optimal()).count() as f64 / trials as f64,
                mean_eta: etas.iter().sum::<f64>() / trials as f64,
                cdf: empirical_cdf(&etas),
            }
        })
        .collect();
    Ok(Summary { variants })
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |source| Error::Csv { path: path.display().to_string(), source }
}

fn create(path: &Path) -> Result<csv::Writer<File>> {
    let file = File::create(path).map_err(|source| Error::Io { path: path.display().to_string(), source })?;
    Ok(csv::Writer::from_writer(file))
}

pub fn write_records(path: &Path, records: &[TrialRecord]) -> Result<()> {
    let mut w = create(path)?;
    if records.is_empty() {
        w.write_record(RECORDS_HEADER.split(',')).map_err(csv_err(path))?;
    }
    for r in records {
        w.serialize(r).map_err(csv_err(path))?;
    }
    w.flush().map_err(|source| Error::Io { path: path.display().to_string(), source })
}

pub fn read_records(path: &Path) -> Result<Vec<TrialRecord>> {
    let mut rdr = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let header: Vec<String> = rdr.headers().map_err(csv_err(path))?.iter().map(str::to_owned).collect();
    if header.join(",") != RECORDS_HEADER {
        return Err(Error::Parse(format!("{}: unexpected records header {:?}", path.display(), header.join(","))));
    }
    rdr.deserialize().collect::<std::result::Result<_, _>>().map_err(csv_err(path))
}

pub fn write_summary(path: &Path, summary: &Summary) -> Result<()> {
    let mut w = create(path)?;
    let err = csv_err(path);
    w.write_record(SUMMARY_HEADER.split(',')).map_err(&err)?;
    for v in &summary.variants {
        w.write_record([
            v.algorithm.label().to_string(),
            v.p.to_string(),
            v.trials.to_string(),
            v.optimal_rate.to_string(),
            v.mean_eta.to_string(),
        ])
        .map_err(&err)?;
    }
    w.flush().map_err(|source| Error::Io { path: path.display().to_string(), source })
}

/// CDF points, grouped by variant, ascending in η within each group.
pub fn write_cdf(path: &Path, summary: &Summary) -> Result<()> {
    let mut w = create(path)?;
    let err = csv_err(path);
    w.write_record(CDF_HEADER.split(',')).map_err(&err)?;
    for v in &summary.variants {
        for &(e, g) in &v.cdf {
            w.write_record([v.algorithm.label().to_string(), v.p.to_string(), e.to_string(), g.to_string()])
                .map_err(&err)?;
        }
    }
    w.flush().map_err(|source| Error::Io { path: path.display().to_string(), source })
}

/// Writes records, the summary and, when given, the CDF points.
pub fn emit_results(
    records: &[TrialRecord],
    summary: &Summary,
    records_path: &Path,
    summary_path: &Path,
    cdf_path: Option<&Path>,
) -> Result<()> {
    write_records(records_path, records)?;
    write_summary(summary_path, summary)?;
    if let Some(p) = cdf_path {
        write_cdf(p, summary)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mwis::LinkSchedule;

    fn record(alg: Algorithm, p: usize, a: u64, b: u64) -> TrialRecord {
        TrialRecord {
            graph_id: 0,
            algorithm: alg,
            p,
            rho: 1.0,
            seed: 0,
            alg_weight: a,
            opt_weight: b,
            eta: eta(a, b).unwrap(),
            feasible_sample_fraction: None,
            wall_time_ms: 0.0,
        }
    }

    #[test]
    fn seeds_depend_on_every_component() {
        let base = derive_seed(1, 2, 3, 4);
        assert_eq!(base, derive_seed(1, 2, 3, 4));
        for other in [derive_seed(0, 2, 3, 4), derive_seed(1, 0, 3, 4), derive_seed(1, 2, 0, 4), derive_seed(1, 2, 3, 0)] {
            assert_ne!(base, other);
        }
    }

    #[test]
    fn summary_all_optimal() {
        let recs = vec![record(Algorithm::Brute, 0, 5, 5), record(Algorithm::Brute, 0, 7, 7)];
        let s = summarize(&recs).unwrap();
        let v = s.get(Algorithm::Brute, 0).unwrap();
        assert_eq!((v.trials, v.optimal_rate, v.mean_eta), (2, 1.0, 1.0));
        assert_eq!(v.cdf, vec![(1.0, 1.0)]);
    }

    #[test]
    fn summary_two_point() {
        let recs = vec![record(Algorithm::Greedy, 0, 1, 2), record(Algorithm::Greedy, 0, 4, 4)];
        let v = summarize(&recs).unwrap().variants.remove(0);
        assert_eq!(v.optimal_rate, 0.5);
        assert_eq!(v.cdf, vec![(0.5, 0.5), (1.0, 1.0)]);
        assert!(summarize(&[]).is_err());
    }

    #[test]
    fn cdf_is_nondecreasing_and_ends_at_one() {
        let c = empirical_cdf(&[0.9, 0.3, 1.0, 0.3, 0.6, 1.0, 0.9]);
        assert!(c.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 <= w[1].1));
        assert_eq!(c.last().unwrap(), &(1.0, 1.0));
        assert_eq!(c[0], (0.3, 2.0 / 7.0));
    }

    #[test]
    fn variants_are_ordered() {
        let cfg = ExperimentConfig {
            algorithms: vec![Algorithm::Random, Algorithm::Qaos, Algorithm::Greedy],
            p_values: vec![10, 8],
            ..Default::default()
        };
        assert_eq!(
            cfg.variants(),
            vec![(Algorithm::Greedy, 0), (Algorithm::Qaos, 8), (Algorithm::Qaos, 10), (Algorithm::Random, 0)]
        );
    }

    #[test]
    fn config_validation() {
        assert!(ExperimentConfig::default().validate().is_ok());
        let bad = [
            ExperimentConfig { graph_count: 0, ..Default::default() },
            ExperimentConfig { p_values: vec![], ..Default::default() },
            ExperimentConfig { shots: 0, ..Default::default() },
            ExperimentConfig { rho: 0.0, ..Default::default() },
            ExperimentConfig { algorithms: vec![], ..Default::default() },
            ExperimentConfig { p_values: vec![0], ..Default::default() },
        ];
        for cfg in bad {
            assert!(matches!(cfg.validate(), Err(Error::Config(_))), "{cfg:?}");
        }
        // Classical-only runs do not need p values.
        let classical = ExperimentConfig { algorithms: vec![Algorithm::Greedy], p_values: vec![], ..Default::default() };
        assert!(classical.validate().is_ok());
    }

    #[test]
    fn config_json_defaults_and_unknown_fields() {
        let cfg = ExperimentConfig::from_json(r#"{"graph_count": 3, "algorithms": ["greedy", "brute"]}"#).unwrap();
        assert_eq!(cfg.graph_count, 3);
        assert_eq!(cfg.shots, 1000);
        assert_eq!(cfg.p_values, vec![8, 9, 10]);
        assert!(ExperimentConfig::from_json(r#"{"graph_cuont": 3}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"algorithms": ["annealing"]}"#).is_err());
    }

    #[test]
    fn algorithm_labels_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.label().parse::<Algorithm>().unwrap(), a);
        }
        assert!("bogus".parse::<Algorithm>().is_err());
    }

    #[test]
    fn solve_classical_rejects_qaos() {
        let g = ConflictGraph::new(vec![1], []).unwrap();
        assert!(solve_classical(&g, Algorithm::Qaos, 0).is_err());
        assert_eq!(solve_classical(&g, Algorithm::Brute, 0).unwrap().weight, 1);
    }

    #[test]
    fn record_creation_rejects_infeasible_schedule() {
        let g = ConflictGraph::new(vec![1, 2], [(0, 1)]).unwrap();
        let bad = OptResult { schedule: "11".parse::<LinkSchedule>().unwrap(), weight: 3 };
        assert!(matches!(
            make_record(&g, 0, Algorithm::Greedy, 0, 1.0, 0, &bad, 2, None, 0.0),
            Err(Error::Consistency(_))
        ));
    }
}
