//! Batch experiments over landmark sequences.
//!
//! Every protocol expands into independent frame-pair jobs tagged with
//! `(cell, repetition, pair)`. Jobs run on a worker pool and are reduced in
//! tag order, so reports do not depend on scheduling.

pub mod config;
pub mod report;

use std::time::Instant;

use rand::seq::index::sample;
use rayon::prelude::*;

use crate::assignment::{
    build_graph_pair, match_complexes, match_error, match_error_counts, shared_id_truth, ErrorCounts, MatchConfig,
    PreparedComplex,
};
use crate::error::{Error, Result};
use crate::geometry::{apply_about_centroid, load_landmarks, occlude, AffineTransform, Frame, LandmarkFormat, LandmarkSequence};
use crate::math::mean_var;
use crate::noise::{perturb, NoiseModel, NoiseSpec};
use crate::rng;
use crate::theory::{run_validator, ValidatorRow, VALIDATORS};

pub use config::{Aggregation, ExperimentConfig, Protocol, SyntheticSpec, TransformSpec};
pub use report::{emit_plot_data, ReportRow, ReportTable, REPORT_HEADER};

/// Environment variable capping the worker count (unset or 0: one worker
/// per core).
pub const THREADS_ENV: &str = "CLIQUE_MATCH_THREADS";

pub fn worker_pool() -> Result<rayon::ThreadPool> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::config(format!("{THREADS_ENV} must be a non-negative integer, got '{v}'")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::config(e.to_string()))
}

/// Random points in a 640×480 box, then frame `f` is the base set rotated by
/// `f · rotation_step` degrees about its centroid.
pub fn synthetic_sequence(spec: &SyntheticSpec, seed: u64) -> Result<LandmarkSequence> {
    use rand::Rng as _;
    let mut r = rng::seeded(seed);
    let coords: Vec<[f64; 2]> = (0..spec.points)
        .map(|_| [r.random_range(0.0..640.0), r.random_range(0.0..480.0)])
        .collect();
    let base = Frame::from_coords(&coords)?;
    let frames = (0..spec.frames)
        .map(|f| apply_about_centroid(&base, &AffineTransform::rotation(f as f64 * spec.rotation_step)))
        .collect();
    LandmarkSequence::new("synthetic", frames)
}

/// Modification applied to the second frame (or its graph) of a pair.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Perturbation {
    None,
    Transform(TransformSpec),
    Occlude(usize),
    Noise(NoiseModel, f64, f64),
}

#[derive(Debug, Clone)]
struct Job {
    cell: usize,
    rep: usize,
    frame_a: usize,
    frame_b: usize,
    change: Perturbation,
    matcher: MatchConfig,
    seed: u64,
}

#[derive(Debug, Clone, Copy)]
struct Outcome {
    cell: usize,
    rep: usize,
    counts: ErrorCounts,
    pct: Option<f64>,
    secs: f64,
}

// Stream tags so selection, occlusion and noise draw from unrelated seeds.
const TAG_SEQUENCE: u64 = 0x5e9;
const TAG_FRAMES: u64 = 0xf4a;
const TAG_OCCLUDE: u64 = 3;
const TAG_NOISE: u64 = 4;

struct Plan<'a> {
    cfg: &'a ExperimentConfig,
    cells: Vec<String>,
    jobs: Vec<Job>,
}

impl<'a> Plan<'a> {
    fn new(cfg: &'a ExperimentConfig) -> Self {
        Plan {
            cfg,
            cells: Vec::new(),
            jobs: Vec::new(),
        }
    }

    fn cell(&mut self, label: String) -> usize {
        self.cells.push(label);
        self.cells.len() - 1
    }

    /// The job seed depends only on (repetition, pair), so every cell sees
    /// the same random graphs for the same pair.
    fn push(&mut self, cell: usize, rep: usize, pair: usize, a: usize, b: usize, change: Perturbation, matcher: &MatchConfig) {
        let seed = rng::derive_seed(rng::derive_seed(self.cfg.seed, rep as u64), pair as u64);
        let mut m = matcher.clone();
        m.seed_a = rng::derive_seed(seed, 1);
        m.seed_b = rng::derive_seed(seed, 2);
        self.jobs.push(Job {
            cell,
            rep,
            frame_a: a,
            frame_b: b,
            change,
            matcher: m,
            seed,
        });
    }
}

/// Picks `round(fraction · (N − 1))` of frames `1..N` for one repetition.
fn chosen_frames(cfg: &ExperimentConfig, n_frames: usize, fraction: f64, rep: usize) -> Vec<bool> {
    let mut chosen = vec![false; n_frames];
    if n_frames < 2 {
        return chosen;
    }
    let count = (fraction * (n_frames - 1) as f64).round() as usize;
    let mut r = rng::seeded(rng::derive_seed(cfg.seed ^ TAG_FRAMES, rep as u64));
    for i in sample(&mut r, n_frames - 1, count.min(n_frames - 1)).iter() {
        chosen[i + 1] = true;
    }
    chosen
}

fn sequence_for(cfg: &ExperimentConfig, rep: usize) -> Result<LandmarkSequence> {
    match &cfg.dataset {
        Some(path) => load_landmarks(path, LandmarkFormat::Csv),
        None => synthetic_sequence(&cfg.synthetic, rng::derive_seed(cfg.seed ^ TAG_SEQUENCE, rep as u64)),
    }
}

/// Runs the protocol named in the config.
pub fn run_protocol(cfg: &ExperimentConfig) -> Result<ReportTable> {
    cfg.validate()?;
    let sequences: Vec<LandmarkSequence> = if cfg.dataset.is_some() {
        // one load shared by every repetition
        vec![sequence_for(cfg, 0)?]
    } else {
        (0..cfg.repetitions).map(|r| sequence_for(cfg, r)).collect::<Result<_>>()?
    };
    let n_frames = sequences[0].frame_count();
    let n_points = sequences[0].points_per_frame();
    if n_frames < 2 && cfg.protocol != Protocol::FrameSeparation {
        return Err(Error::config(format!("protocol {} needs at least two frames", cfg.protocol)));
    }

    let mut plan = Plan::new(cfg);
    let base = &cfg.matcher;
    match cfg.protocol {
        Protocol::Transform => {
            for t in &cfg.transforms {
                t.build()?;
                for &f in &cfg.impurity {
                    let cell = plan.cell(format!("{t}|impurity={f}"));
                    for rep in 0..cfg.repetitions {
                        let chosen = chosen_frames(cfg, n_frames, f, rep);
                        for j in 1..n_frames {
                            let change = if chosen[j] { Perturbation::Transform(*t) } else { Perturbation::None };
                            plan.push(cell, rep, j, 0, j, change, base);
                        }
                    }
                }
            }
        }
        Protocol::Occlusion => {
            for &m in &cfg.missing {
                if m >= n_points {
                    return Err(Error::config(format!("cannot remove {m} of {n_points} points")));
                }
                let cell = plan.cell(format!("missing={m}"));
                for rep in 0..cfg.repetitions {
                    let chosen = chosen_frames(cfg, n_frames, cfg.occluded_fraction, rep);
                    for j in 1..n_frames {
                        let change = if chosen[j] { Perturbation::Occlude(m) } else { Perturbation::None };
                        plan.push(cell, rep, j, 0, j, change, base);
                    }
                }
            }
        }
        Protocol::FrameSeparation => {
            for &g in &cfg.gaps {
                let cell = plan.cell(format!("gap={g}"));
                for rep in 0..cfg.repetitions {
                    for i in 0..n_frames.saturating_sub(g) {
                        plan.push(cell, rep, i, i, i + g, Perturbation::None, base);
                    }
                }
            }
        }
        Protocol::Noise => {
            for &model in &cfg.noise_models {
                for &q in &cfg.noise_q {
                    for &g in &cfg.gaps {
                        let name = if model == NoiseModel::I { "I" } else { "II" };
                        let cell = plan.cell(format!("model={name}|q={q}|gap={g}"));
                        let r = if model == NoiseModel::I { q } else { cfg.noise_r };
                        for rep in 0..cfg.repetitions {
                            for i in 0..n_frames.saturating_sub(g) {
                                plan.push(cell, rep, i, i, i + g, Perturbation::Noise(model, q, r), base);
                            }
                        }
                    }
                }
            }
        }
        Protocol::KnnSweep => {
            for &p in &cfg.p_grid {
                for &k in &cfg.k_grid {
                    let cell = plan.cell(format!("p={p}|k={k}"));
                    let m = MatchConfig {
                        p,
                        k_nn: k,
                        ..base.clone()
                    };
                    for rep in 0..cfg.repetitions {
                        for (pair, &g) in cfg.gaps.iter().enumerate() {
                            if g < n_frames {
                                plan.push(cell, rep, pair, 0, g, Perturbation::None, &m);
                            }
                        }
                    }
                }
            }
        }
        Protocol::PairwiseAll => {
            let cell = plan.cell("all".to_string());
            for rep in 0..cfg.repetitions {
                let mut pair = 0;
                for i in 0..n_frames {
                    for j in (i + 1)..n_frames {
                        plan.push(cell, rep, pair, i, j, Perturbation::None, base);
                        pair += 1;
                    }
                }
            }
        }
    }

    let pool = worker_pool()?;
    let outcomes = pool.install(|| {
        plan.jobs
            .par_iter()
            .map(|job| {
                let seq = if sequences.len() == 1 { &sequences[0] } else { &sequences[job.rep] };
                run_job(seq, job)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(aggregate(cfg, &plan.cells, &outcomes))
}

fn run_job(seq: &LandmarkSequence, job: &Job) -> Result<Outcome> {
    let start = Instant::now();
    let a = seq.frames[job.frame_a].clone();
    let mut b = seq.frames[job.frame_b].clone();
    match job.change {
        Perturbation::Transform(t) => b = apply_about_centroid(&b, &t.build()?),
        Perturbation::Occlude(m) => b = occlude(&b, m, rng::derive_seed(job.seed, TAG_OCCLUDE))?.0,
        Perturbation::None | Perturbation::Noise(..) => {}
    }
    let m = &job.matcher;
    let (ga, mut gb) = build_graph_pair(&a, &b, m)?;
    if let Perturbation::Noise(model, q, r) = job.change {
        gb = perturb(&gb, &NoiseSpec::new(model, q, r, rng::derive_seed(job.seed, TAG_NOISE))?);
    }
    let truth = shared_id_truth(&a, &b);
    let rule = m.neighborhood_rule();
    let pa = PreparedComplex::new(a, ga, m.h, rule)?;
    let pb = PreparedComplex::new(b, gb, m.h, rule)?;
    let result = match_complexes(&pa, &pb, m)?;
    Ok(Outcome {
        cell: job.cell,
        rep: job.rep,
        counts: match_error_counts(&result, &truth, m.error_mode),
        pct: match_error(&result, &truth, m.error_mode),
        secs: start.elapsed().as_secs_f64(),
    })
}

fn aggregate(cfg: &ExperimentConfig, cells: &[String], outcomes: &[Outcome]) -> ReportTable {
    let rows = cells
        .iter()
        .enumerate()
        .map(|(c, label)| {
            let mine: Vec<&Outcome> = outcomes.iter().filter(|o| o.cell == c).collect();
            let per_rep: Vec<f64> = (0..cfg.repetitions)
                .filter_map(|rep| {
                    let jobs: Vec<&&Outcome> = mine.iter().filter(|o| o.rep == rep).collect();
                    match cfg.aggregation {
                        Aggregation::PerPair => {
                            let v: Vec<f64> = jobs.iter().filter_map(|o| o.pct).collect();
                            (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
                        }
                        Aggregation::Pooled => {
                            let wrong: usize = jobs.iter().map(|o| o.counts.wrong).sum();
                            let scored: usize = jobs.iter().map(|o| o.counts.scored).sum();
                            (scored > 0).then(|| 100.0 * wrong as f64 / scored as f64)
                        }
                    }
                })
                .collect();
            let (mean, var) = mean_var(&per_rep);
            let runtime = (cfg.timing && !mine.is_empty())
                .then(|| mine.iter().map(|o| o.secs).sum::<f64>() / mine.len() as f64);
            ReportRow {
                protocol: cfg.protocol.name().to_string(),
                cell: label.clone(),
                mean_error: (!per_rep.is_empty()).then_some(mean),
                std_error: (!per_rep.is_empty()).then(|| var.sqrt()),
                runtime,
            }
        })
        .collect();
    ReportTable { rows }
}

/// Runs the named validators (`"all"` expands to every one) and returns
/// their rows in request order.
pub fn run_theory_suite(selection: &[&str], seed: u64) -> Result<Vec<ValidatorRow>> {
    let names: Vec<&str> = if selection.contains(&"all") {
        VALIDATORS.to_vec()
    } else {
        selection.to_vec()
    };
    let pool = worker_pool()?;
    let mut rows = Vec::new();
    for name in names {
        rows.extend(pool.install(|| run_validator(name, seed))?);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(protocol: Protocol) -> ExperimentConfig {
        ExperimentConfig {
            protocol,
            repetitions: 2,
            synthetic: SyntheticSpec {
                frames: 6,
                points: 20,
                rotation_step: 5.0,
            },
            gaps: vec![0, 2],
            missing: vec![0, 4],
            noise_q: vec![0.0, 1.0],
            k_grid: vec![3, 5],
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn row_counts_per_protocol() {
        let expect = [
            (Protocol::Transform, 2),
            (Protocol::Occlusion, 2),
            (Protocol::FrameSeparation, 2),
            (Protocol::Noise, 2 * 2 * 2),
            (Protocol::KnnSweep, 2),
            (Protocol::PairwiseAll, 1),
        ];
        for (p, rows) in expect {
            let t = run_protocol(&small(p)).unwrap();
            assert_eq!(t.rows.len(), rows, "{p}");
            for r in &t.rows {
                let e = r.mean_error.unwrap();
                assert!((0.0..=100.0).contains(&e));
                assert!(r.runtime.is_none());
            }
        }
    }

    #[test]
    fn identity_with_shared_seed_is_exact() {
        let mut cfg = small(Protocol::Transform);
        cfg.transforms = vec![TransformSpec::Identity];
        cfg.impurity = vec![0.0];
        cfg.matcher.share_seed = true;
        let t = run_protocol(&cfg).unwrap();
        assert_eq!(t.rows[0].mean_error, Some(0.0));
    }

    #[test]
    fn gap_zero_is_self_match() {
        let mut cfg = small(Protocol::FrameSeparation);
        cfg.matcher.share_seed = true;
        let t = run_protocol(&cfg).unwrap();
        assert_eq!(t.rows[0].mean_error, Some(0.0));
    }

    #[test]
    fn too_many_missing_is_config_error() {
        let mut cfg = small(Protocol::Occlusion);
        cfg.missing = vec![20];
        assert!(matches!(run_protocol(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn timing_fills_runtime() {
        let mut cfg = small(Protocol::PairwiseAll);
        cfg.timing = true;
        let t = run_protocol(&cfg).unwrap();
        assert!(t.rows[0].runtime.unwrap() >= 0.0);
    }

    #[test]
    fn theory_suite_selection() {
        assert!(run_theory_suite(&[], 1).unwrap().is_empty());
        let rows = run_theory_suite(&["gap_bound", "finke"], 1).unwrap();
        assert_eq!(rows.iter().filter(|r| r.validator == "gap_bound").count(), 2);
        assert_eq!(rows, run_theory_suite(&["gap_bound", "finke"], 1).unwrap());
    }
}
