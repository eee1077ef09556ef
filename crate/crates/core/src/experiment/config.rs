//! Flat `key = value` experiment configuration.
//!
//! One setting per line, `#` starts a comment, lists are comma separated.
//! Unknown keys are rejected so typos do not silently fall back to defaults.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::assignment::{ErrorMode, MatchConfig};
use crate::descriptors::{Overlap, PeerScope};
use crate::error::{Error, Result};
use crate::geometry::{AffineTransform, Axis};
use crate::noise::NoiseModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Protocol {
    Transform,
    Occlusion,
    FrameSeparation,
    Noise,
    KnnSweep,
    PairwiseAll,
}

impl Protocol {
    pub const ALL: [Protocol; 6] = [
        Protocol::Transform,
        Protocol::Occlusion,
        Protocol::FrameSeparation,
        Protocol::Noise,
        Protocol::KnnSweep,
        Protocol::PairwiseAll,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Protocol::Transform => "transform",
            Protocol::Occlusion => "occlusion",
            Protocol::FrameSeparation => "frame_separation",
            Protocol::Noise => "noise",
            Protocol::KnnSweep => "knn_sweep",
            Protocol::PairwiseAll => "pairwise_all",
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Protocol::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::config(format!("unknown protocol '{s}'")))
    }
}

/// A transform family member, written `kind:param` in config files:
/// `identity`, `rotation:20`, `reflection:y`, `scale:0.5`, `shear:0.5`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TransformSpec {
    Identity,
    Rotation(f64),
    Reflection(Axis),
    Scale(f64),
    Shear(f64),
}

impl TransformSpec {
    pub fn build(&self) -> Result<AffineTransform> {
        Ok(match *self {
            TransformSpec::Identity => AffineTransform::identity(),
            TransformSpec::Rotation(d) => AffineTransform::rotation(d),
            TransformSpec::Reflection(a) => AffineTransform::reflection(a),
            TransformSpec::Scale(s) => AffineTransform::scale(s, s)?,
            TransformSpec::Shear(f) => AffineTransform::shear(f, Axis::X),
        })
    }
}

impl fmt::Display for TransformSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransformSpec::Identity => write!(f, "identity"),
            TransformSpec::Rotation(d) => write!(f, "rotation:{d}"),
            TransformSpec::Reflection(Axis::X) => write!(f, "reflection:x"),
            TransformSpec::Reflection(Axis::Y) => write!(f, "reflection:y"),
            TransformSpec::Scale(s) => write!(f, "scale:{s}"),
            TransformSpec::Shear(s) => write!(f, "shear:{s}"),
        }
    }
}

impl FromStr for TransformSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k.trim(), Some(a.trim())),
            None => (s.trim(), None),
        };
        let num = |what: &str| -> Result<f64> {
            let a = arg.ok_or_else(|| Error::config(format!("transform '{s}' needs a {what}")))?;
            parse_num(a, "transform parameter")
        };
        match kind {
            "identity" => Ok(TransformSpec::Identity),
            "rotation" => Ok(TransformSpec::Rotation(num("angle in degrees")?)),
            "reflection" => match arg.unwrap_or("y") {
                "x" => Ok(TransformSpec::Reflection(Axis::X)),
                "y" => Ok(TransformSpec::Reflection(Axis::Y)),
                other => Err(Error::config(format!("reflection axis must be x or y, got '{other}'"))),
            },
            "scale" => {
                let v = num("factor")?;
                if v == 0.0 {
                    return Err(Error::config("scale factor must be non-zero"));
                }
                Ok(TransformSpec::Scale(v))
            }
            "shear" => Ok(TransformSpec::Shear(num("factor")?)),
            other => Err(Error::config(format!("unknown transform '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Aggregation {
    /// Mean of per-pair error percentages.
    PerPair,
    /// Total wrong over total scored points.
    Pooled,
}

/// Synthetic sequence: random points rotated rigidly by a fixed step per
/// frame about their centroid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticSpec {
    pub frames: usize,
    pub points: usize,
    pub rotation_step: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub protocol: Protocol,
    pub dataset: Option<PathBuf>,
    pub synthetic: SyntheticSpec,
    pub matcher: MatchConfig,
    pub repetitions: usize,
    pub seed: u64,
    pub transforms: Vec<TransformSpec>,
    pub impurity: Vec<f64>,
    pub missing: Vec<usize>,
    /// Fraction of frames 2..N that lose points in the occlusion protocol.
    pub occluded_fraction: f64,
    pub gaps: Vec<usize>,
    pub noise_models: Vec<NoiseModel>,
    pub noise_q: Vec<f64>,
    pub noise_r: f64,
    pub p_grid: Vec<f64>,
    pub k_grid: Vec<usize>,
    pub aggregation: Aggregation,
    /// Record wall-clock runtimes. Off by default so reports stay
    /// byte-reproducible.
    pub timing: bool,
    /// Fail (exit code 1 from the CLI) when any cell's mean error exceeds
    /// this percentage.
    pub max_error: Option<f64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            protocol: Protocol::Transform,
            dataset: None,
            synthetic: SyntheticSpec {
                frames: 20,
                points: 30,
                rotation_step: 3.0,
            },
            // keyed coins make a shared seed give both frames the same graph
            // wherever their k-NN candidates agree
            matcher: MatchConfig {
                share_seed: true,
                ..MatchConfig::default()
            },
            repetitions: 5,
            seed: 0,
            transforms: vec![TransformSpec::Rotation(20.0)],
            impurity: vec![0.2, 0.4],
            missing: vec![0, 2, 4, 6, 8, 10],
            occluded_fraction: 0.4,
            gaps: vec![1, 5, 10],
            noise_models: vec![NoiseModel::I, NoiseModel::II],
            noise_q: vec![0.0, 0.05, 0.1],
            noise_r: 0.05,
            p_grid: vec![0.6],
            k_grid: vec![3, 5, 7, 9],
            aggregation: Aggregation::PerPair,
            timing: false,
            max_error: None,
        }
    }
}

fn parse_num<T: FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::config(format!("bad {what} '{}'", s.trim())))
}

fn parse_list<T: FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',').filter(|x| !x.trim().is_empty()).map(|x| parse_num(x, what)).collect()
}

fn parse_bool(s: &str, key: &str) -> Result<bool> {
    match s.trim() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        other => Err(Error::config(format!("{key} expects true or false, got '{other}'"))),
    }
}

fn parse_probability(s: &str, key: &str) -> Result<f64> {
    let v: f64 = parse_num(s, key)?;
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::config(format!("{key} = {v} outside [0, 1]")));
    }
    Ok(v)
}

fn parse_noise_model(s: &str) -> Result<NoiseModel> {
    match s.trim() {
        "I" | "1" => Ok(NoiseModel::I),
        "II" | "2" => Ok(NoiseModel::II),
        other => Err(Error::config(format!("noise model must be I or II, got '{other}'"))),
    }
}

impl MatchConfig {
    /// Applies one matcher key. Returns false when the key is not a matcher
    /// setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<bool> {
        match key {
            "h" => self.h = parse_num(value, key)?,
            "l" => {
                self.overlap = match value.trim() {
                    "k" | "dim" => Overlap::SameAsDim,
                    v => {
                        let l: usize = parse_num(v, key)?;
                        if l == 0 {
                            return Err(Error::config("l must be at least 1"));
                        }
                        Overlap::Fixed(l)
                    }
                }
            }
            "peers" => {
                self.peers = match value.trim() {
                    "all" => PeerScope::AllDims,
                    "top" => PeerScope::TopOnly,
                    "none" => PeerScope::None,
                    other => return Err(Error::config(format!("peers must be all, top or none, got '{other}'"))),
                }
            }
            "p" => self.p = parse_probability(value, key)?,
            "k_nn" => {
                self.k_nn = parse_num(value, key)?;
                if self.k_nn == 0 {
                    return Err(Error::config("k_nn must be at least 1"));
                }
            }
            "tau" => {
                let t: f64 = parse_num(value, key)?;
                if t.is_nan() || t < 0.0 {
                    return Err(Error::config(format!("tau = {t} must be non-negative")));
                }
                self.tau = t;
            }
            "seed_a" => self.seed_a = parse_num(value, key)?,
            "seed_b" => self.seed_b = parse_num(value, key)?,
            "share_seed" => self.share_seed = parse_bool(value, key)?,
            "share_graph" => self.share_graph = parse_bool(value, key)?,
            "vote" => self.vote = parse_bool(value, key)?,
            "error_mode" => {
                self.error_mode = match value.trim() {
                    "strict" => ErrorMode::Strict,
                    "lenient" => ErrorMode::Lenient,
                    other => return Err(Error::config(format!("error_mode must be strict or lenient, got '{other}'"))),
                }
            }
            _ => return Ok(false),
        }
        Ok(true)
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::config(format!("line {}: expected key = value", i + 1)))?;
            cfg.set(key.trim(), value.trim())
                .map_err(|e| Error::config(format!("line {}: {}", i + 1, strip_prefix(&e))))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if self.matcher.set(key, value)? {
            return Ok(());
        }
        match key {
            "protocol" => self.protocol = value.parse()?,
            "dataset" => self.dataset = Some(PathBuf::from(value)),
            "frames" => self.synthetic.frames = parse_num(value, key)?,
            "points" => self.synthetic.points = parse_num(value, key)?,
            "rotation_step" => self.synthetic.rotation_step = parse_num(value, key)?,
            "repetitions" => self.repetitions = parse_num(value, key)?,
            "seed" => self.seed = parse_num(value, key)?,
            "transforms" => {
                self.transforms = value
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(str::parse)
                    .collect::<Result<_>>()?
            }
            "impurity" => {
                self.impurity = value
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| parse_probability(s, key))
                    .collect::<Result<_>>()?
            }
            "missing" => self.missing = parse_list(value, key)?,
            "occluded_fraction" => self.occluded_fraction = parse_probability(value, key)?,
            "gaps" => self.gaps = parse_list(value, key)?,
            "noise_models" => {
                self.noise_models = value
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(parse_noise_model)
                    .collect::<Result<_>>()?
            }
            "noise_q" => {
                self.noise_q = value
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| parse_probability(s, key))
                    .collect::<Result<_>>()?
            }
            "noise_r" => self.noise_r = parse_probability(value, key)?,
            "p_grid" => {
                self.p_grid = value
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| parse_probability(s, key))
                    .collect::<Result<_>>()?
            }
            "k_grid" => self.k_grid = parse_list(value, key)?,
            "aggregation" => {
                self.aggregation = match value {
                    "per_pair" => Aggregation::PerPair,
                    "pooled" => Aggregation::Pooled,
                    other => return Err(Error::config(format!("aggregation must be per_pair or pooled, got '{other}'"))),
                }
            }
            "timing" => self.timing = parse_bool(value, key)?,
            "max_error" => self.max_error = Some(parse_num(value, key)?),
            other => return Err(Error::config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::config("repetitions must be at least 1"));
        }
        if self.synthetic.frames == 0 || self.synthetic.points == 0 {
            return Err(Error::config("synthetic frames and points must be positive"));
        }
        if self.matcher.overlap == Overlap::Fixed(0) {
            return Err(Error::config("l must be at least 1"));
        }
        if self.k_grid.contains(&0) {
            return Err(Error::config("k_grid entries must be at least 1"));
        }
        Ok(())
    }
}

fn strip_prefix(e: &Error) -> String {
    match e {
        Error::Config(m) => m.clone(),
        other => other.to_string(),
    }
}
