//! Experiment configuration: named presets, a flat `key = value` file format
//! and per-field overrides.
//!
//! Keys match the command-line flag names without the leading dashes
//! (`max-gen`, `p-mut-per-bit`, ...). Underscores are accepted in place of
//! dashes. Lines starting with `#` are comments.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::experiments::{default_block_sizes, Algorithm};
use crate::ga::GaConfig;
use crate::objectives::{Problem, ProblemKind};
use crate::sea::SeaConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    PaperP1,
    PaperP2,
    PaperP3,
    PaperP4,
    Smoke,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::PaperP1,
        Preset::PaperP2,
        Preset::PaperP3,
        Preset::PaperP4,
        Preset::Smoke,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::PaperP1 => "paper-P1",
            Preset::PaperP2 => "paper-P2",
            Preset::PaperP3 => "paper-P3",
            Preset::PaperP4 => "paper-P4",
            Preset::Smoke => "smoke",
        }
    }

    /// The tuned preset for a test problem.
    pub fn for_problem(kind: ProblemKind) -> Preset {
        match kind {
            ProblemKind::OneMax => Preset::PaperP1,
            ProblemKind::Needle => Preset::PaperP2,
            ProblemKind::OnOff => Preset::PaperP3,
            ProblemKind::Alternation => Preset::PaperP4,
        }
    }

    pub fn expand(self) -> RunConfig {
        let base = RunConfig {
            problem: ProblemKind::OneMax,
            algorithm: Algorithm::Sea,
            max_gen: 3000,
            pop_size: 100,
            n: 100,
            k: 19,
            t_size: 2,
            p_cross: 0.6,
            p_mut: 1.0,
            p_mut_per_bit: 0.9,
            p_mut_state: 1.0,
            elitism: true,
            runs: 100,
            seed: 0,
            step: 0.05,
            k_values: default_block_sizes(),
            count: 100,
            pflip: 0.25,
        };
        match self {
            Preset::PaperP1 => base,
            Preset::PaperP2 => RunConfig {
                problem: ProblemKind::Needle,
                ..base
            },
            Preset::PaperP3 => RunConfig {
                problem: ProblemKind::OnOff,
                k: 3,
                p_mut_per_bit: 0.05,
                p_mut_state: 0.85,
                ..base
            },
            Preset::PaperP4 => RunConfig {
                problem: ProblemKind::Alternation,
                max_gen: 30000,
                pop_size: 10,
                k: 3,
                p_mut_per_bit: 0.05,
                p_mut_state: 0.7,
                ..base
            },
            Preset::Smoke => RunConfig {
                runs: 20,
                step: 0.25,
                ..base
            },
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        Preset::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(t))
            .ok_or_else(|| Error::UnknownPreset(t.to_string()))
    }
}

/// Fully resolved settings for any experiment command.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemKind,
    pub algorithm: Algorithm,
    pub max_gen: u32,
    pub pop_size: usize,
    /// Number of blocks, i.e. the phenotype length.
    pub n: usize,
    pub k: usize,
    pub t_size: usize,
    pub p_cross: f64,
    pub p_mut: f64,
    pub p_mut_per_bit: f64,
    pub p_mut_state: f64,
    pub elitism: bool,
    pub runs: usize,
    pub seed: u64,
    pub step: f64,
    pub k_values: Vec<usize>,
    pub count: usize,
    pub pflip: f64,
}

/// Optional value per [`RunConfig`] field, as read from a file or flags.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub preset: Option<Preset>,
    pub problem: Option<ProblemKind>,
    pub algorithm: Option<Algorithm>,
    pub max_gen: Option<u32>,
    pub pop_size: Option<usize>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub t_size: Option<usize>,
    pub p_cross: Option<f64>,
    pub p_mut: Option<f64>,
    pub p_mut_per_bit: Option<f64>,
    pub p_mut_state: Option<f64>,
    pub elitism: Option<bool>,
    pub runs: Option<usize>,
    pub seed: Option<u64>,
    pub step: Option<f64>,
    pub k_values: Option<Vec<usize>>,
    pub count: Option<usize>,
    pub pflip: Option<f64>,
}

macro_rules! layer {
    ($dst:ident, $src:ident; $($field:ident),*) => {
        $(if let Some(v) = &$src.$field { $dst.$field = v.clone(); })*
    };
}

impl Overrides {
    /// Parses the flat `key = value` format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut o = Overrides::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let syntax = |reason: String| Error::ConfigSyntax {
                line: idx + 1,
                reason,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| syntax("expected `key = value`".into()))?;
            o.set(key.trim(), value.trim()).map_err(|e| {
                if e.is_usage() {
                    syntax(e.to_string())
                } else {
                    e
                }
            })?;
        }
        Ok(o)
    }

    /// Sets one field from its textual key and value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .parse()
                .map_err(|_| Error::param(key, format!("cannot parse {value:?}")))
        }
        match key.replace('_', "-").to_ascii_lowercase().as_str() {
            "preset" => self.preset = Some(value.parse()?),
            "problem" => self.problem = Some(value.parse()?),
            "algorithm" => self.algorithm = Some(value.parse()?),
            "max-gen" => self.max_gen = Some(num(key, value)?),
            "pop-size" => self.pop_size = Some(num(key, value)?),
            "n" => self.n = Some(num(key, value)?),
            "k" => self.k = Some(num(key, value)?),
            "t-size" => self.t_size = Some(num(key, value)?),
            "p-cross" => self.p_cross = Some(num(key, value)?),
            "p-mut" => self.p_mut = Some(num(key, value)?),
            "p-mut-per-bit" => self.p_mut_per_bit = Some(num(key, value)?),
            "p-mut-state" => self.p_mut_state = Some(num(key, value)?),
            "elitism" => self.elitism = Some(num(key, value)?),
            "runs" => self.runs = Some(num(key, value)?),
            "seed" => self.seed = Some(num(key, value)?),
            "step" => self.step = Some(num(key, value)?),
            "k-values" => self.k_values = Some(parse_k_list(value)?),
            "count" => self.count = Some(num(key, value)?),
            "pflip" => self.pflip = Some(num(key, value)?),
            other => return Err(Error::param(other, "unknown key")),
        }
        Ok(())
    }

    /// Applies the set fields on top of `cfg`. The preset is not a field.
    pub fn apply(&self, cfg: &mut RunConfig) {
        layer!(cfg, self; problem, algorithm, max_gen, pop_size, n, k, t_size, p_cross, p_mut,
            p_mut_per_bit, p_mut_state, elitism, runs, seed, step, k_values, count, pflip);
    }
}

/// Parses a comma-separated list of odd block sizes.
pub fn parse_k_list(text: &str) -> Result<Vec<usize>> {
    let ks = text
        .split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<usize>()
                .map_err(|_| Error::param("k-values", format!("cannot parse {t:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(&k) = ks.iter().find(|&&k| k % 2 == 0) {
        return Err(Error::InvalidBlockSize(k));
    }
    Ok(ks)
}

impl RunConfig {
    /// Layers `flags` over `file` over a preset. The preset is the one named by
    /// the flags, else by the file, else the tuned preset of the chosen problem.
    pub fn resolve(file: Option<&Overrides>, flags: &Overrides) -> RunConfig {
        let empty = Overrides::default();
        let file = file.unwrap_or(&empty);
        let preset = flags.preset.or(file.preset).unwrap_or_else(|| {
            flags
                .problem
                .or(file.problem)
                .map_or(Preset::PaperP1, Preset::for_problem)
        });
        let mut cfg = preset.expand();
        file.apply(&mut cfg);
        flags.apply(&mut cfg);
        cfg
    }

    pub fn problem(&self) -> Result<Problem> {
        Problem::new(self.problem, self.n)
    }

    pub fn ga_config(&self) -> GaConfig {
        GaConfig {
            max_gen: self.max_gen,
            pop_size: self.pop_size,
            blocks_n: self.n,
            block_k: self.k,
            t_size: self.t_size,
            p_cross: self.p_cross,
            p_mut: self.p_mut,
            p_mut_per_bit: self.p_mut_per_bit,
            elitism: self.elitism,
        }
    }

    pub fn sea_config(&self) -> SeaConfig {
        SeaConfig::two_state(self.ga_config(), self.p_mut_state)
    }

    /// Checks everything a run needs, except fields only some commands use.
    pub fn validate(&self) -> Result<Problem> {
        let problem = self.problem()?;
        self.sea_config().validate(&problem)?;
        if self.runs == 0 {
            return Err(Error::param("runs", "must be at least 1"));
        }
        Ok(problem)
    }

    /// Every field in the file format; parsing the dump gives back `self`.
    pub fn to_kv(&self) -> String {
        let ks: Vec<String> = self.k_values.iter().map(|k| k.to_string()).collect();
        let mut s = String::new();
        let mut kv = |k: &str, v: &dyn fmt::Display| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("problem", &self.problem);
        kv("algorithm", &self.algorithm);
        kv("max-gen", &self.max_gen);
        kv("pop-size", &self.pop_size);
        kv("n", &self.n);
        kv("k", &self.k);
        kv("t-size", &self.t_size);
        kv("p-cross", &self.p_cross);
        kv("p-mut", &self.p_mut);
        kv("p-mut-per-bit", &self.p_mut_per_bit);
        kv("p-mut-state", &self.p_mut_state);
        kv("elitism", &self.elitism);
        kv("runs", &self.runs);
        kv("seed", &self.seed);
        kv("step", &self.step);
        kv("k-values", &ks.join(","));
        kv("count", &self.count);
        kv("pflip", &self.pflip);
        s
    }
}
