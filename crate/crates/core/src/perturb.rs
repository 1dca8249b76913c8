//! Suffix perturbations: the fixed-suffix adversarial attack and the
//! random-suffix training augmentation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::corpus::NliExample;
use crate::error::{Error, Result};

pub const DEFAULT_ATTACK_SUFFIX: &str = " and false is not true.";

/// Neutral clauses used for augmentation, spelled as published.
pub const DEFAULT_POOL: [&str; 5] = [
    " and false is no true",
    " and any true is true",
    " and false is never true",
    " and anything true is true",
    " and false is not true",
];

/// Non-empty ordered list of suffixes, each stored with exactly one leading
/// space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct NeutralSentencePool(Vec<String>);

impl NeutralSentencePool {
    pub fn new<I, S>(suffixes: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut pool = Vec::new();
        for s in suffixes {
            let body = s.as_ref().trim();
            if body.is_empty() {
                return Err(Error::InvalidSpec("empty suffix in pool".into()));
            }
            pool.push(format!(" {body}"));
        }
        if pool.is_empty() {
            return Err(Error::InvalidSpec("suffix pool is empty".into()));
        }
        Ok(NeutralSentencePool(pool))
    }

    /// One suffix per non-blank line.
    pub fn from_lines(text: &str) -> Result<Self> {
        Self::new(text.lines().filter(|l| !l.trim().is_empty()))
    }

    pub fn single(suffix: &str) -> Result<Self> {
        Self::new([suffix])
    }

    pub fn suffixes(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Hex SHA-256 over the suffixes joined by newlines.
    pub fn digest(&self) -> String {
        let digest = Sha256::digest(self.0.join("\n").as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl Default for NeutralSentencePool {
    fn default() -> Self {
        NeutralSentencePool(DEFAULT_POOL.iter().map(|s| s.to_string()).collect())
    }
}

impl TryFrom<Vec<String>> for NeutralSentencePool {
    type Error = Error;

    fn try_from(v: Vec<String>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<NeutralSentencePool> for Vec<String> {
    fn from(pool: NeutralSentencePool) -> Vec<String> {
        pool.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    FixedSuffix,
    RandomFromPool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    #[default]
    Hypothesis,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerturbationSpec {
    pub pool: NeutralSentencePool,
    pub seed: u64,
    pub mode: Mode,
    pub target: Target,
}

impl PerturbationSpec {
    pub fn attack(suffix: &str) -> Result<Self> {
        Ok(PerturbationSpec {
            pool: NeutralSentencePool::single(suffix)?,
            seed: 0,
            mode: Mode::FixedSuffix,
            target: Target::Hypothesis,
        })
    }

    pub fn augment(pool: NeutralSentencePool, seed: u64) -> Self {
        PerturbationSpec {
            pool,
            seed,
            mode: Mode::RandomFromPool,
            target: Target::Hypothesis,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.pool.is_empty() {
            return Err(Error::InvalidSpec("suffix pool is empty".into()));
        }
        if self.mode == Mode::FixedSuffix && self.pool.len() != 1 {
            return Err(Error::InvalidSpec(format!(
                "fixed-suffix mode needs exactly one suffix, pool has {}",
                self.pool.len()
            )));
        }
        Ok(())
    }

    fn require(&self, mode: Mode) -> Result<()> {
        self.validate()?;
        if self.mode != mode {
            return Err(Error::InvalidSpec(format!(
                "expected mode {mode:?}, spec has {:?}",
                self.mode
            )));
        }
        Ok(())
    }
}

/// Drops one trailing `.`, `!` or `?` (and surrounding trailing whitespace)
/// and appends `suffix`. If nothing is left of the text, the suffix is
/// returned without its leading whitespace.
pub fn append_suffix(text: &str, suffix: &str) -> String {
    let base = text.trim_end();
    let base = base
        .strip_suffix(['.', '!', '?'])
        .unwrap_or(base)
        .trim_end();
    if base.is_empty() {
        suffix.trim_start().to_string()
    } else {
        format!("{base}{suffix}")
    }
}

/// Index of the pool entry chosen for example `id`. Depends only on the
/// seed and the id, never on position or thread schedule.
pub fn pick_suffix(seed: u64, id: &str, pool_len: usize) -> usize {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update(id.as_bytes());
    let key: [u8; 32] = hasher.finalize().into();
    ChaCha8Rng::from_seed(key).random_range(0..pool_len)
}

fn apply(example: &NliExample, target: Target, suffix: &str) -> NliExample {
    let mut out = example.clone();
    match target {
        Target::Hypothesis => out.hypothesis = append_suffix(&example.hypothesis, suffix),
    }
    out
}

/// Appends the spec's single suffix to every example.
pub fn attack_dataset(examples: &[NliExample], spec: &PerturbationSpec) -> Result<Vec<NliExample>> {
    spec.require(Mode::FixedSuffix)?;
    let suffix = &spec.pool.suffixes()[0];
    Ok(examples
        .par_iter()
        .map(|ex| apply(ex, spec.target, suffix))
        .collect())
}

/// Appends one pool suffix per example, chosen by [`pick_suffix`].
pub fn augment_dataset(
    examples: &[NliExample],
    spec: &PerturbationSpec,
) -> Result<Vec<NliExample>> {
    spec.require(Mode::RandomFromPool)?;
    let pool = spec.pool.suffixes();
    Ok(examples
        .par_iter()
        .map(|ex| {
            let suffix = &pool[pick_suffix(spec.seed, &ex.id, pool.len())];
            apply(ex, spec.target, suffix)
        })
        .collect())
}
