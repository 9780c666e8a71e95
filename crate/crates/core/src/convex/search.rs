use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::checks::{conjecture_hlawka_pop_eval, ScalarCheckResult, SCALAR_CHECK_TOL};
use super::function::{ConvexFunction, ConvexKind};
use super::vectors::{freudenthal_alternating, VectorTuple};
use crate::error::{Error, Result};
use crate::seed::derive_seed;

/// The published counterexample to the scalar alternating conjecture at
/// `n = 4`, for `f = |x|`.
pub const KNOWN_HLAWKA_POP: [f64; 4] = [-10.0, 1.0, 1.0, 9.0];

const MAX_SEARCH_N: usize = 16;
const CHUNK: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchFamily {
    /// Alternating norm sum over vectors.
    Freudenthal,
    /// Scalar alternating sum of subset means over reals.
    HlawkaPop,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    #[default]
    Random,
    CoordinateDescent,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchConfig {
    pub family: SearchFamily,
    pub n: usize,
    /// Vector dimension; ignored for scalar families.
    pub dim: usize,
    pub trials: u64,
    pub seed: u64,
    pub strategy: Strategy,
    /// Convex function for scalar families.
    pub function: ConvexFunction,
    /// Sampling center (flattened), zero when absent.
    pub center: Option<Vec<f64>>,
    /// Standard deviation of the Gaussian sampling cloud.
    pub radius: f64,
    /// Evaluate the known counterexample before any trial.
    pub include_known: bool,
    pub descent_steps: usize,
    /// Violation iff `margin < -tol * scale`.
    pub tol: f64,
}

impl SearchConfig {
    pub fn new(family: SearchFamily, n: usize, trials: u64, seed: u64) -> Self {
        Self {
            family,
            n,
            dim: 2,
            trials,
            seed,
            strategy: Strategy::Random,
            function: ConvexFunction::new(ConvexKind::Abs),
            center: None,
            radius: 1.0,
            include_known: false,
            descent_steps: 200,
            tol: SCALAR_CHECK_TOL,
        }
    }

    /// Number of reals in one sampled input.
    pub fn input_len(&self) -> usize {
        match self.family {
            SearchFamily::Freudenthal => self.n * self.dim,
            SearchFamily::HlawkaPop => self.n,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(3..=MAX_SEARCH_N).contains(&self.n) {
            return Err(Error::Parameter(format!(
                "search needs 3 <= n <= {MAX_SEARCH_N}, got {}",
                self.n
            )));
        }
        if self.family == SearchFamily::Freudenthal && self.dim == 0 {
            return Err(Error::Parameter("vector dimension must be >= 1".into()));
        }
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return Err(Error::Parameter(format!(
                "tolerance must be finite and >= 0, got {}",
                self.tol
            )));
        }
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(Error::Parameter(format!(
                "radius must be positive, got {}",
                self.radius
            )));
        }
        if let Some(c) = &self.center {
            if c.len() != self.input_len() {
                return Err(Error::Parameter(format!(
                    "center has {} values, expected {}",
                    c.len(),
                    self.input_len()
                )));
            }
            if c.iter().any(|x| !x.is_finite()) {
                return Err(Error::Parameter("center has a non-finite value".into()));
            }
        }
        if self.include_known
            && (self.family != SearchFamily::HlawkaPop || self.n != KNOWN_HLAWKA_POP.len())
        {
            return Err(Error::Parameter(
                "the known counterexample applies to hlawka-pop with n = 4 only".into(),
            ));
        }
        Ok(())
    }

    fn violates(&self, r: &ScalarCheckResult) -> bool {
        r.margin < -self.tol * r.scale
    }

    fn evaluate(&self, input: &[f64]) -> Result<ScalarCheckResult> {
        match self.family {
            SearchFamily::Freudenthal => {
                freudenthal_alternating(&VectorTuple::from_flat(input, self.dim)?)
            }
            SearchFamily::HlawkaPop => conjecture_hlawka_pop_eval(&self.function, input),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "kind", content = "index")]
pub enum ViolationSource {
    Known,
    Trial(u64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchViolation {
    pub source: ViolationSource,
    /// Per-trial seed; the master seed for the known input.
    pub seed: u64,
    pub input: Vec<f64>,
    pub margin: f64,
    pub scale: f64,
    pub relative_margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchOutcome {
    pub trials: u64,
    /// Violations ordered with the known input first, then by trial index.
    pub violations: Vec<SearchViolation>,
    pub min_margin: f64,
    pub min_relative_margin: f64,
    /// Inputs whose margin is zero within tolerance.
    pub equality_cases: u64,
}

struct TrialResult {
    margin: f64,
    relative: f64,
    equality: bool,
    violation: Option<SearchViolation>,
}

fn sample(cfg: &SearchConfig, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..cfg.input_len())
        .map(|i| {
            let c = cfg.center.as_ref().map_or(0.0, |c| c[i]);
            c + cfg.radius * rng.sample::<f64, _>(StandardNormal)
        })
        .collect()
}

fn descend(cfg: &SearchConfig, rng: &mut ChaCha8Rng, mut x: Vec<f64>) -> Result<Vec<f64>> {
    let mut best = cfg.evaluate(&x)?.relative_margin();
    let mut step = cfg.radius;
    for s in 0..cfg.descent_steps {
        if best < 0.0 {
            break;
        }
        let i = s % x.len();
        let old = x[i];
        x[i] = old + step * rng.sample::<f64, _>(StandardNormal);
        let r = cfg.evaluate(&x)?.relative_margin();
        if r < best {
            best = r;
        } else {
            x[i] = old;
            step *= 0.97;
        }
    }
    Ok(x)
}

/// Re-evaluates the input with its points in reverse order; a violation is
/// only kept when both evaluations agree.
fn confirm(cfg: &SearchConfig, input: &[f64]) -> Result<bool> {
    let block = match cfg.family {
        SearchFamily::Freudenthal => cfg.dim,
        SearchFamily::HlawkaPop => 1,
    };
    let reversed: Vec<f64> = input.chunks(block).rev().flatten().copied().collect();
    Ok(cfg.violates(&cfg.evaluate(&reversed)?))
}

fn run_one(
    cfg: &SearchConfig,
    source: ViolationSource,
    seed: u64,
    input: Vec<f64>,
) -> Result<TrialResult> {
    let r = cfg.evaluate(&input)?;
    let equality = r.margin.abs() <= cfg.tol * r.scale;
    let violation = if cfg.violates(&r) && confirm(cfg, &input)? {
        Some(SearchViolation {
            source,
            seed,
            input,
            margin: r.margin,
            scale: r.scale,
            relative_margin: r.relative_margin(),
        })
    } else {
        None
    };
    Ok(TrialResult {
        margin: r.margin,
        relative: r.relative_margin(),
        equality,
        violation,
    })
}

fn run_trial(cfg: &SearchConfig, index: u64) -> Result<TrialResult> {
    let seed = derive_seed(cfg.seed, index);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = sample(cfg, &mut rng);
    if cfg.strategy == Strategy::CoordinateDescent {
        x = descend(cfg, &mut rng, x)?;
    }
    run_one(cfg, ViolationSource::Trial(index), seed, x)
}

/// Seeded search for inputs with a negative margin. Trials run in
/// parallel on the current rayon pool; the outcome depends only on the
/// configuration.
pub fn counterexample_search(cfg: &SearchConfig) -> Result<SearchOutcome> {
    cfg.validate()?;
    let mut out = SearchOutcome {
        trials: cfg.trials,
        violations: Vec::new(),
        min_margin: f64::INFINITY,
        min_relative_margin: f64::INFINITY,
        equality_cases: 0,
    };
    let mut absorb = |t: TrialResult| {
        out.min_margin = out.min_margin.min(t.margin);
        out.min_relative_margin = out.min_relative_margin.min(t.relative);
        out.equality_cases += u64::from(t.equality);
        out.violations.extend(t.violation);
    };
    if cfg.include_known {
        absorb(run_one(
            cfg,
            ViolationSource::Known,
            cfg.seed,
            KNOWN_HLAWKA_POP.to_vec(),
        )?);
    }
    let mut start = 0;
    while start < cfg.trials {
        let end = cfg.trials.min(start + CHUNK);
        let chunk: Vec<TrialResult> = (start..end)
            .into_par_iter()
            .map(|i| run_trial(cfg, i))
            .collect::<Result<_>>()?;
        chunk.into_iter().for_each(&mut absorb);
        start = end;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_input_is_reported() {
        let mut cfg = SearchConfig::new(SearchFamily::HlawkaPop, 4, 0, 1);
        cfg.include_known = true;
        let out = counterexample_search(&cfg).unwrap();
        assert_eq!(out.violations.len(), 1);
        assert_eq!(out.violations[0].source, ViolationSource::Known);
        assert_eq!(out.violations[0].margin, -2.0);
    }

    #[test]
    fn rediscovers_near_known_point() {
        let mut cfg = SearchConfig::new(SearchFamily::HlawkaPop, 4, 500, 7);
        cfg.center = Some(KNOWN_HLAWKA_POP.to_vec());
        cfg.radius = 0.5;
        let out = counterexample_search(&cfg).unwrap();
        assert!(!out.violations.is_empty());
        assert!(out.min_margin < 0.0);
        for v in &out.violations {
            assert!(
                !conjecture_hlawka_pop_eval(&cfg.function, &v.input)
                    .unwrap()
                    .holds
            );
        }
    }

    #[test]
    fn freudenthal_n3_has_no_violations() {
        for strategy in [Strategy::Random, Strategy::CoordinateDescent] {
            let mut cfg = SearchConfig::new(SearchFamily::Freudenthal, 3, 300, 3);
            cfg.strategy = strategy;
            cfg.descent_steps = 30;
            let out = counterexample_search(&cfg).unwrap();
            assert!(out.violations.is_empty());
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let mut cfg = SearchConfig::new(SearchFamily::HlawkaPop, 4, 300, 99);
        cfg.center = Some(KNOWN_HLAWKA_POP.to_vec());
        cfg.strategy = Strategy::CoordinateDescent;
        cfg.descent_steps = 20;
        let a = counterexample_search(&cfg).unwrap();
        let b = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| counterexample_search(&cfg).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(
            counterexample_search(&SearchConfig::new(SearchFamily::HlawkaPop, 2, 1, 0)).is_err()
        );
        let mut cfg = SearchConfig::new(SearchFamily::Freudenthal, 4, 1, 0);
        cfg.include_known = true;
        assert!(counterexample_search(&cfg).is_err());
        cfg.include_known = false;
        cfg.center = Some(vec![0.0; 3]);
        assert!(counterexample_search(&cfg).is_err());
    }
}
