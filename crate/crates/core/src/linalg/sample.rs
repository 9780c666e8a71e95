use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::matrix::HermitianMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SpectrumKind {
    Uniform,
    #[default]
    LogUniform,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PdSampleConfig {
    pub dim: usize,
    pub seed: u64,
    pub condition_target: f64,
    pub spectrum_kind: SpectrumKind,
}

impl PdSampleConfig {
    pub fn new(dim: usize, seed: u64) -> Self {
        Self {
            dim,
            seed,
            condition_target: 10.0,
            spectrum_kind: SpectrumKind::default(),
        }
    }

    pub fn with_condition(mut self, condition_target: f64) -> Self {
        self.condition_target = condition_target;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::Parameter("sample dimension must be positive".into()));
        }
        if !(self.condition_target >= 1.0 && self.condition_target.is_finite()) {
            return Err(Error::Parameter(format!(
                "condition target must be a finite value >= 1, got {}",
                self.condition_target
            )));
        }
        Ok(())
    }
}

/// Seeded positive definite matrix `Q diag(λ) Q*`.
///
/// `Q` is the unitary factor of the QR decomposition of a complex Gaussian
/// matrix. The spectrum spans `[1/κ, 1]` with both ends pinned, so for
/// `dim >= 2` the condition number equals `κ` up to rounding; interior
/// eigenvalues are drawn uniformly or log-uniformly. A 1x1 sample is `[1]`.
pub fn random_pd(cfg: &PdSampleConfig) -> Result<HermitianMatrix> {
    cfg.validate()?;
    let n = cfg.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut gauss = DMatrix::<Complex64>::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            gauss[(i, j)] = Complex64::new(re, im);
        }
    }
    let q = gauss.qr().q();

    let kappa = cfg.condition_target;
    let lo = 1.0 / kappa;
    let mut spectrum = vec![1.0; n];
    if n >= 2 {
        spectrum[n - 1] = lo;
        for v in spectrum.iter_mut().take(n - 1).skip(1) {
            let u: f64 = rng.random();
            *v = match cfg.spectrum_kind {
                SpectrumKind::Uniform => lo + u * (1.0 - lo),
                SpectrumKind::LogUniform => (-kappa.ln() * u).exp(),
            };
        }
    }

    let mut scaled = q.clone();
    for (j, &lambda) in spectrum.iter().enumerate() {
        scaled.column_mut(j).scale_mut(lambda);
    }
    Ok(HermitianMatrix::symmetrize(scaled * q.adjoint()))
}
