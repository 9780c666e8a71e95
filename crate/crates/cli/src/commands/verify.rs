use hlawka_core::linalg::{
    certify_psd, random_pd, read_matrix_file, Budget, HermitianMatrix, LoewnerCertificate,
    PdSampleConfig, SpectrumKind, Verdict, DEFAULT_PSD_TOL,
};
use hlawka_core::seed::derive_seed;
use hlawka_core::sums::{build_difference, plan, FamilyId, InputKind, TensorSumParams};
use hlawka_core::{Error, Result};
use rayon::prelude::*;

use super::{tolerance, RunResult};
use crate::args::{FamilyParams, VerifyArgs};
use crate::report::{inputs_digest, TrialReport, Violation};

pub const DEFAULT_TRIALS: u64 = 100;

struct Outcome {
    cert: LoewnerCertificate,
    input_kind: InputKind,
    violation: Option<Violation>,
}

pub(crate) fn resolve_n(family: FamilyId, params: &FamilyParams) -> Result<usize> {
    match (family.fixed_arity(), params.n) {
        (Some(a), Some(n)) if a != n => Err(Error::Parameter(format!(
            "{family} takes exactly {a} matrices, got --n {n}"
        ))),
        (Some(a), _) => Ok(a),
        (None, Some(n)) => Ok(n),
        (None, None) => Ok(match family {
            FamilyId::Superadd => 2,
            FamilyId::PopSubsets | FamilyId::PopLevels => 4,
            _ => 3,
        }),
    }
}

pub(crate) fn sum_params(p: u32, params: &FamilyParams) -> TensorSumParams {
    TensorSumParams {
        p,
        k: params.k,
        ell: params.ell,
        m: params.m,
        anchor: params.anchor,
    }
}

pub(crate) fn record_family_params(report: &mut TrialReport, n: usize, params: &FamilyParams) {
    report.param("n", n);
    for (key, v) in [
        ("k", params.k),
        ("ell", params.ell),
        ("m", params.m),
        ("anchor", params.anchor),
    ] {
        if let Some(v) = v {
            report.param(key, v);
        }
    }
}

pub(crate) fn unproven_flag(family: FamilyId) -> Option<String> {
    (!family.is_proven())
        .then(|| format!("{family}: stated without proof in tensor form; results are measurements and never fail the run"))
}

fn flatten_inputs(mats: &[HermitianMatrix]) -> Vec<f64> {
    mats.iter()
        .flat_map(|m| m.entries())
        .flat_map(|z| [z.re, z.im])
        .collect()
}

fn evaluate(
    family: FamilyId,
    mats: &[HermitianMatrix],
    params: &TensorSumParams,
    budget: &Budget,
    tol: f64,
    trial: Option<u64>,
    seed: u64,
) -> Result<Outcome> {
    let d = build_difference(family, mats, params, budget)?;
    let cert = certify_psd(&d.matrix, tol)?;
    let violation = (!cert.holds()).then(|| Violation {
        trial,
        seed,
        inputs_digest: inputs_digest(&flatten_inputs(mats)),
        min_eigenvalue: Some(cert.min_eigenvalue),
        margin: None,
        scale: cert.scale.max(1.0),
        inputs: None,
    });
    Ok(Outcome {
        cert,
        input_kind: d.input_kind,
        violation,
    })
}

pub fn verify_report(args: &VerifyArgs) -> Result<RunResult> {
    let family = args.family;
    let common = &args.common;
    let tol = tolerance(common, DEFAULT_PSD_TOL)?;
    if args.p == 0 {
        return Err(Error::Parameter("--p must be at least 1".into()));
    }
    let budget = Budget::new(common.max_dim);
    let n = resolve_n(family, &args.params)?;
    let params = sum_params(args.p, &args.params);
    plan(family, n, &params)?;

    let mut report = TrialReport::new("verify", family.name(), common.seed, tol);
    record_family_params(&mut report, n, &args.params);
    report.param("p", args.p);
    report.param("maxTensorDim", common.max_dim);

    let outcomes: Vec<Outcome> = if args.inputs.is_empty() {
        budget.check_power(args.dim, args.p)?;
        let spectrum_kind = SpectrumKind::from(args.spectrum);
        let sample = |seed| {
            let cfg = PdSampleConfig {
                dim: args.dim,
                seed,
                condition_target: args.condition,
                spectrum_kind,
            };
            cfg.validate().map(|_| cfg)
        };
        sample(0)?;
        report.param("dim", args.dim);
        report.param("conditionTarget", args.condition);
        report.param("spectrum", spectrum_kind);
        let trials = common.trials.unwrap_or(DEFAULT_TRIALS);
        report.trials = trials;
        (0..trials)
            .into_par_iter()
            .map(|i| {
                let tseed = derive_seed(common.seed, i);
                let mats = (0..n)
                    .map(|j| random_pd(&sample(derive_seed(tseed, j as u64))?))
                    .collect::<Result<Vec<_>>>()?;
                evaluate(family, &mats, &params, &budget, tol, Some(i), tseed)
            })
            .collect::<Result<_>>()?
    } else {
        if args.inputs.len() != n {
            return Err(Error::Parameter(format!(
                "{family} needs {n} input files, got {}",
                args.inputs.len()
            )));
        }
        let mats = args
            .inputs
            .iter()
            .map(|p| read_matrix_file(p).and_then(HermitianMatrix::try_from_matrix))
            .collect::<Result<Vec<_>>>()?;
        budget.check_power(mats[0].dim(), args.p)?;
        report.param("dim", mats[0].dim());
        let names: Vec<String> = args
            .inputs
            .iter()
            .map(|p| p.display().to_string())
            .collect();
        report.param("inputFiles", names);
        report.trials = 1;
        vec![evaluate(
            family,
            &mats,
            &params,
            &budget,
            tol,
            None,
            common.seed,
        )?]
    };

    let mut semidefinite = false;
    for o in outcomes {
        report.observe(o.cert.min_eigenvalue, o.cert.scale.max(1.0));
        report.equality_cases += u64::from(o.cert.verdict == Verdict::Equality);
        semidefinite |= o.input_kind == InputKind::SemiDefinite;
        report.violations.extend(o.violation);
    }
    if semidefinite {
        report.flag("some inputs are only positive semidefinite");
    }
    report.interpretation_flags.extend(unproven_flag(family));
    let fails = family.is_proven() && !report.violations.is_empty();
    Ok(RunResult { report, fails })
}
