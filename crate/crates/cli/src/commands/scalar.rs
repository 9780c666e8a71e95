use hlawka_core::convex::{
    conjecture_hlawka_pop_eval, freudenthal_alternating, functional_hlawka, jensen_check,
    levels_scalar_eval, pcz_check, popoviciu_check, radu_check, vasc_check, ConvexFunction,
    ConvexKind, ScalarCheckResult, VectorTuple, SCALAR_CHECK_TOL,
};
use hlawka_core::gmf::scalar::{scalar_inequality_check_prepared, SCALAR_TOL};
use hlawka_core::gmf::PreparedFunction;
use hlawka_core::linalg::{random_pd, PdSampleConfig};
use hlawka_core::seed::derive_seed;
use hlawka_core::sums::plan;
use hlawka_core::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::verify::{record_family_params, resolve_n, sum_params, unproven_flag};
use super::{parse_character, tolerance, RunResult};
use crate::args::{ScalarVerifyArgs, Suite};
use crate::report::{inputs_digest, TrialReport, Violation};

pub const DEFAULT_TRIALS: u64 = 200;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    /// A violation fails the run.
    Proven,
    /// Hypothesis under test: a violation refutes it and fails the run.
    Conjecture,
    /// Margins are reported without an expected sign.
    Evaluator,
}

struct Evaluated {
    margin: f64,
    scale: f64,
}

struct TrialInput {
    trial: Option<u64>,
    seed: u64,
    function: ConvexFunction,
    values: Vec<f64>,
}

fn suite_name(suite: Suite) -> &'static str {
    match suite {
        Suite::Gmf => "gmf",
        Suite::NormHlawka => "norm-hlawka",
        Suite::Radu => "radu",
        Suite::Freudenthal => "freudenthal",
        Suite::Jensen => "jensen",
        Suite::Popoviciu => "popoviciu",
        Suite::Vasc => "vasc",
        Suite::Pcz => "pcz",
        Suite::FunctionalHlawka => "functional-hlawka",
        Suite::HlawkaPop => "hlawka-pop",
        Suite::LevelsScalar => "levels-scalar",
    }
}

fn fixed_n(suite: Suite) -> Option<usize> {
    match suite {
        Suite::NormHlawka | Suite::Popoviciu | Suite::FunctionalHlawka => Some(3),
        _ => None,
    }
}

fn default_n(suite: Suite) -> usize {
    match suite {
        Suite::Pcz | Suite::LevelsScalar => 5,
        Suite::Radu | Suite::Jensen | Suite::Vasc | Suite::HlawkaPop => 4,
        _ => 3,
    }
}

fn is_vector_suite(suite: Suite) -> bool {
    matches!(suite, Suite::NormHlawka | Suite::Radu | Suite::Freudenthal)
}

fn status(suite: Suite, n: usize) -> Status {
    match suite {
        Suite::FunctionalHlawka | Suite::LevelsScalar => Status::Evaluator,
        Suite::Freudenthal if n >= 4 => Status::Evaluator,
        Suite::HlawkaPop => Status::Conjecture,
        _ => Status::Proven,
    }
}

fn convex_eval(args: &ScalarVerifyArgs, n: usize, input: &TrialInput) -> Result<Evaluated> {
    let x = &input.values;
    let f = &input.function;
    let p = &args.params;
    let vectors = || VectorTuple::from_flat(x, args.dim);
    let r: ScalarCheckResult = match args.suite {
        Suite::NormHlawka => radu_check(&vectors()?, 2)?,
        Suite::Radu => match p.k {
            Some(k) => radu_check(&vectors()?, k)?,
            None => {
                let t = vectors()?;
                let all = (2..=n)
                    .map(|k| radu_check(&t, k))
                    .collect::<Result<Vec<_>>>()?;
                all.into_iter()
                    .min_by(|a, b| a.relative_margin().total_cmp(&b.relative_margin()))
                    .expect("n >= 3")
            }
        },
        Suite::Freudenthal => freudenthal_alternating(&vectors()?)?,
        Suite::Jensen => jensen_check(f, x)?,
        Suite::Popoviciu => popoviciu_check(f, x[0], x[1], x[2]),
        Suite::Vasc => vasc_check(f, x)?,
        Suite::Pcz => pcz_check(f, x, p.m.unwrap_or(3))?,
        Suite::FunctionalHlawka => functional_hlawka(f, x[0], x[1], x[2]),
        Suite::HlawkaPop => conjecture_hlawka_pop_eval(f, x)?,
        Suite::LevelsScalar => {
            levels_scalar_eval(f, x, p.k.unwrap_or(1), p.ell.unwrap_or(2), p.m.unwrap_or(3))?
        }
        Suite::Gmf => unreachable!("matrix suite handled separately"),
    };
    Ok(Evaluated {
        margin: r.margin,
        scale: r.scale,
    })
}

fn convex_inputs(
    args: &ScalarVerifyArgs,
    n: usize,
    report: &mut TrialReport,
) -> Result<Vec<TrialInput>> {
    let common = &args.common;
    let input_len = if is_vector_suite(args.suite) {
        n * args.dim
    } else {
        n
    };
    if is_vector_suite(args.suite) {
        if args.dim == 0 {
            return Err(Error::Parameter("--dim must be at least 1".into()));
        }
        report.param("dim", args.dim);
    }
    if let Some(points) = &args.points {
        if points.len() != input_len {
            return Err(Error::Parameter(format!(
                "--points needs {input_len} values, got {}",
                points.len()
            )));
        }
        let kind = args.function.unwrap_or(ConvexKind::Abs);
        if !is_vector_suite(args.suite) {
            report.param("function", kind);
        }
        report.param("points", points);
        return Ok(vec![TrialInput {
            trial: None,
            seed: common.seed,
            function: ConvexFunction::new(kind),
            values: points.clone(),
        }]);
    }
    if !(args.radius.is_finite() && args.radius > 0.0) {
        return Err(Error::Parameter(format!(
            "--radius must be positive, got {}",
            args.radius
        )));
    }
    report.param("radius", args.radius);
    if !is_vector_suite(args.suite) {
        match args.function {
            Some(k) => report.param("function", k),
            None => report.param("function", "cycle"),
        }
    }
    let catalog = ConvexFunction::catalog();
    let trials = common.trials.unwrap_or(DEFAULT_TRIALS);
    Ok((0..trials)
        .map(|i| {
            let seed = derive_seed(common.seed, i);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let values = (0..input_len)
                .map(|_| args.radius * rng.sample::<f64, _>(StandardNormal))
                .collect();
            let function = args.function.map_or(
                catalog[(i % catalog.len() as u64) as usize],
                ConvexFunction::new,
            );
            TrialInput {
                trial: Some(i),
                seed,
                function,
                values,
            }
        })
        .collect())
}

fn violation(
    trial: Option<u64>,
    seed: u64,
    values: &[f64],
    e: &Evaluated,
    keep: bool,
) -> Violation {
    Violation {
        trial,
        seed,
        inputs_digest: inputs_digest(values),
        min_eigenvalue: None,
        margin: Some(e.margin),
        scale: e.scale,
        inputs: keep.then(|| values.to_vec()),
    }
}

fn finish(report: &mut TrialReport, tol: f64, results: Vec<(Evaluated, Option<Violation>)>) {
    for (e, v) in results {
        report.observe(e.margin, e.scale);
        report.equality_cases += u64::from(e.margin.abs() <= tol * e.scale);
        report.violations.extend(v);
    }
}

fn gmf_report(args: &ScalarVerifyArgs) -> Result<RunResult> {
    let common = &args.common;
    let tol = tolerance(common, SCALAR_TOL)?;
    if args.points.is_some() {
        return Err(Error::Parameter(
            "--points applies to the convex and norm suites only".into(),
        ));
    }
    let family = args.family;
    let n = resolve_n(family, &args.params)?;
    let params = sum_params(0, &args.params);
    plan(family, n, &params)?;
    let (group, chi) = parse_character(&args.character, args.dim)?;
    let function = PreparedFunction::new(&group, &chi)?;
    if function.degree() != args.dim {
        return Err(Error::Parameter(format!(
            "character '{}' has degree {} but --dim is {}",
            args.character,
            function.degree(),
            args.dim
        )));
    }
    let sample = |seed| PdSampleConfig::new(args.dim, seed).with_condition(args.condition);
    sample(0).validate()?;

    let mut report = TrialReport::new("scalar-verify", format!("gmf:{family}"), common.seed, tol);
    record_family_params(&mut report, n, &args.params);
    report.param("suite", "gmf");
    report.param("character", chi.label());
    report.param("groupOrder", function.order());
    report.param("dim", args.dim);
    report.param("conditionTarget", args.condition);
    let trials = common.trials.unwrap_or(DEFAULT_TRIALS);
    report.trials = trials;

    let results = (0..trials)
        .into_par_iter()
        .map(|i| {
            let tseed = derive_seed(common.seed, i);
            let mats = (0..n)
                .map(|j| random_pd(&sample(derive_seed(tseed, j as u64))))
                .collect::<Result<Vec<_>>>()?;
            let r = scalar_inequality_check_prepared(family, &mats, &params, &function)?;
            let e = Evaluated {
                margin: r.margin,
                scale: r.scale,
            };
            let v = (e.margin < -tol * e.scale).then(|| {
                let values: Vec<f64> = mats
                    .iter()
                    .flat_map(|m| m.entries())
                    .flat_map(|z| [z.re, z.im])
                    .collect();
                violation(Some(i), tseed, &values, &e, args.keep_inputs)
            });
            Ok((e, v))
        })
        .collect::<Result<Vec<_>>>()?;
    finish(&mut report, tol, results);
    report.interpretation_flags.extend(unproven_flag(family));
    let fails = family.is_proven() && !report.violations.is_empty();
    Ok(RunResult { report, fails })
}

pub fn scalar_verify_report(args: &ScalarVerifyArgs) -> Result<RunResult> {
    if args.suite == Suite::Gmf {
        return gmf_report(args);
    }
    let common = &args.common;
    let tol = tolerance(common, SCALAR_CHECK_TOL)?;
    let suite = args.suite;
    let n = match (fixed_n(suite), args.params.n) {
        (Some(f), Some(n)) if f != n => {
            return Err(Error::Parameter(format!(
                "{} takes exactly {f} points, got --n {n}",
                suite_name(suite)
            )));
        }
        (Some(f), _) => f,
        (None, n) => n.unwrap_or(default_n(suite)),
    };
    let status = status(suite, n);

    let mut report = TrialReport::new("scalar-verify", suite_name(suite), common.seed, tol);
    record_family_params(&mut report, n, &args.params);
    report.param("suite", suite_name(suite));
    let inputs = convex_inputs(args, n, &mut report)?;
    report.trials = inputs.len() as u64;
    // Surface parameter errors once instead of per trial.
    if let Some(first) = inputs.first() {
        convex_eval(args, n, first)?;
    }

    let results = inputs
        .par_iter()
        .map(|input| {
            let e = convex_eval(args, n, input)?;
            let v = (status != Status::Evaluator && e.margin < -tol * e.scale).then(|| {
                violation(
                    input.trial,
                    input.seed,
                    &input.values,
                    &e,
                    args.keep_inputs || input.trial.is_none(),
                )
            });
            Ok((e, v))
        })
        .collect::<Result<Vec<_>>>()?;
    finish(&mut report, tol, results);

    match suite {
        Suite::FunctionalHlawka => {
            report.flag("functional-hlawka: evaluator only; convexity does not imply a nonnegative margin")
        }
        Suite::LevelsScalar => {
            report.flag("levels-scalar: scalar analogue holds only for some (k, ell, m); margins are measurements")
        }
        Suite::Freudenthal if n >= 4 => {
            report.flag("freudenthal: known to fail for n >= 4; margins are measurements")
        }
        Suite::HlawkaPop => {
            report.flag("hlawka-pop: conjectured inequality under test; a violation refutes it");
            if n != 4 {
                report.flag("hlawka-pop: subset-size weights extended from the n = 4 pattern to general n");
            }
        }
        _ => {}
    }
    let fails = status != Status::Evaluator && !report.violations.is_empty();
    Ok(RunResult { report, fails })
}
