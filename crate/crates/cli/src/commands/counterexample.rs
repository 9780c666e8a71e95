use hlawka_core::convex::{
    counterexample_search, ConvexFunction, SearchConfig, SearchFamily, ViolationSource,
    SCALAR_CHECK_TOL,
};
use hlawka_core::Result;

use super::{tolerance, RunResult};
use crate::args::CounterexampleArgs;
use crate::report::{inputs_digest, TrialReport, Violation};

pub const DEFAULT_TRIALS: u64 = 10_000;

pub fn counterexample_report(args: &CounterexampleArgs) -> Result<RunResult> {
    let common = &args.common;
    let family = SearchFamily::from(args.family);
    let cfg = SearchConfig {
        family,
        n: args.n,
        dim: args.dim,
        trials: common.trials.unwrap_or(DEFAULT_TRIALS),
        seed: common.seed,
        strategy: args.strategy.into(),
        function: ConvexFunction::new(args.function),
        center: args.center.clone(),
        radius: args.radius,
        include_known: args.include_known,
        descent_steps: args.descent_steps,
        tol: tolerance(common, SCALAR_CHECK_TOL)?,
    };
    let out = counterexample_search(&cfg)?;

    let name = match family {
        SearchFamily::Freudenthal => "freudenthal",
        SearchFamily::HlawkaPop => "hlawka-pop",
    };
    let mut report = TrialReport::new("counterexample", name, cfg.seed, cfg.tol);
    report.param("n", cfg.n);
    if family == SearchFamily::Freudenthal {
        report.param("dim", cfg.dim);
    } else {
        report.param("function", cfg.function.kind);
    }
    report.param("strategy", cfg.strategy);
    report.param("radius", cfg.radius);
    if let Some(c) = &cfg.center {
        report.param("center", c);
    }
    report.param("includeKnown", cfg.include_known);
    report.trials = out.trials;
    report.min_margin = out.min_margin.is_finite().then_some(out.min_margin);
    report.min_relative_margin = out
        .min_relative_margin
        .is_finite()
        .then_some(out.min_relative_margin);
    report.equality_cases = out.equality_cases;
    report.violations = out
        .violations
        .into_iter()
        .map(|v| Violation {
            trial: match v.source {
                ViolationSource::Known => None,
                ViolationSource::Trial(i) => Some(i),
            },
            seed: v.seed,
            inputs_digest: inputs_digest(&v.input),
            min_eigenvalue: None,
            margin: Some(v.margin),
            scale: v.scale,
            inputs: Some(v.input),
        })
        .collect();
    match family {
        SearchFamily::HlawkaPop => {
            report.flag("hlawka-pop: conjectured inequality under test; violations are findings, not failures");
            if cfg.n != 4 {
                report.flag(
                    "hlawka-pop: subset-size weights extended from the n = 4 pattern to general n",
                );
            }
        }
        SearchFamily::Freudenthal if cfg.n >= 4 => {
            report.flag("freudenthal: known to fail for n >= 4; violations are expected findings");
        }
        SearchFamily::Freudenthal => {}
    }
    Ok(RunResult {
        report,
        fails: false,
    })
}
