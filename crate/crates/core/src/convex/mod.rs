//! Scalar and normed-space inequalities over a fixed catalog of convex
//! functions, and a seeded counterexample search.
//!
//! Every evaluator first sorts its input points, so results are exactly
//! invariant under permutations of the inputs. The `*_terms` functions are
//! generic over the number type, which lets tests evaluate the same
//! expressions in exact rational arithmetic.

mod checks;
mod function;
mod search;
mod vectors;

pub use checks::{
    conjecture_hlawka_pop_eval, conjecture_hlawka_pop_terms, functional_hlawka,
    functional_hlawka_terms, jensen_check, jensen_terms, levels_scalar_eval, levels_scalar_terms,
    pcz_check, pcz_terms, popoviciu_check, popoviciu_terms, vasc_check, vasc_terms,
    ScalarCheckResult, Terms, SCALAR_CHECK_TOL,
};
pub use function::{ConvexFunction, ConvexKind};
pub use search::{
    counterexample_search, SearchConfig, SearchFamily, SearchOutcome, SearchViolation, Strategy,
    ViolationSource, KNOWN_HLAWKA_POP,
};
pub use vectors::{
    freudenthal_alternating, norm_hlawka, radu_check, radu_check_with_norm, Norm, VectorTuple,
};
