use num_traits::{FromPrimitive, Num};
use serde::{Deserialize, Serialize};

use super::function::ConvexFunction;
use crate::error::{Error, Result};
use crate::sums::{binomial, subsets};

/// `holds` iff `margin ≥ -SCALAR_CHECK_TOL * scale`.
pub const SCALAR_CHECK_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScalarCheckResult {
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs - rhs`.
    pub margin: f64,
    /// `max(1, Σ |term|)` over every evaluated, weighted term.
    pub scale: f64,
    pub holds: bool,
}

impl ScalarCheckResult {
    pub fn from_terms(terms: &Terms<f64>) -> Self {
        let lhs: f64 = terms.lhs.iter().sum();
        let rhs: f64 = terms.rhs.iter().sum();
        let abs: f64 = terms.lhs.iter().chain(&terms.rhs).map(|t| t.abs()).sum();
        let scale = abs.max(1.0);
        let margin = lhs - rhs;
        Self {
            lhs,
            rhs,
            margin,
            scale,
            holds: margin >= -SCALAR_CHECK_TOL * scale,
        }
    }

    pub fn relative_margin(&self) -> f64 {
        self.margin / self.scale
    }
}

/// Weighted terms of both sides of a scalar inequality.
#[derive(Clone, Debug, PartialEq)]
pub struct Terms<T> {
    pub lhs: Vec<T>,
    pub rhs: Vec<T>,
}

impl<T: Clone + Num> Terms<T> {
    /// Exact `lhs - rhs` in `T`.
    pub fn margin(&self) -> T {
        let sum = |v: &[T]| v.iter().cloned().fold(T::zero(), |a, b| a + b);
        sum(&self.lhs) - sum(&self.rhs)
    }

    pub fn sides(&self) -> (T, T) {
        let sum = |v: &[T]| v.iter().cloned().fold(T::zero(), |a, b| a + b);
        (sum(&self.lhs), sum(&self.rhs))
    }
}

/// Bounds for the generic evaluators; satisfied by `f64` and exact
/// rationals.
pub trait Field: Clone + Num + FromPrimitive + PartialOrd {}
impl<T: Clone + Num + FromPrimitive + PartialOrd> Field for T {}

fn lit<T: Field>(v: u128) -> T {
    T::from_u128(v).expect("coefficient representable")
}

fn sorted<T: Field>(xs: &[T]) -> Vec<T> {
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    v
}

fn sorted_f64(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

fn subset_mean<T: Field>(xs: &[T], idx: &[usize]) -> T {
    let sum = idx.iter().fold(T::zero(), |a, &i| a + xs[i].clone());
    sum / lit(idx.len() as u128)
}

fn mean<T: Field>(xs: &[T]) -> T {
    let all: Vec<usize> = (0..xs.len()).collect();
    subset_mean(xs, &all)
}

/// `f(a+b+c) + f(a) + f(b) + f(c)` against `f(a+b) + f(a+c) + f(b+c)`.
pub fn functional_hlawka_terms<T: Field>(f: &dyn Fn(&T) -> T, a: &T, b: &T, c: &T) -> Terms<T> {
    let v = sorted(&[a.clone(), b.clone(), c.clone()]);
    let (a, b, c) = (&v[0], &v[1], &v[2]);
    let s = |x: &T, y: &T| x.clone() + y.clone();
    Terms {
        lhs: vec![f(&(s(a, b) + c.clone())), f(a), f(b), f(c)],
        rhs: vec![f(&s(a, b)), f(&s(a, c)), f(&s(b, c))],
    }
}

/// Evaluator only: convexity alone does not make this margin nonnegative.
pub fn functional_hlawka(f: &ConvexFunction, a: f64, b: f64, c: f64) -> ScalarCheckResult {
    ScalarCheckResult::from_terms(&functional_hlawka_terms(&|x: &f64| f.eval(*x), &a, &b, &c))
}

/// `Σ f(x_i)` against `k f(mean)`.
pub fn jensen_terms<T: Field>(f: &dyn Fn(&T) -> T, xs: &[T]) -> Result<Terms<T>> {
    if xs.is_empty() {
        return Err(Error::Parameter(
            "jensen check needs at least one point".into(),
        ));
    }
    let xs = sorted(xs);
    Ok(Terms {
        lhs: xs.iter().map(f).collect(),
        rhs: vec![lit::<T>(xs.len() as u128) * f(&mean(&xs))],
    })
}

pub fn jensen_check(f: &ConvexFunction, xs: &[f64]) -> Result<ScalarCheckResult> {
    Ok(ScalarCheckResult::from_terms(&jensen_terms(
        &|x: &f64| f.eval(*x),
        &sorted_f64(xs),
    )?))
}

/// Three-point Popoviciu inequality.
pub fn popoviciu_terms<T: Field>(f: &dyn Fn(&T) -> T, x1: &T, x2: &T, x3: &T) -> Terms<T> {
    let v = sorted(&[x1.clone(), x2.clone(), x3.clone()]);
    let two: T = lit(2);
    let mut lhs: Vec<T> = v.iter().map(f).collect();
    lhs.push(lit::<T>(3) * f(&mean(&v)));
    let rhs = subsets(3, 2)
        .iter()
        .map(|p| two.clone() * f(&subset_mean(&v, p)))
        .collect();
    Terms { lhs, rhs }
}

pub fn popoviciu_check(f: &ConvexFunction, x1: f64, x2: f64, x3: f64) -> ScalarCheckResult {
    let v = sorted_f64(&[x1, x2, x3]);
    ScalarCheckResult::from_terms(&popoviciu_terms(&|x: &f64| f.eval(*x), &v[0], &v[1], &v[2]))
}

/// `Σ f(x_i) + n/(n-2) f(mean)` against `2/(n-2) Σ_{i<j} f((x_i+x_j)/2)`.
pub fn vasc_terms<T: Field>(f: &dyn Fn(&T) -> T, xs: &[T]) -> Result<Terms<T>> {
    let n = xs.len();
    if n < 3 {
        return Err(Error::Parameter(format!(
            "vasc check needs n >= 3, got {n}"
        )));
    }
    let xs = sorted(xs);
    let nm2: T = lit((n - 2) as u128);
    let mut lhs: Vec<T> = xs.iter().map(f).collect();
    lhs.push(lit::<T>(n as u128) / nm2.clone() * f(&mean(&xs)));
    let w = lit::<T>(2) / nm2;
    let rhs = subsets(n, 2)
        .iter()
        .map(|p| w.clone() * f(&subset_mean(&xs, p)))
        .collect();
    Ok(Terms { lhs, rhs })
}

pub fn vasc_check(f: &ConvexFunction, xs: &[f64]) -> Result<ScalarCheckResult> {
    Ok(ScalarCheckResult::from_terms(&vasc_terms(
        &|x: &f64| f.eval(*x),
        &sorted_f64(xs),
    )?))
}

/// `C(n-2,m-1) Σ f(x_i) + n C(n-2,m-2) f(mean)` against
/// `m Σ_{|I|=m} f(mean_I)`.
pub fn pcz_terms<T: Field>(f: &dyn Fn(&T) -> T, xs: &[T], m: usize) -> Result<Terms<T>> {
    let n = xs.len();
    if !(2 <= m && m < n) {
        return Err(Error::Parameter(format!(
            "pcz check needs 2 <= m < n, got m={m}, n={n}"
        )));
    }
    let xs = sorted(xs);
    let c1: T = lit(binomial(n - 2, m - 1));
    let c2: T = lit(n as u128 * binomial(n - 2, m - 2));
    let mut lhs: Vec<T> = xs.iter().map(|x| c1.clone() * f(x)).collect();
    lhs.push(c2 * f(&mean(&xs)));
    let w: T = lit(m as u128);
    let rhs = subsets(n, m)
        .iter()
        .map(|s| w.clone() * f(&subset_mean(&xs, s)))
        .collect();
    Ok(Terms { lhs, rhs })
}

pub fn pcz_check(f: &ConvexFunction, xs: &[f64], m: usize) -> Result<ScalarCheckResult> {
    Ok(ScalarCheckResult::from_terms(&pcz_terms(
        &|x: &f64| f.eval(*x),
        &sorted_f64(xs),
        m,
    )?))
}

/// Convex analogue of the alternating tensor inequality: subsets of odd
/// size `s` contribute `s f(mean_I)` to the left side, even sizes to the
/// right. Sizes run over `1..=n`, extending the printed `n = 4` pattern.
pub fn conjecture_hlawka_pop_terms<T: Field>(f: &dyn Fn(&T) -> T, xs: &[T]) -> Result<Terms<T>> {
    let n = xs.len();
    if n < 3 {
        return Err(Error::Parameter(format!(
            "conjecture evaluator needs n >= 3, got {n}"
        )));
    }
    let xs = sorted(xs);
    let mut terms = Terms {
        lhs: Vec::new(),
        rhs: Vec::new(),
    };
    for size in 1..=n {
        let w: T = lit(size as u128);
        let side = if size % 2 == 1 {
            &mut terms.lhs
        } else {
            &mut terms.rhs
        };
        for s in subsets(n, size) {
            side.push(w.clone() * f(&subset_mean(&xs, &s)));
        }
    }
    Ok(terms)
}

pub fn conjecture_hlawka_pop_eval(f: &ConvexFunction, xs: &[f64]) -> Result<ScalarCheckResult> {
    Ok(ScalarCheckResult::from_terms(&conjecture_hlawka_pop_terms(
        &|x: &f64| f.eval(*x),
        &sorted_f64(xs),
    )?))
}

/// Convex analogue of the three-level tensor inequality, with
/// `S_j ↦ Σ_{|I|=j} j f(mean_I)`. It only holds for some `(k, ell, m)`;
/// this is a measurement, not a check with a known direction.
pub fn levels_scalar_terms<T: Field>(
    f: &dyn Fn(&T) -> T,
    xs: &[T],
    k: usize,
    ell: usize,
    m: usize,
) -> Result<Terms<T>> {
    let n = xs.len();
    if !(1 <= k && k < ell && ell < m && m <= n) {
        return Err(Error::Parameter(format!(
            "need 1 <= k < ell < m <= n, got k={k}, ell={ell}, m={m}, n={n}"
        )));
    }
    let xs = sorted(xs);
    // (coef / (j C(n,j))) * j f(mean) = coef / C(n,j) * f(mean)
    let level = |j: usize, coef: usize| -> Vec<T> {
        let w = lit::<T>(coef as u128) / lit::<T>(binomial(n, j));
        subsets(n, j)
            .iter()
            .map(|s| w.clone() * f(&subset_mean(&xs, s)))
            .collect()
    };
    let mut lhs = level(k, m - ell);
    lhs.extend(level(m, ell - k));
    Ok(Terms {
        lhs,
        rhs: level(ell, m - k),
    })
}

pub fn levels_scalar_eval(
    f: &ConvexFunction,
    xs: &[f64],
    k: usize,
    ell: usize,
    m: usize,
) -> Result<ScalarCheckResult> {
    Ok(ScalarCheckResult::from_terms(&levels_scalar_terms(
        &|x: &f64| f.eval(*x),
        &sorted_f64(xs),
        k,
        ell,
        m,
    )?))
}
