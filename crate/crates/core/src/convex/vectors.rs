use serde::{Deserialize, Serialize};

use super::checks::{ScalarCheckResult, Terms};
use crate::error::{Error, Result};
use crate::sums::{binomial, subsets};

/// `n` real vectors of a common dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorTuple {
    vectors: Vec<Vec<f64>>,
}

impl VectorTuple {
    pub fn new(vectors: Vec<Vec<f64>>) -> Result<Self> {
        let Some(first) = vectors.first() else {
            return Err(Error::Input("vector tuple is empty".into()));
        };
        let d = first.len();
        if d == 0 {
            return Err(Error::Input("vectors must have dimension >= 1".into()));
        }
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != d {
                return Err(Error::Input(format!(
                    "vector {i} has dimension {}, expected {d}",
                    v.len()
                )));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::Input(format!("vector {i} has a non-finite entry")));
            }
        }
        Ok(Self { vectors })
    }

    /// Splits a flat row-major buffer into `n` vectors of length `dim`.
    pub fn from_flat(flat: &[f64], dim: usize) -> Result<Self> {
        if dim == 0 || flat.len() % dim != 0 {
            return Err(Error::Input(format!(
                "{} values do not split into vectors of dimension {dim}",
                flat.len()
            )));
        }
        Self::new(flat.chunks(dim).map(<[f64]>::to_vec).collect())
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    fn canonical(&self) -> Vec<&[f64]> {
        let mut v: Vec<&[f64]> = self.vectors.iter().map(Vec::as_slice).collect();
        v.sort_by(|a, b| {
            a.iter()
                .zip(b.iter())
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        v
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    #[default]
    L2,
    Lp(f64),
}

impl Norm {
    pub fn validate(self) -> Result<Self> {
        match self {
            Norm::Lp(p) if !(p >= 1.0 && p.is_finite()) => Err(Error::Parameter(format!(
                "p-norm needs finite p >= 1, got {p}"
            ))),
            n => Ok(n),
        }
    }

    pub fn eval(self, v: &[f64]) -> f64 {
        match self {
            Norm::L2 => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            Norm::Lp(p) => v.iter().map(|x| x.abs().powf(p)).sum::<f64>().powf(1.0 / p),
        }
    }
}

fn subset_norm(norm: Norm, vs: &[&[f64]], idx: &[usize]) -> f64 {
    let mut acc = vec![0.0; vs[0].len()];
    for &i in idx {
        for (a, x) in acc.iter_mut().zip(vs[i]) {
            *a += x;
        }
    }
    norm.eval(&acc)
}

/// `‖a+b+c‖ + ‖a‖ + ‖b‖ + ‖c‖` against `‖a+b‖ + ‖a+c‖ + ‖b+c‖`, Euclidean.
pub fn norm_hlawka(a: &[f64], b: &[f64], c: &[f64]) -> Result<ScalarCheckResult> {
    let t = VectorTuple::new(vec![a.to_vec(), b.to_vec(), c.to_vec()])?;
    radu_check(&t, 2)
}

/// Alternating sum over all nonempty subsets: odd sizes on the left, even
/// sizes on the right, each term the norm of the subset sum.
pub fn freudenthal_alternating(tuple: &VectorTuple) -> Result<ScalarCheckResult> {
    let n = tuple.len();
    if n < 3 {
        return Err(Error::Parameter(format!(
            "alternating norm sum needs n >= 3, got {n}"
        )));
    }
    let vs = tuple.canonical();
    let mut terms = Terms {
        lhs: Vec::new(),
        rhs: Vec::new(),
    };
    for size in 1..=n {
        let side = if size % 2 == 1 {
            &mut terms.lhs
        } else {
            &mut terms.rhs
        };
        side.extend(
            subsets(n, size)
                .iter()
                .map(|s| subset_norm(Norm::L2, &vs, s)),
        );
    }
    Ok(ScalarCheckResult::from_terms(&terms))
}

/// `C(n-2,k-1) Σ‖a_i‖ + C(n-2,k-2) ‖Σ a_i‖` against `Σ_{|I|=k} ‖Σ_I a_i‖`.
pub fn radu_check(tuple: &VectorTuple, k: usize) -> Result<ScalarCheckResult> {
    radu_check_with_norm(tuple, k, Norm::L2)
}

pub fn radu_check_with_norm(
    tuple: &VectorTuple,
    k: usize,
    norm: Norm,
) -> Result<ScalarCheckResult> {
    let norm = norm.validate()?;
    let n = tuple.len();
    if n < 3 || !(2..=n).contains(&k) {
        return Err(Error::Parameter(format!(
            "need n >= 3 and 2 <= k <= n, got n={n}, k={k}"
        )));
    }
    let vs = tuple.canonical();
    let c1 = binomial(n - 2, k - 1) as f64;
    let c2 = binomial(n - 2, k - 2) as f64;
    let mut lhs: Vec<f64> = vs.iter().map(|v| c1 * norm.eval(v)).collect();
    let all: Vec<usize> = (0..n).collect();
    lhs.push(c2 * subset_norm(norm, &vs, &all));
    let rhs = subsets(n, k)
        .iter()
        .map(|s| subset_norm(norm, &vs, s))
        .collect();
    Ok(ScalarCheckResult::from_terms(&Terms { lhs, rhs }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn gaussian(rng: &mut ChaCha8Rng, n: usize, d: usize) -> VectorTuple {
        VectorTuple::new(
            (0..n)
                .map(|_| (0..d).map(|_| rng.sample(StandardNormal)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn random_orthogonal(rng: &mut ChaCha8Rng, d: usize) -> DMatrix<f64> {
        let g = DMatrix::from_fn(d, d, |_, _| rng.sample::<f64, _>(StandardNormal));
        g.qr().q()
    }

    #[test]
    fn hlawka_trivial_cases() {
        let z = [0.0; 3];
        assert_eq!(norm_hlawka(&z, &z, &z).unwrap().margin, 0.0);
        let e = [1.0, 0.0, 0.0];
        let r = norm_hlawka(&e, &e, &e).unwrap();
        assert_eq!((r.lhs, r.rhs, r.margin), (6.0, 6.0, 0.0));
        assert!(norm_hlawka(&[1.0], &[1.0, 2.0], &[0.0]).is_err());
    }

    #[test]
    fn n3_equivalences() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let t = gaussian(&mut rng, 3, 4);
            let v = t.vectors();
            let h = norm_hlawka(&v[0], &v[1], &v[2]).unwrap();
            let f = freudenthal_alternating(&t).unwrap();
            let r = radu_check(&t, 2).unwrap();
            assert!((h.margin - f.margin).abs() <= 1e-14 * h.scale);
            assert_eq!(h, r);
        }
    }

    #[test]
    fn all_equal_n4_alternating_is_zero() {
        let a = vec![0.3, -1.1];
        let t = VectorTuple::new(vec![a.clone(); 4]).unwrap();
        let r = freudenthal_alternating(&t).unwrap();
        assert!(r.margin.abs() < 1e-13 * r.scale);
    }

    #[test]
    fn radu_zero_and_ranges() {
        let t = VectorTuple::new(vec![vec![0.0; 2]; 4]).unwrap();
        for k in 2..=4 {
            assert_eq!(radu_check(&t, k).unwrap().margin, 0.0);
        }
        assert!(radu_check(&t, 1).is_err());
        assert!(radu_check(&t, 5).is_err());
        assert!(radu_check_with_norm(&t, 2, Norm::Lp(0.5)).is_err());
    }

    #[test]
    fn random_hlawka_and_radu_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let t = gaussian(&mut rng, 3, 3);
            assert!(freudenthal_alternating(&t).unwrap().holds);
        }
        for n in 4..=5 {
            for _ in 0..100 {
                let t = gaussian(&mut rng, n, 3);
                for k in 2..=n {
                    assert!(radu_check(&t, k).unwrap().holds);
                    assert!(radu_check_with_norm(&t, k, Norm::Lp(3.0)).unwrap().holds);
                }
            }
        }
    }

    #[test]
    fn rotation_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let t = gaussian(&mut rng, 4, 3);
            let q = random_orthogonal(&mut rng, 3);
            let rotated = VectorTuple::new(
                t.vectors()
                    .iter()
                    .map(|v| {
                        (&q * nalgebra::DVector::from_column_slice(v))
                            .as_slice()
                            .to_vec()
                    })
                    .collect(),
            )
            .unwrap();
            let a = freudenthal_alternating(&t).unwrap();
            let b = freudenthal_alternating(&rotated).unwrap();
            assert!((a.margin - b.margin).abs() <= 1e-10 * a.scale);
            for k in 2..=4 {
                let a = radu_check(&t, k).unwrap();
                let b = radu_check(&rotated, k).unwrap();
                assert!((a.margin - b.margin).abs() <= 1e-10 * a.scale);
            }
        }
    }

    #[test]
    fn permutation_invariance_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let t = gaussian(&mut rng, 5, 2);
        let mut rev = t.vectors().to_vec();
        rev.reverse();
        let r = VectorTuple::new(rev).unwrap();
        assert_eq!(
            freudenthal_alternating(&t).unwrap(),
            freudenthal_alternating(&r).unwrap()
        );
        assert_eq!(radu_check(&t, 3).unwrap(), radu_check(&r, 3).unwrap());
    }
}
