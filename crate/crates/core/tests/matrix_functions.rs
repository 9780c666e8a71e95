use hlawka_core::gmf::scalar::scalar_inequality_check;
use hlawka_core::gmf::{
    class_size, determinant, enumerate_group, generalized_matrix_function, mn_character,
    partitions_of, permanent_oracle, CharacterSpec, CycleType, GroupSpec, Partition,
    PreparedFunction,
};
use hlawka_core::linalg::{random_pd, ComplexMatrix, HermitianMatrix, PdSampleConfig};
use hlawka_core::seed::derive_seed;
use hlawka_core::sums::{FamilyId, TensorSumParams};
use hlawka_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_complex(rng: &mut ChaCha8Rng, m: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(m, m, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

fn rel_err(a: Complex64, b: Complex64, scale: f64) -> f64 {
    (a - b).norm() / scale.max(b.norm()).max(1e-300)
}

/// Product-of-absolute-entries bound on any generalized matrix function.
fn entry_scale(x: &ComplexMatrix) -> f64 {
    let m = x.nrows();
    let row_max: f64 = (0..m)
        .map(|i| (0..m).map(|j| x[(i, j)].norm()).fold(0.0, f64::max))
        .product();
    row_max.max(1.0)
}

#[test]
fn sign_and_trivial_match_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for m in 2..=5 {
        let det =
            PreparedFunction::new(&GroupSpec::FullSymmetric(m), &CharacterSpec::Sign).unwrap();
        let per =
            PreparedFunction::new(&GroupSpec::FullSymmetric(m), &CharacterSpec::Trivial).unwrap();
        for _ in 0..200 {
            let x = random_complex(&mut rng, m);
            let s = entry_scale(&x);
            assert!(rel_err(det.eval(&x).unwrap(), determinant(&x).unwrap(), s) <= 1e-10);
            assert!(rel_err(per.eval(&x).unwrap(), permanent_oracle(&x).unwrap(), s) <= 1e-10);
        }
    }
}

#[test]
fn character_orthogonality_is_exact() {
    for m in 1..=5 {
        let group = enumerate_group(&GroupSpec::FullSymmetric(m)).unwrap();
        let types: Vec<CycleType> = group.iter().map(|g| g.cycle_type()).collect();
        let parts = partitions_of(m);
        for a in &parts {
            for b in &parts {
                let sum: i64 = types
                    .iter()
                    .map(|t| mn_character(a, t).unwrap() * mn_character(b, t).unwrap())
                    .sum();
                assert_eq!(sum, if a == b { group.len() as i64 } else { 0 });
            }
        }
        let total: u128 = parts
            .iter()
            .map(|p| class_size(&CycleType(p.clone())))
            .sum();
        assert_eq!(total, group.len() as u128);
    }
}

#[test]
fn immanant_of_identity() {
    let i3 = ComplexMatrix::identity(3, 3);
    let lambda: Partition = "2,1".parse().unwrap();
    let v = generalized_matrix_function(
        &i3,
        &GroupSpec::FullSymmetric(3),
        &CharacterSpec::Partition(lambda),
    )
    .unwrap();
    assert_eq!(v, Complex64::new(2.0, 0.0));
    let ones = ComplexMatrix::from_element(3, 3, Complex64::new(1.0, 0.0));
    let v =
        generalized_matrix_function(&ones, &GroupSpec::FullSymmetric(3), &CharacterSpec::Trivial)
            .unwrap();
    assert_eq!(v, Complex64::new(6.0, 0.0));
}

#[test]
fn immanants_of_psd_matrices_are_nonnegative() {
    for m in 2..=4 {
        for lambda in partitions_of(m) {
            let f = PreparedFunction::new(
                &GroupSpec::FullSymmetric(m),
                &CharacterSpec::Partition(lambda),
            )
            .unwrap();
            for seed in 0..20 {
                let x = random_pd(&PdSampleConfig::new(m, seed)).unwrap();
                let v = f.eval(x.as_matrix()).unwrap();
                let s = entry_scale(x.as_matrix()) * f.order() as f64;
                assert!(v.im.abs() <= 1e-10 * s);
                assert!(v.re >= -1e-10 * s);
            }
        }
    }
}

#[test]
fn scalar_corollaries_hold() {
    let lambda: Partition = "2,1".parse().unwrap();
    let chars = [
        CharacterSpec::Sign,
        CharacterSpec::Trivial,
        CharacterSpec::Partition(lambda),
    ];
    let group = GroupSpec::FullSymmetric(3);
    for seed in 0..30 {
        for n in [3usize, 4] {
            let mats: Vec<HermitianMatrix> = (0..n)
                .map(|i| random_pd(&PdSampleConfig::new(3, derive_seed(seed, i as u64))).unwrap())
                .collect();
            let families: &[FamilyId] = if n == 3 {
                &[FamilyId::Hlawka3, FamilyId::Supermod, FamilyId::Alternating]
            } else {
                &[FamilyId::Alternating, FamilyId::PopPairs]
            };
            for chi in &chars {
                for &fam in families {
                    let r = scalar_inequality_check(
                        fam,
                        &mats,
                        &TensorSumParams::default(),
                        &group,
                        chi,
                    )
                    .unwrap();
                    assert!(r.holds, "{fam} {} margin {}", chi.label(), r.margin);
                }
            }
        }
    }
}
