use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use glq::classcalc::{enumerate_modified_types, multiply_class_sums, Bounds};
use glq::gltype::{class_size, modified_type_of, reflection_length};
use glq::stablecenter::fit_polynomial_in_q;
use glq::{Field, GlType, Matrix};

fn small_product() -> impl Strategy<Value = (u32, usize, usize, usize)> {
    (prop::sample::select(vec![2u32, 3]), 2usize..=3, any::<prop::sample::Index>(), any::<prop::sample::Index>())
        .prop_map(|(q, n, a, b)| {
            let f = Field::from_order(q).unwrap();
            let len = enumerate_modified_types(2, n, &f).len();
            (q, n, a.index(len), b.index(len))
        })
}

fn types(q: u32, n: usize) -> (Field, Vec<GlType>) {
    let f = Field::from_order(q).unwrap();
    let t = enumerate_modified_types(2, n, &f);
    (f, t)
}

fn random_matrix(q: u32, n: usize, seed: u64) -> (Field, Matrix, Matrix) {
    let f = Field::from_order(q).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = Matrix::random_invertible(n, &f, &mut rng);
    let z = Matrix::random_invertible(n, &f, &mut rng);
    (f, g, z)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn class_sums_commute((q, n, a, b) in small_product()) {
        let (f, t) = types(q, n);
        let bounds = Bounds::default();
        let ab = multiply_class_sums(&t[a], &t[b], n, &f, &bounds).unwrap();
        let ba = multiply_class_sums(&t[b], &t[a], n, &f, &bounds).unwrap();
        prop_assert_eq!(ab.terms, ba.terms);
    }

    #[test]
    fn products_respect_norm_and_determinant((q, n, a, b) in small_product()) {
        let (f, t) = types(q, n);
        let exp = multiply_class_sums(&t[a], &t[b], n, &f, &Bounds::default()).unwrap();
        let det = f.mul(t[a].determinant(&f), t[b].determinant(&f));
        let mut weighted = BigUint::from(0u32);
        for (nu, c) in &exp.terms {
            prop_assert!(nu.norm() <= t[a].norm() + t[b].norm());
            prop_assert_eq!(nu.determinant(&f), det);
            weighted += c * class_size(nu, n, &f).unwrap();
        }
        let pairs = class_size(&t[a], n, &f).unwrap() * class_size(&t[b], n, &f).unwrap();
        prop_assert_eq!(weighted, pairs);
    }

    #[test]
    fn reflection_length_is_subadditive(q in prop::sample::select(vec![2u32, 3, 5]), n in 1usize..=5, seed: u64) {
        let (f, g, h) = random_matrix(q, n, seed);
        let gh = g.mul(&h, &f).unwrap();
        let (lg, lh, lgh) = (
            reflection_length(&g, &f).unwrap(),
            reflection_length(&h, &f).unwrap(),
            reflection_length(&gh, &f).unwrap(),
        );
        prop_assert!(lgh <= lg + lh);
        prop_assert_eq!(lg, g.minus_identity(&f).rank(&f));
    }

    #[test]
    fn modified_type_is_a_class_invariant(q in prop::sample::select(vec![2u32, 3, 4, 5]), n in 1usize..=5, seed: u64) {
        let (f, g, z) = random_matrix(q, n, seed);
        let conj = z.mul(&g, &f).unwrap().mul(&z.inverse(&f).unwrap(), &f).unwrap();
        prop_assert_eq!(modified_type_of(&conj, &f).unwrap(), modified_type_of(&g, &f).unwrap());
    }

    #[test]
    fn fit_recovers_integer_polynomials(coeffs in prop::collection::vec(-20i64..=20, 1..=4)) {
        let eval = |q: i64| coeffs.iter().rev().fold(0i64, |acc, c| acc * q + c);
        let qs: Vec<u64> = [2u64, 3, 4, 5, 7, 8, 9].into_iter().take(coeffs.len() + 1).collect();
        // Shift so every value is a nonnegative count.
        let offset = qs.iter().map(|&q| eval(q as i64)).min().unwrap().min(0).abs();
        let points: Vec<(u64, BigUint)> =
            qs.iter().map(|&q| (q, BigUint::from((eval(q as i64) + offset) as u64))).collect();
        let fit = fit_polynomial_in_q(&points).unwrap();
        prop_assert!(fit.all_integer);
        for x in [0i64, 1, 6, 11] {
            let want = BigRational::from_integer(BigInt::from(eval(x) + offset));
            prop_assert_eq!(fit.evaluate(&BigRational::from_integer(BigInt::from(x))), want);
        }
    }
}
