use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rbh_core::brace::{gerstenhaber, pre_jacobi_rhs};
use rbh_core::exact::{int, is_zero_vec, Matrix, Rational};
use rbh_core::graded::{
    chi_sign, compose, epsilon_sign, factor_permutation, is_shuffle, parity_sign, permute, sgn,
    GradedSpace,
};
use rbh_core::operad::RbInfinity;
use rbh_core::suites::random_cochain;

fn perm_and_degrees() -> impl Strategy<Value = (Vec<usize>, Vec<usize>, Vec<i32>)> {
    (0usize..=6).prop_flat_map(|n| {
        let id: Vec<usize> = (0..n).collect();
        (
            Just(id.clone()).prop_shuffle(),
            Just(id).prop_shuffle(),
            prop::collection::vec(-2i32..=3, n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn epsilon_is_a_cocycle((sigma, tau, x) in perm_and_degrees()) {
        let both = compose(&sigma, &tau);
        prop_assert_eq!(
            epsilon_sign(&both, &x),
            epsilon_sign(&sigma, &x) * epsilon_sign(&tau, &permute(&sigma, &x))
        );
        prop_assert_eq!(chi_sign(&sigma, &x), sgn(&sigma) * epsilon_sign(&sigma, &x));
    }

    #[test]
    fn factorization_and_shuffle_signs((delta, _t, x) in perm_and_degrees(), cut in 0usize..=6) {
        let n = delta.len();
        prop_assume!(n >= 2);
        let i = 1 + cut % (n - 1);
        let (sigma, tau, pi) = factor_permutation(&delta, i);
        prop_assert!(is_shuffle(&sigma, i));
        for l in 0..i {
            prop_assert_eq!(delta[l], sigma[tau[l]]);
        }
        for m in 0..n - i {
            prop_assert_eq!(delta[i + m], sigma[i + pi[m]]);
        }
        let xs = permute(&sigma, &x);
        prop_assert_eq!(
            chi_sign(&delta, &x),
            chi_sign(&sigma, &x) * chi_sign(&pi, &xs[i..]) * chi_sign(&tau, &xs[..i])
        );
    }

    #[test]
    fn rank_nullity_and_solve(entries in prop::collection::vec((0usize..5, 0usize..6, -3i64..=3), 0..14)) {
        let m = Matrix::from_triplets(5, 6, entries.into_iter().map(|(r, c, v)| (r, c, int(v))));
        let kernel = m.kernel_basis();
        prop_assert_eq!(m.rank() + kernel.len(), 6);
        for k in &kernel {
            prop_assert!(is_zero_vec(&m.mul_vec(k)));
        }
        let x: Vec<Rational> = (0..6).map(|k| int(k as i64 - 2)).collect();
        let b = m.mul_vec(&x);
        let y = m.solve(&b).expect("b is in the image");
        prop_assert_eq!(m.mul_vec(&y), b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pre_jacobi_on_random_cochains(seed in any::<u64>(), degrees in prop::collection::vec(0i32..=1, 1..=2), m in 1usize..=2, n in 1usize..=2) {
        let space = Arc::new(GradedSpace::new(degrees));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = |a| random_cochain(&space, a, &mut rng);
        let f = draw(2);
        let gs: Vec<_> = (0..m).map(|k| draw(1 + k % 2)).collect();
        let hs: Vec<_> = (0..n).map(|k| draw(2 - k % 2)).collect();
        let gr: Vec<_> = gs.iter().collect();
        let hr: Vec<_> = hs.iter().collect();
        prop_assert_eq!(f.brace(&gr).brace(&hr), pre_jacobi_rhs(&f, &gr, &hr));
    }

    #[test]
    fn gerstenhaber_is_graded_lie(seed in any::<u64>(), degrees in prop::collection::vec(0i32..=1, 1..=2), arities in (1usize..=2, 1usize..=2, 1usize..=2)) {
        let space = Arc::new(GradedSpace::new(degrees));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_cochain(&space, arities.0, &mut rng);
        let g = random_cochain(&space, arities.1, &mut rng);
        let h = random_cochain(&space, arities.2, &mut rng);
        let d = |c: &rbh_core::brace::Cochain| i64::from(c.degree().unwrap());
        let s = |e: i64| int(i64::from(parity_sign(e)));
        let (df, dg, dh) = (d(&f), d(&g), d(&h));
        prop_assert!(gerstenhaber(&f, &g).plus(&gerstenhaber(&g, &f).scale(&s(df * dg))).is_zero());
        let jac = gerstenhaber(&f, &gerstenhaber(&g, &h)).scale(&s(df * dh))
            .plus(&gerstenhaber(&g, &gerstenhaber(&h, &f)).scale(&s(dg * df)))
            .plus(&gerstenhaber(&h, &gerstenhaber(&f, &g)).scale(&s(dh * dg)));
        prop_assert!(jac.is_zero());
    }

    #[test]
    fn differential_squares_to_zero_on_monomials(arity in 1usize..=4, weight in 0usize..=3, pick in any::<prop::sample::Index>(), lambda in -2i64..=2) {
        let op = RbInfinity::new(int(lambda));
        let all: Vec<_> = op.truncation(arity, weight).unwrap().into_values().flatten().collect();
        let m = pick.get(&all);
        prop_assert!(op.differential(&op.differential_monomial(m)).is_zero());
    }
}
