use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rbh_core::deform::extension::{
    build_extension, canonical_maps, classify, extension_unchecked, is_algebra_morphism,
    isomorphism, ExtensionCocycle, ExtensionData, ExtensionError,
};
use rbh_core::deform::{
    apply_gauge, find_equivalence, random_jet, trivialize, DeformError, Flavor, Gauge, Jet,
};
use rbh_core::exact::{int, is_zero_vec, span_rank, EchelonBasis, Matrix, Rational};
use rbh_core::rb::{catalog, semidirect_product, ComplexKind, Multilinear, RbPair};

fn random_vec<R: Rng>(n: usize, rng: &mut R) -> Vec<Rational> {
    (0..n).map(|_| int(rng.gen_range(-2..=2))).collect()
}

fn same_span(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> bool {
    let mut e = EchelonBasis::new();
    for v in a {
        e.insert_dense(v);
    }
    a.len() == b.len() && span_rank(a) == a.len() && b.iter().all(|v| e.contains_dense(v))
}

fn small() -> Vec<rbh_core::rb::RbAlgebra> {
    catalog::weights()
        .iter()
        .flat_map(|w| catalog::algebras(w))
        .filter(|a| a.dim() <= 2)
        .collect()
}

fn random_gauge<R: Rng>(d: usize, order: usize, rng: &mut R) -> Gauge {
    Gauge::new(
        d,
        (0..order)
            .map(|_| Multilinear::from_vec(d, d, 1, random_vec(d * d, rng)))
            .collect(),
    )
}

#[test]
fn defect_is_coboundary_minus_obstruction() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for a in small() {
        let d2 = RbPair::regular(a.clone())
            .unwrap()
            .coboundary_matrix(ComplexKind::Rba, 2);
        for order in 0..=2 {
            let jet = random_jet(&a, Flavor::Full, order, &mut rng).unwrap();
            assert!(jet.is_valid());
            let o = jet.obstruction();
            for _ in 0..3 {
                let x = random_vec(d2.cols(), &mut rng);
                let mut j = jet.clone();
                j.push_vector(&x);
                let mut expected = d2.mul_vec(&x);
                for (e, v) in expected.iter_mut().zip(&o) {
                    *e -= v;
                }
                assert_eq!(j.defect(order + 1), expected);
            }
        }
    }
}

#[test]
fn infinitesimals_and_obstructions_are_cocycles() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for a in small() {
        let pair = RbPair::regular(a.clone()).unwrap();
        let jet = random_jet(&a, Flavor::Full, 3, &mut rng).unwrap();
        assert!(is_zero_vec(&pair.d(2, &jet.level_vector(1))));
        for k in 1..=3 {
            assert!(is_zero_vec(&pair.d(3, &jet.truncate(k).obstruction())));
        }
    }
}

#[test]
fn cohomological_and_linearized_extensions_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for a in small() {
        let jet = random_jet(&a, Flavor::Full, 1, &mut rng).unwrap();
        match (jet.extend(), jet.extend_linearized(Flavor::Full)) {
            (Ok(x), Ok(y)) => {
                assert!(same_span(&x.kernel, &y.kernel));
                let mut diff = x.particular.clone();
                for (p, q) in diff.iter_mut().zip(&y.particular) {
                    *p -= q;
                }
                let mut span = x.kernel.clone();
                let r = span_rank(&span);
                span.push(diff);
                assert_eq!(span_rank(&span), r);
                let mut j = jet.clone();
                j.push_vector(&x.particular);
                assert!(j.is_valid());
            }
            (Err(DeformError::Obstructed { class, .. }), Err(DeformError::Unsolvable(_))) => {
                assert!(class.cocycle);
                assert!(class.coordinates.iter().any(|c| !c.is_zero()));
            }
            other => panic!("routes disagree: {other:?}"),
        }
    }
}

#[test]
fn operator_and_product_only_first_order() {
    for a in small() {
        let pair = RbPair::regular(a.clone()).unwrap();
        let jet = Jet::new(a.clone());
        let op = jet.extend_linearized(Flavor::OperatorOnly).unwrap();
        assert!(is_zero_vec(&op.particular));
        assert!(same_span(
            &op.kernel,
            &pair.coboundary_matrix(ComplexKind::Rbo, 1).kernel_basis()
        ));
        let prod = jet.extend_linearized(Flavor::ProductOnly).unwrap();
        let delta = pair.coboundary_matrix(ComplexKind::Alg, 2);
        let phi = pair.phi_matrix(2);
        let both = delta.vstack(&phi);
        assert!(same_span(&prod.kernel, &both.kernel_basis()));
    }
}

#[test]
fn flavored_jets_are_valid() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for a in small() {
        for flavor in [Flavor::OperatorOnly, Flavor::ProductOnly] {
            if let Ok(j) = random_jet(&a, flavor, 3, &mut rng) {
                assert!(j.is_valid());
                for n in 1..=3 {
                    match flavor {
                        Flavor::OperatorOnly => assert!(j.mu(n).is_zero()),
                        _ => assert!(j.t(n).is_zero()),
                    }
                }
            }
        }
    }
}

#[test]
fn gauge_action_preserves_validity_and_is_recovered() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for a in small() {
        let d = a.dim();
        let pair = RbPair::regular(a.clone()).unwrap();
        let jet = random_jet(&a, Flavor::Full, 3, &mut rng).unwrap();
        let psi = random_gauge(d, 3, &mut rng);
        let moved = apply_gauge(&jet, &psi);
        assert!(moved.is_valid());
        assert_eq!(apply_gauge(&moved, &psi.inverse()), jet);
        assert_eq!(psi.then(&psi.inverse()), Gauge::identity(d, 3));
        let mut first = jet.level_vector(1);
        let mut x = psi.term(1).data;
        x.extend(vec![Rational::zero(); d]);
        for (f, v) in first.iter_mut().zip(pair.d(1, &x)) {
            *f += v;
        }
        assert_eq!(moved.level_vector(1), first);
        // derivations commuting with T are the freedom left at each order
        let freedom = pair
            .coboundary_matrix(ComplexKind::Alg, 1)
            .vstack(&pair.phi_matrix(1))
            .kernel_basis();
        match find_equivalence(&moved, &jet) {
            Ok(found) => assert_eq!(apply_gauge(&jet, &found), moved),
            Err(e) => assert!(!freedom.is_empty(), "{e}"),
        }
        assert_eq!(
            find_equivalence(&jet, &jet).map(|g| apply_gauge(&jet, &g)),
            Ok(jet.clone())
        );
    }
}

#[test]
fn inequivalent_jets_are_detected() {
    let w = int(1);
    let a = catalog::zero_operator(catalog::componentwise(1), &w);
    let mut b = Jet::new(a.clone());
    b.push(
        Multilinear::from_vec(1, 1, 2, vec![int(1)]),
        Multilinear::zeros(1, 1, 1),
    );
    assert!(b.is_valid());
    // rescaling the product is a coboundary
    assert!(find_equivalence(&b, &Jet::trivial(a.clone(), 1)).is_ok());
    let p = catalog::projection(2, &[0], &w);
    let pair = RbPair::regular(p.clone()).unwrap();
    let h2 = pair.cohomology(ComplexKind::Rba, 2);
    if let Some(rep) = h2.representatives.first() {
        let mut j = Jet::new(p.clone());
        j.push_vector(rep);
        assert!(matches!(
            find_equivalence(&j, &Jet::trivial(p, 1)),
            Err(DeformError::NotEquivalent(1))
        ));
    }
}

#[test]
fn rigid_structures_trivialize() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for w in catalog::weights().into_iter().filter(|w| !w.is_zero()) {
        for a in [
            catalog::zero_operator(catalog::componentwise(1), &w),
            catalog::scalar(catalog::componentwise(1), &w),
        ] {
            let pair = RbPair::regular(a.clone()).unwrap();
            assert_eq!(pair.cohomology(ComplexKind::Rba, 2).dimension, 0);
            for _ in 0..3 {
                let jet = random_jet(&a, Flavor::Full, 4, &mut rng).unwrap();
                let psi = trivialize(&jet).unwrap();
                assert_eq!(apply_gauge(&jet, &psi), Jet::trivial(a.clone(), 4));
            }
        }
    }
    let mut rigid = 0;
    for a in small() {
        let pair = RbPair::regular(a.clone()).unwrap();
        if pair.cohomology(ComplexKind::Rba, 2).dimension > 0 {
            continue;
        }
        rigid += 1;
        let jet = random_jet(&a, Flavor::Full, 3, &mut rng).unwrap();
        let psi = trivialize(&jet).unwrap();
        assert_eq!(apply_gauge(&jet, &psi), Jet::trivial(a, 3));
    }
    assert!(rigid >= 6, "{rigid}");
}

#[test]
fn nontrivial_classes_do_not_trivialize() {
    for a in small() {
        let pair = RbPair::regular(a.clone()).unwrap();
        let h2 = pair.cohomology(ComplexKind::Rba, 2);
        for rep in &h2.representatives {
            let mut j = Jet::new(a.clone());
            j.push_vector(rep);
            assert_eq!(trivialize(&j), Err(DeformError::NotTrivializable(1)));
        }
    }
}

fn random_cocycle<R: Rng>(pair: &RbPair, rng: &mut R) -> ExtensionCocycle {
    let d2 = pair.coboundary_matrix(ComplexKind::Rba, 2);
    let mut x = vec![Rational::zero(); d2.cols()];
    for k in d2.kernel_basis() {
        let c = int(rng.gen_range(-2..=2));
        for (a, b) in x.iter_mut().zip(&k) {
            *a += &c * b;
        }
    }
    ExtensionCocycle::from_vector(pair.dim_a(), pair.dim_m(), &x)
}

#[test]
fn extensions_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (name, pair) in catalog::corpus()
        .into_iter()
        .filter(|(_, p)| p.dim_a() <= 2)
    {
        let (da, dm) = (pair.dim_a(), pair.dim_m());
        let zero = build_extension(&pair, &ExtensionCocycle::zero(da, dm)).unwrap();
        assert_eq!(
            zero,
            semidirect_product(&pair.algebra, &pair.module),
            "{name}"
        );
        for _ in 0..3 {
            let c = random_cocycle(&pair, &mut rng);
            let ext = build_extension(&pair, &c).unwrap();
            let (inc, proj, sec) = canonical_maps(da, dm);
            let (module, back) = classify(&ExtensionData {
                total: &ext,
                base: &pair.algebra,
                inclusion: &inc,
                projection: &proj,
                section: &sec,
            })
            .unwrap();
            assert_eq!(module, pair.module, "{name}");
            assert_eq!(back, c, "{name}");
            // another section s' = s + i γ changes the cocycle by d^1(γ, 0)
            let gamma = Matrix::from_columns(
                dm,
                &(0..da)
                    .map(|_| random_vec(dm, &mut rng))
                    .collect::<Vec<_>>(),
            );
            let sec2 = sec.add(&inc.mul(&gamma));
            let (_, c2) = classify(&ExtensionData {
                total: &ext,
                base: &pair.algebra,
                inclusion: &inc,
                projection: &proj,
                section: &sec2,
            })
            .unwrap();
            let mut g = Multilinear::zeros(da, dm, 1);
            for a in 0..da {
                for m in 0..dm {
                    g.add_at(&[a], m, &gamma.get(m, a));
                }
            }
            let mut x = g.data.clone();
            x.extend(vec![Rational::zero(); dm]);
            let mut expected = c.to_vector();
            for (e, v) in expected.iter_mut().zip(pair.d(1, &x)) {
                *e += v;
            }
            assert_eq!(c2.to_vector(), expected, "{name}");
            let zeta = isomorphism(&pair, &c, &c2).unwrap();
            let ext2 = build_extension(&pair, &c2).unwrap();
            assert!(is_algebra_morphism(&zeta, &ext, &ext2), "{name}");
            assert_eq!(zeta.rank(), da + dm);
        }
    }
}

#[test]
fn non_cocycles_are_rejected() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut rejected = 0;
    for (name, pair) in catalog::corpus()
        .into_iter()
        .filter(|(_, p)| p.dim_a() <= 2)
    {
        let (da, dm) = (pair.dim_a(), pair.dim_m());
        for _ in 0..4 {
            let x = random_vec(da * da * dm + da * dm, &mut rng);
            let c = ExtensionCocycle::from_vector(da, dm, &x);
            let valid = c.is_cocycle(&pair);
            match build_extension(&pair, &c) {
                Ok(_) => assert!(valid, "{name}"),
                Err(ExtensionError::Axiom(e)) => {
                    assert!(!valid, "{name}");
                    assert!(extension_unchecked(&pair, &c).unwrap().validate() == Err(e));
                    rejected += 1;
                }
                Err(e) => panic!("{name}: {e}"),
            }
        }
    }
    assert!(rejected > 10);
}

#[test]
fn non_cohomologous_cocycles_have_no_isomorphism() {
    for (name, pair) in catalog::corpus()
        .into_iter()
        .filter(|(_, p)| p.dim_a() <= 2)
    {
        let h2 = pair.cohomology(ComplexKind::Rba, 2);
        let (da, dm) = (pair.dim_a(), pair.dim_m());
        for rep in &h2.representatives {
            let c = ExtensionCocycle::from_vector(da, dm, rep);
            assert!(
                isomorphism(&pair, &ExtensionCocycle::zero(da, dm), &c).is_none(),
                "{name}"
            );
        }
    }
}
