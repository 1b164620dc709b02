use rbh_core::exact::Matrix;
use rbh_core::rb::catalog;
use rbh_core::rb::{ComplexKind, RbPair};

fn composite_vanishes(pair: &RbPair, kind: ComplexKind, n: usize) -> bool {
    let d0 = pair.coboundary_matrix(kind, n);
    let d1 = pair.coboundary_matrix(kind, n + 1);
    d1.mul(&d0).is_zero()
}

#[test]
fn corpus_has_twenty_pairs() {
    let corpus = catalog::corpus();
    assert!(corpus.len() >= 20, "corpus has {} pairs", corpus.len());
    for (_, p) in &corpus {
        assert!(p.dim_a() <= 3 && p.dim_m() <= 3);
    }
}

#[test]
fn differentials_square_to_zero() {
    for (name, pair) in catalog::corpus() {
        for n in 0..=2 {
            for kind in [ComplexKind::Alg, ComplexKind::Rbo, ComplexKind::Rba] {
                assert!(
                    composite_vanishes(&pair, kind, n),
                    "{name}: {kind:?} degree {n}"
                );
            }
        }
    }
}

#[test]
fn phi_is_a_chain_map() {
    for (name, pair) in catalog::corpus() {
        for n in 0..=2 {
            let lhs: Matrix = pair
                .phi_matrix(n + 1)
                .mul(&pair.coboundary_matrix(ComplexKind::Alg, n));
            let rhs = pair
                .coboundary_matrix(ComplexKind::Rbo, n)
                .mul(&pair.phi_matrix(n));
            assert_eq!(lhs, rhs, "{name}: degree {n}");
        }
    }
}

#[test]
fn explicit_and_derived_rbo_differentials_agree() {
    for (name, pair) in catalog::corpus() {
        for n in 0..=3 {
            assert_eq!(
                pair.coboundary_matrix(ComplexKind::Rbo, n),
                pair.partial_via_derived_matrix(n),
                "{name}: degree {n}"
            );
        }
    }
}

#[test]
fn phi_one_after_delta_zero_is_partial_zero() {
    for (name, pair) in catalog::corpus() {
        let lhs = pair
            .phi_matrix(1)
            .mul(&pair.coboundary_matrix(ComplexKind::Alg, 0));
        assert_eq!(lhs, pair.coboundary_matrix(ComplexKind::Rbo, 0), "{name}");
    }
}

#[test]
fn long_exact_sequence_is_exact() {
    for (name, pair) in catalog::corpus()
        .into_iter()
        .filter(|(_, p)| p.dim_a() <= 2)
    {
        let report = pair.les_check(2);
        assert!(report.exact, "{name}: {:?}", report.spots);
    }
}
