use std::cmp::Ordering;

use num::{One, Zero};
use rbh_core::exact::{int, Rational};
use rbh_core::operad::{compare, find_effective_divisor, Element, Generator, Monomial, RbInfinity};

fn weights() -> Vec<Rational> {
    vec![Rational::zero(), int(1), int(-1), int(2) / int(3)]
}

fn mono(s: &str) -> Monomial {
    s.parse().unwrap()
}

fn generators_up_to(n: usize) -> Vec<Generator> {
    let mut out = Vec::new();
    for k in 1..=n {
        out.push(Generator::t(k));
        if k >= 2 {
            out.push(Generator::m(k));
        }
    }
    out
}

#[test]
fn differential_squares_to_zero_on_generators() {
    for w in weights() {
        let op = RbInfinity::new(w.clone());
        for g in generators_up_to(5) {
            let d = op.generator_differential(g);
            let dd = op.differential(&d);
            assert!(dd.is_zero(), "∂² {g} at weight {w}: {dd}");
        }
    }
}

#[test]
fn low_arity_differentials_match_closed_forms() {
    let op = RbInfinity::new(int(5));
    let m3 = op.generator_differential(Generator::m(3));
    let mut want = Element::zero(3);
    want.add_term(mono("m2(m2(x1, x2), x3)"), int(1));
    want.add_term(mono("m2(x1, m2(x2, x3))"), int(-1));
    assert_eq!(m3, want);

    let t2 = op.generator_differential(Generator::t(2));
    let mut want = Element::zero(2);
    want.add_term(mono("T1(m2(T1(x1), x2))"), int(-1));
    want.add_term(mono("T1(m2(x1, T1(x2)))"), int(-1));
    want.add_term(mono("T1(m2(x1, x2))"), int(-5));
    want.add_term(mono("m2(T1(x1), T1(x2))"), int(1));
    assert_eq!(t2, want);

    assert_eq!(op.rb_relation_check(), Some((1, 1)));
}

#[test]
fn leading_terms_of_generator_differentials() {
    let op = RbInfinity::new(int(2));
    for n in 3..=6 {
        let d = op.generator_differential(Generator::m(n));
        let (m, c) = d.leading().unwrap();
        assert_eq!(
            m.to_string(),
            format!("{}", mono(&format!("m{}(m2(x1, x2){})", n - 1, tail(3, n))))
        );
        assert!(c.is_one());
    }
    for n in 2..=6 {
        let d = op.generator_differential(Generator::t(n));
        let (m, c) = d.leading().unwrap();
        let want = mono(&format!("T{}(m2(T1(x1), x2){})", n - 1, tail(3, n)));
        assert_eq!(*m, want);
        assert_eq!(*c, -Rational::one());
    }
}

fn tail(from: usize, to: usize) -> String {
    (from..=to).map(|k| format!(", x{k}")).collect()
}

#[test]
fn path_order_examples() {
    let a = mono("m2(T1(x1), x2)");
    let b = mono("m2(x1, T1(x2))");
    assert_eq!(compare(&a, &b), Ordering::Greater);
    assert_eq!(
        compare(&mono("T1(m2(x1, x2))"), &mono("m2(x1, x2)")),
        Ordering::Greater
    );
    // degree dominates paths
    assert_eq!(
        compare(&mono("m3(x1, x2, x3)"), &mono("m2(m2(T1(T1(x1)), x2), x3)")),
        Ordering::Greater
    );
    // arity dominates degree
    assert_eq!(
        compare(&mono("m2(x1, x2)"), &mono("T3(x1, x2, x3)")),
        Ordering::Less
    );
}

#[test]
fn worked_tree_builds_by_composition() {
    let g = |s: &str| Element::generator(s.parse::<Generator>().unwrap());
    let t = g("m3")
        .compose(1, &g("T4"))
        .unwrap()
        .compose(3, &g("m4"))
        .unwrap()
        .compose(9, &g("m2"))
        .unwrap()
        .compose(10, &g("T2"))
        .unwrap();
    assert_eq!(t.len(), 1);
    let (m, _) = t.terms().next().unwrap();
    assert_eq!(m.arity(), 11);
    assert_eq!(
        m.to_string(),
        "m3(T4(x1, x2, m4(x3, x4, x5, x6), x7), x8, m2(x9, T2(x10, x11)))"
    );
}

#[test]
fn koszul_sign_of_parallel_compositions() {
    let g = |s: &str| Element::generator(s.parse::<Generator>().unwrap());
    // (m2 ∘_1 m3) ∘_4 m3 versus (m2 ∘_2 m3) ∘_1 m3
    let a = g("m2")
        .compose(1, &g("m3"))
        .unwrap()
        .compose(4, &g("m3"))
        .unwrap();
    let b = g("m2")
        .compose(2, &g("m3"))
        .unwrap()
        .compose(1, &g("m3"))
        .unwrap();
    assert_eq!(a, b.scale(&int(-1)));
}

#[test]
fn effective_divisors_of_small_trees() {
    let d = find_effective_divisor(&mono("m2(m2(x1, x2), x3)")).unwrap();
    assert_eq!(d.generator, Generator::m(3));
    assert_eq!(d.omega, 0);
    let d = find_effective_divisor(&mono("m3(m2(m2(x1, x2), x3), x4, x5)")).unwrap();
    assert_eq!(d.generator, Generator::m(3));
    assert_eq!(d.vertex, 1);
    assert_eq!(d.omega, 1);
    let d = find_effective_divisor(&mono("T1(m2(T1(x1), x2))")).unwrap();
    assert_eq!(d.generator, Generator::t(2));
    assert!(find_effective_divisor(&mono("m2(x1, m2(x2, x3))")).is_none());
    assert!(find_effective_divisor(&mono("m3(x1, m2(m2(x2, x3), x4), x5)")).is_none());
}

/// `∂ℍ + ℍ∂ = Id` on every positive-degree monomial of arity ≤ 4 and
/// T-weight ≤ 4, and `ℍ` respects the truncation.
#[test]
fn homotopy_contracts_positive_degrees() {
    let mut checked = 0;
    for w in [int(1), Rational::zero(), int(-3)] {
        let op = RbInfinity::new(w);
        for n in 1..=4 {
            let slices = op.truncation(n, 4).unwrap();
            for (deg, monos) in &slices {
                if *deg == 0 {
                    continue;
                }
                for m in monos {
                    let h = op.homotopy_monomial(m).unwrap();
                    assert!(h.max_t_weight() <= 4, "{m}");
                    let dh = op.differential(&h);
                    let hd = op.homotopy(&op.differential_monomial(m)).unwrap();
                    let total = dh.plus(&hd);
                    assert_eq!(total, Element::monomial(m.clone()), "at {m}");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 1000, "{checked}");
}

#[test]
fn truncations_are_acyclic_in_positive_degrees() {
    let op = RbInfinity::new(int(1));
    for n in 1..=4 {
        for w in 0..=4 {
            let table = op.truncated_homology(n, w).unwrap();
            assert!(
                table.acyclic_in_positive_degrees(),
                "n={n} W={w}: {:?}",
                table.betti
            );
        }
    }
}

#[test]
fn degree_zero_homology_is_the_rota_baxter_operad() {
    for w in [int(1), Rational::zero()] {
        let op = RbInfinity::new(w);
        for n in 1..=3 {
            for cap in 0..=3 {
                assert!(op.degree_zero_image_is_ideal(n, cap).unwrap());
            }
        }
    }
}

#[test]
fn resource_guard_trips() {
    let op = RbInfinity::new(int(1)).with_max_monomials(50);
    assert!(op.truncation(4, 4).is_err());
}

#[test]
fn induction_step_on_effective_monomials() {
    let op = RbInfinity::new(int(2));
    let mut effective = 0;
    for n in 1..=4 {
        for monos in op.truncation(n, 3).unwrap().values() {
            for m in monos {
                let Some((bar_h, t_bar)) = op.split(m) else {
                    continue;
                };
                effective += 1;
                let rest = Element::monomial(m.clone()).minus(&t_bar);
                let lhs = op
                    .differential(&bar_h)
                    .plus(&op.homotopy(&op.differential(&rest)).unwrap());
                assert_eq!(lhs, rest, "at {m}");
            }
        }
    }
    assert!(effective > 100);
}

#[test]
fn grading_and_weight_behaviour() {
    let op = RbInfinity::new(int(-1));
    for n in 1..=4 {
        for (deg, monos) in op.truncation(n, 4).unwrap() {
            for m in &monos {
                for (x, _) in op.differential_monomial(m).terms() {
                    assert_eq!((x.arity(), x.degree() + 1), (n, deg));
                    assert!(x.t_weight() <= m.t_weight());
                }
                for (x, _) in op.homotopy_monomial(m).unwrap().terms() {
                    assert_eq!((x.arity(), x.degree()), (n, deg + 1));
                    assert!(x.t_weight() <= m.t_weight());
                }
            }
        }
    }
}

#[test]
fn order_is_total_on_slices() {
    let op = RbInfinity::new(int(1));
    for n in 1..=4 {
        for monos in op.truncation(n, 3).unwrap().values() {
            let mut sorted = monos.clone();
            sorted.sort_by(compare);
            for w in sorted.windows(2) {
                assert_eq!(compare(&w[0], &w[1]), Ordering::Less, "{} {}", w[0], w[1]);
            }
        }
    }
}
