use std::sync::Arc;

use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rbh_core::brace::Shift;
use rbh_core::exact::{int, Rational};
use rbh_core::graded::GradedSpace;
use rbh_core::linfty::{mc_element, mc_from_rb, sweep, RbaElement, RbaLInfinity, RboDgla};
use rbh_core::rb::catalog;
use rbh_core::rb::{Algebra, ComplexKind, LinearMap, Multilinear, RbAlgebra, RbPair};

fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = int(1);
    v
}

/// Element of `𝔠_RBA` for `(f, g) ∈ C^n_RBA`, `f` of arity `n`, `g` of arity `n - 1`.
fn embed(space: &Arc<GradedSpace>, n: usize, x: &[Rational]) -> RbaElement {
    let d = space.dim();
    let split = d.pow(n as u32 + 1);
    let f = Multilinear::from_vec(d, d, n, x[..split].to_vec());
    let mut out = RbaElement::from_alg(f.to_cochain(space, Shift::Suspended));
    if n >= 1 {
        let g = Multilinear::from_vec(d, d, n - 1, x[split..].to_vec());
        out.rbo = g.to_cochain(space, Shift::Plain);
    }
    out
}

fn extract(e: &RbaElement, n: usize) -> Vec<Rational> {
    let mut v = Multilinear::from_cochain(&e.alg, n).data;
    if n >= 1 {
        v.extend(Multilinear::from_cochain(&e.rbo, n - 1).data);
    }
    v
}

#[test]
fn generalized_jacobi_on_random_tuples() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (space, w) in [
        (GradedSpace::ungraded(2), int(1)),
        (
            GradedSpace::new(vec![0, 1]),
            Rational::new(1.into(), 2.into()),
        ),
        (GradedSpace::new(vec![0, -1]), int(-1)),
    ] {
        let l = RbaLInfinity::new(Arc::new(space), w);
        let report = sweep(&l, 2, 4, 6, &mut rng);
        assert!(report.passed(), "{:?}", report.failures);
    }
}

#[test]
fn mc_elements_are_exactly_rota_baxter_algebras() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut rb, mut not_rb) = (0, 0);
    for w in catalog::weights() {
        for a in catalog::algebras(&w) {
            let space = a.space();
            let d = a.dim();
            let l = RbaLInfinity::new(space.clone(), w.clone());
            for trial in 0..6 {
                let mut op = a.operator().entries().to_vec();
                if trial > 0 {
                    let k = rng.gen_range(0..op.len());
                    op[k] += int(rng.gen_range(-1..=1));
                }
                let mut mult = a.algebra().structure_constants().to_vec();
                if trial % 3 == 2 {
                    let k = rng.gen_range(0..mult.len());
                    mult[k] += int(1);
                }
                let alg = Algebra::unchecked(d, mult).unwrap();
                let op = LinearMap::new(d, op).unwrap();
                let valid = alg.check_associative().is_ok()
                    && RbAlgebra::unchecked(alg.clone(), op.clone(), w.clone())
                        .unwrap()
                        .check_rota_baxter()
                        .is_ok();
                let alpha = mc_element(&space, &alg, &op);
                assert_eq!(l.is_maurer_cartan(&alpha).unwrap(), valid);
                if valid {
                    rb += 1;
                } else {
                    not_rb += 1;
                }
            }
        }
    }
    assert!(rb > 10 && not_rb > 10, "{rb} {not_rb}");
}

#[test]
fn twisted_differential_is_minus_the_cone_differential() {
    for w in catalog::weights() {
        for a in catalog::algebras(&w).into_iter().filter(|a| a.dim() <= 2) {
            let space = a.space();
            let l = RbaLInfinity::new(space.clone(), w.clone());
            let alpha = mc_from_rb(&a);
            let pair = RbPair::regular(a.clone()).unwrap();
            for n in 0..=2 {
                let dim = pair.complex_dim(ComplexKind::Rba, n);
                for j in 0..dim {
                    let x = unit(dim, j);
                    let twisted = l.twisted(&alpha, &[embed(&space, n, &x)]).unwrap();
                    let expected: Vec<Rational> = pair.d(n, &x).into_iter().map(|v| -v).collect();
                    assert_eq!(extract(&twisted, n + 1), expected, "degree {n} basis {j}");
                }
            }
        }
    }
}

#[test]
fn explicit_dgla_agrees_with_twisting() {
    for w in catalog::weights() {
        for a in catalog::algebras(&w).into_iter().filter(|a| a.dim() <= 2) {
            let space = a.space();
            let d = a.dim();
            let l = RbaLInfinity::new(space.clone(), w.clone());
            let m_only = mc_element(&space, a.algebra(), &LinearMap::zero(d));
            let dgla = RboDgla::new(a.algebra(), w.clone());
            let tau = Multilinear::from_vec(d, d, 1, a.operator().entries().to_vec())
                .to_cochain(&space, Shift::Plain);
            assert!(dgla.mc_lhs(&tau).is_zero());
            let mut gs = Vec::new();
            for arity in 0..=2 {
                for k in 0..d.pow(arity as u32 + 1) {
                    let mut v = vec![Rational::zero(); d.pow(arity as u32 + 1)];
                    v[k] = int(1);
                    gs.push(Multilinear::from_vec(d, d, arity, v).to_cochain(&space, Shift::Plain));
                }
            }
            for f in &gs {
                let tw = l
                    .twisted(&m_only, &[RbaElement::from_rbo(f.clone())])
                    .unwrap();
                assert!(tw.alg.is_zero());
                assert_eq!(tw.rbo, dgla.l1(f));
                for g in gs.iter().take(6) {
                    let args = [
                        RbaElement::from_rbo(f.clone()),
                        RbaElement::from_rbo(g.clone()),
                    ];
                    let tw = l.twisted(&m_only, &args).unwrap();
                    assert_eq!(tw.rbo, dgla.l2(f, g));
                }
            }
        }
    }
}

#[test]
fn twisted_rbo_differential_matches_partial() {
    for w in catalog::weights() {
        for a in catalog::algebras(&w).into_iter().filter(|a| a.dim() <= 2) {
            let space = a.space();
            let d = a.dim();
            let dgla = RboDgla::new(a.algebra(), w.clone());
            let tau = Multilinear::from_vec(d, d, 1, a.operator().entries().to_vec())
                .to_cochain(&space, Shift::Plain);
            let pair = RbPair::regular(a.clone()).unwrap();
            for n in 0..=2 {
                for k in 0..d.pow(n as u32 + 1) {
                    let f = Multilinear::from_vec(d, d, n, unit(d.pow(n as u32 + 1), k));
                    let got = dgla.twisted_l1(&tau, &f.to_cochain(&space, Shift::Plain));
                    let got = Multilinear::from_cochain(&got, n + 1);
                    let want = pair.partial(n, &f);
                    assert_eq!(got.data, want.data, "degree {n}");
                }
            }
        }
    }
}
