//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the report is always printed.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rbh_core::brace::{Cochain, Shift};
use rbh_core::deform::extension::{
    build_extension, canonical_maps, classify, is_algebra_morphism, isomorphism, ExtensionCocycle,
    ExtensionData, ExtensionError,
};
use rbh_core::deform::{apply_gauge, random_jet, trivialize, Flavor, Gauge, Jet};
use rbh_core::exact::{int, is_zero_vec, Rational};
use rbh_core::graded::GradedSpace;
use rbh_core::linfty::homotopy::{ainfinity_morphism_defect, random_acyclic, HomotopyRb};
use rbh_core::linfty::{mc_element, mc_from_rb, RbaElement, RbaLInfinity};
use rbh_core::operad::{Element, Generator, RbInfinity};
use rbh_core::rb::{catalog, Algebra, ComplexKind, LinearMap, Multilinear, RbAlgebra, RbPair};
use rbh_core::suites;

type Outcome = Result<String, String>;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn c1_signs() -> Outcome {
    let r = suites::signs(4, 2);
    ensure(r.passed(), || {
        format!(
            "{} failures, first {:?}",
            r.failures.len(),
            r.failures.first()
        )
    })?;
    Ok(format!("{} exact checks", r.checked))
}

fn c2_complexes() -> Outcome {
    let corpus = catalog::corpus();
    ensure(corpus.len() >= 20, || {
        format!("corpus has {} pairs", corpus.len())
    })?;
    let mut checked = 0;
    for (name, pair) in &corpus {
        ensure(pair.dim_a() <= 3 && pair.dim_m() <= 3, || {
            format!("{name}: too large")
        })?;
        for n in 0..=3 {
            for kind in [ComplexKind::Alg, ComplexKind::Rbo, ComplexKind::Rba] {
                let dd = pair
                    .coboundary_matrix(kind, n + 1)
                    .mul(&pair.coboundary_matrix(kind, n));
                ensure(dd.is_zero(), || {
                    format!("{name}: {kind:?} squares to nonzero in degree {n}")
                })?;
                checked += 1;
            }
            let lhs = pair
                .phi_matrix(n + 1)
                .mul(&pair.coboundary_matrix(ComplexKind::Alg, n));
            let rhs = pair
                .coboundary_matrix(ComplexKind::Rbo, n)
                .mul(&pair.phi_matrix(n));
            ensure(lhs == rhs, || {
                format!("{name}: Φ is not a chain map in degree {n}")
            })?;
            checked += 1;
        }
    }
    Ok(format!(
        "{} pairs, {checked} matrix identities",
        corpus.len()
    ))
}

fn c3_linfty() -> Outcome {
    let r = suites::linfty(0, 60, 2, 3, 5);
    ensure(r.passed(), || {
        format!(
            "{} failures, first {:?}",
            r.failures.len(),
            r.failures.first()
        )
    })?;
    Ok(format!("{} exact checks", r.checked))
}

fn mc_agrees(
    space: &Arc<GradedSpace>,
    l: &RbaLInfinity,
    w: &Rational,
    mult: Vec<Rational>,
    op: Vec<Rational>,
) -> Result<bool, String> {
    let d = space.dim();
    let alg = Algebra::unchecked(d, mult).map_err(|e| e.to_string())?;
    let op = LinearMap::new(d, op).map_err(|e| e.to_string())?;
    let valid = alg.check_associative().is_ok()
        && RbAlgebra::unchecked(alg.clone(), op.clone(), w.clone())
            .map_err(|e| e.to_string())?
            .check_rota_baxter()
            .is_ok();
    let mc = l
        .is_maurer_cartan(&mc_element(space, &alg, &op))
        .map_err(|e| e.to_string())?;
    ensure(mc == valid, || {
        format!("MC {mc} but validator {valid} at weight {w}")
    })?;
    Ok(valid)
}

fn c4_mc_bijection() -> Outcome {
    let unit = [int(-1), int(0), int(1)];
    let (mut exhaustive, mut sampled, mut valid) = (0, 0, 0);
    for w in catalog::weights() {
        let space = Arc::new(GradedSpace::ungraded(1));
        let l = RbaLInfinity::new(space.clone(), w.clone());
        for m in &unit {
            for t in &unit {
                valid += usize::from(mc_agrees(&space, &l, &w, vec![m.clone()], vec![t.clone()])?);
                exhaustive += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let space = Arc::new(GradedSpace::ungraded(2));
    for w in catalog::weights() {
        let l = RbaLInfinity::new(space.clone(), w.clone());
        for _ in 0..2500 {
            let mut draw = |n| {
                (0..n)
                    .map(|_| int(rng.gen_range(-1..=1)))
                    .collect::<Vec<_>>()
            };
            let mult = draw(8);
            let op = draw(4);
            valid += usize::from(mc_agrees(&space, &l, &w, mult, op)?);
            sampled += 1;
        }
        // the valid structures of the catalog are too rare to be hit by sampling
        for a in catalog::algebras(&w).into_iter().filter(|a| a.dim() == 2) {
            let mult = a.algebra().structure_constants().to_vec();
            let op = a.operator().entries().to_vec();
            ensure(mc_agrees(&space, &l, &w, mult, op)?, || {
                "catalog algebra rejected".into()
            })?;
            valid += 1;
        }
    }
    Ok(format!(
        "{exhaustive} exhaustive at dim 1, {sampled} sampled at dim 2, {valid} Rota-Baxter"
    ))
}

fn unit_vec(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = int(1);
    v
}

fn embed(space: &Arc<GradedSpace>, n: usize, x: &[Rational]) -> RbaElement {
    let d = space.dim();
    let split = d.pow(n as u32 + 1);
    let f = Multilinear::from_vec(d, d, n, x[..split].to_vec());
    let mut out = RbaElement::from_alg(f.to_cochain(space, Shift::Suspended));
    if n >= 1 {
        out.rbo =
            Multilinear::from_vec(d, d, n - 1, x[split..].to_vec()).to_cochain(space, Shift::Plain);
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

fn c5_twisted_complex() -> Outcome {
    let mut columns = 0;
    for w in catalog::weights() {
        for a in catalog::algebras(&w) {
            let space = a.space();
            let l = RbaLInfinity::new(space.clone(), w.clone());
            let alpha = mc_from_rb(&a);
            let pair = RbPair::regular(a.clone()).map_err(|e| e.to_string())?;
            for n in 0..=2 {
                let dim = pair.complex_dim(ComplexKind::Rba, n);
                for j in 0..dim {
                    let x = unit_vec(dim, j);
                    let twisted = l
                        .twisted(&alpha, &[embed(&space, n, &x)])
                        .map_err(|e| e.to_string())?;
                    let expected: Vec<Rational> = pair.d(n, &x).into_iter().map(|v| -v).collect();
                    ensure(extract(&twisted, n + 1) == expected, || {
                        format!("dim {} weight {w}: degree {n} column {j}", a.dim())
                    })?;
                    columns += 1;
                }
            }
        }
    }
    Ok(format!("{columns} matrix columns agree"))
}

fn small_algebras() -> Vec<RbAlgebra> {
    catalog::weights()
        .iter()
        .flat_map(catalog::algebras)
        .filter(|a| a.dim() <= 2)
        .collect()
}

fn c6_deformations() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut jets, mut rigid) = (0, 0);
    for a in small_algebras() {
        let d = a.dim();
        let pair = RbPair::regular(a.clone()).map_err(|e| e.to_string())?;
        let d1 = pair.coboundary_matrix(ComplexKind::Rba, 1);
        for _ in 0..2 {
            let jet = random_jet(&a, Flavor::Full, 3, &mut rng).map_err(|e| e.to_string())?;
            ensure(jet.is_valid(), || "invalid jet".into())?;
            ensure(is_zero_vec(&pair.d(2, &jet.level_vector(1))), || {
                "infinitesimal is not a cocycle".into()
            })?;
            for k in 1..=3 {
                let o = jet.truncate(k).obstruction();
                ensure(is_zero_vec(&pair.d(3, &o)), || {
                    format!("obstruction at order {k} is not a cocycle")
                })?;
            }
            let psi = Gauge::new(
                d,
                (0..3)
                    .map(|_| {
                        Multilinear::from_vec(
                            d,
                            d,
                            1,
                            (0..d * d).map(|_| int(rng.gen_range(-2..=2))).collect(),
                        )
                    })
                    .collect(),
            );
            let moved = apply_gauge(&jet, &psi);
            let mut diff = moved.level_vector(1);
            for (x, y) in diff.iter_mut().zip(jet.level_vector(1)) {
                *x -= y;
            }
            ensure(d1.solve(&diff).is_some(), || {
                "equivalent jets with non-cohomologous infinitesimals".into()
            })?;
            jets += 1;
        }
        if pair.cohomology(ComplexKind::Rba, 2).dimension == 0 {
            for order in 1..=3 {
                let jet =
                    random_jet(&a, Flavor::Full, order, &mut rng).map_err(|e| e.to_string())?;
                let psi = trivialize(&jet).map_err(|e| e.to_string())?;
                ensure(
                    apply_gauge(&jet, &psi) == Jet::trivial(a.clone(), order),
                    || "gauge did not trivialize".into(),
                )?;
            }
            rigid += 1;
        }
    }
    ensure(rigid > 0, || "no rigid algebra in the corpus".into())?;
    Ok(format!(
        "{jets} jets, {rigid} rigid algebras trivialized to order 3"
    ))
}

fn c7_extensions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut trips, mut rejected) = (0, 0);
    for (name, pair) in catalog::corpus()
        .into_iter()
        .filter(|(_, p)| p.dim_a() <= 2)
    {
        let (da, dm) = (pair.dim_a(), pair.dim_m());
        let d2 = pair.coboundary_matrix(ComplexKind::Rba, 2);
        let kernel = d2.kernel_basis();
        let (inc, proj, sec) = canonical_maps(da, dm);
        for _ in 0..3 {
            let mut x = vec![Rational::zero(); d2.cols()];
            for k in &kernel {
                let c = int(rng.gen_range(-2..=2));
                for (a, b) in x.iter_mut().zip(k) {
                    *a += &c * b;
                }
            }
            let c = ExtensionCocycle::from_vector(da, dm, &x);
            let ext = build_extension(&pair, &c).map_err(|e| format!("{name}: {e}"))?;
            let data = ExtensionData {
                total: &ext,
                base: &pair.algebra,
                inclusion: &inc,
                projection: &proj,
                section: &sec,
            };
            let (module, back) = classify(&data).map_err(|e| format!("{name}: {e}"))?;
            ensure(module == pair.module && back == c, || {
                format!("{name}: build then classify")
            })?;
            let rebuilt = build_extension(&pair, &back).map_err(|e| format!("{name}: {e}"))?;
            ensure(rebuilt == ext, || format!("{name}: classify then build"))?;
            // cohomologous cocycle c + d¹(γ, 0)
            let mut g = (0..da * dm)
                .map(|_| int(rng.gen_range(-2..=2)))
                .collect::<Vec<_>>();
            g.extend(vec![Rational::zero(); dm]);
            let mut shifted = c.to_vector();
            for (e, v) in shifted.iter_mut().zip(pair.d(1, &g)) {
                *e += v;
            }
            let c2 = ExtensionCocycle::from_vector(da, dm, &shifted);
            let ext2 = build_extension(&pair, &c2).map_err(|e| format!("{name}: {e}"))?;
            let zeta =
                isomorphism(&pair, &c, &c2).ok_or_else(|| format!("{name}: no isomorphism"))?;
            ensure(
                is_algebra_morphism(&zeta, &ext, &ext2) && zeta.rank() == da + dm,
                || format!("{name}: ζ is not an isomorphism"),
            )?;
            trips += 1;
        }
        for _ in 0..3 {
            let x: Vec<Rational> = (0..da * da * dm + da * dm)
                .map(|_| int(rng.gen_range(-2..=2)))
                .collect();
            let c = ExtensionCocycle::from_vector(da, dm, &x);
            match build_extension(&pair, &c) {
                Ok(_) => ensure(c.is_cocycle(&pair), || {
                    format!("{name}: non-cocycle accepted")
                })?,
                Err(ExtensionError::Axiom(_)) => {
                    ensure(!c.is_cocycle(&pair), || format!("{name}: cocycle rejected"))?;
                    rejected += 1;
                }
                Err(e) => return Err(format!("{name}: {e}")),
            }
        }
    }
    ensure(rejected > 0, || "no non-cocycle was drawn".into())?;
    Ok(format!(
        "{trips} round trips with isomorphisms, {rejected} non-cocycles rejected"
    ))
}

fn b_family(h: &HomotopyRb) -> Vec<Cochain> {
    (1..=h.truncation()).map(|n| h.b(n).clone()).collect()
}

fn c8_transfer() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut built = 0;
    for w in catalog::weights() {
        for _ in 0..3 {
            let h = random_acyclic(1, -1, &w, 4, &mut rng).map_err(|e| e.to_string())?;
            ensure(h.check().passed(), || {
                format!("random structure invalid at weight {w}")
            })?;
            let t = h.transfer();
            let report = t.check();
            ensure(report.passed(), || {
                format!("transfer fails at level {:?}", report.first_failure())
            })?;
            let (src, tgt) = (b_family(&t), b_family(&h));
            for n in 1..=4 {
                ensure(
                    ainfinity_morphism_defect(&src, &tgt, &h.morphism(), n).is_zero(),
                    || format!("A∞-morphism fails at level {n}, weight {w}"),
                )?;
            }
            built += 1;
        }
    }
    Ok(format!("{built} random structures transferred"))
}

fn generators_up_to(n: usize) -> Vec<Generator> {
    (1..=n)
        .flat_map(|k| {
            (k >= 2)
                .then(|| Generator::m(k))
                .into_iter()
                .chain([Generator::t(k)])
        })
        .collect()
}

fn c9_operad() -> Outcome {
    let mut contractions = 0;
    for w in catalog::weights() {
        let op = RbInfinity::new(w.clone());
        // (a)
        for g in generators_up_to(5) {
            let dd = op.differential(&op.generator_differential(g));
            ensure(dd.is_zero(), || format!("∂² {g} ≠ 0 at weight {w}"))?;
        }
        // (e)
        ensure(op.rb_relation_check().is_some(), || {
            format!("∂m3, ∂T2 miss the relations at weight {w}")
        })?;
        ensure(
            op.degree_zero_image_is_ideal(3, 3)
                .map_err(|e| e.to_string())?,
            || "degree-0 image".into(),
        )?;
        for n in 1..=4 {
            let slices = op.truncation(n, 4).map_err(|e| e.to_string())?;
            for (deg, monos) in &slices {
                for m in monos {
                    // (b)
                    let d = op.differential_monomial(m);
                    let h = op.homotopy_monomial(m).map_err(|e| e.to_string())?;
                    ensure(
                        d.max_t_weight() <= m.t_weight() && h.max_t_weight() <= m.t_weight(),
                        || format!("T-weight grows at {m}"),
                    )?;
                    // (c)
                    if *deg > 0 {
                        let total = op
                            .differential(&h)
                            .plus(&op.homotopy(&d).map_err(|e| e.to_string())?);
                        ensure(total == Element::monomial(m.clone()), || {
                            format!("∂ℍ + ℍ∂ ≠ Id at {m}")
                        })?;
                        contractions += 1;
                    }
                }
            }
            // (d)
            for cap in 0..=4 {
                let table = op.truncated_homology(n, cap).map_err(|e| e.to_string())?;
                ensure(table.acyclic_in_positive_degrees(), || {
                    format!("H(F_{cap}({n})) = {:?} at weight {w}", table.betti)
                })?;
            }
        }
    }
    Ok(format!(
        "{contractions} contractions, 80 acyclic truncations"
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Option<u64>); 9] = [
        ("sign kernel", c1_signs, Some(10)),
        ("cochain complexes", c2_complexes, Some(120)),
        ("L∞ identities", c3_linfty, Some(600)),
        ("MC bijection", c4_mc_bijection, None),
        ("twisted complex", c5_twisted_complex, None),
        ("deformations", c6_deformations, Some(300)),
        ("extensions", c7_extensions, None),
        ("homotopy transfer", c8_transfer, None),
        ("operad minimal model", c9_operad, Some(1800)),
    ];
    let mut failed = 0;
    for (k, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let mut outcome = run();
        let elapsed = start.elapsed();
        if let (Ok(_), Some(s)) = (&outcome, limit) {
            if elapsed > Duration::from_secs(s) {
                outcome = Err(format!("over the {s} s budget"));
            }
        }
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d.as_str()),
            Err(d) => ("FAIL", d.as_str()),
        };
        println!(
            "criterion {} {status} {name}: {detail} ({:.1} s)",
            k + 1,
            elapsed.as_secs_f64()
        );
        failed += usize::from(outcome.is_err());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
