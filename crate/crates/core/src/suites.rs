//! Identity sweeps shared by `rbh verify` and the acceptance tests.

use std::sync::Arc;

use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::brace::{gerstenhaber, pre_jacobi_rhs, Cochain};
use crate::exact::{int, Rational};
use crate::graded::{
    chi_sign, compose, epsilon_sign, factor_permutation, is_shuffle, parity_sign, permutations,
    permute, shuffles, suspension_sign, GradedSpace,
};
use crate::linfty::{sweep, RbaLInfinity};

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: Option<u64>,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &str, seed: Option<u64>) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            seed,
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

/// Sign of reordering `x_{σ(1)} … x_{σ(n)}` back to `x_1 … x_n` by adjacent
/// transpositions: `(ε, sgn)`.
fn bubble_signs(perm: &[usize], degrees: &[i32]) -> (i32, i32) {
    let mut word = perm.to_vec();
    let (mut eps, mut sgn) = (1, 1);
    for end in (1..word.len()).rev() {
        for k in 0..end {
            if word[k] > word[k + 1] {
                eps *= parity_sign(i64::from(degrees[word[k]]) * i64::from(degrees[word[k + 1]]));
                sgn = -sgn;
                word.swap(k, k + 1);
            }
        }
    }
    (eps, sgn)
}

fn degree_lists(n: usize, max_degree: i32) -> Vec<Vec<i32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=max_degree).map(move |d| {
                    let mut w = v.clone();
                    w.push(d);
                    w
                })
            })
            .collect();
    }
    out
}

/// Exhaustive check of the Koszul sign identities for `n ≤ max_n` and
/// degrees in `0..=max_degree`.
pub fn signs(max_n: usize, max_degree: i32) -> SuiteReport {
    let mut r = SuiteReport::new("signs", None);
    for n in 0..=max_n {
        let perms = permutations(n);
        for x in degree_lists(n, max_degree) {
            let shifted: Vec<i32> = x.iter().map(|d| d + 1).collect();
            for sigma in &perms {
                let (eps, sgn) = bubble_signs(sigma, &x);
                r.check(epsilon_sign(sigma, &x) == eps, || {
                    format!("epsilon {sigma:?} {x:?}")
                });
                r.check(chi_sign(sigma, &x) == sgn * eps, || {
                    format!("chi {sigma:?} {x:?}")
                });
                let lhs = chi_sign(sigma, &x) * suspension_sign(&permute(sigma, &x));
                let rhs = epsilon_sign(sigma, &shifted) * suspension_sign(&x);
                r.check(lhs == rhs, || {
                    format!("suspension interplay {sigma:?} {x:?}")
                });
                for tau in &perms {
                    let both = compose(sigma, tau);
                    let ok = epsilon_sign(&both, &x)
                        == epsilon_sign(sigma, &x) * epsilon_sign(tau, &permute(sigma, &x));
                    r.check(ok, || format!("cocycle {sigma:?} {tau:?} {x:?}"));
                }
            }
            for i in 1..n {
                for delta in &perms {
                    let (sigma, tau, pi) = factor_permutation(delta, i);
                    let recomposes = (0..i).all(|l| delta[l] == sigma[tau[l]])
                        && (0..n - i).all(|m| delta[i + m] == sigma[i + pi[m]]);
                    r.check(is_shuffle(&sigma, i) && recomposes, || {
                        format!("factorization {delta:?} at {i}")
                    });
                    // uniqueness by brute force over all triples
                    let mut hits = 0;
                    for s in shuffles(i, n - i) {
                        for t in permutations(i) {
                            for p in permutations(n - i) {
                                if (0..i).all(|l| delta[l] == s[t[l]])
                                    && (0..n - i).all(|m| delta[i + m] == s[i + p[m]])
                                {
                                    hits += 1;
                                }
                            }
                        }
                    }
                    r.check(hits == 1, || {
                        format!("factorization not unique {delta:?} at {i}")
                    });
                    let xs = permute(&sigma, &x);
                    let rhs =
                        chi_sign(&sigma, &x) * chi_sign(&pi, &xs[i..]) * chi_sign(&tau, &xs[..i]);
                    r.check(chi_sign(delta, &x) == rhs, || {
                        format!("shuffle signs {delta:?} at {i} {x:?}")
                    });
                }
            }
        }
    }
    r
}

fn random_space<R: Rng>(dim: usize, rng: &mut R) -> Arc<GradedSpace> {
    Arc::new(GradedSpace::new(
        (0..dim).map(|_| rng.gen_range(0..=1)).collect(),
    ))
}

fn tuples(dim: usize, len: usize) -> Vec<Vec<u16>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..dim as u16).map(move |k| {
                    let mut w = v.clone();
                    w.push(k);
                    w
                })
            })
            .collect();
    }
    out
}

/// Homogeneous cochain of the given arity with coefficients in `{-2, …, 2}`.
pub fn random_cochain<R: Rng>(space: &Arc<GradedSpace>, arity: usize, rng: &mut R) -> Cochain {
    let dim = space.dim();
    let seed_in: Vec<u16> = (0..arity).map(|_| rng.gen_range(0..dim as u16)).collect();
    let seed_out = rng.gen_range(0..dim as u16);
    let degree = Cochain::alg(space)
        .with_term(&seed_in, seed_out, int(1))
        .degree();
    let mut out = Cochain::alg(space).with_term(&seed_in, seed_out, int(rng.gen_range(1..=2)));
    for ins in tuples(dim, arity) {
        for o in 0..dim as u16 {
            if ins == seed_in && o == seed_out {
                continue;
            }
            let probe = Cochain::alg(space).with_term(&ins, o, int(1));
            if probe.degree() == degree {
                let c: i64 = rng.gen_range(-2..=2);
                if c != 0 {
                    out.add_term(ins.clone(), o, int(c));
                }
            }
        }
    }
    out
}

fn sign_rational(e: i64) -> Rational {
    int(i64::from(parity_sign(e)))
}

/// Pre-Jacobi identity and the graded Lie axioms of the Gerstenhaber
/// bracket on random cochains.
pub fn braces(seed: u64, trials: usize, dim: usize, max_arity: usize) -> SuiteReport {
    let mut r = SuiteReport::new("braces", Some(seed));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let space = random_space(dim, &mut rng);
        let draw = |rng: &mut ChaCha8Rng| {
            let a = rng.gen_range(1..=max_arity);
            random_cochain(&space, a, rng)
        };
        let f = draw(&mut rng);
        let g = draw(&mut rng);
        let h = draw(&mut rng);
        let g2 = draw(&mut rng);
        let h2 = draw(&mut rng);
        for (gs, hs) in [
            (vec![&g], vec![&h]),
            (vec![&g], vec![&h, &h2]),
            (vec![&g, &g2], vec![&h]),
            (vec![&g, &g2], vec![&h, &h2]),
        ] {
            let lhs = f.brace(&gs).brace(&hs);
            let rhs = pre_jacobi_rhs(&f, &gs, &hs);
            r.check(lhs == rhs, || {
                format!("pre-Jacobi trial {trial} ({}, {})", gs.len(), hs.len())
            });
        }
        let deg = |c: &Cochain| i64::from(c.degree().unwrap_or(0));
        let (df, dg, dh) = (deg(&f), deg(&g), deg(&h));
        let fg = gerstenhaber(&f, &g);
        let gf = gerstenhaber(&g, &f);
        r.check(
            fg.plus(&gf.scale(&sign_rational(df * dg))).is_zero(),
            || format!("bracket antisymmetry trial {trial}"),
        );
        let jac = gerstenhaber(&f, &gerstenhaber(&g, &h))
            .scale(&sign_rational(df * dh))
            .plus(&gerstenhaber(&g, &gerstenhaber(&h, &f)).scale(&sign_rational(dg * df)))
            .plus(&gerstenhaber(&h, &gerstenhaber(&f, &g)).scale(&sign_rational(dh * dg)));
        r.check(jac.is_zero(), || format!("bracket Jacobi trial {trial}"));
    }
    r
}

/// The weights exercised by the L∞ sweep.
pub fn sweep_weights() -> Vec<Rational> {
    vec![Rational::zero(), int(1), int(-1), int(1) / int(2)]
}

/// Graded anti-symmetry and the generalized Jacobi identity for levels
/// `≤ max_level` on every grading of total dimension `≤ dim` in degrees
/// `{0, 1}`, for each weight, on `trials` random tuples per level.
pub fn linfty(
    seed: u64,
    trials: usize,
    dim: usize,
    max_arity: usize,
    max_level: usize,
) -> SuiteReport {
    let mut r = SuiteReport::new("linfty", Some(seed));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for d in 1..=dim {
        for ones in 0..=d {
            let degrees: Vec<i32> = (0..d).map(|k| i32::from(k >= d - ones)).collect();
            for w in sweep_weights() {
                let l = RbaLInfinity::new(Arc::new(GradedSpace::new(degrees.clone())), w.clone());
                let s = sweep(&l, max_arity, max_level, trials, &mut rng);
                r.checked += s.checked;
                r.failures.extend(
                    s.failures
                        .into_iter()
                        .map(|f| format!("{degrees:?} λ={w}: {f}")),
                );
            }
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bubble_oracle_small_cases() {
        assert_eq!(bubble_signs(&[1, 0], &[1, 1]), (-1, -1));
        assert_eq!(bubble_signs(&[2, 0, 1], &[1, 0, 1]), (-1, 1));
    }

    #[test]
    fn sign_suite_passes_small() {
        let r = signs(3, 1);
        assert!(r.passed(), "{:?}", r.failures);
        assert!(r.checked > 100);
    }
}
