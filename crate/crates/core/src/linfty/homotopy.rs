//! Homotopy Rota-Baxter structures truncated at a finite arity `N`:
//! families `b_1..b_N: (sV)^{⊗n} → sV` and `R_1..R_N: (sV)^{⊗n} → V`, all of
//! degree -1.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::{One, Zero};
use rand::Rng;
use thiserror::Error;

use super::{basis_classes, RbaElement, RbaLInfinity};
use crate::brace::{Cochain, Shift, Term};
use crate::exact::{int, pow, sign_rat, EchelonBasis, Matrix, Rational};
use crate::graded::GradedSpace;
use crate::rb::RbAlgebra;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomotopyError {
    #[error("component {name}_{arity} has the wrong shape")]
    Shape { name: &'static str, arity: usize },
    #[error("component {name}_{arity} is not of degree -1")]
    Degree { name: &'static str, arity: usize },
    #[error("level {0} has no solution extending the lower levels")]
    Unsolvable(usize),
}

/// Compositions of `total` into `parts` positive parts.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(parts - 1) {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Compositions of `total` into `parts` non-negative parts.
pub fn weak_compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    compositions(total + parts, parts)
        .into_iter()
        .map(|c| c.into_iter().map(|x| x - 1).collect())
        .collect()
}

/// `f ∘ (id^{⊗j_1} ⊗ g_1 ⊗ id^{⊗j_2} ⊗ … ⊗ g_q ⊗ id^{⊗j_{q+1}})`.
pub fn insert_pattern(f: &Cochain, gaps: &[usize], gs: &[&Cochain]) -> Cochain {
    assert_eq!(gaps.len(), gs.len() + 1);
    let mut out = f.clone();
    let mut pos = gaps[0] + 1;
    for (t, g) in gs.iter().enumerate() {
        out = out.circ(pos, g);
        pos += g.max_arity() + gaps[t + 1];
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyRb {
    space: Arc<GradedSpace>,
    weight: Rational,
    b: Vec<Cochain>,
    r: Vec<Cochain>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelReport {
    pub level: usize,
    pub ainfinity: bool,
    pub rota_baxter: bool,
    pub stasheff: bool,
    pub rota_baxter_unsuspended: bool,
    pub maurer_cartan: bool,
}

impl LevelReport {
    pub fn passed(&self) -> bool {
        self.ainfinity
            && self.rota_baxter
            && self.stasheff
            && self.rota_baxter_unsuspended
            && self.maurer_cartan
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyReport {
    pub levels: Vec<LevelReport>,
    pub operator_differential: bool,
    pub rbo_homotopy: bool,
    pub homology_rota_baxter: bool,
}

impl HomotopyReport {
    pub fn passed(&self) -> bool {
        self.levels.iter().all(LevelReport::passed)
            && self.operator_differential
            && self.rbo_homotopy
            && self.homology_rota_baxter
    }

    pub fn first_failure(&self) -> Option<usize> {
        self.levels.iter().find(|l| !l.passed()).map(|l| l.level)
    }
}

impl HomotopyRb {
    pub fn new(
        space: Arc<GradedSpace>,
        weight: Rational,
        b: Vec<Cochain>,
        r: Vec<Cochain>,
    ) -> Result<Self, HomotopyError> {
        let out = HomotopyRb {
            space,
            weight,
            b,
            r,
        };
        out.validate_shape()?;
        Ok(out)
    }

    fn validate_shape(&self) -> Result<(), HomotopyError> {
        if self.b.len() != self.r.len() {
            return Err(HomotopyError::Shape {
                name: "R",
                arity: self.r.len(),
            });
        }
        for (name, family, output) in [
            ("b", &self.b, Shift::Suspended),
            ("R", &self.r, Shift::Plain),
        ] {
            for (i, c) in family.iter().enumerate() {
                let arity = i + 1;
                if c.input_shift() != Shift::Suspended
                    || c.output_shift() != output
                    || c.space() != &self.space
                    || c.terms().any(|(t, _)| t.inputs.len() != arity)
                {
                    return Err(HomotopyError::Shape { name, arity });
                }
                if c.terms().any(|(t, _)| c.term_degree(t) != -1) {
                    return Err(HomotopyError::Degree { name, arity });
                }
            }
        }
        Ok(())
    }

    /// `b_2 = m`, `R_1 = τ`, all other components zero.
    pub fn from_rb_algebra(a: &RbAlgebra, truncation: usize) -> Self {
        let space = a.space();
        let alpha = super::mc_from_rb(a);
        let mut b = vec![Cochain::alg(&space); truncation];
        let mut r = vec![Cochain::rbo(&space); truncation];
        if truncation >= 2 {
            b[1] = alpha.alg;
        }
        if truncation >= 1 {
            r[0] = alpha.rbo;
        }
        HomotopyRb {
            space,
            weight: a.weight().clone(),
            b,
            r,
        }
    }

    /// From unsuspended operators `m_n: V^{⊗n} → V` and `T_n: V^{⊗n} → V`.
    pub fn from_unsuspended(
        space: Arc<GradedSpace>,
        weight: Rational,
        m: &[Cochain],
        t: &[Cochain],
    ) -> Result<Self, HomotopyError> {
        let b = m
            .iter()
            .map(|x| Cochain::suspended_from(x, Shift::Suspended))
            .collect();
        let r = t
            .iter()
            .map(|x| Cochain::suspended_from(x, Shift::Plain))
            .collect();
        HomotopyRb::new(space, weight, b, r)
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn weight(&self) -> &Rational {
        &self.weight
    }

    pub fn truncation(&self) -> usize {
        self.b.len()
    }

    pub fn b(&self, n: usize) -> &Cochain {
        &self.b[n - 1]
    }

    pub fn r(&self, n: usize) -> &Cochain {
        &self.r[n - 1]
    }

    pub fn set_b(&mut self, n: usize, c: Cochain) {
        self.b[n - 1] = c;
    }

    pub fn set_r(&mut self, n: usize, c: Cochain) {
        self.r[n - 1] = c;
    }

    pub fn m(&self, n: usize) -> Cochain {
        self.b(n).unsuspended()
    }

    pub fn t(&self, n: usize) -> Cochain {
        self.r(n).unsuspended()
    }

    fn sr(&self, n: usize) -> Cochain {
        self.r(n).suspend()
    }

    /// The element `(Σ b_n, Σ R_n)` of `𝔠_RBA(V)`.
    pub fn element(&self) -> RbaElement {
        let mut out = RbaElement::zero(&self.space);
        for (b, r) in self.b.iter().zip(&self.r) {
            out.alg.add_assign(b);
            out.rbo.add_assign(r);
        }
        out
    }

    /// `Σ_j b_{n-j+1}{b_j}`.
    pub fn ainfinity_defect(&self, n: usize) -> Cochain {
        let mut out = Cochain::alg(&self.space);
        for j in 1..=n {
            out.add_assign(&self.b(n - j + 1).brace(&[self.b(j)]));
        }
        out
    }

    /// `Σ b_k{sR_{l_1}, …, sR_{l_k}}` over compositions of `n`.
    pub fn rb_lhs(&self, n: usize) -> Cochain {
        let sr: Vec<Cochain> = (1..=n).map(|i| self.sr(i)).collect();
        let mut out = Cochain::alg(&self.space);
        for k in 1..=n {
            for l in compositions(n, k) {
                let args: Vec<&Cochain> = l.iter().map(|&i| &sr[i - 1]).collect();
                out.add_assign(&self.b(k).brace(&args));
            }
        }
        out
    }

    /// `Σ_{1≤q≤p} λ^{p-q} (sR_{r_1}){b_p{sR_{r_2}, …, sR_{r_q}}}` with
    /// `r_1 + … + r_q + p - q = n`.
    pub fn rb_rhs(&self, n: usize) -> Cochain {
        let sr: Vec<Cochain> = (1..=n).map(|i| self.sr(i)).collect();
        let mut out = Cochain::alg(&self.space);
        for p in 1..=n {
            for q in 1..=p {
                let c = pow(&self.weight, p - q);
                if c.is_zero() {
                    continue;
                }
                for rs in compositions(n + q - p, q) {
                    let inner_args: Vec<&Cochain> = rs[1..].iter().map(|&i| &sr[i - 1]).collect();
                    let inner = self.b(p).brace(&inner_args);
                    out.add_scaled(&c, &sr[rs[0] - 1].brace(&[&inner]));
                }
            }
        }
        out
    }

    pub fn rb_defect(&self, n: usize) -> Cochain {
        self.rb_lhs(n).minus(&self.rb_rhs(n))
    }

    /// `Σ (-1)^{i+jk} m_{i+1+k} ∘ (id^{⊗i} ⊗ m_j ⊗ id^{⊗k})`.
    pub fn stasheff_defect(&self, n: usize) -> Cochain {
        let m: Vec<Cochain> = (1..=n).map(|i| self.m(i)).collect();
        let mut out = Cochain::plain(&self.space);
        for j in 1..=n {
            for i in 0..=n - j {
                let k = n - j - i;
                let term = m[i + k].circ(i + 1, &m[j - 1]);
                out.add_scaled(&sign_rat((i + j * k) as i64), &term);
            }
        }
        out
    }

    /// Defect of the unsuspended form of the operator identity:
    /// `Σ (-1)^α m_k(T_{l_1} ⊗ … ⊗ T_{l_k})` minus
    /// `Σ (-1)^β λ^{p-q} T_{r_1}(id^{⊗i} ⊗ m_p(id^{⊗j_1} ⊗ T_{r_2} ⊗ … ⊗ T_{r_q} ⊗ id^{⊗j_q}) ⊗ id^{⊗k})`.
    pub fn rb_unsuspended_defect(&self, n: usize) -> Cochain {
        let m: Vec<Cochain> = (1..=n).map(|i| self.m(i)).collect();
        let t: Vec<Cochain> = (1..=n).map(|i| self.t(i)).collect();
        let tri = |x: usize| (x * x.saturating_sub(1) / 2) as i64;
        let mut out = Cochain::plain(&self.space);
        for k in 1..=n {
            for l in compositions(n, k) {
                let alpha = tri(k)
                    + tri(n)
                    + l.iter()
                        .enumerate()
                        .map(|(j, &lj)| ((k - j - 1) * lj) as i64)
                        .sum::<i64>();
                let args: Vec<&Cochain> = l.iter().map(|&i| &t[i - 1]).collect();
                out.add_scaled(&sign_rat(alpha), &m[k - 1].brace(&args));
            }
        }
        for p in 1..=n {
            for q in 1..=p {
                let c = pow(&self.weight, p - q);
                if c.is_zero() {
                    continue;
                }
                for rs in compositions(n + q - p, q) {
                    let inner_ts: Vec<&Cochain> = rs[1..].iter().map(|&i| &t[i - 1]).collect();
                    for js in weak_compositions(p + 1 - q, q) {
                        let inner = insert_pattern(&m[p - 1], &js, &inner_ts);
                        for i in 0..rs[0] {
                            let k = rs[0] - 1 - i;
                            let mut beta = tri(p)
                                + rs.iter().map(|&r| tri(r)).sum::<i64>()
                                + k as i64
                                + (p * i) as i64;
                            for lidx in 2..=q {
                                let before: usize = i
                                    + js[..lidx - 1].iter().sum::<usize>()
                                    + rs[1..lidx - 1].iter().sum::<usize>();
                                beta += ((rs[lidx - 1] - 1) * before) as i64;
                            }
                            let term = t[rs[0] - 1].circ(i + 1, &inner);
                            out.add_scaled(&-(sign_rat(beta) * &c), &term);
                        }
                    }
                }
            }
        }
        out
    }

    /// Maurer-Cartan expression of `(Σ b_n, Σ R_n)`, truncated at arity `N`.
    pub fn mc_residual(&self) -> RbaElement {
        let l = RbaLInfinity::new(self.space.clone(), self.weight.clone())
            .with_truncation(self.truncation())
            .with_eval_bound(usize::MAX);
        l.mc_lhs(&self.element())
            .expect("truncated series is finite")
    }

    /// `m_1 T_1 - T_1 m_1`.
    pub fn operator_differential_defect(&self) -> Cochain {
        let (m1, t1) = (self.m(1), self.t(1));
        m1.circ(1, &t1).minus(&t1.circ(1, &m1))
    }

    /// `m_2(T_1⊗T_1) - T_1 m_2(id⊗T_1) - T_1 m_2(T_1⊗id) - λ T_1 m_2
    ///   + m_1 T_2 + T_2(id⊗m_1) + T_2(m_1⊗id)`.
    pub fn rbo_homotopy_defect(&self) -> Cochain {
        let (m1, m2, t1) = (self.m(1), self.m(2), self.t(1));
        let t2 = if self.truncation() >= 2 {
            self.t(2)
        } else {
            Cochain::plain(&self.space)
        };
        let mut out = m2.brace(&[&t1, &t1]);
        out.add_scaled(&-Rational::one(), &t1.circ(1, &m2.circ(2, &t1)));
        out.add_scaled(&-Rational::one(), &t1.circ(1, &m2.circ(1, &t1)));
        out.add_scaled(&-self.weight.clone(), &t1.circ(1, &m2));
        out.add_assign(&m1.circ(1, &t2));
        out.add_assign(&t2.circ(2, &m1));
        out.add_assign(&t2.circ(1, &m1));
        out
    }

    /// Whether `(H(V, m_1), m_2, T_1)` is a Rota-Baxter algebra: on cycles,
    /// associativity and the Rota-Baxter relation hold modulo boundaries.
    pub fn homology_is_rota_baxter(&self) -> bool {
        let d = self.space.dim();
        let (m1, m2, t1) = (self.m(1), self.m(2), self.t(1));
        let m1_mat = linear_matrix(&m1, d);
        let mut boundaries = EchelonBasis::new();
        for j in 0..d {
            boundaries.insert_dense(&m1_mat.column(j));
        }
        let cycles = m1_mat.kernel_basis();
        let op = |v: &[Rational]| {
            m1_mat
                .mul_vec(&linear_image(&t1, v, d))
                .iter()
                .all(Zero::is_zero)
        };
        for x in &cycles {
            if !op(x) {
                return false;
            }
        }
        let mul = |x: &[Rational], y: &[Rational]| bilinear_image(&m2, x, y, d);
        let t = |x: &[Rational]| linear_image(&t1, x, d);
        for x in &cycles {
            for y in &cycles {
                let mut defect = mul(&t(x), &t(y));
                let inner = add(
                    &add(&mul(x, &t(y)), &mul(&t(x), y)),
                    &scale(&self.weight, &mul(x, y)),
                );
                defect = sub(&defect, &t(&inner));
                if !boundaries.contains_dense(&defect) {
                    return false;
                }
                for z in &cycles {
                    let assoc = sub(&mul(&mul(x, y), z), &mul(x, &mul(y, z)));
                    if !boundaries.contains_dense(&assoc) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn check(&self) -> HomotopyReport {
        let mc = self.mc_residual();
        let levels = (1..=self.truncation())
            .map(|n| LevelReport {
                level: n,
                ainfinity: self.ainfinity_defect(n).is_zero(),
                rota_baxter: self.rb_defect(n).is_zero(),
                stasheff: self.stasheff_defect(n).is_zero(),
                rota_baxter_unsuspended: self.rb_unsuspended_defect(n).is_zero(),
                maurer_cartan: mc.alg.arity_component(n).is_zero()
                    && mc.rbo.arity_component(n).is_zero(),
            })
            .collect();
        HomotopyReport {
            levels,
            operator_differential: self.operator_differential_defect().is_zero(),
            rbo_homotopy: self.truncation() < 2 || self.rbo_homotopy_defect().is_zero(),
            homology_rota_baxter: self.truncation() < 2 || self.homology_is_rota_baxter(),
        }
    }

    /// `b̃_n = Σ λ^{p-q-1} b_p{sR_{l_1}, …, sR_{l_q}}`, `l_1 + … + l_q + p - q = n`, `0 ≤ q < p`.
    pub fn derived_b(&self, n: usize) -> Cochain {
        let sr: Vec<Cochain> = (1..=n).map(|i| self.sr(i)).collect();
        let mut out = Cochain::alg(&self.space);
        for p in 1..=n {
            for q in 0..p {
                let c = pow(&self.weight, p - q - 1);
                if c.is_zero() {
                    continue;
                }
                for ls in compositions(n + q - p, q) {
                    let args: Vec<&Cochain> = ls.iter().map(|&i| &sr[i - 1]).collect();
                    out.add_scaled(&c, &self.b(p).brace(&args));
                }
            }
        }
        out
    }

    /// The depth components `R^k_n` for `1 ≤ k ≤ n ≤ N`, indexed `[n-1][k-1]`.
    /// Depth `k` collects the brace expressions whose deepest argument has depth `k - 1`.
    pub fn depth_components(&self) -> Vec<Vec<Cochain>> {
        let big_n = self.truncation();
        let mut comps: Vec<Vec<Cochain>> = Vec::with_capacity(big_n);
        // prefix[n-1][j] = Σ_{t ≤ j} sR^t_n
        let mut prefix: Vec<Vec<Cochain>> = Vec::with_capacity(big_n);
        for n in 1..=big_n {
            let mut row = vec![self.r(n).scale(&pow(&self.weight, n - 1))];
            for k in 2..=n {
                let mut rk = Cochain::rbo(&self.space);
                for p in 1..=n {
                    let srp = self.sr(p);
                    for q in 1..p {
                        let c = pow(&self.weight, p - q - 1);
                        if c.is_zero() {
                            continue;
                        }
                        for ls in compositions(n + q - p, q) {
                            let upper: Vec<&Cochain> =
                                ls.iter().map(|&l| &prefix[l - 1][(k - 1).min(l)]).collect();
                            let lower: Vec<&Cochain> =
                                ls.iter().map(|&l| &prefix[l - 1][(k - 2).min(l)]).collect();
                            let v = srp.brace(&upper).minus(&srp.brace(&lower));
                            rk.add_scaled(&c, &v.desuspend());
                        }
                    }
                }
                row.push(rk);
            }
            let mut pre = vec![Cochain::alg(&self.space)];
            for (k, c) in row.iter().enumerate() {
                pre.push(pre[k].plus(&c.suspend()));
            }
            prefix.push(pre);
            comps.push(row);
        }
        comps
    }

    /// The transferred structure `(b̃, R̃)` with `R̃_n = Σ_k R^k_n`.
    pub fn transfer(&self) -> HomotopyRb {
        let depth = self.depth_components();
        let big_n = self.truncation();
        let b = (1..=big_n).map(|n| self.derived_b(n)).collect();
        let r = depth
            .iter()
            .map(|row| {
                let mut acc = Cochain::rbo(&self.space);
                for c in row {
                    acc.add_assign(c);
                }
                acc
            })
            .collect();
        HomotopyRb {
            space: self.space.clone(),
            weight: self.weight.clone(),
            b,
            r,
        }
    }

    /// `R̃_n - Σ_{0≤q<p} λ^{p-q-1} s^{-1}(sR_p){sR̃_{l_1}, …, sR̃_{l_q}}` for the
    /// transferred `R̃ = derived.r`.
    pub fn expansion_defect(&self, derived: &HomotopyRb, n: usize) -> Cochain {
        let srt: Vec<Cochain> = (1..=n).map(|i| derived.sr(i)).collect();
        let mut out = derived.r(n).clone();
        for p in 1..=n {
            let srp = self.sr(p);
            for q in 0..p {
                let c = pow(&self.weight, p - q - 1);
                if c.is_zero() {
                    continue;
                }
                for ls in compositions(n + q - p, q) {
                    let args: Vec<&Cochain> = ls.iter().map(|&l| &srt[l - 1]).collect();
                    out.add_scaled(&-c.clone(), &srp.brace(&args).desuspend());
                }
            }
        }
        out
    }

    /// `{sR_n}` as a family of degree-zero maps `(sV)^{⊗n} → sV`.
    pub fn morphism(&self) -> Vec<Cochain> {
        (1..=self.truncation()).map(|n| self.sr(n)).collect()
    }
}

/// Level-`n` defect of the A-infinity morphism equation
/// `Σ φ_{i+1+k}(id^{⊗i} ⊗ b_j ⊗ id^{⊗k}) = Σ b'_m(φ_{i_1} ⊗ … ⊗ φ_{i_m})`.
pub fn ainfinity_morphism_defect(
    source: &[Cochain],
    target: &[Cochain],
    phi: &[Cochain],
    n: usize,
) -> Cochain {
    let mut out = Cochain::alg(phi[0].space());
    for j in 1..=n {
        out.add_assign(&phi[n - j].brace(&[&source[j - 1]]));
    }
    for m in 1..=n {
        for is in compositions(n, m) {
            let args: Vec<&Cochain> = is.iter().map(|&i| &phi[i - 1]).collect();
            out.add_scaled(&-Rational::one(), &target[m - 1].brace(&args));
        }
    }
    out
}

fn linear_matrix(c: &Cochain, d: usize) -> Matrix {
    let mut triplets = Vec::new();
    for (t, v) in c.terms() {
        if t.inputs.len() == 1 {
            triplets.push((t.output as usize, t.inputs[0] as usize, v.clone()));
        }
    }
    Matrix::from_triplets(d, d, triplets)
}

fn linear_image(c: &Cochain, x: &[Rational], d: usize) -> Vec<Rational> {
    linear_matrix(c, d).mul_vec(x)
}

/// `c(x, y)` for a binary plain map, with the Koszul sign of moving `c` past nothing.
fn bilinear_image(c: &Cochain, x: &[Rational], y: &[Rational], d: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); d];
    for (t, v) in c.terms() {
        if t.inputs.len() != 2 {
            continue;
        }
        let (i, j) = (t.inputs[0] as usize, t.inputs[1] as usize);
        if x[i].is_zero() || y[j].is_zero() {
            continue;
        }
        out[t.output as usize] += v * &x[i] * &y[j];
    }
    out
}

fn add(x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

fn sub(x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

fn scale(c: &Rational, x: &[Rational]) -> Vec<Rational> {
    x.iter().map(|a| c * a).collect()
}

/// Space `V_low ⊕ V_{low+1}`, both of dimension `d`.
pub fn two_term_space(d: usize, low: i32) -> Arc<GradedSpace> {
    let mut degrees = vec![low; d];
    degrees.extend(vec![low + 1; d]);
    Arc::new(GradedSpace::new(degrees))
}

/// Random homotopy Rota-Baxter structure on the acyclic space
/// [`two_term_space`]`(d, low)` with `m_1: V_{low+1} → V_low` the identity, built level by
/// level: a random candidate for `(b_n, R_n)` is projected onto the affine
/// space of solutions of the level-`n` identities.
pub fn random_acyclic<R: Rng>(
    d: usize,
    low: i32,
    weight: &Rational,
    truncation: usize,
    rng: &mut R,
) -> Result<HomotopyRb, HomotopyError> {
    let space = two_term_space(d, low);
    let mut m1 = Cochain::plain(&space);
    for i in 0..d {
        m1.add_term(vec![(d + i) as u16], i as u16, int(1));
    }
    let mut t1 = Cochain::plain(&space);
    for i in 0..d {
        for j in 0..d {
            let c = int(rng.gen_range(-2..=2));
            t1.add_term(vec![i as u16], j as u16, c.clone());
            t1.add_term(vec![(d + i) as u16], (d + j) as u16, c);
        }
    }
    let mut h = HomotopyRb {
        space: space.clone(),
        weight: weight.clone(),
        b: vec![Cochain::alg(&space); truncation],
        r: vec![Cochain::rbo(&space); truncation],
    };
    h.b[0] = Cochain::suspended_from(&m1, Shift::Suspended);
    h.r[0] = Cochain::suspended_from(&t1, Shift::Plain);
    let classes = basis_classes(&space, truncation);
    for n in 2..=truncation {
        let unknowns: Vec<(bool, &crate::linfty::BasisMap)> = [true, false]
            .iter()
            .flat_map(|&alg| {
                classes
                    .get(&(alg, n, -1))
                    .into_iter()
                    .flatten()
                    .map(move |b| (alg, b))
            })
            .collect();
        let level = |h: &HomotopyRb| -> Vec<(u8, Term, Rational)> {
            let mut v = Vec::new();
            for (t, c) in h.ainfinity_defect(n).terms() {
                v.push((0, t.clone(), c.clone()));
            }
            for (t, c) in h.rb_defect(n).terms() {
                v.push((1, t.clone(), c.clone()));
            }
            v
        };
        h.b[n - 1] = Cochain::alg(&space);
        h.r[n - 1] = Cochain::rbo(&space);
        let base = level(&h);
        let mut rows: BTreeMap<(u8, Term), usize> = BTreeMap::new();
        let index = |key: (u8, Term), rows: &mut BTreeMap<(u8, Term), usize>| {
            let len = rows.len();
            *rows.entry(key).or_insert(len)
        };
        let mut triplets = Vec::new();
        let mut rhs_entries = Vec::new();
        for (e, t, c) in &base {
            rhs_entries.push((index((*e, t.clone()), &mut rows), -c.clone()));
        }
        for (col, (alg, bm)) in unknowns.iter().enumerate() {
            let mut trial = h.clone();
            let e = bm.element(&space, int(1));
            if *alg {
                trial.b[n - 1] = e.alg;
            } else {
                trial.r[n - 1] = e.rbo;
            }
            let mut diff: BTreeMap<(u8, Term), Rational> = BTreeMap::new();
            for (k, t, c) in level(&trial) {
                *diff.entry((k, t)).or_insert_with(Rational::zero) += c;
            }
            for (k, t, c) in &base {
                *diff.entry((*k, t.clone())).or_insert_with(Rational::zero) -= c;
            }
            for (key, v) in diff {
                if !v.is_zero() {
                    triplets.push((index(key, &mut rows), col, v));
                }
            }
        }
        let mat = Matrix::from_triplets(rows.len(), unknowns.len(), triplets);
        let mut rhs = vec![Rational::zero(); rows.len()];
        for (i, v) in rhs_entries {
            rhs[i] += v;
        }
        let mut sol = mat.solve(&rhs).ok_or(HomotopyError::Unsolvable(n))?;
        for k in mat.kernel_basis() {
            let c = int(rng.gen_range(-1..=1));
            for (s, kv) in sol.iter_mut().zip(&k) {
                *s += &c * kv;
            }
        }
        let mut bn = Cochain::alg(&space);
        let mut rn = Cochain::rbo(&space);
        for ((alg, bm), v) in unknowns.iter().zip(sol) {
            if v.is_zero() {
                continue;
            }
            if *alg {
                bn.add_term(bm.inputs.clone(), bm.output, v);
            } else {
                rn.add_term(bm.inputs.clone(), bm.output, v);
            }
        }
        h.b[n - 1] = bn;
        h.r[n - 1] = rn;
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_counts() {
        assert_eq!(compositions(4, 2).len(), 3);
        assert_eq!(compositions(3, 3), vec![vec![1, 1, 1]]);
        assert_eq!(weak_compositions(2, 2).len(), 3);
        assert_eq!(compositions(0, 0), vec![Vec::<usize>::new()]);
    }
}
