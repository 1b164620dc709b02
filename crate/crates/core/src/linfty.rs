//! The L-infinity algebra controlling Rota-Baxter structures on a graded
//! space `V`, on `Hom(T^c(sV), sV) ⊕ Hom(T^c(sV), V)`.
//!
//! Degrees: a map in the first summand has its degree as a map with
//! suspended output, a map in the second as a map with plain output. The
//! operator `l_n` has degree `n - 2`.

pub mod homotopy;

use std::collections::BTreeMap;
use std::sync::Arc;

use num::One;
use rand::Rng;
use thiserror::Error;

use crate::brace::{gerstenhaber, Cochain, Shift};
use crate::exact::{factorial, pow, sign_rat, Rational};
use crate::graded::{chi_sign, permutations, permute, shuffles, suspension_sign, GradedSpace};
use crate::rb::{Algebra, LinearMap, Multilinear, RbAlgebra};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinftyError {
    #[error("result arity {found} exceeds the evaluation bound {bound}")]
    ArityOverflow { found: usize, bound: usize },
    #[error("Maurer-Cartan series did not terminate by level {0}")]
    Divergence(usize),
    #[error("element is not homogeneous")]
    Inhomogeneous,
    #[error("expected an element of degree {expected}, found {found:?}")]
    WrongDegree { expected: i32, found: Option<i32> },
    #[error("space must be concentrated in degree zero")]
    NotUngraded,
}

/// Element of `𝔠_RBA(V) = 𝔠_Alg(V) ⊕ 𝔠_RBO(V)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RbaElement {
    pub alg: Cochain,
    pub rbo: Cochain,
}

impl RbaElement {
    pub fn zero(space: &Arc<GradedSpace>) -> Self {
        RbaElement {
            alg: Cochain::alg(space),
            rbo: Cochain::rbo(space),
        }
    }

    pub fn from_alg(alg: Cochain) -> Self {
        assert_eq!(
            (alg.input_shift(), alg.output_shift()),
            (Shift::Suspended, Shift::Suspended)
        );
        let rbo = Cochain::rbo(alg.space());
        RbaElement { alg, rbo }
    }

    pub fn from_rbo(rbo: Cochain) -> Self {
        assert_eq!(
            (rbo.input_shift(), rbo.output_shift()),
            (Shift::Suspended, Shift::Plain)
        );
        let alg = Cochain::alg(rbo.space());
        RbaElement { alg, rbo }
    }

    pub fn new(alg: Cochain, rbo: Cochain) -> Self {
        assert_eq!(alg.space(), rbo.space());
        RbaElement { alg, rbo }
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        self.alg.space()
    }

    pub fn is_zero(&self) -> bool {
        self.alg.is_zero() && self.rbo.is_zero()
    }

    pub fn add_assign(&mut self, other: &RbaElement) {
        self.alg.add_assign(&other.alg);
        self.rbo.add_assign(&other.rbo);
    }

    pub fn add_scaled(&mut self, c: &Rational, other: &RbaElement) {
        self.alg.add_scaled(c, &other.alg);
        self.rbo.add_scaled(c, &other.rbo);
    }

    pub fn plus(&self, other: &RbaElement) -> RbaElement {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn scale(&self, c: &Rational) -> RbaElement {
        RbaElement {
            alg: self.alg.scale(c),
            rbo: self.rbo.scale(c),
        }
    }

    pub fn degree(&self) -> Option<i32> {
        match (self.alg.degree(), self.rbo.degree()) {
            (Some(a), Some(b)) if a == b => Some(a),
            (Some(a), None) if self.rbo.is_zero() => Some(a),
            (None, Some(b)) if self.alg.is_zero() => Some(b),
            _ => None,
        }
    }

    pub fn max_arity(&self) -> usize {
        self.alg.max_arity().max(self.rbo.max_arity())
    }

    pub fn num_terms(&self) -> usize {
        self.alg.num_terms() + self.rbo.num_terms()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Alg,
    Rbo,
}

#[derive(Clone, Debug)]
struct Piece {
    side: Side,
    degree: i32,
    arity: usize,
    map: Cochain,
}

/// Splits into pieces homogeneous in degree; pieces of the first summand
/// are further split by arity.
fn pieces(x: &RbaElement) -> Vec<Piece> {
    let mut out = Vec::new();
    for (d, part) in x.alg.homogeneous_parts() {
        for (a, p) in part.arity_parts() {
            out.push(Piece {
                side: Side::Alg,
                degree: d,
                arity: a,
                map: p,
            });
        }
    }
    for (d, part) in x.rbo.homogeneous_parts() {
        for (a, p) in part.arity_parts() {
            out.push(Piece {
                side: Side::Rbo,
                degree: d,
                arity: a,
                map: p,
            });
        }
    }
    out
}

/// Arity of `l_n` on the chosen pieces, or `None` when it vanishes by arity.
fn result_arity(ps: &[&Piece]) -> Option<usize> {
    let algs: Vec<&&Piece> = ps.iter().filter(|p| p.side == Side::Alg).collect();
    match (ps.len(), algs.len()) {
        (1, 1) => (algs[0].arity == 0).then_some(0),
        (2, 2) => (ps[0].arity + ps[1].arity).checked_sub(1),
        (n, 1) if n >= 2 => {
            let m = n - 1;
            let a = algs[0].arity;
            let inner: usize = ps
                .iter()
                .filter(|p| p.side == Side::Rbo)
                .map(|p| p.arity)
                .sum();
            (m <= a).then(|| a - m + inner)
        }
        _ => None,
    }
}

/// The L-infinity structure `{l_n}` of weight `λ` on `𝔠_RBA(V)`.
#[derive(Clone, Debug)]
pub struct RbaLInfinity {
    space: Arc<GradedSpace>,
    weight: Rational,
    max_eval_arity: usize,
    truncation: Option<usize>,
}

impl RbaLInfinity {
    pub fn new(space: Arc<GradedSpace>, weight: Rational) -> Self {
        RbaLInfinity {
            space,
            weight,
            max_eval_arity: 16,
            truncation: None,
        }
    }

    /// Drops every output component of arity above `n` instead of computing it.
    pub fn with_truncation(mut self, n: usize) -> Self {
        self.truncation = Some(n);
        self
    }

    /// Results with a term of arity above `bound` are rejected.
    pub fn with_eval_bound(mut self, bound: usize) -> Self {
        self.max_eval_arity = bound;
        self
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn weight(&self) -> &Rational {
        &self.weight
    }

    pub fn zero(&self) -> RbaElement {
        RbaElement::zero(&self.space)
    }

    /// `l_n(x_1, …, x_n)`, extended multilinearly from homogeneous pieces.
    pub fn l(&self, args: &[RbaElement]) -> Result<RbaElement, LinftyError> {
        let n = args.len();
        let mut out = self.zero();
        if n == 0 {
            return Ok(out);
        }
        let split: Vec<Vec<Piece>> = args.iter().map(pieces).collect();
        let mut chosen: Vec<&Piece> = Vec::with_capacity(n);
        self.expand(&split, 0, 0, &mut chosen, &mut out);
        let arity = out.max_arity();
        if arity > self.max_eval_arity {
            return Err(LinftyError::ArityOverflow {
                found: arity,
                bound: self.max_eval_arity,
            });
        }
        Ok(out)
    }

    fn expand<'a>(
        &self,
        split: &'a [Vec<Piece>],
        i: usize,
        algs: usize,
        chosen: &mut Vec<&'a Piece>,
        out: &mut RbaElement,
    ) {
        let n = split.len();
        if i == n {
            match result_arity(chosen) {
                Some(a) if self.truncation.map_or(true, |t| a <= t) => {
                    out.add_assign(&self.l_pieces(chosen));
                }
                _ => {}
            }
            return;
        }
        for p in &split[i] {
            let a = algs + usize::from(p.side == Side::Alg);
            if a > 2 || (a == 2 && n > 2) {
                continue;
            }
            chosen.push(p);
            self.expand(split, i + 1, a, chosen, out);
            chosen.pop();
        }
    }

    fn l_pieces(&self, ps: &[&Piece]) -> RbaElement {
        let n = ps.len();
        let alg_positions: Vec<usize> = (0..n).filter(|&i| ps[i].side == Side::Alg).collect();
        match (n, alg_positions.len()) {
            (1, 1) if ps[0].arity == 0 => RbaElement::from_rbo(ps[0].map.desuspend()),
            (2, 2) => RbaElement::from_alg(gerstenhaber(&ps[0].map, &ps[1].map)),
            (_, 1) if n >= 2 => {
                let k = alg_positions[0];
                let h = ps[k];
                let gs: Vec<&Piece> = ps
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != k)
                    .map(|(_, p)| *p)
                    .collect();
                let passed: i64 = gs[..k].iter().map(|g| i64::from(g.degree)).sum();
                let exp = i64::from(h.degree) * passed + k as i64;
                let core = self.l_alg_first(h, &gs);
                RbaElement::from_rbo(core.scale(&sign_rat(exp)))
            }
            _ => self.zero(),
        }
    }

    /// `l_{m+1}(sh, g_1, …, g_m)` for `sh` of arity `a` in the first summand
    /// and all `g_j` in the second.
    fn l_alg_first(&self, h: &Piece, gs: &[&Piece]) -> Cochain {
        let m = gs.len();
        let a = h.arity;
        let mut out = Cochain::rbo(&self.space);
        if m == 0 || m > a {
            return out;
        }
        let dh = i64::from(h.degree);
        let gdeg: Vec<i32> = gs.iter().map(|g| g.degree).collect();
        let sg: Vec<Cochain> = gs.iter().map(|g| g.map.suspend()).collect();
        for sigma in permutations(m) {
            let dsig = permute(&sigma, &gdeg);
            let cs = sign_rat(i64::from(
                chi_sign(&sigma, &gdeg) * suspension_sign(&dsig) < 0,
            ));
            let d1 = i64::from(dsig[0]);
            let rest: Vec<&Cochain> = sigma[1..].iter().map(|&j| &sg[j]).collect();
            let nested = sg[sigma[0]].brace(&[&h.map.brace(&rest)]).desuspend();
            if m == a {
                let base = &cs * sign_rat(m as i64 * dh);
                let all: Vec<&Cochain> = sigma.iter().map(|&j| &sg[j]).collect();
                let full = h.map.brace(&all).desuspend();
                out.add_scaled(&base, &full);
                out.add_scaled(&-(&base * sign_rat((d1 + 1) * dh)), &nested);
            } else {
                let exp = 1 + m as i64 * dh + dh * (d1 + 1);
                let c = &cs * sign_rat(exp) * pow(&self.weight, a - m);
                out.add_scaled(&c, &nested);
            }
        }
        out
    }

    /// Left-hand side of the generalized Jacobi identity at level `n`:
    /// `Σ_i Σ_{σ ∈ Sh(i,n-i)} χ(σ) (-1)^{i(n-i)} l_{n-i+1}(l_i(x_σ(1..i)), x_σ(i+1..n))`.
    pub fn jacobi(&self, xs: &[RbaElement]) -> Result<RbaElement, LinftyError> {
        let n = xs.len();
        let degs = homogeneous_degrees(xs)?;
        let mut out = self.zero();
        for i in 1..=n {
            for sigma in shuffles(i, n - i) {
                let c =
                    chi_sign(&sigma, &degs) as i64 * if (i * (n - i)) % 2 == 0 { 1 } else { -1 };
                let inner_args: Vec<RbaElement> =
                    sigma[..i].iter().map(|&j| xs[j].clone()).collect();
                let inner = self.l(&inner_args)?;
                if inner.is_zero() {
                    continue;
                }
                let mut outer_args = vec![inner];
                outer_args.extend(sigma[i..].iter().map(|&j| xs[j].clone()));
                let v = self.l(&outer_args)?;
                out.add_scaled(&Rational::from_integer(c.into()), &v);
            }
        }
        Ok(out)
    }

    /// `l_n(x_σ(1), …, x_σ(n)) - χ(σ; x) l_n(x_1, …, x_n)`.
    pub fn antisymmetry_defect(
        &self,
        xs: &[RbaElement],
        sigma: &[usize],
    ) -> Result<RbaElement, LinftyError> {
        let degs = homogeneous_degrees(xs)?;
        let permuted: Vec<RbaElement> = permute(sigma, xs);
        let mut out = self.l(&permuted)?;
        let c = chi_sign(sigma, &degs);
        out.add_scaled(&-Rational::from_integer(c.into()), &self.l(xs)?);
        Ok(out)
    }

    /// Terms `(1/n!)(-1)^{n(n-1)/2} l_n(α^{⊗n})` of the Maurer-Cartan series,
    /// up to the level after which every term vanishes.
    pub fn mc_terms(&self, alpha: &RbaElement) -> Result<Vec<RbaElement>, LinftyError> {
        let top = 2.max(alpha.alg.max_arity() + 1);
        let mut out = Vec::new();
        for n in 1..=top + 1 {
            let args = vec![alpha.clone(); n];
            let c = sign_rat((n * (n - 1) / 2) as i64) / factorial(n);
            let term = self.l(&args)?.scale(&c);
            if n == top + 1 {
                if !term.is_zero() {
                    return Err(LinftyError::Divergence(n));
                }
            } else {
                out.push(term);
            }
        }
        Ok(out)
    }

    /// `Σ_n (1/n!)(-1)^{n(n-1)/2} l_n(α^{⊗n})`.
    pub fn mc_lhs(&self, alpha: &RbaElement) -> Result<RbaElement, LinftyError> {
        let mut out = self.zero();
        for t in self.mc_terms(alpha)? {
            out.add_assign(&t);
        }
        Ok(out)
    }

    pub fn is_maurer_cartan(&self, alpha: &RbaElement) -> Result<bool, LinftyError> {
        if !alpha.is_zero() && alpha.degree() != Some(-1) {
            return Err(LinftyError::WrongDegree {
                expected: -1,
                found: alpha.degree(),
            });
        }
        Ok(self.mc_lhs(alpha)?.is_zero())
    }

    /// Twisted operator `l^α_n(x) = Σ_i (1/i!)(-1)^{in + i(i-1)/2} l_{n+i}(α^{⊗i}, x)`.
    pub fn twisted(
        &self,
        alpha: &RbaElement,
        xs: &[RbaElement],
    ) -> Result<RbaElement, LinftyError> {
        let n = xs.len();
        let arity = xs
            .iter()
            .map(|x| x.alg.max_arity())
            .chain([alpha.alg.max_arity()])
            .max()
            .unwrap_or(0);
        let top = (arity + 1).max(2).saturating_sub(n);
        let mut out = self.zero();
        for i in 0..=top + 1 {
            let mut args = vec![alpha.clone(); i];
            args.extend(xs.iter().cloned());
            let c = sign_rat((i * n + i * i.saturating_sub(1) / 2) as i64) / factorial(i);
            let term = self.l(&args)?;
            if i == top + 1 {
                if !term.is_zero() {
                    return Err(LinftyError::Divergence(n + i));
                }
            } else {
                out.add_scaled(&c, &term);
            }
        }
        Ok(out)
    }
}

fn homogeneous_degrees(xs: &[RbaElement]) -> Result<Vec<i32>, LinftyError> {
    xs.iter()
        .map(|x| {
            if x.is_zero() {
                Ok(0)
            } else {
                x.degree().ok_or(LinftyError::Inhomogeneous)
            }
        })
        .collect()
}

/// Maurer-Cartan element `(m, τ)` of a product and operator on an ungraded
/// space: `m = -s μ (s^{-1})^{⊗2}`, `τ = T s^{-1}`.
pub fn mc_element(space: &Arc<GradedSpace>, mult: &Algebra, op: &LinearMap) -> RbaElement {
    let d = space.dim();
    let mu = Multilinear::from_vec(d, d, 2, mult.structure_constants().to_vec());
    let t = Multilinear::from_vec(d, d, 1, op.entries().to_vec());
    RbaElement::new(
        mu.to_cochain(space, Shift::Suspended),
        t.to_cochain(space, Shift::Plain),
    )
}

pub fn mc_from_rb(a: &RbAlgebra) -> RbaElement {
    mc_element(&a.space(), a.algebra(), a.operator())
}

/// Inverse of [`mc_element`]: `μ = s^{-1} m s^{⊗2}`, `T = τ s`.
pub fn rb_from_mc(alpha: &RbaElement) -> Result<(Algebra, LinearMap), LinftyError> {
    let space = alpha.space();
    if !space.is_concentrated_in_zero() {
        return Err(LinftyError::NotUngraded);
    }
    let d = space.dim();
    let mu = Multilinear::from_cochain(&alpha.alg, 2);
    let t = Multilinear::from_cochain(&alpha.rbo, 1);
    let alg = Algebra::unchecked(d, mu.data).expect("shape is fixed");
    let op = LinearMap::new(d, t.data).expect("shape is fixed");
    Ok((alg, op))
}

/// The differential graded Lie algebra on `𝔠_RBO(A)` obtained by twisting
/// with `(m, 0)`, written out explicitly.
pub struct RboDgla {
    m: Cochain,
    weight: Rational,
}

impl RboDgla {
    pub fn new(alg: &Algebra, weight: Rational) -> Self {
        let space = Arc::new(GradedSpace::ungraded(alg.dim()));
        let alpha = mc_element(&space, alg, &LinearMap::zero(alg.dim()));
        RboDgla {
            m: alpha.alg,
            weight,
        }
    }

    /// `l_1(f) = (-1)^n λ f{m}` for `f` of arity `n`.
    pub fn l1(&self, f: &Cochain) -> Cochain {
        let mut out = Cochain::rbo(self.m.space());
        for (n, part) in f.arity_parts() {
            out.add_scaled(
                &(sign_rat(n as i64) * &self.weight),
                &part.brace(&[&self.m]),
            );
        }
        out
    }

    /// `l_2(f, g) = (-1)^n s^{-1}m(sf ⊗ sg) + f{m{sg}}
    ///   + (-1)^{nk+1+k} s^{-1}m(sg ⊗ sf) - (-1)^{nk} g{m{sf}}`.
    pub fn l2(&self, f: &Cochain, g: &Cochain) -> Cochain {
        let mut out = Cochain::rbo(self.m.space());
        for (n, fp) in f.arity_parts() {
            for (k, gp) in g.arity_parts() {
                let (sf, sg) = (fp.suspend(), gp.suspend());
                let (n, k) = (n as i64, k as i64);
                out.add_scaled(&sign_rat(n), &self.m.brace(&[&sf, &sg]).desuspend());
                out.add_assign(&fp.brace(&[&self.m.brace(&[&sg])]));
                out.add_scaled(
                    &sign_rat(n * k + 1 + k),
                    &self.m.brace(&[&sg, &sf]).desuspend(),
                );
                out.add_scaled(&-sign_rat(n * k), &gp.brace(&[&self.m.brace(&[&sf])]));
            }
        }
        out
    }

    /// Maurer-Cartan expression `l_1(τ) - ½ l_2(τ, τ)`.
    pub fn mc_lhs(&self, tau: &Cochain) -> Cochain {
        let mut out = self.l1(tau);
        out.add_scaled(&-Rational::new(1.into(), 2.into()), &self.l2(tau, tau));
        out
    }

    /// Differential twisted by `τ`: `l_1(f) - l_2(τ, f)`.
    pub fn twisted_l1(&self, tau: &Cochain, f: &Cochain) -> Cochain {
        self.l1(f).minus(&self.l2(tau, f))
    }
}

/// A basis map of `𝔠_RBA(V)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BasisMap {
    pub alg: bool,
    pub inputs: Vec<u16>,
    pub output: u16,
}

impl BasisMap {
    pub fn element(&self, space: &Arc<GradedSpace>, c: Rational) -> RbaElement {
        if self.alg {
            RbaElement::from_alg(Cochain::alg(space).with_term(&self.inputs, self.output, c))
        } else {
            RbaElement::from_rbo(Cochain::rbo(space).with_term(&self.inputs, self.output, c))
        }
    }

    pub fn degree(&self, space: &GradedSpace) -> i32 {
        let ins: i32 = self
            .inputs
            .iter()
            .map(|i| space.degree(*i as usize) + 1)
            .sum();
        space.degree(self.output as usize) + i32::from(self.alg) - ins
    }
}

/// All basis maps of arity at most `max_arity`, grouped by (summand, arity, degree).
pub fn basis_classes(
    space: &GradedSpace,
    max_arity: usize,
) -> BTreeMap<(bool, usize, i32), Vec<BasisMap>> {
    let d = space.dim();
    let mut out: BTreeMap<(bool, usize, i32), Vec<BasisMap>> = BTreeMap::new();
    for arity in 0..=max_arity {
        let mut tuple = vec![0u16; arity];
        loop {
            for o in 0..d as u16 {
                for alg in [true, false] {
                    let b = BasisMap {
                        alg,
                        inputs: tuple.clone(),
                        output: o,
                    };
                    out.entry((alg, arity, b.degree(space)))
                        .or_default()
                        .push(b);
                }
            }
            let mut carry = true;
            for slot in tuple.iter_mut().rev() {
                *slot += 1;
                if (*slot as usize) < d {
                    carry = false;
                    break;
                }
                *slot = 0;
            }
            if carry {
                break;
            }
        }
    }
    out
}

/// Random homogeneous element: a class is chosen, then coefficients in
/// `{-2, …, 2}` on each of its basis maps.
pub fn random_homogeneous<R: Rng>(
    space: &Arc<GradedSpace>,
    classes: &BTreeMap<(bool, usize, i32), Vec<BasisMap>>,
    rng: &mut R,
) -> RbaElement {
    let keys: Vec<&(bool, usize, i32)> = classes.keys().collect();
    let key = keys[rng.gen_range(0..keys.len())];
    let mut out = RbaElement::zero(space);
    for b in &classes[key] {
        let c: i64 = rng.gen_range(-2..=2);
        if c != 0 {
            out.add_assign(&b.element(space, Rational::from_integer(c.into())));
        }
    }
    if out.is_zero() {
        out = classes[key][0].element(space, Rational::one());
    }
    out
}

/// Outcome of a verification sweep.
#[derive(Clone, Debug, Default)]
pub struct SweepReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks anti-symmetry and the generalized Jacobi identity for levels
/// `2..=max_level` on `samples` random homogeneous tuples per level.
pub fn sweep<R: Rng>(
    l: &RbaLInfinity,
    max_arity: usize,
    max_level: usize,
    samples: usize,
    rng: &mut R,
) -> SweepReport {
    let classes = basis_classes(l.space(), max_arity);
    let mut report = SweepReport::default();
    for n in 1..=max_level {
        for s in 0..samples {
            let xs: Vec<RbaElement> = (0..n)
                .map(|_| random_homogeneous(l.space(), &classes, rng))
                .collect();
            report.checked += 1;
            match l.jacobi(&xs) {
                Ok(j) if j.is_zero() => {}
                Ok(_) => report.failures.push(format!("jacobi level {n} sample {s}")),
                Err(e) => report
                    .failures
                    .push(format!("jacobi level {n} sample {s}: {e}")),
            }
            let perms = permutations(n);
            let sigma = &perms[rng.gen_range(0..perms.len())];
            match l.antisymmetry_defect(&xs, sigma) {
                Ok(d) if d.is_zero() => {}
                Ok(_) => report
                    .failures
                    .push(format!("antisymmetry level {n} sample {s}")),
                Err(e) => report
                    .failures
                    .push(format!("antisymmetry level {n} sample {s}: {e}")),
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use crate::rb::catalog;

    #[test]
    fn mc_expansion_of_rb_structure() {
        // l_2(α, α) = ([m, m], 2λ τ∘m) and the series stops after l_3
        for w in catalog::weights() {
            for a in catalog::algebras(&w) {
                let l = RbaLInfinity::new(a.space(), w.clone());
                let alpha = mc_from_rb(&a);
                let l2 = l.l(&[alpha.clone(), alpha.clone()]).unwrap();
                assert!(l2.alg.is_zero());
                let tau_m = alpha.rbo.suspend().brace(&[&alpha.alg]).desuspend();
                assert_eq!(l2.rbo, tau_m.scale(&(int(2) * &w)));
                assert!(l.is_maurer_cartan(&alpha).unwrap());
            }
        }
    }

    #[test]
    fn round_trip_of_mc_element() {
        let a = catalog::upper_triangular(&int(1));
        let (alg, op) = rb_from_mc(&mc_from_rb(&a)).unwrap();
        assert_eq!(&alg, a.algebra());
        assert_eq!(&op, a.operator());
    }
}
