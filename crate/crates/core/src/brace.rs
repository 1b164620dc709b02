//! Multilinear maps on a graded space, brace operations, partial
//! compositions and the Gerstenhaber bracket.
//!
//! A [`Cochain`] is a finite sum of basis maps
//! `x_{i_1} ⊗ … ⊗ x_{i_n} ↦ c · x_o`, where inputs and output each live either
//! in `V` or in its suspension `sV`. Elements of `Hom(T^c(sV), sV)` have
//! suspended inputs and output; elements of `Hom(T^c(sV), V)` have
//! suspended inputs and a plain output. Arities may be mixed.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num::{One, Zero};

use crate::exact::{format_rational, Rational};
use crate::graded::{parity_sign, suspension_sign, GradedSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shift {
    Plain,
    Suspended,
}

impl Shift {
    fn offset(self) -> i32 {
        match self {
            Shift::Plain => 0,
            Shift::Suspended => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub inputs: Vec<u16>,
    pub output: u16,
}

impl Term {
    pub fn new(inputs: Vec<u16>, output: u16) -> Self {
        Term { inputs, output }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    space: Arc<GradedSpace>,
    input: Shift,
    output: Shift,
    terms: BTreeMap<Term, Rational>,
}

impl Cochain {
    pub fn zero(space: &Arc<GradedSpace>, input: Shift, output: Shift) -> Self {
        Cochain {
            space: Arc::clone(space),
            input,
            output,
            terms: BTreeMap::new(),
        }
    }

    /// Zero element of `Hom(T^c(sV), sV)`.
    pub fn alg(space: &Arc<GradedSpace>) -> Self {
        Cochain::zero(space, Shift::Suspended, Shift::Suspended)
    }

    /// Zero element of `Hom(T^c(sV), V)`.
    pub fn rbo(space: &Arc<GradedSpace>) -> Self {
        Cochain::zero(space, Shift::Suspended, Shift::Plain)
    }

    /// Zero element of `Hom(T(V), V)`.
    pub fn plain(space: &Arc<GradedSpace>) -> Self {
        Cochain::zero(space, Shift::Plain, Shift::Plain)
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn input_shift(&self) -> Shift {
        self.input
    }

    pub fn output_shift(&self) -> Shift {
        self.output
    }

    pub fn same_frame(&self, other: &Cochain) -> bool {
        self.input == other.input && self.output == other.output && self.space == other.space
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Term, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, inputs: &[u16], output: u16) -> Rational {
        self.terms
            .get(&Term::new(inputs.to_vec(), output))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, inputs: Vec<u16>, output: u16, c: Rational) {
        debug_assert!(inputs.iter().all(|i| (*i as usize) < self.space.dim()));
        debug_assert!((output as usize) < self.space.dim());
        if c.is_zero() {
            return;
        }
        let key = Term::new(inputs, output);
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn with_term(mut self, inputs: &[u16], output: u16, c: Rational) -> Self {
        self.add_term(inputs.to_vec(), output, c);
        self
    }

    pub fn input_degree(&self, i: u16) -> i32 {
        self.space.degree(i as usize) + self.input.offset()
    }

    pub fn output_degree(&self, o: u16) -> i32 {
        self.space.degree(o as usize) + self.output.offset()
    }

    /// Degree of a single basis map as a graded linear map.
    pub fn term_degree(&self, t: &Term) -> i32 {
        self.output_degree(t.output) - t.inputs.iter().map(|i| self.input_degree(*i)).sum::<i32>()
    }

    /// The common degree of all terms, or `None` if inhomogeneous or zero.
    pub fn degree(&self) -> Option<i32> {
        let mut it = self.terms.keys().map(|t| self.term_degree(t));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// The common arity of all terms, or `None` if mixed or zero.
    pub fn arity(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|t| t.inputs.len());
        let first = it.next()?;
        it.all(|a| a == first).then_some(first)
    }

    pub fn max_arity(&self) -> usize {
        self.terms.keys().map(|t| t.inputs.len()).max().unwrap_or(0)
    }

    pub fn homogeneous_parts(&self) -> BTreeMap<i32, Cochain> {
        let mut parts: BTreeMap<i32, Cochain> = BTreeMap::new();
        for (t, c) in &self.terms {
            let d = self.term_degree(t);
            parts
                .entry(d)
                .or_insert_with(|| Cochain::zero(&self.space, self.input, self.output))
                .terms
                .insert(t.clone(), c.clone());
        }
        parts
    }

    pub fn arity_parts(&self) -> BTreeMap<usize, Cochain> {
        let mut parts: BTreeMap<usize, Cochain> = BTreeMap::new();
        for (t, c) in &self.terms {
            parts
                .entry(t.inputs.len())
                .or_insert_with(|| Cochain::zero(&self.space, self.input, self.output))
                .terms
                .insert(t.clone(), c.clone());
        }
        parts
    }

    pub fn arity_component(&self, n: usize) -> Cochain {
        let mut out = Cochain::zero(&self.space, self.input, self.output);
        for (t, c) in &self.terms {
            if t.inputs.len() == n {
                out.terms.insert(t.clone(), c.clone());
            }
        }
        out
    }

    pub fn add_assign(&mut self, other: &Cochain) {
        assert!(
            self.same_frame(other),
            "adding cochains of different frames"
        );
        for (t, c) in &other.terms {
            self.add_term(t.inputs.clone(), t.output, c.clone());
        }
    }

    pub fn add_scaled(&mut self, c: &Rational, other: &Cochain) {
        assert!(
            self.same_frame(other),
            "adding cochains of different frames"
        );
        if c.is_zero() {
            return;
        }
        for (t, v) in &other.terms {
            self.add_term(t.inputs.clone(), t.output, c * v);
        }
    }

    pub fn plus(&self, other: &Cochain) -> Cochain {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn minus(&self, other: &Cochain) -> Cochain {
        let mut out = self.clone();
        out.add_scaled(&-Rational::one(), other);
        out
    }

    pub fn scale(&self, c: &Rational) -> Cochain {
        let mut out = Cochain::zero(&self.space, self.input, self.output);
        if !c.is_zero() {
            for (t, v) in &self.terms {
                out.terms.insert(t.clone(), v * c);
            }
        }
        out
    }

    pub fn neg(&self) -> Cochain {
        self.scale(&-Rational::one())
    }

    /// Post-composes with `s` or `s^{-1}`: coefficients are unchanged, only
    /// the output is relabelled.
    pub fn with_output(&self, output: Shift) -> Cochain {
        Cochain {
            space: Arc::clone(&self.space),
            input: self.input,
            output,
            terms: self.terms.clone(),
        }
    }

    /// `s ∘ g`.
    pub fn suspend(&self) -> Cochain {
        assert_eq!(self.output, Shift::Plain, "output already suspended");
        self.with_output(Shift::Suspended)
    }

    /// `s^{-1} ∘ f`.
    pub fn desuspend(&self) -> Cochain {
        assert_eq!(self.output, Shift::Suspended, "output not suspended");
        self.with_output(Shift::Plain)
    }

    /// The map `V^{⊗n} → V` corresponding to a map with suspended inputs:
    /// `f ↦ s^{-1} ∘ f ∘ s^{⊗n}` for suspended outputs and `g ↦ g ∘ s^{⊗n}`
    /// for plain outputs.
    pub fn unsuspended(&self) -> Cochain {
        assert_eq!(self.input, Shift::Suspended, "inputs already unsuspended");
        let mut out = Cochain::plain(&self.space);
        for (t, c) in &self.terms {
            let degs: Vec<i32> = t
                .inputs
                .iter()
                .map(|i| self.space.degree(*i as usize))
                .collect();
            let s = Rational::from_integer(suspension_sign(&degs).into());
            out.terms.insert(t.clone(), c * s);
        }
        out
    }

    /// Inverse of [`Cochain::unsuspended`] with the given output frame.
    pub fn suspended_from(plain: &Cochain, output: Shift) -> Cochain {
        assert_eq!(plain.input, Shift::Plain);
        assert_eq!(plain.output, Shift::Plain);
        let mut out = Cochain::zero(&plain.space, Shift::Suspended, output);
        for (t, c) in &plain.terms {
            let degs: Vec<i32> = t
                .inputs
                .iter()
                .map(|i| plain.space.degree(*i as usize))
                .collect();
            let s = Rational::from_integer(suspension_sign(&degs).into());
            out.terms.insert(t.clone(), c * s);
        }
        out
    }

    /// Value on a basis tuple, as a sparse vector over the output basis.
    pub fn evaluate(&self, inputs: &[u16]) -> BTreeMap<u16, Rational> {
        self.terms
            .range(Term::new(inputs.to_vec(), 0)..)
            .take_while(|(t, _)| t.inputs == inputs)
            .map(|(t, c)| (t.output, c.clone()))
            .collect()
    }

    /// Brace operation `f{g_1, …, g_n}`: insert the `g_k` into distinct
    /// inputs of `f`, in order, with the Koszul sign of each `g_k` passing
    /// the inputs to its left. Returns zero when `n` exceeds every arity of `f`.
    pub fn brace(&self, gs: &[&Cochain]) -> Cochain {
        for g in gs {
            assert_eq!(g.space, self.space, "brace across different spaces");
            assert_eq!(
                g.input, self.input,
                "inserted map has the wrong input frame"
            );
            assert_eq!(
                g.output, self.input,
                "inserted map output must match the inputs of f"
            );
        }
        let mut out = Cochain::zero(&self.space, self.input, self.output);
        if gs.is_empty() {
            out.terms = self.terms.clone();
            return out;
        }
        let indexed: Vec<HashMap<u16, Vec<(&Term, &Rational, i32)>>> = gs
            .iter()
            .map(|g| {
                let mut by_out: HashMap<u16, Vec<(&Term, &Rational, i32)>> = HashMap::new();
                for (t, c) in &g.terms {
                    by_out
                        .entry(t.output)
                        .or_default()
                        .push((t, c, g.term_degree(t)));
                }
                by_out
            })
            .collect();
        let mut acc: HashMap<Term, Rational> = HashMap::new();
        for (ft, fc) in &self.terms {
            if ft.inputs.len() < gs.len() {
                continue;
            }
            let mut ctx = BraceWalk {
                f_inputs: &ft.inputs,
                f_output: ft.output,
                gs: &indexed,
                cochain: self,
                result: Vec::new(),
                acc: &mut acc,
            };
            ctx.walk(0, 0, 0, 0, fc.clone());
        }
        for (t, c) in acc {
            if !c.is_zero() {
                out.terms.insert(t, c);
            }
        }
        out
    }

    /// Partial composition `f ∘_i g = f ∘ (Id^{⊗(i-1)} ⊗ g ⊗ Id^{⊗(m-i)})`,
    /// with `i` one-based. Applied to the arity-`m` part of `f` only when
    /// `i <= m`.
    pub fn circ(&self, i: usize, g: &Cochain) -> Cochain {
        assert!(i >= 1, "partial composition index is one-based");
        assert_eq!(g.output, self.input);
        assert_eq!(g.input, self.input);
        let mut out = Cochain::zero(&self.space, self.input, self.output);
        for (ft, fc) in &self.terms {
            if ft.inputs.len() < i {
                continue;
            }
            let slot = ft.inputs[i - 1];
            let prefix: i32 = ft.inputs[..i - 1]
                .iter()
                .map(|x| self.input_degree(*x))
                .sum();
            for (gt, gc) in &g.terms {
                if gt.output != slot {
                    continue;
                }
                let sign = parity_sign(i64::from(g.term_degree(gt)) * i64::from(prefix));
                let mut inputs = ft.inputs[..i - 1].to_vec();
                inputs.extend_from_slice(&gt.inputs);
                inputs.extend_from_slice(&ft.inputs[i..]);
                let c = fc * gc * Rational::from_integer(sign.into());
                out.add_term(inputs, ft.output, c);
            }
        }
        out
    }

    /// `f ∘ (g_1 ⊗ … ⊗ g_m)` on the arity-`m` part of `f`, with Koszul
    /// signs; equal to the brace with every input filled.
    pub fn compose_all(&self, gs: &[&Cochain]) -> Cochain {
        self.arity_component(gs.len()).brace(gs)
    }
}

struct BraceWalk<'a> {
    f_inputs: &'a [u16],
    f_output: u16,
    gs: &'a [HashMap<u16, Vec<(&'a Term, &'a Rational, i32)>>],
    cochain: &'a Cochain,
    result: Vec<u16>,
    acc: &'a mut HashMap<Term, Rational>,
}

impl BraceWalk<'_> {
    fn walk(&mut self, pos: usize, k: usize, prefix_deg: i64, sign_exp: i64, coeff: Rational) {
        let m = self.f_inputs.len();
        let n = self.gs.len();
        let base_len = self.result.len();
        if k == n {
            self.result.extend_from_slice(&self.f_inputs[pos..]);
            let c = if sign_exp % 2 == 0 { coeff } else { -coeff };
            *self
                .acc
                .entry(Term::new(self.result.clone(), self.f_output))
                .or_insert_with(Rational::zero) += c;
            self.result.truncate(base_len);
            return;
        }
        let mut deg = prefix_deg;
        for p in pos..=(m - (n - k)) {
            if p > pos {
                let x = self.f_inputs[p - 1];
                self.result.push(x);
                deg += i64::from(self.cochain.input_degree(x));
            }
            if let Some(cands) = self.gs[k].get(&self.f_inputs[p]) {
                for (gt, gc, gdeg) in cands {
                    let len = self.result.len();
                    self.result.extend_from_slice(&gt.inputs);
                    let inner: i64 = gt
                        .inputs
                        .iter()
                        .map(|x| i64::from(self.cochain.input_degree(*x)))
                        .sum();
                    self.walk(
                        p + 1,
                        k + 1,
                        deg + inner,
                        sign_exp + i64::from(*gdeg) * deg,
                        &coeff * *gc,
                    );
                    self.result.truncate(len);
                }
            }
        }
        self.result.truncate(base_len);
    }
}

/// Gerstenhaber bracket `[f, g] = f{g} - (-1)^{|f||g|} g{f}`, degrees taken
/// as maps with suspended output; inhomogeneous inputs are split by degree.
pub fn gerstenhaber(f: &Cochain, g: &Cochain) -> Cochain {
    let mut out = Cochain::zero(f.space(), f.input_shift(), f.output_shift());
    for (df, fp) in f.homogeneous_parts() {
        for (dg, gp) in g.homogeneous_parts() {
            out.add_assign(&fp.brace(&[&gp]));
            let s = parity_sign(i64::from(df) * i64::from(dg));
            out.add_scaled(&Rational::from_integer((-s).into()), &gp.brace(&[&fp]));
        }
    }
    out
}

/// Right-hand side of the pre-Jacobi identity for
/// `(f{g_1..g_m}){h_1..h_n}` with homogeneous arguments.
pub fn pre_jacobi_rhs(f: &Cochain, gs: &[&Cochain], hs: &[&Cochain]) -> Cochain {
    let m = gs.len();
    let n = hs.len();
    let hdeg: Vec<i64> = hs
        .iter()
        .map(|h| i64::from(h.degree().unwrap_or(0)))
        .collect();
    let gdeg: Vec<i64> = gs
        .iter()
        .map(|g| i64::from(g.degree().unwrap_or(0)))
        .collect();
    let mut out = Cochain::zero(f.space(), f.input_shift(), f.output_shift());
    // choose 0 <= i_1 <= j_1 <= i_2 <= ... <= j_m <= n
    fn rec(
        k: usize,
        start: usize,
        m: usize,
        n: usize,
        bounds: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if k == m {
            out.push(bounds.clone());
            return;
        }
        for i in start..=n {
            for j in i..=n {
                bounds.push((i, j));
                rec(k + 1, j, m, n, bounds, out);
                bounds.pop();
            }
        }
    }
    let mut all = Vec::new();
    rec(0, 0, m, n, &mut Vec::new(), &mut all);
    for bounds in all {
        let mut exp = 0i64;
        let mut args: Vec<Cochain> = Vec::new();
        let mut cursor = 0;
        for (k, &(i, j)) in bounds.iter().enumerate() {
            exp += gdeg[k] * hdeg[..i].iter().sum::<i64>();
            for h in &hs[cursor..i] {
                args.push((*h).clone());
            }
            let inner: Vec<&Cochain> = hs[i..j].to_vec();
            args.push(gs[k].brace(&inner));
            cursor = j;
        }
        for h in &hs[cursor..] {
            args.push((*h).clone());
        }
        let refs: Vec<&Cochain> = args.iter().collect();
        let s = Rational::from_integer(parity_sign(exp).into());
        out.add_scaled(&s, &f.brace(&refs));
    }
    out
}

/// Human-readable listing, one basis map per line.
pub fn describe(c: &Cochain) -> String {
    let mut lines = Vec::new();
    for (t, v) in c.terms() {
        let ins: Vec<String> = t
            .inputs
            .iter()
            .map(|i| c.space().label(*i as usize).to_string())
            .collect();
        lines.push(format!(
            "({}) -> {} : {}",
            ins.join(","),
            c.space().label(t.output as usize),
            format_rational(v)
        ));
    }
    lines.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn space() -> Arc<GradedSpace> {
        Arc::new(GradedSpace::new(vec![0, 1]))
    }

    #[test]
    fn empty_brace_is_identity() {
        let v = space();
        let f = Cochain::alg(&v).with_term(&[0, 1], 1, int(3));
        assert_eq!(f.brace(&[]), f);
    }

    #[test]
    fn brace_with_one_argument_sums_partial_compositions() {
        let v = space();
        let f = Cochain::alg(&v)
            .with_term(&[0, 1], 1, int(2))
            .with_term(&[1, 1], 0, int(1));
        let g = Cochain::alg(&v)
            .with_term(&[1], 0, int(1))
            .with_term(&[0, 0], 1, int(-1));
        let mut sum = f.circ(1, &g);
        sum.add_assign(&f.circ(2, &g));
        assert_eq!(f.brace(&[&g]), sum);
    }

    #[test]
    fn koszul_sign_in_composition() {
        // f∘_2 g on (a, b) picks up (-1)^{|g||a|}, with |se0| = 1, |se1| = 2
        let v = space();
        let f = Cochain::alg(&v).with_term(&[1, 1], 1, int(1));
        let f2 = Cochain::alg(&v).with_term(&[0, 1], 1, int(1));
        let g = Cochain::alg(&v).with_term(&[1], 1, int(1)); // degree 0
        let h = Cochain::alg(&v).with_term(&[0], 1, int(1)); // degree 1
        assert_eq!(f.circ(2, &g).coefficient(&[1, 1], 1), int(1));
        assert_eq!(f.circ(2, &h).coefficient(&[1, 0], 1), int(1));
        assert_eq!(f2.circ(2, &h).coefficient(&[0, 0], 1), int(-1));
        assert_eq!(f.circ(1, &h).coefficient(&[0, 1], 1), int(1));
    }

    #[test]
    fn unsuspension_roundtrip() {
        let v = space();
        let f = Cochain::alg(&v)
            .with_term(&[1, 1], 0, int(5))
            .with_term(&[0, 1, 1], 1, int(-2));
        let p = f.unsuspended();
        // s^{⊗3} on (e0, e1, e1) has sign (-1)^{2·0 + 1·1} = -1
        assert_eq!(p.coefficient(&[0, 1, 1], 1), int(2));
        assert_eq!(Cochain::suspended_from(&p, Shift::Suspended), f);
    }
}
