//! Formal deformations of Rota-Baxter algebras: jets, obstructions,
//! order-by-order extension, gauge equivalence, rigidity and abelian
//! extensions.
//!
//! A jet of order `k` is `μ_t = Σ_{i≤k} μ_i t^i`, `T_t = Σ_{i≤k} T_i t^i`
//! with `(μ_0, T_0)` the base structure. It is valid when the associativity
//! and Rota-Baxter relations hold modulo `t^{k+1}`.

pub mod extension;

use num::{One, Zero};
use rand::Rng;
use thiserror::Error;

use crate::exact::{int, is_zero_vec, Matrix, Rational};
use crate::rb::{ComplexKind, Multilinear, RbAlgebra, RbPair};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DeformError {
    #[error("order {order} is obstructed, class {class:?}")]
    Obstructed {
        order: usize,
        class: ObstructionClass,
    },
    #[error("order {0} admits no solution")]
    Unsolvable(usize),
    #[error("term of order {0} is not a coboundary")]
    NotTrivializable(usize),
    #[error("jets have different base structures or orders")]
    Mismatch,
    #[error("no gauge transformation found at order {0}")]
    NotEquivalent(usize),
}

/// Which parts of the structure are allowed to move.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    Full,
    OperatorOnly,
    ProductOnly,
}

/// Coordinates of an obstruction in a basis of `H^3_RBA`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionClass {
    /// Whether `d^3` annihilates the obstruction cochain.
    pub cocycle: bool,
    pub coordinates: Vec<Rational>,
}

/// Affine solution space of one order: `particular + span(kernel)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelSolutions {
    pub particular: Vec<Rational>,
    pub kernel: Vec<Vec<Rational>>,
}

fn apply1(t: &Multilinear, u: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); t.out_dim];
    for (i, ui) in u.iter().enumerate() {
        if ui.is_zero() {
            continue;
        }
        for (o, v) in t.eval_basis(&[i]).into_iter().enumerate() {
            if !v.is_zero() {
                out[o] += ui * v;
            }
        }
    }
    out
}

fn apply2(m: &Multilinear, u: &[Rational], w: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); m.out_dim];
    for (i, ui) in u.iter().enumerate() {
        if ui.is_zero() {
            continue;
        }
        for (j, wj) in w.iter().enumerate() {
            if wj.is_zero() {
                continue;
            }
            let c = ui * wj;
            for (o, v) in m.eval_basis(&[i, j]).into_iter().enumerate() {
                if !v.is_zero() {
                    out[o] += &c * v;
                }
            }
        }
    }
    out
}

fn unit(d: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); d];
    v[i] = Rational::one();
    v
}

fn add_assign(acc: &mut [Rational], v: &[Rational]) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a += x;
    }
}

fn sub_assign(acc: &mut [Rational], v: &[Rational]) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a -= x;
    }
}

fn identity(d: usize) -> Multilinear {
    let mut m = Multilinear::zeros(d, d, 1);
    for i in 0..d {
        m.add_at(&[i], i, &Rational::one());
    }
    m
}

/// `f ∘ g` for arity-1 maps.
fn compose(f: &Multilinear, g: &Multilinear) -> Multilinear {
    let mut out = Multilinear::zeros(g.in_dim, f.out_dim, 1);
    for a in 0..g.in_dim {
        let v = apply1(f, &g.eval_basis(&[a]));
        for (o, x) in v.iter().enumerate() {
            out.add_at(&[a], o, x);
        }
    }
    out
}

fn add_ml(acc: &mut Multilinear, other: &Multilinear) {
    add_assign(&mut acc.data, &other.data);
}

fn scale_ml(m: &Multilinear, c: &Rational) -> Multilinear {
    Multilinear::from_vec(
        m.in_dim,
        m.out_dim,
        m.arity,
        m.data.iter().map(|x| x * c).collect(),
    )
}

fn get(v: &[Multilinear], i: usize) -> Option<&Multilinear> {
    v.get(i)
}

/// Order-`n` defect in the layout of `C^3_RBA`: associativity
/// `Σ_{i+j=n} μ_i(μ_j(a,b),c) - μ_i(a,μ_j(b,c))` followed by the
/// Rota-Baxter relation written as `T(T(a)b + aT(b) + λab) - T(a)T(b)`.
/// With these orientations the part linear in `(μ_n, T_n)` is `d^2`.
/// Missing coefficients count as zero.
fn level_defect(
    mu: &[Multilinear],
    t: &[Multilinear],
    weight: &Rational,
    n: usize,
) -> Vec<Rational> {
    let d = mu[0].in_dim;
    let mut assoc = Multilinear::zeros(d, d, 3);
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                let mut acc = vec![Rational::zero(); d];
                for i in 0..=n {
                    let (Some(mi), Some(mj)) = (get(mu, i), get(mu, n - i)) else {
                        continue;
                    };
                    let left = apply2(mi, &mj.eval_basis(&[a, b]), &unit(d, c));
                    let right = apply2(mi, &unit(d, a), &mj.eval_basis(&[b, c]));
                    add_assign(&mut acc, &left);
                    sub_assign(&mut acc, &right);
                }
                for (o, x) in acc.iter().enumerate() {
                    assoc.add_at(&[a, b, c], o, x);
                }
            }
        }
    }
    let mut rb = Multilinear::zeros(d, d, 2);
    for a in 0..d {
        for b in 0..d {
            let (ea, eb) = (unit(d, a), unit(d, b));
            let mut acc = vec![Rational::zero(); d];
            for i in 0..=n {
                for j in 0..=n - i {
                    let k = n - i - j;
                    let (Some(mi), Some(tj), Some(tk)) = (get(mu, i), get(t, j), get(t, k)) else {
                        continue;
                    };
                    add_assign(&mut acc, &apply2(mi, &apply1(tj, &ea), &apply1(tk, &eb)));
                }
            }
            for i in 0..=n {
                for j in 0..=n - i {
                    let k = n - i - j;
                    let (Some(ti), Some(mj), Some(tk)) = (get(t, i), get(mu, j), get(t, k)) else {
                        continue;
                    };
                    sub_assign(&mut acc, &apply1(ti, &apply2(mj, &ea, &apply1(tk, &eb))));
                    sub_assign(&mut acc, &apply1(ti, &apply2(mj, &apply1(tk, &ea), &eb)));
                }
                let (Some(ti), Some(mj)) = (get(t, i), get(mu, n - i)) else {
                    continue;
                };
                let v = apply1(ti, &apply2(mj, &ea, &eb));
                for (x, y) in acc.iter_mut().zip(&v) {
                    *x -= weight * y;
                }
            }
            for (o, x) in acc.iter().enumerate() {
                rb.add_at(&[a, b], o, &-x);
            }
        }
    }
    let mut out = assoc.data;
    out.extend(rb.data);
    out
}

/// A truncated formal deformation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Jet {
    base: RbAlgebra,
    /// `mu[i]`, `t[i]` are the coefficients of `t^i`; index 0 is the base.
    mu: Vec<Multilinear>,
    t: Vec<Multilinear>,
}

impl Jet {
    /// The trivial jet of order 0.
    pub fn new(base: RbAlgebra) -> Self {
        let d = base.dim();
        let mu = Multilinear::from_vec(d, d, 2, base.algebra().structure_constants().to_vec());
        let t = Multilinear::from_vec(d, d, 1, base.operator().entries().to_vec());
        Jet {
            base,
            mu: vec![mu],
            t: vec![t],
        }
    }

    /// The jet with all higher coefficients zero up to `order`.
    pub fn trivial(base: RbAlgebra, order: usize) -> Self {
        let mut j = Jet::new(base);
        let d = j.dim();
        for _ in 0..order {
            j.push(Multilinear::zeros(d, d, 2), Multilinear::zeros(d, d, 1));
        }
        j
    }

    pub fn base(&self) -> &RbAlgebra {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn order(&self) -> usize {
        self.mu.len() - 1
    }

    pub fn mu(&self, i: usize) -> &Multilinear {
        &self.mu[i]
    }

    pub fn t(&self, i: usize) -> &Multilinear {
        &self.t[i]
    }

    pub fn push(&mut self, mu: Multilinear, t: Multilinear) {
        let d = self.dim();
        assert!(mu.in_dim == d && mu.out_dim == d && mu.arity == 2);
        assert!(t.in_dim == d && t.out_dim == d && t.arity == 1);
        self.mu.push(mu);
        self.t.push(t);
    }

    /// Appends the order given as a `C^2_RBA` vector `(μ_n, T_n)`.
    pub fn push_vector(&mut self, x: &[Rational]) {
        let d = self.dim();
        let split = d * d * d;
        self.push(
            Multilinear::from_vec(d, d, 2, x[..split].to_vec()),
            Multilinear::from_vec(d, d, 1, x[split..].to_vec()),
        );
    }

    /// `(μ_n, T_n)` as a `C^2_RBA` vector.
    pub fn level_vector(&self, n: usize) -> Vec<Rational> {
        let mut v = self.mu[n].data.clone();
        v.extend(self.t[n].data.iter().cloned());
        v
    }

    pub fn truncate(&self, order: usize) -> Jet {
        Jet {
            base: self.base.clone(),
            mu: self.mu[..=order].to_vec(),
            t: self.t[..=order].to_vec(),
        }
    }

    /// Defect of order `n` in the layout of `C^3_RBA`; coefficients beyond
    /// the jet count as zero.
    pub fn defect(&self, n: usize) -> Vec<Rational> {
        level_defect(&self.mu, &self.t, self.base.weight(), n)
    }

    /// Whether all defects up to the jet's order vanish.
    pub fn is_valid(&self) -> bool {
        (0..=self.order()).all(|n| is_zero_vec(&self.defect(n)))
    }

    /// First order whose defect is nonzero.
    pub fn first_failure(&self) -> Option<usize> {
        (0..=self.order()).find(|n| !is_zero_vec(&self.defect(*n)))
    }

    /// Obstruction to extending to order `k + 1`: minus the defect there
    /// with the new coefficients set to zero, so that the new order must
    /// solve `d^2 (μ_{k+1}, T_{k+1}) = O`.
    pub fn obstruction(&self) -> Vec<Rational> {
        self.defect(self.order() + 1)
            .into_iter()
            .map(|x| -x)
            .collect()
    }

    /// The base structure with its regular bimodule.
    pub fn pair(&self) -> RbPair {
        RbPair::unchecked(
            self.base.clone(),
            crate::rb::RbBimodule::regular(&self.base),
        )
    }

    /// Solutions `(μ_{k+1}, T_{k+1})` of `d^2 x = O`, or the class of the
    /// obstruction in `H^3_RBA`.
    pub fn extend(&self) -> Result<LevelSolutions, DeformError> {
        let pair = self.pair();
        let o = self.obstruction();
        let d2 = pair.coboundary_matrix(ComplexKind::Rba, 2);
        match d2.solve(&o) {
            Some(particular) => Ok(LevelSolutions {
                particular,
                kernel: d2.kernel_basis(),
            }),
            None => Err(DeformError::Obstructed {
                order: self.order() + 1,
                class: obstruction_class(&pair, &o),
            }),
        }
    }

    /// Solutions at order `k + 1` for the given flavor, found by
    /// linearizing the defect directly. Coordinates are the moving parts
    /// only: `(μ, T)`, `T`, or `μ`.
    pub fn extend_linearized(&self, flavor: Flavor) -> Result<LevelSolutions, DeformError> {
        let d = self.dim();
        let n = self.order() + 1;
        let (nm, nt) = (d * d * d, d * d);
        let unknowns = match flavor {
            Flavor::Full => nm + nt,
            Flavor::OperatorOnly => nt,
            Flavor::ProductOnly => nm,
        };
        let eval = |x: &[Rational]| -> Vec<Rational> {
            let full: Vec<Rational> = match flavor {
                Flavor::Full => x.to_vec(),
                Flavor::OperatorOnly => {
                    let mut v = vec![Rational::zero(); nm];
                    v.extend(x.iter().cloned());
                    v
                }
                Flavor::ProductOnly => {
                    let mut v = x.to_vec();
                    v.extend(vec![Rational::zero(); nt]);
                    v
                }
            };
            let mut j = self.clone();
            j.push_vector(&full);
            let mut out = j.defect(n);
            if flavor == Flavor::OperatorOnly {
                out.drain(..d.pow(4));
            }
            out
        };
        let zero = vec![Rational::zero(); unknowns];
        let f0 = eval(&zero);
        let cols: Vec<Vec<Rational>> = (0..unknowns)
            .map(|j| {
                let mut v = eval(&unit(unknowns, j));
                sub_assign(&mut v, &f0);
                v
            })
            .collect();
        let l = Matrix::from_columns(f0.len(), &cols);
        let rhs: Vec<Rational> = f0.iter().map(|x| -x).collect();
        match l.solve(&rhs) {
            Some(particular) => Ok(LevelSolutions {
                particular,
                kernel: l.kernel_basis(),
            }),
            None => Err(DeformError::Unsolvable(n)),
        }
    }

    /// Appends a solution in flavor coordinates.
    pub fn push_flavored(&mut self, flavor: Flavor, x: &[Rational]) {
        let d = self.dim();
        let (nm, nt) = (d * d * d, d * d);
        match flavor {
            Flavor::Full => self.push_vector(x),
            Flavor::OperatorOnly => {
                let mut v = vec![Rational::zero(); nm];
                v.extend(x.iter().cloned());
                self.push_vector(&v);
            }
            Flavor::ProductOnly => {
                let mut v = x.to_vec();
                v.extend(vec![Rational::zero(); nt]);
                self.push_vector(&v);
            }
        }
    }
}

/// Coordinates of a 3-cochain modulo coboundaries in the basis of
/// `H^3_RBA` given by [`RbPair::cohomology`].
pub fn obstruction_class(pair: &RbPair, o: &[Rational]) -> ObstructionClass {
    let cocycle = is_zero_vec(&pair.d(3, o));
    let h3 = pair.cohomology(ComplexKind::Rba, 3);
    let d2 = pair.coboundary_matrix(ComplexKind::Rba, 2);
    let mut cols: Vec<Vec<Rational>> = (0..d2.cols()).map(|c| d2.column(c)).collect();
    let offset = cols.len();
    cols.extend(h3.representatives.iter().cloned());
    let m = Matrix::from_columns(o.len(), &cols);
    let coordinates = match (cocycle, m.solve(o)) {
        (true, Some(c)) => c[offset..].to_vec(),
        _ => Vec::new(),
    };
    ObstructionClass {
        cocycle,
        coordinates,
    }
}

/// Random valid jet built order by order, each order a particular solution
/// plus a random integer combination of the kernel with coefficients in
/// `-1..=1`. Choices leading to an obstruction are redrawn with fewer
/// kernel directions each time; the last of 16 attempts takes none.
pub fn random_jet<R: Rng>(
    base: &RbAlgebra,
    flavor: Flavor,
    order: usize,
    rng: &mut R,
) -> Result<Jet, DeformError> {
    let mut last = None;
    'attempt: for attempt in 0..16 {
        let density = f64::from(15 - attempt) / 15.0;
        let mut jet = Jet::new(base.clone());
        for _ in 0..order {
            let sol = match jet.extend_linearized(flavor) {
                Ok(sol) => sol,
                Err(e) => {
                    last = Some(e);
                    continue 'attempt;
                }
            };
            let mut x = sol.particular.clone();
            for k in &sol.kernel {
                if !rng.gen_bool(density) {
                    continue;
                }
                let c = int(rng.gen_range(-1..=1));
                for (a, b) in x.iter_mut().zip(k) {
                    *a += &c * b;
                }
            }
            jet.push_flavored(flavor, &x);
        }
        return Ok(jet);
    }
    Err(last.expect("at least one attempt"))
}

/// A formal automorphism `ψ_t = Id + Σ_{i≥1} ψ_i t^i`, stored as
/// `ψ_1, …, ψ_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gauge {
    dim: usize,
    terms: Vec<Multilinear>,
}

impl Gauge {
    pub fn identity(dim: usize, order: usize) -> Self {
        Gauge {
            dim,
            terms: vec![Multilinear::zeros(dim, dim, 1); order],
        }
    }

    pub fn new(dim: usize, terms: Vec<Multilinear>) -> Self {
        Gauge { dim, terms }
    }

    pub fn order(&self) -> usize {
        self.terms.len()
    }

    /// `ψ_i`, with `ψ_0 = Id` and zero beyond the stored order.
    pub fn term(&self, i: usize) -> Multilinear {
        if i == 0 {
            identity(self.dim)
        } else {
            self.terms
                .get(i - 1)
                .cloned()
                .unwrap_or_else(|| Multilinear::zeros(self.dim, self.dim, 1))
        }
    }

    /// `φ_n = -Σ_{i=1}^n ψ_i φ_{n-i}`.
    pub fn inverse(&self) -> Gauge {
        let mut phi = vec![identity(self.dim)];
        for n in 1..=self.order() {
            let mut acc = Multilinear::zeros(self.dim, self.dim, 1);
            for i in 1..=n {
                add_ml(&mut acc, &compose(&self.term(i), &phi[n - i]));
            }
            phi.push(scale_ml(&acc, &-Rational::one()));
        }
        phi.remove(0);
        Gauge::new(self.dim, phi)
    }

    /// `self ∘ other` truncated at the larger order.
    pub fn then(&self, other: &Gauge) -> Gauge {
        let k = self.order().max(other.order());
        let terms = (1..=k)
            .map(|n| {
                let mut acc = Multilinear::zeros(self.dim, self.dim, 1);
                for i in 0..=n {
                    add_ml(&mut acc, &compose(&self.term(i), &other.term(n - i)));
                }
                acc
            })
            .collect();
        Gauge::new(self.dim, terms)
    }
}

/// `μ' = ψ^{-1} μ (ψ ⊗ ψ)`, `T' = ψ^{-1} T ψ`; `ψ` is then a formal
/// isomorphism from the result to `jet`.
pub fn apply_gauge(jet: &Jet, psi: &Gauge) -> Jet {
    let d = jet.dim();
    let k = jet.order();
    let phi = psi.inverse();
    let mut x = Vec::with_capacity(k + 1);
    let mut y = Vec::with_capacity(k + 1);
    for n in 0..=k {
        let mut xn = Multilinear::zeros(d, d, 2);
        for i in 0..=n {
            for j in 0..=n - i {
                let l = n - i - j;
                let (pj, pl) = (psi.term(j), psi.term(l));
                for a in 0..d {
                    for b in 0..d {
                        let v = apply2(&jet.mu[i], &pj.eval_basis(&[a]), &pl.eval_basis(&[b]));
                        for (o, c) in v.iter().enumerate() {
                            xn.add_at(&[a, b], o, c);
                        }
                    }
                }
            }
        }
        x.push(xn);
        let mut yn = Multilinear::zeros(d, d, 1);
        for i in 0..=n {
            add_ml(&mut yn, &compose(&jet.t[i], &psi.term(n - i)));
        }
        y.push(yn);
    }
    let mut mu = Vec::with_capacity(k + 1);
    let mut t = Vec::with_capacity(k + 1);
    for n in 0..=k {
        let mut mn = Multilinear::zeros(d, d, 2);
        let mut tn = Multilinear::zeros(d, d, 1);
        for p in 0..=n {
            let ph = phi.term(p);
            for a in 0..d {
                for b in 0..d {
                    let v = apply1(&ph, &x[n - p].eval_basis(&[a, b]));
                    for (o, c) in v.iter().enumerate() {
                        mn.add_at(&[a, b], o, c);
                    }
                }
            }
            add_ml(&mut tn, &compose(&ph, &y[n - p]));
        }
        mu.push(mn);
        t.push(tn);
    }
    Jet {
        base: jet.base.clone(),
        mu,
        t,
    }
}

/// Residual of `ψ μ_a = μ_b (ψ ⊗ ψ)` and `ψ T_a = T_b ψ` at order `n`,
/// as a `C^2_RBA` vector.
fn gauge_residual(a: &Jet, b: &Jet, psi: &Gauge, n: usize) -> Vec<Rational> {
    let d = a.dim();
    let mut m = Multilinear::zeros(d, d, 2);
    for x in 0..d {
        for y in 0..d {
            let mut acc = vec![Rational::zero(); d];
            for p in 0..=n {
                add_assign(
                    &mut acc,
                    &apply1(&psi.term(p), &a.mu[n - p].eval_basis(&[x, y])),
                );
            }
            for i in 0..=n {
                for j in 0..=n - i {
                    let l = n - i - j;
                    let v = apply2(
                        &b.mu[i],
                        &psi.term(j).eval_basis(&[x]),
                        &psi.term(l).eval_basis(&[y]),
                    );
                    sub_assign(&mut acc, &v);
                }
            }
            for (o, c) in acc.iter().enumerate() {
                m.add_at(&[x, y], o, c);
            }
        }
    }
    let mut t = Multilinear::zeros(d, d, 1);
    for p in 0..=n {
        add_ml(&mut t, &compose(&psi.term(p), &a.t[n - p]));
        add_ml(
            &mut t,
            &scale_ml(&compose(&b.t[p], &psi.term(n - p)), &-Rational::one()),
        );
    }
    let mut out = m.data;
    out.extend(t.data);
    out
}

/// Searches for `ψ` with `apply_gauge(b, ψ) = a`, order by order, taking a
/// particular solution at each order.
pub fn find_equivalence(a: &Jet, b: &Jet) -> Result<Gauge, DeformError> {
    if a.base != b.base || a.order() != b.order() {
        return Err(DeformError::Mismatch);
    }
    let d = a.dim();
    let mut psi = Gauge::identity(d, 0);
    for n in 1..=a.order() {
        psi.terms.push(Multilinear::zeros(d, d, 1));
        let f0 = gauge_residual(a, b, &psi, n);
        let cols: Vec<Vec<Rational>> = (0..d * d)
            .map(|j| {
                psi.terms[n - 1] = Multilinear::from_vec(d, d, 1, unit(d * d, j));
                let mut v = gauge_residual(a, b, &psi, n);
                sub_assign(&mut v, &f0);
                v
            })
            .collect();
        let l = Matrix::from_columns(f0.len(), &cols);
        let rhs: Vec<Rational> = f0.iter().map(|x| -x).collect();
        let x = l.solve(&rhs).ok_or(DeformError::NotEquivalent(n))?;
        psi.terms[n - 1] = Multilinear::from_vec(d, d, 1, x);
    }
    Ok(psi)
}

/// Gauges a jet to the trivial one when every term can be killed by a
/// coboundary: at the first nonzero order `n` solve
/// `d^1(ψ', x) = (μ_n, T_n)`, set `ψ_n = ψ' + δ^0 x` and apply
/// `Id - ψ_n t^n`. Returns `ψ` with `apply_gauge(jet, ψ)` trivial.
pub fn trivialize(jet: &Jet) -> Result<Gauge, DeformError> {
    let d = jet.dim();
    let k = jet.order();
    let pair = jet.pair();
    let d1 = pair.coboundary_matrix(ComplexKind::Rba, 1);
    let mut current = jet.clone();
    let mut total = Gauge::identity(d, k);
    for n in 1..=k {
        let target = current.level_vector(n);
        if is_zero_vec(&target) {
            continue;
        }
        let y = d1.solve(&target).ok_or(DeformError::NotTrivializable(n))?;
        let split = d * d;
        let psi_prime = Multilinear::from_vec(d, d, 1, y[..split].to_vec());
        let x = Multilinear::from_vec(d, d, 0, y[split..].to_vec());
        let mut psi_n = psi_prime;
        add_ml(&mut psi_n, &pair.delta(0, &x));
        let mut terms = vec![Multilinear::zeros(d, d, 1); k];
        terms[n - 1] = scale_ml(&psi_n, &-Rational::one());
        let g = Gauge::new(d, terms);
        current = apply_gauge(&current, &g);
        debug_assert!(is_zero_vec(&current.level_vector(n)));
        total = total.then(&g);
    }
    Ok(total)
}
