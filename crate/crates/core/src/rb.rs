//! Rota-Baxter algebras and bimodules given by structure constants, the
//! derived structures, and the cochain complexes `C_Alg`, `C_RBO`, `C_RBA`.
//!
//! Conventions: `mult[(i*d + j)*d + k]` is the coefficient of `e_k` in
//! `e_i e_j`; `op[i*d + j]` is the coefficient of `e_j` in `T(e_i)`.
//! For a bimodule, `left[(a*dm + m)*dm + k]` is the coefficient of `m_k` in
//! `e_a m_m`, and `right[(m*da + a)*dm + k]` that of `m_k` in `m_m e_a`.
//! An `n`-cochain `f: A^{⊗n} → M` is a dense vector indexed by the input
//! tuple (first input most significant) and then the output.

use std::sync::Arc;

use num::{One, Zero};
use thiserror::Error;

use crate::brace::{Cochain, Shift};
use crate::exact::{dense_to_sparse, pow, EchelonBasis, Matrix, Rational};
use crate::graded::{subsets, GradedSpace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RbError {
    #[error("structure constants have length {found}, expected {expected} for {what}")]
    Shape {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("product is not associative on basis triple ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("operator violates the Rota-Baxter relation on basis pair ({0}, {1})")]
    NotRotaBaxter(usize, usize),
    #[error("bimodule axiom `{axiom}` fails on basis tuple {tuple:?}")]
    Bimodule {
        axiom: &'static str,
        tuple: Vec<usize>,
    },
    #[error("cochain degree {0} is negative")]
    NegativeDegree(i64),
}

/// Dense vector helpers.
fn zero_vec(n: usize) -> Vec<Rational> {
    vec![Rational::zero(); n]
}

fn add_into(acc: &mut [Rational], c: &Rational, v: &[Rational]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += c * x;
        }
    }
}

fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = zero_vec(n);
    v[i] = Rational::one();
    v
}

/// A finite-dimensional (possibly non-unital) associative algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    dim: usize,
    mult: Vec<Rational>,
}

impl Algebra {
    pub fn new(dim: usize, mult: Vec<Rational>) -> Result<Self, RbError> {
        let a = Algebra::unchecked(dim, mult)?;
        a.check_associative()?;
        Ok(a)
    }

    /// Builds without checking associativity; only the shape is validated.
    pub fn unchecked(dim: usize, mult: Vec<Rational>) -> Result<Self, RbError> {
        if mult.len() != dim * dim * dim {
            return Err(RbError::Shape {
                what: "product",
                expected: dim * dim * dim,
                found: mult.len(),
            });
        }
        Ok(Algebra { dim, mult })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn structure_constants(&self) -> &[Rational] {
        &self.mult
    }

    pub fn coeff(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.mult[(i * self.dim + j) * self.dim + k]
    }

    pub fn mul(&self, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
        let d = self.dim;
        let mut out = zero_vec(d);
        for i in (0..d).filter(|i| !u[*i].is_zero()) {
            for j in (0..d).filter(|j| !v[*j].is_zero()) {
                let c = &u[i] * &v[j];
                add_into(
                    &mut out,
                    &c,
                    &self.mult[(i * d + j) * d..(i * d + j + 1) * d],
                );
            }
        }
        out
    }

    pub fn check_associative(&self) -> Result<(), RbError> {
        let d = self.dim;
        for i in 0..d {
            for j in 0..d {
                let ij = self.mul(&unit(d, i), &unit(d, j));
                for k in 0..d {
                    let jk = self.mul(&unit(d, j), &unit(d, k));
                    if self.mul(&ij, &unit(d, k)) != self.mul(&unit(d, i), &jk) {
                        return Err(RbError::NotAssociative(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    /// For each basis index `c`, the pairs `(x, y, coeff)` with `e_x e_y ∋ coeff·e_c`.
    fn preimages(&self) -> Vec<Vec<(usize, usize, Rational)>> {
        let d = self.dim;
        let mut out = vec![Vec::new(); d];
        for x in 0..d {
            for y in 0..d {
                for c in 0..d {
                    let v = self.coeff(x, y, c);
                    if !v.is_zero() {
                        out[c].push((x, y, v.clone()));
                    }
                }
            }
        }
        out
    }
}

/// Linear endomorphism given row-wise: `rows[i*d + j]` is the coefficient
/// of `e_j` in the image of `e_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    dim: usize,
    rows: Vec<Rational>,
}

impl LinearMap {
    pub fn new(dim: usize, rows: Vec<Rational>) -> Result<Self, RbError> {
        if rows.len() != dim * dim {
            return Err(RbError::Shape {
                what: "operator",
                expected: dim * dim,
                found: rows.len(),
            });
        }
        Ok(LinearMap { dim, rows })
    }

    pub fn zero(dim: usize) -> Self {
        LinearMap {
            dim,
            rows: zero_vec(dim * dim),
        }
    }

    pub fn scalar(dim: usize, c: &Rational) -> Self {
        let mut rows = zero_vec(dim * dim);
        for i in 0..dim {
            rows[i * dim + i] = c.clone();
        }
        LinearMap { dim, rows }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Rational] {
        &self.rows
    }

    pub fn coeff(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i * self.dim + j]
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        let d = self.dim;
        let mut out = zero_vec(d);
        for i in (0..d).filter(|i| !v[*i].is_zero()) {
            add_into(&mut out, &v[i], &self.rows[i * d..(i + 1) * d]);
        }
        out
    }

    /// For each `b`, the pairs `(a, c)` with `T(e_a) ∋ c·e_b`.
    fn preimages(&self) -> Vec<Vec<(usize, Rational)>> {
        let d = self.dim;
        let mut out = vec![Vec::new(); d];
        for a in 0..d {
            for b in 0..d {
                let c = self.coeff(a, b);
                if !c.is_zero() {
                    out[b].push((a, c.clone()));
                }
            }
        }
        out
    }
}

/// Rota-Baxter algebra `(A, μ, T)` of weight `λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RbAlgebra {
    alg: Algebra,
    op: LinearMap,
    weight: Rational,
}

impl RbAlgebra {
    pub fn new(alg: Algebra, op: LinearMap, weight: Rational) -> Result<Self, RbError> {
        let a = RbAlgebra::unchecked(alg, op, weight)?;
        a.alg.check_associative()?;
        a.check_rota_baxter()?;
        Ok(a)
    }

    pub fn unchecked(alg: Algebra, op: LinearMap, weight: Rational) -> Result<Self, RbError> {
        if op.dim() != alg.dim() {
            return Err(RbError::Shape {
                what: "operator",
                expected: alg.dim() * alg.dim(),
                found: op.dim() * op.dim(),
            });
        }
        Ok(RbAlgebra { alg, op, weight })
    }

    pub fn dim(&self) -> usize {
        self.alg.dim
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn operator(&self) -> &LinearMap {
        &self.op
    }

    pub fn weight(&self) -> &Rational {
        &self.weight
    }

    /// `T(a)T(b) = T(aT(b) + T(a)b + λab)` on all basis pairs.
    pub fn check_rota_baxter(&self) -> Result<(), RbError> {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                let (a, b) = (unit(d, i), unit(d, j));
                if !self.rota_baxter_defect(&a, &b).iter().all(|x| x.is_zero()) {
                    return Err(RbError::NotRotaBaxter(i, j));
                }
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), RbError> {
        self.alg.check_associative()?;
        self.check_rota_baxter()
    }

    /// `T(a)T(b) - T(a ⋆ b)`.
    pub fn rota_baxter_defect(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let lhs = self.alg.mul(&self.op.apply(a), &self.op.apply(b));
        let rhs = self.op.apply(&self.star(a, b));
        lhs.iter().zip(&rhs).map(|(x, y)| x - y).collect()
    }

    /// `a ⋆ b = aT(b) + T(a)b + λab`.
    pub fn star(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let mut out = self.alg.mul(a, &self.op.apply(b));
        add_into(
            &mut out,
            &Rational::one(),
            &self.alg.mul(&self.op.apply(a), b),
        );
        add_into(&mut out, &self.weight, &self.alg.mul(a, b));
        out
    }

    /// The descendent algebra `A_⋆`, again Rota-Baxter with the same `T`.
    pub fn star_algebra(&self) -> RbAlgebra {
        let d = self.dim();
        let mut mult = Vec::with_capacity(d * d * d);
        for i in 0..d {
            for j in 0..d {
                mult.extend(self.star(&unit(d, i), &unit(d, j)));
            }
        }
        RbAlgebra {
            alg: Algebra { dim: d, mult },
            op: self.op.clone(),
            weight: self.weight.clone(),
        }
    }

    /// The same structure over the graded space concentrated in degree zero.
    pub fn space(&self) -> Arc<GradedSpace> {
        Arc::new(GradedSpace::ungraded(self.dim()))
    }
}

/// Bimodule over an associative algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimodule {
    dim_a: usize,
    dim_m: usize,
    left: Vec<Rational>,
    right: Vec<Rational>,
}

impl Bimodule {
    pub fn unchecked(
        dim_a: usize,
        dim_m: usize,
        left: Vec<Rational>,
        right: Vec<Rational>,
    ) -> Result<Self, RbError> {
        let expected = dim_a * dim_m * dim_m;
        for (what, v) in [("left action", &left), ("right action", &right)] {
            if v.len() != expected {
                return Err(RbError::Shape {
                    what,
                    expected,
                    found: v.len(),
                });
            }
        }
        Ok(Bimodule {
            dim_a,
            dim_m,
            left,
            right,
        })
    }

    pub fn regular(alg: &Algebra) -> Self {
        let d = alg.dim;
        let mut right = zero_vec(d * d * d);
        for m in 0..d {
            for a in 0..d {
                for k in 0..d {
                    right[(m * d + a) * d + k] = alg.coeff(m, a, k).clone();
                }
            }
        }
        Bimodule {
            dim_a: d,
            dim_m: d,
            left: alg.mult.clone(),
            right,
        }
    }

    pub fn zero(dim_a: usize, dim_m: usize) -> Self {
        Bimodule {
            dim_a,
            dim_m,
            left: zero_vec(dim_a * dim_m * dim_m),
            right: zero_vec(dim_a * dim_m * dim_m),
        }
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_m(&self) -> usize {
        self.dim_m
    }

    pub fn left_constants(&self) -> &[Rational] {
        &self.left
    }

    pub fn right_constants(&self) -> &[Rational] {
        &self.right
    }

    pub fn act_left(&self, a: &[Rational], m: &[Rational]) -> Vec<Rational> {
        let (da, dm) = (self.dim_a, self.dim_m);
        let mut out = zero_vec(dm);
        for i in (0..da).filter(|i| !a[*i].is_zero()) {
            for j in (0..dm).filter(|j| !m[*j].is_zero()) {
                let c = &a[i] * &m[j];
                add_into(
                    &mut out,
                    &c,
                    &self.left[(i * dm + j) * dm..(i * dm + j + 1) * dm],
                );
            }
        }
        out
    }

    pub fn act_right(&self, m: &[Rational], a: &[Rational]) -> Vec<Rational> {
        let (da, dm) = (self.dim_a, self.dim_m);
        let mut out = zero_vec(dm);
        for j in (0..dm).filter(|j| !m[*j].is_zero()) {
            for i in (0..da).filter(|i| !a[*i].is_zero()) {
                let c = &m[j] * &a[i];
                add_into(
                    &mut out,
                    &c,
                    &self.right[(j * da + i) * dm..(j * da + i + 1) * dm],
                );
            }
        }
        out
    }

    pub fn check_axioms(&self, alg: &Algebra) -> Result<(), RbError> {
        let (da, dm) = (self.dim_a, self.dim_m);
        for a in 0..da {
            for b in 0..da {
                let (ua, ub) = (unit(da, a), unit(da, b));
                let ab = alg.mul(&ua, &ub);
                for m in 0..dm {
                    let um = unit(dm, m);
                    if self.act_left(&ab, &um) != self.act_left(&ua, &self.act_left(&ub, &um)) {
                        return Err(RbError::Bimodule {
                            axiom: "(ab)m = a(bm)",
                            tuple: vec![a, b, m],
                        });
                    }
                    if self.act_right(&um, &ab) != self.act_right(&self.act_right(&um, &ua), &ub) {
                        return Err(RbError::Bimodule {
                            axiom: "m(ab) = (ma)b",
                            tuple: vec![m, a, b],
                        });
                    }
                    if self.act_right(&self.act_left(&ua, &um), &ub)
                        != self.act_left(&ua, &self.act_right(&um, &ub))
                    {
                        return Err(RbError::Bimodule {
                            axiom: "(am)b = a(mb)",
                            tuple: vec![a, m, b],
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// Rota-Baxter bimodule `(M, T_M)` over a Rota-Baxter algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RbBimodule {
    bimod: Bimodule,
    op: LinearMap,
}

impl RbBimodule {
    pub fn new(bimod: Bimodule, op: LinearMap, over: &RbAlgebra) -> Result<Self, RbError> {
        let m = RbBimodule::unchecked(bimod, op)?;
        m.validate(over)?;
        Ok(m)
    }

    pub fn unchecked(bimod: Bimodule, op: LinearMap) -> Result<Self, RbError> {
        if op.dim() != bimod.dim_m {
            return Err(RbError::Shape {
                what: "module operator",
                expected: bimod.dim_m * bimod.dim_m,
                found: op.dim() * op.dim(),
            });
        }
        Ok(RbBimodule { bimod, op })
    }

    /// `(A, T)` as a bimodule over itself.
    pub fn regular(a: &RbAlgebra) -> Self {
        RbBimodule {
            bimod: Bimodule::regular(&a.alg),
            op: a.op.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.bimod.dim_m
    }

    pub fn bimodule(&self) -> &Bimodule {
        &self.bimod
    }

    pub fn operator(&self) -> &LinearMap {
        &self.op
    }

    pub fn validate(&self, a: &RbAlgebra) -> Result<(), RbError> {
        if self.bimod.dim_a != a.dim() {
            return Err(RbError::Shape {
                what: "bimodule over algebra",
                expected: a.dim(),
                found: self.bimod.dim_a,
            });
        }
        self.bimod.check_axioms(&a.alg)?;
        let (da, dm) = (a.dim(), self.dim());
        let t = &a.op;
        let tm = &self.op;
        let lam = &a.weight;
        for i in 0..da {
            let ua = unit(da, i);
            let ta = t.apply(&ua);
            for j in 0..dm {
                let um = unit(dm, j);
                let tmm = tm.apply(&um);
                let lhs = self.bimod.act_left(&ta, &tmm);
                let mut inner = self.bimod.act_left(&ua, &tmm);
                add_into(&mut inner, &Rational::one(), &self.bimod.act_left(&ta, &um));
                add_into(&mut inner, lam, &self.bimod.act_left(&ua, &um));
                if lhs != tm.apply(&inner) {
                    return Err(RbError::Bimodule {
                        axiom: "T(a)T_M(m) = T_M(aT_M(m) + T(a)m + λam)",
                        tuple: vec![i, j],
                    });
                }
                let lhs = self.bimod.act_right(&tmm, &ta);
                let mut inner = self.bimod.act_right(&um, &ta);
                add_into(
                    &mut inner,
                    &Rational::one(),
                    &self.bimod.act_right(&tmm, &ua),
                );
                add_into(&mut inner, lam, &self.bimod.act_right(&um, &ua));
                if lhs != tm.apply(&inner) {
                    return Err(RbError::Bimodule {
                        axiom: "T_M(m)T(a) = T_M(mT(a) + T_M(m)a + λma)",
                        tuple: vec![j, i],
                    });
                }
            }
        }
        Ok(())
    }

    /// The derived bimodule `▷M◁` over `A_⋆`:
    /// `a ▷ m = T(a)m - T_M(am)` and `m ◁ a = mT(a) - T_M(ma)`.
    pub fn derived(&self, a: &RbAlgebra) -> RbBimodule {
        let (da, dm) = (a.dim(), self.dim());
        let mut left = Vec::with_capacity(da * dm * dm);
        let mut right = zero_vec(da * dm * dm);
        for i in 0..da {
            let ua = unit(da, i);
            let ta = a.op.apply(&ua);
            for j in 0..dm {
                let um = unit(dm, j);
                let mut v = self.bimod.act_left(&ta, &um);
                add_into(
                    &mut v,
                    &-Rational::one(),
                    &self.op.apply(&self.bimod.act_left(&ua, &um)),
                );
                left.extend(v);
                let mut w = self.bimod.act_right(&um, &ta);
                add_into(
                    &mut w,
                    &-Rational::one(),
                    &self.op.apply(&self.bimod.act_right(&um, &ua)),
                );
                for (k, x) in w.into_iter().enumerate() {
                    right[(j * da + i) * dm + k] = x;
                }
            }
        }
        RbBimodule {
            bimod: Bimodule {
                dim_a: da,
                dim_m: dm,
                left,
                right,
            },
            op: self.op.clone(),
        }
    }
}

/// Semidirect product `A ⋉ M` with product `(a,m)(b,n) = (ab, an + mb)`
/// and operator `T ⊕ T_M`.
pub fn semidirect_product(a: &RbAlgebra, m: &RbBimodule) -> RbAlgebra {
    let (da, dm) = (a.dim(), m.dim());
    let d = da + dm;
    let mut mult = zero_vec(d * d * d);
    for x in 0..d {
        for y in 0..d {
            let v: Vec<Rational> = match (x < da, y < da) {
                (true, true) => {
                    let mut v = a.alg.mul(&unit(da, x), &unit(da, y));
                    v.extend(zero_vec(dm));
                    v
                }
                (true, false) => {
                    let mut v = zero_vec(da);
                    v.extend(m.bimod.act_left(&unit(da, x), &unit(dm, y - da)));
                    v
                }
                (false, true) => {
                    let mut v = zero_vec(da);
                    v.extend(m.bimod.act_right(&unit(dm, x - da), &unit(da, y)));
                    v
                }
                (false, false) => zero_vec(d),
            };
            for (k, c) in v.into_iter().enumerate() {
                mult[(x * d + y) * d + k] = c;
            }
        }
    }
    let mut op = zero_vec(d * d);
    for i in 0..da {
        for j in 0..da {
            op[i * d + j] = a.op.coeff(i, j).clone();
        }
    }
    for i in 0..dm {
        for j in 0..dm {
            op[(da + i) * d + da + j] = m.op.coeff(i, j).clone();
        }
    }
    RbAlgebra {
        alg: Algebra { dim: d, mult },
        op: LinearMap { dim: d, rows: op },
        weight: a.weight.clone(),
    }
}

/// A multilinear map `A^{⊗n} → M` stored densely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multilinear {
    pub in_dim: usize,
    pub out_dim: usize,
    pub arity: usize,
    pub data: Vec<Rational>,
}

impl Multilinear {
    pub fn zeros(in_dim: usize, out_dim: usize, arity: usize) -> Self {
        Multilinear {
            in_dim,
            out_dim,
            arity,
            data: zero_vec(in_dim.pow(arity as u32) * out_dim),
        }
    }

    pub fn from_vec(in_dim: usize, out_dim: usize, arity: usize, data: Vec<Rational>) -> Self {
        assert_eq!(
            data.len(),
            in_dim.pow(arity as u32) * out_dim,
            "cochain length mismatch"
        );
        Multilinear {
            in_dim,
            out_dim,
            arity,
            data,
        }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn index(&self, inputs: &[usize], out: usize) -> usize {
        let mut idx = 0;
        for &i in inputs {
            idx = idx * self.in_dim + i;
        }
        idx * self.out_dim + out
    }

    pub fn get(&self, inputs: &[usize], out: usize) -> &Rational {
        &self.data[self.index(inputs, out)]
    }

    pub fn add_at(&mut self, inputs: &[usize], out: usize, c: &Rational) {
        let i = self.index(inputs, out);
        self.data[i] += c;
    }

    fn decode(&self, idx: usize, buf: &mut [usize]) -> usize {
        let out = idx % self.out_dim;
        let mut t = idx / self.out_dim;
        for slot in buf.iter_mut().rev() {
            *slot = t % self.in_dim;
            t /= self.in_dim;
        }
        out
    }

    /// Nonzero entries as `(inputs, output, value)`.
    pub fn nonzero(&self) -> Vec<(Vec<usize>, usize, Rational)> {
        let mut buf = vec![0; self.arity];
        let mut out = Vec::new();
        for (idx, v) in self.data.iter().enumerate() {
            if !v.is_zero() {
                let o = self.decode(idx, &mut buf);
                out.push((buf.clone(), o, v.clone()));
            }
        }
        out
    }

    /// Value on a tuple of basis vectors.
    pub fn eval_basis(&self, inputs: &[usize]) -> Vec<Rational> {
        let base = self.index(inputs, 0);
        self.data[base..base + self.out_dim].to_vec()
    }

    /// As an element of `Hom((sV)^{⊗n}, sV)` (`Shift::Suspended`) or
    /// `Hom((sV)^{⊗n}, V)` (`Shift::Plain`) via `f ↦ s f (s^{⊗n})^{-1}`
    /// resp. `g ↦ g (s^{⊗n})^{-1}`. Requires `M = A` as spaces.
    pub fn to_cochain(&self, space: &Arc<GradedSpace>, output: Shift) -> Cochain {
        assert_eq!(self.in_dim, space.dim());
        assert_eq!(self.out_dim, space.dim());
        let mut plain = Cochain::plain(space);
        for (ins, o, v) in self.nonzero() {
            plain.add_term(ins.iter().map(|x| *x as u16).collect(), o as u16, v);
        }
        Cochain::suspended_from(&plain, output)
    }

    /// Inverse of [`Multilinear::to_cochain`] on the arity-`arity` part.
    pub fn from_cochain(c: &Cochain, arity: usize) -> Multilinear {
        let d = c.space().dim();
        let plain = c.arity_component(arity).unsuspended();
        let mut out = Multilinear::zeros(d, d, arity);
        for (t, v) in plain.terms() {
            let ins: Vec<usize> = t.inputs.iter().map(|x| *x as usize).collect();
            out.add_at(&ins, t.output as usize, v);
        }
        out
    }
}

/// Which of the three cochain complexes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ComplexKind {
    /// Hochschild complex `C_Alg(A, M)`.
    Alg,
    /// Complex of the Rota-Baxter operator `C_RBO(A, M)`.
    Rbo,
    /// Mapping-cone complex `C_RBA(A, M)`.
    Rba,
}

/// A Rota-Baxter algebra together with a Rota-Baxter bimodule, with the
/// differentials of the associated complexes.
#[derive(Clone, Debug)]
pub struct RbPair {
    pub algebra: RbAlgebra,
    pub module: RbBimodule,
    derived: RbBimodule,
    star: RbAlgebra,
}

/// Scatter form of the Hochschild differential.
fn hochschild_apply(
    n: usize,
    f: &Multilinear,
    bimod: &Bimodule,
    pre: &[Vec<(usize, usize, Rational)>],
) -> Multilinear {
    let (da, dm) = (bimod.dim_a, bimod.dim_m);
    let mut out = Multilinear::zeros(da, dm, n + 1);
    let first_sign = if (n + 1) % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    };
    let mut tuple = vec![0usize; n + 1];
    for (b, k, c) in f.nonzero() {
        // (-1)^{n+1} a_1 f(a_2, ..., a_{n+1})
        for a1 in 0..da {
            let cc = &first_sign * &c;
            tuple[0] = a1;
            tuple[1..].copy_from_slice(&b);
            for o in 0..dm {
                let l = &bimod.left[(a1 * dm + k) * dm + o];
                if !l.is_zero() {
                    out.add_at(&tuple, o, &(&cc * l));
                }
            }
        }
        // Σ_i (-1)^{n-i+1} f(…, a_i a_{i+1}, …)
        for i in 1..=n {
            let sign = if (n - i + 1) % 2 == 0 {
                Rational::one()
            } else {
                -Rational::one()
            };
            for (x, y, m) in &pre[b[i - 1]] {
                tuple[..i - 1].copy_from_slice(&b[..i - 1]);
                tuple[i - 1] = *x;
                tuple[i] = *y;
                tuple[i + 1..].copy_from_slice(&b[i..]);
                out.add_at(&tuple, k, &(&sign * &c * m));
            }
        }
        // f(a_1, …, a_n) a_{n+1}
        tuple[..n].copy_from_slice(&b);
        for an in 0..da {
            tuple[n] = an;
            for o in 0..dm {
                let r = &bimod.right[(k * da + an) * dm + o];
                if !r.is_zero() {
                    out.add_at(&tuple, o, &(&c * r));
                }
            }
        }
    }
    out
}

impl RbPair {
    pub fn new(algebra: RbAlgebra, module: RbBimodule) -> Result<Self, RbError> {
        algebra.validate()?;
        module.validate(&algebra)?;
        Ok(RbPair::unchecked(algebra, module))
    }

    pub fn unchecked(algebra: RbAlgebra, module: RbBimodule) -> Self {
        let derived = module.derived(&algebra);
        let star = algebra.star_algebra();
        RbPair {
            algebra,
            module,
            derived,
            star,
        }
    }

    /// The pair `(A, A)` with the regular bimodule.
    pub fn regular(algebra: RbAlgebra) -> Result<Self, RbError> {
        let module = RbBimodule::regular(&algebra);
        RbPair::new(algebra, module)
    }

    pub fn dim_a(&self) -> usize {
        self.algebra.dim()
    }

    pub fn dim_m(&self) -> usize {
        self.module.dim()
    }

    pub fn derived_module(&self) -> &RbBimodule {
        &self.derived
    }

    pub fn star_algebra(&self) -> &RbAlgebra {
        &self.star
    }

    /// Dimension of `C^n_Alg = C^n_RBO = Hom(A^{⊗n}, M)`.
    pub fn cochain_dim(&self, n: usize) -> usize {
        self.dim_a().pow(n as u32) * self.dim_m()
    }

    pub fn complex_dim(&self, kind: ComplexKind, n: usize) -> usize {
        match kind {
            ComplexKind::Alg | ComplexKind::Rbo => self.cochain_dim(n),
            ComplexKind::Rba if n == 0 => self.cochain_dim(0),
            ComplexKind::Rba => self.cochain_dim(n) + self.cochain_dim(n - 1),
        }
    }

    /// Hochschild differential `δ^n` of `A` with coefficients in `M`.
    pub fn delta(&self, n: usize, f: &Multilinear) -> Multilinear {
        assert_eq!(f.arity, n);
        hochschild_apply(n, f, &self.module.bimod, &self.algebra.alg.preimages())
    }

    /// `∂^n` as the Hochschild differential of `A_⋆` with coefficients in `▷M◁`.
    pub fn partial_via_derived(&self, n: usize, f: &Multilinear) -> Multilinear {
        assert_eq!(f.arity, n);
        hochschild_apply(n, f, &self.derived.bimod, &self.star.alg.preimages())
    }

    /// `∂^n` written out in terms of `μ`, `T`, `T_M` and `λ`.
    pub fn partial(&self, n: usize, f: &Multilinear) -> Multilinear {
        assert_eq!(f.arity, n);
        let (da, dm) = (self.dim_a(), self.dim_m());
        let alg = &self.algebra.alg;
        let t = &self.algebra.op;
        let tm = &self.module.op;
        let bm = &self.module.bimod;
        let lam = &self.algebra.weight;
        let mut out = Multilinear::zeros(da, dm, n + 1);
        let sgn = |e: usize| {
            if e % 2 == 0 {
                Rational::one()
            } else {
                -Rational::one()
            }
        };
        let mut tuple = vec![0usize; n + 1];
        loop {
            let ua: Vec<Vec<Rational>> = tuple.iter().map(|&i| unit(da, i)).collect();
            let mut acc = zero_vec(dm);
            // (-1)^{n+1} (T(a_1) f(a_2..) - T_M(a_1 f(a_2..)))
            let fv = f.eval_basis(&tuple[1..]);
            let mut first = bm.act_left(&t.apply(&ua[0]), &fv);
            add_into(
                &mut first,
                &-Rational::one(),
                &tm.apply(&bm.act_left(&ua[0], &fv)),
            );
            add_into(&mut acc, &sgn(n + 1), &first);
            for i in 1..=n {
                // f(.., a_i T(a_{i+1}), ..) + f(.., T(a_i) a_{i+1}, ..) + λ f(.., a_i a_{i+1}, ..)
                let mut merged = alg.mul(&ua[i - 1], &t.apply(&ua[i]));
                add_into(
                    &mut merged,
                    &Rational::one(),
                    &alg.mul(&t.apply(&ua[i - 1]), &ua[i]),
                );
                add_into(&mut merged, lam, &alg.mul(&ua[i - 1], &ua[i]));
                let mut args: Vec<usize> = tuple[..i - 1].to_vec();
                args.push(0);
                args.extend_from_slice(&tuple[i + 1..]);
                for (c, v) in merged.iter().enumerate() {
                    if v.is_zero() {
                        continue;
                    }
                    args[i - 1] = c;
                    add_into(&mut acc, &(sgn(n - i + 1) * v), &f.eval_basis(&args));
                }
            }
            // f(a_1..a_n) T(a_{n+1}) - T_M(f(a_1..a_n) a_{n+1})
            let fv = f.eval_basis(&tuple[..n]);
            add_into(
                &mut acc,
                &Rational::one(),
                &bm.act_right(&fv, &t.apply(&ua[n])),
            );
            add_into(
                &mut acc,
                &-Rational::one(),
                &tm.apply(&bm.act_right(&fv, &ua[n])),
            );
            for (o, v) in acc.iter().enumerate() {
                if !v.is_zero() {
                    out.add_at(&tuple, o, v);
                }
            }
            if !next_tuple(&mut tuple, da) {
                break;
            }
        }
        out
    }

    /// Chain map `Φ^n: C^n_Alg → C^n_RBO`.
    pub fn phi(&self, n: usize, f: &Multilinear) -> Multilinear {
        assert_eq!(f.arity, n);
        let (da, dm) = (self.dim_a(), self.dim_m());
        if n == 0 {
            return f.clone();
        }
        let tpre = self.algebra.op.preimages();
        let tm = &self.module.op;
        let lam = &self.algebra.weight;
        let mut out = Multilinear::zeros(da, dm, n);
        for (b, k, c) in f.nonzero() {
            for size in 0..=n {
                let scale = if size == n {
                    Rational::one()
                } else {
                    -pow(lam, n - size - 1)
                };
                if scale.is_zero() {
                    continue;
                }
                for positions in subsets(n, size) {
                    // all tuples a with a_i = b_i off `positions` and T(a_i) ∋ b_i on it
                    let mut choices: Vec<Vec<(usize, Rational)>> = Vec::with_capacity(n);
                    for (i, &bi) in b.iter().enumerate() {
                        if positions.contains(&i) {
                            choices.push(tpre[bi].clone());
                        } else {
                            choices.push(vec![(bi, Rational::one())]);
                        }
                    }
                    for_each_choice(&choices, &mut |tuple, w| {
                        let coeff = &scale * &c * w;
                        if size == n {
                            out.add_at(tuple, k, &coeff);
                        } else {
                            for o in 0..dm {
                                let x = tm.coeff(k, o);
                                if !x.is_zero() {
                                    out.add_at(tuple, o, &(&coeff * x));
                                }
                            }
                        }
                    });
                }
            }
        }
        out
    }

    /// `d^n(f, g) = (δ^n f, -∂^{n-1} g - Φ^n f)` on `C^n_RBA`, with
    /// `d^0(f) = (δ^0 f, -Φ^0 f)`. Vectors are `f` followed by `g`.
    pub fn d(&self, n: usize, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.complex_dim(ComplexKind::Rba, n));
        let (da, dm) = (self.dim_a(), self.dim_m());
        let split = self.cochain_dim(n);
        let f = Multilinear::from_vec(da, dm, n, x[..split].to_vec());
        let mut top = self.delta(n, &f).data;
        let mut bottom = self.phi(n, &f).data;
        for v in bottom.iter_mut() {
            *v = -v.clone();
        }
        if n >= 1 {
            let g = Multilinear::from_vec(da, dm, n - 1, x[split..].to_vec());
            let pg = self.partial(n - 1, &g);
            for (v, p) in bottom.iter_mut().zip(&pg.data) {
                *v -= p;
            }
        }
        top.extend(bottom);
        top
    }

    /// Matrix of a linear operator given on basis vectors.
    fn matrix_of<F>(&self, cols: usize, rows: usize, apply: F) -> Matrix
    where
        F: Fn(Vec<Rational>) -> Vec<Rational>,
    {
        let mut triplets = Vec::new();
        for j in 0..cols {
            let image = apply(unit(cols, j));
            assert_eq!(image.len(), rows);
            for (i, v) in image.into_iter().enumerate() {
                if !v.is_zero() {
                    triplets.push((i, j, v));
                }
            }
        }
        Matrix::from_triplets(rows, cols, triplets)
    }

    /// Coboundary matrix `C^n → C^{n+1}` of the chosen complex.
    pub fn coboundary_matrix(&self, kind: ComplexKind, n: usize) -> Matrix {
        let (da, dm) = (self.dim_a(), self.dim_m());
        let cols = self.complex_dim(kind, n);
        let rows = self.complex_dim(kind, n + 1);
        match kind {
            ComplexKind::Alg => self.matrix_of(cols, rows, |v| {
                self.delta(n, &Multilinear::from_vec(da, dm, n, v)).data
            }),
            ComplexKind::Rbo => self.matrix_of(cols, rows, |v| {
                self.partial(n, &Multilinear::from_vec(da, dm, n, v)).data
            }),
            ComplexKind::Rba => self.matrix_of(cols, rows, |v| self.d(n, &v)),
        }
    }

    /// `∂^n` via the derived structures, as a matrix.
    pub fn partial_via_derived_matrix(&self, n: usize) -> Matrix {
        let (da, dm) = (self.dim_a(), self.dim_m());
        self.matrix_of(self.cochain_dim(n), self.cochain_dim(n + 1), |v| {
            self.partial_via_derived(n, &Multilinear::from_vec(da, dm, n, v))
                .data
        })
    }

    pub fn phi_matrix(&self, n: usize) -> Matrix {
        let (da, dm) = (self.dim_a(), self.dim_m());
        self.matrix_of(self.cochain_dim(n), self.cochain_dim(n), |v| {
            self.phi(n, &Multilinear::from_vec(da, dm, n, v)).data
        })
    }

    /// Degree-`n` cohomology with a basis of representative cocycles.
    pub fn cohomology(&self, kind: ComplexKind, n: usize) -> CohomologyGroup {
        let dn = self.coboundary_matrix(kind, n);
        let kernel = dn.kernel_basis();
        let mut span = EchelonBasis::new();
        if n > 0 {
            let prev = self.coboundary_matrix(kind, n - 1);
            for c in 0..prev.cols() {
                span.insert_dense(&prev.column(c));
            }
        }
        let boundaries = span.dim();
        let mut representatives = Vec::new();
        for z in kernel.iter() {
            if span.insert_dense(z) {
                representatives.push(z.clone());
            }
        }
        CohomologyGroup {
            kind,
            degree: n,
            cocycles: kernel.len(),
            coboundaries: boundaries,
            dimension: representatives.len(),
            representatives,
        }
    }

    /// Checks exactness of the long exact sequence
    /// `… → HH^p → H^p_RBO → H^{p+1}_RBA → HH^{p+1} → …`
    /// at every position up to `HH^max_degree` and `H^max_degree_RBO`.
    pub fn les_check(&self, max_degree: usize) -> LesReport {
        let mut z = Vec::new();
        let mut b = Vec::new();
        // cycles and boundaries of each complex in degrees 0..=max_degree+1
        for kind in [ComplexKind::Alg, ComplexKind::Rbo, ComplexKind::Rba] {
            let mut zk = Vec::new();
            let mut bk = Vec::new();
            for n in 0..=max_degree + 1 {
                let dn = self.coboundary_matrix(kind, n);
                zk.push(dn.kernel_basis());
                let mut span = EchelonBasis::new();
                if n > 0 {
                    let prev = self.coboundary_matrix(kind, n - 1);
                    for c in 0..prev.cols() {
                        span.insert_dense(&prev.column(c));
                    }
                }
                bk.push(span);
            }
            z.push(zk);
            b.push(bk);
        }
        let (alg, rbo, rba) = (0, 1, 2);
        let hdim = |k: usize, n: usize| z[k][n].len() - b[k][n].dim();
        // rank of the map induced on cohomology by a chain map
        let induced_rank = |src: usize,
                            tgt: usize,
                            n_src: usize,
                            n_tgt: usize,
                            map: &dyn Fn(&[Rational]) -> Vec<Rational>| {
            let mut span = b[tgt][n_tgt].clone();
            let base = span.dim();
            for v in &z[src][n_src] {
                span.insert_dense(&map(v));
            }
            span.dim() - base
        };
        let (da, dm) = (self.dim_a(), self.dim_m());
        let project = |n: usize| {
            let split = self.cochain_dim(n);
            move |v: &[Rational]| v[..split].to_vec()
        };
        let include = |n: usize| {
            let pad = self.cochain_dim(n + 1);
            move |v: &[Rational]| {
                let mut out = zero_vec(pad);
                out.extend_from_slice(v);
                out
            }
        };
        let phi = |n: usize| {
            move |v: &[Rational]| {
                self.phi(n, &Multilinear::from_vec(da, dm, n, v.to_vec()))
                    .data
            }
        };
        let mut spots = Vec::new();
        for p in 0..=max_degree {
            // H^p_RBA: in from H^{p-1}_RBO (inclusion), out to HH^p (projection)
            let rin = if p == 0 {
                0
            } else {
                induced_rank(rbo, rba, p - 1, p, &include(p - 1))
            };
            let rout = induced_rank(rba, alg, p, p, &project(p));
            spots.push(LesSpot::new(format!("H^{p}_RBA"), hdim(rba, p), rin, rout));
            // HH^p: in from H^p_RBA, out to H^p_RBO via Φ
            let rphi = induced_rank(alg, rbo, p, p, &phi(p));
            spots.push(LesSpot::new(format!("HH^{p}"), hdim(alg, p), rout, rphi));
            // H^p_RBO: in from HH^p, out to H^{p+1}_RBA
            let rinc = induced_rank(rbo, rba, p, p + 1, &include(p));
            spots.push(LesSpot::new(format!("H^{p}_RBO"), hdim(rbo, p), rphi, rinc));
        }
        let exact = spots.iter().all(|s| s.exact);
        LesReport { spots, exact }
    }
}

fn next_tuple(t: &mut [usize], base: usize) -> bool {
    for slot in t.iter_mut().rev() {
        *slot += 1;
        if *slot < base {
            return true;
        }
        *slot = 0;
    }
    false
}

fn for_each_choice(choices: &[Vec<(usize, Rational)>], f: &mut dyn FnMut(&[usize], &Rational)) {
    fn rec(
        i: usize,
        choices: &[Vec<(usize, Rational)>],
        tuple: &mut Vec<usize>,
        w: Rational,
        f: &mut dyn FnMut(&[usize], &Rational),
    ) {
        if i == choices.len() {
            f(tuple, &w);
            return;
        }
        for (x, c) in &choices[i] {
            tuple.push(*x);
            rec(i + 1, choices, tuple, &w * c, f);
            tuple.pop();
        }
    }
    rec(
        0,
        choices,
        &mut Vec::with_capacity(choices.len()),
        Rational::one(),
        f,
    );
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyGroup {
    pub kind: ComplexKind,
    pub degree: usize,
    pub cocycles: usize,
    pub coboundaries: usize,
    pub dimension: usize,
    /// Cocycles whose classes form a basis of the cohomology.
    pub representatives: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LesSpot {
    pub name: String,
    pub dimension: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    pub exact: bool,
}

impl LesSpot {
    fn new(name: String, dimension: usize, rank_in: usize, rank_out: usize) -> Self {
        LesSpot {
            name,
            dimension,
            rank_in,
            rank_out,
            exact: rank_in + rank_out == dimension,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LesReport {
    pub spots: Vec<LesSpot>,
    pub exact: bool,
}

/// Checks whether a vector lies in the column span of a matrix.
pub fn in_column_span(m: &Matrix, v: &[Rational]) -> bool {
    let mut span = EchelonBasis::new();
    for c in 0..m.cols() {
        span.insert_dense(&m.column(c));
    }
    span.contains(dense_to_sparse(v))
}

pub mod catalog;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn field(lambda: Rational, t: Rational) -> RbAlgebra {
        RbAlgebra::new(
            Algebra::new(1, vec![int(1)]).unwrap(),
            LinearMap::new(1, vec![t]).unwrap(),
            lambda,
        )
        .unwrap()
    }

    #[test]
    fn rota_baxter_on_the_field() {
        // t² = t(2t + λ) forces t ∈ {0, -λ}
        assert!(RbAlgebra::new(
            Algebra::new(1, vec![int(1)]).unwrap(),
            LinearMap::new(1, vec![int(1)]).unwrap(),
            int(1)
        )
        .is_err());
        field(int(1), int(-1));
        field(rat(1, 2), rat(-1, 2));
    }

    #[test]
    fn low_degree_differentials() {
        let a = catalog::upper_triangular(&int(1));
        let pair = RbPair::regular(a).unwrap();
        let (da, dm) = (pair.dim_a(), pair.dim_m());
        let alg = pair.algebra.algebra().clone();
        let t = pair.algebra.operator().clone();
        // δ^0(x)(a) = xa - ax and ∂^0(x)(a) = x◁a - a▷x
        for xi in 0..dm {
            let x = Multilinear::from_vec(da, dm, 0, unit(dm, xi));
            let d0 = pair.delta(0, &x);
            let p0 = pair.partial(0, &x);
            for ai in 0..da {
                let a = unit(da, ai);
                let xv = unit(dm, xi);
                let mut expect = alg.mul(&xv, &a);
                add_into(&mut expect, &-Rational::one(), &alg.mul(&a, &xv));
                assert_eq!(d0.eval_basis(&[ai]), expect);
                let right = {
                    let mut v = alg.mul(&xv, &t.apply(&a));
                    add_into(&mut v, &-Rational::one(), &t.apply(&alg.mul(&xv, &a)));
                    v
                };
                let left = {
                    let mut v = alg.mul(&t.apply(&a), &xv);
                    add_into(&mut v, &-Rational::one(), &t.apply(&alg.mul(&a, &xv)));
                    v
                };
                let mut expect = right;
                add_into(&mut expect, &-Rational::one(), &left);
                assert_eq!(p0.eval_basis(&[ai]), expect);
            }
        }
    }

    #[test]
    fn derived_bimodule_is_rota_baxter() {
        for lam in [int(0), int(1), int(-1), rat(1, 2)] {
            for a in catalog::algebras(&lam) {
                let pair = RbPair::regular(a.clone()).unwrap();
                let star = pair.star_algebra().clone();
                star.validate().unwrap();
                pair.derived_module().validate(&star).unwrap();
                let semi = semidirect_product(&a, &pair.module);
                semi.validate().unwrap();
            }
        }
    }

    #[test]
    fn h0_of_the_field_vanishes() {
        let pair = RbPair::regular(field(int(1), int(0))).unwrap();
        assert_eq!(pair.cohomology(ComplexKind::Rba, 0).dimension, 0);
        assert_eq!(pair.cohomology(ComplexKind::Alg, 0).dimension, 1);
    }
}
