//! Abelian extensions `0 → M → Â → A → 0` of Rota-Baxter algebras and
//! their description by 2-cocycles of `C_RBA(A, M)`.
//!
//! Extensions built here live on `A ⊕ M` with the first `dim A` basis
//! vectors spanning `A`.

use num::{One, Zero};
use thiserror::Error;

use crate::exact::{is_zero_vec, Matrix, Rational};
use crate::rb::{
    Algebra, Bimodule, ComplexKind, LinearMap, Multilinear, RbAlgebra, RbBimodule, RbError, RbPair,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtensionError {
    #[error("extension data do not define a Rota-Baxter algebra: {0}")]
    Axiom(RbError),
    #[error("map data inconsistent: {0}")]
    Maps(&'static str),
    #[error("cochain shape does not match the pair")]
    Shape,
}

/// `(ψ, χ) ∈ C^2_RBA(A, M)`: `ψ: A ⊗ A → M`, `χ: A → M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionCocycle {
    pub psi: Multilinear,
    pub chi: Multilinear,
}

impl ExtensionCocycle {
    pub fn zero(da: usize, dm: usize) -> Self {
        ExtensionCocycle {
            psi: Multilinear::zeros(da, dm, 2),
            chi: Multilinear::zeros(da, dm, 1),
        }
    }

    pub fn from_vector(da: usize, dm: usize, x: &[Rational]) -> Self {
        let split = da * da * dm;
        ExtensionCocycle {
            psi: Multilinear::from_vec(da, dm, 2, x[..split].to_vec()),
            chi: Multilinear::from_vec(da, dm, 1, x[split..].to_vec()),
        }
    }

    pub fn to_vector(&self) -> Vec<Rational> {
        let mut v = self.psi.data.clone();
        v.extend(self.chi.data.iter().cloned());
        v
    }

    pub fn is_cocycle(&self, pair: &RbPair) -> bool {
        is_zero_vec(&pair.d(2, &self.to_vector()))
    }
}

fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

/// The algebra on `A ⊕ M` with `(a,m)(b,n) = (ab, an + mb + ψ(a,b))` and
/// `T̂(a,m) = (Ta, χ(a) + T_M m)`, without checking the axioms.
pub fn extension_unchecked(
    pair: &RbPair,
    c: &ExtensionCocycle,
) -> Result<RbAlgebra, ExtensionError> {
    let (da, dm) = (pair.dim_a(), pair.dim_m());
    if c.psi.in_dim != da
        || c.psi.out_dim != dm
        || c.psi.arity != 2
        || c.chi.in_dim != da
        || c.chi.out_dim != dm
        || c.chi.arity != 1
    {
        return Err(ExtensionError::Shape);
    }
    let a = &pair.algebra;
    let bimod = pair.module.bimodule();
    let d = da + dm;
    let mut mult = vec![Rational::zero(); d * d * d];
    for x in 0..d {
        for y in 0..d {
            let (top, bottom) = match (x < da, y < da) {
                (true, true) => (
                    a.algebra().mul(&unit(da, x), &unit(da, y)),
                    c.psi.eval_basis(&[x, y]),
                ),
                (true, false) => (
                    vec![Rational::zero(); da],
                    bimod.act_left(&unit(da, x), &unit(dm, y - da)),
                ),
                (false, true) => (
                    vec![Rational::zero(); da],
                    bimod.act_right(&unit(dm, x - da), &unit(da, y)),
                ),
                (false, false) => (vec![Rational::zero(); da], vec![Rational::zero(); dm]),
            };
            for (k, v) in top.into_iter().chain(bottom).enumerate() {
                mult[(x * d + y) * d + k] = v;
            }
        }
    }
    let mut op = vec![Rational::zero(); d * d];
    for i in 0..da {
        for j in 0..da {
            op[i * d + j] = a.operator().coeff(i, j).clone();
        }
        for (j, v) in c.chi.eval_basis(&[i]).into_iter().enumerate() {
            op[i * d + da + j] = v;
        }
    }
    let tm = pair.module.operator();
    for i in 0..dm {
        for j in 0..dm {
            op[(da + i) * d + da + j] = tm.coeff(i, j).clone();
        }
    }
    let alg = Algebra::unchecked(d, mult).map_err(ExtensionError::Axiom)?;
    let op = LinearMap::new(d, op).map_err(ExtensionError::Axiom)?;
    RbAlgebra::unchecked(alg, op, a.weight().clone()).map_err(ExtensionError::Axiom)
}

/// The extension defined by `(ψ, χ)`; fails with the violated axiom when
/// `(ψ, χ)` is not a cocycle.
pub fn build_extension(pair: &RbPair, c: &ExtensionCocycle) -> Result<RbAlgebra, ExtensionError> {
    let e = extension_unchecked(pair, c)?;
    e.validate().map_err(ExtensionError::Axiom)?;
    Ok(e)
}

/// Inclusion `M → A ⊕ M`, projection `A ⊕ M → A` and section `A → A ⊕ M`
/// of a built extension, as matrices acting on columns.
pub fn canonical_maps(da: usize, dm: usize) -> (Matrix, Matrix, Matrix) {
    let d = da + dm;
    let inc = Matrix::from_triplets(d, dm, (0..dm).map(|i| (da + i, i, Rational::one())));
    let proj = Matrix::from_triplets(da, d, (0..da).map(|i| (i, i, Rational::one())));
    let sec = Matrix::from_triplets(d, da, (0..da).map(|i| (i, i, Rational::one())));
    (inc, proj, sec)
}

fn mul_vec(alg: &RbAlgebra, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
    alg.algebra().mul(u, v)
}

/// An abelian extension `Â` of `A` by `M` given through `i: M → Â`,
/// `p: Â → A` and a linear section `s` of `p`.
pub struct ExtensionData<'a> {
    pub total: &'a RbAlgebra,
    pub base: &'a RbAlgebra,
    pub inclusion: &'a Matrix,
    pub projection: &'a Matrix,
    pub section: &'a Matrix,
}

/// Recovers the Rota-Baxter bimodule on `M` and the cocycle
/// `ψ(a,b) = s(a)s(b) - s(ab)`, `χ(a) = T̂ s(a) - s(T a)`.
pub fn classify(e: &ExtensionData) -> Result<(RbBimodule, ExtensionCocycle), ExtensionError> {
    let (da, d) = (e.base.dim(), e.total.dim());
    let dm = e.inclusion.cols();
    if e.inclusion.rows() != d
        || e.projection.rows() != da
        || e.projection.cols() != d
        || e.section.rows() != d
        || e.section.cols() != da
        || da + dm != d
    {
        return Err(ExtensionError::Maps("dimensions"));
    }
    if e.projection.mul(e.section) != Matrix::identity(da) {
        return Err(ExtensionError::Maps(
            "section is not a right inverse of the projection",
        ));
    }
    if !e.projection.mul(e.inclusion).is_zero() {
        return Err(ExtensionError::Maps(
            "projection does not kill the inclusion",
        ));
    }
    let frame = e.section.hstack(e.inclusion);
    if frame.rank() != d {
        return Err(ExtensionError::Maps("inclusion is not injective"));
    }
    if !is_algebra_morphism(e.projection, e.total, e.base) {
        return Err(ExtensionError::Maps("projection is not a morphism"));
    }
    // coordinate along M in the splitting Â = s(A) ⊕ i(M)
    let t = |x: &[Rational]| -> Vec<Rational> {
        let c = frame.solve(x).expect("frame is invertible");
        c[da..].to_vec()
    };
    let s = |a: usize| e.section.column(a);
    let i = |m: usize| e.inclusion.column(m);
    let top = e.total.operator();
    let mut left = Vec::with_capacity(da * dm * dm);
    let mut right = vec![Rational::zero(); da * dm * dm];
    for a in 0..da {
        for m in 0..dm {
            let l = mul_vec(e.total, &s(a), &i(m));
            left.extend(t(&l));
            let r = mul_vec(e.total, &i(m), &s(a));
            for (k, v) in t(&r).into_iter().enumerate() {
                right[(m * da + a) * dm + k] = v;
            }
        }
    }
    let mut tm = Vec::with_capacity(dm * dm);
    for m in 0..dm {
        tm.extend(t(&top.apply(&i(m))));
    }
    let bimod = Bimodule::unchecked(da, dm, left, right).map_err(ExtensionError::Axiom)?;
    let module = RbBimodule::unchecked(
        bimod,
        LinearMap::new(dm, tm).map_err(ExtensionError::Axiom)?,
    )
    .map_err(ExtensionError::Axiom)?;
    let mut psi = Multilinear::zeros(da, dm, 2);
    for a in 0..da {
        for b in 0..da {
            let mut v = mul_vec(e.total, &s(a), &s(b));
            let ab = e.base.algebra().mul(&unit(da, a), &unit(da, b));
            let sab = e.section.mul_vec(&ab);
            for (x, y) in v.iter_mut().zip(&sab) {
                *x -= y;
            }
            for (k, c) in t(&v).iter().enumerate() {
                psi.add_at(&[a, b], k, c);
            }
        }
    }
    let mut chi = Multilinear::zeros(da, dm, 1);
    for a in 0..da {
        let mut v = top.apply(&s(a));
        let sta = e.section.mul_vec(&e.base.operator().apply(&unit(da, a)));
        for (x, y) in v.iter_mut().zip(&sta) {
            *x -= y;
        }
        for (k, c) in t(&v).iter().enumerate() {
            chi.add_at(&[a], k, c);
        }
    }
    Ok((module, ExtensionCocycle { psi, chi }))
}

/// Whether the linear map `f` (columns are images of basis vectors)
/// intertwines products and operators.
pub fn is_algebra_morphism(f: &Matrix, src: &RbAlgebra, dst: &RbAlgebra) -> bool {
    let n = src.dim();
    for x in 0..n {
        let fx = f.column(x);
        if f.mul_vec(&src.operator().apply(&unit(n, x))) != dst.operator().apply(&fx) {
            return false;
        }
        for y in 0..n {
            let lhs = f.mul_vec(&src.algebra().mul(&unit(n, x), &unit(n, y)));
            if lhs != dst.algebra().mul(&fx, &f.column(y)) {
                return false;
            }
        }
    }
    true
}

/// For cohomologous cocycles with `y = x + d^1(γ_1, γ_0)`, the map
/// `ζ(a, m) = (a, m - γ(a))` with `γ = γ_1 + δ^0 γ_0`, an isomorphism of
/// the extension built from `x` onto the one built from `y`. `None` when
/// the cocycles are not cohomologous.
pub fn isomorphism(pair: &RbPair, x: &ExtensionCocycle, y: &ExtensionCocycle) -> Option<Matrix> {
    let (da, dm) = (pair.dim_a(), pair.dim_m());
    let mut diff = y.to_vector();
    for (a, b) in diff.iter_mut().zip(x.to_vector()) {
        *a -= b;
    }
    let d1 = pair.coboundary_matrix(ComplexKind::Rba, 1);
    let sol = d1.solve(&diff)?;
    let split = da * dm;
    let mut gamma = Multilinear::from_vec(da, dm, 1, sol[..split].to_vec());
    let g0 = Multilinear::from_vec(da, dm, 0, sol[split..].to_vec());
    for (a, b) in gamma.data.iter_mut().zip(pair.delta(0, &g0).data) {
        *a += b;
    }
    let d = da + dm;
    let mut entries: Vec<(usize, usize, Rational)> =
        (0..d).map(|i| (i, i, Rational::one())).collect();
    for a in 0..da {
        for (m, v) in gamma.eval_basis(&[a]).into_iter().enumerate() {
            if !v.is_zero() {
                entries.push((da + m, a, -v));
            }
        }
    }
    Some(Matrix::from_triplets(d, d, entries))
}
