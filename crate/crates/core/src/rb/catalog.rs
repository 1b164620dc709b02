//! Small Rota-Baxter algebras and bimodules with known structure, used as
//! test corpora and command-line examples.

use num::{One, Zero};

use super::{Algebra, Bimodule, LinearMap, RbAlgebra, RbBimodule, RbPair};
use crate::exact::{int, Rational};

fn zeros(n: usize) -> Vec<Rational> {
    vec![Rational::zero(); n]
}

/// `k^n` with componentwise product.
pub fn componentwise(n: usize) -> Algebra {
    let mut mult = zeros(n * n * n);
    for i in 0..n {
        mult[(i * n + i) * n + i] = Rational::one();
    }
    Algebra::new(n, mult).expect("componentwise product is associative")
}

/// `k^n` with `T = -λ P_S`, `P_S` the projection onto the coordinates in `S`.
pub fn projection(n: usize, subset: &[usize], weight: &Rational) -> RbAlgebra {
    let mut op = zeros(n * n);
    for &i in subset {
        op[i * n + i] = -weight.clone();
    }
    RbAlgebra::new(
        componentwise(n),
        LinearMap::new(n, op).unwrap(),
        weight.clone(),
    )
    .expect("scaled idempotent projection is Rota-Baxter")
}

/// `k^n` with the strict partial-sum operator `T(a)_i = λ Σ_{j<i} a_j`.
pub fn partial_sums(n: usize, weight: &Rational) -> RbAlgebra {
    let mut op = zeros(n * n);
    for j in 0..n {
        for i in j + 1..n {
            op[j * n + i] = weight.clone();
        }
    }
    RbAlgebra::new(
        componentwise(n),
        LinearMap::new(n, op).unwrap(),
        weight.clone(),
    )
    .expect("partial sums are Rota-Baxter")
}

/// `k^n` with `T(a)_i = -λ Σ_{j≤i} a_j`.
pub fn inclusive_partial_sums(n: usize, weight: &Rational) -> RbAlgebra {
    let mut op = zeros(n * n);
    for j in 0..n {
        for i in j..n {
            op[j * n + i] = -weight.clone();
        }
    }
    RbAlgebra::new(
        componentwise(n),
        LinearMap::new(n, op).unwrap(),
        weight.clone(),
    )
    .expect("inclusive partial sums are Rota-Baxter")
}

/// Upper triangular 2×2 matrices on the basis `E11, E12, E22`, with
/// `T = -λ` times the projection onto the diagonal along `E12`.
pub fn upper_triangular(weight: &Rational) -> RbAlgebra {
    let n = 3;
    let mut mult = zeros(27);
    let mut set = |i: usize, j: usize, k: usize| mult[(i * n + j) * n + k] = Rational::one();
    set(0, 0, 0);
    set(0, 1, 1);
    set(1, 2, 1);
    set(2, 2, 2);
    let mut op = zeros(9);
    op[0] = -weight.clone();
    op[8] = -weight.clone();
    RbAlgebra::new(
        Algebra::new(3, mult).unwrap(),
        LinearMap::new(3, op).unwrap(),
        weight.clone(),
    )
    .expect("diagonal projection is Rota-Baxter")
}

/// `k[x]/(x^n)` on the basis `1, x, …, x^{n-1}`.
pub fn truncated_polynomials(n: usize) -> Algebra {
    let mut mult = zeros(n * n * n);
    for i in 0..n {
        for j in 0..n {
            if i + j < n {
                mult[(i * n + j) * n + i + j] = Rational::one();
            }
        }
    }
    Algebra::new(n, mult).expect("truncated polynomials are associative")
}

/// Integration `x^i ↦ c x^{i+1}/(i+1)` on `k[x]/(x^n)`, weight zero.
pub fn integration(n: usize, c: &Rational) -> RbAlgebra {
    let mut op = zeros(n * n);
    for i in 0..n.saturating_sub(1) {
        op[i * n + i + 1] = c / int(i as i64 + 1);
    }
    RbAlgebra::new(
        truncated_polynomials(n),
        LinearMap::new(n, op).unwrap(),
        Rational::zero(),
    )
    .expect("integration is Rota-Baxter of weight zero")
}

/// `T = -λ Id` on any algebra.
pub fn scalar(alg: Algebra, weight: &Rational) -> RbAlgebra {
    let d = alg.dim();
    RbAlgebra::new(alg, LinearMap::scalar(d, &-weight.clone()), weight.clone())
        .expect("-λ Id is Rota-Baxter")
}

/// `T = 0` on any algebra.
pub fn zero_operator(alg: Algebra, weight: &Rational) -> RbAlgebra {
    let d = alg.dim();
    RbAlgebra::new(alg, LinearMap::zero(d), weight.clone()).expect("zero is Rota-Baxter")
}

/// Algebra with zero product; every operator is Rota-Baxter for every weight.
pub fn zero_product(op: LinearMap, weight: &Rational) -> RbAlgebra {
    let d = op.dim();
    RbAlgebra::new(
        Algebra::new(d, zeros(d * d * d)).unwrap(),
        op,
        weight.clone(),
    )
    .expect("zero product")
}

/// Zero bimodule of dimension `dim` with `T_M = c Id`.
pub fn zero_bimodule(a: &RbAlgebra, dim: usize, c: &Rational) -> RbBimodule {
    RbBimodule::new(Bimodule::zero(a.dim(), dim), LinearMap::scalar(dim, c), a)
        .expect("zero actions satisfy every axiom")
}

/// Rota-Baxter algebras of dimension at most three for the given weight.
pub fn algebras(weight: &Rational) -> Vec<RbAlgebra> {
    let mut out = vec![
        zero_operator(componentwise(1), weight),
        scalar(componentwise(1), weight),
        projection(2, &[0], weight),
        partial_sums(3, weight),
        inclusive_partial_sums(2, weight),
        upper_triangular(weight),
        zero_product(
            LinearMap::new(2, vec![int(1), int(1), int(0), int(2)]).unwrap(),
            weight,
        ),
    ];
    if weight.is_zero() {
        out.push(integration(3, &int(1)));
        out.push(integration(2, &int(-2)));
    } else {
        out.push(scalar(truncated_polynomials(3), weight));
        out.push(zero_operator(truncated_polynomials(2), weight));
    }
    out
}

/// The weights exercised by the test corpora.
pub fn weights() -> Vec<Rational> {
    vec![int(0), int(1), int(-1), Rational::new(1.into(), 2.into())]
}

/// Named algebra/bimodule pairs of dimension at most three over all four
/// weights: regular bimodules plus zero bimodules with a scalar operator.
pub fn corpus() -> Vec<(String, RbPair)> {
    let mut out = Vec::new();
    for w in weights() {
        for (i, a) in algebras(&w).into_iter().enumerate() {
            let name = format!("alg{i}@{}", crate::exact::format_rational(&w));
            out.push((
                format!("{name}/regular"),
                RbPair::regular(a.clone()).unwrap(),
            ));
            if i % 3 == 2 {
                let m = zero_bimodule(&a, 1, &int(2));
                out.push((format!("{name}/zero"), RbPair::new(a, m).unwrap()));
            }
        }
    }
    out
}
