//! Graded vector spaces, Koszul signs, permutations and shuffles.
//!
//! Permutations are zero-based: `perm[k]` is the image of `k`, so the
//! reordered sequence is `x[perm[0]], x[perm[1]], ...`.

use serde::{Deserialize, Serialize};

/// Finite-dimensional graded vector space given by a homogeneous basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GradedSpace {
    degrees: Vec<i32>,
    labels: Vec<String>,
}

impl GradedSpace {
    pub fn new(degrees: Vec<i32>) -> Self {
        let labels = (0..degrees.len()).map(|i| format!("e{i}")).collect();
        GradedSpace { degrees, labels }
    }

    pub fn with_labels(degrees: Vec<i32>, labels: Vec<String>) -> Self {
        assert_eq!(degrees.len(), labels.len(), "one label per basis vector");
        GradedSpace { degrees, labels }
    }

    /// Ungraded space of dimension `dim`, concentrated in degree zero.
    pub fn ungraded(dim: usize) -> Self {
        GradedSpace::new(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn is_concentrated_in_zero(&self) -> bool {
        self.degrees.iter().all(|d| *d == 0)
    }
}

/// `(-1)^e` as `+1` or `-1`.
pub fn parity_sign(e: i64) -> i32 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

pub fn is_permutation(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    perm.iter()
        .all(|&p| p < perm.len() && !std::mem::replace(&mut seen[p], true))
}

/// Sign of a permutation, via inversion count.
pub fn sgn(perm: &[usize]) -> i32 {
    let mut inv = 0i64;
    for a in 0..perm.len() {
        for b in a + 1..perm.len() {
            if perm[a] > perm[b] {
                inv += 1;
            }
        }
    }
    parity_sign(inv)
}

/// Koszul sign ε(σ; x): the sign with x_1⊙…⊙x_n = ε · x_{σ(1)}⊙…⊙x_{σ(n)}
/// in the graded symmetric algebra.
pub fn epsilon_sign(perm: &[usize], degrees: &[i32]) -> i32 {
    assert_eq!(
        perm.len(),
        degrees.len(),
        "permutation and degree list differ in length"
    );
    debug_assert!(is_permutation(perm));
    let mut e = 0i64;
    for a in 0..perm.len() {
        for b in a + 1..perm.len() {
            if perm[a] > perm[b] {
                e += i64::from(degrees[perm[a]]) * i64::from(degrees[perm[b]]);
            }
        }
    }
    parity_sign(e)
}

/// Antisymmetric Koszul sign χ(σ; x) = sgn(σ) ε(σ; x).
pub fn chi_sign(perm: &[usize], degrees: &[i32]) -> i32 {
    sgn(perm) * epsilon_sign(perm, degrees)
}

/// `(-1)^{Σ_{k=1}^{n-1} Σ_{j=1}^{k} |x_j|}`, the sign of `s^{⊗n}` acting on
/// `x_1 ⊗ … ⊗ x_n`; also the sign of the décalage `S(sV)^n ≅ s^n Λ(V)^n`.
pub fn suspension_sign(degrees: &[i32]) -> i32 {
    let n = degrees.len();
    let e: i64 = degrees
        .iter()
        .enumerate()
        .map(|(j, d)| (n - 1 - j) as i64 * i64::from(*d))
        .sum();
    parity_sign(e)
}

/// Koszul sign of `(f_1 ⊗ … ⊗ f_k)(X_1 ⊗ … ⊗ X_k)`: each map passes the
/// blocks to its left. `block_degrees[j]` is the total degree of block `j`.
pub fn tensor_map_sign(map_degrees: &[i32], block_degrees: &[i32]) -> i32 {
    assert_eq!(map_degrees.len(), block_degrees.len());
    let mut passed = 0i64;
    let mut e = 0i64;
    for (f, x) in map_degrees.iter().zip(block_degrees) {
        e += i64::from(*f) * passed;
        passed += i64::from(*x);
    }
    parity_sign(e)
}

pub fn identity(n: usize) -> Vec<usize> {
    (0..n).collect()
}

pub fn inverse(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

/// `(σ ∘ τ)(k) = σ(τ(k))`.
pub fn compose(sigma: &[usize], tau: &[usize]) -> Vec<usize> {
    tau.iter().map(|&t| sigma[t]).collect()
}

/// Applies a permutation to a sequence: `out[k] = xs[perm[k]]`.
pub fn permute<T: Clone>(perm: &[usize], xs: &[T]) -> Vec<T> {
    perm.iter().map(|&p| xs[p].clone()).collect()
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = identity(n);
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

/// Increasing `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            if n - x < k - cur.len() {
                break;
            }
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// `(i, n-i)`-shuffles: σ(1)<…<σ(i) and σ(i+1)<…<σ(n).
pub fn shuffles(i: usize, j: usize) -> Vec<Vec<usize>> {
    let n = i + j;
    subsets(n, i)
        .into_iter()
        .map(|first| {
            let mut perm = first.clone();
            perm.extend((0..n).filter(|x| !first.contains(x)));
            perm
        })
        .collect()
}

/// Writes δ ∈ S_n uniquely as δ = σ ∘ (τ × π) with σ an `(i, n-i)`-shuffle,
/// τ ∈ S_i and π ∈ S_{n-i}. Returns `(σ, τ, π)`.
pub fn factor_permutation(delta: &[usize], i: usize) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let n = delta.len();
    assert!(i <= n);
    let mut first: Vec<usize> = delta[..i].to_vec();
    let mut second: Vec<usize> = delta[i..].to_vec();
    first.sort_unstable();
    second.sort_unstable();
    let mut sigma = first;
    sigma.extend(second);
    let sigma_inv = inverse(&sigma);
    let tau = delta[..i].iter().map(|&d| sigma_inv[d]).collect();
    let pi = delta[i..].iter().map(|&d| sigma_inv[d] - i).collect();
    (sigma, tau, pi)
}

pub fn is_shuffle(perm: &[usize], i: usize) -> bool {
    perm[..i].windows(2).all(|w| w[0] < w[1]) && perm[i..].windows(2).all(|w| w[0] < w[1])
}
