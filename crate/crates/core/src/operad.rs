//! The free graded operad on `m_n` (`n ≥ 2`, degree `n - 2`) and `T_n`
//! (`n ≥ 1`, degree `n - 1`) with the homotopy Rota-Baxter differential,
//! the graded path-lexicographic order, effective divisors, the contracting
//! homotopy `ℍ` and homology of T-weight truncations.
//!
//! A tree monomial stands for the composite of its vertices taken in
//! preorder; reordering vertices costs the Koszul sign of the transposed
//! degrees.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num::{One, Zero};
use thiserror::Error;

use crate::exact::{pow, Matrix, Rational};
use crate::linfty::homotopy::{compositions, weak_compositions};

/// Default cap on the number of monomials a truncation may enumerate.
pub const DEFAULT_MAX_MONOMIALS: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OperadError {
    #[error("position {position} out of range for arity {arity}")]
    PositionOutOfRange { position: usize, arity: usize },
    #[error("truncation needs at least {count} monomials, cap is {cap}")]
    ResourceLimit { count: usize, cap: usize },
    #[error("homotopy recursion did not decrease at {0}")]
    NotDecreasing(String),
    #[error("differential raised the T-weight of {0}")]
    WeightIncreased(String),
    #[error("cannot parse `{0}`")]
    Parse(String),
    #[error("{0} is not a generator")]
    NotAGenerator(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    M,
    T,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub kind: Kind,
    pub arity: usize,
}

impl Generator {
    pub fn m(arity: usize) -> Self {
        assert!(arity >= 2, "m_n needs n ≥ 2");
        Generator {
            kind: Kind::M,
            arity,
        }
    }

    pub fn t(arity: usize) -> Self {
        assert!(arity >= 1, "T_n needs n ≥ 1");
        Generator {
            kind: Kind::T,
            arity,
        }
    }

    pub fn degree(&self) -> usize {
        match self.kind {
            Kind::M => self.arity - 2,
            Kind::T => self.arity - 1,
        }
    }

    pub fn t_weight(&self) -> usize {
        match self.kind {
            Kind::M => 0,
            Kind::T => self.arity,
        }
    }

    fn code(&self) -> u16 {
        let k = self.arity as u16;
        match self.kind {
            Kind::M => 2 * k - 2,
            Kind::T => 2 * k - 1,
        }
    }

    fn from_code(c: u16) -> Self {
        debug_assert!(c > 0);
        if c % 2 == 0 {
            Generator::m(usize::from(c / 2 + 1))
        } else {
            Generator::t(usize::from(c.div_ceil(2)))
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            Kind::M => write!(f, "m{}", self.arity),
            Kind::T => write!(f, "T{}", self.arity),
        }
    }
}

impl FromStr for Generator {
    type Err = OperadError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || OperadError::Parse(s.to_string());
        let (kind, rest) = match s.chars().next() {
            Some('m') => (Kind::M, &s[1..]),
            Some('T') => (Kind::T, &s[1..]),
            _ => return Err(err()),
        };
        let arity: usize = rest.parse().map_err(|_| err())?;
        match kind {
            Kind::M if arity >= 2 => Ok(Generator::m(arity)),
            Kind::T if arity >= 1 => Ok(Generator::t(arity)),
            _ => Err(err()),
        }
    }
}

fn code_arity(c: u16) -> usize {
    if c == 0 {
        0
    } else {
        Generator::from_code(c).arity
    }
}

fn code_degree(c: u16) -> usize {
    if c == 0 {
        0
    } else {
        usize::from((c - 1) / 2)
    }
}

fn code_t_weight(c: u16) -> usize {
    if c % 2 == 1 {
        usize::from(c.div_ceil(2))
    } else {
        0
    }
}

/// A planar rooted tree with generator-labeled vertices, stored as its
/// preorder code sequence (`0` for a leaf).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u16>);

impl Monomial {
    /// The identity (a bare leaf).
    pub fn identity() -> Self {
        Monomial(vec![0])
    }

    pub fn corolla(g: Generator) -> Self {
        let mut v = vec![g.code()];
        v.extend(std::iter::repeat_n(0, g.arity));
        Monomial(v)
    }

    pub fn codes(&self) -> &[u16] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.iter().filter(|c| **c == 0).count()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|c| code_degree(*c)).sum()
    }

    pub fn t_weight(&self) -> usize {
        self.0.iter().map(|c| code_t_weight(*c)).sum()
    }

    pub fn vertices(&self) -> usize {
        self.0.iter().filter(|c| **c != 0).count()
    }

    /// The generators in preorder.
    pub fn generators(&self) -> Vec<Generator> {
        self.0
            .iter()
            .filter(|c| **c != 0)
            .map(|c| Generator::from_code(*c))
            .collect()
    }

    /// The generator if the monomial is a single corolla.
    pub fn as_generator(&self) -> Option<Generator> {
        (self.vertices() == 1 && self.0[0] != 0).then(|| Generator::from_code(self.0[0]))
    }

    /// Path sequence: for each leaf, the codes on the path from the root.
    fn path_sequence(&self) -> Vec<Vec<u16>> {
        let mut out = Vec::new();
        let mut stack: Vec<(u16, usize)> = Vec::new();
        for &c in &self.0 {
            if c == 0 {
                out.push(stack.iter().map(|(c, _)| *c).collect());
                // close finished vertices
                while let Some(top) = stack.last_mut() {
                    top.1 -= 1;
                    if top.1 == 0 {
                        stack.pop();
                    } else {
                        break;
                    }
                }
            } else {
                stack.push((c, code_arity(c)));
            }
        }
        out
    }
}

/// Graded path-lexicographic order: arity, then degree, then path
/// sequences compared position by position, words by length and then
/// lexicographically under `T_1 < m_2 < T_2 < m_3 < …`.
pub fn compare(a: &Monomial, b: &Monomial) -> Ordering {
    a.arity()
        .cmp(&b.arity())
        .then(a.degree().cmp(&b.degree()))
        .then_with(|| {
            let (pa, pb) = (a.path_sequence(), b.path_sequence());
            for (x, y) in pa.iter().zip(&pb) {
                let o = x.len().cmp(&y.len()).then_with(|| x.cmp(y));
                if o != Ordering::Equal {
                    return o;
                }
            }
            Ordering::Equal
        })
}

/// Explicit tree used while rewriting; `rank` is the position of the vertex
/// in the composition order the result was built from.
#[derive(Clone, Debug)]
struct Node {
    code: u16,
    rank: u32,
    children: Vec<Node>,
}

impl Node {
    fn leaf() -> Node {
        Node {
            code: 0,
            rank: 0,
            children: Vec::new(),
        }
    }
}

fn parse_tree(codes: &[u16], next_rank: &mut dyn FnMut(usize) -> u32) -> Node {
    fn rec(
        codes: &[u16],
        pos: &mut usize,
        vertex: &mut usize,
        next_rank: &mut dyn FnMut(usize) -> u32,
    ) -> Node {
        let c = codes[*pos];
        *pos += 1;
        if c == 0 {
            return Node::leaf();
        }
        let rank = next_rank(*vertex);
        *vertex += 1;
        let children = (0..code_arity(c))
            .map(|_| rec(codes, pos, vertex, next_rank))
            .collect();
        Node {
            code: c,
            rank,
            children,
        }
    }
    let (mut pos, mut vertex) = (0, 0);
    rec(codes, &mut pos, &mut vertex, next_rank)
}

/// Preorder codes and the Koszul sign taking the rank order to preorder.
fn serialize(root: &Node) -> (Monomial, bool) {
    fn rec(n: &Node, codes: &mut Vec<u16>, ranks: &mut Vec<(u32, usize)>) {
        codes.push(n.code);
        if n.code != 0 {
            ranks.push((n.rank, code_degree(n.code)));
        }
        for c in &n.children {
            rec(c, codes, ranks);
        }
    }
    let mut codes = Vec::new();
    let mut ranks = Vec::new();
    rec(root, &mut codes, &mut ranks);
    let mut odd = false;
    for i in 0..ranks.len() {
        if ranks[i].1 % 2 == 0 {
            continue;
        }
        for j in i + 1..ranks.len() {
            if ranks[i].0 > ranks[j].0 && ranks[j].1 % 2 == 1 {
                odd = !odd;
            }
        }
    }
    (Monomial(codes), odd)
}

/// Replaces the leaves of `n` left to right by `subs`.
fn graft_leaves(n: &mut Node, subs: &mut std::vec::IntoIter<Node>) {
    if n.code == 0 {
        *n = subs.next().expect("enough subtrees");
        return;
    }
    for c in n.children.iter_mut() {
        graft_leaves(c, subs);
    }
}

/// `f ∘_i g` with the Koszul sign; `i` is one-based.
pub fn compose_monomials(
    f: &Monomial,
    i: usize,
    g: &Monomial,
) -> Result<(Monomial, bool), OperadError> {
    let arity = f.arity();
    if i == 0 || i > arity {
        return Err(OperadError::PositionOutOfRange { position: i, arity });
    }
    let offset = f.vertices() as u32;
    let mut tf = parse_tree(&f.0, &mut |v| v as u32);
    let tg = parse_tree(&g.0, &mut |v| offset + v as u32);
    let mut subs: Vec<Node> = (0..arity).map(|_| Node::leaf()).collect();
    subs[i - 1] = tg;
    graft_leaves(&mut tf, &mut subs.into_iter());
    Ok(serialize(&tf))
}

/// Replaces the vertex with preorder index `k` by the tree `u`, whose
/// leaves receive that vertex's children. The composition order is: the
/// vertices before `k`, those of `u`, the rest.
fn substitute(t: &Monomial, k: usize, u: &Monomial) -> (Monomial, bool) {
    let ulen = u.vertices() as u32;
    let k32 = k as u32;
    let root = parse_tree(&t.0, &mut |v| {
        let v = v as u32;
        if v < k32 {
            v
        } else {
            v + ulen
        }
    });
    let tu = parse_tree(&u.0, &mut |v| k32 + v as u32);
    fn rec(n: Node, k: u32, ulen: u32, tu: &Node) -> Node {
        if n.code != 0 && n.rank == k + ulen {
            let children: Vec<Node> = n
                .children
                .into_iter()
                .map(|c| rec(c, k, ulen, tu))
                .collect();
            let mut out = tu.clone();
            graft_leaves(&mut out, &mut children.into_iter());
            return out;
        }
        Node {
            code: n.code,
            rank: n.rank,
            children: n
                .children
                .into_iter()
                .map(|c| rec(c, k, ulen, tu))
                .collect(),
        }
    }
    serialize(&rec(root, k32, ulen, &tu))
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn rec(
            codes: &[u16],
            pos: &mut usize,
            leaf: &mut usize,
            f: &mut fmt::Formatter<'_>,
        ) -> fmt::Result {
            let c = codes[*pos];
            *pos += 1;
            if c == 0 {
                *leaf += 1;
                return write!(f, "x{leaf}");
            }
            write!(f, "{}(", Generator::from_code(c))?;
            for j in 0..code_arity(c) {
                if j > 0 {
                    write!(f, ", ")?;
                }
                rec(codes, pos, leaf, f)?;
            }
            write!(f, ")")
        }
        let (mut pos, mut leaf) = (0, 0);
        rec(&self.0, &mut pos, &mut leaf, f)
    }
}

impl FromStr for Monomial {
    type Err = OperadError;

    /// Nested terms such as `m2(T1(x1), x2)`; a bare generator name is its
    /// corolla.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || OperadError::Parse(s.to_string());
        let src: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        fn ident(src: &[char], pos: &mut usize) -> String {
            let start = *pos;
            while *pos < src.len() && src[*pos].is_ascii_alphanumeric() {
                *pos += 1;
            }
            src[start..*pos].iter().collect()
        }
        fn rec(
            src: &[char],
            pos: &mut usize,
            out: &mut Vec<u16>,
            leaves: &mut usize,
        ) -> Option<()> {
            let name = ident(src, pos);
            if let Some(rest) = name.strip_prefix('x') {
                *leaves += 1;
                if rest.parse::<usize>().ok()? != *leaves {
                    return None;
                }
                out.push(0);
                return Some(());
            }
            let g: Generator = name.parse().ok()?;
            out.push(g.code());
            if src.get(*pos) != Some(&'(') {
                for _ in 0..g.arity {
                    *leaves += 1;
                    out.push(0);
                }
                return Some(());
            }
            *pos += 1;
            for j in 0..g.arity {
                if j > 0 {
                    if src.get(*pos) != Some(&',') {
                        return None;
                    }
                    *pos += 1;
                }
                rec(src, pos, out, leaves)?;
            }
            if src.get(*pos) != Some(&')') {
                return None;
            }
            *pos += 1;
            Some(())
        }
        let (mut pos, mut leaves) = (0, 0);
        let mut out = Vec::new();
        rec(&src, &mut pos, &mut out, &mut leaves).ok_or_else(err)?;
        if pos != src.len() {
            return Err(err());
        }
        Ok(Monomial(out))
    }
}

/// A finite rational combination of tree monomials of one arity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    arity: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Element {
    pub fn zero(arity: usize) -> Self {
        Element {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(m: Monomial) -> Self {
        let mut e = Element::zero(m.arity());
        e.add_term(m, Rational::one());
        e
    }

    pub fn generator(g: Generator) -> Self {
        Element::monomial(Monomial::corolla(g))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(m.arity(), self.arity);
        match self.terms.entry(m) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Element, c: &Rational) {
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn plus(mut self, other: &Element) -> Element {
        self.add_scaled(other, &Rational::one());
        self
    }

    pub fn minus(mut self, other: &Element) -> Element {
        self.add_scaled(other, &-Rational::one());
        self
    }

    pub fn scale(&self, c: &Rational) -> Element {
        let mut out = Element::zero(self.arity);
        out.add_scaled(self, c);
        out
    }

    /// Largest monomial for [`compare`].
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().max_by(|a, b| compare(a.0, b.0))
    }

    pub fn max_t_weight(&self) -> usize {
        self.terms.keys().map(Monomial::t_weight).max().unwrap_or(0)
    }

    /// `f ∘_i g`, bilinear with Koszul signs.
    pub fn compose(&self, i: usize, g: &Element) -> Result<Element, OperadError> {
        if i == 0 || i > self.arity {
            return Err(OperadError::PositionOutOfRange {
                position: i,
                arity: self.arity,
            });
        }
        let mut out = Element::zero(self.arity + g.arity - 1);
        for (a, x) in &self.terms {
            for (b, y) in &g.terms {
                let (m, odd) = compose_monomials(a, i, b)?;
                let c = x * y;
                out.add_term(m, if odd { -c } else { c });
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| compare(b.0, a.0));
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let neg = c < &Rational::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !a.is_one() {
                write!(f, "{}*", crate::exact::format_rational(&a))?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

fn sign(e: usize) -> Rational {
    if e % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Strictly increasing `len`-subsets of `1..=n`.
fn increasing(n: usize, len: usize) -> Vec<Vec<usize>> {
    crate::graded::subsets(n, len)
        .into_iter()
        .map(|s| s.into_iter().map(|x| x + 1).collect())
        .collect()
}

/// Where a typical divisor sits in a monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EffectiveDivisor {
    /// Preorder vertex index of the divisor root.
    pub vertex: usize,
    /// The generator whose leading differential term the divisor is.
    pub generator: Generator,
    /// Sum of degrees of the vertices preceding the divisor in preorder.
    pub omega: usize,
    /// Coefficient of the divisor in the differential of `generator`.
    pub leading_coefficient: Rational,
    /// One-based index of the typical leaf.
    pub leaf: usize,
}

/// Flattened view of a monomial by code position.
struct Flat {
    codes: Vec<u16>,
    children: Vec<Vec<usize>>,
    vertex_index: Vec<usize>,
    leaf_index: Vec<usize>,
}

impl Flat {
    fn new(m: &Monomial) -> Flat {
        let codes = m.0.clone();
        let n = codes.len();
        let mut children = vec![Vec::new(); n];
        let mut vertex_index = vec![usize::MAX; n];
        let mut leaf_index = vec![usize::MAX; n];
        let mut stack: Vec<(usize, usize)> = Vec::new();
        let (mut v, mut l) = (0, 0);
        for p in 0..n {
            if let Some(top) = stack.last_mut() {
                children[top.0].push(p);
                top.1 -= 1;
                if top.1 == 0 {
                    stack.pop();
                }
            }
            if codes[p] == 0 {
                l += 1;
                leaf_index[p] = l;
            } else {
                vertex_index[p] = v;
                v += 1;
                stack.push((p, code_arity(codes[p])));
            }
        }
        Flat {
            codes,
            children,
            vertex_index,
            leaf_index,
        }
    }

    /// If a typical divisor is rooted at `p`: its positions and generator.
    fn divisor_at(&self, p: usize) -> Option<(Vec<usize>, Generator)> {
        let c = self.codes[p];
        if c == 0 {
            return None;
        }
        let g = Generator::from_code(c);
        let first = self.children[p][0];
        let m2 = Generator::m(2).code();
        if self.codes[first] != m2 {
            return None;
        }
        match g.kind {
            Kind::M => Some((vec![p, first], Generator::m(g.arity + 1))),
            Kind::T => {
                let second = self.children[first][0];
                (self.codes[second] == Generator::t(1).code())
                    .then(|| (vec![p, first, second], Generator::t(g.arity + 1)))
            }
        }
    }

    /// Whether some typical divisor lies entirely on `path`.
    fn divisor_on_path(&self, path: &[usize]) -> bool {
        path.iter().enumerate().any(|(k, &p)| {
            self.divisor_at(p).is_some_and(|(chain, _)| {
                path.len() >= k + chain.len() && path[k..k + chain.len()] == chain[..]
            })
        })
    }

    fn path_to(&self, target: usize) -> Vec<usize> {
        fn rec(f: &Flat, p: usize, target: usize, path: &mut Vec<usize>) -> bool {
            path.push(p);
            if p == target {
                return true;
            }
            for &c in &f.children[p] {
                if rec(f, c, target, path) {
                    return true;
                }
            }
            path.pop();
            false
        }
        let mut path = Vec::new();
        rec(self, 0, target, &mut path);
        path
    }
}

/// The effective divisor of a monomial, if any: the first divisor root in
/// preorder whose leftmost branch up to its leaf `l` carries no other
/// typical divisor and no positive-degree vertex other than the root, and
/// such that paths to leaves left of `l` carry neither.
pub fn find_effective_divisor(t: &Monomial) -> Option<EffectiveDivisor> {
    let f = Flat::new(t);
    for p in 0..f.codes.len() {
        let Some((_, generator)) = f.divisor_at(p) else {
            continue;
        };
        let mut branch = vec![p];
        let mut q = p;
        while f.codes[q] != 0 {
            q = f.children[q][0];
            branch.push(q);
        }
        let leaf = q;
        let inner = &branch[1..branch.len() - 1];
        if inner
            .iter()
            .any(|&w| code_degree(f.codes[w]) > 0 || f.divisor_at(w).is_some())
        {
            continue;
        }
        let left_ok = (0..leaf).filter(|&r| f.codes[r] == 0).all(|r| {
            let path = f.path_to(r);
            path.iter().all(|&w| code_degree(f.codes[w]) == 0) && !f.divisor_on_path(&path)
        });
        if !left_ok {
            continue;
        }
        let omega = (0..p).map(|r| code_degree(f.codes[r])).sum();
        let leading_coefficient = match generator.kind {
            Kind::M => Rational::one(),
            Kind::T => -Rational::one(),
        };
        return Some(EffectiveDivisor {
            vertex: f.vertex_index[p],
            generator,
            omega,
            leading_coefficient,
            leaf: f.leaf_index[leaf],
        });
    }
    None
}

/// Replaces the typical divisor rooted at preorder vertex `vertex` by the
/// corolla of `s`.
fn collapse_divisor(t: &Monomial, vertex: usize, s: Generator) -> Monomial {
    let f = Flat::new(t);
    let p = (0..f.codes.len())
        .find(|&q| f.vertex_index[q] == vertex)
        .expect("vertex exists");
    let (chain, _) = f.divisor_at(p).expect("typical divisor");
    let mut tree = parse_tree(&t.0, &mut |v| v as u32);
    // walk to the divisor root along the preorder
    fn find<'a>(n: &'a mut Node, rank: u32) -> Option<&'a mut Node> {
        if n.code != 0 && n.rank == rank {
            return Some(n);
        }
        for c in n.children.iter_mut() {
            if let Some(x) = find(c, rank) {
                return Some(x);
            }
        }
        None
    }
    let node = find(&mut tree, vertex as u32).expect("vertex exists");
    // divisor leaves in order: children of the deepest chain vertex, then
    // the remaining children of each chain vertex going down
    let mut levels: Vec<Vec<Node>> = Vec::new();
    let mut cur = node.clone();
    for _ in 1..chain.len() {
        let mut kids = cur.children.clone();
        let first = kids.remove(0);
        levels.push(kids);
        cur = first;
    }
    let mut leaves = cur.children.clone();
    for lvl in levels.into_iter().rev() {
        leaves.extend(lvl);
    }
    *node = Node {
        code: s.code(),
        rank: vertex as u32,
        children: leaves,
    };
    let (m, odd) = serialize(&tree);
    debug_assert!(!odd);
    m
}

/// Resource guard for enumerations, overridable with `RBH_MAX_MONOMIALS`.
pub fn max_monomials_from_env() -> usize {
    std::env::var("RBH_MAX_MONOMIALS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_MONOMIALS)
}

/// The dg operad of homotopy Rota-Baxter algebras of a fixed weight, with
/// caches for generator differentials and the homotopy.
pub struct RbInfinity {
    weight: Rational,
    max_monomials: usize,
    diff_cache: RefCell<HashMap<Generator, Element>>,
    h_cache: RefCell<HashMap<Monomial, Element>>,
}

impl RbInfinity {
    pub fn new(weight: Rational) -> Self {
        RbInfinity {
            weight,
            max_monomials: DEFAULT_MAX_MONOMIALS,
            diff_cache: RefCell::new(HashMap::new()),
            h_cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn with_max_monomials(mut self, cap: usize) -> Self {
        self.max_monomials = cap;
        self
    }

    pub fn weight(&self) -> &Rational {
        &self.weight
    }

    pub fn max_monomials(&self) -> usize {
        self.max_monomials
    }

    /// `∂` on a generator.
    pub fn generator_differential(&self, g: Generator) -> Element {
        if let Some(e) = self.diff_cache.borrow().get(&g) {
            return e.clone();
        }
        let e = match g.kind {
            Kind::M => self.diff_m(g.arity),
            Kind::T => self.diff_t(g.arity),
        };
        self.diff_cache.borrow_mut().insert(g, e.clone());
        e
    }

    fn diff_m(&self, n: usize) -> Element {
        let mut out = Element::zero(n);
        for j in 2..n {
            for i in 1..=n - j + 1 {
                let t = Element::generator(Generator::m(n - j + 1))
                    .compose(i, &Element::generator(Generator::m(j)))
                    .expect("position in range");
                out.add_scaled(&t, &sign(i + 1 + j * (n - i)));
            }
        }
        out
    }

    fn diff_t(&self, n: usize) -> Element {
        let mut out = Element::zero(n);
        for k in 2..=n {
            for ls in compositions(n, k) {
                let alpha: usize = ls
                    .iter()
                    .enumerate()
                    .map(|(j, l)| (k - 1 - j) * (l - 1))
                    .sum();
                let mut t = Element::generator(Generator::m(k));
                let mut pos = 1;
                for &l in &ls {
                    t = t
                        .compose(pos, &Element::generator(Generator::t(l)))
                        .expect("in range");
                    pos += l;
                }
                out.add_scaled(&t, &sign(alpha));
            }
        }
        for p in 2..=n {
            for q in 1..=p {
                let Some(total) = (n + q).checked_sub(p) else {
                    continue;
                };
                let coeff = pow(&self.weight, p - q);
                if coeff.is_zero() {
                    continue;
                }
                for rs in compositions(total, q) {
                    let r1 = rs[0];
                    for ks in increasing(p, q - 1) {
                        let mut inner = Element::generator(Generator::m(p));
                        let mut shift = 0;
                        for (j, &kj) in ks.iter().enumerate() {
                            let r = rs[j + 1];
                            inner = inner
                                .compose(kj + shift, &Element::generator(Generator::t(r)))
                                .expect("in range");
                            shift += r - 1;
                        }
                        let s: usize = rs[1..].iter().map(|r| r - 1).sum();
                        let tail: usize = rs[1..]
                            .iter()
                            .zip(&ks)
                            .map(|(r, k)| (r - 1) * (p - k))
                            .sum();
                        for i in 1..=r1 {
                            let beta = i + (p + s) * (r1 - i) + tail;
                            let t = Element::generator(Generator::t(r1))
                                .compose(i, &inner)
                                .expect("in range");
                            out.add_scaled(&t, &(sign(beta) * &coeff));
                        }
                    }
                }
            }
        }
        out
    }

    /// `∂` on a monomial, as a degree −1 derivation along the preorder.
    pub fn differential_monomial(&self, t: &Monomial) -> Element {
        let mut out = Element::zero(t.arity());
        let mut before = 0;
        for (k, g) in t.generators().into_iter().enumerate() {
            let dg = self.generator_differential(g);
            let s = sign(before);
            for (u, c) in dg.terms() {
                let (m, odd) = substitute(t, k, u);
                let c = &s * c;
                out.add_term(m, if odd { -c } else { c });
            }
            before += g.degree();
        }
        out
    }

    pub fn differential(&self, x: &Element) -> Element {
        let mut out = Element::zero(x.arity());
        for (m, c) in x.terms() {
            out.add_scaled(&self.differential_monomial(m), c);
        }
        out
    }

    /// `ℍ̄(T) = (-1)^ω / l_S · T[Ŝ ↦ S]` and `T̄ = T - (1/l_S) T[Ŝ ↦ ∂S]`.
    fn homotopy_step(&self, t: &Monomial, div: &EffectiveDivisor) -> (Element, Element) {
        let collapsed = collapse_divisor(t, div.vertex, div.generator);
        let inv = Rational::one() / &div.leading_coefficient;
        let bar_h = Element::monomial(collapsed.clone()).scale(&(sign(div.omega) * &inv));
        let ds = self.generator_differential(div.generator);
        let mut replaced = Element::zero(t.arity());
        for (u, c) in ds.terms() {
            let (m, odd) = substitute(&collapsed, div.vertex, u);
            replaced.add_term(m, if odd { -c.clone() } else { c.clone() });
        }
        let t_bar = Element::monomial(t.clone()).minus(&replaced.scale(&inv));
        (bar_h, t_bar)
    }

    /// `(ℍ̄(T), T̄)` for an effective monomial, `None` otherwise.
    pub fn split(&self, t: &Monomial) -> Option<(Element, Element)> {
        find_effective_divisor(t).map(|div| self.homotopy_step(t, &div))
    }

    /// The contracting homotopy on a monomial.
    pub fn homotopy_monomial(&self, t: &Monomial) -> Result<Element, OperadError> {
        if let Some(e) = self.h_cache.borrow().get(t) {
            return Ok(e.clone());
        }
        let Some(div) = find_effective_divisor(t) else {
            return Ok(Element::zero(t.arity()));
        };
        let (mut out, t_bar) = self.homotopy_step(t, &div);
        for (m, c) in t_bar.terms() {
            if compare(m, t) != Ordering::Less {
                return Err(OperadError::NotDecreasing(t.to_string()));
            }
            out.add_scaled(&self.homotopy_monomial(m)?, c);
        }
        self.h_cache.borrow_mut().insert(t.clone(), out.clone());
        Ok(out)
    }

    pub fn homotopy(&self, x: &Element) -> Result<Element, OperadError> {
        let mut out = Element::zero(x.arity());
        for (m, c) in x.terms() {
            out.add_scaled(&self.homotopy_monomial(m)?, c);
        }
        Ok(out)
    }

    /// All monomials of the given arity with T-weight at most `max_weight`,
    /// grouped by degree.
    pub fn truncation(
        &self,
        arity: usize,
        max_weight: usize,
    ) -> Result<BTreeMap<usize, Vec<Monomial>>, OperadError> {
        let mut memo: HashMap<(usize, usize), Vec<Vec<u16>>> = HashMap::new();
        let mut count = 0usize;
        let mut out: BTreeMap<usize, Vec<Monomial>> = BTreeMap::new();
        for w in 0..=max_weight {
            for codes in trees_exact(arity, w, &mut memo, self.max_monomials, &mut count)? {
                let m = Monomial(codes);
                out.entry(m.degree()).or_default().push(m);
            }
        }
        Ok(out)
    }

    /// Betti numbers `H_i(F_W(n))` of the T-weight truncation; also checks
    /// that `∂` stays inside it.
    pub fn truncated_homology(
        &self,
        arity: usize,
        max_weight: usize,
    ) -> Result<HomologyTable, OperadError> {
        let slices = self.truncation(arity, max_weight)?;
        let top = slices.keys().copied().max().unwrap_or(0);
        let index: Vec<HashMap<&Monomial, usize>> = (0..=top)
            .map(|i| {
                slices
                    .get(&i)
                    .map(|v| v.iter().enumerate().map(|(k, m)| (m, k)).collect())
                    .unwrap_or_default()
            })
            .collect();
        let dims: Vec<usize> = (0..=top)
            .map(|i| slices.get(&i).map_or(0, Vec::len))
            .collect();
        // ranks[i] = rank of ∂: C_i → C_{i-1}
        let mut ranks = vec![0usize; top + 2];
        for i in 1..=top {
            let mut triplets = Vec::new();
            for (col, m) in slices.get(&i).into_iter().flatten().enumerate() {
                for (img, c) in self.differential_monomial(m).terms() {
                    let row = *index[i - 1]
                        .get(img)
                        .ok_or_else(|| OperadError::WeightIncreased(m.to_string()))?;
                    triplets.push((row, col, c.clone()));
                }
            }
            ranks[i] = Matrix::from_triplets(dims[i - 1], dims[i], triplets).rank();
        }
        let betti = (0..=top)
            .map(|i| dims[i] - ranks[i] - ranks[i + 1])
            .collect();
        Ok(HomologyTable {
            arity,
            max_weight,
            dims,
            betti,
        })
    }

    /// The two defining relations of the Rota-Baxter operad, written
    /// directly: associativity and
    /// `(μ∘_1T)∘_2T - (T∘_1μ)∘_1T - (T∘_1μ)∘_2T - λ T∘_1μ`.
    pub fn relations(&self) -> (Element, Element) {
        let mu = Element::generator(Generator::m(2));
        let t = Element::generator(Generator::t(1));
        let c = |a: &Element, i, b: &Element| a.compose(i, b).expect("in range");
        let assoc = c(&mu, 1, &mu).minus(&c(&mu, 2, &mu));
        let t_mu = c(&t, 1, &mu);
        let rb = c(&c(&mu, 1, &t), 2, &t)
            .minus(&c(&t_mu, 1, &t))
            .minus(&c(&t_mu, 2, &t))
            .minus(&t_mu.scale(&self.weight));
        (assoc, rb)
    }

    /// Signs `s` with `∂m_3 = s_1 · assoc` and `∂T_2 = s_2 · rb`, if any.
    pub fn rb_relation_check(&self) -> Option<(i8, i8)> {
        let (assoc, rb) = self.relations();
        let which = |x: &Element, y: &Element| -> Option<i8> {
            if x == y {
                Some(1)
            } else if *x == y.scale(&-Rational::one()) {
                Some(-1)
            } else {
                None
            }
        };
        let s1 = which(&self.generator_differential(Generator::m(3)), &assoc)?;
        let s2 = which(&self.generator_differential(Generator::t(2)), &rb)?;
        Some((s1, s2))
    }

    /// Whether the image of `∂` from degree 1 into degree 0 of `F_W(n)`
    /// equals the span of the relations placed in degree-0 contexts.
    pub fn degree_zero_image_is_ideal(
        &self,
        arity: usize,
        max_weight: usize,
    ) -> Result<bool, OperadError> {
        let slices = self.truncation(arity, max_weight)?;
        let zero: Vec<Monomial> = slices.get(&0).cloned().unwrap_or_default();
        let index: HashMap<&Monomial, usize> =
            zero.iter().enumerate().map(|(k, m)| (m, k)).collect();
        let to_vec = |e: &Element| -> Option<Vec<Rational>> {
            let mut v = vec![Rational::zero(); zero.len()];
            for (m, c) in e.terms() {
                v[*index.get(m)?] = c.clone();
            }
            Some(v)
        };
        let mut image = Vec::new();
        for m in slices.get(&1).into_iter().flatten() {
            let v = to_vec(&self.differential_monomial(m))
                .ok_or_else(|| OperadError::WeightIncreased(m.to_string()))?;
            image.push(v);
        }
        let (assoc, rb) = self.relations();
        let mut ideal = Vec::new();
        for m in slices.get(&1).into_iter().flatten() {
            // the single positive-degree vertex is m_3 or T_2
            let gens = m.generators();
            let k = gens
                .iter()
                .position(|g| g.degree() == 1)
                .expect("one vertex of degree 1");
            let rel = if gens[k].kind == Kind::M { &assoc } else { &rb };
            let mut e = Element::zero(arity);
            for (u, c) in rel.terms() {
                let (mm, odd) = substitute(m, k, u);
                e.add_term(mm, if odd { -c.clone() } else { c.clone() });
            }
            match to_vec(&e) {
                Some(v) => ideal.push(v),
                None => return Err(OperadError::WeightIncreased(m.to_string())),
            }
        }
        let rank = |vs: &[Vec<Rational>]| crate::exact::span_rank(vs);
        let mut both = image.clone();
        both.extend(ideal.iter().cloned());
        let r = rank(&both);
        Ok(r == rank(&image) && r == rank(&ideal))
    }
}

/// Dimensions and Betti numbers of a truncation, indexed by degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyTable {
    pub arity: usize,
    pub max_weight: usize,
    pub dims: Vec<usize>,
    pub betti: Vec<usize>,
}

impl HomologyTable {
    /// `H_i = 0` for all `i ≥ 1`.
    pub fn acyclic_in_positive_degrees(&self) -> bool {
        self.betti.iter().skip(1).all(|b| *b == 0)
    }
}

/// Trees with exactly this arity and T-weight.
fn trees_exact(
    arity: usize,
    weight: usize,
    memo: &mut HashMap<(usize, usize), Vec<Vec<u16>>>,
    cap: usize,
    count: &mut usize,
) -> Result<Vec<Vec<u16>>, OperadError> {
    if let Some(v) = memo.get(&(arity, weight)) {
        return Ok(v.clone());
    }
    let mut out = Vec::new();
    if arity == 1 && weight == 0 {
        out.push(vec![0]);
    }
    let mut gens = Vec::new();
    for k in 2..=arity {
        gens.push(Generator::m(k));
    }
    for k in 1..=weight.min(arity) {
        gens.push(Generator::t(k));
    }
    for g in gens {
        let rest = weight - g.t_weight();
        for arities in compositions(arity, g.arity) {
            for weights in weak_compositions(rest, g.arity) {
                let mut partial: Vec<Vec<u16>> = vec![vec![g.code()]];
                for (a, w) in arities.iter().zip(&weights) {
                    let subs = trees_exact(*a, *w, memo, cap, count)?;
                    if subs.is_empty() {
                        partial.clear();
                        break;
                    }
                    let mut next = Vec::with_capacity(partial.len() * subs.len());
                    for p in &partial {
                        for s in &subs {
                            let mut v = p.clone();
                            v.extend_from_slice(s);
                            next.push(v);
                        }
                    }
                    if next.len() > cap {
                        return Err(OperadError::ResourceLimit {
                            count: next.len(),
                            cap,
                        });
                    }
                    partial = next;
                }
                out.extend(partial);
            }
        }
    }
    *count += out.len();
    if *count > cap {
        return Err(OperadError::ResourceLimit { count: *count, cap });
    }
    memo.insert((arity, weight), out.clone());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    #[test]
    fn codes_follow_generator_order() {
        let order = [
            Generator::t(1),
            Generator::m(2),
            Generator::t(2),
            Generator::m(3),
            Generator::t(3),
        ];
        for w in order.windows(2) {
            assert!(w[0].code() < w[1].code());
        }
        for g in order {
            assert_eq!(Generator::from_code(g.code()), g);
        }
    }

    #[test]
    fn differential_of_small_generators() {
        let op = RbInfinity::new(int(3));
        let m3 = op.generator_differential(Generator::m(3));
        assert_eq!(m3.to_string(), "m2(m2(x1, x2), x3) - m2(x1, m2(x2, x3))");
        assert!(op.generator_differential(Generator::t(1)).is_zero());
        assert!(op.generator_differential(Generator::m(2)).is_zero());
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["m2(T1(x1), x2)", "x1", "T3(x1, m2(x2, x3), x4)"] {
            let m: Monomial = s.parse().unwrap();
            assert_eq!(m.to_string(), s);
        }
        assert!("m2(x1)".parse::<Monomial>().is_err());
        assert!("m2(x2, x1)".parse::<Monomial>().is_err());
    }
}
