//! JSON input files. Scalars are strings `"p"` or `"p/q"`; bare JSON
//! integers are accepted, floats are not.

use std::fmt;
use std::path::Path;

use num::Zero;
use rbh_core::exact::{int, parse_rational, Rational};
use rbh_core::rb::{Algebra, Bimodule, LinearMap, RbAlgebra, RbBimodule};
use serde::de::{self, Deserializer, Visitor};
use serde::Deserialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone)]
pub struct Rat(pub Rational);

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Rat;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a rational as a string \"p/q\" or an integer")
            }

            fn visit_str<E: de::Error>(self, s: &str) -> Result<Rat, E> {
                parse_rational(s).map(Rat).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rat, E> {
                Ok(Rat(int(v)))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rat, E> {
                i64::try_from(v).map(|v| Rat(int(v))).map_err(E::custom)
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Rat, E> {
                Err(E::custom(format!(
                    "floating point value {v} is not allowed, write it as \"p/q\""
                )))
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub dimension: usize,
    pub weight: Rat,
    /// `product[i][j][k]`: coefficient of `e_k` in `e_i e_j`.
    pub product: Vec<Vec<Vec<Rat>>>,
    /// `operator[i][j]`: coefficient of `e_j` in `T(e_i)`.
    pub operator: Vec<Vec<Rat>>,
    #[serde(default)]
    pub grading: Option<Vec<i32>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleFile {
    pub dimension: usize,
    /// `left[a][m][k]`: coefficient of `f_k` in `e_a · f_m`.
    pub left: Vec<Vec<Vec<Rat>>>,
    /// `right[m][a][k]`: coefficient of `f_k` in `f_m · e_a`.
    pub right: Vec<Vec<Vec<Rat>>>,
    /// `operator[m][k]`: coefficient of `f_k` in `T_M(f_m)`.
    pub operator: Vec<Vec<Rat>>,
}

/// A loaded file: its content hash and parsed value.
pub struct Loaded<T> {
    pub sha256: String,
    pub value: T,
}

pub fn read<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Loaded<T>, String> {
    let bytes = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let sha256 = hex::encode(Sha256::digest(&bytes));
    let value = serde_json::from_slice(&bytes).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(Loaded { sha256, value })
}

fn flatten3(
    name: &str,
    t: &[Vec<Vec<Rat>>],
    dims: (usize, usize, usize),
) -> Result<Vec<Rational>, String> {
    if t.len() != dims.0 {
        return Err(format!(
            "{name}: expected {} outer entries, found {}",
            dims.0,
            t.len()
        ));
    }
    let mut out = Vec::with_capacity(dims.0 * dims.1 * dims.2);
    for (i, row) in t.iter().enumerate() {
        if row.len() != dims.1 {
            return Err(format!(
                "{name}[{i}]: expected {} entries, found {}",
                dims.1,
                row.len()
            ));
        }
        for (j, v) in row.iter().enumerate() {
            if v.len() != dims.2 {
                return Err(format!(
                    "{name}[{i}][{j}]: expected {} entries, found {}",
                    dims.2,
                    v.len()
                ));
            }
            out.extend(v.iter().map(|r| r.0.clone()));
        }
    }
    Ok(out)
}

fn flatten2(name: &str, t: &[Vec<Rat>], n: usize) -> Result<Vec<Rational>, String> {
    let wrapped: Vec<Vec<Vec<Rat>>> = vec![t.to_vec()];
    flatten3(name, &wrapped, (1, n, n))
}

impl AlgebraFile {
    pub fn build(&self) -> Result<RbAlgebra, String> {
        let n = self.dimension;
        if let Some(g) = &self.grading {
            if g.len() != n {
                return Err(format!("grading: expected {n} degrees, found {}", g.len()));
            }
            if g.iter().any(|d| *d != 0) {
                return Err("grading: only algebras concentrated in degree 0 are supported".into());
            }
        }
        let mult = flatten3("product", &self.product, (n, n, n))?;
        let op = flatten2("operator", &self.operator, n)?;
        let alg = Algebra::new(n, mult).map_err(|e| e.to_string())?;
        let op = LinearMap::new(n, op).map_err(|e| e.to_string())?;
        RbAlgebra::new(alg, op, self.weight.0.clone()).map_err(|e| e.to_string())
    }
}

impl ModuleFile {
    pub fn build(&self, over: &RbAlgebra) -> Result<RbBimodule, String> {
        let (da, dm) = (over.dim(), self.dimension);
        let left = flatten3("left", &self.left, (da, dm, dm))?;
        let right = flatten3("right", &self.right, (dm, da, dm))?;
        let op = flatten2("operator", &self.operator, dm)?;
        let bimod = Bimodule::unchecked(da, dm, left, right).map_err(|e| e.to_string())?;
        let op = LinearMap::new(dm, op).map_err(|e| e.to_string())?;
        RbBimodule::new(bimod, op, over).map_err(|e| e.to_string())
    }
}

/// Rationals as `"p/q"` strings for reports.
pub fn fmt_vec(v: &[Rational]) -> Vec<String> {
    v.iter().map(rbh_core::exact::format_rational).collect()
}

pub fn nonzero(v: &[Rational]) -> usize {
    v.iter().filter(|x| !x.is_zero()).count()
}
