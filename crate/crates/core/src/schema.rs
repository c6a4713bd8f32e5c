//! JSON forms of root systems and triads.
//!
//! Rationals are `[numerator, denominator]` with `denominator > 0`, in lowest terms.
//! Roots are listed in the sorted order used by [`RootSystem::roots`]; triad fields
//! refer to roots by their index in that list.
//!
//! ```json
//! {"label": ["B2"], "dim": 2, "roots": [[[-1,1],[0,1]], ...],
//!  "simple": [...], "highest": [...] }
//! {"kind": "ordinary", "sigma_tilde": {...}, "sigma": [0, 3], "w": [0, 1, 2, 3],
//!  "m": [[0, [1,1]], [3, [1,1]]], "n": [[0, [2,1]], ...]}
//! ```

use crate::error::{Error, Result};
use crate::rootsys::RootSystem;
use crate::triads::{Kind, MultSymmetricTriad};
use crate::vector::{RationalVector, Q};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

pub type RationalJson = [i64; 2];

fn q_json(x: &Q) -> Result<RationalJson> {
    let n = i64::try_from(x.numer()).map_err(|_| Error::Unsupported(format!("{x} does not fit the JSON form")))?;
    let d = i64::try_from(x.denom()).map_err(|_| Error::Unsupported(format!("{x} does not fit the JSON form")))?;
    Ok([n, d])
}

fn q_from_json(x: &RationalJson) -> Result<Q> {
    if x[1] <= 0 {
        return Err(Error::InvalidInput(format!("rational [{}, {}] needs a positive denominator", x[0], x[1])));
    }
    Ok(Q::new(BigInt::from(x[0]), BigInt::from(x[1])))
}

fn vec_json(v: &RationalVector) -> Result<Vec<RationalJson>> {
    v.coords().iter().map(q_json).collect()
}

fn vec_from_json(v: &[RationalJson], dim: usize) -> Result<RationalVector> {
    if v.len() != dim {
        return Err(Error::InvalidInput(format!("vector of length {} in dimension {dim}", v.len())));
    }
    Ok(RationalVector::new(v.iter().map(q_from_json).collect::<Result<_>>()?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSystemJson {
    #[serde(default)]
    pub label: Vec<String>,
    pub dim: usize,
    pub roots: Vec<Vec<RationalJson>>,
    #[serde(default)]
    pub simple: Vec<Vec<RationalJson>>,
    #[serde(default)]
    pub highest: Option<Vec<RationalJson>>,
}

impl RootSystemJson {
    pub fn from_system(rs: &RootSystem) -> Result<Self> {
        Ok(RootSystemJson {
            label: rs.label().iter().map(|l| l.to_string()).collect(),
            dim: rs.dim(),
            roots: rs.roots().iter().map(vec_json).collect::<Result<_>>()?,
            simple: rs.simple().iter().map(vec_json).collect::<Result<_>>()?,
            highest: rs.highest().map(vec_json).transpose()?,
        })
    }

    /// Rebuilds the system; the fundamental system is taken from `simple` when given.
    /// `label` and `highest` are recomputed, not trusted.
    pub fn to_system(&self) -> Result<RootSystem> {
        let roots: Vec<RationalVector> = self.roots.iter().map(|v| vec_from_json(v, self.dim)).collect::<Result<_>>()?;
        if self.simple.is_empty() {
            RootSystem::from_roots(self.dim, roots)
        } else {
            let simple = self.simple.iter().map(|v| vec_from_json(v, self.dim)).collect::<Result<_>>()?;
            RootSystem::with_simple(self.dim, roots, simple)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriadJson {
    pub kind: Kind,
    pub sigma_tilde: RootSystemJson,
    pub sigma: Vec<usize>,
    pub w: Vec<usize>,
    /// Nonzero values of `m`; roots of `Σ` without an entry get `m = 1`.
    #[serde(default)]
    pub m: Vec<(usize, RationalJson)>,
    #[serde(default)]
    pub n: Vec<(usize, RationalJson)>,
}

impl TriadJson {
    pub fn from_triad(t: &MultSymmetricTriad) -> Result<Self> {
        let nz = |xs: &[Q]| -> Result<Vec<(usize, RationalJson)>> { xs.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| Ok((i, q_json(x)?))).collect() };
        Ok(TriadJson {
            kind: t.kind,
            sigma_tilde: RootSystemJson::from_system(&t.sigma_tilde)?,
            sigma: t.sigma_indices(),
            w: t.w_indices(),
            m: nz(&t.m)?,
            n: nz(&t.n)?,
        })
    }

    /// Indices refer to the `roots` list as written; they are remapped onto the sorted order.
    pub fn to_triad(&self) -> Result<MultSymmetricTriad> {
        let st = Arc::new(self.sigma_tilde.to_system()?);
        let len = self.sigma_tilde.roots.len();
        let map: Vec<usize> = self
            .sigma_tilde
            .roots
            .iter()
            .map(|v| st.index_of(&vec_from_json(v, self.sigma_tilde.dim)?).ok_or_else(|| Error::Internal("root lost on rebuild".into())))
            .collect::<Result<_>>()?;
        let at = |i: usize, what: &str| -> Result<usize> { map.get(i).copied().ok_or_else(|| Error::InvalidInput(format!("{what} index {i} out of range (0..{len})"))) };
        let mut sigma = vec![false; st.len()];
        let mut w = vec![false; st.len()];
        for &i in &self.sigma {
            sigma[at(i, "sigma")?] = true;
        }
        for &i in &self.w {
            w[at(i, "w")?] = true;
        }
        let mut m: Vec<Q> = sigma.iter().map(|&b| if b { Q::from_integer(1.into()) } else { Q::zero() }).collect();
        let mut n: Vec<Q> = w.iter().map(|&b| if b { Q::from_integer(1.into()) } else { Q::zero() }).collect();
        for (i, x) in &self.m {
            m[at(*i, "m")?] = q_from_json(x)?;
        }
        for (i, x) in &self.n {
            n[at(*i, "n")?] = q_from_json(x)?;
        }
        MultSymmetricTriad::new(st, sigma, w, m, n, self.kind)
    }
}
