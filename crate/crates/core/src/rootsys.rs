//! Finite root systems in exact coordinates: construction, recognition, isomorphisms
//! and small Weyl groups.
//!
//! Every root system carries a fundamental system, and each root is also stored
//! through its integer coordinates over that fundamental system. All combinatorial
//! work downstream (reflections, parities, isomorphism search) runs on those integer
//! coordinates together with an integer-scaled Gram matrix.

use crate::error::{Error, Result};
use crate::iso;
use crate::vector::{common_denominator, invert, q_to_i64, qi, RationalVector, Q};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, OnceLock};
use std::fmt;
use std::str::FromStr;

/// Root system families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    BC,
    E,
    F,
    G,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::BC => "BC",
            Family::E => "E",
            Family::F => "F",
            Family::G => "G",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_uppercase().as_str() {
            "A" => Family::A,
            "B" => Family::B,
            "C" => Family::C,
            "D" => Family::D,
            "BC" => Family::BC,
            "E" => Family::E,
            "F" => Family::F,
            "G" => Family::G,
            _ => return Err(Error::InvalidInput(format!("unknown family `{s}`"))),
        })
    }
}

/// Type of an irreducible root system, e.g. `BC3` or `E7`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeLabel {
    pub family: Family,
    pub rank: usize,
}

impl TypeLabel {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A | Family::B | Family::C | Family::BC | Family::D => rank >= 1,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(TypeLabel { family, rank })
        } else {
            Err(Error::InvalidInput(format!("no root system of type {family}{rank}")))
        }
    }

    /// Normal form under the low-rank coincidences `D3 = A3`, `B1 = C1 = A1`.
    /// `D2` is reducible and is returned as two copies of `A1`; `D1` is empty.
    pub fn normalized(self) -> Vec<TypeLabel> {
        use Family::*;
        match (self.family, self.rank) {
            (D, 1) => vec![],
            (D, 2) => vec![TypeLabel { family: A, rank: 1 }; 2],
            (D, 3) => vec![TypeLabel { family: A, rank: 3 }],
            (B, 1) | (C, 1) => vec![TypeLabel { family: A, rank: 1 }],
            _ => vec![self],
        }
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

impl FromStr for TypeLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let split = s.find(|c: char| c.is_ascii_digit()).ok_or_else(|| Error::InvalidInput(format!("bad type label `{s}`")))?;
        let (fam, rank) = s.split_at(split);
        let family: Family = fam.parse().map_err(|_| Error::InvalidInput(format!("bad type label `{s}`")))?;
        let rank: usize = rank.parse().map_err(|_| Error::InvalidInput(format!("bad type label `{s}`")))?;
        TypeLabel::new(family, rank)
    }
}

impl Serialize for TypeLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for TypeLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Formats a multiset of labels as `A1+D6`, or `0` when empty.
pub fn format_labels(labels: &[TypeLabel]) -> String {
    if labels.is_empty() {
        return "0".to_string();
    }
    labels.iter().map(|l| l.to_string()).collect::<Vec<_>>().join("+")
}

/// A finite root system together with a fundamental system.
#[derive(Clone, Debug)]
pub struct RootSystem {
    dim: usize,
    roots: Vec<RationalVector>,
    simple: Vec<RationalVector>,
    highest: Option<RationalVector>,
    label: Vec<TypeLabel>,
    /// `B2` reported where `C2` would be equally valid (and vice versa).
    alternatives: Vec<(TypeLabel, TypeLabel)>,
    coeffs: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    gram: Vec<Vec<i64>>,
    /// Left inverse of the simple-root matrix: ambient vector -> simple coordinates.
    left_inverse: Vec<Vec<Q>>,
    neighbours: OnceLock<Arc<Vec<Vec<Neighbour>>>>,
}

/// A root `j` related to a given root `i`: Cartan integers both ways and whether `i + j` is a root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Neighbour {
    pub j: usize,
    pub cartan_ij: i64,
    pub cartan_ji: i64,
    pub sum_is_root: bool,
}

impl RootSystem {
    /// Standard realization of an irreducible root system.
    pub fn build(label: TypeLabel) -> Result<RootSystem> {
        let label = TypeLabel::new(label.family, label.rank)?;
        let (dim, positive, simple, highest) = standard_data(label);
        let mut roots: Vec<RationalVector> = positive.iter().map(|v| -v).collect();
        roots.extend(positive);
        RootSystem::assemble(dim, roots, simple, highest)
    }

    /// Root system of an arbitrary finite set, with the fundamental system read off
    /// from the lexicographic order on coordinates.
    pub fn from_roots(dim: usize, roots: Vec<RationalVector>) -> Result<RootSystem> {
        match is_root_system(&roots) {
            RootSystemCheck::No(v) => return Err(Error::NotRootSystem(v.to_string())),
            _ => {}
        }
        let set: HashSet<&RationalVector> = roots.iter().collect();
        let positive: Vec<&RationalVector> = roots.iter().filter(|r| r.is_lex_positive()).collect();
        let mut simple = Vec::new();
        for g in &positive {
            let decomposable = positive.iter().any(|b| {
                let d = *g - *b;
                d.is_lex_positive() && set.contains(&d)
            });
            if !decomposable {
                simple.push((*g).clone());
            }
        }
        simple.sort();
        RootSystem::assemble(dim, roots, simple, None)
    }

    /// Root system with a prescribed fundamental system (checked).
    pub fn with_simple(dim: usize, roots: Vec<RationalVector>, simple: Vec<RationalVector>) -> Result<RootSystem> {
        if let RootSystemCheck::No(v) = is_root_system(&roots) {
            return Err(Error::NotRootSystem(v.to_string()));
        }
        RootSystem::assemble(dim, roots, simple, None)
    }

    fn assemble(dim: usize, mut roots: Vec<RationalVector>, simple: Vec<RationalVector>, highest: Option<RationalVector>) -> Result<RootSystem> {
        roots.sort();
        roots.dedup();
        let r = simple.len();
        let gram_q: Vec<Vec<Q>> = simple.iter().map(|a| simple.iter().map(|b| a.dot(b)).collect()).collect();
        let left_inverse = if r == 0 {
            vec![]
        } else {
            let ginv = invert(&gram_q).ok_or_else(|| Error::NotRootSystem("fundamental system is linearly dependent".into()))?;
            // L = G^{-1} S^T
            (0..r)
                .map(|i| {
                    (0..dim)
                        .map(|k| {
                            let mut s = Q::zero();
                            for j in 0..r {
                                s += &ginv[i][j] * &simple[j].coords()[k];
                            }
                            s
                        })
                        .collect()
                })
                .collect()
        };
        let den = common_denominator(gram_q.iter().flatten());
        let gram: Vec<Vec<i64>> = gram_q
            .iter()
            .map(|row| row.iter().map(|x| q_to_i64(&(x * Q::from_integer(den.clone()))).expect("gram entry overflow")).collect())
            .collect();
        let mut rs = RootSystem {
            dim,
            roots,
            simple,
            highest: None,
            label: vec![],
            alternatives: vec![],
            coeffs: vec![],
            index: HashMap::new(),
            gram,
            left_inverse,
            neighbours: OnceLock::new(),
        };
        let mut coeffs = Vec::with_capacity(rs.roots.len());
        for v in &rs.roots {
            let c = rs.coords_of(v).ok_or_else(|| Error::NotRootSystem(format!("root {v} is not in the span of the fundamental system")))?;
            let c: Vec<i64> = c.iter().map(|x| q_to_i64(x)).collect::<Option<_>>().ok_or_else(|| Error::NotRootSystem(format!("root {v} has non-integral simple coordinates")))?;
            let pos = c.iter().all(|&x| x >= 0);
            let neg = c.iter().all(|&x| x <= 0);
            if !pos && !neg {
                return Err(Error::NotRootSystem(format!("root {v} has mixed-sign simple coordinates")));
            }
            coeffs.push(c);
        }
        rs.index = coeffs.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        rs.coeffs = coeffs;
        let (label, alternatives) = identify_simple_system(&rs);
        rs.label = label;
        rs.alternatives = alternatives;
        rs.highest = match highest {
            Some(h) => Some(h),
            None if rs.label.len() == 1 => {
                let best = (0..rs.len()).max_by_key(|&i| rs.height(i)).expect("nonempty");
                Some(rs.roots[best].clone())
            }
            None => None,
        };
        Ok(rs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn rank(&self) -> usize {
        self.simple.len()
    }
    pub fn len(&self) -> usize {
        self.roots.len()
    }
    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
    pub fn roots(&self) -> &[RationalVector] {
        &self.roots
    }
    pub fn root(&self, i: usize) -> &RationalVector {
        &self.roots[i]
    }
    pub fn simple(&self) -> &[RationalVector] {
        &self.simple
    }
    pub fn highest(&self) -> Option<&RationalVector> {
        self.highest.as_ref()
    }
    pub fn label(&self) -> &[TypeLabel] {
        &self.label
    }
    /// Pairs `(reported, equally valid alternative)` for the `B2`/`C2` coincidence.
    pub fn label_alternatives(&self) -> &[(TypeLabel, TypeLabel)] {
        &self.alternatives
    }
    pub fn is_irreducible(&self) -> bool {
        self.label.len() == 1
    }

    /// Simple-root coordinates of root `i`.
    pub fn coeff(&self, i: usize) -> &[i64] {
        &self.coeffs[i]
    }

    pub fn index_of_coeff(&self, c: &[i64]) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub fn index_of(&self, v: &RationalVector) -> Option<usize> {
        let c = self.coords_of(v)?;
        let c: Vec<i64> = c.iter().map(q_to_i64).collect::<Option<_>>()?;
        self.index_of_coeff(&c)
    }

    /// Index of the simple root `alpha_{k+1}` in the root list.
    pub fn simple_index(&self, k: usize) -> usize {
        let mut c = vec![0; self.rank()];
        c[k] = 1;
        self.index_of_coeff(&c).expect("simple root present")
    }

    /// Coordinates of an ambient vector over the fundamental system, if it lies in the span.
    pub fn coords_of(&self, v: &RationalVector) -> Option<Vec<Q>> {
        let c: Vec<Q> = self.left_inverse.iter().map(|row| row.iter().zip(v.coords()).map(|(a, b)| a * b).sum()).collect();
        if &self.combine_q(&c) == v {
            Some(c)
        } else {
            None
        }
    }

    /// Ambient vector `sum c_i alpha_i`.
    pub fn combine_q(&self, c: &[Q]) -> RationalVector {
        let mut v = RationalVector::zero(self.dim);
        for (ci, s) in c.iter().zip(&self.simple) {
            if !ci.is_zero() {
                v = v.add_scaled(ci, s);
            }
        }
        v
    }

    pub fn combine(&self, c: &[i64]) -> RationalVector {
        let cq: Vec<Q> = c.iter().map(|&x| qi(x)).collect();
        self.combine_q(&cq)
    }

    /// Integer-scaled inner product of two simple-coordinate vectors.
    pub fn ip_coeff(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for i in 0..a.len() {
            if a[i] == 0 {
                continue;
            }
            for j in 0..b.len() {
                if b[j] != 0 {
                    s += a[i] * self.gram[i][j] * b[j];
                }
            }
        }
        s
    }

    /// Integer-scaled inner product of roots `i` and `j` (a fixed positive multiple of the true one).
    pub fn ip(&self, i: usize, j: usize) -> i64 {
        self.ip_coeff(&self.coeffs[i], &self.coeffs[j])
    }

    pub fn norm_scaled(&self, i: usize) -> i64 {
        self.ip(i, i)
    }

    /// Cartan integer `2<a_i, a_j>/<a_j, a_j>`.
    pub fn cartan(&self, i: usize, j: usize) -> i64 {
        let n = self.norm_scaled(j);
        let v = 2 * self.ip(i, j);
        debug_assert_eq!(v % n, 0);
        v / n
    }

    /// Cartan integer between a simple-coordinate vector and root `j`.
    pub fn cartan_coeff(&self, c: &[i64], j: usize) -> i64 {
        let n = self.norm_scaled(j);
        let v = 2 * self.ip_coeff(c, &self.coeffs[j]);
        debug_assert_eq!(v % n, 0);
        v / n
    }

    /// Cartan matrix `a_ij = 2<alpha_i, alpha_j>/<alpha_j, alpha_j>` of the fundamental system.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let r = self.rank();
        (0..r).map(|i| (0..r).map(|j| 2 * self.gram[i][j] / self.gram[j][j]).collect()).collect()
    }

    pub fn neg(&self, i: usize) -> usize {
        let c: Vec<i64> = self.coeffs[i].iter().map(|x| -x).collect();
        self.index_of_coeff(&c).expect("closed under negation")
    }

    pub fn is_positive(&self, i: usize) -> bool {
        self.coeffs[i].iter().all(|&x| x >= 0)
    }

    pub fn height(&self, i: usize) -> i64 {
        self.coeffs[i].iter().sum()
    }

    /// `w_{alpha_a}(alpha_b)` as a root index.
    pub fn reflect_index(&self, a: usize, b: usize) -> usize {
        let k = self.cartan(b, a);
        let c: Vec<i64> = self.coeffs[b].iter().zip(&self.coeffs[a]).map(|(x, y)| x - k * y).collect();
        self.index_of_coeff(&c).expect("closed under reflections")
    }

    /// Root index of a sum of two roots, if it is a root.
    pub fn sum_index(&self, a: usize, b: usize) -> Option<usize> {
        let c: Vec<i64> = self.coeffs[a].iter().zip(&self.coeffs[b]).map(|(x, y)| x + y).collect();
        self.index_of_coeff(&c)
    }

    /// For every root, the roots that are not orthogonal to it or add up with it to a root
    /// (computed once and cached).
    pub fn neighbours(&self) -> Arc<Vec<Vec<Neighbour>>> {
        self.neighbours
            .get_or_init(|| {
                let n = self.len();
                let table = (0..n)
                    .map(|i| {
                        (0..n)
                            .filter(|&j| j != i)
                            .filter_map(|j| {
                                let cartan_ij = self.cartan(i, j);
                                let cartan_ji = self.cartan(j, i);
                                let sum_is_root = self.sum_index(i, j).is_some();
                                (cartan_ij != 0 || sum_is_root).then_some(Neighbour { j, cartan_ij, cartan_ji, sum_is_root })
                            })
                            .collect()
                    })
                    .collect();
                Arc::new(table)
            })
            .clone()
    }

    /// Distinct squared lengths in increasing order and the class of every root.
    pub fn length_classes(&self) -> (Vec<i64>, Vec<usize>) {
        let mut norms: Vec<i64> = (0..self.len()).map(|i| self.norm_scaled(i)).collect();
        let all = norms.clone();
        norms.sort();
        norms.dedup();
        let class = all.iter().map(|n| norms.binary_search(n).unwrap()).collect();
        (norms, class)
    }

    /// Irreducible component of every root (components numbered by first simple root).
    pub fn components(&self) -> Vec<usize> {
        let r = self.rank();
        let mut parent: Vec<usize> = (0..r).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            let mut x = x;
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for i in 0..r {
            for j in 0..r {
                if i != j && self.gram[i][j] != 0 {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        (0..self.len())
            .map(|k| {
                let s = self.coeffs[k].iter().position(|&x| x != 0).expect("nonzero root");
                find(&mut parent, s)
            })
            .collect()
    }

    /// Types of the subsystem formed by the given roots (which must be closed under
    /// reflections in themselves). Components are listed with the length classes
    /// (indices into `length_classes`) that their roots occupy.
    pub fn identify_subset(&self, subset: &[usize]) -> Vec<(TypeLabel, Vec<usize>)> {
        if subset.is_empty() {
            return vec![];
        }
        let vs: Vec<RationalVector> = subset.iter().map(|&i| self.roots[i].clone()).collect();
        let sub = RootSystem::from_roots(self.dim, vs).expect("subset is a root system");
        let (_, class) = self.length_classes();
        let comps = sub.components();
        let mut per_comp: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for k in 0..sub.len() {
            let orig = self.index_of(sub.root(k)).expect("root of parent");
            per_comp.entry(comps[k]).or_default().push(class[orig]);
        }
        let comp_labels = component_labels(&sub);
        let mut out: Vec<(TypeLabel, Vec<usize>)> = comp_labels
            .into_iter()
            .map(|(c, l)| {
                let mut cls = per_comp[&c].clone();
                cls.sort();
                cls.dedup();
                (l, cls)
            })
            .collect();
        out.sort();
        out
    }
}

fn standard_data(label: TypeLabel) -> (usize, Vec<RationalVector>, Vec<RationalVector>, Option<RationalVector>) {
    use Family::*;
    let r = label.rank;
    let e = |dim: usize, i: usize| RationalVector::unit(dim, i - 1);
    let ints = |dim: usize, terms: &[(usize, i64)]| {
        let mut v = vec![0i64; dim];
        for &(i, c) in terms {
            v[i - 1] += c;
        }
        RationalVector::from_ints(&v)
    };
    let mut pos = Vec::new();
    match label.family {
        A => {
            let d = r + 1;
            for i in 1..=d {
                for j in i + 1..=d {
                    pos.push(ints(d, &[(i, 1), (j, -1)]));
                }
            }
            let simple = (1..=r).map(|i| ints(d, &[(i, 1), (i + 1, -1)])).collect();
            (d, pos, simple, Some(ints(d, &[(1, 1), (d, -1)])))
        }
        B | C | BC | D => {
            let d = r;
            for i in 1..=d {
                for j in i + 1..=d {
                    pos.push(ints(d, &[(i, 1), (j, -1)]));
                    pos.push(ints(d, &[(i, 1), (j, 1)]));
                }
                match label.family {
                    B => pos.push(e(d, i)),
                    C => pos.push(ints(d, &[(i, 2)])),
                    BC => {
                        pos.push(e(d, i));
                        pos.push(ints(d, &[(i, 2)]));
                    }
                    _ => {}
                }
            }
            let mut simple: Vec<RationalVector> = (1..r).map(|i| ints(d, &[(i, 1), (i + 1, -1)])).collect();
            match label.family {
                B | BC => simple.push(e(d, r)),
                C => simple.push(ints(d, &[(r, 2)])),
                D if r >= 2 => simple.push(ints(d, &[(r - 1, 1), (r, 1)])),
                _ => {}
            }
            let highest = match (label.family, r) {
                (D, 1) | (D, 2) => None,
                (B, 1) => Some(e(d, 1)),
                (B, _) | (D, _) => Some(ints(d, &[(1, 1), (2, 1)])),
                _ => Some(ints(d, &[(1, 2)])),
            };
            (d, pos, simple, highest)
        }
        E => {
            let d = 8;
            let n = r;
            // pairs ±e_i + e_j
            let top = match n {
                6 => 5,
                7 => 6,
                _ => 8,
            };
            for j in 1..=top {
                for i in 1..j {
                    pos.push(ints(d, &[(i, 1), (j, 1)]));
                    pos.push(ints(d, &[(i, -1), (j, 1)]));
                }
            }
            match n {
                6 => {
                    for mask in 0u32..32 {
                        if mask.count_ones() % 2 == 0 {
                            let mut h = vec![0i64; 8];
                            for i in 0..5 {
                                h[i] = if mask >> i & 1 == 1 { -1 } else { 1 };
                            }
                            h[5] = -1;
                            h[6] = -1;
                            h[7] = 1;
                            pos.push(RationalVector::from_halves(&h));
                        }
                    }
                }
                7 => {
                    pos.push(ints(d, &[(7, -1), (8, 1)]));
                    for mask in 0u32..64 {
                        if mask.count_ones() % 2 == 1 {
                            let mut h = vec![0i64; 8];
                            for i in 0..6 {
                                h[i] = if mask >> i & 1 == 1 { -1 } else { 1 };
                            }
                            h[6] = -1;
                            h[7] = 1;
                            pos.push(RationalVector::from_halves(&h));
                        }
                    }
                }
                _ => {
                    for mask in 0u32..128 {
                        if mask.count_ones() % 2 == 0 {
                            let mut h = vec![0i64; 8];
                            for i in 0..7 {
                                h[i] = if mask >> i & 1 == 1 { -1 } else { 1 };
                            }
                            h[7] = 1;
                            pos.push(RationalVector::from_halves(&h));
                        }
                    }
                }
            }
            let mut simple = vec![
                RationalVector::from_halves(&[1, -1, -1, -1, -1, -1, -1, 1]),
                ints(d, &[(1, 1), (2, 1)]),
                ints(d, &[(2, 1), (1, -1)]),
                ints(d, &[(3, 1), (2, -1)]),
                ints(d, &[(4, 1), (3, -1)]),
                ints(d, &[(5, 1), (4, -1)]),
                ints(d, &[(6, 1), (5, -1)]),
                ints(d, &[(7, 1), (6, -1)]),
            ];
            simple.truncate(n);
            let highest = match n {
                6 => RationalVector::from_halves(&[1, 1, 1, 1, 1, -1, -1, 1]),
                7 => ints(d, &[(8, 1), (7, -1)]),
                _ => ints(d, &[(7, 1), (8, 1)]),
            };
            (d, pos, simple, Some(highest))
        }
        F => {
            let d = 4;
            for i in 1..=4 {
                pos.push(e(d, i));
                for j in i + 1..=4 {
                    pos.push(ints(d, &[(i, 1), (j, -1)]));
                    pos.push(ints(d, &[(i, 1), (j, 1)]));
                }
            }
            for mask in 0u32..8 {
                let mut h = vec![1i64; 4];
                for i in 0..3 {
                    if mask >> i & 1 == 1 {
                        h[i + 1] = -1;
                    }
                }
                pos.push(RationalVector::from_halves(&h));
            }
            let simple = vec![
                ints(d, &[(2, 1), (3, -1)]),
                ints(d, &[(3, 1), (4, -1)]),
                e(d, 4),
                RationalVector::from_halves(&[1, -1, -1, -1]),
            ];
            (d, pos, simple, Some(ints(d, &[(1, 1), (2, 1)])))
        }
        G => {
            let d = 3;
            let v = |a: i64, b: i64, c: i64| RationalVector::from_ints(&[a, b, c]);
            let pos = vec![v(1, -1, 0), v(-1, 0, 1), v(0, -1, 1), v(-2, 1, 1), v(1, -2, 1), v(-1, -1, 2)];
            let simple = vec![v(1, -1, 0), v(-2, 1, 1)];
            (d, pos, simple, Some(v(-1, -1, 2)))
        }
    }
}

/// Outcome of checking the root-system axioms on a bare finite set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootSystemCheck {
    YesReduced,
    YesNonReduced,
    No(Violation),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    ContainsZero,
    DimensionMismatch,
    NotClosed { alpha: RationalVector, beta: RationalVector },
    NonIntegral { alpha: RationalVector, beta: RationalVector },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ContainsZero => write!(f, "contains the zero vector"),
            Violation::DimensionMismatch => write!(f, "vectors of different dimensions"),
            Violation::NotClosed { alpha, beta } => write!(f, "reflection of {beta} in {alpha} is not in the set"),
            Violation::NonIntegral { alpha, beta } => write!(f, "2<{alpha},{beta}>/|{alpha}|^2 is not an integer"),
        }
    }
}

/// Checks closure under reflections, integrality of Cartan numbers, and reducedness.
/// Every finite set spans its own span, so the spanning axiom is read relative to that span.
pub fn is_root_system(set: &[RationalVector]) -> RootSystemCheck {
    if set.is_empty() {
        return RootSystemCheck::YesReduced;
    }
    let dim = set[0].dim();
    if set.iter().any(|v| v.dim() != dim) {
        return RootSystemCheck::No(Violation::DimensionMismatch);
    }
    if set.iter().any(|v| v.is_zero()) {
        return RootSystemCheck::No(Violation::ContainsZero);
    }
    if let Some(verdict) = is_root_system_int(set) {
        return verdict;
    }
    let members: HashSet<&RationalVector> = set.iter().collect();
    let two = qi(2);
    let mut reduced = true;
    for a in set {
        let na = a.norm2();
        for b in set {
            let k = &two * a.dot(b) / &na;
            if !k.is_integer() {
                return RootSystemCheck::No(Violation::NonIntegral { alpha: a.clone(), beta: b.clone() });
            }
            let img = b.add_scaled(&-k.clone(), a);
            if !members.contains(&img) {
                return RootSystemCheck::No(Violation::NotClosed { alpha: a.clone(), beta: b.clone() });
            }
            // b = c a with c != ±1 breaks reducedness
            let ab = a.dot(b);
            if b != a && &ab * &ab == &na * b.norm2() && b != &-a {
                reduced = false;
            }
        }
    }
    if reduced {
        RootSystemCheck::YesReduced
    } else {
        RootSystemCheck::YesNonReduced
    }
}

/// [`is_root_system`] on integer coordinates after clearing denominators; `None` if the
/// scaled coordinates do not fit comfortably in machine integers.
fn is_root_system_int(set: &[RationalVector]) -> Option<RootSystemCheck> {
    let den = common_denominator(set.iter().flat_map(|v| v.coords()));
    let den = Q::from_integer(den);
    let ints: Vec<Vec<i64>> = set
        .iter()
        .map(|v| v.coords().iter().map(|x| q_to_i64(&(x * &den)).filter(|n| n.abs() < 1 << 20)).collect::<Option<Vec<i64>>>())
        .collect::<Option<_>>()?;
    let dot = |a: &[i64], b: &[i64]| -> i64 { a.iter().zip(b).map(|(x, y)| x * y).sum() };
    let index: HashMap<&[i64], usize> = ints.iter().enumerate().map(|(i, v)| (v.as_slice(), i)).collect();
    let norms: Vec<i64> = ints.iter().map(|v| dot(v, v)).collect();
    let mut reduced = true;
    let mut img = vec![0i64; ints[0].len()];
    for (i, a) in ints.iter().enumerate() {
        let na = norms[i];
        for (j, b) in ints.iter().enumerate() {
            let ab = dot(a, b);
            if (2 * ab) % na != 0 {
                return Some(RootSystemCheck::No(Violation::NonIntegral { alpha: set[i].clone(), beta: set[j].clone() }));
            }
            let k = 2 * ab / na;
            for ((o, x), y) in img.iter_mut().zip(b).zip(a) {
                *o = x - k * y;
            }
            if !index.contains_key(img.as_slice()) {
                return Some(RootSystemCheck::No(Violation::NotClosed { alpha: set[i].clone(), beta: set[j].clone() }));
            }
            if a != b && (ab as i128) * (ab as i128) == (na as i128) * (norms[j] as i128) && a.iter().zip(b).any(|(x, y)| *x != -y) {
                reduced = false;
            }
        }
    }
    Some(if reduced { RootSystemCheck::YesReduced } else { RootSystemCheck::YesNonReduced })
}

/// `w_alpha(h) = h - 2<alpha,h>/|alpha|^2 alpha`.
pub fn reflect(alpha: &RationalVector, h: &RationalVector) -> Result<RationalVector> {
    if alpha.is_zero() {
        return Err(Error::InvalidInput("reflection in the zero vector".into()));
    }
    if alpha.dim() != h.dim() {
        return Err(Error::InvalidInput("dimension mismatch".into()));
    }
    let k = qi(2) * alpha.dot(h) / alpha.norm2();
    Ok(h.add_scaled(&-k, alpha))
}

/// Irreducible component types, normalized (`D3` reads as `A3`, `D2` as `A1+A1`, ...).
pub fn identify(s: &RootSystem) -> Vec<TypeLabel> {
    s.label().to_vec()
}

fn component_labels(rs: &RootSystem) -> Vec<(usize, TypeLabel)> {
    let r = rs.rank();
    let comps = rs.components();
    let mut simple_comp = vec![0; r];
    for k in 0..r {
        simple_comp[k] = comps[rs.simple_index(k)];
    }
    let mut ids: Vec<usize> = simple_comp.clone();
    ids.sort();
    ids.dedup();
    let cm = rs.cartan_matrix();
    let mut out = vec![];
    for c in ids {
        let nodes: Vec<usize> = (0..r).filter(|&k| simple_comp[k] == c).collect();
        let non_reduced = nodes.iter().any(|&k| {
            let mut v = vec![0; r];
            v[k] = 2;
            rs.index_of_coeff(&v).is_some()
        }) || (0..rs.len()).any(|i| {
            comps[i] == c && {
                let d: Vec<i64> = rs.coeff(i).iter().map(|x| 2 * x).collect();
                rs.index_of_coeff(&d).is_some()
            }
        });
        out.push((c, classify_dynkin(&nodes, &cm, rs, non_reduced)));
    }
    out
}

fn classify_dynkin(nodes: &[usize], cm: &[Vec<i64>], rs: &RootSystem, non_reduced: bool) -> TypeLabel {
    use Family::*;
    let n = nodes.len();
    let mult = |i: usize, j: usize| cm[i][j] * cm[j][i];
    let degree = |i: usize| nodes.iter().filter(|&&j| j != i && cm[i][j] != 0).count();
    let mk = |f: Family, r: usize| TypeLabel { family: f, rank: r };
    if non_reduced {
        return mk(BC, n);
    }
    if n == 1 {
        return mk(A, 1);
    }
    let mut double = None;
    for &i in nodes {
        for &j in nodes {
            if i < j {
                match mult(i, j) {
                    3 => return mk(G, 2),
                    2 => double = Some((i, j)),
                    _ => {}
                }
            }
        }
    }
    if let Some((i, j)) = double {
        if n == 4 && degree(i) == 2 && degree(j) == 2 {
            return mk(F, 4);
        }
        // The end of the double bond that is a leaf decides B versus C.
        let (leaf, other) = if n == 2 {
            (i, j)
        } else if degree(i) == 1 {
            (i, j)
        } else {
            (j, i)
        };
        let leaf_short = rs.gram[leaf][leaf] < rs.gram[other][other];
        if n == 2 {
            // B2 = C2: report C2 only when the coordinates have the C2 shape.
            let ns = rs.gram[leaf][leaf].min(rs.gram[other][other]);
            let short_single = rs.roots().iter().enumerate().any(|(k, v)| {
                rs.norm_scaled(k) == ns && v.coords().iter().filter(|c| !c.is_zero()).count() == 1
            });
            return if short_single { mk(B, 2) } else if c2_shape(rs) { mk(C, 2) } else { mk(B, 2) };
        }
        return if leaf_short { mk(B, n) } else { mk(C, n) };
    }
    let branch: Vec<usize> = nodes.iter().copied().filter(|&i| degree(i) == 3).collect();
    if branch.is_empty() {
        return mk(A, n);
    }
    let b = branch[0];
    let mut arms: Vec<usize> = vec![];
    for &start in nodes.iter().filter(|&&j| j != b && cm[b][j] != 0) {
        let (mut prev, mut cur, mut len) = (b, start, 1);
        loop {
            let next = nodes.iter().copied().find(|&k| k != prev && k != cur && cm[cur][k] != 0);
            match next {
                Some(k) => {
                    prev = cur;
                    cur = k;
                    len += 1;
                }
                None => break,
            }
        }
        arms.push(len);
    }
    arms.sort();
    match (arms[0], arms[1], arms[2]) {
        (1, 1, _) => mk(D, n),
        (1, 2, 2) => mk(E, 6),
        (1, 2, 3) => mk(E, 7),
        (1, 2, 4) => mk(E, 8),
        _ => panic!("not a Dynkin diagram"),
    }
}

fn c2_shape(rs: &RootSystem) -> bool {
    let (norms, class) = rs.length_classes();
    norms.len() == 2
        && rs
            .roots()
            .iter()
            .zip(&class)
            .all(|(v, &c)| v.coords().iter().filter(|x| !x.is_zero()).count() == if c == 1 { 1 } else { 2 })
}

fn identify_simple_system(rs: &RootSystem) -> (Vec<TypeLabel>, Vec<(TypeLabel, TypeLabel)>) {
    let mut labels: Vec<TypeLabel> = component_labels(rs).into_iter().map(|(_, l)| l).collect();
    labels.sort();
    let alts = labels
        .iter()
        .filter(|l| l.rank == 2 && matches!(l.family, Family::B | Family::C))
        .map(|l| {
            let other = if l.family == Family::B { Family::C } else { Family::B };
            (*l, TypeLabel { family: other, rank: 2 })
        })
        .collect();
    (labels, alts)
}

/// A linear isomorphism between root systems, given by the images of the simple roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    /// Root index (in the target) of the image of each simple root of the source.
    pub simple_images: Vec<usize>,
    /// Root index map source -> target.
    pub root_map: Vec<usize>,
    /// Ratio |f(alpha)|^2 / |alpha|^2 for each simple root of the source.
    pub scales: Vec<Q>,
}

impl Isomorphism {
    /// Image of an ambient vector of the source span.
    pub fn apply(&self, s: &RootSystem, t: &RootSystem, v: &RationalVector) -> Option<RationalVector> {
        let c = s.coords_of(v)?;
        let mut out = RationalVector::zero(t.dim());
        for (ci, &img) in c.iter().zip(&self.simple_images) {
            out = out.add_scaled(ci, t.root(img));
        }
        Some(out)
    }

    pub fn is_isometry(&self) -> bool {
        self.scales.iter().all(|s| s.is_one())
    }

    /// Independent check: the map sends roots onto roots bijectively and preserves
    /// every Cartan integer.
    pub fn verify(&self, s: &RootSystem, t: &RootSystem) -> bool {
        if s.len() != t.len() || self.root_map.len() != s.len() {
            return false;
        }
        let mut seen = vec![false; t.len()];
        for i in 0..s.len() {
            let Some(img) = self.apply(s, t, s.root(i)) else { return false };
            let Some(j) = t.index_of(&img) else { return false };
            if j != self.root_map[i] || seen[j] {
                return false;
            }
            seen[j] = true;
        }
        for i in 0..s.len() {
            for k in 0..s.len() {
                if s.cartan(i, k) != t.cartan(self.root_map[i], self.root_map[k]) {
                    return false;
                }
            }
        }
        true
    }
}

/// Searches for a Cartan-integer preserving linear bijection `S -> T`.
pub fn find_isomorphism(s: &RootSystem, t: &RootSystem) -> Option<Isomorphism> {
    let cs = vec![0u64; s.len()];
    let ct = vec![0u64; t.len()];
    iso::find(s, &cs, t, &ct, false)
}

/// Element of a Weyl group, stored as its permutation of the roots.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    pub perm: Vec<usize>,
}

impl WeylElement {
    /// Action on an ambient vector of the span (orthogonal complement is fixed).
    pub fn apply(&self, s: &RootSystem, v: &RationalVector) -> RationalVector {
        // Decompose v = v_span + v_perp; images of simple roots determine the map.
        match s.coords_of(v) {
            Some(c) => {
                let mut out = RationalVector::zero(s.dim());
                for (k, ck) in c.iter().enumerate() {
                    out = out.add_scaled(ck, s.root(self.perm[s.simple_index(k)]));
                }
                out
            }
            None => {
                // project onto the span, act there, keep the perpendicular part
                let coeffs: Vec<Q> = (0..s.rank())
                    .map(|i| s.left_inverse[i].iter().zip(v.coords()).map(|(a, b)| a * b).sum())
                    .collect();
                let par = s.combine_q(&coeffs);
                let perp = v - &par;
                let moved = self.apply(s, &par);
                &moved + &perp
            }
        }
    }
}

/// All elements of `W(S)`, by closure of the simple reflections. Refused above `rank_cap`.
pub fn weyl_elements(s: &RootSystem, rank_cap: usize) -> Result<Vec<WeylElement>> {
    if s.rank() > rank_cap {
        return Err(Error::InvalidInput(format!("rank {} exceeds the Weyl enumeration cap {rank_cap}", s.rank())));
    }
    let gens: Vec<Vec<usize>> = (0..s.rank())
        .map(|k| {
            let a = s.simple_index(k);
            (0..s.len()).map(|b| s.reflect_index(a, b)).collect()
        })
        .collect();
    let id: Vec<usize> = (0..s.len()).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    seen.insert(id.clone());
    let mut frontier = vec![id.clone()];
    let mut out = vec![WeylElement { perm: id }];
    while let Some(p) = frontier.pop() {
        for g in &gens {
            let np: Vec<usize> = p.iter().map(|&x| g[x]).collect();
            if seen.insert(np.clone()) {
                out.push(WeylElement { perm: np.clone() });
                frontier.push(np);
            }
        }
    }
    Ok(out)
}

/// Coefficients of the highest root over the fundamental system.
pub fn highest_coefficients(s: &RootSystem) -> Option<Vec<i64>> {
    let h = s.highest()?;
    let i = s.index_of(h)?;
    Some(s.coeff(i).to_vec())
}
