//! Double Satake diagrams and the symmetric triad of a commuting pair of involutions.
//!
//! A Satake diagram (black nodes, arrows) determines an involution `σ` of the root
//! system: black simple roots go to their negatives and a white `α` goes to
//! `w_0(p(α))`, with `w_0` the longest element of the black subsystem. For two
//! commuting involutions the projection `pr = ¼(1+σ1)(1+σ2)` yields the restricted
//! root system `Σ̃`; roots fixed by `σ1σ2` are *imaginary* and carry a compactness
//! parity, and the compact/noncompact split produces `Σ`, `W` and the multiplicities.

use crate::error::{Error, Result};
use crate::expr;
use crate::rootsys::{Family, RootSystem, TypeLabel};
use crate::triads::{are_equiv_with, are_sim_with, canonical, twist, verify_multiplicity_axioms, verify_triad_axioms, GammaElement, Kind, Mode, MultSymmetricTriad, TriadTag};
use crate::vector::{q, qi, RationalVector, Q};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, OnceLock};

/// Black nodes and the arrow involution on the simple roots (0-based node indices).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SatakeDiagram {
    pub black: Vec<bool>,
    pub arrows: Vec<usize>,
}

impl SatakeDiagram {
    pub fn new(rank: usize, black: &[usize], arrows: &[(usize, usize)]) -> Result<Self> {
        let mut b = vec![false; rank];
        for &k in black {
            *b.get_mut(k).ok_or_else(|| Error::InvalidInput(format!("node {} out of range", k + 1)))? = true;
        }
        let mut p: Vec<usize> = (0..rank).collect();
        for &(i, j) in arrows {
            if i >= rank || j >= rank || b[i] || b[j] || p[i] != i || p[j] != j {
                return Err(Error::InvalidInput(format!("bad arrow {}↔{}", i + 1, j + 1)));
            }
            p[i] = j;
            p[j] = i;
        }
        Ok(SatakeDiagram { black: b, arrows: p })
    }

    /// All nodes white, no arrows.
    pub fn split(rank: usize) -> Self {
        SatakeDiagram { black: vec![false; rank], arrows: (0..rank).collect() }
    }

    pub fn rank(&self) -> usize {
        self.black.len()
    }

    /// Diagram by its Cartan name on a root system of the given type, Bourbaki numbering.
    /// Accepted: `AI AII AIII(a) BDI(a) DIII DIII' CI CII(a)` and `EI`–`EIX`, `FI`, `FII`.
    pub fn named(label: TypeLabel, name: &str) -> Result<Self> {
        let name = name.trim();
        let (base, arg) = match name.find('(') {
            Some(p) => {
                let a: usize = name[p + 1..].trim_end_matches(')').trim().parse().map_err(|_| Error::InvalidInput(format!("bad diagram `{name}`")))?;
                (&name[..p], Some(a))
            }
            None => (name, None),
        };
        let r = label.rank;
        let bad = || Error::InvalidInput(format!("diagram `{name}` does not exist on {label}"));
        // nodes are given 1-based below
        let mk = |black: Vec<usize>, arrows: Vec<(usize, usize)>| {
            SatakeDiagram::new(r, &black.iter().map(|k| k - 1).collect::<Vec<_>>(), &arrows.iter().map(|(i, j)| (i - 1, j - 1)).collect::<Vec<_>>())
        };
        use Family::*;
        match (label.family, base, arg) {
            (A, "AI", None) | (C, "CI", None) => Ok(SatakeDiagram::split(r)),
            (A, "AII", None) if r % 2 == 1 => mk((1..=r).step_by(2).collect(), vec![]),
            (A, "AIII", Some(a)) => {
                let n = r + 1;
                if a == 0 || 2 * a > n {
                    return Err(bad());
                }
                let black = (a + 1..n - a).collect();
                let arrows = (1..=a).filter(|&i| i != n - i).map(|i| (i, n - i)).collect();
                mk(black, arrows)
            }
            (B, "BDI", Some(a)) if a >= 1 && a <= r => mk((a + 1..=r).collect(), vec![]),
            (D, "BDI", Some(a)) if a >= 1 && a <= r => {
                if a == r {
                    Ok(SatakeDiagram::split(r))
                } else if a == r - 1 {
                    mk(vec![], vec![(r - 1, r)])
                } else {
                    mk((a + 1..=r).collect(), vec![])
                }
            }
            (D, "DIII", None) if r >= 2 => {
                if r % 2 == 0 {
                    mk((1..r).step_by(2).collect(), vec![])
                } else {
                    mk((1..r - 1).step_by(2).collect(), vec![(r - 1, r)])
                }
            }
            (D, "DIII'", None) if r >= 2 && r % 2 == 0 => {
                let mut black: Vec<usize> = (1..r - 1).step_by(2).collect();
                black.push(r);
                mk(black, vec![])
            }
            (C, "CII", Some(a)) if a >= 1 && 2 * a <= r => {
                let mut black: Vec<usize> = (1..2 * a).step_by(2).collect();
                black.extend(2 * a + 1..=r);
                mk(black, vec![])
            }
            (E, "EI", None) if r == 6 => Ok(SatakeDiagram::split(6)),
            (E, "EII", None) if r == 6 => mk(vec![], vec![(1, 6), (3, 5)]),
            (E, "EIII", None) if r == 6 => mk(vec![3, 4, 5], vec![(1, 6)]),
            (E, "EIV", None) if r == 6 => mk(vec![2, 3, 4, 5], vec![]),
            (E, "EV", None) if r == 7 => Ok(SatakeDiagram::split(7)),
            (E, "EVI", None) if r == 7 => mk(vec![2, 5, 7], vec![]),
            (E, "EVII", None) if r == 7 => mk(vec![2, 3, 4, 5], vec![]),
            (E, "EVIII", None) if r == 8 => Ok(SatakeDiagram::split(8)),
            (E, "EIX", None) if r == 8 => mk(vec![2, 3, 4, 5], vec![]),
            (F, "FI", None) => Ok(SatakeDiagram::split(4)),
            (F, "FII", None) => mk(vec![1, 2, 3], vec![]),
            _ => Err(bad()),
        }
    }
}

/// An involution of `Δ` in simple-root coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaAction {
    /// Column `k` is the image of `α_k`.
    pub matrix: Vec<Vec<i64>>,
    /// Induced permutation of the root list.
    pub root_perm: Vec<usize>,
}

impl SigmaAction {
    pub fn apply(&self, c: &[i64]) -> Vec<i64> {
        let r = c.len();
        let mut out = vec![0; r];
        for (k, &ck) in c.iter().enumerate() {
            if ck != 0 {
                for i in 0..r {
                    out[i] += ck * self.matrix[k][i];
                }
            }
        }
        out
    }

    pub fn image(&self, i: usize) -> usize {
        self.root_perm[i]
    }

    /// Permutation composed with `other` first.
    fn compose(&self, other: &SigmaAction) -> Vec<usize> {
        other.root_perm.iter().map(|&j| self.root_perm[j]).collect()
    }
}

/// Reduced word (node indices) for the longest element of the subsystem on `nodes`.
pub fn longest_element_word(delta: &RootSystem, nodes: &[usize]) -> Vec<usize> {
    let r = delta.rank();
    let mut h = vec![0i64; r];
    for i in 0..delta.len() {
        let c = delta.coeff(i);
        if delta.is_positive(i) && c.iter().enumerate().all(|(k, &x)| x == 0 || nodes.contains(&k)) {
            for k in 0..r {
                h[k] += c[k];
            }
        }
    }
    let mut word = vec![];
    loop {
        let Some(&b) = nodes.iter().find(|&&b| delta.cartan_coeff(&h, delta.simple_index(b)) > 0) else { break };
        let k = delta.cartan_coeff(&h, delta.simple_index(b));
        h[b] -= k;
        word.push(b);
    }
    word
}

fn apply_word(delta: &RootSystem, word: &[usize], c: &mut [i64]) {
    for &b in word {
        let k = delta.cartan_coeff(c, delta.simple_index(b));
        c[b] -= k;
    }
}

/// The involution of `Δ` attached to a Satake diagram; checks `σ² = 1` and `σ(Δ) = Δ`.
pub fn derive_sigma(delta: &RootSystem, s: &SatakeDiagram) -> Result<SigmaAction> {
    let r = delta.rank();
    if s.rank() != r {
        return Err(Error::InvalidInput(format!("diagram has {} nodes, root system has rank {r}", s.rank())));
    }
    let black: Vec<usize> = (0..r).filter(|&k| s.black[k]).collect();
    let word = longest_element_word(delta, &black);
    let mut matrix = vec![vec![0i64; r]; r];
    for k in 0..r {
        if s.black[k] {
            matrix[k][k] = -1;
        } else {
            let mut c = vec![0i64; r];
            c[s.arrows[k]] = 1;
            apply_word(delta, &word, &mut c);
            matrix[k] = c;
        }
    }
    let mut sa = SigmaAction { matrix, root_perm: vec![] };
    let mut perm = Vec::with_capacity(delta.len());
    for i in 0..delta.len() {
        let img = sa.apply(delta.coeff(i));
        perm.push(delta.index_of_coeff(&img).ok_or_else(|| Error::AxiomViolation(format!("σ does not preserve Δ: image of {} is not a root", delta.root(i))))?);
    }
    if (0..delta.len()).any(|i| perm[perm[i]] != i) {
        return Err(Error::AxiomViolation("σ is not an involution".into()));
    }
    sa.root_perm = perm;
    Ok(sa)
}

/// A pair of Satake diagrams on one root system whose involutions commute.
#[derive(Clone, Debug)]
pub struct DoubleSatakeDiagram {
    pub delta: Arc<RootSystem>,
    pub s1: SatakeDiagram,
    pub s2: SatakeDiagram,
    pub case_id: Option<String>,
    pub sigma1: SigmaAction,
    pub sigma2: SigmaAction,
}

impl DoubleSatakeDiagram {
    pub fn new(delta: Arc<RootSystem>, s1: SatakeDiagram, s2: SatakeDiagram, case_id: Option<String>) -> Result<Self> {
        let sigma1 = derive_sigma(&delta, &s1)?;
        let sigma2 = derive_sigma(&delta, &s2)?;
        DoubleSatakeDiagram::from_actions(delta, s1, s2, case_id, sigma1, sigma2)
    }

    /// With the involutions given directly (checked for commutation).
    pub fn from_actions(delta: Arc<RootSystem>, s1: SatakeDiagram, s2: SatakeDiagram, case_id: Option<String>, sigma1: SigmaAction, sigma2: SigmaAction) -> Result<Self> {
        if sigma1.compose(&sigma2) != sigma2.compose(&sigma1) {
            return Err(Error::AxiomViolation("σ1 and σ2 do not commute".into()));
        }
        Ok(DoubleSatakeDiagram { delta, s1, s2, case_id, sigma1, sigma2 })
    }

    /// `σ1σ2` as a root permutation.
    pub fn sigma12(&self) -> Vec<usize> {
        self.sigma1.compose(&self.sigma2)
    }

    /// `4·pr(α)` in simple coordinates.
    pub fn pr4(&self, i: usize) -> Vec<i64> {
        let c = self.delta.coeff(i);
        let a = self.sigma2.apply(c);
        let mut out: Vec<i64> = c.iter().zip(&a).map(|(x, y)| x + y).collect();
        let b = self.sigma1.apply(&out);
        for (x, y) in out.iter_mut().zip(b) {
            *x += y;
        }
        out
    }

    /// `pr(α)` in ambient coordinates.
    pub fn projection(&self, i: usize) -> RationalVector {
        let c: Vec<Q> = self.pr4(i).iter().map(|&x| q(x, 4)).collect();
        self.delta.combine_q(&c)
    }
}

/// `Δ = Δ0 ⊔ Δ_im ⊔ Δ_cpx`, with `fixed` the roots fixed by `σ1σ2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootPartition {
    pub delta0: Vec<usize>,
    pub imaginary: Vec<usize>,
    pub complex: Vec<usize>,
    pub fixed: Vec<usize>,
}

pub fn partition(d: &DoubleSatakeDiagram) -> RootPartition {
    let s12 = d.sigma12();
    let mut p = RootPartition { delta0: vec![], imaginary: vec![], complex: vec![], fixed: vec![] };
    for i in 0..d.delta.len() {
        let zero = d.pr4(i).iter().all(|&x| x == 0);
        let fixed = s12[i] == i;
        if fixed {
            p.fixed.push(i);
        }
        if zero {
            p.delta0.push(i);
        } else if fixed {
            p.imaginary.push(i);
        } else {
            p.complex.push(i);
        }
    }
    p
}

/// `Σ̃ = pr(Δ) − {0}` and, for every root of `Δ`, the index of its projection.
pub fn restricted_system(d: &DoubleSatakeDiagram) -> Result<(Arc<RootSystem>, Vec<Option<usize>>)> {
    let mut images: Vec<RationalVector> = vec![];
    let proj: Vec<Option<RationalVector>> = (0..d.delta.len()).map(|i| (!d.pr4(i).iter().all(|&x| x == 0)).then(|| d.projection(i))).collect();
    for v in proj.iter().flatten() {
        images.push(v.clone());
    }
    images.sort();
    images.dedup();
    let st = Arc::new(RootSystem::from_roots(d.delta.dim(), images)?);
    let idx = proj.iter().map(|v| v.as_ref().map(|v| st.index_of(v).expect("projection in Σ̃"))).collect();
    Ok((st, idx))
}

/// One consistent compactness assignment on the `σ1σ2`-fixed roots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompactnessLabeling {
    /// `Some(true)` for noncompact fixed roots, `Some(false)` for compact ones, `None` off `F`.
    pub noncompact: Vec<Option<bool>>,
}

/// Solution space of the compactness constraints: an affine subspace of characters mod 2.
#[derive(Clone, Debug)]
pub struct CompactnessSystem {
    /// Simple-coordinate parity mask (over the fixed subsystem) of each root of `Δ`, if fixed.
    masks: Vec<Option<u64>>,
    particular: u64,
    /// Basis of the undetermined directions.
    pub free: Vec<u64>,
}

impl CompactnessSystem {
    pub fn free_count(&self) -> usize {
        self.free.len()
    }

    /// The subspace where the given roots have the given parities (`true` = noncompact).
    pub fn restrict(&self, seeds: &[(usize, bool)]) -> Result<CompactnessSystem> {
        let k = self.free.len();
        let mut rows = vec![];
        for &(i, v) in seeds {
            let m = self.masks.get(i).copied().flatten().ok_or_else(|| Error::InvalidInput(format!("seed {i} is not a fixed root")))?;
            let bits: u64 = self.free.iter().enumerate().filter(|(_, f)| (*f & m).count_ones() % 2 == 1).map(|(j, _)| 1u64 << j).sum();
            rows.push((bits, v ^ ((self.particular & m).count_ones() % 2 == 1)));
        }
        let rows: Vec<(u64, bool)> = rows.into_iter().filter(|r| r.0 != 0 || r.1).collect();
        if rows.is_empty() {
            return Ok(self.clone());
        }
        let (c, null) = solve_gf2(rows, k).ok_or_else(|| Error::AxiomViolation("compactness constraints are inconsistent".into()))?;
        let combine = |c: u64| (0..k).filter(|j| c >> j & 1 == 1).fold(0u64, |acc, j| acc ^ self.free[j]);
        Ok(CompactnessSystem { masks: self.masks.clone(), particular: self.particular ^ combine(c), free: null.into_iter().map(combine).collect() })
    }

    pub fn labeling(&self, choice: u64) -> CompactnessLabeling {
        let mut y = self.particular;
        for (k, f) in self.free.iter().enumerate() {
            if choice >> k & 1 == 1 {
                y ^= f;
            }
        }
        CompactnessLabeling { noncompact: self.masks.iter().map(|m| m.map(|m| (m & y).count_ones() % 2 == 1)).collect() }
    }

    /// All `2^k` labelings (`k` = number of free directions, capped at 16).
    pub fn labelings(&self) -> Result<Vec<CompactnessLabeling>> {
        if self.free.len() > 16 {
            return Err(Error::Unsupported(format!("{} undetermined compactness parities", self.free.len())));
        }
        Ok((0..1u64 << self.free.len()).map(|c| self.labeling(c)).collect())
    }
}

/// Gaussian elimination over GF(2). Rows are `(mask, rhs)`; returns the particular
/// solution and a nullspace basis, or `None` if inconsistent.
fn solve_gf2(mut rows: Vec<(u64, bool)>, vars: usize) -> Option<(u64, Vec<u64>)> {
    let mut pivots: Vec<(usize, usize)> = vec![];
    let mut next = 0;
    for col in 0..vars {
        let Some(p) = (next..rows.len()).find(|&i| rows[i].0 >> col & 1 == 1) else { continue };
        rows.swap(next, p);
        let (pm, pr) = rows[next];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != next && row.0 >> col & 1 == 1 {
                row.0 ^= pm;
                row.1 ^= pr;
            }
        }
        pivots.push((next, col));
        next += 1;
    }
    if rows[next..].iter().any(|&(m, b)| m == 0 && b) {
        return None;
    }
    let pivot_cols: u64 = pivots.iter().map(|&(_, c)| 1u64 << c).sum();
    let mut particular = 0u64;
    for &(row, col) in &pivots {
        if rows[row].1 {
            particular |= 1 << col;
        }
    }
    let mut free = vec![];
    for col in (0..vars).filter(|c| pivot_cols >> c & 1 == 0) {
        let mut v = 1u64 << col;
        for &(row, pc) in &pivots {
            if rows[row].0 >> col & 1 == 1 {
                v |= 1 << pc;
            }
        }
        free.push(v);
    }
    Some((particular, free))
}

/// Builds and solves the compactness constraints. `seeds` fixes parities of given roots
/// (`true` = noncompact) in addition to the forced ones:
///
/// * compactness is additive on the fixed subsystem and invariant under `σ1`;
/// * roots with `σ1β = σ2β = −β` are compact;
/// * `α + σ1σ2(α)`, when a root, is noncompact;
/// * `δ = α + β + σ1σ2(α)` with `α + σ1σ2(α)` not a root, `β` fixed and `α + β` a root
///   has the parity of `β`.
pub fn compactness_system(d: &DoubleSatakeDiagram, part: &RootPartition, seeds: &[(usize, bool)]) -> Result<CompactnessSystem> {
    let delta = &d.delta;
    let n = delta.len();
    let s12 = d.sigma12();
    let mut masks: Vec<Option<u64>> = vec![None; n];
    let mut vars = 0;
    if !part.fixed.is_empty() {
        let vs: Vec<RationalVector> = part.fixed.iter().map(|&i| delta.root(i).clone()).collect();
        let f = RootSystem::from_roots(delta.dim(), vs)?;
        vars = f.rank();
        if vars > 64 {
            return Err(Error::Unsupported("fixed subsystem of rank > 64".into()));
        }
        for &i in &part.fixed {
            let k = f.index_of(delta.root(i)).ok_or_else(|| Error::Internal("fixed root lost".into()))?;
            let m = f.coeff(k).iter().enumerate().filter(|(_, &c)| c.rem_euclid(2) == 1).map(|(j, _)| 1u64 << j).sum();
            masks[i] = Some(m);
        }
    }
    let mut rows: Vec<(u64, bool)> = vec![];
    for &i in &part.delta0 {
        if let Some(m) = masks[i] {
            rows.push((m, false));
        }
    }
    for &i in &part.fixed {
        let j = d.sigma1.image(i);
        rows.push((masks[i].unwrap() ^ masks[j].ok_or_else(|| Error::Internal("σ1 does not preserve the fixed roots".into()))?, false));
    }
    for a in 0..n {
        if let Some(s) = delta.sum_index(a, s12[a]) {
            rows.push((masks[s].ok_or_else(|| Error::Internal("α+σ1σ2α not fixed".into()))?, true));
            continue;
        }
        for &b in &part.fixed {
            let Some(ab) = delta.sum_index(a, b) else { continue };
            let Some(dd) = delta.sum_index(ab, s12[a]) else { continue };
            rows.push((masks[dd].ok_or_else(|| Error::Internal("δ not fixed".into()))? ^ masks[b].unwrap(), false));
        }
    }
    for &(i, v) in seeds {
        rows.push((masks[i].ok_or_else(|| Error::InvalidInput(format!("seed {} is not a fixed root", delta.root(i))))?, v));
    }
    let rows: Vec<(u64, bool)> = rows.into_iter().filter(|r| r.0 != 0 || r.1).collect();
    let (particular, free) = solve_gf2(rows, vars).ok_or_else(|| Error::AxiomViolation("compactness constraints are inconsistent".into()))?;
    Ok(CompactnessSystem { masks, particular, free })
}

/// Triad with multiplicities for one compactness labeling:
/// `Σ = pr(Δ_cpt ∪ Δ_cpx)`, `W = pr(Δ_noncpt ∪ Δ_cpx)`,
/// `m = #cpt + ½#cpx`, `n = #noncpt + ½#cpx` over each fibre of `pr`.
pub fn triad_of(d: &DoubleSatakeDiagram, part: &RootPartition, lab: &CompactnessLabeling) -> Result<MultSymmetricTriad> {
    let (st, idx) = restricted_system(d)?;
    triad_on(st, &idx, part, lab)
}

fn triad_on(st: Arc<RootSystem>, idx: &[Option<usize>], part: &RootPartition, lab: &CompactnessLabeling) -> Result<MultSymmetricTriad> {
    let len = st.len();
    let (mut cpt, mut ncpt, mut cpx) = (vec![0i64; len], vec![0i64; len], vec![0i64; len]);
    for &i in &part.imaginary {
        let l = idx[i].unwrap();
        match lab.noncompact[i] {
            Some(true) => ncpt[l] += 1,
            Some(false) => cpt[l] += 1,
            None => return Err(Error::Internal("imaginary root without parity".into())),
        }
    }
    for &i in &part.complex {
        cpx[idx[i].unwrap()] += 1;
    }
    let half = q(1, 2);
    let m: Vec<Q> = (0..len).map(|l| qi(cpt[l]) + qi(cpx[l]) * &half).collect();
    let n: Vec<Q> = (0..len).map(|l| qi(ncpt[l]) + qi(cpx[l]) * &half).collect();
    let sigma: Vec<bool> = m.iter().map(|x| !x.is_zero()).collect();
    let w: Vec<bool> = n.iter().map(|x| !x.is_zero()).collect();
    let kind = if (0..len).any(|l| sigma[l] && w[l]) { Kind::Ordinary } else { Kind::TypeIv };
    MultSymmetricTriad::new(st, sigma, w, m, n, kind)
}

/// `Σ ∩ W` of a triad, as ambient vectors.
pub fn sigma_cap_w(t: &MultSymmetricTriad) -> Vec<RationalVector> {
    t.cap_indices().into_iter().map(|i| t.root(i).clone()).collect()
}

/// Everything computed from a double Satake diagram.
#[derive(Clone, Debug)]
pub struct SatakeResult {
    pub partition: RootPartition,
    pub free_parities: usize,
    /// Triads of the admissible labelings.
    pub triads: Vec<MultSymmetricTriad>,
    /// Labelings rejected because their triad violates the axioms.
    pub rejected: usize,
    /// Whether all admissible labelings give `~`-equivalent triads.
    pub consistent: bool,
}

/// A labeling is admissible when its triad satisfies the triad and multiplicity axioms,
/// as the triad of any commuting pair of involutions does.
pub fn admissible(t: &MultSymmetricTriad) -> bool {
    match t.kind {
        Kind::Ordinary => verify_triad_axioms(&t.sigma_tilde, &t.sigma, &t.w).passes() && verify_multiplicity_axioms(t).passes(),
        Kind::TypeIv => true,
    }
}

type TriadSig = (Vec<bool>, Vec<bool>, Vec<Q>, Vec<Q>);

fn signature(t: &MultSymmetricTriad) -> TriadSig {
    (t.sigma.clone(), t.w.clone(), t.m.clone(), t.n.clone())
}

/// Solves compactness and builds the triad of every labeling.
pub fn analyze(d: &DoubleSatakeDiagram, seeds: &[(usize, bool)]) -> Result<SatakeResult> {
    Prepared::new(d)?.analyze(seeds)
}

/// The seed-independent part of [`analyze`], for running many seedings of one diagram.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub partition: RootPartition,
    pub system: CompactnessSystem,
    sigma_tilde: Arc<RootSystem>,
    index: Vec<Option<usize>>,
}

impl Prepared {
    pub fn new(d: &DoubleSatakeDiagram) -> Result<Self> {
        let partition = partition(d);
        let system = compactness_system(d, &partition, &[])?;
        let (sigma_tilde, index) = restricted_system(d)?;
        Ok(Prepared { partition, system, sigma_tilde, index })
    }

    /// Triads of every labeling compatible with `seeds`, without the admissibility filter.
    pub fn raw_triads(&self, seeds: &[(usize, bool)]) -> Result<Vec<MultSymmetricTriad>> {
        self.system.restrict(seeds)?.labelings()?.iter().map(|l| triad_on(self.sigma_tilde.clone(), &self.index, &self.partition, l)).collect()
    }

    pub fn analyze(&self, seeds: &[(usize, bool)]) -> Result<SatakeResult> {
        analyze_on(self.partition.clone(), &self.system.restrict(seeds)?, self.sigma_tilde.clone(), &self.index)
    }
}

fn analyze_on(part: RootPartition, sys: &CompactnessSystem, st: Arc<RootSystem>, idx: &[Option<usize>]) -> Result<SatakeResult> {
    let all: Vec<MultSymmetricTriad> = sys.labelings()?.iter().map(|l| triad_on(st.clone(), idx, &part, l)).collect::<Result<_>>()?;
    let total = all.len();
    // Twists of an admissible triad are admissible and `~`-equivalent to it, so labelings
    // landing exactly on a twist of the first admissible one need no further checks.
    let Some(first) = all.iter().position(admissible) else {
        return Err(Error::AxiomViolation("no compactness labeling yields a symmetric triad".into()));
    };
    let t0 = &all[first];
    let twists: HashSet<TriadSig> =
        GammaElement::all_parities(t0.sigma_tilde.rank()).iter().map(|y| twist(t0, y).map(|u| signature(&u))).collect::<Result<_>>()?;
    let mut verdict: HashMap<TriadSig, (bool, bool)> = HashMap::new();
    let mut consistent = true;
    let mut keep = vec![false; total];
    for (i, t) in all.iter().enumerate() {
        let sig = signature(t);
        let (adm, sim) = if i == first || twists.contains(&sig) {
            (true, true)
        } else {
            *verdict.entry(sig).or_insert_with(|| {
                let adm = admissible(t);
                (adm, adm && t.kind == t0.kind && are_sim_with(t0, t, Mode::Scaled).is_some())
            })
        };
        keep[i] = i >= first && adm;
        consistent &= !adm || sim;
    }
    let triads: Vec<MultSymmetricTriad> = all.into_iter().zip(keep).filter(|(_, k)| *k).map(|(t, _)| t).collect();
    Ok(SatakeResult { partition: part, free_parities: sys.free_count(), rejected: total - triads.len(), triads, consistent })
}

/// Root system named by a group: `SU{n}`, `SO{n}`, `Sp{n}` or an exceptional type.
pub fn group_root_system(group: &str) -> Result<TypeLabel> {
    let g = group.trim();
    let num = |p: &str| g[p.len()..].parse::<usize>().map_err(|_| Error::InvalidInput(format!("bad group `{g}`")));
    if g.starts_with("SU") {
        let n = num("SU")?;
        TypeLabel::new(Family::A, n.checked_sub(1).filter(|&r| r >= 1).ok_or_else(|| Error::InvalidInput(format!("bad group `{g}`")))?)
    } else if g.starts_with("SO") {
        let n = num("SO")?;
        if n < 5 {
            return Err(Error::InvalidInput(format!("{g} is not handled (n < 5)")));
        }
        if n % 2 == 1 {
            TypeLabel::new(Family::B, n / 2)
        } else {
            TypeLabel::new(Family::D, n / 2)
        }
    } else if g.starts_with("Sp") {
        TypeLabel::new(Family::C, num("Sp")?)
    } else {
        g.parse()
    }
}

// ---------------------------------------------------------------------------
// Table 2: classification of commuting pairs

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct Table2Case {
    pub when: String,
    pub tag: String,
    /// `(m, n)` per length class, shortest first.
    pub mn: Vec<(String, String)>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct Table2Row {
    pub id: String,
    pub group: String,
    pub s1: String,
    pub s2: String,
    /// Parameters with inclusive ranges (expressions in the earlier parameters).
    #[serde(default)]
    pub params: Vec<(String, String, String)>,
    pub cases: Vec<Table2Case>,
}

#[derive(Deserialize)]
struct Table2File {
    rows: Vec<Table2Row>,
}

pub fn table2() -> &'static [Table2Row] {
    static T: OnceLock<Vec<Table2Row>> = OnceLock::new();
    T.get_or_init(|| {
        let f: Table2File = serde_json::from_str(include_str!("../data/table2.json")).expect("embedded table2.json parses");
        f.rows
    })
}

/// A concrete entry: row, parameter values and the expected triad.
#[derive(Clone, Debug, Serialize)]
pub struct Table2Instance {
    pub id: String,
    pub params: BTreeMap<String, i64>,
    pub group: String,
    pub s1: String,
    pub s2: String,
    pub tag: TriadTag,
    pub mn: Vec<(i64, i64)>,
}

fn instances_of(row: &Table2Row, max_param: i64) -> Result<Vec<Table2Instance>> {
    fn rec(row: &Table2Row, k: usize, vars: &mut HashMap<String, i64>, max_param: i64, out: &mut Vec<Table2Instance>) -> Result<()> {
        if k == row.params.len() {
            for c in &row.cases {
                if expr::eval(&c.when, vars)? == 0 {
                    continue;
                }
                let mn = c.mn.iter().map(|(a, b)| Ok((expr::eval(a, vars)?, expr::eval(b, vars)?))).collect::<Result<Vec<_>>>()?;
                out.push(Table2Instance {
                    id: row.id.clone(),
                    params: row.params.iter().map(|(p, _, _)| (p.clone(), vars[p])).collect(),
                    group: expr::substitute(&row.group, vars)?,
                    s1: expr::substitute(&row.s1, vars)?,
                    s2: expr::substitute(&row.s2, vars)?,
                    tag: expr::substitute(&c.tag, vars)?.parse()?,
                    mn,
                });
                break;
            }
            return Ok(());
        }
        let (name, lo, hi) = &row.params[k];
        let lo = expr::eval(lo, vars)?;
        let hi = expr::eval(hi, vars)?.min(max_param);
        for v in lo..=hi {
            vars.insert(name.clone(), v);
            rec(row, k + 1, vars, max_param, out)?;
        }
        vars.remove(name);
        Ok(())
    }
    let mut out = vec![];
    rec(row, 0, &mut HashMap::new(), max_param, &mut out)?;
    Ok(out)
}

/// All entries with every parameter at most `max_param`.
pub fn table2_instances(max_param: i64) -> Result<Vec<Table2Instance>> {
    let mut out = vec![];
    for row in table2() {
        out.extend(instances_of(row, max_param)?);
    }
    Ok(out)
}

/// Double Satake diagram of an entry.
pub fn catalog_case(inst: &Table2Instance) -> Result<DoubleSatakeDiagram> {
    let label = group_root_system(&inst.group)?;
    let delta = Arc::new(RootSystem::build(label)?);
    let s1 = SatakeDiagram::named(label, &inst.s1)?;
    let s2 = SatakeDiagram::named(label, &inst.s2)?;
    DoubleSatakeDiagram::new(delta, s1, s2, Some(inst.id.clone()))
}

/// Looks up a row by id and builds its diagram for the given parameters.
pub fn catalog_case_by_id(case_id: &str, params: &[(&str, i64)]) -> Result<(Table2Instance, DoubleSatakeDiagram)> {
    let row = table2().iter().find(|r| r.id == case_id).ok_or_else(|| Error::InvalidInput(format!("unknown case `{case_id}`")))?;
    let want: BTreeMap<String, i64> = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    let inst = instances_of(row, i64::MAX / 4)
        .ok()
        .into_iter()
        .flatten()
        .find(|i| i.params == want)
        .ok_or_else(|| Error::InvalidInput(format!("no entry of {case_id} with parameters {want:?}")))?;
    let d = catalog_case(&inst)?;
    Ok((inst, d))
}

/// The printed triad of an entry on the standard realization: `Σ = {m > 0}`, `W = {n > 0}`.
pub fn expected_triad(inst: &Table2Instance) -> Result<MultSymmetricTriad> {
    let st = Arc::new(RootSystem::build(inst.tag.sigma_tilde_label()?)?);
    let (norms, class) = st.length_classes();
    if norms.len() != inst.mn.len() {
        return Err(Error::InvalidInput(format!("{}: {} length classes but {} (m, n) pairs", inst.tag, norms.len(), inst.mn.len())));
    }
    let m: Vec<Q> = class.iter().map(|&c| qi(inst.mn[c].0)).collect();
    let n: Vec<Q> = class.iter().map(|&c| qi(inst.mn[c].1)).collect();
    let sigma = m.iter().map(|x| !x.is_zero()).collect();
    let w = n.iter().map(|x| !x.is_zero()).collect();
    MultSymmetricTriad::new(st, sigma, w, m, n, Kind::Ordinary)
}

#[derive(Clone, Debug, Serialize)]
pub struct Table2Check {
    pub instance: Table2Instance,
    pub labelings: usize,
    /// All labelings give `~`-equivalent triads.
    pub consistent: bool,
    /// Computed triad `~` the printed one.
    pub matches: bool,
    pub canonical_tag: Option<TriadTag>,
    pub canonical_mn: Option<Vec<(String, String)>>,
    /// The printed form is the canonical representative.
    pub printed_is_canonical: bool,
    pub error: Option<String>,
}

impl Table2Check {
    pub fn pass(&self) -> bool {
        self.error.is_none() && self.consistent && self.matches
    }
}

pub fn check_instance(inst: &Table2Instance) -> Table2Check {
    let mut chk = Table2Check {
        instance: inst.clone(),
        labelings: 0,
        consistent: false,
        matches: false,
        canonical_tag: None,
        canonical_mn: None,
        printed_is_canonical: false,
        error: None,
    };
    let run = |chk: &mut Table2Check| -> Result<()> {
        let d = catalog_case(inst)?;
        let res = analyze(&d, &[])?;
        let expected = expected_triad(inst)?;
        chk.labelings = res.triads.len();
        chk.consistent = res.consistent;
        let t = &res.triads[0];
        chk.matches = t.kind == Kind::Ordinary && are_sim_with(t, &expected, Mode::Scaled).is_some();
        let (u, tag) = canonical(t);
        chk.canonical_tag = tag;
        let mn = u.mn_by_length();
        chk.printed_is_canonical = tag.is_some_and(|g| {
            crate::triads::standard_shape(&g).ok().zip(crate::triads::standard_shape(&inst.tag).ok()).is_some_and(|(a, b)| are_equiv_with(&a, &b, Mode::Scaled).is_some())
        }) && mn.as_ref().is_some_and(|v| v.iter().zip(&inst.mn).all(|((a, b), (x, y))| *a == qi(*x) && *b == qi(*y)) && v.len() == inst.mn.len());
        chk.canonical_mn = mn.map(|v| v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect());
        Ok(())
    };
    if let Err(e) = run(&mut chk) {
        chk.error = Some(e.to_string());
    }
    chk
}

/// Checks every entry with parameters at most `max_param`.
pub fn verify_table2(max_param: i64) -> Result<Vec<Table2Check>> {
    Ok(table2_instances(max_param)?.iter().map(check_instance).collect())
}

/// JSON form of a double Satake diagram (0-based nodes, Bourbaki numbering):
/// `{"delta_label": "E6", "black1": [...], "p1": [[i,j],...], "black2": [...], "p2": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramJson {
    pub delta_label: TypeLabel,
    #[serde(default)]
    pub black1: Vec<usize>,
    #[serde(default)]
    pub p1: Vec<[usize; 2]>,
    #[serde(default)]
    pub black2: Vec<usize>,
    #[serde(default)]
    pub p2: Vec<[usize; 2]>,
}

impl DiagramJson {
    pub fn to_diagram(&self) -> Result<DoubleSatakeDiagram> {
        let delta = Arc::new(RootSystem::build(self.delta_label)?);
        let r = delta.rank();
        let pairs = |p: &[[usize; 2]]| -> Vec<(usize, usize)> { p.iter().map(|a| (a[0], a[1])).collect() };
        let s1 = SatakeDiagram::new(r, &self.black1, &pairs(&self.p1))?;
        let s2 = SatakeDiagram::new(r, &self.black2, &pairs(&self.p2))?;
        DoubleSatakeDiagram::new(delta, s1, s2, None)
    }
}
