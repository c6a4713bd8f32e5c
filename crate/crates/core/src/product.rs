//! σ-actions: the commuting pair `θ1(x,y) = (y,x)`, `θ2(x,y) = (σ(y),σ(x))` on `U × U`.
//!
//! The root system of `U × U` is `Δ = {(α,0), (0,α)}` on the doubled space, with
//! fundamental system `{(α,0), (0,−α) : α ∈ Π̄}`. Neither Satake diagram has black
//! nodes; `p1` swaps `(α,0) ↔ (0,−α)` and `p2` sends `(α,0) ↦ (0,−σ(α))`. The
//! painting of a Vogan diagram seeds the compactness of the imaginary simple roots.

use crate::error::{Error, Result};
use crate::rootsys::{RootSystem, TypeLabel};
use crate::satake::{analyze, DoubleSatakeDiagram, Prepared, SatakeDiagram, SatakeResult};
use crate::triads::{are_sim_with, Kind, Mode, MultSymmetricTriad};
use crate::vector::{qi, RationalVector};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Vogan diagram of `(U, σ)`: the σ-permutation of `Π̄` and the painted (noncompact)
/// imaginary simple roots. Node indices are 0-based, Bourbaki order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct VoganDiagram {
    pub label: TypeLabel,
    pub arrows: Vec<usize>,
    pub painted: Vec<bool>,
}

/// JSON form: `{"arrows": [[i,j],...], "painted": [i,...]}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VoganJson {
    #[serde(default)]
    pub arrows: Vec<[usize; 2]>,
    #[serde(default)]
    pub painted: Vec<usize>,
}

impl VoganDiagram {
    /// Checks that the arrows form an involutive diagram automorphism and that only
    /// fixed nodes are painted.
    pub fn new(label: TypeLabel, arrows: &[(usize, usize)], painted: &[usize]) -> Result<Self> {
        let rs = RootSystem::build(label)?;
        let r = rs.rank();
        let mut p: Vec<usize> = (0..r).collect();
        for &(i, j) in arrows {
            if i >= r || j >= r || i == j || p[i] != i || p[j] != j {
                return Err(Error::InvalidInput(format!("bad arrow {i}↔{j}")));
            }
            p[i] = j;
            p[j] = i;
        }
        if !is_diagram_automorphism(&rs, &p) {
            return Err(Error::InvalidInput("arrows are not a diagram automorphism".into()));
        }
        let mut paint = vec![false; r];
        for &k in painted {
            if k >= r || p[k] != k {
                return Err(Error::InvalidInput(format!("node {k} cannot be painted")));
            }
            paint[k] = true;
        }
        Ok(VoganDiagram { label, arrows: p, painted: paint })
    }

    pub fn from_json(label: TypeLabel, j: &VoganJson) -> Result<Self> {
        let arrows: Vec<(usize, usize)> = j.arrows.iter().map(|a| (a[0], a[1])).collect();
        VoganDiagram::new(label, &arrows, &j.painted)
    }

    pub fn to_json(&self) -> VoganJson {
        VoganJson {
            arrows: (0..self.rank()).filter(|&i| self.arrows[i] > i).map(|i| [i, self.arrows[i]]).collect(),
            painted: (0..self.rank()).filter(|&i| self.painted[i]).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.arrows.len()
    }

    pub fn has_arrows(&self) -> bool {
        self.arrows.iter().enumerate().any(|(i, &j)| i != j)
    }

    /// `rank K_σ`: fixed nodes plus half the swapped ones.
    pub fn rank_k(&self) -> usize {
        let fixed = (0..self.rank()).filter(|&i| self.arrows[i] == i).count();
        fixed + (self.rank() - fixed) / 2
    }

    /// Image under a diagram automorphism `g` of `Π̄`.
    pub fn transform(&self, g: &[usize]) -> VoganDiagram {
        let r = self.rank();
        let mut arrows = vec![0; r];
        let mut painted = vec![false; r];
        for i in 0..r {
            arrows[g[i]] = g[self.arrows[i]];
            painted[g[i]] = self.painted[i];
        }
        VoganDiagram { label: self.label, arrows, painted }
    }
}

fn is_diagram_automorphism(rs: &RootSystem, g: &[usize]) -> bool {
    let r = rs.rank();
    let s = |k: usize| rs.simple_index(k);
    (0..r).all(|i| (0..r).all(|j| rs.cartan(s(i), s(j)) == rs.cartan(s(g[i]), s(g[j]))))
}

/// All automorphisms of the Dynkin diagram (permutations of the simple roots preserving
/// the Cartan matrix), identity first.
pub fn diagram_automorphisms(rs: &RootSystem) -> Vec<Vec<usize>> {
    fn go(rs: &RootSystem, img: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let k = img.len();
        let r = rs.rank();
        if k == r {
            out.push(img.clone());
            return;
        }
        let s = |x: usize| rs.simple_index(x);
        for j in 0..r {
            if used[j] || rs.cartan(s(k), s(k)) != rs.cartan(s(j), s(j)) {
                continue;
            }
            if (0..k).all(|m| rs.cartan(s(k), s(m)) == rs.cartan(s(j), s(img[m])) && rs.cartan(s(m), s(k)) == rs.cartan(s(img[m]), s(j))) {
                used[j] = true;
                img.push(j);
                go(rs, img, used, out);
                img.pop();
                used[j] = false;
            }
        }
    }
    let mut out = vec![];
    go(rs, &mut vec![], &mut vec![false; rs.rank()], &mut out);
    out
}

/// Involutive diagram automorphisms of `Π̄`, identity first.
pub fn diagram_involutions(rs: &RootSystem) -> Vec<Vec<usize>> {
    diagram_automorphisms(rs).into_iter().filter(|g| (0..g.len()).all(|i| g[g[i]] == i)).collect()
}

/// Every Vogan diagram on `label`: each involutive diagram automorphism with each
/// painting of its fixed nodes.
pub fn all_vogan_diagrams(label: TypeLabel) -> Result<Vec<VoganDiagram>> {
    let rs = RootSystem::build(label)?;
    let mut out = vec![];
    for g in diagram_involutions(&rs) {
        let fixed: Vec<usize> = (0..g.len()).filter(|&i| g[i] == i).collect();
        for bits in 0..1u64 << fixed.len() {
            let mut painted = vec![false; g.len()];
            for (b, &k) in fixed.iter().enumerate() {
                painted[k] = bits >> b & 1 == 1;
            }
            out.push(VoganDiagram { label, arrows: g.clone(), painted });
        }
    }
    Ok(out)
}

/// Double Satake diagram of `(U × U, θ1, θ2)`. Simple root `k` is `(α_k, 0)` and
/// `r + k` is `(0, −α_k)`.
pub fn double_from_vogan(u_label: TypeLabel, v: &VoganDiagram) -> Result<DoubleSatakeDiagram> {
    if v.label != u_label {
        return Err(Error::InvalidInput(format!("Vogan diagram is on {}, not {u_label}", v.label)));
    }
    let bar = RootSystem::build(u_label)?;
    let r = bar.rank();
    if v.rank() != r || v.painted.len() != r || !is_diagram_automorphism(&bar, &v.arrows) || (0..r).any(|i| v.arrows[v.arrows[i]] != i || (v.painted[i] && v.arrows[i] != i)) {
        return Err(Error::InvalidInput("inconsistent Vogan data".into()));
    }
    let zero = RationalVector::zero(bar.dim());
    let mut roots = vec![];
    for a in bar.roots() {
        roots.push(a.concat(&zero));
        roots.push(zero.concat(a));
    }
    let mut simple: Vec<RationalVector> = bar.simple().iter().map(|a| a.concat(&zero)).collect();
    simple.extend(bar.simple().iter().map(|a| zero.concat(&-a)));
    let delta = Arc::new(RootSystem::with_simple(2 * bar.dim(), roots, simple)?);
    let p1: Vec<(usize, usize)> = (0..r).map(|k| (k, r + k)).collect();
    let p2: Vec<(usize, usize)> = (0..r).map(|k| (k, r + v.arrows[k])).collect();
    let s1 = SatakeDiagram::new(2 * r, &[], &p1)?;
    let s2 = SatakeDiagram::new(2 * r, &[], &p2)?;
    DoubleSatakeDiagram::new(delta, s1, s2, Some(format!("{u_label}×{u_label}")))
}

/// Whether `(S1, S2) ∼ (S1, S1)`: some diagram automorphism `ψ` of `Π` has
/// `ψ p2 ψ⁻¹ = p1` and `ψ p1 ψ⁻¹ = p1`.
pub fn is_inner(d: &DoubleSatakeDiagram) -> bool {
    let p1 = &d.s1.arrows;
    let p2 = &d.s2.arrows;
    let conj = |g: &[usize], p: &[usize]| -> Vec<usize> {
        let mut out = vec![0; p.len()];
        for i in 0..p.len() {
            out[g[i]] = g[p[i]];
        }
        out
    };
    diagram_automorphisms(&d.delta).iter().any(|g| conj(g, p2) == *p1 && conj(g, p1) == *p1)
}

/// Compactness seeds for the imaginary simple roots of the product: `(α,0)` and
/// `(0,−α)` are noncompact exactly when `α` is painted.
fn seeds(d: &DoubleSatakeDiagram, v: &VoganDiagram) -> Vec<(usize, bool)> {
    let r = v.rank();
    (0..r).filter(|&k| v.arrows[k] == k).flat_map(|k| [(d.delta.simple_index(k), v.painted[k]), (d.delta.simple_index(r + k), v.painted[k])]).collect()
}

/// Satake pipeline on the product, seeded by the painting.
pub fn sigma_action_result(u_label: TypeLabel, v: &VoganDiagram) -> Result<(DoubleSatakeDiagram, SatakeResult)> {
    let d = double_from_vogan(u_label, v)?;
    let res = analyze(&d, &seeds(&d, v))?;
    Ok((d, res))
}

/// Triad of the σ-action. For outer `σ` the multiplicities are checked to be `2` on
/// `Σ` and on `W`; for inner `σ` the triad has `Σ ∩ W = ∅`.
pub fn sigma_action_triad(u_label: TypeLabel, v: &VoganDiagram) -> Result<MultSymmetricTriad> {
    let (_, res) = sigma_action_result(u_label, v)?;
    if !res.consistent {
        return Err(Error::Internal("compactness labelings of the σ-action disagree".into()));
    }
    let t = res.triads.into_iter().next().expect("analyze returns at least one triad");
    if v.has_arrows() {
        let two = qi(2);
        if t.kind != Kind::Ordinary || (0..t.len()).any(|i| (t.sigma[i] && t.m[i] != two) || (t.w[i] && t.n[i] != two)) {
            return Err(Error::Internal("outer σ-action without m = n = 2".into()));
        }
    } else if t.kind != Kind::TypeIv {
        return Err(Error::Internal("inner σ-action with Σ ∩ W ≠ ∅".into()));
    }
    Ok(t)
}

/// How a reconstructed painting was matched against the given triad.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchKind {
    /// Identical `Σ̃`, `Σ`, `W`, `m`, `n`.
    Exact,
    /// Only up to `~`.
    Similar,
}

#[derive(Clone, Debug, Serialize)]
pub struct Reconstruction {
    pub vogan: VoganDiagram,
    /// Paintings reproducing the triad, one per diagram-automorphism class.
    pub candidates: Vec<VoganDiagram>,
    pub matched: MatchKind,
    /// More than one class of paintings reproduces the triad.
    pub ambiguous: bool,
    pub rank_k: usize,
}

/// Arrows from the difference of `p1` and `p2`; painting by trying every assignment on
/// the arrow-fixed nodes and keeping those whose triad is `t`.
pub fn vogan_reconstruction(d: &DoubleSatakeDiagram, t: &MultSymmetricTriad) -> Result<Reconstruction> {
    let n = d.s1.rank();
    if n % 2 != 0 || (0..n / 2).any(|k| d.s1.arrows[k] != n / 2 + k) || d.s1.black.iter().chain(&d.s2.black).any(|&b| b) {
        return Err(Error::InvalidInput("not the double Satake diagram of a σ-action".into()));
    }
    let r = n / 2;
    let bar_simple: Vec<RationalVector> = (0..r).map(|k| RationalVector::new(d.delta.simple()[k].coords()[..d.delta.dim() / 2].to_vec())).collect();
    let label = identify_bar(&bar_simple)?;
    let mut arrows = vec![0; r];
    for k in 0..r {
        arrows[k] = d.s2.arrows[k].checked_sub(r).ok_or_else(|| Error::InvalidInput("p2 does not cross the factors".into()))?;
    }
    let base = VoganDiagram { label, arrows, painted: vec![false; r] };
    let bar = RootSystem::build(label)?;
    let automs: Vec<Vec<usize>> = diagram_automorphisms(&bar).into_iter().filter(|g| (0..r).all(|i| g[base.arrows[i]] == base.arrows[g[i]])).collect();
    let fixed: Vec<usize> = (0..r).filter(|&k| base.arrows[k] == k).collect();
    let prep = Prepared::new(d)?;
    let mut exact = vec![];
    let mut similar = vec![];
    let same = |u: &MultSymmetricTriad| u.sigma_tilde.roots() == t.sigma_tilde.roots() && u.sigma == t.sigma && u.w == t.w && u.m == t.m && u.n == t.n;
    let mut paintings = vec![];
    for bits in 0..1u64 << fixed.len() {
        let mut v = base.clone();
        for (b, &k) in fixed.iter().enumerate() {
            v.painted[k] = bits >> b & 1 == 1;
        }
        let Ok(raw) = prep.raw_triads(&seeds(d, &v)) else { continue };
        if raw.iter().any(same) {
            exact.push(v.clone());
        }
        paintings.push(v);
    }
    if exact.is_empty() {
        for v in paintings {
            let Ok(res) = prep.analyze(&seeds(d, &v)) else { continue };
            if res.triads.iter().any(|u| u.kind == t.kind && are_sim_with(u, t, Mode::Scaled).is_some()) {
                similar.push(v);
            }
        }
    }
    let (found, matched) = if exact.is_empty() { (similar, MatchKind::Similar) } else { (exact, MatchKind::Exact) };
    let mut candidates: Vec<VoganDiagram> = vec![];
    for v in found {
        if !candidates.iter().any(|c| automs.iter().any(|g| c.transform(g) == v)) {
            candidates.push(v);
        }
    }
    let vogan = candidates.first().cloned().ok_or_else(|| Error::InvalidInput("no painting reproduces the triad".into()))?;
    Ok(Reconstruction { rank_k: vogan.rank_k(), ambiguous: candidates.len() > 1, vogan, candidates, matched })
}

/// Type of `Π̄` from its simple roots, matched against the standard realizations.
fn identify_bar(simple: &[RationalVector]) -> Result<TypeLabel> {
    let r = simple.len();
    let dim = simple.first().map_or(0, |v| v.dim());
    for fam in ["A", "B", "C", "D", "E", "F", "G"] {
        let Ok(label) = format!("{fam}{r}").parse::<TypeLabel>() else { continue };
        let Ok(rs) = RootSystem::build(label) else { continue };
        if rs.dim() == dim && rs.simple() == simple {
            return Ok(label);
        }
    }
    Err(Error::InvalidInput("first factor is not a standard fundamental system".into()))
}
