//! Symmetric triads with multiplicities: axioms, the lattice `Γ`, twists, the two
//! equivalence relations, the standard catalog and classification under `~`.

use crate::error::{Error, Result};
use crate::iso;
use crate::rootsys::{is_root_system, Family, Isomorphism, RootSystem, RootSystemCheck, TypeLabel};
use crate::vector::{qi, RationalVector, Q};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Ordinary,
    TypeIv,
}

/// Whether isomorphism witnesses must be isometries or may rescale each component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    #[default]
    Strict,
    Scaled,
}

/// `(Σ̃, Σ, W; m, n)`. Membership and multiplicities are indexed by the root order of `sigma_tilde`.
#[derive(Clone, Debug)]
pub struct MultSymmetricTriad {
    pub sigma_tilde: Arc<RootSystem>,
    pub sigma: Vec<bool>,
    pub w: Vec<bool>,
    pub m: Vec<Q>,
    pub n: Vec<Q>,
    pub kind: Kind,
}

impl MultSymmetricTriad {
    /// Checks the data invariants (coverage, supports, symmetry, and the kind's overlap rule).
    pub fn new(sigma_tilde: Arc<RootSystem>, sigma: Vec<bool>, w: Vec<bool>, m: Vec<Q>, n: Vec<Q>, kind: Kind) -> Result<Self> {
        let len = sigma_tilde.len();
        if sigma.len() != len || w.len() != len || m.len() != len || n.len() != len {
            return Err(Error::InvalidInput("triad data has the wrong length".into()));
        }
        let t = MultSymmetricTriad { sigma_tilde, sigma, w, m, n, kind };
        for i in 0..len {
            if !t.sigma[i] && !t.w[i] {
                return Err(Error::AxiomViolation(format!("root {} lies in neither Σ nor W", t.root(i))));
            }
            if t.m[i].is_negative() || t.n[i].is_negative() {
                return Err(Error::AxiomViolation("negative multiplicity".into()));
            }
            if t.m[i].is_positive() != t.sigma[i] || t.n[i].is_positive() != t.w[i] {
                return Err(Error::AxiomViolation(format!("multiplicity support differs from Σ/W at {}", t.root(i))));
            }
            let j = t.sigma_tilde.neg(i);
            if t.m[i] != t.m[j] || t.n[i] != t.n[j] || t.sigma[i] != t.sigma[j] || t.w[i] != t.w[j] {
                return Err(Error::AxiomViolation(format!("not symmetric under negation at {}", t.root(i))));
            }
        }
        let overlap = (0..len).any(|i| t.sigma[i] && t.w[i]);
        match kind {
            Kind::Ordinary if !overlap => return Err(Error::AxiomViolation("Σ∩W is empty".into())),
            Kind::TypeIv if overlap => return Err(Error::AxiomViolation("Σ∩W is not empty".into())),
            _ => {}
        }
        Ok(t)
    }

    /// Triad without meaningful multiplicities: `m = 1` on Σ and `n = 1` on W.
    pub fn from_shape(sigma_tilde: Arc<RootSystem>, sigma: Vec<bool>, w: Vec<bool>, kind: Kind) -> Result<Self> {
        let m = sigma.iter().map(|&b| qi(b as i64)).collect();
        let n = w.iter().map(|&b| qi(b as i64)).collect();
        MultSymmetricTriad::new(sigma_tilde, sigma, w, m, n, kind)
    }

    pub fn root(&self, i: usize) -> &RationalVector {
        self.sigma_tilde.root(i)
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    pub fn sigma_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.sigma[i]).collect()
    }

    pub fn w_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.w[i]).collect()
    }

    pub fn cap_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.sigma[i] && self.w[i]).collect()
    }

    /// Same `(Σ̃, Σ, W)`, multiplicities forgotten.
    pub fn shape(&self) -> MultSymmetricTriad {
        MultSymmetricTriad::from_shape(self.sigma_tilde.clone(), self.sigma.clone(), self.w.clone(), self.kind).expect("shape of a valid triad")
    }

    fn colors(&self) -> Vec<u64> {
        (0..self.len())
            .map(|i| {
                let mut s = DefaultHasher::new();
                (self.sigma[i], self.w[i], &self.m[i], &self.n[i]).hash(&mut s);
                s.finish()
            })
            .collect()
    }

    /// `{(|α|², m+n)}` as a sorted multiset: invariant under `~`.
    pub fn total_multiplicity_profile(&self) -> Vec<(Q, Q)> {
        let mut v: Vec<(Q, Q)> = (0..self.len()).map(|i| (self.root(i).norm2(), &self.m[i] + &self.n[i])).collect();
        v.sort();
        v
    }

    /// Ordering key used to pick canonical forms: for each length class (shortest first)
    /// the sorted list of `(n, m)` values.
    pub fn multiplicity_key(&self) -> Vec<Vec<(Q, Q)>> {
        let (_, class) = self.sigma_tilde.length_classes();
        let k = class.iter().copied().max().map_or(0, |x| x + 1);
        let mut out = vec![vec![]; k];
        for i in 0..self.len() {
            out[class[i]].push((self.n[i].clone(), self.m[i].clone()));
        }
        for v in &mut out {
            v.sort();
        }
        out
    }

    /// `(m, n)` per length class, shortest first, when constant on each class.
    pub fn mn_by_length(&self) -> Option<Vec<(Q, Q)>> {
        let (_, class) = self.sigma_tilde.length_classes();
        let mut out: Vec<Option<(Q, Q)>> = vec![None; class.iter().copied().max().map_or(0, |x| x + 1)];
        for i in 0..self.len() {
            let v = (self.m[i].clone(), self.n[i].clone());
            match &out[class[i]] {
                None => out[class[i]] = Some(v),
                Some(x) if *x == v => {}
                Some(_) => return None,
            }
        }
        out.into_iter().collect()
    }
}

/// Pass/fail of one numbered condition with an optional witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionResult {
    pub condition: usize,
    pub holds: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub conditions: Vec<ConditionResult>,
}

impl AxiomReport {
    pub fn passes(&self) -> bool {
        self.conditions.iter().all(|c| c.holds)
    }

    pub fn failed(&self) -> Vec<usize> {
        self.conditions.iter().filter(|c| !c.holds).map(|c| c.condition).collect()
    }
}

fn cond(condition: usize, failure: Option<String>) -> ConditionResult {
    ConditionResult { condition, holds: failure.is_none(), witness: failure }
}

/// Evaluates the six symmetric-triad conditions independently.
pub fn verify_triad_axioms(st: &RootSystem, sigma: &[bool], w: &[bool]) -> AxiomReport {
    let len = st.len();
    let s_idx: Vec<usize> = (0..len).filter(|&i| sigma[i]).collect();
    let w_idx: Vec<usize> = (0..len).filter(|&i| w[i]).collect();
    let c1 = if st.is_irreducible() { None } else { Some(format!("Σ̃ has components {:?}", st.label().iter().map(|l| l.to_string()).collect::<Vec<_>>())) };
    let svecs: Vec<RationalVector> = s_idx.iter().map(|&i| st.root(i).clone()).collect();
    let c2 = match is_root_system(&svecs) {
        RootSystemCheck::No(v) => Some(v.to_string()),
        _ => None,
    };
    let c3 = if w_idx.is_empty() {
        Some("W is empty".to_string())
    } else if let Some(&i) = w_idx.iter().find(|&&i| !w[st.neg(i)]) {
        Some(format!("{} ∈ W but its negative is not", st.root(i)))
    } else {
        (0..len).find(|&i| !sigma[i] && !w[i]).map(|i| format!("{} ∉ Σ∪W", st.root(i)))
    };
    let cap: Vec<usize> = (0..len).filter(|&i| sigma[i] && w[i]).collect();
    let c4 = if cap.is_empty() {
        Some("Σ∩W is empty".to_string())
    } else {
        let l = cap.iter().map(|&i| st.norm_scaled(i)).max().unwrap();
        (0..len)
            .find(|&i| (st.norm_scaled(i) <= l) != (sigma[i] && w[i]))
            .map(|i| format!("{} violates Σ∩W = {{|α| ≤ l}}", st.root(i)))
    };
    let parity_rule = |from_sigma: bool| -> Option<String> {
        for &a in &w_idx {
            for lam in 0..len {
                let in_source = if from_sigma { sigma[lam] && !w[lam] } else { w[lam] && !sigma[lam] };
                if !in_source {
                    continue;
                }
                let odd = st.cartan(lam, a).rem_euclid(2) == 1;
                let img = st.reflect_index(a, lam);
                let target = if from_sigma { w[img] && !sigma[img] } else { sigma[img] && !w[img] };
                if odd != target {
                    return Some(format!("α = {}, λ = {}", st.root(a), st.root(lam)));
                }
            }
        }
        None
    };
    AxiomReport {
        conditions: vec![cond(1, c1), cond(2, c2), cond(3, c3), cond(4, c4), cond(5, parity_rule(true)), cond(6, parity_rule(false))],
    }
}

/// Evaluates the four multiplicity conditions. Weyl invariance is checked on reflection
/// generators, which suffices for invariance under the whole group.
pub fn verify_multiplicity_axioms(t: &MultSymmetricTriad) -> AxiomReport {
    let st = &t.sigma_tilde;
    let len = t.len();
    let mut c1 = None;
    for i in 0..len {
        let j = st.neg(i);
        if t.m[i] != t.m[j] || t.n[i] != t.n[j] {
            c1 = Some(format!("not even at {}", t.root(i)));
            break;
        }
        if t.m[i].is_negative() || t.n[i].is_negative() || t.m[i].is_positive() != t.sigma[i] || t.n[i].is_positive() != t.w[i] {
            c1 = Some(format!("support mismatch at {}", t.root(i)));
            break;
        }
    }
    let mut c2 = None;
    'c2: for b in t.sigma_indices() {
        for i in 0..len {
            let j = st.reflect_index(b, i);
            if (t.sigma[i] && t.m[i] != t.m[j]) || (t.w[i] && t.n[i] != t.n[j]) {
                c2 = Some(format!("s_{} moves {} to {}", t.root(b), t.root(i), t.root(j)));
                break 'c2;
            }
        }
    }
    let mut c3 = None;
    'c3: for b in 0..len {
        for i in 0..len {
            let j = st.reflect_index(b, i);
            if &t.m[i] + &t.n[i] != &t.m[j] + &t.n[j] {
                c3 = Some(format!("s_{} moves {} to {}", t.root(b), t.root(i), t.root(j)));
                break 'c3;
            }
        }
    }
    let mut c4 = None;
    'c4: for lam in t.cap_indices() {
        for a in t.w_indices() {
            let j = st.reflect_index(a, lam);
            let even = st.cartan(lam, a).rem_euclid(2) == 0;
            let ok = if even { t.m[lam] == t.m[j] } else { t.m[lam] == t.n[j] };
            if !ok {
                c4 = Some(format!("λ = {}, α = {}", t.root(lam), t.root(a)));
                break 'c4;
            }
        }
    }
    AxiomReport { conditions: vec![cond(1, c1), cond(2, c2), cond(3, c3), cond(4, c4)] }
}

/// `Y = (π/2) Σ n_i α^i` with `<α^i, α_j> = δ_ij`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GammaElement {
    pub coeffs: Vec<i64>,
}

impl GammaElement {
    pub fn zero(rank: usize) -> Self {
        GammaElement { coeffs: vec![0; rank] }
    }

    /// `(π/2) α^i` (zero-based `i`).
    pub fn basis(rank: usize, i: usize) -> Self {
        let mut c = vec![0; rank];
        c[i] = 1;
        GammaElement { coeffs: c }
    }

    /// All `Y` with coefficients in `{0,1}`, in lexicographic order.
    pub fn all_parities(rank: usize) -> Vec<GammaElement> {
        (0u32..1 << rank)
            .map(|mask| GammaElement { coeffs: (0..rank).map(|i| ((mask >> (rank - 1 - i)) & 1) as i64).collect() })
            .collect()
    }
}

impl fmt::Display for GammaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

/// `<α, 2Y>/π` for root `alpha` of `st`.
pub fn gamma_pairing(st: &RootSystem, y: &GammaElement, alpha: usize) -> i64 {
    st.coeff(alpha).iter().zip(&y.coeffs).map(|(c, n)| c * n).sum()
}

/// Swaps Σ−W with W−Σ and `m` with `n` on the roots with odd pairing.
pub fn twist(t: &MultSymmetricTriad, y: &GammaElement) -> Result<MultSymmetricTriad> {
    let st = &t.sigma_tilde;
    if y.coeffs.len() != st.rank() {
        return Err(Error::InvalidInput(format!("Y has {} coefficients, rank is {}", y.coeffs.len(), st.rank())));
    }
    let mut u = t.clone();
    for i in 0..t.len() {
        if gamma_pairing(st, y, i).rem_euclid(2) == 1 {
            std::mem::swap(&mut u.m[i], &mut u.n[i]);
            if t.sigma[i] != t.w[i] {
                u.sigma[i] = t.w[i];
                u.w[i] = t.sigma[i];
            }
        }
    }
    Ok(u)
}

/// `t ≡ u` (scaled isomorphisms allowed).
pub fn are_equiv(t: &MultSymmetricTriad, u: &MultSymmetricTriad) -> Option<Isomorphism> {
    are_equiv_with(t, u, Mode::Scaled)
}

pub fn are_equiv_with(t: &MultSymmetricTriad, u: &MultSymmetricTriad, mode: Mode) -> Option<Isomorphism> {
    iso::find(&t.sigma_tilde, &t.colors(), &u.sigma_tilde, &u.colors(), mode == Mode::Strict)
}

/// Checks an `≡` witness directly.
pub fn check_equiv_witness(t: &MultSymmetricTriad, u: &MultSymmetricTriad, f: &Isomorphism) -> bool {
    if !f.verify(&t.sigma_tilde, &u.sigma_tilde) {
        return false;
    }
    (0..t.len()).all(|i| {
        let j = f.root_map[i];
        t.sigma[i] == u.sigma[j] && t.w[i] == u.w[j] && t.m[i] == u.m[j] && t.n[i] == u.n[j]
    })
}

/// `t ~ u` with isometric witnesses.
pub fn are_sim(t: &MultSymmetricTriad, u: &MultSymmetricTriad) -> Option<(Isomorphism, GammaElement)> {
    are_sim_with(t, u, Mode::Strict)
}

pub fn are_sim_with(t: &MultSymmetricTriad, u: &MultSymmetricTriad, mode: Mode) -> Option<(Isomorphism, GammaElement)> {
    if t.len() != u.len() || t.sigma_tilde.rank() != u.sigma_tilde.rank() {
        return None;
    }
    if Arc::ptr_eq(&t.sigma_tilde, &u.sigma_tilde) {
        // same realization: try the identity map first
        for y in GammaElement::all_parities(t.sigma_tilde.rank()) {
            let tw = twist(t, &y).expect("rank matches");
            if tw.sigma == u.sigma && tw.w == u.w && tw.m == u.m && tw.n == u.n {
                return Some((identity_isomorphism(&t.sigma_tilde), y));
            }
        }
    }
    let strict = mode == Mode::Strict;
    let ru = iso::refine(&u.sigma_tilde, &u.colors(), strict);
    let mut su = ru.clone();
    su.sort_unstable();
    for y in GammaElement::all_parities(t.sigma_tilde.rank()) {
        let tw = twist(t, &y).expect("rank matches");
        let rt = iso::refine(&tw.sigma_tilde, &tw.colors(), strict);
        let mut st = rt.clone();
        st.sort_unstable();
        if st != su {
            continue;
        }
        if let Some(f) = iso::find_refined(&tw.sigma_tilde, &rt, &u.sigma_tilde, &ru) {
            return Some((f, y));
        }
    }
    None
}

fn identity_isomorphism(st: &RootSystem) -> Isomorphism {
    let r = st.rank();
    Isomorphism { simple_images: (0..r).map(|k| st.simple_index(k)).collect(), root_map: (0..st.len()).collect(), scales: vec![qi(1); r] }
}

/// Checks an `~` witness `(f, Y)` directly against the defining relations.
pub fn check_sim_witness(t: &MultSymmetricTriad, u: &MultSymmetricTriad, f: &Isomorphism, y: &GammaElement) -> bool {
    if !f.verify(&t.sigma_tilde, &u.sigma_tilde) {
        return false;
    }
    let st = &t.sigma_tilde;
    (0..t.len()).all(|i| {
        let j = f.root_map[i];
        let odd = gamma_pairing(st, y, i).rem_euclid(2) == 1;
        let s_only = t.sigma[i] && !t.w[i];
        let w_only = t.w[i] && !t.sigma[i];
        let (us, uw) = (u.sigma[j] && !u.w[j], u.w[j] && !u.sigma[j]);
        let membership = if odd { (s_only == uw) && (w_only == us) } else { (s_only == us) && (w_only == uw) };
        let mult = if odd { t.m[i] == u.n[j] && t.n[i] == u.m[j] } else { t.m[i] == u.m[j] && t.n[i] == u.n[j] };
        membership && mult
    })
}

/// Pairwise non-`≡` representatives of the `~`-class of `t`, in order of first appearance
/// over `Y ∈ {0,1}^r`.
pub fn sim_class(t: &MultSymmetricTriad) -> Vec<MultSymmetricTriad> {
    let mut reps: Vec<(Vec<u64>, MultSymmetricTriad)> = vec![];
    for y in GammaElement::all_parities(t.sigma_tilde.rank()) {
        let tw = twist(t, &y).expect("rank matches");
        let r = iso::refine(&tw.sigma_tilde, &tw.colors(), false);
        let mut sig = r.clone();
        sig.sort_unstable();
        let dup = reps.iter().any(|(s, u)| {
            let mut ss = s.clone();
            ss.sort_unstable();
            ss == sig && iso::find_refined(&tw.sigma_tilde, &r, &u.sigma_tilde, s).is_some()
        });
        if !dup {
            reps.push((r, tw));
        }
    }
    reps.into_iter().map(|(_, t)| t).collect()
}

/// Names of the catalog triads.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TagKind {
    IB,
    IC,
    IBCA1,
    IBCB,
    IF4,
    IIBC,
    IIIA,
    IIIB,
    IIIC,
    IIIBC,
    IIID,
    IIIE,
    IIIF4,
    IIIG2,
    IpC,
    IpF4,
    IpB,
    IpBCA1,
    IVpA,
    IVB,
    IVpB,
    IVC,
    IVpC,
    IVD,
    IVpDD,
    IVpDA,
    IVBC,
    IVE6,
    IVpE6,
    IVE7AD,
    IVE7A,
    IVpE7,
    IVE8D,
    IVE8AE,
    IVF4AC,
    IVF4B,
    IVG2,
}

pub const ALL_TAG_KINDS: [TagKind; 37] = {
    use TagKind::*;
    [
        IB, IC, IBCA1, IBCB, IF4, IIBC, IIIA, IIIB, IIIC, IIIBC, IIID, IIIE, IIIF4, IIIG2, IpC, IpF4, IpB, IpBCA1, IVpA, IVB, IVpB, IVC, IVpC, IVD,
        IVpDD, IVpDA, IVBC, IVE6, IVpE6, IVE7AD, IVE7A, IVpE7, IVE8D, IVE8AE, IVF4AC, IVF4B, IVG2,
    ]
};

impl TagKind {
    /// Name with `{r}` standing for the rank.
    pub fn template(self) -> &'static str {
        use TagKind::*;
        match self {
            IB => "I-B{r}",
            IC => "I-C{r}",
            IBCA1 => "I-BC{r}-A1^{r}",
            IBCB => "I-BC{r}-B{r}",
            IF4 => "I-F4",
            IIBC => "II-BC{r}",
            IIIA => "III-A{r}",
            IIIB => "III-B{r}",
            IIIC => "III-C{r}",
            IIIBC => "III-BC{r}",
            IIID => "III-D{r}",
            IIIE => "III-E{r}",
            IIIF4 => "III-F4",
            IIIG2 => "III-G2",
            IpC => "I'-C{r}",
            IpF4 => "I'-F4",
            IpB => "I'-B{r}",
            IpBCA1 => "I'-BC{r}-A1^{r}",
            IVpA => "IV'-A{r}",
            IVB => "IV-B{r}",
            IVpB => "IV'-B{r}",
            IVC => "IV-C{r}",
            IVpC => "IV'-C{r}",
            IVD => "IV-D{r}",
            IVpDD => "IV'-D{r}-D",
            IVpDA => "IV'-D{r}-A",
            IVBC => "IV-BC{r}",
            IVE6 => "IV-E6",
            IVpE6 => "IV'-E6",
            IVE7AD => "IV-E7-AD",
            IVE7A => "IV-E7-A",
            IVpE7 => "IV'-E7",
            IVE8D => "IV-E8-D",
            IVE8AE => "IV-E8-AE",
            IVF4AC => "IV-F4-AC",
            IVF4B => "IV-F4-B",
            IVG2 => "IV-G2",
        }
    }

    pub fn family(self) -> Family {
        use TagKind::*;
        match self {
            IB | IIIB | IpB | IVB | IVpB => Family::B,
            IC | IIIC | IpC | IVC | IVpC => Family::C,
            IBCA1 | IBCB | IIBC | IIIBC | IpBCA1 | IVBC => Family::BC,
            IF4 | IIIF4 | IpF4 | IVF4AC | IVF4B => Family::F,
            IIIA | IVpA => Family::A,
            IIID | IVD | IVpDD | IVpDA => Family::D,
            IIIE | IVE6 | IVpE6 | IVE7AD | IVE7A | IVpE7 | IVE8D | IVE8AE => Family::E,
            IIIG2 | IVG2 => Family::G,
        }
    }

    /// Rank when the name fixes it.
    pub fn fixed_rank(self) -> Option<usize> {
        use TagKind::*;
        match self {
            IF4 | IIIF4 | IpF4 | IVF4AC | IVF4B => Some(4),
            IIIG2 | IVG2 => Some(2),
            IVE6 | IVpE6 => Some(6),
            IVE7AD | IVE7A | IVpE7 => Some(7),
            IVE8D | IVE8AE => Some(8),
            _ => None,
        }
    }

    pub fn has_param(self) -> bool {
        use TagKind::*;
        matches!(self, IpB | IpBCA1 | IVpA | IVB | IVC | IVD | IVBC)
    }

    pub fn is_primed(self) -> bool {
        self.template().contains('\'')
    }

    pub fn is_type_iv(self) -> bool {
        self.template().starts_with("IV")
    }
}

/// A catalog name with its rank and optional `s`/`l` parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriadTag {
    pub kind: TagKind,
    pub rank: usize,
    pub param: Option<usize>,
}

impl TriadTag {
    pub fn new(kind: TagKind, rank: usize, param: Option<usize>) -> Result<Self> {
        if let Some(r) = kind.fixed_rank() {
            if r != rank {
                return Err(Error::InvalidInput(format!("{} has rank {r}", kind.template())));
            }
        }
        if kind.has_param() != param.is_some() {
            return Err(Error::InvalidInput(format!("parameter mismatch for {}", kind.template())));
        }
        if rank == 0 {
            return Err(Error::InvalidInput("rank must be positive".into()));
        }
        Ok(TriadTag { kind, rank, param })
    }

    pub fn sigma_tilde_label(&self) -> Result<TypeLabel> {
        TypeLabel::new(self.kind.family(), self.rank)
    }
}

impl fmt::Display for TriadTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.kind.template().replace("{r}", &self.rank.to_string()))?;
        if let Some(p) = self.param {
            write!(f, "_{p}")?;
        }
        Ok(())
    }
}

impl Serialize for TriadTag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn match_template(template: &str, s: &str) -> Option<Option<usize>> {
    // returns Some(rank) if the template has {r}, Some(None) if it matches with no rank
    let pieces: Vec<&str> = template.split("{r}").collect();
    let mut rest = s;
    let mut rank: Option<usize> = None;
    for (k, p) in pieces.iter().enumerate() {
        rest = rest.strip_prefix(p)?;
        if k + 1 < pieces.len() {
            let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
            if digits.is_empty() {
                return None;
            }
            let v: usize = digits.parse().ok()?;
            if rank.is_some_and(|r| r != v) {
                return None;
            }
            rank = Some(v);
            rest = &rest[digits.len()..];
        }
    }
    rest.is_empty().then_some(rank)
}

impl FromStr for TriadTag {
    type Err = Error;
    /// Accepts `(I'-B4)_2`, `I'-B4_2`, `(IV-E7-AD)` and similar.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (body, param) = match s.rfind(")_").or_else(|| s.rfind('_').filter(|_| !s.starts_with('('))) {
            Some(pos) => {
                let (b, p) = s.split_at(pos);
                let p = p.trim_start_matches(')').trim_start_matches('_');
                let v: usize = p.parse().map_err(|_| Error::InvalidInput(format!("bad tag `{s}`")))?;
                (b.trim_start_matches('('), Some(v))
            }
            None => (s.trim_start_matches('(').trim_end_matches(')'), None),
        };
        for kind in ALL_TAG_KINDS {
            if let Some(r) = match_template(kind.template(), body) {
                let rank = match (r, kind.fixed_rank()) {
                    (Some(r), _) => r,
                    (None, Some(r)) => r,
                    (None, None) => continue,
                };
                return TriadTag::new(kind, rank, param);
            }
        }
        Err(Error::InvalidInput(format!("unknown tag `{s}`")))
    }
}

/// Coordinates of a classical root: `Short(i)`, `Double` (= ±2e_i) or `Pair(i, j, same_sign)`.
enum Shape {
    Short(usize),
    Double,
    Pair(usize, usize, bool),
}

fn classical_shape(v: &RationalVector) -> Shape {
    let nz: Vec<(usize, &Q)> = v.coords().iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
    match nz.len() {
        1 if nz[0].1.abs() == qi(2) => Shape::Double,
        1 => Shape::Short(nz[0].0),
        _ => Shape::Pair(nz[0].0, nz[1].0, nz[0].1.is_positive() == nz[1].1.is_positive()),
    }
}

type Pattern = (Option<char>, Option<char>);

/// Constant names for `m` and `n` at one root, following the catalog's equality patterns.
fn pattern(tag: &TriadTag, st: &RootSystem, i: usize) -> Pattern {
    use TagKind::*;
    let v = st.root(i);
    let r = tag.rank;
    let s = tag.param.unwrap_or(0);
    let (norms, class) = st.length_classes();
    let long = class[i] + 1 == norms.len() && norms.len() > 1;
    match tag.kind {
        IIIA | IIID | IIIE => (Some('a'), Some('a')),
        IIIF4 | IIIG2 => {
            let c = if long { 'b' } else { 'a' };
            (Some(c), Some(c))
        }
        IF4 => {
            if long {
                (Some('b'), None)
            } else {
                (Some('a'), Some('a'))
            }
        }
        IpF4 => {
            if !long {
                (Some('a'), Some('a'))
            } else {
                // long roots ±e_i±e_j; Σ holds those within {1,2} or {3,4}
                let Shape::Pair(a, b, _) = classical_shape(v) else { unreachable!() };
                if (a < 2) == (b < 2) {
                    (Some('b'), None)
                } else {
                    (None, Some('b'))
                }
            }
        }
        _ => match (tag.kind, classical_shape(v)) {
            (IB, Shape::Short(_)) => (Some('a'), Some('c')),
            (IB, Shape::Pair(..)) => (Some('b'), None),
            (IC, Shape::Pair(_, _, sg)) => {
                if r >= 3 {
                    (Some('a'), Some('a'))
                } else {
                    let _ = sg;
                    (Some('a'), Some('c'))
                }
            }
            (IC, Shape::Double) => (Some('b'), if r == 1 { Some('a') } else { None }),
            (IBCA1, Shape::Short(_)) => (Some('a'), Some('d')),
            (IBCA1, Shape::Pair(..)) => (Some('b'), None),
            (IBCA1, Shape::Double) => (Some('c'), None),
            (IBCB, Shape::Short(_)) => (Some('a'), Some('a')),
            (IBCB, Shape::Double) => (Some('b'), None),
            (IBCB, Shape::Pair(..)) => (Some('c'), Some(if r == 2 { 'd' } else { 'c' })),
            (IIBC, Shape::Short(_)) => (Some('a'), Some('a')),
            (IIBC, Shape::Double) => (None, Some('b')),
            (IIBC, Shape::Pair(..)) => (Some('c'), Some('c')),
            (IpC, Shape::Double) => (None, Some('a')),
            (IpC, Shape::Pair(_, _, same)) => {
                if r >= 3 {
                    (Some('b'), Some('b'))
                } else if same {
                    (Some('b'), Some('c'))
                } else {
                    (Some('c'), Some('b'))
                }
            }
            (IpB, Shape::Short(k)) | (IpBCA1, Shape::Short(k)) => {
                let (x, y) = if tag.kind == IpB { ('a', 'b') } else { ('b', 'c') };
                if k < s {
                    (Some(x), Some(y))
                } else {
                    (Some(y), Some(x))
                }
            }
            (IpB, Shape::Pair(a, b, _)) | (IpBCA1, Shape::Pair(a, b, _)) => {
                let c = if tag.kind == IpB { 'c' } else { 'd' };
                if (a < s) == (b < s) {
                    (Some(c), None)
                } else {
                    (None, Some(c))
                }
            }
            (IpBCA1, Shape::Double) => (Some('a'), None),
            (IIIB, Shape::Short(_)) => (Some('a'), Some('a')),
            (IIIB, Shape::Pair(..)) => (Some('b'), Some(if r == 2 { 'c' } else { 'b' })),
            (IIIC, Shape::Pair(..)) => (Some('a'), Some('a')),
            (IIIC, Shape::Double) => (Some('b'), Some('c')),
            (IIIBC, Shape::Short(_)) => (Some('a'), Some('a')),
            (IIIBC, Shape::Pair(..)) => (Some('b'), Some(if r == 2 { 'c' } else { 'b' })),
            (IIIBC, Shape::Double) => {
                if r == 2 {
                    (Some('d'), Some('e'))
                } else if r == 1 {
                    (Some('b'), Some('c'))
                } else {
                    (Some('c'), Some('d'))
                }
            }
            _ => unreachable!("root shape does not occur for this tag"),
        },
    }
}

fn check_catalog_range(tag: &TriadTag) -> Result<()> {
    use TagKind::*;
    let r = tag.rank;
    let bad = |msg: &str| Err(Error::InvalidInput(format!("{tag}: {msg}")));
    match tag.kind {
        IpB | IpBCA1 => {
            let s = tag.param.unwrap();
            let min_r = if tag.kind == IpB { 2 } else { 2 };
            if r < min_r || s < 1 || s >= r {
                return bad("requires 1 ≤ s ≤ r−1");
            }
        }
        IpC | IIID if r < 2 => return bad("rank too small"),
        IIID if r < 3 => return bad("rank too small"),
        IIIE if !(6..=8).contains(&r) => return bad("rank must be 6, 7 or 8"),
        k if k.is_type_iv() => return bad("type (IV) shapes are built by the typeiv module"),
        _ => {}
    }
    TypeLabel::new(tag.kind.family(), r)?;
    Ok(())
}

/// Names of the free constants of a tag, in catalog order.
pub fn parameter_names(tag: &TriadTag) -> Result<Vec<char>> {
    check_catalog_range(tag)?;
    let st = RootSystem::build(tag.sigma_tilde_label()?)?;
    let mut names = BTreeSet::new();
    for i in 0..st.len() {
        let (a, b) = pattern(tag, &st, i);
        names.extend(a);
        names.extend(b);
    }
    Ok(names.into_iter().collect())
}

/// `(Σ̃, Σ, W)` of a catalog tag on the standard realization.
pub fn standard_shape(tag: &TriadTag) -> Result<MultSymmetricTriad> {
    let names = parameter_names(tag)?;
    let params: Vec<Q> = (0..names.len()).map(|_| qi(1)).collect();
    standard(tag, &params)
}

/// Catalog triad with the given constants (see [`parameter_names`] for their order).
pub fn standard(tag: &TriadTag, params: &[Q]) -> Result<MultSymmetricTriad> {
    let names = parameter_names(tag)?;
    if names.len() != params.len() {
        return Err(Error::InvalidInput(format!("{tag} takes {} constants, got {}", names.len(), params.len())));
    }
    if params.iter().any(|p| !p.is_positive()) {
        return Err(Error::InvalidInput("multiplicity constants must be positive".into()));
    }
    let value: HashMap<char, Q> = names.iter().copied().zip(params.iter().cloned()).collect();
    let st = Arc::new(RootSystem::build(tag.sigma_tilde_label()?)?);
    let len = st.len();
    let (mut sigma, mut w, mut m, mut n) = (vec![false; len], vec![false; len], vec![Q::zero(); len], vec![Q::zero(); len]);
    for i in 0..len {
        let (a, b) = pattern(tag, &st, i);
        if let Some(a) = a {
            sigma[i] = true;
            m[i] = value[&a].clone();
        }
        if let Some(b) = b {
            w[i] = true;
            n[i] = value[&b].clone();
        }
    }
    MultSymmetricTriad::new(st, sigma, w, m, n, Kind::Ordinary)
}

/// Catalog tags whose `Σ̃` could be of the given type, in reporting preference order:
/// unprimed types first, then primed ones.
pub fn candidate_tags(label: TypeLabel) -> Vec<TriadTag> {
    use TagKind::*;
    let r = label.rank;
    let mut out = vec![];
    let mut push = |k: TagKind, rank: usize, p: Option<usize>| {
        if let Ok(t) = TriadTag::new(k, rank, p) {
            if check_catalog_range(&t).is_ok() {
                out.push(t);
            }
        }
    };
    let families: Vec<(Family, usize)> = match (label.family, r) {
        (Family::A, 1) => vec![(Family::A, 1), (Family::B, 1), (Family::C, 1)],
        (Family::A, 3) | (Family::D, 3) => vec![(Family::A, 3), (Family::D, 3)],
        (Family::B, 2) => vec![(Family::B, 2), (Family::C, 2)],
        (Family::C, 2) => vec![(Family::C, 2), (Family::B, 2)],
        (f, r) => vec![(f, r)],
    };
    for primed in [false, true] {
        for &(f, rk) in &families {
            let kinds: &[TagKind] = match f {
                Family::A => &[IIIA],
                Family::B => &[IB, IIIB, IpB],
                Family::C => &[IC, IIIC, IpC],
                Family::D => &[IIID],
                Family::BC => &[IBCA1, IBCB, IIBC, IIIBC, IpBCA1],
                Family::E => &[IIIE],
                Family::F => &[IF4, IIIF4, IpF4],
                Family::G => &[IIIG2],
            };
            for &k in kinds {
                if k.is_primed() != primed {
                    continue;
                }
                if k.has_param() {
                    for s in 1..rk {
                        push(k, rk, Some(s));
                    }
                } else {
                    push(k, rk, None);
                }
            }
        }
    }
    out
}

/// Catalog name of the shape `(Σ̃, Σ, W)` of an ordinary triad, if it is in the catalog.
pub fn identify_tag(t: &MultSymmetricTriad) -> Option<TriadTag> {
    if t.kind != Kind::Ordinary || !t.sigma_tilde.is_irreducible() {
        return None;
    }
    let shape = t.shape();
    candidate_tags(t.sigma_tilde.label()[0])
        .into_iter()
        .find(|tag| standard_shape(tag).ok().is_some_and(|s| are_equiv(&shape, &s).is_some()))
}

/// Representative of the `~`-class: triads with `Σ ⊆ W` or `W ⊆ Σ` (the unprimed catalog
/// shapes) first, then the smallest [`MultSymmetricTriad::multiplicity_key`], then the
/// first twist in the order of [`GammaElement::all_parities`].
pub fn canonical(t: &MultSymmetricTriad) -> (MultSymmetricTriad, Option<TriadTag>) {
    let mut best: Option<(bool, Vec<Vec<(Q, Q)>>, MultSymmetricTriad)> = None;
    for y in GammaElement::all_parities(t.sigma_tilde.rank()) {
        let u = twist(t, &y).expect("rank matches");
        let s_in_w = (0..u.len()).all(|i| !u.sigma[i] || u.w[i]);
        let w_in_s = (0..u.len()).all(|i| !u.w[i] || u.sigma[i]);
        let primed = !(s_in_w || w_in_s);
        let key = u.multiplicity_key();
        let better = match &best {
            None => true,
            Some((bp, bk, _)) => (primed, &key) < (*bp, bk),
        };
        if better {
            best = Some((primed, key, u));
        }
    }
    let (_, _, u) = best.expect("at least the trivial twist");
    let tag = identify_tag(&u);
    (u, tag)
}

/// One catalog triad checked against both axiom lists.
#[derive(Clone, Debug, Serialize)]
pub struct CatalogAxiomCase {
    pub tag: TriadTag,
    pub params: Vec<(char, String)>,
    pub triad_axioms: AxiomReport,
    pub multiplicity_axioms: AxiomReport,
}

impl CatalogAxiomCase {
    pub fn passes(&self) -> bool {
        self.triad_axioms.passes() && self.multiplicity_axioms.passes()
    }
}

/// Constant assignments for a tag with `k` constants: pairwise distinct, all equal, and
/// every single collision of two constants.
pub fn parameter_assignments(k: usize) -> Vec<Vec<Q>> {
    let mut out: Vec<Vec<Q>> = vec![(1..=k as i64).map(qi).collect()];
    if k > 1 {
        out.push(vec![qi(1); k]);
        for i in 0..k {
            for j in i + 1..k {
                let mut v: Vec<Q> = (1..=k as i64).map(qi).collect();
                v[j] = v[i].clone();
                out.push(v);
            }
        }
    }
    out
}

/// Every catalog tag of rank at most `rank_cap` under every [`parameter_assignments`] choice.
pub fn catalog_axiom_suite(rank_cap: usize) -> Result<Vec<CatalogAxiomCase>> {
    let mut tags: BTreeSet<TriadTag> = BTreeSet::new();
    for fam in [Family::A, Family::B, Family::C, Family::D, Family::BC, Family::E, Family::F, Family::G] {
        for r in 1..=rank_cap {
            if let Ok(label) = TypeLabel::new(fam, r) {
                tags.extend(candidate_tags(label).into_iter().filter(|t| t.sigma_tilde_label().is_ok_and(|l| l == label)));
            }
        }
    }
    let mut out = vec![];
    for tag in tags {
        let names = parameter_names(&tag)?;
        for params in parameter_assignments(names.len()) {
            let t = standard(&tag, &params)?;
            out.push(CatalogAxiomCase {
                tag,
                params: names.iter().copied().zip(params.iter().map(|p| p.to_string())).collect(),
                triad_axioms: verify_triad_axioms(&t.sigma_tilde, &t.sigma, &t.w),
                multiplicity_axioms: verify_multiplicity_axioms(&t),
            });
        }
    }
    Ok(out)
}
