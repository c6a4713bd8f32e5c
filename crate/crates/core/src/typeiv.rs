//! Symmetric triads of type (IV): the lattice `Γ`, the closed fundamental cell `Q̄₀`,
//! the parity construction `Σ_Y`, fundamental systems of `Σ_Y`, the affine Weyl group,
//! and the classification of non-trivial type-(IV) triads up to `≡`.
//!
//! Points of `Γ` are written `X = (π/2) Σ n_i α^i` with `<α^i, α_j> = δ_ij`; we work
//! with `X/π` so that everything stays rational.

use crate::error::{Error, Result};
use crate::expr;
use crate::iso;
use crate::rootsys::{highest_coefficients, is_root_system, Family, Isomorphism, RootSystem, RootSystemCheck, TypeLabel};
use crate::triads::{are_equiv, gamma_pairing, GammaElement, Kind, MultSymmetricTriad, TriadTag};
use crate::vector::{invert, qi, RationalVector, Q};
use num_traits::{Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

/// A point of `Γ ∩ Q̄₀` with `<λ, Y>` (in units of `π/2`) on every wall.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellPoint {
    pub y: GammaElement,
    /// `<α_i, Y>/(π/2)` for the simple roots, then `<δ̃, Y>/(π/2)`; each in `{0, 1, 2}`.
    pub wall_values: Vec<i64>,
}

impl CellPoint {
    /// `Y = 0` or `Y = π α^i`: both give `Σ_Y = Σ̃`.
    pub fn is_trivial(&self, base: &RootSystem) -> bool {
        (0..base.len()).all(|i| gamma_pairing(base, &self.y, i).rem_euclid(2) == 0)
    }
}

fn require_irreducible(base: &RootSystem) -> Result<Vec<i64>> {
    if !base.is_irreducible() {
        return Err(Error::InvalidInput("the base must be irreducible".into()));
    }
    highest_coefficients(base).ok_or_else(|| Error::InvalidInput("the base has no highest root".into()))
}

/// `Γ ∩ Q̄₀`: all `n ∈ {0,1,2}^r` with `Σ m_i n_i ≤ 2`, in lexicographic order.
pub fn enumerate_gamma_q0(base: &RootSystem) -> Result<Vec<CellPoint>> {
    let m = require_irreducible(base)?;
    let r = m.len();
    let mut out = vec![];
    let mut n = vec![0i64; r];
    fn rec(k: usize, budget: i64, m: &[i64], n: &mut Vec<i64>, out: &mut Vec<CellPoint>) {
        if k == m.len() {
            let mut walls = n.clone();
            walls.push(m.iter().zip(n.iter()).map(|(a, b)| a * b).sum());
            out.push(CellPoint { y: GammaElement { coeffs: n.clone() }, wall_values: walls });
            return;
        }
        for v in 0..=2 {
            if m[k] * v <= budget {
                n[k] = v;
                rec(k + 1, budget - m[k] * v, m, n, out);
            }
        }
        n[k] = 0;
    }
    rec(0, 2, &m, &mut n, &mut out);
    Ok(out)
}

/// Multiplicity on the base that is constant on each length class.
pub fn uniform_multiplicity(base: &RootSystem, per_class: &[Q]) -> Result<Vec<Q>> {
    let (norms, class) = base.length_classes();
    if per_class.len() != norms.len() {
        return Err(Error::InvalidInput(format!("{} length classes, {} values given", norms.len(), per_class.len())));
    }
    Ok(class.iter().map(|&c| per_class[c].clone()).collect())
}

fn check_base_multiplicity(base: &RootSystem, mult: &[Q]) -> Result<()> {
    if mult.len() != base.len() {
        return Err(Error::InvalidInput("multiplicity has the wrong length".into()));
    }
    if let Some(i) = (0..base.len()).find(|&i| !mult[i].is_positive()) {
        return Err(Error::InvalidInput(format!("multiplicity of {} is not positive", base.root(i))));
    }
    for k in 0..base.rank() {
        let a = base.simple_index(k);
        for i in 0..base.len() {
            if mult[i] != mult[base.reflect_index(a, i)] {
                return Err(Error::InvalidInput(format!("multiplicity is not Weyl invariant at {}", base.root(i))));
            }
        }
    }
    Ok(())
}

/// `(Σ̃, Σ_Y, Σ̃ − Σ_Y; m, n)` with `m` the base multiplicity on `Σ_Y` and `n` on its complement.
pub fn sigma_y(base: Arc<RootSystem>, base_mult: &[Q], y: &GammaElement) -> Result<MultSymmetricTriad> {
    if y.coeffs.len() != base.rank() {
        return Err(Error::InvalidInput("Y has the wrong number of coefficients".into()));
    }
    check_base_multiplicity(&base, base_mult)?;
    let len = base.len();
    let sigma: Vec<bool> = (0..len).map(|i| gamma_pairing(&base, y, i).rem_euclid(2) == 0).collect();
    let w: Vec<bool> = sigma.iter().map(|s| !s).collect();
    let m = (0..len).map(|i| if sigma[i] { base_mult[i].clone() } else { Q::zero() }).collect();
    let n = (0..len).map(|i| if w[i] { base_mult[i].clone() } else { Q::zero() }).collect();
    MultSymmetricTriad::new(base, sigma, w, m, n, Kind::TypeIv)
}

/// `sigma_y` with multiplicity one everywhere.
pub fn sigma_y_shape(base: Arc<RootSystem>, y: &GammaElement) -> Result<MultSymmetricTriad> {
    let ones = vec![qi(1); base.len()];
    sigma_y(base, &ones, y)
}

/// Fundamental system of `Σ_Y` read off from the shape of `Y`:
/// `Π̃ − {α_{i0}}` when `m_{i0} = 1`; `(Π̃ − {α_{i0}}) ∪ {−δ̃}` when `m_{i0} = 2`;
/// `(Π̃ − {α_{i1}, α_{i2}}) ∪ {−δ̃}` for two indices with `m = 1`; `Π̃` when `Σ_Y = Σ̃`.
pub fn fundamental_system_sigma_y(base: &RootSystem, y: &GammaElement) -> Result<Vec<RationalVector>> {
    let m = require_irreducible(base)?;
    if y.coeffs.len() != m.len() || y.coeffs.iter().any(|&c| !(0..=2).contains(&c)) {
        return Err(Error::InvalidInput(format!("{y} is not a cell point")));
    }
    let delta: i64 = m.iter().zip(&y.coeffs).map(|(a, b)| a * b).sum();
    let ones: Vec<usize> = (0..m.len()).filter(|&i| y.coeffs[i] == 1).collect();
    let keep = |skip: &[usize]| -> Vec<RationalVector> {
        (0..m.len()).filter(|i| !skip.contains(i)).map(|i| base.simple()[i].clone()).collect()
    };
    let neg_highest = -base.highest().expect("irreducible base");
    Ok(match (delta, ones.as_slice()) {
        (1, [i0]) => keep(&[*i0]),
        (2, [i0]) if m[*i0] == 2 => {
            let mut v = keep(&[*i0]);
            v.push(neg_highest);
            v
        }
        (2, [i1, i2]) => {
            let mut v = keep(&[*i1, *i2]);
            v.push(neg_highest);
            v
        }
        (0, []) | (2, []) => base.simple().to_vec(),
        _ => return Err(Error::InvalidInput(format!("{y} is not in Γ ∩ Q̄₀"))),
    })
}

/// Components of `Σ_Y` with the base length classes they occupy.
pub fn sigma_type(t: &MultSymmetricTriad) -> Vec<(TypeLabel, Vec<usize>)> {
    t.sigma_tilde.identify_subset(&t.sigma_indices())
}

/// Name of a length class of a base with `count` classes.
pub fn class_name(count: usize, class: usize) -> &'static str {
    match (count, class) {
        (1, _) => "long",
        (2, 0) => "short",
        (2, _) => "long",
        (_, 0) => "short",
        (_, 1) => "middle",
        _ => "long",
    }
}

/// `A1(long)+C3`-style description. Classes are shown only for bases with several root lengths.
pub fn format_sigma_type(base: &RootSystem, comps: &[(TypeLabel, Vec<usize>)]) -> String {
    if comps.is_empty() {
        return "0".into();
    }
    let count = base.length_classes().0.len();
    comps
        .iter()
        .map(|(l, cls)| {
            if count > 1 {
                let names: Vec<&str> = cls.iter().map(|&c| class_name(count, c)).collect();
                format!("{l}({})", names.join(","))
            } else {
                l.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join("+")
}

/// Type-(IV) `~`: isomorphism of the bases carrying the base multiplicities `m + n`.
pub fn typeiv_sim(t: &MultSymmetricTriad, u: &MultSymmetricTriad) -> Option<Isomorphism> {
    if t.kind != Kind::TypeIv || u.kind != Kind::TypeIv {
        return None;
    }
    let colors = |x: &MultSymmetricTriad| -> Vec<u64> {
        (0..x.len())
            .map(|i| {
                let mut s = DefaultHasher::new();
                (&x.m[i] + &x.n[i]).hash(&mut s);
                s.finish()
            })
            .collect()
    };
    iso::find(&t.sigma_tilde, &colors(t), &u.sigma_tilde, &colors(u), false)
}

// ---------------------------------------------------------------------------
// Affine Weyl group

/// `W̃(Σ̃)` acting on `X/π`: generated by `x ↦ s_α(x) + 2k α/|α|²`.
#[derive(Clone, Debug)]
pub struct AffineWeylDatum {
    pub base: Arc<RootSystem>,
    /// Dual basis `α^i` of the fundamental system, inside its span.
    pub dual_basis: Vec<RationalVector>,
    /// Lattice generators `2 α_i/|α_i|²` (simple coroots).
    pub translations: Vec<RationalVector>,
}

/// Affine reflection `(s_α, 2k α/|α|²)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineGenerator {
    pub root: usize,
    pub k: i64,
}

impl AffineWeylDatum {
    pub fn new(base: Arc<RootSystem>) -> Result<Self> {
        require_irreducible(&base)?;
        let simple = base.simple();
        let gram: Vec<Vec<Q>> = simple.iter().map(|a| simple.iter().map(|b| a.dot(b)).collect()).collect();
        let ginv = invert(&gram).ok_or_else(|| Error::Internal("singular Gram matrix".into()))?;
        let dual_basis = ginv.iter().map(|row| base.combine_q(row)).collect();
        let translations = simple.iter().map(|a| a.scale(&(qi(2) / a.norm2()))).collect();
        Ok(AffineWeylDatum { base, dual_basis, translations })
    }

    /// `X/π` for `X = (π/2) Σ n_i α^i`.
    pub fn point(&self, y: &GammaElement) -> RationalVector {
        let mut v = RationalVector::zero(self.base.dim());
        for (n, a) in y.coeffs.iter().zip(&self.dual_basis) {
            v = v.add_scaled(&Q::new((*n).into(), 2.into()), a);
        }
        v
    }

    pub fn apply_generator(&self, g: &AffineGenerator, x: &RationalVector) -> RationalVector {
        let a = self.base.root(g.root);
        let na = a.norm2();
        let c = (qi(2) * a.dot(x) - qi(2 * g.k)) / &na;
        x.add_scaled(&-c, a)
    }

    pub fn apply_word(&self, word: &[AffineGenerator], x: &RationalVector) -> RationalVector {
        word.iter().fold(x.clone(), |acc, g| self.apply_generator(g, &acc))
    }

    /// `x ∈ Γ/π`: `<α_i, x>` is a half-integer for every simple root.
    pub fn in_gamma(&self, x: &RationalVector) -> bool {
        self.base.simple().iter().all(|a| (qi(2) * a.dot(x)).is_integer())
    }

    /// Integer coordinates of a vector over the simple coroots, if it lies in that lattice.
    pub fn lattice_coords(&self, v: &RationalVector) -> Option<Vec<i64>> {
        // <α^i, t> with t = Σ c_j coroot_j gives c_i * 2/|α_i|²
        let mut out = vec![];
        for (d, a) in self.dual_basis.iter().zip(self.base.simple()) {
            let c = d.dot(v) * a.norm2() / qi(2);
            if !c.is_integer() {
                return None;
            }
            out.push(crate::vector::q_to_i64(&c)?);
        }
        let back = self.translations.iter().zip(&out).fold(RationalVector::zero(self.base.dim()), |acc, (t, &c)| acc.add_scaled(&qi(c), t));
        (back == *v).then_some(out)
    }

    pub fn random_word<R: Rng>(&self, rng: &mut R, max_len: usize, max_shift: i64) -> Vec<AffineGenerator> {
        let len = rng.gen_range(1..=max_len);
        (0..len)
            .map(|_| AffineGenerator { root: rng.gen_range(0..self.base.len()), k: rng.gen_range(-max_shift..=max_shift) })
            .collect()
    }

    pub fn random_gamma<R: Rng>(&self, rng: &mut R, bound: i64) -> GammaElement {
        GammaElement { coeffs: (0..self.base.rank()).map(|_| rng.gen_range(-bound..=bound)).collect() }
    }
}

/// Samples `(w, X)` with `X ∈ Γ` and counts how often `w(X) ∈ Γ`.
pub fn sample_gamma_invariance<R: Rng>(datum: &AffineWeylDatum, rng: &mut R, samples: usize) -> (usize, usize) {
    let mut ok = 0;
    for _ in 0..samples {
        let x = datum.point(&datum.random_gamma(rng, 6));
        let w = datum.random_word(rng, 8, 3);
        if datum.in_gamma(&datum.apply_word(&w, &x)) {
            ok += 1;
        }
    }
    (ok, samples)
}

// ---------------------------------------------------------------------------
// Classification and the embedded table

#[derive(Clone, Debug, Deserialize)]
pub struct ParamSpec {
    pub name: String,
    pub lo: String,
    pub hi: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct ComponentSpec {
    #[serde(rename = "type")]
    pub type_: String,
    #[serde(default)]
    pub classes: Option<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Table1Row {
    pub id: String,
    pub tag: String,
    pub family: String,
    pub min_rank: usize,
    #[serde(default)]
    pub max_rank: Option<usize>,
    #[serde(default)]
    pub param: Option<ParamSpec>,
    pub y: Vec<String>,
    pub sigma: Vec<ComponentSpec>,
}

#[derive(Clone, Debug, Deserialize)]
struct Table1 {
    rows: Vec<Table1Row>,
}

/// Rows of the embedded type-(IV) table.
pub fn table1() -> &'static [Table1Row] {
    static T: OnceLock<Vec<Table1Row>> = OnceLock::new();
    T.get_or_init(|| {
        let t: Table1 = serde_json::from_str(include_str!("../data/table1.json")).expect("embedded table1.json is valid");
        t.rows
    })
}

/// One concrete row of the table at a given rank and parameter.
#[derive(Clone, Debug, Serialize)]
pub struct RowInstance {
    pub row_id: String,
    pub tag: TriadTag,
    pub param: Option<i64>,
    pub y: GammaElement,
    /// Expected components of `Σ`, normalized, with allowed class names.
    #[serde(skip)]
    pub expected: Vec<(TypeLabel, Option<Vec<String>>)>,
    pub expected_text: String,
}

/// Parses `A{l-1}` after substitution; rank zero gives no component.
fn expected_components(spec: &ComponentSpec, vars: &HashMap<String, i64>) -> Result<Vec<(TypeLabel, Option<Vec<String>>)>> {
    let s = expr::substitute(&spec.type_, vars)?;
    let split = s.find(|c: char| c.is_ascii_digit() || c == '-').ok_or_else(|| Error::InvalidInput(format!("bad component `{s}`")))?;
    let rank: i64 = s[split..].parse().map_err(|_| Error::InvalidInput(format!("bad component `{s}`")))?;
    if rank <= 0 {
        return Ok(vec![]);
    }
    let label: TypeLabel = s.parse()?;
    Ok(label.normalized().into_iter().map(|l| (l, spec.classes.clone())).collect())
}

/// Instances of the table rows for a base of the given type.
pub fn row_instances(label: TypeLabel) -> Result<Vec<RowInstance>> {
    let mut out = vec![];
    for row in table1() {
        if row.family.parse::<Family>()? != label.family || label.rank < row.min_rank || row.max_rank.is_some_and(|m| label.rank > m) {
            continue;
        }
        let r = label.rank as i64;
        let params: Vec<Option<i64>> = match &row.param {
            None => vec![None],
            Some(p) => {
                let v = expr::vars(&[("r", r)]);
                let lo = expr::eval(&p.lo, &v)?;
                let hi = expr::eval(&p.hi, &v)?;
                (lo..=hi).map(Some).collect()
            }
        };
        for p in params {
            let mut vars = expr::vars(&[("r", r)]);
            if let (Some(spec), Some(v)) = (&row.param, p) {
                vars.insert(spec.name.clone(), v);
            }
            let mut coeffs = vec![0i64; label.rank];
            for e in &row.y {
                let i = expr::eval(e, &vars)?;
                if i < 1 || i > r {
                    return Err(Error::Internal(format!("row {} points at α^{i}", row.id)));
                }
                coeffs[(i - 1) as usize] += 1;
            }
            let tag: TriadTag = expr::substitute(&row.tag, &vars)?.parse()?;
            let mut expected = vec![];
            for c in &row.sigma {
                expected.extend(expected_components(c, &vars)?);
            }
            let expected_text = if expected.is_empty() {
                "0".into()
            } else {
                expected
                    .iter()
                    .map(|(l, c)| match c {
                        Some(c) => format!("{l}({})", c.join(",")),
                        None => l.to_string(),
                    })
                    .collect::<Vec<_>>()
                    .join("+")
            };
            out.push(RowInstance { row_id: row.id.clone(), tag, param: p, y: GammaElement { coeffs }, expected, expected_text });
        }
    }
    Ok(out)
}

fn same_type(a: TypeLabel, b: TypeLabel) -> bool {
    let bc2 = |l: TypeLabel| l.rank == 2 && matches!(l.family, Family::B | Family::C);
    a == b || (bc2(a) && bc2(b))
}

/// Matches computed components against expected ones (bijectively, honoring class annotations).
pub fn components_match(base: &RootSystem, computed: &[(TypeLabel, Vec<usize>)], expected: &[(TypeLabel, Option<Vec<String>>)]) -> bool {
    if computed.len() != expected.len() {
        return false;
    }
    let count = base.length_classes().0.len();
    let fits = |c: &(TypeLabel, Vec<usize>), e: &(TypeLabel, Option<Vec<String>>)| {
        let labels = c.0.normalized();
        labels.len() == 1
            && same_type(labels[0], e.0)
            && e.1.as_ref().map_or(true, |allowed| c.1.iter().all(|&k| allowed.iter().any(|a| a == class_name(count, k))))
    };
    fn go(k: usize, used: &mut [bool], computed: &[(TypeLabel, Vec<usize>)], expected: &[(TypeLabel, Option<Vec<String>>)], fits: &dyn Fn(&(TypeLabel, Vec<usize>), &(TypeLabel, Option<Vec<String>>)) -> bool) -> bool {
        if k == computed.len() {
            return true;
        }
        for j in 0..expected.len() {
            if !used[j] && fits(&computed[k], &expected[j]) {
                used[j] = true;
                if go(k + 1, used, computed, expected, fits) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    go(0, &mut vec![false; expected.len()], computed, expected, &fits)
}

/// One `≡`-class of non-trivial type-(IV) triads over a base.
#[derive(Clone, Debug, Serialize)]
pub struct TypeIvClass {
    pub representative: GammaElement,
    pub members: Vec<GammaElement>,
    pub sigma_type: String,
    pub rank_drop: usize,
    /// Table names whose instances fall in this class (first one is reported).
    pub tags: Vec<TriadTag>,
}

/// Enumerates `Γ ∩ Q̄₀`, drops trivial points and groups the rest by `≡`
/// (every merge is certified by an explicit isomorphism).
pub fn classify_type_iv(base: Arc<RootSystem>) -> Result<Vec<TypeIvClass>> {
    let label = *base.label().first().ok_or_else(|| Error::InvalidInput("empty base".into()))?;
    let points = enumerate_gamma_q0(&base)?;
    let mut classes: Vec<(MultSymmetricTriad, TypeIvClass)> = vec![];
    for p in points.into_iter().filter(|p| !p.is_trivial(&base)) {
        let t = sigma_y_shape(base.clone(), &p.y)?;
        match classes.iter_mut().find(|(rep, _)| are_equiv(&t, rep).is_some()) {
            Some((_, c)) => c.members.push(p.y),
            None => {
                let comps = sigma_type(&t);
                let sub_rank: usize = comps.iter().map(|(l, _)| l.rank).sum();
                let cls = TypeIvClass {
                    representative: p.y.clone(),
                    members: vec![p.y],
                    sigma_type: format_sigma_type(&base, &comps),
                    rank_drop: base.rank() - sub_rank,
                    tags: vec![],
                };
                classes.push((t, cls));
            }
        }
    }
    for inst in row_instances(label)? {
        let t = sigma_y_shape(base.clone(), &inst.y)?;
        if let Some((_, c)) = classes.iter_mut().find(|(rep, _)| are_equiv(&t, rep).is_some()) {
            c.tags.push(inst.tag);
        }
    }
    Ok(classes.into_iter().map(|(_, c)| c).collect())
}

/// Outcome of checking one table row instance.
#[derive(Clone, Debug, Serialize)]
pub struct Table1Check {
    pub base: TypeLabel,
    pub row_id: String,
    pub tag: TriadTag,
    pub expected_sigma: String,
    pub computed_sigma: String,
    /// Index of the computed `≡`-class containing the instance.
    pub class: Option<usize>,
    pub pass: bool,
}

/// Table comparison for one base.
#[derive(Clone, Debug, Serialize)]
pub struct Table1BaseReport {
    pub base: TypeLabel,
    pub rows: Vec<Table1Check>,
    pub classes: Vec<TypeIvClass>,
    /// Computed classes hit by no table row.
    pub unmatched_classes: Vec<usize>,
    /// Pairs of table instances that are `≡` to each other (listed twice in the table).
    pub duplicates: Vec<(TriadTag, TriadTag)>,
    /// Distinct classes always have distinct `Σ` types.
    pub types_separate_classes: bool,
    pub pass: bool,
}

/// Compares the computed classification over one base with the embedded table.
pub fn verify_table1_base(label: TypeLabel) -> Result<Table1BaseReport> {
    let base = Arc::new(RootSystem::build(label)?);
    let classes = classify_type_iv(base.clone())?;
    let reps: Vec<MultSymmetricTriad> = classes.iter().map(|c| sigma_y_shape(base.clone(), &c.representative)).collect::<Result<_>>()?;
    let mut rows = vec![];
    let mut hit = vec![0usize; classes.len()];
    let mut by_class: Vec<Vec<TriadTag>> = vec![vec![]; classes.len()];
    for inst in row_instances(label)? {
        let in_cell = enumerate_gamma_q0(&base)?.iter().any(|p| p.y == inst.y);
        let t = sigma_y_shape(base.clone(), &inst.y)?;
        let comps = sigma_type(&t);
        let class = reps.iter().position(|rep| are_equiv(&t, rep).is_some());
        if let Some(c) = class {
            hit[c] += 1;
            by_class[c].push(inst.tag);
        }
        let pass = in_cell && class.is_some() && components_match(&base, &comps, &inst.expected);
        rows.push(Table1Check {
            base: label,
            row_id: inst.row_id,
            tag: inst.tag,
            expected_sigma: inst.expected_text,
            computed_sigma: format_sigma_type(&base, &comps),
            class,
            pass,
        });
    }
    let unmatched_classes: Vec<usize> = (0..classes.len()).filter(|&c| hit[c] == 0).collect();
    let duplicates = by_class
        .iter()
        .flat_map(|tags| tags.iter().skip(1).map(move |t| (tags[0], *t)))
        .collect();
    let types_separate_classes = (0..classes.len()).all(|i| (i + 1..classes.len()).all(|j| classes[i].sigma_type != classes[j].sigma_type));
    let pass = rows.iter().all(|r| r.pass) && unmatched_classes.is_empty() && types_separate_classes;
    Ok(Table1BaseReport { base: label, rows, classes, unmatched_classes, duplicates, types_separate_classes, pass })
}

/// Bases covered by the table check, up to the given rank.
pub fn table1_bases(rank_cap: usize) -> Vec<TypeLabel> {
    let mut out = vec![];
    let mut push = |f: Family, r: usize| {
        if r <= rank_cap {
            out.push(TypeLabel::new(f, r).expect("valid label"));
        }
    };
    for r in 1..=8 {
        push(Family::A, r);
    }
    for r in 2..=8 {
        push(Family::B, r);
    }
    for r in 2..=8 {
        push(Family::C, r);
    }
    for r in 4..=8 {
        push(Family::D, r);
    }
    for r in 1..=8 {
        push(Family::BC, r);
    }
    for r in 6..=8 {
        push(Family::E, r);
    }
    push(Family::F, 4);
    push(Family::G, 2);
    out
}

/// Structural checks on one type-(IV) triad `(Σ̃, Σ_Y, W_Y)`.
#[derive(Clone, Debug, Serialize)]
pub struct TypeIvAxiomCase {
    pub base: TypeLabel,
    pub y: GammaElement,
    /// `Σ ∩ W = ∅` and `Σ ∪ W = Σ̃`.
    pub disjoint_cover: bool,
    /// `Σ` is a root system.
    pub sigma_is_root_system: bool,
    /// `Σ = {λ : <λ, 2Y> ∈ 2πℤ}`, and `W` is empty only for trivial `Y`.
    pub parity_rule: bool,
}

impl TypeIvAxiomCase {
    pub fn passes(&self) -> bool {
        self.disjoint_cover && self.sigma_is_root_system && self.parity_rule
    }
}

/// Every point of `Γ ∩ Q̄₀` over every table base of rank at most `rank_cap`.
pub fn type_iv_axiom_suite(rank_cap: usize) -> Result<Vec<TypeIvAxiomCase>> {
    let mut out = vec![];
    for label in table1_bases(rank_cap) {
        let base = Arc::new(RootSystem::build(label)?);
        for p in enumerate_gamma_q0(&base)? {
            let t = sigma_y_shape(base.clone(), &p.y)?;
            let len = t.len();
            let svecs: Vec<RationalVector> = t.sigma_indices().iter().map(|&i| t.root(i).clone()).collect();
            let parity_rule = (0..len).all(|i| t.sigma[i] == (gamma_pairing(&base, &p.y, i).rem_euclid(2) == 0)) && (t.w.iter().any(|&b| b) != p.is_trivial(&base));
            out.push(TypeIvAxiomCase {
                base: label,
                disjoint_cover: t.kind == Kind::TypeIv && (0..len).all(|i| t.sigma[i] != t.w[i]),
                sigma_is_root_system: !matches!(is_root_system(&svecs), RootSystemCheck::No(_)),
                parity_rule,
                y: p.y,
            });
        }
    }
    Ok(out)
}
