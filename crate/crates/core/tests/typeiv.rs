use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;
use symtriad::rootsys::{RootSystem, TypeLabel};
use symtriad::triads::{GammaElement, Kind};
use symtriad::typeiv::*;
use symtriad::vector::{qi, rank, RationalVector, Q};

fn label(s: &str) -> TypeLabel {
    s.parse().unwrap()
}

fn base(s: &str) -> Arc<RootSystem> {
    Arc::new(RootSystem::build(label(s)).unwrap())
}

fn y(c: &[i64]) -> GammaElement {
    GammaElement { coeffs: c.to_vec() }
}

/// Cell points by direct search over `{0,1,2}^r` against `Σ m_i n_i ≤ 2`.
fn cell_points_oracle(highest: &[i64]) -> Vec<Vec<i64>> {
    let r = highest.len();
    let mut out = vec![];
    for code in 0..3usize.pow(r as u32) {
        let n: Vec<i64> = (0..r).map(|k| (code / 3usize.pow(k as u32) % 3) as i64).collect();
        if highest.iter().zip(&n).map(|(a, b)| a * b).sum::<i64>() <= 2 {
            out.push(n);
        }
    }
    out.sort();
    out
}

#[test]
fn cell_points_of_a2_and_g2() {
    let pts = |s: &str| {
        let mut v: Vec<Vec<i64>> = enumerate_gamma_q0(&base(s)).unwrap().into_iter().map(|p| p.y.coeffs).collect();
        v.sort();
        v
    };
    assert_eq!(pts("A2"), vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 0], vec![1, 1], vec![2, 0]]);
    assert_eq!(pts("G2"), vec![vec![0, 0], vec![0, 1]]);
}

#[test]
fn cell_points_match_direct_search() {
    for b in table1_bases(8) {
        let rs = RootSystem::build(b).unwrap();
        let h = symtriad::rootsys::highest_coefficients(&rs).unwrap();
        let mut got: Vec<Vec<i64>> = enumerate_gamma_q0(&rs).unwrap().into_iter().map(|p| p.y.coeffs).collect();
        got.sort();
        assert_eq!(got, cell_points_oracle(&h), "{b}");
        assert!(got.contains(&vec![0; rs.rank()]));
    }
}

#[test]
fn wall_values_are_in_range() {
    for p in enumerate_gamma_q0(&base("E7")).unwrap() {
        assert!(p.wall_values.iter().all(|w| (0..=2).contains(w)));
    }
}

#[test]
fn trivial_point_gives_trivial_triad() {
    let b = base("B3");
    let t = sigma_y_shape(b.clone(), &GammaElement::zero(3)).unwrap();
    assert_eq!(t.kind, Kind::TypeIv);
    assert!(t.sigma.iter().all(|&s| s));
    assert!(t.w.iter().all(|&w| !w));
}

#[test]
fn sigma_y_on_a_r() {
    // Y = (π/2) α^l on A_r: Σ_Y = A_{l-1} ∪ A_{r-l}.
    let r = 5;
    let b = base("A5");
    for l in 1..=r {
        let mut c = vec![0; r];
        c[l - 1] = 1;
        let t = sigma_y_shape(b.clone(), &y(&c)).unwrap();
        let expected = (l * (l - 1)) + (r + 1 - l) * (r - l);
        assert_eq!(t.sigma_indices().len(), expected, "l = {l}");
        for i in t.sigma_indices() {
            let v = t.root(i).coords();
            let nz: Vec<usize> = (0..=r).filter(|&k| v[k] != qi(0)).collect();
            assert_eq!(nz[0] < l, nz[1] < l, "root crosses the split at l = {l}");
        }
    }
}

#[test]
fn sigma_y_on_b4_last_coweight() {
    let b = base("B4");
    let t = sigma_y_shape(b.clone(), &y(&[0, 0, 0, 1])).unwrap();
    let s = sigma_type(&t);
    assert_eq!(s.len(), 1);
    assert_eq!(s[0].0, label("D4"));
    assert!(t.sigma_indices().iter().all(|&i| t.root(i).norm2() == qi(2)));
}

#[test]
fn e6_second_coweight_fundamental_system() {
    let b = base("E6");
    let list = fundamental_system_sigma_y(&b, &y(&[0, 1, 0, 0, 0, 0])).unwrap();
    assert_eq!(list.len(), 6);
    assert!(list.contains(&-b.highest().unwrap()));
    assert!(!list.contains(&b.simple()[1]));
    let t = sigma_y_shape(b.clone(), &y(&[0, 1, 0, 0, 0, 0])).unwrap();
    let mut labels: Vec<TypeLabel> = sigma_type(&t).into_iter().map(|c| c.0).collect();
    labels.sort();
    assert_eq!(labels, vec![label("A1"), label("A5")]);
}

#[test]
fn rank_drops_by_one_for_unit_marks() {
    for b in table1_bases(8) {
        let rs = base(&b.to_string());
        let h = symtriad::rootsys::highest_coefficients(&rs).unwrap();
        for (k, &m) in h.iter().enumerate() {
            if m != 1 {
                continue;
            }
            let yy = GammaElement::basis(rs.rank(), k);
            let t = sigma_y_shape(rs.clone(), &yy).unwrap();
            let vs: Vec<RationalVector> = t.sigma_indices().iter().map(|&i| t.root(i).clone()).collect();
            assert_eq!(rank(&vs), rs.rank() - 1, "{b} α^{}", k + 1);
            assert_eq!(fundamental_system_sigma_y(&rs, &yy).unwrap().len(), rs.rank() - 1);
        }
    }
}

#[test]
fn classification_examples() {
    let names = |s: &str| -> Vec<String> { classify_type_iv(base(s)).unwrap().into_iter().map(|c| c.sigma_type).collect() };
    let e7 = names("E7");
    assert_eq!(e7.len(), 3, "{e7:?}");
    for want in ["A1+D6", "A7", "E6"] {
        assert!(e7.iter().any(|s| s.replace(' ', "").starts_with(want) || s.contains(want)), "{want} in {e7:?}");
    }
    assert_eq!(names("BC4").len(), 4);
    // triality identifies the three unit nodes
    assert_eq!(names("D4").len(), 2, "{:?}", names("D4"));
}

#[test]
fn table1_bases_all_verify() {
    for b in table1_bases(8) {
        let r = verify_table1_base(b).unwrap();
        assert!(r.pass, "{b}: {:?}", r.rows.iter().filter(|x| !x.pass).collect::<Vec<_>>());
    }
}

#[test]
fn typeiv_sim_examples() {
    let b3 = base("B3");
    let trivial = sigma_y_shape(b3.clone(), &GammaElement::zero(3)).unwrap();
    for p in enumerate_gamma_q0(&b3).unwrap() {
        assert!(typeiv_sim(&trivial, &sigma_y_shape(b3.clone(), &p.y).unwrap()).is_some());
    }
    let a2 = sigma_y_shape(base("A2"), &GammaElement::zero(2)).unwrap();
    let b2 = sigma_y_shape(base("B2"), &GammaElement::zero(2)).unwrap();
    assert!(typeiv_sim(&a2, &b2).is_none());
    let rs = base("B2");
    let mult = |short: i64, long: i64| -> Vec<Q> { rs.roots().iter().map(|r| if r.norm2() == qi(1) { qi(short) } else { qi(long) }).collect() };
    let t = sigma_y(rs.clone(), &mult(1, 2), &GammaElement::zero(2)).unwrap();
    let u = sigma_y(rs.clone(), &mult(2, 1), &GammaElement::zero(2)).unwrap();
    assert!(typeiv_sim(&t, &u).is_none());
    assert!(typeiv_sim(&t, &t).is_some());
}

#[test]
fn invalid_base_multiplicity_is_rejected() {
    let rs = base("B2");
    let mut m = vec![qi(1); rs.len()];
    m[0] = qi(2);
    assert!(sigma_y(rs, &m, &GammaElement::zero(2)).is_err());
}

#[test]
fn gamma_invariance_small_sample() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for b in table1_bases(3) {
        let d = AffineWeylDatum::new(base(&b.to_string())).unwrap();
        assert_eq!(sample_gamma_invariance(&d, &mut rng, 100), (100, 100), "{b}");
    }
}

#[test]
fn axiom_suite_passes() {
    assert!(type_iv_axiom_suite(8).unwrap().iter().all(|c| c.passes()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_defect_is_zero_or_one(b in prop::sample::select(table1_bases(6)), pick in 0usize..1000) {
        let rs = Arc::new(RootSystem::build(b).unwrap());
        let pts = enumerate_gamma_q0(&rs).unwrap();
        let p = &pts[pick % pts.len()];
        let t = sigma_y_shape(rs.clone(), &p.y).unwrap();
        let vs: Vec<RationalVector> = t.sigma_indices().iter().map(|&i| t.root(i).clone()).collect();
        let drop = rs.rank() - rank(&vs);
        prop_assert!(drop <= 1);
        let list = fundamental_system_sigma_y(&rs, &p.y).unwrap();
        prop_assert_eq!(rank(&list), list.len());
        prop_assert_eq!(list.len(), rank(&vs));
    }

    #[test]
    fn translated_points_stay_in_gamma(b in prop::sample::select(table1_bases(4)), seed in any::<u64>()) {
        let d = AffineWeylDatum::new(Arc::new(RootSystem::build(b).unwrap())).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = d.random_gamma(&mut rng, 3);
        let word = d.random_word(&mut rng, 6, 2);
        prop_assert!(d.in_gamma(&d.apply_word(&word, &d.point(&g))));
    }
}
