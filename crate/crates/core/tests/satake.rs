use std::collections::HashMap;
use std::sync::Arc;
use symtriad::rootsys::{find_isomorphism, identify, RootSystem, TypeLabel};
use symtriad::satake::*;
use symtriad::triads::{are_sim_with, canonical, Mode};
use symtriad::vector::{qi, RationalVector, Q};

fn label(s: &str) -> TypeLabel {
    s.parse().unwrap()
}

fn named_diagrams() -> Vec<(&'static str, Vec<&'static str>)> {
    vec![
        ("A5", vec!["AI", "AII", "AIII(1)", "AIII(2)", "AIII(3)"]),
        ("A4", vec!["AI", "AIII(1)", "AIII(2)"]),
        ("B3", vec!["BDI(1)", "BDI(2)", "BDI(3)"]),
        ("C4", vec!["CI", "CII(1)", "CII(2)"]),
        ("D4", vec!["BDI(1)", "BDI(2)", "BDI(3)", "BDI(4)", "DIII", "DIII'"]),
        ("D5", vec!["BDI(1)", "BDI(2)", "BDI(4)", "BDI(5)", "DIII"]),
        ("E6", vec!["EI", "EII", "EIII", "EIV"]),
        ("E7", vec!["EV", "EVI", "EVII"]),
        ("E8", vec!["EVIII", "EIX"]),
        ("F4", vec!["FI", "FII"]),
    ]
}

/// Checks σ against the defining properties of a Satake involution: it permutes the roots,
/// is an isometry and an involution, negates black nodes, and sends a white node `α_k` to
/// `α_{p(k)}` plus a nonnegative combination of black nodes.
fn satake_oracle(delta: &RootSystem, s: &SatakeDiagram, sigma: &SigmaAction) -> Result<(), String> {
    let r = delta.rank();
    for k in 0..r {
        let img = &sigma.matrix[k];
        if s.black[k] {
            let mut want = vec![0; r];
            want[k] = -1;
            if *img != want {
                return Err(format!("black node {} ↦ {img:?}", k + 1));
            }
        } else {
            for j in 0..r {
                let base = i64::from(j == s.arrows[k]);
                let extra = img[j] - base;
                if extra < 0 || (extra > 0 && !s.black[j]) {
                    return Err(format!("white node {} ↦ {img:?}", k + 1));
                }
            }
        }
        if sigma.apply(img) != delta.coeff(delta.simple_index(k)) {
            return Err(format!("σ² ≠ id at node {}", k + 1));
        }
    }
    for i in 0..delta.len() {
        if sigma.apply(delta.coeff(i)) != delta.coeff(sigma.image(i)) {
            return Err(format!("root permutation disagrees at root {i}"));
        }
    }
    for a in 0..r {
        for b in 0..r {
            if delta.ip_coeff(&sigma.matrix[a], &sigma.matrix[b]) != delta.ip(delta.simple_index(a), delta.simple_index(b)) {
                return Err("σ is not an isometry".into());
            }
        }
    }
    Ok(())
}

#[test]
fn split_diagram_gives_identity() {
    let delta = RootSystem::build(label("E6")).unwrap();
    let s = derive_sigma(&delta, &SatakeDiagram::split(6)).unwrap();
    for k in 0..6 {
        let mut e = vec![0; 6];
        e[k] = 1;
        assert_eq!(s.matrix[k], e);
    }
    assert!((0..delta.len()).all(|i| s.image(i) == i));
}

#[test]
fn named_diagrams_satisfy_satake_oracle() {
    for (l, names) in named_diagrams() {
        let delta = RootSystem::build(label(l)).unwrap();
        for name in names {
            let s = SatakeDiagram::named(label(l), name).unwrap();
            let sigma = derive_sigma(&delta, &s).unwrap();
            satake_oracle(&delta, &s, &sigma).unwrap_or_else(|e| panic!("{l} {name}: {e}"));
        }
    }
}

#[test]
fn e6_eiv_images() {
    let delta = RootSystem::build(label("E6")).unwrap();
    let s = derive_sigma(&delta, &SatakeDiagram::named(label("E6"), "EIV").unwrap()).unwrap();
    assert_eq!(s.matrix[0], vec![1, 1, 2, 2, 1, 0]);
    assert_eq!(s.matrix[5], vec![0, 1, 1, 2, 2, 1]);
}

#[test]
fn bad_diagrams_are_rejected() {
    assert!(SatakeDiagram::named(label("A4"), "AII").is_err());
    assert!(SatakeDiagram::named(label("A4"), "AIII(3)").is_err());
    assert!(SatakeDiagram::named(label("E7"), "EI").is_err());
    assert!(SatakeDiagram::named(label("D5"), "DIII'").is_err());
    assert!(SatakeDiagram::new(3, &[0], &[(0, 2)]).is_err());
    assert!(SatakeDiagram::new(3, &[], &[(0, 3)]).is_err());
}

#[test]
fn partition_examples() {
    let (_, d) = catalog_case_by_id("E6:Sp4:F4", &[]).unwrap();
    assert!(partition(&d).imaginary.is_empty());
    let (_, d) = catalog_case_by_id("SU2m:SO2m:Spm", &[("m", 3)]).unwrap();
    assert!(partition(&d).imaginary.is_empty());
    let (_, d) = catalog_case_by_id("E6:Sp4:SU6SU2", &[]).unwrap();
    assert!(partition(&d).delta0.is_empty());
}

#[test]
fn restricted_systems_match_printed_types() {
    for inst in table2_instances(5).unwrap() {
        let d = catalog_case(&inst).unwrap();
        let (st, _) = restricted_system(&d).unwrap();
        let want = RootSystem::build(inst.tag.sigma_tilde_label().unwrap()).unwrap();
        assert!(find_isomorphism(&st, &want).is_some(), "{} {:?}: {:?}", inst.id, inst.params, identify(&st));
    }
}

#[test]
fn restricted_system_examples() {
    let ident = |id: &str, p: &[(&str, i64)]| {
        let (_, d) = catalog_case_by_id(id, p).unwrap();
        identify(&restricted_system(&d).unwrap().0)
    };
    assert_eq!(ident("E6:Sp4:F4", &[]), vec![label("A2")]);
    assert_eq!(ident("E6:Sp4:SU6SU2", &[]), vec![label("F4")]);
    assert_eq!(ident("SO2m:SOaSOb:Um", &[("m", 6), ("a", 4)]), vec![label("BC2")]);
    assert_eq!(ident("E6:SO10U1:F4", &[]), vec![label("BC1")]);
}

/// Per root of `Σ̃`: number of roots of `Δ` projecting onto it, counted directly.
fn fibre_counts(d: &DoubleSatakeDiagram) -> HashMap<RationalVector, (usize, usize)> {
    let part = partition(d);
    let mut out: HashMap<RationalVector, (usize, usize)> = HashMap::new();
    for i in 0..d.delta.len() {
        if part.delta0.contains(&i) {
            continue;
        }
        let e = out.entry(d.projection(i)).or_default();
        e.0 += 1;
        if part.complex.contains(&i) {
            e.1 += 1;
        }
    }
    out
}

#[test]
fn catalog_invariants() {
    for inst in table2_instances(5).unwrap() {
        let d = catalog_case(&inst).unwrap();
        let ctx = format!("{} {:?}", inst.id, inst.params);
        for s in [&d.sigma1, &d.sigma2] {
            assert!((0..d.delta.len()).all(|i| s.image(s.image(i)) == i), "{ctx}: σ² ≠ id");
        }
        let part = partition(&d);
        let mut all: Vec<usize> = part.delta0.iter().chain(&part.imaginary).chain(&part.complex).copied().collect();
        all.sort();
        assert_eq!(all, (0..d.delta.len()).collect::<Vec<_>>(), "{ctx}: not a partition");
        let fibres = fibre_counts(&d);
        assert!(fibres.values().all(|&(_, c)| c % 2 == 0), "{ctx}: odd complex fibre");
        let sys = compactness_system(&d, &part, &[]).unwrap();
        for lab in sys.labelings().unwrap() {
            for &i in &part.imaginary {
                let v = lab.noncompact[i].unwrap_or_else(|| panic!("{ctx}: imaginary root unlabeled"));
                assert_eq!(lab.noncompact[d.delta.neg(i)], Some(v), "{ctx}: negation");
                assert_eq!(lab.noncompact[d.sigma1.image(i)], Some(v), "{ctx}: σ1");
            }
            let t = triad_of(&d, &part, &lab).unwrap();
            for (v, &(count, cpx)) in &fibres {
                let k = t.sigma_tilde.index_of(v).unwrap();
                assert_eq!(&t.m[k] + &t.n[k], qi(count as i64), "{ctx}: m + n at {v}");
                let in_cap = t.sigma[k] && t.w[k];
                assert_eq!(in_cap, cpx > 0, "{ctx}: Σ ∩ W vs complex roots at {v}");
            }
            let mut cap = sigma_cap_w(&t);
            cap.sort();
            let mut pr_cpx: Vec<RationalVector> = part.complex.iter().map(|&i| d.projection(i)).collect();
            pr_cpx.sort();
            pr_cpx.dedup();
            assert_eq!(cap, pr_cpx, "{ctx}");
        }
    }
}

#[test]
fn compactness_seeds_are_respected() {
    let (_, d) = catalog_case_by_id("SUn:SUaUb:SUcUd", &[("n", 4), ("a", 1), ("c", 2)]).unwrap();
    let part = partition(&d);
    let sys = compactness_system(&d, &part, &[]).unwrap();
    assert!(sys.free_count() >= 1);
    let free_root = part
        .imaginary
        .iter()
        .copied()
        .find(|&i| {
            let vals: Vec<Option<bool>> = sys.labelings().unwrap().iter().map(|l| l.noncompact[i]).collect();
            vals.contains(&Some(true)) && vals.contains(&Some(false))
        })
        .expect("an undetermined imaginary root");
    for v in [true, false] {
        let r = sys.restrict(&[(free_root, v)]).unwrap();
        assert_eq!(r.free_count() + 1, sys.free_count());
        assert!(r.labelings().unwrap().iter().all(|l| l.noncompact[free_root] == Some(v)));
    }
    assert!(sys.restrict(&[(free_root, true), (free_root, false)]).is_err());
}

#[test]
fn determined_case_has_no_free_parity() {
    let (_, d) = catalog_case_by_id("E6:Sp4:F4", &[]).unwrap();
    let res = analyze(&d, &[]).unwrap();
    assert_eq!(res.free_parities, 0);
    assert_eq!(res.triads.len(), 1);
    assert!(res.consistent);
}

#[test]
fn triad_examples() {
    let (inst, d) = catalog_case_by_id("E6:Sp4:F4", &[]).unwrap();
    let t = &analyze(&d, &[]).unwrap().triads[0];
    let (u, tag) = canonical(t);
    assert_eq!(tag.unwrap().to_string(), "(III-A2)");
    assert_eq!(u.mn_by_length().unwrap(), vec![(qi(4), qi(4))]);
    assert!(are_sim_with(t, &expected_triad(&inst).unwrap(), Mode::Scaled).is_some());
    let (inst, d) = catalog_case_by_id("F4:SU2Sp3:SO9", &[]).unwrap();
    let t = &analyze(&d, &[]).unwrap().triads[0];
    assert!(are_sim_with(t, &expected_triad(&inst).unwrap(), Mode::Scaled).is_some());
}

#[test]
fn exceptional_rows_all_check() {
    for inst in table2_instances(1).unwrap().into_iter().filter(|i| i.params.is_empty()) {
        let c = check_instance(&inst);
        assert!(c.pass(), "{}: {:?}", inst.id, c.error);
    }
}

#[test]
fn catalog_lookup_errors() {
    assert!(catalog_case_by_id("E9:X:Y", &[]).is_err());
    assert!(catalog_case_by_id("SU2m:SO2m:Spm", &[("m", 0)]).is_err());
    assert!(catalog_case_by_id("SU2m:SO2m:Spm", &[]).is_err());
}

#[test]
fn group_names() {
    assert_eq!(group_root_system("SU6").unwrap(), label("A5"));
    assert_eq!(group_root_system("SO9").unwrap(), label("B4"));
    assert_eq!(group_root_system("SO10").unwrap(), label("D5"));
    assert_eq!(group_root_system("Sp3").unwrap(), label("C3"));
    assert_eq!(group_root_system("E7").unwrap(), label("E7"));
    assert!(group_root_system("XY3").is_err());
}

#[test]
fn projection_is_sigma_invariant() {
    let (_, d) = catalog_case_by_id("E6:SU6SU2:SO10U1", &[]).unwrap();
    for i in 0..d.delta.len() {
        let p = d.projection(i);
        for s in [&d.sigma1, &d.sigma2] {
            assert_eq!(d.projection(s.image(i)), p);
        }
    }
    let _: Arc<RootSystem> = d.delta.clone();
    let _: Q = qi(0);
}
