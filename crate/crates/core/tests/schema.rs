use proptest::prelude::*;
use symtriad::rootsys::{RootSystem, TypeLabel};
use symtriad::schema::*;
use symtriad::triads::{candidate_tags, parameter_names, standard, MultSymmetricTriad};
use symtriad::vector::qi;

fn labels() -> Vec<TypeLabel> {
    ["A1", "A3", "B2", "B3", "C3", "BC2", "D4", "G2", "F4"].iter().map(|s| s.parse().unwrap()).collect()
}

fn catalog_triads() -> Vec<MultSymmetricTriad> {
    let mut out = vec![];
    for l in ["A2", "B2", "C3", "BC2", "BC3", "F4", "G2"] {
        for tag in candidate_tags(l.parse().unwrap()) {
            let k = parameter_names(&tag).unwrap().len();
            let params: Vec<_> = (0..k).map(|i| qi(i as i64 + 1)).collect();
            out.push(standard(&tag, &params).unwrap());
        }
    }
    out
}

fn same(a: &MultSymmetricTriad, b: &MultSymmetricTriad) -> bool {
    a.kind == b.kind && a.sigma_tilde.roots() == b.sigma_tilde.roots() && a.sigma == b.sigma && a.w == b.w && a.m == b.m && a.n == b.n
}

#[test]
fn root_system_round_trip() {
    for l in labels() {
        let rs = RootSystem::build(l).unwrap();
        let j = RootSystemJson::from_system(&rs).unwrap();
        let text = serde_json::to_string(&j).unwrap();
        let back: RootSystemJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, j);
        let rs2 = back.to_system().unwrap();
        assert_eq!(rs2.roots(), rs.roots());
        assert_eq!(rs2.simple(), rs.simple());
    }
}

#[test]
fn simple_list_is_optional() {
    let rs = RootSystem::build("B3".parse().unwrap()).unwrap();
    let mut j = RootSystemJson::from_system(&rs).unwrap();
    j.simple.clear();
    j.highest = None;
    j.label.clear();
    let rs2 = j.to_system().unwrap();
    assert_eq!(rs2.roots(), rs.roots());
    assert_eq!(rs2.label(), rs.label());
}

#[test]
fn triad_round_trip_on_catalog() {
    for t in catalog_triads() {
        let j = TriadJson::from_triad(&t).unwrap();
        let back: TriadJson = serde_json::from_str(&serde_json::to_string(&j).unwrap()).unwrap();
        assert!(same(&back.to_triad().unwrap(), &t));
    }
}

#[test]
fn bad_input_is_rejected() {
    let rs = RootSystem::build("A2".parse().unwrap()).unwrap();
    let mut j = RootSystemJson::from_system(&rs).unwrap();
    j.roots[0][0] = [1, 0];
    assert!(j.to_system().is_err());
    let mut j = RootSystemJson::from_system(&rs).unwrap();
    j.roots.pop();
    assert!(j.to_system().is_err());
    let mut j = RootSystemJson::from_system(&rs).unwrap();
    j.roots[1].push([0, 1]);
    assert!(j.to_system().is_err());

    let t = &catalog_triads()[0];
    let mut j = TriadJson::from_triad(t).unwrap();
    j.sigma.push(999);
    assert!(j.to_triad().is_err());
    assert!(serde_json::from_str::<TriadJson>("{\"kind\": \"ordinary\"}").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Reordering the written root list only relabels indices.
    #[test]
    fn triad_indices_follow_the_written_order(pick in 0usize..1000, perm_seed in any::<u64>()) {
        let ts = catalog_triads();
        let t = &ts[pick % ts.len()];
        let j = TriadJson::from_triad(t).unwrap();
        let n = j.sigma_tilde.roots.len();
        let mut order: Vec<usize> = (0..n).collect();
        let mut s = perm_seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (s >> 33) as usize % (i + 1));
        }
        let mut inv = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            inv[old] = new;
        }
        let mut k = j.clone();
        k.sigma_tilde.roots = order.iter().map(|&o| j.sigma_tilde.roots[o].clone()).collect();
        k.sigma = j.sigma.iter().map(|&i| inv[i]).collect();
        k.w = j.w.iter().map(|&i| inv[i]).collect();
        k.m = j.m.iter().map(|(i, x)| (inv[*i], *x)).collect();
        k.n = j.n.iter().map(|(i, x)| (inv[*i], *x)).collect();
        prop_assert!(same(&k.to_triad().unwrap(), t));
    }

    #[test]
    fn rationals_round_trip(num in -50i64..50, den in 1i64..50) {
        let rs = RootSystem::build("A1".parse().unwrap()).unwrap();
        let mut j = RootSystemJson::from_system(&rs).unwrap();
        let g = num_gcd(num, den);
        j.roots = vec![vec![[num / g, den / g], [0, 1]], vec![[-num / g, den / g], [0, 1]]];
        j.simple.clear();
        if num != 0 {
            let rs2 = j.to_system().unwrap();
            let back = RootSystemJson::from_system(&rs2).unwrap();
            let mut want = j.roots.clone();
            want.sort_by_key(|v| v[0][0] * 1_000_000 / v[0][1]);
            let mut got = back.roots.clone();
            got.sort_by_key(|v| v[0][0] * 1_000_000 / v[0][1]);
            prop_assert_eq!(got, want);
        }
    }
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs().max(1) } else { num_gcd(b, a % b) }
}
