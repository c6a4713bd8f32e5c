//! Colored root-system isomorphism search.
//!
//! Roots carry a color (an arbitrary `u64` chosen by the caller) and a length key.
//! Colors are refined by a few rounds of neighbourhood hashing, which both rejects
//! most non-isomorphic pairs immediately and restricts the candidate images during
//! the backtracking over simple roots.

use crate::rootsys::{Isomorphism, RootSystem};
use crate::vector::Q;
use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, VecDeque};
use std::hash::{Hash, Hasher};

const ROUNDS: usize = 3;

fn h<T: Hash>(x: &T) -> u64 {
    let mut s = DefaultHasher::new();
    x.hash(&mut s);
    s.finish()
}

/// Length key of each root: absolute squared length in strict mode, otherwise the
/// ratio to the shortest root of its irreducible component.
fn length_keys(rs: &RootSystem, strict: bool) -> Vec<u64> {
    let norms: Vec<Q> = rs.roots().iter().map(|v| v.norm2()).collect();
    if strict {
        return norms.iter().map(h).collect();
    }
    let comp = rs.components();
    let mut min: HashMap<usize, Q> = HashMap::new();
    for (c, n) in comp.iter().zip(&norms) {
        let e = min.entry(*c).or_insert_with(|| n.clone());
        if n < e {
            *e = n.clone();
        }
    }
    norms.iter().zip(&comp).map(|(n, c)| h(&(n / &min[c]))).collect()
}

/// Refined colors after a fixed number of rounds.
pub fn refine(rs: &RootSystem, colors: &[u64], strict: bool) -> Vec<u64> {
    let keys = length_keys(rs, strict);
    let n = rs.len();
    let mut cur: Vec<u64> = (0..n).map(|i| h(&(colors[i], keys[i]))).collect();
    let table = rs.neighbours();
    let nbrs: Vec<Vec<(u64, usize)>> = table
        .iter()
        .map(|row| row.iter().map(|x| (h(&(x.cartan_ij, x.cartan_ji, x.sum_is_root)), x.j)).collect())
        .collect();
    for _ in 0..ROUNDS {
        let next: Vec<u64> = (0..n)
            .map(|i| {
                let mut m: Vec<(u64, u64)> = nbrs[i].iter().map(|&(p, j)| (p, cur[j])).collect();
                m.sort_unstable();
                h(&(cur[i], m))
            })
            .collect();
        cur = next;
    }
    cur
}

/// Colored isomorphism `S -> T`: preserves roots, Cartan integers and colors.
pub fn find(s: &RootSystem, cs: &[u64], t: &RootSystem, ct: &[u64], strict: bool) -> Option<Isomorphism> {
    find_refined(s, &refine(s, cs, strict), t, &refine(t, ct, strict))
}

/// As [`find`], with colors already refined by [`refine`].
pub fn find_refined(s: &RootSystem, rs_col: &[u64], t: &RootSystem, rt_col: &[u64]) -> Option<Isomorphism> {
    if s.len() != t.len() || s.rank() != t.rank() {
        return None;
    }
    let mut a = rs_col.to_vec();
    let mut b = rt_col.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    if a != b {
        return None;
    }
    let r = s.rank();
    if r == 0 {
        return Some(Isomorphism { simple_images: vec![], root_map: vec![], scales: vec![] });
    }
    // breadth-first order on the Dynkin diagram, component by component
    let simple_idx: Vec<usize> = (0..r).map(|k| s.simple_index(k)).collect();
    let mut order = Vec::with_capacity(r);
    let mut placed = vec![false; r];
    for start in 0..r {
        if placed[start] {
            continue;
        }
        placed[start] = true;
        let mut q = VecDeque::from([start]);
        while let Some(x) = q.pop_front() {
            order.push(x);
            for y in 0..r {
                if !placed[y] && s.cartan(simple_idx[x], simple_idx[y]) != 0 {
                    placed[y] = true;
                    q.push_back(y);
                }
            }
        }
    }
    let mut pos = vec![0; r];
    for (p, &k) in order.iter().enumerate() {
        pos[k] = p;
    }
    // roots grouped by the step at which their support is fully assigned
    let mut completes: Vec<Vec<usize>> = vec![vec![]; r];
    for i in 0..s.len() {
        let step = s.coeff(i).iter().enumerate().filter(|(_, &c)| c != 0).map(|(k, _)| pos[k]).max().unwrap();
        completes[step].push(i);
    }
    let mut by_color: HashMap<u64, Vec<usize>> = HashMap::new();
    for j in 0..t.len() {
        by_color.entry(rt_col[j]).or_default().push(j);
    }
    let mut st = Search {
        s,
        t,
        rs_col,
        rt_col,
        order,
        completes,
        by_color,
        images: vec![usize::MAX; r],
        root_map: vec![usize::MAX; s.len()],
        used: vec![false; t.len()],
    };
    if st.go(0) {
        let scales = (0..r)
            .map(|k| t.root(st.images[k]).norm2() / s.root(simple_idx[k]).norm2())
            .collect();
        Some(Isomorphism { simple_images: st.images, root_map: st.root_map, scales })
    } else {
        None
    }
}

struct Search<'a> {
    s: &'a RootSystem,
    t: &'a RootSystem,
    rs_col: &'a [u64],
    rt_col: &'a [u64],
    order: Vec<usize>,
    completes: Vec<Vec<usize>>,
    by_color: HashMap<u64, Vec<usize>>,
    images: Vec<usize>,
    root_map: Vec<usize>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn go(&mut self, step: usize) -> bool {
        if step == self.order.len() {
            return true;
        }
        let k = self.order[step];
        let sk = self.s.simple_index(k);
        let Some(cands) = self.by_color.get(&self.rs_col[sk]).cloned() else { return false };
        'cand: for j in cands {
            if self.used[j] {
                continue;
            }
            for &m in &self.order[..step] {
                let sm = self.s.simple_index(m);
                let fm = self.images[m];
                if self.s.cartan(sk, sm) != self.t.cartan(j, fm) || self.s.cartan(sm, sk) != self.t.cartan(fm, j) {
                    continue 'cand;
                }
            }
            self.images[k] = j;
            let mut newly = vec![];
            let mut ok = true;
            for &i in &self.completes[step] {
                let mut c = vec![0i64; self.t.rank()];
                for (kk, &ck) in self.s.coeff(i).iter().enumerate() {
                    if ck != 0 {
                        for (x, y) in c.iter_mut().zip(self.t.coeff(self.images[kk])) {
                            *x += ck * y;
                        }
                    }
                }
                match self.t.index_of_coeff(&c) {
                    Some(ti) if !self.used[ti] && self.rt_col[ti] == self.rs_col[i] => {
                        self.used[ti] = true;
                        self.root_map[i] = ti;
                        newly.push(i);
                    }
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok && self.go(step + 1) {
                return true;
            }
            for i in newly {
                self.used[self.root_map[i]] = false;
                self.root_map[i] = usize::MAX;
            }
            self.images[k] = usize::MAX;
        }
        false
    }
}
