//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use hypercurve::arrangement::HyperplaneSet;
use hypercurve::deligne::{Garside, Positive, Simple};
use hypercurve::generators::{boolean, braid, dihedral, direct_sum, h3, type_b};
use hypercurve::{Arrangement, Zonotope};

/// Named test arrangements covering every generator family.
pub fn all_generators() -> Vec<(String, Arrangement)> {
    let mut out = vec![
        ("A2".to_string(), braid(3).unwrap()),
        ("A3".to_string(), braid(4).unwrap()),
        ("B3".to_string(), type_b(3).unwrap()),
        ("H3".to_string(), h3().unwrap()),
    ];
    for m in 3..=8 {
        out.push((format!("I2({m})"), dihedral(m).unwrap()));
    }
    for n in 2..=4 {
        out.push((format!("Boolean({n})"), boolean(n).unwrap()));
    }
    out.push(("A2+A1".to_string(), direct_sum(&braid(3).unwrap(), &boolean(1).unwrap()).unwrap()));
    out
}

/// Chambers of a rank-2 zonotope in cyclic order starting at chamber 0.
pub fn polygon_cycle(z: &Zonotope) -> Vec<usize> {
    let mut cycle = vec![0];
    let mut prev = usize::MAX;
    loop {
        let cur = *cycle.last().unwrap();
        let next = z.neighbors[cur].iter().map(|&(_, d)| d).filter(|&d| d != prev).min().unwrap();
        if next == 0 {
            return cycle;
        }
        prev = cur;
        cycle.push(next);
    }
}

/// Chamber sequences of every positive edge path of length `len` from `x`.
pub fn positive_walks(z: &Zonotope, x: usize, len: usize) -> Vec<Vec<usize>> {
    let mut walks = vec![vec![x]];
    for _ in 0..len {
        walks = walks
            .iter()
            .flat_map(|w| {
                let last = *w.last().unwrap();
                z.neighbors[last].iter().map(move |&(_, d)| {
                    let mut v = w.clone();
                    v.push(d);
                    v
                })
            })
            .collect();
    }
    walks
}

/// Number of hyperplanes separating two chambers, from their sign vectors.
pub fn distance(z: &Zonotope, a: usize, b: usize) -> usize {
    let (ca, cb) = (z.chambers[a], z.chambers[b]);
    (0..z.hyperplane_count()).filter(|&j| ca.sign(j) != cb.sign(j)).count()
}

/// All geodesic chamber sequences from `a` to `b`.
pub fn geodesics(z: &Zonotope, a: usize, b: usize) -> Vec<Vec<usize>> {
    if a == b {
        return vec![vec![a]];
    }
    let d = distance(z, a, b);
    let mut out = Vec::new();
    for &(_, c) in &z.neighbors[a] {
        if distance(z, c, b) + 1 == d {
            for mut tail in geodesics(z, c, b) {
                tail.insert(0, a);
                out.push(tail);
            }
        }
    }
    out
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    let mut j = i;
    while parent[j] != r {
        let n = parent[j];
        parent[j] = r;
        j = n;
    }
    r
}

/// Classes of positive walks from one chamber under the congruence
/// generated by swapping one minimal subpath for another with the same ends.
pub fn positive_classes(z: &Zonotope, walks: &[Vec<usize>]) -> Vec<usize> {
    let index: HashMap<&Vec<usize>, usize> = walks.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut geo: HashMap<(usize, usize), Vec<Vec<usize>>> = HashMap::new();
    let mut parent: Vec<usize> = (0..walks.len()).collect();
    for (i, w) in walks.iter().enumerate() {
        for s in 0..w.len() {
            for e in s + 1..w.len() {
                if distance(z, w[s], w[e]) != e - s {
                    continue;
                }
                let alts = geo.entry((w[s], w[e])).or_insert_with(|| geodesics(z, w[s], w[e])).clone();
                for alt in alts {
                    let mut v = w[..s].to_vec();
                    v.extend(alt);
                    v.extend_from_slice(&w[e + 1..]);
                    let j = index[&v];
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    parent[ri] = rj;
                }
            }
        }
    }
    (0..walks.len()).map(|i| find(&mut parent, i)).collect()
}

/// Normal form of a chamber walk read as arrows.
pub fn walk_positive(g: &Garside<'_>, w: &[usize]) -> Positive {
    let simples = w.windows(2).map(|p| Simple::new(p[0], p[1])).collect();
    g.positive(w[0], simples).unwrap()
}

/// Irreducibility by trying every split of the hyperplanes into two parts
/// whose ranks add up.
pub struct SplitOracle<'a> {
    pub a: &'a Arrangement,
    memo: HashMap<HyperplaneSet, bool>,
}

impl<'a> SplitOracle<'a> {
    pub fn new(a: &'a Arrangement) -> Self {
        SplitOracle { a, memo: HashMap::new() }
    }

    pub fn splits(&mut self, key: HyperplaneSet) -> bool {
        if let Some(&b) = self.memo.get(&key) {
            return b;
        }
        let elems = key.to_vec();
        let r = self.a.rank_of(key);
        let mut found = false;
        if elems.len() >= 2 {
            let rest = &elems[1..];
            for mask in 0u64..(1u64 << rest.len()) - 1 {
                let mut k1 = HyperplaneSet::singleton(elems[0]);
                for (i, &e) in rest.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        k1.insert(e);
                    }
                }
                let k2 = key.minus(k1);
                if self.a.rank_of(k1) + self.a.rank_of(k2) == r {
                    found = true;
                    break;
                }
            }
        }
        self.memo.insert(key, found);
        found
    }

    /// Finest split of a key into pieces whose ranks add up.
    pub fn components(&mut self, key: HyperplaneSet) -> Vec<HyperplaneSet> {
        let elems = key.to_vec();
        if elems.len() < 2 || !self.splits(key) {
            return vec![key];
        }
        let r = self.a.rank_of(key);
        let rest = &elems[1..];
        for mask in 0u64..(1u64 << rest.len()) - 1 {
            let mut k1 = HyperplaneSet::singleton(elems[0]);
            for (i, &e) in rest.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    k1.insert(e);
                }
            }
            let k2 = key.minus(k1);
            if self.a.rank_of(k1) + self.a.rank_of(k2) == r {
                let mut out = self.components(k1);
                out.extend(self.components(k2));
                out.sort();
                return out;
            }
        }
        unreachable!()
    }
}

/// Every flat, closing up one hyperplane at a time.
pub fn all_flats(a: &Arrangement) -> BTreeSet<HyperplaneSet> {
    let mut out = BTreeSet::from([HyperplaneSet::EMPTY]);
    let mut frontier = vec![HyperplaneSet::EMPTY];
    while let Some(k) = frontier.pop() {
        for j in 0..a.len() {
            if !k.contains(j) {
                let c = a.closure(k.with(j));
                if out.insert(c) {
                    frontier.push(c);
                }
            }
        }
    }
    out
}

/// `|μ(V, 0)|` of the intersection lattice, by the defining recursion.
pub fn mobius_magnitude(a: &Arrangement) -> i64 {
    let flats: Vec<HyperplaneSet> = all_flats(a).into_iter().collect();
    let mut ordered = flats.clone();
    ordered.sort_by_key(|k| a.rank_of(*k));
    let mut mu: HashMap<HyperplaneSet, i64> = HashMap::new();
    for &f in &ordered {
        if f.is_empty() {
            mu.insert(f, 1);
            continue;
        }
        let s: i64 = ordered.iter().filter(|&&g| g != f && g.is_subset(f)).map(|g| mu[g]).sum();
        mu.insert(f, -s);
    }
    mu[&a.all()].abs()
}
