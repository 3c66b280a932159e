//! The dual zonotope: chambers, covectors, gates, antipodes and Coxeter graphs.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::arrangement::{intersection_poset, keys_split, Arrangement, HyperplaneSet, IntersectionPoset};
use crate::error::{invariant, Error, Result};
use crate::exactlin::{dot, Field, Scalar, Sign};

/// Default bound on the number of chambers enumerated.
pub const DEFAULT_CHAMBER_CAP: usize = 100_000;

/// A sign vector over the hyperplanes, stored as the sets of positive and
/// negative positions.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct Covector {
    pub pos: u64,
    pub neg: u64,
}

impl Covector {
    pub const ZERO: Covector = Covector { pos: 0, neg: 0 };

    pub fn from_signs(signs: &[Sign]) -> Self {
        let mut c = Covector::ZERO;
        for (i, s) in signs.iter().enumerate() {
            match s {
                Sign::Plus => c.pos |= 1 << i,
                Sign::Minus => c.neg |= 1 << i,
                Sign::Zero => {}
            }
        }
        c
    }

    pub fn sign(self, i: usize) -> Sign {
        if self.pos >> i & 1 == 1 {
            Sign::Plus
        } else if self.neg >> i & 1 == 1 {
            Sign::Minus
        } else {
            Sign::Zero
        }
    }

    pub fn signs(self, m: usize) -> Vec<Sign> {
        (0..m).map(|i| self.sign(i)).collect()
    }

    pub fn support(self) -> HyperplaneSet {
        HyperplaneSet(self.pos | self.neg)
    }

    pub fn zero_set(self, m: usize) -> HyperplaneSet {
        HyperplaneSet::full(m).minus(self.support())
    }

    /// `self ∘ other`: signs of `self`, zeros filled from `other`.
    pub fn compose(self, other: Covector) -> Covector {
        let s = self.pos | self.neg;
        Covector { pos: self.pos | (other.pos & !s), neg: self.neg | (other.neg & !s) }
    }

    /// `self ≤ other`: every nonzero sign of `self` is matched in `other`.
    pub fn conforms_to(self, other: Covector) -> bool {
        self.pos & !other.pos == 0 && self.neg & !other.neg == 0
    }

    pub fn negate(self) -> Covector {
        Covector { pos: self.neg, neg: self.pos }
    }

    /// Flips the signs at the given positions.
    pub fn flip(self, set: HyperplaneSet) -> Covector {
        let m = set.0;
        Covector { pos: (self.pos & !m) | (self.neg & m), neg: (self.neg & !m) | (self.pos & m) }
    }

    pub fn with_zeros(self, set: HyperplaneSet) -> Covector {
        Covector { pos: self.pos & !set.0, neg: self.neg & !set.0 }
    }

    /// Positions where one is positive and the other negative.
    pub fn separation(self, other: Covector) -> HyperplaneSet {
        HyperplaneSet((self.pos & other.neg) | (self.neg & other.pos))
    }

    pub fn to_string(self, m: usize) -> String {
        (0..m).map(|i| self.sign(i).symbol()).collect()
    }

    pub fn parse(s: &str) -> Result<Covector> {
        let mut signs = Vec::with_capacity(s.len());
        for c in s.chars() {
            signs.push(match c {
                '+' => Sign::Plus,
                '-' => Sign::Minus,
                '0' => Sign::Zero,
                _ => return Err(Error::Validation(format!("bad sign character `{c}` in `{s}`"))),
            });
        }
        Ok(Covector::from_signs(&signs))
    }

    /// Lexicographic comparison of sign sequences with `- < 0 < +`.
    pub fn lex_cmp(self, other: Covector) -> Ordering {
        let diff = (self.pos ^ other.pos) | (self.neg ^ other.neg);
        if diff == 0 {
            return Ordering::Equal;
        }
        let i = diff.trailing_zeros() as usize;
        self.sign(i).cmp(&other.sign(i))
    }
}

/// A face of the zonotope, dual to the cone of its covector.
#[derive(Clone, Debug)]
pub struct ZFace {
    pub covector: Covector,
    /// Hyperplanes containing the cone: the key of the dual flat.
    pub zero_set: HyperplaneSet,
    pub dim: usize,
    /// Relative interior point of the cone.
    pub witness: Vec<Scalar>,
    /// Chamber ids whose covector extends this one.
    pub vertices: Vec<usize>,
}

/// Walls at a chamber and the Coxeter graph on them.
#[derive(Clone, Debug)]
pub struct CoxeterGraph {
    pub walls: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl CoxeterGraph {
    /// Connected components as lists of positions into `walls`.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let k = self.walls.len();
        let mut comp = vec![usize::MAX; k];
        let mut out = Vec::new();
        for s in 0..k {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut i = 0;
            while i < members.len() {
                let v = members[i];
                for &(a, b) in &self.edges {
                    let w = if a == v { b } else if b == v { a } else { continue };
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                    }
                }
                i += 1;
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }
}

/// The face lattice of the zonotope dual to an essential arrangement.
#[derive(Clone, Debug)]
pub struct Zonotope {
    pub arrangement: Arrangement,
    pub poset: IntersectionPoset,
    rays: Vec<(Covector, Vec<Scalar>)>,
    /// Chambers in lexicographic sign order.
    pub chambers: Vec<Covector>,
    chamber_index: HashMap<Covector, usize>,
    /// Wall hyperplanes of each chamber.
    pub walls: Vec<HyperplaneSet>,
    /// Per chamber, `(hyperplane, neighbouring chamber)` sorted by hyperplane.
    pub neighbors: Vec<Vec<(usize, usize)>>,
    /// Faces by dimension, then lexicographic covector order.
    pub faces: Vec<ZFace>,
    face_index: HashMap<Covector, usize>,
}

impl Zonotope {
    pub fn new(a: &Arrangement) -> Result<Self> {
        Self::with_cap(a, DEFAULT_CHAMBER_CAP)
    }

    pub fn with_cap(a: &Arrangement, cap: usize) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::Validation("the zonotope of an empty arrangement is a point; nothing to enumerate".into()));
        }
        let m = a.len();
        let n = a.ambient_dim();
        let poset = intersection_poset(a);
        let mut rays = Vec::new();
        for f in poset.flats.iter().filter(|f| f.dim() == 1) {
            let d = f.basis.basis[0].clone();
            let cov = Covector::from_signs(&a.signs_of(&d));
            rays.push((cov.negate(), d.iter().map(Field::neg).collect()));
            rays.push((cov, d));
        }
        let mut z = Zonotope {
            arrangement: a.clone(),
            poset,
            rays,
            chambers: Vec::new(),
            chamber_index: HashMap::new(),
            walls: Vec::new(),
            neighbors: Vec::new(),
            faces: Vec::new(),
            face_index: HashMap::new(),
        };
        let seed = z.rays.iter().fold(Covector::ZERO, |acc, (c, _)| acc.compose(*c));
        invariant(seed.zero_set(m).is_empty(), || "composition of all cocircuits is not a tope".into())?;
        invariant(z.is_realizable(seed), || "seed chamber is not realizable".into())?;
        let mut found: HashMap<Covector, Vec<(usize, Covector)>> = HashMap::new();
        let mut queue = VecDeque::from([seed]);
        found.insert(seed, Vec::new());
        let mut order = Vec::new();
        while let Some(c) = queue.pop_front() {
            order.push(c);
            let mut nbrs = Vec::new();
            for j in 0..m {
                let d = c.flip(HyperplaneSet::singleton(j));
                if found.contains_key(&d) || z.is_realizable(d) {
                    nbrs.push((j, d));
                    if !found.contains_key(&d) {
                        if found.len() >= cap {
                            return Err(Error::CapExceeded { what: "chamber enumeration".into(), cap });
                        }
                        found.insert(d, Vec::new());
                        queue.push_back(d);
                    }
                }
            }
            found.insert(c, nbrs);
        }
        order.sort_by(|x, y| x.lex_cmp(*y));
        z.chamber_index = order.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        z.neighbors = order
            .iter()
            .map(|c| found[c].iter().map(|&(j, d)| (j, z.chamber_index[&d])).collect())
            .collect();
        z.walls = z.neighbors.iter().map(|ns| ns.iter().map(|&(j, _)| j).collect()).collect();
        z.chambers = order;

        let mut covs: Vec<Covector> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for f in &z.poset.flats {
            for c in &z.chambers {
                let x = c.with_zeros(f.key);
                if seen.insert(x) && z.is_realizable(x) {
                    covs.push(x);
                }
            }
        }
        let mut faces: Vec<ZFace> = covs
            .into_iter()
            .map(|x| {
                let zero_set = x.zero_set(m);
                let vertices = z
                    .chambers
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| x.conforms_to(**c))
                    .map(|(i, _)| i)
                    .collect();
                ZFace { covector: x, zero_set, dim: a.rank_of(zero_set), witness: z.witness(x), vertices }
            })
            .collect();
        faces.sort_by(|p, q| p.dim.cmp(&q.dim).then_with(|| p.covector.lex_cmp(q.covector)));
        z.face_index = faces.iter().enumerate().map(|(i, f)| (f.covector, i)).collect();
        z.faces = faces;
        invariant(z.faces.last().is_some_and(|f| f.dim == n), || "zonotope has no top face".into())?;
        Ok(z)
    }

    pub fn hyperplane_count(&self) -> usize {
        self.arrangement.len()
    }

    pub fn dim(&self) -> usize {
        self.arrangement.ambient_dim()
    }

    /// Sum of the extreme rays of the closed cone of `x`.
    pub fn witness(&self, x: Covector) -> Vec<Scalar> {
        let mut w = vec![Scalar::int(0); self.dim()];
        for (c, d) in &self.rays {
            if c.conforms_to(x) {
                for (wi, di) in w.iter_mut().zip(d) {
                    *wi = wi.add(di);
                }
            }
        }
        w
    }

    pub fn covector_of(&self, p: &[Scalar]) -> Covector {
        Covector::from_signs(&self.arrangement.signs_of(p))
    }

    pub fn is_realizable(&self, x: Covector) -> bool {
        self.covector_of(&self.witness(x)) == x
    }

    pub fn chamber_count(&self) -> usize {
        self.chambers.len()
    }

    pub fn chamber_id(&self, c: Covector) -> Option<usize> {
        self.chamber_index.get(&c).copied()
    }

    pub fn face_id(&self, c: Covector) -> Option<usize> {
        self.face_index.get(&c).copied()
    }

    pub fn face(&self, id: usize) -> &ZFace {
        &self.faces[id]
    }

    /// The face whose only vertex is the chamber.
    pub fn vertex_face(&self, chamber: usize) -> usize {
        self.face_index[&self.chambers[chamber]]
    }

    /// The whole zonotope.
    pub fn top_face(&self) -> usize {
        self.face_index[&Covector::ZERO]
    }

    pub fn is_simplicial(&self) -> bool {
        self.walls.iter().all(|w| w.len() == self.dim())
    }

    /// Number of faces of each dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dim() + 1];
        for face in &self.faces {
            f[face.dim] += 1;
        }
        f
    }

    pub fn separation(&self, x: usize, y: usize) -> HyperplaneSet {
        self.chambers[x].separation(self.chambers[y])
    }

    pub fn distance(&self, x: usize, y: usize) -> usize {
        self.separation(x, y).len()
    }

    pub fn contains_vertex(&self, f: usize, x: usize) -> bool {
        self.faces[f].covector.conforms_to(self.chambers[x])
    }

    /// Face inclusion `f1 ⊆ f2`.
    pub fn face_leq(&self, f1: usize, f2: usize) -> bool {
        self.faces[f2].covector.conforms_to(self.faces[f1].covector)
    }

    /// Nearest vertex of `f` to `x`.
    pub fn gate(&self, x: usize, f: usize) -> usize {
        self.chamber_index[&self.faces[f].covector.compose(self.chambers[x])]
    }

    pub fn parallel_translate(&self, f1: usize, f2: usize, x: usize) -> Result<usize> {
        if self.faces[f1].zero_set != self.faces[f2].zero_set {
            return Err(Error::Validation("faces are not parallel".into()));
        }
        if !self.contains_vertex(f1, x) {
            return Err(Error::Validation("chamber is not a vertex of the source face".into()));
        }
        Ok(self.gate(x, f2))
    }

    pub fn antipode(&self, x: usize, f: usize) -> Result<usize> {
        if !self.contains_vertex(f, x) {
            return Err(Error::Validation("chamber is not a vertex of the face".into()));
        }
        Ok(self.chamber_index[&self.chambers[x].flip(self.faces[f].zero_set)])
    }

    /// Edges of the zonotope at a chamber, one per wall.
    pub fn edges_at(&self, x: usize) -> Vec<usize> {
        self.walls[x]
            .iter()
            .map(|j| self.face_index[&self.chambers[x].with_zeros(HyperplaneSet::singleton(j))])
            .collect()
    }

    /// The face at `x` dual to the flat with the given key, if it exists.
    pub fn face_at(&self, x: usize, key: HyperplaneSet) -> Option<usize> {
        self.face_id(self.chambers[x].with_zeros(key))
    }

    pub fn span_face(&self, x: usize, edges: &[usize]) -> Result<usize> {
        if !self.is_simplicial() {
            return Err(Error::NotSimplicial("span of edges".into()));
        }
        let mut union = HyperplaneSet::EMPTY;
        for &e in edges {
            if self.faces[e].dim != 1 || !self.contains_vertex(e, x) {
                return Err(Error::Validation("span needs edges through the given vertex".into()));
            }
            union = union.union(self.faces[e].zero_set);
        }
        let key = self.arrangement.closure(union);
        let f = self
            .face_at(x, key)
            .ok_or_else(|| Error::Invariant(format!("no face at the vertex dual to {key}")))?;
        let mut at_x: Vec<usize> = self.edges_at(x).into_iter().filter(|&e| self.face_leq(e, f)).collect();
        let mut given = edges.to_vec();
        at_x.sort_unstable();
        given.sort_unstable();
        given.dedup();
        invariant(at_x == given, || "spanned face has extra edges at the vertex".into())?;
        Ok(f)
    }

    pub fn orthogonal(&self, f1: usize, f2: usize) -> bool {
        f1 != f2 && keys_split(&self.arrangement, &[self.faces[f1].zero_set, self.faces[f2].zero_set])
    }

    pub fn coxeter_graph(&self, x: usize) -> Result<CoxeterGraph> {
        if !self.is_simplicial() {
            return Err(Error::NotSimplicial("Coxeter graph".into()));
        }
        let walls = self.walls[x].to_vec();
        let mut edges = Vec::new();
        for i in 0..walls.len() {
            for j in i + 1..walls.len() {
                let pair = HyperplaneSet::singleton(walls[i]).with(walls[j]);
                if self.arrangement.closure(pair).len() >= 3 {
                    edges.push((i, j));
                }
            }
        }
        Ok(CoxeterGraph { walls, edges })
    }

    /// Faces of dimension `dim(f) - 1` contained in `f`.
    pub fn facets(&self, f: usize) -> Vec<usize> {
        let target = self.faces[f].dim;
        if target == 0 {
            return Vec::new();
        }
        (0..self.faces.len())
            .filter(|&g| self.faces[g].dim + 1 == target && self.face_leq(g, f))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let m = self.hyperplane_count();
        json!({
            "hyperplanes": m,
            "dim": self.dim(),
            "chambers": self.chambers.iter().map(|c| c.to_string(m)).collect::<Vec<_>>(),
            "faces": self.faces.iter().map(|f| json!({
                "covector": f.covector.to_string(m),
                "dim": f.dim,
                "dual_flat": f.zero_set.to_vec(),
                "vertices": f.vertices,
            })).collect::<Vec<_>>(),
        })
    }

    /// Graphviz rendering of the chamber adjacency graph.
    pub fn chamber_graph_dot(&self) -> String {
        let m = self.hyperplane_count();
        let mut out = String::from("graph chambers {\n");
        for (i, c) in self.chambers.iter().enumerate() {
            let _ = writeln!(out, "  c{i} [label=\"c{i} {}\"];", c.to_string(m));
        }
        for (i, ns) in self.neighbors.iter().enumerate() {
            for &(j, k) in ns {
                if i < k {
                    let _ = writeln!(out, "  c{i} -- c{k} [label=\"H{j}\"];");
                }
            }
        }
        out.push_str("}\n");
        out
    }

    /// Chambers of a rank-2 arrangement in cyclic order, starting at chamber 0
    /// and stepping first to its lower-indexed neighbor.
    pub fn polygon_order(&self) -> Result<Vec<usize>> {
        if self.dim() != 2 {
            return Err(Error::Validation(format!("cyclic chamber labels need rank 2, not rank {}", self.dim())));
        }
        let mut cycle = vec![0];
        let mut prev = usize::MAX;
        loop {
            let cur = *cycle.last().unwrap();
            let next = self.neighbors[cur].iter().map(|&(_, d)| d).filter(|&d| d != prev).min().unwrap();
            if next == 0 {
                return Ok(cycle);
            }
            prev = cur;
            cycle.push(next);
        }
    }
}

/// Chambers of an essential arrangement, in lexicographic sign order.
pub fn chambers(a: &Arrangement) -> Result<Vec<Covector>> {
    Ok(Zonotope::new(a)?.chambers)
}

/// Checks that a point lies on no hyperplane.
pub fn is_generic_point(a: &Arrangement, p: &[Scalar]) -> bool {
    a.normals().iter().all(|n| !dot(n, p).is_zero())
}
