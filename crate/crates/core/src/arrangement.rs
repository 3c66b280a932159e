//! Central hyperplane arrangements, their intersection posets, irreducible
//! flats, nested sets and the complexes built from them.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{invariant, Error, Result};
use crate::exactlin::{self, canonicalize_direction, dot, kernel, rref, Field, Scalar, Sign, SubspaceBasis};
use crate::zonotope::Zonotope;

/// Largest number of hyperplanes an arrangement may carry.
pub const MAX_HYPERPLANES: usize = 64;

/// A set of hyperplane indices packed into a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct HyperplaneSet(pub u64);

impl HyperplaneSet {
    pub const EMPTY: HyperplaneSet = HyperplaneSet(0);

    pub fn full(m: usize) -> Self {
        if m >= 64 {
            HyperplaneSet(u64::MAX)
        } else {
            HyperplaneSet((1u64 << m) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        HyperplaneSet(1u64 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u64 << i;
    }

    pub fn with(self, i: usize) -> Self {
        HyperplaneSet(self.0 | 1u64 << i)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, o: Self) -> Self {
        HyperplaneSet(self.0 | o.0)
    }

    pub fn inter(self, o: Self) -> Self {
        HyperplaneSet(self.0 & o.0)
    }

    pub fn minus(self, o: Self) -> Self {
        HyperplaneSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: Self) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_disjoint(self, o: Self) -> bool {
        self.0 & o.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for HyperplaneSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut s = HyperplaneSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl fmt::Debug for HyperplaneSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for HyperplaneSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Linear map recorded when a non-essential input is quotiented by the
/// common intersection of its hyperplanes: new coordinates are the
/// coefficients along `row_space`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Essentialization {
    pub original_dim: usize,
    pub row_space: SubspaceBasis<Scalar>,
}

/// A central, essential arrangement of pairwise distinct hyperplanes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    ambient_dim: usize,
    normals: Vec<Vec<Scalar>>,
    essentialization: Option<Essentialization>,
}

impl Arrangement {
    /// Validates, canonicalizes and if necessary essentializes the normals.
    /// Hyperplane order is kept.
    pub fn new(dim: usize, normals: Vec<Vec<Scalar>>) -> Result<Self> {
        if normals.len() > MAX_HYPERPLANES {
            return Err(Error::Validation(format!(
                "{} hyperplanes, at most {MAX_HYPERPLANES} supported",
                normals.len()
            )));
        }
        let mut canon = Vec::with_capacity(normals.len());
        for (i, mut v) in normals.into_iter().enumerate() {
            if v.len() != dim {
                return Err(Error::Validation(format!(
                    "normal {i} has length {} but the ambient dimension is {dim}",
                    v.len()
                )));
            }
            if canonicalize_direction(&mut v).is_none() {
                return Err(Error::Validation(format!("normal {i} is zero")));
            }
            if let Some(j) = canon.iter().position(|w: &Vec<Scalar>| *w == v) {
                return Err(Error::Validation(format!("normals {j} and {i} are proportional")));
            }
            canon.push(v);
        }
        let row_space = SubspaceBasis::span(dim, &canon)?;
        if row_space.dim() == dim {
            return Ok(Arrangement { ambient_dim: dim, normals: canon, essentialization: None });
        }
        let mut reduced = Vec::with_capacity(canon.len());
        for v in &canon {
            let mut c = row_space
                .coordinates(v)
                .ok_or_else(|| Error::Invariant("normal outside its own span".into()))?;
            canonicalize_direction(&mut c);
            reduced.push(c);
        }
        Ok(Arrangement {
            ambient_dim: row_space.dim(),
            normals: reduced,
            essentialization: Some(Essentialization { original_dim: dim, row_space }),
        })
    }

    pub fn from_integers(dim: usize, normals: &[Vec<i64>]) -> Result<Self> {
        Self::new(dim, normals.iter().map(|r| r.iter().map(|&x| Scalar::int(x)).collect()).collect())
    }

    /// The arrangement with no hyperplanes in a zero-dimensional space.
    pub fn empty() -> Self {
        Arrangement { ambient_dim: 0, normals: Vec::new(), essentialization: None }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn normals(&self) -> &[Vec<Scalar>] {
        &self.normals
    }

    pub fn normal(&self, i: usize) -> &[Scalar] {
        &self.normals[i]
    }

    pub fn len(&self) -> usize {
        self.normals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normals.is_empty()
    }

    pub fn all(&self) -> HyperplaneSet {
        HyperplaneSet::full(self.len())
    }

    pub fn essentialization(&self) -> Option<&Essentialization> {
        self.essentialization.as_ref()
    }

    pub fn is_rational(&self) -> bool {
        self.normals.iter().flatten().all(|x| x.is_rational())
    }

    pub fn rank_of(&self, key: HyperplaneSet) -> usize {
        let rows: Vec<Vec<Scalar>> = key.iter().map(|i| self.normals[i].clone()).collect();
        rref(&rows, self.ambient_dim).1.len()
    }

    /// All hyperplanes containing the intersection of those in `key`.
    pub fn closure(&self, key: HyperplaneSet) -> HyperplaneSet {
        let rows: Vec<Vec<Scalar>> = key.iter().map(|i| self.normals[i].clone()).collect();
        let span = SubspaceBasis::span(self.ambient_dim, &rows).expect("normals have ambient length");
        let mut out = key;
        for (i, n) in self.normals.iter().enumerate() {
            if !key.contains(i) && span.contains(n) {
                out.insert(i);
            }
        }
        out
    }

    /// The flat cut out by the hyperplanes in `key`, closed.
    pub fn flat(&self, key: HyperplaneSet) -> Flat {
        let key = self.closure(key);
        let rows: Vec<Vec<Scalar>> = key.iter().map(|i| self.normals[i].clone()).collect();
        let basis = SubspaceBasis::span(self.ambient_dim, &kernel(&rows, self.ambient_dim))
            .expect("kernel vectors have ambient length");
        Flat { key, codim: self.ambient_dim - basis.dim(), basis }
    }

    /// Checks that `e` is a closed flat of this arrangement.
    pub fn check_flat(&self, e: &Flat) -> Result<()> {
        if !e.key.is_subset(self.all()) || self.closure(e.key) != e.key {
            return Err(Error::Validation(format!("{} is not a flat of the arrangement", e.key)));
        }
        Ok(())
    }

    /// Direct sum, with hyperplanes of `self` first.
    pub fn direct_sum(&self, other: &Arrangement) -> Result<Arrangement> {
        let n = self.ambient_dim + other.ambient_dim;
        let mut normals = Vec::with_capacity(self.len() + other.len());
        for v in &self.normals {
            let mut w = v.clone();
            w.resize(n, Scalar::int(0));
            normals.push(w);
        }
        for v in &other.normals {
            let mut w = vec![Scalar::int(0); self.ambient_dim];
            w.extend(v.iter().cloned());
            normals.push(w);
        }
        Arrangement::new(n, normals)
    }

    /// Sign of `x` on each hyperplane.
    pub fn signs_of(&self, x: &[Scalar]) -> Vec<Sign> {
        self.normals.iter().map(|n| dot(n, x).sign()).collect()
    }

    /// `{"dim": n, "normals": [...]}`; integer entries are JSON numbers,
    /// irrational entries strings such as `"1/2+1/2*sqrt5"`.
    pub fn to_json(&self) -> Value {
        let normals: Vec<Value> = self
            .normals
            .iter()
            .map(|r| Value::Array(r.iter().map(scalar_json).collect()))
            .collect();
        json!({ "dim": self.ambient_dim, "normals": normals })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Validation(format!("arrangement JSON: {m}"));
        let dim = v.get("dim").and_then(Value::as_u64).ok_or_else(|| bad("missing `dim`"))? as usize;
        let rows = v.get("normals").and_then(Value::as_array).ok_or_else(|| bad("missing `normals`"))?;
        let mut normals = Vec::with_capacity(rows.len());
        for r in rows {
            let entries = r.as_array().ok_or_else(|| bad("normal is not an array"))?;
            let mut row = Vec::with_capacity(entries.len());
            for e in entries {
                let s = match e {
                    Value::Number(n) if n.is_i64() => Scalar::int(n.as_i64().unwrap()),
                    Value::String(s) => s.parse()?,
                    _ => return Err(bad("entries must be integers or number strings")),
                };
                row.push(s);
            }
            normals.push(row);
        }
        Arrangement::new(dim, normals)
    }
}

fn scalar_json(s: &Scalar) -> Value {
    match s.as_rational() {
        Some(q) if q.is_integer() => match i64::try_from(q.to_integer()) {
            Ok(i) => json!(i),
            Err(_) => json!(s.to_string()),
        },
        _ => json!(s.to_string()),
    }
}

/// An element of the intersection poset: the closed set of hyperplanes
/// containing a subspace, together with a basis of that subspace.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Flat {
    pub key: HyperplaneSet,
    pub codim: usize,
    pub basis: SubspaceBasis<Scalar>,
}

impl Flat {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn is_full_space(&self) -> bool {
        self.key.is_empty()
    }

    /// Subspace inclusion `self ⊆ other`.
    pub fn is_contained_in(&self, other: &Flat) -> bool {
        other.key.is_subset(self.key)
    }

    pub fn is_comparable(&self, other: &Flat) -> bool {
        self.key.is_subset(other.key) || other.key.is_subset(self.key)
    }
}

/// All intersections of hyperplanes, ordered by codimension then key.
#[derive(Clone, Debug)]
pub struct IntersectionPoset {
    pub flats: Vec<Flat>,
    index: HashMap<HyperplaneSet, usize>,
}

impl IntersectionPoset {
    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn index_of(&self, key: HyperplaneSet) -> Option<usize> {
        self.index.get(&key).copied()
    }

    pub fn get(&self, key: HyperplaneSet) -> Option<&Flat> {
        self.index_of(key).map(|i| &self.flats[i])
    }

    /// Flats other than the full space and the zero subspace.
    pub fn proper(&self) -> impl Iterator<Item = &Flat> {
        self.flats.iter().filter(|f| !f.key.is_empty() && f.dim() > 0)
    }

    pub fn of_codim(&self, c: usize) -> impl Iterator<Item = &Flat> {
        self.flats.iter().filter(move |f| f.codim == c)
    }
}

fn key_order(a: &Flat, b: &Flat) -> std::cmp::Ordering {
    a.codim.cmp(&b.codim).then_with(|| a.key.to_vec().cmp(&b.key.to_vec()))
}

pub fn intersection_poset(a: &Arrangement) -> IntersectionPoset {
    let mut flats = vec![a.flat(HyperplaneSet::EMPTY)];
    let mut seen: BTreeSet<HyperplaneSet> = BTreeSet::from([HyperplaneSet::EMPTY]);
    let mut frontier = vec![HyperplaneSet::EMPTY];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for key in frontier {
            for j in 0..a.len() {
                if key.contains(j) {
                    continue;
                }
                let k = a.closure(key.with(j));
                if seen.insert(k) {
                    flats.push(a.flat(k));
                    next.push(k);
                }
            }
        }
        frontier = next;
    }
    flats.sort_by(key_order);
    let index = flats.iter().enumerate().map(|(i, f)| (f.key, i)).collect();
    IntersectionPoset { flats, index }
}

/// The arrangement `{H/E : E ⊆ H}` in `V/E`, with coordinates taken from the
/// pivot columns of the reduced span of the normals containing `e`. Its
/// hyperplanes follow the increasing order of `e.key`.
pub fn normal_arrangement(a: &Arrangement, e: &Flat) -> Result<Arrangement> {
    a.check_flat(e)?;
    let rows: Vec<Vec<Scalar>> = e.key.iter().map(|i| a.normals[i].clone()).collect();
    let (_, pivots) = rref(&rows, a.ambient_dim);
    let normals = rows.iter().map(|r| pivots.iter().map(|&p| r[p].clone()).collect()).collect();
    Arrangement::new(pivots.len(), normals)
}

/// Restriction of an arrangement to a flat, with the correspondence between
/// the original hyperplanes and the merged traces.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub arrangement: Arrangement,
    /// For each original hyperplane not containing the flat: the index of its
    /// trace and the sign relating the two normals on the flat.
    pub trace: Vec<Option<(usize, Sign)>>,
    /// Basis of the flat in which the restricted arrangement is written.
    pub basis: SubspaceBasis<Scalar>,
}

impl Restriction {
    /// Point of the ambient space with the given flat coordinates.
    pub fn lift(&self, y: &[Scalar]) -> Vec<Scalar> {
        let mut x = vec![Scalar::int(0); self.basis.ambient_dim];
        for (c, b) in y.iter().zip(&self.basis.basis) {
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi = xi.add(&c.mul(bi));
            }
        }
        x
    }

    /// Keys of the original arrangement mapped to the traces they cut.
    pub fn image(&self, key: HyperplaneSet) -> HyperplaneSet {
        key.iter().filter_map(|j| self.trace[j].map(|(t, _)| t)).collect()
    }
}

pub fn restriction_with_map(a: &Arrangement, e: &Flat) -> Result<Restriction> {
    a.check_flat(e)?;
    if e.dim() == 0 {
        return Err(Error::Validation("cannot restrict to the zero subspace".into()));
    }
    let mut traces: Vec<Vec<Scalar>> = Vec::new();
    let mut trace = Vec::with_capacity(a.len());
    for (j, n) in a.normals.iter().enumerate() {
        if e.key.contains(j) {
            trace.push(None);
            continue;
        }
        let mut r: Vec<Scalar> = e.basis.basis.iter().map(|b| dot(n, b)).collect();
        let factor = canonicalize_direction(&mut r)
            .ok_or_else(|| Error::Invariant(format!("hyperplane {j} vanishes on a flat not containing it")))?;
        let idx = match traces.iter().position(|t| *t == r) {
            Some(i) => i,
            None => {
                traces.push(r);
                traces.len() - 1
            }
        };
        trace.push(Some((idx, factor.sign())));
    }
    let arrangement = Arrangement::new(e.dim(), traces)?;
    invariant(arrangement.essentialization.is_none(), || "restriction is not essential".into())?;
    Ok(Restriction { arrangement, trace, basis: e.basis.clone() })
}

/// The arrangement `{H ∩ E : E ⊄ H}` inside `E`, traces merged.
pub fn restriction(a: &Arrangement, e: &Flat) -> Result<Arrangement> {
    Ok(restriction_with_map(a, e)?.arrangement)
}

/// The arrangement induced in `big/small` by the hyperplanes of the
/// restriction to `big` that contain `small`.
pub fn subnormal(a: &Arrangement, big: &Flat, small: &Flat) -> Result<Arrangement> {
    a.check_flat(big)?;
    a.check_flat(small)?;
    if !big.key.is_subset(small.key) || big.key == small.key {
        return Err(Error::Validation(format!(
            "flat {} is not strictly contained in flat {}",
            small.key, big.key
        )));
    }
    let r = restriction_with_map(a, big)?;
    let inner = r.arrangement.flat(r.image(small.key));
    invariant(inner.dim() == small.dim(), || "image of the smaller flat has the wrong dimension".into())?;
    normal_arrangement(&r.arrangement, &inner)
}

/// Connected components of the linear matroid on `vectors`, each as a sorted
/// index list, ordered by least element.
pub fn matroid_components(vectors: &[Vec<Scalar>], dim: usize) -> Vec<Vec<usize>> {
    let m = vectors.len();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    let mut basis: Vec<usize> = Vec::new();
    let mut rank = 0;
    for i in 0..m {
        let mut cols: Vec<usize> = basis.clone();
        cols.push(i);
        let rows: Vec<Vec<Scalar>> = cols.iter().map(|&c| vectors[c].clone()).collect();
        let r = rref(&rows, dim).1.len();
        if r > rank {
            rank = r;
            basis.push(i);
            continue;
        }
        let columns: Vec<Vec<Scalar>> = (0..dim)
            .map(|row| cols.iter().map(|&c| vectors[c][row].clone()).collect())
            .collect();
        let dep = kernel(&columns, cols.len());
        let coeffs = dep.first().expect("dependent vector has a relation");
        for (t, &c) in cols.iter().enumerate() {
            if !coeffs[t].is_zero() {
                let (x, y) = (find(&mut parent, c), find(&mut parent, i));
                parent[x] = y;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_group: HashMap<usize, usize> = HashMap::new();
    for i in 0..m {
        let r = find(&mut parent, i);
        let g = *root_group.entry(r).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(i);
    }
    groups
}

/// One irreducible summand of an arrangement.
#[derive(Clone, Debug)]
pub struct Factor {
    pub arrangement: Arrangement,
    /// The hyperplanes of the summand.
    pub hyperplanes: HyperplaneSet,
    /// The subspace carrying the summand: the intersection of all other
    /// hyperplanes.
    pub subspace: SubspaceBasis<Scalar>,
}

/// Splits an arrangement into irreducible summands via matroid components.
/// When the arrangement is simplicial, the split is cross-checked against
/// the components of the Coxeter graph at the first chamber.
pub fn decompose(a: &Arrangement) -> Result<Vec<Factor>> {
    decompose_with(a, None)
}

pub(crate) fn decompose_with(a: &Arrangement, z: Option<&Zonotope>) -> Result<Vec<Factor>> {
    if a.is_empty() {
        return Ok(Vec::new());
    }
    let comps = matroid_components(&a.normals, a.ambient_dim);
    let mut factors = Vec::with_capacity(comps.len());
    for c in &comps {
        let key: HyperplaneSet = c.iter().copied().collect();
        let e = a.flat(key);
        invariant(e.key == key, || format!("matroid component {key} is not closed"))?;
        let other = a.flat(a.all().minus(key));
        factors.push(Factor { arrangement: normal_arrangement(a, &e)?, hyperplanes: key, subspace: other.basis });
    }
    let owned;
    let z = match z {
        Some(z) => Some(z),
        None => match Zonotope::new(a) {
            Ok(zz) => {
                owned = zz;
                Some(&owned)
            }
            Err(Error::CapExceeded { .. }) => None,
            Err(e) => return Err(e),
        },
    };
    if let Some(z) = z.filter(|z| z.is_simplicial()) {
        let graph = z.coxeter_graph(0)?;
        for group in graph.components() {
            let walls: HyperplaneSet = group.iter().map(|&v| graph.walls[v]).collect();
            let span = a.closure(walls);
            invariant(factors.iter().any(|f| f.hyperplanes == span), || {
                format!("Coxeter component spanning {span} is not a matroid component")
            })?;
        }
        invariant(graph.components().len() == factors.len(), || {
            "Coxeter graph and matroid disagree on the number of factors".into()
        })?;
    }
    Ok(factors)
}

/// True when the normal arrangement at `e` does not split.
pub fn is_irreducible_flat(a: &Arrangement, e: &Flat) -> Result<bool> {
    a.check_flat(e)?;
    if e.is_full_space() {
        return Err(Error::Validation("the full space is not a candidate irreducible flat".into()));
    }
    let rows: Vec<Vec<Scalar>> = e.key.iter().map(|i| a.normals[i].clone()).collect();
    Ok(matroid_components(&rows, a.ambient_dim).len() == 1)
}

fn splits_as_sum(a: &Arrangement, parts: &[&Flat]) -> bool {
    let keys: Vec<HyperplaneSet> = parts.iter().map(|p| p.key).collect();
    keys_split(a, &keys)
}

/// True when the flats with these keys have pairwise disjoint keys whose
/// union is closed and whose codimensions add up to that of the union, so
/// the normal arrangement at their intersection is the direct sum of theirs.
pub fn keys_split(a: &Arrangement, keys: &[HyperplaneSet]) -> bool {
    let mut union = HyperplaneSet::EMPTY;
    let mut codim = 0;
    for &k in keys {
        if !union.is_disjoint(k) {
            return false;
        }
        union = union.union(k);
        codim += a.rank_of(k);
    }
    a.closure(union) == union && a.rank_of(union) == codim
}

fn antichain_ok(a: &Arrangement, flats: &[&Flat], must_contain: Option<usize>) -> bool {
    let k = flats.len();
    for mask in 1u64..(1u64 << k) {
        if mask.count_ones() < 2 {
            continue;
        }
        if let Some(t) = must_contain {
            if mask >> t & 1 == 0 {
                continue;
            }
        }
        let chosen: Vec<&Flat> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| flats[i]).collect();
        let antichain = chosen
            .iter()
            .enumerate()
            .all(|(i, x)| chosen[i + 1..].iter().all(|y| !x.is_comparable(y)));
        if antichain && !splits_as_sum(a, &chosen) {
            return false;
        }
    }
    true
}

/// Nested-set test over all antichains of size at least two.
pub fn is_nested(a: &Arrangement, flats: &[Flat]) -> Result<bool> {
    for f in flats {
        if !is_irreducible_flat(a, f)? {
            return Err(Error::Validation(format!("flat {} is not irreducible", f.key)));
        }
    }
    let refs: Vec<&Flat> = flats.iter().collect();
    Ok(antichain_ok(a, &refs, None))
}

/// A simplicial complex on flats; simplices are sorted vertex index lists,
/// nonempty, ordered by size then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NestedComplex {
    pub vertices: Vec<Flat>,
    pub simplices: Vec<Vec<usize>>,
}

impl NestedComplex {
    /// Dimension, `-1` for the empty complex.
    pub fn dim(&self) -> isize {
        self.simplices.iter().map(|s| s.len() as isize - 1).max().unwrap_or(-1)
    }

    /// Number of simplices of each dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; (self.dim() + 1) as usize];
        for s in &self.simplices {
            f[s.len() - 1] += 1;
        }
        f
    }

    pub fn vertex_index(&self, key: HyperplaneSet) -> Option<usize> {
        self.vertices.iter().position(|v| v.key == key)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.simplices.iter().filter(|s| s.len() == 2).map(|s| (s[0], s[1]))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vertices": self.vertices.iter().map(|v| json!({"key": v.key.to_vec(), "dim": v.dim()})).collect::<Vec<_>>(),
            "simplices": self.simplices,
        })
    }

    /// Graphviz rendering of the 1-skeleton.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("graph {name} {{\n");
        for (i, v) in self.vertices.iter().enumerate() {
            out.push_str(&format!("  v{i} [label=\"{}\"];\n", v.key));
        }
        for (i, j) in self.edges() {
            out.push_str(&format!("  v{i} -- v{j};\n"));
        }
        out.push_str("}\n");
        out
    }

    fn normalize(&mut self) {
        for s in self.simplices.iter_mut() {
            s.sort_unstable();
        }
        self.simplices.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
        self.simplices.dedup();
    }

    /// The full subcomplex on vertices satisfying `keep`, reindexed.
    pub fn full_subcomplex(&self, keep: impl Fn(&Flat) -> bool) -> NestedComplex {
        let mut map = vec![None; self.vertices.len()];
        let mut vertices = Vec::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if keep(v) {
                map[i] = Some(vertices.len());
                vertices.push(v.clone());
            }
        }
        let simplices = self
            .simplices
            .iter()
            .filter_map(|s| s.iter().map(|&i| map[i]).collect::<Option<Vec<usize>>>())
            .collect();
        let mut c = NestedComplex { vertices, simplices };
        c.normalize();
        c
    }
}

/// Irreducible flats other than the full space, in poset order.
pub fn irreducible_flats(a: &Arrangement, poset: &IntersectionPoset) -> Result<Vec<Flat>> {
    let mut out = Vec::new();
    for f in &poset.flats {
        if !f.is_full_space() && is_irreducible_flat(a, f)? {
            out.push(f.clone());
        }
    }
    Ok(out)
}

/// All nested sets of irreducible flats, built by extending nested sets one
/// vertex at a time.
pub fn nested_complex(a: &Arrangement, vertices: Vec<Flat>) -> NestedComplex {
    let mut simplices = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..vertices.len()).map(|i| vec![i]).collect();
    while let Some(s) = stack.pop() {
        let last = *s.last().unwrap();
        for v in last + 1..vertices.len() {
            let mut t = s.clone();
            t.push(v);
            let refs: Vec<&Flat> = t.iter().map(|&i| &vertices[i]).collect();
            if antichain_ok(a, &refs, Some(t.len() - 1)) {
                stack.push(t);
            }
        }
        simplices.push(s);
    }
    let mut c = NestedComplex { vertices, simplices };
    c.normalize();
    c
}

/// The complex `I` of nested sets and its subcomplex `I₀`.
pub fn complex_of_irreducibles(a: &Arrangement) -> Result<(NestedComplex, NestedComplex)> {
    let poset = intersection_poset(a);
    let i_full = nested_complex(a, irreducible_flats(a, &poset)?);
    let factors = decompose(a)?;
    let factor_zeros: Vec<HyperplaneSet> = factors.iter().map(|f| f.hyperplanes).collect();
    let i0 = if factors.len() <= 1 {
        i_full.full_subcomplex(|f| f.dim() > 0)
    } else {
        let mut pieces = Vec::with_capacity(factors.len());
        for f in &factors {
            let (_, sub_i0) = complex_of_irreducibles(&f.arrangement)?;
            let globals: Vec<usize> = f.hyperplanes.to_vec();
            let keys: Vec<HyperplaneSet> = sub_i0
                .vertices
                .iter()
                .map(|v| v.key.iter().map(|t| globals[t]).collect())
                .collect();
            pieces.push((keys, sub_i0.simplices));
        }
        join_complexes(a, &pieces)
    };
    let expected = i_full.full_subcomplex(|f| !factor_zeros.contains(&f.key));
    invariant(expected == i0, || "I₀ differs from the full subcomplex of I off the factor zeros".into())?;
    invariant(i_full.vertices.len() == i0.vertices.len() + factors.len(), || {
        "vertex counts of I and I₀ do not differ by the number of factors".into()
    })?;
    Ok((i_full, i0))
}

fn join_complexes(a: &Arrangement, pieces: &[(Vec<HyperplaneSet>, Vec<Vec<usize>>)]) -> NestedComplex {
    let mut keys: Vec<HyperplaneSet> = pieces.iter().flat_map(|(k, _)| k.iter().copied()).collect();
    let mut vertices: Vec<Flat> = keys.iter().map(|&k| a.flat(k)).collect();
    vertices.sort_by(key_order);
    keys = vertices.iter().map(|v| v.key).collect();
    let pos: HashMap<HyperplaneSet, usize> = keys.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let mut acc: Vec<Vec<usize>> = vec![Vec::new()];
    for (k, simplices) in pieces {
        let mut options: Vec<Vec<usize>> = vec![Vec::new()];
        options.extend(simplices.iter().map(|s| s.iter().map(|&i| pos[&k[i]]).collect()));
        acc = acc
            .iter()
            .flat_map(|x| {
                options.iter().map(move |o| {
                    let mut y = x.clone();
                    y.extend(o.iter().copied());
                    y
                })
            })
            .collect();
    }
    acc.retain(|s| !s.is_empty());
    let mut c = NestedComplex { vertices, simplices: acc };
    c.normalize();
    c
}

/// The forest of a nested set: roots are its minimal subspaces, the parent
/// of a node is the largest member strictly inside it.
#[derive(Clone, Debug)]
pub struct NestedForest {
    pub nodes: Vec<Flat>,
    pub parent: Vec<Option<usize>>,
    pub level: Vec<usize>,
    /// Intersection of each node's children, the full space for leaves.
    pub hat: Vec<Flat>,
}

impl NestedForest {
    pub fn children(&self, i: usize) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&j| self.parent[j] == Some(i)).collect()
    }
}

pub fn nested_forest(a: &Arrangement, alpha: &[Flat]) -> Result<NestedForest> {
    if !is_nested(a, alpha)? {
        return Err(Error::Validation("flats do not form a nested set".into()));
    }
    let mut nodes: Vec<Flat> = alpha.to_vec();
    nodes.sort_by(key_order);
    nodes.dedup_by(|x, y| x.key == y.key);
    let k = nodes.len();
    let below = |i: usize| -> Vec<usize> {
        (0..k).filter(|&j| j != i && nodes[j].is_contained_in(&nodes[i])).collect()
    };
    let mut parent = vec![None; k];
    let mut level = vec![0; k];
    for i in 0..k {
        let b = below(i);
        level[i] = b.len();
        parent[i] = b.iter().copied().max_by_key(|&j| nodes[j].dim());
        if let Some(p) = parent[i] {
            invariant(b.iter().all(|&j| nodes[j].is_contained_in(&nodes[p])), || {
                "members below a node do not form a chain".into()
            })?;
        }
    }
    let hat = (0..k)
        .map(|i| {
            let key = (0..k)
                .filter(|&j| parent[j] == Some(i))
                .fold(HyperplaneSet::EMPTY, |acc, j| acc.union(nodes[j].key));
            a.flat(key)
        })
        .collect();
    Ok(NestedForest { nodes, parent, level, hat })
}

/// Building-set test: for each flat `E ≠ V`, the minimal members of `s`
/// containing `E` must intersect in `E` and split its normal arrangement.
pub fn is_building_set(a: &Arrangement, s: &[Flat]) -> Result<bool> {
    for f in s {
        a.check_flat(f)?;
    }
    for j in 0..a.len() {
        if !s.iter().any(|f| f.key == HyperplaneSet::singleton(j)) {
            return Err(Error::Validation(format!("hyperplane {j} is missing from the candidate set")));
        }
    }
    let members: Vec<&Flat> = s.iter().filter(|f| !f.is_full_space()).collect();
    for e in intersection_poset(a).flats.iter().filter(|f| !f.is_full_space()) {
        let above: Vec<&Flat> = members.iter().copied().filter(|g| e.is_contained_in(g)).collect();
        let minimal: Vec<&Flat> = above
            .iter()
            .copied()
            .filter(|g| !above.iter().any(|h| h.key != g.key && h.is_contained_in(g)))
            .collect();
        let union = minimal.iter().fold(HyperplaneSet::EMPTY, |acc, g| acc.union(g.key));
        if union != e.key || !splits_as_sum(a, &minimal) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every chamber has exactly as many walls as the ambient dimension.
pub fn is_simplicial(a: &Arrangement) -> Result<bool> {
    Ok(Zonotope::new(a)?.is_simplicial())
}

/// Projection of a vector to the normal-arrangement coordinates at `e`.
pub fn normal_coordinates(a: &Arrangement, e: &Flat, v: &[Scalar]) -> Vec<Scalar> {
    let rows: Vec<Vec<Scalar>> = e.key.iter().map(|i| a.normals[i].clone()).collect();
    let (_, pivots) = rref(&rows, a.ambient_dim);
    pivots.iter().map(|&p| v[p].clone()).collect()
}

pub use exactlin::intersect;
