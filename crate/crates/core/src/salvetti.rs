//! The Salvetti complex, its doubled 1-skeleton, standard subcomplexes and
//! evaluation of the Salvetti embeddings into the complexified complement.

use std::collections::{HashMap, HashSet};

use serde_json::{json, Value};

use crate::arrangement::{normal_arrangement, restriction_with_map, HyperplaneSet};
use crate::error::{invariant, Error, Result};
use crate::exactlin::{dot, Field, Rational, Scalar, Sign};
use crate::zonotope::{Covector, Zonotope};

/// Cell `[F, v]`: a face of the zonotope with a vertex of it.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct SalvettiCell {
    pub face: usize,
    pub base: usize,
}

/// Oriented edge of the doubled 1-skeleton.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
    pub hyperplane: usize,
}

#[derive(Clone, Debug)]
pub struct SalvettiComplex<'z> {
    pub zonotope: &'z Zonotope,
    /// Cells ordered by dimension, face id, base.
    pub cells: Vec<SalvettiCell>,
    index: HashMap<SalvettiCell, usize>,
}

impl<'z> SalvettiComplex<'z> {
    pub fn new(z: &'z Zonotope) -> Self {
        let mut cells = Vec::new();
        for (f, face) in z.faces.iter().enumerate() {
            for &v in &face.vertices {
                cells.push(SalvettiCell { face: f, base: v });
            }
        }
        cells.sort_by_key(|c| (z.faces[c.face].dim, c.face, c.base));
        let index = cells.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        SalvettiComplex { zonotope: z, cells, index }
    }

    pub fn cell_id(&self, c: SalvettiCell) -> Option<usize> {
        self.index.get(&c).copied()
    }

    pub fn dim_of(&self, c: SalvettiCell) -> usize {
        self.zonotope.faces[c.face].dim
    }

    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.zonotope.dim() + 1];
        for c in &self.cells {
            f[self.dim_of(*c)] += 1;
        }
        f
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().iter().enumerate().map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) }).sum()
    }

    /// `[F₁, v₁] ≤ [F₂, v₂]`.
    pub fn leq(&self, c1: SalvettiCell, c2: SalvettiCell) -> bool {
        self.zonotope.face_leq(c1.face, c2.face) && self.zonotope.gate(c2.base, c1.face) == c1.base
    }

    /// Cells of one dimension less on the boundary.
    pub fn boundary(&self, c: SalvettiCell) -> Vec<SalvettiCell> {
        self.zonotope
            .facets(c.face)
            .into_iter()
            .map(|g| SalvettiCell { face: g, base: self.zonotope.gate(c.base, g) })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let m = self.zonotope.hyperplane_count();
        let key = |c: &SalvettiCell| {
            json!([
                self.zonotope.faces[c.face].covector.to_string(m),
                self.zonotope.chambers[c.base].to_string(m)
            ])
        };
        json!({
            "f_vector": self.f_vector(),
            "cells": self.cells.iter().map(|c| json!({
                "key": key(c),
                "dim": self.dim_of(*c),
                "boundary": self.boundary(*c).iter().map(|b| self.index[b]).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

pub fn salvetti_complex(z: &Zonotope) -> SalvettiComplex<'_> {
    SalvettiComplex::new(z)
}

/// Two opposite arrows per pair of adjacent chambers.
pub fn one_skeleton(z: &Zonotope) -> Vec<Arrow> {
    let mut out = Vec::new();
    for (c, ns) in z.neighbors.iter().enumerate() {
        for &(j, d) in ns {
            out.push(Arrow { source: c, target: d, hyperplane: j });
        }
    }
    out
}

/// Cells over faces of `f`; its f-vector is checked against the Salvetti
/// complex of the normal arrangement at the dual flat of `f`.
pub fn standard_subcomplex(z: &Zonotope, f: usize) -> Result<Vec<SalvettiCell>> {
    let s = SalvettiComplex::new(z);
    let cells: Vec<SalvettiCell> = s.cells.iter().copied().filter(|c| z.face_leq(c.face, f)).collect();
    let mut fv = vec![0; z.faces[f].dim + 1];
    for c in &cells {
        fv[s.dim_of(*c)] += 1;
    }
    let key = z.faces[f].zero_set;
    let expected = if key.is_empty() {
        vec![1]
    } else {
        let flat = z.arrangement.flat(key);
        let nz = Zonotope::new(&normal_arrangement(&z.arrangement, &flat)?)?;
        SalvettiComplex::new(&nz).f_vector()
    };
    invariant(fv == expected, || format!("standard subcomplex f-vector {fv:?} differs from {expected:?}"))?;
    Ok(cells)
}

/// Copy of the Salvetti complex of the restriction to the dual flat of a
/// face, placed in the Salvetti complex of the whole arrangement.
#[derive(Clone, Debug)]
pub struct OrthogonalComplement {
    /// Images of the restricted cells, indexed like `source`.
    pub cells: Vec<SalvettiCell>,
    /// Cells `(face, chamber)` of the restricted arrangement's complex.
    pub source: Vec<(Covector, Covector)>,
    /// Cells shared with the standard subcomplex of the face.
    pub intersection: Vec<SalvettiCell>,
}

/// Lifts a covector of the restriction to a covector of the arrangement.
pub fn lift_covector(trace: &[Option<(usize, Sign)>], g: Covector) -> Covector {
    let mut signs = Vec::with_capacity(trace.len());
    for t in trace {
        signs.push(match t {
            None => Sign::Zero,
            Some((i, s)) => g.sign(*i).times(*s),
        });
    }
    Covector::from_signs(&signs)
}

pub fn orthogonal_complement_complex(z: &Zonotope, f: usize, base: usize) -> Result<OrthogonalComplement> {
    if !z.is_simplicial() {
        return Err(Error::NotSimplicial("orthogonal complement complex".into()));
    }
    if !z.contains_vertex(f, base) {
        return Err(Error::Validation("base chamber is not a vertex of the face".into()));
    }
    let face = &z.faces[f];
    if face.dim == 0 {
        return Err(Error::Validation("orthogonal complement needs a positive-dimensional face".into()));
    }
    let whole = SalvettiCell { face: f, base };
    if face.dim == z.dim() {
        return Ok(OrthogonalComplement {
            cells: vec![whole],
            source: vec![(Covector::ZERO, Covector::ZERO)],
            intersection: vec![whole],
        });
    }
    let flat = z.arrangement.flat(face.zero_set);
    let r = restriction_with_map(&z.arrangement, &flat)?;
    let rz = Zonotope::new(&r.arrangement)?;
    let rs = SalvettiComplex::new(&rz);
    let mut cells = Vec::with_capacity(rs.cells.len());
    let mut source = Vec::with_capacity(rs.cells.len());
    for c in &rs.cells {
        let g = rz.faces[c.face].covector;
        let w = rz.chambers[c.base];
        let big = z
            .face_id(lift_covector(&r.trace, g))
            .ok_or_else(|| Error::Invariant("lifted covector is not a face".into()))?;
        let u = z
            .chamber_id(lift_covector(&r.trace, w).compose(z.chambers[base]))
            .ok_or_else(|| Error::Invariant("transported vertex is not a chamber".into()))?;
        cells.push(SalvettiCell { face: big, base: u });
        source.push((g, w));
    }
    let distinct: HashSet<SalvettiCell> = cells.iter().copied().collect();
    invariant(distinct.len() == cells.len(), || "orthogonal complement map is not injective".into())?;
    let s = SalvettiComplex::new(z);
    for (i, a) in rs.cells.iter().enumerate() {
        for (j, b) in rs.cells.iter().enumerate() {
            if rs.leq(*a, *b) && !s.leq(cells[i], cells[j]) {
                return Err(Error::Invariant("orthogonal complement map does not preserve order".into()));
            }
        }
    }
    let intersection: Vec<SalvettiCell> = cells.iter().copied().filter(|c| z.face_leq(c.face, f)).collect();
    invariant(intersection == vec![whole], || format!("complement meets the standard subcomplex in {intersection:?}"))?;
    Ok(OrthogonalComplement { cells, source, intersection })
}

/// Simplex of the barycentric subdivision: a strictly decreasing chain of
/// faces with a vertex of the largest.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChainSimplex {
    pub faces: Vec<usize>,
    pub base: usize,
}

impl ChainSimplex {
    pub fn vertices(&self, z: &Zonotope) -> Vec<SalvettiCell> {
        self.faces.iter().map(|&f| SalvettiCell { face: f, base: z.gate(self.base, f) }).collect()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EmbeddingVariant {
    /// Imaginary part `Σ λ (p_F(v) − b_F)`.
    Psi,
    /// Imaginary part `Σ λ p_F(v)`.
    PsiPrime,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EmbeddedPoint {
    pub re: Vec<Scalar>,
    pub im: Vec<Scalar>,
}

impl EmbeddedPoint {
    /// `(1 − t)·self + t·other`.
    pub fn interpolate(&self, other: &EmbeddedPoint, t: &Rational) -> EmbeddedPoint {
        let t = Scalar::from_rational(t.clone());
        let s = Scalar::int(1).sub(&t);
        let mix = |a: &[Scalar], b: &[Scalar]| a.iter().zip(b).map(|(x, y)| s.mul(x).add(&t.mul(y))).collect();
        EmbeddedPoint { re: mix(&self.re, &other.re), im: mix(&self.im, &other.im) }
    }

    /// Hyperplanes on which both parts vanish.
    pub fn hits(&self, z: &Zonotope) -> Vec<usize> {
        z.arrangement
            .normals()
            .iter()
            .enumerate()
            .filter(|(_, n)| dot(n, &self.re).is_zero() && dot(n, &self.im).is_zero())
            .map(|(j, _)| j)
            .collect()
    }
}

/// Evaluates an embedding at barycentric coordinates on a chain simplex and
/// fails if the image lies on a complexified hyperplane.
pub fn embed_point(z: &Zonotope, simplex: &ChainSimplex, coords: &[Rational], variant: EmbeddingVariant) -> Result<EmbeddedPoint> {
    let p = evaluate(z, simplex, coords, variant)?;
    let hits = p.hits(z);
    if !hits.is_empty() {
        return Err(Error::Invariant(format!("embedded point lies on complexified hyperplanes {hits:?}")));
    }
    Ok(p)
}

/// Evaluation without the avoidance check.
pub fn evaluate(z: &Zonotope, simplex: &ChainSimplex, coords: &[Rational], variant: EmbeddingVariant) -> Result<EmbeddedPoint> {
    validate_simplex(z, simplex)?;
    if coords.len() != simplex.faces.len() {
        return Err(Error::Validation("one barycentric coordinate per chain member is required".into()));
    }
    let zero = <Rational as Field>::zero();
    if coords.iter().any(|c| c.sign() == Sign::Minus) || coords.iter().fold(zero, |a, c| a + c) != <Rational as Field>::one() {
        return Err(Error::Validation("barycentric coordinates must be nonnegative and sum to one".into()));
    }
    let n = z.dim();
    let mut re = vec![Scalar::int(0); n];
    let mut im = vec![Scalar::int(0); n];
    for (&f, l) in simplex.faces.iter().zip(coords) {
        let l = Scalar::from_rational(l.clone());
        let b = &z.faces[f].witness;
        let g = &z.faces[z.vertex_face(z.gate(simplex.base, f))].witness;
        for i in 0..n {
            re[i] = re[i].add(&l.mul(&b[i]));
            let d = match variant {
                EmbeddingVariant::Psi => g[i].sub(&b[i]),
                EmbeddingVariant::PsiPrime => g[i].clone(),
            };
            im[i] = im[i].add(&l.mul(&d));
        }
    }
    Ok(EmbeddedPoint { re, im })
}

fn validate_simplex(z: &Zonotope, s: &ChainSimplex) -> Result<()> {
    let Some(&top) = s.faces.first() else {
        return Err(Error::Validation("empty chain".into()));
    };
    if !z.contains_vertex(top, s.base) {
        return Err(Error::Validation("base is not a vertex of the top face".into()));
    }
    for w in s.faces.windows(2) {
        if w[0] == w[1] || !z.face_leq(w[1], w[0]) {
            return Err(Error::Validation("faces do not form a decreasing chain".into()));
        }
    }
    Ok(())
}

/// All decreasing chains of faces of the given length starting anywhere,
/// each paired with every vertex of its top face.
pub fn chain_simplices(z: &Zonotope, length: usize) -> Vec<ChainSimplex> {
    let mut chains: Vec<Vec<usize>> = (0..z.faces.len()).map(|f| vec![f]).collect();
    for _ in 1..length {
        let mut next = Vec::new();
        for c in &chains {
            let last = *c.last().unwrap();
            for g in z.facets(last) {
                let mut d = c.clone();
                d.push(g);
                next.push(d);
            }
        }
        chains = next;
    }
    let mut out = Vec::new();
    for c in chains {
        for &v in &z.faces[c[0]].vertices {
            out.push(ChainSimplex { faces: c.clone(), base: v });
        }
    }
    out
}

/// Maximal simplices of the barycentric subdivision: full flags from the
/// whole zonotope down to a vertex.
pub fn maximal_simplices(z: &Zonotope) -> Vec<ChainSimplex> {
    chain_simplices(z, z.dim() + 1).into_iter().filter(|s| s.faces[0] == z.top_face()).collect()
}

/// Outcome of the sampled avoidance and injectivity checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingCheck {
    pub points: usize,
    pub interpolants: usize,
    pub collisions: usize,
    pub hits: usize,
}

impl EmbeddingCheck {
    pub fn pass(&self) -> bool {
        self.collisions == 0 && self.hits == 0
    }
}

/// Samples every vertex, edge midpoint and maximal-simplex barycenter of
/// the barycentric subdivision under `variant`, plus the straight-line
/// interpolants towards the other variant at `t ∈ {1/4, 1/2, 3/4}`.
pub fn embedding_check(z: &Zonotope, variant: EmbeddingVariant) -> Result<EmbeddingCheck> {
    let other = match variant {
        EmbeddingVariant::Psi => EmbeddingVariant::PsiPrime,
        EmbeddingVariant::PsiPrime => EmbeddingVariant::Psi,
    };
    let mut samples: Vec<(ChainSimplex, Vec<Rational>)> = Vec::new();
    let frac = |p: i64, q: i64| Rational::new(p.into(), q.into());
    for s in chain_simplices(z, 1) {
        if z.gate(s.base, s.faces[0]) == s.base {
            samples.push((s, vec![frac(1, 1)]));
        }
    }
    for s in chain_simplices(z, 2) {
        samples.push((s, vec![frac(1, 2), frac(1, 2)]));
    }
    let k = z.dim() as i64 + 1;
    for s in maximal_simplices(z) {
        samples.push((s, vec![frac(1, k); k as usize]));
    }
    let ts = [frac(1, 4), frac(1, 2), frac(3, 4)];
    let mut seen: HashSet<EmbeddedPoint> = HashSet::new();
    let mut report = EmbeddingCheck { points: 0, interpolants: 0, collisions: 0, hits: 0 };
    let mut distinct_cells: HashSet<Vec<SalvettiCell>> = HashSet::new();
    for (s, l) in &samples {
        let cells = s.vertices(z);
        if !distinct_cells.insert(cells) {
            continue;
        }
        let p = evaluate(z, s, l, variant)?;
        let q = evaluate(z, s, l, other)?;
        if !p.hits(z).is_empty() {
            report.hits += 1;
        }
        if !seen.insert(p.clone()) {
            report.collisions += 1;
        }
        report.points += 1;
        for t in &ts {
            if !p.interpolate(&q, t).hits(z).is_empty() {
                report.hits += 1;
            }
            report.interpolants += 1;
        }
    }
    Ok(report)
}

/// Representative crossing sequence of a minimal positive path: at each
/// step the least-indexed wall that still separates from the target.
pub fn minimal_crossings(z: &Zonotope, from: usize, to: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut c = from;
    while c != to {
        let sep: HyperplaneSet = z.separation(c, to);
        let (j, d) = *z.neighbors[c]
            .iter()
            .find(|(j, _)| sep.contains(*j))
            .expect("a separating wall exists on any geodesic");
        out.push(j);
        c = d;
    }
    out
}
