//! Face poset of the compact core of the blowup, the quotient curve complex
//! and its homology.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::arrangement::{
    complex_of_irreducibles, decompose, intersection_poset, is_simplicial, nested_forest, normal_arrangement,
    restriction_with_map, Arrangement, Flat, HyperplaneSet, NestedComplex,
};
use crate::error::{invariant, Error, Result};
use crate::exactlin::smith_normal_form;

/// One forest node of a face: a member `E` of the nested set and the
/// intersection `Ê` of the members directly above it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForestFactor {
    pub flat: HyperplaneSet,
    pub hat: HyperplaneSet,
    /// `dim Ê - dim E`.
    pub quotient_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupFace {
    /// Keys of the nested set; empty for the interior.
    pub alpha: Vec<HyperplaneSet>,
    pub codim: usize,
    /// Key of the intersection of the nested set.
    pub base: HyperplaneSet,
    /// Dimension of the base inside each irreducible summand.
    pub base_dims: Vec<usize>,
    pub nodes: Vec<ForestFactor>,
}

impl BlowupFace {
    /// Real dimension, summing the sphere-complement factors.
    pub fn dim(&self) -> usize {
        let base: usize = self.base_dims.iter().map(|d| 2 * d - 1).sum();
        base + self.nodes.iter().map(|n| 2 * n.quotient_dim - 1).sum::<usize>()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "alpha": self.alpha.iter().map(|k| k.to_vec()).collect::<Vec<_>>(),
            "codim": self.codim,
            "factors": {
                "base": self.base.to_vec(),
                "base_dims": self.base_dims,
                "nodes": self.nodes.iter().map(|n| json!({
                    "flat": n.flat.to_vec(),
                    "hat": n.hat.to_vec(),
                    "quotient_dim": n.quotient_dim,
                })).collect::<Vec<_>>(),
            },
        })
    }
}

#[derive(Clone, Debug)]
pub struct BlowupPoset {
    pub dim: usize,
    pub faces: Vec<BlowupFace>,
}

impl BlowupPoset {
    /// Number of faces of each codimension, starting from the interior.
    pub fn codim_counts(&self) -> Vec<usize> {
        let top = self.faces.iter().map(|f| f.codim).max().unwrap_or(0);
        let mut out = vec![0; top + 1];
        for f in &self.faces {
            out[f.codim] += 1;
        }
        out
    }

    /// Face `i` lies in the closure of face `j`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.faces[j].alpha.iter().all(|k| self.faces[i].alpha.contains(k))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "dim": self.dim,
            "codim_counts": self.codim_counts(),
            "faces": self.faces.iter().map(BlowupFace::to_json).collect::<Vec<_>>(),
        })
    }
}

pub fn blowup_faces(a: &Arrangement) -> Result<BlowupPoset> {
    if a.is_empty() {
        return Err(Error::Validation("the empty arrangement has no blowup".into()));
    }
    let factors = decompose(a)?;
    let n = a.ambient_dim();
    let dim = 2 * n - factors.len();
    let (_, i0) = complex_of_irreducibles(a)?;
    let mut alphas: Vec<Vec<usize>> = vec![Vec::new()];
    alphas.extend(i0.simplices.iter().cloned());
    let mut faces = Vec::with_capacity(alphas.len());
    for s in alphas {
        let flats: Vec<Flat> = s.iter().map(|&i| i0.vertices[i].clone()).collect();
        let forest = nested_forest(a, &flats)?;
        let base = a.closure(flats.iter().fold(HyperplaneSet::EMPTY, |acc, f| acc.union(f.key)));
        let base_dims = factors
            .iter()
            .map(|f| f.arrangement.ambient_dim() - a.rank_of(base.inter(f.hyperplanes)))
            .collect();
        let nodes = (0..forest.nodes.len())
            .map(|i| ForestFactor {
                flat: forest.nodes[i].key,
                hat: forest.hat[i].key,
                quotient_dim: forest.hat[i].dim() - forest.nodes[i].dim(),
            })
            .collect();
        let face = BlowupFace { alpha: flats.iter().map(|f| f.key).collect(), codim: flats.len(), base, base_dims, nodes };
        invariant(face.base_dims.iter().all(|&d| d > 0), || format!("face {:?} has a degenerate base", face.alpha))?;
        invariant(face.dim() + face.codim == dim, || format!("dimensions of face {:?} do not add up", face.alpha))?;
        faces.push(face);
    }
    let poset = BlowupPoset { dim, faces };
    let counts = poset.codim_counts();
    let f = i0.f_vector();
    invariant(counts[0] == 1 && counts[1..] == f[..], || "face counts differ from the simplex counts".into())?;
    Ok(poset)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeHomology {
    pub degree: isize,
    pub rank: usize,
    /// Invariant factors greater than one.
    pub torsion: Vec<BigInt>,
}

/// Reduced integral homology, nonzero degrees only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyReport {
    pub degrees: Vec<DegreeHomology>,
    /// The complex has no simplices, so the only class sits in degree `-1`.
    pub empty_complex: bool,
}

impl HomologyReport {
    pub fn rank(&self, degree: isize) -> usize {
        self.degrees.iter().find(|d| d.degree == degree).map_or(0, |d| d.rank)
    }

    pub fn torsion_free(&self) -> bool {
        self.degrees.iter().all(|d| d.torsion.is_empty())
    }

    /// The single degree carrying homology, if there is exactly one.
    pub fn concentrated_in(&self) -> Option<isize> {
        match self.degrees.as_slice() {
            [d] => Some(d.degree),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut map = serde_json::Map::new();
        for d in &self.degrees {
            let t: Vec<String> = d.torsion.iter().map(|x| x.to_string()).collect();
            map.insert(d.degree.to_string(), json!([d.rank, t]));
        }
        json!({ "reduced": Value::Object(map), "empty_complex": self.empty_complex })
    }
}

/// Reduced homology of a simplicial complex given by all its simplices.
pub fn homology(c: &NestedComplex) -> HomologyReport {
    simplicial_homology(&c.simplices)
}

/// Reduced homology from the augmented chain complex; `simplices` must be
/// closed under taking nonempty faces.
pub fn simplicial_homology(simplices: &[Vec<usize>]) -> HomologyReport {
    let top = simplices.iter().map(|s| s.len()).max().unwrap_or(0);
    // by_size[k] holds simplices with k vertices; by_size[0] is the empty one
    let mut by_size: Vec<Vec<Vec<usize>>> = vec![Vec::new(); top + 1];
    by_size[0].push(Vec::new());
    for s in simplices {
        let mut s = s.clone();
        s.sort_unstable();
        by_size[s.len()].push(s);
    }
    for level in by_size.iter_mut() {
        level.sort();
        level.dedup();
    }
    // boundary[k]: chains on k-vertex simplices to (k-1)-vertex simplices
    let mut ranks = vec![0usize; top + 2];
    let mut torsion: Vec<Vec<BigInt>> = vec![Vec::new(); top + 2];
    for k in 1..=top {
        let rows = &by_size[k - 1];
        let cols = &by_size[k];
        let mut m = vec![vec![BigInt::zero(); cols.len()]; rows.len()];
        for (j, s) in cols.iter().enumerate() {
            for drop in 0..s.len() {
                let mut face = s.clone();
                face.remove(drop);
                let i = rows.binary_search(&face).expect("complex is closed under faces");
                m[i][j] = if drop % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            }
        }
        let snf = smith_normal_form(&m);
        ranks[k] = snf.rank;
        torsion[k - 1] = snf.diagonal.iter().filter(|d| d.abs() > BigInt::one()).map(|d| d.abs()).collect();
    }
    let mut degrees = Vec::new();
    for k in 0..=top {
        let chains = by_size[k].len();
        let rank = chains - ranks[k] - ranks[k + 1];
        let t = std::mem::take(&mut torsion[k]);
        if rank > 0 || !t.is_empty() {
            degrees.push(DegreeHomology { degree: k as isize - 1, rank, torsion: t });
        }
    }
    HomologyReport { degrees, empty_complex: simplices.is_empty() }
}

/// Chains of flats other than the full space and the origin.
pub fn proper_order_complex(a: &Arrangement) -> NestedComplex {
    let poset = intersection_poset(a);
    let origin = a.all();
    let vertices: Vec<Flat> =
        poset.flats.iter().filter(|f| !f.is_full_space() && f.key != origin).cloned().collect();
    let k = vertices.len();
    let above: Vec<Vec<usize>> = (0..k)
        .map(|i| (i + 1..k).filter(|&j| vertices[j].is_contained_in(&vertices[i])).collect())
        .collect();
    let mut simplices = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..k).map(|i| vec![i]).collect();
    while let Some(s) = stack.pop() {
        for &j in &above[*s.last().unwrap()] {
            let mut t = s.clone();
            t.push(j);
            stack.push(t);
        }
        simplices.push(s);
    }
    simplices.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    NestedComplex { vertices, simplices }
}

#[derive(Clone, Debug)]
pub struct WedgeReport {
    pub degree: isize,
    pub rank: usize,
    pub pass: bool,
    pub homology: HomologyReport,
    pub order_complex: HomologyReport,
}

impl WedgeReport {
    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "rank": self.rank,
            "pass": self.pass,
            "homology": self.homology.to_json(),
            "order_complex_homology": self.order_complex.to_json(),
        })
    }
}

/// Checks that `I₀` has the homology of a wedge of spheres of dimension
/// `n - l - 1` and agrees with the order complex of the proper flats, whose
/// spheres sit `l - 1` degrees higher.
pub fn verify_wedge(a: &Arrangement) -> Result<WedgeReport> {
    if a.is_empty() {
        return Err(Error::Validation("the empty arrangement has no curve complex".into()));
    }
    let l = decompose(a)?.len();
    let degree = a.ambient_dim() as isize - l as isize - 1;
    let (_, i0) = complex_of_irreducibles(a)?;
    let h = homology(&i0);
    let q = homology(&proper_order_complex(a));
    let rank = h.rank(degree);
    let shifted = q.concentrated_in() == Some(degree + l as isize - 1) && q.rank(degree + l as isize - 1) == rank;
    let pass = h.torsion_free() && h.concentrated_in() == Some(degree) && q.torsion_free() && shifted;
    Ok(WedgeReport { degree, rank, pass, homology: h, order_complex: q })
}

/// Reduction data attached to a simplex of `I₀`.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub simplex: Vec<usize>,
    pub arrangement: Arrangement,
}

#[derive(Clone, Debug)]
pub struct QuotientCurveComplex {
    pub complex: NestedComplex,
    pub reductions: Vec<Reduction>,
}

impl QuotientCurveComplex {
    pub fn vertex_types(&self) -> Vec<HyperplaneSet> {
        self.complex.vertices.iter().map(|v| v.key).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "complex": self.complex.to_json(),
            "reductions": self.reductions.iter().map(|r| json!({
                "simplex": r.simplex,
                "arrangement": r.arrangement.to_json(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Splits off the smallest flat `E` as `A_{V/E} ⊕ A^E` and carries the other
/// flats along: those containing `E` go to the normal part, the rest to
/// their trace on `E`.
pub fn reduce_along(a: &Arrangement, keys: &[HyperplaneSet]) -> Result<Arrangement> {
    let Some(pos) = (0..keys.len()).max_by_key(|&i| (a.rank_of(keys[i]), std::cmp::Reverse(i))) else {
        return Ok(a.clone());
    };
    let e = a.flat(keys[pos]);
    let normal = normal_arrangement(a, &e)?;
    let restricted = restriction_with_map(a, &e)?;
    let offset = normal.len();
    let order: Vec<usize> = e.key.to_vec();
    let mut rest = Vec::new();
    for (i, &k) in keys.iter().enumerate() {
        if i == pos {
            continue;
        }
        let mapped: HyperplaneSet = if k.is_subset(e.key) {
            k.iter().map(|j| order.iter().position(|&o| o == j).expect("key inside the flat")).collect()
        } else {
            restricted.image(k).iter().map(|t| t + offset).collect()
        };
        if !mapped.is_empty() {
            rest.push(mapped);
        }
    }
    let next = normal.direct_sum(&restricted.arrangement)?;
    let rest: Vec<HyperplaneSet> = rest.into_iter().map(|k| next.closure(k)).collect();
    reduce_along(&next, &rest)
}

pub fn quotient_curve_complex(a: &Arrangement) -> Result<QuotientCurveComplex> {
    if a.is_empty() {
        return Err(Error::Validation("the empty arrangement has no curve complex".into()));
    }
    if !is_simplicial(a)? {
        return Err(Error::NotSimplicial("quotient curve complex".into()));
    }
    let (_, complex) = complex_of_irreducibles(a)?;
    let mut reductions = Vec::with_capacity(complex.simplices.len());
    for s in &complex.simplices {
        let keys: Vec<HyperplaneSet> = s.iter().map(|&i| complex.vertices[i].key).collect();
        let arrangement = reduce_along(a, &keys)?;
        reductions.push(Reduction { simplex: s.clone(), arrangement });
    }
    Ok(QuotientCurveComplex { complex, reductions })
}
