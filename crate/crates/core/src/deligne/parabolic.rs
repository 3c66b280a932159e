//! Face twists, standardization and parabolic subgroupoids.

use serde::Serialize;

use super::{Garside, Letter, Morphism, Positive, Simple};
use crate::arrangement::{is_irreducible_flat, restriction_with_map, HyperplaneSet, Restriction};
use crate::error::{invariant, Error, Result};
use crate::zonotope::{Covector, Zonotope};

/// A loop at `base` split as `Δ_base^{-2k} · segments · face_path`, where each
/// segment is an elementary segment parallel to the face and `face_path`
/// crosses only hyperplanes containing it.
#[derive(Clone, Debug)]
pub struct CentralizerDecomposition {
    pub k: usize,
    pub segments: Vec<Simple>,
    pub face_path: Positive,
}

/// `conjugator⁻¹ · f · conjugator = Δ_vertex(face)²`.
#[derive(Clone, Debug, Serialize)]
pub struct Standardized {
    pub conjugator: Positive,
    pub vertex: usize,
    pub face: usize,
}

/// `conjugator · t_i · conjugator⁻¹` is the standard twist of `faces[i]`,
/// and every face contains `vertex`.
#[derive(Clone, Debug)]
pub struct SimultaneousStandardization {
    pub conjugator: Morphism,
    pub vertex: usize,
    pub faces: Vec<usize>,
}

impl<'z> Garside<'z> {
    fn z(&self) -> &Zonotope {
        self.zonotope
    }

    fn check_face(&self, f: usize) -> Result<()> {
        if f >= self.z().faces.len() {
            return Err(Error::Validation(format!("face {f} out of range")));
        }
        Ok(())
    }

    fn face_is_irreducible(&self, f: usize) -> Result<bool> {
        let key = self.z().face(f).zero_set;
        if key.is_empty() {
            return Ok(false);
        }
        is_irreducible_flat(&self.z().arrangement, &self.z().arrangement.flat(key))
    }

    /// `Δ_x(F)`, the simple from `x` to its antipode in the face.
    pub fn garside_delta(&self, x: usize, f: usize) -> Result<Simple> {
        self.check_face(f)?;
        Ok(Simple::new(x, self.z().antipode(x, f)?))
    }

    /// `Δ_x(F)²` as a loop at `x`.
    pub fn face_delta_squared(&self, x: usize, f: usize) -> Result<Morphism> {
        let d = self.garside_delta(x, f)?;
        let p = self.positive(x, vec![d, d.reversed()])?;
        Ok(self.from_positive(p))
    }

    /// The segment from `x` in face `f` to its gate in the adjacent parallel
    /// face `g`.
    pub fn elementary_segment(&self, f: usize, g: usize, x: usize) -> Result<Simple> {
        self.check_face(f)?;
        self.check_face(g)?;
        let z = self.z();
        let (cf, cg) = (z.face(f).covector, z.face(g).covector);
        if f == g || z.face(f).zero_set != z.face(g).zero_set {
            return Err(Error::Validation("faces are not distinct parallel faces".into()));
        }
        let differ = cf.separation(cg);
        let span = z
            .face_id(cf.with_zeros(differ))
            .ok_or_else(|| Error::Validation("faces do not span a common face".into()))?;
        if z.face(span).dim != z.face(f).dim + 1 {
            return Err(Error::Validation("faces are not adjacent".into()));
        }
        if !z.contains_vertex(f, x) {
            return Err(Error::Validation(format!("c{x} is not a vertex of the face")));
        }
        Ok(Simple::new(x, z.gate(x, g)))
    }

    /// Standard twist around face `f`, based at `base`.
    pub fn dehn_twist(&self, base: usize, f: usize) -> Result<Morphism> {
        self.check_face(f)?;
        let x = self.z().gate(base, f);
        self.dehn_twist_via(base, f, x)
    }

    /// Same twist, conjugated through a chosen vertex `x` of `f`.
    pub fn dehn_twist_via(&self, base: usize, f: usize, x: usize) -> Result<Morphism> {
        self.check_face(f)?;
        let face = self.z().face(f);
        if face.dim == 0 {
            return Err(Error::Validation("a vertex has no twist".into()));
        }
        if f == self.z().top_face() {
            return Err(Error::Validation("the whole zonotope has no twist".into()));
        }
        if !self.face_is_irreducible(f)? {
            return Err(Error::Validation("face is not irreducible".into()));
        }
        if !self.z().contains_vertex(f, x) {
            return Err(Error::Validation(format!("c{x} is not a vertex of the face")));
        }
        let h = self.from_simple(Simple::new(base, x));
        let d2 = self.face_delta_squared(x, f)?;
        self.compose_all(&[&h, &d2, &self.inverse(&h)])
    }

    pub fn commute(&self, f: &Morphism, g: &Morphism) -> Result<bool> {
        if !f.is_loop() || !g.is_loop() || f.source != g.source {
            return Err(Error::Validation("commutation needs loops at one chamber".into()));
        }
        Ok(self.compose(f, g)? == self.compose(g, f)?)
    }

    /// Standard twists of irreducible faces commute exactly when the faces
    /// are orthogonal or nested.
    pub fn twists_commute_predicate(&self, f1: usize, f2: usize) -> Result<bool> {
        for f in [f1, f2] {
            self.check_face(f)?;
            if !self.face_is_irreducible(f)? {
                return Err(Error::Validation(format!("face {f} is not irreducible")));
            }
        }
        let z = self.z();
        Ok(z.orthogonal(f1, f2) || z.face_leq(f1, f2) || z.face_leq(f2, f1))
    }

    /// Splits a loop commuting with `Δ_base(F)²` along elementary segments.
    pub fn centralizer_decompose(&self, f: &Morphism, face: usize) -> Result<CentralizerDecomposition> {
        self.check_face(face)?;
        let x = f.source;
        if !f.is_loop() {
            return Err(Error::Validation("expected a loop".into()));
        }
        if !self.z().contains_vertex(face, x) {
            return Err(Error::Validation(format!("c{x} is not a vertex of the face")));
        }
        let twist = self.face_delta_squared(x, face)?;
        if !self.commute(f, &twist)? {
            return Err(Error::Validation("loop does not commute with the face twist".into()));
        }
        let key = self.z().face(face).zero_set;
        let mut cur = f.positive.clone();
        let mut tail = Vec::new();
        'strip: loop {
            let t = cur.target;
            for (j, c) in self.walls(t).collect::<Vec<_>>() {
                if !key.contains(j) {
                    continue;
                }
                let e = Simple::new(c, t);
                if let Some(rest) = self.right_divide_simple(&cur, e) {
                    cur = rest;
                    tail.push(e);
                    continue 'strip;
                }
            }
            break;
        }
        tail.reverse();
        let mut segments = Vec::new();
        'peel: while !cur.is_identity() {
            let t = cur.target;
            for (j, _) in self.walls(t).collect::<Vec<_>>() {
                if key.contains(j) {
                    continue;
                }
                let wider = self.z().arrangement.closure(key.with(j));
                let from = self.z().chambers[t].flip(wider.minus(key));
                let Some(c) = self.z().chamber_id(from) else { continue };
                let u = Simple::new(c, t);
                if let Some(rest) = self.right_divide_simple(&cur, u) {
                    cur = rest;
                    segments.push(u);
                    continue 'peel;
                }
            }
            return Err(Error::Invariant(format!("centralizer decomposition is stuck at c{t}")));
        }
        segments.reverse();
        let face_path = if tail.is_empty() {
            Positive::identity(cur.target)
        } else {
            self.positive(tail[0].source, tail)?
        };
        let mut rebuilt = self.delta_square_power(x, f.k);
        rebuilt = self.inverse(&rebuilt);
        for s in &segments {
            rebuilt = self.compose(&rebuilt, &self.from_simple(*s))?;
        }
        rebuilt = self.compose(&rebuilt, &self.from_positive(face_path.clone()))?;
        invariant(rebuilt == *f, || "centralizer decomposition does not recompose".into())?;
        Ok(CentralizerDecomposition { k: f.k, segments, face_path })
    }

    /// Finds a positive `b` and a face `F'` with `b⁻¹ f b = Δ(F')²`.
    pub fn standardize(&self, f: &Morphism) -> Result<Standardized> {
        if !f.is_loop() {
            return Err(Error::Validation("expected a loop".into()));
        }
        let (a, b) = self.pn_normal_form(f)?;
        let y = b.target;
        let q = self.compose(&self.inverse(&self.from_positive(b.clone())), &self.from_positive(a))?;
        let m = self.z().hyperplane_count();
        let mut key = HyperplaneSet::EMPTY;
        for h in 0..m {
            match self.signed_intersection(&q, h) {
                2 => key.insert(h),
                0 => {}
                _ => return Err(Error::Validation("loop is not conjugate to a face twist".into())),
            }
        }
        let face = self
            .z()
            .face_at(y, key)
            .ok_or_else(|| Error::Validation("loop is not conjugate to a face twist".into()))?;
        if key.is_empty() || !self.face_is_irreducible(face)? || q != self.face_delta_squared(y, face)? {
            return Err(Error::Validation("loop is not conjugate to a face twist".into()));
        }
        Ok(Standardized { conjugator: b, vertex: y, face })
    }

    /// Standardizes `h · Δ_x(F)² · h⁻¹` where `h` ends at a vertex `x` of `F`.
    pub fn standardize_with_witness(&self, h: &Morphism, face: usize) -> Result<Standardized> {
        self.check_face(face)?;
        if !self.z().contains_vertex(face, h.target) {
            return Err(Error::Validation("witness does not end at a vertex of the face".into()));
        }
        let twist = self.compose_all(&[h, &self.face_delta_squared(h.target, face)?, &self.inverse(h)])?;
        let s = self.standardize(&twist)?;
        invariant(
            self.z().face(s.face).zero_set == self.z().face(face).zero_set,
            || "standardized face is not parallel to the original".into(),
        )?;
        Ok(s)
    }

    /// Conjugates pairwise commuting twists to standard twists at one vertex.
    pub fn simultaneous_standardize(&self, twists: &[Morphism]) -> Result<SimultaneousStandardization> {
        let first = twists.first().ok_or_else(|| Error::Validation("no twists given".into()))?;
        let x0 = first.source;
        if twists.iter().any(|t| !t.is_loop() || t.source != x0) {
            return Err(Error::Validation("twists must be loops at one chamber".into()));
        }
        for i in 0..twists.len() {
            for j in i + 1..twists.len() {
                if !self.commute(&twists[i], &twists[j])? {
                    return Err(Error::Validation(format!("twists {i} and {j} do not commute")));
                }
            }
        }
        let mut c = self.identity(x0);
        let mut x = x0;
        let mut faces: Vec<usize> = Vec::new();
        for t in twists {
            let m = self.from_simple(Simple::new(x0, x));
            let m_inv = self.inverse(&m);
            let q = self.compose_all(&[&m_inv, &c, t, &self.inverse(&c), &m])?;
            let s = self.standardize(&q)?;
            let b = self.from_positive(s.conjugator.clone());
            let b_inv = self.inverse(&b);
            let y = s.vertex;
            let mut moved = Vec::with_capacity(faces.len() + 1);
            for &f in &faces {
                let key = self.z().face(f).zero_set;
                let g = self
                    .z()
                    .face_at(y, key)
                    .ok_or_else(|| Error::Invariant("standard face does not survive conjugation".into()))?;
                let before = self.compose_all(&[&b_inv, &self.face_delta_squared(x, f)?, &b])?;
                invariant(before == self.face_delta_squared(y, g)?, || {
                    "earlier twist is not standard after conjugation".into()
                })?;
                moved.push(g);
            }
            moved.push(s.face);
            faces = moved;
            let to_y = self.from_simple(Simple::new(x0, y));
            c = self.compose_all(&[&to_y, &b_inv, &m_inv, &c])?;
            x = y;
        }
        let m = self.from_simple(Simple::new(x0, x));
        for (t, &f) in twists.iter().zip(&faces) {
            let lhs = self.compose_all(&[&c, t, &self.inverse(&c)])?;
            invariant(lhs == self.dehn_twist_via(x0, f, x)?, || "simultaneous standardization failed".into())?;
            invariant(lhs == self.compose_all(&[&m, &self.face_delta_squared(x, f)?, &self.inverse(&m)])?, || {
                "standard twist depends on the vertex".into()
            })?;
        }
        Ok(SimultaneousStandardization { conjugator: c, vertex: x, faces })
    }

    /// Image of a path under the retraction onto face `f`: every chamber goes
    /// to its gate, so arrows crossing hyperplanes containing the face survive
    /// and the rest collapse.
    pub fn retract_path(&self, f: usize, letters: &[Letter]) -> Result<Vec<Letter>> {
        self.check_face(f)?;
        let z = self.z();
        Ok(letters
            .iter()
            .filter_map(|l| {
                let (s, fwd) = match *l {
                    Letter::Forward(s) => (s, true),
                    Letter::Backward(s) => (s, false),
                };
                let r = Simple::new(z.gate(s.source, f), z.gate(s.target, f));
                match (r.is_identity(), fwd) {
                    (true, _) => None,
                    (false, true) => Some(Letter::Forward(r)),
                    (false, false) => Some(Letter::Backward(r)),
                }
            })
            .collect())
    }
}

/// The map from the groupoid of the restriction to a flat into the ambient
/// groupoid: a chamber of the restriction goes to the chamber next to it on
/// the side of a fixed reference chamber.
#[derive(Clone, Debug)]
pub struct RestrictionEmbedding {
    pub key: HyperplaneSet,
    pub restriction: Restriction,
    pub zonotope: Zonotope,
    pub image: Vec<usize>,
    pub reference: usize,
}

impl RestrictionEmbedding {
    pub fn new(ambient: &Zonotope, key: HyperplaneSet, reference: usize) -> Result<Self> {
        if !ambient.is_simplicial() {
            return Err(Error::NotSimplicial("restriction embedding".into()));
        }
        let a = &ambient.arrangement;
        if a.closure(key) != key {
            return Err(Error::Validation(format!("{key} is not a flat")));
        }
        if reference >= ambient.chamber_count() {
            return Err(Error::Validation(format!("chamber c{reference} out of range")));
        }
        let restriction = restriction_with_map(a, &a.flat(key))?;
        let zonotope = Zonotope::new(&restriction.arrangement)?;
        let base = ambient.chambers[reference];
        let mut image = Vec::with_capacity(zonotope.chamber_count());
        for &v in &zonotope.chambers {
            let point = restriction.lift(&zonotope.witness(v));
            let lifted = Covector::from_signs(&a.signs_of(&point));
            invariant(lifted.zero_set(a.len()) == key, || "lifted chamber leaves the flat".into())?;
            let id = ambient
                .chamber_id(lifted.compose(base))
                .ok_or_else(|| Error::Invariant("lifted covector is not a chamber".into()))?;
            image.push(id);
        }
        Ok(RestrictionEmbedding { key, restriction, zonotope, image, reference })
    }

    pub fn map_letters(&self, letters: &[Letter]) -> Result<Vec<Letter>> {
        let n = self.image.len();
        letters
            .iter()
            .map(|l| {
                let map = |s: Simple| -> Result<Simple> {
                    if s.source >= n || s.target >= n {
                        return Err(Error::Validation("chamber of the restriction out of range".into()));
                    }
                    Ok(Simple::new(self.image[s.source], self.image[s.target]))
                };
                Ok(match *l {
                    Letter::Forward(s) => Letter::Forward(map(s)?),
                    Letter::Backward(s) => Letter::Backward(map(s)?),
                })
            })
            .collect()
    }

    pub fn map_morphism(&self, engine: &Garside<'_>, base: usize, letters: &[Letter]) -> Result<Morphism> {
        if base >= self.image.len() {
            return Err(Error::Validation("chamber of the restriction out of range".into()));
        }
        engine.from_letters(self.image[base], &self.map_letters(letters)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::braid;

    #[test]
    fn twist_at_edge_of_a3() {
        let z = Zonotope::new(&braid(4).unwrap()).unwrap();
        let g = Garside::new(&z).unwrap();
        let edge = z.edges_at(0)[0];
        let t = g.dehn_twist(5, edge).unwrap();
        let s = g.standardize(&t).unwrap();
        assert_eq!(z.face(s.face).zero_set, z.face(edge).zero_set);
        for x in z.face(edge).vertices.clone() {
            assert_eq!(g.dehn_twist_via(5, edge, x).unwrap(), t);
        }
    }
}
