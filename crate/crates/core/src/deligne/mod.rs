//! Garside structure of the Deligne groupoid of a simplicial arrangement.
//!
//! Simples are chamber pairs: all minimal positive paths between two
//! chambers are equivalent, so the Garside machinery reduces to the metric
//! geometry of the zonotope's 1-skeleton.

mod parabolic;
mod selftest;

pub use parabolic::*;
pub use selftest::*;

use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::arrangement::HyperplaneSet;
use crate::error::{Error, Result};
use crate::zonotope::Zonotope;

/// Class of minimal positive paths from `source` to `target`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize)]
pub struct Simple {
    pub source: usize,
    pub target: usize,
}

impl Simple {
    pub fn new(source: usize, target: usize) -> Self {
        Simple { source, target }
    }

    pub fn is_identity(self) -> bool {
        self.source == self.target
    }

    pub fn reversed(self) -> Simple {
        Simple { source: self.target, target: self.source }
    }
}

impl fmt::Display for Simple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}>c{}", self.source, self.target)
    }
}

/// One step of a path: a simple traversed forwards, or backwards along its
/// formal inverse (from its target to its source).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Letter {
    Forward(Simple),
    Backward(Simple),
}

impl Letter {
    pub fn start(self) -> usize {
        match self {
            Letter::Forward(s) => s.source,
            Letter::Backward(s) => s.target,
        }
    }

    pub fn end(self) -> usize {
        match self {
            Letter::Forward(s) => s.target,
            Letter::Backward(s) => s.source,
        }
    }

    pub fn inverse(self) -> Letter {
        match self {
            Letter::Forward(s) => Letter::Backward(s),
            Letter::Backward(s) => Letter::Forward(s),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Forward(s) => write!(f, "c{}>c{}", s.source, s.target),
            Letter::Backward(s) => write!(f, "c{}<c{}", s.target, s.source),
        }
    }
}

/// Parses `c0>c1,c1<c2,...`: `cA>cB` is the minimal positive path from A to
/// B, `cA<cB` goes from A to B along the inverse of the one from B to A. A
/// lone `cA` is the empty path at A.
pub fn parse_path(text: &str, chambers: usize) -> Result<(usize, Vec<Letter>)> {
    let chamber = |t: &str| -> Result<usize> {
        let id: usize = t
            .trim()
            .strip_prefix('c')
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| Error::Validation(format!("bad chamber name `{t}`")))?;
        if id >= chambers {
            return Err(Error::Validation(format!("chamber c{id} out of range (0..{chambers})")));
        }
        Ok(id)
    };
    let text = text.trim();
    if !text.contains('>') && !text.contains('<') {
        return Ok((chamber(text)?, Vec::new()));
    }
    let mut letters = Vec::new();
    for tok in text.split(',') {
        let letter = if let Some((a, b)) = tok.split_once('>') {
            Letter::Forward(Simple::new(chamber(a)?, chamber(b)?))
        } else if let Some((a, b)) = tok.split_once('<') {
            Letter::Backward(Simple::new(chamber(b)?, chamber(a)?))
        } else {
            return Err(Error::Validation(format!("bad path step `{tok}`")));
        };
        if let Some(prev) = letters.last().map(|l: &Letter| l.end()) {
            if prev != letter.start() {
                return Err(Error::Validation(format!("path step `{tok}` does not start where the previous one ended")));
            }
        }
        letters.push(letter);
    }
    Ok((letters[0].start(), letters))
}

/// Positive element in left-weighted normal form, without identity factors.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct Positive {
    pub source: usize,
    pub target: usize,
    pub factors: Vec<Simple>,
}

impl Positive {
    pub fn identity(x: usize) -> Self {
        Positive { source: x, target: x, factors: Vec::new() }
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn head(&self) -> Simple {
        self.factors.first().copied().unwrap_or(Simple::new(self.source, self.source))
    }

    pub fn to_json(&self) -> Value {
        json!(self.factors.iter().map(|s| [s.source, s.target]).collect::<Vec<_>>())
    }
}

/// `Δ_source^{-2k} · positive`, with `k` minimal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Morphism {
    pub source: usize,
    pub target: usize,
    pub k: usize,
    pub positive: Positive,
}

impl Morphism {
    pub fn is_loop(&self) -> bool {
        self.source == self.target
    }

    pub fn to_json(&self) -> Value {
        json!({
            "source": self.source,
            "target": self.target,
            "delta_square_inverse_power": self.k,
            "factors": self.positive.to_json(),
        })
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k > 0 {
            write!(f, "D(c{})^-{}", self.source, 2 * self.k)?;
            if !self.positive.is_identity() {
                write!(f, " ")?;
            }
        }
        let parts: Vec<String> = self.positive.factors.iter().map(|s| s.to_string()).collect();
        if parts.is_empty() && self.k == 0 {
            write!(f, "id(c{})", self.source)
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// The Garside engine over a simplicial zonotope.
#[derive(Clone, Debug)]
pub struct Garside<'z> {
    pub zonotope: &'z Zonotope,
    masks: Vec<u64>,
    antipode: Vec<usize>,
}

impl<'z> Garside<'z> {
    pub fn new(z: &'z Zonotope) -> Result<Self> {
        if !z.is_simplicial() {
            return Err(Error::NotSimplicial("Garside structure".into()));
        }
        let masks = z.chambers.iter().map(|c| c.pos).collect();
        let antipode = z
            .chambers
            .iter()
            .map(|c| z.chamber_id(c.negate()).expect("antipodal chamber exists"))
            .collect();
        Ok(Garside { zonotope: z, masks, antipode })
    }

    pub fn chamber_count(&self) -> usize {
        self.masks.len()
    }

    pub fn antipode(&self, x: usize) -> usize {
        self.antipode[x]
    }

    pub fn sep(&self, a: usize, b: usize) -> u64 {
        self.masks[a] ^ self.masks[b]
    }

    pub fn length(&self, s: Simple) -> usize {
        self.sep(s.source, s.target).count_ones() as usize
    }

    pub fn crossings(&self, s: Simple) -> HyperplaneSet {
        HyperplaneSet(self.sep(s.source, s.target))
    }

    fn walls(&self, c: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.zonotope.neighbors[c].iter().copied()
    }

    /// `Δ_x`: from `x` to its antipode.
    pub fn delta(&self, x: usize) -> Simple {
        Simple::new(x, self.antipode[x])
    }

    /// `Δ_x²` as a positive element.
    pub fn delta_squared(&self, x: usize) -> Positive {
        let y = self.antipode[x];
        Positive { source: x, target: x, factors: vec![Simple::new(x, y), Simple::new(y, x)] }
    }

    fn check_chamber(&self, c: usize) -> Result<()> {
        if c >= self.masks.len() {
            return Err(Error::Validation(format!("chamber c{c} out of range")));
        }
        Ok(())
    }

    pub fn simple(&self, c: usize, d: usize) -> Result<Simple> {
        self.check_chamber(c)?;
        self.check_chamber(d)?;
        Ok(Simple::new(c, d))
    }

    /// Arrow sequence of the representative minimal path with
    /// lexicographically least crossing order.
    pub fn representative(&self, s: Simple) -> Vec<Simple> {
        let mut out = Vec::new();
        let mut c = s.source;
        while c != s.target {
            let sep = self.sep(c, s.target);
            let (_, d) = self.walls(c).find(|&(j, _)| sep >> j & 1 == 1).expect("separating wall");
            out.push(Simple::new(c, d));
            c = d;
        }
        out
    }

    /// `s1 ≼ s2` in prefix order.
    pub fn is_prefix(&self, s1: Simple, s2: Simple) -> Result<bool> {
        if s1.source != s2.source {
            return Err(Error::Validation("prefix comparison needs a common source".into()));
        }
        let (a, b) = (self.sep(s1.source, s1.target), self.sep(s2.source, s2.target));
        Ok(a & !b == 0)
    }

    /// `s1` is a right divisor of `s2`.
    pub fn is_suffix(&self, s1: Simple, s2: Simple) -> Result<bool> {
        if s1.target != s2.target {
            return Err(Error::Validation("suffix comparison needs a common target".into()));
        }
        let (a, b) = (self.sep(s1.source, s1.target), self.sep(s2.source, s2.target));
        Ok(a & !b == 0)
    }

    /// Meet of `c` and `d` in the weak order based at `x`.
    pub fn meet_at(&self, x: usize, c: usize, d: usize) -> usize {
        let bound = self.sep(x, c) & self.sep(x, d);
        let mut e = x;
        loop {
            let here = self.sep(x, e);
            match self.walls(e).find(|&(j, _)| here >> j & 1 == 0 && bound >> j & 1 == 1) {
                Some((_, f)) => e = f,
                None => return e,
            }
        }
    }

    /// Join of `c` and `d` in the weak order based at `x`.
    pub fn join_at(&self, x: usize, c: usize, d: usize) -> usize {
        self.antipode[self.meet_at(x, self.antipode[c], self.antipode[d])]
    }

    fn common_source(&self, simples: &[Simple]) -> Result<usize> {
        let s = simples.first().ok_or_else(|| Error::Validation("no simples given".into()))?.source;
        if simples.iter().any(|t| t.source != s) {
            return Err(Error::Validation("simples do not share a source".into()));
        }
        Ok(s)
    }

    fn common_target(&self, simples: &[Simple]) -> Result<usize> {
        let t = simples.first().ok_or_else(|| Error::Validation("no simples given".into()))?.target;
        if simples.iter().any(|s| s.target != t) {
            return Err(Error::Validation("simples do not share a target".into()));
        }
        Ok(t)
    }

    pub fn join_prefix(&self, simples: &[Simple]) -> Result<Simple> {
        let x = self.common_source(simples)?;
        let t = simples.iter().fold(x, |acc, s| self.join_at(x, acc, s.target));
        Ok(Simple::new(x, t))
    }

    pub fn meet_prefix(&self, simples: &[Simple]) -> Result<Simple> {
        let x = self.common_source(simples)?;
        let t = simples[1..].iter().fold(simples[0].target, |acc, s| self.meet_at(x, acc, s.target));
        Ok(Simple::new(x, t))
    }

    pub fn join_suffix(&self, simples: &[Simple]) -> Result<Simple> {
        let y = self.common_target(simples)?;
        let s = simples.iter().fold(y, |acc, s| self.join_at(y, acc, s.source));
        Ok(Simple::new(s, y))
    }

    pub fn meet_suffix(&self, simples: &[Simple]) -> Result<Simple> {
        let y = self.common_target(simples)?;
        let s = simples[1..].iter().fold(simples[0].source, |acc, s| self.meet_at(y, acc, s.source));
        Ok(Simple::new(s, y))
    }

    /// No arrow `e` at the junction with `e ≼ t` and `s·e` simple.
    pub fn is_left_weighted(&self, s: Simple, t: Simple) -> bool {
        let (x, y, z) = (s.source, s.target, t.target);
        let (before, after) = (self.sep(x, y), self.sep(y, z));
        !self.walls(y).any(|(j, _)| after >> j & 1 == 1 && before >> j & 1 == 0)
    }

    /// Left-weighted refactorization of the product of two simples.
    pub fn factor_pair(&self, s: Simple, t: Simple) -> (Simple, Simple) {
        let (x, z) = (s.source, t.target);
        let mut b = s.target;
        loop {
            let (before, after) = (self.sep(x, b), self.sep(b, z));
            match self.walls(b).find(|&(j, _)| after >> j & 1 == 1 && before >> j & 1 == 0) {
                Some((_, c)) => b = c,
                None => return (Simple::new(x, b), Simple::new(b, z)),
            }
        }
    }

    /// Left-weighted normal form of a composable sequence of simples.
    pub fn normalize(&self, mut v: Vec<Simple>) -> Vec<Simple> {
        v.retain(|s| !s.is_identity());
        loop {
            let mut changed = false;
            let mut i = v.len();
            while i >= 2 {
                i -= 1;
                let (a, b) = self.factor_pair(v[i - 1], v[i]);
                if (a, b) != (v[i - 1], v[i]) {
                    v[i - 1] = a;
                    v[i] = b;
                    changed = true;
                }
            }
            v.retain(|s| !s.is_identity());
            if !changed {
                return v;
            }
        }
    }

    pub fn positive(&self, source: usize, simples: Vec<Simple>) -> Result<Positive> {
        self.check_chamber(source)?;
        let mut at = source;
        for s in &simples {
            if s.source != at {
                return Err(Error::Validation(format!("simple {s} does not start at c{at}")));
            }
            self.check_chamber(s.target)?;
            at = s.target;
        }
        Ok(Positive { source, target: at, factors: self.normalize(simples) })
    }

    pub fn positive_from_simple(&self, s: Simple) -> Positive {
        Positive { source: s.source, target: s.target, factors: self.normalize(vec![s]) }
    }

    pub fn concat(&self, p: &Positive, q: &Positive) -> Result<Positive> {
        if p.target != q.source {
            return Err(Error::Validation("positive elements are not composable".into()));
        }
        let mut v = p.factors.clone();
        v.extend(q.factors.iter().copied());
        Ok(Positive { source: p.source, target: q.target, factors: self.normalize(v) })
    }

    /// Image under the anti-automorphism reversing every arrow.
    pub fn reverse(&self, p: &Positive) -> Positive {
        let v = p.factors.iter().rev().map(|s| s.reversed()).collect();
        Positive { source: p.target, target: p.source, factors: self.normalize(v) }
    }

    /// Length of a positive element.
    pub fn positive_length(&self, p: &Positive) -> usize {
        p.factors.iter().map(|&s| self.length(s)).sum()
    }

    pub fn prefix_divides(&self, s: Simple, p: &Positive) -> bool {
        s.source == p.source && self.is_prefix(s, p.head()).unwrap_or(false)
    }

    pub fn suffix_divides(&self, s: Simple, p: &Positive) -> bool {
        s.target == p.target && self.prefix_divides(s.reversed(), &self.reverse(p))
    }

    /// `s⁻¹·p` when `s` is a prefix of `p`.
    pub fn left_divide(&self, s: Simple, p: &Positive) -> Option<Positive> {
        if !self.prefix_divides(s, p) {
            return None;
        }
        if s.is_identity() {
            return Some(p.clone());
        }
        let mut v = p.factors.clone();
        v[0] = Simple::new(s.target, v[0].target);
        Some(Positive { source: s.target, target: p.target, factors: self.normalize(v) })
    }

    /// `p·s⁻¹` when `s` is a suffix of `p`.
    pub fn right_divide_simple(&self, p: &Positive, s: Simple) -> Option<Positive> {
        self.left_divide(s.reversed(), &self.reverse(p)).map(|r| self.reverse(&r))
    }

    /// `p·d⁻¹` when `d` is a suffix of `p`.
    pub fn right_divide(&self, p: &Positive, d: &Positive) -> Option<Positive> {
        let mut cur = self.reverse(p);
        for s in self.reverse(d).factors {
            cur = self.left_divide(s, &cur)?;
        }
        Some(self.reverse(&cur))
    }

    /// Greatest common prefix.
    pub fn left_gcd(&self, p: &Positive, q: &Positive) -> Result<Positive> {
        if p.source != q.source {
            return Err(Error::Validation("gcd needs a common source".into()));
        }
        let source = p.source;
        let (mut p, mut q) = (p.clone(), q.clone());
        let mut g = Vec::new();
        while !p.is_identity() && !q.is_identity() {
            let s = self.meet_prefix(&[p.head(), q.head()])?;
            if s.is_identity() {
                break;
            }
            g.push(s);
            p = self.left_divide(s, &p).expect("meet divides");
            q = self.left_divide(s, &q).expect("meet divides");
        }
        self.positive(source, g)
    }

    /// Greatest common suffix.
    pub fn right_gcd(&self, p: &Positive, q: &Positive) -> Result<Positive> {
        if p.target != q.target {
            return Err(Error::Validation("gcd needs a common target".into()));
        }
        Ok(self.reverse(&self.left_gcd(&self.reverse(p), &self.reverse(q))?))
    }

    fn canonical(&self, source: usize, mut k: usize, mut p: Positive) -> Morphism {
        let anti = self.antipode[source];
        while k > 0
            && p.factors.len() >= 2
            && p.factors[0] == Simple::new(source, anti)
            && p.factors[1] == Simple::new(anti, source)
        {
            p.factors.drain(0..2);
            k -= 1;
        }
        Morphism { source, target: p.target, k, positive: p }
    }

    pub fn identity(&self, x: usize) -> Morphism {
        Morphism { source: x, target: x, k: 0, positive: Positive::identity(x) }
    }

    pub fn from_positive(&self, p: Positive) -> Morphism {
        Morphism { source: p.source, target: p.target, k: 0, positive: p }
    }

    pub fn from_simple(&self, s: Simple) -> Morphism {
        self.from_positive(self.positive_from_simple(s))
    }

    /// `s⁻¹ = Δ_b^{-2} · Simple(b, -b) · Simple(-b, a)` for `s = (a, b)`.
    pub fn inverse_simple(&self, s: Simple) -> Morphism {
        if s.is_identity() {
            return self.identity(s.source);
        }
        let (a, b) = (s.source, s.target);
        let nb = self.antipode[b];
        let p = Positive { source: b, target: a, factors: self.normalize(vec![Simple::new(b, nb), Simple::new(nb, a)]) };
        self.canonical(b, 1, p)
    }

    pub fn compose(&self, f: &Morphism, g: &Morphism) -> Result<Morphism> {
        if f.target != g.source {
            return Err(Error::Validation(format!("c{} and c{} do not match in composition", f.target, g.source)));
        }
        let p = self.concat(&f.positive, &g.positive)?;
        Ok(self.canonical(f.source, f.k + g.k, p))
    }

    pub fn compose_all(&self, parts: &[&Morphism]) -> Result<Morphism> {
        let mut acc = self.identity(parts.first().ok_or_else(|| Error::Validation("nothing to compose".into()))?.source);
        for p in parts {
            acc = self.compose(&acc, p)?;
        }
        Ok(acc)
    }

    pub fn inverse(&self, f: &Morphism) -> Morphism {
        let mut acc = self.identity(f.target);
        for s in f.positive.factors.iter().rev() {
            acc = self.compose(&acc, &self.inverse_simple(*s)).expect("factors compose");
        }
        let mut delta = Positive::identity(f.source);
        for _ in 0..f.k {
            delta = self.concat(&delta, &self.delta_squared(f.source)).expect("loops compose");
        }
        self.compose(&acc, &self.from_positive(delta)).expect("inverse composes")
    }

    pub fn from_letters(&self, base: usize, letters: &[Letter]) -> Result<Morphism> {
        self.check_chamber(base)?;
        let mut at = base;
        let mut k = 0;
        let mut v: Vec<Simple> = Vec::new();
        for l in letters {
            if l.start() != at {
                return Err(Error::Validation(format!("path step {l} does not start at c{at}")));
            }
            self.check_chamber(l.end())?;
            match *l {
                Letter::Forward(s) => v.push(s),
                Letter::Backward(s) => {
                    let nb = self.antipode[s.target];
                    k += 1;
                    v.push(Simple::new(s.target, nb));
                    v.push(Simple::new(nb, s.source));
                }
            }
            at = l.end();
        }
        let p = Positive { source: base, target: at, factors: self.normalize(v) };
        Ok(self.canonical(base, k, p))
    }

    pub fn equal(&self, f: &Morphism, g: &Morphism) -> bool {
        f == g
    }

    /// Net number of crossings of hyperplane `h`.
    pub fn signed_intersection(&self, f: &Morphism, h: usize) -> i64 {
        let pos = f.positive.factors.iter().filter(|s| self.sep(s.source, s.target) >> h & 1 == 1).count();
        pos as i64 - 2 * f.k as i64
    }

    /// Net crossings of `h` by a letter sequence, read letter by letter.
    pub fn word_intersection(&self, letters: &[Letter], h: usize) -> i64 {
        letters
            .iter()
            .map(|l| match *l {
                Letter::Forward(s) => (self.sep(s.source, s.target) >> h & 1) as i64,
                Letter::Backward(s) => -((self.sep(s.source, s.target) >> h & 1) as i64),
            })
            .sum()
    }

    /// `(a, b)` with `f = a·b⁻¹` and no common nontrivial suffix.
    pub fn pn_normal_form(&self, f: &Morphism) -> Result<(Positive, Positive)> {
        let mut b0 = Positive::identity(f.target);
        for _ in 0..f.k {
            b0 = self.concat(&b0, &self.delta_squared(f.target))?;
        }
        let a0 = f.positive.clone();
        let d = self.right_gcd(&a0, &b0)?;
        let a = self.right_divide(&a0, &d).ok_or_else(|| Error::Invariant("gcd does not divide".into()))?;
        let b = self.right_divide(&b0, &d).ok_or_else(|| Error::Invariant("gcd does not divide".into()))?;
        Ok((a, b))
    }

    /// `a·b⁻¹` as a morphism.
    pub fn from_pn(&self, a: &Positive, b: &Positive) -> Result<Morphism> {
        let inv = self.inverse(&self.from_positive(b.clone()));
        self.compose(&self.from_positive(a.clone()), &inv)
    }

    /// Powers of `Δ_x²` as a loop at `x`.
    pub fn delta_square_power(&self, x: usize, k: usize) -> Morphism {
        let mut p = Positive::identity(x);
        for _ in 0..k {
            p = self.concat(&p, &self.delta_squared(x)).expect("loops compose");
        }
        self.from_positive(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::dihedral;

    #[test]
    fn hexagon_basics() {
        let z = Zonotope::new(&dihedral(3).unwrap()).unwrap();
        let g = Garside::new(&z).unwrap();
        let x = 0;
        let arrows: Vec<Simple> = z.neighbors[x].iter().map(|&(_, d)| Simple::new(x, d)).collect();
        assert_eq!(g.join_prefix(&arrows).unwrap(), g.delta(x));
        assert!(g.meet_prefix(&arrows).unwrap().is_identity());
        let d = g.delta(x);
        let inv = g.inverse_simple(d);
        let id = g.compose(&g.from_simple(d), &inv).unwrap();
        assert_eq!(id, g.identity(x));
        for h in 0..3 {
            assert_eq!(g.signed_intersection(&g.from_simple(d), h), 1);
        }
    }
}
