//! Randomized consistency checks for the Garside engine.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Garside, Letter, Simple};
use crate::error::Result;

/// Random edge walk of the given length from `start`. With `positive_only`
/// every step is an arrow; otherwise each step is an arrow or the inverse of
/// the reverse arrow with equal probability.
pub fn random_word(g: &Garside<'_>, rng: &mut impl Rng, start: usize, len: usize, positive_only: bool) -> Vec<Letter> {
    let mut at = start;
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        let nbrs = &g.zonotope.neighbors[at];
        let (_, d) = nbrs[rng.random_range(0..nbrs.len())];
        let letter = if positive_only || rng.random_bool(0.5) {
            Letter::Forward(Simple::new(at, d))
        } else {
            Letter::Backward(Simple::new(d, at))
        };
        out.push(letter);
        at = d;
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub trials: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub checks: Vec<CheckOutcome>,
}

impl SelftestReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.failures == 0)
    }
}

struct Tally {
    name: &'static str,
    trials: usize,
    failures: usize,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { name, trials: 0, failures: 0 }
    }

    fn record(&mut self, ok: bool) {
        self.trials += 1;
        if !ok {
            self.failures += 1;
        }
    }

    fn finish(self) -> CheckOutcome {
        CheckOutcome { name: self.name.into(), trials: self.trials, failures: self.failures }
    }
}

/// Lattice, normal form, Garside element and group-law checks on random
/// samples.
pub fn selftest(g: &Garside<'_>, samples: usize, max_len: usize, seed: u64) -> Result<SelftestReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = g.chamber_count();
    let mut lattice = Tally::new("prefix lattice");
    let mut weighted = Tally::new("normal form is left-weighted and stable");
    let mut quasi = Tally::new("delta squared is quasi-central");
    let mut inverse = Tally::new("inverse composes to identity");
    let mut assoc = Tally::new("composition is associative");
    let mut pn = Tally::new("positive-negative form recomposes");
    let mut additive = Tally::new("signed intersection is additive");
    for _ in 0..samples {
        let x = rng.random_range(0..n);
        let (c, d) = (rng.random_range(0..n), rng.random_range(0..n));
        let (s, t) = (Simple::new(x, c), Simple::new(x, d));
        let m = g.meet_prefix(&[s, t])?;
        let j = g.join_prefix(&[s, t])?;
        let mut ok = g.is_prefix(m, s)? && g.is_prefix(m, t)? && g.is_prefix(s, j)? && g.is_prefix(t, j)?;
        for e in 0..n {
            let u = Simple::new(x, e);
            if g.is_prefix(u, s)? && g.is_prefix(u, t)? {
                ok &= g.is_prefix(u, m)?;
            }
            if g.is_prefix(s, u)? && g.is_prefix(t, u)? {
                ok &= g.is_prefix(j, u)?;
            }
        }
        lattice.record(ok);

        let len = rng.random_range(1..=max_len.max(1));
        let word = random_word(g, &mut rng, x, len, true);
        let simples: Vec<Simple> = word
            .iter()
            .map(|l| match *l {
                Letter::Forward(s) => s,
                Letter::Backward(s) => s,
            })
            .collect();
        let p = g.positive(x, simples)?;
        let stable = g.normalize(p.factors.clone()) == p.factors;
        let lw = p.factors.windows(2).all(|w| g.is_left_weighted(w[0], w[1]));
        weighted.record(stable && lw && g.positive_length(&p) == len);
        let lhs = g.concat(&g.delta_squared(x), &p)?;
        let rhs = g.concat(&p, &g.delta_squared(p.target))?;
        quasi.record(lhs == rhs);

        let w1 = random_word(g, &mut rng, x, len, false);
        let f = g.from_letters(x, &w1)?;
        let f_inv = g.inverse(&f);
        inverse.record(g.compose(&f, &f_inv)? == g.identity(x) && g.compose(&f_inv, &f)? == g.identity(f.target));
        let w2 = random_word(g, &mut rng, f.target, len, false);
        let h = g.from_letters(f.target, &w2)?;
        let w3 = random_word(g, &mut rng, h.target, len, false);
        let k = g.from_letters(h.target, &w3)?;
        assoc.record(g.compose(&g.compose(&f, &h)?, &k)? == g.compose(&f, &g.compose(&h, &k)?)?);
        let (a, b) = g.pn_normal_form(&f)?;
        let back = g.from_pn(&a, &b)?;
        let coprime = g.right_gcd(&a, &b)?.is_identity();
        pn.record(back == f && coprime);
        let fh = g.compose(&f, &h)?;
        let mut add = true;
        for hp in 0..g.zonotope.hyperplane_count() {
            add &= g.signed_intersection(&f, hp) == g.word_intersection(&w1, hp);
            add &= g.signed_intersection(&fh, hp) == g.signed_intersection(&f, hp) + g.signed_intersection(&h, hp);
        }
        additive.record(add);
    }
    Ok(SelftestReport {
        checks: [lattice, weighted, quasi, inverse, assoc, pn, additive].into_iter().map(Tally::finish).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{braid, dihedral};
    use crate::zonotope::Zonotope;

    #[test]
    fn selftest_passes_on_small_arrangements() {
        for a in [dihedral(4).unwrap(), braid(4).unwrap()] {
            let z = Zonotope::new(&a).unwrap();
            let g = Garside::new(&z).unwrap();
            let r = selftest(&g, 40, 6, 7).unwrap();
            assert!(r.pass(), "{r:?}");
        }
    }
}
