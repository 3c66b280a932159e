//! Acceptance suite: one line per criterion, nonzero exit on any failure.

mod common;

use std::collections::{HashMap, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use hypercurve::arrangement::HyperplaneSet;
use hypercurve::curveblowup::{blowup_faces, verify_wedge};
use hypercurve::deligne::{random_word, Garside, Letter, Morphism, Positive, RestrictionEmbedding, Simple};
use hypercurve::generators::{braid, dihedral};
use hypercurve::salvetti::{embedding_check, salvetti_complex, EmbeddingVariant};
use hypercurve::{Arrangement, Zonotope};

type Outcome = Result<String, Box<dyn std::error::Error>>;

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err(format!($($arg)+).into());
        }
    };
}

fn salvetti_counts() -> Outcome {
    let z = Zonotope::new(&dihedral(3)?)?;
    let f = salvetti_complex(&z).f_vector();
    ensure!(f == vec![6, 12, 6], "hexagon f-vector {f:?}");
    for m in 2..=8 {
        let z = Zonotope::new(&dihedral(m)?)?;
        let f = salvetti_complex(&z).f_vector();
        ensure!(f == vec![2 * m, 4 * m, 2 * m], "I2({m}) f-vector {f:?}");
    }
    Ok("hexagon (6,12,6); I2(2..8) give (2m,4m,2m)".into())
}

fn wedge_concentration() -> Outcome {
    let mut a3_rank = 0;
    let mut names = Vec::new();
    for (name, a) in all_generators() {
        let w = verify_wedge(&a)?;
        let mut split = SplitOracle::new(&a);
        let l = split.components(a.all()).len() as isize;
        let degree = a.ambient_dim() as isize - l - 1;
        ensure!(w.pass, "{name}: wedge check failed: {:?}", w.homology);
        ensure!(w.degree == degree, "{name}: degree {} but expected {degree}", w.degree);
        ensure!(w.homology.torsion_free() && w.order_complex.torsion_free(), "{name}: torsion");
        ensure!(w.order_complex.rank(degree + l - 1) == w.rank, "{name}: order complex rank differs");
        let mu = mobius_magnitude(&a) as usize;
        ensure!(w.rank == mu, "{name}: rank {} but |mu| = {mu}", w.rank);
        if name == "A3" {
            a3_rank = w.rank;
        }
        names.push(name);
    }
    ensure!(a3_rank == 6, "A3 rank {a3_rank}");
    Ok(format!("{} arrangements concentrated and torsion-free; A3 rank 6", names.len()))
}

fn garside_soundness() -> Outcome {
    let mut cases: Vec<(String, Arrangement, usize)> =
        (3..=6).map(|m| (format!("I2({m})"), dihedral(m).unwrap(), 5)).collect();
    cases.push(("A3".into(), braid(4)?, 4));
    let mut words = 0;
    for (name, a, max_len) in cases {
        let z = Zonotope::new(&a)?;
        let g = Garside::new(&z)?;
        let n = z.chamber_count();
        for x in 0..n {
            let mut all: Vec<Vec<usize>> = Vec::new();
            for len in 0..=max_len {
                let walks = positive_walks(&z, x, len);
                let classes = positive_classes(&z, &walks);
                let nfs: Vec<Positive> = walks.iter().map(|w| walk_positive(&g, w)).collect();
                let mut by_class: HashMap<usize, &Positive> = HashMap::new();
                let mut by_nf: HashMap<&Positive, usize> = HashMap::new();
                for (c, nf) in classes.iter().zip(&nfs) {
                    ensure!(g.positive_length(nf) == len, "{name}: normal form changes length");
                    let p = *by_class.entry(*c).or_insert(nf);
                    ensure!(p == nf, "{name}: equivalent words with different normal forms");
                    let q = *by_nf.entry(nf).or_insert(*c);
                    ensure!(q == *c, "{name}: inequivalent words with equal normal forms");
                }
                words += walks.len();
                all.extend(walks);
            }
            let short: Vec<(&Vec<usize>, Positive)> =
                all.iter().filter(|w| w.len() <= max_len).map(|w| (w, walk_positive(&g, w))).collect();
            for (i, (v, pv)) in short.iter().enumerate() {
                for (w, pw) in &short[i + 1..] {
                    if v.last() != w.last() {
                        continue;
                    }
                    let same = pv == pw;
                    for &(_, e) in &z.neighbors[*v.last().unwrap()] {
                        let u = g.positive(pv.target, vec![Simple::new(pv.target, e)])?;
                        ensure!((g.concat(pv, &u)? == g.concat(pw, &u)?) == same, "{name}: right cancellation");
                    }
                    for src in 0..n {
                        for &(_, e) in &z.neighbors[src] {
                            if e == x {
                                let u = g.positive(src, vec![Simple::new(src, x)])?;
                                ensure!((g.concat(&u, pv)? == g.concat(&u, pw)?) == same, "{name}: left cancellation");
                            }
                        }
                    }
                }
            }
        }
        let below = |x: usize, s: usize, t: usize| -> bool {
            (0..z.hyperplane_count())
                .all(|j| z.chambers[x].sign(j) == z.chambers[s].sign(j) || z.chambers[s].sign(j) == z.chambers[t].sign(j))
        };
        for x in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let j = g.join_prefix(&[Simple::new(x, c), Simple::new(x, d)])?.target;
                    ensure!(below(x, c, j) && below(x, d, j), "{name}: join is not an upper bound");
                    for e in 0..n {
                        if below(x, c, e) && below(x, d, e) {
                            ensure!(below(x, j, e), "{name}: join is not least");
                        }
                    }
                }
            }
            let arrows: Vec<Simple> = z.neighbors[x].iter().map(|&(_, d)| Simple::new(x, d)).collect();
            let top = g.join_prefix(&arrows)?.target;
            ensure!(z.chambers[top] == z.chambers[x].negate(), "{name}: join of arrows is not the antipode");
        }
    }
    Ok(format!("{words} positive words agree with the rewriting oracle; cancellation and joins hold"))
}

fn factor_crossings(g: &Garside<'_>, p: &Positive, h: usize) -> i64 {
    p.factors.iter().filter(|s| g.zonotope.chambers[s.source].sign(h) != g.zonotope.chambers[s.target].sign(h)).count()
        as i64
}

fn letter_crossings(z: &Zonotope, w: &[Letter], h: usize) -> i64 {
    w.iter()
        .map(|l| {
            let crosses = z.chambers[l.start()].sign(h) != z.chambers[l.end()].sign(h);
            match (crosses, l) {
                (false, _) => 0,
                (true, Letter::Forward(_)) => 1,
                (true, Letter::Backward(_)) => -1,
            }
        })
        .sum()
}

fn pn_form() -> Outcome {
    let z = Zonotope::new(&braid(4)?)?;
    let g = Garside::new(&z)?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..1000 {
        let x = rng.random_range(0..z.chamber_count());
        let len = rng.random_range(1..=8);
        let w = random_word(&g, &mut rng, x, len, false);
        let f = g.from_letters(x, &w)?;
        let (a, b) = g.pn_normal_form(&f)?;
        if let (Some(&sa), Some(&sb)) = (a.factors.last(), b.factors.last()) {
            ensure!(g.meet_suffix(&[sa, sb])?.is_identity(), "last factors share a suffix");
        }
        ensure!(g.right_gcd(&a, &b)?.is_identity(), "common suffix remains");
        ensure!(g.from_pn(&a, &b)? == f, "a b^-1 does not recompose");
        for h in 0..z.hyperplane_count() {
            let expected = letter_crossings(&z, &w, h);
            ensure!(factor_crossings(&g, &a, h) - factor_crossings(&g, &b, h) == expected, "intersection number");
            ensure!(g.signed_intersection(&f, h) == expected, "intersection number of the morphism");
        }
    }
    Ok("1000 words on A3: coprime, recomposing, intersection numbers conserved".into())
}

fn quasi_central() -> Outcome {
    let z = Zonotope::new(&braid(4)?)?;
    let g = Garside::new(&z)?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let x = rng.random_range(0..z.chamber_count());
        let len = rng.random_range(1..=8);
        let f = g.from_letters(x, &random_word(&g, &mut rng, x, len, false))?;
        let lhs = g.compose(&g.delta_square_power(x, 1), &f)?;
        let rhs = g.compose(&f, &g.delta_square_power(f.target, 1))?;
        ensure!(g.equal(&lhs, &rhs), "Delta^2 does not commute past {f}");
    }
    Ok("200 random paths on A3".into())
}

fn irreducible_proper_faces(z: &Zonotope) -> Vec<usize> {
    let mut split = SplitOracle::new(&z.arrangement);
    (0..z.faces.len())
        .filter(|&f| {
            let face = z.face(f);
            face.dim >= 1 && f != z.top_face() && !split.splits(face.zero_set)
        })
        .collect()
}

fn commutation() -> Outcome {
    let mut cases: Vec<(String, Arrangement)> = vec![("A3".into(), braid(4)?)];
    cases.extend((3..=6).map(|m| (format!("I2({m})"), dihedral(m).unwrap())));
    let mut pairs = 0;
    let mut commuting = 0;
    for (name, a) in cases {
        let z = Zonotope::new(&a)?;
        let g = Garside::new(&z)?;
        let faces = irreducible_proper_faces(&z);
        for (i, &f1) in faces.iter().enumerate() {
            for &f2 in &faces[i + 1..] {
                let Some(&x) = z.face(f1).vertices.iter().find(|&&v| z.contains_vertex(f2, v)) else { continue };
                let t1 = g.dehn_twist(x, f1)?;
                let t2 = g.dehn_twist(x, f2)?;
                let brute = g.commute(&t1, &t2)?;
                let predicate = g.twists_commute_predicate(f1, f2)?;
                let (k1, k2) = (z.face(f1).zero_set, z.face(f2).zero_set);
                let nested = z.face(f1).covector.conforms_to(z.face(f2).covector)
                    || z.face(f2).covector.conforms_to(z.face(f1).covector);
                let union = k1.union(k2);
                let orthogonal = k1.is_disjoint(k2)
                    && a.closure(union) == union
                    && a.rank_of(k1) + a.rank_of(k2) == a.rank_of(union);
                ensure!(brute == predicate, "{name}: faces {f1}, {f2}: commute {brute}, predicate {predicate}");
                ensure!(brute == (nested || orthogonal), "{name}: faces {f1}, {f2}: oracle predicate disagrees");
                pairs += 1;
                commuting += brute as usize;
            }
        }
    }
    Ok(format!("{pairs} face pairs, {commuting} commuting, predicate exact"))
}

fn all_letter_words(z: &Zonotope, x: usize, max_len: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<(usize, Vec<Letter>)> = vec![(x, Vec::new())];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (at, w) in &frontier {
            for &(_, d) in &z.neighbors[*at] {
                for l in [Letter::Forward(Simple::new(*at, d)), Letter::Backward(Simple::new(d, *at))] {
                    let mut v = w.clone();
                    v.push(l);
                    out.push(v.clone());
                    next.push((d, v));
                }
            }
        }
        frontier = next;
    }
    out
}

fn centralizer() -> Outcome {
    let a = braid(4)?;
    let z = Zonotope::new(&a)?;
    let g = Garside::new(&z)?;
    let poset = hypercurve::arrangement::intersection_poset(&a);
    let lines: Vec<HyperplaneSet> =
        poset.flats.iter().filter(|f| f.codim == 2 && f.key.len() == 3).map(|f| f.key).collect();
    ensure!(lines.len() == 4, "expected four triple lines, found {}", lines.len());
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut decomposed = 0;
    let mut with_segments = 0;
    for &key in &lines {
        let (x, face) = (0..z.chamber_count()).find_map(|x| z.face_at(x, key).map(|f| (x, f))).unwrap();
        let twist = g.face_delta_squared(x, face)?;
        let mut samples: Vec<Morphism> = all_letter_words(&z, x, 6)
            .into_iter()
            .filter(|w| w.last().map_or(true, |l| l.end() == x))
            .map(|w| g.from_letters(x, &w))
            .collect::<Result<_, _>>()?;
        let opposite = z.face_id(z.face(face).covector.negate()).unwrap();
        let across = z.gate(x, opposite);
        let back = z.gate(across, face);
        let round = g.from_positive(g.positive(
            x,
            [Simple::new(x, across), Simple::new(across, back), Simple::new(back, x)].into_iter().filter(|s| !s.is_identity()).collect(),
        )?);
        let mut gens = vec![round, g.delta_square_power(x, 1), twist.clone()];
        for &v in &z.face(face).vertices {
            gens.push(g.from_positive(g.positive(x, vec![Simple::new(x, v), Simple::new(v, x)])?));
        }
        for _ in 0..100 {
            let mut f = g.identity(x);
            for _ in 0..rng.random_range(1..=3) {
                let pick = &gens[rng.random_range(0..gens.len())];
                let pick = if rng.random_bool(0.5) { g.inverse(pick) } else { pick.clone() };
                f = g.compose(&f, &pick)?;
            }
            ensure!(g.commute(&f, &twist)?, "generated loop fails to commute");
            samples.push(f);
        }
        let k0 = |h: usize| a.closure(key.with(h)).minus(key);
        for f in samples {
            if !g.commute(&f, &twist)? {
                continue;
            }
            let d = g.centralizer_decompose(&f, face)?;
            let mut rebuilt = g.inverse(&g.delta_square_power(x, d.k));
            for s in &d.segments {
                let sep = z.separation(s.source, s.target);
                ensure!(sep.is_disjoint(key) && sep.iter().any(|h| k0(h) == sep), "segment {s} is not elementary");
                rebuilt = g.compose(&rebuilt, &g.from_simple(*s))?;
            }
            for s in &d.face_path.factors {
                ensure!(z.separation(s.source, s.target).is_subset(key), "face path leaves the face");
            }
            rebuilt = g.compose(&rebuilt, &g.from_positive(d.face_path.clone()))?;
            ensure!(rebuilt == f, "decomposition does not recompose {f}");
            decomposed += 1;
            with_segments += !d.segments.is_empty() as usize;
        }
    }
    let mut checked = 0;
    let flats: Vec<HyperplaneSet> = lines
        .iter()
        .copied()
        .chain(poset.flats.iter().filter(|f| f.codim == 1).map(|f| f.key))
        .collect();
    for key in flats {
        let emb = RestrictionEmbedding::new(&z, key, 0)?;
        let gb = Garside::new(&emb.zonotope)?;
        for base in 0..emb.zonotope.chamber_count() {
            let mut forward: HashMap<Morphism, Morphism> = HashMap::new();
            let mut images: HashSet<Morphism> = HashSet::new();
            for w in all_letter_words(&emb.zonotope, base, 4) {
                let small = gb.from_letters(base, &w)?;
                let big = emb.map_morphism(&g, base, &w)?;
                let prev = forward.entry(small).or_insert_with(|| big.clone());
                ensure!(*prev == big, "embedding is not well defined on {key}");
                images.insert(big);
                checked += 1;
            }
            ensure!(images.len() == forward.len(), "embedding at {key} is not injective");
        }
    }
    Ok(format!(
        "{decomposed} commuting loops decomposed ({with_segments} with segments); {checked} restriction words injective"
    ))
}

fn simultaneous() -> Outcome {
    let a = braid(4)?;
    let z = Zonotope::new(&a)?;
    let g = Garside::new(&z)?;
    let faces = irreducible_proper_faces(&z);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut done = 0;
    let mut sizes = [0usize; 4];
    while done < 50 {
        let x = rng.random_range(0..z.chamber_count());
        let at_x: Vec<usize> = faces.iter().copied().filter(|&f| z.contains_vertex(f, x)).collect();
        let k = rng.random_range(1..=3usize);
        let mut family: Vec<usize> = Vec::new();
        for _ in 0..k {
            let f = at_x[rng.random_range(0..at_x.len())];
            if !family.contains(&f) {
                family.push(f);
            }
        }
        let mut ok = true;
        for i in 0..family.len() {
            for j in i + 1..family.len() {
                ok &= g.twists_commute_predicate(family[i], family[j])?;
            }
        }
        if !ok {
            continue;
        }
        let len = rng.random_range(1..=4);
        let w = random_word(&g, &mut rng, x, len, false);
        let conj = g.inverse(&g.from_letters(x, &w)?);
        let x0 = conj.source;
        let twists: Vec<Morphism> = family
            .iter()
            .map(|&f| g.compose_all(&[&conj, &g.face_delta_squared(x, f).unwrap(), &g.inverse(&conj)]))
            .collect::<Result<_, _>>()?;
        let r = g.simultaneous_standardize(&twists)?;
        let m = g.from_simple(Simple::new(x0, r.vertex));
        for ((t, &f_out), &f_in) in twists.iter().zip(&r.faces).zip(&family) {
            ensure!(z.contains_vertex(f_out, r.vertex), "output face misses the common vertex");
            ensure!(z.face(f_out).zero_set == z.face(f_in).zero_set, "output face changed type");
            let lhs = g.compose_all(&[&r.conjugator, t, &g.inverse(&r.conjugator)])?;
            let standard = g.compose_all(&[&m, &g.face_delta_squared(r.vertex, f_out)?, &g.inverse(&m)])?;
            ensure!(lhs == standard, "conjugated twist is not standard");
        }
        sizes[family.len()] += 1;
        done += 1;
    }
    Ok(format!("50 families on A3 (sizes 1/2/3: {}/{}/{})", sizes[1], sizes[2], sizes[3]))
}

fn subsets_up_to(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for s in &frontier {
            let start = s.last().map_or(0, |&l: &usize| l + 1);
            for i in start..n {
                let mut t = s.clone();
                t.push(i);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn blowup_poset() -> Outcome {
    let mut a3 = Vec::new();
    let mut count = 0;
    for (name, a) in all_generators() {
        let poset = blowup_faces(&a)?;
        let mut split = SplitOracle::new(&a);
        let comps = split.components(a.all());
        let n = a.ambient_dim();
        ensure!(poset.dim == 2 * n - comps.len(), "{name}: dim {}", poset.dim);
        let vertices: Vec<HyperplaneSet> = all_flats(&a)
            .into_iter()
            .filter(|&k| !k.is_empty() && a.rank_of(k) < n && !comps.contains(&k) && !split.splits(k))
            .collect();
        let mut expected: HashSet<Vec<HyperplaneSet>> = HashSet::new();
        for s in subsets_up_to(vertices.len(), n) {
            let keys: Vec<HyperplaneSet> = s.iter().map(|&i| vertices[i]).collect();
            let mut nested = true;
            for mask in 1u32..(1 << keys.len()) {
                if mask.count_ones() < 2 {
                    continue;
                }
                let chosen: Vec<HyperplaneSet> =
                    (0..keys.len()).filter(|i| mask >> i & 1 == 1).map(|i| keys[i]).collect();
                let antichain = chosen
                    .iter()
                    .enumerate()
                    .all(|(i, x)| chosen[i + 1..].iter().all(|y| !x.is_subset(*y) && !y.is_subset(*x)));
                let union = a.closure(chosen.iter().fold(HyperplaneSet::EMPTY, |acc, k| acc.union(*k)));
                if antichain && !split.splits(union) {
                    nested = false;
                    break;
                }
            }
            if nested {
                let mut keys = keys;
                keys.sort();
                expected.insert(keys);
            }
        }
        let found: HashSet<Vec<HyperplaneSet>> = poset
            .faces
            .iter()
            .map(|f| {
                let mut k = f.alpha.clone();
                k.sort();
                k
            })
            .collect();
        ensure!(found.len() == poset.faces.len(), "{name}: repeated faces");
        ensure!(found == expected, "{name}: {} faces, {} nested sets", found.len(), expected.len());
        if name == "A3" {
            a3 = poset.codim_counts();
        }
        count += 1;
    }
    ensure!(a3 == vec![1, 10, 15], "A3 codimension counts {a3:?}");
    Ok(format!("{count} arrangements match nested-set enumeration; A3 has 10 + 15 boundary faces"))
}

fn embedding_avoidance() -> Outcome {
    let mut total = 0;
    for a in [braid(3)?, braid(4)?] {
        let z = Zonotope::new(&a)?;
        for variant in [EmbeddingVariant::Psi, EmbeddingVariant::PsiPrime] {
            let r = embedding_check(&z, variant)?;
            ensure!(r.points > 0 && r.interpolants == 3 * r.points, "sampling incomplete: {r:?}");
            ensure!(r.pass(), "{variant:?}: {r:?}");
            total += r.points + r.interpolants;
        }
    }
    Ok(format!("{total} points on A2 and A3 avoid every complexified hyperplane, no collisions"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, u64); 10] = [
        ("Salvetti cell counts", salvetti_counts, 1),
        ("wedge concentration", wedge_concentration, 60),
        ("Garside soundness", garside_soundness, 600),
        ("positive-negative form", pn_form, 120),
        ("Delta squared quasi-centrality", quasi_central, 60),
        ("commutation criterion", commutation, 300),
        ("centralizer structure", centralizer, 600),
        ("simultaneous standardization", simultaneous, 600),
        ("blowup face poset", blowup_poset, 10),
        ("embedding avoidance", embedding_avoidance, 120),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run));
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(*budget);
        let (ok, detail) = match result {
            Ok(Ok(msg)) if !over => (true, msg),
            Ok(Ok(msg)) => (false, format!("{msg}; over the {budget} s budget")),
            Ok(Err(e)) => (false, e.to_string()),
            Err(_) => (false, "panicked".to_string()),
        };
        failed += !ok as usize;
        println!(
            "criterion {:>2} {} {name}: {detail} ({:.2} s)",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
