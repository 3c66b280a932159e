//! Blowup faces, homology and the quotient curve complex.

mod common;

use std::collections::BTreeSet;

use common::*;
use hypercurve::arrangement::{complex_of_irreducibles, HyperplaneSet};
use hypercurve::curveblowup::*;
use hypercurve::generators::{boolean, braid, dihedral, type_b};
use hypercurve::{Arrangement, Error};
use num_bigint::BigInt;

/// Every nonempty face of the given top simplices.
fn closure(top: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = BTreeSet::new();
    for s in top {
        for mask in 1u32..(1 << s.len()) {
            out.insert((0..s.len()).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect::<Vec<_>>());
        }
    }
    out.into_iter().collect()
}

#[test]
fn homology_of_small_complexes() {
    let circle = closure(&[vec![0, 1], vec![1, 2], vec![0, 2]]);
    let h = simplicial_homology(&circle);
    assert_eq!((h.concentrated_in(), h.rank(1)), (Some(1), 1));
    let sphere = closure(&[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]);
    assert_eq!(simplicial_homology(&sphere).concentrated_in(), Some(2));
    let disk = closure(&[vec![0, 1, 2]]);
    let h = simplicial_homology(&disk);
    assert!(h.degrees.is_empty() && !h.empty_complex);

    let rp2 = closure(&[
        vec![0, 1, 2],
        vec![0, 2, 3],
        vec![0, 3, 4],
        vec![0, 4, 5],
        vec![0, 1, 5],
        vec![1, 2, 4],
        vec![2, 3, 5],
        vec![1, 3, 4],
        vec![2, 4, 5],
        vec![1, 3, 5],
    ]);
    let h = simplicial_homology(&rp2);
    assert_eq!(h.degrees.len(), 1);
    assert_eq!((h.degrees[0].degree, h.degrees[0].rank), (1, 0));
    assert_eq!(h.degrees[0].torsion, vec![BigInt::from(2)]);
    assert!(!h.torsion_free());
}

#[test]
fn euler_characteristic_matches_face_counts() {
    for (name, a) in all_generators() {
        let (_, i0) = complex_of_irreducibles(&a).unwrap();
        let h = homology(&i0);
        let from_homology: i64 = h.degrees.iter().map(|d| if d.degree % 2 == 0 { 1 } else { -1 } * d.rank as i64).sum();
        let from_faces: i64 = -1 + i0.f_vector().iter().enumerate().map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) }).sum::<i64>();
        assert_eq!(from_homology, from_faces, "{name}");
    }
}

#[test]
fn order_complex_gives_mobius() {
    for (name, a) in all_generators() {
        let q = homology(&proper_order_complex(&a));
        let top = a.rank_of(a.all()) as isize - 2;
        assert_eq!(q.concentrated_in(), Some(top), "{name}");
        assert_eq!(q.rank(top) as i64, mobius_magnitude(&a), "{name}");
    }
}

#[test]
fn wedge_examples() {
    let w = verify_wedge(&braid(4).unwrap()).unwrap();
    assert_eq!((w.degree, w.rank, w.pass), (1, 6, true));
    let w = verify_wedge(&dihedral(3).unwrap()).unwrap();
    assert_eq!((w.degree, w.rank, w.pass), (0, 2, true));
    let w = verify_wedge(&type_b(3).unwrap()).unwrap();
    assert_eq!((w.degree, w.rank), (1, 15));
    let j = w.to_json();
    assert_eq!(j["pass"], true);
}

#[test]
fn blowup_examples() {
    let p = blowup_faces(&boolean(2).unwrap()).unwrap();
    assert_eq!((p.dim, p.codim_counts()), (2, vec![1]));
    let p = blowup_faces(&dihedral(3).unwrap()).unwrap();
    assert_eq!((p.dim, p.codim_counts()), (3, vec![1, 3]));
    let interior = p.faces.iter().position(|f| f.codim == 0).unwrap();
    assert!((0..p.faces.len()).all(|i| p.leq(i, interior)));
    let edge = p.faces.iter().find(|f| f.codim == 1).unwrap();
    assert_eq!(edge.nodes.len(), 1);
    assert_eq!(edge.nodes[0].quotient_dim, 1);
    assert_eq!(edge.base_dims, vec![1]);

    let p = blowup_faces(&braid(4).unwrap()).unwrap();
    assert_eq!((p.dim, p.codim_counts()), (5, vec![1, 10, 15]));
    for f in &p.faces {
        assert_eq!(f.dim() + f.codim, 5);
    }
    let corners: Vec<usize> = (0..p.faces.len()).filter(|&i| p.faces[i].codim == 2).collect();
    for &c in &corners {
        let above = (0..p.faces.len()).filter(|&i| p.faces[i].codim == 1 && p.leq(c, i)).count();
        assert_eq!(above, 2);
    }
    assert!(blowup_faces(&Arrangement::empty()).is_err());
}

fn component_count(a: &Arrangement) -> usize {
    SplitOracle::new(a).components(a.all()).len()
}

#[test]
fn curve_complex_reductions() {
    let a2 = dihedral(3).unwrap();
    let q = quotient_curve_complex(&a2).unwrap();
    assert_eq!(q.vertex_types().len(), 3);
    assert!(q.vertex_types().iter().all(|k| k.len() == 1));
    for r in &q.reductions {
        assert_eq!((r.arrangement.len(), component_count(&r.arrangement)), (2, 2));
    }

    for (name, a) in all_generators() {
        let q = match quotient_curve_complex(&a) {
            Ok(q) => q,
            Err(Error::NotSimplicial(_)) => continue,
            Err(e) => panic!("{name}: {e}"),
        };
        let base = component_count(&a);
        assert_eq!(q.reductions.len(), q.complex.simplices.len(), "{name}");
        for r in &q.reductions {
            let reduced = &r.arrangement;
            assert_eq!(reduced.ambient_dim(), a.ambient_dim(), "{name}");
            assert_eq!(reduced.rank_of(reduced.all()), a.rank_of(a.all()), "{name}");
            assert_eq!(component_count(reduced), base + r.simplex.len(), "{name} {:?}", r.simplex);
        }
    }
    let generic = Arrangement::from_integers(3, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 1]]).unwrap();
    assert!(matches!(quotient_curve_complex(&generic), Err(Error::NotSimplicial(_))));
}

#[test]
fn reduce_along_single_flats() {
    let a = braid(4).unwrap();
    let line = HyperplaneSet::singleton(0);
    let r = reduce_along(&a, &[line]).unwrap();
    assert_eq!((r.len(), component_count(&r)), (4, 2));
    let plane = a.closure(HyperplaneSet::singleton(0).with(1));
    let r = reduce_along(&a, &[plane]).unwrap();
    assert_eq!((r.len(), component_count(&r)), (4, 2));
    assert_eq!(reduce_along(&a, &[]).unwrap().len(), 6);
}
