//! Property tests over random covectors, matrices and arrangements.

mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use hypercurve::arrangement::HyperplaneSet;
use hypercurve::deligne::{selftest, Garside};
use hypercurve::exactlin::{rank, rank_fraction_free, smith_normal_form, Matrix};
use hypercurve::generators::dihedral;
use hypercurve::salvetti::salvetti_complex;
use hypercurve::{Arrangement, Covector, Sign, Zonotope};

fn sign_vec(m: usize) -> impl Strategy<Value = Vec<Sign>> {
    prop::collection::vec(prop_oneof![Just(Sign::Minus), Just(Sign::Zero), Just(Sign::Plus)], m)
}

fn covector_triple() -> impl Strategy<Value = (usize, Covector, Covector, Covector)> {
    (1usize..12).prop_flat_map(|m| {
        (Just(m), sign_vec(m), sign_vec(m), sign_vec(m))
            .prop_map(|(m, a, b, c)| (m, Covector::from_signs(&a), Covector::from_signs(&b), Covector::from_signs(&c)))
    })
}

fn int_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-4i64..=4, c), r))
}

fn arrangement() -> impl Strategy<Value = Arrangement> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 2..7).prop_filter_map("degenerate normals", |rows| {
        Arrangement::from_integers(3, &rows).ok()
    })
}

/// Chamber count from the subset expansion of the characteristic polynomial at -1.
fn whitney_chambers(a: &Arrangement) -> i64 {
    let m = a.len();
    (0u64..1 << m)
        .map(|mask| {
            let s: HyperplaneSet = (0..m).filter(|j| mask >> j & 1 == 1).collect();
            if (s.len() - a.rank_of(s)) % 2 == 0 { 1 } else { -1 }
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn composition_laws((m, x, y, w) in covector_triple()) {
        prop_assert_eq!(x.compose(y).compose(w), x.compose(y.compose(w)));
        prop_assert_eq!(x.compose(x), x);
        prop_assert_eq!(x.compose(x.negate()), x);
        prop_assert_eq!(x.compose(y).support(), x.support().union(y.support()));
        prop_assert!(x.conforms_to(x.compose(y)));
        for j in 0..m {
            if x.sign(j) != Sign::Zero {
                prop_assert_eq!(x.compose(y).sign(j), x.sign(j));
            }
        }
        prop_assert_eq!(Covector::parse(&x.to_string(m)).unwrap(), x);
    }

    #[test]
    fn ranks_agree(rows in int_matrix()) {
        let cols = rows[0].len();
        let q: Vec<Vec<BigRational>> =
            rows.iter().map(|r| r.iter().map(|&v| BigRational::from_integer(v.into())).collect()).collect();
        let m = Matrix::from_rows(cols, &q).unwrap();
        let z: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
        let snf = smith_normal_form(&z);
        prop_assert_eq!(rank(&m), rank_fraction_free(&m));
        prop_assert_eq!(rank(&m), snf.rank);
        for w in snf.diagonal.windows(2) {
            prop_assert!((&w[1] % &w[0]) == BigInt::from(0));
        }
    }

    #[test]
    fn random_arrangements(a in arrangement()) {
        let z = Zonotope::new(&a).unwrap();
        prop_assert_eq!(z.chamber_count() as i64, whitney_chambers(&a));
        let s = salvetti_complex(&z);
        prop_assert_eq!(s.f_vector()[0], z.chamber_count());
        prop_assert_eq!(s.euler_characteristic(), 0);
        let f = z.f_vector();
        let alt: i64 = f.iter().enumerate().map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) }).sum();
        prop_assert_eq!(alt, 1);
    }

    #[test]
    fn gates_are_nearest(a in arrangement(), pick in any::<prop::sample::Index>()) {
        let z = Zonotope::new(&a).unwrap();
        let f = pick.index(z.faces.len());
        for x in 0..z.chamber_count() {
            let g = z.gate(x, f);
            prop_assert!(z.contains_vertex(f, g));
            for &y in &z.face(f).vertices {
                prop_assert_eq!(z.distance(x, y), z.distance(x, g) + z.distance(g, y));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn garside_selftest_any_seed(m in 3usize..8, seed in any::<u64>()) {
        let z = Zonotope::new(&dihedral(m).unwrap()).unwrap();
        let g = Garside::new(&z).unwrap();
        let report = selftest(&g, 30, 6, seed).unwrap();
        prop_assert!(report.pass(), "{:?}", report);
    }
}
