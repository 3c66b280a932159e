//! Standard arrangement families.

use crate::arrangement::Arrangement;
use crate::error::{Error, Result};
use crate::exactlin::{Field, Scalar};

/// Braid arrangement on `n` strands: `x_i = x_j` for `i < j`, essentialized
/// to rank `n - 1`. Hyperplanes are listed by `(i, j)` in lexicographic order.
pub fn braid(n: usize) -> Result<Arrangement> {
    if n < 2 {
        return Err(Error::Validation("the braid arrangement needs at least two strands".into()));
    }
    let mut normals = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut v = vec![0i64; n];
            v[i] = 1;
            v[j] = -1;
            normals.push(v);
        }
    }
    Arrangement::from_integers(n, &normals)
}

/// Type B: `x_i = 0`, then `x_i = x_j` and `x_i = -x_j` for each `i < j`.
pub fn type_b(n: usize) -> Result<Arrangement> {
    if n < 1 {
        return Err(Error::Validation("type B needs rank at least one".into()));
    }
    let mut normals = Vec::new();
    for i in 0..n {
        let mut v = vec![0i64; n];
        v[i] = 1;
        normals.push(v);
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut v = vec![0i64; n];
            v[i] = 1;
            v[j] = -1;
            normals.push(v.clone());
            v[j] = 1;
            normals.push(v);
        }
    }
    Arrangement::from_integers(n, &normals)
}

/// `m` lines through the origin of the plane: `(1,0)`, `(0,1)`, `(1,k)`.
pub fn dihedral(m: usize) -> Result<Arrangement> {
    if m < 2 {
        return Err(Error::Validation("a dihedral arrangement needs at least two lines".into()));
    }
    let mut normals = vec![vec![1, 0], vec![0, 1]];
    for k in 1..=(m as i64 - 2) {
        normals.push(vec![1, k]);
    }
    Arrangement::from_integers(2, &normals)
}

/// Coordinate hyperplanes of `n`-space.
pub fn boolean(n: usize) -> Result<Arrangement> {
    if n < 1 {
        return Err(Error::Validation("the Boolean arrangement needs rank at least one".into()));
    }
    let normals: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect();
    Arrangement::from_integers(n, &normals)
}

/// The fifteen mirrors of the icosahedral reflection group, over ℚ(√5).
pub fn h3() -> Result<Arrangement> {
    let phi = Scalar::golden();
    let inv = phi.sub(&Scalar::int(1));
    let mut normals = Vec::new();
    for i in 0..3 {
        let mut v = vec![Scalar::int(0); 3];
        v[i] = Scalar::int(1);
        normals.push(v);
    }
    for (s1, s2) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
        let base = [Scalar::int(1), phi.mul(&Scalar::int(s1)), inv.mul(&Scalar::int(s2))];
        for shift in 0..3 {
            normals.push((0..3).map(|i| base[(i + 3 - shift) % 3].clone()).collect());
        }
    }
    Arrangement::new(3, normals)
}

pub fn direct_sum(a: &Arrangement, b: &Arrangement) -> Result<Arrangement> {
    a.direct_sum(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zonotope::Zonotope;

    #[test]
    fn sizes() {
        assert_eq!(braid(4).unwrap().len(), 6);
        assert_eq!(braid(4).unwrap().ambient_dim(), 3);
        assert_eq!(type_b(3).unwrap().len(), 9);
        assert_eq!(dihedral(5).unwrap().len(), 5);
        assert_eq!(h3().unwrap().len(), 15);
    }

    #[test]
    fn chamber_counts() {
        assert_eq!(Zonotope::new(&braid(4).unwrap()).unwrap().chamber_count(), 24);
        assert_eq!(Zonotope::new(&type_b(3).unwrap()).unwrap().chamber_count(), 48);
        let z = Zonotope::new(&h3().unwrap()).unwrap();
        assert_eq!(z.chamber_count(), 120);
        assert!(z.is_simplicial());
    }
}
