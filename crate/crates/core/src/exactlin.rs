//! Exact linear algebra over ℚ and ℚ(√5), plus integer Smith normal form.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary precision rational number, always in lowest terms.
pub type Rational = BigRational;

/// Sign of a number, ordered `Minus < Zero < Plus`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    Minus,
    Zero,
    Plus,
}

impl Sign {
    pub fn negate(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Zero => Sign::Zero,
            Sign::Plus => Sign::Minus,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Plus,
            _ => Sign::Minus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Minus => '-',
            Sign::Zero => '0',
            Sign::Plus => '+',
        }
    }
}

/// An exact ordered field.
pub trait Field: Clone + PartialEq + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn from_rational(q: Rational) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Panics on division by zero.
    fn div(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn sign(&self) -> Sign;
    /// `Some(q)` when the value lies in ℚ.
    fn as_rational(&self) -> Option<Rational>;
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_int(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
    fn from_rational(q: Rational) -> Self {
        q
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn sign(&self) -> Sign {
        if Zero::is_zero(self) {
            Sign::Zero
        } else if self.is_positive() {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

/// Element `a + b·√5` of the real quadratic field ℚ(√5).
///
/// Every arrangement coordinate lives here; integer and rational data simply
/// have `b = 0`. The icosahedral arrangement needs the irrational part.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Scalar {
    pub rational: Rational,
    pub surd: Rational,
}

impl Scalar {
    pub fn new(rational: Rational, surd: Rational) -> Self {
        Scalar { rational, surd }
    }

    pub fn int(n: i64) -> Self {
        Scalar::new(Rational::from_int(n), <Rational as Field>::zero())
    }

    /// The golden ratio (1 + √5)/2.
    pub fn golden() -> Self {
        let half = Rational::new(BigInt::from(1), BigInt::from(2));
        Scalar::new(half.clone(), half)
    }

    pub fn from_integer(n: BigInt) -> Self {
        Scalar::new(Rational::from_integer(n), <Rational as Field>::zero())
    }

    pub fn is_rational(&self) -> bool {
        Zero::is_zero(&self.surd)
    }

    /// Norm `a² − 5b²` down to ℚ.
    pub fn norm(&self) -> Rational {
        &self.rational * &self.rational - Rational::from_int(5) * &self.surd * &self.surd
    }
}

impl Field for Scalar {
    fn zero() -> Self {
        Scalar::new(<Rational as Field>::zero(), <Rational as Field>::zero())
    }
    fn one() -> Self {
        Scalar::new(<Rational as Field>::one(), <Rational as Field>::zero())
    }
    fn from_int(n: i64) -> Self {
        Scalar::int(n)
    }
    fn from_rational(q: Rational) -> Self {
        Scalar::new(q, <Rational as Field>::zero())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.rational) && Zero::is_zero(&self.surd)
    }
    fn add(&self, other: &Self) -> Self {
        Scalar::new(&self.rational + &other.rational, &self.surd + &other.surd)
    }
    fn sub(&self, other: &Self) -> Self {
        Scalar::new(&self.rational - &other.rational, &self.surd - &other.surd)
    }
    fn mul(&self, other: &Self) -> Self {
        if self.is_rational() && other.is_rational() {
            return Scalar::new(&self.rational * &other.rational, <Rational as Field>::zero());
        }
        let five = Rational::from_int(5);
        Scalar::new(
            &self.rational * &other.rational + five * &self.surd * &other.surd,
            &self.rational * &other.surd + &self.surd * &other.rational,
        )
    }
    fn div(&self, other: &Self) -> Self {
        assert!(!Field::is_zero(other), "division by zero");
        if other.is_rational() {
            return Scalar::new(&self.rational / &other.rational, &self.surd / &other.rational);
        }
        let n = other.norm();
        let conj = Scalar::new(other.rational.clone(), -&other.surd);
        let p = Field::mul(self, &conj);
        Scalar::new(p.rational / &n, p.surd / &n)
    }
    fn neg(&self) -> Self {
        Scalar::new(-&self.rational, -&self.surd)
    }
    fn sign(&self) -> Sign {
        let sa = Field::sign(&self.rational);
        let sb = Field::sign(&self.surd);
        match (sa, sb) {
            (s, Sign::Zero) => s,
            (Sign::Zero, s) => s,
            (x, y) if x == y => x,
            _ => {
                let a2 = &self.rational * &self.rational;
                let b2 = Rational::from_int(5) * &self.surd * &self.surd;
                if a2 > b2 {
                    sa
                } else {
                    sb
                }
            }
        }
    }
    fn as_rational(&self) -> Option<Rational> {
        if self.is_rational() {
            Some(self.rational.clone())
        } else {
            None
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.rational);
        }
        if Zero::is_zero(&self.rational) {
            return write!(f, "{}*sqrt5", self.surd);
        }
        if self.surd.is_negative() {
            write!(f, "{}-{}*sqrt5", self.rational, -&self.surd)
        } else {
            write!(f, "{}+{}*sqrt5", self.rational, self.surd)
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts `p`, `p/q`, and sums such as `1/2+3/2*sqrt5` or `-sqrt5`.
    fn from_str(s: &str) -> Result<Self> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(Error::Validation("empty number".into()));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, c) in text.char_indices() {
            if (c == '+' || c == '-') && i > start {
                terms.push(&text[start..i]);
                start = i;
            }
        }
        terms.push(&text[start..]);
        let mut value = <Scalar as Field>::zero();
        for term in terms {
            let (coeff, surd) = match term.strip_suffix("sqrt5") {
                Some(rest) => (rest.strip_suffix('*').unwrap_or(rest), true),
                None => (term, false),
            };
            let q = match coeff {
                "" | "+" => <Rational as Field>::one(),
                "-" => -<Rational as Field>::one(),
                c => parse_rational(c)?,
            };
            let piece = if surd {
                Scalar::new(<Rational as Field>::zero(), q)
            } else {
                Scalar::from_rational(q)
            };
            value = Field::add(&value, &piece);
        }
        Ok(value)
    }
}

/// Parses `p` or `p/q`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Validation(format!("malformed rational `{s}`"));
    let s = s.strip_prefix('+').unwrap_or(s);
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p).map_err(|_| bad())?;
            let q = BigInt::from_str(q).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

pub fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    let mut acc = F::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = acc.add(&x.mul(y));
        }
    }
    acc
}

/// Rescales a nonzero vector so that it is a canonical representative of its
/// line up to positive and negative multiples: leading entry positive, and a
/// primitive integer vector whenever every entry is rational (leading entry 1
/// otherwise). Returns the factor the input was multiplied by, or `None` for
/// the zero vector.
pub fn canonicalize_direction<F: Field>(v: &mut [F]) -> Option<F> {
    let lead = v.iter().find(|x| !x.is_zero())?.clone();
    let mut factor = F::one().div(&lead);
    for x in v.iter_mut() {
        *x = x.mul(&factor);
    }
    let rationals: Option<Vec<Rational>> = v.iter().map(|x| x.as_rational()).collect();
    if let Some(qs) = rationals {
        let mut denom = BigInt::one();
        for q in &qs {
            denom = denom.lcm(q.denom());
        }
        let mut content = BigInt::zero();
        for q in &qs {
            let n = q.numer() * (&denom / q.denom());
            content = content.gcd(&n);
        }
        let scale = F::from_rational(Rational::new(denom, content));
        for x in v.iter_mut() {
            *x = x.mul(&scale);
        }
        factor = factor.mul(&scale);
    }
    Some(factor)
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<F> {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn from_rows(cols: usize, rows: &[Vec<F>]) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::Validation(format!(
                    "row of length {} in a matrix with {} columns",
                    r.len(),
                    cols
                )));
            }
            entries.extend(r.iter().cloned());
        }
        Ok(Matrix { rows: rows.len(), cols, entries })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.entries[i * n + i] = F::one();
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }
}

/// Rank of a matrix over its field.
pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    rref(&m.to_rows(), m.cols).1.len()
}

/// Rank of a rational matrix by Bareiss fraction-free elimination on the
/// integer matrix obtained by clearing row denominators.
pub fn rank_fraction_free(m: &Matrix<Rational>) -> usize {
    let mut a: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|r| {
            let row = m.row(r);
            let mut denom = BigInt::one();
            for q in row {
                denom = denom.lcm(q.denom());
            }
            row.iter().map(|q| q.numer() * (&denom / q.denom())).collect()
        })
        .collect();
    let (rows, cols) = (m.rows, m.cols);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Reduced row echelon form of the given rows; returns the nonzero rows
/// (pivot entries equal to one) and their pivot columns.
pub fn rref<F: Field>(rows: &[Vec<F>], cols: usize) -> (Vec<Vec<F>>, Vec<usize>) {
    let mut a: Vec<Vec<F>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = F::one().div(&a[r][c]);
        for x in a[r].iter_mut() {
            *x = x.mul(&inv);
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

/// Basis of `{x : row · x = 0 for every row}`.
pub fn kernel<F: Field>(rows: &[Vec<F>], cols: usize) -> Vec<Vec<F>> {
    let (red, pivots) = rref(rows, cols);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![F::zero(); cols];
        v[free] = F::one();
        for (row, &p) in red.iter().zip(&pivots) {
            v[p] = row[free].neg();
        }
        basis.push(v);
    }
    basis
}

/// A linear subspace, stored by a canonical basis: the reduced row echelon
/// basis with each row rescaled by [`canonicalize_direction`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubspaceBasis<F: Field> {
    pub ambient_dim: usize,
    pub basis: Vec<Vec<F>>,
}

impl<F: Field> SubspaceBasis<F> {
    pub fn span(ambient_dim: usize, vectors: &[Vec<F>]) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient_dim) {
            return Err(Error::Validation(format!(
                "vector of length {} in ambient dimension {}",
                v.len(),
                ambient_dim
            )));
        }
        let (mut rows, _) = rref(vectors, ambient_dim);
        for r in rows.iter_mut() {
            canonicalize_direction(r);
        }
        Ok(SubspaceBasis { ambient_dim, basis: rows })
    }

    pub fn full(ambient_dim: usize) -> Self {
        let m = Matrix::<F>::identity(ambient_dim);
        SubspaceBasis { ambient_dim, basis: m.to_rows() }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        SubspaceBasis { ambient_dim, basis: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[F]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        rref(&rows, self.ambient_dim).1.len() == self.dim()
    }

    pub fn contains_subspace(&self, other: &SubspaceBasis<F>) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Coordinates of `v` in the canonical basis, or `None` if `v` is outside.
    pub fn coordinates(&self, v: &[F]) -> Option<Vec<F>> {
        let (red, pivots) = rref(&self.basis, self.ambient_dim);
        let coeffs: Vec<F> = pivots.iter().map(|&p| v[p].clone()).collect();
        let mut recon = vec![F::zero(); self.ambient_dim];
        for (c, row) in coeffs.iter().zip(&red) {
            for (x, y) in recon.iter_mut().zip(row) {
                *x = x.add(&c.mul(y));
            }
        }
        if recon.as_slice() != v {
            return None;
        }
        let mut out = Vec::with_capacity(self.dim());
        for (red_row, canon_row) in red.iter().zip(&self.basis) {
            let p = red_row.iter().position(|x| !x.is_zero()).unwrap();
            out.push(canon_row[p].clone());
        }
        Some(coeffs.iter().zip(&out).map(|(c, s)| c.div(s)).collect())
    }

    /// Orthogonal projection of `v` onto this subspace.
    pub fn project(&self, v: &[F]) -> Vec<F> {
        let k = self.dim();
        if k == 0 {
            return vec![F::zero(); self.ambient_dim];
        }
        let mut gram: Vec<Vec<F>> = (0..k)
            .map(|i| {
                let mut row: Vec<F> = (0..k).map(|j| dot(&self.basis[i], &self.basis[j])).collect();
                row.push(dot(&self.basis[i], v));
                row
            })
            .collect();
        gram = rref(&gram, k + 1).0;
        let mut out = vec![F::zero(); self.ambient_dim];
        for (i, row) in gram.iter().enumerate() {
            let c = &row[k];
            for (x, y) in out.iter_mut().zip(&self.basis[i]) {
                *x = x.add(&c.mul(y));
            }
        }
        out
    }
}

pub fn intersect<F: Field>(ambient_dim: usize, subspaces: &[SubspaceBasis<F>]) -> Result<SubspaceBasis<F>> {
    let mut constraints = Vec::new();
    for s in subspaces {
        if s.ambient_dim != ambient_dim {
            return Err(Error::Validation(format!(
                "subspace of ambient dimension {} intersected in dimension {}",
                s.ambient_dim, ambient_dim
            )));
        }
        constraints.extend(orthogonal_complement(s).basis);
    }
    SubspaceBasis::span(ambient_dim, &kernel(&constraints, ambient_dim))
}

pub fn orthogonal_complement<F: Field>(s: &SubspaceBasis<F>) -> SubspaceBasis<F> {
    let k = kernel(&s.basis, s.ambient_dim);
    SubspaceBasis::span(s.ambient_dim, &k).expect("kernel vectors have ambient length")
}

/// Invariant factors of an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
}

/// Smith normal form by repeated minimal-entry pivoting.
pub fn smith_normal_form(m: &[Vec<BigInt>]) -> SmithForm {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut diagonal = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j].is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..cols {
                    let v = &a[t][j] * &q;
                    a[i][j] -= v;
                }
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    let v = &row[t] * &q;
                    row[j] -= v;
                }
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                let mut best = (t, t);
                for i in t..rows {
                    if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t..cols {
                    if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                a.swap(t, best.0);
                for row in a.iter_mut() {
                    row.swap(t, best.1);
                }
                continue;
            }
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !(&a[i][j] % &a[t][t]).is_zero());
            match offender {
                Some((i, _)) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diagonal.push(a[t][t].abs());
        t += 1;
    }
    diagonal.sort();
    SmithForm { rank: diagonal.len(), diagonal }
}

/// Compares two rationals (helper for deterministic sorting of points).
pub fn cmp_scalar(a: &Scalar, b: &Scalar) -> Ordering {
    match Field::sign(&Field::sub(a, b)) {
        Sign::Minus => Ordering::Less,
        Sign::Zero => Ordering::Equal,
        Sign::Plus => Ordering::Greater,
    }
}
