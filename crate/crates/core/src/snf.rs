//! Smith normal form over Euclidean domains and the unimodular-row solver
//! for the coefficient ring itself (integers, or one-variable polynomials
//! over a field) — the base case once every variable has been eliminated.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ring::{Coeff, RingDesc};

/// The little slice of Euclidean-domain structure the elimination needs.
/// Elements carry their own context, so constructors are "like" methods.
pub trait EuclideanDomain: Clone + PartialEq + std::fmt::Debug + std::fmt::Display {
    type Norm: Ord + std::fmt::Debug;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// self = q*d + r with r = 0 or norm(r) < norm(d); d nonzero.
    fn divmod(&self, d: &Self) -> (Self, Self);
    fn norm(&self) -> Self::Norm;
    fn is_unit(&self) -> bool;
    fn inv_unit(&self) -> Self;
    /// Unit u such that u*self is the canonical associate (nonnegative
    /// integer, monic polynomial). For zero, returns one.
    fn normalizing_unit(&self) -> Self;
}

impl EuclideanDomain for BigInt {
    type Norm = BigUint;

    fn zero_like(&self) -> Self {
        BigInt::zero()
    }

    fn one_like(&self) -> Self {
        BigInt::one()
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

    fn neg(&self) -> Self {
        -self
    }

    fn divmod(&self, d: &Self) -> (Self, Self) {
        let q = self / d;
        let r = self - &q * d;
        (q, r)
    }

    fn norm(&self) -> BigUint {
        self.magnitude().clone()
    }

    fn is_unit(&self) -> bool {
        self.magnitude().is_one()
    }

    fn inv_unit(&self) -> Self {
        self.clone()
    }

    fn normalizing_unit(&self) -> Self {
        if self.is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        }
    }
}

/// One-variable polynomial over a field, wrapped as a Euclidean domain
/// with degree as the size function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly(Poly);

impl UniPoly {
    pub fn new(p: Poly) -> Result<Self> {
        let ring = p.ring();
        if ring.nvars() != 1 || !ring.is_field() {
            return Err(Error::InvalidRing(format!(
                "Euclidean polynomial arithmetic needs one variable over a field, got {ring}"
            )));
        }
        Ok(UniPoly(p))
    }

    pub fn poly(&self) -> &Poly {
        &self.0
    }

    pub fn into_poly(self) -> Poly {
        self.0
    }

    fn leading_coeff(&self) -> Coeff {
        self.0
            .coeff_of_power(0, self.0.degree_in(0))
            .as_constant()
            .expect("slice of a univariate polynomial is constant")
    }
}

impl std::fmt::Display for UniPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0.to_canonical_string())
    }
}

impl EuclideanDomain for UniPoly {
    type Norm = u32;

    fn zero_like(&self) -> Self {
        UniPoly(Poly::zero(self.0.ring()))
    }

    fn one_like(&self) -> Self {
        UniPoly(Poly::one(self.0.ring()))
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn add(&self, other: &Self) -> Self {
        UniPoly(&self.0 + &other.0)
    }

    fn sub(&self, other: &Self) -> Self {
        UniPoly(&self.0 - &other.0)
    }

    fn mul(&self, other: &Self) -> Self {
        UniPoly(&self.0 * &other.0)
    }

    fn neg(&self) -> Self {
        UniPoly(self.0.neg())
    }

    fn divmod(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let ck = self.0.ring().coeff().clone();
        let lc = d.leading_coeff();
        let lc_inv = ck.invert(&lc).expect("field leading coefficient");
        let monic = d.0.scale(&lc_inv);
        let (q, r) = self
            .0
            .divmod_by_monic(&monic, 0)
            .expect("divisor was made monic");
        (UniPoly(q.scale(&lc_inv)), UniPoly(r))
    }

    fn norm(&self) -> u32 {
        self.0.degree_in(0)
    }

    fn is_unit(&self) -> bool {
        !self.0.is_zero() && self.0.is_constant()
    }

    fn inv_unit(&self) -> Self {
        let c = self.0.as_constant().expect("unit is a nonzero constant");
        let ck = self.0.ring().coeff().clone();
        UniPoly(Poly::constant(self.0.ring(), ck.invert(&c).expect("unit coefficient")))
    }

    fn normalizing_unit(&self) -> Self {
        if self.0.is_zero() {
            return self.one_like();
        }
        let ck = self.0.ring().coeff().clone();
        let lc = self.leading_coeff();
        UniPoly(Poly::constant(self.0.ring(), ck.invert(&lc).expect("field leading coefficient")))
    }
}

/// Dense matrix over a Euclidean domain, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DMat<T> {
    nrows: usize,
    ncols: usize,
    entries: Vec<T>,
}

impl<T: EuclideanDomain> DMat<T> {
    pub fn new(nrows: usize, ncols: usize, entries: Vec<T>) -> Self {
        assert_eq!(entries.len(), nrows * ncols);
        assert!(!entries.is_empty(), "matrices here are nonempty");
        DMat { nrows, ncols, entries }
    }

    pub fn identity(n: usize, like: &T) -> Self {
        let mut entries = vec![like.zero_like(); n * n];
        for i in 0..n {
            entries[i * n + i] = like.one_like();
        }
        DMat { nrows: n, ncols: n, entries }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.ncols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.entries[i * self.ncols + j]
    }

    pub fn mul(&self, other: &DMat<T>) -> DMat<T> {
        assert_eq!(self.ncols, other.nrows);
        let like = &self.entries[0];
        let mut out = DMat::new(
            self.nrows,
            other.ncols,
            vec![like.zero_like(); self.nrows * other.ncols],
        );
        for i in 0..self.nrows {
            for j in 0..other.ncols {
                let mut acc = like.zero_like();
                for k in 0..self.ncols {
                    acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
                }
                *out.get_mut(i, j) = acc;
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.ncols {
            self.entries.swap(a * self.ncols + j, b * self.ncols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.nrows {
            self.entries.swap(i * self.ncols + a, i * self.ncols + b);
        }
    }

    /// row_i += c * row_k
    fn row_add_mul(&mut self, i: usize, k: usize, c: &T) {
        for j in 0..self.ncols {
            let add = self.get(k, j).mul(c);
            *self.get_mut(i, j) = self.get(i, j).add(&add);
        }
    }

    /// col_j += c * col_k
    fn col_add_mul(&mut self, j: usize, k: usize, c: &T) {
        for i in 0..self.nrows {
            let add = self.get(i, k).mul(c);
            *self.get_mut(i, j) = self.get(i, j).add(&add);
        }
    }

    fn scale_row(&mut self, i: usize, c: &T) {
        for j in 0..self.ncols {
            *self.get_mut(i, j) = self.get(i, j).mul(c);
        }
    }

    pub fn scale_col(&mut self, j: usize, c: &T) {
        for i in 0..self.nrows {
            *self.get_mut(i, j) = self.get(i, j).mul(c);
        }
    }

    /// Determinant by cofactor expansion; intended for the small matrices
    /// that arise in invariants and tests.
    pub fn det(&self) -> T {
        assert_eq!(self.nrows, self.ncols);
        let like = &self.entries[0];
        match self.nrows {
            1 => self.get(0, 0).clone(),
            _ => {
                let mut acc = like.zero_like();
                for j in 0..self.ncols {
                    let a = self.get(0, j);
                    if a.is_zero() {
                        continue;
                    }
                    let minor = self.minor(0, j).det();
                    let term = a.mul(&minor);
                    acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
                }
                acc
            }
        }
    }

    fn minor(&self, row: usize, col: usize) -> DMat<T> {
        let mut entries = Vec::with_capacity((self.nrows - 1) * (self.ncols - 1));
        for i in 0..self.nrows {
            if i == row {
                continue;
            }
            for j in 0..self.ncols {
                if j == col {
                    continue;
                }
                entries.push(self.get(i, j).clone());
            }
        }
        DMat::new(self.nrows - 1, self.ncols - 1, entries)
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }
}

/// Greatest common divisor in canonical (nonnegative / monic) form.
pub fn euclid_gcd<T: EuclideanDomain>(a: &T, b: &T) -> T {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let (_, r) = x.divmod(&y);
        x = y;
        y = r;
    }
    let u = x.normalizing_unit();
    x.mul(&u)
}

/// Extended gcd: (g, s, t) with g = s*a + t*b, g canonical.
pub fn ext_euclid<T: EuclideanDomain>(a: &T, b: &T) -> (T, T, T) {
    let zero = a.zero_like();
    let one = a.one_like();
    if a.is_zero() && b.is_zero() {
        return (zero.clone(), zero.clone(), zero);
    }
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (one.clone(), zero.clone());
    let (mut old_t, mut t) = (zero, one);
    while !r.is_zero() {
        let (q, rem) = old_r.divmod(&r);
        old_r = std::mem::replace(&mut r, rem);
        let tmp = old_s.sub(&q.mul(&s));
        old_s = std::mem::replace(&mut s, tmp);
        let tmp = old_t.sub(&q.mul(&t));
        old_t = std::mem::replace(&mut t, tmp);
    }
    let u = old_r.normalizing_unit();
    (old_r.mul(&u), old_s.mul(&u), old_t.mul(&u))
}

#[derive(Debug, Clone)]
pub struct SnfResult<T> {
    pub u: DMat<T>,
    pub d: DMat<T>,
    pub w: DMat<T>,
}

/// U*A*W = D with D diagonal, d_i | d_{i+1}, diagonal entries canonical,
/// det U and det W units. Pivoting picks the nonzero entry of minimal
/// Euclidean size, ties broken by smallest (row, col).
pub fn smith_normal_form<T: EuclideanDomain>(a: &DMat<T>) -> SnfResult<T> {
    let like = &a.entries()[0];
    let (m, n) = (a.nrows(), a.ncols());
    let mut d = a.clone();
    let mut u = DMat::identity(m, like);
    let mut w = DMat::identity(n, like);
    for t in 0..m.min(n) {
        loop {
            // Pivot selection over the trailing block.
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if d.get(i, j).is_zero() {
                        continue;
                    }
                    match pivot {
                        None => pivot = Some((i, j)),
                        Some((pi, pj)) => {
                            if d.get(i, j).norm() < d.get(pi, pj).norm() {
                                pivot = Some((i, j));
                            }
                        }
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            w.swap_cols(t, pj);

            // Division steps toward clearing row t and column t. A nonzero
            // remainder leaves a strictly smaller entry for the next pivot
            // pass, so this loop terminates.
            let mut dirty = false;
            for i in t + 1..m {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let (q, r) = d.get(i, t).divmod(d.get(t, t));
                if !q.is_zero() {
                    let nq = q.neg();
                    d.row_add_mul(i, t, &nq);
                    u.row_add_mul(i, t, &nq);
                }
                if !r.is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let (q, r) = d.get(t, j).divmod(d.get(t, t));
                if !q.is_zero() {
                    let nq = q.neg();
                    d.col_add_mul(j, t, &nq);
                    w.col_add_mul(j, t, &nq);
                }
                if !r.is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }

            // Pivot must divide every entry of the trailing block; merging
            // an offending row makes the next pass shrink the pivot.
            let piv = d.get(t, t).clone();
            let mut fixed = false;
            'search: for i in t + 1..m {
                for j in t + 1..n {
                    if d.get(i, j).is_zero() {
                        continue;
                    }
                    let (_, r) = d.get(i, j).divmod(&piv);
                    if !r.is_zero() {
                        let one = like.one_like();
                        d.row_add_mul(t, i, &one);
                        u.row_add_mul(t, i, &one);
                        fixed = true;
                        break 'search;
                    }
                }
            }
            if !fixed {
                break;
            }
        }
    }
    for t in 0..m.min(n) {
        if d.get(t, t).is_zero() {
            continue;
        }
        let nu = d.get(t, t).normalizing_unit();
        if nu != like.one_like() {
            d.scale_row(t, &nu);
            u.scale_row(t, &nu);
        }
    }
    SnfResult { u, d, w }
}

/// V with row*V = [1, 0, ..., 0] and det V a unit; the row must generate
/// the unit ideal. Length-2 rows use the extended-gcd completion directly;
/// longer rows go through the Smith normal form.
pub fn solve_row_over_pid<T: EuclideanDomain>(row: &[T]) -> Result<DMat<T>> {
    assert!(!row.is_empty(), "empty row");
    let like = &row[0];
    let n = row.len();
    if n == 1 {
        if !row[0].is_unit() {
            return Err(Error::NotUnimodular { minors_basis: vec![row[0].to_string()] });
        }
        return Ok(DMat::new(1, 1, vec![row[0].inv_unit()]));
    }
    if n == 2 {
        let (g, s, t) = ext_euclid(&row[0], &row[1]);
        if !g.is_unit() {
            return Err(Error::NotUnimodular { minors_basis: vec![g.to_string()] });
        }
        debug_assert!(g == like.one_like(), "canonical unit gcd is one");
        let v = DMat::new(2, 2, vec![s, row[1].neg(), t, row[0].clone()]);
        return Ok(v);
    }
    let a = DMat::new(1, n, row.to_vec());
    let snf = smith_normal_form(&a);
    let g = snf.d.get(0, 0).clone();
    if !g.is_unit() {
        return Err(Error::NotUnimodular { minors_basis: vec![g.to_string()] });
    }
    // row * W = U^{-1} * D = [u0^{-1} g, 0, ...]; rescale the first column.
    let u0 = snf.u.get(0, 0);
    let factor = g.inv_unit().mul(u0);
    let mut v = snf.w.clone();
    v.scale_col(0, &factor);
    #[cfg(debug_assertions)]
    {
        for j in 0..n {
            let mut acc = like.zero_like();
            for (k, r) in row.iter().enumerate() {
                acc = acc.add(&r.mul(v.get(k, j)));
            }
            let expect = if j == 0 { like.one_like() } else { like.zero_like() };
            assert!(acc == expect, "row solve failed contract at column {j}");
        }
    }
    Ok(v)
}

/// Bridge: interpret a constant polynomial row over Z as integers.
pub fn int_row(row: &[Poly]) -> Result<Vec<BigInt>> {
    row.iter()
        .map(|p| match p.as_constant() {
            Some(Coeff::Int(n)) => Ok(n),
            _ => Err(Error::InvalidRing(
                "expected constant integer entries".into(),
            )),
        })
        .collect()
}

/// Bridge: interpret a row over a one-variable field ring as Euclidean
/// polynomials.
pub fn unipoly_row(row: &[Poly]) -> Result<Vec<UniPoly>> {
    row.iter().map(|p| UniPoly::new(p.clone())).collect()
}

/// Bridge back: integer matrix as constant polynomials over the given ring.
pub fn int_mat_to_poly(m: &DMat<BigInt>, ring: &RingDesc) -> crate::matrix::PolyMatrix {
    let entries = m
        .entries()
        .iter()
        .map(|n| Poly::constant(ring, ring.coeff().from_bigint(n.clone())))
        .collect();
    crate::matrix::PolyMatrix::new(ring, m.nrows(), m.ncols(), entries)
}

/// Bridge back: univariate matrix as polynomials (same ring).
pub fn unipoly_mat_to_poly(m: &DMat<UniPoly>) -> crate::matrix::PolyMatrix {
    let ring = m.entries()[0].poly().ring().clone();
    let entries = m.entries().iter().map(|p| p.poly().clone()).collect();
    crate::matrix::PolyMatrix::new(&ring, m.nrows(), m.ncols(), entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::CoeffKind;
    use proptest::prelude::*;

    fn zmat(rows: &[&[i64]]) -> DMat<BigInt> {
        let nrows = rows.len();
        let ncols = rows[0].len();
        let entries = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| BigInt::from(x)))
            .collect();
        DMat::new(nrows, ncols, entries)
    }

    fn check_snf<T: EuclideanDomain>(a: &DMat<T>, snf: &SnfResult<T>) {
        let like = &a.entries()[0];
        // U*A*W = D exactly.
        let prod = snf.u.mul(a).mul(&snf.w);
        assert!(prod == snf.d, "UAW differs from D");
        // D diagonal with a divisibility chain.
        for i in 0..snf.d.nrows() {
            for j in 0..snf.d.ncols() {
                if i != j {
                    assert!(snf.d.get(i, j).is_zero(), "off-diagonal entry in D");
                }
            }
        }
        let k = snf.d.nrows().min(snf.d.ncols());
        for t in 0..k.saturating_sub(1) {
            let a_t = snf.d.get(t, t);
            let b_t = snf.d.get(t + 1, t + 1);
            if a_t.is_zero() {
                assert!(b_t.is_zero(), "zero diagonal entry followed by nonzero");
            } else {
                let (_, r) = b_t.divmod(a_t);
                assert!(r.is_zero(), "divisibility chain broken");
            }
        }
        // Transform determinants are units.
        assert!(snf.u.det().is_unit(), "det U not a unit");
        assert!(snf.w.det().is_unit(), "det W not a unit");
        let _ = like;
    }

    /// Determinantal-divisor oracle: product of the first k diagonal
    /// entries equals the gcd of all k x k minors of the original matrix.
    fn check_divisor_oracle<T: EuclideanDomain>(a: &DMat<T>, snf: &SnfResult<T>) {
        use itertools::Itertools;
        let like = &a.entries()[0];
        let kmax = a.nrows().min(a.ncols());
        let mut running = like.one_like();
        for k in 1..=kmax {
            let mut g = like.zero_like();
            for rows in (0..a.nrows()).combinations(k) {
                for cols in (0..a.ncols()).combinations(k) {
                    let mut entries = Vec::with_capacity(k * k);
                    for &i in &rows {
                        for &j in &cols {
                            entries.push(a.get(i, j).clone());
                        }
                    }
                    let d = DMat::new(k, k, entries).det();
                    g = euclid_gcd(&g, &d);
                }
            }
            running = running.mul(snf.d.get(k - 1, k - 1));
            let canon = {
                let u = running.normalizing_unit();
                running.mul(&u)
            };
            assert!(canon == g, "determinantal divisor mismatch at size {k}");
        }
    }

    #[test]
    fn snf_of_diag_4_6() {
        let a = zmat(&[&[4, 0], &[0, 6]]);
        let snf = smith_normal_form(&a);
        check_snf(&a, &snf);
        assert_eq!(*snf.d.get(0, 0), BigInt::from(2));
        assert_eq!(*snf.d.get(1, 1), BigInt::from(12));
    }

    #[test]
    fn snf_of_identity_is_identity() {
        let a = zmat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let snf = smith_normal_form(&a);
        assert!(snf.u == DMat::identity(3, &BigInt::one()));
        assert!(snf.w == DMat::identity(3, &BigInt::one()));
        assert!(snf.d == a);
    }

    #[test]
    fn snf_of_coprime_row() {
        let a = zmat(&[&[2, 3]]);
        let snf = smith_normal_form(&a);
        check_snf(&a, &snf);
        assert_eq!(*snf.d.get(0, 0), BigInt::one());
        assert!(EuclideanDomain::is_zero(snf.d.get(0, 1)));
    }

    #[test]
    fn solve_row_fixed_integer_examples() {
        let row: Vec<BigInt> = vec![2.into(), 3.into()];
        let v = solve_row_over_pid(&row).unwrap();
        let expect = zmat(&[&[-1, -3], &[1, 2]]);
        assert!(v == expect, "got {v:?}");

        let e1: Vec<BigInt> = vec![1.into(), 0.into(), 0.into()];
        let v = solve_row_over_pid(&e1).unwrap();
        assert!(v == DMat::identity(3, &BigInt::one()));

        for bad in [vec![BigInt::zero(), BigInt::zero()], vec![4.into(), 6.into()]] {
            assert!(matches!(
                solve_row_over_pid(&bad),
                Err(Error::NotUnimodular { .. })
            ));
        }
    }

    #[test]
    fn solve_row_longer_integer_rows() {
        for row in [vec![6i64, 10, 15], vec![4, 7, 9, 11], vec![0, 0, 1, 0, 0]] {
            let row: Vec<BigInt> = row.into_iter().map(BigInt::from).collect();
            let v = solve_row_over_pid(&row).unwrap();
            assert!(v.det().is_unit());
            for j in 0..row.len() {
                let mut acc = BigInt::zero();
                for (k, r) in row.iter().enumerate() {
                    acc += r * v.get(k, j);
                }
                assert_eq!(acc, if j == 0 { BigInt::one() } else { BigInt::zero() });
            }
        }
    }

    fn upoly(ring: &RingDesc, s: &str) -> UniPoly {
        UniPoly::new(Poly::parse(ring, s).unwrap()).unwrap()
    }

    #[test]
    fn snf_over_univariate_rationals() {
        let r = RingDesc::new(CoeffKind::Q, vec!["t".into()]).unwrap();
        // Divisibility already holds: untouched up to normalization.
        let a = DMat::new(
            2,
            2,
            vec![upoly(&r, "t"), upoly(&r, "0"), upoly(&r, "0"), upoly(&r, "t^2 + t")],
        );
        let snf = smith_normal_form(&a);
        check_snf(&a, &snf);
        assert_eq!(snf.d.get(0, 0).poly(), upoly(&r, "t").poly());
        assert_eq!(snf.d.get(1, 1).poly(), upoly(&r, "t^2 + t").poly());

        // Coprime diagonal needs the merge step: d1 = 1.
        let b = DMat::new(
            2,
            2,
            vec![upoly(&r, "t"), upoly(&r, "0"), upoly(&r, "0"), upoly(&r, "t + 1")],
        );
        let snf = smith_normal_form(&b);
        check_snf(&b, &snf);
        assert!(snf.d.get(0, 0).is_unit());
        assert_eq!(snf.d.get(1, 1).poly(), upoly(&r, "t^2 + t").poly());
        check_divisor_oracle(&b, &snf);
    }

    #[test]
    fn solve_row_univariate() {
        let r = RingDesc::new(CoeffKind::Q, vec!["t".into()]).unwrap();
        let row = vec![upoly(&r, "t"), upoly(&r, "t + 1")];
        let v = solve_row_over_pid(&row).unwrap();
        assert!(v.det().is_unit());
        let mut first = row[0].zero_like();
        let mut second = row[0].zero_like();
        for (k, f) in row.iter().enumerate() {
            first = first.add(&f.mul(v.get(k, 0)));
            second = second.add(&f.mul(v.get(k, 1)));
        }
        assert!(first == row[0].one_like());
        assert!(second.is_zero());

        let rp = RingDesc::new(CoeffKind::Zp(5), vec!["t".into()]).unwrap();
        let row = vec![upoly(&rp, "t^2 + 1"), upoly(&rp, "t")];
        let v = solve_row_over_pid(&row).unwrap();
        assert!(v.det().is_unit());
        let mut first = row[0].zero_like();
        for (k, f) in row.iter().enumerate() {
            first = first.add(&f.mul(v.get(k, 0)));
        }
        assert!(first == row[0].one_like());

        let not_coprime = vec![upoly(&r, "t"), upoly(&r, "t^2")];
        assert!(matches!(
            solve_row_over_pid(&not_coprime),
            Err(Error::NotUnimodular { .. })
        ));
    }

    #[test]
    fn snf_random_integer_sweep_against_divisor_oracle() {
        // Deterministic LCG so the sweep is reproducible.
        let mut state = 0x2545f4914f6cdd1du64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) as i64
        };
        for trial in 0..60 {
            let m = (next().unsigned_abs() as usize % 4) + 1;
            let n = (next().unsigned_abs() as usize % 4) + 1;
            let entries: Vec<BigInt> = (0..m * n)
                .map(|_| BigInt::from((next() % 41) - 20))
                .collect();
            let a = DMat::new(m, n, entries);
            let snf = smith_normal_form(&a);
            check_snf(&a, &snf);
            check_divisor_oracle(&a, &snf);
            let _ = trial;
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn solve_row_contract_or_witnessed_failure(
            row in proptest::collection::vec(-30i64..=30, 1..=5)
        ) {
            let row: Vec<BigInt> = row.into_iter().map(BigInt::from).collect();
            let g = row.iter().fold(BigInt::zero(), |acc, x| euclid_gcd(&acc, x));
            match solve_row_over_pid(&row) {
                Ok(v) => {
                    prop_assert!(g.is_one());
                    prop_assert!(v.det().is_unit());
                    for j in 0..row.len() {
                        let mut acc = BigInt::zero();
                        for (k, r) in row.iter().enumerate() {
                            acc += r * v.get(k, j);
                        }
                        prop_assert_eq!(acc, if j == 0 { BigInt::one() } else { BigInt::zero() });
                    }
                }
                Err(Error::NotUnimodular { .. }) => prop_assert!(!g.is_one()),
                Err(e) => return Err(TestCaseError::fail(format!("unexpected error {e:?}"))),
            }
        }
    }
}
