//! Sparse multivariate polynomials over the supported coefficient rings.
//!
//! Terms map exponent vectors to nonzero coefficients; the canonical term
//! order is graded reverse lexicographic with vars[0] > vars[1] > ..., and a
//! lexicographic order is selectable where an elimination order is wanted.
//! Exponents are machine integers; overflow is a hard error (panic), never
//! silent wraparound.

mod text;

pub use text::parse_poly;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ring::{Coeff, CoeffKind, RingDesc};

/// Exponent vector; index i is the power of the ring's i-th variable.
/// `Ord` is the canonical graded reverse lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        let mut e = vec![0; nvars];
        e[idx] = 1;
        Monomial(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().fold(0u32, |acc, e| acc.checked_add(*e).expect("exponent overflow"))
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|e| *e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Componentwise quotient, `None` unless `self` divides `other` ... i.e.
    /// returns `other / self`.
    pub fn div_into(&self, other: &Monomial) -> Option<Monomial> {
        if self.divides(other) {
            Some(Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect()))
        } else {
            None
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd_is_one(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

fn cmp_grevlex(a: &Monomial, b: &Monomial) -> Ordering {
    match a.total_degree().cmp(&b.total_degree()) {
        Ordering::Equal => {}
        o => return o,
    }
    // Equal degree: larger monomial has the smaller exponent in the
    // rightmost position where they differ.
    for i in (0..a.0.len()).rev() {
        match a.0[i].cmp(&b.0[i]) {
            Ordering::Equal => {}
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}

fn cmp_lex(a: &Monomial, b: &Monomial) -> Ordering {
    for i in 0..a.0.len() {
        match a.0[i].cmp(&b.0[i]) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    Ordering::Equal
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_grevlex(self, other)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Selectable term orders for basis computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonomialOrder {
    Grevlex,
    Lex,
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Grevlex => cmp_grevlex(a, b),
            MonomialOrder::Lex => cmp_lex(a, b),
        }
    }
}

/// A polynomial over a [`RingDesc`]. Stored terms never carry a zero
/// coefficient and every exponent vector has one slot per ring variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    ring: RingDesc,
    terms: BTreeMap<Monomial, Coeff>,
}

impl Poly {
    pub fn zero(ring: &RingDesc) -> Self {
        Poly { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ring: &RingDesc) -> Self {
        Poly::constant(ring, ring.coeff().one())
    }

    pub fn constant(ring: &RingDesc, c: Coeff) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(ring.nvars()), c);
        }
        Poly { ring: ring.clone(), terms }
    }

    pub fn from_i64(ring: &RingDesc, n: i64) -> Self {
        Poly::constant(ring, ring.coeff().from_i64(n))
    }

    pub fn var(ring: &RingDesc, idx: usize) -> Self {
        assert!(idx < ring.nvars(), "variable index out of range");
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(ring.nvars(), idx), ring.coeff().one());
        Poly { ring: ring.clone(), terms }
    }

    pub fn var_named(ring: &RingDesc, name: &str) -> Result<Self> {
        let idx = ring
            .var_index(name)
            .ok_or_else(|| Error::InvalidRing(format!("no variable {name:?} in ring")))?;
        Ok(Poly::var(ring, idx))
    }

    pub fn term(ring: &RingDesc, m: Monomial, c: Coeff) -> Self {
        assert_eq!(m.0.len(), ring.nvars(), "exponent width mismatch");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { ring: ring.clone(), terms }
    }

    pub fn from_terms(ring: &RingDesc, it: impl IntoIterator<Item = (Monomial, Coeff)>) -> Self {
        let mut p = Poly::zero(ring);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &RingDesc {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    /// The constant value when the polynomial has no variable part.
    pub fn as_constant(&self) -> Option<Coeff> {
        if self.terms.is_empty() {
            return Some(self.ring.coeff().zero());
        }
        if self.is_constant() {
            return Some(self.terms.values().next().unwrap().clone());
        }
        None
    }

    /// A unit of the polynomial ring: a constant that is a unit of R.
    pub fn is_unit(&self) -> bool {
        self.as_constant().map(|c| self.ring.coeff().is_unit(&c)).unwrap_or(false)
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending grevlex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    /// Terms in descending grevlex order (canonical display order).
    pub fn terms_desc(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter().rev()
    }

    pub fn coeff_of(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(|| self.ring.coeff().zero())
    }

    fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(m.0.len(), self.ring.nvars());
        let ck = self.ring.coeff().clone();
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = ck.add(e.get(), &c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn same_ring(&self, other: &Poly) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!("{} vs {}", self.ring, other.ring)))
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.same_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.same_ring(other)?;
        let mut out = self.clone();
        let ck = self.ring.coeff().clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), ck.neg(c));
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.same_ring(other)?;
        let ck = self.ring.coeff().clone();
        let mut out = Poly::zero(&self.ring);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ck.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Poly {
        let ck = self.ring.coeff().clone();
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), ck.neg(c))).collect(),
        }
    }

    pub fn scale(&self, c: &Coeff) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        let ck = self.ring.coeff().clone();
        let mut out = Poly::zero(&self.ring);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), ck.mul(a, c));
        }
        out
    }

    /// Multiply by the single term c * m.
    pub fn mul_term(&self, m: &Monomial, c: &Coeff) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        let ck = self.ring.coeff().clone();
        let mut out = Poly::zero(&self.ring);
        for (ma, ca) in &self.terms {
            out.add_term(ma.mul(m), ck.mul(ca, c));
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    pub fn contains_var(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.0[var] > 0)
    }

    /// Leading term with respect to the given order.
    pub fn leading_term(&self, order: MonomialOrder) -> Option<(&Monomial, &Coeff)> {
        match order {
            MonomialOrder::Grevlex => self.terms.iter().next_back(),
            MonomialOrder::Lex => self.terms.iter().max_by(|a, b| cmp_lex(a.0, b.0)),
        }
    }

    /// Coefficient of v^k viewed as a polynomial in the remaining variables
    /// (returned over the same ring, with zero exponent on v).
    pub fn coeff_of_power(&self, var: usize, k: u32) -> Poly {
        let mut out = Poly::zero(&self.ring);
        for (m, c) in &self.terms {
            if m.0[var] == k {
                let mut e = m.clone();
                e.0[var] = 0;
                out.add_term(e, c.clone());
            }
        }
        out
    }

    /// Leading coefficient with respect to one variable, as a polynomial in
    /// the others.
    pub fn leading_coeff_in(&self, var: usize) -> Poly {
        self.coeff_of_power(var, self.degree_in(var))
    }

    /// True when the leading coefficient with respect to `var` is exactly 1.
    pub fn is_monic_in(&self, var: usize) -> bool {
        !self.is_zero() && self.leading_coeff_in(var).is_one()
    }

    /// Substitute 0 for one variable.
    pub fn eval_at_zero(&self, var: usize) -> Poly {
        let mut out = Poly::zero(&self.ring);
        for (m, c) in &self.terms {
            if m.0[var] == 0 {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    /// Substitute a polynomial for one variable.
    pub fn eval_var(&self, var: usize, value: &Poly) -> Poly {
        assert_eq!(&self.ring, value.ring());
        let mut powers: BTreeMap<u32, Poly> = BTreeMap::new();
        powers.insert(0, Poly::one(&self.ring));
        let mut out = Poly::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if !powers.contains_key(&e) {
                let p = value.pow(e);
                powers.insert(e, p);
            }
            let mut rest = m.clone();
            rest.0[var] = 0;
            let base = Poly::term(&self.ring, rest, c.clone());
            out = &out + &(&base * &powers[&e]);
        }
        out
    }

    /// Division by a divisor monic in `var`: returns (quotient, remainder)
    /// with deg_var(remainder) < deg_var(divisor). Exact over any coefficient
    /// ring because the leading coefficient is 1.
    pub fn divmod_by_monic(&self, divisor: &Poly, var: usize) -> Result<(Poly, Poly)> {
        self.same_ring(divisor)?;
        if !divisor.is_monic_in(var) {
            return Err(Error::NotMonic(self.ring.vars()[var].clone()));
        }
        let e = divisor.degree_in(var);
        let mut q = Poly::zero(&self.ring);
        let mut r = self.clone();
        loop {
            if r.is_zero() {
                break;
            }
            let d = r.degree_in(var);
            if d < e {
                break;
            }
            let c = r.coeff_of_power(var, d);
            let shift = Poly::term(
                &self.ring,
                Monomial::var(self.ring.nvars(), var).pow_mono(d - e),
                self.ring.coeff().one(),
            );
            let qt = &c * &shift;
            q = &q + &qt;
            r = &r - &(&qt * divisor);
        }
        Ok((q, r))
    }

    /// Exact division: Some(q) with self = q * d when d divides self.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero(&self.ring));
        }
        let ck = self.ring.coeff().clone();
        let (dm, dc) = d.leading_term(MonomialOrder::Grevlex).unwrap();
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut rem = self.clone();
        let mut q = Poly::zero(&self.ring);
        while !rem.is_zero() {
            let (rm, rc) = rem.leading_term(MonomialOrder::Grevlex).unwrap();
            let em = dm.div_into(rm)?;
            let ec = ck.exact_div(rc, &dc)?;
            let t = Poly::term(&self.ring, em, ec);
            q = &q + &t;
            rem = &rem - &(&t * d);
        }
        Some(q)
    }

    /// Gcd of the integer coefficients (Z polynomials only); 0 for the zero
    /// polynomial.
    pub fn int_content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            if let Coeff::Int(n) = c {
                g = num_integer::Integer::gcd(&g, n);
            } else {
                panic!("int_content on a non-integer polynomial");
            }
        }
        g
    }

    /// Map a Z polynomial into Z/p with the same variables.
    pub fn to_mod_p(&self, p: u64) -> Result<Poly> {
        if *self.ring.coeff() != CoeffKind::Z {
            return Err(Error::RingMismatch("to_mod_p needs integer coefficients".into()));
        }
        let target = RingDesc::new(CoeffKind::Zp(p), self.ring.vars().to_vec())?;
        let ck = target.coeff().clone();
        let mut out = Poly::zero(&target);
        for (m, c) in &self.terms {
            if let Coeff::Int(n) = c {
                out.add_term(m.clone(), ck.from_bigint(n.clone()));
            }
        }
        Ok(out)
    }

    /// Reinterpret over a ring with fewer variables; every dropped variable
    /// must be absent from the support.
    pub fn restrict(&self, target: &RingDesc) -> Result<Poly> {
        if target.coeff() != self.ring.coeff() {
            return Err(Error::RingMismatch("restrict changes coefficient ring".into()));
        }
        let mut map = Vec::with_capacity(target.nvars());
        for v in target.vars() {
            let idx = self
                .ring
                .var_index(v)
                .ok_or_else(|| Error::RingMismatch(format!("target variable {v:?} missing in source")))?;
            map.push(idx);
        }
        let kept: std::collections::BTreeSet<usize> = map.iter().copied().collect();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            for (i, e) in m.0.iter().enumerate() {
                if *e > 0 && !kept.contains(&i) {
                    return Err(Error::RingMismatch(format!(
                        "variable {:?} present in polynomial being restricted",
                        self.ring.vars()[i]
                    )));
                }
            }
            let e: Vec<u32> = map.iter().map(|&i| m.0[i]).collect();
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Reinterpret over a ring with more variables (matched by name).
    pub fn extend(&self, target: &RingDesc) -> Poly {
        assert_eq!(target.coeff(), self.ring.coeff(), "extend changes coefficient ring");
        let map: Vec<usize> = self
            .ring
            .vars()
            .iter()
            .map(|v| target.var_index(v).expect("extend target misses a source variable"))
            .collect();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; target.nvars()];
            for (i, exp) in m.0.iter().enumerate() {
                e[map[i]] = *exp;
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Canonical text form; round-trips through [`parse_poly`] bit-exactly.
    pub fn to_canonical_string(&self) -> String {
        text::format_poly(self)
    }

    pub fn parse(ring: &RingDesc, s: &str) -> Result<Poly> {
        text::parse_poly(ring, s)
    }
}

impl Monomial {
    fn pow_mono(mut self, e: u32) -> Monomial {
        for v in &mut self.0 {
            *v = v.checked_mul(e).expect("exponent overflow");
        }
        self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

macro_rules! poly_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait for &Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                self.$checked(rhs).expect("ring mismatch in polynomial arithmetic")
            }
        }
    };
}
poly_binop!(Add, add, try_add);
poly_binop!(Sub, sub, try_sub);
poly_binop!(Mul, mul, try_mul);

/// An invertible change of variables: each variable maps to a polynomial,
/// with an explicit inverse. Composition with the inverse is checked to be
/// the identity in both directions at construction.
#[derive(Debug, Clone)]
pub struct Substitution {
    ring: RingDesc,
    forward: BTreeMap<usize, Poly>,
    inverse: BTreeMap<usize, Poly>,
}

impl Substitution {
    pub fn new(
        ring: &RingDesc,
        forward: BTreeMap<usize, Poly>,
        inverse: BTreeMap<usize, Poly>,
    ) -> Result<Self> {
        let s = Substitution { ring: ring.clone(), forward, inverse };
        for idx in 0..ring.nvars() {
            let x = Poly::var(ring, idx);
            let round = apply_map(&s.inverse, &s.apply(&x));
            if round != x {
                return Err(Error::Internal(format!(
                    "substitution is not invertible on {}",
                    ring.vars()[idx]
                )));
            }
            let round = apply_map(&s.forward, &s.apply_inverse(&x));
            if round != x {
                return Err(Error::Internal(format!(
                    "inverse substitution is not invertible on {}",
                    ring.vars()[idx]
                )));
            }
        }
        Ok(s)
    }

    pub fn identity(ring: &RingDesc) -> Self {
        Substitution { ring: ring.clone(), forward: BTreeMap::new(), inverse: BTreeMap::new() }
    }

    /// The transposition of two variables (an involution).
    pub fn swap(ring: &RingDesc, a: usize, b: usize) -> Self {
        let mut forward = BTreeMap::new();
        let mut inverse = BTreeMap::new();
        if a != b {
            forward.insert(a, Poly::var(ring, b));
            forward.insert(b, Poly::var(ring, a));
            inverse.insert(a, Poly::var(ring, b));
            inverse.insert(b, Poly::var(ring, a));
        }
        Substitution { ring: ring.clone(), forward, inverse }
    }

    pub fn ring(&self) -> &RingDesc {
        &self.ring
    }

    pub fn is_identity(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn apply(&self, f: &Poly) -> Poly {
        assert_eq!(*f.ring(), self.ring, "substitution applied across rings");
        apply_map(&self.forward, f)
    }

    pub fn apply_inverse(&self, f: &Poly) -> Poly {
        assert_eq!(*f.ring(), self.ring, "substitution applied across rings");
        apply_map(&self.inverse, f)
    }

    pub fn forward_images(&self) -> impl Iterator<Item = (usize, &Poly)> {
        self.forward.iter().map(|(k, v)| (*k, v))
    }

    pub fn inverse_images(&self) -> impl Iterator<Item = (usize, &Poly)> {
        self.inverse.iter().map(|(k, v)| (*k, v))
    }
}

fn apply_map(map: &BTreeMap<usize, Poly>, f: &Poly) -> Poly {
    if map.is_empty() {
        return f.clone();
    }
    let ring = f.ring().clone();
    let mut out = Poly::zero(&ring);
    let mut powers: BTreeMap<(usize, u32), Poly> = BTreeMap::new();
    for (m, c) in f.terms() {
        let mut acc = Poly::constant(&ring, c.clone());
        for (i, e) in m.0.iter().enumerate() {
            if *e == 0 {
                continue;
            }
            match map.get(&i) {
                None => {
                    acc = &acc * &Poly::term(&ring, Monomial::var(ring.nvars(), i).pow_mono(*e), ring.coeff().one());
                }
                Some(img) => {
                    let p = powers
                        .entry((i, *e))
                        .or_insert_with(|| img.pow(*e))
                        .clone();
                    acc = &acc * &p;
                }
            }
        }
        out = &out + &acc;
    }
    out
}
