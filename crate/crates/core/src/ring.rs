//! Coefficient scalars and ring descriptors.
//!
//! A [`RingDesc`] names a polynomial ring S = R[x1..xn] by its coefficient
//! kind (Q, Z, or Z/p with p prime) and its ordered variable list. Scalars
//! are [`Coeff`] values; all scalar arithmetic goes through [`CoeffKind`] so
//! the modulus is always in scope. Exact arithmetic only: integers are
//! arbitrary precision, rationals are kept reduced with positive denominator,
//! and mod-p residues are canonical representatives in [0, p).

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Coefficient ring selector. `Zp(p)` requires p prime (checked at
/// construction of a [`RingDesc`]); desk scale keeps p below 2^31.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CoeffKind {
    Q,
    Z,
    Zp(u64),
}

/// A scalar from one of the three coefficient rings.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Coeff {
    Rat(BigRational),
    Int(BigInt),
    Mod(u64),
}

impl Coeff {
    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Rat(r) => r.is_zero(),
            Coeff::Int(n) => n.is_zero(),
            Coeff::Mod(v) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coeff::Rat(r) => r.is_one(),
            Coeff::Int(n) => n.is_one(),
            Coeff::Mod(v) => *v == 1,
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Coeff::Int(n) => write!(f, "{n}"),
            Coeff::Mod(v) => write!(f, "{v}"),
        }
    }
}

/// Deterministic primality check by trial division; desk scale (p < 2^31).
pub(crate) fn is_prime_u64(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl CoeffKind {
    pub fn zero(&self) -> Coeff {
        match self {
            CoeffKind::Q => Coeff::Rat(BigRational::zero()),
            CoeffKind::Z => Coeff::Int(BigInt::zero()),
            CoeffKind::Zp(_) => Coeff::Mod(0),
        }
    }

    pub fn one(&self) -> Coeff {
        match self {
            CoeffKind::Q => Coeff::Rat(BigRational::one()),
            CoeffKind::Z => Coeff::Int(BigInt::one()),
            CoeffKind::Zp(_) => Coeff::Mod(1),
        }
    }

    pub fn from_i64(&self, n: i64) -> Coeff {
        self.from_bigint(BigInt::from(n))
    }

    /// Canonical image of an integer in this coefficient ring.
    pub fn from_bigint(&self, n: BigInt) -> Coeff {
        match self {
            CoeffKind::Q => Coeff::Rat(BigRational::from_integer(n)),
            CoeffKind::Z => Coeff::Int(n),
            CoeffKind::Zp(p) => {
                let m = BigInt::from(*p);
                let r = n.mod_floor(&m);
                Coeff::Mod(r.try_into().expect("residue fits in u64"))
            }
        }
    }

    fn check(&self, c: &Coeff) -> &Self {
        let ok = matches!(
            (self, c),
            (CoeffKind::Q, Coeff::Rat(_)) | (CoeffKind::Z, Coeff::Int(_)) | (CoeffKind::Zp(_), Coeff::Mod(_))
        );
        debug_assert!(ok, "coefficient {c:?} does not belong to {self:?}");
        self
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.check(a).check(b);
        match (a, b) {
            (Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x + y),
            (Coeff::Int(x), Coeff::Int(y)) => Coeff::Int(x + y),
            (Coeff::Mod(x), Coeff::Mod(y)) => {
                let p = self.modulus();
                Coeff::Mod(((*x as u128 + *y as u128) % p as u128) as u64)
            }
            _ => unreachable!("mismatched coefficient kinds"),
        }
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        self.check(a);
        match a {
            Coeff::Rat(x) => Coeff::Rat(-x),
            Coeff::Int(x) => Coeff::Int(-x),
            Coeff::Mod(x) => {
                let p = self.modulus();
                Coeff::Mod(if *x == 0 { 0 } else { p - x })
            }
        }
    }

    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.check(a).check(b);
        match (a, b) {
            (Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x * y),
            (Coeff::Int(x), Coeff::Int(y)) => Coeff::Int(x * y),
            (Coeff::Mod(x), Coeff::Mod(y)) => {
                let p = self.modulus();
                Coeff::Mod(((*x as u128 * *y as u128) % p as u128) as u64)
            }
            _ => unreachable!("mismatched coefficient kinds"),
        }
    }

    pub fn is_unit(&self, c: &Coeff) -> bool {
        self.check(c);
        match c {
            Coeff::Rat(r) => !r.is_zero(),
            Coeff::Int(n) => n.abs().is_one(),
            Coeff::Mod(v) => *v != 0,
        }
    }

    /// Multiplicative inverse of a unit; `NotAUnit` otherwise.
    pub fn invert(&self, c: &Coeff) -> Result<Coeff> {
        self.check(c);
        match c {
            Coeff::Rat(r) => {
                if r.is_zero() {
                    Err(Error::NotAUnit)
                } else {
                    Ok(Coeff::Rat(r.recip()))
                }
            }
            Coeff::Int(n) => {
                if n.abs().is_one() {
                    Ok(Coeff::Int(n.clone()))
                } else {
                    Err(Error::NotAUnit)
                }
            }
            Coeff::Mod(v) => {
                if *v == 0 {
                    return Err(Error::NotAUnit);
                }
                let p = self.modulus();
                let (g, s, _) = ext_gcd(&BigInt::from(*v), &BigInt::from(p));
                debug_assert!(g.is_one(), "modulus is prime, nonzero residues are units");
                let inv = s.mod_floor(&BigInt::from(p));
                Ok(Coeff::Mod(inv.try_into().expect("residue fits in u64")))
            }
        }
    }

    /// Exact quotient `a / b` when it exists in the ring (`b` nonzero).
    pub fn exact_div(&self, a: &Coeff, b: &Coeff) -> Option<Coeff> {
        self.check(a).check(b);
        if b.is_zero() {
            return None;
        }
        match (a, b) {
            (Coeff::Rat(x), Coeff::Rat(y)) => Some(Coeff::Rat(x / y)),
            (Coeff::Int(x), Coeff::Int(y)) => {
                let (q, r) = x.div_rem(y);
                if r.is_zero() {
                    Some(Coeff::Int(q))
                } else {
                    None
                }
            }
            (Coeff::Mod(_), Coeff::Mod(_)) => Some(self.mul(a, &self.invert(b).ok()?)),
            _ => unreachable!("mismatched coefficient kinds"),
        }
    }

    fn modulus(&self) -> u64 {
        match self {
            CoeffKind::Zp(p) => *p,
            _ => unreachable!("modulus requested for a characteristic-zero ring"),
        }
    }
}

/// Extended gcd over Z: returns (g, s, t) with g = gcd(a, b) >= 0 and
/// g = s*a + t*b. The iterative scheme fixes the output on ties, e.g.
/// (12, 8) -> (4, 1, -1).
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    if a.is_zero() && b.is_zero() {
        return (BigInt::zero(), BigInt::zero(), BigInt::zero());
    }
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = &old_r / &r;
        let tmp = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, tmp);
        let tmp = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, tmp);
        let tmp = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, tmp);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct RingData {
    coeff: CoeffKind,
    vars: Vec<String>,
}

/// Immutable, cheaply clonable descriptor of a polynomial ring R[x1..xn].
/// Equality is structural; descriptors are freely shared across threads.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingDesc(Arc<RingData>);

impl RingDesc {
    pub fn new(coeff: CoeffKind, vars: Vec<String>) -> Result<Self> {
        if let CoeffKind::Zp(p) = coeff {
            if p >= 1 << 31 {
                return Err(Error::InvalidRing(format!("modulus {p} too large (need p < 2^31)")));
            }
            if !is_prime_u64(p) {
                return Err(Error::InvalidRing(format!("modulus {p} is not prime")));
            }
        }
        for (i, v) in vars.iter().enumerate() {
            if v.is_empty()
                || !v.chars().next().unwrap().is_ascii_alphabetic()
                || !v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            {
                return Err(Error::InvalidRing(format!("bad variable name {v:?}")));
            }
            if vars[..i].contains(v) {
                return Err(Error::InvalidRing(format!("duplicate variable {v:?}")));
            }
        }
        Ok(RingDesc(Arc::new(RingData { coeff, vars })))
    }

    /// Internal constructor for scratch variables that user input can never
    /// name (parser identifiers must start with a letter).
    pub(crate) fn new_unchecked(coeff: CoeffKind, vars: Vec<String>) -> Self {
        RingDesc(Arc::new(RingData { coeff, vars }))
    }

    pub fn coeff(&self) -> &CoeffKind {
        &self.0.coeff
    }

    pub fn vars(&self) -> &[String] {
        &self.0.vars
    }

    pub fn nvars(&self) -> usize {
        self.0.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.0.vars.iter().position(|v| v == name)
    }

    pub fn is_field(&self) -> bool {
        matches!(self.0.coeff, CoeffKind::Q | CoeffKind::Zp(_))
    }

    /// The same coefficient ring with one variable removed.
    pub fn without_var(&self, name: &str) -> Result<RingDesc> {
        let idx = self
            .var_index(name)
            .ok_or_else(|| Error::InvalidRing(format!("no variable {name:?} in ring")))?;
        let mut vars = self.0.vars.clone();
        vars.remove(idx);
        Ok(RingDesc(Arc::new(RingData { coeff: self.0.coeff.clone(), vars })))
    }

    /// The same coefficient ring with a fresh variable appended.
    pub(crate) fn with_extra_var(&self, name: &str) -> RingDesc {
        let mut vars = self.0.vars.clone();
        vars.push(name.to_string());
        RingDesc::new_unchecked(self.0.coeff.clone(), vars)
    }
}

impl fmt::Display for RingDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.coeff() {
            CoeffKind::Q => "QQ".to_string(),
            CoeffKind::Z => "ZZ".to_string(),
            CoeffKind::Zp(p) => format!("ZZ/{p}"),
        };
        write!(f, "{base}[{}]", self.vars().join(","))
    }
}
