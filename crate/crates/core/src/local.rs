//! Maximal ideals of linear-point form and arithmetic in the localization.
//!
//! The search ladder only ever produces ideals with a linear residue
//! structure — (p, x1-a1, ..., xk-ak) over the integers, (x1-a1, ...,
//! xk-ak) over a field — so maximality is structural and membership is a
//! Groebner reduction against the stored basis.

use crate::error::{Error, Result};
use crate::groebner::{groebner, one_certificate, GroebnerBasis};
use crate::matrix::PolyMatrix;
use crate::poly::{MonomialOrder, Poly};
use crate::ring::{Coeff, CoeffKind, RingDesc};

/// Candidate-point allowance for the maximal-ideal search.
#[derive(Debug, Clone)]
pub struct SearchBudget {
    pub max_points: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_points: 200_000 }
    }
}

const SEARCH_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97,
];

/// A maximal ideal in linear-point form, stored as a reduced Groebner basis.
#[derive(Debug, Clone)]
pub struct MaxIdeal {
    ring: RingDesc,
    gb: Option<GroebnerBasis>,
}

impl MaxIdeal {
    /// Build from explicit generators, insisting on the linear-point shape:
    /// over Z exactly one positive prime constant plus one x_i - c_i per
    /// variable; over a field one x_i - a_i per variable and no constant.
    pub fn from_point_gens(ring: &RingDesc, gens: Vec<Poly>) -> Result<Self> {
        let integral = matches!(ring.coeff(), CoeffKind::Z);
        let mut prime_seen = false;
        let mut covered = vec![false; ring.nvars()];
        for g in &gens {
            if g.ring() != ring {
                return Err(Error::RingMismatch("generator over a different ring".into()));
            }
            if g.is_constant() {
                if !integral || prime_seen {
                    return Err(Error::InvalidRing(
                        "constant generator is only legal once, over the integers".into(),
                    ));
                }
                match g.as_constant() {
                    Some(Coeff::Int(n)) => {
                        let (sign, digits) = n.to_u64_digits();
                        let p = if digits.len() == 1 { digits[0] } else { 0 };
                        if sign != num_bigint::Sign::Plus || !crate::ring::is_prime_u64(p) {
                            return Err(Error::InvalidRing(format!(
                                "constant generator {n} is not a positive prime"
                            )));
                        }
                    }
                    _ => unreachable!("integer ring carries integer constants"),
                }
                prime_seen = true;
                continue;
            }
            // Must be x_i - c with unit leading coefficient one.
            let mut var = None;
            for (m, _) in g.terms() {
                if m.is_one() {
                    continue;
                }
                if m.total_degree() != 1 {
                    return Err(Error::InvalidRing(format!(
                        "generator {} is not linear",
                        g.to_canonical_string()
                    )));
                }
                let i = m.0.iter().position(|&e| e == 1).unwrap();
                if var.replace(i).is_some() {
                    return Err(Error::InvalidRing(
                        "generator mixes several variables".into(),
                    ));
                }
            }
            let Some(i) = var else {
                return Err(Error::InvalidRing("zero or constant generator".into()));
            };
            if covered[i] {
                return Err(Error::InvalidRing(format!(
                    "variable {} covered twice",
                    ring.vars()[i]
                )));
            }
            let lead = g.coeff_of(&crate::poly::Monomial::var(ring.nvars(), i));
            if !lead.is_one() {
                return Err(Error::InvalidRing(
                    "linear generator must have coefficient one".into(),
                ));
            }
            covered[i] = true;
        }
        if integral && !prime_seen && ring.nvars() > 0 {
            return Err(Error::InvalidRing(
                "a maximal ideal of Z[vars] needs a prime constant".into(),
            ));
        }
        if integral && !prime_seen && ring.nvars() == 0 {
            return Err(Error::InvalidRing("a maximal ideal of Z needs a prime".into()));
        }
        if let Some(i) = covered.iter().position(|&c| !c) {
            return Err(Error::InvalidRing(format!(
                "variable {} is not covered by a linear generator",
                ring.vars()[i]
            )));
        }
        let nonzero: Vec<Poly> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        let gb = if nonzero.is_empty() {
            None
        } else {
            Some(groebner(&nonzero, MonomialOrder::Grevlex)?)
        };
        Ok(MaxIdeal { ring: ring.clone(), gb })
    }

    /// The zero ideal of a field (no variables): maximal because the ring
    /// is already a field.
    pub fn zero_ideal(ring: &RingDesc) -> Result<Self> {
        if ring.nvars() != 0 || !ring.is_field() {
            return Err(Error::InvalidRing(
                "the zero ideal is maximal only in a field".into(),
            ));
        }
        Ok(MaxIdeal { ring: ring.clone(), gb: None })
    }

    pub fn ring(&self) -> &RingDesc {
        &self.ring
    }

    pub fn gens(&self) -> &[Poly] {
        self.gb.as_ref().map(|g| g.gens()).unwrap_or(&[])
    }

    pub fn gens_strings(&self) -> Vec<String> {
        self.gens().iter().map(|g| g.to_canonical_string()).collect()
    }

    pub fn contains(&self, f: &Poly) -> bool {
        match &self.gb {
            None => f.is_zero(),
            Some(gb) => gb.reduce(f).0.is_zero(),
        }
    }
}

pub fn in_max_ideal(f: &Poly, m: &MaxIdeal) -> bool {
    m.contains(f)
}

fn eval_point(f: &Poly, pt: &[Coeff]) -> Coeff {
    let ck = f.ring().coeff();
    let mut acc = ck.zero();
    for (m, c) in f.terms() {
        let mut t = c.clone();
        for (i, &e) in m.0.iter().enumerate() {
            for _ in 0..e {
                t = ck.mul(&t, &pt[i]);
            }
        }
        acc = ck.add(&acc, &t);
    }
    acc
}

struct PointBudget {
    left: u64,
}

impl PointBudget {
    fn spend(&mut self) -> Result<()> {
        if self.left == 0 {
            return Err(Error::SearchExhausted(
                "candidate-point budget exhausted during maximal-ideal search; raise the budget"
                    .into(),
            ));
        }
        self.left -= 1;
        Ok(())
    }
}

/// Walk an odometer over `k` positions, each position taking values from
/// `values`; calls the visitor with each tuple (first position most
/// significant). Stops early when the visitor returns true.
fn odometer<F: FnMut(&[usize]) -> Result<bool>>(
    k: usize,
    n_values: usize,
    mut visit: F,
) -> Result<bool> {
    let mut idx = vec![0usize; k];
    loop {
        if visit(&idx)? {
            return Ok(true);
        }
        // Increment with the last position fastest: lexicographic order.
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(false);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < n_values {
                break;
            }
            idx[pos] = 0;
        }
        if k == 0 {
            return Ok(false);
        }
    }
}

/// Find a maximal ideal containing the given ideal, by the fixed ladder:
/// over Z, primes ascending then points of F_p^k in lexicographic order;
/// over Q, integer points in a growing box; over Z/p, all of F_p^k.
pub fn get_max_ideal(ring: &RingDesc, gens: &[Poly], budget: &SearchBudget) -> Result<MaxIdeal> {
    for g in gens {
        if g.ring() != ring {
            return Err(Error::RingMismatch("ideal generator over a different ring".into()));
        }
    }
    let live: Vec<Poly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if one_certificate(&live)?.is_some() {
        return Err(Error::NotProper);
    }
    let k = ring.nvars();
    let mut budget = PointBudget { left: budget.max_points };
    match ring.coeff() {
        CoeffKind::Z => {
            if k > 3 {
                return Err(Error::SearchExhausted(format!(
                    "maximal-ideal search over the integers supports at most 3 variables, got {k}; raise the budget after reducing variables"
                )));
            }
            for &p in &SEARCH_PRIMES {
                let reduced: Result<Vec<Poly>> = live.iter().map(|g| g.to_mod_p(p)).collect();
                let reduced = reduced?;
                let mut found: Option<Vec<usize>> = None;
                odometer(k, p as usize, |idx| {
                    budget.spend()?;
                    let modring = reduced
                        .first()
                        .map(|g| g.ring().clone());
                    let pt: Vec<Coeff> = idx.iter().map(|&a| Coeff::Mod(a as u64)).collect();
                    let ok = match &modring {
                        Some(_) => reduced.iter().all(|g| eval_point(g, &pt).is_zero()),
                        None => true,
                    };
                    if ok {
                        found = Some(idx.to_vec());
                    }
                    Ok(ok)
                })?;
                if let Some(idx) = found {
                    let mut mgens = vec![Poly::from_i64(ring, p as i64)];
                    for (i, &a) in idx.iter().enumerate() {
                        let xi = Poly::var(ring, i);
                        mgens.push(&xi - &Poly::from_i64(ring, a as i64));
                    }
                    let m = MaxIdeal::from_point_gens(ring, mgens)?;
                    debug_assert!(gens.iter().all(|g| m.contains(g)));
                    return Ok(m);
                }
            }
            Err(Error::SearchExhausted(
                "no maximal ideal found along the prime ladder (primes up to 97, linear points); raise the budget or simplify the ideal".into(),
            ))
        }
        CoeffKind::Q => {
            // Coordinate sequence 0, 1, -1, 2, -2, ...; shell b keeps only
            // points whose maximal absolute value is exactly b.
            for b in 0i64..=10 {
                let mut seq: Vec<i64> = vec![0];
                for v in 1..=b {
                    seq.push(v);
                    seq.push(-v);
                }
                let mut found: Option<Vec<i64>> = None;
                odometer(k, seq.len(), |idx| {
                    let coords: Vec<i64> = idx.iter().map(|&i| seq[i]).collect();
                    let maxabs = coords.iter().map(|c| c.abs()).max().unwrap_or(0);
                    if maxabs != b {
                        return Ok(false);
                    }
                    budget.spend()?;
                    let pt: Vec<Coeff> =
                        coords.iter().map(|&c| ring.coeff().from_i64(c)).collect();
                    let ok = live.iter().all(|g| eval_point(g, &pt).is_zero());
                    if ok {
                        found = Some(coords);
                    }
                    Ok(ok)
                })?;
                if let Some(coords) = found {
                    let mut mgens = Vec::new();
                    for (i, &a) in coords.iter().enumerate() {
                        let xi = Poly::var(ring, i);
                        mgens.push(&xi - &Poly::from_i64(ring, a));
                    }
                    if mgens.is_empty() {
                        return MaxIdeal::zero_ideal(ring);
                    }
                    let m = MaxIdeal::from_point_gens(ring, mgens)?;
                    debug_assert!(gens.iter().all(|g| m.contains(g)));
                    return Ok(m);
                }
            }
            Err(Error::SearchExhausted(
                "no rational point of the ideal found in the box |coordinate| <= 10; raise the budget or supply an ideal with a small rational zero".into(),
            ))
        }
        CoeffKind::Zp(p) => {
            let p = *p;
            let mut found: Option<Vec<usize>> = None;
            odometer(k, p as usize, |idx| {
                budget.spend()?;
                let pt: Vec<Coeff> = idx.iter().map(|&a| Coeff::Mod(a as u64)).collect();
                let ok = live.iter().all(|g| eval_point(g, &pt).is_zero());
                if ok {
                    found = Some(idx.to_vec());
                }
                Ok(ok)
            })?;
            if let Some(idx) = found {
                let mut mgens = Vec::new();
                for (i, &a) in idx.iter().enumerate() {
                    let xi = Poly::var(ring, i);
                    mgens.push(&xi - &Poly::from_i64(ring, a as i64));
                }
                if mgens.is_empty() {
                    return MaxIdeal::zero_ideal(ring);
                }
                let m = MaxIdeal::from_point_gens(ring, mgens)?;
                debug_assert!(gens.iter().all(|g| m.contains(g)));
                return Ok(m);
            }
            Err(Error::SearchExhausted(format!(
                "no common zero of the ideal in F_{p}^{k}; the ideal may have no linear-point maximal ideal"
            )))
        }
    }
}

/// An element of the localization: num over A[y], den over A outside m.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalElem {
    pub num: Poly,
    pub den: Poly,
}

impl LocalElem {
    pub fn from_poly(p: &Poly) -> Self {
        LocalElem { num: p.clone(), den: Poly::one(p.ring()) }
    }

    pub fn one(ring: &RingDesc) -> Self {
        LocalElem { num: Poly::one(ring), den: Poly::one(ring) }
    }

    pub fn add(&self, other: &LocalElem) -> LocalElem {
        LocalElem {
            num: &(&self.num * &other.den) + &(&other.num * &self.den),
            den: &self.den * &other.den,
        }
    }

    pub fn mul(&self, other: &LocalElem) -> LocalElem {
        LocalElem { num: &self.num * &other.num, den: &self.den * &other.den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Cancel the denominator into the numerator when possible.
    pub fn reduced(&self) -> LocalElem {
        if self.den.is_one() {
            return self.clone();
        }
        match self.num.exact_div(&self.den) {
            Some(q) => LocalElem { num: q, den: Poly::one(self.num.ring()) },
            None => self.clone(),
        }
    }

    pub fn to_display_string(&self) -> String {
        let r = self.reduced();
        if r.den.is_one() {
            return r.num.to_canonical_string();
        }
        let num_s = r.num.to_canonical_string();
        let num_wrapped = if r.num.nterms() > 1 { format!("({num_s})") } else { num_s };
        format!("{num_wrapped}/({})", r.den.to_canonical_string())
    }
}

/// Invert a y-free element that stays invertible locally at m.
pub fn local_invert(u: &Poly, m: &MaxIdeal) -> Result<LocalElem> {
    let u_base = if u.ring() == m.ring() {
        u.clone()
    } else {
        u.restrict(m.ring())
            .map_err(|_| Error::RingMismatch("element does not live over the base ring".into()))?
    };
    if m.contains(&u_base) {
        return Err(Error::NotLocalUnit);
    }
    Ok(LocalElem { num: Poly::one(u.ring()), den: u.clone() })
}

/// A solved local instance: P/den inverts the row at m, in the sense
/// row * P = den * e1 with den invertible locally.
#[derive(Debug, Clone)]
pub struct LocalSolution {
    /// Numerator matrix P over A[y].
    pub mat_num: PolyMatrix,
    /// Common denominator, y-free, outside m.
    pub den: Poly,
    /// The y-free factors whose product is `den`.
    pub den_factors: Vec<Poly>,
    pub max_ideal: MaxIdeal,
    /// The row this solution was built from.
    pub row: Vec<Poly>,
    /// Index of the distinguished variable y in the row's ring.
    pub y: usize,
}

impl LocalSolution {
    /// Check the defining identities: row * P = den * e1, den y-free and
    /// outside m, det P y-free and outside m.
    pub fn verify(&self) -> Result<()> {
        let ring = self.mat_num.ring().clone();
        let k = self.row.len();
        if self.mat_num.nrows() != k || self.mat_num.ncols() != k {
            return Err(Error::Internal("local solution matrix has wrong shape".into()));
        }
        let rowm = PolyMatrix::row_vector(&ring, self.row.clone());
        let prod = rowm.mul(&self.mat_num);
        for j in 0..k {
            let expect = if j == 0 { self.den.clone() } else { Poly::zero(&ring) };
            if prod.get(0, j) != &expect {
                return Err(Error::Internal(format!(
                    "local solution fails row*P = den*e1 at column {j}"
                )));
            }
        }
        if self.den.contains_var(self.y) {
            return Err(Error::Internal("denominator involves the eliminated variable".into()));
        }
        let den_base = self.den.restrict(self.max_ideal.ring())?;
        if self.max_ideal.contains(&den_base) {
            return Err(Error::Internal("denominator fell into the maximal ideal".into()));
        }
        let det = self.mat_num.det()?;
        if det.contains_var(self.y) {
            return Err(Error::Internal("det P involves the eliminated variable".into()));
        }
        let det_base = det.restrict(self.max_ideal.ring())?;
        if self.max_ideal.contains(&det_base) {
            return Err(Error::Internal("det P fell into the maximal ideal".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(kind: CoeffKind, vars: &[&str]) -> RingDesc {
        RingDesc::new(kind, vars.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    fn p(r: &RingDesc, s: &str) -> Poly {
        Poly::parse(r, s).unwrap()
    }

    #[test]
    fn zero_ideal_in_integer_univariate() {
        let r = ring(CoeffKind::Z, &["x"]);
        let m = get_max_ideal(&r, &[], &SearchBudget::default()).unwrap();
        assert_eq!(m.gens(), &[p(&r, "2"), p(&r, "x")]);
    }

    #[test]
    fn ideal_of_two_x_plus_one() {
        let r = ring(CoeffKind::Z, &["x"]);
        let m = get_max_ideal(&r, &[p(&r, "2*x + 1")], &SearchBudget::default()).unwrap();
        assert_eq!(m.gens(), &[p(&r, "3"), p(&r, "x - 1")]);
        // The output must contain its input.
        assert!(m.contains(&p(&r, "2*x + 1")));
    }

    #[test]
    fn unit_ideal_is_rejected() {
        let r = ring(CoeffKind::Z, &["x"]);
        let gens = [p(&r, "2*x + 1"), p(&r, "x")];
        assert!(matches!(
            get_max_ideal(&r, &gens, &SearchBudget::default()),
            Err(Error::NotProper)
        ));
    }

    #[test]
    fn rational_point_search() {
        let r = ring(CoeffKind::Q, &["x", "y"]);
        let m = get_max_ideal(&r, &[p(&r, "x - 1")], &SearchBudget::default()).unwrap();
        assert_eq!(m.gens(), &[p(&r, "y"), p(&r, "x - 1")]);
        assert!(m.contains(&p(&r, "x - 1")));
        assert!(!m.contains(&p(&r, "x")));
    }

    #[test]
    fn prime_field_point_search() {
        let r = ring(CoeffKind::Zp(5), &["x"]);
        let m = get_max_ideal(&r, &[p(&r, "x - 2")], &SearchBudget::default()).unwrap();
        assert_eq!(m.gens(), &[p(&r, "x + 3")]);
    }

    #[test]
    fn field_without_vars_has_zero_maximal_ideal() {
        let r = ring(CoeffKind::Q, &[]);
        let m = get_max_ideal(&r, &[], &SearchBudget::default()).unwrap();
        assert!(m.gens().is_empty());
        assert!(m.contains(&Poly::zero(&r)));
        assert!(!m.contains(&Poly::one(&r)));
    }

    #[test]
    fn integers_without_vars() {
        let r = ring(CoeffKind::Z, &[]);
        let m = get_max_ideal(&r, &[p(&r, "6")], &SearchBudget::default()).unwrap();
        assert_eq!(m.gens(), &[p(&r, "2")]);
    }

    #[test]
    fn search_honestly_fails_without_rational_points() {
        let r = ring(CoeffKind::Q, &["x"]);
        let err = get_max_ideal(&r, &[p(&r, "x^2 - 2")], &SearchBudget::default());
        match err {
            Err(Error::SearchExhausted(msg)) => assert!(msg.contains("box")),
            other => panic!("expected SearchExhausted, got {other:?}"),
        }
    }

    #[test]
    fn too_many_integer_variables() {
        let r = ring(CoeffKind::Z, &["a", "b", "c", "d"]);
        assert!(matches!(
            get_max_ideal(&r, &[], &SearchBudget::default()),
            Err(Error::SearchExhausted(_))
        ));
    }

    #[test]
    fn tiny_budget_is_reported() {
        let r = ring(CoeffKind::Z, &["x"]);
        let budget = SearchBudget { max_points: 1 };
        match get_max_ideal(&r, &[p(&r, "2*x + 1")], &budget) {
            Err(Error::SearchExhausted(msg)) => assert!(msg.contains("budget")),
            other => panic!("expected SearchExhausted, got {other:?}"),
        }
    }

    #[test]
    fn membership_fixtures() {
        let r = ring(CoeffKind::Z, &["x"]);
        let m = MaxIdeal::from_point_gens(&r, vec![p(&r, "2"), p(&r, "x")]).unwrap();
        assert!(!in_max_ideal(&p(&r, "2*x + 1"), &m));
        assert!(in_max_ideal(&p(&r, "x"), &m));
        assert!(in_max_ideal(&Poly::zero(&r), &m));
        assert!(in_max_ideal(&p(&r, "2"), &m));
        assert!(in_max_ideal(&p(&r, "4*x + 2"), &m));
    }

    #[test]
    fn membership_respects_ring_operations() {
        let r = ring(CoeffKind::Z, &["x"]);
        let m = MaxIdeal::from_point_gens(&r, vec![p(&r, "2"), p(&r, "x")]).unwrap();
        let members = [p(&r, "x"), p(&r, "2"), p(&r, "2*x + 4"), p(&r, "x^3 + 2*x")];
        let multipliers = [p(&r, "x + 1"), p(&r, "3*x^2 - 1"), p(&r, "5")];
        for f in &members {
            assert!(m.contains(f));
            for g in &members {
                assert!(m.contains(&(f + g)));
            }
            for h in &multipliers {
                assert!(m.contains(&(f * h)));
            }
        }
    }

    #[test]
    fn point_gens_validation() {
        let rz = ring(CoeffKind::Z, &["x"]);
        assert!(MaxIdeal::from_point_gens(&rz, vec![p(&rz, "4"), p(&rz, "x")]).is_err());
        assert!(MaxIdeal::from_point_gens(&rz, vec![p(&rz, "x")]).is_err());
        let rq = ring(CoeffKind::Q, &["x", "y"]);
        assert!(MaxIdeal::from_point_gens(&rq, vec![p(&rq, "x - 1")]).is_err());
        assert!(MaxIdeal::from_point_gens(&rq, vec![p(&rq, "x - 1"), p(&rq, "y + 2")]).is_ok());
        assert!(MaxIdeal::from_point_gens(&rq, vec![p(&rq, "x*y - 1"), p(&rq, "y")]).is_err());
    }

    #[test]
    fn local_inversion() {
        let r = ring(CoeffKind::Z, &["x"]);
        let m = MaxIdeal::from_point_gens(&r, vec![p(&r, "2"), p(&r, "x")]).unwrap();
        let inv = local_invert(&p(&r, "2*x + 1"), &m).unwrap();
        assert_eq!(inv.num, Poly::one(&r));
        assert_eq!(inv.den, p(&r, "2*x + 1"));
        assert_eq!(inv.to_display_string(), "1/(2*x + 1)");

        let one = local_invert(&Poly::one(&r), &m).unwrap();
        assert_eq!(one.to_display_string(), "1");

        assert!(matches!(local_invert(&p(&r, "x"), &m), Err(Error::NotLocalUnit)));
    }

    #[test]
    fn local_fraction_arithmetic() {
        let r = ring(CoeffKind::Z, &["x"]);
        let m = MaxIdeal::from_point_gens(&r, vec![p(&r, "2"), p(&r, "x")]).unwrap();
        let a = local_invert(&p(&r, "2*x + 1"), &m).unwrap();
        let b = local_invert(&p(&r, "x - 1"), &m).unwrap();
        let prod = a.mul(&b);
        // Product of denominators stays outside the (prime) ideal.
        assert!(!m.contains(&prod.den));
        let sum = a.add(&b);
        assert_eq!(sum.num, p(&r, "3*x"));
        assert!(!m.contains(&sum.den));
        // Cancelling works when the denominator divides the numerator.
        let c = LocalElem { num: p(&r, "2*x^2 + x"), den: p(&r, "2*x + 1") };
        assert_eq!(c.reduced().num, p(&r, "x"));
        assert_eq!(c.to_display_string(), "x");
    }
}
