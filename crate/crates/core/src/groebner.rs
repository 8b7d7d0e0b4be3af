//! Groebner bases with cofactor certificates.
//!
//! Over field coefficients this is Buchberger's algorithm with the sugar
//! selection strategy and both classical pair-skipping criteria. Over the
//! integers it computes strong Groebner bases in the Kandri-Rody--Kapur
//! style: S-polynomials plus G-polynomials, divisibility-only reduction,
//! and no pair-skipping criteria (they are unsound for strong bases).
//! Every basis element carries its expression in the input generators, so
//! membership tests yield explicit certificates.

use std::collections::{BinaryHeap, HashSet};
use std::cmp::Reverse;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::matrix::PolyMatrix;
use crate::poly::{Monomial, MonomialOrder, Poly};
use crate::ring::{ext_gcd, Coeff, CoeffKind, RingDesc};

/// Total S/G-pairs processed since process start (all computations).
static GB_PAIRS: AtomicU64 = AtomicU64::new(0);

pub fn gb_pairs_processed_total() -> u64 {
    GB_PAIRS.load(AtomicOrdering::Relaxed)
}

#[derive(Debug, Clone)]
pub struct GbLimits {
    pub max_pairs: u64,
}

impl Default for GbLimits {
    fn default() -> Self {
        GbLimits { max_pairs: 100_000 }
    }
}

#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    ring: RingDesc,
    order: MonomialOrder,
    input: Vec<Poly>,
    gens: Vec<Poly>,
    cofactors: Vec<Vec<Poly>>,
    pairs_processed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct PairKey {
    sugar: u32,
    lcm_degree: u32,
    lcm: Monomial,
    i: usize,
    j: usize,
}

/// Divisibility-aware reduction. Over a field any matching leading monomial
/// reduces; over Z the reducer's leading coefficient must also divide the
/// term's coefficient. Returns (normal form, quotients, sugar of the run).
fn reduce_by(
    f: &Poly,
    f_sugar: u32,
    gens: &[Poly],
    sugars: &[u32],
    order: MonomialOrder,
) -> (Poly, Vec<Poly>, u32) {
    let ring = f.ring().clone();
    let ck = ring.coeff().clone();
    let integral = matches!(ck, CoeffKind::Z);
    let mut p = f.clone();
    let mut nf = Poly::zero(&ring);
    let mut q = vec![Poly::zero(&ring); gens.len()];
    let mut sugar = f_sugar;
    'outer: while !p.is_zero() {
        let (m, c) = {
            let (m, c) = p.leading_term(order).expect("nonzero poly has a leading term");
            (m.clone(), c.clone())
        };
        for (k, g) in gens.iter().enumerate() {
            let (gm, gc) = match g.leading_term(order) {
                Some(t) => t,
                None => continue,
            };
            if !gm.divides(&m) {
                continue;
            }
            let quot_c = if integral {
                match ck.exact_div(&c, gc) {
                    Some(d) => d,
                    None => continue,
                }
            } else {
                ck.mul(&c, &ck.invert(gc).expect("field leading coefficient is invertible"))
            };
            let t = gm.div_into(&m).expect("divisibility was checked");
            sugar = sugar.max(t.total_degree() + sugars.get(k).copied().unwrap_or(0));
            p = &p - &g.mul_term(&t, &quot_c);
            q[k] = &q[k] + &Poly::term(&ring, t, quot_c);
            continue 'outer;
        }
        // Leading term irreducible: move it into the normal form.
        nf = &nf + &Poly::term(&ring, m.clone(), c.clone());
        p = &p - &Poly::term(&ring, m, c);
    }
    (nf, q, sugar)
}

/// Candidate polynomials generated by a critical pair, together with the
/// pair's contribution to the cofactor bookkeeping: (poly, coeff on gen i,
/// coeff on gen j, sugar).
fn pair_candidates(
    gi: &Poly,
    gj: &Poly,
    si: u32,
    sj: u32,
    order: MonomialOrder,
) -> Vec<(Poly, Poly, Poly, u32)> {
    let ring = gi.ring().clone();
    let ck = ring.coeff().clone();
    let (mi, ci) = {
        let (m, c) = gi.leading_term(order).unwrap();
        (m.clone(), c.clone())
    };
    let (mj, cj) = {
        let (m, c) = gj.leading_term(order).unwrap();
        (m.clone(), c.clone())
    };
    let l = mi.lcm(&mj);
    let ui = mi.div_into(&l).unwrap();
    let uj = mj.div_into(&l).unwrap();
    let sugar = (si + ui.total_degree()).max(sj + uj.total_degree());
    let mut out = Vec::new();
    match ck {
        CoeffKind::Z => {
            let (ai, aj) = match (&ci, &cj) {
                (Coeff::Int(a), Coeff::Int(b)) => (a.clone(), b.clone()),
                _ => unreachable!("integer ring carries integer coefficients"),
            };
            let g = num_integer::Integer::gcd(&ai, &aj);
            let lcm_c = (&ai / &g) * &aj;
            let qi = Poly::term(&ring, ui.clone(), ck.from_bigint(&lcm_c / &ai));
            let qj = Poly::term(&ring, uj.clone(), ck.from_bigint(-(&lcm_c / &aj)));
            let spoly = &gi.mul_term(&ui, &ck.from_bigint(&lcm_c / &ai))
                - &gj.mul_term(&uj, &ck.from_bigint(&lcm_c / &aj));
            out.push((spoly, qi, qj, sugar));
            // G-polynomial fixes up the gcd of leading coefficients; it is
            // redundant when one leading coefficient divides the other.
            let divides = |x: &BigInt, y: &BigInt| (y % x).sign() == num_bigint::Sign::NoSign;
            if !divides(&ai, &aj) && !divides(&aj, &ai) {
                let (_, s, t) = ext_gcd(&ai, &aj);
                let qi = Poly::term(&ring, ui.clone(), ck.from_bigint(s.clone()));
                let qj = Poly::term(&ring, uj.clone(), ck.from_bigint(t.clone()));
                let gpoly = &gi.mul_term(&ui, &ck.from_bigint(s)) + &gj.mul_term(&uj, &ck.from_bigint(t));
                out.push((gpoly, qi, qj, sugar));
            }
        }
        _ => {
            let inv_i = ck.invert(&ci).unwrap();
            let inv_j = ck.invert(&cj).unwrap();
            let qi = Poly::term(&ring, ui.clone(), inv_i.clone());
            let qj = Poly::term(&ring, uj.clone(), ck.neg(&inv_j));
            let spoly = &gi.mul_term(&ui, &inv_i) - &gj.mul_term(&uj, &inv_j);
            out.push((spoly, qi, qj, sugar));
        }
    }
    out
}

pub fn groebner(input: &[Poly], order: MonomialOrder) -> Result<GroebnerBasis> {
    groebner_with_limits(input, order, &GbLimits::default())
}

pub fn groebner_with_limits(
    input: &[Poly],
    order: MonomialOrder,
    limits: &GbLimits,
) -> Result<GroebnerBasis> {
    let ring = match input.first() {
        Some(f) => f.ring().clone(),
        None => {
            return Ok(GroebnerBasis {
                ring: RingDesc::new(CoeffKind::Q, vec![])?,
                order,
                input: vec![],
                gens: vec![],
                cofactors: vec![],
                pairs_processed: 0,
            })
        }
    };
    for f in input {
        if f.ring() != &ring {
            return Err(Error::RingMismatch("generators over different rings".into()));
        }
    }
    let ck = ring.coeff().clone();
    let integral = matches!(ck, CoeffKind::Z);
    let n_in = input.len();

    let mut gens: Vec<Poly> = Vec::new();
    let mut cofs: Vec<Vec<Poly>> = Vec::new();
    let mut sugars: Vec<u32> = Vec::new();
    for (j, f) in input.iter().enumerate() {
        if f.is_zero() {
            continue;
        }
        let mut row = vec![Poly::zero(&ring); n_in];
        row[j] = Poly::one(&ring);
        gens.push(f.clone());
        cofs.push(row);
        sugars.push(f.total_degree());
    }

    let mut heap: BinaryHeap<Reverse<PairKey>> = BinaryHeap::new();
    let push_pairs = |heap: &mut BinaryHeap<Reverse<PairKey>>, gens: &[Poly], sugars: &[u32], k: usize| {
        for i in 0..k {
            let mi = gens[i].leading_term(order).unwrap().0;
            let mk = gens[k].leading_term(order).unwrap().0;
            let l = mi.lcm(mk);
            let sugar = (sugars[i] + mi.div_into(&l).unwrap().total_degree())
                .max(sugars[k] + mk.div_into(&l).unwrap().total_degree());
            heap.push(Reverse(PairKey {
                sugar,
                lcm_degree: l.total_degree(),
                lcm: l,
                i,
                j: k,
            }));
        }
    };
    for k in 0..gens.len() {
        push_pairs(&mut heap, &gens, &sugars, k);
    }

    let mut done: HashSet<(usize, usize)> = HashSet::new();
    let mut pairs_processed = 0u64;

    while let Some(Reverse(key)) = heap.pop() {
        let (i, j) = (key.i, key.j);
        pairs_processed += 1;
        GB_PAIRS.fetch_add(1, AtomicOrdering::Relaxed);
        if pairs_processed > limits.max_pairs {
            return Err(Error::ResourceExceeded(format!(
                "pair limit of {} exceeded in basis completion",
                limits.max_pairs
            )));
        }
        if !integral {
            let mi = gens[i].leading_term(order).unwrap().0;
            let mj = gens[j].leading_term(order).unwrap().0;
            // Coprime leading monomials: S-polynomial reduces to zero.
            if mi.gcd_is_one(mj) {
                done.insert((i, j));
                continue;
            }
            // Chain criterion: a third element whose pairs with both ends
            // were already treated makes this pair redundant.
            let chained = (0..gens.len()).any(|k| {
                k != i
                    && k != j
                    && gens[k].leading_term(order).unwrap().0.divides(&key.lcm)
                    && done.contains(&(i.min(k), i.max(k)))
                    && done.contains(&(j.min(k), j.max(k)))
            });
            if chained {
                done.insert((i, j));
                continue;
            }
        }
        done.insert((i, j));

        for (cand, qi, qj, cand_sugar) in
            pair_candidates(&gens[i], &gens[j], sugars[i], sugars[j], order)
        {
            if cand.is_zero() {
                continue;
            }
            let (nf, q, nf_sugar) = reduce_by(&cand, cand_sugar, &gens, &sugars, order);
            if nf.is_zero() {
                continue;
            }
            // cand = qi*g_i + qj*g_j, and nf = cand - sum q_k g_k.
            let mut row = vec![Poly::zero(&ring); n_in];
            for t in 0..n_in {
                let mut acc = &(&qi * &cofs[i][t]) + &(&qj * &cofs[j][t]);
                for (k, qk) in q.iter().enumerate() {
                    if !qk.is_zero() {
                        acc = &acc - &(qk * &cofs[k][t]);
                    }
                }
                row[t] = acc;
            }
            gens.push(nf);
            cofs.push(row);
            sugars.push(nf_sugar);
            let k = gens.len() - 1;
            push_pairs(&mut heap, &gens, &sugars, k);
        }
    }

    let (gens, cofs) = finalize_basis(gens, cofs, &ring, order, integral);
    let gb = GroebnerBasis {
        ring,
        order,
        input: input.to_vec(),
        gens,
        cofactors: cofs,
        pairs_processed,
    };
    #[cfg(debug_assertions)]
    gb.verify_cofactors();
    Ok(gb)
}

/// Minimize, tail-reduce, normalize, and sort the completed basis while
/// keeping cofactor rows exact.
fn finalize_basis(
    gens: Vec<Poly>,
    cofs: Vec<Vec<Poly>>,
    ring: &RingDesc,
    order: MonomialOrder,
    integral: bool,
) -> (Vec<Poly>, Vec<Vec<Poly>>) {
    let ck = ring.coeff().clone();
    // Sort candidates so that any potential reducer of a leading term comes
    // first: ascending leading monomial, then ascending |lc| over Z.
    let mut idx: Vec<usize> = (0..gens.len()).collect();
    idx.sort_by(|&a, &b| {
        let (ma, ca) = gens[a].leading_term(order).unwrap();
        let (mb, cb) = gens[b].leading_term(order).unwrap();
        order
            .cmp(ma, mb)
            .then_with(|| match (ca, cb) {
                (Coeff::Int(x), Coeff::Int(y)) => x.abs().cmp(&y.abs()),
                _ => std::cmp::Ordering::Equal,
            })
            .then(a.cmp(&b))
    });
    let mut kept: Vec<usize> = Vec::new();
    for &i in &idx {
        let (m, c) = gens[i].leading_term(order).unwrap();
        let reducible = kept.iter().any(|&k| {
            let (km, kc) = gens[k].leading_term(order).unwrap();
            km.divides(m) && (!integral || ck.exact_div(c, kc).is_some())
        });
        if !reducible {
            kept.push(i);
        }
    }

    let mut out_gens: Vec<Poly> = kept.iter().map(|&i| gens[i].clone()).collect();
    let mut out_cofs: Vec<Vec<Poly>> = kept.iter().map(|&i| cofs[i].clone()).collect();
    let sugars = vec![0u32; out_gens.len()];

    // Tail reduction: leading terms are pairwise irreducible, so reducing a
    // basis element by the others leaves its leading term intact.
    for i in 0..out_gens.len() {
        let mut others: Vec<Poly> = Vec::with_capacity(out_gens.len() - 1);
        let mut map: Vec<usize> = Vec::with_capacity(out_gens.len() - 1);
        for (k, g) in out_gens.iter().enumerate() {
            if k != i {
                others.push(g.clone());
                map.push(k);
            }
        }
        let (nf, q, _) = reduce_by(&out_gens[i], 0, &others, &sugars, order);
        if nf == out_gens[i] {
            continue;
        }
        let mut row = out_cofs[i].clone();
        for (t, slot) in row.iter_mut().enumerate() {
            let mut acc = slot.clone();
            for (pos, qk) in q.iter().enumerate() {
                if !qk.is_zero() {
                    acc = &acc - &(qk * &out_cofs[map[pos]][t]);
                }
            }
            *slot = acc;
        }
        out_gens[i] = nf;
        out_cofs[i] = row;
    }

    // Normalize: monic over fields, positive leading coefficient over Z.
    for i in 0..out_gens.len() {
        let (_, c) = out_gens[i].leading_term(order).unwrap();
        match &ck {
            CoeffKind::Z => {
                if let Coeff::Int(n) = c {
                    if n.is_negative() {
                        out_gens[i] = out_gens[i].neg();
                        for s in out_cofs[i].iter_mut() {
                            *s = s.neg();
                        }
                    }
                }
            }
            _ => {
                let inv = ck.invert(c).expect("field leading coefficient is invertible");
                if !inv.is_one() {
                    out_gens[i] = out_gens[i].scale(&inv);
                    for s in out_cofs[i].iter_mut() {
                        *s = s.scale(&inv);
                    }
                }
            }
        }
    }

    // Deterministic presentation: ascending leading monomial.
    let mut order_idx: Vec<usize> = (0..out_gens.len()).collect();
    order_idx.sort_by(|&a, &b| {
        let ma = out_gens[a].leading_term(order).unwrap().0;
        let mb = out_gens[b].leading_term(order).unwrap().0;
        order.cmp(ma, mb).then(a.cmp(&b))
    });
    let gens = order_idx.iter().map(|&i| out_gens[i].clone()).collect();
    let cofs = order_idx.iter().map(|&i| out_cofs[i].clone()).collect();
    (gens, cofs)
}

impl GroebnerBasis {
    pub fn ring(&self) -> &RingDesc {
        &self.ring
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn input(&self) -> &[Poly] {
        &self.input
    }

    pub fn cofactor_rows(&self) -> &[Vec<Poly>] {
        &self.cofactors
    }

    pub fn pairs_processed(&self) -> u64 {
        self.pairs_processed
    }

    pub fn gens_strings(&self) -> Vec<String> {
        self.gens.iter().map(|g| g.to_canonical_string()).collect()
    }

    #[cfg(debug_assertions)]
    fn verify_cofactors(&self) {
        for (g, row) in self.gens.iter().zip(&self.cofactors) {
            let mut acc = Poly::zero(&self.ring);
            for (c, f) in row.iter().zip(&self.input) {
                acc = &acc + &(c * f);
            }
            assert_eq!(&acc, g, "cofactor record fails to reproduce a basis element");
        }
    }

    /// Normal form plus quotients over the basis: f = sum q_i*gens_i + nf.
    pub fn reduce(&self, f: &Poly) -> (Poly, Vec<Poly>) {
        let sugars = vec![0u32; self.gens.len()];
        let (nf, q, _) = reduce_by(f, 0, &self.gens, &sugars, self.order);
        (nf, q)
    }

    pub fn contains(&self, f: &Poly) -> bool {
        self.reduce(f).0.is_zero()
    }

    /// Express f over the original input generators; None when f is not in
    /// the ideal. The combination is verified by expansion before returning.
    pub fn express(&self, f: &Poly) -> Result<Option<Vec<Poly>>> {
        let (nf, q) = self.reduce(f);
        if !nf.is_zero() {
            return Ok(None);
        }
        let n_in = self.input.len();
        let mut cert = vec![Poly::zero(&self.ring); n_in];
        for (k, qk) in q.iter().enumerate() {
            if qk.is_zero() {
                continue;
            }
            for t in 0..n_in {
                cert[t] = &cert[t] + &(qk * &self.cofactors[k][t]);
            }
        }
        let mut acc = Poly::zero(&self.ring);
        for (c, g) in cert.iter().zip(&self.input) {
            acc = &acc + &(c * g);
        }
        if &acc != f {
            return Err(Error::Internal(
                "membership certificate failed expansion check".into(),
            ));
        }
        Ok(Some(cert))
    }
}

/// Cofactors g_i with sum g_i*f_i = 1, when 1 lies in the ideal.
pub fn one_certificate(gens: &[Poly]) -> Result<Option<Vec<Poly>>> {
    if gens.is_empty() {
        return Ok(None);
    }
    let gb = groebner(gens, MonomialOrder::Grevlex)?;
    let one = Poly::one(gb.ring());
    gb.express(&one)
}

/// Maximal minors of a wide matrix, keyed by the chosen column subset.
pub fn maximal_minors(m: &PolyMatrix) -> Result<Vec<(Vec<usize>, Poly)>> {
    let (r, c) = (m.nrows(), m.ncols());
    if r > c {
        return Err(Error::ShapeError(format!(
            "maximal minors need nrows <= ncols, got {r}x{c}"
        )));
    }
    let rows: Vec<usize> = (0..r).collect();
    let mut out = Vec::new();
    for cols in (0..c).combinations(r) {
        let d = m.submatrix(&rows, &cols).det()?;
        out.push((cols, d));
    }
    Ok(out)
}

/// True iff the ideal of maximal minors is the unit ideal.
pub fn is_unimodular(m: &PolyMatrix) -> Result<bool> {
    let minors: Vec<Poly> = maximal_minors(m)?.into_iter().map(|(_, d)| d).collect();
    Ok(one_certificate(&minors)?.is_some())
}

/// A matrix X with M*X = I, built from an expression of 1 in the maximal
/// minors via the Laplace adjugate of each square column-selection.
pub fn right_inverse(m: &PolyMatrix) -> Result<PolyMatrix> {
    let ring = m.ring().clone();
    let r = m.nrows();
    let keyed = maximal_minors(m)?;
    let minors: Vec<Poly> = keyed.iter().map(|(_, d)| d.clone()).collect();
    let gb = groebner(&minors, MonomialOrder::Grevlex)?;
    let cert = match gb.express(&Poly::one(&ring))? {
        Some(c) => c,
        None => {
            return Err(Error::NotUnimodular { minors_basis: gb.gens_strings() });
        }
    };
    let all_rows: Vec<usize> = (0..r).collect();
    let mut x = PolyMatrix::zero(&ring, m.ncols(), r);
    for ((cols, _), c) in keyed.iter().zip(&cert) {
        if c.is_zero() {
            continue;
        }
        let adj = m.submatrix(&all_rows, cols).adjugate()?;
        for (pos, &col) in cols.iter().enumerate() {
            for s in 0..r {
                let add = &adj.get(pos, s).clone() * c;
                let cur = x.get(col, s).clone();
                *x.get_mut(col, s) = &cur + &add;
            }
        }
    }
    #[cfg(debug_assertions)]
    assert!(m.mul(&x).is_identity(), "right inverse failed M*X = I");
    Ok(x)
}

/// Fitting ideal of the cokernel of an n x m presentation matrix: the ideal
/// of (n-k)-minors, with the empty-minor conventions.
pub fn fitting_ideal(m: &PolyMatrix, k: usize) -> Result<Vec<Poly>> {
    let n = m.nrows();
    if k >= n {
        return Ok(vec![Poly::one(m.ring())]);
    }
    m.minors(n - k)
}
