//! Unimodular-row solving over a localized polynomial ring in one extra
//! variable: rows over A_m[y] with a monic entry.
//!
//! Everything is kept fraction-free. The state is a row H over A[y], a
//! transform P with f*P = H, and a running y-free denominator d outside m;
//! the localized row being transformed is H/d and the localized transform
//! is P/d. Column operations either are elementary (adding a polynomial
//! multiple of another column) or scale a column by a y-free element
//! outside m, so det P stays a y-free local unit throughout.

use crate::error::{Error, Result};
use crate::local::{LocalSolution, MaxIdeal};
use crate::matrix::PolyMatrix;
use crate::poly::{Monomial, Poly};
use crate::ring::RingDesc;

/// The monomial y^k.
fn ypow(nvars: usize, y: usize, k: u32) -> Monomial {
    let mut e = vec![0u32; nvars];
    e[y] = k;
    Monomial(e)
}

/// Pseudo-division by a divisor whose leading y-coefficient is `lead`:
/// lead^e * num = q * div + r with deg_y r < deg_y div. When lead = 1 this
/// is plain division by a monic polynomial.
fn pseudo_divmod(num: &Poly, div: &Poly, y: usize, lead: &Poly) -> (u32, Poly, Poly) {
    let ring = num.ring().clone();
    let dd = div.degree_in(y);
    let lead_is_one = lead.is_one();
    let mut e = 0u32;
    let mut q = Poly::zero(&ring);
    let mut r = num.clone();
    while !r.is_zero() {
        let dr = r.degree_in(y);
        if dr < dd {
            break;
        }
        let s = r.coeff_of_power(y, dr);
        let shift = ypow(ring.nvars(), y, dr - dd);
        let s_shift = s.mul_term(&shift, &ring.coeff().one());
        if lead_is_one {
            q = &q + &s_shift;
            r = &r - &(&s_shift * div);
        } else {
            q = &(&q * lead) + &s_shift;
            r = &(&r * lead) - &(&s_shift * div);
            e += 1;
        }
    }
    (e, q, r)
}

/// Row/transform/denominator state; every operation is applied to the row
/// and the transform in lockstep so f * P = H stays exact.
struct State {
    h: Vec<Poly>,
    p: PolyMatrix,
    delta: Poly,
    factors: Vec<Poly>,
}

impl State {
    fn col_scale(&mut self, j: usize, c: &Poly) {
        if c.is_one() {
            return;
        }
        self.h[j] = &self.h[j] * c;
        self.p.col_scale(j, c);
    }

    /// col_j += c * col_i
    fn col_add(&mut self, i: usize, j: usize, c: &Poly) {
        if c.is_zero() {
            return;
        }
        self.h[j] = &self.h[j] + &(&self.h[i] * c);
        self.p.col_add(i, j, c);
    }

    fn col_sub(&mut self, i: usize, j: usize, c: &Poly) {
        self.col_add(i, j, &c.neg());
    }

    fn col_swap(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        self.h.swap(a, b);
        self.p.col_swap(a, b);
    }

    /// Make entry l the semantically monic one: scale every other column
    /// by its leading coefficient c and column l by the old denominator.
    fn monic_scale(&mut self, l: usize, c: &Poly) {
        let delta_old = self.delta.clone();
        for j in 0..self.h.len() {
            if j != l {
                self.col_scale(j, c);
            }
        }
        self.col_scale(l, &delta_old);
        if !c.is_one() {
            self.delta = &self.delta * c;
            self.factors.push(c.clone());
        }
    }
}

fn base_restrict(f: &Poly, base: &RingDesc) -> Result<Poly> {
    f.restrict(base)
        .map_err(|_| Error::Internal("coefficient unexpectedly involves the eliminated variable".into()))
}

/// Multiplication-by-f2 matrix modulo f1 (f1 of y-degree dd with leading
/// coefficient `delta`), in fraction-free form. Returns (DeltaR, Q, Bs)
/// with the exact identity (-Q)*f1 + Bs*f2 = DeltaR, DeltaR y-free.
fn cramer_pair(
    f1: &Poly,
    f2: &Poly,
    y: usize,
    delta: &Poly,
    m: &MaxIdeal,
) -> Result<(Poly, Poly, Poly)> {
    let ring = f1.ring().clone();
    let dd = f1.degree_in(y) as usize;
    let mut es = Vec::with_capacity(dd);
    let mut qs = Vec::with_capacity(dd);
    let mut rs = Vec::with_capacity(dd);
    for i in 0..dd {
        let shifted = f2.mul_term(&ypow(ring.nvars(), y, i as u32), &ring.coeff().one());
        let (e, q, r) = pseudo_divmod(&shifted, f1, y, delta);
        es.push(e);
        qs.push(q);
        rs.push(r);
    }
    let emax = *es.iter().max().unwrap_or(&0);
    // Column i of R: coefficients of delta^(E - e_i) * r_i in powers of y.
    let mut r_entries = Vec::with_capacity(dd * dd);
    for s in 0..dd {
        for i in 0..dd {
            let scaled = &rs[i] * &delta.pow(emax - es[i]);
            r_entries.push(scaled.coeff_of_power(y, s as u32));
        }
    }
    let rmat = PolyMatrix::new(&ring, dd, dd, r_entries);
    let delta_r = rmat.det()?;
    let base = m.ring().clone();
    if m.contains(&base_restrict(&delta_r, &base)?) {
        return Err(Error::NotUnimodularLocally);
    }
    let adj = rmat.adjugate()?;
    // a = adj(R) * e1; B(y) = sum a_s y^s; Q = sum a_i delta^(E-e_i) q_i.
    let mut bpoly = Poly::zero(&ring);
    let mut qpoly = Poly::zero(&ring);
    for s in 0..dd {
        let a_s = adj.get(s, 0);
        if a_s.is_zero() {
            continue;
        }
        bpoly = &bpoly + &a_s.mul_term(&ypow(ring.nvars(), y, s as u32), &ring.coeff().one());
        let scaled_q = &qs[s] * &delta.pow(emax - es[s]);
        qpoly = &qpoly + &(a_s * &scaled_q);
    }
    // Exact check of the construction.
    let lhs = &(&qpoly.neg() * f1) + &(&(&bpoly * &delta.pow(emax)) * f2);
    if lhs != delta_r {
        return Err(Error::Internal("pair completion identity failed expansion".into()));
    }
    Ok((delta_r, qpoly, &bpoly * &delta.pow(emax)))
}

pub fn horrocks(row: &[Poly], y: usize, m: &MaxIdeal) -> Result<LocalSolution> {
    horrocks_with_trace(row, y, m).map(|(sol, _)| sol)
}

/// As `horrocks`, also returning the sequence of y-degrees the leading
/// (semantically monic) entry went through — strictly decreasing.
pub fn horrocks_with_trace(
    row: &[Poly],
    y: usize,
    m: &MaxIdeal,
) -> Result<(LocalSolution, Vec<u32>)> {
    let k = row.len();
    if k == 0 {
        return Err(Error::ShapeError("empty row".into()));
    }
    let ring = row[0].ring().clone();
    for f in row {
        if f.ring() != &ring {
            return Err(Error::RingMismatch("row entries over different rings".into()));
        }
    }
    if y >= ring.nvars() {
        return Err(Error::InvalidRing(format!(
            "variable index {y} out of range for {ring}"
        )));
    }
    let base = ring.without_var(&ring.vars()[y].clone())?;
    if m.ring() != &base {
        return Err(Error::RingMismatch(format!(
            "maximal ideal lives over {}, expected {}",
            m.ring(),
            base
        )));
    }
    let ck = ring.coeff().clone();

    // Pick the entry with a unit-constant leading y-coefficient (first
    // entry preferred) and normalize it to leading coefficient one.
    let mut pick = None;
    for (i, f) in row.iter().enumerate() {
        if f.is_zero() {
            continue;
        }
        let lc = f.coeff_of_power(y, f.degree_in(y));
        if let Some(c) = lc.as_constant() {
            if ck.is_unit(&c) {
                pick = Some((i, c));
                break;
            }
        }
    }
    let Some((pick, lead)) = pick else {
        return Err(Error::NoMonicEntry(format!(
            "no entry has a unit-constant leading coefficient in {}",
            ring.vars()[y]
        )));
    };

    let mut st = State {
        h: row.to_vec(),
        p: PolyMatrix::identity(&ring, k),
        delta: Poly::one(&ring),
        factors: Vec::new(),
    };
    if !lead.is_one() {
        let inv = ck.invert(&lead)?;
        st.col_scale(pick, &Poly::constant(&ring, inv));
    }
    st.col_swap(0, pick);

    let mut trace = vec![st.h[0].degree_in(y)];

    let (mat_num, den, factors) = loop {
        let d = st.h[0].degree_in(y);
        debug_assert_eq!(st.h[0].coeff_of_power(y, d), st.delta, "leading entry lost monicity");
        if d == 0 {
            // h[0] equals the denominator: clear the rest of the row.
            for j in 1..k {
                if st.h[j].is_zero() {
                    continue;
                }
                let t = st.h[j].clone();
                let delta = st.delta.clone();
                st.col_scale(j, &delta);
                st.col_sub(0, j, &t);
                debug_assert!(st.h[j].is_zero());
            }
            break (st.p, st.delta, st.factors);
        }

        // Reduce every other entry below degree d.
        for j in 1..k {
            if st.h[j].is_zero() || st.h[j].degree_in(y) < d {
                continue;
            }
            let (e, q, r) = pseudo_divmod(&st.h[j].clone(), &st.h[0].clone(), y, &st.delta.clone());
            if e > 0 {
                let de = st.delta.pow(e);
                st.col_scale(j, &de);
            }
            st.col_sub(0, j, &q);
            debug_assert_eq!(st.h[j], r);
        }

        // Fast path: an entry whose leading y-coefficient is a local unit
        // becomes the new monic entry; its degree is strictly smaller.
        let mut cands: Vec<(u32, usize)> = (1..k)
            .filter(|&j| !st.h[j].is_zero())
            .map(|j| (st.h[j].degree_in(y), j))
            .collect();
        cands.sort();
        let mut advanced = false;
        for (dj, j) in cands {
            let c = st.h[j].coeff_of_power(y, dj);
            if !m.contains(&base_restrict(&c, &base)?) {
                st.monic_scale(j, &c);
                st.col_swap(0, j);
                trace.push(dj);
                advanced = true;
                break;
            }
        }
        if advanced {
            continue;
        }

        if k == 1 {
            // A monic entry of positive degree alone can never be a unit.
            return Err(Error::NotUnimodularLocally);
        }
        if k == 2 {
            let (delta_r, qpoly, bscaled) = cramer_pair(&st.h[0], &st.h[1], y, &st.delta, m)?;
            let p2 = PolyMatrix::from_rows(
                &ring,
                vec![
                    vec![qpoly.neg(), st.h[1].neg()],
                    vec![bscaled, st.h[0].clone()],
                ],
            );
            // Rescale by the accumulated denominator so every irreducible
            // factor of det P divides a power of the denominator; the
            // patching step depends on that.
            let p_final = st.p.mul(&p2).scale(&st.delta);
            let den = &st.delta * &delta_r;
            let mut factors = st.factors;
            factors.push(delta_r);
            break (p_final, den, factors);
        }

        // Column surgery: some lower y-coefficient of some entry is a local
        // unit; splice it into a fresh entry of degree d-1 whose leading
        // coefficient is a local unit. Candidates are tried lowest degree
        // first, then lowest index, each one verified before committing.
        let mut any_candidate = false;
        let mut committed = false;
        'scan: for r_deg in 0..d {
            for j in 1..k {
                let c = st.h[j].coeff_of_power(y, r_deg);
                if c.is_zero() {
                    continue;
                }
                if m.contains(&base_restrict(&c, &base)?) {
                    continue;
                }
                any_candidate = true;
                let shift = d - 1 - r_deg;
                let shifted = st.h[j].mul_term(&ypow(ring.nvars(), y, shift), &ck.one());
                let (e, q, rr) = pseudo_divmod(&shifted, &st.h[0], y, &st.delta);
                let l = (1..k).find(|&l| l != j).expect("k >= 3 leaves a free slot");
                let candidate = &(&st.h[l] * &st.delta.pow(e + 1)) + &rr;
                let top = candidate.coeff_of_power(y, d - 1);
                if m.contains(&base_restrict(&top, &base)?) {
                    continue;
                }
                let de = st.delta.pow(e);
                let de1 = st.delta.pow(e + 1);
                st.col_scale(l, &de1);
                let mult = de.mul_term(&ypow(ring.nvars(), y, shift), &ck.one());
                st.col_add(j, l, &mult);
                st.col_sub(0, l, &q);
                debug_assert_eq!(st.h[l], candidate);
                committed = true;
                break 'scan;
            }
        }
        if !any_candidate {
            return Err(Error::NotUnimodularLocally);
        }
        if !committed {
            return Err(Error::Internal(
                "no surgery candidate survived verification".into(),
            ));
        }
    };

    let sol = LocalSolution {
        mat_num,
        den,
        den_factors: factors,
        max_ideal: m.clone(),
        row: row.to_vec(),
        y,
    };
    sol.verify()?;
    Ok((sol, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::CoeffKind;

    fn ring(kind: CoeffKind, vars: &[&str]) -> RingDesc {
        RingDesc::new(kind, vars.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    fn p(r: &RingDesc, s: &str) -> Poly {
        Poly::parse(r, s).unwrap()
    }

    fn zxy() -> (RingDesc, RingDesc) {
        let s = ring(CoeffKind::Z, &["x", "y"]);
        let a = ring(CoeffKind::Z, &["x"]);
        (s, a)
    }

    fn check_contract(sol: &LocalSolution) {
        sol.verify().unwrap();
    }

    #[test]
    fn reference_row_at_two_x() {
        let (s, a) = zxy();
        let row = vec![p(&s, "y^2"), p(&s, "2*x + 1"), p(&s, "x^5*y^2 + x")];
        let m = MaxIdeal::from_point_gens(&a, vec![p(&a, "2"), p(&a, "x")]).unwrap();
        let (sol, trace) = horrocks_with_trace(&row, 1, &m).unwrap();
        check_contract(&sol);
        assert_eq!(sol.den, p(&s, "2*x + 1"));
        assert!(trace.windows(2).all(|w| w[0] > w[1]), "trace {trace:?} not strictly decreasing");
        // First column of P is the solution column g with row * g = den.
        assert_eq!(sol.mat_num.get(0, 0), &Poly::zero(&s));
        assert_eq!(sol.mat_num.get(1, 0), &Poly::one(&s));
        assert_eq!(sol.mat_num.get(2, 0), &Poly::zero(&s));
    }

    #[test]
    fn reference_row_at_three_x_minus_one() {
        let (s, a) = zxy();
        let row = vec![p(&s, "y^2"), p(&s, "2*x + 1"), p(&s, "x^5*y^2 + x")];
        let m = MaxIdeal::from_point_gens(&a, vec![p(&a, "3"), p(&a, "x - 1")]).unwrap();
        let (sol, trace) = horrocks_with_trace(&row, 1, &m).unwrap();
        check_contract(&sol);
        assert_eq!(sol.den, p(&s, "x"));
        assert!(trace.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn unit_first_entry_gives_identity() {
        let (s, a) = zxy();
        let row = vec![Poly::one(&s), Poly::zero(&s)];
        let m = MaxIdeal::from_point_gens(&a, vec![p(&a, "2"), p(&a, "x")]).unwrap();
        let sol = horrocks(&row, 1, &m).unwrap();
        check_contract(&sol);
        assert!(sol.mat_num.is_identity());
        assert!(sol.den.is_one());
    }

    #[test]
    fn no_monic_entry_is_an_error() {
        let (s, a) = zxy();
        let row = vec![p(&s, "x*y"), p(&s, "2*y + 1")];
        let m = MaxIdeal::from_point_gens(&a, vec![p(&a, "2"), p(&a, "x")]).unwrap();
        assert!(matches!(horrocks(&row, 1, &m), Err(Error::NoMonicEntry(_))));
    }

    #[test]
    fn locally_non_unimodular_pair_is_detected() {
        let (s, a) = zxy();
        let row = vec![p(&s, "y"), p(&s, "x")];
        let m = MaxIdeal::from_point_gens(&a, vec![p(&a, "2"), p(&a, "x")]).unwrap();
        assert!(matches!(horrocks(&row, 1, &m), Err(Error::NotUnimodularLocally)));
    }

    #[test]
    fn pair_needs_multiplication_matrix_when_leading_coeffs_vanish() {
        // Leading coefficient of the second entry lies in m, but the pair
        // is still unimodular: the 2x2 completion path must run.
        let s = ring(CoeffKind::Q, &["x", "y"]);
        let a = ring(CoeffKind::Q, &["x"]);
        let row = vec![p(&s, "y^2"), p(&s, "x*y + 1")];
        let m = MaxIdeal::from_point_gens(&a, vec![p(&a, "x")]).unwrap();
        let sol = horrocks(&row, 1, &m).unwrap();
        check_contract(&sol);
        assert_eq!(sol.den, Poly::one(&s));
    }

    #[test]
    fn surgery_path_on_three_entries() {
        let s = ring(CoeffKind::Q, &["x", "y"]);
        let a = ring(CoeffKind::Q, &["x"]);
        let row = vec![p(&s, "y^2"), p(&s, "x*y + 1"), p(&s, "x")];
        let m = MaxIdeal::from_point_gens(&a, vec![p(&a, "x")]).unwrap();
        let (sol, trace) = horrocks_with_trace(&row, 1, &m).unwrap();
        check_contract(&sol);
        assert_eq!(sol.den, p(&s, "-x^2 + 1"));
        assert_eq!(trace, vec![2, 1, 0]);
    }

    #[test]
    fn single_entry_rows() {
        let (s, a) = zxy();
        let m = MaxIdeal::from_point_gens(&a, vec![p(&a, "2"), p(&a, "x")]).unwrap();
        let sol = horrocks(&[p(&s, "-1")], 1, &m).unwrap();
        check_contract(&sol);
        assert_eq!(sol.mat_num.get(0, 0), &p(&s, "-1"));
        assert!(matches!(
            horrocks(&[p(&s, "y + 2")], 1, &m),
            Err(Error::NotUnimodularLocally)
        ));
    }

    #[test]
    fn monic_after_constant_scaling() {
        // Leading coefficient -1 is a unit constant and must be accepted.
        let (s, a) = zxy();
        let row = vec![p(&s, "-y^2 + x"), p(&s, "2*x + 1"), p(&s, "x")];
        let m = MaxIdeal::from_point_gens(&a, vec![p(&a, "2"), p(&a, "x")]).unwrap();
        let sol = horrocks(&row, 1, &m).unwrap();
        check_contract(&sol);
    }

    #[test]
    fn longer_monic_degree_collapses_in_one_round() {
        let (s, a) = zxy();
        let row = vec![p(&s, "y^3"), p(&s, "2*x + 1"), p(&s, "x^2*y^5 + x")];
        let m = MaxIdeal::from_point_gens(&a, vec![p(&a, "2"), p(&a, "x")]).unwrap();
        let (sol, trace) = horrocks_with_trace(&row, 1, &m).unwrap();
        check_contract(&sol);
        assert_eq!(sol.den, p(&s, "2*x + 1"));
        assert_eq!(trace, vec![3, 0]);
    }
}
