//! One full variable-elimination round for a unimodular row: normalize so
//! the first entry is monic in the last variable, solve locally at enough
//! maximal ideals, then patch the local solutions into one polynomial
//! transform U with f*U = f(..., 0).

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use crate::error::{Error, Result};
use crate::groebner::{groebner, one_certificate};
use crate::horrocks::horrocks;
use crate::local::{get_max_ideal, LocalSolution, SearchBudget};
use crate::matrix::PolyMatrix;
use crate::poly::{Monomial, MonomialOrder, Poly, Substitution};
use crate::ring::RingDesc;

/// Total elimination rounds run since process start (all computations).
static ROUNDS: AtomicU64 = AtomicU64::new(0);

pub fn rounds_run_total() -> u64 {
    ROUNDS.load(AtomicOrdering::Relaxed)
}

/// Caps for the bounded elementary-operation search used when no entry has
/// a unit leading coefficient and no Nagata substitution is available.
#[derive(Debug, Clone)]
pub struct ChangeVarLimits {
    /// Maximum number of candidate rows generated.
    pub max_nodes: usize,
    /// Maximum number of stacked elementary operations.
    pub max_depth: usize,
}

impl Default for ChangeVarLimits {
    fn default() -> Self {
        ChangeVarLimits { max_nodes: 60_000, max_depth: 3 }
    }
}

/// Row times matrix, as a plain vector.
pub(crate) fn row_times(row: &[Poly], m: &PolyMatrix) -> Vec<Poly> {
    let ring = row[0].ring().clone();
    let prod = PolyMatrix::row_vector(&ring, row.to_vec()).mul(m);
    (0..prod.ncols()).map(|j| prod.get(0, j).clone()).collect()
}

/// An entry position (entry, variable, leading coefficient) whose leading
/// coefficient in that variable is a unit constant. Entries are scanned in
/// order; variables from the last one down, so a row already monic in the
/// last variable is left untouched.
fn find_unit_leading(row: &[Poly]) -> Option<(usize, usize, crate::ring::Coeff)> {
    let ring = row[0].ring();
    let ck = ring.coeff();
    for (j, f) in row.iter().enumerate() {
        if f.is_zero() {
            continue;
        }
        for v in (0..ring.nvars()).rev() {
            if let Some(c) = f.leading_coeff_in(v).as_constant() {
                if ck.is_unit(&c) {
                    return Some((j, v, c));
                }
            }
        }
    }
    None
}

/// Column permutation/scaling moving entry `j` first with leading
/// coefficient 1, plus the variable swap bringing `v` last.
fn finish_direct(
    ring: &RingDesc,
    j: usize,
    v: usize,
    c: &crate::ring::Coeff,
    base: PolyMatrix,
) -> Result<(PolyMatrix, Substitution)> {
    let mut u1 = base;
    u1.col_swap(0, j);
    if !ring.coeff().is_unit(c) {
        return Err(Error::Internal("normalization picked a non-unit leading coefficient".into()));
    }
    let inv = ring.coeff().invert(c)?;
    let inv_poly = Poly::constant(ring, inv);
    if !inv_poly.is_one() {
        u1.col_scale(0, &inv_poly);
    }
    let s = Substitution::swap(ring, v, ring.nvars() - 1);
    Ok((u1, s))
}

/// All monomials of total degree at most 2.
fn low_degree_monomials(nvars: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut stack = vec![(vec![0u32; nvars], 0usize, 0u32)];
    while let Some((e, pos, deg)) = stack.pop() {
        if pos == nvars {
            out.push(Monomial(e));
            continue;
        }
        for d in 0..=(2 - deg) {
            let mut e2 = e.clone();
            e2[pos] = d;
            stack.push((e2, pos + 1, deg + d));
        }
    }
    out.sort_by(|a, b| (a.total_degree(), a.clone()).cmp(&(b.total_degree(), b.clone())));
    out
}

pub fn change_var(row: &[Poly]) -> Result<(PolyMatrix, Substitution)> {
    change_var_with_limits(row, &ChangeVarLimits::default())
}

/// Normalize a unimodular row so the first entry of the transformed row is
/// monic in the last variable after the returned substitution. Tries, in
/// order: reuse of an existing unit leading coefficient, a Nagata
/// substitution (field coefficients), and a bounded search over elementary
/// column operations (integer coefficients).
pub fn change_var_with_limits(
    row: &[Poly],
    limits: &ChangeVarLimits,
) -> Result<(PolyMatrix, Substitution)> {
    if row.is_empty() {
        return Err(Error::ShapeError("empty row".into()));
    }
    let ring = row[0].ring().clone();
    for f in row {
        if f.ring() != &ring {
            return Err(Error::RingMismatch("row entries over different rings".into()));
        }
    }
    if ring.nvars() == 0 {
        return Err(Error::ShapeError("normalization needs at least one variable".into()));
    }
    let min_len = if ring.is_field() { 2 } else { 3 };
    if row.len() < min_len {
        return Err(Error::RowTooShort(format!(
            "normalization over {} needs rows of length >= {min_len}, got {}",
            ring,
            row.len()
        )));
    }
    let result = if let Some((j, v, c)) = find_unit_leading(row) {
        finish_direct(&ring, j, v, &c, PolyMatrix::identity(&ring, row.len()))?
    } else if ring.is_field() {
        nagata_normalization(row)?
    } else {
        elementary_search(row, limits)?
    };
    let (u1, s) = &result;
    let transformed: Vec<Poly> = row_times(row, u1).iter().map(|f| s.apply(f)).collect();
    if !transformed[0].is_monic_in(ring.nvars() - 1) {
        return Err(Error::Internal("normalized first entry is not monic in the last variable".into()));
    }
    let det = u1.det()?;
    match det.as_constant() {
        Some(c) if ring.coeff().is_unit(&c) => {}
        _ => return Err(Error::Internal("normalization transform has non-unit determinant".into())),
    }
    Ok(result)
}

/// The shift substitution x_i -> x_i + z^(e_i) over the last variable z,
/// skipping zero exponents.
fn shift_substitution(ring: &RingDesc, exps: &[u32]) -> Result<Substitution> {
    let n = ring.nvars();
    let mut forward = BTreeMap::new();
    let mut inverse = BTreeMap::new();
    for (i, &e) in exps.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let mono = {
            let mut m = vec![0u32; n];
            m[n - 1] = e;
            Monomial(m)
        };
        let shift = Poly::term(ring, mono, ring.coeff().one());
        forward.insert(i, &Poly::var(ring, i) + &shift);
        inverse.insert(i, &Poly::var(ring, i) - &shift);
    }
    Substitution::new(ring, forward, inverse)
}

/// Exponent vectors in {0..=b}^k whose maximum is exactly b, in
/// lexicographic order.
fn shift_vectors(k: usize, b: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; k];
    fn fill(i: usize, b: u32, hit: bool, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() {
            if hit {
                out.push(cur.clone());
            }
            return;
        }
        for e in 0..=b {
            cur[i] = e;
            fill(i + 1, b, hit || e == b, cur, out);
        }
        cur[i] = 0;
    }
    fill(0, b, false, &mut cur, &mut out);
    out
}

/// Field coefficients: substitute x_i -> x_i + z^(e_i) (z the last
/// variable) so some entry gets a constant leading coefficient in z. Small
/// exponent vectors are searched first — the degree the whole round pays
/// for tracks the shift powers — and the degree-separating fallback
/// x_i -> x_i + z^(r^i) with r beyond the entry degree is guaranteed to
/// work when nothing small does.
fn nagata_normalization(row: &[Poly]) -> Result<(PolyMatrix, Substitution)> {
    let ring = row[0].ring().clone();
    let n = ring.nvars();
    if row.iter().all(|f| f.is_zero()) {
        return Err(Error::NormalizationExhausted("zero row cannot be normalized".into()));
    }
    let finish = |j0: usize, s: Substitution| -> Result<(PolyMatrix, Substitution)> {
        let c = s.apply(&row[j0]).leading_coeff_in(n - 1).as_constant().ok_or_else(|| {
            Error::Internal("substituted entry kept a non-constant leading coefficient".into())
        })?;
        let mut u1 = PolyMatrix::identity(&ring, row.len());
        u1.col_swap(0, j0);
        let inv_poly = Poly::constant(&ring, ring.coeff().invert(&c)?);
        if !inv_poly.is_one() {
            u1.col_scale(0, &inv_poly);
        }
        Ok((u1, s))
    };

    let entry_deg = |f: &Poly| f.terms().map(|(m, _)| m.total_degree()).max().unwrap_or(0);
    let maxdeg = row.iter().map(|f| entry_deg(f)).max().unwrap_or(0);
    let mut tested = 0usize;
    for bound in 1..=maxdeg + 1 {
        // Lowest resulting z-degree wins; ties keep the earliest candidate.
        let mut best: Option<(u32, usize, Substitution)> = None;
        for exps in shift_vectors(n - 1, bound) {
            tested += 1;
            if tested > 20_000 {
                break;
            }
            let s = shift_substitution(&ring, &exps)?;
            for (j, f) in row.iter().enumerate() {
                if f.is_zero() {
                    continue;
                }
                let g = s.apply(f);
                let Some(c) = g.leading_coeff_in(n - 1).as_constant() else {
                    continue;
                };
                if !ring.coeff().is_unit(&c) {
                    continue;
                }
                let zdeg = g.degree_in(n - 1);
                if best.as_ref().map_or(true, |(d, _, _)| zdeg < *d) {
                    best = Some((zdeg, j, s.clone()));
                }
            }
        }
        if let Some((_, j0, s)) = best {
            return finish(j0, s);
        }
        if tested > 20_000 {
            break;
        }
    }

    // Guaranteed fallback: separate the monomials of the lowest-degree
    // entry into distinct powers of z.
    let j0 = (0..row.len())
        .filter(|&j| !row[j].is_zero())
        .min_by_key(|&j| (entry_deg(&row[j]), j))
        .expect("a nonzero entry exists");
    let r = entry_deg(&row[j0]) + 1;
    let mut exps = vec![0u32; n - 1];
    for (i, e) in exps.iter_mut().enumerate() {
        *e = r
            .checked_pow(i as u32 + 1)
            .ok_or_else(|| Error::NormalizationExhausted("substitution exponent overflow".into()))?;
    }
    finish(j0, shift_substitution(&ring, &exps)?)
}

/// Integer coefficients: breadth-first search over elementary column
/// operations col_j += c*m*col_i with |c| <= 3 and deg m <= 2, looking for
/// a row with a unit leading coefficient somewhere.
fn elementary_search(
    row: &[Poly],
    limits: &ChangeVarLimits,
) -> Result<(PolyMatrix, Substitution)> {
    let ring = row[0].ring().clone();
    let k = row.len();
    let mut multipliers = Vec::new();
    for mono in low_degree_monomials(ring.nvars()) {
        for lam in [1i64, -1, 2, -2, 3, -3] {
            multipliers.push(Poly::term(&ring, mono.clone(), ring.coeff().from_i64(lam)));
        }
    }
    // The cofactors certifying unimodularity widen the pool beyond single
    // terms: one column operation with such a multiplier can undo a step
    // of whatever elementary product built the row.
    if let Ok(Some(cofs)) = one_certificate(row) {
        let known: HashSet<String> =
            multipliers.iter().map(|m| m.to_canonical_string()).collect();
        for c in cofs {
            if c.is_zero() || known.contains(&c.to_canonical_string()) {
                continue;
            }
            multipliers.push(c.neg());
            multipliers.push(c);
        }
    }
    let key = |r: &[Poly]| -> String {
        r.iter().map(|f| f.to_canonical_string()).collect::<Vec<_>>().join(" | ")
    };
    let mut seen = HashSet::new();
    seen.insert(key(row));
    let mut queue: VecDeque<(Vec<Poly>, Vec<(usize, usize, Poly)>)> = VecDeque::new();
    queue.push_back((row.to_vec(), Vec::new()));
    let mut nodes = 0usize;
    while let Some((state, ops)) = queue.pop_front() {
        if ops.len() >= limits.max_depth {
            continue;
        }
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    continue;
                }
                for m in &multipliers {
                    nodes += 1;
                    if nodes > limits.max_nodes {
                        return Err(Error::NormalizationExhausted(format!(
                            "no unit leading coefficient within {} elementary-operation candidates",
                            limits.max_nodes
                        )));
                    }
                    let mut next = state.clone();
                    next[j] = &next[j] + &(&state[i] * m);
                    // Goal check at generation time keeps the frontier from
                    // drowning shallow successes in breadth.
                    if let Some((jf, v, c)) = find_unit_leading(&next) {
                        let mut u1 = PolyMatrix::identity(&ring, k);
                        for (ii, jj, mm) in &ops {
                            u1.col_add(*ii, *jj, mm);
                        }
                        u1.col_add(i, j, m);
                        return finish_direct(&ring, jf, v, &c, u1);
                    }
                    let kk = key(&next);
                    if seen.insert(kk) {
                        let mut ops2 = ops.clone();
                        ops2.push((i, j, m.clone()));
                        queue.push_back((next, ops2));
                    }
                }
            }
        }
    }
    Err(Error::NormalizationExhausted(format!(
        "no unit leading coefficient within {} stacked elementary operations",
        limits.max_depth
    )))
}

/// Localize-and-solve until the collected denominators generate the unit
/// ideal of the base ring: repeatedly pick a maximal ideal containing the
/// denominators found so far and solve there.
pub fn local_loop(
    row: &[Poly],
    y: usize,
    budget: &SearchBudget,
) -> Result<Vec<LocalSolution>> {
    if row.is_empty() {
        return Err(Error::ShapeError("empty row".into()));
    }
    let ring = row[0].ring().clone();
    let base = ring.without_var(&ring.vars()[y].clone())?;
    let mut gens: Vec<Poly> = Vec::new();
    let mut sols = Vec::new();
    for _ in 0..64 {
        if !gens.is_empty() && one_certificate(&gens)?.is_some() {
            return Ok(sols);
        }
        let m = get_max_ideal(&base, &gens, budget)?;
        let sol = horrocks(row, y, &m)?;
        let d = sol.den.restrict(&base)?;
        if !gens.is_empty() {
            // Strict ideal growth: the new denominator avoids the maximal
            // ideal chosen over the previous ones, so it cannot reduce to 0.
            let gb = groebner(&gens, MonomialOrder::Grevlex)?;
            if gb.reduce(&d).0.is_zero() {
                return Err(Error::Internal(
                    "new local denominator already lies in the accumulated ideal".into(),
                ));
            }
        }
        gens.push(d);
        sols.push(sol);
    }
    Err(Error::Internal("local loop failed to reach the unit ideal in 64 rounds".into()))
}

/// L(y)*L(y + den^n z)^{-1} cleared of denominators, over the extended
/// ring; None when den^n is not yet enough to clear them.
fn transition_matrix(
    sol: &LocalSolution,
    n: u32,
    ext: &RingDesc,
    zidx: usize,
) -> Result<Option<PolyMatrix>> {
    let detp = sol.mat_num.det()?;
    let p_ext = sol.mat_num.extend(ext);
    let dpow = sol.den.pow(n).extend(ext);
    let w = &Poly::var(ext, sol.y) + &(&dpow * &Poly::var(ext, zidx));
    let p_shift = p_ext.eval_var(sol.y, &w);
    let numer = p_ext.mul(&p_shift.adjugate()?);
    let det_ext = detp.extend(ext);
    let mut entries = Vec::with_capacity(numer.nrows() * numer.ncols());
    for i in 0..numer.nrows() {
        for j in 0..numer.ncols() {
            match numer.get(i, j).exact_div(&det_ext) {
                Some(q) => entries.push(q),
                None => return Ok(None),
            }
        }
    }
    Ok(Some(PolyMatrix::new(ext, numer.nrows(), numer.ncols(), entries)))
}

/// Combine local solutions into one polynomial transform U with
/// row * U = row|_{y=0}, det U = 1. The denominators' powers must generate
/// the unit ideal of the base ring.
pub fn patch(solutions: &[LocalSolution], y: usize) -> Result<PolyMatrix> {
    let Some(first) = solutions.first() else {
        return Err(Error::ShapeError("no local solutions to patch".into()));
    };
    let ring = first.mat_num.ring().clone();
    let row = first.row.clone();
    let k = row.len();
    for sol in solutions {
        if sol.mat_num.ring() != &ring || sol.y != y || sol.row != row {
            return Err(Error::RingMismatch(
                "local solutions disagree on ring, row, or variable".into(),
            ));
        }
    }
    // Fresh variable for the shift amount.
    let mut zname = String::from("z");
    let mut suffix = 0;
    while ring.var_index(&zname).is_some() {
        suffix += 1;
        zname = format!("z{suffix}");
    }
    let ext = ring.with_extra_var(&zname);
    let zidx = ext.nvars() - 1;

    // Smallest power of each denominator that clears the fractions, then a
    // single uniform exponent.
    let mut nmax = 0u32;
    for sol in solutions {
        let maxdeg = (0..k)
            .flat_map(|i| (0..k).map(move |j| sol.mat_num.get(i, j).degree_in(y)))
            .max()
            .unwrap_or(0);
        let cap = 2 * maxdeg + 2;
        let mut found = None;
        for n in 1..=cap {
            if transition_matrix(sol, n, &ext, zidx)?.is_some() {
                found = Some(n);
                break;
            }
        }
        match found {
            Some(n) => nmax = nmax.max(n),
            None => {
                return Err(Error::Internal(
                    "no denominator power within the degree cap clears the transition matrix".into(),
                ))
            }
        }
    }

    let base = ring.without_var(&ring.vars()[y].clone())?;
    let powers: Vec<Poly> = solutions
        .iter()
        .map(|s| s.den.pow(nmax).restrict(&base))
        .collect::<Result<_>>()?;
    let Some(cofactors) = one_certificate(&powers)? else {
        return Err(Error::DenominatorsNotComaximal);
    };

    // Telescope y down to 0: after step j the row argument is (1 - s_j)*y
    // with s_j the partial cofactor sum.
    let yvar = Poly::var(&ring, y);
    let one = Poly::one(&ring);
    let mut partial = Poly::zero(&ring);
    let mut u = PolyMatrix::identity(&ring, k);
    for (sol, c) in solutions.iter().zip(&cofactors) {
        let g = transition_matrix(sol, nmax, &ext, zidx)?.ok_or_else(|| {
            Error::Internal("uniform denominator power failed to clear a transition matrix".into())
        })?;
        let c_ext = c.extend(&ring);
        let y_arg = &(&one - &partial) * &yvar;
        let z_arg = (&c_ext * &yvar).neg();
        let g = g.eval_var(y, &y_arg.extend(&ext));
        let g = g.eval_var(zidx, &z_arg.extend(&ext));
        u = u.mul(&g.restrict(&ring)?);
        partial = &partial + &(&c_ext * &sol.den.pow(nmax));
    }
    if partial != one {
        return Err(Error::Internal("cofactor telescope did not sum to 1".into()));
    }

    let lhs = row_times(&row, &u);
    for (j, f) in row.iter().enumerate() {
        if lhs[j] != f.eval_at_zero(y) {
            return Err(Error::Internal(format!(
                "patched transform fails row*U = row(0) at entry {j}"
            )));
        }
    }
    if u.det()? != one {
        return Err(Error::Internal("patched transform determinant is not 1".into()));
    }
    Ok(u)
}

/// The full record of one elimination round.
#[derive(Debug, Clone)]
pub struct EliminationRound {
    /// The row handed in.
    pub input: Vec<Poly>,
    /// Column normalization applied before the substitution.
    pub u1: PolyMatrix,
    /// The recorded change of variables.
    pub subst: Substitution,
    /// subst(input * u1): first entry monic in the last variable.
    pub normalized: Vec<Poly>,
    pub solutions: Vec<LocalSolution>,
    /// Polynomial transform with normalized * patch = output, det 1.
    pub patch: PolyMatrix,
    /// The normalized row with the last variable set to 0.
    pub output: Vec<Poly>,
}

/// Run one complete round: normalize, localize, patch.
pub fn run_round(row: &[Poly], budget: &SearchBudget) -> Result<EliminationRound> {
    ROUNDS.fetch_add(1, AtomicOrdering::Relaxed);
    let (u1, subst) = change_var(row)?;
    let ring = row[0].ring().clone();
    let y = ring.nvars() - 1;
    let normalized: Vec<Poly> = row_times(row, &u1).iter().map(|f| subst.apply(f)).collect();
    let solutions = local_loop(&normalized, y, budget)?;
    let patch_mat = patch(&solutions, y)?;
    let output: Vec<Poly> = normalized.iter().map(|f| f.eval_at_zero(y)).collect();
    Ok(EliminationRound {
        input: row.to_vec(),
        u1,
        subst,
        normalized,
        solutions,
        patch: patch_mat,
        output,
    })
}
