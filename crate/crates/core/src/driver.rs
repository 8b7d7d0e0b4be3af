//! Top-level solvers for the unimodular row and matrix problems.
//!
//! Given a unimodular row f (or matrix M) over S = R[x1..xn], produce a
//! square invertible V over S with f*V = e1 (or M*V = [I | 0]). Short rows
//! and rows with easy certificates are completed directly; everything else
//! goes through variable elimination, one variable per round, down to a
//! principal-ideal-domain base case. Built on top of that: completion of a
//! unimodular matrix to an invertible square one, free bases for kernels,
//! and a Fitting-ideal projectivity test for cokernels.

use crate::elim::{row_times, run_round};
use crate::error::{Error, Result};
use crate::groebner::{fitting_ideal, groebner, maximal_minors, one_certificate};
use crate::local::SearchBudget;
use crate::matrix::PolyMatrix;
use crate::poly::{MonomialOrder, Poly};
use crate::ring::CoeffKind;
use crate::snf;

/// A solved unimodular problem: V with M*V = [I | 0] and det V a unit.
#[derive(Debug, Clone)]
pub struct UnimodSolution {
    /// The square invertible transform.
    pub v: PolyMatrix,
    /// The product M*V, equal to [I | 0].
    pub certificate: PolyMatrix,
    /// det V, a unit constant.
    pub det_v: Poly,
}

/// Error unless the maximal minors of `m` generate the unit ideal; the
/// failing reduced basis is attached as evidence.
fn ensure_unimodular(m: &PolyMatrix) -> Result<()> {
    let minors: Vec<Poly> = maximal_minors(m)?.into_iter().map(|(_, d)| d).collect();
    let gb = groebner(&minors, MonomialOrder::Grevlex)?;
    match gb.express(&Poly::one(m.ring()))? {
        Some(_) => Ok(()),
        None => Err(Error::NotUnimodular { minors_basis: gb.gens_strings() }),
    }
}

fn validate_row(row: &[Poly]) -> Result<()> {
    if row.is_empty() {
        return Err(Error::ShapeError("empty row".into()));
    }
    let ring = row[0].ring();
    if row.iter().any(|f| f.ring() != ring) {
        return Err(Error::RingMismatch("row entries live in different rings".into()));
    }
    Ok(())
}

/// Finish from a unit constant at position j of row * v: swap it to the
/// front, scale it to 1, and clear the other entries by column operations.
fn solve_by_unit(row: &[Poly], mut v: PolyMatrix, j: usize) -> Result<PolyMatrix> {
    let ring = row[0].ring().clone();
    if j != 0 {
        v.col_swap(0, j);
    }
    let g = row_times(row, &v);
    let c = g[0]
        .as_constant()
        .ok_or_else(|| Error::Internal("pivot entry is not a constant".into()))?;
    if !c.is_one() {
        let cinv = ring.coeff().invert(&c)?;
        v.col_scale(0, &Poly::constant(&ring, cinv));
    }
    let g = row_times(row, &v);
    debug_assert!(g[0].is_one(), "pivot column must evaluate to one");
    for (l, gl) in g.iter().enumerate().skip(1) {
        if !gl.is_zero() {
            v.col_add(0, l, &gl.neg());
        }
    }
    Ok(v)
}

/// Search the entry pairs for cofactors a*f_i + b*f_j = 1 of total degree
/// at most one; on a hit, turn a third entry into 1 and finish from there.
fn pair_to_unit(row: &[Poly]) -> Result<Option<PolyMatrix>> {
    let n = row.len();
    if n < 3 {
        return Ok(None);
    }
    let ring = row[0].ring().clone();
    for i in 0..n {
        for j in i + 1..n {
            let cert = match one_certificate(&[row[i].clone(), row[j].clone()])? {
                Some(c) => c,
                None => continue,
            };
            if cert[0].total_degree() > 1 || cert[1].total_degree() > 1 {
                continue;
            }
            let l = (0..n).find(|t| *t != i && *t != j).expect("three entries at least");
            let mut v = PolyMatrix::identity(&ring, n);
            let w = &Poly::one(&ring) - &row[l];
            for (src, cof) in [(i, &cert[0]), (j, &cert[1])] {
                let mult = &w * cof;
                if !mult.is_zero() {
                    v.col_add(src, l, &mult);
                }
            }
            return solve_by_unit(row, v, l).map(Some);
        }
    }
    Ok(None)
}

/// Cofactor completion for a row of length two; the caller has already
/// established unimodularity, so a certificate must exist.
fn solve_length_two(row: &[Poly]) -> Result<PolyMatrix> {
    let ring = row[0].ring().clone();
    let cert = one_certificate(row)?.ok_or_else(|| {
        Error::Internal("unimodular length-2 row admits no certificate".into())
    })?;
    Ok(PolyMatrix::new(
        &ring,
        2,
        2,
        vec![cert[0].clone(), row[1].neg(), cert[1].clone(), row[0].clone()],
    ))
}

/// A direct completion bypassing elimination: a unit entry, a length-2
/// certificate, or a pair of entries with degree-<=1 cofactors. `None`
/// means no shortcut applies, not failure.
pub fn shortcuts(row: &[Poly]) -> Result<Option<PolyMatrix>> {
    validate_row(row)?;
    let ring = row[0].ring().clone();
    if let Some(j) = row.iter().position(|f| f.is_unit()) {
        let v = PolyMatrix::identity(&ring, row.len());
        return solve_by_unit(row, v, j).map(Some);
    }
    if row.len() == 1 {
        return Ok(None);
    }
    if row.len() == 2 {
        return match one_certificate(row)? {
            Some(_) => solve_length_two(row).map(Some),
            None => Ok(None),
        };
    }
    pair_to_unit(row)
}

/// The recursive solver; returns V with row * V = e1. Checks unimodularity
/// at every level so failures surface with evidence as early as possible.
fn row_transform(row: &[Poly], budget: &SearchBudget, use_shortcuts: bool) -> Result<PolyMatrix> {
    let ring = row[0].ring().clone();
    ensure_unimodular(&PolyMatrix::row_vector(&ring, row.to_vec()))?;
    if use_shortcuts {
        if let Some(v) = shortcuts(row)? {
            return Ok(v);
        }
    }
    let nv = ring.nvars();
    if nv == 0 {
        if let CoeffKind::Z = ring.coeff() {
            let ints = snf::int_row(row)?;
            let v = snf::solve_row_over_pid(&ints)?;
            return Ok(snf::int_mat_to_poly(&v, &ring));
        }
        // Constants over a field: a unimodular row has a nonzero entry.
        let j = row.iter().position(|f| f.is_unit()).ok_or_else(|| {
            Error::Internal("constant field row passed the unimodular check without a unit".into())
        })?;
        return solve_by_unit(row, PolyMatrix::identity(&ring, row.len()), j);
    }
    if row.len() <= 2 {
        if row.len() == 1 {
            // Unimodular and length one forces a unit entry.
            return solve_by_unit(row, PolyMatrix::identity(&ring, 1), 0);
        }
        return solve_length_two(row);
    }
    if nv == 1 && ring.is_field() {
        let ups = snf::unipoly_row(row)?;
        let v = snf::solve_row_over_pid(&ups)?;
        return Ok(snf::unipoly_mat_to_poly(&v));
    }
    // Eliminate the last variable, solve the shrunken row, and undo the
    // round's substitution; e1 is fixed by every step of the unwinding.
    let round = run_round(row, budget)?;
    let base = ring.without_var(&ring.vars()[nv - 1])?;
    let mut h = Vec::with_capacity(row.len());
    for f in &round.output {
        h.push(f.restrict(&base).map_err(|_| {
            Error::Internal("eliminated row still involves the dropped variable".into())
        })?);
    }
    let sub = row_transform(&h, budget, use_shortcuts)?;
    let t = round.patch.mul(&sub.extend(&ring));
    Ok(round.u1.mul(&t.substitute_inverse(&round.subst)))
}

/// Verify M * V = [I | 0] and det V a unit, then package the solution.
fn finalize(m: &PolyMatrix, v: PolyMatrix) -> Result<UnimodSolution> {
    let cert = m.mul(&v);
    for i in 0..cert.nrows() {
        for j in 0..cert.ncols() {
            let e = cert.get(i, j);
            let ok = if i == j { e.is_one() } else { e.is_zero() };
            if !ok {
                return Err(Error::Internal(format!(
                    "solution fails its certificate at ({i}, {j})"
                )));
            }
        }
    }
    let det_v = v.det()?;
    if !det_v.is_unit() {
        return Err(Error::Internal("solution determinant is not a unit".into()));
    }
    Ok(UnimodSolution { v, certificate: cert, det_v })
}

/// Solve the unimodular row problem: V with f * V = [1, 0, ..., 0].
pub fn qs_row(row: &[Poly]) -> Result<UnimodSolution> {
    qs_row_with_budget(row, &SearchBudget::default())
}

/// [`qs_row`] with an explicit point budget for the maximal-ideal searches.
pub fn qs_row_with_budget(row: &[Poly], budget: &SearchBudget) -> Result<UnimodSolution> {
    validate_row(row)?;
    let v = row_transform(row, budget, true)?;
    finalize(&PolyMatrix::row_vector(row[0].ring(), row.to_vec()), v)
}

fn matrix_transform(m: &PolyMatrix, budget: &SearchBudget) -> Result<PolyMatrix> {
    let (r, n) = (m.nrows(), m.ncols());
    let v1 = row_transform(&m.row(0), budget, true)?;
    if r == 1 {
        return Ok(v1);
    }
    let m1 = m.mul(&v1);
    let rows: Vec<usize> = (1..r).collect();
    let cols: Vec<usize> = (1..n).collect();
    let block = m1.submatrix(&rows, &cols);
    let vb = matrix_transform(&block, budget)?;
    let mut v = v1.mul(&vb.embed_lower_right(1));
    let mut prod = m.mul(&v);
    // prod is [I | 0] except for column 0 below the pivot; column i >= 1 is
    // e_i there, so adding multiples of it to column 0 clears row i alone.
    for i in 1..r {
        let c = prod.get(i, 0).clone();
        if !c.is_zero() {
            v.col_add(i, 0, &c.neg());
            prod.col_add(i, 0, &c.neg());
        }
    }
    Ok(v)
}

/// Solve the unimodular matrix problem: V with M * V = [I | 0].
pub fn qs_matrix(m: &PolyMatrix) -> Result<UnimodSolution> {
    qs_matrix_with_budget(m, &SearchBudget::default())
}

/// [`qs_matrix`] with an explicit point budget for the maximal-ideal searches.
pub fn qs_matrix_with_budget(m: &PolyMatrix, budget: &SearchBudget) -> Result<UnimodSolution> {
    let (r, n) = (m.nrows(), m.ncols());
    if r == 0 || n == 0 || r > n {
        return Err(Error::ShapeError(format!(
            "need 1 <= nrows <= ncols, got {r}x{n}"
        )));
    }
    ensure_unimodular(m)?;
    let v = matrix_transform(m, budget)?;
    finalize(m, v)
}

/// Complete a unimodular matrix to an invertible square one whose first
/// rows are the input.
pub fn complete_matrix(m: &PolyMatrix) -> Result<PolyMatrix> {
    complete_matrix_with_budget(m, &SearchBudget::default())
}

/// [`complete_matrix`] with an explicit search budget.
pub fn complete_matrix_with_budget(m: &PolyMatrix, budget: &SearchBudget) -> Result<PolyMatrix> {
    let sol = qs_matrix_with_budget(m, budget)?;
    let c = sol.v.inverse()?;
    // M * V = [I | 0] forces the first rows of V^{-1} to be M itself.
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if c.get(i, j) != m.get(i, j) {
                return Err(Error::Internal("completion does not extend the input".into()));
            }
        }
    }
    Ok(c)
}

/// The mutually inverse certificate pair for ker M: columns B of V past the
/// pivot block span the kernel, and the matching rows W of V^{-1} provide
/// the left inverse W * B = I.
pub fn qs_isomorphism(m: &PolyMatrix) -> Result<(PolyMatrix, PolyMatrix)> {
    qs_isomorphism_with_budget(m, &SearchBudget::default())
}

/// [`qs_isomorphism`] with an explicit search budget.
pub fn qs_isomorphism_with_budget(
    m: &PolyMatrix,
    budget: &SearchBudget,
) -> Result<(PolyMatrix, PolyMatrix)> {
    let sol = qs_matrix_with_budget(m, budget)?;
    let (r, n) = (m.nrows(), m.ncols());
    let vinv = sol.v.inverse()?;
    let all: Vec<usize> = (0..n).collect();
    let tail: Vec<usize> = (r..n).collect();
    let b = sol.v.submatrix(&all, &tail);
    let w = vinv.submatrix(&tail, &all);
    if !w.mul(&b).is_identity() {
        return Err(Error::Internal("kernel basis has no left inverse".into()));
    }
    if !m.mul(&b).is_zero() {
        return Err(Error::Internal("kernel basis does not annihilate the input".into()));
    }
    Ok((b, w))
}

/// A free basis for ker M, as the columns of an n x (n - m) matrix.
pub fn compute_free_basis(m: &PolyMatrix) -> Result<PolyMatrix> {
    compute_free_basis_with_budget(m, &SearchBudget::default())
}

/// [`compute_free_basis`] with an explicit search budget.
pub fn compute_free_basis_with_budget(
    m: &PolyMatrix,
    budget: &SearchBudget,
) -> Result<PolyMatrix> {
    qs_isomorphism_with_budget(m, budget).map(|(b, _)| b)
}

/// Is the cokernel of this presentation matrix projective? True exactly
/// when some Fitting ideal is the unit ideal while the one below is zero,
/// i.e. the cokernel has constant rank.
pub fn is_projective(p: &PolyMatrix) -> Result<bool> {
    for r in 0..=p.nrows() {
        let at = fitting_ideal(p, r)?;
        if one_certificate(&at)?.is_none() {
            continue;
        }
        let below_is_zero = match r {
            0 => true,
            _ => fitting_ideal(p, r - 1)?.iter().all(|g| g.is_zero()),
        };
        if below_is_zero {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingDesc;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ring(kind: CoeffKind, vars: &[&str]) -> RingDesc {
        RingDesc::new(kind, vars.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    fn row(r: &RingDesc, ss: &[&str]) -> Vec<Poly> {
        ss.iter().map(|s| Poly::parse(r, s).unwrap()).collect()
    }

    fn mat(r: &RingDesc, rows: &[&[&str]]) -> PolyMatrix {
        PolyMatrix::from_rows(
            r,
            rows.iter()
                .map(|rr| rr.iter().map(|s| Poly::parse(r, s).unwrap()).collect())
                .collect(),
        )
    }

    fn assert_first_unit_vector(prod: &PolyMatrix) {
        assert!(prod.get(0, 0).is_one(), "first entry must be 1");
        for j in 1..prod.ncols() {
            assert!(prod.get(0, j).is_zero(), "entry {j} must vanish");
        }
    }

    #[test]
    fn unit_entry_shortcut_clears_the_row() {
        let r = ring(CoeffKind::Q, &["x"]);
        let f = row(&r, &["3", "x", "x^2+1"]);
        let v = shortcuts(&f).unwrap().expect("unit entry applies");
        let prod = PolyMatrix::row_vector(&r, f.clone()).mul(&v);
        assert_first_unit_vector(&prod);
        assert!(v.det().unwrap().is_unit());
    }

    #[test]
    fn solved_rows_stay_at_the_identity() {
        let r = ring(CoeffKind::Z, &["x", "y"]);
        let f = row(&r, &["1", "0", "0"]);
        let v = shortcuts(&f).unwrap().expect("unit entry applies");
        assert!(v.is_identity());
        let sol = qs_row(&f).unwrap();
        assert!(sol.v.is_identity());
        assert!(sol.det_v.is_one());
    }

    #[test]
    fn length_two_shortcut_uses_certificate_cofactors() {
        let r = ring(CoeffKind::Q, &["x", "y"]);
        let f = row(&r, &["y", "-x*y+1"]);
        let v = shortcuts(&f).unwrap().expect("certificate completion applies");
        let prod = PolyMatrix::row_vector(&r, f.clone()).mul(&v);
        assert_first_unit_vector(&prod);
        assert!(v.det().unwrap().is_one());
    }

    #[test]
    fn shortcuts_are_absent_on_the_reference_row() {
        let r = ring(CoeffKind::Z, &["x", "y"]);
        let f = row(&r, &["x^2", "2*y+1", "x^5*y^2+y"]);
        assert!(shortcuts(&f).unwrap().is_none());
    }

    #[test]
    fn pair_certificate_shortcut_promotes_a_unit() {
        let r = ring(CoeffKind::Z, &["x"]);
        let f = row(&r, &["0", "2*x+1", "x"]);
        let v = shortcuts(&f).unwrap().expect("coprime pair applies");
        let prod = PolyMatrix::row_vector(&r, f.clone()).mul(&v);
        assert_first_unit_vector(&prod);
        assert!(v.det().unwrap().is_unit());
    }

    #[test]
    fn row_solution_for_the_reference_row() {
        let r = ring(CoeffKind::Z, &["x", "y"]);
        let f = row(&r, &["x^2", "2*y+1", "x^5*y^2+y"]);
        let sol = qs_row(&f).unwrap();
        assert_first_unit_vector(&sol.certificate);
        let d = sol.det_v.to_canonical_string();
        assert!(d == "1" || d == "-1", "integer determinant must be a sign, got {d}");
    }

    #[test]
    fn row_solution_in_swapped_coordinates() {
        let r = ring(CoeffKind::Z, &["x", "y"]);
        let f = row(&r, &["y^2", "2*x+1", "x^2*y^5+x"]);
        let sol = qs_row(&f).unwrap();
        assert_first_unit_vector(&sol.certificate);
        let d = sol.det_v.to_canonical_string();
        assert!(d == "1" || d == "-1", "integer determinant must be a sign, got {d}");
    }

    #[test]
    fn reference_transforms_satisfy_their_contracts() {
        let r = ring(CoeffKind::Z, &["x", "y"]);
        let original = mat(&r, &[&["x^2", "2*y+1", "x^5*y^2+y"]]);
        let swapped = mat(&r, &[&["y^2", "2*x+1", "x^2*y^5+x"]]);

        // Full solution of the original row: product e1, determinant -1.
        let v15 = mat(
            &r,
            &[
                &["2*x^3*y^2", "-2*x^5*y^2+1", "-2*x^8*y^4-2*x^3*y^3"],
                &["1", "-x^2", "-x^5*y^2-y"],
                &["-2", "2*x^2", "2*x^5*y^2+2*y+1"],
            ],
        );
        assert_first_unit_vector(&original.mul(&v15));
        assert_eq!(v15.det().unwrap().to_canonical_string(), "-1");

        // One elimination round applied to the swapped row: the product is
        // the row at y = 0 and the transform has determinant 1.
        let u13 = mat(
            &r,
            &[
                &["-32*x^6*y^5+1", "0", "8*x^5*y^3"],
                &[
                    "16*x^5*y^7-8*x^4*y^7+4*x^3*y^7+2*x*y^2-y^2",
                    "1",
                    "-4*x^4*y^5+2*x^3*y^5-x^2*y^5",
                ],
                &["-4*x*y^2", "0", "1"],
            ],
        );
        let at_zero = mat(&r, &[&["0", "2*x+1", "x"]]);
        assert_eq!(swapped.mul(&u13), at_zero);
        assert_eq!(u13.det().unwrap().to_canonical_string(), "1");

        // Completion of the swapped row: extends it with determinant -1.
        let c18 = mat(
            &r,
            &[
                &["y^2", "2*x+1", "x^2*y^5+x"],
                &["1", "-2*x^2*y^3", "0"],
                &["0", "2", "1"],
            ],
        );
        assert_eq!(c18.row(0), swapped.row(0));
        assert_eq!(c18.det().unwrap().to_canonical_string(), "-1");

        // Kernel basis for the original row: annihilated by it.
        let b28 = mat(
            &r,
            &[
                &["2*x^3*y^3+x^3*y^2", "2*x^5*y^2-1"],
                &["y", "x^2"],
                &["-2*y-1", "-2*x^2"],
            ],
        );
        assert!(original.mul(&b28).is_zero());
    }

    #[test]
    fn integer_row_with_no_coprime_pair_uses_the_base_case() {
        let r = ring(CoeffKind::Z, &[]);
        let f = row(&r, &["6", "10", "15"]);
        assert!(shortcuts(&f).unwrap().is_none());
        let sol = qs_row(&f).unwrap();
        assert_first_unit_vector(&sol.certificate);
        let d = sol.det_v.to_canonical_string();
        assert!(d == "1" || d == "-1");
    }

    #[test]
    fn univariate_row_with_no_coprime_pair_uses_the_base_case() {
        let r = ring(CoeffKind::Q, &["x"]);
        let f = row(&r, &["x^2-x", "x^2-2*x", "x^2-3*x+2"]);
        assert!(shortcuts(&f).unwrap().is_none());
        let sol = qs_row(&f).unwrap();
        assert_first_unit_vector(&sol.certificate);
        assert!(sol.det_v.is_unit());
    }

    #[test]
    fn matrix_identity_block_returns_the_identity() {
        let r = ring(CoeffKind::Zp(101), &["x", "y"]);
        let m = mat(&r, &[&["1", "0", "0"], &["0", "1", "0"]]);
        let sol = qs_matrix(&m).unwrap();
        assert!(sol.v.is_identity());
        assert_eq!(sol.certificate, m);
    }

    #[test]
    fn matrix_two_by_four_over_a_prime_field() {
        let r = ring(CoeffKind::Zp(101), &["x", "y"]);
        let mut m = mat(
            &r,
            &[&["1", "0", "0", "0"], &["0", "1", "0", "0"]],
        );
        let p = |s: &str| Poly::parse(&r, s).unwrap();
        m.col_add(0, 2, &p("x+1"));
        m.col_add(1, 3, &p("y^2"));
        m.col_add(2, 0, &p("x*y"));
        m.col_add(3, 1, &p("2"));
        let sol = qs_matrix(&m).unwrap();
        for i in 0..2 {
            for j in 0..4 {
                let e = sol.certificate.get(i, j);
                if i == j {
                    assert!(e.is_one());
                } else {
                    assert!(e.is_zero());
                }
            }
        }
        assert!(sol.det_v.is_unit());
    }

    #[test]
    fn completion_extends_the_reference_row() {
        let r = ring(CoeffKind::Z, &["x", "y"]);
        let m = mat(&r, &[&["x^2", "2*y+1", "x^5*y^2+y"]]);
        let c = complete_matrix(&m).unwrap();
        assert_eq!(c.row(0), m.row(0));
        let d = c.det().unwrap().to_canonical_string();
        assert!(d == "1" || d == "-1", "got determinant {d}");
    }

    #[test]
    fn completion_of_a_trivial_row_is_the_identity() {
        let r = ring(CoeffKind::Q, &["x"]);
        let m = mat(&r, &[&["1", "0"]]);
        assert!(complete_matrix(&m).unwrap().is_identity());
    }

    #[test]
    fn completion_of_an_integer_row() {
        let r = ring(CoeffKind::Z, &[]);
        let m = mat(&r, &[&["2", "3"]]);
        let c = complete_matrix(&m).unwrap();
        assert_eq!(c.row(0), m.row(0));
        let d = c.det().unwrap().to_canonical_string();
        assert!(d == "1" || d == "-1", "got determinant {d}");
    }

    #[test]
    fn free_basis_certifies_the_kernel() {
        let r = ring(CoeffKind::Z, &["x", "y"]);
        let m = mat(&r, &[&["x^2", "2*y+1", "x^5*y^2+y"]]);
        let (b, w) = qs_isomorphism(&m).unwrap();
        assert_eq!((b.nrows(), b.ncols()), (3, 2));
        assert!(m.mul(&b).is_zero());
        assert!(w.mul(&b).is_identity());
        assert_eq!(compute_free_basis(&m).unwrap(), b);
    }

    #[test]
    fn free_basis_on_solved_inputs_is_standard() {
        let r = ring(CoeffKind::Z, &["x", "y"]);
        let m = mat(&r, &[&["1", "0", "0"]]);
        let b = compute_free_basis(&m).unwrap();
        let expect = mat(&r, &[&["0", "0"], &["1", "0"], &["0", "1"]]);
        assert_eq!(b, expect);

        let m2 = mat(&r, &[&["1", "0", "0"], &["0", "1", "0"]]);
        let b2 = compute_free_basis(&m2).unwrap();
        let e3 = mat(&r, &[&["0"], &["0"], &["1"]]);
        assert_eq!(b2, e3);
    }

    #[test]
    fn isomorphism_certificate_for_a_short_row() {
        let r = ring(CoeffKind::Q, &["x"]);
        let m = mat(&r, &[&["1", "0"]]);
        let (b, w) = qs_isomorphism(&m).unwrap();
        assert_eq!(b, mat(&r, &[&["0"], &["1"]]));
        assert_eq!(w, mat(&r, &[&["0", "1"]]));
    }

    #[test]
    fn projectivity_of_cokernels() {
        let q = ring(CoeffKind::Q, &["x"]);
        assert!(is_projective(&mat(&q, &[&["1"]])).unwrap());
        assert!(!is_projective(&mat(&q, &[&["x"]])).unwrap());

        let z = ring(CoeffKind::Z, &["x", "y"]);
        let col = mat(&z, &[&["x^2"], &["2*y+1"], &["x^5*y^2+y"]]);
        assert!(is_projective(&col).unwrap());
    }

    #[test]
    fn zero_presentation_is_projective_and_torsion_is_not() {
        let z = ring(CoeffKind::Z, &["x"]);
        assert!(is_projective(&PolyMatrix::zero(&z, 2, 2)).unwrap());
        assert!(!is_projective(&mat(&z, &[&["2"]])).unwrap());
    }

    #[test]
    fn tiny_budget_surfaces_search_exhaustion() {
        let r = ring(CoeffKind::Z, &["x", "y"]);
        let f = row(&r, &["x^2", "2*y+1", "x^5*y^2+y"]);
        let budget = SearchBudget { max_points: 1 };
        match qs_row_with_budget(&f, &budget) {
            Err(Error::SearchExhausted(_)) => {}
            other => panic!("expected search exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn non_unimodular_inputs_fail_with_evidence() {
        let r = ring(CoeffKind::Z, &["x", "y"]);
        let f = row(&r, &["x", "y"]);
        match qs_row(&f) {
            Err(Error::NotUnimodular { minors_basis }) => {
                assert!(!minors_basis.is_empty());
            }
            other => panic!("expected unimodularity failure, got {other:?}"),
        }
        match qs_row(&row(&r, &["0"])) {
            Err(Error::NotUnimodular { .. }) => {}
            other => panic!("expected unimodularity failure, got {other:?}"),
        }
    }

    #[test]
    fn shortcut_and_elimination_paths_agree() {
        let r = ring(CoeffKind::Q, &["x", "y"]);
        let budget = SearchBudget::default();
        let p = |s: &str| Poly::parse(&r, s).unwrap();
        let monos = ["1", "x", "y"];
        let coeffs = ["1", "-1", "2"];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut agreements = 0;
        let mut attempts = 0;
        while agreements < 50 && attempts < 250 {
            attempts += 1;
            let mut m = PolyMatrix::identity(&r, 3);
            let ops = rng.gen_range(1..=3);
            for _ in 0..ops {
                let i = rng.gen_range(0..3);
                let mut j = rng.gen_range(0..3);
                while j == i {
                    j = rng.gen_range(0..3);
                }
                let mono = monos[rng.gen_range(0..monos.len())];
                let c = coeffs[rng.gen_range(0..coeffs.len())];
                m.col_add(i, j, &(&p(mono) * &p(c)));
            }
            let f = m.row(0);
            if shortcuts(&f).unwrap().is_none() {
                continue;
            }
            let fast = row_transform(&f, &budget, true).unwrap();
            let slow = row_transform(&f, &budget, false).unwrap();
            let fm = PolyMatrix::row_vector(&r, f.clone());
            for v in [&fast, &slow] {
                assert_first_unit_vector(&fm.mul(v));
                assert!(v.det().unwrap().is_unit());
            }
            agreements += 1;
        }
        assert!(agreements >= 50, "only {agreements} comparable rows in {attempts} draws");
    }
}
