//! The strong spectral property (SSP): certification and the
//! spectrum-preserving edge-addition perturbation it enables.
//!
//! A symmetric matrix `A` has the SSP when the only symmetric `X` with
//! `AX = XA`, zero diagonal, and zeros on the support of `A` is `X = 0`.
//! [`ssp_check`] decides this by the smallest singular value of the linear
//! map sending the free entries of `X` to the independent entries of the
//! commutator `AX - XA`. When `A` has the SSP and distinct eigenvalues,
//! [`ssp_edge_extend`] moves `A` into the pattern of any supergraph while
//! keeping its spectrum, with an explicit perturbation budget.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::symmat::{self, SymMatrix};

/// Result of an SSP check.
///
/// `holds` iff `nullity == 0`; when the check fails, `witness` is a
/// unit-Frobenius-norm kernel element reshaped into a symmetric matrix that
/// violates the SSP up to the reported tolerance.
#[derive(Debug, Clone)]
pub struct SspReport {
    pub holds: bool,
    pub nullity: usize,
    /// Smallest singular value of the constraint map; `f64::INFINITY` when
    /// the free-entry set is empty (vacuous SSP).
    pub smallest_singular_value: f64,
    pub threshold: f64,
    pub witness: Option<SymMatrix>,
}

/// Default relative kernel-detection threshold for [`ssp_check`].
pub const SSP_TOL: f64 = 1e-8;

/// Decides the SSP for `a`. The kernel threshold is `tol * ‖a‖_F`.
///
/// Free entries of `X` are the off-diagonal positions where `a` is
/// numerically zero (below `a.default_zero_tol()`). SSP is an open
/// condition; near-failures can be recognized from the reported singular
/// value.
pub fn ssp_check(a: &SymMatrix, tol: f64) -> SspReport {
    let n = a.n();
    let zero_tol = a.default_zero_tol();
    let free: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .filter(|&(i, j)| a.entry(i, j).abs() <= zero_tol)
        .collect();
    let threshold = tol * a.frobenius_norm();
    if free.is_empty() {
        return SspReport {
            holds: true,
            nullity: 0,
            smallest_singular_value: f64::INFINITY,
            threshold,
            witness: None,
        };
    }

    // Rows: upper-triangle entries of the commutator AX - XA (it is
    // skew-symmetric with zero diagonal, so these are independent).
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let mut b = DMatrix::zeros(pairs.len(), free.len());
    for (col, &(i, j)) in free.iter().enumerate() {
        for (row, &(p, q)) in pairs.iter().enumerate() {
            let mut c = 0.0;
            if q == j {
                c += a.entry(p, i);
            }
            if q == i {
                c += a.entry(p, j);
            }
            if p == i {
                c -= a.entry(j, q);
            }
            if p == j {
                c -= a.entry(i, q);
            }
            b[(row, col)] = c;
        }
    }

    let svd = b.svd(true, true);
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|x, y| x.total_cmp(y));
    let smallest = sv[0];
    let nullity = sv.iter().filter(|&&s| s <= threshold).count();
    let holds = nullity == 0 && smallest > threshold;

    let witness = if holds {
        None
    } else {
        // Right singular vector of the smallest singular value, reshaped so
        // that the witness has unit Frobenius norm.
        let v_t = svd.v_t.as_ref().expect("v requested");
        let idx = (0..svd.singular_values.len())
            .min_by(|&x, &y| svd.singular_values[x].total_cmp(&svd.singular_values[y]))
            .expect("non-empty");
        let v = v_t.row(idx);
        let mut x = DMatrix::zeros(n, n);
        let scale = std::f64::consts::FRAC_1_SQRT_2;
        for (col, &(i, j)) in free.iter().enumerate() {
            x[(i, j)] = v[col] * scale;
            x[(j, i)] = v[col] * scale;
        }
        Some(SymMatrix::new(x))
    };

    SspReport {
        holds,
        nullity,
        smallest_singular_value: smallest,
        threshold,
        witness,
    }
}

/// Spectrum-preserving edge addition.
///
/// Given `a ∈ S(g_sub)` with the SSP and distinct eigenvalues, returns
/// `A ∈ S(g_super)` with the same sorted eigenvalues (residual at most
/// `1e-9 * spread`), entrywise perturbation `max |A - a| <= eps`, and each
/// new-edge entry of magnitude at least `eps / 4`.
///
/// Method: new-edge entries are pinned at `+eps/2` and a Gauss-Newton
/// least-norm correction over the remaining free entries (diagonal and old
/// edges) drives the sorted-eigenvalue residual to zero. On non-convergence
/// the budget is halved and the solve retried; the best residual seen is
/// reported on failure.
pub fn ssp_edge_extend(
    a: &SymMatrix,
    g_sub: &Graph,
    g_super: &Graph,
    eps: f64,
) -> Result<SymMatrix> {
    let n = a.n();
    if g_sub.order() != n || g_super.order() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: g_sub.order().max(g_super.order()),
        });
    }
    if eps <= 0.0 {
        return Err(Error::InvalidParam("eps must be positive".into()));
    }
    if g_sub.edges().any(|(u, v)| !g_super.has_edge(u, v)) {
        return Err(Error::InvalidParam(
            "g_sub is not a spanning subgraph of g_super".into(),
        ));
    }
    let pat = a.in_pattern(g_sub, a.default_zero_tol())?;
    if !pat.ok {
        return Err(Error::InvalidParam("matrix is not in S(g_sub)".into()));
    }
    let new_edges: Vec<(usize, usize)> = g_super
        .edges()
        .filter(|&(u, v)| !g_sub.has_edge(u, v))
        .collect();
    if new_edges.is_empty() {
        return Ok(a.clone());
    }

    let target = a.eigenvalues();
    let spread = symmat::spread(&target).max(f64::MIN_POSITIVE);
    let gap_tol = symmat::default_gap_tol(spread);
    if target.windows(2).any(|w| w[1] - w[0] <= gap_tol) {
        return Err(Error::ClusteredEigenvalues(
            "edge extension needs distinct eigenvalues".into(),
        ));
    }
    let report = ssp_check(a, SSP_TOL);
    if !report.holds {
        return Err(Error::InvalidParam(format!(
            "matrix lacks the SSP (smallest singular value {:.3e})",
            report.smallest_singular_value
        )));
    }

    // Correction variables: diagonal entries then old edges (0-based pairs).
    let old_edges: Vec<(usize, usize)> = g_sub.edges().map(|(u, v)| (u - 1, v - 1)).collect();
    let residual_tol = 1e-9 * spread;

    let mut best_residual = f64::INFINITY;
    let mut cur_eps = eps;
    for _ in 0..10 {
        if let Some(m) = try_extend(
            a,
            &new_edges,
            &old_edges,
            &target,
            cur_eps,
            residual_tol,
            &mut best_residual,
        ) {
            return Ok(m);
        }
        cur_eps *= 0.5;
    }
    Err(Error::NoConvergence {
        residual: best_residual,
    })
}

fn try_extend(
    a: &SymMatrix,
    new_edges: &[(usize, usize)],
    old_edges: &[(usize, usize)],
    target: &[f64],
    eps: f64,
    residual_tol: f64,
    best_residual: &mut f64,
) -> Option<SymMatrix> {
    let n = a.n();
    let nvars = n + old_edges.len();
    let assemble = |x: &DVector<f64>| -> SymMatrix {
        let mut m = a.as_dmatrix().clone();
        for &(u, v) in new_edges {
            m[(u - 1, v - 1)] = eps / 2.0;
            m[(v - 1, u - 1)] = eps / 2.0;
        }
        for i in 0..n {
            m[(i, i)] += x[i];
        }
        for (k, &(i, j)) in old_edges.iter().enumerate() {
            m[(i, j)] += x[n + k];
            m[(j, i)] += x[n + k];
        }
        SymMatrix::new(m)
    };

    let mut x = DVector::zeros(nvars);
    let mut m = assemble(&x);
    let (_, mut u) = m.eigh();
    let mut res = residual_vec(&m.eigenvalues(), target);
    let mut res_norm = res.amax();

    for _ in 0..40 {
        if res_norm <= residual_tol {
            break;
        }
        // First-order eigenvalue sensitivities from eigenvector products.
        let mut jac = DMatrix::zeros(n, nvars);
        for k in 0..n {
            for i in 0..n {
                jac[(k, i)] = u[(i, k)] * u[(i, k)];
            }
            for (c, &(i, j)) in old_edges.iter().enumerate() {
                jac[(k, n + c)] = 2.0 * u[(i, k)] * u[(j, k)];
            }
        }
        let svd = jac.svd(true, true);
        let delta = match svd.solve(&(-&res), 1e-13) {
            Ok(d) => d,
            Err(_) => break,
        };
        // Damped acceptance.
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..10 {
            let x_new = &x + &delta * step;
            let m_new = assemble(&x_new);
            let (e_new, u_new) = m_new.eigh();
            let r_new = residual_vec(&e_new, target);
            if r_new.amax() < res_norm {
                x = x_new;
                m = m_new;
                u = u_new;
                res = r_new;
                res_norm = res.amax();
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    *best_residual = best_residual.min(res_norm);

    if res_norm <= residual_tol && x.amax() <= eps {
        Some(m)
    } else {
        None
    }
}

fn residual_vec(evals: &[f64], target: &[f64]) -> DVector<f64> {
    DVector::from_iterator(evals.len(), evals.iter().zip(target).map(|(e, t)| e - t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmat::sorted_residual;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn distinct_diagonal_holds() {
        let a = SymMatrix::from_rows(2, &[vec![1.0, 0.0], vec![0.0, 2.0]]).unwrap();
        let rep = ssp_check(&a, SSP_TOL);
        assert!(rep.holds);
        assert_eq!(rep.nullity, 0);
    }

    #[test]
    fn identity_fails_with_witness() {
        let a = SymMatrix::from_rows(2, &[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let rep = ssp_check(&a, SSP_TOL);
        assert!(!rep.holds);
        assert_eq!(rep.nullity, 1);
        let w = rep.witness.unwrap();
        // witness proportional to [[0,1],[1,0]] with unit Frobenius norm
        assert!((w.entry(0, 1).abs() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(w.entry(0, 0).abs() < 1e-12);
    }

    #[test]
    fn full_support_holds_vacuously() {
        let a = SymMatrix::from_rows(2, &[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let rep = ssp_check(&a, SSP_TOL);
        assert!(rep.holds);
        assert!(rep.smallest_singular_value.is_infinite());
    }

    #[test]
    fn witness_satisfies_defining_equations() {
        let a = SymMatrix::from_fn(3, |i, j| if i == j { 1.0 } else { 0.0 });
        let rep = ssp_check(&a, SSP_TOL);
        assert!(!rep.holds);
        let x = rep.witness.unwrap();
        let comm = a.as_dmatrix() * x.as_dmatrix() - x.as_dmatrix() * a.as_dmatrix();
        assert!(comm.norm() < 1e-10);
        for i in 0..3 {
            assert!(x.entry(i, i).abs() < 1e-12);
        }
        assert!((x.frobenius_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn shift_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let diag: Vec<f64> = (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let base = SymMatrix::from_fn(4, |i, j| {
            if i.abs_diff(j) == 1 {
                1.0
            } else if i == j {
                diag[i]
            } else {
                0.0
            }
        });
        let r0 = ssp_check(&base, SSP_TOL);
        for _ in 0..10 {
            let c: f64 = rng.gen_range(-3.0..3.0);
            let shifted =
                SymMatrix::from_fn(4, |i, j| base.entry(i, j) + if i == j { c } else { 0.0 });
            let r1 = ssp_check(&shifted, SSP_TOL);
            assert_eq!(r0.holds, r1.holds);
            assert_eq!(r0.nullity, r1.nullity);
            assert!(
                (r0.smallest_singular_value - r1.smallest_singular_value).abs() < 1e-9,
                "singular value shifted: {} vs {}",
                r0.smallest_singular_value,
                r1.smallest_singular_value
            );
        }
    }

    #[test]
    fn permutation_invariance() {
        let a = SymMatrix::from_rows(
            3,
            &[
                vec![1.0, 0.7, 0.0],
                vec![0.7, -0.5, 0.0],
                vec![0.0, 0.0, 2.0],
            ],
        )
        .unwrap();
        // relabel (1 2 3) -> (3 1 2)
        let p = [2usize, 0, 1];
        let ap = SymMatrix::from_fn(3, |i, j| a.entry(p[i], p[j]));
        let r0 = ssp_check(&a, SSP_TOL);
        let r1 = ssp_check(&ap, SSP_TOL);
        assert_eq!(r0.holds, r1.holds);
        assert!((r0.smallest_singular_value - r1.smallest_singular_value).abs() < 1e-9);
    }

    #[test]
    fn extend_identity_case() {
        let p3 = Graph::path(3).unwrap();
        let a = SymMatrix::from_fn(3, |i, j| {
            if i.abs_diff(j) == 1 {
                1.0
            } else if i == j {
                i as f64
            } else {
                0.0
            }
        });
        let out = ssp_edge_extend(&a, &p3, &p3, 0.1).unwrap();
        assert_eq!(out, a);
    }

    #[test]
    fn extend_p4_to_c4_preserves_spectrum() {
        let p4 = Graph::path(4).unwrap();
        let c4 = Graph::cycle(4).unwrap();
        // irreducible tridiagonal with spectrum {0,1,2,3}
        let a = crate::realize::jacobi_from_spectrum(&[0.0, 1.0, 2.0, 3.0]).unwrap();
        let target = a.eigenvalues();
        let out = ssp_edge_extend(&a, &p4, &c4, 0.05).unwrap();
        assert!(out.in_pattern(&c4, out.default_zero_tol()).unwrap().ok);
        let got = out.eigenvalues();
        assert!(sorted_residual(&got, &target) <= 1e-9 * symmat::spread(&target));
        // entrywise budget and new-edge floor
        let diff = out.as_dmatrix() - a.as_dmatrix();
        assert!(diff.amax() <= 0.05 + 1e-12);
        assert!(out.entry(0, 3).abs() >= 0.05 / 4.0);
    }

    #[test]
    fn extend_p3_to_k3() {
        let p3 = Graph::path(3).unwrap();
        let k3 = Graph::complete(3).unwrap();
        let a = crate::realize::jacobi_from_spectrum(&[0.0, 1.0, 3.0]).unwrap();
        let target = a.eigenvalues();
        let out = ssp_edge_extend(&a, &p3, &k3, 0.05).unwrap();
        assert!(out.in_pattern(&k3, out.default_zero_tol()).unwrap().ok);
        assert!(sorted_residual(&out.eigenvalues(), &target) <= 1e-9 * symmat::spread(&target));
    }
}
