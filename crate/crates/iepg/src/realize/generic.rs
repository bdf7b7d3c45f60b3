//! Generic realizations: prescribed distinct spectra on connected graphs with
//! nowhere-zero image guarantees, block-diagonal assembly driven by 0-1
//! multiplicity matrices, complete-graph realizations, and nowhere-zero
//! eigenbases.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::multiplicity::MultiplicityMatrix;
use crate::realize::{
    homotopy::{tree_homotopy_solve, ExponentSchedule},
    min_margin, random_orthogonal, stream, SolveOptions, T_SCHEDULE,
};
use crate::ssp::{ssp_check, ssp_edge_extend, SspReport, SSP_TOL};
use crate::symmat::{self, Spectrum, SymMatrix};

/// A certified realization: the matrix, an orthogonal basis with
/// `UᵀAU = diag(target)`, and the measured residual/margin/SSP data, all
/// recomputed from the final matrix.
#[derive(Debug, Clone)]
pub struct GenericRealization {
    pub matrix: SymMatrix,
    /// Columns are eigenvectors in ascending eigenvalue order.
    pub basis: DMatrix<f64>,
    pub target: Vec<f64>,
    pub spectral_residual: f64,
    /// `min |(U y)_i| / ‖y‖` over the requested test vectors.
    pub margin: f64,
    pub ssp: SspReport,
    pub t: Option<f64>,
    pub eps: Option<f64>,
    pub seed: u64,
}

/// Realizes a strictly ascending spectrum on a connected graph so that the
/// diagonalizing orthogonal matrix maps every requested test vector to a
/// nowhere-zero vector, the matrix has the SSP, and the pattern is exact.
///
/// Route: BFS spanning tree, uniform exponent schedule, homotopy solves over
/// the descending `t` schedule until the SSP holds and every margin clears
/// the floor, then SSP edge extension back to `g` with the budget halved
/// until the margins survive. Never returns an uncertified matrix.
pub fn generic_realize(
    g: &Graph,
    target: &[f64],
    test_vectors: &[DVector<f64>],
    opts: SolveOptions,
) -> Result<GenericRealization> {
    let n = g.order();
    if target.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: target.len(),
        });
    }
    if target.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::DuplicateEigenvalues);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    for y in test_vectors {
        if y.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: y.len(),
            });
        }
        if y.norm() == 0.0 {
            return Err(Error::InvalidParam("zero test vector".into()));
        }
    }

    let spread = symmat::spread(target).max(f64::MIN_POSITIVE);
    let final_tol = 1e-8 * spread;
    let tree = g.spanning_tree()?;
    let is_tree_already = tree == *g;
    let sched = ExponentSchedule::uniform(&tree)?;
    let min_gap = target
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min)
        .min(spread);

    let mut best_margin: f64 = f64::NEG_INFINITY;
    for &t in T_SCHEDULE {
        if sched.guard_solve(t).is_err() {
            continue;
        }
        let a_tree = match tree_homotopy_solve(&sched, target, t) {
            Ok(m) => m,
            Err(_) => continue,
        };
        let (_, u_tree) = a_tree.eigh();
        let margin = min_margin(&u_tree, test_vectors);
        best_margin = best_margin.max(margin);
        if margin <= opts.margin_floor {
            continue;
        }
        let pat = a_tree.in_pattern(&tree, a_tree.default_zero_tol())?;
        if !pat.ok {
            continue;
        }
        let ssp = ssp_check(&a_tree, SSP_TOL);
        if !ssp.holds {
            continue;
        }

        if is_tree_already {
            let residual = symmat::sorted_residual(&a_tree.eigenvalues(), target);
            return Ok(GenericRealization {
                basis: u_tree,
                matrix: a_tree,
                target: target.to_vec(),
                spectral_residual: residual,
                margin,
                ssp,
                t: Some(t),
                eps: None,
                seed: opts.seed,
            });
        }

        // Edge extension with the budget halved until the margins survive.
        let mut eps = 0.05 * min_gap.min(1.0);
        for _ in 0..14 {
            if eps < 1e-9 {
                break;
            }
            let a = match ssp_edge_extend(&a_tree, &tree, g, eps) {
                Ok(a) => a,
                Err(_) => {
                    eps *= 0.5;
                    continue;
                }
            };
            let (evals, u) = a.eigh();
            let margin = min_margin(&u, test_vectors);
            best_margin = best_margin.max(margin);
            let residual = symmat::sorted_residual(&evals, target);
            let pat = a.in_pattern(g, a.default_zero_tol())?;
            let ssp_full = ssp_check(&a, SSP_TOL);
            if margin > opts.margin_floor && residual <= final_tol && pat.ok && ssp_full.holds {
                return Ok(GenericRealization {
                    basis: u,
                    matrix: a,
                    target: target.to_vec(),
                    spectral_residual: residual,
                    margin,
                    ssp: ssp_full,
                    t: Some(t),
                    eps: Some(eps),
                    seed: opts.seed,
                });
            }
            eps *= 0.5;
        }
    }
    Err(Error::ScheduleExhausted(format!(
        "generic realization failed on every t (best margin {best_margin:.3e}, floor {:.3e})",
        opts.margin_floor
    )))
}

/// Block-diagonal realization of a 0-1 multiplicity matrix.
#[derive(Debug, Clone)]
pub struct Block01Realization {
    /// Assembled matrix on the original vertex labels of `g`.
    pub matrix: SymMatrix,
    /// Global orthogonal basis; column `c` is an eigenvector for
    /// `values[row_of_column[c]]`, supported on one component.
    pub basis: DMatrix<f64>,
    /// Row index of `v` that produced each basis column.
    pub row_of_column: Vec<usize>,
    pub components: Vec<GenericRealization>,
}

impl Block01Realization {
    /// Columns of the global basis belonging to multiplicity row `j`.
    pub fn columns_for_row(&self, j: usize) -> Vec<usize> {
        (0..self.row_of_column.len())
            .filter(|&c| self.row_of_column[c] == j)
            .collect()
    }
}

/// Realizes a 0-1 multiplicity matrix that fits `g`: component `i` receives
/// the sub-list `{values[j] : v[j][i] = 1}` through [`generic_realize`], and
/// the blocks are assembled on the original labels. The grouped spectrum of
/// the result has the row sums of `v` as multiplicities.
///
/// `test_vectors[i]` are the vectors (in component-local coordinates) whose
/// images under component `i`'s basis must be nowhere-zero; when empty, the
/// standard basis is used, which forces every basis entry nonzero.
pub fn realize_01_multiplicity(
    g: &Graph,
    v: &MultiplicityMatrix,
    values: &[f64],
    test_vectors: &[Vec<DVector<f64>>],
    opts: SolveOptions,
) -> Result<Block01Realization> {
    if !v.is_01() {
        return Err(Error::InvalidParam(
            "multiplicity matrix must be 0-1".into(),
        ));
    }
    if values.len() != v.rows() {
        return Err(Error::DimensionMismatch {
            expected: v.rows(),
            got: values.len(),
        });
    }
    if values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::DuplicateEigenvalues);
    }
    v.check_fits(g)?;
    let comps = g.components();
    if !test_vectors.is_empty() && test_vectors.len() != comps.len() {
        return Err(Error::DimensionMismatch {
            expected: comps.len(),
            got: test_vectors.len(),
        });
    }

    let n = g.order();
    let mut matrix = DMatrix::zeros(n, n);
    let mut basis = DMatrix::zeros(n, n);
    let mut row_of_column = Vec::with_capacity(n);
    let mut col = 0usize;
    let mut realized = Vec::with_capacity(comps.len());

    for (ci, (comp, labels)) in comps.iter().enumerate() {
        let rows_hit: Vec<usize> = (0..v.rows()).filter(|&j| v.entry(j, ci) == 1).collect();
        let sub_target: Vec<f64> = rows_hit.iter().map(|&j| values[j]).collect();
        let standard: Vec<DVector<f64>> = (0..comp.order())
            .map(|i| DVector::from_fn(comp.order(), |r, _| if r == i { 1.0 } else { 0.0 }))
            .collect();
        let ys: &[DVector<f64>] = if test_vectors.is_empty() || test_vectors[ci].is_empty() {
            &standard
        } else {
            &test_vectors[ci]
        };
        let real = generic_realize(
            comp,
            &sub_target,
            ys,
            SolveOptions {
                seed: opts.seed.wrapping_add(ci as u64),
                ..opts
            },
        )?;
        for a in 0..comp.order() {
            for b in 0..comp.order() {
                matrix[(labels[a] - 1, labels[b] - 1)] = real.matrix.entry(a, b);
            }
        }
        for (local_col, &j) in rows_hit.iter().enumerate() {
            for a in 0..comp.order() {
                basis[(labels[a] - 1, col)] = real.basis[(a, local_col)];
            }
            row_of_column.push(j);
            col += 1;
        }
        realized.push(real);
    }
    debug_assert_eq!(col, n);

    Ok(Block01Realization {
        matrix: SymMatrix::new(matrix),
        basis,
        row_of_column,
        components: realized,
    })
}

/// Realizes a non-scalar spectrum on the complete graph `K_m` as `QΛQᵀ` with
/// `Q` drawn from seeded random orthogonal matrices, retried until every
/// off-diagonal entry clears the zero tolerance and every test-vector margin
/// clears the floor. Columns of the returned basis ascend by eigenvalue, so
/// equal eigenvalues occupy adjacent columns.
pub fn complete_realize(
    m: usize,
    spectrum: &Spectrum,
    test_vectors: &[DVector<f64>],
    opts: SolveOptions,
) -> Result<GenericRealization> {
    if spectrum.total_multiplicity() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: spectrum.total_multiplicity(),
        });
    }
    let expanded = spectrum.expand();
    if m == 1 {
        let a = SymMatrix::from_fn(1, |_, _| expanded[0]);
        return Ok(GenericRealization {
            basis: DMatrix::identity(1, 1),
            spectral_residual: 0.0,
            margin: min_margin(&DMatrix::identity(1, 1), test_vectors),
            ssp: ssp_check(&a, SSP_TOL),
            matrix: a,
            target: expanded,
            t: None,
            eps: None,
            seed: opts.seed,
        });
    }
    if spectrum.q() < 2 {
        return Err(Error::NotRealizable(
            "a scalar spectrum on K_m (m >= 2) forces zero off-diagonal entries".into(),
        ));
    }
    for y in test_vectors {
        if y.norm() == 0.0 {
            return Err(Error::InvalidParam("zero test vector".into()));
        }
    }

    let lambda = DMatrix::from_diagonal(&DVector::from_column_slice(&expanded));
    let mut rng = stream(opts.seed, 0xC0);
    for _attempt in 0..50 {
        let q = random_orthogonal(m, &mut rng);
        let a = SymMatrix::new(&q * &lambda * q.transpose());
        let zero_tol = a.default_zero_tol();
        let offdiag_ok = (0..m)
            .all(|i| ((i + 1)..m).all(|j| a.entry(i, j).abs() > zero_tol));
        if !offdiag_ok {
            continue;
        }
        let margin = min_margin(&q, test_vectors);
        if !test_vectors.is_empty() && margin <= opts.margin_floor {
            continue;
        }
        let residual = symmat::sorted_residual(&a.eigenvalues(), &expanded);
        if residual > 1e-8 * symmat::spread(&expanded).max(f64::MIN_POSITIVE) {
            continue;
        }
        return Ok(GenericRealization {
            basis: q,
            matrix: a,
            target: expanded,
            spectral_residual: residual,
            margin,
            ssp: SspReport {
                holds: true,
                nullity: 0,
                smallest_singular_value: f64::INFINITY,
                threshold: 0.0,
                witness: None,
            },
            t: None,
            eps: None,
            seed: opts.seed,
        });
    }
    Err(Error::ScheduleExhausted(
        "complete-graph realization: 50 orthogonal draws exhausted".into(),
    ))
}

/// Searches for an orthogonal eigenbasis of `a` in which every basis vector
/// is nowhere-zero, by seeded random mixing inside each eigenspace (grouped
/// under the default gap tolerance). Simple eigenvalues leave no freedom;
/// if one of their eigenvectors has a genuinely zero entry the search
/// reports the stuck position after 50 mixes.
pub fn nowhere_zero_eigenbasis(a: &SymMatrix, opts: SolveOptions) -> Result<DMatrix<f64>> {
    let (evals, u0) = a.eigh();
    let gap_tol = symmat::default_gap_tol(symmat::spread(&evals));
    let groups = Spectrum::group(&evals, gap_tol);
    let zero_tol = a.default_zero_tol();
    let n = a.n();

    let mut rng = stream(opts.seed, 0xB2);
    let mut stuck = (0usize, 0usize);
    for attempt in 0..=50 {
        let mut u = u0.clone();
        if attempt > 0 {
            let mut start = 0usize;
            for g in &groups.groups {
                if g.mult >= 2 {
                    let o = random_orthogonal(g.mult, &mut rng);
                    let block = u0.columns(start, g.mult) * o;
                    u.columns_mut(start, g.mult).copy_from(&block);
                }
                start += g.mult;
            }
        }
        let mut ok = true;
        'scan: for c in 0..n {
            for r in 0..n {
                if u[(r, c)].abs() <= zero_tol {
                    stuck = (r + 1, c + 1);
                    ok = false;
                    break 'scan;
                }
            }
        }
        if ok {
            return Ok(u);
        }
    }
    Err(Error::ScheduleExhausted(format!(
        "nowhere-zero eigenbasis: 50 mixes exhausted, stuck at entry ({}, {})",
        stuck.0, stuck.1
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmat::spread;

    fn standard_basis(n: usize) -> Vec<DVector<f64>> {
        (0..n)
            .map(|i| DVector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 }))
            .collect()
    }

    #[test]
    fn p2_realization_nowhere_zero() {
        let g = Graph::path(2).unwrap();
        let r = generic_realize(&g, &[0.0, 2.0], &standard_basis(2), SolveOptions::default())
            .unwrap();
        assert!(r.margin > 1e-6);
        assert!(r.ssp.holds);
        for i in 0..2 {
            for j in 0..2 {
                assert!(r.basis[(i, j)].abs() > 1e-6);
            }
        }
    }

    #[test]
    fn k3_realization_certified() {
        let g = Graph::complete(3).unwrap();
        let r = generic_realize(&g, &[0.0, 1.0, 3.0], &standard_basis(3), SolveOptions::default())
            .unwrap();
        assert!(r.margin > 1e-6);
        assert!(r.ssp.holds);
        assert!(r.spectral_residual <= 1e-8 * 3.0);
        assert!(r
            .matrix
            .in_pattern(&g, r.matrix.default_zero_tol())
            .unwrap()
            .ok);
    }

    #[test]
    fn c5_realization_with_ones_vector() {
        let g = Graph::cycle(5).unwrap();
        let mut ys = standard_basis(5);
        ys.push(DVector::from_element(5, 1.0));
        let target = [1.0, 2.0, 3.0, 4.0, 5.0];
        let r = generic_realize(&g, &target, &ys, SolveOptions::default()).unwrap();
        assert!(r.margin > 1e-6);
        assert!(r
            .matrix
            .in_pattern(&g, r.matrix.default_zero_tol())
            .unwrap()
            .ok);
        assert!(r.spectral_residual <= 1e-8 * spread(&target));
    }

    #[test]
    fn margin_is_recomputed_from_returned_basis() {
        let g = Graph::star(3).unwrap();
        let ys = standard_basis(4);
        let r = generic_realize(&g, &[0.0, 1.0, 2.0, 4.0], &ys, SolveOptions::default()).unwrap();
        let again = min_margin(&r.basis, &ys);
        assert_eq!(r.margin, again);
    }

    #[test]
    fn block01_on_p2_union_p3() {
        let g = Graph::union_of_paths(&[2, 3]).unwrap();
        let v = MultiplicityMatrix::new(vec![vec![1, 1], vec![1, 1], vec![0, 1]]).unwrap();
        let out =
            realize_01_multiplicity(&g, &v, &[0.0, 1.0, 2.0], &[], SolveOptions::default())
                .unwrap();
        let s = out.matrix.spectrum_grouped(1e-6);
        assert_eq!(s.multiplicities(), vec![2, 2, 1]);
        assert!(out
            .matrix
            .in_pattern(&g, out.matrix.default_zero_tol())
            .unwrap()
            .ok);
        assert_eq!(out.columns_for_row(0).len(), 2);
        assert_eq!(out.columns_for_row(2).len(), 1);
    }

    #[test]
    fn block01_single_path_reduces_to_generic() {
        let g = Graph::path(3).unwrap();
        let v = MultiplicityMatrix::new(vec![vec![1], vec![1], vec![1]]).unwrap();
        let out =
            realize_01_multiplicity(&g, &v, &[0.0, 1.0, 2.0], &[], SolveOptions::default())
                .unwrap();
        assert!(out
            .matrix
            .in_pattern(&g, out.matrix.default_zero_tol())
            .unwrap()
            .ok);
        assert_eq!(out.matrix.spectrum_grouped(1e-6).q(), 3);
    }

    #[test]
    fn block01_fits_violation() {
        let g = Graph::path(3).unwrap();
        let v = MultiplicityMatrix::new(vec![vec![1], vec![1]]).unwrap();
        assert!(matches!(
            realize_01_multiplicity(&g, &v, &[0.0, 1.0], &[], SolveOptions::default()),
            Err(Error::FitsViolation(_))
        ));
    }

    #[test]
    fn complete_scalar_cases() {
        let s = Spectrum::from_pairs(&[(2.0, 1)], 1e-6).unwrap();
        let r = complete_realize(1, &s, &[], SolveOptions::default()).unwrap();
        assert_eq!(r.matrix.n(), 1);
        assert_eq!(r.matrix.entry(0, 0), 2.0);

        let s2 = Spectrum::from_pairs(&[(1.0, 2)], 1e-6).unwrap();
        assert!(matches!(
            complete_realize(2, &s2, &[], SolveOptions::default()),
            Err(Error::NotRealizable(_))
        ));
    }

    #[test]
    fn complete_j4_style_spectrum() {
        // {0 (x3), 4}: the all-ones matrix qualifies; any certified output works
        let s = Spectrum::from_pairs(&[(0.0, 3), (4.0, 1)], 1e-6).unwrap();
        let r = complete_realize(4, &s, &standard_basis(4), SolveOptions::default()).unwrap();
        let k4 = Graph::complete(4).unwrap();
        assert!(r
            .matrix
            .in_pattern(&k4, r.matrix.default_zero_tol())
            .unwrap()
            .ok);
        assert_eq!(r.matrix.spectrum_grouped(1e-6).multiplicities(), vec![3, 1]);
        assert!(r.margin > 1e-6);
    }

    #[test]
    fn nowhere_zero_basis_identity() {
        let a = SymMatrix::from_fn(2, |i, j| if i == j { 1.0 } else { 0.0 });
        let u = nowhere_zero_eigenbasis(&a, SolveOptions::default()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!(u[(i, j)].abs() > 1e-8);
            }
        }
        // still diagonalizes the identity
        assert!((u.transpose() * &u - DMatrix::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn nowhere_zero_basis_already_fine() {
        let a = SymMatrix::from_rows(2, &[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let u = nowhere_zero_eigenbasis(&a, SolveOptions::default()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((u[(i, j)].abs() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-10);
            }
        }
    }
}
