//! The inverse eigenvalue problem on cycles.
//!
//! A sorted list is a cycle spectrum exactly when it matches one of the two
//! alternating weak/strict chains
//! `λ1 ≤ λ2 < λ3 ≤ λ4 < ...` or `λ1 < λ2 ≤ λ3 < λ4 ≤ ...`;
//! in particular multiplicities never exceed two. [`cycle_spectrum_check`]
//! decides the pattern, [`cycle_realize`] produces a certified matrix for
//! accepted lists.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::realize::{jacobi_from_spectrum, stream, SolveOptions};
use crate::ssp::ssp_edge_extend;
use crate::symmat::{self, SymMatrix};

/// Decides whether a sorted list (repeats allowed, compared exactly) matches
/// one of the two alternating weak/strict patterns. Needs `n >= 3`.
pub fn cycle_spectrum_check(lambdas: &[f64]) -> Result<bool> {
    if lambdas.len() < 3 {
        return Err(Error::InvalidParam("cycle spectra need n >= 3".into()));
    }
    if lambdas.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParam("input must be sorted ascending".into()));
    }
    // pattern 1: strict at even steps; pattern 2: strict at odd steps
    let strict_at = |parity: usize| {
        lambdas
            .windows(2)
            .enumerate()
            .all(|(k, w)| (k + 1) % 2 != parity || w[1] > w[0])
    };
    Ok(strict_at(0) || strict_at(1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleMethod {
    /// Tridiagonal reconstruction followed by SSP edge extension.
    DistinctViaPath,
    /// Structured Gauss-Newton over all diagonal and cycle-edge entries.
    RepeatedGaussNewton,
}

#[derive(Debug, Clone)]
pub struct CycleRealization {
    pub matrix: SymMatrix,
    pub spectral_residual: f64,
    pub method: CycleMethod,
    pub seed: u64,
}

/// Realizes an accepted cycle spectrum in `S(C_n)` with residual at most
/// `1e-8 * spread`.
///
/// Distinct lists go through the tridiagonal reconstruction and a
/// spectrum-preserving addition of the closing edge. Lists with repeats run
/// Gauss-Newton on all `2n` free entries, seeded from the symmetric
/// circulant whose cosine spectrum best matches the target (mean diagonal,
/// quarter-spread edge weight) and warm-started by alternating projections
/// between the isospectral set and the pattern; up to 20 seeded restarts.
pub fn cycle_realize(lambdas: &[f64], opts: SolveOptions) -> Result<CycleRealization> {
    if !cycle_spectrum_check(lambdas)? {
        return Err(Error::NotRealizable(
            "spectrum fails the alternating cycle pattern".into(),
        ));
    }
    let n = lambdas.len();
    let g = Graph::cycle(n)?;
    let spread = symmat::spread(lambdas).max(f64::MIN_POSITIVE);
    let accept_tol = 1e-8 * spread;
    let gap_tol = symmat::default_gap_tol(spread);
    let distinct = lambdas.windows(2).all(|w| w[1] - w[0] > gap_tol);

    if distinct {
        let path = Graph::path(n)?;
        let tridiag = jacobi_from_spectrum(lambdas)?;
        let min_gap = lambdas
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        let m = ssp_edge_extend(&tridiag, &path, &g, 0.05 * min_gap.min(1.0))?;
        let residual = symmat::sorted_residual(&m.eigenvalues(), lambdas);
        if residual > accept_tol {
            return Err(Error::NoConvergence { residual });
        }
        let pat = m.in_pattern(&g, m.default_zero_tol())?;
        if !pat.ok {
            return Err(Error::CertificateFailed(
                "cycle realization left the pattern".into(),
            ));
        }
        return Ok(CycleRealization {
            matrix: m,
            spectral_residual: residual,
            method: CycleMethod::DistinctViaPath,
            seed: opts.seed,
        });
    }

    // Repeated eigenvalues: Gauss-Newton on (diagonal, cycle edges).
    let mid = (lambdas[0] + lambdas[n - 1]) / 2.0;
    let amp = (lambdas[n - 1] - lambdas[0]) / 4.0;
    let mut rng = stream(opts.seed, 0xCE);
    let mut best_residual = f64::INFINITY;

    for restart in 0..20 {
        let mut d = DVector::from_element(n, mid);
        let mut c = DVector::from_element(n, amp);
        if restart > 0 {
            for i in 0..n {
                d[i] += 0.3 * spread * rng.gen_range(-1.0..1.0);
                c[i] += 0.3 * spread * rng.gen_range(-1.0..1.0);
            }
        }
        match polish_cycle(&g, lambdas, d, c, accept_tol, &mut best_residual) {
            Some(m) => {
                let residual = symmat::sorted_residual(&m.eigenvalues(), lambdas);
                return Ok(CycleRealization {
                    matrix: m,
                    spectral_residual: residual,
                    method: CycleMethod::RepeatedGaussNewton,
                    seed: opts.seed,
                });
            }
            None => continue,
        }
    }
    Err(Error::NoConvergence {
        residual: best_residual,
    })
}

fn assemble_cycle(n: usize, d: &DVector<f64>, c: &DVector<f64>) -> SymMatrix {
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = d[i];
        let j = (i + 1) % n;
        m[(i, j)] = c[i];
        m[(j, i)] = c[i];
    }
    SymMatrix::new(m)
}

fn polish_cycle(
    g: &Graph,
    target: &[f64],
    mut d: DVector<f64>,
    mut c: DVector<f64>,
    accept_tol: f64,
    best_residual: &mut f64,
) -> Option<SymMatrix> {
    let n = target.len();
    let target_diag = DMatrix::from_diagonal(&DVector::from_column_slice(target));

    // Alternating projections: replace the spectrum keeping the eigenbasis,
    // then project back onto the cycle pattern. Cheap and very tolerant of
    // poor seeds; hands a near-solution to Gauss-Newton.
    let mut res_prev = f64::INFINITY;
    for iter in 0..400 {
        let m = assemble_cycle(n, &d, &c);
        let (evals, u) = m.eigh();
        let res = symmat::sorted_residual(&evals, target);
        if res < 1e-3 * symmat::spread(target).max(f64::MIN_POSITIVE) {
            break;
        }
        if iter % 25 == 24 {
            if res > res_prev * 0.98 {
                break; // stalled
            }
            res_prev = res;
        }
        let b = &u * &target_diag * u.transpose();
        for i in 0..n {
            d[i] = b[(i, i)];
            c[i] = b[(i, (i + 1) % n)];
        }
    }

    // Gauss-Newton on the sorted-spectrum residual.
    let mut m = assemble_cycle(n, &d, &c);
    let (mut evals, mut u) = m.eigh();
    let mut res = DVector::from_iterator(n, evals.iter().zip(target).map(|(e, t)| e - t));
    let mut res_norm = res.amax();
    for _ in 0..80 {
        if res_norm <= 0.02 * accept_tol {
            break;
        }
        let mut jac = DMatrix::zeros(n, 2 * n);
        for k in 0..n {
            for i in 0..n {
                jac[(k, i)] = u[(i, k)] * u[(i, k)];
                let j = (i + 1) % n;
                jac[(k, n + i)] = 2.0 * u[(i, k)] * u[(j, k)];
            }
        }
        let delta = match jac.svd(true, true).solve(&(-&res), 1e-11) {
            Ok(x) => x,
            Err(_) => break,
        };
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..12 {
            let mut d_new = d.clone();
            let mut c_new = c.clone();
            for i in 0..n {
                d_new[i] += step * delta[i];
                c_new[i] += step * delta[n + i];
            }
            let m_new = assemble_cycle(n, &d_new, &c_new);
            let (e_new, u_new) = m_new.eigh();
            let r_new = DVector::from_iterator(n, e_new.iter().zip(target).map(|(e, t)| e - t));
            if r_new.amax() < res_norm {
                d = d_new;
                c = c_new;
                m = m_new;
                evals = e_new;
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
    let _ = evals;
    *best_residual = best_residual.min(res_norm);

    if res_norm > accept_tol {
        return None;
    }
    let pat = m.in_pattern(g, m.default_zero_tol()).ok()?;
    if !pat.ok {
        return None;
    }
    Some(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pattern_examples() {
        assert!(cycle_spectrum_check(&[1.0, 1.0, 2.0, 2.0]).unwrap());
        assert!(!cycle_spectrum_check(&[0.0, 0.0, 0.0, 1.0]).unwrap());
        assert!(cycle_spectrum_check(&[1.0, 2.0, 3.0]).unwrap());
    }

    #[test]
    fn pattern_needs_three() {
        assert!(cycle_spectrum_check(&[0.0, 1.0]).is_err());
    }

    #[test]
    fn rejected_before_numerics() {
        assert!(matches!(
            cycle_realize(&[0.0, 0.0, 0.0, 1.0], SolveOptions::default()),
            Err(Error::NotRealizable(_))
        ));
    }

    #[test]
    fn distinct_on_c3() {
        let r = cycle_realize(&[0.0, 1.0, 2.0], SolveOptions::default()).unwrap();
        assert_eq!(r.method, CycleMethod::DistinctViaPath);
        assert!(r.spectral_residual <= 1e-8 * 2.0);
        let g = Graph::cycle(3).unwrap();
        assert!(r
            .matrix
            .in_pattern(&g, r.matrix.default_zero_tol())
            .unwrap()
            .ok);
    }

    #[test]
    fn adjacency_spectrum_of_k3() {
        // {-1,-1,2} is realized by the all-ones off-diagonal pattern
        let r = cycle_realize(&[-1.0, -1.0, 2.0], SolveOptions::default()).unwrap();
        let s = r.matrix.spectrum_grouped(1e-6);
        assert_eq!(s.multiplicities(), vec![2, 1]);
    }

    #[test]
    fn doubled_spectrum_on_c6() {
        let lam = [0.0, 0.0, 1.0, 1.0, 3.0, 3.0];
        let r = cycle_realize(&lam, SolveOptions::default()).unwrap();
        assert_eq!(r.method, CycleMethod::RepeatedGaussNewton);
        assert!(r.spectral_residual <= 1e-8 * 3.0, "residual {}", r.spectral_residual);
        let g = Graph::cycle(6).unwrap();
        assert!(r
            .matrix
            .in_pattern(&g, r.matrix.default_zero_tol())
            .unwrap()
            .ok);
        assert_eq!(
            r.matrix.spectrum_grouped(1e-6).multiplicities(),
            vec![2, 2, 2]
        );
    }
}
