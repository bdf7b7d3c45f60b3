//! Realization certificates and their independent verification.
//!
//! A certificate packages a matrix together with its graph, the claimed
//! grouped spectrum, an orthogonal diagonalizing basis, the test vectors
//! whose images must be nowhere-zero, and the parameters of the run. It is
//! only ever built after the residuals are measured from the final matrix;
//! [`verify`] recomputes every check from the embedded matrix and never
//! trusts stored numbers.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::realize::min_margin;
use crate::ssp::{ssp_check, SspReport, SSP_TOL};
use crate::symmat::{self, SpectrumGroup, SymMatrix};

/// Tolerances and reproducibility parameters of a run, embedded in every
/// certificate so that verification is self-contained.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunParams {
    pub seed: u64,
    /// Homotopy parameter actually used, when the tree route ran.
    pub t: Option<f64>,
    /// Edge-extension budget actually used, when an extension ran.
    pub eps: Option<f64>,
    pub zero_tol: f64,
    pub gap_tol: f64,
    /// Relative spectral tolerance: residuals are compared against
    /// `spectral_tol * spread`.
    pub spectral_tol: f64,
}

/// SSP status summary; `smallest_singular_value` is `None` when the
/// free-entry set was empty (vacuously certified).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SspSummary {
    pub holds: bool,
    pub nullity: usize,
    pub smallest_singular_value: Option<f64>,
}

impl From<&SspReport> for SspSummary {
    fn from(r: &SspReport) -> SspSummary {
        SspSummary {
            holds: r.holds,
            nullity: r.nullity,
            smallest_singular_value: if r.smallest_singular_value.is_finite() {
                Some(r.smallest_singular_value)
            } else {
                None
            },
        }
    }
}

/// A matrix, its graph, and the measured evidence that the construction
/// succeeded. Only emitted when the pattern is exact and the spectral
/// residual is inside tolerance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RealizationCertificate {
    /// Construction kind: "generic", "block01", "complete", "cycle",
    /// "ssp_extend", "join2", "partial_join", or a scenario name.
    pub kind: String,
    pub graph: Graph,
    pub matrix: SymMatrix,
    /// Claimed grouped spectrum, ascending.
    pub target: Vec<SpectrumGroup>,
    /// Orthogonal basis with `UᵀMU = diag(expanded target)`, columns in
    /// ascending eigenvalue order (rows of the JSON array are matrix rows).
    pub basis: Option<Vec<Vec<f64>>>,
    /// Test vectors (eigen-coefficient coordinates) whose images under the
    /// basis are certified nowhere-zero.
    pub test_vectors: Vec<Vec<f64>>,
    pub spectral_residual: f64,
    pub pattern_ok: bool,
    /// Smallest `|entry| - zero_tol` over edges; `None` when there are none.
    pub min_edge_margin: Option<f64>,
    /// `min |(U y)_i| / ‖y‖` over the test vectors, when any were requested.
    pub nowhere_zero_margin: Option<f64>,
    pub ssp: Option<SspSummary>,
    pub params: RunParams,
}

impl RealizationCertificate {
    /// Measures every certificate field from `matrix` and builds the
    /// certificate, failing when the pattern or the spectral residual is out
    /// of tolerance.
    #[allow(clippy::too_many_arguments)]
    pub fn build(
        kind: &str,
        graph: Graph,
        matrix: SymMatrix,
        target: Vec<SpectrumGroup>,
        basis: Option<DMatrix<f64>>,
        test_vectors: Vec<DVector<f64>>,
        ssp: Option<&SspReport>,
        params: RunParams,
    ) -> Result<RealizationCertificate> {
        let expanded: Vec<f64> = target
            .iter()
            .flat_map(|g| std::iter::repeat(g.value).take(g.mult))
            .collect();
        if expanded.len() != matrix.n() {
            return Err(Error::DimensionMismatch {
                expected: matrix.n(),
                got: expanded.len(),
            });
        }
        let spread = symmat::spread(&expanded).max(f64::MIN_POSITIVE);
        let evals = matrix.eigenvalues();
        let spectral_residual = symmat::sorted_residual(&evals, &expanded);
        if spectral_residual > params.spectral_tol * spread {
            return Err(Error::CertificateFailed(format!(
                "spectral residual {spectral_residual:.3e} exceeds {:.3e}",
                params.spectral_tol * spread
            )));
        }
        let pattern = matrix.in_pattern(&graph, params.zero_tol)?;
        if !pattern.ok {
            return Err(Error::CertificateFailed(format!(
                "{} pattern violations",
                pattern.violations.len()
            )));
        }
        let nowhere_zero_margin = match (&basis, test_vectors.is_empty()) {
            (Some(u), false) => Some(min_margin(u, &test_vectors)),
            _ => None,
        };
        if let Some(m) = nowhere_zero_margin {
            if m <= 0.0 {
                return Err(Error::CertificateFailed(
                    "vanishing nowhere-zero margin".into(),
                ));
            }
        }
        Ok(RealizationCertificate {
            kind: kind.to_string(),
            graph,
            min_edge_margin: if pattern.min_edge_margin.is_finite() {
                Some(pattern.min_edge_margin)
            } else {
                None
            },
            pattern_ok: pattern.ok,
            basis: basis.map(|u| {
                (0..u.nrows())
                    .map(|i| (0..u.ncols()).map(|j| u[(i, j)]).collect())
                    .collect()
            }),
            test_vectors: test_vectors
                .iter()
                .map(|y| y.iter().copied().collect())
                .collect(),
            spectral_residual,
            nowhere_zero_margin,
            ssp: ssp.map(SspSummary::from),
            matrix,
            target,
            params,
        })
    }

    pub fn expanded_target(&self) -> Vec<f64> {
        self.target
            .iter()
            .flat_map(|g| std::iter::repeat(g.value).take(g.mult))
            .collect()
    }

    pub fn basis_matrix(&self) -> Option<DMatrix<f64>> {
        self.basis
            .as_ref()
            .map(|rows| DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j]))
    }
}

/// Outcome of an independent re-check of a certificate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub pattern_ok: bool,
    /// Sorted eigenvalues match the expanded claimed spectrum within
    /// tolerance, and the grouped multiplicities agree.
    pub spectrum_ok: bool,
    /// Stored basis is orthogonal and diagonalizes the matrix to the claimed
    /// values (absent basis counts as passing).
    pub basis_ok: bool,
    /// Recomputed nowhere-zero margins are positive and match the stored
    /// value (absent margins count as passing).
    pub margin_ok: bool,
    /// Fresh SSP check agrees with the stored status (absent counts as
    /// passing).
    pub ssp_ok: bool,
    /// For two-value spectra: `‖(M - μI)(M - νI)‖_F <= 1e-7 (ν - μ)²`.
    pub two_value_ok: Option<bool>,
    pub all_ok: bool,
}

/// Recomputes pattern membership, spectrum, basis consistency, margins, and
/// SSP status from the embedded matrix.
pub fn verify(cert: &RealizationCertificate) -> Result<VerifyReport> {
    let m = &cert.matrix;
    let n = m.n();
    let expanded = cert.expanded_target();
    if expanded.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: expanded.len(),
        });
    }
    let spread = symmat::spread(&expanded).max(f64::MIN_POSITIVE);
    let spectral_abs = cert.params.spectral_tol * spread;

    let pattern_ok = m.in_pattern(&cert.graph, cert.params.zero_tol)?.ok;

    let evals = m.eigenvalues();
    let residual = symmat::sorted_residual(&evals, &expanded);
    let grouped = m.spectrum_grouped(cert.params.gap_tol);
    let mults_claimed: Vec<usize> = cert.target.iter().map(|g| g.mult).collect();
    let spectrum_ok = residual <= spectral_abs && grouped.multiplicities() == mults_claimed;

    let basis_ok = match cert.basis_matrix() {
        None => true,
        Some(u) => {
            if u.nrows() != n || u.ncols() != n {
                false
            } else {
                let ortho = (&u.transpose() * &u - DMatrix::identity(n, n)).amax();
                let lambda = DMatrix::from_diagonal(&DVector::from_vec(expanded.clone()));
                let diag_res = (&u.transpose() * m.as_dmatrix() * &u - lambda).amax();
                ortho <= 1e-9
                    && diag_res <= (10.0 * spectral_abs).max(1e-9 * (1.0 + m.max_abs()))
            }
        }
    };

    let margin_ok = match (cert.basis_matrix(), cert.test_vectors.is_empty()) {
        (Some(u), false) => {
            let ys: Vec<DVector<f64>> = cert
                .test_vectors
                .iter()
                .map(|v| DVector::from_column_slice(v))
                .collect();
            let recomputed = min_margin(&u, &ys);
            let stored = cert.nowhere_zero_margin.unwrap_or(0.0);
            recomputed > 0.0 && (recomputed - stored).abs() <= 1e-9 * (1.0 + stored.abs())
        }
        _ => true,
    };

    let ssp_ok = match &cert.ssp {
        None => true,
        Some(summary) => ssp_check(m, SSP_TOL).holds == summary.holds,
    };

    let two_value_ok = if cert.target.len() == 2 {
        let mu = cert.target[0].value;
        let nu = cert.target[1].value;
        let a = m.as_dmatrix();
        let id = DMatrix::identity(n, n);
        let prod = (a - &id * mu) * (a - &id * nu);
        Some(prod.norm() <= 1e-7 * (nu - mu) * (nu - mu))
    } else {
        None
    };

    let all_ok = pattern_ok
        && spectrum_ok
        && basis_ok
        && margin_ok
        && ssp_ok
        && two_value_ok.unwrap_or(true);
    Ok(VerifyReport {
        pattern_ok,
        spectrum_ok,
        basis_ok,
        margin_ok,
        ssp_ok,
        two_value_ok,
        all_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realize::{generic_realize, SolveOptions};

    fn sample_certificate() -> RealizationCertificate {
        let g = Graph::cycle(4).unwrap();
        let target = [0.0, 1.0, 2.0, 3.5];
        let ys: Vec<DVector<f64>> = (0..4)
            .map(|i| DVector::from_fn(4, |r, _| if r == i { 1.0 } else { 0.0 }))
            .collect();
        let r = generic_realize(&g, &target, &ys, SolveOptions::default()).unwrap();
        let groups = target
            .iter()
            .map(|&v| SpectrumGroup { value: v, mult: 1 })
            .collect();
        let params = RunParams {
            seed: 0,
            t: r.t,
            eps: r.eps,
            zero_tol: r.matrix.default_zero_tol(),
            gap_tol: symmat::default_gap_tol(3.5),
            spectral_tol: 1e-8,
        };
        RealizationCertificate::build(
            "generic",
            g,
            r.matrix.clone(),
            groups,
            Some(r.basis.clone()),
            ys,
            Some(&r.ssp),
            params,
        )
        .unwrap()
    }

    #[test]
    fn fresh_certificate_verifies() {
        let cert = sample_certificate();
        let rep = verify(&cert).unwrap();
        assert!(rep.all_ok, "{rep:?}");
    }

    #[test]
    fn zeroed_edge_breaks_pattern() {
        let mut cert = sample_certificate();
        let (i, j) = cert.graph.edges().next().unwrap();
        let mut rows = cert.matrix.rows();
        rows[i - 1][j - 1] = 0.0;
        rows[j - 1][i - 1] = 0.0;
        cert.matrix = SymMatrix::from_rows(rows.len(), &rows).unwrap();
        let rep = verify(&cert).unwrap();
        assert!(!rep.pattern_ok);
        assert!(!rep.all_ok);
    }

    #[test]
    fn perturbed_entry_breaks_spectrum_or_basis() {
        let mut cert = sample_certificate();
        let mut rows = cert.matrix.rows();
        rows[0][0] += 1e-3;
        cert.matrix = SymMatrix::from_rows(rows.len(), &rows).unwrap();
        let rep = verify(&cert).unwrap();
        assert!(!rep.spectrum_ok || !rep.basis_ok);
        assert!(!rep.all_ok);
    }

    #[test]
    fn json_round_trip() {
        let cert = sample_certificate();
        let s = serde_json::to_string_pretty(&cert).unwrap();
        let back: RealizationCertificate = serde_json::from_str(&s).unwrap();
        assert!(verify(&back).unwrap().all_ok);
    }
}
