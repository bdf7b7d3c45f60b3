//! Dense real symmetric matrices: pattern membership, grouped spectra,
//! principal submatrices, and the symmetric eigendecomposition wrapper used
//! throughout the crate.
//!
//! Matrix indices are 0-based; graph vertex labels are 1-based (vertex `v`
//! owns row `v - 1`).

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Real symmetric matrix. Exact symmetry is enforced at construction by
/// averaging with the transpose.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct SymMatrix {
    data: DMatrix<f64>,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    rows: Vec<Vec<f64>>,
}

impl TryFrom<MatrixJson> for SymMatrix {
    type Error = Error;
    fn try_from(j: MatrixJson) -> Result<SymMatrix> {
        SymMatrix::from_rows(j.n, &j.rows)
    }
}

impl From<SymMatrix> for MatrixJson {
    fn from(m: SymMatrix) -> MatrixJson {
        MatrixJson {
            n: m.n(),
            rows: m.rows(),
        }
    }
}

impl SymMatrix {
    /// Symmetrizes `(m + mᵀ)/2`.
    pub fn new(m: DMatrix<f64>) -> SymMatrix {
        assert_eq!(m.nrows(), m.ncols(), "square matrix required");
        let sym = (&m + m.transpose()) * 0.5;
        SymMatrix { data: sym }
    }

    pub fn zeros(n: usize) -> SymMatrix {
        SymMatrix {
            data: DMatrix::zeros(n, n),
        }
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> f64) -> SymMatrix {
        SymMatrix::new(DMatrix::from_fn(n, n, f))
    }

    pub fn from_rows(n: usize, rows: &[Vec<f64>]) -> Result<SymMatrix> {
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: rows.len(),
            });
        }
        Ok(SymMatrix::new(DMatrix::from_fn(n, n, |i, j| rows[i][j])))
    }

    pub fn n(&self) -> usize {
        self.data.nrows()
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.data[(i, j)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n())
            .map(|i| (0..self.n()).map(|j| self.data[(i, j)]).collect())
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.norm()
    }

    /// Default threshold below which an entry counts as a numeric zero:
    /// `1e-8 * (1 + max |entry|)`.
    pub fn default_zero_tol(&self) -> f64 {
        1e-8 * (1.0 + self.max_abs())
    }

    /// Eigendecomposition with eigenvalues ascending; columns of the returned
    /// orthogonal matrix are the matching eigenvectors.
    pub fn eigh(&self) -> (Vec<f64>, DMatrix<f64>) {
        eigh(&self.data)
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.eigh().0
    }

    /// Groups the ascending eigenvalues greedily left to right: a new group
    /// starts when the gap to the previous eigenvalue exceeds `gap_tol`.
    /// The group value is the mean of its members.
    pub fn spectrum_grouped(&self, gap_tol: f64) -> Spectrum {
        Spectrum::group(&self.eigenvalues(), gap_tol)
    }

    /// Rows/columns restricted to `keep` (1-based labels), order preserved.
    pub fn principal_submatrix(&self, keep: &VertexSet) -> Result<SymMatrix> {
        if keep.is_empty() {
            return Err(Error::InvalidParam("empty index set".into()));
        }
        if keep.iter().any(|&v| v < 1 || v > self.n()) {
            return Err(Error::InvalidParam("index out of range".into()));
        }
        let idx: Vec<usize> = keep.iter().map(|&v| v - 1).collect();
        let k = idx.len();
        Ok(SymMatrix {
            data: DMatrix::from_fn(k, k, |i, j| self.data[(idx[i], idx[j])]),
        })
    }

    /// Principal submatrix with 1-based row/column `v` removed.
    pub fn drop_index(&self, v: usize) -> Result<SymMatrix> {
        let keep: VertexSet = (1..=self.n()).filter(|&u| u != v).collect();
        if keep.len() == self.n() {
            return Err(Error::InvalidParam(format!("index {v} out of range")));
        }
        self.principal_submatrix(&keep)
    }

    /// Checks membership in S(G): every edge entry exceeds `zero_tol` in
    /// magnitude and every off-diagonal non-edge entry stays within it.
    /// Diagonal entries are unconstrained.
    pub fn in_pattern(&self, g: &Graph, zero_tol: f64) -> Result<PatternReport> {
        if g.order() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: g.order(),
                got: self.n(),
            });
        }
        if zero_tol <= 0.0 {
            return Err(Error::InvalidParam("zero_tol must be positive".into()));
        }
        let mut violations = Vec::new();
        let mut min_edge_margin = f64::INFINITY;
        let mut min_nonedge_margin = f64::INFINITY;
        for i in 1..=g.order() {
            for j in (i + 1)..=g.order() {
                let a = self.data[(i - 1, j - 1)].abs();
                if g.has_edge(i, j) {
                    let margin = a - zero_tol;
                    min_edge_margin = min_edge_margin.min(margin);
                    if margin <= 0.0 {
                        violations.push(PatternViolation {
                            i,
                            j,
                            entry: self.data[(i - 1, j - 1)],
                            kind: ViolationKind::EdgeEntryZero,
                            margin,
                        });
                    }
                } else {
                    let margin = zero_tol - a;
                    min_nonedge_margin = min_nonedge_margin.min(margin);
                    if margin < 0.0 {
                        violations.push(PatternViolation {
                            i,
                            j,
                            entry: self.data[(i - 1, j - 1)],
                            kind: ViolationKind::NonEdgeEntryNonzero,
                            margin,
                        });
                    }
                }
            }
        }
        Ok(PatternReport {
            ok: violations.is_empty(),
            zero_tol,
            min_edge_margin,
            min_nonedge_margin,
            violations,
        })
    }
}

/// Sorted symmetric eigendecomposition of a raw `DMatrix`.
///
/// The library decomposition is polished by cyclic Jacobi sweeps on
/// `UᵀMU` (accumulating the rotations into `U`) until the off-diagonal
/// reaches machine scale; the stock QL iteration alone can leave eigenpair
/// residuals near 1e-9, which is too coarse for the certificates built on
/// top of this.
pub fn eigh(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    let se = SymmetricEigen::new(m.clone());
    let mut u = se.eigenvectors;
    let mut h = u.transpose() * m * &u;

    let scale = m.amax().max(f64::MIN_POSITIVE);
    let tol = 1e-15 * scale;
    for _sweep in 0..8 {
        let mut off: f64 = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(h[(p, q)].abs());
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let hpq = h[(p, q)];
                if hpq.abs() <= tol * 1e-2 {
                    continue;
                }
                let tau = (h[(q, q)] - h[(p, p)]) / (2.0 * hpq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // H <- GᵀHG and U <- UG on columns p, q
                for i in 0..n {
                    let hip = h[(i, p)];
                    let hiq = h[(i, q)];
                    h[(i, p)] = c * hip - s * hiq;
                    h[(i, q)] = s * hip + c * hiq;
                }
                for j in 0..n {
                    let hpj = h[(p, j)];
                    let hqj = h[(q, j)];
                    h[(p, j)] = c * hpj - s * hqj;
                    h[(q, j)] = s * hpj + c * hqj;
                }
                for i in 0..n {
                    let uip = u[(i, p)];
                    let uiq = u[(i, q)];
                    u[(i, p)] = c * uip - s * uiq;
                    u[(i, q)] = s * uip + c * uiq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| h[(a, a)].total_cmp(&h[(b, b)]));
    let evals: Vec<f64> = order.iter().map(|&k| h[(k, k)]).collect();
    let mut sorted_u = DMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        sorted_u.set_column(col, &u.column(k));
    }
    (evals, sorted_u)
}

/// Spread `λ_max - λ_min` of a sorted eigenvalue slice (0 for n <= 1).
pub fn spread(evals: &[f64]) -> f64 {
    match (evals.first(), evals.last()) {
        (Some(a), Some(b)) => b - a,
        _ => 0.0,
    }
}

/// Default eigenvalue grouping tolerance: `1e-6 * (spread + 1)`.
pub fn default_gap_tol(spread: f64) -> f64 {
    1e-6 * (spread + 1.0)
}

/// Max absolute difference between two sorted eigenvalue lists.
pub fn sorted_residual(got: &[f64], target: &[f64]) -> f64 {
    assert_eq!(got.len(), target.len());
    got.iter()
        .zip(target)
        .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ViolationKind {
    EdgeEntryZero,
    NonEdgeEntryNonzero,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PatternViolation {
    pub i: usize,
    pub j: usize,
    pub entry: f64,
    pub kind: ViolationKind,
    pub margin: f64,
}

/// Outcome of a pattern-membership check with per-entry diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PatternReport {
    pub ok: bool,
    pub zero_tol: f64,
    /// min over edges of |entry| - zero_tol (infinite when there are no edges)
    pub min_edge_margin: f64,
    /// min over non-edges of zero_tol - |entry| (infinite when complete)
    pub min_nonedge_margin: f64,
    pub violations: Vec<PatternViolation>,
}

/// One eigenvalue group: a value and its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumGroup {
    pub value: f64,
    pub mult: usize,
}

/// Multiset of eigenvalues grouped under a tolerance; groups ascend and their
/// multiplicities sum to the matrix dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub groups: Vec<SpectrumGroup>,
    pub gap_tol: f64,
}

impl Spectrum {
    pub fn group(sorted_evals: &[f64], gap_tol: f64) -> Spectrum {
        assert!(gap_tol > 0.0, "gap_tol must be positive");
        let mut groups: Vec<SpectrumGroup> = Vec::new();
        let mut start = 0usize;
        for k in 1..=sorted_evals.len() {
            let split = k == sorted_evals.len() || sorted_evals[k] - sorted_evals[k - 1] > gap_tol;
            if split {
                let members = &sorted_evals[start..k];
                groups.push(SpectrumGroup {
                    value: members.iter().sum::<f64>() / members.len() as f64,
                    mult: members.len(),
                });
                start = k;
            }
        }
        Spectrum { groups, gap_tol }
    }

    /// Builds a spectrum from explicit (value, multiplicity) pairs.
    pub fn from_pairs(pairs: &[(f64, usize)], gap_tol: f64) -> Result<Spectrum> {
        let mut sorted = pairs.to_vec();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        for win in sorted.windows(2) {
            if win[1].0 - win[0].0 <= gap_tol {
                return Err(Error::InvalidParam(
                    "spectrum group values closer than gap_tol".into(),
                ));
            }
        }
        if sorted.iter().any(|&(_, m)| m == 0) {
            return Err(Error::InvalidParam("zero multiplicity".into()));
        }
        Ok(Spectrum {
            groups: sorted
                .into_iter()
                .map(|(value, mult)| SpectrumGroup { value, mult })
                .collect(),
            gap_tol,
        })
    }

    /// Number of distinct eigenvalues.
    pub fn q(&self) -> usize {
        self.groups.len()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.groups.iter().map(|g| g.mult).sum()
    }

    /// Expands back to a full sorted eigenvalue list.
    pub fn expand(&self) -> Vec<f64> {
        self.groups
            .iter()
            .flat_map(|g| std::iter::repeat(g.value).take(g.mult))
            .collect()
    }

    /// Ordered multiplicity vector (multiplicities of the ascending groups).
    pub fn multiplicities(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.mult).collect()
    }
}
