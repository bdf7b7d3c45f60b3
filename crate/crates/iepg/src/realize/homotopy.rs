//! Newton solves on isospectral tree manifolds.
//!
//! For a tree `G` with edge exponents `f`, the matrices with edge entries
//! pinned at `t^f(e)` and free diagonal form a family that degenerates to the
//! diagonal matrices as `t -> 0`. [`tree_homotopy_solve`] picks the diagonal
//! so the sorted spectrum matches a prescribed distinct target, starting from
//! the `t -> 0` limit (diagonal = target, assigned by vertex index).
//!
//! An [`ExponentSchedule`] carries the `f = N0 + g` split together with the
//! per-pair decay exponents `s(i,j)` (sum of `f` along the tree path) and the
//! reference constants `c(i,j)` that the scaled eigenvector entries
//! `u(i,j) / t^{s(i,j)}` approach as `t` shrinks; [`decay_ratio_table`]
//! measures those ratios.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::symmat::{self, SymMatrix};

/// Smallest magnitude the guarded powers `t^s` may take.
const UNDERFLOW_GUARD: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleMode {
    /// `g ≡ 1`, `N0 = diam + 1`; the production choice for homotopy solves.
    Uniform,
    /// `g(e_k) = 2^(k-1)` over the sorted edge order, making the pair
    /// exponents `s(i,j)` injective; used for decay-rate studies.
    Injective,
}

/// Edge exponents `f = N0 + g` on a tree, with derived pair exponents.
#[derive(Debug, Clone)]
pub struct ExponentSchedule {
    tree: Graph,
    mode: ScheduleMode,
    n0: u64,
    g_exp: BTreeMap<(usize, usize), u64>,
    f_exp: BTreeMap<(usize, usize), u64>,
    s_exp: BTreeMap<(usize, usize), u64>,
    max_f: u64,
    max_s: u64,
}

impl ExponentSchedule {
    /// Uniform schedule: `g ≡ 1`, `N0 = diameter + 1`.
    pub fn uniform(tree: &Graph) -> Result<ExponentSchedule> {
        let diam = tree.diameter()? as u64;
        let g_exp: BTreeMap<(usize, usize), u64> = tree.edges().map(|e| (e, 1)).collect();
        ExponentSchedule::from_parts(tree, ScheduleMode::Uniform, g_exp, diam + 1)
    }

    /// Injective schedule: `g(e_k) = 2^(k-1)` over the deterministic edge
    /// order and `N0 = max(g) * (diameter + 1) + 1`; verifies by enumeration
    /// that `s` is injective on unordered pairs.
    pub fn injective(tree: &Graph) -> Result<ExponentSchedule> {
        let diam = tree.diameter()? as u64;
        if tree.edge_count() > 50 {
            return Err(Error::Underflow(
                "injective exponents overflow beyond 50 edges".into(),
            ));
        }
        let g_exp: BTreeMap<(usize, usize), u64> = tree
            .edges()
            .enumerate()
            .map(|(k, e)| (e, 1u64 << k))
            .collect();
        let max_g = g_exp.values().copied().max().unwrap_or(0);
        let sched =
            ExponentSchedule::from_parts(tree, ScheduleMode::Injective, g_exp, max_g * (diam + 1) + 1)?;
        let mut seen: Vec<u64> = sched.s_exp.values().copied().collect();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParam(
                "pair exponents not injective for this tree".into(),
            ));
        }
        // A usable t in (0,1) must exist; 0.99^max_s is as large as it gets.
        if 0.99f64.powf(sched.max_s as f64) < UNDERFLOW_GUARD {
            return Err(Error::Underflow(
                "pair exponents too large for any representable t".into(),
            ));
        }
        Ok(sched)
    }

    fn from_parts(
        tree: &Graph,
        mode: ScheduleMode,
        g_exp: BTreeMap<(usize, usize), u64>,
        n0: u64,
    ) -> Result<ExponentSchedule> {
        if !tree.is_tree() {
            return Err(Error::NotATree);
        }
        let f_exp: BTreeMap<(usize, usize), u64> =
            g_exp.iter().map(|(&e, &g)| (e, n0 + g)).collect();
        let mut s_exp = BTreeMap::new();
        for i in 1..=tree.order() {
            for j in (i + 1)..=tree.order() {
                let path = tree.path_between(i, j)?;
                let s: u64 = path
                    .windows(2)
                    .map(|w| f_exp[&(w[0].min(w[1]), w[0].max(w[1]))])
                    .sum();
                s_exp.insert((i, j), s);
            }
        }
        let max_f = f_exp.values().copied().max().unwrap_or(0);
        let max_s = s_exp.values().copied().max().unwrap_or(0);
        Ok(ExponentSchedule {
            tree: tree.clone(),
            mode,
            n0,
            g_exp,
            f_exp,
            s_exp,
            max_f,
            max_s,
        })
    }

    pub fn tree(&self) -> &Graph {
        &self.tree
    }

    pub fn mode(&self) -> ScheduleMode {
        self.mode
    }

    pub fn n0(&self) -> u64 {
        self.n0
    }

    pub fn g(&self, i: usize, j: usize) -> Option<u64> {
        self.g_exp.get(&(i.min(j), i.max(j))).copied()
    }

    pub fn f(&self, i: usize, j: usize) -> Option<u64> {
        self.f_exp.get(&(i.min(j), i.max(j))).copied()
    }

    /// Pair exponent `s(i,j)`: sum of `f` along the tree path; `s(i,i) = 0`.
    pub fn s(&self, i: usize, j: usize) -> u64 {
        if i == j {
            0
        } else {
            self.s_exp[&(i.min(j), i.max(j))]
        }
    }

    pub fn max_s(&self) -> u64 {
        self.max_s
    }

    /// Reference decay constant `c(i,j)`: the product of `(λ_j - λ_k)^{-1}`
    /// over the vertices `k` of the tree path from `i` to `j`, excluding `j`
    /// itself; `c(j,j) = 1`. `lambdas[v-1]` is the value assigned to vertex v.
    pub fn c_reference(&self, lambdas: &[f64], i: usize, j: usize) -> Result<f64> {
        if lambdas.len() != self.tree.order() {
            return Err(Error::DimensionMismatch {
                expected: self.tree.order(),
                got: lambdas.len(),
            });
        }
        if i == j {
            return Ok(1.0);
        }
        let path = self.tree.path_between(i, j)?;
        let mut c = 1.0;
        for &k in path.iter().filter(|&&k| k != j) {
            c /= lambdas[j - 1] - lambdas[k - 1];
        }
        Ok(c)
    }

    /// Checks that `t^max_f` (edge entries) stays representable.
    pub fn guard_solve(&self, t: f64) -> Result<()> {
        if !(0.0 < t && t < 1.0) {
            return Err(Error::InvalidParam("t must lie in (0, 1)".into()));
        }
        if t.powf(self.max_f as f64) < UNDERFLOW_GUARD {
            return Err(Error::Underflow(format!(
                "t^{} underflows for t = {t:.3e}",
                self.max_f
            )));
        }
        Ok(())
    }

    /// Checks that `t^max_s` (scaled eigenvector entries) stays representable.
    pub fn guard_ratios(&self, t: f64) -> Result<()> {
        self.guard_solve(t)?;
        if t.powf(self.max_s as f64) < UNDERFLOW_GUARD {
            return Err(Error::Underflow(format!(
                "t^{} underflows for t = {t:.3e}",
                self.max_s
            )));
        }
        Ok(())
    }
}

/// Solves for the diagonal making the sorted spectrum match `target`, with
/// edge entries pinned at `t^f(e)` (using the schedule's exponents).
///
/// Target values must be strictly ascending; the initial diagonal assigns
/// them by vertex index, matching the `t -> 0` limit. The Newton iteration
/// uses the first-order eigenvalue sensitivities `(u_k(i))^2` and accepts
/// when the max residual is at most `1e-10 * spread`.
pub fn tree_homotopy_solve(
    schedule: &ExponentSchedule,
    target: &[f64],
    t: f64,
) -> Result<SymMatrix> {
    schedule.guard_solve(t)?;
    let f_pow: BTreeMap<(usize, usize), f64> = schedule
        .f_exp
        .iter()
        .map(|(&e, &f)| (e, t.powf(f as f64)))
        .collect();
    solve_with_edge_values(&schedule.tree, &f_pow, target)
}

/// Lower-level solve with explicit edge values (used by the closed-form tests
/// and by schedules with custom exponents).
pub fn solve_with_edge_values(
    tree: &Graph,
    edge_values: &BTreeMap<(usize, usize), f64>,
    target: &[f64],
) -> Result<SymMatrix> {
    let n = tree.order();
    if target.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: target.len(),
        });
    }
    if target.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::DuplicateEigenvalues);
    }
    let spread = symmat::spread(target).max(f64::MIN_POSITIVE);
    let stop_tol = 1e-13 * spread;
    let accept_tol = 1e-10 * spread;

    let mut base = DMatrix::zeros(n, n);
    for (&(i, j), &v) in edge_values {
        base[(i - 1, j - 1)] = v;
        base[(j - 1, i - 1)] = v;
    }

    let assemble = |d: &DVector<f64>| {
        let mut m = base.clone();
        for i in 0..n {
            m[(i, i)] = d[i];
        }
        SymMatrix::new(m)
    };

    let mut d = DVector::from_column_slice(target);
    let mut m = assemble(&d);
    let (mut evals, mut u) = m.eigh();
    let mut res = DVector::from_iterator(n, evals.iter().zip(target).map(|(e, t)| e - t));
    let mut res_norm = res.amax();

    for _ in 0..60 {
        if res_norm <= stop_tol {
            break;
        }
        let jac = DMatrix::from_fn(n, n, |k, i| u[(i, k)] * u[(i, k)]);
        let delta = match jac.clone().lu().solve(&(-&res)) {
            Some(x) => x,
            None => jac
                .svd(true, true)
                .solve(&(-&res), 1e-13)
                .map_err(|_| Error::NoConvergence { residual: res_norm })?,
        };
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..12 {
            let d_new = &d + &delta * step;
            let m_new = assemble(&d_new);
            let (e_new, u_new) = m_new.eigh();
            let r_new =
                DVector::from_iterator(n, e_new.iter().zip(target).map(|(e, t)| e - t));
            if r_new.amax() < res_norm {
                d = d_new;
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

    if res_norm <= accept_tol {
        Ok(m)
    } else {
        Err(Error::NoConvergence { residual: res_norm })
    }
}

/// One row of a decay study: the scaled eigenvector entries and the largest
/// off-diagonal magnitude of the diagonalizing orthogonal matrix at one `t`.
#[derive(Debug, Clone)]
pub struct DecayRow {
    pub t: f64,
    /// `ratios[i-1][j-1] = u(i,j) / t^{s(i,j)}`, with column signs normalized
    /// so the diagonal of `U` is non-negative.
    pub ratios: Vec<Vec<f64>>,
    pub max_offdiag: f64,
}

/// Decay study over a decreasing list of `t` values.
#[derive(Debug, Clone)]
pub struct DecayTable {
    pub s: Vec<Vec<u64>>,
    pub c_ref: Vec<Vec<f64>>,
    pub rows: Vec<DecayRow>,
}

impl DecayTable {
    /// CSV with one line per (t, i, j) triple.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,i,j,s_ij,ratio,c_ref,abs_err\n");
        for row in &self.rows {
            let n = row.ratios.len();
            for i in 0..n {
                for j in 0..n {
                    let r = row.ratios[i][j];
                    let c = self.c_ref[i][j];
                    out.push_str(&format!(
                        "{:e},{},{},{},{:e},{:e},{:e}\n",
                        row.t,
                        i + 1,
                        j + 1,
                        self.s[i][j],
                        r,
                        c,
                        (r - c).abs()
                    ));
                }
            }
        }
        out
    }
}

/// Runs the homotopy solve at each `t` and reports the ratios
/// `u(i,j) / t^{s(i,j)}` next to the reference constants `c(i,j)`.
///
/// Requires an injective schedule and strictly decreasing `t` values within
/// the underflow guard. Scaled entries are computed by propagating the
/// eigenvector equation outward from the localization vertex in the ratio
/// variables, which stays accurate far below the dense eigensolver's
/// absolute floor; the dense decomposition supplies the eigenvalues.
pub fn decay_ratio_table(
    schedule: &ExponentSchedule,
    target: &[f64],
    t_values: &[f64],
) -> Result<DecayTable> {
    if schedule.mode != ScheduleMode::Injective {
        return Err(Error::InvalidParam(
            "decay table needs an injective schedule".into(),
        ));
    }
    if t_values.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParam("t values must strictly decrease".into()));
    }
    let n = schedule.tree.order();
    let s: Vec<Vec<u64>> = (1..=n)
        .map(|i| (1..=n).map(|j| schedule.s(i, j)).collect())
        .collect();
    let mut c_ref = vec![vec![0.0; n]; n];
    for i in 1..=n {
        for j in 1..=n {
            c_ref[i - 1][j - 1] = schedule.c_reference(target, i, j)?;
        }
    }

    let mut rows = Vec::new();
    for &t in t_values {
        schedule.guard_ratios(t)?;
        let m = tree_homotopy_solve(schedule, target, t)?;
        let (evals, _) = m.eigh();
        let mut ratios = vec![vec![0.0; n]; n];
        let mut max_offdiag: f64 = 0.0;
        for j0 in 1..=n {
            let theta = scaled_eigenvector(schedule, &m, &evals, j0, t)?;
            for i in 1..=n {
                ratios[i - 1][j0 - 1] = theta[i - 1];
                if i != j0 {
                    let u = theta[i - 1] * t.powf(schedule.s(i, j0) as f64);
                    max_offdiag = max_offdiag.max(u.abs());
                }
            }
        }
        rows.push(DecayRow {
            t,
            ratios,
            max_offdiag,
        });
    }
    Ok(DecayTable { s, c_ref, rows })
}

/// Scaled eigenvector `θ_i = u(i,j0) / t^{s(i,j0)}` for the eigenvalue
/// localized at vertex `j0`, computed in the ratio variables.
///
/// Away from `j0` the eigenvector equation reads
/// `(λ_{j0} - d_i) θ_i = θ_{parent} + Σ_children t^{2 f(i,k)} θ_k`,
/// where "parent" is the neighbor toward `j0`. With `θ_{j0} = 1` this is
/// solved by a few Gauss-Seidel sweeps in ascending distance order (the
/// child terms carry factors `t^{2f} ≤ t^2`), then normalized so the full
/// eigenvector has unit norm, keeping `θ_{j0} > 0`.
fn scaled_eigenvector(
    schedule: &ExponentSchedule,
    m: &SymMatrix,
    evals: &[f64],
    j0: usize,
    t: f64,
) -> Result<Vec<f64>> {
    let tree = &schedule.tree;
    let n = tree.order();
    let lambda = evals[j0 - 1];
    let dist = tree.distances_from(j0);
    let mut order: Vec<usize> = (1..=n).filter(|&v| v != j0).collect();
    order.sort_by_key(|&v| (dist[v].unwrap(), v));

    let mut theta = vec![0.0; n + 1];
    theta[j0] = 1.0;
    for _ in 0..4 {
        for &i in &order {
            let di = dist[i].unwrap();
            let mut acc = 0.0;
            for k in tree.neighbors(i) {
                let dk = dist[k].unwrap();
                if dk + 1 == di {
                    acc += theta[k]; // parent, exponent cancels exactly
                } else {
                    let f = schedule.f(i, k).expect("tree edge");
                    acc += t.powf(2.0 * f as f64) * theta[k];
                }
            }
            let denom = lambda - m.entry(i - 1, i - 1);
            if denom.abs() < 1e-14 * (1.0 + lambda.abs()) {
                return Err(Error::ClusteredEigenvalues(format!(
                    "degenerate denominator at vertex {i}"
                )));
            }
            theta[i] = acc / denom;
        }
    }

    // normalize the underlying eigenvector to unit length
    let mut norm_sq = 0.0;
    for v in 1..=n {
        let u = theta[v] * t.powf(schedule.s(v, j0) as f64);
        norm_sq += u * u;
    }
    let norm = norm_sq.sqrt();
    Ok((1..=n).map(|v| theta[v] / norm).collect())
}
