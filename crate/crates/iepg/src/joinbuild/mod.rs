//! Join and partial-join constructions.
//!
//! [`join_two_eigenvalues`] assembles a block matrix on `g ∨ h` with exactly
//! two distinct eigenvalues from a compatible pair of multiplicity matrices:
//! interior rows pair an eigenvalue `α` on the G side with `μ + ν - α` on
//! the H side through a coupling `b` with `b² = (α - μ)(ν - α)`, so each
//! coupled 2x2 block has spectrum `{μ, ν}` exactly; border rows sit at `μ`
//! and `ν` uncoupled. [`partial::partial_join_extend`] grafts a connected
//! graph onto part of an existing matrix while extending its spectrum by a
//! prescribed multiset.

mod partial;
mod scenarios;

pub use partial::{partial_join_distinct, partial_join_extend, PartialJoinResult};
pub use scenarios::{
    diff2_scenario, k2join_scenario, star_scenario, wheel_scenario, ScenarioOptions,
};

use nalgebra::{DMatrix, DVector};

use crate::cert::{RealizationCertificate, RunParams};
use crate::error::{Error, Result};
use crate::graph::{ComponentFamily, Graph};
use crate::multiplicity::{compatible, MultiplicityMatrix};
use crate::realize::{complete_realize, generic_realize, SolveOptions};
use crate::symmat::{self, Spectrum, SpectrumGroup, SymMatrix};

/// Eigenvalue layout of a two-eigenvalue join: the shared row values
/// `val[j]` (equally spaced from `μ` to `ν`) and the interior coupling
/// strengths.
#[derive(Debug, Clone)]
pub struct JoinPlan {
    pub mu: f64,
    pub nu: f64,
    /// `val[j] = μ + (ν - μ) j / (r - 1)`; row 0 is `μ`, row r-1 is `ν`.
    pub values: Vec<f64>,
    /// `b_j = sqrt((val[j] - μ)(ν - val[j]))` for interior rows `1..r-1`.
    pub couplings: Vec<f64>,
}

impl JoinPlan {
    pub fn new(rows: usize, mu: f64, nu: f64) -> Result<JoinPlan> {
        if rows < 3 {
            return Err(Error::InvalidParam("a join plan needs r >= 3 rows".into()));
        }
        if !(mu < nu) {
            return Err(Error::InvalidParam("need mu < nu".into()));
        }
        let r = rows as f64;
        let values: Vec<f64> = (0..rows)
            .map(|j| mu + (nu - mu) * j as f64 / (r - 1.0))
            .collect();
        let couplings: Vec<f64> = (1..rows - 1)
            .map(|j| ((values[j] - mu) * (nu - values[j])).sqrt())
            .collect();
        if couplings.iter().any(|&b| !(b > 0.0)) {
            return Err(Error::InvalidParam("degenerate coupling strength".into()));
        }
        Ok(JoinPlan {
            mu,
            nu,
            values,
            couplings,
        })
    }

    /// Coupling strength for interior row `j` (1-based interior index into
    /// `values`, i.e. `1 <= j <= r - 2`).
    pub fn coupling(&self, j: usize) -> f64 {
        self.couplings[j - 1]
    }
}

/// Column layout of a side realization: global basis columns sorted by
/// (multiplicity row, component, copy).
struct SideLayout {
    /// (row, component, copy) per global column.
    triples: Vec<(usize, usize, usize)>,
    /// local column index within its component, per global column.
    local_col: Vec<usize>,
}

fn side_layout(v: &MultiplicityMatrix, n_components: usize) -> SideLayout {
    let mut triples = Vec::new();
    for j in 0..v.rows() {
        for ci in 0..n_components {
            for copy in 0..v.entry(j, ci) {
                triples.push((j, ci, copy as usize));
            }
        }
    }
    // local order within a component: ascending (row, copy), matching the
    // ascending-eigenvalue column order of the component realization
    let mut local_col = vec![0usize; triples.len()];
    for ci in 0..n_components {
        let mut next = 0usize;
        for (g, &(_, c, _)) in triples.iter().enumerate() {
            if c == ci {
                local_col[g] = next;
                next += 1;
            }
        }
    }
    SideLayout { triples, local_col }
}

/// One side (A or C block) of a join: assembled matrix, global orthogonal
/// basis, and per-column row indices.
struct SideRealization {
    matrix: DMatrix<f64>,
    basis: DMatrix<f64>,
    layout: SideLayout,
}

/// Checks that a side is inside the certified realizability scope:
/// 0-1 columns on any connected component, or complete-graph components
/// whose first/last rows may exceed 1 (interior rows stay 0-1, and at least
/// two rows must be hit).
fn validate_side(v: &MultiplicityMatrix, g: &Graph) -> Result<()> {
    v.check_fits(g)?;
    let r = v.rows();
    for (ci, (comp, _)) in g.components().iter().enumerate() {
        let col: Vec<u32> = (0..r).map(|j| v.entry(j, ci)).collect();
        if col.iter().all(|&x| x <= 1) {
            continue;
        }
        if comp.classify() != ComponentFamily::Complete {
            return Err(Error::NotRealizable(format!(
                "component {}: multiplicities above 1 are only certified on complete graphs",
                ci + 1
            )));
        }
        if col[1..r - 1].iter().any(|&x| x > 1) {
            return Err(Error::NotRealizable(format!(
                "component {}: interior multiplicities above 1 are out of certified scope",
                ci + 1
            )));
        }
        if col.iter().filter(|&&x| x > 0).count() < 2 {
            return Err(Error::NotRealizable(format!(
                "component {}: a scalar spectrum cannot live on a complete graph of order >= 2",
                ci + 1
            )));
        }
    }
    Ok(())
}

/// Realizes one side of the join. `values[j]` is the eigenvalue of row `j`;
/// `ys_per_comp[ci]`, when non-empty, are the eigen-coefficient test vectors
/// for component `ci` (the standard basis otherwise, which certifies every
/// basis entry nonzero).
fn realize_side(
    g: &Graph,
    v: &MultiplicityMatrix,
    values: &[f64],
    ys_per_comp: &[Vec<DVector<f64>>],
    opts: SolveOptions,
) -> Result<SideRealization> {
    let comps = g.components();
    let layout = side_layout(v, comps.len());
    let n = g.order();
    let mut matrix = DMatrix::zeros(n, n);
    let mut basis = DMatrix::zeros(n, n);

    for (ci, (comp, labels)) in comps.iter().enumerate() {
        let hit: Vec<(usize, u32)> = (0..v.rows())
            .map(|j| (j, v.entry(j, ci)))
            .filter(|&(_, m)| m > 0)
            .collect();
        let standard: Vec<DVector<f64>> = (0..comp.order())
            .map(|i| DVector::from_fn(comp.order(), |r, _| if r == i { 1.0 } else { 0.0 }))
            .collect();
        let ys: &[DVector<f64>] = match ys_per_comp.get(ci) {
            Some(list) if !list.is_empty() => list,
            _ => &standard,
        };
        let comp_opts = SolveOptions {
            seed: opts.seed.wrapping_add(1 + ci as u64),
            ..opts
        };
        let real = if hit.iter().all(|&(_, m)| m == 1) {
            let target: Vec<f64> = hit.iter().map(|&(j, _)| values[j]).collect();
            generic_realize(comp, &target, ys, comp_opts)?
        } else {
            let gap_tol = symmat::default_gap_tol(symmat::spread(values));
            let pairs: Vec<(f64, usize)> = hit
                .iter()
                .map(|&(j, m)| (values[j], m as usize))
                .collect();
            let spectrum = Spectrum::from_pairs(&pairs, gap_tol)?;
            complete_realize(comp.order(), &spectrum, ys, comp_opts)?
        };
        for a in 0..comp.order() {
            for b in 0..comp.order() {
                matrix[(labels[a] - 1, labels[b] - 1)] = real.matrix.entry(a, b);
            }
        }
        // embed basis columns at their global positions
        for (gcol, &(_, c, _)) in layout.triples.iter().enumerate() {
            if c == ci {
                let lc = layout.local_col[gcol];
                for a in 0..comp.order() {
                    basis[(labels[a] - 1, gcol)] = real.basis[(a, lc)];
                }
            }
        }
    }

    Ok(SideRealization {
        matrix,
        basis,
        layout,
    })
}

/// Builds a certified matrix on `g ∨ h` whose spectrum is exactly
/// `{μ, ν}`, from compatible multiplicity matrices `v` (for `g`) and `w`
/// (for `h`).
///
/// The H side realizes `w` with its rows reversed, so its row-`j` eigenvalue
/// is `μ + ν - val[j]`; interior blocks couple through rank-`ρ_j` bridges
/// `b_j X_j Y_jᵀ` (copies paired in ascending order on both sides). The
/// off-diagonal block is nowhere-zero because the H-side realization is
/// asked to keep the images of the bridge coefficient vectors nowhere-zero,
/// which compatibility makes possible. Certified a posteriori; seeded
/// retries re-draw the realizations.
pub fn join_two_eigenvalues(
    g: &Graph,
    h: &Graph,
    v: &MultiplicityMatrix,
    w: &MultiplicityMatrix,
    mu: f64,
    nu: f64,
    opts: SolveOptions,
) -> Result<RealizationCertificate> {
    if v.rows() != w.rows() {
        return Err(Error::InvalidParam("row counts differ".into()));
    }
    let report = compatible(v, w)?;
    if !report.compatible {
        return Err(Error::Incompatible(format!(
            "row sums {}, nowhere-zero {} (first failing {:?})",
            report.row_sum_check, report.nowhere_zero_check, report.first_failing
        )));
    }
    validate_side(v, g)?;
    validate_side(w, h)?;
    let r = v.rows();
    let plan = JoinPlan::new(r, mu, nu)?;
    let w_rev = w.reversed_rows();
    let n_g = g.order();
    let n_h = h.order();
    let h_comps = h.components();

    let interior_total: usize = (1..r - 1).map(|j| v.row_sum(j)).sum();
    let m_mu = v.row_sum(0) + w.row_sum(r - 1) + interior_total;
    let m_nu = v.row_sum(r - 1) + w.row_sum(0) + interior_total;

    let mut last_err = Error::ScheduleExhausted("join attempts exhausted".into());
    for attempt in 0..20 {
        let attempt_opts = SolveOptions {
            seed: opts.seed.wrapping_add(1000 * attempt as u64),
            ..opts
        };
        match try_join(
            g, h, v, &w_rev, &plan, n_g, n_h, &h_comps, m_mu, m_nu, attempt_opts,
        ) {
            Ok(cert) => return Ok(cert),
            Err(e) => last_err = e,
        }
    }
    Err(last_err)
}

#[allow(clippy::too_many_arguments)]
fn try_join(
    g: &Graph,
    h: &Graph,
    v: &MultiplicityMatrix,
    w_rev: &MultiplicityMatrix,
    plan: &JoinPlan,
    n_g: usize,
    n_h: usize,
    h_comps: &[(Graph, Vec<usize>)],
    m_mu: usize,
    m_nu: usize,
    opts: SolveOptions,
) -> Result<RealizationCertificate> {
    let r = plan.values.len();
    let a_side = realize_side(g, v, &plan.values, &[], opts)?;

    // C-side layout is known combinatorially; build the bridge coefficient
    // vectors y_p (one per G-side vertex) before realizing the C side.
    let c_layout = side_layout(w_rev, h_comps.len());
    let a_cols_for_row = |j: usize| -> Vec<usize> {
        (0..a_side.layout.triples.len())
            .filter(|&c| a_side.layout.triples[c].0 == j)
            .collect()
    };
    let c_cols_for_row = |j: usize| -> Vec<usize> {
        (0..c_layout.triples.len())
            .filter(|&c| c_layout.triples[c].0 == j)
            .collect()
    };

    let mut y_global: Vec<DVector<f64>> = vec![DVector::zeros(n_h); n_g];
    for j in 1..r - 1 {
        let b_j = plan.coupling(j);
        let a_cols = a_cols_for_row(j);
        let c_cols = c_cols_for_row(r - 1 - j);
        if a_cols.len() != c_cols.len() {
            return Err(Error::Incompatible(format!(
                "row {} copy counts differ after reversal",
                j + 1
            )));
        }
        for (&ca, &cc) in a_cols.iter().zip(&c_cols) {
            for (y, row) in y_global.iter_mut().zip(0..n_g) {
                y[cc] += b_j * a_side.basis[(row, ca)];
            }
        }
    }

    // project onto each H component's local eigen-coordinates
    let mut ys_per_comp: Vec<Vec<DVector<f64>>> = vec![Vec::new(); h_comps.len()];
    for y in &y_global {
        for (ci, (comp, _)) in h_comps.iter().enumerate() {
            let mut local = DVector::zeros(comp.order());
            for (gc, &(_, c, _)) in c_layout.triples.iter().enumerate() {
                if c == ci {
                    local[c_layout.local_col[gc]] = y[gc];
                }
            }
            if local.norm() == 0.0 {
                return Err(Error::Incompatible(
                    "a bridge coefficient vector vanishes on a component".into(),
                ));
            }
            ys_per_comp[ci].push(local);
        }
    }

    let c_side = realize_side(h, w_rev, &plan.values, &ys_per_comp, opts)?;

    // B row p = (U_C y_p)ᵀ
    let mut b_block = DMatrix::zeros(n_g, n_h);
    for (p, y) in y_global.iter().enumerate() {
        let img = &c_side.basis * y;
        for q in 0..n_h {
            b_block[(p, q)] = img[q];
        }
    }

    let mut m = DMatrix::zeros(n_g + n_h, n_g + n_h);
    m.view_mut((0, 0), (n_g, n_g)).copy_from(&a_side.matrix);
    m.view_mut((0, n_g), (n_g, n_h)).copy_from(&b_block);
    m.view_mut((n_g, 0), (n_h, n_g))
        .copy_from(&b_block.transpose());
    m.view_mut((n_g, n_g), (n_h, n_h)).copy_from(&c_side.matrix);
    let matrix = SymMatrix::new(m);
    let join_graph = g.join(h);

    let target = vec![
        SpectrumGroup {
            value: plan.mu,
            mult: m_mu,
        },
        SpectrumGroup {
            value: plan.nu,
            mult: m_nu,
        },
    ];
    let spread = plan.nu - plan.mu;
    let params = RunParams {
        seed: opts.seed,
        t: None,
        eps: None,
        zero_tol: matrix.default_zero_tol(),
        gap_tol: symmat::default_gap_tol(spread),
        spectral_tol: 1e-8,
    };
    let (_, basis) = matrix.eigh();
    let cert = RealizationCertificate::build(
        "join2",
        join_graph,
        matrix,
        target,
        Some(basis),
        Vec::new(),
        None,
        params,
    )?;

    // the algebraic two-eigenvalue identity, checked directly
    let a = cert.matrix.as_dmatrix();
    let id = DMatrix::identity(a.nrows(), a.nrows());
    let prod = (a - &id * plan.mu) * (a - &id * plan.nu);
    if prod.norm() > 1e-7 * spread * spread {
        return Err(Error::CertificateFailed(format!(
            "two-eigenvalue identity residual {:.3e}",
            prod.norm()
        )));
    }
    let grouped = cert.matrix.spectrum_grouped(params.gap_tol);
    if grouped.multiplicities() != vec![m_mu, m_nu] {
        return Err(Error::CertificateFailed(format!(
            "grouped multiplicities {:?}, expected [{m_mu}, {m_nu}]",
            grouped.multiplicities()
        )));
    }
    Ok(cert)
}

/// `q(G ∨ H) <= max(2, ||G| - |H||)` for connected graphs.
pub fn q_join_upper_bound(g: &Graph, h: &Graph) -> Result<usize> {
    if !g.is_connected() || !h.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(2usize.max(g.order().abs_diff(h.order())))
}

/// General path-relay form: given a known value of `q(G ∨ P_n)` and
/// `|H| >= n`, bounds `q(G ∨ H) <= q(G ∨ P_n) + |H| - n`.
pub fn q_join_bound_via_path(q_g_join_pn: usize, n: usize, h_order: usize) -> Result<usize> {
    if h_order < n {
        return Err(Error::InvalidParam("need |H| >= n".into()));
    }
    Ok(q_g_join_pn + h_order - n)
}

/// Interlacing sanity property for wheel-type spectra: between any two
/// adjacent triple eigenvalues the number of simple eigenvalues must be odd
/// (an even count, including zero, is impossible).
pub fn triple_parity_admissible(spectrum: &Spectrum) -> bool {
    let triples: Vec<usize> = spectrum
        .groups
        .iter()
        .enumerate()
        .filter(|(_, g)| g.mult == 3)
        .map(|(i, _)| i)
        .collect();
    for pair in triples.windows(2) {
        let simples = spectrum.groups[pair[0] + 1..pair[1]]
            .iter()
            .filter(|g| g.mult == 1)
            .count();
        if simples % 2 == 0 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cert::verify;
    use crate::multiplicity::construct_diff2;

    #[test]
    fn plan_blocks_have_exact_trace_and_det() {
        let plan = JoinPlan::new(6, -1.0, 3.0).unwrap();
        for j in 1..5 {
            let alpha = plan.values[j];
            let beta = plan.mu + plan.nu - alpha;
            let b = plan.coupling(j);
            let trace = alpha + beta;
            let det = alpha * beta - b * b;
            assert!((trace - (plan.mu + plan.nu)).abs() < 1e-12);
            assert!((det - plan.mu * plan.nu).abs() < 1e-12);
        }
    }

    #[test]
    fn k1_join_k1_gives_plus_minus_one() {
        let k1 = Graph::complete(1).unwrap();
        let v = MultiplicityMatrix::column(&[0, 1, 0]).unwrap();
        let cert = join_two_eigenvalues(
            &k1,
            &k1,
            &v,
            &v,
            -1.0,
            1.0,
            SolveOptions::default(),
        )
        .unwrap();
        assert_eq!(cert.matrix.n(), 2);
        assert!(cert.matrix.entry(0, 0).abs() < 1e-12);
        assert!((cert.matrix.entry(0, 1).abs() - 1.0).abs() < 1e-12);
        assert!(verify(&cert).unwrap().all_ok);
    }

    #[test]
    fn p4_join_p4_multiplicities() {
        let p4 = Graph::path(4).unwrap();
        let (v, w) = construct_diff2(&[4], &[4]).unwrap();
        let cert =
            join_two_eigenvalues(&p4, &p4, &v, &w, 0.0, 2.0, SolveOptions::default()).unwrap();
        let grouped = cert.matrix.spectrum_grouped(cert.params.gap_tol);
        assert_eq!(grouped.multiplicities(), vec![4, 4]);
        assert!(verify(&cert).unwrap().all_ok);
    }

    #[test]
    fn incompatible_pair_is_refused() {
        let p3 = Graph::path(3).unwrap();
        let v = MultiplicityMatrix::column(&[1, 1, 0, 1]).unwrap();
        let w = MultiplicityMatrix::column(&[1, 0, 1, 1]).unwrap();
        assert!(matches!(
            join_two_eigenvalues(&p3, &p3, &v, &w, 0.0, 1.0, SolveOptions::default()),
            Err(Error::Incompatible(_))
        ));
    }

    #[test]
    fn path_bound_examples() {
        let p4 = Graph::path(4).unwrap();
        let k2 = Graph::complete(2).unwrap();
        assert_eq!(q_join_upper_bound(&p4, &k2).unwrap(), 2);
        let p3 = Graph::path(3).unwrap();
        let p8 = Graph::path(8).unwrap();
        assert_eq!(q_join_upper_bound(&p3, &p8).unwrap(), 5);
        assert_eq!(q_join_bound_via_path(2, 4, 7).unwrap(), 5);
    }

    #[test]
    fn parity_property() {
        let ok = Spectrum::from_pairs(&[(0.0, 3), (1.0, 1), (2.0, 3)], 1e-6).unwrap();
        assert!(triple_parity_admissible(&ok));
        let bad = Spectrum::from_pairs(&[(0.0, 3), (2.0, 3)], 1e-6).unwrap();
        assert!(!triple_parity_admissible(&bad));
        let bad2 =
            Spectrum::from_pairs(&[(0.0, 3), (0.5, 1), (1.0, 1), (2.0, 3)], 1e-6).unwrap();
        assert!(!triple_parity_admissible(&bad2));
    }
}
