//! Multiplicity matrices: fits, per-family column realizability,
//! compatibility of pairs, exhaustive search for compatible 0-1 matrices
//! with prescribed column sums, and the bordered construction for
//! componentwise order differences up to two.
//!
//! An `r x k` matrix of non-negative integers is a multiplicity matrix for a
//! graph with `k` components when column `i` is an ordered multiplicity list
//! realizable by a matrix in `S(G_i)`; it *fits* when column sums equal
//! component orders. Two matrices (equal row counts, at least 3) are
//! *compatible* when, after deleting the first and last rows, row sums agree
//! and the inner-product matrix of their columns is nowhere-zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ComponentFamily, Graph};

/// Non-negative integer matrix whose columns are per-component ordered
/// multiplicity lists (rows correspond to ascending eigenvalues).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiplicityMatrix {
    entries: Vec<Vec<u32>>,
}

impl MultiplicityMatrix {
    pub fn new(entries: Vec<Vec<u32>>) -> Result<MultiplicityMatrix> {
        if entries.is_empty() || entries[0].is_empty() {
            return Err(Error::InvalidParam(
                "multiplicity matrix needs r >= 1, k >= 1".into(),
            ));
        }
        let k = entries[0].len();
        if entries.iter().any(|row| row.len() != k) {
            return Err(Error::InvalidParam("ragged multiplicity matrix".into()));
        }
        Ok(MultiplicityMatrix { entries })
    }

    /// Single-column matrix from an ordered multiplicity vector.
    pub fn column(v: &[u32]) -> Result<MultiplicityMatrix> {
        MultiplicityMatrix::new(v.iter().map(|&x| vec![x]).collect())
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries[0].len()
    }

    pub fn entry(&self, row: usize, col: usize) -> u32 {
        self.entries[row][col]
    }

    pub fn row(&self, row: usize) -> &[u32] {
        &self.entries[row]
    }

    pub fn col_sum(&self, col: usize) -> usize {
        self.entries.iter().map(|r| r[col] as usize).sum()
    }

    pub fn row_sum(&self, row: usize) -> usize {
        self.entries[row].iter().map(|&x| x as usize).sum()
    }

    pub fn is_01(&self) -> bool {
        self.entries.iter().flatten().all(|&x| x <= 1)
    }

    /// Rows with the first and last deleted; requires `r >= 3`.
    pub fn trimmed(&self) -> Result<MultiplicityMatrix> {
        if self.rows() < 3 {
            return Err(Error::InvalidParam("trimming needs r >= 3".into()));
        }
        MultiplicityMatrix::new(self.entries[1..self.rows() - 1].to_vec())
    }

    /// Row order reversed. Negating a matrix reverses its spectrum, so this
    /// preserves "is a multiplicity matrix for G".
    pub fn reversed_rows(&self) -> MultiplicityMatrix {
        let mut e = self.entries.clone();
        e.reverse();
        MultiplicityMatrix { entries: e }
    }

    /// True iff `g` has exactly `cols` components (in canonical order) and
    /// column sums equal component orders.
    pub fn fits(&self, g: &Graph) -> bool {
        self.check_fits(g).is_ok()
    }

    pub fn check_fits(&self, g: &Graph) -> Result<()> {
        let comps = g.components();
        if comps.len() != self.cols() {
            return Err(Error::FitsViolation(format!(
                "graph has {} components, matrix has {} columns",
                comps.len(),
                self.cols()
            )));
        }
        for (i, (comp, _)) in comps.iter().enumerate() {
            if self.col_sum(i) != comp.order() {
                return Err(Error::FitsViolation(format!(
                    "column {} sums to {}, component order is {}",
                    i + 1,
                    self.col_sum(i),
                    comp.order()
                )));
            }
        }
        Ok(())
    }

    /// Decides whether every column is a realizable ordered multiplicity
    /// list for its component. Supported component families: paths (all
    /// entries at most 1), complete graphs (at least two nonzero entries
    /// unless the order is 1), and cycles (entries at most 2 with the
    /// alternating-pattern parity constraint). Refuses other families.
    pub fn is_multiplicity_matrix(&self, g: &Graph) -> Result<bool> {
        self.check_fits(g)?;
        let comps = g.components();
        for (i, (comp, _)) in comps.iter().enumerate() {
            let col: Vec<u32> = (0..self.rows()).map(|j| self.entry(j, i)).collect();
            let ok = match comp.classify() {
                ComponentFamily::Path => col.iter().all(|&m| m <= 1),
                ComponentFamily::Complete => {
                    comp.order() == 1 || col.iter().filter(|&&m| m > 0).count() >= 2
                }
                ComponentFamily::Cycle => cycle_column_realizable(&col),
                ComponentFamily::Other => {
                    return Err(Error::UnsupportedComponent(format!(
                        "component {} is not a path, cycle, or complete graph",
                        i + 1
                    )))
                }
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Realizability of an ordered multiplicity column on a cycle, decided by a
/// parity scan: all entries at most 2, and the sorted expansion must match
/// one of the two alternating weak/strict chains, i.e. every double starts
/// at an odd position, or every double starts at an even position.
pub fn cycle_column_realizable(col: &[u32]) -> bool {
    if col.iter().any(|&m| m > 2) {
        return false;
    }
    let mut pos = 1usize; // 1-based position in the sorted expansion
    let mut odd_ok = true;
    let mut even_ok = true;
    for &m in col {
        if m == 2 {
            if pos % 2 == 1 {
                even_ok = false;
            } else {
                odd_ok = false;
            }
        }
        pos += m as usize;
    }
    odd_ok || even_ok
}

/// Compatibility report: both clauses on the trimmed matrices.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompatibilityReport {
    pub compatible: bool,
    pub row_sum_check: bool,
    pub nowhere_zero_check: bool,
    /// First (column of V, column of W) pair with zero inner product,
    /// 1-based, when the nowhere-zero clause fails.
    pub first_failing: Option<(usize, usize)>,
}

/// Checks compatibility of `v` and `w`: equal row counts `r >= 3`, equal
/// interior row sums, and a nowhere-zero trimmed inner-product matrix.
pub fn compatible(v: &MultiplicityMatrix, w: &MultiplicityMatrix) -> Result<CompatibilityReport> {
    if v.rows() != w.rows() {
        return Err(Error::InvalidParam(format!(
            "row counts differ: {} vs {}",
            v.rows(),
            w.rows()
        )));
    }
    let tv = v.trimmed()?;
    let tw = w.trimmed()?;
    let row_sum_check = (0..tv.rows()).all(|j| tv.row_sum(j) == tw.row_sum(j));
    let mut nowhere_zero_check = true;
    let mut first_failing = None;
    'outer: for a in 0..tv.cols() {
        for b in 0..tw.cols() {
            let dot: u64 = (0..tv.rows())
                .map(|j| tv.entry(j, a) as u64 * tw.entry(j, b) as u64)
                .sum();
            if dot == 0 {
                nowhere_zero_check = false;
                first_failing = Some((a + 1, b + 1));
                break 'outer;
            }
        }
    }
    Ok(CompatibilityReport {
        compatible: row_sum_check && nowhere_zero_check,
        row_sum_check,
        nowhere_zero_check,
        first_failing,
    })
}

/// Outcome of [`search_compatible_01`].
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub witness: Option<(MultiplicityMatrix, MultiplicityMatrix)>,
    /// True when the search space was covered completely, so a `None`
    /// witness certifies non-existence for every row count.
    pub exhaustive: bool,
}

/// Default row-count cap for the search.
pub fn default_r_max(orders_g: &[usize], orders_h: &[usize]) -> usize {
    let tg: usize = orders_g.iter().sum();
    let th: usize = orders_h.iter().sum();
    2 * tg.max(th) + 2
}

const SEARCH_NODE_CAP: u64 = 50_000_000;

/// Backtracking search for compatible 0-1 matrices with the given column
/// sums, over row counts `3..=r_max`, returning the first witness in
/// (row count, lexicographic) order or none.
///
/// A compatible pair with an all-zero interior row in both matrices stays
/// compatible after deleting that row, and equal interior row sums force
/// interior zero rows to coincide, so the search only needs
/// `r <= 2 + min(Σ orders_g, Σ orders_h)`; a completed search at that bound
/// certifies non-existence for every larger row count as well. Instances
/// with total order up to 16 complete well inside the node cap.
pub fn search_compatible_01(
    orders_g: &[usize],
    orders_h: &[usize],
    r_max: usize,
) -> Result<SearchOutcome> {
    if r_max < 3 {
        return Err(Error::InvalidParam("r_max must be at least 3".into()));
    }
    if orders_g.is_empty() || orders_h.is_empty() {
        return Err(Error::InvalidParam("order lists must be non-empty".into()));
    }
    if orders_g.iter().chain(orders_h).any(|&o| o == 0) {
        return Err(Error::InvalidParam("orders must be positive".into()));
    }
    let tg: usize = orders_g.iter().sum();
    let th: usize = orders_h.iter().sum();
    let r_bound = r_max.min(2 + tg.min(th));

    let mut nodes: u64 = 0;
    for r in 3..=r_bound {
        if let Some(pair) = search_at_r(orders_g, orders_h, r, &mut nodes) {
            return Ok(SearchOutcome {
                witness: Some(pair),
                exhaustive: nodes <= SEARCH_NODE_CAP,
            });
        }
        if nodes > SEARCH_NODE_CAP {
            return Ok(SearchOutcome {
                witness: None,
                exhaustive: false,
            });
        }
    }
    Ok(SearchOutcome {
        witness: None,
        exhaustive: true,
    })
}

/// All 0-1 rows of length `k` in lexicographic order (as vectors).
fn lex_rows(k: usize) -> Vec<Vec<u32>> {
    (0..(1u32 << k))
        .map(|mask| (0..k).map(|c| (mask >> (k - 1 - c)) & 1).collect())
        .collect()
}

fn search_at_r(
    orders_g: &[usize],
    orders_h: &[usize],
    r: usize,
    nodes: &mut u64,
) -> Option<(MultiplicityMatrix, MultiplicityMatrix)> {
    let k = orders_g.len();
    let l = orders_h.len();
    let v_rows = lex_rows(k);
    let w_rows = lex_rows(l);

    let mut v: Vec<Vec<u32>> = Vec::with_capacity(r);
    let mut v_need: Vec<isize> = orders_g.iter().map(|&o| o as isize).collect();

    fn dfs_v(
        depth: usize,
        r: usize,
        rows: &[Vec<u32>],
        v: &mut Vec<Vec<u32>>,
        need: &mut Vec<isize>,
        nodes: &mut u64,
        orders_h: &[usize],
        w_rows: &[Vec<u32>],
    ) -> Option<(Vec<Vec<u32>>, Vec<Vec<u32>>)> {
        *nodes += 1;
        if *nodes > SEARCH_NODE_CAP {
            return None;
        }
        if depth == r {
            if need.iter().any(|&x| x != 0) {
                return None;
            }
            return complete_w(v, orders_h, w_rows, nodes).map(|w| (v.clone(), w));
        }
        let left = (r - depth) as isize;
        'rows: for cand in rows {
            for (c, &bit) in cand.iter().enumerate() {
                let after = need[c] - bit as isize;
                if after < 0 || after > left - 1 {
                    continue 'rows;
                }
            }
            for (c, &bit) in cand.iter().enumerate() {
                need[c] -= bit as isize;
            }
            v.push(cand.clone());
            if let Some(found) = dfs_v(depth + 1, r, rows, v, need, nodes, orders_h, w_rows) {
                return Some(found);
            }
            v.pop();
            for (c, &bit) in cand.iter().enumerate() {
                need[c] += bit as isize;
            }
        }
        None
    }

    /// Given a complete V, enumerate W row by row: interior rows must match
    /// V's interior row sums; column sums must land on orders_h; the trimmed
    /// inner-product coverage must be complete.
    fn complete_w(
        v: &[Vec<u32>],
        orders_h: &[usize],
        w_rows: &[Vec<u32>],
        nodes: &mut u64,
    ) -> Option<Vec<Vec<u32>>> {
        let r = v.len();
        let v_interior_sums: Vec<usize> = (1..r - 1)
            .map(|j| v[j].iter().map(|&x| x as usize).sum())
            .collect();
        // quick totals check: sum of interior W rows is forced
        let interior_total: usize = v_interior_sums.iter().sum();
        let th: usize = orders_h.iter().sum();
        if interior_total > th {
            return None;
        }
        let mut w: Vec<Vec<u32>> = Vec::with_capacity(r);
        let mut need: Vec<isize> = orders_h.iter().map(|&o| o as isize).collect();
        dfs_w(0, r, v, &v_interior_sums, w_rows, &mut w, &mut need, nodes)
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs_w(
        depth: usize,
        r: usize,
        v: &[Vec<u32>],
        v_interior_sums: &[usize],
        rows: &[Vec<u32>],
        w: &mut Vec<Vec<u32>>,
        need: &mut Vec<isize>,
        nodes: &mut u64,
    ) -> Option<Vec<Vec<u32>>> {
        *nodes += 1;
        if *nodes > SEARCH_NODE_CAP {
            return None;
        }
        if depth == r {
            if need.iter().any(|&x| x != 0) {
                return None;
            }
            // coverage: every (V column, W column) pair meets in some interior row
            let k = v[0].len();
            let l = w[0].len();
            for a in 0..k {
                for b in 0..l {
                    let hit = (1..r - 1).any(|j| v[j][a] == 1 && w[j][b] == 1);
                    if !hit {
                        return None;
                    }
                }
            }
            return Some(w.clone());
        }
        let interior = depth >= 1 && depth + 1 < r;
        let left = (r - depth) as isize;
        'rows: for cand in rows {
            if interior {
                let s: usize = cand.iter().map(|&x| x as usize).sum();
                if s != v_interior_sums[depth - 1] {
                    continue;
                }
            }
            for (c, &bit) in cand.iter().enumerate() {
                let after = need[c] - bit as isize;
                if after < 0 || after > left - 1 {
                    continue 'rows;
                }
            }
            for (c, &bit) in cand.iter().enumerate() {
                need[c] -= bit as isize;
            }
            w.push(cand.clone());
            if let Some(found) = dfs_w(depth + 1, r, v, v_interior_sums, rows, w, need, nodes) {
                return Some(found);
            }
            w.pop();
            for (c, &bit) in cand.iter().enumerate() {
                need[c] += bit as isize;
            }
        }
        None
    }

    dfs_v(
        0,
        r,
        &v_rows,
        &mut v,
        &mut v_need,
        nodes,
        orders_h,
        &w_rows,
    )
    .map(|(v, w)| {
        (
            MultiplicityMatrix::new(v).expect("non-empty"),
            MultiplicityMatrix::new(w).expect("non-empty"),
        )
    })
}

/// Bordered 0-1 construction for componentwise order differences up to two.
///
/// With `p_i = min(|G_i|, |H_i|)` and `p = max p_i`, the shared interior is
/// the `p x k` matrix whose column `i` has ones in its first `p_i` rows;
/// border rows absorb the remaining sum (the first needed one goes to the
/// top row). The output passes `fits` on both sides and `compatible`.
pub fn construct_diff2(
    orders_g: &[usize],
    orders_h: &[usize],
) -> Result<(MultiplicityMatrix, MultiplicityMatrix)> {
    if orders_g.len() != orders_h.len() || orders_g.is_empty() {
        return Err(Error::InvalidParam(
            "need equal, non-empty component counts".into(),
        ));
    }
    if orders_g.iter().chain(orders_h).any(|&o| o == 0) {
        return Err(Error::InvalidParam("orders must be positive".into()));
    }
    for (i, (&a, &b)) in orders_g.iter().zip(orders_h).enumerate() {
        if a.abs_diff(b) > 2 {
            return Err(Error::InvalidParam(format!(
                "component {}: order difference {} exceeds 2",
                i + 1,
                a.abs_diff(b)
            )));
        }
    }
    let k = orders_g.len();
    let p_i: Vec<usize> = orders_g
        .iter()
        .zip(orders_h)
        .map(|(&a, &b)| a.min(b))
        .collect();
    let p = *p_i.iter().max().expect("non-empty");

    let border = |orders: &[usize]| -> (Vec<u32>, Vec<u32>) {
        let mut top = vec![0u32; k];
        let mut bottom = vec![0u32; k];
        for i in 0..k {
            match orders[i] - p_i[i] {
                0 => {}
                1 => top[i] = 1,
                2 => {
                    top[i] = 1;
                    bottom[i] = 1;
                }
                _ => unreachable!("difference bounded by 2"),
            }
        }
        (top, bottom)
    };

    let build = |orders: &[usize]| -> MultiplicityMatrix {
        let (top, bottom) = border(orders);
        let mut rows = Vec::with_capacity(p + 2);
        rows.push(top);
        for row in 0..p {
            rows.push((0..k).map(|i| if row < p_i[i] { 1 } else { 0 }).collect());
        }
        rows.push(bottom);
        MultiplicityMatrix::new(rows).expect("non-empty")
    };

    Ok((build(orders_g), build(orders_h)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn fits_examples() {
        let p3 = Graph::path(3).unwrap();
        assert!(MultiplicityMatrix::column(&[1, 1, 1]).unwrap().fits(&p3));
        assert!(!MultiplicityMatrix::column(&[1, 1]).unwrap().fits(&p3));
    }

    #[test]
    fn path_columns_cap_at_one() {
        let p4 = Graph::path(4).unwrap();
        let v = MultiplicityMatrix::column(&[1, 2, 1]).unwrap();
        assert!(!v.is_multiplicity_matrix(&p4).unwrap());
        let ok = MultiplicityMatrix::column(&[1, 1, 1, 1]).unwrap();
        assert!(ok.is_multiplicity_matrix(&p4).unwrap());
    }

    #[test]
    fn cycle_columns() {
        let c4 = Graph::cycle(4).unwrap();
        assert!(MultiplicityMatrix::column(&[2, 2])
            .unwrap()
            .is_multiplicity_matrix(&c4)
            .unwrap());
        assert!(!MultiplicityMatrix::column(&[3, 1])
            .unwrap()
            .is_multiplicity_matrix(&c4)
            .unwrap());
    }

    #[test]
    fn complete_columns() {
        let k4 = Graph::complete(4).unwrap();
        assert!(MultiplicityMatrix::column(&[3, 1])
            .unwrap()
            .is_multiplicity_matrix(&k4)
            .unwrap());
        assert!(!MultiplicityMatrix::column(&[4])
            .unwrap()
            .is_multiplicity_matrix(&k4)
            .unwrap());
    }

    #[test]
    fn refuses_unsupported_components() {
        let star = Graph::star(3).unwrap();
        let v = MultiplicityMatrix::column(&[1, 1, 1, 1]).unwrap();
        assert!(matches!(
            v.is_multiplicity_matrix(&star),
            Err(Error::UnsupportedComponent(_))
        ));
    }

    #[test]
    fn compatibility_examples() {
        let v = MultiplicityMatrix::column(&[1, 1, 1]).unwrap();
        let rep = compatible(&v, &v).unwrap();
        assert!(rep.compatible);
    }

    #[test]
    fn disjoint_interior_supports() {
        let a = MultiplicityMatrix::column(&[1, 1, 0, 1]).unwrap();
        let b = MultiplicityMatrix::column(&[1, 0, 1, 1]).unwrap();
        let rep = compatible(&a, &b).unwrap();
        assert!(!rep.row_sum_check);
        assert!(!rep.compatible);
        // same supports shifted into a shared row, sums match but product zero
        let c = MultiplicityMatrix::new(vec![vec![1, 0], vec![1, 0], vec![0, 1], vec![0, 1]])
            .unwrap();
        let d = MultiplicityMatrix::new(vec![vec![0, 1], vec![0, 1], vec![1, 0], vec![1, 0]])
            .unwrap();
        let rep = compatible(&c, &d).unwrap();
        assert!(rep.row_sum_check);
        assert!(!rep.nowhere_zero_check);
        assert_eq!(rep.first_failing, Some((1, 1)));
    }

    #[test]
    fn diff2_single_component_examples() {
        let (v, w) = construct_diff2(&[4], &[4]).unwrap();
        assert_eq!(v, w);
        assert_eq!(
            v,
            MultiplicityMatrix::column(&[0, 1, 1, 1, 1, 0]).unwrap()
        );

        let (v, w) = construct_diff2(&[3], &[5]).unwrap();
        assert_eq!(v, MultiplicityMatrix::column(&[0, 1, 1, 1, 0]).unwrap());
        assert_eq!(w, MultiplicityMatrix::column(&[1, 1, 1, 1, 1]).unwrap());
    }

    #[test]
    fn diff2_two_components() {
        let (v, w) = construct_diff2(&[3, 5], &[4, 4]).unwrap();
        // shared interior E has rows (1,1),(1,1),(1,1),(0,1)
        let tv = v.trimmed().unwrap();
        let tw = w.trimmed().unwrap();
        assert_eq!(tv, tw);
        assert_eq!(tv.row(0), &[1, 1]);
        assert_eq!(tv.row(3), &[0, 1]);
        assert!(compatible(&v, &w).unwrap().compatible);
        let g = Graph::union_of_paths(&[3, 5]).unwrap();
        let h = Graph::union_of_paths(&[4, 4]).unwrap();
        assert!(v.fits(&g));
        assert!(w.fits(&h));
    }

    #[test]
    fn diff2_rejects_large_gap() {
        assert!(construct_diff2(&[3], &[6]).is_err());
    }

    #[test]
    fn search_finds_trivial_witness() {
        let out = search_compatible_01(&[3], &[3], default_r_max(&[3], &[3])).unwrap();
        let (v, w) = out.witness.expect("witness exists");
        assert!(out.exhaustive);
        assert!(compatible(&v, &w).unwrap().compatible);
        assert_eq!(v.col_sum(0), 3);
        assert_eq!(w.col_sum(0), 3);
    }

    #[test]
    fn search_obstruction_path_vs_small() {
        // single components of orders 7 and 4: interior sums cannot match
        let out = search_compatible_01(&[7], &[4], default_r_max(&[7], &[4])).unwrap();
        assert!(out.witness.is_none());
        assert!(out.exhaustive);
    }

    #[test]
    fn search_agrees_with_construction() {
        let out = search_compatible_01(&[3, 5], &[4, 4], 14).unwrap();
        let (v, w) = out.witness.expect("construction provides a witness");
        assert!(compatible(&v, &w).unwrap().compatible);
    }

    #[test]
    fn deleting_zero_interior_row_preserves_compatibility() {
        let (mut ve, mut we) = {
            let v = MultiplicityMatrix::new(vec![
                vec![1, 0],
                vec![1, 1],
                vec![0, 0],
                vec![1, 1],
                vec![0, 1],
            ])
            .unwrap();
            let w = MultiplicityMatrix::new(vec![
                vec![0, 1],
                vec![1, 1],
                vec![0, 0],
                vec![1, 1],
                vec![1, 0],
            ])
            .unwrap();
            (v.entries, w.entries)
        };
        let v = MultiplicityMatrix::new(ve.clone()).unwrap();
        let w = MultiplicityMatrix::new(we.clone()).unwrap();
        let before = compatible(&v, &w).unwrap().compatible;
        ve.remove(2);
        we.remove(2);
        let v2 = MultiplicityMatrix::new(ve).unwrap();
        let w2 = MultiplicityMatrix::new(we).unwrap();
        let after = compatible(&v2, &w2).unwrap().compatible;
        assert_eq!(before, after);
        assert!(before);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn compatibility_is_symmetric(
            rows in 3usize..6,
            k in 1usize..3,
            l in 1usize..3,
            seed in 0u64..1000,
        ) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let v = MultiplicityMatrix::new(
                (0..rows).map(|_| (0..k).map(|_| rng.gen_range(0..3u32)).collect()).collect(),
            ).unwrap();
            let w = MultiplicityMatrix::new(
                (0..rows).map(|_| (0..l).map(|_| rng.gen_range(0..3u32)).collect()).collect(),
            ).unwrap();
            let ab = compatible(&v, &w).unwrap().compatible;
            let ba = compatible(&w, &v).unwrap().compatible;
            prop_assert_eq!(ab, ba);
        }

        #[test]
        fn diff2_always_fits_and_compatible(
            k in 1usize..4,
            seed in 0u64..500,
        ) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let og: Vec<usize> = (0..k).map(|_| rng.gen_range(1..=6)).collect();
            let oh: Vec<usize> = og
                .iter()
                .map(|&o| {
                    let lo = o.saturating_sub(2).max(1);
                    rng.gen_range(lo..=(o + 2).min(6).max(lo))
                })
                .collect();
            let (v, w) = construct_diff2(&og, &oh).unwrap();
            let g = Graph::union_of_paths(&og).unwrap();
            let h = Graph::union_of_paths(&oh).unwrap();
            prop_assert!(v.fits(&g));
            prop_assert!(w.fits(&h));
            prop_assert!(compatible(&v, &w).unwrap().compatible);
        }
    }
}
