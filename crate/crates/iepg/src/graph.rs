//! Simple undirected graphs with 1-based vertex labels.
//!
//! Vertices are labeled `1..=n` and edges are stored normalized as pairs
//! `(i, j)` with `i < j`. Provides the standard families (paths, cycles,
//! complete graphs, stars, wheels, unions), joins and partial joins, vertex
//! boundaries, and BFS spanning trees with tree metrics.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A subset of the vertex labels of some ambient graph.
pub type VertexSet = BTreeSet<usize>;

/// Simple undirected graph. No self-loops, no duplicate edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;
    fn try_from(j: GraphJson) -> Result<Graph> {
        Graph::new(j.n, j.edges)
    }
}

impl From<Graph> for GraphJson {
    fn from(g: Graph) -> GraphJson {
        GraphJson {
            n: g.n,
            edges: g.edges.into_iter().collect(),
        }
    }
}

/// Named graph families buildable from an integer parameter list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Path,
    Cycle,
    Complete,
    CompleteBipartite,
    Star,
    GeneralizedStar,
    Wheel,
    Union,
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Family> {
        Ok(match s {
            "path" => Family::Path,
            "cycle" => Family::Cycle,
            "complete" => Family::Complete,
            "complete_bipartite" => Family::CompleteBipartite,
            "star" => Family::Star,
            "generalized_star" => Family::GeneralizedStar,
            "wheel" => Family::Wheel,
            "union" => Family::Union,
            other => return Err(Error::InvalidParam(format!("unknown family {other:?}"))),
        })
    }
}

/// Structural classification of a connected graph, used by per-family
/// realizability checks on multiplicity columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentFamily {
    Path,
    Cycle,
    Complete,
    Other,
}

impl Graph {
    /// Builds a graph on `n` vertices from an edge list, normalizing pairs.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Graph> {
        if n == 0 {
            return Err(Error::InvalidGraph("vertex set must be non-empty".into()));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            if a < 1 || b < 1 || a > n || b > n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a},{b}) out of range 1..={n}"
                )));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Graph { n, edges: set })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Normalized edges, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// Neighbors of `v` in ascending label order.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).len()
    }

    /// Full vertex set `1..=n`.
    pub fn vertex_set(&self) -> VertexSet {
        (1..=self.n).collect()
    }

    // ---- standard families ----------------------------------------------

    pub fn path(n: usize) -> Result<Graph> {
        if n == 0 {
            return Err(Error::InvalidParam("path needs n >= 1".into()));
        }
        Graph::new(n, (1..n).map(|i| (i, i + 1)))
    }

    pub fn cycle(n: usize) -> Result<Graph> {
        if n < 3 {
            return Err(Error::InvalidParam("cycle needs n >= 3".into()));
        }
        Graph::new(n, (1..n).map(|i| (i, i + 1)).chain([(n, 1)]))
    }

    pub fn complete(n: usize) -> Result<Graph> {
        if n == 0 {
            return Err(Error::InvalidParam("complete graph needs n >= 1".into()));
        }
        Graph::new(
            n,
            (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))),
        )
    }

    pub fn complete_bipartite(m: usize, n: usize) -> Result<Graph> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidParam("bipartite sides must be positive".into()));
        }
        Graph::new(
            m + n,
            (1..=m).flat_map(|i| (m + 1..=m + n).map(move |j| (i, j))),
        )
    }

    /// Star `K_{1,k}` with hub labeled 1 and leaves `2..=k+1`.
    pub fn star(k: usize) -> Result<Graph> {
        if k == 0 {
            return Err(Error::InvalidParam("star needs k >= 1 leaves".into()));
        }
        Graph::new(k + 1, (2..=k + 1).map(|j| (1, j)))
    }

    /// Generalized star: a center (label 1) with paths of the given lengths
    /// attached. Arm `a` occupies consecutive labels after the previous arms,
    /// chained center - first - second - ...
    pub fn generalized_star(arms: &[usize]) -> Result<Graph> {
        if arms.is_empty() || arms.contains(&0) {
            return Err(Error::InvalidParam(
                "generalized star needs positive arm lengths".into(),
            ));
        }
        let n = 1 + arms.iter().sum::<usize>();
        let mut edges = Vec::new();
        let mut next = 2usize;
        for &len in arms {
            edges.push((1, next));
            for i in 0..len - 1 {
                edges.push((next + i, next + i + 1));
            }
            next += len;
        }
        Graph::new(n, edges)
    }

    /// Wheel: cycle `1..=n` plus a hub labeled `n + 1` joined to all.
    pub fn wheel(n: usize) -> Result<Graph> {
        if n < 3 {
            return Err(Error::InvalidParam("wheel needs rim n >= 3".into()));
        }
        let rim = Graph::cycle(n)?;
        let hub = n + 1;
        Graph::new(
            n + 1,
            rim.edges().chain((1..=n).map(|i| (i, hub))),
        )
    }

    /// Disjoint union of paths of the given orders.
    pub fn union_of_paths(orders: &[usize]) -> Result<Graph> {
        if orders.is_empty() {
            return Err(Error::InvalidParam("union needs at least one order".into()));
        }
        let mut g = Graph::path(orders[0])?;
        for &k in &orders[1..] {
            g = g.disjoint_union(&Graph::path(k)?);
        }
        Ok(g)
    }

    /// Family dispatcher used by the CLI: builds the named family from an
    /// integer parameter list.
    pub fn make_family(kind: Family, params: &[usize]) -> Result<Graph> {
        let one = |params: &[usize]| -> Result<usize> {
            if params.len() != 1 {
                return Err(Error::InvalidParam(format!(
                    "expected 1 parameter, got {}",
                    params.len()
                )));
            }
            Ok(params[0])
        };
        match kind {
            Family::Path => Graph::path(one(params)?),
            Family::Cycle => Graph::cycle(one(params)?),
            Family::Complete => Graph::complete(one(params)?),
            Family::CompleteBipartite => {
                if params.len() != 2 {
                    return Err(Error::InvalidParam("complete_bipartite needs (m, n)".into()));
                }
                Graph::complete_bipartite(params[0], params[1])
            }
            Family::Star => Graph::star(one(params)?),
            Family::GeneralizedStar => Graph::generalized_star(params),
            Family::Wheel => Graph::wheel(one(params)?),
            Family::Union => Graph::union_of_paths(params),
        }
    }

    // ---- composition ------------------------------------------------------

    /// Disjoint union; the second operand's vertex `i` becomes `self.n + i`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n;
        let mut edges: BTreeSet<(usize, usize)> = self.edges.clone();
        edges.extend(other.edges().map(|(a, b)| (a + shift, b + shift)));
        Graph {
            n: self.n + other.n,
            edges,
        }
    }

    /// Join: disjoint union plus every cross edge.
    pub fn join(&self, other: &Graph) -> Graph {
        let a = self.vertex_set();
        let b = other.vertex_set();
        self.partial_join(&a, other, &b)
            .expect("full vertex sets are always valid")
    }

    /// Partial join: disjoint union plus the cross edges `a × b`.
    /// `other`'s vertex `i` becomes `self.n + i`. Empty `a` or `b` yields a
    /// plain disjoint union (no cross edges); callers that require a
    /// non-empty join should check `cross_edges > 0` themselves.
    pub fn partial_join(&self, a: &VertexSet, other: &Graph, b: &VertexSet) -> Result<Graph> {
        if a.iter().any(|&v| v < 1 || v > self.n) {
            return Err(Error::InvalidParam("partial join: a ⊄ V(g)".into()));
        }
        if b.iter().any(|&v| v < 1 || v > other.n) {
            return Err(Error::InvalidParam("partial join: b ⊄ V(h)".into()));
        }
        let mut g = self.disjoint_union(other);
        let shift = self.n;
        for &u in a {
            for &v in b {
                g.edges.insert((u, v + shift));
            }
        }
        Ok(g)
    }

    /// Vertices outside `w` adjacent to some member of `w`.
    pub fn vertex_boundary(&self, w: &VertexSet) -> Result<VertexSet> {
        if w.iter().any(|&v| v < 1 || v > self.n) {
            return Err(Error::InvalidParam("boundary: w ⊄ V(g)".into()));
        }
        let mut out = VertexSet::new();
        for &(a, b) in &self.edges {
            if w.contains(&a) && !w.contains(&b) {
                out.insert(b);
            }
            if w.contains(&b) && !w.contains(&a) {
                out.insert(a);
            }
        }
        Ok(out)
    }

    /// Induced subgraph on `keep`, relabeled 1.. in ascending original order.
    /// Returns the subgraph and the original labels indexed by new label - 1.
    pub fn induced(&self, keep: &VertexSet) -> Result<(Graph, Vec<usize>)> {
        if keep.is_empty() {
            return Err(Error::InvalidParam("induced subgraph on empty set".into()));
        }
        if keep.iter().any(|&v| v < 1 || v > self.n) {
            return Err(Error::InvalidParam("induced: keep ⊄ V(g)".into()));
        }
        let orig: Vec<usize> = keep.iter().copied().collect();
        let index = |v: usize| orig.iter().position(|&u| u == v).unwrap() + 1;
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter(|(a, b)| keep.contains(a) && keep.contains(b))
            .map(|&(a, b)| (index(a), index(b)))
            .collect();
        Ok((Graph::new(orig.len(), edges)?, orig))
    }

    // ---- traversal --------------------------------------------------------

    /// BFS distances from `start` (None for unreachable vertices).
    pub fn distances_from(&self, start: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n + 1];
        dist[start] = Some(0);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            for u in self.neighbors(v) {
                if dist[u].is_none() {
                    dist[u] = Some(d + 1);
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.distances_from(1)[1..].iter().all(|d| d.is_some())
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edge_count() == self.n - 1
    }

    /// Connected components in ascending order of smallest original label.
    /// Each component comes with its original labels (new label `i+1` had
    /// original label `labels[i]`).
    pub fn components(&self) -> Vec<(Graph, Vec<usize>)> {
        let mut seen = vec![false; self.n + 1];
        let mut out = Vec::new();
        for start in 1..=self.n {
            if seen[start] {
                continue;
            }
            let mut members = VertexSet::new();
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(v) = queue.pop_front() {
                members.insert(v);
                for u in self.neighbors(v) {
                    if !seen[u] {
                        seen[u] = true;
                        queue.push_back(u);
                    }
                }
            }
            out.push(self.induced(&members).expect("members are valid"));
        }
        out
    }

    /// BFS spanning tree rooted at vertex 1, neighbors explored in ascending
    /// label order (deterministic tie-break).
    pub fn spanning_tree(&self) -> Result<Graph> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let mut seen = vec![false; self.n + 1];
        seen[1] = true;
        let mut queue = VecDeque::from([1usize]);
        let mut edges = Vec::new();
        while let Some(v) = queue.pop_front() {
            for u in self.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    edges.push((v, u));
                    queue.push_back(u);
                }
            }
        }
        Graph::new(self.n, edges)
    }

    /// The unique tree path from `i` to `j` as a vertex sequence.
    /// Requires the graph to be a tree.
    pub fn path_between(&self, i: usize, j: usize) -> Result<Vec<usize>> {
        if !self.is_tree() {
            return Err(Error::NotATree);
        }
        if i < 1 || j < 1 || i > self.n || j > self.n {
            return Err(Error::InvalidParam("path endpoints out of range".into()));
        }
        // BFS parents from j, then walk i -> j.
        let mut parent = vec![0usize; self.n + 1];
        let mut seen = vec![false; self.n + 1];
        seen[j] = true;
        let mut queue = VecDeque::from([j]);
        while let Some(v) = queue.pop_front() {
            for u in self.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = v;
                    queue.push_back(u);
                }
            }
        }
        let mut path = vec![i];
        let mut cur = i;
        while cur != j {
            cur = parent[cur];
            path.push(cur);
        }
        Ok(path)
    }

    /// Largest pairwise distance. Requires a tree.
    pub fn diameter(&self) -> Result<usize> {
        if !self.is_tree() {
            return Err(Error::NotATree);
        }
        let mut best = 0;
        for v in 1..=self.n {
            for d in self.distances_from(v).iter().flatten() {
                best = best.max(*d);
            }
        }
        Ok(best)
    }

    /// Classifies a connected graph as a path, cycle, complete graph, or other.
    pub fn classify(&self) -> ComponentFamily {
        if !self.is_connected() {
            return ComponentFamily::Other;
        }
        let n = self.n;
        if self.edge_count() == n * (n - 1) / 2 {
            return ComponentFamily::Complete; // covers K1, K2, K3 (= C3/P2 overlaps resolved below)
        }
        let degs: Vec<usize> = (1..=n).map(|v| self.degree(v)).collect();
        if self.edge_count() == n - 1 && degs.iter().all(|&d| d <= 2) {
            return ComponentFamily::Path;
        }
        if n >= 3 && self.edge_count() == n && degs.iter().all(|&d| d == 2) {
            return ComponentFamily::Cycle;
        }
        ComponentFamily::Other
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn path_three() {
        let g = Graph::path(3).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(1, 2), (2, 3)]);
    }

    #[test]
    fn cycle_three_is_triangle() {
        let g = Graph::cycle(3).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(1, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn wheel_counts() {
        // K1 v C6: 7 vertices, 6 rim + 6 spoke edges
        let g = Graph::wheel(6).unwrap();
        assert_eq!(g.order(), 7);
        assert_eq!(g.edge_count(), 12);
        assert_eq!(g.degree(7), 6);
    }

    #[test]
    fn join_of_singletons_is_k2() {
        let k1 = Graph::complete(1).unwrap();
        let j = k1.join(&k1);
        assert_eq!(j, Graph::complete(2).unwrap());
    }

    #[test]
    fn join_of_empty_graphs_is_complete_bipartite() {
        let m = 3;
        let n = 2;
        let mk1 = Graph::new(m, []).unwrap();
        let nk1 = Graph::new(n, []).unwrap();
        assert_eq!(mk1.join(&nk1), Graph::complete_bipartite(m, n).unwrap());
    }

    #[test]
    fn partial_join_pendant_ends() {
        // (P7, {1,7}) v H adds 2*|H| cross edges
        let p7 = Graph::path(7).unwrap();
        let h = Graph::cycle(4).unwrap();
        let ends: VertexSet = [1, 7].into_iter().collect();
        let all = h.vertex_set();
        let pj = p7.partial_join(&ends, &h, &all).unwrap();
        assert_eq!(pj.edge_count(), p7.edge_count() + h.edge_count() + 2 * h.order());
    }

    #[test]
    fn components_of_union() {
        let g = Graph::new(5, [(1, 2), (3, 4), (4, 5)]).unwrap();
        let comps = g.components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].0.order(), 2);
        assert_eq!(comps[1].0.order(), 3);
        assert_eq!(comps[1].1, vec![3, 4, 5]);
    }

    #[test]
    fn components_of_isolated_vertices() {
        let g = Graph::new(3, []).unwrap();
        assert_eq!(g.components().len(), 3);
    }

    #[test]
    fn connected_cycle_single_component() {
        let g = Graph::cycle(4).unwrap();
        let comps = g.components();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].1, vec![1, 2, 3, 4]);
    }

    #[test]
    fn boundary_examples() {
        let p3 = Graph::path(3).unwrap();
        let w: VertexSet = [3].into_iter().collect();
        assert_eq!(p3.vertex_boundary(&w).unwrap(), [2].into_iter().collect());

        let c4 = Graph::cycle(4).unwrap();
        let w: VertexSet = [1, 2].into_iter().collect();
        assert_eq!(
            c4.vertex_boundary(&w).unwrap(),
            [3, 4].into_iter().collect()
        );

        let star = Graph::star(3).unwrap();
        let w: VertexSet = [2, 3, 4].into_iter().collect();
        assert_eq!(star.vertex_boundary(&w).unwrap(), [1].into_iter().collect());
    }

    #[test]
    fn spanning_tree_of_cycle() {
        let c4 = Graph::cycle(4).unwrap();
        let t = c4.spanning_tree().unwrap();
        assert_eq!(t.edge_count(), 3);
        assert!(t.is_tree());
        // BFS from 1 visits neighbors 2, 4 then 3 via 2; edge {3,4} is dropped.
        assert!(!t.has_edge(3, 4));
    }

    #[test]
    fn tree_metrics() {
        let p5 = Graph::path(5).unwrap();
        assert_eq!(p5.path_between(1, 5).unwrap(), vec![1, 2, 3, 4, 5]);
        assert_eq!(p5.diameter().unwrap(), 4);
        let star = Graph::star(4).unwrap();
        assert_eq!(star.diameter().unwrap(), 2);
    }

    #[test]
    fn classify_families() {
        assert_eq!(Graph::path(4).unwrap().classify(), ComponentFamily::Path);
        assert_eq!(Graph::cycle(5).unwrap().classify(), ComponentFamily::Cycle);
        assert_eq!(
            Graph::complete(4).unwrap().classify(),
            ComponentFamily::Complete
        );
        assert_eq!(
            Graph::star(3).unwrap().classify(),
            ComponentFamily::Other
        );
        // small overlaps resolve to Complete
        assert_eq!(Graph::path(2).unwrap().classify(), ComponentFamily::Complete);
        assert_eq!(Graph::cycle(3).unwrap().classify(), ComponentFamily::Complete);
    }

    #[test]
    fn json_round_trip() {
        let g = Graph::wheel(4).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        let back: Graph = serde_json::from_str(&s).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::new(3, [(1, 1)]).is_err());
        assert!(Graph::new(3, [(0, 2)]).is_err());
        assert!(Graph::new(3, [(2, 4)]).is_err());
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (1..=max_n).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (1..=n)
                .flat_map(|i| ((i + 1)..=n).map(move |j| (i, j)))
                .collect();
            let m = pairs.len();
            proptest::collection::vec(proptest::bool::ANY, m).prop_map(move |mask| {
                let edges: Vec<(usize, usize)> = pairs
                    .iter()
                    .zip(&mask)
                    .filter(|(_, &keep)| keep)
                    .map(|(&e, _)| e)
                    .collect();
                Graph::new(n, edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn join_counts(g in arb_graph(5), h in arb_graph(5)) {
            let j = g.join(&h);
            prop_assert_eq!(j.order(), g.order() + h.order());
            prop_assert_eq!(
                j.edge_count(),
                g.edge_count() + h.edge_count() + g.order() * h.order()
            );
        }

        #[test]
        fn boundary_disjoint_from_w(g in arb_graph(6), mask in proptest::collection::vec(proptest::bool::ANY, 6)) {
            let w: VertexSet = (1..=g.order()).filter(|&v| mask[v - 1]).collect();
            let b = g.vertex_boundary(&w).unwrap();
            prop_assert!(b.is_disjoint(&w));
        }

        #[test]
        fn spanning_tree_props(g in arb_graph(7)) {
            prop_assume!(g.is_connected());
            let t = g.spanning_tree().unwrap();
            prop_assert!(t.is_tree());
            prop_assert_eq!(t.edge_count(), g.order() - 1);
            for (a, b) in t.edges() {
                prop_assert!(g.has_edge(a, b));
            }
        }

        #[test]
        fn union_component_multiset(g in arb_graph(4), h in arb_graph(4)) {
            let u = g.disjoint_union(&h);
            let mut orders: Vec<usize> = u.components().iter().map(|(c, _)| c.order()).collect();
            let mut expect: Vec<usize> = g
                .components()
                .iter()
                .chain(h.components().iter())
                .map(|(c, _)| c.order())
                .collect();
            orders.sort_unstable();
            expect.sort_unstable();
            prop_assert_eq!(orders, expect);
        }
    }
}
