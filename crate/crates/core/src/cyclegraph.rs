//! Check multigraph of a column-weight-2 code and its short cycles.
//!
//! Every column touches exactly two checks, so the Tanner graph contracts to
//! a multigraph on the checks with one edge per column. A Tanner cycle of
//! length `2k` is a `k`-edge cycle here.

use crate::code::LdpcCode;
use crate::error::{Error, Result};
use std::collections::{BTreeMap, VecDeque};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckMultigraph {
    vertex_count: usize,
    edges: Vec<[usize; 2]>,
    // (neighbour, edge id), sorted by edge id
    adj: Vec<Vec<(usize, usize)>>,
}

impl CheckMultigraph {
    /// Builds a multigraph from explicit endpoint pairs; edge `i` is column `i`.
    pub fn from_edges(vertex_count: usize, edges: Vec<[usize; 2]>) -> Result<Self> {
        let mut adj = vec![Vec::new(); vertex_count];
        for (e, &[a, b]) in edges.iter().enumerate() {
            if a >= vertex_count || b >= vertex_count {
                return Err(Error::Code(format!("edge {e} endpoint out of range")));
            }
            if a == b {
                return Err(Error::Code(format!(
                    "edge {e} is a self-loop at vertex {a}"
                )));
            }
            adj[a].push((b, e));
            adj[b].push((a, e));
        }
        Ok(CheckMultigraph {
            vertex_count,
            edges,
            adj,
        })
    }

    pub fn from_code(code: &LdpcCode) -> Result<Self> {
        let edges = (0..code.n()).map(|c| code.column(c).rows).collect();
        Self::from_edges(code.rows(), edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn endpoints(&self, e: usize) -> [usize; 2] {
        self.edges[e]
    }

    /// `(neighbour, edge)` pairs at `v`.
    pub fn neighbours(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// The endpoint of `e` that is not `v`.
    #[inline]
    pub fn other(&self, e: usize, v: usize) -> usize {
        let [a, b] = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    /// Tanner girth (twice the shortest multigraph cycle).
    pub fn girth(&self) -> Result<usize> {
        let mut best = usize::MAX;
        let mut dist = vec![usize::MAX; self.vertex_count];
        let mut parent = vec![usize::MAX; self.vertex_count];
        let mut queue = VecDeque::new();
        for root in 0..self.vertex_count {
            dist.fill(usize::MAX);
            dist[root] = 0;
            queue.clear();
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                if 2 * dist[u] + 1 >= best {
                    break;
                }
                for &(w, e) in &self.adj[u] {
                    if e == parent[u] && u != root {
                        continue;
                    }
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = e;
                        queue.push_back(w);
                    } else if !(w == root && dist[u] == 0) {
                        best = best.min(dist[u] + dist[w] + 1);
                    }
                }
            }
        }
        if best == usize::MAX {
            Err(Error::NoCycle)
        } else {
            Ok(2 * best)
        }
    }

    /// Every simple cycle with at most `max_edges` edges, each exactly once.
    ///
    /// Each cycle is rooted at its smallest edge `e0 = (a, b)` and found as a
    /// path from `b` back to `a` over larger edges only, so no dedup is needed.
    pub fn enumerate_cycles(&self, max_edges: usize) -> Vec<CycleInstance> {
        let mut out = Vec::new();
        for e0 in 0..self.edges.len() {
            self.cycles_rooted_at(e0, max_edges, |c| out.push(c));
        }
        out
    }

    /// Cycles whose smallest edge is `e0`; the unit of parallel work.
    pub fn cycles_rooted_at(
        &self,
        e0: usize,
        max_edges: usize,
        mut emit: impl FnMut(CycleInstance),
    ) {
        if max_edges < 2 {
            return;
        }
        let [a, b] = self.edges[e0];
        let dist = self.bfs_restricted(a, e0, max_edges);
        if dist[b] == usize::MAX || dist[b] + 1 > max_edges {
            return;
        }
        let mut on_path = vec![false; self.vertex_count];
        on_path[b] = true;
        let mut edges = vec![e0];
        let mut verts = vec![b];
        self.extend_cycle(
            a,
            e0,
            max_edges,
            &dist,
            &mut on_path,
            &mut edges,
            &mut verts,
            &mut emit,
        );
    }

    #[allow(clippy::too_many_arguments)]
    fn extend_cycle(
        &self,
        target: usize,
        e0: usize,
        max_edges: usize,
        dist: &[usize],
        on_path: &mut [bool],
        edges: &mut Vec<usize>,
        verts: &mut Vec<usize>,
        emit: &mut impl FnMut(CycleInstance),
    ) {
        let here = *verts.last().expect("path is never empty");
        for &(w, e) in &self.adj[here] {
            if e <= e0 {
                continue;
            }
            if w == target {
                edges.push(e);
                verts.push(w);
                emit(CycleInstance::from_walk_unchecked(
                    edges.clone(),
                    verts.clone(),
                ));
                edges.pop();
                verts.pop();
                continue;
            }
            if on_path[w] || dist[w] == usize::MAX || edges.len() + 1 + dist[w] > max_edges {
                continue;
            }
            on_path[w] = true;
            edges.push(e);
            verts.push(w);
            self.extend_cycle(target, e0, max_edges, dist, on_path, edges, verts, emit);
            verts.pop();
            edges.pop();
            on_path[w] = false;
        }
    }

    // BFS from `src` using only edges with id > `min_edge`, up to `limit` hops.
    fn bfs_restricted(&self, src: usize, min_edge: usize, limit: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.vertex_count];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            if dist[u] >= limit {
                continue;
            }
            for &(w, e) in &self.adj[u] {
                if e > min_edge && dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Counts of cycles keyed by Tanner length, up to `max_tanner_len`.
    pub fn cycle_distribution(&self, max_tanner_len: usize) -> BTreeMap<usize, usize> {
        let mut dist = BTreeMap::new();
        for e0 in 0..self.edges.len() {
            self.cycles_rooted_at(e0, max_tanner_len / 2, |c| {
                *dist.entry(c.tanner_length()).or_insert(0) += 1;
            });
        }
        dist
    }

    /// All simple paths from `from` to `to` with between 1 and `max_len` edges
    /// whose interior avoids `blocked` vertices and whose edges avoid
    /// `used_edges`. Paths are returned as (edges, interior vertices).
    /// With `from == to` the result is the set of cycles through `from`,
    /// each found once per direction.
    pub fn simple_paths(
        &self,
        from: usize,
        to: usize,
        max_len: usize,
        blocked: &[bool],
        used_edges: &[bool],
    ) -> Vec<(Vec<usize>, Vec<usize>)> {
        let mut out = Vec::new();
        let mut on_path = vec![false; self.vertex_count];
        on_path[from] = true;
        let mut edges = Vec::new();
        let mut interior = Vec::new();
        self.paths_rec(
            from,
            to,
            max_len,
            blocked,
            used_edges,
            &mut on_path,
            &mut edges,
            &mut interior,
            &mut |e: &[usize], i: &[usize]| out.push((e.to_vec(), i.to_vec())),
        );
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn paths_rec(
        &self,
        here: usize,
        to: usize,
        max_len: usize,
        blocked: &[bool],
        used_edges: &[bool],
        on_path: &mut [bool],
        edges: &mut Vec<usize>,
        interior: &mut Vec<usize>,
        emit: &mut impl FnMut(&[usize], &[usize]),
    ) {
        if edges.len() >= max_len {
            return;
        }
        for &(w, e) in &self.adj[here] {
            if used_edges[e] || edges.contains(&e) {
                continue;
            }
            if w == to {
                edges.push(e);
                emit(edges, interior);
                edges.pop();
                continue;
            }
            if on_path[w] || blocked[w] {
                continue;
            }
            on_path[w] = true;
            edges.push(e);
            interior.push(w);
            self.paths_rec(
                w, to, max_len, blocked, used_edges, on_path, edges, interior, emit,
            );
            interior.pop();
            edges.pop();
            on_path[w] = false;
        }
    }
}

/// A simple cycle of the check multigraph.
///
/// `edges[i]` and `edges[i + 1]` meet at `vertices[i]`; the last vertex joins
/// the last edge back to the first. The stored orientation is canonical:
/// it starts at the smallest edge and runs in the direction whose edge
/// sequence is lexicographically smaller.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleInstance {
    edges: Vec<usize>,
    vertices: Vec<usize>,
}

impl CycleInstance {
    // `verts[i]` is the vertex reached after `edges[i]`.
    fn from_walk_unchecked(edges: Vec<usize>, verts: Vec<usize>) -> Self {
        let mut c = CycleInstance {
            edges,
            vertices: verts,
        };
        c.canonicalize();
        c
    }

    /// Builds a cycle from alternating `column, row, column, row, ...` tokens,
    /// where each row joins the column before it to the column after it
    /// (the last row joins back to the first column).
    pub fn from_alternating(tokens: &[usize], graph: &CheckMultigraph) -> Result<Self> {
        if tokens.len() < 4 || tokens.len() % 2 != 0 {
            return Err(Error::Walk(format!(
                "expected an even number (>= 4) of tokens, got {}",
                tokens.len()
            )));
        }
        let k = tokens.len() / 2;
        let edges: Vec<usize> = (0..k).map(|i| tokens[2 * i]).collect();
        let verts: Vec<usize> = (0..k).map(|i| tokens[2 * i + 1]).collect();
        Self::from_edges_and_junctions(edges, verts, graph)
    }

    /// Validates a closed walk given as edges plus junction vertices.
    pub fn from_edges_and_junctions(
        edges: Vec<usize>,
        verts: Vec<usize>,
        graph: &CheckMultigraph,
    ) -> Result<Self> {
        let k = edges.len();
        if k < 2 || verts.len() != k {
            return Err(Error::Walk("a cycle needs at least two edges".into()));
        }
        for (&e, &v) in edges.iter().zip(&verts) {
            if e >= graph.edge_count() || v >= graph.vertex_count() {
                return Err(Error::Walk(format!("column {e} or row {v} out of range")));
            }
        }
        let mut seen = verts.clone();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Walk("repeated vertex".into()));
        }
        let mut es = edges.clone();
        es.sort_unstable();
        if es.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Walk("repeated edge".into()));
        }
        for i in 0..k {
            let prev = verts[(i + k - 1) % k];
            let [a, b] = graph.endpoints(edges[i]);
            let next = verts[i];
            if !((a == prev && b == next) || (b == prev && a == next)) {
                return Err(Error::Walk(format!(
                    "column {} does not join rows {prev} and {next}",
                    edges[i]
                )));
            }
        }
        Ok(Self::from_walk_unchecked(edges, verts))
    }

    fn canonicalize(&mut self) {
        let k = self.edges.len();
        let start = (0..k).min_by_key(|&i| self.edges[i]).expect("nonempty");
        self.edges.rotate_left(start);
        self.vertices.rotate_left(start);
        if k == 2 {
            self.vertices.sort_unstable();
        } else if self.edges[k - 1] < self.edges[1] {
            // reverse direction, keeping edges[0] first
            self.edges[1..].reverse();
            self.vertices.reverse();
        }
    }

    /// Canonical column sequence.
    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    /// Junction rows; `vertices()[i]` joins `edges()[i]` and the next edge.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn tanner_length(&self) -> usize {
        2 * self.edges.len()
    }

    /// Column set, sorted.
    pub fn column_set(&self) -> Vec<usize> {
        let mut s = self.edges.clone();
        s.sort_unstable();
        s
    }

    /// `column row column row ...` listing.
    pub fn alternating_form(&self) -> String {
        let mut toks = Vec::with_capacity(2 * self.edges.len());
        for (e, v) in self.edges.iter().zip(&self.vertices) {
            toks.push(*e);
            toks.push(*v);
        }
        crate::code::join(&toks)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn ex(name: &str) -> CheckMultigraph {
        CheckMultigraph::from_code(&fixtures::load(name).unwrap()).unwrap()
    }

    #[test]
    fn builds_example_graphs() {
        let g = ex("ex1-c1");
        assert_eq!((g.vertex_count(), g.edge_count()), (8, 16));
        assert!((0..8).all(|v| g.degree(v) == 4));
        let g = ex("ex2");
        assert_eq!((g.vertex_count(), g.edge_count()), (26, 52));
        let g = ex("ex3");
        assert_eq!((g.vertex_count(), g.edge_count()), (80, 160));
    }

    #[test]
    fn rejects_self_loop() {
        assert!(CheckMultigraph::from_edges(3, vec![[0, 1], [2, 2]]).is_err());
    }

    #[test]
    fn triangle_and_parallel_edges() {
        let g = CheckMultigraph::from_edges(3, vec![[0, 1], [1, 2], [2, 0]]).unwrap();
        let cycles = g.enumerate_cycles(3);
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].edges(), &[0, 1, 2]);
        assert_eq!(g.girth().unwrap(), 6);

        let g = CheckMultigraph::from_edges(2, vec![[0, 1], [1, 0], [0, 1]]).unwrap();
        assert_eq!(g.enumerate_cycles(2).len(), 3);
        assert_eq!(g.girth().unwrap(), 4);
    }

    #[test]
    fn forest_has_no_cycle() {
        let g = CheckMultigraph::from_edges(4, vec![[0, 1], [1, 2], [1, 3]]).unwrap();
        assert_eq!(g.girth(), Err(Error::NoCycle));
        assert!(g.cycle_distribution(20).is_empty());
    }

    #[test]
    fn example_one_distribution() {
        let g = ex("ex1-c1");
        assert_eq!(g.girth().unwrap(), 8);
        let d = g.cycle_distribution(16);
        assert_eq!(d, BTreeMap::from([(8, 36), (12, 96), (16, 72)]));
    }

    // Hamiltonian cycles of the 8-vertex graph by brute force over vertex orders.
    #[test]
    fn example_one_hamiltonian_count() {
        let g = ex("ex1-c1");
        let mut adj = [[0usize; 8]; 8];
        for &[a, b] in g.edges() {
            adj[a][b] += 1;
            adj[b][a] += 1;
        }
        fn rec(path: &mut Vec<usize>, used: u32, adj: &[[usize; 8]; 8], count: &mut usize) {
            let last = *path.last().unwrap();
            if path.len() == 8 {
                *count += adj[last][path[0]];
                return;
            }
            for v in 1..8 {
                if used >> v & 1 == 0 && adj[last][v] > 0 {
                    path.push(v);
                    let before = *count;
                    let mut sub = 0;
                    rec(path, used | 1 << v, adj, &mut sub);
                    *count = before + sub * adj[last][v];
                    path.pop();
                }
            }
        }
        let mut count = 0;
        rec(&mut vec![0], 1, &adj, &mut count);
        // each undirected cycle is seen in both directions
        assert_eq!(count / 2, 72);
        let eights = g
            .enumerate_cycles(8)
            .iter()
            .filter(|c| c.len() == 8)
            .count();
        assert_eq!(eights, 72);
    }

    #[test]
    fn appendix_form_round_trip() {
        let g = ex("ex1-c1");
        let c = CycleInstance::from_alternating(&[0, 4, 15, 3, 3, 7, 4, 0], &g).unwrap();
        assert_eq!(c.column_set(), vec![0, 3, 4, 15]);
        let text = c.alternating_form();
        let toks: Vec<usize> = text.split(' ').map(|t| t.parse().unwrap()).collect();
        let back = CycleInstance::from_alternating(&toks, &g).unwrap();
        assert_eq!(back, c);
        // reversed walk: 0 0 4 7 3 3 15 4
        let rev = CycleInstance::from_alternating(&[0, 0, 4, 7, 3, 3, 15, 4], &g).unwrap();
        assert_eq!(rev, c);
        assert_eq!(c.edges()[0], 0);
    }

    #[test]
    fn rejects_bad_walks() {
        let g = ex("ex1-c1");
        assert!(CycleInstance::from_alternating(&[0, 4, 15, 3, 3, 7], &g).is_err());
        assert!(CycleInstance::from_alternating(&[0, 4, 15, 3, 3, 7, 4, 1], &g).is_err());
        assert!(CycleInstance::from_alternating(&[0, 4, 15, 3, 3], &g).is_err());
    }

    #[test]
    fn simple_paths_between_rows() {
        let g = ex("ex1-c1");
        let none = vec![false; 8];
        let free = vec![false; 16];
        // K4,4: rows 0 and 4 are joined by column 0 and by 3*3 paths of length 3
        let paths = g.simple_paths(0, 4, 3, &none, &free);
        assert_eq!(paths.iter().filter(|p| p.0.len() == 1).count(), 1);
        assert_eq!(paths.iter().filter(|p| p.0.len() == 3).count(), 9);
        // 4-edge cycles through row 0: 6 right pairs times 3 left rows, both ways
        let loops = g.simple_paths(0, 0, 4, &none, &free);
        assert_eq!(loops.len(), 36);
        let mut blocked = none.clone();
        blocked[5] = true;
        assert_eq!(g.simple_paths(0, 0, 4, &blocked, &free).len(), 18);
    }

    // Brute force: a cycle is a connected edge set in which every touched
    // vertex has degree 2.
    fn brute_force_counts(n: usize, edges: &[[usize; 2]]) -> BTreeMap<usize, usize> {
        let m = edges.len();
        let mut out = BTreeMap::new();
        for mask in 1u32..(1 << m) {
            let chosen: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
            if chosen.len() < 2 {
                continue;
            }
            let mut deg = vec![0; n];
            for &e in &chosen {
                deg[edges[e][0]] += 1;
                deg[edges[e][1]] += 1;
            }
            if deg.iter().any(|&d| d != 0 && d != 2) {
                continue;
            }
            // connectivity over chosen edges
            let mut comp: Vec<usize> = (0..n).collect();
            fn find(c: &mut Vec<usize>, x: usize) -> usize {
                if c[x] != x {
                    let r = find(c, c[x]);
                    c[x] = r;
                }
                c[x]
            }
            for &e in &chosen {
                let (a, b) = (find(&mut comp, edges[e][0]), find(&mut comp, edges[e][1]));
                comp[a] = b;
            }
            let roots: BTreeSet<usize> = (0..n)
                .filter(|&v| deg[v] > 0)
                .map(|v| find(&mut comp, v))
                .collect();
            if roots.len() == 1 {
                *out.entry(2 * chosen.len()).or_insert(0) += 1;
            }
        }
        out
    }

    fn random_multigraph() -> impl Strategy<Value = (usize, Vec<[usize; 2]>)> {
        (3usize..=8).prop_flat_map(|n| {
            let edge = (0..n, 0..n - 1).prop_map(|(a, b)| [a, if b >= a { b + 1 } else { b }]);
            (Just(n), proptest::collection::vec(edge, 2..=13))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn enumeration_matches_brute_force((n, edges) in random_multigraph()) {
            let g = CheckMultigraph::from_edges(n, edges.clone()).unwrap();
            let got = g.cycle_distribution(2 * edges.len());
            prop_assert_eq!(got, brute_force_counts(n, &edges));
        }

        #[test]
        fn cycles_are_valid_and_canonical((n, edges) in random_multigraph()) {
            let g = CheckMultigraph::from_edges(n, edges).unwrap();
            let cycles = g.enumerate_cycles(g.edge_count());
            let keys: BTreeSet<_> = cycles.iter().map(|c| c.edges().to_vec()).collect();
            prop_assert_eq!(keys.len(), cycles.len());
            for c in &cycles {
                let again = CycleInstance::from_edges_and_junctions(
                    c.edges().to_vec(), c.vertices().to_vec(), &g).unwrap();
                prop_assert_eq!(&again, c);
            }
            if let Some(shortest) = cycles.iter().map(|c| c.tanner_length()).min() {
                prop_assert_eq!(g.girth().unwrap(), shortest);
            } else {
                prop_assert!(g.girth().is_err());
            }
        }

        #[test]
        fn counts_invariant_under_relabeling(
            (n, edges) in random_multigraph(),
            seed in any::<u64>(),
        ) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let mut relabeled: Vec<[usize; 2]> =
                edges.iter().map(|&[a, b]| [perm[a], perm[b]]).collect();
            relabeled.shuffle(&mut rng);
            let g1 = CheckMultigraph::from_edges(n, edges.clone()).unwrap();
            let g2 = CheckMultigraph::from_edges(n, relabeled).unwrap();
            prop_assert_eq!(g1.cycle_distribution(26), g2.cycle_distribution(26));
        }
    }
}
