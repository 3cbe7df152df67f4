//! Static undirected simple graphs: parsing, generators, spanning forests,
//! Euler first-occurrence orders, sparsification and the brute-force
//! connectivity reference used throughout the test suites.

use crate::error::{FltoError, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::collections::HashSet;

/// An edge with a stable identifier. Ids are assigned by input order and
/// survive sparsification, so downstream structures can refer back to the
/// original edge list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub id: u32,
    pub u: u32,
    pub v: u32,
}

impl Edge {
    pub fn other(&self, x: u32) -> u32 {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Immutable simple graph in flat adjacency form. All failure handling
/// downstream is overlay state; the graph itself never changes.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    /// Per vertex: (neighbor, edge id), sorted ascending by neighbor.
    adj: Vec<Vec<(u32, u32)>>,
}

impl Graph {
    /// Build from an explicit edge list. Rejects self-loops, duplicates and
    /// out-of-range endpoints. `ids` follow the input order.
    pub fn from_edges(n: usize, list: &[(u32, u32)]) -> Result<Graph> {
        let mut edges = Vec::with_capacity(list.len());
        let mut seen = HashSet::new();
        for (idx, &(a, b)) in list.iter().enumerate() {
            let (u, v) = (a.min(b), a.max(b));
            if u == v {
                return Err(FltoError::InvalidArgument(format!(
                    "edge {idx} is a self-loop at vertex {u}"
                )));
            }
            if v as usize >= n {
                return Err(FltoError::InvalidArgument(format!(
                    "edge {idx} endpoint {v} out of range (n={n})"
                )));
            }
            if !seen.insert((u, v)) {
                return Err(FltoError::InvalidArgument(format!(
                    "duplicate edge ({u},{v}) at position {idx}"
                )));
            }
            edges.push(Edge { id: idx as u32, u, v });
        }
        Ok(Self::assemble(n, edges))
    }

    fn assemble(n: usize, edges: Vec<Edge>) -> Graph {
        let mut adj = vec![Vec::new(); n];
        for e in &edges {
            adj[e.u as usize].push((e.v, e.id));
            adj[e.v as usize].push((e.u, e.id));
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Edge lookup by stable id. Ids are dense for freshly built graphs but
    /// sparse after `sparsify`, hence the linear fallback is avoided by the
    /// sorted-id invariant (input order is ascending).
    pub fn edge_by_id(&self, id: u32) -> Option<&Edge> {
        match self.edges.binary_search_by_key(&id, |e| e.id) {
            Ok(pos) => Some(&self.edges[pos]),
            Err(_) => None,
        }
    }

    pub fn neighbors(&self, v: u32) -> impl Iterator<Item = u32> + '_ {
        self.adj[v as usize].iter().map(|&(w, _)| w)
    }

    pub fn incident(&self, v: u32) -> &[(u32, u32)] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adj[u as usize]
            .binary_search_by_key(&v, |&(w, _)| w)
            .is_ok()
    }

    /// Serialize back to the edge-list text format accepted by `load_graph`.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.edges.len());
        for e in &self.edges {
            s.push_str(&format!("{} {}\n", e.u, e.v));
        }
        s
    }

    /// True iff `u` and `v` are connected after removing the given vertices
    /// and edges. This is the reference oracle every structure is tested
    /// against; it is deliberately plain BFS.
    pub fn connected_bfs(
        &self,
        failed_v: &[u32],
        failed_e: &[u32],
        u: u32,
        v: u32,
    ) -> Result<bool> {
        if u as usize >= self.n || v as usize >= self.n {
            return Err(FltoError::Domain(format!(
                "query vertex out of range ({u},{v})"
            )));
        }
        if failed_v.contains(&u) || failed_v.contains(&v) {
            return Err(FltoError::Domain(
                "query endpoint is a failed vertex".into(),
            ));
        }
        if u == v {
            return Ok(true);
        }
        let mut dead = vec![false; self.n];
        for &x in failed_v {
            if (x as usize) < self.n {
                dead[x as usize] = true;
            }
        }
        let dead_e: HashSet<u32> = failed_e.iter().copied().collect();
        let mut seen = vec![false; self.n];
        let mut queue = std::collections::VecDeque::new();
        seen[u as usize] = true;
        queue.push_back(u);
        while let Some(x) = queue.pop_front() {
            for &(w, eid) in &self.adj[x as usize] {
                if dead[w as usize] || seen[w as usize] || dead_e.contains(&eid) {
                    continue;
                }
                if w == v {
                    return Ok(true);
                }
                seen[w as usize] = true;
                queue.push_back(w);
            }
        }
        Ok(false)
    }

    /// Connected component labels of the graph minus failures; label is the
    /// smallest surviving vertex of the component, failed vertices get None.
    pub fn components_without(&self, failed_v: &[u32], failed_e: &[u32]) -> Vec<Option<u32>> {
        let mut dead = vec![false; self.n];
        for &x in failed_v {
            dead[x as usize] = true;
        }
        let dead_e: HashSet<u32> = failed_e.iter().copied().collect();
        let mut label: Vec<Option<u32>> = vec![None; self.n];
        for s in 0..self.n {
            if dead[s] || label[s].is_some() {
                continue;
            }
            let mut queue = std::collections::VecDeque::new();
            label[s] = Some(s as u32);
            queue.push_back(s as u32);
            while let Some(x) = queue.pop_front() {
                for &(w, eid) in &self.adj[x as usize] {
                    if dead[w as usize] || label[w as usize].is_some() || dead_e.contains(&eid) {
                        continue;
                    }
                    label[w as usize] = Some(s as u32);
                    queue.push_back(w);
                }
            }
        }
        label
    }

    /// Nagamochi-Ibaraki style sparsification: the union of `dstar + 1`
    /// successively extracted edge-disjoint maximal spanning forests.
    /// Connectivity under up to `dstar` failures is preserved and the output
    /// has at most `min(m, (dstar+1) * n)` edges with their original ids.
    pub fn sparsify(&self, dstar: usize) -> Graph {
        let rounds = dstar + 1;
        let mut taken = vec![false; self.edges.len()];
        let mut keep: Vec<Edge> = Vec::new();
        for _ in 0..rounds {
            let mut dsu = Dsu::new(self.n);
            let mut any = false;
            for (pos, e) in self.edges.iter().enumerate() {
                if taken[pos] {
                    continue;
                }
                if dsu.union(e.u as usize, e.v as usize) {
                    taken[pos] = true;
                    keep.push(*e);
                    any = true;
                }
            }
            if !any {
                break;
            }
        }
        keep.sort_unstable_by_key(|e| e.id);
        Self::assemble(self.n, keep)
    }

    /// Deterministic BFS spanning forest, roots at the smallest unvisited
    /// vertex, neighbors scanned in ascending order.
    pub fn spanning_forest(&self) -> SpanningForest {
        let mut parent: Vec<Option<u32>> = vec![None; self.n];
        let mut parent_edge: Vec<Option<u32>> = vec![None; self.n];
        let mut visited = vec![false; self.n];
        let mut roots = Vec::new();
        let mut edgeset = Vec::new();
        for s in 0..self.n {
            if visited[s] {
                continue;
            }
            visited[s] = true;
            roots.push(s as u32);
            let mut queue = std::collections::VecDeque::new();
            queue.push_back(s as u32);
            while let Some(x) = queue.pop_front() {
                for &(w, eid) in &self.adj[x as usize] {
                    if visited[w as usize] {
                        continue;
                    }
                    visited[w as usize] = true;
                    parent[w as usize] = Some(x);
                    parent_edge[w as usize] = Some(eid);
                    edgeset.push(eid);
                    queue.push_back(w);
                }
            }
        }
        SpanningForest {
            parent,
            parent_edge,
            edgeset,
            roots,
        }
    }
}

/// Parse the edge-list text format: first line `n m`, then `m` lines `u v`.
pub fn load_graph(text: &str) -> Result<Graph> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| FltoError::Parse { line: 1, msg: "empty document".into() })?;
    let mut it = header.split_whitespace();
    let n: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| FltoError::Parse { line: 1, msg: "expected vertex count".into() })?;
    let m: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| FltoError::Parse { line: 1, msg: "expected edge count".into() })?;
    if it.next().is_some() {
        return Err(FltoError::Parse { line: 1, msg: "trailing tokens in header".into() });
    }

    let mut list: Vec<(u32, u32)> = Vec::with_capacity(m);
    let mut seen = HashSet::new();
    for (i, raw) in lines {
        let lineno = i + 1;
        let t = raw.trim();
        if t.is_empty() {
            continue;
        }
        let mut parts = t.split_whitespace();
        let parse = |tok: Option<&str>| -> Result<u32> {
            tok.and_then(|s| s.parse().ok()).ok_or_else(|| FltoError::Parse {
                line: lineno,
                msg: format!("malformed edge line {t:?}"),
            })
        };
        let u = parse(parts.next())?;
        let v = parse(parts.next())?;
        if parts.next().is_some() {
            return Err(FltoError::Parse { line: lineno, msg: "trailing tokens".into() });
        }
        if u == v {
            return Err(FltoError::Parse { line: lineno, msg: format!("self-loop at {u}") });
        }
        if u as usize >= n || v as usize >= n {
            return Err(FltoError::Parse {
                line: lineno,
                msg: format!("vertex id out of range (n={n})"),
            });
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(FltoError::Parse {
                line: lineno,
                msg: format!("duplicate edge ({u},{v})"),
            });
        }
        list.push((u, v));
    }
    if list.len() != m {
        return Err(FltoError::Parse {
            line: 1,
            msg: format!("header promised {m} edges, found {}", list.len()),
        });
    }
    Graph::from_edges(n, &list)
}

/// Generator models for the fuzz corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenModel {
    /// `m` distinct edges sampled uniformly on `n` vertices.
    Gnm { n: usize, m: usize },
    /// Random `k`-regular graph via the pairing model (retries until simple).
    RandomRegular { n: usize, k: usize },
    /// rows x cols lattice.
    Grid { rows: usize, cols: usize },
    /// `cliques` cliques of `size` vertices, consecutive cliques sharing one
    /// cut vertex. Adversarial for vertex failures.
    CliqueChain { cliques: usize, size: usize },
}

/// Deterministic generator: identical (model, seed) yields an identical graph.
pub fn generate_graph(model: GenModel, seed: u64) -> Result<Graph> {
    match model {
        GenModel::Gnm { n, m } => {
            let max = n.saturating_mul(n.saturating_sub(1)) / 2;
            if m > max {
                return Err(FltoError::InvalidArgument(format!(
                    "gnm: m={m} exceeds n(n-1)/2={max}"
                )));
            }
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let mut seen = HashSet::new();
            let mut list = Vec::with_capacity(m);
            while list.len() < m {
                let u = rng.gen_range(0..n as u32);
                let v = rng.gen_range(0..n as u32);
                if u == v {
                    continue;
                }
                let key = (u.min(v), u.max(v));
                if seen.insert(key) {
                    list.push(key);
                }
            }
            Graph::from_edges(n, &list)
        }
        GenModel::RandomRegular { n, k } => {
            if k >= n.max(1) || n * k % 2 != 0 {
                return Err(FltoError::InvalidArgument(format!(
                    "random_regular: infeasible (n={n}, k={k})"
                )));
            }
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            'attempt: for _ in 0..1000 {
                let mut stubs: Vec<u32> = (0..n as u32).flat_map(|v| std::iter::repeat(v).take(k)).collect();
                // Fisher-Yates on the stub multiset, then pair consecutive.
                for i in (1..stubs.len()).rev() {
                    let j = rng.gen_range(0..=i);
                    stubs.swap(i, j);
                }
                let mut seen = HashSet::new();
                let mut list = Vec::with_capacity(n * k / 2);
                for pair in stubs.chunks(2) {
                    let (u, v) = (pair[0], pair[1]);
                    if u == v || !seen.insert((u.min(v), u.max(v))) {
                        continue 'attempt;
                    }
                    list.push((u, v));
                }
                return Graph::from_edges(n, &list);
            }
            Err(FltoError::InvalidArgument(format!(
                "random_regular: no simple pairing found for n={n}, k={k}"
            )))
        }
        GenModel::Grid { rows, cols } => {
            if rows == 0 || cols == 0 {
                return Err(FltoError::InvalidArgument("grid: empty dimensions".into()));
            }
            let idx = |r: usize, c: usize| (r * cols + c) as u32;
            let mut list = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    if c + 1 < cols {
                        list.push((idx(r, c), idx(r, c + 1)));
                    }
                    if r + 1 < rows {
                        list.push((idx(r, c), idx(r + 1, c)));
                    }
                }
            }
            Graph::from_edges(rows * cols, &list)
        }
        GenModel::CliqueChain { cliques, size } => {
            if cliques == 0 || size < 2 {
                return Err(FltoError::InvalidArgument(
                    "clique_chain: need at least one clique of size >= 2".into(),
                ));
            }
            let n = cliques * (size - 1) + 1;
            let mut list = Vec::new();
            for i in 0..cliques {
                let base = (i * (size - 1)) as u32;
                for a in 0..size as u32 {
                    for b in (a + 1)..size as u32 {
                        list.push((base + a, base + b));
                    }
                }
            }
            Graph::from_edges(n, &list)
        }
    }
}

/// Spanning forest of a graph: parent pointers plus the ids of forest edges.
#[derive(Debug, Clone)]
pub struct SpanningForest {
    pub parent: Vec<Option<u32>>,
    pub parent_edge: Vec<Option<u32>>,
    pub edgeset: Vec<u32>,
    pub roots: Vec<u32>,
}

impl SpanningForest {
    /// Children adjacency of the forest, sorted ascending.
    pub fn children(&self) -> Vec<Vec<u32>> {
        let mut ch = vec![Vec::new(); self.parent.len()];
        for (v, p) in self.parent.iter().enumerate() {
            if let Some(p) = p {
                ch[*p as usize].push(v as u32);
            }
        }
        for c in &mut ch {
            c.sort_unstable();
        }
        ch
    }

    /// Vertices of the tree rooted at `root`.
    pub fn tree_vertices(&self, root: u32) -> Vec<u32> {
        let ch = self.children();
        let mut out = Vec::new();
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            out.push(x);
            for &c in &ch[x as usize] {
                stack.push(c);
            }
        }
        out.sort_unstable();
        out
    }
}

/// First-occurrence Euler order of a tree: each vertex once, in the order it
/// is first visited by a DFS tour (children ascending).
#[derive(Debug, Clone)]
pub struct EulerOrder {
    pub order: Vec<u32>,
    /// position[v] = index of v in `order`; usize::MAX for vertices outside.
    pub position: Vec<usize>,
}

impl EulerOrder {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn pos(&self, v: u32) -> Option<usize> {
        let p = *self.position.get(v as usize)?;
        if p == usize::MAX {
            None
        } else {
            Some(p)
        }
    }
}

/// Euler first-occurrence order for one tree of a spanning forest.
pub fn euler_first_occurrence(f: &SpanningForest, root: u32) -> Result<EulerOrder> {
    if (root as usize) >= f.parent.len() || f.parent[root as usize].is_some() {
        return Err(FltoError::Domain(format!("{root} is not a forest root")));
    }
    let ch = f.children();
    let n = f.parent.len();
    Ok(euler_from_children(n, &ch, root))
}

/// Euler first-occurrence order from explicit adjacency. `n_universe` sizes
/// the inverse position map.
pub fn euler_from_adjacency(n_universe: usize, adj: &[Vec<u32>], root: u32) -> EulerOrder {
    // Iterative DFS; neighbors pre-sorted ascending, visit in that order.
    let mut order = Vec::new();
    let mut position = vec![usize::MAX; n_universe];
    let mut visited = HashSet::new();
    let mut stack = vec![(root, 0usize)];
    visited.insert(root);
    position[root as usize] = 0;
    order.push(root);
    let nbrs = |v: u32| -> &[u32] { &adj[v as usize] };
    while let Some(&mut (v, ref mut i)) = stack.last_mut() {
        let a = nbrs(v);
        let mut advanced = false;
        while *i < a.len() {
            let w = a[*i];
            *i += 1;
            if visited.insert(w) {
                position[w as usize] = order.len();
                order.push(w);
                stack.push((w, 0));
                advanced = true;
                break;
            }
        }
        if !advanced && !stack.is_empty() {
            stack.pop();
        }
    }
    EulerOrder { order, position }
}

fn euler_from_children(n: usize, children: &[Vec<u32>], root: u32) -> EulerOrder {
    let adj: Vec<Vec<u32>> = children.to_vec();
    euler_from_adjacency(n, &adj, root)
}

/// Minimal union-find used across the crate.
#[derive(Debug, Clone)]
pub struct Dsu {
    parent: Vec<usize>,
    size: Vec<u32>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn load_triangle() {
        let g = load_graph("3 3\n0 1\n1 2\n0 2").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 3);
        assert!(g.has_edge(0, 2));
    }

    #[test]
    fn load_isolated() {
        let g = load_graph("2 0").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn load_rejects_self_loop() {
        let err = load_graph("2 1\n0 0").unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("line 2"), "{msg}");
        assert!(msg.contains("self-loop"), "{msg}");
    }

    #[test]
    fn load_rejects_duplicate_and_range() {
        assert!(load_graph("3 2\n0 1\n1 0").is_err());
        assert!(load_graph("2 1\n0 5").is_err());
    }

    #[test]
    fn gnm_empty_and_counts() {
        let g = generate_graph(GenModel::Gnm { n: 8, m: 0 }, 1).unwrap();
        assert_eq!(g.vertex_count(), 8);
        assert_eq!(g.edge_count(), 0);

        let g = generate_graph(GenModel::Gnm { n: 64, m: 256 }, 7).unwrap();
        let degree_sum: usize = (0..64).map(|v| g.degree(v)).sum();
        assert_eq!(degree_sum, 512);
    }

    #[test]
    fn gnm_deterministic() {
        let a = generate_graph(GenModel::Gnm { n: 32, m: 60 }, 99).unwrap();
        let b = generate_graph(GenModel::Gnm { n: 32, m: 60 }, 99).unwrap();
        assert_eq!(a.edges(), b.edges());
    }

    #[test]
    fn grid_counts() {
        let g = generate_graph(GenModel::Grid { rows: 3, cols: 3 }, 0).unwrap();
        assert_eq!(g.vertex_count(), 9);
        assert_eq!(g.edge_count(), 12);
    }

    #[test]
    fn regular_feasibility() {
        assert!(generate_graph(GenModel::RandomRegular { n: 5, k: 3 }, 0).is_err());
        let g = generate_graph(GenModel::RandomRegular { n: 8, k: 3 }, 3).unwrap();
        for v in 0..8 {
            assert_eq!(g.degree(v), 3);
        }
    }

    #[test]
    fn clique_chain_shape() {
        let g = generate_graph(GenModel::CliqueChain { cliques: 3, size: 4 }, 0).unwrap();
        assert_eq!(g.vertex_count(), 10);
        // Shared vertices are cut vertices.
        assert!(!g.connected_bfs(&[3], &[], 0, 9).unwrap());
        assert!(g.connected_bfs(&[], &[], 0, 9).unwrap());
    }

    #[test]
    fn sparsify_tree_identity() {
        let g = load_graph("5 4\n0 1\n1 2\n2 3\n3 4").unwrap();
        for d in 1..4 {
            let s = g.sparsify(d);
            assert_eq!(s.edge_count(), 4);
            assert_eq!(s.edges(), g.edges());
        }
    }

    #[test]
    fn sparsify_k6_bound() {
        let mut list = Vec::new();
        for a in 0..6u32 {
            for b in (a + 1)..6 {
                list.push((a, b));
            }
        }
        let g = Graph::from_edges(6, &list).unwrap();
        let s = g.sparsify(1);
        assert!(s.edge_count() <= 12, "got {}", s.edge_count());
    }

    /// Exhaustive oracle: sparsify(K8, 2) must agree with K8 under every
    /// failure set of size <= 2 for every surviving pair.
    #[test]
    fn sparsify_k8_exhaustive() {
        let mut list = Vec::new();
        for a in 0..8u32 {
            for b in (a + 1)..8 {
                list.push((a, b));
            }
        }
        let g = Graph::from_edges(8, &list).unwrap();
        let s = g.sparsify(2);
        let mut dsets: Vec<Vec<u32>> = vec![vec![]];
        for a in 0..8u32 {
            dsets.push(vec![a]);
            for b in (a + 1)..8 {
                dsets.push(vec![a, b]);
            }
        }
        for d in &dsets {
            for u in 0..8u32 {
                for v in 0..8u32 {
                    if d.contains(&u) || d.contains(&v) {
                        continue;
                    }
                    let want = g.connected_bfs(d, &[], u, v).unwrap();
                    let got = s.connected_bfs(d, &[], u, v).unwrap();
                    assert_eq!(want, got, "D={d:?} pair=({u},{v})");
                }
            }
        }
    }

    /// Sparsify equivalence on small random graphs, all D up to dstar.
    #[test]
    fn sparsify_random_exhaustive_small() {
        for seed in 0..20u64 {
            let n = 6 + (seed % 5) as usize; // 6..=10
            let max = n * (n - 1) / 2;
            let m = (seed as usize * 3 + n) % (max + 1);
            let g = generate_graph(GenModel::Gnm { n, m }, seed).unwrap();
            for dstar in 1..=2usize {
                let s = g.sparsify(dstar);
                assert!(s.edge_count() <= g.edge_count().min((dstar + 1) * n));
                let verts: Vec<u32> = (0..n as u32).collect();
                let mut dsets: Vec<Vec<u32>> = vec![vec![]];
                for (i, &a) in verts.iter().enumerate() {
                    dsets.push(vec![a]);
                    if dstar >= 2 {
                        for &b in &verts[i + 1..] {
                            dsets.push(vec![a, b]);
                        }
                    }
                }
                for d in &dsets {
                    let want = g.components_without(d, &[]);
                    let got = s.components_without(d, &[]);
                    assert_eq!(want, got, "seed={seed} n={n} m={m} D={d:?}");
                }
            }
        }
    }

    #[test]
    fn spanning_forest_basics() {
        let path = load_graph("4 3\n0 1\n1 2\n2 3").unwrap();
        let f = path.spanning_forest();
        assert_eq!(f.edgeset.len(), 3);
        assert_eq!(f.roots, vec![0]);

        let tri = load_graph("3 3\n0 1\n1 2\n0 2").unwrap();
        let f = tri.spanning_forest();
        assert_eq!(f.edgeset.len(), 2);

        let two = load_graph("5 3\n0 1\n1 2\n3 4").unwrap();
        let f = two.spanning_forest();
        assert_eq!(f.roots.len(), 2);
    }

    #[test]
    fn euler_single_vertex_and_star() {
        let g = load_graph("1 0").unwrap();
        let f = g.spanning_forest();
        let e = euler_first_occurrence(&f, 0).unwrap();
        assert_eq!(e.order, vec![0]);

        // K_{1,3} rooted at center 0: center first, leaves in child order.
        let star = load_graph("4 3\n0 1\n0 2\n0 3").unwrap();
        let f = star.spanning_forest();
        let e = euler_first_occurrence(&f, 0).unwrap();
        assert_eq!(e.order, vec![0, 1, 2, 3]);
    }

    /// Removing f tree edges from P_5's Euler order yields at most 2f+1
    /// maximal intervals; verified over every edge subset.
    #[test]
    fn euler_interval_bound_p5() {
        let g = load_graph("5 4\n0 1\n1 2\n2 3\n3 4").unwrap();
        let f = g.spanning_forest();
        let eo = euler_first_occurrence(&f, 0).unwrap();
        let tree_edges: Vec<(u32, u32)> = vec![(0, 1), (1, 2), (2, 3), (3, 4)];
        for mask in 0u32..16 {
            let removed: Vec<(u32, u32)> = (0..4)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| tree_edges[i])
                .collect();
            // Component of each vertex in the tree minus removed edges.
            let mut dsu = Dsu::new(5);
            for &(a, b) in &tree_edges {
                if !removed.contains(&(a, b)) {
                    dsu.union(a as usize, b as usize);
                }
            }
            // Count maximal runs of the Euler order with constant component.
            let mut intervals = 0;
            let mut prev: Option<usize> = None;
            for &v in &eo.order {
                let c = dsu.find(v as usize);
                if prev != Some(c) {
                    intervals += 1;
                }
                prev = Some(c);
            }
            let f_cnt = removed.len();
            assert!(
                intervals <= 2 * f_cnt + 1,
                "mask={mask:#b} intervals={intervals}"
            );
            if f_cnt == 1 {
                assert_eq!(intervals, 2);
            }
        }
    }

    #[test]
    fn bfs_reference_examples() {
        let path = load_graph("3 2\n0 1\n1 2").unwrap();
        assert!(!path.connected_bfs(&[1], &[], 0, 2).unwrap());
        assert!(path.connected_bfs(&[], &[], 0, 2).unwrap());

        let c5 = load_graph("5 5\n0 1\n1 2\n2 3\n3 4\n0 4").unwrap();
        for kill in 0..5u32 {
            for u in 0..5u32 {
                for v in 0..5u32 {
                    if u == kill || v == kill {
                        continue;
                    }
                    assert!(c5.connected_bfs(&[kill], &[], u, v).unwrap());
                }
            }
        }
        assert!(path.connected_bfs(&[], &[], 2, 2).unwrap());
        assert!(path.connected_bfs(&[1], &[], 1, 1).is_err());
    }

    #[test]
    fn bfs_symmetry_reflexivity() {
        let g = generate_graph(GenModel::Gnm { n: 20, m: 30 }, 5).unwrap();
        for u in 0..20u32 {
            for v in 0..20u32 {
                assert_eq!(
                    g.connected_bfs(&[], &[], u, v).unwrap(),
                    g.connected_bfs(&[], &[], v, u).unwrap()
                );
            }
        }
    }
}
