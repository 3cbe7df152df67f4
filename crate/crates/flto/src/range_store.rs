//! Euler-tour-indexed 2D point sets per tree pair with early-terminating
//! range enumeration, plus the interval machinery used after deletions.
//!
//! Each edge of the indexed multigraph becomes one point (x, y) where x and
//! y are Euler positions in the two endpoint trees. Queries enumerate points
//! of a rectangle in ascending (x, then y) order and stop at the first point
//! the caller accepts, reporting how many rejected points were visited.

use crate::error::{FltoError, Result};
use std::collections::HashMap;

/// Edge provenance tag: original edges carry the sentinel, artificial edges
/// carry the id of the component that contributed them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Provenance(u32);

impl Provenance {
    pub const ORIGINAL: Provenance = Provenance(0);

    pub fn component(id: u32) -> Provenance {
        Provenance(id + 1)
    }

    pub fn component_id(self) -> Option<u32> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0 - 1)
        }
    }

    pub fn raw(self) -> u32 {
        self.0
    }

    pub fn from_raw(raw: u32) -> Provenance {
        Provenance(raw)
    }
}

/// One indexed multigraph edge.
#[derive(Debug, Clone, Copy)]
pub struct Point2D {
    pub x: u32,
    pub y: u32,
    /// Index of the edge in the caller's multigraph edge table.
    pub edge: u32,
    pub provenance: Provenance,
}

/// Endpoint description handed to `build_et`: (tree id, Euler position).
#[derive(Debug, Clone, Copy)]
pub struct EtEndpoint {
    pub tree: u32,
    pub pos: u32,
}

#[derive(Debug, Clone, Copy)]
pub struct EtEdge {
    pub a: EtEndpoint,
    pub b: EtEndpoint,
    pub edge: u32,
    pub provenance: Provenance,
}

/// Static 2D range index: points grouped by x, with a merge-sort segment
/// tree over the groups so subtrees without any y in range are skipped.
/// Enumeration is lazily ascending by (x, y).
#[derive(Debug, Clone)]
struct RangeIndex {
    xs: Vec<u32>,
    /// Per x-group, points sorted by y.
    groups: Vec<Vec<Point2D>>,
    /// Segment tree over group indices; node_ys[v] = sorted ys under node v.
    node_ys: Vec<Vec<u32>>,
    len: usize,
}

impl RangeIndex {
    fn build(mut points: Vec<Point2D>) -> RangeIndex {
        points.sort_unstable_by_key(|p| (p.x, p.y, p.edge));
        let mut xs = Vec::new();
        let mut groups: Vec<Vec<Point2D>> = Vec::new();
        for p in points {
            if xs.last() != Some(&p.x) {
                xs.push(p.x);
                groups.push(Vec::new());
            }
            groups.last_mut().unwrap().push(p);
        }
        let len = xs.len();
        let mut node_ys = vec![Vec::new(); 4 * len.max(1)];
        if len > 0 {
            Self::build_node(1, 0, len - 1, &groups, &mut node_ys);
        }
        RangeIndex { xs, groups, node_ys, len }
    }

    fn build_node(v: usize, lo: usize, hi: usize, groups: &[Vec<Point2D>], out: &mut [Vec<u32>]) {
        if lo == hi {
            out[v] = groups[lo].iter().map(|p| p.y).collect();
            return;
        }
        let mid = (lo + hi) / 2;
        Self::build_node(2 * v, lo, mid, groups, out);
        Self::build_node(2 * v + 1, mid + 1, hi, groups, out);
        let (a, b) = (out[2 * v].clone(), out[2 * v + 1].clone());
        let mut merged = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j >= b.len() || (i < a.len() && a[i] <= b[j]) {
                merged.push(a[i]);
                i += 1;
            } else {
                merged.push(b[j]);
                j += 1;
            }
        }
        out[v] = merged;
    }

    fn has_y(ys: &[u32], y1: u32, y2: u32) -> bool {
        let start = ys.partition_point(|&y| y < y1);
        start < ys.len() && ys[start] <= y2
    }

    /// Visit points in [x1,x2] x [y1,y2] ascending by (x, y); the visitor
    /// returns false to stop early. Returns false if stopped.
    fn visit<F: FnMut(&Point2D) -> bool>(&self, x1: u32, x2: u32, y1: u32, y2: u32, f: &mut F) -> bool {
        if self.len == 0 || x1 > x2 || y1 > y2 {
            return true;
        }
        let glo = self.xs.partition_point(|&x| x < x1);
        let ghi = self.xs.partition_point(|&x| x <= x2);
        if glo >= ghi {
            return true;
        }
        self.visit_node(1, 0, self.len - 1, glo, ghi - 1, y1, y2, f)
    }

    #[allow(clippy::too_many_arguments)]
    fn visit_node<F: FnMut(&Point2D) -> bool>(
        &self,
        v: usize,
        lo: usize,
        hi: usize,
        qlo: usize,
        qhi: usize,
        y1: u32,
        y2: u32,
        f: &mut F,
    ) -> bool {
        if qhi < lo || hi < qlo {
            return true;
        }
        if qlo <= lo && hi <= qhi && !Self::has_y(&self.node_ys[v], y1, y2) {
            return true;
        }
        if lo == hi {
            let g = &self.groups[lo];
            let start = g.partition_point(|p| p.y < y1);
            for p in &g[start..] {
                if p.y > y2 {
                    break;
                }
                if !f(p) {
                    return false;
                }
            }
            return true;
        }
        let mid = (lo + hi) / 2;
        if !self.visit_node(2 * v, lo, mid, qlo, qhi, y1, y2, f) {
            return false;
        }
        self.visit_node(2 * v + 1, mid + 1, hi, qlo, qhi, y1, y2, f)
    }
}

/// The per-tree-pair directory of 2D range indexes over a multigraph laid
/// out along Euler orders of a tree set.
#[derive(Debug, Clone)]
pub struct EtStructure {
    directory: HashMap<(u32, u32), RangeIndex>,
    point_count: usize,
}

/// Result of one rectangle enumeration.
#[derive(Debug, Clone, Copy)]
pub struct RangeOutcome {
    pub accepted: Option<Point2D>,
    pub rejected_visited: usize,
}

impl EtStructure {
    /// Index every multigraph edge exactly once under its unordered tree
    /// pair. Intra-tree edges are normalized to x <= y. `tree_sizes[t]` is
    /// the Euler length of tree `t`; endpoints outside it are a build error.
    pub fn build(tree_sizes: &[u32], edges: impl IntoIterator<Item = EtEdge>) -> Result<EtStructure> {
        let mut buckets: HashMap<(u32, u32), Vec<Point2D>> = HashMap::new();
        let mut point_count = 0usize;
        for e in edges {
            for ep in [e.a, e.b] {
                let size = tree_sizes.get(ep.tree as usize).copied().ok_or_else(|| {
                    FltoError::InvalidArgument(format!("edge {} refers to unknown tree {}", e.edge, ep.tree))
                })?;
                if ep.pos >= size {
                    return Err(FltoError::InvalidArgument(format!(
                        "edge {} has no Euler position (tree {} pos {} size {})",
                        e.edge, ep.tree, ep.pos, size
                    )));
                }
            }
            let (p, q) = if (e.a.tree, e.a.pos) <= (e.b.tree, e.b.pos) {
                (e.a, e.b)
            } else {
                (e.b, e.a)
            };
            buckets
                .entry((p.tree, q.tree))
                .or_default()
                .push(Point2D { x: p.pos, y: q.pos, edge: e.edge, provenance: e.provenance });
            point_count += 1;
        }
        let directory = buckets
            .into_iter()
            .map(|(k, pts)| (k, RangeIndex::build(pts)))
            .collect();
        Ok(EtStructure { directory, point_count })
    }

    pub fn point_count(&self) -> usize {
        self.point_count
    }

    pub fn pair_count(&self) -> usize {
        self.directory.len()
    }

    pub fn pair_points(&self, t1: u32, t2: u32) -> usize {
        let key = (t1.min(t2), t1.max(t2));
        self.directory
            .get(&key)
            .map(|ix| ix.groups.iter().map(|g| g.len()).sum())
            .unwrap_or(0)
    }

    /// Enumerate edges between interval `r1` of `t1` and `r2` of `t2`,
    /// stopping at the first point `reject` lets through. Unknown pairs are
    /// empty. `limit` caps visited points as a safety valve.
    pub fn enumerate_range<F: FnMut(&Point2D) -> bool>(
        &self,
        t1: u32,
        r1: (u32, u32),
        t2: u32,
        r2: (u32, u32),
        mut reject: F,
        limit: usize,
    ) -> RangeOutcome {
        let (ta, ra, tb, rb) = if t1 <= t2 { (t1, r1, t2, r2) } else { (t2, r2, t1, r1) };
        let ix = match self.directory.get(&(ta, tb)) {
            Some(ix) => ix,
            None => return RangeOutcome { accepted: None, rejected_visited: 0 },
        };
        let mut rejected = 0usize;
        let mut accepted = None;
        {
            let mut sweep = |x1: u32, x2: u32, y1: u32, y2: u32, dedup: Option<((u32, u32), (u32, u32))>| {
                ix.visit(x1, x2, y1, y2, &mut |p| {
                    if let Some(((dx1, dx2), (dy1, dy2))) = dedup {
                        // Skip points already covered by the first sweep.
                        if p.x >= dx1 && p.x <= dx2 && p.y >= dy1 && p.y <= dy2 {
                            return true;
                        }
                    }
                    if rejected >= limit {
                        return false;
                    }
                    if reject(p) {
                        rejected += 1;
                        true
                    } else {
                        accepted = Some(*p);
                        false
                    }
                })
            };
            if ta == tb {
                // Intra-tree points are stored with x <= y: sweep both
                // orientations of the rectangle.
                if sweep(ra.0, ra.1, rb.0, rb.1, None) {
                    sweep(rb.0, rb.1, ra.0, ra.1, Some((ra, rb)));
                }
            } else {
                sweep(ra.0, ra.1, rb.0, rb.1, None);
            }
        }
        RangeOutcome { accepted, rejected_visited: rejected }
    }
}

/// Disjoint, sorted Euler-position intervals of one tree after removals,
/// each labeled with the surviving subtree it belongs to. Labels are the
/// minimum position of the subtree.
#[derive(Debug, Clone)]
pub struct IntervalSet {
    /// (left, right, label), inclusive positions, sorted by left.
    intervals: Vec<(u32, u32, u32)>,
    removed_edge_count: usize,
}

impl IntervalSet {
    pub fn intervals(&self) -> &[(u32, u32, u32)] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn removed_edge_count(&self) -> usize {
        self.removed_edge_count
    }

    /// Distinct subtree labels in appearance order.
    pub fn labels(&self) -> Vec<u32> {
        let mut ls: Vec<u32> = self.intervals.iter().map(|&(_, _, l)| l).collect();
        ls.sort_unstable();
        ls.dedup();
        ls
    }

    /// Subtree label of the interval containing `pos`.
    pub fn locate(&self, pos: u32) -> Result<u32> {
        let i = self.intervals.partition_point(|&(l, _, _)| l <= pos);
        if i > 0 {
            let (l, r, lab) = self.intervals[i - 1];
            if pos >= l && pos <= r {
                return Ok(lab);
            }
        }
        Err(FltoError::Domain(format!("position {pos} was removed from the tree")))
    }
}

/// Split a tree's Euler order after removing vertices (by position, with
/// their incident tree edges) and explicit tree edges (as position pairs).
/// Yields at most 2f+1 intervals for f removed edges.
pub fn split_intervals(
    order_len: usize,
    tree_edges: &[(u32, u32)],
    removed_positions: &[u32],
    removed_edges: &[(u32, u32)],
) -> IntervalSet {
    let mut removed = vec![false; order_len];
    for &p in removed_positions {
        removed[p as usize] = true;
    }
    let gone = |a: u32, b: u32| -> bool {
        removed_edges.contains(&(a, b))
            || removed_edges.contains(&(b, a))
            || removed[a as usize]
            || removed[b as usize]
    };
    let mut dsu = crate::graph::Dsu::new(order_len);
    let mut removed_edge_count = 0usize;
    for &(a, b) in tree_edges {
        if gone(a, b) {
            removed_edge_count += 1;
        } else {
            dsu.union(a as usize, b as usize);
        }
    }
    // Subtree label = smallest position in the component.
    let mut min_of = vec![u32::MAX; order_len];
    for p in 0..order_len {
        if removed[p] {
            continue;
        }
        let r = dsu.find(p);
        if min_of[r] == u32::MAX {
            min_of[r] = p as u32;
        }
    }
    let mut intervals = Vec::new();
    let mut cur: Option<(u32, u32, u32)> = None;
    for p in 0..order_len {
        if removed[p] {
            if let Some(iv) = cur.take() {
                intervals.push(iv);
            }
            continue;
        }
        let lab = min_of[dsu.find(p)];
        match cur {
            Some((l, _, cl)) if cl == lab => cur = Some((l, p as u32, cl)),
            Some(iv) => {
                intervals.push(iv);
                cur = Some((p as u32, p as u32, lab));
            }
            None => cur = Some((p as u32, p as u32, lab)),
        }
    }
    if let Some(iv) = cur {
        intervals.push(iv);
    }
    debug_assert!(intervals.len() <= 2 * removed_edge_count + 1);
    IntervalSet { intervals, removed_edge_count }
}
