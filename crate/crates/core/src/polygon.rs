//! Triangulations of a labeled convex polygon: diagonals, flips, and the
//! decomposition of a pair of triangulations along their common diagonals.
//!
//! Vertices are the integers `0..n` in cyclic order. Everything here is
//! combinatorial; no coordinates are ever involved.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Position of a vertex on the cycle of a convex polygon.
pub type VertexId = usize;

/// Largest polygon handled. Adjacency is stored as one `u128` mask per vertex.
pub const MAX_VERTICES: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolygonError {
    #[error("a polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygons with more than {MAX_VERTICES} vertices are not supported, got {0}")]
    TooManyVertices(usize),
    #[error("diagonal {0} has an endpoint outside 0..{1}")]
    VertexOutOfRange(Diagonal, usize),
    #[error("diagonal {0} joins a vertex to itself")]
    Degenerate(Diagonal),
    #[error("{0} is a boundary edge of the {1}-gon, not a diagonal")]
    BoundaryEdge(Diagonal, usize),
    #[error("diagonal {0} listed twice")]
    Duplicate(Diagonal),
    #[error("diagonals {0} and {1} cross")]
    Crossing(Diagonal, Diagonal),
    #[error("a triangulation of the {n}-gon has {expected} diagonals, found {found}")]
    WrongCount {
        n: usize,
        expected: usize,
        found: usize,
    },
    #[error("diagonal {0} is not in the triangulation")]
    NotInTriangulation(Diagonal),
    #[error("triangulations live on polygons of different sizes ({0} and {1})")]
    SizeMismatch(usize, usize),
    #[error("step {step}: flipping {removed} inserts {expected}, not {found}")]
    IllegalFlip {
        step: usize,
        removed: Diagonal,
        expected: Diagonal,
        found: Diagonal,
    },
}

/// An unordered pair of polygon vertices, stored with `a < b`.
///
/// Whether the pair is a diagonal or a boundary edge depends on the polygon;
/// [`PolygonTriangulation::new`] rejects boundary edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Diagonal {
    a: VertexId,
    b: VertexId,
}

impl Diagonal {
    pub fn new(x: VertexId, y: VertexId) -> Self {
        if x <= y {
            Diagonal { a: x, b: y }
        } else {
            Diagonal { a: y, b: x }
        }
    }

    pub fn a(&self) -> VertexId {
        self.a
    }

    pub fn b(&self) -> VertexId {
        self.b
    }

    pub fn endpoints(&self) -> (VertexId, VertexId) {
        (self.a, self.b)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.a == v || self.b == v
    }

    /// True when the endpoints are cyclically adjacent on the `n`-gon.
    pub fn is_boundary_edge(&self, n: usize) -> bool {
        self.b - self.a == 1 || (self.a == 0 && self.b + 1 == n)
    }

    /// Applies a vertex relabeling.
    pub fn map(&self, f: impl Fn(VertexId) -> VertexId) -> Diagonal {
        Diagonal::new(f(self.a), f(self.b))
    }
}

impl fmt::Display for Diagonal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// True iff the endpoints of the two diagonals strictly interleave on the
/// cycle. Diagonals sharing an endpoint never cross.
pub fn crosses(d1: Diagonal, d2: Diagonal) -> bool {
    let (a, b) = d1.endpoints();
    let (c, d) = d2.endpoints();
    (a < c && c < b && b < d) || (c < a && a < d && d < b)
}

/// Checks that `diagonals` triangulate the convex `n`-gon, reporting the first
/// violated condition.
pub fn validate(n: usize, diagonals: &[Diagonal]) -> Result<(), PolygonError> {
    if n < 3 {
        return Err(PolygonError::TooFewVertices(n));
    }
    if n > MAX_VERTICES {
        return Err(PolygonError::TooManyVertices(n));
    }
    for &d in diagonals {
        if d.b >= n {
            return Err(PolygonError::VertexOutOfRange(d, n));
        }
        if d.a == d.b {
            return Err(PolygonError::Degenerate(d));
        }
        if d.is_boundary_edge(n) {
            return Err(PolygonError::BoundaryEdge(d, n));
        }
    }
    let mut sorted = diagonals.to_vec();
    sorted.sort();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(PolygonError::Duplicate(w[0]));
    }
    for (i, &d1) in sorted.iter().enumerate() {
        if let Some(&d2) = sorted[i + 1..].iter().find(|&&d2| crosses(d1, d2)) {
            return Err(PolygonError::Crossing(d1, d2));
        }
    }
    if diagonals.len() != n - 3 {
        return Err(PolygonError::WrongCount {
            n,
            expected: n - 3,
            found: diagonals.len(),
        });
    }
    Ok(())
}

#[inline]
fn bit(v: VertexId) -> u128 {
    1u128 << v
}

/// Vertices strictly between `lo` and `hi` (requires `lo < hi`).
#[inline]
fn open_span(lo: VertexId, hi: VertexId) -> u128 {
    let below_hi = if hi >= 128 { u128::MAX } else { bit(hi) - 1 };
    below_hi & !((bit(lo) << 1).wrapping_sub(1))
}

#[inline]
fn all_vertices(n: usize) -> u128 {
    if n >= 128 {
        u128::MAX
    } else {
        bit(n) - 1
    }
}

/// The convex quadrilateral formed by the two triangles on either side of a
/// diagonal. Vertices are kept in ascending, hence cyclic, order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quadrilateral([VertexId; 4]);

impl Quadrilateral {
    pub fn new(mut vertices: [VertexId; 4]) -> Self {
        vertices.sort_unstable();
        Quadrilateral(vertices)
    }

    pub fn vertices(&self) -> [VertexId; 4] {
        self.0
    }

    /// The two diagonals of the quadrilateral; they always cross.
    pub fn diagonals(&self) -> (Diagonal, Diagonal) {
        let [x, y, z, w] = self.0;
        (Diagonal::new(x, z), Diagonal::new(y, w))
    }

    pub fn opposite(&self, d: Diagonal) -> Option<Diagonal> {
        let (p, q) = self.diagonals();
        if d == p {
            Some(q)
        } else if d == q {
            Some(p)
        } else {
            None
        }
    }
}

/// A triangulation of the convex `n`-gon given by its `n - 3` diagonals.
///
/// The representation (one neighbor mask per vertex) is canonical, so the
/// derived `Eq`/`Hash` can key visited sets directly.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolygonTriangulation {
    n: usize,
    adj: Vec<u128>,
}

impl PolygonTriangulation {
    pub fn new(n: usize, diagonals: &[Diagonal]) -> Result<Self, PolygonError> {
        validate(n, diagonals)?;
        let mut adj = vec![0u128; n];
        for d in diagonals {
            adj[d.a] |= bit(d.b);
            adj[d.b] |= bit(d.a);
        }
        Ok(PolygonTriangulation { n, adj })
    }

    /// The fan triangulation whose diagonals all meet `apex`.
    pub fn fan(n: usize, apex: VertexId) -> Result<Self, PolygonError> {
        if n < 3 {
            return Err(PolygonError::TooFewVertices(n));
        }
        if apex >= n {
            return Err(PolygonError::VertexOutOfRange(Diagonal::new(apex, apex), n));
        }
        let diagonals: Vec<_> = (2..n - 1)
            .map(|k| Diagonal::new(apex, (apex + k) % n))
            .collect();
        Self::new(n, &diagonals)
    }

    /// A uniformly random triangulation of the `n`-gon, `n <= 66` (the
    /// Catalan weights must fit in a `u128`).
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self, PolygonError> {
        if n < 3 {
            return Err(PolygonError::TooFewVertices(n));
        }
        if n > 66 {
            return Err(PolygonError::TooManyVertices(n));
        }
        let catalan = catalan_table(n);
        let mut diagonals = Vec::with_capacity(n - 3);
        // (lo, hi) is a sub-polygon on the consecutive vertices lo..=hi with
        // base edge lo-hi; pick its apex with probability proportional to the
        // number of completions.
        let mut stack = vec![(0usize, n - 1)];
        while let Some((lo, hi)) = stack.pop() {
            if hi - lo < 2 {
                continue;
            }
            let total = catalan[hi - lo - 1];
            let mut pick = rng.gen_range(0..total);
            let mut apex = lo + 1;
            for k in lo + 1..hi {
                let w = catalan[k - lo - 1] * catalan[hi - k - 1];
                if pick < w {
                    apex = k;
                    break;
                }
                pick -= w;
            }
            if apex - lo >= 2 {
                diagonals.push(Diagonal::new(lo, apex));
            }
            if hi - apex >= 2 {
                diagonals.push(Diagonal::new(apex, hi));
            }
            stack.push((lo, apex));
            stack.push((apex, hi));
        }
        Self::new(n, &diagonals)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Sorted list of diagonals.
    pub fn diagonals(&self) -> Vec<Diagonal> {
        let mut out = Vec::with_capacity(self.n.saturating_sub(3));
        for a in 0..self.n {
            let mut higher = self.adj[a] & !((bit(a) << 1).wrapping_sub(1));
            while higher != 0 {
                let b = higher.trailing_zeros() as usize;
                out.push(Diagonal { a, b });
                higher &= higher - 1;
            }
        }
        out
    }

    pub fn contains(&self, d: Diagonal) -> bool {
        d.b < self.n && self.adj[d.a] & bit(d.b) != 0
    }

    /// Number of diagonals incident to `v`.
    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].count_ones() as usize
    }

    /// Neighbor mask of `v` including the two boundary neighbors.
    fn closed_adj(&self, v: VertexId) -> u128 {
        let n = self.n;
        self.adj[v] | bit((v + 1) % n) | bit((v + n - 1) % n)
    }

    /// True if `x`-`y` is a boundary edge or a diagonal of the triangulation.
    pub fn has_edge(&self, x: VertexId, y: VertexId) -> bool {
        x != y && x < self.n && y < self.n && self.closed_adj(x) & bit(y) != 0
    }

    /// The `n - 2` triangles, each as an ascending vertex triple, sorted.
    pub fn triangles(&self) -> Vec<[VertexId; 3]> {
        let n = self.n;
        let mut out = Vec::with_capacity(n - 2);
        // Every triangle (a < c < b) is found exactly once, from its longest
        // side a-b.
        for a in 0..n {
            let mut higher = self.closed_adj(a) & !((bit(a) << 1).wrapping_sub(1));
            while higher != 0 {
                let b = higher.trailing_zeros() as usize;
                higher &= higher - 1;
                let inside = self.closed_adj(a) & self.closed_adj(b) & open_span(a, b);
                if inside != 0 {
                    out.push([a, inside.trailing_zeros() as usize, b]);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// The quadrilateral made of the two triangles adjacent to `d`.
    pub fn quad_of(&self, d: Diagonal) -> Result<Quadrilateral, PolygonError> {
        if !self.contains(d) {
            return Err(PolygonError::NotInTriangulation(d));
        }
        let (a, b) = d.endpoints();
        let common = self.closed_adj(a) & self.closed_adj(b);
        let inside = common & open_span(a, b);
        let outside = common & !open_span(a, b) & !bit(a) & !bit(b) & all_vertices(self.n);
        debug_assert_eq!(inside.count_ones(), 1);
        debug_assert_eq!(outside.count_ones(), 1);
        Ok(Quadrilateral::new([
            a,
            inside.trailing_zeros() as usize,
            b,
            outside.trailing_zeros() as usize,
        ]))
    }

    /// Flips `d`, returning the new triangulation and the inserted diagonal.
    pub fn flip(&self, d: Diagonal) -> Result<(PolygonTriangulation, Diagonal), PolygonError> {
        let quad = self.quad_of(d)?;
        let inserted = quad.opposite(d).expect("d is a diagonal of its own quadrilateral");
        let mut adj = self.adj.clone();
        adj[d.a] &= !bit(d.b);
        adj[d.b] &= !bit(d.a);
        adj[inserted.a] |= bit(inserted.b);
        adj[inserted.b] |= bit(inserted.a);
        Ok((PolygonTriangulation { n: self.n, adj }, inserted))
    }

    /// All triangulations one flip away, ordered by the removed diagonal.
    pub fn neighbors(&self) -> Vec<(Diagonal, PolygonTriangulation)> {
        self.diagonals()
            .into_iter()
            .map(|d| {
                let (t, _) = self.flip(d).expect("own diagonal");
                (d, t)
            })
            .collect()
    }

    /// Diagonals present in both triangulations.
    pub fn common_diagonals(&self, other: &PolygonTriangulation) -> Vec<Diagonal> {
        self.diagonals()
            .into_iter()
            .filter(|&d| other.contains(d))
            .collect()
    }

    /// Number of diagonals of `self` missing from `other`.
    pub fn difference_count(&self, other: &PolygonTriangulation) -> usize {
        self.adj
            .iter()
            .zip(&other.adj)
            .map(|(x, y)| (x & !y).count_ones() as usize)
            .sum::<usize>()
            / 2
    }
}

impl fmt::Display for PolygonTriangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-gon {{", self.n)?;
        for (i, d) in self.diagonals().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "}}")
    }
}

/// `catalan[k]` = number of triangulations of a (k + 2)-gon.
fn catalan_table(n: usize) -> Vec<u128> {
    let mut c = vec![0u128; n.max(2)];
    c[0] = 1;
    for k in 1..c.len() {
        c[k] = (0..k).map(|i| c[i] * c[k - 1 - i]).sum();
    }
    c
}

/// Number of triangulations of the convex `n`-gon (`n >= 3`, `n <= 66`).
pub fn triangulation_count(n: usize) -> u128 {
    catalan_table(n - 1)[n - 2]
}

/// A region of the polygon cut along the common diagonals of two
/// triangulations, with both triangulations restricted to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubInstance {
    /// `vertices[i]` is the original label of local vertex `i`.
    pub vertices: Vec<VertexId>,
    pub first: PolygonTriangulation,
    pub second: PolygonTriangulation,
}

impl SubInstance {
    pub fn size(&self) -> usize {
        self.vertices.len()
    }

    pub fn to_global(&self, d: Diagonal) -> Diagonal {
        d.map(|v| self.vertices[v])
    }
}

/// Cuts the polygon along every common diagonal of `t1` and `t2` and returns
/// the regions on which the two triangulations still differ (regions with at
/// least four vertices), ordered by vertex list.
pub fn split_along(
    t1: &PolygonTriangulation,
    t2: &PolygonTriangulation,
) -> Result<Vec<SubInstance>, PolygonError> {
    if t1.n != t2.n {
        return Err(PolygonError::SizeMismatch(t1.n, t2.n));
    }
    let common = t1.common_diagonals(t2);
    let mut pending = vec![(0..t1.n).collect::<Vec<_>>()];
    let mut regions = Vec::new();
    while let Some(region) = pending.pop() {
        let len = region.len();
        let cut = common.iter().find_map(|d| {
            let i = region.iter().position(|&v| v == d.a)?;
            let j = region.iter().position(|&v| v == d.b)?;
            let (i, j) = (i.min(j), i.max(j));
            (j - i >= 2 && !(i == 0 && j == len - 1)).then_some((i, j))
        });
        match cut {
            Some((i, j)) => {
                pending.push(region[i..=j].to_vec());
                let mut rest = region[..=i].to_vec();
                rest.extend_from_slice(&region[j..]);
                pending.push(rest);
            }
            None => regions.push(region),
        }
    }
    regions.retain(|r| r.len() >= 4);
    regions.sort();
    regions
        .into_iter()
        .map(|vertices| {
            let first = restrict(t1, &vertices)?;
            let second = restrict(t2, &vertices)?;
            Ok(SubInstance {
                vertices,
                first,
                second,
            })
        })
        .collect()
}

/// Restricts a triangulation to a sub-polygon (given by ascending original
/// labels) and relabels it to `0..k`.
fn restrict(t: &PolygonTriangulation, vertices: &[VertexId]) -> Result<PolygonTriangulation, PolygonError> {
    let k = vertices.len();
    let mut local = Vec::new();
    for i in 0..k {
        for j in i + 2..k {
            if i == 0 && j == k - 1 {
                continue;
            }
            if t.contains(Diagonal::new(vertices[i], vertices[j])) {
                local.push(Diagonal::new(i, j));
            }
        }
    }
    PolygonTriangulation::new(k, &local)
}

/// A single flip, identified by the diagonal it removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Flip {
    pub removed: Diagonal,
    pub inserted: Diagonal,
}

/// A legal sequence of flips starting from a fixed triangulation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipPath {
    start: PolygonTriangulation,
    steps: Vec<Flip>,
}

impl FlipPath {
    /// Builds a path, checking that every step is a legal flip of the
    /// preceding triangulation.
    pub fn new(start: PolygonTriangulation, steps: Vec<Flip>) -> Result<Self, PolygonError> {
        let mut current = start.clone();
        for (i, step) in steps.iter().enumerate() {
            let (next, inserted) = current.flip(step.removed)?;
            if inserted != step.inserted {
                return Err(PolygonError::IllegalFlip {
                    step: i,
                    removed: step.removed,
                    expected: inserted,
                    found: step.inserted,
                });
            }
            current = next;
        }
        Ok(FlipPath { start, steps })
    }

    /// Builds a path from the sequence of removed diagonals.
    pub fn from_removals(
        start: PolygonTriangulation,
        removals: impl IntoIterator<Item = Diagonal>,
    ) -> Result<Self, PolygonError> {
        let mut current = start.clone();
        let mut steps = Vec::new();
        for removed in removals {
            let (next, inserted) = current.flip(removed)?;
            steps.push(Flip { removed, inserted });
            current = next;
        }
        Ok(FlipPath { start, steps })
    }

    pub fn empty(start: PolygonTriangulation) -> Self {
        FlipPath {
            start,
            steps: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.start.n
    }

    pub fn start(&self) -> &PolygonTriangulation {
        &self.start
    }

    pub fn steps(&self) -> &[Flip] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Every triangulation along the path, start and end included.
    pub fn states(&self) -> Vec<PolygonTriangulation> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        out.push(self.start.clone());
        for step in &self.steps {
            let (next, _) = out.last().unwrap().flip(step.removed).expect("validated path");
            out.push(next);
        }
        out
    }

    pub fn end(&self) -> PolygonTriangulation {
        self.states().pop().unwrap()
    }

    /// The same path walked backwards.
    pub fn reversed(&self) -> FlipPath {
        let steps = self
            .steps
            .iter()
            .rev()
            .map(|s| Flip {
                removed: s.inserted,
                inserted: s.removed,
            })
            .collect();
        FlipPath {
            start: self.end(),
            steps,
        }
    }

    /// Appends the flips of `other`, which must start where `self` ends.
    pub fn concat(&self, other: &FlipPath) -> Result<FlipPath, PolygonError> {
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&other.steps);
        FlipPath::new(self.start.clone(), steps)
    }
}
