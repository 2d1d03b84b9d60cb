//! Simplicial 2-spheres: gluing two polygon triangulations, recutting along
//! Hamiltonian cycles, degree statistics, bad cycles and cone decompositions.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::ops::ControlFlow;

use thiserror::Error;

use crate::flipdist::{flip_distance, flip_distance_within, SearchConfig, SearchError};
use crate::polygon::{Diagonal, FlipPath, PolygonError, PolygonTriangulation, VertexId};
use crate::tetdecomp::TetDecomposition;

/// Vertex sets are kept in `u128` masks.
pub const MAX_SPHERE_VERTICES: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SphereError {
    #[error("a sphere needs at least 4 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("at most {MAX_SPHERE_VERTICES} vertices are supported, got {0}")]
    TooManyVertices(usize),
    #[error("triangle {0:?} uses a vertex outside 0..{1}")]
    VertexOutOfRange([VertexId; 3], usize),
    #[error("triangle {0:?} repeats a vertex")]
    DegenerateTriangle([VertexId; 3]),
    #[error("triangle {0:?} listed twice")]
    DuplicateTriangle([VertexId; 3]),
    #[error("edge ({}, {}) lies in {count} triangles instead of 2", edge.0, edge.1)]
    EdgeDegree { edge: (VertexId, VertexId), count: usize },
    #[error("vertex {0} is not used by any triangle")]
    IsolatedVertex(VertexId),
    #[error("the link of vertex {0} is not a single cycle")]
    VertexLink(VertexId),
    #[error("the triangles do not form a connected surface")]
    Disconnected,
    #[error("Euler characteristic is {0}, not 2")]
    Euler(i64),
    #[error("the surface is not orientable")]
    NotOrientable,
    #[error("gluing needs triangulations of the same polygon ({0}-gon vs {1}-gon)")]
    SizeMismatch(usize, usize),
    #[error("triangulations share diagonal {0}; split along it before gluing")]
    CommonDiagonal(Diagonal),
    #[error("triangulations share triangle {0:?}; the glued complex is not simplicial")]
    SharedTriangle([VertexId; 3]),
    #[error("{0:?} is not a simple cycle of the sphere")]
    NotACycle(Vec<VertexId>),
    #[error("cycle of length {len} is not Hamiltonian on {vertices} vertices")]
    NotHamiltonian { len: usize, vertices: usize },
    #[error("vertex {0} does not exist")]
    NoSuchVertex(VertexId),
    #[error(transparent)]
    Polygon(#[from] PolygonError),
}

fn sorted3(t: [VertexId; 3]) -> [VertexId; 3] {
    let mut s = t;
    s.sort_unstable();
    s
}

/// Rotates an oriented triangle so that its smallest vertex comes first.
fn normalize_rotation(t: [VertexId; 3]) -> [VertexId; 3] {
    let [a, b, c] = t;
    if a < b && a < c {
        [a, b, c]
    } else if b < a && b < c {
        [b, c, a]
    } else {
        [c, a, b]
    }
}

fn edge_key(x: VertexId, y: VertexId) -> (VertexId, VertexId) {
    (x.min(y), x.max(y))
}

/// A coherently oriented simplicial 2-sphere.
///
/// Triangles are stored oriented (each edge is traversed once in each
/// direction), rotated to start at their smallest vertex, and sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereTriangulation {
    vertex_count: usize,
    triangles: Vec<[VertexId; 3]>,
    neighbors: Vec<Vec<VertexId>>,
    /// `next[x * V + y]` is the neighbor following `y` counterclockwise around `x`.
    next: Vec<usize>,
    prev: Vec<usize>,
}

impl SphereTriangulation {
    /// Validates the triangle list and orients it coherently, keeping the
    /// orientation of the first triangle as given.
    pub fn new(vertex_count: usize, triangles: &[[VertexId; 3]]) -> Result<Self, SphereError> {
        let v = vertex_count;
        if v < 4 {
            return Err(SphereError::TooFewVertices(v));
        }
        if v > MAX_SPHERE_VERTICES {
            return Err(SphereError::TooManyVertices(v));
        }
        let mut keys = BTreeSet::new();
        for &t in triangles {
            if t.iter().any(|&x| x >= v) {
                return Err(SphereError::VertexOutOfRange(t, v));
            }
            if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return Err(SphereError::DegenerateTriangle(t));
            }
            if !keys.insert(sorted3(t)) {
                return Err(SphereError::DuplicateTriangle(t));
            }
        }

        let mut edge_faces: BTreeMap<(VertexId, VertexId), Vec<usize>> = BTreeMap::new();
        for (i, t) in triangles.iter().enumerate() {
            for k in 0..3 {
                edge_faces.entry(edge_key(t[k], t[(k + 1) % 3])).or_default().push(i);
            }
        }
        if let Some((&edge, faces)) = edge_faces.iter().find(|(_, f)| f.len() != 2) {
            return Err(SphereError::EdgeDegree {
                edge,
                count: faces.len(),
            });
        }

        let mut link: Vec<Vec<(VertexId, VertexId)>> = vec![Vec::new(); v];
        for t in triangles {
            for k in 0..3 {
                link[t[k]].push((t[(k + 1) % 3], t[(k + 2) % 3]));
            }
        }
        for (x, edges) in link.iter().enumerate() {
            if edges.is_empty() {
                return Err(SphereError::IsolatedVertex(x));
            }
            if !is_single_cycle(edges) {
                return Err(SphereError::VertexLink(x));
            }
        }

        // Orient by a traversal of the dual graph.
        let mut oriented: Vec<Option<[VertexId; 3]>> = vec![None; triangles.len()];
        if triangles.is_empty() {
            return Err(SphereError::Disconnected);
        }
        oriented[0] = Some(triangles[0]);
        let mut queue = VecDeque::from([0usize]);
        let mut reached = 1;
        while let Some(i) = queue.pop_front() {
            let t = oriented[i].unwrap();
            for k in 0..3 {
                let (x, y) = (t[k], t[(k + 1) % 3]);
                let faces = &edge_faces[&edge_key(x, y)];
                let j = if faces[0] == i { faces[1] } else { faces[0] };
                let other = triangles[j];
                let z = other.iter().copied().find(|&w| w != x && w != y).unwrap();
                // The neighbor must traverse the shared edge as y -> x.
                let want = normalize_rotation([y, x, z]);
                match oriented[j] {
                    Some(existing) => {
                        if normalize_rotation(existing) != want {
                            return Err(SphereError::NotOrientable);
                        }
                    }
                    None => {
                        oriented[j] = Some(want);
                        reached += 1;
                        queue.push_back(j);
                    }
                }
            }
        }
        if reached != triangles.len() {
            return Err(SphereError::Disconnected);
        }

        let euler = v as i64 - edge_faces.len() as i64 + triangles.len() as i64;
        if euler != 2 {
            return Err(SphereError::Euler(euler));
        }

        let mut tris: Vec<_> = oriented.into_iter().map(|t| normalize_rotation(t.unwrap())).collect();
        tris.sort_unstable();
        Ok(Self::from_oriented(v, tris))
    }

    fn from_oriented(v: usize, triangles: Vec<[VertexId; 3]>) -> Self {
        let mut next = vec![usize::MAX; v * v];
        let mut prev = vec![usize::MAX; v * v];
        let mut neighbors = vec![BTreeSet::new(); v];
        for &[a, b, c] in &triangles {
            for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                next[x * v + y] = z;
                prev[x * v + z] = y;
                neighbors[x].insert(y);
                neighbors[x].insert(z);
            }
        }
        SphereTriangulation {
            vertex_count: v,
            triangles,
            neighbors: neighbors.into_iter().map(|s| s.into_iter().collect()).collect(),
            next,
            prev,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Oriented triangles.
    pub fn triangles(&self) -> &[[VertexId; 3]] {
        &self.triangles
    }

    /// Triangles as ascending vertex triples, sorted.
    pub fn faces(&self) -> Vec<[VertexId; 3]> {
        let mut f: Vec<_> = self.triangles.iter().map(|&t| sorted3(t)).collect();
        f.sort_unstable();
        f
    }

    pub fn face_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        (0..self.vertex_count)
            .flat_map(|x| self.neighbors[x].iter().filter(move |&&y| y > x).map(move |&y| (x, y)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, x: VertexId) -> &[VertexId] {
        &self.neighbors[x]
    }

    pub fn degree(&self, x: VertexId) -> usize {
        self.neighbors[x].len()
    }

    pub fn max_degree(&self) -> usize {
        self.neighbors.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, x: VertexId, y: VertexId) -> bool {
        x < self.vertex_count && self.neighbors[x].binary_search(&y).is_ok()
    }

    pub fn has_face(&self, face: [VertexId; 3]) -> bool {
        let [a, b, c] = sorted3(face);
        self.has_edge(a, b) && self.has_edge(a, c) && {
            let v = self.vertex_count;
            self.next[a * v + b] == c || self.prev[a * v + b] == c
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count as i64 - self.edge_count() as i64 + self.face_count() as i64
    }

    /// The same sphere with every triangle's orientation reversed.
    pub fn reversed(&self) -> Self {
        let mut tris: Vec<_> = self
            .triangles
            .iter()
            .map(|&[a, b, c]| normalize_rotation([a, c, b]))
            .collect();
        tris.sort_unstable();
        Self::from_oriented(self.vertex_count, tris)
    }

    /// Applies a vertex permutation (`perm[old] = new`).
    pub fn relabeled(&self, perm: &[VertexId]) -> Result<Self, SphereError> {
        let tris: Vec<_> = self
            .triangles
            .iter()
            .map(|t| [perm[t[0]], perm[t[1]], perm[t[2]]])
            .collect();
        Self::new(self.vertex_count, &tris)
    }

    /// Number of vertices of each degree.
    pub fn degree_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for x in 0..self.vertex_count {
            *h.entry(self.degree(x)).or_insert(0) += 1;
        }
        h
    }

    fn rotate(&self, x: VertexId, y: VertexId, mirrored: bool) -> VertexId {
        let v = self.vertex_count;
        if mirrored {
            self.prev[x * v + y]
        } else {
            self.next[x * v + y]
        }
    }

    /// Breadth-first code of the map rooted at the directed edge `x -> y`.
    fn code_from(&self, x: VertexId, y: VertexId, mirrored: bool) -> Vec<u32> {
        let v = self.vertex_count;
        let mut label = vec![u32::MAX; v];
        let mut reference = vec![usize::MAX; v];
        let mut queue = VecDeque::from([x]);
        label[x] = 0;
        reference[x] = y;
        let mut assigned = 1u32;
        let mut code = Vec::with_capacity(2 * self.edge_count() + v);
        while let Some(w) = queue.pop_front() {
            let start = reference[w];
            let mut u = start;
            loop {
                if label[u] == u32::MAX {
                    label[u] = assigned;
                    assigned += 1;
                    reference[u] = w;
                    queue.push_back(u);
                }
                code.push(label[u]);
                u = self.rotate(w, u, mirrored);
                if u == start {
                    break;
                }
            }
            code.push(u32::MAX);
        }
        code
    }

    /// A labeling-independent certificate: two spheres are isomorphic (up to
    /// orientation) iff their codes are equal.
    pub fn canonical_code(&self) -> Vec<u32> {
        let mut best: Option<Vec<u32>> = None;
        for x in 0..self.vertex_count {
            for &y in &self.neighbors[x] {
                for mirrored in [false, true] {
                    let code = self.code_from(x, y, mirrored);
                    if best.as_ref().is_none_or(|b| code < *b) {
                        best = Some(code);
                    }
                }
            }
        }
        best.unwrap_or_default()
    }

    pub fn is_isomorphic(&self, other: &SphereTriangulation) -> bool {
        self.vertex_count == other.vertex_count
            && self.face_count() == other.face_count()
            && self.degree_histogram() == other.degree_histogram()
            && self.canonical_code() == other.canonical_code()
    }

    /// Boundary of the tetrahedron `{0, 1, 2, 3}`, oriented as the boundary of
    /// the positively oriented simplex `[0, 1, 2, 3]`.
    pub fn tetrahedron() -> Self {
        Self::new(4, &[[1, 2, 3], [0, 3, 2], [0, 1, 3], [0, 2, 1]]).expect("tetrahedron")
    }

    /// Double cone over a `k`-cycle: cycle `0..k`, apexes `k` and `k + 1`.
    pub fn bipyramid(k: usize) -> Result<Self, SphereError> {
        if k < 3 {
            return Err(SphereError::TooFewVertices(k + 2));
        }
        let mut tris = Vec::with_capacity(2 * k);
        for i in 0..k {
            let j = (i + 1) % k;
            tris.push([k, i, j]);
            tris.push([k + 1, j, i]);
        }
        Self::new(k + 2, &tris)
    }

    pub fn octahedron() -> Self {
        Self::bipyramid(4).expect("octahedron")
    }

    /// Apex 0, upper ring 1..=5, lower ring 6..=10, apex 11.
    pub fn icosahedron() -> Self {
        let mut tris = Vec::with_capacity(20);
        for i in 0..5 {
            let (u, u1) = (1 + i, 1 + (i + 1) % 5);
            let (l, l1) = (6 + i, 6 + (i + 1) % 5);
            tris.push([0, u, u1]);
            tris.push([u, l, u1]);
            tris.push([u1, l, l1]);
            tris.push([11, l1, l]);
        }
        Self::new(12, &tris).expect("icosahedron")
    }
}

/// True if the undirected edge list forms one cycle through all its vertices.
fn is_single_cycle(edges: &[(VertexId, VertexId)]) -> bool {
    let mut adj: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for &(x, y) in edges {
        adj.entry(x).or_default().push(y);
        adj.entry(y).or_default().push(x);
    }
    if adj.values().any(|n| n.len() != 2) {
        return false;
    }
    let start = *adj.keys().next().unwrap();
    let (mut prev, mut cur) = (start, adj[&start][0]);
    let mut steps = 1;
    while cur != start {
        let n = &adj[&cur];
        let nxt = if n[0] == prev { n[1] } else { n[0] };
        prev = cur;
        cur = nxt;
        steps += 1;
        if steps > adj.len() {
            return false;
        }
    }
    steps == adj.len()
}

/// Places `tp` on top of `tm` and glues them along the polygon boundary.
/// Triangles of `tp` are oriented by increasing vertex order, those of `tm`
/// the opposite way.
pub fn glue(tp: &PolygonTriangulation, tm: &PolygonTriangulation) -> Result<SphereTriangulation, SphereError> {
    if tp.n() != tm.n() {
        return Err(SphereError::SizeMismatch(tp.n(), tm.n()));
    }
    if let Some(&d) = tp.common_diagonals(tm).first() {
        return Err(SphereError::CommonDiagonal(d));
    }
    let upper = tp.triangles();
    let lower = tm.triangles();
    if let Some(&t) = upper.iter().find(|t| lower.contains(t)) {
        return Err(SphereError::SharedTriangle(t));
    }
    let mut tris: Vec<_> = upper;
    tris.extend(lower.iter().map(|&[a, b, c]| [a, c, b]));
    SphereTriangulation::new(tp.n(), &tris)
}

/// A simple cycle along edges of a sphere.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleInSphere {
    vertices: Vec<VertexId>,
}

impl CycleInSphere {
    pub fn new(tau: &SphereTriangulation, vertices: Vec<VertexId>) -> Result<Self, SphereError> {
        let len = vertices.len();
        let distinct: BTreeSet<_> = vertices.iter().collect();
        let ok = len >= 3
            && distinct.len() == len
            && vertices.iter().all(|&x| x < tau.vertex_count())
            && (0..len).all(|i| tau.has_edge(vertices[i], vertices[(i + 1) % len]));
        if !ok {
            return Err(SphereError::NotACycle(vertices));
        }
        Ok(CycleInSphere { vertices })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    fn edge_set(&self) -> BTreeSet<(VertexId, VertexId)> {
        let len = self.vertices.len();
        (0..len)
            .map(|i| edge_key(self.vertices[i], self.vertices[(i + 1) % len]))
            .collect()
    }

    /// The oriented triangles on either side. The first side holds the
    /// triangle that traverses `vertices[0] -> vertices[1]`.
    pub fn sides(&self, tau: &SphereTriangulation) -> (Vec<[VertexId; 3]>, Vec<[VertexId; 3]>) {
        let cut = self.edge_set();
        let tris = tau.triangles();
        let mut by_edge: HashMap<(VertexId, VertexId), Vec<usize>> = HashMap::new();
        for (i, t) in tris.iter().enumerate() {
            for k in 0..3 {
                by_edge.entry(edge_key(t[k], t[(k + 1) % 3])).or_default().push(i);
            }
        }
        let (c0, c1) = (self.vertices[0], self.vertices[1]);
        let seed = tris
            .iter()
            .position(|t| (0..3).any(|k| t[k] == c0 && t[(k + 1) % 3] == c1))
            .expect("every edge is traversed in both directions");
        let mut side = vec![false; tris.len()];
        side[seed] = true;
        let mut queue = VecDeque::from([seed]);
        while let Some(i) = queue.pop_front() {
            let t = tris[i];
            for k in 0..3 {
                let e = edge_key(t[k], t[(k + 1) % 3]);
                if cut.contains(&e) {
                    continue;
                }
                for &j in &by_edge[&e] {
                    if !side[j] {
                        side[j] = true;
                        queue.push_back(j);
                    }
                }
            }
        }
        let first = tris.iter().zip(&side).filter(|(_, &s)| s).map(|(&t, _)| t).collect();
        let second = tris.iter().zip(&side).filter(|(_, &s)| !s).map(|(&t, _)| t).collect();
        (first, second)
    }
}

/// Outcome of a budget-limited enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Enumeration {
    pub found: usize,
    pub nodes: usize,
    /// False if the node budget ran out or the callback stopped early.
    pub complete: bool,
}

/// Calls `visit` for every Hamiltonian cycle, each reported once: starting at
/// vertex 0 and with `cycle[1] < cycle[V - 1]`.
pub fn for_each_hamiltonian_cycle(
    tau: &SphereTriangulation,
    max_nodes: usize,
    mut visit: impl FnMut(&CycleInSphere) -> ControlFlow<()>,
) -> Enumeration {
    struct State<'a, F> {
        tau: &'a SphereTriangulation,
        path: Vec<VertexId>,
        used: u128,
        nodes: usize,
        max_nodes: usize,
        found: usize,
        visit: F,
    }

    /// Every unused vertex must stay reachable from the path end through
    /// unused vertices, and vertex 0 needs an unused neighbor to close on.
    fn viable<F>(s: &State<'_, F>) -> bool {
        let v = s.tau.vertex_count();
        let all = if v == 128 { u128::MAX } else { (1u128 << v) - 1 };
        let unused = all & !s.used;
        if unused == 0 {
            return true;
        }
        if !s.tau.neighbors(0).iter().any(|&y| unused & (1 << y) != 0) {
            return false;
        }
        let last = *s.path.last().unwrap();
        let mut seen = 0u128;
        let mut stack = vec![last];
        while let Some(x) = stack.pop() {
            for &y in s.tau.neighbors(x) {
                let b = 1u128 << y;
                if unused & b != 0 && seen & b == 0 {
                    seen |= b;
                    stack.push(y);
                }
            }
        }
        seen == unused
    }

    fn extend<F: FnMut(&CycleInSphere) -> ControlFlow<()>>(s: &mut State<'_, F>) -> ControlFlow<()> {
        s.nodes += 1;
        if s.nodes > s.max_nodes {
            return ControlFlow::Break(());
        }
        let v = s.tau.vertex_count();
        let last = *s.path.last().unwrap();
        if s.path.len() == v {
            if s.tau.has_edge(last, 0) && s.path[1] < s.path[v - 1] {
                s.found += 1;
                let cycle = CycleInSphere {
                    vertices: s.path.clone(),
                };
                return (s.visit)(&cycle);
            }
            return ControlFlow::Continue(());
        }
        if !viable(s) {
            return ControlFlow::Continue(());
        }
        for i in 0..s.tau.neighbors(last).len() {
            let y = s.tau.neighbors(last)[i];
            if s.used & (1 << y) != 0 {
                continue;
            }
            s.used |= 1 << y;
            s.path.push(y);
            let flow = extend(s);
            s.path.pop();
            s.used &= !(1 << y);
            flow?;
        }
        ControlFlow::Continue(())
    }

    let mut state = State {
        tau,
        path: vec![0],
        used: 1,
        nodes: 0,
        max_nodes,
        found: 0,
        visit: &mut visit,
    };
    let flow = extend(&mut state);
    Enumeration {
        found: state.found,
        nodes: state.nodes,
        complete: flow.is_continue(),
    }
}

/// Up to `limit` Hamiltonian cycles (deduplicated up to rotation and reflection).
pub fn hamiltonian_cycles(tau: &SphereTriangulation, limit: usize) -> Vec<CycleInSphere> {
    let mut out = Vec::new();
    for_each_hamiltonian_cycle(tau, usize::MAX, |c| {
        out.push(c.clone());
        if out.len() >= limit {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    out
}

/// The two polygon triangulations obtained by cutting a sphere along a
/// Hamiltonian cycle. Local vertex `i` is `labeling[i]` in the sphere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recut {
    pub first: PolygonTriangulation,
    pub second: PolygonTriangulation,
    pub labeling: Vec<VertexId>,
}

impl Recut {
    /// Glues the pair back and restores the sphere's labels.
    pub fn reglue(&self) -> Result<SphereTriangulation, SphereError> {
        let local = glue(&self.first, &self.second)?;
        local.relabeled(&self.labeling)
    }
}

/// Cuts `tau` along a Hamiltonian cycle into two triangulations of the
/// `V`-gon whose boundary order is the cycle order.
pub fn recut(tau: &SphereTriangulation, cycle: &CycleInSphere) -> Result<Recut, SphereError> {
    let v = tau.vertex_count();
    if cycle.len() != v {
        return Err(SphereError::NotHamiltonian {
            len: cycle.len(),
            vertices: v,
        });
    }
    let mut position = vec![0; v];
    for (i, &x) in cycle.vertices().iter().enumerate() {
        position[x] = i;
    }
    let (a, b) = cycle.sides(tau);
    let to_polygon = |side: &[[VertexId; 3]]| -> Result<PolygonTriangulation, SphereError> {
        let mut diagonals = BTreeSet::new();
        for t in side {
            for k in 0..3 {
                let d = Diagonal::new(position[t[k]], position[t[(k + 1) % 3]]);
                if !d.is_boundary_edge(v) {
                    diagonals.insert(d);
                }
            }
        }
        Ok(PolygonTriangulation::new(v, &diagonals.into_iter().collect::<Vec<_>>())?)
    };
    Ok(Recut {
        first: to_polygon(&a)?,
        second: to_polygon(&b)?,
        labeling: cycle.vertices().to_vec(),
    })
}

#[derive(Debug, Clone)]
pub struct RecutConfig {
    /// Node budget for the Hamiltonian cycle enumeration.
    pub max_cycle_nodes: usize,
    /// Maximum number of cycles examined.
    pub max_cycles: usize,
    pub search: SearchConfig,
    /// Stop as soon as a recut reaches this distance (e.g. a known lower bound).
    pub stop_at: Option<usize>,
}

impl Default for RecutConfig {
    fn default() -> Self {
        RecutConfig {
            max_cycle_nodes: 50_000_000,
            max_cycles: usize::MAX,
            search: SearchConfig::default(),
            stop_at: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RecutBest {
    pub cycle: CycleInSphere,
    pub recut: Recut,
    pub distance: usize,
    pub path: FlipPath,
}

#[derive(Debug, Clone)]
pub struct RecutOutcome {
    pub best: Option<RecutBest>,
    pub cycles_examined: usize,
    /// True when every Hamiltonian cycle was examined exactly (or the search
    /// stopped at `stop_at`).
    pub complete: bool,
}

/// Minimizes the exact flip distance over Hamiltonian recuts of `tau`.
/// Every value found bounds the minimal decomposition size from above.
pub fn recut_min_flip(tau: &SphereTriangulation, cfg: &RecutConfig) -> RecutOutcome {
    let mut best: Option<RecutBest> = None;
    let mut examined = 0;
    let mut exact = true;
    let mut stopped = false;
    let enumeration = for_each_hamiltonian_cycle(tau, cfg.max_cycle_nodes, |cycle| {
        examined += 1;
        let pieces = recut(tau, cycle).expect("Hamiltonian cycles recut");
        let result = match &best {
            Some(b) if b.distance == 0 => Ok(None),
            Some(b) => flip_distance_within(&pieces.first, &pieces.second, b.distance - 1, &cfg.search),
            None => flip_distance(&pieces.first, &pieces.second, &cfg.search).map(Some),
        };
        match result {
            Ok(Some(r)) => {
                best = Some(RecutBest {
                    cycle: cycle.clone(),
                    recut: pieces,
                    distance: r.distance,
                    path: r.path,
                });
            }
            Ok(None) => {}
            Err(SearchError::BudgetExceeded { .. }) => exact = false,
            Err(SearchError::Polygon(_)) => exact = false,
        }
        if cfg.stop_at.is_some_and(|s| best.as_ref().is_some_and(|b| b.distance <= s)) {
            stopped = true;
            return ControlFlow::Break(());
        }
        if examined >= cfg.max_cycles {
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    });
    RecutOutcome {
        best,
        cycles_examined: examined,
        complete: exact && (enumeration.complete || stopped),
    }
}

/// A short cycle together with the high-degree vertices it separates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleReport {
    pub cycle: CycleInSphere,
    /// Vertices of degree greater than the cycle length strictly inside each side.
    pub high_degree_sides: [Vec<VertexId>; 2],
    /// Vertices of degree greater than the cycle length on the cycle itself.
    pub high_degree_on_cycle: Vec<VertexId>,
}

impl CycleReport {
    pub fn length(&self) -> usize {
        self.cycle.len()
    }

    /// Bad: each open side contains a vertex of degree greater than the length.
    pub fn is_bad(&self) -> bool {
        !self.high_degree_sides[0].is_empty() && !self.high_degree_sides[1].is_empty()
    }

    /// Looser reading: at least two distinct high-degree vertices off the cycle.
    pub fn separates_two_distinct(&self) -> bool {
        self.high_degree_sides[0].len() + self.high_degree_sides[1].len() >= 2
    }
}

#[derive(Debug, Clone)]
pub struct CycleScan {
    pub reports: Vec<CycleReport>,
    pub cycles_examined: usize,
    pub complete: bool,
}

/// Reports for every simple cycle of length `3..=max_len`; `max_len`
/// defaults to `max_degree - 1`, beyond which no cycle can be bad.
pub fn scan_cycles(tau: &SphereTriangulation, max_len: Option<usize>, max_cycles: usize) -> CycleScan {
    let limit = max_len.unwrap_or(tau.max_degree().saturating_sub(1));
    let mut reports = Vec::new();
    let mut examined = 0;
    let mut complete = true;
    'starts: for s in 0..tau.vertex_count() {
        let mut stack: Vec<(Vec<VertexId>, usize)> = vec![(vec![s], 0)];
        while let Some((path, _)) = stack.pop() {
            let last = *path.last().unwrap();
            for &y in tau.neighbors(last).iter().rev() {
                if y == s && path.len() >= 3 && path[1] < path[path.len() - 1] {
                    examined += 1;
                    let cycle = CycleInSphere { vertices: path.clone() };
                    reports.push(cycle_report(tau, cycle));
                    if examined >= max_cycles {
                        complete = false;
                        break 'starts;
                    }
                }
                if y > s && !path.contains(&y) && path.len() < limit {
                    let mut p = path.clone();
                    p.push(y);
                    stack.push((p, 0));
                }
            }
        }
    }
    reports.sort_by(|a, b| (a.length(), &a.cycle).cmp(&(b.length(), &b.cycle)));
    CycleScan {
        reports,
        cycles_examined: examined,
        complete,
    }
}

fn cycle_report(tau: &SphereTriangulation, cycle: CycleInSphere) -> CycleReport {
    let l = cycle.len();
    let on_cycle: BTreeSet<_> = cycle.vertices().iter().copied().collect();
    let (a, b) = cycle.sides(tau);
    let inside = |side: &[[VertexId; 3]]| -> Vec<VertexId> {
        let vs: BTreeSet<_> = side.iter().flatten().copied().filter(|x| !on_cycle.contains(x)).collect();
        vs.into_iter().filter(|&x| tau.degree(x) > l).collect()
    };
    let high_degree_sides = [inside(&a), inside(&b)];
    let high_degree_on_cycle = cycle.vertices().iter().copied().filter(|&x| tau.degree(x) > l).collect();
    CycleReport {
        cycle,
        high_degree_sides,
        high_degree_on_cycle,
    }
}

/// All bad cycles (each side holds a vertex of degree above the cycle length).
pub fn bad_cycles(tau: &SphereTriangulation) -> Vec<CycleReport> {
    scan_cycles(tau, None, usize::MAX)
        .reports
        .into_iter()
        .filter(CycleReport::is_bad)
        .collect()
}

/// The decomposition joining `v` to every face not containing it.
pub fn cone_decomposition(tau: &SphereTriangulation, v: VertexId) -> Result<TetDecomposition, SphereError> {
    if v >= tau.vertex_count() {
        return Err(SphereError::NoSuchVertex(v));
    }
    let tets: Vec<[VertexId; 4]> = tau
        .faces()
        .into_iter()
        .filter(|f| !f.contains(&v))
        .map(|[a, b, c]| [a, b, c, v])
        .collect();
    Ok(TetDecomposition::new(tau.vertex_count(), tets).expect("cone tetrahedra are distinct"))
}

/// Two copies of a pentagonal disk glued along their common 5-cycle.
///
/// Each disk has a center vertex and `layers` concentric 5-rings; consecutive
/// rings are joined by antiprism bands and the outermost band ends on the
/// shared boundary `0..5`. With `layers >= 2` every vertex has degree 5 or 6.
/// Returns the sphere and its seam.
pub fn pentagonal_double_cap(layers: usize) -> Result<(SphereTriangulation, CycleInSphere), SphereError> {
    let per_copy = 1 + 5 * layers;
    let v = 5 + 2 * per_copy;
    let mut tris = Vec::new();
    for copy in 0..2 {
        let offset = 5 + copy * per_copy;
        let center = offset;
        let ring = |r: usize, i: usize| -> VertexId {
            if r > layers {
                i % 5
            } else {
                offset + 1 + 5 * (r - 1) + i % 5
            }
        };
        for i in 0..5 {
            tris.push([center, ring(1, i), ring(1, i + 1)]);
        }
        for r in 1..=layers {
            for i in 0..5 {
                tris.push([ring(r, i), ring(r + 1, i), ring(r + 1, i + 1)]);
                tris.push([ring(r, i), ring(r + 1, i + 1), ring(r, i + 1)]);
            }
        }
    }
    let tau = SphereTriangulation::new(v, &tris)?;
    let seam = CycleInSphere::new(&tau, (0..5).collect())?;
    Ok((tau, seam))
}
