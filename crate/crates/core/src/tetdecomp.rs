//! Tetrahedral decompositions of the 3-ball whose boundary is a given sphere,
//! using only the sphere's vertices.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::polygon::{FlipPath, PolygonError, PolygonTriangulation, VertexId};
use crate::sphere::{cone_decomposition, glue, CycleInSphere, SphereError, SphereTriangulation};

pub type Tet = [VertexId; 4];
pub type Face = [VertexId; 3];
type Edge = (VertexId, VertexId);

fn faces_of(t: Tet) -> [Face; 4] {
    [
        [t[1], t[2], t[3]],
        [t[0], t[2], t[3]],
        [t[0], t[1], t[3]],
        [t[0], t[1], t[2]],
    ]
}

fn edges_of(t: Tet) -> [Edge; 6] {
    [
        (t[0], t[1]),
        (t[0], t[2]),
        (t[0], t[3]),
        (t[1], t[2]),
        (t[1], t[3]),
        (t[2], t[3]),
    ]
}

fn sorted4(mut t: Tet) -> Tet {
    t.sort_unstable();
    t
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("tetrahedron {0:?} uses a vertex outside 0..{1}")]
    VertexOutOfRange(Tet, usize),
    #[error("tetrahedron {0:?} repeats a vertex")]
    DegenerateTet(Tet),
    #[error("tetrahedron {tet:?} occurs twice (flip {step} reuses an earlier quadrilateral)")]
    DuplicateTet { tet: Tet, step: usize },
    #[error("the flip path does not run from the first triangulation to the second")]
    PathEndpoints,
    #[error("construction does not apply: {0}")]
    Inapplicable(String),
    #[error(transparent)]
    Polygon(#[from] PolygonError),
    #[error(transparent)]
    Sphere(#[from] SphereError),
}

/// A set of tetrahedra on the vertices `0..vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TetDecomposition {
    vertex_count: usize,
    tets: Vec<Tet>,
}

impl TetDecomposition {
    pub fn new(vertex_count: usize, tets: Vec<Tet>) -> Result<Self, DecompositionError> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(tets.len());
        for (step, t) in tets.into_iter().enumerate() {
            if t.iter().any(|&x| x >= vertex_count) {
                return Err(DecompositionError::VertexOutOfRange(t, vertex_count));
            }
            let s = sorted4(t);
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(DecompositionError::DegenerateTet(t));
            }
            if !seen.insert(s) {
                return Err(DecompositionError::DuplicateTet { tet: s, step });
            }
            out.push(s);
        }
        out.sort_unstable();
        Ok(TetDecomposition {
            vertex_count,
            tets: out,
        })
    }

    /// One tetrahedron per flip, spanned by the flip's quadrilateral.
    pub fn from_flip_path(
        tp: &PolygonTriangulation,
        tm: &PolygonTriangulation,
        path: &FlipPath,
    ) -> Result<Self, DecompositionError> {
        if path.start() != tp || &path.end() != tm {
            return Err(DecompositionError::PathEndpoints);
        }
        let tets: Vec<Tet> = path
            .steps()
            .iter()
            .map(|f| [f.removed.a(), f.removed.b(), f.inserted.a(), f.inserted.b()])
            .collect();
        Self::new(tp.n(), tets)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn tets(&self) -> &[Tet] {
        &self.tets
    }

    pub fn len(&self) -> usize {
        self.tets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tets.is_empty()
    }

    /// Number of tetrahedra containing each triangle.
    pub fn face_counts(&self) -> BTreeMap<Face, usize> {
        let mut m = BTreeMap::new();
        for &t in &self.tets {
            for f in faces_of(t) {
                *m.entry(f).or_insert(0) += 1;
            }
        }
        m
    }

    pub fn edges(&self) -> BTreeSet<Edge> {
        self.tets.iter().flat_map(|&t| edges_of(t)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Collapsibility {
    Collapsible,
    /// Greedy collapsing got stuck; the complex may still be a ball.
    Unknown,
}

impl fmt::Display for Collapsibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Collapsibility::Collapsible => "collapsible",
            Collapsibility::Unknown => "unknown",
        })
    }
}

/// Face counts and checks of a decomposition that passed validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallCertificate {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub tets: usize,
    pub euler: i64,
    pub boundary_faces: usize,
    pub interior_faces: usize,
    pub interior_edges: usize,
    pub boundary_match: bool,
    pub edge_links_ok: bool,
    pub vertex_links_ok: bool,
    pub collapsible: Collapsibility,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BallViolation {
    #[error("decomposition has {found} vertices, sphere has {expected}")]
    VertexCount { expected: usize, found: usize },
    #[error("decomposition is empty")]
    Empty,
    #[error("sphere face {0:?} is not covered")]
    MissingBoundaryFace(Face),
    #[error("face {face:?} lies in {count} tetrahedra")]
    FaceOverused { face: Face, count: usize },
    #[error("face {0:?} is on the boundary but is not a sphere face")]
    UnexpectedBoundaryFace(Face),
    #[error("tetrahedra are not connected through faces")]
    Disconnected,
    #[error("link of edge ({}, {}) is neither the required path nor cycle", .0.0, .0.1)]
    EdgeLink(Edge),
    #[error("link of vertex {0} is not a disk")]
    VertexLink(VertexId),
    #[error("Euler characteristic is {0}, not 1")]
    Euler(i64),
}

/// Checks that `d` triangulates a 3-ball whose boundary is exactly `tau`.
pub fn validate_ball(tau: &SphereTriangulation, d: &TetDecomposition) -> Result<BallCertificate, BallViolation> {
    if d.vertex_count() != tau.vertex_count() {
        return Err(BallViolation::VertexCount {
            expected: tau.vertex_count(),
            found: d.vertex_count(),
        });
    }
    if d.is_empty() {
        return Err(BallViolation::Empty);
    }
    let tau_faces: BTreeSet<Face> = tau.faces().into_iter().collect();
    let counts = d.face_counts();
    for f in &tau_faces {
        match counts.get(f).copied().unwrap_or(0) {
            0 => return Err(BallViolation::MissingBoundaryFace(*f)),
            1 => {}
            c => return Err(BallViolation::FaceOverused { face: *f, count: c }),
        }
    }
    for (&f, &c) in &counts {
        if tau_faces.contains(&f) {
            continue;
        }
        match c {
            1 => return Err(BallViolation::UnexpectedBoundaryFace(f)),
            2 => {}
            c => return Err(BallViolation::FaceOverused { face: f, count: c }),
        }
    }

    // Connectivity through shared faces.
    let tets = d.tets();
    let mut by_face: HashMap<Face, Vec<usize>> = HashMap::new();
    for (i, &t) in tets.iter().enumerate() {
        for f in faces_of(t) {
            by_face.entry(f).or_default().push(i);
        }
    }
    let mut seen = vec![false; tets.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for f in faces_of(tets[i]) {
            for &j in &by_face[&f] {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(BallViolation::Disconnected);
    }

    // Edge links: a path for sphere edges, a cycle for interior edges.
    let mut edge_link: BTreeMap<Edge, Vec<Edge>> = BTreeMap::new();
    for &t in tets {
        for (x, y) in edges_of(t) {
            let rest: Vec<_> = t.iter().copied().filter(|&w| w != x && w != y).collect();
            edge_link.entry((x, y)).or_default().push((rest[0], rest[1]));
        }
    }
    let mut interior_edges = 0;
    for (&e, link) in &edge_link {
        let boundary = tau.has_edge(e.0, e.1);
        if !boundary {
            interior_edges += 1;
        }
        if !is_path_or_cycle(link, !boundary) {
            return Err(BallViolation::EdgeLink(e));
        }
    }

    // Vertex links: connected surfaces with one boundary cycle and Euler
    // characteristic 1.
    for v in 0..d.vertex_count() {
        let link: Vec<Face> = tets
            .iter()
            .filter(|t| t.contains(&v))
            .map(|t| {
                let r: Vec<_> = t.iter().copied().filter(|&w| w != v).collect();
                [r[0], r[1], r[2]]
            })
            .collect();
        if link.is_empty() || !is_disk(&link) {
            return Err(BallViolation::VertexLink(v));
        }
    }

    let edges = edge_link.len();
    let faces = counts.len();
    let euler = d.vertex_count() as i64 - edges as i64 + faces as i64 - tets.len() as i64;
    if euler != 1 {
        return Err(BallViolation::Euler(euler));
    }
    Ok(BallCertificate {
        vertices: d.vertex_count(),
        edges,
        faces,
        tets: tets.len(),
        euler,
        boundary_faces: tau_faces.len(),
        interior_faces: faces - tau_faces.len(),
        interior_edges,
        boundary_match: true,
        edge_links_ok: true,
        vertex_links_ok: true,
        collapsible: if greedy_collapse(tets) {
            Collapsibility::Collapsible
        } else {
            Collapsibility::Unknown
        },
    })
}

fn is_path_or_cycle(edges: &[Edge], cycle: bool) -> bool {
    let mut adj: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for &(x, y) in edges {
        adj.entry(x).or_default().push(y);
        adj.entry(y).or_default().push(x);
    }
    let ends = adj.values().filter(|n| n.len() == 1).count();
    if adj.values().any(|n| n.len() > 2) {
        return false;
    }
    let shape_ok = if cycle {
        ends == 0 && edges.len() == adj.len() && edges.len() >= 3
    } else {
        ends == 2 && edges.len() + 1 == adj.len()
    };
    if !shape_ok {
        return false;
    }
    let start = *adj.keys().next().unwrap();
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for &y in &adj[&x] {
            if seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen.len() == adj.len()
}

fn is_disk(triangles: &[Face]) -> bool {
    let mut edge_count: BTreeMap<Edge, usize> = BTreeMap::new();
    let mut verts = BTreeSet::new();
    for t in triangles {
        let mut s = *t;
        s.sort_unstable();
        for (x, y) in [(s[0], s[1]), (s[0], s[2]), (s[1], s[2])] {
            *edge_count.entry((x, y)).or_insert(0) += 1;
        }
        verts.extend(s);
    }
    if edge_count.values().any(|&c| c > 2) {
        return false;
    }
    let boundary: Vec<Edge> = edge_count.iter().filter(|(_, &c)| c == 1).map(|(&e, _)| e).collect();
    if boundary.is_empty() || !is_path_or_cycle(&boundary, true) {
        return false;
    }
    // Connected through shared edges.
    let mut seen = vec![false; triangles.len()];
    seen[0] = true;
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        for j in 0..triangles.len() {
            if !seen[j] && triangles[i].iter().filter(|x| triangles[j].contains(x)).count() == 2 {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    let euler = verts.len() as i64 - edge_count.len() as i64 + triangles.len() as i64;
    seen.iter().all(|&s| s) && euler == 1
}

/// Collapses free faces greedily, top dimension first. True when the
/// complex reduces to a single vertex.
fn greedy_collapse(tets: &[Tet]) -> bool {
    let mut alive_tet = vec![true; tets.len()];
    let mut face_tets: BTreeMap<Face, Vec<usize>> = BTreeMap::new();
    for (i, &t) in tets.iter().enumerate() {
        for f in faces_of(t) {
            face_tets.entry(f).or_default().push(i);
        }
    }
    let mut faces: BTreeSet<Face> = face_tets.keys().copied().collect();
    let mut remaining = tets.len();
    loop {
        let free = faces.iter().copied().find(|f| {
            face_tets[f].iter().filter(|&&i| alive_tet[i]).count() == 1
        });
        let Some(f) = free else { break };
        let i = face_tets[&f].iter().copied().find(|&i| alive_tet[i]).unwrap();
        alive_tet[i] = false;
        faces.remove(&f);
        remaining -= 1;
    }
    if remaining > 0 {
        return false;
    }

    let mut edge_faces: BTreeMap<Edge, BTreeSet<Face>> = BTreeMap::new();
    for f in &faces {
        for e in [(f[0], f[1]), (f[0], f[2]), (f[1], f[2])] {
            edge_faces.entry(e).or_default().insert(*f);
        }
    }
    let mut edges: BTreeSet<Edge> = tets.iter().flat_map(|&t| edges_of(t)).collect();
    loop {
        let free = edge_faces.iter().find(|(_, fs)| fs.len() == 1).map(|(&e, fs)| (e, *fs.iter().next().unwrap()));
        let Some((e, f)) = free else { break };
        faces.remove(&f);
        edges.remove(&e);
        edge_faces.remove(&e);
        for g in [(f[0], f[1]), (f[0], f[2]), (f[1], f[2])] {
            if let Some(fs) = edge_faces.get_mut(&g) {
                fs.remove(&f);
            }
        }
    }
    if !faces.is_empty() {
        return false;
    }

    // The remaining graph collapses to a point iff it is a tree.
    let verts: BTreeSet<VertexId> = tets.iter().flatten().copied().collect();
    if edges.len() + 1 != verts.len() {
        return false;
    }
    let mut adj: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for &(x, y) in &edges {
        adj.entry(x).or_default().push(y);
        adj.entry(y).or_default().push(x);
    }
    let start = *verts.iter().next().unwrap();
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for &y in adj.get(&x).map(Vec::as_slice).unwrap_or(&[]) {
            if seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen.len() == verts.len()
}

/// Largest number of sphere faces spanned by four vertices, with a witness.
pub fn max_faces_per_tet(tau: &SphereTriangulation) -> (usize, Tet) {
    let faces: BTreeSet<Face> = tau.faces().into_iter().collect();
    let mut best = (0, [0; 4]);
    for f in &faces {
        for w in 0..tau.vertex_count() {
            if f.contains(&w) {
                continue;
            }
            let t = sorted4([f[0], f[1], f[2], w]);
            let k = faces_of(t).iter().filter(|g| faces.contains(*g)).count();
            if k > best.0 || (k == best.0 && t < best.1) {
                best = (k, t);
            }
        }
    }
    best
}

/// Some four vertices spanning at least three sphere faces, if any exist.
pub fn three_face_tet(tau: &SphereTriangulation) -> Option<Tet> {
    let (k, t) = max_faces_per_tet(tau);
    (k >= 3).then_some(t)
}

pub fn no_three_face_tet(tau: &SphereTriangulation) -> bool {
    three_face_tet(tau).is_none()
}

/// The two apexes if `tau` is a double cone over a cycle.
pub fn bipyramid_apexes(tau: &SphereTriangulation) -> Option<(VertexId, VertexId)> {
    let v = tau.vertex_count();
    if v < 5 {
        return None;
    }
    let apexes: Vec<_> = (0..v).filter(|&x| tau.degree(x) == v - 2).collect();
    for (i, &x) in apexes.iter().enumerate() {
        for &y in &apexes[i + 1..] {
            if tau.has_edge(x, y) {
                continue;
            }
            let cone = tau.faces().iter().all(|f| f.contains(&x) || f.contains(&y))
                && (0..v).all(|w| w == x || w == y || tau.degree(w) == 4);
            if cone {
                return Some((x, y));
            }
        }
    }
    None
}

pub fn is_bipyramid(tau: &SphereTriangulation) -> bool {
    bipyramid_apexes(tau).is_some()
}

/// A 3-cycle of `tau` that does not bound a face.
pub fn separating_triangle(tau: &SphereTriangulation) -> Option<Face> {
    for x in 0..tau.vertex_count() {
        for &y in tau.neighbors(x).iter().filter(|&&y| y > x) {
            for &z in tau.neighbors(y).iter().filter(|&&z| z > y) {
                if tau.has_edge(x, z) && !tau.has_face([x, y, z]) {
                    return Some([x, y, z]);
                }
            }
        }
    }
    None
}

/// The face-counting lower bound and the facts it rests on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountingBound {
    pub bound: usize,
    pub max_faces_per_tet: usize,
    pub separating_triangle: Option<Face>,
    pub bipyramid: bool,
    /// Whether the `+1` refinement was applied.
    pub refined: bool,
}

/// Every sphere face lies in exactly one tetrahedron, so at least
/// `F / k` tetrahedra are needed when no four vertices span more than `k`
/// faces. When `k = 2` and exactly `F / 2` tetrahedra are used, Euler's
/// formula leaves a single interior edge; if every 3-cycle bounds a face,
/// each tetrahedron must contain that edge, which forces a bipyramid.
pub fn counting_lower_bound(tau: &SphereTriangulation) -> CountingBound {
    let f = tau.face_count();
    let (k, _) = max_faces_per_tet(tau);
    let separating = separating_triangle(tau);
    let bipyramid = is_bipyramid(tau);
    let base = f.div_ceil(k.max(1));
    let refined = k <= 2 && separating.is_none() && !bipyramid;
    CountingBound {
        bound: base + usize::from(refined),
        max_faces_per_tet: k,
        separating_triangle: separating,
        bipyramid,
        refined,
    }
}

#[derive(Debug, Clone)]
pub struct MinTetConfig {
    pub max_nodes: u64,
    pub time_limit: Option<Duration>,
    /// Only look for decompositions with at most this many tetrahedra.
    pub max_tets: Option<usize>,
    /// Use [`counting_lower_bound`] as a global bound.
    pub counting_bound: bool,
    /// An externally proven lower bound (e.g. from the chain norm).
    pub external_lower_bound: usize,
}

impl Default for MinTetConfig {
    fn default() -> Self {
        MinTetConfig {
            max_nodes: 50_000_000,
            time_limit: None,
            max_tets: None,
            counting_bound: false,
            external_lower_bound: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MinTetResult {
    /// Size of the smallest decomposition found.
    pub best: usize,
    pub witness: TetDecomposition,
    pub certificate: BallCertificate,
    /// Proven lower bound; equals `best` when optimal.
    pub lower_bound: usize,
    pub optimal: bool,
    pub nodes: u64,
    /// Face-consistent complexes rejected for not being balls.
    pub rejected: u64,
    pub elapsed: Duration,
}

fn face_index(f: Face) -> usize {
    let [a, b, c] = f;
    c * (c - 1) * (c - 2) / 6 + b * (b - 1) / 2 + a
}

struct Search<'a> {
    tau: &'a SphereTriangulation,
    v: usize,
    kmax: usize,
    is_tau: Vec<bool>,
    count: Vec<u8>,
    tau_faces: Vec<Face>,
    /// Non-sphere faces currently used by exactly one tetrahedron.
    open_interior: BTreeSet<Face>,
    open_tau: usize,
    chosen: Vec<Tet>,
    chosen_set: BTreeSet<Tet>,
    best: usize,
    best_witness: Option<(TetDecomposition, BallCertificate)>,
    global_lower: usize,
    nodes: u64,
    rejected: u64,
    max_nodes: u64,
    deadline: Option<Instant>,
    aborted: bool,
}

impl Search<'_> {
    fn can_add(&self, t: Tet) -> bool {
        !self.chosen_set.contains(&t)
            && faces_of(t).iter().all(|&g| {
                let c = self.count[face_index(g)];
                if self.is_tau[face_index(g)] {
                    c == 0
                } else {
                    c <= 1
                }
            })
    }

    fn closes(&self, t: Tet) -> usize {
        faces_of(t)
            .iter()
            .filter(|&&g| {
                let c = self.count[face_index(g)];
                if self.is_tau[face_index(g)] {
                    c == 0
                } else {
                    c == 1
                }
            })
            .count()
    }

    fn push(&mut self, t: Tet) {
        for g in faces_of(t) {
            let i = face_index(g);
            self.count[i] += 1;
            if self.is_tau[i] {
                self.open_tau -= 1;
            } else if self.count[i] == 1 {
                self.open_interior.insert(g);
            } else {
                self.open_interior.remove(&g);
            }
        }
        self.chosen.push(t);
        self.chosen_set.insert(t);
    }

    fn pop(&mut self) {
        let t = self.chosen.pop().unwrap();
        self.chosen_set.remove(&t);
        for g in faces_of(t) {
            let i = face_index(g);
            self.count[i] -= 1;
            if self.is_tau[i] {
                self.open_tau += 1;
            } else if self.count[i] == 1 {
                self.open_interior.insert(g);
            } else {
                self.open_interior.remove(&g);
            }
        }
    }

    fn candidates(&self, f: Face) -> Vec<Tet> {
        let mut c: Vec<Tet> = (0..self.v)
            .filter(|w| !f.contains(w))
            .map(|w| sorted4([f[0], f[1], f[2], w]))
            .filter(|&t| self.can_add(t))
            .collect();
        c.sort_by_key(|&t| (std::cmp::Reverse(self.closes(t)), t));
        c
    }

    fn local_lower(&self) -> usize {
        let by_tau = self.open_tau.div_ceil(self.kmax.max(1));
        let by_open = (self.open_tau + self.open_interior.len()).div_ceil(4);
        by_tau.max(by_open)
    }

    fn run(&mut self) {
        if self.aborted || self.best <= self.global_lower {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.max_nodes || self.deadline.is_some_and(|d| Instant::now() > d) {
            self.aborted = true;
            return;
        }
        if self.open_tau == 0 && self.open_interior.is_empty() {
            let d = TetDecomposition::new(self.v, self.chosen.clone()).expect("distinct tetrahedra");
            match validate_ball(self.tau, &d) {
                Ok(cert) => {
                    self.best = d.len();
                    self.best_witness = Some((d, cert));
                }
                Err(_) => self.rejected += 1,
            }
            return;
        }
        if self.chosen.len() + self.local_lower() >= self.best {
            return;
        }
        // Fail-first: the open face with the fewest extensions.
        let mut pick: Option<(Face, Vec<Tet>)> = None;
        let open = self
            .tau_faces
            .iter()
            .copied()
            .filter(|&f| self.count[face_index(f)] == 0)
            .chain(self.open_interior.iter().copied());
        for f in open {
            let c = self.candidates(f);
            if pick.as_ref().is_none_or(|(_, p)| c.len() < p.len()) {
                let empty = c.is_empty();
                pick = Some((f, c));
                if empty {
                    break;
                }
            }
        }
        let (_, cands) = pick.unwrap();
        for t in cands {
            self.push(t);
            self.run();
            self.pop();
            if self.aborted || self.chosen.len() + self.local_lower() >= self.best {
                break;
            }
        }
    }
}

/// Exhaustive branch and bound for a smallest decomposition extending `tau`.
/// The incumbent starts at the best cone decomposition; a search cut short by
/// the budget reports the best witness together with the proven lower bound.
pub fn min_tet(tau: &SphereTriangulation, cfg: &MinTetConfig) -> MinTetResult {
    let start = Instant::now();
    let v = tau.vertex_count();
    let apex = (0..v).max_by_key(|&x| (tau.degree(x), std::cmp::Reverse(x))).unwrap();
    let cone = cone_decomposition(tau, apex).expect("apex exists");
    let cone_cert = validate_ball(tau, &cone).expect("cone decompositions are balls");

    let (kmax, _) = max_faces_per_tet(tau);
    let mut global_lower = cfg.external_lower_bound.max(tau.face_count().div_ceil(kmax.max(1)));
    if cfg.counting_bound {
        global_lower = global_lower.max(counting_lower_bound(tau).bound);
    }
    let cap = cfg.max_tets.map_or(usize::MAX, |k| k + 1);

    let mut is_tau = vec![false; face_index([v - 3, v - 2, v - 1]) + 1];
    let tau_faces = tau.faces();
    for &f in &tau_faces {
        is_tau[face_index(f)] = true;
    }
    let mut search = Search {
        tau,
        v,
        kmax,
        count: vec![0; is_tau.len()],
        is_tau,
        open_tau: tau_faces.len(),
        tau_faces,
        open_interior: BTreeSet::new(),
        chosen: Vec::new(),
        chosen_set: BTreeSet::new(),
        best: cone.len().min(cap),
        best_witness: None,
        global_lower,
        nodes: 0,
        rejected: 0,
        max_nodes: cfg.max_nodes,
        deadline: cfg.time_limit.map(|d| start + d),
        aborted: false,
    };
    search.run();

    let searched_below = search.best;
    let (witness, certificate) = search.best_witness.take().unwrap_or((cone, cone_cert));
    let best = witness.len();
    let lower_bound = if search.aborted {
        global_lower.min(best)
    } else {
        // Everything below `searched_below` was ruled out.
        searched_below.max(global_lower).min(best)
    };
    MinTetResult {
        best,
        witness,
        certificate,
        lower_bound,
        optimal: lower_bound == best,
        nodes: search.nodes,
        rejected: search.rejected,
        elapsed: start.elapsed(),
    }
}

/// Size of the two-cone construction: each side coned at its chosen vertex,
/// plus one tetrahedron per seam edge to fill the bipyramid in between.
pub fn two_cone_count(side_faces: [usize; 2], apex_degrees: [usize; 2], seam_len: usize) -> usize {
    side_faces[0] - apex_degrees[0] + side_faces[1] - apex_degrees[1] + seam_len
}

#[derive(Debug, Clone)]
pub struct TwoConeDecomposition {
    pub decomposition: TetDecomposition,
    pub certificate: BallCertificate,
    pub cone_sizes: [usize; 2],
    pub fill: usize,
}

/// Cones each side of `seam` at an interior vertex (`v1` on the first side,
/// `v2` on the second) and fills the remaining pentagonal, or generally
/// `seam`-gonal, bipyramid around the edge `v1 v2`.
pub fn two_cone_construction(
    tau: &SphereTriangulation,
    seam: &CycleInSphere,
    v1: VertexId,
    v2: VertexId,
) -> Result<TwoConeDecomposition, DecompositionError> {
    let sides = seam.sides(tau);
    let on_seam: BTreeSet<_> = seam.vertices().iter().copied().collect();
    let interior = |side: &[[VertexId; 3]]| -> BTreeSet<VertexId> {
        side.iter().flatten().copied().filter(|x| !on_seam.contains(x)).collect()
    };
    if !interior(&sides.0).contains(&v1) {
        return Err(DecompositionError::Inapplicable(format!("vertex {v1} is not inside the first side")));
    }
    if !interior(&sides.1).contains(&v2) {
        return Err(DecompositionError::Inapplicable(format!("vertex {v2} is not inside the second side")));
    }
    let mut tets = Vec::new();
    let mut cone_sizes = [0; 2];
    for (k, (side, apex)) in [(&sides.0, v1), (&sides.1, v2)].into_iter().enumerate() {
        for t in side.iter().filter(|t| !t.contains(&apex)) {
            tets.push(sorted4([t[0], t[1], t[2], apex]));
            cone_sizes[k] += 1;
        }
    }

    // Faces left uncovered or doubly covered by the two cones.
    let mut parity: BTreeMap<Face, usize> = BTreeMap::new();
    for &t in &tets {
        for f in faces_of(t) {
            *parity.entry(f).or_insert(0) += 1;
        }
    }
    for f in tau.faces() {
        *parity.entry(f).or_insert(0) += 1;
    }
    let residual: Vec<Face> = parity.into_iter().filter(|(_, c)| c % 2 == 1).map(|(f, _)| f).collect();
    let verts: BTreeSet<VertexId> = residual.iter().flatten().copied().collect();
    let edges: BTreeSet<Edge> = residual
        .iter()
        .flat_map(|f| [(f[0], f[1]), (f[0], f[2]), (f[1], f[2])])
        .collect();
    let describe = || format!("residual has face vector ({}, {}, {})", verts.len(), edges.len(), residual.len());

    let local: BTreeMap<VertexId, usize> = verts.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let local_faces: Vec<_> = residual.iter().map(|f| [local[&f[0]], local[&f[1]], local[&f[2]]]).collect();
    let residual_sphere =
        SphereTriangulation::new(verts.len(), &local_faces).map_err(|_| DecompositionError::Inapplicable(describe()))?;
    let apexes = bipyramid_apexes(&residual_sphere).map(|(x, y)| (verts.iter().nth(x).copied(), verts.iter().nth(y).copied()));
    if apexes != Some((Some(v1.min(v2)), Some(v1.max(v2)))) || verts.len() != seam.len() + 2 {
        return Err(DecompositionError::Inapplicable(describe()));
    }
    let c = seam.vertices();
    for i in 0..c.len() {
        tets.push(sorted4([v1, v2, c[i], c[(i + 1) % c.len()]]));
    }
    let decomposition = TetDecomposition::new(tau.vertex_count(), tets)?;
    let certificate = validate_ball(tau, &decomposition)
        .map_err(|e| DecompositionError::Inapplicable(format!("glued complex is not a ball: {e}")))?;
    Ok(TwoConeDecomposition {
        decomposition,
        certificate,
        cone_sizes,
        fill: c.len(),
    })
}

/// Tries every pair of interior vertices of the given degree, one per side
/// of `seam`, and returns the smallest valid two-cone decomposition.
pub fn search_two_cone(
    tau: &SphereTriangulation,
    seam: &CycleInSphere,
    apex_degree: Option<usize>,
) -> Option<(VertexId, VertexId, TwoConeDecomposition)> {
    let (a, b) = seam.sides(tau);
    let on_seam: BTreeSet<_> = seam.vertices().iter().copied().collect();
    let inside = |side: &[[VertexId; 3]]| -> Vec<VertexId> {
        let s: BTreeSet<_> = side
            .iter()
            .flatten()
            .copied()
            .filter(|x| !on_seam.contains(x) && apex_degree.is_none_or(|d| tau.degree(*x) == d))
            .collect();
        s.into_iter().collect()
    };
    let mut best: Option<(VertexId, VertexId, TwoConeDecomposition)> = None;
    for &v1 in &inside(&a) {
        for &v2 in &inside(&b) {
            if let Ok(r) = two_cone_construction(tau, seam, v1, v2) {
                if best.as_ref().is_none_or(|(_, _, b)| r.decomposition.len() < b.decomposition.len()) {
                    best = Some((v1, v2, r));
                }
            }
        }
    }
    best
}

/// Builds the decomposition of a flip path between two triangulations glued
/// into a sphere, returning the sphere too.
pub fn decomposition_of_path(
    tp: &PolygonTriangulation,
    tm: &PolygonTriangulation,
    path: &FlipPath,
) -> Result<(SphereTriangulation, TetDecomposition), DecompositionError> {
    let tau = glue(tp, tm)?;
    let d = TetDecomposition::from_flip_path(tp, tm, path)?;
    Ok((tau, d))
}
