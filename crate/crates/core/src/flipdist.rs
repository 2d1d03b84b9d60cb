//! Exact flip distance between two triangulations of the same polygon, and
//! utilities that inspect flip paths (extra diagonals, flip-count identity,
//! triangle property of shortest paths).
//!
//! Three engines are available: plain breadth-first search from the target,
//! bidirectional breadth-first search (the default) and IDA* guided by the
//! number of diagonals still to be removed. All of them can first cut the
//! polygon along the diagonals the two triangulations share; those diagonals
//! are never flipped by a shortest path, so the sub-distances simply add up.
//!
//! Witness paths are deterministic. `Bfs` and `IterativeDeepening` return the
//! lexicographically smallest sequence of removed diagonals among all shortest
//! paths; `Bidirectional` returns the path through the first meeting point in
//! its (ordered) expansion.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::polygon::{split_along, Diagonal, FlipPath, PolygonError, PolygonTriangulation, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    Bfs,
    #[default]
    Bidirectional,
    IterativeDeepening,
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bfs" => Ok(Strategy::Bfs),
            "bidirectional" | "bidir" => Ok(Strategy::Bidirectional),
            "iterative-deepening" | "ida" | "ida*" => Ok(Strategy::IterativeDeepening),
            other => Err(format!(
                "unknown strategy '{other}' (expected bfs, bidirectional or iterative-deepening)"
            )),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Bfs => "bfs",
            Strategy::Bidirectional => "bidirectional",
            Strategy::IterativeDeepening => "iterative-deepening",
        })
    }
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub strategy: Strategy,
    /// Cut along common diagonals before searching.
    pub split_common: bool,
    /// Node expansions allowed over the whole call.
    pub max_nodes: usize,
    pub time_limit: Option<Duration>,
    /// Worker threads for frontier expansion; 1 runs inline.
    pub threads: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            strategy: Strategy::Bidirectional,
            split_common: true,
            max_nodes: 20_000_000,
            time_limit: None,
            threads: 1,
        }
    }
}

impl SearchConfig {
    pub fn with_strategy(strategy: Strategy) -> Self {
        SearchConfig {
            strategy,
            ..Default::default()
        }
    }

    pub fn unsplit(mut self) -> Self {
        self.split_common = false;
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes_expanded: usize,
    pub frontier_peak: usize,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct DistanceResult {
    pub distance: usize,
    pub path: FlipPath,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, Error)]
pub enum SearchError {
    #[error(transparent)]
    Polygon(#[from] PolygonError),
    #[error(
        "search budget exhausted after {} expansions; distance is between {lower_bound} and {upper_bound}",
        stats.nodes_expanded
    )]
    BudgetExceeded {
        lower_bound: usize,
        upper_bound: usize,
        stats: SearchStats,
    },
}

struct Budget {
    max_nodes: usize,
    deadline: Option<Instant>,
    started: Instant,
    stats: SearchStats,
}

struct Exhausted;

impl Budget {
    fn new(cfg: &SearchConfig) -> Self {
        let started = Instant::now();
        Budget {
            max_nodes: cfg.max_nodes,
            deadline: cfg.time_limit.map(|t| started + t),
            started,
            stats: SearchStats::default(),
        }
    }

    fn charge(&mut self, nodes: usize) -> Result<(), Exhausted> {
        self.stats.nodes_expanded += nodes;
        if self.stats.nodes_expanded > self.max_nodes {
            return Err(Exhausted);
        }
        if let Some(deadline) = self.deadline {
            if Instant::now() > deadline {
                return Err(Exhausted);
            }
        }
        Ok(())
    }

    fn frontier(&mut self, size: usize) {
        self.stats.frontier_peak = self.stats.frontier_peak.max(size);
    }

    fn finish(mut self) -> SearchStats {
        self.stats.elapsed = self.started.elapsed();
        self.stats
    }
}

/// Admissible lower bound: every diagonal of `t1` missing from `t2` has to
/// be flipped at least once.
pub fn lower_bound(t1: &PolygonTriangulation, t2: &PolygonTriangulation) -> usize {
    t1.difference_count(t2)
}

/// A path that turns `t` into the fan at `apex` in `n - 3 - deg(apex)` flips.
pub fn path_to_fan(t: &PolygonTriangulation, apex: VertexId) -> FlipPath {
    let n = t.n();
    let mut removals = Vec::new();
    let mut current = t.clone();
    // Some triangle at the apex has a diagonal opposite to it until the fan
    // is reached; flipping that diagonal adds one diagonal at the apex.
    while current.degree(apex) < n - 3 {
        let d = current
            .triangles()
            .into_iter()
            .filter(|tri| tri.contains(&apex))
            .find_map(|tri| {
                let others: Vec<_> = tri.iter().copied().filter(|&v| v != apex).collect();
                let d = Diagonal::new(others[0], others[1]);
                current.contains(d).then_some(d)
            })
            .expect("a non-fan triangulation has a flippable diagonal opposite the apex");
        current = current.flip(d).expect("own diagonal").0;
        removals.push(d);
    }
    FlipPath::from_removals(t.clone(), removals).expect("flips were applied in order")
}

/// The shortest path of the form `t1 -> fan(v) -> t2`, over all apexes `v`.
pub fn fan_upper_bound_path(t1: &PolygonTriangulation, t2: &PolygonTriangulation) -> FlipPath {
    let n = t1.n();
    let apex = (0..n)
        .min_by_key(|&v| 2 * (n - 3) - t1.degree(v) - t2.degree(v))
        .unwrap_or(0);
    let down = path_to_fan(t1, apex);
    let up = path_to_fan(t2, apex).reversed();
    down.concat(&up).expect("both halves meet at the fan")
}

/// Exact flip distance with a witness path.
pub fn flip_distance(
    t1: &PolygonTriangulation,
    t2: &PolygonTriangulation,
    cfg: &SearchConfig,
) -> Result<DistanceResult, SearchError> {
    Ok(search(t1, t2, None, cfg)?.expect("unbounded search always reaches the target"))
}

/// Like [`flip_distance`], but gives up (returning `None`) as soon as the
/// distance is known to exceed `max_distance`.
pub fn flip_distance_within(
    t1: &PolygonTriangulation,
    t2: &PolygonTriangulation,
    max_distance: usize,
    cfg: &SearchConfig,
) -> Result<Option<DistanceResult>, SearchError> {
    search(t1, t2, Some(max_distance), cfg)
}

fn search(
    t1: &PolygonTriangulation,
    t2: &PolygonTriangulation,
    limit: Option<usize>,
    cfg: &SearchConfig,
) -> Result<Option<DistanceResult>, SearchError> {
    if t1.n() != t2.n() {
        return Err(PolygonError::SizeMismatch(t1.n(), t2.n()).into());
    }
    let mut budget = Budget::new(cfg);
    let pool = (cfg.threads > 1)
        .then(|| rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build().ok())
        .flatten();
    let engine = Engine {
        strategy: cfg.strategy,
        pool: pool.as_ref(),
    };

    let outcome = if cfg.split_common {
        let parts = split_along(t1, t2)?;
        let lower: Vec<usize> = parts.iter().map(|p| lower_bound(&p.first, &p.second)).collect();
        let mut removals = Vec::new();
        let mut done = 0usize;
        let mut outcome = Ok(true);
        for (k, part) in parts.iter().enumerate() {
            let rest: usize = lower[k + 1..].iter().sum();
            let part_limit = match limit {
                Some(l) if l < done + rest => {
                    outcome = Ok(false);
                    break;
                }
                Some(l) => Some(l - done - rest),
                None => None,
            };
            match engine.run(&part.first, &part.second, part_limit, &mut budget) {
                Ok(Some(local)) => {
                    done += local.len();
                    removals.extend(local.iter().map(|&d| part.to_global(d)));
                }
                Ok(None) => {
                    outcome = Ok(false);
                    break;
                }
                Err(e) => {
                    outcome = Err(e);
                    break;
                }
            }
        }
        outcome.map(|found| found.then_some(removals))
    } else {
        engine.run(t1, t2, limit, &mut budget)
    };

    match outcome {
        Ok(Some(removals)) => {
            let path = FlipPath::from_removals(t1.clone(), removals)?;
            debug_assert_eq!(&path.end(), t2);
            Ok(Some(DistanceResult {
                distance: path.len(),
                path,
                stats: budget.finish(),
            }))
        }
        Ok(None) => Ok(None),
        Err(Exhausted) => Err(SearchError::BudgetExceeded {
            lower_bound: lower_bound(t1, t2),
            upper_bound: fan_upper_bound_path(t1, t2).len(),
            stats: budget.finish(),
        }),
    }
}

struct Successor {
    removed: Diagonal,
    inserted: Diagonal,
    state: PolygonTriangulation,
}

fn successors(t: &PolygonTriangulation) -> Vec<Successor> {
    t.diagonals()
        .into_iter()
        .map(|removed| {
            let (state, inserted) = t.flip(removed).expect("own diagonal");
            Successor {
                removed,
                inserted,
                state,
            }
        })
        .collect()
}

struct Engine<'a> {
    strategy: Strategy,
    pool: Option<&'a rayon::ThreadPool>,
}

type Removals = Vec<Diagonal>;

impl Engine<'_> {
    fn run(
        &self,
        src: &PolygonTriangulation,
        dst: &PolygonTriangulation,
        limit: Option<usize>,
        budget: &mut Budget,
    ) -> Result<Option<Removals>, Exhausted> {
        if src == dst {
            return Ok(Some(Vec::new()));
        }
        if limit.is_some_and(|l| lower_bound(src, dst) > l) {
            return Ok(None);
        }
        match self.strategy {
            Strategy::Bfs => self.bfs(src, dst, limit, budget),
            Strategy::Bidirectional => self.bidirectional(src, dst, limit, budget),
            Strategy::IterativeDeepening => ida_star(src, dst, limit, budget),
        }
    }

    /// Expands a frontier, in parallel when a pool is configured; the result
    /// order matches the frontier order either way.
    fn expand(&self, frontier: &[&PolygonTriangulation]) -> Vec<Vec<Successor>> {
        match self.pool {
            Some(pool) => pool.install(|| frontier.par_iter().map(|t| successors(t)).collect()),
            None => frontier.iter().map(|t| successors(t)).collect(),
        }
    }

    /// Breadth-first search outward from `dst`, then a greedy walk from `src`
    /// that always takes the smallest removable diagonal leading one step
    /// closer.
    fn bfs(
        &self,
        src: &PolygonTriangulation,
        dst: &PolygonTriangulation,
        limit: Option<usize>,
        budget: &mut Budget,
    ) -> Result<Option<Removals>, Exhausted> {
        let mut dist: HashMap<PolygonTriangulation, usize> = HashMap::new();
        dist.insert(dst.clone(), 0);
        let mut frontier = vec![dst.clone()];
        let mut depth = 0;
        let total = 'outer: loop {
            if limit.is_some_and(|l| depth >= l) || frontier.is_empty() {
                return Ok(None);
            }
            budget.frontier(frontier.len());
            budget.charge(frontier.len())?;
            let refs: Vec<_> = frontier.iter().collect();
            let expanded = self.expand(&refs);
            let mut next = Vec::new();
            for succ in expanded.into_iter().flatten() {
                if dist.contains_key(&succ.state) {
                    continue;
                }
                dist.insert(succ.state.clone(), depth + 1);
                if &succ.state == src {
                    break 'outer depth + 1;
                }
                next.push(succ.state);
            }
            frontier = next;
            depth += 1;
        };

        let mut removals = Vec::with_capacity(total);
        let mut current = src.clone();
        for remaining in (0..total).rev() {
            let step = successors(&current)
                .into_iter()
                .find(|s| dist.get(&s.state) == Some(&remaining))
                .expect("a neighbor one step closer exists");
            removals.push(step.removed);
            current = step.state;
        }
        Ok(Some(removals))
    }

    fn bidirectional(
        &self,
        src: &PolygonTriangulation,
        dst: &PolygonTriangulation,
        limit: Option<usize>,
        budget: &mut Budget,
    ) -> Result<Option<Removals>, Exhausted> {
        let mut fwd = Side::new(src);
        let mut bwd = Side::new(dst);
        loop {
            if limit.is_some_and(|l| fwd.depth + bwd.depth >= l) {
                return Ok(None);
            }
            if fwd.frontier.is_empty() || bwd.frontier.is_empty() {
                return Ok(None);
            }
            let forward = fwd.frontier.len() <= bwd.frontier.len();
            let (grow, other) = if forward {
                (&mut fwd, &bwd)
            } else {
                (&mut bwd, &fwd)
            };
            budget.frontier(grow.frontier.len() + other.frontier.len());
            budget.charge(grow.frontier.len())?;
            let meet = self.grow_level(grow, other);
            if let Some((mine, theirs)) = meet {
                let (f_idx, b_idx) = if forward { (mine, theirs) } else { (theirs, mine) };
                let mut removals = fwd.chain(f_idx);
                removals.reverse();
                let mut idx = b_idx;
                while let Some(node) = bwd.nodes.get(idx).filter(|n| n.parent != usize::MAX) {
                    removals.push(node.toward_root);
                    idx = node.parent;
                }
                return Ok(Some(removals));
            }
        }
    }

    /// Expands one full level of `grow`; returns the first meeting point
    /// as (index in `grow`, index in `other`).
    fn grow_level(&self, grow: &mut Side, other: &Side) -> Option<(usize, usize)> {
        let frontier = std::mem::take(&mut grow.frontier);
        let refs: Vec<_> = frontier.iter().map(|&i| &grow.nodes[i].state).collect();
        let expanded = self.expand(&refs);
        let mut meet = None;
        for (&parent, succs) in frontier.iter().zip(expanded) {
            for succ in succs {
                if grow.index.contains_key(&succ.state) {
                    continue;
                }
                let idx = grow.nodes.len();
                if meet.is_none() {
                    if let Some(&j) = other.index.get(&succ.state) {
                        meet = Some((idx, j));
                    }
                }
                grow.index.insert(succ.state.clone(), idx);
                grow.nodes.push(Node {
                    state: succ.state,
                    parent,
                    from_parent: succ.removed,
                    toward_root: succ.inserted,
                });
                grow.frontier.push(idx);
            }
        }
        grow.depth += 1;
        meet
    }
}

struct Node {
    state: PolygonTriangulation,
    parent: usize,
    /// Diagonal removed from the parent to reach this node.
    from_parent: Diagonal,
    /// Diagonal removed from this node to return to the parent.
    toward_root: Diagonal,
}

struct Side {
    nodes: Vec<Node>,
    index: HashMap<PolygonTriangulation, usize>,
    frontier: Vec<usize>,
    depth: usize,
}

impl Side {
    fn new(root: &PolygonTriangulation) -> Self {
        let mut index = HashMap::new();
        index.insert(root.clone(), 0);
        let placeholder = Diagonal::new(0, 0);
        Side {
            nodes: vec![Node {
                state: root.clone(),
                parent: usize::MAX,
                from_parent: placeholder,
                toward_root: placeholder,
            }],
            index,
            frontier: vec![0],
            depth: 0,
        }
    }

    /// Removals leading from the root to `idx`, listed from `idx` back to the root.
    fn chain(&self, mut idx: usize) -> Vec<Diagonal> {
        let mut out = Vec::new();
        while self.nodes[idx].parent != usize::MAX {
            out.push(self.nodes[idx].from_parent);
            idx = self.nodes[idx].parent;
        }
        out
    }
}

fn ida_star(
    src: &PolygonTriangulation,
    dst: &PolygonTriangulation,
    limit: Option<usize>,
    budget: &mut Budget,
) -> Result<Option<Removals>, Exhausted> {
    struct Dfs<'a> {
        dst: &'a PolygonTriangulation,
        bound: usize,
        path: Vec<Diagonal>,
    }

    enum Step {
        Found,
        Exceeded(usize),
    }

    fn dfs(
        ctx: &mut Dfs<'_>,
        node: &PolygonTriangulation,
        g: usize,
        undo: Option<Diagonal>,
        budget: &mut Budget,
    ) -> Result<Step, Exhausted> {
        let f = g + lower_bound(node, ctx.dst);
        if f > ctx.bound {
            return Ok(Step::Exceeded(f));
        }
        if node == ctx.dst {
            return Ok(Step::Found);
        }
        budget.charge(1)?;
        budget.frontier(g + 1);
        let mut next_bound = usize::MAX;
        for succ in successors(node) {
            if Some(succ.removed) == undo {
                continue;
            }
            ctx.path.push(succ.removed);
            match dfs(ctx, &succ.state, g + 1, Some(succ.inserted), budget)? {
                Step::Found => return Ok(Step::Found),
                Step::Exceeded(b) => next_bound = next_bound.min(b),
            }
            ctx.path.pop();
        }
        Ok(Step::Exceeded(next_bound))
    }

    let mut ctx = Dfs {
        dst,
        bound: lower_bound(src, dst),
        path: Vec::new(),
    };
    loop {
        if limit.is_some_and(|l| ctx.bound > l) {
            return Ok(None);
        }
        match dfs(&mut ctx, src, 0, None, budget)? {
            Step::Found => return Ok(Some(ctx.path)),
            Step::Exceeded(usize::MAX) => return Ok(None),
            Step::Exceeded(b) => ctx.bound = b,
        }
    }
}

/// Diagonals that occur somewhere along the path but in neither endpoint.
pub fn extra_diagonals(path: &FlipPath) -> BTreeSet<Diagonal> {
    let start = path.start().clone();
    let end = path.end();
    path.states()
        .iter()
        .flat_map(|t| t.diagonals())
        .filter(|&d| !start.contains(d) && !end.contains(d))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentityPrecondition {
    #[error("endpoints share diagonal {0}")]
    CommonDiagonal(Diagonal),
    #[error("diagonal {0} is inserted more than once (or re-inserted after leaving the start)")]
    Reinserted(Diagonal),
}

/// Checks `|path| = n - 3 + e`, where `e` counts extra diagonals. The identity
/// holds exactly when the endpoints share no diagonal and no diagonal enters
/// the triangulation twice; paths outside that reading are reported instead
/// of being judged.
pub fn check_flip_count_identity(path: &FlipPath) -> Result<bool, IdentityPrecondition> {
    let start = path.start();
    if let Some(&d) = start.common_diagonals(&path.end()).first() {
        return Err(IdentityPrecondition::CommonDiagonal(d));
    }
    let mut seen: BTreeSet<Diagonal> = start.diagonals().into_iter().collect();
    for step in path.steps() {
        if !seen.insert(step.inserted) {
            return Err(IdentityPrecondition::Reinserted(step.inserted));
        }
    }
    let e = extra_diagonals(path).len();
    Ok(path.len() == path.n() - 3 + e)
}

/// For every triangle whose three sides occur along the path (diagonals of
/// some visited triangulation or polygon edges), checks that one visited
/// triangulation contains the whole triangle. Returns the first triangle
/// that is never realized.
pub fn check_spanned_triangles(path: &FlipPath) -> Result<(), [VertexId; 3]> {
    let n = path.n();
    let states = path.states();
    let mut present = vec![vec![false; n]; n];
    for v in 0..n {
        let w = (v + 1) % n;
        present[v][w] = true;
        present[w][v] = true;
    }
    for t in &states {
        for d in t.diagonals() {
            present[d.a()][d.b()] = true;
            present[d.b()][d.a()] = true;
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if !present[a][b] {
                continue;
            }
            for c in b + 1..n {
                if !(present[a][c] && present[b][c]) {
                    continue;
                }
                let realized = states
                    .iter()
                    .any(|t| t.has_edge(a, b) && t.has_edge(b, c) && t.has_edge(a, c));
                if !realized {
                    return Err([a, b, c]);
                }
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct DiameterReport {
    pub n: usize,
    /// `2n - 10`, when `n > 12`.
    pub bound: Option<usize>,
    pub distances: Vec<usize>,
    pub max_found: usize,
    pub note: Option<String>,
}

impl DiameterReport {
    /// `None` when the bound does not apply.
    pub fn within_bound(&self) -> Option<bool> {
        self.bound.map(|b| self.distances.iter().all(|&d| d <= b))
    }
}

/// Exact distances between `trials` uniformly random pairs, compared with
/// the flip-graph diameter `2n - 10` (valid for `n > 12`).
pub fn diameter_sanity<R: Rng + ?Sized>(
    n: usize,
    trials: usize,
    rng: &mut R,
    cfg: &SearchConfig,
) -> Result<DiameterReport, SearchError> {
    let pairs: Vec<_> = (0..trials)
        .map(|_| {
            Ok((
                PolygonTriangulation::random(n, rng)?,
                PolygonTriangulation::random(n, rng)?,
            ))
        })
        .collect::<Result<_, PolygonError>>()?;
    let distances = pairs
        .iter()
        .map(|(a, b)| flip_distance(a, b, cfg).map(|r| r.distance))
        .collect::<Result<Vec<_>, _>>()?;
    let bound = (n > 12).then(|| 2 * n - 10);
    Ok(DiameterReport {
        n,
        bound,
        max_found: distances.iter().copied().max().unwrap_or(0),
        distances,
        note: bound
            .is_none()
            .then(|| format!("diameter bound 2n-10 only applies for n > 12; n = {n} skipped")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{explicit_path, t_minus, t_plus, FamilyLabeling};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::VecDeque;

    fn d(a: usize, b: usize) -> Diagonal {
        Diagonal::new(a, b)
    }

    /// Plain BFS distances from `root` over the whole flip graph.
    fn all_distances(root: &PolygonTriangulation) -> HashMap<PolygonTriangulation, usize> {
        let mut dist = HashMap::new();
        dist.insert(root.clone(), 0);
        let mut queue = VecDeque::from([root.clone()]);
        while let Some(t) = queue.pop_front() {
            let k = dist[&t];
            for (_, s) in t.neighbors() {
                if !dist.contains_key(&s) {
                    dist.insert(s.clone(), k + 1);
                    queue.push_back(s);
                }
            }
        }
        dist
    }

    const STRATEGIES: [Strategy; 3] = [Strategy::Bfs, Strategy::Bidirectional, Strategy::IterativeDeepening];

    #[test]
    fn family_distance_for_small_n() {
        for strategy in STRATEGIES {
            let r = flip_distance(&t_plus(2).unwrap(), &t_minus(2).unwrap(), &SearchConfig::with_strategy(strategy)).unwrap();
            assert_eq!(r.distance, 7, "{strategy}");
            assert_eq!(r.path.end(), t_minus(2).unwrap());
        }
        assert_eq!(lower_bound(&t_plus(2).unwrap(), &t_minus(2).unwrap()), 5);
    }

    #[test]
    fn fan_pair_matches_exhaustive_bfs() {
        let a = PolygonTriangulation::fan(8, 0).unwrap();
        let b = PolygonTriangulation::fan(8, 1).unwrap();
        let oracle = all_distances(&a);
        assert_eq!(oracle.len(), 132);
        let expected = oracle[&b];
        for strategy in STRATEGIES {
            let r = flip_distance(&a, &b, &SearchConfig::with_strategy(strategy)).unwrap();
            assert_eq!(r.distance, expected);
        }
        let same = flip_distance(&a, &a, &SearchConfig::default()).unwrap();
        assert_eq!(same.distance, 0);
        assert!(same.path.is_empty());
    }

    #[test]
    fn lower_bound_is_admissible_on_hexagon() {
        let all: Vec<_> = all_distances(&PolygonTriangulation::fan(6, 0).unwrap()).into_keys().collect();
        assert_eq!(all.len(), 14);
        for a in &all {
            let dist = all_distances(a);
            for b in &all {
                assert!(lower_bound(a, b) <= dist[b]);
                assert_eq!(lower_bound(a, b) == 0, a == b);
            }
        }
    }

    #[test]
    fn engines_agree_with_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..60 {
            let n = rng.gen_range(4..=10);
            let a = PolygonTriangulation::random(n, &mut rng).unwrap();
            let b = PolygonTriangulation::random(n, &mut rng).unwrap();
            let expected = all_distances(&a)[&b];
            for strategy in STRATEGIES {
                for split in [true, false] {
                    let cfg = SearchConfig {
                        strategy,
                        split_common: split,
                        ..Default::default()
                    };
                    let r = flip_distance(&a, &b, &cfg).unwrap();
                    assert_eq!(r.distance, expected);
                    assert_eq!(r.path.start(), &a);
                    assert_eq!(r.path.end(), b);
                }
            }
        }
    }

    #[test]
    fn lexicographic_witness_agrees_between_bfs_and_ida() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..30 {
            let a = PolygonTriangulation::random(8, &mut rng).unwrap();
            let b = PolygonTriangulation::random(8, &mut rng).unwrap();
            let x = flip_distance(&a, &b, &SearchConfig::with_strategy(Strategy::Bfs).unsplit()).unwrap();
            let y = flip_distance(&a, &b, &SearchConfig::with_strategy(Strategy::IterativeDeepening).unsplit()).unwrap();
            assert_eq!(x.path, y.path);
        }
    }

    #[test]
    fn parallel_expansion_matches_sequential() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let a = PolygonTriangulation::random(11, &mut rng).unwrap();
            let b = PolygonTriangulation::random(11, &mut rng).unwrap();
            for strategy in [Strategy::Bfs, Strategy::Bidirectional] {
                let seq = flip_distance(&a, &b, &SearchConfig::with_strategy(strategy)).unwrap();
                let par = flip_distance(&a, &b, &SearchConfig { threads: 4, ..SearchConfig::with_strategy(strategy) }).unwrap();
                assert_eq!(seq.distance, par.distance);
                assert_eq!(seq.path, par.path);
            }
        }
    }

    #[test]
    fn bounded_search() {
        let a = t_plus(2).unwrap();
        let b = t_minus(2).unwrap();
        for strategy in STRATEGIES {
            let cfg = SearchConfig::with_strategy(strategy);
            assert!(flip_distance_within(&a, &b, 6, &cfg).unwrap().is_none());
            assert_eq!(flip_distance_within(&a, &b, 7, &cfg).unwrap().unwrap().distance, 7);
        }
    }

    #[test]
    fn budget_exhaustion_reports_bounds() {
        let cfg = SearchConfig {
            max_nodes: 10,
            ..Default::default()
        };
        match flip_distance(&t_plus(4).unwrap(), &t_minus(4).unwrap(), &cfg) {
            Err(SearchError::BudgetExceeded {
                lower_bound, upper_bound, ..
            }) => {
                assert_eq!(lower_bound, 9);
                assert!(upper_bound >= 13);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn fan_paths() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let n = rng.gen_range(4..20);
            let t = PolygonTriangulation::random(n, &mut rng).unwrap();
            let v = rng.gen_range(0..n);
            let p = path_to_fan(&t, v);
            assert_eq!(p.len(), n - 3 - t.degree(v));
            assert_eq!(p.end(), PolygonTriangulation::fan(n, v).unwrap());
        }
    }

    #[test]
    fn extra_diagonals_of_family_path() {
        let l = FamilyLabeling::new(3).unwrap();
        let extras = extra_diagonals(&explicit_path(3).unwrap());
        let expected: BTreeSet<_> = [d(l.a(), l.b()), d(l.a(), l.v(1)), d(l.a(), l.v(2))].into_iter().collect();
        assert_eq!(extras, expected);
        let t = t_plus(3).unwrap();
        assert!(extra_diagonals(&FlipPath::empty(t.clone())).is_empty());
        let one = FlipPath::from_removals(t.clone(), [t.diagonals()[0]]).unwrap();
        assert!(extra_diagonals(&one).is_empty());
        for n in 2..=20 {
            assert_eq!(extra_diagonals(&explicit_path(n).unwrap()).len(), n);
        }
    }

    #[test]
    fn flip_count_identity() {
        for n in 2..=20 {
            assert_eq!(check_flip_count_identity(&explicit_path(n).unwrap()), Ok(true));
        }
        let sq = PolygonTriangulation::new(4, &[d(0, 2)]).unwrap();
        assert_eq!(check_flip_count_identity(&FlipPath::from_removals(sq.clone(), [d(0, 2)]).unwrap()), Ok(true));
        // There and back again: endpoints coincide.
        let back = FlipPath::from_removals(sq.clone(), [d(0, 2), d(1, 3)]).unwrap();
        assert_eq!(check_flip_count_identity(&back), Err(IdentityPrecondition::CommonDiagonal(d(0, 2))));
        // A detour that re-inserts a start diagonal.
        let t = PolygonTriangulation::fan(6, 0).unwrap();
        let target = PolygonTriangulation::fan(6, 1).unwrap();
        let mut removals = vec![d(0, 2)];
        let mid = t.flip(d(0, 2)).unwrap();
        removals.push(mid.1);
        let p = FlipPath::from_removals(t.clone(), removals).unwrap();
        let rest = flip_distance(&p.end(), &target, &SearchConfig::default()).unwrap();
        let full = p.concat(&rest.path).unwrap();
        assert_eq!(check_flip_count_identity(&full), Err(IdentityPrecondition::Reinserted(d(0, 2))));
    }

    #[test]
    fn spanned_triangles_on_family_path() {
        for n in 2..=6 {
            let p = explicit_path(n).unwrap();
            assert_eq!(check_spanned_triangles(&p), Ok(()));
            let l = FamilyLabeling::new(n).unwrap();
            assert!(p.states().iter().any(|t| t.triangles().contains(&{
                let mut tri = [l.a(), l.b(), l.d()];
                tri.sort();
                tri
            })));
        }
    }

    #[test]
    fn spanned_triangles_need_shortest_paths() {
        let start = PolygonTriangulation::new(6, &[d(0, 2), d(0, 3), d(0, 4)]).unwrap();
        let p = FlipPath::from_removals(start, [d(0, 2), d(0, 3), d(0, 4), d(1, 3)]).unwrap();
        assert_eq!(p.end().diagonals(), vec![d(1, 4), d(1, 5), d(2, 4)]);
        assert_eq!(check_spanned_triangles(&p), Err([0, 2, 4]));
        let shortest = flip_distance(p.start(), &p.end(), &SearchConfig::default()).unwrap();
        assert!(shortest.distance < p.len());
    }

    #[test]
    fn diameter_report_skips_small_n() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = diameter_sanity(12, 2, &mut rng, &SearchConfig::default()).unwrap();
        assert_eq!(r.bound, None);
        assert!(r.within_bound().is_none());
        assert!(r.note.is_some());
    }

    #[test]
    fn strategy_names_parse() {
        for s in STRATEGIES {
            assert_eq!(s.to_string().parse::<Strategy>(), Ok(s));
        }
        assert!("dijkstra".parse::<Strategy>().is_err());
    }
}
