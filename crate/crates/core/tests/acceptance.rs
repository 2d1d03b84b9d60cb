//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! and exits nonzero if any fails.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::process::ExitCode;
use std::time::Instant;

use flipgap::family::{explicit_path, t_minus, t_plus};
use flipgap::flipdist::{
    check_flip_count_identity, check_spanned_triangles, flip_distance, lower_bound, SearchConfig, Strategy,
};
use flipgap::lpbound::{l1_min, verify_chain, verify_optimality, LpConfig};
use flipgap::polygon::{FlipPath, PolygonTriangulation};
use flipgap::sphere::{
    bad_cycles, cone_decomposition, glue, pentagonal_double_cap, recut, recut_min_flip, RecutConfig,
    SphereTriangulation,
};
use flipgap::tetdecomp::{
    counting_lower_bound, is_bipyramid, min_tet, no_three_face_tet, search_two_cone, two_cone_count, validate_ball,
    MinTetConfig, TetDecomposition,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

// ---------------------------------------------------------------------------
// Oracles written independently of the library.

type Diags = BTreeSet<(usize, usize)>;

fn diags_of(t: &PolygonTriangulation) -> Diags {
    t.diagonals().iter().map(|d| (d.a().min(d.b()), d.a().max(d.b()))).collect()
}

fn cross(p: (usize, usize), q: (usize, usize)) -> bool {
    let (a, b) = p;
    let (c, d) = q;
    let inside = |x: usize| a < x && x < b;
    let ends_shared = a == c || a == d || b == c || b == d;
    !ends_shared && (inside(c) != inside(d))
}

fn is_edge(n: usize, ds: &Diags, x: usize, y: usize) -> bool {
    let (x, y) = (x.min(y), x.max(y));
    y - x == 1 || (x == 0 && y == n - 1) || ds.contains(&(x, y))
}

/// The diagonal replacing `(a, b)`: joins the apexes of the two triangles on
/// either side.
fn flip_oracle(n: usize, ds: &Diags, (a, b): (usize, usize)) -> (usize, usize) {
    let apex = |range: &mut dyn Iterator<Item = usize>| {
        range
            .filter(|&c| is_edge(n, ds, a, c) && is_edge(n, ds, b, c))
            .collect::<Vec<_>>()
    };
    let inner = apex(&mut (a + 1..b));
    let outer = apex(&mut (0..a).chain(b + 1..n));
    assert_eq!((inner.len(), outer.len()), (1, 1), "not a triangulation");
    (inner[0].min(outer[0]), inner[0].max(outer[0]))
}

/// Replays a path step by step with the crossing rule; returns the visited
/// diagonal sets.
fn replay_oracle(p: &FlipPath) -> Result<Vec<Diags>, String> {
    let mut cur = diags_of(p.start());
    let mut states = vec![cur.clone()];
    for (i, s) in p.steps().iter().enumerate() {
        let r = (s.removed.a().min(s.removed.b()), s.removed.a().max(s.removed.b()));
        let ins = (s.inserted.a().min(s.inserted.b()), s.inserted.a().max(s.inserted.b()));
        ensure!(cur.remove(&r), "step {i}: {r:?} not present");
        ensure!(cross(r, ins), "step {i}: inserted does not cross removed");
        ensure!(cur.iter().all(|&d| !cross(d, ins)), "step {i}: inserted crosses a kept diagonal");
        ensure!(cur.insert(ins), "step {i}: inserted already present");
        states.push(cur.clone());
    }
    Ok(states)
}

/// Plain breadth-first distance over diagonal sets.
fn bfs_oracle(n: usize, from: &Diags, to: &Diags) -> usize {
    let mut dist: HashMap<Diags, usize> = HashMap::from([(from.clone(), 0)]);
    let mut queue = VecDeque::from([from.clone()]);
    while let Some(s) = queue.pop_front() {
        let k = dist[&s];
        if &s == to {
            return k;
        }
        for &d in &s {
            let mut t = s.clone();
            let e = flip_oracle(n, &s, d);
            t.remove(&d);
            t.insert(e);
            if !dist.contains_key(&t) {
                dist.insert(t.clone(), k + 1);
                queue.push_back(t);
            }
        }
    }
    unreachable!("flip graph is connected")
}

/// Extra diagonals (in neither endpoint) along the visited states.
fn extra_count(states: &[Diags]) -> usize {
    let (first, last) = (&states[0], &states[states.len() - 1]);
    states
        .iter()
        .flatten()
        .filter(|d| !first.contains(d) && !last.contains(d))
        .collect::<BTreeSet<_>>()
        .len()
}

/// Triangles all of whose sides appear along the path but which no single
/// state contains.
fn unrealized_triangles(n: usize, states: &[Diags]) -> usize {
    let seen: Diags = states.iter().flatten().copied().collect();
    let present = |x: usize, y: usize| is_edge(n, &seen, x, y);
    let mut bad = 0;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if present(a, b) && present(b, c) && present(a, c)
                    && !states.iter().any(|s| is_edge(n, s, a, b) && is_edge(n, s, b, c) && is_edge(n, s, a, c))
                {
                    bad += 1;
                }
            }
        }
    }
    bad
}

/// Boundary (faces used an odd number of times) and Euler characteristic of
/// a set of tets.
fn complex_oracle(tets: &[[usize; 4]]) -> (BTreeSet<[usize; 3]>, i64) {
    let mut faces: BTreeMap<[usize; 3], usize> = BTreeMap::new();
    let mut edges = BTreeSet::new();
    let mut verts = BTreeSet::new();
    for t in tets {
        let mut t = *t;
        t.sort_unstable();
        for skip in 0..4 {
            let f: Vec<usize> = (0..4).filter(|&i| i != skip).map(|i| t[i]).collect();
            *faces.entry([f[0], f[1], f[2]]).or_default() += 1;
        }
        for i in 0..4 {
            verts.insert(t[i]);
            for j in i + 1..4 {
                edges.insert((t[i], t[j]));
            }
        }
    }
    let boundary = faces.iter().filter(|(_, &c)| c % 2 == 1).map(|(f, _)| *f).collect();
    let chi = verts.len() as i64 - edges.len() as i64 + faces.len() as i64 - tets.len() as i64;
    (boundary, chi)
}

fn sphere_faces(tau: &SphereTriangulation) -> BTreeSet<[usize; 3]> {
    tau.faces().iter().copied().collect()
}

/// Checks a decomposition against the sphere with the library validator and
/// the independent boundary/Euler oracle.
fn ball_ok(tau: &SphereTriangulation, d: &TetDecomposition) -> Result<(), String> {
    let cert = validate_ball(tau, d).map_err(|e| e.to_string())?;
    let (boundary, chi) = complex_oracle(d.tets());
    ensure!(cert.euler == 1 && chi == 1, "euler {} / oracle {chi}", cert.euler);
    ensure!(cert.boundary_match && boundary == sphere_faces(tau), "boundary differs from sphere");
    Ok(())
}

fn max_faces_in_four(tau: &SphereTriangulation) -> usize {
    let faces = sphere_faces(tau);
    let v = tau.vertex_count();
    let mut best = 0;
    for a in 0..v {
        for b in a + 1..v {
            for c in b + 1..v {
                for d in c + 1..v {
                    let q = [a, b, c, d];
                    let k = (0..4)
                        .filter(|&s| {
                            let f: Vec<usize> = (0..4).filter(|&i| i != s).map(|i| q[i]).collect();
                            faces.contains(&[f[0], f[1], f[2]])
                        })
                        .count();
                    best = best.max(k);
                }
            }
        }
    }
    best
}

fn bipyramid_oracle(tau: &SphereTriangulation) -> bool {
    let v = tau.vertex_count();
    (0..v).any(|p| {
        (p + 1..v).any(|q| {
            tau.faces()
                .iter()
                .all(|f| f.contains(&p) != f.contains(&q))
        })
    })
}

fn random_pair(n: usize, rng: &mut ChaCha8Rng, disjoint: bool) -> (PolygonTriangulation, PolygonTriangulation) {
    loop {
        let a = PolygonTriangulation::random(n, rng).unwrap();
        let b = PolygonTriangulation::random(n, rng).unwrap();
        if !disjoint || a.common_diagonals(&b).is_empty() {
            return (a, b);
        }
    }
}

/// A random sphere glued from two triangulations of the `n`-gon.
fn random_sphere(n: usize, rng: &mut ChaCha8Rng) -> SphereTriangulation {
    loop {
        let (a, b) = random_pair(n, rng, true);
        if let Ok(tau) = glue(&a, &b) {
            return tau;
        }
    }
}

fn rational(a: usize, b: usize) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn tau(n: usize) -> SphereTriangulation {
    glue(&t_plus(n).unwrap(), &t_minus(n).unwrap()).unwrap()
}

fn exhaustive() -> MinTetConfig {
    MinTetConfig {
        max_nodes: u64::MAX,
        counting_bound: false,
        ..MinTetConfig::default()
    }
}

// ---------------------------------------------------------------------------
// Criteria.

fn explicit_path_length() -> Outcome {
    let t = Instant::now();
    for n in 2..=50 {
        let p = explicit_path(n).unwrap();
        ensure!(p.len() == 3 * n + 1, "n={n}: {} flips", p.len());
        let states = replay_oracle(&p).map_err(|e| format!("n={n}: {e}"))?;
        ensure!(states[0] == diags_of(&t_plus(n).unwrap()), "n={n}: wrong start");
        ensure!(states[p.len()] == diags_of(&t_minus(n).unwrap()), "n={n}: wrong end");
    }
    let secs = t.elapsed().as_secs_f64();
    ensure!(secs < 1.0, "took {secs:.2}s");
    Ok(format!("n=2..50 replay with 3n+1 flips in {secs:.3}s"))
}

fn family_flip_distance() -> Outcome {
    let t = Instant::now();
    for n in 2..=4 {
        let (a, b) = (t_plus(n).unwrap(), t_minus(n).unwrap());
        for strategy in [Strategy::Bidirectional, Strategy::IterativeDeepening] {
            let r = flip_distance(&a, &b, &SearchConfig::with_strategy(strategy)).map_err(|e| e.to_string())?;
            ensure!(r.distance == 3 * n + 1, "n={n} {strategy}: {}", r.distance);
        }
        if n <= 3 {
            let d = bfs_oracle(a.n(), &diags_of(&a), &diags_of(&b));
            ensure!(d == 3 * n + 1, "n={n}: oracle {d}");
        }
    }
    let secs = t.elapsed().as_secs_f64();
    ensure!(secs < 60.0, "took {secs:.1}s");
    Ok(format!("distances 7, 10, 13 for n=2,3,4 in {secs:.2}s"))
}

fn family_min_tet() -> Outcome {
    let t = Instant::now();
    for n in 2..=3 {
        let s = tau(n);
        let r = min_tet(&s, &exhaustive());
        ensure!(r.optimal, "n={n}: search not exhausted");
        ensure!(r.best == 2 * n + 3, "n={n}: minimum {}", r.best);
        ball_ok(&s, &r.witness).map_err(|e| format!("n={n}: {e}"))?;
    }
    let s = tau(4);
    let r = min_tet(&s, &MinTetConfig { counting_bound: true, ..MinTetConfig::default() });
    ensure!(r.witness.len() == 11, "n=4 witness has {} tets", r.witness.len());
    ball_ok(&s, &r.witness).map_err(|e| format!("n=4: {e}"))?;
    let lb = counting_lower_bound(&s).bound;
    ensure!(lb == 11, "n=4 counting bound {lb}");
    let secs = t.elapsed().as_secs_f64();
    ensure!(secs < 600.0, "took {secs:.1}s");
    Ok(format!("minimum 7, 9 exhaustively; n=4 witness 11 = counting bound; {secs:.2}s"))
}

fn ratio_gap() -> Outcome {
    for (n, expected) in [(3, rational(10, 9)), (4, rational(13, 11))] {
        let flip = flip_distance(&t_plus(n).unwrap(), &t_minus(n).unwrap(), &SearchConfig::default())
            .map_err(|e| e.to_string())?
            .distance;
        let s = tau(n);
        let r = min_tet(&s, &MinTetConfig { counting_bound: true, ..MinTetConfig::default() });
        ensure!(r.optimal, "n={n}: minimum unsettled");
        let ratio = rational(flip, r.best);
        ensure!(ratio == expected, "n={n}: ratio {ratio}");
        ensure!(ratio > rational(1, 1), "n={n}: no gap");
    }
    let n = 48;
    let r = rational(3 * n + 1, 2 * n + 3);
    let gap = rational(3, 2) - &r;
    ensure!(gap > rational(0, 1) && gap < rational(4, 100), "n=48 gap {gap}");
    Ok(format!("10/9 at n=3, 13/11 at n=4, 3/2 - {r} = {gap}"))
}

/// 100 BFS shortest paths between random pairs without common diagonals.
fn bfs_sample() -> Vec<FlipPath> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    (0..100)
        .map(|_| {
            let (a, b) = random_pair(8, &mut rng, true);
            flip_distance(&a, &b, &SearchConfig::with_strategy(Strategy::Bfs).unsplit())
                .unwrap()
                .path
        })
        .collect()
}

fn flip_count_identity(sample: &[FlipPath]) -> Outcome {
    for n in 2..=20 {
        let p = explicit_path(n).unwrap();
        let states = replay_oracle(&p)?;
        let e = extra_count(&states);
        ensure!(p.len() == p.n() - 3 + e, "family n={n}: {} vs {}-3+{e}", p.len(), p.n());
        ensure!(check_flip_count_identity(&p) == Ok(true), "family n={n}: library disagrees");
    }
    for (i, p) in sample.iter().enumerate() {
        let states = replay_oracle(p)?;
        let e = extra_count(&states);
        ensure!(p.len() == p.n() - 3 + e, "sample {i}: {} vs 5+{e}", p.len());
        let oracle = bfs_oracle(8, &states[0], &states[p.len()]);
        ensure!(oracle == p.len(), "sample {i}: not shortest ({} vs {oracle})", p.len());
        ensure!(check_flip_count_identity(p) == Ok(true), "sample {i}: library disagrees");
    }
    Ok(format!("family n=2..20 and {} shortest paths at n=8", sample.len()))
}

fn splitting_preserves_distance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut with_common = 0;
    for i in 0..200 {
        let n = rng.gen_range(5..=10);
        let (a, b) = random_pair(n, &mut rng, false);
        if !a.common_diagonals(&b).is_empty() {
            with_common += 1;
        }
        let split = flip_distance(&a, &b, &SearchConfig::default()).map_err(|e| e.to_string())?.distance;
        let unsplit = flip_distance(&a, &b, &SearchConfig::with_strategy(Strategy::Bfs).unsplit())
            .map_err(|e| e.to_string())?
            .distance;
        let oracle = bfs_oracle(n, &diags_of(&a), &diags_of(&b));
        ensure!(split == oracle && unsplit == oracle, "pair {i} (n={n}): split {split}, unsplit {unsplit}, oracle {oracle}");
    }
    ensure!(with_common > 0, "sample has no pair with a common diagonal");
    Ok(format!("200 pairs at n=5..10 ({with_common} with common diagonals)"))
}

fn spanned_triangles(sample: &[FlipPath]) -> Outcome {
    for (i, p) in sample.iter().enumerate() {
        let states = replay_oracle(p)?;
        let bad = unrealized_triangles(p.n(), &states);
        ensure!(bad == 0, "sample {i}: {bad} unrealized triangles");
        ensure!(check_spanned_triangles(p).is_ok(), "sample {i}: library reports a counterexample");
    }
    Ok(format!("{} paths, zero counterexamples", sample.len()))
}

fn path_decompositions() -> Outcome {
    for n in 2..=6 {
        let (a, b) = (t_plus(n).unwrap(), t_minus(n).unwrap());
        let p = explicit_path(n).unwrap();
        let s = tau(n);
        let d = TetDecomposition::from_flip_path(&a, &b, &p).map_err(|e| format!("n={n}: {e}"))?;
        ensure!(d.len() == p.len(), "n={n}: {} tets for {} flips", d.len(), p.len());
        ball_ok(&s, &d).map_err(|e| format!("n={n}: {e}"))?;
    }
    Ok("n=2..6 give 3n+1 tets, balls bounded by the sphere".into())
}

fn sphere_structure() -> Outcome {
    for n in 2..=8 {
        let s = tau(n);
        ensure!(s.face_count() == 4 * n + 4, "n={n}: {} faces", s.face_count());
        ensure!(s.edge_count() == 6 * n + 6, "n={n}: {} edges", s.edge_count());
        let three = max_faces_in_four(&s) >= 3;
        ensure!(no_three_face_tet(&s) && !three, "n={n}: a tet spans three faces");
        ensure!(!is_bipyramid(&s) && !bipyramid_oracle(&s), "n={n}: bipyramid");
    }
    Ok("n=2..8: 4n+4 faces, 6n+6 edges, no three-face tet, not a bipyramid".into())
}

fn sandwich() -> Outcome {
    let lp = |s: &SphereTriangulation| -> Result<BigRational, String> {
        let sol = l1_min(s, &LpConfig::default()).map_err(|e| e.to_string())?;
        ensure!(verify_chain(s, &sol.chain), "chain boundary is not the sphere");
        ensure!(sol.chain.norm() == sol.objective, "chain norm differs from objective");
        ensure!(verify_optimality(s, &sol), "dual certificate fails");
        Ok(sol.objective)
    };
    let tet = |s: &SphereTriangulation| -> Result<usize, String> {
        let r = min_tet(s, &exhaustive());
        ensure!(r.optimal, "minimum unsettled");
        ball_ok(s, &r.witness)?;
        Ok(r.best)
    };
    for n in 2..=3 {
        let s = tau(n);
        let (l, m) = (lp(&s)?, tet(&s)?);
        let cfg = RecutConfig::default();
        let o = recut_min_flip(&s, &cfg);
        ensure!(o.complete, "n={n}: recut search incomplete");
        let f = o.best.ok_or("no recut")?.distance;
        ensure!(l <= rational(m, 1) && m <= f, "n={n}: {l} <= {m} <= {f} fails");
    }
    let mut named = vec![SphereTriangulation::tetrahedron(), SphereTriangulation::octahedron()];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0010);
    for _ in 0..20 {
        let n = rng.gen_range(8..=10);
        named.push(random_sphere(n, &mut rng));
    }
    for (i, s) in named.iter().enumerate() {
        let (l, m) = (lp(s)?, tet(s)?);
        ensure!(l <= rational(m, 1), "instance {i}: {l} > {m}");
    }
    Ok("n=2,3 chain <= min <= recut; tetrahedron, octahedron, 20 random spheres".into())
}

fn cone_count() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0011);
    let mut done = 0;
    let mut sizes = BTreeSet::new();
    while done < 10 {
        let n = rng.gen_range(9..=14);
        let s = random_sphere(n, &mut rng);
        let Some(v) = (0..n).find(|&v| s.degree(v) == 6) else { continue };
        let d = cone_decomposition(&s, v).map_err(|e| e.to_string())?;
        let expected = s.faces().iter().filter(|f| !f.contains(&v)).count();
        ensure!(expected == 2 * n - 10, "n={n}: oracle count {expected}");
        ensure!(d.len() == 2 * n - 10, "n={n}: cone has {} tets", d.len());
        ball_ok(&s, &d).map_err(|e| format!("n={n}: {e}"))?;
        sizes.insert(n);
        done += 1;
    }
    Ok(format!("10 instances, polygon sizes {sizes:?}"))
}

fn recut_upper_bound() -> Outcome {
    for n in 2..=3 {
        let s = tau(n);
        let cfg = RecutConfig { stop_at: Some(2 * n + 3), ..RecutConfig::default() };
        let best = recut_min_flip(&s, &cfg).best.ok_or(format!("n={n}: no recut"))?;
        ensure!(best.distance <= 2 * n + 3, "n={n}: best recut {}", best.distance);
        let cut = recut(&s, &best.cycle).map_err(|e| e.to_string())?;
        ensure!(cut.reglue().map_err(|e| e.to_string())?.is_isomorphic(&s), "n={n}: reglue differs");
        let states = replay_oracle(&best.path)?;
        ensure!(states[0] == diags_of(&cut.first), "n={n}: path start");
        ensure!(states[best.path.len()] == diags_of(&cut.second), "n={n}: path end");
        ensure!(best.path.len() == best.distance, "n={n}: path length");
    }
    Ok("recuts reach 7 and 9".into())
}

fn diameter() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0013);
    let mut max = 0;
    for i in 0..50 {
        let (a, b) = random_pair(13, &mut rng, false);
        let r = flip_distance(&a, &b, &SearchConfig::default()).map_err(|e| e.to_string())?;
        ensure!(r.distance <= 16, "pair {i}: distance {}", r.distance);
        ensure!(r.distance >= lower_bound(&a, &b), "pair {i}: below lower bound");
        ensure!(replay_oracle(&r.path)?.last() == Some(&diags_of(&b)), "pair {i}: path misses target");
        max = max.max(r.distance);
    }
    Ok(format!("50 pairs at n=13, largest distance {max} <= 16"))
}

fn forty_three() -> Outcome {
    let (s, seam) = pentagonal_double_cap(2).map_err(|e| e.to_string())?;
    ensure!(s.vertex_count() == 27, "{} vertices", s.vertex_count());
    ensure!((0..27).all(|v| matches!(s.degree(v), 5 | 6)), "degrees outside {{5, 6}}");
    ensure!(seam.len() == 5, "seam length {}", seam.len());
    let mut seam_cycle = seam.vertices().to_vec();
    seam_cycle.sort_unstable();
    let bad = bad_cycles(&s);
    ensure!(
        bad.iter().any(|c| {
            let mut v = c.cycle.vertices().to_vec();
            v.sort_unstable();
            v == seam_cycle
        }),
        "seam is not a bad cycle"
    );

    let (v1, v2, r) = search_two_cone(&s, &seam, Some(6)).ok_or("no qualifying apex pair")?;
    ensure!(r.decomposition.len() == 43, "construction has {} tets", r.decomposition.len());
    ensure!(r.cone_sizes == [19, 19] && r.fill == 5, "parts {:?} + {}", r.cone_sizes, r.fill);
    ball_ok(&s, &r.decomposition)?;
    let (side1, side2) = seam.sides(&s);
    let count = two_cone_count([side1.len(), side2.len()], [s.degree(v1), s.degree(v2)], seam.len());
    ensure!(count == 43, "counting function gives {count}");

    for v in (0..27).filter(|&v| s.degree(v) == 6) {
        let cone = cone_decomposition(&s, v).map_err(|e| e.to_string())?;
        ensure!(cone.len() == 44, "cone at {v} has {} tets", cone.len());
        ensure!(r.decomposition.len() < cone.len(), "no improvement at {v}");
    }
    let fill = min_tet(&SphereTriangulation::bipyramid(5).unwrap(), &exhaustive());
    ensure!(fill.optimal && fill.best == 5, "pentagonal bipyramid needs {}", fill.best);
    Ok(format!("apexes {v1}, {v2}: 19 + 19 + 5 = 43 < 44"))
}

fn main() -> ExitCode {
    let sample = bfs_sample();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("explicit path has 3n+1 flips", Box::new(explicit_path_length)),
        ("family flip distance is 3n+1", Box::new(family_flip_distance)),
        ("family minimum decomposition is 2n+3", Box::new(family_min_tet)),
        ("flip/tet ratio exceeds 1", Box::new(ratio_gap)),
        ("flip count equals n-3+extras", Box::new(|| flip_count_identity(&sample))),
        ("common-diagonal splitting is exact", Box::new(splitting_preserves_distance)),
        ("spanned triangles are realized", Box::new(|| spanned_triangles(&sample))),
        ("flip paths give balls", Box::new(path_decompositions)),
        ("family sphere structure", Box::new(sphere_structure)),
        ("chain norm <= min tet <= recut", Box::new(sandwich)),
        ("degree-6 cone has 2n-10 tets", Box::new(cone_count)),
        ("recut reaches 2n+3", Box::new(recut_upper_bound)),
        ("random distances within diameter", Box::new(diameter)),
        ("two-cone construction beats cones", Box::new(forty_three)),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = f();
        let ms = t.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{ms} ms]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{ms} ms]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
