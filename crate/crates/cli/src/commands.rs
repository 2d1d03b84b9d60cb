//! Subcommands. Each writes its result to `out` and returns a [`CliError`]
//! whose kind selects the exit code.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use flipgap::family::{explicit_path, t_minus, t_plus, FamilyLabeling};
use flipgap::flipdist::{flip_distance, lower_bound, SearchConfig, SearchError, Strategy};
use flipgap::lpbound::{l1_min, verify_optimality, LpConfig};
use flipgap::polygon::PolygonTriangulation;
use flipgap::sphere::{
    cone_decomposition, glue, hamiltonian_cycles, pentagonal_double_cap, recut, recut_min_flip, scan_cycles,
    CycleInSphere, RecutConfig,
};
use flipgap::tetdecomp::{
    counting_lower_bound, min_tet, search_two_cone, two_cone_construction, validate_ball, MinTetConfig,
    TetDecomposition,
};
use thiserror::Error;

use crate::format::{
    emit_chain, emit_path, emit_sphere, emit_tets, emit_triangulation, parse_path, parse_sphere, parse_tets,
    parse_triangulation, ParseError, SphereFile,
};
use crate::render::{render_path, render_polygon, render_sphere};
use crate::report::{verify_family, Budgets};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Input(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "flipgap", version, about = "Flip distances and minimal tetrahedral decompositions of glued spheres")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct SearchArgs {
    /// bfs, bidirectional or iterative-deepening.
    #[arg(long, default_value = "bidirectional")]
    pub strategy: Strategy,
    /// Search without cutting along common diagonals.
    #[arg(long)]
    pub no_split: bool,
    #[arg(long, default_value_t = 20_000_000)]
    pub max_nodes: usize,
    /// Seconds.
    #[arg(long)]
    pub time_limit: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
}

impl SearchArgs {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            strategy: self.strategy,
            split_common: !self.no_split,
            max_nodes: self.max_nodes,
            time_limit: self.time_limit.map(Duration::from_secs_f64),
            threads: self.threads.max(1),
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FamilyItem {
    Plus,
    Minus,
    Path,
    Sphere,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RenderKind {
    Polygon,
    Path,
    Sphere,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact flip distance between two triangulations.
    FlipDistance {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        emit_path: Option<PathBuf>,
    },
    /// Glue two triangulations into a sphere.
    Glue {
        #[arg(long)]
        plus: PathBuf,
        #[arg(long)]
        minus: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Cut a sphere along a Hamiltonian cycle; without `--cycle`, search for
    /// the cycle whose two halves are fewest flips apart.
    Recut {
        #[arg(long)]
        sphere: PathBuf,
        /// Space-separated vertex list.
        #[arg(long)]
        cycle: Option<String>,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, default_value_t = 50_000_000)]
        cycle_nodes: usize,
        #[arg(long)]
        max_cycles: Option<usize>,
        /// Stop once a recut reaches this distance.
        #[arg(long)]
        stop_at: Option<usize>,
        #[arg(long)]
        emit_first: Option<PathBuf>,
        #[arg(long)]
        emit_second: Option<PathBuf>,
        #[arg(long)]
        emit_path: Option<PathBuf>,
    },
    /// Smallest tetrahedral decomposition extending a sphere.
    MinTet {
        #[arg(long)]
        sphere: PathBuf,
        /// Only look for decompositions with at most this many tetrahedra.
        #[arg(long)]
        budget_tets: Option<usize>,
        #[arg(long, default_value_t = 50_000_000)]
        budget_nodes: u64,
        #[arg(long)]
        time_limit: Option<f64>,
        /// Use the face-counting lower bound to stop early.
        #[arg(long)]
        counting_bound: bool,
        /// Use the chain-norm lower bound to stop early.
        #[arg(long)]
        lp_bound: bool,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Exact L1-norm lower bound.
    LpBound {
        #[arg(long)]
        sphere: PathBuf,
        #[arg(long)]
        emit_chain: Option<PathBuf>,
    },
    /// Cone decomposition at a vertex, or the two-cone construction across
    /// the file's seam when `--other-vertex` or `--search-pairs` is given.
    Cone {
        #[arg(long)]
        sphere: PathBuf,
        #[arg(long)]
        vertex: Option<usize>,
        #[arg(long)]
        other_vertex: Option<usize>,
        /// Try all pairs of degree-6 apexes across the seam.
        #[arg(long)]
        search_pairs: bool,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Short cycles separating high-degree vertices.
    BadCycles {
        #[arg(long)]
        sphere: PathBuf,
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long, default_value_t = 10_000_000)]
        max_cycles: usize,
        /// List every cycle scanned, not only bad ones.
        #[arg(long)]
        all: bool,
    },
    /// Check that a decomposition is a ball bounded by the sphere.
    Validate {
        #[arg(long)]
        sphere: PathBuf,
        #[arg(long)]
        tets: PathBuf,
    },
    /// SVG picture of a triangulation, flip path or sphere.
    Render {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        kind: RenderKind,
        /// Starting triangulation for path files without one.
        #[arg(long)]
        from: Option<PathBuf>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Emit the extremal family for a given n.
    Family {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "plus")]
        which: FamilyItem,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Two pentagonal caps glued along a 5-cycle seam (degrees 5 and 6 only).
    DoubleCap {
        #[arg(long, default_value_t = 2)]
        layers: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Recompute the family's closed-form values and report each check.
    VerifyFamily {
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 5_000_000)]
        flip_nodes: usize,
        #[arg(long, default_value_t = 5_000_000)]
        tet_nodes: u64,
        #[arg(long, default_value_t = 120.0)]
        time_limit: f64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn parsed<T>(path: &Path, r: Result<T, ParseError>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_triangulation(path: &Path) -> Result<PolygonTriangulation, CliError> {
    parsed(path, parse_triangulation(&read(path)?))
}

fn load_sphere(path: &Path) -> Result<SphereFile, CliError> {
    parsed(path, parse_sphere(&read(path)?))
}

/// Labels from a `# labels: ...` comment line.
fn labels_in(text: &str) -> Option<Vec<String>> {
    text.lines()
        .find_map(|l| l.trim().strip_prefix("# labels:"))
        .map(|rest| rest.split_whitespace().map(String::from).collect())
}

fn write_or_print(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::FlipDistance {
            from,
            to,
            search,
            emit_path: emit,
        } => {
            let (a, b) = (load_triangulation(&from)?, load_triangulation(&to)?);
            if a.n() != b.n() {
                return Err(CliError::Input(format!("polygon sizes differ: {} vs {}", a.n(), b.n())));
            }
            match flip_distance(&a, &b, &search.config()) {
                Ok(r) => {
                    writeln!(out, "distance {}", r.distance)?;
                    writeln!(out, "lower-bound {}", lower_bound(&a, &b))?;
                    writeln!(out, "common-diagonals {}", a.common_diagonals(&b).len())?;
                    writeln!(out, "nodes {}", r.stats.nodes_expanded)?;
                    if let Some(p) = emit {
                        write_file(&p, &emit_path(&r.path))?;
                    }
                    Ok(())
                }
                Err(e @ SearchError::BudgetExceeded { .. }) => Err(CliError::Budget(e.to_string())),
                Err(e) => Err(CliError::Input(e.to_string())),
            }
        }
        Command::Glue { plus, minus, out: o } => {
            let (a, b) = (load_triangulation(&plus)?, load_triangulation(&minus)?);
            let tau = glue(&a, &b).map_err(|e| CliError::Input(e.to_string()))?;
            let seam = CycleInSphere::new(&tau, (0..a.n()).collect()).expect("polygon boundary is a cycle");
            let mut text = format!(
                "# V {} E {} F {}\n",
                tau.vertex_count(),
                tau.edge_count(),
                tau.face_count()
            );
            text.push_str(&emit_sphere(&tau, Some(&seam)));
            write_or_print(out, o.as_deref(), &text)
        }
        Command::Recut {
            sphere,
            cycle,
            search,
            cycle_nodes,
            max_cycles,
            stop_at,
            emit_first,
            emit_second,
            emit_path: emit,
        } => {
            let tau = load_sphere(&sphere)?.sphere;
            let (cut, distance, path, complete) = match cycle {
                Some(c) => {
                    let vs = c
                        .split_whitespace()
                        .map(|w| w.parse::<usize>().map_err(|_| CliError::Input(format!("bad vertex `{w}` in --cycle"))))
                        .collect::<Result<Vec<_>, _>>()?;
                    let cyc = CycleInSphere::new(&tau, vs).map_err(|e| CliError::Input(e.to_string()))?;
                    let cut = recut(&tau, &cyc).map_err(|e| CliError::Input(e.to_string()))?;
                    let r = flip_distance(&cut.first, &cut.second, &search.config()).map_err(|e| match e {
                        SearchError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
                        e => CliError::Input(e.to_string()),
                    })?;
                    (cut, r.distance, r.path, true)
                }
                None => {
                    let cfg = RecutConfig {
                        max_cycle_nodes: cycle_nodes,
                        max_cycles: max_cycles.unwrap_or(usize::MAX),
                        search: search.config(),
                        stop_at,
                    };
                    let o = recut_min_flip(&tau, &cfg);
                    writeln!(out, "cycles-examined {}", o.cycles_examined)?;
                    let Some(best) = o.best else {
                        return Err(if o.complete {
                            CliError::Input("sphere has no Hamiltonian cycle".into())
                        } else {
                            CliError::Budget("no recut settled within budget".into())
                        });
                    };
                    let vs: Vec<String> = best.cycle.vertices().iter().map(ToString::to_string).collect();
                    writeln!(out, "cycle {}", vs.join(" "))?;
                    (best.recut, best.distance, best.path, o.complete)
                }
            };
            writeln!(out, "distance {distance}")?;
            writeln!(out, "exhaustive {complete}")?;
            let labels: Vec<String> = cut.labeling.iter().map(ToString::to_string).collect();
            let comment = format!("labels: {}", labels.join(" "));
            if let Some(p) = emit_first {
                write_file(&p, &emit_triangulation(&cut.first, Some(&comment)))?;
            }
            if let Some(p) = emit_second {
                write_file(&p, &emit_triangulation(&cut.second, Some(&comment)))?;
            }
            if let Some(p) = emit {
                write_file(&p, &emit_path(&path))?;
            }
            Ok(())
        }
        Command::MinTet {
            sphere,
            budget_tets,
            budget_nodes,
            time_limit,
            counting_bound,
            lp_bound,
            emit,
        } => {
            let tau = load_sphere(&sphere)?.sphere;
            let external = if lp_bound {
                let sol = l1_min(&tau, &LpConfig::default()).map_err(|e| CliError::Budget(e.to_string()))?;
                writeln!(out, "chain-norm {}", sol.objective)?;
                sol.integer_bound()
            } else {
                0
            };
            let cfg = MinTetConfig {
                max_nodes: budget_nodes,
                time_limit: time_limit.map(Duration::from_secs_f64),
                max_tets: budget_tets,
                counting_bound,
                external_lower_bound: external,
            };
            if counting_bound {
                writeln!(out, "counting-bound {}", counting_lower_bound(&tau).bound)?;
            }
            let r = min_tet(&tau, &cfg);
            writeln!(out, "best {}", r.best)?;
            writeln!(out, "lower-bound {}", r.lower_bound)?;
            writeln!(out, "optimal {}", r.optimal)?;
            writeln!(out, "nodes {}", r.nodes)?;
            writeln!(out, "collapsible {}", r.certificate.collapsible)?;
            if let Some(p) = emit {
                write_file(&p, &emit_tets(&r.witness))?;
            }
            if r.optimal {
                Ok(())
            } else {
                Err(CliError::Budget(format!(
                    "minimum is between {} and {}",
                    r.lower_bound, r.best
                )))
            }
        }
        Command::LpBound { sphere, emit_chain: emit } => {
            let tau = load_sphere(&sphere)?.sphere;
            let sol = l1_min(&tau, &LpConfig::default()).map_err(|e| CliError::Budget(e.to_string()))?;
            writeln!(out, "objective {}", sol.objective)?;
            writeln!(out, "integer-bound {}", sol.integer_bound())?;
            writeln!(out, "pivots {}", sol.pivots)?;
            let certified = verify_optimality(&tau, &sol);
            writeln!(out, "certified {certified}")?;
            if let Some(p) = emit {
                write_file(&p, &emit_chain(&sol.chain))?;
            }
            if certified {
                Ok(())
            } else {
                Err(CliError::Verification("dual certificate does not check".into()))
            }
        }
        Command::Cone {
            sphere,
            vertex,
            other_vertex,
            search_pairs,
            emit,
        } => {
            let file = load_sphere(&sphere)?;
            let tau = &file.sphere;
            let d = if other_vertex.is_some() || search_pairs {
                let seam = file
                    .seam
                    .as_ref()
                    .ok_or_else(|| CliError::Input("two-cone construction needs a `seam` line".into()))?;
                let r = match (vertex, other_vertex) {
                    (Some(v1), Some(v2)) => {
                        two_cone_construction(tau, seam, v1, v2).map_err(|e| CliError::Input(e.to_string()))?
                    }
                    _ => {
                        let (v1, v2, r) = search_two_cone(tau, seam, Some(6))
                            .ok_or_else(|| CliError::Input("no pair of degree-6 apexes works".into()))?;
                        writeln!(out, "apexes {v1} {v2}")?;
                        r
                    }
                };
                writeln!(out, "cone-sizes {} {}", r.cone_sizes[0], r.cone_sizes[1])?;
                writeln!(out, "fill {}", r.fill)?;
                r.decomposition
            } else {
                let v = vertex.ok_or_else(|| CliError::Input("--vertex is required".into()))?;
                cone_decomposition(tau, v).map_err(|e| CliError::Input(e.to_string()))?
            };
            let cert = validate_ball(tau, &d).map_err(|e| CliError::Verification(e.to_string()))?;
            writeln!(out, "tets {}", d.len())?;
            writeln!(out, "euler {}", cert.euler)?;
            if let Some(p) = emit {
                write_file(&p, &emit_tets(&d))?;
            }
            Ok(())
        }
        Command::BadCycles {
            sphere,
            max_len,
            max_cycles,
            all,
        } => {
            let tau = load_sphere(&sphere)?.sphere;
            let hist: Vec<String> = tau.degree_histogram().iter().map(|(d, c)| format!("{d}:{c}")).collect();
            writeln!(out, "degrees {}", hist.join(" "))?;
            let scan = scan_cycles(&tau, max_len, max_cycles);
            writeln!(out, "cycles-scanned {}", scan.cycles_examined)?;
            let mut bad = 0;
            for r in &scan.reports {
                if r.is_bad() {
                    bad += 1;
                }
                if r.is_bad() || all {
                    let vs: Vec<String> = r.cycle.vertices().iter().map(ToString::to_string).collect();
                    writeln!(
                        out,
                        "{} length {} cycle {} high-degree-sides {} {}",
                        if r.is_bad() { "bad" } else { "ok" },
                        r.length(),
                        vs.join(" "),
                        r.high_degree_sides[0].len(),
                        r.high_degree_sides[1].len()
                    )?;
                }
            }
            writeln!(out, "bad {bad}")?;
            if scan.complete {
                Ok(())
            } else {
                Err(CliError::Budget(format!("stopped after {} cycles", scan.cycles_examined)))
            }
        }
        Command::Validate { sphere, tets } => {
            let tau = load_sphere(&sphere)?.sphere;
            let d: TetDecomposition = parsed(&tets, parse_tets(&read(&tets)?))?;
            let c = validate_ball(&tau, &d).map_err(|e| CliError::Verification(e.to_string()))?;
            writeln!(out, "ball true")?;
            writeln!(out, "vertices {} edges {} faces {} tets {}", c.vertices, c.edges, c.faces, c.tets)?;
            writeln!(out, "euler {}", c.euler)?;
            writeln!(out, "interior-edges {}", c.interior_edges)?;
            writeln!(out, "collapsible {}", c.collapsible)?;
            Ok(())
        }
        Command::Render {
            input,
            kind,
            from,
            out: o,
        } => {
            let text = read(&input)?;
            let labels = labels_in(&text);
            let svg = match kind {
                RenderKind::Polygon => render_polygon(&parsed(&input, parse_triangulation(&text))?, labels.as_deref()),
                RenderKind::Path => {
                    let file = parsed(&input, parse_path(&text))?;
                    let start = from.as_deref().map(load_triangulation).transpose()?;
                    let p = file.replay(start.as_ref()).map_err(CliError::Input)?;
                    render_path(&p, labels.as_deref())
                }
                RenderKind::Sphere => {
                    let file = parsed(&input, parse_sphere(&text))?;
                    let cycle = match file.seam {
                        Some(c) if c.len() == file.sphere.vertex_count() => c,
                        _ => hamiltonian_cycles(&file.sphere, 1)
                            .into_iter()
                            .next()
                            .ok_or_else(|| CliError::Input("sphere has no Hamiltonian cycle to draw".into()))?,
                    };
                    let cut = recut(&file.sphere, &cycle).map_err(|e| CliError::Input(e.to_string()))?;
                    let names: Vec<String> = cut
                        .labeling
                        .iter()
                        .map(|&x| labels.as_ref().and_then(|l| l.get(x).cloned()).unwrap_or_else(|| x.to_string()))
                        .collect();
                    render_sphere(&cut.first, &cut.second, Some(&names))
                }
            };
            write_or_print(out, o.as_deref(), &svg)
        }
        Command::Family { n, which, out: o } => {
            let l = FamilyLabeling::new(n).map_err(|e| CliError::Input(e.to_string()))?;
            let comment = format!("labels: {}", l.labels().join(" "));
            let text = match which {
                FamilyItem::Plus => emit_triangulation(&t_plus(n).unwrap(), Some(&comment)),
                FamilyItem::Minus => emit_triangulation(&t_minus(n).unwrap(), Some(&comment)),
                FamilyItem::Path => format!("# {comment}\n{}", emit_path(&explicit_path(n).unwrap())),
                FamilyItem::Sphere => {
                    let tau = glue(&t_plus(n).unwrap(), &t_minus(n).unwrap()).unwrap();
                    let seam = CycleInSphere::new(&tau, (0..tau.vertex_count()).collect()).unwrap();
                    format!("# {comment}\n{}", emit_sphere(&tau, Some(&seam)))
                }
            };
            write_or_print(out, o.as_deref(), &text)
        }
        Command::DoubleCap { layers, out: o } => {
            let (tau, seam) = pentagonal_double_cap(layers).map_err(|e| CliError::Input(e.to_string()))?;
            write_or_print(out, o.as_deref(), &emit_sphere(&tau, Some(&seam)))
        }
        Command::VerifyFamily {
            n_max,
            json,
            flip_nodes,
            tet_nodes,
            time_limit,
            threads,
        } => {
            if n_max < 2 {
                return Err(CliError::Input("--n-max must be at least 2".into()));
            }
            let budgets = Budgets {
                flip_nodes,
                tet_nodes,
                time_limit: Some(Duration::from_secs_f64(time_limit)),
                threads,
                ..Budgets::default()
            };
            let rep = verify_family(n_max, &budgets);
            let text = if json { rep.to_json() + "\n" } else { rep.to_text() };
            out.write_all(text.as_bytes())?;
            if rep.failures() > 0 {
                Err(CliError::Verification(format!("{} checks failed", rep.failures())))
            } else if rep.bounded() > 0 {
                Err(CliError::Budget(format!("{} checks unsettled within budget", rep.bounded())))
            } else {
                Ok(())
            }
        }
    }
}

