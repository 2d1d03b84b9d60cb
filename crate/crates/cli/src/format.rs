//! Line-oriented text formats. Blank lines and `#` comments are ignored.
//!
//! ```text
//! n 6            path n 6               sphere V 4      tets V 4          chain V 4
//! d 0 2          d 0 2                  t 1 2 3         T 0 1 2 3         x 0 1 2 3 1/1
//! d 0 3          flip 0 2 -> 1 3        t 0 3 2
//! ```
//!
//! A path file may list the starting triangulation with `d` lines before its
//! flips; a sphere file may name a seam cycle with `seam a b c ...`.

use std::fmt::Write as _;

use flipgap::lpbound::Chain3;
use flipgap::polygon::{Diagonal, Flip, FlipPath, PolygonTriangulation};
use flipgap::sphere::{CycleInSphere, SphereTriangulation};
use flipgap::tetdecomp::TetDecomposition;
use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

/// Non-empty lines with comments stripped, numbered from 1.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let words: Vec<&str> = l.split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

fn int(line: usize, w: &str) -> Result<usize, ParseError> {
    w.parse().or_else(|_| err(line, format!("expected a nonnegative integer, found `{w}`")))
}

fn ints<const K: usize>(line: usize, words: &[&str]) -> Result<[usize; K], ParseError> {
    if words.len() != K {
        return err(line, format!("expected {K} integers, found {}", words.len()));
    }
    let mut out = [0; K];
    for (o, w) in out.iter_mut().zip(words) {
        *o = int(line, w)?;
    }
    Ok(out)
}

/// Parses the header `<keywords> <int>` and returns the integer and its line.
fn header<'a>(
    it: &mut impl Iterator<Item = (usize, Vec<&'a str>)>,
    keywords: &[&str],
) -> Result<(usize, usize), ParseError> {
    let expected = keywords.join(" ");
    let Some((line, words)) = it.next() else {
        return err(1, format!("missing `{expected} <int>` header"));
    };
    if words.len() != keywords.len() + 1 || words[..keywords.len()] != *keywords {
        return err(line, format!("expected `{expected} <int>` header"));
    }
    Ok((int(line, words[keywords.len()])?, line))
}

pub fn parse_triangulation(text: &str) -> Result<PolygonTriangulation, ParseError> {
    let mut it = lines(text);
    let (n, hline) = header(&mut it, &["n"])?;
    let mut diagonals = Vec::new();
    let mut last = hline;
    for (line, words) in it {
        last = line;
        match words[0] {
            "d" => {
                let [a, b] = ints(line, &words[1..])?;
                let d = Diagonal::new(a, b);
                check_diagonal(line, n, d, &diagonals)?;
                diagonals.push(d);
            }
            other => return err(line, format!("unknown record `{other}`, expected `d <a> <b>`")),
        }
    }
    PolygonTriangulation::new(n, &diagonals).or_else(|e| err(last, e.to_string()))
}

fn check_diagonal(line: usize, n: usize, d: Diagonal, seen: &[Diagonal]) -> Result<(), ParseError> {
    if d.a() >= n || d.b() >= n {
        return err(line, format!("diagonal {d} has a vertex outside 0..{n}"));
    }
    if d.a() == d.b() {
        return err(line, format!("diagonal {d} is degenerate"));
    }
    if d.is_boundary_edge(n) {
        return err(line, format!("{d} is a polygon edge, not a diagonal"));
    }
    if seen.contains(&d) {
        return err(line, format!("diagonal {d} listed twice"));
    }
    Ok(())
}

pub fn emit_triangulation(t: &PolygonTriangulation, comment: Option<&str>) -> String {
    let mut s = String::new();
    if let Some(c) = comment {
        writeln!(s, "# {c}").unwrap();
    }
    writeln!(s, "n {}", t.n()).unwrap();
    for d in t.diagonals() {
        writeln!(s, "d {} {}", d.a(), d.b()).unwrap();
    }
    s
}

/// A parsed path file: the polygon size, an optional starting
/// triangulation, and the flips.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathFile {
    pub n: usize,
    pub start: Option<PolygonTriangulation>,
    pub flips: Vec<Flip>,
}

impl PathFile {
    /// Replays the flips from `start` (or the file's own start).
    pub fn replay(&self, start: Option<&PolygonTriangulation>) -> Result<FlipPath, String> {
        let s = start
            .or(self.start.as_ref())
            .ok_or_else(|| "path file has no starting triangulation; supply one".to_string())?;
        FlipPath::new(s.clone(), self.flips.clone()).map_err(|e| e.to_string())
    }
}

pub fn parse_path(text: &str) -> Result<PathFile, ParseError> {
    let mut it = lines(text);
    let (n, hline) = header(&mut it, &["path", "n"])?;
    let mut diagonals = Vec::new();
    let mut flips = Vec::new();
    let mut start_line = hline;
    for (line, words) in it {
        match words[0] {
            "d" if flips.is_empty() => {
                let [a, b] = ints(line, &words[1..])?;
                let d = Diagonal::new(a, b);
                check_diagonal(line, n, d, &diagonals)?;
                diagonals.push(d);
                start_line = line;
            }
            "flip" => {
                if words.len() != 6 || words[3] != "->" {
                    return err(line, "expected `flip <a> <b> -> <c> <d>`");
                }
                let [a, b] = ints(line, &words[1..3])?;
                let [c, d] = ints(line, &words[4..6])?;
                for x in [a, b, c, d] {
                    if x >= n {
                        return err(line, format!("vertex {x} outside 0..{n}"));
                    }
                }
                flips.push(Flip {
                    removed: Diagonal::new(a, b),
                    inserted: Diagonal::new(c, d),
                });
            }
            other => return err(line, format!("unknown record `{other}`")),
        }
    }
    let start = if diagonals.is_empty() {
        None
    } else {
        Some(PolygonTriangulation::new(n, &diagonals).or_else(|e| err(start_line, e.to_string()))?)
    };
    Ok(PathFile { n, start, flips })
}

pub fn emit_path(p: &FlipPath) -> String {
    let mut s = format!("path n {}\n", p.n());
    for d in p.start().diagonals() {
        writeln!(s, "d {} {}", d.a(), d.b()).unwrap();
    }
    for f in p.steps() {
        writeln!(
            s,
            "flip {} {} -> {} {}",
            f.removed.a(),
            f.removed.b(),
            f.inserted.a(),
            f.inserted.b()
        )
        .unwrap();
    }
    s
}

/// A parsed sphere file with its optional seam.
#[derive(Debug, Clone)]
pub struct SphereFile {
    pub sphere: SphereTriangulation,
    pub seam: Option<CycleInSphere>,
}

pub fn parse_sphere(text: &str) -> Result<SphereFile, ParseError> {
    let mut it = lines(text);
    let (v, hline) = header(&mut it, &["sphere", "V"])?;
    let mut tris = Vec::new();
    let mut seam: Option<(usize, Vec<usize>)> = None;
    let mut last = hline;
    for (line, words) in it {
        last = line;
        match words[0] {
            "t" => {
                let t: [usize; 3] = ints(line, &words[1..])?;
                if let Some(&x) = t.iter().find(|&&x| x >= v) {
                    return err(line, format!("vertex {x} outside 0..{v}"));
                }
                tris.push(t);
            }
            "seam" => {
                if seam.is_some() {
                    return err(line, "second `seam` record");
                }
                let cycle = words[1..].iter().map(|w| int(line, w)).collect::<Result<Vec<_>, _>>()?;
                seam = Some((line, cycle));
            }
            other => return err(line, format!("unknown record `{other}`, expected `t <a> <b> <c>`")),
        }
    }
    let sphere = SphereTriangulation::new(v, &tris).or_else(|e| err(last, e.to_string()))?;
    let seam = match seam {
        Some((line, c)) => Some(CycleInSphere::new(&sphere, c).or_else(|e| err(line, e.to_string()))?),
        None => None,
    };
    Ok(SphereFile { sphere, seam })
}

pub fn emit_sphere(tau: &SphereTriangulation, seam: Option<&CycleInSphere>) -> String {
    let mut s = format!("sphere V {}\n", tau.vertex_count());
    for t in tau.triangles() {
        writeln!(s, "t {} {} {}", t[0], t[1], t[2]).unwrap();
    }
    if let Some(c) = seam {
        let vs: Vec<String> = c.vertices().iter().map(ToString::to_string).collect();
        writeln!(s, "seam {}", vs.join(" ")).unwrap();
    }
    s
}

pub fn parse_tets(text: &str) -> Result<TetDecomposition, ParseError> {
    let mut it = lines(text);
    let (v, hline) = header(&mut it, &["tets", "V"])?;
    let mut tets = Vec::new();
    let mut last = hline;
    for (line, words) in it {
        last = line;
        match words[0] {
            "T" => tets.push(ints::<4>(line, &words[1..])?),
            other => return err(line, format!("unknown record `{other}`, expected `T <a> <b> <c> <d>`")),
        }
    }
    TetDecomposition::new(v, tets).or_else(|e| err(last, e.to_string()))
}

pub fn emit_tets(d: &TetDecomposition) -> String {
    let mut s = format!("tets V {}\n", d.vertex_count());
    for t in d.tets() {
        writeln!(s, "T {} {} {} {}", t[0], t[1], t[2], t[3]).unwrap();
    }
    s
}

fn parse_rational(line: usize, w: &str) -> Result<BigRational, ParseError> {
    let (num, den) = w.split_once('/').unwrap_or((w, "1"));
    let num: BigInt = num.parse().or_else(|_| err(line, format!("bad numerator in `{w}`")))?;
    let den: BigInt = den.parse().or_else(|_| err(line, format!("bad denominator in `{w}`")))?;
    if den == BigInt::from(0) {
        return err(line, format!("zero denominator in `{w}`"));
    }
    Ok(BigRational::new(num, den))
}

pub fn parse_chain(text: &str) -> Result<Chain3, ParseError> {
    let mut it = lines(text);
    let (v, _) = header(&mut it, &["chain", "V"])?;
    let mut chain = Chain3::new(v);
    for (line, words) in it {
        match words[0] {
            "x" if words.len() == 6 => {
                let t: [usize; 4] = ints(line, &words[1..5])?;
                if let Some(&x) = t.iter().find(|&&x| x >= v) {
                    return err(line, format!("vertex {x} outside 0..{v}"));
                }
                let mut s = t;
                s.sort_unstable();
                if s.windows(2).any(|w| w[0] == w[1]) {
                    return err(line, "tetrahedron repeats a vertex");
                }
                chain.add(t, parse_rational(line, words[5])?);
            }
            _ => return err(line, "expected `x <a> <b> <c> <d> <num>/<den>`"),
        }
    }
    Ok(chain)
}

pub fn emit_chain(c: &Chain3) -> String {
    let mut s = format!("chain V {}\n", c.vertex_count);
    for (t, x) in &c.coefficients {
        writeln!(s, "x {} {} {} {} {}/{}", t[0], t[1], t[2], t[3], x.numer(), x.denom()).unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use flipgap::family::{explicit_path, t_minus, t_plus};
    use flipgap::sphere::{cone_decomposition, glue};

    #[test]
    fn triangulation_round_trip() {
        let t = t_plus(5).unwrap();
        let text = emit_triangulation(&t, Some("labels"));
        assert_eq!(parse_triangulation(&text).unwrap(), t);
        assert_eq!(emit_triangulation(&parse_triangulation(&text).unwrap(), Some("labels")), text);
    }

    #[test]
    fn triangulation_errors_name_lines() {
        let e = parse_triangulation("n 6\nd 0 2\nd 0 x\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_triangulation("# c\nn 6\nd 0 1\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.message.contains("polygon edge"));
        let e = parse_triangulation("n 6\nd 0 2\nd 2 0\n").unwrap_err();
        assert!(e.message.contains("twice"));
        let e = parse_triangulation("m 6\n").unwrap_err();
        assert_eq!(e.line, 1);
        assert!(parse_triangulation("n 6\nd 0 2\n").is_err());
    }

    #[test]
    fn path_round_trip() {
        let p = explicit_path(3).unwrap();
        let text = emit_path(&p);
        let parsed = parse_path(&text).unwrap();
        assert_eq!(parsed.replay(None).unwrap(), p);
        assert_eq!(emit_path(&parsed.replay(None).unwrap()), text);
        let bare: String = text.lines().filter(|l| !l.starts_with("d ")).map(|l| format!("{l}\n")).collect();
        let parsed = parse_path(&bare).unwrap();
        assert!(parsed.replay(None).is_err());
        assert_eq!(parsed.replay(Some(&t_plus(3).unwrap())).unwrap(), p);
        assert_eq!(parse_path("path n 6\nflip 0 2 1 3\n").unwrap_err().line, 2);
    }

    #[test]
    fn sphere_and_decomposition_round_trip() {
        let tau = glue(&t_plus(2).unwrap(), &t_minus(2).unwrap()).unwrap();
        let seam = CycleInSphere::new(&tau, (0..8).collect()).unwrap();
        let text = emit_sphere(&tau, Some(&seam));
        let parsed = parse_sphere(&text).unwrap();
        assert_eq!(parsed.sphere, tau);
        assert_eq!(parsed.seam.as_ref(), Some(&seam));
        assert_eq!(emit_sphere(&parsed.sphere, parsed.seam.as_ref()), text);

        let cone = cone_decomposition(&tau, 0).unwrap();
        let text = emit_tets(&cone);
        assert_eq!(parse_tets(&text).unwrap(), cone);
        assert_eq!(emit_tets(&parse_tets(&text).unwrap()), text);

        assert_eq!(parse_sphere("sphere V 4\nt 0 1 2\nt 0 1 3\n").unwrap_err().line, 3);
        assert_eq!(parse_tets("tets V 4\nT 0 1 2\n").unwrap_err().line, 2);
    }

    #[test]
    fn chain_round_trip() {
        let mut c = Chain3::new(5);
        c.add([0, 1, 2, 3], BigRational::new(3.into(), 4.into()));
        c.add([1, 0, 2, 4], BigRational::new(1.into(), 2.into()));
        let text = emit_chain(&c);
        assert_eq!(parse_chain(&text).unwrap(), c);
        assert_eq!(parse_chain("chain V 5\nx 0 1 2 3 1/0\n").unwrap_err().line, 2);
    }
}
