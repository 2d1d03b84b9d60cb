//! The L¹-norm lower bound: the least total absolute coefficient of a
//! rational 3-chain on the sphere's vertices whose boundary is the sphere.
//! Solved exactly with a rational simplex method.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::polygon::VertexId;
use crate::sphere::SphereTriangulation;
use crate::tetdecomp::{Face, Tet, TetDecomposition};

pub const MAX_LP_VERTICES: usize = 30;

/// Sign of the permutation sorting three distinct values.
fn sort_sign3(t: [VertexId; 3]) -> ([VertexId; 3], i32) {
    let mut s = t;
    let mut sign = 1;
    for i in 0..3 {
        for j in 0..2 - i {
            if s[j] > s[j + 1] {
                s.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    (s, sign)
}

/// Faces of an ascending tetrahedron with their boundary signs.
fn signed_faces(t: Tet) -> [(Face, i32); 4] {
    [
        ([t[1], t[2], t[3]], 1),
        ([t[0], t[2], t[3]], -1),
        ([t[0], t[1], t[3]], 1),
        ([t[0], t[1], t[2]], -1),
    ]
}

/// The sphere as a 2-cycle: each ascending face with sign `+1` when the
/// stored orientation is an even permutation of it.
pub fn orient_sphere(tau: &SphereTriangulation) -> BTreeMap<Face, i32> {
    tau.triangles().iter().map(|&t| sort_sign3(t)).collect()
}

/// A 3-chain with rational coefficients on ascending tetrahedra.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Chain3 {
    pub vertex_count: usize,
    pub coefficients: BTreeMap<Tet, BigRational>,
}

impl Chain3 {
    pub fn new(vertex_count: usize) -> Self {
        Chain3 {
            vertex_count,
            coefficients: BTreeMap::new(),
        }
    }

    /// Adds `c` to the coefficient of `t` (any vertex order; odd orders negate).
    pub fn add(&mut self, t: Tet, c: BigRational) {
        let mut s = t;
        let mut sign = 1;
        for i in 0..4 {
            for j in 0..3 - i {
                if s[j] > s[j + 1] {
                    s.swap(j, j + 1);
                    sign = -sign;
                }
            }
        }
        let entry = self.coefficients.entry(s).or_insert_with(BigRational::zero);
        if sign > 0 {
            *entry += c;
        } else {
            *entry -= c;
        }
        if entry.is_zero() {
            self.coefficients.remove(&s);
        }
    }

    pub fn norm(&self) -> BigRational {
        self.coefficients.values().map(|c| c.abs()).fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn boundary(&self) -> BTreeMap<Face, BigRational> {
        let mut out: BTreeMap<Face, BigRational> = BTreeMap::new();
        for (&t, c) in &self.coefficients {
            for (f, s) in signed_faces(t) {
                let e = out.entry(f).or_insert_with(BigRational::zero);
                if s > 0 {
                    *e += c;
                } else {
                    *e -= c;
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Orients the tetrahedra of a decomposition so that the boundary is
    /// the oriented sphere. `None` if no consistent signs exist.
    pub fn from_decomposition(tau: &SphereTriangulation, d: &TetDecomposition) -> Option<Chain3> {
        let target = orient_sphere(tau);
        let tets = d.tets();
        let mut by_face: BTreeMap<Face, Vec<usize>> = BTreeMap::new();
        for (i, &t) in tets.iter().enumerate() {
            for (f, _) in signed_faces(t) {
                by_face.entry(f).or_default().push(i);
            }
        }
        let mut sign: Vec<Option<i32>> = vec![None; tets.len()];
        let mut queue = VecDeque::new();
        for (i, &t) in tets.iter().enumerate() {
            if let Some((f, s)) = signed_faces(t).into_iter().find(|(f, _)| target.contains_key(f)) {
                sign[i] = Some(target[&f] * s);
                queue.push_back(i);
                break;
            }
        }
        while let Some(i) = queue.pop_front() {
            let si = sign[i].unwrap();
            for (f, s) in signed_faces(tets[i]) {
                for &j in &by_face[&f] {
                    if j == i || sign[j].is_some() {
                        continue;
                    }
                    let sj = signed_faces(tets[j]).into_iter().find(|(g, _)| *g == f).unwrap().1;
                    sign[j] = Some(-si * s * sj);
                    queue.push_back(j);
                }
            }
        }
        let mut chain = Chain3::new(d.vertex_count());
        for (i, &t) in tets.iter().enumerate() {
            chain.add(t, BigRational::from_integer(BigInt::from(sign[i]?)));
        }
        verify_chain(tau, &chain).then_some(chain)
    }
}

/// Recomputes the boundary of `chain` and compares it with the oriented sphere.
pub fn verify_chain(tau: &SphereTriangulation, chain: &Chain3) -> bool {
    let target: BTreeMap<Face, BigRational> = orient_sphere(tau)
        .into_iter()
        .map(|(f, s)| (f, BigRational::from_integer(BigInt::from(s))))
        .collect();
    chain.vertex_count == tau.vertex_count() && chain.boundary() == target
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("the chain program is limited to {MAX_LP_VERTICES} vertices, got {0}")]
    TooManyVertices(usize),
    #[error("pivot budget of {0} exhausted")]
    Budget(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
}

impl fmt::Display for LpStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("optimal")
    }
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub objective: BigRational,
    pub chain: Chain3,
    /// Dual values on the faces not containing vertex 0.
    pub dual: BTreeMap<Face, BigRational>,
    pub pivots: usize,
}

impl LpSolution {
    /// The smallest integer at least the objective.
    pub fn integer_bound(&self) -> usize {
        let c = self.objective.ceil().to_integer();
        usize::try_from(c).expect("objective is nonnegative and small")
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LpConfig {
    pub max_pivots: usize,
}

impl Default for LpConfig {
    fn default() -> Self {
        LpConfig { max_pivots: 200_000 }
    }
}

fn all_tets(v: usize) -> Vec<Tet> {
    let mut out = Vec::new();
    for a in 0..v {
        for b in a + 1..v {
            for c in b + 1..v {
                for d in c + 1..v {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

/// Minimizes the 1-norm of a 3-chain with boundary `tau`.
///
/// A closed 2-chain is determined by its coefficients on faces avoiding
/// vertex 0, so only those rows are kept. They have full rank, and the cone
/// at vertex 0 is a feasible starting basis. Pivoting uses Bland's rule.
pub fn l1_min(tau: &SphereTriangulation, cfg: &LpConfig) -> Result<LpSolution, LpError> {
    let v = tau.vertex_count();
    if v > MAX_LP_VERTICES {
        return Err(LpError::TooManyVertices(v));
    }
    let target = orient_sphere(tau);
    let tets = all_tets(v);

    let mut rows: Vec<Face> = Vec::new();
    for a in 1..v {
        for b in a + 1..v {
            for c in b + 1..v {
                rows.push([a, b, c]);
            }
        }
    }
    let row_of: BTreeMap<Face, usize> = rows.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let m = rows.len();
    // Column 2k is +tets[k], column 2k + 1 is -tets[k].
    let ncols = 2 * tets.len();
    let rhs_sign: Vec<i32> = rows.iter().map(|f| if target.get(f).copied().unwrap_or(0) < 0 { -1 } else { 1 }).collect();

    let zero = BigRational::zero();
    let one = BigRational::one();
    let mut tab: Vec<Vec<BigRational>> = vec![vec![zero.clone(); ncols + 1]; m];
    for (k, &t) in tets.iter().enumerate() {
        for (f, s) in signed_faces(t) {
            if let Some(&r) = row_of.get(&f) {
                let val = BigRational::from_integer(BigInt::from(s * rhs_sign[r]));
                tab[r][2 * k + 1] = -val.clone();
                tab[r][2 * k] = val;
            }
        }
    }
    for r in 0..m {
        let t = target.get(&rows[r]).copied().unwrap_or(0);
        tab[r][ncols] = BigRational::from_integer(BigInt::from(t.abs()));
    }
    let tet_index: BTreeMap<Tet, usize> = tets.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    // Cone at vertex 0: [0, a, b, c] has boundary +[a, b, c] on the kept rows.
    let mut basis: Vec<usize> = rows
        .iter()
        .enumerate()
        .map(|(r, f)| {
            let k = tet_index[&[0, f[0], f[1], f[2]]];
            if rhs_sign[r] > 0 {
                2 * k
            } else {
                2 * k + 1
            }
        })
        .collect();

    // Reduced costs: every column costs 1 and every basic cost is 1.
    let mut cost: Vec<BigRational> = vec![one.clone(); ncols + 1];
    cost[ncols] = zero.clone();
    for row in &tab {
        for (j, x) in row.iter().enumerate() {
            if !x.is_zero() {
                cost[j] -= x;
            }
        }
    }

    let mut pivots = 0;
    loop {
        let Some(q) = (0..ncols).find(|&j| cost[j].is_negative()) else { break };
        let mut leave: Option<(usize, BigRational)> = None;
        for r in 0..m {
            if tab[r][q].is_positive() {
                let ratio = &tab[r][ncols] / &tab[r][q];
                let better = match &leave {
                    None => true,
                    Some((lr, lratio)) => ratio < *lratio || (ratio == *lratio && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let (p, _) = leave.expect("the objective is bounded below by zero");
        pivots += 1;
        if pivots > cfg.max_pivots {
            return Err(LpError::Budget(cfg.max_pivots));
        }
        let piv = tab[p][q].clone();
        let nonzero: Vec<usize> = (0..=ncols).filter(|&j| !tab[p][j].is_zero()).collect();
        for &j in &nonzero {
            tab[p][j] = &tab[p][j] / &piv;
        }
        let pivot_row: Vec<(usize, BigRational)> = nonzero.iter().map(|&j| (j, tab[p][j].clone())).collect();
        for (r, row) in tab.iter_mut().enumerate() {
            if r == p || row[q].is_zero() {
                continue;
            }
            let factor = row[q].clone();
            for (j, x) in &pivot_row {
                row[*j] -= &factor * x;
            }
        }
        let factor = cost[q].clone();
        for (j, x) in &pivot_row {
            cost[*j] -= &factor * x;
        }
        basis[p] = q;
    }

    let mut chain = Chain3::new(v);
    for (r, &col) in basis.iter().enumerate() {
        let val = tab[r][ncols].clone();
        if val.is_zero() {
            continue;
        }
        let t = tets[col / 2];
        chain.add(t, if col % 2 == 0 { val } else { -val });
    }
    let objective = -cost[ncols].clone();
    // The dual value of a row is one minus the reduced cost of the positive
    // cone column, whose boundary on the kept rows is that row alone.
    let dual = rows
        .iter()
        .map(|f| {
            let k = tet_index[&[0, f[0], f[1], f[2]]];
            (*f, &one - &cost[2 * k])
        })
        .collect();
    Ok(LpSolution {
        status: LpStatus::Optimal,
        objective,
        chain,
        dual,
        pivots,
    })
}

/// Checks optimality independently of the solver: the chain is feasible with
/// norm equal to the objective, and the dual values satisfy
/// `|y · ∂σ| <= 1` for every tetrahedron with `y · target` equal to the objective.
pub fn verify_optimality(tau: &SphereTriangulation, sol: &LpSolution) -> bool {
    if !verify_chain(tau, &sol.chain) || sol.chain.norm() != sol.objective {
        return false;
    }
    let target = orient_sphere(tau);
    let mut dual_value = BigRational::zero();
    for (f, s) in &target {
        if let Some(y) = sol.dual.get(f) {
            dual_value += y * BigRational::from_integer(BigInt::from(*s));
        }
    }
    if dual_value != sol.objective {
        return false;
    }
    let one = BigRational::one();
    all_tets(tau.vertex_count()).into_iter().all(|t| {
        let mut s = BigRational::zero();
        for (f, sign) in signed_faces(t) {
            if let Some(y) = sol.dual.get(&f) {
                if sign > 0 {
                    s += y;
                } else {
                    s -= y;
                }
            }
        }
        s.abs() <= one
    })
}
