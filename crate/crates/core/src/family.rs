//! The polygon family on `2n + 4` vertices whose flip distance and minimal
//! decomposition size differ by a factor approaching 3/2.
//!
//! Labels `A, v_n, ..., v_1, B, D, u_1, ..., u_n, C` sit on the cycle in that
//! order: `A = 0`, `v_j = n + 1 - j`, `B = n + 1`, `D = n + 2`,
//! `u_i = n + 2 + i`, `C = 2n + 3`.

use thiserror::Error;

use crate::polygon::{Diagonal, FlipPath, PolygonError, PolygonTriangulation, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("the family is defined for n >= 2, got {0}")]
    TooSmall(usize),
    #[error(transparent)]
    Polygon(#[from] PolygonError),
}

/// Named vertices of the `(2n + 4)`-gon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyLabeling {
    n: usize,
}

impl FamilyLabeling {
    pub fn new(n: usize) -> Result<Self, FamilyError> {
        if n < 2 {
            return Err(FamilyError::TooSmall(n));
        }
        Ok(FamilyLabeling { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.n + 4
    }

    pub fn a(&self) -> VertexId {
        0
    }

    pub fn b(&self) -> VertexId {
        self.n + 1
    }

    pub fn c(&self) -> VertexId {
        2 * self.n + 3
    }

    pub fn d(&self) -> VertexId {
        self.n + 2
    }

    /// `u_i`, `1 <= i <= n`.
    pub fn u(&self, i: usize) -> VertexId {
        assert!((1..=self.n).contains(&i), "u index {i} out of 1..={}", self.n);
        self.n + 2 + i
    }

    /// `v_j`, `1 <= j <= n`.
    pub fn v(&self, j: usize) -> VertexId {
        assert!((1..=self.n).contains(&j), "v index {j} out of 1..={}", self.n);
        self.n + 1 - j
    }

    /// Human-readable name of a vertex.
    pub fn label(&self, x: VertexId) -> String {
        let n = self.n;
        match x {
            0 => "A".into(),
            x if x == n + 1 => "B".into(),
            x if x == n + 2 => "D".into(),
            x if x == 2 * n + 3 => "C".into(),
            x if (1..=n).contains(&x) => format!("v{}", n + 1 - x),
            x if (n + 3..=2 * n + 2).contains(&x) => format!("u{}", x - n - 2),
            x => format!("?{x}"),
        }
    }

    /// All labels in vertex order.
    pub fn labels(&self) -> Vec<String> {
        (0..self.vertex_count()).map(|x| self.label(x)).collect()
    }

    pub fn diagonal(&self, x: VertexId, y: VertexId) -> Diagonal {
        Diagonal::new(x, y)
    }
}

/// `{BC} ∪ {B u_i} ∪ {C v_j}`.
pub fn t_plus(n: usize) -> Result<PolygonTriangulation, FamilyError> {
    let l = FamilyLabeling::new(n)?;
    let mut ds = vec![Diagonal::new(l.b(), l.c())];
    ds.extend((1..=n).map(|i| Diagonal::new(l.b(), l.u(i))));
    ds.extend((1..=n).map(|j| Diagonal::new(l.c(), l.v(j))));
    Ok(PolygonTriangulation::new(l.vertex_count(), &ds)?)
}

/// `{AD} ∪ {A u_i} ∪ {D v_j}`.
pub fn t_minus(n: usize) -> Result<PolygonTriangulation, FamilyError> {
    let l = FamilyLabeling::new(n)?;
    let mut ds = vec![Diagonal::new(l.a(), l.d())];
    ds.extend((1..=n).map(|i| Diagonal::new(l.a(), l.u(i))));
    ds.extend((1..=n).map(|j| Diagonal::new(l.d(), l.v(j))));
    Ok(PolygonTriangulation::new(l.vertex_count(), &ds)?)
}

/// The explicit `3n + 1`-flip path from [`t_plus`] to [`t_minus`]:
/// `C v_n, ..., C v_1`, then `BC, B u_n, ..., B u_1` (reaching the fan at `A`),
/// then `AB, A v_1, ..., A v_{n-1}`.
pub fn explicit_path(n: usize) -> Result<FlipPath, FamilyError> {
    let l = FamilyLabeling::new(n)?;
    let mut removals = Vec::with_capacity(3 * n + 1);
    removals.extend((1..=n).rev().map(|j| Diagonal::new(l.c(), l.v(j))));
    removals.push(Diagonal::new(l.b(), l.c()));
    removals.extend((1..=n).rev().map(|i| Diagonal::new(l.b(), l.u(i))));
    removals.push(Diagonal::new(l.a(), l.b()));
    removals.extend((1..n).map(|j| Diagonal::new(l.a(), l.v(j))));
    Ok(FlipPath::from_removals(t_plus(n)?, removals)?)
}

/// Fan triangulation of the `n`-gon at `apex`.
pub fn fan(n: usize, apex: VertexId) -> Result<PolygonTriangulation, PolygonError> {
    PolygonTriangulation::fan(n, apex)
}
