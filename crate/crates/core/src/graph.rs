//! Nonnegative transition matrices and their directed multigraphs.
//!
//! A square nonnegative integer matrix `A` determines a directed multigraph
//! with `A(i,j)` parallel edges from vertex `i` to vertex `j`. Edges are kept
//! in the canonical lexicographic order (source, target, copy), which every
//! downstream construction inherits; identical inputs therefore always
//! produce bit-identical outputs.

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::scalar::Scalar;
use std::fmt;

/// A square matrix with nonnegative entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TransitionMatrix<T>(IntMatrix<T>);

impl<T: Scalar> TransitionMatrix<T> {
    pub fn new(m: IntMatrix<T>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "transition matrix must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if m[(i, j)].is_negative() {
                    return Err(Error::NegativeEntry(i + 1, j + 1));
                }
            }
        }
        Ok(TransitionMatrix(m))
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::new(IntMatrix::from_i64_rows(rows)).expect("literal must be square nonnegative")
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &IntMatrix<T> {
        &self.0
    }

    pub fn into_matrix(self) -> IntMatrix<T> {
        self.0
    }

    pub fn transpose(&self) -> Self {
        TransitionMatrix(self.0.transpose())
    }

    /// True iff the underlying graph is strongly connected, decided by a
    /// boolean reachability closure over paths of positive length.
    pub fn is_irreducible(&self) -> bool {
        let n = self.dim();
        let mut reach = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                reach[i][j] = !self.0[(i, j)].is_zero();
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    reach[i][j] = reach[i][j] || (reach[i][k] && reach[k][j]);
                }
            }
        }
        reach.iter().all(|row| row.iter().all(|&r| r))
    }

    /// True iff every row and column sums to one with 0/1 entries.
    pub fn is_permutation(&self) -> bool {
        let n = self.dim();
        let one = T::one();
        for i in 0..n {
            let mut row_ones = 0usize;
            for j in 0..n {
                let v = &self.0[(i, j)];
                if v.is_zero() {
                    continue;
                }
                if *v != one {
                    return false;
                }
                row_ones += 1;
            }
            if row_ones != 1 {
                return false;
            }
        }
        for j in 0..n {
            let col_ones = (0..n).filter(|&i| !self.0[(i, j)].is_zero()).count();
            if col_ones != 1 {
                return false;
            }
        }
        true
    }

    /// Index of the first zero row or column, if any.
    pub fn stranded_vertex(&self) -> Option<usize> {
        let n = self.dim();
        for i in 0..n {
            if (0..n).all(|j| self.0[(i, j)].is_zero()) {
                return Some(i);
            }
        }
        for j in 0..n {
            if (0..n).all(|i| self.0[(i, j)].is_zero()) {
                return Some(j);
            }
        }
        None
    }

    pub fn is_essential(&self) -> bool {
        self.stranded_vertex().is_none()
    }

    /// Traces of `A^1 .. A^n_max`, exact.
    pub fn trace_sequence(&self, n_max: usize) -> Result<Vec<T>> {
        let mut out = Vec::with_capacity(n_max);
        let mut power = self.0.clone();
        for step in 0..n_max {
            if step > 0 {
                power = power.checked_mul(&self.0)?;
            }
            out.push(power.trace()?);
        }
        Ok(out)
    }
}

impl<T: fmt::Display> fmt::Display for TransitionMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl<T: fmt::Debug> fmt::Debug for TransitionMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

/// Index into the canonical edge list of a [`DirectedMultigraph`].
pub type EdgeId = usize;

/// One directed edge; `copy` distinguishes parallel edges and is 0-based
/// internally, 1-based in labels.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub copy: usize,
}

impl Edge {
    /// External label, 1-based: `i->j#k`.
    pub fn label(&self) -> String {
        format!("{}->{}#{}", self.source + 1, self.target + 1, self.copy + 1)
    }
}

/// A directed multigraph with edges in canonical lexicographic order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DirectedMultigraph {
    num_vertices: usize,
    edges: Vec<Edge>,
}

impl DirectedMultigraph {
    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    /// Out-edge ids of `vertex`, ascending.
    pub fn out_edges(&self, vertex: usize) -> Vec<EdgeId> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.source == vertex)
            .map(|(id, _)| id)
            .collect()
    }

    /// In-edge ids of `vertex`, ascending.
    pub fn in_edges(&self, vertex: usize) -> Vec<EdgeId> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.target == vertex)
            .map(|(id, _)| id)
            .collect()
    }

    /// Find the edge with the given 0-based endpoints and copy index.
    pub fn find_edge(&self, source: usize, target: usize, copy: usize) -> Option<EdgeId> {
        self.edges
            .iter()
            .position(|e| e.source == source && e.target == target && e.copy == copy)
    }
}

/// Expand a matrix into its canonical multigraph: `A(i,j)` edges `i -> j`
/// with copy indices `1..A(i,j)`, listed lexicographically.
pub fn from_matrix<T: Scalar>(a: &TransitionMatrix<T>) -> Result<DirectedMultigraph> {
    let n = a.dim();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mult = a.matrix()[(i, j)].to_count().ok_or(Error::Overflow)?;
            for copy in 0..mult {
                edges.push(Edge {
                    source: i,
                    target: j,
                    copy,
                });
            }
        }
    }
    Ok(DirectedMultigraph {
        num_vertices: n,
        edges,
    })
}

/// Count edges back into a matrix; inverse of [`from_matrix`].
pub fn to_matrix<T: Scalar>(g: &DirectedMultigraph) -> TransitionMatrix<T> {
    let n = g.num_vertices();
    let mut m: IntMatrix<T> = IntMatrix::zeros(n, n);
    for e in g.edges() {
        let bumped = m[(e.source, e.target)]
            .checked_add(&T::one())
            .expect("edge count fits the scalar");
        m[(e.source, e.target)] = bumped;
    }
    TransitionMatrix::new(m).expect("edge counts are nonnegative")
}

/// Transposed graph together with the canonical edge bijection:
/// `bijection[e]` is the id in the transposed graph of the reversal of
/// edge `e` (same copy index).
pub fn transpose_graph(g: &DirectedMultigraph) -> (DirectedMultigraph, Vec<EdgeId>) {
    let n = g.num_vertices();
    let mut edges: Vec<Edge> = g
        .edges()
        .iter()
        .map(|e| Edge {
            source: e.target,
            target: e.source,
            copy: e.copy,
        })
        .collect();
    edges.sort_by_key(|e| (e.source, e.target, e.copy));
    let transposed = DirectedMultigraph {
        num_vertices: n,
        edges,
    };
    let bijection = g
        .edges()
        .iter()
        .map(|e| {
            transposed
                .find_edge(e.target, e.source, e.copy)
                .expect("reversed edge exists by construction")
        })
        .collect();
    (transposed, bijection)
}

/// The factorization `A = R S`, `A_edge = S R` through the edge graph:
/// `R(j,i) = 1` iff vertex `j` is the source of edge `i`, and
/// `S(i,j) = 1` iff vertex `j` is the target of edge `i`. The edge matrix
/// records which edges can follow which.
#[derive(Clone, Debug)]
pub struct EdgeFactorization<T> {
    /// 0/1 edge-transition matrix, one row/column per edge.
    pub edge_matrix: TransitionMatrix<T>,
    /// N x |E| source incidence; each column has exactly one 1.
    pub source_incidence: IntMatrix<T>,
    /// |E| x N target incidence; each row has exactly one 1.
    pub target_incidence: IntMatrix<T>,
    /// The graph whose canonical edge order indexes the factorization.
    pub graph: DirectedMultigraph,
}

/// Build the edge-graph factorization of an essential matrix.
pub fn edge_graph<T: Scalar>(a: &TransitionMatrix<T>) -> Result<EdgeFactorization<T>> {
    if let Some(v) = a.stranded_vertex() {
        return Err(Error::ZeroRowOrColumn(v + 1));
    }
    let g = from_matrix(a)?;
    let n = a.dim();
    let ne = g.num_edges();

    let mut source_incidence = IntMatrix::zeros(n, ne);
    let mut target_incidence = IntMatrix::zeros(ne, n);
    let mut edge_matrix = IntMatrix::zeros(ne, ne);
    for (i, e) in g.edges().iter().enumerate() {
        source_incidence[(e.source, i)] = T::one();
        target_incidence[(i, e.target)] = T::one();
        for (j, f) in g.edges().iter().enumerate() {
            if e.target == f.source {
                edge_matrix[(i, j)] = T::one();
            }
        }
    }

    let fact = EdgeFactorization {
        edge_matrix: TransitionMatrix::new(edge_matrix)?,
        source_incidence,
        target_incidence,
        graph: g,
    };
    debug_assert_eq!(
        fact.source_incidence
            .checked_mul(&fact.target_incidence)?,
        *a.matrix()
    );
    debug_assert_eq!(
        fact.target_incidence
            .checked_mul(&fact.source_incidence)?,
        *fact.edge_matrix.matrix()
    );
    Ok(fact)
}
