//! Elementary equivalences, strong-shift-equivalence chains, and the edge
//! pairings they induce on the bipartite graph `[[0, C], [D, 0]]`.
//!
//! A witness is a pair of nonnegative rectangular matrices `(C, D)` with
//! `A = C D` and `B = D C`. Every edge of `A` then factors uniquely as a
//! two-step path through the bipartite graph (a `C`-edge followed by a
//! `D`-edge) and every edge of `B` as a `D`-edge followed by a `C`-edge;
//! parallel copies are matched in lexicographic path order.

use crate::error::{Error, Result};
use crate::graph::{from_matrix, DirectedMultigraph, Edge, TransitionMatrix};
use crate::matrix::IntMatrix;
use crate::scalar::Scalar;
use crate::verdict::Verdict;
use std::collections::HashMap;

/// A verified witness `A = C D`, `B = D C`.
#[derive(Clone, Debug)]
pub struct ElementaryEquivalence<T> {
    a: TransitionMatrix<T>,
    b: TransitionMatrix<T>,
    c: IntMatrix<T>,
    d: IntMatrix<T>,
}

impl<T: Scalar> ElementaryEquivalence<T> {
    /// Build the witness with endpoints defined by the products themselves.
    pub fn from_pair(c: IntMatrix<T>, d: IntMatrix<T>) -> Result<Self> {
        check_pair_shape(&c, &d)?;
        let a = TransitionMatrix::new(c.checked_mul(&d)?)?;
        let b = TransitionMatrix::new(d.checked_mul(&c)?)?;
        Ok(ElementaryEquivalence { a, b, c, d })
    }

    /// Build the witness against stated endpoints; fails on any mismatch.
    pub fn with_endpoints(
        a: TransitionMatrix<T>,
        b: TransitionMatrix<T>,
        c: IntMatrix<T>,
        d: IntMatrix<T>,
    ) -> Result<Self> {
        match verify_elementary(&a, &b, &c, &d)? {
            Verdict::Verified { .. } => Ok(ElementaryEquivalence { a, b, c, d }),
            Verdict::Refuted { locus } => Err(Error::Parse(format!("witness refuted: {locus}"))),
        }
    }

    pub fn a(&self) -> &TransitionMatrix<T> {
        &self.a
    }

    pub fn b(&self) -> &TransitionMatrix<T> {
        &self.b
    }

    pub fn c(&self) -> &IntMatrix<T> {
        &self.c
    }

    pub fn d(&self) -> &IntMatrix<T> {
        &self.d
    }

    /// The bipartite companion `[[0, C], [D, 0]]`.
    pub fn bipartite(&self) -> TransitionMatrix<T> {
        TransitionMatrix::new(
            IntMatrix::bipartite_block(&self.c, &self.d).expect("verified witness has compatible shapes"),
        )
        .expect("bipartite companion is nonnegative")
    }

    /// The witness for `B ~ A` obtained by swapping the pair.
    pub fn reversed(&self) -> Self {
        ElementaryEquivalence {
            a: self.b.clone(),
            b: self.a.clone(),
            c: self.d.clone(),
            d: self.c.clone(),
        }
    }

    /// The witness `A^t = D^t C^t`, `B^t = C^t D^t` for the transposes.
    pub fn transposed(&self) -> Self {
        ElementaryEquivalence {
            a: self.a.transpose(),
            b: self.b.transpose(),
            c: self.d.transpose(),
            d: self.c.transpose(),
        }
    }
}

fn check_pair_shape<T: Scalar>(c: &IntMatrix<T>, d: &IntMatrix<T>) -> Result<()> {
    if c.rows() != d.cols() || c.cols() != d.rows() {
        return Err(Error::DimensionMismatch(format!(
            "witness pair {}x{} and {}x{}",
            c.rows(),
            c.cols(),
            d.rows(),
            d.cols()
        )));
    }
    for (name, mat) in [("C", c), ("D", d)] {
        for i in 0..mat.rows() {
            for j in 0..mat.cols() {
                if mat[(i, j)].is_negative() {
                    return Err(Error::Parse(format!(
                        "{name} has a negative entry at ({},{})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Check `A = C D` and `B = D C` exactly. Refutations point at the first
/// mismatching entry in row-major order; a verified outcome carries warnings
/// when an endpoint is reducible or a permutation, hypotheses the downstream
/// theory assumes.
pub fn verify_elementary<T: Scalar>(
    a: &TransitionMatrix<T>,
    b: &TransitionMatrix<T>,
    c: &IntMatrix<T>,
    d: &IntMatrix<T>,
) -> Result<Verdict> {
    check_pair_shape(c, d)?;
    if c.rows() != a.dim() || d.rows() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "endpoints {}x{} / {}x{} against pair {}x{}",
            a.dim(),
            a.dim(),
            b.dim(),
            b.dim(),
            c.rows(),
            c.cols()
        )));
    }
    let cd = c.checked_mul(d)?;
    if let Some((i, j)) = cd.first_mismatch(a.matrix()) {
        return Ok(Verdict::refuted(format!(
            "product C*D entry ({},{}): got {}, want {}",
            i + 1,
            j + 1,
            cd[(i, j)],
            a.matrix()[(i, j)]
        )));
    }
    let dc = d.checked_mul(c)?;
    if let Some((i, j)) = dc.first_mismatch(b.matrix()) {
        return Ok(Verdict::refuted(format!(
            "product D*C entry ({},{}): got {}, want {}",
            i + 1,
            j + 1,
            dc[(i, j)],
            b.matrix()[(i, j)]
        )));
    }
    let mut warnings = Vec::new();
    for (name, mat) in [("A", a), ("B", b)] {
        if !mat.is_irreducible() {
            warnings.push(format!("{name} is reducible"));
        }
        if mat.is_permutation() {
            warnings.push(format!("{name} is a permutation matrix"));
        }
    }
    Ok(Verdict::verified_with(warnings))
}

/// A verified chain `A_0 ~ A_1 ~ ... ~ A_n`.
#[derive(Clone, Debug)]
pub struct SseChain<T> {
    steps: Vec<ElementaryEquivalence<T>>,
}

/// Outcome of assembling a chain from raw witness pairs.
#[derive(Clone, Debug)]
pub enum ChainCheck<T> {
    Verified(SseChain<T>),
    Refuted { step: usize, locus: String },
}

/// Assemble a chain from witness pairs `(C_i, D_i)`. Endpoints are inferred:
/// `A_0 = C_1 D_1`, `A_i = D_i C_i`, and each intermediate matrix is
/// cross-checked against the next step's product.
pub fn build_chain<T: Scalar>(witnesses: &[(IntMatrix<T>, IntMatrix<T>)]) -> Result<ChainCheck<T>> {
    if witnesses.is_empty() {
        return Err(Error::EmptyChain);
    }
    let mut steps = Vec::with_capacity(witnesses.len());
    let mut previous_b: Option<TransitionMatrix<T>> = None;
    for (idx, (c, d)) in witnesses.iter().enumerate() {
        let ee = match ElementaryEquivalence::from_pair(c.clone(), d.clone()) {
            Ok(ee) => ee,
            Err(Error::DimensionMismatch(msg)) | Err(Error::Parse(msg)) => {
                return Ok(ChainCheck::Refuted {
                    step: idx + 1,
                    locus: msg,
                })
            }
            Err(e) => return Err(e),
        };
        if let Some(prev) = previous_b {
            if let Some((i, j)) = prev.matrix().first_mismatch(ee.a().matrix()) {
                return Ok(ChainCheck::Refuted {
                    step: idx + 1,
                    locus: format!(
                        "intermediate matrix entry ({},{}): got {}, want {}",
                        i + 1,
                        j + 1,
                        ee.a().matrix()[(i, j)],
                        prev.matrix()[(i, j)]
                    ),
                });
            }
        }
        previous_b = Some(ee.b().clone());
        steps.push(ee);
    }
    Ok(ChainCheck::Verified(SseChain { steps }))
}

/// Verdict-only wrapper around [`build_chain`].
pub fn verify_chain<T: Scalar>(witnesses: &[(IntMatrix<T>, IntMatrix<T>)]) -> Result<Verdict> {
    Ok(match build_chain(witnesses)? {
        ChainCheck::Verified(_) => Verdict::verified(),
        ChainCheck::Refuted { step, locus } => Verdict::refuted(format!("step {step} {locus}")),
    })
}

impl<T: Scalar> SseChain<T> {
    pub fn from_steps(steps: Vec<ElementaryEquivalence<T>>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::EmptyChain);
        }
        for pair in steps.windows(2) {
            if pair[0].b().matrix() != pair[1].a().matrix() {
                return Err(Error::Parse("chain endpoints do not match".into()));
            }
        }
        Ok(SseChain { steps })
    }

    pub fn steps(&self) -> &[ElementaryEquivalence<T>] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn start(&self) -> &TransitionMatrix<T> {
        self.steps.first().expect("chain is nonempty").a()
    }

    pub fn end(&self) -> &TransitionMatrix<T> {
        self.steps.last().expect("chain is nonempty").b()
    }

    /// The product `C_1 C_2 ... C_n`, exact.
    pub fn forward_matrix(&self) -> Result<IntMatrix<T>> {
        let mut acc = self.steps[0].c().clone();
        for step in &self.steps[1..] {
            acc = acc.checked_mul(step.c())?;
        }
        Ok(acc)
    }
}

/// The two-layer edge data of a verified witness: canonical enumerations of
/// the `C`-layer and `D`-layer edges and the bijections pairing each `A`-edge
/// with a `(c, d)` path and each `B`-edge with a `(d, c)` path.
#[derive(Clone, Debug)]
pub struct EdgePairing {
    pub a_graph: DirectedMultigraph,
    pub b_graph: DirectedMultigraph,
    /// `C`-layer edges: source is an `A`-vertex, target a `B`-vertex.
    pub c_edges: Vec<Edge>,
    /// `D`-layer edges: source is a `B`-vertex, target an `A`-vertex.
    pub d_edges: Vec<Edge>,
    /// A-edge id -> (c index, d index).
    pub a_pairs: Vec<(usize, usize)>,
    /// B-edge id -> (d index, c index).
    pub b_pairs: Vec<(usize, usize)>,
    cd_to_a: HashMap<(usize, usize), usize>,
    dc_to_b: HashMap<(usize, usize), usize>,
}

impl EdgePairing {
    pub fn a_edge_for(&self, c: usize, d: usize) -> Option<usize> {
        self.cd_to_a.get(&(c, d)).copied()
    }

    pub fn b_edge_for(&self, d: usize, c: usize) -> Option<usize> {
        self.dc_to_b.get(&(d, c)).copied()
    }
}

fn layer_edges<T: Scalar>(m: &IntMatrix<T>) -> Result<Vec<Edge>> {
    let mut edges = Vec::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let mult = m[(i, j)].to_count().ok_or(Error::Overflow)?;
            for copy in 0..mult {
                edges.push(Edge {
                    source: i,
                    target: j,
                    copy,
                });
            }
        }
    }
    Ok(edges)
}

/// Pair every `A`-edge with its unique `(c, d)` path and every `B`-edge with
/// its `(d, c)` path, matching parallel copies in lexicographic path order.
pub fn edge_pairing<T: Scalar>(ee: &ElementaryEquivalence<T>) -> Result<EdgePairing> {
    let a_graph = from_matrix(ee.a())?;
    let b_graph = from_matrix(ee.b())?;
    let c_edges = layer_edges(ee.c())?;
    let d_edges = layer_edges(ee.d())?;

    // Index of the first copy for each (source, target) cell of a layer.
    let cell_start = |edges: &[Edge]| -> HashMap<(usize, usize), usize> {
        let mut map = HashMap::new();
        for (idx, e) in edges.iter().enumerate() {
            map.entry((e.source, e.target)).or_insert(idx);
        }
        map
    };
    let c_start = cell_start(&c_edges);
    let d_start = cell_start(&d_edges);

    let inner = ee.c().cols();
    let count =
        |m: &IntMatrix<T>, i: usize, j: usize| m[(i, j)].to_count().expect("verified counts fit");

    let mut a_pairs = vec![(0usize, 0usize); a_graph.num_edges()];
    let mut cd_to_a = HashMap::new();
    for (i_vertex, j_vertex) in iter_cells(ee.a().dim(), ee.a().dim()) {
        let mut paths = Vec::new();
        for k in 0..inner {
            let c_mult = count(ee.c(), i_vertex, k);
            let d_mult = count(ee.d(), k, j_vertex);
            for cc in 0..c_mult {
                for dd in 0..d_mult {
                    paths.push((
                        c_start[&(i_vertex, k)] + cc,
                        d_start[&(k, j_vertex)] + dd,
                    ));
                }
            }
        }
        for (copy, pair) in paths.into_iter().enumerate() {
            let a_id = a_graph
                .find_edge(i_vertex, j_vertex, copy)
                .expect("A = C*D forces matching path counts");
            a_pairs[a_id] = pair;
            cd_to_a.insert(pair, a_id);
        }
    }

    let mut b_pairs = vec![(0usize, 0usize); b_graph.num_edges()];
    let mut dc_to_b = HashMap::new();
    for (k_vertex, l_vertex) in iter_cells(ee.b().dim(), ee.b().dim()) {
        let mut paths = Vec::new();
        for j in 0..ee.d().cols() {
            let d_mult = count(ee.d(), k_vertex, j);
            let c_mult = count(ee.c(), j, l_vertex);
            for dd in 0..d_mult {
                for cc in 0..c_mult {
                    paths.push((
                        d_start[&(k_vertex, j)] + dd,
                        c_start[&(j, l_vertex)] + cc,
                    ));
                }
            }
        }
        for (copy, pair) in paths.into_iter().enumerate() {
            let b_id = b_graph
                .find_edge(k_vertex, l_vertex, copy)
                .expect("B = D*C forces matching path counts");
            b_pairs[b_id] = pair;
            dc_to_b.insert(pair, b_id);
        }
    }

    Ok(EdgePairing {
        a_graph,
        b_graph,
        c_edges,
        d_edges,
        a_pairs,
        b_pairs,
        cd_to_a,
        dc_to_b,
    })
}

fn iter_cells(rows: usize, cols: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..rows).flat_map(move |i| (0..cols).map(move |j| (i, j)))
}

/// The 0/1 matrix pairing `A`-edges with the `B`-edges that share their
/// `D`-layer component: entry `(i, l)` is 1 iff edge `a_i` and edge `b_l`
/// factor through the same `D`-edge.
pub fn dhat<T: Scalar>(pairing: &EdgePairing) -> IntMatrix<T> {
    let mut m = IntMatrix::zeros(pairing.a_pairs.len(), pairing.b_pairs.len());
    for (i, &(_, d_of_a)) in pairing.a_pairs.iter().enumerate() {
        for (l, &(d_of_b, _)) in pairing.b_pairs.iter().enumerate() {
            if d_of_a == d_of_b {
                m[(i, l)] = T::one();
            }
        }
    }
    m
}

/// An arity-`k` family of injections of the positive integers, branch `i`
/// sending `j` to `k (j - 1) + i`; the images partition the positive
/// integers into the residue classes mod `k`.
#[derive(Clone, Copy, Debug)]
pub struct CuntzFamily {
    arity: usize,
}

impl CuntzFamily {
    pub fn new(arity: usize) -> Result<Self> {
        if arity == 0 {
            return Err(Error::BranchOutOfRange { branch: 0, arity });
        }
        Ok(CuntzFamily { arity })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Value of branch `branch` (1-based) at `j >= 1`.
    pub fn apply(&self, branch: usize, j: u64) -> Result<u64> {
        if branch == 0 || branch > self.arity {
            return Err(Error::BranchOutOfRange {
                branch,
                arity: self.arity,
            });
        }
        if j == 0 {
            return Err(Error::Parse("index j must be >= 1".into()));
        }
        (self.arity as u64)
            .checked_mul(j - 1)
            .and_then(|v| v.checked_add(branch as u64))
            .ok_or(Error::Overflow)
    }

    /// Check that the branch images hit every integer in `1..=prefix_len`
    /// exactly once.
    pub fn verify_partition(&self, prefix_len: usize) -> Result<Verdict> {
        let mut hits = vec![0u32; prefix_len + 1];
        for branch in 1..=self.arity {
            let mut j = 1u64;
            loop {
                let v = self.apply(branch, j)?;
                if v > prefix_len as u64 {
                    break;
                }
                hits[v as usize] += 1;
                j += 1;
            }
        }
        for n in 1..=prefix_len {
            if hits[n] != 1 {
                return Ok(Verdict::refuted(format!(
                    "index {n} hit {} times",
                    hits[n]
                )));
            }
        }
        Ok(Verdict::verified())
    }
}

/// Exhaustively enumerate witness pairs `C: N x M`, `D: M x N` with entries
/// in `0..=entry_bound` satisfying `C D = A` and `D C = B`, in lexicographic
/// order of the entry vectors (C first, row-major).
pub fn search_elementary<T: Scalar>(
    a: &TransitionMatrix<T>,
    b: &TransitionMatrix<T>,
    entry_bound: u64,
    max_candidates: u128,
) -> Result<Vec<ElementaryEquivalence<T>>> {
    let n = a.dim();
    let m = b.dim();
    let cells = 2 * n * m;
    let base = entry_bound as u128 + 1;
    let mut candidates: u128 = 1;
    for _ in 0..cells {
        candidates = candidates.checked_mul(base).unwrap_or(u128::MAX);
        if candidates > max_candidates {
            return Err(Error::SearchSpaceTooLarge {
                candidates,
                cap: max_candidates,
            });
        }
    }

    let bound = T::from_i64(entry_bound as i64);
    let mut results = Vec::new();
    let mut c = IntMatrix::<T>::zeros(n, m);
    loop {
        let mut d = IntMatrix::<T>::zeros(m, n);
        loop {
            let cd = c.checked_mul(&d)?;
            if cd == *a.matrix() {
                let dc = d.checked_mul(&c)?;
                if dc == *b.matrix() {
                    results.push(ElementaryEquivalence {
                        a: a.clone(),
                        b: b.clone(),
                        c: c.clone(),
                        d: d.clone(),
                    });
                }
            }
            if !odometer_step(&mut d, &bound) {
                break;
            }
        }
        if !odometer_step(&mut c, &bound) {
            break;
        }
    }
    Ok(results)
}

/// Advance a matrix through 0..=bound entry vectors in lexicographic order;
/// false once the last vector wraps around.
fn odometer_step<T: Scalar>(m: &mut IntMatrix<T>, bound: &T) -> bool {
    let (rows, cols) = (m.rows(), m.cols());
    for idx in (0..rows * cols).rev() {
        let pos = (idx / cols, idx % cols);
        if m[pos] < *bound {
            m[pos] = m[pos].checked_add(&T::one()).expect("bounded entries");
            return true;
        }
        m[pos] = T::zero();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix<i64> {
        IntMatrix::from_i64_rows(rows)
    }

    fn tm(rows: &[&[i64]]) -> TransitionMatrix<i64> {
        TransitionMatrix::from_i64_rows(rows)
    }

    fn full_shift_witness() -> ElementaryEquivalence<i64> {
        ElementaryEquivalence::from_pair(m(&[&[1, 1]]), m(&[&[1], &[1]])).unwrap()
    }

    fn golden_split_witness() -> ElementaryEquivalence<i64> {
        ElementaryEquivalence::with_endpoints(
            tm(&[&[1, 1], &[1, 0]]),
            tm(&[&[1, 1, 0], &[0, 0, 1], &[1, 1, 0]]),
            m(&[&[1, 1, 0], &[0, 0, 1]]),
            m(&[&[1, 0], &[0, 1], &[1, 0]]),
        )
        .unwrap()
    }

    #[test]
    fn verify_accepts_and_refutes() {
        let v = verify_elementary(
            &tm(&[&[2]]),
            &tm(&[&[1, 1], &[1, 1]]),
            &m(&[&[1, 1]]),
            &m(&[&[1], &[1]]),
        )
        .unwrap();
        assert!(v.is_verified());

        // trace(A) != trace(B) forbids any witness
        let r = verify_elementary(&tm(&[&[2]]), &tm(&[&[3]]), &m(&[&[1]]), &m(&[&[2]])).unwrap();
        assert!(!r.is_verified());
    }

    #[test]
    fn verify_warns_on_weak_hypotheses() {
        let v = verify_elementary(&tm(&[&[1]]), &tm(&[&[1]]), &m(&[&[1]]), &m(&[&[1]])).unwrap();
        assert!(v.is_verified());
        assert!(v.warnings().iter().any(|w| w.contains("permutation")));
    }

    #[test]
    fn chain_verifies_and_reports_failing_step() {
        // [2] -> [[1,1],[1,1]] -> [2] via the symmetric witnesses
        let ws = vec![
            (m(&[&[1, 1]]), m(&[&[1], &[1]])),
            (m(&[&[1], &[1]]), m(&[&[1, 1]])),
        ];
        let v = verify_chain(&ws).unwrap();
        assert!(v.is_verified());

        let forged = vec![
            (m(&[&[1, 1]]), m(&[&[1], &[1]])),
            (m(&[&[3]]), m(&[&[1]])),
        ];
        match verify_chain(&forged).unwrap() {
            Verdict::Refuted { locus } => assert!(locus.starts_with("step 2")),
            _ => panic!("forged chain must refute"),
        }

        assert_eq!(verify_chain::<i64>(&[]), Err(Error::EmptyChain));
    }

    #[test]
    fn forward_matrix_of_round_trip_chain() {
        let ws = vec![
            (m(&[&[1, 1]]), m(&[&[1], &[1]])),
            (m(&[&[1], &[1]]), m(&[&[1, 1]])),
        ];
        let chain = match build_chain(&ws).unwrap() {
            ChainCheck::Verified(c) => c,
            _ => panic!(),
        };
        assert_eq!(chain.forward_matrix().unwrap(), m(&[&[2]]));
        assert_eq!(chain.start().matrix(), &m(&[&[2]]));
        assert_eq!(chain.end().matrix(), &m(&[&[2]]));
    }

    #[test]
    fn pairing_of_full_shift_witness() {
        let p = edge_pairing(&full_shift_witness()).unwrap();
        assert_eq!(p.c_edges.len(), 2);
        assert_eq!(p.d_edges.len(), 2);
        // A-edges: c1 d1 and c2 d2
        assert_eq!(p.a_pairs, vec![(0, 0), (1, 1)]);
        // B-edges: d1 c1, d1 c2, d2 c1, d2 c2
        assert_eq!(p.b_pairs, vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
    }

    #[test]
    fn pairing_counts_match_entry_sums() {
        let p = edge_pairing(&golden_split_witness()).unwrap();
        assert_eq!(p.a_pairs.len(), 3);
        assert_eq!(p.b_pairs.len(), 5);
    }

    #[test]
    fn identity_pair_gives_identity_pairing() {
        let a = tm(&[&[1, 1], &[1, 0]]);
        let ee = ElementaryEquivalence::with_endpoints(
            a.clone(),
            a,
            IntMatrix::identity(2),
            tm(&[&[1, 1], &[1, 0]]).into_matrix(),
        );
        // C = I, D = A: CD = A, DC = A
        let ee = ee.unwrap();
        let p = edge_pairing(&ee).unwrap();
        assert_eq!(p.a_pairs.len(), p.b_pairs.len());
    }

    #[test]
    fn dhat_of_full_shift_witness() {
        let p = edge_pairing(&full_shift_witness()).unwrap();
        let dh: IntMatrix<i64> = dhat(&p);
        assert_eq!(dh, m(&[&[1, 1, 0, 0], &[0, 0, 1, 1]]));
    }

    #[test]
    fn dhat_of_golden_split_witness() {
        let p = edge_pairing(&golden_split_witness()).unwrap();
        let dh: IntMatrix<i64> = dhat(&p);
        assert_eq!(
            dh,
            m(&[
                &[1, 1, 0, 0, 0],
                &[0, 0, 1, 0, 0],
                &[0, 0, 0, 1, 1]
            ])
        );
    }

    #[test]
    fn dhat_identity_witness() {
        let ee =
            ElementaryEquivalence::from_pair(IntMatrix::identity(2), tm(&[&[1, 1], &[1, 0]]).into_matrix())
                .unwrap();
        // with C = I the D-components of A- and B-edges coincide vertexwise
        let p = edge_pairing(&ee).unwrap();
        let dh: IntMatrix<i64> = dhat(&p);
        let row_sums: Vec<i64> = (0..dh.rows()).map(|i| dh.row(i).iter().sum()).collect();
        assert!(row_sums.iter().all(|&s| s >= 1));
    }

    #[test]
    fn dhat_row_sums_follow_shared_d_components() {
        let p = edge_pairing(&golden_split_witness()).unwrap();
        let dh: IntMatrix<i64> = dhat(&p);
        for (i, &(_, d_of_a)) in p.a_pairs.iter().enumerate() {
            let expected = p.b_pairs.iter().filter(|&&(d, _)| d == d_of_a).count() as i64;
            let sum: i64 = dh.row(i).iter().sum();
            assert_eq!(sum, expected);
            assert!(sum >= 1);
        }
    }

    #[test]
    fn cuntz_family_branches() {
        let f = CuntzFamily::new(2).unwrap();
        let odds: Vec<u64> = (1..=4).map(|j| f.apply(1, j).unwrap()).collect();
        let evens: Vec<u64> = (1..=4).map(|j| f.apply(2, j).unwrap()).collect();
        assert_eq!(odds, vec![1, 3, 5, 7]);
        assert_eq!(evens, vec![2, 4, 6, 8]);

        let id = CuntzFamily::new(1).unwrap();
        assert_eq!(id.apply(1, 17).unwrap(), 17);

        let f3 = CuntzFamily::new(3).unwrap();
        let images: Vec<Vec<u64>> = (1..=3)
            .map(|b| (1..=3).map(|j| f3.apply(b, j).unwrap()).collect())
            .collect();
        assert_eq!(images[0], vec![1, 4, 7]);
        assert_eq!(images[1], vec![2, 5, 8]);
        assert_eq!(images[2], vec![3, 6, 9]);
        assert!(f3.verify_partition(9).unwrap().is_verified());

        assert!(matches!(
            f3.apply(4, 1),
            Err(Error::BranchOutOfRange { .. })
        ));
    }

    #[test]
    fn search_finds_the_full_shift_witness() {
        let found = search_elementary(
            &tm(&[&[2]]),
            &tm(&[&[1, 1], &[1, 1]]),
            1,
            1 << 20,
        )
        .unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].c(), &m(&[&[1, 1]]));
        assert_eq!(found[0].d(), &m(&[&[1], &[1]]));
    }

    #[test]
    fn search_respects_trace_obstruction_and_caps() {
        let none = search_elementary(&tm(&[&[2]]), &tm(&[&[3]]), 2, 1 << 20).unwrap();
        assert!(none.is_empty());

        let trivial = search_elementary(&tm(&[&[1]]), &tm(&[&[1]]), 1, 1 << 20).unwrap();
        assert_eq!(trivial.len(), 1);
        assert_eq!(trivial[0].c(), &m(&[&[1]]));

        assert!(matches!(
            search_elementary(&tm(&[&[2]]), &tm(&[&[1, 1], &[1, 1]]), 3, 10),
            Err(Error::SearchSpaceTooLarge { .. })
        ));
    }

    #[test]
    fn trace_invariance_over_verified_witnesses() {
        for ee in [full_shift_witness(), golden_split_witness()] {
            assert_eq!(
                ee.a().trace_sequence(12).unwrap(),
                ee.b().trace_sequence(12).unwrap()
            );
        }
    }
}
