//! State splitting of directed multigraphs by edge partitions.
//!
//! An out-split divides each vertex according to a partition of its
//! out-edges; an in-split uses in-edges. Either way the original matrix
//! factors as `A = C D` with the split matrix equal to `D C`, so each split
//! is a single elementary equivalence. Amalgamation is the inverse rewrite.
//!
//! Conventions, fixed once so every output is deterministic:
//! new vertices are ordered by (old vertex, block index); partition blocks
//! are ordered by least contained edge id; parallel new edges take their
//! copy indices from the old-edge id order.

use crate::error::{Error, Result};
use crate::graph::{from_matrix, to_matrix, transpose_graph, DirectedMultigraph, EdgeId, TransitionMatrix};
use crate::matrix::IntMatrix;
use crate::scalar::Scalar;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SplitKind {
    Out,
    In,
}

/// Per-vertex edge blocks, normalized: each block internally sorted, blocks
/// ordered by least contained edge id. `user_positions[v][b]` remembers
/// where normalized block `b` stood in the caller's input.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VertexBlocks {
    blocks: Vec<Vec<Vec<EdgeId>>>,
    user_positions: Vec<Vec<usize>>,
}

impl VertexBlocks {
    fn normalize(
        g: &DirectedMultigraph,
        raw: Vec<Vec<Vec<EdgeId>>>,
        edge_set_of: impl Fn(usize) -> Vec<EdgeId>,
        what: &str,
    ) -> Result<Self> {
        if raw.len() != g.num_vertices() {
            return Err(Error::InvalidPartition(format!(
                "expected blocks for {} vertices, got {}",
                g.num_vertices(),
                raw.len()
            )));
        }
        let mut blocks = Vec::with_capacity(raw.len());
        let mut user_positions = Vec::with_capacity(raw.len());
        for (v, vertex_blocks) in raw.into_iter().enumerate() {
            let domain = edge_set_of(v);
            if domain.is_empty() {
                // A vertex without edges on this side carries the single
                // empty block, so the trivial partition exists on any graph.
                if !(vertex_blocks.len() == 1 && vertex_blocks[0].is_empty()) {
                    return Err(Error::InvalidPartition(format!(
                        "vertex {} has no {} but was given nonempty blocks",
                        v + 1,
                        what
                    )));
                }
                blocks.push(vec![vec![]]);
                user_positions.push(vec![0]);
                continue;
            }
            if vertex_blocks.is_empty() {
                return Err(Error::InvalidPartition(format!(
                    "vertex {} has no blocks",
                    v + 1
                )));
            }
            let mut seen = std::collections::BTreeSet::new();
            let mut sorted_blocks = Vec::with_capacity(vertex_blocks.len());
            for (pos, block) in vertex_blocks.into_iter().enumerate() {
                if block.is_empty() {
                    return Err(Error::InvalidPartition(format!(
                        "vertex {} has an empty block",
                        v + 1
                    )));
                }
                let mut block = block;
                block.sort_unstable();
                block.dedup();
                for &e in &block {
                    if !domain.contains(&e) {
                        return Err(Error::InvalidPartition(format!(
                            "edge {} is not an {} of vertex {}",
                            g.edge(e).label(),
                            what,
                            v + 1
                        )));
                    }
                    if !seen.insert(e) {
                        return Err(Error::InvalidPartition(format!(
                            "edge {} appears in two blocks",
                            g.edge(e).label()
                        )));
                    }
                }
                sorted_blocks.push((block, pos));
            }
            if seen.len() != domain.len() {
                let missing = domain.iter().find(|e| !seen.contains(e)).unwrap();
                return Err(Error::InvalidPartition(format!(
                    "edge {} of vertex {} is not covered",
                    g.edge(*missing).label(),
                    v + 1
                )));
            }
            sorted_blocks.sort_by_key(|(block, _)| block[0]);
            let positions = sorted_blocks.iter().map(|(_, pos)| *pos).collect();
            blocks.push(sorted_blocks.into_iter().map(|(block, _)| block).collect());
            user_positions.push(positions);
        }
        Ok(VertexBlocks {
            blocks,
            user_positions,
        })
    }

    fn trivial(g: &DirectedMultigraph, edge_set_of: impl Fn(usize) -> Vec<EdgeId>) -> Self {
        let blocks: Vec<Vec<Vec<EdgeId>>> =
            (0..g.num_vertices()).map(|v| vec![edge_set_of(v)]).collect();
        let user_positions = blocks.iter().map(|b| (0..b.len()).collect()).collect();
        VertexBlocks {
            blocks,
            user_positions,
        }
    }

    pub fn num_blocks(&self, vertex: usize) -> usize {
        self.blocks[vertex].len()
    }

    pub fn blocks(&self, vertex: usize) -> &[Vec<EdgeId>] {
        &self.blocks[vertex]
    }

    pub fn user_positions(&self, vertex: usize) -> &[usize] {
        &self.user_positions[vertex]
    }

    /// Block index holding `edge` at `vertex`.
    pub fn block_of(&self, vertex: usize, edge: EdgeId) -> Option<usize> {
        self.blocks[vertex]
            .iter()
            .position(|b| b.binary_search(&edge).is_ok())
    }

    fn total_blocks(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }
}

/// Partition of every vertex's out-edge set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OutPartition(pub(crate) VertexBlocks);

impl OutPartition {
    pub fn new(g: &DirectedMultigraph, raw: Vec<Vec<Vec<EdgeId>>>) -> Result<Self> {
        VertexBlocks::normalize(g, raw, |v| g.out_edges(v), "out-edge").map(OutPartition)
    }

    /// One block per vertex.
    pub fn trivial(g: &DirectedMultigraph) -> Self {
        OutPartition(VertexBlocks::trivial(g, |v| g.out_edges(v)))
    }

    /// One singleton block per edge (the complete out-split).
    pub fn singletons(g: &DirectedMultigraph) -> Self {
        let raw = (0..g.num_vertices())
            .map(|v| g.out_edges(v).into_iter().map(|e| vec![e]).collect())
            .collect();
        Self::new(g, raw).expect("singleton blocks form a partition")
    }

    pub fn inner(&self) -> &VertexBlocks {
        &self.0
    }
}

/// Partition of every vertex's in-edge set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InPartition(pub(crate) VertexBlocks);

impl InPartition {
    pub fn new(g: &DirectedMultigraph, raw: Vec<Vec<Vec<EdgeId>>>) -> Result<Self> {
        VertexBlocks::normalize(g, raw, |v| g.in_edges(v), "in-edge").map(InPartition)
    }

    pub fn trivial(g: &DirectedMultigraph) -> Self {
        InPartition(VertexBlocks::trivial(g, |v| g.in_edges(v)))
    }

    pub fn inner(&self) -> &VertexBlocks {
        &self.0
    }

    /// View this in-partition as an out-partition of the transposed graph.
    pub fn transposed(&self, g: &DirectedMultigraph) -> (DirectedMultigraph, OutPartition) {
        let (gt, bij) = transpose_graph(g);
        let raw = self
            .0
            .blocks
            .iter()
            .map(|vblocks| {
                vblocks
                    .iter()
                    .map(|block| block.iter().map(|&e| bij[e]).collect())
                    .collect()
            })
            .collect();
        let p = OutPartition::new(&gt, raw).expect("transposed blocks partition the out-edges");
        (gt, p)
    }
}

/// Full output of one splitting: the split matrix, the companion pair
/// `(C, D)` with `C D` the original and `D C` the split matrix, the bipartite
/// companion `[[0, C], [D, 0]]`, and the relabeling data.
#[derive(Clone, Debug)]
pub struct SplitResult<T> {
    pub kind: SplitKind,
    pub original: TransitionMatrix<T>,
    pub split_matrix: TransitionMatrix<T>,
    pub c: IntMatrix<T>,
    pub d: IntMatrix<T>,
    pub bipartite: TransitionMatrix<T>,
    /// New vertex index -> (old vertex, block index), both 0-based.
    pub vertex_map: Vec<(usize, usize)>,
    /// New edge id (canonical order of the split graph) -> (old edge id,
    /// copy sub/superscript, 0-based).
    pub edge_map: Vec<(EdgeId, usize)>,
    /// The normalized partition the split was built from.
    pub partition: VertexBlocks,
}

impl<T: Scalar> SplitResult<T> {
    pub fn split_graph(&self) -> DirectedMultigraph {
        from_matrix(&self.split_matrix).expect("split matrix entries are small counts")
    }

    fn verify(&self) -> Result<()> {
        let cd = self.c.checked_mul(&self.d)?;
        if cd != *self.original.matrix() {
            return Err(Error::DimensionMismatch(
                "split companion product C*D differs from the original matrix".into(),
            ));
        }
        let dc = self.d.checked_mul(&self.c)?;
        if dc != *self.split_matrix.matrix() {
            return Err(Error::DimensionMismatch(
                "split companion product D*C differs from the split matrix".into(),
            ));
        }
        let z = IntMatrix::bipartite_block(&self.c, &self.d)?;
        if z != *self.bipartite.matrix() {
            return Err(Error::DimensionMismatch(
                "bipartite companion does not match [[0,C],[D,0]]".into(),
            ));
        }
        Ok(())
    }
}

fn count_to_scalar<T: Scalar>(count: usize) -> Result<T> {
    i64::try_from(count)
        .map(T::from_i64)
        .map_err(|_| Error::Overflow)
}

/// New-vertex offsets for a block structure: vertex `(v, b)` gets index
/// `offsets[v] + b`.
fn vertex_offsets(p: &VertexBlocks) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(p.blocks.len());
    let mut acc = 0;
    for vblocks in &p.blocks {
        offsets.push(acc);
        acc += vblocks.len();
    }
    offsets
}

/// Out-split `g` by a partition of its out-edge sets.
///
/// Each old edge `e` in block `i` of its source `I` with target `J` becomes
/// `m(J)` new edges, one into every block-vertex of `J`, all leaving `I^i`.
pub fn out_split<T: Scalar>(g: &DirectedMultigraph, p: &OutPartition) -> Result<SplitResult<T>> {
    let p = &p.0;
    let n = g.num_vertices();
    let n_split = p.total_blocks();
    let offsets = vertex_offsets(p);

    let original: TransitionMatrix<T> = to_matrix(g);

    // D counts block edges by target; C marks which block-vertices refine
    // which old vertex.
    let mut c = IntMatrix::zeros(n, n_split);
    let mut d = IntMatrix::zeros(n_split, n);
    let mut vertex_map = Vec::with_capacity(n_split);
    for v in 0..n {
        for (b, block) in p.blocks(v).iter().enumerate() {
            let new_v = offsets[v] + b;
            vertex_map.push((v, b));
            c[(v, new_v)] = T::one();
            for j in 0..n {
                let cnt = block.iter().filter(|&&e| g.edge(e).target == j).count();
                d[(new_v, j)] = count_to_scalar(cnt)?;
            }
        }
    }

    let split_matrix = TransitionMatrix::new(d.checked_mul(&c)?)?;

    // Canonical edge map of the split graph: parallel new edges inherit the
    // id order of the old edges they came from.
    let mut edge_map = Vec::new();
    for v in 0..n {
        for (b, block) in p.blocks(v).iter().enumerate() {
            for w in 0..n {
                let sources: Vec<EdgeId> = block
                    .iter()
                    .copied()
                    .filter(|&e| g.edge(e).target == w)
                    .collect();
                for superscript in 0..p.num_blocks(w) {
                    for &old in &sources {
                        edge_map.push((offsets[v] + b, offsets[w] + superscript, old));
                    }
                }
            }
        }
    }
    edge_map.sort_by_key(|&(s, t, old)| (s, t, old));
    let edge_map: Vec<(EdgeId, usize)> = edge_map
        .into_iter()
        .map(|(_, t, old)| {
            let block_sub = vertex_map[t].1;
            (old, block_sub)
        })
        .collect();

    let result = SplitResult {
        kind: SplitKind::Out,
        bipartite: TransitionMatrix::new(IntMatrix::bipartite_block(&c, &d)?)?,
        original,
        split_matrix,
        c,
        d,
        vertex_map,
        edge_map,
        partition: p.clone(),
    };
    result.verify()?;
    Ok(result)
}

/// In-split `g` by a partition of its in-edge sets.
///
/// Each old edge `e` in block `j` of its target `J` with source `I` becomes
/// `m(I)` new edges, one out of every block-vertex of `I`, all entering
/// `J_j`. Here `C` counts block edges by source and `D` marks refinement,
/// mirroring the out-split companions so that `C D` is again the original
/// matrix and `D C` the split one.
pub fn in_split<T: Scalar>(g: &DirectedMultigraph, p: &InPartition) -> Result<SplitResult<T>> {
    let p = &p.0;
    let n = g.num_vertices();
    let n_split = p.total_blocks();
    let offsets = vertex_offsets(p);

    let original: TransitionMatrix<T> = to_matrix(g);

    let mut c = IntMatrix::zeros(n, n_split);
    let mut d = IntMatrix::zeros(n_split, n);
    let mut vertex_map = Vec::with_capacity(n_split);
    for v in 0..n {
        for (b, block) in p.blocks(v).iter().enumerate() {
            let new_v = offsets[v] + b;
            vertex_map.push((v, b));
            d[(new_v, v)] = T::one();
            for i in 0..n {
                let cnt = block.iter().filter(|&&e| g.edge(e).source == i).count();
                c[(i, new_v)] = count_to_scalar(cnt)?;
            }
        }
    }

    let split_matrix = TransitionMatrix::new(d.checked_mul(&c)?)?;

    let mut edge_map = Vec::new();
    for w in 0..n {
        for (bw, block) in p.blocks(w).iter().enumerate() {
            for v in 0..n {
                let sources: Vec<EdgeId> = block
                    .iter()
                    .copied()
                    .filter(|&e| g.edge(e).source == v)
                    .collect();
                for subscript in 0..p.num_blocks(v) {
                    for &old in &sources {
                        edge_map.push((offsets[v] + subscript, offsets[w] + bw, old));
                    }
                }
            }
        }
    }
    edge_map.sort_by_key(|&(s, t, old)| (s, t, old));
    let edge_map: Vec<(EdgeId, usize)> = edge_map
        .into_iter()
        .map(|(s, _, old)| {
            let block_sub = vertex_map[s].1;
            (old, block_sub)
        })
        .collect();

    let result = SplitResult {
        kind: SplitKind::In,
        bipartite: TransitionMatrix::new(IntMatrix::bipartite_block(&c, &d)?)?,
        original,
        split_matrix,
        c,
        d,
        vertex_map,
        edge_map,
        partition: p.clone(),
    };
    result.verify()?;
    Ok(result)
}

/// All maximal sets (of size >= 2) of vertices with identical in-edge
/// columns, in increasing lexicographic order. Merging any returned set is a
/// valid out-amalgamation.
pub fn find_out_amalgamations<T: Scalar>(a: &TransitionMatrix<T>) -> Result<Vec<Vec<usize>>> {
    if let Some(v) = a.stranded_vertex() {
        return Err(Error::ZeroRowOrColumn(v + 1));
    }
    let n = a.dim();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut assigned = vec![false; n];
    for j in 0..n {
        if assigned[j] {
            continue;
        }
        let col = a.matrix().col_vec(j);
        let mut group = vec![j];
        for k in j + 1..n {
            if !assigned[k] && a.matrix().col_vec(k) == col {
                group.push(k);
                assigned[k] = true;
            }
        }
        assigned[j] = true;
        if group.len() >= 2 {
            groups.push(group);
        }
    }
    groups.sort();
    Ok(groups)
}

/// Result of merging one amalgamable vertex set: the merged graph, the
/// out-partition that splits it back, and the round-trip witness.
#[derive(Clone, Debug)]
pub struct Amalgamation<T> {
    pub merged_matrix: TransitionMatrix<T>,
    pub merged_graph: DirectedMultigraph,
    pub partition: OutPartition,
    /// Split-vertex index -> vertex of the input graph; under this
    /// relabeling `round_trip.split_matrix` equals the input matrix.
    pub relabeling: Vec<usize>,
    pub round_trip: SplitResult<T>,
}

/// Merge `merge_set` (0-based vertex indices with identical columns) into
/// one vertex placed at the position of its smallest member. The recovered
/// out-partition groups the merged vertex's out-edges by originating member.
pub fn out_amalgamate<T: Scalar>(
    g: &DirectedMultigraph,
    merge_set: &[usize],
) -> Result<Amalgamation<T>> {
    let a: TransitionMatrix<T> = to_matrix(g);
    let n = a.dim();
    let mut merge: Vec<usize> = merge_set.to_vec();
    merge.sort_unstable();
    merge.dedup();
    if merge.is_empty() || merge.iter().any(|&v| v >= n) {
        return Err(Error::NotAmalgamable(merge_set.to_vec()));
    }
    let base = a.matrix().col_vec(merge[0]);
    if merge.iter().any(|&v| a.matrix().col_vec(v) != base) {
        return Err(Error::NotAmalgamable(
            merge.iter().map(|v| v + 1).collect(),
        ));
    }

    // Groups in ascending order of their smallest member; only one group is
    // nontrivial here, the rest are singletons.
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        if merge.contains(&v) {
            if v == merge[0] {
                groups.push(merge.clone());
            }
        } else {
            groups.push(vec![v]);
        }
    }
    let n_merged = groups.len();

    let mut merged = IntMatrix::zeros(n_merged, n_merged);
    for (x, gx) in groups.iter().enumerate() {
        for (y, gy) in groups.iter().enumerate() {
            let rep = gy[0];
            let mut acc = T::zero();
            for &w in gx {
                acc = acc
                    .checked_add(&a.matrix()[(w, rep)])
                    .ok_or(Error::Overflow)?;
            }
            merged[(x, y)] = acc;
        }
    }
    let merged_matrix = TransitionMatrix::new(merged)?;
    let merged_graph = from_matrix(&merged_matrix)?;

    // Out-edges of a merged vertex, grouped by which member they came from:
    // parallel merged edges (x -> y) are ordered member-first, copy-second.
    let mut raw_blocks: Vec<Vec<Vec<EdgeId>>> = Vec::with_capacity(n_merged);
    for (x, gx) in groups.iter().enumerate() {
        let mut blocks: Vec<Vec<EdgeId>> = vec![Vec::new(); gx.len()];
        for (y, gy) in groups.iter().enumerate() {
            let rep = gy[0];
            let mut copy = 0usize;
            for (member_idx, &w) in gx.iter().enumerate() {
                let cnt = a.matrix()[(w, rep)].to_count().ok_or(Error::Overflow)?;
                for _ in 0..cnt {
                    let id = merged_graph
                        .find_edge(x, y, copy)
                        .expect("merged edge exists by construction");
                    blocks[member_idx].push(id);
                    copy += 1;
                }
            }
        }
        blocks.retain(|b| !b.is_empty());
        if blocks.is_empty() {
            blocks.push(Vec::new());
        }
        raw_blocks.push(blocks);
    }
    let partition = OutPartition::new(&merged_graph, raw_blocks)?;

    let round_trip: SplitResult<T> = out_split(&merged_graph, &partition)?;

    // Split vertex (x, i) corresponds to the i-th member of group x whose
    // out-edge set is nonempty; for essential inputs that is just member i.
    let mut relabeling = Vec::with_capacity(round_trip.vertex_map.len());
    for &(x, b) in &round_trip.vertex_map {
        let members_with_edges: Vec<usize> = groups[x]
            .iter()
            .copied()
            .filter(|&w| (0..n).any(|j| !a.matrix()[(w, j)].is_zero()))
            .collect();
        let member = if members_with_edges.is_empty() {
            groups[x][b]
        } else {
            members_with_edges[b]
        };
        relabeling.push(member);
    }

    let recovered = &round_trip.split_matrix;
    if recovered.dim() == n {
        for x in 0..n {
            for y in 0..n {
                if recovered.matrix()[(x, y)] != a.matrix()[(relabeling[x], relabeling[y])] {
                    return Err(Error::NotAmalgamable(
                        merge.iter().map(|v| v + 1).collect(),
                    ));
                }
            }
        }
    } else {
        return Err(Error::NotAmalgamable(
            merge.iter().map(|v| v + 1).collect(),
        ));
    }

    Ok(Amalgamation {
        merged_matrix,
        merged_graph,
        partition,
        relabeling,
        round_trip,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph_of(rows: &[&[i64]]) -> DirectedMultigraph {
        from_matrix(&TransitionMatrix::<i64>::from_i64_rows(rows)).unwrap()
    }

    fn m(rows: &[&[i64]]) -> IntMatrix<i64> {
        IntMatrix::from_i64_rows(rows)
    }

    #[test]
    fn out_split_golden_mean() {
        // edges: 0 = 1->1#1 (a), 1 = 1->2#1 (b), 2 = 2->1#1 (c)
        let g = graph_of(&[&[1, 1], &[1, 0]]);
        let p = OutPartition::new(&g, vec![vec![vec![0], vec![1]], vec![vec![2]]]).unwrap();
        let sr: SplitResult<i64> = out_split(&g, &p).unwrap();
        assert_eq!(
            sr.split_matrix.matrix(),
            &m(&[&[1, 1, 0], &[0, 0, 1], &[1, 1, 0]])
        );
        assert_eq!(sr.c, m(&[&[1, 1, 0], &[0, 0, 1]]));
        assert_eq!(sr.d, m(&[&[1, 0], &[0, 1], &[1, 0]]));
        assert_eq!(sr.vertex_map, vec![(0, 0), (0, 1), (1, 0)]);
        assert_eq!(
            sr.bipartite.matrix(),
            &m(&[
                &[0, 0, 1, 1, 0],
                &[0, 0, 0, 0, 1],
                &[1, 0, 0, 0, 0],
                &[0, 1, 0, 0, 0],
                &[1, 0, 0, 0, 0]
            ])
        );
    }

    #[test]
    fn out_split_full_shift_two() {
        let g = graph_of(&[&[2]]);
        let p = OutPartition::new(&g, vec![vec![vec![0], vec![1]]]).unwrap();
        let sr: SplitResult<i64> = out_split(&g, &p).unwrap();
        assert_eq!(sr.split_matrix.matrix(), &m(&[&[1, 1], &[1, 1]]));
        assert_eq!(sr.c, m(&[&[1, 1]]));
        assert_eq!(sr.d, m(&[&[1], &[1]]));
    }

    #[test]
    fn trivial_out_split_is_identity() {
        for rows in [
            vec![vec![1i64, 1], vec![1, 0]],
            vec![vec![2i64]],
            vec![vec![1i64, 2], vec![2, 1]],
        ] {
            let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
            let g = graph_of(&refs);
            let p = OutPartition::trivial(&g);
            let sr: SplitResult<i64> = out_split(&g, &p).unwrap();
            assert_eq!(sr.split_matrix, to_matrix::<i64>(&g));
            assert_eq!(sr.c, IntMatrix::identity(g.num_vertices()));
            assert_eq!(sr.d, *to_matrix::<i64>(&g).matrix());
        }
    }

    #[test]
    fn trivial_in_split_is_identity() {
        let g = graph_of(&[&[2]]);
        let p = InPartition::trivial(&g);
        let sr: SplitResult<i64> = in_split(&g, &p).unwrap();
        assert_eq!(sr.split_matrix.matrix(), &m(&[&[2]]));
        assert_eq!(sr.c, m(&[&[2]]));
        assert_eq!(sr.d, m(&[&[1]]));
    }

    #[test]
    fn in_split_full_shift_two() {
        let g = graph_of(&[&[2]]);
        let p = InPartition::new(&g, vec![vec![vec![0], vec![1]]]).unwrap();
        let sr: SplitResult<i64> = in_split(&g, &p).unwrap();
        assert_eq!(sr.split_matrix.matrix(), &m(&[&[1, 1], &[1, 1]]));
    }

    #[test]
    fn in_split_golden_mean_by_hand() {
        // in-edges of vertex 1: {a=0, c=2}; of vertex 2: {b=1};
        // partition E^1 = {a} | {c}, E^2 = {b}
        let g = graph_of(&[&[1, 1], &[1, 0]]);
        let p = InPartition::new(&g, vec![vec![vec![0], vec![2]], vec![vec![1]]]).unwrap();
        let sr: SplitResult<i64> = in_split(&g, &p).unwrap();
        assert_eq!(
            sr.split_matrix.matrix(),
            &m(&[&[1, 0, 1], &[1, 0, 1], &[0, 1, 0]])
        );
        assert_eq!(sr.c, m(&[&[1, 0, 1], &[0, 1, 0]]));
        assert_eq!(sr.d, m(&[&[1, 0], &[1, 0], &[0, 1]]));
    }

    #[test]
    fn in_split_is_transposed_out_split() {
        let g = graph_of(&[&[1, 1], &[1, 0]]);
        let p = InPartition::new(&g, vec![vec![vec![0], vec![2]], vec![vec![1]]]).unwrap();
        let in_sr: SplitResult<i64> = in_split(&g, &p).unwrap();

        let (gt, pt) = p.transposed(&g);
        let out_sr: SplitResult<i64> = out_split(&gt, &pt).unwrap();
        assert_eq!(in_sr.split_matrix, out_sr.split_matrix.transpose());
        assert_eq!(in_sr.c, out_sr.d.transpose());
        assert_eq!(in_sr.d, out_sr.c.transpose());
    }

    #[test]
    fn invalid_partitions_are_rejected() {
        let g = graph_of(&[&[1, 1], &[1, 0]]);
        // overlapping
        assert!(matches!(
            OutPartition::new(&g, vec![vec![vec![0], vec![0, 1]], vec![vec![2]]]),
            Err(Error::InvalidPartition(_))
        ));
        // non-exhaustive
        assert!(matches!(
            OutPartition::new(&g, vec![vec![vec![0]], vec![vec![2]]]),
            Err(Error::InvalidPartition(_))
        ));
        // empty block
        assert!(matches!(
            OutPartition::new(&g, vec![vec![vec![0, 1], vec![]], vec![vec![2]]]),
            Err(Error::InvalidPartition(_))
        ));
        // wrong side
        assert!(matches!(
            OutPartition::new(&g, vec![vec![vec![0, 2]], vec![vec![1]]]),
            Err(Error::InvalidPartition(_))
        ));
    }

    #[test]
    fn block_order_is_normalized_with_recorded_positions() {
        let g = graph_of(&[&[1, 1], &[1, 0]]);
        let p = OutPartition::new(&g, vec![vec![vec![1], vec![0]], vec![vec![2]]]).unwrap();
        assert_eq!(p.inner().blocks(0), &[vec![0], vec![1]]);
        assert_eq!(p.inner().user_positions(0), &[1, 0]);
        assert_eq!(p.inner().block_of(0, 1), Some(1));
        assert_eq!(p.inner().block_of(1, 2), Some(0));
        assert_eq!(p.inner().block_of(1, 0), None);
    }

    #[test]
    fn amalgamation_candidates() {
        let split = TransitionMatrix::<i64>::from_i64_rows(&[&[1, 1, 0], &[0, 0, 1], &[1, 1, 0]]);
        assert_eq!(find_out_amalgamations(&split).unwrap(), vec![vec![0, 1]]);

        let gm = TransitionMatrix::<i64>::from_i64_rows(&[&[1, 1], &[1, 0]]);
        assert!(find_out_amalgamations(&gm).unwrap().is_empty());

        let full = TransitionMatrix::<i64>::from_i64_rows(&[&[1, 1], &[1, 1]]);
        assert_eq!(find_out_amalgamations(&full).unwrap(), vec![vec![0, 1]]);
    }

    #[test]
    fn amalgamate_recovers_golden_mean() {
        let g = graph_of(&[&[1, 1, 0], &[0, 0, 1], &[1, 1, 0]]);
        let am: Amalgamation<i64> = out_amalgamate(&g, &[0, 1]).unwrap();
        assert_eq!(am.merged_matrix.matrix(), &m(&[&[1, 1], &[1, 0]]));
        // recovered partition is exactly the golden-mean split partition
        assert_eq!(am.partition.inner().blocks(0), &[vec![0], vec![1]]);
        assert_eq!(am.partition.inner().blocks(1), &[vec![2]]);
        assert_eq!(am.relabeling, vec![0, 1, 2]);
    }

    #[test]
    fn amalgamate_full_shift() {
        let g = graph_of(&[&[1, 1], &[1, 1]]);
        let am: Amalgamation<i64> = out_amalgamate(&g, &[0, 1]).unwrap();
        assert_eq!(am.merged_matrix.matrix(), &m(&[&[2]]));
    }

    #[test]
    fn amalgamate_singleton_is_identity() {
        let g = graph_of(&[&[1, 1], &[1, 0]]);
        let am: Amalgamation<i64> = out_amalgamate(&g, &[0]).unwrap();
        assert_eq!(am.merged_matrix, to_matrix::<i64>(&g));
        assert_eq!(am.relabeling, vec![0, 1]);
    }

    #[test]
    fn amalgamate_rejects_unequal_columns() {
        let g = graph_of(&[&[1, 1], &[1, 0]]);
        assert!(matches!(
            out_amalgamate::<i64>(&g, &[0, 1]),
            Err(Error::NotAmalgamable(_))
        ));
    }

    #[test]
    fn split_preserves_irreducibility_and_edge_count() {
        let g = graph_of(&[&[1, 1], &[1, 0]]);
        let p = OutPartition::new(&g, vec![vec![vec![0], vec![1]], vec![vec![2]]]).unwrap();
        let sr: SplitResult<i64> = out_split(&g, &p).unwrap();
        assert!(sr.split_matrix.is_irreducible());
        // |E^[P]| = sum over old edges of m(t(e))
        let expected: usize = g
            .edges()
            .iter()
            .map(|e| p.inner().num_blocks(e.target))
            .sum();
        let total: i64 = sr.split_matrix.matrix().entries().sum();
        assert_eq!(total, expected as i64);
        assert_eq!(sr.edge_map.len(), expected);
    }
}
