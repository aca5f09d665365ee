//! Finite-depth combinatorics of the one-sided shifts: allowed words,
//! periodic-point counts, cylinder functions, and the transfer maps of an
//! elementary equivalence.
//!
//! Words are sequences of edges of the multigraph, composable end to end.
//! A cylinder function of depth `k` assigns an integer to every allowed
//! `k`-word; depth 0 is a constant. The transfer maps `phi` and `psi` of a
//! witness raise depth by one and are realized on words through the edge
//! pairing: a word on one side is slid half a step through the bipartite
//! graph to read off a word on the other side. Their defining law
//! `psi(phi(f)) = f . shift` is checked exhaustively in the tests rather
//! than assumed.

use crate::error::{Error, Result};
use crate::graph::{DirectedMultigraph, EdgeId, TransitionMatrix};
use crate::scalar::Scalar;
use crate::sse::EdgePairing;
use std::collections::BTreeMap;

/// All composable edge sequences of length `k`, in lexicographic edge-id
/// order. `k = 0` gives the empty word.
pub fn allowed_words(
    g: &DirectedMultigraph,
    k: usize,
    cap: u128,
) -> Result<Vec<Vec<EdgeId>>> {
    let count = count_words(g, k);
    if count > cap {
        return Err(Error::ExplosionGuard { count, cap });
    }
    let mut out = Vec::new();
    let mut stack: Vec<EdgeId> = Vec::with_capacity(k);
    extend_words(g, k, &mut stack, &mut out);
    Ok(out)
}

fn extend_words(
    g: &DirectedMultigraph,
    k: usize,
    stack: &mut Vec<EdgeId>,
    out: &mut Vec<Vec<EdgeId>>,
) {
    if stack.len() == k {
        out.push(stack.clone());
        return;
    }
    let candidates: Vec<EdgeId> = match stack.last() {
        None => (0..g.num_edges()).collect(),
        Some(&last) => g.out_edges(g.edge(last).target),
    };
    for e in candidates {
        stack.push(e);
        extend_words(g, k, stack, out);
        stack.pop();
    }
}

/// Number of allowed `k`-words, computed without materializing them.
pub fn count_words(g: &DirectedMultigraph, k: usize) -> u128 {
    if k == 0 {
        return 1;
    }
    // dynamic program over terminal vertices
    let n = g.num_vertices();
    let mut by_target = vec![0u128; n];
    for e in g.edges() {
        by_target[e.target] += 1;
    }
    for _ in 1..k {
        let mut next = vec![0u128; n];
        for e in g.edges() {
            next[e.target] += by_target[e.source];
        }
        by_target = next;
    }
    by_target.iter().sum()
}

/// Number of points of period `n`: the trace of `A^n`, exact.
pub fn periodic_count<T: Scalar>(a: &TransitionMatrix<T>, n: usize) -> Result<T> {
    a.matrix().checked_pow(n)?.trace()
}

/// An integer-valued function on the allowed words of a fixed depth.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CylinderFunction {
    depth: usize,
    values: BTreeMap<Vec<EdgeId>, i64>,
}

impl CylinderFunction {
    /// Total function from explicit values; every allowed word of the depth
    /// must be present and nothing else.
    pub fn new(
        g: &DirectedMultigraph,
        depth: usize,
        values: BTreeMap<Vec<EdgeId>, i64>,
        cap: u128,
    ) -> Result<Self> {
        let words = allowed_words(g, depth, cap)?;
        if words.len() != values.len() || words.iter().any(|w| !values.contains_key(w)) {
            return Err(Error::Parse(format!(
                "cylinder function of depth {depth} is not total on the allowed words"
            )));
        }
        Ok(CylinderFunction { depth, values })
    }

    pub fn constant(value: i64) -> Self {
        let mut values = BTreeMap::new();
        values.insert(Vec::new(), value);
        CylinderFunction { depth: 0, values }
    }

    /// Indicator of a single allowed word.
    pub fn indicator(g: &DirectedMultigraph, word: &[EdgeId], cap: u128) -> Result<Self> {
        let mut values = BTreeMap::new();
        for w in allowed_words(g, word.len(), cap)? {
            values.insert(w, 0);
        }
        if values.insert(word.to_vec(), 1) != Some(0) {
            return Err(Error::Parse("indicator word is not allowed".into()));
        }
        Ok(CylinderFunction {
            depth: word.len(),
            values,
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn values(&self) -> &BTreeMap<Vec<EdgeId>, i64> {
        &self.values
    }

    /// Value on the length-`depth` prefix of `word`.
    pub fn eval_prefix(&self, word: &[EdgeId]) -> Result<i64> {
        let prefix = word
            .get(..self.depth)
            .ok_or_else(|| Error::Parse("word shorter than function depth".into()))?;
        self.values
            .get(prefix)
            .copied()
            .ok_or_else(|| Error::Parse("word is not allowed".into()))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.depth != other.depth || self.values.len() != other.values.len() {
            return Err(Error::DimensionMismatch(
                "adding cylinder functions of different depths".into(),
            ));
        }
        let mut values = BTreeMap::new();
        for (w, v) in &self.values {
            let o = other
                .values
                .get(w)
                .ok_or_else(|| Error::Parse("functions live on different graphs".into()))?;
            values.insert(w.clone(), v.checked_add(*o).ok_or(Error::Overflow)?);
        }
        Ok(CylinderFunction {
            depth: self.depth,
            values,
        })
    }

    /// Reinterpret at a greater depth, constant on extensions.
    pub fn lift(&self, g: &DirectedMultigraph, depth: usize, cap: u128) -> Result<Self> {
        if depth < self.depth {
            return Err(Error::DimensionMismatch(
                "cannot lift to a smaller depth".into(),
            ));
        }
        let mut values = BTreeMap::new();
        for w in allowed_words(g, depth, cap)? {
            let v = self.eval_prefix(&w)?;
            values.insert(w, v);
        }
        Ok(CylinderFunction { depth, values })
    }
}

/// `f . shift`: the depth-(k+1) function reading `f` off the tail.
pub fn shift_compose(
    f: &CylinderFunction,
    g: &DirectedMultigraph,
    cap: u128,
) -> Result<CylinderFunction> {
    let depth = f.depth() + 1;
    let mut values = BTreeMap::new();
    for w in allowed_words(g, depth, cap)? {
        let v = f.eval_prefix(&w[1..])?;
        values.insert(w, v);
    }
    CylinderFunction::new(g, depth, values, cap)
}

/// Compare as total functions, lifting the shallower one first.
pub fn functions_equal(
    g: &DirectedMultigraph,
    f1: &CylinderFunction,
    f2: &CylinderFunction,
    cap: u128,
) -> Result<bool> {
    let depth = f1.depth().max(f2.depth());
    let lifted1 = f1.lift(g, depth, cap)?;
    let lifted2 = f2.lift(g, depth, cap)?;
    Ok(lifted1 == lifted2)
}

/// Transfer a cylinder function on the `A`-side to the `B`-side. A `B`-word
/// `b_1 .. b_{k+1}` determines the `A`-word whose `j`-th edge is paired with
/// the path `c(b_j) d(b_{j+1})`; the image function reads `f` there.
pub fn phi_map(
    pairing: &EdgePairing,
    f: &CylinderFunction,
    cap: u128,
) -> Result<CylinderFunction> {
    let depth = f.depth() + 1;
    let mut values = BTreeMap::new();
    for b_word in allowed_words(&pairing.b_graph, depth, cap)? {
        let mut a_word = Vec::with_capacity(f.depth());
        for j in 0..f.depth() {
            let (_, c_j) = pairing.b_pairs[b_word[j]];
            let (d_next, _) = pairing.b_pairs[b_word[j + 1]];
            let a = pairing
                .a_edge_for(c_j, d_next)
                .ok_or(Error::UnpairedPath(c_j, d_next))?;
            a_word.push(a);
        }
        let v = f.eval_prefix(&a_word)?;
        values.insert(b_word, v);
    }
    CylinderFunction::new(&pairing.b_graph, depth, values, cap)
}

/// Transfer a cylinder function on the `B`-side to the `A`-side; mirror of
/// [`phi_map`] with the layers exchanged.
pub fn psi_map(
    pairing: &EdgePairing,
    g_fun: &CylinderFunction,
    cap: u128,
) -> Result<CylinderFunction> {
    let depth = g_fun.depth() + 1;
    let mut values = BTreeMap::new();
    for a_word in allowed_words(&pairing.a_graph, depth, cap)? {
        let mut b_word = Vec::with_capacity(g_fun.depth());
        for j in 0..g_fun.depth() {
            let (_, d_j) = pairing.a_pairs[a_word[j]];
            let (c_next, _) = pairing.a_pairs[a_word[j + 1]];
            let b = pairing
                .b_edge_for(d_j, c_next)
                .ok_or(Error::UnpairedPath(d_j, c_next))?;
            b_word.push(b);
        }
        let v = g_fun.eval_prefix(&b_word)?;
        values.insert(a_word, v);
    }
    CylinderFunction::new(&pairing.a_graph, depth, values, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::from_matrix;
    use crate::matrix::IntMatrix;
    use crate::sse::{edge_pairing, ElementaryEquivalence};

    const CAP: u128 = 1 << 20;

    fn tm(rows: &[&[i64]]) -> TransitionMatrix<i64> {
        TransitionMatrix::from_i64_rows(rows)
    }

    fn golden() -> DirectedMultigraph {
        from_matrix(&tm(&[&[1, 1], &[1, 0]])).unwrap()
    }

    #[test]
    fn allowed_word_counts() {
        let g2 = from_matrix(&tm(&[&[2]])).unwrap();
        assert_eq!(allowed_words(&g2, 2, CAP).unwrap().len(), 4);

        let words = allowed_words(&golden(), 2, CAP).unwrap();
        // aa, ab, bc, ca, cb with a=0, b=1, c=2
        assert_eq!(
            words,
            vec![vec![0, 0], vec![0, 1], vec![1, 2], vec![2, 0], vec![2, 1]]
        );

        assert_eq!(allowed_words(&golden(), 1, CAP).unwrap().len(), 3);
    }

    #[test]
    fn word_count_law() {
        let g = golden();
        for k in 1..6 {
            let words = allowed_words(&g, k, CAP).unwrap();
            assert_eq!(words.len() as u128, count_words(&g, k));
            let expected: usize = words
                .iter()
                .map(|w| g.out_edges(g.edge(*w.last().unwrap()).target).len())
                .sum();
            assert_eq!(allowed_words(&g, k + 1, CAP).unwrap().len(), expected);
        }
    }

    #[test]
    fn explosion_guard_triggers() {
        let g2 = from_matrix(&tm(&[&[2]])).unwrap();
        assert!(matches!(
            allowed_words(&g2, 10, 100),
            Err(Error::ExplosionGuard { .. })
        ));
    }

    #[test]
    fn periodic_counts() {
        assert_eq!(periodic_count(&tm(&[&[2]]), 3).unwrap(), 8);
        assert_eq!(periodic_count(&tm(&[&[1, 1], &[1, 0]]), 5).unwrap(), 11);
        assert_eq!(periodic_count(&tm(&[&[1, 0], &[0, 1]]), 7).unwrap(), 2);
    }

    #[test]
    fn periodic_count_matches_cycle_enumeration() {
        for a in [tm(&[&[1, 1], &[1, 0]]), tm(&[&[2]]), tm(&[&[1, 2], &[1, 1]])] {
            let g = from_matrix(&a).unwrap();
            for n in 1..=6 {
                let closed = allowed_words(&g, n, CAP)
                    .unwrap()
                    .iter()
                    .filter(|w| {
                        g.edge(w[0]).source == g.edge(*w.last().unwrap()).target
                    })
                    .count() as i64;
                assert_eq!(periodic_count(&a, n).unwrap(), closed);
            }
        }
    }

    #[test]
    fn shift_compose_on_indicator() {
        let g = golden();
        let f = CylinderFunction::indicator(&g, &[0], CAP).unwrap();
        let shifted = shift_compose(&f, &g, CAP).unwrap();
        // valued 1 exactly on aa and ca
        let ones: Vec<&Vec<EdgeId>> = shifted
            .values()
            .iter()
            .filter(|(_, &v)| v == 1)
            .map(|(w, _)| w)
            .collect();
        assert_eq!(ones, vec![&vec![0, 0], &vec![2, 0]]);

        let c = CylinderFunction::constant(5);
        let sc = shift_compose(&c, &g, CAP).unwrap();
        assert!(sc.values().values().all(|&v| v == 5));

        // double shift = shift of shift
        let s2a = shift_compose(&shifted, &g, CAP).unwrap();
        let s2b = shift_compose(&shift_compose(&f, &g, CAP).unwrap(), &g, CAP).unwrap();
        assert_eq!(s2a, s2b);
    }

    fn full_shift_pairing() -> EdgePairing {
        let ee = ElementaryEquivalence::with_endpoints(
            tm(&[&[2]]),
            tm(&[&[1, 1], &[1, 1]]),
            IntMatrix::from_i64_rows(&[&[1, 1]]),
            IntMatrix::from_i64_rows(&[&[1], &[1]]),
        )
        .unwrap();
        edge_pairing(&ee).unwrap()
    }

    #[test]
    fn phi_of_constant_is_constant() {
        let p = full_shift_pairing();
        let f = CylinderFunction::constant(1);
        let img = phi_map(&p, &f, CAP).unwrap();
        assert_eq!(img.depth(), 1);
        assert!(img.values().values().all(|&v| v == 1));
    }

    #[test]
    fn phi_is_additive() {
        let p = full_shift_pairing();
        let f1 = CylinderFunction::indicator(&p.a_graph, &[0], CAP).unwrap();
        let f2 = CylinderFunction::indicator(&p.a_graph, &[1], CAP).unwrap();
        let lhs = phi_map(&p, &f1.checked_add(&f2).unwrap(), CAP).unwrap();
        let rhs = phi_map(&p, &f1, CAP)
            .unwrap()
            .checked_add(&phi_map(&p, &f2, CAP).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn transfer_law_exhaustive_small() {
        // psi(phi(f)) = f . shift and phi(psi(g)) = g . shift for every
        // 0/1-valued function of depth <= 2 on the full-shift witness
        let p = full_shift_pairing();
        for depth in 0..=2 {
            let a_words = allowed_words(&p.a_graph, depth, CAP).unwrap();
            for mask in 0u32..(1 << a_words.len()) {
                let mut values = BTreeMap::new();
                for (i, w) in a_words.iter().enumerate() {
                    values.insert(w.clone(), ((mask >> i) & 1) as i64);
                }
                let f = CylinderFunction::new(&p.a_graph, depth, values, CAP).unwrap();
                let round = psi_map(&p, &phi_map(&p, &f, CAP).unwrap(), CAP).unwrap();
                let shifted = shift_compose(&f, &p.a_graph, CAP).unwrap();
                assert!(functions_equal(&p.a_graph, &round, &shifted, CAP).unwrap());
            }
            let b_words = allowed_words(&p.b_graph, depth, CAP).unwrap();
            for mask in 0u32..(1 << b_words.len()) {
                let mut values = BTreeMap::new();
                for (i, w) in b_words.iter().enumerate() {
                    values.insert(w.clone(), ((mask >> i) & 1) as i64);
                }
                let gf = CylinderFunction::new(&p.b_graph, depth, values, CAP).unwrap();
                let round = phi_map(&p, &psi_map(&p, &gf, CAP).unwrap(), CAP).unwrap();
                let shifted = shift_compose(&gf, &p.b_graph, CAP).unwrap();
                assert!(functions_equal(&p.b_graph, &round, &shifted, CAP).unwrap());
            }
        }
    }

    #[test]
    fn phi_indicator_golden_mean() {
        let ee = ElementaryEquivalence::with_endpoints(
            tm(&[&[1, 1], &[1, 0]]),
            tm(&[&[1, 1, 0], &[0, 0, 1], &[1, 1, 0]]),
            IntMatrix::from_i64_rows(&[&[1, 1, 0], &[0, 0, 1]]),
            IntMatrix::from_i64_rows(&[&[1, 0], &[0, 1], &[1, 0]]),
        )
        .unwrap();
        let p = edge_pairing(&ee).unwrap();
        let f = CylinderFunction::indicator(&p.a_graph, &[0], CAP).unwrap();
        let img = phi_map(&p, &f, CAP).unwrap();
        assert_eq!(img.depth(), 2);
        // the image is the sum of indicators of the B-2-words whose middle
        // path pairs to edge a
        for (w, v) in img.values() {
            let (_, c1) = p.b_pairs[w[0]];
            let (d2, _) = p.b_pairs[w[1]];
            let expected = i64::from(p.a_edge_for(c1, d2) == Some(0));
            assert_eq!(*v, expected);
        }
        // two b-edges share c1 and two share d1, all composable: four words
        assert_eq!(img.values().values().sum::<i64>(), 4);
    }
}
