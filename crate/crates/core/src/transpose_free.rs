//! Certificates for transpose-free equivalence: chains of moves, each an
//! out-splitting or out-amalgamation applied either to the matrix itself or
//! to its transpose. An in-split of a graph is an out-split of the
//! transposed graph, so the four classical moves reduce to two move kinds
//! times two sides.
//!
//! This module only verifies certificates; it never searches for a chain
//! between arbitrary matrices, and it admits only splitting-induced steps.

use crate::error::{Error, Result};
use crate::graph::TransitionMatrix;
use crate::matrix::IntMatrix;
use crate::scalar::Scalar;
use crate::splitting::{InPartition, SplitKind, SplitResult};
use crate::sse::{build_chain, ChainCheck, SseChain};
use crate::verdict::Verdict;
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Direct,
    Transposed,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Direct => write!(f, "direct"),
            Side::Transposed => write!(f, "transposed"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MoveKind {
    OutSplit,
    OutAmalgamate,
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MoveKind::OutSplit => write!(f, "out-split"),
            MoveKind::OutAmalgamate => write!(f, "out-amalgamate"),
        }
    }
}

/// One certificate step. The witness is always an out-split held on the
/// stated side; amalgamation steps store the split witness of their inverse.
#[derive(Clone, Debug)]
pub struct TfStep<T> {
    pub side: Side,
    pub mv: MoveKind,
    pub from: TransitionMatrix<T>,
    pub to: TransitionMatrix<T>,
    pub witness: SplitResult<T>,
}

/// Endpoints implied by a witness under (side, move): splits go original to
/// split matrix, amalgamations the other way, and the transposed side
/// conjugates both by transposition.
fn implied_endpoints<T: Scalar>(
    side: Side,
    mv: MoveKind,
    witness: &SplitResult<T>,
) -> (TransitionMatrix<T>, TransitionMatrix<T>) {
    let (origin, split) = (witness.original.clone(), witness.split_matrix.clone());
    let (start, finish) = match mv {
        MoveKind::OutSplit => (origin, split),
        MoveKind::OutAmalgamate => (split, origin),
    };
    match side {
        Side::Direct => (start, finish),
        Side::Transposed => (start.transpose(), finish.transpose()),
    }
}

impl<T: Scalar> TfStep<T> {
    /// Checked constructor: endpoints are derived from the witness.
    pub fn new(side: Side, mv: MoveKind, witness: SplitResult<T>) -> Result<Self> {
        if witness.kind != SplitKind::Out {
            return Err(Error::SideMismatch(
                "transpose-free witnesses must be out-splits; certify an in-split \
                 through its transposed out-split"
                    .into(),
            ));
        }
        let (from, to) = implied_endpoints(side, mv, &witness);
        Ok(TfStep {
            side,
            mv,
            from,
            to,
            witness,
        })
    }

    /// The elementary-equivalence witness `(C', D')` for `from ~ to` implied
    /// by this step.
    pub fn implied_pair(&self) -> (IntMatrix<T>, IntMatrix<T>) {
        let c = &self.witness.c;
        let d = &self.witness.d;
        match (self.side, self.mv) {
            (Side::Direct, MoveKind::OutSplit) => (c.clone(), d.clone()),
            (Side::Direct, MoveKind::OutAmalgamate) => (d.clone(), c.clone()),
            (Side::Transposed, MoveKind::OutSplit) => (d.transpose(), c.transpose()),
            (Side::Transposed, MoveKind::OutAmalgamate) => (c.transpose(), d.transpose()),
        }
    }

    fn check(&self, step_no: usize) -> Option<Verdict> {
        if self.witness.kind != SplitKind::Out {
            return Some(Verdict::refuted(format!(
                "step {step_no} witness is not an out-split"
            )));
        }
        let cd = match self.witness.c.checked_mul(&self.witness.d) {
            Ok(m) => m,
            Err(_) => return Some(Verdict::refuted(format!("step {step_no} witness overflow"))),
        };
        if cd != *self.witness.original.matrix() {
            return Some(Verdict::refuted(format!(
                "step {step_no} witness products do not reproduce its original matrix"
            )));
        }
        let dc = match self.witness.d.checked_mul(&self.witness.c) {
            Ok(m) => m,
            Err(_) => return Some(Verdict::refuted(format!("step {step_no} witness overflow"))),
        };
        if dc != *self.witness.split_matrix.matrix() {
            return Some(Verdict::refuted(format!(
                "step {step_no} witness products do not reproduce its split matrix"
            )));
        }
        let (from, to) = implied_endpoints(self.side, self.mv, &self.witness);
        if let Some((i, j)) = from.matrix().first_mismatch(self.from.matrix()) {
            return Some(Verdict::refuted(format!(
                "step {step_no} from_matrix entry ({},{}) does not match the {} {} witness",
                i + 1,
                j + 1,
                self.side,
                self.mv
            )));
        }
        if let Some((i, j)) = to.matrix().first_mismatch(self.to.matrix()) {
            return Some(Verdict::refuted(format!(
                "step {step_no} to_matrix entry ({},{}) does not match the {} {} witness",
                i + 1,
                j + 1,
                self.side,
                self.mv
            )));
        }
        None
    }
}

/// Certify a single split as a transpose-free step: out-splits on the
/// direct side, in-splits on the transposed side (rebuilt there as the
/// out-split of the transposed graph).
pub fn step_from_split<T: Scalar>(sr: &SplitResult<T>, side: Side) -> Result<TfStep<T>> {
    match (sr.kind, side) {
        (SplitKind::Out, Side::Direct) => TfStep::new(Side::Direct, MoveKind::OutSplit, sr.clone()),
        (SplitKind::In, Side::Transposed) => {
            let g = crate::graph::from_matrix(&sr.original)?;
            let in_partition = InPartition::new(
                &g,
                (0..g.num_vertices())
                    .map(|v| sr.partition.blocks(v).to_vec())
                    .collect(),
            )?;
            let (gt, pt) = in_partition.transposed(&g);
            let witness: SplitResult<T> = crate::splitting::out_split(&gt, &pt)?;
            if witness.split_matrix != sr.split_matrix.transpose() {
                return Err(Error::SideMismatch(
                    "transposed out-split does not reproduce the in-split".into(),
                ));
            }
            // endpoints derived on the transposed side transpose back to
            // the in-split's own original and split matrices
            TfStep::new(Side::Transposed, MoveKind::OutSplit, witness)
        }
        (SplitKind::Out, Side::Transposed) => Err(Error::SideMismatch(
            "an out-split certifies the direct side".into(),
        )),
        (SplitKind::In, Side::Direct) => Err(Error::SideMismatch(
            "an in-split certifies the transposed side".into(),
        )),
    }
}

/// A chain of transpose-free steps with matching endpoints.
#[derive(Clone, Debug)]
pub struct TfChain<T> {
    pub steps: Vec<TfStep<T>>,
}

/// Verify every step and the endpoint chaining; on success also emit the
/// implied strong-shift-equivalence chain between the same endpoints. The
/// verdict only certifies splitting-induced steps, the one kind this module
/// admits.
pub fn verify_tf_chain<T: Scalar>(chain: &TfChain<T>) -> Result<(Verdict, Option<SseChain<T>>)> {
    if chain.steps.is_empty() {
        return Err(Error::EmptyChain);
    }
    for (idx, step) in chain.steps.iter().enumerate() {
        if let Some(refutation) = step.check(idx + 1) {
            return Ok((refutation, None));
        }
        if idx + 1 < chain.steps.len() {
            let next = &chain.steps[idx + 1];
            if let Some((i, j)) = step.to.matrix().first_mismatch(next.from.matrix()) {
                return Ok((
                    Verdict::refuted(format!(
                        "step {} to_matrix entry ({},{}) does not match step {} from_matrix",
                        idx + 1,
                        i + 1,
                        j + 1,
                        idx + 2
                    )),
                    None,
                ));
            }
        }
    }
    let witnesses: Vec<(IntMatrix<T>, IntMatrix<T>)> = chain
        .steps
        .iter()
        .map(TfStep::implied_pair)
        .collect();
    match build_chain(&witnesses)? {
        ChainCheck::Verified(sse) => Ok((
            Verdict::verified_with(vec![
                "all steps are splitting-induced; other triplet isomorphisms are not admitted"
                    .to_string(),
            ]),
            Some(sse),
        )),
        ChainCheck::Refuted { step, locus } => Ok((
            Verdict::refuted(format!("implied witness at step {step}: {locus}")),
            None,
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::from_matrix;
    use crate::splitting::{in_split, out_split, OutPartition};

    fn tm(rows: &[&[i64]]) -> TransitionMatrix<i64> {
        TransitionMatrix::from_i64_rows(rows)
    }

    fn golden_split() -> SplitResult<i64> {
        let g = from_matrix(&tm(&[&[1, 1], &[1, 0]])).unwrap();
        let p = OutPartition::new(&g, vec![vec![vec![0], vec![1]], vec![vec![2]]]).unwrap();
        out_split(&g, &p).unwrap()
    }

    #[test]
    fn out_split_step_direct() {
        let step = step_from_split(&golden_split(), Side::Direct).unwrap();
        assert_eq!(step.side, Side::Direct);
        assert_eq!(step.mv, MoveKind::OutSplit);
        assert_eq!(step.from.matrix(), tm(&[&[1, 1], &[1, 0]]).matrix());
        assert_eq!(
            step.to.matrix(),
            tm(&[&[1, 1, 0], &[0, 0, 1], &[1, 1, 0]]).matrix()
        );
        let chain = TfChain { steps: vec![step] };
        let (v, sse) = verify_tf_chain(&chain).unwrap();
        assert!(v.is_verified());
        let sse = sse.unwrap();
        assert_eq!(sse.len(), 1);
    }

    #[test]
    fn in_split_step_is_transposed() {
        let g = from_matrix(&tm(&[&[2]])).unwrap();
        let p = InPartition::new(&g, vec![vec![vec![0], vec![1]]]).unwrap();
        let sr: SplitResult<i64> = in_split(&g, &p).unwrap();
        let step = step_from_split(&sr, Side::Transposed).unwrap();
        assert_eq!(step.side, Side::Transposed);
        assert_eq!(step.from.matrix(), tm(&[&[2]]).matrix());
        assert_eq!(step.to.matrix(), tm(&[&[1, 1], &[1, 1]]).matrix());

        assert!(matches!(
            step_from_split(&sr, Side::Direct),
            Err(Error::SideMismatch(_))
        ));
        assert!(matches!(
            step_from_split(&golden_split(), Side::Transposed),
            Err(Error::SideMismatch(_))
        ));
    }

    #[test]
    fn trivial_split_step_has_equal_endpoints() {
        let g = from_matrix(&tm(&[&[1, 1], &[1, 0]])).unwrap();
        let p = OutPartition::trivial(&g);
        let sr: SplitResult<i64> = out_split(&g, &p).unwrap();
        let step = step_from_split(&sr, Side::Direct).unwrap();
        assert_eq!(step.from.matrix(), step.to.matrix());
    }

    #[test]
    fn mixed_chain_round_trip() {
        // [2] -> [[1,1],[1,1]] by a direct out-split, back by a transposed
        // out-amalgamation (the inverse of an in-split)
        let g = from_matrix(&tm(&[&[2]])).unwrap();
        let p = OutPartition::new(&g, vec![vec![vec![0], vec![1]]]).unwrap();
        let forward = step_from_split(&out_split::<i64>(&g, &p).unwrap(), Side::Direct).unwrap();

        let ip = InPartition::new(&g, vec![vec![vec![0], vec![1]]]).unwrap();
        let in_sr: SplitResult<i64> = in_split(&g, &ip).unwrap();
        let up = step_from_split(&in_sr, Side::Transposed).unwrap();
        let back = TfStep::new(Side::Transposed, MoveKind::OutAmalgamate, up.witness).unwrap();
        assert_eq!(back.from.matrix(), tm(&[&[1, 1], &[1, 1]]).matrix());
        assert_eq!(back.to.matrix(), tm(&[&[2]]).matrix());

        let chain = TfChain {
            steps: vec![forward, back],
        };
        let (v, sse) = verify_tf_chain(&chain).unwrap();
        assert!(v.is_verified());
        let sse = sse.unwrap();
        assert_eq!(sse.start().matrix(), tm(&[&[2]]).matrix());
        assert_eq!(sse.end().matrix(), tm(&[&[2]]).matrix());
        assert_eq!(
            sse.start().trace_sequence(12).unwrap(),
            sse.end().trace_sequence(12).unwrap()
        );
    }

    #[test]
    fn forged_step_is_refuted() {
        let mut step = step_from_split(&golden_split(), Side::Direct).unwrap();
        step.to = tm(&[&[1, 1, 0], &[0, 0, 1], &[1, 1, 1]]);
        let chain = TfChain { steps: vec![step] };
        let (v, sse) = verify_tf_chain(&chain).unwrap();
        assert!(!v.is_verified());
        assert!(sse.is_none());
    }
}
