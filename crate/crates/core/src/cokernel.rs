//! Bowen-Franks groups and induced homomorphisms between them.
//!
//! The group of a matrix `A` is the cokernel of `I - A^t` in Smith-form
//! coordinates. An integer matrix `M` induces a homomorphism of cokernels
//! exactly when an integral certificate `W` with `M (I - A^t) = (I - B^t) W`
//! exists; representing matrices are only well defined modulo `I - B^t`, so
//! maps are always compared on generators after canonical reduction, never
//! entrywise.

use crate::error::{Error, Result};
use crate::graph::{edge_graph, TransitionMatrix};
use crate::matrix::IntMatrix;
use crate::scalar::Scalar;
use crate::smith::{smith_normal_form, solve_linear, SmithForm};
use crate::sse::{dhat, edge_pairing, ElementaryEquivalence, SseChain};
use crate::verdict::Verdict;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// A finitely generated abelian group in canonical form, presented as the
/// cokernel of an integer matrix.
#[derive(Clone, Debug)]
pub struct FinAbGroup {
    presentation: IntMatrix<BigInt>,
    smith: SmithForm,
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl FinAbGroup {
    pub fn from_presentation(presentation: IntMatrix<BigInt>) -> Self {
        let smith = smith_normal_form(&presentation);
        let free_rank = presentation.rows() - smith.rank();
        let torsion = smith
            .divisors
            .iter()
            .filter(|d| **d > BigInt::one())
            .cloned()
            .collect();
        FinAbGroup {
            presentation,
            smith,
            free_rank,
            torsion,
        }
    }

    /// Ambient dimension: elements are classes of integer vectors of this
    /// length.
    pub fn ambient_dim(&self) -> usize {
        self.presentation.rows()
    }

    pub fn presentation(&self) -> &IntMatrix<BigInt> {
        &self.presentation
    }

    pub fn smith(&self) -> &SmithForm {
        &self.smith
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Same canonical form (isomorphic as abstract groups).
    pub fn is_isomorphic_to(&self, other: &FinAbGroup) -> bool {
        self.free_rank == other.free_rank && self.torsion == other.torsion
    }

    /// Canonical coordinates of the class of `v`: transform by the
    /// unimodular `U`, reduce divisor coordinates, keep free coordinates.
    pub fn reduce(&self, v: &[BigInt]) -> Result<CokernelElement> {
        if v.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in a group of ambient dimension {}",
                v.len(),
                self.ambient_dim()
            )));
        }
        let transformed = self
            .smith
            .u
            .apply(v)
            .expect("dimension checked above");
        let mut torsion = Vec::new();
        for (i, d) in self.smith.divisors.iter().enumerate() {
            if *d > BigInt::one() {
                let mut r = &transformed[i] % d;
                if r.is_negative() {
                    r += d;
                }
                torsion.push(r);
            }
        }
        let free = transformed[self.smith.rank()..].to_vec();
        Ok(CokernelElement { free, torsion })
    }

    pub fn zero_element(&self) -> CokernelElement {
        CokernelElement {
            free: vec![BigInt::zero(); self.free_rank],
            torsion: vec![BigInt::zero(); self.torsion.len()],
        }
    }

    /// `Z^r (+) Z/d_1 (+) ... (+) Z/d_k`, or `trivial group`.
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            "trivial group".to_string()
        } else {
            parts.join(" \u{2295} ")
        }
    }
}

/// Canonical coordinates of a cokernel class: free part over `Z`, torsion
/// part reduced into `[0, d_i)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CokernelElement {
    pub free: Vec<BigInt>,
    pub torsion: Vec<BigInt>,
}

impl CokernelElement {
    pub fn is_zero(&self) -> bool {
        self.free.iter().all(Zero::is_zero) && self.torsion.iter().all(Zero::is_zero)
    }

    /// Coordinate tuple in the order the group renders: free then torsion.
    pub fn render(&self) -> String {
        if self.free.is_empty() && self.torsion.is_empty() {
            return "0".to_string();
        }
        let coords: Vec<String> = self
            .free
            .iter()
            .chain(self.torsion.iter())
            .map(BigInt::to_string)
            .collect();
        format!("({})", coords.join(","))
    }
}

/// The Bowen-Franks group `Z^N / (I - A^t) Z^N`.
pub fn bowen_franks_group<T: Scalar>(a: &TransitionMatrix<T>) -> FinAbGroup {
    let n = a.dim();
    let presentation = IntMatrix::<BigInt>::identity(n)
        .checked_sub(&a.matrix().to_bigint().transpose())
        .expect("bigint arithmetic cannot overflow");
    FinAbGroup::from_presentation(presentation)
}

/// The class of the all-ones vector.
pub fn unit_class(group: &FinAbGroup) -> CokernelElement {
    let ones = vec![BigInt::one(); group.ambient_dim()];
    group.reduce(&ones).expect("ones vector has ambient length")
}

/// A homomorphism between cokernels, carried by an integer matrix together
/// with the integral certificate proving well-definedness.
#[derive(Clone, Debug)]
pub struct CokernelMap {
    pub source: FinAbGroup,
    pub target: FinAbGroup,
    pub matrix: IntMatrix<BigInt>,
    pub certificate: IntMatrix<BigInt>,
}

impl CokernelMap {
    /// Build the map carried by `matrix`, solving for the certificate `W`
    /// in `matrix * P_src = P_tgt * W`.
    pub fn new(
        matrix: IntMatrix<BigInt>,
        source: FinAbGroup,
        target: FinAbGroup,
    ) -> Result<Self> {
        if matrix.cols() != source.ambient_dim() || matrix.rows() != target.ambient_dim() {
            return Err(Error::DimensionMismatch(format!(
                "map matrix {}x{} between ambient dimensions {} -> {}",
                matrix.rows(),
                matrix.cols(),
                source.ambient_dim(),
                target.ambient_dim()
            )));
        }
        let rhs = matrix
            .checked_mul(source.presentation())
            .expect("bigint arithmetic cannot overflow");
        let certificate =
            solve_linear(target.smith(), &rhs).ok_or(Error::NotWellDefined)?;
        Ok(CokernelMap {
            source,
            target,
            matrix,
            certificate,
        })
    }

    pub fn identity(group: &FinAbGroup) -> Self {
        let n = group.ambient_dim();
        CokernelMap {
            source: group.clone(),
            target: group.clone(),
            matrix: IntMatrix::identity(n),
            certificate: IntMatrix::identity(n),
        }
    }

    pub fn apply(&self, v: &[BigInt]) -> Result<CokernelElement> {
        let image = self.matrix.apply(v)?;
        self.target.reduce(&image)
    }

    /// `self` followed by `g`.
    pub fn then(&self, g: &CokernelMap) -> Result<CokernelMap> {
        if self.target.presentation() != g.source.presentation() {
            return Err(Error::DimensionMismatch(
                "composition endpoints present different cokernels".into(),
            ));
        }
        Ok(CokernelMap {
            source: self.source.clone(),
            target: g.target.clone(),
            matrix: g
                .matrix
                .checked_mul(&self.matrix)
                .expect("bigint arithmetic cannot overflow"),
            certificate: g
                .certificate
                .checked_mul(&self.certificate)
                .expect("bigint arithmetic cannot overflow"),
        })
    }
}

/// Agreement on the standard generators after canonical reduction.
pub fn equal_maps(f: &CokernelMap, g: &CokernelMap) -> Result<bool> {
    if f.source.presentation() != g.source.presentation()
        || f.target.presentation() != g.target.presentation()
    {
        return Err(Error::DimensionMismatch(
            "maps with different source or target presentations".into(),
        ));
    }
    let n = f.source.ambient_dim();
    for i in 0..n {
        let mut e = vec![BigInt::zero(); n];
        e[i] = BigInt::one();
        if f.apply(&e)? != g.apply(&e)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Verify that `f` and `inverse_candidate` compose to the identity both
/// ways, on generators.
pub fn is_isomorphism(f: &CokernelMap, inverse_candidate: &CokernelMap) -> Result<Verdict> {
    let round = f.then(inverse_candidate)?;
    if !equal_maps(&round, &CokernelMap::identity(&f.source))? {
        return Ok(Verdict::refuted(
            "inverse_candidate . f is not the identity on the source".to_string(),
        ));
    }
    let round = inverse_candidate.then(f)?;
    if !equal_maps(&round, &CokernelMap::identity(&f.target))? {
        return Ok(Verdict::refuted(
            "f . inverse_candidate is not the identity on the target".to_string(),
        ));
    }
    Ok(Verdict::verified())
}

/// The map on cokernels induced by an integer matrix `m: Z^N -> Z^M`
/// between the Bowen-Franks presentations of `a` and `b`.
pub fn induced_map<T: Scalar>(
    m: &IntMatrix<T>,
    a: &TransitionMatrix<T>,
    b: &TransitionMatrix<T>,
) -> Result<CokernelMap> {
    CokernelMap::new(
        m.to_bigint(),
        bowen_franks_group(a),
        bowen_franks_group(b),
    )
}

/// The two compatibility checks tying the edge-level data of a witness to
/// its vertex-level induced map (the CLI `matui` verb):
///
/// (i) descending the edge-level map along the target incidences agrees
///     with the vertex-level map: `S_B^t . Dhat^t = C^t . S_A^t` as maps
///     from the edge-level cokernel of `A` to the vertex-level cokernel of
///     `B`;
/// (ii) the descent map `S_A^t` sends the unit class to the unit class.
pub fn check_matui<T: Scalar>(ee: &ElementaryEquivalence<T>) -> Result<Verdict> {
    let fact_a = edge_graph(ee.a())?;
    let fact_b = edge_graph(ee.b())?;
    let pairing = edge_pairing(ee)?;
    let dh: IntMatrix<BigInt> = dhat(&pairing);

    let coker_a = bowen_franks_group(ee.a());
    let coker_b = bowen_franks_group(ee.b());
    let coker_a_edge = bowen_franks_group(&fact_a.edge_matrix);
    let coker_b_edge = bowen_franks_group(&fact_b.edge_matrix);

    let map_dhat = CokernelMap::new(dh.transpose(), coker_a_edge.clone(), coker_b_edge.clone())?;
    let map_sa = CokernelMap::new(
        fact_a.target_incidence.to_bigint().transpose(),
        coker_a_edge.clone(),
        coker_a.clone(),
    )?;
    let map_sb = CokernelMap::new(
        fact_b.target_incidence.to_bigint().transpose(),
        coker_b_edge,
        coker_b.clone(),
    )?;
    let map_c = CokernelMap::new(ee.c().to_bigint().transpose(), coker_a, coker_b)?;

    let via_edge = map_dhat.then(&map_sb)?;
    let via_vertex = map_sa.then(&map_c)?;
    if !equal_maps(&via_edge, &via_vertex)? {
        return Ok(Verdict::refuted(
            "item (i): S_B^t . Dhat^t differs from C^t . S_A^t on a generator".to_string(),
        ));
    }

    let ones = vec![BigInt::one(); map_sa.source.ambient_dim()];
    if map_sa.apply(&ones)? != unit_class(&map_sa.target) {
        return Ok(Verdict::refuted(
            "item (ii): S_A^t does not send the unit class to the unit class".to_string(),
        ));
    }
    Ok(Verdict::verified())
}

/// Machine check of the chain diagram: every step map is an isomorphism
/// with the paired inverse, the composite equals the map induced by the
/// forward product `C_1 ... C_n`, and unit classes correspond.
pub fn check_diagram<T: Scalar>(chain: &SseChain<T>) -> Result<Verdict> {
    let mut composite: Option<CokernelMap> = None;
    for (idx, step) in chain.steps().iter().enumerate() {
        let forward = induced_map(&step.c().transpose(), step.a(), step.b())?;
        let backward = induced_map(&step.d().transpose(), step.b(), step.a())?;
        let iso = is_isomorphism(&forward, &backward)?;
        if let Verdict::Refuted { locus } = iso {
            return Ok(Verdict::refuted(format!(
                "step {} item (a): {locus}",
                idx + 1
            )));
        }
        composite = Some(match composite {
            None => forward,
            Some(prev) => prev.then(&forward)?,
        });
    }
    let composite = composite.ok_or(Error::EmptyChain)?;

    let product = chain.forward_matrix()?;
    let product_map = induced_map(&product.transpose(), chain.start(), chain.end())?;
    if !equal_maps(&composite, &product_map)? {
        return Ok(Verdict::refuted(
            "item (b): composite of step maps differs from the forward-product map".to_string(),
        ));
    }

    let ones = vec![BigInt::one(); composite.source.ambient_dim()];
    if composite.apply(&ones)? != unit_class(&composite.target) {
        return Ok(Verdict::refuted(
            "item (c): unit classes do not correspond under the composite".to_string(),
        ));
    }
    Ok(Verdict::verified())
}
