use crate::algebra::{algebraic_part, restrict_to_algebraic, CanonicalDecomposition, EndoSpace};
use crate::cubical::{chain_complex, relative_complex, CubicalSet};
use crate::dynamics::{selector_chain_map, standard_shift_equivalence, ChainSelector, FiltrationPair, MultivaluedMap};
use crate::error::{Error, Result};
use crate::homology::{homology, inclusion_map, induced_map, triple_connecting, GradedHomology, GradedMap};
use crate::index::{change_coordinates, conley_index, ConleyIndex};
use crate::linalg::{Field, Matrix};

use super::CheckReport;

/// `∂_F : CH_q(N/L) -> H_{q-1}(F)` and the data it is built from.
#[derive(Clone, Debug)]
pub struct EmitterData {
    pub index: ConleyIndex,
    /// `H(W^u_loc, F)`.
    pub h_wf: GradedHomology,
    /// `H(F)`.
    pub h_f: GradedHomology,
    /// Index map of the pair `(W^u_loc, F)`.
    pub wf_map: GradedMap,
    pub wf_decompositions: Vec<CanonicalDecomposition>,
    /// `j_* : H(W^u_loc, F) -> H(N, L)`.
    pub j: GradedMap,
    /// `(j_*|)^{-1} : CH_q -> A H_q(W^u_loc, F)` in algebraic bases.
    pub j_inverse: Vec<Matrix>,
    /// Connecting map `H_q(W^u_loc, F) -> H_{q-1}(F)`.
    pub delta: GradedMap,
    /// `blocks[q] : CH_q -> H_{q-1}(F)`; block 0 has no rows.
    pub emitter: Vec<Matrix>,
}

pub fn emitter(f: &MultivaluedMap, pair: &FiltrationPair, field: Field) -> Result<EmitterData> {
    let index = conley_index(f, pair, field)?;
    emitter_from_index(f, index)
}

pub fn emitter_from_index(f: &MultivaluedMap, index: ConleyIndex) -> Result<EmitterData> {
    let field = index.field();
    let pair = &index.pair;
    let cc_wf = relative_complex(&pair.wu, &pair.f_domain, field)?;
    let h_wf = homology(&cc_wf);
    let h_f = homology(&chain_complex(&pair.f_domain, field)?);
    let mut sel = ChainSelector::new(f);
    let chain = selector_chain_map(&mut sel, &cc_wf, &cc_wf)?;
    let wf_map = induced_map(&chain, &h_wf, &h_wf)?;
    let wf_decompositions = wf_map
        .blocks
        .iter()
        .map(|m| algebraic_part(&EndoSpace::new(m.clone())?))
        .collect::<Result<Vec<_>>>()?;
    let j = inclusion_map(&h_wf, &index.pair_homology.homology)?;
    let delta = triple_connecting(&h_wf, &h_f)?;
    let mut j_inverse = Vec::new();
    let mut blocks = Vec::new();
    for q in 0..=index.top() {
        let restricted = restrict_to_algebraic(&j.blocks[q], &wf_decompositions[q], index.decomposition(q))
            .map_err(|e| Error::AlgebraicInverseFailure { degree: q, detail: e.to_string() })?;
        let inv = restricted.inverse().map_err(|_| Error::AlgebraicInverseFailure {
            degree: q,
            detail: format!(
                "j_* on algebraic parts is {}x{} of rank {}",
                restricted.rows(),
                restricted.cols(),
                restricted.rank()
            ),
        })?;
        let ambient = wf_decompositions[q].algebraic_basis.mul(&inv)?;
        let block = if q == 0 {
            Matrix::zeros(field, 0, index.dim(0))
        } else {
            delta.blocks[q].mul(&ambient)?
        };
        j_inverse.push(inv);
        blocks.push(block);
    }
    Ok(EmitterData { index, h_wf, h_f, wf_map, wf_decompositions, j, j_inverse, delta, emitter: blocks })
}

/// `i_* ∂_F = ∂_{F'} r_*` on `CH` for nested pairs.
pub fn emitter_naturality_check(
    f: &MultivaluedMap,
    small: &FiltrationPair,
    big: &FiltrationPair,
    field: Field,
    n_max: usize,
) -> Result<CheckReport> {
    let se = standard_shift_equivalence(f, small, big, field, n_max)?;
    let a = emitter_from_index(f, crate::index::ConleyIndex::from_pair_homology(small.clone(), se.source.clone())?)?;
    let b = emitter_from_index(f, crate::index::ConleyIndex::from_pair_homology(big.clone(), se.target.clone())?)?;
    let r = change_coordinates(&a.index, &b.index, &se)?;
    let i = inclusion_map(&a.h_f, &b.h_f)?;
    for q in 1..=a.index.top() {
        let lhs = i.blocks[q - 1].mul(&a.emitter[q])?;
        let rhs = b.emitter[q].mul(&r[q])?;
        if lhs != rhs {
            return Ok(CheckReport::fail(format!("i_* ∂_F != ∂_F' r_* in degree {q}")));
        }
    }
    Ok(CheckReport::pass())
}

/// The classes in `H_0(X)` of one vertex per closure-connected component,
/// in the order of [`crate::cubical::components`].
pub fn component_classes(h: &GradedHomology, x: &CubicalSet) -> Result<Vec<Vec<crate::linalg::Scalar>>> {
    let cc = h.complex();
    crate::cubical::components(x)
        .iter()
        .map(|comp| {
            let v = comp.of_dim(0).next().cloned().ok_or_else(|| {
                Error::InternalInconsistency("component without a vertex".into())
            })?;
            let chain = cc.chain(0, &[(v, 1)]);
            h.classify(0, &chain)?.ok_or_else(|| Error::InternalInconsistency("vertex is not a cycle".into()))
        })
        .collect()
}
