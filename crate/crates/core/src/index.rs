//! The homological Conley index `CH_*(N/L)` with its index automorphism.

use crate::algebra::{algebraic_part, restrict_to_algebraic, CanonicalDecomposition, EndoSpace};
use crate::dynamics::{pair_homology, FiltrationPair, MultivaluedMap, PairHomology, StandardShift};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix};

/// `CH_q` as the algebraic part of `(H_q(N, L), (f_{N/L})_*)`, in the
/// bases chosen for the pair.
#[derive(Clone, Debug)]
pub struct ConleyIndex {
    pub pair: FiltrationPair,
    pub pair_homology: PairHomology,
    pub decompositions: Vec<CanonicalDecomposition>,
}

pub fn conley_index(f: &MultivaluedMap, pair: &FiltrationPair, field: Field) -> Result<ConleyIndex> {
    let ph = pair_homology(f, pair, field)?;
    ConleyIndex::from_pair_homology(pair.clone(), ph)
}

impl ConleyIndex {
    pub fn from_pair_homology(pair: FiltrationPair, ph: PairHomology) -> Result<ConleyIndex> {
        let decompositions = ph
            .map
            .blocks
            .iter()
            .map(|m| algebraic_part(&EndoSpace::new(m.clone())?))
            .collect::<Result<Vec<_>>>()?;
        for (q, d) in decompositions.iter().enumerate() {
            if !d.phi_on_a.is_invertible() {
                return Err(Error::InternalInconsistency(format!("index map not invertible in degree {q}")));
            }
        }
        Ok(ConleyIndex { pair, pair_homology: ph, decompositions })
    }

    pub fn field(&self) -> Field {
        self.pair_homology.homology.field()
    }

    pub fn top(&self) -> usize {
        self.decompositions.len() - 1
    }

    pub fn dim(&self, q: usize) -> usize {
        self.decompositions.get(q).map_or(0, |d| d.algebraic_dim())
    }

    pub fn dims(&self) -> Vec<usize> {
        self.decompositions.iter().map(|d| d.algebraic_dim()).collect()
    }

    /// `φ_{N/L}` on `CH_q` in the algebraic basis.
    pub fn phi(&self, q: usize) -> &Matrix {
        &self.decompositions[q].phi_on_a
    }

    /// `(f_{N/L})_*` on `H_q(N, L)`.
    pub fn endomorphism(&self, q: usize) -> &Matrix {
        &self.pair_homology.map.blocks[q]
    }

    pub fn decomposition(&self, q: usize) -> &CanonicalDecomposition {
        &self.decompositions[q]
    }

    /// `φ^{-n}` on `CH_q`.
    pub fn phi_inverse_power(&self, q: usize, n: usize) -> Result<Matrix> {
        self.phi(q).inverse()?.pow(n)
    }
}

/// `r_*` restricted to `CH(A) -> CH(B)` per degree, checked to be an
/// isomorphism conjugating the two index maps.
pub fn change_coordinates(a: &ConleyIndex, b: &ConleyIndex, se: &StandardShift) -> Result<Vec<Matrix>> {
    let mut out = Vec::with_capacity(a.top() + 1);
    for q in 0..=a.top() {
        let r = restrict_to_algebraic(&se.r.blocks[q], a.decomposition(q), b.decomposition(q))
            .map_err(|e| Error::ConjugacyViolation(format!("degree {q}: {e}")))?;
        if !r.is_invertible() {
            return Err(Error::ConjugacyViolation(format!("r_* is not an isomorphism in degree {q}")));
        }
        if r.mul(a.phi(q))? != b.phi(q).mul(&r)? {
            return Err(Error::ConjugacyViolation(format!("r_* does not conjugate the index maps in degree {q}")));
        }
        out.push(r);
    }
    Ok(out)
}
