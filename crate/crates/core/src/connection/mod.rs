//! Attractor-repeller decompositions: the exact sequence of a filtration
//! triple, the connection homomorphism `Γ` from that sequence and from the
//! factorization `Ω ∘ τ ∘ ∂_F`, and the dimension identities they imply.

mod cases;

pub use cases::{
    coordinate_change, enlarge_attractor_region, gamma_case2, gamma_case3, gamma_cross_validate,
    gamma_sum_decomposition, CaseReport, CrossValidation, SumDecomposition,
};

use crate::algebra::{is_exact, restrict_to_algebraic};
use crate::cubical::{closed_complement, relative_complex, chain_complex, CubicalSet};
use crate::dynamics::{FiltrationTriple, MultivaluedMap};
use crate::emit_receive::{
    check_admissible, emitter_from_index, receiver_Omega, receiver_omega, AdmissibleWitness, EmitterData, OmegaMap,
    ReceiverData,
};
use crate::error::{Error, Result};
use crate::homology::{homology, inclusion_map, triple_connecting, GradedHomology, GradedMap, TripleSequence};
use crate::index::{conley_index, ConleyIndex};
use crate::linalg::{Field, Matrix};
use crate::system::Options;

/// The triple sequence restricted to Conley indices.
#[derive(Clone, Debug)]
pub struct ArSequence {
    pub s: ConleyIndex,
    pub r: ConleyIndex,
    pub a: ConleyIndex,
    pub homology: TripleSequence,
    /// `CH_q(A) -> CH_q(S)`.
    pub i: Vec<Matrix>,
    /// `CH_q(S) -> CH_q(R)`.
    pub j: Vec<Matrix>,
    /// `Γ_q : CH_q(R) -> CH_{q-1}(A)`; block 0 has no rows.
    pub gamma: Vec<Matrix>,
}

pub fn ar_exact_sequence(f: &MultivaluedMap, triple: &FiltrationTriple, field: Field) -> Result<ArSequence> {
    let s = conley_index(f, &triple.s, field)?;
    let r = conley_index(f, &triple.r, field)?;
    let a = conley_index(f, &triple.a, field)?;
    let (ha, hs, hr) = (&a.pair_homology.homology, &s.pair_homology.homology, &r.pair_homology.homology);
    let seq = TripleSequence {
        h12: ha.clone(),
        h02: hs.clone(),
        h01: hr.clone(),
        i: inclusion_map(ha, hs)?,
        j: inclusion_map(hs, hr)?,
        delta: triple_connecting(hr, ha)?,
    };
    seq.verify_exact()?;
    let top = s.top();
    let mut i = Vec::new();
    let mut j = Vec::new();
    let mut gamma = Vec::new();
    for q in 0..=top {
        i.push(restrict_to_algebraic(&seq.i.blocks[q], a.decomposition(q), s.decomposition(q))?);
        j.push(restrict_to_algebraic(&seq.j.blocks[q], s.decomposition(q), r.decomposition(q))?);
        gamma.push(if q == 0 {
            Matrix::zeros(field, 0, r.dim(0))
        } else {
            restrict_to_algebraic(&seq.delta.blocks[q], r.decomposition(q), a.decomposition(q - 1))?
        });
    }
    for q in 0..=top {
        let nodes = [
            ("CH(A)", gamma.get(q + 1), &i[q]),
            ("CH(S)", Some(&i[q]), &j[q]),
            ("CH(R)", Some(&j[q]), &gamma[q]),
        ];
        for (name, incoming, outgoing) in nodes {
            let incoming = match incoming {
                Some(m) => m.clone(),
                None => Matrix::zeros(field, outgoing.cols(), 0),
            };
            if !is_exact(&incoming, outgoing)? {
                return Err(Error::ExactnessViolation(format!("{name}_{q} is not exact")));
            }
        }
    }
    Ok(ArSequence { s, r, a, homology: seq, i, j, gamma })
}

/// `τ : H(F) -> H(F, F \ S)` with `F \ S` realized as the closed
/// complement of the `S` cubes in `F`.
#[derive(Clone, Debug)]
pub struct Tau {
    pub z0: CubicalSet,
    pub h_f: GradedHomology,
    pub h_fs: GradedHomology,
    pub map: GradedMap,
}

pub fn tau(f_domain: &CubicalSet, s_cubes: &CubicalSet, field: Field) -> Result<Tau> {
    let z0 = f_domain.tops().intersection(s_cubes);
    let h_f = homology(&chain_complex(f_domain, field)?);
    let h_fs = homology(&relative_complex(f_domain, &closed_complement(f_domain, &z0), field)?);
    let map = inclusion_map(&h_f, &h_fs)?;
    Ok(Tau { z0, h_f, h_fs, map })
}

/// Everything computed for one triple in Case-1 coordinates: repeller pair
/// `(N0, N1)`, attractor pair `(N1, N2)`.
#[derive(Clone, Debug)]
pub struct ARDecomposition {
    pub triple: FiltrationTriple,
    pub sequence: ArSequence,
    /// `Inv(cl(N0 \ N2))` as top cubes.
    pub s_cubes: CubicalSet,
    pub emitter: EmitterData,
    pub receiver: ReceiverData,
    pub tau: Tau,
    pub witness: AdmissibleWitness,
    pub omega: OmegaMap,
    /// `Ω ∘ τ ∘ ∂_F`, indexed like [`ArSequence::gamma`].
    pub gamma_fact: Vec<Matrix>,
    pub options: Options,
}

impl ARDecomposition {
    pub fn gamma_les(&self) -> &[Matrix] {
        &self.sequence.gamma
    }

    pub fn field(&self) -> Field {
        self.sequence.s.field()
    }

    pub fn top(&self) -> usize {
        self.sequence.s.top()
    }
}

/// The witness of the proof's first case (`n = 0`, `U = F`) when it holds,
/// otherwise the general search.
pub fn case1_witness(
    f: &MultivaluedMap,
    triple: &FiltrationTriple,
    f_domain: &CubicalSet,
    z0: &CubicalSet,
    options: &Options,
) -> Result<AdmissibleWitness> {
    let ws = &triple.a.ws;
    let outside = f_domain.tops().difference(z0);
    if z0.is_subset(ws) && outside.intersection(ws).is_empty() {
        return Ok(AdmissibleWitness { z: f_domain.clone(), z0: z0.clone(), n: 0, r: options.r_max, u: f_domain.clone() });
    }
    check_admissible(f, &triple.a, f_domain, z0, options.n_max, options.r_max)
}

pub fn gamma_factored(
    emitter: &EmitterData,
    tau: &Tau,
    omega: &OmegaMap,
    field: Field,
) -> Result<Vec<Matrix>> {
    let top = emitter.index.top();
    let mut out = vec![Matrix::zeros(field, 0, emitter.index.dim(0))];
    for q in 1..=top {
        out.push(omega.blocks[q - 1].mul(&tau.map.blocks[q - 1])?.mul(&emitter.emitter[q])?);
    }
    Ok(out)
}

pub fn ar_decomposition(f: &MultivaluedMap, triple: &FiltrationTriple, field: Field, options: &Options) -> Result<ARDecomposition> {
    let sequence = ar_exact_sequence(f, triple, field)?;
    let s_cubes = triple.s.report.invariant.clone();
    let emitter = emitter_from_index(f, sequence.r.clone())?;
    let receiver = receiver_omega(f, sequence.a.clone())?;
    let f_domain = triple.r.f_domain.clone();
    let tau = tau(&f_domain, &s_cubes, field)?;
    let witness = case1_witness(f, triple, &f_domain, &tau.z0, options)?;
    let omega = receiver_Omega(f, &receiver, &witness)?;
    let gamma_fact = gamma_factored(&emitter, &tau, &omega, field)?;
    Ok(ARDecomposition {
        triple: triple.clone(),
        sequence,
        s_cubes,
        emitter,
        receiver,
        tau,
        witness,
        omega,
        gamma_fact,
        options: options.clone(),
    })
}

/// One row of the dimension identity
/// `dim CH_q(A) + dim CH_q(R) = dim CH_q(S) + rank Γ_q + rank Γ_{q+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorseRow {
    pub q: usize,
    pub ch_a: usize,
    pub ch_r: usize,
    pub ch_s: usize,
    pub rank_q: usize,
    pub rank_q1: usize,
    pub holds: bool,
}

pub fn morse_equation_check(seq: &ArSequence) -> Vec<MorseRow> {
    let rank = |q: usize| seq.gamma.get(q).map_or(0, Matrix::rank);
    (0..=seq.s.top())
        .map(|q| {
            let (ch_a, ch_r, ch_s) = (seq.a.dim(q), seq.r.dim(q), seq.s.dim(q));
            let (rank_q, rank_q1) = (rank(q), rank(q + 1));
            MorseRow { q, ch_a, ch_r, ch_s, rank_q, rank_q1, holds: ch_a + ch_r == ch_s + rank_q + rank_q1 }
        })
        .collect()
}

/// `rank Γ_q <= dim H_{q-1}(F, F \ S)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankBoundRow {
    pub q: usize,
    pub rank: usize,
    pub bound: usize,
    pub holds: bool,
}

pub fn gamma_rank_bound(decomp: &ARDecomposition) -> Vec<RankBoundRow> {
    (1..=decomp.top())
        .map(|q| {
            let rank = decomp.gamma_les()[q].rank();
            let bound = decomp.tau.h_fs.dim(q - 1);
            RankBoundRow { q, rank, bound, holds: rank <= bound }
        })
        .collect()
}
