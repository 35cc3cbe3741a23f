use std::collections::BTreeMap;

use crate::algebra::{algebraic_part, restrict_to_algebraic, CanonicalDecomposition, EndoSpace};
use crate::cubical::{closed_complement, closure, neighborhood, relative_complex, ChainComplex, Cube, CubicalSet};
use crate::dynamics::{selector_chain_map, ChainSelector, FiltrationPair, MultivaluedMap};
use crate::error::{Error, Result};
use crate::homology::{check_chain_map, homology, inclusion_map, induced_map, ChainMap, GradedHomology, GradedMap};
use crate::index::{change_coordinates, ConleyIndex};
use crate::linalg::{Field, Matrix, Scalar};

use super::CheckReport;

/// `ω_{N/L} : H(N, K) -> CH(N/L)` with `K` the closed complement of the
/// stable set joined with `L`.
#[derive(Clone, Debug)]
pub struct ReceiverData {
    pub index: ConleyIndex,
    pub k: CubicalSet,
    pub h_nk: GradedHomology,
    pub nk_map: GradedMap,
    pub nk_decompositions: Vec<CanonicalDecomposition>,
    /// `i_* : H(N, L) -> H(N, K)`.
    pub i: GradedMap,
    /// `blocks[q] : H_q(N, K) -> CH_q` in the algebraic basis of `CH_q`.
    pub omega: Vec<Matrix>,
}

/// `cl(tops(N) \ W^s) ∪ L`.
pub fn stable_complement(pair: &FiltrationPair) -> CubicalSet {
    closure(&pair.n.tops().difference(&pair.ws)).union(&pair.l)
}

pub fn receiver_omega(f: &MultivaluedMap, index: ConleyIndex) -> Result<ReceiverData> {
    let field = index.field();
    let pair = index.pair.clone();
    let k = stable_complement(&pair);
    let cc = relative_complex(&pair.n, &k, field)?;
    let h_nk = homology(&cc);
    let mut sel = ChainSelector::new(f);
    let chain = selector_chain_map(&mut sel, &cc, &cc).map_err(|e| match e {
        Error::NotChainMap(m) => Error::DecompositionFailure(format!("complement of W^s is not invariant: {m}")),
        other => other,
    })?;
    let nk_map = induced_map(&chain, &h_nk, &h_nk)?;
    let nk_decompositions = nk_map
        .blocks
        .iter()
        .map(|m| algebraic_part(&EndoSpace::new(m.clone())?))
        .collect::<Result<Vec<_>>>()?;
    let i = inclusion_map(&index.pair_homology.homology, &h_nk)?;
    let mut omega = Vec::new();
    for q in 0..=index.top() {
        let dec = &nk_decompositions[q];
        let restricted = restrict_to_algebraic(&i.blocks[q], index.decomposition(q), dec)
            .map_err(|e| Error::DecompositionFailure(format!("degree {q}: {e}")))?;
        let inv = restricted.inverse().map_err(|_| {
            Error::DecompositionFailure(format!(
                "degree {q}: i_* CH has dimension {} against an algebraic part of dimension {}",
                restricted.rank(),
                dec.algebraic_dim()
            ))
        })?;
        let w = inv.mul(&dec.projection)?;
        let back = w.mul(&i.blocks[q])?.mul(&index.decomposition(q).algebraic_basis)?;
        if back != Matrix::identity(field, index.dim(q)) {
            return Err(Error::InternalInconsistency(format!("ω i_* is not the identity in degree {q}")));
        }
        if w.mul(&nk_map.blocks[q])? != index.phi(q).mul(&w)? {
            return Err(Error::InternalInconsistency(format!("ω is not equivariant in degree {q}")));
        }
        omega.push(w);
    }
    Ok(ReceiverData { index, k, h_nk, nk_map, nk_decompositions, i, omega })
}

/// A set `Z` with a part `Z0` pushed into the stable set in `n` steps, and
/// the neighbourhood `U` of `Z0` used for excision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleWitness {
    pub z: CubicalSet,
    pub z0: CubicalSet,
    pub n: usize,
    pub r: usize,
    pub u: CubicalSet,
}

fn images(f: &MultivaluedMap, tops: &CubicalSet, n: usize, n_set: &CubicalSet) -> Result<Option<CubicalSet>> {
    let mut cur = tops.clone();
    for _ in 0..n {
        cur = f.image(&cur)?;
        if !cur.is_subset(n_set) {
            return Ok(None);
        }
    }
    Ok(Some(cur))
}

/// Smallest `n`, then largest `r`, for which (A1) and (A2) hold.
pub fn check_admissible(
    f: &MultivaluedMap,
    pair: &FiltrationPair,
    z: &CubicalSet,
    z0: &CubicalSet,
    n_max: usize,
    r_max: usize,
) -> Result<AdmissibleWitness> {
    let z = closure(z);
    let z0 = z0.tops();
    if !z0.is_subset(&z) {
        return Err(Error::NotAdmissibleWithinBounds("Z0 is not contained in Z".into()));
    }
    let ntops = pair.n.tops();
    let mut last = String::from("no candidate tried");
    for n in 0..=n_max {
        let a1 = match images(f, &z0, n, &ntops)? {
            Some(img) if img.is_subset(&pair.ws) => true,
            Some(img) => {
                let bad = img.difference(&pair.ws).iter().next().cloned();
                last = format!("(A1) fails at n={n}: f^n(Z0) reaches {bad:?} outside W^s");
                false
            }
            None => {
                last = format!("(A1) fails at n={n}: f^k(Z0) leaves N");
                false
            }
        };
        if !a1 {
            continue;
        }
        for r in (0..=r_max).rev() {
            let u = closure(&neighborhood(&z, &z0, r));
            let outside = u.tops().difference(&z0);
            let ok = match images(f, &outside, n, &ntops)? {
                Some(img) => {
                    let hit = img.intersection(&pair.ws);
                    if hit.is_empty() {
                        true
                    } else {
                        last = format!("(A2) fails at n={n}, r={r}: f^n(U\\Z0) meets W^s at {:?}", hit.iter().next());
                        false
                    }
                }
                None => {
                    last = format!("(A2) fails at n={n}, r={r}: f^k(U\\Z0) leaves N");
                    false
                }
            };
            if ok {
                return Ok(AdmissibleWitness { z: z.clone(), z0: CubicalSet::from_cubes(z.ambient(), z0.iter().cloned())?, n, r, u });
            }
        }
    }
    Err(Error::NotAdmissibleWithinBounds(last))
}

/// `Ω_{N/L} : H(Z, Z \ Z0) -> CH(N/L)`, one block per degree, with the
/// homology of the source in its own basis.
#[derive(Clone, Debug)]
pub struct OmegaMap {
    pub witness: AdmissibleWitness,
    pub h_z: GradedHomology,
    pub blocks: Vec<Matrix>,
}

/// The source pair `(Z, cl(Z \ cl(Z0)))` of `Ω`.
pub fn omega_source(z: &CubicalSet, z0: &CubicalSet, field: Field) -> Result<ChainComplex> {
    let z = closure(z);
    relative_complex(&z, &closed_complement(&z, z0), field)
}

fn push_chain(sel: &mut ChainSelector, c: &Cube, n: usize) -> Result<Vec<(Cube, i64)>> {
    let mut cur: BTreeMap<Cube, i64> = BTreeMap::from([(c.clone(), 1)]);
    for _ in 0..n {
        let mut next: BTreeMap<Cube, i64> = BTreeMap::new();
        for (g, k) in cur {
            let img = sel.apply(&g).map_err(|e| match e {
                Error::OutOfDomain(m) => Error::SelectorLeak(format!("chain leaves the map domain at {m}")),
                other => other,
            })?;
            for (h, s) in img {
                *next.entry(h).or_insert(0) += k * s;
            }
        }
        next.retain(|_, v| *v != 0);
        cur = next;
    }
    Ok(cur.into_iter().collect())
}

/// `f^n` at chain level from `C(U, U')` into `C(N, K)`.
fn pushed_chain_map(f: &MultivaluedMap, src: &ChainComplex, dst: &ChainComplex, n: usize) -> Result<ChainMap> {
    let field = src.field();
    let mut sel = ChainSelector::new(f);
    let mut out = Vec::with_capacity(src.top() + 1);
    for q in 0..=src.top() {
        let mut m = Matrix::zeros(field, dst.rank(q), src.rank(q));
        for (j, c) in src.generators(q).iter().enumerate() {
            let terms: Vec<(Cube, Scalar)> =
                push_chain(&mut sel, c, n)?.into_iter().map(|(g, k)| (g, field.from_i64(k))).collect();
            let v = dst
                .project(q, &terms)
                .map_err(|leak| Error::SelectorLeak(format!("f^{n} of {c} reaches {leak} outside N")))?;
            for (i, s) in v.into_iter().enumerate() {
                if !s.is_zero() {
                    m.set(i, j, s);
                }
            }
        }
        out.push(m);
    }
    check_chain_map(&out, src, dst).map_err(|e| Error::SelectorLeak(format!("pushed chains are not relative cycles: {e}")))?;
    Ok(out)
}

#[allow(non_snake_case)]
pub fn receiver_Omega(f: &MultivaluedMap, receiver: &ReceiverData, witness: &AdmissibleWitness) -> Result<OmegaMap> {
    let field = receiver.index.field();
    let cc_z = omega_source(&witness.z, &witness.z0, field)?;
    let h_z = homology(&cc_z);
    let cc_u = relative_complex(&witness.u, &closed_complement(&witness.u, &witness.z0), field)?;
    let h_u = homology(&cc_u);
    let excision = inclusion_map(&h_u, &h_z)?;
    let push = pushed_chain_map(f, &cc_u, receiver.h_nk.complex(), witness.n)?;
    let pushed = induced_map(&push, &h_u, &receiver.h_nk)?;
    let mut blocks = Vec::new();
    for q in 0..=h_z.top() {
        let e_inv = excision.blocks[q].inverse().map_err(|_| {
            Error::DecompositionFailure(format!("excision onto U fails in degree {q}; the S interface is degenerate"))
        })?;
        let back = receiver.index.phi_inverse_power(q, witness.n)?;
        blocks.push(back.mul(&receiver.omega[q])?.mul(&pushed.blocks[q])?.mul(&e_inv)?);
    }
    Ok(OmegaMap { witness: witness.clone(), h_z, blocks })
}

/// `Ω` of one relative cycle of `C(Z, Z \ Z0)` in degree `q`.
pub fn omega_of_cycle(map: &OmegaMap, q: usize, cycle: &[Scalar]) -> Result<Vec<Scalar>> {
    let class = map
        .h_z
        .classify(q, cycle)?
        .ok_or_else(|| Error::NotChainMap(format!("chain in degree {q} is not a relative cycle")))?;
    let col = Matrix::column_vector(map.h_z.field(), class);
    Ok(map.blocks[q].mul(&col)?.column(0))
}

/// `Ω_{N'/L'} = φ'^{-k} r_* Ω_{N/L}` for nested pairs, with `r_*` taken in
/// the semi-lag `k` form `φ'^k ∘ incl_*`.
#[allow(non_snake_case)]
pub fn Omega_independence_check(
    f: &MultivaluedMap,
    small: &ReceiverData,
    big: &ReceiverData,
    k: usize,
    z: &CubicalSet,
    z0: &CubicalSet,
    n_max: usize,
    r_max: usize,
) -> Result<CheckReport> {
    let field = small.index.field();
    let se = crate::dynamics::standard_shift_equivalence(f, &small.index.pair, &big.index.pair, field, n_max)?;
    let r = change_coordinates(&small.index, &big.index, &se)?;
    let wa = check_admissible(f, &small.index.pair, z, z0, n_max, r_max)?;
    let wb = check_admissible(f, &big.index.pair, z, z0, n_max, r_max)?;
    let oa = receiver_Omega(f, small, &wa)?;
    let ob = receiver_Omega(f, big, &wb)?;
    for q in 0..oa.blocks.len() {
        let r_k = big.index.phi(q).pow(k)?.mul(&r[q])?;
        let rhs = big.index.phi_inverse_power(q, k)?.mul(&r_k)?.mul(&oa.blocks[q])?;
        if ob.blocks[q] != rhs {
            return Ok(CheckReport::fail(format!("Ω' != φ'^-{k} r_* Ω in degree {q}")));
        }
    }
    Ok(CheckReport::pass())
}

/// `ω' ∘ (f^j)_* = φ'^j ∘ r_* ∘ ω` from `H(N, K)` to `CH(N'/L')` for nested
/// pairs, with `j` the least number of steps carrying `(N, K)` into
/// `(N', K')` as a map of pairs.
pub fn omega_se_check(f: &MultivaluedMap, small: &ReceiverData, big: &ReceiverData, n_max: usize) -> Result<CheckReport> {
    let field = small.index.field();
    let se = crate::dynamics::standard_shift_equivalence(f, &small.index.pair, &big.index.pair, field, n_max)?;
    let r = change_coordinates(&small.index, &big.index, &se)?;
    let (src, dst) = (small.h_nk.complex(), big.h_nk.complex());
    let mut last = None;
    for j in 0..=n_max {
        let push = match pushed_chain_map(f, src, dst, j) {
            Ok(p) => p,
            Err(e @ Error::SelectorLeak(_)) => {
                last = Some(e);
                continue;
            }
            Err(e) => return Err(e),
        };
        let pushed = induced_map(&push, &small.h_nk, &big.h_nk)?;
        for q in 0..=small.index.top() {
            let lhs = big.omega[q].mul(&pushed.blocks[q])?;
            let rhs = big.index.phi(q).pow(j)?.mul(&r[q])?.mul(&small.omega[q])?;
            if lhs != rhs {
                return Ok(CheckReport::fail(format!("ω' (f^{j})_* != φ'^{j} r_* ω in degree {q}")));
            }
        }
        return Ok(CheckReport::pass());
    }
    Err(last.unwrap_or_else(|| Error::SelectorLeak("no step count maps (N, K) into (N', K')".into())))
}

/// `Ω' = Ω j_*` for `Z' ⊆ Z` with `Z0' = Z' ∩ Z0`.
#[allow(non_snake_case)]
pub fn Omega_restriction_check(
    f: &MultivaluedMap,
    receiver: &ReceiverData,
    whole: &OmegaMap,
    z_sub: &CubicalSet,
    n_max: usize,
    r_max: usize,
) -> Result<CheckReport> {
    let z_sub = closure(z_sub);
    if !z_sub.is_subset(&whole.witness.z) {
        return Err(Error::NotSubcomplex("Z' is not inside Z".into()));
    }
    let z0_sub = z_sub.tops().intersection(&whole.witness.z0);
    let w = check_admissible(f, &receiver.index.pair, &z_sub, &z0_sub, n_max, r_max)?;
    let part = receiver_Omega(f, receiver, &w)?;
    let j = inclusion_map(&part.h_z, &whole.h_z)?;
    for q in 0..part.blocks.len() {
        if part.blocks[q] != whole.blocks[q].mul(&j.blocks[q])? {
            return Ok(CheckReport::fail(format!("Ω' != Ω j_* in degree {q}")));
        }
    }
    Ok(CheckReport::pass())
}
