use crate::cubical::{closure, components, neighborhood, CubicalSet};
use crate::dynamics::{standard_shift_equivalence, FiltrationPair, FiltrationTriple, MultivaluedMap};
use crate::emit_receive::{check_admissible, emitter_from_index, receiver_Omega, receiver_omega, omega_source};
use crate::error::{Error, Result};
use crate::homology::{homology, inclusion_map, GradedHomology};
use crate::index::{change_coordinates, conley_index, ConleyIndex};
use crate::linalg::Matrix;

use super::{ar_decomposition, gamma_factored, tau, ARDecomposition};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossValidation {
    pub equal: bool,
    /// `(rank Γ_les, rank Γ_fact)` per degree.
    pub ranks: Vec<(usize, usize)>,
}

/// Case 1: the sequence-defined and the factored `Γ` agree on the nose.
pub fn gamma_cross_validate(decomp: &ARDecomposition) -> Result<CrossValidation> {
    let les = decomp.gamma_les();
    let fact = &decomp.gamma_fact;
    let ranks: Vec<(usize, usize)> = les.iter().zip(fact).map(|(a, b)| (a.rank(), b.rank())).collect();
    let equal = les == fact.as_slice();
    if !equal {
        let q = les.iter().zip(fact).position(|(a, b)| a != b).unwrap_or(0);
        return Err(Error::CrossValidationFailure(format!(
            "Γ from the exact sequence differs from Ω τ ∂_F in degree {q}"
        )));
    }
    Ok(CrossValidation { equal, ranks })
}

/// `CH(from) -> CH(to)` through inclusion-induced shift equivalences. Pairs
/// that are not nested either way are compared through `(N ∪ N', L ∪ L')`.
pub fn coordinate_change(
    f: &MultivaluedMap,
    from: &ConleyIndex,
    to: &ConleyIndex,
    n_max: usize,
) -> Result<Vec<Matrix>> {
    let (p, q) = (&from.pair, &to.pair);
    let field = from.field();
    if p.n.is_subset(&q.n) && p.l.is_subset(&q.l) {
        let se = standard_shift_equivalence(f, p, q, field, n_max)?;
        return change_coordinates(from, to, &se);
    }
    if q.n.is_subset(&p.n) && q.l.is_subset(&p.l) {
        let se = standard_shift_equivalence(f, q, p, field, n_max)?;
        return change_coordinates(to, from, &se)?.iter().map(Matrix::inverse).collect();
    }
    let join = FiltrationPair::new(f, &p.n.union(&q.n), &p.l.union(&q.l))
        .map_err(|e| Error::NotNested(format!("pairs are not nested and their union is not a pair: {e}")))?;
    let join = conley_index(f, &join, field)?;
    let a = coordinate_change(f, from, &join, n_max)?;
    let b = coordinate_change(f, to, &join, n_max)?;
    a.iter().zip(&b).map(|(a, b)| b.inverse()?.mul(a)).collect()
}

/// `N1^{(k)}`: `E_0 = N1`, `E_{j+1} = E_j ∪ {P ⊆ N0 : f(P) ∩ N0 ⊆ E_j}`.
pub fn enlarge_attractor_region(f: &MultivaluedMap, triple: &FiltrationTriple, k: usize) -> Result<CubicalSet> {
    let n0 = triple.n0().tops();
    let mut e = triple.n1().tops();
    for _ in 0..k {
        let mut next = e.clone();
        for p in n0.difference(&e).iter() {
            if f.image_of(p)?.intersection(&n0).is_subset(&e) {
                next.insert(p.clone());
            }
        }
        if next == e {
            break;
        }
        e = next;
    }
    Ok(closure(&e))
}

#[derive(Clone, Debug)]
pub struct CaseReport {
    pub holds: bool,
    /// Power `s` of the target index map in `Γ' = φ_A'^s c_A Γ c_R`.
    pub shift: i64,
    pub ranks: Vec<(usize, usize)>,
    pub gamma: Vec<Matrix>,
    pub detail: String,
}

fn compare(
    alt: &[Matrix],
    les: &[Matrix],
    c_r: &[Matrix],
    c_a: &[Matrix],
    a_alt: &ConleyIndex,
    n_max: usize,
) -> Result<CaseReport> {
    let ranks: Vec<(usize, usize)> = les.iter().zip(alt).map(|(a, b)| (a.rank(), b.rank())).collect();
    let mut transported = vec![alt[0].clone()];
    for q in 1..les.len() {
        transported.push(c_a[q - 1].mul(&les[q])?.mul(&c_r[q])?);
    }
    let shifted = |s: i64| -> Result<bool> {
        for q in 1..les.len() {
            let phi = a_alt.phi(q - 1);
            let p = if s >= 0 { phi.pow(s as usize)? } else { phi.inverse()?.pow((-s) as usize)? };
            if p.mul(&transported[q])? != alt[q] {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let mut found = None;
    for m in 0..=n_max as i64 {
        if shifted(m)? {
            found = Some(m);
            break;
        }
        if m > 0 && shifted(-m)? {
            found = Some(-m);
            break;
        }
    }
    let ranks_agree = ranks.iter().all(|(a, b)| a == b);
    let (holds, detail) = match found {
        Some(s) if ranks_agree => (true, format!("agrees after shift {s}")),
        _ => (false, "no shift within bounds identifies the two Γ".to_string()),
    };
    Ok(CaseReport { holds, shift: found.unwrap_or(0), ranks, gamma: alt.to_vec(), detail })
}

/// Case 2: recompute with the attractor region enlarged `k` steps.
pub fn gamma_case2(f: &MultivaluedMap, decomp: &ARDecomposition, k: usize) -> Result<CaseReport> {
    let field = decomp.field();
    let n1k = enlarge_attractor_region(f, &decomp.triple, k)?;
    let triple = FiltrationTriple::new(f, decomp.triple.n0(), &n1k, decomp.triple.n2())?;
    let other = ar_decomposition(f, &triple, field, &decomp.options)?;
    gamma_cross_validate(&other)?;
    let n_max = decomp.options.n_max;
    let c_r = coordinate_change(f, &decomp.sequence.r, &other.sequence.r, n_max)?;
    let c_a = coordinate_change(f, &decomp.sequence.a, &other.sequence.a, n_max)?;
    // Γ' c_R = c_A Γ, written with c_R inverted on the source side.
    let c_r_inv = c_r.iter().map(Matrix::inverse).collect::<Result<Vec<_>>>()?;
    let report = compare(&other.gamma_fact, decomp.gamma_les(), &c_r_inv, &c_a, &other.sequence.a, n_max)?;
    if !report.holds {
        return Err(Error::CrossValidationFailure(format!("enlarged attractor region (k = {k}): {}", report.detail)));
    }
    Ok(report)
}

/// Case 3: `Ω_{N_A/L_A} τ ∂_{F_R}` for another repeller pair and another
/// attractor pair.
pub fn gamma_case3(
    f: &MultivaluedMap,
    decomp: &ARDecomposition,
    repeller: (&CubicalSet, &CubicalSet),
    attractor: (&CubicalSet, &CubicalSet),
) -> Result<CaseReport> {
    let field = decomp.field();
    let opts = &decomp.options;
    let r_pair = FiltrationPair::new(f, repeller.0, repeller.1)?;
    let a_pair = FiltrationPair::new(f, attractor.0, attractor.1)?;
    let r_idx = conley_index(f, &r_pair, field)?;
    let a_idx = conley_index(f, &a_pair, field)?;
    let emitter = emitter_from_index(f, r_idx.clone())?;
    let receiver = receiver_omega(f, a_idx.clone())?;
    let t = tau(&r_pair.f_domain, &decomp.s_cubes, field)?;
    let witness = check_admissible(f, &a_pair, &r_pair.f_domain, &t.z0, opts.n_max, opts.r_max)?;
    let omega = receiver_Omega(f, &receiver, &witness)?;
    let alt = gamma_factored(&emitter, &t, &omega, field)?;
    let c_r = coordinate_change(f, &r_idx, &decomp.sequence.r, opts.n_max)?;
    let c_a = coordinate_change(f, &decomp.sequence.a, &a_idx, opts.n_max)?;
    let report = compare(&alt, decomp.gamma_les(), &c_r, &c_a, &a_idx, opts.n_max)?;
    if !report.holds {
        return Err(Error::CrossValidationFailure(format!("alternative pairs: {}", report.detail)));
    }
    Ok(report)
}

/// `Γ = Σ_i Ω_i τ_i ∂_F` over the closure-connected components of
/// `F ∩ S`.
#[derive(Clone, Debug)]
pub struct SumDecomposition {
    pub radius: usize,
    pub components: Vec<CubicalSet>,
    pub pieces: Vec<CubicalSet>,
    pub homologies: Vec<GradedHomology>,
    /// `gammas[i][q] : CH_q(R) -> CH_{q-1}(A)`.
    pub gammas: Vec<Vec<Matrix>>,
}

fn pairwise_disjoint(sets: &[CubicalSet]) -> bool {
    sets.iter().enumerate().all(|(i, a)| sets[i + 1..].iter().all(|b| a.intersection(b).is_empty()))
}

pub fn gamma_sum_decomposition(f: &MultivaluedMap, decomp: &ARDecomposition) -> Result<SumDecomposition> {
    let field = decomp.field();
    let opts = &decomp.options;
    let f_domain = &decomp.triple.r.f_domain;
    let comps = components(&decomp.tau.z0);
    let h_fs = &decomp.tau.h_fs;
    let mut chosen = None;
    for r in (0..=opts.r_max).rev() {
        let pieces: Vec<CubicalSet> = comps.iter().map(|c| closure(&neighborhood(f_domain, c, r))).collect();
        if !pairwise_disjoint(&pieces) {
            continue;
        }
        let homologies = pieces
            .iter()
            .zip(&comps)
            .map(|(z, z0)| Ok(homology(&omega_source(z, z0, field)?)))
            .collect::<Result<Vec<_>>>()?;
        let incl = homologies.iter().map(|h| inclusion_map(h, h_fs)).collect::<Result<Vec<_>>>()?;
        let mut e = Vec::new();
        for q in 0..=h_fs.top() {
            let mut m = Matrix::zeros(field, h_fs.dim(q), 0);
            for j in &incl {
                m = m.hstack(&j.blocks[q])?;
            }
            e.push(m);
        }
        if e.iter().all(Matrix::is_invertible) {
            chosen = Some((r, pieces, homologies, incl, e));
            break;
        }
    }
    let (radius, pieces, homologies, incl, e) = chosen.ok_or_else(|| {
        Error::ComponentsNotSeparable(format!(
            "no radius up to {} separates the {} components of F ∩ S",
            opts.r_max,
            comps.len()
        ))
    })?;
    let e_inv = e.iter().map(Matrix::inverse).collect::<Result<Vec<_>>>()?;
    let top = decomp.top();
    let mut gammas = Vec::new();
    let mut offsets = vec![0usize; top + 1];
    for (i, h) in homologies.iter().enumerate() {
        let whole = Omega_restriction(f, decomp, &pieces[i], &comps[i], h)?;
        let mut g = vec![Matrix::zeros(field, 0, decomp.sequence.r.dim(0))];
        for q in 1..=top {
            let d = q - 1;
            let rows: Vec<usize> = (offsets[d]..offsets[d] + h.dim(d)).collect();
            let tau_i = e_inv[d].select_rows(&rows).mul(&decomp.tau.map.blocks[d])?;
            let omega_i = decomp.omega.blocks[d].mul(&incl[i].blocks[d])?;
            if omega_i != whole[d] {
                return Err(Error::CrossValidationFailure(format!(
                    "Ω on component {i} differs from Ω restricted to it in degree {d}"
                )));
            }
            g.push(omega_i.mul(&tau_i)?.mul(&decomp.emitter.emitter[q])?);
        }
        for (d, o) in offsets.iter_mut().enumerate() {
            *o += h.dim(d);
        }
        gammas.push(g);
    }
    for q in 1..=top {
        let mut sum = Matrix::zeros(field, decomp.gamma_fact[q].rows(), decomp.gamma_fact[q].cols());
        for g in &gammas {
            sum = sum.add(&g[q])?;
        }
        if sum != decomp.gamma_fact[q] {
            return Err(Error::CrossValidationFailure(format!("Σ Γ_i != Γ in degree {q}")));
        }
    }
    Ok(SumDecomposition { radius, components: comps, pieces, homologies, gammas })
}

/// `Ω_i` computed on its own admissible pair `(Z_i, Z_i \ Z0_i)`.
#[allow(non_snake_case)]
fn Omega_restriction(
    f: &MultivaluedMap,
    decomp: &ARDecomposition,
    z: &CubicalSet,
    z0: &CubicalSet,
    h: &GradedHomology,
) -> Result<Vec<Matrix>> {
    let opts = &decomp.options;
    let w = check_admissible(f, &decomp.triple.a, z, z0, opts.n_max, opts.r_max)?;
    let om = receiver_Omega(f, &decomp.receiver, &w)?;
    if om.h_z.dims() != h.dims() {
        return Err(Error::InternalInconsistency("component homology mismatch".into()));
    }
    Ok(om.blocks)
}
