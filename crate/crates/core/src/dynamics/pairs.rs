use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::algebra::{SeIdentity, ShiftEquivalence, EndoSpace};
use crate::cubical::{closure, relative_complex, ChainComplex, Cube, CubicalSet};
use crate::error::{Error, Result};
use crate::homology::{check_chain_map, homology, ChainMap, GradedHomology, GradedMap, Provenance};
use crate::linalg::{Field, Matrix};

use super::map::{ChainSelector, MultivaluedMap};

/// Transition digraph of `f` restricted to the top cubes of a region.
struct Digraph {
    succ: BTreeMap<Cube, Vec<Cube>>,
}

impl Digraph {
    fn new(f: &MultivaluedMap, region: &CubicalSet) -> Result<Digraph> {
        let tops = region.tops();
        let mut succ = BTreeMap::new();
        for t in tops.iter() {
            let next: Vec<Cube> = f.image_of(t)?.iter().filter(|c| tops.contains(c)).cloned().collect();
            succ.insert(t.clone(), next);
        }
        Ok(Digraph { succ })
    }

    /// Largest subset in which every vertex keeps a successor (and, when
    /// `need_pred`, a predecessor).
    fn trim(&self, need_pred: bool) -> BTreeSet<Cube> {
        let mut alive: BTreeSet<Cube> = self.succ.keys().cloned().collect();
        loop {
            let mut has_pred: BTreeSet<&Cube> = BTreeSet::new();
            for v in &alive {
                for w in &self.succ[v] {
                    if alive.contains(w) {
                        has_pred.insert(w);
                    }
                }
            }
            let keep: BTreeSet<Cube> = alive
                .iter()
                .filter(|v| self.succ[*v].iter().any(|w| alive.contains(w)))
                .filter(|v| !need_pred || has_pred.contains(v))
                .cloned()
                .collect();
            if keep.len() == alive.len() {
                return alive;
            }
            alive = keep;
        }
    }
}

/// Top cubes of `region` lying on a bi-infinite walk inside it.
pub fn invariant_part(f: &MultivaluedMap, region: &CubicalSet) -> Result<CubicalSet> {
    let g = Digraph::new(f, region)?;
    CubicalSet::from_cubes(f.dimension(), g.trim(true))
}

/// Top cubes of `n` whose image block is not contained in `n`.
pub fn immediate_exit_set(f: &MultivaluedMap, n: &CubicalSet) -> Result<CubicalSet> {
    let tops = n.tops();
    let mut out = CubicalSet::empty(f.dimension());
    for t in tops.iter() {
        if !f.image_of(t)?.is_subset(&tops) {
            out.insert(t.clone());
        }
    }
    Ok(out)
}

/// Which filtration-pair condition failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairCondition {
    /// `L` is not a closed subset of the closed set `N`.
    Structure,
    /// `Inv(cl(N \ L))` reaches the frontier of `N`.
    Isolation,
    /// An exit cube lies outside `L`.
    ExitInL,
    /// The image of `L` meets `N \ L`.
    LMapsAway,
}

impl fmt::Display for PairCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PairCondition::Structure => "structure",
            PairCondition::Isolation => "(i) isolation",
            PairCondition::ExitInL => "(ii) exit set in L",
            PairCondition::LMapsAway => "(iii) f(L) misses N\\L",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairReport {
    pub valid: bool,
    pub condition: Option<PairCondition>,
    pub witness: Option<Cube>,
    pub message: String,
    /// Isolated invariant part of `cl(N \ L)` (top cubes).
    pub invariant: CubicalSet,
    pub exit_set: CubicalSet,
}

/// Tops within one step of `c`, including `c` itself.
fn ring(c: &Cube) -> Vec<Cube> {
    let mut out = vec![Vec::new()];
    for k in c.lo_corner() {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (k - 1..=k + 1).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out.iter().map(|lo| Cube::unit(lo)).collect()
}

pub fn validate_filtration_pair(f: &MultivaluedMap, n: &CubicalSet, l: &CubicalSet) -> Result<PairReport> {
    let d = f.dimension();
    let fail = |condition, witness: Option<Cube>, message: String, invariant, exit_set| PairReport {
        valid: false,
        condition: Some(condition),
        witness,
        message,
        invariant,
        exit_set,
    };
    let empty = CubicalSet::empty(d);
    if !n.is_closed() || !l.is_closed() || !l.is_subset(n) {
        return Ok(fail(
            PairCondition::Structure,
            None,
            "N and L must be closed with L inside N".into(),
            empty.clone(),
            empty,
        ));
    }
    let ntops = n.tops();
    let ltops = l.tops();
    let exit_set = immediate_exit_set(f, n)?;
    let invariant = invariant_part(f, &ntops.difference(&ltops))?;
    for q in invariant.iter() {
        if let Some(out) = ring(q).into_iter().find(|t| !ntops.contains(t)) {
            return Ok(fail(
                PairCondition::Isolation,
                Some(q.clone()),
                format!("invariant cube {q} touches {out} outside N"),
                invariant.clone(),
                exit_set,
            ));
        }
    }
    if let Some(e) = exit_set.iter().find(|e| !ltops.contains(e)) {
        return Ok(fail(
            PairCondition::ExitInL,
            Some(e.clone()),
            format!("exit cube {e} is not in L"),
            invariant,
            exit_set.clone(),
        ));
    }
    let rest = ntops.difference(&ltops);
    for t in ltops.iter() {
        if let Some(hit) = f.image_of(t)?.iter().find(|c| rest.contains(c)) {
            return Ok(fail(
                PairCondition::LMapsAway,
                Some(t.clone()),
                format!("image of {t} meets {hit} in N\\L"),
                invariant,
                exit_set,
            ));
        }
    }
    Ok(PairReport {
        valid: true,
        condition: None,
        witness: None,
        message: "valid filtration pair; isolated invariant part found".into(),
        invariant,
        exit_set,
    })
}

/// `W* = lim (W -> f(W) ∩ N)` from `W = N` as a closed set, the part
/// `F = W* ∩ L`, and the number of steps to stabilize.
pub fn local_unstable(f: &MultivaluedMap, n: &CubicalSet, l: &CubicalSet) -> Result<(CubicalSet, CubicalSet, usize)> {
    let ntops = n.tops();
    let mut w = ntops.clone();
    let mut steps = 0;
    loop {
        let next = f.image(&w)?.intersection(&ntops);
        if next == w {
            break;
        }
        w = next;
        steps += 1;
    }
    let wu = closure(&w);
    let fd = wu.intersection(l);
    Ok((wu, fd, steps))
}

/// Top cubes of `N \ L` from which an infinite walk stays in `N \ L`.
pub fn local_stable(f: &MultivaluedMap, n: &CubicalSet, l: &CubicalSet) -> Result<CubicalSet> {
    let region = n.tops().difference(&l.tops());
    let g = Digraph::new(f, &region)?;
    CubicalSet::from_cubes(f.dimension(), g.trim(false))
}

/// A validated pair `(N, L)` with its cached derived sets.
#[derive(Clone, Debug)]
pub struct FiltrationPair {
    pub n: CubicalSet,
    pub l: CubicalSet,
    pub report: PairReport,
    /// Closed local unstable set `W^u_loc`.
    pub wu: CubicalSet,
    /// `F = W^u_loc ∩ L`.
    pub f_domain: CubicalSet,
    pub wu_steps: usize,
    /// Top cubes of the may-stay stable set.
    pub ws: CubicalSet,
}

impl FiltrationPair {
    /// Closes `n` and `l`, then validates; an invalid pair is an error.
    pub fn new(f: &MultivaluedMap, n: &CubicalSet, l: &CubicalSet) -> Result<FiltrationPair> {
        let n = closure(n);
        let l = closure(l);
        let report = validate_filtration_pair(f, &n, &l)?;
        if !report.valid {
            return Err(Error::InvalidPair(format!(
                "condition {} fails: {}",
                report.condition.expect("invalid report names a condition"),
                report.message
            )));
        }
        let (wu, f_domain, wu_steps) = local_unstable(f, &n, &l)?;
        let ws = local_stable(f, &n, &l)?;
        Ok(FiltrationPair { n, l, report, wu, f_domain, wu_steps, ws })
    }

    pub fn complex(&self, field: Field) -> Result<ChainComplex> {
        relative_complex(&self.n, &self.l, field)
    }
}

/// `N0 ⊇ N1 ⊇ N2` with the three derived pairs validated.
#[derive(Clone, Debug)]
pub struct FiltrationTriple {
    pub s: FiltrationPair,
    pub r: FiltrationPair,
    pub a: FiltrationPair,
}

impl FiltrationTriple {
    pub fn new(f: &MultivaluedMap, n0: &CubicalSet, n1: &CubicalSet, n2: &CubicalSet) -> Result<FiltrationTriple> {
        let (c0, c1, c2) = (closure(n0), closure(n1), closure(n2));
        if !c2.is_subset(&c1) || !c1.is_subset(&c0) {
            return Err(Error::InvalidPair("N0 ⊇ N1 ⊇ N2 fails".into()));
        }
        let wrap = |role: &str, e: Error| match e {
            Error::InvalidPair(m) => Error::InvalidPair(format!("{role} pair: {m}")),
            other => other,
        };
        Ok(FiltrationTriple {
            s: FiltrationPair::new(f, &c0, &c2).map_err(|e| wrap("S (N0,N2)", e))?,
            r: FiltrationPair::new(f, &c0, &c1).map_err(|e| wrap("R (N0,N1)", e))?,
            a: FiltrationPair::new(f, &c1, &c2).map_err(|e| wrap("A (N1,N2)", e))?,
        })
    }

    pub fn n0(&self) -> &CubicalSet {
        &self.s.n
    }

    pub fn n1(&self) -> &CubicalSet {
        &self.r.l
    }

    pub fn n2(&self) -> &CubicalSet {
        &self.s.l
    }
}

/// The selector as a chain map `C(X, A) -> C(X', A')`. A generator whose
/// selected chain leaves `X'` is a tightness failure.
pub fn selector_chain_map(sel: &mut ChainSelector, src: &ChainComplex, dst: &ChainComplex) -> Result<ChainMap> {
    let field = src.field();
    let mut out = Vec::with_capacity(src.top() + 1);
    for q in 0..=src.top() {
        let mut m = Matrix::zeros(field, dst.rank(q), src.rank(q));
        for (j, c) in src.generators(q).iter().enumerate() {
            let terms: Vec<(Cube, crate::linalg::Scalar)> =
                sel.apply(c)?.into_iter().map(|(g, k)| (g, field.from_i64(k))).collect();
            let v = dst.project(q, &terms).map_err(|leak| {
                Error::TightnessFailure(format!("selected chain of {c} reaches {leak}"))
            })?;
            for (i, s) in v.into_iter().enumerate() {
                if !s.is_zero() {
                    m.set(i, j, s);
                }
            }
        }
        out.push(m);
    }
    check_chain_map(&out, src, dst)?;
    Ok(out)
}

/// `f_{N/L}` on `C(N, L)`, validated as a chain map.
pub fn quotient_chain_map(f: &MultivaluedMap, n: &CubicalSet, l: &CubicalSet, field: Field) -> Result<(ChainComplex, ChainMap)> {
    let cc = relative_complex(n, l, field)?;
    let mut sel = ChainSelector::new(f);
    let m = selector_chain_map(&mut sel, &cc, &cc)?;
    Ok((cc, m))
}

/// Homology of a pair with its index map.
#[derive(Clone, Debug)]
pub struct PairHomology {
    pub homology: GradedHomology,
    pub chain_map: ChainMap,
    pub map: GradedMap,
}

pub fn pair_homology(f: &MultivaluedMap, pair: &FiltrationPair, field: Field) -> Result<PairHomology> {
    let (cc, chain_map) = quotient_chain_map(f, &pair.n, &pair.l, field)?;
    let h = homology(&cc);
    let map = crate::homology::induced_map(&chain_map, &h, &h)?;
    Ok(PairHomology { homology: h, chain_map, map })
}

/// The inclusion-form shift equivalence between nested pairs, in homology.
#[derive(Clone, Debug)]
pub struct StandardShift {
    pub source: PairHomology,
    pub target: PairHomology,
    /// `r_* : H(N, L) -> H(N', L')`, induced by `[x] -> [x]`.
    pub r: GradedMap,
    /// `s_* = (f_{N/L})^l ρ (f_{N'/L'})^k` on homology.
    pub s: GradedMap,
    pub k: usize,
    pub l: usize,
    pub lag: usize,
    /// One shift equivalence per degree.
    pub per_degree: Vec<ShiftEquivalence>,
}

/// Applies `map` `times` times to the columns of `m`.
fn iterate(map: &Matrix, m: &Matrix, times: usize) -> Result<Matrix> {
    let mut cur = m.clone();
    for _ in 0..times {
        cur = map.mul(&cur)?;
    }
    Ok(cur)
}

pub fn standard_shift_equivalence(
    f: &MultivaluedMap,
    small: &FiltrationPair,
    big: &FiltrationPair,
    field: Field,
    n_max: usize,
) -> Result<StandardShift> {
    if !small.n.is_subset(&big.n) || !small.l.is_subset(&big.l) {
        return Err(Error::NotNested("(N, L) must lie inside (N', L')".into()));
    }
    let source = pair_homology(f, small, field)?;
    let target = pair_homology(f, big, field)?;
    let r = crate::homology::inclusion_map(&source.homology, &target.homology)?;
    let hs = &source.homology;
    let ht = &target.homology;
    let top = hs.top();
    // ρ: restriction of chains of (N', L') to the generators of (N, L)
    let rho: Vec<Matrix> = (0..=top)
        .map(|q| {
            let mut m = Matrix::zeros(field, hs.complex().rank(q), ht.complex().rank(q));
            for (j, c) in ht.complex().generators(q).iter().enumerate() {
                if let Some(i) = hs.complex().index_of(q, c) {
                    m.set(i, j, field.one());
                }
            }
            m
        })
        .collect();
    for m in 0..=n_max {
        for k in 0..=m {
            let l = m - k;
            let mut blocks = Vec::with_capacity(top + 1);
            let mut ok = true;
            for q in 0..=top {
                let pushed = iterate(&target.chain_map[q], &ht.representatives(q), k)?;
                let restricted = rho[q].mul(&pushed)?;
                let back = iterate(&source.chain_map[q], &restricted, l)?;
                match hs.classify_columns(q, &back) {
                    Ok(x) => blocks.push(x),
                    Err(Error::NotChainMap(_)) => {
                        ok = false;
                        break;
                    }
                    Err(e) => return Err(e),
                }
                if !boundaries_preserved(&source, &target, &rho[q], q, k, l)? {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            let s = GradedMap { field, blocks, lowers_degree: false, provenance: Provenance::ChainMap };
            let per_degree: Vec<ShiftEquivalence> = (0..=top)
                .map(|q| {
                    Ok(ShiftEquivalence {
                        source: EndoSpace::new(source.map.blocks[q].clone())?,
                        target: EndoSpace::new(target.map.blocks[q].clone())?,
                        rho: r.blocks[q].clone(),
                        sigma: s.blocks[q].clone(),
                        lag: m,
                    })
                })
                .collect::<Result<_>>()?;
            let mut all = true;
            for se in &per_degree {
                if !se.verify()?.valid {
                    all = false;
                }
            }
            if all {
                return Ok(StandardShift { source, target, r, s, k, l, lag: m, per_degree });
            }
        }
    }
    Err(Error::NoLagFound(n_max))
}

/// Whether `s = φ^l ρ φ'^k` sends boundaries of `C(N', L')` in degree `q`
/// to boundaries of `C(N, L)`.
fn boundaries_preserved(
    source: &PairHomology,
    target: &PairHomology,
    rho: &Matrix,
    q: usize,
    k: usize,
    l: usize,
) -> Result<bool> {
    let ht = &target.homology;
    let bt = ht.complex().boundary(q + 1).image_basis();
    if bt.cols() == 0 {
        return Ok(true);
    }
    let pushed = rho.mul(&iterate(&target.chain_map[q], &bt, k)?)?;
    let back = iterate(&source.chain_map[q], &pushed, l)?;
    match source.homology.classify_columns(q, &back) {
        Ok(x) => Ok(x.is_zero()),
        Err(Error::NotChainMap(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

impl StandardShift {
    /// The first failing identity in any degree, if any.
    pub fn violation(&self) -> Result<Option<(usize, SeIdentity)>> {
        for (q, se) in self.per_degree.iter().enumerate() {
            if let Some(v) = se.verify()?.violation {
                return Ok(Some((q, v)));
            }
        }
        Ok(None)
    }
}
