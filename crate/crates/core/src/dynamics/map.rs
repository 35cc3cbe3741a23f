use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::cubical::{Cube, CubicalSet};
use crate::error::{Error, Result};

/// A closed integer box `[lo, hi]`, possibly degenerate on some axes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CellBox {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl CellBox {
    pub fn contains_box(&self, other: &CellBox) -> bool {
        (0..self.lo.len()).all(|j| self.lo[j] <= other.lo[j] && other.hi[j] <= self.hi[j])
    }

    pub fn intersect(&self, other: &CellBox) -> Option<CellBox> {
        let lo: Vec<i64> = self.lo.iter().zip(&other.lo).map(|(a, b)| *a.max(b)).collect();
        let hi: Vec<i64> = self.hi.iter().zip(&other.hi).map(|(a, b)| *a.min(b)).collect();
        if lo.iter().zip(&hi).all(|(a, b)| a <= b) {
            Some(CellBox { lo, hi })
        } else {
            None
        }
    }

    /// Top cubes covering the box; a degenerate axis at `k` contributes
    /// both cells `k-1` and `k`.
    pub fn tops(&self) -> CubicalSet {
        let lo: Vec<i64> =
            self.lo.iter().zip(&self.hi).map(|(&a, &b)| if a == b { a - 1 } else { a }).collect();
        let hi: Vec<i64> =
            self.lo.iter().zip(&self.hi).map(|(&a, &b)| if a == b { b + 1 } else { b }).collect();
        CubicalSet::box_tops(&lo, &hi)
    }

    /// Box spanned by a list of top cubes, if they fill it exactly.
    pub fn of_block(cubes: &[Cube]) -> Option<CellBox> {
        let first = cubes.first()?;
        let d = first.ambient();
        let mut lo = first.lo_corner();
        let mut hi: Vec<i64> = lo.iter().map(|k| k + 1).collect();
        for c in cubes {
            if !c.is_top() || c.ambient() != d {
                return None;
            }
            for (j, k) in c.lo_corner().into_iter().enumerate() {
                lo[j] = lo[j].min(k);
                hi[j] = hi[j].max(k + 1);
            }
        }
        let volume: i64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
        let distinct: std::collections::BTreeSet<&Cube> = cubes.iter().collect();
        (volume as usize == distinct.len()).then_some(CellBox { lo, hi })
    }
}

#[derive(Clone, Debug)]
enum Rule {
    Affine { matrix: Vec<Vec<BigRational>>, offset: Vec<BigRational> },
    Table { entries: BTreeMap<Cube, CellBox> },
}

/// A cubical enclosure of a map: each top cube of the domain is sent to a
/// rectangular block of top cubes, and each cube of any dimension has a
/// carrier box used by the chain selector.
#[derive(Clone, Debug)]
pub struct MultivaluedMap {
    dimension: usize,
    domain: CubicalSet,
    rule: Rule,
}

fn floor(r: &BigRational) -> BigInt {
    r.numer().div_floor(r.denom())
}

fn ceil(r: &BigRational) -> BigInt {
    -((-r.numer()).div_floor(r.denom()))
}

fn to_i64(v: BigInt) -> Result<i64> {
    v.to_i64().ok_or_else(|| Error::OutOfDomain("image coordinate overflows".into()))
}

impl MultivaluedMap {
    /// `x -> M x + b` on the top cubes of `bounds`.
    pub fn affine(
        matrix: Vec<Vec<BigRational>>,
        offset: Vec<BigRational>,
        bounds: (&[i64], &[i64]),
    ) -> Result<MultivaluedMap> {
        let d = offset.len();
        if matrix.len() != d || matrix.iter().any(|r| r.len() != d) || bounds.0.len() != d {
            return Err(Error::DimensionMismatch("affine map must be square of the system dimension".into()));
        }
        Ok(MultivaluedMap {
            dimension: d,
            domain: CubicalSet::box_tops(bounds.0, bounds.1),
            rule: Rule::Affine { matrix, offset },
        })
    }

    /// Explicit image blocks for each top cube of the domain.
    pub fn table(dimension: usize, entries: Vec<(Cube, Vec<Cube>)>) -> Result<MultivaluedMap> {
        let mut map = BTreeMap::new();
        for (src, image) in entries {
            if !src.is_top() || src.ambient() != dimension {
                return Err(Error::Parse(format!("table source {src} is not a top cube")));
            }
            let block = CellBox::of_block(&image).ok_or_else(|| {
                Error::NotAcyclic(format!("image of {src} is not a nonempty rectangular block"))
            })?;
            if map.insert(src.clone(), block).is_some() {
                return Err(Error::Parse(format!("duplicate table entry for {src}")));
            }
        }
        let domain = CubicalSet::from_cubes(dimension, map.keys().cloned())?;
        let m = MultivaluedMap { dimension, domain, rule: Rule::Table { entries: map } };
        m.check_carriers()?;
        Ok(m)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Top cubes on which the map is defined.
    pub fn domain(&self) -> &CubicalSet {
        &self.domain
    }

    pub fn in_domain(&self, c: &Cube) -> bool {
        c.top_cofaces().iter().any(|t| self.domain.contains(t))
    }

    /// Carrier box of any cube whose closure meets the domain.
    pub fn carrier(&self, c: &Cube) -> Result<CellBox> {
        match &self.rule {
            Rule::Affine { matrix, offset } => {
                if !c.top_cofaces().iter().any(|t| self.domain.contains(t)) {
                    return Err(Error::OutOfDomain(format!("{c}")));
                }
                let mut lo = Vec::with_capacity(self.dimension);
                let mut hi = Vec::with_capacity(self.dimension);
                for (row, b) in matrix.iter().zip(offset) {
                    let mut min = b.clone();
                    let mut max = b.clone();
                    for (m, &(k, unit)) in row.iter().zip(c.axes()) {
                        let a = m * BigRational::from_integer(BigInt::from(k));
                        min += &a;
                        max += &a;
                        if unit && !m.is_zero() {
                            if m.is_positive() {
                                max += m;
                            } else {
                                min += m;
                            }
                        }
                    }
                    lo.push(to_i64(floor(&min))?);
                    hi.push(to_i64(ceil(&max))?);
                }
                Ok(CellBox { lo, hi })
            }
            Rule::Table { entries } => {
                let mut acc: Option<CellBox> = None;
                for t in c.top_cofaces() {
                    if let Some(b) = entries.get(&t) {
                        acc = Some(match acc {
                            None => b.clone(),
                            Some(a) => a.intersect(b).ok_or_else(|| {
                                Error::NotAcyclic(format!("images of the cofaces of {c} are disjoint"))
                            })?,
                        });
                    }
                }
                acc.ok_or_else(|| Error::OutOfDomain(format!("{c}")))
            }
        }
    }

    /// Image block of a top cube of the domain.
    pub fn image_of(&self, top: &Cube) -> Result<CubicalSet> {
        if !self.domain.contains(top) {
            return Err(Error::OutOfDomain(format!("{top}")));
        }
        Ok(self.carrier(top)?.tops())
    }

    /// Union of the image blocks of the top cubes of `x`.
    pub fn image(&self, x: &CubicalSet) -> Result<CubicalSet> {
        let mut out = CubicalSet::empty(self.dimension);
        for c in x.iter().filter(|c| c.is_top()) {
            for t in self.image_of(c)?.iter() {
                out.insert(t.clone());
            }
        }
        Ok(out)
    }

    pub fn image_n(&self, x: &CubicalSet, n: usize) -> Result<CubicalSet> {
        let mut cur = x.tops();
        for _ in 0..n {
            cur = self.image(&cur)?;
        }
        Ok(cur)
    }

    /// Every face's carrier must lie in each coface's carrier.
    fn check_carriers(&self) -> Result<()> {
        let cells = crate::cubical::closure(&self.domain);
        for c in cells.iter() {
            let b = self.carrier(c)?;
            for t in c.top_cofaces() {
                if self.domain.contains(&t) && !self.carrier(&t)?.contains_box(&b) {
                    return Err(Error::NotAcyclic(format!("carrier of {c} escapes that of {t}")));
                }
            }
        }
        Ok(())
    }
}

/// Integer chain selector built from the cone contraction of each carrier
/// box. Results are memoized per cube and are independent of the order in
/// which cubes are requested.
pub struct ChainSelector<'a> {
    map: &'a MultivaluedMap,
    memo: HashMap<Cube, Vec<(Cube, i64)>>,
}

impl<'a> ChainSelector<'a> {
    pub fn new(map: &'a MultivaluedMap) -> ChainSelector<'a> {
        ChainSelector { map, memo: HashMap::new() }
    }

    pub fn map(&self) -> &MultivaluedMap {
        self.map
    }

    pub fn apply(&mut self, c: &Cube) -> Result<Vec<(Cube, i64)>> {
        if let Some(v) = self.memo.get(c) {
            return Ok(v.clone());
        }
        let carrier = self.map.carrier(c)?;
        let value = if c.dim() == 0 {
            vec![(Cube::vertex(&carrier.lo), 1)]
        } else {
            let mut acc: BTreeMap<Cube, i64> = BTreeMap::new();
            for (face, sign) in c.boundary() {
                for (g, k) in self.apply(&face)? {
                    for h in cone(&carrier, &g) {
                        *acc.entry(h).or_insert(0) += sign * k;
                    }
                }
            }
            acc.into_iter().filter(|(_, k)| *k != 0).collect()
        };
        self.memo.insert(c.clone(), value.clone());
        Ok(value)
    }
}

/// Cone contraction `h` of the box chain complex toward its lower corner,
/// satisfying `∂h + h∂ = 1 - (lower corner)·ε`.
fn cone(b: &CellBox, c: &Cube) -> Vec<Cube> {
    let mut out = Vec::new();
    let axes = c.axes();
    for (j, &(x, unit)) in axes.iter().enumerate() {
        if unit {
            break;
        }
        for k in b.lo[j]..x {
            let mut cell: Vec<(i64, bool)> = Vec::with_capacity(axes.len());
            cell.extend((0..j).map(|i| (b.lo[i], false)));
            cell.push((k, true));
            cell.extend_from_slice(&axes[j + 1..]);
            out.push(Cube::new(cell));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn saddle() -> MultivaluedMap {
        let m = vec![
            vec![r(1, 2), r(0, 1), r(0, 1)],
            vec![r(0, 1), r(1, 2), r(0, 1)],
            vec![r(0, 1), r(0, 1), r(2, 1)],
        ];
        MultivaluedMap::affine(m, vec![r(0, 1); 3], (&[-2, -2, -2], &[2, 2, 2])).unwrap()
    }

    #[test]
    fn affine_carriers() {
        let f = saddle();
        let b = f.carrier(&Cube::unit(&[1, -2, 0])).unwrap();
        assert_eq!(b, CellBox { lo: vec![0, -1, 0], hi: vec![1, 0, 2] });
        let v = f.carrier(&Cube::vertex(&[0, 0, 0])).unwrap();
        assert_eq!(v.tops().len(), 8);
        assert!(f.image_of(&Cube::unit(&[5, 0, 0])).is_err());
    }

    #[test]
    fn selector_is_chain_map_on_boundaries() {
        let f = saddle();
        let mut sel = ChainSelector::new(&f);
        for c in crate::cubical::closure(f.domain()).iter() {
            let img = sel.apply(c).unwrap();
            let mut lhs: BTreeMap<Cube, i64> = BTreeMap::new();
            for (g, k) in &img {
                for (h, s) in g.boundary() {
                    *lhs.entry(h).or_insert(0) += k * s;
                }
            }
            let mut rhs: BTreeMap<Cube, i64> = BTreeMap::new();
            for (face, s) in c.boundary() {
                for (g, k) in sel.apply(&face).unwrap() {
                    *rhs.entry(g).or_insert(0) += k * s;
                }
            }
            lhs.retain(|_, v| *v != 0);
            rhs.retain(|_, v| *v != 0);
            assert_eq!(lhs, rhs, "at {c}");
            let carrier = f.carrier(c).unwrap();
            let cells = CubicalSet::box_cells(&carrier.lo, &carrier.hi);
            assert!(img.iter().all(|(g, _)| cells.contains(g)));
        }
    }

    #[test]
    fn table_requires_blocks() {
        let e = vec![(Cube::unit(&[0]), vec![Cube::unit(&[0]), Cube::unit(&[2])])];
        assert!(matches!(MultivaluedMap::table(1, e), Err(Error::NotAcyclic(_))));
        let ok = vec![
            (Cube::unit(&[0]), vec![Cube::unit(&[0]), Cube::unit(&[1])]),
            (Cube::unit(&[1]), vec![Cube::unit(&[1])]),
        ];
        let f = MultivaluedMap::table(1, ok).unwrap();
        assert_eq!(f.carrier(&Cube::vertex(&[1])).unwrap(), CellBox { lo: vec![1], hi: vec![2] });
        let disjoint = vec![
            (Cube::unit(&[0]), vec![Cube::unit(&[0])]),
            (Cube::unit(&[1]), vec![Cube::unit(&[3])]),
        ];
        assert!(MultivaluedMap::table(1, disjoint).is_err());
    }
}
