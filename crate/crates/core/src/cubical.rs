//! Elementary cubes, cubical sets and their (relative) chain complexes.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar};

/// A product of intervals `[k,k]` or `[k,k+1]`.
///
/// Each axis stores `(k, unit)`; `unit` marks the nondegenerate case.
/// Ordering is lexicographic on axes, which gives sets a canonical order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<[i64; 2]>", into = "Vec<[i64; 2]>")]
pub struct Cube {
    axes: Vec<(i64, bool)>,
}

impl Cube {
    pub fn new(axes: Vec<(i64, bool)>) -> Cube {
        Cube { axes }
    }

    /// The full-dimensional cube with lower corner `lo`.
    pub fn unit(lo: &[i64]) -> Cube {
        Cube { axes: lo.iter().map(|&k| (k, true)).collect() }
    }

    pub fn vertex(at: &[i64]) -> Cube {
        Cube { axes: at.iter().map(|&k| (k, false)).collect() }
    }

    pub fn from_bounds(bounds: &[[i64; 2]]) -> Result<Cube> {
        let mut axes = Vec::with_capacity(bounds.len());
        for [a, b] in bounds {
            if *b == *a {
                axes.push((*a, false));
            } else if *b == *a + 1 {
                axes.push((*a, true));
            } else {
                return Err(Error::Parse(format!(
                    "interval [{a},{b}] is neither degenerate nor unit"
                )));
            }
        }
        Ok(Cube { axes })
    }

    pub fn bounds(&self) -> Vec<[i64; 2]> {
        self.axes.iter().map(|&(k, u)| [k, k + u as i64]).collect()
    }

    pub fn ambient(&self) -> usize {
        self.axes.len()
    }

    pub fn dim(&self) -> usize {
        self.axes.iter().filter(|a| a.1).count()
    }

    pub fn axes(&self) -> &[(i64, bool)] {
        &self.axes
    }

    pub fn is_top(&self) -> bool {
        self.axes.iter().all(|a| a.1)
    }

    /// Lower corner as a vertex.
    pub fn lo_corner(&self) -> Vec<i64> {
        self.axes.iter().map(|a| a.0).collect()
    }

    /// Alternating-sign boundary: the hi face minus the lo face on each
    /// unit axis `j`, signed by the number of unit axes before `j`.
    pub fn boundary(&self) -> Vec<(Cube, i64)> {
        let mut out = Vec::with_capacity(2 * self.dim());
        let mut sign = 1i64;
        for (j, &(k, unit)) in self.axes.iter().enumerate() {
            if !unit {
                continue;
            }
            let mut lo = self.axes.clone();
            lo[j] = (k, false);
            let mut hi = self.axes.clone();
            hi[j] = (k + 1, false);
            out.push((Cube { axes: hi }, sign));
            out.push((Cube { axes: lo }, -sign));
            sign = -sign;
        }
        out
    }

    /// Every face including the cube itself.
    pub fn faces(&self) -> Vec<Cube> {
        let mut out = vec![Vec::with_capacity(self.axes.len())];
        for &(k, unit) in &self.axes {
            let choices: &[(i64, bool)] =
                if unit { &[(k, true), (k, false), (k + 1, false)] } else { &[(k, false)] };
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    choices.iter().map(move |c| {
                        let mut p = prefix.clone();
                        p.push(*c);
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(|axes| Cube { axes }).collect()
    }

    pub fn is_face_of(&self, other: &Cube) -> bool {
        self.axes.iter().zip(&other.axes).all(|(&(a, ua), &(b, ub))| {
            if ub {
                if ua { a == b } else { a == b || a == b + 1 }
            } else {
                !ua && a == b
            }
        })
    }

    /// Whether the closed boxes of the two cubes intersect.
    pub fn touches(&self, other: &Cube) -> bool {
        self.axes.iter().zip(&other.axes).all(|(&(a, ua), &(b, ub))| {
            a <= b + ub as i64 && b <= a + ua as i64
        })
    }

    /// Top cubes whose closure contains this cube.
    pub fn top_cofaces(&self) -> Vec<Cube> {
        let mut out = vec![Vec::with_capacity(self.axes.len())];
        for &(k, unit) in &self.axes {
            let choices: Vec<i64> = if unit { vec![k] } else { vec![k - 1, k] };
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    choices.iter().map(move |c| {
                        let mut p: Vec<i64> = prefix.clone();
                        p.push(*c);
                        p
                    })
                })
                .collect();
        }
        out.iter().map(|lo| Cube::unit(lo)).collect()
    }
}

impl TryFrom<Vec<[i64; 2]>> for Cube {
    type Error = Error;

    fn try_from(v: Vec<[i64; 2]>) -> Result<Cube> {
        Cube::from_bounds(&v)
    }
}

impl From<Cube> for Vec<[i64; 2]> {
    fn from(c: Cube) -> Self {
        c.bounds()
    }
}

impl fmt::Debug for Cube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, [a, b]) in self.bounds().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[{a},{b}]")?;
        }
        write!(f, "]")
    }
}

/// A finite set of elementary cubes in a fixed ambient dimension.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CubicalSet {
    ambient: usize,
    cubes: BTreeSet<Cube>,
}

impl CubicalSet {
    pub fn empty(ambient: usize) -> CubicalSet {
        CubicalSet { ambient, cubes: BTreeSet::new() }
    }

    pub fn from_cubes<I: IntoIterator<Item = Cube>>(ambient: usize, cubes: I) -> Result<CubicalSet> {
        let mut set = CubicalSet::empty(ambient);
        for c in cubes {
            if c.ambient() != ambient {
                return Err(Error::DimensionMismatch(format!(
                    "cube {c} in ambient dimension {ambient}"
                )));
            }
            set.cubes.insert(c);
        }
        Ok(set)
    }

    /// Top cubes `[k, k+1]^d` with `lo <= k < hi` on every axis.
    pub fn box_tops(lo: &[i64], hi: &[i64]) -> CubicalSet {
        let ambient = lo.len();
        let mut corners: Vec<Vec<i64>> = vec![vec![]];
        for j in 0..ambient {
            corners = corners
                .into_iter()
                .flat_map(|p| {
                    (lo[j]..hi[j]).map(move |k| {
                        let mut q = p.clone();
                        q.push(k);
                        q
                    })
                })
                .collect();
        }
        CubicalSet { ambient, cubes: corners.iter().map(|c| Cube::unit(c)).collect() }
    }

    /// Every cell of the closed box `[lo, hi]`, degenerate axes allowed.
    pub fn box_cells(lo: &[i64], hi: &[i64]) -> CubicalSet {
        let ambient = lo.len();
        let mut cells: Vec<Vec<(i64, bool)>> = vec![vec![]];
        for j in 0..ambient {
            let mut options = Vec::new();
            for k in lo[j]..=hi[j] {
                options.push((k, false));
                if k < hi[j] {
                    options.push((k, true));
                }
            }
            cells = cells
                .into_iter()
                .flat_map(|p| {
                    options.iter().map(move |o| {
                        let mut q = p.clone();
                        q.push(*o);
                        q
                    })
                })
                .collect();
        }
        CubicalSet { ambient, cubes: cells.into_iter().map(Cube::new).collect() }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    pub fn contains(&self, c: &Cube) -> bool {
        self.cubes.contains(c)
    }

    pub fn insert(&mut self, c: Cube) -> bool {
        debug_assert_eq!(c.ambient(), self.ambient);
        self.cubes.insert(c)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Cube> {
        self.cubes.iter()
    }

    pub fn cubes(&self) -> &BTreeSet<Cube> {
        &self.cubes
    }

    pub fn of_dim(&self, q: usize) -> impl Iterator<Item = &Cube> {
        self.cubes.iter().filter(move |c| c.dim() == q)
    }

    pub fn tops(&self) -> CubicalSet {
        CubicalSet {
            ambient: self.ambient,
            cubes: self.cubes.iter().filter(|c| c.is_top()).cloned().collect(),
        }
    }

    pub fn union(&self, other: &CubicalSet) -> CubicalSet {
        CubicalSet { ambient: self.ambient, cubes: self.cubes.union(&other.cubes).cloned().collect() }
    }

    pub fn intersection(&self, other: &CubicalSet) -> CubicalSet {
        CubicalSet {
            ambient: self.ambient,
            cubes: self.cubes.intersection(&other.cubes).cloned().collect(),
        }
    }

    pub fn difference(&self, other: &CubicalSet) -> CubicalSet {
        CubicalSet {
            ambient: self.ambient,
            cubes: self.cubes.difference(&other.cubes).cloned().collect(),
        }
    }

    pub fn is_subset(&self, other: &CubicalSet) -> bool {
        self.cubes.is_subset(&other.cubes)
    }

    pub fn is_closed(&self) -> bool {
        self.cubes.iter().all(|c| c.boundary().iter().all(|(f, _)| self.cubes.contains(f)))
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.cubes.iter().map(Cube::dim).max()
    }
}

impl fmt::Debug for CubicalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.cubes.iter()).finish()
    }
}

pub fn closure(x: &CubicalSet) -> CubicalSet {
    let mut out = CubicalSet::empty(x.ambient);
    for c in &x.cubes {
        if out.contains(c) {
            continue;
        }
        for f in c.faces() {
            out.cubes.insert(f);
        }
    }
    out
}

/// `cl(X \ cl(T))`: the closed part of `X` away from `T`.
pub fn closed_complement(x: &CubicalSet, t: &CubicalSet) -> CubicalSet {
    closure(&x.difference(&closure(t)))
}

/// Cubes of `X` reachable from `cl(A) ∩ X` in at most `r` steps, where a
/// step joins two cubes whose closed boxes meet.
pub fn neighborhood(x: &CubicalSet, a: &CubicalSet, r: usize) -> CubicalSet {
    let mut current = closure(a).intersection(x);
    let mut frontier: Vec<Cube> = current.cubes.iter().cloned().collect();
    for _ in 0..r {
        if frontier.is_empty() {
            break;
        }
        let mut next = Vec::new();
        for c in x.iter() {
            if !current.contains(c) && frontier.iter().any(|f| f.touches(c)) {
                next.push(c.clone());
            }
        }
        for c in &next {
            current.cubes.insert(c.clone());
        }
        frontier = next;
    }
    current
}

/// Closure-connected components, each as a set of the given cubes.
pub fn components(x: &CubicalSet) -> Vec<CubicalSet> {
    let cubes: Vec<&Cube> = x.iter().collect();
    let mut label = vec![usize::MAX; cubes.len()];
    let mut out = Vec::new();
    for start in 0..cubes.len() {
        if label[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        label[start] = id;
        let mut stack = vec![start];
        let mut comp = CubicalSet::empty(x.ambient);
        while let Some(i) = stack.pop() {
            comp.cubes.insert(cubes[i].clone());
            for j in 0..cubes.len() {
                if label[j] == usize::MAX && cubes[i].touches(cubes[j]) {
                    label[j] = id;
                    stack.push(j);
                }
            }
        }
        out.push(comp);
    }
    out
}

/// Generators per degree and boundary matrices `∂_q : C_q -> C_{q-1}`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    field: Field,
    space: CubicalSet,
    sub: CubicalSet,
    generators: Vec<Vec<Cube>>,
    index: Vec<HashMap<Cube, usize>>,
    boundaries: Vec<Matrix>,
}

impl ChainComplex {
    pub fn field(&self) -> Field {
        self.field
    }

    /// The pair `(X, A)` this complex was built from.
    pub fn pair(&self) -> (&CubicalSet, &CubicalSet) {
        (&self.space, &self.sub)
    }

    /// Coordinates of a chain given by its cubes. Cubes of `A` vanish; a
    /// cube outside `X` is returned as the error.
    pub fn project(&self, q: usize, terms: &[(Cube, Scalar)]) -> std::result::Result<Vec<Scalar>, Cube> {
        let mut summed: std::collections::BTreeMap<&Cube, Scalar> = std::collections::BTreeMap::new();
        for (c, k) in terms {
            let e = summed.entry(c).or_insert_with(|| self.field.zero());
            *e = self.field.add(e, k);
        }
        let mut v = vec![self.field.zero(); self.rank(q)];
        for (c, k) in summed {
            if k.is_zero() {
                continue;
            }
            match self.index_of(q, c) {
                Some(i) => v[i] = k,
                None if self.sub.contains(c) => {}
                None => return Err(c.clone()),
            }
        }
        Ok(v)
    }

    /// Highest degree carried (the ambient dimension).
    pub fn top(&self) -> usize {
        self.generators.len() - 1
    }

    pub fn rank(&self, q: usize) -> usize {
        self.generators.get(q).map_or(0, Vec::len)
    }

    pub fn generators(&self, q: usize) -> &[Cube] {
        self.generators.get(q).map_or(&[], |v| v.as_slice())
    }

    pub fn index_of(&self, q: usize, c: &Cube) -> Option<usize> {
        self.index.get(q).and_then(|m| m.get(c).copied())
    }

    /// `∂_q`; for `q = 0` or `q > top` a matrix with a zero-sized side.
    pub fn boundary(&self, q: usize) -> Matrix {
        if q == 0 {
            return Matrix::zeros(self.field, 0, self.rank(0));
        }
        match self.boundaries.get(q) {
            Some(m) => m.clone(),
            None => Matrix::zeros(self.field, self.rank(q - 1), self.rank(q)),
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..=self.top()).map(|q| if q % 2 == 0 { 1 } else { -1 } * self.rank(q) as i64).sum()
    }

    /// Coordinate vector of an integer combination of cubes in degree `q`;
    /// cubes that are not generators (for instance cells of the subcomplex)
    /// are dropped.
    pub fn chain(&self, q: usize, terms: &[(Cube, i64)]) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); self.rank(q)];
        for (c, k) in terms {
            if let Some(i) = self.index_of(q, c) {
                v[i] = self.field.add(&v[i], &self.field.from_i64(*k));
            }
        }
        v
    }

    /// Cubes with nonzero coefficient in a chain vector.
    pub fn support(&self, q: usize, v: &[Scalar]) -> Vec<(Cube, Scalar)> {
        v.iter()
            .enumerate()
            .filter(|(_, s)| !s.is_zero())
            .map(|(i, s)| (self.generators[q][i].clone(), s.clone()))
            .collect()
    }
}

pub fn chain_complex(x: &CubicalSet, field: Field) -> Result<ChainComplex> {
    relative_complex(x, &CubicalSet::empty(x.ambient), field)
}

/// The quotient complex `C(X)/C(A)`.
pub fn relative_complex(x: &CubicalSet, a: &CubicalSet, field: Field) -> Result<ChainComplex> {
    if !x.is_closed() {
        return Err(Error::NotSubcomplex("X is not closed".into()));
    }
    if !a.is_closed() {
        return Err(Error::NotSubcomplex("A is not closed".into()));
    }
    if !a.is_subset(x) {
        return Err(Error::NotSubcomplex("A is not contained in X".into()));
    }
    let top = x.ambient;
    let mut generators = vec![Vec::new(); top + 1];
    for c in x.iter() {
        if !a.contains(c) {
            generators[c.dim()].push(c.clone());
        }
    }
    let index: Vec<HashMap<Cube, usize>> = generators
        .iter()
        .map(|g| g.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect())
        .collect();
    let mut boundaries = vec![Matrix::zeros(field, 0, generators[0].len())];
    for q in 1..=top {
        let mut m = Matrix::zeros(field, generators[q - 1].len(), generators[q].len());
        for (j, c) in generators[q].iter().enumerate() {
            for (f, s) in c.boundary() {
                if let Some(&i) = index[q - 1].get(&f) {
                    m.set(i, j, field.from_i64(s));
                }
            }
        }
        boundaries.push(m);
    }
    Ok(ChainComplex { field, space: x.clone(), sub: a.clone(), generators, index, boundaries })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(cubes: &[Cube]) -> CubicalSet {
        CubicalSet::from_cubes(cubes[0].ambient(), cubes.iter().cloned()).unwrap()
    }

    #[test]
    fn closure_counts() {
        assert!(closure(&CubicalSet::empty(2)).is_empty());
        let sq = closure(&set(&[Cube::unit(&[0, 0])]));
        assert_eq!(sq.len(), 9);
        assert_eq!(sq.of_dim(1).count(), 4);
        assert_eq!(sq.of_dim(0).count(), 4);
        assert!(sq.is_closed());
        assert_eq!(sq, CubicalSet::box_cells(&[0, 0], &[1, 1]));
    }

    #[test]
    fn boundary_squares_to_zero() {
        let x = CubicalSet::box_cells(&[0, 0, 0], &[2, 1, 2]);
        let cc = chain_complex(&x, Field::Rational).unwrap();
        for q in 1..=3 {
            let dd = cc.boundary(q - 1).mul(&cc.boundary(q)).unwrap();
            assert!(dd.is_zero(), "degree {q}");
        }
        assert_eq!(cc.euler_characteristic(), 1);
    }

    #[test]
    fn relative_requires_subcomplex() {
        let x = CubicalSet::box_cells(&[0], &[1]);
        let open = set(&[Cube::unit(&[0])]);
        assert!(matches!(relative_complex(&x, &open, Field::Rational), Err(Error::NotSubcomplex(_))));
        let outside = set(&[Cube::vertex(&[5])]);
        assert!(relative_complex(&x, &outside, Field::Rational).is_err());
        let ends = set(&[Cube::vertex(&[0]), Cube::vertex(&[1])]);
        let rel = relative_complex(&x, &ends, Field::Rational).unwrap();
        assert_eq!(rel.rank(0), 0);
        assert_eq!(rel.rank(1), 1);
    }

    #[test]
    fn neighborhood_examples() {
        let x = CubicalSet::box_tops(&[-3], &[3]);
        let a = set(&[Cube::unit(&[0])]);
        assert_eq!(neighborhood(&x, &a, 0).len(), 1);
        assert_eq!(neighborhood(&x, &a, 1).len(), 3);
        assert_eq!(neighborhood(&x, &a, 10), x);
        assert!(neighborhood(&x, &CubicalSet::empty(1), 0).is_empty());
    }

    #[test]
    fn cube_literals_round_trip() {
        let c: Cube = serde_json::from_str("[[0,1],[2,2]]").unwrap();
        assert_eq!(c.dim(), 1);
        assert_eq!(serde_json::to_string(&c).unwrap(), "[[0,1],[2,2]]");
        assert!(serde_json::from_str::<Cube>("[[0,2]]").is_err());
    }

    #[test]
    fn cofaces_and_components() {
        let v = Cube::vertex(&[0, 0]);
        assert_eq!(v.top_cofaces().len(), 4);
        for t in v.top_cofaces() {
            assert!(v.is_face_of(&t));
        }
        let two = set(&[Cube::unit(&[0, 0]), Cube::unit(&[3, 0]), Cube::unit(&[1, 1])]);
        assert_eq!(components(&two).len(), 2);
    }
}
