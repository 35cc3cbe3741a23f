//! Homology over a field with explicit cycle representatives, induced maps,
//! connecting homomorphisms and long exact sequences of triples.

use crate::cubical::{relative_complex, ChainComplex, CubicalSet};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar};

#[derive(Clone, Debug)]
struct Degree {
    /// Representative cycles, one column per class.
    reps: Matrix,
    /// `[B | reps]`, a basis of the cycles with boundaries first.
    cycle_basis: Matrix,
    boundary_rank: usize,
    /// Rows of `cycle_basis` forming an invertible block, and its inverse.
    pivot_rows: Vec<usize>,
    left: Matrix,
}

impl Degree {
    fn new(reps: Matrix, cycle_basis: Matrix, boundary_rank: usize) -> Degree {
        let pivot_rows = cycle_basis.transpose().echelon().pivots;
        let left = cycle_basis
            .select_rows(&pivot_rows)
            .inverse()
            .expect("independent columns have an invertible row block");
        Degree { reps, cycle_basis, boundary_rank, pivot_rows, left }
    }

    /// Coordinates in `cycle_basis` of each column, or the first column
    /// outside the span of the cycles.
    fn coordinates(&self, m: &Matrix) -> Result<std::result::Result<Matrix, usize>> {
        let x = self.left.mul(&m.select_rows(&self.pivot_rows))?;
        let back = self.cycle_basis.mul(&x)?;
        for j in 0..m.cols() {
            if (0..m.rows()).any(|i| back.get(i, j) != m.get(i, j)) {
                return Ok(Err(j));
            }
        }
        Ok(Ok(x))
    }
}

/// Homology of a chain complex with a fixed basis in each degree.
#[derive(Clone, Debug)]
pub struct GradedHomology {
    complex: ChainComplex,
    degrees: Vec<Degree>,
}

impl GradedHomology {
    pub fn field(&self) -> Field {
        self.complex.field()
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn top(&self) -> usize {
        self.degrees.len() - 1
    }

    pub fn dim(&self, q: usize) -> usize {
        self.degrees.get(q).map_or(0, |d| d.reps.cols())
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..self.degrees.len()).map(|q| self.dim(q)).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.dims().iter().sum()
    }

    pub fn representatives(&self, q: usize) -> Matrix {
        match self.degrees.get(q) {
            Some(d) => d.reps.clone(),
            None => Matrix::zeros(self.field(), self.complex.rank(q), 0),
        }
    }

    /// Class coordinates of a cycle; `None` if `v` is not a cycle.
    pub fn classify(&self, q: usize, v: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        let Some(d) = self.degrees.get(q) else {
            return Ok(if v.iter().all(Scalar::is_zero) { Some(vec![]) } else { None });
        };
        if v.len() != d.cycle_basis.rows() {
            return Err(Error::DimensionMismatch(format!(
                "chain of length {} in degree {q} with {} generators",
                v.len(),
                d.cycle_basis.rows()
            )));
        }
        let m = Matrix::column_vector(self.field(), v.to_vec());
        Ok(d.coordinates(&m)?.ok().map(|x| x.column(0)[d.boundary_rank..].to_vec()))
    }

    /// Classifies every column; an error names the first non-cycle.
    pub fn classify_columns(&self, q: usize, m: &Matrix) -> Result<Matrix> {
        let Some(d) = self.degrees.get(q) else {
            if m.is_zero() {
                return Ok(Matrix::zeros(self.field(), 0, m.cols()));
            }
            return Err(Error::NotChainMap(format!("nonzero chain in empty degree {q}")));
        };
        if m.rows() != d.cycle_basis.rows() {
            return Err(Error::DimensionMismatch(format!("chains in degree {q}")));
        }
        match d.coordinates(m)? {
            Ok(x) => {
                let rows: Vec<usize> = (d.boundary_rank..x.rows()).collect();
                Ok(x.select_rows(&rows))
            }
            Err(j) => Err(Error::NotChainMap(format!("column {j} in degree {q} is not a cycle"))),
        }
    }
}

pub fn homology(cc: &ChainComplex) -> GradedHomology {
    let mut degrees = Vec::with_capacity(cc.top() + 1);
    for q in 0..=cc.top() {
        let z = cc.boundary(q).kernel_basis();
        let b = cc.boundary(q + 1).image_basis();
        let stacked = b.hstack(&z).expect("same row count");
        let chosen: Vec<usize> =
            stacked.echelon().pivots.into_iter().filter(|&p| p >= b.cols()).collect();
        let reps = stacked.select_columns(&chosen);
        let cycle_basis = b.hstack(&reps).expect("same row count");
        debug_assert_eq!(cycle_basis.cols(), z.cols());
        degrees.push(Degree::new(reps, cycle_basis, b.cols()));
    }
    GradedHomology { complex: cc.clone(), degrees }
}

/// How a [`GradedMap`] arose.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Inclusion,
    ChainMap,
    Connecting,
    Composite,
}

/// A homomorphism of graded homologies of degree `0` or `-1`.
///
/// `blocks[q]` is the matrix on the source degree `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    pub field: Field,
    pub blocks: Vec<Matrix>,
    pub lowers_degree: bool,
    pub provenance: Provenance,
}

impl GradedMap {
    pub fn block(&self, q: usize) -> &Matrix {
        &self.blocks[q]
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &GradedMap) -> Result<GradedMap> {
        let mut blocks = Vec::with_capacity(first.blocks.len());
        for (q, f) in first.blocks.iter().enumerate() {
            let target = if first.lowers_degree { q.checked_sub(1) } else { Some(q) };
            match target.and_then(|t| self.blocks.get(t)) {
                Some(g) => blocks.push(g.mul(f)?),
                None => blocks.push(Matrix::zeros(self.field, 0, f.cols())),
            }
        }
        Ok(GradedMap {
            field: self.field,
            blocks,
            lowers_degree: self.lowers_degree || first.lowers_degree,
            provenance: Provenance::Composite,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Matrix::is_zero)
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.blocks.iter().map(Matrix::rank).collect()
    }
}

/// Per-degree chain map matrices between two complexes.
pub type ChainMap = Vec<Matrix>;

/// Checks `∂' f_q = f_{q-1} ∂` in every degree.
pub fn check_chain_map(f: &ChainMap, src: &ChainComplex, dst: &ChainComplex) -> Result<()> {
    for q in 0..=src.top() {
        let fq = &f[q];
        if fq.rows() != dst.rank(q) || fq.cols() != src.rank(q) {
            return Err(Error::DimensionMismatch(format!("chain map block {q}")));
        }
        if q == 0 {
            continue;
        }
        let lhs = dst.boundary(q).mul(fq)?;
        let rhs = f[q - 1].mul(&src.boundary(q))?;
        if lhs != rhs {
            return Err(Error::NotChainMap(format!("boundary does not commute in degree {q}")));
        }
    }
    Ok(())
}

pub fn induced_map(f: &ChainMap, src: &GradedHomology, dst: &GradedHomology) -> Result<GradedMap> {
    if src.field() != dst.field() {
        return Err(Error::FieldMismatch(src.field().to_string(), dst.field().to_string()));
    }
    check_chain_map(f, src.complex(), dst.complex())?;
    let mut blocks = Vec::with_capacity(src.top() + 1);
    for q in 0..=src.top() {
        let image = f[q].mul(&src.representatives(q))?;
        blocks.push(dst.classify_columns(q, &image)?);
    }
    Ok(GradedMap {
        field: src.field(),
        blocks,
        lowers_degree: false,
        provenance: Provenance::ChainMap,
    })
}

/// Chain map of the inclusion `(X, A) -> (X', A')`.
pub fn inclusion_chain_map(src: &ChainComplex, dst: &ChainComplex) -> Result<ChainMap> {
    let (x, a) = src.pair();
    let (x2, a2) = dst.pair();
    if !x.is_subset(x2) || !a.is_subset(a2) {
        return Err(Error::NotSubcomplex("pairs are not nested".into()));
    }
    let field = src.field();
    let mut out = Vec::with_capacity(src.top() + 1);
    for q in 0..=src.top() {
        let mut m = Matrix::zeros(field, dst.rank(q), src.rank(q));
        for (j, c) in src.generators(q).iter().enumerate() {
            if let Some(i) = dst.index_of(q, c) {
                m.set(i, j, field.one());
            }
        }
        out.push(m);
    }
    Ok(out)
}

pub fn inclusion_map(src: &GradedHomology, dst: &GradedHomology) -> Result<GradedMap> {
    let f = inclusion_chain_map(src.complex(), dst.complex())?;
    let mut m = induced_map(&f, src, dst)?;
    m.provenance = Provenance::Inclusion;
    Ok(m)
}

/// `∂ : H_q(N0, N1) -> H_{q-1}(N1, N2)` of a triple, given the homologies
/// of `(N0, N1)` and `(N1, N2)`.
pub fn triple_connecting(top: &GradedHomology, sub: &GradedHomology) -> Result<GradedMap> {
    let field = top.field();
    let (_, n1) = top.complex().pair();
    let (n1b, _) = sub.complex().pair();
    if n1 != n1b {
        return Err(Error::NotSubcomplex("triple pairs do not share N1".into()));
    }
    let mut blocks = vec![Matrix::zeros(field, 0, top.dim(0))];
    let cc = top.complex();
    for q in 1..=top.top() {
        let reps = top.representatives(q);
        let mut cols = Vec::with_capacity(reps.cols());
        for j in 0..reps.cols() {
            let mut terms = Vec::new();
            for (c, s) in cc.support(q, &reps.column(j)) {
                for (f, sign) in c.boundary() {
                    terms.push((f, field.mul(&s, &field.from_i64(sign))));
                }
            }
            let v = sub.complex().project(q - 1, &terms).map_err(|c| {
                Error::InternalInconsistency(format!("boundary of a relative cycle leaves N1 at {c}"))
            })?;
            let x = sub.classify(q - 1, &v)?.ok_or_else(|| {
                Error::InternalInconsistency("boundary of a lift is not a cycle".into())
            })?;
            cols.push(x);
        }
        blocks.push(Matrix::from_columns(field, sub.dim(q - 1), &cols));
    }
    Ok(GradedMap { field, blocks, lowers_degree: true, provenance: Provenance::Connecting })
}

/// `∂ : H_q(X, A) -> H_{q-1}(A)`.
pub fn connecting_map(x: &CubicalSet, a: &CubicalSet, field: Field) -> Result<GradedMap> {
    let top = homology(&relative_complex(x, a, field)?);
    let sub = homology(&relative_complex(a, &CubicalSet::empty(a.ambient()), field)?);
    triple_connecting(&top, &sub)
}

/// The long exact sequence of `N0 ⊇ N1 ⊇ N2`.
#[derive(Clone, Debug)]
pub struct TripleSequence {
    /// `H(N1, N2)`.
    pub h12: GradedHomology,
    /// `H(N0, N2)`.
    pub h02: GradedHomology,
    /// `H(N0, N1)`.
    pub h01: GradedHomology,
    pub i: GradedMap,
    pub j: GradedMap,
    pub delta: GradedMap,
}

pub fn triple_sequence(
    n0: &CubicalSet,
    n1: &CubicalSet,
    n2: &CubicalSet,
    field: Field,
) -> Result<TripleSequence> {
    let h12 = homology(&relative_complex(n1, n2, field)?);
    let h02 = homology(&relative_complex(n0, n2, field)?);
    let h01 = homology(&relative_complex(n0, n1, field)?);
    let i = inclusion_map(&h12, &h02)?;
    let j = inclusion_map(&h02, &h01)?;
    let delta = triple_connecting(&h01, &h12)?;
    let seq = TripleSequence { h12, h02, h01, i, j, delta };
    seq.verify_exact()?;
    Ok(seq)
}

impl TripleSequence {
    /// Rank test `im = ker` at every node.
    pub fn verify_exact(&self) -> Result<()> {
        let top = self.h02.top();
        for q in 0..=top {
            let nodes: [(&str, Option<&Matrix>, &Matrix, usize); 3] = [
                ("H(N1,N2)", self.delta.blocks.get(q + 1), &self.i.blocks[q], self.h12.dim(q)),
                ("H(N0,N2)", Some(&self.i.blocks[q]), &self.j.blocks[q], self.h02.dim(q)),
                ("H(N0,N1)", Some(&self.j.blocks[q]), &self.delta.blocks[q], self.h01.dim(q)),
            ];
            for (name, incoming, outgoing, dim) in nodes {
                let in_rank = incoming.map_or(0, Matrix::rank);
                if let Some(a) = incoming {
                    if !outgoing.mul(a)?.is_zero() {
                        return Err(Error::ExactnessViolation(format!(
                            "composite into and out of {name}_{q} is nonzero"
                        )));
                    }
                }
                if in_rank + outgoing.rank() != dim {
                    return Err(Error::ExactnessViolation(format!("im != ker at {name}_{q}")));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubical::{chain_complex, closure, Cube};

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn point_and_circle() {
        let pt = CubicalSet::box_cells(&[0, 0], &[0, 0]);
        assert_eq!(homology(&chain_complex(&pt, q()).unwrap()).dims(), vec![1, 0, 0]);
        let square = CubicalSet::box_cells(&[0, 0], &[1, 1]);
        let hollow = square.difference(&CubicalSet::box_tops(&[0, 0], &[1, 1]));
        assert_eq!(homology(&chain_complex(&hollow, q()).unwrap()).dims(), vec![1, 1, 0]);
    }

    #[test]
    fn identity_and_zero_maps() {
        let x = CubicalSet::box_cells(&[0], &[2]);
        let ends = CubicalSet::from_cubes(1, [Cube::vertex(&[0]), Cube::vertex(&[2])]).unwrap();
        let cc = relative_complex(&x, &ends, q()).unwrap();
        let h = homology(&cc);
        assert_eq!(h.dims(), vec![0, 1]);
        let id: ChainMap = (0..=1).map(|d| Matrix::identity(q(), cc.rank(d))).collect();
        let m = induced_map(&id, &h, &h).unwrap();
        assert_eq!(m.blocks[1], Matrix::identity(q(), 1));
        let zero: ChainMap = (0..=1).map(|d| Matrix::zeros(q(), cc.rank(d), cc.rank(d))).collect();
        assert!(induced_map(&zero, &h, &h).unwrap().is_zero());
    }

    #[test]
    fn rejects_non_chain_map() {
        let x = CubicalSet::box_cells(&[0], &[1]);
        let cc = chain_complex(&x, q()).unwrap();
        let h = homology(&cc);
        let mut f: ChainMap = vec![Matrix::identity(q(), 2), Matrix::identity(q(), 1)];
        f[0] = Matrix::zeros(q(), 2, 2);
        assert!(matches!(induced_map(&f, &h, &h), Err(Error::NotChainMap(_))));
    }

    #[test]
    fn interval_connecting_map() {
        let x = CubicalSet::box_cells(&[0], &[1]);
        let ends = CubicalSet::from_cubes(1, [Cube::vertex(&[0]), Cube::vertex(&[1])]).unwrap();
        let d = connecting_map(&x, &ends, q()).unwrap();
        let h_ends = homology(&chain_complex(&ends, q()).unwrap());
        let rep = homology(&relative_complex(&x, &ends, q()).unwrap()).representatives(1);
        // the class of [p1] - [p0], up to the sign of the chosen generator
        let expected = h_ends
            .classify(0, &h_ends.complex().chain(0, &[(Cube::vertex(&[1]), 1), (Cube::vertex(&[0]), -1)]))
            .unwrap()
            .unwrap();
        let col = d.blocks[1].column(0);
        let sign = rep.get(0, 0).clone();
        let f = q();
        let scaled: Vec<Scalar> = expected.iter().map(|e| f.mul(e, &sign)).collect();
        assert_eq!(col, scaled);
        let none = connecting_map(&x, &CubicalSet::empty(1), q()).unwrap();
        assert!(none.is_zero());
    }

    #[test]
    fn triple_examples() {
        let n0 = CubicalSet::box_cells(&[0, 0], &[2, 1]);
        let n1 = closure(&CubicalSet::box_tops(&[0, 0], &[1, 1]));
        let n2 = CubicalSet::empty(2);
        let same = triple_sequence(&n0, &n1, &n1, q()).unwrap();
        assert!(same.h12.total_dim() == 0);
        let full = triple_sequence(&n0, &n0, &n2, q()).unwrap();
        assert_eq!(full.h01.total_dim(), 0);
        let mid = triple_sequence(&n0, &n1, &n2, q()).unwrap();
        assert_eq!(mid.h02.dims(), vec![1, 0, 0]);
        assert_eq!(mid.i.blocks[0].rank(), 1);
    }
}
