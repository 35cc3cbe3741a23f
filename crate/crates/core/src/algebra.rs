//! Algebraic parts, generalized kernels, canonical projections and shift
//! equivalences of finite-dimensional spaces carrying an endomorphism.
//!
//! In finite dimension `n` the algebraic part of `(V, phi)` is `im phi^n`
//! and the generalized kernel is `ker phi^n`; the canonical projection is the
//! projection onto the former along the latter. No annihilating polynomial
//! is ever formed.

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar};

/// A vector space `K^dim` with an endomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndoSpace {
    phi: Matrix,
}

impl EndoSpace {
    pub fn new(phi: Matrix) -> Result<EndoSpace> {
        if !phi.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "endomorphism must be square, got {}x{}",
                phi.rows(),
                phi.cols()
            )));
        }
        Ok(EndoSpace { phi })
    }

    pub fn dim(&self) -> usize {
        self.phi.rows()
    }

    pub fn field(&self) -> Field {
        self.phi.field()
    }

    pub fn phi(&self) -> &Matrix {
        &self.phi
    }
}

/// `V = gker phi (+) AV` together with the canonical projection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalDecomposition {
    /// Columns form a basis of `AV` (ambient coordinates).
    pub algebraic_basis: Matrix,
    /// Columns form a basis of `gker phi`.
    pub gker_basis: Matrix,
    /// `omega : V -> V`, projection onto `AV` along `gker phi`.
    pub omega: Matrix,
    /// `omega` followed by coordinates in `algebraic_basis` (`k x n`).
    pub projection: Matrix,
    /// `phi|AV` in `algebraic_basis` coordinates; invertible.
    pub phi_on_a: Matrix,
}

impl CanonicalDecomposition {
    pub fn algebraic_dim(&self) -> usize {
        self.algebraic_basis.cols()
    }

    /// Ambient vectors (columns) to `AV` coordinates.
    pub fn coordinates_of(&self, vectors: &Matrix) -> Result<Matrix> {
        self.projection.mul(vectors)
    }
}

pub fn algebraic_part(space: &EndoSpace) -> Result<CanonicalDecomposition> {
    let n = space.dim();
    let power = space.phi.pow(n)?;
    let algebraic_basis = column_echelon_basis(&power);
    let gker_basis = power.kernel_basis();
    let k = algebraic_basis.cols();
    let combined = algebraic_basis.hstack(&gker_basis)?;
    let change = combined.inverse().map_err(|_| {
        Error::InternalInconsistency("AV and gker do not span V".into())
    })?;
    let rows: Vec<usize> = (0..k).collect();
    let projection = change.select_rows(&rows);
    let omega = algebraic_basis.mul(&projection)?;
    let image = space.phi.mul(&algebraic_basis)?;
    let phi_on_a = algebraic_basis
        .solve_matrix(&image)?
        .ok_or_else(|| Error::InternalInconsistency("phi does not preserve AV".into()))?;
    if !phi_on_a.is_invertible() {
        return Err(Error::InternalInconsistency("phi|AV is not invertible".into()));
    }
    debug_assert_eq!(omega.rows(), n);
    Ok(CanonicalDecomposition { algebraic_basis, gker_basis, omega, projection, phi_on_a })
}

/// Basis of the column space in reduced column-echelon form.
fn column_echelon_basis(m: &Matrix) -> Matrix {
    let e = m.transpose().echelon();
    let rows: Vec<usize> = (0..e.pivots.len()).collect();
    e.reduced.select_rows(&rows).transpose()
}

/// Whether `v` lies in `AV`.
pub fn is_algebraic(space: &EndoSpace, v: &[Scalar]) -> Result<bool> {
    if v.len() != space.dim() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} in a space of dimension {}",
            v.len(),
            space.dim()
        )));
    }
    if v.iter().all(Scalar::is_zero) {
        return Ok(true);
    }
    let dec = algebraic_part(space)?;
    Ok(dec.algebraic_basis.solve(v)?.is_some())
}

/// Restriction of an equivariant map `alpha : V -> V'` to algebraic parts,
/// expressed in the two algebraic bases.
pub fn restrict_to_algebraic(
    alpha: &Matrix,
    source: &CanonicalDecomposition,
    target: &CanonicalDecomposition,
) -> Result<Matrix> {
    let image = alpha.mul(&source.algebraic_basis)?;
    if target.algebraic_dim() == 0 {
        if !image.is_zero() {
            return Err(Error::NotEquivariant("image of AV is not algebraic".into()));
        }
        return Ok(Matrix::zeros(alpha.field(), 0, source.algebraic_dim()));
    }
    target
        .algebraic_basis
        .solve_matrix(&image)?
        .ok_or_else(|| Error::NotEquivariant("image of AV is not algebraic".into()))
}

/// A pair of equivariant maps `rho : V -> V'`, `sigma : V' -> V` with
/// `sigma rho = phi^lag` and `rho sigma = phi'^lag`.
#[derive(Debug, Clone)]
pub struct ShiftEquivalence {
    pub source: EndoSpace,
    pub target: EndoSpace,
    pub rho: Matrix,
    pub sigma: Matrix,
    pub lag: usize,
}

/// Which shift-equivalence identity failed first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeIdentity {
    RhoEquivariant,
    SigmaEquivariant,
    SigmaRho,
    RhoSigma,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeVerdict {
    pub valid: bool,
    pub violation: Option<SeIdentity>,
}

impl ShiftEquivalence {
    pub fn verify(&self) -> Result<SeVerdict> {
        let phi = self.source.phi();
        let phi2 = self.target.phi();
        for m in [&self.rho, &self.sigma, phi2] {
            if m.field() != phi.field() {
                return Err(Error::FieldMismatch(phi.field().to_string(), m.field().to_string()));
            }
        }
        let (n, n2) = (self.source.dim(), self.target.dim());
        if self.rho.rows() != n2
            || self.rho.cols() != n
            || self.sigma.rows() != n
            || self.sigma.cols() != n2
        {
            return Err(Error::DimensionMismatch("shift equivalence maps".into()));
        }
        let checks = [
            (SeIdentity::RhoEquivariant, self.rho.mul(phi)?, phi2.mul(&self.rho)?),
            (SeIdentity::SigmaEquivariant, self.sigma.mul(phi2)?, phi.mul(&self.sigma)?),
            (SeIdentity::SigmaRho, self.sigma.mul(&self.rho)?, phi.pow(self.lag)?),
            (SeIdentity::RhoSigma, self.rho.mul(&self.sigma)?, phi2.pow(self.lag)?),
        ];
        for (which, lhs, rhs) in checks {
            if lhs != rhs {
                return Ok(SeVerdict { valid: false, violation: Some(which) });
            }
        }
        Ok(SeVerdict { valid: true, violation: None })
    }
}

/// `rho` restricted to `AV -> AV'` in the algebraic bases. Its inverse is
/// checked against `(phi|AV)^{-lag} sigma|`.
pub fn induced_iso_on_algebraic(se: &ShiftEquivalence) -> Result<Matrix> {
    let verdict = se.verify()?;
    if !verdict.valid {
        return Err(Error::NotEquivariant(format!("{:?} fails", verdict.violation)));
    }
    let src = algebraic_part(&se.source)?;
    let dst = algebraic_part(&se.target)?;
    let rho_a = restrict_to_algebraic(&se.rho, &src, &dst)?;
    let inverse = rho_a
        .inverse()
        .map_err(|_| Error::NotInvertible("rho restricted to AV".into()))?;
    let sigma_a = restrict_to_algebraic(&se.sigma, &dst, &src)?;
    let expected = src.phi_on_a.inverse()?.pow(se.lag)?.mul(&sigma_a)?;
    if expected != inverse {
        return Err(Error::InternalInconsistency(
            "inverse of rho| differs from phi^{-m} sigma".into(),
        ));
    }
    Ok(rho_a)
}

/// Exactness of `AV1 -> AV2 -> AV3` given `V1 -> V2 -> V3` exact at `V2`.
///
/// The restricted sequence is always exact; `false` is never returned, an
/// `InternalInconsistency` is raised instead.
pub fn check_algebraic_exactness(
    v1: &EndoSpace,
    alpha1: &Matrix,
    v2: &EndoSpace,
    alpha2: &Matrix,
    v3: &EndoSpace,
) -> Result<bool> {
    for (name, a, s, t) in [("alpha1", alpha1, v1, v2), ("alpha2", alpha2, v2, v3)] {
        if a.cols() != s.dim() || a.rows() != t.dim() {
            return Err(Error::DimensionMismatch(format!("{name} has wrong shape")));
        }
        if a.mul(s.phi())? != t.phi().mul(a)? {
            return Err(Error::NotEquivariant(name.into()));
        }
    }
    if !is_exact(alpha1, alpha2)? {
        return Err(Error::NotExact("im alpha1 != ker alpha2".into()));
    }
    let d1 = algebraic_part(v1)?;
    let d2 = algebraic_part(v2)?;
    let d3 = algebraic_part(v3)?;
    let r1 = restrict_to_algebraic(alpha1, &d1, &d2)?;
    let r2 = restrict_to_algebraic(alpha2, &d2, &d3)?;
    if !is_exact(&r1, &r2)? {
        return Err(Error::InternalInconsistency(
            "restricted sequence of algebraic parts is not exact".into(),
        ));
    }
    Ok(true)
}

/// `im a = ker b` for composable `a`, `b`.
pub fn is_exact(a: &Matrix, b: &Matrix) -> Result<bool> {
    let middle = a.rows();
    if b.cols() != middle {
        return Err(Error::DimensionMismatch("maps are not composable".into()));
    }
    if middle == 0 {
        return Ok(true);
    }
    if !(b.mul(a)?.is_zero()) {
        return Ok(false);
    }
    Ok(a.rank() + b.rank() == middle)
}
