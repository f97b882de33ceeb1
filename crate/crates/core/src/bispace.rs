//! The ambient orthogonal space `(𝔥, ⟨·,·⟩)` in orthonormal coordinates.
//!
//! The form is the complex *bilinear* dot product, so nonzero vectors can be
//! isotropic and subspaces can be degenerate. Regularity (an invertible Gram
//! matrix) is the gate for projections and complements.

use thiserror::Error;

use crate::linalg::{Matrix, Vector};
use crate::scalars::{Field, Tolerance};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpaceError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("subspace is not regular (degenerate Gram matrix)")]
    NotRegular,
    #[error("spanning vectors are linearly dependent")]
    DependentBasis,
    #[error("vector is not isotropic")]
    NotIsotropic,
    #[error("zero vector")]
    ZeroVector,
    #[error("input vectors are not orthonormal")]
    NotOrthonormalInput,
    #[error("normalization needs a square root outside Q(i); retry with the approximate backend")]
    ExactSqrtUnavailable,
    #[error("I + M is singular")]
    SingularCayley,
    #[error("matrix is not antisymmetric")]
    NotAntisymmetric,
    #[error("matrix is not orthogonal")]
    NotOrthogonal,
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<(), SpaceError> {
    if expected == got {
        Ok(())
    } else {
        Err(SpaceError::DimensionMismatch { expected, got })
    }
}

/// The ambient space `ℂ^d` with the standard symmetric bilinear form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AmbientSpace {
    dim: usize,
}

impl AmbientSpace {
    pub fn new(dim: usize) -> Option<Self> {
        (dim >= 1).then_some(Self { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn full<F: Field>(&self) -> Subspace<F> {
        Subspace::full(self.dim)
    }

    pub fn zero<F: Field>(&self) -> Subspace<F> {
        Subspace::zero(self.dim)
    }
}

/// `Σ uᵢvᵢ`, without conjugation.
pub fn form<F: Field>(u: &Vector<F>, v: &Vector<F>) -> Result<F, SpaceError> {
    check_dim(u.dim(), v.dim())?;
    Ok(u.dot(v))
}

/// A subspace given by a full-column-rank `d × k` basis matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace<F> {
    basis: Matrix<F>,
    gram: Matrix<F>,
}

impl<F: Field> Subspace<F> {
    pub fn new(basis: Matrix<F>, tol: Tolerance) -> Result<Self, SpaceError> {
        if basis.rank(tol) != basis.cols() {
            return Err(SpaceError::DependentBasis);
        }
        let gram = basis.transpose().matmul(&basis);
        Ok(Self { basis, gram })
    }

    pub fn from_vectors(d: usize, vectors: &[Vector<F>], tol: Tolerance) -> Result<Self, SpaceError> {
        for v in vectors {
            check_dim(d, v.dim())?;
        }
        Self::new(Matrix::from_columns(d, vectors), tol)
    }

    /// The span of arbitrary (possibly dependent) vectors.
    pub fn span(d: usize, vectors: &[Vector<F>], tol: Tolerance) -> Result<Self, SpaceError> {
        for v in vectors {
            check_dim(d, v.dim())?;
        }
        let basis = Matrix::from_columns(d, vectors).column_basis(tol);
        Self::new(Matrix::from_columns(d, &basis), tol)
    }

    /// Column space of `m`.
    pub fn column_space(m: &Matrix<F>, tol: Tolerance) -> Self {
        let cols = m.column_basis(tol);
        Self::new(Matrix::from_columns(m.rows(), &cols), tol).expect("pivot columns are independent")
    }

    pub fn zero(d: usize) -> Self {
        Self {
            basis: Matrix::zeros(d, 0),
            gram: Matrix::zeros(0, 0),
        }
    }

    pub fn full(d: usize) -> Self {
        Self {
            basis: Matrix::identity(d),
            gram: Matrix::identity(d),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vector<F>> {
        self.basis.columns()
    }

    pub fn gram(&self) -> &Matrix<F> {
        &self.gram
    }

    pub fn is_regular(&self, tol: Tolerance) -> bool {
        if self.dim() == 0 {
            return true;
        }
        if F::BACKEND == crate::scalars::Backend::Exact {
            return !self.gram.determinant(tol).is_zero(tol);
        }
        // Scale the threshold by the Gram entries so long basis vectors are not
        // mistaken for degenerate ones.
        let scale = (0..self.dim())
            .map(|i| self.basis.column(i).iter().map(|c| c.magnitude().powi(2)).sum::<f64>())
            .product::<f64>()
            .max(1.0);
        self.gram.determinant(tol).magnitude() > tol.epsilon() * scale
    }

    /// `V (VᵀV)⁻¹ Vᵀ`.
    pub fn projection_matrix(&self, tol: Tolerance) -> Result<Matrix<F>, SpaceError> {
        if !self.is_regular(tol) {
            return Err(SpaceError::NotRegular);
        }
        let d = self.ambient_dim();
        if self.dim() == 0 {
            return Ok(Matrix::zeros(d, d));
        }
        let inv = self.gram.inverse(tol).ok_or(SpaceError::NotRegular)?;
        Ok(self.basis.matmul(&inv).matmul(&self.basis.transpose()))
    }

    /// `{x : ⟨x, v⟩ = 0 for all v ∈ self}`.
    pub fn orthogonal_complement(&self, tol: Tolerance) -> Result<Self, SpaceError> {
        if !self.is_regular(tol) {
            return Err(SpaceError::NotRegular);
        }
        let d = self.ambient_dim();
        let ker = self.basis.transpose().kernel(tol);
        Self::from_vectors(d, &ker, tol)
    }

    /// The same construction without the regularity gate; used to test that
    /// complements of degenerate subspaces are degenerate too.
    pub fn annihilator(&self, tol: Tolerance) -> Self {
        let ker = self.basis.transpose().kernel(tol);
        Self::from_vectors(self.ambient_dim(), &ker, tol).expect("kernel basis is independent")
    }

    pub fn contains(&self, v: &Vector<F>, tol: Tolerance) -> bool {
        let mut cols = self.basis.columns();
        cols.push(v.clone());
        Matrix::from_columns(self.ambient_dim(), &cols).rank(tol) == self.dim()
    }

    pub fn is_subspace_of(&self, other: &Self, tol: Tolerance) -> bool {
        self.basis_vectors().iter().all(|v| other.contains(v, tol))
    }

    pub fn same_as(&self, other: &Self, tol: Tolerance) -> bool {
        self.dim() == other.dim() && self.is_subspace_of(other, tol)
    }
}

/// For isotropic `b`, a vector `b'` with `⟨b',b'⟩ = 0` and `⟨b,b'⟩ = 1`.
///
/// Uses the first standard basis vector `w` with `⟨b,w⟩ ≠ 0`:
/// `b' = w/⟨b,w⟩ − ⟨w,w⟩/(2⟨b,w⟩²)·b`.
pub fn hyperbolic_partner<F: Field>(b: &Vector<F>, tol: Tolerance) -> Result<Vector<F>, SpaceError> {
    let d = b.dim();
    let units: Vec<Vector<F>> = (0..d).map(|i| Vector::unit(d, i)).collect();
    partner_within(b, &units, tol)
}

/// Like [`hyperbolic_partner`], but the partner is built from `candidates`, so
/// it stays inside their span.
pub(crate) fn partner_within<F: Field>(
    b: &Vector<F>,
    candidates: &[Vector<F>],
    tol: Tolerance,
) -> Result<Vector<F>, SpaceError> {
    if b.is_zero(tol) {
        return Err(SpaceError::ZeroVector);
    }
    if !b.dot(b).is_zero(tol) {
        return Err(SpaceError::NotIsotropic);
    }
    let pick = if F::BACKEND == crate::scalars::Backend::Exact {
        candidates.iter().find(|w| !b.dot(w).is_zero(tol))
    } else {
        candidates
            .iter()
            .filter(|w| !b.dot(w).is_zero(tol))
            .max_by(|x, y| b.dot(x).magnitude().total_cmp(&b.dot(y).magnitude()))
    };
    // A nonzero vector pairs nontrivially with some vector of any regular space
    // containing it; failing that, the span is degenerate.
    let w = pick.ok_or(SpaceError::NotRegular)?;
    let bw = b.dot(w);
    let ww = w.dot(w);
    let inv = F::one().try_div(&bw, tol).map_err(|_| SpaceError::NotRegular)?;
    let coef = ww * &inv * &inv * &F::from_ratio(1, 2);
    Ok(w.scale(&inv).sub(&b.scale(&coef)))
}

/// A pairwise orthogonal family together with the self-pairings `⟨f,f⟩`.
pub(crate) type OrthogonalFamily<F> = Vec<(Vector<F>, F)>;

fn is_anisotropic<F: Field>(v: &Vector<F>, tol: Tolerance) -> bool {
    let s = v.dot(v);
    if F::BACKEND == crate::scalars::Backend::Exact {
        !s.is_zero(tol)
    } else {
        let scale: f64 = v.iter().map(|c| c.magnitude().powi(2)).sum();
        s.magnitude() > tol.epsilon() * scale.max(1.0)
    }
}

/// Extends the orthogonal family `family` to an orthogonal basis of
/// `span(family) + span(spanning)`, assumed regular of dimension `target`.
///
/// Isotropic pivots `u` are replaced by `u + u'` and `u − u'` (self-pairings 2
/// and −2), where `u'` is a hyperbolic partner drawn from the remaining span.
pub(crate) fn complete_orthogonal<F: Field>(
    mut family: OrthogonalFamily<F>,
    spanning: &[Vector<F>],
    target: usize,
    tol: Tolerance,
) -> Result<OrthogonalFamily<F>, SpaceError> {
    while family.len() < target {
        let residuals: Vec<Vector<F>> = spanning
            .iter()
            .map(|v| {
                family.iter().fold(v.clone(), |acc, (f, s)| {
                    let c = v.dot(f).try_div(s, tol).expect("family has nonzero norms");
                    acc.sub(&f.scale(&c))
                })
            })
            .filter(|v| !v.is_zero(tol))
            .collect();
        if residuals.is_empty() {
            return Err(SpaceError::NotRegular);
        }
        let pivot = if F::BACKEND == crate::scalars::Backend::Exact {
            residuals.iter().find(|v| is_anisotropic(*v, tol))
        } else {
            residuals
                .iter()
                .filter(|v| is_anisotropic(*v, tol))
                .max_by(|a, b| a.dot(a).magnitude().total_cmp(&b.dot(b).magnitude()))
        };
        match pivot {
            Some(v) => {
                let s = v.dot(v);
                family.push((v.clone(), s));
            }
            None => {
                let u = &residuals[0];
                let up = partner_within(u, &residuals[1..], tol)?;
                family.push((u.add(&up), F::from_i64(2)));
                family.push((u.sub(&up), F::from_i64(-2)));
            }
        }
    }
    Ok(family)
}

/// Divides each member by the square root of its self-pairing.
pub(crate) fn normalize_family<F: Field>(
    family: &OrthogonalFamily<F>,
    tol: Tolerance,
) -> Result<Vec<Vector<F>>, SpaceError> {
    family
        .iter()
        .map(|(f, s)| {
            let r = s.sqrt().map_err(|_| SpaceError::ExactSqrtUnavailable)?;
            let inv = F::one().try_div(&r, tol).map_err(|_| SpaceError::NotRegular)?;
            Ok(f.scale(&inv))
        })
        .collect()
}

/// An orthogonal transformation `Q` with `QᵀQ = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalMap<F> {
    matrix: Matrix<F>,
}

impl<F: Field> OrthogonalMap<F> {
    pub fn new(matrix: Matrix<F>, tol: Tolerance) -> Result<Self, SpaceError> {
        if !matrix.is_square() {
            return Err(SpaceError::NotOrthogonal);
        }
        let n = matrix.rows();
        if !matrix.transpose().matmul(&matrix).approx_eq(&Matrix::identity(n), tol) {
            return Err(SpaceError::NotOrthogonal);
        }
        Ok(Self { matrix })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            matrix: Matrix::identity(d),
        }
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix<F> {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, v: &Vector<F>) -> Vector<F> {
        self.matrix.mul_vec(v)
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self {
            matrix: self.matrix.matmul(&other.matrix),
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            matrix: self.matrix.transpose(),
        }
    }

    /// `QMQᵀ`.
    pub fn conjugate(&self, m: &Matrix<F>) -> Matrix<F> {
        self.matrix.matmul(m).matmul(&self.matrix.transpose())
    }

    /// Largest entry of `|QᵀQ − I|`.
    pub fn orthogonality_residual(&self) -> f64 {
        let n = self.dim();
        self.matrix
            .transpose()
            .matmul(&self.matrix)
            .residual(&Matrix::identity(n))
    }
}

/// Completes an orthonormal list to an orthogonal matrix whose leading columns
/// are the given vectors.
pub fn extend_orthonormal<F: Field>(
    d: usize,
    vs: &[Vector<F>],
    tol: Tolerance,
) -> Result<OrthogonalMap<F>, SpaceError> {
    for (i, v) in vs.iter().enumerate() {
        check_dim(d, v.dim())?;
        for (j, w) in vs.iter().enumerate() {
            let expect = if i == j { F::one() } else { F::zero() };
            if !v.dot(w).approx_eq(&expect, tol) {
                return Err(SpaceError::NotOrthonormalInput);
            }
        }
    }
    let given = Subspace::from_vectors(d, vs, tol).map_err(|_| SpaceError::NotOrthonormalInput)?;
    let rest = given.orthogonal_complement(tol)?;
    let family = complete_orthogonal(Vec::new(), &rest.basis_vectors(), rest.dim(), tol)?;
    let mut cols = vs.to_vec();
    cols.extend(normalize_family(&family, tol)?);
    OrthogonalMap::new(Matrix::from_columns(d, &cols), tol)
}

/// Cayley transform `(I − M)(I + M)⁻¹` of an antisymmetric `M`.
///
/// If `Mh = 0` the result fixes `h`.
pub fn cayley_orthogonal<F: Field>(m: &Matrix<F>, tol: Tolerance) -> Result<OrthogonalMap<F>, SpaceError> {
    if !m.is_antisymmetric(tol) {
        return Err(SpaceError::NotAntisymmetric);
    }
    let n = m.rows();
    let id = Matrix::identity(n);
    let inv = id.add(m).inverse(tol).ok_or(SpaceError::SingularCayley)?;
    Ok(OrthogonalMap {
        matrix: id.sub(m).matmul(&inv),
    })
}
