//! Orbits of the stabilizer `O(𝔥)_h` on semi-conformal pairs.
//!
//! Labels come from the invariants `k = rank A`, `β = B` and `y = ⟨β,β⟩`.
//! Witnesses are explicit orthogonal maps built from adapted orthonormal bases.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::bispace::{
    complete_orthogonal, normalize_family, partner_within, OrthogonalFamily, OrthogonalMap, SpaceError,
};
use crate::linalg::{Matrix, Vector};
use crate::scalars::{Approx, Field, Gaussian, Tolerance};
use crate::semiconformal::{complement, ScPair, SemiconformalError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrbitError {
    #[error("pairs belong to different shifts h")]
    ContextMismatch,
    #[error("no orbit family matches (k = {k}, {detail})")]
    UnclassifiedOrbit { k: usize, detail: String },
    #[error("pairs lie in different orbits")]
    DifferentOrbits,
    #[error("witness residual {0:e} exceeds tolerance")]
    WitnessResidual(f64),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Semiconformal(#[from] SemiconformalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    I1,
    I2,
    I3,
    I4,
    I5,
    J1,
    J2,
    J3,
    J4,
    ZeroShift,
}

impl Family {
    pub const ANISOTROPIC: [Family; 5] = [Family::I1, Family::I2, Family::I3, Family::I4, Family::I5];
    pub const ISOTROPIC: [Family; 4] = [Family::J1, Family::J2, Family::J3, Family::J4];

    /// Families whose orbits carry the continuous parameter `y`.
    pub fn is_parameterized(self) -> bool {
        matches!(self, Family::I3 | Family::J3)
    }

    /// Admissible `k` for ambient dimension `d`.
    pub fn k_range(self, d: usize) -> std::ops::RangeInclusive<usize> {
        let (lo, hi) = match self {
            Family::I1 => (1, d as i64),
            Family::I2 => (0, d as i64 - 1),
            Family::I3 => (1, d as i64 - 1),
            Family::I4 => (1, d as i64 - 2),
            Family::I5 => (2, d as i64 - 1),
            Family::J1 => (2, d as i64),
            Family::J2 => (0, d as i64 - 2),
            Family::J3 => (1, d as i64 - 1),
            Family::J4 => (2, d as i64 - 2),
            Family::ZeroShift => (0, d as i64),
        };
        if hi < lo {
            #[allow(clippy::reversed_empty_ranges)]
            return 1..=0;
        }
        lo as usize..=hi as usize
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::I1 => "I1",
            Family::I2 => "I2",
            Family::I3 => "I3",
            Family::I4 => "I4",
            Family::I5 => "I5",
            Family::J1 => "J1",
            Family::J2 => "J2",
            Family::J3 => "J3",
            Family::J4 => "J4",
            Family::ZeroShift => "ZeroShift",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "I1" => Family::I1,
            "I2" => Family::I2,
            "I3" => Family::I3,
            "I4" => Family::I4,
            "I5" => Family::I5,
            "J1" => Family::J1,
            "J2" => Family::J2,
            "J3" => Family::J3,
            "J4" => Family::J4,
            "ZeroShift" => Family::ZeroShift,
            other => return Err(format!("unknown orbit family {other:?}")),
        })
    }
}

/// An orbit label: family, dimension `k` of `𝔥′`, and `y` for the continuous families.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitLabel<F> {
    family: Family,
    k: usize,
    y: Option<F>,
}

impl<F: Field> OrbitLabel<F> {
    pub fn new(family: Family, k: usize, y: Option<F>) -> Self {
        Self { family, k, y }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn y(&self) -> Option<&F> {
        self.y.as_ref()
    }

    /// Whether the parameters are admissible for dimension `d` and `s = ⟨h,h⟩`.
    pub fn in_range(&self, d: usize, s: &F, tol: Tolerance) -> bool {
        if !self.family.k_range(d).contains(&self.k) {
            return false;
        }
        match (self.family, &self.y) {
            (Family::I3, Some(y)) => !y.is_zero(tol) && !y.approx_eq(s, tol),
            (Family::J3, Some(y)) => !y.is_zero(tol),
            (fam, None) => !fam.is_parameterized(),
            _ => false,
        }
    }

    pub fn matches(&self, other: &Self, tol: Tolerance) -> bool {
        self.family == other.family
            && self.k == other.k
            && match (&self.y, &other.y) {
                (None, None) => true,
                (Some(a), Some(b)) => a.approx_eq(b, tol),
                _ => false,
            }
    }
}

impl<F: Field> fmt::Display for OrbitLabel<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.y {
            Some(y) => write!(f, "{}({}, {})", self.family, self.k, y),
            None => write!(f, "{}({})", self.family, self.k),
        }
    }
}

pub fn classify<F: Field>(p: &ScPair<F>, tol: Tolerance) -> Result<OrbitLabel<F>, OrbitError> {
    let d = p.dim();
    let h = p.h();
    let beta = p.b();
    let k = p.rank(tol).ok_or_else(|| OrbitError::UnclassifiedOrbit {
        k: 0,
        detail: "trace of A is not an admissible rank".into(),
    })?;
    let s = h.dot(h);
    let y = beta.dot(beta);
    let at_h = beta.approx_eq(h, tol);
    let at_zero = beta.is_zero(tol);

    let label = if h.is_zero(tol) {
        OrbitLabel::new(Family::ZeroShift, k, None)
    } else if !s.is_zero(tol) {
        if at_h {
            OrbitLabel::new(Family::I1, k, None)
        } else if at_zero {
            OrbitLabel::new(Family::I2, k, None)
        } else if !y.is_zero(tol) && !y.approx_eq(&s, tol) {
            OrbitLabel::new(Family::I3, k, Some(y.clone()))
        } else if y.approx_eq(&s, tol) {
            OrbitLabel::new(Family::I4, k, None)
        } else {
            OrbitLabel::new(Family::I5, k, None)
        }
    } else if at_h {
        OrbitLabel::new(Family::J1, k, None)
    } else if at_zero {
        OrbitLabel::new(Family::J2, k, None)
    } else if !y.is_zero(tol) {
        OrbitLabel::new(Family::J3, k, Some(y.clone()))
    } else {
        OrbitLabel::new(Family::J4, k, None)
    };

    if label.in_range(d, &s, tol) {
        Ok(label)
    } else {
        Err(OrbitError::UnclassifiedOrbit {
            k,
            detail: format!("invariants fit {} but lie outside its range", label.family),
        })
    }
}

pub fn same_orbit<F: Field>(p1: &ScPair<F>, p2: &ScPair<F>, tol: Tolerance) -> Result<bool, OrbitError> {
    p1.same_context(p2, tol).map_err(|_| OrbitError::ContextMismatch)?;
    Ok(classify(p1, tol)?.matches(&classify(p2, tol)?, tol))
}

/// One orbit family with its admissible `k` for a given `d` and moduli class of `h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyRange {
    pub family: Family,
    pub ks: Vec<usize>,
    pub parameterized: bool,
}

impl FamilyRange {
    pub fn is_empty(&self) -> bool {
        self.ks.is_empty()
    }
}

/// Every orbit family for the moduli class of `h`, including empty ones.
pub fn enumerate_labels<F: Field>(h: &Vector<F>, tol: Tolerance) -> Vec<FamilyRange> {
    let d = h.dim();
    let families: &[Family] = if h.is_zero(tol) {
        &[Family::ZeroShift]
    } else if h.dot(h).is_zero(tol) {
        &Family::ISOTROPIC
    } else {
        &Family::ANISOTROPIC
    };
    families
        .iter()
        .map(|&family| FamilyRange {
            family,
            ks: family.k_range(d).collect(),
            parameterized: family.is_parameterized(),
        })
        .collect()
}

/// Orthogonal basis of the regular space spanned by `span`, of dimension `dim`,
/// whose leading members determine `v ∈ span` canonically: `v` itself when
/// anisotropic, `v ± v′` for a partner `v′` when isotropic.
fn adapted_family<F: Field>(
    v: &Vector<F>,
    span: &[Vector<F>],
    dim: usize,
    tol: Tolerance,
) -> Result<OrthogonalFamily<F>, OrbitError> {
    let mut seed = OrthogonalFamily::new();
    if !v.is_zero(tol) {
        let norm = v.dot(v);
        if norm.is_zero(tol) {
            let vp = partner_within(v, span, tol)?;
            seed.push((v.add(&vp), F::from_i64(2)));
            seed.push((v.sub(&vp), F::from_i64(-2)));
        } else {
            seed.push((v.clone(), norm));
        }
    }
    Ok(complete_orthogonal(seed, span, dim, tol)?)
}

/// Adapted orthogonal basis of `𝔥 = Im A ⊕ Ker A` built around `β ∈ Im A` and
/// `h − β ∈ Ker A`.
fn pair_frame<F: Field>(p: &ScPair<F>, tol: Tolerance) -> Result<OrthogonalFamily<F>, OrbitError> {
    let k = p.rank(tol).unwrap_or(0);
    let d = p.dim();
    let image = p.a().column_basis(tol);
    let kernel = complement(p).a().column_basis(tol);
    let gamma = p.h().sub(p.b());
    let mut frame = adapted_family(p.b(), &image, k, tol)?;
    frame.extend(adapted_family(&gamma, &kernel, d - k, tol)?);
    Ok(frame)
}

fn frame_matrix<F: Field>(d: usize, frame: &OrthogonalFamily<F>, tol: Tolerance) -> Result<Matrix<F>, OrbitError> {
    Ok(Matrix::from_columns(d, &normalize_family(frame, tol)?))
}

fn to_approx_frame<F: Field>(frame: &OrthogonalFamily<F>) -> OrthogonalFamily<Approx> {
    frame.iter().map(|(v, s)| (v.to_approx(), s.to_approx())).collect()
}

/// Largest residual among `QᵀQ = I`, `Qh = h`, `QA₁Qᵀ = A₂` and `QB₁ = B₂`.
pub fn witness_residual<F: Field>(q: &Matrix<F>, p1: &ScPair<F>, p2: &ScPair<F>) -> f64 {
    let qt = q.transpose();
    [
        qt.matmul(q).residual(&Matrix::identity(q.rows())),
        q.mul_vec(p1.h()).residual(p1.h()),
        q.matmul(p1.a()).matmul(&qt).residual(p2.a()),
        q.mul_vec(p1.b()).residual(p2.b()),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

fn check_witness<F: Field>(
    q: Matrix<F>,
    p1: &ScPair<F>,
    p2: &ScPair<F>,
    tol: Tolerance,
) -> Result<OrthogonalMap<F>, OrbitError> {
    let r = witness_residual(&q, p1, p2);
    if r > tol.epsilon() {
        return Err(OrbitError::WitnessResidual(r));
    }
    Ok(OrthogonalMap::new(q, tol)?)
}

fn prepare<F: Field>(
    p1: &ScPair<F>,
    p2: &ScPair<F>,
    tol: Tolerance,
) -> Result<(OrthogonalFamily<F>, OrthogonalFamily<F>), OrbitError> {
    if !same_orbit(p1, p2, tol)? {
        return Err(OrbitError::DifferentOrbits);
    }
    Ok((pair_frame(p1, tol)?, pair_frame(p2, tol)?))
}

/// An element `Q` of the stabilizer of `h` carrying `p1` to `p2`, as `E₂E₁ᵀ` for
/// adapted orthonormal frames `E₁`, `E₂`. Fails with `ExactSqrtUnavailable` when
/// normalization leaves the field.
pub fn witness<F: Field>(p1: &ScPair<F>, p2: &ScPair<F>, tol: Tolerance) -> Result<OrthogonalMap<F>, OrbitError> {
    if p1.approx_eq(p2, tol) {
        return Ok(OrthogonalMap::identity(p1.dim()));
    }
    let (f1, f2) = prepare(p1, p2, tol)?;
    let d = p1.dim();
    let q = frame_matrix(d, &f2, tol)?.matmul(&frame_matrix(d, &f1, tol)?.transpose());
    check_witness(q, p1, p2, tol)
}

/// A witness in whichever backend can represent it.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    Exact(OrthogonalMap<Gaussian>),
    Approx(OrthogonalMap<Approx>),
}

impl Witness {
    pub fn to_approx(&self) -> Matrix<Approx> {
        match self {
            Witness::Exact(q) => q.matrix().to_approx(),
            Witness::Approx(q) => q.matrix().clone(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Witness::Exact(_))
    }
}

/// Exact witness when every normalization stays in `ℚ(i)`, otherwise the same
/// frames normalized in floating point.
pub fn witness_auto(p1: &ScPair<Gaussian>, p2: &ScPair<Gaussian>, tol: Tolerance) -> Result<Witness, OrbitError> {
    match witness(p1, p2, tol) {
        Ok(q) => return Ok(Witness::Exact(q)),
        Err(OrbitError::Space(SpaceError::ExactSqrtUnavailable)) => {}
        Err(e) => return Err(e),
    }
    let (f1, f2) = prepare(p1, p2, tol)?;
    let d = p1.dim();
    let e1 = frame_matrix(d, &to_approx_frame(&f1), tol)?;
    let e2 = frame_matrix(d, &to_approx_frame(&f2), tol)?;
    let q = e2.matmul(&e1.transpose());
    Ok(Witness::Approx(check_witness(q, &p1.to_approx(), &p2.to_approx(), tol)?))
}
