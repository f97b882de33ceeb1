//! Semi-conformal vectors of `(V, ω_h)` as symmetric idempotent pairs `(A, B)`,
//! their geometric counterparts `(𝔥′, h′)`, and the partial order on both.

use thiserror::Error;

use crate::bispace::{OrthogonalMap, SpaceError, Subspace};
use crate::fock::{
    graded_dim, operator_matrix, virasoro_mode, virasoro_mode_with, FockVector, LinearSign, QuadLin,
};
use crate::linalg::{Matrix, Vector};
use crate::scalars::{Approx, Field, Tolerance};

/// Weight bound used by the Fock checks when none is given.
pub const DEFAULT_WEIGHT_BOUND: u32 = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemiconformalError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("subspace is not regular")]
    NotRegular,
    #[error("pairs belong to different shifts h")]
    ContextMismatch,
    #[error("generator is isotropic")]
    IsotropicGenerator,
    #[error("(A, B) is not a semi-conformal pair for this h")]
    NotSemiconformal,
    #[error(transparent)]
    Space(SpaceError),
}

impl From<SpaceError> for SemiconformalError {
    fn from(e: SpaceError) -> Self {
        match e {
            SpaceError::DimensionMismatch { expected, got } => Self::DimensionMismatch { expected, got },
            SpaceError::NotRegular => Self::NotRegular,
            other => Self::Space(other),
        }
    }
}

fn check_dim(expected: usize, got: usize) -> Result<(), SemiconformalError> {
    if expected == got {
        Ok(())
    } else {
        Err(SemiconformalError::DimensionMismatch { expected, got })
    }
}

fn check_shapes<F: Field>(a: &Matrix<F>, b: &Vector<F>, h: &Vector<F>) -> Result<(), SemiconformalError> {
    let d = h.dim();
    check_dim(d, a.rows())?;
    check_dim(d, a.cols())?;
    check_dim(d, b.dim())
}

/// `Aᵀ = A`, `A² = A` and `AΛ = B`.
pub fn is_semiconformal<F: Field>(
    a: &Matrix<F>,
    b: &Vector<F>,
    h: &Vector<F>,
    tol: Tolerance,
) -> Result<bool, SemiconformalError> {
    check_shapes(a, b, h)?;
    Ok(a.is_symmetric(tol) && a.matmul(a).approx_eq(a, tol) && a.mul_vec(h).approx_eq(b, tol))
}

/// A semi-conformal vector `ω_{A,B} = ½Σ A_ij h_i(−1)h_j(−1)·1 + B(−2)·1` of `(V, ω_h)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScPair<F> {
    a: Matrix<F>,
    b: Vector<F>,
    h: Vector<F>,
}

impl<F: Field> ScPair<F> {
    pub fn new(a: Matrix<F>, b: Vector<F>, h: Vector<F>, tol: Tolerance) -> Result<Self, SemiconformalError> {
        if !is_semiconformal(&a, &b, &h, tol)? {
            return Err(SemiconformalError::NotSemiconformal);
        }
        let p = Self { a, b, h };
        if p.rank(tol).is_none() {
            return Err(SemiconformalError::NotSemiconformal);
        }
        Ok(p)
    }

    /// The zero vector, the minimum of the order.
    pub fn zero(h: &Vector<F>) -> Self {
        let d = h.dim();
        Self {
            a: Matrix::zeros(d, d),
            b: Vector::zeros(d),
            h: h.clone(),
        }
    }

    /// `ω_h` itself, the maximum of the order.
    pub fn full(h: &Vector<F>) -> Self {
        Self {
            a: Matrix::identity(h.dim()),
            b: h.clone(),
            h: h.clone(),
        }
    }

    pub fn a(&self) -> &Matrix<F> {
        &self.a
    }

    pub fn b(&self) -> &Vector<F> {
        &self.b
    }

    pub fn h(&self) -> &Vector<F> {
        &self.h
    }

    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    /// `rank(A)`, read off as the trace of the idempotent `A`.
    pub fn rank(&self, tol: Tolerance) -> Option<usize> {
        let k = self.a.trace().to_integer(tol)?;
        usize::try_from(k).ok().filter(|&k| k <= self.dim())
    }

    pub fn to_quadlin(&self) -> QuadLin<F> {
        QuadLin::new(self.a.clone(), self.b.clone(), Tolerance::default())
            .expect("A is symmetric with matching shape")
    }

    pub fn central_charge(&self) -> F {
        self.to_quadlin().formal_charge()
    }

    pub fn same_context(&self, other: &Self, tol: Tolerance) -> Result<(), SemiconformalError> {
        if self.h.approx_eq(&other.h, tol) {
            Ok(())
        } else {
            Err(SemiconformalError::ContextMismatch)
        }
    }

    pub fn approx_eq(&self, other: &Self, tol: Tolerance) -> bool {
        self.a.approx_eq(&other.a, tol) && self.b.approx_eq(&other.b, tol) && self.h.approx_eq(&other.h, tol)
    }

    /// `(QAQᵀ, QB)` in the context `Qh`.
    pub fn transform(&self, q: &OrthogonalMap<F>) -> Self {
        Self {
            a: q.conjugate(&self.a),
            b: q.apply(&self.b),
            h: q.apply(&self.h),
        }
    }

    pub fn to_approx(&self) -> ScPair<Approx> {
        ScPair {
            a: self.a.to_approx(),
            b: self.b.to_approx(),
            h: self.h.to_approx(),
        }
    }
}

/// A regular subspace `𝔥′` with `h′ = P_{𝔥′}(h)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegPair<F> {
    subspace: Subspace<F>,
    hprime: Vector<F>,
    h: Vector<F>,
}

impl<F: Field> RegPair<F> {
    pub fn new(subspace: Subspace<F>, h: &Vector<F>, tol: Tolerance) -> Result<Self, SemiconformalError> {
        check_dim(subspace.ambient_dim(), h.dim())?;
        let p = subspace.projection_matrix(tol)?;
        Ok(Self {
            hprime: p.mul_vec(h),
            subspace,
            h: h.clone(),
        })
    }

    pub fn subspace(&self) -> &Subspace<F> {
        &self.subspace
    }

    pub fn hprime(&self) -> &Vector<F> {
        &self.hprime
    }

    pub fn h(&self) -> &Vector<F> {
        &self.h
    }

    /// `y = ⟨h′, h′⟩`.
    pub fn y(&self) -> F {
        self.hprime.dot(&self.hprime)
    }
}

pub fn from_subspace<F: Field>(s: &Subspace<F>, h: &Vector<F>, tol: Tolerance) -> Result<ScPair<F>, SemiconformalError> {
    check_dim(s.ambient_dim(), h.dim())?;
    let a = s.projection_matrix(tol)?;
    let b = a.mul_vec(h);
    Ok(ScPair { a, b, h: h.clone() })
}

pub fn to_subspace<F: Field>(p: &ScPair<F>, tol: Tolerance) -> RegPair<F> {
    RegPair {
        subspace: Subspace::column_space(&p.a, tol),
        hprime: p.b.clone(),
        h: p.h.clone(),
    }
}

/// `A₂A₁ = A₁` and `A₂B₁ = B₁ = A₁B₂`.
pub fn leq<F: Field>(p1: &ScPair<F>, p2: &ScPair<F>, tol: Tolerance) -> Result<bool, SemiconformalError> {
    check_dim(p1.dim(), p2.dim())?;
    p1.same_context(p2, tol)?;
    Ok(p2.a.matmul(&p1.a).approx_eq(&p1.a, tol)
        && p2.a.mul_vec(&p1.b).approx_eq(&p1.b, tol)
        && p1.a.mul_vec(&p2.b).approx_eq(&p1.b, tol))
}

/// `𝔥₁ ⊂ 𝔥₂` and `P₂(h₁′) = h₁′ = P₁(h₂′)`.
pub fn leq_geometric<F: Field>(r1: &RegPair<F>, r2: &RegPair<F>, tol: Tolerance) -> Result<bool, SemiconformalError> {
    check_dim(r1.h.dim(), r2.h.dim())?;
    if !r1.h.approx_eq(&r2.h, tol) {
        return Err(SemiconformalError::ContextMismatch);
    }
    if !r1.subspace.is_subspace_of(&r2.subspace, tol) {
        return Ok(false);
    }
    let p1 = r1.subspace.projection_matrix(tol)?;
    let p2 = r2.subspace.projection_matrix(tol)?;
    Ok(p2.mul_vec(&r1.hprime).approx_eq(&r1.hprime, tol) && p1.mul_vec(&r2.hprime).approx_eq(&r1.hprime, tol))
}

/// `ω_h − ω′ = (I − A, Λ − B)`.
pub fn complement<F: Field>(p: &ScPair<F>) -> ScPair<F> {
    ScPair {
        a: Matrix::identity(p.dim()).sub(&p.a),
        b: p.h.sub(&p.b),
        h: p.h.clone(),
    }
}

/// Weight-one part of the commutant of `ω′`: `Ker A`.
pub fn commutant_weight1<F: Field>(p: &ScPair<F>, tol: Tolerance) -> Subspace<F> {
    Subspace::from_vectors(p.dim(), &p.a.kernel(tol), tol).expect("kernel basis is independent")
}

/// Weight-one part of the double commutant: `Ker(I − A) = Im A`.
pub fn double_commutant_weight1<F: Field>(p: &ScPair<F>, tol: Tolerance) -> Subspace<F> {
    commutant_weight1(&complement(p), tol)
}

/// Kernel of `op` restricted to the weight-one space, as vectors `x` with `x(−1)·1 ↦ 0`.
fn fock_weight_one_kernel<F: Field>(
    d: usize,
    tol: Tolerance,
    op: impl Fn(&FockVector<F>) -> FockVector<F>,
) -> Subspace<F> {
    let m = operator_matrix(d, 1, 2, op);
    Subspace::from_vectors(d, &m.kernel(tol), tol).expect("kernel basis is independent")
}

/// Kernel of `L′(−1)` on weight one, computed in the Fock engine.
pub fn fock_commutant_weight1<F: Field>(p: &ScPair<F>, tol: Tolerance) -> Subspace<F> {
    let w = p.to_quadlin();
    fock_weight_one_kernel(p.dim(), tol, |v| virasoro_mode(&w, -1, v))
}

/// Kernel of `L(−1) − L′(−1)` on weight one, computed in the Fock engine.
pub fn fock_double_commutant_weight1<F: Field>(p: &ScPair<F>, tol: Tolerance) -> Subspace<F> {
    let full = QuadLin::omega(&p.h);
    let w = p.to_quadlin();
    fock_weight_one_kernel(p.dim(), tol, |v| virasoro_mode(&full, -1, v).sub(&virasoro_mode(&w, -1, v)))
}

/// Checks in the Fock engine, with `L` the modes of `ω_h` and `L′` those of `ω′ = ω_{A,B}`:
/// `L(0)ω′ = 2ω′`, `L(1)ω′ = 0`, `L(2)ω′ = ½(trace A − 12BᵀB)·1`,
/// `L(n)ω′ = 0` for `3 ≤ n ≤ max_weight`, and `L′(−1)ω′ = L(−1)ω′`.
pub fn fock_semiconformal_check<F: Field>(
    a: &Matrix<F>,
    b: &Vector<F>,
    h: &Vector<F>,
    max_weight: u32,
    tol: Tolerance,
) -> Result<bool, SemiconformalError> {
    fock_semiconformal_check_with(a, b, h, max_weight, tol, LinearSign::Translation)
}

pub fn fock_semiconformal_check_with<F: Field>(
    a: &Matrix<F>,
    b: &Vector<F>,
    h: &Vector<F>,
    max_weight: u32,
    tol: Tolerance,
    sign: LinearSign,
) -> Result<bool, SemiconformalError> {
    check_shapes(a, b, h)?;
    let Ok(wp) = QuadLin::new(a.clone(), b.clone(), tol) else {
        return Ok(false);
    };
    let full = QuadLin::omega(h);
    let l = |m: i64, v: &FockVector<F>| virasoro_mode_with(&full, m, v, sign);
    let omega = wp.to_fock();
    let half_charge = wp.formal_charge() * &F::from_ratio(1, 2);

    let ok = l(0, &omega).approx_eq(&omega.scale(&F::from_i64(2)), tol)
        && l(1, &omega).is_zero(tol)
        && l(2, &omega).approx_eq(&FockVector::vacuum().scale(&half_charge), tol)
        && (3..=i64::from(max_weight)).all(|n| l(n, &omega).is_zero(tol))
        && virasoro_mode_with(&wp, -1, &omega, sign).approx_eq(&l(-1, &omega), tol);
    Ok(ok)
}

/// Fock-side order test, with `Lⁱ` the modes of `ω^i = ω_{A_i,B_i}`:
/// `L²(0)ω¹ = 2ω¹`, `L²(1)ω¹ = 0`, `L²(2)ω¹ = L¹(2)ω¹`, `L²(−1)ω¹ = L¹(−1)ω¹`
/// and `L²(n)ω¹ = 0` for `3 ≤ n ≤ max_weight`.
pub fn leq_fock_check<F: Field>(
    p1: &ScPair<F>,
    p2: &ScPair<F>,
    max_weight: u32,
    tol: Tolerance,
) -> Result<bool, SemiconformalError> {
    check_dim(p1.dim(), p2.dim())?;
    p1.same_context(p2, tol)?;
    let (w1, w2) = (p1.to_quadlin(), p2.to_quadlin());
    let omega = w1.to_fock();
    let ok = virasoro_mode(&w2, 0, &omega).approx_eq(&omega.scale(&F::from_i64(2)), tol)
        && virasoro_mode(&w2, 1, &omega).is_zero(tol)
        && virasoro_mode(&w2, 2, &omega).approx_eq(&virasoro_mode(&w1, 2, &omega), tol)
        && virasoro_mode(&w2, -1, &omega).approx_eq(&virasoro_mode(&w1, -1, &omega), tol)
        && (3..=i64::from(max_weight)).all(|n| virasoro_mode(&w2, n, &omega).is_zero(tol));
    Ok(ok)
}

/// `(0,0) < p₁ < ⋯ < p_d = (I, Λ)` along the coordinate flag `span{e₁,…,e_k}`.
pub fn maximal_chain<F: Field>(h: &Vector<F>) -> Vec<ScPair<F>> {
    let d = h.dim();
    (0..=d)
        .map(|k| {
            let a = Matrix::from_fn(d, d, |i, j| if i == j && i < k { F::one() } else { F::zero() });
            let b = a.mul_vec(h);
            ScPair { a, b, h: h.clone() }
        })
        .collect()
}

/// `dim V_n = Σ_{a+b=n} dim V^{(k)}_a · dim V^{(d−k)}_b` for every `n ≤ max_weight`,
/// the character identity behind `V ≅ C(⟨ω′⟩) ⊗ C(C(⟨ω′⟩))`.
pub fn tensor_character_check<F: Field>(p: &ScPair<F>, max_weight: u32, tol: Tolerance) -> bool {
    let Some(k) = p.rank(tol) else {
        return false;
    };
    let d = p.dim();
    (0..=max_weight as usize).all(|n| {
        let split: u64 = (0..=n).map(|a| graded_dim(k, a) * graded_dim(d - k, n - a)).sum();
        graded_dim(d, n) == split
    })
}

/// The semi-conformal vector of the rank-one Heisenberg algebra generated by `hp`:
/// `A = hp·hpᵀ/⟨hp,hp⟩`, `B = (⟨hp,h⟩/⟨hp,hp⟩)·hp`.
pub fn rank1_generated<F: Field>(hp: &Vector<F>, h: &Vector<F>, tol: Tolerance) -> Result<ScPair<F>, SemiconformalError> {
    check_dim(h.dim(), hp.dim())?;
    let norm = hp.dot(hp);
    let inv = F::one()
        .try_div(&norm, tol)
        .map_err(|_| SemiconformalError::IsotropicGenerator)?;
    let a = Matrix::outer(hp, hp).scale(&inv);
    let b = hp.scale(&(hp.dot(h) * &inv));
    Ok(ScPair { a, b, h: h.clone() })
}

/// The scalar `a` with `L(1)·hp(−1)·1 = a·1` under `ω_h`.
pub fn rank1_parameter<F: Field>(hp: &Vector<F>, h: &Vector<F>) -> F {
    virasoro_mode(&QuadLin::omega(h), 1, &FockVector::weight_one(hp)).vacuum_coefficient()
}
