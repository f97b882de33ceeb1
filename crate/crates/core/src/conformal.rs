//! Conformal vectors `ω_h`, their central charges, moduli and automorphisms.

use std::fmt;

use thiserror::Error;

use crate::bispace::{check_dim, OrthogonalMap, SpaceError};
use crate::fock::{mode_apply, virasoro_mode, weight_basis, FockVector, QuadLin};
use crate::linalg::{Matrix, Vector};
use crate::scalars::{Field, Tolerance};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConformalError {
    #[error("weight-two vector is neither ω_h nor semi-conformal")]
    NotConformalCandidate,
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// `ω_h` together with its central charge `d − 12⟨h,h⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConformalVector<F> {
    h: Vector<F>,
    charge: F,
}

impl<F: Field> ConformalVector<F> {
    pub fn new(h: Vector<F>) -> Self {
        let charge = F::from_i64(h.dim() as i64) - F::from_i64(12) * h.dot(&h);
        Self { h, charge }
    }

    pub fn shift(&self) -> &Vector<F> {
        &self.h
    }

    pub fn charge(&self) -> &F {
        &self.charge
    }

    pub fn to_quadlin(&self) -> QuadLin<F> {
        QuadLin::omega(&self.h)
    }
}

/// Isomorphism class of `(V_ĥ(1,0), ω_h)`, labelled by the complete invariant
/// `s = ⟨h,h⟩`. A line coordinate `t` with `h = t·u`, `⟨u,u⟩ = 1`, recovers
/// `s = t²`, so `s` carries the same information as `t` up to sign.
#[derive(Debug, Clone, PartialEq)]
pub enum ModuliClass<F> {
    Zero,
    Isotropic,
    Value(F),
}

impl<F: Field> fmt::Display for ModuliClass<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuliClass::Zero => write!(f, "zero"),
            ModuliClass::Isotropic => write!(f, "isotropic"),
            ModuliClass::Value(s) => write!(f, "value({s})"),
        }
    }
}

impl<F: Field> ModuliClass<F> {
    pub fn matches(&self, other: &Self, tol: Tolerance) -> bool {
        match (self, other) {
            (ModuliClass::Zero, ModuliClass::Zero) | (ModuliClass::Isotropic, ModuliClass::Isotropic) => true,
            (ModuliClass::Value(a), ModuliClass::Value(b)) => a.approx_eq(b, tol),
            _ => false,
        }
    }
}

pub fn classify_moduli<F: Field>(h: &Vector<F>, tol: Tolerance) -> ModuliClass<F> {
    if h.is_zero(tol) {
        return ModuliClass::Zero;
    }
    let s = h.dot(h);
    if s.is_zero(tol) {
        ModuliClass::Isotropic
    } else {
        ModuliClass::Value(s)
    }
}

/// Whether `(V, ω_{h1}) ≅ (V, ω_{h2})`, i.e. `h1` and `h2` share an `O(𝔥)`-orbit.
pub fn voa_isomorphic<F: Field>(h1: &Vector<F>, h2: &Vector<F>, tol: Tolerance) -> Result<bool, SpaceError> {
    check_dim(h1.dim(), h2.dim())?;
    Ok(classify_moduli(h1, tol).matches(&classify_moduli(h2, tol), tol))
}

/// The shift `h` when `w = ω_h`, i.e. exactly when the quadratic part is the
/// identity. These are the conformal vectors sharing the standard gradation.
pub fn grading_conformal_classify<F: Field>(w: &QuadLin<F>, tol: Tolerance) -> Option<Vector<F>> {
    w.quadratic()
        .approx_eq(&Matrix::identity(w.dim()), tol)
        .then(|| w.linear().clone())
}

/// `S² = S` and `Sb = b`: `w` is `ω_b` restricted to the Heisenberg algebra of `Im S`.
pub fn is_conformal_candidate<F: Field>(w: &QuadLin<F>, tol: Tolerance) -> bool {
    let s = w.quadratic();
    s.matmul(s).approx_eq(s, tol) && s.mul_vec(w.linear()).approx_eq(w.linear(), tol)
}

/// `trace(S) − 12·bᵀb`.
pub fn central_charge<F: Field>(w: &QuadLin<F>, tol: Tolerance) -> Result<F, ConformalError> {
    if !is_conformal_candidate(w, tol) {
        return Err(ConformalError::NotConformalCandidate);
    }
    Ok(w.formal_charge())
}

/// Fock-side central charge: twice the vacuum coefficient of `L′(2) w`.
pub fn fock_central_charge<F: Field>(w: &QuadLin<F>) -> F {
    virasoro_mode(w, 2, &w.to_fock()).vacuum_coefficient() * &F::from_i64(2)
}

/// Fock-side test for a gradation-preserving conformal vector: `L′(0)` is the
/// identity on weight one and `L′(0)w = 2w`.
pub fn fock_preserves_grading<F: Field>(w: &QuadLin<F>, tol: Tolerance) -> bool {
    let identity_on_weight_one = weight_basis(w.dim(), 1).into_iter().all(|m| {
        let v = FockVector::monomial(m, F::one());
        virasoro_mode(w, 0, &v).approx_eq(&v, tol)
    });
    let wf = w.to_fock();
    identity_on_weight_one && virasoro_mode(w, 0, &wf).approx_eq(&wf.scale(&F::from_i64(2)), tol)
}

/// Fock-side check that `L′(0)` is the weight operator on all weights `≤ max_weight`.
pub fn fock_l0_is_weight<F: Field>(w: &QuadLin<F>, max_weight: u32, tol: Tolerance) -> bool {
    (0..=max_weight).all(|n| {
        weight_basis(w.dim(), n).into_iter().all(|m| {
            let v = FockVector::monomial(m, F::one());
            virasoro_mode(w, 0, &v).approx_eq(&v.scale(&F::from_i64(i64::from(n))), tol)
        })
    })
}

/// `QᵀQ = I` and `Qh = h`: `Q` induces an automorphism of `(V, ω_h)`.
pub fn is_automorphism<F: Field>(q: &Matrix<F>, h: &Vector<F>, tol: Tolerance) -> bool {
    q.is_square()
        && q.rows() == h.dim()
        && q.transpose().matmul(q).approx_eq(&Matrix::identity(q.rows()), tol)
        && q.mul_vec(h).approx_eq(h, tol)
}

/// `(QSQᵀ, Qb)`, the image of `w` under the automorphism induced by `Q`.
pub fn apply_orthogonal<F: Field>(q: &OrthogonalMap<F>, w: &QuadLin<F>) -> Result<QuadLin<F>, ConformalError> {
    check_dim(q.dim(), w.dim())?;
    let s = q.conjugate(w.quadratic());
    let b = q.apply(w.linear());
    Ok(QuadLin::new(s, b, Tolerance::default()).expect("conjugate of a symmetric matrix is symmetric"))
}

/// Fock-side image of a weight-one vector under `Q`: `h_i(−1)·1 ↦ Σ_j Q_ji h_j(−1)·1`.
/// Used to check that conjugation by `Q` intertwines the `h(−1)` action.
pub fn transport_weight_one<F: Field>(q: &Matrix<F>, v: &FockVector<F>) -> FockVector<F> {
    let d = q.rows();
    let mut out = FockVector::zero();
    for j in 0..d {
        let coef = (0..d).fold(F::zero(), |acc, i| {
            let picked = mode_apply(i, 1, v).vacuum_coefficient();
            acc + &(q[(j, i)].clone() * &picked)
        });
        out = out.add(&mode_apply(j, -1, &FockVector::vacuum()).scale(&coef));
    }
    out
}
