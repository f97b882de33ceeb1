//! The level-one Fock space `V_ĥ(1,0)` and its operators.
//!
//! States are finite combinations of monomials `h_{i₁}(−n₁)⋯h_{i_k}(−n_k)·1`.
//! Heisenberg modes act by `[h_i(m), h_j(n)] = m δ_{ij} δ_{m+n,0}`; `h_i(0)` is
//! zero on the vacuum module. Every weight-two vector is encoded by a
//! [`QuadLin`], whose Virasoro-type modes are computed by [`virasoro_mode`].
//!
//! Directions are 0-based in this API (`0..d`); the JSON encoding shifts them to
//! `1..=d`.

use std::collections::BTreeMap;
use std::fmt;

use crate::linalg::{Matrix, Vector};
use thiserror::Error;

use crate::scalars::{Field, Tolerance};

/// A canonically sorted multiset of `(direction, mode)` creation factors.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct FockMonomial(Vec<(usize, u32)>);

impl FockMonomial {
    pub fn vacuum() -> Self {
        Self(Vec::new())
    }

    /// Factors `(i, n)` stand for `h_i(−n)`; `n` must be positive.
    pub fn new(mut factors: Vec<(usize, u32)>) -> Self {
        assert!(factors.iter().all(|&(_, n)| n >= 1), "creation modes are positive");
        factors.sort_unstable();
        Self(factors)
    }

    pub fn factors(&self) -> &[(usize, u32)] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().map(|&(_, n)| n).sum()
    }

    pub fn is_vacuum(&self) -> bool {
        self.0.is_empty()
    }

    pub fn multiplicity(&self, dir: usize, mode: u32) -> usize {
        self.0.iter().filter(|&&f| f == (dir, mode)).count()
    }

    pub fn with_factor(&self, dir: usize, mode: u32) -> Self {
        let mut f = self.0.clone();
        let pos = f.partition_point(|&x| x < (dir, mode));
        f.insert(pos, (dir, mode));
        Self(f)
    }

    /// Removes one copy of the factor; `None` if absent.
    pub fn without_factor(&self, dir: usize, mode: u32) -> Option<Self> {
        let pos = self.0.iter().position(|&x| x == (dir, mode))?;
        let mut f = self.0.clone();
        f.remove(pos);
        Some(Self(f))
    }

    fn distinct_factors(&self) -> impl Iterator<Item = ((usize, u32), usize)> + '_ {
        let mut i = 0;
        std::iter::from_fn(move || {
            let f = *self.0.get(i)?;
            let mut j = i;
            while j < self.0.len() && self.0[j] == f {
                j += 1;
            }
            let count = j - i;
            i = j;
            Some((f, count))
        })
    }
}

impl fmt::Display for FockMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &(i, n) in &self.0 {
            write!(f, "h{}(-{})", i + 1, n)?;
        }
        write!(f, "1")
    }
}

/// A finite linear combination of monomials with no stored zero coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct FockVector<F> {
    terms: BTreeMap<FockMonomial, F>,
}

impl<F: Field> Default for FockVector<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Field> FockVector<F> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn vacuum() -> Self {
        Self::monomial(FockMonomial::vacuum(), F::one())
    }

    pub fn monomial(m: FockMonomial, c: F) -> Self {
        let mut v = Self::zero();
        v.add_term(m, c);
        v
    }

    /// `x(−1)·1 = Σ x_i h_i(−1)·1`.
    pub fn weight_one(x: &Vector<F>) -> Self {
        let mut v = Self::zero();
        for (i, c) in x.iter().enumerate() {
            v.add_term(FockMonomial::new(vec![(i, 1)]), c.clone());
        }
        v
    }

    pub fn add_term(&mut self, m: FockMonomial, c: F) {
        if c.is_exact_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_exact_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FockMonomial, &F)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &FockMonomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    pub fn vacuum_coefficient(&self) -> F {
        self.coefficient(&FockMonomial::vacuum())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Self::zero();
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x.clone() * c);
        }
        out
    }

    pub fn is_zero(&self, tol: Tolerance) -> bool {
        self.terms.values().all(|c| c.is_zero(tol))
    }

    pub fn approx_eq(&self, other: &Self, tol: Tolerance) -> bool {
        self.sub(other).is_zero(tol)
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(Field::magnitude).fold(0.0, f64::max)
    }

    pub fn max_weight(&self) -> u32 {
        self.terms.keys().map(FockMonomial::weight).max().unwrap_or(0)
    }

    /// `Some(w)` when every term has weight `w`; `None` for zero or mixed vectors.
    pub fn homogeneous_weight(&self) -> Option<u32> {
        let mut ws = self.terms.keys().map(FockMonomial::weight);
        let w = ws.next()?;
        ws.all(|x| x == w).then_some(w)
    }

    pub fn weight_component(&self, w: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weight() == w)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Coordinates in the monomial basis `basis`; `None` if a term falls outside it.
    pub fn coordinates(&self, basis: &[FockMonomial]) -> Option<Vector<F>> {
        let index: BTreeMap<&FockMonomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut v = Vector::zeros(basis.len());
        for (m, c) in &self.terms {
            v[*index.get(m)?] = c.clone();
        }
        Some(v)
    }
}

impl<F: Field> fmt::Display for FockVector<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}) {m}")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Heisenberg modes

/// `h_i(n)` on a single monomial, accumulated into `out` with weight `coef`.
fn mode_on_monomial<F: Field>(dir: usize, n: i64, mono: &FockMonomial, coef: &F, out: &mut FockVector<F>) {
    match n {
        0 => {}
        n if n < 0 => out.add_term(mono.with_factor(dir, (-n) as u32), coef.clone()),
        n => {
            let n32 = n as u32;
            let mult = mono.multiplicity(dir, n32);
            if mult > 0 {
                let rest = mono.without_factor(dir, n32).expect("factor present");
                out.add_term(rest, coef.clone() * &F::from_i64(n * mult as i64));
            }
        }
    }
}

/// `h_i(n) v` for a 0-based direction `dir`.
pub fn mode_apply<F: Field>(dir: usize, n: i64, v: &FockVector<F>) -> FockVector<F> {
    let mut out = FockVector::zero();
    for (m, c) in v.terms() {
        mode_on_monomial(dir, n, m, c, &mut out);
    }
    out
}

// ---------------------------------------------------------------------------
// Weight-two vectors and their modes

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuadLinError {
    #[error("quadratic part is not symmetric")]
    NotSymmetric,
    #[error("matrix and vector dimensions differ")]
    DimensionMismatch,
    #[error("vector is not homogeneous of weight two")]
    NotWeightTwo,
}

/// The weight-two vector `½ Σ S_ij h_i(−1)h_j(−1)·1 + Σ b_i h_i(−2)·1`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadLin<F> {
    s: Matrix<F>,
    b: Vector<F>,
}

impl<F: Field> QuadLin<F> {
    pub fn new(s: Matrix<F>, b: Vector<F>, tol: Tolerance) -> Result<Self, QuadLinError> {
        if !s.is_square() || s.rows() != b.dim() {
            return Err(QuadLinError::DimensionMismatch);
        }
        if !s.is_symmetric(tol) {
            return Err(QuadLinError::NotSymmetric);
        }
        Ok(Self { s, b })
    }

    /// `ω_h = ½ Σ h_i(−1)²·1 + h(−2)·1`.
    pub fn omega(h: &Vector<F>) -> Self {
        Self {
            s: Matrix::identity(h.dim()),
            b: h.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.b.dim()
    }

    pub fn quadratic(&self) -> &Matrix<F> {
        &self.s
    }

    pub fn linear(&self) -> &Vector<F> {
        &self.b
    }

    /// `trace(S) − 12·bᵀb`, the central charge whenever the modes are Virasoro.
    pub fn formal_charge(&self) -> F {
        self.s.trace() - F::from_i64(12) * self.b.dot(&self.b)
    }

    pub fn to_fock(&self) -> FockVector<F> {
        quadlin_to_fock(self)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            s: self.s.sub(&other.s),
            b: self.b.sub(&other.b),
        }
    }
}

/// Expands a [`QuadLin`] into the monomial basis.
pub fn quadlin_to_fock<F: Field>(w: &QuadLin<F>) -> FockVector<F> {
    let d = w.dim();
    let half = F::from_ratio(1, 2);
    let mut out = FockVector::zero();
    for i in 0..d {
        out.add_term(FockMonomial::new(vec![(i, 1), (i, 1)]), w.s[(i, i)].clone() * &half);
        for j in i + 1..d {
            out.add_term(FockMonomial::new(vec![(i, 1), (j, 1)]), w.s[(i, j)].clone());
        }
        out.add_term(FockMonomial::new(vec![(i, 2)]), w.b[i].clone());
    }
    out
}

/// Inverse of [`quadlin_to_fock`] on weight-two vectors.
pub fn fock_to_quadlin<F: Field>(d: usize, v: &FockVector<F>) -> Result<QuadLin<F>, QuadLinError> {
    let mut s = Matrix::zeros(d, d);
    let mut b = Vector::zeros(d);
    for (m, c) in v.terms() {
        match m.factors() {
            [(i, 1), (j, 1)] if *i < d && *j < d => {
                if i == j {
                    s[(*i, *i)] = c.clone() * &F::from_i64(2);
                } else {
                    s[(*i, *j)] = c.clone();
                    s[(*j, *i)] = c.clone();
                }
            }
            [(i, 2)] if *i < d => b[*i] = c.clone(),
            _ => return Err(QuadLinError::NotWeightTwo),
        }
    }
    Ok(QuadLin { s, b })
}

/// Sign of the linear term in the mode expansion of a weight-two vector.
///
/// `Translation` is `−(m+1)·b·h(m)`, the expansion forced by
/// `Y(L(−1)u, z) = d/dz Y(u, z)`. `Flipped` exists only to check that the
/// verification oracles notice a wrong sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LinearSign {
    #[default]
    Translation,
    Flipped,
}

/// `L′(m) v` for the weight-two vector `w`.
pub fn virasoro_mode<F: Field>(w: &QuadLin<F>, m: i64, v: &FockVector<F>) -> FockVector<F> {
    virasoro_mode_with(w, m, v, LinearSign::Translation)
}

/// Normal-ordered expansion
/// `L′(m) = ½ Σ S_ij Σ_k :h_i(k) h_j(m−k): − (m+1) Σ b_i h_i(m)`,
/// evaluated factor by factor instead of over a truncated `k` range.
pub fn virasoro_mode_with<F: Field>(
    w: &QuadLin<F>,
    m: i64,
    v: &FockVector<F>,
    sign: LinearSign,
) -> FockVector<F> {
    let d = w.dim();
    let half = F::from_ratio(1, 2);
    // nonzero S entries by column
    let s_cols: Vec<Vec<(usize, F)>> = (0..d)
        .map(|j| {
            (0..d)
                .filter(|&i| !w.s[(i, j)].is_exact_zero())
                .map(|i| (i, w.s[(i, j)].clone()))
                .collect()
        })
        .collect();
    let lin_coef = {
        let c = F::from_i64(-(m + 1));
        match sign {
            LinearSign::Translation => c,
            LinearSign::Flipped => -c,
        }
    };

    let mut out = FockVector::zero();
    for (mono, coef) in v.terms() {
        // creation-creation: k, m−k both ≤ −1
        if m <= -2 {
            for k in (m + 1)..=-1 {
                let l = m - k;
                for (j, col) in s_cols.iter().enumerate() {
                    for (i, sij) in col {
                        let c = coef.clone() * sij * &half;
                        let next = mono.with_factor(j, (-l) as u32).with_factor(*i, (-k) as u32);
                        out.add_term(next, c);
                    }
                }
            }
        }
        // mixed: Σ_ij S_ij Σ_{p > max(0,m)} h_i(m−p) h_j(p)
        for ((j, p), mult) in mono.distinct_factors() {
            if i64::from(p) <= m {
                continue;
            }
            let rest = mono.without_factor(j, p).expect("factor present");
            let base = coef.clone() * &F::from_i64(i64::from(p) * mult as i64);
            let create = (i64::from(p) - m) as u32;
            for (i, sij) in &s_cols[j] {
                out.add_term(rest.with_factor(*i, create), base.clone() * sij);
            }
        }
        // annihilation-annihilation: k, m−k both ≥ 1
        if m >= 2 {
            for k in 1..m {
                let l = m - k;
                for (j, col) in s_cols.iter().enumerate() {
                    let mut inner = FockVector::zero();
                    mode_on_monomial(j, l, mono, coef, &mut inner);
                    if inner.is_empty() {
                        continue;
                    }
                    for (i, sij) in col {
                        let c = sij.clone() * &half;
                        for (m2, c2) in inner.terms() {
                            mode_on_monomial(*i, k, m2, &(c2.clone() * &c), &mut out);
                        }
                    }
                }
            }
        }
        // linear term
        if !lin_coef.is_exact_zero() {
            for (i, bi) in w.b.iter().enumerate() {
                if bi.is_exact_zero() {
                    continue;
                }
                mode_on_monomial(i, m, mono, &(coef.clone() * bi * &lin_coef), &mut out);
            }
        }
    }
    out
}

/// Reference evaluation of `L′(m) v` by summing `:h_i(k) h_j(m−k):` over
/// `k ∈ [−w−|m|−margin, w+|m|+margin]` (`w` the top weight of `v`).
pub fn virasoro_mode_reference<F: Field>(w: &QuadLin<F>, m: i64, v: &FockVector<F>, margin: i64) -> FockVector<F> {
    let d = w.dim();
    let top = i64::from(v.max_weight());
    let bound = top + m.abs() + margin;
    let half = F::from_ratio(1, 2);
    let mut out = FockVector::zero();
    for k in -bound..=bound {
        let l = m - k;
        if k == 0 || l == 0 {
            continue;
        }
        // normal order: the annihilation (positive) mode acts first
        let (first, second) = if k > 0 && l < 0 { ((k, true), (l, false)) } else { ((l, false), (k, true)) };
        for i in 0..d {
            for j in 0..d {
                let sij = &w.s[(i, j)];
                if sij.is_exact_zero() {
                    continue;
                }
                let dir = |is_i: bool| if is_i { i } else { j };
                let t = mode_apply(dir(first.1), first.0, v);
                let t = mode_apply(dir(second.1), second.0, &t);
                out = out.add(&t.scale(&(sij.clone() * &half)));
            }
        }
    }
    for (i, bi) in w.b.iter().enumerate() {
        let t = mode_apply(i, m, v);
        out = out.add(&t.scale(&(bi.clone() * &F::from_i64(-(m + 1)))));
    }
    out
}

// ---------------------------------------------------------------------------
// Graded structure

/// Number of `d`-colored partitions of `n`, the dimension of the weight-`n` space.
pub fn graded_dim(d: usize, n: usize) -> u64 {
    let mut dp = vec![0u64; n + 1];
    dp[0] = 1;
    for part in 1..=n {
        for _ in 0..d {
            for j in part..=n {
                dp[j] += dp[j - part];
            }
        }
    }
    dp[n]
}

/// The monomial basis of the weight-`n` subspace, in canonical order.
pub fn weight_basis(d: usize, n: u32) -> Vec<FockMonomial> {
    // factors ordered by (direction, mode) and chosen non-decreasingly
    let letters: Vec<(usize, u32)> = (0..d).flat_map(|i| (1..=n).map(move |k| (i, k))).collect();
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fn rec(
        letters: &[(usize, u32)],
        start: usize,
        remaining: u32,
        stack: &mut Vec<(usize, u32)>,
        out: &mut Vec<FockMonomial>,
    ) {
        if remaining == 0 {
            out.push(FockMonomial(stack.clone()));
            return;
        }
        for idx in start..letters.len() {
            let (i, k) = letters[idx];
            if k > remaining {
                continue;
            }
            stack.push((i, k));
            rec(letters, idx, remaining - k, stack, out);
            stack.pop();
        }
    }
    rec(&letters, 0, n, &mut stack, &mut out);
    out.sort();
    out
}

/// Matrix of a linear operator from weight `from` to weight `to` in the
/// monomial bases.
pub fn operator_matrix<F: Field>(
    d: usize,
    from: u32,
    to: u32,
    op: impl Fn(&FockVector<F>) -> FockVector<F>,
) -> Matrix<F> {
    let src = weight_basis(d, from);
    let dst = weight_basis(d, to);
    let cols: Vec<Vector<F>> = src
        .iter()
        .map(|m| {
            op(&FockVector::monomial(m.clone(), F::one()))
                .coordinates(&dst)
                .expect("operator output has the target weight")
        })
        .collect();
    Matrix::from_columns(dst.len(), &cols)
}

/// `max_v ‖([L(m),L(n)] − (m−n)L(m+n) − δ_{m+n,0}(m³−m)/12·c) v‖` over basis
/// monomials of weight at most `max_weight`, with `c = trace(S) − 12 bᵀb`.
pub fn virasoro_bracket_defect<F: Field>(w: &QuadLin<F>, m: i64, n: i64, max_weight: u32) -> f64 {
    let c = w.formal_charge();
    let central = if m + n == 0 {
        c * &F::from_ratio(m * m * m - m, 12)
    } else {
        F::zero()
    };
    let mut worst = 0.0f64;
    for weight in 0..=max_weight {
        for mono in weight_basis(w.dim(), weight) {
            let v = FockVector::monomial(mono, F::one());
            let lmn = virasoro_mode(w, m, &virasoro_mode(w, n, &v));
            let lnm = virasoro_mode(w, n, &virasoro_mode(w, m, &v));
            let rhs = virasoro_mode(w, m + n, &v).scale(&F::from_i64(m - n)).add(&v.scale(&central));
            worst = worst.max(lmn.sub(&lnm).sub(&rhs).max_abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Gaussian;

    type G = Gaussian;
    type FV = FockVector<G>;

    fn mono(f: &[(usize, u32)]) -> FockMonomial {
        FockMonomial::new(f.to_vec())
    }

    fn g(s: &str) -> G {
        s.parse().unwrap()
    }

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn mode_examples() {
        let v = FV::monomial(mono(&[(0, 1)]), G::one());
        assert_eq!(mode_apply(0, 1, &v), FV::vacuum());
        assert!(mode_apply(0, 0, &v).is_empty());
        let v = FV::monomial(mono(&[(0, 2), (0, 1)]), G::one());
        assert_eq!(mode_apply(0, 2, &v), FV::monomial(mono(&[(0, 1)]), G::from_i64(2)));
        // repeated factors contribute their multiplicity
        let v = FV::monomial(mono(&[(1, 1), (1, 1)]), G::one());
        assert_eq!(mode_apply(1, 1, &v), FV::monomial(mono(&[(1, 1)]), G::from_i64(2)));
    }

    #[test]
    fn virasoro_examples() {
        let w0 = QuadLin::<G>::omega(&Vector::zeros(2));
        let v = FV::monomial(mono(&[(0, 1)]), G::one());
        assert_eq!(virasoro_mode(&w0, 0, &v), v);
        let wh = QuadLin::<G>::omega(&Vector::from_i64(&[3, -1]));
        for m in 0..4 {
            assert!(virasoro_mode(&wh, m, &FV::vacuum()).is_empty());
        }
        // d = 1: L(2) ω_h = ((1 − 12c²)/2)·1
        for c in [g("0"), g("1"), g("2/3"), g("i")] {
            let w = QuadLin::omega(&Vector::new(vec![c.clone()]));
            let out = virasoro_mode(&w, 2, &w.to_fock());
            let expect = (G::one() - G::from_i64(12) * &c.square()) * &g("1/2");
            assert_eq!(out, FV::monomial(FockMonomial::vacuum(), expect.clone()));
            // a = −2c in L(2)ω′ = (1−3a²)/2
            let a = G::from_i64(-2) * &c;
            assert_eq!(expect, (G::one() - G::from_i64(3) * &a.square()) * &g("1/2"));
        }
    }

    #[test]
    fn quadlin_expansion() {
        let w = QuadLin::<G>::omega(&Vector::zeros(1));
        assert_eq!(w.to_fock(), FV::monomial(mono(&[(0, 1), (0, 1)]), g("1/2")));

        let w = QuadLin::omega(&Vector::from_i64(&[1, 0]));
        let mut expect = FV::zero();
        expect.add_term(mono(&[(0, 1), (0, 1)]), g("1/2"));
        expect.add_term(mono(&[(1, 1), (1, 1)]), g("1/2"));
        expect.add_term(mono(&[(0, 2)]), g("1"));
        assert_eq!(w.to_fock(), expect);

        let s = Matrix::from_i64_rows(&[&[1, 1], &[1, 1]]).scale(&g("1/2"));
        let b = Vector::new(vec![g("1/2"), g("1/2")]);
        let w = QuadLin::new(s, b, tol()).unwrap();
        let mut expect = FV::zero();
        expect.add_term(mono(&[(0, 1), (0, 1)]), g("1/4"));
        expect.add_term(mono(&[(1, 1), (1, 1)]), g("1/4"));
        expect.add_term(mono(&[(0, 1), (1, 1)]), g("1/2"));
        expect.add_term(mono(&[(0, 2)]), g("1/2"));
        expect.add_term(mono(&[(1, 2)]), g("1/2"));
        assert_eq!(w.to_fock(), expect);
        assert_eq!(fock_to_quadlin(2, &expect).unwrap(), w);
        assert_eq!(fock_to_quadlin(2, &FV::vacuum()), Err(QuadLinError::NotWeightTwo));
    }

    #[test]
    fn quadlin_rejects_asymmetric() {
        let s = Matrix::<G>::from_i64_rows(&[&[1, 2], &[0, 1]]);
        assert_eq!(QuadLin::new(s, Vector::zeros(2), tol()), Err(QuadLinError::NotSymmetric));
    }

    #[test]
    fn graded_dim_examples() {
        assert_eq!(graded_dim(1, 4), 5);
        assert_eq!(graded_dim(2, 2), 5);
        for d in 1..5 {
            assert_eq!(graded_dim(d, 0), 1);
        }
    }

    #[test]
    fn weight_basis_counts_match_generating_function() {
        for d in 1..=3 {
            for n in 0..=6 {
                let basis = weight_basis(d, n);
                assert_eq!(basis.len() as u64, graded_dim(d, n as usize), "d={d} n={n}");
                assert!(basis.iter().all(|m| m.weight() == n));
            }
        }
    }

    #[test]
    fn bracket_examples() {
        let w0 = QuadLin::<G>::omega(&Vector::zeros(1));
        assert_eq!(virasoro_bracket_defect(&w0, 1, -1, 3), 0.0);
        let wh = QuadLin::<G>::omega(&Vector::from_i64(&[1, 0]));
        assert_eq!(wh.formal_charge(), G::from_i64(-10));
        assert_eq!(virasoro_bracket_defect(&wh, 2, -2, 4), 0.0);
        let bad = QuadLin::new(Matrix::diag(&[G::from_i64(2), G::one()]), Vector::zeros(2), tol()).unwrap();
        assert_eq!(virasoro_bracket_defect(&bad, 1, 1, 3), 0.0);
        assert!(virasoro_bracket_defect(&bad, 2, 0, 3) > 0.0);
    }

    #[test]
    fn reference_expansion_agrees_and_margin_is_sufficient() {
        let s = Matrix::from_rows(vec![
            vec![g("1/2"), g("1/3"), g("0")],
            vec![g("1/3"), g("2"), g("i")],
            vec![g("0"), g("i"), g("-1")],
        ]);
        let w = QuadLin::new(s, Vector::new(vec![g("1"), g("-2/3"), g("1+i")]), tol()).unwrap();
        for weight in 0..=3 {
            for mono in weight_basis(3, weight) {
                let v = FV::monomial(mono, G::one());
                for m in -3..=3 {
                    let fast = virasoro_mode(&w, m, &v);
                    assert_eq!(fast, virasoro_mode_reference(&w, m, &v, 2));
                    assert_eq!(fast, virasoro_mode_reference(&w, m, &v, 8));
                }
            }
        }
    }

    #[test]
    fn flipped_sign_agrees_on_l0() {
        let w = QuadLin::<G>::omega(&Vector::from_i64(&[2, -1]));
        for weight in 0..=3 {
            for mono in weight_basis(2, weight) {
                let v = FV::monomial(mono, G::one());
                assert_eq!(
                    virasoro_mode_with(&w, 0, &v, LinearSign::Translation),
                    virasoro_mode_with(&w, 0, &v, LinearSign::Flipped)
                );
            }
        }
        let v = w.to_fock();
        assert_ne!(
            virasoro_mode_with(&w, 1, &v, LinearSign::Translation),
            virasoro_mode_with(&w, 1, &v, LinearSign::Flipped)
        );
    }

    #[test]
    fn translation_at_weight_one() {
        let w0 = QuadLin::<G>::omega(&Vector::zeros(3));
        for i in 0..3 {
            let v = FV::monomial(mono(&[(i, 1)]), G::one());
            assert_eq!(virasoro_mode(&w0, -1, &v), FV::monomial(mono(&[(i, 2)]), G::one()));
        }
    }

    #[test]
    fn modes_shift_weight() {
        let w = QuadLin::<G>::omega(&Vector::from_i64(&[1, 2]));
        for mono in weight_basis(2, 4) {
            let v = FV::monomial(mono, G::one());
            for m in -3..=3 {
                let out = virasoro_mode(&w, m, &v);
                if let Some(wt) = out.homogeneous_weight() {
                    assert_eq!(i64::from(wt), 4 - m);
                } else {
                    assert!(out.is_empty());
                }
            }
        }
    }
}
