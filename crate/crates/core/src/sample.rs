//! Seeded random generation of shifts, subspaces, pairs and orthogonal maps.
//!
//! Everything is exact over `ℚ(i)`; orthogonal maps come from Cayley transforms
//! so no square roots are needed.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bispace::{cayley_orthogonal, OrthogonalMap, Subspace};
use crate::fock::QuadLin;
use crate::linalg::{Matrix, Vector};
use crate::orbits::Family;
use crate::scalars::{Field, Gaussian, Tolerance};
use crate::semiconformal::{complement, from_subspace, ScPair};

type G = Gaussian;

/// Moduli class of a shift vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftClass {
    Zero,
    Isotropic,
    Anisotropic,
}

impl ShiftClass {
    pub const ALL: [ShiftClass; 3] = [ShiftClass::Zero, ShiftClass::Isotropic, ShiftClass::Anisotropic];
}

pub struct Sampler {
    rng: ChaCha8Rng,
    tol: Tolerance,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            tol: Tolerance::default(),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }

    /// `p/q` with `|p| ≤ 6`, `1 ≤ q ≤ 4`.
    pub fn rational(&mut self) -> G {
        G::from_ratio(self.rng.gen_range(-6..=6), self.rng.gen_range(1..=4))
    }

    pub fn nonzero_rational(&mut self) -> G {
        loop {
            let r = self.rational();
            if !r.is_exact_zero() {
                return r;
            }
        }
    }

    /// Small Gaussian integer, real with probability ½.
    pub fn small_gaussian(&mut self) -> G {
        let re = self.rng.gen_range(-2..=2);
        let im = if self.coin() { 0 } else { self.rng.gen_range(-1..=1) };
        G::from_complex_ratio((re, 1), (im, 1))
    }

    pub fn rational_vector(&mut self, d: usize) -> Vector<G> {
        Vector::new((0..d).map(|_| self.rational()).collect())
    }

    pub fn shift(&mut self, d: usize, class: ShiftClass) -> Vector<G> {
        match class {
            ShiftClass::Zero => Vector::zeros(d),
            ShiftClass::Isotropic => {
                assert!(d >= 2, "no isotropic vectors in dimension 1");
                let c = self.nonzero_rational();
                let mut h = Vector::zeros(d);
                h[0] = c.clone();
                h[1] = c * &G::imag_unit();
                self.orthogonal(d).apply(&h)
            }
            ShiftClass::Anisotropic => loop {
                let h = self.rational_vector(d);
                if !h.dot(&h).is_exact_zero() {
                    return h;
                }
            },
        }
    }

    /// A shift of a random class admissible in dimension `d`.
    pub fn any_shift(&mut self, d: usize) -> Vector<G> {
        let classes: &[ShiftClass] = if d >= 2 { &ShiftClass::ALL } else { &[ShiftClass::Zero, ShiftClass::Anisotropic] };
        let class = *classes.choose(&mut self.rng).expect("nonempty");
        self.shift(d, class)
    }

    fn antisymmetric(&mut self, d: usize) -> Matrix<G> {
        let mut m = Matrix::zeros(d, d);
        for i in 0..d {
            for j in i + 1..d {
                let x = self.small_gaussian();
                m[(j, i)] = -x.clone();
                m[(i, j)] = x;
            }
        }
        m
    }

    /// Random element of `O_d(ℚ(i))`.
    pub fn orthogonal(&mut self, d: usize) -> OrthogonalMap<G> {
        loop {
            let m = self.antisymmetric(d);
            if let Ok(q) = cayley_orthogonal(&m, self.tol) {
                return q;
            }
        }
    }

    /// Random element of the stabilizer of `h`, from `M = Σ (u vᵀ − v uᵀ)` with `u, v ⟂ h`.
    pub fn stabilizer(&mut self, h: &Vector<G>) -> OrthogonalMap<G> {
        let d = h.dim();
        let perp = Subspace::from_vectors(d, std::slice::from_ref(h), self.tol)
            .map(|s| s.annihilator(self.tol).basis_vectors())
            .unwrap_or_else(|_| (0..d).map(|i| Vector::unit(d, i)).collect());
        if perp.len() < 2 {
            return OrthogonalMap::identity(d);
        }
        loop {
            let mut m = Matrix::zeros(d, d);
            for _ in 0..2 {
                let u = self.combination(&perp);
                let v = self.combination(&perp);
                m = m.add(&Matrix::outer(&u, &v).sub(&Matrix::outer(&v, &u)));
            }
            if let Ok(q) = cayley_orthogonal(&m, self.tol) {
                return q;
            }
        }
    }

    fn combination(&mut self, basis: &[Vector<G>]) -> Vector<G> {
        let d = basis[0].dim();
        basis
            .iter()
            .fold(Vector::zeros(d), |acc, b| acc.add(&b.scale(&self.small_gaussian())))
    }

    /// Random regular subspace of dimension `k`.
    pub fn regular_subspace(&mut self, d: usize, k: usize) -> Subspace<G> {
        loop {
            let vs: Vec<Vector<G>> = (0..k)
                .map(|_| Vector::new((0..d).map(|_| self.small_gaussian()).collect()))
                .collect();
            if let Ok(s) = Subspace::from_vectors(d, &vs, self.tol) {
                if s.is_regular(self.tol) {
                    return s;
                }
            }
        }
    }

    /// Regular subspace of `outer` of dimension `k`.
    pub fn regular_subspace_of(&mut self, outer: &Subspace<G>, k: usize) -> Subspace<G> {
        let basis = outer.basis_vectors();
        let d = outer.ambient_dim();
        loop {
            let vs: Vec<Vector<G>> = (0..k).map(|_| self.combination(&basis)).collect();
            if let Ok(s) = Subspace::from_vectors(d, &vs, self.tol) {
                if s.is_regular(self.tol) {
                    return s;
                }
            }
        }
    }

    pub fn pair(&mut self, h: &Vector<G>) -> ScPair<G> {
        let d = h.dim();
        let k = self.range(0, d);
        let s = self.regular_subspace(d, k);
        from_subspace(&s, h, self.tol).expect("subspace is regular")
    }

    /// `p₁ ≤ p₂` built from nested regular subspaces.
    pub fn comparable_pairs(&mut self, h: &Vector<G>) -> (ScPair<G>, ScPair<G>) {
        let d = h.dim();
        let k2 = self.range(0, d);
        let k1 = self.range(0, k2);
        let s2 = self.regular_subspace(d, k2);
        let s1 = self.regular_subspace_of(&s2, k1);
        (
            from_subspace(&s1, h, self.tol).expect("regular"),
            from_subspace(&s2, h, self.tol).expect("regular"),
        )
    }

    /// Two pairs that are comparable, reversed, complementary or unrelated.
    pub fn mixed_pairs(&mut self, h: &Vector<G>) -> (ScPair<G>, ScPair<G>) {
        match self.range(0, 3) {
            0 => self.comparable_pairs(h),
            1 => {
                let (a, b) = self.comparable_pairs(h);
                (b, a)
            }
            2 => {
                let p = self.pair(h);
                let c = complement(&p);
                (p, c)
            }
            _ => (self.pair(h), self.pair(h)),
        }
    }

    /// Random symmetric candidate `(A, B)`: a valid pair, or a valid pair with one
    /// entry of `A` (kept symmetric) or of `B` perturbed until `A² = A`, `Ah = B`
    /// no longer both hold.
    pub fn candidate(&mut self, h: &Vector<G>, valid: bool) -> (Matrix<G>, Vector<G>) {
        let p = self.pair(h);
        if valid {
            return (p.a().clone(), p.b().clone());
        }
        let d = h.dim();
        loop {
            let (mut a, mut b) = (p.a().clone(), p.b().clone());
            let delta = self.nonzero_rational();
            if self.coin() {
                let (i, j) = (self.range(0, d - 1), self.range(0, d - 1));
                a[(i, j)] += &delta;
                if i != j {
                    a[(j, i)] += &delta;
                }
            } else {
                let i = self.range(0, d - 1);
                b[i] += &delta;
            }
            if a.matmul(&a) != a || a.mul_vec(h) != b {
                return (a, b);
            }
        }
    }

    /// Random weight-two vector; the quadratic part is the identity when `grading` holds.
    pub fn quadlin(&mut self, d: usize, grading: bool) -> QuadLin<G> {
        let s = if grading {
            Matrix::identity(d)
        } else {
            loop {
                let mut s = Matrix::zeros(d, d);
                for i in 0..d {
                    for j in i..d {
                        let x = self.rational();
                        s[(i, j)] = x.clone();
                        s[(j, i)] = x;
                    }
                }
                if s != Matrix::identity(d) {
                    break s;
                }
            }
        };
        QuadLin::new(s, self.rational_vector(d), self.tol).expect("symmetric")
    }

    /// A representative of the given family and `k`, moved by a random orthogonal
    /// map. Returns `None` if the family is empty at `(d, k)`.
    pub fn family_instance(&mut self, d: usize, family: Family, k: usize) -> Option<ScPair<G>> {
        if !family.k_range(d).contains(&k) {
            return None;
        }
        let c = self.nonzero_rational();
        let i = G::imag_unit();
        let e = |j: usize| Vector::<G>::unit(d, j);
        let units = |r: std::ops::Range<usize>| r.map(e).collect::<Vec<_>>();
        let iso = || e(0).add(&e(1).scale(&i)).scale(&c);
        let (h, span): (Vector<G>, Vec<Vector<G>>) = match family {
            Family::ZeroShift => (Vector::zeros(d), units(0..k)),
            Family::I1 => (e(0).scale(&c), units(0..k)),
            Family::I2 => (e(0).scale(&c), units(1..k + 1)),
            Family::I3 => {
                let t = self.nonzero_rational();
                let mut span = vec![e(0).add(&e(1).scale(&t))];
                span.extend(units(2..k + 1));
                (e(0).scale(&c), span)
            }
            Family::I4 | Family::I5 => {
                let kernel_dim = if family == Family::I4 { d - k } else { k };
                let gamma = e(1).add(&e(2).scale(&i));
                let delta = e(0).scale(&(G::from_i64(2).try_div(&c, self.tol).ok()?)).add(&e(1)).sub(&e(2).scale(&i));
                let mut ker = vec![gamma, delta];
                ker.extend(units(3..kernel_dim + 1));
                let h = e(0).scale(&c);
                let s = Subspace::from_vectors(d, &ker, self.tol).ok()?;
                let p = from_subspace(&s, &h, self.tol).ok()?;
                let p = if family == Family::I4 { complement(&p) } else { p };
                return Some(p.transform(&self.orthogonal(d)));
            }
            Family::J1 => (iso(), units(0..k)),
            Family::J2 => (iso(), units(2..k + 2)),
            Family::J3 => {
                let t = self.nonzero_rational();
                let mut span = vec![e(0).add(&e(1).scale(&t))];
                span.extend(units(2..k + 1));
                (iso(), span)
            }
            Family::J4 => {
                let h = iso().add(&e(2).add(&e(3).scale(&i)).scale(&c));
                let mut span = units(0..2);
                span.extend(units(4..k + 2));
                (h, span)
            }
        };
        let s = Subspace::from_vectors(d, &span, self.tol).ok()?;
        let p = from_subspace(&s, &h, self.tol).ok()?;
        Some(p.transform(&self.orthogonal(d)))
    }

    /// A random instance of a random nonempty family in dimension `d` for the class.
    pub fn labelled_instance(&mut self, d: usize, class: ShiftClass) -> Option<(Family, usize, ScPair<G>)> {
        let families: &[Family] = match class {
            ShiftClass::Zero => &[Family::ZeroShift],
            ShiftClass::Isotropic => &Family::ISOTROPIC,
            ShiftClass::Anisotropic => &Family::ANISOTROPIC,
        };
        let options: Vec<(Family, usize)> = families
            .iter()
            .flat_map(|&f| f.k_range(d).map(move |k| (f, k)))
            .collect();
        let &(f, k) = options.choose(&mut self.rng)?;
        self.family_instance(d, f, k).map(|p| (f, k, p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbits::classify;
    use crate::semiconformal::{is_semiconformal, leq};

    #[test]
    fn seeded_runs_repeat() {
        let mut a = Sampler::new(7);
        let mut b = Sampler::new(7);
        for _ in 0..5 {
            let h = a.any_shift(3);
            assert_eq!(h, b.any_shift(3));
            assert_eq!(a.pair(&h), b.pair(&h));
        }
    }

    #[test]
    fn generated_objects_have_their_properties() {
        let tol = Tolerance::default();
        let mut s = Sampler::new(1);
        for d in 2..=4 {
            let h = s.shift(d, ShiftClass::Isotropic);
            assert!(!h.is_zero(tol));
            assert!(h.dot(&h).is_exact_zero());
            let q = s.stabilizer(&h);
            assert_eq!(q.apply(&h), h);
            let p = s.pair(&h);
            assert!(is_semiconformal(p.a(), p.b(), &h, tol).unwrap());
            let (p1, p2) = s.comparable_pairs(&h);
            assert!(leq(&p1, &p2, tol).unwrap());
            let (a, b) = s.candidate(&h, false);
            assert!(!is_semiconformal(&a, &b, &h, tol).unwrap());
        }
    }

    #[test]
    fn family_instances_get_their_label() {
        let tol = Tolerance::default();
        let mut s = Sampler::new(3);
        for d in 1..=5 {
            for f in Family::ANISOTROPIC.into_iter().chain(Family::ISOTROPIC).chain([Family::ZeroShift]) {
                for k in f.k_range(d) {
                    let p = s.family_instance(d, f, k).unwrap();
                    let l = classify(&p, tol).unwrap();
                    assert_eq!((l.family(), l.k()), (f, k), "d = {d}");
                }
            }
        }
    }
}
