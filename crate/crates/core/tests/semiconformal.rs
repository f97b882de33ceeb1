use hvoa::linalg::Vector;
use hvoa::sample::Sampler;
use hvoa::scalars::{Gaussian, Tolerance};
use hvoa::semiconformal::{
    commutant_weight1, complement, fock_commutant_weight1, fock_semiconformal_check, from_subspace, is_semiconformal,
    leq, leq_fock_check, leq_geometric, to_subspace, ScPair, DEFAULT_WEIGHT_BOUND,
};
use proptest::prelude::*;

type G = Gaussian;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn le(p: &ScPair<G>, q: &ScPair<G>) -> bool {
    leq(p, q, tol()).unwrap()
}

/// Three pairs over one shift: a nested chain of subspaces, shuffled, with one
/// link replaced by an unrelated pair half of the time.
fn triple(s: &mut Sampler, d: usize) -> [ScPair<G>; 3] {
    let h = s.any_shift(d);
    let k3 = s.range(0, d);
    let outer = s.regular_subspace(d, k3);
    let k2 = s.range(0, k3);
    let mid = s.regular_subspace_of(&outer, k2);
    let k1 = s.range(0, k2);
    let inner = s.regular_subspace_of(&mid, k1);
    let mut ps = [&inner, &mid, &outer].map(|sub| from_subspace(sub, &h, tol()).unwrap());
    if s.coin() {
        let i = s.range(0, 2);
        ps[i] = s.pair(&h);
    }
    let j = s.range(0, 2);
    ps.swap(0, j);
    ps
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn subspace_round_trip(seed in any::<u64>(), d in 1usize..=5) {
        let mut s = Sampler::new(seed);
        let h = s.any_shift(d);
        let k = s.range(0, d);
        let sub = s.regular_subspace(d, k);
        let p = from_subspace(&sub, &h, tol()).unwrap();
        let r = to_subspace(&p, tol());
        prop_assert!(r.subspace().same_as(&sub, tol()));
        prop_assert_eq!(r.hprime(), &sub.projection_matrix(tol()).unwrap().mul_vec(&h));
        prop_assert_eq!(from_subspace(r.subspace(), &h, tol()).unwrap(), p);
    }

    #[test]
    fn order_is_geometric(seed in any::<u64>(), d in 1usize..=4) {
        let mut s = Sampler::new(seed);
        let h = s.any_shift(d);
        let (p1, p2) = if s.coin() { s.mixed_pairs(&h) } else { let p = s.pair(&h); (complement(&p), p) };
        let geometric = leq_geometric(&to_subspace(&p1, tol()), &to_subspace(&p2, tol()), tol()).unwrap();
        prop_assert_eq!(le(&p1, &p2), geometric);
    }

    #[test]
    fn order_reverses_under_complement(seed in any::<u64>(), d in 1usize..=5) {
        let mut s = Sampler::new(seed);
        let h = s.any_shift(d);
        let (p1, p2) = s.comparable_pairs(&h);
        prop_assert!(le(&p1, &p2));
        prop_assert!(le(&complement(&p2), &complement(&p1)));
        prop_assert_eq!(complement(&complement(&p1)), p1);
    }

    #[test]
    fn partial_order_axioms(seed in any::<u64>(), d in 1usize..=4) {
        let mut s = Sampler::new(seed);
        let ps = triple(&mut s, d);
        for a in &ps {
            prop_assert!(le(a, a));
            for b in &ps {
                if le(a, b) && le(b, a) {
                    prop_assert_eq!(a, b);
                }
                if le(a, b) {
                    prop_assert_eq!(b.b().dot(a.b()), a.b().dot(a.b()));
                    if a != b {
                        prop_assert!(a.rank(tol()).unwrap() < b.rank(tol()).unwrap());
                    }
                }
                for c in &ps {
                    if le(a, b) && le(b, c) {
                        prop_assert!(le(a, c));
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn semiconformal_matches_fock(seed in any::<u64>(), d in 1usize..=3, valid in any::<bool>()) {
        let mut s = Sampler::new(seed);
        let h = s.any_shift(d);
        let (a, b) = s.candidate(&h, valid);
        let matrix = is_semiconformal(&a, &b, &h, tol()).unwrap();
        prop_assert_eq!(matrix, valid);
        prop_assert_eq!(fock_semiconformal_check(&a, &b, &h, DEFAULT_WEIGHT_BOUND, tol()).unwrap(), matrix);
    }

    #[test]
    fn order_matches_fock(seed in any::<u64>(), d in 1usize..=3) {
        let mut s = Sampler::new(seed);
        let h = s.any_shift(d);
        let (p1, p2) = s.mixed_pairs(&h);
        prop_assert_eq!(leq_fock_check(&p1, &p2, DEFAULT_WEIGHT_BOUND, tol()).unwrap(), le(&p1, &p2));
    }

    #[test]
    fn commutant_matches_fock(seed in any::<u64>(), d in 1usize..=4) {
        let mut s = Sampler::new(seed);
        let h = s.any_shift(d);
        let p = s.pair(&h);
        let ker = commutant_weight1(&p, tol());
        prop_assert!(ker.same_as(&fock_commutant_weight1(&p, tol()), tol()));
        for v in ker.basis_vectors() {
            prop_assert_eq!(p.a().mul_vec(&v), Vector::zeros(d));
        }
    }
}
