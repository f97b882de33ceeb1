use hvoa::conformal::{
    apply_orthogonal, central_charge, classify_moduli, fock_central_charge, fock_l0_is_weight, fock_preserves_grading,
    grading_conformal_classify, is_automorphism,
};
use hvoa::fock::QuadLin;
use hvoa::sample::Sampler;
use hvoa::scalars::{Field, Gaussian, Tolerance};
use hvoa::semiconformal::complement;
use proptest::prelude::*;

type G = Gaussian;

fn tol() -> Tolerance {
    Tolerance::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn fock_charge_agrees(seed in any::<u64>(), d in 1usize..=4, shifted in any::<bool>()) {
        let mut s = Sampler::new(seed);
        let h = s.any_shift(d);
        let w = if shifted { QuadLin::omega(&h) } else { s.pair(&h).to_quadlin() };
        prop_assert_eq!(central_charge(&w, tol()).unwrap(), fock_central_charge(&w));
    }

    #[test]
    fn moduli_class_is_orthogonally_invariant(seed in any::<u64>(), d in 1usize..=5) {
        let mut s = Sampler::new(seed);
        let h = s.any_shift(d);
        let q = s.orthogonal(d);
        let moved = q.apply(&h);
        prop_assert_eq!(classify_moduli(&moved, tol()), classify_moduli(&h, tol()));
        prop_assert_eq!(apply_orthogonal(&q, &QuadLin::omega(&h)).unwrap(), QuadLin::omega(&moved));
    }

    #[test]
    fn stabilizer_is_closed(seed in any::<u64>(), d in 1usize..=5) {
        let mut s = Sampler::new(seed);
        let h = s.any_shift(d);
        let (q1, q2) = (s.stabilizer(&h), s.stabilizer(&h));
        for q in [&q1, &q2, &q1.compose(&q2), &q1.inverse(), &q2.compose(&q1.inverse())] {
            prop_assert!(is_automorphism(q.matrix(), &h, tol()));
        }
    }

    #[test]
    fn grading_classifier_matches_fock(seed in any::<u64>(), d in 1usize..=3, grading in any::<bool>()) {
        let w = Sampler::new(seed).quadlin(d, grading);
        let accepted = grading_conformal_classify(&w, tol());
        prop_assert_eq!(accepted.is_some(), fock_preserves_grading(&w, tol()));
        prop_assert_eq!(accepted.is_some(), fock_l0_is_weight(&w, 2, tol()));
        if let Some(h) = accepted {
            prop_assert_eq!(QuadLin::omega(&h), w);
        }
    }

    #[test]
    fn charges_add_up(seed in any::<u64>(), d in 1usize..=5) {
        let mut s = Sampler::new(seed);
        let h = s.any_shift(d);
        let p = s.pair(&h);
        let total = G::from_i64(d as i64) - &(h.dot(&h) * &G::from_i64(12));
        prop_assert_eq!(p.central_charge() + &complement(&p).central_charge(), total);
    }
}
