//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hvoa::conformal::{central_charge, fock_central_charge, fock_l0_is_weight, grading_conformal_classify};
use hvoa::fock::{virasoro_bracket_defect, weight_basis, QuadLin};
use hvoa::linalg::Matrix;
use hvoa::orbits::{classify, witness_auto, witness_residual};
use hvoa::sample::{Sampler, ShiftClass};
use hvoa::scalars::{Field, Gaussian, Tolerance};
use hvoa::semiconformal::{
    commutant_weight1, complement, double_commutant_weight1, fock_commutant_weight1, fock_double_commutant_weight1,
    fock_semiconformal_check, from_subspace, is_semiconformal, leq, leq_fock_check, leq_geometric, maximal_chain,
    tensor_character_check, to_subspace, ScPair, DEFAULT_WEIGHT_BOUND,
};

type G = Gaussian;

const SEED: u64 = 20_240_617;
const WITNESS_RESIDUAL: f64 = 1e-9;

type Check = Result<String, String>;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn g(n: i64) -> G {
    G::from_i64(n)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1(s: &mut Sampler) -> Check {
    for i in 0..50 {
        let d = s.range(1, 5);
        let h = s.rational_vector(d);
        let expected = g(d as i64) - &(h.dot(&h) * &g(12));
        let w = QuadLin::omega(&h);
        let c = central_charge(&w, tol()).map_err(|e| e.to_string())?;
        let fock = fock_central_charge(&w);
        ensure(c == expected && fock == expected, || format!("case {i}: h={h} c={c} fock={fock} expected={expected}"))?;
    }
    Ok("50 shifts".into())
}

fn c2(s: &mut Sampler) -> Check {
    let (mut accepted, mut confirmed) = (0, 0);
    for i in 0..100 {
        let d = s.range(1, 4);
        let grading = s.coin();
        let w = s.quadlin(d, grading);
        let identity = w.quadratic() == &Matrix::identity(d);
        let accepts = grading_conformal_classify(&w, tol()).is_some();
        ensure(accepts == identity, || format!("case {i}: S=I is {identity}, classifier says {accepts}"))?;
        if accepts {
            accepted += 1;
            if confirmed < 20 {
                ensure(fock_l0_is_weight(&w, 3, tol()), || format!("case {i}: L'(0) is not the weight operator"))?;
                confirmed += 1;
            }
        }
    }
    ensure(confirmed == 20, || format!("only {confirmed} accepted candidates"))?;
    Ok(format!("{accepted}/100 accepted, {confirmed} confirmed in Fock space"))
}

fn c3(s: &mut Sampler) -> Check {
    for i in 0..100 {
        let d = s.range(1, 3);
        let h = s.any_shift(d);
        let valid = i % 2 == 0;
        let (a, b) = s.candidate(&h, valid);
        let matrix = is_semiconformal(&a, &b, &h, tol()).map_err(|e| e.to_string())?;
        let fock = fock_semiconformal_check(&a, &b, &h, DEFAULT_WEIGHT_BOUND, tol()).map_err(|e| e.to_string())?;
        ensure(matrix == fock, || format!("case {i}: matrix {matrix}, Fock {fock}\nA={a}\nB={b}\nh={h}"))?;
        ensure(matrix == valid, || format!("case {i}: candidate meant to be {valid} but is {matrix}"))?;
    }
    Ok("100 candidates, 50 valid".into())
}

fn c4(s: &mut Sampler) -> Check {
    let mut related = 0;
    for i in 0..100 {
        let d = s.range(1, 4);
        let h = s.any_shift(d);
        let (p1, p2) = s.mixed_pairs(&h);
        let algebraic = leq(&p1, &p2, tol()).map_err(|e| e.to_string())?;
        let fock = leq_fock_check(&p1, &p2, DEFAULT_WEIGHT_BOUND, tol()).map_err(|e| e.to_string())?;
        let geometric =
            leq_geometric(&to_subspace(&p1, tol()), &to_subspace(&p2, tol()), tol()).map_err(|e| e.to_string())?;
        ensure(algebraic == fock && fock == geometric, || {
            format!("case {i}: algebraic {algebraic}, Fock {fock}, geometric {geometric}")
        })?;
        related += usize::from(algebraic);
    }
    Ok(format!("100 triples, {related} related"))
}

fn c5(s: &mut Sampler) -> Check {
    for i in 0..200 {
        let d = s.range(1, 5);
        let k = s.range(0, d);
        let h = s.any_shift(d);
        let sub = s.regular_subspace(d, k);
        let p = from_subspace(&sub, &h, tol()).map_err(|e| e.to_string())?;
        let r = to_subspace(&p, tol());
        let hp = r.hprime();
        let residual = h.sub(hp);
        let orthogonal = sub.basis_vectors().iter().all(|v| v.dot(&residual).is_zero(tol()));
        ensure(r.subspace().same_as(&sub, tol()) && sub.contains(hp, tol()) && orthogonal, || {
            format!("case {i}: round trip changed ({k}-dim subspace of dimension {d})")
        })?;
    }
    Ok("200 subspaces".into())
}

fn c6(s: &mut Sampler) -> Check {
    for i in 0..50 {
        let d = s.range(1, 4);
        let h = s.any_shift(d);
        let p = s.pair(&h);
        let ker = commutant_weight1(&p, tol());
        let fock = fock_commutant_weight1(&p, tol());
        let k = p.rank(tol()).ok_or("non-integer rank")?;
        ensure(ker.same_as(&fock, tol()) && ker.dim() == d - k, || {
            format!("case {i}: Ker A has dim {}, Fock kernel {}", ker.dim(), fock.dim())
        })?;
        let sum = p.central_charge() + &complement(&p).central_charge();
        let total = g(d as i64) - &(h.dot(&h) * &g(12));
        ensure(sum == total, || format!("case {i}: c(w') + c(w_h - w') = {sum}, c(w_h) = {total}"))?;
    }
    Ok("50 pairs".into())
}

fn c7(s: &mut Sampler) -> Check {
    let mut vectors = 0;
    for d in 1..=3 {
        let h = s.any_shift(d);
        let mut ws = vec![QuadLin::omega(&h)];
        ws.extend((0..3).map(|_| s.pair(&h).to_quadlin()));
        for w in &ws {
            for m in -3..=3 {
                for n in -3..=3 {
                    let defect = virasoro_bracket_defect(w, m, n, 5);
                    ensure(defect == 0.0, || format!("d={d} m={m} n={n}: defect {defect}"))?;
                }
            }
            vectors += 1;
        }
    }
    Ok(format!("{vectors} vectors, 49 mode pairs each"))
}

fn c8(s: &mut Sampler) -> Check {
    let mut families = std::collections::BTreeSet::new();
    for i in 0..500 {
        let class = ShiftClass::ALL[i % 3];
        let d = s.range(if class == ShiftClass::Isotropic { 2 } else { 1 }, 5);
        let labelled = if s.coin() { s.labelled_instance(d, class) } else { None };
        let (p, expected) = match labelled {
            Some((f, k, p)) => (p, Some((f, k))),
            None => {
                let h = s.shift(d, class);
                (s.pair(&h), None)
            }
        };
        let label = classify(&p, tol()).map_err(|e| format!("case {i}: {e}"))?;
        let norm = p.h().dot(p.h());
        ensure(label.in_range(d, &norm, tol()), || format!("case {i}: {label} outside its range at d={d}"))?;
        if let Some((f, k)) = expected {
            ensure(label.family() == f && label.k() == k, || format!("case {i}: expected {f}({k}), got {label}"))?;
        }
        families.insert(label.family().to_string());
    }
    for i in 0..100 {
        let d = s.range(1, 5);
        let h = s.any_shift(d);
        let p = s.pair(&h);
        let q = s.stabilizer(&h);
        ensure(q.apply(&h) == h, || format!("stabilizer case {i} moves h"))?;
        let (a, b) = (classify(&p, tol()), classify(&p.transform(&q), tol()));
        ensure(matches!((&a, &b), (Ok(x), Ok(y)) if x.matches(y, tol())), || {
            format!("stabilizer case {i}: {a:?} vs {b:?}")
        })?;
    }
    let mut worst = 0.0f64;
    let mut witnessed = 0;
    while witnessed < 50 {
        let d = s.range(1, 5);
        let class = if d >= 2 && s.coin() { ShiftClass::Isotropic } else { ShiftClass::Anisotropic };
        let Some((_, _, p1)) = s.labelled_instance(d, class) else { continue };
        let q = s.stabilizer(p1.h());
        let p2 = p1.transform(&q);
        let w = witness_auto(&p1, &p2, tol()).map_err(|e| format!("witness {witnessed}: {e}"))?;
        let r = witness_residual(&w.to_approx(), &p1.to_approx(), &p2.to_approx());
        ensure(r <= WITNESS_RESIDUAL, || format!("witness {witnessed}: residual {r:e}"))?;
        worst = worst.max(r);
        witnessed += 1;
    }
    Ok(format!(
        "500 labels over {} families, 100 stabilizer checks, 50 witnesses (max residual {worst:.1e})",
        families.len()
    ))
}

fn c9(s: &mut Sampler) -> Check {
    for d in 1..=6 {
        let h = s.any_shift(d);
        let chain = maximal_chain(&h);
        ensure(chain.len() == d + 1, || format!("d={d}: {} pairs", chain.len()))?;
        for (i, w) in chain.windows(2).enumerate() {
            let up = leq(&w[0], &w[1], tol()).map_err(|e| e.to_string())?;
            let down = leq(&w[1], &w[0], tol()).map_err(|e| e.to_string())?;
            ensure(up && !down, || format!("d={d}: step {i} is not strict"))?;
        }
        let reversed: Vec<ScPair<G>> = chain.iter().rev().map(complement).collect();
        for (i, w) in reversed.windows(2).enumerate() {
            let up = leq(&w[0], &w[1], tol()).map_err(|e| e.to_string())?;
            ensure(up && w[0] != w[1], || format!("d={d}: complement step {i} is not strict"))?;
        }
    }
    Ok("d = 1..6".into())
}

fn c10(s: &mut Sampler) -> Check {
    let count = |d: usize, n: u32| weight_basis(d, n).len();
    let mut checked = 0;
    for d in 1..=4 {
        for k in 0..=d {
            let h = s.any_shift(d);
            let p = from_subspace(&s.regular_subspace(d, k), &h, tol()).map_err(|e| e.to_string())?;
            ensure(tensor_character_check(&p, 8, tol()), || format!("d={d} k={k}: graded dimensions differ"))?;
            for n in 0..=8 {
                let split: usize = (0..=n).map(|a| count(k, a) * count(d - k, n - a)).sum();
                ensure(count(d, n) == split, || format!("d={d} k={k} n={n}: basis count differs"))?;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} (d, k) splits up to weight 8"))
}

fn c11(s: &mut Sampler) -> Check {
    for d in 1..=4 {
        let h = s.any_shift(d);
        let chain = maximal_chain(&h);
        for (i, w) in chain.windows(2).enumerate() {
            let diff = ScPair::new(w[1].a().sub(w[0].a()), w[1].b().sub(w[0].b()), h.clone(), tol())
                .map_err(|e| format!("d={d} step {i}: {e}"))?;
            let fock = fock_double_commutant_weight1(&diff, tol());
            let matrix = double_commutant_weight1(&diff, tol());
            ensure(fock.dim() == 1 && fock.same_as(&matrix, tol()), || {
                format!("d={d} step {i}: double commutant has dim {}", fock.dim())
            })?;
        }
    }
    Ok("d = 1..4".into())
}

fn main() -> ExitCode {
    type Criterion = (&'static str, &'static str, Option<Duration>, fn(&mut Sampler) -> Check);
    let criteria: [Criterion; 11] = [
        ("C1", "central charge formula", Some(Duration::from_secs(5)), c1),
        ("C2", "grading classifier", Some(Duration::from_secs(30)), c2),
        ("C3", "semi-conformal oracle equivalence", Some(Duration::from_secs(60)), c3),
        ("C4", "partial order oracle equivalence", None, c4),
        ("C5", "subspace round trips", None, c5),
        ("C6", "commutant identification and charge additivity", None, c6),
        ("C7", "Virasoro relations", Some(Duration::from_secs(120)), c7),
        ("C8", "orbit classification", None, c8),
        ("C9", "maximal chains", None, c9),
        ("C10", "tensor character factorization", None, c10),
        ("C11", "rank-one chain differences", None, c11),
    ];
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let mut sampler = Sampler::new(SEED);
        let start = Instant::now();
        let result = run(&mut sampler);
        let elapsed = start.elapsed();
        let result = match (result, limit) {
            (Ok(_), Some(l)) if elapsed > l => Err(format!("took {:.2}s, limit {}s", elapsed.as_secs_f64(), l.as_secs())),
            (r, _) => r,
        };
        match result {
            Ok(detail) => println!("PASS {id} {name}: {detail} [{:.2}s]", elapsed.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL {id} {name}: {why} [{:.2}s]", elapsed.as_secs_f64());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
