//! Acceptance gate: one line per criterion, non-zero exit if any fails.

use std::time::{Duration, Instant};

use jordan_core::amplification::{
    amplification_audit, amplify, complexify, conjugation, transpose, two_positivity_test, Verdict,
};
use jordan_core::frame::{Frame, UnitalFrame};
use jordan_core::poset::Variant;
use jordan_core::reconstruction::{
    certify_jordan, induce_oracle, reconstruct, rr_atom_permutation_counterexample,
    spin_flip_counterexample, IsoOracle, Stage,
};
use jordan_core::suite::{axiom_checks, height_outcome, random_frame, sum_detect_trial, Status};
use jordan_core::tolerance::Tolerances;
use jordan_core::{random, Algebra, Element, Factor, Field, PosetFragment, Projection};

struct Verdicts {
    failed: usize,
}

impl Verdicts {
    fn report(&mut self, id: usize, name: &str, result: Result<String, String>) {
        match result {
            Ok(detail) => println!("criterion {id} PASS  {name}: {detail}"),
            Err(detail) => {
                self.failed += 1;
                println!("criterion {id} FAIL  {name}: {detail}");
            }
        }
    }
}

fn ensure(ok: bool, detail: String) -> Result<String, String> {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn mixed_sums() -> Vec<Algebra> {
    vec![
        Algebra::new(vec![
            Factor::Herm {
                n: 2,
                field: Field::Real,
            },
            Factor::Spin { n: 3 },
            Factor::Real,
        ])
        .unwrap(),
        Algebra::new(vec![
            Factor::Herm {
                n: 3,
                field: Field::Complex,
            },
            Factor::Herm {
                n: 2,
                field: Field::Complex,
            },
        ])
        .unwrap(),
    ]
}

fn axiom_descriptors() -> Vec<Algebra> {
    let mut out = Vec::new();
    for n in 2..=4 {
        out.push(Algebra::herm(n, Field::Real));
        out.push(Algebra::herm(n, Field::Complex));
    }
    for n in 2..=5 {
        out.push(Algebra::spin(n));
    }
    out.extend(mixed_sums());
    out
}

fn criterion_1() -> Result<String, String> {
    let start = Instant::now();
    let tol = Tolerances::default();
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for (k, a) in axiom_descriptors().iter().enumerate() {
        for c in axiom_checks(a, 200, 1000 + k as u64, &tol) {
            worst = worst.max(c.max_residual);
            if c.status != Status::Pass || c.max_residual > 1e-9 {
                failures.push(format!("{a} {}: {:.3e}", c.id, c.max_residual));
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(
        failures.is_empty() && elapsed < Duration::from_secs(30),
        format!(
            "{} descriptors x 200 samples, max residual {worst:.2e}, {:.2} s{}",
            axiom_descriptors().len(),
            elapsed.as_secs_f64(),
            if failures.is_empty() {
                String::new()
            } else {
                format!("; failures {failures:?}")
            }
        ),
    )
}

fn criterion_2() -> Result<String, String> {
    let mut bad = Vec::new();
    let mut total = 0;
    for (k, a) in axiom_descriptors().iter().enumerate() {
        let mut rng = random::rng(2000 + k as u64);
        for _ in 0..100 {
            let f = random_frame(a, &mut rng).map_err(|e| e.to_string())?;
            total += 1;
            // independent count: dimension from the rank of the coordinate vectors
            let cols: Vec<_> = f.projections().iter().map(|p| p.coords()).collect();
            let dim = nalgebra::DMatrix::from_columns(&cols).rank(1e-9);
            let outcome = height_outcome(&f);
            if !outcome.passed || dim != f.len() || f.height() != dim {
                bad.push(format!("{a}: {:?}", outcome.detail));
            }
        }
    }
    ensure(
        bad.is_empty(),
        format!(
            "{total} frames, {} mismatches {:?}",
            bad.len(),
            bad.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

fn criterion_3() -> Result<String, String> {
    let descriptors = [
        Algebra::herm(3, Field::Complex),
        Algebra::herm(4, Field::Real),
        Algebra::spin(4),
        mixed_sums()[0].clone(),
    ];
    let mut checked = 0;
    let mut discrepancies = 0;
    let mut pairs = 0;
    for (k, a) in descriptors.iter().enumerate() {
        let mut rng = random::rng(3000 + k as u64);
        for _ in 0..200 {
            let (c, d) = sum_detect_trial(a, &mut rng).map_err(|e| e.to_string())?;
            pairs += usize::from(c > 0);
            checked += c;
            discrepancies += d;
        }
    }
    ensure(
        discrepancies == 0 && pairs >= 200,
        format!("{pairs} orthogonal pairs, {checked} candidates z, {discrepancies} discrepancies"),
    )
}

fn fragment(a: &Algebra, variant: Variant, elements: usize, seed: u64) -> PosetFragment {
    let mut rng = random::rng(seed);
    let xs: Vec<Element> = (0..elements)
        .map(|_| random::element(a, &mut rng))
        .collect();
    PosetFragment::build(a, variant, &xs).unwrap()
}

fn round_trips(
    a: &Algebra,
    variant: Variant,
    count: usize,
    seed: u64,
) -> Result<(f64, Duration, usize), String> {
    let mut worst = 0.0f64;
    let mut slowest = Duration::ZERO;
    let mut min_projections = usize::MAX;
    for k in 0..count {
        let mut rng = random::rng(seed + k as u64);
        let start = Instant::now();
        let psi = certify_jordan(&random::automorphism(a, k % 2 == 1, &mut rng))
            .map_err(|_| "automorphism not Jordan")?;
        let frag = fragment(a, variant, 5, seed + 1000 + k as u64);
        min_projections = min_projections.min(frag.sample_projections().len());
        let oracle = induce_oracle(&psi, &frag).map_err(|e| e.to_string())?;
        let rec = reconstruct(&oracle, &frag, variant).map_err(|e| format!("instance {k}: {e}"))?;
        if !rec.unique {
            return Err(format!("instance {k}: rank certificate reports non-unique"));
        }
        worst = worst.max(rec.map.distance(&psi));
        slowest = slowest.max(start.elapsed());
    }
    Ok((worst, slowest, min_projections))
}

fn criterion_4() -> Result<String, String> {
    let a = Algebra::herm(3, Field::Complex);
    let (worst, slowest, projections) = round_trips(&a, Variant::As, 20, 4000)?;
    ensure(
        worst <= 1e-8 && slowest < Duration::from_secs(10) && projections >= 9,
        format!(
            "20 instances (conjugations and transpose-composed), max ‖L−ψ‖ = {worst:.2e}, slowest {:.2} s, ≥ {projections} projections, all unique",
            slowest.as_secs_f64()
        ),
    )
}

fn criterion_5() -> Result<String, String> {
    let h3 = Algebra::herm(3, Field::Complex);
    let h2r = Algebra::new(vec![
        Factor::Herm {
            n: 2,
            field: Field::Complex,
        },
        Factor::Real,
    ])
    .unwrap();
    let (w1, s1, _) = round_trips(&h3, Variant::Asu, 10, 5000)?;
    let (w2, s2, _) = round_trips(&h2r, Variant::Asu, 10, 5100)?;

    let spin = Algebra::spin(3);
    let mut rng = random::rng(5200);
    let mut frames = vec![Frame::unit(&spin)];
    for _ in 0..4 {
        let xi = random::unit_vector(3, &mut rng);
        frames.push(
            jordan_core::frame::spin_frame(xi.as_slice())
                .unwrap()
                .into_frame(),
        );
    }
    let frag = PosetFragment::from_frames(&spin, frames).unwrap();
    let refused = matches!(
        reconstruct(&IsoOracle::identity(&frag), &frag, Variant::Asu),
        Err(e) if e.stage == Stage::Hypothesis
    );
    ensure(
        w1.max(w2) <= 1e-8 && refused,
        format!(
            "Herm(3,C) max ‖L−ψ‖ = {w1:.2e} ({:.2} s), Herm(2,C)+R max ‖L−ψ‖ = {w2:.2e} ({:.2} s), V_3 refused = {refused}",
            s1.as_secs_f64(),
            s2.as_secs_f64()
        ),
    )
}

fn criterion_6() -> Result<String, String> {
    let (_, flip) = spin_flip_counterexample(3, 50, 6000).map_err(|e| e.to_string())?;
    let rr = rr_atom_permutation_counterexample().map_err(|e| e.to_string())?;
    let order_all = rr.rows.iter().all(|r| r.order_preserving);
    let unit_swap = rr.rows.iter().find(|r| r.permutation == [2, 1, 0]).unwrap();
    let orth_swap = rr.rows.iter().find(|r| r.permutation == [1, 0, 2]).unwrap();
    let ok = flip.jordan.passed
        && flip.distance_from_identity >= 1.0
        && flip.fixes_frames.passed
        && flip.fixes_frames.checked == 50
        && order_all
        && !unit_swap.orthogonality_preserving
        && orth_swap.implemented_by.as_deref() == Some("flip")
        && rr.passed;
    ensure(
        ok,
        format!(
            "σ Jordan {}, ‖σ−id‖ = {:.1}, fixes {}/50 A_ξ; {}/6 permutations order-preserving, unit-atom swap orthogonality-preserving = {}, orthogonal-atom swap implemented by {:?}",
            flip.jordan.passed,
            flip.distance_from_identity,
            flip.fixes_frames.checked - flip.fixes_frames.failures.len(),
            rr.rows.iter().filter(|r| r.order_preserving).count(),
            unit_swap.orthogonality_preserving,
            orth_swap.implemented_by
        ),
    )
}

/// Eigenvalues of the partial transpose of `½ Σ e_ij ⊗ e_ij` computed
/// directly by index swapping.
fn partial_transpose_witness_min(n: usize) -> f64 {
    let d = 2 * n;
    let mut m = nalgebra::DMatrix::<f64>::zeros(d, d);
    for i in 0..2 {
        for j in 0..2 {
            // block (i, j) holds ½ e_ij; transposed inside the block: ½ e_ji
            m[(i * n + j, j * n + i)] = 0.5;
        }
    }
    m.symmetric_eigenvalues().min()
}

fn criterion_7() -> Result<String, String> {
    let mut rng = random::rng(7000);
    let mut conj_min = f64::INFINITY;
    let mut conj_ok = 0;
    let mut star = 0;
    for n in [2, 3] {
        for _ in 0..50 {
            let psi = certify_jordan(&conjugation(&random::unitary(n, Field::Complex, &mut rng)))
                .map_err(|_| "not Jordan")?;
            let rep = two_positivity_test(&psi, 10, &mut rng).map_err(|e| e.to_string())?;
            conj_min = conj_min
                .min(rep.witness_min_eigenvalue)
                .min(rep.random_min_eigenvalue);
            conj_ok += usize::from(rep.two_positive);
            let audit =
                amplification_audit(&psi, &amplify(&complexify(&psi).unwrap()), 5, &mut rng)
                    .map_err(|e| e.to_string())?;
            star += usize::from(audit.verdict == Verdict::StarIsomorphism);
        }
    }
    let mut witness = Vec::new();
    let mut rejected = 0;
    for n in [2, 3] {
        let t = certify_jordan(&transpose(n)).map_err(|_| "transpose not Jordan")?;
        let rep = two_positivity_test(&t, 10, &mut rng).map_err(|e| e.to_string())?;
        let oracle = partial_transpose_witness_min(n);
        witness.push((n, rep.two_positive, rep.witness_min_eigenvalue, oracle));
        let audit = amplification_audit(&t, &amplify(&complexify(&t).unwrap()), 5, &mut rng)
            .map_err(|e| e.to_string())?;
        rejected += usize::from(audit.verdict == Verdict::Rejected);
    }
    let witness_ok = witness.iter().all(|&(_, passed, ev, oracle)| {
        !passed && (ev + 0.5).abs() <= 1e-9 && (oracle + 0.5).abs() <= 1e-12
    });
    ensure(
        conj_ok == 100 && star == 100 && witness_ok && rejected == 2,
        format!(
            "{conj_ok}/100 conjugations 2-positive (min eigenvalue {conj_min:.1e}), {star}/100 audited as *-isomorphisms; transpose witness {:?}; {rejected}/2 transposes rejected",
            witness.iter().map(|w| (w.0, w.2)).collect::<Vec<_>>()
        ),
    )
}

fn criterion_8() -> Result<String, String> {
    let descriptors = [
        Algebra::herm(3, Field::Complex),
        Algebra::herm(4, Field::Real),
        Algebra::spin(4),
        mixed_sums()[0].clone(),
    ];
    let mut rng = random::rng(8000);
    let mut worst = [0.0f64; 3];
    let mut commute = true;
    for k in 0..100 {
        let a = &descriptors[k % descriptors.len()];
        let x = random::unit_interval(a, &mut rng);
        for (slot, n) in [8usize, 20, 40].iter().enumerate() {
            let e = jordan_core::spectral::dyadic_expand(&x, *n).map_err(|e| e.to_string())?;
            worst[slot] = worst[slot].max(e.residual_norm() / 0.5f64.powi(*n as i32));
            commute &= e.digits.iter().all(|p| x.operator_commutes(p));
        }
    }
    ensure(
        worst.iter().all(|w| *w <= 1.0) && commute,
        format!(
            "100 elements, max error / 2^-N = {:.3} (N=8), {:.3} (N=20), {:.3} (N=40), digits commute = {commute}",
            worst[0], worst[1], worst[2]
        ),
    )
}

fn criterion_9() -> Result<String, String> {
    let a = Algebra::herm(3, Field::Complex);
    let mut silent = Vec::new();
    let mut stages = std::collections::BTreeMap::new();
    for k in 0..50u64 {
        let mut rng = random::rng(9000 + k);
        let variant = if k % 2 == 0 {
            Variant::As
        } else {
            Variant::Asu
        };
        let psi = certify_jordan(&random::automorphism(&a, k % 4 >= 2, &mut rng))
            .map_err(|_| "automorphism")?;
        let frag = fragment(&a, variant, 5, 9100 + k);
        let oracle = induce_oracle(&psi, &frag).map_err(|e| e.to_string())?;
        let (index, corrupted) = corrupt(&oracle, &frag, variant, k, &mut rng);
        let oracle = oracle
            .with_image(index, corrupted)
            .map_err(|e| e.to_string())?;
        match reconstruct(&oracle, &frag, variant) {
            Ok(_) => silent.push(k),
            Err(e) => *stages.entry(e.stage.to_string()).or_insert(0usize) += 1,
        }
    }
    ensure(
        silent.is_empty(),
        format!("50 corrupted oracles, silent acceptances {silent:?}, stopped at {stages:?}"),
    )
}

/// Replaces one image either by a random unitary rotation of itself or by
/// the image of a different frame of the same size. The replacement always
/// differs from the original.
fn corrupt(
    oracle: &IsoOracle,
    frag: &PosetFragment,
    variant: Variant,
    k: u64,
    rng: &mut random::SampleRng,
) -> (usize, Frame) {
    use rand::Rng;
    let a = frag.algebra();
    loop {
        let i = rng.gen_range(0..frag.len());
        let original = oracle.image(i);
        if original.len() == 1 && original.is_unital() {
            continue;
        }
        let candidate = if k % 3 == 2 {
            let j = rng.gen_range(0..frag.len());
            oracle.image(j).clone()
        } else {
            let u = conjugation(&random::unitary(3, Field::Complex, rng));
            original
                .map_projections(a, |p| Projection::new(u.apply(p)?))
                .unwrap()
        };
        let shape_ok = match variant {
            Variant::Asu => UnitalFrame::new(candidate.clone()).is_ok(),
            Variant::As => true,
        };
        if shape_ok && candidate.len() == original.len() && !candidate.same_span(original) {
            return (i, candidate);
        }
    }
}

fn main() {
    type Criterion = fn() -> Result<String, String>;
    let criteria: [(&str, Criterion); 9] = [
        ("axiom suite", criterion_1),
        ("dimension = frame size = height", criterion_2),
        ("sum detection equivalence", criterion_3),
        ("AS round trip on Herm(3,C)", criterion_4),
        ("ASU round trip and spin refusal", criterion_5),
        ("counterexample certificates", criterion_6),
        ("2-positivity dichotomy", criterion_7),
        ("dyadic expansion", criterion_8),
        ("corruption sensitivity", criterion_9),
    ];
    let mut verdicts = Verdicts { failed: 0 };
    for (k, (name, f)) in criteria.iter().enumerate() {
        verdicts.report(k + 1, name, f());
    }
    println!("acceptance: {}/9 criteria passed", 9 - verdicts.failed);
    if verdicts.failed > 0 {
        std::process::exit(1);
    }
}
