//! Acceptance suite: one test per verification criterion, each printing a
//! pass line (run with `--nocapture` to see them all).
//!
//! Two of the published non-exact bound claims are contradicted by the exact
//! simulation itself (see criteria 3 and 4): the in-case ancilla upper bound
//! fails when the solution sits at the edge of the window, and the not-in
//! conditional upper bound `r / 2^(2m)` is inconsistent with the not-in
//! conditional value `1/r` that the same source states and this simulator
//! confirms. Those arms are *adjudicated and reported* with exact counts
//! rather than asserted; everything the simulation supports is asserted at
//! the stated tolerances.

use dqdlp::analytics;
use dqdlp::baseline::{self, BaselineDistribution};
use dqdlp::cluster::{
    derive_seed, ledger_check, parallel_solve, query_payload_bits, ClassicalMessage, Coordinator,
    ExecMode, MessageKind, SimulatorExecutor,
};
use dqdlp::gates;
use dqdlp::membership::{
    circuit_states, probe, MembershipDistribution, SetDescriptor,
};
use dqdlp::numt::{brute_force_dlp, mod_pow, multiplicative_order, ProblemInstance};
use dqdlp::qsim::{Basis, RegisterLayout, StateVector};
use dqdlp::search::{solve, validate_transitions, SearchConfig, TruthfulOracle};
use std::time::Instant;

fn section6() -> ProblemInstance {
    ProblemInstance::new(3, 12, 71).unwrap()
}

fn exact_instance() -> ProblemInstance {
    ProblemInstance::new(2, 13, 17).unwrap() // r = 8 divides 2^5
}

#[test]
fn criterion_1_reported_probabilities() {
    let start = Instant::now();
    let inst = section6();
    assert_eq!((inst.r, inst.m), (35, 7));
    let hit = probe(&inst, &SetDescriptor::new(20, 3, 35).unwrap()).unwrap();
    let miss = probe(&inst, &SetDescriptor::new(0, 3, 35).unwrap()).unwrap();
    let elapsed = start.elapsed();
    assert!(
        (hit.p_third_marker_given_fourth_1 - 0.8360).abs() <= 0.005,
        "tau=20 conditional = {}",
        hit.p_third_marker_given_fourth_1
    );
    assert!(
        (miss.p_third_marker_given_fourth_1 - 0.1269).abs() <= 0.005,
        "tau=0 conditional = {}",
        miss.p_third_marker_given_fourth_1
    );
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!(
        "criterion 1: PASS - conditional(tau=20) = {:.4} (0.8360 +/- 0.005), \
         conditional(tau=0) = {:.4} (0.1269 +/- 0.005), {:?}",
        hit.p_third_marker_given_fourth_1, miss.p_third_marker_given_fourth_1, elapsed
    );
}

#[test]
fn criterion_2_solution_frequency() {
    let start = Instant::now();
    let inst = section6();
    let master_seed = 7u64;
    let shots = 100u32;
    let template = SimulatorExecutor::new(inst.clone(), 0);
    let mut correct = 0u32;
    let mut returned = 0u32;
    for shot in 0..shots {
        let shot_seed = derive_seed(master_seed, shot as u64);
        let config = SearchConfig { n0: 3, p: 2, max_restarts: 0, seed: shot_seed };
        let mut coordinator =
            Coordinator::new(template.fork_with_seed(shot_seed), 1, ExecMode::Serial);
        let trace = solve(&inst, &config, &mut coordinator).unwrap();
        if let Some(t) = trace.result {
            returned += 1;
            assert!(inst.verifies(t), "unverified solution escaped the walk");
            if t == 23 {
                correct += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(
        (60..=90).contains(&correct),
        "t = 23 found {correct} times in 100 runs"
    );
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:?}");
    // the observed rate clears the theoretical lower bounds with 3-sigma slack
    let rate = correct as f64 / 100.0;
    let bound = analytics::success_bound_nonexact_qft(35, 7, 2);
    let sigma = (rate * (1.0 - rate) / 100.0).sqrt();
    assert!(rate >= bound.middle - 3.0 * sigma);
    assert!(rate >= bound.e_form - 3.0 * sigma);
    println!(
        "criterion 2: PASS - t=23 in {correct}/100 single-pass runs (window 60..=90, \
         reported value 76); {returned} runs returned a verified result; rate {rate} clears \
         the bounds ({:.4}, {:.4}); {elapsed:?}",
        bound.middle, bound.e_form
    );
}

#[test]
fn exact_regime_success_rate_clears_the_product_bound() {
    // order 8 divides 2^5, so the exact-transform success bound applies;
    // p = 2 is the largest iteration count its constraint admits at r = 8
    let inst = exact_instance();
    let bound = analytics::success_bound_exact_qft(8, 2).unwrap().middle;
    let template = SimulatorExecutor::new(inst.clone(), 0);
    let shots = 500u32;
    let mut correct = 0u32;
    for shot in 0..shots {
        let shot_seed = derive_seed(17, shot as u64);
        let config = SearchConfig { n0: 2, p: 2, max_restarts: 0, seed: shot_seed };
        let mut coordinator =
            Coordinator::new(template.fork_with_seed(shot_seed), 1, ExecMode::Serial);
        let trace = solve(&inst, &config, &mut coordinator).unwrap();
        if let Some(t) = trace.result {
            assert_eq!(t, 6, "soundness: only the true exponent is ever returned");
            correct += 1;
        }
    }
    let rate = correct as f64 / shots as f64;
    let sigma = (rate * (1.0 - rate) / shots as f64).sqrt();
    assert!(
        rate >= bound - 3.0 * sigma,
        "rate {rate} below bound {bound} - 3 sigma"
    );
    println!(
        "exact-regime rate {rate:.3} over {shots} runs clears the product bound {bound:.4}"
    );
}

#[test]
fn criterion_3_exact_formula_oracle() {
    let inst = exact_instance();
    let t = brute_force_dlp(&inst).unwrap().t;
    let r = inst.r;
    let mut premise_ok = 0usize;
    let mut adjudicated: Vec<String> = Vec::new();
    for n in 0..=2u32 {
        for tau in 0..r {
            let set = SetDescriptor::new(tau, n, r).unwrap();
            let p = probe(&inst, &set).unwrap();
            let d = (t + r - tau) % r;
            // premise-free closed form must match everywhere at 1e-9
            let (gf, gm) = analytics::exact_joint_general(r, n, d).unwrap();
            assert!(
                (p.p_fourth_1 - gf).abs() < 1e-9 && (p.p_joint_marker - gm).abs() < 1e-9,
                "general form mismatch at n={n} tau={tau}: ({}, {}) vs ({gf}, {gm})",
                p.p_fourth_1,
                p.p_joint_marker
            );
            // published forms apply exactly when their coprimality premise holds
            let (ef, em) = if set.contains(t, r) {
                (
                    analytics::exact_joint_fourth1_in(n, r).unwrap(),
                    analytics::exact_joint_marker_in(n, r).unwrap(),
                )
            } else {
                let (nf, ncond) = analytics::notin_probabilities(r);
                (nf, nf * ncond)
            };
            if analytics::premise_holds(r, n, d) {
                premise_ok += 1;
                assert!(
                    (p.p_fourth_1 - ef).abs() < 1e-9 && (p.p_joint_marker - em).abs() < 1e-9,
                    "published form mismatch on a premise-clean config n={n} tau={tau}"
                );
            } else {
                adjudicated.push(format!(
                    "n={n} tau={tau}: simulated ({:.6}, {:.6}) vs published ({:.6}, {:.6})",
                    p.p_fourth_1, p.p_joint_marker, ef, em
                ));
                assert!(
                    (p.p_fourth_1 - ef).abs() > 1e-9 || (p.p_joint_marker - em).abs() > 1e-9,
                    "premise violated yet published form matched; detector is wrong"
                );
            }
        }
    }
    // the as-printed conditional never matches the joint ratio
    let display = analytics::conditional_in_as_published(2, r).unwrap();
    let derived = analytics::conditional_in_derived(2, r).unwrap();
    println!(
        "criterion 3: PASS - premise-free closed form matches the simulator at 1e-9 on all 24 \
         configs; published forms match on the {premise_ok} configs where their coprimality \
         premise holds and are adjudicated inapplicable on the other {}:",
        adjudicated.len()
    );
    for line in &adjudicated {
        println!("    reported: {line}");
    }
    println!(
        "    reported: published display conditional {display:.6} vs derived value {derived:.6} \
         (the derived form equals the joint ratio exactly; the display numerator does not)"
    );
    assert!(premise_ok >= 7);
    assert!(!adjudicated.is_empty());
}

#[test]
fn criterion_4_bound_conformance_sweep() {
    // four instances, every valid n <= 3, tau striding the full period
    let sweep: Vec<(ProblemInstance, u64)> = vec![
        (section6(), 23),
        (exact_instance(), 6),
        (ProblemInstance::new(5, mod_pow(5, 13, 23).unwrap(), 23).unwrap(), 13), // r = 22
        (ProblemInstance::new(7, mod_pow(7, 4, 29).unwrap(), 29).unwrap(), 4),   // r = 7
    ];
    let mut configs = 0usize;
    let mut in_p4_upper_violations: Vec<String> = Vec::new();
    let mut notin_cond_upper_violations = 0usize;
    let mut notin_total = 0usize;
    let mut worst_notin_excess = 0.0f64;
    for (inst, t) in &sweep {
        assert!(inst.m <= 8);
        for n in 0..=3u32 {
            if (1u64 << n) >= inst.r || n + 1 >= inst.m {
                continue;
            }
            let bounds = analytics::nonexact_bounds(inst.m, n, inst.r).unwrap();
            let stride = (inst.r / 8).max(1);
            for tau in (0..inst.r).step_by(stride as usize) {
                let set = SetDescriptor::new(tau, n, inst.r).unwrap();
                let p = probe(inst, &set).unwrap();
                configs += 1;
                // sound in every tested configuration: ancilla mass at least 1/r
                assert!(
                    p.p_fourth_1 >= bounds.lower_fourth_notin - 1e-12,
                    "P(anc=1) = {} < 1/r at r={} n={n} tau={tau}",
                    p.p_fourth_1,
                    inst.r
                );
                if set.contains(*t, inst.r) {
                    assert!(
                        p.p_joint_marker >= bounds.lower_joint_marker_in - 1e-12,
                        "joint {} < {} at r={} n={n} tau={tau}",
                        p.p_joint_marker,
                        bounds.lower_joint_marker_in,
                        inst.r
                    );
                    assert!(
                        p.p_third_marker_given_fourth_1 >= bounds.lower_cond_marker_in - 1e-12,
                        "conditional {} < {} at r={} n={n} tau={tau}",
                        p.p_third_marker_given_fourth_1,
                        bounds.lower_cond_marker_in,
                        inst.r
                    );
                    if p.p_fourth_1 > bounds.upper_fourth_in {
                        in_p4_upper_violations.push(format!(
                            "r={} n={n} tau={tau}: {:.6} > {:.6}",
                            inst.r, p.p_fourth_1, bounds.upper_fourth_in
                        ));
                    }
                } else {
                    notin_total += 1;
                    if p.p_third_marker_given_fourth_1 > bounds.upper_cond_marker_notin {
                        notin_cond_upper_violations += 1;
                        worst_notin_excess = worst_notin_excess
                            .max(p.p_third_marker_given_fourth_1 - bounds.upper_cond_marker_notin);
                    }
                }
            }
            // separation between the two published conditional bounds
            if inst.m >= 5 {
                let gap = bounds.lower_cond_marker_in - bounds.upper_cond_marker_notin;
                assert!(gap >= 0.3, "bound gap {gap} < 0.3 at m={} r={}", inst.m, inst.r);
            }
        }
    }
    assert!(configs >= 50, "sweep covered only {configs} configurations");
    println!(
        "criterion 4: PASS - {configs} configurations; asserted bounds hold everywhere \
         (in-case joint lower, in-case conditional lower, ancilla mass >= 1/r, \
         bound-value separation >= 0.3 at m >= 5)."
    );
    println!(
        "    reported: in-case ancilla upper bound 1/(2^m 2^n) + 1/2^n + 1/r violated at \
         {}/{} in-case configs (solution at the window edge):",
        in_p4_upper_violations.len(),
        configs - notin_total
    );
    for line in in_p4_upper_violations.iter().take(4) {
        println!("        {line}");
    }
    println!(
        "    reported: not-in conditional upper bound r/2^(2m) violated at \
         {notin_cond_upper_violations}/{notin_total} not-in configs (worst excess {:.4}); \
         it contradicts the not-in conditional 1/r that criterion 3 confirms, so it is \
         adjudicated as a defect of the published bound, not of the simulator.",
        worst_notin_excess
    );
    assert!(notin_cond_upper_violations > 0, "adjudication expected violations");
}

#[test]
fn criterion_5_bound_values() {
    let big = analytics::success_bound_nonexact_qft(4096, 13, 8);
    assert!(big.middle > 0.8924, "middle = {}", big.middle);
    assert!(big.e_form > 0.8924, "e_form = {}", big.e_form);
    let small = analytics::success_bound_nonexact_qft(35, 7, 2);
    assert!(
        (small.e_form - 0.2380).abs() <= 0.002,
        "e_form = {}",
        small.e_form
    );
    println!(
        "criterion 5: PASS - bound(4096, 13, 8): product form {:.4} and exponential form {:.4} \
         both exceed 0.8924; bound(35, 7, 2): exponential form {:.4} matches 0.2380 +/- 0.002 \
         (product form at the same point is {:.4}, reported for completeness)",
        big.middle, big.e_form, small.e_form, small.middle
    );
}

#[test]
fn criterion_6_structural_invariants() {
    // unitarity through the whole chain
    let inst = section6();
    let set = SetDescriptor::new(20, 3, 35).unwrap();
    let states = circuit_states(&inst, &set).unwrap();
    assert_eq!(states.len(), 11);
    let orbit: std::collections::HashSet<u64> = inst.orbit().into_iter().collect();
    let mut worst_drift = 0.0f64;
    for st in &states {
        worst_drift = worst_drift.max((st.norm() - 1.0).abs());
        // the residue register never leaves the orbit of the generator
        assert_eq!(st.marginal(|b| !orbit.contains(&b.z)), 0.0);
    }
    assert!(worst_drift < 1e-10, "norm drift {worst_drift}");

    // compositional construction equals the direct gate on the full basis
    let layout = RegisterLayout::new(3, 7).unwrap();
    let direct = gates::shifted_a_power(20, &inst, false);
    let composed = gates::shifted_a_power_composed(20, &inst).unwrap();
    for idx in 0..layout.dim() {
        let b = layout.basis(idx);
        assert_eq!(direct.apply(b), composed.apply(b));
    }

    // eigenphase identities at r = 8
    let small = exact_instance();
    let t = brute_force_dlp(&small).unwrap().t;
    let r = small.r;
    let mut worst_phase = 0.0f64;
    for l in 0..r {
        let psi = gates::EigenVector::new(l, &small).unwrap();
        for (s, x, tau) in [(0u64, 1u64, 0u64), (2, 3, 5), (3, 7, 2), (1, 4, 7)] {
            let gamma = gates::shifted_a_power(tau, &small, false);
            let lambda = gates::controlled_b_power(&small, false);
            let angle_gamma =
                -2.0 * std::f64::consts::PI * ((s + tau) * x % r * l % r) as f64 / r as f64;
            let angle_lambda = 2.0 * std::f64::consts::PI * (t * x % r * l % r) as f64 / r as f64;
            for (gate, angle) in [(&gamma, angle_gamma), (&lambda, angle_lambda)] {
                let mut moved = vec![num_complex::Complex64::ZERO; psi.amps.len()];
                for (z, a) in psi.amps.iter().enumerate() {
                    if a.norm() > 0.0 {
                        let target = gate.apply(Basis { s, x, z: z as u64, anc: 0 });
                        moved[target.z as usize] = *a;
                    }
                }
                let w = num_complex::Complex64::from_polar(1.0, angle);
                for (m, p) in moved.iter().zip(&psi.amps) {
                    worst_phase = worst_phase.max((m - w * p).norm());
                }
            }
        }
    }
    assert!(worst_phase < 1e-10, "eigenphase error {worst_phase}");

    // ancilla marker is an involution
    let marker = gates::mark_zero_argument();
    for idx in 0..layout.dim() {
        let b = layout.basis(idx);
        assert_eq!(marker.apply(marker.apply(b)), b);
    }

    // argument register concentrates on zero alongside a set ancilla whenever
    // the order divides 2^m; the general-order leakage is reported
    let mut worst_leak = 0.0f64;
    for n in 0..=2u32 {
        for tau in 0..small.r {
            let dist = MembershipDistribution::prepare(
                &small,
                &SetDescriptor::new(tau, n, small.r).unwrap(),
            )
            .unwrap();
            worst_leak = worst_leak.max(dist.argument_leakage());
        }
    }
    assert!(worst_leak <= 1e-12, "exact-regime leakage {worst_leak}");
    let general_leak = MembershipDistribution::prepare(&inst, &set)
        .unwrap()
        .argument_leakage();
    println!(
        "criterion 6: PASS - norm drift {worst_drift:.2e} < 1e-10 across 11 stages; \
         compositional gate identical on all 2^18 basis states; eigenphase error \
         {worst_phase:.2e} < 1e-10 at r=8; marker involution exact; \
         P(argument != 0 and ancilla = 1) = {worst_leak:.2e} <= 1e-12 in the exact regime \
         (reported: {general_leak:.2e} for the general-order circuit, which is why the \
         exact-regime scoping matters)"
    );
}

#[test]
fn criterion_7_search_soundness_under_a_truthful_oracle() {
    let mut checked = 0u64;
    for r in 2..=64u64 {
        let (a, modulus) = element_of_order(r);
        assert_eq!(multiplicative_order(a, modulus).unwrap(), r);
        let mut n0 = 0u32;
        while (1u64 << n0) < r {
            for t in 0..r {
                let b = mod_pow(a, t as i64, modulus).unwrap();
                let inst = ProblemInstance::new(a, b, modulus).unwrap();
                if n0 + 1 >= inst.m {
                    break;
                }
                let mut oracle = TruthfulOracle { r, t };
                let config = SearchConfig { n0, p: 1, max_restarts: 0, seed: 0 };
                let trace = solve(&inst, &config, &mut oracle).unwrap();
                assert_eq!(trace.result, Some(t), "r={r} n0={n0} t={t}");
                validate_transitions(&trace, r, n0)
                    .unwrap_or_else(|e| panic!("r={r} n0={n0} t={t}: {e}"));
                let bound = r.div_ceil(1 << n0) + 2 * n0 as u64;
                assert!(trace.steps.len() as u64 <= bound, "r={r} n0={n0} t={t}");
                checked += 1;
            }
            n0 += 1;
        }
    }
    println!(
        "criterion 7: PASS - truthful-oracle walk recovered the exact solution and matched \
         the transition rule on {checked} (r <= 64, n0, t) combinations"
    );
}

/// Smallest prime `p = 1 (mod r)` paired with an element of order exactly `r`.
fn element_of_order(r: u64) -> (u64, u64) {
    let is_prime = |x: u64| x >= 2 && (2..x).take_while(|d| d * d <= x).all(|d| !x.is_multiple_of(d));
    let mut p = r + 1;
    loop {
        if is_prime(p) {
            break;
        }
        p += r;
    }
    // primitive root of p, then collapse to order r
    let mut factors = Vec::new();
    let mut q = p - 1;
    let mut f = 2;
    while f * f <= q {
        if q.is_multiple_of(f) {
            factors.push(f);
            while q.is_multiple_of(f) {
                q /= f;
            }
        }
        f += 1;
    }
    if q > 1 {
        factors.push(q);
    }
    let g = (2..p)
        .find(|g| {
            factors
                .iter()
                .all(|q| mod_pow(*g, ((p - 1) / q) as i64, p).unwrap() != 1)
        })
        .expect("every prime has a primitive root");
    (mod_pow(g, ((p - 1) / r) as i64, p).unwrap(), p)
}

#[test]
fn criterion_8_distribution_contract() {
    let inst = section6();
    // identical verdicts and trial logs for K = 1 and K = 4 on fixed per-job seeds
    let jobs: Vec<(SetDescriptor, u32)> = (0..8u64)
        .map(|k| (SetDescriptor::new(k * 4 % 35, 3, 35).unwrap(), 2))
        .collect();
    let run = |workers: usize| {
        let mut coord = Coordinator::new(
            SimulatorExecutor::new(inst.clone(), 99),
            workers,
            ExecMode::Parallel,
        );
        (coord.dispatch(&jobs).unwrap(), coord.ledger)
    };
    let (serial, ledger1) = run(1);
    let (parallel, ledger4) = run(4);
    for (a, b) in serial.iter().zip(&parallel) {
        assert_eq!(a.verdict, b.verdict);
        assert_eq!(a.trials, b.trials);
    }
    assert_eq!(ledger1.messages, 16);
    assert_eq!(ledger1.per_query_bits, 10); // 6 + 3 payload bits + 1 verdict bit
    assert_eq!(query_payload_bits(35), 9);
    assert!(ledger_check(&ledger1, 35) && ledger_check(&ledger4, 35));

    // whole traces agree across worker counts (worker ids are scheduling labels)
    let solve_with = |workers: usize| {
        let mut coord = Coordinator::new(
            SimulatorExecutor::new(inst.clone(), 7),
            workers,
            ExecMode::Parallel,
        );
        let config = SearchConfig { n0: 3, p: 2, max_restarts: 2, seed: 7 };
        parallel_solve(&config, &mut coord).unwrap()
    };
    let t1 = solve_with(1);
    let t4 = solve_with(4);
    assert_eq!(t1.result, t4.result);
    assert_eq!(t1.steps.len(), t4.steps.len());
    for (a, b) in t1.steps.iter().zip(&t4.steps) {
        assert_eq!((a.tau, a.n, a.verdict), (b.tau, b.n, b.verdict));
        assert_eq!(a.trials, b.trials);
    }

    // messages have nowhere to put amplitudes: integer/enum payloads only
    let msg = ClassicalMessage {
        kind: MessageKind::Query,
        tau: 20,
        n: 3,
        verdict_bit: None,
        bits_on_wire: 9,
    };
    let value = serde_json::to_value(msg).unwrap();
    fn scalar_only(v: &serde_json::Value) -> bool {
        match v {
            serde_json::Value::Object(map) => map.values().all(scalar_only),
            serde_json::Value::Number(_) | serde_json::Value::Null => true,
            serde_json::Value::String(s) => s == "query" || s == "verdict",
            _ => false,
        }
    }
    assert!(scalar_only(&value));

    // soft wall-clock comparison, reported but never gating
    let timed = |workers: usize| {
        let exec = SimulatorExecutor::new(inst.clone(), 5); // cold cache each time
        let mut coord = Coordinator::new(exec, workers, ExecMode::Parallel);
        let jobs: Vec<(SetDescriptor, u32)> = (0..8u64)
            .map(|k| (SetDescriptor::new((k * 4 + 1) % 35, 3, 35).unwrap(), 2))
            .collect();
        let start = Instant::now();
        coord.dispatch(&jobs).unwrap();
        start.elapsed()
    };
    let t_serial = timed(1);
    let t_parallel = timed(4);
    let ratio = t_parallel.as_secs_f64() / t_serial.as_secs_f64();
    println!(
        "criterion 8: PASS - K=1 and K=4 verdicts/trials identical; ledger 2 messages per job \
         at 10 bits per query (bound 18); messages carry integers only. Soft timing report: \
         K=4 ran 8 cold jobs in {:.0} ms vs {:.0} ms at K=1 (ratio {ratio:.2}; \
         informational only)",
        t_parallel.as_secs_f64() * 1e3,
        t_serial.as_secs_f64() * 1e3
    );
}

#[test]
fn criterion_9_baseline_cross_check() {
    use rand::SeedableRng;
    let inst = exact_instance();
    let truth = brute_force_dlp(&inst).unwrap().t;
    let dist = BaselineDistribution::prepare(&inst).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let mut accepted = 0u32;
    for _ in 0..200 {
        let outcome = baseline::shor_dlp_run(&dist, &inst, &mut rng);
        if let Some(candidate) = outcome.t_candidate {
            assert_eq!(candidate, truth, "accepted candidate disagrees with brute force");
            accepted += 1;
        }
    }
    assert!(accepted > 40, "only {accepted}/200 runs accepted");
    let report = baseline::qubit_report(&section6(), 3).unwrap();
    assert_eq!((report.baseline, report.distributed), (21, 18));
    println!(
        "criterion 9: PASS - {accepted}/200 reference runs accepted, every candidate equals \
         the brute-force solution; qubit report (baseline, membership) = (21, 18) at m=7, n=3"
    );
}

#[test]
fn initial_state_convention_matches_the_layout() {
    // shared sanity for the suite: the initial state is (s, x, z, anc) = (0, 0, 1, 0)
    let layout = RegisterLayout::new(3, 7).unwrap();
    let st = StateVector::initial(layout);
    assert_eq!(st.amp(&Basis { s: 0, x: 0, z: 1, anc: 0 }), num_complex::Complex64::ONE);
}
