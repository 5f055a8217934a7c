//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test --test acceptance`. Every tolerance used below is a
//! named constant in this file.

use std::process::ExitCode;
use std::time::Instant;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qdsim::adversary::{
    ancilla_state, exhaustive_detection, max_pairwise_trace_distance, AttackKind, AttackModel,
    EMParams, Eavesdropper,
};
use qdsim::analysis::{
    cabello_efficiency, empirical_leakage, estimate_detection, leakage_entropy_exhaustive,
    ProtocolKind,
};
use qdsim::channel::{
    apply_photon_noise, carrier, draw_photon_parameters, Interceptor, Leg, NoiseModel,
};
use qdsim::cli::{attack_sweep, AttackSpec, AttackType, EmParamsSpec, RunConfig};
use qdsim::dfs::{
    composite_unitary, decode_single_photon, logical_measure, logical_state, logical_vector,
    LogicalBasis, LogicalLabel, LogicalQubitState, MessageOp, NoiseCode,
};
use qdsim::protocol::{run_dialogue, ProtocolConfig};
use qdsim::qcore::{fidelity, DensityMatrix, StateVector, C64};

const FIDELITY_TOL: f64 = 1e-12;
const AMPLITUDE_TOL: f64 = 1e-12;
const EXACT_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-10;
const DETECTION_TOL: f64 = 0.02;
const ENTROPY_TOL: f64 = 0.01;
const SIGMAS: f64 = 3.0;

const NOISE_SAMPLES: usize = 1000;
const HONEST_ROUNDS: usize = 1000;
const DETECTION_TRIALS: usize = 10_000;
const LEAKAGE_TRIALS: usize = 10_000;
const DECODER_SAMPLES: usize = 10_000;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn dfs_invariance() -> Outcome {
    let mut r = rng(1);
    let mut worst = 1.0f64;
    for code in NoiseCode::ALL {
        let model = NoiseModel::new(code);
        for _ in 0..NOISE_SAMPLES {
            let params = draw_photon_parameters(&model, &mut r);
            for l in LogicalLabel::ALL {
                let s = logical_vector(code, l);
                let f = fidelity(&s, &apply_photon_noise(&s, code, params).unwrap()).unwrap();
                worst = worst.min(f);
            }
        }
    }
    ensure(worst >= 1.0 - FIDELITY_TOL, || format!("worst fidelity {worst}"))?;
    Ok(format!("worst fidelity 1 - {:.1e}", 1.0 - worst))
}

/// Hand-written amplitudes in `HH, HV, VH, VV` order.
fn table(code: NoiseCode, l: LogicalLabel) -> [f64; 4] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    match (code, l.basis, l.bit) {
        (NoiseCode::Dephasing, LogicalBasis::Z, false) => [0.0, 1.0, 0.0, 0.0],
        (NoiseCode::Dephasing, LogicalBasis::Z, true) => [0.0, 0.0, 1.0, 0.0],
        (NoiseCode::Dephasing, LogicalBasis::X, false) => [0.0, s, s, 0.0],
        (NoiseCode::Dephasing, LogicalBasis::X, true) => [0.0, s, -s, 0.0],
        (NoiseCode::Rotation, LogicalBasis::Z, false) => [s, 0.0, 0.0, s],
        (NoiseCode::Rotation, LogicalBasis::Z, true) => [0.0, s, -s, 0.0],
        (NoiseCode::Rotation, LogicalBasis::X, false) => [0.5, 0.5, -0.5, 0.5],
        (NoiseCode::Rotation, LogicalBasis::X, true) => [0.5, -0.5, 0.5, 0.5],
    }
}

fn flip_algebra() -> Outcome {
    use LogicalLabel as L;
    // U|0> = |1>, U|1> = -|0>, U|+x> = -|-x>, U|-x> = |+x>.
    let relations = [
        (L::Z0, 1.0, L::Z1),
        (L::Z1, -1.0, L::Z0),
        (L::X0, -1.0, L::X1),
        (L::X1, 1.0, L::X0),
    ];
    let mut checked = 0;
    for code in NoiseCode::ALL {
        let u = composite_unitary(code, MessageOp::Flip);
        for (from, sign, to) in relations {
            let got = StateVector::from_real(&table(code, from)).unwrap().apply(&u, &[0, 1]).unwrap();
            let want = table(code, to).map(|a| C64::new(sign * a, 0.0));
            let err = got
                .amplitudes()
                .iter()
                .zip(want)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            ensure(err <= AMPLITUDE_TOL, || format!("{code}: U|{from}> off by {err:e}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} relations, signs included"))
}

fn bits(n: usize, seed: u64) -> Vec<bool> {
    let mut r = rng(seed);
    (0..n).map(|_| r.gen()).collect()
}

fn honest_dialogue() -> Outcome {
    for code in NoiseCode::ALL {
        let cfg = ProtocolConfig::new(code, HONEST_ROUNDS).with_decoys(64, 64).with_seed(3);
        ensure(cfg.noise.enabled, || "noise disabled".into())?;
        let (k, i) = (bits(HONEST_ROUNDS, 10), bits(HONEST_ROUNDS, 11));
        let r = run_dialogue(&cfg, &k, &i, &AttackModel::none()).map_err(|e| e.to_string())?;
        ensure(!r.aborted(), || format!("{code}: aborted {:?}", r.abort))?;
        ensure(r.decoded_correctly(&k, &i), || format!("{code}: decoding mismatch"))?;
        let errors = r.first_check.unwrap().errors + r.second_check.unwrap().errors;
        ensure(errors == 0, || format!("{code}: {errors} check errors"))?;
    }
    Ok(format!("{HONEST_ROUNDS} rounds per code decoded, 0 check errors"))
}

/// Exact detection from mutual unbiasedness: a decoy read in its own basis
/// fails iff the resent state has the other bit or lies in the other basis
/// (probability 1/2 then).
fn mub_pass(bob: LogicalLabel, sent: LogicalLabel) -> Ratio<u32> {
    if bob.basis != sent.basis {
        Ratio::new(1, 2)
    } else if bob == sent {
        Ratio::from_integer(1)
    } else {
        Ratio::from_integer(0)
    }
}

fn intercept_resend_exact() -> Ratio<u32> {
    let mut fail = Ratio::from_integer(0);
    for bob in LogicalLabel::ALL {
        for fake in LogicalLabel::ALL {
            fail += (Ratio::from_integer(1) - mub_pass(bob, fake)) / 16;
        }
    }
    fail
}

fn measure_resend_exact() -> Ratio<u32> {
    let mut fail = Ratio::from_integer(0);
    for bob in LogicalLabel::ALL {
        for basis in LogicalBasis::ALL {
            for bit in [false, true] {
                let outcome = LogicalLabel::new(basis, bit);
                let born = mub_pass(outcome, bob);
                let p = born / 8;
                fail += p * (Ratio::from_integer(1) - mub_pass(bob, outcome));
            }
        }
    }
    fail
}

fn detection(kind: AttackKind, want: f64, exact: Ratio<u32>) -> Outcome {
    let exact_f = *exact.numer() as f64 / *exact.denom() as f64;
    ensure(exact_f == want, || format!("enumeration oracle gives {exact}"))?;
    let mut line = format!("oracle {exact}");
    for code in NoiseCode::ALL {
        let closed = exhaustive_detection(&kind, code).map_err(|e| e.to_string())?;
        ensure((closed - want).abs() <= EXACT_TOL, || format!("{code}: enumeration {closed}"))?;
        let cfg = ProtocolConfig::new(code, 1);
        let e = estimate_detection(&AttackModel::first(kind.clone()), &cfg, DETECTION_TRIALS, &mut rng(4))
            .map_err(|e| e.to_string())?;
        ensure(
            (e.estimate - want).abs() <= DETECTION_TOL && e.half_width <= DETECTION_TOL,
            || format!("{code}: {} ± {}", e.estimate, e.half_width),
        )?;
        line += &format!("; {code} {:.4} ± {:.4}", e.estimate, e.half_width);
    }
    Ok(line)
}

fn ce_attack() -> Outcome {
    let code = NoiseCode::Dephasing;
    let attack = AttackModel::first(AttackKind::CeAttack);

    let mut eve = Eavesdropper::new(attack.clone(), code).map_err(|e| e.to_string())?;
    let inputs: Vec<_> = LogicalLabel::ALL.iter().map(|&l| carrier(code, l)).collect();
    let delivered = eve
        .intercept(Leg::First, inputs.clone(), &mut rng(5))
        .map_err(|e| e.to_string())?;
    for (before, after) in inputs.iter().zip(&delivered) {
        let want = before.state().tensor(&StateVector::v());
        ensure(after.state().approx_eq(&want, AMPLITUDE_TOL), || {
            "delivered photons changed".into()
        })?;
    }

    let v = DensityMatrix::from_pure(&StateVector::v());
    for l in LogicalLabel::ALL {
        let rho = ancilla_state(&AttackKind::CeAttack, code, l).map_err(|e| e.to_string())?;
        ensure(rho.approx_eq(&v, AMPLITUDE_TOL), || format!("ancilla after {l} not |V>"))?;
    }

    let cfg = ProtocolConfig::new(code, 1);
    let d = estimate_detection(&attack, &cfg, DETECTION_TRIALS, &mut rng(6)).map_err(|e| e.to_string())?;
    ensure(d.detections == 0 && d.estimate == 0.0, || format!("{} detections", d.detections))?;
    let exact = exhaustive_detection(&AttackKind::CeAttack, code).map_err(|e| e.to_string())?;
    ensure(exact == 0.0, || format!("enumerated detection {exact}"))?;

    let cfg = ProtocolConfig::new(code, 4).with_decoys(4, 4);
    let h = empirical_leakage(&attack, &cfg, 2500, &mut rng(7)).map_err(|e| e.to_string())?;
    ensure((h.entropy - 2.0).abs() <= ENTROPY_TOL, || format!("entropy {}", h.entropy))?;
    Ok(format!(
        "0/{} detected, ancillas |V>, Eve entropy {:.4} bits",
        d.trials, h.entropy
    ))
}

fn entangle_measure() -> Outcome {
    let code = NoiseCode::Dephasing;
    let ident = AttackKind::EntangleMeasure(EMParams::identity());
    let orth = AttackKind::EntangleMeasure(EMParams::orthogonal_ancilla());
    let cfg = ProtocolConfig::new(code, 1);

    let d0 = estimate_detection(&AttackModel::first(ident.clone()), &cfg, DETECTION_TRIALS, &mut rng(8))
        .map_err(|e| e.to_string())?;
    ensure(d0.detections == 0, || format!("identity probe detected {} times", d0.detections))?;
    let t0 = max_pairwise_trace_distance(&ident, code, &LogicalLabel::ALL).map_err(|e| e.to_string())?;
    ensure(t0 <= TRACE_TOL, || format!("identity probe trace distance {t0:e}"))?;

    let d1 = estimate_detection(&AttackModel::first(orth.clone()), &cfg, DETECTION_TRIALS, &mut rng(9))
        .map_err(|e| e.to_string())?;
    ensure(
        (d1.estimate - 0.25).abs() <= DETECTION_TOL,
        || format!("orthogonal probe detection {}", d1.estimate),
    )?;
    let t1 = max_pairwise_trace_distance(&orth, code, &[LogicalLabel::Z0, LogicalLabel::Z1])
        .map_err(|e| e.to_string())?;
    ensure((t1 - 1.0).abs() <= TRACE_TOL, || format!("Z trace distance {t1}"))?;
    Ok(format!(
        "identity: 0 detected, D = {t0:.1e}; orthogonal: {:.4} detected, D(Z0,Z1) = {t1}",
        d1.estimate
    ))
}

fn leakage() -> Outcome {
    let mut line = String::new();
    for code in NoiseCode::ALL {
        let ex = leakage_entropy_exhaustive(code);
        ensure(ex.entropy == 2.0, || format!("{code}: exhaustive {}", ex.entropy))?;
        let cfg = ProtocolConfig::new(code, 1);
        let mc = empirical_leakage(&AttackModel::none(), &cfg, LEAKAGE_TRIALS, &mut rng(12))
            .map_err(|e| e.to_string())?;
        ensure((mc.entropy - ex.entropy).abs() <= ENTROPY_TOL, || {
            format!("{code}: Monte-Carlo {}", mc.entropy)
        })?;
        line += &format!("{code} exact {} / MC {:.4}; ", ex.entropy, mc.entropy);
    }
    Ok(line.trim_end_matches("; ").to_string())
}

fn efficiency() -> Outcome {
    for code in NoiseCode::ALL {
        let r = cabello_efficiency(ProtocolKind::ThisWork(code));
        ensure(r.eta == Ratio::new(1, 3), || format!("{code}: {}", r.eta))?;
        ensure(r.eta == Ratio::new(r.b_s, r.q_t + r.b_t), || "eta not b_s/(q_t+b_t)".into())?;
    }
    let c = cabello_efficiency(ProtocolKind::Comparator);
    ensure(c.eta == Ratio::new(2, 5), || format!("comparator {}", c.eta))?;
    Ok("this work 1/3 (both codes), comparator 2/5".into())
}

fn superposition(code: NoiseCode, theta: f64, phi: f64) -> LogicalQubitState {
    let zero = logical_vector(code, LogicalLabel::Z0);
    let one = logical_vector(code, LogicalLabel::Z1);
    let amps = zero
        .amplitudes()
        .iter()
        .zip(one.amplitudes())
        .map(|(a, b)| a * theta.cos() + b * C64::from_polar(theta.sin(), phi))
        .collect();
    LogicalQubitState::new(code, StateVector::new(amps).unwrap()).unwrap()
}

fn decoder_equivalence() -> Outcome {
    let mut r = rng(13);
    for code in NoiseCode::ALL {
        for l in LogicalLabel::ALL {
            let s = logical_state(code, l);
            let a = decode_single_photon(&s, l.basis, &mut r).map_err(|e| e.to_string())?;
            let (b, _) = logical_measure(&s, l.basis, &mut r).map_err(|e| e.to_string())?;
            ensure(a == l && b == l, || format!("{code} {l}: {a} vs {b}"))?;
        }
    }
    let mut worst = 0.0f64;
    let cases = [(0.3, 0.0), (std::f64::consts::FRAC_PI_4, 0.0), (1.1, 0.7), (0.5, 2.0)];
    for code in NoiseCode::ALL {
        for label in LogicalLabel::ALL {
            // Eigenstates of one basis measured in the other.
            let s = logical_state(code, label);
            worst = worst.max(compare(&s, label.basis.other(), &mut r)?);
        }
        for &(theta, phi) in &cases {
            let s = superposition(code, theta, phi);
            for basis in LogicalBasis::ALL {
                worst = worst.max(compare(&s, basis, &mut r)?);
            }
        }
    }
    ensure(worst <= SIGMAS, || format!("decoder frequencies differ by {worst:.2} sigma"))?;
    Ok(format!("eigenstates exact; superpositions within {worst:.2} sigma"))
}

/// Distance in standard errors between the two decoders' frequencies of
/// bit 1.
fn compare(s: &LogicalQubitState, basis: LogicalBasis, r: &mut ChaCha8Rng) -> Result<f64, String> {
    let one = logical_vector(s.code(), LogicalLabel::new(basis, true));
    let p = fidelity(&one, s.state()).unwrap();
    let (mut a, mut b) = (0usize, 0usize);
    for _ in 0..DECODER_SAMPLES {
        a += decode_single_photon(s, basis, r).map_err(|e| e.to_string())?.bit as usize;
        b += logical_measure(s, basis, r).map_err(|e| e.to_string())?.0.bit as usize;
    }
    let n = DECODER_SAMPLES as f64;
    let sigma = (2.0 * p * (1.0 - p) / n).sqrt();
    let diff = (a as f64 - b as f64).abs() / n;
    Ok(if sigma == 0.0 { if diff == 0.0 { 0.0 } else { f64::INFINITY } } else { diff / sigma })
}

fn sweep_config() -> RunConfig {
    let mut cfg = RunConfig::from_json(
        r#"{ "protocol": { "code": "dephasing", "n": 2, "delta1": 2, "delta2": 2 },
             "run": { "trials": 2000, "seed": 2024 } }"#,
    )
    .unwrap();
    cfg.sweep = vec![
        AttackSpec::new(AttackType::None),
        AttackSpec::new(AttackType::InterceptResend),
        AttackSpec::new(AttackType::MeasureResend),
        AttackSpec::new(AttackType::EntangleMeasure).with_params(EmParamsSpec::OrthogonalAncilla),
        AttackSpec::new(AttackType::CeAttack),
    ];
    cfg
}

fn determinism() -> Outcome {
    let cfg = sweep_config();
    std::env::set_var("QDSIM_THREADS", "1");
    let a = attack_sweep(&cfg)?;
    std::env::remove_var("QDSIM_THREADS");
    let b = attack_sweep(&cfg)?;
    let sa = serde_json::to_string(&a.results).unwrap();
    let sb = serde_json::to_string(&b.results).unwrap();
    ensure(sa == sb, || "numeric sections differ".into())?;
    ensure(a.run_id == b.run_id, || "run ids differ".into())?;
    ensure(a.to_table() == b.to_table(), || "tables differ".into())?;
    Ok(format!("{} bytes identical across 1 and all workers", sa.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("DFS invariance", dfs_invariance),
        ("flip algebra", flip_algebra),
        ("honest dialogue", honest_dialogue),
        ("intercept-resend detection", || {
            detection(AttackKind::InterceptResend, 0.5, intercept_resend_exact())
        }),
        ("measure-resend detection", || {
            detection(AttackKind::MeasureResend, 0.25, measure_resend_exact())
        }),
        ("CE attack", ce_attack),
        ("entangle-measure trade-off", entangle_measure),
        ("leakage", leakage),
        ("efficiency", efficiency),
        ("decoder equivalence", decoder_equivalence),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = f();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} [{secs:.2}s]: {detail}", n + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} [{secs:.2}s]: {why}", n + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
