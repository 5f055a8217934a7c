//! Built-in exhaustive checks. Each item goes through a [`Toolkit`] so a
//! deliberate bug can be injected and shown to be caught.

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::adversary::{ancilla_state, exhaustive_detection, AttackKind};
use crate::analysis::{cabello_efficiency, leakage_entropy_exhaustive, ProtocolKind};
use crate::channel::{self, apply_photon_noise, noise_gate, NoiseModel};
use crate::dfs::{
    flip_relation, logical_measure, logical_state, logical_vector, LogicalLabel, LogicalQubitState,
    MessageOp, NoiseCode,
};
use crate::qcore::{fidelity, DensityMatrix, GateMatrix, StateVector, ALGEBRA_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mutation {
    /// Negate the composite flip unitary.
    FlipSign,
    /// Draw an independent noise parameter for each photon.
    SplitNoiseParameter,
}

/// The library operations the self-test exercises, optionally mutated.
#[derive(Debug, Clone, Copy, Default)]
pub struct Toolkit {
    pub mutation: Option<Mutation>,
}

impl Toolkit {
    pub fn mutated(m: Mutation) -> Self {
        Toolkit { mutation: Some(m) }
    }

    pub fn composite_unitary(&self, code: NoiseCode, op: MessageOp) -> GateMatrix {
        let g = crate::dfs::composite_unitary(code, op);
        match (self.mutation, op) {
            (Some(Mutation::FlipSign), MessageOp::Flip) => -g,
            _ => g,
        }
    }

    pub fn draw_photon_parameters<R: Rng + ?Sized>(&self, model: &NoiseModel, rng: &mut R) -> [f64; 2] {
        match self.mutation {
            Some(Mutation::SplitNoiseParameter) => [
                channel::sample_noise_parameter(model, rng),
                channel::sample_noise_parameter(model, rng),
            ],
            _ => channel::draw_photon_parameters(model, rng),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ItemResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

const NOISE_SAMPLES: usize = 1000;
const FIDELITY_FLOOR: f64 = 1.0 - 1e-12;

fn item(name: &'static str, failures: Vec<String>) -> ItemResult {
    ItemResult {
        name,
        pass: failures.is_empty(),
        detail: failures.first().cloned().unwrap_or_default(),
    }
}

fn apply(t: &Toolkit, code: NoiseCode, s: &LogicalQubitState, bit: bool) -> LogicalQubitState {
    s.apply(&t.composite_unitary(code, MessageOp::from_bit(bit)))
        .expect("two-photon gate")
}

fn decode_enumeration(t: &Toolkit) -> ItemResult {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut failures = Vec::new();
    for code in NoiseCode::ALL {
        for x0 in LogicalLabel::ALL {
            for k in [false, true] {
                for i in [false, true] {
                    let s = apply(t, code, &apply(t, code, &logical_state(code, x0), k), i);
                    let (a, _) = logical_measure(&s, x0.basis, &mut rng).expect("code state");
                    let k_hat = a.bit ^ x0.bit ^ i;
                    let i_hat = a.bit ^ x0.bit ^ k;
                    if (k_hat, i_hat) != (k, i) {
                        failures.push(format!("{code} {x0} k={k} i={i}"));
                    }
                }
            }
        }
    }
    item("decode_enumeration", failures)
}

fn flip_algebra(t: &Toolkit) -> ItemResult {
    let mut failures = Vec::new();
    for code in NoiseCode::ALL {
        let u = t.composite_unitary(code, MessageOp::Flip);
        for l in LogicalLabel::ALL {
            let got = logical_vector(code, l).apply(&u, &[0, 1]).expect("two-photon gate");
            let (sign, image) = flip_relation(l);
            let want = logical_vector(code, image).scaled(sign.into()).unwrap();
            if !got.approx_eq(&want, ALGEBRA_TOL) {
                failures.push(format!("{code}: U|{l}> != {sign:+}|{image}>"));
            }
        }
    }
    item("flip_algebra", failures)
}

fn dfs_invariance() -> ItemResult {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut failures = Vec::new();
    for code in NoiseCode::ALL {
        let model = NoiseModel::new(code);
        for _ in 0..NOISE_SAMPLES {
            let p = channel::sample_noise_parameter(&model, &mut rng);
            let gate = noise_gate(code, p).kron(&noise_gate(code, p));
            for l in LogicalLabel::ALL {
                let s = logical_vector(code, l);
                let f = fidelity(&s, &s.apply(&gate, &[0, 1]).unwrap()).unwrap();
                if f < FIDELITY_FLOOR {
                    failures.push(format!("{code} {l} parameter {p}: fidelity {f}"));
                }
            }
        }
    }
    item("dfs_invariance", failures)
}

fn collectivity(t: &Toolkit) -> ItemResult {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut failures = Vec::new();
    for code in NoiseCode::ALL {
        let model = NoiseModel::new(code);
        for _ in 0..NOISE_SAMPLES {
            let params = t.draw_photon_parameters(&model, &mut rng);
            if params[0] != params[1] {
                failures.push(format!("{code}: photons drew {params:?}"));
                continue;
            }
            for l in LogicalLabel::ALL {
                let s = logical_vector(code, l);
                let noisy = apply_photon_noise(&s, code, params).unwrap();
                if fidelity(&s, &noisy).unwrap() < FIDELITY_FLOOR {
                    failures.push(format!("{code} {l}: state left the code"));
                }
            }
        }
    }
    item("collectivity", failures)
}

fn ce_ancilla() -> ItemResult {
    let v = DensityMatrix::from_pure(&StateVector::v());
    let mut failures = Vec::new();
    for l in LogicalLabel::ALL {
        let rho = ancilla_state(&AttackKind::CeAttack, NoiseCode::Dephasing, l).unwrap();
        if !rho.approx_eq(&v, ALGEBRA_TOL) {
            failures.push(format!("ancilla after {l} is not |V>"));
        }
    }
    let d = exhaustive_detection(&AttackKind::CeAttack, NoiseCode::Dephasing).unwrap();
    if d != 0.0 {
        failures.push(format!("CE detection {d}"));
    }
    item("ce_ancilla", failures)
}

fn leakage() -> ItemResult {
    let failures = NoiseCode::ALL
        .iter()
        .map(|&c| (c, leakage_entropy_exhaustive(c).entropy))
        .filter(|&(_, h)| h != 2.0)
        .map(|(c, h)| format!("{c}: {h} bits"))
        .collect();
    item("leakage", failures)
}

fn efficiency() -> ItemResult {
    let mut cases: Vec<_> = NoiseCode::ALL
        .iter()
        .map(|&c| (ProtocolKind::ThisWork(c), Ratio::new(1, 3)))
        .collect();
    cases.push((ProtocolKind::Comparator, Ratio::new(2, 5)));
    let failures = cases
        .into_iter()
        .map(|(k, want)| (cabello_efficiency(k), want))
        .filter(|(r, want)| r.eta != *want)
        .map(|(r, want)| format!("{}: {} != {want}", r.protocol, r.eta))
        .collect();
    item("efficiency", failures)
}

pub fn run_selftest(t: &Toolkit) -> Vec<ItemResult> {
    vec![
        decode_enumeration(t),
        flip_algebra(t),
        dfs_invariance(),
        collectivity(t),
        ce_ancilla(),
        leakage(),
        efficiency(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn outcome(t: Toolkit) -> Vec<(&'static str, bool)> {
        run_selftest(&t).into_iter().map(|r| (r.name, r.pass)).collect()
    }

    #[test]
    fn pristine_passes() {
        assert!(outcome(Toolkit::default()).iter().all(|&(_, p)| p));
    }

    #[test]
    fn flipped_sign_breaks_only_the_algebra() {
        let failed: Vec<_> = outcome(Toolkit::mutated(Mutation::FlipSign))
            .into_iter()
            .filter(|&(_, p)| !p)
            .map(|(n, _)| n)
            .collect();
        assert_eq!(failed, vec!["flip_algebra"]);
    }

    #[test]
    fn split_noise_breaks_collectivity_not_invariance() {
        let r = outcome(Toolkit::mutated(Mutation::SplitNoiseParameter));
        let get = |name| r.iter().find(|(n, _)| *n == name).unwrap().1;
        assert!(get("dfs_invariance"));
        assert!(!get("collectivity"));
    }
}
