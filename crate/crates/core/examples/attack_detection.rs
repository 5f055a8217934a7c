//! Per-decoy detection probability of each attack, sampled and enumerated.
//!
//!     cargo run --release --example attack_detection [trials]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qdsim::adversary::{AttackKind, AttackModel, EMParams, Target};
use qdsim::analysis::estimate_detection;
use qdsim::dfs::NoiseCode;
use qdsim::protocol::ProtocolConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let trials = std::env::args().nth(1).map_or(Ok(10_000), |s| s.parse())?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let attacks = [
        AttackKind::InterceptResend,
        AttackKind::MeasureResend,
        AttackKind::EntangleMeasure(EMParams::orthogonal_ancilla()),
        AttackKind::CeAttack,
    ];
    println!("{:<18} {:<9} {:<7} {:>8} {:>18} {:>7}", "attack", "code", "leg", "estimate", "95% interval", "exact");
    for code in NoiseCode::ALL {
        for kind in &attacks {
            for target in [Target::First, Target::Second] {
                let attack = AttackModel::new(kind.clone(), target);
                if attack.validate(code).is_err() {
                    continue;
                }
                let e = estimate_detection(&attack, &ProtocolConfig::new(code, 1), trials, &mut rng)?;
                println!(
                    "{:<18} {:<9} {:<7} {:>8.4} [{:.4}, {:.4}] {:>7}",
                    e.attack,
                    code.to_string(),
                    format!("{target:?}").to_lowercase(),
                    e.estimate,
                    e.lower,
                    e.upper,
                    e.exact.map_or("-".into(), |x| format!("{x:.4}"))
                );
            }
        }
    }
    Ok(())
}
