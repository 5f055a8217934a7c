//! What the public announcement tells Eve about (k, i).
//!
//!     cargo run --release --example leakage

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qdsim::adversary::{AttackKind, AttackModel};
use qdsim::analysis::{empirical_leakage, leakage_entropy_exhaustive, leakage_entropy_exhaustive_with};
use qdsim::dfs::NoiseCode;
use qdsim::protocol::ProtocolConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for code in NoiseCode::ALL {
        let r = leakage_entropy_exhaustive(code);
        println!("{code}: H(k,i | announcement) = {} bits", r.entropy);
        for row in &r.table {
            println!("  {:<16} p={:.3}  P(k,i)={:?}", row.observation, row.probability, row.posterior);
        }
        let public = leakage_entropy_exhaustive_with(code, true);
        println!("  if the twin's state were public: {} bit", public.entropy);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let cfg = ProtocolConfig::new(NoiseCode::Dephasing, 4).with_decoys(4, 4);
    for kind in [AttackKind::None, AttackKind::CeAttack] {
        let r = empirical_leakage(&AttackModel::first(kind), &cfg, 2000, &mut rng)?;
        println!("Monte-Carlo, {}: {:.4} ± {:.4} bits over {} rounds", r.attack, r.entropy, r.std_error, r.samples);
    }
    Ok(())
}
