//! Reading a logical qubit with two single-photon measurements instead of a
//! Bell-type measurement.
//!
//!     cargo run --release --example single_photon_decoding

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qdsim::dfs::{decode_single_photon, logical_measure, logical_state, measure_photons, LogicalBasis, LogicalLabel, NoiseCode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for code in NoiseCode::ALL {
        println!("{code}");
        for l in LogicalLabel::ALL {
            let s = logical_state(code, l);
            let (raw, _) = measure_photons(s.state(), code, l.basis, &mut rng)?;
            let decoded = decode_single_photon(&s, l.basis, &mut rng)?;
            println!("  |{l}>  photons read {raw}  ->  {decoded}");
        }
        // A Z-basis state read in X: both decoders give a fair coin.
        let s = logical_state(code, LogicalLabel::Z0);
        let n = 20_000;
        let (mut a, mut b) = (0, 0);
        for _ in 0..n {
            a += decode_single_photon(&s, LogicalBasis::X, &mut rng)?.bit as u32;
            b += logical_measure(&s, LogicalBasis::X, &mut rng)?.0.bit as u32;
        }
        println!("  |Z0> read in X: single-photon {:.3}, projective {:.3}", a as f64 / n as f64, b as f64 / n as f64);
    }
    Ok(())
}
