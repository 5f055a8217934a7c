//! Dump a dialogue's transcript as text, parse it back and replay the
//! public decoding.
//!
//!     cargo run --example transcript_replay

use qdsim::adversary::{AttackKind, AttackModel};
use qdsim::dfs::NoiseCode;
use qdsim::protocol::{run_dialogue, Event, ProtocolConfig, Transcript};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k = vec![true, false, true, true];
    let i = vec![false, false, true, false];
    let cfg = ProtocolConfig::new(NoiseCode::Rotation, 4).with_decoys(3, 3).with_seed(17);
    let r = run_dialogue(&cfg, &k, &i, &AttackModel::none())?;
    let text = r.transcript.to_text();
    print!("{text}");

    let parsed = Transcript::from_text(&text)?;
    assert_eq!(parsed, r.transcript);
    let k_hat: Vec<bool> = parsed
        .events()
        .iter()
        .filter_map(|e| match e {
            Event::DecodedK { bit, .. } => Some(*bit),
            _ => None,
        })
        .collect();
    println!("replayed k_hat matches k: {}", k_hat == k);

    // A detected attack closes the transcript with an abort line.
    let cfg = ProtocolConfig::new(NoiseCode::Rotation, 4).with_decoys(32, 0).with_seed(17);
    let r = run_dialogue(&cfg, &k, &i, &AttackModel::first(AttackKind::InterceptResend))?;
    println!("under intercept-resend: {}", r.transcript.to_text().lines().last().unwrap_or(""));
    Ok(())
}
