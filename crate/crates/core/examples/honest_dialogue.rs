//! One noisy, unattacked dialogue in each code.
//!
//!     cargo run --example honest_dialogue

use qdsim::adversary::AttackModel;
use qdsim::dfs::NoiseCode;
use qdsim::protocol::{run_dialogue, ProtocolConfig};

fn bits(s: &str) -> Vec<bool> {
    s.bytes().map(|b| b == b'1').collect()
}

fn show(b: &[bool]) -> String {
    b.iter().map(|&x| if x { '1' } else { '0' }).collect()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k = bits("1011001110");
    let i = bits("0110100101");
    for code in NoiseCode::ALL {
        let cfg = ProtocolConfig::new(code, k.len()).with_decoys(8, 8).with_seed(2024);
        let r = run_dialogue(&cfg, &k, &i, &AttackModel::none())?;
        println!("{code}:");
        println!("  Alice sent {}  Bob decoded {}", show(&k), show(r.k_hat.as_deref().unwrap()));
        println!("  Bob sent   {}  Alice decoded {}", show(&i), show(r.i_hat.as_deref().unwrap()));
        let (c1, c2) = (r.first_check.unwrap(), r.second_check.unwrap());
        println!("  decoy errors: {}/{} then {}/{}", c1.errors, c1.tested, c2.errors, c2.tested);
        let announced: Vec<String> = r.public.announcements.iter().map(|l| l.to_string()).collect();
        println!("  public announcements: {}", announced.join(" "));
    }
    Ok(())
}
