//! Cabello efficiency, in exact arithmetic.
//!
//!     cargo run --example efficiency

use qdsim::analysis::{cabello_efficiency, ProtocolKind};
use qdsim::dfs::NoiseCode;

fn main() {
    let kinds = [
        ProtocolKind::ThisWork(NoiseCode::Dephasing),
        ProtocolKind::ThisWork(NoiseCode::Rotation),
        ProtocolKind::Comparator,
    ];
    for k in kinds {
        let r = cabello_efficiency(k);
        println!(
            "{:<20} b_s={} q_t={} b_t={}  eta = {} = {:.1}%",
            r.protocol,
            r.b_s,
            r.q_t,
            r.b_t,
            r.eta,
            100.0 * r.eta_f64()
        );
    }
}
