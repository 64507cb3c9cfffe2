//! Regenerates the committed filling-pair data file. Run explicitly:
//!
//!   cargo test --release -p fillvol --test generate_data -- --ignored --nocapture
//!
//! The solve is exact and deterministic; the committed file is re-verified
//! symbolically by every consumer, so regeneration is only needed when the
//! model parameters change.

use std::time::Instant;

use fillvol::constructions::solve_filling_pair;

#[test]
#[ignore]
fn regenerate_filling_pair_data() {
    let start = Instant::now();
    let pair = solve_filling_pair(2, 1, 200_000, 20_000).expect("filling pair solve");
    eprintln!(
        "solved in {:.1?}: |alpha| = {}, |beta| = {}, model q={} D={}",
        start.elapsed(),
        pair.alpha.l1_norm(),
        pair.beta.l1_norm(),
        pair.provenance.q,
        pair.provenance.spread,
    );
    let text = pair.to_json_string().expect("serialize");
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/filling_pair.json");
    std::fs::write(path, text).expect("write data file");
    eprintln!("wrote {path}");
}
