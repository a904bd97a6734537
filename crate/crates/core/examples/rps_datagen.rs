//! Writes a rock-paper-scissors dataset pair and shows how simulated
//! frequencies approach the analytic ones as rounds grow.
//!
//! Run with `cargo run --example rps_datagen -- [out_dir]`.

use std::path::PathBuf;

use skill::rps::{exact_examples, generate, Rounds};

fn main() {
    let out: PathBuf = std::env::args().nth(1).map_or_else(std::env::temp_dir, PathBuf::from);
    let exact = generate(3, Rounds::PerPair(10), true, 5).unwrap();
    for p in &exact.profiles {
        println!("{} rock {:.3} paper {:.3} scissors {:.3}", p.player, p.probs[0], p.probs[1], p.probs[2]);
    }
    let truth = exact_examples(&exact.profiles);
    for rounds in [10, 100, 10_000] {
        let noisy = generate(3, Rounds::PerPair(rounds), false, 5).unwrap();
        let worst = noisy.examples.iter().zip(&truth).map(|(a, b)| (a.2 - b.2).abs()).fold(0.0, f64::max);
        println!("{rounds:6} rounds per pair: largest deviation from analytic {worst:.4}");
    }
    let (pbk, pex) = (out.join("rps.pbk"), out.join("rps.pex"));
    std::fs::write(&pbk, &exact.pbk).unwrap();
    std::fs::write(&pex, &exact.pex).unwrap();
    println!("wrote {} and {}", pbk.display(), pex.display());
}
