//! Learns the rules of rock-paper-scissors from generated data.
//!
//! Run with `cargo run --release --example learn_rps -- [seed] [rounds]`.
//! Without `rounds` the examples carry exact win probabilities.

use skill::hypgen::GenConfig;
use skill::program::{parse_examples, parse_program};
use skill::rps::{generate, Rounds};
use skill::search::{skill_learn, SearchConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let seed: u64 = args.next().map_or(0, |s| s.parse().expect("seed"));
    let rounds: Option<usize> = args.next().map(|s| s.parse().expect("rounds"));
    let data = generate(3, Rounds::PerPair(rounds.unwrap_or(10)), rounds.is_none(), seed).unwrap();
    print!("{}", data.pex);
    let program = parse_program(&data.pbk).unwrap();
    let examples = parse_examples(&data.pex).unwrap();
    let cfg = SearchConfig { seed, ..SearchConfig::default() };
    let out = skill_learn(&program, &examples, &GenConfig::default(), &cfg).unwrap();
    let mut body = String::new();
    out.report.render_body(&mut body, false);
    println!("\n{body}");
}
