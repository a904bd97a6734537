//! Loss, mean squared loss, probabilistic accuracy and the continuous
//! confusion counts on a handful of predictions.
//!
//! Run with `cargo run --example metrics_tour`.

use skill::logic::{Atom, Term};
use skill::metrics::{confusion, loss, pacc, rmse, rmse_root, PredictionVector};
use skill::program::ProbExample;

fn main() {
    let expected = [0.5, 0.2, 0.9, 0.0];
    let predicted = PredictionVector(vec![0.5, 0.8, 0.7, 0.1]);
    let examples: Vec<ProbExample> = expected
        .iter()
        .enumerate()
        .map(|(i, &e)| ProbExample { atom: Atom::new("ex", vec![Term::constant(&format!("e{i}"))]), expected: e })
        .collect();
    for (p, e) in predicted.values().iter().zip(&expected) {
        println!("predicted {p:.2} expected {e:.2} loss {:+.2}", loss(*p, *e).unwrap());
    }
    println!("rmse (mean squared loss) = {:.4}", rmse(&predicted, &examples).unwrap());
    println!("root of the above        = {:.4}", rmse_root(&predicted, &examples).unwrap());
    println!("pacc                     = {:.4}", pacc(&predicted, &examples).unwrap());
    let c = confusion(&predicted, &examples).unwrap();
    println!("tp {:.2} tn {:.2} fp {:.2} fn {:.2}", c.tp, c.tn, c.fp, c.fn_);
    println!("(tp + tn) / n            = {:.4}", (c.tp + c.tn) / examples.len() as f64);
}
