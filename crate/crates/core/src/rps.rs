//! Synthetic rock-paper-scissors data.
//!
//! Each player gets a random strategy profile (a point on the probability
//! simplex over rock/paper/scissors). The background knowledge holds one
//! annotated disjunction per player, and each ordered pair of players
//! contributes an example `f::beats(A,B).` where `f` is how often `A` beat
//! `B`: either the analytic probability or the frequency over simulated
//! rounds. A tied round counts as a round that neither player won.

use std::fmt::Write;

use rand::Rng;

use crate::logic::Clause;
use crate::program::parse_clauses;

pub const OBJECTS: [&str; 3] = ["rock", "paper", "scissors"];

#[derive(Clone, Debug, PartialEq)]
pub struct PlayerProfile {
    pub player: String,
    /// Probabilities of rock, paper, scissors.
    pub probs: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RpsError {
    #[error("need at least 2 players, got {0}")]
    TooFewPlayers(usize),
    #[error("need at least one round")]
    NoRounds,
}

/// How many rounds to simulate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounds {
    /// This many rounds for every pair of players.
    PerPair(usize),
    /// This many rounds overall, each between a uniformly chosen pair.
    Total(usize),
}

pub fn player_name(i: usize) -> String {
    if i < 26 {
        format!("player{}", (b'A' + i as u8) as char)
    } else {
        format!("player{i}")
    }
}

/// Profiles drawn uniformly from the simplex by sorted-uniform spacings.
pub fn gen_profiles<R: Rng>(n_players: usize, rng: &mut R) -> Result<Vec<PlayerProfile>, RpsError> {
    if n_players < 2 {
        return Err(RpsError::TooFewPlayers(n_players));
    }
    Ok((0..n_players)
        .map(|i| {
            let (a, b): (f64, f64) = (rng.gen(), rng.gen());
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            PlayerProfile { player: player_name(i), probs: [lo, hi - lo, 1.0 - hi] }
        })
        .collect())
}

/// Index of the object that `obj` beats.
fn beaten_by(obj: usize) -> usize {
    // rock > scissors, paper > rock, scissors > paper
    [2, 0, 1][obj]
}

/// Analytic probability that `a` beats `b` in one round.
pub fn win_probability(a: &PlayerProfile, b: &PlayerProfile) -> f64 {
    (0..3).map(|i| a.probs[i] * b.probs[beaten_by(i)]).sum()
}

fn play<R: Rng>(p: &PlayerProfile, rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    if u < p.probs[0] {
        0
    } else if u < p.probs[0] + p.probs[1] {
        1
    } else {
        2
    }
}

/// Generated background knowledge, examples and the profiles behind them.
#[derive(Clone, Debug)]
pub struct RpsData {
    pub profiles: Vec<PlayerProfile>,
    pub pbk: String,
    pub pex: String,
    /// `(winner, loser, expected)` in emission order.
    pub examples: Vec<(String, String, f64)>,
}

/// Background knowledge text for a set of profiles.
pub fn emit_pbk(profiles: &[PlayerProfile]) -> String {
    let mut s = String::from("% rock-paper-scissors player profiles\n");
    for p in profiles {
        let _ = writeln!(s, "type({}, player).", p.player);
    }
    for o in OBJECTS {
        let _ = writeln!(s, "type({o}, object).");
    }
    s.push_str("modeh(beats(+player,+player)).\nmodeb(plays(+player,#object)).\n");
    for p in profiles {
        let alts: Vec<String> =
            OBJECTS.iter().zip(p.probs).map(|(o, prob)| format!("{prob}::plays({},{o})", p.player)).collect();
        let _ = writeln!(s, "{}.", alts.join("; "));
    }
    s
}

fn emit_pex(examples: &[(String, String, f64)]) -> String {
    let mut s = String::new();
    for (a, b, f) in examples {
        let _ = writeln!(s, "{f}::beats({a},{b}).");
    }
    s
}

/// Analytic `beats` probabilities for every ordered pair.
pub fn exact_examples(profiles: &[PlayerProfile]) -> Vec<(String, String, f64)> {
    let mut out = Vec::new();
    for a in profiles {
        for b in profiles {
            if a.player != b.player {
                out.push((a.player.clone(), b.player.clone(), win_probability(a, b)));
            }
        }
    }
    out
}

/// Builds the file pair. With `exact` the examples carry analytic win
/// probabilities and no rounds are simulated; otherwise each example is the
/// empirical win frequency over the simulated rounds, and pairs that never
/// met are left out.
pub fn simulate_and_emit<R: Rng>(
    profiles: &[PlayerProfile],
    rounds: Rounds,
    exact: bool,
    rng: &mut R,
) -> Result<RpsData, RpsError> {
    let examples = if exact {
        exact_examples(profiles)
    } else {
        let n = profiles.len();
        // wins[i][j]: rounds i won against j; played[i][j]: rounds between them.
        let mut wins = vec![vec![0usize; n]; n];
        let mut played = vec![vec![0usize; n]; n];
        let mut round = |i: usize, j: usize, rng: &mut R| {
            let (x, y) = (play(&profiles[i], rng), play(&profiles[j], rng));
            played[i][j] += 1;
            played[j][i] += 1;
            if beaten_by(x) == y {
                wins[i][j] += 1;
            } else if beaten_by(y) == x {
                wins[j][i] += 1;
            }
        };
        match rounds {
            Rounds::PerPair(0) | Rounds::Total(0) => return Err(RpsError::NoRounds),
            Rounds::PerPair(k) => {
                for i in 0..n {
                    for j in i + 1..n {
                        for _ in 0..k {
                            round(i, j, rng);
                        }
                    }
                }
            }
            Rounds::Total(k) => {
                for _ in 0..k {
                    let i = rng.gen_range(0..n);
                    let mut j = rng.gen_range(0..n - 1);
                    if j >= i {
                        j += 1;
                    }
                    round(i.min(j), i.max(j), rng);
                }
            }
        }
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && played[i][j] > 0 {
                    let f = wins[i][j] as f64 / played[i][j] as f64;
                    out.push((profiles[i].player.clone(), profiles[j].player.clone(), f));
                }
            }
        }
        out
    };
    Ok(RpsData { profiles: profiles.to_vec(), pbk: emit_pbk(profiles), pex: emit_pex(&examples), examples })
}

/// Draws profiles and data from one seeded generator. The profiles depend
/// only on the seed and the player count, so an exact and an empirical
/// dataset with the same seed describe the same players.
pub fn generate(players: usize, rounds: Rounds, exact: bool, seed: u64) -> Result<RpsData, RpsError> {
    let mut rng = crate::rng::seeded_rng(seed);
    let profiles = gen_profiles(players, &mut rng)?;
    simulate_and_emit(&profiles, rounds, exact, &mut rng)
}

/// The three rules of the game over `beats/2` and `plays/2`.
pub fn ground_truth_rules() -> Vec<Clause> {
    parse_clauses(
        "beats(A,B) :- plays(A,rock), plays(B,scissors).\n\
         beats(A,B) :- plays(A,paper), plays(B,rock).\n\
         beats(A,B) :- plays(A,scissors), plays(B,paper).\n",
    )
    .expect("ground truth rules parse")
}
