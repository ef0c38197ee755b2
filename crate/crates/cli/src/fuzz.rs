use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use welded::coloring::phi_g_to_a;
use welded::gauss::{applicable_moves, apply_move, random_diagram};
use welded::milnor::milnor_table;
use welded::{aut_equal, GaussDiagram, Move, Result};

pub struct Counterexample {
    pub trial: u64,
    pub diagram: GaussDiagram,
    pub mv: Move,
    pub what: String,
}

pub struct Report {
    pub trials: u64,
    pub moves: usize,
    pub counterexample: Option<Counterexample>,
}

impl Report {
    pub fn to_json(&self) -> Value {
        let ce = self.counterexample.as_ref().map(|c| {
            json!({
                "trial": c.trial,
                "diagram": c.diagram.to_text(),
                "move": c.mv.to_string(),
                "violation": c.what,
            })
        });
        json!({ "trials": self.trials, "moves_checked": self.moves, "counterexample": ce })
    }
}

fn trial_diagram(seed: u64, trial: u64) -> GaussDiagram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let n = rng.random_range(1..=4usize);
    let arrows = rng.random_range(0..=8usize);
    random_diagram(n, arrows, rng.random())
}

fn repeats(index: &[usize]) -> bool {
    let mut v = index.to_vec();
    v.sort_unstable();
    v.windows(2).any(|w| w[0] == w[1])
}

/// Applies every listed move to each trial diagram and stops at the first
/// move that changes the automorphism or a Milnor invariant of length ≤ 3.
pub fn run(trials: u64, seed: u64) -> Result<Report> {
    let mut moves = 0;
    for trial in 0..trials {
        let g = trial_diagram(seed, trial);
        let phi = phi_g_to_a(&g)?;
        let mu = milnor_table(&g, 3)?;
        for m in applicable_moves(&g) {
            moves += 1;
            let fail = |what: String| Counterexample { trial, diagram: g.clone(), mv: m, what };
            let h = match apply_move(&g, &m) {
                Ok(h) => h,
                Err(e) => return Ok(Report { trials, moves, counterexample: Some(fail(e.to_string())) }),
            };
            if !aut_equal(&phi, &phi_g_to_a(&h)?)? {
                return Ok(Report { trials, moves, counterexample: Some(fail("automorphism changed".into())) });
            }
            let after = milnor_table(&h, 3)?;
            let welded = m.kind().is_welded();
            if let Some(index) = mu.keys().find(|i| (welded || !repeats(i)) && mu[*i] != after[*i]) {
                let what = format!("μ{index:?} changed from {} to {}", mu[index], after[index]);
                return Ok(Report { trials, moves, counterexample: Some(fail(what)) });
            }
        }
    }
    Ok(Report { trials, moves, counterexample: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_is_clean_and_deterministic() {
        let a = run(20, 3).unwrap();
        assert!(a.counterexample.is_none());
        assert_eq!(a.moves, run(20, 3).unwrap().moves);
        assert!(a.moves > 0);
    }
}
