use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{End, GaussDiagram, Layout, Sign};

/// A diagram with `arrows` arrows on `n` strands. Endpoints, signs and the
/// order of ends on each strand are drawn uniformly; the result depends only
/// on `seed`.
pub fn random_diagram(n: usize, arrows: usize, seed: u64) -> GaussDiagram {
    assert!(n >= 1, "a diagram needs at least one strand");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut layout = Layout { n, signs: Vec::new(), alive: Vec::new(), strands: vec![Vec::new(); n] };
    for _ in 0..arrows {
        let sign = if rng.random_bool(0.5) { Sign::Pos } else { Sign::Neg };
        let a = layout.add_arrow(sign);
        layout.strands[rng.random_range(0..n)].push(End::tail(a));
        layout.strands[rng.random_range(0..n)].push(End::head(a));
    }
    for strand in &mut layout.strands {
        strand.shuffle(&mut rng);
    }
    layout.to_diagram()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_valid() {
        assert_eq!(random_diagram(2, 0, 7), GaussDiagram::empty(2));
        assert_eq!(random_diagram(3, 5, 42), random_diagram(3, 5, 42));
        for seed in 0..100 {
            let g = random_diagram(3, 5, seed);
            assert!(g.validate().is_empty());
            assert_eq!(g.arrow_count(), 5);
        }
    }

    #[test]
    fn seeds_differ() {
        let distinct: std::collections::HashSet<_> = (0..20).map(|s| random_diagram(3, 4, s)).collect();
        assert!(distinct.len() > 15);
    }
}
