//! Welded Milnor invariants read from the Magnus expansion of longitudes.
//!
//! The longitude of strand `j` is the product, from bottom to top, of the
//! meridians of the tail intervals feeding the heads on `j`, each raised to
//! the sign of its arrow. Meridians are expressed in the bottom generators by
//! substituting the Wirtinger relations `k` times, which is exact modulo the
//! `k`-th term of the lower central series. The zero-framing correction
//! multiplies by `x_j^{-e}` on the left, so the corrected longitude still
//! conjugates `x_j` to the top meridian of strand `j`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::coloring::{tail_intervals, Intervals, TailInterval};
use crate::error::{Error, Result};
use crate::freegroup::{Letter, TruncatedSeries, Word};
use crate::gauss::GaussDiagram;

/// A longitude of strand `strand`, meaningful modulo `Γ_depth F_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Longitude {
    pub strand: usize,
    pub depth: usize,
    pub word: Word,
    pub framing_corrected: bool,
}

/// Solves the Wirtinger relations for interval conjugators by `passes`
/// substitution sweeps, starting from the trivial conjugator.
fn substitute<T, F>(iv: &Intervals, passes: usize, one: T, mut step: F) -> Result<BTreeMap<TailInterval, T>>
where
    T: Clone,
    F: FnMut(&T, &T, usize, i8) -> Result<T>,
{
    let mut k: BTreeMap<TailInterval, T> = iv.all().map(|t| (t, one.clone())).collect();
    for _ in 0..passes {
        for h in &iv.heads {
            let next = step(&k[&h.minus], &k[&h.zero], h.zero.strand, h.sign.value())?;
            k.insert(h.plus, next);
        }
    }
    Ok(k)
}

/// Products of the signed meridians met along each strand, before framing.
fn raw_longitudes(g: &GaussDiagram, k: usize) -> Result<Vec<Word>> {
    let n = g.strand_count();
    let iv = tail_intervals(g);
    let k_map = substitute(&iv, k, Word::identity(n), |minus, zero, s0, eps| {
        let meridian = Word::generator(n, s0)?.conjugate(zero)?;
        minus.multiply(&meridian.pow(eps as i64))
    })?;
    Ok((1..=n).map(|j| k_map[&iv.top(j)].clone()).collect())
}

/// Longitude words, one per strand, exact modulo `Γ_k`.
pub fn longitudes(g: &GaussDiagram, k: usize) -> Result<Vec<Longitude>> {
    if k == 0 {
        return Err(Error::Malformed("longitude depth must be at least 1".into()));
    }
    let n = g.strand_count();
    raw_longitudes(g, k)?
        .into_iter()
        .enumerate()
        .map(|(i, raw)| {
            let j = i + 1;
            let word = Word::generator_pow(n, j, -raw.exponent_sum(j))?.multiply(&raw)?;
            Ok(Longitude { strand: j, depth: k, word, framing_corrected: true })
        })
        .collect()
}

/// Magnus expansions of the zero-framed longitudes modulo degree `> depth - 1`,
/// computed directly on truncated series.
pub fn longitude_series(g: &GaussDiagram, depth: usize) -> Result<Vec<TruncatedSeries>> {
    if depth < 2 {
        return Err(Error::Malformed("series depth must be at least 2".into()));
    }
    let n = g.strand_count();
    let degree = depth - 1;
    let iv = tail_intervals(g);
    let k_map = substitute(&iv, depth, TruncatedSeries::one(n, degree), |minus, zero, s0, eps| {
        let mut meridian = zero.inverse()?;
        meridian.mul_letter_right(Letter::new(s0, eps));
        minus.mul(&meridian.mul(zero)?)
    })?;
    (1..=n)
        .map(|j| {
            let raw = &k_map[&iv.top(j)];
            let e = exponent_sum_of_series(raw, j);
            Word::generator_pow(n, j, -e)?.magnus(degree).mul(raw)
        })
        .collect()
}

/// The coefficient of `X_j` is the exponent sum of `x_j` in the underlying word.
fn exponent_sum_of_series(s: &TruncatedSeries, j: usize) -> i64 {
    let c = s.coefficient(&[j]);
    i64::try_from(c).expect("exponent sum fits in i64")
}

fn check_index(g: &GaussDiagram, index: &[usize]) -> Result<()> {
    if index.is_empty() {
        return Err(Error::Malformed("Milnor index must be nonempty".into()));
    }
    let n = g.strand_count();
    if let Some(&bad) = index.iter().find(|&&i| i == 0 || i > n) {
        return Err(Error::IndexOutOfRange { index: bad, max: n });
    }
    Ok(())
}

/// `μ_I` for `I = (i_1, …, i_m, j)`, read at the given substitution depth
/// (which must exceed `m`).
pub fn milnor_mu_at_depth(g: &GaussDiagram, index: &[usize], depth: usize) -> Result<BigInt> {
    check_index(g, index)?;
    let (j, prefix) = index.split_last().expect("nonempty");
    if depth <= prefix.len() {
        return Err(Error::Malformed(format!("depth {depth} does not determine invariants of length {}", index.len())));
    }
    if prefix.is_empty() {
        return Ok(BigInt::from(1));
    }
    let series = longitude_series(g, depth)?;
    Ok(series[j - 1].coefficient(prefix))
}

/// `μ_I` at the minimal depth `|I|`.
pub fn milnor_mu(g: &GaussDiagram, index: &[usize]) -> Result<BigInt> {
    milnor_mu_at_depth(g, index, index.len())
}

/// Every `μ_{i_1…i_k j}`, keyed by `(j, (i_1, …, i_k))`, including zeros.
pub fn universal_milnor(g: &GaussDiagram, k: usize) -> Result<BTreeMap<(usize, Vec<usize>), BigInt>> {
    if k == 0 {
        return Err(Error::Malformed("universal invariant needs k ≥ 1".into()));
    }
    let n = g.strand_count();
    let series = longitude_series(g, k + 1)?;
    let mut out = BTreeMap::new();
    for (j, s) in series.iter().enumerate() {
        for prefix in sequences(n, k) {
            let c = s.coefficient(&prefix);
            out.insert((j + 1, prefix), c);
        }
    }
    Ok(out)
}

/// All sequences of length `len` over `1..=n`, lexicographically.
pub fn sequences(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|p| {
                (1..=n).map(move |i| {
                    let mut q = p.clone();
                    q.push(i);
                    q
                })
            })
            .collect();
    }
    out
}

/// Every `μ_I` with `2 ≤ |I| ≤ max_len`, each read at depth `|I|`.
pub fn milnor_table(g: &GaussDiagram, max_len: usize) -> Result<BTreeMap<Vec<usize>, BigInt>> {
    let mut out = BTreeMap::new();
    for len in 2..=max_len {
        for ((j, mut prefix), c) in universal_milnor(g, len - 1)? {
            prefix.push(j);
            out.insert(prefix, c);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiltrationOrder {
    /// The shortest nonvanishing invariant has this length.
    Exact(usize),
    /// Every invariant shorter than this vanishes.
    AtLeast(usize),
}

impl fmt::Display for FiltrationOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiltrationOrder::Exact(k) => write!(f, "{k}"),
            FiltrationOrder::AtLeast(k) => write!(f, "≥ {k}"),
        }
    }
}

/// The largest `k ≤ k_max` such that every invariant of length below `k` vanishes.
pub fn milnor_filtration_order(g: &GaussDiagram, k_max: usize) -> Result<FiltrationOrder> {
    if k_max < 2 {
        return Err(Error::Malformed("k_max must be at least 2".into()));
    }
    for len in 2..k_max {
        if universal_milnor(g, len - 1)?.values().any(|c| !c.is_zero()) {
            return Ok(FiltrationOrder::Exact(len));
        }
    }
    Ok(FiltrationOrder::AtLeast(k_max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::{apply_move, fixtures, random_diagram, Move, Sign};

    fn mu(g: &GaussDiagram, index: &[usize]) -> i64 {
        i64::try_from(milnor_mu(g, index).unwrap()).unwrap()
    }

    fn plus_1_to_2() -> GaussDiagram {
        GaussDiagram::parse("gd 2\narrow + 1.1 2.1\n").unwrap()
    }

    #[test]
    fn longitude_examples() {
        for l in longitudes(&GaussDiagram::empty(3), 3).unwrap() {
            assert!(l.word.is_empty());
        }
        let ls = longitudes(&plus_1_to_2(), 2).unwrap();
        assert!(ls[0].word.is_empty());
        assert_eq!(ls[1].word, Word::parse(2, "x1").unwrap());
        for n in 0..4 {
            let ls = longitudes(&fixtures::hopf_power(n), 2).unwrap();
            let expected = Word::generator_pow(2, 2, -(n as i64)).unwrap();
            assert!(crate::freegroup::lcs_equal(&ls[0].word, &expected, 2).unwrap());
        }
    }

    #[test]
    fn framing_is_zero() {
        for seed in 0..30 {
            let g = random_diagram(3, 6, seed);
            for l in longitudes(&g, 3).unwrap() {
                assert_eq!(l.word.exponent_sum(l.strand), 0);
            }
        }
    }

    #[test]
    fn series_route_matches_words() {
        for seed in 0..30 {
            let g = random_diagram(3, 5, seed);
            for depth in 2..=4 {
                let words = longitudes(&g, depth).unwrap();
                let series = longitude_series(&g, depth).unwrap();
                for (l, s) in words.iter().zip(&series) {
                    assert_eq!(&l.word.magnus(depth - 1), s, "seed {seed} depth {depth}");
                }
            }
        }
    }

    #[test]
    fn mu_examples() {
        assert_eq!(mu(&GaussDiagram::empty(3), &[1, 2, 3]), 0);
        assert_eq!(mu(&plus_1_to_2(), &[1, 2]), 1);
        assert_eq!(mu(&plus_1_to_2(), &[2, 1]), 0);
        let b = fixtures::brunnian();
        assert_eq!(mu(&b, &[1, 2, 3]), -1);
        assert_eq!(mu(&b, &[2, 1, 3]), 1);
        assert!(milnor_mu(&b, &[]).is_err());
        assert!(milnor_mu(&b, &[1, 4]).is_err());
    }

    #[test]
    fn universal_examples() {
        assert!(universal_milnor(&GaussDiagram::empty(2), 2).unwrap().values().all(|c| c.is_zero()));
        let h3 = universal_milnor(&fixtures::hopf_power(3), 1).unwrap();
        let nonzero: Vec<_> = h3.iter().filter(|(_, c)| !c.is_zero()).collect();
        assert_eq!(nonzero, vec![(&(1, vec![2]), &BigInt::from(-3))]);
        let b = universal_milnor(&fixtures::brunnian(), 2).unwrap();
        let nonzero: BTreeMap<_, _> = b.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        assert_eq!(nonzero.len(), 2);
        assert_eq!(nonzero[&(3, vec![1, 2])], -nonzero[&(3, vec![2, 1])].clone());
    }

    #[test]
    fn filtration_examples() {
        assert_eq!(milnor_filtration_order(&GaussDiagram::empty(3), 4).unwrap(), FiltrationOrder::AtLeast(4));
        assert_eq!(milnor_filtration_order(&plus_1_to_2(), 4).unwrap(), FiltrationOrder::Exact(2));
        assert_eq!(milnor_filtration_order(&fixtures::brunnian(), 5).unwrap(), FiltrationOrder::Exact(3));
        assert_eq!(FiltrationOrder::AtLeast(4).to_string(), "≥ 4");
    }

    /// Framing on the right, as an alternative convention.
    fn right_framed(g: &GaussDiagram, depth: usize) -> Vec<TruncatedSeries> {
        let n = g.strand_count();
        raw_longitudes(g, depth)
            .unwrap()
            .into_iter()
            .enumerate()
            .map(|(i, raw)| {
                let correction = Word::generator_pow(n, i + 1, -raw.exponent_sum(i + 1)).unwrap();
                raw.multiply(&correction).unwrap().magnus(depth - 1)
            })
            .collect()
    }

    #[test]
    fn left_and_right_framing_agree_away_from_the_strand() {
        for seed in 0..40 {
            let g = random_diagram(3, 6, seed);
            let depth = 3;
            let left = longitude_series(&g, depth).unwrap();
            let right = right_framed(&g, depth);
            for j in 1..=3 {
                for prefix in (1..depth).flat_map(|m| sequences(3, m)) {
                    if !prefix.contains(&j) {
                        assert_eq!(left[j - 1].coefficient(&prefix), right[j - 1].coefficient(&prefix));
                    }
                }
            }
        }
    }

    #[test]
    fn right_framing_is_not_r1_invariant() {
        // a kink on strand 1 changes right-framed coefficients of X1X2 on λ1
        let g = GaussDiagram::parse("gd 2\narrow + 2.1 1.1\n").unwrap();
        let kinked = apply_move(&g, &Move::R1Add { strand: 1, rank: 1, sign: Sign::Pos, head_first: false }).unwrap();
        let index = [1, 2, 1];
        assert_eq!(milnor_mu(&g, &index).unwrap(), milnor_mu(&kinked, &index).unwrap());
        assert_ne!(right_framed(&g, 3)[0].coefficient(&[1, 2]), right_framed(&kinked, 3)[0].coefficient(&[1, 2]));
    }
}
