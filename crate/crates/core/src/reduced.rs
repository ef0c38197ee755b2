//! The reduced free group `RF_n` and its conjugating automorphisms.
//!
//! Equality in `RF_n` is decided by the multilinear Magnus expansion: the
//! ordinary expansion with every monomial that repeats an index deleted.
//! `RF_n` is nilpotent of class at most `n`, so only multilinear degrees
//! `0..=n` carry information. Injectivity of this map on `RF_n` is assumed
//! (it rests on nilpotency plus injectivity on each lower central quotient);
//! the fuzzing suites would surface a counterexample as a failed round trip.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_rank, Error, Result};
use crate::freegroup::{Letter, Monomial, Word};

/// Image of an element of `RF_n` in `ℤ⟨X_1,…,X_n⟩` modulo repeated-index monomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultilinearPoly {
    rank: usize,
    coeffs: BTreeMap<Monomial, BigInt>,
}

fn mask(m: &[u16]) -> u128 {
    m.iter().fold(0u128, |acc, &i| acc | (1u128 << i))
}

fn has_repeat(m: &[u16]) -> bool {
    let mut seen = 0u128;
    for &i in m {
        let bit = 1u128 << i;
        if seen & bit != 0 {
            return true;
        }
        seen |= bit;
    }
    false
}

impl MultilinearPoly {
    pub fn one(rank: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(Vec::new(), BigInt::one());
        MultilinearPoly { rank, coeffs }
    }

    /// Builds a polynomial from explicit terms. Fails on a repeated index.
    pub fn from_terms<I>(rank: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, i64)>,
    {
        let mut coeffs: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m, c) in terms {
            let key: Monomial = m.iter().map(|&i| i as u16).collect();
            if has_repeat(&key) {
                return Err(Error::Malformed(format!("monomial {m:?} repeats an index")));
            }
            if m.iter().any(|&i| i == 0 || i > rank) {
                return Err(Error::Malformed(format!("monomial {m:?} out of rank {rank}")));
            }
            *coeffs.entry(key).or_default() += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(MultilinearPoly { rank, coeffs })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.coeffs.iter()
    }

    pub fn coefficient(&self, monomial: &[usize]) -> BigInt {
        let key: Monomial = monomial.iter().map(|&i| i as u16).collect();
        self.coeffs.get(&key).cloned().unwrap_or_default()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&Vec::new()).is_some_and(|c| c.is_one())
    }

    pub(crate) fn check_structure(&self) -> bool {
        self.coeffs.keys().all(|m| !has_repeat(m) && m.len() <= self.rank)
    }

    /// `self ← self·E(l)`.
    pub(crate) fn mul_letter_right(&mut self, l: Letter) {
        let g = l.gen as u16;
        let bit = 1u128 << g;
        let additions: Vec<(Monomial, BigInt)> = self
            .coeffs
            .iter()
            .filter(|(m, _)| mask(m) & bit == 0)
            .map(|(m, c)| {
                let mut k = m.clone();
                k.push(g);
                (k, if l.exp == 1 { c.clone() } else { -c.clone() })
            })
            .collect();
        self.absorb(additions);
    }

    /// `self ← E(l)·self`.
    fn mul_letter_left(&mut self, l: Letter) {
        let g = l.gen as u16;
        let bit = 1u128 << g;
        let additions: Vec<(Monomial, BigInt)> = self
            .coeffs
            .iter()
            .filter(|(m, _)| mask(m) & bit == 0)
            .map(|(m, c)| {
                let mut k = Vec::with_capacity(m.len() + 1);
                k.push(g);
                k.extend_from_slice(m);
                (k, if l.exp == 1 { c.clone() } else { -c.clone() })
            })
            .collect();
        self.absorb(additions);
    }

    fn absorb(&mut self, additions: Vec<(Monomial, BigInt)>) {
        for (k, c) in additions {
            let e = self.coeffs.entry(k.clone()).or_default();
            *e += c;
            if e.is_zero() {
                self.coeffs.remove(&k);
            }
        }
    }

    pub fn mul(&self, other: &MultilinearPoly) -> Result<MultilinearPoly> {
        check_rank(self.rank, other.rank)?;
        let rhs: Vec<(u128, &Monomial, &BigInt)> = other.coeffs.iter().map(|(m, c)| (mask(m), m, c)).collect();
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m1, c1) in &self.coeffs {
            let k1 = mask(m1);
            for &(k2, m2, c2) in &rhs {
                if k1 & k2 != 0 {
                    continue;
                }
                let mut m = m1.clone();
                m.extend_from_slice(m2);
                *acc.entry(m).or_default() += c1 * c2;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        let product = MultilinearPoly { rank: self.rank, coeffs: acc };
        debug_assert!(product.check_structure());
        Ok(product)
    }

    /// Inverse of a group-element image (constant term 1).
    pub fn inverse(&self) -> Result<MultilinearPoly> {
        if !self.coeffs.get(&Vec::new()).is_some_and(|c| c.is_one()) {
            return Err(Error::Malformed("inverse needs constant term 1".into()));
        }
        let mut neg = self.clone();
        neg.coeffs.remove(&Vec::new());
        for c in neg.coeffs.values_mut() {
            *c = -c.clone();
        }
        let mut result = MultilinearPoly::one(self.rank);
        let mut power = MultilinearPoly::one(self.rank);
        for _ in 0..self.rank {
            power = power.mul(&neg)?;
            if power.coeffs.is_empty() {
                break;
            }
            for (m, c) in power.coeffs.iter() {
                let e = result.coeffs.entry(m.clone()).or_default();
                *e += c;
            }
            result.coeffs.retain(|_, c| !c.is_zero());
        }
        Ok(result)
    }

    /// Sets `X_gen = 0`; the image of deleting `x_gen` from a word.
    pub fn kill_generator(&self, gen: usize) -> MultilinearPoly {
        let g = gen as u16;
        MultilinearPoly {
            rank: self.rank,
            coeffs: self.coeffs.iter().filter(|(m, _)| !m.contains(&g)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn mentions(&self, gen: usize) -> bool {
        let g = gen as u16;
        self.coeffs.keys().any(|m| m.contains(&g))
    }
}

impl fmt::Display for MultilinearPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<_> = self.coeffs.iter().collect();
        terms.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then(a.0.cmp(b.0)));
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let mono: String = m.iter().map(|i| format!("X{i}")).collect();
            let neg = c.is_negative();
            if k > 0 {
                f.write_str(if neg { " - " } else { " + " })?;
            } else if neg {
                f.write_str("-")?;
            }
            let a = c.abs();
            match (mono.is_empty(), a.is_one()) {
                (true, _) => write!(f, "{a}")?,
                (false, true) => f.write_str(&mono)?,
                (false, false) => write!(f, "{a}{mono}")?,
            }
        }
        Ok(())
    }
}

/// Multilinear Magnus expansion of `w`.
pub fn reduced_magnus(w: &Word) -> MultilinearPoly {
    let mut p = MultilinearPoly::one(w.rank());
    for &l in w.letters() {
        p.mul_letter_right(l);
    }
    p
}

/// True iff `a = b` in `RF_n`.
pub fn rf_equal(a: &Word, b: &Word) -> Result<bool> {
    Ok(reduced_magnus(&a.multiply(&b.invert())?).is_one())
}

/// Left-normed group commutator `[[x_a;x_b];…]`.
fn left_normed(rank: usize, gens: &[u16]) -> Word {
    let mut acc = Word::from_reduced_unchecked(rank, vec![Letter::new(gens[0] as usize, 1)]);
    for &g in &gens[1..] {
        let x = Word::from_reduced_unchecked(rank, vec![Letter::new(g as usize, 1)]);
        acc = acc.commutator(&x).expect("same rank");
    }
    acc
}

/// A short word whose multilinear expansion is `target`.
///
/// Degree by degree, the residual `E(w)⁻¹·target` is a multilinear Lie
/// element; it is written in the basis of left-normed commutators whose
/// first letter is the smallest index, read off from the monomials starting
/// with that index.
pub fn canonical_word(target: &MultilinearPoly) -> Result<Word> {
    let rank = target.rank;
    if !target.coeffs.get(&Vec::new()).is_some_and(|c| c.is_one()) {
        return Err(Error::Internal("group element image must have constant term 1".into()));
    }
    let mut residual = target.clone();
    let mut letters: Vec<Letter> = Vec::new();
    for d in 1..=rank {
        let layer: Vec<(Monomial, BigInt)> = residual
            .coeffs
            .iter()
            .filter(|(m, _)| m.len() == d && m.iter().all(|&i| i >= m[0]))
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        for (m, c) in layer {
            let power = c.to_i64().ok_or_else(|| Error::Internal("coefficient too large for a word".into()))?;
            let piece = left_normed(rank, &m).pow(power);
            // residual ← E(piece)⁻¹·residual
            for &l in piece.letters() {
                residual.mul_letter_left(l.inverse());
            }
            letters.extend_from_slice(piece.letters());
        }
        if residual.coeffs.keys().any(|m| m.len() == d) {
            return Err(Error::Internal(format!("degree-{d} residual is not a multilinear Lie element")));
        }
    }
    let w = Word::reduce(rank, letters)?;
    if reduced_magnus(&w) != *target {
        return Err(Error::Internal("canonical word does not reproduce its expansion".into()));
    }
    Ok(w)
}

/// An element of `RF_n`: a representative word with its cached expansion.
#[derive(Debug, Clone)]
pub struct ReducedElement {
    word: Word,
    poly: MultilinearPoly,
}

impl ReducedElement {
    pub fn new(word: Word) -> Self {
        let poly = reduced_magnus(&word);
        ReducedElement { word, poly }
    }

    pub fn identity(rank: usize) -> Self {
        ReducedElement::new(Word::identity(rank))
    }

    /// Element with a canonical short representative.
    pub fn from_poly(poly: MultilinearPoly) -> Result<Self> {
        let word = canonical_word(&poly)?;
        Ok(ReducedElement { word, poly })
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn expansion(&self) -> &MultilinearPoly {
        &self.poly
    }

    pub fn rf_eq(&self, other: &ReducedElement) -> bool {
        self.poly == other.poly
    }
}

impl PartialEq for ReducedElement {
    fn eq(&self, other: &Self) -> bool {
        self.rf_eq(other)
    }
}

impl Eq for ReducedElement {}

/// Deletes every `x_i^{±1}` from `g`; same conjugating action on `x_i` in `RF_n`.
pub fn rho(g: &Word, i: usize) -> ReducedElement {
    ReducedElement::new(g.strip_generator(i))
}

/// Conjugating automorphism `x_i ↦ x_i^{g_i}` of `RF_n`, with `g_i` free of `x_i`.
#[derive(Debug, Clone)]
pub struct ConjAut {
    rank: usize,
    conjugators: Vec<ReducedElement>,
}

#[derive(Serialize, Deserialize)]
struct ConjAutJson {
    n: usize,
    conjugators: Vec<String>,
}

impl ConjAut {
    pub fn identity(rank: usize) -> Self {
        ConjAut { rank, conjugators: (0..rank).map(|_| ReducedElement::identity(rank)).collect() }
    }

    /// Builds the automorphism from conjugator words, ρ-normalizing each.
    pub fn new(rank: usize, conjugators: Vec<Word>) -> Result<Self> {
        if conjugators.len() != rank {
            return Err(Error::Malformed(format!("expected {rank} conjugators, got {}", conjugators.len())));
        }
        let conjugators = conjugators
            .iter()
            .enumerate()
            .map(|(k, g)| {
                check_rank(rank, g.rank())?;
                Ok(rho(g, k + 1))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ConjAut { rank, conjugators })
    }

    pub(crate) fn from_polys(rank: usize, polys: Vec<MultilinearPoly>) -> Result<Self> {
        let conjugators = polys
            .into_iter()
            .enumerate()
            .map(|(k, p)| ReducedElement::from_poly(p.kill_generator(k + 1)))
            .collect::<Result<Vec<_>>>()?;
        Ok(ConjAut { rank, conjugators })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Conjugator of `x_i` (1-based).
    pub fn conjugator(&self, i: usize) -> &ReducedElement {
        &self.conjugators[i - 1]
    }

    pub fn conjugators(&self) -> &[ReducedElement] {
        &self.conjugators
    }

    /// `x_i^{g_i}` as a word.
    pub fn image(&self, i: usize) -> Word {
        let g = self.conjugators[i - 1].word();
        Word::from_reduced_unchecked(self.rank, vec![Letter::new(i, 1)]).conjugate(g).expect("same rank")
    }

    pub fn is_identity(&self) -> bool {
        self.conjugators.iter().all(|g| g.poly.is_one())
    }

    /// Expansion of `apply(self, w)` without building the substituted word.
    pub(crate) fn apply_poly(&self, w: &Word) -> Result<MultilinearPoly> {
        check_rank(self.rank, w.rank())?;
        let mut p = MultilinearPoly::one(self.rank);
        for &l in w.letters() {
            let g = &self.conjugators[l.gen - 1];
            let inv = g.poly.inverse()?;
            let mut piece = inv;
            piece.mul_letter_right(l);
            p = p.mul(&piece)?.mul(&g.poly)?;
        }
        Ok(p)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ConjAutJson {
            n: self.rank,
            conjugators: self.conjugators.iter().map(|g| g.word().to_string()).collect(),
        })
        .expect("plain data")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let raw: ConjAutJson =
            serde_json::from_value(value.clone()).map_err(|e| Error::Malformed(format!("automorphism JSON: {e}")))?;
        let words = raw.conjugators.iter().map(|s| Word::parse(raw.n, s)).collect::<Result<Vec<_>>>()?;
        for (k, w) in words.iter().enumerate() {
            if w.letters().iter().any(|l| l.gen == k + 1) {
                return Err(Error::Malformed(format!("conjugator {} mentions x{}", k + 1, k + 1)));
            }
        }
        ConjAut::new(raw.n, words)
    }
}

impl fmt::Display for ConjAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, g) in self.conjugators.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "x{} ↦ x{}^{{{}}}", k + 1, k + 1, g.word())?;
        }
        Ok(())
    }
}

/// Substitutes `x_i ↦ x_i^{g_i}` letterwise and reduces.
pub fn apply(f: &ConjAut, w: &Word) -> Result<Word> {
    check_rank(f.rank, w.rank())?;
    let mut letters = Vec::new();
    for &l in w.letters() {
        let g = f.conjugators[l.gen - 1].word();
        letters.extend(g.invert().letters().iter().copied());
        letters.push(l);
        letters.extend(g.letters().iter().copied());
    }
    Word::reduce(f.rank, letters)
}

/// `f ∘ g`.
pub fn compose(f: &ConjAut, g: &ConjAut) -> Result<ConjAut> {
    check_rank(f.rank, g.rank)?;
    let polys = (0..f.rank)
        .map(|k| f.conjugators[k].poly.mul(&f.apply_poly(g.conjugators[k].word())?))
        .collect::<Result<Vec<_>>>()?;
    ConjAut::from_polys(f.rank, polys)
}

pub fn aut_equal(f: &ConjAut, g: &ConjAut) -> Result<bool> {
    check_rank(f.rank, g.rank)?;
    Ok(f.conjugators.iter().zip(&g.conjugators).all(|(a, b)| a.rf_eq(b)))
}

/// Inverse in `Aut_C(RF_n)` by successive approximation.
pub fn invert_aut(f: &ConjAut) -> Result<ConjAut> {
    let n = f.rank;
    let mut candidate =
        ConjAut::from_polys(n, f.conjugators.iter().map(|g| g.poly.inverse()).collect::<Result<Vec<_>>>()?)?;
    for _ in 0..=n {
        let next_polys =
            (0..n).map(|k| candidate.apply_poly(f.conjugators[k].word())?.inverse()).collect::<Result<Vec<_>>>()?;
        let next = ConjAut::from_polys(n, next_polys)?;
        let stable = aut_equal(&next, &candidate)?;
        candidate = next;
        if stable {
            break;
        }
    }
    if compose(&candidate, f)?.is_identity() && compose(f, &candidate)?.is_identity() {
        Ok(candidate)
    } else {
        Err(Error::Internal("automorphism inversion did not converge".into()))
    }
}
