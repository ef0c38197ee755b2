//! Free group words and the Magnus expansion.
//!
//! Generators are numbered `x1..xn` (1-based). Conjugation is `x^g = g⁻¹·x·g`
//! and the commutator is `[a;b] = a⁻¹·b⁻¹·a·b`, so that
//! `E([x1;x2]) = 1 + X1X2 − X2X1 + …`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{check_rank, Error, Result};

/// A signed generator `x_gen^exp` with `exp = ±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub exp: i8,
}

impl Letter {
    pub fn new(gen: usize, exp: i8) -> Self {
        debug_assert!(exp == 1 || exp == -1);
        Letter { gen, exp }
    }

    pub fn inverse(self) -> Self {
        Letter { gen: self.gen, exp: -self.exp }
    }
}

/// A freely reduced word in the free group `F_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

impl Word {
    /// Freely reduces `letters`; fails if a generator index is outside `1..=rank`.
    pub fn reduce(rank: usize, letters: impl IntoIterator<Item = Letter>) -> Result<Word> {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if l.gen == 0 || l.gen > rank {
                return Err(Error::Malformed(format!("generator x{} not in F_{rank}", l.gen)));
            }
            if l.exp != 1 && l.exp != -1 {
                return Err(Error::Malformed(format!("exponent {} is not ±1", l.exp)));
            }
            push_reduced(&mut out, l);
        }
        Ok(Word { rank, letters: out })
    }

    pub(crate) fn from_reduced_unchecked(rank: usize, letters: Vec<Letter>) -> Word {
        Word { rank, letters }
    }

    pub fn identity(rank: usize) -> Word {
        Word { rank, letters: Vec::new() }
    }

    pub fn generator(rank: usize, gen: usize) -> Result<Word> {
        Word::reduce(rank, [Letter::new(gen, 1)])
    }

    /// `x_gen^power`.
    pub fn generator_pow(rank: usize, gen: usize, power: i64) -> Result<Word> {
        let exp = if power < 0 { -1 } else { 1 };
        Word::reduce(rank, (0..power.unsigned_abs()).map(|_| Letter::new(gen, exp)))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn multiply(&self, other: &Word) -> Result<Word> {
        check_rank(self.rank, other.rank)?;
        let mut out = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut out, l);
        }
        Ok(Word { rank: self.rank, letters: out })
    }

    pub fn invert(&self) -> Word {
        Word { rank: self.rank, letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    /// `self^g = g⁻¹·self·g`.
    pub fn conjugate(&self, g: &Word) -> Result<Word> {
        g.invert().multiply(self)?.multiply(g)
    }

    /// `[self;other] = self⁻¹·other⁻¹·self·other`.
    pub fn commutator(&self, other: &Word) -> Result<Word> {
        self.invert().multiply(&other.invert())?.multiply(self)?.multiply(other)
    }

    pub fn pow(&self, power: i64) -> Word {
        let base = if power < 0 { self.invert() } else { self.clone() };
        let mut out = Vec::new();
        for _ in 0..power.unsigned_abs() {
            for &l in &base.letters {
                push_reduced(&mut out, l);
            }
        }
        Word { rank: self.rank, letters: out }
    }

    /// Signed number of occurrences of `x_gen`.
    pub fn exponent_sum(&self, gen: usize) -> i64 {
        self.letters.iter().filter(|l| l.gen == gen).map(|l| l.exp as i64).sum()
    }

    /// Deletes every occurrence of `x_gen^{±1}` and reduces.
    pub fn strip_generator(&self, gen: usize) -> Word {
        let mut out = Vec::new();
        for &l in self.letters.iter().filter(|l| l.gen != gen) {
            push_reduced(&mut out, l);
        }
        Word { rank: self.rank, letters: out }
    }

    /// Same letters, viewed in a free group of larger (or equal) rank.
    pub fn with_rank(&self, rank: usize) -> Result<Word> {
        Word::reduce(rank, self.letters.iter().copied())
    }

    /// Magnus expansion truncated above `degree`.
    pub fn magnus(&self, degree: usize) -> TruncatedSeries {
        let mut s = TruncatedSeries::one(self.rank, degree);
        for &l in &self.letters {
            s.mul_letter_right(l);
        }
        s
    }

    /// Parses the whitespace-separated `xK` / `xK^-1` syntax. The empty string is the identity.
    pub fn parse(rank: usize, text: &str) -> Result<Word> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            letters.push(parse_letter(tok)?);
        }
        Word::reduce(rank, letters)
    }
}

fn parse_letter(tok: &str) -> Result<Letter> {
    let bad = || Error::Malformed(format!("bad word token `{tok}`"));
    let body = tok.strip_prefix('x').ok_or_else(bad)?;
    let (num, exp) = match body.split_once('^') {
        Some((num, "-1")) => (num, -1),
        Some((num, "1")) => (num, 1),
        Some(_) => return Err(bad()),
        None => (body, 1),
    };
    if num.is_empty() || !num.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let gen: usize = num.parse().map_err(|_| bad())?;
    Ok(Letter::new(gen, exp))
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    match out.last() {
        Some(&last) if last.gen == l.gen && last.exp == -l.exp => {
            out.pop();
        }
        _ => out.push(l),
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            if l.exp == 1 {
                write!(f, "x{}", l.gen)?;
            } else {
                write!(f, "x{}^-1", l.gen)?;
            }
        }
        Ok(())
    }
}

/// True iff `a = b` in `F_n / Γ_k F_n`.
pub fn lcs_equal(a: &Word, b: &Word, k: usize) -> Result<bool> {
    check_rank(a.rank, b.rank)?;
    if k <= 1 {
        return Ok(true);
    }
    Ok(a.multiply(&b.invert())?.magnus(k - 1).is_one())
}

/// A monomial `X_{i_1}⋯X_{i_m}` stored as its (1-based) index sequence.
pub type Monomial = Vec<u16>;

/// Element of `ℤ⟨⟨X_1,…,X_n⟩⟩` modulo monomials of degree `> degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    rank: usize,
    degree: usize,
    coeffs: BTreeMap<Monomial, BigInt>,
}

impl TruncatedSeries {
    pub fn zero(rank: usize, degree: usize) -> Self {
        TruncatedSeries { rank, degree, coeffs: BTreeMap::new() }
    }

    pub fn one(rank: usize, degree: usize) -> Self {
        let mut s = Self::zero(rank, degree);
        s.coeffs.insert(Vec::new(), BigInt::one());
        s
    }

    /// Builds a series from explicit coefficients; longer monomials are dropped.
    pub fn from_terms<I>(rank: usize, degree: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<usize>, i64)>,
    {
        let mut s = Self::zero(rank, degree);
        for (m, c) in terms {
            if m.len() <= degree {
                s.add_term(m.iter().map(|&i| i as u16).collect(), BigInt::from(c));
            }
        }
        s
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> usize {
        self.degree
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

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(m.clone()).or_default();
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&m);
        }
    }

    /// Degree-`d` homogeneous part.
    pub fn homogeneous(&self, d: usize) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.coeffs.iter().filter(move |(m, _)| m.len() == d)
    }

    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        check_rank(self.rank, other.rank)?;
        let degree = self.degree.min(other.degree);
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m1, c1) in &self.coeffs {
            for (m2, c2) in &other.coeffs {
                if m1.len() + m2.len() > degree {
                    continue;
                }
                let mut m = m1.clone();
                m.extend_from_slice(m2);
                *acc.entry(m).or_default() += c1 * c2;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(TruncatedSeries { rank: self.rank, degree, coeffs: acc })
    }

    /// Multiplicative inverse; requires constant term 1.
    pub fn inverse(&self) -> Result<TruncatedSeries> {
        if !self.coeffs.get(&Vec::new()).is_some_and(|c| c.is_one()) {
            return Err(Error::Malformed("series inverse needs constant term 1".into()));
        }
        // 1/(1+N) = Σ (−N)^k
        let mut neg = self.clone();
        neg.coeffs.remove(&Vec::new());
        for c in neg.coeffs.values_mut() {
            *c = -c.clone();
        }
        let mut result = TruncatedSeries::one(self.rank, self.degree);
        let mut power = TruncatedSeries::one(self.rank, self.degree);
        for _ in 0..self.degree {
            power = power.mul(&neg)?;
            if power.coeffs.is_empty() {
                break;
            }
            for (m, c) in &power.coeffs {
                result.add_term(m.clone(), c.clone());
            }
        }
        Ok(result)
    }

    /// `self ← self · E(l)`.
    pub(crate) fn mul_letter_right(&mut self, l: Letter) {
        let g = l.gen as u16;
        let mut acc = self.coeffs.clone();
        for (m, c) in &self.coeffs {
            // E(x)^{+1} = 1 + X ; E(x)^{-1} = Σ (−1)^k X^k
            let max_k = if l.exp == 1 { 1 } else { self.degree.saturating_sub(m.len()) };
            let mut key = m.clone();
            for k in 1..=max_k {
                if m.len() + k > self.degree {
                    break;
                }
                key.push(g);
                let term = if l.exp == -1 && k % 2 == 1 { -c.clone() } else { c.clone() };
                *acc.entry(key.clone()).or_default() += term;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        self.coeffs = acc;
    }

    /// Largest absolute coefficient, for diagnostics.
    pub fn max_abs_coefficient(&self) -> BigInt {
        self.coeffs.values().map(|c| c.abs()).max().unwrap_or_default()
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut terms: Vec<_> = self.coeffs.iter().collect();
        terms.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then(a.0.cmp(b.0)));
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let mono: String = m.iter().map(|i| format!("X{i}")).collect();
            let neg = c.is_negative();
            if k > 0 {
                f.write_str(if neg { " - " } else { " + " })?;
            } else if neg {
                f.write_str("-")?;
            }
            let a = c.abs();
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{a}{mono}")?;
            }
        }
        Ok(())
    }
}
