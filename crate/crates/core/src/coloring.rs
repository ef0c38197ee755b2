//! Tail intervals, the coloring of a diagram by the reduced free group, the
//! automorphism it induces, the inverse construction, and Wirtinger
//! presentations.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::freegroup::{Letter, Word};
use crate::gauss::{Arrow, GaussDiagram, Sign, Slot};
use crate::reduced::{canonical_word, rf_equal, ConjAut, MultilinearPoly};

/// A maximal piece of strand between consecutive heads or strand endpoints.
/// `rank` counts heads below it, so rank 0 holds the bottom endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TailInterval {
    pub strand: usize,
    pub rank: usize,
}

impl TailInterval {
    pub fn new(strand: usize, rank: usize) -> Self {
        TailInterval { strand, rank }
    }
}

impl fmt::Display for TailInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}.{}", self.strand, self.rank)
    }
}

/// The Wirtinger data attached to one head.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeadData {
    /// Index into `GaussDiagram::arrows`.
    pub arrow: usize,
    pub sign: Sign,
    pub minus: TailInterval,
    pub plus: TailInterval,
    pub zero: TailInterval,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Intervals {
    /// Intervals per strand, i.e. head count plus one.
    pub counts: Vec<usize>,
    /// Heads strand by strand, bottom to top.
    pub heads: Vec<HeadData>,
}

impl Intervals {
    pub fn all(&self) -> impl Iterator<Item = TailInterval> + '_ {
        self.counts.iter().enumerate().flat_map(|(s, &c)| (0..c).map(move |r| TailInterval::new(s + 1, r)))
    }

    pub fn bottom(&self, strand: usize) -> TailInterval {
        TailInterval::new(strand, 0)
    }

    pub fn top(&self, strand: usize) -> TailInterval {
        TailInterval::new(strand, self.counts[strand - 1] - 1)
    }
}

pub fn tail_intervals(g: &GaussDiagram) -> Intervals {
    let n = g.strand_count();
    let mut head_ranks: Vec<Vec<usize>> = vec![Vec::new(); n];
    for a in g.arrows() {
        head_ranks[a.head.strand - 1].push(a.head.rank);
    }
    for v in &mut head_ranks {
        v.sort_unstable();
    }
    let interval_of = |s: Slot| {
        let below = head_ranks[s.strand - 1].partition_point(|&r| r < s.rank);
        TailInterval::new(s.strand, below)
    };
    let mut heads: Vec<HeadData> = g
        .arrows()
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let minus = interval_of(a.head);
            HeadData {
                arrow: k,
                sign: a.sign,
                minus,
                plus: TailInterval::new(minus.strand, minus.rank + 1),
                zero: interval_of(a.tail),
            }
        })
        .collect();
    heads.sort_by_key(|h| h.minus);
    Intervals { counts: head_ranks.iter().map(|v| v.len() + 1).collect(), heads }
}

/// Conjugators `K_T` with `ξ(T) = x_s^{K_T}`, as reduced expansions free of `X_s`.
pub(crate) fn conjugator_polys(g: &GaussDiagram) -> Result<(Intervals, BTreeMap<TailInterval, MultilinearPoly>)> {
    let n = g.strand_count();
    let iv = tail_intervals(g);
    let mut k: BTreeMap<TailInterval, MultilinearPoly> = iv.all().map(|t| (t, MultilinearPoly::one(n))).collect();
    let mut stable = false;
    for _ in 0..=n {
        let mut changed = false;
        for h in &iv.heads {
            let next = relation_rhs(&k, h)?;
            if k[&h.plus] != next {
                k.insert(h.plus, next);
                changed = true;
            }
        }
        if !changed {
            stable = true;
            break;
        }
    }
    if !stable {
        return Err(Error::Internal("coloring did not stabilise".into()));
    }
    Ok((iv, k))
}

/// Conjugator of `T_h⁺` forced by `T_h⁺ = (T_h⁻)^{(T_h⁰)^ε}`.
fn relation_rhs(k: &BTreeMap<TailInterval, MultilinearPoly>, h: &HeadData) -> Result<MultilinearPoly> {
    let k0 = &k[&h.zero];
    let mut core = MultilinearPoly::one(k0.rank());
    core.mul_letter_right(Letter::new(h.zero.strand, h.sign.value()));
    let c = k0.inverse()?.mul(&core)?.mul(k0)?;
    Ok(k[&h.minus].mul(&c)?.kill_generator(h.minus.strand))
}

/// An assignment of group elements to tail intervals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorMap {
    rank: usize,
    colors: BTreeMap<TailInterval, Word>,
}

impl ColorMap {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, t: TailInterval) -> Option<&Word> {
        self.colors.get(&t)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TailInterval, &Word)> {
        self.colors.iter()
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }
}

/// The unique coloring by `RF_n`, with every relation re-checked on words.
pub fn color(g: &GaussDiagram) -> Result<ColorMap> {
    let n = g.strand_count();
    let (iv, k) = conjugator_polys(g)?;
    let mut colors = BTreeMap::new();
    for (t, p) in &k {
        let x = Word::generator(n, t.strand)?;
        colors.insert(*t, x.conjugate(&canonical_word(p)?)?);
    }
    for i in 1..=n {
        if !rf_equal(&colors[&iv.bottom(i)], &Word::generator(n, i)?)? {
            return Err(Error::Internal(format!("bottom color of strand {i} is not x{i}")));
        }
    }
    for h in &iv.heads {
        let rhs = colors[&h.minus].conjugate(&colors[&h.zero].pow(h.sign.value() as i64))?;
        if !rf_equal(&colors[&h.plus], &rhs)? {
            return Err(Error::Internal(format!("coloring relation fails at {}", h.plus)));
        }
    }
    Ok(ColorMap { rank: n, colors })
}

/// `x_i ↦ ξ(T_i⁺)`.
pub fn phi_g_to_a(g: &GaussDiagram) -> Result<ConjAut> {
    let n = g.strand_count();
    let (iv, mut k) = conjugator_polys(g)?;
    let tops = (1..=n).map(|i| k.remove(&iv.top(i)).expect("every strand has a top interval")).collect();
    ConjAut::from_polys(n, tops)
}

/// An ascending diagram realising `f`: one arrow per conjugator letter, head at
/// the top of its strand and tail at the bottom of the letter's strand.
pub fn phi_a_to_g(f: &ConjAut) -> GaussDiagram {
    let n = f.rank();
    let mut tails: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut heads: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut signs = Vec::new();
    for i in 1..=n {
        for l in f.conjugator(i).word().letters() {
            let a = signs.len();
            signs.push(Sign::from_value(l.exp));
            heads[i - 1].push(a);
            tails[l.gen - 1].insert(0, a);
        }
    }
    let mut tail_slot = vec![Slot::new(0, 0); signs.len()];
    let mut head_slot = vec![Slot::new(0, 0); signs.len()];
    for s in 0..n {
        for (r, &a) in tails[s].iter().enumerate() {
            tail_slot[a] = Slot::new(s + 1, r + 1);
        }
        for (r, &a) in heads[s].iter().enumerate() {
            head_slot[a] = Slot::new(s + 1, tails[s].len() + r + 1);
        }
    }
    let arrows = (0..signs.len()).map(|a| Arrow::new(signs[a], tail_slot[a], head_slot[a])).collect();
    GaussDiagram::unchecked(n, arrows)
}

/// The coloring by the free group of a horizontal diagram, processing arrows
/// in their global order.
pub fn fn_color(g: &GaussDiagram) -> Result<ColorMap> {
    let order = g.horizontal_order().ok_or(Error::NotHorizontal)?;
    let n = g.strand_count();
    let mut current: Vec<Word> = (1..=n).map(|i| Word::generator(n, i)).collect::<Result<_>>()?;
    let mut heads_seen = vec![0usize; n];
    let mut colors = BTreeMap::new();
    for i in 1..=n {
        colors.insert(TailInterval::new(i, 0), current[i - 1].clone());
    }
    for a in order {
        let arrow = g.arrows()[a];
        let (s0, s) = (arrow.tail.strand - 1, arrow.head.strand - 1);
        let conj = current[s0].pow(arrow.sign.value() as i64);
        current[s] = current[s].conjugate(&conj)?;
        heads_seen[s] += 1;
        colors.insert(TailInterval::new(s + 1, heads_seen[s]), current[s].clone());
    }
    Ok(ColorMap { rank: n, colors })
}

/// One Wirtinger relation `lhs = base^{conj^sign}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub lhs: String,
    pub base: String,
    pub conj: String,
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relations: Vec<Relation>,
}

impl Presentation {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data")
    }
}

fn superscript(label: &str) -> String {
    match label.split_once('^') {
        Some((stem, "0")) => format!("{stem}⁰"),
        Some((stem, "1")) => format!("{stem}¹"),
        _ => label.to_string(),
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| superscript(g)).collect();
        write!(f, "⟨{} |", gens.join(", "))?;
        let rels: Vec<String> = self
            .relations
            .iter()
            .map(|r| {
                let conj = superscript(&r.conj);
                let exponent = if r.sign < 0 { format!("({conj})⁻¹") } else { conj };
                format!("{} = ({})^{{{exponent}}}", superscript(&r.lhs), superscript(&r.base))
            })
            .collect();
        if !rels.is_empty() {
            write!(f, " {}", rels.join(", "))?;
        }
        f.write_str("⟩")
    }
}

fn interval_label(iv: &Intervals, t: TailInterval) -> String {
    if t.rank == 0 {
        format!("m_{}^0", t.strand)
    } else if t == iv.top(t.strand) {
        format!("m_{}^1", t.strand)
    } else {
        t.to_string()
    }
}

/// Generators are the tail intervals; there is one relation per head.
pub fn pi1_presentation(g: &GaussDiagram) -> Presentation {
    let iv = tail_intervals(g);
    Presentation {
        generators: iv.all().map(|t| interval_label(&iv, t)).collect(),
        relations: iv
            .heads
            .iter()
            .map(|h| Relation {
                lhs: interval_label(&iv, h.plus),
                base: interval_label(&iv, h.minus),
                conj: interval_label(&iv, h.zero),
                sign: h.sign.value(),
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::{fixtures, random_diagram};
    use crate::reduced::{aut_equal, compose};

    fn w(n: usize, s: &str) -> Word {
        Word::parse(n, s).unwrap()
    }

    fn aut(n: usize, gs: &[&str]) -> ConjAut {
        ConjAut::new(n, gs.iter().map(|s| w(n, s)).collect()).unwrap()
    }

    fn plus_arrow() -> GaussDiagram {
        GaussDiagram::parse("gd 2\narrow + 2.1 1.1\n").unwrap()
    }

    #[test]
    fn intervals_of_hopf() {
        let iv = tail_intervals(&fixtures::hopf());
        assert_eq!(iv.counts, vec![2, 1]);
        assert_eq!(iv.heads.len(), 1);
        let h = iv.heads[0];
        assert_eq!(
            (h.minus, h.plus, h.zero),
            (TailInterval::new(1, 0), TailInterval::new(1, 1), TailInterval::new(2, 0))
        );
        let e = tail_intervals(&GaussDiagram::empty(3));
        assert_eq!(e.counts, vec![1, 1, 1]);
        assert_eq!(e.top(2), e.bottom(2));
    }

    #[test]
    fn color_examples() {
        let c = color(&GaussDiagram::empty(2)).unwrap();
        assert_eq!(c.get(TailInterval::new(2, 0)), Some(&w(2, "x2")));
        let h = color(&fixtures::hopf()).unwrap();
        assert!(rf_equal(h.get(TailInterval::new(1, 1)).unwrap(), &w(2, "x2 x1 x2^-1")).unwrap());
        let p = color(&plus_arrow()).unwrap();
        assert!(rf_equal(p.get(TailInterval::new(1, 1)).unwrap(), &w(2, "x2^-1 x1 x2")).unwrap());
    }

    #[test]
    fn phi_examples() {
        assert!(phi_g_to_a(&GaussDiagram::empty(3)).unwrap().is_identity());
        for k in 0..5 {
            let f = phi_g_to_a(&fixtures::hopf_power(k)).unwrap();
            let expected = aut(2, &[&Word::generator_pow(2, 2, -(k as i64)).unwrap().to_string(), ""]);
            assert!(aut_equal(&f, &expected).unwrap(), "k = {k}: {f}");
        }
        let b = phi_g_to_a(&fixtures::brunnian()).unwrap();
        assert!(aut_equal(&b, &aut(3, &["", "", "x2 x1 x2^-1 x1^-1"])).unwrap());
    }

    #[test]
    fn remark_ascending_example() {
        let f = aut(3, &["x2 x3^-1", "x1", "x2^-1"]);
        let g = phi_a_to_g(&f);
        assert!(g.is_ascending());
        assert_eq!(g.arrow_count(), 4);
        assert!(aut_equal(&phi_g_to_a(&g).unwrap(), &f).unwrap());
    }

    #[test]
    fn eta_examples() {
        assert_eq!(phi_a_to_g(&ConjAut::identity(3)), GaussDiagram::empty(3));
        let one = phi_a_to_g(&aut(2, &["x2", ""]));
        assert_eq!(one, plus_arrow());
        let b = phi_a_to_g(&aut(3, &["", "", "x2 x1 x2^-1 x1^-1"]));
        assert!(b.is_ascending());
        assert!(aut_equal(&phi_g_to_a(&b).unwrap(), &phi_g_to_a(&fixtures::brunnian()).unwrap()).unwrap());
    }

    /// Conjugator of `x_i` read off an ascending diagram: the heads on strand
    /// `i` from bottom to top, each contributing its tail's generator.
    fn ascending_rule(g: &GaussDiagram, i: usize) -> Word {
        let mut heads: Vec<&Arrow> = g.arrows().iter().filter(|a| a.head.strand == i).collect();
        heads.sort_by_key(|a| a.head.rank);
        let letters = heads.iter().map(|a| Letter::new(a.tail.strand, a.sign.value()));
        Word::reduce(g.strand_count(), letters).unwrap()
    }

    #[test]
    fn ascending_rule_matches_phi() {
        for seed in 0..100 {
            let g = crate::gauss::ascending_form(&random_diagram(3, 5, seed)).unwrap();
            let f = phi_g_to_a(&g).unwrap();
            let direct = ConjAut::new(3, (1..=3).map(|i| ascending_rule(&g, i)).collect()).unwrap();
            assert!(aut_equal(&f, &direct).unwrap(), "seed {seed}");
        }
    }

    #[test]
    fn hopf_presentation() {
        let p = pi1_presentation(&fixtures::hopf());
        assert_eq!(p.to_string(), "⟨m_1⁰, m_1¹, m_2⁰ | m_1¹ = (m_1⁰)^{(m_2⁰)⁻¹}⟩");
        assert_eq!(
            p.to_json(),
            serde_json::json!({
                "generators": ["m_1^0", "m_1^1", "m_2^0"],
                "relations": [{"lhs": "m_1^1", "base": "m_1^0", "conj": "m_2^0", "sign": -1}]
            })
        );
        assert_eq!(pi1_presentation(&GaussDiagram::empty(2)).to_string(), "⟨m_1⁰, m_2⁰ |⟩");
        assert_eq!(pi1_presentation(&plus_arrow()).relations[0].sign, 1);
    }

    #[test]
    fn fn_color_examples() {
        let e = fn_color(&GaussDiagram::empty(2)).unwrap();
        assert_eq!(e.len(), 2);
        let p = fn_color(&plus_arrow()).unwrap();
        assert_eq!(p.get(TailInterval::new(1, 1)), Some(&w(2, "x2^-1 x1 x2")));
        assert_eq!(fn_color(&fixtures::brunnian()), Err(Error::NotHorizontal));
        let two = GaussDiagram::parse("gd 3\narrow + 2.1 1.1\narrow - 1.2 3.1\n").unwrap();
        let free = fn_color(&two).unwrap();
        let reduced = color(&two).unwrap();
        for (t, word) in free.iter() {
            assert!(rf_equal(word, reduced.get(*t).unwrap()).unwrap());
        }
    }

    #[test]
    fn homomorphism_and_round_trip() {
        for seed in 0..40 {
            let a = random_diagram(3, 4, seed);
            let b = random_diagram(3, 4, seed + 1000);
            let fa = phi_g_to_a(&a).unwrap();
            let lhs = phi_g_to_a(&a.stack(&b).unwrap()).unwrap();
            assert!(aut_equal(&lhs, &compose(&fa, &phi_g_to_a(&b).unwrap()).unwrap()).unwrap());
            assert!(aut_equal(&phi_g_to_a(&phi_a_to_g(&fa)).unwrap(), &fa).unwrap());
            let c = color(&a).unwrap();
            for (t, word) in c.iter() {
                assert_eq!(word.exponent_sum(t.strand), 1);
            }
        }
    }
}
