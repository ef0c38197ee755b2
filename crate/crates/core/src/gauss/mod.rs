//! Gauss diagrams of welded string links.
//!
//! Strands are numbered `1..=n` and always run upward; ranks count arrow ends
//! from the bottom of a strand starting at 1. Arrows are kept sorted by tail
//! slot, so two diagrams are equal exactly when their arrow lists are.

mod layout;
mod moves;
mod normalize;
mod random;

use std::collections::VecDeque;
use std::fmt;

use crate::error::{check_rank, Error, Result};

pub use moves::{applicable_moves, apply_move, expand_move, Move, MoveKind};
pub use normalize::{ascending_form, horizontal_form};
pub use random::random_diagram;

pub(crate) use layout::{End, Layout};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn from_value(v: i8) -> Sign {
        if v < 0 {
            Sign::Neg
        } else {
            Sign::Pos
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Pos => "+",
            Sign::Neg => "-",
        })
    }
}

/// Position of an arrow end: strand and rank, both 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slot {
    pub strand: usize,
    pub rank: usize,
}

impl Slot {
    pub fn new(strand: usize, rank: usize) -> Self {
        Slot { strand, rank }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.strand, self.rank)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arrow {
    pub sign: Sign,
    pub tail: Slot,
    pub head: Slot,
}

impl Arrow {
    pub fn new(sign: Sign, tail: Slot, head: Slot) -> Self {
        Arrow { sign, tail, head }
    }

    pub fn is_self_arrow(&self) -> bool {
        self.tail.strand == self.head.strand
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussDiagram {
    n: usize,
    arrows: Vec<Arrow>,
}

impl GaussDiagram {
    /// The trivial diagram on `n` strands.
    pub fn empty(n: usize) -> Self {
        GaussDiagram { n, arrows: Vec::new() }
    }

    /// Builds a diagram and rejects it unless it passes [`GaussDiagram::validate`].
    pub fn new(n: usize, arrows: Vec<Arrow>) -> Result<Self> {
        let g = GaussDiagram::unchecked(n, arrows);
        let problems = g.validate();
        if problems.is_empty() {
            Ok(g)
        } else {
            Err(Error::Malformed(problems.join("; ")))
        }
    }

    /// Builds a diagram without structural checks; see [`GaussDiagram::validate`].
    pub fn unchecked(n: usize, mut arrows: Vec<Arrow>) -> Self {
        arrows.sort_by_key(|a| (a.tail, a.head));
        GaussDiagram { n, arrows }
    }

    pub fn strand_count(&self) -> usize {
        self.n
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    /// Number of arrow ends on each strand.
    pub fn slot_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n];
        for a in &self.arrows {
            for s in [a.tail, a.head] {
                if (1..=self.n).contains(&s.strand) {
                    counts[s.strand - 1] += 1;
                }
            }
        }
        counts
    }

    /// Every violated structural invariant, in a human-readable form.
    pub fn validate(&self) -> Vec<String> {
        let mut problems = Vec::new();
        if self.n == 0 {
            problems.push("diagram needs at least one strand".to_string());
        }
        let counts = self.slot_counts();
        let mut seen: Vec<Vec<usize>> = counts.iter().map(|&c| vec![0; c]).collect();
        for (k, a) in self.arrows.iter().enumerate() {
            for (what, s) in [("tail", a.tail), ("head", a.head)] {
                if s.strand == 0 || s.strand > self.n {
                    problems.push(format!("arrow {}: {what} strand {} out of range 1..={}", k + 1, s.strand, self.n));
                    continue;
                }
                let m = counts[s.strand - 1];
                if s.rank == 0 || s.rank > m {
                    problems.push(format!(
                        "arrow {}: {what} rank {} on strand {} outside 1..={m}",
                        k + 1,
                        s.rank,
                        s.strand
                    ));
                    continue;
                }
                seen[s.strand - 1][s.rank - 1] += 1;
            }
        }
        for (s, ranks) in seen.iter().enumerate() {
            for (r, &c) in ranks.iter().enumerate() {
                if c > 1 {
                    problems.push(format!("slot {}.{} is shared by {c} arrow ends", s + 1, r + 1));
                }
            }
        }
        problems
    }

    pub(crate) fn layout(&self) -> Layout {
        Layout::from_diagram(self)
    }

    /// `self • other`: `other` glued on top.
    pub fn stack(&self, other: &GaussDiagram) -> Result<GaussDiagram> {
        check_rank(self.n, other.n)?;
        let offsets = self.slot_counts();
        let shift = |s: Slot| Slot::new(s.strand, s.rank + offsets[s.strand - 1]);
        let mut arrows = self.arrows.clone();
        arrows.extend(other.arrows.iter().map(|a| Arrow::new(a.sign, shift(a.tail), shift(a.head))));
        Ok(GaussDiagram::unchecked(self.n, arrows))
    }

    /// A global order of the arrows compatible with every strand, if one exists.
    pub fn horizontal_order(&self) -> Option<Vec<usize>> {
        if self.arrows.iter().any(Arrow::is_self_arrow) {
            return None;
        }
        let layout = self.layout();
        let m = self.arrows.len();
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); m];
        let mut indeg = vec![0usize; m];
        for strand in &layout.strands {
            for w in strand.windows(2) {
                succ[w[0].arrow].push(w[1].arrow);
                indeg[w[1].arrow] += 1;
            }
        }
        let mut queue: VecDeque<usize> = (0..m).filter(|&a| indeg[a] == 0).collect();
        let mut order = Vec::with_capacity(m);
        while let Some(a) = queue.pop_front() {
            order.push(a);
            for &b in &succ[a] {
                indeg[b] -= 1;
                if indeg[b] == 0 {
                    queue.push_back(b);
                }
            }
        }
        (order.len() == m).then_some(order)
    }

    pub fn is_horizontal(&self) -> bool {
        self.horizontal_order().is_some()
    }

    /// Every tail lies below every head on each strand.
    pub fn is_ascending(&self) -> bool {
        let mut max_tail = vec![0usize; self.n];
        let mut min_head = vec![usize::MAX; self.n];
        for a in &self.arrows {
            let t = &mut max_tail[a.tail.strand - 1];
            *t = (*t).max(a.tail.rank);
            let h = &mut min_head[a.head.strand - 1];
            *h = (*h).min(a.head.rank);
        }
        max_tail.iter().zip(&min_head).all(|(t, h)| t < h)
    }

    /// Removes strand `i` and every arrow touching it.
    pub fn delete_strand(&self, i: usize) -> Result<GaussDiagram> {
        if i == 0 || i > self.n {
            return Err(Error::IndexOutOfRange { index: i, max: self.n });
        }
        let mut layout = self.layout();
        let doomed: Vec<usize> = layout.strands[i - 1].iter().map(|e| e.arrow).collect();
        for a in doomed {
            layout.remove_arrow(a);
        }
        layout.strands.remove(i - 1);
        layout.n -= 1;
        Ok(layout.to_diagram())
    }

    pub fn self_arrow_count(&self) -> usize {
        self.arrows.iter().filter(|a| a.is_self_arrow()).count()
    }

    /// Renders the line-oriented text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("gd {}\n", self.n);
        for a in &self.arrows {
            out.push_str(&format!("arrow {} {} {}\n", a.sign, a.tail, a.head));
        }
        out
    }

    /// Parses the text format without structural validation.
    pub fn parse_unchecked(text: &str) -> Result<GaussDiagram> {
        let mut n: Option<usize> = None;
        let mut arrows = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| Error::Parse { line: line_no, msg: msg.to_string() };
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks[0] {
                "gd" => {
                    if n.is_some() {
                        return Err(err("duplicate `gd` header"));
                    }
                    if toks.len() != 2 {
                        return Err(err("expected `gd <n>`"));
                    }
                    let v: usize = toks[1].parse().map_err(|_| err("strand count is not a number"))?;
                    if v == 0 {
                        return Err(err("strand count must be positive"));
                    }
                    n = Some(v);
                }
                "arrow" => {
                    if n.is_none() {
                        return Err(err("`arrow` before `gd` header"));
                    }
                    if toks.len() != 4 {
                        return Err(err("expected `arrow <+|-> <s>.<r> <s>.<r>`"));
                    }
                    let sign = match toks[1] {
                        "+" => Sign::Pos,
                        "-" => Sign::Neg,
                        _ => return Err(err("sign must be `+` or `-`")),
                    };
                    let tail = parse_slot(toks[2]).ok_or_else(|| err("bad tail slot"))?;
                    let head = parse_slot(toks[3]).ok_or_else(|| err("bad head slot"))?;
                    arrows.push(Arrow::new(sign, tail, head));
                }
                other => return Err(err(&format!("unknown directive `{other}`"))),
            }
        }
        let n = n.ok_or(Error::Parse { line: 0, msg: "missing `gd <n>` header".into() })?;
        Ok(GaussDiagram::unchecked(n, arrows))
    }

    /// Parses and validates the text format.
    pub fn parse(text: &str) -> Result<GaussDiagram> {
        let g = GaussDiagram::parse_unchecked(text)?;
        let problems = g.validate();
        if problems.is_empty() {
            Ok(g)
        } else {
            Err(Error::Malformed(problems.join("; ")))
        }
    }
}

fn parse_slot(tok: &str) -> Option<Slot> {
    let (s, r) = tok.split_once('.')?;
    let digits = |x: &str| !x.is_empty() && x.bytes().all(|b| b.is_ascii_digit());
    if !digits(s) || !digits(r) {
        return None;
    }
    Some(Slot::new(s.parse().ok()?, r.parse().ok()?))
}

impl fmt::Display for GaussDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Named fixtures used throughout the tests and documentation.
pub mod fixtures {
    use super::*;

    /// One negative arrow from strand 2 to strand 1.
    pub fn hopf() -> GaussDiagram {
        GaussDiagram::unchecked(2, vec![Arrow::new(Sign::Neg, Slot::new(2, 1), Slot::new(1, 1))])
    }

    /// `k` stacked copies of [`hopf`].
    pub fn hopf_power(k: usize) -> GaussDiagram {
        let mut g = GaussDiagram::empty(2);
        for _ in 0..k {
            g = g.stack(&hopf()).expect("same strand count");
        }
        g
    }

    /// The Brunnian 3-strand diagram: four arrows into the top of strand 3
    /// spelling `x2 x1 x2⁻¹ x1⁻¹`.
    pub fn brunnian() -> GaussDiagram {
        GaussDiagram::unchecked(
            3,
            vec![
                Arrow::new(Sign::Pos, Slot::new(2, 2), Slot::new(3, 1)),
                Arrow::new(Sign::Pos, Slot::new(1, 2), Slot::new(3, 2)),
                Arrow::new(Sign::Neg, Slot::new(2, 1), Slot::new(3, 3)),
                Arrow::new(Sign::Neg, Slot::new(1, 1), Slot::new(3, 4)),
            ],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gd(text: &str) -> GaussDiagram {
        GaussDiagram::parse(text).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(GaussDiagram::empty(2).validate().is_empty());
        let bad = GaussDiagram::unchecked(2, vec![Arrow::new(Sign::Pos, Slot::new(1, 3), Slot::new(2, 1))]);
        assert_eq!(bad.validate().len(), 1);
        let shared = GaussDiagram::unchecked(
            2,
            vec![
                Arrow::new(Sign::Pos, Slot::new(1, 1), Slot::new(2, 1)),
                Arrow::new(Sign::Pos, Slot::new(1, 1), Slot::new(2, 2)),
            ],
        );
        assert!(shared.validate().iter().any(|p| p.contains("shared")));
        assert!(fixtures::brunnian().validate().is_empty());
    }

    #[test]
    fn parse_and_emit() {
        let text = "# hopf\ngd 2\narrow - 2.1 1.1\n";
        let g = gd(text);
        assert_eq!(g, fixtures::hopf());
        assert_eq!(g.to_text(), "gd 2\narrow - 2.1 1.1\n");
        assert!(GaussDiagram::parse("gd 2\narrow + 1.2 2.1\n").is_err());
        assert!(GaussDiagram::parse("arrow + 1.1 2.1\n").is_err());
        assert!(GaussDiagram::parse("gd 2\narrow * 1.1 2.1\n").is_err());
        assert!(GaussDiagram::parse("gd 2\nfoo\n").is_err());
    }

    #[test]
    fn stack_examples() {
        let h = fixtures::hopf();
        assert_eq!(h.stack(&GaussDiagram::empty(2)).unwrap(), h);
        assert_eq!(GaussDiagram::empty(2).stack(&h).unwrap(), h);
        let hh = h.stack(&h).unwrap();
        assert_eq!(hh.slot_counts(), vec![2, 2]);
        assert!(hh.validate().is_empty());
        assert!(h.stack(&GaussDiagram::empty(3)).is_err());
    }

    #[test]
    fn predicates() {
        let e = GaussDiagram::empty(3);
        assert!(e.is_horizontal() && e.is_ascending());
        let h = fixtures::hopf();
        assert!(h.is_horizontal() && h.is_ascending());
        let sa = gd("gd 1\narrow + 1.1 1.2\n");
        assert!(!sa.is_horizontal());
        // two arrows crossing in opposite orders on the strands
        let cyc = gd("gd 2\narrow + 1.1 2.2\narrow + 2.1 1.2\n");
        assert!(!cyc.is_horizontal());
        assert!(fixtures::brunnian().is_ascending());
        // tails on strand 2 appear in the opposite order to their heads
        assert!(!fixtures::brunnian().is_horizontal());
    }

    #[test]
    fn delete_strand_examples() {
        let e = GaussDiagram::empty(3).delete_strand(2).unwrap();
        assert_eq!(e, GaussDiagram::empty(2));
        assert_eq!(fixtures::hopf().delete_strand(2).unwrap(), GaussDiagram::empty(1));
        assert!(fixtures::hopf().delete_strand(3).is_err());
        let b1 = fixtures::brunnian().delete_strand(1).unwrap();
        assert_eq!(b1.arrow_count(), 2);
        assert!(b1.validate().is_empty());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn stack_associative(s1 in 0u64..1000, s2 in 0u64..1000, s3 in 0u64..1000) {
                let a = random_diagram(3, 3, s1);
                let b = random_diagram(3, 2, s2);
                let c = random_diagram(3, 4, s3);
                let l = a.stack(&b).unwrap().stack(&c).unwrap();
                let r = a.stack(&b.stack(&c).unwrap()).unwrap();
                prop_assert_eq!(l, r);
            }

            #[test]
            fn text_round_trip(n in 1usize..=4, k in 0usize..=8, seed in any::<u64>()) {
                let g = random_diagram(n, k, seed);
                prop_assert_eq!(GaussDiagram::parse(&g.to_text()).unwrap(), g);
            }
        }
    }
}
