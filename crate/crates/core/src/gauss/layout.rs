use super::{Arrow, GaussDiagram, Sign, Slot};

/// One arrow end as it sits on a strand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct End {
    pub arrow: usize,
    pub head: bool,
}

impl End {
    pub fn tail(arrow: usize) -> End {
        End { arrow, head: false }
    }

    pub fn head(arrow: usize) -> End {
        End { arrow, head: true }
    }

    pub fn partner(self) -> End {
        End { arrow: self.arrow, head: !self.head }
    }
}

/// Mutable working form of a diagram: arrows keep stable ids while their
/// ends are moved around, and ranks are just positions in `strands`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Layout {
    pub n: usize,
    pub signs: Vec<Sign>,
    pub alive: Vec<bool>,
    pub strands: Vec<Vec<End>>,
}

impl Layout {
    /// Arrow ids are the indices into `g.arrows()`.
    pub fn from_diagram(g: &GaussDiagram) -> Layout {
        let mut strands: Vec<Vec<Option<End>>> = g.slot_counts().iter().map(|&m| vec![None; m]).collect();
        for (id, a) in g.arrows().iter().enumerate() {
            strands[a.tail.strand - 1][a.tail.rank - 1] = Some(End::tail(id));
            strands[a.head.strand - 1][a.head.rank - 1] = Some(End::head(id));
        }
        Layout {
            n: g.strand_count(),
            signs: g.arrows().iter().map(|a| a.sign).collect(),
            alive: vec![true; g.arrow_count()],
            strands: strands
                .into_iter()
                .map(|s| s.into_iter().map(|e| e.expect("validated diagram has no gaps")).collect())
                .collect(),
        }
    }

    pub fn to_diagram(&self) -> GaussDiagram {
        let mut tails = vec![None; self.signs.len()];
        let mut heads = vec![None; self.signs.len()];
        for (s, strand) in self.strands.iter().enumerate() {
            for (p, e) in strand.iter().enumerate() {
                let slot = Slot::new(s + 1, p + 1);
                if e.head {
                    heads[e.arrow] = Some(slot);
                } else {
                    tails[e.arrow] = Some(slot);
                }
            }
        }
        let arrows = (0..self.signs.len())
            .filter(|&a| self.alive[a])
            .map(|a| {
                Arrow::new(
                    self.signs[a],
                    tails[a].expect("live arrow has a tail"),
                    heads[a].expect("live arrow has a head"),
                )
            })
            .collect();
        GaussDiagram::unchecked(self.n, arrows)
    }

    /// The end sitting at a 1-based slot.
    pub fn at(&self, slot: Slot) -> Option<End> {
        if slot.strand == 0 || slot.rank == 0 {
            return None;
        }
        self.strands.get(slot.strand - 1)?.get(slot.rank - 1).copied()
    }

    /// 0-based (strand, position) of an end.
    pub fn locate(&self, e: End) -> (usize, usize) {
        for (s, strand) in self.strands.iter().enumerate() {
            if let Some(p) = strand.iter().position(|&x| x == e) {
                return (s, p);
            }
        }
        panic!("end {e:?} is not on any strand")
    }

    pub fn slot_of(&self, e: End) -> Slot {
        let (s, p) = self.locate(e);
        Slot::new(s + 1, p + 1)
    }

    pub fn add_arrow(&mut self, sign: Sign) -> usize {
        self.signs.push(sign);
        self.alive.push(true);
        self.signs.len() - 1
    }

    pub fn remove_arrow(&mut self, a: usize) {
        for strand in &mut self.strands {
            strand.retain(|e| e.arrow != a);
        }
        self.alive[a] = false;
    }

    pub fn insert_before(&mut self, anchor: End, e: End) {
        let (s, p) = self.locate(anchor);
        self.strands[s].insert(p, e);
    }

    pub fn insert_after(&mut self, anchor: End, e: End) {
        let (s, p) = self.locate(anchor);
        self.strands[s].insert(p + 1, e);
    }

    /// Places ends at final 1-based slots; ranks on a strand are filled in
    /// increasing order so each lands exactly where requested.
    pub fn insert_at_slots(&mut self, mut placements: Vec<(Slot, End)>) -> bool {
        placements.sort_by_key(|(s, _)| *s);
        for w in placements.windows(2) {
            if w[0].0 == w[1].0 {
                return false;
            }
        }
        for (slot, _) in &placements {
            if slot.strand == 0 || slot.strand > self.n || slot.rank == 0 {
                return false;
            }
            let added = placements.iter().filter(|(s, _)| s.strand == slot.strand).count();
            if slot.rank > self.strands[slot.strand - 1].len() + added {
                return false;
            }
        }
        for (slot, e) in placements {
            self.strands[slot.strand - 1].insert(slot.rank - 1, e);
        }
        true
    }

    /// The ends at `slot` and the one right above it, if both exist.
    pub fn pair_at(&self, slot: Slot) -> Option<(End, End)> {
        let lower = self.at(slot)?;
        let upper = self.at(Slot::new(slot.strand, slot.rank + 1))?;
        Some((lower, upper))
    }

    /// Swaps the end at `slot` with the one above it.
    pub fn swap_up(&mut self, slot: Slot) {
        self.strands[slot.strand - 1].swap(slot.rank - 1, slot.rank);
    }

    /// True when `a` sits directly below `b` on the same strand.
    pub fn directly_below(&self, a: End, b: End) -> bool {
        let (sa, pa) = self.locate(a);
        let (sb, pb) = self.locate(b);
        sa == sb && pa + 1 == pb
    }
}
