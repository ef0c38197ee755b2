//! The welded move calculus on Gauss diagrams.
//!
//! Moves that act on existing arrows locate them by the slot of an end in the
//! input diagram. Moves that add arrows give the ranks the new ends occupy in
//! the output diagram.
//!
//! The commutation moves `C3_*` and `C2` swap two adjacent ends of a strand.
//! They are macros: [`expand_move`] returns the primitive script that realises
//! them, while [`apply_move`] performs the equivalent direct rewrite.

use std::collections::BTreeSet;
use std::fmt;

use super::{End, GaussDiagram, Layout, Sign, Slot};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    R1Add,
    R1Del,
    R2Add,
    R2Del,
    R3,
    Tc,
    SaAdd,
    SaDel,
    C31,
    C32,
    C33,
    C2,
}

impl MoveKind {
    /// Moves that hold up to welded equivalence, as opposed to self-virtualization.
    pub fn is_welded(self) -> bool {
        !matches!(self, MoveKind::SaAdd | MoveKind::SaDel | MoveKind::C2)
    }

    pub fn is_macro(self) -> bool {
        matches!(self, MoveKind::C31 | MoveKind::C32 | MoveKind::C33 | MoveKind::C2)
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MoveKind::R1Add => "R1-add",
            MoveKind::R1Del => "R1-del",
            MoveKind::R2Add => "R2-add",
            MoveKind::R2Del => "R2-del",
            MoveKind::R3 => "R3",
            MoveKind::Tc => "TC",
            MoveKind::SaAdd => "SA-add",
            MoveKind::SaDel => "SA-del",
            MoveKind::C31 => "C3_1",
            MoveKind::C32 => "C3_2",
            MoveKind::C33 => "C3_3",
            MoveKind::C2 => "C2",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    /// Isolated self-arrow whose ends land at `rank` and `rank + 1`.
    R1Add {
        strand: usize,
        rank: usize,
        sign: Sign,
        head_first: bool,
    },
    /// `at` is the lower end of an isolated self-arrow.
    R1Del {
        at: Slot,
    },
    /// Two parallel arrows of opposite signs; tails land at `tails`, `tails + 1`
    /// and heads at `heads`, `heads + 1`. The lower pair has `lower_sign`.
    R2Add {
        tails: Slot,
        heads: Slot,
        lower_sign: Sign,
    },
    /// `at` is the lower of two adjacent tails whose heads are adjacent in
    /// the same order and whose signs differ.
    R2Del {
        at: Slot,
    },
    /// Each slot is the lower end of a two-end piece; the three pieces carry a
    /// triangle of arrows and are reversed.
    R3 {
        pieces: [Slot; 3],
    },
    /// `at` is the lower of two adjacent tails.
    Tc {
        at: Slot,
    },
    SaAdd {
        tail: Slot,
        head: Slot,
        sign: Sign,
    },
    /// `at` is either end of a self-arrow.
    SaDel {
        at: Slot,
    },
    /// A head directly below a tail: the tail is pushed underneath, adding a
    /// cancelling pair of arrows around the tail's own head.
    C31 {
        at: Slot,
    },
    /// A tail directly below a head: the head is pushed underneath, adding a
    /// cancelling pair of arrows around the tail's own head.
    C32 {
        at: Slot,
    },
    /// Two adjacent heads are swapped, adding a cancelling pair whose heads
    /// surround the upper arrow's tail.
    C33 {
        at: Slot,
    },
    /// Two adjacent ends, not both tails, whose other ends share a different
    /// strand are swapped; holds up to self-arrow moves.
    C2 {
        at: Slot,
    },
}

impl Move {
    pub fn kind(&self) -> MoveKind {
        match self {
            Move::R1Add { .. } => MoveKind::R1Add,
            Move::R1Del { .. } => MoveKind::R1Del,
            Move::R2Add { .. } => MoveKind::R2Add,
            Move::R2Del { .. } => MoveKind::R2Del,
            Move::R3 { .. } => MoveKind::R3,
            Move::Tc { .. } => MoveKind::Tc,
            Move::SaAdd { .. } => MoveKind::SaAdd,
            Move::SaDel { .. } => MoveKind::SaDel,
            Move::C31 { .. } => MoveKind::C31,
            Move::C32 { .. } => MoveKind::C32,
            Move::C33 { .. } => MoveKind::C33,
            Move::C2 { .. } => MoveKind::C2,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind())?;
        match self {
            Move::R1Add { strand, rank, sign, head_first } => {
                let order = if *head_first { "head-first" } else { "tail-first" };
                write!(f, " {strand}.{rank} {sign} {order}")
            }
            Move::R2Add { tails, heads, lower_sign } => write!(f, " {tails} {heads} {lower_sign}"),
            Move::R3 { pieces } => write!(f, " {} {} {}", pieces[0], pieces[1], pieces[2]),
            Move::SaAdd { tail, head, sign } => write!(f, " {sign} {tail} {head}"),
            Move::R1Del { at }
            | Move::R2Del { at }
            | Move::Tc { at }
            | Move::SaDel { at }
            | Move::C31 { at }
            | Move::C32 { at }
            | Move::C33 { at }
            | Move::C2 { at } => write!(f, " {at}"),
        }
    }
}

fn not_found(m: &Move, why: &str) -> Error {
    Error::PatternNotFound(format!("{m}: {why}"))
}

fn require_valid(g: &GaussDiagram) -> Result<()> {
    let problems = g.validate();
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Error::Malformed(problems.join("; ")))
    }
}

/// Applies one move and returns the rewritten diagram.
pub fn apply_move(g: &GaussDiagram, m: &Move) -> Result<GaussDiagram> {
    require_valid(g)?;
    let mut layout = g.layout();
    exec(&mut layout, m)?;
    Ok(layout.to_diagram())
}

/// The primitive moves realising `m`, each addressed in the diagram it acts on.
/// Primitive moves expand to themselves.
pub fn expand_move(g: &GaussDiagram, m: &Move) -> Result<Vec<Move>> {
    require_valid(g)?;
    let mut layout = g.layout();
    match *m {
        Move::C31 { at } => script_c31(&mut layout, m, at),
        Move::C32 { at } => script_c32(&mut layout, m, at),
        Move::C33 { at } => script_c33(&mut layout, m, at),
        Move::C2 { at } => script_c2(&mut layout, m, at),
        _ => {
            exec(&mut layout, m)?;
            Ok(vec![*m])
        }
    }
}

/// Runs a move on a layout. New arrows get fresh ids, returned in order.
pub(crate) fn exec(l: &mut Layout, m: &Move) -> Result<Vec<usize>> {
    match *m {
        Move::R1Add { strand, rank, sign, head_first } => {
            if strand == 0 || strand > l.n {
                return Err(Error::IndexOutOfRange { index: strand, max: l.n });
            }
            let len = l.strands[strand - 1].len();
            if rank == 0 || rank > len + 1 {
                return Err(Error::IndexOutOfRange { index: rank, max: len + 1 });
            }
            let a = l.add_arrow(sign);
            let (first, second) = if head_first { (End::head(a), End::tail(a)) } else { (End::tail(a), End::head(a)) };
            l.strands[strand - 1].insert(rank - 1, second);
            l.strands[strand - 1].insert(rank - 1, first);
            Ok(vec![a])
        }
        Move::R1Del { at } => {
            let (lo, up) = l.pair_at(at).ok_or_else(|| not_found(m, "no two ends there"))?;
            if lo.arrow != up.arrow {
                return Err(not_found(m, "ends belong to different arrows"));
            }
            l.remove_arrow(lo.arrow);
            Ok(vec![])
        }
        Move::R2Add { tails, heads, lower_sign } => {
            if tails.strand == heads.strand && tails.rank.abs_diff(heads.rank) < 2 {
                return Err(not_found(m, "tail and head pairs overlap"));
            }
            let mut trial = l.clone();
            let a = trial.add_arrow(lower_sign);
            let b = trial.add_arrow(lower_sign.flip());
            let placed = trial.insert_at_slots(vec![
                (tails, End::tail(a)),
                (Slot::new(tails.strand, tails.rank + 1), End::tail(b)),
                (heads, End::head(a)),
                (Slot::new(heads.strand, heads.rank + 1), End::head(b)),
            ]);
            if !placed {
                return Err(not_found(m, "target ranks out of range"));
            }
            *l = trial;
            Ok(vec![a, b])
        }
        Move::R2Del { at } => {
            let (t1, t2) = l.pair_at(at).ok_or_else(|| not_found(m, "no two ends there"))?;
            if t1.head || t2.head {
                return Err(not_found(m, "expected two tails"));
            }
            if !l.directly_below(t1.partner(), t2.partner()) {
                return Err(not_found(m, "heads are not adjacent in the same order"));
            }
            if l.signs[t1.arrow] == l.signs[t2.arrow] {
                return Err(not_found(m, "signs agree"));
            }
            l.remove_arrow(t1.arrow);
            l.remove_arrow(t2.arrow);
            Ok(vec![])
        }
        Move::R3 { pieces } => {
            let [p1, p2, p3] = r3_roles(l, m, pieces)?;
            for p in [p1, p2, p3] {
                l.swap_up(p);
            }
            Ok(vec![])
        }
        Move::Tc { at } => {
            let (lo, up) = l.pair_at(at).ok_or_else(|| not_found(m, "no two ends there"))?;
            if lo.head || up.head {
                return Err(not_found(m, "expected two tails"));
            }
            l.swap_up(at);
            Ok(vec![])
        }
        Move::SaAdd { tail, head, sign } => {
            if tail.strand != head.strand || tail.rank == head.rank {
                return Err(not_found(m, "self-arrow ends must be distinct slots of one strand"));
            }
            let mut trial = l.clone();
            let a = trial.add_arrow(sign);
            if !trial.insert_at_slots(vec![(tail, End::tail(a)), (head, End::head(a))]) {
                return Err(not_found(m, "target ranks out of range"));
            }
            *l = trial;
            Ok(vec![a])
        }
        Move::SaDel { at } => {
            let e = l.at(at).ok_or_else(|| not_found(m, "no end there"))?;
            if l.slot_of(e.partner()).strand != at.strand {
                return Err(Error::NotSelfArrow(at.to_string()));
            }
            l.remove_arrow(e.arrow);
            Ok(vec![])
        }
        Move::C31 { at } => direct_c31(l, m, at),
        Move::C32 { at } => direct_c32(l, m, at),
        Move::C33 { at } => direct_c33(l, m, at),
        Move::C2 { at } => direct_c2(l, m, at),
    }
}

/// Checks an R3 configuration and returns the pieces ordered as
/// (two tails, tail and head, two heads).
fn r3_roles(l: &Layout, m: &Move, pieces: [Slot; 3]) -> Result<[Slot; 3]> {
    for i in 0..3 {
        for j in i + 1..3 {
            let (a, b) = (pieces[i], pieces[j]);
            if a.strand == b.strand && a.rank.abs_diff(b.rank) < 2 {
                return Err(not_found(m, "pieces overlap"));
            }
        }
    }
    let mut ends = Vec::with_capacity(3);
    for p in pieces {
        ends.push(l.pair_at(p).ok_or_else(|| not_found(m, "piece needs two ends"))?);
    }
    let heads = |(lo, up): (End, End)| lo.head as usize + up.head as usize;
    let find = |h: usize| (0..3).find(|&k| heads(ends[k]) == h);
    let (Some(k1), Some(k2), Some(k3)) = (find(0), find(1), find(2)) else {
        return Err(not_found(m, "need one piece of two tails, one mixed, one of two heads"));
    };
    let piece_of = |e: End, k: usize| ends[k].0 == e || ends[k].1 == e;
    let (u, v) = (ends[k1].0.arrow, ends[k1].1.arrow);
    let (a12, a13) = if piece_of(End::head(u), k2) && piece_of(End::head(v), k3) {
        (u, v)
    } else if piece_of(End::head(v), k2) && piece_of(End::head(u), k3) {
        (v, u)
    } else {
        return Err(not_found(m, "tails of the first piece do not reach the other two"));
    };
    let mixed_tail = if ends[k2].0.head { ends[k2].1 } else { ends[k2].0 };
    let a23 = mixed_tail.arrow;
    if !piece_of(End::head(a23), k3) {
        return Err(not_found(m, "middle arrow does not reach the piece of two heads"));
    }
    let (s12, s13) = (l.signs[a12], l.signs[a13]);
    if s12 != s13 {
        return Err(Error::R3ConditionViolated(s12.value(), s13.value()));
    }
    let middle_head_first = ends[k2].0 == End::head(a12);
    let bottom_head_first = ends[k3].0 == End::head(a13);
    if middle_head_first != bottom_head_first {
        return Err(not_found(m, "ends are not in the order of a Reidemeister III triangle"));
    }
    Ok([pieces[k1], pieces[k2], pieces[k3]])
}

/// The two adjacent ends at `at`, required to belong to different arrows.
fn adjacent_pair(l: &Layout, m: &Move, at: Slot) -> Result<(End, End)> {
    let (lo, up) = l.pair_at(at).ok_or_else(|| not_found(m, "no two ends there"))?;
    if lo.arrow == up.arrow {
        return Err(not_found(m, "ends belong to one arrow"));
    }
    Ok((lo, up))
}

fn c31_pattern(l: &Layout, m: &Move, at: Slot) -> Result<(End, End)> {
    let (lo, up) = adjacent_pair(l, m, at)?;
    if !lo.head || up.head {
        return Err(not_found(m, "expected a head directly below a tail"));
    }
    Ok((lo, up))
}

fn c32_pattern(l: &Layout, m: &Move, at: Slot) -> Result<(End, End)> {
    let (lo, up) = adjacent_pair(l, m, at)?;
    if lo.head || !up.head {
        return Err(not_found(m, "expected a tail directly below a head"));
    }
    Ok((lo, up))
}

fn c33_pattern(l: &Layout, m: &Move, at: Slot) -> Result<(End, End)> {
    let (lo, up) = adjacent_pair(l, m, at)?;
    if !lo.head || !up.head {
        return Err(not_found(m, "expected two heads"));
    }
    Ok((lo, up))
}

fn c2_pattern(l: &Layout, m: &Move, at: Slot) -> Result<(End, End)> {
    let (lo, up) = adjacent_pair(l, m, at)?;
    if !lo.head && !up.head {
        return Err(not_found(m, "two tails commute by TC"));
    }
    let q1 = l.slot_of(lo.partner()).strand;
    let q2 = l.slot_of(up.partner()).strand;
    if q1 != q2 || q1 == at.strand {
        return Err(not_found(m, "other ends must share a strand different from this one"));
    }
    Ok((lo, up))
}

fn direct_c31(l: &mut Layout, m: &Move, at: Slot) -> Result<Vec<usize>> {
    let (h_b, t_a) = c31_pattern(l, m, at)?;
    let eta = l.signs[h_b.arrow];
    l.swap_up(at);
    let c = l.add_arrow(eta.flip());
    let x = l.add_arrow(eta);
    l.insert_before(h_b.partner(), End::tail(x));
    l.insert_before(End::tail(x), End::tail(c));
    l.insert_before(t_a.partner(), End::head(c));
    l.insert_after(t_a.partner(), End::head(x));
    Ok(vec![c, x])
}

fn direct_c32(l: &mut Layout, m: &Move, at: Slot) -> Result<Vec<usize>> {
    let (t_a, h_b) = c32_pattern(l, m, at)?;
    let eta = l.signs[h_b.arrow];
    l.swap_up(at);
    let c = l.add_arrow(eta);
    let d = l.add_arrow(eta.flip());
    l.insert_after(h_b.partner(), End::tail(c));
    l.insert_after(End::tail(c), End::tail(d));
    l.insert_before(t_a.partner(), End::head(c));
    l.insert_after(t_a.partner(), End::head(d));
    Ok(vec![c, d])
}

fn direct_c33(l: &mut Layout, m: &Move, at: Slot) -> Result<Vec<usize>> {
    let (h_a, h_b) = c33_pattern(l, m, at)?;
    let eps = l.signs[h_a.arrow];
    l.swap_up(at);
    let y = l.add_arrow(eps.flip());
    let x = l.add_arrow(eps);
    l.insert_before(h_a.partner(), End::tail(x));
    l.insert_before(End::tail(x), End::tail(y));
    l.insert_before(h_b.partner(), End::head(y));
    l.insert_after(h_b.partner(), End::head(x));
    Ok(vec![y, x])
}

fn direct_c2(l: &mut Layout, m: &Move, at: Slot) -> Result<Vec<usize>> {
    c2_pattern(l, m, at)?;
    l.swap_up(at);
    Ok(vec![])
}

/// R2-add describing a pair already inserted into `l`, `lower` being the
/// arrow whose ends sit below the other's.
fn record_r2_add(l: &Layout, lower: usize) -> Move {
    Move::R2Add { tails: l.slot_of(End::tail(lower)), heads: l.slot_of(End::head(lower)), lower_sign: l.signs[lower] }
}

/// Records `m` against the current layout and runs it.
fn step(l: &mut Layout, script: &mut Vec<Move>, m: Move) -> Result<()> {
    exec(l, &m)?;
    script.push(m);
    Ok(())
}

fn script_c31(l: &mut Layout, m: &Move, at: Slot) -> Result<Vec<Move>> {
    let (h_b, t_a) = c31_pattern(l, m, at)?;
    let eta = l.signs[h_b.arrow];
    let t_b = h_b.partner();
    let h_a = t_a.partner();
    let mut script = Vec::new();
    let c = l.add_arrow(eta.flip());
    let x = l.add_arrow(eta);
    l.insert_before(t_b, End::tail(x));
    l.insert_before(End::tail(x), End::tail(c));
    l.insert_before(h_a, End::head(x));
    l.insert_before(End::head(x), End::head(c));
    script.push(record_r2_add(l, c));
    let pieces = [l.slot_of(End::tail(x)), l.slot_of(h_b), l.slot_of(End::head(x))];
    step(l, &mut script, Move::R3 { pieces })?;
    step(l, &mut script, Move::Tc { at: l.slot_of(t_b) })?;
    Ok(script)
}

fn script_c32(l: &mut Layout, m: &Move, at: Slot) -> Result<Vec<Move>> {
    let (t_a, h_b) = c32_pattern(l, m, at)?;
    let eta = l.signs[h_b.arrow];
    let t_b = h_b.partner();
    let h_a = t_a.partner();
    let mut script = Vec::new();
    let c = l.add_arrow(eta);
    let d = l.add_arrow(eta.flip());
    l.insert_after(t_b, End::tail(c));
    l.insert_after(End::tail(c), End::tail(d));
    l.insert_after(h_a, End::head(c));
    l.insert_after(End::head(c), End::head(d));
    script.push(record_r2_add(l, c));
    let pieces = [l.slot_of(t_b), l.slot_of(t_a), l.slot_of(h_a)];
    step(l, &mut script, Move::R3 { pieces })?;
    step(l, &mut script, Move::Tc { at: l.slot_of(End::tail(c)) })?;
    Ok(script)
}

fn script_c33(l: &mut Layout, m: &Move, at: Slot) -> Result<Vec<Move>> {
    let (h_a, h_b) = c33_pattern(l, m, at)?;
    let eps = l.signs[h_a.arrow];
    let t_a = h_a.partner();
    let t_b = h_b.partner();
    let mut script = Vec::new();
    let y = l.add_arrow(eps.flip());
    let x = l.add_arrow(eps);
    l.insert_before(t_a, End::tail(x));
    l.insert_before(End::tail(x), End::tail(y));
    l.insert_before(t_b, End::head(x));
    l.insert_before(End::head(x), End::head(y));
    script.push(record_r2_add(l, y));
    let pieces = [l.slot_of(End::tail(x)), l.slot_of(End::head(x)), l.slot_of(h_a)];
    step(l, &mut script, Move::R3 { pieces })?;
    step(l, &mut script, Move::Tc { at: l.slot_of(t_a) })?;
    Ok(script)
}

/// Helper self-arrow placements tried for C2, in order: sign, which of the two
/// far ends takes the helper's tail, and whether each helper end goes above
/// its anchor.
fn c2_helpers() -> impl Iterator<Item = (Sign, bool, bool, bool)> {
    [Sign::Pos, Sign::Neg].into_iter().flat_map(|s| {
        [false, true]
            .into_iter()
            .flat_map(move |o| [true, false].into_iter().flat_map(move |ta| [true, false].map(|ha| (s, o, ta, ha))))
    })
}

fn script_c2(l: &mut Layout, m: &Move, at: Slot) -> Result<Vec<Move>> {
    let (lo, up) = c2_pattern(l, m, at)?;
    for (sign, swap_anchors, tail_above, head_above) in c2_helpers() {
        let mut trial = l.clone();
        let (tail_anchor, head_anchor) =
            if swap_anchors { (up.partner(), lo.partner()) } else { (lo.partner(), up.partner()) };
        let s = trial.add_arrow(sign);
        if tail_above {
            trial.insert_after(tail_anchor, End::tail(s));
        } else {
            trial.insert_before(tail_anchor, End::tail(s));
        }
        if head_above {
            trial.insert_after(head_anchor, End::head(s));
        } else {
            trial.insert_before(head_anchor, End::head(s));
        }
        let mut script =
            vec![Move::SaAdd { tail: trial.slot_of(End::tail(s)), head: trial.slot_of(End::head(s)), sign }];
        let pieces =
            [piece_start(&trial, End::tail(s), tail_anchor), piece_start(&trial, End::head(s), head_anchor), at];
        if step(&mut trial, &mut script, Move::R3 { pieces }).is_err() {
            continue;
        }
        let helper = trial.slot_of(End::tail(s));
        step(&mut trial, &mut script, Move::SaDel { at: helper })?;
        *l = trial;
        return Ok(script);
    }
    Err(not_found(m, "no helper self-arrow makes the R3 step valid"))
}

/// Lower slot of the two-end piece formed by adjacent ends `a` and `b`.
fn piece_start(l: &Layout, a: End, b: End) -> Slot {
    let (sa, sb) = (l.slot_of(a), l.slot_of(b));
    if sa.rank < sb.rank {
        sa
    } else {
        sb
    }
}

/// Every applicable move that rewrites existing arrows, together with every
/// R1 addition and a fixed sample of R2 and SA additions.
pub fn applicable_moves(g: &GaussDiagram) -> Vec<Move> {
    if !g.validate().is_empty() {
        return Vec::new();
    }
    let layout = g.layout();
    let counts = g.slot_counts();
    let n = g.strand_count();
    let mut out = Vec::new();
    let applies = |m: &Move| exec(&mut layout.clone(), m).is_ok();

    for s in 1..=n {
        for r in 1..counts[s - 1] {
            let at = Slot::new(s, r);
            for m in [
                Move::R1Del { at },
                Move::R2Del { at },
                Move::Tc { at },
                Move::C31 { at },
                Move::C32 { at },
                Move::C33 { at },
                Move::C2 { at },
            ] {
                if applies(&m) {
                    out.push(m);
                }
            }
        }
    }
    for a in g.arrows().iter().filter(|a| a.is_self_arrow()) {
        out.push(Move::SaDel { at: a.tail });
    }
    out.extend(r3_candidates(&layout).into_iter().filter(|m| applies(m)));

    for s in 1..=n {
        for rank in 1..=counts[s - 1] + 1 {
            for sign in [Sign::Pos, Sign::Neg] {
                for head_first in [false, true] {
                    out.push(Move::R1Add { strand: s, rank, sign, head_first });
                }
            }
        }
    }
    for s in 1..=n {
        for t in (1..=n).filter(|&t| t != s) {
            for lower_sign in [Sign::Pos, Sign::Neg] {
                let (ms, mt) = (counts[s - 1], counts[t - 1]);
                out.push(Move::R2Add { tails: Slot::new(s, 1), heads: Slot::new(t, mt / 2 + 1), lower_sign });
                out.push(Move::R2Add { tails: Slot::new(s, ms + 1), heads: Slot::new(t, 1), lower_sign });
            }
        }
    }
    for s in 1..=n {
        let m = counts[s - 1];
        for sign in [Sign::Pos, Sign::Neg] {
            out.push(Move::SaAdd { tail: Slot::new(s, 1), head: Slot::new(s, m + 2), sign });
            out.push(Move::SaAdd { tail: Slot::new(s, m / 2 + 2), head: Slot::new(s, m / 2 + 1), sign });
        }
    }
    out
}

/// Slot triples that could carry an R3 triangle, built from two-tail pieces.
fn r3_candidates(l: &Layout) -> Vec<Move> {
    let pieces_with = |e: End| -> Vec<Slot> {
        let s = l.slot_of(e);
        let mut v = vec![s];
        if s.rank > 1 {
            v.push(Slot::new(s.strand, s.rank - 1));
        }
        v
    };
    let mut found = BTreeSet::new();
    for (s, strand) in l.strands.iter().enumerate() {
        for r in 0..strand.len().saturating_sub(1) {
            let (lo, up) = (strand[r], strand[r + 1]);
            if lo.head || up.head {
                continue;
            }
            for p2 in pieces_with(lo.partner()).into_iter().chain(pieces_with(up.partner())) {
                for p3 in pieces_with(lo.partner()).into_iter().chain(pieces_with(up.partner())) {
                    if p2 != p3 {
                        let mut triple = [Slot::new(s + 1, r + 1), p2, p3];
                        triple.sort();
                        found.insert(triple);
                    }
                }
            }
        }
    }
    found.into_iter().map(|pieces| Move::R3 { pieces }).collect()
}

#[cfg(test)]
mod tests {
    use super::super::{fixtures, random_diagram};
    use super::*;

    fn gd(text: &str) -> GaussDiagram {
        GaussDiagram::parse(text).unwrap()
    }

    fn replay(g: &GaussDiagram, script: &[Move]) -> GaussDiagram {
        script.iter().fold(g.clone(), |acc, m| apply_move(&acc, m).unwrap())
    }

    #[test]
    fn tc_swaps_adjacent_tails() {
        let g = gd("gd 2\narrow + 1.1 2.1\narrow - 1.2 2.2\n");
        let h = apply_move(&g, &Move::Tc { at: Slot::new(1, 1) }).unwrap();
        assert_eq!(h, gd("gd 2\narrow - 1.1 2.2\narrow + 1.2 2.1\n"));
        assert!(apply_move(&fixtures::hopf(), &Move::Tc { at: Slot::new(1, 1) }).is_err());
    }

    #[test]
    fn r2_round_trip() {
        let g = gd("gd 2\narrow + 1.1 2.1\narrow - 1.2 2.2\n");
        let e = apply_move(&g, &Move::R2Del { at: Slot::new(1, 1) }).unwrap();
        assert_eq!(e, GaussDiagram::empty(2));
        let back =
            apply_move(&e, &Move::R2Add { tails: Slot::new(1, 1), heads: Slot::new(2, 1), lower_sign: Sign::Pos })
                .unwrap();
        assert_eq!(back, g);
        let same = gd("gd 2\narrow + 1.1 2.1\narrow + 1.2 2.2\n");
        assert!(apply_move(&same, &Move::R2Del { at: Slot::new(1, 1) }).is_err());
        let crossed = gd("gd 2\narrow + 1.1 2.2\narrow - 1.2 2.1\n");
        assert!(apply_move(&crossed, &Move::R2Del { at: Slot::new(1, 1) }).is_err());
    }

    #[test]
    fn r1_and_sa() {
        let g = GaussDiagram::empty(1);
        let r1 = apply_move(&g, &Move::R1Add { strand: 1, rank: 1, sign: Sign::Neg, head_first: true }).unwrap();
        assert_eq!(r1, gd("gd 1\narrow - 1.2 1.1\n"));
        assert_eq!(apply_move(&r1, &Move::R1Del { at: Slot::new(1, 1) }).unwrap(), g);
        let sa = gd("gd 2\narrow + 1.1 1.3\narrow + 2.1 1.2\n");
        assert!(apply_move(&sa, &Move::R1Del { at: Slot::new(1, 1) }).is_err());
        assert_eq!(apply_move(&sa, &Move::SaDel { at: Slot::new(1, 3) }).unwrap(), gd("gd 2\narrow + 2.1 1.1\n"));
        assert_eq!(apply_move(&sa, &Move::SaDel { at: Slot::new(2, 1) }), Err(Error::NotSelfArrow("2.1".into())));
    }

    /// Piece 1 holds the tails of a12 and a13, piece 2 the head of a12 and
    /// tail of a23, piece 3 the heads of a13 and a23.
    fn triangle(s12: char, s13: char) -> GaussDiagram {
        gd(&format!("gd 3\narrow {s12} 1.1 2.1\narrow {s13} 1.2 3.1\narrow + 2.2 3.2\n"))
    }

    #[test]
    fn r3_sign_condition() {
        let pieces = [Slot::new(1, 1), Slot::new(2, 1), Slot::new(3, 1)];
        let ok = apply_move(&triangle('+', '+'), &Move::R3 { pieces }).unwrap();
        assert_eq!(ok, gd("gd 3\narrow + 1.1 3.2\narrow + 1.2 2.2\narrow + 2.1 3.1\n"));
        assert_eq!(apply_move(&triangle('+', '-'), &Move::R3 { pieces }), Err(Error::R3ConditionViolated(1, -1)));
        // pieces may be listed in any order
        let shuffled = [Slot::new(3, 1), Slot::new(1, 1), Slot::new(2, 1)];
        assert_eq!(apply_move(&triangle('-', '-'), &Move::R3 { pieces: shuffled }).unwrap().arrow_count(), 3);
        let wrong_order = gd("gd 3\narrow + 1.1 2.1\narrow + 1.2 3.2\narrow + 2.2 3.1\n");
        assert!(matches!(apply_move(&wrong_order, &Move::R3 { pieces }), Err(Error::PatternNotFound(_))));
    }

    #[test]
    fn macros_replay_matches_direct_on_examples() {
        let far = gd("gd 3\narrow + 2.1 1.1\narrow - 1.2 3.1\n");
        let near = gd("gd 2\narrow + 2.1 1.1\narrow - 1.2 2.2\n");
        for (g, m) in [(far, Move::C31 { at: Slot::new(1, 1) }), (near, Move::C2 { at: Slot::new(1, 1) })] {
            let script = expand_move(&g, &m).unwrap();
            assert!(script.len() >= 3);
            assert_eq!(replay(&g, &script), apply_move(&g, &m).unwrap());
        }
    }

    #[test]
    fn c2_needs_shared_far_strand() {
        let g = gd("gd 2\narrow + 2.1 1.1\narrow - 1.2 2.2\n");
        let h = apply_move(&g, &Move::C2 { at: Slot::new(1, 1) }).unwrap();
        assert_eq!(h, gd("gd 2\narrow + 2.1 1.2\narrow - 1.1 2.2\n"));
        let far = gd("gd 3\narrow + 2.1 1.1\narrow - 1.2 3.1\n");
        assert!(apply_move(&far, &Move::C2 { at: Slot::new(1, 1) }).is_err());
    }

    #[test]
    fn applicable_moves_apply_and_validate() {
        for seed in 0..60 {
            let g = random_diagram(3, 5, seed);
            for m in applicable_moves(&g) {
                let h = apply_move(&g, &m).unwrap_or_else(|e| panic!("{m} on\n{g}: {e}"));
                assert!(h.validate().is_empty(), "{m} broke\n{g}");
            }
        }
    }

    #[test]
    fn every_macro_replays_to_its_direct_rewrite() {
        for seed in 0..200 {
            let g = random_diagram(1 + (seed as usize % 4), 6, seed);
            for m in applicable_moves(&g).into_iter().filter(|m| m.kind().is_macro()) {
                let script = expand_move(&g, &m).unwrap();
                assert!(script.iter().all(|s| !s.kind().is_macro()));
                assert_eq!(replay(&g, &script), apply_move(&g, &m).unwrap(), "{m} on\n{g}");
            }
        }
    }
}
