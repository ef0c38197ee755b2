use super::moves::exec;
use super::{Arrow, End, GaussDiagram, Move, Sign, Slot};
use crate::coloring::phi_g_to_a;
use crate::error::{Error, Result};
use crate::freegroup::Word;
use crate::reduced::{canonical_word, compose, invert_aut, ConjAut};

/// An a-equivalent diagram with every tail below every head on each strand.
///
/// Strands are sorted one at a time by pushing tails under heads. Sorting a
/// strand only adds ends next to ends of the same kind on other strands, so
/// strands already sorted stay sorted.
pub fn ascending_form(g: &GaussDiagram) -> Result<GaussDiagram> {
    let problems = g.validate();
    if !problems.is_empty() {
        return Err(Error::Malformed(problems.join("; ")));
    }
    let mut l = g.layout();
    for s in 0..l.n {
        while let Some(p) = first_inversion(&l.strands[s]) {
            let at = Slot::new(s + 1, p + 1);
            let (h_b, t_a) = (l.strands[s][p], l.strands[s][p + 1]);
            let self_arrow = [h_b, t_a].into_iter().find(|e| l.locate(e.partner()).0 == s);
            let m = match self_arrow {
                Some(e) => Move::SaDel { at: l.slot_of(e) },
                None if l.locate(h_b.partner()).0 == l.locate(t_a.partner()).0 => Move::C2 { at },
                None => Move::C31 { at },
            };
            exec(&mut l, &m)?;
        }
    }
    Ok(l.to_diagram())
}

/// Position of the lowest head sitting directly below a tail.
fn first_inversion(strand: &[End]) -> Option<usize> {
    strand.windows(2).position(|w| w[0].head && !w[1].head)
}

/// An a-equivalent horizontal diagram. Horizontal input is returned as is.
///
/// The automorphism `φ(G)` is factored as `F_1 ∘ ⋯ ∘ F_n` where `F_i` only
/// moves `x_i`, and each factor is realised by a comb: heads on strand `i` in
/// the order of the conjugator's letters, tails at the matching strands.
pub fn horizontal_form(g: &GaussDiagram) -> Result<GaussDiagram> {
    let problems = g.validate();
    if !problems.is_empty() {
        return Err(Error::Malformed(problems.join("; ")));
    }
    if g.is_horizontal() {
        return Ok(g.clone());
    }
    let n = g.strand_count();
    let f = phi_g_to_a(g)?;
    let mut prefix = ConjAut::identity(n);
    let mut out = GaussDiagram::empty(n);
    for i in 1..=n {
        let back = invert_aut(&prefix)?;
        let u = back.apply_poly(f.conjugator(i).word())?.kill_generator(i);
        let word = canonical_word(&u)?;
        let mut conjugators = vec![Word::identity(n); n];
        conjugators[i - 1] = word.clone();
        let factor = ConjAut::new(n, conjugators)?;
        out = out.stack(&comb(n, i, &word))?;
        prefix = compose(&prefix, &factor)?;
    }
    Ok(out)
}

/// Horizontal diagram of `x_i ↦ x_i^w`, others fixed, for `w` free of `x_i`.
fn comb(n: usize, i: usize, w: &Word) -> GaussDiagram {
    let mut used = vec![0usize; n];
    let arrows = w
        .letters()
        .iter()
        .enumerate()
        .map(|(k, l)| {
            used[l.gen - 1] += 1;
            Arrow::new(Sign::from_value(l.exp), Slot::new(l.gen, used[l.gen - 1]), Slot::new(i, k + 1))
        })
        .collect();
    GaussDiagram::unchecked(n, arrows)
}
