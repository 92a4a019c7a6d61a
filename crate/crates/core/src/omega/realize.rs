//! Constructing `f ∈ F` with `f · 1 = p` for a given `p ∈ Ω₂`.
//!
//! The main route follows the triple-removal step: for three consecutive
//! cells `α1 ≺ α2 ≺ α3` of the support at an odd level, an explicit element
//! `t` built from five partial isometries kills exactly those three cells.
//! Chaining steps shrinks the support to two cells, which a small dynamic
//! program over tree-pair shapes realizes directly. Every step is checked by
//! evaluating the action.

use std::collections::BTreeMap;

use crate::elements::{GroupElement, Term};
use crate::error::{Error, Result};
use crate::generators::generator_ball;
use crate::words::Word;

use super::projection::{act_unchecked, DiagonalProjection};
use super::omega2_member;

/// Above this level the cell-by-cell chain gets expensive and the dynamic
/// program is tried first.
const CHAIN_MAX_LEVEL: usize = 13;
const DP_LAYER_CAP: usize = 200_000;
const BALL_RADIUS: usize = 6;

pub fn realize(p: &DiagonalProjection) -> Result<GroupElement> {
    if omega2_member(p).is_none() {
        return Err(Error::NotInOmega2);
    }
    if p.is_one() {
        return Ok(GroupElement::identity());
    }
    let one = DiagonalProjection::one();
    let works = |f: &GroupElement| act_unchecked(f, &one) == *p;

    let mut level = p.level().max(1);
    if level % 2 == 0 {
        level += 1;
    }
    if level <= CHAIN_MAX_LEVEL {
        if let Some(f) = triple_chain(p, level).filter(works) {
            return Ok(f);
        }
    }
    for (slack, reach) in [(3, 3), (5, 5)] {
        if let Some(f) = leaf_dp(p, slack, reach).filter(works) {
            return Ok(f);
        }
    }
    for (_, g) in generator_ball(BALL_RADIUS) {
        if works(&g) {
            return Ok(g);
        }
    }
    Err(Error::InternalSearchExhausted(p.to_string()))
}

fn cell(index: u128, level: usize) -> Word {
    Word::from_endpoint(index, level as u32, level as u32)
}

/// The coarsest aligned dyadic cover of the cells `lo..hi` at `level`.
fn dyadic_blocks(mut lo: u128, hi: u128, level: usize) -> Vec<Word> {
    let mut out = Vec::new();
    while lo < hi {
        let mut size = 1u128;
        while lo % (size * 2) == 0 && lo + size * 2 <= hi && size * 2 <= 1u128 << level {
            size *= 2;
        }
        let depth = level as u32 - size.trailing_zeros();
        out.push(Word::from_endpoint(lo, depth, level as u32));
        lo += size;
    }
    out
}

/// The element removing the cells `a1 < a2 < a3` (consecutive in the current
/// support, at `level`) and fixing every other cell outside `[a1, a3]`.
fn triple_step(a1: &Word, a2: &Word, a3: &Word, level: usize) -> Option<GroupElement> {
    let scale = level as u32;
    let (i1, i2, i3) = (a1.left_endpoint(scale), a2.left_endpoint(scale), a3.left_endpoint(scale));
    let mu: Vec<Word> = (i1 + 1..i2).map(|i| cell(i, level)).collect();
    let nu: Vec<Word> = (i2 + 1..i3).map(|i| cell(i, level)).collect();

    let mut terms: Vec<Term> = Vec::new();
    for (lo, hi) in [(0, i1), (i3 + 1, 1u128 << level)] {
        for w in dyadic_blocks(lo, hi, level) {
            terms.push(Term::new(w.clone(), w));
        }
    }

    // u1
    terms.push(Term::new(a1.child(1), a1.clone()));
    // u2 shifts the gap μ right by half a cell; u3 squeezes α2 into the end
    let u3_range = match mu.last() {
        None => a1.child(2),
        Some(last) => {
            let mut ranges = vec![a1.child(2)];
            let mut domains = Vec::new();
            for (j, m) in mu.iter().enumerate() {
                domains.push(m.child(1));
                domains.push(m.child(2));
                if j + 1 < mu.len() {
                    ranges.push(m.child(1));
                    ranges.push(m.child(2));
                } else {
                    ranges.push(m.child(1));
                }
            }
            terms.extend(ranges.into_iter().zip(domains).map(|(r, d)| Term::new(r, d)));
            last.child(2)
        }
    };
    terms.push(Term::new(u3_range, a2.clone()));
    // u4 shifts ν left by one cell onto α2; u5 spreads α3 over the last slot
    let mut slots = vec![a2.clone()];
    slots.extend(nu.iter().cloned());
    let last_slot = slots.pop().unwrap();
    terms.extend(slots.into_iter().zip(nu.iter().cloned()).map(|(r, d)| Term::new(r, d)));
    terms.push(Term::new(last_slot, a3.child(1)));
    terms.push(Term::new(a3.clone(), a3.child(2)));

    GroupElement::validate_unitary(terms).ok()
}

fn triple_chain(p: &DiagonalProjection, level: usize) -> Option<GroupElement> {
    let mut cells = p.cells(level).ok()?;
    let mut current = DiagonalProjection::from_sorted_antichain(cells.clone());
    let mut steps: Vec<GroupElement> = Vec::new();
    while cells.len() > 2 {
        let t = triple_step(&cells[0], &cells[1], &cells[2], level)?;
        cells.drain(..3);
        let next = DiagonalProjection::from_sorted_antichain(cells.clone());
        if act_unchecked(&t, &current) != next {
            return None;
        }
        steps.push(t.inverse());
        current = next;
    }
    let mut f = leaf_dp(&current, 3, 3)?;
    for s in steps.iter().rev() {
        f = s.multiply(&f);
    }
    Some(f)
}

#[derive(Clone)]
struct Piece {
    range: Word,
    depth: u32,
    start: u128,
}

/// Searches tree pairs whose range leaves are the canonical leaves of `p` and
/// of `1 − p` (each whole or split in half) and whose domain leaves are
/// aligned dyadic intervals with depth within `reach` of the range depth,
/// with parity forced by the side of `p` the range leaf lies on.
fn leaf_dp(p: &DiagonalProjection, slack: u32, reach: u32) -> Option<GroupElement> {
    let mut leaves: Vec<(Word, bool)> = p.support().iter().map(|w| (w.clone(), true)).collect();
    leaves.extend(p.complement().into_support().into_iter().map(|w| (w, false)));
    leaves.sort();

    let scale = leaves.iter().map(|(w, _)| w.len() as u32).max()? + slack;
    if scale > 127 {
        return None;
    }
    let total: u128 = 1u128 << scale;

    let mut layers: Vec<BTreeMap<u128, (u128, Vec<Piece>)>> = Vec::with_capacity(leaves.len() + 1);
    let mut start = BTreeMap::new();
    start.insert(0u128, (0u128, Vec::new()));
    layers.push(start);

    for (leaf, inside) in &leaves {
        let mut options = vec![vec![leaf.clone()]];
        if (leaf.len() as u32) < scale {
            options.push(vec![leaf.child(1), leaf.child(2)]);
        }
        let mut next: BTreeMap<u128, (u128, Vec<Piece>)> = BTreeMap::new();
        for &pos in layers.last().unwrap().keys() {
            for opt in &options {
                place(opt, *inside, pos, scale, reach, total, &mut Vec::new(), &mut |end, pieces| {
                    next.entry(end).or_insert_with(|| (pos, pieces.to_vec()));
                });
            }
            if next.len() > DP_LAYER_CAP {
                return None;
            }
        }
        if next.is_empty() {
            return None;
        }
        layers.push(next);
    }

    let mut pos = total;
    let mut terms = Vec::with_capacity(leaves.len() * 2);
    for layer in layers.iter().skip(1).rev() {
        let (prev, pieces) = layer.get(&pos)?;
        for pc in pieces {
            terms.push(Term::new(pc.range.clone(), Word::from_endpoint(pc.start, pc.depth, scale)));
        }
        pos = *prev;
    }
    GroupElement::validate_unitary(terms).ok()
}

#[allow(clippy::too_many_arguments)]
fn place(
    ranges: &[Word],
    inside: bool,
    pos: u128,
    scale: u32,
    reach: u32,
    total: u128,
    acc: &mut Vec<Piece>,
    emit: &mut dyn FnMut(u128, &[Piece]),
) {
    let Some((r, rest)) = ranges.split_first() else {
        emit(pos, acc);
        return;
    };
    let rl = r.len() as u32;
    for d in rl.saturating_sub(reach)..=(rl + reach).min(scale) {
        if ((rl + d) % 2 == 0) != inside {
            continue;
        }
        let width = 1u128 << (scale - d);
        if pos % width != 0 || total - pos < width {
            continue;
        }
        acc.push(Piece { range: r.clone(), depth: d, start: pos });
        place(rest, inside, pos + width, scale, reach, total, acc, emit);
        acc.pop();
    }
}
