#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rand::seq::IndexedRandom;
use rand::Rng;

use ftrees_core::{
    boundary::{PairTruncation, TreeTruncation},
    omega2_member, DiagonalProjection, DyadicRational, GroupElement, Word,
};

/// A random projection whose support is a random subset of the level-`level`
/// cells (each cell kept with probability 1/2).
pub fn random_uniform_projection(rng: &mut impl Rng, level: usize) -> DiagonalProjection {
    DiagonalProjection::from_words(Word::level(level).into_iter().filter(|_| rng.random_bool(0.5)))
}

pub fn random_projection(rng: &mut impl Rng, max_level: usize) -> DiagonalProjection {
    let level = rng.random_range(0..=max_level);
    random_uniform_projection(rng, level)
}

/// A random level-`level` support with `|J| ≡ 2 (mod 3)`.
pub fn random_omega2_support(rng: &mut impl Rng, level: usize) -> DiagonalProjection {
    let cells = Word::level(level);
    let sizes: Vec<usize> = (2..=cells.len()).step_by(3).collect();
    let size = *sizes.choose(rng).unwrap();
    let chosen: Vec<Word> = cells.choose_multiple(rng, size).cloned().collect();
    DiagonalProjection::from_words(chosen)
}

pub fn pick<'a, T>(rng: &mut impl Rng, xs: &'a [T]) -> &'a T {
    xs.choose(rng).unwrap()
}

/// `(range, domain, complemented)` pieces of the displayed closed forms for
/// `x0·p`, `x0⁻¹·p`, `x1·p`, `x1⁻¹·p`:
/// `Σ S_range (S_domain* p S_domain or its complement) S_range*`.
pub fn closed_form_pieces() -> [(&'static str, Vec<(&'static str, &'static str, bool)>); 4] {
    [
        ("x0", vec![("11", "1", true), ("12", "21", false), ("2", "22", true)]),
        ("x0^-1", vec![("1", "11", true), ("21", "12", false), ("22", "2", true)]),
        ("x1", vec![("1", "1", false), ("211", "21", true), ("212", "221", false), ("22", "222", true)]),
        ("x1^-1", vec![("1", "1", false), ("21", "211", true), ("221", "212", false), ("222", "22", true)]),
    ]
}

pub fn closed_form_action(pieces: &[(&str, &str, bool)], p: &DiagonalProjection) -> DiagonalProjection {
    let mut out = DiagonalProjection::zero();
    for (range, domain, comp) in pieces {
        let mut r = p.restrict(&domain.parse().unwrap());
        if *comp {
            r = r.complement();
        }
        out = out.join(&r.transport(&range.parse().unwrap()));
    }
    out
}

/// Signed `a − b` for dyadics, as `(numerator, exponent)`.
pub fn signed_difference(a: &DyadicRational, b: &DyadicRational) -> (BigInt, u32) {
    let e = a.exponent().max(b.exponent());
    let na = BigInt::from(a.scaled_to(e).unwrap());
    let nb = BigInt::from(b.scaled_to(e).unwrap());
    (na - nb, e)
}

/// Whether `2^shift · (a − b)` lies in `3·ℤ[1/2]`.
pub fn residue_divisible_by_three(a: &DyadicRational, b: &DyadicRational) -> bool {
    let (n, _) = signed_difference(a, b);
    // powers of two are units mod 3, so only the odd part matters
    n.is_zero() || (&n % 3) == BigInt::zero()
}

/// All leafless, prefix-closed trees of exact depth `depth` (non-empty).
pub fn all_trees(depth: usize) -> Vec<BTreeSet<Word>> {
    fn rooted(at: &Word, depth: usize) -> Vec<BTreeSet<Word>> {
        if depth == 0 {
            return vec![BTreeSet::from([at.clone()])];
        }
        let left = rooted(&at.child(1), depth - 1);
        let right = rooted(&at.child(2), depth - 1);
        let mut out = Vec::new();
        for l in &left {
            let mut t = l.clone();
            t.insert(at.clone());
            out.push(t);
        }
        for r in &right {
            let mut t = r.clone();
            t.insert(at.clone());
            out.push(t);
        }
        for l in &left {
            for r in &right {
                let mut t: BTreeSet<Word> = l.union(r).cloned().collect();
                t.insert(at.clone());
                out.push(t);
            }
        }
        out
    }
    rooted(&Word::empty(), depth)
}

/// All pairs of trees (each possibly empty) at `depth`.
pub fn all_pairs(depth: usize) -> Vec<PairTruncation> {
    let mut trees: Vec<TreeTruncation> = vec![TreeTruncation::empty(depth)];
    trees.extend(all_trees(depth).into_iter().map(|t| TreeTruncation::new(depth, t).unwrap()));
    let mut out = Vec::with_capacity(trees.len() * trees.len());
    for l in &trees {
        for r in &trees {
            out.push(PairTruncation::new(l.clone(), r.clone()).unwrap());
        }
    }
    out
}

/// Exhaustive search over level-7 supports, organized by the number of cells
/// under each depth-`k` vertex: returns a witness `q ∈ Ω₂` with the given
/// window, or `None`.
pub fn brute_force_realize(pair: &PairTruncation) -> Option<DiagonalProjection> {
    const LEVEL: usize = 7;
    let k = pair.depth();
    let cells = 1usize << (LEVEL - k);
    // allowed cell counts per frontier vertex
    let mut options: Vec<(Word, Vec<usize>)> = Vec::new();
    for v in Word::level(k) {
        let (l, r) = (pair.left.contains(&v), pair.right.contains(&v));
        let counts: Vec<usize> = match (l, r) {
            (true, false) => vec![cells],
            (false, true) => vec![0],
            (true, true) => (1..cells).collect(),
            (false, false) => return None,
        };
        options.push((v, counts));
    }
    // residue reachability, remembering one count per step
    let mut reach: Vec<[Option<usize>; 3]> = Vec::with_capacity(options.len() + 1);
    let mut cur = [Some(0usize), None, None];
    for (_, counts) in &options {
        let mut next = [None; 3];
        for (res, slot) in cur.iter().enumerate() {
            if slot.is_some() {
                for &c in counts {
                    let n = (res + c) % 3;
                    if next[n].is_none() {
                        next[n] = Some(c);
                    }
                }
            }
        }
        reach.push(cur);
        cur = next;
    }
    cur[2]?;
    // walk back to recover counts
    let mut chosen = vec![0usize; options.len()];
    let mut res = 2usize;
    for i in (0..options.len()).rev() {
        let prev = &reach[i];
        let (c, r) = options[i]
            .1
            .iter()
            .find_map(|&c| {
                let r = (res + 3 - c % 3) % 3;
                prev[r].map(|_| (c, r))
            })
            .expect("reachable");
        chosen[i] = c;
        res = r;
    }
    let mut words = Vec::new();
    for ((v, _), &c) in options.iter().zip(&chosen) {
        words.extend(Word::level(LEVEL - k).into_iter().take(c).map(|s| v.concat(&s)));
    }
    let q = DiagonalProjection::from_words(words);
    if q.is_zero() {
        return None;
    }
    let total: usize = chosen.iter().sum();
    assert_eq!(q.trace().scaled_to(LEVEL as u32).unwrap(), BigUint::from(total));
    assert!(omega2_member(&q).is_some());
    Some(q)
}

pub fn elements_of(ball: Vec<(ftrees_core::GeneratorWord, GroupElement)>) -> Vec<GroupElement> {
    ball.into_iter().map(|(_, f)| f).collect()
}
