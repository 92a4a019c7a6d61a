use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dyadic::DyadicRational;
use crate::elements::GroupElement;
use crate::error::{Error, Result};
use crate::words::Word;

/// A diagonal projection `Σ P_w`, stored as the canonical support: a sorted
/// antichain in which no two siblings both occur.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DiagonalProjection {
    support: Vec<Word>,
}

fn is_sibling_pair(a: &Word, b: &Word) -> bool {
    a.last() == Some(1) && b.last() == Some(2) && a.is_sibling_of(b)
}

/// Collapses complete sibling families in a sorted antichain.
fn merge_siblings(words: impl IntoIterator<Item = Word>) -> Vec<Word> {
    let mut stack: Vec<Word> = Vec::new();
    for w in words {
        stack.push(w);
        while stack.len() >= 2 && is_sibling_pair(&stack[stack.len() - 2], &stack[stack.len() - 1]) {
            stack.pop();
            let left = stack.pop().unwrap();
            stack.push(left.parent().unwrap());
        }
    }
    stack
}

impl DiagonalProjection {
    pub fn zero() -> Self {
        DiagonalProjection { support: Vec::new() }
    }

    pub fn one() -> Self {
        DiagonalProjection { support: vec![Word::empty()] }
    }

    /// `P_w`.
    pub fn cylinder(w: Word) -> Self {
        DiagonalProjection { support: vec![w] }
    }

    /// The join of `P_w` over any collection of words (overlaps allowed).
    pub fn from_words(words: impl IntoIterator<Item = Word>) -> Self {
        let mut ws: Vec<Word> = words.into_iter().collect();
        ws.sort();
        ws.dedup();
        let mut kept: Vec<Word> = Vec::with_capacity(ws.len());
        for w in ws {
            // in sorted order an ancestor directly precedes its descendants
            if kept.last().is_some_and(|k| k.is_prefix_of(&w)) {
                continue;
            }
            kept.push(w);
        }
        DiagonalProjection { support: merge_siblings(kept) }
    }

    /// Canonicalizes an already sorted antichain.
    pub(crate) fn from_sorted_antichain(words: Vec<Word>) -> Self {
        debug_assert!(crate::words::sorted_is_antichain(&words));
        DiagonalProjection { support: merge_siblings(words) }
    }

    pub fn support(&self) -> &[Word] {
        &self.support
    }

    pub fn into_support(self) -> Vec<Word> {
        self.support
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.support.len() == 1 && self.support[0].is_empty()
    }

    /// Length of the longest support word; 0 for `0` and `1`.
    pub fn level(&self) -> usize {
        self.support.iter().map(Word::len).max().unwrap_or(0)
    }

    pub fn trace(&self) -> DyadicRational {
        let e = self.level();
        if e < 128 {
            let n: u128 = self.support.iter().map(|w| 1u128 << (e - w.len())).sum();
            DyadicRational::new(BigUint::from(n), e as u32)
        } else {
            let n: BigUint = self.support.iter().map(|w| BigUint::from(1u8) << (e - w.len())).sum();
            DyadicRational::new(n, e as u32)
        }
    }

    /// Whether `P_w ≤ self`.
    pub fn covers(&self, w: &Word) -> bool {
        let idx = self.support.partition_point(|s| s <= w);
        idx > 0 && self.support[idx - 1].is_prefix_of(w)
    }

    /// Whether `self · P_w ≠ 0`.
    pub fn meets(&self, w: &Word) -> bool {
        let idx = self.support.partition_point(|s| s < w);
        (idx < self.support.len() && w.is_prefix_of(&self.support[idx]))
            || (idx > 0 && self.support[idx - 1].is_prefix_of(w))
    }

    /// The support words under `beta`, or `Covered` when some prefix of
    /// `beta` is in the support.
    fn under<'a>(&'a self, beta: &Word) -> Under<'a> {
        let idx = self.support.partition_point(|s| s < beta);
        if idx > 0 && self.support[idx - 1].is_prefix_of(beta) {
            return Under::Covered;
        }
        let end = idx + self.support[idx..].partition_point(|s| beta.is_prefix_of(s));
        if end == idx + 1 && self.support[idx] == *beta {
            return Under::Covered;
        }
        Under::Part(&self.support[idx..end])
    }

    /// `S_β* p S_β`: the part of `self` under `beta`, moved to the root.
    pub fn restrict(&self, beta: &Word) -> DiagonalProjection {
        match self.under(beta) {
            Under::Covered => DiagonalProjection::one(),
            Under::Part(ws) => DiagonalProjection {
                support: ws.iter().map(|w| w.strip_prefix(beta).unwrap()).collect(),
            },
        }
    }

    /// `S_α p S_α*`.
    pub fn transport(&self, alpha: &Word) -> DiagonalProjection {
        DiagonalProjection { support: self.support.iter().map(|w| alpha.concat(w)).collect() }
    }

    /// `1 - p`.
    pub fn complement(&self) -> DiagonalProjection {
        let mut out = Vec::new();
        complement_into(&self.support, 0, &Word::empty(), &mut out);
        DiagonalProjection { support: out }
    }

    pub fn meet(&self, other: &DiagonalProjection) -> DiagonalProjection {
        let mut out = Vec::new();
        for w in &self.support {
            match other.under(w) {
                Under::Covered => out.push(w.clone()),
                Under::Part(ws) => out.extend(ws.iter().cloned()),
            }
        }
        DiagonalProjection::from_sorted_antichain(out)
    }

    pub fn join(&self, other: &DiagonalProjection) -> DiagonalProjection {
        DiagonalProjection::from_words(self.support.iter().chain(&other.support).cloned())
    }

    /// `p ≤ q`.
    pub fn is_below(&self, other: &DiagonalProjection) -> bool {
        self.support.iter().all(|w| other.covers(w))
    }

    /// Every support word refined to exactly `level` letters.
    pub fn cells(&self, level: usize) -> Result<Vec<Word>> {
        if self.level() > level {
            return Err(Error::Parse(format!("projection has words longer than {level}")));
        }
        let mut out = Vec::new();
        for w in &self.support {
            let extra = level - w.len();
            for k in 0..(1u64 << extra) {
                let suffix: Vec<u8> = (0..extra).rev().map(|b| if k >> b & 1 == 0 { 1 } else { 2 }).collect();
                out.push(w.concat_letters(&suffix));
            }
        }
        Ok(out)
    }
}

enum Under<'a> {
    Covered,
    Part(&'a [Word]),
}

/// Emits `alpha · κ` for the leaves `κ` of the complement of `words`, read
/// from letter `start` on (all words share their first `start` letters).
fn complement_into(words: &[Word], start: usize, alpha: &Word, out: &mut Vec<Word>) {
    fn go(words: &[Word], pos: usize, node: &mut Vec<u8>, alpha: &Word, out: &mut Vec<Word>) {
        if words.is_empty() {
            out.push(alpha.concat_letters(node));
            return;
        }
        if words.len() == 1 && words[0].len() == pos {
            return;
        }
        let split = words.partition_point(|w| w.letters()[pos] == 1);
        node.push(1);
        go(&words[..split], pos + 1, node, alpha, out);
        node.pop();
        node.push(2);
        go(&words[split..], pos + 1, node, alpha, out);
        node.pop();
    }
    go(words, start, &mut Vec::new(), alpha, out);
}

/// `f · p = f₀ p f₀* + f₁ (1 − p) f₁*` without the order-preservation check.
pub(crate) fn act_unchecked(f: &GroupElement, p: &DiagonalProjection) -> DiagonalProjection {
    let mut out: Vec<Word> = Vec::with_capacity(p.support.len() + f.len());
    for t in f.terms() {
        let even = t.is_even();
        match p.under(&t.domain) {
            Under::Covered => {
                if even {
                    out.push(t.range.clone());
                }
            }
            Under::Part(ws) => {
                let k = t.domain.len();
                if even {
                    out.extend(ws.iter().map(|w| t.range.concat_letters(&w.letters()[k..])));
                } else {
                    complement_into(ws, k, &t.range, &mut out);
                }
            }
        }
    }
    DiagonalProjection::from_sorted_antichain(out)
}

/// The action of F on diagonal projections.
pub fn act(f: &GroupElement, p: &DiagonalProjection) -> Result<DiagonalProjection> {
    f.require_f()?;
    Ok(act_unchecked(f, p))
}

/// `τ(|p − q|)`.
pub fn d_tau(p: &DiagonalProjection, q: &DiagonalProjection) -> DyadicRational {
    let m = p.meet(q).trace();
    let s = &p.trace() + &q.trace();
    s.checked_sub(&(&m + &m)).expect("meet is below both")
}

impl fmt::Display for DiagonalProjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        if self.is_one() {
            return f.write_str("1");
        }
        for (i, w) in self.support.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "P[{w}]")?;
        }
        Ok(())
    }
}

impl fmt::Debug for DiagonalProjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `0`, `1`, or `P[w1]+P[w2]+...`; the summands must be pairwise orthogonal.
impl FromStr for DiagonalProjection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "0" => return Ok(DiagonalProjection::zero()),
            "1" => return Ok(DiagonalProjection::one()),
            _ => {}
        }
        let mut words = Vec::new();
        for part in s.split('+') {
            let part = part.trim();
            let inner = part
                .strip_prefix("P[")
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(|| Error::Parse(format!("expected P[word], got {part:?}")))?;
            words.push(inner.trim().parse::<Word>()?);
        }
        words.sort();
        if words.windows(2).any(|w| w[0].is_prefix_of(&w[1])) {
            return Err(Error::Parse(format!("summands of {s:?} overlap")));
        }
        Ok(DiagonalProjection::from_sorted_antichain(words))
    }
}

impl Serialize for DiagonalProjection {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DiagonalProjection {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
