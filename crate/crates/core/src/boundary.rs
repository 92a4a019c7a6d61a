//! Depth-`k` windows onto the closure of Ω₂ inside pairs of rooted subtrees of
//! the binary tree, via `q ↦ (q, 1 − q)`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::elements::GroupElement;
use crate::error::{Error, Result};
use crate::omega::{act_unchecked, omega2_member, DiagonalProjection};
use crate::words::Word;

/// A prefix-closed set of words of length `<= depth` with no leaves above
/// `depth`; the empty set is the empty tree.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TreeTruncation {
    depth: usize,
    vertices: BTreeSet<Word>,
}

impl TreeTruncation {
    pub fn new(depth: usize, vertices: impl IntoIterator<Item = Word>) -> Result<Self> {
        let vertices: BTreeSet<Word> = vertices.into_iter().collect();
        for v in &vertices {
            if v.len() > depth {
                return Err(Error::MalformedPair(format!("vertex {v} is deeper than {depth}")));
            }
            if let Some(parent) = v.parent() {
                if !vertices.contains(&parent) {
                    return Err(Error::MalformedPair(format!("vertex {v} present without its parent")));
                }
            }
            if v.len() < depth && !vertices.contains(&v.child(1)) && !vertices.contains(&v.child(2)) {
                return Err(Error::MalformedPair(format!("vertex {v} is a leaf above depth {depth}")));
            }
        }
        Ok(TreeTruncation { depth, vertices })
    }

    pub fn full(depth: usize) -> Self {
        TreeTruncation { depth, vertices: (0..=depth).flat_map(Word::level).collect() }
    }

    pub fn empty(depth: usize) -> Self {
        TreeTruncation { depth, vertices: BTreeSet::new() }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn vertices(&self) -> &BTreeSet<Word> {
        &self.vertices
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.vertices.contains(w)
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    /// The depth-`depth` vertices.
    pub fn frontier(&self) -> impl Iterator<Item = &Word> {
        self.vertices.iter().filter(move |w| w.len() == self.depth)
    }

    pub fn truncate(&self, depth: usize) -> TreeTruncation {
        assert!(depth <= self.depth);
        TreeTruncation { depth, vertices: self.vertices.iter().filter(|w| w.len() <= depth).cloned().collect() }
    }

    /// The vertices `α` with `|α| <= k` and `q · P_α ≠ 0`.
    fn of_projection(q: &DiagonalProjection, depth: usize) -> Self {
        let mut vertices = BTreeSet::new();
        let mut stack = vec![Word::empty()];
        while let Some(a) = stack.pop() {
            if !q.meets(&a) {
                continue;
            }
            if a.len() < depth {
                stack.push(a.child(2));
                stack.push(a.child(1));
            }
            vertices.insert(a);
        }
        TreeTruncation { depth, vertices }
    }
}

/// `(left, right)` truncations at a common depth.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PairTruncation {
    pub left: TreeTruncation,
    pub right: TreeTruncation,
}

impl PairTruncation {
    pub fn new(left: TreeTruncation, right: TreeTruncation) -> Result<Self> {
        if left.depth != right.depth {
            return Err(Error::MalformedPair(format!("depths {} and {} differ", left.depth, right.depth)));
        }
        Ok(PairTruncation { left, right })
    }

    pub fn depth(&self) -> usize {
        self.left.depth
    }

    pub fn full_full(depth: usize) -> Self {
        PairTruncation { left: TreeTruncation::full(depth), right: TreeTruncation::full(depth) }
    }

    pub fn truncate(&self, depth: usize) -> PairTruncation {
        PairTruncation { left: self.left.truncate(depth), right: self.right.truncate(depth) }
    }

    /// Every word of length `<= depth` lies in one of the trees.
    pub fn covers_all(&self) -> bool {
        let n: usize = (0..=self.depth()).map(|i| 1usize << i).sum();
        self.left.vertices.union(&self.right.vertices).count() == n
    }
}

#[derive(Serialize, Deserialize)]
struct PairJson {
    depth: usize,
    left: Vec<Word>,
    right: Vec<Word>,
}

impl Serialize for PairTruncation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PairJson {
            depth: self.depth(),
            left: self.left.vertices.iter().cloned().collect(),
            right: self.right.vertices.iter().cloned().collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PairTruncation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PairJson::deserialize(d)?;
        let mk = |v| TreeTruncation::new(j.depth, v).map_err(serde::de::Error::custom);
        let left = mk(j.left.clone())?;
        let right = mk(j.right.clone())?;
        PairTruncation::new(left, right).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for PairTruncation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |t: &TreeTruncation| t.vertices.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "depth {}: left {{{}}} right {{{}}}", self.depth(), list(&self.left), list(&self.right))
    }
}

/// `(q, 1 − q)` truncated at depth `k`.
pub fn embed(q: &DiagonalProjection, k: usize) -> Result<PairTruncation> {
    if q.is_zero() {
        return Err(Error::ZeroProjection);
    }
    Ok(embed_any(q, k))
}

fn embed_any(q: &DiagonalProjection, k: usize) -> PairTruncation {
    PairTruncation {
        left: TreeTruncation::of_projection(q, k),
        right: TreeTruncation::of_projection(&q.complement(), k),
    }
}

/// The depth-`(k − height f)` truncation of `f · (ω, η)` for any `(ω, η)`
/// extending `pair`. The window must be deeper than the height of `f` and at
/// least as deep as its domain words.
pub fn act_truncated(f: &GroupElement, pair: &PairTruncation) -> Result<PairTruncation> {
    f.require_f()?;
    let k = pair.depth();
    let h = f.height() as usize;
    let required = (h + 1).max(f.domain_depth());
    if k < required {
        return Err(Error::DepthTooShallow { depth: k, required });
    }
    Ok(act_truncated_unchecked(f, pair))
}

fn act_truncated_unchecked(f: &GroupElement, pair: &PairTruncation) -> PairTruncation {
    let out_depth = pair.depth() - f.height() as usize;
    // α is in the left image iff for some term (a, b) prefix-related to α the
    // matching word under b meets q (even term) or 1 − q (odd term)
    let side = |even_tree: &TreeTruncation, odd_tree: &TreeTruncation| {
        let mut vertices = BTreeSet::new();
        for t in f.terms() {
            let tree = if t.is_even() { even_tree } else { odd_tree };
            for j in 0..t.range.len().min(out_depth + 1) {
                if tree.contains(&t.domain) {
                    vertices.insert(t.range.prefix(j));
                }
            }
            if t.range.len() > out_depth {
                continue;
            }
            // vertices aκ: the image of bκ
            let mut stack = vec![Word::empty()];
            while let Some(kappa) = stack.pop() {
                if !tree.contains(&t.domain.concat(&kappa)) {
                    continue;
                }
                let a = t.range.concat(&kappa);
                if a.len() < out_depth {
                    stack.push(kappa.child(1));
                    stack.push(kappa.child(2));
                }
                vertices.insert(a);
            }
        }
        TreeTruncation { depth: out_depth, vertices }
    };
    PairTruncation { left: side(&pair.left, &pair.right), right: side(&pair.right, &pair.left) }
}

/// Whether the depth-`k` windows of the sequence are constant over its last
/// half (a finite certificate of eventual stabilization).
pub fn stabilizes(seq: &[DiagonalProjection], k: usize) -> bool {
    let tail = &seq[seq.len() / 2..];
    let mut windows = tail.iter().map(|q| embed_any(q, k));
    match windows.next() {
        None => true,
        Some(first) => windows.all(|w| w == first),
    }
}

/// Whether some `q ∈ Ω₂` has `embed(q, k) = pair`.
pub fn is_realizable(pair: &PairTruncation) -> Result<bool> {
    check_trees(pair)?;
    if pair.left.is_empty() || !pair.covers_all() {
        return Ok(false);
    }
    if pair.left.frontier().any(|v| pair.right.contains(v)) {
        return Ok(true);
    }
    let q = DiagonalProjection::from_words(pair.left.frontier().cloned());
    Ok(omega2_member(&q).is_some() && embed_any(&q, pair.depth()) == *pair)
}

fn check_trees(pair: &PairTruncation) -> Result<()> {
    let k = pair.depth();
    TreeTruncation::new(k, pair.left.vertices.iter().cloned())?;
    TreeTruncation::new(k, pair.right.vertices.iter().cloned())?;
    if pair.right.depth != k {
        return Err(Error::MalformedPair("depths differ".into()));
    }
    Ok(())
}

/// Two distinct `q, q′ ∈ Ω₂` with the same depth-`k` window, differing only
/// below the shared frontier vertices.
pub fn non_isolation_witness(pair: &PairTruncation) -> Result<(DiagonalProjection, DiagonalProjection)> {
    if !is_realizable(pair)? {
        return Err(Error::NotRealizable);
    }
    let k = pair.depth();
    let shared: Vec<&Word> = pair.left.frontier().filter(|v| pair.right.contains(v)).collect();
    if shared.is_empty() {
        return Err(Error::RigidPair);
    }
    let level = if (k + 3) % 2 == 1 { k + 3 } else { k + 4 };
    let below = level - k;
    // every left-only frontier vertex is a full 2^below cells; shared ones
    // get a partial count, nudged to make the total ≡ 2 (mod 3)
    let full_cells: usize = pair.left.frontier().filter(|v| !pair.right.contains(v)).count() << below;
    let mut counts = vec![1usize; shared.len()];
    let total = full_cells + shared.len();
    counts[0] += (2 + 3 - total % 3) % 3;
    let build = |counts: &[usize]| {
        let mut words: Vec<Word> = pair.left.frontier().filter(|v| !pair.right.contains(v)).cloned().collect();
        for (v, &c) in shared.iter().zip(counts) {
            words.extend(Word::level(below).into_iter().take(c).map(|s| v.concat(&s)));
        }
        DiagonalProjection::from_words(words)
    };
    let q = build(&counts);
    counts[0] += 3;
    let q2 = build(&counts);
    for p in [&q, &q2] {
        if omega2_member(p).is_none() || embed_any(p, k) != *pair {
            return Err(Error::InternalSearchExhausted(format!("witness {p} failed verification")));
        }
    }
    debug_assert_ne!(q, q2);
    Ok((q, q2))
}

/// Applies `f` to `q` and truncates; convenience for the commuting square.
pub fn embed_after_act(f: &GroupElement, q: &DiagonalProjection, k: usize) -> Result<PairTruncation> {
    f.require_f()?;
    embed(&act_unchecked(f, q), k)
}
