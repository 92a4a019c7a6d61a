//! Binary multi-indices (vertices of the infinite binary tree) and complete
//! prefix codes over the alphabet `{1, 2}`.

use std::borrow::Borrow;
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use crate::dyadic::DyadicRational;
use crate::error::{Error, Result};

/// A finite word over `{1, 2}`. The empty word is the root and prints as `e`.
///
/// The derived `Ord` is the lexicographic order in which a proper prefix
/// sorts before its extensions; restricted to an antichain it agrees with
/// [`lex_compare`].
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(SmallVec<[u8; 24]>);

impl Word {
    pub fn empty() -> Self {
        Word(SmallVec::new())
    }

    /// Builds a word from letters, each of which must be 1 or 2.
    pub fn from_letters(letters: &[u8]) -> Result<Self> {
        if let Some(bad) = letters.iter().find(|&&l| l != 1 && l != 2) {
            return Err(Error::Parse(format!("letter {bad} is not 1 or 2")));
        }
        Ok(Word(SmallVec::from_slice(letters)))
    }

    /// The constant word `letter^n`.
    pub fn repeat(letter: u8, n: usize) -> Self {
        debug_assert!(letter == 1 || letter == 2);
        Word(SmallVec::from_elem(letter, n))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn last(&self) -> Option<u8> {
        self.0.last().copied()
    }

    pub fn parent(&self) -> Option<Word> {
        if self.0.is_empty() {
            None
        } else {
            Some(Word(SmallVec::from_slice(&self.0[..self.0.len() - 1])))
        }
    }

    pub fn child(&self, letter: u8) -> Word {
        debug_assert!(letter == 1 || letter == 2);
        let mut w = self.clone();
        w.0.push(letter);
        w
    }

    pub fn concat(&self, suffix: &Word) -> Word {
        let mut w = self.clone();
        w.0.extend_from_slice(&suffix.0);
        w
    }

    pub fn concat_letters(&self, suffix: &[u8]) -> Word {
        let mut w = self.clone();
        w.0.extend_from_slice(suffix);
        w
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(SmallVec::from_slice(&self.0[..n]))
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    /// The suffix `κ` with `self = prefix κ`, if `prefix` is a prefix of `self`.
    pub fn strip_prefix(&self, prefix: &Word) -> Option<Word> {
        self.0.strip_prefix(&prefix.0[..]).map(|s| Word(SmallVec::from_slice(s)))
    }

    /// True iff this is `2^n` for some `n` (a vertex on the right spine).
    pub fn is_all_twos(&self) -> bool {
        self.0.iter().all(|&l| l == 2)
    }

    pub fn is_sibling_of(&self, other: &Word) -> bool {
        let n = self.len();
        n > 0 && n == other.len() && self.0[..n - 1] == other.0[..n - 1] && self.0[n - 1] != other.0[n - 1]
    }

    /// The left endpoint of the cylinder of this word, as the integer
    /// numerator over `2^scale`. Requires `len() <= scale <= 127`.
    pub fn left_endpoint(&self, scale: u32) -> u128 {
        debug_assert!(self.len() as u32 <= scale && scale < 128);
        let mut x: u128 = 0;
        for &l in self.0.iter() {
            x = (x << 1) | u128::from(l - 1);
        }
        x << (scale - self.len() as u32)
    }

    /// The word of length `depth` whose cylinder starts at `pos / 2^scale`.
    /// `pos` must be a multiple of `2^(scale - depth)`.
    pub fn from_endpoint(pos: u128, depth: u32, scale: u32) -> Word {
        debug_assert!(depth <= scale);
        let cell = pos >> (scale - depth);
        let letters: SmallVec<[u8; 24]> =
            (0..depth).rev().map(|bit| if (cell >> bit) & 1 == 1 { 2 } else { 1 }).collect();
        Word(letters)
    }

    /// All `2^n` words of length `n` in lexicographic order.
    pub fn level(n: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..n {
            out = out.iter().flat_map(|w| [w.child(1), w.child(2)]).collect();
        }
        out
    }

    /// Contribution `2^-|w|` to a trace or Kraft sum.
    pub fn weight(&self) -> DyadicRational {
        DyadicRational::pow2_inv(self.len() as u32)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for &l in self.0.iter() {
            f.write_str(if l == 1 { "1" } else { "2" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "e" || s.is_empty() {
            return Ok(Word::empty());
        }
        let mut letters = SmallVec::new();
        for c in s.chars() {
            match c {
                '1' => letters.push(1),
                '2' => letters.push(2),
                _ => return Err(Error::Parse(format!("bad letter {c:?} in word {s:?}"))),
            }
        }
        Ok(Word(letters))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Outcome of comparing two words in the lexicographic order on the tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LexOrder {
    Before,
    After,
    /// One word is a prefix of the other (including equality).
    PrefixRelated,
}

pub fn lex_compare(u: &Word, v: &Word) -> LexOrder {
    for (a, b) in u.letters().iter().zip(v.letters()) {
        match a.cmp(b) {
            Ordering::Less => return LexOrder::Before,
            Ordering::Greater => return LexOrder::After,
            Ordering::Equal => {}
        }
    }
    LexOrder::PrefixRelated
}

pub fn is_prefix(u: &Word, v: &Word) -> bool {
    u.is_prefix_of(v)
}

pub fn kraft_sum<'a>(words: impl IntoIterator<Item = &'a Word>) -> DyadicRational {
    words.into_iter().map(Word::weight).sum()
}

/// Checks that a lexicographically sorted list is an antichain. In sorted
/// order only neighbours can be prefix-related.
pub(crate) fn sorted_is_antichain(words: &[Word]) -> bool {
    words.windows(2).all(|w| lex_compare(&w[0], &w[1]) == LexOrder::Before)
}

/// A complete prefix code: the leaf set of a finite binary tree, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CompleteCode(Vec<Word>);

impl CompleteCode {
    pub fn new(mut words: Vec<Word>) -> Result<Self> {
        words.sort();
        if !sorted_is_antichain(&words) {
            return Err(Error::NotUnitary("words are not prefix-free".into()));
        }
        let kraft = kraft_sum(&words);
        if !kraft.is_one() {
            return Err(Error::NotUnitary(format!("Kraft sum is {kraft}, not 1")));
        }
        Ok(CompleteCode(words))
    }

    pub(crate) fn from_sorted_unchecked(words: Vec<Word>) -> Self {
        CompleteCode(words)
    }

    /// The code `{e}` of the trivial tree.
    pub fn root() -> Self {
        CompleteCode(vec![Word::empty()])
    }

    /// All words of length `n`.
    pub fn uniform(n: usize) -> Self {
        CompleteCode(Word::level(n))
    }

    pub fn words(&self) -> &[Word] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_words(self) -> Vec<Word> {
        self.0
    }

    /// True iff every word of `self` has a prefix in `coarser`.
    pub fn refines(&self, coarser: &CompleteCode) -> bool {
        common_refinement(self, coarser) == *self
    }
}

/// Walks two sorted complete codes in step. At each step the current words
/// start at the same dyadic point and so are prefix-related; `emit` receives
/// `(i, j)` for every such aligned pair.
pub(crate) fn walk_aligned<A: Borrow<Word>, B: Borrow<Word>>(a: &[A], b: &[B], mut emit: impl FnMut(usize, usize)) {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let (u, v) = (a[i].borrow(), b[j].borrow());
        debug_assert_eq!(lex_compare(u, v), LexOrder::PrefixRelated);
        emit(i, j);
        match u.len().cmp(&v.len()) {
            Ordering::Equal => {
                i += 1;
                j += 1;
            }
            Ordering::Less => {
                // v sits under u; u is exhausted once v reaches u's right edge.
                if v.letters()[u.len()..].iter().all(|&l| l == 2) {
                    i += 1;
                }
                j += 1;
            }
            Ordering::Greater => {
                if u.letters()[v.len()..].iter().all(|&l| l == 2) {
                    j += 1;
                }
                i += 1;
            }
        }
    }
}

/// The coarsest complete code refining both inputs.
pub fn common_refinement(a: &CompleteCode, b: &CompleteCode) -> CompleteCode {
    let mut out = Vec::with_capacity(a.len().max(b.len()));
    walk_aligned(&a.0, &b.0, |i, j| {
        let (u, v) = (&a.0[i], &b.0[j]);
        out.push(if u.len() >= v.len() { u.clone() } else { v.clone() });
    });
    CompleteCode(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn code(ws: &[&str]) -> CompleteCode {
        CompleteCode::new(ws.iter().map(|s| w(s)).collect()).unwrap()
    }

    #[test]
    fn lex_compare_examples() {
        assert_eq!(lex_compare(&w("211"), &w("2121")), LexOrder::Before);
        assert_eq!(lex_compare(&w("1"), &w("11")), LexOrder::PrefixRelated);
        assert_eq!(lex_compare(&w("22"), &w("21")), LexOrder::After);
        assert_eq!(lex_compare(&w("12"), &w("12")), LexOrder::PrefixRelated);
    }

    #[test]
    fn prefix_examples() {
        assert!(is_prefix(&w("e"), &w("12")));
        assert!(is_prefix(&w("12"), &w("122")));
        assert!(!is_prefix(&w("21"), &w("122")));
    }

    #[test]
    fn word_syntax() {
        assert_eq!(Word::empty().to_string(), "e");
        assert_eq!(w("e"), Word::empty());
        assert_eq!(w("2121").to_string(), "2121");
        assert!("213".parse::<Word>().is_err());
    }

    #[test]
    fn refinement_examples() {
        assert_eq!(common_refinement(&code(&["1", "21", "22"]), &code(&["11", "12", "2"])), code(&["11", "12", "21", "22"]));
        assert_eq!(common_refinement(&code(&["1", "2"]), &code(&["1", "2"])), code(&["1", "2"]));
        assert_eq!(common_refinement(&code(&["1", "21", "22"]), &code(&["1", "2"])), code(&["1", "21", "22"]));
        assert_eq!(common_refinement(&CompleteCode::root(), &code(&["1", "21", "22"])), code(&["1", "21", "22"]));
    }

    #[test]
    fn kraft_examples() {
        let ws: Vec<Word> = ["1", "211", "2121", "2122", "22"].iter().map(|s| w(s)).collect();
        assert!(kraft_sum(&ws).is_one());
        assert!(kraft_sum(&[]).is_zero());
        assert_eq!(kraft_sum(&[w("12")]).to_string(), "1/2^2");
    }

    #[test]
    fn code_validation() {
        assert!(CompleteCode::new(vec![w("1"), w("11"), w("2")]).is_err());
        assert!(CompleteCode::new(vec![w("1"), w("21")]).is_err());
        assert!(CompleteCode::new(vec![w("1"), w("1"), w("2")]).is_err());
    }

    #[test]
    fn endpoints() {
        assert_eq!(w("212").left_endpoint(3), 5);
        assert_eq!(w("2").left_endpoint(4), 8);
        assert_eq!(Word::from_endpoint(5, 3, 3), w("212"));
        assert_eq!(Word::from_endpoint(8, 1, 4), w("2"));
        assert_eq!(Word::from_endpoint(0, 0, 4), Word::empty());
    }

    /// All complete codes with exactly `n` leaves, by splitting leaves.
    fn codes_with_leaves(n: usize) -> Vec<CompleteCode> {
        let mut trees: std::collections::BTreeSet<Vec<Word>> = [vec![Word::empty()]].into();
        for _ in 1..n {
            trees = trees
                .iter()
                .flat_map(|t| {
                    (0..t.len()).map(move |i| {
                        let mut s = t.clone();
                        let leaf = s.remove(i);
                        s.push(leaf.child(1));
                        s.push(leaf.child(2));
                        s.sort();
                        s
                    })
                })
                .collect();
        }
        trees.into_iter().map(CompleteCode).collect()
    }

    /// Subsets of the words of length <= 3 that are antichains with Kraft
    /// sum 1 are exactly the leaf sets of binary trees of depth <= 3.
    #[test]
    fn code_characterization_and_catalan_counts() {
        let catalan = [1, 1, 2, 5, 14, 42];
        for (n, &c) in (1..=6).zip(catalan.iter()) {
            let codes = codes_with_leaves(n);
            assert_eq!(codes.len(), c, "leaf count {n}");
            for code in &codes {
                assert!(CompleteCode::new(code.words().to_vec()).is_ok());
            }
        }
        let universe: Vec<Word> = (0..=3).flat_map(Word::level).collect();
        let mut found = 0;
        for mask in 0u32..(1 << universe.len()) {
            let set: Vec<Word> =
                universe.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, w)| w.clone()).collect();
            let mut sorted = set.clone();
            sorted.sort();
            let is_code = sorted_is_antichain(&sorted) && kraft_sum(&sorted).is_one();
            assert_eq!(is_code, CompleteCode::new(set).is_ok());
            found += is_code as usize;
        }
        // binary trees of depth <= 3: 1 + 1 + 2 + (trees of depth exactly 3) = 26
        assert_eq!(found, 26);
    }

    fn arb_code() -> impl Strategy<Value = CompleteCode> {
        proptest::collection::vec(any::<prop::sample::Index>(), 0..8).prop_map(|splits| {
            let mut words = vec![Word::empty()];
            for ix in splits {
                let leaf = words.remove(ix.index(words.len()));
                words.push(leaf.child(1));
                words.push(leaf.child(2));
            }
            CompleteCode::new(words).unwrap()
        })
    }

    proptest! {
        #[test]
        fn refinement_commutes_and_absorbs(a in arb_code(), b in arb_code()) {
            let ab = common_refinement(&a, &b);
            prop_assert_eq!(&ab, &common_refinement(&b, &a));
            prop_assert_eq!(&common_refinement(&ab, &a), &ab);
            prop_assert_eq!(&common_refinement(&ab, &b), &ab);
            prop_assert!(kraft_sum(ab.words()).is_one());
            prop_assert!(ab.refines(&a) && ab.refines(&b));
        }

        #[test]
        fn lex_is_strict_total_order_on_codes(a in arb_code()) {
            let ws = a.words();
            for (i, u) in ws.iter().enumerate() {
                for (j, v) in ws.iter().enumerate() {
                    let expect = match i.cmp(&j) {
                        Ordering::Less => LexOrder::Before,
                        Ordering::Greater => LexOrder::After,
                        Ordering::Equal => LexOrder::PrefixRelated,
                    };
                    prop_assert_eq!(lex_compare(u, v), expect);
                }
            }
        }
    }
}
