//! The generators `x_k`, words in them, and the unique normal form
//! `x_{j1}…x_{jk} x_{il}^-1…x_{i1}^-1`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::elements::{GroupElement, Term};
use crate::error::{Error, Result};
use crate::words::Word;

/// `x_k = 1 - P_{2^k} + S_2^k x_0 S_2^k*`.
pub fn gen_x(k: u32) -> GroupElement {
    let k = k as usize;
    let spine = Word::repeat(2, k);
    let mut terms: Vec<Term> = (0..k)
        .map(|i| {
            let w = Word::repeat(2, i).child(1);
            Term::new(w.clone(), w)
        })
        .collect();
    let t = |a: &[u8], b: &[u8]| Term::new(spine.concat_letters(a), spine.concat_letters(b));
    terms.push(t(&[1, 1], &[1]));
    terms.push(t(&[1, 2], &[2, 1]));
    terms.push(t(&[2], &[2, 2]));
    GroupElement::validate_unitary(terms).expect("x_k is unitary")
}

/// A single letter `x_k` or `x_k^-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub index: u32,
    pub inverse: bool,
}

impl Letter {
    pub fn pos(index: u32) -> Self {
        Letter { index, inverse: false }
    }

    pub fn neg(index: u32) -> Self {
        Letter { index, inverse: true }
    }

    pub fn inverted(self) -> Self {
        Letter { index: self.index, inverse: !self.inverse }
    }

    pub fn element(self) -> GroupElement {
        let x = gen_x(self.index);
        if self.inverse {
            x.inverse()
        } else {
            x
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.index)?;
        if self.inverse {
            f.write_str("^-1")?;
        }
        Ok(())
    }
}

impl FromStr for Letter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected x<k> or x<k>^-1, got {s:?}"));
        let body = s.strip_prefix('x').ok_or_else(bad)?;
        let (num, inverse) = match body.strip_suffix("^-1") {
            Some(n) => (n, true),
            None => (body, false),
        };
        let index = num.parse().map_err(|_| bad())?;
        Ok(Letter { index, inverse })
    }
}

/// An arbitrary word in the generators, read left to right as a product.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GeneratorWord(pub Vec<Letter>);

impl GeneratorWord {
    pub fn evaluate(&self) -> GroupElement {
        self.0.iter().fold(GroupElement::identity(), |acc, l| acc.multiply(&l.element()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> GeneratorWord {
        GeneratorWord(self.0.iter().rev().map(|l| l.inverted()).collect())
    }

    /// Rewrites to the normal form using only the defining relations.
    pub fn normalize(&self) -> NormalFormWord {
        normalize_letters(self.0.clone())
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for GeneratorWord {
    type Err = Error;

    /// Space-separated tokens; `e`, `1` or the empty string denote the empty word.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "e" || s == "1" {
            return Ok(GeneratorWord::default());
        }
        Ok(GeneratorWord(s.split_whitespace().map(str::parse).collect::<Result<_>>()?))
    }
}

/// `x_{j1}…x_{jk} · x_{il}^-1…x_{i1}^-1` with `positive = [j1..jk]` and
/// `negative = [i1..il]`, both non-decreasing.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalFormWord {
    pub positive: Vec<u32>,
    pub negative: Vec<u32>,
}

impl NormalFormWord {
    pub fn new(positive: Vec<u32>, negative: Vec<u32>) -> Result<Self> {
        let nf = NormalFormWord { positive, negative };
        nf.check()?;
        Ok(nf)
    }

    /// The uniqueness conditions on a normal form.
    pub fn check(&self) -> Result<()> {
        let sorted = |v: &[u32]| v.windows(2).all(|w| w[0] <= w[1]);
        if !sorted(&self.positive) || !sorted(&self.negative) {
            return Err(Error::Parse("normal form indices must be non-decreasing".into()));
        }
        if let (Some(j), Some(i)) = (self.positive.last(), self.negative.last()) {
            if i == j {
                return Err(Error::Parse(format!("last positive and negative index are both {i}")));
            }
        }
        for m in &self.positive {
            if self.negative.contains(m) && !self.positive.contains(&(m + 1)) && !self.negative.contains(&(m + 1)) {
                return Err(Error::Parse(format!("x{m} and x{m}^-1 both occur but x{} does not", m + 1)));
            }
        }
        Ok(())
    }

    pub fn is_identity(&self) -> bool {
        self.positive.is_empty() && self.negative.is_empty()
    }

    pub fn to_word(&self) -> GeneratorWord {
        let pos = self.positive.iter().map(|&j| Letter::pos(j));
        let neg = self.negative.iter().rev().map(|&i| Letter::neg(i));
        GeneratorWord(pos.chain(neg).collect())
    }

    pub fn len(&self) -> usize {
        self.positive.len() + self.negative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.is_identity()
    }
}

impl fmt::Display for NormalFormWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_word().fmt(f)
    }
}

/// Parses any generator word and normalizes it.
impl FromStr for NormalFormWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(s.parse::<GeneratorWord>()?.normalize())
    }
}

pub fn from_normal_form(nf: &NormalFormWord) -> GroupElement {
    nf.to_word().evaluate()
}

/// The exponent of each leaf of a tree, by leaf position: the number of
/// trailing left edges above the leaf that stay off the right spine.
fn leaf_exponents(code: &[Word]) -> Vec<u32> {
    code.iter()
        .map(|w| {
            let ones = w.letters().iter().rev().take_while(|&&l| l == 1).count();
            if ones == 0 {
                return 0;
            }
            let head = w.prefix(w.len() - ones);
            if head.is_all_twos() {
                ones as u32 - 1
            } else {
                ones as u32
            }
        })
        .collect()
}

fn expand_exponents(exps: &[u32]) -> Vec<u32> {
    exps.iter().enumerate().flat_map(|(i, &e)| std::iter::repeat_n(i as u32, e as usize)).collect()
}

/// Reads a candidate word off the tree pair (positive part from the range
/// tree, negative part from the domain tree), normalizes it by rewriting, and
/// checks that it evaluates back to `f`.
pub fn to_normal_form(f: &GroupElement) -> Result<NormalFormWord> {
    f.require_f()?;
    let range: Vec<Word> = f.terms().iter().map(|t| t.range.clone()).collect();
    let domain: Vec<Word> = f.terms().iter().map(|t| t.domain.clone()).collect();
    let candidate = NormalFormWord {
        positive: expand_exponents(&leaf_exponents(&range)),
        negative: expand_exponents(&leaf_exponents(&domain)),
    };
    let nf = candidate.to_word().normalize();
    let back = from_normal_form(&nf);
    if back != *f {
        return Err(Error::NormalFormMismatch(format!("{nf} evaluates to {back}, expected {f}")));
    }
    Ok(nf)
}

/// Word problem: canonical forms are unique, so equality is structural.
pub fn equals(f: &GroupElement, g: &GroupElement) -> bool {
    f == g
}

/// One rewriting step on an adjacent pair, using `x_j x_i = x_i x_{j+1}`
/// (`i < j`) and its inverse forms, plus free cancellation. Returns the
/// replacement, or `None` if the pair is already in order.
fn rewrite_pair(a: Letter, b: Letter) -> Option<Vec<Letter>> {
    let (i, j) = (a.index, b.index);
    match (a.inverse, b.inverse) {
        (false, false) if i > j => Some(vec![Letter::pos(j), Letter::pos(i + 1)]),
        (false, true) if i == j => Some(vec![]),
        (true, false) if i == j => Some(vec![]),
        // x_i^-1 x_j = x_{j+1} x_i^-1 for i < j
        (true, false) if i < j => Some(vec![Letter::pos(j + 1), Letter::neg(i)]),
        // x_i^-1 x_j = x_j x_{i+1}^-1 for j < i
        (true, false) => Some(vec![Letter::pos(j), Letter::neg(i + 1)]),
        // x_i^-1 x_j^-1 = x_{j+1}^-1 x_i^-1 for i < j
        (true, true) if i < j => Some(vec![Letter::neg(j + 1), Letter::neg(i)]),
        _ => None,
    }
}

fn normalize_letters(mut word: Vec<Letter>) -> NormalFormWord {
    // Phase 1: seminormal form (positives ascending, then negatives descending).
    let mut k = 0;
    while k + 1 < word.len() {
        match rewrite_pair(word[k], word[k + 1]) {
            Some(rep) => {
                word.splice(k..k + 2, rep);
                k = k.saturating_sub(1);
            }
            None => k += 1,
        }
    }
    let split = word.iter().position(|l| l.inverse).unwrap_or(word.len());
    let mut positive: Vec<u32> = word[..split].iter().map(|l| l.index).collect();
    let mut negative: Vec<u32> = word[split..].iter().rev().map(|l| l.index).collect();
    debug_assert!(word[split..].iter().all(|l| l.inverse));

    // Phase 2: remove pairs x_m … x_m^-1 with no x_{m+1}^{±1} present, using
    // x_m x_t x_m^-1 = x_{t-1} for t >= m + 2.
    loop {
        let pos_set: HashSet<u32> = positive.iter().copied().collect();
        let neg_set: HashSet<u32> = negative.iter().copied().collect();
        let bad = positive
            .iter()
            .copied()
            .filter(|m| neg_set.contains(m) && !pos_set.contains(&(m + 1)) && !neg_set.contains(&(m + 1)))
            .max();
        let Some(m) = bad else { break };
        let pi = positive.iter().rposition(|&x| x == m).unwrap();
        positive.remove(pi);
        let ni = negative.iter().rposition(|&x| x == m).unwrap();
        negative.remove(ni);
        for x in positive.iter_mut().chain(negative.iter_mut()) {
            if *x > m {
                *x -= 1;
            }
        }
    }
    NormalFormWord { positive, negative }
}

/// The four letters `x0, x0^-1, x1, x1^-1`, in search order.
pub fn standard_letters() -> [Letter; 4] {
    [Letter::pos(0), Letter::neg(0), Letter::pos(1), Letter::neg(1)]
}

/// Distinct elements within word length `radius` in `x0^±1, x1^±1`, each
/// with the first word (in radius, then letter order) that reaches it.
pub fn generator_ball(radius: usize) -> Vec<(GeneratorWord, GroupElement)> {
    let letters = standard_letters();
    let gens: Vec<GroupElement> = letters.iter().map(|l| l.element()).collect();
    let mut seen: HashSet<GroupElement> = HashSet::new();
    let mut out = vec![(GeneratorWord::default(), GroupElement::identity())];
    seen.insert(GroupElement::identity());
    let mut frontier = 0..1;
    for _ in 0..radius {
        let start = out.len();
        for idx in frontier.clone() {
            for (l, g) in letters.iter().zip(&gens) {
                let f = out[idx].1.multiply(g);
                if seen.insert(f.clone()) {
                    let mut w = out[idx].0.clone();
                    w.0.push(*l);
                    out.push((w, f));
                }
            }
        }
        frontier = start..out.len();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(s: &str) -> GroupElement {
        s.parse().unwrap()
    }

    #[test]
    fn generator_examples() {
        assert_eq!(gen_x(0), el("11:1 + 12:21 + 2:22"));
        assert_eq!(gen_x(1).to_string(), "1:1 + 211:21 + 212:221 + 22:222");
        assert_eq!(gen_x(2).to_string(), "1:1 + 21:21 + 2211:221 + 2212:2221 + 222:2222");
        for k in 0..10 {
            assert!(gen_x(k).is_order_preserving());
            assert_eq!(gen_x(k).height(), 1);
        }
    }

    #[test]
    fn from_normal_form_examples() {
        let nf = NormalFormWord::new(vec![0, 2], vec![]).unwrap();
        assert_eq!(from_normal_form(&nf), gen_x(0).multiply(&gen_x(2)));
        assert_eq!(from_normal_form(&NormalFormWord::default()), GroupElement::identity());
        let x1x0: GeneratorWord = "x1 x0".parse().unwrap();
        assert_eq!(x1x0.evaluate(), from_normal_form(&nf));
    }

    #[test]
    fn to_normal_form_examples() {
        let f = gen_x(1).multiply(&gen_x(0));
        assert_eq!(to_normal_form(&f).unwrap(), NormalFormWord { positive: vec![0, 2], negative: vec![] });
        assert!(to_normal_form(&GroupElement::identity()).unwrap().is_identity());
        let g = gen_x(0).multiply(&gen_x(1)).multiply(&gen_x(0).inverse());
        let nf = to_normal_form(&g).unwrap();
        assert_eq!(nf, NormalFormWord { positive: vec![0, 1], negative: vec![0] });
        nf.check().unwrap();
        assert_eq!(from_normal_form(&nf), g);
        assert_eq!(to_normal_form(&el("22:1 + 1:21 + 21:22")), Err(Error::NotInF));
    }

    #[test]
    fn equals_examples() {
        let a = gen_x(0);
        let b = gen_x(1);
        assert!(equals(&gen_x(1).multiply(&gen_x(0)), &gen_x(0).multiply(&gen_x(2))));
        assert!(!equals(&a, &b));
        let ab_inv = a.multiply(&b.inverse());
        let conj = a.inverse().multiply(&b).multiply(&a);
        let comm = ab_inv.inverse().multiply(&conj.inverse()).multiply(&ab_inv).multiply(&conj);
        assert!(equals(&comm, &GroupElement::identity()));
    }

    #[test]
    fn defining_relations() {
        for j in 0..=4 {
            for i in 0..j {
                assert_eq!(gen_x(j).multiply(&gen_x(i)), gen_x(i).multiply(&gen_x(j + 1)), "i={i} j={j}");
            }
        }
        let a = gen_x(0);
        for n in 1..=4u32 {
            let p = a.pow(-(n as i64 - 1));
            assert_eq!(p.multiply(&gen_x(1)).multiply(&a.pow(n as i64 - 1)), gen_x(n));
        }
    }

    #[test]
    fn syntax() {
        let w: GeneratorWord = "x0 x2 x1^-1".parse().unwrap();
        assert_eq!(w.to_string(), "x0 x2 x1^-1");
        assert_eq!(w.0, vec![Letter::pos(0), Letter::pos(2), Letter::neg(1)]);
        assert!("x0 y1".parse::<GeneratorWord>().is_err());
        assert!("x-1".parse::<GeneratorWord>().is_err());
        assert_eq!(NormalFormWord::default().to_string(), "e");
        assert_eq!("x1 x0".parse::<NormalFormWord>().unwrap().to_string(), "x0 x2");
    }

    #[test]
    fn check_rejects_non_normal_forms() {
        assert!(NormalFormWord::new(vec![1, 0], vec![]).is_err());
        assert!(NormalFormWord::new(vec![0, 1], vec![1]).is_err());
        assert!(NormalFormWord::new(vec![0], vec![0, 3]).is_err());
        assert!(NormalFormWord::new(vec![0, 1], vec![0]).is_ok());
    }

    #[test]
    fn rewriting_handles_side_condition() {
        // x0 x2 x0^-1 = x1
        let w: GeneratorWord = "x0 x2 x0^-1".parse().unwrap();
        assert_eq!(w.normalize(), NormalFormWord { positive: vec![1], negative: vec![] });
        assert_eq!(w.evaluate(), gen_x(1));
        let w: GeneratorWord = "x3 x0^-1 x0 x3^-1".parse().unwrap();
        assert!(w.normalize().is_identity());
    }

    /// All normal forms with total length <= `n` and indices < `max_index`.
    fn small_normal_forms(n: usize, max_index: u32) -> Vec<NormalFormWord> {
        fn nondecreasing(len: usize, max_index: u32) -> Vec<Vec<u32>> {
            if len == 0 {
                return vec![vec![]];
            }
            nondecreasing(len - 1, max_index)
                .into_iter()
                .flat_map(|v| {
                    let lo = v.last().copied().unwrap_or(0);
                    (lo..max_index).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect()
        }
        let mut out = Vec::new();
        for p in 0..=n {
            for q in 0..=(n - p) {
                for pos in nondecreasing(p, max_index) {
                    for neg in nondecreasing(q, max_index) {
                        let nf = NormalFormWord { positive: pos.clone(), negative: neg };
                        if nf.check().is_ok() {
                            out.push(nf);
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn normal_form_round_trip_length_six() {
        let forms = small_normal_forms(6, 4);
        let mut elements = HashSet::new();
        for nf in &forms {
            let f = from_normal_form(nf);
            assert_eq!(&to_normal_form(&f).unwrap(), nf);
            assert_eq!(&nf.to_word().normalize(), nf);
            elements.insert(f);
        }
        assert_eq!(elements.len(), forms.len());
    }

    #[test]
    fn ball_round_trip_radius_four() {
        let ball = generator_ball(4);
        let mut nfs = HashSet::new();
        for (word, f) in &ball {
            let nf = to_normal_form(f).unwrap();
            assert_eq!(from_normal_form(&nf), *f);
            assert_eq!(word.normalize(), nf, "rewriting {word}");
            nfs.insert(nf);
        }
        assert_eq!(nfs.len(), ball.len());
    }

    #[test]
    fn ball_sizes() {
        // growth of F in x0, x1: 1, 4, 12, 36, 108 words would be the free bound
        let sizes: Vec<usize> = (0..=3).map(|r| generator_ball(r).len()).collect();
        assert_eq!(sizes[0], 1);
        assert_eq!(sizes[1], 5);
        assert_eq!(sizes[2], 17);
        assert!(sizes[3] <= 53);
    }
}
