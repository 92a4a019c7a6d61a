//! Unitaries `Σ S_α S_β*` given by bijections between complete codes, i.e.
//! elements of Thompson's group V, with F and T as predicates.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::words::{sorted_is_antichain, walk_aligned, CompleteCode, Word};

/// The partial isometry `S_range S_domain*`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    /// α: the image cylinder.
    pub range: Word,
    /// β: the source cylinder.
    pub domain: Word,
}

impl Term {
    pub fn new(range: Word, domain: Word) -> Self {
        Term { range, domain }
    }

    /// Gauge degree `|α| - |β|`.
    pub fn degree(&self) -> i64 {
        self.range.len() as i64 - self.domain.len() as i64
    }

    pub fn is_even(&self) -> bool {
        self.degree() % 2 == 0
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.range, self.domain)
    }
}

impl FromStr for Term {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected range:domain, got {:?}", s.trim())))?;
        Ok(Term::new(a.parse()?, b.parse()?))
    }
}

/// Parses `a1:b1 + a2:b2 + ...` into an unvalidated term list.
pub fn parse_terms(s: &str) -> Result<Vec<Term>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split('+').map(str::parse).collect()
}

/// Which side of a term list a code lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// The β words.
    Domain,
    /// The α words.
    Range,
}

/// A unitary in canonical form: fully reduced and sorted by range word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    terms: Vec<Term>,
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement { terms: vec![Term::new(Word::empty(), Word::empty())] }
    }

    /// Checks that both sides are complete codes and returns the canonical form.
    pub fn validate_unitary(terms: Vec<Term>) -> Result<Self> {
        reduce(terms)
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_identity(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn range_code(&self) -> CompleteCode {
        CompleteCode::from_sorted_unchecked(self.terms.iter().map(|t| t.range.clone()).collect())
    }

    pub fn domain_code(&self) -> CompleteCode {
        let mut ws: Vec<Word> = self.terms.iter().map(|t| t.domain.clone()).collect();
        ws.sort();
        CompleteCode::from_sorted_unchecked(ws)
    }

    /// Terms sorted by domain word. Borrowed when the element is in F.
    fn terms_by_domain(&self) -> std::borrow::Cow<'_, [Term]> {
        if self.terms.windows(2).all(|w| w[0].domain < w[1].domain) {
            std::borrow::Cow::Borrowed(&self.terms)
        } else {
            let mut ts = self.terms.clone();
            ts.sort_by(|a, b| a.domain.cmp(&b.domain));
            std::borrow::Cow::Owned(ts)
        }
    }

    /// Splits terms so that the chosen side's code becomes `target`. Each
    /// term `(α, β)` becomes `(ακ, βκ)`, so degrees are preserved. Terms come
    /// out in the order of `target`.
    pub fn refine(&self, target: &CompleteCode, side: Side) -> Result<Vec<Term>> {
        let (terms, label) = match side {
            Side::Domain => (self.terms_by_domain().into_owned(), "domain"),
            Side::Range => (self.terms.clone(), "range"),
        };
        let key = |t: &Term| -> Word {
            match side {
                Side::Domain => t.domain.clone(),
                Side::Range => t.range.clone(),
            }
        };
        let code: Vec<Word> = terms.iter().map(key).collect();
        let target_words = target.words();
        let mut out = Vec::with_capacity(target_words.len());
        let mut ok = true;
        walk_aligned(&code, target_words, |i, j| {
            let (c, t) = (&code[i], &target_words[j]);
            match t.strip_prefix(c) {
                Some(kappa) => out.push(Term::new(terms[i].range.concat(&kappa), terms[i].domain.concat(&kappa))),
                None => ok = false,
            }
        });
        if !ok || out.len() != target_words.len() {
            return Err(Error::TargetNotARefinement(label));
        }
        Ok(out)
    }

    /// The product `u·w`: apply `w` first, then `u`.
    pub fn multiply(&self, w: &GroupElement) -> GroupElement {
        let u_terms = self.terms_by_domain();
        let w_terms = &w.terms;
        let nus: Vec<&Word> = u_terms.iter().map(|t| &t.domain).collect();
        let alphas: Vec<&Word> = w_terms.iter().map(|t| &t.range).collect();
        let mut out = Vec::with_capacity(u_terms.len().max(w_terms.len()));
        walk_aligned(&nus, &alphas, |i, j| {
            let (mu, nu) = (&u_terms[i].range, nus[i]);
            let (alpha, beta) = (alphas[j], &w_terms[j].domain);
            if nu.len() <= alpha.len() {
                let kappa = &alpha.letters()[nu.len()..];
                out.push(Term::new(mu.concat_letters(kappa), beta.clone()));
            } else {
                let kappa = &nu.letters()[alpha.len()..];
                out.push(Term::new(mu.clone(), beta.concat_letters(kappa)));
            }
        });
        reduce_unchecked(out)
    }

    pub fn inverse(&self) -> GroupElement {
        let terms = self.terms.iter().map(|t| Term::new(t.domain.clone(), t.range.clone())).collect();
        reduce_unchecked(terms)
    }

    pub fn pow(&self, n: i64) -> GroupElement {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        (0..n.unsigned_abs()).fold(GroupElement::identity(), |acc, _| acc.multiply(&base))
    }

    /// Membership in F: the domain words, listed in range order, are increasing.
    pub fn is_order_preserving(&self) -> bool {
        self.terms.windows(2).all(|w| w[0].domain < w[1].domain)
    }

    /// Membership in T: the domain words, listed in range order, are a
    /// rotation of their sorted order.
    pub fn is_cyclic_order_preserving(&self) -> bool {
        let n = self.terms.len();
        let descents = (0..n).filter(|&i| self.terms[i].domain > self.terms[(i + 1) % n].domain).count();
        descents <= 1
    }

    /// `(f0, f1)`: the terms of even and of odd degree. Negative even degrees
    /// count as even.
    pub fn parity_split(&self) -> (Vec<Term>, Vec<Term>) {
        self.terms.iter().cloned().partition(Term::is_even)
    }

    /// `max |deg|` over the terms of the reduced form.
    pub fn height(&self) -> u32 {
        self.terms.iter().map(|t| t.degree().unsigned_abs() as u32).max().unwrap_or(0)
    }

    /// The longest domain word; deeper cylinders are moved rigidly.
    pub fn domain_depth(&self) -> usize {
        self.terms.iter().map(|t| t.domain.len()).max().unwrap_or(0)
    }

    /// `(log2 slope at 0, log2 slope at 1)`, the abelianization `F -> Z^2`.
    pub fn abelianization(&self) -> Result<(i64, i64)> {
        if !self.is_order_preserving() {
            return Err(Error::NotInF);
        }
        let first = &self.terms[0];
        let last = &self.terms[self.terms.len() - 1];
        Ok((-first.degree(), -last.degree()))
    }

    pub fn in_commutator_subgroup(&self) -> Result<bool> {
        Ok(self.abelianization()? == (0, 0))
    }

    pub(crate) fn require_f(&self) -> Result<()> {
        if self.is_order_preserving() {
            Ok(())
        } else {
            Err(Error::NotInF)
        }
    }
}

/// Validates the code conditions, then merges sibling pairs until none remain.
pub fn reduce(terms: Vec<Term>) -> Result<GroupElement> {
    if terms.is_empty() {
        return Err(Error::NotUnitary("empty term list".into()));
    }
    let mut ranges: Vec<Word> = terms.iter().map(|t| t.range.clone()).collect();
    let mut domains: Vec<Word> = terms.iter().map(|t| t.domain.clone()).collect();
    ranges.sort();
    domains.sort();
    for (side, ws) in [("range", &ranges), ("domain", &domains)] {
        if !sorted_is_antichain(ws) {
            return Err(Error::NotUnitary(format!("{side} words are not prefix-free")));
        }
        let kraft = crate::words::kraft_sum(ws.iter());
        if !kraft.is_one() {
            return Err(Error::NotUnitary(format!("{side} Kraft sum is {kraft}, not 1")));
        }
    }
    Ok(reduce_unchecked(terms))
}

/// Sorting by range puts range-siblings next to each other; a stack pass then
/// merges `(γ1, δ1), (γ2, δ2)` into `(γ, δ)` exhaustively.
pub(crate) fn reduce_unchecked(mut terms: Vec<Term>) -> GroupElement {
    terms.sort_by(|a, b| a.range.cmp(&b.range));
    let mut stack: Vec<Term> = Vec::with_capacity(terms.len());
    for t in terms {
        stack.push(t);
        while stack.len() >= 2 {
            let n = stack.len();
            let (x, y) = (&stack[n - 2], &stack[n - 1]);
            let mergeable = x.range.is_sibling_of(&y.range)
                && x.range.last() == Some(1)
                && x.domain.is_sibling_of(&y.domain)
                && x.domain.last() == Some(1);
            if !mergeable {
                break;
            }
            let merged = Term::new(x.range.parent().unwrap(), x.domain.parent().unwrap());
            stack.truncate(n - 2);
            stack.push(merged);
        }
    }
    GroupElement { terms: stack }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupElement[{self}]")
    }
}

impl FromStr for GroupElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GroupElement::validate_unitary(parse_terms(s)?)
    }
}

#[derive(Serialize, Deserialize)]
struct ElementJson {
    terms: Vec<(Word, Word)>,
}

/// JSON form: `{"terms": [["11","1"], ["12","21"], ["2","22"]]}`.
impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ElementJson { terms: self.terms.iter().map(|t| (t.range.clone(), t.domain.clone())).collect() }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GroupElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = ElementJson::deserialize(deserializer)?;
        let terms = raw.terms.into_iter().map(|(a, b)| Term::new(a, b)).collect();
        GroupElement::validate_unitary(terms).map_err(serde::de::Error::custom)
    }
}
