//! The permutation representation of F on finitely supported vectors over
//! Ω₂, and certificates that finitely many group elements act by linearly
//! independent operators.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::elements::GroupElement;
use crate::error::{Error, Result};
use crate::generators::generator_ball;
use crate::omega::{act_unchecked, omega2_member, DiagonalProjection};

/// Default generator-ball radius for the separating-point search.
pub const SEARCH_RADIUS: usize = 8;

/// A finitely supported vector `Σ c_p δ_p` with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct FormalVector {
    coefficients: BTreeMap<DiagonalProjection, BigRational>,
}

impl FormalVector {
    pub fn zero() -> Self {
        FormalVector::default()
    }

    pub fn delta(p: DiagonalProjection) -> Result<Self> {
        let mut v = FormalVector::zero();
        v.add_term(p, BigRational::one())?;
        Ok(v)
    }

    /// Adds `c δ_p`, dropping the entry if it cancels.
    pub fn add_term(&mut self, p: DiagonalProjection, c: BigRational) -> Result<()> {
        if omega2_member(&p).is_none() {
            return Err(Error::NotInOmega2);
        }
        self.add_unchecked(p, c);
        Ok(())
    }

    fn add_unchecked(&mut self, p: DiagonalProjection, c: BigRational) {
        let entry = self.coefficients.entry(p).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coefficients.retain(|_, c| !c.is_zero());
        }
    }

    pub fn coefficient(&self, p: &DiagonalProjection) -> BigRational {
        self.coefficients.get(p).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DiagonalProjection, &BigRational)> {
        self.coefficients.iter()
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }
}

impl fmt::Display for FormalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("0");
        }
        for (i, (p, c)) in self.coefficients.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*d[{p}]")?;
        }
        Ok(())
    }
}

/// `π₂(f) v`: relabels each basis vector `δ_p` as `δ_{f·p}`.
pub fn apply(f: &GroupElement, v: &FormalVector) -> Result<FormalVector> {
    f.require_f()?;
    let mut out = FormalVector::zero();
    for (p, c) in v.iter() {
        out.add_unchecked(act_unchecked(f, p), c.clone());
    }
    Ok(out)
}

fn check_distinct(fs: &[GroupElement]) -> Result<()> {
    let mut first: BTreeMap<&GroupElement, usize> = BTreeMap::new();
    for (j, f) in fs.iter().enumerate() {
        f.require_f()?;
        if let Some(&i) = first.get(f) {
            return Err(Error::NotDistinct(i, j));
        }
        first.insert(f, j);
    }
    Ok(())
}

fn images_distinct(fs: &[GroupElement], p: &DiagonalProjection) -> bool {
    let mut seen = HashSet::with_capacity(fs.len());
    fs.iter().all(|f| seen.insert(act_unchecked(f, p)))
}

/// Searches `p = g · 1` over the generator ball by increasing radius (and
/// ball order within a radius) for one with `f_i · p` pairwise distinct.
pub fn separating_point_within(fs: &[GroupElement], radius: usize) -> Result<DiagonalProjection> {
    check_distinct(fs)?;
    let one = DiagonalProjection::one();
    let mut tried: HashSet<DiagonalProjection> = HashSet::new();
    let mut done = 0;
    for r in 0..=radius {
        let ball = generator_ball(r);
        let mut candidates = Vec::new();
        for (_, g) in &ball[done..] {
            let p = act_unchecked(g, &one);
            if tried.insert(p.clone()) {
                candidates.push(p);
            }
        }
        done = ball.len();
        if let Some(p) = candidates.into_par_iter().find_first(|p| images_distinct(fs, p)) {
            return Ok(p);
        }
    }
    Err(Error::SearchExhausted(radius))
}

pub fn separating_point(fs: &[GroupElement]) -> Result<DiagonalProjection> {
    separating_point_within(fs, SEARCH_RADIUS)
}

/// Distinct images `f_i · p` of one basis vector: the operators `π₂(f_i)`
/// are then linearly independent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependenceCertificate {
    pub p: DiagonalProjection,
    pub images: Vec<DiagonalProjection>,
    pub elements: Vec<GroupElement>,
}

impl IndependenceCertificate {
    /// Re-evaluates every image and checks pairwise distinctness.
    pub fn verify(&self) -> bool {
        self.images.len() == self.elements.len()
            && omega2_member(&self.p).is_some()
            && self.elements.iter().all(GroupElement::is_order_preserving)
            && self.elements.iter().zip(&self.images).all(|(f, q)| act_unchecked(f, &self.p) == *q)
            && self.images.iter().collect::<HashSet<_>>().len() == self.images.len()
    }
}

pub fn independence_certificate(fs: &[GroupElement]) -> Result<IndependenceCertificate> {
    let p = separating_point(fs)?;
    let images = fs.iter().map(|f| act_unchecked(f, &p)).collect();
    Ok(IndependenceCertificate { p, images, elements: fs.to_vec() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_x;
    use num_bigint::BigInt;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pr(s: &str) -> DiagonalProjection {
        s.parse().unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn apply_examples() {
        let one = FormalVector::delta(DiagonalProjection::one()).unwrap();
        assert_eq!(apply(&gen_x(0), &one).unwrap(), FormalVector::delta(pr("P[12]")).unwrap());
        let mut v = FormalVector::zero();
        v.add_term(pr("P[12]"), q(3, 2)).unwrap();
        v.add_term(pr("P[111]+P[2]"), q(-1, 1)).unwrap();
        assert_eq!(apply(&GroupElement::identity(), &v).unwrap(), v);
        let x0 = gen_x(0);
        assert_eq!(apply(&x0.inverse(), &apply(&x0, &v).unwrap()).unwrap(), v);
        assert_eq!(v.to_string(), "-1*d[P[111]+P[2]] + 3/2*d[P[12]]");
        assert_eq!(FormalVector::delta(pr("P[1]")), Err(Error::NotInOmega2));
    }

    #[test]
    fn cancellation_drops_entries() {
        let mut v = FormalVector::delta(pr("P[12]")).unwrap();
        v.add_term(pr("P[12]"), q(-1, 1)).unwrap();
        assert!(v.is_empty());
    }

    #[test]
    fn separating_examples() {
        let one = DiagonalProjection::one();
        assert_eq!(separating_point(&[GroupElement::identity(), gen_x(0)]).unwrap(), one);
        assert_eq!(separating_point(&[gen_x(0)]).unwrap(), one);
        assert_eq!(separating_point(&[gen_x(0), gen_x(1)]).unwrap(), one);
        assert_eq!(separating_point(&[gen_x(0), gen_x(0)]), Err(Error::NotDistinct(0, 1)));
    }

    #[test]
    fn certificates() {
        let ball: Vec<GroupElement> = generator_ball(1).into_iter().map(|(_, f)| f).collect();
        assert_eq!(ball.len(), 5);
        let c = independence_certificate(&ball).unwrap();
        assert!(c.verify());
        let c = independence_certificate(&[GroupElement::identity()]).unwrap();
        assert!(c.verify());
        assert_eq!(c.p, DiagonalProjection::one());

        let mut b3: Vec<GroupElement> = generator_ball(3).into_iter().map(|(_, f)| f).collect();
        b3.shuffle(&mut ChaCha8Rng::seed_from_u64(7));
        let c = independence_certificate(&b3[..20]).unwrap();
        assert!(c.verify());
        let json = serde_json::to_string(&c).unwrap();
        assert!(json.starts_with(r#"{"p":"#));
        let back: IndependenceCertificate = serde_json::from_str(&json).unwrap();
        assert!(back.verify());
    }

    #[test]
    fn tampered_certificate_fails() {
        let mut c = independence_certificate(&[GroupElement::identity(), gen_x(0)]).unwrap();
        c.images[1] = c.images[0].clone();
        assert!(!c.verify());
    }
}
