//! Breadth-first orbits of projections under `x0^±1, x1^±1`.

use std::collections::HashSet;
use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::standard_letters;

use super::projection::{act_unchecked, DiagonalProjection};
use super::omega2_member;

/// BFS layers: `layers[d]` holds the projections first reached after `d`
/// generator applications, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub start: DiagonalProjection,
    pub layers: Vec<Vec<DiagonalProjection>>,
    /// Number of action evaluations performed.
    pub evaluations: usize,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &DiagonalProjection)> {
        self.layers.iter().enumerate().flat_map(|(d, l)| l.iter().map(move |p| (d, p)))
    }

    pub fn record(&self) -> OrbitRecord {
        OrbitRecord {
            header: OrbitRecordHeader {
                generators: standard_letters().iter().map(|l| l.to_string()).collect(),
                depth: self.layers.len().saturating_sub(1),
                start: self.start.clone(),
            },
            lines: self.iter().map(|(depth, p)| OrbitLine { depth, projection: p.clone() }).collect(),
        }
    }
}

/// Frontier expansion is parallel; the result does not depend on the thread
/// count because each layer is sorted and deduplicated before the next.
pub fn orbit_layers(start: &DiagonalProjection, depth: usize) -> Result<Orbit> {
    if omega2_member(start).is_none() {
        return Err(Error::NotInOmega2);
    }
    let gens: Vec<_> = standard_letters().iter().map(|l| l.element()).collect();
    let mut seen: HashSet<DiagonalProjection> = HashSet::new();
    seen.insert(start.clone());
    let mut layers = vec![vec![start.clone()]];
    let mut evaluations = 0;
    for _ in 0..depth {
        let frontier = layers.last().unwrap();
        evaluations += frontier.len() * gens.len();
        let mut next: Vec<DiagonalProjection> = frontier
            .par_iter()
            .flat_map_iter(|p| gens.iter().map(move |g| act_unchecked(g, p)))
            .filter(|q| !seen.contains(q))
            .collect();
        next.par_sort_unstable();
        next.dedup();
        seen.extend(next.iter().cloned());
        if next.is_empty() {
            break;
        }
        layers.push(next);
    }
    Ok(Orbit { start: start.clone(), layers, evaluations })
}

/// All projections within `depth` generator applications of `start`.
pub fn orbit(start: &DiagonalProjection, depth: usize) -> Result<Vec<DiagonalProjection>> {
    let mut all: Vec<_> = orbit_layers(start, depth)?.layers.into_iter().flatten().collect();
    all.sort();
    Ok(all)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRecordHeader {
    pub generators: Vec<String>,
    pub depth: usize,
    pub start: DiagonalProjection,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitLine {
    pub depth: usize,
    pub projection: DiagonalProjection,
}

/// Line-delimited JSON: one header line, then one line per projection in
/// (depth, projection) order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitRecord {
    pub header: OrbitRecordHeader,
    pub lines: Vec<OrbitLine>,
}

impl OrbitRecord {
    pub fn write_to(&self, mut out: impl Write) -> io::Result<()> {
        serde_json::to_writer(&mut out, &self.header)?;
        out.write_all(b"\n")?;
        for line in &self.lines {
            serde_json::to_writer(&mut out, line)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_ndjson(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("JSON is UTF-8")
    }

    pub fn parse(text: &str) -> Result<OrbitRecord> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let bad = |e: serde_json::Error| Error::Parse(e.to_string());
        let header = serde_json::from_str(lines.next().ok_or_else(|| Error::Parse("empty orbit record".into()))?)
            .map_err(bad)?;
        let lines = lines.map(|l| serde_json::from_str(l).map_err(bad)).collect::<Result<_>>()?;
        Ok(OrbitRecord { header, lines })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(s: &str) -> DiagonalProjection {
        s.parse().unwrap()
    }

    #[test]
    fn orbit_examples() {
        let one = DiagonalProjection::one();
        let o1 = orbit(&one, 1).unwrap();
        let mut expected = vec![one.clone(), pr("P[12]"), pr("P[21]"), pr("P[1]+P[212]"), pr("P[1]+P[221]")];
        expected.sort();
        assert_eq!(o1, expected);
        assert_eq!(orbit(&one, 0).unwrap(), vec![one.clone()]);
        assert!(orbit(&one, 2).unwrap().contains(&pr("P[111]+P[2]")));
        assert_eq!(orbit(&pr("P[1]"), 2), Err(Error::NotInOmega2));
    }

    #[test]
    fn record_round_trip() {
        let o = orbit_layers(&DiagonalProjection::one(), 2).unwrap();
        let rec = o.record();
        let text = rec.to_ndjson();
        assert!(text.starts_with(r#"{"generators":["x0","x0^-1","x1","x1^-1"],"depth":2,"start":"1"}"#));
        assert_eq!(text.lines().nth(1).unwrap(), r#"{"depth":0,"projection":"1"}"#);
        assert_eq!(OrbitRecord::parse(&text).unwrap(), rec);
        assert_eq!(text.lines().count(), 1 + o.len());
    }
}
