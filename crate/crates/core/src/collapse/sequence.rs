use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fmt::Write as _;

use crate::complexes::{parse_vertex_list, FilteredComplex};
use crate::format::sig12;
use crate::{Error, Result, Simplex};

/// One elementary collapse: remove `facet` and its unique remaining
/// cofacet.
#[derive(Debug, Clone, PartialEq)]
pub struct CollapseStep {
    pub facet: Simplex,
    pub cofacet: Simplex,
    pub value: f64,
}

/// Elementary collapses taking `start` to the complex named by `target`.
#[derive(Debug, Clone, PartialEq)]
pub struct CollapseSequence {
    pub start: FilteredComplex,
    pub target: String,
    pub steps: Vec<CollapseStep>,
}

impl CollapseSequence {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Simplex, &Simplex)> + '_ {
        self.steps.iter().map(|s| (&s.facet, &s.cofacet))
    }

    /// This sequence followed by `next`, which must start where this one ends.
    pub fn then(mut self, next: CollapseSequence) -> CollapseSequence {
        self.steps.extend(next.steps);
        self.target = next.target;
        self
    }

    /// `collapse from=<label> to=<label>`, then one `step` line per collapse.
    pub fn to_file_string(&self) -> String {
        let mut out = format!(
            "collapse from={} to={}\n",
            self.start.kind().label(),
            self.target
        );
        for (k, s) in self.steps.iter().enumerate() {
            let _ = writeln!(
                out,
                "step {k}: facet={} cofacet={} value={}",
                s.facet,
                s.cofacet,
                sig12(s.value)
            );
        }
        out
    }
}

/// A collapse file read back without its start complex.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedCollapse {
    pub from: String,
    pub to: String,
    pub steps: Vec<CollapseStep>,
}

pub fn parse_collapse(text: &str) -> Result<ParsedCollapse> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty collapse file"))?;
    let mut from = None;
    let mut to = None;
    let mut words = header.split_whitespace();
    if words.next() != Some("collapse") {
        return Err(Error::parse(1, "expected `collapse` header"));
    }
    for w in words {
        match w.split_once('=') {
            Some(("from", v)) => from = Some(v.to_string()),
            Some(("to", v)) => to = Some(v.to_string()),
            _ => return Err(Error::parse(1, format!("unknown header field `{w}`"))),
        }
    }
    let (Some(from), Some(to)) = (from, to) else {
        return Err(Error::parse(1, "header needs from= and to="));
    };
    let mut steps = Vec::new();
    for (i, line) in lines {
        let lineno = i + 1;
        let rest = line
            .strip_prefix("step ")
            .and_then(|r| r.split_once(':'))
            .map(|(_, r)| r)
            .ok_or_else(|| Error::parse(lineno, "expected `step <k>:`"))?;
        let mut facet = None;
        let mut cofacet = None;
        let mut value = None;
        for w in rest.split_whitespace() {
            let simplex = |v: &str| {
                parse_vertex_list(v)
                    .map_err(|m| Error::parse(lineno, m))
                    .and_then(|vs| {
                        Simplex::new(vs).map_err(|e| Error::parse(lineno, e.to_string()))
                    })
            };
            match w.split_once('=') {
                Some(("facet", v)) => facet = Some(simplex(v)?),
                Some(("cofacet", v)) => cofacet = Some(simplex(v)?),
                Some(("value", v)) => {
                    value = Some(
                        crate::format::parse_cap(v)
                            .map_err(|_| Error::parse(lineno, format!("bad value `{v}`")))?,
                    )
                }
                _ => return Err(Error::parse(lineno, format!("unknown field `{w}`"))),
            }
        }
        match (facet, cofacet, value) {
            (Some(facet), Some(cofacet), Some(value)) => steps.push(CollapseStep {
                facet,
                cofacet,
                value,
            }),
            _ => {
                return Err(Error::parse(
                    lineno,
                    "step needs facet=, cofacet= and value=",
                ))
            }
        }
    }
    Ok(ParsedCollapse { from, to, steps })
}

/// Why a replay failed: the index of the offending step (equal to the number
/// of steps when only the final complex is wrong) and the simplices that
/// block it.
#[derive(Debug, Clone, PartialEq)]
pub struct CollapseFailure {
    pub step: usize,
    pub reason: String,
    pub cofaces: Vec<Simplex>,
}

impl fmt::Display for CollapseFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {}: {}", self.step, self.reason)?;
        if !self.cofaces.is_empty() {
            let names: Vec<String> = self.cofaces.iter().map(Simplex::to_string).collect();
            write!(f, " [{}]", names.join(" "))?;
        }
        Ok(())
    }
}

impl std::error::Error for CollapseFailure {}

/// Replays `steps` on a copy of `k`. Each facet must have the cofacet as its
/// only remaining cofacet, and the cofacet must have none; afterwards the
/// remaining simplices must be exactly those of `target`.
pub fn verify_collapse(
    k: &FilteredComplex,
    steps: &[CollapseStep],
    target: &FilteredComplex,
) -> std::result::Result<(), CollapseFailure> {
    let mut cofacets: HashMap<&Simplex, Vec<&Simplex>> = HashMap::new();
    for q in k.simplices() {
        for p in q.facets() {
            if let Some(p) = k.position(&p).map(|i| k.get(i).0) {
                cofacets.entry(p).or_default().push(q);
            }
        }
    }
    let mut alive: HashSet<&Simplex> = k.simplices().collect();
    let fail = |step: usize, reason: String, cofaces: Vec<Simplex>| CollapseFailure {
        step,
        reason,
        cofaces,
    };
    let live = |alive: &HashSet<&Simplex>, s: &Simplex| -> Vec<Simplex> {
        let mut v: Vec<Simplex> = cofacets
            .get(s)
            .into_iter()
            .flatten()
            .filter(|c| alive.contains(*c))
            .map(|c| (*c).clone())
            .collect();
        v.sort();
        v
    };
    for (i, st) in steps.iter().enumerate() {
        if st.cofacet.len() != st.facet.len() + 1 || !st.facet.is_face_of(&st.cofacet) {
            return Err(fail(
                i,
                format!("{} is not a facet of {}", st.facet, st.cofacet),
                Vec::new(),
            ));
        }
        for s in [&st.facet, &st.cofacet] {
            if !alive.contains(s) {
                return Err(fail(
                    i,
                    format!("{s} is not in the current complex"),
                    Vec::new(),
                ));
            }
        }
        let up = live(&alive, &st.facet);
        if up.len() != 1 {
            return Err(fail(i, format!("{} is not free", st.facet), up));
        }
        let top = live(&alive, &st.cofacet);
        if !top.is_empty() {
            return Err(fail(i, format!("{} is not maximal", st.cofacet), top));
        }
        alive.remove(&st.facet);
        alive.remove(&st.cofacet);
    }
    let mut extra: Vec<Simplex> = alive
        .iter()
        .filter(|s| !target.contains(s))
        .map(|s| (*s).clone())
        .collect();
    extra.extend(target.simplices().filter(|s| !alive.contains(s)).cloned());
    if extra.is_empty() {
        Ok(())
    } else {
        extra.sort();
        Err(fail(
            steps.len(),
            "remaining complex differs from the target".to_string(),
            extra,
        ))
    }
}
