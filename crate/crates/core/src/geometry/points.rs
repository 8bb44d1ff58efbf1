use std::fmt::Write as _;
use std::path::Path;

use crate::format::sig12;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPoint {
    pub coords: Vec<f64>,
    pub weight: f64,
}

/// The input point set. Vertex `i` is the `i`-th point; list order is the
/// fixed total vertex order used by the pairing construction.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPointSet {
    dim: usize,
    points: Vec<WeightedPoint>,
}

impl WeightedPointSet {
    pub fn new(dim: usize, points: Vec<WeightedPoint>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::precondition("ambient dimension must be positive"));
        }
        for (i, p) in points.iter().enumerate() {
            if p.coords.len() != dim {
                return Err(Error::precondition(format!(
                    "point {i} has {} coordinates, expected {dim}",
                    p.coords.len()
                )));
            }
            if p.coords.iter().any(|c| !c.is_finite()) || !p.weight.is_finite() {
                return Err(Error::precondition(format!("point {i} is not finite")));
            }
        }
        Ok(WeightedPointSet { dim, points })
    }

    /// Unweighted points from coordinate rows.
    pub fn unweighted(dim: usize, coords: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(
            dim,
            coords
                .into_iter()
                .map(|coords| WeightedPoint {
                    coords,
                    weight: 0.0,
                })
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[WeightedPoint] {
        &self.points
    }

    pub fn coords(&self, i: usize) -> &[f64] {
        &self.points[i].coords
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.points[i].weight
    }

    pub fn is_weighted(&self) -> bool {
        self.points.iter().any(|p| p.weight != 0.0)
    }

    /// All vertex indices, `0..len`.
    pub fn all_vertices(&self) -> Vec<usize> {
        (0..self.points.len()).collect()
    }

    /// Power distance `‖z − x‖² − w_x` of vertex `i` from `z`.
    pub fn power(&self, i: usize, z: &[f64]) -> f64 {
        let p = &self.points[i];
        sq_dist(&p.coords, z) - p.weight
    }

    /// Parses the point file format: a `dim n` line, then one point per line
    /// as `n` coordinates optionally followed by `w=<weight>`. Lines starting
    /// with `#` and blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut dim: Option<usize> = None;
        let mut points = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some(n) = dim else {
                let mut toks = line.split_whitespace();
                if toks.next() != Some("dim") {
                    return Err(Error::parse(line_no, "expected header `dim <n>`"));
                }
                let n: usize = toks
                    .next()
                    .and_then(|t| t.parse().ok())
                    .filter(|&n| n > 0)
                    .ok_or_else(|| Error::parse(line_no, "dimension must be a positive integer"))?;
                if toks.next().is_some() {
                    return Err(Error::parse(line_no, "trailing tokens after dimension"));
                }
                dim = Some(n);
                continue;
            };
            let mut coords = Vec::with_capacity(n);
            let mut weight = 0.0;
            let mut saw_weight = false;
            for tok in line.split_whitespace() {
                if saw_weight {
                    return Err(Error::parse(line_no, "tokens after weight"));
                }
                if let Some(w) = tok.strip_prefix("w=") {
                    weight = parse_finite(w, line_no)?;
                    saw_weight = true;
                } else {
                    coords.push(parse_finite(tok, line_no)?);
                }
            }
            if coords.len() != n {
                return Err(Error::parse(
                    line_no,
                    format!("expected {n} coordinates, found {}", coords.len()),
                ));
            }
            points.push(WeightedPoint { coords, weight });
        }
        let dim = dim.ok_or_else(|| Error::parse(0, "missing `dim <n>` header"))?;
        WeightedPointSet::new(dim, points)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Writes the point file format. Coordinates use Rust's shortest
    /// round-trip representation so a re-read is bit-exact.
    pub fn to_file_string(&self) -> String {
        let mut out = format!("dim {}\n", self.dim);
        for p in &self.points {
            let coords: Vec<String> = p.coords.iter().map(|c| format!("{c:?}")).collect();
            out.push_str(&coords.join(" "));
            if p.weight != 0.0 {
                let _ = write!(out, " w={:?}", p.weight);
            }
            out.push('\n');
        }
        out
    }

    /// Human-oriented rendering with twelve significant digits.
    pub fn describe(&self) -> String {
        let mut out = String::new();
        for (i, p) in self.points.iter().enumerate() {
            let coords: Vec<String> = p.coords.iter().map(|&c| sig12(c)).collect();
            let _ = writeln!(out, "{i}: ({}) w={}", coords.join(", "), sig12(p.weight));
        }
        out
    }
}

fn parse_finite(tok: &str, line: usize) -> Result<f64> {
    let v: f64 = tok
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid number `{tok}`")))?;
    if !v.is_finite() {
        return Err(Error::parse(line, format!("non-finite number `{tok}`")));
    }
    Ok(v)
}

pub(crate) fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_weights_and_comments() {
        let text = "# demo\ndim 2\n0 0\n4 0 w=1.5\n\n# c\n2 1\n";
        let x = WeightedPointSet::parse(text).unwrap();
        assert_eq!(x.len(), 3);
        assert_eq!(x.coords(1), &[4.0, 0.0]);
        assert_eq!(x.weight(1), 1.5);
        assert_eq!(x.weight(2), 0.0);
    }

    #[test]
    fn rejects_malformed() {
        assert!(matches!(
            WeightedPointSet::parse("dim 2\n0 0 0\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(WeightedPointSet::parse("0 0\n").is_err());
        assert!(WeightedPointSet::parse("dim 0\n").is_err());
        assert!(WeightedPointSet::parse("dim 2\n0 w=1 0\n").is_err());
        assert!(WeightedPointSet::parse("dim 1\nnan\n").is_err());
        assert!(WeightedPointSet::parse("").is_err());
    }

    #[test]
    fn file_round_trip_is_exact() {
        let x = WeightedPointSet::new(
            2,
            vec![
                WeightedPoint {
                    coords: vec![0.1, 1.0 / 3.0],
                    weight: 0.0,
                },
                WeightedPoint {
                    coords: vec![-2.5e-7, 3.0],
                    weight: 0.7,
                },
            ],
        )
        .unwrap();
        let back = WeightedPointSet::parse(&x.to_file_string()).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn empty_set_is_allowed() {
        let x = WeightedPointSet::parse("dim 3\n").unwrap();
        assert!(x.is_empty());
        assert_eq!(x.dim(), 3);
    }
}
