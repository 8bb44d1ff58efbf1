use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::format::{parse_cap, sig12};
use crate::simplex::write_vertex_list;
use crate::{Error, Result, Simplex};

/// Slack allowed when validating face-monotonicity of loaded values.
const MONOTONE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComplexKind {
    Cech,
    DelaunayCech,
    Delaunay,
    Selective,
    Wrap,
}

impl ComplexKind {
    pub fn label(self) -> &'static str {
        match self {
            ComplexKind::Cech => "cech",
            ComplexKind::DelaunayCech => "delcech",
            ComplexKind::Delaunay => "delaunay",
            ComplexKind::Selective => "selective",
            ComplexKind::Wrap => "wrap",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        Some(match s {
            "cech" => ComplexKind::Cech,
            "delcech" => ComplexKind::DelaunayCech,
            "delaunay" => ComplexKind::Delaunay,
            "selective" => ComplexKind::Selective,
            "wrap" => ComplexKind::Wrap,
            _ => return None,
        })
    }
}

/// A simplicial complex whose simplices carry squared-radius values.
///
/// Simplices are kept in filtration order: by value, then dimension, then
/// lexicographically. The complex is face-closed and values never decrease
/// from a face to a coface.
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredComplex {
    dim: usize,
    num_points: usize,
    kind: ComplexKind,
    selective: Vec<usize>,
    cap: f64,
    simplices: Vec<(Simplex, f64)>,
    index: HashMap<Simplex, usize>,
}

impl FilteredComplex {
    /// Validates face-closure and monotonicity and sorts into filtration
    /// order. `num_points` is the size of the ground set.
    pub fn new(
        dim: usize,
        num_points: usize,
        kind: ComplexKind,
        selective: Vec<usize>,
        cap: f64,
        mut simplices: Vec<(Simplex, f64)>,
    ) -> Result<Self> {
        simplices.sort_by(filtration_cmp);
        let mut index = HashMap::with_capacity(simplices.len());
        for (i, (s, v)) in simplices.iter().enumerate() {
            if v.is_nan() {
                return Err(Error::precondition(format!("simplex {s} has a NaN value")));
            }
            if let Some(&bad) = s.vertices().iter().find(|&&v| v >= num_points) {
                return Err(Error::precondition(format!(
                    "simplex {s} uses vertex {bad} outside the ground set"
                )));
            }
            if index.insert(s.clone(), i).is_some() {
                return Err(Error::precondition(format!("simplex {s} listed twice")));
            }
        }
        for (s, v) in &simplices {
            for f in s.facets() {
                match index.get(&f) {
                    None => {
                        return Err(Error::precondition(format!("facet {f} of {s} is missing")))
                    }
                    Some(&j) if simplices[j].1 > v + MONOTONE_SLACK * (1.0 + v.abs()) => {
                        return Err(Error::precondition(format!(
                            "facet {f} has value {} above {s} ({v})",
                            simplices[j].1
                        )))
                    }
                    _ => {}
                }
            }
        }
        let mut selective = selective;
        selective.sort_unstable();
        selective.dedup();
        Ok(FilteredComplex {
            dim,
            num_points,
            kind,
            selective,
            cap,
            simplices,
            index,
        })
    }

    /// Ambient dimension of the ground set.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    pub fn kind(&self) -> ComplexKind {
        self.kind
    }

    pub fn selective_set(&self) -> &[usize] {
        &self.selective
    }

    pub fn cap(&self) -> f64 {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Simplices with their values, in filtration order.
    pub fn iter(&self) -> impl Iterator<Item = (&Simplex, f64)> + '_ {
        self.simplices.iter().map(|(s, v)| (s, *v))
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> + '_ {
        self.simplices.iter().map(|(s, _)| s)
    }

    pub fn value(&self, s: &Simplex) -> Option<f64> {
        self.index.get(s).map(|&i| self.simplices[i].1)
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index.contains_key(s)
    }

    /// Position of `s` in filtration order.
    pub fn position(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn get(&self, pos: usize) -> (&Simplex, f64) {
        let (s, v) = &self.simplices[pos];
        (s, *v)
    }

    /// Largest simplex dimension, `None` when empty.
    pub fn max_simplex_dim(&self) -> Option<usize> {
        self.simplices.iter().map(|(s, _)| s.dim()).max()
    }

    /// Number of simplices of each dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = Vec::new();
        for (s, _) in &self.simplices {
            if f.len() <= s.dim() {
                f.resize(s.dim() + 1, 0);
            }
            f[s.dim()] += 1;
        }
        f
    }

    /// The subcomplex of simplices with value at most `cap`.
    pub fn restrict(&self, cap: f64) -> FilteredComplex {
        let simplices: Vec<(Simplex, f64)> = self
            .simplices
            .iter()
            .filter(|(_, v)| *v <= cap)
            .cloned()
            .collect();
        let index = simplices
            .iter()
            .enumerate()
            .map(|(i, (s, _))| (s.clone(), i))
            .collect();
        FilteredComplex {
            cap: cap.min(self.cap),
            simplices,
            index,
            selective: self.selective.clone(),
            ..*self
        }
    }

    /// Every simplex of `self` is a simplex of `other` (values ignored).
    pub fn is_subcomplex_of(&self, other: &FilteredComplex) -> bool {
        self.simplices.iter().all(|(s, _)| other.contains(s))
    }

    /// Same simplex set (values ignored).
    pub fn same_simplices(&self, other: &FilteredComplex) -> bool {
        self.len() == other.len() && self.is_subcomplex_of(other)
    }

    /// Euler characteristic of the subcomplex with value at most `t`.
    pub fn euler_characteristic(&self, t: f64) -> i64 {
        self.simplices
            .iter()
            .filter(|(_, v)| *v <= t)
            .map(|(s, _)| if s.dim() % 2 == 0 { 1 } else { -1 })
            .sum()
    }

    fn selective_label(&self) -> String {
        if self.selective.is_empty() {
            "empty".to_string()
        } else if self.selective.len() == self.num_points {
            "all".to_string()
        } else {
            let mut s = String::new();
            let _ = write_vertex_list(&mut s, &self.selective);
            s
        }
    }

    /// Text form: a header line followed by `v0,..,vk value` per simplex in
    /// filtration order. Wrap complexes use the header word `wrap`.
    pub fn to_file_string(&self) -> String {
        let word = if self.kind == ComplexKind::Wrap {
            "wrap"
        } else {
            "complex"
        };
        let mut out = format!(
            "{word} dim={} E={} cap={}\n",
            self.dim,
            self.selective_label(),
            sig12(self.cap)
        );
        for (s, v) in &self.simplices {
            let _ = writeln!(out, "{s} {}", sig12(*v));
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_file_string())?;
        Ok(())
    }

    /// Parses the text form. The ground-set size is taken as one more than
    /// the largest vertex mentioned (or the selective list), since the file
    /// does not record it.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::parse(0, "empty complex file"))?;
        let mut toks = header.split_whitespace();
        let word = toks.next().unwrap_or("");
        let is_wrap = match word {
            "complex" => false,
            "wrap" => true,
            _ => return Err(Error::parse(hline, "expected `complex` or `wrap` header")),
        };
        let mut dim = None;
        let mut e_label = None;
        let mut cap = None;
        for tok in toks {
            let (key, val) = tok
                .split_once('=')
                .ok_or_else(|| Error::parse(hline, format!("malformed header field `{tok}`")))?;
            match key {
                "dim" => {
                    dim = Some(
                        val.parse::<usize>()
                            .map_err(|_| Error::parse(hline, format!("invalid dim `{val}`")))?,
                    )
                }
                "E" => e_label = Some(val.to_string()),
                "cap" => {
                    cap = Some(
                        parse_cap(val)
                            .map_err(|_| Error::parse(hline, format!("invalid cap `{val}`")))?,
                    )
                }
                _ => return Err(Error::parse(hline, format!("unknown header field `{key}`"))),
            }
        }
        let dim = dim.ok_or_else(|| Error::parse(hline, "header lacks dim="))?;
        let e_label = e_label.ok_or_else(|| Error::parse(hline, "header lacks E="))?;
        let cap = cap.ok_or_else(|| Error::parse(hline, "header lacks cap="))?;

        let mut simplices = Vec::new();
        for (ln, line) in lines {
            let (verts, val) = line
                .split_once(char::is_whitespace)
                .ok_or_else(|| Error::parse(ln, "expected `vertices value`"))?;
            let verts = parse_vertex_list(verts).map_err(|m| Error::parse(ln, m))?;
            let s = Simplex::new(verts).map_err(|e| Error::parse(ln, e.to_string()))?;
            let v = parse_cap(val.trim())
                .map_err(|_| Error::parse(ln, format!("invalid value `{}`", val.trim())))?;
            simplices.push((s, v));
        }
        let max_vertex = simplices
            .iter()
            .filter_map(|(s, _)| s.vertices().last().copied())
            .max();
        let (kind, selective, num_points) = match e_label.as_str() {
            "all" => {
                let m = max_vertex.map_or(0, |v| v + 1);
                (ComplexKind::Delaunay, (0..m).collect(), m)
            }
            "empty" => (
                ComplexKind::Cech,
                Vec::new(),
                max_vertex.map_or(0, |v| v + 1),
            ),
            list => {
                let e = parse_vertex_list(list).map_err(|m| Error::parse(hline, m))?;
                let m = max_vertex.max(e.iter().copied().max()).map_or(0, |v| v + 1);
                (ComplexKind::Selective, e, m)
            }
        };
        let kind = if is_wrap { ComplexKind::Wrap } else { kind };
        FilteredComplex::new(dim, num_points, kind, selective, cap, simplices)
            .map_err(|e| Error::parse(0, e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

/// Filtration order: value, then dimension, then lexicographic.
pub(crate) fn filtration_cmp(a: &(Simplex, f64), b: &(Simplex, f64)) -> std::cmp::Ordering {
    a.1.total_cmp(&b.1).then_with(|| a.0.cmp_dim_lex(&b.0))
}

/// Parses `0,2,5`; an empty string is rejected.
pub fn parse_vertex_list(s: &str) -> std::result::Result<Vec<usize>, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("invalid vertex index `{t}`"))
        })
        .collect()
}

/// Stored value of `q` in `k`, if present.
pub fn complex_contains(k: &FilteredComplex, q: &Simplex) -> Option<f64> {
    k.value(q)
}
