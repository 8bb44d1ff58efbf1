use std::collections::HashMap;

/// Sum of two sorted Z/2 vectors.
fn add_into(a: &mut Vec<usize>, b: &[usize]) {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    *a = out;
}

/// Incremental column reduction by lowest nonzero row. Each stored column
/// keeps the combination of inserted columns it equals.
pub(crate) struct Reducer {
    track: bool,
    columns: Vec<Vec<usize>>,
    sources: Vec<Vec<usize>>,
    by_low: HashMap<usize, usize>,
}

pub(crate) enum Reduced {
    /// New pivot in this row.
    Pivot(usize),
    /// The column reduced to zero; the inserted columns summing to zero.
    Zero(Vec<usize>),
}

impl Reducer {
    /// With `track` set, zero columns report the combination that killed
    /// them; otherwise [`Reduced::Zero`] carries an empty list.
    pub(crate) fn new(track: bool) -> Self {
        Reducer {
            track,
            columns: Vec::new(),
            sources: Vec::new(),
            by_low: HashMap::new(),
        }
    }

    /// Reduces `column` against the stored ones and stores the result.
    /// `id` names the column in the returned combinations.
    pub(crate) fn push(&mut self, id: usize, mut column: Vec<usize>) -> Reduced {
        column.sort_unstable();
        let mut source = if self.track { vec![id] } else { Vec::new() };
        while let Some(&low) = column.last() {
            match self.by_low.get(&low) {
                Some(&k) => {
                    add_into(&mut column, &self.columns[k]);
                    if self.track {
                        add_into(&mut source, &self.sources[k]);
                    }
                }
                None => {
                    self.by_low.insert(low, self.columns.len());
                    self.columns.push(column);
                    self.sources.push(source);
                    return Reduced::Pivot(low);
                }
            }
        }
        Reduced::Zero(source)
    }

    pub(crate) fn rank(&self) -> usize {
        self.by_low.len()
    }
}
