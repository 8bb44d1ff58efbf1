use std::fmt;

use crate::simplex::{is_sorted_subset, sorted_difference};
use crate::{Error, Result, Simplex};

/// The face interval `[P, R] = {Q : P ⊆ Q ⊆ R}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub lower: Simplex,
    pub upper: Simplex,
}

impl Interval {
    pub fn new(lower: Simplex, upper: Simplex) -> Result<Self> {
        if !lower.is_face_of(&upper) {
            return Err(Error::precondition(format!(
                "[{lower}] is not a face of [{upper}]"
            )));
        }
        Ok(Interval { lower, upper })
    }

    pub fn singular(s: Simplex) -> Self {
        Interval {
            lower: s.clone(),
            upper: s,
        }
    }

    pub fn is_singular(&self) -> bool {
        self.lower == self.upper
    }

    pub fn contains(&self, q: &Simplex) -> bool {
        self.lower.is_face_of(q) && q.is_face_of(&self.upper)
    }

    /// `R \ P`.
    pub fn free_vertices(&self) -> Vec<usize> {
        sorted_difference(self.upper.vertices(), self.lower.vertices())
    }

    /// Number of simplices in the interval.
    pub fn size(&self) -> usize {
        1usize << self.free_vertices().len()
    }

    /// All simplices of the interval, ordered by dimension then
    /// lexicographically.
    pub fn members(&self) -> Vec<Simplex> {
        let free = self.free_vertices();
        let mut out: Vec<Simplex> = (0u64..(1u64 << free.len()))
            .map(|mask| {
                let mut v = self.lower.vertices().to_vec();
                v.extend(
                    free.iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, &x)| x),
                );
                v.sort_unstable();
                Simplex::from_sorted(v)
            })
            .collect();
        out.sort_by(|a, b| a.cmp_dim_lex(b));
        out
    }

    /// Intersection with another interval, `None` when empty.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lower = crate::simplex::sorted_union(self.lower.vertices(), other.lower.vertices());
        let upper =
            crate::simplex::sorted_intersection(self.upper.vertices(), other.upper.vertices());
        is_sorted_subset(&lower, &upper).then(|| Interval {
            lower: Simplex::from_sorted(lower),
            upper: Simplex::from_sorted(upper),
        })
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}; {}]", self.lower, self.upper)
    }
}
