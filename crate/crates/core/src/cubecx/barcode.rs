use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

use super::persistence::Reduction;

/// A bar `[birth, birth + length)`; `length = None` is an infinite bar.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Bar {
    pub birth: Rational,
    pub length: Option<Rational>,
}

impl Serialize for Bar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("birth", &rational::format_rational(&self.birth))?;
        match &self.length {
            Some(l) => m.serialize_entry("length", &rational::format_rational(l))?,
            None => m.serialize_entry("length", "inf")?,
        }
        m.end()
    }
}

/// Bars of positive length grouped by homological degree, each degree sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Barcode {
    degrees: Vec<Vec<Bar>>,
}

impl Barcode {
    pub fn new(mut degrees: Vec<Vec<Bar>>) -> Self {
        for d in &mut degrees {
            d.sort();
        }
        while degrees.last().is_some_and(|d| d.is_empty()) {
            degrees.pop();
        }
        Barcode { degrees }
    }

    /// Bars from a reduction; `levels` are filtration values scaled by `scale`.
    pub fn from_reduction(red: &Reduction, levels: &[i64], dims: &[u8], scale: i64) -> Self {
        let mut degrees: Vec<Vec<Bar>> = Vec::new();
        let mut push = |d: usize, bar: Bar| {
            if degrees.len() <= d {
                degrees.resize(d + 1, Vec::new());
            }
            degrees[d].push(bar);
        };
        for &(b, d) in &red.pairs {
            if levels[d] > levels[b] {
                push(
                    dims[b] as usize,
                    Bar { birth: rational::ratio(levels[b], scale), length: Some(rational::ratio(levels[d] - levels[b], scale)) },
                );
            }
        }
        for &e in &red.essential {
            push(dims[e] as usize, Bar { birth: rational::ratio(levels[e], scale), length: None });
        }
        Barcode::new(degrees)
    }

    pub fn degrees(&self) -> &[Vec<Bar>] {
        &self.degrees
    }

    pub fn degree(&self, p: usize) -> &[Bar] {
        self.degrees.get(p).map_or(&[], |v| v.as_slice())
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.iter().all(|d| d.is_empty())
    }

    pub fn bar_count(&self) -> usize {
        self.degrees.iter().map(Vec::len).sum()
    }

    /// Highest degree carrying a bar, if any.
    pub fn top_degree(&self) -> Option<usize> {
        self.degrees.iter().rposition(|d| !d.is_empty())
    }

    /// `(degree, bar)` for every infinite bar.
    pub fn infinite_bars(&self) -> Vec<(usize, &Bar)> {
        self.degrees
            .iter()
            .enumerate()
            .flat_map(|(p, d)| d.iter().filter(|b| b.length.is_none()).map(move |b| (p, b)))
            .collect()
    }

    /// Birth of the earliest infinite bar.
    pub fn free_birth(&self) -> Result<Rational> {
        self.infinite_bars().into_iter().map(|(_, b)| b.birth.clone()).min().ok_or(Error::MissingFreePart)
    }

    pub fn reduced(&self) -> Barcode {
        Barcode::new(self.degrees.iter().map(|d| d.iter().filter(|b| b.length.is_some()).cloned().collect()).collect())
    }

    /// Infinite bars plus the finite bars born at or below `cutoff`.
    pub fn truncated(&self, cutoff: &Rational) -> Barcode {
        Barcode::new(
            self.degrees
                .iter()
                .map(|d| d.iter().filter(|b| b.length.is_none() || b.birth <= *cutoff).cloned().collect())
                .collect(),
        )
    }
}

impl Serialize for Barcode {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.degrees.len()))?;
        for d in &self.degrees {
            seq.serialize_element(d)?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn views_and_json() {
        let b = Barcode::new(vec![
            vec![Bar { birth: int(2), length: Some(int(1)) }, Bar { birth: int(0), length: None }],
            vec![Bar { birth: int(5), length: Some(int(2)) }],
        ]);
        assert_eq!(b.free_birth().unwrap(), int(0));
        assert_eq!(b.reduced().bar_count(), 2);
        assert_eq!(b.truncated(&int(3)).bar_count(), 2);
        assert_eq!(b.top_degree(), Some(1));
        assert_eq!(
            serde_json::to_string(&b).unwrap(),
            r#"[[{"birth":"0","length":"inf"},{"birth":"2","length":"1"}],[{"birth":"5","length":"2"}]]"#
        );
        assert!(matches!(Barcode::default().free_birth(), Err(Error::MissingFreePart)));
    }
}
