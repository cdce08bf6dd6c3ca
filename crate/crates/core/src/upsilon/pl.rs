use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// A continuous piecewise linear function on `[0, 2]` given by exact breakpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseLinearFn {
    breakpoints: Vec<(Rational, Rational)>,
}

impl PiecewiseLinearFn {
    pub fn new(breakpoints: Vec<(Rational, Rational)>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidParams("need at least two breakpoints".into()));
        }
        if breakpoints[0].0 != rational::int(0) || breakpoints.last().unwrap().0 != rational::int(2) {
            return Err(Error::InvalidParams("breakpoints must start at t = 0 and end at t = 2".into()));
        }
        if breakpoints.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidParams("breakpoint abscissae must increase strictly".into()));
        }
        Ok(PiecewiseLinearFn { breakpoints })
    }

    pub fn breakpoints(&self) -> &[(Rational, Rational)] {
        &self.breakpoints
    }

    pub fn slopes(&self) -> Vec<Rational> {
        self.breakpoints.windows(2).map(|w| (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0)).collect()
    }

    pub fn is_convex(&self) -> bool {
        self.slopes().windows(2).all(|w| w[0] <= w[1])
    }

    /// Value at `t ∈ [0, 2]`.
    pub fn eval(&self, t: &Rational) -> Rational {
        let bp = &self.breakpoints;
        let i = bp.partition_point(|(x, _)| x <= t).clamp(1, bp.len() - 1);
        let (t0, v0) = &bp[i - 1];
        let (t1, v1) = &bp[i];
        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    }

    /// Removes interior breakpoints where the slope does not change.
    pub fn simplified(&self) -> Self {
        let mut out: Vec<(Rational, Rational)> = vec![self.breakpoints[0].clone()];
        for i in 1..self.breakpoints.len() - 1 {
            let (a, b, c) = (out.last().unwrap(), &self.breakpoints[i], &self.breakpoints[i + 1]);
            let s1 = (&b.1 - &a.1) / (&b.0 - &a.0);
            let s2 = (&c.1 - &b.1) / (&c.0 - &b.0);
            if s1 != s2 {
                out.push(b.clone());
            }
        }
        out.push(self.breakpoints.last().unwrap().clone());
        PiecewiseLinearFn { breakpoints: out }
    }
}

impl Serialize for PiecewiseLinearFn {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.breakpoints.len()))?;
        for (t, v) in &self.breakpoints {
            seq.serialize_element(&[rational::format_rational(t), rational::format_rational(v)])?;
        }
        seq.end()
    }
}
