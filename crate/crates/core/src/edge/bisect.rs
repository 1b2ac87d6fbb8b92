use crate::classifier::Classifier;
use crate::geometry::{distance, Point2};

use super::{Budget, EdgeError};

/// Interior and exterior sequences produced by bisection. The first element
/// of each is the caller's seed.
#[derive(Debug, Clone, PartialEq)]
pub struct BisectionTrace {
    pub inner: Vec<Point2>,
    pub outer: Vec<Point2>,
}

impl BisectionTrace {
    pub fn inner_end(&self) -> Point2 {
        *self.inner.last().expect("trace always holds its seed")
    }

    pub fn outer_end(&self) -> Point2 {
        *self.outer.last().expect("trace always holds its seed")
    }

    pub fn gap(&self) -> f64 {
        distance(self.inner_end(), self.outer_end())
    }

    /// Number of midpoint queries issued.
    pub fn queries(&self) -> usize {
        self.inner.len() + self.outer.len() - 2
    }
}

/// Halves the bracket `[x_in0, x_out0]` until its ends are closer than
/// `epsilon`. The seeds are trusted to carry labels 1 and 0 and are not
/// re-queried.
pub fn bisect(
    c: &Classifier,
    x_in0: Point2,
    x_out0: Point2,
    epsilon: f64,
    max_queries: u64,
) -> Result<BisectionTrace, EdgeError> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(EdgeError::InvalidEpsilon(epsilon));
    }
    for p in [x_in0, x_out0] {
        if !p.is_finite() {
            return Err(EdgeError::NonFinite(p));
        }
    }
    bisect_with(&Budget::new(c, max_queries), x_in0, x_out0, epsilon)
}

pub(crate) fn bisect_with(
    budget: &Budget<'_>,
    x_in0: Point2,
    x_out0: Point2,
    epsilon: f64,
) -> Result<BisectionTrace, EdgeError> {
    let mut trace = BisectionTrace {
        inner: vec![x_in0],
        outer: vec![x_out0],
    };
    while trace.gap() >= epsilon {
        let mid = trace.inner_end().midpoint(trace.outer_end());
        let label = budget
            .query(mid)
            .map_err(|_| EdgeError::BudgetExhausted(budget.granted()))?;
        if label {
            trace.inner.push(mid);
        } else {
            trace.outer.push(mid);
        }
    }
    Ok(trace)
}
