use thiserror::Error;

use crate::classifier::Classifier;
use crate::geometry::{distance, perimeter_circle_intersection, Domain, PerimeterPoint, Point2};

use super::{BoundarySets, Budget, Exhausted};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum DomainWalkError {
    #[error("no perimeter point lies at distance epsilon from the latest interior point")]
    NoPerimeterCandidate,
    #[error("walked the whole perimeter without meeting an exterior point")]
    PerimeterTraversed,
    #[error("query budget exhausted during the domain walk")]
    BudgetExhausted,
}

impl From<Exhausted> for DomainWalkError {
    fn from(_: Exhausted) -> Self {
        DomainWalkError::BudgetExhausted
    }
}

/// Follows the domain perimeter in ε steps from the latest interior point,
/// appending interior perimeter points to `sets.inner` until the first
/// exterior one, which is appended to `sets.outer`.
///
/// The first perimeter point is the one farther from the latest exterior
/// point; later points advance monotonically in arclength in the direction
/// set by that first choice.
pub fn domain_boundary_walk(
    c: &Classifier,
    sets: &mut BoundarySets,
    epsilon: f64,
    max_queries: u64,
) -> Result<(), DomainWalkError> {
    domain_walk_with(&Budget::new(c, max_queries), sets, epsilon)
}

pub(crate) fn domain_walk_with(
    budget: &Budget<'_>,
    sets: &mut BoundarySets,
    epsilon: f64,
) -> Result<(), DomainWalkError> {
    let domain = *budget.classifier().domain();
    let tol = domain.tolerance();
    let anchor = sets.inner_end();
    let outer_end = sets.outer_end();

    let first = perimeter_circle_intersection(&domain, anchor, epsilon)
        .into_iter()
        .max_by(|a, b| {
            distance(a.point, outer_end)
                .total_cmp(&distance(b.point, outer_end))
                // On a tie keep the lower arclength.
                .then(b.s.total_cmp(&a.s))
        })
        .ok_or(DomainWalkError::NoPerimeterCandidate)?;
    let direction = travel_direction(&domain, anchor, first, epsilon);

    let perimeter = domain.perimeter();
    let mut travelled = 0.0;
    let mut current = first;
    loop {
        if !budget.query(current.point)? {
            sets.push(current.point, false);
            return Ok(());
        }
        sets.push(current.point, true);

        let next = perimeter_circle_intersection(&domain, current.point, epsilon)
            .into_iter()
            .map(|cand| (cand, forward_offset(&domain, current.s, cand.s, direction)))
            .filter(|&(_, off)| off > tol && off < perimeter / 2.0)
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .ok_or(DomainWalkError::PerimeterTraversed)?;
        travelled += next.1;
        if travelled >= perimeter {
            return Err(DomainWalkError::PerimeterTraversed);
        }
        current = next.0;
    }
}

/// +1 for increasing arclength, -1 for decreasing: whichever way leads out of
/// the ε-disk around `anchor` from `first`.
fn travel_direction(domain: &Domain, anchor: Point2, first: PerimeterPoint, epsilon: f64) -> f64 {
    let h = epsilon * 1e-3;
    let ahead = distance(domain.point_at(first.s + h), anchor);
    let behind = distance(domain.point_at(first.s - h), anchor);
    if ahead >= behind {
        1.0
    } else {
        -1.0
    }
}

/// Arclength from `from` to `to` travelling in `direction`, in `[0, P)`.
fn forward_offset(domain: &Domain, from: f64, to: f64, direction: f64) -> f64 {
    domain.wrap_arclength(direction * (to - from))
}
