use crate::classifier::Classifier;
use crate::geometry::{circle_circle_intersection, distance, select_forward, Point2};

use super::bisect::bisect_with;
use super::domain_walk::{domain_walk_with, DomainWalkError};
use super::{
    BisectionTrace, BoundaryEstimate, BoundarySets, Budget, EdgeError, Termination, WalkFailure,
};

/// Walk steps taken before the closure test is evaluated. Early steps sit
/// within ε of the starting pair by construction.
pub const MIN_CLOSURE_STEPS: usize = 3;

/// Consecutive steps pivoting about the same point that make up a full
/// turn: each step rotates the opposite end by 60°.
const FULL_TURN_STEPS: usize = 6;

/// ε-stepping walk along the decision boundary, starting from the last
/// interior and exterior points of a completed bisection.
///
/// Each step queries the intersection of the ε-circles around the latest
/// inner and outer points lying to the left of `inner → outer`, so the
/// interior stays on the left and the walk runs counterclockwise around it.
/// Test points outside the domain hand over to
/// [`domain_boundary_walk`](super::domain_boundary_walk).
pub fn decision_boundary_walk(
    c: &Classifier,
    trace: &BisectionTrace,
    epsilon: f64,
    max_queries: u64,
) -> Result<BoundaryEstimate, EdgeError> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(EdgeError::InvalidEpsilon(epsilon));
    }
    let start = c.query_count();
    let mut estimate = walk_with(&Budget::new(c, max_queries), trace, epsilon);
    estimate.total_queries = c.query_count() - start;
    Ok(estimate)
}

pub(crate) fn walk_with(
    budget: &Budget<'_>,
    trace: &BisectionTrace,
    epsilon: f64,
) -> BoundaryEstimate {
    let domain = *budget.classifier().domain();
    let tol = domain.tolerance();
    let inner0 = trace.inner_end();
    let outer0 = trace.outer_end();
    let mut sets = BoundarySets::new(inner0, outer0);

    let mut steps = 0usize;
    let mut previous_test: Option<Point2> = None;
    let mut just_recovered = false;
    let mut pivot_run = 0usize;
    let mut departed = false;
    let mut last_pivot: Option<Point2> = None;

    let termination = loop {
        let a = sets.inner_end();
        let b = sets.outer_end();
        let x_test = match forward_step(a, b, epsilon, tol) {
            Some(x) => x,
            None if just_recovered => break Termination::Failed(WalkFailure::Degenerate),
            None => {
                // Tighten the bracket and retry the step.
                just_recovered = true;
                match rebisect(budget, &mut sets, epsilon / 2.0) {
                    Ok(()) => continue,
                    Err(Termination::BudgetExhausted) => break Termination::BudgetExhausted,
                    Err(t) => break t,
                }
            }
        };
        just_recovered = false;
        if previous_test.is_some_and(|p| distance(p, x_test) <= tol) {
            break Termination::Failed(WalkFailure::Stalled);
        }
        previous_test = Some(x_test);
        steps += 1;

        let appended_from = sets.len();
        if let Some(x_test) = domain.snap(x_test, tol) {
            match budget.query(x_test) {
                Ok(label) => sets.push(x_test, label),
                Err(_) => break Termination::BudgetExhausted,
            }
        } else {
            match domain_walk_with(budget, &mut sets, epsilon) {
                Ok(()) => {}
                Err(DomainWalkError::BudgetExhausted) => break Termination::BudgetExhausted,
                Err(DomainWalkError::PerimeterTraversed) => {
                    break Termination::Failed(WalkFailure::PerimeterTraversed)
                }
                Err(DomainWalkError::NoPerimeterCandidate) => {
                    break Termination::Failed(WalkFailure::Degenerate)
                }
            }
        }

        // A walk circling one fixed point makes no progress along ∂S.
        let pivot = if sets.inner_end() == a {
            Some(a)
        } else if sets.outer_end() == b {
            Some(b)
        } else {
            None
        };
        pivot_run = match (pivot, last_pivot) {
            (Some(p), Some(q)) if p == q => pivot_run + 1,
            (Some(_), _) => 1,
            (None, _) => 0,
        };
        last_pivot = pivot;
        if pivot_run >= FULL_TURN_STEPS {
            break Termination::Failed(WalkFailure::Stalled);
        }

        let tested = || sets.tail_from(appended_from).chain(std::iter::once(x_test));
        let near_start = |t: Point2| distance(t, inner0).min(distance(t, outer0)) <= epsilon;
        // Test points start out ε from the seed pair by construction, so
        // closure only counts once the walk has left that neighbourhood.
        if departed
            && steps >= MIN_CLOSURE_STEPS
            && sets.inner.len() > 1
            && sets.outer.len() > 1
            && tested().any(near_start)
        {
            break Termination::ClosedLoop;
        }
        departed |= tested().any(|t| !near_start(t));
    };

    BoundaryEstimate {
        sets,
        epsilon,
        total_queries: 0,
        termination,
    }
}

fn forward_step(a: Point2, b: Point2, epsilon: f64, tol: f64) -> Option<Point2> {
    let candidates = circle_circle_intersection(a, b, epsilon, tol).ok()?;
    if candidates.len() < 2 {
        return None;
    }
    select_forward(a, b, &candidates, tol).ok()
}

/// Re-runs bisection between the latest inner and outer points, appending
/// every midpoint to the matching set.
fn rebisect(budget: &Budget<'_>, sets: &mut BoundarySets, epsilon: f64) -> Result<(), Termination> {
    let tol = budget.classifier().domain().tolerance();
    if distance(sets.inner_end(), sets.outer_end()) < tol {
        return Err(Termination::Failed(WalkFailure::Degenerate));
    }
    let trace = bisect_with(budget, sets.inner_end(), sets.outer_end(), epsilon)
        .map_err(|_| Termination::BudgetExhausted)?;
    // Replay in query order: each midpoint's label decides which sequence
    // it extended, and the sequences grow in lockstep with the queries.
    let (mut i, mut o) = (1, 1);
    let (mut a, mut b) = (trace.inner[0], trace.outer[0]);
    while i < trace.inner.len() || o < trace.outer.len() {
        let mid = a.midpoint(b);
        if i < trace.inner.len() && trace.inner[i] == mid {
            sets.push(mid, true);
            a = mid;
            i += 1;
        } else {
            sets.push(mid, false);
            b = mid;
            o += 1;
        }
    }
    Ok(())
}
