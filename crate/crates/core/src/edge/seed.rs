use std::collections::HashSet;

use crate::classifier::Classifier;
use crate::geometry::{distance, Domain, Point2};

use super::{Budget, EdgeError};

/// Finds an interior/exterior seed pair.
///
/// Supplied seeds are queried once to confirm their labels. Missing seeds
/// are searched for on the domain corners (top-right first, then
/// counterclockwise) and centre, then on successively finer lattices with
/// `2^k` cells per side. The search stops after the first level that has
/// produced both labels and returns the closest opposite-label pair seen.
pub fn find_seeds(
    c: &Classifier,
    seed_interior: Option<Point2>,
    seed_exterior: Option<Point2>,
    max_queries: u64,
) -> Result<(Point2, Point2), EdgeError> {
    find_seeds_with(&Budget::new(c, max_queries), seed_interior, seed_exterior)
}

pub(crate) fn find_seeds_with(
    budget: &Budget<'_>,
    seed_interior: Option<Point2>,
    seed_exterior: Option<Point2>,
) -> Result<(Point2, Point2), EdgeError> {
    let exhausted = || EdgeError::BudgetExhausted(budget.granted());
    let mut interior = Vec::new();
    let mut exterior = Vec::new();
    let mut queries = 0u64;

    if let Some(p) = seed_interior {
        queries += 1;
        if !budget.query(p).map_err(|_| exhausted())? {
            return Err(EdgeError::InvalidSeed {
                point: p,
                expected: "interior",
            });
        }
        interior.push(p);
    }
    if let Some(p) = seed_exterior {
        queries += 1;
        if budget.query(p).map_err(|_| exhausted())? {
            return Err(EdgeError::InvalidSeed {
                point: p,
                expected: "exterior",
            });
        }
        exterior.push(p);
    }

    let domain = *budget.classifier().domain();
    let mut level = 0u32;
    while interior.is_empty() || exterior.is_empty() {
        for p in lattice_level(&domain, level) {
            match budget.query(p) {
                Ok(true) => interior.push(p),
                Ok(false) => exterior.push(p),
                Err(_) => {
                    let label = u8::from(exterior.is_empty());
                    return Err(EdgeError::NoBoundaryFound { queries, label });
                }
            }
            queries += 1;
        }
        level += 1;
    }
    Ok(closest_pair(&interior, &exterior))
}

/// Points first visited at `level`: level 0 is the four corners and the
/// centre; level k ≥ 1 adds the nodes of the `2^k × 2^k` cell lattice not
/// already visited.
fn lattice_level(domain: &Domain, level: u32) -> Vec<Point2> {
    if level == 0 {
        let [ll, lr, ur, ul] = domain.corners();
        return vec![ur, ul, ll, lr, domain.center()];
    }
    let n = 1usize << level;
    let node = |i: usize, j: usize| {
        Point2::new(
            domain.x_min + domain.width() * i as f64 / n as f64,
            domain.y_min + domain.height() * j as f64 / n as f64,
        )
    };
    let mut seen: HashSet<(usize, usize)> = HashSet::new();
    if level == 1 {
        seen.extend([(0, 0), (0, 2), (2, 0), (2, 2), (1, 1)]);
    }
    let mut out = Vec::new();
    for j in 0..=n {
        for i in 0..=n {
            let coarse = level > 1 && i % 2 == 0 && j % 2 == 0;
            if coarse || seen.contains(&(i, j)) {
                continue;
            }
            out.push(node(i, j));
        }
    }
    out
}

fn closest_pair(interior: &[Point2], exterior: &[Point2]) -> (Point2, Point2) {
    let mut best = (interior[0], exterior[0]);
    let mut best_d = f64::INFINITY;
    for &a in interior {
        for &b in exterior {
            let d = distance(a, b);
            if d < best_d {
                best_d = d;
                best = (a, b);
            }
        }
    }
    best
}
