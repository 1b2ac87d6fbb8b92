//! DC optimal power flow feasibility as a black-box classifier over two
//! renewable injections.

mod network;
mod simplex;

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::classifier::Classifier;
use crate::geometry::{GeometryError, Point2};

pub use network::{
    load_network, parse_network, Generator, Line, Load, Network, NetworkError, RenewableSlot,
};
pub use simplex::{
    lp_feasible, lp_minimize, LinearRow, LpError, LpProblem, LpSolution, FEASIBILITY_TOLERANCE,
};

/// Column layout of the feasibility LP.
#[derive(Debug, Clone, PartialEq)]
pub struct LpLayout {
    /// Dispatchable generator ids, one column each, starting at column 0.
    pub generators: Vec<u32>,
    /// Non-reference buses with an angle column, following the generators.
    pub angle_buses: Vec<u32>,
    /// First flow column; line `k` uses `flow_offset + k`.
    pub flow_offset: usize,
}

/// Builds the LP whose feasibility decides the label at `injection`.
///
/// Columns are the dispatchable outputs, the angles of every bus except the
/// reference bus and one flow per line. Rows are nodal balance, the flow
/// definitions and the angle-difference limits.
pub fn build_feasibility_lp(net: &Network, injection: Point2) -> (LpProblem, LpLayout) {
    let reference = net.reference_bus();
    let generators: Vec<&Generator> = net.dispatchable().collect();
    let mut angle_buses: Vec<u32> = net
        .buses
        .iter()
        .copied()
        .filter(|&b| b != reference)
        .collect();
    angle_buses.sort_unstable();
    let flow_offset = generators.len() + angle_buses.len();
    let num_vars = flow_offset + net.lines.len();

    let mut names = Vec::with_capacity(num_vars);
    let mut lower = Vec::with_capacity(num_vars);
    let mut upper = Vec::with_capacity(num_vars);
    let mut cost = vec![0.0; num_vars];
    for (k, g) in generators.iter().enumerate() {
        names.push(format!("p_g{}", g.id));
        lower.push(g.p_min);
        upper.push(g.p_max);
        cost[k] = g.cost;
    }
    let angle_col: HashMap<u32, usize> = angle_buses
        .iter()
        .enumerate()
        .map(|(k, &b)| (b, generators.len() + k))
        .collect();
    for &b in &angle_buses {
        names.push(format!("theta{b}"));
        lower.push(f64::NEG_INFINITY);
        upper.push(f64::INFINITY);
    }
    for l in &net.lines {
        names.push(format!("p_{}_{}", l.from, l.to));
        lower.push(-l.flow_limit);
        upper.push(l.flow_limit);
    }

    let fixed = [
        (net.renewable_slots[0].generator, injection.x),
        (net.renewable_slots[1].generator, injection.y),
    ];
    let mut rows = Vec::new();
    let mut buses = net.buses.clone();
    buses.sort_unstable();
    for &bus in &buses {
        let mut coeffs = Vec::new();
        for (k, g) in generators.iter().enumerate() {
            if g.bus == bus {
                coeffs.push((k, 1.0));
            }
        }
        for (k, l) in net.lines.iter().enumerate() {
            if l.to == bus {
                coeffs.push((flow_offset + k, 1.0));
            } else if l.from == bus {
                coeffs.push((flow_offset + k, -1.0));
            }
        }
        let demand: f64 = net
            .loads
            .iter()
            .filter(|l| l.bus == bus)
            .map(|l| l.p_d)
            .sum();
        let injected: f64 = fixed
            .iter()
            .filter(|(id, _)| net.generator(*id).is_some_and(|g| g.bus == bus))
            .map(|(_, p)| p)
            .sum();
        let rhs = demand - injected;
        rows.push(LinearRow {
            coeffs,
            lower: rhs,
            upper: rhs,
        });
    }
    let angle_terms = |l: &Line, scale: f64| {
        let mut terms = Vec::with_capacity(2);
        if let Some(&c) = angle_col.get(&l.from) {
            terms.push((c, scale));
        }
        if let Some(&c) = angle_col.get(&l.to) {
            terms.push((c, -scale));
        }
        terms
    };
    for (k, l) in net.lines.iter().enumerate() {
        // p_ij + b_ij (θ_i - θ_j) = 0
        let mut coeffs = vec![(flow_offset + k, 1.0)];
        coeffs.extend(angle_terms(l, l.susceptance));
        rows.push(LinearRow {
            coeffs,
            lower: 0.0,
            upper: 0.0,
        });
    }
    for l in &net.lines {
        if l.angle_min.is_infinite() && l.angle_max.is_infinite() {
            continue;
        }
        rows.push(LinearRow {
            coeffs: angle_terms(l, 1.0),
            lower: l.angle_min,
            upper: l.angle_max,
        });
    }

    let lp = LpProblem {
        names,
        lower,
        upper,
        cost,
        rows,
    };
    let layout = LpLayout {
        generators: generators.iter().map(|g| g.id).collect(),
        angle_buses,
        flow_offset,
    };
    (lp, layout)
}

/// Least-cost dispatch at a given injection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dispatch {
    pub injection: Point2,
    /// Cost of the dispatchable generators only.
    pub cost: f64,
    pub generators: Vec<(u32, f64)>,
    pub flows: Vec<((u32, u32), f64)>,
}

/// Solves the economic dispatch at `injection`; `None` when infeasible.
pub fn economic_dispatch(net: &Network, injection: Point2) -> Result<Option<Dispatch>, LpError> {
    let (lp, layout) = build_feasibility_lp(net, injection);
    let Some(sol) = lp_minimize(&lp)? else {
        return Ok(None);
    };
    Ok(Some(Dispatch {
        injection,
        cost: sol.objective,
        generators: layout
            .generators
            .iter()
            .enumerate()
            .map(|(k, &id)| (id, sol.x[k]))
            .collect(),
        flows: net
            .lines
            .iter()
            .enumerate()
            .map(|(k, l)| ((l.from, l.to), sol.x[layout.flow_offset + k]))
            .collect(),
    }))
}

/// Label 1 exactly when the dispatch LP at `(x, y)` is feasible. The domain
/// is `[0, rating_x] × [0, rating_y]`.
///
/// # Panics
/// The returned classifier panics if the simplex hits its iteration limit,
/// which Bland's rule rules out short of numerical breakdown.
pub fn make_dcopf_classifier(net: Network) -> Result<Classifier, GeometryError> {
    let domain = net.injection_domain()?;
    let name = format!("dcopf:{}", net.name());
    let net = Arc::new(net);
    Ok(Classifier::new(name, domain, move |p| {
        let (lp, _) = build_feasibility_lp(&net, p);
        lp_feasible(&lp).expect("feasibility LP failed to converge")
    }))
}
