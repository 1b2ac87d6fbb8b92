//! Feasibility of the DC dispatch problem by vertex enumeration in
//! dispatch space, sharing no code with the simplex path.
//!
//! Angles follow from bus injections through the reduced Laplacian, so every
//! constraint is affine in the dispatchable outputs. The feasible set is a
//! bounded polytope on the hyperplane `Σ p_g = demand - injection`; it is
//! nonempty exactly when one of its candidate vertices satisfies every
//! constraint.

use epsedge_core::dcopf::Network;
use epsedge_core::Point2;

const TOL: f64 = 1e-7;

pub fn brute_force_feasible(net: &Network, injection: Point2) -> bool {
    let mut buses = net.buses.clone();
    buses.sort_unstable();
    let n = buses.len();
    let idx = |b: u32| buses.iter().position(|&x| x == b).unwrap();

    // Any bus works as the angle reference; take the first.
    let mut lap = vec![vec![0.0; n]; n];
    for l in &net.lines {
        let w = -l.susceptance;
        let (i, j) = (idx(l.from), idx(l.to));
        lap[i][i] += w;
        lap[j][j] += w;
        lap[i][j] -= w;
        lap[j][i] -= w;
    }
    let reduced: Vec<Vec<f64>> = (1..n)
        .map(|i| (1..n).map(|j| lap[i][j]).collect())
        .collect();
    let inverse = invert(&reduced).expect("network is connected");

    let mut base = vec![0.0; n];
    for load in &net.loads {
        base[idx(load.bus)] -= load.p_d;
    }
    let fixed = [
        (net.renewable_slots[0].generator, injection.x),
        (net.renewable_slots[1].generator, injection.y),
    ];
    for (id, p) in fixed {
        let g = net.generators.iter().find(|g| g.id == id).unwrap();
        base[idx(g.bus)] += p;
    }
    let dispatchable: Vec<_> = net
        .generators
        .iter()
        .filter(|g| fixed.iter().all(|(id, _)| *id != g.id))
        .collect();
    let k = dispatchable.len();

    // θ as an affine map of p: theta0 + Σ_g theta_g[g] p_g, reference angle zero.
    let angles = |injections: &[f64]| -> Vec<f64> {
        let mut theta = vec![0.0; n];
        for i in 1..n {
            theta[i] = (1..n).map(|j| inverse[i - 1][j - 1] * injections[j]).sum();
        }
        theta
    };
    let theta0 = angles(&base);
    let theta_g: Vec<Vec<f64>> = dispatchable
        .iter()
        .map(|g| {
            let mut unit = vec![0.0; n];
            unit[idx(g.bus)] = 1.0;
            angles(&unit)
        })
        .collect();

    // Inequalities a · p ≤ b.
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    for (q, g) in dispatchable.iter().enumerate() {
        let mut a = vec![0.0; k];
        a[q] = 1.0;
        rows.push((a.clone(), g.p_max));
        a[q] = -1.0;
        rows.push((a, -g.p_min));
    }
    for l in &net.lines {
        let (i, j) = (idx(l.from), idx(l.to));
        let d0 = theta0[i] - theta0[j];
        let dg: Vec<f64> = theta_g.iter().map(|t| t[i] - t[j]).collect();
        let w = -l.susceptance;
        let mut push = |scale: f64, bound: f64| {
            if bound.is_finite() {
                rows.push((dg.iter().map(|v| scale * v).collect(), bound - scale * d0));
            }
        };
        push(w, l.flow_limit);
        push(-w, l.flow_limit);
        push(1.0, l.angle_max);
        push(-1.0, -l.angle_min);
    }
    let demand: f64 = -base.iter().sum::<f64>();

    let satisfies = |p: &[f64]| {
        let total: f64 = p.iter().sum();
        (total - demand).abs() <= TOL
            && rows
                .iter()
                .all(|(a, b)| a.iter().zip(p).map(|(x, y)| x * y).sum::<f64>() <= b + TOL)
    };

    if k == 0 {
        return demand.abs() <= TOL && satisfies(&[]);
    }
    let mut chosen = Vec::with_capacity(k - 1);
    any_vertex(&rows, k, demand, 0, &mut chosen, &satisfies)
}

fn any_vertex(
    rows: &[(Vec<f64>, f64)],
    k: usize,
    demand: f64,
    from: usize,
    chosen: &mut Vec<usize>,
    satisfies: &dyn Fn(&[f64]) -> bool,
) -> bool {
    if chosen.len() == k - 1 {
        let mut a = vec![vec![1.0; k]];
        let mut b = vec![demand];
        for &r in chosen.iter() {
            a.push(rows[r].0.clone());
            b.push(rows[r].1);
        }
        return solve(a, b).is_some_and(|p| satisfies(&p));
    }
    for r in from..rows.len() {
        chosen.push(r);
        if any_vertex(rows, k, demand, r + 1, chosen, satisfies) {
            return true;
        }
        chosen.pop();
    }
    false
}

fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                let pivot_row = a[col].clone();
                for (x, p) in a[r][col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= f * p;
                }
                b[r] -= f * b[col];
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

fn invert(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = m.len();
    let mut columns = Vec::with_capacity(n);
    for c in 0..n {
        let mut e = vec![0.0; n];
        e[c] = 1.0;
        columns.push(solve(m.to_vec(), e)?);
    }
    Some(
        (0..n)
            .map(|i| (0..n).map(|j| columns[j][i]).collect())
            .collect(),
    )
}
