use epsedge_core::edge::bisect;
use epsedge_core::metrics::region_reference_from_scalar;
use epsedge_core::{
    distance, make_test_classifier, run_edge, Classifier, Domain, EdgeConfig, LevelSetSpec, Point2,
    Termination, TestFunction,
};
use proptest::prelude::*;

fn disk(radius: f64) -> Classifier {
    Classifier::new(
        "disk",
        Domain::new(-2.0, 2.0, -2.0, 2.0).unwrap(),
        move |p| p.x * p.x + p.y * p.y < radius * radius,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn bisection_count_is_log2_of_gap_over_epsilon(
        angle in 0.0..std::f64::consts::TAU,
        offset in -0.5..0.5f64,
        t_in in 0.05..3.0f64,
        t_out in 0.05..3.0f64,
        slide_in in -2.0..2.0f64,
        slide_out in -2.0..2.0f64,
        eps_exp in -4.0..0.0f64,
    ) {
        // Half-plane n · p < offset, seeds placed on either side of it.
        let n = Point2::new(angle.cos(), angle.sin());
        let along = Point2::new(-n.y, n.x);
        let foot = n * offset;
        let x_in = foot - n * t_in + along * slide_in;
        let x_out = foot + n * t_out + along * slide_out;
        let epsilon = 10f64.powf(eps_exp);
        let d0 = distance(x_in, x_out);
        let exact = (d0 / epsilon).log2();
        prop_assume!((exact - exact.round()).abs() > 1e-9);
        let expected = if d0 < epsilon { 0 } else { exact.ceil() as usize };

        let c = Classifier::new("half-plane", Domain::new(-10.0, 10.0, -10.0, 10.0).unwrap(), move |p| {
            n.dot(p) < offset
        });
        let trace = bisect(&c, x_in, x_out, epsilon, 10_000).unwrap();
        prop_assert_eq!(trace.queries(), expected);
        prop_assert_eq!(c.query_count() as usize, expected);
        prop_assert!(trace.gap() < epsilon);
    }
}

#[test]
fn unit_circle_closes_inside_the_band() {
    let c = disk(1.0);
    let eps = 0.05;
    let est = run_edge(&c, &EdgeConfig::new(eps)).unwrap();
    assert_eq!(est.termination, Termination::ClosedLoop);
    for p in est.inner().iter().chain(est.outer()) {
        assert!((p.norm() - 1.0).abs() <= eps, "{p}");
    }
    let start = [est.inner()[0], est.outer()[0]];
    let last = est.sets.walk_order().last().unwrap().0;
    assert!(start.iter().any(|&s| distance(s, last) <= eps));
}

#[test]
fn label_purity_on_test_functions() {
    for f in TestFunction::ALL {
        let c = make_test_classifier(LevelSetSpec::canonical(f));
        let est = run_edge(&c, &EdgeConfig::new(0.1)).unwrap();
        let before = c.query_count();
        assert!(est.inner().iter().all(|&p| c.peek(p)), "{f}");
        assert!(est.outer().iter().all(|&p| !c.peek(p)), "{f}");
        assert_eq!(c.query_count(), before);
    }
}

#[test]
fn walk_steps_are_epsilon_from_the_opposite_end() {
    for f in TestFunction::ALL {
        let c = make_test_classifier(LevelSetSpec::canonical(f));
        let eps = 0.1;
        let est = run_edge(&c, &EdgeConfig::new(eps)).unwrap();
        let tol = 1e-9 * c.domain().diagonal();
        let (mut a, mut b) = (est.inner()[0], est.outer()[0]);
        for (p, label) in est.sets.walk_order().skip(2) {
            // Decision steps sit ε from both ends; perimeter steps are ε from
            // the previous interior point. Either way the new point is ε
            // from the end it was stepped from.
            let from_inner = (distance(p, a) - eps).abs() <= tol;
            let from_outer = (distance(p, b) - eps).abs() <= tol;
            let bisected = distance(p, a.midpoint(b)) <= tol;
            assert!(
                from_inner || from_outer || bisected,
                "{f}: {p} from {a} / {b}"
            );
            if label {
                a = p;
            } else {
                b = p;
            }
        }
    }
}

#[test]
fn runs_are_deterministic() {
    for f in TestFunction::ALL {
        let spec = LevelSetSpec::canonical(f);
        let first = run_edge(&make_test_classifier(spec), &EdgeConfig::new(0.05)).unwrap();
        let second = run_edge(&make_test_classifier(spec), &EdgeConfig::new(0.05)).unwrap();
        assert_eq!(first, second, "{f}");
    }
}

#[test]
fn perimeter_runs_progress_in_one_direction() {
    // A band along the bottom edge: the walk crosses the domain twice and
    // covers the right, bottom and left edges in between.
    let domain = Domain::new(0.0, 1.0, 0.0, 1.0).unwrap();
    let c = Classifier::new("band", domain, |p| p.y < 0.3 + 0.2 * p.x);
    let eps = 0.05;
    let est = run_edge(&c, &EdgeConfig::new(eps)).unwrap();
    assert_eq!(est.termination, Termination::ClosedLoop);
    let tol = domain.tolerance();
    let on_edge: Vec<Point2> = est
        .sets
        .walk_order()
        .filter(|&(p, label)| label && domain.on_perimeter(p, tol))
        .map(|(p, _)| p)
        .collect();
    assert!(on_edge.len() > 20);
    let half = domain.perimeter() / 2.0;
    let mut direction = 0.0f64;
    for pair in on_edge.windows(2) {
        if (distance(pair[0], pair[1]) - eps).abs() > 1e-9 {
            continue;
        }
        let mut ds = domain.arclength_of(pair[1]) - domain.arclength_of(pair[0]);
        if ds > half {
            ds -= 2.0 * half;
        } else if ds < -half {
            ds += 2.0 * half;
        }
        if direction == 0.0 {
            direction = ds.signum();
        }
        assert_eq!(ds.signum(), direction, "{} → {}", pair[0], pair[1]);
    }
    assert!(direction != 0.0);
}

#[test]
fn epsilon_guarantee_holds_for_every_test_function() {
    for f in TestFunction::ALL {
        let spec = LevelSetSpec::canonical(f);
        for eps in [0.1, 0.05] {
            let c = make_test_classifier(spec);
            let est = run_edge(&c, &EdgeConfig::new(eps)).unwrap();
            assert_eq!(est.termination, Termination::ClosedLoop, "{f} ε={eps}");
            let reference = region_reference_from_scalar(
                |x, y| f.eval(x, y),
                spec.threshold,
                &spec.domain,
                eps / 10.0,
            )
            .unwrap();
            let bound = eps + reference.slack;
            let violations: Vec<Point2> = est
                .inner()
                .iter()
                .chain(est.outer())
                .copied()
                .filter(|&p| reference.distance_to(p) > bound)
                .collect();
            assert!(violations.is_empty(), "{f} ε={eps}: {violations:?}");
        }
    }
}
