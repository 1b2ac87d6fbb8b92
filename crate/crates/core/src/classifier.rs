//! Query-counted black-box classifiers and the binarized test functions.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Domain, Point2};

/// Binary label returned by a classifier: `true` is interior (f = 1).
pub type Label = bool;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifierError {
    #[error("unknown test function `{0}` (expected rosenbrock, goldstein-price or beale)")]
    UnknownFunction(String),
}

type LabelFn = dyn Fn(Point2) -> Label + Send + Sync;

/// A deterministic boolean oracle over the plane with an atomic query counter.
///
/// Every call to [`Classifier::query`] evaluates the label function exactly
/// once; nothing is cached.
pub struct Classifier {
    name: String,
    domain: Domain,
    label: Box<LabelFn>,
    queries: AtomicU64,
    log: Option<Mutex<Vec<(Point2, Label)>>>,
}

impl Classifier {
    pub fn new<F>(name: impl Into<String>, domain: Domain, label: F) -> Self
    where
        F: Fn(Point2) -> Label + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            domain,
            label: Box::new(label),
            queries: AtomicU64::new(0),
            log: None,
        }
    }

    /// Records every query and its label, in call order.
    pub fn with_query_log(mut self) -> Self {
        self.log = Some(Mutex::new(Vec::new()));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn query(&self, p: Point2) -> Label {
        let label = (self.label)(p);
        self.queries.fetch_add(1, Ordering::Relaxed);
        if let Some(log) = &self.log {
            log.lock().expect("query log poisoned").push((p, label));
        }
        label
    }

    /// Label without touching the counter or the log. Used for audits that
    /// must not distort the sample count.
    pub fn peek(&self, p: Point2) -> Label {
        (self.label)(p)
    }

    pub fn query_count(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    /// Snapshot of the query log; empty when logging is disabled.
    pub fn query_log(&self) -> Vec<(Point2, Label)> {
        self.log
            .as_ref()
            .map(|log| log.lock().expect("query log poisoned").clone())
            .unwrap_or_default()
    }
}

impl fmt::Debug for Classifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Classifier")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("queries", &self.query_count())
            .finish_non_exhaustive()
    }
}

pub fn rosenbrock(x: f64, y: f64) -> f64 {
    (1.0 - x).powi(2) + 100.0 * (y - x * x).powi(2)
}

pub fn goldstein_price(x: f64, y: f64) -> f64 {
    let a = 1.0
        + (x + y + 1.0).powi(2)
            * (19.0 - 14.0 * x + 3.0 * x * x - 14.0 * y + 6.0 * x * y + 3.0 * y * y);
    let b = 30.0
        + (2.0 * x - 3.0 * y).powi(2)
            * (18.0 - 32.0 * x + 12.0 * x * x + 48.0 * y - 36.0 * x * y + 27.0 * y * y);
    a * b
}

pub fn beale(x: f64, y: f64) -> f64 {
    (1.5 - x + x * y).powi(2) + (2.25 - x + x * y * y).powi(2) + (2.625 - x + x * y.powi(3)).powi(2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestFunction {
    Rosenbrock,
    GoldsteinPrice,
    Beale,
}

impl TestFunction {
    pub const ALL: [TestFunction; 3] = [
        TestFunction::Rosenbrock,
        TestFunction::GoldsteinPrice,
        TestFunction::Beale,
    ];

    pub fn eval(self, x: f64, y: f64) -> f64 {
        match self {
            TestFunction::Rosenbrock => rosenbrock(x, y),
            TestFunction::GoldsteinPrice => goldstein_price(x, y),
            TestFunction::Beale => beale(x, y),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TestFunction::Rosenbrock => "rosenbrock",
            TestFunction::GoldsteinPrice => "goldstein-price",
            TestFunction::Beale => "beale",
        }
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TestFunction {
    type Err = ClassifierError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "rosenbrock" => Ok(TestFunction::Rosenbrock),
            "goldstein-price" | "goldsteinprice" => Ok(TestFunction::GoldsteinPrice),
            "beale" => Ok(TestFunction::Beale),
            _ => Err(ClassifierError::UnknownFunction(s.to_owned())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InteriorSense {
    Below,
    Above,
}

/// A scalar test function binarized at a threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelSetSpec {
    pub function: TestFunction,
    pub threshold: f64,
    pub domain: Domain,
    pub interior: InteriorSense,
}

impl LevelSetSpec {
    /// The benchmark configuration for each test function.
    pub fn canonical(function: TestFunction) -> Self {
        let (threshold, domain) = match function {
            TestFunction::Rosenbrock => (100.0, Domain::new(-6.0, 6.0, -2.0, 10.0)),
            TestFunction::GoldsteinPrice => (3e5, Domain::new(-8.0, 10.0, -7.0, 6.0)),
            TestFunction::Beale => (100.0, Domain::new(-6.0, 6.0, -7.0, 7.0)),
        };
        Self {
            function,
            threshold,
            domain: domain.expect("canonical domains are valid"),
            interior: InteriorSense::Below,
        }
    }

    /// Strict interior test; a value exactly at the threshold is exterior.
    pub fn label(&self, x: f64, y: f64) -> Label {
        let v = self.function.eval(x, y);
        match self.interior {
            InteriorSense::Below => v < self.threshold,
            InteriorSense::Above => v > self.threshold,
        }
    }
}

pub fn make_test_classifier(spec: LevelSetSpec) -> Classifier {
    Classifier::new(spec.function.as_str(), spec.domain, move |p| {
        spec.label(p.x, p.y)
    })
}
