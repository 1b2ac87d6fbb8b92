use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use epsedge_core::dcopf::{load_network, make_dcopf_classifier, Network};
use epsedge_core::metrics::{reference_from_blackbox, reference_from_scalar};
use epsedge_core::{
    make_test_classifier, Classifier, EdgeConfig, LevelSetSpec, Point2, ReferenceBoundary,
    TestFunction,
};

use crate::CliError;

/// What to estimate: a thresholded test function or a DC-OPF network file.
#[derive(Debug, Clone, PartialEq)]
pub enum Target {
    Function(TestFunction),
    Dcopf(PathBuf),
}

impl FromStr for Target {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(path) = s.strip_prefix("dcopf:") {
            if path.is_empty() {
                return Err(CliError::Input("dcopf: needs a network file path".into()));
            }
            return Ok(Target::Dcopf(PathBuf::from(path)));
        }
        s.parse::<TestFunction>()
            .map(Target::Function)
            .map_err(|_| CliError::Input(format!("unknown classifier '{s}' (expected rosenbrock, goldstein-price, beale or dcopf:<file>)")))
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Function(func) => write!(f, "{func}"),
            Target::Dcopf(path) => write!(f, "dcopf:{}", path.display()),
        }
    }
}

/// A loaded target, able to hand out fresh classifiers so every run starts
/// from a zero query count.
pub enum Loaded {
    Function(LevelSetSpec),
    Dcopf(Network),
}

impl Loaded {
    pub fn load(target: &Target, threshold: Option<f64>) -> Result<Self, CliError> {
        match target {
            Target::Function(f) => {
                let mut spec = LevelSetSpec::canonical(*f);
                if let Some(t) = threshold {
                    if !t.is_finite() {
                        return Err(CliError::Input(format!(
                            "threshold must be finite (got {t})"
                        )));
                    }
                    spec.threshold = t;
                }
                Ok(Loaded::Function(spec))
            }
            Target::Dcopf(path) => {
                if threshold.is_some() {
                    return Err(CliError::Input(
                        "--threshold only applies to test functions".into(),
                    ));
                }
                Ok(Loaded::Dcopf(load_network(path)?))
            }
        }
    }

    pub fn classifier(&self) -> Result<Classifier, CliError> {
        match self {
            Loaded::Function(spec) => Ok(make_test_classifier(*spec)),
            Loaded::Dcopf(net) => make_dcopf_classifier(net.clone())
                .map_err(|e| CliError::Input(format!("network {}: {e}", net.name()))),
        }
    }

    /// Reference boundary for scoring runs at `epsilon`: the sampled
    /// contour for test functions, a fine EDGE run for black boxes.
    pub fn reference(
        &self,
        epsilon: f64,
        cell: f64,
        seeds: Option<(Point2, Point2)>,
    ) -> Result<ReferenceBoundary, CliError> {
        match self {
            Loaded::Function(spec) => {
                let function = spec.function;
                Ok(reference_from_scalar(
                    move |x, y| function.eval(x, y),
                    spec.threshold,
                    &spec.domain,
                    cell,
                )?)
            }
            Loaded::Dcopf(_) => {
                let mut config = EdgeConfig::new(cell);
                if let Some((a, b)) = seeds {
                    config = config.with_seeds(a, b);
                }
                Ok(reference_from_blackbox(
                    &self.classifier()?,
                    &config,
                    epsilon,
                )?)
            }
        }
    }
}
