//! Decision-boundary estimation for two-dimensional black-box classifiers.
//!
//! The crate localizes the boundary between the label-1 and label-0 regions
//! of a classifier to within a user-chosen distance ε, using bisection
//! followed by an ε-stepping walk along the boundary ([`edge`]). A naïve
//! ε-grid sampler ([`grid`]) serves as the baseline, [`metrics`] scores both
//! with the average symmetric surface distance, and [`dcopf`] provides a
//! DC optimal power flow feasibility classifier as a realistic black box.

pub mod classifier;
pub mod dcopf;
pub mod edge;
pub mod geometry;
pub mod grid;
pub mod metrics;

pub use classifier::{
    make_test_classifier, Classifier, InteriorSense, Label, LevelSetSpec, TestFunction,
};
pub use edge::{run_edge, BoundaryEstimate, EdgeConfig, EdgeError, Termination};
pub use geometry::{distance, Domain, Point2};
pub use grid::{grid_sample, GridResult};
pub use metrics::{asd_one_sided, asd_two_sided, ReferenceBoundary};
