//! Experiment drivers: the second-order difference inequality, the interior
//! C^{1,α} and C^{0,α} estimate ratios, the r-scaling law, and uniform
//! convergence of solutions under data smoothing. Each driver returns a
//! structured report with a CSV rendering and a one-line verdict; measured
//! constants are outputs to be checked for boundedness and refinement
//! stability, never inputs.

mod estimate;
mod family;
mod fit;
mod scaling;
mod scan;
mod smoothing;

pub use estimate::{interior_c0alpha_experiment, interior_c1alpha_experiment, EstimateRatio};
pub use family::{builtin_family, certify_basic, solve_instance, BasicCertificate, Instance};
pub use fit::{exponent_fit, ExponentFit};
pub use scaling::{scaling_check, ScalingReport};
pub use scan::{second_difference_scan, ScanBudget, SecondDifferenceScan};
pub use smoothing::{smoothing_convergence_check, SmoothingReport};

/// Outcome of an experiment, mapped by the CLI onto exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Preconditions could not be established; the result means nothing.
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}
