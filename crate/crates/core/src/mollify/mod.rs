//! Mollification machinery: the smooth bump kernel, convolution smoothing,
//! the dyadic mollification ladder that converts mean-value-deviation bounds
//! into C^{1,α} regularity, Schauder interior-estimate checks, and the
//! shrink-and-mollify smoothing of Dirichlet data.

mod convolve;
mod kernel;
mod ladder;
mod schauder;
mod smoothing;

pub use convolve::{convolve, convolve_eval, convolve_grad_eval, convolve_lap_eval};
pub use kernel::MollifierKernel;
pub use ladder::{
    dyadic_regularity, mean_value_deviation, DyadicLadder, DyadicReport, LevelStats,
    MeanValueDeviation,
};
pub use schauder::{schauder_check, SchauderReport, SchauderRow};
pub use smoothing::smooth_dirichlet_data;
