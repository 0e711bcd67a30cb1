//! Stationarity notions as statistical test procedures: time shifts,
//! marginal and mollified-path law comparisons, piecewise embedding,
//! Kolmogorov-Smirnov machinery and Krylov-Bogoliubov time averages.

mod embed;
mod functional;
mod law;
mod mollify;
mod report;

pub use embed::{piecewise_embed, state_norm, PiecewiseEmbed};
pub use functional::Functional;
pub use law::{ks_critical_value, ks_distance, EmpiricalLaw};
pub use mollify::{mollified_evaluation, mollified_state, mollifier};
pub use report::{
    krylov_bogoliubov_average, marginal_law_samples, ramp_surrogate_ensemble, shift,
    stationarity_report, ReportRow, StationarityConfig, StationarityReport, Verdict, View,
};
