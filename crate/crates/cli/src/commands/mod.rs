pub mod diagnose;
pub mod simulate;
pub mod stationarity;
pub mod sweep;
