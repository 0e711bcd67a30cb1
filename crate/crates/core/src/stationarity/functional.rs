use crate::diagnostics::energy;
use crate::dynamics::State;
use crate::model::ModelParams;
use crate::spectral::sobolev12_norm_sq;
use crate::{Error, Result};

/// Scalar observables whose laws the stationarity machinery compares.
#[derive(Debug, Clone, PartialEq)]
pub enum Functional {
    /// Total mass `int rho`.
    Mass,
    /// Total energy.
    TotalEnergy,
    /// `|u|_{W^{1,2}}^2`.
    SobolevSq,
    /// Smallest collocation density.
    MinDensity,
    /// Magnitude of one velocity mode coefficient.
    ModeAmplitude { component: usize, mode: [i64; 3] },
}

impl Functional {
    pub fn name(&self) -> String {
        match self {
            Functional::Mass => "mass".into(),
            Functional::TotalEnergy => "energy".into(),
            Functional::SobolevSq => "sobolev_sq".into(),
            Functional::MinDensity => "min_rho".into(),
            Functional::ModeAmplitude { component, mode } => {
                format!("mode_{}_{},{},{}", component, mode[0], mode[1], mode[2])
            }
        }
    }

    pub fn eval(&self, state: &State, params: &ModelParams) -> f64 {
        match self {
            Functional::Mass => state.total_mass(),
            Functional::TotalEnergy => energy(state, params).map(|e| e.total).unwrap_or(f64::NAN),
            Functional::SobolevSq => sobolev12_norm_sq(&state.u),
            Functional::MinDensity => state.min_density(),
            Functional::ModeAmplitude { component, mode } => {
                let grid = state.grid();
                let c = state.u.component(*component).to_modes();
                for flat in 0..grid.size() {
                    if grid.freqs(flat) == *mode {
                        return c.modes()[flat].norm();
                    }
                }
                f64::NAN
            }
        }
    }

    /// Parses `mass | energy | sobolev_sq | min_rho | mode:<comp>:<m1,m2,m3>`.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "mass" => Ok(Functional::Mass),
            "energy" => Ok(Functional::TotalEnergy),
            "sobolev_sq" => Ok(Functional::SobolevSq),
            "min_rho" => Ok(Functional::MinDensity),
            other => {
                if let Some(rest) = other.strip_prefix("mode:") {
                    let mut parts = rest.splitn(2, ':');
                    let comp = parts
                        .next()
                        .and_then(|c| c.parse::<usize>().ok())
                        .ok_or_else(|| Error::invalid("functional", "mode:<comp>:<m1,m2,m3>"))?;
                    let mode_str = parts
                        .next()
                        .ok_or_else(|| Error::invalid("functional", "mode:<comp>:<m1,m2,m3>"))?;
                    let mut mode = [0i64; 3];
                    for (i, v) in mode_str.split(',').enumerate() {
                        if i >= 3 {
                            return Err(Error::invalid("functional", "at most 3 mode components"));
                        }
                        mode[i] = v
                            .trim()
                            .parse::<i64>()
                            .map_err(|_| Error::invalid("functional", "integer mode components"))?;
                    }
                    Ok(Functional::ModeAmplitude {
                        component: comp,
                        mode,
                    })
                } else {
                    Err(Error::invalid(
                        "functional",
                        format!("unknown functional `{other}`"),
                    ))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{SpectralField, SpectralVectorField, TorusGrid};

    #[test]
    fn parses_names_and_mode_selectors() {
        assert_eq!(Functional::parse("mass").unwrap(), Functional::Mass);
        assert_eq!(
            Functional::parse("sobolev_sq").unwrap(),
            Functional::SobolevSq
        );
        assert_eq!(
            Functional::parse("mode:1:0,2,0").unwrap(),
            Functional::ModeAmplitude {
                component: 1,
                mode: [0, 2, 0]
            }
        );
        assert!(Functional::parse("entropy").is_err());
        assert!(Functional::parse("mode:x:1").is_err());
    }

    #[test]
    fn mode_amplitude_reads_the_selected_coefficient() {
        let grid = TorusGrid::new(2, 16, 3, 2.0).unwrap();
        let l = grid.length();
        let pi = std::f64::consts::PI;
        let u = SpectralVectorField::from_fn(grid, |i, x| {
            if i == 0 {
                0.6 * (2.0 * pi * x[1] / l).sin()
            } else {
                0.0
            }
        });
        let state = State::new(0.0, SpectralField::constant(grid, 1.0), u).unwrap();
        let f = Functional::ModeAmplitude {
            component: 0,
            mode: [0, 1, 0],
        };
        // sin splits into two modes of amplitude 0.3 each
        let got = f.eval(&state, &ModelParams::default());
        assert!((got - 0.3).abs() < 1e-13, "amplitude {got}");
    }
}
