use serde::Serialize;
use thiserror::Error;

/// Smallest admissible lower bound for sampled momenta. Finite-difference
/// stencils need room on the positive side of zero.
pub const MIN_P: f64 = 0.05;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("{name} range [{lo}, {hi}] is empty or not finite")]
    Range { name: &'static str, lo: f64, hi: f64 },
    #[error("p range lower bound {0} must exceed {MIN_P}")]
    MomentumBound(f64),
    #[error("tolerance {name} = {value} must be finite and non-negative")]
    Tolerance { name: &'static str, value: f64 },
}

/// Tolerances of the comparison and of every identity suite.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    /// Generic against closed form: `|Δ| ≤ max(abs, rel·max(|a|, |b|))`.
    pub rel: f64,
    pub abs: f64,
    pub metric_inverse: f64,
    pub cartan_identities: f64,
    pub covariant_trace: f64,
    pub vanishing: f64,
    pub conservation: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rel: 1e-6,
            abs: 1e-8,
            metric_inverse: 1e-9,
            cartan_identities: 1e-10,
            covariant_trace: 1e-8,
            vanishing: 1e-9,
            conservation: 1e-6,
        }
    }
}

impl Tolerances {
    fn validate(&self) -> Result<(), ConfigError> {
        let all = [
            ("rel", self.rel),
            ("abs", self.abs),
            ("metric_inverse", self.metric_inverse),
            ("cartan_identities", self.cartan_identities),
            ("covariant_trace", self.covariant_trace),
            ("vanishing", self.vanishing),
            ("conservation", self.conservation),
        ];
        match all.into_iter().find(|(_, v)| !v.is_finite() || *v < 0.0) {
            Some((name, value)) => Err(ConfigError::Tolerance { name, value }),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleConfig {
    pub seed: u64,
    pub count: usize,
    /// Log-uniform bounds for every momentum.
    pub p_range: (f64, f64),
    pub x_range: (f64, f64),
    pub t_range: (f64, f64),
    pub tolerances: Tolerances,
}

impl SampleConfig {
    pub fn new(seed: u64, count: usize) -> Self {
        SampleConfig {
            seed,
            count,
            p_range: (0.1, 10.0),
            x_range: (-1.0, 1.0),
            t_range: (-1.0, 1.0),
            tolerances: Tolerances::default(),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for (name, (lo, hi)) in [("p", self.p_range), ("x", self.x_range), ("t", self.t_range)] {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(ConfigError::Range { name, lo, hi });
            }
        }
        if self.p_range.0 <= MIN_P {
            return Err(ConfigError::MomentumBound(self.p_range.0));
        }
        self.tolerances.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        assert_eq!(SampleConfig::new(1, 10).validate(), Ok(()));
    }

    #[test]
    fn rejects_bad_ranges() {
        let mut c = SampleConfig::new(1, 10);
        c.p_range = (0.01, 10.0);
        assert_eq!(c.validate(), Err(ConfigError::MomentumBound(0.01)));
        c.p_range = (0.1, 10.0);
        c.t_range = (1.0, -1.0);
        assert!(matches!(c.validate(), Err(ConfigError::Range { name: "t", .. })));
        c.t_range = (-1.0, 1.0);
        c.tolerances.rel = f64::NAN;
        assert!(matches!(c.validate(), Err(ConfigError::Tolerance { name: "rel", .. })));
    }
}
