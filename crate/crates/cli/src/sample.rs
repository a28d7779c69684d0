use djet_core::PhasePoint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{CliError, SampleConfig};

/// Draws `config.count` admissible points: momenta log-uniform, `t` and `x`
/// uniform. Fails once more than 90% of the draws have been rejected.
pub fn sample_points(config: &SampleConfig, admissible: impl Fn(&PhasePoint) -> bool) -> Result<Vec<PhasePoint>, CliError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let uniform = |rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)| if lo == hi { lo } else { rng.gen_range(lo..hi) };
    let log_p = (config.p_range.0.ln(), config.p_range.1.ln());
    let max_draws = 10 * config.count.max(1);
    let mut points = Vec::with_capacity(config.count);
    let mut drawn = 0;
    while points.len() < config.count {
        if drawn == max_draws {
            return Err(CliError::SamplingExhausted { drawn, rejected: drawn - points.len() });
        }
        drawn += 1;
        let t = uniform(&mut rng, config.t_range);
        let x = std::array::from_fn(|_| uniform(&mut rng, config.x_range));
        let p = std::array::from_fn(|_| uniform(&mut rng, log_p).exp());
        let pt = PhasePoint::new(t, x, p)?;
        if admissible(&pt) {
            points.push(pt);
        } else {
            log::debug!("rejected {pt}");
        }
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn respects_ranges_and_seed() {
        let config = SampleConfig::new(3, 200);
        let a = sample_points(&config, |_| true).unwrap();
        assert_eq!(a, sample_points(&config, |_| true).unwrap());
        for pt in &a {
            assert!(pt.p().iter().all(|&p| (0.1..=10.0).contains(&p)));
            assert!(pt.x().iter().all(|&x| (-1.0..=1.0).contains(&x)));
            assert!((-1.0..=1.0).contains(&pt.t()));
        }
        assert_ne!(a, sample_points(&SampleConfig::new(4, 200), |_| true).unwrap());
    }

    #[test]
    fn exhaustion_is_an_error() {
        let config = SampleConfig::new(1, 20);
        let err = sample_points(&config, |pt| pt.t() > 0.95).unwrap_err();
        assert!(matches!(err, CliError::SamplingExhausted { drawn: 200, .. }));
        assert!(sample_points(&SampleConfig::new(1, 0), |_| false).unwrap().is_empty());
    }
}
