//! SI <-> natural-unit conversion for the collapse parameters.
//!
//! The numerics run in natural units with `hbar = 1`. A [`UnitScale`] fixes
//! how many meters one natural length is and how many seconds one natural
//! time is; rates and lengths then convert linearly. At any desk-scale
//! choice the physical collapse rate gives expected event counts far below
//! one per run, which is the point of the sparseness checks.

/// Accepted physical per-particle collapse rate, in 1/s. The standard value
/// is 1e-16 per second, i.e. one jump per ~1e16 s for a lone particle, so
/// only macroscopic aggregates (N ~ 1e23) collapse quickly.
pub const GRW_LAMBDA_SI: f64 = 1e-16;

/// Accepted physical localization width, in meters.
pub const GRW_SIGMA_SI: f64 = 1e-7;

/// Conversion factors: meters per natural length unit and seconds per
/// natural time unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitScale {
    meters_per_length: f64,
    seconds_per_time: f64,
}

impl UnitScale {
    pub fn new(meters_per_length: f64, seconds_per_time: f64) -> Self {
        assert!(meters_per_length > 0.0 && seconds_per_time > 0.0);
        UnitScale {
            meters_per_length,
            seconds_per_time,
        }
    }

    pub fn meters_per_length(&self) -> f64 {
        self.meters_per_length
    }

    pub fn seconds_per_time(&self) -> f64 {
        self.seconds_per_time
    }

    /// Rate in 1/s to rate in natural inverse time.
    pub fn rate_to_natural(&self, rate_si: f64) -> f64 {
        rate_si * self.seconds_per_time
    }

    pub fn rate_to_si(&self, rate_natural: f64) -> f64 {
        rate_natural / self.seconds_per_time
    }

    /// Length in meters to natural length.
    pub fn length_to_natural(&self, length_si: f64) -> f64 {
        length_si / self.meters_per_length
    }

    pub fn length_to_si(&self, length_natural: f64) -> f64 {
        length_natural * self.meters_per_length
    }

    /// Expected number of jumps for `n_particles` over a natural-time span,
    /// at the physical rate.
    pub fn expected_si_events(&self, n_particles: usize, t_natural: f64) -> f64 {
        n_particles as f64 * self.rate_to_natural(GRW_LAMBDA_SI) * t_natural
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions_round_trip() {
        let scale = UnitScale::new(1e-8, 2.5e-3);
        let lam = scale.rate_to_natural(GRW_LAMBDA_SI);
        assert!((scale.rate_to_si(lam) - GRW_LAMBDA_SI).abs() < 1e-30);
        let sig = scale.length_to_natural(GRW_SIGMA_SI);
        assert!((sig - 10.0).abs() < 1e-12);
        assert!((scale.length_to_si(sig) - GRW_SIGMA_SI).abs() < 1e-20);
    }

    #[test]
    fn physical_rate_is_silent_at_desk_scale() {
        // Fewer than 1e-10 expected events for N <= 2 over 1e4 natural time
        // units at any second-scale time unit.
        let scale = UnitScale::new(1e-7, 1.0);
        assert!(scale.expected_si_events(2, 1e4) < 1e-10);
    }
}
