//! Histograms and goodness-of-fit tests.

use serde::Serialize;

use super::special::{chi_square_cdf, chi_square_sf, kolmogorov_sf, normal_two_sided_p};
use super::StatsError;

/// Outcome of a goodness-of-fit test. For the chi-square test `bin_layout`
/// records the start index of each pooled bin; for the others it is empty.
#[derive(Debug, Clone, Serialize)]
pub struct GofReport {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub bin_layout: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub below: u64,
    pub above: u64,
}

impl Histogram {
    pub fn total_in_range(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Bin `samples` into half-open bins `[edges[i], edges[i+1])`. Samples below
/// the first edge or at/above the last are counted separately.
pub fn histogram(samples: &[f64], edges: &[f64]) -> Result<Histogram, StatsError> {
    if edges.len() < 2 || edges.windows(2).any(|w| w[0] >= w[1]) {
        return Err(StatsError::BadEdges);
    }
    let mut counts = vec![0u64; edges.len() - 1];
    let mut below = 0u64;
    let mut above = 0u64;
    for &x in samples {
        // partition_point returns the number of edges <= x, so bin = idx - 1
        // gives lower-inclusive assignment.
        let idx = edges.partition_point(|&e| e <= x);
        if idx == 0 {
            below += 1;
        } else if idx == edges.len() {
            above += 1;
        } else {
            counts[idx - 1] += 1;
        }
    }
    Ok(Histogram {
        edges: edges.to_vec(),
        counts,
        below,
        above,
    })
}

/// Convenience: `bins` equal-width bins over `[lo, hi)`.
pub fn equal_bin_edges(lo: f64, hi: f64, bins: usize) -> Vec<f64> {
    assert!(bins >= 1 && hi > lo);
    (0..=bins)
        .map(|i| lo + (hi - lo) * i as f64 / bins as f64)
        .collect()
}

/// Pearson chi-square test of observed counts against expected probabilities.
///
/// Adjacent bins are pooled left to right until every pooled bin has an
/// expected count of at least 5 (the usual validity rule); the test then has
/// `pools - 1` degrees of freedom. Fails with `InsufficientExpected` when
/// pooling cannot produce two valid bins.
pub fn chi_square_gof(counts: &[u64], expected_probs: &[f64]) -> Result<GofReport, StatsError> {
    if counts.len() != expected_probs.len() {
        return Err(StatsError::LengthMismatch {
            counts: counts.len(),
            probs: expected_probs.len(),
        });
    }
    let psum: f64 = expected_probs.iter().sum();
    if expected_probs.iter().any(|&p| p < 0.0) || (psum - 1.0).abs() > 1e-9 {
        return Err(StatsError::BadProbs(psum));
    }
    let n: u64 = counts.iter().sum();
    let nf = n as f64;

    // Pool adjacent bins until expected >= 5.
    let mut pooled: Vec<(f64, f64, usize)> = Vec::new(); // (observed, expected, start index)
    let mut acc_obs = 0.0;
    let mut acc_exp = 0.0;
    let mut start = 0usize;
    let mut open = false;
    for (i, (&c, &p)) in counts.iter().zip(expected_probs).enumerate() {
        if !open {
            start = i;
            open = true;
        }
        acc_obs += c as f64;
        acc_exp += nf * p;
        if acc_exp >= 5.0 {
            pooled.push((acc_obs, acc_exp, start));
            acc_obs = 0.0;
            acc_exp = 0.0;
            open = false;
        }
    }
    if open {
        // Fold the undersized remainder into the last complete pool.
        match pooled.last_mut() {
            Some(last) => {
                last.0 += acc_obs;
                last.1 += acc_exp;
            }
            None => return Err(StatsError::InsufficientExpected(acc_exp)),
        }
    }
    if pooled.len() < 2 {
        return Err(StatsError::InsufficientExpected(nf));
    }

    let statistic: f64 = pooled.iter().map(|&(o, e, _)| (o - e) * (o - e) / e).sum();
    let dof = pooled.len() - 1;
    Ok(GofReport {
        statistic,
        dof,
        p_value: chi_square_sf(statistic, dof),
        bin_layout: pooled.iter().map(|&(_, _, s)| s).collect(),
    })
}

/// Test per-run event counts against a Poisson(mu) law.
///
/// Combines a z-test of the sample mean with a two-sided dispersion test
/// (the index-of-dispersion statistic is chi-square with n-1 dof under the
/// null) via Fisher's method. Requires at least 30 runs. `mu = 0` with
/// all-zero counts passes with p = 1 by convention.
pub fn poisson_count_test(counts_per_run: &[u64], mu: f64) -> GofReport {
    let n = counts_per_run.len();
    assert!(
        n >= 30,
        "poisson_count_test requires at least 30 runs, got {n}"
    );
    assert!(mu >= 0.0);
    let nf = n as f64;
    let mean = counts_per_run.iter().sum::<u64>() as f64 / nf;

    if mu == 0.0 {
        let p = if mean == 0.0 { 1.0 } else { 0.0 };
        return GofReport {
            statistic: if mean == 0.0 { 0.0 } else { f64::INFINITY },
            dof: 2,
            p_value: p,
            bin_layout: vec![],
        };
    }

    let z = (mean - mu) / (mu / nf).sqrt();
    let p_mean = normal_two_sided_p(z);

    // Index of dispersion, conditioned on the observed mean.
    let p_var = if mean == 0.0 {
        1.0
    } else {
        let disp: f64 = counts_per_run
            .iter()
            .map(|&c| {
                let d = c as f64 - mean;
                d * d
            })
            .sum::<f64>()
            / mean;
        let lower = chi_square_cdf(disp, n - 1);
        let upper = chi_square_sf(disp, n - 1);
        (2.0 * lower.min(upper)).min(1.0)
    };

    let fisher = -2.0 * (p_mean.max(1e-300).ln() + p_var.max(1e-300).ln());
    GofReport {
        statistic: fisher,
        dof: 4,
        p_value: chi_square_sf(fisher, 4),
        bin_layout: vec![],
    }
}

/// One-sided sign test: probability of seeing at least `positives` successes
/// in `trials` fair coin flips. Small p supports a positive drift.
pub fn sign_test_positive(positives: usize, trials: usize) -> f64 {
    assert!(positives <= trials && trials >= 1);
    let n = trials as f64;
    let ln2 = std::f64::consts::LN_2;
    let mut p = 0.0;
    for j in positives..=trials {
        let ln_choose = crate::stats::special::ln_gamma(n + 1.0)
            - crate::stats::special::ln_gamma(j as f64 + 1.0)
            - crate::stats::special::ln_gamma((trials - j) as f64 + 1.0);
        p += (ln_choose - n * ln2).exp();
    }
    p.min(1.0)
}

/// One-sample Kolmogorov-Smirnov test against a callable CDF, with the
/// Stephens small-sample correction for the asymptotic tail. Accurate to
/// about 1e-3 for n >= 35. `dof` in the report holds the sample count.
pub fn ks_test(samples: &[f64], cdf: impl Fn(f64) -> f64) -> GofReport {
    let n = samples.len();
    assert!(n >= 10, "ks_test requires at least 10 samples, got {n}");
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("ks_test: non-finite sample"));
    let nf = n as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        let d_plus = (i + 1) as f64 / nf - f;
        let d_minus = f - i as f64 / nf;
        d = d.max(d_plus).max(d_minus);
    }
    let lambda = (nf.sqrt() + 0.12 + 0.11 / nf.sqrt()) * d;
    GofReport {
        statistic: d,
        dof: n,
        p_value: kolmogorov_sf(lambda),
        bin_layout: vec![],
    }
}

#[cfg(test)]
mod tests {
    use super::super::RngStream;
    use super::*;

    #[test]
    fn histogram_edge_conventions() {
        // Samples exactly at edges land in the lower-inclusive bin.
        let h = histogram(&[0.0, 0.5, 1.0, 1.5, 2.0, -0.1], &[0.0, 1.0, 2.0]).unwrap();
        assert_eq!(h.counts, vec![2, 2]);
        assert_eq!(h.below, 1);
        assert_eq!(h.above, 1);
    }

    #[test]
    fn histogram_rejects_bad_edges() {
        assert!(histogram(&[1.0], &[0.0, 0.0, 1.0]).is_err());
        assert!(histogram(&[1.0], &[0.0]).is_err());
    }

    #[test]
    fn histogram_empty_samples() {
        let h = histogram(&[], &equal_bin_edges(0.0, 1.0, 4)).unwrap();
        assert_eq!(h.counts, vec![0; 4]);
    }

    #[test]
    fn histogram_uniform_counts_within_binomial_bound() {
        let mut rng = RngStream::new(21, 0);
        let samples: Vec<f64> = (0..10_000).map(|_| rng.uniform()).collect();
        let h = histogram(&samples, &equal_bin_edges(0.0, 1.0, 10)).unwrap();
        let sigma = (10_000.0f64 * 0.1 * 0.9).sqrt();
        for &c in &h.counts {
            assert!((c as f64 - 1000.0).abs() < 3.0 * sigma, "count {c}");
        }
        assert_eq!(h.total_in_range(), 10_000);
    }

    #[test]
    fn chi_square_exact_match_gives_p_one() {
        let counts = vec![25u64, 25, 25, 25];
        let probs = vec![0.25; 4];
        let r = chi_square_gof(&counts, &probs).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!((r.p_value - 1.0).abs() < 1e-12);
        assert_eq!(r.dof, 3);
    }

    #[test]
    fn chi_square_reference_case() {
        // Four observed frequencies against uniform expectation; statistic
        // and p frozen from an independent implementation of the Pearson
        // formula and the regularized gamma tail.
        let counts = vec![28u64, 31, 40, 35];
        let probs = vec![0.25; 4];
        let r = chi_square_gof(&counts, &probs).unwrap();
        assert!((r.statistic - 2.417910447761194).abs() < 1e-12);
        assert!((r.p_value - 0.4903093069653883).abs() < 1e-10);
    }

    #[test]
    fn chi_square_gross_mismatch_has_tiny_p() {
        let counts = vec![1000u64, 0, 0, 0];
        let probs = vec![0.25; 4];
        let r = chi_square_gof(&counts, &probs).unwrap();
        assert!(r.p_value < 1e-10);
    }

    #[test]
    fn chi_square_pools_small_bins() {
        // 10 bins with tiny tails: pooling must keep expected >= 5 per pool.
        let probs = vec![
            0.001, 0.004, 0.1, 0.395, 0.395, 0.1, 0.004, 0.0005, 0.0004, 0.0001,
        ];
        let counts = vec![0u64, 1, 10, 39, 40, 9, 1, 0, 0, 0];
        let r = chi_square_gof(&counts, &probs).unwrap();
        assert!(r.dof >= 1 && r.dof < 9);
        assert!(r.p_value > 0.01);
    }

    #[test]
    fn chi_square_insufficient_expected() {
        let counts = vec![1u64, 0, 1];
        let probs = vec![0.3, 0.4, 0.3];
        assert!(matches!(
            chi_square_gof(&counts, &probs),
            Err(StatsError::InsufficientExpected(_))
        ));
    }

    #[test]
    fn chi_square_null_calibration_p_values_are_uniform() {
        // Draw multinomial samples from the expected law and check the
        // resulting p-values look U(0,1): the KS p must clear 0.01.
        let probs = [0.1, 0.2, 0.3, 0.15, 0.15, 0.1];
        let mut rng = RngStream::new(1234, 0);
        let mut cdf = vec![0.0];
        for &p in &probs {
            cdf.push(cdf.last().unwrap() + p);
        }
        let mut p_values = Vec::with_capacity(1000);
        for _ in 0..1000 {
            let mut counts = vec![0u64; probs.len()];
            for _ in 0..2000 {
                let u = rng.uniform();
                let k = cdf.partition_point(|&c| c <= u) - 1;
                counts[k.min(probs.len() - 1)] += 1;
            }
            p_values.push(chi_square_gof(&counts, &probs).unwrap().p_value);
        }
        let r = ks_test(&p_values, |x| x.clamp(0.0, 1.0));
        assert!(r.p_value > 0.01, "KS p = {}", r.p_value);
    }

    #[test]
    fn poisson_test_accepts_synthetic_poisson() {
        // Poisson(5) by thinning an exponential clock.
        let mut rng = RngStream::new(77, 0);
        let counts: Vec<u64> = (0..1000)
            .map(|_| {
                let mut t = 0.0;
                let mut c = 0;
                loop {
                    t += rng.exponential(5.0);
                    if t > 1.0 {
                        break;
                    }
                    c += 1;
                }
                c
            })
            .collect();
        let r = poisson_count_test(&counts, 5.0);
        assert!(r.p_value > 0.01, "p = {}", r.p_value);
    }

    #[test]
    fn poisson_test_rejects_degenerate_variance() {
        let counts = vec![5u64; 100];
        let r = poisson_count_test(&counts, 5.0);
        assert!(r.p_value < 1e-6, "p = {}", r.p_value);
    }

    #[test]
    fn poisson_test_zero_rate_convention() {
        let counts = vec![0u64; 50];
        assert_eq!(poisson_count_test(&counts, 0.0).p_value, 1.0);
        let mut bad = counts.clone();
        bad[3] = 1;
        assert_eq!(poisson_count_test(&bad, 0.0).p_value, 0.0);
    }

    #[test]
    fn sign_test_tails() {
        // 10 of 10 increases: p = 2^-10.
        assert!((sign_test_positive(10, 10) - 2f64.powi(-10)).abs() < 1e-12);
        // Balanced outcome carries no evidence.
        assert!(sign_test_positive(5, 10) > 0.5);
        assert_eq!(sign_test_positive(0, 10), 1.0);
    }

    #[test]
    fn ks_accepts_samples_from_the_null() {
        let mut rng = RngStream::new(31, 0);
        let samples: Vec<f64> = (0..1000).map(|_| rng.exponential(2.0)).collect();
        let r = ks_test(&samples, |x| 1.0 - (-2.0 * x).exp());
        assert!(r.p_value > 0.01, "p = {}", r.p_value);
    }

    #[test]
    fn ks_rejects_shifted_distribution() {
        // U(0,1) samples against a U(0.5, 1.5) CDF: shift of one IQR.
        let mut rng = RngStream::new(32, 0);
        let samples: Vec<f64> = (0..1000).map(|_| rng.uniform()).collect();
        let r = ks_test(&samples, |x| (x - 0.5).clamp(0.0, 1.0));
        assert!(r.p_value < 1e-3, "p = {}", r.p_value);
    }

    #[test]
    fn ks_degenerate_identical_samples() {
        let samples = vec![0.5; 10];
        let r = ks_test(&samples, |x| x.clamp(0.0, 1.0));
        assert!(
            r.statistic >= 0.5 && r.p_value < 0.02,
            "D={} p={}",
            r.statistic,
            r.p_value
        );
    }
}
