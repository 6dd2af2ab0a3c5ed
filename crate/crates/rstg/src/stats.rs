//! Sample statistics: summaries, empirical CDFs and the banded dominance
//! comparison.

use serde::Serialize;

use crate::{Error, Result};

/// Location and spread of one measured quantity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryStats {
    pub count: usize,
    pub mean: f64,
    /// Standard error of the mean (zero for a single value).
    pub se: f64,
    pub min: f64,
    pub max: f64,
    /// `(level, value)` pairs at levels 0.05, 0.25, 0.5, 0.75, 0.95.
    pub quantiles: Vec<(f64, f64)>,
    /// Empirical CDF as `(support point, F(point))`.
    pub ecdf: Vec<(f64, f64)>,
}

impl SummaryStats {
    pub fn median(&self) -> f64 {
        self.quantile(0.5)
    }

    /// One of the stored quantile levels.
    pub fn quantile(&self, level: f64) -> f64 {
        self.quantiles
            .iter()
            .find(|(l, _)| (*l - level).abs() < 1e-12)
            .map(|&(_, v)| v)
            .unwrap_or(f64::NAN)
    }
}

const LEVELS: [f64; 5] = [0.05, 0.25, 0.5, 0.75, 0.95];

/// Linear-interpolation quantile of sorted data.
pub fn quantile_sorted(sorted: &[f64], level: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * level;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Summary of a non-empty sample.
pub fn summarize(values: &[f64]) -> Result<SummaryStats> {
    if values.is_empty() {
        return Err(Error::Config("cannot summarize an empty sample".into()));
    }
    let count = values.len();
    let mean = values.iter().sum::<f64>() / count as f64;
    let se = if count > 1 {
        let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (count - 1) as f64;
        (var / count as f64).sqrt()
    } else {
        0.0
    };
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let quantiles = LEVELS.iter().map(|&l| (l, quantile_sorted(&sorted, l))).collect();
    Ok(SummaryStats {
        count,
        // rounding can push the mean of identical values a hair outside them
        mean: mean.clamp(sorted[0], sorted[count - 1]),
        se,
        min: sorted[0],
        max: sorted[count - 1],
        quantiles,
        ecdf: Ecdf::new(values)?.points(),
    })
}

/// Empirical distribution function.
#[derive(Debug, Clone)]
pub struct Ecdf {
    sorted: Vec<f64>,
}

impl Ecdf {
    pub fn new(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Config("empirical CDF of an empty sample".into()));
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(Ecdf { sorted })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// `F(x) = #{v <= x} / len`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= x) as f64 / self.sorted.len() as f64
    }

    /// Distinct values with their CDF values.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = Vec::new();
        let n = self.sorted.len() as f64;
        for (i, &v) in self.sorted.iter().enumerate() {
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 = (i + 1) as f64 / n,
                _ => out.push((v, (i + 1) as f64 / n)),
            }
        }
        out
    }

    fn support(&self) -> impl Iterator<Item = f64> + '_ {
        self.points().into_iter().map(|(v, _)| v)
    }
}

/// Dvoretzky–Kiefer–Wolfowitz half-width `sqrt(ln(2/α) / (2·size))`.
pub fn dkw_epsilon(size: usize, alpha: f64) -> f64 {
    ((2.0 / alpha).ln() / (2.0 * size as f64)).sqrt()
}

/// Outcome of testing "`a` is stochastically dominated by `b`", i.e.
/// `F_a(k) >= F_b(k)` everywhere, up to the sum of both DKW half-widths.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EcdfComparison {
    /// `max_k (F_b(k) − F_a(k))`, clamped at zero.
    pub max_violation: f64,
    /// Support point where the violation is largest.
    pub worst_point: Option<f64>,
    /// Allowed slack `ε_a + ε_b`.
    pub band: f64,
    pub pass: bool,
    /// `max_k (F_a(k) − F_b(k))`: how far `a` sits below `b`.
    pub max_margin: f64,
}

/// Banded one-sided comparison of two samples at every support point of
/// either sample.
pub fn ecdf_compare(a: &[f64], b: &[f64], alpha: f64) -> Result<EcdfComparison> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Config("alpha must lie in (0, 1)".into()));
    }
    let (fa, fb) = (Ecdf::new(a)?, Ecdf::new(b)?);
    let band = dkw_epsilon(fa.len(), alpha) + dkw_epsilon(fb.len(), alpha);
    let mut max_violation = 0.0f64;
    let mut worst_point = None;
    let mut max_margin = 0.0f64;
    for x in fa.support().chain(fb.support()) {
        let gap = fb.cdf(x) - fa.cdf(x);
        if gap > max_violation {
            max_violation = gap;
            worst_point = Some(x);
        }
        max_margin = max_margin.max(-gap);
    }
    Ok(EcdfComparison {
        max_violation,
        worst_point,
        band,
        pass: max_violation <= band,
        max_margin,
    })
}

/// Sample covariance of paired data with the standard error of the
/// product-moment estimator (spread of the centred products).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CovarianceEstimate {
    pub estimate: f64,
    pub se: f64,
}

pub fn covariance(a: &[f64], b: &[f64]) -> Result<CovarianceEstimate> {
    if a.len() != b.len() || a.len() < 2 {
        return Err(Error::Config("covariance needs two paired samples of length >= 2".into()));
    }
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let products: Vec<f64> = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).collect();
    let mean_prod = products.iter().sum::<f64>() / n;
    let var = products.iter().map(|d| (d - mean_prod).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(CovarianceEstimate {
        estimate: mean_prod * n / (n - 1.0),
        se: (var / n).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rstg_core::seeded_rng;

    #[test]
    fn constant_sample() {
        let s = summarize(&[2.0, 2.0, 2.0]).unwrap();
        assert_eq!((s.mean, s.se, s.min, s.max), (2.0, 0.0, 2.0, 2.0));
        assert_eq!(s.ecdf, vec![(2.0, 1.0)]);
        assert!(summarize(&[]).is_err());
    }

    #[test]
    fn quantiles_and_cdf() {
        let s = summarize(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert_eq!(s.median(), 3.0);
        assert_eq!(s.quantile(0.25), 2.0);
        let f = Ecdf::new(&[1.0, 1.0, 2.0, 5.0]).unwrap();
        assert_eq!(f.cdf(0.0), 0.0);
        assert_eq!(f.cdf(1.0), 0.5);
        assert_eq!(f.cdf(4.9), 0.75);
        assert_eq!(f.points(), vec![(1.0, 0.5), (2.0, 0.75), (5.0, 1.0)]);
    }

    #[test]
    fn identical_samples_pass() {
        let x: Vec<f64> = (0..500).map(|i| (i % 17) as f64).collect();
        let c = ecdf_compare(&x, &x, 0.01).unwrap();
        assert!(c.pass);
        assert_eq!(c.max_violation, 0.0);
    }

    #[test]
    fn binomial_order_is_detected() {
        let mut rng = seeded_rng(4);
        let mut binomial = |p: f64| -> Vec<f64> {
            (0..10_000)
                .map(|_| (0..10).filter(|_| rng.random_bool(p)).count() as f64)
                .collect()
        };
        let low = binomial(0.3);
        let high = binomial(0.6);
        let forward = ecdf_compare(&low, &high, 0.01).unwrap();
        let backward = ecdf_compare(&high, &low, 0.01).unwrap();
        assert!(forward.pass);
        assert!(!backward.pass);
        assert!(backward.max_violation > 0.3);
        assert!(forward.max_margin > 0.3);
    }

    #[test]
    fn covariance_of_independent_and_linked() {
        let mut rng = seeded_rng(8);
        let a: Vec<f64> = (0..20_000).map(|_| rng.random()).collect();
        let b: Vec<f64> = (0..20_000).map(|_| rng.random()).collect();
        let c = covariance(&a, &b).unwrap();
        assert!(c.estimate.abs() <= 3.0 * c.se);
        let linked = covariance(&a, &a).unwrap();
        assert!((linked.estimate - 1.0 / 12.0).abs() < 0.005);
    }
}
