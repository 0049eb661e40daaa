//! Zipf request popularity and generalized harmonic numbers.

use rand::Rng;

use crate::error::{invalid, Result};

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::default();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// `H_s(M) = sum_{i=1}^{M} i^{-s}`, summed in ascending index order.
pub fn harmonic_sum(m: usize, s: f64) -> Result<f64> {
    if m == 0 {
        return Err(invalid("harmonic_sum needs M >= 1"));
    }
    if !(s > 0.0) || !s.is_finite() {
        return Err(invalid(format!("harmonic_sum needs s > 0, got {s}")));
    }
    Ok(harmonic_range(1, m, s))
}

/// `sum_{i=lo}^{hi} i^{-s}` for `1 <= lo`; zero when `lo > hi`.
pub(crate) fn harmonic_range(lo: usize, hi: usize, s: f64) -> f64 {
    (lo..=hi)
        .map(|i| (i as f64).powf(-s))
        .collect::<CompensatedSum>()
        .value()
}

/// Zipf popularity over a library of `M` contents.
///
/// Content indices are 1-based in the mathematical sense; the vectors are
/// 0-based, so `pmf()[m - 1]` is the request probability of content `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct PopularityModel {
    m: usize,
    alpha: f64,
    pmf: Vec<f64>,
    cdf: Vec<f64>,
    h_alpha: f64,
    h_half_alpha: f64,
}

impl PopularityModel {
    pub fn zipf(m: usize, alpha: f64) -> Result<Self> {
        if m == 0 {
            return Err(invalid("library size M must be >= 1"));
        }
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(invalid(format!("Zipf exponent must be > 0, got {alpha}")));
        }
        let h_alpha = harmonic_sum(m, alpha)?;
        let h_half_alpha = harmonic_sum(m, alpha / 2.0)?;
        let pmf: Vec<f64> = (1..=m)
            .map(|i| (i as f64).powf(-alpha) / h_alpha)
            .collect();
        let mut acc = CompensatedSum::default();
        let mut cdf: Vec<f64> = pmf
            .iter()
            .map(|&p| {
                acc.add(p);
                acc.value()
            })
            .collect();
        // Pin the last entry so inverse-CDF sampling can never run off the end.
        if let Some(last) = cdf.last_mut() {
            *last = 1.0;
        }
        Ok(PopularityModel {
            m,
            alpha,
            pmf,
            cdf,
            h_alpha,
            h_half_alpha,
        })
    }

    /// Library size `M`.
    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    pub fn cdf(&self) -> &[f64] {
        &self.cdf
    }

    /// `H_alpha(M)`.
    pub fn h_alpha(&self) -> f64 {
        self.h_alpha
    }

    /// `H_{alpha/2}(M)`.
    pub fn h_half_alpha(&self) -> f64 {
        self.h_half_alpha
    }

    /// Request probability of content `m` (1-based).
    pub fn p(&self, m: usize) -> f64 {
        self.pmf[m - 1]
    }

    pub fn sqrt_pmf(&self) -> Vec<f64> {
        self.pmf.iter().map(|p| p.sqrt()).collect()
    }

    /// Draws a 0-based content id by inverse-CDF lookup.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        let idx = self.cdf.partition_point(|&c| c <= u);
        idx.min(self.m - 1)
    }
}

/// Convenience alias for [`PopularityModel::zipf`].
pub fn zipf_pmf(m: usize, alpha: f64) -> Result<PopularityModel> {
    PopularityModel::zipf(m, alpha)
}

/// Growth class of `H_s(M)` as `M` grows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HarmonicClass {
    /// Bounded: `s > 1`.
    Constant,
    /// `log M`: `s = 1`.
    LogM,
    /// `M^{exponent}` with `exponent = 1 - s`: `s < 1`.
    Power(f64),
}

impl HarmonicClass {
    /// `(power of M, power of log M)`.
    pub fn exponents(self) -> (f64, i32) {
        match self {
            HarmonicClass::Constant => (0.0, 0),
            HarmonicClass::LogM => (0.0, 1),
            HarmonicClass::Power(e) => (e, 0),
        }
    }
}

/// Class of `H_s(M)` for `s = alpha`, or `s = alpha / 2` when `of_half`.
pub fn harmonic_class(alpha: f64, of_half: bool) -> HarmonicClass {
    let s = if of_half { alpha / 2.0 } else { alpha };
    if s > 1.0 {
        HarmonicClass::Constant
    } else if s == 1.0 {
        HarmonicClass::LogM
    } else {
        HarmonicClass::Power(1.0 - s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn harmonic_small_cases() {
        assert_eq!(harmonic_sum(1, 1.0).unwrap(), 1.0);
        assert_relative_eq!(harmonic_sum(4, 1.0).unwrap(), 25.0 / 12.0, max_relative = 1e-15);
    }

    #[test]
    fn harmonic_matches_integral_estimate() {
        // sum_{i<=M} i^{-s} ~ M^{1-s}/(1-s) + zeta(s) for s < 1.
        let h = harmonic_sum(1000, 0.25).unwrap();
        let approx = 1000f64.powf(0.75) / 0.75;
        assert!((h / approx - 1.0).abs() < 0.005, "{h} vs {approx}");
    }

    #[test]
    fn harmonic_rejects_bad_input() {
        assert!(harmonic_sum(0, 1.0).is_err());
        assert!(harmonic_sum(3, 0.0).is_err());
        assert!(harmonic_sum(3, -1.0).is_err());
        assert!(harmonic_sum(3, f64::NAN).is_err());
    }

    #[test]
    fn compensated_sum_recovers_cancelled_terms() {
        let acc: CompensatedSum = [1.0, 1e100, 1.0, -1e100].into_iter().collect();
        assert_eq!(acc.value(), 2.0);
    }

    #[test]
    fn zipf_examples() {
        assert_eq!(zipf_pmf(1, 2.0).unwrap().pmf(), &[1.0]);
        let p4 = zipf_pmf(4, 1.0).unwrap();
        assert_relative_eq!(p4.pmf()[0], 0.48, max_relative = 1e-14);
        let p2 = zipf_pmf(2, 1.0).unwrap();
        assert_relative_eq!(p2.pmf()[0], 2.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(p2.pmf()[1], 1.0 / 3.0, max_relative = 1e-15);
        assert!(zipf_pmf(0, 1.0).is_err());
        assert!(zipf_pmf(5, 0.0).is_err());
    }

    #[test]
    fn cdf_ends_at_one() {
        let p = zipf_pmf(250, 0.5).unwrap();
        assert_eq!(*p.cdf().last().unwrap(), 1.0);
        assert!(p.cdf().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn sampler_frequencies_follow_pmf() {
        let p = zipf_pmf(5, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let draws = 200_000;
        let mut counts = [0usize; 5];
        for _ in 0..draws {
            counts[p.sample(&mut rng)] += 1;
        }
        for (c, &q) in counts.iter().zip(p.pmf()) {
            let f = *c as f64 / draws as f64;
            let sigma = (q * (1.0 - q) / draws as f64).sqrt();
            assert!((f - q).abs() < 4.0 * sigma, "freq {f} vs {q}");
        }
    }

    #[test]
    fn classes() {
        assert_eq!(harmonic_class(1.0, false), HarmonicClass::LogM);
        assert_eq!(harmonic_class(3.0, true), HarmonicClass::Constant);
        assert_eq!(harmonic_class(0.5, false), HarmonicClass::Power(0.5));
        assert_eq!(harmonic_class(2.0, true), HarmonicClass::LogM);
        assert_eq!(harmonic_class(1.5, true), HarmonicClass::Power(0.25));
    }
}
