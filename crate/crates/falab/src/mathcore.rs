//! Numerically stable primitives shared by every module: softmax,
//! log-sum-exp, the clamped logarithm, simplex sampling, and the seeded
//! stream contract.

use crate::error::{FalabError, Result};
use rand::{Rng, SeedableRng};

/// Global probability floor applied before any logarithm. Prevents -inf
/// losses while perturbing well-conditioned values far below test
/// tolerances.
pub const EPSILON: f64 = 1e-12;

/// Deterministic random stream. ChaCha8 is counter-based: a (seed, stream)
/// pair fully determines the sequence, so every stochastic operation takes
/// an explicit stream and experiments replay bit-exactly.
pub type Stream = rand_chacha::ChaCha8Rng;

/// Root stream for a seed.
pub fn stream(seed: u64) -> Stream {
    Stream::seed_from_u64(seed)
}

/// Independent substream `id` of a seed. Substreams never overlap, so
/// different pipeline stages (init, shuffle, sampling...) can draw from
/// the same seed without coupling.
pub fn substream(seed: u64, id: u64) -> Stream {
    let mut rng = Stream::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Pre-softmax scores. Length K >= 2, all entries finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Logits(Vec<f64>);

impl Logits {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(FalabError::invalid(format!(
                "logits need at least 2 classes, got {}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(FalabError::invalid("logits contain NaN or infinity"));
        }
        Ok(Logits(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }
}

/// A point on the K-simplex: entries in [EPSILON, 1], summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector {
    probs: Vec<f64>,
}

impl ProbVector {
    /// Builds from a vector that already sums to ~1 (within 1e-9 before
    /// flooring). Entries are clamped to the floor and renormalized so the
    /// simplex invariants hold exactly.
    pub fn new(raw: Vec<f64>) -> Result<Self> {
        if raw.len() < 2 {
            return Err(FalabError::invalid(format!(
                "probability vector needs at least 2 classes, got {}",
                raw.len()
            )));
        }
        if raw.iter().any(|v| !v.is_finite() || *v < 0.0 || *v > 1.0 + 1e-9) {
            return Err(FalabError::invalid(
                "probability entries must be finite and in [0, 1]",
            ));
        }
        let sum: f64 = raw.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(FalabError::invalid(format!(
                "probabilities sum to {sum}, expected 1 within 1e-9"
            )));
        }
        Ok(Self::floor_and_renormalize(raw))
    }

    /// Normalizes an arbitrary non-negative weight vector onto the simplex.
    pub fn from_weights(raw: Vec<f64>) -> Result<Self> {
        if raw.len() < 2 {
            return Err(FalabError::invalid("need at least 2 classes"));
        }
        if raw.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(FalabError::invalid(
                "weights must be finite and non-negative",
            ));
        }
        let sum: f64 = raw.iter().sum();
        if sum <= 0.0 {
            return Err(FalabError::invalid("weights sum to zero"));
        }
        Ok(Self::floor_and_renormalize(
            raw.into_iter().map(|v| v / sum).collect(),
        ))
    }

    /// Uniform distribution over k classes.
    pub fn uniform(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(FalabError::invalid("need at least 2 classes"));
        }
        Ok(Self::floor_and_renormalize(vec![1.0 / k as f64; k]))
    }

    fn floor_and_renormalize(mut probs: Vec<f64>) -> Self {
        for p in &mut probs {
            if *p < EPSILON {
                *p = EPSILON;
            }
        }
        let sum: f64 = probs.iter().sum();
        for p in &mut probs {
            *p /= sum;
        }
        ProbVector { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn k(&self) -> usize {
        self.probs.len()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.probs[i]
    }
}

/// log(sum(exp(v))) without overflow: shifts by the maximum first.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = values.iter().map(|v| (v - max).exp()).sum();
    max + sum.ln()
}

/// Softmax with the probability floor applied afterwards.
pub fn softmax(logits: &Logits) -> ProbVector {
    let lse = log_sum_exp(logits.values());
    let raw: Vec<f64> = logits.values().iter().map(|l| (l - lse).exp()).collect();
    ProbVector::floor_and_renormalize(raw)
}

/// ln(max(p, EPSILON)) for p in [0, 1].
pub fn safe_log(p: f64) -> Result<f64> {
    if !p.is_finite() || !(0.0..=1.0).contains(&p) {
        return Err(FalabError::invalid(format!(
            "safe_log argument {p} outside [0, 1]"
        )));
    }
    Ok(ln_floored(p))
}

/// Internal log with the floor, no domain check. Callers uphold p >= 0.
pub(crate) fn ln_floored(p: f64) -> f64 {
    p.max(EPSILON).ln()
}

/// Uniform sample from the K-simplex (Dirichlet(1,...,1)) via normalized
/// exponential spacings.
pub fn sample_simplex(k: usize, rng: &mut Stream) -> Result<ProbVector> {
    if k < 2 {
        return Err(FalabError::invalid(format!(
            "simplex dimension must be >= 2, got {k}"
        )));
    }
    loop {
        // 1 - U is in (0, 1], so the log never sees zero.
        let draws: Vec<f64> = (0..k).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
        let sum: f64 = draws.iter().sum();
        if sum > 0.0 {
            return Ok(ProbVector::floor_and_renormalize(
                draws.into_iter().map(|d| d / sum).collect(),
            ));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn softmax_symmetry() {
        let p = softmax(&Logits::new(vec![0.0, 0.0]).unwrap());
        assert_eq!(p.probs(), &[0.5, 0.5]);
    }

    #[test]
    fn softmax_large_logits_no_overflow() {
        let p = softmax(&Logits::new(vec![1000.0, 1000.0, 1000.0]).unwrap());
        for &v in p.probs() {
            assert!((v - 1.0 / 3.0).abs() < 1e-15, "got {v}");
        }
    }

    #[test]
    fn softmax_hand_value() {
        // (ln 2, 0) -> (2/3, 1/3)
        let p = softmax(&Logits::new(vec![2.0f64.ln(), 0.0]).unwrap());
        assert!((p.get(0) - 2.0 / 3.0).abs() < 1e-15);
        assert!((p.get(1) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn softmax_output_is_valid_probvector() {
        let p = softmax(&Logits::new(vec![-40.0, 0.0, 35.0, 3.0]).unwrap());
        let sum: f64 = p.probs().iter().sum();
        assert!((sum - 1.0).abs() < 1e-9);
        assert!(p.probs().iter().all(|&v| v >= EPSILON));
    }

    #[test]
    fn logits_reject_non_finite() {
        assert!(Logits::new(vec![f64::NAN, 0.0]).is_err());
        assert!(Logits::new(vec![f64::INFINITY, 0.0]).is_err());
        assert!(Logits::new(vec![1.0]).is_err());
    }

    #[test]
    fn safe_log_values() {
        assert_eq!(safe_log(1.0).unwrap(), 0.0);
        assert!((safe_log((-1.0f64).exp()).unwrap() + 1.0).abs() < 1e-15);
        assert_eq!(safe_log(0.0).unwrap(), EPSILON.ln());
        assert!(safe_log(1.5).is_err());
        assert!(safe_log(-0.1).is_err());
        assert!(safe_log(f64::NAN).is_err());
    }

    #[test]
    fn safe_log_monotone() {
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=1000 {
            let v = safe_log(i as f64 / 1000.0).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn simplex_membership_and_determinism() {
        let mut a = stream(7);
        let mut b = stream(7);
        let pa = sample_simplex(3, &mut a).unwrap();
        let pb = sample_simplex(3, &mut b).unwrap();
        assert_eq!(pa.probs(), pb.probs());
        let sum: f64 = pa.probs().iter().sum();
        assert!((sum - 1.0).abs() < 1e-9);
        assert!(sample_simplex(1, &mut a).is_err());
    }

    #[test]
    fn simplex_coordinate_mean_is_one_over_k() {
        // Dirichlet(1,...,1) coordinate mean is 1/k.
        let mut rng = stream(11);
        let k = 5;
        let n = 100_000;
        let mut means = vec![0.0; k];
        for _ in 0..n {
            let p = sample_simplex(k, &mut rng).unwrap();
            for (m, &v) in means.iter_mut().zip(p.probs()) {
                *m += v;
            }
        }
        for m in &means {
            assert!((m / n as f64 - 0.2).abs() < 0.01);
        }
    }

    #[test]
    fn substreams_differ() {
        let mut a = substream(3, 0);
        let mut b = substream(3, 1);
        let xa: f64 = a.random();
        let xb: f64 = b.random();
        assert_ne!(xa, xb);
    }
}
