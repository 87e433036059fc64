//! Photon-number weight families: binomial, Poisson (coherent) and squeezed
//! vacuum, with certified truncation of the infinite ones.
//!
//! Infinite families are cut at the first index whose remaining tail is
//! provably below the requested bound; the kept mass is then renormalized so
//! downstream instances receive exact probability vectors.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol::MAX_TERMS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Family {
    Binomial { n: usize },
    Poisson,
    SqueezedVacuum,
}

impl Family {
    pub fn is_infinite(&self) -> bool {
        !matches!(self, Family::Binomial { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    /// Largest retained index.
    pub n_max: usize,
    /// Upper bound on the discarded mass.
    pub tail_mass: f64,
    /// Sum of the retained weights before renormalization.
    pub raw_mass: f64,
    pub renormalized: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhotonDistribution {
    family: Family,
    alpha: f64,
    raw: Vec<f64>,
    weights: Vec<f64>,
    truncation: Truncation,
}

impl PhotonDistribution {
    /// Builds the weights of `family` at amplitude `alpha`.
    ///
    /// `min_terms` forces at least that many entries, which lets callers
    /// address a fixed index even when it lies in the discarded tail.
    pub fn new(family: Family, alpha: f64, tail_bound: f64, min_terms: usize) -> Result<Self> {
        check_alpha(alpha)?;
        let (raw, tail_mass) = match family {
            Family::Binomial { n } => {
                let mut w = binomial_weights(n, alpha)?;
                w.resize(w.len().max(min_terms), 0.0);
                (w, 0.0)
            }
            Family::Poisson => {
                check_tail(tail_bound)?;
                let a2 = alpha * alpha;
                truncate(
                    poisson_terms(alpha),
                    tail_bound,
                    min_terms,
                    // Ratio w_{k+1}/w_k = a2/(k+1) <= a2/(n+2) beyond n.
                    |n, next| {
                        let r = a2 / (n as f64 + 2.0);
                        (r < 1.0).then(|| next / (1.0 - r))
                    },
                )?
            }
            Family::SqueezedVacuum => {
                check_tail(tail_bound)?;
                let x = squeeze_ratio(alpha);
                // Ratio x (2k+1)/(2k+2) < x for every k.
                truncate(squeezed_terms(alpha), tail_bound, min_terms, |_, next| {
                    Some(next / (1.0 - x))
                })?
            }
        };
        let raw_mass: f64 = raw.iter().sum();
        let weights = raw.iter().map(|w| w / raw_mass).collect();
        Ok(PhotonDistribution {
            family,
            alpha,
            truncation: Truncation {
                n_max: raw.len() - 1,
                tail_mass,
                raw_mass,
                renormalized: true,
            },
            raw,
            weights,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Renormalized weights, summing to one.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Weights as produced by the recurrence, before renormalization.
    pub fn raw_weights(&self) -> &[f64] {
        &self.raw
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Mean photon number. Index `i` of the squeezed family carries `2i` photons.
    pub fn mean_photon_number(&self) -> f64 {
        let m = mean_index(&self.weights);
        match self.family {
            Family::SqueezedVacuum => 2.0 * m,
            _ => m,
        }
    }

    /// Signed amplitudes `f(alpha e^{i theta}, i)` for use as superposition coefficients.
    pub fn amplitudes(&self, theta: f64) -> Vec<Complex64> {
        let step = match self.family {
            Family::SqueezedVacuum => -Complex64::from_polar(1.0, theta),
            _ => Complex64::from_polar(1.0, theta),
        };
        let mut phase = Complex64::new(1.0, 0.0);
        self.weights
            .iter()
            .map(|w| {
                let a = phase * w.sqrt();
                phase *= step;
                a
            })
            .collect()
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "alpha",
            value: alpha,
        })
    }
}

fn check_tail(tail_bound: f64) -> Result<()> {
    if tail_bound > 0.0 && tail_bound <= 1e-6 {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "tail_bound",
            value: tail_bound,
        })
    }
}

/// Pulls terms until the tail certificate drops below `tail_bound`.
///
/// `tail_after(n, w_{n+1})` bounds `sum_{k>n} w_k` once the terms decay
/// geometrically; before that it returns `None`.
fn truncate(
    mut terms: impl Iterator<Item = f64>,
    tail_bound: f64,
    min_terms: usize,
    tail_after: impl Fn(usize, f64) -> Option<f64>,
) -> Result<(Vec<f64>, f64)> {
    let mut kept = Vec::new();
    let mut next = terms.next().expect("infinite family");
    loop {
        kept.push(next);
        if kept.len() > MAX_TERMS {
            return Err(Error::Truncation {
                tail_bound,
                max_terms: MAX_TERMS,
            });
        }
        next = terms.next().expect("infinite family");
        let n = kept.len() - 1;
        if let Some(tail) = tail_after(n, next) {
            if tail <= tail_bound && kept.len() >= min_terms {
                return Ok((kept, tail));
            }
        }
    }
}

/// Exact binomial pmf with success probability `alpha^2 / n`.
pub fn binomial_weights(n: usize, alpha: f64) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    let alpha_sq = alpha * alpha;
    let nf = n as f64;
    if alpha_sq > nf || n == 0 {
        return Err(Error::Range { alpha_sq, n });
    }
    let p = alpha_sq / nf;
    let mut w = vec![0.0; n + 1];
    if p == 0.0 {
        w[0] = 1.0;
        return Ok(w);
    }
    if p == 1.0 {
        w[n] = 1.0;
        return Ok(w);
    }
    // log-domain ratio recurrence: no underflow of (1-p)^n for large n.
    let log_odds = p.ln() - (-p).ln_1p();
    let mut lw = nf * (-p).ln_1p();
    w[0] = lw.exp();
    for i in 0..n {
        lw += ((nf - i as f64) / (i as f64 + 1.0)).ln() + log_odds;
        w[i + 1] = lw.exp();
    }
    Ok(w)
}

fn poisson_terms(alpha: f64) -> impl Iterator<Item = f64> {
    let a2 = alpha * alpha;
    let log_a2 = a2.ln();
    let mut lw = -a2;
    (0usize..).map(move |i| {
        if i > 0 {
            lw += log_a2 - (i as f64).ln();
        }
        if a2 == 0.0 {
            if i == 0 {
                1.0
            } else {
                0.0
            }
        } else {
            lw.exp()
        }
    })
}

/// Squeezing parameter `r(|alpha|) = ln(|alpha| + sqrt(|alpha|^2 + 1))`,
/// chosen so that `sinh^2 r = |alpha|^2`.
pub fn squeeze_parameter(alpha: f64) -> f64 {
    alpha.asinh()
}

/// `tanh^2 r` written without cancellation.
fn squeeze_ratio(alpha: f64) -> f64 {
    let a2 = alpha * alpha;
    a2 / (1.0 + a2)
}

fn squeezed_terms(alpha: f64) -> impl Iterator<Item = f64> {
    let x = squeeze_ratio(alpha);
    let mut w = 1.0 / (1.0 + alpha * alpha).sqrt();
    (0usize..).map(move |i| {
        if i > 0 {
            let k = (i - 1) as f64;
            w *= x * (2.0 * k + 1.0) / (2.0 * k + 2.0);
        }
        w
    })
}

/// Truncated Poisson weights `e^{-alpha^2} alpha^{2i} / i!`, renormalized.
pub fn poisson_weights(alpha: f64, tail_bound: f64) -> Result<PhotonDistribution> {
    PhotonDistribution::new(Family::Poisson, alpha, tail_bound, 0)
}

/// Truncated squeezed-vacuum weights `(2i)!/(i!^2 4^i) tanh^{2i} r / cosh r`, renormalized.
pub fn squeezed_weights(alpha: f64, tail_bound: f64) -> Result<PhotonDistribution> {
    PhotonDistribution::new(Family::SqueezedVacuum, alpha, tail_bound, 0)
}

/// `sum_i i w_i`.
pub fn mean_index(weights: &[f64]) -> f64 {
    weights.iter().enumerate().map(|(i, w)| i as f64 * w).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: u32) -> f64 {
        (1..=n).map(f64::from).product()
    }

    #[test]
    fn binomial_small_cases() {
        assert_eq!(binomial_weights(7, 0.0).unwrap(), vec![1., 0., 0., 0., 0., 0., 0., 0.]);
        let w = binomial_weights(1, 0.5f64.sqrt()).unwrap();
        assert!((w[0] - 0.5).abs() < 1e-15 && (w[1] - 0.5).abs() < 1e-15);
        let w = binomial_weights(4, 2.0).unwrap();
        assert_eq!(w, vec![0.0, 0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn binomial_out_of_range() {
        assert!(matches!(binomial_weights(3, 2.0), Err(Error::Range { n: 3, .. })));
    }

    #[test]
    fn binomial_matches_factorials() {
        let (n, alpha) = (20u32, 1.7f64);
        let p = alpha * alpha / n as f64;
        let w = binomial_weights(n as usize, alpha).unwrap();
        for i in 0..=n {
            let direct =
                factorial(n) / (factorial(i) * factorial(n - i)) * p.powi(i as i32) * (1.0 - p).powi((n - i) as i32);
            assert!((w[i as usize] - direct).abs() <= 1e-12 * direct, "i = {i}");
        }
    }

    #[test]
    fn poisson_basics() {
        let d = poisson_weights(0.0, 1e-12).unwrap();
        assert_eq!(d.weights(), &[1.0]);
        assert_eq!(d.truncation().n_max, 0);

        let d = poisson_weights(1.0, 1e-12).unwrap();
        assert!((d.raw_weights()[0] - (-1.0f64).exp()).abs() < 1e-16);
        assert!((d.mean_photon_number() - 1.0).abs() < 1e-11);
        assert!(d.truncation().tail_mass <= 1e-12);
    }

    #[test]
    fn poisson_matches_factorials() {
        let alpha = 2.3f64;
        let d = poisson_weights(alpha, 1e-12).unwrap();
        for i in 0..=20u32 {
            let direct = (-alpha * alpha).exp() * alpha.powi(2 * i as i32) / factorial(i);
            let w = d.raw_weights()[i as usize];
            assert!((w - direct).abs() <= 1e-12 * direct, "i = {i}");
        }
    }

    #[test]
    fn squeezed_matches_factorials() {
        let alpha = 1.3f64;
        let r = squeeze_parameter(alpha);
        let d = squeezed_weights(alpha, 1e-12).unwrap();
        for i in 0..=20u32 {
            let direct = factorial(2 * i) / (factorial(i).powi(2) * 4f64.powi(i as i32)) * r.tanh().powi(2 * i as i32)
                / r.cosh();
            let w = d.raw_weights()[i as usize];
            assert!((w - direct).abs() <= 1e-12 * direct, "i = {i}");
        }
    }

    #[test]
    fn squeeze_parameter_at_one() {
        // ln(1 + sqrt 2) = 0.88137358701954302523...
        assert!((squeeze_parameter(1.0) - 0.881_373_587_019_543).abs() < 1e-15);
        assert!((squeeze_parameter(1.0).sinh() - 1.0).abs() < 1e-15);
        assert_eq!(squeezed_weights(0.0, 1e-12).unwrap().weights(), &[1.0]);
    }

    #[test]
    fn squeezed_mean_photon_number() {
        let d = squeezed_weights(1.0, 1e-12).unwrap();
        assert!((d.mean_photon_number() - 1.0).abs() < 1e-9);
        assert!((2.0 * mean_index(d.weights()) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn min_terms_extends_the_tail() {
        let d = PhotonDistribution::new(Family::Poisson, 0.1, 1e-12, 9).unwrap();
        assert_eq!(d.len(), 9);
        assert!(d.raw_weights()[8] > 0.0);
    }

    #[test]
    fn invalid_arguments() {
        assert!(poisson_weights(-1.0, 1e-12).is_err());
        assert!(poisson_weights(1.0, 0.0).is_err());
        assert!(poisson_weights(1.0, 1e-3).is_err());
        assert!(matches!(squeezed_weights(40.0, 1e-12), Err(Error::Truncation { .. })));
    }

    #[test]
    fn amplitude_signs() {
        let d = squeezed_weights(0.8, 1e-12).unwrap();
        let a = d.amplitudes(0.0);
        assert!(a[1].re < 0.0 && a[2].re > 0.0);
        let norm: f64 = a.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-14);
    }
}
