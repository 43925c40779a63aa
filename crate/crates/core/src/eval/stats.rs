//! Distances between distributions and concentration bounds.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

/// `Σ |count/N − 1/T|` over a support of size `support`; cells beyond
/// `counts.len()` count as zero.
pub fn l1_to_uniform(counts: &[u64], support: usize) -> Result<f64> {
    if support == 0 || counts.len() > support {
        return Err(Error::InvalidParameter(format!(
            "{} counts do not fit a support of size {support}",
            counts.len()
        )));
    }
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::NoSuccesses);
    }
    let u = 1.0 / support as f64;
    let observed: f64 = counts.iter().map(|&c| (c as f64 / total as f64 - u).abs()).sum();
    Ok(observed + (support - counts.len()) as f64 * u)
}

/// `Σ |a/Na − b/Nb|` for two count vectors over the same support.
pub fn l1_between(a: &[u64], b: &[u64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::InvalidParameter("count vectors have different supports".into()));
    }
    let (na, nb): (u64, u64) = (a.iter().sum(), b.iter().sum());
    if na == 0 || nb == 0 {
        return Err(Error::NoSuccesses);
    }
    Ok(a.iter()
        .zip(b)
        .map(|(&x, &y)| (x as f64 / na as f64 - y as f64 / nb as f64).abs())
        .sum())
}

/// A tail bound and its parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ToleranceSpec {
    /// Sum of independent 0/1 variables with mean `mu`, relative deviation
    /// `delta` in `[0, 1]`: `2·exp(−μδ²/3)`.
    ChernoffRelative { mu: f64, delta: f64 },
    /// Sum of `n` independent 0/1 variables, additive deviation `delta`:
    /// `exp(−2δ²/n)`.
    ChernoffAdditive { n: f64, delta: f64 },
    /// Bounded independent terms with `Σ(bᵢ−aᵢ)² = range_sq_sum`, additive
    /// deviation `delta`: `2·exp(−2δ²/Σ)`.
    Hoeffding { range_sq_sum: f64, delta: f64 },
}

/// Evaluates the tail bound. Values above 1 are returned unclamped.
pub fn chernoff_tolerance(spec: ToleranceSpec) -> Result<f64> {
    let bad = |m: &str| Err(Error::InvalidParameter(m.into()));
    match spec {
        ToleranceSpec::ChernoffRelative { mu, delta } => {
            if !(0.0..=1.0).contains(&delta) {
                return bad("relative deviation must lie in [0, 1]");
            }
            if !(mu >= 0.0) {
                return bad("mean must be non-negative");
            }
            Ok(2.0 * (-mu * delta * delta / 3.0).exp())
        }
        ToleranceSpec::ChernoffAdditive { n, delta } => {
            if !(n > 0.0 && delta >= 0.0) {
                return bad("additive bound needs n > 0 and delta >= 0");
            }
            Ok((-2.0 * delta * delta / n).exp())
        }
        ToleranceSpec::Hoeffding { range_sq_sum, delta } => {
            if !(range_sq_sum > 0.0 && delta >= 0.0) {
                return bad("Hoeffding bound needs a positive range sum and delta >= 0");
            }
            Ok(2.0 * (-2.0 * delta * delta / range_sq_sum).exp())
        }
    }
}

/// Smallest relative deviation whose two-sided bound is `beta` at mean `mu`.
/// May exceed 1, in which case the bound does not apply.
pub fn relative_delta_for(mu: f64, beta: f64) -> f64 {
    (3.0 * (2.0 / beta).ln() / mu).sqrt()
}

/// Additive deviation whose one-sided bound over `n` terms is `beta`.
pub fn additive_delta_for(n: f64, beta: f64) -> f64 {
    (n * (1.0 / beta).ln() / 2.0).sqrt()
}

/// Additive deviation whose Hoeffding bound is `beta`.
pub fn hoeffding_delta_for(range_sq_sum: f64, beta: f64) -> f64 {
    (range_sq_sum * (2.0 / beta).ln() / 2.0).sqrt()
}

/// Checks every cell of a multinomial sample against its expected count
/// with a two-sided bound, splitting failure probability `beta` over the
/// cells. Cells with relative deviation above 1 fall back to the additive
/// bound.
pub fn cells_within_bounds(counts: &[u64], probs: &[f64], beta: f64) -> Result<bool> {
    if counts.len() != probs.len() || counts.is_empty() {
        return Err(Error::InvalidParameter("counts and probabilities must align".into()));
    }
    let n: u64 = counts.iter().sum();
    let per_cell = beta / counts.len() as f64;
    Ok(counts.iter().zip(probs).all(|(&c, &p)| {
        let mu = n as f64 * p;
        let dev = (c as f64 - mu).abs();
        let rel = relative_delta_for(mu, per_cell);
        if rel <= 1.0 {
            dev <= rel * mu
        } else {
            dev <= hoeffding_delta_for(n as f64, per_cell)
        }
    }))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson's statistic of `counts` against cell probabilities `probs`.
pub fn chi_square(counts: &[u64], probs: &[f64]) -> Result<ChiSquare> {
    if counts.len() != probs.len() || counts.len() < 2 {
        return Err(Error::InvalidParameter("need at least two aligned cells".into()));
    }
    let n: u64 = counts.iter().sum();
    if n == 0 {
        return Err(Error::NoSuccesses);
    }
    let statistic = counts
        .iter()
        .zip(probs)
        .map(|(&c, &p)| {
            let e = n as f64 * p;
            (c as f64 - e).powi(2) / e
        })
        .sum();
    let dof = counts.len() - 1;
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    Ok(ChiSquare { statistic, dof, p_value: 1.0 - dist.cdf(statistic) })
}
