use crate::error::{Error, Result};

/// Thresholds and sizing for the adjacency-list samplers.
///
/// Every derived quantity has an absolute override so small graphs can be
/// pushed into the all-light or all-heavy regime.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgoParams {
    /// Proximity parameter ε in (0, 2).
    pub epsilon: f64,
    /// Promised triangle count (exact or a lower bound).
    pub triangles: f64,
    /// Vertex count used in the logarithmic factors.
    pub n: usize,
    /// Multiplier in `τ₃ = c·(T/ε²)^{1/3}`.
    pub tau3_const: f64,
    /// Multiplier in `τ₁ = c·√T`.
    pub tau1_const: f64,
    /// Multiplier in `κ = c·ln n`.
    pub kappa_const: f64,
    /// Multiplier in `p = min(1, c·ln n/(ε²√T))`.
    pub p_const: f64,
    /// Multiplier on reservoir slot counts.
    pub slot_const: f64,
    pub tau3: Option<f64>,
    pub tau1: Option<f64>,
    pub kappa: Option<f64>,
    pub p: Option<f64>,
    pub slots: Option<usize>,
}

impl AlgoParams {
    pub fn new(epsilon: f64, triangles: f64, n: usize) -> Result<Self> {
        let params = AlgoParams {
            epsilon,
            triangles,
            n,
            tau3_const: 12.0,
            tau1_const: 900.0,
            kappa_const: 10.0,
            p_const: 100.0,
            slot_const: 4.0,
            tau3: None,
            tau1: None,
            kappa: None,
            p: None,
            slots: None,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: String| Err(Error::InvalidParameter(what));
        if !(self.epsilon > 0.0 && self.epsilon < 2.0) {
            return bad(format!("epsilon must lie in (0, 2), got {}", self.epsilon));
        }
        if !(self.triangles >= 1.0 && self.triangles.is_finite()) {
            return bad(format!("triangle count must be at least 1, got {}", self.triangles));
        }
        for (name, v) in [
            ("tau3 constant", self.tau3_const),
            ("tau1 constant", self.tau1_const),
            ("kappa constant", self.kappa_const),
            ("p constant", self.p_const),
            ("slot constant", self.slot_const),
            ("tau3", self.tau3()),
            ("tau1", self.tau1()),
            ("kappa", self.kappa()),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        let p = self.p();
        if !(p > 0.0 && p <= 1.0) {
            return bad(format!("p must lie in (0, 1], got {p}"));
        }
        if self.slots == Some(0) {
            return bad("slot count must be positive".into());
        }
        Ok(())
    }

    /// `ln n`, floored at `ln 3` so tiny graphs still get a positive factor.
    pub fn log_n(&self) -> f64 {
        (self.n.max(3) as f64).ln()
    }

    pub fn tau3(&self) -> f64 {
        self.tau3
            .unwrap_or_else(|| self.tau3_const * (self.triangles / (self.epsilon * self.epsilon)).cbrt())
    }

    pub fn tau1(&self) -> f64 {
        self.tau1.unwrap_or_else(|| self.tau1_const * self.triangles.sqrt())
    }

    pub fn kappa(&self) -> f64 {
        self.kappa.unwrap_or_else(|| self.kappa_const * self.log_n())
    }

    pub fn p(&self) -> f64 {
        self.p.unwrap_or_else(|| {
            let raw = self.p_const * self.log_n() / (self.epsilon * self.epsilon * self.triangles.sqrt());
            raw.min(1.0)
        })
    }

    /// Slot count `⌈c·m/T^{2/3}·ln n⌉` for the three-pass sampler.
    pub fn al3_slots(&self, m: usize) -> usize {
        self.slots
            .unwrap_or_else(|| self.sized(m as f64 / self.triangles.powf(2.0 / 3.0)))
    }

    /// Slot count `⌈c·m/√T·ln n⌉` for the one-pass light sampler.
    pub fn al1_slots(&self, m: usize) -> usize {
        self.slots
            .unwrap_or_else(|| self.sized(m as f64 / self.triangles.sqrt()))
    }

    fn sized(&self, bound: f64) -> usize {
        ((self.slot_const * bound * self.log_n()).ceil() as usize).max(1)
    }
}
