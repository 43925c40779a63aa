use super::trials::TrialReport;

/// Asymptotic space bound of each sampler, before the `c · ln n` factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceBound {
    /// `m²/T`
    Ea1,
    /// `m^{3/2}/T`
    Ea3,
    /// `m/T^{2/3}`
    Al3,
    /// `m/√T + √T`
    Al1Explicit,
    /// `m/√T`
    Al1Weighted,
}

impl SpaceBound {
    pub fn for_algo(id: &str) -> Option<Self> {
        Some(match id {
            "ea1" => SpaceBound::Ea1,
            "ea3" => SpaceBound::Ea3,
            "al3" => SpaceBound::Al3,
            "al1" => SpaceBound::Al1Explicit,
            "al1-wrs" => SpaceBound::Al1Weighted,
            _ => return None,
        })
    }

    pub fn value(self, m: usize, triangles: f64) -> f64 {
        let m = m as f64;
        let t = triangles.max(1.0);
        match self {
            SpaceBound::Ea1 => m * m / t,
            SpaceBound::Ea3 => m.powf(1.5) / t,
            SpaceBound::Al3 => m / t.powf(2.0 / 3.0),
            SpaceBound::Al1Explicit => m / t.sqrt() + t.sqrt(),
            SpaceBound::Al1Weighted => m / t.sqrt(),
        }
    }
}

/// Default multiplier for [`space_budget_check`].
pub const DEFAULT_SPACE_CONSTANT: f64 = 64.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BudgetCheck {
    pub pass: bool,
    pub peak: usize,
    pub limit: f64,
    /// `limit − peak`; negative on failure.
    pub margin: f64,
}

/// Compares the report's worst peak with `c · bound · ln n`.
pub fn space_budget_check(report: &TrialReport, bound: SpaceBound, triangles: f64, c: f64) -> BudgetCheck {
    let ln_n = (report.n.max(3) as f64).ln();
    let limit = c * bound.value(report.m, triangles) * ln_n;
    let peak = report.space_max;
    BudgetCheck { pass: peak as f64 <= limit, peak, limit, margin: limit - peak as f64 }
}
