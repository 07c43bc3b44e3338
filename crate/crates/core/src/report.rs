use std::fmt;

/// Worst-case slack of an inequality over a sweep.
///
/// A margin is `bound − observed`, so nonnegative means the inequality
/// holds. `passed` is `min_margin ≥ −tolerance`; a NaN margin fails.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginReport {
    pub label: String,
    pub min_margin: f64,
    /// Where the minimum occurred: an X value for dominance sweeps, a radius
    /// for heat-equation checks.
    pub position: f64,
    /// Grid node of the minimum, when the sweep runs over a spatial grid.
    pub node: Option<usize>,
    pub time: f64,
    /// Magnitude of the compared quantities at the minimum.
    pub scale: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl MarginReport {
    pub fn new(label: impl Into<String>, tolerance: f64) -> Self {
        Self {
            label: label.into(),
            min_margin: f64::INFINITY,
            position: f64::NAN,
            node: None,
            time: f64::NAN,
            scale: 0.0,
            tolerance,
            passed: true,
        }
    }

    /// Records one margin sample, keeping the smallest (NaN counts as smallest).
    pub fn observe(&mut self, margin: f64, scale: f64, position: f64, node: Option<usize>, time: f64) {
        if margin < self.min_margin || (margin.is_nan() && !self.min_margin.is_nan()) {
            self.min_margin = margin;
            self.scale = scale;
            self.position = position;
            self.node = node;
            self.time = time;
        }
        self.passed = self.min_margin >= -self.tolerance;
    }

    /// Folds another report on the same inequality into this one.
    pub fn merge(&mut self, other: &MarginReport) {
        self.tolerance = self.tolerance.max(other.tolerance);
        self.observe(other.min_margin, other.scale, other.position, other.node, other.time);
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.passed = self.min_margin >= -tolerance;
        self
    }

    pub const CSV_HEADER: &'static str = "label,min_margin,position,node,time,scale,tolerance,passed";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.label,
            self.min_margin,
            self.position,
            self.node.map_or_else(String::new, |n| n.to_string()),
            self.time,
            self.scale,
            self.tolerance,
            self.passed
        )
    }
}

impl fmt::Display for MarginReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<28} {} min_margin={:.6e} at={:.6} t={} tol={:.3e}",
            self.label,
            if self.passed { "PASS" } else { "FAIL" },
            self.min_margin,
            self.position,
            self.time,
            self.tolerance
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keeps_minimum_and_flags_failure() {
        let mut r = MarginReport::new("x", 1e-3);
        r.observe(0.5, 1.0, 1.0, Some(1), 0.1);
        r.observe(-1e-4, 1.0, 2.0, Some(2), 0.1);
        r.observe(0.2, 1.0, 3.0, Some(3), 0.1);
        assert!(r.passed);
        assert_eq!(r.node, Some(2));
        r.observe(-1.0, 1.0, 4.0, None, 0.2);
        assert!(!r.passed);
        let mut nan = MarginReport::new("y", 1.0);
        nan.observe(f64::NAN, 0.0, 0.0, None, 0.0);
        nan.observe(5.0, 1.0, 0.0, None, 0.0);
        assert!(!nan.passed);
    }
}
