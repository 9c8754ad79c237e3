//! Sampled curves and their CSV form.

use serde::{Deserialize, Serialize};

/// A sampled curve. `gaps` lists abscissae whose evaluation failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotSeries {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub gaps: Vec<f64>,
}

impl PlotSeries {
    pub fn new(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            points: Vec::new(),
            gaps: Vec::new(),
        }
    }

    /// Share of attempted samples that produced a value.
    pub fn coverage(&self) -> f64 {
        let total = self.points.len() + self.gaps.len();
        if total == 0 {
            return 1.0;
        }
        self.points.len() as f64 / total as f64
    }

    /// Abscissae strictly increasing.
    pub fn is_sorted(&self) -> bool {
        self.points.windows(2).all(|w| w[0].0 < w[1].0)
    }

    /// Linear-interpolated abscissae where `y` changes sign between samples.
    pub fn sign_changes(&self) -> Vec<f64> {
        self.points
            .windows(2)
            .filter(|w| (w[0].1 < 0.0 && w[1].1 > 0.0) || (w[0].1 > 0.0 && w[1].1 < 0.0))
            .map(|w| {
                let ((x0, y0), (x1, y1)) = (w[0], w[1]);
                x0 - y0 * (x1 - x0) / (y1 - y0)
            })
            .collect()
    }

    /// `t,value` CSV with 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,value\n");
        for &(x, y) in &self.points {
            out.push_str(&format_sig(x));
            out.push(',');
            out.push_str(&format_sig(y));
            out.push('\n');
        }
        out
    }
}

/// Twelve significant digits; positional notation unless the magnitude is
/// outside `[1e-4, 1e12)`.
pub fn format_sig(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 {
        return format!("{:.*}", (DIGITS - 1) as usize, 0.0);
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-4..12).contains(&exp) {
        return format!("{:.*e}", (DIGITS - 1) as usize, x);
    }
    let decimals = (DIGITS - 1 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // Rounding can carry into a new leading digit (9.99.. -> 10.0..).
    let sig = s.chars().filter(|c| c.is_ascii_digit()).skip_while(|&c| c == '0').count() as i32;
    if sig > DIGITS && decimals > 0 {
        format!("{x:.prec$}", prec = decimals - 1)
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_sig(28.26945), "28.2694500000");
        assert_eq!(format_sig(0.0), "0.00000000000");
        assert_eq!(format_sig(-2.5e-7), "-2.50000000000e-7");
        assert_eq!(format_sig(9.9999999999999), "10.0000000000");
    }

    #[test]
    fn csv_layout() {
        let mut s = PlotSeries::new("x");
        s.points = vec![(0.0, 1.0), (0.5, -1.0)];
        assert_eq!(s.to_csv(), "t,value\n0.00000000000,1.00000000000\n0.500000000000,-1.00000000000\n");
        assert_eq!(s.sign_changes(), vec![0.25]);
        assert!(s.is_sorted());
    }
}
