use num_traits::ToPrimitive;

use crate::symbol::Symbol;

pub const DEFAULT_BIN_WIDTH: f64 = 0.1;

/// Counts of nonzero coefficients per `log10 |c|` bin. Bin `i` covers
/// `[i w, (i + 1) w)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub width: f64,
    pub bins: Vec<(i64, usize)>,
}

impl Histogram {
    pub fn total(&self) -> usize {
        self.bins.iter().map(|(_, c)| c).sum()
    }

    /// `log10_lower\tcount` rows under a header.
    pub fn to_text(&self) -> String {
        let mut out = String::from("log10_lower\tcount\n");
        for (i, c) in &self.bins {
            out.push_str(&format!("{:.4}\t{c}\n", *i as f64 * self.width));
        }
        out
    }
}

fn log10_magnitude(symbol: &Symbol, i: usize) -> f64 {
    let m = symbol.coefficient_at(i).magnitude();
    match m.to_f64() {
        Some(f) if f.is_finite() => f.log10(),
        _ => {
            let bits = m.bits();
            let shift = bits.saturating_sub(52);
            let top = (&m >> shift).to_f64().unwrap_or(1.0);
            top.log10() + shift as f64 * std::f64::consts::LOG10_2
        }
    }
}

pub fn magnitude_histogram(symbol: &Symbol, width: f64) -> Histogram {
    assert!(width > 0.0, "bin width must be positive");
    let mut counts = std::collections::BTreeMap::<i64, usize>::new();
    for i in 0..symbol.len() {
        let bin = (log10_magnitude(symbol, i) / width + 1e-9).floor() as i64;
        *counts.entry(bin).or_default() += 1;
    }
    Histogram {
        width,
        bins: counts.into_iter().collect(),
    }
}
