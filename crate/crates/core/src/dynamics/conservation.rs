use serde::{Deserialize, Serialize};

/// Largest departure of a series from its first value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Drift {
    pub initial: f64,
    pub max_abs: f64,
    /// `max_abs / max(1, |initial|)`.
    pub max_rel: f64,
    /// Row index at which `max_abs` is attained.
    pub row: usize,
}

pub fn drift(series: &[f64]) -> Drift {
    let initial = series.first().copied().unwrap_or(0.0);
    let (row, max_abs) =
        series
            .iter()
            .map(|v| (v - initial).abs())
            .enumerate()
            .fold(
                (0, 0.0),
                |best, (i, d)| if d > best.1 { (i, d) } else { best },
            );
    Drift {
        initial,
        max_abs,
        max_rel: max_abs / initial.abs().max(1.0),
        row,
    }
}

/// Largest absolute value in a series and its row.
pub fn peak(series: &[f64]) -> (f64, usize) {
    series.iter().enumerate().fold(
        (0.0, 0),
        |best, (i, v)| if v.abs() > best.0 { (v.abs(), i) } else { best },
    )
}
