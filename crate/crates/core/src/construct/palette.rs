use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Palette of the staged construction for maximum degree `Δ` and radius `r`.
///
/// `big_q` is the least multiple of 3 with `Q >= 2Δ^(r-1) + Δ^(r-1)/ln Δ`,
/// `small_q` the least multiple of 3 with `q >= Δ^(r-1)/ln Δ`. Final colours
/// lie in `[q, 2Q + 2q]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaletteParams {
    pub delta_max: u64,
    pub r: usize,
    /// `Δ^(r-1)`.
    pub power: u64,
    #[serde(rename = "Q")]
    pub big_q: u64,
    #[serde(rename = "q")]
    pub small_q: u64,
    pub k_total: u64,
}

/// Least multiple of 3 that is `>= x`.
fn ceil_to_multiple_of_3(x: f64) -> u64 {
    ((x / 3.0).ceil() as u64) * 3
}

const LIMIT: u64 = 1 << 62;

impl PaletteParams {
    pub fn new(delta_max: u64, r: usize) -> Result<PaletteParams> {
        if delta_max < 2 {
            return Err(Error::Argument(format!("max degree must be at least 2, got {delta_max}")));
        }
        if r < 2 {
            return Err(Error::Argument(format!("radius must be at least 2, got {r}")));
        }
        let power = u32::try_from(r - 1)
            .ok()
            .and_then(|e| delta_max.checked_pow(e))
            .filter(|&p| p < LIMIT)
            .ok_or_else(|| Error::Capacity(format!("{delta_max}^{} exceeds 2^62", r - 1)))?;
        let p = power as f64;
        let ln = (delta_max as f64).ln();
        let small_q = ceil_to_multiple_of_3(p / ln);
        let big_q = ceil_to_multiple_of_3(2.0 * p + p / ln);
        let k_total = big_q
            .checked_add(small_q)
            .and_then(|s| s.checked_mul(2))
            .filter(|&k| (k as u128) * (delta_max as u128) < LIMIT as u128)
            .ok_or_else(|| Error::Capacity(format!("palette for Δ={delta_max}, r={r} overflows 2^62")))?;
        Ok(PaletteParams { delta_max, r, power, big_q, small_q, k_total })
    }

    pub fn ln_delta(&self) -> f64 {
        (self.delta_max as f64).ln()
    }

    /// `4Δ^(r-1)(1 + 1/ln Δ) + 12`, which `k_total` stays strictly below.
    pub fn k_upper_bound(&self) -> f64 {
        4.0 * self.power as f64 * (1.0 + 1.0 / self.ln_delta()) + 12.0
    }

    /// `(2Q + 2q) / q < 5 ln Δ`: r-neighbours whose degrees differ by a
    /// factor of at least `5 ln Δ` can never share a weight.
    pub fn degree_ratio_shortcut_holds(&self) -> bool {
        (self.k_total as f64) / (self.small_q as f64) < 5.0 * self.ln_delta()
    }

    pub fn min_colour(&self) -> u64 {
        self.small_q
    }

    pub fn initial_colour(&self) -> u64 {
        self.big_q + self.small_q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_examples() {
        let p = PaletteParams::new(10, 2).unwrap();
        assert_eq!((p.small_q, p.big_q, p.k_total), (6, 27, 66));
        let p = PaletteParams::new(3, 2).unwrap();
        assert_eq!((p.small_q, p.big_q, p.k_total), (3, 9, 24));
        let p = PaletteParams::new(100, 3).unwrap();
        assert_eq!((p.power, p.small_q, p.big_q, p.k_total), (10_000, 2172, 22173, 48690));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(PaletteParams::new(1, 2), Err(Error::Argument(_))));
        assert!(matches!(PaletteParams::new(5, 1), Err(Error::Argument(_))));
        assert!(matches!(PaletteParams::new(1 << 20, 5), Err(Error::Capacity(_))));
    }

    #[test]
    fn shortcut_threshold() {
        assert!(!PaletteParams::new(2, 2).unwrap().degree_ratio_shortcut_holds());
        assert!(PaletteParams::new(1000, 2).unwrap().degree_ratio_shortcut_holds());
    }
}
