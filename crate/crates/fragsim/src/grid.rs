use std::str::FromStr;

use crate::error::{HarnessError, Result};

/// Largest number of points a grid may expand to.
pub const MAX_GRID_POINTS: usize = 1_000_000;

/// Arithmetic grid `LO:HI:STEP`, inclusive of `HI` up to rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TGrid {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl TGrid {
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        let [lo, hi, step] = parts.as_slice() else {
            return Err(HarnessError::spec("t-grid", format!("expected LO:HI:STEP, got {text:?}")));
        };
        let num = |s: &str, what: &'static str| -> Result<f64> {
            let v: f64 = s
                .trim()
                .parse()
                .map_err(|_| HarnessError::spec("t-grid", format!("{what} {s:?} is not a number")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(HarnessError::spec("t-grid", format!("{what} must be finite")))
            }
        };
        let grid = TGrid {
            lo: num(lo, "LO")?,
            hi: num(hi, "HI")?,
            step: num(step, "STEP")?,
        };
        if grid.lo < 0.0 {
            return Err(HarnessError::spec("t-grid", "LO must be >= 0"));
        }
        if !(grid.step > 0.0) {
            return Err(HarnessError::spec("t-grid", "STEP must be positive"));
        }
        if grid.hi < grid.lo {
            return Err(HarnessError::spec("t-grid", "HI must be >= LO"));
        }
        if grid.len() > MAX_GRID_POINTS {
            return Err(HarnessError::spec("t-grid", format!("more than {MAX_GRID_POINTS} points")));
        }
        Ok(grid)
    }

    pub fn len(&self) -> usize {
        let span = (self.hi - self.lo) / self.step;
        if span >= MAX_GRID_POINTS as f64 {
            return usize::MAX;
        }
        (span + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.lo + self.step * i as f64).collect()
    }
}

impl FromStr for TGrid {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        TGrid::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inclusive_upper_end() {
        let g = TGrid::parse("0:1:0.1").unwrap();
        assert_eq!(g.len(), 11);
        let v = g.values();
        assert_eq!(v[0], 0.0);
        assert!((v[10] - 1.0).abs() < 1e-12);
        assert_eq!(TGrid::parse("2:2:1").unwrap().values(), vec![2.0]);
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "1:2", "1:2:3:4", "a:2:1", "0:1:0", "0:1:-1", "2:1:1", "-1:1:1", "0:inf:1", "0:1e300:1e-300", "0:NaN:1"] {
            assert!(TGrid::parse(bad).is_err(), "{bad}");
        }
    }
}
