use crate::{Error, Result};

/// Integer pair `{ceil(b^{-1}(t)), ceil(a^{-1}(t))}` bracketing the value of
/// an increasing right-continuous step function whose jump times obey
/// `a(n) <= T_n <= b(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JumpWindow {
    pub lo: i64,
    pub hi: i64,
}

impl JumpWindow {
    /// Membership in the set `{lo, hi}`.
    pub fn contains(&self, value: i64) -> bool {
        value == self.lo || value == self.hi
    }

    pub fn is_singleton(&self) -> bool {
        self.lo == self.hi
    }
}

/// Tabulated jump-time bounds `a(n) <= T_n <= b(n)` for `n = n0, n0+1, ...`,
/// where `T_n` is the time the step function leaves the value `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpBounds {
    n0: i64,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl JumpBounds {
    /// Validates that both tables are non-empty, equally long, finite,
    /// strictly increasing and ordered `a <= b`.
    pub fn new(n0: i64, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() {
            return Err(Error::InvalidInput(format!(
                "jump tables must be non-empty and equally long (got {} and {})",
                a.len(),
                b.len()
            )));
        }
        for (name, tab) in [("a", &a), ("b", &b)] {
            if tab.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput(format!("table {name} has non-finite entries")));
            }
            if tab.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidInput(format!("table {name} is not strictly increasing")));
            }
        }
        if a.iter().zip(&b).any(|(x, y)| x > y) {
            return Err(Error::InvalidInput("need a(n) <= b(n) for every n".into()));
        }
        Ok(JumpBounds { n0, a, b })
    }

    pub fn n0(&self) -> i64 {
        self.n0
    }

    /// Window at time `t`, for `t` below the last tabulated `a`.
    pub fn convert(&self, t: f64) -> Result<JumpWindow> {
        let last = *self.a.last().expect("validated non-empty");
        if !(t < last) || t.is_nan() {
            return Err(Error::domain(
                "t",
                format!("outside tabulated range: need t < a(last) = {last}, got {t}"),
            ));
        }
        // First index whose bound exceeds t; the step function has left every
        // earlier value by time t.
        let first_above = |tab: &[f64]| tab.partition_point(|&v| v <= t) as i64;
        Ok(JumpWindow {
            lo: self.n0 + first_above(&self.b),
            hi: self.n0 + first_above(&self.a),
        })
    }
}

/// One-shot form of [`JumpBounds::convert`].
pub fn jump_window_convert(bounds: &JumpBounds, t: f64) -> Result<JumpWindow> {
    bounds.convert(t)
}
