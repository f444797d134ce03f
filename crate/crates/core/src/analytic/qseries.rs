use super::check_q;
use crate::Result;

/// Truncation tolerance used wherever `phi_inf` is needed internally.
pub const DEFAULT_PHI_TOL: f64 = 1e-17;

/// q-Pochhammer symbol `phi_n(q) = prod_{j=1..n} (1 - q^j)`, with `phi_0 = 1`.
pub fn phi_n(q: f64, n: usize) -> Result<f64> {
    check_q(q)?;
    let mut p = 1.0;
    let mut qj = 1.0;
    for _ in 0..n {
        qj *= q;
        if qj == 0.0 {
            break;
        }
        p *= 1.0 - qj;
    }
    Ok(p)
}

/// Euler function `phi_inf(q) = prod_{i>=1} (1 - q^i)`.
///
/// The product stops once the remaining factors can change it by a relative
/// amount below `tol`: `prod_{i>N} (1 - q^i) >= 1 - q^{N+1} / (1 - q)`.
pub fn phi_inf(q: f64, tol: f64) -> Result<f64> {
    check_q(q)?;
    if !(tol > 0.0) {
        return Err(crate::Error::domain(
            "tol",
            format!("must be positive, got {tol}"),
        ));
    }
    let mut p = 1.0;
    let mut qi = q;
    loop {
        p *= 1.0 - qi;
        let next = qi * q;
        if next / (1.0 - q) < tol || next == 0.0 {
            return Ok(p);
        }
        qi = next;
    }
}

/// `ln phi_j(q)` for `j = 0..=n`.
pub(crate) fn ln_phi_table(q: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    let mut qj = 1.0;
    out.push(0.0);
    for _ in 0..n {
        qj *= q;
        acc += (-qj).ln_1p();
        out.push(acc);
    }
    out
}

/// Neumaier-compensated running sum that also tracks `sum |x_i|`, the scale
/// against which cancellation error is measured.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
    abs_sum: f64,
    // Bound on the error already present in the individual addends.
    addend_error: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        self.add_with_error(x, 0.0);
    }

    /// Adds `x`, which is known only to within `err`.
    pub fn add_with_error(&mut self, x: f64, err: f64) {
        let s = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - s) + x;
        } else {
            self.comp += (x - s) + self.sum;
        }
        self.sum = s;
        self.abs_sum += x.abs();
        self.addend_error += err.abs();
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    pub fn abs_sum(&self) -> f64 {
        self.abs_sum
    }

    /// Bound on `|value() - exact sum of the addends as given|` plus the
    /// declared addend errors.
    pub fn error_bound(&self) -> f64 {
        let eps = f64::EPSILON;
        2.0 * eps * self.value().abs() + 4.0 * eps * eps * self.abs_sum + self.addend_error
    }
}
