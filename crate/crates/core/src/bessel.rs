//! Integer-order Bessel functions of the first kind, `J_n(delta)`.
//!
//! Every value is produced by Miller's backward recurrence
//!
//! ```text
//! J_{n-1}(x) = (2n / x) J_n(x) - J_{n+1}(x)
//! ```
//!
//! started well above the turnover order `n ~ x` from an arbitrary seed and
//! normalized afterwards with `J_0 + 2 sum_k J_{2k} = 1`. One pass yields the
//! whole row `J_0 ..= J_top`; negative orders follow from
//! `J_{-n} = (-1)^n J_n`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Largest modulation depth accepted anywhere in the crate.
pub const MAX_DEPTH: f64 = 1e4;

/// Default captured-mass tolerance for truncating the scattering sums.
pub const DEFAULT_TRUNCATION: f64 = 1e-12;

// Below this depth the recurrence ratio 2n/x can overflow in one step, so the
// leading series term (exact to relative x^2/4) is used instead.
const TINY_DEPTH: f64 = 1e-90;

const RESCALE_ABOVE: f64 = 1e250;
const RESCALE_BY: f64 = 1e-250;

/// `J_n(delta)` for consecutive orders `n_min ..= n_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BesselRow {
    pub delta: f64,
    pub n_min: i64,
    pub n_max: i64,
    pub values: Vec<f64>,
}

impl BesselRow {
    /// Value at order `n`; zero outside the stored range.
    #[inline]
    pub fn get(&self, n: i64) -> f64 {
        if n < self.n_min || n > self.n_max {
            0.0
        } else {
            self.values[(n - self.n_min) as usize]
        }
    }

    pub fn orders(&self) -> std::ops::RangeInclusive<i64> {
        self.n_min..=self.n_max
    }

    pub fn squared_sum(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }
}

pub(crate) fn check_depth(delta: f64) -> Result<()> {
    if !delta.is_finite() || delta < 0.0 {
        return Err(domain(format!(
            "modulation depth must be finite and >= 0, got {delta}"
        )));
    }
    if delta > MAX_DEPTH {
        return Err(domain(format!(
            "modulation depth {delta} exceeds the cap {MAX_DEPTH}"
        )));
    }
    Ok(())
}

fn order_bound(delta: f64) -> i64 {
    (10.0 * (delta + 50.0)) as i64
}

/// Order at which the backward recurrence starts: even, past both the
/// requested top order and the turnover region of width ~ x^{1/3}.
fn start_order(delta: f64, n_top: usize) -> usize {
    let turnover = delta.ceil() as usize;
    let margin = 30 + (12.0 * delta.cbrt()).ceil() as usize;
    let start = n_top.max(turnover) + margin;
    start + (start & 1)
}

/// `J_0(x) ..= J_{n_top}(x)` for `x >= 0` (already validated).
pub(crate) fn nonnegative_orders(delta: f64, n_top: usize) -> Vec<f64> {
    let mut out = vec![0.0; n_top + 1];
    if delta == 0.0 {
        out[0] = 1.0;
        return out;
    }
    if delta < TINY_DEPTH {
        let half = 0.5 * delta;
        let mut term = 1.0;
        for (n, slot) in out.iter_mut().enumerate() {
            if n > 0 {
                term *= half / n as f64;
            }
            *slot = term;
        }
        return out;
    }

    let start = start_order(delta, n_top);
    let two_over_x = 2.0 / delta;
    let mut upper = 0.0; // J_{k+1}
    let mut current = 1e-30; // J_k, arbitrary seed
    let mut even_sum = 0.0;
    if start <= n_top {
        out[start] = current;
    }
    // start is even
    even_sum += 2.0 * current;
    for k in (1..=start).rev() {
        let lower = k as f64 * two_over_x * current - upper;
        upper = current;
        current = lower;
        let order = k - 1;
        if order <= n_top {
            out[order] = current;
        }
        if order % 2 == 0 {
            even_sum += if order == 0 { current } else { 2.0 * current };
        }
        if current.abs() > RESCALE_ABOVE {
            current *= RESCALE_BY;
            upper *= RESCALE_BY;
            even_sum *= RESCALE_BY;
            if order <= n_top {
                for v in out[order..].iter_mut() {
                    *v *= RESCALE_BY;
                }
            }
        }
    }
    let scale = 1.0 / even_sum;
    for v in out.iter_mut() {
        *v *= scale;
    }
    out
}

#[inline]
fn reflect(n: i64, positive_value: f64) -> f64 {
    if n < 0 && n % 2 != 0 {
        -positive_value
    } else {
        positive_value
    }
}

/// Bessel function of the first kind `J_n(delta)`.
///
/// Errors if `delta` is negative, non-finite, above [`MAX_DEPTH`], or if `|n|`
/// exceeds the sanity bound `10 (delta + 50)`.
pub fn bessel_j(n: i64, delta: f64) -> Result<f64> {
    check_depth(delta)?;
    if n.abs() > order_bound(delta) {
        return Err(domain(format!(
            "order {n} is beyond the supported bound for depth {delta}"
        )));
    }
    let top = n.unsigned_abs() as usize;
    let row = nonnegative_orders(delta, top);
    Ok(reflect(n, row[top]))
}

/// `J_n(delta)` for every `n` in `n_min ..= n_max`, from a single recurrence
/// pass.
pub fn bessel_row(delta: f64, n_min: i64, n_max: i64) -> Result<BesselRow> {
    check_depth(delta)?;
    if n_min > n_max {
        return Err(domain(format!("empty order range [{n_min}, {n_max}]")));
    }
    let bound = order_bound(delta);
    if n_min.abs() > bound || n_max.abs() > bound {
        return Err(domain(format!(
            "order range [{n_min}, {n_max}] is beyond the supported bound for depth {delta}"
        )));
    }
    let top = n_min.unsigned_abs().max(n_max.unsigned_abs()) as usize;
    let positive = nonnegative_orders(delta, top);
    let values = (n_min..=n_max)
        .map(|n| reflect(n, positive[n.unsigned_abs() as usize]))
        .collect();
    Ok(BesselRow {
        delta,
        n_min,
        n_max,
        values,
    })
}

/// Smallest `N >= ceil(delta)` such that `sum_{|n| <= N} J_n(delta)^2 >= 1 - epsilon`.
///
/// The scan runs downward over the tail mass `2 sum_{n > N} J_n^2`, which is
/// the same condition without the cancellation in `1 - sum`.
///
/// # Panics
///
/// If `delta` is negative, non-finite or above [`MAX_DEPTH`].
pub fn truncation_order(delta: f64, epsilon: f64) -> usize {
    if let Err(e) = check_depth(delta) {
        panic!("truncation_order: {e}");
    }
    let floor = delta.ceil() as usize;
    if delta == 0.0 {
        return 0;
    }
    let top = floor + 40 + (15.0 * delta.cbrt()).ceil() as usize;
    let row = nonnegative_orders(delta, top);
    let mut tail = 0.0;
    let mut best = top;
    for n in (0..=top).rev() {
        if tail > epsilon {
            break;
        }
        best = n;
        tail += 2.0 * row[n] * row[n];
    }
    best.max(floor)
}
