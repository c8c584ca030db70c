//! Reference computations for test suites.
//!
//! Nothing here shares code with `bfc-walk-core`. Bessel values come either
//! from the power series summed in exact rational arithmetic or from the
//! trapezoid rule applied to the integral representation, and the two-photon
//! amplitudes are propagated photon by photon with the `i^n` factors kept.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Parses a decimal literal such as `"4.6"` into an exact rational.
pub fn exact(decimal: &str) -> BigRational {
    let (neg, body) = match decimal.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, decimal),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    let digits: BigInt = format!("{int}{frac}").parse().expect("decimal literal");
    let scale = num_traits::pow(BigInt::from(10), frac.len());
    let r = BigRational::new(digits, scale);
    if neg {
        -r
    } else {
        r
    }
}

/// `J_n(x)` from `sum_k (-1)^k (x/2)^(n+2k) / (k! (n+k)!)`, summed exactly
/// until the next term drops below `1e-40` and then rounded to `f64`.
pub fn series_j(n: i64, x: &BigRational) -> f64 {
    let order = n.unsigned_abs();
    let half = x / BigRational::from_integer(BigInt::from(2));
    let half_sq = &half * &half;
    // first term: (x/2)^n / n!
    let mut term = BigRational::one();
    for i in 1..=order {
        term = term * &half / BigRational::from_integer(BigInt::from(i));
    }
    let cutoff = BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), 40));
    let mut sum = BigRational::zero();
    let mut k: u64 = 0;
    loop {
        if k.is_multiple_of(2) {
            sum += &term;
        } else {
            sum -= &term;
        }
        k += 1;
        term =
            term * &half_sq / BigRational::from_integer(BigInt::from(k) * BigInt::from(k + order));
        // terms decrease monotonically once k exceeds x/2
        if term.abs() < cutoff && BigRational::from_integer(BigInt::from(k)) > half {
            break;
        }
    }
    let value = sum.to_f64().expect("finite");
    if n < 0 && order % 2 == 1 {
        -value
    } else {
        value
    }
}

/// Series values for every order in `lo..=hi`.
pub fn series_row(x: &BigRational, lo: i64, hi: i64) -> Vec<f64> {
    (lo..=hi).map(|n| series_j(n, x)).collect()
}

/// `J_n(x) = (1/2pi) int_0^{2pi} cos(n t - x sin t) dt` by the trapezoid rule.
///
/// The integrand is smooth and periodic, so the rule converges like
/// `J_{M-|n|}(x)` in the number of nodes `M`; `M` is chosen well past the
/// turnover of both `n` and `x`.
pub fn quadrature_j(n: i64, x: f64) -> f64 {
    let nodes = 2 * (n.unsigned_abs() as usize + x.ceil() as usize) + 128;
    let h = 2.0 * std::f64::consts::PI / nodes as f64;
    let nf = n as f64;
    let mut sum = 0.0;
    let mut comp = 0.0;
    for i in 0..nodes {
        let t = i as f64 * h;
        // Kahan summation keeps the rounding floor near 1e-16
        let y = (nf * t - x * t.sin()).cos() - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    sum / nodes as f64
}

pub fn quadrature_row(x: f64, lo: i64, hi: i64) -> Vec<f64> {
    (lo..=hi).map(|n| quadrature_j(n, x)).collect()
}

/// Bessel values `J_n(x)` over a symmetric window, addressable by signed order.
pub struct Table {
    pub lo: i64,
    pub values: Vec<f64>,
}

impl Table {
    pub fn quadrature(x: f64, half_width: i64) -> Self {
        Table {
            lo: -half_width,
            values: quadrature_row(x, -half_width, half_width),
        }
    }

    pub fn series(x: &BigRational, half_width: i64) -> Self {
        Table {
            lo: -half_width,
            values: series_row(x, -half_width, half_width),
        }
    }

    pub fn get(&self, n: i64) -> f64 {
        let idx = n - self.lo;
        if idx < 0 || idx as usize >= self.values.len() {
            0.0
        } else {
            self.values[idx as usize]
        }
    }
}

/// Smallest `N` with `2 sum_{n>N} J_n^2 <= eps`, scanning tail mass from the
/// top of the table downwards. Returns `None` if the table is too narrow.
pub fn cumulative_truncation(table: &Table, eps: f64) -> Option<i64> {
    let top = table.lo + table.values.len() as i64 - 1;
    let mut tail = 0.0;
    let mut best = None;
    let mut n = top;
    while n >= 0 {
        if tail <= eps {
            best = Some(n);
        } else {
            break;
        }
        let j = table.get(n);
        tail += 2.0 * j * j;
        n -= 1;
    }
    if best == Some(top) {
        None
    } else {
        best
    }
}

/// Dense two-photon output distribution on an explicit `(j, k)` window.
pub struct Joint {
    pub j_lo: i64,
    pub k_lo: i64,
    pub rows: usize,
    pub cols: usize,
    pub probs: Vec<f64>,
}

impl Joint {
    pub fn at(&self, j: i64, k: i64) -> f64 {
        let r = j - self.j_lo;
        let c = k - self.k_lo;
        if r < 0 || c < 0 || r as usize >= self.rows || c as usize >= self.cols {
            return 0.0;
        }
        self.probs[r as usize * self.cols + c as usize]
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// `P(u)` for `u = j + k`, keyed from `u_lo`.
    pub fn transfer(&self) -> (i64, Vec<f64>) {
        let u_lo = self.j_lo + self.k_lo;
        let mut p = vec![0.0; self.rows + self.cols - 1];
        for r in 0..self.rows {
            for c in 0..self.cols {
                p[r + c] += self.probs[r * self.cols + c];
            }
        }
        (u_lo, p)
    }

    pub fn antidiagonal_mass(&self) -> f64 {
        let mut s = 0.0;
        for r in 0..self.rows {
            let j = self.j_lo + r as i64;
            s += self.at(j, -j);
        }
        s
    }
}

fn i_pow(n: i64) -> Complex64 {
    match n.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Pushes every input pair `|m, -m>` (with amplitude `coeffs[m-1]`) through the
/// modulator by scattering each photon independently, `m -> m + n` with
/// amplitude `i^n J_n`, accumulating the output amplitude tensor and
/// returning `|A|^2` on `j in [1-w, d+w]`, `k in [-d-w, w-1]`.
pub fn propagate_pairs(coeffs: &[Complex64], bessel: &Table, w: i64) -> Joint {
    let d = coeffs.len() as i64;
    let j_lo = 1 - w;
    let k_lo = -d - w;
    let rows = (d + 2 * w) as usize;
    let cols = rows;
    let mut amp = vec![Complex64::zero(); rows * cols];
    for (idx, c) in coeffs.iter().enumerate() {
        let m = idx as i64 + 1;
        for r in 0..rows {
            let j = j_lo + r as i64;
            let n = j - m;
            let a_sig = i_pow(n) * bessel.get(n);
            if a_sig == Complex64::zero() {
                continue;
            }
            for col in 0..cols {
                let k = k_lo + col as i64;
                let n2 = k + m;
                let a_idl = i_pow(n2) * bessel.get(n2);
                amp[r * cols + col] += c * a_sig * a_idl;
            }
        }
    }
    Joint {
        j_lo,
        k_lo,
        rows,
        cols,
        probs: amp.iter().map(|a| a.norm_sqr()).collect(),
    }
}

/// `e^{i theta_m} / sqrt(d)` for `theta_m = slope * m` (`m = 1..d`).
pub fn linear_phase_coeffs(d: usize, slope: f64) -> Vec<Complex64> {
    let norm = 1.0 / (d as f64).sqrt();
    (1..=d)
        .map(|m| Complex64::from_polar(norm, slope * m as f64))
        .collect()
}

/// Mean and standard deviation of a distribution over consecutive integers.
pub fn integer_moments(lo: i64, probs: &[f64]) -> (f64, f64) {
    let mut m1 = 0.0;
    let mut m2 = 0.0;
    for (i, p) in probs.iter().enumerate() {
        let u = (lo + i as i64) as f64;
        m1 += u * p;
        m2 += u * u * p;
    }
    (m1, (m2 - m1 * m1).max(0.0).sqrt())
}
