//! Small numerical kernels shared by the physics modules.

use num_complex::Complex64;

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Uniform sampling `x_i = x0 + i·dx`, `i = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct UniformGrid {
    pub x0: f64,
    pub dx: f64,
    pub n: usize,
}

impl UniformGrid {
    pub fn new(x0: f64, dx: f64, n: usize) -> Result<Self> {
        if !(dx.is_finite() && dx > 0.0 && x0.is_finite()) || n < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid needs dx > 0 and at least 2 points, got dx = {dx}, n = {n}"
            )));
        }
        Ok(Self { x0, dx, n })
    }

    /// Grid covering `[lo, hi]` with spacing close to `dx`, hitting both ends.
    pub fn spanning(lo: f64, hi: f64, dx: f64) -> Result<Self> {
        if !(hi > lo) {
            return Err(Error::InvalidParameter(format!("empty grid range [{lo}, {hi}]")));
        }
        let cells = ((hi - lo) / dx).round().max(1.0) as usize;
        Self::new(lo, (hi - lo) / cells as f64, cells + 1)
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + self.dx * i as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    pub fn end(&self) -> f64 {
        self.x(self.n - 1)
    }
}

/// `n` equally spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
                .collect()
        }
    }
}

/// Golden-section search for a maximum of `f` inside `[lo, hi]`.
///
/// Stops when the bracket is narrower than `rel_tol * |x|`. Returns
/// `(x, f(x))`.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, rel_tol: f64) -> (f64, f64) {
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..500 {
        let scale = (0.5 * (lo.abs() + hi.abs())).max(f64::MIN_POSITIVE);
        if (hi - lo) <= rel_tol * scale {
            break;
        }
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = f(d);
        }
    }
    let x = 0.5 * (lo + hi);
    let fx = f(x);
    // the midpoint can lose to the last interior probe when the peak is flat
    let mut best = (x, fx);
    if fc > best.1 {
        best = (c, fc);
    }
    if fd > best.1 {
        best = (d, fd);
    }
    best
}

/// Bisection for a sign change of `f` on `[lo, hi]`, stopping when
/// `hi - lo <= abs_tol`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, abs_tol: f64) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || !flo.is_finite() || !fhi.is_finite() {
        return Err(Error::NoRoot {
            lo,
            hi,
            f_lo: flo,
            f_hi: fhi,
        });
    }
    for _ in 0..400 {
        if hi - lo <= abs_tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Bisection on a positive bracket in log space for a boolean predicate that
/// is false at `lo` and true at `hi`. Returns the transition point to
/// relative precision `rel_tol`.
pub fn bisect_predicate_log<F: Fn(f64) -> Result<bool>>(
    pred: F,
    mut lo: f64,
    mut hi: f64,
    rel_tol: f64,
) -> Result<f64> {
    for _ in 0..400 {
        if (hi - lo) <= rel_tol * lo {
            break;
        }
        let mid = (lo * hi).sqrt();
        if pred(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo * hi).sqrt())
}

/// Composite Simpson's rule on uniformly spaced samples. An even number of
/// samples closes with one trapezoid panel.
pub fn simpson(values: &[Complex64], dx: f64) -> Complex64 {
    let n = values.len();
    if n < 2 {
        return Complex64::new(0.0, 0.0);
    }
    if n == 2 {
        return 0.5 * dx * (values[0] + values[1]);
    }
    let (body, tail) = if n % 2 == 1 { (n, None) } else { (n - 1, Some(n - 2)) };
    let mut acc = values[0] + values[body - 1];
    for (i, v) in values.iter().enumerate().take(body - 1).skip(1) {
        acc += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    let mut total = acc * (dx / 3.0);
    if let Some(i) = tail {
        total += 0.5 * dx * (values[i] + values[i + 1]);
    }
    total
}

pub fn simpson_real(values: &[f64], dx: f64) -> f64 {
    let c: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    simpson(&c, dx).re
}

pub fn trapezoid_real(values: &[f64], dx: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => dx * (0.5 * (values[0] + values[n - 1]) + values[1..n - 1].iter().sum::<f64>()),
    }
}

/// Trapezoid weights for `n` uniform nodes of spacing `h`.
pub fn trapezoid_weights(n: usize, h: f64) -> Vec<f64> {
    (0..n).map(|i| if i == 0 || i + 1 == n { 0.5 * h } else { h }).collect()
}

/// Solve a tridiagonal system with partial pivoting (LAPACK `gtsv` scheme).
/// `sub[i]` couples row i+1 to column i, `sup[i]` couples row i to column i+1.
pub fn solve_tridiagonal(
    sub: &[Complex64],
    diag: &[Complex64],
    sup: &[Complex64],
    rhs: &[Complex64],
) -> Result<Vec<Complex64>> {
    let n = diag.len();
    if sub.len() + 1 != n || sup.len() + 1 != n || rhs.len() != n {
        return Err(Error::GridMismatch("tridiagonal band lengths".into()));
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut d = diag.to_vec();
    let mut du = sup.to_vec();
    let mut dl = sub.to_vec();
    let mut du2 = vec![zero; n.saturating_sub(2)];
    let mut b = rhs.to_vec();
    for i in 0..n.saturating_sub(1) {
        if d[i].norm() >= dl[i].norm() {
            if d[i] == zero {
                return Err(Error::InvalidParameter("singular tridiagonal matrix".into()));
            }
            let fact = dl[i] / d[i];
            dl[i] = fact;
            d[i + 1] -= fact * du[i];
            b[i + 1] = b[i + 1] - fact * b[i];
            if i + 2 < n {
                du2[i] = zero;
            }
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = fact;
            let temp = du[i];
            du[i] = d[i + 1];
            d[i + 1] = temp - fact * d[i + 1];
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du[i + 1];
            }
            b.swap(i, i + 1);
            b[i + 1] = b[i + 1] - fact * b[i];
        }
    }
    if d[n - 1] == zero {
        return Err(Error::InvalidParameter("singular tridiagonal matrix".into()));
    }
    let mut x = b;
    x[n - 1] /= d[n - 1];
    if n > 1 {
        x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
    }
    Ok(x)
}

/// Newton iteration in the complex plane with a central-difference
/// derivative, step `h = 1e-6 · max(1, |z|)`.
pub fn complex_newton<F: Fn(Complex64) -> Result<Complex64>>(
    f: F,
    seed: Complex64,
    tol: f64,
    max_iter: usize,
    context: &str,
) -> Result<Complex64> {
    let mut z = seed;
    for _ in 0..max_iter {
        let h = 1e-6 * z.norm().max(1.0);
        let fz = f(z)?;
        let dp = f(z + h)?;
        let dm = f(z - h)?;
        let deriv = (dp - dm) / (2.0 * h);
        if deriv.norm() == 0.0 || !deriv.is_finite() {
            break;
        }
        let mut step = fz / deriv;
        // keep wild first steps from leaving the basin
        let cap = 0.5 * z.norm().max(1.0);
        if step.norm() > cap {
            step *= cap / step.norm();
        }
        z -= step;
        if step.norm() < tol {
            return Ok(z);
        }
    }
    Err(Error::NonConvergence {
        context: context.to_string(),
        iterations: max_iter,
        last: z,
    })
}
