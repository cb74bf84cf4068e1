//! Bracketing root finding and one-dimensional minimization.

use crate::error::{invalid, Error, Result};

/// Bisection on `[lo, hi]`; stops once the bracket is narrower than `tol`
/// and returns its midpoint.
pub fn find_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(invalid(format!("root tolerance must be positive, got {tol}")));
    }
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if !(f_lo.signum() != f_hi.signum()) || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::NoSignChange { lo, hi, f_lo, f_hi });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Golden-section search for the minimizer of a unimodal `f` on `[lo, hi]`,
/// to a bracket width of `tol`.
pub fn minimize_golden<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(invalid(format!("search tolerance must be positive, got {tol}")));
    }
    if !(lo <= hi) {
        return Err(invalid(format!("empty search interval [{lo}, {hi}]")));
    }
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    // The endpoints are candidates too: the bracket never evaluates them.
    let mid = 0.5 * (a + b);
    let best = [(lo, f(lo)), (mid, f(mid)), (hi, f(hi))]
        .into_iter()
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .map(|(x, _)| x)
        .unwrap_or(mid);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_and_quadratic_roots() {
        let one = find_root(|x| x - 1.0, 0.0, 2.0, 1e-12).unwrap();
        assert!((one - 1.0).abs() < 1e-12);
        let sqrt2 = find_root(|x| x * x - 2.0, 0.0, 2.0, 1e-12).unwrap();
        assert!((sqrt2 - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn no_sign_change_is_an_error() {
        assert!(matches!(
            find_root(|x| x * x + 1.0, -1.0, 1.0, 1e-9),
            Err(Error::NoSignChange { .. })
        ));
    }

    #[test]
    fn golden_section_finds_parabola_vertex() {
        let x = minimize_golden(|x| (x - 0.3).powi(2), 0.0, 1.0, 1e-10).unwrap();
        assert!((x - 0.3).abs() < 1e-9);
        // monotone: minimum at the boundary
        let x = minimize_golden(|x| x, 0.0, 1.0, 1e-10).unwrap();
        assert_eq!(x, 0.0);
    }
}
