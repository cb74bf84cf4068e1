//! Globally adaptive Gauss–Kronrod (7/15) quadrature and a polar-coordinate
//! wedge integrator for planar densities.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{invalid, Error, Result};

/// Tolerances and subdivision budget for the adaptive integrators.
///
/// An estimate is accepted once its error bound is at most
/// `max(absolute_tolerance, relative_tolerance * |estimate|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub relative_tolerance: f64,
    pub absolute_tolerance: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            relative_tolerance: 1e-10,
            absolute_tolerance: 1e-12,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureSpec {
    pub fn new(relative_tolerance: f64, absolute_tolerance: f64, max_subdivisions: usize) -> Result<Self> {
        let spec = Self {
            relative_tolerance,
            absolute_tolerance,
            max_subdivisions,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.relative_tolerance > 0.0 && self.absolute_tolerance > 0.0) {
            return Err(invalid(format!(
                "quadrature tolerances must be positive (rel {}, abs {})",
                self.relative_tolerance, self.absolute_tolerance
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(invalid("max_subdivisions must be at least 1"));
        }
        Ok(())
    }

    fn target(&self, estimate: f64) -> f64 {
        self.absolute_tolerance.max(self.relative_tolerance * estimate.abs())
    }
}

/// A converged integral together with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error_bound: f64,
    pub subdivisions: usize,
}

// Kronrod abscissae (descending, last is the midpoint) and weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = kronrod.abs();
    let mut fv = [(0.0, 0.0); 7];
    for (j, &x) in XGK[..7].iter().enumerate() {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
        fv[j] = (f1, f2);
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for (j, &(f1, f2)) in fv.iter().enumerate() {
        asc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
    }
    let value = kronrod * half;
    let asc = asc * half.abs();
    let abs_sum = abs_sum * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    let roundoff = 50.0 * f64::EPSILON * abs_sum;
    if abs_sum > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(roundoff);
    }
    Panel { a, b, value, error }
}

/// Integrates `f` over the finite interval `[a, b]`.
///
/// Panels are bisected worst-first until the summed error bound meets the
/// tolerance. Running out of subdivisions yields [`Error::NotConverged`] with
/// the best estimate attached.
pub fn integrate_1d<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Integral> {
    spec.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(invalid(format!("integration limits must be finite, got [{a}, {b}]")));
    }
    if a == b {
        return Ok(Integral {
            value: 0.0,
            error_bound: 0.0,
            subdivisions: 0,
        });
    }
    let first = kronrod15(&f, a, b);
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut subdivisions = 0;
    loop {
        if !value.is_finite() {
            return Err(invalid("integrand produced a non-finite value"));
        }
        if error <= spec.target(value) {
            return Ok(Integral {
                value,
                error_bound: error,
                subdivisions,
            });
        }
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::NotConverged {
                estimate: value,
                error_bound: error,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        let left = kronrod15(&f, worst.a, mid);
        let right = kronrod15(&f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
        // Re-sum periodically so cancellation in the running totals cannot drift.
        if subdivisions % 64 == 0 {
            value = heap.iter().map(|p| p.value).sum();
            error = heap.iter().map(|p| p.error).sum();
        }
    }
}

/// A probability density on the plane with a known radius beyond which its
/// mass is negligible.
pub trait PlanarDensity {
    fn density(&self, x: f64, p: f64) -> f64;

    /// Radius (about the origin) outside which the density may be ignored.
    fn radial_cutoff(&self) -> f64;
}

/// Mass of `density` inside the wedge `{ (r cos t, r sin t) : r > 0, |t| < half_angle }`.
///
/// For `half_angle <= π/2` this is `{x > 0, |p| < tan(half_angle) x}`;
/// `half_angle = π` covers the whole plane. The integral runs over the angle
/// outside and the radius inside, truncated at [`PlanarDensity::radial_cutoff`].
pub fn integrate_2d_wedge<D: PlanarDensity + ?Sized>(
    density: &D,
    half_angle: f64,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    spec.validate()?;
    if !(half_angle > 0.0 && half_angle <= std::f64::consts::PI) {
        return Err(invalid(format!("wedge half-angle must lie in (0, π], got {half_angle}")));
    }
    let cutoff = density.radial_cutoff();
    if !(cutoff > 0.0 && cutoff.is_finite()) {
        return Err(invalid(format!("radial cutoff must be positive and finite, got {cutoff}")));
    }
    let inner_spec = QuadratureSpec {
        relative_tolerance: 0.1 * spec.relative_tolerance,
        absolute_tolerance: 0.1 * spec.absolute_tolerance / (2.0 * half_angle),
        max_subdivisions: spec.max_subdivisions,
    };
    // The outer integrand cannot return a Result, so the first inner failure is
    // stashed and re-raised after the outer pass.
    let failure = std::cell::RefCell::new(None);
    let radial = |theta: f64| -> f64 {
        let (s, c) = theta.sin_cos();
        match integrate_1d(|r| r * density.density(r * c, r * s), 0.0, cutoff, &inner_spec) {
            Ok(v) => v.value,
            Err(e) => {
                let mut slot = failure.borrow_mut();
                if slot.is_none() {
                    *slot = Some(e);
                }
                0.0
            }
        }
    };
    let outer = integrate_1d(radial, -half_angle, half_angle, spec);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    outer
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn constant_and_cosine() {
        let one = integrate_1d(|_| 1.0, 0.0, 1.0, &spec()).unwrap();
        assert!((one.value - 1.0).abs() < 1e-15);
        let two = integrate_1d(f64::cos, -FRAC_PI_2, FRAC_PI_2, &spec()).unwrap();
        assert!((two.value - 2.0).abs() < 1e-13);
    }

    #[test]
    fn normal_pdf_normalization() {
        let pdf = |x: f64| (-0.5 * x * x).exp() / (2.0 * PI).sqrt();
        let got = integrate_1d(pdf, -8.0, 8.0, &spec()).unwrap();
        assert!((got.value - 1.0).abs() < 1e-10, "{}", got.value);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let got = integrate_1d(|x| x * x, 1.0, 0.0, &spec()).unwrap();
        assert!((got.value + 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn non_convergence_carries_estimate() {
        let tight = QuadratureSpec::new(1e-15, 1e-300, 2).unwrap();
        match integrate_1d(|x: f64| (50.0 * x).sin().abs(), 0.0, 10.0, &tight) {
            Err(Error::NotConverged { estimate, subdivisions, .. }) => {
                assert_eq!(subdivisions, 2);
                assert!(estimate.is_finite());
            }
            other => panic!("expected NotConverged, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_spec() {
        assert!(QuadratureSpec::new(0.0, 1e-10, 10).is_err());
        assert!(QuadratureSpec::new(1e-10, -1.0, 10).is_err());
        assert!(QuadratureSpec::new(1e-10, 1e-10, 0).is_err());
    }

    struct Isotropic {
        sigma: f64,
    }

    impl PlanarDensity for Isotropic {
        fn density(&self, x: f64, p: f64) -> f64 {
            let s2 = self.sigma * self.sigma;
            (-(x * x + p * p) / (2.0 * s2)).exp() / (2.0 * PI * s2)
        }
        fn radial_cutoff(&self) -> f64 {
            10.0 * self.sigma
        }
    }

    #[test]
    fn wedge_of_isotropic_density() {
        for sigma in [0.1, 0.5, 1.0, 3.0] {
            let d = Isotropic { sigma };
            let third = integrate_2d_wedge(&d, FRAC_PI_3, &spec()).unwrap().value;
            assert!((third - 1.0 / 3.0).abs() < 1e-8, "sigma {sigma}: {third}");
            let half = integrate_2d_wedge(&d, FRAC_PI_2, &spec()).unwrap().value;
            assert!((half - 0.5).abs() < 1e-8);
            let all = integrate_2d_wedge(&d, PI, &spec()).unwrap().value;
            assert!((all - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn wedge_rejects_bad_angle() {
        let d = Isotropic { sigma: 1.0 };
        assert!(integrate_2d_wedge(&d, 0.0, &spec()).is_err());
        assert!(integrate_2d_wedge(&d, 4.0, &spec()).is_err());
    }
}
