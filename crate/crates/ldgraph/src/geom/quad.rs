//! Adaptive Simpson quadrature over a piecewise-smooth integrand.
//!
//! The region measure integrates the section-length function of a
//! planar region along x. That function is smooth except at circle
//! extents (square-root kinks) and chord crossings; callers pass the
//! known kink abscissas as seed points and each smooth segment is
//! integrated adaptively with its share of the absolute tolerance.

/// Hard cap on function evaluations; past it the current refinement is
/// returned. Generous: the region integrands converge many orders of
/// magnitude earlier.
const MAX_EVALS: usize = 8_000_000;
const MAX_DEPTH: u32 = 48;

struct Quad<'a, F: Fn(f64) -> f64> {
    f: &'a F,
    evals: usize,
}

impl<F: Fn(f64) -> f64> Quad<'_, F> {
    fn eval(&mut self, x: f64) -> f64 {
        self.evals += 1;
        (self.f)(x)
    }

    fn simpson(a: f64, fa: f64, fm: f64, fb: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }

    #[allow(clippy::too_many_arguments)]
    fn refine(&mut self, a: f64, fa: f64, m: f64, fm: f64, b: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = self.eval(lm);
        let frm = self.eval(rm);
        let left = Self::simpson(a, fa, flm, fm, m);
        let right = Self::simpson(m, fm, frm, fb, b);
        let delta = left + right - whole;
        if depth >= MAX_DEPTH || self.evals > MAX_EVALS || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        self.refine(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1)
            + self.refine(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1)
    }
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`, splitting
/// first at the sorted `seeds` (kink abscissas); seeds outside `(a, b)`
/// are ignored.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, seeds: &[f64]) -> f64 {
    if a.is_nan() || b.is_nan() || b <= a {
        return 0.0;
    }
    let mut cuts = vec![a];
    for &s in seeds {
        if s > a + 1e-13 && s < b - 1e-13 {
            cuts.push(s);
        }
    }
    cuts.push(b);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|x, y| (*x - *y).abs() < 1e-13);

    let width = b - a;
    let mut q = Quad { f, evals: 0 };
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let seg_tol = tol * ((hi - lo) / width).max(1e-6);
        let m = 0.5 * (lo + hi);
        let (flo, fm, fhi) = (q.eval(lo), q.eval(m), q.eval(hi));
        let whole = Quad::<F>::simpson(lo, flo, fm, fhi, hi);
        total += q.refine(lo, flo, m, fm, hi, fhi, whole, seg_tol, 0);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let f = |x: f64| 3.0 * x * x;
        assert!((integrate(&f, 0.0, 2.0, 1e-9, &[]) - 8.0).abs() < 1e-9);
    }

    #[test]
    fn disk_section_integral_gives_area() {
        // Chord length of the unit disk: 2 sqrt(1 - x^2); integral = pi.
        let f = |x: f64| {
            let v: f64 = 1.0 - x * x;
            2.0 * v.max(0.0).sqrt()
        };
        let area = integrate(&f, -1.0, 1.0, 1e-7, &[]);
        assert!((area - PI).abs() < 1e-6, "area = {area}");
    }

    #[test]
    fn seeds_isolate_kinks() {
        // Two tangent unit disks; the section function has kinks at 0.
        let f = |x: f64| {
            let left: f64 = 1.0 - (x + 1.0) * (x + 1.0);
            let right: f64 = 1.0 - (x - 1.0) * (x - 1.0);
            2.0 * (left.max(0.0).sqrt() + right.max(0.0).sqrt())
        };
        let area = integrate(&f, -2.0, 2.0, 1e-7, &[0.0]);
        assert!((area - 2.0 * PI).abs() < 2e-6, "area = {area}");
    }
}
