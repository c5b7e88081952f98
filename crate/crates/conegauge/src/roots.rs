//! Scalar root-finding kernels shared by the projection routines.

use crate::error::{Error, Result};

/// Brent's method on a bracket `[a, b]` with `f(a)` and `f(b)` of opposite sign.
pub(crate) fn brent<F: FnMut(f64) -> f64>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    xtol: f64,
    max_iter: usize,
    what: &'static str,
) -> Result<f64> {
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Numerical {
            what,
            iterations: 0,
            residual: fa.abs().min(fb.abs()),
        });
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
    }
    Err(Error::Numerical {
        what,
        iterations: max_iter,
        residual: fb.abs(),
    })
}

/// Solves `s + c·s^e = a` for `s ∈ [0, a]` (with `a, c ≥ 0`, `e > 0`).
///
/// Newton from an upper bound on a convex increasing function converges
/// monotonically; for `e < 1` the substitution `u = s^e` restores convexity.
pub(crate) fn power_shrink(a: f64, c: f64, e: f64) -> f64 {
    if a <= 0.0 {
        return 0.0;
    }
    if c <= 0.0 {
        return a;
    }
    if e == 1.0 {
        return a / (1.0 + c);
    }
    if e > 1.0 {
        let mut s = a.min((a / c).powf(1.0 / e));
        for _ in 0..200 {
            let se1 = s.powf(e - 1.0);
            let h = s + c * se1 * s - a;
            if h <= 0.0 {
                break;
            }
            let next = s - h / (1.0 + c * e * se1);
            if !(next < s) || next <= 0.0 {
                break;
            }
            s = next;
        }
        s
    } else {
        let k = 1.0 / e;
        let mut u = a.powf(e).min(a / c);
        for _ in 0..200 {
            let uk1 = u.powf(k - 1.0);
            let h = uk1 * u + c * u - a;
            if h <= 0.0 {
                break;
            }
            let next = u - h / (k * uk1 + c);
            if !(next < u) || next <= 0.0 {
                break;
            }
            u = next;
        }
        u.powf(k)
    }
}

/// Finds a bracket `[lo, hi] ⊂ (0, ∞)` for a decreasing function positive near 0.
pub(crate) fn bracket_decreasing<F: FnMut(f64) -> f64>(
    mut f: F,
    what: &'static str,
) -> Result<(f64, f64)> {
    let mut hi = 1.0;
    let mut fhi = f(hi);
    let mut lo = 1.0;
    if fhi > 0.0 {
        let mut k = 0;
        while fhi > 0.0 {
            lo = hi;
            hi *= 4.0;
            fhi = f(hi);
            k += 1;
            if k > 600 || !hi.is_finite() {
                return Err(Error::Numerical {
                    what,
                    iterations: k,
                    residual: fhi,
                });
            }
        }
    } else {
        let mut k = 0;
        let mut flo = fhi;
        while flo <= 0.0 {
            hi = lo;
            lo *= 0.25;
            flo = f(lo);
            k += 1;
            if k > 600 || lo == 0.0 {
                return Ok((0.0, hi));
            }
        }
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_finds_cubic_root() {
        let r = brent(|x| x * x * x - 2.0, 0.0, 2.0, 1e-15, 100, "cubic").unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-14);
    }

    #[test]
    fn power_shrink_residuals() {
        for &(a, c, e) in &[
            (1.0, 0.5, 2.0),
            (3.0, 1e8, 5.0),
            (0.2, 3.0, 0.5),
            (2.0, 1e-9, 0.25),
            (1.0, 1e6, 0.1),
        ] {
            let s = power_shrink(a, c, e);
            let r = s + c * s.powf(e) - a;
            assert!(r.abs() <= 1e-12 * a, "{a} {c} {e}: s={s} r={r}");
        }
    }
}
