use crate::error::{LabError, Result};

/// Root of `f` in `[lo, hi]` by the Illinois variant of regula falsi, falling
/// back to bisection when the bracket stops shrinking.
pub fn find_root(f: impl Fn(f64) -> f64, bracket: [f64; 2], tol: f64) -> Result<f64> {
    let [mut a, mut b] = bracket;
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if (fa * fb).is_nan() || fa * fb >= 0.0 {
        return Err(LabError::Bracketing {
            lo: a,
            hi: b,
            f_lo: fa,
            f_hi: fb,
        });
    }
    let tol = tol.max(4.0 * f64::EPSILON * a.abs().max(b.abs()));
    // +1 / -1: which end was retained last, for the Illinois halving.
    let mut side = 0i8;
    for _ in 0..400 {
        if (b - a).abs() <= tol {
            break;
        }
        let width = (b - a).abs();
        let mut c = (a * fb - b * fa) / (fb - fa);
        if !c.is_finite() || c <= a.min(b) || c >= a.max(b) {
            c = 0.5 * (a + b);
        }
        let fc = f(c);
        if fc == 0.0 {
            return Ok(c);
        }
        if fc * fb < 0.0 {
            a = b;
            fa = fb;
            b = c;
            fb = fc;
            side = 0;
        } else {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        }
        if (b - a).abs() > 0.5 * width {
            let m = 0.5 * (a + b);
            let fm = f(m);
            if fm == 0.0 {
                return Ok(m);
            }
            if fm * fb < 0.0 {
                a = m;
                fa = fm;
            } else {
                b = m;
                fb = fm;
            }
            side = 0;
        }
    }
    Ok(if fa.abs() < fb.abs() { a } else { b })
}
