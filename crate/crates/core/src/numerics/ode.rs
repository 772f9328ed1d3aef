use crate::error::{LabError, Result};

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Adaptive Dormand–Prince 5(4) integrator that keeps its step size between
/// calls to [`Dopri5::advance`].
#[derive(Debug, Clone)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    step: f64,
}

impl Dopri5 {
    pub fn new(rtol: f64, atol: f64) -> Self {
        Self {
            rtol,
            atol,
            max_steps: 1_000_000,
            step: 0.0,
        }
    }

    /// Integrate `y' = f(t, y)` from `t` to `t_end` in place.
    ///
    /// `f` may return an error string (e.g. a square root of a negative
    /// number), which aborts the integration.
    pub fn advance<F>(&mut self, f: &F, t: &mut f64, y: &mut [f64], t_end: f64) -> Result<()>
    where
        F: Fn(f64, &[f64], &mut [f64]) -> std::result::Result<(), String>,
    {
        let n = y.len();
        let dir = (t_end - *t).signum();
        if dir == 0.0 {
            return Ok(());
        }
        let fail = |x: f64, reason: String| LabError::ProfileIntegration { x, reason };
        if self.step == 0.0 {
            self.step = 1e-3 * (t_end - *t).abs().max(1e-6);
        }
        let mut k = vec![vec![0.0; n]; 7];
        let mut tmp = vec![0.0; n];
        let mut steps = 0usize;
        while (t_end - *t) * dir > 0.0 {
            steps += 1;
            if steps > self.max_steps {
                return Err(fail(*t, "step budget exhausted".into()));
            }
            let h = self.step.min((t_end - *t).abs()) * dir;
            f(*t, y, &mut k[0]).map_err(|e| fail(*t, e))?;
            for s in 1..7 {
                for i in 0..n {
                    tmp[i] = y[i] + h * (0..s).map(|j| A[s][j] * k[j][i]).sum::<f64>();
                }
                f(*t + C[s] * h, &tmp, &mut k[s]).map_err(|e| fail(*t + C[s] * h, e))?;
            }
            let mut err = 0.0f64;
            let mut y5 = vec![0.0; n];
            for i in 0..n {
                let mut d5 = 0.0;
                let mut d4 = 0.0;
                for s in 0..7 {
                    d5 += B5[s] * k[s][i];
                    d4 += B4[s] * k[s][i];
                }
                y5[i] = y[i] + h * d5;
                let sc = self.atol + self.rtol * y[i].abs().max(y5[i].abs());
                err = err.max((h * (d5 - d4)).abs() / sc);
            }
            if !err.is_finite() {
                self.step *= 0.25;
                continue;
            }
            if err <= 1.0 {
                *t += h;
                if (t_end - *t) * dir <= 1e-14 * t_end.abs().max(1.0) {
                    *t = t_end;
                }
                y.copy_from_slice(&y5);
            }
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            // Only grow the stored step from a full step, so that the final
            // clipped step of an interval does not shrink the next one.
            if err > 1.0 || h.abs() >= self.step * 0.999 || factor < 1.0 {
                self.step = h.abs() * factor;
            }
            if self.step < 1e-14 * t.abs().max(1.0) {
                return Err(fail(*t, "step size underflow".into()));
            }
        }
        Ok(())
    }
}
