use crate::error::{Error, Result};

/// Band around zero treated as a crossing when counting sign changes.
pub const ZERO_BAND: f64 = 1e-12;

/// End state of `m phi'' + c(t) phi = 0`, `phi(t0) = 0`, `phi'(t0) = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeEnd {
    pub phi: f64,
    pub dphi: f64,
    /// Sign changes of `phi` on `(t0, t1]`.
    pub zero_count: u32,
}

/// Classical RK4 for the Jacobi-field equation.
pub fn integrate_ode_2nd(
    c: &dyn Fn(f64) -> f64,
    m: f64,
    t0: f64,
    t1: f64,
    steps: usize,
) -> Result<OdeEnd> {
    let traj = rk4_linear(c, m, t0, t1, steps, [0.0, 1.0])?;
    let (phi, dphi) = *traj.last().unwrap();
    let zero_count = count_zeros(traj.iter().skip(1).map(|s| s.0), (t1 - t0).signum());
    Ok(OdeEnd { phi, dphi, zero_count })
}

/// Trajectory `(y, y')` at `steps + 1` equally spaced times for
/// `m y'' + c(t) y = 0` from the given initial state.
pub fn rk4_linear(
    c: &dyn Fn(f64) -> f64,
    m: f64,
    t0: f64,
    t1: f64,
    steps: usize,
    init: [f64; 2],
) -> Result<Vec<(f64, f64)>> {
    rk4_forced(c, &|_| 0.0, m, t0, t1, steps, init)
}

/// Like [`rk4_linear`] with a source: `m y'' + c(t) y = f(t)`.
pub fn rk4_forced(
    c: &dyn Fn(f64) -> f64,
    f: &dyn Fn(f64) -> f64,
    m: f64,
    t0: f64,
    t1: f64,
    steps: usize,
    init: [f64; 2],
) -> Result<Vec<(f64, f64)>> {
    if steps < 16 {
        return Err(Error::InvalidParameter(format!("steps = {steps} < 16")));
    }
    if !(m > 0.0) {
        return Err(Error::InvalidParameter(format!("mass {m} must be positive")));
    }
    let h = (t1 - t0) / steps as f64;
    let rhs = |t: f64, y: [f64; 2]| [y[1], (f(t) - c(t) * y[0]) / m];
    let mut y = init;
    let mut out = Vec::with_capacity(steps + 1);
    out.push((y[0], y[1]));
    for k in 0..steps {
        let t = t0 + k as f64 * h;
        let k1 = rhs(t, y);
        let k2 = rhs(t + h / 2.0, [y[0] + h / 2.0 * k1[0], y[1] + h / 2.0 * k1[1]]);
        let k3 = rhs(t + h / 2.0, [y[0] + h / 2.0 * k2[0], y[1] + h / 2.0 * k2[1]]);
        let k4 = rhs(t + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        for j in 0..2 {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        if !(y[0].is_finite() && y[1].is_finite()) {
            return Err(Error::NonFinite("rk4"));
        }
        out.push((y[0], y[1]));
    }
    Ok(out)
}

/// Counts strict sign changes; a value inside the zero band counts once as a
/// crossing, however long the sequence lingers there.
pub fn count_zeros(values: impl Iterator<Item = f64>, initial_sign: f64) -> u32 {
    let mut prev = if initial_sign < 0.0 { -1.0 } else { 1.0 };
    let mut in_band = false;
    let mut count = 0;
    for v in values {
        if v.abs() < ZERO_BAND {
            if !in_band {
                count += 1;
                in_band = true;
            }
        } else {
            let s = v.signum();
            if in_band {
                in_band = false;
            } else if s != prev {
                count += 1;
            }
            prev = s;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_particle() {
        let r = integrate_ode_2nd(&|_| 0.0, 1.0, 0.0, 2.5, 64).unwrap();
        assert!((r.phi - 2.5).abs() < 1e-13);
        assert!((r.dphi - 1.0).abs() < 1e-13);
        assert_eq!(r.zero_count, 0);
    }

    #[test]
    fn oscillator_matches_sine() {
        let (m, w) = (1.3, 0.9);
        let t = 2.0;
        let r = integrate_ode_2nd(&|_| m * w * w, m, 0.0, t, 2000).unwrap();
        assert!((r.phi - (w * t).sin() / w).abs() < 1e-11);
        assert!((r.dphi - (w * t).cos()).abs() < 1e-11);
        assert_eq!(r.zero_count, 0);
    }

    #[test]
    fn zero_counts_follow_sine_zeros() {
        for &(wt, expect) in &[(1.5 * std::f64::consts::PI, 1), (2.5 * std::f64::consts::PI, 2)] {
            let r = integrate_ode_2nd(&|_| 1.0, 1.0, 0.0, wt, 4000).unwrap();
            assert_eq!(r.zero_count, expect);
        }
    }

    #[test]
    fn rk4_order_is_four() {
        let t: f64 = 3.0;
        let exact = t.sin();
        let errs: Vec<f64> = [40usize, 80, 160, 320]
            .iter()
            .map(|&n| (integrate_ode_2nd(&|_| 1.0, 1.0, 0.0, t, n).unwrap().phi - exact).abs())
            .collect();
        let slope = (errs[3].ln() - errs[0].ln()) / (320f64.ln() - 40f64.ln());
        assert!((slope + 4.0).abs() < 0.2, "slope {slope}");
    }

    #[test]
    fn grazing_zero_counts_once() {
        let v = [1.0, 1e-13, -1e-14, 2e-13, -1.0, -2.0];
        assert_eq!(count_zeros(v.into_iter(), 1.0), 1);
        let w = [1.0, -1.0, 1.0];
        assert_eq!(count_zeros(w.into_iter(), 1.0), 2);
    }

    #[test]
    fn too_few_steps() {
        assert!(integrate_ode_2nd(&|_| 0.0, 1.0, 0.0, 1.0, 8).is_err());
    }
}
