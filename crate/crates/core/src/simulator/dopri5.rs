//! Dormand–Prince 5(4) integrator with step-size control and a continuous
//! 4th-order extension for dense output.

use crate::{Error, Real, Result};

/// Tolerances and step limits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorSettings<T> {
    pub rtol: T,
    pub atol: T,
    /// Upper bound on the step size; `None` means a tenth of the interval.
    pub max_step: Option<T>,
    /// First trial step; `None` selects it automatically.
    pub initial_step: Option<T>,
    pub max_steps: usize,
}

impl<T: Real> Default for IntegratorSettings<T> {
    fn default() -> Self {
        Self { rtol: T::c(1e-3), atol: T::c(1e-6), max_step: None, initial_step: None, max_steps: 1_000_000 }
    }
}

impl<T: Real> IntegratorSettings<T> {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &'static str, v: T| {
            if v > T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter { name, reason: format!("must be positive and finite, got {v}") })
            }
        };
        positive("rtol", self.rtol)?;
        positive("atol", self.atol)?;
        if let Some(h) = self.max_step {
            positive("max_step", h)?;
        }
        if let Some(h) = self.initial_step {
            positive("initial_step", h)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IntegratorStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Adaptive stepper for `y' = f(t, y)`.
///
/// `f` writes the derivative into its output slice and may fail; failures
/// abort the step and are returned unchanged.
#[derive(Clone, Debug)]
pub struct Dopri5<T> {
    settings: IntegratorSettings<T>,
    max_step: T,
    t: T,
    t_old: T,
    y: Vec<T>,
    h: T,
    /// Derivative at `(t, y)`, reused as the first stage (FSAL).
    f0: Vec<T>,
    /// Dense output coefficients of the last accepted step.
    cont: [Vec<T>; 5],
    h_last: T,
    stats: IntegratorStats,
}

impl<T: Real> Dopri5<T> {
    pub fn new<F>(f: &mut F, t0: T, y0: Vec<T>, t_end: T, settings: IntegratorSettings<T>) -> Result<Self>
    where
        F: FnMut(T, &[T], &mut [T]) -> Result<()>,
    {
        settings.validate()?;
        if y0.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("initial state"));
        }
        let span = (t_end - t0).abs();
        let max_step = settings.max_step.unwrap_or(span * T::c(0.1)).max(T::epsilon());
        let dim = y0.len();
        let mut f0 = vec![T::zero(); dim];
        f(t0, &y0, &mut f0)?;
        let mut stepper = Self {
            settings,
            max_step,
            t: t0,
            t_old: t0,
            h: T::zero(),
            cont: [y0.clone(), vec![T::zero(); dim], vec![T::zero(); dim], vec![T::zero(); dim], vec![T::zero(); dim]],
            y: y0,
            f0,
            h_last: T::zero(),
            stats: IntegratorStats { evaluations: 1, ..Default::default() },
        };
        stepper.h = match settings.initial_step {
            Some(h) => h.min(max_step),
            None => stepper.initial_step(f)?,
        };
        Ok(stepper)
    }

    pub fn t(&self) -> T {
        self.t
    }

    pub fn y(&self) -> &[T] {
        &self.y
    }

    /// Derivative at the current point.
    pub fn derivative(&self) -> &[T] {
        &self.f0
    }

    /// Start of the last accepted step.
    pub fn t_old(&self) -> T {
        self.t_old
    }

    pub fn stats(&self) -> IntegratorStats {
        self.stats
    }

    fn scale(&self, a: T, b: T) -> T {
        self.settings.atol + self.settings.rtol * a.abs().max(b.abs())
    }

    fn initial_step<F>(&mut self, f: &mut F) -> Result<T>
    where
        F: FnMut(T, &[T], &mut [T]) -> Result<()>,
    {
        let n = T::c(self.y.len().max(1) as f64);
        let (mut dnf, mut dny) = (T::zero(), T::zero());
        for (y, d) in self.y.iter().zip(&self.f0) {
            let sk = self.scale(*y, *y);
            dnf += (*d / sk) * (*d / sk);
            dny += (*y / sk) * (*y / sk);
        }
        let (dnf, dny) = (dnf / n, dny / n);
        let mut h = if dnf <= T::c(1e-10) || dny <= T::c(1e-10) { T::c(1e-6) } else { (dny / dnf).sqrt() * T::c(0.01) };
        h = h.min(self.max_step);
        let y1: Vec<T> = self.y.iter().zip(&self.f0).map(|(y, d)| *y + h * *d).collect();
        let mut f1 = vec![T::zero(); y1.len()];
        f(self.t + h, &y1, &mut f1)?;
        self.stats.evaluations += 1;
        let mut der2 = T::zero();
        for ((y, a), b) in self.y.iter().zip(&self.f0).zip(&f1) {
            let sk = self.scale(*y, *y);
            der2 += ((*b - *a) / sk) * ((*b - *a) / sk);
        }
        let der2 = (der2 / n).sqrt() / h;
        let der12 = der2.max(dnf.sqrt());
        let h1 = if der12 <= T::c(1e-15) { T::c(1e-6).max(h * T::c(1e-3)) } else { (T::c(0.01) / der12).powf(T::c(0.2)) };
        Ok((h * T::c(100.0)).min(h1).min(self.max_step))
    }

    /// Advances by one accepted step, never past `t_end`.
    pub fn step<F>(&mut self, f: &mut F, t_end: T) -> Result<()>
    where
        F: FnMut(T, &[T], &mut [T]) -> Result<()>,
    {
        let dim = self.y.len();
        let c = T::c;
        let mut k = vec![vec![T::zero(); dim]; 7];
        let mut tmp = vec![T::zero(); dim];
        let mut y_new = vec![T::zero(); dim];
        let mut rejected_last = false;
        loop {
            if self.stats.accepted + self.stats.rejected >= self.settings.max_steps {
                return Err(Error::TooManySteps(self.settings.max_steps));
            }
            let remaining = t_end - self.t;
            let mut h = self.h.min(self.max_step);
            let last = h >= remaining;
            if last {
                h = remaining;
            }
            let min_step = T::c(16.0) * T::epsilon() * self.t.abs().max(T::one());
            if h < min_step {
                return Err(Error::StepSizeUnderflow { t: self.t.as_f64(), step: h.as_f64() });
            }
            let (t, y) = (self.t, &self.y);
            k[0].copy_from_slice(&self.f0);

            let stage = |coeffs: &[(usize, f64)], k: &[Vec<T>], out: &mut [T]| {
                for i in 0..dim {
                    let mut acc = T::zero();
                    for &(j, a) in coeffs {
                        acc += c(a) * k[j][i];
                    }
                    out[i] = y[i] + h * acc;
                }
            };
            stage(&[(0, A21)], &k, &mut tmp);
            f(t + c(C2) * h, &tmp, &mut k[1])?;
            stage(&[(0, A31), (1, A32)], &k, &mut tmp);
            f(t + c(C3) * h, &tmp, &mut k[2])?;
            stage(&[(0, A41), (1, A42), (2, A43)], &k, &mut tmp);
            f(t + c(C4) * h, &tmp, &mut k[3])?;
            stage(&[(0, A51), (1, A52), (2, A53), (3, A54)], &k, &mut tmp);
            f(t + c(C5) * h, &tmp, &mut k[4])?;
            stage(&[(0, A61), (1, A62), (2, A63), (3, A64), (4, A65)], &k, &mut tmp);
            let t_new = if last { t_end } else { t + h };
            f(t_new, &tmp, &mut k[5])?;
            stage(&[(0, A71), (2, A73), (3, A74), (4, A75), (5, A76)], &k, &mut y_new);
            f(t_new, &y_new, &mut k[6])?;
            self.stats.evaluations += 6;

            let mut err = T::zero();
            for i in 0..dim {
                let e = h
                    * (c(E1) * k[0][i] + c(E3) * k[2][i] + c(E4) * k[3][i] + c(E5) * k[4][i] + c(E6) * k[5][i]
                        + c(E7) * k[6][i]);
                let sk = self.scale(y[i], y_new[i]);
                err += (e / sk) * (e / sk);
            }
            let err = (err / T::c(dim.max(1) as f64)).sqrt();
            if !err.is_finite() {
                self.stats.rejected += 1;
                self.h = h * c(0.2);
                rejected_last = true;
                continue;
            }
            let fac = (c(0.9) * err.powf(c(-0.2))).max(c(0.2)).min(c(10.0));
            if err <= T::one() {
                for i in 0..dim {
                    let y0 = y[i];
                    let y1 = y_new[i];
                    let dy = y1 - y0;
                    let bspl = h * k[0][i] - dy;
                    self.cont[0][i] = y0;
                    self.cont[1][i] = dy;
                    self.cont[2][i] = bspl;
                    self.cont[3][i] = dy - h * k[6][i] - bspl;
                    self.cont[4][i] = h
                        * (c(D1) * k[0][i] + c(D3) * k[2][i] + c(D4) * k[3][i] + c(D5) * k[4][i] + c(D6) * k[5][i]
                            + c(D7) * k[6][i]);
                }
                self.t_old = self.t;
                self.t = t_new;
                self.h_last = h;
                std::mem::swap(&mut self.y, &mut y_new);
                std::mem::swap(&mut self.f0, &mut k[6]);
                self.stats.accepted += 1;
                self.h = if rejected_last { h * fac.min(T::one()) } else { h * fac };
                return Ok(());
            }
            self.stats.rejected += 1;
            rejected_last = true;
            self.h = h * fac.min(T::one());
        }
    }

    /// Interpolated state at `t` within the last accepted step.
    pub fn dense_output(&self, t: T) -> Vec<T> {
        if self.h_last == T::zero() {
            return self.y.clone();
        }
        let theta = (t - self.t_old) / self.h_last;
        let theta1 = T::one() - theta;
        (0..self.y.len())
            .map(|i| {
                self.cont[0][i]
                    + theta
                        * (self.cont[1][i]
                            + theta1 * (self.cont[2][i] + theta * (self.cont[3][i] + theta1 * self.cont[4][i])))
            })
            .collect()
    }
}

/// Integrates to `t_end` and returns the final state.
pub fn integrate<T: Real, F>(mut f: F, t0: T, y0: Vec<T>, t_end: T, settings: IntegratorSettings<T>) -> Result<(Vec<T>, IntegratorStats)>
where
    F: FnMut(T, &[T], &mut [T]) -> Result<()>,
{
    let mut s = Dopri5::new(&mut f, t0, y0, t_end, settings)?;
    while s.t() < t_end {
        s.step(&mut f, t_end)?;
    }
    Ok((s.y().to_vec(), s.stats()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decay(_: f64, y: &[f64], out: &mut [f64]) -> Result<()> {
        out[0] = -y[0];
        Ok(())
    }

    fn oscillator(_: f64, y: &[f64], out: &mut [f64]) -> Result<()> {
        out[0] = y[1];
        out[1] = -y[0];
        Ok(())
    }

    #[test]
    fn exponential_decay() {
        let settings = IntegratorSettings { rtol: 1e-8, atol: 1e-10, ..Default::default() };
        let (y, _) = integrate(decay, 0.0, vec![1.0], 5.0, settings).unwrap();
        assert!((y[0] - (-5.0f64).exp()).abs() < 1e-8);
    }

    #[test]
    fn oscillator_accuracy_improves_with_tolerance() {
        let err = |rtol: f64| {
            let settings = IntegratorSettings { rtol, atol: rtol * 1e-3, ..Default::default() };
            let (y, _) = integrate(oscillator, 0.0, vec![1.0, 0.0], 10.0, settings).unwrap();
            ((y[0] - 10f64.cos()).powi(2) + (y[1] + 10f64.sin()).powi(2)).sqrt()
        };
        let (coarse, fine) = (err(1e-4), err(1e-8));
        assert!(fine < coarse && fine < 1e-6, "{coarse} {fine}");
    }

    #[test]
    fn dense_output_is_accurate_inside_steps() {
        let settings = IntegratorSettings { rtol: 1e-9, atol: 1e-12, ..Default::default() };
        let mut f = oscillator;
        let mut s = Dopri5::new(&mut f, 0.0, vec![1.0, 0.0], 6.0, settings).unwrap();
        while s.t() < 6.0 {
            s.step(&mut f, 6.0).unwrap();
            for k in 0..=8 {
                let t = s.t_old() + (s.t() - s.t_old()) * k as f64 / 8.0;
                let y = s.dense_output(t);
                assert!((y[0] - t.cos()).abs() < 1e-7 && (y[1] + t.sin()).abs() < 1e-7);
            }
        }
        assert_eq!(s.t(), 6.0);
    }

    #[test]
    fn rhs_errors_propagate() {
        let mut f = |t: f64, _: &[f64], out: &mut [f64]| {
            out[0] = 1.0;
            if t > 0.5 {
                Err(Error::NonFinite("test"))
            } else {
                Ok(())
            }
        };
        let mut s = Dopri5::new(&mut f, 0.0, vec![0.0], 1.0, IntegratorSettings::default()).unwrap();
        let mut result = Ok(());
        while result.is_ok() && s.t() < 1.0 {
            result = s.step(&mut f, 1.0);
        }
        assert_eq!(result, Err(Error::NonFinite("test")));
    }

    #[test]
    fn rejects_bad_tolerances() {
        let settings = IntegratorSettings { rtol: 0.0, ..Default::default() };
        assert!(integrate(decay, 0.0, vec![1.0], 1.0, settings).is_err());
    }

    #[test]
    fn f32_decay() {
        let mut f = |_: f32, y: &[f32], out: &mut [f32]| {
            out[0] = -y[0];
            Ok(())
        };
        let mut s = Dopri5::new(&mut f, 0.0f32, vec![1.0], 2.0, IntegratorSettings::default()).unwrap();
        while s.t() < 2.0 {
            s.step(&mut f, 2.0).unwrap();
        }
        assert!((s.y()[0] - (-2.0f32).exp()).abs() < 1e-3);
    }
}
