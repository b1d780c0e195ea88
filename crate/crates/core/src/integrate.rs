//! Dormand–Prince 5(4) integrator with FSAL and fifth-order dense output.

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

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rel: f64,
    pub abs: f64,
    pub max_step: f64,
}

/// One accepted step together with its continuous extension.
#[derive(Debug, Clone, Copy)]
pub struct Step<const N: usize> {
    pub t0: f64,
    pub h: f64,
    pub y0: [f64; N],
    pub y1: [f64; N],
    rcont: [[f64; N]; 5],
}

impl<const N: usize> Step<N> {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    /// Dense output at absolute time `t` within the step.
    pub fn eval(&self, t: f64) -> [f64; N] {
        let theta = if self.h == 0.0 { 0.0 } else { (t - self.t0) / self.h };
        self.eval_theta(theta)
    }

    pub fn eval_theta(&self, theta: f64) -> [f64; N] {
        if theta <= 0.0 {
            return self.y0;
        }
        if theta >= 1.0 {
            return self.y1;
        }
        let theta1 = 1.0 - theta;
        let r = &self.rcont;
        let mut y = [0.0; N];
        for i in 0..N {
            y[i] = r[0][i] + theta * (r[1][i] + theta1 * (r[2][i] + theta * (r[3][i] + theta1 * r[4][i])));
        }
        y
    }
}

/// Adaptive integrator state for an autonomous system `y' = f(y)`.
pub struct Dopri5<const N: usize> {
    tol: Tolerances,
    h: f64,
    t: f64,
    y: [f64; N],
    k1: [f64; N],
}

fn axpy<const N: usize>(y: &[f64; N], terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += c * k[i];
        }
    }
    out
}

impl<const N: usize> Dopri5<N> {
    pub fn new<F: Fn(&[f64; N]) -> [f64; N]>(f: &F, t0: f64, y0: [f64; N], tol: Tolerances) -> Self {
        let k1 = f(&y0);
        let mut s = Self {
            tol,
            h: 0.0,
            t: t0,
            y: y0,
            k1,
        };
        s.h = s.initial_step(f);
        s
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn state(&self) -> [f64; N] {
        self.y
    }

    fn scale(&self, y: &[f64; N], i: usize) -> f64 {
        self.tol.abs + self.tol.rel * y[i].abs()
    }

    fn initial_step<F: Fn(&[f64; N]) -> [f64; N]>(&self, f: &F) -> f64 {
        let mut d0 = 0.0;
        let mut d1 = 0.0;
        for i in 0..N {
            let sc = self.scale(&self.y, i);
            d0 += (self.y[i] / sc).powi(2);
            d1 += (self.k1[i] / sc).powi(2);
        }
        d0 = (d0 / N as f64).sqrt();
        d1 = (d1 / N as f64).sqrt();
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let h0 = h0.min(self.tol.max_step);
        let y1 = axpy(&self.y, &[(h0, &self.k1)]);
        let f1 = f(&y1);
        let mut d2 = 0.0;
        for (i, (a, b)) in f1.iter().zip(&self.k1).enumerate() {
            d2 += ((a - b) / self.scale(&self.y, i)).powi(2);
        }
        d2 = (d2 / N as f64).sqrt() / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        (100.0 * h0).min(h1).min(self.tol.max_step)
    }

    /// Takes one accepted step, retrying with smaller steps as needed.
    ///
    /// Returns `None` if the step size underflows or the state becomes non-finite.
    pub fn step<F: Fn(&[f64; N]) -> [f64; N]>(&mut self, f: &F) -> Option<Step<N>> {
        let y = self.y;
        let k1 = self.k1;
        loop {
            let h = self.h.min(self.tol.max_step);
            if !(h > 1e-14 * self.t.abs().max(1.0)) {
                return None;
            }
            let k2 = f(&axpy(&y, &[(h * A21, &k1)]));
            let k3 = f(&axpy(&y, &[(h * A31, &k1), (h * A32, &k2)]));
            let k4 = f(&axpy(&y, &[(h * A41, &k1), (h * A42, &k2), (h * A43, &k3)]));
            let k5 = f(&axpy(
                &y,
                &[(h * A51, &k1), (h * A52, &k2), (h * A53, &k3), (h * A54, &k4)],
            ));
            let k6 = f(&axpy(
                &y,
                &[
                    (h * A61, &k1),
                    (h * A62, &k2),
                    (h * A63, &k3),
                    (h * A64, &k4),
                    (h * A65, &k5),
                ],
            ));
            let y1 = axpy(
                &y,
                &[
                    (h * A71, &k1),
                    (h * A73, &k3),
                    (h * A74, &k4),
                    (h * A75, &k5),
                    (h * A76, &k6),
                ],
            );
            let k7 = f(&y1);

            let mut err = 0.0;
            for i in 0..N {
                let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = self.tol.abs + self.tol.rel * y[i].abs().max(y1[i].abs());
                err += (e / sc).powi(2);
            }
            let err = (err / N as f64).sqrt();
            if !err.is_finite() || y1.iter().any(|v| !v.is_finite()) {
                self.h = h * 0.2;
                continue;
            }
            let fac = if err == 0.0 {
                10.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 10.0)
            };
            if err <= 1.0 {
                let mut rcont = [[0.0; N]; 5];
                for i in 0..N {
                    let dy = y1[i] - y[i];
                    let bspl = h * k1[i] - dy;
                    rcont[0][i] = y[i];
                    rcont[1][i] = dy;
                    rcont[2][i] = bspl;
                    rcont[3][i] = dy - h * k7[i] - bspl;
                    rcont[4][i] = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
                }
                let step = Step {
                    t0: self.t,
                    h,
                    y0: y,
                    y1,
                    rcont,
                };
                self.t += h;
                self.y = y1;
                self.k1 = k7;
                self.h = h * fac;
                return Some(step);
            }
            self.h = h * fac.min(1.0);
        }
    }
}
