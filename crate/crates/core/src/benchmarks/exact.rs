//! Manufactured solutions on the unit square and their derivatives.
//!
//! Both solutions are products `X(x) Y(y)` with the parabolic-layer factor
//!
//! ```text
//! Y(y) = (1 - e^{-y/s}) (1 - e^{-(1-y)/s}) / (1 - e^{-1/s}),   s = sqrt(eps)
//! ```

use std::f64::consts::PI;

/// Value, first and second derivative of a 1D factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

/// `1 - e^{-t}` without cancellation for small `t`.
fn one_minus_exp(t: f64) -> f64 {
    -(-t).exp_m1()
}

pub fn parabolic_factor(eps: f64, y: f64) -> Jet {
    let s = eps.sqrt();
    let (ea, eb) = ((-y / s).exp(), (-(1.0 - y) / s).exp());
    let (a, b) = (one_minus_exp(y / s), one_minus_exp((1.0 - y) / s));
    let d = one_minus_exp(1.0 / s);
    let (a1, b1) = (ea / s, -eb / s);
    let (a2, b2) = (-ea / (s * s), -eb / (s * s));
    Jet {
        v: a * b / d,
        d1: (a1 * b + a * b1) / d,
        d2: (a2 * b + 2.0 * a1 * b1 + a * b2) / d,
    }
}

/// `cos(pi x / 2) - (e^{-x/eps} - e^{-1/eps}) / (1 - e^{-1/eps})`.
pub fn exponential_factor(eps: f64, x: f64) -> Jet {
    let d = one_minus_exp(1.0 / eps);
    let ex = (-x / eps).exp();
    let layer = (ex - (-1.0 / eps).exp()) / d;
    let h = 0.5 * PI;
    Jet {
        v: (h * x).cos() - layer,
        d1: -h * (h * x).sin() + ex / (eps * d),
        d2: -h * h * (h * x).cos() - ex / (eps * eps * d),
    }
}

pub fn sine_factor(x: f64) -> Jet {
    Jet {
        v: (PI * x).sin(),
        d1: PI * (PI * x).cos(),
        d2: -PI * PI * (PI * x).sin(),
    }
}

/// Value, gradient and Laplacian of `X(x) Y(y)`.
pub fn product(x: Jet, y: Jet) -> (f64, [f64; 2], f64) {
    (x.v * y.v, [x.d1 * y.v, x.v * y.d1], x.d2 * y.v + x.v * y.d2)
}
