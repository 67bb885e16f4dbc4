//! Scalar math helpers on top of `libm` (the crate builds without `std`).

/// Inverse hyperbolic sine via the natural-log formula `ln(x + √(x²+1))`,
/// evaluated on `|x|` and odd-reflected so large negative arguments do not
/// cancel catastrophically.
pub fn asinh(x: f64) -> f64 {
    let a = x.abs();
    let y = libm::log(a + libm::sqrt(a * a + 1.0));
    if x < 0.0 {
        -y
    } else {
        y
    }
}

pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

pub fn sinh(x: f64) -> f64 {
    libm::sinh(x)
}

pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

pub fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}

pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

pub fn round(x: f64) -> f64 {
    libm::round(x)
}

pub const PI: f64 = core::f64::consts::PI;
