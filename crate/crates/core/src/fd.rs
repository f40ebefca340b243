//! Finite-difference stencils with Richardson extrapolation.
//!
//! Used in production only where third derivatives of the metric would be
//! needed (the directional derivative of the Ricci tensor); elsewhere these
//! stencils serve as an independent oracle for the jet arithmetic.

/// Central difference of `f` along coordinate `i`, step `h`.
pub fn central2<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64], i: usize, h: f64) -> f64 {
    let mut xp = x.to_vec();
    let mut xm = x.to_vec();
    xp[i] += h;
    xm[i] -= h;
    (f(&xp) - f(&xm)) / (2.0 * h)
}

/// 5-point central difference (4th order) along coordinate `i`.
pub fn central5<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64], i: usize, h: f64) -> f64 {
    let ev = |s: f64| {
        let mut y = x.to_vec();
        y[i] += s * h;
        f(&y)
    };
    (-ev(2.0) + 8.0 * ev(1.0) - 8.0 * ev(-1.0) + ev(-2.0)) / (12.0 * h)
}

/// Richardson-extrapolated first derivative: combines central differences at
/// steps h, h/2, ... `levels` extrapolation steps (levels = 2 gives
/// 6th-order accuracy from the 2nd-order stencil).
pub fn richardson_partial<F: Fn(&[f64]) -> f64>(
    f: &F,
    x: &[f64],
    i: usize,
    h: f64,
    levels: usize,
) -> f64 {
    let mut column: Vec<f64> = (0..=levels)
        .map(|k| central2(f, x, i, h / (1 << k) as f64))
        .collect();
    let mut factor = 4.0;
    for _ in 0..levels {
        for k in 0..column.len() - 1 {
            column[k] = (factor * column[k + 1] - column[k]) / (factor - 1.0);
        }
        column.pop();
        factor *= 4.0;
    }
    column[0]
}

/// Richardson-extrapolated pure or mixed second derivative.
pub fn richardson_second<F: Fn(&[f64]) -> f64>(
    f: &F,
    x: &[f64],
    i: usize,
    j: usize,
    h: f64,
    levels: usize,
) -> f64 {
    let base = |h: f64| -> f64 {
        if i == j {
            let ev = |s: f64| {
                let mut y = x.to_vec();
                y[i] += s * h;
                f(&y)
            };
            (ev(1.0) - 2.0 * ev(0.0) + ev(-1.0)) / (h * h)
        } else {
            let ev = |si: f64, sj: f64| {
                let mut y = x.to_vec();
                y[i] += si * h;
                y[j] += sj * h;
                f(&y)
            };
            (ev(1.0, 1.0) - ev(1.0, -1.0) - ev(-1.0, 1.0) + ev(-1.0, -1.0)) / (4.0 * h * h)
        }
    };
    let mut column: Vec<f64> = (0..=levels).map(|k| base(h / (1 << k) as f64)).collect();
    let mut factor = 4.0;
    for _ in 0..levels {
        for k in 0..column.len() - 1 {
            column[k] = (factor * column[k + 1] - column[k]) / (factor - 1.0);
        }
        column.pop();
        factor *= 4.0;
    }
    column[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_derivative_of_exp() {
        let f = |x: &[f64]| (2.0 * x[0]).exp();
        let d = richardson_partial(&f, &[0.3], 0, 1e-3, 2);
        assert!((d - 2.0 * (0.6f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn five_point_stencil_accuracy() {
        let f = |x: &[f64]| x[0].sin() * x[1].cos();
        let d = central5(&f, &[0.7, 0.2], 0, 1e-4);
        assert!((d - 0.7f64.cos() * 0.2f64.cos()).abs() < 1e-11);
    }

    #[test]
    fn mixed_second_derivative() {
        let f = |x: &[f64]| x[0] * x[0] * x[1] + x[1] * x[1] * x[0];
        let d = richardson_second(&f, &[1.2, -0.4], 0, 1, 1e-3, 2);
        assert!((d - (2.0 * 1.2 + 2.0 * (-0.4))).abs() < 1e-8);
    }
}
