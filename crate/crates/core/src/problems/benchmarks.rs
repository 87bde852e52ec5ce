//! Objective functions of the shipped benchmarks, in their native
//! optimization sense. Inputs are assumed to lie in the problem's box; the
//! registry performs that check.

use std::f64::consts::PI;

fn zdt_g(x: &[f64]) -> f64 {
    1.0 + 9.0 * x[1..].iter().sum::<f64>() / (x.len() - 1) as f64
}

/// ZDT2, 30 variables on `[0, 1]`.
pub fn zdt2(x: &[f64]) -> Vec<f64> {
    let g = zdt_g(x);
    let f1 = x[0];
    vec![f1, g * (1.0 - (f1 / g).powi(2))]
}

/// ZDT3 as printed in the benchmark appendix, whose shape term is
/// `(x1/g)^2` rather than the more common `sqrt(x1/g)`.
pub fn zdt3(x: &[f64]) -> Vec<f64> {
    let g = zdt_g(x);
    let f1 = x[0];
    let r = f1 / g;
    vec![f1, g * (1.0 - r * r - r * (10.0 * PI * f1).sin())]
}

/// ZDT4, 10 variables; `x1` on `[0, 1]`, the rest on `[-5, 5]`.
pub fn zdt4(x: &[f64]) -> Vec<f64> {
    let m = x.len() as f64;
    let g = 1.0 + 10.0 * (m - 1.0) + x[1..].iter().map(|v| v * v - 10.0 * (4.0 * PI * v).cos()).sum::<f64>();
    let f1 = x[0];
    vec![f1, g * (1.0 - (f1 / g).sqrt())]
}

/// MOP3 (maximization), 2 variables on `[-pi, pi]`.
pub fn mop3(x: &[f64]) -> Vec<f64> {
    let (x1, x2) = (x[0], x[1]);
    let (s1, c1, s2, c2) = (1f64.sin(), 1f64.cos(), 2f64.sin(), 2f64.cos());
    let a1 = 0.5 * s1 - c1 + 2.0 * s2 - 1.5 * c2;
    let a2 = 1.5 * s1 - c1 + 2.0 * s2 - 0.5 * c2;
    let b1 = 0.5 * x1.sin() - 2.0 * x1.cos() + x2.sin() - 1.5 * x2.cos();
    let b2 = 1.5 * x1.sin() - x1.cos() + 2.0 * x2.sin() - 0.5 * x2.cos();
    vec![
        -(1.0 + (a1 - b1).powi(2) + (a2 - b2).powi(2)),
        -((x1 + 3.0).powi(2) + (x2 + 1.0).powi(2)),
    ]
}

/// MOP4, 3 variables on `[-5, 5]`. The second objective uses `sin(x_i)^3`.
pub fn mop4(x: &[f64]) -> Vec<f64> {
    let f1 = (0..2)
        .map(|i| -10.0 * (-0.2 * (x[i] * x[i] + x[i + 1] * x[i + 1]).sqrt()).exp())
        .sum();
    let f2 = x.iter().map(|v| v.abs().powf(0.8) + 5.0 * v.sin().powi(3)).sum();
    vec![f1, f2]
}

/// MOP5, three objectives of 2 variables on `[-30, 30]`.
pub fn mop5(x: &[f64]) -> Vec<f64> {
    let (x1, x2) = (x[0], x[1]);
    let r2 = x1 * x1 + x2 * x2;
    vec![
        0.5 * r2 + r2.sin(),
        (3.0 * x1 - 2.0 * x2 + 4.0).powi(2) / 8.0 + (x1 - x2 + 1.0).powi(2) / 27.0 + 15.0,
        1.0 / (r2 + 1.0) - 1.1 * (-r2).exp(),
    ]
}

/// MOP6, 2 variables on `[0, 1]`.
pub fn mop6(x: &[f64]) -> Vec<f64> {
    let (x1, x2) = (x[0], x[1]);
    let h = 1.0 + 10.0 * x2;
    let r = x1 / h;
    vec![x1, h * (1.0 - r * r - r * (8.0 * PI * x1).sin())]
}

/// DTLZ1, 7 variables on `[0, 1]`, three objectives.
///
/// `g = 100 (k + sum_{i>=3} ((x_i - 0.5)^2 - cos(20 pi (x_i - 0.5))))` with
/// `k = len(x) - 2`, so `g = 0` exactly when every tail variable is 0.5.
pub fn dtlz1(x: &[f64]) -> Vec<f64> {
    let k = (x.len() - 2) as f64;
    let g = 100.0
        * (k + x[2..]
            .iter()
            .map(|v| (v - 0.5).powi(2) - (20.0 * PI * (v - 0.5)).cos())
            .sum::<f64>());
    let s = 1.0 + g;
    vec![
        0.5 * x[0] * x[1] * s,
        0.5 * x[0] * (1.0 - x[1]) * s,
        0.5 * (1.0 - x[0]) * s,
    ]
}

/// DTLZ2, 12 variables on `[0, 1]`, three objectives.
pub fn dtlz2(x: &[f64]) -> Vec<f64> {
    let g: f64 = x[2..].iter().map(|v| (v - 0.5).powi(2)).sum();
    let s = 1.0 + g;
    let (a, b) = (x[0] * PI / 2.0, x[1] * PI / 2.0);
    vec![a.cos() * b.cos() * s, a.cos() * b.sin() * s, a.sin() * s]
}

/// First objective of the integer example.
pub fn discrete_f1(x: f64) -> f64 {
    0.001 * x * (x - 10.0) * (x - 60.0) * (x - 100.0) + 1000.0
}

/// Second objective of the integer example.
pub fn discrete_f2(x: f64) -> f64 {
    0.001 * x * (x - 70.0) * (x - 100.0) * (x - 200.0) + 6000.0
}

/// Integer example on `{0, ..., 100}`; continuous inputs are rounded to the
/// nearest integer first.
pub fn discrete_example(x: &[f64]) -> Vec<f64> {
    let v = x[0].round();
    vec![discrete_f1(v), discrete_f2(v)]
}

/// `f(x) = x` on the unit square: the analytic domination measure of `(a, b)`
/// is `a * b`.
pub fn identity2d(x: &[f64]) -> Vec<f64> {
    vec![x[0], x[1]]
}
