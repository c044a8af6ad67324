//! Complex roots of univariate polynomials (Aberth iteration, Newton polish).

use num_complex::Complex64;

/// Horner evaluation of `Σ c_j z^j`.
pub fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

fn derivative(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(j, c)| c * j as f64)
        .collect()
}

/// All roots of `Σ c_j z^j` with multiplicity; leading zero coefficients are ignored.
pub fn roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().is_some_and(|z| z.norm() == 0.0) {
        c.pop();
    }
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    let lead = c[deg];
    let monic: Vec<Complex64> = c.iter().map(|z| z / lead).collect();
    let dmonic = derivative(&monic);
    let bound = 1.0 + monic[..deg].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / deg as f64 + 0.4;
            Complex64::from_polar(0.5 * bound, theta)
        })
        .collect();
    for _ in 0..500 {
        let mut worst: f64 = 0.0;
        for i in 0..deg {
            let p = horner(&monic, z[i]);
            let dp = horner(&dmonic, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulse: Complex64 = (0..deg)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulse);
            if step.is_finite() {
                z[i] -= step;
                worst = worst.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if worst < 1e-16 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..2 {
            let dp = horner(&dmonic, *zi);
            if dp.norm() > 0.0 {
                let step = horner(&monic, *zi) / dp;
                if step.is_finite() {
                    *zi -= step;
                }
            }
        }
    }
    z
}
