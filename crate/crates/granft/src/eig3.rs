//! Eigenvalues of real 3x3 matrices via the characteristic cubic.
//!
//! The cubic is solved in closed form (trigonometric branch for three real
//! roots, Cardano otherwise) and each root gets a few Newton steps on the
//! original polynomial to shrink the residual.

use num_complex::Complex64;

/// Roots of `x^3 + a x^2 + b x + c`, unpolished.
fn cubic_roots(a: f64, b: f64, c: f64) -> [Complex64; 3] {
    // depressed form t^3 + p t + q with x = t - a/3
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let disc = -4.0 * p * p * p - 27.0 * q * q;

    let ts: [Complex64; 3] = if p.abs() < 1e-14 && q.abs() < 1e-14 {
        [Complex64::new(0.0, 0.0); 3]
    } else if disc >= 0.0 {
        // three real roots
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        let tau = 2.0 * std::f64::consts::PI / 3.0;
        [
            Complex64::new(m * theta.cos(), 0.0),
            Complex64::new(m * (theta - tau).cos(), 0.0),
            Complex64::new(m * (theta + tau).cos(), 0.0),
        ]
    } else {
        // one real root, complex pair
        let half_q = q / 2.0;
        let root = (half_q * half_q + p * p * p / 27.0).sqrt();
        let u = (-half_q + root).cbrt();
        let v = (-half_q - root).cbrt();
        let t0 = u + v;
        // deflate: t^2 + t0 t + (t0^2 + p) = 0
        let quad_b = t0;
        let quad_c = t0 * t0 + p;
        let d = quad_b * quad_b - 4.0 * quad_c;
        let im = (-d).max(0.0).sqrt() / 2.0;
        [
            Complex64::new(t0, 0.0),
            Complex64::new(-quad_b / 2.0, im),
            Complex64::new(-quad_b / 2.0, -im),
        ]
    };
    ts.map(|t| t - shift)
}

fn polish(coeffs: (f64, f64, f64), root: Complex64) -> Complex64 {
    let (a, b, c) = coeffs;
    let eval = |x: Complex64| ((x + a) * x + b) * x + c;
    let mut x = root;
    let mut best = x;
    let mut best_norm = eval(x).norm();
    // plain Newton; repeated roots converge linearly, so allow enough steps
    for _ in 0..40 {
        let f = eval(x);
        let df = (3.0 * x + 2.0 * a) * x + b;
        if df.norm() < 1e-300 {
            break;
        }
        let step = f / df;
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        x -= step;
        let n = eval(x).norm();
        if n < best_norm {
            best_norm = n;
            best = x;
        }
        if n == 0.0 || step.norm() < 1e-16 * (1.0 + x.norm()) {
            break;
        }
    }
    best
}

/// Eigenvalues of a real 3x3 matrix, sorted by (re, im) ascending. Complex
/// output covers every case; conjugate pairs come out exactly conjugate.
pub fn eigenvalues_3x3(m: &[[f64; 3]; 3]) -> [Complex64; 3] {
    let tr = m[0][0] + m[1][1] + m[2][2];
    let minor_sum = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2]
        - m[0][2] * m[2][0]
        + m[1][1] * m[2][2]
        - m[1][2] * m[2][1];
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);

    // char poly: l^3 - tr l^2 + minor_sum l - det
    let coeffs = (-tr, minor_sum, -det);
    let mut roots = cubic_roots(coeffs.0, coeffs.1, coeffs.2).map(|r| polish(coeffs, r));

    // re-pair conjugates spoiled by polishing
    for r in roots.iter_mut() {
        if r.im.abs() < 1e-9 * (1.0 + r.re.abs()) {
            r.im = 0.0;
        }
    }
    roots.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    roots
}

/// Characteristic polynomial value at `x`; used by residual checks.
pub fn charpoly_3x3(m: &[[f64; 3]; 3], x: Complex64) -> Complex64 {
    let tr = m[0][0] + m[1][1] + m[2][2];
    let minor_sum = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2]
        - m[0][2] * m[2][0]
        + m[1][1] * m[2][2]
        - m[1][2] * m[2][1];
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    ((x - tr) * x + minor_sum) * x - det
}

/// Frobenius norm, the scale used by the residual tolerance.
pub fn frobenius_3x3(m: &[[f64; 3]; 3]) -> f64 {
    m.iter()
        .flatten()
        .map(|v| v * v)
        .sum::<f64>()
        .sqrt()
}
