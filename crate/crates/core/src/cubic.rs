//! Real roots of cubic polynomials.

/// Discriminant of `a x^3 + b x^2 + c x + d`; negative means one real root.
pub fn discriminant(a: f64, b: f64, c: f64, d: f64) -> f64 {
    18.0 * a * b * c * d - 4.0 * b.powi(3) * d + b * b * c * c - 4.0 * a * c.powi(3) - 27.0 * a * a * d * d
}

fn polish(a: f64, b: f64, c: f64, d: f64, mut x: f64) -> f64 {
    for _ in 0..8 {
        let p = ((a * x + b) * x + c) * x + d;
        let dp = (3.0 * a * x + 2.0 * b) * x + c;
        if dp == 0.0 || p == 0.0 {
            break;
        }
        let next = x - p / dp;
        if !next.is_finite() {
            break;
        }
        if (next - x).abs() <= 1e-16 * x.abs().max(1.0) {
            x = next;
            break;
        }
        x = next;
    }
    x
}

/// All real roots in ascending order, Newton-polished.
///
/// `a` must be nonzero.
pub fn real_roots(a: f64, b: f64, c: f64, d: f64) -> Vec<f64> {
    let (p1, p2, p3) = (b / a, c / a, d / a);
    // Depressed cubic t^3 + p t + q with x = t - p1/3.
    let shift = p1 / 3.0;
    let p = p2 - p1 * p1 / 3.0;
    let q = 2.0 * p1.powi(3) / 27.0 - p1 * p2 / 3.0 + p3;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);

    let mut roots = if disc > 0.0 {
        let s = disc.sqrt();
        let u = (-q / 2.0 + s).cbrt();
        let v = (-q / 2.0 - s).cbrt();
        vec![u + v - shift]
    } else if p == 0.0 {
        vec![-shift]
    } else {
        let r = (-p / 3.0).sqrt();
        let arg = (3.0 * q / (2.0 * p) / r).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        (0..3)
            .map(|k| 2.0 * r * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() - shift)
            .collect()
    };
    for r in roots.iter_mut() {
        *r = polish(a, b, c, d, *r);
    }
    roots.sort_by(|x, y| x.total_cmp(y));
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_roots() {
        // (x-1)(x-2)(x+3) = x^3 - 7x + 6
        let r = real_roots(1.0, 0.0, -7.0, 6.0);
        assert_eq!(r.len(), 3);
        for (got, want) in r.iter().zip([-3.0, 1.0, 2.0]) {
            assert!((got - want).abs() < 1e-13);
        }
        assert!(discriminant(1.0, 0.0, -7.0, 6.0) > 0.0);
    }

    #[test]
    fn one_root() {
        // (x+2)(x^2+1) = x^3 + 2x^2 + x + 2
        let r = real_roots(1.0, 2.0, 1.0, 2.0);
        assert_eq!(r.len(), 1);
        assert!((r[0] + 2.0).abs() < 1e-14);
        assert!(discriminant(1.0, 2.0, 1.0, 2.0) < 0.0);
    }

    #[test]
    fn scaled_leading_coefficient() {
        let r = real_roots(2.5, -2.5 * 6.0, 2.5 * 11.0, -2.5 * 6.0);
        assert_eq!(r.len(), 3);
        assert!((r[2] - 3.0).abs() < 1e-12);
    }
}
