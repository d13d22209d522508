use crate::{Error, Result};

/// Real roots of `a·x² + b·x + c = 0` in ascending order.
///
/// Degenerates to the linear equation when `a = 0`; a constant nonzero
/// equation has no roots. A repeated root is reported once.
pub fn solve_quadratic(a: f64, b: f64, c: f64) -> Result<Vec<f64>> {
    if !(a.is_finite() && b.is_finite() && c.is_finite()) {
        return Err(Error::InvalidParameter("non-finite coefficient".into()));
    }
    if a == 0.0 && b == 0.0 {
        if c == 0.0 {
            return Err(Error::InvalidParameter("all coefficients are zero".into()));
        }
        return Ok(Vec::new());
    }
    if a == 0.0 {
        return Ok(vec![-c / b]);
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Ok(Vec::new());
    }
    if disc == 0.0 {
        return Ok(vec![-b / (2.0 * a)]);
    }
    // Avoid cancellation between -b and the square root.
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let (r1, r2) = if q == 0.0 {
        // b = 0 and a·c < 0
        let r = (-c / a).sqrt();
        (-r, r)
    } else {
        (q / a, c / q)
    };
    Ok(if r1 <= r2 { vec![r1, r2] } else { vec![r2, r1] })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_cases() {
        assert_eq!(solve_quadratic(1.0, 0.0, -1.0).unwrap(), vec![-1.0, 1.0]);
        assert_eq!(solve_quadratic(0.0, 2.0, -4.0).unwrap(), vec![2.0]);
        assert!(solve_quadratic(1.0, 0.0, 1.0).unwrap().is_empty());
        assert_eq!(solve_quadratic(1.0, -2.0, 1.0).unwrap(), vec![1.0]);
    }

    #[test]
    fn constant_equations() {
        assert!(solve_quadratic(0.0, 0.0, 3.0).unwrap().is_empty());
        assert!(solve_quadratic(0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn no_cancellation_for_small_root() {
        let r = solve_quadratic(1.0, -1e8, 1.0).unwrap();
        assert!((r[0] - 1e-8).abs() < 1e-20);
        assert!((r[1] - 1e8).abs() < 1e-6);
    }
}
