//! Composite Newton-Cotes rules on uniformly spaced samples.

/// Integrates uniformly spaced samples with spacing `h`.
///
/// Uses composite Simpson for an even number of intervals. An odd count
/// finishes with the 3/8 rule on the last three intervals; a single interval
/// falls back to the trapezoid.
pub fn simpson(samples: &[f64], h: f64) -> f64 {
    let n = samples.len().saturating_sub(1);
    match n {
        0 => 0.0,
        1 => 0.5 * h * (samples[0] + samples[1]),
        _ if n.is_multiple_of(2) => simpson_even(samples, h),
        3 => three_eighths(samples, h),
        _ => simpson_even(&samples[..n - 2], h) + three_eighths(&samples[n - 3..], h),
    }
}

/// Composite Simpson weights (including the `h` factor) for `n` intervals.
/// Matches [`simpson`] exactly, odd counts included.
pub fn simpson_weights(n: usize, h: f64) -> Vec<f64> {
    let mut w = vec![0.0; n + 1];
    match n {
        0 => {}
        1 => {
            w[0] = 0.5 * h;
            w[1] = 0.5 * h;
        }
        _ => {
            let even_part = if n.is_multiple_of(2) { n } else { n - 3 };
            if even_part > 0 {
                add_simpson_even(&mut w[..=even_part], h);
            }
            if n % 2 == 1 {
                let c = 3.0 * h / 8.0;
                for (k, f) in [1.0, 3.0, 3.0, 1.0].into_iter().enumerate() {
                    w[n - 3 + k] += c * f;
                }
            }
        }
    }
    w
}

/// Integrates `f` over `[a, b]` with composite Simpson, using the smallest
/// even number of intervals whose width does not exceed `max_step`.
pub fn simpson_fn(f: impl Fn(f64) -> f64, a: f64, b: f64, max_step: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let mut n = ((b - a) / max_step).ceil() as usize;
    n = n.max(2);
    if n % 2 == 1 {
        n += 1;
    }
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let x = a + i as f64 * h;
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(x);
    }
    acc * h / 3.0
}

fn simpson_even(s: &[f64], h: f64) -> f64 {
    let n = s.len() - 1;
    let mut acc = s[0] + s[n];
    for (i, v) in s.iter().enumerate().take(n).skip(1) {
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * v;
    }
    acc * h / 3.0
}

fn add_simpson_even(w: &mut [f64], h: f64) {
    let n = w.len() - 1;
    let c = h / 3.0;
    w[0] += c;
    w[n] += c;
    for (i, wi) in w.iter_mut().enumerate().take(n).skip(1) {
        *wi += if i % 2 == 1 { 4.0 } else { 2.0 } * c;
    }
}

fn three_eighths(s: &[f64], h: f64) -> f64 {
    3.0 * h / 8.0 * (s[0] + 3.0 * s[1] + 3.0 * s[2] + s[3])
}
