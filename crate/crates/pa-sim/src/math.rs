//! Special functions used by the channel and link modules: Bessel J0 and the
//! first-order Marcum Q-function.

use statrs::function::gamma::{gamma_ur, ln_gamma};

/// Bessel function of the first kind, order zero.
///
/// Power series below |x| = 8 (near machine precision there, and exactly 1
/// at 0), asymptotic form from Abramowitz & Stegun 9.4.3 beyond (absolute
/// error below 1e-7).
pub fn bessel_j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 8.0 {
        let q = 0.25 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..64u32 {
            term *= -q / ((k * k) as f64);
            sum += term;
            if term.abs() < 1e-17 {
                break;
            }
        }
        sum
    } else {
        let z = 8.0 / ax;
        let y = z * z;
        let xx = ax - std::f64::consts::FRAC_PI_4;
        let p = 1.0
            + y * (-0.1098628627e-2
                + y * (0.2734510407e-4 + y * (-0.2073370639e-5 + y * 0.2093887211e-6)));
        let q = -0.1562499995e-1
            + y * (0.1430488765e-3
                + y * (-0.6911147651e-5 + y * (0.7621095161e-6 + y * -0.934935152e-7)));
        (2.0 / (std::f64::consts::PI * ax)).sqrt() * (xx.cos() * p - z * xx.sin() * q)
    }
}

/// First-order Marcum Q-function Q1(a, b) = Pr[X >= b^2] for
/// X ~ noncentral chi-square with 2 degrees of freedom and noncentrality a^2.
///
/// Evaluated through the Poisson mixture of central chi-square tails,
/// summing outward from the Poisson mode so that large noncentralities
/// (a^2/2 up to ~1e7) stay in range. Absolute error ~1e-12.
pub fn marcum_q1(a: f64, b: f64) -> f64 {
    debug_assert!(a >= 0.0 && b >= 0.0);
    if b == 0.0 {
        return 1.0;
    }
    let m = 0.5 * a * a; // Poisson mean
    let y = 0.5 * b * b;
    if m == 0.0 {
        return (-y).exp();
    }

    // Pr[chisq_{2k+2}/2 >= y] = Q(k+1, y), upper regularized gamma.
    let k0 = m.floor() as u64;
    let w0 = if k0 == 0 {
        (-m).exp()
    } else {
        (-m + k0 as f64 * m.ln() - ln_gamma(k0 as f64 + 1.0)).exp()
    };
    let t0 = gamma_ur(k0 as f64 + 1.0, y);
    // Poisson pmf of y at k, for the tail recursions T_{k+1} = T_k + s_{k+1}.
    let ln_s = |k: u64| -y + k as f64 * y.ln() - ln_gamma(k as f64 + 1.0);

    let mut total = w0 * t0;
    let mut wsum = w0;
    let tol = 1e-14;

    // Upward from the mode.
    let mut w = w0;
    let mut t = t0;
    let mut s = ln_s(k0 + 1).exp();
    let mut k = k0;
    while wsum < 1.0 - tol {
        w *= m / (k + 1) as f64;
        t += s;
        k += 1;
        total += w * t.min(1.0);
        wsum += w;
        s *= y / (k + 1) as f64;
        if k > k0 + 10 && w < tol {
            break;
        }
    }

    // Downward from the mode.
    let mut w = w0;
    let mut t = t0;
    let mut s = ln_s(k0).exp();
    let mut k = k0;
    while k > 0 && wsum < 1.0 - tol {
        w *= k as f64 / m;
        t = (t - s).max(0.0);
        s *= k as f64 / y;
        k -= 1;
        total += w * t;
        wsum += w;
        if w < tol && k0 - k > 10 {
            break;
        }
    }

    total.clamp(0.0, 1.0)
}
