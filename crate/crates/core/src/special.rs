//! Sine integral and Bessel functions of the first kind.
//!
//! `sine_integral` switches between the defining power series, a
//! continued-fraction evaluation of the auxiliary functions, and their
//! asymptotic expansion; each branch holds 1e-10 absolute accuracy or
//! better over its range (validated against a quadrature oracle in the
//! tests). `bessel_j_sequence` runs Miller's downward recurrence with
//! sum normalization, which yields every order up to `m_max` at once.

use num_complex::Complex;

use crate::real::Real;

/// Power series below, continued fraction above.
const SI_SERIES_LIMIT: f64 = 16.0;
/// Asymptotic auxiliary-function expansion above this point.
const SI_ASYMPTOTIC_LIMIT: f64 = 50.0;

/// Si(x) = ∫₀ˣ sin t / t dt. Odd in x; Si(x) → π/2 as x → ∞.
pub fn sine_integral<R: Real>(x: R) -> R {
    let ax = x.abs();
    let value = if ax <= R::of(SI_SERIES_LIMIT) {
        si_series(ax)
    } else if ax < R::of(SI_ASYMPTOTIC_LIMIT) {
        si_continued_fraction(ax)
    } else {
        si_asymptotic(ax)
    };
    if x < R::zero() {
        -value
    } else {
        value
    }
}

/// Si(x) = Σ (−1)ᵏ x^{2k+1} / ((2k+1)(2k+1)!), x ≥ 0 and modest.
fn si_series<R: Real>(x: R) -> R {
    let x2 = x * x;
    // a_k = (-1)^k x^{2k+1}/(2k+1)!  (the sin series term)
    let mut a = x;
    let mut sum = x;
    let mut k = 0u32;
    loop {
        k += 1;
        let tk = R::of(2.0 * f64::from(k));
        a = -a * x2 / (tk * (tk + R::one()));
        let term = a / (tk + R::one());
        let new = sum + term;
        if new == sum || k > 80 {
            return new;
        }
        sum = new;
    }
}

/// E₁(ix) by modified Lentz continued fraction; Si(x) = π/2 + Im E₁(ix).
fn si_continued_fraction<R: Real>(x: R) -> R {
    let z = Complex::new(R::zero(), x);
    let tiny = Complex::new(R::of(1e-30), R::zero());
    let one = Complex::new(R::one(), R::zero());

    // E1(z) e^z = 1/(z+1 - 1/(z+3 - 4/(z+5 - 9/(z+7 - ...))))
    let mut f = z + one;
    if f.norm_sqr() == R::zero() {
        f = tiny;
    }
    let mut c = f;
    let mut d = Complex::new(R::zero(), R::zero());
    let eps = R::epsilon();
    for k in 1..=200u32 {
        let kk = R::of(f64::from(k));
        let a = Complex::new(-kk * kk, R::zero());
        let b = z + Complex::new(R::of(2.0 * f64::from(k) + 1.0), R::zero());
        d = b + a * d;
        if d.norm_sqr() == R::zero() {
            d = tiny;
        }
        c = b + a / c;
        if c.norm_sqr() == R::zero() {
            c = tiny;
        }
        d = one / d;
        let delta = c * d;
        f = f * delta;
        if (delta - one).norm() < eps {
            break;
        }
    }
    let e1 = (-z).exp() / f;
    R::of(std::f64::consts::FRAC_PI_2) + e1.im
}

/// Si(x) = π/2 − f(x) cos x − g(x) sin x with the divergent asymptotic
/// series for f and g truncated where they are far below 1e-10 (x ≥ 50).
fn si_asymptotic<R: Real>(x: R) -> R {
    let w = R::one() / (x * x);
    // f(x) ~ (1/x) sum (-1)^j (2j)!  / x^{2j}
    // g(x) ~ (1/x²) sum (-1)^j (2j+1)! / x^{2j}
    let mut f_sum = R::zero();
    let mut g_sum = R::zero();
    let mut even_fact = R::one(); // (2j)!
    let mut odd_fact = R::one(); // (2j+1)!
    let mut wk = R::one();
    let mut sign = R::one();
    for j in 0..=8u32 {
        let tj = 2.0 * f64::from(j);
        if j > 0 {
            even_fact = even_fact * R::of(tj - 1.0) * R::of(tj);
            wk = wk * w;
            sign = -sign;
        }
        odd_fact = even_fact * R::of(tj + 1.0);
        f_sum += sign * even_fact * wk;
        g_sum += sign * odd_fact * wk;
    }
    let f = f_sum / x;
    let g = g_sum * w;
    let (s, c) = x.sin_cos();
    R::of(std::f64::consts::FRAC_PI_2) - f * c - g * s
}

/// J_m for all orders 0..=m_max at once via downward recurrence.
///
/// Accuracy is limited by the normalization identity J₀ + 2ΣJ₂ₖ = 1 and
/// sits near machine precision for x ≤ 1e4.
pub fn bessel_j_sequence<R: Real>(m_max: usize, x: R) -> Vec<R> {
    let ax = x.abs();
    let mut out = vec![R::zero(); m_max + 1];
    if ax == R::zero() {
        out[0] = R::one();
        return out;
    }

    // start safely above both the requested order and the turning point
    let turn = ax.as_f64().ceil() as usize;
    let offset = (8.0 * ax.as_f64().cbrt()).ceil() as usize + 18;
    let start = m_max.max(turn) + offset;

    let rescale_limit = R::max_value().sqrt();
    let rescale = R::one() / rescale_limit;

    let two_over_x = R::of(2.0) / ax;
    let mut above = R::zero(); // J_{m+1} (unnormalized)
    let mut here = R::of(1e-30); // J_m
    let mut norm = R::zero(); // J_0 + 2 sum J_{2k}
    for m in (0..=start).rev() {
        let below = R::of(m as f64 + 1.0) * two_over_x * here - above;
        above = here;
        here = below;
        // `here` now holds J_m
        if m <= m_max {
            out[m] = here;
        }
        if m % 2 == 0 {
            norm += if m == 0 { here } else { here + here };
        }
        if here.abs() > rescale_limit {
            here = here * rescale;
            above = above * rescale;
            norm = norm * rescale;
            for v in out.iter_mut() {
                *v = *v * rescale;
            }
        }
    }

    for v in out.iter_mut() {
        *v = *v / norm;
    }
    if x < R::zero() {
        // J_m(-x) = (-1)^m J_m(x)
        for (m, v) in out.iter_mut().enumerate() {
            if m % 2 == 1 {
                *v = -*v;
            }
        }
    }
    out
}

/// Bessel function of the first kind, J_m(x).
pub fn bessel_j<R: Real>(m: usize, x: R) -> R {
    bessel_j_sequence(m, x)[m]
}
