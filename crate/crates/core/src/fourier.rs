//! Dimensionless Fourier transform j̃_ks of the radial current density.
//!
//! The current model is radial above the x-axis and opposite below,
//! falling off as 1/r, which makes the transform over the two islands
//!
//!   j̃_ks = ∫₀^{kR} d(kr) ∫ dψ (ψ/|ψ|) r̂·ê_s e^{−i kr k̂·r̂}.
//!
//! Inversion symmetry folds this onto one island with a cosine kernel,
//! so every j̃ here is real. The transverse in-plane polarization has the
//! closed form −4 Si(kR cos φ sin θ)/sin θ; the other two come from an
//! odd-harmonic Bessel series. A direct 2-D quadrature of the definition
//! serves as the oracle for both.
//!
//! Angular integrals ∫d²Ω |j̃|² are taken with a log-θ substitution: the
//! integrand plateaus as 1/θ down to θ ~ 1/kR, which is where the
//! log(kR) growth comes from, and uniform grids in θ would miss it.

use num_complex::Complex;
use rayon::prelude::*;

use crate::bath::{polarization_vectors, Direction, Polarization};
use crate::error::{Error, Result};
use crate::quad::{adaptive_quad, compensated_sum, QuadOptions};
use crate::real::Real;
use crate::special::{bessel_j_sequence, sine_integral};

/// Default odd-term truncation of the Bessel series.
///
/// Only converged when kR sin θ stays a few turning-point widths below
/// this; [`sufficient_series_truncation`] gives a truncation that always
/// is. The reported tail estimate flags the difference.
pub const DEFAULT_SERIES_TRUNCATION: usize = 201;
/// Cost guard for the brute-force quadrature (override in the options).
pub const DEFAULT_BRUTE_FORCE_KR_LIMIT: f64 = 2000.0;
/// Validated kR window of the angular integrals.
pub const ANGULAR_KR_MIN: f64 = 10.0;
pub const ANGULAR_KR_MAX: f64 = 1e5;

/// j̃_k1 = −4 Si(kR cos φ sin θ)/sin θ (real).
///
/// The sin θ → 0 limit is −4 kR cos φ (from Si(x) ≈ x), taken explicitly
/// so vertical incidence is finite.
pub fn jtilde_s1<R: Real>(kr: R, d: &Direction<R>) -> R {
    let st = d.theta.sin();
    let cp = d.phi.cos();
    if st == R::zero() {
        return -R::of(4.0) * kr * cp;
    }
    -R::of(4.0) * sine_integral(kr * cp * st) / st
}

/// Partial sum of the odd-harmonic Bessel series for j̃_k2 or j̃_k3.
#[derive(Debug, Clone, Copy)]
pub struct SeriesSum<R> {
    pub value: Complex<R>,
    /// Amplitude (8/m)|J_m(kR sin θ)| of the last retained term; an
    /// honest convergence flag even where sin(mφ) happens to vanish.
    pub tail_estimate: R,
    /// Number of odd terms summed.
    pub terms: usize,
}

/// Smallest odd truncation that fully converges the series at this
/// direction: a few Airy widths past the J_m turning point m ≈ kR sin θ.
pub fn sufficient_series_truncation<R: Real>(kr: R, theta: R) -> usize {
    let x = (kr * theta.sin()).abs().as_f64();
    let m = (x + 8.0 * x.cbrt()).ceil() as usize + 27;
    m | 1
}

/// j̃_k2,3 = Σ_{m odd} (4/mπ) sin(mφ) 2π i^{m−1} J_m(kR sin θ)/{tan θ, 1}
/// truncated at `m_max` (odd). Real for odd m, since i^{m−1} = (−1)^{(m−1)/2}.
pub fn jtilde_s23<R: Real>(
    kr: R,
    d: &Direction<R>,
    s: Polarization,
    m_max: usize,
) -> Result<SeriesSum<R>> {
    if s == Polarization::TransverseInPlane {
        return Err(Error::invalid(
            "series form covers polarizations 2 and 3; use jtilde_s1 for s = 1",
        ));
    }
    if m_max == 0 || m_max % 2 == 0 {
        return Err(Error::invalid("series truncation must be a positive odd m"));
    }
    if !(kr > R::zero()) {
        return Err(Error::invalid("kR must be positive"));
    }

    let (st, ct) = d.theta.sin_cos();
    if st == R::zero() {
        // J_m(0) = 0 for m ≥ 1; for s = 2 the 0/0 resolves to the m = 1
        // small-angle limit 4 kR sin φ cos θ
        let value = match s {
            Polarization::TransverseOutOfPlane => R::of(4.0) * kr * d.phi.sin() * ct,
            _ => R::zero(),
        };
        return Ok(SeriesSum {
            value: Complex::new(value, R::zero()),
            tail_estimate: R::zero(),
            terms: 0,
        });
    }

    let x = kr * st;
    let bessel = bessel_j_sequence(m_max, x);
    let mut sum = crate::quad::CompensatedSum::new();
    let mut terms = 0usize;
    let mut m = 1usize;
    let mut sign = R::one(); // (−1)^{(m−1)/2} walks +, −, +, − over odd m
    let mut tail = R::zero();
    while m <= m_max {
        let amplitude = R::of(8.0 / m as f64) * bessel[m];
        sum.add(sign * (R::of(m as f64) * d.phi).sin() * amplitude);
        tail = amplitude.abs();
        terms += 1;
        sign = -sign;
        m += 2;
    }

    // the 1/tan θ of the out-of-plane polarization only acts through
    // cos θ here (sin θ > 0), so θ = π/2 gives an exact zero factor
    let factor = match s {
        Polarization::TransverseOutOfPlane => ct / st,
        _ => R::one(),
    };
    let value = sum.value() * factor;
    if !value.is_finite() {
        return Err(Error::NonFinite("jtilde series".into()));
    }
    Ok(SeriesSum {
        value: Complex::new(value, R::zero()),
        tail_estimate: tail * factor.abs(),
        terms,
    })
}

/// Options for the brute-force oracle quadrature.
#[derive(Debug, Clone, Copy)]
pub struct BruteForceOptions<R> {
    /// kR cost guard; evaluation cost grows linearly with kR.
    pub kr_limit: R,
    pub rel_tol: R,
    pub abs_tol: R,
}

impl<R: Real> Default for BruteForceOptions<R> {
    fn default() -> Self {
        BruteForceOptions {
            kr_limit: R::of(DEFAULT_BRUTE_FORCE_KR_LIMIT),
            rel_tol: R::of(1e-8),
            abs_tol: R::of(1e-12),
        }
    }
}

/// Direct adaptive 2-D quadrature of the defining transform; the oracle
/// for the closed form and the series.
///
/// Uses the inversion symmetry of the sign function to integrate the
/// cosine kernel twice over one island, which also removes the sign
/// discontinuity from the quadrature domain.
pub fn jtilde_bruteforce<R: Real>(
    kr: R,
    d: &Direction<R>,
    s: Polarization,
    opts: &BruteForceOptions<R>,
) -> Result<Complex<R>> {
    if !(kr > R::zero()) {
        return Err(Error::invalid("kR must be positive"));
    }
    if kr > opts.kr_limit {
        return Err(Error::invalid(format!(
            "kR = {} exceeds the brute-force cost guard {} (raise kr_limit to override)",
            kr.as_f64(),
            opts.kr_limit.as_f64()
        )));
    }

    let triad = polarization_vectors(d);
    let e = *triad.vector(s);
    let st = d.theta.sin();
    let phi = d.phi;

    let inner_opts = QuadOptions {
        rel_tol: opts.rel_tol * R::of(1e-2),
        abs_tol: opts.abs_tol * R::of(1e-2),
        max_panels: 1 << 14,
        initial_panels: 1, // set per call below
    };

    let pi = R::of(std::f64::consts::PI);
    let outer = adaptive_quad(
        |psi: R| {
            let (spsi, cpsi) = psi.sin_cos();
            let radial_dot_e = cpsi * e[0] + spsi * e[1];
            if radial_dot_e == R::zero() {
                return R::zero();
            }
            let a = st * (phi - psi).cos();
            let mut io = inner_opts;
            io.initial_panels = ((kr * a.abs() / pi).as_f64().ceil() as usize) + 2;
            let inner = adaptive_quad(|u: R| (u * a).cos(), R::zero(), kr, &io)
                .map(|r| r.value)
                .unwrap_or(R::nan());
            radial_dot_e * inner
        },
        R::zero(),
        pi,
        &QuadOptions {
            rel_tol: opts.rel_tol,
            abs_tol: opts.abs_tol,
            max_panels: 1 << 15,
            initial_panels: ((kr * st / pi).as_f64().ceil() as usize) + 8,
        },
    )?;

    let value = outer.value * R::of(2.0);
    if !value.is_finite() {
        return Err(Error::NonFinite("jtilde brute force".into()));
    }
    Ok(Complex::new(value, R::zero()))
}

/// One sample of the directional emission pattern.
#[derive(Debug, Clone, Copy)]
pub struct PatternSample<R> {
    pub theta: R,
    pub phi: R,
    /// |j̃_k1|² = 16 Si²(kR cos φ sin θ)/sin²θ.
    pub value: R,
}

/// Sample |j̃_k1|² on an inclusive θ grid over [0, π] and a half-open φ
/// grid over [0, 2π). Rows are θ-major and the evaluation is parallel
/// with a deterministic layout.
pub fn emission_pattern<R: Real>(
    kr: R,
    n_theta: usize,
    n_phi: usize,
) -> Result<Vec<PatternSample<R>>> {
    if n_theta < 2 || n_phi < 2 {
        return Err(Error::invalid("pattern grid must be at least 2×2"));
    }
    if !(kr > R::zero()) {
        return Err(Error::invalid("kR must be positive"));
    }
    let samples: Vec<PatternSample<R>> = (0..n_theta * n_phi)
        .into_par_iter()
        .map(|idx| {
            let i = idx / n_phi;
            let j = idx % n_phi;
            let theta = R::of(std::f64::consts::PI * i as f64 / (n_theta - 1) as f64);
            let phi = R::of(2.0 * std::f64::consts::PI * j as f64 / n_phi as f64);
            let d = Direction { theta, phi };
            let j1 = jtilde_s1(kr, &d);
            PatternSample {
                theta,
                phi,
                value: j1 * j1,
            }
        })
        .collect();
    Ok(samples)
}

/// Options for the angular integrals.
#[derive(Debug, Clone, Copy)]
pub struct AngularOptions<R> {
    /// Relative tolerance of the θ quadrature.
    pub rel_tol: R,
    /// θ cutoff in units of 1/kR; the integral below it is restored by a
    /// small-angle closed form.
    pub theta_min_factor: R,
}

impl<R: Real> Default for AngularOptions<R> {
    fn default() -> Self {
        AngularOptions {
            rel_tol: R::of(1e-6),
            theta_min_factor: R::of(1e-3),
        }
    }
}

/// ∫ d²Ω |j̃_ks|² over the sphere.
///
/// For s = 1 the φ integral runs over Si² directly; for s = 2, 3 the
/// orthogonality of sin(mφ) over the full circle collapses the squared
/// series into π Σ (8/m)² J_m². Both exploit the θ → π − θ and four-fold
/// φ symmetry of the integrand.
pub fn angular_integral<R: Real>(kr: R, s: Polarization, opts: &AngularOptions<R>) -> Result<R> {
    if !(kr >= R::of(ANGULAR_KR_MIN) && kr <= R::of(ANGULAR_KR_MAX)) {
        return Err(Error::invalid(format!(
            "kR = {} outside validated angular-integral window [{}, {}]",
            kr.as_f64(),
            ANGULAR_KR_MIN,
            ANGULAR_KR_MAX
        )));
    }

    let theta_min = opts.theta_min_factor / kr;
    match s {
        Polarization::TransverseInPlane => angular_s1(kr, theta_min, opts),
        _ => angular_s23(kr, s, theta_min, opts),
    }
}

fn angular_s1<R: Real>(kr: R, theta_min: R, opts: &AngularOptions<R>) -> Result<R> {
    let pi = R::of(std::f64::consts::PI);
    let half_pi = R::of(std::f64::consts::FRAC_PI_2);

    // φ quadrant integral of Si²(X cos φ); oscillation-aware seeding
    let phi_integral = |x: R| -> Result<R> {
        let initial = ((x.as_f64() / std::f64::consts::PI).ceil() as usize).max(1) + 4;
        let r = adaptive_quad(
            |p: R| {
                let si = sine_integral(x * p.cos());
                si * si
            },
            R::zero(),
            half_pi,
            &QuadOptions {
                rel_tol: R::of(1e-8),
                abs_tol: R::of(1e-14),
                max_panels: initial * 4 + 256,
                initial_panels: initial,
            },
        )?;
        Ok(r.value * R::of(4.0))
    };

    let u_lo = theta_min.ln();
    let u_hi = half_pi.ln();
    let range = (u_hi - u_lo).as_f64();
    let outer = adaptive_quad(
        |u: R| {
            let theta = u.exp();
            let x = kr * theta.sin();
            let g = phi_integral(x).unwrap_or(R::nan());
            R::of(16.0) * g * theta / theta.sin()
        },
        u_lo,
        u_hi,
        &QuadOptions {
            rel_tol: opts.rel_tol,
            abs_tol: R::zero(),
            max_panels: 4096,
            initial_panels: (range * 3.0).ceil() as usize + 16,
        },
    )?;

    // small-angle remainder: integrand → 16π (kR)² θ below the cutoff
    let tail = R::of(16.0) * pi * (kr * theta_min).powi(2);
    Ok(R::of(2.0) * outer.value + tail)
}

/// π Σ_{m odd} (8/m)² J_m²(x): the full-circle φ integral of |series|².
fn phi_collapsed_sum<R: Real>(x: R) -> R {
    if x == R::zero() {
        return R::zero();
    }
    let m_top = {
        let xf = x.as_f64();
        (((xf + 8.0 * xf.cbrt()).ceil() as usize) + 27) | 1
    };
    let bessel = bessel_j_sequence(m_top, x);
    let sum = compensated_sum((1..=m_top).step_by(2).map(|m| {
        let c = R::of(8.0 / m as f64) * bessel[m];
        c * c
    }));
    R::of(std::f64::consts::PI) * sum
}

fn angular_s23<R: Real>(kr: R, s: Polarization, theta_min: R, opts: &AngularOptions<R>) -> Result<R> {
    let pi = R::of(std::f64::consts::PI);
    let half_pi = R::of(std::f64::consts::FRAC_PI_2);

    let integrand = |theta: R| -> R {
        let (st, ct) = theta.sin_cos();
        let weight = match s {
            Polarization::TransverseOutOfPlane => ct * ct / (st * st),
            _ => R::one(),
        };
        phi_collapsed_sum(kr * st) * weight * st
    };

    // split where the J₁² oscillation takes over from the 1/θ plateau
    let theta_c = half_pi.min(R::of(50.0) / kr).max(theta_min * R::of(8.0));

    // plateau leg in u = ln θ
    let u_lo = theta_min.ln();
    let u_hi = theta_c.ln();
    let x_c = (kr * theta_c.sin()).as_f64();
    let plateau = adaptive_quad(
        |u: R| {
            let theta = u.exp();
            integrand(theta) * theta
        },
        u_lo,
        u_hi,
        &QuadOptions {
            rel_tol: opts.rel_tol,
            abs_tol: R::zero(),
            max_panels: 8192,
            initial_panels: ((u_hi - u_lo).as_f64() * (2.0 * x_c / std::f64::consts::PI + 3.0))
                .ceil() as usize
                + 16,
        },
    )?;

    // oscillatory leg in θ up to π/2
    let oscillatory = if theta_c < half_pi {
        let panels = (((half_pi - theta_c).as_f64() * 2.0 * kr.as_f64()
            / std::f64::consts::PI)
            .ceil() as usize)
            + 16;
        adaptive_quad(integrand, theta_c, half_pi, &QuadOptions {
            rel_tol: opts.rel_tol,
            abs_tol: R::zero(),
            max_panels: panels * 4 + 256,
            initial_panels: panels,
        })?
        .value
    } else {
        R::zero()
    };

    // small-angle remainder below the cutoff (J₁ ≈ x/2 dominates)
    let tail = match s {
        Polarization::TransverseOutOfPlane => R::of(16.0) * pi * (kr * theta_min).powi(2),
        _ => R::of(8.0) * pi * (kr * theta_min).powi(2) * theta_min * theta_min,
    };

    Ok(R::of(2.0) * (plateau.value + oscillatory) + tail)
}

/// Angular integrals at several kR values, evaluated in parallel with a
/// deterministic output order.
pub fn angular_integral_samples<R: Real>(
    kr_values: &[R],
    s: Polarization,
    opts: &AngularOptions<R>,
) -> Result<Vec<(R, R)>> {
    kr_values
        .par_iter()
        .map(|&kr| angular_integral(kr, s, opts).map(|v| (kr, v)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dir(theta: f64, phi: f64) -> Direction<f64> {
        Direction { theta, phi }
    }

    #[test]
    fn closed_form_zero_along_y() {
        // propagation along ±ŷ: in- and out-flows cancel
        let v = jtilde_s1(700.0, &dir(std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2));
        assert!(v.abs() < 1e-9, "got {v}");
    }

    #[test]
    fn closed_form_vertical_incidence_limit() {
        let v = jtilde_s1(123.0, &dir(0.0, 0.0));
        assert!((v + 4.0 * 123.0).abs() < 1e-12, "got {v}");
        // tiny but nonzero sin θ rides the same limit smoothly
        let v2 = jtilde_s1(123.0, &dir(1e-13, 0.0));
        assert!((v2 + 4.0 * 123.0).abs() < 1e-9, "got {v2}");
    }

    #[test]
    fn closed_form_matches_brute_force() {
        let opts = BruteForceOptions::default();
        for (kr, th, ph) in [
            (1253.9, 2.779, 4.874),
            (458.2, 0.963, 5.489),
            (20.5, 2.548, 5.008),
            (941.2, 0.972, 1.749),
        ] {
            let a = jtilde_s1(kr, &dir(th, ph));
            let b = jtilde_bruteforce(kr, &dir(th, ph), Polarization::TransverseInPlane, &opts)
                .unwrap()
                .re;
            assert!(
                (a - b).abs() <= 1e-6 * a.abs().max(1e-9),
                "kR={kr} θ={th} φ={ph}: closed {a} vs brute {b}"
            );
        }
    }

    #[test]
    fn brute_force_respects_cost_guard() {
        let opts = BruteForceOptions::default();
        let err = jtilde_bruteforce(
            2500.0,
            &dir(1.0, 1.0),
            Polarization::TransverseInPlane,
            &opts,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
        // and the guard is overridable
        let wide = BruteForceOptions {
            kr_limit: 3000.0,
            ..BruteForceOptions::default()
        };
        assert!(
            jtilde_bruteforce(2500.0, &dir(1.0, 1.0), Polarization::TransverseInPlane, &wide)
                .is_ok()
        );
    }

    #[test]
    fn brute_force_small_kr_vanishes() {
        let opts = BruteForceOptions::default();
        for s in Polarization::ALL {
            let v = jtilde_bruteforce(1e-9, &dir(0.9, 0.7), s, &opts).unwrap();
            assert!(v.norm() < 1e-8, "{s:?} at kR→0 gave {v}");
        }
    }

    #[test]
    fn brute_force_longitudinal_vertical_is_zero() {
        // θ = 0 makes r̂·ê₃ vanish identically
        let opts = BruteForceOptions::default();
        let v = jtilde_bruteforce(300.0, &dir(0.0, 0.4), Polarization::Longitudinal, &opts)
            .unwrap();
        assert_eq!(v.re, 0.0);
    }

    #[test]
    fn series_structural_zeros() {
        // φ = 0 zeroes every sin(mφ)
        for s in [Polarization::TransverseOutOfPlane, Polarization::Longitudinal] {
            let v = jtilde_s23(400.0, &dir(1.1, 0.0), s, 201).unwrap();
            assert_eq!(v.value.re, 0.0, "{s:?}");
        }
        // s = 3 at θ = 0: J_m(0) = 0 for every retained m
        let v = jtilde_s23(400.0, &dir(0.0, 1.0), Polarization::Longitudinal, 201).unwrap();
        assert_eq!(v.value.re, 0.0);
    }

    #[test]
    fn series_out_of_plane_at_grazing_is_zero() {
        // θ = π/2: the cos θ in 1/tan θ kills the polarization projection
        let v = jtilde_s23(
            300.0,
            &dir(std::f64::consts::FRAC_PI_2, 1.3),
            Polarization::TransverseOutOfPlane,
            201,
        )
        .unwrap();
        assert!(v.value.re.abs() < 1e-13, "got {}", v.value.re);
    }

    #[test]
    fn series_matches_brute_force_when_converged() {
        let opts = BruteForceOptions::default();
        for (kr, th, ph, s) in [
            (281.2, 3.028, 4.991, Polarization::Longitudinal),
            (310.1, 0.229, 0.272, Polarization::TransverseOutOfPlane),
            (104.3, 2.136, 1.300, Polarization::TransverseOutOfPlane),
            (191.1, 0.111, 5.224, Polarization::Longitudinal),
        ] {
            let m = sufficient_series_truncation(kr, th);
            let sv = jtilde_s23(kr, &dir(th, ph), s, m).unwrap();
            let bf = jtilde_bruteforce(kr, &dir(th, ph), s, &opts).unwrap().re;
            assert!(
                (sv.value.re - bf).abs() <= 1e-6 * bf.abs().max(1e-9),
                "kR={kr} θ={th} φ={ph} {s:?}: series {} vs brute {bf}",
                sv.value.re
            );
        }
    }

    #[test]
    fn spec_point_needs_more_than_201_terms() {
        // kR = 500, θ = 1.0 puts the turning point at kR sin θ ≈ 421, so
        // m ≤ 201 is a truncation, not a converged sum; the tail estimate
        // has to say so, and the converged sum has to match the oracle.
        let d = dir(1.0, 1.0);
        let opts = BruteForceOptions::default();
        let bf = jtilde_bruteforce(500.0, &d, Polarization::Longitudinal, &opts)
            .unwrap()
            .re;
        assert!((bf - (-0.203_918_287_8)).abs() < 1e-7, "oracle moved: {bf}");

        let truncated = jtilde_s23(500.0, &d, Polarization::Longitudinal, 201).unwrap();
        let truncation_error = (truncated.value.re - bf).abs();
        assert!(truncation_error > 1e-4 * bf.abs(), "201 terms unexpectedly converged");
        assert!(
            truncation_error < 20.0 * truncated.tail_estimate + 1e-6,
            "tail estimate {} does not cover error {truncation_error}",
            truncated.tail_estimate
        );

        let m = sufficient_series_truncation(500.0, 1.0);
        let converged = jtilde_s23(500.0, &d, Polarization::Longitudinal, m).unwrap();
        assert!(
            (converged.value.re - bf).abs() <= 1e-6 * bf.abs(),
            "converged series {} vs oracle {bf}",
            converged.value.re
        );
        assert!(converged.tail_estimate < 1e-12);
    }

    #[test]
    fn series_rejects_bad_arguments() {
        let d = dir(1.0, 1.0);
        assert!(jtilde_s23(100.0, &d, Polarization::TransverseInPlane, 201).is_err());
        assert!(jtilde_s23(100.0, &d, Polarization::Longitudinal, 200).is_err());
        assert!(jtilde_s23(100.0, &d, Polarization::Longitudinal, 0).is_err());
        assert!(jtilde_s23(-5.0, &d, Polarization::Longitudinal, 201).is_err());
    }

    #[test]
    fn pattern_grid_and_symmetries() {
        let samples = emission_pattern(200.0, 21, 40).unwrap();
        assert_eq!(samples.len(), 21 * 40);
        // zeros along φ = ±π/2 (indices 10 and 30 of the 40-point φ grid)
        for row in 0..21 {
            let v = samples[row * 40 + 10].value;
            let w = samples[row * 40 + 30].value;
            if samples[row * 40].theta > 0.0 && samples[row * 40].theta < std::f64::consts::PI {
                assert!(v < 1e-12 && w < 1e-12, "row {row}: {v} {w}");
            }
        }
        // φ → −φ mirror symmetry
        for j in 1..20 {
            let a = samples[5 * 40 + j].value;
            let b = samples[5 * 40 + (40 - j)].value;
            assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0));
        }
        assert!(emission_pattern(200.0, 1, 40).is_err());
    }

    #[test]
    fn pattern_dominated_by_steep_incidence_near_xz_plane() {
        let samples = emission_pattern(5000.0, 41, 72).unwrap();
        let max = samples
            .iter()
            .max_by(|a, b| a.value.partial_cmp(&b.value).unwrap())
            .unwrap();
        // peak sits at small θ (or its mirror) near the x–z plane
        let small_theta = max.theta.min(std::f64::consts::PI - max.theta);
        assert!(small_theta < 0.3, "peak at θ = {}", max.theta);
        let phi_dist = [0.0, std::f64::consts::PI, 2.0 * std::f64::consts::PI]
            .iter()
            .map(|p| (max.phi - p).abs())
            .fold(f64::MAX, f64::min);
        assert!(phi_dist < 0.3, "peak at φ = {}", max.phi);
    }

    #[test]
    fn angular_integral_window_enforced() {
        let opts = AngularOptions::default();
        assert!(angular_integral(5.0, Polarization::TransverseInPlane, &opts).is_err());
        assert!(angular_integral(2e5, Polarization::TransverseInPlane, &opts).is_err());
    }

    #[test]
    fn angular_integral_matches_log_law() {
        // frozen from the independent scipy pipeline used to derive the fit
        let opts = AngularOptions::default();
        let got = angular_integral(5000.0, Polarization::TransverseInPlane, &opts).unwrap();
        assert!(
            (got - 4300.26).abs() < 1.0,
            "∫|j̃₁|² at kR=5000: {got}"
        );
        let small = angular_integral(250.0, Polarization::TransverseInPlane, &opts).unwrap();
        assert!((small - 2814.09).abs() < 1.0, "kR=250: {small}");
    }

    #[test]
    fn angular_integral_monotone_in_kr() {
        let opts = AngularOptions::default();
        let mut prev = 0.0;
        for kr in [250.0, 750.0, 2250.0, 7500.0] {
            let v = angular_integral(kr, Polarization::TransverseInPlane, &opts).unwrap();
            assert!(v > prev, "not monotone at kR = {kr}");
            prev = v;
        }
    }

    #[test]
    fn quadrant_symmetry_of_s1_integrand() {
        // D₂ symmetry: quadrant integration × 4 equals the full φ circle
        let kr = 800.0;
        let theta: f64 = 0.7;
        let x = kr * theta.sin();
        let quad_opts = QuadOptions {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_panels: 4096,
            initial_panels: (x / std::f64::consts::PI).ceil() as usize + 4,
        };
        let f = |p: f64| {
            let si = sine_integral(x * p.cos());
            si * si
        };
        let quarter = adaptive_quad(f, 0.0, std::f64::consts::FRAC_PI_2, &quad_opts)
            .unwrap()
            .value;
        let full_opts = QuadOptions {
            initial_panels: 4 * quad_opts.initial_panels,
            ..quad_opts
        };
        let full = adaptive_quad(f, 0.0, 2.0 * std::f64::consts::PI, &full_opts)
            .unwrap()
            .value;
        assert!(
            (4.0 * quarter - full).abs() <= 1e-8 * full.abs(),
            "4×quadrant {} vs full {}",
            4.0 * quarter,
            full
        );
    }

    #[test]
    fn polarization_hierarchy_at_kr_1000() {
        let opts = AngularOptions::default();
        let i1 = angular_integral(1000.0, Polarization::TransverseInPlane, &opts).unwrap();
        let i2 = angular_integral(1000.0, Polarization::TransverseOutOfPlane, &opts).unwrap();
        let i3 = angular_integral(1000.0, Polarization::Longitudinal, &opts).unwrap();
        // frozen reference: I1 ≈ 3501.8, I2 ≈ 210.7, I3 ≈ 0.2439
        assert!((i1 - 3501.8).abs() < 1.0, "I1 = {i1}");
        assert!((i2 - 210.73).abs() < 0.5, "I2 = {i2}");
        assert!((i3 - 0.2439).abs() < 0.002, "I3 = {i3}");
        assert!(i1 > 5.0 * i2 && i2 > 5.0 * i3);
    }
}
