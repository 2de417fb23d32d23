//! Cooper-pair-box spectrum of the transmon in the charge basis.
//!
//! The Hamiltonian 4E_C(n − n_g)² − E_J cos φ is tridiagonal in the
//! charge states e^{inφ}/√(2π) (cos φ shifts n by ±1), so the periodic
//! eigenproblem is solved by direct diagonalization; the Mathieu
//! characteristic values a(ν, q) = E/E_C fall out as the eigenvalues.
//! Energies are reported in units of E_C throughout.

use num_complex::Complex;

use crate::eigen;
use crate::error::{Error, Result};
use crate::quad::compensated_sum;
use crate::real::Real;

/// Default charge-basis cutoff; at E_J/E_C ≈ 50 the low states occupy
/// |n| ≲ 10, and the convergence tests pin this down.
pub const DEFAULT_CUTOFF: usize = 30;
/// Default n_g grid for charge-dispersion sweeps.
pub const DEFAULT_NG_GRID: usize = 101;

/// Dimensionless CPB parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmonParams<R> {
    /// E_J/E_C > 0.
    pub ej_over_ec: R,
    /// Offset charge in Cooper-pair units; physics is 1-periodic in it.
    pub ng: R,
    /// Charge basis spans n ∈ {−N, …, +N}.
    pub cutoff: usize,
}

impl<R: Real> TransmonParams<R> {
    pub fn new(ej_over_ec: R, ng: R, cutoff: usize) -> Result<Self> {
        let p = TransmonParams {
            ej_over_ec,
            ng,
            cutoff,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.ej_over_ec > R::zero()) || !self.ej_over_ec.is_finite() {
            return Err(Error::invalid("ej_over_ec must be positive and finite"));
        }
        if !self.ng.is_finite() {
            return Err(Error::invalid("ng must be finite"));
        }
        if self.cutoff < 1 {
            return Err(Error::invalid("cutoff must be at least 1"));
        }
        Ok(())
    }

    /// Basis dimension 2N + 1.
    pub fn dimension(&self) -> usize {
        2 * self.cutoff + 1
    }

    pub fn with_ng(self, ng: R) -> Self {
        TransmonParams { ng, ..self }
    }
}

/// The CPB Hamiltonian in the charge basis, stored as its tridiagonal
/// bands (it is real symmetric by construction).
#[derive(Debug, Clone)]
pub struct ChargeHamiltonian<R> {
    /// 4(n − n_g)² for n = −N..=N.
    pub diagonal: Vec<R>,
    /// −(E_J/E_C)/2 coupling n ↔ n±1.
    pub off_diagonal: Vec<R>,
}

impl<R: Real> ChargeHamiltonian<R> {
    pub fn dimension(&self) -> usize {
        self.diagonal.len()
    }

    /// Dense copy, mostly for cross-checks against dense eigensolvers.
    pub fn to_dense(&self) -> Vec<Vec<R>> {
        let n = self.dimension();
        let mut m = vec![vec![R::zero(); n]; n];
        for i in 0..n {
            m[i][i] = self.diagonal[i];
            if i + 1 < n {
                m[i][i + 1] = self.off_diagonal[i];
                m[i + 1][i] = self.off_diagonal[i];
            }
        }
        m
    }
}

/// Assemble the dimensionless Hamiltonian (units of E_C).
pub fn build_hamiltonian<R: Real>(params: &TransmonParams<R>) -> ChargeHamiltonian<R> {
    let n = params.cutoff as i64;
    let diagonal = (-n..=n)
        .map(|q| {
            let dn = R::of(q as f64) - params.ng;
            R::of(4.0) * dn * dn
        })
        .collect();
    let off_diagonal = vec![-params.ej_over_ec * R::of(0.5); params.dimension() - 1];
    ChargeHamiltonian {
        diagonal,
        off_diagonal,
    }
}

/// Solved low-lying spectrum: energies ascending (units of E_C) and the
/// charge-basis amplitudes of each level.
///
/// The Hamiltonian is real symmetric, so the amplitudes are real once the
/// gauge is fixed (largest-magnitude coefficient positive); complex
/// structure only appears in φ-space quantities.
#[derive(Debug, Clone)]
pub struct Spectrum<R> {
    params: TransmonParams<R>,
    pub energies: Vec<R>,
    amplitudes: Vec<Vec<R>>,
}

impl<R: Real> Spectrum<R> {
    pub fn params(&self) -> &TransmonParams<R> {
        &self.params
    }

    pub fn num_levels(&self) -> usize {
        self.energies.len()
    }

    /// Charge-basis amplitudes c_n of `level`, indexed from n = −N.
    pub fn amplitudes(&self, level: usize) -> Result<&[R]> {
        self.amplitudes
            .get(level)
            .map(Vec::as_slice)
            .ok_or_else(|| level_range_error(level, self.energies.len()))
    }

    /// Charge number of basis index `i`.
    pub fn charge_number(&self, i: usize) -> i64 {
        i as i64 - self.params.cutoff as i64
    }

    /// E_j − E_i in units of E_C.
    pub fn transition_energy(&self, i: usize, j: usize) -> Result<R> {
        let n = self.energies.len();
        if i >= n || j >= n {
            return Err(level_range_error(i.max(j), n));
        }
        Ok(self.energies[j] - self.energies[i])
    }

    /// ψ(φ) = (1/√(2π)) Σ_n c_n e^{inφ}.
    pub fn wavefunction(&self, level: usize, phi: R) -> Result<Complex<R>> {
        let c = self.amplitudes(level)?;
        let mut acc = Complex::new(R::zero(), R::zero());
        for (i, &cn) in c.iter().enumerate() {
            let n = R::of(self.charge_number(i) as f64);
            acc = acc + Complex::from_polar(cn, n * phi);
        }
        let norm = R::of((2.0 * std::f64::consts::PI).sqrt());
        Ok(acc / norm)
    }

    /// ⟨i| sin φ |j⟩ computed two independent ways: the charge-basis
    /// ladder form (sin φ maps c_n ↦ (c_{n−1} − c_{n+1})/2i) and a
    /// φ-grid quadrature of the defining integral. Returns the ladder
    /// value after checking the two agree.
    pub fn sin_phi_matrix_element(&self, i: usize, j: usize) -> Result<Complex<R>> {
        let ci = self.amplitudes(i)?;
        let cj = self.amplitudes(j)?;

        // route (a): ladder form; real amplitudes make it purely imaginary
        let dim = ci.len();
        let s = compensated_sum((0..dim).map(|n| {
            let below = if n > 0 { cj[n - 1] } else { R::zero() };
            let above = if n + 1 < dim { cj[n + 1] } else { R::zero() };
            ci[n] * (below - above)
        }));
        // (below - above)/(2i) = -i (below - above)/2
        let route_a = Complex::new(R::zero(), -s * R::of(0.5));

        // route (b): periodic trapezoid of ψ_i*(φ) sin φ ψ_j(φ); exact for
        // trigonometric polynomials once the grid resolves every harmonic
        let grid = (4 * dim + 8).max(256);
        let step = R::of(2.0 * std::f64::consts::PI / grid as f64);
        let acc_re = compensated_sum((0..grid).map(|g| {
            let phi = R::of(-std::f64::consts::PI) + step * R::of(g as f64);
            let pi_ = self.wavefunction_unchecked(ci, phi);
            let pj = self.wavefunction_unchecked(cj, phi);
            (pi_.conj() * Complex::new(phi.sin(), R::zero()) * pj).re * step
        }));
        let acc_im = compensated_sum((0..grid).map(|g| {
            let phi = R::of(-std::f64::consts::PI) + step * R::of(g as f64);
            let pi_ = self.wavefunction_unchecked(ci, phi);
            let pj = self.wavefunction_unchecked(cj, phi);
            (pi_.conj() * Complex::new(phi.sin(), R::zero()) * pj).im * step
        }));
        let route_b = Complex::new(acc_re, acc_im);

        let tol = R::of(1e-6);
        let discrepancy = (route_a - route_b).norm();
        if discrepancy > tol {
            return Err(Error::RouteMismatch {
                context: format!("⟨{i}|sin φ|{j}⟩ ladder vs quadrature"),
                discrepancy: discrepancy.as_f64(),
                tolerance: tol.as_f64(),
            });
        }
        Ok(route_a)
    }

    fn wavefunction_unchecked(&self, c: &[R], phi: R) -> Complex<R> {
        let mut acc = Complex::new(R::zero(), R::zero());
        for (i, &cn) in c.iter().enumerate() {
            let n = R::of(self.charge_number(i) as f64);
            acc = acc + Complex::from_polar(cn, n * phi);
        }
        acc / R::of((2.0 * std::f64::consts::PI).sqrt())
    }
}

fn level_range_error(level: usize, available: usize) -> Error {
    Error::invalid(format!(
        "level {level} out of range ({available} levels solved)"
    ))
}

/// Diagonalize for the lowest `num_levels` eigenpairs.
pub fn solve_spectrum<R: Real>(
    params: &TransmonParams<R>,
    num_levels: usize,
) -> Result<Spectrum<R>> {
    params.validate()?;
    if num_levels == 0 || num_levels > params.dimension() {
        return Err(Error::invalid(format!(
            "num_levels = {num_levels} not in 1..={}",
            params.dimension()
        )));
    }
    let h = build_hamiltonian(params);
    let pairs = eigen::lowest_eigenpairs(&h.diagonal, &h.off_diagonal, num_levels)?;

    // gauge: make the largest-magnitude coefficient positive so matrix
    // element phases are reproducible across runs
    let mut amplitudes = pairs.vectors;
    for v in amplitudes.iter_mut() {
        let mut imax = 0;
        for (i, &c) in v.iter().enumerate() {
            if c.abs() > v[imax].abs() {
                imax = i;
            }
        }
        if v[imax] < R::zero() {
            for c in v.iter_mut() {
                *c = -*c;
            }
        }
    }

    Ok(Spectrum {
        params: *params,
        energies: pairs.values,
        amplitudes,
    })
}

/// Width (max − min) of band `band` over a uniform n_g grid on [0, 1].
pub fn charge_dispersion<R: Real>(
    params: &TransmonParams<R>,
    band: usize,
    ng_grid: usize,
) -> Result<R> {
    if ng_grid < 2 {
        return Err(Error::invalid("need at least 2 n_g grid points"));
    }
    let mut min = R::max_value();
    let mut max = -R::max_value();
    for g in 0..ng_grid {
        let ng = R::of(g as f64 / (ng_grid - 1) as f64);
        let sp = solve_spectrum(&params.with_ng(ng), band + 1)?;
        let e = sp.energies[band];
        min = min.min(e);
        max = max.max(e);
    }
    Ok(max - min)
}

/// (E₂₁ − E₁₀)/E₁₀; negative in the transmon regime.
pub fn relative_anharmonicity<R: Real>(params: &TransmonParams<R>) -> Result<R> {
    let sp = solve_spectrum(params, 3)?;
    let e01 = sp.energies[1] - sp.energies[0];
    let e12 = sp.energies[2] - sp.energies[1];
    let gap_floor = R::epsilon() * R::of(1e3) * sp.energies[1].abs().max(R::one());
    if e01.abs() <= gap_floor {
        return Err(Error::DegenerateLevels {
            lower: 0,
            upper: 1,
            gap: e01.as_f64(),
        });
    }
    Ok((e12 - e01) / e01)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(ej: f64, ng: f64, cutoff: usize) -> TransmonParams<f64> {
        TransmonParams::new(ej, ng, cutoff).unwrap()
    }

    #[test]
    fn hamiltonian_structure() {
        let h = build_hamiltonian(&params(2.0, 0.0, 1));
        assert_eq!(h.diagonal, vec![4.0, 0.0, 4.0]);
        assert_eq!(h.off_diagonal, vec![-1.0, -1.0]);
    }

    #[test]
    fn three_by_three_closed_form() {
        // diag (4,0,4), off -1: characteristic roots {4, 2 ± sqrt(6)}
        let sp = solve_spectrum(&params(2.0, 0.0, 1), 3).unwrap();
        let want = [2.0 - 6.0f64.sqrt(), 2.0 + 6.0f64.sqrt()];
        assert!((sp.energies[0] - want[0]).abs() < 1e-12);
        assert!((sp.energies[1] - 4.0).abs() < 1e-12);
        assert!((sp.energies[2] - want[1]).abs() < 1e-12);
    }

    #[test]
    fn charging_limit_spectrum() {
        // E_J -> 0: eigenvalues approach {0, 4, 4, 16, 16, ...}
        let sp = solve_spectrum(&params(1e-12, 0.0, 6), 5).unwrap();
        let want = [0.0, 4.0, 4.0, 16.0, 16.0];
        for (got, want) in sp.energies.iter().zip(want) {
            assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        }
    }

    #[test]
    fn charging_limit_offset_charge() {
        let sp = solve_spectrum(&params(1e-12, 0.25, 6), 1).unwrap();
        assert!((sp.energies[0] - 0.25).abs() < 1e-9);
    }

    #[test]
    fn sweet_spot_degeneracy() {
        // ng = 1/2, E_J -> 0: charge states n = 0, 1 both sit at 4(1/2)² = 1
        let sp = solve_spectrum(&params(1e-12, 0.5, 6), 2).unwrap();
        assert!((sp.energies[0] - 1.0).abs() < 1e-9);
        assert!((sp.energies[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn transmon_level_spacing_matches_oscillator_asymptotics() {
        // E01 ≈ sqrt(8 E_J/E_C) − 1 within 5% at E_J/E_C = 49
        let sp = solve_spectrum(&params(49.0, 0.0, 60), 2).unwrap();
        let e01 = sp.energies[1] - sp.energies[0];
        let asym = (8.0 * 49.0f64).sqrt() - 1.0;
        assert!((e01 - asym).abs() / asym < 0.05, "E01 = {e01}");
        // frozen from the N = 60 diagonalization
        assert!((e01 - 18.740_218_616_525_9).abs() < 1e-9, "E01 = {e01}");
    }

    #[test]
    fn anharmonicity_transmon_regime() {
        let a = relative_anharmonicity(&params(49.0, 0.0, 30)).unwrap();
        // Duffing sanity band: ≈ −E_C/E01 ≈ −0.053 within 25%
        let duffing = -1.0 / 18.740_218_6;
        assert!((a - duffing).abs() / duffing.abs() < 0.25, "a = {a}");
        assert!(a < 0.0);
    }

    #[test]
    fn anharmonicity_trend_with_ratio() {
        let mut prev = f64::MAX;
        for ej in [9.0, 25.0, 49.0] {
            let a = relative_anharmonicity(&params(ej, 0.0, 30))
                .unwrap()
                .abs();
            assert!(a < prev, "|anharmonicity| not decreasing at {ej}");
            prev = a;
        }
    }

    #[test]
    fn charging_limit_dispersion_is_unity() {
        // envelope of 4(n − ng)² parabolas spans [0, 1] on band 0
        let d = charge_dispersion(&params(1e-12, 0.0, 6), 0, 101).unwrap();
        assert!((d - 1.0).abs() < 1e-9, "dispersion {d}");
    }

    #[test]
    fn dispersion_decreases_with_ratio() {
        let mut prev = f64::MAX;
        for ej in [9.0, 25.0, 49.0] {
            let d = charge_dispersion(&params(ej, 0.0, 30), 0, 101).unwrap();
            assert!(d >= 0.0);
            assert!(d < prev, "dispersion not decreasing at E_J/E_C = {ej}");
            prev = d;
        }
    }

    #[test]
    fn flat_band_at_large_ratio() {
        // band-0 variation < 1e-6 E01 at E_J/E_C = 49 (exponentially flat)
        let p = params(49.0, 0.0, 30);
        let d = charge_dispersion(&p, 0, 101).unwrap();
        let sp = solve_spectrum(&p, 2).unwrap();
        let e01 = sp.energies[1] - sp.energies[0];
        assert!(d < 1e-6 * e01, "dispersion {d} vs E01 {e01}");
    }

    #[test]
    fn wavefunction_flat_in_charging_limit() {
        // single charge state: |ψ|² = 1/2π everywhere
        let sp = solve_spectrum(&params(1e-12, 0.0, 6), 1).unwrap();
        for k in 0..7 {
            let phi = -3.0 + k as f64;
            let p = sp.wavefunction(0, phi).unwrap().norm_sqr();
            assert!((p - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-9);
        }
    }

    #[test]
    fn wavefunction_normalized_on_grid() {
        // 2048-point trapezoid of |ψ|² over [−π, π] = 1 ± 1e-8
        let sp = solve_spectrum(&params(49.0, 0.0, 30), 4).unwrap();
        for level in 0..4 {
            let n = 2048;
            let step = 2.0 * std::f64::consts::PI / n as f64;
            let total: f64 = (0..n)
                .map(|g| {
                    let phi = -std::f64::consts::PI + g as f64 * step;
                    sp.wavefunction(level, phi).unwrap().norm_sqr() * step
                })
                .sum();
            assert!((total - 1.0).abs() < 1e-8, "level {level}: {total}");
        }
    }

    #[test]
    fn ground_state_peaked_at_zero_phase() {
        let sp = solve_spectrum(&params(49.0, 0.0, 30), 1).unwrap();
        let at0 = sp.wavefunction(0, 0.0).unwrap().norm_sqr();
        let at1 = sp.wavefunction(0, 1.0).unwrap().norm_sqr();
        let atpi = sp.wavefunction(0, std::f64::consts::PI).unwrap().norm_sqr();
        assert!(at0 > at1 && at1 > atpi);
        assert!(atpi < 1e-6 * at0, "cosine well confines the ground state");
    }

    #[test]
    fn matrix_element_headline_value() {
        let sp = solve_spectrum(&params(49.0, 0.0, 30), 2).unwrap();
        let me = sp.sin_phi_matrix_element(0, 1).unwrap();
        assert!((me.norm() - 0.414).abs() < 0.005, "|me| = {}", me.norm());
        // global phase is gauge; with our gauge the element is imaginary
        assert!(me.re.abs() < 1e-10);
        // harmonic comparison 1/sqrt(2 alpha) with alpha = sqrt(49/8)
        let harmonic = 1.0 / (2.0 * (49.0f64 / 8.0).sqrt()).sqrt();
        assert!((me.norm() - harmonic).abs() / harmonic < 0.10);
    }

    #[test]
    fn diagonal_element_vanishes_by_parity() {
        let sp = solve_spectrum(&params(49.0, 0.0, 30), 1).unwrap();
        let me = sp.sin_phi_matrix_element(0, 0).unwrap();
        assert!(me.norm() < 1e-10, "parity selection: {me}");
    }

    #[test]
    fn level_out_of_range_is_error() {
        let sp = solve_spectrum(&params(49.0, 0.0, 10), 2).unwrap();
        assert!(sp.wavefunction(5, 0.0).is_err());
        assert!(sp.sin_phi_matrix_element(0, 7).is_err());
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(TransmonParams::new(0.0, 0.0, 30).is_err());
        assert!(TransmonParams::new(-3.0, 0.0, 30).is_err());
        assert!(TransmonParams::new(49.0, 0.0, 0).is_err());
        assert!(solve_spectrum(&params(49.0, 0.0, 5), 12).is_err());
    }
}
