//! Adaptive 1-D quadrature on Gauss–Kronrod 7–15 panels.
//!
//! The engine keeps a worst-error heap of panels and bisects until the
//! summed error estimate meets the tolerance. Panel results are reduced
//! in interval order with compensated summation, so a given integrand and
//! option set always produces the same value regardless of evaluation
//! interleaving.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::real::Real;

// Gauss-Kronrod 7-15 abscissae and weights (QUADPACK values).
const XGK15: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
const WG7: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];
const WGK15: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Neumaier compensated accumulator; the summation primitive used by every
/// reduction in the crate that must be reproducible.
#[derive(Debug, Clone, Copy)]
pub struct CompensatedSum<R> {
    sum: R,
    compensation: R,
}

impl<R: Real> Default for CompensatedSum<R> {
    fn default() -> Self {
        Self::new()
    }
}

impl<R: Real> CompensatedSum<R> {
    pub fn new() -> Self {
        CompensatedSum {
            sum: R::zero(),
            compensation: R::zero(),
        }
    }

    pub fn add(&mut self, x: R) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> R {
        self.sum + self.compensation
    }
}

/// Sum a sequence with Neumaier compensation.
pub fn compensated_sum<R: Real>(values: impl IntoIterator<Item = R>) -> R {
    let mut acc = CompensatedSum::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions<R> {
    /// Relative tolerance on the accumulated integral.
    pub rel_tol: R,
    /// Absolute tolerance floor.
    pub abs_tol: R,
    /// Hard cap on the number of panels.
    pub max_panels: usize,
    /// Uniform panels to seed the heap with. Oscillatory integrands need
    /// enough initial panels that no panel spans many periods, otherwise
    /// the error estimator can be fooled.
    pub initial_panels: usize,
}

impl<R: Real> Default for QuadOptions<R> {
    fn default() -> Self {
        QuadOptions {
            rel_tol: R::of(1e-10),
            abs_tol: R::zero(),
            max_panels: 4096,
            initial_panels: 1,
        }
    }
}

impl<R: Real> QuadOptions<R> {
    pub fn with_tolerances(rel_tol: R, abs_tol: R) -> Self {
        QuadOptions {
            rel_tol,
            abs_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult<R> {
    pub value: R,
    pub error_estimate: R,
    pub panels: usize,
    pub evaluations: usize,
}

struct Panel<R> {
    a: R,
    b: R,
    value: R,
    error: R,
}

impl<R: Real> PartialEq for Panel<R> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<R: Real> Eq for Panel<R> {}
impl<R: Real> PartialOrd for Panel<R> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<R: Real> Ord for Panel<R> {
    fn cmp(&self, other: &Self) -> Ordering {
        // errors are checked finite before insertion
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
    }
}

fn gauss_kronrod_15<R: Real, F: Fn(R) -> R>(f: &F, a: R, b: R) -> Result<(R, R)> {
    let half = (b - a) * R::of(0.5);
    let center = (a + b) * R::of(0.5);

    let f_center = f(center);
    let mut kronrod = CompensatedSum::new();
    let mut gauss = CompensatedSum::new();
    kronrod.add(R::of(WGK15[7]) * f_center);
    gauss.add(R::of(WG7[3]) * f_center);

    let mut values = [R::zero(); 7];
    for (j, &node) in XGK15.iter().take(7).enumerate() {
        let dx = half * R::of(node);
        let sum = f(center - dx) + f(center + dx);
        values[j] = sum;
        kronrod.add(R::of(WGK15[j]) * sum);
    }
    // odd Kronrod indices are the embedded 7-point Gauss nodes
    for j in 0..3 {
        gauss.add(R::of(WG7[j]) * values[2 * j + 1]);
    }

    let value = kronrod.value() * half;
    if !value.is_finite() {
        return Err(Error::NonFinite("quadrature panel".into()));
    }
    let error = ((kronrod.value() - gauss.value()) * half).abs();
    Ok((value, error))
}

/// Integrate `f` over `[a, b]`.
///
/// Fails with [`Error::Convergence`] when the panel budget is exhausted
/// before the error estimate meets `max(abs_tol, rel_tol * |I|)`.
pub fn adaptive_quad<R: Real, F: Fn(R) -> R>(
    f: F,
    a: R,
    b: R,
    opts: &QuadOptions<R>,
) -> Result<QuadResult<R>> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::invalid("quadrature bounds must be finite"));
    }
    if a == b {
        return Ok(QuadResult {
            value: R::zero(),
            error_estimate: R::zero(),
            panels: 0,
            evaluations: 0,
        });
    }

    let n0 = opts.initial_panels.clamp(1, opts.max_panels);
    let width = (b - a) / R::of(n0 as f64);
    let mut heap: BinaryHeap<Panel<R>> = BinaryHeap::new();
    let mut evaluations = 0usize;

    for i in 0..n0 {
        let pa = a + width * R::of(i as f64);
        let pb = if i + 1 == n0 {
            b
        } else {
            a + width * R::of((i + 1) as f64)
        };
        let (value, error) = gauss_kronrod_15(&f, pa, pb)?;
        evaluations += 15;
        heap.push(Panel {
            a: pa,
            b: pb,
            value,
            error,
        });
    }

    let totals = |heap: &BinaryHeap<Panel<R>>| {
        let total: R = compensated_sum(heap.iter().map(|p| p.value));
        let err: R = compensated_sum(heap.iter().map(|p| p.error));
        (total, err)
    };

    loop {
        let (total, err) = totals(&heap);
        let target = opts.abs_tol.max(opts.rel_tol * total.abs());
        if err <= target {
            break;
        }
        if heap.len() >= opts.max_panels {
            return Err(Error::Convergence {
                context: "adaptive quadrature".into(),
                achieved: err.as_f64(),
                requested: target.as_f64(),
            });
        }

        // refine a batch of the worst panels between global re-checks; the
        // O(n) error re-sum then amortizes to O(n log n) overall
        let budget = opts.max_panels - heap.len();
        let batch = (heap.len() / 8).max(1).min(budget);
        let mut stalled = true;
        for _ in 0..batch {
            let worst = heap.pop().expect("heap non-empty");
            let mid = (worst.a + worst.b) * R::of(0.5);
            if mid <= worst.a || mid >= worst.b {
                // interval already at floating-point resolution
                heap.push(worst);
                continue;
            }
            stalled = false;
            let (lv, le) = gauss_kronrod_15(&f, worst.a, mid)?;
            let (rv, re) = gauss_kronrod_15(&f, mid, worst.b)?;
            evaluations += 30;
            heap.push(Panel {
                a: worst.a,
                b: mid,
                value: lv,
                error: le,
            });
            heap.push(Panel {
                a: mid,
                b: worst.b,
                value: rv,
                error: re,
            });
        }
        if stalled {
            return Err(Error::Convergence {
                context: "adaptive quadrature (intervals at resolution limit)".into(),
                achieved: err.as_f64(),
                requested: target.as_f64(),
            });
        }
    }

    // deterministic reduction: sort panels by position, then compensated sum
    let mut panels: Vec<Panel<R>> = heap.into_vec();
    panels.sort_by(|p, q| p.a.partial_cmp(&q.a).unwrap_or(Ordering::Equal));
    let value = compensated_sum(panels.iter().map(|p| p.value));
    let error_estimate = compensated_sum(panels.iter().map(|p| p.error));

    Ok(QuadResult {
        value,
        error_estimate,
        panels: panels.len(),
        evaluations,
    })
}
