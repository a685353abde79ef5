//! Adaptive Gauss-Kronrod (7/15) quadrature with panel sums kept in log space.
//!
//! Integrands are supplied as their natural log. The real line is truncated
//! to `center ± 12 scale`, which for the Gaussian products handled here
//! leaves a tail mass far below double precision.

#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};
use crate::numerics::{log_sum_exp_raw, LogValue};

const KRONROD_NODES: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const KRONROD_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7.
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadratureOptions {
    pub rel_tol: f64,
    pub max_panels: usize,
    /// Half-width of the integration window in units of `scale`.
    pub half_width: f64,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            max_panels: 4000,
            half_width: 12.0,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    log_value: f64,
    log_error: f64,
}

/// Integrates `exp(log_integrand)` over the real line.
///
/// `center` and `scale` must locate the bulk of the mass; see
/// [`locate_log_peak`] when they are not known up front.
pub fn integrate_log_1d<F>(log_integrand: F, center: f64, scale: f64, rel_tol: f64) -> Result<LogValue>
where
    F: Fn(f64) -> f64,
{
    integrate_log_1d_with(
        log_integrand,
        center,
        scale,
        QuadratureOptions {
            rel_tol,
            ..QuadratureOptions::default()
        },
    )
}

pub fn integrate_log_1d_with<F>(
    log_integrand: F,
    center: f64,
    scale: f64,
    opts: QuadratureOptions,
) -> Result<LogValue>
where
    F: Fn(f64) -> f64,
{
    if !center.is_finite() || !scale.is_finite() || scale <= 0.0 {
        return Err(Error::domain(format!(
            "quadrature window needs finite center and positive scale (center={center}, scale={scale})"
        )));
    }
    if !(opts.rel_tol > 0.0 && opts.rel_tol <= 0.1) {
        return Err(Error::domain(format!(
            "rel_tol must lie in (0, 0.1], got {}",
            opts.rel_tol
        )));
    }

    // One initial panel per unit of scale so a peak at `center` is never
    // straddled by a single coarse rule.
    let n_initial = (2.0 * opts.half_width).ceil().max(1.0) as usize;
    let lo = center - opts.half_width * scale;
    let width = 2.0 * opts.half_width * scale / n_initial as f64;
    let mut panels = Vec::with_capacity(opts.max_panels.max(n_initial));
    for i in 0..n_initial {
        let a = lo + i as f64 * width;
        let b = if i + 1 == n_initial { center + opts.half_width * scale } else { a + width };
        panels.push(gauss_kronrod(&log_integrand, a, b)?);
    }

    let log_tol = opts.rel_tol.ln();
    loop {
        let total = log_sum_exp_raw(panels.iter().map(|p| p.log_value));
        let error = log_sum_exp_raw(panels.iter().map(|p| p.log_error));
        if total.is_zero() {
            return Ok(total);
        }
        let achieved = error.ln() - total.ln();
        if achieved <= log_tol {
            return Ok(total);
        }
        if panels.len() >= opts.max_panels {
            return Err(Error::Convergence {
                estimate: total,
                achieved: achieved.exp(),
                requested: opts.rel_tol,
                panels: panels.len(),
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.log_error.total_cmp(&b.1.log_error))
            .map(|(i, _)| i)
            .expect("at least one panel");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.lo + p.hi);
        if mid <= p.lo || mid >= p.hi {
            // cannot bisect further in double precision
            return Err(Error::Convergence {
                estimate: total,
                achieved: achieved.exp(),
                requested: opts.rel_tol,
                panels: panels.len() + 1,
            });
        }
        panels.push(gauss_kronrod(&log_integrand, p.lo, mid)?);
        panels.push(gauss_kronrod(&log_integrand, mid, p.hi)?);
    }
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Result<Panel> {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut kronrod = [0.0; 15];
    let mut gauss = [0.0; 7];
    let mut g = 0;
    for (k, (&node, &weight)) in KRONROD_NODES.iter().zip(&KRONROD_WEIGHTS).enumerate() {
        let xs: &[f64] = if node == 0.0 { &[mid] } else { &[mid - half * node, mid + half * node] };
        for &x in xs {
            let lf = f(x);
            if lf.is_nan() || lf == f64::INFINITY {
                return Err(Error::domain(format!("log integrand returned {lf} at x={x}")));
            }
            let idx = if node == 0.0 { 14 } else if x < mid { 2 * k } else { 2 * k + 1 };
            kronrod[idx] = weight.ln() + lf;
            if k % 2 == 1 {
                gauss[g] = GAUSS_WEIGHTS[k / 2].ln() + lf;
                g += 1;
            }
        }
    }
    debug_assert_eq!(g, 7);
    let log_half = half.ln();
    let k_val = log_sum_exp_raw(kronrod.iter().copied()).ln() + log_half;
    let g_val = log_sum_exp_raw(gauss.iter().copied()).ln() + log_half;
    let log_error = if k_val == f64::NEG_INFINITY {
        f64::NEG_INFINITY
    } else {
        // |K - G| = K |1 - exp(G - K)|, floored at rounding level
        let rel = (g_val - k_val).exp_m1().abs().max(50.0 * f64::EPSILON);
        k_val + rel.ln()
    };
    Ok(Panel {
        lo,
        hi,
        log_value: k_val,
        log_error,
    })
}

/// Finds the mode and curvature scale of a log-concave integrand by Newton
/// steps on central finite differences, starting from a rough guess.
///
/// Returns `(center, scale)` suitable for [`integrate_log_1d`]. For the
/// exactly quadratic log-integrands of Gaussian products one step suffices;
/// a few more absorb rounding.
pub fn locate_log_peak<F>(log_integrand: F, guess_center: f64, guess_scale: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    if !guess_center.is_finite() || !guess_scale.is_finite() || guess_scale <= 0.0 {
        return Err(Error::domain("peak search needs a finite center and positive scale"));
    }
    let mut center = guess_center;
    let mut scale = guess_scale;
    for _ in 0..4 {
        let h = scale;
        let (lm, l0, lp) = (log_integrand(center - h), log_integrand(center), log_integrand(center + h));
        if !(lm.is_finite() && l0.is_finite() && lp.is_finite()) {
            return Err(Error::domain(format!(
                "log integrand not finite near x={center} (step {h})"
            )));
        }
        let curvature = (lp - 2.0 * l0 + lm) / (h * h);
        if curvature.is_nan() || curvature >= 0.0 {
            return Err(Error::domain("log integrand is not concave at the probe point"));
        }
        let slope = (lp - lm) / (2.0 * h);
        center -= slope / curvature;
        scale = (-1.0 / curvature).sqrt();
    }
    Ok((center, scale))
}
