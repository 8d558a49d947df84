//! Lattice-point counts in discs and annuli, and a direct numeric check of
//! the rectangle argument behind the torus density rate `3/sqrt(t)`.

use std::f64::consts::PI;

use crate::error::{precondition, Result};
use crate::metrics::PlanarIndex;
use crate::par;

/// Largest radius for which counts are enumerated.
pub const T_BUDGET: f64 = 1e4;

/// Constant of the `E(t) <= C t^(2/3)` sanity envelope. Only used for flagging.
pub const ENVELOPE_C: f64 = 10.0;

/// Sampling step along the graph piece in [`theorem1_rectangle_check`].
pub const RECT_SPACING: f64 = 0.005;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeCount {
    pub t: f64,
    pub h: f64,
    pub n_t: u64,
    pub annulus_count: u64,
    pub expected_area: f64,
    pub e_t: f64,
    /// `sqrt(2) * 2 pi t`.
    pub gauss_bound: f64,
    pub within_gauss_bound: bool,
    pub within_envelope: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorTerm {
    pub t: f64,
    pub e_t: f64,
    pub gauss_bound: f64,
    pub within_gauss_bound: bool,
    /// `ENVELOPE_C * t^(2/3)`.
    pub envelope: f64,
    pub within_envelope: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusCount {
    pub count: u64,
    pub expected: f64,
    /// Bound on `|count - expected|` implied by the `t^(2/3)` envelope at both radii.
    pub envelope: f64,
    pub within_envelope: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RectCheckReport {
    pub t: f64,
    pub a: f64,
    pub b: f64,
    pub height: f64,
    pub slope_max: f64,
    /// Largest `|f(x+1) - f(x)|` over a sample grid of `[a, b]`.
    pub increment_max: f64,
    /// Upper bound: max over cell centres plus half a cell diagonal.
    pub projected_covering_radius: f64,
    pub bound: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReturnPrediction {
    pub t: f64,
    pub h: f64,
    pub min_distance: f64,
    pub nearest: (i64, i64),
    /// Lattice points `L` with `| |L| - t | <= h`.
    pub within_h: u64,
}

fn check_radius(t: f64) -> Result<()> {
    if !(t.is_finite() && t >= 0.0) {
        return precondition(format!("radius must be finite and >= 0, got {t}"));
    }
    if t > T_BUDGET {
        return precondition(format!("radius {t} exceeds the enumeration budget {T_BUDGET}"));
    }
    Ok(())
}

/// Number of `(m, n)` in Z^2 with `m^2 + n^2 <= t^2`, by testing every pair in the bounding square.
pub fn gauss_count(t: f64) -> Result<u64> {
    check_radius(t)?;
    let r = t.floor() as i64;
    let r2 = t * t;
    let rows: Vec<i64> = (-r..=r).collect();
    let counts = par::map_collect(&rows, |&m| {
        (-r..=r).filter(|&n| ((m * m + n * n) as f64) <= r2).count() as u64
    });
    Ok(counts.into_iter().sum())
}

/// Largest `n >= 0` with `n^2 <= x`, or -1 if `x < 0`.
fn isqrt_floor(x: f64) -> i64 {
    if x < 0.0 {
        return -1;
    }
    let mut n = x.sqrt().floor() as i64;
    while ((n + 1) * (n + 1)) as f64 <= x {
        n += 1;
    }
    while n > 0 && (n * n) as f64 > x {
        n -= 1;
    }
    n
}

/// Same count as [`gauss_count`], summing `2 floor(sqrt(t^2 - m^2)) + 1` over rows.
pub fn gauss_count_rows(t: f64) -> Result<u64> {
    check_radius(t)?;
    let r = t.floor() as i64;
    let r2 = t * t;
    Ok((-r..=r)
        .map(|m| {
            let n = isqrt_floor(r2 - (m * m) as f64);
            if n < 0 {
                0
            } else {
                (2 * n + 1) as u64
            }
        })
        .sum())
}

fn envelope(t: f64) -> f64 {
    ENVELOPE_C * t.powf(2.0 / 3.0)
}

/// Count in the half-open shell `t < |x| <= t + h`, next to its area `2 pi t h`.
pub fn annulus_count(t: f64, h: f64) -> Result<AnnulusCount> {
    if !(t > 0.0 && h >= 0.0 && h.is_finite()) {
        return precondition(format!("annulus needs t > 0 and h >= 0, got t={t}, h={h}"));
    }
    check_radius(t + h)?;
    let count = gauss_count(t + h)? - gauss_count(t)?;
    let expected = 2.0 * PI * t * h;
    let env = envelope(t) + envelope(t + h) + PI * h * h;
    Ok(AnnulusCount {
        count,
        expected,
        envelope: env,
        within_envelope: (count as f64 - expected).abs() <= env,
    })
}

/// `E(t) = N(t) - pi t^2` with the quoted bounds evaluated as flags.
///
/// Gauss's `|E| <= sqrt(2) 2 pi t` does not hold for very small radii
/// (`t = 0.1` gives `E = 0.97 > 0.89`), so it is reported, not asserted.
pub fn error_term(t: f64) -> Result<ErrorTerm> {
    if !(t > 0.0) {
        return precondition(format!("error term needs t > 0, got {t}"));
    }
    let e_t = gauss_count(t)? as f64 - PI * t * t;
    let gauss_bound = 2f64.sqrt() * 2.0 * PI * t;
    Ok(ErrorTerm {
        t,
        e_t,
        gauss_bound,
        within_gauss_bound: e_t.abs() <= gauss_bound,
        envelope: envelope(t),
        within_envelope: e_t.abs() <= envelope(t),
    })
}

/// One CSV row of the `lattice` series.
pub fn lattice_count(t: f64, h: f64) -> Result<LatticeCount> {
    let et = error_term(t)?;
    let ann = annulus_count(t, h)?;
    Ok(LatticeCount {
        t,
        h,
        n_t: gauss_count(t)?,
        annulus_count: ann.count,
        expected_area: ann.expected,
        e_t: et.e_t,
        gauss_bound: et.gauss_bound,
        within_gauss_bound: et.within_gauss_bound,
        within_envelope: et.within_envelope && ann.within_envelope,
    })
}

/// Checks the rectangle `[a, b] x [f(a), f(b)]` with `a = -2 sqrt(t)`,
/// `b = -sqrt(2t)` and `f(x) = sqrt(t^2 - x^2)`: slope, height and the
/// covering radius of the graph piece reduced mod 1, each against `3/sqrt(t)`.
pub fn theorem1_rectangle_check(t: f64) -> Result<RectCheckReport> {
    if !(t.is_finite() && t > 36.0 / 5.0) {
        return precondition(format!("rectangle check needs t > 36/5, got {t}"));
    }
    let f = |x: f64| (t * t - x * x).sqrt();
    let a = -2.0 * t.sqrt();
    let b = -(2.0 * t).sqrt();
    let bound = 3.0 / t.sqrt();
    // |f'(x)| = |x| / sqrt(t^2 - x^2) grows with |x|, so the max sits at a.
    let slope_max = a.abs() / (t * t - a * a).sqrt();
    let height = f(b) - f(a);

    let width = b - a;
    let n_inc = ((width / RECT_SPACING).ceil() as usize).max(1);
    let increment_max = (0..=n_inc)
        .map(|i| {
            let x = a + width * i as f64 / n_inc as f64;
            (f(x + 1.0) - f(x)).abs()
        })
        .fold(0.0, f64::max);

    // Step in x so that consecutive graph points are at most RECT_SPACING apart.
    let dx = RECT_SPACING / (1.0 + slope_max * slope_max).sqrt();
    let n_pts = (width / dx).ceil() as usize;
    let pts: Vec<[f64; 2]> = (0..=n_pts)
        .map(|i| {
            let x = a + width * i as f64 / n_pts as f64;
            [x.rem_euclid(1.0), f(x).rem_euclid(1.0)]
        })
        .collect();
    let index = PlanarIndex::new(&pts, [0.0, 0.0], [1.0, 1.0], true);
    let cells = (1.0 / RECT_SPACING).round() as usize;
    let cell = 1.0 / cells as f64;
    let centers: Vec<[f64; 2]> = (0..cells * cells)
        .map(|k| [((k % cells) as f64 + 0.5) * cell, ((k / cells) as f64 + 0.5) * cell])
        .collect();
    let projected_covering_radius = par::map_collect(&centers, |c| index.nearest(*c))
        .into_iter()
        .fold(0.0, f64::max)
        + cell * std::f64::consts::FRAC_1_SQRT_2;

    let passed = slope_max <= bound
        && increment_max <= bound
        && (height - 1.0).abs() <= bound
        && projected_covering_radius <= bound;
    Ok(RectCheckReport {
        t,
        a,
        b,
        height,
        slope_max,
        increment_max,
        projected_covering_radius,
        bound,
        passed,
    })
}

/// Predicted distance from the front `W_t((0,0))` on the unit torus back to
/// its source: `min_L | |L| - t |` over lattice points `L`.
pub fn wavefront_return_oracle(t: f64, h: f64) -> Result<ReturnPrediction> {
    if !(t > 0.0 && h > 0.0) {
        return precondition(format!("oracle needs t > 0 and h > 0, got t={t}, h={h}"));
    }
    check_radius(t + h)?;
    let mut best = (f64::INFINITY, (0i64, 0i64));
    let top = t.ceil() as i64 + 1;
    for m in 0..=top {
        let rem = t * t - (m * m) as f64;
        let n0 = if rem > 0.0 { rem.sqrt().floor() as i64 } else { 0 };
        for n in [n0, n0 + 1] {
            let d = ((m as f64).hypot(n as f64) - t).abs();
            if d < best.0 {
                best = (d, (m, n));
            }
        }
    }
    let lo = (t - h).max(0.0);
    let hi = t + h;
    let r = hi.floor() as i64;
    let within_h = (-r..=r)
        .map(|m| {
            let outer = isqrt_floor(hi * hi - (m * m) as f64);
            let inner = if lo > 0.0 {
                // Largest n with m^2 + n^2 < lo^2.
                let x = lo * lo - (m * m) as f64;
                let mut n = isqrt_floor(x);
                while n >= 0 && ((m * m + n * n) as f64) >= lo * lo {
                    n -= 1;
                }
                n
            } else {
                -1
            };
            let count = |k: i64| if k < 0 { 0 } else { (2 * k + 1) as u64 };
            count(outer) - count(inner)
        })
        .sum();
    Ok(ReturnPrediction {
        t,
        h,
        min_distance: best.0,
        nearest: best.1,
        within_h,
    })
}
