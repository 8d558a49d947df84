//! Wave fronts as adaptively refined polylines over initial directions.
//!
//! A [`Front`] holds samples `theta -> exp_P(t e^{i theta})` grouped into
//! components, each a maximal interval of directions whose image has stayed a
//! connected curve. Propagation advances through fixed checkpoints; at each
//! one every sample is re-evaluated and gaps wider than `h_max` are bisected.
//! A gap that cannot be closed before its width drops below `theta_min`, or
//! whose bisection hits a dead direction (a cube vertex), is a tear and
//! splits the component.

use std::f64::consts::TAU;

use crate::error::{precondition, Error, Result};
use crate::par;
use crate::surfaces::{exp_unchecked, surface_distance, CoverPoint, SurfaceModel, SurfacePoint};

/// Interval of initial directions `[lo, hi]`, `hi - lo <= 2 pi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcInterval {
    pub lo: f64,
    pub hi: f64,
}

impl ArcInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi && hi - lo <= TAU) {
            return precondition(format!("invalid arc [{lo}, {hi}]"));
        }
        Ok(ArcInterval { lo, hi })
    }

    pub fn full() -> Self {
        ArcInterval { lo: 0.0, hi: TAU }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// The whole circle of directions, which closes up on itself.
    pub fn is_full(&self) -> bool {
        self.width() >= TAU
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationParams {
    /// Target distance between neighbouring samples on the surface.
    pub h_max: f64,
    /// Narrowest direction gap that will still be bisected.
    pub theta_min: f64,
    /// Spacing of the refinement checkpoints in time.
    pub delta_t_check: f64,
    pub sample_budget: usize,
}

impl PropagationParams {
    pub fn for_surface(surface: &SurfaceModel) -> Self {
        let delta_t_check = match *surface {
            SurfaceModel::CubeSurface { side } => 0.1 * side,
            _ => 0.5,
        };
        PropagationParams {
            h_max: 0.005 * surface.min_extent(),
            theta_min: 1e-12,
            delta_t_check,
            sample_budget: 1 << 22,
        }
    }

    pub fn with_h_max(mut self, h_max: f64) -> Self {
        self.h_max = h_max;
        self
    }

    pub fn validate(&self, arc: &ArcInterval) -> Result<()> {
        let pos = |v: f64| v.is_finite() && v > 0.0;
        if !(pos(self.h_max) && pos(self.theta_min) && pos(self.delta_t_check) && self.sample_budget > 0) {
            return precondition(format!("propagation parameters must be positive: {self:?}"));
        }
        if arc.width() > 0.0 && self.theta_min >= arc.width() {
            return precondition("theta_min must be smaller than the arc width");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontSample {
    pub theta: f64,
    pub pos: SurfacePoint,
    pub cover: CoverPoint,
    pub alive: bool,
    /// Set when the geodesic hit a cube vertex; `pos` is then its last position.
    pub death_time: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrontComponent {
    pub interval: ArcInterval,
    /// Strictly increasing in `theta`.
    pub samples: Vec<FrontSample>,
    pub split_time: f64,
    /// The full circle of directions with no tear yet: the last sample is
    /// joined back to the first.
    pub closed: bool,
}

impl FrontComponent {
    pub fn live_count(&self) -> usize {
        self.samples.iter().filter(|s| s.alive).count()
    }

    /// Neighbouring sample pairs, including the closing pair of a closed component.
    pub fn pairs(&self) -> impl Iterator<Item = (&FrontSample, &FrontSample)> {
        let n = self.samples.len();
        let closing = (self.closed && n > 1).then(|| (&self.samples[n - 1], &self.samples[0]));
        self.samples.windows(2).map(|w| (&w[0], &w[1])).chain(closing)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeadDirection {
    pub theta: f64,
    pub death_time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Front {
    pub surface: SurfaceModel,
    pub source: SurfacePoint,
    pub t: f64,
    pub arc: ArcInterval,
    pub components: Vec<FrontComponent>,
    pub params: PropagationParams,
    pub dead: Vec<DeadDirection>,
}

enum Piece {
    Sample(FrontSample),
    Tear,
    Dead(FrontSample),
}

fn reduce_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Front at `t = 0` with `n0` equally spaced directions over `arc`.
pub fn init_front(
    surface: SurfaceModel,
    source: SurfacePoint,
    arc: ArcInterval,
    n0: usize,
    params: PropagationParams,
) -> Result<Front> {
    surface.validate()?;
    surface.validate_source(&source)?;
    params.validate(&arc)?;
    if n0 < 4 {
        return precondition(format!("need at least 4 initial samples, got {n0}"));
    }
    let closed = arc.is_full();
    let thetas: Vec<f64> = if closed {
        (0..n0).map(|i| arc.lo + arc.width() * i as f64 / n0 as f64).collect()
    } else {
        (0..n0)
            .map(|i| arc.lo + arc.width() * i as f64 / (n0 - 1) as f64)
            .collect()
    };
    let samples = thetas
        .iter()
        .map(|&theta| sample_at(&surface, &source, theta, 0.0))
        .collect::<Result<Vec<_>>>()?;
    Ok(Front {
        surface,
        source,
        t: 0.0,
        arc,
        components: vec![FrontComponent {
            interval: arc,
            samples,
            split_time: 0.0,
            closed,
        }],
        params,
        dead: Vec::new(),
    })
}

pub(crate) fn sample_at(surface: &SurfaceModel, source: &SurfacePoint, theta: f64, t: f64) -> Result<FrontSample> {
    let e = exp_unchecked(surface, source, reduce_angle(theta), t)?;
    Ok(FrontSample {
        theta,
        pos: e.pos,
        cover: e.cover,
        alive: e.alive,
        death_time: (!e.alive).then_some(e.stopped_at),
    })
}

impl Front {
    pub fn sample_count(&self) -> usize {
        self.components.iter().map(|c| c.samples.len()).sum()
    }

    pub fn live_samples(&self) -> impl Iterator<Item = &FrontSample> {
        self.components.iter().flat_map(|c| c.samples.iter()).filter(|s| s.alive)
    }

    /// Advances the front to `t_target` through the checkpoint grid
    /// `k * delta_t_check`, refining at every checkpoint.
    pub fn propagate(&mut self, t_target: f64) -> Result<()> {
        if !(t_target.is_finite() && t_target >= self.t) {
            return precondition(format!("cannot propagate from t={} to t={t_target}", self.t));
        }
        let dt = self.params.delta_t_check;
        while self.t < t_target {
            let k = (self.t / dt + 1e-9).floor() + 1.0;
            let next = (k * dt).min(t_target);
            self.checkpoint(next)?;
        }
        Ok(())
    }

    fn checkpoint(&mut self, t: f64) -> Result<()> {
        let surface = self.surface;
        let source = self.source;
        for comp in &mut self.components {
            par::try_update(&mut comp.samples, |s| {
                if s.alive {
                    *s = sample_at(&surface, &source, s.theta, t)?;
                }
                Ok(())
            })?;
        }
        let old = std::mem::take(&mut self.components);
        let mut total = 0usize;
        let mut next = Vec::with_capacity(old.len());
        for (idx, comp) in old.into_iter().enumerate() {
            for piece in self.refine_component(comp, t, idx, total)? {
                total += piece.samples.len();
                next.push(piece);
            }
            if total > self.params.sample_budget {
                return Err(Error::Numerical(format!(
                    "sample budget {} exceeded while refining component {idx} at t={t}",
                    self.params.sample_budget
                )));
            }
        }
        next.sort_by(|a, b| a.interval.lo.total_cmp(&b.interval.lo));
        self.components = next;
        self.t = t;
        Ok(())
    }

    fn refine_component(
        &mut self,
        comp: FrontComponent,
        t: f64,
        idx: usize,
        already: usize,
    ) -> Result<Vec<FrontComponent>> {
        let n = comp.samples.len();
        let gaps = if comp.closed { n } else { n.saturating_sub(1) };
        let surface = self.surface;
        let h_max = self.params.h_max;
        let samples = &comp.samples;
        let bad = par::filter_range(gaps, |i| {
            let (a, b) = (&samples[i], &samples[(i + 1) % n]);
            a.alive && b.alive && surface_distance(&surface, &a.pos, &b.pos) > h_max
        });
        // Without tears (everywhere but the cube) a gap of length d needs at
        // least ceil(d / h_max) - 1 new samples, so hopeless refinements fail
        // before any bisection.
        let needed: f64 = if surface.is_cube() {
            0.0
        } else {
            bad
            .iter()
            .map(|&i| {
                let d = surface_distance(&surface, &samples[i].pos, &samples[(i + 1) % n].pos);
                (d / h_max).ceil() - 1.0
            })
            .sum()
        };
        if (already + n) as f64 + needed > self.params.sample_budget as f64 {
            return Err(Error::Numerical(format!(
                "sample budget {} exceeded while refining component {idx} at t={t}",
                self.params.sample_budget
            )));
        }
        let has_dead = samples.iter().any(|s| !s.alive);
        if bad.is_empty() && !has_dead {
            return Ok(vec![comp]);
        }
        let refined = par::map_collect(&bad, |&i| {
            let (a, b) = (&samples[i], &samples[(i + 1) % n]);
            let b_theta = if i + 1 == n { b.theta + TAU } else { b.theta };
            let mut out = Vec::new();
            self.bisect(a, b, b_theta, t, &mut out)?;
            Ok::<_, Error>(out)
        });
        let mut fills = Vec::with_capacity(bad.len());
        for r in refined {
            fills.push(r?);
        }
        let clean = !has_dead && fills.iter().flatten().all(|p| matches!(p, Piece::Sample(_)));
        let inserted: usize = fills.iter().map(Vec::len).sum();

        if clean {
            // Insertions only: merge without changing the component structure.
            let mut merged = Vec::with_capacity(n + inserted);
            let mut fill_iter = bad.iter().zip(fills).peekable();
            for (i, s) in comp.samples.into_iter().enumerate() {
                merged.push(s);
                if fill_iter.peek().is_some_and(|(&j, _)| j == i) {
                    let (_, pieces) = fill_iter.next().unwrap();
                    merged.extend(pieces.into_iter().map(|p| match p {
                        Piece::Sample(s) => s,
                        _ => unreachable!(),
                    }));
                }
            }
            let lo = merged[0].theta;
            let hi = if comp.closed { lo + TAU } else { merged[merged.len() - 1].theta };
            return Ok(vec![FrontComponent {
                interval: ArcInterval { lo, hi },
                samples: merged,
                ..comp
            }]);
        }

        let mut seq = Vec::with_capacity(n + inserted);
        let mut fill_iter = bad.iter().zip(fills).peekable();
        for (i, s) in comp.samples.into_iter().enumerate() {
            seq.push(if s.alive { Piece::Sample(s) } else { Piece::Dead(s) });
            if fill_iter.peek().is_some_and(|(&j, _)| j == i) {
                seq.extend(fill_iter.next().unwrap().1);
            }
        }

        let breaks = |p: &Piece| !matches!(p, Piece::Sample(_));
        if comp.closed {
            match seq.iter().position(breaks) {
                None => {
                    let samples: Vec<FrontSample> = seq
                        .into_iter()
                        .filter_map(|p| match p {
                            Piece::Sample(s) => Some(s),
                            _ => None,
                        })
                        .collect();
                    let lo = samples[0].theta;
                    return Ok(vec![FrontComponent {
                        interval: ArcInterval { lo, hi: lo + TAU },
                        samples,
                        split_time: comp.split_time,
                        closed: true,
                    }]);
                }
                Some(j) => {
                    // Open the circle at its first break; directions that come
                    // after it wrap around into the next turn.
                    let mut tail = seq.split_off(j);
                    let brk = tail.remove(0);
                    for p in &mut seq {
                        match p {
                            Piece::Sample(s) | Piece::Dead(s) => s.theta += TAU,
                            Piece::Tear => {}
                        }
                    }
                    tail.extend(seq);
                    tail.push(brk);
                    seq = tail;
                }
            }
        }

        let split = comp.closed || seq.iter().any(breaks);
        let split_time = if split { t } else { comp.split_time };
        let mut out = Vec::new();
        let mut current: Vec<FrontSample> = Vec::new();
        let flush = |current: &mut Vec<FrontSample>, out: &mut Vec<FrontComponent>| {
            if !current.is_empty() {
                let samples = std::mem::take(current);
                out.push(FrontComponent {
                    interval: ArcInterval {
                        lo: samples[0].theta,
                        hi: samples[samples.len() - 1].theta,
                    },
                    samples,
                    split_time,
                    closed: false,
                });
            }
        };
        for p in seq {
            match p {
                Piece::Sample(s) => current.push(s),
                Piece::Tear => flush(&mut current, &mut out),
                Piece::Dead(s) => {
                    self.dead.push(DeadDirection {
                        theta: reduce_angle(s.theta),
                        death_time: s.death_time.unwrap_or(t),
                    });
                    flush(&mut current, &mut out);
                }
            }
        }
        flush(&mut current, &mut out);
        Ok(out)
    }

    fn bisect(&self, a: &FrontSample, b: &FrontSample, b_theta: f64, t: f64, out: &mut Vec<Piece>) -> Result<()> {
        if surface_distance(&self.surface, &a.pos, &b.pos) <= self.params.h_max {
            return Ok(());
        }
        if b_theta - a.theta < self.params.theta_min {
            out.push(Piece::Tear);
            return Ok(());
        }
        let mid = a.theta + 0.5 * (b_theta - a.theta);
        let m = sample_at(&self.surface, &self.source, mid, t)?;
        if !m.alive {
            out.push(Piece::Dead(m));
            return Ok(());
        }
        self.bisect(a, &m, mid, t, out)?;
        out.push(Piece::Sample(m));
        self.bisect(&m, b, b_theta, t, out)
    }

    /// Immersed length: polyline arclength summed over components, with
    /// multiplicity where sheets overlap.
    pub fn length(&self) -> f64 {
        self.components
            .iter()
            .map(|c| {
                c.pairs()
                    .filter(|(a, b)| a.alive && b.alive)
                    .map(|(a, b)| surface_distance(&self.surface, &a.pos, &b.pos))
                    .sum::<f64>()
            })
            .sum()
    }

    /// Components with at least two live samples.
    pub fn component_count(&self) -> usize {
        self.components.iter().filter(|c| c.live_count() >= 2).count()
    }

    /// Largest distance between neighbouring live samples of one component.
    pub fn max_gap(&self) -> f64 {
        self.components
            .iter()
            .flat_map(|c| c.pairs())
            .filter(|(a, b)| a.alive && b.alive)
            .map(|(a, b)| surface_distance(&self.surface, &a.pos, &b.pos))
            .fold(0.0, f64::max)
    }

    /// Distance from `q` to the nearest live sample.
    pub fn min_distance_to(&self, q: &SurfacePoint) -> f64 {
        self.live_samples()
            .map(|s| surface_distance(&self.surface, &s.pos, q))
            .fold(f64::INFINITY, f64::min)
    }

    /// Lengths of the individual components.
    pub fn component_lengths(&self) -> Vec<f64> {
        self.components
            .iter()
            .filter(|c| c.live_count() >= 2)
            .map(|c| {
                c.pairs()
                    .map(|(a, b)| surface_distance(&self.surface, &a.pos, &b.pos))
                    .sum()
            })
            .collect()
    }
}

/// Builds and propagates a full-circle front in one call.
pub fn propagate_from(
    surface: SurfaceModel,
    source: SurfacePoint,
    t: f64,
    n0: usize,
    params: PropagationParams,
) -> Result<Front> {
    let mut front = init_front(surface, source, ArcInterval::full(), n0, params)?;
    front.propagate(t)?;
    Ok(front)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surfaces::Face;
    use std::f64::consts::PI;

    fn torus() -> SurfaceModel {
        SurfaceModel::torus(1.0, 1.0).unwrap()
    }

    #[test]
    fn init_full_circle_at_source() {
        let f = init_front(torus(), SurfacePoint::plane(0.0, 0.0), ArcInterval::full(), 8, PropagationParams::for_surface(&torus())).unwrap();
        assert_eq!(f.components.len(), 1);
        assert_eq!(f.components[0].samples.len(), 8);
        assert!(f.live_samples().all(|s| s.pos == SurfacePoint::plane(0.0, 0.0)));
        assert_eq!(f.length(), 0.0);
    }

    #[test]
    fn init_half_arc_spacing() {
        let arc = ArcInterval::new(0.0, PI).unwrap();
        let f = init_front(torus(), SurfacePoint::plane(0.5, 0.5), arc, 4, PropagationParams::for_surface(&torus())).unwrap();
        let th: Vec<f64> = f.components[0].samples.iter().map(|s| s.theta).collect();
        let want = [0.0, PI / 3.0, 2.0 * PI / 3.0, PI];
        for (a, b) in th.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn init_rejects_vertex_and_small_n0() {
        let cube = SurfaceModel::cube(1.0).unwrap();
        let p = PropagationParams::for_surface(&cube);
        let v = SurfacePoint::Cube { face: Face::U, u: 0.0, v: 0.0 };
        assert!(init_front(cube, v, ArcInterval::full(), 16, p).is_err());
        assert!(init_front(torus(), SurfacePoint::plane(0.1, 0.1), ArcInterval::full(), 3, PropagationParams::for_surface(&torus())).is_err());
    }

    #[test]
    fn small_torus_front_is_round_circle() {
        let mut f = init_front(torus(), SurfacePoint::plane(0.0, 0.0), ArcInterval::full(), 64, PropagationParams::for_surface(&torus())).unwrap();
        f.propagate(0.25).unwrap();
        assert_eq!(f.component_count(), 1);
        for s in f.live_samples() {
            let d = surface_distance(&f.surface, &s.pos, &f.source);
            assert!((d - 0.25).abs() < 1e-12);
        }
        assert!(f.max_gap() <= f.params.h_max);
        let rel = f.length() / (2.0 * PI * 0.25);
        assert!(rel <= 1.0 && rel > 0.999);
    }

    #[test]
    fn propagate_backwards_rejected() {
        let mut f = init_front(torus(), SurfacePoint::plane(0.0, 0.0), ArcInterval::full(), 16, PropagationParams::for_surface(&torus())).unwrap();
        f.propagate(1.0).unwrap();
        assert!(f.propagate(0.5).is_err());
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let mut p = PropagationParams::for_surface(&torus());
        p.sample_budget = 500;
        let mut f = init_front(torus(), SurfacePoint::plane(0.0, 0.0), ArcInterval::full(), 16, p).unwrap();
        let err = f.propagate(5.0).unwrap_err();
        assert!(matches!(err, Error::Numerical(ref m) if m.contains("component")), "{err}");
    }

    #[test]
    fn cube_front_tears_at_four_corners() {
        let cube = SurfaceModel::cube(1.0).unwrap();
        let src = SurfacePoint::Cube { face: Face::U, u: 0.5, v: 0.5 };
        let mut f = init_front(cube, src, ArcInterval::full(), 256, PropagationParams::for_surface(&cube)).unwrap();
        f.propagate(0.5).unwrap();
        assert_eq!(f.component_count(), 1);
        f.propagate(1.0).unwrap();
        assert_eq!(f.component_count(), 4);
        assert!(f.max_gap() <= f.params.h_max);
        for c in &f.components {
            assert!(c.samples.windows(2).all(|w| w[0].theta < w[1].theta));
            assert!(c.split_time > 0.7);
        }
    }

    #[test]
    fn disk_centre_front_collapses_back() {
        let disk = SurfaceModel::disk(1.0).unwrap();
        let mut f = init_front(disk, SurfacePoint::plane(0.0, 0.0), ArcInterval::full(), 128, PropagationParams::for_surface(&disk)).unwrap();
        f.propagate(2.0).unwrap();
        assert_eq!(f.component_count(), 1);
        for s in f.live_samples() {
            let (x, y) = s.pos.chart();
            assert!(x.hypot(y) <= f.params.h_max);
        }
    }
}
