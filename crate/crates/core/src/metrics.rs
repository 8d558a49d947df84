//! Density measurements of a front: grid occupancy, covering radius, the
//! density time `tau(P, r)` and length growth.

use crate::error::{precondition, Result};
use crate::frontier::{init_front, ArcInterval, Front, PropagationParams};
use crate::par;
use crate::surfaces::cube::{Placement, Side};
use crate::surfaces::{Face, SurfaceModel, SurfacePoint};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityReport {
    pub t: f64,
    /// Requested cell side; actual cells are at most this wide.
    pub eps: f64,
    pub cells_total: usize,
    pub cells_hit: usize,
    pub covering_radius: f64,
    pub length: f64,
    pub n_components: usize,
    /// False on the cube, where distances come from a face-plus-neighbours
    /// atlas and the covering radius is an upper bound.
    pub distance_exact: bool,
}

impl DensityReport {
    pub fn hit_fraction(&self) -> f64 {
        if self.cells_total == 0 {
            0.0
        } else {
            self.cells_hit as f64 / self.cells_total as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TauEstimate {
    pub r: f64,
    /// First checkpoint from which every ball stayed hit up to `t_max`.
    pub tau: Option<f64>,
    pub t_max: f64,
    pub delta_t: f64,
    pub first_full_cover_time: Option<f64>,
    /// Persistence is only verified on the checkpoint grid `k * delta_t`.
    pub checkpoints: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LengthCurve {
    pub points: Vec<(f64, f64)>,
    /// Least-squares slope over the points with `t >= median(t)`.
    pub slope: f64,
}

/// Bucketed point set answering nearest-distance queries in a plane chart,
/// optionally periodic in both directions.
#[derive(Debug, Clone)]
pub struct PlanarIndex {
    x0: f64,
    y0: f64,
    width: f64,
    height: f64,
    nx: usize,
    ny: usize,
    bw: f64,
    bh: f64,
    periodic: bool,
    starts: Vec<u32>,
    pts: Vec<[f64; 2]>,
}

impl PlanarIndex {
    pub fn new(points: &[[f64; 2]], origin: [f64; 2], size: [f64; 2], periodic: bool) -> Self {
        let area = size[0] * size[1];
        let target = ((area / points.len().max(1) as f64).sqrt() * 4.0).max(size[0].min(size[1]) / 1024.0);
        let nx = ((size[0] / target).ceil() as usize).clamp(1, 4096);
        let ny = ((size[1] / target).ceil() as usize).clamp(1, 4096);
        let mut idx = PlanarIndex {
            x0: origin[0],
            y0: origin[1],
            width: size[0],
            height: size[1],
            nx,
            ny,
            bw: size[0] / nx as f64,
            bh: size[1] / ny as f64,
            periodic,
            starts: vec![0; nx * ny + 1],
            pts: Vec::new(),
        };
        let bins: Vec<usize> = points.iter().map(|p| idx.bin_of(*p)).collect();
        for &b in &bins {
            idx.starts[b + 1] += 1;
        }
        for i in 0..nx * ny {
            idx.starts[i + 1] += idx.starts[i];
        }
        let mut fill = idx.starts.clone();
        idx.pts = vec![[0.0; 2]; points.len()];
        for (p, &b) in points.iter().zip(&bins) {
            idx.pts[fill[b] as usize] = *p;
            fill[b] += 1;
        }
        idx
    }

    fn cell(&self, p: [f64; 2]) -> (usize, usize) {
        let i = ((p[0] - self.x0) / self.bw).floor();
        let j = ((p[1] - self.y0) / self.bh).floor();
        (
            i.clamp(0.0, (self.nx - 1) as f64) as usize,
            j.clamp(0.0, (self.ny - 1) as f64) as usize,
        )
    }

    fn bin_of(&self, p: [f64; 2]) -> usize {
        let (i, j) = self.cell(p);
        j * self.nx + i
    }

    fn dist(&self, a: [f64; 2], b: [f64; 2]) -> f64 {
        let (mut dx, mut dy) = (a[0] - b[0], a[1] - b[1]);
        if self.periodic {
            dx -= self.width * (dx / self.width).round();
            dy -= self.height * (dy / self.height).round();
        }
        dx.hypot(dy)
    }

    pub fn is_empty(&self) -> bool {
        self.pts.is_empty()
    }

    /// Distance from `q` to the nearest indexed point (`inf` when empty).
    pub fn nearest(&self, q: [f64; 2]) -> f64 {
        if self.pts.is_empty() {
            return f64::INFINITY;
        }
        let (ci, cj) = self.cell(q);
        let (ci, cj) = (ci as i64, cj as i64);
        let (nx, ny) = (self.nx as i64, self.ny as i64);
        let step = self.bw.min(self.bh);
        let mut best = f64::INFINITY;
        for k in 0i64.. {
            if self.periodic && 2 * k + 1 > nx.min(ny) {
                return self.pts.iter().fold(best, |m, p| m.min(self.dist(q, *p)));
            }
            if !self.periodic && k > nx.max(ny) {
                return best;
            }
            let mut visit = |i: i64, j: i64| {
                let (i, j) = if self.periodic {
                    (i.rem_euclid(nx), j.rem_euclid(ny))
                } else if i < 0 || j < 0 || i >= nx || j >= ny {
                    return;
                } else {
                    (i, j)
                };
                let b = (j * nx + i) as usize;
                for p in &self.pts[self.starts[b] as usize..self.starts[b + 1] as usize] {
                    best = best.min(self.dist(q, *p));
                }
            };
            if k == 0 {
                visit(ci, cj);
            } else {
                for d in -k..=k {
                    visit(ci + d, cj - k);
                    visit(ci + d, cj + k);
                }
                for d in -k + 1..k {
                    visit(ci - k, cj + d);
                    visit(ci + k, cj + d);
                }
            }
            if best <= k as f64 * step {
                return best;
            }
        }
        best
    }
}

/// Nearest-distance queries against the live samples of a front.
pub struct FrontLocator {
    surface: SurfaceModel,
    charts: Vec<PlanarIndex>,
    any_live: bool,
}

fn face_index(f: Face) -> usize {
    Face::ALL.iter().position(|&g| g == f).unwrap()
}

/// The face and its four edge neighbours unfolded around it.
fn atlas(face: Face, side: f64) -> Vec<Placement> {
    let base = Placement::identity(face);
    let mut v = vec![base];
    v.extend(Side::ALL.iter().map(|&s| base.across(side, s)));
    v
}

impl FrontLocator {
    pub fn new(front: &Front) -> Self {
        let pts: Vec<SurfacePoint> = front.live_samples().map(|s| s.pos).collect();
        let plane: Vec<[f64; 2]> = pts
            .iter()
            .filter_map(|p| match *p {
                SurfacePoint::Plane { x, y } => Some([x, y]),
                _ => None,
            })
            .collect();
        let charts = match front.surface {
            SurfaceModel::Torus { alpha, beta } => {
                vec![PlanarIndex::new(&plane, [0.0, 0.0], [alpha, beta], true)]
            }
            SurfaceModel::KleinBottle => {
                // Both lifts to the 1 x 2 torus cover.
                let mut lifted = plane.clone();
                lifted.extend(plane.iter().map(|p| [(1.0 - p[0]).rem_euclid(1.0), p[1] + 1.0]));
                vec![PlanarIndex::new(&lifted, [0.0, 0.0], [1.0, 2.0], true)]
            }
            SurfaceModel::RectBilliard { a, b } => vec![PlanarIndex::new(&plane, [0.0, 0.0], [a, b], false)],
            SurfaceModel::DiskBilliard { radius } => {
                vec![PlanarIndex::new(&plane, [-radius, -radius], [2.0 * radius, 2.0 * radius], false)]
            }
            SurfaceModel::CubeSurface { side } => {
                let mut per_face: Vec<Vec<(f64, f64)>> = vec![Vec::new(); 6];
                for p in &pts {
                    if let SurfacePoint::Cube { face, u, v } = *p {
                        per_face[face_index(face)].push((u, v));
                    }
                }
                Face::ALL
                    .iter()
                    .map(|&f| {
                        let mut local = Vec::new();
                        for pl in atlas(f, side) {
                            for &(u, v) in &per_face[face_index(pl.face)] {
                                let (x, y) = pl.map(u, v);
                                local.push([x, y]);
                            }
                        }
                        PlanarIndex::new(&local, [-side, -side], [3.0 * side, 3.0 * side], false)
                    })
                    .collect()
            }
        };
        FrontLocator {
            surface: front.surface,
            charts,
            any_live: !pts.is_empty(),
        }
    }

    pub fn has_points(&self) -> bool {
        self.any_live
    }

    pub fn nearest(&self, q: &SurfacePoint) -> f64 {
        match (self.surface, *q) {
            (SurfaceModel::CubeSurface { .. }, SurfacePoint::Cube { face, u, v }) => {
                self.charts[face_index(face)].nearest([u, v])
            }
            (_, SurfacePoint::Plane { x, y }) => self.charts[0].nearest([x, y]),
            _ => f64::NAN,
        }
    }
}

/// Occupancy grid in one chart; `counted` masks cells outside the domain.
struct CellGrid {
    x0: f64,
    y0: f64,
    nx: usize,
    ny: usize,
    cw: f64,
    ch: f64,
    counted: Vec<bool>,
    inner: Vec<bool>,
    hit: Vec<bool>,
}

impl CellGrid {
    fn new(x0: f64, y0: f64, w: f64, h: f64, eps: f64) -> Self {
        let nx = ((w / eps) - 1e-9).ceil().max(1.0) as usize;
        let ny = ((h / eps) - 1e-9).ceil().max(1.0) as usize;
        CellGrid {
            x0,
            y0,
            nx,
            ny,
            cw: w / nx as f64,
            ch: h / ny as f64,
            counted: vec![true; nx * ny],
            inner: vec![true; nx * ny],
            hit: vec![false; nx * ny],
        }
    }

    fn center(&self, i: usize, j: usize) -> (f64, f64) {
        (self.x0 + (i as f64 + 0.5) * self.cw, self.y0 + (j as f64 + 0.5) * self.ch)
    }

    fn cell_of(&self, x: f64, y: f64) -> (i64, i64) {
        (
            ((x - self.x0) / self.cw).floor() as i64,
            ((y - self.y0) / self.ch).floor() as i64,
        )
    }

    fn mark(&mut self, i: i64, j: i64, wrap: bool) {
        let (nx, ny) = (self.nx as i64, self.ny as i64);
        let (i, j) = if wrap {
            (i.rem_euclid(nx), j.rem_euclid(ny))
        } else {
            (i.clamp(0, nx - 1), j.clamp(0, ny - 1))
        };
        self.hit[(j * nx + i) as usize] = true;
    }

    fn hits(&self) -> usize {
        self.hit.iter().zip(&self.counted).filter(|(h, c)| **h && **c).count()
    }

    fn total(&self) -> usize {
        self.counted.iter().filter(|c| **c).count()
    }
}

/// Visits every grid cell crossed by the segment `a -> b` (unwrapped indices).
fn walk_cells(grid: &CellGrid, a: (f64, f64), b: (f64, f64), mut visit: impl FnMut(i64, i64)) {
    let (mut i, mut j) = grid.cell_of(a.0, a.1);
    let (ie, je) = grid.cell_of(b.0, b.1);
    visit(i, j);
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let step_i = if dx > 0.0 { 1 } else { -1 };
    let step_j = if dy > 0.0 { 1 } else { -1 };
    let next_boundary = |c: i64, step: i64, origin: f64, size: f64| origin + (c + i64::from(step > 0)) as f64 * size;
    let mut t_max_x = if dx != 0.0 {
        (next_boundary(i, step_i, grid.x0, grid.cw) - a.0) / dx
    } else {
        f64::INFINITY
    };
    let mut t_max_y = if dy != 0.0 {
        (next_boundary(j, step_j, grid.y0, grid.ch) - a.1) / dy
    } else {
        f64::INFINITY
    };
    let t_dx = if dx != 0.0 { grid.cw / dx.abs() } else { f64::INFINITY };
    let t_dy = if dy != 0.0 { grid.ch / dy.abs() } else { f64::INFINITY };
    let max_steps = (i - ie).abs() + (j - je).abs();
    for _ in 0..max_steps {
        if t_max_x < t_max_y {
            if t_max_x > 1.0 {
                break;
            }
            i += step_i;
            t_max_x += t_dx;
        } else {
            if t_max_y > 1.0 {
                break;
            }
            j += step_j;
            t_max_y += t_dy;
        }
        visit(i, j);
    }
}

fn wrapped(d: f64, m: f64) -> f64 {
    d - m * (d / m).round()
}

/// Grid occupancy, covering radius, length and component count of `front`
/// on an `eps`-grid laid over the surface.
pub fn density_report(front: &Front, eps: f64) -> Result<DensityReport> {
    if !(eps.is_finite() && eps > 0.0) {
        return precondition(format!("eps must be positive, got {eps}"));
    }
    if eps < 4.0 * front.params.h_max {
        return precondition(format!(
            "eps = {eps} is too small for h_max = {}; need eps >= 4 h_max",
            front.params.h_max
        ));
    }
    let surface = front.surface;
    let locator = FrontLocator::new(front);
    let mut grids: Vec<CellGrid> = match surface {
        SurfaceModel::Torus { alpha, beta } => vec![CellGrid::new(0.0, 0.0, alpha, beta, eps)],
        SurfaceModel::KleinBottle => vec![CellGrid::new(0.0, 0.0, 1.0, 1.0, eps)],
        SurfaceModel::RectBilliard { a, b } => vec![CellGrid::new(0.0, 0.0, a, b, eps)],
        SurfaceModel::DiskBilliard { radius } => {
            let mut g = CellGrid::new(-radius, -radius, 2.0 * radius, 2.0 * radius, eps);
            for j in 0..g.ny {
                for i in 0..g.nx {
                    let (cx, cy) = g.center(i, j);
                    g.counted[j * g.nx + i] = cx.hypot(cy) <= radius;
                    let far = (cx.abs() + 0.5 * g.cw).hypot(cy.abs() + 0.5 * g.ch);
                    g.inner[j * g.nx + i] = far <= radius;
                }
            }
            vec![g]
        }
        SurfaceModel::CubeSurface { side } => (0..6).map(|_| CellGrid::new(0.0, 0.0, side, side, eps)).collect(),
    };

    let seg_limit = 2.0 * eps;
    for comp in &front.components {
        for s in comp.samples.iter().filter(|s| s.alive) {
            mark_point(&mut grids, &surface, &s.pos);
        }
        for (a, b) in comp.pairs().filter(|(a, b)| a.alive && b.alive) {
            mark_segment(&mut grids, &surface, &a.pos, &b.pos, seg_limit);
        }
    }

    let mut centers = Vec::new();
    for (g_idx, g) in grids.iter().enumerate() {
        for j in 0..g.ny {
            for i in 0..g.nx {
                if g.inner[j * g.nx + i] {
                    let (x, y) = g.center(i, j);
                    centers.push(match surface {
                        SurfaceModel::CubeSurface { .. } => SurfacePoint::Cube {
                            face: Face::ALL[g_idx],
                            u: x,
                            v: y,
                        },
                        _ => SurfacePoint::plane(x, y),
                    });
                }
            }
        }
    }
    let covering_radius = par::map_collect(&centers, |c| locator.nearest(c))
        .into_iter()
        .fold(0.0, f64::max);

    Ok(DensityReport {
        t: front.t,
        eps,
        cells_total: grids.iter().map(CellGrid::total).sum(),
        cells_hit: grids.iter().map(CellGrid::hits).sum(),
        covering_radius,
        length: front.length(),
        n_components: front.component_count(),
        distance_exact: !surface.is_cube(),
    })
}

fn mark_point(grids: &mut [CellGrid], surface: &SurfaceModel, p: &SurfacePoint) {
    match *p {
        SurfacePoint::Plane { x, y } => {
            let g = &mut grids[0];
            let (i, j) = g.cell_of(x, y);
            let wrap = matches!(surface, SurfaceModel::Torus { .. } | SurfaceModel::KleinBottle);
            g.mark(i, j, wrap);
        }
        SurfacePoint::Cube { face, u, v } => {
            let g = &mut grids[face_index(face)];
            let (i, j) = g.cell_of(u, v);
            g.mark(i, j, false);
        }
    }
}

fn mark_segment(grids: &mut [CellGrid], surface: &SurfaceModel, a: &SurfacePoint, b: &SurfacePoint, limit: f64) {
    match (*surface, *a, *b) {
        (SurfaceModel::Torus { alpha, beta }, SurfacePoint::Plane { x: ax, y: ay }, SurfacePoint::Plane { x: bx, y: by }) => {
            let end = (ax + wrapped(bx - ax, alpha), ay + wrapped(by - ay, beta));
            if (end.0 - ax).hypot(end.1 - ay) <= limit {
                let g = &mut grids[0];
                let mut cells = Vec::new();
                walk_cells(g, (ax, ay), end, |i, j| cells.push((i, j)));
                for (i, j) in cells {
                    g.mark(i, j, true);
                }
            }
        }
        (SurfaceModel::KleinBottle, SurfacePoint::Plane { x: ax, y: ay }, SurfacePoint::Plane { x: bx, y: by }) => {
            // Walk in the 1 x 2 torus cover towards the closer lift of b.
            let direct = (wrapped(bx - ax, 1.0), wrapped(by - ay, 2.0));
            let glide = (wrapped(1.0 - bx - ax, 1.0), wrapped(by + 1.0 - ay, 2.0));
            let d = if direct.0.hypot(direct.1) <= glide.0.hypot(glide.1) { direct } else { glide };
            if d.0.hypot(d.1) <= limit {
                let g = &mut grids[0];
                let (nx, ny) = (g.nx as i64, g.ny as i64);
                let mut cells = Vec::new();
                walk_cells(g, (ax, ay), (ax + d.0, ay + d.1), |i, j| cells.push((i, j)));
                for (i, j) in cells {
                    let (i, j) = (i.rem_euclid(nx), j.rem_euclid(2 * ny));
                    if j >= ny {
                        g.mark(nx - 1 - i, j - ny, false);
                    } else {
                        g.mark(i, j, false);
                    }
                }
            }
        }
        (SurfaceModel::RectBilliard { .. } | SurfaceModel::DiskBilliard { .. }, SurfacePoint::Plane { x: ax, y: ay }, SurfacePoint::Plane { x: bx, y: by }) => {
            if (bx - ax).hypot(by - ay) <= limit {
                let g = &mut grids[0];
                let mut cells = Vec::new();
                walk_cells(g, (ax, ay), (bx, by), |i, j| cells.push((i, j)));
                for (i, j) in cells {
                    g.mark(i, j, false);
                }
            }
        }
        (SurfaceModel::CubeSurface { .. }, SurfacePoint::Cube { face: fa, u: ua, v: va }, SurfacePoint::Cube { face: fb, u: ub, v: vb }) => {
            if fa == fb && (ub - ua).hypot(vb - va) <= limit {
                let g = &mut grids[face_index(fa)];
                let mut cells = Vec::new();
                walk_cells(g, (ua, va), (ub, vb), |i, j| cells.push((i, j)));
                for (i, j) in cells {
                    g.mark(i, j, false);
                }
            }
        }
        _ => {}
    }
}

/// Ball centres spaced at most `spacing` apart over the surface.
pub fn ball_centers(surface: &SurfaceModel, spacing: f64) -> Vec<SurfacePoint> {
    let steps = |len: f64| ((len / spacing) - 1e-9).ceil().max(1.0) as usize;
    let mut out = Vec::new();
    match *surface {
        SurfaceModel::Torus { alpha: w, beta: h } | SurfaceModel::RectBilliard { a: w, b: h } => {
            let periodic = matches!(surface, SurfaceModel::Torus { .. });
            let (nx, ny) = (steps(w), steps(h));
            let (ex, ey) = if periodic { (nx - 1, ny - 1) } else { (nx, ny) };
            for j in 0..=ey {
                for i in 0..=ex {
                    out.push(SurfacePoint::plane(w * i as f64 / nx as f64, h * j as f64 / ny as f64));
                }
            }
        }
        SurfaceModel::KleinBottle => {
            let n = steps(1.0);
            for j in 0..n {
                for i in 0..n {
                    out.push(SurfacePoint::plane(i as f64 / n as f64, j as f64 / n as f64));
                }
            }
        }
        SurfaceModel::DiskBilliard { radius } => {
            let n = steps(2.0 * radius);
            for j in 0..=n {
                for i in 0..=n {
                    let x = -radius + 2.0 * radius * i as f64 / n as f64;
                    let y = -radius + 2.0 * radius * j as f64 / n as f64;
                    if x.hypot(y) <= radius {
                        out.push(SurfacePoint::plane(x, y));
                    }
                }
            }
        }
        SurfaceModel::CubeSurface { side } => {
            let n = steps(side);
            for face in Face::ALL {
                for j in 0..=n {
                    for i in 0..=n {
                        out.push(SurfacePoint::Cube {
                            face,
                            u: side * i as f64 / n as f64,
                            v: side * j as f64 / n as f64,
                        });
                    }
                }
            }
        }
    }
    out
}

/// True iff every ball of radius `r` on the surface meets the sampled front,
/// checked through balls of radius `r / 2` on a grid of spacing `r / 2`.
pub fn all_balls_hit(front: &Front, r: f64) -> bool {
    let locator = FrontLocator::new(front);
    if !locator.has_points() {
        return false;
    }
    if r > front.surface.diameter_bound() {
        return true;
    }
    let centers = ball_centers(&front.surface, 0.5 * r);
    par::map_collect(&centers, |c| locator.nearest(c) < 0.5 * r)
        .into_iter()
        .all(|hit| hit)
}

/// Density time `tau(P, r)` on the checkpoint grid `k * delta_t <= t_max`.
pub fn estimate_tau(
    surface: SurfaceModel,
    source: SurfacePoint,
    r: f64,
    t_max: f64,
    delta_t: f64,
    params: PropagationParams,
    n0: usize,
) -> Result<TauEstimate> {
    if !(r.is_finite() && r > 2.0 * params.h_max) {
        return precondition(format!("r = {r} must exceed 2 h_max = {}", 2.0 * params.h_max));
    }
    if !(delta_t.is_finite() && delta_t > 0.0 && t_max.is_finite() && t_max >= 0.0) {
        return precondition("delta_t must be > 0 and t_max >= 0");
    }
    let mut front = init_front(surface, source, ArcInterval::full(), n0, params)?;
    let n = (t_max / delta_t + 1e-9).floor() as usize;
    let mut hits = Vec::with_capacity(n + 1);
    for k in 0..=n {
        front.propagate(k as f64 * delta_t)?;
        hits.push(all_balls_hit(&front, r));
    }
    let first = hits.iter().position(|&h| h);
    let tail_start = hits.iter().rposition(|&h| !h).map_or(0, |i| i + 1);
    let tau = (tail_start <= n).then_some(tail_start as f64 * delta_t);
    Ok(TauEstimate {
        r,
        tau,
        t_max,
        delta_t,
        first_full_cover_time: first.map(|k| k as f64 * delta_t),
        checkpoints: n + 1,
    })
}

/// Ordinary least-squares slope of `y` against `x`.
pub fn ols_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    if points.len() < 2 {
        return f64::NAN;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Front length at each time of `t_list`, with the slope fitted over the upper half.
pub fn length_growth_curve(
    surface: SurfaceModel,
    source: SurfacePoint,
    t_list: &[f64],
    params: PropagationParams,
    n0: usize,
) -> Result<LengthCurve> {
    if t_list.is_empty() || t_list.windows(2).any(|w| w[1] <= w[0]) || t_list[0] < 0.0 {
        return precondition("t_list must be non-empty, non-negative and strictly increasing");
    }
    let mut front = init_front(surface, source, ArcInterval::full(), n0, params)?;
    let mut points = Vec::with_capacity(t_list.len());
    for &t in t_list {
        front.propagate(t)?;
        points.push((t, front.length()));
    }
    let m = median(t_list);
    let upper: Vec<(f64, f64)> = points.iter().copied().filter(|p| p.0 >= m).collect();
    Ok(LengthCurve {
        slope: ols_slope(&upper),
        points,
    })
}
