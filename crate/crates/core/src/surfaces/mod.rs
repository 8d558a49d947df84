//! Flat surface models and their exponential maps.
//!
//! All evaluation is stateless: `exp_point` maps `(P, theta, t)` straight to
//! the endpoint of the unit-speed geodesic, in closed form on the torus,
//! Klein bottle and rectangle, and by an event walk on the disk and cube.

pub mod cube;
pub mod disk;

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

pub use cube::{trace_cube_ray, CubeRotation, CubeTrace, Face};

use crate::error::{precondition, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SurfaceModel {
    /// `R/(alpha Z) x R/(beta Z)`.
    Torus { alpha: f64, beta: f64 },
    /// Unit square with `(0, y) ~ (1, y)` and `(x, 0) ~ (1 - x, 1)`.
    KleinBottle,
    RectBilliard { a: f64, b: f64 },
    DiskBilliard { radius: f64 },
    CubeSurface { side: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SurfacePoint {
    Plane { x: f64, y: f64 },
    Cube { face: Face, u: f64, v: f64 },
}

/// Position of a geodesic endpoint in the universal cover (the developed
/// plane), together with the bookkeeping collected on the way.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CoverPoint {
    pub x: f64,
    pub y: f64,
    /// Accumulated cube rotation; identity for the other surfaces.
    pub group: CubeRotation,
    /// Wall hits (disk only).
    pub reflections: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicEnd {
    pub pos: SurfacePoint,
    pub cover: CoverPoint,
    pub alive: bool,
    /// `t` for a live geodesic; the time of the vertex hit otherwise.
    pub stopped_at: f64,
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        precondition(format!("{name} must be finite and > 0, got {v}"))
    }
}

impl SurfaceModel {
    pub fn torus(alpha: f64, beta: f64) -> Result<Self> {
        Ok(SurfaceModel::Torus {
            alpha: positive("alpha", alpha)?,
            beta: positive("beta", beta)?,
        })
    }

    pub fn rect(a: f64, b: f64) -> Result<Self> {
        Ok(SurfaceModel::RectBilliard {
            a: positive("a", a)?,
            b: positive("b", b)?,
        })
    }

    pub fn disk(radius: f64) -> Result<Self> {
        Ok(SurfaceModel::DiskBilliard {
            radius: positive("radius", radius)?,
        })
    }

    pub fn cube(side: f64) -> Result<Self> {
        Ok(SurfaceModel::CubeSurface {
            side: positive("side", side)?,
        })
    }

    /// Re-checks the shape parameters (useful for values built by hand).
    pub fn validate(&self) -> Result<()> {
        match *self {
            SurfaceModel::Torus { alpha, beta } => Self::torus(alpha, beta).map(drop),
            SurfaceModel::KleinBottle => Ok(()),
            SurfaceModel::RectBilliard { a, b } => Self::rect(a, b).map(drop),
            SurfaceModel::DiskBilliard { radius } => Self::disk(radius).map(drop),
            SurfaceModel::CubeSurface { side } => Self::cube(side).map(drop),
        }
    }

    /// Smallest linear extent of the surface (used to scale defaults).
    pub fn min_extent(&self) -> f64 {
        match *self {
            SurfaceModel::Torus { alpha, beta } => alpha.min(beta),
            SurfaceModel::KleinBottle => 1.0,
            SurfaceModel::RectBilliard { a, b } => a.min(b),
            SurfaceModel::DiskBilliard { radius } => 2.0 * radius,
            SurfaceModel::CubeSurface { side } => side,
        }
    }

    /// An upper bound on the intrinsic diameter.
    pub fn diameter_bound(&self) -> f64 {
        match *self {
            SurfaceModel::Torus { alpha, beta } => 0.5 * alpha.hypot(beta),
            // Distances never exceed those on the 1 x 2 torus cover.
            SurfaceModel::KleinBottle => 0.5 * 1f64.hypot(2.0),
            SurfaceModel::RectBilliard { a, b } => a.hypot(b),
            SurfaceModel::DiskBilliard { radius } => 2.0 * radius,
            SurfaceModel::CubeSurface { side } => 2.5 * side,
        }
    }

    pub fn is_cube(&self) -> bool {
        matches!(self, SurfaceModel::CubeSurface { .. })
    }

    /// Checks that `p` lies in this surface's fundamental domain.
    pub fn validate_point(&self, p: &SurfacePoint) -> Result<()> {
        let in_range = |v: f64, hi: f64| v.is_finite() && (0.0..=hi).contains(&v);
        let ok = match (*self, *p) {
            (SurfaceModel::Torus { alpha, beta }, SurfacePoint::Plane { x, y }) => {
                in_range(x, alpha) && in_range(y, beta)
            }
            (SurfaceModel::KleinBottle, SurfacePoint::Plane { x, y }) => in_range(x, 1.0) && in_range(y, 1.0),
            (SurfaceModel::RectBilliard { a, b }, SurfacePoint::Plane { x, y }) => in_range(x, a) && in_range(y, b),
            (SurfaceModel::DiskBilliard { radius }, SurfacePoint::Plane { x, y }) => {
                x.is_finite() && y.is_finite() && x.hypot(y) <= radius * (1.0 + 1e-12)
            }
            (SurfaceModel::CubeSurface { side }, SurfacePoint::Cube { u, v, .. }) => {
                in_range(u, side) && in_range(v, side)
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            precondition(format!("point {p} is not in the domain of {self}"))
        }
    }

    /// Checks that `p` can emit a wave front (cube vertices cannot).
    pub fn validate_source(&self, p: &SurfacePoint) -> Result<()> {
        self.validate_point(p)?;
        if let (SurfaceModel::CubeSurface { side }, SurfacePoint::Cube { face, u, v }) = (*self, *p) {
            if cube::vertex_distance(side, u, v) <= cube::CORNER_TOLERANCE * side {
                return precondition(format!("source {face}/{u}/{v} is a cube vertex"));
            }
        }
        Ok(())
    }
}

impl fmt::Display for SurfaceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceModel::Torus { alpha, beta } => write!(f, "torus:{alpha},{beta}"),
            SurfaceModel::KleinBottle => write!(f, "klein"),
            SurfaceModel::RectBilliard { a, b } => write!(f, "rect:{a},{b}"),
            SurfaceModel::DiskBilliard { radius } => write!(f, "disk:{radius}"),
            SurfaceModel::CubeSurface { side } => write!(f, "cube:{side}"),
        }
    }
}

fn parse_num(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Precondition(format!("`{s}` is not a number")))
}

fn parse_pair(s: &str) -> Result<(f64, f64)> {
    match s.split_once(',') {
        Some((a, b)) => Ok((parse_num(a)?, parse_num(b)?)),
        None => precondition(format!("expected `a,b`, got `{s}`")),
    }
}

impl FromStr for SurfaceModel {
    type Err = Error;

    /// `torus:alpha,beta` | `klein` | `rect:a,b` | `disk:radius` | `cube:side`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, args) = s.split_once(':').unwrap_or((s, ""));
        match kind {
            "torus" => {
                let (a, b) = parse_pair(args)?;
                SurfaceModel::torus(a, b)
            }
            "klein" if args.is_empty() => Ok(SurfaceModel::KleinBottle),
            "rect" => {
                let (a, b) = parse_pair(args)?;
                SurfaceModel::rect(a, b)
            }
            "disk" => SurfaceModel::disk(parse_num(args)?),
            "cube" => SurfaceModel::cube(parse_num(args)?),
            _ => precondition(format!("unknown surface `{s}`")),
        }
    }
}

impl fmt::Display for SurfacePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfacePoint::Plane { x, y } => write!(f, "{x},{y}"),
            SurfacePoint::Cube { face, u, v } => write!(f, "{face}/{u}/{v}"),
        }
    }
}

impl FromStr for SurfacePoint {
    type Err = Error;

    /// `x,y` or `FACE/u/v`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split('/').collect();
        match parts.as_slice() {
            [face, u, v] => Ok(SurfacePoint::Cube {
                face: face.parse()?,
                u: parse_num(u)?,
                v: parse_num(v)?,
            }),
            [xy] => {
                let (x, y) = parse_pair(xy)?;
                Ok(SurfacePoint::Plane { x, y })
            }
            _ => precondition(format!("cannot parse point `{s}`")),
        }
    }
}

impl SurfacePoint {
    pub fn plane(x: f64, y: f64) -> Self {
        SurfacePoint::Plane { x, y }
    }

    /// Coordinates within the point's chart (face chart on the cube).
    pub fn chart(&self) -> (f64, f64) {
        match *self {
            SurfacePoint::Plane { x, y } => (x, y),
            SurfacePoint::Cube { u, v, .. } => (u, v),
        }
    }
}

/// `x mod m` in `[0, m)`, guarding the rounding case that lands on `m`.
fn wrap(x: f64, m: f64) -> f64 {
    let r = x.rem_euclid(m);
    if r >= m {
        0.0
    } else {
        r
    }
}

/// Folds a coordinate of the mod-`2a` cover onto `[0, a]`.
pub fn tent(x: f64, a: f64) -> f64 {
    let r = x.rem_euclid(2.0 * a);
    (a - (r - a).abs()).clamp(0.0, a)
}

/// Reduces a point of the plane by the Klein bottle group.
pub fn klein_reduce(x: f64, y: f64) -> (f64, f64) {
    let k = y.floor();
    let mut yr = y - k;
    let mut odd = k.rem_euclid(2.0) == 1.0;
    if yr >= 1.0 {
        yr = 0.0;
        odd = !odd;
    }
    let xr = if odd { wrap(1.0 - x, 1.0) } else { wrap(x, 1.0) };
    (xr, yr)
}

fn point_key(p: &SurfacePoint) -> (u8, f64, f64) {
    match *p {
        SurfacePoint::Plane { x, y } => (0, x, y),
        SurfacePoint::Cube { face, u, v } => (1 + face as u8, u, v),
    }
}

/// Unit-speed geodesic from `p` in direction `theta` evaluated at time `t`.
pub fn exp_point(surface: &SurfaceModel, p: &SurfacePoint, theta: f64, t: f64) -> Result<GeodesicEnd> {
    if !(theta.is_finite() && (0.0..TAU).contains(&theta)) {
        return precondition(format!("theta must lie in [0, 2pi), got {theta}"));
    }
    if !(t.is_finite() && t >= 0.0) {
        return precondition(format!("time must be finite and >= 0, got {t}"));
    }
    surface.validate_point(p)?;
    exp_unchecked(surface, p, theta, t)
}

pub(crate) fn exp_unchecked(surface: &SurfaceModel, p: &SurfacePoint, theta: f64, t: f64) -> Result<GeodesicEnd> {
    let (c, s) = (theta.cos(), theta.sin());
    let (px, py) = p.chart();
    let (lx, ly) = (px + t * c, py + t * s);
    let lifted = CoverPoint {
        x: lx,
        y: ly,
        ..CoverPoint::default()
    };
    let live = |pos| GeodesicEnd {
        pos,
        cover: lifted,
        alive: true,
        stopped_at: t,
    };
    Ok(match *surface {
        SurfaceModel::Torus { alpha, beta } => live(SurfacePoint::plane(wrap(lx, alpha), wrap(ly, beta))),
        SurfaceModel::KleinBottle => {
            let (x, y) = klein_reduce(lx, ly);
            live(SurfacePoint::plane(x, y))
        }
        SurfaceModel::RectBilliard { a, b } => live(SurfacePoint::plane(tent(lx, a), tent(ly, b))),
        SurfaceModel::DiskBilliard { radius } => {
            let st = disk::disk_position(radius, [px, py], theta, t)?;
            GeodesicEnd {
                pos: SurfacePoint::plane(st.pos[0], st.pos[1]),
                cover: CoverPoint {
                    reflections: st.reflections,
                    ..lifted
                },
                alive: true,
                stopped_at: t,
            }
        }
        SurfaceModel::CubeSurface { side } => {
            let SurfacePoint::Cube { face, u, v } = *p else {
                return precondition("cube surface needs a FACE/u/v point");
            };
            let tr = cube::walk(side, face, u, v, theta, t, false)?;
            let reach = tr.stopped_at;
            GeodesicEnd {
                pos: SurfacePoint::Cube {
                    face: tr.face,
                    u: tr.u,
                    v: tr.v,
                },
                cover: CoverPoint {
                    x: px + reach * c,
                    y: py + reach * s,
                    group: tr.group,
                    reflections: 0,
                },
                alive: tr.alive,
                stopped_at: reach,
            }
        }
    })
}

/// Shortest displacement `d - m * round(d / m)`, so `|result| <= m / 2`.
fn periodic_delta(d: f64, m: f64) -> f64 {
    d - m * (d / m).round()
}

pub(crate) fn torus_distance(x1: f64, y1: f64, x2: f64, y2: f64, alpha: f64, beta: f64) -> f64 {
    periodic_delta(x1 - x2, alpha).hypot(periodic_delta(y1 - y2, beta))
}

/// Intrinsic distance between two points of the surface.
///
/// Exact on the torus, Klein bottle, rectangle and disk. On the cube it is
/// exact below one side length and an upper bound beyond, see
/// [`cube::cube_distance`].
pub fn surface_distance(surface: &SurfaceModel, q1: &SurfacePoint, q2: &SurfacePoint) -> f64 {
    // Fixed argument order makes the result exactly symmetric in floating point.
    let (q1, q2) = if point_key(q1) <= point_key(q2) { (q1, q2) } else { (q2, q1) };
    match (*surface, *q1, *q2) {
        (SurfaceModel::Torus { alpha, beta }, SurfacePoint::Plane { x: x1, y: y1 }, SurfacePoint::Plane { x: x2, y: y2 }) => {
            torus_distance(x1, y1, x2, y2, alpha, beta)
        }
        (SurfaceModel::KleinBottle, SurfacePoint::Plane { x: x1, y: y1 }, SurfacePoint::Plane { x: x2, y: y2 }) => {
            // The translations (1, 0), (0, 2) have index two in the group;
            // the other coset is represented by the glide (x, y) -> (1 - x, y + 1).
            let direct = torus_distance(x1, y1, x2, y2, 1.0, 2.0);
            let glide = torus_distance(x1, y1, 1.0 - x2, y2 + 1.0, 1.0, 2.0);
            direct.min(glide)
        }
        (SurfaceModel::RectBilliard { a, b }, SurfacePoint::Plane { x: x1, y: y1 }, SurfacePoint::Plane { x: x2, y: y2 }) => {
            // Minimum over the four preimages of q2 in one period of the mod-2 cover.
            let mut best = f64::INFINITY;
            for px in [x2, 2.0 * a - x2] {
                for py in [y2, 2.0 * b - y2] {
                    best = best.min(torus_distance(x1, y1, px, py, 2.0 * a, 2.0 * b));
                }
            }
            best
        }
        (SurfaceModel::DiskBilliard { .. }, SurfacePoint::Plane { x: x1, y: y1 }, SurfacePoint::Plane { x: x2, y: y2 }) => {
            (x1 - x2).hypot(y1 - y2)
        }
        (
            SurfaceModel::CubeSurface { side },
            SurfacePoint::Cube { face: f1, u: u1, v: v1 },
            SurfacePoint::Cube { face: f2, u: u2, v: v2 },
        ) => cube::cube_distance(side, (f1, u1, v1), (f2, u2, v2)).0,
        _ => f64::NAN,
    }
}
