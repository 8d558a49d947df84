//! Geodesics on the surface of a cube `[0, s]^3`.
//!
//! Every face carries a right-handed chart `(u, v)` with respect to its
//! outward normal, so unfolding neighbouring faces into the plane is always a
//! rotation by a multiple of 90 degrees plus a translation. A ray is walked
//! face by face; at each edge the tangent frame rolls over the edge, and the
//! accumulated roll is an element of the rotation group of the cube.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative distance to a vertex below which a ray counts as hitting it.
pub const CORNER_TOLERANCE: f64 = 1e-9;

/// Maximum number of edge crossings allowed in one ray evaluation.
pub const EVENT_BUDGET: u64 = 10_000_000;

type IVec = [i8; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Face {
    U,
    D,
    F,
    B,
    L,
    R,
}

impl Face {
    pub const ALL: [Face; 6] = [Face::U, Face::D, Face::F, Face::B, Face::L, Face::R];

    /// `(origin, e_u, e_v, normal)` of the face chart on the unit cube.
    const fn frame(self) -> (IVec, IVec, IVec, IVec) {
        match self {
            Face::U => ([0, 0, 1], [1, 0, 0], [0, 1, 0], [0, 0, 1]),
            Face::D => ([0, 1, 0], [1, 0, 0], [0, -1, 0], [0, 0, -1]),
            Face::F => ([0, 0, 0], [1, 0, 0], [0, 0, 1], [0, -1, 0]),
            Face::B => ([1, 1, 0], [-1, 0, 0], [0, 0, 1], [0, 1, 0]),
            Face::L => ([0, 1, 0], [0, -1, 0], [0, 0, 1], [-1, 0, 0]),
            Face::R => ([1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 0, 0]),
        }
    }

    pub fn normal(self) -> IVec {
        self.frame().3
    }

    fn from_normal(n: IVec) -> Face {
        match n {
            [0, 0, 1] => Face::U,
            [0, 0, -1] => Face::D,
            [0, -1, 0] => Face::F,
            [0, 1, 0] => Face::B,
            [-1, 0, 0] => Face::L,
            [1, 0, 0] => Face::R,
            _ => unreachable!("not an axis normal: {n:?}"),
        }
    }

    pub fn letter(self) -> char {
        match self {
            Face::U => 'U',
            Face::D => 'D',
            Face::F => 'F',
            Face::B => 'B',
            Face::L => 'L',
            Face::R => 'R',
        }
    }

    /// Chart coordinates to a point of the cube `[0, side]^3`.
    pub fn to_space(self, side: f64, u: f64, v: f64) -> [f64; 3] {
        let (o, eu, ev, _) = self.frame();
        let mut p = [0.0; 3];
        for k in 0..3 {
            p[k] = f64::from(o[k]) * side + f64::from(eu[k]) * u + f64::from(ev[k]) * v;
        }
        p
    }

    /// Orthogonal projection of a point of space onto the chart.
    pub fn from_space(self, side: f64, p: [f64; 3]) -> (f64, f64) {
        let (o, eu, ev, _) = self.frame();
        let mut u = 0.0;
        let mut v = 0.0;
        for k in 0..3 {
            let d = p[k] - f64::from(o[k]) * side;
            u += d * f64::from(eu[k]);
            v += d * f64::from(ev[k]);
        }
        (u, v)
    }

    fn tangent_to_space(self, du: f64, dv: f64) -> [f64; 3] {
        let (_, eu, ev, _) = self.frame();
        let mut d = [0.0; 3];
        for k in 0..3 {
            d[k] = f64::from(eu[k]) * du + f64::from(ev[k]) * dv;
        }
        d
    }

    fn tangent_from_space(self, d: [f64; 3]) -> (f64, f64) {
        let (_, eu, ev, _) = self.frame();
        let mut du = 0.0;
        let mut dv = 0.0;
        for k in 0..3 {
            du += d[k] * f64::from(eu[k]);
            dv += d[k] * f64::from(ev[k]);
        }
        (du, dv)
    }

    /// Outward direction (as a space vector) through one side of the chart.
    fn side_normal(self, side: Side) -> IVec {
        let (_, eu, ev, _) = self.frame();
        match side {
            Side::ULow => neg(eu),
            Side::UHigh => eu,
            Side::VLow => neg(ev),
            Side::VHigh => ev,
        }
    }

    /// The face across the given side of this one.
    pub fn neighbor(self, side: Side) -> Face {
        Face::from_normal(self.side_normal(side))
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for Face {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "U" => Ok(Face::U),
            "D" => Ok(Face::D),
            "F" => Ok(Face::F),
            "B" => Ok(Face::B),
            "L" => Ok(Face::L),
            "R" => Ok(Face::R),
            _ => Err(Error::Precondition(format!("unknown cube face `{s}`"))),
        }
    }
}

/// One of the four sides of a face chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    ULow,
    UHigh,
    VLow,
    VHigh,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::ULow, Side::UHigh, Side::VLow, Side::VHigh];

    fn endpoints(self, s: f64) -> [(f64, f64); 2] {
        match self {
            Side::ULow => [(0.0, 0.0), (0.0, s)],
            Side::UHigh => [(s, 0.0), (s, s)],
            Side::VLow => [(0.0, 0.0), (s, 0.0)],
            Side::VHigh => [(0.0, s), (s, s)],
        }
    }
}

fn neg(v: IVec) -> IVec {
    [-v[0], -v[1], -v[2]]
}

fn cross(a: IVec, b: IVec) -> IVec {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// An orientation-preserving symmetry of the cube, stored as a signed
/// permutation matrix with determinant one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CubeRotation(pub [[i8; 3]; 3]);

impl Default for CubeRotation {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl CubeRotation {
    pub const IDENTITY: CubeRotation = CubeRotation([[1, 0, 0], [0, 1, 0], [0, 0, 1]]);

    /// Quarter turn about the unit axis `k`, sending `v ⊥ k` to `k × v`.
    pub fn quarter_turn(k: IVec) -> CubeRotation {
        let mut m = [[0i8; 3]; 3];
        for (j, col) in [[1, 0, 0], [0, 1, 0], [0, 0, 1]].into_iter().enumerate() {
            let dot: i8 = (0..3).map(|i| k[i] * col[i]).sum();
            let c = cross(k, col);
            for i in 0..3 {
                m[i][j] = dot * k[i] + c[i];
            }
        }
        CubeRotation(m)
    }

    pub fn compose(self, rhs: CubeRotation) -> CubeRotation {
        let mut m = [[0i8; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = (0..3).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        CubeRotation(m)
    }

    pub fn apply(self, v: IVec) -> IVec {
        let mut r = [0i8; 3];
        for i in 0..3 {
            r[i] = (0..3).map(|k| self.0[i][k] * v[k]).sum();
        }
        r
    }

    pub fn determinant(self) -> i32 {
        let m = self.0.map(|row| row.map(i32::from));
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// True iff this is one of the 24 rotations of the cube.
    pub fn is_cube_rotation(self) -> bool {
        let rows_ok = self
            .0
            .iter()
            .all(|row| row.iter().filter(|&&x| x != 0).count() == 1 && row.iter().all(|x| x.abs() <= 1));
        let cols_ok = (0..3).all(|j| (0..3).filter(|&i| self.0[i][j] != 0).count() == 1);
        rows_ok && cols_ok && self.determinant() == 1
    }

    /// All 24 elements, in a fixed order.
    pub fn all() -> Vec<CubeRotation> {
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let mut out = Vec::with_capacity(24);
        for p in perms {
            for signs in 0..8u8 {
                let mut m = [[0i8; 3]; 3];
                for i in 0..3 {
                    m[i][p[i]] = if signs >> i & 1 == 1 { -1 } else { 1 };
                }
                let r = CubeRotation(m);
                if r.determinant() == 1 {
                    out.push(r);
                }
            }
        }
        out
    }
}

/// Result of walking a straight ray over the cube surface.
#[derive(Debug, Clone, PartialEq)]
pub struct CubeTrace {
    pub face: Face,
    pub u: f64,
    pub v: f64,
    /// Faces entered, starting with the source face.
    pub face_history: Vec<Face>,
    pub group: CubeRotation,
    pub alive: bool,
    /// Time actually travelled: `t` when alive, the time of the corner hit otherwise.
    pub stopped_at: f64,
    pub crossings: u64,
}

/// Distance from `(u, v)` to the nearest vertex of its face.
pub fn vertex_distance(side: f64, u: f64, v: f64) -> f64 {
    let du = u.min(side - u).max(0.0);
    let dv = v.min(side - v).max(0.0);
    du.hypot(dv)
}

/// Walks the unit-speed ray from `(face, u, v)` in chart direction `theta`
/// for time `t`, crossing edges until the time is used up or the ray passes
/// within `CORNER_TOLERANCE * side` of a vertex.
pub fn trace_cube_ray(side: f64, face: Face, u: f64, v: f64, theta: f64, t: f64) -> Result<CubeTrace> {
    walk(side, face, u, v, theta, t, true)
}

pub(crate) fn walk(
    side: f64,
    face: Face,
    u: f64,
    v: f64,
    theta: f64,
    t: f64,
    record: bool,
) -> Result<CubeTrace> {
    let delta = CORNER_TOLERANCE * side;
    if vertex_distance(side, u, v) <= delta {
        return Err(Error::Precondition(format!(
            "cube source {face}/{u}/{v} lies on a vertex"
        )));
    }
    let (mut face, mut u, mut v) = (face, u, v);
    let (mut du, mut dv) = (theta.cos(), theta.sin());
    let mut group = CubeRotation::IDENTITY;
    let mut history = Vec::new();
    if record {
        history.push(face);
    }
    let mut elapsed = 0.0;
    let mut crossings = 0u64;
    loop {
        let remaining = t - elapsed;
        let tu = exit_time(u, du, side);
        let tv = exit_time(v, dv, side);
        let step = tu.min(tv);
        let seg = step.min(remaining);
        if let Some(tc) = corner_hit(side, u, v, du, dv, seg, delta) {
            return Ok(CubeTrace {
                face,
                u: (u + du * tc).clamp(0.0, side),
                v: (v + dv * tc).clamp(0.0, side),
                face_history: history,
                group,
                alive: false,
                stopped_at: elapsed + tc,
                crossings,
            });
        }
        if remaining <= step {
            return Ok(CubeTrace {
                face,
                u: (u + du * remaining).clamp(0.0, side),
                v: (v + dv * remaining).clamp(0.0, side),
                face_history: history,
                group,
                alive: true,
                stopped_at: t,
                crossings,
            });
        }
        crossings += 1;
        if crossings > EVENT_BUDGET {
            return Err(Error::Numerical(format!(
                "cube ray exceeded {EVENT_BUDGET} edge crossings"
            )));
        }
        // Advance onto the edge and snap the exiting coordinate.
        let exit = if tu <= tv {
            u = if du > 0.0 { side } else { 0.0 };
            v = (v + dv * step).clamp(0.0, side);
            if du > 0.0 {
                Side::UHigh
            } else {
                Side::ULow
            }
        } else {
            v = if dv > 0.0 { side } else { 0.0 };
            u = (u + du * step).clamp(0.0, side);
            if dv > 0.0 {
                Side::VHigh
            } else {
                Side::VLow
            }
        };
        elapsed += step;

        let n_old = face.normal();
        let n_new = face.side_normal(exit);
        let roll = CubeRotation::quarter_turn(cross(n_old, n_new));
        let p = face.to_space(side, u, v);
        let d = face.tangent_to_space(du, dv);
        let d = rotate_f(roll, d);
        face = Face::from_normal(n_new);
        let (nu, nv) = face.from_space(side, p);
        u = nu.clamp(0.0, side);
        v = nv.clamp(0.0, side);
        (du, dv) = face.tangent_from_space(d);
        group = roll.compose(group);
        if record {
            history.push(face);
        }
    }
}

fn rotate_f(r: CubeRotation, d: [f64; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for i in 0..3 {
        out[i] = (0..3).map(|k| f64::from(r.0[i][k]) * d[k]).sum();
    }
    out
}

fn exit_time(x: f64, dx: f64, side: f64) -> f64 {
    if dx > 0.0 {
        ((side - x) / dx).max(0.0)
    } else if dx < 0.0 {
        (-x / dx).max(0.0)
    } else {
        f64::INFINITY
    }
}

/// Earliest parameter in `[0, len]` at which the segment passes within
/// `delta` of a face corner.
fn corner_hit(side: f64, u: f64, v: f64, du: f64, dv: f64, len: f64, delta: f64) -> Option<f64> {
    let mut best: Option<f64> = None;
    for (cu, cv) in [(0.0, 0.0), (side, 0.0), (0.0, side), (side, side)] {
        let along = ((cu - u) * du + (cv - v) * dv).clamp(0.0, len);
        let (qu, qv) = (u + du * along, v + dv * along);
        if (qu - cu).hypot(qv - cv) <= delta {
            // Enter time of the delta disk, so the recorded death precedes the vertex.
            let perp2 = ((cu - u) * dv - (cv - v) * du).powi(2);
            let back = (delta * delta - perp2).max(0.0).sqrt();
            let tc = (((cu - u) * du + (cv - v) * dv) - back).clamp(0.0, len);
            best = Some(best.map_or(tc, |b: f64| b.min(tc)));
        }
    }
    best
}

/// Orientation-preserving placement of a face chart in a common plane:
/// `plane = rot * (u, v) + offset`, `rot` a multiple of a quarter turn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Placement {
    pub face: Face,
    /// `(cos, sin)` of the rotation, each in {-1, 0, 1}.
    pub rot: (f64, f64),
    pub offset: (f64, f64),
}

impl Placement {
    pub fn identity(face: Face) -> Self {
        Placement {
            face,
            rot: (1.0, 0.0),
            offset: (0.0, 0.0),
        }
    }

    pub fn map(&self, u: f64, v: f64) -> (f64, f64) {
        let (c, s) = self.rot;
        (c * u - s * v + self.offset.0, s * u + c * v + self.offset.1)
    }

    /// Placement of the face across `side`, glued along the shared edge.
    pub fn across(&self, side_len: f64, side: Side) -> Placement {
        let next = self.face.neighbor(side);
        let [a, b] = side.endpoints(side_len);
        let a3 = self.face.to_space(side_len, a.0, a.1);
        let b3 = self.face.to_space(side_len, b.0, b.1);
        let a_n = next.from_space(side_len, a3);
        let b_n = next.from_space(side_len, b3);
        let pa = self.map(a.0, a.1);
        let pb = self.map(b.0, b.1);
        // Rotation taking (b_n - a_n) to (pb - pa); both have length side_len.
        let (x0, y0) = (b_n.0 - a_n.0, b_n.1 - a_n.1);
        let (x1, y1) = (pb.0 - pa.0, pb.1 - pa.1);
        let l2 = side_len * side_len;
        let c = ((x0 * x1 + y0 * y1) / l2).round();
        let s = ((x0 * y1 - y0 * x1) / l2).round();
        let offset = (pa.0 - (c * a_n.0 - s * a_n.1), pa.1 - (s * a_n.0 + c * a_n.1));
        Placement {
            face: next,
            rot: (c, s),
            offset,
        }
    }

    /// Axis-aligned bounds of the placed square.
    fn bounds(&self, side_len: f64) -> (f64, f64, f64, f64) {
        let corners = [(0.0, 0.0), (side_len, 0.0), (0.0, side_len), (side_len, side_len)]
            .map(|(u, v)| self.map(u, v));
        let xs = corners.map(|p| p.0);
        let ys = corners.map(|p| p.1);
        (
            xs.iter().cloned().fold(f64::INFINITY, f64::min),
            xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            ys.iter().cloned().fold(f64::INFINITY, f64::min),
            ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        )
    }
}

/// Every chart representation of a surface point (several on edges).
pub fn representations(side: f64, face: Face, u: f64, v: f64) -> Vec<(Face, f64, f64)> {
    let p = face.to_space(side, u, v);
    let tol = 1e-12 * side;
    let mut reps = vec![(face, u, v)];
    for other in Face::ALL {
        if other == face {
            continue;
        }
        let n = other.normal();
        let k = n.iter().position(|&x| x != 0).unwrap();
        let plane = if n[k] > 0 { side } else { 0.0 };
        if (p[k] - plane).abs() <= tol {
            let (ou, ov) = other.from_space(side, p);
            reps.push((other, ou.clamp(0.0, side), ov.clamp(0.0, side)));
        }
    }
    reps
}

/// Geodesic distance between two cube points, minimised over unfoldings
/// crossing at most three edges. The flag reports whether the value is
/// guaranteed exact (below one side length); otherwise it is an upper bound.
pub fn cube_distance(side: f64, a: (Face, f64, f64), b: (Face, f64, f64)) -> (f64, bool) {
    if a.0 == b.0 {
        return ((a.1 - b.1).hypot(a.2 - b.2), true);
    }
    let reps_a = representations(side, a.0, a.1, a.2);
    let reps_b = representations(side, b.0, b.1, b.2);
    for &(fa, ua, va) in &reps_a {
        for &(fb, ub, vb) in &reps_b {
            if fa == fb {
                return ((ua - ub).hypot(va - vb), true);
            }
        }
    }
    let mut best = f64::INFINITY;
    for &(fa, ua, va) in &reps_a {
        let mut chain = vec![Placement::identity(fa)];
        search_chains(side, (ua, va), &reps_b, &mut chain, 3, &mut best);
    }
    // Adjacent faces unfold into a rectangle and opposite faces into a 1x3
    // strip, so a valid chain of depth <= 2 always exists.
    debug_assert!(best.is_finite());
    (best, best < side)
}

fn search_chains(
    side: f64,
    start: (f64, f64),
    targets: &[(Face, f64, f64)],
    chain: &mut Vec<Placement>,
    depth: usize,
    best: &mut f64,
) {
    let last = *chain.last().unwrap();
    if chain.len() > 1 {
        for &(fb, ub, vb) in targets {
            if fb == last.face {
                let end = last.map(ub, vb);
                let d = (end.0 - start.0).hypot(end.1 - start.1);
                if d < *best && segment_follows_chain(side, start, end, chain) {
                    *best = d;
                }
            }
        }
    }
    if depth == 0 {
        return;
    }
    for side_id in Side::ALL {
        let next = last.across(side, side_id);
        if chain.iter().any(|p| p.face == next.face) {
            continue;
        }
        chain.push(next);
        search_chains(side, start, targets, chain, depth - 1, best);
        chain.pop();
    }
}

/// Checks that the plane segment `p -> q` runs through the placed squares of
/// `chain` in order, which makes it the development of a surface path.
fn segment_follows_chain(side: f64, p: (f64, f64), q: (f64, f64), chain: &[Placement]) -> bool {
    let tol = 1e-12;
    let mut prev_end = 0.0;
    for (i, pl) in chain.iter().enumerate() {
        let (x0, x1, y0, y1) = pl.bounds(side);
        let Some((s, e)) = clip(p, q, x0, x1, y0, y1) else {
            return false;
        };
        if i == 0 && s > tol {
            return false;
        }
        if s > prev_end + tol || e < prev_end - tol {
            return false;
        }
        prev_end = e;
    }
    prev_end >= 1.0 - tol
}

/// Liang-Barsky clip of `p + s (q - p)`, `s ∈ [0, 1]`, against a box.
fn clip(p: (f64, f64), q: (f64, f64), x0: f64, x1: f64, y0: f64, y1: f64) -> Option<(f64, f64)> {
    let eps = 1e-12 * (x1 - x0).max(y1 - y0);
    let (dx, dy) = (q.0 - p.0, q.1 - p.1);
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    for (den, num) in [
        (-dx, p.0 - (x0 - eps)),
        (dx, (x1 + eps) - p.0),
        (-dy, p.1 - (y0 - eps)),
        (dy, (y1 + eps) - p.1),
    ] {
        if den == 0.0 {
            if num < 0.0 {
                return None;
            }
        } else {
            let r = num / den;
            if den < 0.0 {
                lo = lo.max(r);
            } else {
                hi = hi.min(r);
            }
        }
    }
    (lo <= hi).then_some((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI};

    #[test]
    fn group_has_24_elements_and_closes() {
        let all = CubeRotation::all();
        assert_eq!(all.len(), 24);
        for a in &all {
            assert!(a.is_cube_rotation());
            for b in &all {
                assert!(all.contains(&a.compose(*b)));
            }
        }
    }

    #[test]
    fn quarter_turn_has_order_four() {
        let r = CubeRotation::quarter_turn([0, 0, 1]);
        assert_eq!(r.apply([1, 0, 0]), [0, 1, 0]);
        let r4 = r.compose(r).compose(r).compose(r);
        assert_eq!(r4, CubeRotation::IDENTITY);
    }

    #[test]
    fn frames_are_right_handed() {
        for f in Face::ALL {
            let (_, eu, ev, n) = f.frame();
            assert_eq!(cross(eu, ev), n, "{f}");
        }
    }

    #[test]
    fn no_crossing_stays_on_face() {
        let tr = trace_cube_ray(1.0, Face::U, 0.5, 0.5, 0.0, 0.25).unwrap();
        assert_eq!(tr.face, Face::U);
        assert!((tr.u - 0.75).abs() < 1e-15 && (tr.v - 0.5).abs() < 1e-15);
        assert_eq!(tr.face_history, vec![Face::U]);
        assert_eq!(tr.group, CubeRotation::IDENTITY);
        assert!(tr.alive);
    }

    #[test]
    fn one_edge_crossing_lands_half_past_the_edge() {
        let tr = trace_cube_ray(1.0, Face::U, 0.5, 0.5, 0.0, 1.0).unwrap();
        assert_eq!(tr.face_history, vec![Face::U, Face::R]);
        assert_ne!(tr.group, CubeRotation::IDENTITY);
        // Planar unfolding: the point sits 0.5 below the U/R edge, mid-edge.
        let q = Face::R.to_space(1.0, tr.u, tr.v);
        assert!((q[0] - 1.0).abs() < 1e-12);
        assert!((q[1] - 0.5).abs() < 1e-12);
        assert!((q[2] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn corner_ray_dies() {
        let tr = trace_cube_ray(1.0, Face::U, 0.5, 0.5, FRAC_PI_4, 0.8).unwrap();
        assert!(!tr.alive);
        assert!((tr.stopped_at - 0.5f64.sqrt()).abs() < 1e-8);
        // Short of the corner the ray is still alive.
        let tr = trace_cube_ray(1.0, Face::U, 0.5, 0.5, FRAC_PI_4, 0.7).unwrap();
        assert!(tr.alive);
    }

    #[test]
    fn vertex_source_rejected() {
        assert!(trace_cube_ray(1.0, Face::F, 0.0, 1.0, 0.3, 1.0).is_err());
    }

    #[test]
    fn ray_around_a_belt_returns_with_identity() {
        // Along v = 0.5 of U going +u: U -> R -> D -> L -> U after length 4.
        let tr = trace_cube_ray(1.0, Face::U, 0.5, 0.5, 0.0, 4.0).unwrap();
        assert_eq!(tr.face, Face::U);
        assert!((tr.u - 0.5).abs() < 1e-12 && (tr.v - 0.5).abs() < 1e-12);
        assert_eq!(tr.group, CubeRotation::IDENTITY);
        assert_eq!(tr.face_history.len(), 5);
    }

    #[test]
    fn placement_across_matches_space_geometry() {
        let base = Placement::identity(Face::U);
        let r = base.across(1.0, Side::UHigh);
        assert_eq!(r.face, Face::R);
        let c = r.map(0.5, 0.5);
        assert!((c.0 - 1.5).abs() < 1e-12 && (c.1 - 0.5).abs() < 1e-12);
        for side in Side::ALL {
            let p = base.across(1.0, side);
            let back = p.across(1.0, Side::ALL.into_iter().find(|&s| p.face.neighbor(s) == Face::U).unwrap());
            assert_eq!(back.face, Face::U);
            let o = back.map(0.25, 0.75);
            assert!((o.0 - 0.25).abs() < 1e-12 && (o.1 - 0.75).abs() < 1e-12);
        }
    }

    #[test]
    fn distances_same_and_adjacent_faces() {
        let (d, exact) = cube_distance(1.0, (Face::U, 0.2, 0.2), (Face::U, 0.7, 0.2));
        assert!((d - 0.5).abs() < 1e-15 && exact);
        // Across the U/R edge: centre to centre is 1.
        let (d, _) = cube_distance(1.0, (Face::U, 0.5, 0.5), (Face::R, 0.5, 0.5));
        assert!((d - 1.0).abs() < 1e-12);
        // Opposite face centres: 2.
        let (d, _) = cube_distance(1.0, (Face::U, 0.5, 0.5), (Face::D, 0.5, 0.5));
        assert!((d - 2.0).abs() < 1e-12);
    }

    #[test]
    fn distance_matches_traced_ray_length() {
        // A ray that crosses one edge: distance from start to end equals t.
        for &theta in &[0.1, 0.5, 1.0, 2.0, PI - 0.3] {
            let t = 0.7;
            let tr = trace_cube_ray(1.0, Face::U, 0.5, 0.5, theta, t).unwrap();
            let (d, _) = cube_distance(1.0, (Face::U, 0.5, 0.5), (tr.face, tr.u, tr.v));
            assert!((d - t).abs() < 1e-9, "theta {theta}: {d}");
        }
    }
}
