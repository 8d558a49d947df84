//! JSON snapshots of fronts, SVG rendering and CSV series.
//!
//! Snapshot layout (version 1):
//!
//! ```text
//! { "version": 1, "surface": "torus:1,1", "source": "0,0", "t": 25.0,
//!   "arc": [lo, hi],
//!   "params": { "h_max": .., "theta_min": .., "delta_t_check": .., "sample_budget": .. },
//!   "components": [ { "interval": [lo, hi], "split_time": .., "closed": true,
//!                     "samples": [[theta, x, y, alive], ..] } ],
//!   "dead_directions": [[theta, death_time], ..] }
//! ```
//!
//! Cube samples are written `[theta, "U", u, v, alive]`. Numbers use the
//! shortest decimal that parses back to the same `f64`.

use std::fmt::Write as _;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frontier::{sample_at, ArcInterval, DeadDirection, Front, FrontComponent, FrontSample, PropagationParams};
use crate::lattice::LatticeCount;
use crate::metrics::DensityReport;
use crate::surfaces::{surface_distance, Face, SurfaceModel, SurfacePoint};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SnapshotDoc {
    version: u32,
    surface: String,
    source: String,
    t: f64,
    arc: [f64; 2],
    params: ParamsDoc,
    components: Vec<ComponentDoc>,
    dead_directions: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsDoc {
    h_max: f64,
    theta_min: f64,
    delta_t_check: f64,
    sample_budget: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentDoc {
    interval: [f64; 2],
    split_time: f64,
    closed: bool,
    samples: Vec<SampleRow>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum SampleRow {
    Plane(f64, f64, f64, bool),
    Cube(f64, Face, f64, f64, bool),
}

fn doc_of(front: &Front) -> SnapshotDoc {
    let mut components: Vec<&FrontComponent> = front.components.iter().collect();
    components.sort_by(|a, b| a.interval.lo.total_cmp(&b.interval.lo));
    SnapshotDoc {
        version: FORMAT_VERSION,
        surface: front.surface.to_string(),
        source: front.source.to_string(),
        t: front.t,
        arc: [front.arc.lo, front.arc.hi],
        params: ParamsDoc {
            h_max: front.params.h_max,
            theta_min: front.params.theta_min,
            delta_t_check: front.params.delta_t_check,
            sample_budget: front.params.sample_budget,
        },
        components: components
            .into_iter()
            .map(|c| ComponentDoc {
                interval: [c.interval.lo, c.interval.hi],
                split_time: c.split_time,
                closed: c.closed,
                samples: c
                    .samples
                    .iter()
                    .map(|s| match s.pos {
                        SurfacePoint::Plane { x, y } => SampleRow::Plane(s.theta, x, y, s.alive),
                        SurfacePoint::Cube { face, u, v } => SampleRow::Cube(s.theta, face, u, v, s.alive),
                    })
                    .collect(),
            })
            .collect(),
        dead_directions: front.dead.iter().map(|d| [d.theta, d.death_time]).collect(),
    }
}

/// Writes the snapshot of `front` as JSON.
pub fn emit_snapshot<W: Write>(front: &Front, mut out: W) -> Result<()> {
    serde_json::to_writer(&mut out, &doc_of(front)).map_err(|e| match e.io_error_kind() {
        Some(kind) => Error::Io(std::io::Error::new(kind, e.to_string())),
        None => Error::Numerical(format!("cannot serialise snapshot: {e}")),
    })?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn snapshot_bytes(front: &Front) -> Vec<u8> {
    let mut buf = Vec::new();
    emit_snapshot(front, &mut buf).expect("writing to memory cannot fail");
    buf
}

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line: 0,
        column: 0,
        msg: msg.into(),
    })
}

fn reject(e: Error) -> Error {
    match e {
        Error::Precondition(msg) | Error::Numerical(msg) => Error::Parse { line: 0, column: 0, msg },
        other => other,
    }
}

/// Reads a snapshot back into a [`Front`]. Cover points and death times are
/// recomputed from `(theta, t)` and must agree with the stored positions.
pub fn parse_snapshot<R: Read>(input: R) -> Result<Front> {
    let doc: SnapshotDoc = serde_json::from_reader(input).map_err(|e| {
        if e.is_io() {
            Error::Io(std::io::Error::other(e.to_string()))
        } else {
            Error::Parse {
                line: e.line(),
                column: e.column(),
                msg: e.to_string(),
            }
        }
    })?;
    if doc.version != FORMAT_VERSION {
        return invalid(format!("unsupported snapshot version {}", doc.version));
    }
    let surface: SurfaceModel = doc.surface.parse().map_err(reject)?;
    let source: SurfacePoint = doc.source.parse().map_err(reject)?;
    surface.validate_source(&source).map_err(reject)?;
    let arc = ArcInterval::new(doc.arc[0], doc.arc[1]).map_err(reject)?;
    let params = PropagationParams {
        h_max: doc.params.h_max,
        theta_min: doc.params.theta_min,
        delta_t_check: doc.params.delta_t_check,
        sample_budget: doc.params.sample_budget,
    };
    params.validate(&arc).map_err(reject)?;
    if !(doc.t.is_finite() && doc.t >= 0.0) {
        return invalid(format!("invalid time {}", doc.t));
    }
    let t = doc.t;
    let tol = 1e-9 * surface.min_extent().max(1.0) * (1.0 + t);

    let mut components = Vec::with_capacity(doc.components.len());
    let mut prev_lo = f64::NEG_INFINITY;
    for (ci, c) in doc.components.into_iter().enumerate() {
        let interval = ArcInterval::new(c.interval[0], c.interval[1]).map_err(reject)?;
        if interval.lo < prev_lo {
            return invalid(format!("component {ci} is out of order"));
        }
        prev_lo = interval.lo;
        let mut samples = Vec::with_capacity(c.samples.len());
        for (si, row) in c.samples.into_iter().enumerate() {
            let (theta, pos, alive) = match (row, surface.is_cube()) {
                (SampleRow::Plane(th, x, y, a), false) => (th, SurfacePoint::Plane { x, y }, a),
                (SampleRow::Cube(th, face, u, v, a), true) => (th, SurfacePoint::Cube { face, u, v }, a),
                _ => return invalid(format!("component {ci} sample {si}: point does not fit surface {surface}")),
            };
            if let Some(prev) = samples.last().map(|s: &FrontSample| s.theta) {
                if !(theta > prev) {
                    return invalid(format!("component {ci} sample {si}: theta not increasing"));
                }
            }
            let fresh = sample_at(&surface, &source, theta, t).map_err(reject)?;
            if fresh.alive != alive || !(surface_distance(&surface, &fresh.pos, &pos) <= tol) {
                return invalid(format!(
                    "component {ci} sample {si}: stored position disagrees with the geodesic at theta={theta}"
                ));
            }
            samples.push(FrontSample { pos, ..fresh });
        }
        components.push(FrontComponent {
            interval,
            samples,
            split_time: c.split_time,
            closed: c.closed,
        });
    }
    let dead = doc
        .dead_directions
        .iter()
        .map(|d| DeadDirection {
            theta: d[0],
            death_time: d[1],
        })
        .collect();
    Ok(Front {
        surface,
        source,
        t,
        arc,
        components,
        params,
        dead,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvgOptions {
    pub width_px: u32,
    pub color_by_component: bool,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            width_px: 1600,
            color_by_component: true,
        }
    }
}

pub const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

/// Bottom-left corner of each face in the cross net, in face units.
fn net_slot(face: Face) -> (f64, f64) {
    match face {
        Face::L => (0.0, 1.0),
        Face::F => (1.0, 1.0),
        Face::R => (2.0, 1.0),
        Face::B => (3.0, 1.0),
        Face::U => (1.0, 2.0),
        Face::D => (1.0, 0.0),
    }
}

struct Canvas {
    x0: f64,
    y1: f64,
    scale: f64,
    margin: f64,
}

impl Canvas {
    fn px(&self, x: f64, y: f64) -> (f64, f64) {
        (
            self.margin + (x - self.x0) * self.scale,
            self.margin + (self.y1 - y) * self.scale,
        )
    }
}

/// World coordinates of a sample in the drawing (net coordinates on the cube).
fn world(surface: &SurfaceModel, p: &SurfacePoint) -> (f64, f64) {
    match (*surface, *p) {
        (SurfaceModel::CubeSurface { side }, SurfacePoint::Cube { face, u, v }) => {
            let (sx, sy) = net_slot(face);
            (sx * side + u, sy * side + v)
        }
        (_, p) => p.chart(),
    }
}

/// Renders the front as SVG: one polyline per component, broken wherever the
/// drawing would jump across a chart seam.
pub fn render_svg(front: &Front, opts: &SvgOptions) -> String {
    let surface = front.surface;
    let (x0, y0, x1, y1) = match surface {
        SurfaceModel::Torus { alpha, beta } => (0.0, 0.0, alpha, beta),
        SurfaceModel::KleinBottle => (0.0, 0.0, 1.0, 1.0),
        SurfaceModel::RectBilliard { a, b } => (0.0, 0.0, a, b),
        SurfaceModel::DiskBilliard { radius } => (-radius, -radius, radius, radius),
        SurfaceModel::CubeSurface { side } => (0.0, 0.0, 4.0 * side, 3.0 * side),
    };
    let margin = 10.0;
    let scale = (f64::from(opts.width_px.max(32)) - 2.0 * margin) / (x1 - x0);
    let c = Canvas { x0, y1, scale, margin };
    let width = f64::from(opts.width_px.max(32));
    let height = (y1 - y0) * scale + 2.0 * margin;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let p = &front.params;
    let _ = writeln!(
        s,
        "<desc>surface={} source={} t={} h_max={} theta_min={} delta_t_check={} sample_budget={}</desc>",
        surface, front.source, front.t, p.h_max, p.theta_min, p.delta_t_check, p.sample_budget
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{width:.0}" height="{height:.0}" fill="white"/>"#);
    let frame = r##"fill="none" stroke="#444" stroke-width="1""##;
    match surface {
        SurfaceModel::DiskBilliard { radius } => {
            let (cx, cy) = c.px(0.0, 0.0);
            let _ = writeln!(s, r#"<circle cx="{cx:.3}" cy="{cy:.3}" r="{:.3}" {frame}/>"#, radius * scale);
        }
        SurfaceModel::CubeSurface { side } => {
            for face in Face::ALL {
                let (sx, sy) = net_slot(face);
                let (px, py) = c.px(sx * side, (sy + 1.0) * side);
                let w = side * scale;
                let _ = writeln!(s, r#"<rect x="{px:.3}" y="{py:.3}" width="{w:.3}" height="{w:.3}" {frame}/>"#);
                let (lx, ly) = c.px((sx + 0.05) * side, (sy + 0.9) * side);
                let _ = writeln!(
                    s,
                    r##"<text x="{lx:.3}" y="{ly:.3}" font-family="sans-serif" font-size="{:.0}" fill="#888">{face}</text>"##,
                    (0.08 * w).max(8.0)
                );
            }
        }
        _ => {
            let (px, py) = c.px(x0, y1);
            let _ = writeln!(
                s,
                r#"<rect x="{px:.3}" y="{py:.3}" width="{:.3}" height="{:.3}" {frame}/>"#,
                (x1 - x0) * scale,
                (y1 - y0) * scale
            );
        }
    }

    if front.t == 0.0 {
        let (px, py) = c.px_of(&surface, &front.source);
        let _ = writeln!(s, r#"<circle cx="{px:.3}" cy="{py:.3}" r="4" fill="{}"/>"#, PALETTE[0]);
    } else {
        let mut comps: Vec<&FrontComponent> = front.components.iter().collect();
        comps.sort_by(|a, b| a.interval.lo.total_cmp(&b.interval.lo));
        for (ci, comp) in comps.iter().enumerate() {
            let color = if opts.color_by_component { PALETTE[ci % PALETTE.len()] } else { PALETTE[0] };
            let _ = writeln!(s, r#"<g stroke="{color}" fill="none" stroke-width="1.2">"#);
            for run in runs(&surface, comp) {
                write_run(&mut s, &c, &run, color);
            }
            s.push_str("</g>\n");
        }
    }
    s.push_str("</svg>\n");
    s
}

impl Canvas {
    fn px_of(&self, surface: &SurfaceModel, p: &SurfacePoint) -> (f64, f64) {
        let (x, y) = world(surface, p);
        self.px(x, y)
    }
}

/// Splits a component into runs drawn without a seam jump in between.
fn runs(surface: &SurfaceModel, comp: &FrontComponent) -> Vec<Vec<(f64, f64)>> {
    let mut out: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut cur: Vec<(f64, f64)> = Vec::new();
    for (a, b) in comp.pairs() {
        if !a.alive {
            continue;
        }
        if cur.is_empty() {
            cur.push(world(surface, &a.pos));
        }
        let wa = world(surface, &a.pos);
        let wb = world(surface, &b.pos);
        let chart = (wb.0 - wa.0).hypot(wb.1 - wa.1);
        let joined = b.alive && chart <= 1.5 * surface_distance(surface, &a.pos, &b.pos) + 1e-12;
        if joined {
            cur.push(wb);
        } else {
            out.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    if comp.samples.len() == 1 && comp.samples[0].alive {
        out.push(vec![world(surface, &comp.samples[0].pos)]);
    }
    out
}

fn write_run(s: &mut String, c: &Canvas, run: &[(f64, f64)], color: &str) {
    // Thin out points closer than half a pixel; endpoints are always kept.
    let mut pts: Vec<(f64, f64)> = Vec::with_capacity(run.len());
    for (i, &(x, y)) in run.iter().enumerate() {
        let p = c.px(x, y);
        let keep = match pts.last() {
            None => true,
            Some(&q) => i + 1 == run.len() || (p.0 - q.0).hypot(p.1 - q.1) >= 0.5,
        };
        if keep {
            pts.push(p);
        }
    }
    if pts.len() == 1 || pts.iter().all(|p| (p.0 - pts[0].0).hypot(p.1 - pts[0].1) < 0.5) {
        let _ = writeln!(s, r#"<circle cx="{:.3}" cy="{:.3}" r="1.5" fill="{color}" stroke="none"/>"#, pts[0].0, pts[0].1);
        return;
    }
    s.push_str("<polyline points=\"");
    for (i, p) in pts.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{:.3},{:.3}", p.0, p.1);
    }
    s.push_str("\"/>\n");
}

/// A row type of a CSV series.
pub trait SeriesRow {
    const HEADER: &'static str;
    fn write_row(&self, out: &mut String);
}

impl SeriesRow for DensityReport {
    const HEADER: &'static str = "t,covering_radius,cells_hit_fraction,length,components";

    fn write_row(&self, out: &mut String) {
        let _ = write!(
            out,
            "{},{},{},{},{}",
            self.t,
            self.covering_radius,
            self.hit_fraction(),
            self.length,
            self.n_components
        );
    }
}

impl SeriesRow for LatticeCount {
    const HEADER: &'static str = "t,h,N_t,annulus_count,expected_area,E_t,gauss_bound";

    fn write_row(&self, out: &mut String) {
        let _ = write!(
            out,
            "{},{},{},{},{},{},{}",
            self.t, self.h, self.n_t, self.annulus_count, self.expected_area, self.e_t, self.gauss_bound
        );
    }
}

/// Header line followed by one line per row, in input order.
pub fn series_csv<R: SeriesRow>(rows: &[R]) -> String {
    let mut s = String::from(R::HEADER);
    s.push('\n');
    for r in rows {
        r.write_row(&mut s);
        s.push('\n');
    }
    s
}

pub fn emit_series<R: SeriesRow, W: Write>(rows: &[R], mut out: W) -> Result<()> {
    out.write_all(series_csv(rows).as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontier::{init_front, propagate_from};

    fn front(surface: &str, p: &str, t: f64) -> Front {
        let s: SurfaceModel = surface.parse().unwrap();
        propagate_from(s, p.parse().unwrap(), t, 64, PropagationParams::for_surface(&s)).unwrap()
    }

    #[test]
    fn round_trip_is_exact() {
        for (s, p, t) in [("torus:1,1", "0.37,0.61", 3.3), ("klein", "0.2,0.1", 2.0), ("cube:1", "U/0.5/0.5", 1.0), ("disk:1", "0.3,0", 4.0)] {
            let f = front(s, p, t);
            let bytes = snapshot_bytes(&f);
            let g = parse_snapshot(bytes.as_slice()).unwrap();
            assert_eq!(f, g, "{s}");
            assert_eq!(bytes, snapshot_bytes(&g));
        }
    }

    #[test]
    fn key_order() {
        let f = front("torus:1,1", "0,0", 0.0);
        let text = String::from_utf8(snapshot_bytes(&f)).unwrap();
        let keys = ["\"version\"", "\"surface\"", "\"source\"", "\"t\"", "\"arc\"", "\"params\"", "\"components\"", "\"dead_directions\""];
        let pos: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn cube_components_sorted() {
        let f = front("cube:1", "U/0.5/0.5", 1.0);
        let v: serde_json::Value = serde_json::from_slice(&snapshot_bytes(&f)).unwrap();
        let comps = v["components"].as_array().unwrap();
        assert_eq!(comps.len(), 4);
        let los: Vec<f64> = comps.iter().map(|c| c["interval"][0].as_f64().unwrap()).collect();
        assert!(los.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn rejects_unknown_keys_and_versions() {
        let f = front("torus:1,1", "0,0", 0.5);
        let text = String::from_utf8(snapshot_bytes(&f)).unwrap();
        let extra = text.replacen("{\"version\":1,", "{\"version\":1,\"extra\":0,", 1);
        assert!(matches!(parse_snapshot(extra.as_bytes()), Err(Error::Parse { .. })));
        let v2 = text.replacen("\"version\":1", "\"version\":2", 1);
        assert!(matches!(parse_snapshot(v2.as_bytes()), Err(Error::Parse { .. })));
        let broken = &text[..text.len() / 2];
        match parse_snapshot(broken.as_bytes()) {
            Err(Error::Parse { line, column, .. }) => assert!(line >= 1 && column > 0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_tampered_position() {
        let f = front("torus:1,1", "0,0", 0.5);
        let mut g = f.clone();
        g.components[0].samples[3].pos = SurfacePoint::plane(0.9, 0.9);
        assert!(parse_snapshot(snapshot_bytes(&g).as_slice()).is_err());
    }

    #[test]
    fn t0_renders_as_dot() {
        let s = SurfaceModel::torus(1.0, 1.0).unwrap();
        let f = init_front(s, SurfacePoint::plane(0.5, 0.5), ArcInterval::full(), 16, PropagationParams::for_surface(&s)).unwrap();
        let svg = render_svg(&f, &SvgOptions::default());
        assert!(!svg.contains("<polyline"));
        assert_eq!(svg.matches("<circle").count(), 1);
    }

    #[test]
    fn cube_renders_four_colours() {
        let f = front("cube:1", "U/0.5/0.5", 1.0);
        let svg = render_svg(&f, &SvgOptions::default());
        for c in &PALETTE[..4] {
            assert!(svg.contains(&format!("stroke=\"{c}\"")), "{c}");
        }
        assert_eq!(svg, render_svg(&f, &SvgOptions::default()));
    }

    #[test]
    fn disk_rim_is_one_closed_polyline() {
        let f = front("disk:1", "0,0", 1.0);
        let svg = render_svg(&f, &SvgOptions { width_px: 400, color_by_component: true });
        assert_eq!(svg.matches("<polyline").count(), 1);
    }

    #[test]
    fn csv_headers() {
        assert!(series_csv::<DensityReport>(&[]).starts_with("t,covering_radius,cells_hit_fraction,length,components\n"));
        let row = crate::lattice::lattice_count(5.0, 1.0).unwrap();
        let csv = series_csv(&[row]);
        assert!(csv.starts_with("t,h,N_t,annulus_count,expected_area,E_t,gauss_bound\n5,1,81,"));
    }
}
