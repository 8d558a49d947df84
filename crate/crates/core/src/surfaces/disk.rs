//! Billiard in a round disk centred at the origin.
//!
//! Angular momentum about the centre is conserved, so after the first wall
//! hit every chord has the same length and the motion is a fixed rotation per
//! bounce. [`disk_position`] uses that to evaluate in constant time;
//! [`trace_disk_ray`] walks the bounces one at a time and records them.

use crate::error::{Error, Result};
use crate::surfaces::cube::EVENT_BUDGET;

/// One specular reflection at the rim.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RimEvent {
    pub time: f64,
    pub point: [f64; 2],
    pub incoming: [f64; 2],
    pub outgoing: [f64; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiskState {
    pub pos: [f64; 2],
    pub dir: [f64; 2],
    pub reflections: u64,
}

/// Time until the ray `p + s d` leaves the disk of radius `r`.
fn time_to_rim(r: f64, p: [f64; 2], d: [f64; 2]) -> f64 {
    let pd = p[0] * d[0] + p[1] * d[1];
    let pp = p[0] * p[0] + p[1] * p[1];
    let disc = (pd * pd + r * r - pp).max(0.0);
    // Stable form of -pd + sqrt(disc).
    if pd <= 0.0 {
        -pd + disc.sqrt()
    } else {
        let q = pd + disc.sqrt();
        if q == 0.0 {
            0.0
        } else {
            ((r * r - pp) / q).max(0.0)
        }
    }
}

fn reflect(p: [f64; 2], d: [f64; 2], r: f64) -> [f64; 2] {
    let n = [p[0] / r, p[1] / r];
    let dn = d[0] * n[0] + d[1] * n[1];
    [d[0] - 2.0 * dn * n[0], d[1] - 2.0 * dn * n[1]]
}

fn rotate(v: [f64; 2], c: f64, s: f64) -> [f64; 2] {
    [c * v[0] - s * v[1], s * v[0] + c * v[1]]
}

/// Position after time `t` of the billiard ray from `p` in direction `theta`.
pub fn disk_position(r: f64, p: [f64; 2], theta: f64, t: f64) -> Result<DiskState> {
    let d = [theta.cos(), theta.sin()];
    let first = time_to_rim(r, p, d);
    if t <= first {
        return Ok(DiskState {
            pos: [p[0] + t * d[0], p[1] + t * d[1]],
            dir: d,
            reflections: 0,
        });
    }
    // Rim point of the first hit, renormalised onto the circle.
    let mut q0 = [p[0] + first * d[0], p[1] + first * d[1]];
    let norm = q0[0].hypot(q0[1]);
    q0 = [q0[0] * r / norm, q0[1] * r / norm];
    let d1 = reflect(q0, d, r);
    let chord = -2.0 * (q0[0] * d1[0] + q0[1] * d1[1]);
    let rest = t - first;
    if chord <= 1e-15 * r {
        // Tangential ray: the limit of ever shorter chords is creeping along the rim.
        let ang = rest / r;
        let (s, c) = ang.sin_cos();
        let sense = (q0[0] * d[1] - q0[1] * d[0]).signum();
        let pos = rotate(q0, c, sense * s);
        return Ok(DiskState {
            pos,
            dir: rotate(d, c, sense * s),
            reflections: 1,
        });
    }
    // Bounces strictly before t; a bounce exactly at t is not counted yet.
    let k = ((rest / chord).ceil() - 1.0).max(0.0);
    if k >= EVENT_BUDGET as f64 {
        return Err(Error::Numerical(format!(
            "disk ray exceeded {EVENT_BUDGET} reflections"
        )));
    }
    let tau = rest - k * chord;
    let q1 = [q0[0] + chord * d1[0], q0[1] + chord * d1[1]];
    let step = (q0[0] * q1[1] - q0[1] * q1[0]).atan2(q0[0] * q1[0] + q0[1] * q1[1]);
    let (s, c) = (k * step).sin_cos();
    let qk = rotate(q0, c, s);
    let dk = rotate(d1, c, s);
    Ok(DiskState {
        pos: [qk[0] + tau * dk[0], qk[1] + tau * dk[1]],
        dir: dk,
        reflections: k as u64 + 1,
    })
}

/// Event-by-event walk of the same ray, optionally recording every bounce.
pub fn trace_disk_ray(
    r: f64,
    p: [f64; 2],
    theta: f64,
    t: f64,
    mut events: Option<&mut Vec<RimEvent>>,
) -> Result<DiskState> {
    let mut pos = p;
    let mut dir = [theta.cos(), theta.sin()];
    let mut elapsed = 0.0;
    let mut reflections = 0u64;
    loop {
        let hit = time_to_rim(r, pos, dir);
        if elapsed + hit >= t {
            let s = t - elapsed;
            return Ok(DiskState {
                pos: [pos[0] + s * dir[0], pos[1] + s * dir[1]],
                dir,
                reflections,
            });
        }
        let mut q = [pos[0] + hit * dir[0], pos[1] + hit * dir[1]];
        let norm = q[0].hypot(q[1]);
        q = [q[0] * r / norm, q[1] * r / norm];
        let out = reflect(q, dir, r);
        elapsed += hit;
        reflections += 1;
        if reflections > EVENT_BUDGET {
            return Err(Error::Numerical(format!(
                "disk ray exceeded {EVENT_BUDGET} reflections"
            )));
        }
        if let Some(ev) = events.as_deref_mut() {
            ev.push(RimEvent {
                time: elapsed,
                point: q,
                incoming: dir,
                outgoing: out,
            });
        }
        if hit == 0.0 && out == dir {
            // Exactly tangent at the rim; no further progress is possible.
            return Ok(DiskState { pos: q, dir, reflections });
        }
        pos = q;
        dir = out;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centre_ray_returns_to_centre() {
        for theta in [0.0, 0.7, 3.0, 5.9] {
            let st = disk_position(1.0, [0.0, 0.0], theta, 2.0).unwrap();
            assert!(st.pos[0].abs() < 1e-12 && st.pos[1].abs() < 1e-12);
            assert_eq!(st.reflections, 1);
        }
    }

    #[test]
    fn closed_form_matches_walk() {
        for &(px, py) in &[(0.3, -0.2), (0.5, 0.0), (-0.79, 0.1)] {
            for i in 0..40 {
                let theta = i as f64 * 0.157;
                for &t in &[0.4, 3.3, 17.0, 120.5] {
                    let a = disk_position(1.0, [px, py], theta, t).unwrap();
                    let b = trace_disk_ray(1.0, [px, py], theta, t, None).unwrap();
                    assert_eq!(a.reflections, b.reflections, "{px},{py} {theta} {t}");
                    let err = (a.pos[0] - b.pos[0]).hypot(a.pos[1] - b.pos[1]);
                    assert!(err < 1e-9, "{err}");
                }
            }
        }
    }

    #[test]
    fn specular_law_holds_at_every_bounce() {
        let mut events = Vec::new();
        trace_disk_ray(1.0, [0.4, 0.25], 1.1, 50.0, Some(&mut events)).unwrap();
        assert!(events.len() > 10);
        for e in &events {
            let n = e.point;
            let cos_in = -(e.incoming[0] * n[0] + e.incoming[1] * n[1]);
            let cos_out = e.outgoing[0] * n[0] + e.outgoing[1] * n[1];
            assert!((cos_in - cos_out).abs() < 1e-9);
            // Tangential components agree.
            let tan_in = e.incoming[0] * -n[1] + e.incoming[1] * n[0];
            let tan_out = e.outgoing[0] * -n[1] + e.outgoing[1] * n[0];
            assert!((tan_in - tan_out).abs() < 1e-9);
        }
    }
}
