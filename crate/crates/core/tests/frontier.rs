use std::f64::consts::{PI, TAU};

use wavefront_core::frontier::{init_front, propagate_from};
use wavefront_core::io::snapshot_bytes;
use wavefront_core::surfaces::surface_distance;
use wavefront_core::{ArcInterval, Front, PropagationParams, SurfaceModel, SurfacePoint};

fn surf(s: &str) -> SurfaceModel {
    s.parse().unwrap()
}

fn run(s: &str, p: &str, t: f64, h: Option<f64>) -> Front {
    let s = surf(s);
    let mut params = PropagationParams::for_surface(&s);
    if let Some(h) = h {
        params = params.with_h_max(h);
    }
    propagate_from(s, p.parse().unwrap(), t, 256, params).unwrap()
}

fn check_structure(f: &Front) {
    for c in &f.components {
        assert!(c.samples.windows(2).all(|w| w[0].theta < w[1].theta));
        for (a, b) in c.pairs() {
            if a.alive && b.alive {
                assert!(surface_distance(&f.surface, &a.pos, &b.pos) <= f.params.h_max);
            }
        }
    }
    let intervals: Vec<(f64, f64)> = f.components.iter().map(|c| (c.interval.lo, c.interval.hi)).collect();
    assert!(intervals.windows(2).all(|w| w[0].1 < w[1].0 || (w[0].0 <= w[1].0 && w[0].1 <= w[1].0)));
    assert!(f.sample_count() <= f.params.sample_budget);
}

#[test]
fn init_examples() {
    let s = surf("torus:1,1");
    let params = PropagationParams::for_surface(&s);
    let f = init_front(s, SurfacePoint::plane(0.0, 0.0), ArcInterval::full(), 8, params).unwrap();
    assert_eq!(f.sample_count(), 8);
    assert_eq!(f.length(), 0.0);
    let f = init_front(s, SurfacePoint::plane(0.5, 0.5), ArcInterval::new(0.0, PI).unwrap(), 4, params).unwrap();
    let th: Vec<f64> = f.components[0].samples.iter().map(|s| s.theta).collect();
    for (a, b) in th.iter().zip([0.0, PI / 3.0, 2.0 * PI / 3.0, PI]) {
        assert!((a - b).abs() < 1e-15);
    }
}

#[test]
fn resolution_and_order_hold() {
    for (s, p, t) in [
        ("torus:1,1", "0.37,0.61", 12.0),
        ("klein", "0.1,0.85", 9.0),
        ("rect:2,0.5", "0.3,0.2", 7.0),
        ("disk:1", "0.5,0", 15.0),
        ("cube:1", "U/0.3/0.6", 4.0),
        ("cube:2", "F/1/1", 3.0),
    ] {
        let f = run(s, p, t, None);
        check_structure(&f);
        if !f.surface.is_cube() {
            assert_eq!(f.component_count(), 1, "{s}");
        }
    }
}

#[test]
fn open_arc_front() {
    let s = surf("cube:1");
    let params = PropagationParams::for_surface(&s);
    let mut f = init_front(s, "U/0.5/0.5".parse().unwrap(), ArcInterval::new(0.1, 1.4).unwrap(), 16, params).unwrap();
    f.propagate(1.0).unwrap();
    check_structure(&f);
    assert_eq!(f.component_count(), 2, "one corner direction (pi/4) lies inside the arc");
    assert!(f.components.iter().all(|c| c.interval.lo >= 0.1 && c.interval.hi <= 1.4));
}

#[test]
fn refinement_only_adds_length() {
    for (s, p) in [("torus:1,1", "0.2,0.3"), ("disk:1", "0.6,0.1"), ("cube:1", "U/0.3/0.6")] {
        let fine = run(s, p, 6.0, Some(0.004));
        let coarse = run(s, p, 6.0, Some(0.008));
        assert!(fine.length() >= coarse.length() * (1.0 - 1e-12), "{s}");
    }
}

#[test]
fn flat_length_law() {
    for (s, p) in [("torus:1,1", "0.2,0.3"), ("torus:1.5,0.8", "0.2,0.3"), ("klein", "0.5,0.5"), ("rect:1,1", "0.3,0.7"), ("cube:1", "R/0.2/0.9")] {
        let f = run(s, p, 10.0, None);
        let ratio = f.length() / (TAU * 10.0);
        assert!(ratio <= 1.0 + 1e-12 && ratio >= 1.0 - 10.0 * f.params.h_max, "{s}: {ratio}");
    }
    let rim = run("disk:1", "0,0", 1.0, None);
    assert!((rim.length() / TAU - 1.0).abs() < 1e-3);
    let torus = run("torus:1,1", "0,0", 10.0, Some(0.01));
    assert!((torus.length() / (TAU * 10.0) - 1.0).abs() < 1e-3);
}

#[test]
fn cube_components_only_grow_early() {
    let s = surf("cube:1");
    let mut f = init_front(s, "U/0.5/0.5".parse().unwrap(), ArcInterval::full(), 64, PropagationParams::for_surface(&s)).unwrap();
    let mut last = 1;
    for k in 1..=15 {
        f.propagate(0.1 * k as f64).unwrap();
        let n = f.component_count();
        assert!(n >= last);
        last = n;
    }
    assert_eq!(last, 4);
    // Four corner directions died, one per quadrant.
    let mut dead: Vec<f64> = f.dead.iter().map(|d| d.theta).collect();
    dead.sort_by(f64::total_cmp);
    assert_eq!(dead.len(), 4);
    for (d, want) in dead.iter().zip([PI / 4.0, 3.0 * PI / 4.0, 5.0 * PI / 4.0, 7.0 * PI / 4.0]) {
        assert!((d - want).abs() < 1e-9);
    }
    assert!(f.dead.iter().all(|d| (d.death_time - 0.5f64.sqrt()).abs() < 1e-6));
}

#[test]
fn propagation_is_deterministic() {
    for (s, p, t) in [("torus:1,1", "0.37,0.61", 5.0), ("cube:1", "U/0.3/0.6", 3.0), ("disk:1", "0.4,0.3", 8.0)] {
        let a = snapshot_bytes(&run(s, p, t, None));
        let b = snapshot_bytes(&run(s, p, t, None));
        assert_eq!(a, b);
    }
}
