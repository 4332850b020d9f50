#![allow(dead_code)]

use num_traits::Signed;
use okcaps::exactgeom::{int, Polygon, Pt};
use okcaps::moment::MomentDomain;
use rand::Rng;

/// Random integral convex moment domain inside [0, size]^2.
pub fn random_convex<R: Rng>(rng: &mut R, size: i64, extra: usize) -> MomentDomain {
    let a = rng.gen_range(1..=size);
    let b = rng.gen_range(1..=size);
    let mut pts = vec![Pt::int(0, 0), Pt::int(a, 0), Pt::int(0, b)];
    for _ in 0..extra {
        pts.push(Pt::int(rng.gen_range(0..=size), rng.gen_range(0..=size)));
    }
    MomentDomain::from_polygon(&Polygon::hull(&pts)).unwrap()
}

/// Random integral concave moment domain: edges with strictly increasing slope.
pub fn random_concave<R: Rng>(rng: &mut R, edges: usize, step: i64) -> MomentDomain {
    let mut dirs: Vec<(i64, i64)> = Vec::new();
    while dirs.len() < edges {
        let dx = rng.gen_range(1..=step);
        let dy = -rng.gen_range(1..=step);
        if dirs.iter().all(|&(x, y)| x * dy - y * dx != 0) {
            dirs.push((dx, dy));
        }
    }
    // steepest first
    dirs.sort_by(|a, b| (a.1 * b.0).cmp(&(b.1 * a.0)));
    let h: i64 = dirs.iter().map(|d| -d.1).sum();
    let mut p = (0, h);
    let mut pts = vec![Pt::int(p.0, p.1)];
    for (dx, dy) in dirs {
        p = (p.0 + dx, p.1 + dy);
        pts.push(Pt::int(p.0, p.1));
    }
    MomentDomain::from_points(&pts).unwrap()
}

pub fn nonneg(p: &Pt) -> bool {
    !p.x.is_negative() && !p.y.is_negative()
}

pub fn pt(x: i64, y: i64) -> Pt {
    Pt::new(int(x), int(y))
}
