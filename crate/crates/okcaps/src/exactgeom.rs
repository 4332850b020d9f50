//! Exact rationals, lattice vectors and convex polygons.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Canonical "p/q" or "p" form.
pub fn rat_str(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Invalid(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(p, q))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn floor_i64(r: &Rat) -> i64 {
    r.floor()
        .to_integer()
        .to_i64()
        .expect("coordinate exceeds i64")
}

pub fn ceil_i64(r: &Rat) -> i64 {
    r.ceil()
        .to_integer()
        .to_i64()
        .expect("coordinate exceeds i64")
}

/// Rational bounds lo <= sqrt(x) <= hi with hi - lo <= 2^-bits. Exact when x is a square.
pub fn sqrt_interval(x: &Rat, bits: u32) -> (Rat, Rat) {
    assert!(!x.is_negative(), "sqrt of negative");
    if let Some(s) = rat_sqrt_exact(x) {
        return (s.clone(), s);
    }
    let scale = BigInt::one() << bits;
    let num = x.numer() * &scale * &scale;
    let q = num / x.denom();
    let f = q.sqrt();
    let lo = Rat::new(f.clone(), scale.clone());
    let hi = Rat::new(f + 1, scale);
    (lo, hi)
}

/// Exact square root when x is the square of a rational.
pub fn rat_sqrt_exact(x: &Rat) -> Option<Rat> {
    if x.is_negative() {
        return None;
    }
    let (p, q) = (x.numer(), x.denom());
    let (sp, sq) = (p.sqrt(), q.sqrt());
    (&sp * &sp == *p && &sq * &sq == *q).then(|| Rat::new(sp, sq))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pt {
    pub x: Rat,
    pub y: Rat,
}

impl Pt {
    pub fn new(x: Rat, y: Rat) -> Self {
        Pt { x, y }
    }
    pub fn int(x: i64, y: i64) -> Self {
        Pt {
            x: int(x),
            y: int(y),
        }
    }
    pub fn sub(&self, o: &Pt) -> Pt {
        Pt::new(&self.x - &o.x, &self.y - &o.y)
    }
    pub fn add(&self, o: &Pt) -> Pt {
        Pt::new(&self.x + &o.x, &self.y + &o.y)
    }
    pub fn scale(&self, s: &Rat) -> Pt {
        Pt::new(&self.x * s, &self.y * s)
    }
}

impl fmt::Display for Pt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", rat_str(&self.x), rat_str(&self.y))
    }
}

pub fn cross(a: &Pt, b: &Pt) -> Rat {
    &a.x * &b.y - &a.y * &b.x
}

/// Orientation of (a, b, c): positive for a left turn.
pub fn orient(a: &Pt, b: &Pt, c: &Pt) -> Rat {
    cross(&b.sub(a), &c.sub(a))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVec {
    pub x: i64,
    pub y: i64,
}

impl LatticeVec {
    pub fn new(x: i64, y: i64) -> Self {
        LatticeVec { x, y }
    }
    pub fn cross(&self, o: &LatticeVec) -> i64 {
        self.x * o.y - self.y * o.x
    }
    pub fn gcd(&self) -> i64 {
        self.x.gcd(&self.y)
    }
    pub fn primitive(&self) -> LatticeVec {
        let g = self.gcd();
        if g == 0 {
            *self
        } else {
            LatticeVec::new(self.x / g, self.y / g)
        }
    }
}

/// Convex polygon with counterclockwise vertices starting at the lexicographically
/// smallest one. One or two vertices encode a point or a segment.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polygon {
    vertices: Vec<Pt>,
}

impl Polygon {
    /// Convex hull of the points, in canonical order with collinear points removed.
    pub fn hull(points: &[Pt]) -> Polygon {
        let mut pts: Vec<Pt> = points.to_vec();
        pts.sort();
        pts.dedup();
        if pts.len() <= 2 {
            return Polygon { vertices: pts };
        }
        let mut lower: Vec<Pt> = Vec::new();
        for p in &pts {
            while lower.len() >= 2
                && !orient(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive()
            {
                lower.pop();
            }
            lower.push(p.clone());
        }
        let mut upper: Vec<Pt> = Vec::new();
        for p in pts.iter().rev() {
            while upper.len() >= 2
                && !orient(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive()
            {
                upper.pop();
            }
            upper.push(p.clone());
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        if lower.len() == 2 && lower[0] == lower[1] {
            lower.pop();
        }
        Polygon { vertices: lower }
    }

    pub fn from_ints(pts: &[(i64, i64)]) -> Polygon {
        let v: Vec<Pt> = pts.iter().map(|&(x, y)| Pt::int(x, y)).collect();
        Polygon::hull(&v)
    }

    pub fn vertices(&self) -> &[Pt] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Directed edges (v_i, v_{i+1}) around the boundary.
    pub fn edges(&self) -> Vec<(Pt, Pt)> {
        let n = self.vertices.len();
        if n < 2 {
            return Vec::new();
        }
        (0..n)
            .map(|i| (self.vertices[i].clone(), self.vertices[(i + 1) % n].clone()))
            .collect()
    }

    pub fn area(&self) -> Rat {
        let n = self.vertices.len();
        let mut s = Rat::zero();
        for i in 0..n {
            s += cross(&self.vertices[i], &self.vertices[(i + 1) % n]);
        }
        s / int(2)
    }

    pub fn is_integral(&self) -> bool {
        self.vertices
            .iter()
            .all(|p| p.x.is_integer() && p.y.is_integer())
    }

    /// Lattice points on the boundary of an integral polygon.
    pub fn boundary_count(&self) -> Option<u64> {
        if !self.is_integral() {
            return None;
        }
        match self.vertices.len() {
            0 => Some(0),
            1 => Some(1),
            _ => {
                let mut b: u64 = 0;
                for (p, q) in self.edges() {
                    let d = q.sub(&p);
                    let g = d.x.to_integer().gcd(&d.y.to_integer());
                    b += g.to_u64().expect("boundary too large");
                }
                if self.vertices.len() == 2 {
                    b /= 2;
                    b += 1;
                }
                Some(b)
            }
        }
    }

    pub fn contains(&self, p: &Pt) -> bool {
        match self.vertices.len() {
            0 => false,
            1 => self.vertices[0] == *p,
            _ => {
                self.edges()
                    .iter()
                    .all(|(a, b)| !orient(a, b, p).is_negative())
                    && (self.vertices.len() > 2
                        || on_segment(&self.vertices[0], &self.vertices[1], p))
            }
        }
    }

    pub fn translate(&self, t: &Pt) -> Polygon {
        let v: Vec<Pt> = self.vertices.iter().map(|p| p.add(t)).collect();
        Polygon::hull(&v)
    }

    pub fn scale(&self, s: &Rat) -> Polygon {
        let v: Vec<Pt> = self.vertices.iter().map(|p| p.scale(s)).collect();
        Polygon::hull(&v)
    }

    pub fn minkowski_sum(&self, other: &Polygon) -> Polygon {
        let mut pts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for p in &self.vertices {
            for q in &other.vertices {
                pts.push(p.add(q));
            }
        }
        Polygon::hull(&pts)
    }
}

fn on_segment(a: &Pt, b: &Pt, p: &Pt) -> bool {
    orient(a, b, p).is_zero()
        && p.x >= a.x.clone().min(b.x.clone())
        && p.x <= a.x.clone().max(b.x.clone())
        && p.y >= a.y.clone().min(b.y.clone())
        && p.y <= a.y.clone().max(b.y.clone())
}

/// max over vertices p of v.x * p.y - v.y * p.x.
pub fn support_eval(p: &Polygon, v: LatticeVec) -> Result<Rat> {
    let (vx, vy) = (int(v.x), int(v.y));
    p.vertices
        .iter()
        .map(|q| &vx * &q.y - &vy * &q.x)
        .max()
        .ok_or(Error::DegeneratePolygon)
}

/// Integer points in the closed polygon, counted row by row.
pub fn lattice_count(p: &Polygon) -> u64 {
    let vs = &p.vertices;
    if vs.is_empty() {
        return 0;
    }
    let ymin = vs.iter().map(|q| &q.y).min().unwrap();
    let ymax = vs.iter().map(|q| &q.y).max().unwrap();
    let mut total: u64 = 0;
    for y in ceil_i64(ymin)..=floor_i64(ymax) {
        if let Some((lo, hi)) = row_span(vs, &int(y)) {
            let (a, b) = (ceil_i64(&lo), floor_i64(&hi));
            if b >= a {
                total += (b - a + 1) as u64;
            }
        }
    }
    total
}

/// x-extent of the polygon on the horizontal line at height y.
fn row_span(vs: &[Pt], y: &Rat) -> Option<(Rat, Rat)> {
    let mut xs: Vec<Rat> = Vec::new();
    let n = vs.len();
    if n == 1 && vs[0].y == *y {
        xs.push(vs[0].x.clone());
    }
    let edge_count = match n {
        0 | 1 => 0,
        2 => 1,
        _ => n,
    };
    for i in 0..edge_count {
        let (a, b) = (&vs[i], &vs[(i + 1) % n]);
        let (lo, hi) = if a.y <= b.y { (a, b) } else { (b, a) };
        if *y < lo.y || *y > hi.y {
            continue;
        }
        if lo.y == hi.y {
            xs.push(lo.x.clone());
            xs.push(hi.x.clone());
        } else {
            xs.push(&lo.x + (y - &lo.y) * (&hi.x - &lo.x) / (&hi.y - &lo.y));
        }
    }
    let lo = xs.iter().min()?.clone();
    let hi = xs.iter().max()?.clone();
    Some((lo, hi))
}

/// Image of the polygon under x -> M x + t for unimodular M.
pub fn unimodular_apply(p: &Polygon, m: [[i64; 2]; 2], t: (Rat, Rat)) -> Result<Polygon> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det.abs() != 1 {
        return Err(Error::NotUnimodular(det));
    }
    let v: Vec<Pt> = p.vertices.iter().map(|q| apply_affine(m, &t, q)).collect();
    Ok(Polygon::hull(&v))
}

pub fn apply_affine(m: [[i64; 2]; 2], t: &(Rat, Rat), q: &Pt) -> Pt {
    Pt::new(
        int(m[0][0]) * &q.x + int(m[0][1]) * &q.y + &t.0,
        int(m[1][0]) * &q.x + int(m[1][1]) * &q.y + &t.1,
    )
}

/// Order of direction vectors by angle, clockwise from (1,0) to (0,-1).
pub fn clockwise_cmp(a: &LatticeVec, b: &LatticeVec) -> Ordering {
    a.cross(b).cmp(&0)
}
