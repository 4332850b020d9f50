//! ECH capacities of balls, ellipsoids, disjoint unions and toric domains.

use crate::error::{Error, Result};
use crate::exactgeom::{
    clockwise_cmp, int, lattice_count, rat_str, support_eval, LatticeVec, Polygon, Pt, Rat,
};
use crate::moment::{wt_concave, Kind, MomentDomain};
use crate::par;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Reverse;
use std::collections::BinaryHeap;

/// Capacities c_0..c_kmax of one domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapacitySeq {
    pub label: String,
    pub values: Vec<Rat>,
}

impl CapacitySeq {
    pub fn new(label: impl Into<String>, values: Vec<Rat>) -> Self {
        CapacitySeq {
            label: label.into(),
            values,
        }
    }

    pub fn get(&self, k: usize) -> Option<&Rat> {
        self.values.get(k)
    }

    pub fn kmax(&self) -> usize {
        self.values.len().saturating_sub(1)
    }
}

fn positive(a: &Rat, what: &str) -> Result<()> {
    if a.is_positive() {
        Ok(())
    } else {
        Err(Error::NonPositive(format!("{what} {}", rat_str(a))))
    }
}

/// Smallest d with d(d+3)/2 >= k.
pub fn ball_degree(k: usize) -> u64 {
    let k = k as u64;
    let mut d = (((8 * k + 9) as f64).sqrt() as u64).saturating_sub(3) / 2;
    while d * (d + 3) / 2 < k {
        d += 1;
    }
    while d > 0 && (d - 1) * (d + 2) / 2 >= k {
        d -= 1;
    }
    d
}

pub fn ball_cap(a: &Rat, k: usize) -> Result<Rat> {
    positive(a, "ball size")?;
    Ok(a * int(ball_degree(k) as i64))
}

pub fn ball_caps(a: &Rat, kmax: usize) -> Result<CapacitySeq> {
    positive(a, "ball size")?;
    let v = (0..=kmax).map(|k| a * int(ball_degree(k) as i64)).collect();
    Ok(CapacitySeq::new(format!("B({})", rat_str(a)), v))
}

/// Values m*a + n*b in nondecreasing order with multiplicity, first kmax+1 of them.
pub fn ellipsoid_caps(a: &Rat, b: &Rat, kmax: usize) -> Result<CapacitySeq> {
    positive(a, "ellipsoid radius")?;
    positive(b, "ellipsoid radius")?;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((Rat::zero(), 0u64, 0u64)));
    let mut out = Vec::with_capacity(kmax + 1);
    while out.len() <= kmax {
        let Reverse((v, m, n)) = heap.pop().unwrap();
        heap.push(Reverse((&v + b, m, n + 1)));
        if n == 0 {
            heap.push(Reverse((&v + a, m + 1, 0)));
        }
        out.push(v);
    }
    Ok(CapacitySeq::new(
        format!("E({},{})", rat_str(a), rat_str(b)),
        out,
    ))
}

pub fn ellipsoid_cap(a: &Rat, b: &Rat, k: usize) -> Result<Rat> {
    Ok(ellipsoid_caps(a, b, k)?.values.pop().unwrap())
}

/// Disjoint union: c_k = max over k = k_1 + ... + k_r of the sum of c_{k_i}.
pub fn union_caps(seqs: &[CapacitySeq], kmax: usize) -> Result<CapacitySeq> {
    let mut acc: Vec<Rat> = vec![Rat::zero(); kmax + 1];
    let mut first = true;
    for s in seqs {
        if s.values.len() <= kmax {
            return Err(Error::Invalid(format!(
                "{} is only known up to k={}",
                s.label,
                s.kmax()
            )));
        }
        if first {
            acc = s.values[..=kmax].to_vec();
            first = false;
            continue;
        }
        acc = (0..=kmax)
            .map(|k| (0..=k).map(|i| &acc[k - i] + &s.values[i]).max().unwrap())
            .collect();
    }
    let label = seqs
        .iter()
        .map(|s| s.label.as_str())
        .collect::<Vec<_>>()
        .join(" + ");
    Ok(CapacitySeq::new(label, acc))
}

pub fn union_cap(seqs: &[CapacitySeq], k: usize) -> Result<Rat> {
    Ok(union_caps(seqs, k)?.values.pop().unwrap())
}

/// Concave toric domain: the union of the balls of its weight sequence.
pub fn concave_caps(d: &MomentDomain, kmax: usize) -> Result<CapacitySeq> {
    let w = wt_concave(d)?.weights();
    let balls = w
        .iter()
        .map(|a| ball_caps(a, kmax))
        .collect::<Result<Vec<_>>>()?;
    let mut u = union_caps(&balls, kmax)?;
    u.label = "concave".into();
    Ok(u)
}

pub fn concave_cap(d: &MomentDomain, k: usize) -> Result<Rat> {
    Ok(concave_caps(d, k)?.values.pop().unwrap())
}

/// Clockwise angle order on directions, starting just after (0,1).
fn arc_cmp(a: &LatticeVec, b: &LatticeVec) -> std::cmp::Ordering {
    let half = |v: &LatticeVec| {
        if v.x > 0 || (v.x == 0 && v.y > 0) {
            0
        } else {
            1
        }
    };
    half(a).cmp(&half(b)).then_with(|| clockwise_cmp(a, b))
}

/// Integer data of a convex domain scaled by the common denominator q. Path edges
/// range over the clockwise arc from (0,1) to (-1,0); only the primitive vectors of
/// the fundamental parallelograms between consecutive normal directions of the domain
/// are needed, since the length functional is linear on those cones and splitting an
/// edge into such vectors only enlarges the enclosed region.
struct Scaled {
    q: BigInt,
    dirs: Vec<LatticeVec>,
    h: Vec<i128>,
    diag: i128,
    a: i128,
    b: i128,
}

fn scaled(d: &MomentDomain) -> Result<Scaled> {
    if d.kind() != Kind::Convex {
        return Err(Error::NotConvex);
    }
    let poly = d.polygon()?;
    let q = poly.vertices().iter().fold(BigInt::one(), |acc, p| {
        acc.lcm(p.x.denom()).lcm(p.y.denom())
    });
    let qr = Rat::from_integer(q.clone());
    let to_i = |r: &Rat| -> i128 { (r * &qr).to_integer().to_i128().expect("domain too large") };
    let mut crit = vec![
        LatticeVec::new(0, 1),
        LatticeVec::new(1, 0),
        LatticeVec::new(0, -1),
        LatticeVec::new(-1, 0),
    ];
    for w in d.outer().windows(2) {
        let e = w[1].sub(&w[0]);
        crit.push(LatticeVec::new(to_i(&e.x) as i64, to_i(&e.y) as i64).primitive());
    }
    crit.sort_by(arc_cmp);
    crit.dedup();
    let mut dirs = crit.clone();
    for w in crit.windows(2) {
        dirs.extend(parallelogram_points(w[0], w[1]));
    }
    dirs.retain(|v| *v != LatticeVec::new(0, 1) && *v != LatticeVec::new(-1, 0));
    dirs.sort_by(arc_cmp);
    dirs.dedup();
    let h = dirs
        .iter()
        .map(|&v| to_i(&support_eval(&poly, v).unwrap()))
        .collect();
    let diag = to_i(&support_eval(&poly, LatticeVec::new(1, -1)).unwrap());
    Ok(Scaled {
        q,
        dirs,
        h,
        diag,
        a: to_i(&d.x_intercept()),
        b: to_i(&d.y_intercept()),
    })
}

/// Primitive lattice points s*u + t*v with 0 <= s, t < 1, other than 0.
fn parallelogram_points(u: LatticeVec, v: LatticeVec) -> Vec<LatticeVec> {
    let det = u.cross(&v);
    let xs = [0, u.x, v.x, u.x + v.x];
    let ys = [0, u.y, v.y, u.y + v.y];
    let (x0, x1) = (*xs.iter().min().unwrap(), *xs.iter().max().unwrap());
    let (y0, y1) = (*ys.iter().min().unwrap(), *ys.iter().max().unwrap());
    let mut out = Vec::new();
    let inside = |num: i64| {
        if det > 0 {
            num >= 0 && num < det
        } else {
            num <= 0 && num > det
        }
    };
    for x in x0..=x1 {
        for y in y0..=y1 {
            let p = LatticeVec::new(x, y);
            if (x, y) != (0, 0) && inside(p.cross(&v)) && inside(u.cross(&p)) && p.gcd() == 1 {
                out.push(p);
            }
        }
    }
    out
}

/// Directions that rise (only before the top vertex) and that run down-left.
fn phases(s: &Scaled) -> (bool, bool) {
    let up = s.dirs.iter().any(|v| v.y > 0);
    let down_left = s.dirs.iter().any(|v| v.x < 0);
    (up, down_left)
}

const INF: i128 = i128::MAX;

/// Dynamic program over edge multisets in clockwise order. A path from (0, y0) with
/// edges (x, -y) encloses, with the axes, a region with 2*area + boundary points equal
/// to S + X, where X is the final x-extent and S accumulates y(2X + x) + y + 1 per
/// primitive edge. Rising edges come first and make S negative; afterwards S only
/// grows and is capped at 2*kmax. `D` is rise not yet matched by descent, which must
/// vanish at the end (y0 >= 0).
struct PathDp {
    xmax: usize,
    dmax: usize,
    smin: i64,
    cap: i64,
    layers: Vec<Vec<i128>>,
}

impl PathDp {
    fn idx(&self, x: usize, d: usize, s: i64) -> usize {
        let srange = (self.cap - self.smin + 1) as usize;
        (x * (self.dmax + 1) + d) * srange + (s - self.smin) as usize
    }

    fn step(&self, v: LatticeVec, x: usize, d: usize, s: i64) -> Option<(usize, usize, i64)> {
        let nx = x as i64 + v.x;
        if nx < 0 || nx as usize > self.xmax {
            return None;
        }
        let y = -v.y;
        let ds = y * (2 * x as i64 + v.x) + y + 1;
        if y < 0 {
            let nd = d + (-y) as usize;
            if nd > self.dmax {
                return None;
            }
            Some((nx as usize, nd, s + ds))
        } else {
            Some((
                nx as usize,
                d.saturating_sub(y as usize),
                (s + ds).min(self.cap),
            ))
        }
    }

    fn run(s: &Scaled, kmax: usize, keep_layers: bool) -> PathDp {
        let cap = 2 * kmax as i64;
        let upper = ball_degree_for_points(kmax + 1) as i128 * s.diag;
        let xmax = (upper / s.b) as usize;
        let (up, _) = phases(s);
        let dmax = if up { (upper / s.a) as usize } else { 0 };
        let smin = -((dmax * (2 * xmax + 1)) as i64);
        let mut dp = PathDp {
            xmax,
            dmax,
            smin,
            cap,
            layers: Vec::new(),
        };
        let size = dp.idx(xmax, dmax, cap) + 1;
        let mut t = vec![INF; size];
        t[dp.idx(0, 0, 0)] = 0;
        if keep_layers {
            dp.layers.push(t.clone());
        }
        for (j, v) in s.dirs.iter().enumerate() {
            let hv = s.h[j];
            let xs: Vec<usize> = if v.x < 0 {
                (0..=xmax).rev().collect()
            } else {
                (0..=xmax).collect()
            };
            // descents lower d, so d runs downward for repeated use of an edge
            for &x in &xs {
                for d in (0..=dmax).rev() {
                    for sv in smin..=cap {
                        let cur = t[dp.idx(x, d, sv)];
                        if cur == INF || cur + hv > upper {
                            continue;
                        }
                        if let Some((nx, nd, ns)) = dp.step(*v, x, d, sv) {
                            let i = dp.idx(nx, nd, ns);
                            if cur + hv < t[i] {
                                t[i] = cur + hv;
                            }
                        }
                    }
                }
            }
            if keep_layers {
                dp.layers.push(t.clone());
            }
        }
        if !keep_layers {
            dp.layers.push(t);
        }
        dp
    }

    fn last(&self) -> &[i128] {
        self.layers.last().unwrap()
    }

    /// Closed states (no unmatched rise) as (x, s, value).
    fn finals(&self) -> Vec<(usize, i64, i128)> {
        let t = self.last();
        let mut out = Vec::new();
        for x in 0..=self.xmax {
            for sv in self.smin..=self.cap {
                let v = t[self.idx(x, 0, sv)];
                if v != INF && sv + x as i64 >= 0 {
                    out.push((x, sv, v));
                }
            }
        }
        out
    }

    /// min value over closed states with S + X >= 2k, for every k <= kmax.
    fn answers(&self, kmax: usize) -> Vec<i128> {
        let mut best = vec![INF; kmax + 1];
        for (x, sv, v) in self.finals() {
            let k = (((sv + x as i64) / 2) as usize).min(kmax);
            best[k] = best[k].min(v);
        }
        for k in (0..kmax).rev() {
            best[k] = best[k].min(best[k + 1]);
        }
        best
    }
}

/// Smallest d with (d+1)(d+2)/2 >= points.
fn ball_degree_for_points(points: usize) -> u64 {
    let mut d = 0u64;
    while (d + 1) * (d + 2) / 2 < points as u64 {
        d += 1;
    }
    d
}

/// Orientation in which the dynamic program runs: rising edges are avoided by
/// transposing when the domain has no down-left edges.
fn oriented(d: &MomentDomain) -> Result<(Scaled, bool)> {
    let s = scaled(d)?;
    let (up, down_left) = phases(&s);
    if up && !down_left {
        return Ok((scaled(&d.transpose())?, true));
    }
    Ok((s, false))
}

/// ECH capacities c_0..c_kmax of a convex toric domain: the minimum, over convex
/// lattice polygons with a corner at the origin along the axes and at least k+1
/// lattice points, of the total support-function length of their other edges.
pub fn convex_caps(d: &MomentDomain, kmax: usize) -> Result<CapacitySeq> {
    let (s, _) = oriented(d)?;
    let dp = PathDp::run(&s, kmax, false);
    let q = Rat::from_integer(s.q.clone());
    let values = dp
        .answers(kmax)
        .into_iter()
        .map(|v| Rat::from_integer(BigInt::from(v)) / &q)
        .collect();
    Ok(CapacitySeq::new("convex", values))
}

pub fn convex_cap(d: &MomentDomain, k: usize) -> Result<Rat> {
    Ok(convex_caps(d, k)?.values.pop().unwrap())
}

/// An optimal path for c_k, as its primitive edges in traversal order from the y-axis.
pub fn convex_cap_path(d: &MomentDomain, k: usize) -> Result<(Rat, Vec<LatticeVec>)> {
    let (s, transposed) = oriented(d)?;
    let dp = PathDp::run(&s, k, true);
    let (mut x, mut sv, mut v) = dp
        .finals()
        .into_iter()
        .filter(|&(x, sv, _)| sv + x as i64 >= 2 * k as i64)
        .min_by_key(|&(_, _, v)| v)
        .expect("incumbent path is always feasible");
    let value = Rat::from_integer(BigInt::from(v)) / Rat::from_integer(s.q.clone());
    let mut dd = 0usize;
    let mut j = s.dirs.len();
    let mut edges = Vec::new();
    while !(x == 0 && dd == 0 && sv == 0) {
        if dp.layers[j - 1][dp.idx(x, dd, sv)] == v {
            j -= 1;
            continue;
        }
        let e = s.dirs[j - 1];
        let hv = s.h[j - 1];
        let layer = &dp.layers[j];
        let px = (x as i64 - e.x) as usize;
        let mut found = None;
        'search: for pd in 0..=dp.dmax {
            for ps in dp.smin..=dp.cap {
                if layer[dp.idx(px, pd, ps)] == v - hv
                    && dp.step(e, px, pd, ps) == Some((x, dd, sv))
                {
                    found = Some((pd, ps));
                    break 'search;
                }
            }
        }
        let (pd, ps) = found.expect("predecessor exists");
        edges.push(e);
        x = px;
        dd = pd;
        sv = ps;
        v -= hv;
    }
    edges.reverse();
    if transposed {
        edges = edges
            .into_iter()
            .rev()
            .map(|e| LatticeVec::new(-e.y, -e.x))
            .collect();
    }
    Ok((value, edges))
}

/// Lattice points of the region enclosed by a path from the y-axis to the x-axis
/// together with the axes, and the path's length, computed directly from geometry.
pub fn path_score(d: &MomentDomain, edges: &[LatticeVec]) -> Result<(u64, Rat)> {
    let poly = d.polygon()?;
    let y0: i64 = edges.iter().map(|e| -e.y).sum();
    let mut p = (0i64, y0);
    let mut pts = vec![Pt::int(0, 0), Pt::int(p.0, p.1)];
    let mut len = Rat::zero();
    for e in edges {
        p = (p.0 + e.x, p.1 + e.y);
        pts.push(Pt::int(p.0, p.1));
        len += support_eval(&poly, *e)?;
    }
    Ok((lattice_count(&Polygon::hull(&pts)), len))
}

/// Exhaustive oracle for c_k over all convex paths inside [0, box]^2.
pub fn brute_convex_cap(d: &MomentDomain, k: usize, bx: usize) -> Result<Rat> {
    if d.kind() != Kind::Convex {
        return Err(Error::NotConvex);
    }
    let poly = d.polygon()?;
    let b = bx as i64;
    let mut dirs: Vec<LatticeVec> = Vec::new();
    for x in -b..=b {
        for y in -b..=b {
            let v = LatticeVec::new(x, y);
            let in_arc = x > 0 || (x == 0 && y < 0) || (x < 0 && y < 0);
            if in_arc && v.gcd() == 1 {
                dirs.push(v);
            }
        }
    }
    dirs.sort_by(arc_cmp);
    let h: Vec<Rat> = dirs
        .iter()
        .map(|&v| support_eval(&poly, v).unwrap())
        .collect();
    let search = Brute {
        dirs: &dirs,
        h: &h,
        k,
        b,
    };
    let best = par::map_range(bx + 1, |y0| {
        let mut best: Option<Rat> = None;
        let mut pts = vec![Pt::int(0, 0), Pt::int(0, y0 as i64)];
        search.dfs(0, (0, y0 as i64), Rat::zero(), &mut pts, &mut best);
        best
    })
    .into_iter()
    .flatten()
    .min()
    .ok_or(Error::BoxTooSmall(bx))?;
    // a path of length l has x-extent <= l / b and height <= l / a
    let bound = d.x_intercept().min(d.y_intercept()) * int(b + 1);
    if best >= bound {
        return Err(Error::BoxTooSmall(bx));
    }
    Ok(best)
}

struct Brute<'a> {
    dirs: &'a [LatticeVec],
    h: &'a [Rat],
    k: usize,
    b: i64,
}

impl Brute<'_> {
    fn dfs(&self, from: usize, p: (i64, i64), len: Rat, pts: &mut Vec<Pt>, best: &mut Option<Rat>) {
        if best.as_ref().is_some_and(|b| len >= *b) {
            return;
        }
        if p.1 == 0 && lattice_count(&Polygon::hull(pts)) as usize > self.k {
            *best = Some(len.clone());
            return;
        }
        for j in from..self.dirs.len() {
            let e = self.dirs[j];
            let q = (p.0 + e.x, p.1 + e.y);
            if q.0 < 0 || q.0 > self.b || q.1 < 0 || q.1 > self.b {
                continue;
            }
            pts.push(Pt::int(q.0, q.1));
            self.dfs(j, q, &len + &self.h[j], pts, best);
            pts.pop();
        }
    }
}

/// ECH capacities of any polygonal moment domain.
pub fn ech_caps(d: &MomentDomain, kmax: usize) -> Result<CapacitySeq> {
    match d.kind() {
        Kind::Convex => convex_caps(d, kmax),
        Kind::Concave => concave_caps(d, kmax),
    }
}
