//! Newton-Okounkov bodies of polarized blowups of the plane for flags on negative
//! curves, by tracking Zariski chambers along A_t = A - t E, and the admissibility
//! predicates for weight sequences.

use crate::algcap::PolarizedSurface;
use crate::error::{Error, Result};
use crate::exactgeom::{int, rat_sqrt_exact, rat_str, sqrt_interval, Polygon, Pt, Rat};
use crate::moment::{wt_convex, MomentDomain, WeightTree};
use crate::picard::{negative_definite, solve, zariski, DivisorClass, SurfaceModel};
use num_traits::{Signed, Zero};

/// Bits of the enclosure of an irrational endpoint.
const ENDPOINT_BITS: u32 = 40;

/// Right end of the body: exact, or a quadratic irrational with a rational enclosure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mu {
    Exact(Rat),
    Approx { lo: Rat, hi: Rat },
}

/// A stretch of t on which the negative part has a fixed support and
/// beta(t) = beta0 + slope (t - start).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub start: Rat,
    pub end: Mu,
    pub support: Vec<usize>,
    pub beta0: Rat,
    pub slope: Rat,
}

/// Change of the negative support at t.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub t: Rat,
    pub entering: Vec<usize>,
    pub leaving: Vec<usize>,
}

/// The body {(t, h) : 0 <= t <= mu, 0 <= h <= beta(t)}; the lower boundary vanishes
/// for a general point of the flag curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NOBody {
    pub flag: usize,
    pub mu: Mu,
    pub segments: Vec<Segment>,
    pub trace: Vec<Wall>,
}

impl NOBody {
    pub fn is_exact(&self) -> bool {
        matches!(self.mu, Mu::Exact(_))
    }

    fn exact_mu(&self) -> Result<&Rat> {
        match &self.mu {
            Mu::Exact(m) => Ok(m),
            Mu::Approx { lo, hi } => Err(Error::IrrationalEndpoint {
                lo: rat_str(lo),
                hi: rat_str(hi),
            }),
        }
    }

    /// Points (t, beta(t)) at 0, at every change of slope, and at mu.
    pub fn beta_breaks(&self) -> Result<Vec<(Rat, Rat)>> {
        let mu = self.exact_mu()?;
        let mut out: Vec<(Rat, Rat)> = Vec::new();
        let mut slope: Option<&Rat> = None;
        for s in &self.segments {
            if slope != Some(&s.slope) {
                out.push((s.start.clone(), s.beta0.clone()));
            }
            slope = Some(&s.slope);
        }
        let last = self.segments.last().expect("at least one segment");
        out.push((mu.clone(), &last.beta0 + &last.slope * (mu - &last.start)));
        Ok(out)
    }

    /// beta at t, for 0 <= t on the exact part of the body.
    pub fn beta(&self, t: &Rat) -> Option<Rat> {
        let s = self.segments.iter().rev().find(|s| s.start <= *t)?;
        Some(&s.beta0 + &s.slope * (t - &s.start))
    }

    /// Vertices of the body.
    pub fn polygon(&self) -> Result<Polygon> {
        let mut pts = vec![Pt::new(int(0), int(0))];
        for (t, b) in self.beta_breaks()? {
            pts.push(Pt::new(t.clone(), int(0)));
            pts.push(Pt::new(t, b));
        }
        Ok(Polygon::hull(&pts))
    }

    pub fn domain(&self) -> Result<MomentDomain> {
        MomentDomain::from_polygon(&self.polygon()?)
    }

    pub fn area(&self) -> Result<Rat> {
        Ok(self.polygon()?.area())
    }
}

/// Zariski data on a fixed support S along A_s = A - s E: P_s = pa - s pe and the
/// negative-part coefficients xa - s xe.
struct Chamber {
    support: Vec<usize>,
    pa: DivisorClass,
    pe: DivisorClass,
    xa: Vec<Rat>,
    xe: Vec<Rat>,
}

impl Chamber {
    fn new(
        a: &DivisorClass,
        e: &DivisorClass,
        curves: &[DivisorClass],
        support: Vec<usize>,
    ) -> Option<Chamber> {
        let g: Vec<Vec<Rat>> = support
            .iter()
            .map(|&i| support.iter().map(|&j| curves[i].dot(&curves[j])).collect())
            .collect();
        if !negative_definite(&g) {
            return None;
        }
        let coeffs = |d: &DivisorClass| -> Option<(DivisorClass, Vec<Rat>)> {
            let b: Vec<Rat> = support.iter().map(|&i| d.dot(&curves[i])).collect();
            let x = solve(g.clone(), b)?;
            let mut p = d.clone();
            for (k, &i) in support.iter().enumerate() {
                p = p.sub(&curves[i].scale(&x[k]));
            }
            Some((p, x))
        };
        let (pa, xa) = coeffs(a)?;
        let (pe, xe) = coeffs(e)?;
        Some(Chamber {
            support,
            pa,
            pe,
            xa,
            xe,
        })
    }

    fn p(&self, s: &Rat) -> DivisorClass {
        self.pa.sub(&self.pe.scale(s))
    }

    /// Valid Zariski decomposition at s: nonnegative coefficients and P nef.
    fn valid_at(&self, s: &Rat, curves: &[DivisorClass]) -> bool {
        let p = self.p(s);
        self.xa
            .iter()
            .zip(&self.xe)
            .all(|(a, e)| !(a - e * s).is_negative())
            && curves.iter().all(|c| !p.dot(c).is_negative())
            && !p.dot(&DivisorClass::h(p.n())).is_negative()
            && !p.square().is_negative()
    }

    /// First s > t at which a linear validity constraint reaches zero while decreasing.
    fn linear_end(&self, t: &Rat, curves: &[DivisorClass]) -> Option<Rat> {
        let mut best: Option<Rat> = None;
        let mut consider = |a: Rat, slope: Rat| {
            // a - slope * s decreasing through zero
            if slope.is_positive() {
                let r = a / slope;
                if r > *t && best.as_ref().is_none_or(|b| r < *b) {
                    best = Some(r);
                }
            }
        };
        for (a, e) in self.xa.iter().zip(&self.xe) {
            consider(a.clone(), e.clone());
        }
        for (i, c) in curves.iter().enumerate() {
            if !self.support.contains(&i) {
                consider(self.pa.dot(c), self.pe.dot(c));
            }
        }
        let h = DivisorClass::h(self.pa.n());
        consider(self.pa.dot(&h), self.pe.dot(&h));
        best
    }
}

fn find_chamber(
    a: &DivisorClass,
    e: &DivisorClass,
    t: &Rat,
    curves: &[DivisorClass],
    model: &SurfaceModel,
) -> Result<Chamber> {
    let mut h = int(1);
    for _ in 0..80 {
        let probe = t + &h;
        if let Ok(z) = zariski(&a.sub(&e.scale(&probe)), model) {
            if z.pos.square().is_positive() {
                let support: Vec<usize> = z.support.iter().map(|(i, _)| *i).collect();
                if let Some(ch) = Chamber::new(a, e, curves, support) {
                    if ch.valid_at(t, curves) && ch.valid_at(&probe, curves) {
                        return Ok(ch);
                    }
                }
            }
        }
        h /= int(2);
    }
    Err(Error::NoConvergence)
}

/// Smallest u > 0 with q(u) = a u^2 - 2 b u + c = 0, exact when rational.
fn first_root(a: &Rat, b: &Rat, c: &Rat) -> Option<Mu> {
    if a.is_zero() {
        return b.is_positive().then(|| Mu::Exact(c / (int(2) * b)));
    }
    let disc = b * b - a * c;
    if disc.is_negative() {
        return None;
    }
    // roots (b -+ sqrt(disc)) / a; pick the smallest positive one
    let sign = if a.is_positive() { -1 } else { 1 };
    let candidates = [sign, -sign];
    for sg in candidates {
        let exact = rat_sqrt_exact(&disc);
        match exact {
            Some(r) => {
                let u = (b + &r * int(sg)) / a;
                if u.is_positive() {
                    return Some(Mu::Exact(u));
                }
            }
            None => {
                let (lo, hi) = sqrt_interval(&disc, ENDPOINT_BITS);
                let (u1, u2) = ((b + &lo * int(sg)) / a, (b + &hi * int(sg)) / a);
                let (ulo, uhi) = if u1 <= u2 { (u1, u2) } else { (u2, u1) };
                if ulo.is_positive() {
                    return Some(Mu::Approx { lo: ulo, hi: uhi });
                }
            }
        }
    }
    None
}

/// The Newton-Okounkov body of (Y, A) for the flag given by a model curve.
pub fn no_body(s: &PolarizedSurface, flag: usize) -> Result<NOBody> {
    let model = s.model();
    let curves = model.curves();
    let e = curves
        .get(flag)
        .ok_or_else(|| Error::Invalid(format!("no curve with index {flag}")))?
        .clone();
    if !s.is_pseudo_polarized() {
        return Err(Error::NotPseudoPolarized(format!("{} is not nef", s.a())));
    }
    let a = s.a().clone();
    let b0 = a.dot(&e);
    if !b0.is_positive() {
        return Err(Error::NotAGeneric(rat_str(&b0)));
    }
    let mut t = Rat::zero();
    let mut segments: Vec<Segment> = Vec::new();
    let mut trace = Vec::new();
    for _ in 0..4 * curves.len() + 8 {
        let ch = find_chamber(&a, &e, &t, curves, model)?;
        if let Some(prev) = segments.last() {
            let entering: Vec<usize> = ch
                .support
                .iter()
                .copied()
                .filter(|i| !prev.support.contains(i))
                .collect();
            let leaving: Vec<usize> = prev
                .support
                .iter()
                .copied()
                .filter(|i| !ch.support.contains(i))
                .collect();
            if !entering.is_empty() || !leaving.is_empty() {
                trace.push(Wall {
                    t: t.clone(),
                    entering,
                    leaving,
                });
            }
        }
        let pt = ch.p(&t);
        let beta0 = pt.dot(&e);
        let slope = -ch.pe.dot(&e);
        let lin = ch.linear_end(&t, curves);
        // P_{t+u}^2 = pe^2 u^2 - 2 (pt.pe) u + pt^2
        let (qa, qb, qc) = (ch.pe.square(), pt.dot(&ch.pe), pt.square());
        let end = match &lin {
            Some(l) => {
                let u = l - &t;
                let q = &qa * &u * &u - int(2) * &qb * &u + &qc;
                if q.is_zero() {
                    Mu::Exact(l.clone())
                } else if q.is_positive() {
                    segments.push(Segment {
                        start: t.clone(),
                        end: Mu::Exact(l.clone()),
                        support: ch.support,
                        beta0,
                        slope,
                    });
                    t = l.clone();
                    continue;
                } else {
                    return Err(Error::Invalid(
                        "positive part left the positive cone".into(),
                    ));
                }
            }
            None => match first_root(&qa, &qb, &qc).ok_or(Error::NoConvergence)? {
                Mu::Exact(u) => Mu::Exact(&t + u),
                Mu::Approx { lo, hi } => Mu::Approx {
                    lo: &t + lo,
                    hi: &t + hi,
                },
            },
        };
        segments.push(Segment {
            start: t.clone(),
            end: end.clone(),
            support: ch.support,
            beta0,
            slope,
        });
        let body = NOBody {
            flag,
            mu: end,
            segments,
            trace,
        };
        if body.is_exact() {
            let area = body.area()?;
            assert_eq!(area, a.square() / int(2), "body area differs from A^2/2");
        }
        return Ok(body);
    }
    Err(Error::NoConvergence)
}

/// Weight sequence of an exact body.
pub fn no_wt(b: &NOBody) -> Result<WeightTree> {
    wt_convex(&b.domain()?)
}

/// Whether w carries the head and weight multiset of the class A = cH - sum a_i E_i.
pub fn admits(s: &PolarizedSurface, w: &WeightTree) -> bool {
    let mut tower: Vec<Rat> = s.a().m.iter().filter(|x| !x.is_zero()).cloned().collect();
    tower.sort_by(|x, y| y.cmp(x));
    w.head.as_ref() == Some(&s.a().d) && w.weights() == tower
}

/// Outcome of the rank-dependent criteria for a weight sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Criteria {
    pub holds: bool,
    pub case: u8,
}

fn head_and_weights(w: &WeightTree) -> Result<(Rat, Vec<Rat>)> {
    let c = w
        .head
        .clone()
        .ok_or_else(|| Error::Invalid("weight tree has no head".into()))?;
    Ok((c, w.weights()))
}

fn top_sum(ws: &[Rat], k: usize) -> Rat {
    ws.iter().take(k).sum()
}

/// Rank-dependent conditions under which the body of a tower has the tower's weights:
/// r <= 5 always; r <= 7 needs c at least the four largest weights; r = 8 the six
/// largest; r = 9 additionally 3c at least twice the seven largest.
pub fn dp_criteria(w: &WeightTree, r: usize) -> Result<Criteria> {
    if r > 9 || r == 0 {
        return Err(Error::RankOutOfRange(r));
    }
    let (c, ws) = head_and_weights(w)?;
    if ws.len() + 1 > r {
        return Err(Error::Invalid(format!(
            "{} weights exceed rank {r}",
            ws.len()
        )));
    }
    let six = c >= top_sum(&ws, 6);
    Ok(match r {
        1..=5 => Criteria {
            holds: true,
            case: 1,
        },
        6 | 7 => Criteria {
            holds: c >= top_sum(&ws, 4),
            case: 2,
        },
        8 => Criteria {
            holds: six,
            case: 3,
        },
        _ => Criteria {
            holds: six && &c * int(3) >= top_sum(&ws, 7) * int(2),
            case: 4,
        },
    })
}

/// c >= (n - 2)/2 times the sum of the n + 1 weights.
pub fn high_rank_condition(w: &WeightTree, n: usize) -> Result<bool> {
    let (c, ws) = head_and_weights(w)?;
    if ws.len() != n + 1 {
        return Err(Error::DimensionMismatch(n + 1, ws.len()));
    }
    let sum: Rat = ws.iter().sum();
    Ok(c * int(2) >= sum * Rat::from_integer((n as i64 - 2).into()))
}

/// Midpoint of a segment, for spot checks of the chamber structure.
pub fn segment_midpoint(s: &Segment) -> Rat {
    let end = match &s.end {
        Mu::Exact(e) => e.clone(),
        Mu::Approx { lo, .. } => lo.clone(),
    };
    (&s.start + end) / int(2)
}

/// The class A_t = A - t E.
pub fn a_t(s: &PolarizedSurface, flag: usize, t: &Rat) -> DivisorClass {
    s.a().sub(&s.model().curves()[flag].scale(t))
}

impl Mu {
    pub fn lo(&self) -> &Rat {
        match self {
            Mu::Exact(m) => m,
            Mu::Approx { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> &Rat {
        match self {
            Mu::Exact(m) => m,
            Mu::Approx { hi, .. } => hi,
        }
    }
}
