//! Algebraic capacities of polarized blowups of the plane: the minimum of A.D over
//! integral nef classes D with index I(D) = D.(D - K) >= 2k.

use crate::error::{Error, Result};
use crate::exactgeom::{int, sqrt_interval, to_f64, Rat};
use crate::moment::{reconstruct, WeightTree};
use crate::par;
use crate::picard::{is_nef, zariski, DivisorClass, Provenance, SurfaceModel};
use crate::toric_ech::{convex_caps, CapacitySeq};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::sync::Mutex;

/// A blowup of the plane with a big class A.
#[derive(Debug)]
pub struct PolarizedSurface {
    model: SurfaceModel,
    a: DivisorClass,
    pos: DivisorClass,
    nef: bool,
    ample: bool,
    table: Mutex<Vec<(Rat, DivisorClass)>>,
}

impl Clone for PolarizedSurface {
    fn clone(&self) -> Self {
        PolarizedSurface {
            model: self.model.clone(),
            a: self.a.clone(),
            pos: self.pos.clone(),
            nef: self.nef,
            ample: self.ample,
            table: Mutex::new(self.table.lock().unwrap().clone()),
        }
    }
}

impl PolarizedSurface {
    pub fn new(model: SurfaceModel, a: DivisorClass) -> Result<PolarizedSurface> {
        model.check(&a)?;
        let z = zariski(&a, &model).map_err(|_| Error::NotBig)?;
        if !z.pos.square().is_positive() {
            return Err(Error::NotBig);
        }
        let nef = is_nef(&a, &model);
        let ample = nef
            && a.square().is_positive()
            && model.curves().iter().all(|c| a.dot(c).is_positive());
        Ok(PolarizedSurface {
            model,
            a,
            pos: z.pos,
            nef,
            ample,
            table: Mutex::new(Vec::new()),
        })
    }

    /// -K on the blowup of the plane at n general points.
    pub fn anticanonical(n: usize) -> Result<PolarizedSurface> {
        PolarizedSurface::new(SurfaceModel::delpezzo(n)?, DivisorClass::anticanonical(n))
    }

    /// The class cH - sum a_i E_i on the blowup at general points.
    pub fn tower(c: Rat, weights: Vec<Rat>) -> Result<PolarizedSurface> {
        let n = weights.len();
        let model = if n == 0 {
            SurfaceModel::plane()
        } else {
            SurfaceModel::delpezzo(n)?
        };
        PolarizedSurface::new(model, DivisorClass::new(c, weights))
    }

    pub fn model(&self) -> &SurfaceModel {
        &self.model
    }

    pub fn a(&self) -> &DivisorClass {
        &self.a
    }

    /// Positive part of the Zariski decomposition of A.
    pub fn positive_part(&self) -> &DivisorClass {
        &self.pos
    }

    pub fn is_pseudo_polarized(&self) -> bool {
        self.nef
    }

    pub fn is_polarized(&self) -> bool {
        self.ample
    }

    pub fn volume(&self) -> Rat {
        self.pos.square()
    }

    /// The same surface with A scaled by s > 0.
    pub fn scaled(&self, s: &Rat) -> Result<PolarizedSurface> {
        if !s.is_positive() {
            return Err(Error::NonPositive("scale".into()));
        }
        PolarizedSurface::new(self.model.clone(), self.a.scale(s))
    }
}

/// Capacities c_0..c_kmax with a minimizing class for each.
pub fn alg_minimizers(s: &PolarizedSurface, kmax: usize) -> Result<Vec<(Rat, DivisorClass)>> {
    {
        let t = s.table.lock().unwrap();
        if t.len() > kmax {
            return Ok(t[..=kmax].to_vec());
        }
    }
    let rows = Engine::new(s)?.sweep(kmax);
    let mut t = s.table.lock().unwrap();
    if rows.len() > t.len() {
        *t = rows.clone();
    }
    Ok(rows)
}

pub fn alg_caps(s: &PolarizedSurface, kmax: usize) -> Result<CapacitySeq> {
    let rows = alg_minimizers(s, kmax)?;
    Ok(CapacitySeq::new(
        format!("alg {}", s.a),
        rows.into_iter().map(|r| r.0).collect(),
    ))
}

pub fn alg_cap(s: &PolarizedSurface, k: usize) -> Result<Rat> {
    Ok(alg_cap_with_divisor(s, k)?.0)
}

pub fn alg_cap_with_divisor(s: &PolarizedSurface, k: usize) -> Result<(Rat, DivisorClass)> {
    Ok(alg_minimizers(s, k)?.swap_remove(k))
}

fn to_i128(b: &BigInt) -> i128 {
    b.to_i128().expect("class too large")
}

/// A curve's degree and its nonzero multiplicities by sorted coordinate; checked once
/// the last of those coordinates is fixed.
type CurveCheck = (i128, Vec<(usize, i128)>);

/// Integer search data in a coordinate order sorted by descending weight.
struct Engine {
    n: usize,
    q: i128,
    c: i128,
    alpha: Vec<i128>,
    perm: Vec<usize>,
    tied: Vec<bool>,
    rest_q: Vec<i128>,
    rest_s: Vec<i128>,
    checks: Vec<Vec<CurveCheck>>,
    pp: Rat,
    ph: Rat,
}

/// Best (index, d, multiplicities in original order) found for one degree.
type Hit = (i128, i64, Vec<i64>);

impl Engine {
    fn new(s: &PolarizedSurface) -> Result<Engine> {
        let a = &s.a;
        let n = a.n();
        let q =
            a.m.iter()
                .fold(a.d.denom().clone(), |acc, x| acc.lcm(x.denom()));
        let qr = Rat::from_integer(q.clone());
        let c = to_i128(&(&a.d * &qr).to_integer());
        let raw: Vec<i128> =
            a.m.iter()
                .map(|x| to_i128(&(x * &qr).to_integer()))
                .collect();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.sort_by(|&i, &j| raw[j].cmp(&raw[i]).then(i.cmp(&j)));
        let alpha: Vec<i128> = perm.iter().map(|&i| raw[i]).collect();
        let sym = s.model.provenance() == Provenance::DelPezzoGeneric;
        let tied = (0..n)
            .map(|t| sym && t > 0 && alpha[t] == alpha[t - 1])
            .collect();
        let mut rest_q = vec![0i128; n + 1];
        let mut rest_s = vec![0i128; n + 1];
        for t in (0..n).rev() {
            rest_q[t] = rest_q[t + 1] + alpha[t] * alpha[t];
            rest_s[t] = rest_s[t + 1] + alpha[t];
        }
        let mut checks = vec![Vec::new(); n];
        for cv in s.model.curves() {
            let (cd, cm) = cv.to_i64().expect("curves are integral");
            let terms: Vec<(usize, i128)> = (0..n)
                .filter(|&t| cm[perm[t]] != 0)
                .map(|t| (t, cm[perm[t]] as i128))
                .collect();
            // D.E_i = m_i >= 0 holds by the search range
            if cd == 0 && terms.len() == 1 && terms[0].1 == -1 {
                continue;
            }
            if let Some(&(last, _)) = terms.last() {
                checks[last].push((cd as i128, terms));
            }
        }
        let h = DivisorClass::h(n);
        Ok(Engine {
            n,
            q: to_i128(&q),
            c,
            alpha,
            perm,
            tied,
            rest_q,
            rest_s,
            checks,
            pp: s.pos.square(),
            ph: s.pos.dot(&h),
        })
    }

    /// Largest degree d of a nef class with P.D <= x, from the Hodge index inequality
    /// P^2 d^2 - 2 (P.H) x d + x^2 <= 0.
    fn degree_bound(&self, x: &Rat) -> i64 {
        let f = |d: i64| {
            let dr = int(d);
            &self.pp * &dr * &dr - int(2) * &self.ph * x * &dr + x * x
        };
        let est = (to_f64(&self.ph)
            + (to_f64(&self.ph).powi(2) - to_f64(&self.pp))
                .max(0.0)
                .sqrt())
            / to_f64(&self.pp)
            * to_f64(x);
        let mut d = est.floor() as i64 + 1;
        while f(d) <= Rat::zero() {
            d += 1;
        }
        while d >= 0 && f(d) > Rat::zero() {
            d -= 1;
        }
        d
    }

    fn sweep(&self, kmax: usize) -> Vec<(Rat, DivisorClass)> {
        let mut rows: Vec<(Rat, DivisorClass)> = Vec::with_capacity(kmax + 1);
        let mut best: i128 = -1;
        let mut w: i128 = 0;
        while rows.len() <= kmax {
            if let Some((i, d, m)) = self.slice(w, best) {
                let class = DivisorClass::int(d, &m);
                let value = Rat::new(BigInt::from(w), BigInt::from(self.q));
                while rows.len() <= kmax && 2 * rows.len() as i128 <= i {
                    rows.push((value.clone(), class.clone()));
                }
                best = i;
            }
            w += 1;
        }
        rows
    }

    /// Best class with qA.D = w and index above `best`.
    fn slice(&self, w: i128, best: i128) -> Option<Hit> {
        let mut d_lo: i64 = 0;
        while (d_lo as i128) * (d_lo as i128 + 3) <= best {
            d_lo += 1;
        }
        let x = Rat::new(BigInt::from(w), BigInt::from(self.q));
        let d_hi = self.degree_bound(&x);
        if d_hi < d_lo {
            return None;
        }
        let hits = par::map_range((d_hi - d_lo + 1) as usize, |i| {
            self.degree(d_lo + i as i64, w, best)
        });
        let mut out: Option<Hit> = None;
        for h in hits.into_iter().flatten() {
            if out.as_ref().is_none_or(|o| h.0 > o.0) {
                out = Some(h);
            }
        }
        out
    }

    fn degree(&self, d: i64, w: i128, best: i128) -> Option<Hit> {
        let d128 = d as i128;
        let mut st = Dfs {
            e: self,
            d: d128,
            full: d128 * d128 + 3 * d128,
            target: best + 1,
            m: vec![0; self.n],
            hit: None,
        };
        st.go(0, self.c * d128 - w, 0, 0);
        st.hit.map(|(i, m)| (i, d, m))
    }
}

struct Dfs<'a> {
    e: &'a Engine,
    d: i128,
    full: i128,
    target: i128,
    m: Vec<i128>,
    hit: Option<(i128, Vec<i64>)>,
}

impl Dfs<'_> {
    fn budget(&self) -> i128 {
        self.full - self.target
    }

    /// Coordinates t.. remain; their weighted sum must equal `rem`.
    fn go(&mut self, t: usize, rem: i128, cost: i128, sq: i128) {
        let e = self.e;
        if t == e.n {
            if rem == 0 {
                self.record(self.full - cost);
            }
            return;
        }
        let ub = if e.tied[t] { self.m[t - 1] } else { self.d };
        let (lo, hi) = match self.range(t, rem, cost, ub) {
            Some(r) => r,
            None => return,
        };
        for v in (lo..=hi).rev() {
            let c2 = cost + v * v + v;
            let s2 = sq + v * v;
            if c2 > self.budget()
                || s2 > self.d * self.d
                || !self.feasible(t, rem - e.alpha[t] * v, c2)
            {
                continue;
            }
            self.m[t] = v;
            if self.nef_at(t) {
                self.go(t + 1, rem - e.alpha[t] * v, c2, s2);
            }
        }
        self.m[t] = 0;
    }

    /// Whether the remaining coordinates can still meet the target, by the continuous
    /// relaxation min sum (m^2 + m) subject to sum alpha m = rem.
    fn feasible(&self, t: usize, rem: i128, cost: i128) -> bool {
        let e = self.e;
        let (q, s, r) = (e.rest_q[t + 1], e.rest_s[t + 1], (e.n - t - 1) as i128);
        if q == 0 {
            return rem == 0 && cost <= self.budget();
        }
        let u = 2 * rem + s;
        4 * q * cost + u * u - r * q <= 4 * q * self.budget()
    }

    /// Candidate values for coordinate t: roots of the relaxation bound, widened by one
    /// and clipped to [0, ub]; every value is rechecked exactly.
    fn range(&self, t: usize, rem: i128, cost: i128, ub: i128) -> Option<(i128, i128)> {
        let e = self.e;
        let al = e.alpha[t];
        if t + 1 == e.n || e.rest_q[t + 1] == 0 {
            if al != 0 {
                if rem % al != 0 {
                    return None;
                }
                let v = rem / al;
                return (0..=ub).contains(&v).then_some((v, v));
            }
            if rem != 0 {
                return None;
            }
        }
        let q = e.rest_q[t + 1] as f64;
        let s = e.rest_s[t + 1] as f64;
        let r = (e.n - t - 1) as f64;
        let (rem, al, cost, b) = (rem as f64, al as f64, cost as f64, self.budget() as f64);
        let (qa, qb, qc) = if q == 0.0 {
            (1.0, 1.0, cost - b)
        } else {
            let u = 2.0 * rem + s;
            (
                4.0 * q + 4.0 * al * al,
                4.0 * q - 4.0 * al * u,
                4.0 * q * cost + u * u - r * q - 4.0 * q * b,
            )
        };
        let disc = qb * qb - 4.0 * qa * qc;
        let mid = -qb / (2.0 * qa);
        let half = if disc > 0.0 {
            disc.sqrt() / (2.0 * qa)
        } else {
            0.0
        };
        let lo = ((mid - half).floor() as i128 - 1).max(0);
        let hi = ((mid + half).ceil() as i128 + 1).min(ub);
        (lo <= hi).then_some((lo, hi))
    }

    fn nef_at(&self, t: usize) -> bool {
        self.e.checks[t].iter().all(|(cd, terms)| {
            let mut v = self.d * cd;
            for &(j, c) in terms {
                v -= c * self.m[j];
            }
            v >= 0
        })
    }

    fn record(&mut self, index: i128) {
        let e = self.e;
        let mut m = vec![0i64; e.n];
        let mut t = 0;
        while t < e.n {
            // symmetric runs are written back in increasing original index order
            let mut u = t + 1;
            while u < e.n && e.tied[u] {
                u += 1;
            }
            let mut idx: Vec<usize> = e.perm[t..u].to_vec();
            idx.sort();
            for (k, &i) in idx.iter().enumerate() {
                m[i] = self.m[t + k] as i64;
            }
            t = u;
        }
        let better = match &self.hit {
            None => true,
            Some((i, old)) => index > *i || (index == *i && m > *old),
        };
        if better {
            self.hit = Some((index, m));
            self.target = index;
        }
    }
}

/// Which computation produced capacities for a weight sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Toric,
    DelPezzo,
}

/// Capacities of the surface carrying the weight sequence w: lattice paths on the
/// reconstructed domain when w is polytopal, otherwise the blowup of the plane at
/// general points with A = cH - sum a_i E_i when that class is big and nef.
pub fn alg_caps_wt(w: &WeightTree, kmax: usize) -> Result<(CapacitySeq, Route)> {
    let head = w.head.clone().ok_or(Error::NotComputable)?;
    if let Ok(d) = reconstruct(w) {
        return Ok((convex_caps(&d, kmax)?, Route::Toric));
    }
    let s = delpezzo_route(&head, &w.weights())?;
    Ok((alg_caps(&s, kmax)?, Route::DelPezzo))
}

/// Same for a flat sequence (c; a_1, ..., a_n). Capacities of a convex toric domain
/// depend only on its weight multiset, so any polytopal placement of the weights serves.
pub fn alg_caps_seq(c: &Rat, weights: &[Rat], kmax: usize) -> Result<(CapacitySeq, Route)> {
    if let Ok(d) = WeightTree::from_flat(c.clone(), weights).and_then(|t| reconstruct(&t)) {
        return Ok((convex_caps(&d, kmax)?, Route::Toric));
    }
    let s = delpezzo_route(c, weights)?;
    Ok((alg_caps(&s, kmax)?, Route::DelPezzo))
}

pub fn alg_cap_wt(w: &WeightTree, k: usize) -> Result<Rat> {
    Ok(alg_caps_wt(w, k)?.0.values[k].clone())
}

/// The blowup at general points carrying (c; a), when A is big and nef there.
pub fn delpezzo_route(c: &Rat, weights: &[Rat]) -> Result<PolarizedSurface> {
    if weights.len() > 8 {
        return Err(Error::NotComputable);
    }
    let s =
        PolarizedSurface::tower(c.clone(), weights.to_vec()).map_err(|_| Error::NotComputable)?;
    if !s.is_pseudo_polarized() {
        return Err(Error::NotComputable);
    }
    Ok(s)
}

/// Bits of the square-root enclosures in error terms.
const SQRT_BITS: u32 = 48;

/// Enclosure of c_k - sqrt(2 vol(A) k).
pub fn weyl_error(s: &PolarizedSurface, k: usize) -> Result<(Rat, Rat)> {
    let c = alg_cap(s, k)?;
    Ok(error_interval(&c, &s.volume(), k))
}

fn error_interval(c: &Rat, vol: &Rat, k: usize) -> (Rat, Rat) {
    let (lo, hi) = sqrt_interval(&(vol * int(2 * k as i64)), SQRT_BITS);
    (c - hi, c - lo)
}

/// Error terms e_k over a window with the asymptotic anchors. The liminf anchor is
/// half of K.P for the positive part P of A, which equals K.A/2 when A is nef.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymSummary {
    pub k_lo: usize,
    pub k_hi: usize,
    pub min_e: f64,
    pub argmin: usize,
    pub max_e: f64,
    pub argmax: usize,
    pub vol: Rat,
    pub half_ka: Rat,
    pub anchor: Rat,
}

pub fn asym_summary(s: &PolarizedSurface, k_lo: usize, k_hi: usize) -> Result<AsymSummary> {
    if k_lo >= k_hi {
        return Err(Error::Invalid(format!("empty window [{k_lo}, {k_hi}]")));
    }
    let caps = alg_caps(s, k_hi)?;
    let vol = s.volume();
    let es: Vec<f64> = par::map_range(k_hi - k_lo + 1, |i| {
        let (lo, hi) = error_interval(&caps.values[k_lo + i], &vol, k_lo + i);
        to_f64(&((lo + hi) / int(2)))
    });
    let (mut argmin, mut argmax) = (0, 0);
    for (i, e) in es.iter().enumerate() {
        if *e < es[argmin] {
            argmin = i;
        }
        if *e > es[argmax] {
            argmax = i;
        }
    }
    let k = s.model.canonical();
    let half = Rat::new(BigInt::one(), BigInt::from(2));
    Ok(AsymSummary {
        k_lo,
        k_hi,
        min_e: es[argmin],
        argmin: k_lo + argmin,
        max_e: es[argmax],
        argmax: k_lo + argmax,
        vol,
        half_ka: k.dot(&s.a) * &half,
        anchor: k.dot(&s.pos) * &half,
    })
}
