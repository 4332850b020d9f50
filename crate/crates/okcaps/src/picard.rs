//! Picard-lattice arithmetic on blowups of the plane: intersection form, (-1)-classes,
//! nefness and Zariski decomposition.

use crate::error::{Error, Result};
use crate::exactgeom::{floor_i64, int, rat_str, Rat};
use num_traits::{Signed, ToPrimitive, Zero};
use std::fmt;

/// The class dH - sum m_i E_i.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass {
    pub d: Rat,
    pub m: Vec<Rat>,
}

impl DivisorClass {
    pub fn new(d: Rat, m: Vec<Rat>) -> Self {
        DivisorClass { d, m }
    }

    pub fn int(d: i64, m: &[i64]) -> Self {
        DivisorClass {
            d: int(d),
            m: m.iter().map(|&x| int(x)).collect(),
        }
    }

    pub fn zero(n: usize) -> Self {
        DivisorClass::int(0, &vec![0; n])
    }

    pub fn h(n: usize) -> Self {
        DivisorClass::int(1, &vec![0; n])
    }

    /// The exceptional class E_i, 1-based.
    pub fn e(n: usize, i: usize) -> Self {
        let mut m = vec![0; n];
        m[i - 1] = -1;
        DivisorClass::int(0, &m)
    }

    pub fn canonical(n: usize) -> Self {
        DivisorClass::int(-3, &vec![-1; n])
    }

    pub fn anticanonical(n: usize) -> Self {
        DivisorClass::int(3, &vec![1; n])
    }

    pub fn n(&self) -> usize {
        self.m.len()
    }

    /// Intersection product; panics on length mismatch (use `intersect` to check).
    pub fn dot(&self, o: &DivisorClass) -> Rat {
        assert_eq!(self.n(), o.n(), "divisor length mismatch");
        let mut s = &self.d * &o.d;
        for (a, b) in self.m.iter().zip(&o.m) {
            s -= a * b;
        }
        s
    }

    pub fn square(&self) -> Rat {
        self.dot(self)
    }

    pub fn index(&self) -> Rat {
        self.square() - self.dot(&DivisorClass::canonical(self.n()))
    }

    pub fn add(&self, o: &DivisorClass) -> DivisorClass {
        DivisorClass {
            d: &self.d + &o.d,
            m: self.m.iter().zip(&o.m).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &DivisorClass) -> DivisorClass {
        DivisorClass {
            d: &self.d - &o.d,
            m: self.m.iter().zip(&o.m).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &Rat) -> DivisorClass {
        DivisorClass {
            d: &self.d * s,
            m: self.m.iter().map(|a| a * s).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.d.is_zero() && self.m.iter().all(|x| x.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.d.is_integer() && self.m.iter().all(|x| x.is_integer())
    }

    /// Coefficients as machine integers, if integral and in range.
    pub fn to_i64(&self) -> Option<(i64, Vec<i64>)> {
        if !self.is_integral() {
            return None;
        }
        let d = self.d.to_integer().to_i64()?;
        let m = self
            .m
            .iter()
            .map(|x| x.to_integer().to_i64())
            .collect::<Option<Vec<_>>>()?;
        Some((d, m))
    }

    /// Compact form "d,m1,...,mn".
    pub fn compact(&self) -> String {
        let mut parts = vec![rat_str(&self.d)];
        parts.extend(self.m.iter().map(rat_str));
        parts.join(",")
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ms: Vec<String> = self.m.iter().map(rat_str).collect();
        write!(f, "({}; {})", rat_str(&self.d), ms.join(", "))
    }
}

pub fn intersect(a: &DivisorClass, b: &DivisorClass) -> Result<Rat> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch(a.n(), b.n()));
    }
    Ok(a.dot(b))
}

pub fn index(d: &DivisorClass) -> Rat {
    d.index()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    DelPezzoGeneric,
    UserSupplied,
}

/// A blowup of the plane at n points with its irreducible negative curves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceModel {
    n: usize,
    curves: Vec<DivisorClass>,
    provenance: Provenance,
}

impl SurfaceModel {
    /// Blowup of the plane at n general points; curves are the (-1)-classes.
    pub fn delpezzo(n: usize) -> Result<SurfaceModel> {
        Ok(SurfaceModel {
            n,
            curves: neg_one_classes(n)?,
            provenance: Provenance::DelPezzoGeneric,
        })
    }

    pub fn plane() -> SurfaceModel {
        SurfaceModel {
            n: 0,
            curves: Vec::new(),
            provenance: Provenance::DelPezzoGeneric,
        }
    }

    /// User-supplied negative curves; their list is trusted to be complete.
    pub fn custom(n: usize, curves: Vec<DivisorClass>) -> Result<SurfaceModel> {
        for c in &curves {
            if c.n() != n {
                return Err(Error::DimensionMismatch(n, c.n()));
            }
            if !c.is_integral() {
                return Err(Error::Invalid(format!("curve {c} is not integral")));
            }
            if !c.square().is_negative() {
                return Err(Error::Invalid(format!("curve {c} has nonnegative square")));
            }
        }
        Ok(SurfaceModel {
            n,
            curves,
            provenance: Provenance::UserSupplied,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn curves(&self) -> &[DivisorClass] {
        &self.curves
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn canonical(&self) -> DivisorClass {
        DivisorClass::canonical(self.n)
    }

    pub fn check(&self, d: &DivisorClass) -> Result<()> {
        if d.n() != self.n {
            return Err(Error::DimensionMismatch(self.n, d.n()));
        }
        Ok(())
    }
}

/// All classes C with C^2 = -1 and K.C = -1 on the blowup at n <= 8 general points:
/// E_1..E_n first, then by degree, then lexicographically decreasing multiplicities.
pub fn neg_one_classes(n: usize) -> Result<Vec<DivisorClass>> {
    if n >= 9 {
        return Err(Error::InfinitelyManyClasses(n));
    }
    let mut out: Vec<DivisorClass> = (1..=n).map(|i| DivisorClass::e(n, i)).collect();
    let mut d: i64 = 1;
    while (3 * d - 1) * (3 * d - 1) <= n as i64 * (d * d + 1) {
        let mut found = Vec::new();
        let mut cur = Vec::with_capacity(n);
        partitions(n, 3 * d - 1, d * d + 1, d, &mut cur, &mut found);
        let mut all: Vec<Vec<i64>> = Vec::new();
        for p in found {
            all.extend(distinct_permutations(p));
        }
        all.sort_by(|a, b| b.cmp(a));
        out.extend(all.into_iter().map(|m| DivisorClass::int(d, &m)));
        d += 1;
    }
    Ok(out)
}

/// Nonincreasing sequences of length n with given sum and sum of squares.
fn partitions(n: usize, sum: i64, sq: i64, max: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    let left = n - cur.len();
    if left == 0 {
        if sum == 0 && sq == 0 {
            out.push(cur.clone());
        }
        return;
    }
    if sum < 0 || sq < 0 || sum > max * left as i64 {
        return;
    }
    for v in (0..=max.min(sum)).rev() {
        if v * v > sq {
            continue;
        }
        cur.push(v);
        partitions(n, sum - v, sq - v * v, v, cur, out);
        cur.pop();
    }
}

fn distinct_permutations(mut p: Vec<i64>) -> Vec<Vec<i64>> {
    p.sort();
    let mut out = vec![p.clone()];
    while let Some(i) = (0..p.len().saturating_sub(1))
        .rev()
        .find(|&i| p[i] < p[i + 1])
    {
        let j = (i + 1..p.len()).rev().find(|&j| p[j] > p[i]).unwrap();
        p.swap(i, j);
        p[i + 1..].reverse();
        out.push(p.clone());
    }
    out
}

pub fn is_nef(d: &DivisorClass, model: &SurfaceModel) -> bool {
    if d.n() != model.n {
        return false;
    }
    !d.dot(&DivisorClass::h(model.n)).is_negative()
        && !d.square().is_negative()
        && model.curves.iter().all(|c| !d.dot(c).is_negative())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZariskiDecomp {
    pub pos: DivisorClass,
    pub neg: DivisorClass,
    /// (index into the model curve list, coefficient > 0)
    pub support: Vec<(usize, Rat)>,
}

/// Zariski decomposition by growing the negative support until the positive part is nef.
pub fn zariski(d: &DivisorClass, model: &SurfaceModel) -> Result<ZariskiDecomp> {
    model.check(d)?;
    let curves = &model.curves;
    let mut s: Vec<usize> = Vec::new();
    loop {
        let (p, x) = project(d, curves, &s)?;
        if x.iter().any(|c| c.is_negative()) {
            return Err(Error::NotPseudoEffective);
        }
        let grow: Vec<usize> = (0..curves.len())
            .filter(|i| !s.contains(i) && p.dot(&curves[*i]).is_negative())
            .collect();
        if grow.is_empty() {
            if p.dot(&DivisorClass::h(model.n)).is_negative() || p.square().is_negative() {
                return Err(Error::NotPseudoEffective);
            }
            let neg = d.sub(&p);
            let support: Vec<(usize, Rat)> = s
                .into_iter()
                .zip(x)
                .filter(|(_, c)| c.is_positive())
                .collect();
            return Ok(ZariskiDecomp {
                pos: p,
                neg,
                support,
            });
        }
        s.extend(grow);
        s.sort();
    }
}

/// Orthogonal projection of d away from span(curves[s]); requires a negative definite
/// Gram matrix. Returns the projection and the coefficients.
fn project(
    d: &DivisorClass,
    curves: &[DivisorClass],
    s: &[usize],
) -> Result<(DivisorClass, Vec<Rat>)> {
    let k = s.len();
    let g: Vec<Vec<Rat>> = s
        .iter()
        .map(|&i| s.iter().map(|&j| curves[i].dot(&curves[j])).collect())
        .collect();
    if !negative_definite(&g) {
        return Err(Error::NotPseudoEffective);
    }
    let b: Vec<Rat> = s.iter().map(|&i| d.dot(&curves[i])).collect();
    let x = solve(g, b).ok_or(Error::NotPseudoEffective)?;
    let mut p = d.clone();
    for t in 0..k {
        p = p.sub(&curves[s[t]].scale(&x[t]));
    }
    Ok((p, x))
}

/// Gram matrix negative definiteness via pivots of -G.
pub fn negative_definite(g: &[Vec<Rat>]) -> bool {
    let n = g.len();
    let mut a: Vec<Vec<Rat>> = g.iter().map(|r| r.iter().map(|v| -v).collect()).collect();
    for i in 0..n {
        if !a[i][i].is_positive() {
            return false;
        }
        let (top, bottom) = a.split_at_mut(i + 1);
        let pivot = &top[i];
        for row in bottom {
            let f = &row[i] / &pivot[i];
            for (x, y) in row[i..].iter_mut().zip(&pivot[i..]) {
                *x -= &f * y;
            }
        }
    }
    true
}

/// Gaussian elimination over the rationals.
pub fn solve(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = b.len();
    for i in 0..n {
        let piv = (i..n).find(|&r| !a[r][i].is_zero())?;
        a.swap(i, piv);
        b.swap(i, piv);
        let pivot = a[i].clone();
        let bi = b[i].clone();
        for (r, (row, br)) in a.iter_mut().zip(b.iter_mut()).enumerate() {
            if r != i && !row[i].is_zero() {
                let f = &row[i] / &pivot[i];
                for (x, y) in row[i..].iter_mut().zip(&pivot[i..]) {
                    *x -= &f * y;
                }
                *br -= &f * &bi;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

pub fn volume(d: &DivisorClass, model: &SurfaceModel) -> Result<Rat> {
    Ok(zariski(d, model)?.pos.square())
}

pub fn is_big(d: &DivisorClass, model: &SurfaceModel) -> bool {
    volume(d, model).map(|v| v.is_positive()).unwrap_or(false)
}

/// Integral nef class below a nef class: floor an effective representative, take the
/// positive part, and repeat until integral.
pub fn round_down_nef(p: &DivisorClass, model: &SurfaceModel) -> Result<DivisorClass> {
    model.check(p)?;
    let mut cur = p.clone();
    for _ in 0..64 {
        if cur.is_integral() && is_nef(&cur, model) {
            return Ok(cur);
        }
        let f = floor_effective(&cur, model);
        cur = zariski(&f, model)?.pos;
    }
    Err(Error::NoConvergence)
}

fn pseudo_effective(d: &DivisorClass, model: &SurfaceModel) -> bool {
    zariski(d, model).is_ok()
}

/// Integral class F with c - F effective. When c is a nonnegative combination of the
/// lines H - E_i and H its coefficients are floored; otherwise generators H, H - E_i and
/// the model curves are subtracted greedily while the remainder stays pseudo-effective.
fn floor_effective(c: &DivisorClass, model: &SurfaceModel) -> DivisorClass {
    let sum_m: Rat = c.m.iter().sum();
    if c.m.iter().all(|x| !x.is_negative()) && sum_m <= c.d {
        let fm: Vec<i64> = c.m.iter().map(floor_i64).collect();
        let d = fm.iter().sum::<i64>() + floor_i64(&(&c.d - &sum_m));
        return DivisorClass::int(d, &fm);
    }
    let n = model.n;
    let mut gens = vec![DivisorClass::h(n)];
    gens.extend((1..=n).map(|i| DivisorClass::h(n).sub(&DivisorClass::e(n, i))));
    gens.extend(model.curves.iter().cloned());
    let mut acc = DivisorClass::zero(n);
    let mut rest = c.clone();
    for g in &gens {
        loop {
            let next = rest.sub(g);
            if !pseudo_effective(&next, model) {
                break;
            }
            acc = acc.add(g);
            rest = next;
        }
    }
    acc
}

/// Exact integer intersection data for hot loops.
#[derive(Clone, Debug)]
pub struct IntCurve {
    pub d: i64,
    pub m: Vec<i64>,
}

impl IntCurve {
    pub fn from_class(c: &DivisorClass) -> Option<IntCurve> {
        let (d, m) = c.to_i64()?;
        Some(IntCurve { d, m })
    }
}
