//! Embedding verdicts for concave domains, lower bounds for the ellipsoid embedding
//! function, and the accumulation-point test for infinite staircases.

use crate::algcap::{alg_caps, alg_caps_wt, PolarizedSurface};
use crate::error::{Error, Result};
use crate::exactgeom::{int, rat_sqrt_exact, sqrt_interval, Rat};
use crate::moment::{MomentDomain, WeightTree};
use crate::okounkov::{admits, dp_criteria, no_body, no_wt, Mu};
use crate::par;
use crate::toric_ech::{concave_caps, ellipsoid_caps, CapacitySeq};
use num_traits::{Signed, Zero};

/// Default number of capacities compared by a verdict.
pub const DEFAULT_KMAX: usize = 100;

/// Bits of the enclosures of irrational square roots.
const ROOT_BITS: u32 = 48;

/// An embedding target: a polarized surface, or a weight sequence.
#[derive(Clone, Debug)]
pub enum Target {
    Surface(PolarizedSurface),
    Weights(WeightTree),
}

impl Target {
    /// Capacities c_0..c_kmax of the target.
    pub fn caps(&self, kmax: usize) -> Result<CapacitySeq> {
        match self {
            Target::Surface(s) => alg_caps(s, kmax),
            Target::Weights(w) => Ok(alg_caps_wt(w, kmax)?.0),
        }
    }

    /// A^2, twice the symplectic volume.
    pub fn a_squared(&self) -> Result<Rat> {
        match self {
            Target::Surface(s) => Ok(s.volume()),
            Target::Weights(w) => {
                let c = w
                    .head
                    .clone()
                    .ok_or_else(|| Error::Invalid("weight tree has no head".into()))?;
                let v = &c * &c - w.weights().iter().map(|a| a * a).sum::<Rat>();
                if !v.is_positive() {
                    return Err(Error::NonPositive("volume of weight sequence".into()));
                }
                Ok(v)
            }
        }
    }

    /// Whether the target carries the hypothesis under which capacities are sharp for
    /// concave sources: toric, or a body whose weight sequence the surface admits.
    pub fn is_sharp(&self) -> bool {
        match self {
            Target::Weights(_) => true,
            Target::Surface(s) => s.model().n() == 0 || admitted_flag(s).is_some(),
        }
    }
}

/// Index of an exceptional flag whose body has the weight sequence of the tower.
pub fn admitted_flag(s: &PolarizedSurface) -> Option<usize> {
    if !s.is_pseudo_polarized() {
        return None;
    }
    (0..s.model().n().min(s.model().curves().len())).find(|&f| {
        no_body(s, f)
            .and_then(|b| no_wt(&b))
            .map(|w| admits(s, &w))
            .unwrap_or(false)
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EmbedStatus {
    /// c_k(source) > c_k(target).
    Obstructed { k: usize, src: Rat, tgt: Rat },
    /// The source has more volume than the target.
    VolumeObstructed { src: Rat, tgt: Rat },
    /// All capacities up to kmax and the volume agree with an embedding.
    NoObstructionUpTo(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: EmbedStatus,
    /// When set, NoObstructionUpTo is sharp up to truncation at kmax: if it held for
    /// all k, every interior rescaling of the source would embed.
    pub sharp: bool,
}

/// Compare the capacities of a concave source with those of a target.
pub fn embed_verdict(src: &MomentDomain, tgt: &Target, kmax: usize) -> Result<Verdict> {
    let sc = concave_caps(src, kmax)?;
    let tc = tgt.caps(kmax)?;
    let sharp = tgt.is_sharp();
    for k in 0..=kmax {
        if sc.values[k] > tc.values[k] {
            let status = EmbedStatus::Obstructed {
                k,
                src: sc.values[k].clone(),
                tgt: tc.values[k].clone(),
            };
            return Ok(Verdict { status, sharp });
        }
    }
    let (sa, ta) = (src.area(), tgt.a_squared()? / int(2));
    let status = if sa > ta {
        EmbedStatus::VolumeObstructed { src: sa, tgt: ta }
    } else {
        EmbedStatus::NoObstructionUpTo(kmax)
    };
    Ok(Verdict { status, sharp })
}

/// Lower bound for the ellipsoid embedding function at z, as an enclosure [lo, hi].
/// `argmax_k` is the capacity index attaining it, or 0 when the volume bound wins.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EefBound {
    pub z: Rat,
    pub lo: Rat,
    pub hi: Rat,
    pub argmax_k: usize,
}

impl EefBound {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }
}

/// max(sqrt(z / A^2), max_k c_k(E(1, z)) / c_k(target)).
pub fn eef_lower(tgt: &Target, z: &Rat, kmax: usize) -> Result<EefBound> {
    let tc = tgt.caps(kmax)?;
    let a2 = tgt.a_squared()?;
    eef_with(&tc, &a2, z)
}

/// eef_lower over a list of z, sharing the target capacities.
pub fn eef_curve(tgt: &Target, zs: &[Rat], kmax: usize) -> Result<Vec<EefBound>> {
    let tc = tgt.caps(kmax)?;
    let a2 = tgt.a_squared()?;
    par::map_slice(zs, |z| eef_with(&tc, &a2, z))
        .into_iter()
        .collect()
}

fn eef_with(tc: &CapacitySeq, a2: &Rat, z: &Rat) -> Result<EefBound> {
    if *z < int(1) {
        return Err(Error::Invalid(format!("z = {z} is below 1")));
    }
    let kmax = tc.kmax();
    let ec = ellipsoid_caps(&int(1), z, kmax)?;
    let mut best: Option<(Rat, usize)> = None;
    for k in 1..=kmax {
        if tc.values[k].is_zero() {
            continue;
        }
        let r = &ec.values[k] / &tc.values[k];
        if best.as_ref().is_none_or(|(b, _)| r > *b) {
            best = Some((r, k));
        }
    }
    let (vlo, vhi) = sqrt_interval(&(z / a2), ROOT_BITS);
    Ok(match best {
        Some((r, k)) if r >= vhi => EefBound {
            z: z.clone(),
            lo: r.clone(),
            hi: r,
            argmax_k: k,
        },
        _ => EefBound {
            z: z.clone(),
            lo: vlo,
            hi: vhi,
            argmax_k: 0,
        },
    })
}

/// b = (3c - sum a)^2 / (c^2 - sum a^2) - 2, the middle coefficient of
/// a0^2 - b a0 + 1 = 0.
pub fn accumulation_coefficient(c: &Rat, weights: &[Rat]) -> Result<Rat> {
    let vol = c * c - weights.iter().map(|a| a * a).sum::<Rat>();
    if !vol.is_positive() {
        return Err(Error::NonPositive("volume of weight sequence".into()));
    }
    let lin = c * int(3) - weights.iter().sum::<Rat>();
    Ok(&lin * &lin / vol - int(2))
}

/// Discriminant b^2 - 4 of the accumulation equation.
pub fn accumulation_discriminant(c: &Rat, weights: &[Rat]) -> Result<Rat> {
    let b = accumulation_coefficient(c, weights)?;
    Ok(&b * &b - int(4))
}

/// The root a0 > 1 of a0^2 - b a0 + 1 = 0, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Accumulation {
    pub b: Rat,
    pub a0: Mu,
}

pub fn accumulation_point(w: &WeightTree) -> Result<Option<Accumulation>> {
    let c = w
        .head
        .clone()
        .ok_or_else(|| Error::Invalid("weight tree has no head".into()))?;
    let b = accumulation_coefficient(&c, &w.weights())?;
    let disc = &b * &b - int(4);
    // b + 2 >= 0 always, so a root above 1 exists exactly when b > 2
    if b <= int(2) {
        return Ok(None);
    }
    let a0 = match rat_sqrt_exact(&disc) {
        Some(r) => Mu::Exact((&b + r) / int(2)),
        None => {
            let (lo, hi) = sqrt_interval(&disc, ROOT_BITS);
            Mu::Approx {
                lo: (&b + lo) / int(2),
                hi: (&b + hi) / int(2),
            }
        }
    };
    Ok(Some(Accumulation { b, a0 }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StaircaseReason {
    /// The rank criteria for an admitted body fail.
    CriteriaFail { case: u8 },
    /// A root a0 > 1 exists, so the test is silent.
    Accumulates(Accumulation),
    /// Criteria hold and the discriminant is negative.
    NoAccumulation { case: u8 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StaircaseVerdict {
    pub no_staircase: bool,
    pub reason: StaircaseReason,
}

/// Non-existence of an infinite staircase for a polarized del Pezzo tower of rank r.
/// A false answer means inconclusive, never that a staircase exists.
pub fn staircase_verdict(w: &WeightTree, r: usize) -> Result<StaircaseVerdict> {
    let crit = dp_criteria(w, r)?;
    if !crit.holds {
        return Ok(StaircaseVerdict {
            no_staircase: false,
            reason: StaircaseReason::CriteriaFail { case: crit.case },
        });
    }
    Ok(match accumulation_point(w)? {
        Some(acc) => StaircaseVerdict {
            no_staircase: false,
            reason: StaircaseReason::Accumulates(acc),
        },
        None => StaircaseVerdict {
            no_staircase: true,
            reason: StaircaseReason::NoAccumulation { case: crit.case },
        },
    })
}
