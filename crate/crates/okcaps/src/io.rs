//! JSON records and compact command-line forms. Rationals are strings "p/q", or "p"
//! when q = 1.

use crate::algcap::{AsymSummary, PolarizedSurface};
use crate::apps::{
    Accumulation, EefBound, EmbedStatus, StaircaseReason, StaircaseVerdict, Verdict,
};
use crate::error::{Error, Result};
use crate::exactgeom::{parse_rat, rat_str, Pt, Rat};
use crate::moment::{Kind, MomentDomain, Node, WeightTree};
use crate::okounkov::{Mu, NOBody};
use crate::picard::{DivisorClass, Provenance, SurfaceModel, ZariskiDecomp};
use crate::toric_ech::CapacitySeq;
use serde::{Deserialize, Serialize};

fn rs(r: &Rat) -> String {
    rat_str(r)
}

fn pr(s: &str) -> Result<Rat> {
    parse_rat(s)
}

fn prs(v: &[String]) -> Result<Vec<Rat>> {
    v.iter().map(|s| pr(s)).collect()
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("records serialize")
}

pub fn from_json<T: for<'de> Deserialize<'de>>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Invalid(format!("json: {e}")))
}

/// "c,a1,...,an": the class cH - sum a_i E_i.
pub fn parse_divisor(s: &str) -> Result<DivisorClass> {
    let parts: Vec<Rat> = s
        .split(',')
        .map(|p| parse_rat(p.trim()))
        .collect::<Result<_>>()?;
    let (d, m) = parts
        .split_first()
        .ok_or_else(|| Error::Invalid("empty divisor".into()))?;
    Ok(DivisorClass::new(d.clone(), m.to_vec()))
}

/// "c;a1,...,an", or "c" alone.
pub fn parse_weights(s: &str) -> Result<(Rat, Vec<Rat>)> {
    let (head, rest) = match s.split_once(';') {
        Some((h, r)) => (h, r),
        None => (s, ""),
    };
    let c = parse_rat(head.trim())?;
    let ws = if rest.trim().is_empty() {
        Vec::new()
    } else {
        rest.split(',')
            .map(|p| parse_rat(p.trim()))
            .collect::<Result<_>>()?
    };
    Ok((c, ws))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorJson {
    pub d: String,
    pub m: Vec<String>,
}

impl DivisorJson {
    pub fn of(c: &DivisorClass) -> Self {
        DivisorJson {
            d: rs(&c.d),
            m: c.m.iter().map(rs).collect(),
        }
    }

    pub fn to_class(&self) -> Result<DivisorClass> {
        Ok(DivisorClass::new(pr(&self.d)?, prs(&self.m)?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ModelJson {
    Delpezzo {
        n: usize,
    },
    Custom {
        n: usize,
        neg_curves: Vec<DivisorJson>,
    },
}

impl ModelJson {
    pub fn of(m: &SurfaceModel) -> Self {
        match m.provenance() {
            Provenance::DelPezzoGeneric => ModelJson::Delpezzo { n: m.n() },
            Provenance::UserSupplied => ModelJson::Custom {
                n: m.n(),
                neg_curves: m.curves().iter().map(DivisorJson::of).collect(),
            },
        }
    }

    pub fn to_model(&self) -> Result<SurfaceModel> {
        match self {
            ModelJson::Delpezzo { n: 0 } => Ok(SurfaceModel::plane()),
            ModelJson::Delpezzo { n } => SurfaceModel::delpezzo(*n),
            ModelJson::Custom { n, neg_curves } => SurfaceModel::custom(
                *n,
                neg_curves
                    .iter()
                    .map(|c| c.to_class())
                    .collect::<Result<_>>()?,
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceJson {
    pub model: ModelJson,
    #[serde(rename = "A")]
    pub a: DivisorJson,
}

impl SurfaceJson {
    pub fn of(s: &PolarizedSurface) -> Self {
        SurfaceJson {
            model: ModelJson::of(s.model()),
            a: DivisorJson::of(s.a()),
        }
    }

    pub fn to_surface(&self) -> Result<PolarizedSurface> {
        PolarizedSurface::new(self.model.to_model()?, self.a.to_class()?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainJson {
    pub kind: String,
    pub vertices: Vec<[String; 2]>,
}

impl DomainJson {
    pub fn of(d: &MomentDomain) -> Self {
        let kind = match d.kind() {
            Kind::Convex => "convex",
            Kind::Concave => "concave",
        };
        DomainJson {
            kind: kind.into(),
            vertices: d.ring().iter().map(|p| [rs(&p.x), rs(&p.y)]).collect(),
        }
    }

    pub fn to_domain(&self) -> Result<MomentDomain> {
        let pts: Vec<Pt> = self
            .vertices
            .iter()
            .map(|[x, y]| Ok(Pt::new(pr(x)?, pr(y)?)))
            .collect::<Result<_>>()?;
        let d = MomentDomain::from_points(&pts)?;
        match (self.kind.as_str(), d.kind()) {
            ("convex", Kind::Convex) | ("concave", Kind::Concave) => Ok(d),
            ("convex", _) => Err(Error::NotConvex),
            ("concave", _) => Err(Error::NotConcave),
            (k, _) => Err(Error::Invalid(format!("unknown domain kind {k}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeJson {
    pub w: String,
    pub children: Vec<Option<NodeJson>>,
}

impl NodeJson {
    fn of(n: &Node) -> Self {
        NodeJson {
            w: rs(&n.w),
            children: n
                .children
                .iter()
                .map(|c| c.as_deref().map(NodeJson::of))
                .collect(),
        }
    }

    fn to_node(&self) -> Result<Node> {
        if self.children.len() > 2 {
            return Err(Error::Invalid("a cut has at most two children".into()));
        }
        let ch = |i: usize| {
            self.children
                .get(i)
                .cloned()
                .flatten()
                .map(|c| c.to_node())
                .transpose()
        };
        Ok(Node::with(pr(&self.w)?, ch(0)?, ch(1)?))
    }
}

/// Tree form {"head", "cuts"} or flat form {"head", "weights"}; the tree form is written.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub head: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cuts: Option<Vec<Option<NodeJson>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<String>>,
}

impl TreeJson {
    pub fn of(t: &WeightTree) -> Self {
        TreeJson {
            head: t.head.as_ref().map(rs),
            cuts: Some(
                t.roots
                    .iter()
                    .map(|r| r.as_ref().map(NodeJson::of))
                    .collect(),
            ),
            weights: None,
        }
    }

    /// Head and sorted weights only.
    pub fn flat(t: &WeightTree) -> Self {
        TreeJson {
            head: t.head.as_ref().map(rs),
            cuts: None,
            weights: Some(t.weights().iter().map(rs).collect()),
        }
    }

    pub fn to_tree(&self) -> Result<WeightTree> {
        let head = self.head.as_deref().map(pr).transpose()?;
        match (&self.cuts, &self.weights) {
            (Some(cuts), None) => {
                let roots = cuts
                    .iter()
                    .map(|c| c.as_ref().map(|n| n.to_node()).transpose())
                    .collect::<Result<_>>()?;
                Ok(WeightTree { head, roots })
            }
            (None, Some(ws)) => {
                let head = head.ok_or_else(|| Error::Invalid("flat weights need a head".into()))?;
                WeightTree::from_flat(head, &prs(ws)?)
            }
            _ => Err(Error::Invalid(
                "expected exactly one of cuts, weights".into(),
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgcapJson {
    pub k: usize,
    pub cap: String,
    #[serde(rename = "D")]
    pub d: DivisorJson,
}

impl AlgcapJson {
    pub fn of(k: usize, cap: &Rat, d: &DivisorClass) -> Self {
        AlgcapJson {
            k,
            cap: rs(cap),
            d: DivisorJson::of(d),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportJson {
    pub curve: DivisorJson,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZariskiJson {
    #[serde(rename = "P")]
    pub p: DivisorJson,
    #[serde(rename = "N")]
    pub n: DivisorJson,
    pub support: Vec<SupportJson>,
    pub volume: String,
}

impl ZariskiJson {
    pub fn of(z: &ZariskiDecomp, model: &SurfaceModel) -> Self {
        ZariskiJson {
            p: DivisorJson::of(&z.pos),
            n: DivisorJson::of(&z.neg),
            support: z
                .support
                .iter()
                .map(|(i, c)| SupportJson {
                    curve: DivisorJson::of(&model.curves()[*i]),
                    coeff: rs(c),
                })
                .collect(),
            volume: rs(&z.pos.square()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MuJson {
    Exact { exact: String },
    Approx { lo: String, hi: String },
}

impl MuJson {
    pub fn of(m: &Mu) -> Self {
        match m {
            Mu::Exact(r) => MuJson::Exact { exact: rs(r) },
            Mu::Approx { lo, hi } => MuJson::Approx {
                lo: rs(lo),
                hi: rs(hi),
            },
        }
    }

    pub fn to_mu(&self) -> Result<Mu> {
        Ok(match self {
            MuJson::Exact { exact } => Mu::Exact(pr(exact)?),
            MuJson::Approx { lo, hi } => Mu::Approx {
                lo: pr(lo)?,
                hi: pr(hi)?,
            },
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallJson {
    pub t: String,
    pub entering: Vec<DivisorJson>,
    pub leaving: Vec<DivisorJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NOBodyJson {
    pub flag: DivisorJson,
    pub mu: MuJson,
    pub beta_breaks: Option<Vec<[String; 2]>>,
    pub polygon: Option<Vec<[String; 2]>>,
    pub trace: Vec<WallJson>,
    pub weights: Option<TreeJson>,
}

impl NOBodyJson {
    pub fn of(b: &NOBody, model: &SurfaceModel) -> Self {
        let curve = |i: &usize| DivisorJson::of(&model.curves()[*i]);
        let pair = |p: &Pt| [rs(&p.x), rs(&p.y)];
        NOBodyJson {
            flag: curve(&b.flag),
            mu: MuJson::of(&b.mu),
            beta_breaks: b
                .beta_breaks()
                .ok()
                .map(|v| v.iter().map(|(t, x)| [rs(t), rs(x)]).collect()),
            polygon: b
                .polygon()
                .ok()
                .map(|p| p.vertices().iter().map(pair).collect()),
            trace: b
                .trace
                .iter()
                .map(|w| WallJson {
                    t: rs(&w.t),
                    entering: w.entering.iter().map(curve).collect(),
                    leaving: w.leaving.iter().map(curve).collect(),
                })
                .collect(),
            weights: crate::okounkov::no_wt(b).ok().map(|w| TreeJson::flat(&w)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub src: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tgt: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kmax: Option<usize>,
    pub sharp: bool,
}

impl VerdictJson {
    pub fn of(v: &Verdict) -> Self {
        let base = VerdictJson {
            status: String::new(),
            k: None,
            src: None,
            tgt: None,
            kmax: None,
            sharp: v.sharp,
        };
        match &v.status {
            EmbedStatus::Obstructed { k, src, tgt } => VerdictJson {
                status: "obstructed".into(),
                k: Some(*k),
                src: Some(rs(src)),
                tgt: Some(rs(tgt)),
                ..base
            },
            EmbedStatus::VolumeObstructed { src, tgt } => VerdictJson {
                status: "volume_obstructed".into(),
                src: Some(rs(src)),
                tgt: Some(rs(tgt)),
                ..base
            },
            EmbedStatus::NoObstructionUpTo(kmax) => VerdictJson {
                status: "no_obstruction_up_to".into(),
                kmax: Some(*kmax),
                ..base
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AccumulationJson {
    pub b: String,
    pub a0: MuJson,
    pub a0_approx: f64,
}

impl AccumulationJson {
    pub fn of(a: &Accumulation) -> Self {
        let mid = (a.a0.lo() + a.a0.hi()) / Rat::from_integer(2.into());
        AccumulationJson {
            b: rs(&a.b),
            a0: MuJson::of(&a.a0),
            a0_approx: crate::exactgeom::to_f64(&mid),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StaircaseJson {
    pub no_staircase: bool,
    pub reason: String,
    pub case: Option<u8>,
    pub accumulation: Option<AccumulationJson>,
}

impl StaircaseJson {
    pub fn of(v: &StaircaseVerdict) -> Self {
        let (reason, case, accumulation) = match &v.reason {
            StaircaseReason::CriteriaFail { case } => ("criteria_fail", Some(*case), None),
            StaircaseReason::Accumulates(a) => ("accumulates", None, Some(AccumulationJson::of(a))),
            StaircaseReason::NoAccumulation { case } => ("no_accumulation", Some(*case), None),
        };
        StaircaseJson {
            no_staircase: v.no_staircase,
            reason: reason.into(),
            case,
            accumulation,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymJson {
    pub k_lo: usize,
    pub k_hi: usize,
    pub min_e: f64,
    pub argmin: usize,
    pub max_e: f64,
    pub argmax: usize,
    pub vol: String,
    pub half_ka: String,
    pub anchor: String,
}

impl AsymJson {
    pub fn of(a: &AsymSummary) -> Self {
        AsymJson {
            k_lo: a.k_lo,
            k_hi: a.k_hi,
            min_e: a.min_e,
            argmin: a.argmin,
            max_e: a.max_e,
            argmax: a.argmax,
            vol: rs(&a.vol),
            half_ka: rs(&a.half_ka),
            anchor: rs(&a.anchor),
        }
    }
}

/// "k,c_k" rows with a header.
pub fn caps_csv(c: &CapacitySeq) -> String {
    let mut s = String::from("k,c_k\n");
    for (k, v) in c.values.iter().enumerate() {
        s.push_str(&format!("{k},{}\n", rs(v)));
    }
    s
}

/// Read back the output of caps_csv.
pub fn read_caps_csv(s: &str) -> Result<Vec<Rat>> {
    let mut lines = s.lines();
    if lines.next() != Some("k,c_k") {
        return Err(Error::Invalid("missing header k,c_k".into()));
    }
    lines
        .enumerate()
        .map(|(i, l)| {
            let (k, v) = l
                .split_once(',')
                .ok_or_else(|| Error::Invalid(format!("bad row {l}")))?;
            if k.parse::<usize>().ok() != Some(i) {
                return Err(Error::Invalid(format!("row {i} has index {k}")));
            }
            pr(v)
        })
        .collect()
}

/// "z,lower_bound,argmax_k" rows; the bound is the lower end of its enclosure.
pub fn eef_csv(rows: &[EefBound]) -> String {
    let mut s = String::from("z,lower_bound,argmax_k\n");
    for b in rows {
        s.push_str(&format!("{},{},{}\n", rs(&b.z), rs(&b.lo), b.argmax_k));
    }
    s
}
