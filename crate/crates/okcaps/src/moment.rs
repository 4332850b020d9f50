//! Moment domains, weight-sequence decomposition and reconstruction by corner cutting.

use crate::error::{Error, Result};
use crate::exactgeom::{cross, int, rat_str, Polygon, Pt, Rat};
use num_traits::{Signed, Zero};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Convex,
    Concave,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Classification {
    ConvexMoment,
    ConcaveMoment,
    Neither,
}

/// A polygonal moment domain, stored by its outer boundary: a polyline running from
/// (0, b) on the y-axis to (a, 0) on the x-axis. The domain is the region it cuts off
/// together with the two axes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MomentDomain {
    kind: Kind,
    outer: Vec<Pt>,
}

impl MomentDomain {
    pub fn from_points(points: &[Pt]) -> Result<MomentDomain> {
        if points.is_empty() {
            return Err(Error::DegeneratePolygon);
        }
        let outer =
            boundary_polyline(points).ok_or(Error::Invalid("not a moment domain".into()))?;
        let kind = match classify_polyline(&outer) {
            Classification::ConvexMoment => Kind::Convex,
            Classification::ConcaveMoment => Kind::Concave,
            Classification::Neither => return Err(Error::Invalid("not a moment domain".into())),
        };
        Ok(MomentDomain { kind, outer })
    }

    pub fn from_polygon(p: &Polygon) -> Result<MomentDomain> {
        let d = MomentDomain::from_points(p.vertices())?;
        if d.kind != Kind::Convex {
            return Err(Error::NotConvex);
        }
        Ok(d)
    }

    pub fn from_ints(pts: &[(i64, i64)]) -> Result<MomentDomain> {
        let v: Vec<Pt> = pts.iter().map(|&(x, y)| Pt::int(x, y)).collect();
        MomentDomain::from_points(&v)
    }

    /// The triangle with legs a on the x-axis and b on the y-axis.
    pub fn ellipsoid(a: Rat, b: Rat) -> MomentDomain {
        MomentDomain {
            kind: Kind::Convex,
            outer: vec![Pt::new(Rat::zero(), b), Pt::new(a, Rat::zero())],
        }
    }

    pub fn delta(c: Rat) -> MomentDomain {
        MomentDomain::ellipsoid(c.clone(), c)
    }

    pub fn rectangle(a: Rat, b: Rat) -> MomentDomain {
        let outer = vec![
            Pt::new(Rat::zero(), b.clone()),
            Pt::new(a.clone(), b),
            Pt::new(a, Rat::zero()),
        ];
        MomentDomain {
            kind: Kind::Convex,
            outer,
        }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn outer(&self) -> &[Pt] {
        &self.outer
    }

    /// True for triangles, which are both convex and concave.
    pub fn is_triangle(&self) -> bool {
        self.outer.len() == 2
    }

    pub fn is_concave_shape(&self) -> bool {
        self.kind == Kind::Concave || self.is_triangle()
    }

    pub fn is_convex_shape(&self) -> bool {
        self.kind == Kind::Convex
    }

    /// Counterclockwise boundary ring starting at the origin.
    pub fn ring(&self) -> Vec<Pt> {
        let mut r = vec![Pt::int(0, 0)];
        r.extend(self.outer.iter().rev().cloned());
        r
    }

    /// The region as a convex polygon (convex domains only).
    pub fn polygon(&self) -> Result<Polygon> {
        if self.kind != Kind::Convex {
            return Err(Error::NotConvex);
        }
        Ok(Polygon::hull(&self.ring()))
    }

    pub fn area(&self) -> Rat {
        let r = self.ring();
        let n = r.len();
        let mut s = Rat::zero();
        for i in 0..n {
            s += cross(&r[i], &r[(i + 1) % n]);
        }
        s / int(2)
    }

    pub fn scale(&self, s: &Rat) -> MomentDomain {
        MomentDomain {
            kind: self.kind,
            outer: self.outer.iter().map(|p| p.scale(s)).collect(),
        }
    }

    /// Mirror image in the diagonal.
    pub fn transpose(&self) -> MomentDomain {
        let outer = self
            .outer
            .iter()
            .rev()
            .map(|p| Pt::new(p.y.clone(), p.x.clone()))
            .collect();
        MomentDomain {
            kind: self.kind,
            outer,
        }
    }

    /// Intercept on the x-axis.
    pub fn x_intercept(&self) -> Rat {
        self.outer.last().unwrap().x.clone()
    }

    /// Intercept on the y-axis.
    pub fn y_intercept(&self) -> Rat {
        self.outer[0].y.clone()
    }

    pub fn width(&self) -> Rat {
        self.outer.iter().map(|p| p.x.clone()).max().unwrap()
    }

    pub fn height(&self) -> Rat {
        self.outer.iter().map(|p| p.y.clone()).max().unwrap()
    }
}

pub fn classify(points: &[Pt]) -> Result<Classification> {
    if points.is_empty() {
        return Err(Error::DegeneratePolygon);
    }
    Ok(boundary_polyline(points)
        .map(|l| classify_polyline(&l))
        .unwrap_or(Classification::Neither))
}

/// Normalize a point list (closed ring through the origin, or open polyline) to the
/// outer polyline from the y-axis to the x-axis.
fn boundary_polyline(points: &[Pt]) -> Option<Vec<Pt>> {
    if points
        .iter()
        .any(|p| p.x.is_negative() || p.y.is_negative())
    {
        return None;
    }
    let origin = Pt::int(0, 0);
    let mut seq: Vec<Pt> = match points.iter().position(|p| *p == origin) {
        Some(i) => {
            let n = points.len();
            (1..n).map(|j| points[(i + j) % n].clone()).collect()
        }
        None => points.to_vec(),
    };
    seq.dedup();
    if seq.len() > 1 && seq[0] == seq[seq.len() - 1] {
        seq.pop();
    }
    let on_y = |p: &Pt| p.x.is_zero() && p.y.is_positive();
    let on_x = |p: &Pt| p.y.is_zero() && p.x.is_positive();
    if seq.len() < 2 {
        return None;
    }
    if on_x(&seq[0]) && on_y(seq.last().unwrap()) {
        seq.reverse();
    }
    while seq.len() > 2 && seq[0].x.is_zero() && seq[1].x.is_zero() && seq[1].y < seq[0].y {
        seq.remove(1);
    }
    while seq.len() > 2 {
        let k = seq.len();
        if !(seq[k - 1].y.is_zero() && seq[k - 2].y.is_zero() && seq[k - 1].x < seq[k - 2].x) {
            break;
        }
        seq.pop();
    }
    if !(on_y(&seq[0]) && on_x(seq.last().unwrap())) {
        return None;
    }
    simplify(seq)
}

/// Drop repeated and collinear interior points; reject backtracking.
fn simplify(seq: Vec<Pt>) -> Option<Vec<Pt>> {
    let mut out: Vec<Pt> = Vec::with_capacity(seq.len());
    for p in seq {
        if out.last() == Some(&p) {
            continue;
        }
        while out.len() >= 2 {
            let a = &out[out.len() - 2];
            let b = &out[out.len() - 1];
            let (d1, d2) = (b.sub(a), p.sub(b));
            if !cross(&d1, &d2).is_zero() {
                break;
            }
            if (&d1.x * &d2.x + &d1.y * &d2.y).is_negative() {
                return None;
            }
            out.pop();
        }
        out.push(p);
    }
    (out.len() >= 2).then_some(out)
}

fn classify_polyline(l: &[Pt]) -> Classification {
    if l.len() == 2 {
        return Classification::ConvexMoment;
    }
    let dirs: Vec<Pt> = l.windows(2).map(|w| w[1].sub(&w[0])).collect();
    let turns: Vec<Rat> = dirs.windows(2).map(|w| cross(&w[0], &w[1])).collect();
    if turns.iter().all(|t| t.is_negative()) {
        let first = &dirs[0];
        let last = dirs.last().unwrap();
        if first.x.is_positive() && last.y.is_negative() {
            return Classification::ConvexMoment;
        }
        return Classification::Neither;
    }
    if turns.iter().all(|t| t.is_positive())
        && dirs.iter().all(|d| d.x.is_positive() && d.y.is_negative())
    {
        return Classification::ConcaveMoment;
    }
    Classification::Neither
}

/// A node of a weight tree: a cut of size `w`, with subtrees attached at the two
/// vertices the cut creates (slot 0 on the local y-axis side, slot 1 on the x side).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Node {
    pub w: Rat,
    pub children: [Option<Box<Node>>; 2],
}

impl Node {
    pub fn leaf(w: Rat) -> Node {
        Node {
            w,
            children: [None, None],
        }
    }

    pub fn with(w: Rat, c0: Option<Node>, c1: Option<Node>) -> Node {
        Node {
            w,
            children: [c0.map(Box::new), c1.map(Box::new)],
        }
    }

    fn collect(&self, out: &mut Vec<Rat>) {
        if !self.w.is_zero() {
            out.push(self.w.clone());
        }
        for c in self.children.iter().flatten() {
            c.collect(out);
        }
    }

    fn key(&self) -> String {
        let mut ks: Vec<String> = self
            .children
            .iter()
            .flatten()
            .filter(|c| !c.is_zero())
            .map(|c| c.key())
            .collect();
        ks.sort();
        format!("{}[{}]", rat_str(&self.w), ks.join(","))
    }

    fn is_zero(&self) -> bool {
        self.w.is_zero() && self.children.iter().flatten().all(|c| c.is_zero())
    }

    fn sum(a: Option<&Node>, b: Option<&Node>) -> Option<Node> {
        match (a, b) {
            (None, None) => None,
            _ => {
                let w = a.map(|n| n.w.clone()).unwrap_or_default()
                    + b.map(|n| n.w.clone()).unwrap_or_default();
                let ch = |i: usize| {
                    Node::sum(
                        a.and_then(|n| n.children[i].as_deref()),
                        b.and_then(|n| n.children[i].as_deref()),
                    )
                };
                Some(Node::with(w, ch(0), ch(1)))
            }
        }
    }
}

/// Weight sequence indexed by a rooted binary tree. Convex trees carry a head and up to
/// two root cuts (slot 0 at the y-axis corner, slot 1 at the x-axis corner); concave
/// trees carry a single root.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightTree {
    pub head: Option<Rat>,
    pub roots: Vec<Option<Node>>,
}

impl WeightTree {
    pub fn ball(c: Rat) -> WeightTree {
        WeightTree {
            head: Some(c),
            roots: vec![None, None],
        }
    }

    /// Nonzero weights, sorted in decreasing order.
    pub fn weights(&self) -> Vec<Rat> {
        let mut out = Vec::new();
        for r in self.roots.iter().flatten() {
            r.collect(&mut out);
        }
        out.sort_by(|a, b| b.cmp(a));
        out
    }

    /// Canonical key under which trees differing only in child order coincide.
    pub fn key(&self) -> String {
        let mut ks: Vec<String> = self
            .roots
            .iter()
            .flatten()
            .filter(|n| !n.is_zero())
            .map(|n| n.key())
            .collect();
        ks.sort();
        let h = self.head.as_ref().map(rat_str).unwrap_or_default();
        format!("{h};{}", ks.join(","))
    }

    /// Tree equality with unordered children and zero padding ignored.
    pub fn same_tree(&self, other: &WeightTree) -> bool {
        self.key() == other.key()
    }

    /// Equality of head and weight multiset.
    pub fn same_sequence(&self, other: &WeightTree) -> bool {
        self.head == other.head && self.weights() == other.weights()
    }

    /// Interpret a flat sequence (c; a_1, ..., a_n) as a tree: each weight is cut at the
    /// first free vertex where it fits, scanning vertices in creation order and breaking
    /// ties lexicographically.
    pub fn from_flat(head: Rat, weights: &[Rat]) -> Result<WeightTree> {
        if !head.is_positive() {
            return Err(Error::NonPositive(format!("head {}", rat_str(&head))));
        }
        let mut carver = Carver::new(&head);
        let mut tree = WeightTree::ball(head.clone());
        let mut slots: Vec<Slot> = root_frames(&head)
            .into_iter()
            .enumerate()
            .map(|(i, f)| Slot {
                frame: f,
                step: 0,
                path: vec![i],
            })
            .collect();
        for (step, a) in weights.iter().enumerate() {
            if a.is_negative() {
                return Err(Error::NonPositive(format!("weight {}", rat_str(a))));
            }
            if a.is_zero() {
                continue;
            }
            slots.sort_by(|s, t| s.step.cmp(&t.step).then_with(|| s.frame.v.cmp(&t.frame.v)));
            let pos = slots
                .iter()
                .position(|s| carver.fits(&s.frame, a))
                .ok_or_else(|| Error::Polytopality {
                    node: format!("weight #{}", step + 1),
                })?;
            let slot = slots.remove(pos);
            carver.cut(&slot.frame, a).expect("checked fit");
            insert_at(&mut tree, &slot.path, a.clone());
            for (i, f) in slot.frame.children(a).into_iter().enumerate() {
                let mut path = slot.path.clone();
                path.push(i);
                slots.push(Slot {
                    frame: f,
                    step: step + 1,
                    path,
                });
            }
        }
        Ok(tree)
    }

    /// A flat sequence hung as a chain, with no placement check; for predicates that
    /// only read the head and the weights.
    pub fn sequence(head: Rat, weights: &[Rat]) -> WeightTree {
        let mut node: Option<Node> = None;
        for a in weights.iter().rev() {
            node = Some(Node::with(a.clone(), node, None));
        }
        WeightTree {
            head: Some(head),
            roots: vec![node, None],
        }
    }

    /// Pad both trees to a common shape and add weights nodewise.
    pub fn nodewise_sum(&self, other: &WeightTree) -> WeightTree {
        let head = match (&self.head, &other.head) {
            (None, None) => None,
            (a, b) => Some(a.clone().unwrap_or_default() + b.clone().unwrap_or_default()),
        };
        let n = self.roots.len().max(other.roots.len());
        let roots = (0..n)
            .map(|i| {
                Node::sum(
                    self.roots.get(i).and_then(|r| r.as_ref()),
                    other.roots.get(i).and_then(|r| r.as_ref()),
                )
            })
            .collect();
        WeightTree { head, roots }
    }
}

impl fmt::Display for WeightTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ws: Vec<String> = self.weights().iter().map(rat_str).collect();
        match &self.head {
            Some(h) => write!(f, "({}; {})", rat_str(h), ws.join(", ")),
            None => write!(f, "({})", ws.join(", ")),
        }
    }
}

fn insert_at(tree: &mut WeightTree, path: &[usize], w: Rat) {
    let root = &mut tree.roots[path[0]];
    if path.len() == 1 {
        *root = Some(Node::leaf(w));
        return;
    }
    insert_node(root.as_mut().expect("parent exists"), &path[1..], w);
}

fn insert_node(node: &mut Node, path: &[usize], w: Rat) {
    let child = &mut node.children[path[0]];
    if path.len() == 1 {
        *child = Some(Box::new(Node::leaf(w)));
        return;
    }
    insert_node(child.as_mut().expect("parent exists"), &path[1..], w);
}

struct Slot {
    frame: Frame,
    step: usize,
    path: Vec<usize>,
}

/// Affine chart at a polygon vertex `v`: local (x, y) maps to v + x*e1 + y*e2.
#[derive(Clone, Debug)]
struct Frame {
    v: Pt,
    e1: (i64, i64),
    e2: (i64, i64),
}

impl Frame {
    fn at(&self, x: &Rat, y: &Rat) -> Pt {
        Pt::new(
            &self.v.x + x * int(self.e1.0) + y * int(self.e2.0),
            &self.v.y + x * int(self.e1.1) + y * int(self.e2.1),
        )
    }

    /// Frames at the two vertices created by a cut of size `a`.
    fn children(&self, a: &Rat) -> [Frame; 2] {
        let z = Rat::zero();
        let d = (self.e1.0 - self.e2.0, self.e1.1 - self.e2.1);
        [
            Frame {
                v: self.at(&z, a),
                e1: d,
                e2: self.e2,
            },
            Frame {
                v: self.at(a, &z),
                e1: self.e1,
                e2: (-d.0, -d.1),
            },
        ]
    }
}

fn root_frames(c: &Rat) -> [Frame; 2] {
    [
        Frame {
            v: Pt::new(Rat::zero(), c.clone()),
            e1: (1, -1),
            e2: (0, -1),
        },
        Frame {
            v: Pt::new(c.clone(), Rat::zero()),
            e1: (-1, 0),
            e2: (-1, 1),
        },
    ]
}

/// Positive multiple t with d = t*e, if any.
fn along(d: &Pt, e: (i64, i64)) -> Option<Rat> {
    let (ex, ey) = (int(e.0), int(e.1));
    if !(&d.x * &ey - &d.y * &ex).is_zero() {
        return None;
    }
    let t = if e.0 != 0 { &d.x / ex } else { &d.y / ey };
    t.is_positive().then_some(t)
}

/// Counterclockwise polygon under successive corner cuts.
struct Carver {
    ring: Vec<Pt>,
}

impl Carver {
    fn new(c: &Rat) -> Carver {
        let z = Rat::zero();
        Carver {
            ring: vec![
                Pt::new(z.clone(), z.clone()),
                Pt::new(c.clone(), z.clone()),
                Pt::new(z, c.clone()),
            ],
        }
    }

    /// Index of the frame vertex and whether e1 points to the previous neighbour.
    fn locate(&self, f: &Frame, a: &Rat) -> Option<(usize, bool)> {
        let n = self.ring.len();
        let i = self.ring.iter().position(|p| *p == f.v)?;
        let prev = self.ring[(i + n - 1) % n].sub(&f.v);
        let next = self.ring[(i + 1) % n].sub(&f.v);
        let ok = |d: &Pt, e| along(d, e).map(|t| t >= *a).unwrap_or(false);
        if ok(&prev, f.e1) && ok(&next, f.e2) {
            Some((i, true))
        } else if ok(&prev, f.e2) && ok(&next, f.e1) {
            Some((i, false))
        } else {
            None
        }
    }

    /// The cut fits and leaves a convex moment domain.
    fn fits(&self, f: &Frame, a: &Rat) -> bool {
        let mut c = Carver {
            ring: self.ring.clone(),
        };
        c.cut(f, a).is_some() && c.is_domain()
    }

    fn is_domain(&self) -> bool {
        MomentDomain::from_points(&self.ring)
            .map(|d| d.kind == Kind::Convex)
            .unwrap_or(false)
    }

    fn cut(&mut self, f: &Frame, a: &Rat) -> Option<()> {
        let (i, e1_prev) = self.locate(f, a)?;
        let z = Rat::zero();
        let p1 = f.at(a, &z);
        let p2 = f.at(&z, a);
        let (first, second) = if e1_prev { (p1, p2) } else { (p2, p1) };
        let n = self.ring.len();
        let prev = self.ring[(i + n - 1) % n].clone();
        let next = self.ring[(i + 1) % n].clone();
        let mut ins = Vec::new();
        if first != prev {
            ins.push(first);
        }
        if second != next {
            ins.push(second);
        }
        self.ring.splice(i..=i, ins);
        Some(())
    }
}

/// Rebuild a convex moment domain from its weight tree by cutting corners off the
/// head triangle.
pub fn reconstruct(t: &WeightTree) -> Result<MomentDomain> {
    let c = t
        .head
        .clone()
        .ok_or(Error::Invalid("weight tree has no head".into()))?;
    if !c.is_positive() {
        return Err(Error::NonPositive(format!("head {}", rat_str(&c))));
    }
    if t.roots.len() > 2 {
        return Err(Error::Invalid(
            "a convex weight tree has at most two roots".into(),
        ));
    }
    let mut carver = Carver::new(&c);
    let frames = root_frames(&c);
    for (i, r) in t.roots.iter().enumerate() {
        if let Some(n) = r {
            carve(&mut carver, &frames[i], n, format!("root{i}"))?;
        }
    }
    let d = MomentDomain::from_points(&carver.ring).map_err(|_| Error::Polytopality {
        node: "result".into(),
    })?;
    if d.kind != Kind::Convex {
        return Err(Error::Polytopality {
            node: "result".into(),
        });
    }
    Ok(d)
}

fn carve(carver: &mut Carver, f: &Frame, n: &Node, id: String) -> Result<()> {
    if n.w.is_negative() {
        return Err(Error::NonPositive(format!(
            "weight {} at {id}",
            rat_str(&n.w)
        )));
    }
    if n.w.is_zero() {
        if n.is_zero() {
            return Ok(());
        }
        return Err(Error::Polytopality { node: id });
    }
    carver
        .cut(f, &n.w)
        .ok_or_else(|| Error::Polytopality { node: id.clone() })?;
    let kids = f.children(&n.w);
    for (i, c) in n.children.iter().enumerate() {
        if let Some(c) = c {
            carve(carver, &kids[i], c, format!("{id}/{i}"))?;
        }
    }
    Ok(())
}

/// Weight tree of a convex moment domain.
pub fn wt_convex(d: &MomentDomain) -> Result<WeightTree> {
    if d.kind != Kind::Convex {
        return Err(Error::NotConvex);
    }
    let o = &d.outer;
    let sums: Vec<Rat> = o.iter().map(|p| &p.x + &p.y).collect();
    let c = sums.iter().max().unwrap().clone();
    let i1 = sums.iter().position(|s| *s == c).unwrap();
    let i2 = sums.iter().rposition(|s| *s == c).unwrap();
    let upper: Vec<Pt> = o[..=i1]
        .iter()
        .map(|p| Pt::new(p.x.clone(), &c - &p.x - &p.y))
        .collect();
    let lower: Vec<Pt> = o[i2..]
        .iter()
        .map(|p| Pt::new(&c - &p.x - &p.y, p.y.clone()))
        .collect();
    Ok(WeightTree {
        head: Some(c),
        roots: vec![concave_node(upper), concave_node(lower)],
    })
}

/// Weight tree of a concave moment domain (a single root).
pub fn wt_concave(d: &MomentDomain) -> Result<WeightTree> {
    if !d.is_concave_shape() {
        return Err(Error::NotConcave);
    }
    Ok(WeightTree {
        head: None,
        roots: vec![concave_node(d.outer.clone())],
    })
}

/// Recursive decomposition of a concave polyline from (0, b) to (a, 0).
fn concave_node(poly: Vec<Pt>) -> Option<Node> {
    let poly = simplify(poly)?;
    if poly[0].y.is_zero() || poly.last().unwrap().x.is_zero() {
        return None;
    }
    let sums: Vec<Rat> = poly.iter().map(|p| &p.x + &p.y).collect();
    let a = sums.iter().min().unwrap().clone();
    let i1 = sums.iter().position(|s| *s == a).unwrap();
    let i2 = sums.iter().rposition(|s| *s == a).unwrap();
    let upper = (i1 > 0).then(|| {
        poly[..=i1]
            .iter()
            .map(|p| Pt::new(p.x.clone(), &p.x + &p.y - &a))
            .collect()
    });
    let lower = (i2 + 1 < poly.len()).then(|| {
        poly[i2..]
            .iter()
            .map(|p| Pt::new(&p.x + &p.y - &a, p.y.clone()))
            .collect()
    });
    Some(Node::with(
        a,
        upper.and_then(concave_node),
        lower.and_then(concave_node),
    ))
}

/// Weight tree of either kind of moment domain.
pub fn weight_tree(d: &MomentDomain) -> Result<WeightTree> {
    match d.kind {
        Kind::Convex => wt_convex(d),
        Kind::Concave => wt_concave(d),
    }
}

/// Minkowski sum of the domains encoded by two convex weight trees.
pub fn minkowski(w1: &WeightTree, w2: &WeightTree) -> Result<MomentDomain> {
    let p1 = reconstruct(w1)?.polygon()?;
    let p2 = reconstruct(w2)?.polygon()?;
    MomentDomain::from_polygon(&p1.minkowski_sum(&p2))
}
