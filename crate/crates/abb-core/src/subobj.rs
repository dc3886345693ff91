//! Sublines and subplanes of `PG(2, q^n)` over intermediate subfields.
//!
//! A *subline of level `k`* is the point set of a rank-2 `F_{q^k}`-lattice
//! inside `F_{q^n}^3`; a *subplane of level `k`* is the point set of a rank-3
//! lattice.  This module provides the canonical families `l_{ω,k}` and
//! `π_{ω,λ}`, the unique subline through three collinear points and subplane
//! through four points in general position, classification against the
//! distinguished line `z = 0`, reduction to canonical form under the
//! stabiliser of that line, and the degree of the canonical parameter.

use std::collections::{BTreeMap, BTreeSet};
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::abb::Stabiliser;
use crate::error::{Error, Result};
use crate::gf::{Elt, FieldCtx};
use crate::linalg;
use crate::proj::{Point, Subspace};

/// Position of a subline or subplane relative to the line `z = 0`,
/// by the size of the intersection: none, one point, a full subline of the
/// object's own order, or every point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinftyClass {
    /// No point on `z = 0`.
    External,
    /// Exactly one point on `z = 0`.
    Tangent,
    /// `q^k + 1` points on `z = 0` (subplanes only).
    Secant,
    /// Entirely inside `z = 0` (sublines only).
    Contained,
}

fn scaled_sum(ctx: &FieldCtx, terms: &[(Elt, &[Elt])]) -> Vec<Elt> {
    let width = terms[0].1.len();
    let mut out = vec![0 as Elt; width];
    for &(c, v) in terms {
        for i in 0..width {
            out[i] = ctx.add(out[i], ctx.mul(c, v[i]));
        }
    }
    out
}

/// A subline: the `q^k + 1` points of `PG(2, q^n)` spanned over `F_{q^k}` by
/// two independent vectors.  Equality compares the point sets.
#[derive(Debug, Clone)]
pub struct Subline {
    level: u8,
    v1: Vec<Elt>,
    v2: Vec<Elt>,
    points: Vec<Point>,
}

impl PartialEq for Subline {
    fn eq(&self, other: &Self) -> bool {
        self.level == other.level && self.points == other.points
    }
}
impl Eq for Subline {}
impl PartialOrd for Subline {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Subline {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.level, &self.points).cmp(&(other.level, &other.points))
    }
}
impl Hash for Subline {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.level.hash(state);
        self.points.hash(state);
    }
}

impl Subline {
    /// The subline of the given level whose points are the
    /// `F_{q^level}`-combinations of two independent width-3 vectors.
    pub fn from_basis(ctx: &FieldCtx, level: u8, v1: Vec<Elt>, v2: Vec<Elt>) -> Result<Subline> {
        if v1.len() != 3 || v2.len() != 3 {
            return Err(Error::InvalidArgument(
                "subline spanning vectors must have width 3".into(),
            ));
        }
        let sub = ctx.enumerate_subfield(level)?.to_vec();
        if linalg::rank(ctx, &[v1.clone(), v2.clone()]) != 2 {
            return Err(Error::InvalidArgument(
                "subline spanning vectors must be independent".into(),
            ));
        }
        let mut points = Vec::with_capacity(sub.len() + 1);
        points.push(Point::new(ctx, ctx.n(), v2.clone())?);
        for &t in &sub {
            points.push(Point::new(
                ctx,
                ctx.n(),
                scaled_sum(ctx, &[(ctx.one(), &v1), (t, &v2)]),
            )?);
        }
        points.sort();
        debug_assert!(
            points.windows(2).all(|w| w[0] != w[1]),
            "distinct parameters give distinct points"
        );
        Ok(Subline { level, v1, v2, points })
    }

    /// Level `k | n` of the subline.
    pub fn level(&self) -> u8 {
        self.level
    }

    /// The `q^k + 1` points in sorted order.
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// The two spanning vectors in the order used for parametrisation.
    pub fn basis(&self) -> (&[Elt], &[Elt]) {
        (&self.v1, &self.v2)
    }

    /// Membership test.
    pub fn contains(&self, p: &Point) -> bool {
        self.points.binary_search(p).is_ok()
    }

    /// The full line of `PG(2, q^n)` carrying the subline.
    pub fn carrier(&self, ctx: &FieldCtx) -> Subspace {
        Subspace::span(ctx, ctx.n(), 3, &[self.v1.clone(), self.v2.clone()])
    }

    /// Classify against the line `z = 0`.
    pub fn classify(&self) -> LinftyClass {
        let inf = self.points.iter().filter(|p| p.coords()[2] == 0).count();
        if inf == self.points.len() {
            LinftyClass::Contained
        } else if inf == 1 {
            LinftyClass::Tangent
        } else {
            debug_assert_eq!(inf, 0, "a line meets z = 0 in at most one point");
            LinftyClass::External
        }
    }

    /// Image under a stabiliser collineation (applied to the spanning
    /// vectors, which is the same as applying it pointwise).
    pub fn transformed(&self, ctx: &FieldCtx, x: &Stabiliser) -> Subline {
        let act = |v: &[Elt]| x.act_triple(ctx, v[0], v[1], v[2]).to_vec();
        Subline::from_basis(ctx, self.level, act(&self.v1), act(&self.v2))
            .expect("collineations preserve independence")
    }
}

/// The canonical subline `l_{ω,k}`: the points `(0, 1, ω + t)` for
/// `t ∈ F_{q^k}` together with `(0, 0, 1)`.  It meets `z = 0` exactly when
/// `ω ∈ F_{q^k}`.
pub fn subline_canonical(ctx: &FieldCtx, level: u8, omega: Elt) -> Result<Subline> {
    Subline::from_basis(
        ctx,
        level,
        vec![0, ctx.one(), omega],
        vec![0, 0, ctx.one()],
    )
}

/// The unique subline of the given level through three distinct collinear
/// points.
///
/// The carrier line is identified with `PG(1, q^n)` by dropping the first
/// coordinate position where the line's dual vector is nonzero; the
/// projectivity sending the images of the three points to `(0,1)`, `(1,0)`,
/// `(1,1)` pulls the canonical subline of `PG(1, q^k)` back to the answer.
pub fn subline_through(
    ctx: &FieldCtx,
    level: u8,
    p1: &Point,
    p2: &Point,
    p3: &Point,
) -> Result<Subline> {
    if p1 == p2 || p1 == p3 || p2 == p3 {
        return Err(Error::InvalidArgument(
            "subline_through needs three distinct points".into(),
        ));
    }
    let rows = vec![
        p1.coords().to_vec(),
        p2.coords().to_vec(),
        p3.coords().to_vec(),
    ];
    if rows.iter().any(|r| r.len() != 3) {
        return Err(Error::InvalidArgument("points must lie in the plane".into()));
    }
    if linalg::rank(ctx, &rows) != 2 {
        return Err(Error::InvalidArgument(
            "subline_through needs collinear points".into(),
        ));
    }
    let dual = linalg::kernel(ctx, &rows, 3);
    debug_assert_eq!(dual.len(), 1, "a line has a one-dimensional dual");
    let drop = dual[0]
        .iter()
        .position(|&x| x != 0)
        .expect("dual vector is nonzero");
    let project = |r: &[Elt]| -> [Elt; 2] {
        let kept: Vec<Elt> = (0..3).filter(|&i| i != drop).map(|i| r[i]).collect();
        [kept[0], kept[1]]
    };
    let a = project(p1.coords());
    let b = project(p2.coords());
    let c = project(p3.coords());
    // solve c = α·a + β·b in the two kept coordinates
    let det2 = |u: [Elt; 2], v: [Elt; 2]| ctx.sub(ctx.mul(u[0], v[1]), ctx.mul(u[1], v[0]));
    let d = det2(a, b);
    debug_assert_ne!(d, 0, "dropping a dual-supported coordinate keeps independence");
    let alpha = ctx.div(det2(c, b), d);
    let beta = ctx.div(det2(a, c), d);
    debug_assert!(alpha != 0 && beta != 0, "distinct points give nonzero weights");
    let u1: Vec<Elt> = p1.coords().iter().map(|&x| ctx.mul(alpha, x)).collect();
    let u2: Vec<Elt> = p2.coords().iter().map(|&x| ctx.mul(beta, x)).collect();
    let s = Subline::from_basis(ctx, level, u1, u2)?;
    debug_assert!(s.contains(p1) && s.contains(p2) && s.contains(p3));
    Ok(s)
}

/// Result of reducing a subline to canonical position: a stabiliser
/// collineation `transform` whose image of `canonical = l_{omega, k}` is the
/// input, with `omega` lexicographically least over all presentations
/// (`omega = 0` exactly for tangent sublines).
#[derive(Debug, Clone)]
pub struct ReducedSubline {
    pub transform: Stabiliser,
    pub omega: Elt,
    pub canonical: Subline,
}

/// Reduce a subline not contained in `z = 0` to canonical position.
pub fn reduce_subline(ctx: &FieldCtx, s: &Subline) -> Result<ReducedSubline> {
    if s.classify() == LinftyClass::Contained {
        return Err(Error::InvalidArgument(
            "a subline inside the line z = 0 has no canonical form".into(),
        ));
    }
    let sub = ctx.enumerate_subfield(s.level())?.to_vec();
    let (v1, v2) = s.basis();
    let v1 = v1.to_vec();
    let v2 = v2.to_vec();
    // Every affine point yields a presentation of the defining lattice with
    // one basis vector scaled to last coordinate 1; sweep all presentations
    // for the lexicographically least last coordinate of the other vector.
    let mut best: Option<(Elt, Vec<Elt>, Vec<Elt>)> = None;
    for q in s.points().iter().filter(|p| p.coords()[2] != 0) {
        let r = q.coords().to_vec();
        let coeff = linalg::solve_in_basis(ctx, &[v1.clone(), v2.clone()], &r)
            .expect("subline points lie in the span of the basis");
        // subfield representative (x0, y0) of the parameter class of q
        let (x0, y0) = if coeff[0] != 0 {
            (ctx.one(), ctx.div(coeff[1], coeff[0]))
        } else {
            (0, ctx.one())
        };
        debug_assert!(
            ctx.in_subfield(x0, s.level()) && ctx.in_subfield(y0, s.level()),
            "parameters of subline points lie in the subfield"
        );
        let u = scaled_sum(ctx, &[(x0, &v1), (y0, &v2)]);
        debug_assert_ne!(u[2], 0, "affine points have nonzero last coordinate");
        let mu = ctx.inv(u[2]);
        let w2: Vec<Elt> = u.iter().map(|&e| ctx.mul(mu, e)).collect();
        // complete w2 to a basis of the rescaled lattice
        let w10: Vec<Elt> = if x0 != 0 {
            v2.iter().map(|&e| ctx.mul(mu, e)).collect()
        } else {
            v1.iter().map(|&e| ctx.mul(mu, e)).collect()
        };
        let w0 = w10[2];
        for &lam in sub.iter().filter(|&&l| l != 0) {
            for &t in &sub {
                let om = ctx.add(ctx.mul(lam, w0), t);
                if best.as_ref().map_or(true, |(b, _, _)| om < *b) {
                    let w1 = scaled_sum(ctx, &[(lam, &w10), (t, &w2)]);
                    best = Some((om, w1, w2.clone()));
                }
            }
        }
    }
    let (omega, w1, w2) = best.expect("a non-contained subline has an affine point");
    let x21 = ctx.sub(w1[0], ctx.mul(omega, w2[0]));
    let x22 = ctx.sub(w1[1], ctx.mul(omega, w2[1]));
    let (x11, x12) = first_invertible_top_row(ctx, x21, x22);
    let transform = Stabiliser::new(
        ctx,
        [[x11, x12, 0], [x21, x22, 0], [w2[0], w2[1], ctx.one()]],
    )?;
    let canonical = subline_canonical(ctx, s.level(), omega)?;
    debug_assert_eq!(
        &canonical.transformed(ctx, &transform),
        s,
        "reduction round trip"
    );
    Ok(ReducedSubline {
        transform,
        omega,
        canonical,
    })
}

/// Lexicographically first pair `(x11, x12)` making
/// `[[x11, x12], [x21, x22]]` invertible.
fn first_invertible_top_row(ctx: &FieldCtx, x21: Elt, x22: Elt) -> (Elt, Elt) {
    for x11 in 0..ctx.size() as Elt {
        for x12 in 0..ctx.size() as Elt {
            let det = ctx.sub(ctx.mul(x11, x22), ctx.mul(x12, x21));
            if det != 0 {
                return (x11, x12);
            }
        }
    }
    unreachable!("the bottom row is nonzero, so some top row completes it");
}

/// Degree over `F_q` of the canonical `ω`-parameter of a subline not
/// contained in `z = 0` (1 for tangent sublines).
pub fn subline_smallest_containing_degree(ctx: &FieldCtx, s: &Subline) -> Result<u8> {
    let red = reduce_subline(ctx, s)?;
    Ok(ctx.subfield_degree(red.omega))
}

/// A subplane: the `q^{2k} + q^k + 1` points of `PG(2, q^n)` spanned over
/// `F_{q^k}` by three independent vectors.  Equality compares point sets.
#[derive(Debug, Clone)]
pub struct Subplane {
    level: u8,
    w: [Vec<Elt>; 3],
    points: Vec<Point>,
}

impl PartialEq for Subplane {
    fn eq(&self, other: &Self) -> bool {
        self.level == other.level && self.points == other.points
    }
}
impl Eq for Subplane {}
impl PartialOrd for Subplane {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Subplane {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.level, &self.points).cmp(&(other.level, &other.points))
    }
}
impl Hash for Subplane {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.level.hash(state);
        self.points.hash(state);
    }
}

impl Subplane {
    /// The subplane of the given level spanned over `F_{q^level}` by three
    /// independent width-3 vectors.
    pub fn from_lattice(ctx: &FieldCtx, level: u8, w: [Vec<Elt>; 3]) -> Result<Subplane> {
        if w.iter().any(|v| v.len() != 3) {
            return Err(Error::InvalidArgument(
                "subplane spanning vectors must have width 3".into(),
            ));
        }
        let sub = ctx.enumerate_subfield(level)?.to_vec();
        if linalg::rank(ctx, &w.to_vec()) != 3 {
            return Err(Error::InvalidArgument(
                "subplane spanning vectors must be independent".into(),
            ));
        }
        let one = ctx.one();
        let mut points = Vec::with_capacity(sub.len() * sub.len() + sub.len() + 1);
        for &t in &sub {
            for &u in &sub {
                points.push(Point::new(
                    ctx,
                    ctx.n(),
                    scaled_sum(ctx, &[(one, &w[0]), (t, &w[1]), (u, &w[2])]),
                )?);
            }
        }
        for &u in &sub {
            points.push(Point::new(
                ctx,
                ctx.n(),
                scaled_sum(ctx, &[(one, &w[1]), (u, &w[2])]),
            )?);
        }
        points.push(Point::new(ctx, ctx.n(), w[2].clone())?);
        points.sort();
        debug_assert!(
            points.windows(2).all(|p| p[0] != p[1]),
            "distinct parameter classes give distinct points"
        );
        Ok(Subplane { level, w, points })
    }

    /// Level `k | n` of the subplane.
    pub fn level(&self) -> u8 {
        self.level
    }

    /// The `q^{2k} + q^k + 1` points in sorted order.
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// The three spanning vectors.
    pub fn lattice(&self) -> &[Vec<Elt>; 3] {
        &self.w
    }

    /// Membership test.
    pub fn contains(&self, p: &Point) -> bool {
        self.points.binary_search(p).is_ok()
    }

    /// Classify against the line `z = 0`.
    pub fn classify(&self) -> LinftyClass {
        let inf = self.points.iter().filter(|p| p.coords()[2] == 0).count();
        match inf {
            0 => LinftyClass::External,
            1 => LinftyClass::Tangent,
            _ => {
                // a secant trace is a full line of the subplane: q^k + 1
                // points out of q^{2k} + q^k + 1
                debug_assert_eq!(self.points.len(), (inf - 1) * (inf - 1) + inf);
                LinftyClass::Secant
            }
        }
    }

    /// Image under a stabiliser collineation.
    pub fn transformed(&self, ctx: &FieldCtx, x: &Stabiliser) -> Subplane {
        let act = |v: &[Elt]| x.act_triple(ctx, v[0], v[1], v[2]).to_vec();
        Subplane::from_lattice(
            ctx,
            self.level,
            [act(&self.w[0]), act(&self.w[1]), act(&self.w[2])],
        )
        .expect("collineations preserve independence")
    }
}

/// The canonical subplane `π_{ω,λ}` at the given level: the points
/// `(s, u, sλ + uω + t)` for `s, t, u ∈ F_{q^level}` not all zero.
pub fn subplane_canonical(ctx: &FieldCtx, level: u8, omega: Elt, lambda: Elt) -> Result<Subplane> {
    Subplane::from_lattice(
        ctx,
        level,
        [
            vec![ctx.one(), 0, lambda],
            vec![0, ctx.one(), omega],
            vec![0, 0, ctx.one()],
        ],
    )
}

/// The unique subplane of the given level through four points in general
/// position (no three collinear).
pub fn subplane_through(
    ctx: &FieldCtx,
    level: u8,
    pts: [&Point; 4],
) -> Result<Subplane> {
    for i in 0..4 {
        for j in (i + 1)..4 {
            for k in (j + 1)..4 {
                let rows = vec![
                    pts[i].coords().to_vec(),
                    pts[j].coords().to_vec(),
                    pts[k].coords().to_vec(),
                ];
                if linalg::rank(ctx, &rows) != 3 {
                    return Err(Error::InvalidArgument(
                        "subplane_through needs four points with no three collinear".into(),
                    ));
                }
            }
        }
    }
    let basis = vec![
        pts[0].coords().to_vec(),
        pts[1].coords().to_vec(),
        pts[2].coords().to_vec(),
    ];
    let coeff = linalg::solve_in_basis(ctx, &basis, pts[3].coords())
        .expect("three independent points span the plane");
    debug_assert!(
        coeff.iter().all(|&c| c != 0),
        "general position gives nonzero frame weights"
    );
    let w = [
        basis[0].iter().map(|&x| ctx.mul(coeff[0], x)).collect(),
        basis[1].iter().map(|&x| ctx.mul(coeff[1], x)).collect(),
        basis[2].iter().map(|&x| ctx.mul(coeff[2], x)).collect(),
    ];
    let pl = Subplane::from_lattice(ctx, level, w)?;
    debug_assert!(pts.iter().all(|p| pl.contains(p)));
    Ok(pl)
}

/// Result of reducing a subplane to canonical position: a stabiliser
/// collineation `transform` whose image of `canonical = π_{omega, lambda}`
/// is the input.  `(lambda, omega)` is the lexicographically least reachable
/// pair: `(0, 0)` for secant subplanes and `lambda = 0` for tangent ones.
#[derive(Debug, Clone)]
pub struct ReducedSubplane {
    pub transform: Stabiliser,
    pub omega: Elt,
    pub lambda: Elt,
    pub canonical: Subplane,
}

/// Reduce a subplane to canonical position under the stabiliser of `z = 0`.
pub fn reduce_subplane(ctx: &FieldCtx, pl: &Subplane) -> Result<ReducedSubplane> {
    let level = pl.level();
    let sub = ctx.enumerate_subfield(level)?.to_vec();
    let w = pl.lattice();
    let zvec = [w[0][2], w[1][2], w[2][2]];
    // last-coordinate values of the lattice, with their coefficient triples
    let mut zmap: BTreeMap<Elt, Vec<[Elt; 3]>> = BTreeMap::new();
    for &c1 in &sub {
        for &c2 in &sub {
            for &c3 in &sub {
                if c1 == 0 && c2 == 0 && c3 == 0 {
                    continue;
                }
                let z = ctx.add(
                    ctx.add(ctx.mul(c1, zvec[0]), ctx.mul(c2, zvec[1])),
                    ctx.mul(c3, zvec[2]),
                );
                zmap.entry(z).or_default().push([c1, c2, c3]);
            }
        }
    }
    let values: Vec<Elt> = zmap.keys().copied().filter(|&z| z != 0).collect();
    let v_size = values.len() + 1;
    let qk = sub.len();
    // |V| determines the classification: q^k secant, q^{2k} tangent,
    // q^{3k} external (V = image of the last-coordinate map on the lattice)
    let dim_v = if v_size == qk.pow(3) {
        3
    } else if v_size == qk.pow(2) {
        2
    } else {
        debug_assert_eq!(v_size, qk, "the value module has subfield dimension 1, 2 or 3");
        1
    };
    // branch = projective class of a nonzero value v; rescaling the lattice
    // by 1/v sends some lattice vector to last coordinate 1
    let mut best: Option<(Elt, Elt, Elt)> = None; // (lambda, omega, v)
    let mut seen: BTreeSet<Elt> = BTreeSet::new();
    for &v in &values {
        let class_rep = sub
            .iter()
            .filter(|&&l| l != 0)
            .map(|&l| ctx.mul(l, v))
            .min()
            .unwrap();
        if !seen.insert(class_rep) {
            continue;
        }
        let v = class_rep;
        let mu = ctx.inv(v);
        let mut scaled: Vec<Elt> = values.iter().map(|&x| ctx.mul(mu, x)).collect();
        scaled.push(0);
        scaled.sort();
        let (lambda, omega) = match dim_v {
            1 => (0, 0),
            2 => {
                let om = *scaled
                    .iter()
                    .find(|&&x| !ctx.in_subfield(x, level))
                    .expect("a dimension-2 value module leaves the subfield");
                (0, om)
            }
            _ => {
                let lam = *scaled
                    .iter()
                    .find(|&&x| !ctx.in_subfield(x, level))
                    .expect("a dimension-3 value module leaves the subfield");
                let mut plane: BTreeSet<Elt> = BTreeSet::new();
                for &a in &sub {
                    for &b in &sub {
                        plane.insert(ctx.add(a, ctx.mul(b, lam)));
                    }
                }
                let om = *scaled
                    .iter()
                    .find(|x| !plane.contains(x))
                    .expect("a dimension-3 value module exceeds any plane");
                (lam, om)
            }
        };
        if best
            .as_ref()
            .map_or(true, |&(bl, bo, _)| (lambda, omega) < (bl, bo))
        {
            best = Some((lambda, omega, v));
        }
    }
    let (lambda, omega, v) = best.ok_or_else(|| {
        Error::InvalidArgument("subplane lattice has no nonzero last coordinate".into())
    })?;
    let mu = ctx.inv(v);
    // build a lattice basis with last coordinates (lambda, omega, 1):
    // coefficient triples are looked up by original-lattice value t·v
    let preimages = |t: Elt| -> &[[Elt; 3]] {
        zmap.get(&ctx.mul(t, v)).map(|v| v.as_slice()).unwrap_or(&[])
    };
    let c3 = preimages(ctx.one())[0];
    let c2 = *preimages(omega)
        .iter()
        .find(|c| linalg::rank(ctx, &[c.to_vec(), c3.to_vec()]) == 2)
        .expect("the value (omega, 1) extends to a basis");
    let c1 = *preimages(lambda)
        .iter()
        .find(|c| linalg::rank(ctx, &[c.to_vec(), c2.to_vec(), c3.to_vec()]) == 3)
        .expect("the value (lambda, omega, 1) extends to a basis");
    let vector = |c: [Elt; 3]| -> Vec<Elt> {
        let raw = scaled_sum(ctx, &[(c[0], &w[0]), (c[1], &w[1]), (c[2], &w[2])]);
        raw.iter().map(|&x| ctx.mul(mu, x)).collect()
    };
    let (w1, w2, w3) = (vector(c1), vector(c2), vector(c3));
    debug_assert_eq!(w1[2], lambda);
    debug_assert_eq!(w2[2], omega);
    debug_assert_eq!(w3[2], ctx.one());
    let transform = Stabiliser::new(
        ctx,
        [
            [
                ctx.sub(w1[0], ctx.mul(lambda, w3[0])),
                ctx.sub(w1[1], ctx.mul(lambda, w3[1])),
                0,
            ],
            [
                ctx.sub(w2[0], ctx.mul(omega, w3[0])),
                ctx.sub(w2[1], ctx.mul(omega, w3[1])),
                0,
            ],
            [w3[0], w3[1], ctx.one()],
        ],
    )?;
    let canonical = subplane_canonical(ctx, level, omega, lambda)?;
    debug_assert_eq!(
        &canonical.transformed(ctx, &transform),
        pl,
        "reduction round trip"
    );
    Ok(ReducedSubplane {
        transform,
        omega,
        lambda,
        canonical,
    })
}

/// Degree over `F_q` of the canonical `ω`-parameter of a tangent subplane.
pub fn subplane_smallest_containing_degree(ctx: &FieldCtx, pl: &Subplane) -> Result<u8> {
    if pl.classify() != LinftyClass::Tangent {
        return Err(Error::InvalidArgument(
            "the containing degree is defined for tangent subplanes".into(),
        ));
    }
    let red = reduce_subplane(ctx, pl)?;
    debug_assert_eq!(red.lambda, 0, "tangent subplanes reduce to λ = 0");
    Ok(ctx.subfield_degree(red.omega))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn f9() -> FieldCtx {
        FieldCtx::new(3, 1, 2).unwrap()
    }

    #[test]
    fn canonical_subline_point_count_and_classification() {
        let f = f9();
        for om in 0..f.size() as Elt {
            for level in [1u8, 2] {
                let s = subline_canonical(&f, level, om).unwrap();
                assert_eq!(s.points().len(), 3usize.pow(level as u32) + 1);
                let expect = if f.in_subfield(om, level) {
                    LinftyClass::Tangent
                } else {
                    LinftyClass::External
                };
                assert_eq!(s.classify(), expect, "tangency iff ω lies in the subfield");
            }
        }
    }

    #[test]
    fn fourth_point_of_frozen_subline_matches_independent_computation() {
        // brute-forced externally: the F_3-subline of PG(2, 9) through
        // (1,0,0), (0,0,1), (1,0,θ) also contains (1,0,2θ) and nothing else
        let f = f9();
        let theta = 1 as Elt;
        let one = f.one();
        let p1 = Point::new(&f, 2, vec![one, 0, 0]).unwrap();
        let p2 = Point::new(&f, 2, vec![0, 0, one]).unwrap();
        let p3 = Point::new(&f, 2, vec![one, 0, theta]).unwrap();
        let s = subline_through(&f, 1, &p1, &p2, &p3).unwrap();
        let fourth = Point::new(&f, 2, vec![one, 0, f.mul(f.add(one, one), theta)]).unwrap();
        let expect: std::collections::BTreeSet<_> =
            [p1, p2, p3, fourth].into_iter().collect();
        let got: std::collections::BTreeSet<_> = s.points().iter().cloned().collect();
        assert_eq!(got, expect, "frozen fourth point (1, 0, 2θ)");
    }

    #[test]
    fn subline_through_is_permutation_invariant_and_reproduces_canonical() {
        let f = f9();
        let om = 5 as Elt;
        let s = subline_canonical(&f, 1, om).unwrap();
        let pts = s.points();
        let tri = [&pts[0], &pts[2], &pts[3]];
        let perms = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        for perm in perms {
            let t = subline_through(&f, 1, tri[perm[0]], tri[perm[1]], tri[perm[2]]).unwrap();
            assert_eq!(t, s, "any three points recover the subline, in any order");
        }
    }

    #[test]
    fn sublines_of_a_level2_subline_lie_inside_it() {
        let f = FieldCtx::new(3, 1, 4).unwrap();
        let s = subline_canonical(&f, 2, 1).unwrap();
        assert_eq!(s.points().len(), 10);
        let pts = s.points();
        for tri in [[0usize, 1, 4], [2, 5, 9], [0, 3, 7]] {
            let inner = subline_through(&f, 1, &pts[tri[0]], &pts[tri[1]], &pts[tri[2]]).unwrap();
            assert_eq!(inner.points().len(), 4);
            for p in inner.points() {
                assert!(
                    s.contains(p),
                    "the level-1 subline through three points of a level-2 subline stays inside"
                );
            }
        }
    }

    #[test]
    fn reduction_round_trips_random_sublines() {
        let f = f9();
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let mut seen_external = false;
        let mut seen_tangent = false;
        for trial in 0..40 {
            let x = Stabiliser::random(&f, &mut rng);
            let om = (trial % f.size() as usize) as Elt;
            let s = subline_canonical(&f, 1, om).unwrap().transformed(&f, &x);
            let red = reduce_subline(&f, &s).unwrap();
            assert_eq!(
                red.canonical.transformed(&f, &red.transform),
                s,
                "χ₀ image of the canonical subline is the input"
            );
            match s.classify() {
                LinftyClass::Tangent => {
                    assert_eq!(red.omega, 0, "tangent sublines reduce to ω = 0");
                    seen_tangent = true;
                }
                LinftyClass::External => {
                    assert!(
                        !f.in_subfield(red.omega, 1),
                        "external sublines keep ω outside the subfield"
                    );
                    seen_external = true;
                }
                other => panic!("unexpected class {other:?}"),
            }
            assert_eq!(
                f.subfield_degree(red.omega),
                subline_smallest_containing_degree(&f, &s).unwrap()
            );
        }
        assert!(seen_external && seen_tangent, "both classes exercised");
    }

    #[test]
    fn contained_subline_classifies_but_does_not_reduce() {
        let f = f9();
        let one = f.one();
        let s = Subline::from_basis(&f, 1, vec![one, 0, 0], vec![0, one, 0]).unwrap();
        assert_eq!(s.classify(), LinftyClass::Contained);
        assert!(reduce_subline(&f, &s).is_err(), "no canonical form inside z = 0");
    }

    #[test]
    fn canonical_subplane_classification_matches_parameter_shape() {
        let f = f9();
        let theta = 1 as Elt;
        assert_eq!(
            subplane_canonical(&f, 1, 0, 0).unwrap().classify(),
            LinftyClass::Secant,
            "π_{{0,0}} contains (1,0,0) and (0,1,0)"
        );
        assert_eq!(
            subplane_canonical(&f, 1, theta, 0).unwrap().classify(),
            LinftyClass::Tangent,
            "π_{{ω,0}} with ω outside F_3 is tangent at (1,0,0)"
        );
        // {1, λ, ω} must be F_3-independent for an external subplane; over
        // F_9 the module has dimension at most 2, so κ = 3 needs a bigger n
        let f27 = FieldCtx::new(3, 1, 3).unwrap();
        let th = 1 as Elt;
        let th2 = f27.mul(th, th);
        let pl = subplane_canonical(&f27, 1, th, th2).unwrap();
        assert_eq!(pl.classify(), LinftyClass::External);
        assert_eq!(pl.points().len(), 13);
    }

    #[test]
    fn every_line_of_a_subplane_meets_it_in_a_subline_count() {
        let f = f9();
        let pl = subplane_canonical(&f, 1, 1, 0).unwrap();
        let pts = pl.points();
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                let carrier = Subspace::span(
                    &f,
                    f.n(),
                    3,
                    &[pts[i].coords().to_vec(), pts[j].coords().to_vec()],
                );
                let on = pts.iter().filter(|p| carrier.contains(&f, p)).count();
                assert_eq!(on, 4, "each line of the subplane carries q + 1 of its points");
            }
        }
    }

    #[test]
    fn subplane_through_four_points_is_permutation_invariant() {
        let f = f9();
        let pl = subplane_canonical(&f, 1, 1, 0).unwrap();
        let pts = pl.points();
        // four points of the subplane in general position
        let mut quad = None;
        'search: for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                for k in (j + 1)..pts.len() {
                    for l in (k + 1)..pts.len() {
                        let cand = [&pts[i], &pts[j], &pts[k], &pts[l]];
                        if subplane_through(&f, 1, cand).is_ok() {
                            quad = Some([i, j, k, l]);
                            break 'search;
                        }
                    }
                }
            }
        }
        let [i, j, k, l] = quad.expect("a subplane contains a quadrilateral");
        let base = subplane_through(&f, 1, [&pts[i], &pts[j], &pts[k], &pts[l]]).unwrap();
        assert_eq!(base, pl, "four general-position points recover the subplane");
        let reord = subplane_through(&f, 1, [&pts[l], &pts[j], &pts[i], &pts[k]]).unwrap();
        assert_eq!(reord, pl, "order of the quadrilateral does not matter");
    }

    #[test]
    fn reduction_round_trips_random_subplanes_of_every_class() {
        let f27 = FieldCtx::new(3, 1, 3).unwrap();
        let th = 1 as Elt;
        let th2 = f27.mul(th, th);
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let shapes = [(0, 0), (th, 0), (th, th2)];
        for (om, lam) in shapes {
            for _ in 0..10 {
                let x = Stabiliser::random(&f27, &mut rng);
                let pl = subplane_canonical(&f27, 1, om, lam)
                    .unwrap()
                    .transformed(&f27, &x);
                let red = reduce_subplane(&f27, &pl).unwrap();
                assert_eq!(
                    red.canonical.transformed(&f27, &red.transform),
                    pl,
                    "χ₀ image of the canonical subplane is the input"
                );
                match pl.classify() {
                    LinftyClass::Secant => {
                        assert_eq!((red.lambda, red.omega), (0, 0));
                    }
                    LinftyClass::Tangent => {
                        assert_eq!(red.lambda, 0);
                        assert!(!f27.in_subfield(red.omega, 1));
                    }
                    LinftyClass::External => {
                        assert!(!f27.in_subfield(red.lambda, 1));
                    }
                    LinftyClass::Contained => unreachable!("subplanes are never contained"),
                }
                let m = red.transform.matrix();
                assert_eq!(
                    [m[0][2], m[1][2], m[2][2]],
                    [0, 0, f27.one()],
                    "the returned matrix stabilises z = 0"
                );
            }
        }
    }

    #[test]
    fn tangent_subplane_containing_degree_matches_parameter_degree() {
        let f27 = FieldCtx::new(3, 1, 3).unwrap();
        let th = 1 as Elt;
        let pl = subplane_canonical(&f27, 1, th, 0).unwrap();
        assert_eq!(subplane_smallest_containing_degree(&f27, &pl).unwrap(), 3);
        let secant = subplane_canonical(&f27, 1, 0, 0).unwrap();
        assert!(
            subplane_smallest_containing_degree(&f27, &secant).is_err(),
            "defined only for tangent subplanes"
        );
    }
}
