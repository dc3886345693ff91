//! Classification of point sets of the ambient space: recognises the images
//! of the canonical subline and subplane classes, verifying that the named
//! object reproduces the input exactly before giving a positive answer.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::abb::{flat_to_sem, plane_infinite_points, sigma_width};
use crate::error::{Error, Result};
use crate::gf::{Elt, FieldCtx};
use crate::linalg;
use crate::proj::Point;
use crate::spread::SpreadElt;
use crate::subobj::{
    subline_smallest_containing_degree, subline_through, subplane_smallest_containing_degree,
    subplane_through, LinftyClass,
};

use super::support;

/// The recognised image classes.  Each positive class carries the harness
/// statement certifying the correspondence, and a plane frame from which the
/// preimage object can be rebuilt.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "kebab-case")]
pub enum Classification {
    /// Affine points of a flat over a family element: the image of a
    /// tangent subline's affine points.
    TangentSubline {
        level: u8,
        statement: String,
        frame: Vec<Vec<Elt>>,
    },
    /// A rational normal curve's worth of points: the image of an external
    /// subline, closing up at the stated degree.
    ExternalSubline {
        level: u8,
        closure_degree: u8,
        statement: String,
        frame: Vec<Vec<Elt>>,
    },
    /// A union of family members: the blow-up of a subline inside the line
    /// at infinity.
    ContainedSubline {
        level: u8,
        statement: String,
        frame: Vec<Vec<Elt>>,
    },
    /// Affine points of a spanned flat meeting the family in a subline's
    /// worth of members: the image of a secant subplane.
    SecantSubplane {
        level: u8,
        statement: String,
        frame: Vec<Vec<Elt>>,
    },
    /// Affine points of a scroll: the image of a tangent subplane, closing
    /// up at the stated degree.
    TangentSubplane {
        closure_degree: u8,
        statement: String,
        frame: Vec<Vec<Elt>>,
    },
    /// No canonical object reproduces the set.
    Unclassified,
}

fn coords3(p: &Point) -> Vec<Elt> {
    p.coords().to_vec()
}

fn rank3(ctx: &FieldCtx, a: &Point, b: &Point, c: &Point) -> bool {
    linalg::rank(
        ctx,
        &[
            a.coords().to_vec(),
            b.coords().to_vec(),
            c.coords().to_vec(),
        ],
    ) == 3
}

/// The point at infinity of the plane line through two affine points.
fn line_infinite_point(ctx: &FieldCtx, w1: &Point, w2: &Point) -> Result<Point> {
    let a = w1.coords();
    let b = w2.coords();
    let v: Vec<Elt> = (0..3)
        .map(|i| ctx.sub(ctx.mul(b[2], a[i]), ctx.mul(a[2], b[i])))
        .collect();
    Point::new(ctx, ctx.n(), v)
}

/// Decides which canonical object's image a set of points of the ambient
/// space is.  Points must be pairwise distinct, over the base subfield, and
/// of the full model width; the answer is [`Classification::Unclassified`]
/// whenever no object reproduces the set exactly.
pub fn classify_point_set(ctx: &FieldCtx, pts: &[Point]) -> Result<Classification> {
    let w = sigma_width(ctx);
    if pts.is_empty() {
        return Err(Error::InvalidArgument("empty point set".into()));
    }
    for p in pts {
        if p.level != 1 || p.coords().len() != w {
            return Err(Error::InvalidArgument(
                "classification expects base-subfield points of the full model width".into(),
            ));
        }
    }
    let mut sorted: Vec<Point> = pts.to_vec();
    sorted.sort();
    if sorted.windows(2).any(|v| v[0] == v[1]) {
        return Err(Error::InvalidArgument("repeated point".into()));
    }
    let infinite = sorted.iter().filter(|p| p.coords()[w - 1] == 0).count();
    if infinite == sorted.len() {
        return classify_infinite(ctx, &sorted);
    }
    if infinite > 0 {
        return Ok(Classification::Unclassified);
    }
    classify_affine(ctx, &sorted)
}

/// Recognises unions of family members carried by a subline of the line at
/// infinity.
fn classify_infinite(ctx: &FieldCtx, pts: &[Point]) -> Result<Classification> {
    let q = ctx.q() as usize;
    let mut members: BTreeSet<SpreadElt> = BTreeSet::new();
    for p in pts {
        let [a, b, _] = flat_to_sem(ctx, p.coords())?;
        members.insert(SpreadElt::new(ctx, a, b, ctx.n())?);
    }
    for k in support::divisors(ctx.n()) {
        if members.len() != q.pow(u32::from(k)) + 1 {
            continue;
        }
        let dirs: Vec<Point> = members.iter().map(|m| m.plane_preimage(ctx)).collect();
        let Ok(m) = subline_through(ctx, k, &dirs[0], &dirs[1], &dirs[2]) else {
            continue;
        };
        if m.classify() != LinftyClass::Contained
            || m.points().len() != dirs.len()
            || !dirs.iter().all(|d| m.contains(d))
        {
            continue;
        }
        let mut union: BTreeSet<Point> = BTreeSet::new();
        for e in &members {
            union.extend(e.points(ctx));
        }
        if union.len() == pts.len() && pts.iter().all(|p| union.contains(p)) {
            return Ok(Classification::ContainedSubline {
                level: k,
                statement: "T2.10".into(),
                frame: dirs.iter().take(3).map(coords3).collect(),
            });
        }
    }
    Ok(Classification::Unclassified)
}

/// Recognises the affine image classes, trying each size-compatible object.
fn classify_affine(ctx: &FieldCtx, pts: &[Point]) -> Result<Classification> {
    let q = ctx.q() as usize;
    let mut preimages: Vec<Point> = Vec::with_capacity(pts.len());
    for p in pts {
        preimages.push(support::affine_preimage(ctx, p)?);
    }
    preimages.sort();
    let len = pts.len();
    for k in support::divisors(ctx.n()) {
        let qk = q.pow(u32::from(k));
        if len == qk {
            if let Some(c) = tangent_subline_at(ctx, &preimages, k)? {
                return Ok(c);
            }
        }
        if len == qk + 1 {
            if let Some(c) = external_subline_at(ctx, &preimages, k)? {
                return Ok(c);
            }
        }
        if len == qk * qk {
            if let Some(c) = secant_subplane_at(ctx, &preimages, k)? {
                return Ok(c);
            }
        }
    }
    if len == q * q + q {
        if let Some(c) = tangent_subplane_at(ctx, &preimages)? {
            return Ok(c);
        }
    }
    Ok(Classification::Unclassified)
}

fn tangent_subline_at(
    ctx: &FieldCtx,
    preimages: &[Point],
    k: u8,
) -> Result<Option<Classification>> {
    let rows: Vec<Vec<Elt>> = preimages.iter().map(|p| p.coords().to_vec()).collect();
    if linalg::rank(ctx, &rows) != 2 {
        return Ok(None);
    }
    let t = line_infinite_point(ctx, &preimages[0], &preimages[1])?;
    let Ok(m) = subline_through(ctx, k, &t, &preimages[0], &preimages[1]) else {
        return Ok(None);
    };
    if m.classify() != LinftyClass::Tangent {
        return Ok(None);
    }
    let mut expected: Vec<Point> = preimages.to_vec();
    expected.push(t.clone());
    expected.sort();
    if m.points() != expected.as_slice() {
        return Ok(None);
    }
    Ok(Some(Classification::TangentSubline {
        level: k,
        statement: "T2.3".into(),
        frame: vec![
            coords3(&t),
            coords3(&preimages[0]),
            coords3(&preimages[1]),
        ],
    }))
}

fn external_subline_at(
    ctx: &FieldCtx,
    preimages: &[Point],
    k: u8,
) -> Result<Option<Classification>> {
    let rows: Vec<Vec<Elt>> = preimages.iter().map(|p| p.coords().to_vec()).collect();
    if linalg::rank(ctx, &rows) != 2 {
        return Ok(None);
    }
    let Ok(m) = subline_through(ctx, k, &preimages[0], &preimages[1], &preimages[2]) else {
        return Ok(None);
    };
    if m.classify() != LinftyClass::External || m.points() != preimages {
        return Ok(None);
    }
    let closure = subline_smallest_containing_degree(ctx, &m)?;
    Ok(Some(Classification::ExternalSubline {
        level: k,
        closure_degree: closure,
        statement: if k == 1 { "T2.6".into() } else { "C2.7".into() },
        frame: preimages.iter().take(3).map(coords3).collect(),
    }))
}

fn secant_subplane_at(
    ctx: &FieldCtx,
    preimages: &[Point],
    k: u8,
) -> Result<Option<Classification>> {
    let Some(idx) = support::frame_indices(ctx, preimages) else {
        return Ok(None);
    };
    let frame = [
        &preimages[idx[0]],
        &preimages[idx[1]],
        &preimages[idx[2]],
        &preimages[idx[3]],
    ];
    let Ok(pl) = subplane_through(ctx, k, frame) else {
        return Ok(None);
    };
    if pl.classify() != LinftyClass::Secant {
        return Ok(None);
    }
    let affine: Vec<Point> = pl
        .points()
        .iter()
        .filter(|p| p.coords()[2] != 0)
        .cloned()
        .collect();
    if affine != preimages {
        return Ok(None);
    }
    Ok(Some(Classification::SecantSubplane {
        level: k,
        statement: "T3.1".into(),
        frame: frame.iter().map(|p| coords3(p)).collect(),
    }))
}

fn tangent_subplane_at(ctx: &FieldCtx, preimages: &[Point]) -> Result<Option<Classification>> {
    let w1 = &preimages[0];
    for t in plane_infinite_points(ctx) {
        let Some(w2) = preimages.iter().find(|p| rank3(ctx, &t, w1, p)) else {
            continue;
        };
        let Some(x) = preimages
            .iter()
            .find(|p| rank3(ctx, &t, w1, p) && rank3(ctx, &t, w2, p) && rank3(ctx, w1, w2, p))
        else {
            continue;
        };
        let Ok(pl) = subplane_through(ctx, 1, [&t, w1, w2, x]) else {
            continue;
        };
        if pl.classify() != LinftyClass::Tangent {
            continue;
        }
        let affine: Vec<Point> = pl
            .points()
            .iter()
            .filter(|p| p.coords()[2] != 0)
            .cloned()
            .collect();
        if affine != preimages {
            continue;
        }
        let closure = subplane_smallest_containing_degree(ctx, &pl)?;
        return Ok(Some(Classification::TangentSubplane {
            closure_degree: closure,
            statement: "T3.5".into(),
            frame: vec![coords3(&t), coords3(w1), coords3(w2), coords3(x)],
        }));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abb::plane_point;
    use crate::subobj::{subline_canonical, subplane_canonical};

    fn images_of(ctx: &FieldCtx, pts: &[Point]) -> Vec<Point> {
        pts.iter()
            .filter(|p| p.coords()[2] != 0)
            .map(|p| support::phi_affine(ctx, p).expect("affine image"))
            .collect()
    }

    #[test]
    fn canonical_subline_images_are_recognised() {
        let f = FieldCtx::new(3, 1, 2).expect("field tower");
        let tangent = subline_canonical(&f, 1, 0).expect("subline");
        match classify_point_set(&f, &images_of(&f, tangent.points())).expect("classification") {
            Classification::TangentSubline { level, statement, .. } => {
                assert_eq!(level, 1, "a base-level flat");
                assert_eq!(statement, "T2.3", "certified by the flat statement");
            }
            other => panic!("expected a tangent subline image, got {other:?}"),
        }

        let omega = support::min_degree_elt(&f, 2).expect("a degree-2 element");
        let external = subline_canonical(&f, 1, omega).expect("subline");
        match classify_point_set(&f, &images_of(&f, external.points())).expect("classification") {
            Classification::ExternalSubline {
                level,
                closure_degree,
                ..
            } => {
                assert_eq!(level, 1, "a base-level curve");
                assert_eq!(closure_degree, 2, "the generator has degree 2");
            }
            other => panic!("expected an external subline image, got {other:?}"),
        }
    }

    #[test]
    fn a_member_union_is_a_contained_subline_image() {
        let f = FieldCtx::new(3, 1, 2).expect("field tower");
        let one = f.one();
        let d1 = plane_point(&f, one, 0, 0).expect("direction");
        let d2 = plane_point(&f, 0, one, 0).expect("direction");
        let d3 = plane_point(&f, one, one, 0).expect("direction");
        let m = subline_through(&f, 1, &d1, &d2, &d3).expect("subline");
        let mut pts: Vec<Point> = Vec::new();
        for d in m.points() {
            let c = d.coords();
            let e = SpreadElt::new(&f, c[0], c[1], 2).expect("member");
            pts.extend(e.points(&f));
        }
        match classify_point_set(&f, &pts).expect("classification") {
            Classification::ContainedSubline { level, statement, .. } => {
                assert_eq!(level, 1, "a base-level subline at infinity");
                assert_eq!(statement, "T2.10", "certified by the selection statement");
            }
            other => panic!("expected a contained subline image, got {other:?}"),
        }
    }

    #[test]
    fn subplane_images_are_recognised() {
        let f2 = FieldCtx::new(3, 1, 2).expect("field tower");
        let secant = subplane_canonical(&f2, 1, 0, 0).expect("subplane");
        match classify_point_set(&f2, &images_of(&f2, secant.points())).expect("classification")
        {
            Classification::SecantSubplane { level, .. } => {
                assert_eq!(level, 1, "a base-level spanned flat");
            }
            other => panic!("expected a secant subplane image, got {other:?}"),
        }

        let f3 = FieldCtx::new(3, 1, 3).expect("field tower");
        let omega = support::min_degree_elt(&f3, 3).expect("a degree-3 element");
        let tangent = subplane_canonical(&f3, 1, omega, 0).expect("subplane");
        match classify_point_set(&f3, &images_of(&f3, tangent.points())).expect("classification")
        {
            Classification::TangentSubplane { closure_degree, .. } => {
                assert_eq!(closure_degree, 3, "the generator has degree 3");
            }
            other => panic!("expected a tangent subplane image, got {other:?}"),
        }
    }

    #[test]
    fn unstructured_sets_stay_unclassified() {
        let f = FieldCtx::new(3, 1, 2).expect("field tower");
        let one = f.one();
        // Three non-collinear affine images: no object has three points.
        let pts = vec![
            support::phi_affine(&f, &plane_point(&f, 0, 0, one).expect("point")).expect("image"),
            support::phi_affine(&f, &plane_point(&f, one, one, one).expect("point"))
                .expect("image"),
            support::phi_affine(&f, &plane_point(&f, one, 0, one).expect("point"))
                .expect("image"),
        ];
        assert_eq!(
            classify_point_set(&f, &pts).expect("classification"),
            Classification::Unclassified,
            "a triangle of images should stay unclassified"
        );

        // A mix of affine and infinite points is never a single class.
        let mut mixed = pts.clone();
        mixed.push(
            SpreadElt::new(&f, one, 0, 2)
                .expect("member")
                .points(&f)
                .remove(0),
        );
        assert_eq!(
            classify_point_set(&f, &mixed).expect("classification"),
            Classification::Unclassified,
            "mixed sets should stay unclassified"
        );

        // Repetitions are an input error, not a classification.
        let doubled = vec![pts[0].clone(), pts[0].clone()];
        assert!(
            classify_point_set(&f, &doubled).is_err(),
            "repeated points should be rejected"
        );
    }
}
