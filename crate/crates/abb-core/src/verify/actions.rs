//! Check routine for L1.1: the stabiliser's three induced actions are
//! compatible with the point correspondence, the embedding, and the
//! semilinear generator, and they permute the spread and every subspread
//! family.

use serde_json::json;

use crate::abb::{
    abb_map, embed_iota, plane_affine_points, plane_infinite_points, sigma_apply, PhiImage,
    Stabiliser,
};
use crate::error::Result;
use crate::gf::FieldCtx;
use crate::proj::Point;
use crate::spread::SpreadElt;

use super::support;
use super::{CheckParams, Tally};

pub(super) fn check_l1_1(ctx: &FieldCtx, params: &CheckParams, tally: &mut Tally) -> Result<()> {
    let affine = plane_affine_points(ctx);
    let infinite = plane_infinite_points(ctx);
    let levels = support::divisors(ctx.n());

    // All points of the embedded subgeometry: the affine images together
    // with the spread's partition of the hyperplane at infinity.
    let mut subgeometry: Vec<Point> = affine
        .iter()
        .map(|p| support::phi_affine(ctx, p))
        .collect::<Result<Vec<_>>>()?;
    for t in &infinite {
        match abb_map(ctx, t)? {
            PhiImage::Spread(e) => subgeometry.extend(e.points(ctx)),
            PhiImage::Affine(_) => unreachable!("infinite points map to the spread"),
        }
    }

    for sample in 0..params.samples {
        let mut rng = support::stream_rng(params.seed, params.statement.index(), params.k, sample);
        let x = Stabiliser::random(ctx, &mut rng);
        let mut failed: Option<(&'static str, serde_json::Value)> = None;

        // The correspondence intertwines the plane action with the induced
        // action: affine points through the point map, infinite points
        // through the spread map.
        for p in &affine {
            let image = support::phi_affine(ctx, &x.chi0(ctx, p))?;
            let direct = x.chi(ctx, &support::phi_affine(ctx, p)?);
            if image != direct {
                failed = Some(("affine correspondence", support::wpoint(ctx, p)));
                break;
            }
        }
        if failed.is_none() {
            for t in &infinite {
                let image = match abb_map(ctx, &x.chi0(ctx, t))? {
                    PhiImage::Spread(e) => e,
                    PhiImage::Affine(_) => unreachable!("infinite points map to the spread"),
                };
                let direct = match abb_map(ctx, t)? {
                    PhiImage::Spread(e) => x.chi_spread(ctx, &e),
                    PhiImage::Affine(_) => unreachable!("infinite points map to the spread"),
                };
                if image != direct {
                    failed = Some(("spread correspondence", support::wpoint(ctx, t)));
                    break;
                }
            }
        }

        // The embedding intertwines the induced action with its semilinear
        // closure on every point of the embedded subgeometry.  (The plane
        // action itself does not lift through coordinate conjugation: plane
        // representatives are only defined up to top-field scalars.)
        if failed.is_none() {
            for s in &subgeometry {
                let lifted = embed_iota(ctx, &x.chi(ctx, s))?;
                let closed = x.chi_star(ctx, &embed_iota(ctx, s)?);
                if lifted != closed {
                    failed = Some(("embedding", support::wpoint(ctx, s)));
                    break;
                }
            }
        }

        // The closure commutes with the semilinear generator.
        if failed.is_none() {
            for _ in 0..20 {
                let p = support::random_star_point(ctx, &mut rng);
                if sigma_apply(ctx, &x.chi_star(ctx, &p)) != x.chi_star(ctx, &sigma_apply(ctx, &p))
                {
                    failed = Some(("semilinear commutation", support::wpoint(ctx, &p)));
                    break;
                }
            }
        }

        // Every subspread family is permuted, pointwise: the parametrised
        // image element equals the set image of the element.
        if failed.is_none() {
            'outer: for &k in &levels {
                for _ in 0..3 {
                    let e = support::random_spread_elt(ctx, &mut rng, k);
                    let image = x.chi_spread(ctx, &e);
                    let mapped: Vec<Point> = {
                        let mut v: Vec<Point> =
                            e.points(ctx).iter().map(|p| x.chi(ctx, p)).collect();
                        v.sort();
                        v
                    };
                    let mut target = image.points(ctx);
                    target.sort();
                    if mapped != target {
                        failed = Some((
                            "subspread family",
                            json!({
                                "level": k,
                                "element": [support::welt(ctx, e.a), support::welt(ctx, e.b)],
                            }),
                        ));
                        break 'outer;
                    }
                }
            }
        }

        tally.case(failed.is_none(), || {
            let (leg, detail) = failed.expect("witness built only on failure");
            json!({
                "sample": sample,
                "leg": leg,
                "stabiliser": support::wstab(ctx, &x),
                "detail": detail,
            })
        });
    }

    // Run-level fact: the identity acts trivially everywhere it should.
    let id = Stabiliser::identity(ctx);
    let fixed = affine
        .iter()
        .all(|p| id.chi0(ctx, p) == *p && {
            let s = support::phi_affine(ctx, p).expect("affine image");
            id.chi(ctx, &s) == s
        });
    tally.global_fact(fixed, || json!({"fact": "identity action is not trivial"}));

    // Run-level fact: the spread map respects composition on a fixed pair.
    let mut rng = support::stream_rng(params.seed, params.statement.index(), params.k, u32::MAX);
    let x1 = Stabiliser::random(ctx, &mut rng);
    let x2 = Stabiliser::random(ctx, &mut rng);
    let e = SpreadElt::new(ctx, ctx.one(), ctx.one(), ctx.n()).expect("nonzero pair");
    let composed = x2.chi_spread(ctx, &x1.chi_spread(ctx, &e));
    let elementwise: Vec<Point> = {
        let mut v: Vec<Point> = e
            .points(ctx)
            .iter()
            .map(|p| x2.chi(ctx, &x1.chi(ctx, p)))
            .collect();
        v.sort();
        v
    };
    let mut composed_pts = composed.points(ctx);
    composed_pts.sort();
    tally.global_fact(elementwise == composed_pts, || {
        json!({"fact": "spread action does not respect composition"})
    });

    Ok(())
}
