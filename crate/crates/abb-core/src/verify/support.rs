//! Shared helpers for the check routines: seeded sampling, curve
//! transport, point-set curve recovery, and spread recognition.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde_json::json;

use crate::abb::{
    abb_map, embed_iota, flat_to_sem, h_inf, plane_point, sem_to_flat, sigma_apply, sigma_width,
    PhiImage, Stabiliser,
};
use crate::curves::{extend_curve, for_each_combination, indicator_intersection, nrc_through, Curve};
use crate::error::{Error, Result};
use crate::gf::{Elt, FieldCtx};
use crate::linalg;
use crate::proj::{Point, Subspace};
use crate::spread::SpreadElt;

// ----------------------------------------------------------------- basics

/// Divisors of `n` in increasing order.
pub(crate) fn divisors(n: u8) -> Vec<u8> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Per-sample random stream: one independent stream per
/// `(statement, level, sample)` triple under a shared seed, so check
/// results do not depend on evaluation order.
pub(crate) fn stream_rng(seed: u64, statement: usize, k: u8, sample: u32) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(((statement as u64) << 40) | ((k as u64) << 32) | sample as u64);
    rng
}

pub(crate) fn random_elt(ctx: &FieldCtx, rng: &mut impl Rng) -> Elt {
    rng.gen_range(0..ctx.size() as u32) as Elt
}

pub(crate) fn random_nonzero(ctx: &FieldCtx, rng: &mut impl Rng) -> Elt {
    loop {
        let x = random_elt(ctx, rng);
        if x != 0 {
            return x;
        }
    }
}

/// Uniform element of exact degree `d` over the base field.
pub(crate) fn random_elt_of_degree(ctx: &FieldCtx, rng: &mut impl Rng, d: u8) -> Result<Elt> {
    let sub = ctx.enumerate_subfield(d)?;
    loop {
        let x = sub[rng.gen_range(0..sub.len())];
        if ctx.subfield_degree(x) == d {
            return Ok(x);
        }
    }
}

/// The lexicographically first element of exact degree `d`.
pub(crate) fn min_degree_elt(ctx: &FieldCtx, d: u8) -> Result<Elt> {
    ctx.enumerate_subfield(d)?
        .iter()
        .copied()
        .find(|&x| ctx.subfield_degree(x) == d)
        .ok_or_else(|| Error::InvalidArgument(format!("no element of exact degree {d}")))
}

pub(crate) fn random_affine_plane_point(ctx: &FieldCtx, rng: &mut impl Rng) -> Point {
    let a = random_elt(ctx, rng);
    let b = random_elt(ctx, rng);
    plane_point(ctx, a, b, ctx.one()).expect("affine plane point is nonzero")
}

pub(crate) fn random_infinite_plane_point(ctx: &FieldCtx, rng: &mut impl Rng) -> Point {
    loop {
        let a = random_elt(ctx, rng);
        let b = random_elt(ctx, rng);
        if a != 0 || b != 0 {
            return plane_point(ctx, a, b, 0).expect("nonzero pair");
        }
    }
}

pub(crate) fn random_plane_point(ctx: &FieldCtx, rng: &mut impl Rng) -> Point {
    loop {
        let a = random_elt(ctx, rng);
        let b = random_elt(ctx, rng);
        let c = random_elt(ctx, rng);
        if a != 0 || b != 0 || c != 0 {
            return plane_point(ctx, a, b, c).expect("nonzero triple");
        }
    }
}

/// Random point of the carrier of the extended representation.
pub(crate) fn random_star_point(ctx: &FieldCtx, rng: &mut impl Rng) -> Point {
    let w = sigma_width(ctx);
    loop {
        let v: Vec<Elt> = (0..w).map(|_| random_elt(ctx, rng)).collect();
        if v.iter().any(|&x| x != 0) {
            return Point::new(ctx, ctx.n(), v).expect("nonzero vector");
        }
    }
}

/// Random affine point of the base representation (last coordinate 1).
pub(crate) fn random_affine_sigma_point(ctx: &FieldCtx, rng: &mut impl Rng) -> Point {
    let w = sigma_width(ctx);
    let q = ctx.q() as u32;
    let mut v: Vec<Elt> = (0..w - 1)
        .map(|_| ctx.from_residue(rng.gen_range(0..q) as u16))
        .collect();
    v.push(ctx.one());
    Point::new(ctx, 1, v).expect("affine vector is nonzero")
}

pub(crate) fn random_spread_elt(ctx: &FieldCtx, rng: &mut impl Rng, level: u8) -> SpreadElt {
    loop {
        let a = random_elt(ctx, rng);
        let b = random_elt(ctx, rng);
        if a != 0 || b != 0 {
            return SpreadElt::new(ctx, a, b, level).expect("nonzero pair");
        }
    }
}

/// Four plane points in general position.
pub(crate) fn random_plane_frame(ctx: &FieldCtx, rng: &mut impl Rng) -> [Point; 4] {
    loop {
        let pts = [
            random_plane_point(ctx, rng),
            random_plane_point(ctx, rng),
            random_plane_point(ctx, rng),
            random_plane_point(ctx, rng),
        ];
        let rows: Vec<Vec<Elt>> = pts.iter().map(|p| p.coords().to_vec()).collect();
        let general = for_each_combination(4, 3, |idx| {
            linalg::rank(
                ctx,
                &[rows[idx[0]].clone(), rows[idx[1]].clone(), rows[idx[2]].clone()],
            ) == 3
        });
        if general {
            return pts;
        }
    }
}

/// Greedy frame (four points, no three collinear) from a point list.
pub(crate) fn frame_indices(ctx: &FieldCtx, pts: &[Point]) -> Option<[usize; 4]> {
    let rank3 = |i: usize, j: usize, l: usize| -> bool {
        linalg::rank(
            ctx,
            &[
                pts[i].coords().to_vec(),
                pts[j].coords().to_vec(),
                pts[l].coords().to_vec(),
            ],
        ) == 3
    };
    let i0 = 0;
    let i1 = (1..pts.len()).find(|&i| {
        linalg::rank(ctx, &[pts[i0].coords().to_vec(), pts[i].coords().to_vec()]) == 2
    })?;
    let i2 = (i1 + 1..pts.len()).find(|&i| rank3(i0, i1, i))?;
    let i3 = (1..pts.len())
        .find(|&i| i != i1 && i != i2 && rank3(i0, i1, i) && rank3(i0, i2, i) && rank3(i1, i2, i))?;
    Some([i0, i1, i2, i3])
}

// ------------------------------------------------------------- vector ops

pub(crate) fn scale_vec(ctx: &FieldCtx, lambda: Elt, v: &[Elt]) -> Vec<Elt> {
    v.iter().map(|&x| ctx.mul(lambda, x)).collect()
}

pub(crate) fn add_vecs(ctx: &FieldCtx, a: &[Elt], b: &[Elt]) -> Vec<Elt> {
    a.iter().zip(b).map(|(&x, &y)| ctx.add(x, y)).collect()
}

pub(crate) fn sub_vecs(ctx: &FieldCtx, a: &[Elt], b: &[Elt]) -> Vec<Elt> {
    a.iter().zip(b).map(|(&x, &y)| ctx.sub(x, y)).collect()
}

/// Applies the semilinear generator `i` times.
pub(crate) fn sigma_iter(ctx: &FieldCtx, pt: &Point, i: u8) -> Point {
    let mut out = pt.clone();
    for _ in 0..i {
        out = sigma_apply(ctx, &out);
    }
    out
}

// ------------------------------------------------------- maps and images

/// Image of an affine plane point in the base representation.
pub(crate) fn phi_affine(ctx: &FieldCtx, plane_pt: &Point) -> Result<Point> {
    match abb_map(ctx, plane_pt)? {
        PhiImage::Affine(p) => Ok(p),
        PhiImage::Spread(_) => Err(Error::InvalidArgument(
            "expected an affine plane point".into(),
        )),
    }
}

/// Plane preimage of an affine point of the base representation.
pub(crate) fn affine_preimage(ctx: &FieldCtx, p: &Point) -> Result<Point> {
    let [a, b, c] = flat_to_sem(ctx, p.coords())?;
    if c == 0 {
        return Err(Error::InvalidArgument(
            "a point at infinity has no affine preimage".into(),
        ));
    }
    Point::new(ctx, ctx.n(), vec![a, b, c])
}

/// Affine points (nonzero last coordinate) of a base-representation
/// subspace.
pub(crate) fn affine_points(ctx: &FieldCtx, sub: &Subspace) -> Vec<Point> {
    let last = sub.width - 1;
    sub.points(ctx)
        .into_iter()
        .filter(|p| p.coords()[last] != 0)
        .collect()
}

/// Recognises a subspace as a level-`k` subspread element.
pub(crate) fn trace_spread_elt(ctx: &FieldCtx, sub: &Subspace, k: u8) -> Option<SpreadElt> {
    if sub.level != 1 || sub.width != sigma_width(ctx) || sub.rank() != k as usize {
        return None;
    }
    let row = sub.rows().first()?;
    let [a, b, c] = flat_to_sem(ctx, row).ok()?;
    if c != 0 {
        return None;
    }
    let e = SpreadElt::new(ctx, a, b, k).ok()?;
    if &e.subspace(ctx) == sub {
        Some(e)
    } else {
        None
    }
}

/// Transports a base-level curve along a stabiliser: the collineation is
/// linear on coordinate vectors, so mapping the coefficient vectors maps
/// the curve parameter-wise.
pub(crate) fn chi_curve(ctx: &FieldCtx, x: &Stabiliser, c: &Curve) -> Result<Curve> {
    let mut vectors = Vec::with_capacity(c.vectors().len());
    for v in c.vectors() {
        let [a, b, cc] = flat_to_sem(ctx, v)?;
        let [a2, b2, c2] = x.act_triple(ctx, a, b, cc);
        vectors.push(sem_to_flat(ctx, a2, b2, c2)?);
    }
    Curve::new(ctx, c.degree(), vectors, c.param_level(), c.point_level())
}

/// Transports an extended curve along the semilinear closure of a
/// stabiliser.
pub(crate) fn chi_star_curve(ctx: &FieldCtx, x: &Stabiliser, c: &Curve) -> Result<Curve> {
    let vectors: Vec<Vec<Elt>> = c.vectors().iter().map(|v| x.chi_star_vec(ctx, v)).collect();
    Curve::new(ctx, c.degree(), vectors, c.param_level(), c.point_level())
}

// ----------------------------------------------------------- subspace ops

/// All rank-`r` subspaces of `space`, enumerated through point subsets.
pub(crate) fn subspaces_of_rank(ctx: &FieldCtx, space: &Subspace, r: usize) -> Vec<Subspace> {
    let pts = space.points(ctx);
    let mut out: BTreeSet<Subspace> = BTreeSet::new();
    for_each_combination(pts.len(), r, |idx| {
        let rows: Vec<Vec<Elt>> = idx.iter().map(|&i| pts[i].coords().to_vec()).collect();
        if linalg::rank(ctx, &rows) == r {
            out.insert(Subspace::span(ctx, space.level, space.width, &rows));
        }
        true
    });
    out.into_iter().collect()
}

/// Whether `lambda` lies in the `F_{q^k}`-module spanned by `1` and
/// `omega` inside the top field.
pub(crate) fn in_fq_module(ctx: &FieldCtx, lambda: Elt, omega: Elt, k: u8) -> Result<bool> {
    let basis = ctx.subfield_basis(k)?;
    let mut rows: Vec<Vec<Elt>> = Vec::with_capacity(2 * basis.len() + 1);
    for &u in &basis {
        rows.push(ctx.q_coords(u).to_vec());
        rows.push(ctx.q_coords(ctx.mul(u, omega)).to_vec());
    }
    let base_rank = linalg::rank(ctx, &rows);
    rows.push(ctx.q_coords(lambda).to_vec());
    Ok(linalg::rank(ctx, &rows) == base_rank)
}

// ---------------------------------------------------------- curve recovery

/// Every rational curve at the points' level whose point set is exactly
/// `pts`, up to reparametrisation.
///
/// Degrees up to `q - 2` are determined by interpolation.  For degrees
/// `q - 1` and `q` (supported over the base field of order 3) the
/// candidates are swept through pinned parameter assignments; this is
/// complete because any curve with this point set reparametrises to the
/// pinned assignment — three parameters can always be pinned by sharp
/// 3-transitivity, and over order 3 the parameter collineations induce the
/// full symmetric group on the four parameters.
pub(crate) fn curves_with_point_set(ctx: &FieldCtx, pts: &[Point]) -> Result<Vec<Curve>> {
    let q = ctx.q() as usize;
    let mut sorted: Vec<Point> = pts.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != q + 1 || sorted.len() != pts.len() {
        return Err(Error::InvalidArgument(
            "a curve point set has exactly q + 1 distinct points".into(),
        ));
    }
    let level = sorted[0].level;
    if sorted.iter().any(|p| p.level != level) {
        return Err(Error::InvalidArgument(
            "curve points must share one level".into(),
        ));
    }
    let rows: Vec<Vec<Elt>> = sorted.iter().map(|p| p.coords().to_vec()).collect();
    let rank = linalg::rank(ctx, &rows);
    if rank < 2 {
        return Ok(Vec::new());
    }
    let deg = rank - 1;
    let mut out: BTreeSet<Curve> = BTreeSet::new();
    if deg == 1 {
        // A degree-1 curve is a full line.
        if let Ok(c) = Curve::new(
            ctx,
            1,
            vec![rows[0].clone(), rows[1].clone()],
            level,
            level,
        ) {
            if c.points() == &sorted[..] {
                out.insert(c);
            }
        }
    } else if deg + 2 <= q {
        match nrc_through(ctx, &sorted[..deg + 3], level, level) {
            Ok(c) => {
                if c.points() == &sorted[..] {
                    out.insert(c);
                }
            }
            Err(_) => {}
        }
    } else if deg == q - 1 {
        if q != 3 {
            return Err(Error::Unsupported(format!(
                "no curve recovery sweep at degree {deg} over order {q}"
            )));
        }
        // Pin the first three points at parameters (1,0), (0,1), (1,1).
        let nz = nonzero_subfield(ctx, level)?;
        for &l1 in &nz {
            for &l2 in &nz {
                let e0 = rows[0].clone();
                let e2 = scale_vec(ctx, l1, &rows[1]);
                let e1 = sub_vecs(ctx, &sub_vecs(ctx, &scale_vec(ctx, l2, &rows[2]), &e0), &e2);
                if let Ok(c) = Curve::new(ctx, 2, vec![e0, e1, e2], level, level) {
                    if c.points() == &sorted[..] {
                        out.insert(c);
                    }
                }
            }
        }
    } else if deg == q {
        if q != 3 {
            return Err(Error::Unsupported(format!(
                "no curve recovery sweep at degree {deg} over order {q}"
            )));
        }
        // Pin all four points at the parameters (1,0), (1,u), (1,u'), (0,1)
        // in canonical order and solve the Vandermonde system for each
        // scaling of the right-hand side.
        let sub: Vec<Elt> = ctx.enumerate_subfield(level)?.to_vec();
        let mut params: Vec<(Elt, Elt)> = sub.iter().map(|&t| (ctx.one(), t)).collect();
        params.push((0, ctx.one()));
        let vmat: Vec<Vec<Elt>> = params
            .iter()
            .map(|&(s, t)| {
                (0..4)
                    .map(|d| ctx.mul(ctx.pow(s, (3 - d) as u64), ctx.pow(t, d as u64)))
                    .collect()
            })
            .collect();
        let nz = nonzero_subfield(ctx, level)?;
        for &l1 in &nz {
            for &l2 in &nz {
                for &l3 in &nz {
                    let scaled = [
                        rows[0].clone(),
                        scale_vec(ctx, l1, &rows[1]),
                        scale_vec(ctx, l2, &rows[2]),
                        scale_vec(ctx, l3, &rows[3]),
                    ];
                    let aug: Vec<Vec<Elt>> = (0..4)
                        .map(|i| {
                            let mut r = vmat[i].clone();
                            r.extend_from_slice(&scaled[i]);
                            r
                        })
                        .collect();
                    let red = linalg::rref(ctx, &aug);
                    debug_assert_eq!(red.len(), 4, "the parameter matrix is invertible");
                    let identity_head = red
                        .iter()
                        .enumerate()
                        .all(|(i, r)| (0..4).all(|j| r[j] == if i == j { ctx.one() } else { 0 }));
                    if !identity_head {
                        continue;
                    }
                    let vectors: Vec<Vec<Elt>> = red.iter().map(|r| r[4..].to_vec()).collect();
                    if let Ok(c) = Curve::new(ctx, 3, vectors, level, level) {
                        if c.points() == &sorted[..] {
                            out.insert(c);
                        }
                    }
                }
            }
        }
    }
    Ok(out.into_iter().collect())
}

pub(crate) fn nonzero_subfield(ctx: &FieldCtx, level: u8) -> Result<Vec<Elt>> {
    Ok(ctx
        .enumerate_subfield(level)?
        .iter()
        .copied()
        .filter(|&x| x != 0)
        .collect())
}

// ------------------------------------------------------- statement pieces

/// Legs shared by the external-subline image checks on an affine curve:
/// the points are affine, the span traces a subspread element at infinity,
/// and the extension meets the indicator pieces in the element's conjugate
/// generators.  Returns the name of the first failed leg.
pub(crate) fn external_curve_legs(
    ctx: &FieldCtx,
    c: &Curve,
    k: u8,
) -> Result<Option<&'static str>> {
    let w = sigma_width(ctx);
    if c.point_level() != 1 || c.width() != w {
        return Err(Error::InvalidArgument(
            "external-image legs apply to base-representation curves".into(),
        ));
    }
    if !c.points().iter().all(|p| p.coords()[w - 1] != 0) {
        return Ok(Some("curve has points at infinity"));
    }
    let span = c.span(ctx);
    if span.rank() != k as usize + 1 {
        return Ok(Some("curve span rank"));
    }
    let trace = span.meet(ctx, &h_inf(ctx));
    let elt = match trace_spread_elt(ctx, &trace, k) {
        Some(e) => e,
        None => return Ok(Some("span trace is not a subspread element")),
    };
    let cstar = extend_curve(ctx, c)?;
    let hits = indicator_intersection(ctx, &cstar, k)?;
    if hits.len() != k as usize {
        return Ok(Some("number of extension points at infinity"));
    }
    Ok(conjugate_generator_legs(ctx, &hits, k, &elt))
}

/// Legs shared by the companion-curve checks: the curve lies inside a
/// subspread element's parent member, and its extension meets the
/// indicator pieces in the element's conjugate generators.
pub(crate) fn companion_curve_legs(
    ctx: &FieldCtx,
    c: &Curve,
    k: u8,
) -> Result<Option<&'static str>> {
    let span = c.span(ctx);
    if span.rank() != k as usize {
        return Ok(Some("companion span rank"));
    }
    let elt = match trace_spread_elt(ctx, &span, k) {
        Some(e) => e,
        None => return Ok(Some("companion span is not a subspread element")),
    };
    let cstar = extend_curve(ctx, c)?;
    let hits = indicator_intersection(ctx, &cstar, k)?;
    let tagged: Vec<(Point, Option<u8>)> = hits;
    let indexed: Vec<(Point, Option<u8>)> = tagged
        .iter()
        .filter(|(_, j)| j.is_some())
        .cloned()
        .collect();
    if indexed.len() != k as usize {
        return Ok(Some("number of indicator hits"));
    }
    Ok(conjugate_generator_legs(ctx, &indexed, k, &elt))
}

/// Verifies that tagged indicator hits are `k` conjugate points in the
/// distinct pieces `0..k` generating `elt`.
pub(crate) fn conjugate_generator_legs(
    ctx: &FieldCtx,
    hits: &[(Point, Option<u8>)],
    k: u8,
    elt: &SpreadElt,
) -> Option<&'static str> {
    let mut tagged: Vec<(u8, Point)> = Vec::with_capacity(hits.len());
    for (p, j) in hits {
        match j {
            Some(j) => tagged.push((*j, p.clone())),
            None => return Some("an infinite point misses the indicator set"),
        }
    }
    tagged.sort_by_key(|(j, _)| *j);
    if tagged.len() != k as usize
        || tagged.iter().enumerate().any(|(i, (j, _))| *j != i as u8)
    {
        return Some("indicator pieces are not 0..k");
    }
    for i in 1..tagged.len() {
        if sigma_apply(ctx, &tagged[i - 1].1) != tagged[i].1 {
            return Some("hits are not a conjugate orbit");
        }
    }
    let span = Subspace::span_points(
        ctx,
        ctx.n(),
        sigma_width(ctx),
        &tagged.iter().map(|(_, p)| p.clone()).collect::<Vec<_>>(),
    );
    if span.rank() != k as usize {
        return Some("conjugate points are dependent");
    }
    for pt in elt.points(ctx) {
        let lifted = embed_iota(ctx, &pt).expect("base points lift");
        if !span.contains(ctx, &lifted) {
            return Some("conjugate points do not generate the element");
        }
    }
    None
}

// ---------------------------------------------------------------- witness

/// Witness value for a field element (base-`p` digits, ascending levels).
pub(crate) fn welt(ctx: &FieldCtx, x: Elt) -> serde_json::Value {
    json!(ctx.fp_coords(x))
}

/// Witness value for a projective point.
pub(crate) fn wpoint(ctx: &FieldCtx, p: &Point) -> serde_json::Value {
    json!({
        "level": p.level,
        "coords": p.coords().iter().map(|&x| ctx.fp_coords(x)).collect::<Vec<_>>(),
    })
}

/// Witness value for a stabiliser matrix.
pub(crate) fn wstab(ctx: &FieldCtx, x: &Stabiliser) -> serde_json::Value {
    json!(x
        .matrix()
        .iter()
        .map(|row| row.iter().map(|&e| ctx.fp_coords(e)).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}


#[cfg(test)]
mod debug_tests {
    use super::*;
    use crate::abb::plane_point;
    use crate::subobj::{reduce_subline, subline_through};
    use crate::curves::curve_c_omega;


    #[test]
    fn debug_t26_sweep_internals() {
        let ctx = FieldCtx::new(3, 1, 3).unwrap();
        let p0 = crate::abb::plane_point(&ctx, 0, 0, ctx.one()).unwrap();
        let p1 = crate::abb::plane_point(&ctx, 1, 0, ctx.one()).unwrap();
        let p5 = crate::abb::plane_point(&ctx, 5, 0, ctx.one()).unwrap();
        let m = crate::subobj::subline_through(&ctx, 1, &p0, &p1, &p5).unwrap();
        let mut sorted: Vec<crate::proj::Point> = m.points().iter().map(|p| phi_affine(&ctx, p).unwrap()).collect();
        sorted.sort();
        let rows: Vec<Vec<Elt>> = sorted.iter().map(|p| p.coords().to_vec()).collect();
        let level = 1u8;
        let sub: Vec<Elt> = ctx.enumerate_subfield(level).unwrap().to_vec();
        let mut params: Vec<(Elt, Elt)> = sub.iter().map(|&t| (ctx.one(), t)).collect();
        params.push((0, ctx.one()));
        println!("params: {:?}", params);
        let vmat: Vec<Vec<Elt>> = params.iter().map(|&(s, t)| {
            (0..4).map(|d| ctx.mul(ctx.pow(s, (3 - d) as u64), ctx.pow(t, d as u64))).collect()
        }).collect();
        let nz = nonzero_subfield(&ctx, level).unwrap();
        for &l1 in &nz {
            for &l2 in &nz {
                for &l3 in &nz {
                    let scaled = [
                        rows[0].clone(),
                        scale_vec(&ctx, l1, &rows[1]),
                        scale_vec(&ctx, l2, &rows[2]),
                        scale_vec(&ctx, l3, &rows[3]),
                    ];
                    let aug: Vec<Vec<Elt>> = (0..4).map(|i| {
                        let mut r = vmat[i].clone();
                        r.extend_from_slice(&scaled[i]);
                        r
                    }).collect();
                    let red = linalg::rref(&ctx, &aug);
                    let identity_head = red.iter().enumerate().all(|(i, r)| (0..4).all(|j| r[j] == if i == j { ctx.one() } else { 0 }));
                    if !identity_head { println!("({l1},{l2},{l3}): non-identity head"); continue; }
                    let vectors: Vec<Vec<Elt>> = red.iter().map(|r| r[4..].to_vec()).collect();
                    match Curve::new(&ctx, 3, vectors, level, level) {
                        Ok(c) => {
                            let same = c.points() == &sorted[..];
                            let legs = if same { format!("{:?}", external_curve_legs(&ctx, &c, 3).unwrap()) } else { "-".into() };
                            println!("({l1},{l2},{l3}): curve ok, points match {same}, legs {legs}");
                        }
                        Err(e) => println!("({l1},{l2},{l3}): curve rejected: {e}"),
                    }
                }
            }
        }
    }

    #[test]
    fn debug_t26_failing_triple() {
        let ctx = FieldCtx::new(3, 1, 3).unwrap();
        let p0 = plane_point(&ctx, 0, 0, ctx.one()).unwrap();
        let p1 = plane_point(&ctx, 1, 0, ctx.one()).unwrap();
        let p5 = plane_point(&ctx, 5, 0, ctx.one()).unwrap();
        let m = subline_through(&ctx, 1, &p0, &p1, &p5).unwrap();
        println!("classify: {:?}", m.classify());
        let red = reduce_subline(&ctx, &m).unwrap();
        println!("omega: {} degree {}", red.omega, ctx.subfield_degree(red.omega));
        let mut image: Vec<crate::proj::Point> = m.points().iter().map(|p| phi_affine(&ctx, p).unwrap()).collect();
        image.sort();
        let cands = curves_with_point_set(&ctx, &image).unwrap();
        println!("candidates: {}", cands.len());
        for c in &cands {
            println!("  legs: {:?}", external_curve_legs(&ctx, c, 3).unwrap());
        }
        // Transported canonical curve must share the image and pass legs.
        let c0 = curve_c_omega(&ctx, red.omega).unwrap();
        let cx = chi_curve(&ctx, &red.transform, &c0).unwrap();
        let mut cx_pts = cx.points().to_vec();
        cx_pts.sort();
        println!("transport image matches: {}", cx_pts == image);
        println!("transport legs: {:?}", external_curve_legs(&ctx, &cx, 3).unwrap());
        let in_sweep = cands.iter().any(|c| {
            let e1 = extend_curve(&ctx, c).unwrap();
            let e2 = extend_curve(&ctx, &cx).unwrap();
            let mut s1 = e1.points().to_vec(); s1.sort();
            let mut s2 = e2.points().to_vec(); s2.sort();
            s1 == s2
        });
        println!("sweep contains transport extension: {}", in_sweep);
    }
}
