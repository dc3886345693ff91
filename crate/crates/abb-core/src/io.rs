//! JSON-facing data-transfer forms of the library's objects.
//!
//! Field elements cross the boundary as coordinate arrays over the prime
//! field (ascending powers of the tower generator).  Geometric objects carry
//! the minimal data needed to rebuild them, and every `*_from_dto` conversion
//! re-validates through the ordinary constructors, so a file cannot smuggle
//! in an object that violates the library's invariants.

use serde::{Deserialize, Serialize};

use crate::abb::{flat_to_sem, plane_point, sigma_point, sigma_width, Stabiliser};
use crate::curves::{scroll_build, Curve, Scroll};
use crate::error::{Error, Result};
use crate::gf::{Elt, FieldCtx};
use crate::proj::{Point, Subspace};
use crate::spread::{regulus_through, Regulus, SpreadElt};
use crate::subobj::{subline_through, subplane_through, LinftyClass, Subline, Subplane};

/// Coordinates of one field element over `F_p`.
pub type EltDto = Vec<u16>;

/// Field specification accepted on the command line and in spec files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    /// Characteristic.
    pub p: u16,
    /// Degree of the base field `F_q = F_{p^h}` over the prime field.
    pub h: u8,
    /// Degree of the top field over `F_q`.
    pub n: u8,
    /// Low coefficients `[c_0, …, c_{hn-1}]` of a monic irreducible of
    /// degree `h·n` over `F_p`; omitted means the library default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irreducible: Option<Vec<u16>>,
}

impl FieldSpec {
    /// Specification with the default modulus.
    pub fn new(p: u16, h: u8, n: u8) -> FieldSpec {
        FieldSpec {
            p,
            h,
            n,
            irreducible: None,
        }
    }

    /// Builds the field tower this specification describes.
    pub fn context(&self) -> Result<FieldCtx> {
        match &self.irreducible {
            Some(low) => FieldCtx::with_irreducible(self.p, self.h, self.n, low),
            None => FieldCtx::new(self.p, self.h, self.n),
        }
    }

    /// The specification that reproduces `ctx` exactly, modulus included.
    pub fn from_context(ctx: &FieldCtx) -> FieldSpec {
        FieldSpec {
            p: ctx.p(),
            h: ctx.h(),
            n: ctx.n(),
            irreducible: Some(ctx.modulus().to_vec()),
        }
    }
}

fn elts_to_dto(ctx: &FieldCtx, v: &[Elt]) -> Vec<EltDto> {
    v.iter().map(|&x| ctx.fp_coords(x)).collect()
}

fn elts_from_dto(ctx: &FieldCtx, v: &[EltDto]) -> Result<Vec<Elt>> {
    v.iter().map(|c| ctx.from_fp_coords(c)).collect()
}

/// One projective point: scalar level and coordinates, each coordinate an
/// element coordinate array.  Points of the rank-`2n+1` model over `F_q` are
/// written as their semantic `(a, b, c)` triple; every other point lists its
/// stored coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointDto {
    /// Scalar level of the projective scaling.
    pub level: u8,
    /// Coordinates, semantic where applicable.
    pub coords: Vec<EltDto>,
}

/// Renders a point in its serialized form.
pub fn point_to_dto(ctx: &FieldCtx, p: &Point) -> Result<PointDto> {
    let coords = if p.level == 1 && p.coords().len() == sigma_width(ctx) {
        flat_to_sem(ctx, p.coords())?.to_vec()
    } else {
        p.coords().to_vec()
    };
    Ok(PointDto {
        level: p.level,
        coords: elts_to_dto(ctx, &coords),
    })
}

/// Rebuilds a point from its serialized form.
pub fn point_from_dto(ctx: &FieldCtx, dto: &PointDto) -> Result<Point> {
    let elts = elts_from_dto(ctx, &dto.coords)?;
    if dto.level == 1 && elts.len() == 3 && ctx.n() > 1 {
        sigma_point(ctx, elts[0], elts[1], elts[2])
    } else {
        Point::new(ctx, dto.level, elts)
    }
}

/// Input/output file for point sets: a shared scalar level and the points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSetFile {
    /// Scalar level shared by all listed points.
    pub level: u8,
    /// The points, one coordinate list each.
    pub points: Vec<Vec<EltDto>>,
}

/// Parses every point of a point-set file at the file's level.
pub fn point_set_from_file(ctx: &FieldCtx, file: &PointSetFile) -> Result<Vec<Point>> {
    file.points
        .iter()
        .map(|coords| {
            point_from_dto(
                ctx,
                &PointDto {
                    level: file.level,
                    coords: coords.clone(),
                },
            )
        })
        .collect()
}

/// Renders a list of same-level points as a point-set file.
pub fn point_set_to_file(ctx: &FieldCtx, points: &[Point]) -> Result<PointSetFile> {
    let level = match points.first() {
        Some(p) => p.level,
        None => {
            return Err(Error::InvalidArgument(
                "an empty point set has no serialized form".into(),
            ))
        }
    };
    let mut out = Vec::with_capacity(points.len());
    for p in points {
        if p.level != level {
            return Err(Error::InvalidArgument(
                "all points of a point-set file must share one level".into(),
            ));
        }
        out.push(point_to_dto(ctx, p)?.coords);
    }
    Ok(PointSetFile { level, points: out })
}

/// A subspace as a list of generator points (same rendering rules as
/// [`PointDto`]).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceDto {
    /// Scalar level of the ambient space.
    pub level: u8,
    /// Generators; their span rebuilds the subspace.
    pub generators: Vec<Vec<EltDto>>,
}

/// Renders a subspace as its generator list.
pub fn subspace_to_dto(ctx: &FieldCtx, s: &Subspace) -> Result<SubspaceDto> {
    if s.rank() == 0 {
        return Err(Error::InvalidArgument(
            "an empty subspace has no serialized form".into(),
        ));
    }
    let mut generators = Vec::with_capacity(s.rank());
    for row in s.rows() {
        let coords = if s.level == 1 && row.len() == sigma_width(ctx) {
            flat_to_sem(ctx, row)?.to_vec()
        } else {
            row.to_vec()
        };
        generators.push(elts_to_dto(ctx, &coords));
    }
    Ok(SubspaceDto {
        level: s.level,
        generators,
    })
}

/// Rebuilds a subspace as the span of its serialized generators.
pub fn subspace_from_dto(ctx: &FieldCtx, dto: &SubspaceDto) -> Result<Subspace> {
    if dto.generators.is_empty() {
        return Err(Error::InvalidArgument(
            "a subspace file must list at least one generator".into(),
        ));
    }
    let mut rows = Vec::with_capacity(dto.generators.len());
    for coords in &dto.generators {
        let p = point_from_dto(
            ctx,
            &PointDto {
                level: dto.level,
                coords: coords.clone(),
            },
        )?;
        rows.push(p.coords().to_vec());
    }
    let width = rows[0].len();
    if rows.iter().any(|r| r.len() != width) {
        return Err(Error::InvalidArgument(
            "subspace generators must share one coordinate width".into(),
        ));
    }
    Ok(Subspace::span(ctx, dto.level, width, &rows))
}

/// A spread element: its `(a, b, k)` parameters together with the generator
/// matrix of the realised flat.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpreadEltDto {
    /// First parameter.
    pub a: EltDto,
    /// Second parameter.
    pub b: EltDto,
    /// Tower level.
    pub k: u8,
    /// Generator matrix of the realised flat, semantic coordinates.
    pub generators: Vec<Vec<EltDto>>,
}

/// Renders a spread element with its generator matrix.
pub fn spread_elt_to_dto(ctx: &FieldCtx, e: &SpreadElt) -> Result<SpreadEltDto> {
    let sub = subspace_to_dto(ctx, &e.subspace(ctx))?;
    Ok(SpreadEltDto {
        a: ctx.fp_coords(e.a),
        b: ctx.fp_coords(e.b),
        k: e.level,
        generators: sub.generators,
    })
}

/// Rebuilds a spread element from its parameters, checking that the listed
/// generators span the same flat.
pub fn spread_elt_from_dto(ctx: &FieldCtx, dto: &SpreadEltDto) -> Result<SpreadElt> {
    let a = ctx.from_fp_coords(&dto.a)?;
    let b = ctx.from_fp_coords(&dto.b)?;
    let elt = SpreadElt::new(ctx, a, b, dto.k)?;
    let listed = subspace_from_dto(
        ctx,
        &SubspaceDto {
            level: 1,
            generators: dto.generators.clone(),
        },
    )?;
    if listed != elt.subspace(ctx) {
        return Err(Error::InvalidArgument(
            "spread-element generators do not span the flat of (a, b, k)".into(),
        ));
    }
    Ok(elt)
}

/// A regulus as the parameter list of its members.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegulusDto {
    /// The `q + 1` member elements.
    pub members: Vec<SpreadEltDto>,
}

/// Renders a regulus through its member parameters.
pub fn regulus_to_dto(ctx: &FieldCtx, r: &Regulus) -> Result<RegulusDto> {
    let members = r
        .member_elements(ctx)?
        .iter()
        .map(|e| spread_elt_to_dto(ctx, e))
        .collect::<Result<Vec<_>>>()?;
    Ok(RegulusDto { members })
}

/// Rebuilds a regulus from its first three members and checks the remaining
/// members agree with the listed ones.
pub fn regulus_from_dto(ctx: &FieldCtx, dto: &RegulusDto) -> Result<Regulus> {
    if dto.members.len() < 3 {
        return Err(Error::InvalidArgument(
            "a regulus file must list at least three members".into(),
        ));
    }
    let members = dto
        .members
        .iter()
        .map(|m| spread_elt_from_dto(ctx, m))
        .collect::<Result<Vec<_>>>()?;
    let reg = regulus_through(ctx, &members[0], &members[1], &members[2])?;
    let mut rebuilt = reg.member_elements(ctx)?;
    let mut listed = members;
    rebuilt.sort();
    listed.sort();
    if rebuilt != listed {
        return Err(Error::InvalidArgument(
            "listed members are not the regulus through the first three".into(),
        ));
    }
    Ok(reg)
}

/// A stabiliser element as its `3×3` matrix of element coordinate arrays.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabiliserDto {
    /// Row-major matrix entries.
    pub matrix: Vec<Vec<EltDto>>,
}

/// Renders a stabiliser element.
pub fn stabiliser_to_dto(ctx: &FieldCtx, s: &Stabiliser) -> StabiliserDto {
    let matrix = s
        .matrix()
        .iter()
        .map(|row| elts_to_dto(ctx, row))
        .collect();
    StabiliserDto { matrix }
}

/// Rebuilds a stabiliser element, re-validating its shape and invertibility.
pub fn stabiliser_from_dto(ctx: &FieldCtx, dto: &StabiliserDto) -> Result<Stabiliser> {
    if dto.matrix.len() != 3 || dto.matrix.iter().any(|r| r.len() != 3) {
        return Err(Error::InvalidArgument(
            "a stabiliser matrix must be 3×3".into(),
        ));
    }
    let mut m = [[0 as Elt; 3]; 3];
    for (i, row) in dto.matrix.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            m[i][j] = ctx.from_fp_coords(entry)?;
        }
    }
    Stabiliser::new(ctx, m)
}

/// A subline as its level, three defining points, and position tag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SublineDto {
    /// Subfield level of the subline.
    pub level: u8,
    /// Three of its points (any three determine it).
    pub points: Vec<Vec<EltDto>>,
    /// Position relative to the line `z = 0`.
    pub tag: LinftyClass,
}

/// Renders a subline through three of its points.
pub fn subline_to_dto(ctx: &FieldCtx, l: &Subline) -> Result<SublineDto> {
    let points = l.points()[..3]
        .iter()
        .map(|p| point_to_dto(ctx, p).map(|d| d.coords))
        .collect::<Result<Vec<_>>>()?;
    Ok(SublineDto {
        level: l.level(),
        points,
        tag: l.classify(),
    })
}

/// Rebuilds a subline from its defining points and checks the recorded tag.
pub fn subline_from_dto(ctx: &FieldCtx, dto: &SublineDto) -> Result<Subline> {
    if dto.points.len() != 3 {
        return Err(Error::InvalidArgument(
            "a subline file must list exactly three defining points".into(),
        ));
    }
    let pts = dto
        .points
        .iter()
        .map(|coords| {
            point_from_dto(
                ctx,
                &PointDto {
                    level: ctx.n(),
                    coords: coords.clone(),
                },
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let line = subline_through(ctx, dto.level, &pts[0], &pts[1], &pts[2])?;
    if line.classify() != dto.tag {
        return Err(Error::InvalidArgument(
            "subline tag disagrees with the reconstructed object".into(),
        ));
    }
    Ok(line)
}

/// A subplane as its level, four defining points, and position tag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubplaneDto {
    /// Subfield level of the subplane.
    pub level: u8,
    /// Four of its points, no three collinear.
    pub points: Vec<Vec<EltDto>>,
    /// Position relative to the line `z = 0`.
    pub tag: LinftyClass,
}

/// Renders a subplane through a defining quadruple derived from its lattice.
pub fn subplane_to_dto(ctx: &FieldCtx, pl: &Subplane) -> Result<SubplaneDto> {
    let lat = pl.lattice();
    let mut sum = vec![0 as Elt; 3];
    for w in lat.iter() {
        for i in 0..3 {
            sum[i] = ctx.add(sum[i], w[i]);
        }
    }
    let quad = [
        plane_point(ctx, lat[0][0], lat[0][1], lat[0][2])?,
        plane_point(ctx, lat[1][0], lat[1][1], lat[1][2])?,
        plane_point(ctx, lat[2][0], lat[2][1], lat[2][2])?,
        plane_point(ctx, sum[0], sum[1], sum[2])?,
    ];
    let points = quad
        .iter()
        .map(|p| point_to_dto(ctx, p).map(|d| d.coords))
        .collect::<Result<Vec<_>>>()?;
    Ok(SubplaneDto {
        level: pl.level(),
        points,
        tag: pl.classify(),
    })
}

/// Rebuilds a subplane from its defining points and checks the recorded tag.
pub fn subplane_from_dto(ctx: &FieldCtx, dto: &SubplaneDto) -> Result<Subplane> {
    if dto.points.len() != 4 {
        return Err(Error::InvalidArgument(
            "a subplane file must list exactly four defining points".into(),
        ));
    }
    let pts = dto
        .points
        .iter()
        .map(|coords| {
            point_from_dto(
                ctx,
                &PointDto {
                    level: ctx.n(),
                    coords: coords.clone(),
                },
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let plane = subplane_through(ctx, dto.level, [&pts[0], &pts[1], &pts[2], &pts[3]])?;
    if plane.classify() != dto.tag {
        return Err(Error::InvalidArgument(
            "subplane tag disagrees with the reconstructed object".into(),
        ));
    }
    Ok(plane)
}

/// A curve as its degree, coefficient vectors, and the two scalar levels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveDto {
    /// Degree of the parametrisation.
    pub degree: u8,
    /// Coefficient vectors `e_0, …, e_degree` in flat coordinates.
    pub vectors: Vec<Vec<EltDto>>,
    /// Level of the parameter field.
    pub param_level: u8,
    /// Level of the ambient point coordinates.
    pub point_level: u8,
}

/// Renders a curve through its coefficient vectors.
pub fn curve_to_dto(ctx: &FieldCtx, c: &Curve) -> CurveDto {
    CurveDto {
        degree: c.degree(),
        vectors: c.vectors().iter().map(|v| elts_to_dto(ctx, v)).collect(),
        param_level: c.param_level(),
        point_level: c.point_level(),
    }
}

/// Rebuilds a curve, re-validating independence and levels.
pub fn curve_from_dto(ctx: &FieldCtx, dto: &CurveDto) -> Result<Curve> {
    let vectors = dto
        .vectors
        .iter()
        .map(|v| elts_from_dto(ctx, v))
        .collect::<Result<Vec<_>>>()?;
    Curve::new(ctx, dto.degree, vectors, dto.param_level, dto.point_level)
}

/// A scroll as its two curves and the pairing matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScrollDto {
    /// Base curve.
    pub base: CurveDto,
    /// Director curve.
    pub director: CurveDto,
    /// The `2×2` parameter pairing, row-major element coordinate arrays.
    pub psi: Vec<Vec<EltDto>>,
}

/// Renders a scroll through its defining data.
pub fn scroll_to_dto(ctx: &FieldCtx, s: &Scroll) -> ScrollDto {
    ScrollDto {
        base: curve_to_dto(ctx, s.base()),
        director: curve_to_dto(ctx, s.director()),
        psi: s.psi().iter().map(|row| elts_to_dto(ctx, row)).collect(),
    }
}

/// Rebuilds a scroll, re-validating through the ordinary constructor.
pub fn scroll_from_dto(ctx: &FieldCtx, dto: &ScrollDto) -> Result<Scroll> {
    if dto.psi.len() != 2 || dto.psi.iter().any(|r| r.len() != 2) {
        return Err(Error::InvalidArgument(
            "a scroll pairing matrix must be 2×2".into(),
        ));
    }
    let base = curve_from_dto(ctx, &dto.base)?;
    let director = curve_from_dto(ctx, &dto.director)?;
    let mut psi = [[0 as Elt; 2]; 2];
    for (i, row) in dto.psi.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            psi[i][j] = ctx.from_fp_coords(entry)?;
        }
    }
    scroll_build(ctx, &base, &director, psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abb::{abb_map, PhiImage};
    use crate::curves::curve_c_omega;
    use crate::subobj::{subline_canonical, subplane_canonical};

    fn ctx32() -> FieldCtx {
        FieldCtx::new(3, 1, 2).expect("tower (3,1,2) must build")
    }

    #[test]
    fn field_spec_round_trips_and_rejects_bad_moduli() {
        let ctx = ctx32();
        let spec = FieldSpec::from_context(&ctx);
        let json = serde_json::to_string(&spec).expect("field spec must serialize");
        let back: FieldSpec = serde_json::from_str(&json).expect("field spec must parse");
        assert_eq!(back, spec, "field spec must round-trip through JSON");
        let ctx2 = back.context().expect("explicit modulus must rebuild");
        assert_eq!(
            ctx2.modulus(),
            ctx.modulus(),
            "explicit modulus must be honoured"
        );

        let default = FieldSpec::new(3, 1, 2);
        assert!(
            default.context().is_ok(),
            "default modulus must build the tower"
        );

        let bad = FieldSpec {
            p: 3,
            h: 1,
            n: 2,
            irreducible: Some(vec![0, 0]),
        };
        assert!(
            bad.context().is_err(),
            "a reducible modulus must be rejected"
        );
    }

    #[test]
    fn points_round_trip_in_semantic_form() {
        let ctx = ctx32();
        let b = ctx.beta();

        let sigma = sigma_point(&ctx, b, ctx.one(), ctx.one()).expect("Σ-point must build");
        let dto = point_to_dto(&ctx, &sigma).expect("Σ-point must serialize");
        assert_eq!(
            dto.coords.len(),
            3,
            "rank-(2n+1) model points must serialize as semantic triples"
        );
        let back = point_from_dto(&ctx, &dto).expect("Σ-point must parse");
        assert_eq!(back, sigma, "Σ-point must round-trip");

        let plane = plane_point(&ctx, b, ctx.one(), 0).expect("plane point must build");
        let dto = point_to_dto(&ctx, &plane).expect("plane point must serialize");
        let back = point_from_dto(&ctx, &dto).expect("plane point must parse");
        assert_eq!(back, plane, "plane point must round-trip");

        let star = crate::abb::embed_iota(&ctx, &sigma).expect("embedding must apply");
        let dto = point_to_dto(&ctx, &star).expect("extended point must serialize");
        assert_eq!(
            dto.coords.len(),
            sigma_width(&ctx),
            "extended points must list all stored coordinates"
        );
        let back = point_from_dto(&ctx, &dto).expect("extended point must parse");
        assert_eq!(back, star, "extended point must round-trip");
    }

    #[test]
    fn point_set_files_round_trip() {
        let ctx = ctx32();
        let line = subline_canonical(&ctx, 1, ctx.beta()).expect("subline must build");
        let mut images = Vec::new();
        for p in line.points() {
            if let PhiImage::Affine(q) = abb_map(&ctx, p).expect("map must apply") {
                images.push(q);
            }
        }
        let file = point_set_to_file(&ctx, &images).expect("point set must serialize");
        let json = serde_json::to_string(&file).expect("point set must encode");
        let parsed: PointSetFile = serde_json::from_str(&json).expect("point set must decode");
        let back = point_set_from_file(&ctx, &parsed).expect("point set must parse");
        assert_eq!(back, images, "point-set file must round-trip");

        assert!(
            point_set_to_file(&ctx, &[]).is_err(),
            "empty point sets must be rejected"
        );
    }

    #[test]
    fn subspaces_round_trip_through_generators() {
        let ctx = ctx32();
        let e = SpreadElt::new(&ctx, ctx.one(), ctx.beta(), 2).expect("element must build");
        let sub = e.subspace(&ctx);
        let dto = subspace_to_dto(&ctx, &sub).expect("subspace must serialize");
        let back = subspace_from_dto(&ctx, &dto).expect("subspace must parse");
        assert_eq!(back, sub, "spread-member flat must round-trip");

        let carrier = subline_canonical(&ctx, 1, ctx.beta())
            .expect("subline must build")
            .carrier(&ctx);
        let dto = subspace_to_dto(&ctx, &carrier).expect("carrier must serialize");
        let back = subspace_from_dto(&ctx, &dto).expect("carrier must parse");
        assert_eq!(back, carrier, "plane line must round-trip");
    }

    #[test]
    fn spread_elements_and_reguli_round_trip_with_validation() {
        let ctx = ctx32();
        let e = SpreadElt::new(&ctx, ctx.beta(), ctx.one(), 2).expect("element must build");
        let dto = spread_elt_to_dto(&ctx, &e).expect("element must serialize");
        let back = spread_elt_from_dto(&ctx, &dto).expect("element must parse");
        assert_eq!(back, e, "spread element must round-trip");

        let mut tampered = dto.clone();
        tampered.b = ctx.fp_coords(ctx.add(ctx.beta(), ctx.one()));
        assert!(
            spread_elt_from_dto(&ctx, &tampered).is_err(),
            "generators disagreeing with the parameters must be rejected"
        );

        let e1 = SpreadElt::new(&ctx, ctx.one(), 0, 2).expect("member must build");
        let e2 = SpreadElt::new(&ctx, 0, ctx.one(), 2).expect("member must build");
        let e3 = SpreadElt::new(&ctx, ctx.one(), ctx.one(), 2).expect("member must build");
        let reg = regulus_through(&ctx, &e1, &e2, &e3).expect("regulus must build");
        let dto = regulus_to_dto(&ctx, &reg).expect("regulus must serialize");
        let back = regulus_from_dto(&ctx, &dto).expect("regulus must parse");
        let mut rebuilt = back.members.clone();
        let mut original = reg.members.clone();
        rebuilt.sort();
        original.sort();
        assert_eq!(rebuilt, original, "regulus members must round-trip");

        let mut clipped = dto.clone();
        clipped.members.pop();
        assert!(
            regulus_from_dto(&ctx, &clipped).is_err(),
            "a member list differing from the spanned regulus must be rejected"
        );
    }

    #[test]
    fn stabilisers_round_trip_and_reject_singular_matrices() {
        let ctx = ctx32();
        let b = ctx.beta();
        let one = ctx.one();
        let s = Stabiliser::new(&ctx, [[one, b, 0], [0, one, 0], [b, 0, one]])
            .expect("matrix must be accepted");
        let dto = stabiliser_to_dto(&ctx, &s);
        let back = stabiliser_from_dto(&ctx, &dto).expect("stabiliser must parse");
        assert_eq!(
            back.matrix(),
            s.matrix(),
            "stabiliser matrix must round-trip"
        );

        let singular = StabiliserDto {
            matrix: vec![
                vec![ctx.fp_coords(one), ctx.fp_coords(one), ctx.fp_coords(0)],
                vec![ctx.fp_coords(one), ctx.fp_coords(one), ctx.fp_coords(0)],
                vec![ctx.fp_coords(0), ctx.fp_coords(0), ctx.fp_coords(one)],
            ],
        };
        assert!(
            stabiliser_from_dto(&ctx, &singular).is_err(),
            "a singular matrix must be rejected"
        );
    }

    #[test]
    fn sublines_and_subplanes_round_trip_with_tag_checks() {
        let ctx = ctx32();
        let line = subline_canonical(&ctx, 1, ctx.beta()).expect("subline must build");
        let dto = subline_to_dto(&ctx, &line).expect("subline must serialize");
        let back = subline_from_dto(&ctx, &dto).expect("subline must parse");
        assert_eq!(back, line, "subline must round-trip");

        let mut mistagged = dto.clone();
        mistagged.tag = LinftyClass::Tangent;
        assert!(
            subline_from_dto(&ctx, &mistagged).is_err(),
            "a wrong position tag must be rejected"
        );

        let plane = subplane_canonical(&ctx, 1, ctx.beta(), 0).expect("subplane must build");
        let dto = subplane_to_dto(&ctx, &plane).expect("subplane must serialize");
        let back = subplane_from_dto(&ctx, &dto).expect("subplane must parse");
        assert_eq!(back, plane, "subplane must round-trip");

        let mut mistagged = dto.clone();
        mistagged.tag = LinftyClass::Secant;
        assert!(
            subplane_from_dto(&ctx, &mistagged).is_err(),
            "a wrong position tag must be rejected"
        );
    }

    #[test]
    fn curves_and_scrolls_round_trip() {
        let ctx = ctx32();
        let c = curve_c_omega(&ctx, ctx.beta()).expect("carrier curve must build");
        let dto = curve_to_dto(&ctx, &c);
        let back = curve_from_dto(&ctx, &dto).expect("curve must parse");
        assert_eq!(back, c, "curve must round-trip");

        let n = crate::curves::curve_n_omega(&ctx, ctx.beta()).expect("companion must build");
        let id = [[ctx.one(), 0], [0, ctx.one()]];
        let s = scroll_build(&ctx, &c, &n, id).expect("scroll must build");
        let dto = scroll_to_dto(&ctx, &s);
        let json = serde_json::to_string(&dto).expect("scroll must encode");
        let parsed: ScrollDto = serde_json::from_str(&json).expect("scroll must decode");
        let back = scroll_from_dto(&ctx, &parsed).expect("scroll must parse");
        assert_eq!(back, s, "scroll must round-trip");
    }

    #[test]
    fn json_encoding_is_stable_under_reparse() {
        let ctx = ctx32();
        let e = SpreadElt::new(&ctx, ctx.beta(), ctx.one(), 1).expect("element must build");
        let dto = spread_elt_to_dto(&ctx, &e).expect("element must serialize");
        let first = serde_json::to_string(&dto).expect("must encode");
        let reparsed: SpreadEltDto = serde_json::from_str(&first).expect("must decode");
        let second = serde_json::to_string(&reparsed).expect("must re-encode");
        assert_eq!(
            first, second,
            "serializing a reparsed object must be byte-identical"
        );
    }
}
