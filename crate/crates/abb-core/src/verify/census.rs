//! Counting censuses: honest enumerations of configuration families checked
//! against their closed-form counts.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::abb::{plane_affine_points, plane_infinite_points, plane_point, sigma_vec, sigma_width};
use crate::curves::{
    apply_param_matrix, for_each_combination, param_collineations, poly_product, Curve,
};
use crate::error::{Error, Result};
use crate::gf::{Elt, FieldCtx};
use crate::io::FieldSpec;
use crate::linalg;
use crate::proj::Point;
use crate::spread::spread_family;
use crate::subobj::{subline_canonical, subplane_through, LinftyClass};

use super::support;
use super::{ParamSummary, Verdict};

// ------------------------------------------------------------------- kinds

/// The countable configuration families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CensusKind {
    /// Non-collinear triples inside one affine cover flat.
    ExternalTriples,
    /// Affine flats whose trace at infinity is a level-`k` element.
    TangentFlats,
    /// Distinct interpolating curves over a fixed member, anchored at the
    /// member's points and swept over the allowable second anchors.
    ScrollCurves,
    /// Classes of allowable second anchors inside the level-`k` element of a
    /// fixed first anchor.
    AllowableB,
    /// Tangent subplanes through a fixed external subline and a fixed
    /// outside point at infinity.
    TangentPerSubline,
}

impl CensusKind {
    /// Every kind, in display order.
    pub const ALL: [CensusKind; 5] = [
        CensusKind::ExternalTriples,
        CensusKind::TangentFlats,
        CensusKind::ScrollCurves,
        CensusKind::AllowableB,
        CensusKind::TangentPerSubline,
    ];

    /// Stable kebab-case name.
    pub fn as_str(self) -> &'static str {
        match self {
            CensusKind::ExternalTriples => "external-triples",
            CensusKind::TangentFlats => "tangent-flats",
            CensusKind::ScrollCurves => "scroll-curves",
            CensusKind::AllowableB => "allowable-b",
            CensusKind::TangentPerSubline => "tangent-per-subline",
        }
    }
}

impl fmt::Display for CensusKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CensusKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<CensusKind> {
        CensusKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown census kind {s:?}")))
    }
}

// ------------------------------------------------------------------ report

/// Outcome of one census: an enumerated count against its closed form.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CensusReport {
    /// Census kind name.
    pub kind: String,
    /// Field and level parameters.
    pub params: ParamSummary,
    /// Count obtained by enumeration.
    pub computed: u64,
    /// Closed-form count.
    pub formula: u64,
    /// Wall-clock duration of the census.
    pub elapsed_ms: u64,
    /// Overall outcome.
    pub verdict: Verdict,
}

impl CensusReport {
    /// One-line human-readable summary.
    pub fn text_line(&self) -> String {
        format!(
            "census {} p={} h={} n={} k={}: {} (computed {}, formula {}, {} ms)",
            self.kind,
            self.params.p,
            self.params.h,
            self.params.n,
            self.params.k,
            self.verdict,
            self.computed,
            self.formula,
            self.elapsed_ms
        )
    }
}

/// Runs one census at level `k` over the given field tower.
pub fn census(spec: &FieldSpec, kind: CensusKind, k: u8) -> Result<CensusReport> {
    let n = spec.n;
    if k == 0 || k > n || n % k != 0 {
        return Err(Error::InvalidArgument(format!(
            "level {k} does not divide the top degree {n}"
        )));
    }
    if n < 2 {
        return Err(Error::Hypothesis(
            "the representation needs a top degree of at least 2".into(),
        ));
    }
    let q = (spec.p as u128).pow(spec.h as u32);
    match kind {
        CensusKind::ExternalTriples => {
            if k != 1 {
                return Err(Error::Hypothesis(
                    "the triple census counts base-subfield collinearity only".into(),
                ));
            }
        }
        CensusKind::TangentFlats => {}
        CensusKind::ScrollCurves | CensusKind::AllowableB => {
            if k < 3 || u128::from(k) > q {
                return Err(Error::Hypothesis(
                    "the curve censuses need a level of at least 3 and a base field \
                     no smaller than the level"
                        .into(),
                ));
            }
        }
        CensusKind::TangentPerSubline => {
            if k < 2 {
                return Err(Error::Hypothesis(
                    "the subplane census needs a proper extension level".into(),
                ));
            }
        }
    }
    let ctx = spec.context()?;
    let started = Instant::now();
    let (computed, formula) = match kind {
        CensusKind::ExternalTriples => external_triples_count(&ctx)?,
        CensusKind::TangentFlats => tangent_flats_count(&ctx, k)?,
        CensusKind::ScrollCurves => scroll_curves_count(&ctx, k)?,
        CensusKind::AllowableB => allowable_b_count(&ctx, k)?,
        CensusKind::TangentPerSubline => tangent_per_subline_count(&ctx, k)?,
    };
    Ok(CensusReport {
        kind: kind.as_str().into(),
        params: ParamSummary {
            p: spec.p,
            h: spec.h,
            n: spec.n,
            k,
        },
        computed,
        formula,
        elapsed_ms: started.elapsed().as_millis() as u64,
        verdict: if computed == formula {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
    })
}

/// The levels at which a census is exercised by the demonstration run.
pub(super) fn demo_levels(kind: CensusKind, spec: &FieldSpec) -> Vec<u8> {
    let n = spec.n;
    let q = (spec.p as u128).pow(spec.h as u32);
    match kind {
        CensusKind::ExternalTriples => vec![1],
        CensusKind::TangentFlats => support::divisors(n),
        CensusKind::ScrollCurves | CensusKind::AllowableB => {
            if n >= 3 && q >= u128::from(n) {
                vec![n]
            } else {
                vec![]
            }
        }
        CensusKind::TangentPerSubline => {
            if n >= 2 {
                vec![n]
            } else {
                vec![]
            }
        }
    }
}

// ------------------------------------------------------------------ counts

/// Counts non-collinear point triples inside the affine cover flat of the
/// canonical line, against the closed form `q^n(q^n − 1)(q^n − q)/6`.
pub(super) fn external_triples_count(ctx: &FieldCtx) -> Result<(u64, u64)> {
    let qn = ctx.size();
    let mut flat: Vec<Point> = Vec::with_capacity(qn);
    for a in 0..qn as Elt {
        flat.push(support::phi_affine(
            ctx,
            &plane_point(ctx, a, 0, ctx.one())?,
        )?);
    }
    let mut computed = 0u64;
    for_each_combination(qn, 3, |idx| {
        let rows: Vec<Vec<Elt>> = idx.iter().map(|&i| flat[i].coords().to_vec()).collect();
        if linalg::rank(ctx, &rows) == 3 {
            computed += 1;
        }
        true
    });
    let s = qn as u64;
    let q = ctx.q() as u64;
    Ok((computed, s * (s - 1) * (s - q) / 6))
}

/// Counts affine flats tracing a level-`k` element: the honestly enumerated
/// family times the exact coset count per element, against the per-subline
/// closed form over all tangent sublines.
pub(super) fn tangent_flats_count(ctx: &FieldCtx, k: u8) -> Result<(u64, u64)> {
    let family = spread_family(ctx, k)?;
    let n = u32::from(ctx.n());
    let q = ctx.q() as u128;
    // The affine flats over one element are the cosets of its direction
    // space in the affine cover.
    let per_elt = q.pow(2 * n - u32::from(k));
    let computed = family.len() as u128 * per_elt;
    let qn = q.pow(n);
    let qk = q.pow(u32::from(k));
    let formula = (qn * qn + qn) * (qn * (qn - 1) / (qk * (qk - 1)));
    Ok((computed as u64, formula as u64))
}

/// Lexicographic minimum of `z`'s orbit under base-subfield scalars.
fn coset_min(ctx: &FieldCtx, z: Elt) -> Result<Elt> {
    Ok(support::nonzero_subfield(ctx, 1)?
        .iter()
        .map(|&l| ctx.mul(l, z))
        .min()
        .expect("the base subfield has nonzero elements"))
}

/// The values `z` with `(1, z)` in the parameter-collineation orbit of
/// `(1, −ω)`: the allowable second-anchor ratios for the generator `ω`.
fn allowable_z_values(ctx: &FieldCtx, omega: Elt) -> Result<Vec<Elt>> {
    let neg = ctx.neg(omega);
    let one = ctx.one();
    let mut out = Vec::new();
    for psi in param_collineations(ctx, 1)? {
        let (s2, t2) = apply_param_matrix(ctx, &psi, one, neg);
        if s2 == ctx.zero() {
            return Err(Error::InvalidArgument(
                "the anchor parameter's orbit leaves the affine chart".into(),
            ));
        }
        out.push(ctx.div(t2, s2));
    }
    Ok(out)
}

/// The degree-`(k−1)` interpolating curve through the conjugate chain of a
/// member's generator points, anchored at `ι(a)` for parameter `(0, 1)` and
/// at `ι(b)` for `(1, 0)`, with `b/a` in the level-`k` subfield.
pub(super) fn eta_curve(ctx: &FieldCtx, a: Elt, b: Elt, k: u8) -> Result<Curve> {
    let n = ctx.n() as usize;
    let kk = k as usize;
    let w = sigma_width(ctx);
    let q = ctx.q() as u64;

    // Interpolation basis: the conjugates of the vector supported on the
    // first block at the positions divisible by `k`.
    let mut v = vec![0 as Elt; w];
    for m in 0..(n / kk) {
        let e = q.pow((m * kk) as u32) - 1;
        v[m * kk] = ctx.pow(a, e);
    }
    let mut basis = vec![v];
    for i in 1..kk {
        basis.push(sigma_vec(ctx, &basis[i - 1]));
    }

    let mut vectors = vec![vec![0 as Elt; w]; kk];
    for (i, base) in basis.iter().enumerate() {
        let factors: Vec<(Elt, Elt)> = (0..kk)
            .filter(|&j| j != i)
            .map(|j| {
                (
                    ctx.frobenius(a, j as u8),
                    ctx.neg(ctx.frobenius(b, j as u8)),
                )
            })
            .collect();
        let coeffs = poly_product(ctx, &factors);
        let weight = ctx.frobenius(ctx.mul(a, b), i as u8);
        for (d, &cd) in coeffs.iter().enumerate() {
            let scale = ctx.mul(weight, cd);
            for (dst, &src) in vectors[d].iter_mut().zip(base) {
                *dst = ctx.add(*dst, ctx.mul(scale, src));
            }
        }
    }
    Curve::new(ctx, k - 1, vectors, 1, ctx.n())
}

/// Counts the distinct interpolating-curve point sets over the canonical
/// member, sweeping anchor classes and allowable ratios, against one
/// projective line's worth `(q^n − 1)/(q − 1)`.
pub(super) fn scroll_curves_count(ctx: &FieldCtx, k: u8) -> Result<(u64, u64)> {
    let omega = support::min_degree_elt(ctx, k)?;
    let zs = allowable_z_values(ctx, omega)?;
    let mut z_classes: BTreeSet<Elt> = BTreeSet::new();
    for &z in &zs {
        z_classes.insert(coset_min(ctx, z)?);
    }
    let mut curves: BTreeSet<Vec<Point>> = BTreeSet::new();
    for a in 1..ctx.size() as Elt {
        if coset_min(ctx, a)? != a {
            continue;
        }
        for &z in &z_classes {
            let c = eta_curve(ctx, a, ctx.mul(z, a), k)?;
            curves.insert(c.points().to_vec());
        }
    }
    let q = ctx.q() as u64;
    Ok((curves.len() as u64, (ctx.size() as u64 - 1) / (q - 1)))
}

/// Counts the classes of allowable second anchors for a fixed first anchor:
/// orbit ratios of full degree, modulo base-subfield scalars, against
/// `q(q + 1)`.
pub(super) fn allowable_b_count(ctx: &FieldCtx, k: u8) -> Result<(u64, u64)> {
    let omega = support::min_degree_elt(ctx, k)?;
    let zs = allowable_z_values(ctx, omega)?;
    let mut classes: BTreeSet<Elt> = BTreeSet::new();
    for &z in &zs {
        if ctx.subfield_degree(z) != k {
            continue;
        }
        classes.insert(coset_min(ctx, z)?);
    }
    let q = ctx.q() as u64;
    Ok((classes.len() as u64, q * (q + 1)))
}

/// Counts the tangent subplanes containing a fixed external subline and a
/// fixed point at infinity off the subline's carrier, by sweeping the
/// fourth frame point over the whole plane, against `(q^n − 1)/(q − 1)`.
pub(super) fn tangent_per_subline_count(ctx: &FieldCtx, k: u8) -> Result<(u64, u64)> {
    let omega = support::min_degree_elt(ctx, k)?;
    let l = subline_canonical(ctx, 1, omega)?;
    let r = plane_point(ctx, ctx.one(), 0, 0)?;
    let l0 = &l.points()[0];
    let l1 = &l.points()[1];
    let rank3 = |x: &Point, y: &Point, z: &Point| {
        linalg::rank(
            ctx,
            &[
                x.coords().to_vec(),
                y.coords().to_vec(),
                z.coords().to_vec(),
            ],
        ) == 3
    };
    let mut seen: BTreeSet<Vec<Point>> = BTreeSet::new();
    let mut sweep = |x: &Point| -> Result<()> {
        if rank3(l0, l1, x) && rank3(l0, &r, x) && rank3(l1, &r, x) {
            let pl = subplane_through(ctx, 1, [l0, l1, &r, x])?;
            if pl.classify() == LinftyClass::Tangent && l.points().iter().all(|p| pl.contains(p))
            {
                seen.insert(pl.points().to_vec());
            }
        }
        Ok(())
    };
    for x in plane_affine_points(ctx) {
        sweep(&x)?;
    }
    for x in plane_infinite_points(ctx) {
        sweep(&x)?;
    }
    let q = ctx.q() as u64;
    Ok((seen.len() as u64, (ctx.size() as u64 - 1) / (q - 1)))
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::abb::{embed_iota, iota_vec};
    use crate::curves::{curve_n_omega, extend_curve};

    #[test]
    fn interpolating_curves_hit_their_anchors_and_chain() {
        let f = FieldCtx::new(3, 1, 3).expect("field tower");
        let omega = support::min_degree_elt(&f, 3).expect("a degree-3 element");
        let z = allowable_z_values(&f, omega).expect("orbit")[0];
        let a = f.beta();
        let b = f.mul(z, a);
        let c = eta_curve(&f, a, b, 3).expect("curve");
        let one = f.one();

        let pa = Point::new(&f, 3, iota_vec(&f, a, 0, 0)).expect("nonzero");
        let pb = Point::new(&f, 3, iota_vec(&f, b, 0, 0)).expect("nonzero");
        assert_eq!(
            c.evaluate(&f, 0, one).expect("evaluation"),
            pa,
            "(0, 1) should land on the first anchor"
        );
        assert_eq!(
            c.evaluate(&f, one, 0).expect("evaluation"),
            pb,
            "(1, 0) should land on the second anchor"
        );
        // The curve stays inside the first-coordinate member.
        for p in c.points() {
            assert!(
                p.coords()[3..].iter().all(|&x| x == 0),
                "curve points should stay inside the anchor member"
            );
        }
        // Swapped conjugate parameters walk the interpolation basis.
        let ext = extend_curve(&f, &c).expect("extension");
        let r0 = ext.evaluate(&f, b, a).expect("evaluation");
        for i in 0..3u8 {
            let ri = ext
                .evaluate(&f, f.frobenius(b, i), f.frobenius(a, i))
                .expect("evaluation");
            assert_eq!(
                ri,
                support::sigma_iter(&f, &r0, i),
                "the interpolation basis should be a conjugate chain"
            );
        }
    }

    #[test]
    fn the_curve_family_over_a_member_is_one_line_of_point_sets() {
        let f = FieldCtx::new(3, 1, 3).expect("field tower");
        let omega = support::min_degree_elt(&f, 3).expect("a degree-3 element");
        let zs = allowable_z_values(&f, omega).expect("orbit");
        let mut z_classes: BTreeSet<Elt> = BTreeSet::new();
        for &z in &zs {
            z_classes.insert(coset_min(&f, z).expect("class"));
        }
        assert_eq!(z_classes.len(), 12, "q(q + 1) anchor ratio classes");

        let mut multiplicity: BTreeMap<Vec<Point>, u64> = BTreeMap::new();
        for a in 1..f.size() as Elt {
            if coset_min(&f, a).expect("class") != a {
                continue;
            }
            for &z in &z_classes {
                let c = eta_curve(&f, a, f.mul(z, a), 3).expect("curve");
                *multiplicity.entry(c.points().to_vec()).or_insert(0) += 1;
            }
        }
        assert_eq!(multiplicity.len(), 13, "one projective line of curves");
        assert!(
            multiplicity.values().all(|&m| m == 12),
            "every curve should arise from q(q + 1) anchor pairs"
        );

        // The canonical companion curve's embedding is one of them.
        let nc = curve_n_omega(&f, omega).expect("companion");
        let mut embedded: Vec<Point> = nc
            .points()
            .iter()
            .map(|p| embed_iota(&f, p).expect("embedding"))
            .collect();
        embedded.sort();
        assert!(
            multiplicity.contains_key(&embedded),
            "the canonical companion curve should appear in the family"
        );
    }

    #[test]
    fn curve_counts_match_at_a_prime_power_cell() {
        let f = FieldCtx::new(2, 2, 4).expect("field tower");
        let (computed, formula) = scroll_curves_count(&f, 4).expect("census");
        assert_eq!(formula, 85, "one projective line of curves");
        assert_eq!(computed, formula, "enumerated curves should match");
        let (computed, formula) = allowable_b_count(&f, 4).expect("census");
        assert_eq!(formula, 20, "q(q + 1) anchor classes");
        assert_eq!(computed, formula, "enumerated anchors should match");
    }

    #[test]
    fn four_tangent_subplanes_sit_over_the_smallest_external_subline() {
        let f = FieldCtx::new(3, 1, 2).expect("field tower");
        let (computed, formula) = tangent_per_subline_count(&f, 2).expect("census");
        assert_eq!(formula, 4, "(q^n − 1)/(q − 1) subplanes");
        assert_eq!(computed, 4, "the sweep should find exactly four");
    }

    #[test]
    fn the_flat_and_triple_censuses_agree_with_their_forms() {
        let spec = FieldSpec::new(3, 1, 2);
        let triples = census(&spec, CensusKind::ExternalTriples, 1).expect("census");
        assert_eq!(triples.computed, 72, "9·8·6/6 non-collinear triples");
        assert_eq!(triples.verdict, Verdict::Pass, "triple census should pass");
        let flats = census(&spec, CensusKind::TangentFlats, 1).expect("census");
        assert_eq!(flats.computed, 1080, "40 elements × 27 cosets");
        assert_eq!(flats.verdict, Verdict::Pass, "flat census should pass");
    }

    #[test]
    fn census_kinds_parse_and_validate() {
        assert_eq!(
            "scroll-curves".parse::<CensusKind>().expect("parse"),
            CensusKind::ScrollCurves,
            "kebab-case names should round-trip"
        );
        assert!(
            "scrolls".parse::<CensusKind>().is_err(),
            "unknown names should be rejected"
        );
        let spec = FieldSpec::new(3, 1, 2);
        assert!(
            matches!(
                census(&spec, CensusKind::ExternalTriples, 2),
                Err(Error::Hypothesis(_))
            ),
            "the triple census is a base-level count"
        );
        assert!(
            matches!(
                census(&spec, CensusKind::ScrollCurves, 2),
                Err(Error::Hypothesis(_))
            ),
            "degree-2 generators have a non-trivial parameter stabiliser"
        );
        assert!(
            matches!(
                census(&spec, CensusKind::TangentFlats, 3),
                Err(Error::InvalidArgument(_))
            ),
            "levels must divide the top degree"
        );
    }
}
