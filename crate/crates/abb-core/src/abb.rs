//! The ABB correspondence between the plane and its big-field model.
//!
//! Three spaces share one field tower:
//!
//! * the plane `PG(2, q^n)` with points `(a, b, c)` over `F_{q^n}` and line
//!   at infinity `c = 0`;
//! * `Σ = PG(2n, q)`, where a point is written semantically as `(a, b, c)`
//!   with `a, b ∈ F_{q^n}`, `c ∈ F_q`, up to `F_q`-scalars, and stored as the
//!   flat coordinate vector `(a_0, …, a_{n-1}, b_0, …, b_{n-1}, c)` over
//!   `F_q`; its hyperplane at infinity is `c = 0`;
//! * `Σ* = PG(2n, q^n)`, the same coordinate frame read over `F_{q^n}`.
//!
//! The maps implemented here: the point correspondence `φ` (affine plane
//! points to affine `Σ` points, infinite points to spread elements), the
//! embedding `ι : Σ → Σ*` that realises `Σ` as the fixed-point subgeometry of
//! the collineation `σ`, the collineation `σ` itself, and the three
//! compatible actions `χ₀, χ, χ*` of the stabiliser of the line at infinity.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elt, FieldCtx};
use crate::proj::{Point, Subspace};
use crate::spread::SpreadElt;

/// Width of the `Σ`/`Σ*` coordinate frame: `2n + 1`.
pub fn sigma_width(ctx: &FieldCtx) -> usize {
    2 * ctx.n() as usize + 1
}

/// A point of the plane `PG(2, q^n)`.
pub fn plane_point(ctx: &FieldCtx, a: Elt, b: Elt, c: Elt) -> Result<Point> {
    Point::new(ctx, ctx.n(), vec![a, b, c])
}

/// Semantic triple `(a, b, c)` of a flat `Σ`-vector.
pub fn flat_to_sem(ctx: &FieldCtx, flat: &[Elt]) -> Result<[Elt; 3]> {
    let n = ctx.n() as usize;
    if flat.len() != 2 * n + 1 {
        return Err(Error::InvalidArgument(format!(
            "flat vector must have {} coordinates, got {}",
            2 * n + 1,
            flat.len()
        )));
    }
    let a = ctx.from_q_coords(&flat[..n])?;
    let b = ctx.from_q_coords(&flat[n..2 * n])?;
    Ok([a, b, flat[2 * n]])
}

/// Flat `Σ`-vector of a semantic triple; `c` must lie in the base field.
pub fn sem_to_flat(ctx: &FieldCtx, a: Elt, b: Elt, c: Elt) -> Result<Vec<Elt>> {
    if !ctx.in_subfield(c, 1) {
        return Err(Error::InvalidArgument(
            "last semantic coordinate of a Σ point must lie in the base field".into(),
        ));
    }
    let mut flat = Vec::with_capacity(sigma_width(ctx));
    flat.extend_from_slice(ctx.q_coords(a));
    flat.extend_from_slice(ctx.q_coords(b));
    flat.push(c);
    Ok(flat)
}

/// The canonical `Σ` point with semantic coordinates `(a, b, c)`.
pub fn sigma_point(ctx: &FieldCtx, a: Elt, b: Elt, c: Elt) -> Result<Point> {
    Point::new(ctx, 1, sem_to_flat(ctx, a, b, c)?)
}

/// The hyperplane at infinity of `Σ` (`c = 0`).
pub fn h_inf(ctx: &FieldCtx) -> Subspace {
    let w = sigma_width(ctx);
    let rows: Vec<Vec<Elt>> = (0..w - 1)
        .map(|i| {
            let mut v = vec![0 as Elt; w];
            v[i] = ctx.one();
            v
        })
        .collect();
    Subspace::span(ctx, 1, w, &rows)
}

/// Whether a `Σ` point lies on the hyperplane at infinity.
pub fn is_infinite_sigma(pt: &Point) -> bool {
    *pt.coords.last().expect("nonempty") == 0
}

/// Image of a plane point under the point correspondence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PhiImage {
    /// An affine plane point maps to a single affine `Σ` point.
    Affine(Point),
    /// A point of the line at infinity blows up into a spread element.
    Spread(SpreadElt),
}

/// The ABB point correspondence `φ`.
///
/// `(a, b, 1) ↦ (a, b, 1)` read as a flat `Σ` point, and `(a, b, 0)` to the
/// spread element `{(ax, bx, 0) : x ∈ F_{q^n}^*}`.
pub fn abb_map(ctx: &FieldCtx, plane_pt: &Point) -> Result<PhiImage> {
    debug_assert_eq!(plane_pt.coords.len(), 3, "plane points have 3 coordinates");
    let [a, b, c] = [plane_pt.coords[0], plane_pt.coords[1], plane_pt.coords[2]];
    if c == 0 {
        Ok(PhiImage::Spread(SpreadElt::new(ctx, a, b, ctx.n())?))
    } else {
        let ci = ctx.inv(c);
        let pt = sigma_point(ctx, ctx.mul(a, ci), ctx.mul(b, ci), ctx.one())?;
        Ok(PhiImage::Affine(pt))
    }
}

/// The embedding `ι : Σ → Σ*`,
/// `(a, b, c) ↦ (a, a^q, …, a^{q^{n-1}}, b, b^q, …, b^{q^{n-1}}, c)`.
///
/// Its image is exactly the set of points fixed by [`sigma_apply`].
pub fn embed_iota(ctx: &FieldCtx, sigma_pt: &Point) -> Result<Point> {
    debug_assert_eq!(sigma_pt.level, 1, "ι expects a Σ point");
    let [a, b, c] = flat_to_sem(ctx, &sigma_pt.coords)?;
    Point::new(ctx, ctx.n(), iota_vec(ctx, a, b, c))
}

/// The `ι`-image vector of a semantic triple (an `F_q`-linear map on
/// semantic triples, which is what makes coefficient-wise lifting of curves
/// legitimate).
pub fn iota_vec(ctx: &FieldCtx, a: Elt, b: Elt, c: Elt) -> Vec<Elt> {
    let n = ctx.n();
    let mut v = Vec::with_capacity(sigma_width(ctx));
    for i in 0..n {
        v.push(ctx.frobenius(a, i));
    }
    for i in 0..n {
        v.push(ctx.frobenius(b, i));
    }
    v.push(c);
    v
}

/// The collineation `σ` of `Σ*`: entrywise `q`-th power combined with the
/// cyclic right shift of each of the two length-`n` coordinate blocks.
pub fn sigma_apply(ctx: &FieldCtx, pt: &Point) -> Point {
    Point::new(ctx, ctx.n(), sigma_vec(ctx, &pt.coords)).expect("nonzero stays nonzero")
}

/// Vector-level action of `σ`.
pub fn sigma_vec(ctx: &FieldCtx, v: &[Elt]) -> Vec<Elt> {
    let n = ctx.n() as usize;
    debug_assert_eq!(v.len(), 2 * n + 1);
    let mut out = vec![0 as Elt; v.len()];
    for i in 0..n {
        let src = (i + n - 1) % n;
        out[i] = ctx.frobenius(v[src], 1);
        out[n + i] = ctx.frobenius(v[n + src], 1);
    }
    out[2 * n] = ctx.frobenius(v[2 * n], 1);
    out
}

/// If the `Σ*` point is projectively fixed by `σ`, returns the `Σ` point it
/// represents (a Hilbert-90 style normalisation: some scalar multiple of the
/// vector is literally `σ`-invariant, and then the coordinates at positions
/// `0`, `n`, `2n` form the semantic triple).
pub fn sigma_star_to_sigma(ctx: &FieldCtx, pt: &Point) -> Option<Point> {
    let n = ctx.n() as usize;
    for lam in 1..ctx.size() as Elt {
        let scaled: Vec<Elt> = pt.coords.iter().map(|&c| ctx.mul(lam, c)).collect();
        if sigma_vec(ctx, &scaled) == scaled {
            let c = scaled[2 * n];
            debug_assert!(ctx.in_subfield(c, 1));
            return Some(
                sigma_point(ctx, scaled[0], scaled[n], c).expect("invariant vector is nonzero"),
            );
        }
    }
    None
}

/// An element of the stabiliser of the line at infinity in `PGL(3, q^n)`:
/// a matrix
/// ```text
/// | x11 x12 0 |
/// | x21 x22 0 |
/// | x31 x32 1 |
/// ```
/// with invertible upper-left block, acting on row vectors from the right.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stabiliser {
    m: [[Elt; 3]; 3],
}

impl Stabiliser {
    /// Validates and wraps a matrix of the stabiliser shape.
    pub fn new(ctx: &FieldCtx, m: [[Elt; 3]; 3]) -> Result<Stabiliser> {
        if m[0][2] != 0 || m[1][2] != 0 || m[2][2] != ctx.one() {
            return Err(Error::InvalidArgument(
                "stabiliser matrices have third column (0, 0, 1)".into(),
            ));
        }
        let det = ctx.sub(ctx.mul(m[0][0], m[1][1]), ctx.mul(m[0][1], m[1][0]));
        if det == 0 {
            return Err(Error::InvalidArgument(
                "upper-left block of a stabiliser matrix must be invertible".into(),
            ));
        }
        Ok(Stabiliser { m })
    }

    /// The identity collineation.
    pub fn identity(ctx: &FieldCtx) -> Stabiliser {
        let one = ctx.one();
        Stabiliser {
            m: [[one, 0, 0], [0, one, 0], [0, 0, one]],
        }
    }

    /// Uniformly random stabiliser element.
    pub fn random<R: Rng>(ctx: &FieldCtx, rng: &mut R) -> Stabiliser {
        let size = ctx.size() as u32;
        loop {
            let e = |rng: &mut R| rng.gen_range(0..size) as Elt;
            let (x11, x12, x21, x22) = (e(rng), e(rng), e(rng), e(rng));
            let det = ctx.sub(ctx.mul(x11, x22), ctx.mul(x12, x21));
            if det == 0 {
                continue;
            }
            let (x31, x32) = (e(rng), e(rng));
            return Stabiliser {
                m: [[x11, x12, 0], [x21, x22, 0], [x31, x32, ctx.one()]],
            };
        }
    }

    /// Matrix entries.
    pub fn matrix(&self) -> &[[Elt; 3]; 3] {
        &self.m
    }

    /// Right action on a row vector `(a, b, c)` of the plane.
    pub fn act_triple(&self, ctx: &FieldCtx, a: Elt, b: Elt, c: Elt) -> [Elt; 3] {
        let m = &self.m;
        let dot = |col: usize| {
            ctx.add(
                ctx.add(ctx.mul(a, m[0][col]), ctx.mul(b, m[1][col])),
                ctx.mul(c, m[2][col]),
            )
        };
        [dot(0), dot(1), dot(2)]
    }

    /// Action `χ₀` on the plane.
    pub fn chi0(&self, ctx: &FieldCtx, plane_pt: &Point) -> Point {
        let [a, b, c] = [plane_pt.coords[0], plane_pt.coords[1], plane_pt.coords[2]];
        let im = self.act_triple(ctx, a, b, c);
        Point::new(ctx, ctx.n(), im.to_vec()).expect("collineations preserve nonzero")
    }

    /// Action `χ` on `Σ`: the same formula read on semantic triples.  The
    /// third semantic coordinate is untouched, so `Σ` maps to itself.
    pub fn chi(&self, ctx: &FieldCtx, sigma_pt: &Point) -> Point {
        let [a, b, c] = flat_to_sem(ctx, &sigma_pt.coords).expect("Σ point");
        let [a2, b2, c2] = self.act_triple(ctx, a, b, c);
        debug_assert_eq!(c2, c, "χ fixes the last semantic coordinate");
        sigma_point(ctx, a2, b2, c2).expect("collineations preserve nonzero")
    }

    /// Action `χ*` on `Σ*` (an `F_{q^n}`-linear map in the flat frame):
    /// block `i` of the image takes Frobenius-twisted coefficients
    /// `x11^{q^i}, x21^{q^i}, x31^{q^i}` (respectively the second column),
    /// and the last coordinate is fixed.
    pub fn chi_star(&self, ctx: &FieldCtx, star_pt: &Point) -> Point {
        Point::new(ctx, ctx.n(), self.chi_star_vec(ctx, &star_pt.coords))
            .expect("collineations preserve nonzero")
    }

    /// Vector-level action of `χ*`.
    pub fn chi_star_vec(&self, ctx: &FieldCtx, v: &[Elt]) -> Vec<Elt> {
        let n = ctx.n() as usize;
        debug_assert_eq!(v.len(), 2 * n + 1);
        let m = &self.m;
        let c = v[2 * n];
        let mut out = vec![0 as Elt; v.len()];
        for i in 0..n {
            let fi = i as u8;
            let x11 = ctx.frobenius(m[0][0], fi);
            let x21 = ctx.frobenius(m[1][0], fi);
            let x31 = ctx.frobenius(m[2][0], fi);
            let x12 = ctx.frobenius(m[0][1], fi);
            let x22 = ctx.frobenius(m[1][1], fi);
            let x32 = ctx.frobenius(m[2][1], fi);
            out[i] = ctx.add(
                ctx.add(ctx.mul(v[i], x11), ctx.mul(v[n + i], x21)),
                ctx.mul(c, x31),
            );
            out[n + i] = ctx.add(
                ctx.add(ctx.mul(v[i], x12), ctx.mul(v[n + i], x22)),
                ctx.mul(c, x32),
            );
        }
        out[2 * n] = c;
        out
    }

    /// Induced action on spread elements: `(a, b) ↦ (a·x11 + b·x21,
    /// a·x12 + b·x22)` at the same level.
    pub fn chi_spread(&self, ctx: &FieldCtx, e: &SpreadElt) -> SpreadElt {
        let m = &self.m;
        let a2 = ctx.add(ctx.mul(e.a, m[0][0]), ctx.mul(e.b, m[1][0]));
        let b2 = ctx.add(ctx.mul(e.a, m[0][1]), ctx.mul(e.b, m[1][1]));
        SpreadElt::new(ctx, a2, b2, e.level).expect("invertible block keeps (a,b) nonzero")
    }
}

/// All affine points of the plane, in a deterministic order.
pub fn plane_affine_points(ctx: &FieldCtx) -> Vec<Point> {
    let mut out = vec![];
    for a in 0..ctx.size() as Elt {
        for b in 0..ctx.size() as Elt {
            out.push(plane_point(ctx, a, b, ctx.one()).expect("affine point"));
        }
    }
    out
}

/// All points of the line at infinity of the plane.
pub fn plane_infinite_points(ctx: &FieldCtx) -> Vec<Point> {
    let mut out = vec![plane_point(ctx, ctx.one(), 0, 0).expect("point")];
    for a in 0..ctx.size() as Elt {
        out.push(plane_point(ctx, a, ctx.one(), 0).expect("point"));
    }
    out
}
