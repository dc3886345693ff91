//! Normal rational curves, ruled surfaces spanned by pairs of them, and the
//! projection construction that turns a subplane image into a covered point
//! set.
//!
//! A curve of degree `k` is stored by the `k + 1` coefficient vectors `v_0,
//! …, v_k` of a parametrisation `ρ(s, t) = Σ_i s^{k-i} t^i v_i`.  The
//! parameter `(s : t)` ranges over a projective line over a tower level
//! `F_{q^m}` while the points live in a (possibly different) ambient space;
//! both levels are recorded so that the same machinery covers curves of
//! `PG(2n, q)` and their extensions to `PG(2n, q^n)`.

use std::collections::BTreeSet;

use crate::abb::{flat_to_sem, iota_vec, sem_to_flat, sigma_width};
use crate::error::{Error, Result};
use crate::gf::{Elt, FieldCtx};
use crate::linalg;
use crate::proj::{Point, Subspace};
use crate::spread::indicator_contains;

// ------------------------------------------------------------ polynomials

/// Multiplies a homogeneous form in `(s, t)`, stored as coefficients of
/// ascending `t`-degree, by the linear form `cs·s + ct·t`.
fn poly_mul_linear(ctx: &FieldCtx, f: &[Elt], cs: Elt, ct: Elt) -> Vec<Elt> {
    let mut out = vec![ctx.zero(); f.len() + 1];
    for (d, &coeff) in f.iter().enumerate() {
        out[d] = ctx.add(out[d], ctx.mul(cs, coeff));
        out[d + 1] = ctx.add(out[d + 1], ctx.mul(ct, coeff));
    }
    out
}

/// Expands `∏_j (cs_j·s + ct_j·t)` into coefficients of ascending
/// `t`-degree.
pub(crate) fn poly_product(ctx: &FieldCtx, factors: &[(Elt, Elt)]) -> Vec<Elt> {
    let mut f = vec![ctx.one()];
    for &(cs, ct) in factors {
        f = poly_mul_linear(ctx, &f, cs, ct);
    }
    f
}

// ------------------------------------------------------------ combinations

/// Calls `f` on every `m`-element index subset of `0..len`, stopping early
/// when `f` returns `false`.  Returns whether all calls returned `true`.
pub(crate) fn for_each_combination(
    len: usize,
    m: usize,
    mut f: impl FnMut(&[usize]) -> bool,
) -> bool {
    if m > len {
        return true;
    }
    let mut idx: Vec<usize> = (0..m).collect();
    loop {
        if !f(&idx) {
            return false;
        }
        // Advance to the next combination in lexicographic order.
        let mut i = m;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if idx[i] != i + len - m {
                break;
            }
            if i == 0 {
                return true;
            }
        }
        idx[i] += 1;
        for j in i + 1..m {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

// ------------------------------------------------------------------ curves

/// A rational curve `ρ(s, t) = Σ_i s^{k-i} t^i v_i` with independent
/// coefficient vectors, together with its enumerated point set.
///
/// Equality, ordering, and hashing compare the point sets (plus the two
/// levels), not the chosen parametrisation: reparametrising a curve yields
/// an equal value.
#[derive(Clone, Debug)]
pub struct Curve {
    degree: u8,
    param_level: u8,
    point_level: u8,
    vectors: Vec<Vec<Elt>>,
    /// `((s, t), ρ(s, t))` in canonical parameter order: `(1, t)` for `t`
    /// ascending through `F_{q^param_level}`, then `(0, 1)`.
    entries: Vec<((Elt, Elt), Point)>,
    /// The same points, sorted.
    points: Vec<Point>,
}

impl PartialEq for Curve {
    fn eq(&self, other: &Self) -> bool {
        self.param_level == other.param_level
            && self.point_level == other.point_level
            && self.points == other.points
    }
}

impl Eq for Curve {}

impl PartialOrd for Curve {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Curve {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.param_level, self.point_level, &self.points).cmp(&(
            other.param_level,
            other.point_level,
            &other.points,
        ))
    }
}

impl std::hash::Hash for Curve {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        (self.param_level, self.point_level, &self.points).hash(state);
    }
}

impl Curve {
    /// Builds a curve from its coefficient vectors.
    ///
    /// Requires `degree >= 1`, exactly `degree + 1` vectors of a common
    /// width, linearly independent, with entries in the point-level
    /// subfield; both levels must divide `n`.
    pub fn new(
        ctx: &FieldCtx,
        degree: u8,
        vectors: Vec<Vec<Elt>>,
        param_level: u8,
        point_level: u8,
    ) -> Result<Curve> {
        if degree == 0 {
            return Err(Error::InvalidArgument(
                "a rational curve needs degree at least 1".into(),
            ));
        }
        if vectors.len() != degree as usize + 1 {
            return Err(Error::InvalidArgument(format!(
                "a degree-{degree} curve needs {} coefficient vectors, got {}",
                degree as usize + 1,
                vectors.len()
            )));
        }
        let width = vectors[0].len();
        if width < 2 || vectors.iter().any(|v| v.len() != width) {
            return Err(Error::InvalidArgument(
                "coefficient vectors must share a width of at least 2".into(),
            ));
        }
        for v in &vectors {
            for &x in v {
                if !ctx.in_subfield(x, point_level) {
                    return Err(Error::InvalidArgument(
                        "coefficient entries must lie in the point-level subfield".into(),
                    ));
                }
            }
        }
        let params = ctx.enumerate_subfield(param_level)?;
        ctx.enumerate_subfield(point_level)?;
        if linalg::rank(ctx, &vectors) != degree as usize + 1 {
            return Err(Error::InvalidArgument(
                "coefficient vectors must be linearly independent".into(),
            ));
        }

        let mut entries = Vec::with_capacity(params.len() + 1);
        for &t in params {
            let mut v = vec![ctx.zero(); width];
            let mut tp = ctx.one();
            for vec in &vectors {
                for (dst, &src) in v.iter_mut().zip(vec) {
                    *dst = ctx.add(*dst, ctx.mul(tp, src));
                }
                tp = ctx.mul(tp, t);
            }
            entries.push(((ctx.one(), t), Point::new(ctx, point_level, v)?));
        }
        entries.push((
            (ctx.zero(), ctx.one()),
            Point::new(ctx, point_level, vectors[degree as usize].clone())?,
        ));

        let mut points: Vec<Point> = entries.iter().map(|(_, p)| p.clone()).collect();
        points.sort();
        debug_assert!(
            points.windows(2).all(|w| w[0] != w[1]),
            "independent coefficient vectors give an injective parametrisation"
        );

        Ok(Curve {
            degree,
            param_level,
            point_level,
            vectors,
            entries,
            points,
        })
    }

    /// The degree `k`.
    pub fn degree(&self) -> u8 {
        self.degree
    }

    /// Tower level of the parameter line.
    pub fn param_level(&self) -> u8 {
        self.param_level
    }

    /// Tower level of the ambient point coordinates.
    pub fn point_level(&self) -> u8 {
        self.point_level
    }

    /// Width of the ambient coordinate vectors.
    pub fn width(&self) -> usize {
        self.vectors[0].len()
    }

    /// The coefficient vectors `v_0, …, v_k`.
    pub fn vectors(&self) -> &[Vec<Elt>] {
        &self.vectors
    }

    /// The point set, sorted.
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Parameter/point pairs in canonical parameter order.
    pub fn params_and_points(&self) -> &[((Elt, Elt), Point)] {
        &self.entries
    }

    /// Whether `p` lies on the curve.
    pub fn contains(&self, p: &Point) -> bool {
        self.points.binary_search(p).is_ok()
    }

    /// The parameter of `p`, if `p` lies on the curve.
    pub fn param_of(&self, p: &Point) -> Option<(Elt, Elt)> {
        self.entries
            .iter()
            .find(|(_, q)| q == p)
            .map(|&(st, _)| st)
    }

    /// Evaluates `ρ(s, t)` for a parameter in the parameter subfield.
    pub fn evaluate(&self, ctx: &FieldCtx, s: Elt, t: Elt) -> Result<Point> {
        if s == ctx.zero() && t == ctx.zero() {
            return Err(Error::InvalidArgument(
                "(0, 0) is not a projective parameter".into(),
            ));
        }
        if !ctx.in_subfield(s, self.param_level) || !ctx.in_subfield(t, self.param_level) {
            return Err(Error::InvalidArgument(
                "parameter outside the curve's parameter subfield".into(),
            ));
        }
        let k = self.degree as usize;
        let width = self.width();
        let mut v = vec![ctx.zero(); width];
        for (i, vec) in self.vectors.iter().enumerate() {
            let c = ctx.mul(ctx.pow(s, (k - i) as u64), ctx.pow(t, i as u64));
            for (dst, &src) in v.iter_mut().zip(vec) {
                *dst = ctx.add(*dst, ctx.mul(c, src));
            }
        }
        Point::new(ctx, self.point_level, v)
    }

    /// The flat spanned by the curve.
    pub fn span(&self, ctx: &FieldCtx) -> Subspace {
        Subspace::span(ctx, self.point_level, self.width(), &self.vectors)
    }

    /// The curve reparametrised by `(s, t) ↦ (s, t)·m`, an invertible
    /// matrix over the parameter subfield.  The point set is unchanged.
    pub fn reparametrized(&self, ctx: &FieldCtx, m: &[[Elt; 2]; 2]) -> Result<Curve> {
        for row in m {
            for &x in row {
                if !ctx.in_subfield(x, self.param_level) {
                    return Err(Error::InvalidArgument(
                        "reparametrisation entries must lie in the parameter subfield".into(),
                    ));
                }
            }
        }
        let det = ctx.sub(ctx.mul(m[0][0], m[1][1]), ctx.mul(m[0][1], m[1][0]));
        if det == ctx.zero() {
            return Err(Error::InvalidArgument(
                "reparametrisation matrix must be invertible".into(),
            ));
        }
        let k = self.degree as usize;
        let width = self.width();
        // Substitute s ↦ m00·s + m10·t and t ↦ m01·s + m11·t into each
        // monomial s^{k-i} t^i and collect coefficients per t-degree.
        let mut new_vectors = vec![vec![ctx.zero(); width]; k + 1];
        for (i, vec) in self.vectors.iter().enumerate() {
            let mut factors = Vec::with_capacity(k);
            factors.resize(k - i, (m[0][0], m[1][0]));
            factors.resize(k, (m[0][1], m[1][1]));
            let coeffs = poly_product(ctx, &factors);
            for (d, &c) in coeffs.iter().enumerate() {
                for (dst, &src) in new_vectors[d].iter_mut().zip(vec) {
                    *dst = ctx.add(*dst, ctx.mul(c, src));
                }
            }
        }
        let out = Curve::new(ctx, self.degree, new_vectors, self.param_level, self.point_level)?;
        debug_assert_eq!(out.points, self.points, "reparametrisation fixes the point set");
        Ok(out)
    }
}

// ------------------------------------------------------------------- arcs

/// Whether every `(flat_dim + 1)`-element subset of `pts` is linearly
/// independent, i.e. the points are in general position with respect to a
/// `flat_dim`-dimensional ambient flat.
pub fn is_arc(ctx: &FieldCtx, pts: &[Point], flat_dim: usize) -> bool {
    let m = (flat_dim + 1).min(pts.len());
    for_each_combination(pts.len(), m, |idx| {
        let rows: Vec<Vec<Elt>> = idx.iter().map(|&i| pts[i].coords().to_vec()).collect();
        linalg::rank(ctx, &rows) == m
    })
}

/// Decides whether a point set is the full point set of some rational
/// normal curve with parameters and points over the same level-`level`
/// subfield.
pub fn is_nrc(ctx: &FieldCtx, pts: &[Point], level: u8) -> Result<bool> {
    let fsize = ctx.enumerate_subfield(level)?.len();
    if pts.len() != fsize + 1 {
        return Ok(false);
    }
    let mut sorted = pts.to_vec();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Ok(false);
    }
    let rows: Vec<Vec<Elt>> = sorted.iter().map(|p| p.coords().to_vec()).collect();
    let k = match linalg::rank(ctx, &rows) {
        0 | 1 => return Ok(false),
        r => r - 1,
    };
    if k == 1 {
        // fsize + 1 distinct collinear points fill the whole line.
        return Ok(true);
    }
    if !is_arc(ctx, &sorted, k) {
        return Ok(false);
    }
    if k + 2 <= fsize {
        // Enough room to fit the curve through k + 3 of the points and
        // compare point sets.
        let subset: Vec<Point> = sorted[..k + 3].to_vec();
        return Ok(match nrc_through(ctx, &subset, level, level) {
            Ok(c) => c.points() == sorted.as_slice(),
            Err(_) => false,
        });
    }
    // k = fsize - 1: the points form a frame of their span, and every frame
    // is projectively equivalent to the standard curve's point set.
    // k = fsize: the points are a basis of their span, and every basis is
    // projectively equivalent to the standard curve's point set.
    Ok(true)
}

// ------------------------------------------------------------ nrc through

/// The unique rational normal curve of degree `k = pts.len() - 3` through
/// `k + 3` points in general position spanning a common `k`-flat.
///
/// With `u_0, …, u_k` the first `k + 1` points, `a = Σ a_i u_i` the next
/// and `b = Σ b_i u_i` the last, the curve is
/// `ρ(s, t) = Σ_i a_i b_i ∏_{j≠i} (a_j s - b_j t) · u_i`,
/// which passes through `u_m` at `(b_m : a_m)`, through `a` at `(0 : 1)`,
/// and through `b` at `(1 : 0)`.
///
/// Fails unless `k + 2 <= |F_{q^param_level}|` and the points are in
/// general position.
pub fn nrc_through(
    ctx: &FieldCtx,
    pts: &[Point],
    param_level: u8,
    point_level: u8,
) -> Result<Curve> {
    if pts.len() < 4 {
        return Err(Error::InvalidArgument(
            "fitting a curve of degree k needs k + 3 >= 4 points".into(),
        ));
    }
    let k = pts.len() - 3;
    let fsize = ctx.enumerate_subfield(param_level)?.len();
    if k + 2 > fsize {
        return Err(Error::InvalidArgument(format!(
            "degree {k} needs a parameter field with at least {} elements, have {fsize}",
            k + 2
        )));
    }
    let width = pts[0].coords().len();
    for p in pts {
        if p.level != point_level || p.coords().len() != width {
            return Err(Error::InvalidArgument(
                "interpolation points must share the curve's level and width".into(),
            ));
        }
    }
    let rows: Vec<Vec<Elt>> = pts.iter().map(|p| p.coords().to_vec()).collect();
    if linalg::rank(ctx, &rows) != k + 1 || !is_arc(ctx, pts, k) {
        return Err(Error::InvalidArgument(
            "interpolation points must be in general position in a common flat".into(),
        ));
    }

    let basis: Vec<Vec<Elt>> = rows[..=k].to_vec();
    let avec = linalg::solve_in_basis(ctx, &basis, &rows[k + 1])
        .expect("the span of all points equals the span of the first k + 1");
    let bvec = linalg::solve_in_basis(ctx, &basis, &rows[k + 2])
        .expect("the span of all points equals the span of the first k + 1");
    debug_assert!(
        avec.iter().chain(&bvec).all(|&c| c != ctx.zero()),
        "general position forces all interpolation coefficients to be nonzero"
    );

    let mut vectors = vec![vec![ctx.zero(); width]; k + 1];
    for i in 0..=k {
        let weight = ctx.mul(avec[i], bvec[i]);
        let factors: Vec<(Elt, Elt)> = (0..=k)
            .filter(|&j| j != i)
            .map(|j| (avec[j], ctx.neg(bvec[j])))
            .collect();
        let coeffs = poly_product(ctx, &factors);
        for (d, &c) in coeffs.iter().enumerate() {
            let c = ctx.mul(weight, c);
            for (dst, &src) in vectors[d].iter_mut().zip(&basis[i]) {
                *dst = ctx.add(*dst, ctx.mul(c, src));
            }
        }
    }

    let curve = Curve::new(ctx, k as u8, vectors, param_level, point_level)?;
    debug_assert!(
        pts.iter().all(|p| curve.contains(p)),
        "the interpolating curve passes through every input point"
    );
    Ok(curve)
}

// -------------------------------------------------------------- extension

/// Extends a curve to parameters over the full level-`n` field.
///
/// A curve of `PG(2n, q)` (point level 1, ambient width `2n + 1`) is first
/// lifted coordinate-wise through the embedding into `PG(2n, q^n)`; a curve
/// whose points already carry level-`n` coordinates keeps its coefficient
/// vectors and merely enlarges the parameter line.
pub fn extend_curve(ctx: &FieldCtx, c: &Curve) -> Result<Curve> {
    let n = ctx.n();
    if c.param_level() == n {
        return Err(Error::InvalidArgument(
            "curve already has parameters over the full field".into(),
        ));
    }
    if c.point_level() == n {
        return Curve::new(ctx, c.degree(), c.vectors().to_vec(), n, n);
    }
    if c.point_level() == 1 && c.width() == sigma_width(ctx) {
        let mut lifted = Vec::with_capacity(c.vectors().len());
        for v in c.vectors() {
            let [a, b, cc] = flat_to_sem(ctx, v)?;
            lifted.push(iota_vec(ctx, a, b, cc));
        }
        return Curve::new(ctx, c.degree(), lifted, n, n);
    }
    Err(Error::InvalidArgument(
        "extension is defined for curves of the rank-(2n+1) model or for full-level coordinates"
            .into(),
    ))
}

/// Classifies the hyperplane-at-infinity points of an extended curve by the
/// level-`level` indicator flat containing them, if any.
///
/// Returns the curve points whose last coordinate vanishes, each paired
/// with the index `j < level` of its indicator flat or `None`.
pub fn indicator_intersection(
    ctx: &FieldCtx,
    c: &Curve,
    level: u8,
) -> Result<Vec<(Point, Option<u8>)>> {
    if c.point_level() != ctx.n() || c.width() != sigma_width(ctx) {
        return Err(Error::InvalidArgument(
            "indicator classification needs an extended curve in the rank-(2n+1) model".into(),
        ));
    }
    ctx.enumerate_subfield(level)?;
    let last = c.width() - 1;
    let mut out = Vec::new();
    for p in c.points() {
        if p.coords()[last] != ctx.zero() {
            continue;
        }
        let j = (0..level).find(|&j| indicator_contains(ctx, level, j, p));
        out.push((p.clone(), j));
    }
    Ok(out)
}

// ------------------------------------------------- curves from a subline

/// Conjugate linear factors `∏_{i in lo..hi} (ω^{q^i} s + t)` expanded by
/// ascending `t`-degree.
fn conjugate_product(ctx: &FieldCtx, omega: Elt, lo: u8, hi: u8) -> Vec<Elt> {
    let factors: Vec<(Elt, Elt)> = (lo..hi)
        .map(|i| (ctx.frobenius(omega, i), ctx.one()))
        .collect();
    poly_product(ctx, &factors)
}

/// The curve of `PG(2n, q)` carrying the image of the canonical external
/// line `{(0, 1, ω + t)} ∪ {(0, 0, 1)}` for `ω` of degree `k >= 2`.
///
/// With `F(s, t) = ∏_{i<k} (ω^{q^i} s + t)` (the norm form, coefficients in
/// `F_q`) and `G(s, t) = s·∏_{0<i<k} (ω^{q^i} s + t)`, the parametrisation
/// is `(0, G, F)` read through the flat coordinate model: `(1, t)` maps to
/// the image of `(0, 1, ω + t)` and `(0, 1)` to the image of `(0, 0, 1)`.
pub fn curve_c_omega(ctx: &FieldCtx, omega: Elt) -> Result<Curve> {
    let k = ctx.subfield_degree(omega);
    if k < 2 {
        return Err(Error::InvalidArgument(
            "the carrier curve needs a generator of degree at least 2".into(),
        ));
    }
    let f = conjugate_product(ctx, omega, 0, k);
    let g_inner = conjugate_product(ctx, omega, 1, k);
    let mut vectors = Vec::with_capacity(k as usize + 1);
    for d in 0..=k as usize {
        // Multiplying the inner product by s shifts no t-degrees: its
        // coefficient of t^d is reused directly, with 0 past its degree.
        let g_d = g_inner.get(d).copied().unwrap_or_else(|| ctx.zero());
        vectors.push(sem_to_flat(ctx, ctx.zero(), g_d, f[d])?);
    }
    Curve::new(ctx, k, vectors, 1, 1)
}

/// The companion curve of degree `k - 1` inside the spread element
/// `{(x, 0, 0)}`, parametrised by `(G₂(s, t), 0, 0)` with
/// `G₂ = ∏_{0<i<k} (ω^{q^i} s + t)`.
pub fn curve_n_omega(ctx: &FieldCtx, omega: Elt) -> Result<Curve> {
    let k = ctx.subfield_degree(omega);
    if k < 2 {
        return Err(Error::InvalidArgument(
            "the companion curve needs a generator of degree at least 2".into(),
        ));
    }
    let g2 = conjugate_product(ctx, omega, 1, k);
    let mut vectors = Vec::with_capacity(k as usize);
    for &g_d in &g2 {
        vectors.push(sem_to_flat(ctx, g_d, ctx.zero(), ctx.zero())?);
    }
    Curve::new(ctx, k - 1, vectors, 1, 1)
}

// ----------------------------------------------------------------- scroll

/// The ruled surface spanned by two curves with complementary spans: the
/// lines `⟨ρ₁(s, t), ρ₂((s, t)·ψ)⟩` for `(s : t)` on the parameter line.
#[derive(Clone, Debug)]
pub struct Scroll {
    base: Curve,
    director: Curve,
    psi: [[Elt; 2]; 2],
    /// Generator lines in the base curve's parameter order.
    lines: Vec<Subspace>,
    lines_sorted: Vec<Subspace>,
    points: Vec<Point>,
}

impl PartialEq for Scroll {
    fn eq(&self, other: &Self) -> bool {
        self.lines_sorted == other.lines_sorted
    }
}

impl Eq for Scroll {}

impl PartialOrd for Scroll {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scroll {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.lines_sorted.cmp(&other.lines_sorted)
    }
}

impl std::hash::Hash for Scroll {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.lines_sorted.hash(state);
    }
}

impl Scroll {
    /// The curve indexing the generator lines.
    pub fn base(&self) -> &Curve {
        &self.base
    }

    /// The second curve.
    pub fn director(&self) -> &Curve {
        &self.director
    }

    /// The parameter matching between the two curves.
    pub fn psi(&self) -> &[[Elt; 2]; 2] {
        &self.psi
    }

    /// Generator lines in the base curve's parameter order.
    pub fn lines(&self) -> &[Subspace] {
        &self.lines
    }

    /// The union of the generator lines, sorted.
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Whether `p` lies on some generator line.
    pub fn contains(&self, p: &Point) -> bool {
        self.points.binary_search(p).is_ok()
    }
}

/// Applies a 2×2 parameter matrix on the right of a row parameter:
/// `(s, t) ↦ (s·m00 + t·m10, s·m01 + t·m11)`.
pub fn apply_param_matrix(ctx: &FieldCtx, m: &[[Elt; 2]; 2], s: Elt, t: Elt) -> (Elt, Elt) {
    (
        ctx.add(ctx.mul(s, m[0][0]), ctx.mul(t, m[1][0])),
        ctx.add(ctx.mul(s, m[0][1]), ctx.mul(t, m[1][1])),
    )
}

/// Canonical representatives of the projective line's collineation group
/// over the level-`level` subfield: invertible 2×2 matrices with first
/// nonzero entry scaled to one, in lexicographic order.
pub fn param_collineations(ctx: &FieldCtx, level: u8) -> Result<Vec<[[Elt; 2]; 2]>> {
    let sub = ctx.enumerate_subfield(level)?.to_vec();
    let mut out = Vec::new();
    for &a in &sub {
        for &b in &sub {
            for &c in &sub {
                for &d in &sub {
                    if ctx.sub(ctx.mul(a, d), ctx.mul(b, c)) == ctx.zero() {
                        continue;
                    }
                    let first = [a, b, c, d]
                        .into_iter()
                        .find(|&x| x != ctx.zero())
                        .expect("an invertible matrix is nonzero");
                    if first != ctx.min_nonzero(level) {
                        continue;
                    }
                    out.push([[a, b], [c, d]]);
                }
            }
        }
    }
    Ok(out)
}

/// Builds the scroll of two curves with complementary spans under the
/// parameter matching `ψ`.
pub fn scroll_build(
    ctx: &FieldCtx,
    base: &Curve,
    director: &Curve,
    psi: [[Elt; 2]; 2],
) -> Result<Scroll> {
    if base.param_level() != director.param_level()
        || base.point_level() != director.point_level()
        || base.width() != director.width()
    {
        return Err(Error::InvalidArgument(
            "scroll curves must share parameter level, point level, and width".into(),
        ));
    }
    for row in &psi {
        for &x in row {
            if !ctx.in_subfield(x, base.param_level()) {
                return Err(Error::InvalidArgument(
                    "parameter matching entries must lie in the parameter subfield".into(),
                ));
            }
        }
    }
    let det = ctx.sub(ctx.mul(psi[0][0], psi[1][1]), ctx.mul(psi[0][1], psi[1][0]));
    if det == ctx.zero() {
        return Err(Error::InvalidArgument(
            "parameter matching matrix must be invertible".into(),
        ));
    }
    if base.span(ctx).meet(ctx, &director.span(ctx)).rank() != 0 {
        return Err(Error::InvalidArgument(
            "scroll curves must span complementary flats".into(),
        ));
    }

    let level = base.point_level();
    let width = base.width();
    let mut lines = Vec::with_capacity(base.params_and_points().len());
    for ((s, t), p) in base.params_and_points() {
        let (s2, t2) = apply_param_matrix(ctx, &psi, *s, *t);
        let q = director.evaluate(ctx, s2, t2)?;
        let line = Subspace::span(
            ctx,
            level,
            width,
            &[p.coords().to_vec(), q.coords().to_vec()],
        );
        debug_assert_eq!(line.rank(), 2, "disjoint spans give honest lines");
        lines.push(line);
    }
    debug_assert!(
        for_each_combination(lines.len(), 2, |idx| {
            lines[idx[0]].meet(ctx, &lines[idx[1]]).rank() == 0
        }),
        "generator lines of a scroll are pairwise disjoint"
    );

    let mut point_set = BTreeSet::new();
    for line in &lines {
        point_set.extend(line.points(ctx));
    }
    let per_line = ctx.enumerate_subfield(level)?.len() + 1;
    debug_assert_eq!(
        point_set.len(),
        lines.len() * per_line,
        "a scroll has (number of lines) × (points per line) points"
    );

    let mut lines_sorted = lines.clone();
    lines_sorted.sort();
    Ok(Scroll {
        base: base.clone(),
        director: director.clone(),
        psi,
        lines,
        lines_sorted,
        points: point_set.into_iter().collect(),
    })
}

/// Searches for the unique parameter matching `ψ` over the base subfield
/// whose scroll, extended to the full field, has a generator line through
/// both `p` and `q`.
///
/// `p` must lie on the extension of `base` but outside both the base curve
/// and its intermediate quadratic extension, and `q` on the extension of
/// `director` outside the director itself.  Returns `None` when no
/// matching exists.
pub fn scroll_match(
    ctx: &FieldCtx,
    base: &Curve,
    director: &Curve,
    p: &Point,
    q: &Point,
) -> Result<Option<Scroll>> {
    let ext_base = extend_curve(ctx, base)?;
    let ext_dir = extend_curve(ctx, director)?;
    let (sp, tp) = ext_base.param_of(p).ok_or_else(|| {
        Error::InvalidArgument("point is not on the extension of the base curve".into())
    })?;
    let (sq, tq) = ext_dir.param_of(q).ok_or_else(|| {
        Error::InvalidArgument("point is not on the extension of the director curve".into())
    })?;
    let level = base.param_level();
    if sp == ctx.zero() || ctx.in_subfield(tp, level) {
        return Err(Error::InvalidArgument(
            "first point must lie outside the base curve".into(),
        ));
    }
    if sq == ctx.zero() || ctx.in_subfield(tq, level) {
        return Err(Error::InvalidArgument(
            "second point must lie outside the director curve".into(),
        ));
    }
    let x = tp;
    if ctx.frobenius(x, 2 * level) == x {
        return Err(Error::InvalidArgument(
            "first point's parameter lies in the quadratic extension of the base subfield".into(),
        ));
    }

    let mut found: Option<[[Elt; 2]; 2]> = None;
    for psi in param_collineations(ctx, level)? {
        let (s2, t2) = apply_param_matrix(ctx, &psi, sp, tp);
        // (s2 : t2) == (sq : tq) projectively.
        if ctx.mul(s2, tq) == ctx.mul(t2, sq) {
            debug_assert!(
                found.is_none(),
                "at most one parameter matching joins the two points"
            );
            found = Some(psi);
            #[cfg(not(debug_assertions))]
            break;
        }
    }
    match found {
        Some(psi) => Ok(Some(scroll_build(ctx, base, director, psi)?)),
        None => Ok(None),
    }
}

// ------------------------------------------------------------- projection

/// The image in `PG(2n, q)` of the canonical subplane `π_{ω,λ}` under the
/// point correspondence: the `q² + q + 1` affine points
/// `φ(s, u, sλ + uω + t)` for `(s, t, u)` ranging over `PG(2, q)`.
///
/// Requires `1, ω, λ` linearly independent over `F_q`, which makes every
/// subplane point affine.  Returns the sorted point set.
pub fn veronese_projection(ctx: &FieldCtx, omega: Elt, lambda: Elt) -> Result<Vec<Point>> {
    let one = ctx.one();
    let deps = vec![
        ctx.q_coords(one).to_vec(),
        ctx.q_coords(omega).to_vec(),
        ctx.q_coords(lambda).to_vec(),
    ];
    if linalg::rank(ctx, &deps) != 3 {
        return Err(Error::InvalidArgument(
            "1, ω, λ must be linearly independent over the base subfield".into(),
        ));
    }

    let sub = ctx.enumerate_subfield(1)?.to_vec();
    let mut triples: Vec<(Elt, Elt, Elt)> = Vec::new();
    for &t in &sub {
        for &u in &sub {
            triples.push((one, t, u));
        }
    }
    for &t in &sub {
        triples.push((ctx.zero(), t, one));
    }
    triples.push((ctx.zero(), one, ctx.zero()));

    let mut out = BTreeSet::new();
    for (s, t, u) in triples {
        let c = ctx.add(ctx.add(ctx.mul(s, lambda), ctx.mul(u, omega)), t);
        debug_assert_ne!(c, ctx.zero(), "independence keeps every subplane point affine");
        let ci = ctx.inv(c);
        out.insert(crate::abb::sigma_point(
            ctx,
            ctx.mul(s, ci),
            ctx.mul(u, ci),
            one,
        )?);
    }
    let q = sub.len();
    debug_assert_eq!(out.len(), q * q + q + 1, "the projection is injective");
    Ok(out.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abb::{abb_map, embed_iota, PhiImage};
    use crate::spread::SpreadElt;
    use crate::subobj::{subline_canonical, subplane_canonical};

    fn res_point(ctx: &FieldCtx, level: u8, coords: &[u16]) -> Point {
        let v: Vec<Elt> = coords.iter().map(|&r| ctx.from_residue(r)).collect();
        Point::new(ctx, level, v).expect("nonzero test coordinates")
    }

    #[test]
    fn standard_conic_has_expected_points_and_is_recognised() {
        let f = FieldCtx::new(3, 1, 2).unwrap();
        let vectors = vec![
            vec![f.from_residue(1), f.zero(), f.zero()],
            vec![f.zero(), f.from_residue(1), f.zero()],
            vec![f.zero(), f.zero(), f.from_residue(1)],
        ];
        let c = Curve::new(&f, 2, vectors, 1, 1).unwrap();
        assert_eq!(c.points().len(), 4, "a conic over F_3 has q + 1 = 4 points");
        for ((s, t), p) in c.params_and_points() {
            let expect = Point::new(
                &f,
                1,
                vec![f.mul(*s, *s), f.mul(*s, *t), f.mul(*t, *t)],
            )
            .unwrap();
            assert_eq!(*p, expect, "the standard conic parametrises (s², st, t²)");
        }
        assert!(is_arc(&f, c.points(), 2), "no three conic points are collinear");
        assert!(
            is_nrc(&f, c.points(), 1).unwrap(),
            "the conic's point set is recognised"
        );

        // Over F_3 any 4-point planar arc is a conic, so a negative needs a
        // collinear triple.
        let broken: Vec<Point> = [[1u16, 0, 0], [0, 0, 1], [1, 0, 1], [1, 1, 1]]
            .iter()
            .map(|c| res_point(&f, 1, c))
            .collect();
        assert!(
            !is_nrc(&f, &broken, 1).unwrap(),
            "a set with a collinear triple is not recognised"
        );
    }

    #[test]
    fn conic_through_five_points_matches_independent_computation() {
        let f = FieldCtx::new(5, 1, 2).unwrap();
        let pts: Vec<Point> = [
            [1, 0, 0],
            [0, 1, 0],
            [0, 0, 1],
            [1, 1, 1],
            [1, 2, 3],
        ]
        .iter()
        .map(|c| res_point(&f, 1, c))
        .collect();
        let c = nrc_through(&f, &pts, 1, 1).unwrap();
        assert_eq!(c.degree(), 2, "five points determine a conic");
        assert_eq!(c.points().len(), 6, "a conic over F_5 has 6 points");
        for p in &pts {
            assert!(c.contains(p), "the conic passes through every input point");
        }
        let sixth = res_point(&f, 1, &[1, 3, 4]);
        assert!(
            c.contains(&sixth),
            "the remaining conic point is (1, 3, 4)"
        );

        // The parameter convention: the second-to-last input sits at (0:1),
        // the last at (1:0).
        assert_eq!(
            c.param_of(&pts[3]).unwrap(),
            (f.zero(), f.one()),
            "second-to-last interpolation point takes parameter (0:1)"
        );
        assert_eq!(
            c.param_of(&pts[4]).unwrap(),
            (f.one(), f.zero()),
            "last interpolation point takes parameter (1:0)"
        );

        // Uniqueness: the conic through any five of the six points is the
        // same curve.
        let mut all = c.points().to_vec();
        all.sort();
        assert!(for_each_combination(6, 5, |idx| {
            let sub: Vec<Point> = idx.iter().map(|&i| all[i].clone()).collect();
            nrc_through(&f, &sub, 1, 1).unwrap() == c
        }));
    }

    #[test]
    fn fitting_rejects_degenerate_inputs() {
        let f = FieldCtx::new(5, 1, 2).unwrap();
        // Three collinear among five: not an arc.
        let pts: Vec<Point> = [
            [1, 0, 0],
            [0, 1, 0],
            [1, 1, 0],
            [0, 0, 1],
            [1, 2, 3],
        ]
        .iter()
        .map(|c| res_point(&f, 1, c))
        .collect();
        assert!(
            nrc_through(&f, &pts, 1, 1).is_err(),
            "collinear triples are rejected"
        );

        // Degree 2 over F_3 is fine (k + 2 = 4 > 3 fails): the parameter
        // field is too small.
        let f3 = FieldCtx::new(3, 1, 2).unwrap();
        let pts: Vec<Point> = [
            [1, 0, 0],
            [0, 1, 0],
            [0, 0, 1],
            [1, 1, 1],
            [1, 2, 1],
        ]
        .iter()
        .map(|c| res_point(&f3, 1, c))
        .collect();
        assert!(
            nrc_through(&f3, &pts, 1, 1).is_err(),
            "k + 2 > q has no interpolation guarantee and is refused"
        );
    }

    #[test]
    fn carrier_curve_matches_the_point_correspondence_image() {
        let f = FieldCtx::new(3, 1, 2).unwrap();
        let omega = f.beta();
        assert_eq!(f.subfield_degree(omega), 2, "β generates the full tower");
        let c = curve_c_omega(&f, omega).unwrap();
        assert_eq!(c.degree(), 2, "the carrier of a degree-2 generator is a conic");

        let line = subline_canonical(&f, 1, omega).unwrap();
        let mut expected: Vec<Point> = line
            .points()
            .iter()
            .map(|p| match abb_map(&f, p).unwrap() {
                PhiImage::Affine(pt) => pt,
                PhiImage::Spread(_) => panic!("an external line has affine points only"),
            })
            .collect();
        expected.sort();
        assert_eq!(
            c.points(),
            expected.as_slice(),
            "the carrier curve is exactly the image of the external line"
        );

        // Frozen coefficient vectors: (0, 2β, 1), (0, 1, 0), (0, 0, 1) in
        // the (a, b, c) reading of flat coordinates.
        let two = f.from_residue(2);
        let expect_vecs = vec![
            sem_to_flat(&f, f.zero(), f.mul(two, omega), f.one()).unwrap(),
            sem_to_flat(&f, f.zero(), f.one(), f.zero()).unwrap(),
            sem_to_flat(&f, f.zero(), f.zero(), f.one()).unwrap(),
        ];
        assert_eq!(c.vectors(), expect_vecs.as_slice(), "frozen coefficient vectors");
    }

    #[test]
    fn companion_curve_lies_in_the_first_spread_element() {
        let f = FieldCtx::new(3, 2, 2).unwrap();
        let omega = f.beta();
        let nc = curve_n_omega(&f, omega).unwrap();
        assert_eq!(nc.degree(), 1, "k - 1 = 1 for a degree-2 generator");
        let elt = SpreadElt::new(&f, f.one(), f.zero(), 2).unwrap();
        let member = elt.subspace(&f);
        for p in nc.points() {
            assert!(
                member.contains(&f, p),
                "companion curve points stay inside the spread element (1, 0)"
            );
        }
    }

    #[test]
    fn extension_contains_the_embedded_curve_and_meets_indicator_flats() {
        let f = FieldCtx::new(3, 2, 2).unwrap();
        let c = curve_c_omega(&f, f.beta()).unwrap();
        let ext = extend_curve(&f, &c).unwrap();
        assert_eq!(
            ext.points().len(),
            usize::from(f.q()).pow(2) + 1,
            "the extension has q^n + 1 points"
        );
        for p in c.points() {
            let lifted = embed_iota(&f, p).unwrap();
            assert!(ext.contains(&lifted), "ι maps the curve into its extension");
        }

        let hits = indicator_intersection(&f, &ext, 2).unwrap();
        assert_eq!(hits.len(), 2, "a degree-2 extension meets infinity in 2 points");
        let mut js: Vec<Option<u8>> = hits.iter().map(|(_, j)| *j).collect();
        js.sort();
        assert_eq!(
            js,
            vec![Some(0), Some(1)],
            "the two infinite points sit on distinct indicator flats"
        );
    }

    #[test]
    fn extension_is_independent_of_the_fitting_subset() {
        let f = FieldCtx::new(5, 1, 2).unwrap();
        let c = curve_c_omega(&f, f.beta()).unwrap();
        let all = c.points().to_vec();
        let first: Vec<Point> = all[..5].to_vec();
        let last: Vec<Point> = all[1..].to_vec();
        let c1 = nrc_through(&f, &first, 1, 1).unwrap();
        let c2 = nrc_through(&f, &last, 1, 1).unwrap();
        assert_eq!(c1, c, "the fitted conic recovers the carrier curve");
        assert_eq!(c1, c2, "both subsets determine the same conic");
        assert_eq!(
            extend_curve(&f, &c1).unwrap(),
            extend_curve(&f, &c2).unwrap(),
            "extensions agree for curves fitted from different subsets"
        );
    }

    #[test]
    fn scroll_lines_are_disjoint_and_reparametrisation_invariant() {
        let f = FieldCtx::new(3, 2, 2).unwrap();
        let omega = f.beta();
        let c1 = curve_c_omega(&f, omega).unwrap();
        let c2 = curve_n_omega(&f, omega).unwrap();
        let one = f.one();
        let zero = f.zero();
        let ident = [[one, zero], [zero, one]];
        let s = scroll_build(&f, &c1, &c2, ident).unwrap();
        let q = usize::from(f.q());
        assert_eq!(s.lines().len(), q + 1, "one generator line per parameter");
        assert_eq!(
            s.points().len(),
            (q + 1) * (q + 1),
            "disjoint generator lines cover (q+1)² points"
        );

        // Reparametrising the base curve by m while composing the matching
        // with m reproduces the same line set.
        let m = [[one, one], [zero, one]];
        let c1m = c1.reparametrized(&f, &m).unwrap();
        assert_eq!(c1m, c1, "reparametrisation keeps the point set");
        let s2 = scroll_build(&f, &c1m, &c2, m).unwrap();
        assert_eq!(s, s2, "the scroll does not depend on the parametrisation");
    }

    #[test]
    fn scroll_match_finds_the_matching_and_validates_parameters() {
        let f = FieldCtx::new(3, 1, 3).unwrap();
        let omega = f.beta();
        assert_eq!(f.subfield_degree(omega), 3);
        let c1 = curve_c_omega(&f, omega).unwrap();
        let c2 = curve_n_omega(&f, omega).unwrap();
        let ext1 = extend_curve(&f, &c1).unwrap();
        let ext2 = extend_curve(&f, &c2).unwrap();

        let one = f.one();
        let zero = f.zero();
        let two = f.from_residue(2);
        let x = omega;
        let psi_true = [[one, two], [zero, one]];
        let (sy, ty) = apply_param_matrix(&f, &psi_true, one, x);
        let p = ext1.evaluate(&f, one, x).unwrap();
        let q = ext2.evaluate(&f, sy, ty).unwrap();

        let found = scroll_match(&f, &c1, &c2, &p, &q).unwrap();
        let scroll = found.expect("a matching exists by construction");
        assert_eq!(*scroll.psi(), psi_true, "the constructed matching is recovered");
        assert_eq!(
            scroll,
            scroll_build(&f, &c1, &c2, psi_true).unwrap(),
            "the returned scroll is the one built from the matching"
        );

        // A base-field parameter is rejected: such a point lies on the
        // base curve itself.
        let p_base = ext1.evaluate(&f, one, two).unwrap();
        assert!(
            scroll_match(&f, &c1, &c2, &p_base, &q).is_err(),
            "points on the base curve are rejected"
        );
    }

    #[test]
    fn scroll_match_rejects_quadratic_parameters_and_can_fail() {
        let f = FieldCtx::new(3, 1, 4).unwrap();
        // A degree-4 generator for the carrier, so spans fill PG(8, 3).
        let omega = f.beta();
        assert_eq!(f.subfield_degree(omega), 4);
        let c1 = curve_c_omega(&f, omega).unwrap();
        let c2 = curve_n_omega(&f, omega).unwrap();
        let ext1 = extend_curve(&f, &c1).unwrap();
        let ext2 = extend_curve(&f, &c2).unwrap();
        let one = f.one();

        // A parameter in the quadratic subfield F_9 \ F_3 violates the
        // hypothesis of the matching lemma.
        let quad = f
            .enumerate_subfield(2)
            .unwrap()
            .iter()
            .copied()
            .find(|&x| !f.in_subfield(x, 1))
            .unwrap();
        let p_quad = ext1.evaluate(&f, one, quad).unwrap();
        let q0 = ext2.evaluate(&f, one, omega).unwrap();
        assert!(
            scroll_match(&f, &c1, &c2, &p_quad, &q0).is_err(),
            "quadratic-extension parameters are rejected"
        );

        // With 72 admissible director parameters and only 24 matchings,
        // some pair admits none.
        let p = ext1.evaluate(&f, one, omega).unwrap();
        let mut seen_none = false;
        let mut seen_some = false;
        for &y in f.enumerate_subfield(4).unwrap() {
            if f.in_subfield(y, 1) {
                continue;
            }
            let q = ext2.evaluate(&f, one, y).unwrap();
            match scroll_match(&f, &c1, &c2, &p, &q).unwrap() {
                Some(_) => seen_some = true,
                None => seen_none = true,
            }
            if seen_none && seen_some {
                break;
            }
        }
        assert!(seen_some, "some director point shares a generator with p");
        assert!(seen_none, "some director point shares no generator with p");
    }

    #[test]
    fn recognition_handles_small_field_degrees() {
        // Full line: 4 collinear points over F_3.
        let f = FieldCtx::new(3, 1, 2).unwrap();
        let line = Subspace::span(
            &f,
            1,
            3,
            &[
                vec![f.one(), f.zero(), f.zero()],
                vec![f.zero(), f.one(), f.zero()],
            ],
        );
        let pts = line.points(&f);
        assert!(is_nrc(&f, &pts, 1).unwrap(), "a full line is a degree-1 curve");
        assert!(
            !is_nrc(&f, &pts[..3], 1).unwrap(),
            "three points are too few over F_3"
        );

        // Four independent points in PG(4, 3): degree q = 3 by basis
        // transitivity.
        let f4 = FieldCtx::new(3, 1, 4).unwrap();
        let basis: Vec<Point> = (0..4)
            .map(|i| {
                let mut v = vec![f4.zero(); 5];
                v[i] = f4.one();
                Point::new(&f4, 1, v).unwrap()
            })
            .collect();
        assert!(
            is_nrc(&f4, &basis, 1).unwrap(),
            "q + 1 independent points form a degree-q curve"
        );

        // A 4-point frame of a plane: degree q - 1 = 2 by frame
        // transitivity.
        let frame: Vec<Point> = [[1u16, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0], [1, 1, 1, 0, 0]]
            .iter()
            .map(|c| {
                let v: Vec<Elt> = c.iter().map(|&r| f4.from_residue(r)).collect();
                Point::new(&f4, 1, v).unwrap()
            })
            .collect();
        assert!(
            is_nrc(&f4, &frame, 1).unwrap(),
            "a frame of a plane is a conic over F_3"
        );
        let degenerate: Vec<Point> = [[1u16, 0, 0, 0, 0], [0, 1, 0, 0, 0], [1, 1, 0, 0, 0], [0, 0, 1, 0, 0]]
            .iter()
            .map(|c| {
                let v: Vec<Elt> = c.iter().map(|&r| f4.from_residue(r)).collect();
                Point::new(&f4, 1, v).unwrap()
            })
            .collect();
        assert!(
            !is_nrc(&f4, &degenerate, 1).unwrap(),
            "a set with three collinear points is not a curve"
        );
    }

    #[test]
    fn projection_of_the_canonical_subplane_matches_the_direct_image() {
        let f = FieldCtx::new(3, 1, 3).unwrap();
        let omega = f.beta();
        let lambda = f.mul(omega, omega);
        let s = veronese_projection(&f, omega, lambda).unwrap();
        let q = usize::from(f.q());
        assert_eq!(s.len(), q * q + q + 1, "the projection of a subplane has q²+q+1 points");

        let plane = subplane_canonical(&f, 1, omega, lambda).unwrap();
        let mut expected: Vec<Point> = plane
            .points()
            .iter()
            .map(|p| match abb_map(&f, p).unwrap() {
                PhiImage::Affine(pt) => pt,
                PhiImage::Spread(_) => panic!("an external subplane has affine points only"),
            })
            .collect();
        expected.sort();
        assert_eq!(s, expected, "projection agrees with the mapped subplane");

        assert!(
            veronese_projection(&f, omega, f.add(omega, f.one())).is_err(),
            "dependent 1, ω, λ are rejected"
        );
    }
}
