//! Desarguesian spreads, subspreads, reguli, and indicator sets.
//!
//! For every divisor `k | n` the hyperplane at infinity of `Σ` is
//! partitioned by the level-`k` family: the `(k-1)`-flats
//! `{(ax, bx, 0) : x ∈ F_{q^k}^*}` indexed by parameters `(a, b) ≠ (0, 0)`
//! taken up to `F_{q^k}^*`-scalars.  Level `n` is the Desarguesian spread
//! realising the line at infinity of the plane; lower levels are its
//! canonical subspreads.
//!
//! Indicator sets live in `Σ*`: the level-`k` family has `k` conjugate
//! pieces `Π, Π^σ, …, Π^{σ^{k-1}}`, where `Π` consists of the points with
//! coordinate support on positions `≡ 0 (mod k)` in both blocks that are
//! projectively fixed by `σ^k`.  Every level-`k` element is recovered from
//! one point per piece (a conjugate orbit), whose span meets the embedded
//! hyperplane at infinity exactly in that element.

use serde::{Deserialize, Serialize};

use crate::abb::{flat_to_sem, sem_to_flat, sigma_vec, sigma_width};
use crate::error::{Error, Result};
use crate::gf::{Elt, FieldCtx};
use crate::proj::{Point, Subspace};

/// One member of the level-`k` family at infinity, canonically parametrised.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SpreadElt {
    /// First parameter (canonical representative).
    pub a: Elt,
    /// Second parameter (canonical representative).
    pub b: Elt,
    /// Tower level `k | n`.
    pub level: u8,
}

impl SpreadElt {
    /// Canonicalizes the parameter pair `(a, b) ≠ (0, 0)` modulo
    /// `F_{q^k}^*`-scalars (lexicographic minimum of the orbit).
    ///
    /// Scaling by the *full* multiplicative group would identify distinct
    /// point sets: `(λa, λb)` with `λ ∉ F_{q^k}` realises a different
    /// `(k-1)`-flat, so only level-`k` scalars may be quotiented out.
    pub fn new(ctx: &FieldCtx, a: Elt, b: Elt, level: u8) -> Result<SpreadElt> {
        if a == 0 && b == 0 {
            return Err(Error::InvalidArgument(
                "spread element parameters must not both vanish".into(),
            ));
        }
        if ctx.n() % level != 0 {
            return Err(Error::InvalidArgument(format!(
                "level {level} does not divide n"
            )));
        }
        let mut best = (a, b);
        for &lam in ctx.enumerate_subfield(level)?.iter().skip(1) {
            let cand = (ctx.mul(lam, a), ctx.mul(lam, b));
            if cand < best {
                best = cand;
            }
        }
        Ok(SpreadElt {
            a: best.0,
            b: best.1,
            level,
        })
    }

    /// The realised `(k-1)`-flat of `Σ`, inside the hyperplane at infinity.
    pub fn subspace(&self, ctx: &FieldCtx) -> Subspace {
        let rows: Vec<Vec<Elt>> = ctx
            .subfield_basis(self.level)
            .expect("valid level")
            .iter()
            .map(|&x| {
                sem_to_flat(ctx, ctx.mul(self.a, x), ctx.mul(self.b, x), 0).expect("flat vector")
            })
            .collect();
        Subspace::span(ctx, 1, sigma_width(ctx), &rows)
    }

    /// All points of the realised flat.
    pub fn points(&self, ctx: &FieldCtx) -> Vec<Point> {
        self.subspace(ctx).points(ctx)
    }

    /// The level-`n` spread member with the same parameters (the unique one
    /// containing this element).
    pub fn parent(&self, ctx: &FieldCtx) -> SpreadElt {
        SpreadElt::new(ctx, self.a, self.b, ctx.n()).expect("valid parameters")
    }

    /// For level-`n` members: the plane point of the line at infinity that
    /// blows up to this member.
    pub fn plane_preimage(&self, ctx: &FieldCtx) -> Point {
        Point::new(ctx, ctx.n(), vec![self.a, self.b, 0]).expect("nonzero")
    }
}

/// Every member of the level-`k` family, in a deterministic order.  The
/// members partition the points of the hyperplane at infinity into
/// `(q^{2n} - 1)/(q^k - 1)` flats.
pub fn spread_family(ctx: &FieldCtx, level: u8) -> Result<Vec<SpreadElt>> {
    if ctx.n() % level != 0 {
        return Err(Error::InvalidArgument(format!(
            "level {level} does not divide n"
        )));
    }
    let mut seen = std::collections::BTreeSet::new();
    for a in 0..ctx.size() as Elt {
        for b in 0..ctx.size() as Elt {
            if a == 0 && b == 0 {
                continue;
            }
            seen.insert(SpreadElt::new(ctx, a, b, level)?);
        }
    }
    let expected = (ctx.size() * ctx.size() - 1) / ((ctx.q() as usize).pow(level as u32) - 1);
    debug_assert_eq!(seen.len(), expected, "family size formula");
    Ok(seen.into_iter().collect())
}

/// Field reduction of a single projective point over `F_{q^n}` with `r`
/// semantic coordinates: the `(n-1)`-flat `{v·x : x ∈ F_{q^n}^*}` written in
/// the `r·n` flat coordinates over `F_q`.
pub fn field_reduce(ctx: &FieldCtx, sem: &[Elt]) -> Result<Subspace> {
    if sem.iter().all(|&c| c == 0) {
        return Err(Error::InvalidArgument("zero vector".into()));
    }
    let n = ctx.n() as usize;
    let r = sem.len();
    let rows: Vec<Vec<Elt>> = ctx
        .subfield_basis(ctx.n())?
        .iter()
        .map(|&x| {
            let mut flat = Vec::with_capacity(r * n);
            for &v in sem {
                flat.extend_from_slice(ctx.q_coords(ctx.mul(v, x)));
            }
            flat
        })
        .collect();
    Ok(Subspace::span(ctx, 1, r * n, &rows))
}

/// A regulus of the spread: `q + 1` pairwise disjoint `(n-1)`-flats together
/// with their common transversal lines.
#[derive(Clone, Debug)]
pub struct Regulus {
    /// The `q + 1` member flats.
    pub members: Vec<Subspace>,
    /// The `(q^n - 1)/(q - 1)` transversal lines; each meets every member in
    /// exactly one point.
    pub transversals: Vec<Subspace>,
}

/// The unique regulus through three pairwise distinct spread members.
///
/// Implementation: write the span of the first two members as `U₁ ⊕ U₂`;
/// the third member is the graph of an isomorphism `M : U₁ → U₂`, and the
/// regulus consists of the graphs of the scalar multiples `λM` together with
/// `U₂`.  The defining transversal property is verified on the result before
/// returning (each transversal `⟨u, uM⟩` must meet every member in exactly
/// one point), which is the characterisation one would otherwise obtain by
/// filtering all `(n-1)`-flats of the span — infeasible to enumerate at the
/// larger desk parameters.
pub fn regulus_through(
    ctx: &FieldCtx,
    e1: &SpreadElt,
    e2: &SpreadElt,
    e3: &SpreadElt,
) -> Result<Regulus> {
    let n = ctx.n();
    for e in [e1, e2, e3] {
        if e.level != n {
            return Err(Error::InvalidArgument(
                "reguli are formed by full spread members".into(),
            ));
        }
    }
    if e1 == e2 || e1 == e3 || e2 == e3 {
        return Err(Error::InvalidArgument(
            "regulus requires three distinct members".into(),
        ));
    }
    let w = sigma_width(ctx);
    let s1 = e1.subspace(ctx);
    let s2 = e2.subspace(ctx);
    let s3 = e3.subspace(ctx);
    let u1 = s1.rows().to_vec();
    let u2 = s2.rows().to_vec();
    let mut joint = u1.clone();
    joint.extend(u2.iter().cloned());

    // Decompose each basis row of the third member as u + v, u ∈ U₁, v ∈ U₂.
    let nn = n as usize;
    let mut g_u: Vec<Vec<Elt>> = vec![];
    let mut g_v: Vec<Vec<Elt>> = vec![];
    for r in s3.rows() {
        let coeffs = crate::linalg::solve_in_basis(ctx, &joint, r).ok_or_else(|| {
            Error::InvalidArgument("spread members must span a common (2n-1)-flat".into())
        })?;
        let mut u = vec![0 as Elt; w];
        let mut v = vec![0 as Elt; w];
        for (i, &c) in coeffs.iter().enumerate() {
            let row = &joint[i];
            let dst = if i < nn { &mut u } else { &mut v };
            for (d, &x) in dst.iter_mut().zip(row.iter()) {
                *d = ctx.add(*d, ctx.mul(c, x));
            }
        }
        g_u.push(u);
        g_v.push(v);
    }
    if crate::linalg::rank(ctx, &g_u) != nn || crate::linalg::rank(ctx, &g_v) != nn {
        return Err(Error::InvalidArgument(
            "third member must be disjoint from the first two".into(),
        ));
    }

    // Members: graphs of λM for λ ∈ F_q, plus U₂ itself.
    let mut members = vec![];
    for &lam in ctx.enumerate_subfield(1)?.iter() {
        let rows: Vec<Vec<Elt>> = g_u
            .iter()
            .zip(g_v.iter())
            .map(|(u, v)| {
                u.iter()
                    .zip(v.iter())
                    .map(|(&a, &b)| ctx.add(a, ctx.mul(lam, b)))
                    .collect()
            })
            .collect();
        members.push(Subspace::span(ctx, 1, w, &rows));
    }
    members.push(s2.clone());

    // Transversals: for each point u of U₁, the line through u and uM.
    let mut transversals = vec![];
    for p in s1.points(ctx) {
        let coeffs = crate::linalg::solve_in_basis(ctx, &g_u, &p.coords)
            .expect("point of U1 lies in the span of the u-parts");
        let mut v = vec![0 as Elt; w];
        for (i, &c) in coeffs.iter().enumerate() {
            for (d, &x) in v.iter_mut().zip(g_v[i].iter()) {
                *d = ctx.add(*d, ctx.mul(c, x));
            }
        }
        transversals.push(Subspace::span(ctx, 1, w, &[p.coords.clone(), v]));
    }

    // Verify the defining property before handing the regulus out.
    let q = ctx.q() as usize;
    if members.len() != q + 1 {
        return Err(Error::InvalidArgument("regulus must have q+1 members".into()));
    }
    for (i, m) in members.iter().enumerate() {
        if m.rank() != nn {
            return Err(Error::InvalidArgument("regulus members must be (n-1)-flats".into()));
        }
        for m2 in members.iter().skip(i + 1) {
            if m.meet(ctx, m2).rank() != 0 {
                return Err(Error::InvalidArgument("regulus members must be disjoint".into()));
            }
        }
    }
    for t in &transversals {
        for m in &members {
            if t.meet(ctx, m).rank() != 1 {
                return Err(Error::InvalidArgument(
                    "every transversal must meet every member in one point".into(),
                ));
            }
        }
    }
    Ok(Regulus {
        members,
        transversals,
    })
}

impl Regulus {
    /// Identifies each member flat with its spread element.  Succeeds for
    /// reguli through spread members (the spread is regular, so the whole
    /// regulus stays inside the spread).
    pub fn member_elements(&self, ctx: &FieldCtx) -> Result<Vec<SpreadElt>> {
        let mut out = vec![];
        for m in &self.members {
            let p = &m.points(ctx)[0];
            let [a, b, c] = flat_to_sem(ctx, &p.coords)?;
            if c != 0 {
                return Err(Error::InvalidArgument("member leaves the hyperplane".into()));
            }
            let e = SpreadElt::new(ctx, a, b, ctx.n())?;
            if &e.subspace(ctx) != m {
                return Err(Error::InvalidArgument(
                    "member is not a spread element".into(),
                ));
            }
            out.push(e);
        }
        Ok(out)
    }
}

/// The conjugate indicator points of a level-`k` element: `Q_j` is the sum
/// of the `σ^m`-images over `m ≡ j (mod k)` of the vector with `a` at
/// position 0 and `b` at position `n`.  The span of the `k` points meets the
/// embedded hyperplane at infinity exactly in the embedded element.
pub fn indicator_points(ctx: &FieldCtx, e: &SpreadElt) -> Vec<Point> {
    let n = ctx.n() as usize;
    let k = e.level as usize;
    let w = sigma_width(ctx);
    let mut base = vec![0 as Elt; w];
    base[0] = e.a;
    base[n] = e.b;
    let mut acc = vec![vec![0 as Elt; w]; k];
    let mut cur = base;
    for m in 0..n {
        let dst = &mut acc[m % k];
        for (d, &x) in dst.iter_mut().zip(cur.iter()) {
            *d = ctx.add(*d, x);
        }
        cur = sigma_vec(ctx, &cur);
    }
    acc.into_iter()
        .map(|v| Point::new(ctx, ctx.n(), v).expect("indicator points are nonzero"))
        .collect()
}

/// Membership test for the `j`-th conjugate piece of the level-`k` indicator
/// set: coordinate support on positions `≡ j (mod k)` of both blocks, zero
/// last coordinate, and projective `σ^k`-invariance.
pub fn indicator_contains(ctx: &FieldCtx, level: u8, j: u8, pt: &Point) -> bool {
    let n = ctx.n() as usize;
    let k = level as usize;
    let jj = (j as usize) % k;
    let v = &pt.coords;
    if v[2 * n] != 0 {
        return false;
    }
    for i in 0..n {
        if i % k != jj && (v[i] != 0 || v[n + i] != 0) {
            return false;
        }
    }
    // projective σ^k-invariance via a scalar witness
    for lam in 1..ctx.size() as Elt {
        let scaled: Vec<Elt> = v.iter().map(|&c| ctx.mul(lam, c)).collect();
        let mut s2 = scaled.clone();
        for _ in 0..k {
            s2 = sigma_vec(ctx, &s2);
        }
        if s2 == scaled {
            return true;
        }
    }
    false
}

/// The `F_{q^n}`-span carrying the `j`-th conjugate piece of the level-`k`
/// indicator set (projective dimension `2n/k - 1`).
pub fn indicator_span(ctx: &FieldCtx, level: u8, j: u8) -> Subspace {
    let n = ctx.n() as usize;
    let k = level as usize;
    let jj = (j as usize) % k;
    let w = sigma_width(ctx);
    let mut rows = vec![];
    for block in [0usize, n] {
        let mut r = jj;
        while r < n {
            let mut v = vec![0 as Elt; w];
            v[block + r] = ctx.one();
            rows.push(v);
            r += k;
        }
    }
    Subspace::span(ctx, ctx.n(), w, &rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_quotient_is_by_subfield_scalars_only() {
        let f = FieldCtx::new(3, 1, 2).unwrap();
        let t = 1 as Elt; // degree-2 element
        // at level 1, scaling by t changes the point of H_inf
        let e1 = SpreadElt::new(&f, f.one(), f.one(), 1).unwrap();
        let e2 = SpreadElt::new(&f, t, t, 1).unwrap();
        assert_ne!(e1, e2, "(1,1) and (t,t) are distinct level-1 elements");
        // at level n they coincide
        let e1n = SpreadElt::new(&f, f.one(), f.one(), 2).unwrap();
        let e2n = SpreadElt::new(&f, t, t, 2).unwrap();
        assert_eq!(e1n, e2n, "(1,1) and (t,t) parametrise the same member");
    }

    #[test]
    fn family_partitions_h_inf() {
        let f = FieldCtx::new(3, 1, 2).unwrap();
        for level in [1u8, 2] {
            let fam = spread_family(&f, level).unwrap();
            let expected = (81 - 1) / (3usize.pow(level as u32) - 1);
            assert_eq!(fam.len(), expected, "family size at level {level}");
            let mut all = std::collections::BTreeSet::new();
            for e in &fam {
                for p in e.points(&f) {
                    assert!(
                        all.insert(p),
                        "members of one level must be pairwise disjoint"
                    );
                }
            }
            assert_eq!(all.len(), 40, "members cover the hyperplane at infinity");
        }
    }

    #[test]
    fn field_reduce_of_a_plane_line_point() {
        let f = FieldCtx::new(3, 1, 2).unwrap();
        let s = field_reduce(&f, &[f.one(), 0]).unwrap();
        assert_eq!(s.rank(), 2, "reduction of a point is a line");
        assert_eq!(s.points(&f).len(), 4, "a line of PG(3,3) has 4 points");
    }

    #[test]
    fn indicator_points_span_recovers_the_element() {
        let f = FieldCtx::new(3, 1, 2).unwrap();
        let e = SpreadElt::new(&f, f.one(), 1, 1).unwrap();
        let q = indicator_points(&f, &e);
        assert_eq!(q.len(), 1);
        assert!(indicator_contains(&f, 1, 0, &q[0]));
    }
}
