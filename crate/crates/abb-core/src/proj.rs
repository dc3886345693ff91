//! Projective points and subspaces over a level of the field tower.
//!
//! A point of `PG(w-1, q^e)` is a nonzero length-`w` vector over `F_{q^e}`
//! stored in canonical form: the unique scalar multiple whose first nonzero
//! coordinate equals the least nonzero element of `F_{q^e}` in the element
//! order.  That representative is exactly the lexicographic minimum of the
//! scalar orbit, so comparing points reduces to comparing vectors.
//!
//! Subspaces are stored as fully reduced row bases, which are likewise
//! canonical, so subspace equality is structural equality.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elt, FieldCtx};
use crate::linalg;

/// A projective point in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point {
    /// Tower level of the scalar field (`e | n`).
    pub level: u8,
    /// Canonical homogeneous coordinates.
    pub coords: Vec<Elt>,
}

impl Point {
    /// Canonicalizes a nonzero coordinate vector.
    pub fn new(ctx: &FieldCtx, level: u8, coords: Vec<Elt>) -> Result<Point> {
        if coords.iter().all(|&c| c == 0) {
            return Err(Error::InvalidArgument(
                "zero vector does not define a projective point".into(),
            ));
        }
        Ok(Point {
            level,
            coords: canon_vec(ctx, level, &coords),
        })
    }

    /// The underlying coordinates.
    pub fn coords(&self) -> &[Elt] {
        &self.coords
    }
}

/// Canonical representative of the scalar orbit of a nonzero vector: scales
/// the first nonzero coordinate to the least nonzero element of `F_{q^e}`.
pub fn canon_vec(ctx: &FieldCtx, level: u8, v: &[Elt]) -> Vec<Elt> {
    let lead = v.iter().copied().find(|&c| c != 0).expect("nonzero vector");
    let target = ctx.min_nonzero(level);
    if lead == target {
        return v.to_vec();
    }
    let scale = ctx.div(target, lead);
    debug_assert!(
        ctx.in_subfield(scale, level),
        "scaling factor must stay in the scalar field"
    );
    v.iter().map(|&c| ctx.mul(scale, c)).collect()
}

/// A projective subspace as a canonical (fully reduced) row basis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Subspace {
    /// Tower level of the scalar field.
    pub level: u8,
    /// Ambient vector-space dimension (`w` coordinates per vector).
    pub width: usize,
    rows: Vec<Vec<Elt>>,
}

impl Subspace {
    /// Spans the given vectors (any spanning set; rows are reduced).
    pub fn span(ctx: &FieldCtx, level: u8, width: usize, vectors: &[Vec<Elt>]) -> Subspace {
        debug_assert!(vectors.iter().all(|v| v.len() == width), "width mismatch");
        Subspace {
            level,
            width,
            rows: linalg::rref(ctx, vectors),
        }
    }

    /// Spans a set of points.
    pub fn span_points(ctx: &FieldCtx, level: u8, width: usize, pts: &[Point]) -> Subspace {
        let rows: Vec<Vec<Elt>> = pts.iter().map(|p| p.coords.clone()).collect();
        Self::span(ctx, level, width, &rows)
    }

    /// The empty subspace of a given ambient width.
    pub fn empty(level: u8, width: usize) -> Subspace {
        Subspace {
            level,
            width,
            rows: vec![],
        }
    }

    /// Canonical reduced basis rows.
    pub fn rows(&self) -> &[Vec<Elt>] {
        &self.rows
    }

    /// Vector-space rank.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Projective dimension (`rank - 1`; the empty subspace has dimension -1).
    pub fn dim(&self) -> isize {
        self.rows.len() as isize - 1
    }

    /// Membership test for a raw vector.
    pub fn contains_vec(&self, ctx: &FieldCtx, v: &[Elt]) -> bool {
        linalg::solve_in_basis(ctx, &self.rows, v).is_some()
    }

    /// Membership test for a point.
    pub fn contains(&self, ctx: &FieldCtx, p: &Point) -> bool {
        self.contains_vec(ctx, &p.coords)
    }

    /// Whether every vector of `self` lies in `other`.
    pub fn is_subspace_of(&self, ctx: &FieldCtx, other: &Subspace) -> bool {
        self.rows.iter().all(|r| other.contains_vec(ctx, r))
    }

    /// Intersection of subspaces.
    pub fn meet(&self, ctx: &FieldCtx, other: &Subspace) -> Subspace {
        debug_assert_eq!(self.width, other.width);
        Subspace {
            level: self.level,
            width: self.width,
            rows: linalg::meet(ctx, &self.rows, &other.rows, self.width),
        }
    }

    /// Smallest subspace containing both arguments.
    pub fn join(&self, ctx: &FieldCtx, other: &Subspace) -> Subspace {
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Subspace::span(ctx, self.level, self.width, &rows)
    }

    /// All points of the subspace, in a deterministic order.
    ///
    /// Enumerates canonical coefficient patterns against the reduced basis:
    /// leading coefficient equal to the least nonzero scalar, later
    /// coefficients free.  With a reduced basis this emits each point exactly
    /// once, already in canonical form.
    pub fn points(&self, ctx: &FieldCtx) -> Vec<Point> {
        let scalars: Vec<Elt> = ctx
            .enumerate_subfield(self.level)
            .expect("valid level")
            .to_vec();
        let lead = ctx.min_nonzero(self.level);
        let k = self.rows.len();
        let mut out = vec![];
        for first in 0..k {
            // coefficients: 0 .. 0, lead, then free entries
            let free = k - first - 1;
            let mut tuple = vec![0usize; free];
            loop {
                let mut v = vec![0 as Elt; self.width];
                for (c, row) in std::iter::once((lead, &self.rows[first])).chain(
                    tuple
                        .iter()
                        .map(|&ti| scalars[ti])
                        .zip(self.rows[first + 1..].iter()),
                ) {
                    if c != 0 {
                        for (vi, &ri) in v.iter_mut().zip(row.iter()) {
                            *vi = ctx.add(*vi, ctx.mul(c, ri));
                        }
                    }
                }
                out.push(Point {
                    level: self.level,
                    coords: v,
                });
                let mut i = 0;
                while i < free {
                    tuple[i] += 1;
                    if tuple[i] < scalars.len() {
                        break;
                    }
                    tuple[i] = 0;
                    i += 1;
                }
                if i == free {
                    break;
                }
            }
        }
        out
    }

    /// Number of points without enumerating them.
    pub fn point_count(&self, ctx: &FieldCtx) -> usize {
        let qe = (ctx.q() as usize).pow(self.level as u32);
        (qe.pow(self.rows.len() as u32) - 1) / (qe - 1)
    }
}

/// Every point of `PG(width-1, q^level)` in a deterministic order.
pub fn enumerate_points(ctx: &FieldCtx, level: u8, width: usize) -> Vec<Point> {
    let full = Subspace::span(
        ctx,
        level,
        width,
        &(0..width)
            .map(|i| {
                let mut v = vec![0 as Elt; width];
                v[i] = ctx.one();
                v
            })
            .collect::<Vec<_>>(),
    );
    full.points(ctx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_point_is_scalar_orbit_minimum() {
        let f = FieldCtx::new(3, 1, 2).unwrap();
        // Sigma-level points: scalars from F_3, min nonzero scalar is 1
        let p = Point::new(&f, 1, vec![0, f.add(f.one(), f.one()), f.one()]).unwrap();
        // brute-force the lex minimum of the orbit
        let mut best: Option<Vec<Elt>> = None;
        for &s in f.enumerate_subfield(1).unwrap().iter().skip(1) {
            let cand: Vec<Elt> = p.coords.iter().map(|&c| f.mul(s, c)).collect();
            if best.as_ref().map_or(true, |b| &cand < b) {
                best = Some(cand);
            }
        }
        assert_eq!(p.coords, best.unwrap(), "canonical form must be the orbit minimum");
    }

    #[test]
    fn point_counts_match_formulas() {
        let f = FieldCtx::new(3, 1, 2).unwrap();
        assert_eq!(enumerate_points(&f, 1, 5).len(), 121, "PG(4,3) has 121 points");
        assert_eq!(enumerate_points(&f, 1, 4).len(), 40, "PG(3,3) has 40 points");
        assert_eq!(enumerate_points(&f, 2, 3).len(), 91, "PG(2,9) has 91 points");
    }

    #[test]
    fn enumeration_has_no_duplicates_and_is_canonical() {
        let f = FieldCtx::new(2, 2, 2).unwrap(); // scalars F_4 at level 1
        let pts = enumerate_points(&f, 1, 3);
        assert_eq!(pts.len(), 21, "PG(2,4) has 21 points");
        let set: std::collections::BTreeSet<_> = pts.iter().cloned().collect();
        assert_eq!(set.len(), pts.len(), "points must be pairwise distinct");
        for p in &pts {
            assert_eq!(
                p.coords,
                canon_vec(&f, 1, &p.coords),
                "enumerated points must already be canonical"
            );
        }
    }

    #[test]
    fn meet_and_join_dimensions_are_modular() {
        let f = FieldCtx::new(3, 1, 2).unwrap();
        let one = f.one();
        let a = Subspace::span(&f, 1, 4, &[vec![one, 0, 0, 0], vec![0, one, 0, 0]]);
        let b = Subspace::span(&f, 1, 4, &[vec![0, one, 0, 0], vec![0, 0, one, 0]]);
        let m = a.meet(&f, &b);
        let j = a.join(&f, &b);
        assert_eq!(m.dim(), 0);
        assert_eq!(j.dim(), 2);
        assert_eq!(
            a.dim() + b.dim(),
            m.dim() + j.dim(),
            "projective dimension formula"
        );
    }
}
