//! Deterministic dense linear algebra over one level of a field tower.
//!
//! Every function takes the [`FieldCtx`] plus the level `e | n` whose
//! subfield `F_{q^e}` serves as the scalar field; vectors simply carry
//! elements of that subfield (arithmetic is closed, so the full-field tables
//! apply unchanged).  Row echelon forms are fully reduced with pivots
//! normalised to 1, which makes them canonical for subspace comparison.

use crate::gf::{Elt, FieldCtx};

/// Fully reduced row echelon form.  Returns the nonzero rows, pivots strictly
/// increasing left to right.
pub fn rref(ctx: &FieldCtx, rows: &[Vec<Elt>]) -> Vec<Vec<Elt>> {
    let mut m: Vec<Vec<Elt>> = rows.iter().filter(|r| !r.is_empty()).cloned().collect();
    if m.is_empty() {
        return m;
    }
    let width = m[0].len();
    debug_assert!(m.iter().all(|r| r.len() == width), "ragged matrix");
    let mut pivot_row = 0usize;
    for col in 0..width {
        let Some(r) = (pivot_row..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(pivot_row, r);
        let inv = ctx.inv(m[pivot_row][col]);
        for c in 0..width {
            m[pivot_row][c] = ctx.mul(m[pivot_row][c], inv);
        }
        for r2 in 0..m.len() {
            if r2 != pivot_row && m[r2][col] != 0 {
                let f = m[r2][col];
                for c in 0..width {
                    let s = ctx.mul(f, m[pivot_row][c]);
                    m[r2][c] = ctx.sub(m[r2][c], s);
                }
            }
        }
        pivot_row += 1;
        if pivot_row == m.len() {
            break;
        }
    }
    m.truncate(pivot_row);
    m
}

/// Rank of the row space.
pub fn rank(ctx: &FieldCtx, rows: &[Vec<Elt>]) -> usize {
    rref(ctx, rows).len()
}

/// Solves `Σ c_i basis_i = target` for coefficients `c_i`; `basis` need not
/// be reduced but must be linearly independent.  Returns `None` when the
/// target lies outside the span.
pub fn solve_in_basis(ctx: &FieldCtx, basis: &[Vec<Elt>], target: &[Elt]) -> Option<Vec<Elt>> {
    if basis.is_empty() {
        return if target.iter().all(|&x| x == 0) {
            Some(vec![])
        } else {
            None
        };
    }
    let width = basis[0].len();
    // augmented system: columns = basis vectors, rhs = target
    let mut m: Vec<Vec<Elt>> = (0..width)
        .map(|c| {
            let mut row: Vec<Elt> = basis.iter().map(|b| b[c]).collect();
            row.push(target[c]);
            row
        })
        .collect();
    m = rref(ctx, &m);
    let k = basis.len();
    let mut coeffs = vec![0 as Elt; k];
    for row in &m {
        let Some(pivot) = (0..=k).find(|&c| row[c] != 0) else {
            continue;
        };
        if pivot == k {
            return None; // inconsistent: 0 = 1 row
        }
        // reduced form: row = e_pivot with rhs coefficient
        coeffs[pivot] = row[k];
    }
    Some(coeffs)
}

/// Basis of the intersection of two row spaces (Zassenhaus construction).
pub fn meet(ctx: &FieldCtx, a: &[Vec<Elt>], b: &[Vec<Elt>], width: usize) -> Vec<Vec<Elt>> {
    let mut block: Vec<Vec<Elt>> = vec![];
    for r in a {
        let mut row = r.clone();
        row.extend_from_slice(r);
        block.push(row);
    }
    for r in b {
        let mut row = r.clone();
        row.extend(std::iter::repeat(0).take(width));
        block.push(row);
    }
    let reduced = rref(ctx, &block);
    let inter: Vec<Vec<Elt>> = reduced
        .into_iter()
        .filter(|row| row[..width].iter().all(|&x| x == 0))
        .map(|row| row[width..].to_vec())
        .collect();
    rref(ctx, &inter)
}

/// Basis of the right kernel `{x : M x = 0}` of the matrix with the given
/// rows.
pub fn kernel(ctx: &FieldCtx, rows: &[Vec<Elt>], width: usize) -> Vec<Vec<Elt>> {
    let reduced = rref(ctx, rows);
    let pivots: Vec<usize> = reduced
        .iter()
        .map(|r| r.iter().position(|&x| x != 0).expect("nonzero row"))
        .collect();
    let free: Vec<usize> = (0..width).filter(|c| !pivots.contains(c)).collect();
    let mut basis = vec![];
    for &fc in &free {
        let mut v = vec![0 as Elt; width];
        v[fc] = ctx.one();
        for (ri, &pc) in pivots.iter().enumerate() {
            v[pc] = ctx.neg(reduced[ri][fc]);
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_and_rank_over_f9() {
        let f = FieldCtx::new(3, 1, 2).unwrap();
        let one = f.one();
        let t = 1 as Elt;
        let rows = vec![
            vec![one, t, 0],
            vec![t, f.mul(t, t), 0], // t * first row
            vec![0, 0, one],
        ];
        assert_eq!(rank(&f, &rows), 2, "second row is dependent");
    }

    #[test]
    fn solve_recovers_coefficients() {
        let f = FieldCtx::new(3, 1, 2).unwrap();
        let one = f.one();
        let t = 1 as Elt;
        let basis = vec![vec![one, 0, t], vec![0, one, one]];
        let target = vec![
            f.mul(t, one),
            f.mul(one, f.add(one, one)),
            f.add(f.mul(t, t), f.mul(f.add(one, one), one)),
        ];
        let c = solve_in_basis(&f, &basis, &target).expect("target in span");
        assert_eq!(c, vec![t, f.add(one, one)]);
        assert!(
            solve_in_basis(&f, &basis, &[one, 0, 0]).is_none(),
            "vector off the span must be rejected"
        );
    }

    #[test]
    fn meet_of_two_planes_in_dim3() {
        let f = FieldCtx::new(3, 1, 2).unwrap();
        let one = f.one();
        let a = vec![vec![one, 0, 0], vec![0, one, 0]];
        let b = vec![vec![0, one, 0], vec![0, 0, one]];
        let m = meet(&f, &a, &b, 3);
        assert_eq!(m, vec![vec![0, one, 0]]);
    }

    #[test]
    fn kernel_annihilates() {
        let f = FieldCtx::new(3, 1, 2).unwrap();
        let one = f.one();
        let t = 1 as Elt;
        let rows = vec![vec![one, t, f.add(one, t)]];
        let ker = kernel(&f, &rows, 3);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            let dot = (0..3).fold(0, |acc, i| f.add(acc, f.mul(rows[0][i], v[i])));
            assert_eq!(dot, 0, "kernel vector must annihilate the row");
        }
    }
}
