//! Field arithmetic pinned against values computed with an independent
//! implementation (polynomial quotient arithmetic written from scratch in a
//! different language).  Frozen values: default moduli for every supported
//! tower shape, sample products/inverses, Frobenius and norm images, and
//! subfield membership lists.

use abb_core::gf::{Elt, FieldCtx};

/// Default modulus low-coefficients for each (p, h, n) shape, computed
/// independently by exhaustive lex-ordered search.
#[test]
fn default_moduli_are_the_lex_least_irreducibles() {
    let cases: &[(u16, u8, u8, &[u16])] = &[
        (3, 1, 2, &[1, 0]),                   // x^2 + 1
        (2, 2, 2, &[1, 0, 0, 1]),             // x^4 + x^3 + 1
        (5, 1, 2, &[1, 1]),                   // x^2 + x + 1
        (3, 1, 3, &[1, 0, 2]),                // x^3 + 2x^2 + 1
        (2, 2, 3, &[1, 0, 0, 0, 0, 1]),       // x^6 + x^5 + 1
        (3, 1, 4, &[1, 0, 1, 1]),             // x^4 + x^3 + x^2 + 1
        (2, 2, 4, &[1, 0, 0, 0, 1, 1, 0, 1]), // x^8 + x^7 + x^5 + x^4 + 1
    ];
    for &(p, h, n, want) in cases {
        let f = FieldCtx::new(p, h, n).unwrap();
        assert_eq!(
            f.modulus(),
            want,
            "default modulus for (p,h,n)=({p},{h},{n})"
        );
    }
}

/// The modulus root x, addressed through its coefficient vector.
fn theta(f: &FieldCtx) -> Elt {
    let mut c = vec![0u16; f.d() as usize];
    c[1] = 1;
    f.from_fp_coords(&c).unwrap()
}

#[test]
fn sample_products_and_inverses() {
    // frozen: index of x^{d-1} * (x^{d-1} + 1) and of (x^{d-1})^{-1}
    let cases: &[(u16, u8, u8, Elt, Elt)] = &[
        (3, 1, 2, 7, 2),
        (2, 2, 2, 14, 12),
        (5, 1, 2, 20, 24),
        (3, 1, 3, 26, 15),
        (2, 2, 3, 62, 48),
        (3, 1, 4, 17, 58),
        (2, 2, 4, 130, 154),
    ];
    for &(p, h, n, prod, inv) in cases {
        let f = FieldCtx::new(p, h, n).unwrap();
        let g = 1 as Elt; // x^{d-1} by the big-endian encoding
        assert_eq!(
            f.mul(g, f.add(g, f.one())),
            prod,
            "product sample in (p,h,n)=({p},{h},{n})"
        );
        assert_eq!(f.inv(g), inv, "inverse sample in (p,h,n)=({p},{h},{n})");
    }
}

#[test]
fn f9_frobenius_and_norm() {
    let f = FieldCtx::new(3, 1, 2).unwrap();
    let t = theta(&f);
    let two_t = f.add(t, t);
    assert_eq!(f.frobenius(t, 1), two_t, "t^3 = -t = 2t in F_9");
    assert_eq!(f.norm_k(t, 2).unwrap(), f.one(), "t * t^3 = -t^2 = 1");
    assert_ne!(f.norm_k(t, 2).unwrap(), 0, "norm of a unit is nonzero");
    assert_eq!(f.subfield_degree(t), 2);
    assert_eq!(f.subfield_degree(f.one()), 1);
}

#[test]
fn f9_base_subfield_is_the_three_frobenius_fixed_points() {
    let f = FieldCtx::new(3, 1, 2).unwrap();
    let sub = f.enumerate_subfield(1).unwrap();
    assert_eq!(sub.len(), 3);
    for &x in sub {
        assert_eq!(f.frobenius(x, 1), x, "x^3 = x on the base field");
    }
    // the three constants 0, 1, 2 have indices 0, 3, 6
    assert_eq!(sub, &[0, 3, 6]);
}

#[test]
fn f16_over_f4_subfield_membership() {
    let f = FieldCtx::new(2, 2, 2).unwrap();
    let sub = f.enumerate_subfield(1).unwrap();
    assert_eq!(sub, &[0, 5, 8, 13], "F_4 inside F_16 (frozen indices)");
    assert_eq!(
        f.min_nonzero(1),
        5,
        "least nonzero base-field element need not be 1"
    );
    assert_eq!(f.one(), 8);
}

#[test]
fn norm_rejects_elements_outside_the_subfield() {
    let f = FieldCtx::new(3, 1, 4).unwrap();
    // theta^{d-1} has degree 4; asking for the norm from the level-2 field must fail
    assert!(f.norm_k(1, 2).is_err());
    // but every level-2 element is accepted and lands in F_3
    for &x in f.enumerate_subfield(2).unwrap() {
        if x == 0 {
            continue;
        }
        let nx = f.norm_k(x, 2).unwrap();
        assert!(f.in_subfield(nx, 1), "norm image must lie in the base field");
        assert_ne!(nx, 0);
    }
}

#[test]
fn frobenius_is_a_field_homomorphism() {
    for (p, h, n) in [(3, 1, 2), (2, 2, 2), (3, 1, 3)] {
        let f = FieldCtx::new(p, h, n).unwrap();
        for x in 0..f.size() as Elt {
            for y in 0..f.size() as Elt {
                assert_eq!(
                    f.frobenius(f.add(x, y), 1),
                    f.add(f.frobenius(x, 1), f.frobenius(y, 1))
                );
                assert_eq!(
                    f.frobenius(f.mul(x, y), 1),
                    f.mul(f.frobenius(x, 1), f.frobenius(y, 1))
                );
            }
        }
    }
}

#[test]
fn subfield_lattice_matches_divisor_lattice() {
    let f = FieldCtx::new(2, 2, 4).unwrap(); // levels 1, 2, 4
    assert_eq!(f.levels(), &[1, 2, 4]);
    let s1 = f.enumerate_subfield(1).unwrap();
    let s2 = f.enumerate_subfield(2).unwrap();
    let s4 = f.enumerate_subfield(4).unwrap();
    assert_eq!(s1.len(), 4);
    assert_eq!(s2.len(), 16);
    assert_eq!(s4.len(), 256);
    assert!(s1.iter().all(|x| s2.contains(x)), "F_4 ⊆ F_16");
    assert!(s2.iter().all(|x| s4.contains(x)), "F_16 ⊆ F_256");
    assert!(f.enumerate_subfield(3).is_err(), "3 does not divide 4");
}
