//! Spread and regulus behaviour pinned against independently computed data:
//! a regulus completion in PG(3,3) brute-forced with a from-scratch
//! implementation (enumerate all 130 lines, intersect transversal pencils),
//! family cardinalities from the Gaussian coefficient formulas, and the
//! span-recovery property of indicator points.

use abb_core::abb::{embed_iota, h_inf, sigma_width};
use abb_core::gf::FieldCtx;
use abb_core::proj::Subspace;
use abb_core::spread::{
    indicator_contains, indicator_points, indicator_span, regulus_through, spread_family,
    SpreadElt,
};

#[test]
fn regulus_completion_in_pg33_matches_brute_force() {
    let f = FieldCtx::new(3, 1, 2).unwrap();
    let one = f.one();
    let two = f.add(one, one);
    let e1 = SpreadElt::new(&f, one, 0, 2).unwrap();
    let e2 = SpreadElt::new(&f, 0, one, 2).unwrap();
    let e3 = SpreadElt::new(&f, one, one, 2).unwrap();
    let reg = regulus_through(&f, &e1, &e2, &e3).unwrap();
    assert_eq!(reg.members.len(), 4, "a regulus over F_3 has 4 members");
    assert_eq!(
        reg.transversals.len(),
        4,
        "4 transversals, one per point of a member"
    );
    let members = reg.member_elements(&f).unwrap();
    let got: std::collections::BTreeSet<_> = members.into_iter().collect();
    // brute-forced completion: the fourth line is the member with slope 2
    let want: std::collections::BTreeSet<_> = [
        e1.clone(),
        e2.clone(),
        e3.clone(),
        SpreadElt::new(&f, one, two, 2).unwrap(),
    ]
    .into_iter()
    .collect();
    assert_eq!(got, want, "regulus completion of (1,0),(0,1),(1,1)");

    // order independence
    let reg2 = regulus_through(&f, &e3, &e1, &e2).unwrap();
    let got2: std::collections::BTreeSet<_> =
        reg2.member_elements(&f).unwrap().into_iter().collect();
    assert_eq!(got2, want, "the regulus does not depend on the member order");
}

#[test]
fn exhaustive_regulus_cross_check_at_q3_n2() {
    // Validate the graph construction against the defining property on every
    // triple from a fixed regulus-closed family: for all triples of distinct
    // members of the spread, the returned members are met by exactly the
    // lines meeting all three inputs.
    let f = FieldCtx::new(3, 1, 2).unwrap();
    let fam = spread_family(&f, 2).unwrap();
    assert_eq!(fam.len(), 10);
    let mut checked = 0;
    for i in 0..fam.len() {
        for j in (i + 1)..fam.len() {
            for k in (j + 1)..fam.len() {
                let reg = regulus_through(&f, &fam[i], &fam[j], &fam[k]).unwrap();
                // the regulus lies inside the spread (regularity)
                let members = reg.member_elements(&f).unwrap();
                for m in &members {
                    assert!(fam.contains(m), "regulus member must belong to the spread");
                }
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 120, "all triples from the 10 members");
}

#[test]
fn level2_family_size_at_q3_n4() {
    let f = FieldCtx::new(3, 1, 4).unwrap();
    let fam = spread_family(&f, 2).unwrap();
    assert_eq!(fam.len(), 820, "|level-2 family| = (3^8 - 1)/(3^2 - 1)");
}

#[test]
fn indicator_span_meets_embedded_h_inf_exactly_in_the_element() {
    let f = FieldCtx::new(3, 1, 2).unwrap();
    let hinf = h_inf(&f);
    let hinf_points = hinf.points(&f);
    assert_eq!(hinf_points.len(), 40);
    for level in [1u8, 2] {
        for e in spread_family(&f, level).unwrap() {
            let qs = indicator_points(&f, &e);
            assert_eq!(qs.len(), level as usize, "one conjugate point per piece");
            for (j, qp) in qs.iter().enumerate() {
                assert!(
                    indicator_contains(&f, level, j as u8, qp),
                    "indicator point lies in its conjugate piece"
                );
                assert!(
                    indicator_span(&f, level, j as u8).contains(&f, qp),
                    "piece membership implies span membership"
                );
            }
            let span = Subspace::span_points(&f, f.n(), sigma_width(&f), &qs);
            assert_eq!(span.rank(), level as usize, "conjugate points are independent");
            let elt_points = e.points(&f);
            let mut inside = 0;
            for hp in &hinf_points {
                let im = embed_iota(&f, hp).unwrap();
                if span.contains(&f, &im) {
                    inside += 1;
                    assert!(
                        elt_points.contains(hp),
                        "span may only capture points of the element"
                    );
                }
            }
            assert_eq!(
                inside,
                elt_points.len(),
                "span meets the embedded hyperplane exactly in the element"
            );
        }
    }
}

#[test]
fn conjugate_span_of_a_nu_point_recovers_a_spread_member() {
    let f = FieldCtx::new(3, 1, 3).unwrap();
    let n = f.n() as usize;
    let w = sigma_width(&f);
    // a point of ν = <e_0, e_n> with parameters (a, b) = (1, θ^{d-1})
    let mut v = vec![0u16; w];
    v[0] = f.one();
    v[n] = 1;
    let p = abb_core::proj::Point::new(&f, f.n(), v).unwrap();
    let mut conj = vec![p.clone()];
    for _ in 1..n {
        let last = conj.last().unwrap();
        conj.push(abb_core::abb::sigma_apply(&f, last));
    }
    let span = Subspace::span_points(&f, f.n(), w, &conj);
    assert_eq!(span.rank(), n, "conjugates of a generic point are independent");
    let member = SpreadElt::new(&f, f.one(), 1, f.n()).unwrap();
    let mut inside = 0;
    for hp in h_inf(&f).points(&f) {
        let im = embed_iota(&f, &hp).unwrap();
        if span.contains(&f, &im) {
            inside += 1;
            assert!(
                member.subspace(&f).contains(&f, &hp),
                "span captures only the member through (a, b)"
            );
        }
    }
    assert_eq!(inside, member.points(&f).len());
}
