//! Properties of the deformation layer across all even degrees up to 26:
//! the two computation routes agree (asserted inside `apply_d`), the image
//! avoids the two excluded families, the mirrored hyperboloid types give
//! the same image, and invariants pass through unchanged.

use k3census::census::{self, GenusInvariant};
use k3census::deform::{apply_d, image, is_exception, members, PolarizedInvariant, ScrollType};
use k3census::lattice::{make_type, Surface};
use std::collections::BTreeSet;

fn even_degrees() -> impl Iterator<Item = i64> {
    (2..=26).step_by(2)
}

#[test]
fn image_avoids_exceptions() {
    for n in even_degrees() {
        for (p, _) in image(n).unwrap() {
            assert!(!is_exception(&p), "exception {p} in image of n={n}");
        }
    }
}

#[test]
fn both_routes_agree_on_every_pair() {
    // apply_d re-derives both routes and errors on any disagreement.
    for n in even_degrees() {
        for t in members(n).unwrap() {
            for g in census::census_for(t.surface()) {
                for gg in census::orbit(g) {
                    apply_d(t, &gg, n).unwrap();
                }
            }
        }
    }
}

#[test]
fn invariants_pass_through() {
    for n in even_degrees() {
        for t in members(n).unwrap() {
            for g in census::census_for(t.surface()) {
                for gg in census::orbit(g) {
                    let p = apply_d(t, &gg, n).unwrap();
                    assert_eq!((p.r, p.a), (gg.r, gg.a));
                    assert_eq!(p.delta_phi, gg.delta_phi());
                    assert_eq!((p.r as i64 + p.a as i64) % 2, 0);
                    assert!(p.r >= 1 && p.r <= 20);
                }
            }
        }
    }
}

#[test]
fn mirrored_hyperboloid_types_have_equal_images() {
    for n in even_degrees().filter(|&n| ScrollType::H1.contains(n)) {
        let mut im1: BTreeSet<PolarizedInvariant> = BTreeSet::new();
        let mut im2: BTreeSet<PolarizedInvariant> = BTreeSet::new();
        for g in census::census_for(Surface::Hyperboloid) {
            for gg in census::orbit(g) {
                im1.insert(apply_d(ScrollType::H1, &gg, n).unwrap());
                im2.insert(apply_d(ScrollType::H2, &gg, n).unwrap());
            }
        }
        assert_eq!(im1, im2, "mirror symmetry broken at n={n}");
    }
}

#[test]
fn quartic_component_needing_the_elliptic_type() {
    let special = PolarizedInvariant {
        n: 4,
        r: 19,
        a: 1,
        delta_p: 1,
        delta_phi: 1,
        delta_phi_p: 1,
    };
    let image4 = image(4).unwrap();
    let (_, sources) = image4
        .iter()
        .find(|(p, _)| *p == special)
        .expect("(4; 19,1,1,1,1) must be in the degree-4 image");
    assert!(!sources.is_empty());
    for (t, _) in sources {
        assert_eq!(*t, ScrollType::F41, "unexpected source type {t}");
    }
}

#[test]
fn case_table_examples() {
    // Degree 2 from the plane: delta_P = 1 on the trivial subgroup.
    let g = census::census_for(Surface::P2)
        .iter()
        .find(|g| g.h_name() == "0" && g.delta_phi_s == 0)
        .unwrap();
    let p = apply_d(ScrollType::P2, g, 2).unwrap();
    assert_eq!((p.delta_p, p.delta_phi, p.delta_phi_p), (1, 0, 1));

    // Degree 4 from the glued type with the nonzero characteristic class.
    let t = make_type(Surface::Ellipsoid);
    let g = GenusInvariant {
        surface: Surface::Ellipsoid,
        h: t.subgroup_index("[e1+e2]").unwrap(),
        r: 4,
        a: 2,
        delta_phi_s: 0,
        v: Some(vec![1, 1]),
    };
    let p = apply_d(ScrollType::E, &g, 4).unwrap();
    assert_eq!((p.delta_p, p.delta_phi, p.delta_phi_p), (0, 1, 0));

    // Degree 8 on the mirrored subgroup [e2] with v = e2.
    let t = make_type(Surface::Hyperboloid);
    let g = GenusInvariant {
        surface: Surface::Hyperboloid,
        h: t.subgroup_index("[e2]").unwrap(),
        r: 2,
        a: 2,
        delta_phi_s: 0,
        v: Some(vec![0, 1]),
    };
    let p = apply_d(ScrollType::H1, &g, 8).unwrap();
    assert_eq!((p.delta_p, p.delta_phi_p), (0, 0));
    // At degree 12 the same tuple maps with both flags up.
    let p = apply_d(ScrollType::H1, &g, 12).unwrap();
    assert_eq!((p.delta_p, p.delta_phi_p), (1, 1));
}

#[test]
fn no_rank_20_tuples_above_degree_4() {
    for n in even_degrees().filter(|&n| n >= 6) {
        for (p, _) in image(n).unwrap() {
            assert_ne!((p.r, p.a), (20, 2));
            assert!(!(p.r as i64 + p.a as i64 == 22 && p.delta_phi_p == 0));
        }
    }
}

#[test]
fn exception_predicate() {
    let p = |n, r, a, dp, dphi, dpp| PolarizedInvariant {
        n,
        r,
        a,
        delta_p: dp,
        delta_phi: dphi,
        delta_phi_p: dpp,
    };
    assert!(is_exception(&p(8, 20, 2, 0, 0, 0)));
    assert!(!is_exception(&p(4, 20, 2, 0, 0, 0)));
    assert!(!is_exception(&p(8, 10, 10, 0, 0, 1)));
    assert!(is_exception(&p(8, 12, 10, 0, 0, 0)));
    assert!(!is_exception(&p(8, 12, 10, 0, 0, 1)));
}

#[test]
fn degree2_image_matches_p2_census_size() {
    // Only the plane admits degree 2, and the map is injective there.
    let im = image(2).unwrap();
    assert_eq!(im.len(), census::census_for(Surface::P2).len());
    // delta_P reads off the subgroup of the source tuple.
    for (p, sources) in &im {
        for (_, g) in sources {
            assert_eq!(p.delta_p, u8::from(g.h_name() == "0"));
        }
    }
}
