//! Independent oracles and frozen reference values.

mod common;

use std::sync::Arc;

use common::{oracle_betti, oracle_ranks, q, random_semigroup, rank_mod_p, tuples};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use taille::cochain::{cohomology_rank, Cochain};
use taille::exact::to_f64;
use taille::geometry::{
    de_broglie_wavelength, equator_scenario, export_sphere_twist, free_particle_period,
    free_particle_phase_exact, maslov_polygon, plane_signed_area, sphere_triangle_area, PhasePoint,
    PlanePolyline, Triangulation, Vec3,
};
use taille::lattice::{exact_walk_pmf, gaussian_compare, n_cell_mean_pmf};
use taille::nerve::{
    barycentric_subdivision, compare_poset_cohomology, nerve, simplicial_cohomology_ranks,
    SimplicialComplex,
};
use taille::semigroup::{
    matrix_unit_semigroup, monomial_semigroup, poset_semigroup, quiver_path_semigroup, Arrow,
};
use taille::twist::{
    exp_twist, quantum_plane_exponent, star, triviality_check, AlgebraElement, Triviality,
};
use taille::{Coefficients, DegreeZero, Poset, Quiver};

fn tetra_face_poset() -> Poset {
    barycentric_subdivision(&SimplicialComplex::simplex_boundary(3))
}

#[test]
fn mod_p_rank_matches_small_hand_cases() {
    assert_eq!(rank_mod_p(2, 2, &[(0, 0, 1), (1, 1, 1)]), 2);
    assert_eq!(
        rank_mod_p(2, 2, &[(0, 0, 1), (0, 1, 1), (1, 0, 2), (1, 1, 2)]),
        1
    );
    assert_eq!(
        rank_mod_p(
            3,
            3,
            &[
                (0, 0, 1),
                (0, 1, -1),
                (1, 1, 1),
                (1, 2, -1),
                (2, 0, -1),
                (2, 2, 1)
            ]
        ),
        2
    );
}

#[test]
fn cohomology_ranks_agree_with_oracle_on_random_semigroups() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checked = 0;
    while checked < 60 {
        let s = random_semigroup(&mut rng);
        for n in 0..=2 {
            if n == 0 && !s.has_objects() {
                continue;
            }
            if tuples(&s, n + 1).len() > 200 {
                continue;
            }
            let r = cohomology_rank(&s, n, DegreeZero::Objects).unwrap();
            assert_eq!(
                (r.cocycles, r.coboundaries, r.cohomology),
                oracle_ranks(&s, n, true),
                "{s:?} degree {n}"
            );
            let z = cohomology_rank(&s, n, DegreeZero::Zero).unwrap();
            assert_eq!(
                (z.cocycles, z.coboundaries, z.cohomology),
                oracle_ranks(&s, n, false),
                "{s:?} degree {n}"
            );
            checked += 1;
        }
    }
}

#[test]
fn face_poset_ranks_agree_with_oracle() {
    let tri = barycentric_subdivision(&SimplicialComplex::simplex_boundary(2));
    let s = poset_semigroup(&tri).unwrap();
    for n in 0..=2 {
        let r = cohomology_rank(&s, n, DegreeZero::Objects).unwrap();
        assert_eq!(
            (r.cocycles, r.coboundaries, r.cohomology),
            oracle_ranks(&s, n, true)
        );
    }
    let tet = poset_semigroup(&tetra_face_poset()).unwrap();
    let r = cohomology_rank(&tet, 2, DegreeZero::Objects).unwrap();
    assert_eq!(
        (r.cocycles, r.coboundaries, r.cohomology),
        oracle_ranks(&tet, 2, true)
    );
    assert_eq!(r.cohomology, 1);
}

#[test]
fn simplicial_betti_agree_with_oracle() {
    for k in [
        SimplicialComplex::simplex_boundary(2),
        SimplicialComplex::simplex_boundary(3),
        SimplicialComplex::simplex(3),
        nerve(&tetra_face_poset()),
    ] {
        let d = k.dimension().unwrap();
        assert_eq!(
            simplicial_cohomology_ranks(&k, d).unwrap(),
            oracle_betti(&k, d)
        );
    }
    assert_eq!(
        oracle_betti(&SimplicialComplex::simplex_boundary(2), 1),
        vec![1, 1]
    );
    assert_eq!(
        oracle_betti(&SimplicialComplex::simplex_boundary(3), 2),
        vec![1, 0, 1]
    );
}

#[test]
fn semigroup_counts() {
    let chain = Poset::new(&["0", "1"], &[("0", "1")]).unwrap();
    let s = poset_semigroup(&chain).unwrap();
    let mut names: Vec<&str> = s.nonzero().map(|a| s.name(a)).collect();
    names.sort_unstable();
    assert_eq!(names, ["e00", "e01", "e11"]);

    // Pairs i <= j in the face poset of the tetrahedron boundary: every
    // face paired with each of its faces. Vertices 1+3+3, edges 1+2, triangles 1+3+3.
    let p = tetra_face_poset();
    let pairs = 4 * (1 + 3 + 3) + 6 * (1 + 2) + 4;
    assert_eq!(p.comparable_pairs().len(), pairs);
    let tet = poset_semigroup(&p).unwrap();
    assert_eq!(tet.objects().unwrap().len(), 14);
    assert_eq!(tet.len(), pairs + 1);

    assert_eq!(monomial_semigroup(2, 3).unwrap().len(), 11);

    let a2 = Quiver::new(
        vec!["1".into(), "2".into()],
        vec![Arrow {
            label: "alpha".into(),
            from: "1".into(),
            to: "2".into(),
        }],
        None,
    )
    .unwrap();
    assert_eq!(quiver_path_semigroup(&a2).unwrap().len(), 4);
    let lp = Quiver::new(
        vec!["n".into()],
        vec![Arrow {
            label: "a".into(),
            from: "n".into(),
            to: "n".into(),
        }],
        Some(3),
    )
    .unwrap();
    let l = quiver_path_semigroup(&lp).unwrap();
    assert_eq!(l.len(), 5);
    let a2e = l.element("a.a").unwrap();
    assert!(l.is_zero(l.mul(a2e, a2e)));

    let m = matrix_unit_semigroup(2).unwrap();
    let e = |n: &str| m.element(n).unwrap();
    let t3 = tuples(&m, 3);
    assert!(t3.contains(&vec![e("e11"), e("e12"), e("e22")]));
    assert!(!t3.contains(&vec![e("e12"), e("e12"), e("e21")]));
}

#[test]
fn nerve_face_counts() {
    assert_eq!(nerve(&tetra_face_poset()).f_vector(), vec![14, 36, 24]);
    let tri = barycentric_subdivision(&SimplicialComplex::simplex_boundary(2));
    assert_eq!(tri.len(), 6);
}

#[test]
fn comparison_frozen_reports() {
    let tri = barycentric_subdivision(&SimplicialComplex::simplex_boundary(2));
    let r = compare_poset_cohomology(&tri, 1, DegreeZero::Objects).unwrap();
    assert_eq!(
        r.to_csv(),
        "degree,semigroup_rank,simplicial_rank,match\n0,1,1,true\n1,1,1,true\n"
    );
    let r = compare_poset_cohomology(&tetra_face_poset(), 2, DegreeZero::Objects).unwrap();
    assert_eq!(
        r.to_csv(),
        "degree,semigroup_rank,simplicial_rank,match\n0,1,1,true\n1,0,0,true\n2,1,1,true\n"
    );
}

#[test]
fn chain_cocycle_has_explicit_primitive() {
    let chain = Poset::new(&["0", "1"], &[("0", "1")]).unwrap();
    let s = Arc::new(poset_semigroup(&chain).unwrap());
    let e01 = s.element("e01").unwrap();
    let f = Cochain::from_fn(s.clone(), 1, Coefficients::Rationals, |t| {
        if t == [e01] {
            q(5, 1)
        } else {
            q(0, 1)
        }
    });
    assert!(f.is_cocycle().unwrap());
    let mut g = Cochain::zero(s.clone(), 0, Coefficients::Rationals);
    g.set(&[s.element("e11").unwrap()], q(5, 1)).unwrap();
    assert_eq!(g.coboundary().unwrap(), f);
}

#[test]
fn quantum_plane_values() {
    let f = quantum_plane_exponent(2).unwrap();
    let s = f.semigroup().clone();
    let (x, y, xy) = (
        s.element("x").unwrap(),
        s.element("y").unwrap(),
        s.element("xy").unwrap(),
    );
    assert_eq!(f.get(&[x, y]), q(1, 2));
    assert_eq!(f.get(&[y, x]), q(-1, 2));
    let t = exp_twist(&f, q(1, 1)).unwrap();
    let bx = AlgebraElement::<Complex64>::basis(s.clone(), x);
    let by = AlgebraElement::<Complex64>::basis(s.clone(), y);
    let xy_star = star(&t, &bx, &by).unwrap();
    assert!((xy_star.coeff(xy) - Complex64::new(0.5f64.exp(), 0.0)).norm() < 1e-15);
    assert_eq!(
        triviality_check(&t, || false).unwrap(),
        Triviality::Nontrivial
    );
}

#[test]
fn geometry_reference_values() {
    let n = Vec3::new(0.0, 0.0, 1.0);
    let a = Vec3::new(1.0, 0.0, 0.0);
    let b = Vec3::new(0.0, 1.0, 0.0);
    assert!(
        (sphere_triangle_area(&n, &a, &b, 1.0).unwrap() - std::f64::consts::FRAC_PI_2).abs()
            < 1e-12
    );
    // Impulse scenario with p = 2, v = 3, t = 1.
    let o = PhasePoint::new(0.0, 0.0);
    let up = PhasePoint::new(0.0, 2.0);
    let right = PhasePoint::new(3.0, 2.0);
    assert_eq!(plane_signed_area(&o, &up, &right), 3.0);
    let tri =
        PlanePolyline::from_coords(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (0.0, 0.0)]).unwrap();
    assert_eq!(maslov_polygon(&tri).unwrap(), 2);
    assert_eq!(
        free_particle_period(q(2, 1), q(3, 1), q(1, 1)).unwrap(),
        q(1, 6)
    );
    assert_eq!(de_broglie_wavelength(q(2, 1), q(1, 1)).unwrap(), q(1, 2));
    let (area, phase) = free_particle_phase_exact(&q(2, 1), &q(3, 1), &q(1, 12), &q(1, 1)).unwrap();
    assert_eq!(area, q(1, 2));
    assert!((phase - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
}

#[test]
fn equator_reference_values() {
    // 45 degrees south, lambda = pi/2: the triangle (start, (1,0,0), (0,1,0)).
    let theta0 = std::f64::consts::FRAC_PI_4;
    let r = equator_scenario(theta0, &[std::f64::consts::FRAC_PI_2]).unwrap();
    let start = Vec3::new(theta0.cos(), 0.0, -theta0.sin());
    let excess = sphere_triangle_area(
        &start,
        &Vec3::new(1.0, 0.0, 0.0),
        &Vec3::new(0.0, 1.0, 0.0),
        1.0,
    )
    .unwrap();
    let raw = r.points[0].raw_area.unwrap();
    assert!((raw.abs() - excess.abs()).abs() < 1e-12);
    // Girard: angles pi/2 at (1,0,0), pi/4 at (0,1,0) and pi/2 at the start.
    assert!((raw - std::f64::consts::FRAC_PI_4).abs() < 1e-12, "{raw}");
}

#[test]
fn sphere_export_cells() {
    let oct = export_sphere_twist(Triangulation::Octahedral).unwrap();
    assert_eq!(oct.cell_areas.len(), 48);
    assert!(oct
        .cell_areas
        .iter()
        .all(|a| (a - std::f64::consts::PI / 12.0).abs() < 1e-9));
    let total: f64 = oct.cell_areas.iter().sum();
    assert!((total - 4.0 * std::f64::consts::PI).abs() < 1e-9);
    let tet = export_sphere_twist(Triangulation::Tetrahedral).unwrap();
    assert_eq!(tet.cell_areas.len(), 24);
    assert!(tet
        .cell_areas
        .iter()
        .all(|a| (a - std::f64::consts::PI / 6.0).abs() < 1e-9));
}

#[test]
fn lattice_reference_values() {
    let d = exact_walk_pmf(2, &q(1, 2)).unwrap();
    assert_eq!(
        d.iter().map(|(k, p)| (k, p.clone())).collect::<Vec<_>>(),
        vec![(-2, q(1, 4)), (0, q(1, 2)), (2, q(1, 4))]
    );
    let two = n_cell_mean_pmf(1, &q(1, 2), 2).unwrap();
    assert_eq!(
        two.iter()
            .map(|(k, p)| (two.position(k), p.clone()))
            .collect::<Vec<_>>(),
        vec![(q(-1, 1), q(1, 4)), (q(0, 1), q(1, 2)), (q(1, 1), q(1, 4))]
    );
    assert_eq!(
        n_cell_mean_pmf(10, &q(1, 2), 5).unwrap().variance(),
        q(2, 1)
    );

    // Exact binomial CDF against the Gaussian: central jump C(100,50)/2^100
    // ~ 0.0796, so the largest gap is about half of it.
    let r = gaussian_compare(100, &q(1, 2)).unwrap();
    let central = to_f64(&exact_walk_pmf(100, &q(1, 2)).unwrap().probability(0));
    assert!((central - 0.07958923738717877).abs() < 1e-15);
    assert!((r.max_cdf_gap_within_2sigma - central / 2.0).abs() < 1e-12);
    assert!((r.berry_esseen_bound - 0.04748).abs() < 1e-15);
}
