use std::collections::BTreeMap;

use proptest::prelude::*;

use dkl::clifford::{
    basis, blocks_from_multiplet, expand_multiplet, project_multiplet, split_blocks, LorentzMultiplet, MatrixC4, C64,
};
use dkl::dk_core::{
    all_formulations, conjugate_residual, gauge_transform, residual_matrix, residual_tetrad, LorentzGaugeElement,
    MultipletField,
};
use dkl::geometry::{apply_local_lorentz, geometry_at, permutations, LocalLorentz, TetradChart, CHART_NAMES};
use dkl::jets::{finite_difference_oracle, jet_eval, jet_rel_err, random_polynomial, FieldExpr, Point};
use dkl::sectors::{apply_sector, sector_block_check, SectorTag};

fn chart(name: &str) -> TetradChart {
    TetradChart::by_name(name, &BTreeMap::new()).unwrap()
}

/// Complex numbers with real and imaginary parts in `{-2, -15/8, ..., 2}`.
fn dyadic() -> impl Strategy<Value = C64> {
    (-16i32..=16, -16i32..=16).prop_map(|(a, b)| C64::new(a as f64 / 8.0, b as f64 / 8.0))
}

fn multiplet() -> impl Strategy<Value = LorentzMultiplet> {
    prop::array::uniform16(dyadic()).prop_map(|c| LorentzMultiplet::from_components(&c))
}

fn matrix() -> impl Strategy<Value = MatrixC4> {
    prop::array::uniform16(dyadic()).prop_map(|c| MatrixC4::from_fn(|i, j| c[4 * i + j]))
}

fn sector() -> impl Strategy<Value = SectorTag> {
    prop::sample::select(SectorTag::ALL.to_vec())
}

fn curved_chart() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["schwarzschild", "frw_flat", "de_sitter_static", "flat_spherical"])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projection_inverts_expansion(m in multiplet()) {
        prop_assert_eq!(project_multiplet(&expand_multiplet(&m)), m);
    }

    #[test]
    fn expansion_inverts_projection(u in matrix()) {
        prop_assert_eq!(expand_multiplet(&project_multiplet(&u)), u);
    }

    #[test]
    fn blocks_follow_the_expansion(m in multiplet()) {
        prop_assert_eq!(blocks_from_multiplet(&m), split_blocks(&expand_multiplet(&m)));
    }

    #[test]
    fn sigma_transpose_against_metrical_matrix(k in 0usize..6) {
        let b = basis();
        let (a, c) = dkl::clifford::PAIRS[k];
        prop_assert_eq!(b.sigma[a][c].transpose() * b.e, -(b.e * b.sigma[a][c]));
    }

    #[test]
    fn jet_product_rule(s1 in 0u64..1000, s2 in 0u64..1000, x in prop::array::uniform4(-1.0f64..1.0)) {
        let f = random_polynomial(s1, 2, 1.0);
        let g = random_polynomial(s2, 2, 1.0);
        let p = Point::new(x);
        let prod = jet_eval(&(f.clone() * g.clone()), &p).unwrap();
        let split = jet_eval(&f, &p).unwrap() * jet_eval(&g, &p).unwrap();
        prop_assert!(jet_rel_err(&prod, &split) < 1e-13);
    }

    #[test]
    fn hessian_is_symmetric(s in 0u64..1000, x in prop::array::uniform4(0.5f64..1.5)) {
        let f = (random_polynomial(s, 3, 0.2) * FieldExpr::var(1).recip()).sin().exp() * random_polynomial(s + 1, 2, 1.0);
        let j = jet_eval(&f, &Point::new(x)).unwrap();
        prop_assert!(j.is_finite());
        for mu in 0..4 {
            for nu in 0..4 {
                prop_assert_eq!(j.d2[mu][nu], j.d2[nu][mu]);
            }
        }
    }

    #[test]
    fn tetrad_jets_match_finite_differences(k in 0usize..6, seed in 0u64..1000) {
        let ch = chart(CHART_NAMES[k]);
        let p = ch.sample_points(1, seed)[0];
        for row in &ch.tetrad {
            for f in row {
                let exact = jet_eval(f, &p).unwrap();
                let fd = finite_difference_oracle(f, &p, 1e-4).unwrap();
                // compare gradients and Hessians on the scale of the entry
                let scale = exact.max_abs().max(1.0);
                for mu in 0..4 {
                    prop_assert!((exact.d1[mu] - fd.d1[mu]).norm() / scale < 1e-5);
                    for nu in 0..4 {
                        prop_assert!((exact.d2[mu][nu] - fd.d2[mu][nu]).norm() / scale < 1e-5);
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn eps_follows_orientation_and_e_is_frame_independent(
        name in curved_chart(),
        chi in -1.0f64..1.0,
        phi in -3.0f64..3.0,
        reflect in any::<bool>(),
        seed in 0u64..1000,
    ) {
        let ch = chart(name);
        let mut lam = LocalLorentz::boost(3, FieldExpr::real(chi)).then(&LocalLorentz::rotation(1, 2, FieldExpr::real(phi)));
        if reflect {
            lam = lam.then(&LocalLorentz::p_reflection());
        }
        let rotated = apply_local_lorentz(&ch, &lam).unwrap();
        let p = ch.sample_points(1, seed)[0];
        let (g, h) = (geometry_at(&ch, &p).unwrap(), geometry_at(&rotated, &p).unwrap());
        let sign = if reflect { -1.0 } else { 1.0 };
        for &([a, b, c, d], _) in permutations() {
            let scale = g.eps_x_lower[a][b][c][d].abs().max(1.0);
            prop_assert!((h.eps_x_lower[a][b][c][d] - sign * g.eps_x_lower[a][b][c][d]).abs() < 1e-12 * scale);
            prop_assert!((h.big_e[a][b][c][d] - g.big_e[a][b][c][d]).abs() < 1e-12 * scale);
        }
    }

    #[test]
    fn residuals_are_linear(name in curved_chart(), seed in 0u64..1000, re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let ch = chart(name);
        let f = MultipletField::random(seed, 2, 1.0, ch.centre(), 1.0);
        let c = C64::new(re, im);
        let p = ch.sample_points(1, seed)[0];
        let r = residual_tetrad(&ch, &f, &p).unwrap();
        let rc = residual_tetrad(&ch, &f.scaled(c), &p).unwrap();
        prop_assert!(rc.max_rel_diff(&r.scaled(c)) < 1e-12);
    }

    #[test]
    fn constant_gauge_covariance(name in curved_chart(), seed in 0u64..1000, angles in prop::array::uniform3(-0.8f64..0.8)) {
        let ch = chart(name);
        let f = MultipletField::random(seed, 2, 1.0, ch.centre(), 1.0);
        let g = LorentzGaugeElement::exponential(vec![
            (0, 2, FieldExpr::real(angles[0])),
            (1, 3, FieldExpr::real(angles[1])),
            (2, 3, FieldExpr::real(angles[2])),
        ]).unwrap();
        let (ch2, f2) = gauge_transform(&ch, &f, &g).unwrap();
        let p = ch.sample_points(1, seed)[0];
        let r = residual_matrix(&ch, &f, &p).unwrap();
        let expect = conjugate_residual(&g.s_value(&p).unwrap(), &r);
        prop_assert!((residual_matrix(&ch2, &f2, &p).unwrap() - expect).max_abs() / r.max_abs().max(1.0) < 1e-8);
    }

    #[test]
    fn formulations_agree(name in curved_chart(), seed in 0u64..1000, mass in 0.1f64..3.0) {
        let ch = chart(name);
        let f = MultipletField::random(seed, 2, 1.0, ch.centre(), mass);
        let p = ch.sample_points(1, seed)[0];
        let (d, a, b) = all_formulations(&ch, &f, &p).unwrap().max_pairwise();
        prop_assert!(d < 1e-8, "{} vs {}: {:e}", a, b, d);
    }

    #[test]
    fn block_relations_hold_exactly_inside_sectors(tag in sector(), seed in 0u64..1000, x in prop::array::uniform4(-1.0f64..1.0)) {
        let f = MultipletField::random(seed, 2, 1.0, [0.0; 4], 1.0);
        let p = Point::new(x);
        let inside = sector_block_check(&apply_sector(&f, tag), tag, &p).unwrap();
        prop_assert!(inside.iter().all(|(_, d)| *d <= 1e-12));
        let outside = sector_block_check(&f, tag, &p).unwrap();
        prop_assert!(outside.iter().any(|(_, d)| *d > 1e-6));
    }
}
