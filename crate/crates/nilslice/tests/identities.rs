use nilslice::kernel::{multiset_distance, GaussianRational, QPoly};
use nilslice::liealg::{self, Family};
use nilslice::sampling::{cell_id, random_coords, random_nonzero_rational, sample_rng};
use nilslice::slices::{
    coordinate_weights, corrected_sp_weights, jm_h, jm_triple, lambda_act_coords, lambda_act_matrix, printed_sp_weights,
    slice_point, slice_point_variant, tangent_basis, OrbitIndex, SliceCoords, Variant,
};
use nilslice::spectra::{
    charpoly_identity_check, charpoly_identity_check_variant, closed_form_charpoly, fiber_residual, kleinian_check,
    q_tau, reduced_charpoly, spectral_class_of, y_constant,
};

fn cells(m_max: usize) -> Vec<OrbitIndex> {
    Family::ALL.iter().flat_map(|&f| (1..=m_max).flat_map(move |m| OrbitIndex::all(f, m))).collect()
}

#[test]
fn closed_forms_match_exact_charpoly() {
    for idx in cells(5) {
        for s in 0..4 {
            let c = random_coords(idx, &mut sample_rng(11, cell_id(0, idx), s));
            let r = charpoly_identity_check(idx, &c).unwrap();
            assert!(r.is_zero(), "{idx} sample {s}: residual {r}");
        }
    }
}

#[test]
fn printed_sp_sign_fails_when_b_is_nonzero() {
    for m in 2..=4 {
        for idx in OrbitIndex::all(Family::C, m).into_iter().filter(|i| i.n >= 1) {
            let c = random_coords(idx, &mut sample_rng(3, cell_id(0, idx), 0));
            assert!(!charpoly_identity_check_variant(idx, &c, Variant::Printed).unwrap().is_zero(), "{idx}");
        }
    }
}

#[test]
fn printed_odd_orthogonal_slice_misses_closed_form() {
    let idx = OrbitIndex::new(Family::B, 3, 2).unwrap();
    let c = random_coords(idx, &mut sample_rng(5, cell_id(0, idx), 0));
    assert!(!charpoly_identity_check_variant(idx, &c, Variant::Printed).unwrap().is_zero());
}

#[test]
fn modified_chart_sign() {
    // with d₁ + z_n² the charpoly depends on z_n² where the closed form does not
    let idx = OrbitIndex::new(Family::C, 4, 2).unwrap();
    let mut c = SliceCoords::<GaussianRational>::zero(idx);
    c.z[1] = GaussianRational::from_int(2);
    let printed = liealg::charpoly_exact(&slice_point_variant(idx, &c, Variant::Printed).unwrap());
    let corrected = liealg::charpoly_exact(&slice_point(idx, &c).unwrap());
    assert_eq!(corrected, closed_form_charpoly(&c, Variant::Corrected).unwrap());
    assert_ne!(printed, corrected);
}

#[test]
fn slices_lie_in_the_algebra_and_are_affine() {
    for idx in cells(4) {
        let mut rng = sample_rng(9, cell_id(0, idx), 0);
        let c1 = random_coords(idx, &mut rng);
        let c2 = random_coords(idx, &mut rng);
        let s1 = slice_point(idx, &c1).unwrap();
        assert!(liealg::is_member(&s1), "{idx}");
        if idx.is_modified() {
            continue;
        }
        let sum: Vec<GaussianRational> = c1.to_flat().iter().zip(c2.to_flat()).map(|(a, b)| a + &b).collect();
        let s12 = slice_point(idx, &SliceCoords::from_flat(idx, sum).unwrap()).unwrap();
        let x = slice_point(idx, &SliceCoords::zero(idx)).unwrap();
        let s2 = slice_point(idx, &c2).unwrap();
        assert_eq!(s12.add(&x), s1.add(&s2), "{idx}");
    }
}

#[test]
fn tangent_directions_are_independent() {
    for idx in cells(5) {
        assert_eq!(tangent_basis(idx, Variant::Corrected).len(), idx.codim());
    }
}

#[test]
fn jm_relations_all_cells() {
    for idx in cells(6) {
        let t = jm_triple(idx).unwrap();
        assert!(t.relations_hold(), "{idx}");
        assert_eq!(t.h, jm_h(idx), "{idx}");
    }
}

#[test]
fn lambda_matrix_action_matches_coordinates() {
    for idx in cells(4) {
        let h = jm_h(idx);
        for s in 0..5 {
            let mut rng = sample_rng(21, cell_id(2, idx), s);
            let c = random_coords(idx, &mut rng);
            let r = random_nonzero_rational(&mut rng);
            let lhs = lambda_act_matrix(&r, &slice_point(idx, &c).unwrap(), &h).unwrap();
            let rhs = slice_point(idx, &lambda_act_coords(idx, &r, &c).unwrap()).unwrap();
            assert_eq!(lhs, rhs, "{idx}");
        }
    }
}

#[test]
fn sp_weights_agree_with_homogeneity_not_printed_z() {
    for m in 1..=6 {
        for idx in OrbitIndex::all(Family::C, m) {
            let w = coordinate_weights(idx).unwrap();
            assert_eq!(w, corrected_sp_weights(idx), "{idx}");
            assert_eq!(w == printed_sp_weights(idx), idx.n == 0, "{idx}");
        }
    }
}

#[test]
fn lambda_scales_squared_eigenvalues() {
    for idx in cells(4) {
        let mut rng = sample_rng(4, cell_id(2, idx), 0);
        let c = random_coords(idx, &mut rng);
        let r = random_nonzero_rational(&mut rng);
        let tau = spectral_class_of(&slice_point(idx, &c).unwrap()).unwrap();
        let tau_r = spectral_class_of(&slice_point(idx, &lambda_act_coords(idx, &r, &c).unwrap()).unwrap()).unwrap();
        let expect = tau.scaled(r.to_complex());
        let scale = expect.mu.iter().map(|z| z.norm()).fold(1.0, f64::max);
        assert!(multiset_distance(&expect.mu, &tau_r.mu) < 1e-7 * scale, "{idx}");
    }
}

#[test]
fn parity_of_reduced_charpoly() {
    for idx in cells(5) {
        let c = random_coords(idx, &mut sample_rng(8, cell_id(0, idx), 1));
        let p = reduced_charpoly(&slice_point(idx, &c).unwrap()).unwrap();
        assert_eq!(p.degree(), Some(idx.m()));
        assert!(p.is_monic());
    }
}

#[test]
fn sign_invariant_equals_y_and_squares_to_minus_constant() {
    for m in 2..=6 {
        for idx in OrbitIndex::all(Family::D, m) {
            let (k, mult) = y_constant(idx).unwrap();
            for s in 0..3 {
                let c = random_coords(idx, &mut sample_rng(6, cell_id(0, idx), s));
                let x = slice_point(idx, &c).unwrap();
                let p = liealg::p_invariant(&x).unwrap();
                let y = &mult * &c.to_flat()[k];
                assert_eq!(p, y, "{idx}");
                let p0 = reduced_charpoly(&x).unwrap().coeff(0);
                assert_eq!(&p * &p, -p0, "{idx}");
            }
        }
    }
}

#[test]
fn fiber_equation_holds_at_its_own_class() {
    for idx in cells(5) {
        let c = random_coords(idx, &mut sample_rng(12, cell_id(5, idx), 0));
        let tau = spectral_class_of(&slice_point(idx, &c).unwrap()).unwrap();
        let r = fiber_residual(idx, &c, &tau).unwrap();
        let scale = tau.reduced.max_abs_coeff().max(1.0);
        assert!(r.max_abs_coeff() < 1e-9 * scale, "{idx}: {}", r.max_abs_coeff());
        // moving one coordinate leaves the fiber; the step 1/17 cannot map a
        // sampled value to its negative, which could stay on it
        if !idx.shape().is_empty() {
            let mut flat = c.to_flat();
            let last = flat.len() - 1;
            flat[last] = &flat[last] + &GaussianRational::ratio(1, 17);
            let c2 = SliceCoords::from_flat(idx, flat).unwrap();
            let r2 = fiber_residual(idx, &c2, &tau).unwrap();
            assert!(r2.max_abs_coeff() > 1e-9, "{idx}");
        }
    }
}

#[test]
fn q_tau_reconstructs_p() {
    for m in 2..=5 {
        for idx in OrbitIndex::all(Family::D, m) {
            let c = random_coords(idx, &mut sample_rng(2, cell_id(5, idx), 0));
            let tau = spectral_class_of(&slice_point(idx, &c).unwrap()).unwrap();
            let q = q_tau(&tau, 1e-9).unwrap();
            let p = tau.p_sign.unwrap();
            let back = &q.shift(1) - &nilslice::kernel::CPoly::constant(p * p);
            let diff = (&back - &tau.reduced).max_abs_coeff();
            assert!(diff < 1e-9 * tau.reduced.max_abs_coeff().max(1.0));
        }
    }
}

#[test]
fn kleinian_table() {
    for f in Family::ALL {
        for m in 2..=6 {
            let Ok(kind) = liealg::AlgebraKind::new(f, m) else { continue };
            if OrbitIndex::new(f, m, 1).is_err() {
                continue;
            }
            let r = kleinian_check(kind).unwrap();
            assert!(r.matches, "{f} m={m}: found {} expected {} from {}", r.found, r.expected, r.normal_form);
        }
    }
}

#[test]
fn exact_class_of_zero_coords_is_zero() {
    for idx in cells(4) {
        let p = reduced_charpoly(&slice_point(idx, &SliceCoords::zero(idx)).unwrap()).unwrap();
        assert_eq!(p, QPoly::t_pow(idx.m()));
    }
}
