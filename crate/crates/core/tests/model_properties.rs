use proptest::prelude::*;

use softhop::model::{
    dimensionalize, force_ratio, injected_energy, liftoff_reset, mechanical_energy, nondimensionalize, spring_update,
    DimensionalSpec, HopperState, LegSpring, ModelParams, SpringMode,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn spring_update_round_trip(
        eps_inj in 0.0..100.0f64,
        phi in 0.5..5.0f64,
        kappa_c in 0.01..10.0f64,
        mu in 0.0..2.0f64,
        depth in 1.0..20.0f64,
        compression in 0.0..30.0f64,
    ) {
        let p = ModelParams::new(eps_inj, phi, kappa_c, mu).unwrap();
        let xi_f = -depth;
        let state = HopperState::new(p.lambda_c - compression + xi_f, xi_f, 0.0, 0.0);
        let comp = p.compression_spring();
        if phi * depth <= p.foot_mass() {
            prop_assert!(spring_update(&state, &comp, &p).is_err());
            return Ok(());
        }
        let ext = spring_update(&state, &comp, &p).unwrap();
        let injected = injected_energy(&state, &comp, &ext);
        let ratio = force_ratio(&state, &ext, mu);
        prop_assert!((injected - eps_inj).abs() <= 1e-10 * eps_inj.max(1.0));
        prop_assert!((ratio - phi).abs() <= 1e-10 * phi);
        prop_assert!(ext.stiffness > 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn liftoff_loss_is_mechanical_energy_drop(
        mu in 1e-3..3.0f64,
        k_e in 0.01..5.0f64,
        depth in 0.5..10.0f64,
        stretch in -5.0..5.0f64,
        v_b in -3.0..6.0f64,
        v_f in -1.0..2.0f64,
    ) {
        let p = ModelParams::new(10.0, 1.0, 0.1, mu).unwrap();
        let xi_f = -depth;
        let xi_b = p.lambda_c + xi_f + stretch;
        let lambda_e = xi_b - xi_f - p.foot_mass() / k_e;
        let ext = LegSpring::new(k_e, lambda_e, SpringMode::Extension).unwrap();
        let state = HopperState::new(xi_b, xi_f, v_b, v_f);
        let (post, loss) = liftoff_reset(&state, &p, &ext);
        let drop = mechanical_energy(&state, &ext, mu) - mechanical_energy(&post, &p.compression_spring(), mu);
        prop_assert!((loss - drop).abs() <= 1e-10 * loss.abs().max(1.0));
        prop_assert!(loss > 0.0);
        prop_assert!((post.com_position(mu) - state.com_position(mu)).abs() <= 1e-12 * xi_b.abs().max(1.0));
        prop_assert!((post.com_velocity(mu) - state.com_velocity(mu)).abs() <= 1e-12);
        prop_assert!((post.xi_b - post.xi_f - p.lambda_c).abs() <= 1e-10 * p.lambda_c);
        prop_assert_eq!(post.v_b, post.v_f);
    }

    #[test]
    fn nondimensionalization_round_trip(
        body in 0.1..100.0f64,
        foot in 0.0..10.0f64,
        ground in 10.0..1e6f64,
        leg in 10.0..1e6f64,
        length in 0.01..2.0f64,
        gravity in 1.0..20.0f64,
    ) {
        let spec = DimensionalSpec {
            body_mass: body,
            foot_mass: foot,
            ground_stiffness: ground,
            leg_stiffness_c: leg,
            unloaded_leg_length: length,
            gravity,
        };
        let (design, scales) = nondimensionalize(&spec).unwrap();
        let back = dimensionalize(&design, &scales);
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(1.0);
        prop_assert!(close(back.body_mass, body));
        prop_assert!(close(back.foot_mass, foot));
        prop_assert!(close(back.ground_stiffness, ground));
        prop_assert!(close(back.leg_stiffness_c, leg));
        prop_assert!(close(back.unloaded_leg_length, length));
        prop_assert!(close(back.gravity, gravity));
    }
}
