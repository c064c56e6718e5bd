use std::f64::consts::PI;

use fibregate_core::gates::{average_fidelity, channel_from_kraus, ChannelMatrix};
use fibregate_core::hilbert::{full_space, BasisState, SECTOR_DIMS};
use fibregate_core::{
    average_fidelity_monte_carlo, concurrence, enumerate_sector, Evolver, GateTarget, ResultTable,
    SystemParams, TwoQubitState, C64,
};
use proptest::prelude::*;

fn arb_params() -> impl Strategy<Value = SystemParams> {
    (
        0.1..3.0f64,
        0.0..2.0 * PI,
        0.1..3.0f64,
        0.0..2.0 * PI,
        0.0..50.0f64,
        -10.0..10.0f64,
        0.0..2.0 * PI,
    )
        .prop_map(|(a1, p1, a2, p2, nu, detuning, phi)| SystemParams {
            g1: C64::from_polar(a1, p1),
            g2: C64::from_polar(a2, p2),
            nu,
            detuning,
            phi,
            ..SystemParams::default()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn kraus_sets_are_complete(p in arb_params(), t in 0.0..40.0f64) {
        let ks = Evolver::new(&p).kraus_set(t);
        prop_assert!(ks.completeness_defect() < 1e-10);
        let ch = channel_from_kraus(&ks).unwrap();
        prop_assert!(ch.trace_defect() < 1e-10);
        prop_assert!(ch.choi_min_eigenvalue() > -1e-10);
    }

    #[test]
    fn fidelities_are_bounded(p in arb_params(), t in 0.0..10.0f64, theta in -PI..PI) {
        let ch = channel_from_kraus(&Evolver::new(&p).kraus_set(t)).unwrap();
        for target in [GateTarget::swap(), GateTarget::cphase(theta)] {
            let f = average_fidelity(&ch, &target);
            prop_assert!((0.2 - 1e-12..=1.0 + 1e-12).contains(&f), "{}", f);
        }
    }

    #[test]
    fn basis_index_round_trip(sector in 0usize..=2, k in 0usize..13) {
        let basis = enumerate_sector(sector).unwrap();
        let k = k % basis.dim();
        let state = basis.states()[k];
        prop_assert_eq!(basis.index_of(&state).unwrap(), k);
        prop_assert_eq!(state.excitations(), sector);
        let space = full_space();
        prop_assert_eq!(*space.state(space.index_of(&state).unwrap()), state);
    }

    #[test]
    fn csv_values_round_trip(rows in proptest::collection::vec(
        proptest::collection::vec(proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO, 3),
        0..20,
    )) {
        let mut table = ResultTable::new(vec![("t".into(), "1/g"), ("a".into(), "1"), ("b".into(), "rad")]);
        table.rows = rows;
        let back = ResultTable::parse_csv(&table.to_csv()).unwrap();
        prop_assert_eq!(back.rows.len(), table.rows.len());
        for (x, y) in back.rows.iter().flatten().zip(table.rows.iter().flatten()) {
            prop_assert_eq!(x.to_bits(), y.to_bits());
        }
    }
}

#[test]
fn sector_dimensions_and_order() {
    let dims: Vec<usize> = (0..=2)
        .map(|n| enumerate_sector(n).unwrap().dim())
        .collect();
    assert_eq!(dims, SECTOR_DIMS);
    let space = full_space();
    assert_eq!(space.dim(), 19);
    let states: Vec<BasisState> = (0..19).map(|i| *space.state(i)).collect();
    for n in 0..=2 {
        let sector: Vec<&BasisState> = states.iter().filter(|s| s.excitations() == n).collect();
        assert!(sector.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn monte_carlo_is_seeded_and_unbiased() {
    let p = SystemParams::closed(1.0, 1.2, 0.9, 0.4);
    let ch = channel_from_kraus(&Evolver::new(&p).kraus_set(2.7)).unwrap();
    let target = GateTarget::swap();
    let a = average_fidelity_monte_carlo(&ch, &target, 3000, 5).unwrap();
    let b = average_fidelity_monte_carlo(&ch, &target, 3000, 5).unwrap();
    assert_eq!(a, b);
    let exact = average_fidelity(&ch, &target);
    assert!((a.mean - exact).abs() < 4.0 * a.std_error);
    assert!(average_fidelity_monte_carlo(&ch, &target, 10, 5).is_err());

    let id =
        average_fidelity_monte_carlo(&ChannelMatrix::identity(), &GateTarget::cphase(0.0), 500, 1)
            .unwrap();
    assert!((id.mean - 1.0).abs() < 1e-12 && id.std_error < 1e-12);
}

#[test]
fn concurrence_stays_in_range_along_cphase_run() {
    let p = SystemParams::closed(1.0, 1.5, 100.0, 10.0);
    let ev = Evolver::new(&p);
    let plus = nalgebra::Vector4::repeat(C64::new(0.5, 0.0));
    let rho0 = plus * plus.adjoint();
    for t in [0.0, 4.5, 9.0] {
        let ch = channel_from_kraus(&ev.kraus_set(t)).unwrap();
        let rho = TwoQubitState::new(ch.apply(&rho0)).unwrap();
        let c = concurrence(&rho);
        assert!((0.0..=1.0).contains(&c));
        if t == 0.0 {
            assert!(c < 1e-7);
        }
    }
}
