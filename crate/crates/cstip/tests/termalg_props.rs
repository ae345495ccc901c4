mod common;

use common::{fd_errors, laplacian_gap, mixed_partial_gap, second_order, series, Mono};
use cstip::termalg::{c64, d_x1, d_x2};
use proptest::prelude::*;

fn mono() -> impl Strategy<Value = Mono> {
    (
        (-1.5f64..4.0, prop_oneof![3 => Just(0.0), 1 => -0.5f64..0.5]),
        (-2.0f64..2.0, -2.0f64..2.0),
        any::<bool>(),
        (0.0f64..4.0, prop_oneof![3 => Just(0.0), 1 => -0.5f64..0.5]),
    )
        .prop_map(|(lam, c, sin, freq)| Mono { lam, c, sin, freq })
}

fn point() -> impl Strategy<Value = (f64, f64)> {
    (0.5f64..2.0, -2.5f64..2.5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn mixed_partials_commute(ms in prop::collection::vec(mono(), 1..5), (r, t) in point()) {
        let f = series(&ms);
        prop_assert!(mixed_partial_gap(&f, r, t) < 1e-10);
    }

    #[test]
    fn laplacian_matches_cartesian_sum(ms in prop::collection::vec(mono(), 1..5), (r, t) in point()) {
        let f = series(&ms);
        prop_assert!(laplacian_gap(&f, r, t) < 1e-10);
    }

    #[test]
    fn derivatives_match_central_differences(ms in prop::collection::vec(mono(), 1..4), (r, t) in point()) {
        let f = series(&ms);
        let [(a1, a2), (b1, b2)] = fd_errors(&f, r, t, 1e-2);
        let floor = 1e-9 * (1.0 + f.evaluate(r, t).unwrap().norm());
        prop_assert!(a1 < 1e-2 && a2 < 1e-2, "{a1} {a2}");
        prop_assert!(second_order(a1, b1, floor), "{a1} {b1}");
        prop_assert!(second_order(a2, b2, floor), "{a2} {b2}");
    }

    #[test]
    fn derivatives_are_linear(ms in prop::collection::vec(mono(), 1..4), ns in prop::collection::vec(mono(), 1..4),
                              s in -3.0f64..3.0, (r, t) in point()) {
        let (f, g) = (series(&ms), series(&ns));
        let combo = f.add(&g.scale(c64(s, 0.0)));
        for d in [d_x1, d_x2] {
            let lhs = d(&combo).evaluate(r, t).unwrap();
            let rhs = d(&f).evaluate(r, t).unwrap() + d(&g).evaluate(r, t).unwrap() * s;
            prop_assert!((lhs - rhs).norm() < 1e-10 * (1.0 + lhs.norm()));
        }
    }

    #[test]
    fn conjugation_commutes_with_derivatives(ms in prop::collection::vec(mono(), 1..4), (r, t) in point()) {
        let f = series(&ms);
        let a = d_x1(&f.conj()).evaluate(r, t).unwrap();
        let b = d_x1(&f).evaluate(r, t).unwrap().conj();
        prop_assert!((a - b).norm() < 1e-10 * (1.0 + a.norm()));
    }
}
