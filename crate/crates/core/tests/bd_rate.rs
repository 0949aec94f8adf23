mod support;

use aqm_core::{bd_rate, RdCurve};
use proptest::prelude::*;

fn four_point_curves() -> impl Strategy<Value = Vec<(f64, f64)>> {
    (100.0f64..1e6, proptest::collection::vec(1.2f64..3.0, 3), 25.0f64..35.0, proptest::collection::vec(0.8f64..4.0, 3))
        .prop_map(|(r0, rs, q0, qs)| {
            let mut pts = vec![(r0, q0)];
            for i in 0..3 {
                let (r, q) = pts[i];
                pts.push((r * rs[i], q + qs[i]));
            }
            pts
        })
}

proptest! {
    #[test]
    fn cubic_fit_matches_trapezoid_oracle(a in four_point_curves(), b in four_point_curves()) {
        let (ca, cb) = (RdCurve::new(a.clone()).unwrap(), RdCurve::new(b.clone()).unwrap());
        if let Ok(fit) = bd_rate(&ca, &cb) {
            let oracle = support::bd_rate_trapezoid(&a, &b, 20_000);
            prop_assert!((fit - oracle).abs() <= 0.05, "fit {fit} oracle {oracle}");
        }
    }
}

#[test]
fn oracle_agrees_on_uniform_offset() {
    let a = vec![(1000.0, 30.0), (1800.0, 33.1), (3500.0, 36.0), (7000.0, 39.2)];
    let b: Vec<_> = a.iter().map(|&(r, q)| (0.8 * r, q)).collect();
    assert!((support::bd_rate_trapezoid(&a, &b, 1000) + 20.0).abs() < 1e-9);
    let fit = bd_rate(&RdCurve::new(a).unwrap(), &RdCurve::new(b).unwrap()).unwrap();
    assert!((fit + 20.0).abs() < 1e-9);
}
