use proptest::prelude::*;
use serde_json::{Map, Value};
use w1simplex::exact_math::ratio;
use w1simplex_cli::output::format_significant;
use w1simplex_cli::{Cell, Envelope, Report, Table};

proptest! {
    #[test]
    fn rounding_keeps_requested_digits(x in -1e6f64..1e6, digits in 1usize..10) {
        prop_assume!(x.abs() > 1e-5);
        let text = format_significant(x, digits);
        let back: f64 = text.parse().unwrap();
        let tol = 0.5 * 10f64.powi(1 - digits as i32) * x.abs() * (1.0 + 1e-9);
        prop_assert!((back - x).abs() <= tol, "{x} -> {text}");
        prop_assert!(!text.contains(','));
    }

    #[test]
    fn envelope_round_trips(
        rows in prop::collection::vec((any::<i32>(), -50i64..50, 1i64..50, -1e3f64..1e3, "[a-z ]{0,8}"), 0..6),
        digits in 1usize..12,
    ) {
        let mut table = Table::new("t", &["i", "q", "x", "s"]);
        for (i, a, b, x, s) in rows {
            table.push(vec![Cell::int(i), Cell::Exact(ratio(a, b)), Cell::Float(x), Cell::text(s)]);
        }
        let mut parameters = Map::new();
        parameters.insert("digits".into(), Value::from(digits));
        let report = Report { command: "demo".into(), parameters, tables: vec![table] };
        let env = report.envelope(digits);
        let back: Envelope = serde_json::from_str(&serde_json::to_string(&env).unwrap()).unwrap();
        prop_assert_eq!(back, env);
    }
}
