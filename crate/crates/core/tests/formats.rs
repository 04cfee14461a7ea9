use mmse_outage::config::{Settings, KEYS};
use mmse_outage::curve_csv::{read_curves, write_curves, HEADER};
use proptest::prelude::*;

fn config_line() -> impl Strategy<Value = String> {
    (
        prop::sample::select(KEYS.to_vec()),
        prop_oneof![
            "-?[0-9]{1,4}(\\.[0-9]{1,3})?",
            "[0-9]e[0-9]",
            Just("auto".to_string()),
            Just("paper".to_string()),
            Just("per-tap".to_string()),
            "[ -~]{0,8}",
        ],
    )
        .prop_map(|(k, v)| format!("{k} = {v}"))
}

fn csv_row() -> impl Strategy<Value = String> {
    let num = prop_oneof!["-?[0-9]{1,3}\\.[0-9]{1,4}", Just("NaN".to_string()), "[0-9]{1,3}e-?[0-9]"];
    (
        "[a-z_0-9]{0,6}",
        num.clone(),
        num.clone(),
        0u64..1000,
        0u64..1000,
        num.clone(),
        num.clone(),
        num,
        prop::bool::ANY,
    )
        .prop_map(|(s, a, b, t, o, p, lo, hi, c)| format!("{s},{a},{b},{t},{o},{p},{lo},{hi},{c}"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn config_parser_never_panics(text in "\\PC{0,200}") {
        if let Ok(s) = Settings::from_text(&text) {
            let _ = s.system();
            let _ = s.grid();
            let _ = s.policy();
        }
    }

    #[test]
    fn structured_config_resolves_without_panic(lines in prop::collection::vec(config_line(), 0..12)) {
        if let Ok(s) = Settings::from_text(&lines.join("\n")) {
            let _ = s.system();
            if let Ok(g) = s.grid() {
                prop_assert!(!g.is_empty());
                prop_assert!(g.windows(2).all(|w| w[0] < w[1]));
            }
            let _ = s.policy();
        }
    }

    #[test]
    fn curve_reader_never_panics(text in "\\PC{0,200}") {
        let _ = read_curves(&text);
        let _ = read_curves(&format!("{HEADER}\n{text}"));
    }

    #[test]
    fn accepted_curves_round_trip(rows in prop::collection::vec(csv_row(), 0..8)) {
        let text = format!("{HEADER}\n{}\n", rows.join("\n"));
        if let Ok(curves) = read_curves(&text) {
            let refs: Vec<_> = curves.iter().collect();
            prop_assert_eq!(read_curves(&write_curves(&refs)).unwrap(), curves);
        }
    }
}
