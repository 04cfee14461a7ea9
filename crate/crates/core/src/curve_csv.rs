//! CSV form of outage and tail curves.
//!
//! One row per SNR point under the header [`HEADER`]. Floats are written in
//! Rust's shortest round-trip form, so reading a file back reproduces the
//! in-memory values bit for bit.

use crate::error::{Error, Result};
use crate::montecarlo::{CurvePoint, OutageCurve};

pub const HEADER: &str = "scenario,snr_db,rho,trials,outages,p_out,ci_low,ci_high,converged";

const COLUMNS: usize = 9;

pub fn write_curves(curves: &[&OutageCurve]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = "writing CSV to memory cannot fail";
    w.write_record(HEADER.split(',')).expect(io);
    for curve in curves {
        for p in &curve.points {
            w.write_record([
                curve.scenario.clone(),
                format!("{:?}", p.snr_db),
                format!("{:?}", p.rho),
                p.trials.to_string(),
                p.outages.to_string(),
                format!("{:?}", p.p_out),
                format!("{:?}", p.ci_low),
                format!("{:?}", p.ci_high),
                p.converged.to_string(),
            ])
            .expect(io);
        }
    }
    let bytes = w.into_inner().expect(io);
    String::from_utf8(bytes).expect("all fields are UTF-8")
}

pub fn write_curve(curve: &OutageCurve) -> String {
    write_curves(&[curve])
}

fn field<T: std::str::FromStr>(line: u64, name: &str, raw: &str) -> Result<T> {
    raw.parse().map_err(|_| Error::Parse { line: line as usize, message: format!("invalid {name} '{raw}'") })
}

fn finite(line: u64, name: &str, raw: &str) -> Result<f64> {
    let x: f64 = field(line, name, raw)?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Parse { line: line as usize, message: format!("{name} must be finite, got '{raw}'") })
    }
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    Error::Parse { line, message: e.to_string() }
}

/// Reads curves back, grouping consecutive rows by scenario.
pub fn read_curves(text: &str) -> Result<Vec<OutageCurve>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let header_ok = reader.headers().map(|h| h.iter().eq(HEADER.split(','))).unwrap_or(false);
    if !header_ok {
        return Err(Error::Parse { line: 1, message: "missing or unexpected header".into() });
    }
    let mut curves: Vec<OutageCurve> = Vec::new();
    for record in reader.records() {
        let row = record.map_err(csv_error)?;
        let line = row.position().map_or(0, |p| p.line());
        if row.len() != COLUMNS {
            return Err(Error::Parse {
                line: line as usize,
                message: format!("expected {COLUMNS} columns, got {}", row.len()),
            });
        }
        let point = CurvePoint {
            snr_db: finite(line, "snr_db", &row[1])?,
            rho: finite(line, "rho", &row[2])?,
            trials: field(line, "trials", &row[3])?,
            outages: field(line, "outages", &row[4])?,
            p_out: finite(line, "p_out", &row[5])?,
            ci_low: finite(line, "ci_low", &row[6])?,
            ci_high: finite(line, "ci_high", &row[7])?,
            converged: field(line, "converged", &row[8])?,
        };
        if point.outages > point.trials {
            return Err(Error::Parse { line: line as usize, message: "outages exceed trials".into() });
        }
        let scenario = &row[0];
        if scenario.is_empty() {
            return Err(Error::Parse { line: line as usize, message: "empty scenario".into() });
        }
        match curves.last_mut() {
            Some(c) if c.scenario == scenario => c.points.push(point),
            _ => curves.push(OutageCurve { scenario: scenario.to_string(), points: vec![point], clamps: 0 }),
        }
    }
    Ok(curves)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::{ConvergencePolicy, EventCounts};
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn round_trip_is_exact(
            rows in proptest::collection::vec((-50.0f64..60.0, 1u64..u64::MAX / 2, 0.0f64..1.0), 1..20)
        ) {
            let policy = ConvergencePolicy::default();
            let points: Vec<CurvePoint> = rows
                .iter()
                .map(|&(db, trials, frac)| {
                    let events = (trials as f64 * frac) as u64;
                    CurvePoint::from_counts(db, EventCounts { trials, events, clamps: 0 }, &policy)
                })
                .collect();
            let curve = OutageCurve { scenario: "s_1".into(), points, clamps: 0 };
            let back = read_curves(&write_curve(&curve)).unwrap();
            prop_assert_eq!(back.len(), 1);
            prop_assert_eq!(&back[0], &curve);
        }
    }

    #[test]
    fn rejects_malformed_rows() {
        assert!(read_curves("nope\n").is_err());
        let bad = format!("{HEADER}\na,1,2,3\n");
        assert!(matches!(read_curves(&bad), Err(Error::Parse { line: 2, .. })));
        let bad = format!("{HEADER}\na,1,2,3,4,0.5,0.1,0.9,maybe\n");
        assert!(read_curves(&bad).is_err());
        let bad = format!("{HEADER}\na,1,2,3,4,0.5,0.1,0.9,true\n");
        assert!(read_curves(&bad).is_err());
        let bad = format!("{HEADER}\na,NaN,2,3,1,0.5,0.1,0.9,true\n");
        assert!(matches!(read_curves(&bad), Err(Error::Parse { line: 2, .. })));
        let bad = format!("{HEADER}\na,1,inf,3,1,0.5,0.1,0.9,true\n");
        assert!(read_curves(&bad).is_err());
    }

    #[test]
    fn scenario_with_delimiters_round_trips() {
        let curve = OutageCurve {
            scenario: "a,\"b\"\nc".into(),
            points: vec![CurvePoint::from_counts(
                1.0,
                EventCounts { trials: 10, events: 2, clamps: 0 },
                &ConvergencePolicy::default(),
            )],
            clamps: 0,
        };
        assert_eq!(read_curves(&write_curve(&curve)).unwrap(), vec![curve]);
    }

    #[test]
    fn groups_by_scenario() {
        let text = format!("{HEADER}\na,0,1,10,1,0.1,0,1,false\na,1,1.2,10,1,0.1,0,1,false\nb,0,1,10,2,0.2,0,1,false\n");
        let curves = read_curves(&text).unwrap();
        assert_eq!(curves.iter().map(|c| c.points.len()).collect::<Vec<_>>(), vec![2, 1]);
    }
}
