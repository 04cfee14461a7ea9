//! `mmse-outage`: rate-regime prediction, outage sweeps and verification
//! suites for MMSE MIMO receivers.
//!
//! Exit status: 0 on success, 1 on configuration, applicability or
//! boundary errors, 2 when a run completed but did not converge or missed
//! its tolerance.

mod args;
mod report;
mod verify;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    InvalidRequest,
    Incomplete,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        ExitCode::from(match s {
            Status::Ok => 0,
            Status::InvalidRequest => 1,
            Status::Incomplete => 2,
        })
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (name, run_args) = match &cli.command {
        Command::Predict(a) => ("predict", a),
        Command::Outage(a) => ("outage", a),
        Command::VerifyWishart(a) => ("verify-wishart", a),
        Command::VerifyHaar(a) => ("verify-haar", a),
        Command::VerifySinr(a) => ("verify-sinr", a),
    };
    let settings = match run_args.settings() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return Status::InvalidRequest.into();
        }
    };
    let result = args::with_workers(&settings, || match name {
        "predict" => report::predict(&settings),
        "outage" => report::outage(&settings),
        "verify-wishart" => verify::wishart(&settings),
        "verify-haar" => verify::haar(&settings),
        _ => verify::sinr(&settings),
    });
    match result {
        Ok(status) => status.into(),
        Err(e) => {
            eprintln!("error: {e}");
            Status::InvalidRequest.into()
        }
    }
}
