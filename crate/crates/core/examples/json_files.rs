//! Writes an SLH file, synthesizes it and produces a check report.

use qsde_cascade::cli::check_qsde;
use qsde_cascade::realizability::{CShape, DEFAULT_TOL};
use qsde_cascade::schema::{ReportFile, System, SystemFile};

const INPUT: &str = r#"{
  "schema": 1,
  "kind": "cascade-slh",
  "name": "atom into cavity",
  "payload": {
    "linear": {"n": 1, "r": [[0, 0], [0, 0]], "gamma1": [[0.7071067811865476, 0], [0, 0.7071067811865476]]},
    "bilinear": {"alpha2": [0, 0, 0], "gamma2": [[0.5, 0], [0, 0.5], [0, 0]]}
  }
}"#;

fn main() -> qsde_cascade::Result<()> {
    let file = SystemFile::parse(INPUT)?;
    let System::Slh(slh) = file.system(None)? else {
        unreachable!()
    };
    let q = slh.synthesize()?;
    let report = check_qsde(&q, DEFAULT_TOL, CShape::SeriesProduct)?;
    let system = System::Qsde(q);
    println!("{}", SystemFile::from_system(&system).to_json());

    let out = ReportFile::new("check", "<inline>", &"0".repeat(64), system.kind(), &report);
    println!(
        "{}",
        serde_json::to_string_pretty(&out).expect("report serializes")
    );
    Ok(())
}
