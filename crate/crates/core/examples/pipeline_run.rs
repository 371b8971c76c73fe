//! A config-driven run: the witness round trip on the 24-cycle, written as
//! CSV and JSON into a temporary directory.

use coarse_lab::pipeline::{self, Chain, PipelineConfig, SpaceSource};

fn main() -> coarse_lab::Result<()> {
    let config = serde_json::json!({
        "space": {"family": "cycle", "n": 24},
        "chain": "witness-roundtrip",
        "epsilon": 0.3,
        "seed": 11,
    });
    let cfg = PipelineConfig::from_value(&config, std::path::Path::new("."))?;
    let report = pipeline::run_pipeline(&cfg)?;
    print!("{}", report.to_csv()?);
    println!("passed: {}", report.passed());

    let mut forward = PipelineConfig::new(SpaceSource::Cycle { n: 80 }, Chain::OnlForward, 0.3);
    forward.trials = 3;
    forward.radius_max = 39;
    let report = pipeline::run_pipeline(&forward)?;
    let dir = std::env::temp_dir().join("coarse-lab-example");
    std::fs::create_dir_all(&dir)?;
    report.emit(Some(&dir.join("forward.csv")), Some(&dir.join("forward.json")))?;
    println!("forward chain: {} verdicts, passed {}, written to {}", report.verdicts.len(), report.passed(), dir.display());
    Ok(())
}
