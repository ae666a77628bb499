//! Recomputes the committed Sobol' baseline.
//!
//! `cargo run --release -p ldpost-cli --example sobol_baseline -- crates/cli/data/sobol-baseline.csv`

use ldpost_cli::reproduce::baseline;

fn main() -> anyhow::Result<()> {
    let entries =
        baseline::regenerate(ldpost::DEFAULT_BOX_BUDGET).map_err(|e| anyhow::anyhow!("{e}"))?;
    match std::env::args().nth(1) {
        Some(path) => baseline::write_csv(&entries, std::fs::File::create(path)?),
        None => baseline::write_csv(&entries, std::io::stdout().lock()),
    }
    .map_err(|e| anyhow::anyhow!("{e}"))
}
