use std::io::Write;

use ldpost::{
    fibonacci_integration_lattice, fibonacci_set, generators, kronecker_lattice, random_set,
    save_point_set, sobol_set, DirectionTable, PointSet, SobolParams,
};
use serde::Serialize;
use serde_json::json;

use crate::args::{BuiltinTable, GenerateArgs, Generator, TableArgs};
use crate::error::{CliError, CliResult};
use crate::output::{sidecar, write_json};

#[derive(Debug, Serialize)]
pub struct GeneratorMeta {
    pub generator: &'static str,
    pub n: usize,
    pub d: usize,
    pub params: serde_json::Value,
    pub seed: Option<u64>,
    pub rng: Option<&'static str>,
    pub direction_table: Option<String>,
    pub version: &'static str,
}

/// A direction table chosen on the command line.
pub enum TableChoice {
    Builtin(&'static DirectionTable),
    Loaded(DirectionTable),
}

impl TableChoice {
    pub fn resolve(args: &TableArgs) -> CliResult<Self> {
        Ok(match (&args.direction_table, args.table) {
            (Some(path), _) => TableChoice::Loaded(DirectionTable::load(path)?),
            (None, Some(BuiltinTable::BratleyFox)) => {
                TableChoice::Builtin(DirectionTable::bratley_fox())
            }
            (None, _) => TableChoice::Builtin(DirectionTable::joe_kuo()),
        })
    }

    pub fn table(&self) -> &DirectionTable {
        match self {
            TableChoice::Builtin(t) => t,
            TableChoice::Loaded(t) => t,
        }
    }
}

pub fn build(generator: &Generator) -> CliResult<(PointSet<f64>, GeneratorMeta)> {
    let n = match generator {
        Generator::Fibonacci { n } | Generator::Lattice { n, .. } => *n,
        Generator::Sobol { n, .. } | Generator::Random { n, .. } => *n,
        Generator::IntegrationLattice { .. } => 1,
    };
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    if let Generator::Sobol { d: 0, .. } | Generator::Random { d: 0, .. } = generator {
        return Err(CliError::Usage("--d must be at least 1".into()));
    }
    let meta = |name, set: &PointSet<f64>, params| GeneratorMeta {
        generator: name,
        n: set.n(),
        d: set.d(),
        params,
        seed: None,
        rng: None,
        direction_table: None,
        version: env!("CARGO_PKG_VERSION"),
    };
    Ok(match generator {
        Generator::Fibonacci { n } => {
            let set = fibonacci_set(*n);
            let m = meta(
                "fibonacci",
                &set,
                json!({ "alpha": generators::GOLDEN_RATIO }),
            );
            (set, m)
        }
        Generator::Lattice { n, alpha } => {
            let set = kronecker_lattice(*n, *alpha);
            let m = meta("lattice", &set, json!({ "alpha": alpha }));
            (set, m)
        }
        Generator::IntegrationLattice { k } => {
            let set = fibonacci_integration_lattice(*k)?;
            let m = meta("integration-lattice", &set, json!({ "k": k }));
            (set, m)
        }
        Generator::Sobol { n, d, skip, table } => {
            let choice = TableChoice::resolve(table)?;
            let params = SobolParams::new(*d)
                .with_skip(*skip)
                .with_table(choice.table());
            let set = sobol_set(*n, &params)?;
            let mut m = meta("sobol", &set, json!({ "skip": skip }));
            m.direction_table = Some(choice.table().id().to_owned());
            (set, m)
        }
        Generator::Random { n, d, seed } => {
            let set = random_set(*n, *d, *seed);
            let mut m = meta("random", &set, json!({}));
            m.seed = Some(*seed);
            m.rng = Some(generators::RNG_NAME);
            (set, m)
        }
    })
}

pub fn run(args: &GenerateArgs) -> CliResult<()> {
    let (set, meta) = build(&args.generator)?;
    match &args.output {
        Some(path) => {
            save_point_set(&set, path)?;
            write_json(&sidecar(path, ".meta.json"), &meta)?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            set.write_to(&mut lock)?;
            lock.flush()?;
        }
    }
    Ok(())
}
