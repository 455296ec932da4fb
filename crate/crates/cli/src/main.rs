use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lrs_core::decoder::wb_decode;
use lrs_core::lrs::LrsCode;
use lrs_core::netcode::{run_trials, ChannelConfig, CsvRow};
use lrs_core::selftest::{self, Level};
use lrs_core::serial::{
    parse_extension_poly, parse_univariate_y, vector_from_json, vector_to_json, AutoPoints, CodeSpecFile,
    DecodeResultJson, ElementJson, ExtensionSpec, PointsSpec, RingSpec, FORMAT_VERSION,
};
use lrs_core::{Error, Result};

#[derive(Parser)]
#[command(name = "lrs", version, about = "Linearized Reed-Solomon codes over Galois rings")]
struct Cli {
    /// Print machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PointsArg {
    Primitive,
    Coprime,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Build and validate a code, then write its spec file.
    Gen {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        r: u32,
        /// Polynomial in y defining R, e.g. "y" or "y^2+y+1".
        #[arg(long, default_value = "y")]
        g: String,
        /// Polynomial in z (coefficients in y) defining S, e.g. "z^2+1".
        #[arg(long)]
        h: String,
        /// Block lengths, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        partition: Vec<usize>,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "primitive")]
        points: PointsArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode a message vector.
    Encode {
        #[arg(long)]
        code: PathBuf,
        /// JSON array, inline or as a file path.
        #[arg(long)]
        msg: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decode a received vector.
    Decode {
        #[arg(long)]
        code: PathBuf,
        /// JSON array, inline or as a file path.
        #[arg(long)]
        rx: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run seeded channel trials and append a CSV row.
    Simulate {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 0)]
        rho: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Out-dimensions per shot; defaults to the partition.
        #[arg(long, value_delimiter = ',')]
        out_dims: Option<Vec<usize>>,
        /// Allow configurations beyond the decoding guarantee.
        #[arg(long)]
        stress: bool,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write a JSON-lines per-trial log.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Run the built-in property checks.
    Selftest {
        #[arg(long, value_enum, default_value = "quick")]
        level: LevelArg,
    },
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Parse(format!("{}: {e}", path.display()))
}

fn read_code(path: &Path) -> Result<LrsCode> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    CodeSpecFile::from_json(&text)?.build()
}

fn read_vector(arg: &str) -> Result<Vec<ElementJson>> {
    let text = if arg.trim_start().starts_with('[') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| io_err(Path::new(arg), e))?
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("vector: {e}")))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n")).map_err(|e| io_err(path, e)),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn gen(
    p: u64,
    r: u32,
    g: &str,
    h: &str,
    partition: Vec<usize>,
    k: usize,
    points: PointsArg,
    out: Option<&Path>,
    json: bool,
) -> Result<()> {
    let spec = CodeSpecFile {
        format: FORMAT_VERSION,
        ring: RingSpec { p, r, g: parse_univariate_y(g)? },
        extension: ExtensionSpec { h: parse_extension_poly(h)? },
        partition,
        k,
        points: PointsSpec::Auto {
            auto: match points {
                PointsArg::Primitive => AutoPoints::Primitive,
                PointsArg::Coprime => AutoPoints::Coprime,
            },
        },
    };
    let code = spec.build()?;
    let text = CodeSpecFile::from_code(&code).to_json();
    emit(out, &text)?;
    if let Some(path) = out {
        if json {
            let summary = serde_json::json!({"written": path.display().to_string(), "n": code.n(), "k": code.k()});
            println!("{summary}");
        } else {
            println!("wrote {} (n = {}, k = {}, d = {})", path.display(), code.n(), code.k(), code.designed_distance());
        }
    }
    Ok(())
}

fn encode(code: &Path, msg: &str, out: Option<&Path>) -> Result<()> {
    let code = read_code(code)?;
    let msg = vector_from_json(code.ext(), &read_vector(msg)?)?;
    let c = code.encode(&msg)?;
    emit(out, &serde_json::to_string(&vector_to_json(code.ext(), &c)).expect("vector serializes"))
}

fn decode(code: &Path, rx: &str, out: Option<&Path>) -> Result<()> {
    let code = read_code(code)?;
    let rx = vector_from_json(code.ext(), &read_vector(rx)?)?;
    let res = wb_decode(&code, &rx)?;
    let doc = DecodeResultJson::new(code.ext(), &res);
    emit(out, &serde_json::to_string(&doc).expect("result serializes"))
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    code: &Path,
    t: usize,
    rho: usize,
    trials: usize,
    seed: u64,
    out_dims: Option<Vec<usize>>,
    stress: bool,
    csv_path: Option<&Path>,
    log: Option<&Path>,
    json: bool,
) -> Result<()> {
    let code = read_code(code)?;
    let config = ChannelConfig {
        out_dims: out_dims.unwrap_or_else(|| code.partition().blocks().to_vec()),
        t,
        rho,
        trials,
        seed,
        stress,
        log: log.is_some(),
    };
    let stats = run_trials(&code, &config)?;
    let row = CsvRow::new(&code, &config, &stats);
    if let Some(path) = csv_path {
        let fresh = fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
        let file = fs::OpenOptions::new().create(true).append(true).open(path).map_err(|e| io_err(path, e))?;
        let mut writer = csv::WriterBuilder::new().has_headers(fresh).from_writer(file);
        writer.serialize(&row).map_err(|e| Error::Parse(e.to_string()))?;
        writer.flush().map_err(|e| io_err(path, e))?;
    }
    if let (Some(path), Some(records)) = (log, &stats.log) {
        let mut file = fs::File::create(path).map_err(|e| io_err(path, e))?;
        for rec in records {
            writeln!(file, "{}", serde_json::to_string(rec).expect("record serializes")).map_err(|e| io_err(path, e))?;
        }
    }
    if json {
        println!("{}", serde_json::to_string(&row).expect("row serializes"));
    } else {
        println!(
            "trials={} successes={} failures={} miscorrections={} rate={:.4}",
            stats.trials, stats.successes, stats.failures, stats.miscorrections, stats.rate
        );
    }
    Ok(())
}

fn run_selftest(level: LevelArg, json: bool) -> ExitCode {
    let level = match level {
        LevelArg::Quick => Level::Quick,
        LevelArg::Full => Level::Full,
    };
    let results = selftest::run(level);
    if json {
        println!("{}", serde_json::to_string(&results).expect("results serialize"));
    } else {
        for r in &results {
            println!("{} {} ({})", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
        }
    }
    let failed = selftest::failures(&results);
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("failed properties: {}", failed.join(", "));
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    let outcome = match cli.command {
        Command::Gen { p, r, g, h, partition, k, points, out } => gen(p, r, &g, &h, partition, k, points, out.as_deref(), json),
        Command::Encode { code, msg, out } => encode(&code, &msg, out.as_deref()),
        Command::Decode { code, rx, out } => decode(&code, &rx, out.as_deref()),
        Command::Simulate { code, t, rho, trials, seed, out_dims, stress, csv, log } => {
            simulate(&code, t, rho, trials, seed, out_dims, stress, csv.as_deref(), log.as_deref(), json)
        }
        Command::Selftest { level } => return run_selftest(level, json),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ERR:{}: {e}", e.code());
            ExitCode::from(2)
        }
    }
}
