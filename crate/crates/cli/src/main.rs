//! Command-line surface: entropy bounds, packing/covering construction and
//! verification, impulse-response encode/decode, and the brute-force oracle.
//!
//! Exit codes: 0 success, 1 invariant violation, 2 invalid configuration,
//! 3 invalid input data, 4 corrupt bitstream.

use clap::{Parser, Subcommand, ValueEnum};
use ltientropy::codec;
use ltientropy::covering::{
    self, covering_cardinality_exact, covering_log2_cardinality, covering_params,
};
use ltientropy::entropy::{big_o_remainder_check, entropy_report};
use ltientropy::oracle::{discretize_class, sandwich_check};
use ltientropy::packing::{
    self, packing_cardinality_exact, packing_element, packing_log2_cardinality, packing_params,
};
use ltientropy::{DecayClass, Error, ImpulseResponse};
use serde_json::json;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "ltientropy", version, about = "Coverings, packings, and metric-entropy bounds for exponentially decaying LTI systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the entropy bracket and closed-form bounds per eps
    Bounds {
        #[arg(short)]
        a: f64,
        #[arg(short)]
        b: f64,
        /// Single value or log-spaced sweep "start:stop:points"
        #[arg(long)]
        eps: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Output path (default: stdout, or $LTIENTROPY_OUTPUT)
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Derive the (2 eps)-packing; optionally verify separation
    Pack {
        #[arg(short)]
        a: f64,
        #[arg(short)]
        b: f64,
        #[arg(long)]
        eps: f64,
        /// Check pairwise l2 separation > 2 eps
        #[arg(long)]
        verify: bool,
        /// Random pairs to sample when the packing is too large to exhaust
        #[arg(long, default_value_t = 1000)]
        pairs: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// List explicit elements (cardinality <= 10^4 only)
        #[arg(long)]
        elements: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Derive the eps-covering; optionally verify certified distortion
    Cover {
        #[arg(short)]
        a: f64,
        #[arg(short)]
        b: f64,
        #[arg(long)]
        eps: f64,
        /// Certify distortion <= eps on random members
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        elements: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Encode an impulse response (CSV: one coefficient per line, or JSON
    /// array) into a bitstream file
    Encode {
        #[arg(short)]
        a: f64,
        #[arg(short)]
        b: f64,
        #[arg(long)]
        eps: f64,
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Decode a bitstream file; reports parameters and the certified
    /// distortion bound, optionally writing the reconstruction as CSV
    Decode {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the exhaustive covering-packing sandwich on tiny discretized
    /// instances
    Oracle {
        #[arg(short, default_value_t = 1.0)]
        a: f64,
        #[arg(short, default_value_t = 1.0)]
        b: f64,
        /// Largest support index of the discretization
        #[arg(long, default_value_t = 1)]
        max_t: usize,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        /// Number of eps grid points (log-spaced over [0.1, 2.5] * a)
        #[arg(long, default_value_t = 10)]
        eps_points: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::InvalidEpsilon { .. }
        | Error::InvalidClass { .. }
        | Error::TooLarge(_)
        | Error::OutsideUnitDisk { .. } => 2,
        Error::NotAMember { .. } => 3,
        Error::Format(_) | Error::Corrupt(_) => 4,
        _ => 1,
    }
}

/// A flat table: header plus rows of (name, json value) pairs, rendered as
/// CSV or a JSON array of objects.
struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<serde_json::Value>>,
}

impl Table {
    fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<serde_json::Value>) {
        assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = String::new();
                out.push_str(&self.columns.join(","));
                out.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row
                        .iter()
                        .map(|v| match v {
                            serde_json::Value::String(s) => s.clone(),
                            other => other.to_string(),
                        })
                        .collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let objects: Vec<serde_json::Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let map: serde_json::Map<String, serde_json::Value> = self
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(c, v)| (c.to_string(), v.clone()))
                            .collect();
                        serde_json::Value::Object(map)
                    })
                    .collect();
                let doc = json!({
                    "schema_version": SCHEMA_VERSION,
                    "rows": objects,
                });
                let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
                s.push('\n');
                s
            }
        }
    }
}

fn emit(table: &Table, format: Format, output: Option<PathBuf>) -> ltientropy::Result<()> {
    let output = output.or_else(|| std::env::var_os("LTIENTROPY_OUTPUT").map(PathBuf::from));
    let text = table.render(format);
    match output {
        Some(path) => {
            fs::write(&path, text)
                .map_err(|e| Error::Format(format!("cannot write {}: {e}", path.display())))?;
        }
        None => {
            print!("{text}");
            std::io::stdout().flush().ok();
        }
    }
    Ok(())
}

/// Parses either a single eps or "start:stop:points" (log-spaced, inclusive,
/// sorted descending so sweeps run from coarse to fine).
fn parse_eps_spec(spec: &str) -> ltientropy::Result<Vec<f64>> {
    let bad = |msg: &str| Error::Format(format!("{msg}: {spec:?}"));
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [one] => {
            let v: f64 = one.parse().map_err(|_| bad("unparsable eps"))?;
            Ok(vec![v])
        }
        [start, stop, points] => {
            let start: f64 = start.parse().map_err(|_| bad("unparsable sweep start"))?;
            let stop: f64 = stop.parse().map_err(|_| bad("unparsable sweep stop"))?;
            let points: usize = points.parse().map_err(|_| bad("unparsable point count"))?;
            if points == 0 || start <= 0.0 || stop <= 0.0 {
                return Err(bad("sweep needs positive endpoints and points"));
            }
            if points == 1 {
                return Ok(vec![start]);
            }
            let (ls, le) = (start.ln(), stop.ln());
            let mut eps: Vec<f64> = (0..points)
                .map(|i| (ls + (le - ls) * i as f64 / (points - 1) as f64).exp())
                .collect();
            eps.sort_by(|x, y| y.partial_cmp(x).unwrap());
            Ok(eps)
        }
        _ => Err(bad("expected EPS or START:STOP:POINTS")),
    }
}

fn read_impulse_response(path: &PathBuf) -> ltientropy::Result<ImpulseResponse> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Format(format!("cannot read {}: {e}", path.display())))?;
    let trimmed = text.trim_start();
    let coeffs: Vec<f64> = if trimmed.starts_with('[') {
        let vals: Vec<f64> = serde_json::from_str(trimmed)
            .map_err(|e| Error::Format(format!("bad JSON array: {e}")))?;
        vals
    } else {
        text.lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| {
                l.parse::<f64>()
                    .map_err(|e| Error::Format(format!("bad coefficient {l:?}: {e}")))
            })
            .collect::<ltientropy::Result<_>>()?
    };
    Ok(ImpulseResponse::new(coeffs))
}

fn run(cmd: Command) -> ltientropy::Result<ExitCode> {
    match cmd {
        Command::Bounds {
            a,
            b,
            eps,
            format,
            output,
        } => {
            let class = DecayClass::new(a, b)?;
            let sweep = parse_eps_spec(&eps).map_err(|_| Error::InvalidEpsilon { eps: f64::NAN, a })?;
            for &e in &sweep {
                class.check_eps(e)?;
            }
            let mut table = Table::new(vec![
                "eps",
                "log2_packing",
                "log2_covering",
                "closed_form_lower",
                "closed_form_upper",
                "asymptotic",
                "ratio_lower",
                "ratio_upper",
            ]);
            let mut ok = true;
            for &e in &sweep {
                let rep = entropy_report(&class, e)?;
                ok &= rep.ordering_ok();
                table.push(vec![
                    json!(rep.eps),
                    json!(rep.log2_packing),
                    json!(rep.log2_covering),
                    json!(rep.closed_form_lower),
                    json!(rep.closed_form_upper),
                    json!(rep.asymptotic),
                    json!(rep.ratio_lower),
                    json!(rep.ratio_upper),
                ]);
            }
            // remainder fit over the sweep, surfaced on stderr for scripts
            if sweep.len() > 1 {
                let rem = big_o_remainder_check(&class, &sweep)?;
                eprintln!("fitted remainder constant: {:.6}", rem.fitted_c);
                ok &= rem.ok;
            }
            emit(&table, format, output)?;
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }

        Command::Pack {
            a,
            b,
            eps,
            verify,
            pairs,
            seed,
            elements,
            format,
            output,
        } => {
            let class = DecayClass::new(a, b)?;
            let params = packing_params(&class, eps)?;
            let mut table = Table::new(vec!["t", "n_t", "delta_t"]);
            for (t, (&n, &d)) in params.counts().iter().zip(params.steps()).enumerate() {
                table.push(vec![json!(t), json!(n), json!(d)]);
            }
            emit(&table, format, output)?;
            eprintln!(
                "C1 = {}, log2 cardinality = {:.6}, exact = {}",
                params.c1(),
                packing_log2_cardinality(&params),
                packing_cardinality_exact(&params)
            );
            if elements {
                if packing_cardinality_exact(&params) > 10_000u32.into() {
                    return Err(Error::TooLarge(
                        "element listing is limited to 10^4 elements".into(),
                    ));
                }
                for idx in ltientropy::index::enumerate_indices(&params.radices()) {
                    let k = packing_element(&params, &class, &idx)?;
                    println!(
                        "{}",
                        k.coeffs()
                            .iter()
                            .map(|v| v.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    );
                }
            }
            if verify {
                let report = packing::verify_separation(&params, &class, eps, pairs, seed)?;
                eprintln!(
                    "separation: {} pairs ({}), min = {:.6}, threshold = {:.6}, violations = {}",
                    report.pairs_checked,
                    if report.exhaustive { "exhaustive" } else { "sampled" },
                    report.min_separation,
                    report.threshold,
                    report.violations
                );
                if !report.ok() {
                    return Ok(ExitCode::from(1));
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Cover {
            a,
            b,
            eps,
            verify,
            samples,
            seed,
            elements,
            format,
            output,
        } => {
            let class = DecayClass::new(a, b)?;
            let params = covering_params(&class, eps)?;
            let mut table = Table::new(vec!["t", "n_t", "delta_t"]);
            for (t, &n) in params.counts().iter().enumerate() {
                table.push(vec![json!(t), json!(n), json!(params.delta())]);
            }
            emit(&table, format, output)?;
            eprintln!(
                "C2 = {}, delta = {}, log2 cardinality = {:.6}, exact = {}",
                params.c2(),
                params.delta(),
                covering_log2_cardinality(&params),
                covering_cardinality_exact(&params)
            );
            if elements {
                if covering_cardinality_exact(&params) > 10_000u32.into() {
                    return Err(Error::TooLarge(
                        "element listing is limited to 10^4 elements".into(),
                    ));
                }
                for idx in ltientropy::index::enumerate_indices(&params.radices()) {
                    let k = covering::covering_element(&params, &class, &idx)?;
                    println!(
                        "{}",
                        k.coeffs()
                            .iter()
                            .map(|v| v.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    );
                }
            }
            if verify {
                let report = covering::verify_cover(&params, &class, eps, samples, seed)?;
                eprintln!(
                    "cover: {} samples, worst certified distortion = {:.6}, tail bound = {:.6}, violations = {}",
                    report.samples, report.worst_certified, report.tail_bound, report.violations
                );
                if !report.ok() {
                    return Ok(ExitCode::from(1));
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Encode {
            a,
            b,
            eps,
            input,
            output,
        } => {
            let class = DecayClass::new(a, b)?;
            let k = read_impulse_response(&input)?;
            let stream = codec::encode(&class, eps, &k)?;
            fs::write(&output, stream.as_bytes())
                .map_err(|e| Error::Format(format!("cannot write {}: {e}", output.display())))?;
            let rate = codec::rate_report(&class, eps)?;
            eprintln!(
                "encoded {} coefficients: {} payload bits + {} header bits (rate formula {:.4})",
                k.len(),
                rate.bits,
                rate.overhead_bits,
                rate.rate_formula
            );
            Ok(ExitCode::SUCCESS)
        }

        Command::Decode { input, output } => {
            let bytes = fs::read(&input)
                .map_err(|e| Error::Format(format!("cannot read {}: {e}", input.display())))?;
            let stream = codec::Bitstream::from_bytes(bytes);
            let (class, eps, recon) = codec::decode(&stream)?;
            let params = covering_params(&class, eps)?;
            // worst-case certified bound for any member mapping to this element
            let bound = (params.c2() as f64 + 1.0) * params.delta() / 2.0
                + params.tail_bound(&class);
            eprintln!(
                "decoded: a = {}, b = {}, eps = {}, certified distortion <= {:.6}",
                class.a(),
                class.b(),
                eps,
                bound
            );
            match output {
                Some(path) => {
                    let text: String = recon
                        .coeffs()
                        .iter()
                        .map(|v| format!("{v}\n"))
                        .collect();
                    fs::write(&path, text).map_err(|e| {
                        Error::Format(format!("cannot write {}: {e}", path.display()))
                    })?;
                }
                None => {
                    for v in recon.coeffs() {
                        println!("{v}");
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Oracle {
            a,
            b,
            max_t,
            levels,
            eps_points,
            format,
            output,
        } => {
            let class = DecayClass::new(a, b)?;
            let set = discretize_class(&class, max_t, levels)?;
            let mut table = Table::new(vec![
                "t_max", "levels", "eps", "m_2eps", "n_eps", "m_eps", "ok",
            ]);
            let mut all_ok = true;
            let points = eps_points.max(1);
            for i in 0..points {
                let frac = if points == 1 {
                    0.0
                } else {
                    i as f64 / (points - 1) as f64
                };
                // log-spaced from 0.1 a to 2.5 a
                let eps = a * 0.1 * (25.0f64).powf(frac);
                let rep = sandwich_check(&set, eps)?;
                all_ok &= rep.ok();
                table.push(vec![
                    json!(max_t),
                    json!(levels),
                    json!(eps),
                    json!(rep.m_2eps),
                    json!(rep.n_eps),
                    json!(rep.m_eps),
                    json!(rep.ok()),
                ]);
            }
            emit(&table, format, output)?;
            Ok(if all_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}
