mod args;

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;
use uniquant_core::classification::{classify, ClassificationReport};
use uniquant_core::decomposition::decompose;
use uniquant_core::experiments::{run_rate_experiment, write_rate_csv, NGrid, RateConfig};
use uniquant_core::measure::{load_measure, save_measure, synth, GeneratorSpec};
use uniquant_core::quantization::{quantize, quantize_unbounded, QuantizerReport};
use uniquant_core::transport::exact_wasserstein;
use uniquant_core::{DiscreteMeasure, Error, MeasureFormat, Point, Result};

use args::{Cli, Command, Common, OutputFormat};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config() { 2 } else { 3 })
        }
    }
}

fn load(input: Option<&Path>, gen: Option<&str>, common: &Common) -> Result<DiscreteMeasure> {
    match (input, gen) {
        (Some(path), _) => {
            let format = MeasureFormat::from_path(path).ok_or_else(|| {
                Error::Config(format!("cannot tell the format of {}; use .csv or .json", path.display()))
            })?;
            load_measure(BufReader::new(File::open(path)?), format, common.normalize)
        }
        (None, Some(spec)) => {
            let mut spec: GeneratorSpec = spec.parse()?;
            if let Some(seed) = common.seed {
                spec = spec.with_seed(seed);
            }
            synth(&spec)
        }
        (None, None) => Err(Error::Config("one of --input or --gen is required".into())),
    }
}

fn emit(common: &Common, write: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match &common.out {
        Some(path) => {
            let mut sink = BufWriter::new(File::create(path)?);
            write(&mut sink)?;
            sink.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut sink = stdout.lock();
            write(&mut sink)?;
            sink.flush()?;
        }
    }
    Ok(())
}

fn json<T: Serialize>(value: &T, sink: &mut dyn Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut *sink, value)?;
    writeln!(sink)?;
    Ok(())
}

fn csv_line(sink: &mut dyn Write, fields: impl IntoIterator<Item = String>) -> Result<()> {
    writeln!(sink, "{}", fields.into_iter().collect::<Vec<_>>().join(","))?;
    Ok(())
}

fn coord_header(prefix: &str, dim: usize) -> impl Iterator<Item = String> + '_ {
    (0..dim).map(move |i| format!("{prefix}{i}"))
}

#[derive(Serialize)]
struct QuantizeOutput {
    #[serde(flatten)]
    report: QuantizerReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    measured: Option<f64>,
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Decompose(a) => {
            let rho = load(a.source.input.as_deref(), a.source.gen.as_deref(), &a.common)?;
            let dec = decompose(&rho, a.n)?;
            emit(&a.common, |sink| match a.common.format {
                OutputFormat::Json => json(&dec, sink),
                OutputFormat::Csv => {
                    csv_line(
                        sink,
                        ["k".to_string()]
                            .into_iter()
                            .chain(coord_header("x", dec.dim))
                            .chain(["w".to_string()]),
                    )?;
                    for piece in &dec.pieces {
                        for atom in piece.piece.atoms() {
                            csv_line(
                                sink,
                                [piece.k.to_string()]
                                    .into_iter()
                                    .chain(atom.point.coords().iter().map(f64::to_string))
                                    .chain([atom.weight.to_string()]),
                            )?;
                        }
                    }
                    Ok(())
                }
            })
        }
        Command::Quantize(a) => {
            let rho = load(a.source.input.as_deref(), a.source.gen.as_deref(), &a.common)?;
            rho.ensure_probability()?;
            let (report, quantizer) = match a.q {
                Some(q) => {
                    let u = quantize_unbounded(&rho, a.n, a.p, q)?;
                    (QuantizerReport::unbounded(&u)?, u.quantizer)
                }
                None => {
                    let quantizer = quantize(&rho, a.n)?;
                    (QuantizerReport::new(&quantizer, a.p)?, quantizer)
                }
            };
            let measured = if a.exact {
                Some(exact_wasserstein(&quantizer.empirical_measure(), &rho, a.p)?.value)
            } else {
                None
            };
            emit(&a.common, |sink| match a.common.format {
                OutputFormat::Json => json(&QuantizeOutput { report, measured }, sink),
                OutputFormat::Csv => save_measure(&quantizer.empirical_measure(), sink, MeasureFormat::Csv),
            })
        }
        Command::Classify(a) => {
            let cloud = load(a.source.input.as_deref(), a.source.gen.as_deref(), &a.common)?;
            let first = cloud.atoms().first().map(|x| x.weight).ok_or(Error::EmptyMeasure)?;
            if cloud.atoms().iter().any(|x| x.weight != first) {
                return Err(Error::Config("classify expects equally weighted points".into()));
            }
            let points: Vec<Point> = cloud.atoms().iter().map(|x| x.point.clone()).collect();
            let cls = classify(&points, a.n)?;
            let report = ClassificationReport::new(&cls, &points)?;
            emit(&a.common, |sink| match a.common.format {
                OutputFormat::Json => json(&report, sink),
                OutputFormat::Csv => {
                    // One row per point; `class` is k in 1..=n.
                    csv_line(sink, ["index".to_string(), "class".to_string()])?;
                    for (i, label) in cls.labels(points.len()).into_iter().enumerate() {
                        let k = label.expect("every point is classified") + 1;
                        csv_line(sink, [i.to_string(), k.to_string()])?;
                    }
                    Ok(())
                }
            })
        }
        Command::Wasserstein(a) => {
            let mu = load(a.source.input.as_deref(), a.source.gen.as_deref(), &a.common)?;
            let nu = load(a.target.target.as_deref(), a.target.target_gen.as_deref(), &a.common)?;
            let w = exact_wasserstein(&mu, &nu, a.p)?;
            emit(&a.common, |sink| match a.common.format {
                OutputFormat::Json => json(&w, sink),
                OutputFormat::Csv => {
                    csv_line(sink, ["i".to_string(), "j".to_string(), "m".to_string()])?;
                    for e in &w.plan.entries {
                        csv_line(sink, [e.i.to_string(), e.j.to_string(), e.mass.to_string()])?;
                    }
                    Ok(())
                }
            })
        }
        Command::RateCurve(a) => {
            let rho = load(a.source.input.as_deref(), a.source.gen.as_deref(), &a.common)?;
            let NGrid(ns) = a.n.parse()?;
            let config = RateConfig {
                p: a.p,
                ns,
                baseline_trials: a.baseline,
                oracle_resolution: a.oracle,
                seed: a.common.seed.unwrap_or(0),
            };
            let curve = run_rate_experiment(&rho, &config)?;
            emit(&a.common, |sink| match a.common.format {
                OutputFormat::Json => json(&curve, sink),
                OutputFormat::Csv => write_rate_csv(&curve, sink),
            })
        }
    }
}
