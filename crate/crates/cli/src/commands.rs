use std::fs;
use std::path::{Path, PathBuf};

use capaloss::bayes::{marginals, read_distribution_file};
use capaloss::dataset::{format_sig6, write_pairwise, write_predictions, write_results};
use capaloss::measures::{
    capacity_of_with_tol, format_capacity, format_moebius, read_measure_file, MeasureSource,
    DEFAULT_TOL,
};
use capaloss::sweep::{curvature_reading, PlotData, DEFAULT_CROSSING_TOL};
use capaloss::synthetic::{crossing_fixture, FixtureConfig};
use capaloss::{
    bayes_optimal, capacity_from_covering, compute_meta, curvature_summary, diagonal_crossings,
    expand_counting, load_predictions, moebius_of, pairwise_trace, run_sweep, validate_capacity,
    Capacity, Error, LabelSet, LossSpec, Normalization, PredictionSet, Result, SweepResult,
    SweepSpec,
};

use crate::{Cli, Command, FamilyArgs, MeasureCmd};

/// Runs one subcommand; the returned code is the process exit status.
pub fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Measure(cmd) => measure(cmd, cli.tol.unwrap_or(DEFAULT_TOL)),
        Command::Loss { loss, predictions } => loss_cmd(loss, predictions),
        Command::Bayes {
            loss,
            distribution,
            strict,
        } => bayes(loss, distribution, *strict),
        Command::Sweep {
            family,
            out,
            plot_json,
            pairs,
            predictions,
        } => {
            let tol = cli.tol.unwrap_or(DEFAULT_CROSSING_TOL);
            sweep(family, out, plot_json.as_deref(), pairs, predictions, tol)
        }
        Command::Pairwise {
            family,
            method_a,
            method_b,
            out,
            predictions,
        } => {
            let tol = cli.tol.unwrap_or(DEFAULT_CROSSING_TOL);
            pairwise(family, method_a, method_b, out.as_deref(), predictions, tol)
        }
        Command::Meta { predictions } => meta(predictions),
        Command::Fixture {
            out_dir,
            seed,
            labels,
            contexts,
            instances_per_context,
        } => fixture(
            out_dir,
            &FixtureConfig {
                k: *labels,
                contexts: *contexts,
                instances_per_context: *instances_per_context,
                seed: *seed,
            },
        ),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_capacity(source: MeasureSource, tol: f64) -> Result<Capacity> {
    match source {
        MeasureSource::Capacity(c) => Ok(c),
        MeasureSource::Counting(p) => expand_counting(&p),
        MeasureSource::Moebius(m) => capacity_of_with_tol(&m, tol),
    }
}

fn measure(cmd: &MeasureCmd, tol: f64) -> Result<u8> {
    match cmd {
        MeasureCmd::Validate { file } => {
            let source = read_measure_file(file)?;
            let form = source.form_name();
            let k = source.k();
            let cap = match source {
                MeasureSource::Capacity(c) => c,
                other => match to_capacity(other, tol) {
                    Ok(c) => c,
                    Err(Error::InvalidMeasure(report)) => {
                        println!("{}: invalid ({form} form, K={k})\n{report}", file.display());
                        return Ok(2);
                    }
                    Err(e) => return Err(e),
                },
            };
            let report = validate_capacity(&cap, tol);
            if report.is_valid() {
                println!("{}: valid ({form} form, K={k})", file.display());
                Ok(0)
            } else {
                println!("{}: invalid ({form} form, K={k})\n{report}", file.display());
                Ok(2)
            }
        }
        MeasureCmd::Moebius { file, out } => {
            let moeb = match read_measure_file(file)? {
                MeasureSource::Moebius(m) => m,
                other => moebius_of(&to_capacity(other, tol)?)?,
            };
            emit(&format_moebius(&moeb), out.as_deref())?;
            Ok(0)
        }
        MeasureCmd::Expand { file, out } => {
            let cap = to_capacity(read_measure_file(file)?, tol)?;
            emit(&format_capacity(&cap), out.as_deref())?;
            Ok(0)
        }
        MeasureCmd::FromCovering {
            k,
            subsets,
            weights,
            out,
        } => {
            let covering = subsets
                .iter()
                .map(|s| {
                    let labels = s
                        .split(',')
                        .map(|t| {
                            t.trim().parse::<usize>().map_err(|_| {
                                Error::InvalidParameter(format!("bad label {t:?} in subset {s:?}"))
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    LabelSet::from_labels(*k, &labels)
                })
                .collect::<Result<Vec<_>>>()?;
            let weights = (!weights.is_empty()).then_some(weights.as_slice());
            let moeb = capacity_from_covering(*k, &covering, weights)?;
            emit(&format_moebius(&moeb), out.as_deref())?;
            Ok(0)
        }
    }
}

fn loss_cmd(spec: &str, path: &Path) -> Result<u8> {
    let spec = LossSpec::parse(spec)?;
    let ps = load_predictions(path)?;
    let loss = spec.resolve(ps.k())?;
    let values = ps
        .instances()
        .map(|(y, s)| loss.eval(y, s))
        .collect::<Result<Vec<_>>>()?;
    println!("{:>8}  {}", "instance", spec);
    for (n, v) in values.iter().enumerate() {
        println!("{:>8}  {}", n + 1, format_sig6(*v));
    }
    let mean = capaloss::mean_loss(&ps, &spec)?;
    println!("{:>8}  {}", "mean", format_sig6(mean));
    Ok(0)
}

fn bayes(spec: &str, path: &Path, strict: bool) -> Result<u8> {
    let spec = LossSpec::parse(spec)?;
    let mode = if strict {
        Normalization::Strict
    } else {
        Normalization::Lenient
    };
    let dist = read_distribution_file(path, mode)?;
    let opt = bayes_optimal(&dist, &spec)?;
    println!("{}", opt.prediction);
    println!("expected loss: {}", format_sig6(opt.expected_loss));
    let m: Vec<String> = marginals(&dist).into_iter().map(format_sig6).collect();
    println!("marginals: {}", m.join(" "));
    Ok(0)
}

fn sweep_spec(args: &FamilyArgs, k: usize) -> Result<SweepSpec> {
    match args.family.as_str() {
        "binom" => {
            if args.alpha_grid.is_some() {
                return Err(Error::InvalidParameter(
                    "--alpha-grid applies to the poly family".into(),
                ));
            }
            let (from, to) = match &args.k_range {
                None => (1, k),
                Some(r) => {
                    let (a, b) = r.split_once("..").ok_or_else(|| {
                        Error::InvalidParameter(format!("--k-range expects a..b, got {r:?}"))
                    })?;
                    let parse = |t: &str| {
                        t.trim().parse::<usize>().map_err(|_| {
                            Error::InvalidParameter(format!("bad order {t:?} in --k-range"))
                        })
                    };
                    (parse(a)?, parse(b)?)
                }
            };
            SweepSpec::binomial(from, to)
        }
        "poly" => {
            if args.k_range.is_some() {
                return Err(Error::InvalidParameter(
                    "--k-range applies to the binom family".into(),
                ));
            }
            match args.alpha_grid.as_deref() {
                None => SweepSpec::polynomial_log_grid(capaloss::sweep::DEFAULT_ALPHA_POINTS),
                Some(g) if !g.contains(',') && g.parse::<usize>().is_ok() => {
                    SweepSpec::polynomial_log_grid(g.parse().unwrap())
                }
                Some(g) => {
                    let alphas = g
                        .split(',')
                        .map(|t| {
                            t.trim().parse::<f64>().map_err(|_| {
                                Error::InvalidParameter(format!(
                                    "bad exponent {t:?} in --alpha-grid"
                                ))
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    SweepSpec::polynomial(alphas)
                }
            }
        }
        other => Err(Error::InvalidParameter(format!(
            "unknown family {other:?}, expected binom or poly"
        ))),
    }
}

fn load_all(paths: &[PathBuf]) -> Result<Vec<PredictionSet>> {
    paths.iter().map(load_predictions).collect()
}

fn run_family(args: &FamilyArgs, paths: &[PathBuf]) -> Result<SweepResult> {
    let sets = load_all(paths)?;
    let spec = sweep_spec(args, sets[0].k())?;
    run_sweep(&sets, &spec)
}

fn print_table(result: &SweepResult) {
    let methods = result.methods();
    let mut header = format!("{:>10}", result.family.to_string());
    for m in &methods {
        header.push_str(&format!("  {m:>12}"));
    }
    println!("dataset: {}", result.dataset);
    println!("{header}");
    let curves: Vec<Vec<(f64, f64)>> = methods.iter().map(|m| result.curve(m)).collect();
    for (i, p) in result.parameters().iter().enumerate() {
        let mut line = format!("{:>10}", format_sig6(*p));
        for c in &curves {
            line.push_str(&format!("  {:>12}", format_sig6(c[i].1)));
        }
        println!("{line}");
    }
}

fn sweep(
    args: &FamilyArgs,
    out: &Path,
    plot_json: Option<&Path>,
    pairs: &[String],
    paths: &[PathBuf],
    tol: f64,
) -> Result<u8> {
    let result = run_family(args, paths)?;
    write_results(out, &result.rows)?;
    print_table(&result);
    if let Some(json_path) = plot_json {
        let traces = pairs
            .iter()
            .map(|p| {
                let (a, b) = p.split_once(':').ok_or_else(|| {
                    Error::InvalidParameter(format!("--pair expects a:b, got {p:?}"))
                })?;
                pairwise_trace(&result, a, b)
            })
            .collect::<Result<Vec<_>>>()?;
        let json = PlotData::new(&result, &traces, tol).to_json()?;
        emit(&(json + "\n"), Some(json_path))?;
    }
    Ok(0)
}

fn pairwise(
    args: &FamilyArgs,
    a: &str,
    b: &str,
    out: Option<&Path>,
    paths: &[PathBuf],
    tol: f64,
) -> Result<u8> {
    let result = run_family(args, paths)?;
    let trace = pairwise_trace(&result, a, b)?;
    if let Some(path) = out {
        write_pairwise(path, &trace.as_tuples())?;
    }
    println!("dataset: {}  x: {a}  y: {b}", trace.dataset);
    println!("{:>10}  {:>12}  {:>12}", result.family.to_string(), a, b);
    for p in &trace.points {
        println!(
            "{:>10}  {:>12}  {:>12}",
            format_sig6(p.parameter),
            format_sig6(p.loss_a),
            format_sig6(p.loss_b)
        );
    }
    let crossings = diagonal_crossings(&trace, tol);
    println!("crossings: {}", crossings.len());
    for c in &crossings {
        println!(
            "  between {} and {}",
            format_sig6(c.from),
            format_sig6(c.to)
        );
    }
    match curvature_summary(&trace) {
        Ok(c) => println!(
            "curvature: {} ({})",
            format_sig6(c),
            curvature_reading(c, tol)
        ),
        Err(_) => println!("curvature: n/a (fewer than 3 points)"),
    }
    Ok(0)
}

fn meta(paths: &[PathBuf]) -> Result<u8> {
    println!(
        "{:<16} {:>9} {:>6} {:>9} {:>8} {:>11}",
        "dataset", "instances", "labels", "K/N", "unique", "cardinality"
    );
    for ps in load_all(paths)? {
        let m = compute_meta(&ps);
        println!(
            "{:<16} {:>9} {:>6} {:>9} {:>8} {:>11}",
            m.name,
            m.instances,
            m.labels,
            format_sig6(m.label_to_instance_ratio),
            m.unique_label_combinations,
            format_sig6(m.cardinality)
        );
    }
    Ok(0)
}

fn fixture(dir: &Path, config: &FixtureConfig) -> Result<u8> {
    fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.to_path_buf(),
        source: e,
    })?;
    let fx = crossing_fixture(config)?;
    for ps in [&fx.marginal, &fx.joint] {
        let path = dir.join(format!("{}.csv", ps.method));
        write_predictions(&path, ps)?;
        println!("wrote {}", path.display());
    }
    for (n, dist) in fx.distributions.iter().enumerate() {
        let path = dir.join(format!("context_{}.txt", n + 1));
        emit(&capaloss::bayes::format_distribution(dist), Some(&path))?;
    }
    println!("wrote {} context distributions", fx.distributions.len());
    Ok(0)
}
