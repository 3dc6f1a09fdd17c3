use std::fmt::Write as _;
use std::path::Path;

use heavytail::corpus::{describe, load_csv_with_diagnostics, CorpusError};
use heavytail::gof::GofError;
use heavytail::selection::{Restriction, SelectionError};
use heavytail::{
    bootstrap_gof, fit, vuong_test, wald_test, Dataset, DistributionError, DistributionSpec,
    Family, FitError, FitResult,
};

use crate::args::{CompareArgs, DescribeArgs, FitArgs, GofArgs, InputArgs, QqArgs, SimulateArgs};
use crate::report::{
    FitEntry, GofEntry, InputDigest, QqSummary, ReferenceLine, Report, Results, SimulationSummary,
};
use crate::CliError;

/// A finished command: its report, the human-readable table and warnings.
pub struct Outcome {
    pub report: Report,
    pub table: String,
    pub warnings: Vec<String>,
    /// Set when the command ran but a fit failed to converge.
    pub failure: Option<CliError>,
}

impl Outcome {
    fn ok(report: Report, table: String, warnings: Vec<String>) -> Self {
        Self {
            report,
            table,
            warnings,
            failure: None,
        }
    }
}

fn load(input: &InputArgs) -> Result<(Dataset, InputDigest, Vec<String>), CliError> {
    let (data, diagnostics) =
        load_csv_with_diagnostics(&input.input, input.column.as_deref()).map_err(data_error)?;
    let warnings = diagnostics
        .iter()
        .map(|d| format!("line {}: {}", d.line, d.reason))
        .collect();
    let digest = InputDigest {
        path: input.input.display().to_string(),
        column: data.field_name().to_string(),
        n: data.len(),
        n_original: data.n_original(),
        n_zero_removed: data.n_zero_removed(),
    };
    Ok((data, digest, warnings))
}

fn data_error(e: CorpusError) -> CliError {
    CliError::Data(e.to_string())
}

fn fit_error(family: Family, e: FitError) -> CliError {
    let msg = format!("{family}: {e}");
    match e {
        FitError::InvalidConfig(_) => CliError::Usage(msg),
        FitError::TooFewObservations { .. } | FitError::DegenerateData => CliError::Data(msg),
        FitError::InfeasibleStart(_) | FitError::Distribution(_) => CliError::Numerical(msg),
    }
}

fn check_alpha(alpha: f64) -> Result<(), CliError> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "--alpha must be in (0, 1), got {alpha}"
        )))
    }
}

fn not_converged(fits: &[&FitResult]) -> Option<CliError> {
    let failed: Vec<String> = fits
        .iter()
        .filter(|f| !f.converged)
        .map(|f| f.family().to_string())
        .collect();
    (!failed.is_empty())
        .then(|| CliError::Numerical(format!("fit did not converge: {}", failed.join(", "))))
}

fn fmt_params(spec: &DistributionSpec, std_errors: Option<&Vec<f64>>) -> String {
    let names = spec.family().parameter_names();
    let params = spec.params();
    let mut out = String::new();
    for (i, (name, value)) in names.iter().zip(&params).enumerate() {
        if i > 0 {
            out.push_str("  ");
        }
        let _ = write!(out, "{name}={value:.4}");
        if let Some(se) = std_errors {
            let _ = write!(out, " ({:.4})", se[i]);
        }
    }
    out
}

pub fn cmd_describe(args: &DescribeArgs, command: Vec<String>) -> Result<Outcome, CliError> {
    let (data, digest, warnings) = load(&args.input)?;
    let d = describe(&data).map_err(data_error)?;
    let mut table = String::new();
    let _ = writeln!(
        table,
        "{:<16} {:>6} {:>10} {:>10} {:>10} {:>7}",
        "field", "n", "mean", "median", "std_dev", "gini"
    );
    let _ = writeln!(
        table,
        "{:<16} {:>6} {:>10.3} {:>10.3} {:>10.3} {:>7.3}",
        digest.column, d.n, d.mean, d.median, d.std_dev, d.gini
    );
    if digest.n_zero_removed > 0 {
        let _ = writeln!(
            table,
            "removed {} non-positive values",
            digest.n_zero_removed
        );
    }
    let report = Report::new(
        command,
        None,
        Some(digest),
        Results::Describe { descriptives: d },
    );
    Ok(Outcome::ok(report, table, warnings))
}

fn fisk_reduction(result: &FitResult) -> Option<heavytail::WaldResult> {
    let restriction = Restriction::for_family(result.family())?;
    wald_test(result, restriction).ok()
}

pub fn cmd_fit(args: &FitArgs, command: Vec<String>) -> Result<Outcome, CliError> {
    let (data, digest, mut warnings) = load(&args.input)?;
    let config = args.fit.config();
    let mut fits = Vec::new();
    for &family in &args.family.0 {
        let result = fit(family, &data, &config).map_err(|e| fit_error(family, e))?;
        if let Some(d) = &result.diagnostic {
            warnings.push(format!("{family}: {d}"));
        }
        let wald = fisk_reduction(&result);
        fits.push(FitEntry { result, wald });
    }

    let mut table = String::new();
    let _ = writeln!(
        table,
        "{:<8} {:>12} {:>9}  estimates (standard errors)",
        "family", "loglik", "fisk p"
    );
    for entry in &fits {
        let r = &entry.result;
        let wald = entry
            .wald
            .as_ref()
            .map_or("-".to_string(), |w| format!("{:.3}", w.p_value));
        let _ = writeln!(
            table,
            "{:<8} {:>12.2} {:>9}  {}",
            r.family().tag(),
            r.log_likelihood,
            wald,
            fmt_params(&r.spec, r.std_errors.as_ref())
        );
    }
    let failure = not_converged(&fits.iter().map(|e| &e.result).collect::<Vec<_>>());
    let report = Report::new(
        command,
        Some(config.seed),
        Some(digest),
        Results::Fit { fits },
    );
    Ok(Outcome {
        report,
        table,
        warnings,
        failure,
    })
}

pub fn cmd_gof(args: &GofArgs, command: Vec<String>) -> Result<Outcome, CliError> {
    check_alpha(args.alpha)?;
    let (data, digest, warnings) = load(&args.input)?;
    let config = args.fit.config();
    config
        .validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let mut tests = Vec::new();
    for &family in &args.family.0 {
        let mut result = bootstrap_gof(family, &data, args.bootstrap, config.seed, &config)
            .map_err(|e| match e {
                GofError::TooFewReplicates(_) => CliError::Usage(e.to_string()),
                GofError::Fit(inner) => fit_error(family, inner),
                GofError::NotConverged | GofError::TooManyFailures { .. } => {
                    CliError::Numerical(format!("{family}: {e}"))
                }
            })?;
        if !args.keep_replicates {
            result.replicate_ks = None;
        }
        let rejected = result.rejects_at(args.alpha);
        tests.push(GofEntry { result, rejected });
    }

    let mut table = String::new();
    let _ = writeln!(
        table,
        "{:<8} {:>9} {:>8} {:>6} {:>9}  decision",
        "family", "ks", "p", "B", "failures"
    );
    for t in &tests {
        let r = &t.result;
        let decision = if t.rejected { "rejected" } else { "plausible" };
        let _ = writeln!(
            table,
            "{:<8} {:>9.5} {:>8.3} {:>6} {:>9}  {decision}",
            r.fitted.family().tag(),
            r.ks_org,
            r.p_value,
            r.replicates,
            r.refit_failures
        );
    }
    let report = Report::new(
        command,
        Some(config.seed),
        Some(digest),
        Results::Gof {
            alpha: args.alpha,
            tests,
        },
    );
    Ok(Outcome::ok(report, table, warnings))
}

pub fn cmd_compare(args: &CompareArgs, command: Vec<String>) -> Result<Outcome, CliError> {
    check_alpha(args.alpha)?;
    let (data, digest, warnings) = load(&args.input)?;
    let config = args.fit.config();
    let first = fit(args.family1, &data, &config).map_err(|e| fit_error(args.family1, e))?;
    let second = fit(args.family2, &data, &config).map_err(|e| fit_error(args.family2, e))?;
    if let Some(e) = not_converged(&[&first, &second]) {
        return Err(e);
    }
    let vuong = vuong_test(&data, &first.spec, &second.spec, args.alpha).map_err(|e| match e {
        SelectionError::InvalidThreshold(_) => CliError::Usage(e.to_string()),
        _ => CliError::Numerical(e.to_string()),
    })?;

    let mut table = String::new();
    let _ = writeln!(
        table,
        "{} vs {} (positive LR favors {})",
        args.family1, args.family2, args.family1
    );
    let _ = writeln!(
        table,
        "{:>10} {:>9} {:>9} {:>8}  verdict",
        "LR", "sigma", "NLR", "p"
    );
    let _ = writeln!(
        table,
        "{:>10.3} {:>9.5} {:>9.3} {:>8.3}  {}",
        vuong.lr, vuong.sigma, vuong.nlr, vuong.p_value, vuong.verdict
    );
    let report = Report::new(
        command,
        Some(config.seed),
        Some(digest),
        Results::Compare {
            first,
            second,
            vuong,
        },
    );
    Ok(Outcome::ok(report, table, warnings))
}

/// Parses `name=value` pairs in any order, or bare values in canonical order.
pub fn parse_params(family: Family, text: &str) -> Result<DistributionSpec, CliError> {
    let names = family.parameter_names();
    let fields: Vec<&str> = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    if fields.len() != names.len() {
        return Err(CliError::Usage(format!(
            "{family} takes {} parameters ({}), got '{text}'",
            names.len(),
            names.join(", ")
        )));
    }
    let number = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| CliError::Usage(format!("not a number: '{s}'")))
    };
    let mut values = vec![f64::NAN; names.len()];
    for (i, field) in fields.iter().enumerate() {
        match field.split_once('=') {
            Some((name, value)) => {
                let name = name.trim();
                let slot = names.iter().position(|n| *n == name).ok_or_else(|| {
                    CliError::Usage(format!("{family} has no parameter '{name}'"))
                })?;
                values[slot] = number(value)?;
            }
            None => values[i] = number(field)?,
        }
    }
    if let Some(i) = values.iter().position(|v| v.is_nan()) {
        return Err(CliError::Usage(format!("missing parameter '{}'", names[i])));
    }
    DistributionSpec::from_params(family, &values)
        .map_err(|e: DistributionError| CliError::Usage(e.to_string()))
}

fn write_csv<I>(path: &Path, header: &[&str], rows: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let io = |e: csv::Error| CliError::Data(format!("cannot write {}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(&row).map_err(io)?;
    }
    w.flush()
        .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))
}

/// Indices of the order statistics shown when `points` of `n` are requested.
fn plotting_indices(n: usize, points: usize) -> Vec<usize> {
    if points >= n {
        return (0..n).collect();
    }
    (0..points)
        .map(|k| (((k as f64 + 0.5) * n as f64 / points as f64) as usize).min(n - 1))
        .collect()
}

pub fn cmd_qq(args: &QqArgs, command: Vec<String>) -> Result<Outcome, CliError> {
    if !(args.split > 0.0 && args.split < 1.0) {
        return Err(CliError::Usage(format!(
            "--split must be in (0, 1), got {}",
            args.split
        )));
    }
    if args.points == Some(0) {
        return Err(CliError::Usage("--points must be positive".into()));
    }
    let (data, digest, warnings) = load(&args.input)?;
    let config = args.fit.config();
    let spec = match &args.params {
        Some(text) => parse_params(args.family, text)?,
        None => {
            let r = fit(args.family, &data, &config).map_err(|e| fit_error(args.family, e))?;
            if let Some(e) = not_converged(&[&r]) {
                return Err(e);
            }
            r.spec
        }
    };

    let sorted = data.sorted_values();
    let n = sorted.len();
    let mut rows = Vec::new();
    let (mut max_abs, mut max_rel) = (0.0f64, 0.0f64);
    let mut extent: [Option<(f64, f64)>; 2] = [None, None];
    for i in plotting_indices(n, args.points.unwrap_or(n)) {
        let u = (i as f64 + 0.5) / n as f64;
        let empirical = sorted[i];
        let theoretical = spec
            .quantile(u)
            .map_err(|e| CliError::Numerical(e.to_string()))?;
        max_abs = max_abs.max((empirical - theoretical).abs());
        max_rel = max_rel.max((empirical / theoretical - 1.0).abs());
        let panel = usize::from(u > args.split);
        let lo = empirical.min(theoretical);
        let hi = empirical.max(theoretical);
        extent[panel] = Some(match extent[panel] {
            Some((a, b)) => (a.min(lo), b.max(hi)),
            None => (lo, hi),
        });
        rows.push(vec![
            PANELS[panel].to_string(),
            u.to_string(),
            empirical.to_string(),
            theoretical.to_string(),
        ]);
    }
    let points = rows.len();
    write_csv(
        &args.output,
        &["panel", "u", "empirical_q", "theoretical_q"],
        rows,
    )?;

    let reference: Vec<ReferenceLine> = extent
        .iter()
        .zip(PANELS)
        .filter_map(|(e, panel)| {
            e.map(|(from, to)| ReferenceLine {
                panel: panel.to_string(),
                from,
                to,
            })
        })
        .collect();
    let mut table = String::new();
    let _ = writeln!(table, "{}: {}", spec.family(), fmt_params(&spec, None));
    let _ = writeln!(
        table,
        "{points} points written to {}",
        args.output.display()
    );
    let _ = writeln!(table, "max |empirical - theoretical| = {max_abs:.6e}");
    let _ = writeln!(table, "max relative deviation        = {max_rel:.6e}");
    let summary = QqSummary {
        spec,
        fitted: args.params.is_none(),
        output: args.output.display().to_string(),
        points,
        split: args.split,
        max_abs_deviation: max_abs,
        max_rel_deviation: max_rel,
        reference,
    };
    let report = Report::new(
        command,
        Some(config.seed),
        Some(digest),
        Results::Qq(summary),
    );
    Ok(Outcome::ok(report, table, warnings))
}

const PANELS: [&str; 2] = ["lower", "upper"];

pub fn cmd_simulate(args: &SimulateArgs, command: Vec<String>) -> Result<Outcome, CliError> {
    if args.n == 0 {
        return Err(CliError::Usage("--n must be positive".into()));
    }
    let spec = parse_params(args.family, &args.params)?;
    let values = if args.exact_quantiles {
        let n = args.n as f64;
        (0..args.n)
            .map(|i| spec.quantile((i as f64 + 0.5) / n))
            .collect::<Result<Vec<_>, _>>()
    } else {
        spec.sample(args.n, args.seed)
    }
    .map_err(|e| CliError::Numerical(e.to_string()))?;
    if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(CliError::Numerical(format!(
            "generated value {bad} is outside (0, inf)"
        )));
    }
    write_csv(
        &args.output,
        &["value"],
        values.iter().map(|v| vec![v.to_string()]),
    )?;

    let mut table = String::new();
    let _ = writeln!(table, "{}: {}", spec.family(), fmt_params(&spec, None));
    let _ = writeln!(
        table,
        "{} values written to {}",
        args.n,
        args.output.display()
    );
    let summary = SimulationSummary {
        spec,
        n: args.n,
        exact_quantiles: args.exact_quantiles,
        output: args.output.display().to_string(),
    };
    let seed = (!args.exact_quantiles).then_some(args.seed);
    Ok(Outcome::ok(
        Report::new(command, seed, None, Results::Simulate(summary)),
        table,
        Vec::new(),
    ))
}
