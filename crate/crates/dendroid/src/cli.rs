//! The `dendroid` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use dendroid_core::forest::{chow_liu_trace, suzuki_trace, KruskalTrace};
use dendroid_core::model::{description_length, fit, log_likelihood, sample};
use dendroid_core::oracle::{brute_force_best_forest, MAX_ENUMERATION_VERTICES};
use dendroid_core::scoring::score_pairs_with;
use dendroid_core::{Criterion, Dataset, QuadratureSpec, ScoredEdge, VariableSchema};

use crate::csv_file::{read_dataset, write_dataset};
use crate::error::Failure;
use crate::model_file::{model_to_json, read_model};
use crate::output::{
    decision_report, forest_dot, forest_json, scores_csv, scores_json, ScoringInfo,
};
use crate::parallel::score_all_pairs_parallel;
use crate::schema_file::read_schema;

#[derive(Debug, Parser)]
#[command(name = "dendroid", version, about = "Learn forest-structured models of mixed discrete/Gaussian data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Learn a forest from data, optionally fitting and saving the model.
    Learn(LearnArgs),
    /// Print the I_n / penalty / J_n table for every pair of variables.
    Score(ScoreArgs),
    /// Draw synthetic rows from a saved model.
    Sample(SampleArgs),
    /// Log-likelihood and description length of a saved model on data.
    Eval(EvalArgs),
    /// Compare the greedy forest with exhaustive search (N <= 8).
    #[command(hide = true)]
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CriterionArg {
    /// Maximum likelihood (Chow-Liu spanning tree).
    Ml,
    /// Minimum description length, d_n = ln n.
    Mdl,
    /// d_n = 2.
    Aic,
    /// d_n given by --dn.
    Custom,
}

impl CriterionArg {
    fn name(self) -> &'static str {
        match self {
            CriterionArg::Ml => "ml",
            CriterionArg::Mdl => "mdl",
            CriterionArg::Aic => "aic",
            CriterionArg::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Dot,
    Json,
    Both,
    Csv,
}

#[derive(Debug, Args)]
struct CriterionArgs {
    /// Edge weighting.
    #[arg(long, value_enum, default_value = "mdl")]
    criterion: CriterionArg,
    /// Penalty scale d_n (with --criterion custom).
    #[arg(long, allow_negative_numbers = true)]
    dn: Option<f64>,
}

impl CriterionArgs {
    fn resolve(&self) -> Result<Criterion, Failure> {
        match (self.criterion, self.dn) {
            (CriterionArg::Custom, Some(d)) => {
                Criterion::custom(d).map_err(|e| Failure::Usage(e.to_string()))
            }
            (CriterionArg::Custom, None) => Err(Failure::Usage("--criterion custom needs --dn".into())),
            (_, Some(_)) => Err(Failure::Usage("--dn is only valid with --criterion custom".into())),
            (CriterionArg::Ml, None) => Ok(Criterion::MaximumLikelihood),
            (CriterionArg::Mdl, None) => Ok(Criterion::Mdl),
            (CriterionArg::Aic, None) => Ok(Criterion::Aic),
        }
    }
}

#[derive(Debug, Args)]
struct ScoringArgs {
    #[command(flatten)]
    criterion: CriterionArgs,
    /// Gauss-Hermite order for mixed pairs (even, 8..=512).
    #[arg(long, default_value_t = QuadratureSpec::DEFAULT_ORDER)]
    quad_order: usize,
}

impl ScoringArgs {
    fn quadrature(&self) -> Result<QuadratureSpec, Failure> {
        QuadratureSpec::new(self.quad_order, QuadratureSpec::DEFAULT_TOLERANCE)
            .map_err(|e| Failure::Usage(e.to_string()))
    }
}

#[derive(Debug, Args)]
struct LearnArgs {
    /// CSV data with a header row.
    #[arg(long)]
    data: PathBuf,
    /// JSON schema.
    #[arg(long)]
    schema: PathBuf,
    #[command(flatten)]
    scoring: ScoringArgs,
    /// Forest artifact format.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Forest artifact path (with `both`, its extension is replaced by .json
    /// and .dot). Without it the artifact goes to stdout and the report to
    /// stderr.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also fit the model and write it here as JSON.
    #[arg(long)]
    model: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ScoreArgs {
    /// CSV data with a header row.
    #[arg(long, required_unless_present = "inject_mi")]
    data: Option<PathBuf>,
    /// JSON schema.
    #[arg(long)]
    schema: PathBuf,
    #[command(flatten)]
    scoring: ScoringArgs,
    /// Table format.
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Output path (stdout by default).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated I_n values in canonical pair order, replacing the
    /// estimates.
    #[arg(long, hide = true)]
    inject_mi: Option<String>,
}

#[derive(Debug, Args)]
struct SampleArgs {
    /// Model JSON.
    #[arg(long)]
    model: PathBuf,
    /// Number of rows.
    #[arg(long)]
    count: usize,
    /// Random seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path (stdout by default).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Model JSON.
    #[arg(long)]
    model: PathBuf,
    /// CSV data with a header row matching the model's variables.
    #[arg(long)]
    data: PathBuf,
    #[command(flatten)]
    criterion: CriterionArgs,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    schema: PathBuf,
    #[command(flatten)]
    scoring: ScoringArgs,
}

/// Parse `args` (including the program name), run the command and return the
/// process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().ansi().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                return 2;
            }
            let _ = write!(stdout, "{text}");
            return 0;
        }
    };
    let result = match cli.command {
        Command::Learn(a) => learn(&a, stdout, stderr),
        Command::Score(a) => score(&a, stdout),
        Command::Sample(a) => sample_cmd(&a, stdout),
        Command::Eval(a) => eval(&a, stdout),
        Command::Oracle(a) => oracle(&a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "dendroid: {f}");
            f.exit_code()
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::io(path, e))
}

fn emit(out: Option<&Path>, stdout: &mut dyn Write, contents: &str) -> Result<(), Failure> {
    match out {
        Some(path) => write_file(path, contents),
        None => stdout
            .write_all(contents.as_bytes())
            .map_err(|e| Failure::io(Path::new("<stdout>"), e)),
    }
}

fn load(data: &Path, schema: &Path) -> Result<Dataset, Failure> {
    let schema = read_schema(schema)?;
    read_dataset(data, &schema)
}

fn info(args: &CriterionArgs, criterion: Criterion, n: usize, quad: &QuadratureSpec) -> ScoringInfo {
    ScoringInfo {
        criterion: args.criterion.name().to_string(),
        d_n: crate::output::Real(criterion.penalty_scale(n)),
        n,
        quad_order: quad.order(),
    }
}

fn kruskal(criterion: Criterion, n_vars: usize, scored: &[ScoredEdge]) -> dendroid_core::Result<(&'static str, KruskalTrace)> {
    if criterion.is_penalized() {
        suzuki_trace(n_vars, scored).map(|t| ("suzuki", t))
    } else {
        chow_liu_trace(n_vars, scored).map(|t| ("chow-liu", t))
    }
}

fn learn(args: &LearnArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    let criterion = args.scoring.criterion.resolve()?;
    let quad = args.scoring.quadrature()?;
    if args.format == Format::Csv {
        return Err(Failure::Usage("learn writes `dot`, `json` or `both`".into()));
    }
    let ds = load(&args.data, &args.schema)?;
    let schema = ds.schema();
    let scored = score_all_pairs_parallel(&ds, criterion, &quad)
        .map_err(|e| Failure::runtime(&e, schema))?;
    let (algorithm, trace) =
        kruskal(criterion, ds.n_vars(), &scored).map_err(|e| Failure::runtime(&e, schema))?;

    let fitted = fit(&ds, &trace.forest);
    let dl = match &fitted {
        Ok(model) => Some(
            description_length(model, &ds, criterion).map_err(|e| Failure::runtime(&e, schema))?,
        ),
        Err(_) => None,
    };
    if let Some(path) = &args.model {
        let model = fitted.as_ref().map_err(|e| Failure::runtime(e, schema))?;
        write_file(path, &model_to_json(model))?;
    }

    let info = info(&args.scoring.criterion, criterion, ds.n_rows(), &quad);
    let json = forest_json(schema, &info, algorithm, &trace.forest, &trace.decisions, dl);
    let dot = forest_dot(schema, &trace.forest, &scored);
    match (&args.out, args.format) {
        (Some(path), Format::Both) => {
            write_file(&path.with_extension("json"), &json)?;
            write_file(&path.with_extension("dot"), &dot)?;
        }
        (out, Format::Dot) => emit(out.as_deref(), stdout, &dot)?,
        (out, Format::Json) => emit(out.as_deref(), stdout, &json)?,
        (None, _) => {
            emit(None, stdout, &json)?;
            emit(None, stdout, &dot)?;
        }
        (Some(_), Format::Csv) => unreachable!("rejected above"),
    }

    let mut report = format!(
        "{algorithm}: {} of {} candidate edges accepted (criterion {}, d_n = {:?}, n = {})\n",
        trace.forest.edges().len(),
        scored.len(),
        info.criterion,
        info.d_n.0,
        ds.n_rows()
    );
    report.push_str(&decision_report(schema, &trace.decisions));
    match (&fitted, dl) {
        (Ok(model), Some(dl)) => report.push_str(&format!(
            "description length: {dl:?} (k = {})\n",
            model.parameter_count()
        )),
        (Err(e), _) => report.push_str(&format!(
            "description length: unavailable ({})\n",
            crate::error::describe(e, schema)
        )),
        _ => {}
    }
    let sink: &mut dyn Write = if args.out.is_some() { stdout } else { stderr };
    sink.write_all(report.as_bytes())
        .map_err(|e| Failure::io(Path::new("<stdout>"), e))?;
    Ok(0)
}

fn parse_injected(text: &str, expected: usize) -> Result<Vec<f64>, Failure> {
    let values: Vec<f64> = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Failure::Usage(format!("--inject-mi: `{}` is not a number", s.trim())))
        })
        .collect::<Result<_, _>>()?;
    if values.len() != expected {
        return Err(Failure::Usage(format!(
            "--inject-mi needs {expected} values, got {}",
            values.len()
        )));
    }
    Ok(values)
}

fn score(args: &ScoreArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let criterion = args.scoring.criterion.resolve()?;
    let quad = args.scoring.quadrature()?;
    if matches!(args.format, Format::Dot | Format::Both) {
        return Err(Failure::Usage("score writes `csv` or `json`".into()));
    }
    let schema = read_schema(&args.schema)?;
    let ds = match &args.data {
        Some(path) => Some(read_dataset(path, &schema)?),
        None => None,
    };
    let (n, scored) = match (&args.inject_mi, &ds) {
        (Some(text), _) => {
            let n_vars = schema.len();
            let values = parse_injected(text, n_vars * n_vars.saturating_sub(1) / 2)?;
            let n = match &ds {
                Some(ds) => ds.n_rows(),
                None if criterion == Criterion::Mdl => {
                    return Err(Failure::Usage("--criterion mdl needs --data for n".into()));
                }
                None => 0,
            };
            let mut it = values.into_iter();
            let scored = score_pairs_with(schema.kinds(), criterion.penalty_scale(n), |_, _| {
                Ok(it.next().expect("one value per pair"))
            })
            .map_err(|e| Failure::runtime(&e, &schema))?;
            (n, scored)
        }
        (None, Some(ds)) => {
            let scored = score_all_pairs_parallel(ds, criterion, &quad)
                .map_err(|e| Failure::runtime(&e, &schema))?;
            (ds.n_rows(), scored)
        }
        (None, None) => unreachable!("clap requires --data without --inject-mi"),
    };
    let text = match args.format {
        Format::Json => scores_json(&schema, &info(&args.scoring.criterion, criterion, n, &quad), &scored),
        _ => scores_csv(&schema, &scored),
    };
    emit(args.out.as_deref(), stdout, &text)?;
    Ok(0)
}

fn sample_cmd(args: &SampleArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let model = read_model(&args.model)?;
    let ds = sample(&model, args.count, args.seed).map_err(|e| Failure::runtime(&e, model.schema()))?;
    let mut buf = Vec::new();
    write_dataset(&mut buf, &ds).expect("writing to memory");
    emit(
        args.out.as_deref(),
        stdout,
        std::str::from_utf8(&buf).expect("CSV is UTF-8"),
    )?;
    Ok(0)
}

fn eval(args: &EvalArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let criterion = args.criterion.resolve()?;
    let model = read_model(&args.model)?;
    let ds = read_dataset(&args.data, model.schema())?;
    let schema: &VariableSchema = model.schema();
    let ll = log_likelihood(&model, &ds).map_err(|e| Failure::runtime(&e, schema))?;
    let dl = description_length(&model, &ds, criterion).map_err(|e| Failure::runtime(&e, schema))?;
    let report = format!(
        "rows: {}\nlog_likelihood: {ll:?}\nparameters: {}\nd_n: {:?}\ndescription_length: {dl:?}\n",
        ds.n_rows(),
        model.parameter_count(),
        criterion.penalty_scale(ds.n_rows()),
    );
    emit(None, stdout, &report)?;
    Ok(0)
}

fn oracle(args: &OracleArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let criterion = args.scoring.criterion.resolve()?;
    let quad = args.scoring.quadrature()?;
    let ds = load(&args.data, &args.schema)?;
    let schema = ds.schema();
    if ds.n_vars() > MAX_ENUMERATION_VERTICES {
        return Err(Failure::Usage(format!(
            "exhaustive search handles at most {MAX_ENUMERATION_VERTICES} variables"
        )));
    }
    let scored = score_all_pairs_parallel(&ds, criterion, &quad)
        .map_err(|e| Failure::runtime(&e, schema))?;
    let (algorithm, trace) =
        kruskal(criterion, ds.n_vars(), &scored).map_err(|e| Failure::runtime(&e, schema))?;
    // The spanning-tree oracle ranks by score, which equals mi without penalty.
    let exhaustive = brute_force_best_forest(ds.n_vars(), &scored, !criterion.is_penalized())
        .map_err(|e| Failure::runtime(&e, schema))?;
    let agree = exhaustive == trace.forest;
    let _ = writeln!(stdout, "{algorithm}:   {:?}", trace.forest.edges());
    let _ = writeln!(stdout, "exhaustive: {:?}", exhaustive.edges());
    let _ = writeln!(stdout, "agree: {}", if agree { "yes" } else { "no" });
    Ok(if agree { 0 } else { 1 })
}
