//! `fuzzygeno` command line.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 data error,
//! 3 model file or report write error.
//!
//! Every option may also come from a flat `key = value` file given with
//! `--config`; keys are the long flag names without dashes (`pop = 40`,
//! `pair-threshold = 5`). Command-line flags win.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::classifier::accuracy;
use crate::error::Error;
use crate::evolution::GAConfig;
use crate::grouping::{parse_groups_file, ungrouped, write_groups_file, GroupSpec, GroupingConfig};
use crate::imaging::{load_dataset, normalize, pgm, DatasetFormat, LabeledSet, LoaderOptions, FRAME};
use crate::partitions::{Chromosome, CutBounds, FuzzyParams, PartitionPlan};
use crate::pipeline::{self, class_overlaps, evaluate, load_model, save_model, TwoPassClassifier, TwoPassModel};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_MODEL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "fuzzygeno", version, about = "Two-pass fuzzy-genetic pattern classifier")]
pub struct Cli {
    /// Flat `key = value` file supplying defaults for any option
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Train the coarse and second-pass classifiers and write a model file
    Train(Box<TrainArgs>),
    /// Report pass-1 and pass-2 accuracy and confusion matrices on a dataset
    Evaluate(EvalArgs),
    /// Classify a single PGM image
    Classify(ClassifyArgs),
    /// Dump overlap images or partitions
    #[command(subcommand)]
    Inspect(InspectCommand),
}

#[derive(Debug, Args, Default)]
struct DataArgs {
    /// Dataset root (`<root>/<label>/*.pgm`, or the directory holding IDX files)
    #[arg(long)]
    data: Option<PathBuf>,
    /// IDX image file (relative to --data); selects IDX mode with --idx-labels
    #[arg(long)]
    idx_images: Option<PathBuf>,
    #[arg(long)]
    idx_labels: Option<PathBuf>,
    /// Treat dark pixels as ink
    #[arg(long)]
    invert: bool,
}

#[derive(Debug, Args)]
struct TrainArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Output model file
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Population size
    #[arg(long)]
    pop: Option<usize>,
    #[arg(long)]
    generations: Option<usize>,
    /// Generations without improvement before stopping (0 = never)
    #[arg(long)]
    stall: Option<usize>,
    #[arg(long)]
    tournament: Option<usize>,
    #[arg(long)]
    crossover: Option<f64>,
    #[arg(long)]
    mutation: Option<f64>,
    #[arg(long)]
    elites: Option<usize>,
    #[arg(long)]
    min_cuts: Option<usize>,
    #[arg(long)]
    max_cuts: Option<usize>,
    /// Fuzzy ramp half-width in pixels
    #[arg(long)]
    ramp: Option<usize>,
    /// Symmetric confusion count linking two classes into a group
    #[arg(long)]
    pair_threshold: Option<u64>,
    /// Overlap disagreement that marks a pixel as confused
    #[arg(long)]
    region_threshold: Option<f64>,
    /// Fixed groups, one `members=a,b; region=t,l,b,r` per line
    #[arg(long)]
    groups_file: Option<PathBuf>,
    /// Directory for confusion matrices, traces and the summary
    /// (defaults to the model file's directory)
    #[arg(long)]
    report_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long)]
    model: Option<PathBuf>,
    /// Also write pass1_confusion.tsv and pass2_confusion.tsv here
    #[arg(long)]
    report_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    #[arg(long)]
    model: Option<PathBuf>,
    /// PGM image to classify
    #[arg(long)]
    image: PathBuf,
    #[arg(long)]
    invert: bool,
    /// Also print the per-cell features
    #[arg(long)]
    trace: bool,
}

#[derive(Debug, Subcommand)]
enum InspectCommand {
    /// Write each class's overlap image as PGM
    Overlaps {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        report_dir: Option<PathBuf>,
    },
    /// Print partitions in text form and write PGMs with the cut lines drawn
    Partitions {
        #[arg(long)]
        model: Option<PathBuf>,
        /// Inspect a literal chromosome (`h0,h1,.. | v0,v1,..[ @ t,l,b,r]`)
        #[arg(long)]
        chromosome: Option<String>,
        #[arg(long)]
        report_dir: Option<PathBuf>,
    },
}

/// Error carrying the process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::new(EXIT_USAGE, msg)
}

fn data_err(e: Error) -> Failure {
    match e {
        Error::InvalidConfig(_) => Failure::new(EXIT_USAGE, e.to_string()),
        _ => Failure::new(EXIT_DATA, e.to_string()),
    }
}

fn model_err(e: Error) -> Failure {
    Failure::new(EXIT_MODEL, e.to_string())
}

fn write_file(path: &Path, contents: &[u8]) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| Failure::new(EXIT_MODEL, format!("cannot write {}: {e}", path.display())))
}

fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| Failure::new(EXIT_MODEL, format!("cannot create {}: {e}", dir.display())))
}

/// Flat `key = value` settings; `#` starts a comment.
#[derive(Debug, Default)]
struct ConfigFile(BTreeMap<String, String>);

impl ConfigFile {
    fn load(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else { return Ok(Self::default()) };
        let text =
            fs::read_to_string(path).map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut map = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| usage(format!("{}:{}: expected key = value", path.display(), i + 1)))?;
            map.insert(k.trim().replace('_', "-"), v.trim().to_string());
        }
        Ok(Self(map))
    }

    fn get<T: FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        self.0
            .get(key)
            .map(|v| v.parse::<T>().map_err(|_| usage(format!("config: cannot parse {key} = {v:?}"))))
            .transpose()
    }

    fn flag(&self, key: &str) -> CliResult<bool> {
        Ok(self.get::<bool>(key)?.unwrap_or(false))
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.0.get(key).map(PathBuf::from)
    }
}

fn pick<T: FromStr>(flag: Option<T>, cfg: &ConfigFile, key: &str) -> CliResult<Option<T>> {
    match flag {
        Some(v) => Ok(Some(v)),
        None => cfg.get(key),
    }
}

fn load_data(args: &DataArgs, cfg: &ConfigFile) -> CliResult<LabeledSet> {
    let root = args.data.clone().or_else(|| cfg.path("data")).ok_or_else(|| usage("--data is required"))?;
    let images = args.idx_images.clone().or_else(|| cfg.path("idx-images"));
    let labels = args.idx_labels.clone().or_else(|| cfg.path("idx-labels"));
    let format = match (images, labels) {
        (Some(images), Some(labels)) => DatasetFormat::Idx { images, labels },
        (None, None) => DatasetFormat::PgmTree,
        _ => return Err(usage("--idx-images and --idx-labels must be given together")),
    };
    let invert = args.invert || cfg.flag("invert")?;
    load_dataset(&root, &LoaderOptions { format, invert }).map_err(data_err)
}

fn model_path(flag: &Option<PathBuf>, cfg: &ConfigFile) -> CliResult<PathBuf> {
    flag.clone().or_else(|| cfg.path("model")).ok_or_else(|| usage("--model is required"))
}

fn fmt_labels(labels: &[crate::Label]) -> String {
    labels.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",")
}

fn accuracy_lines(coarse: f64, two_pass: f64) -> String {
    format!("coarse_accuracy\t{coarse}\ntwo_pass_accuracy\t{two_pass}\n")
}

fn cmd_train(args: TrainArgs, cfg: &ConfigFile, out: &mut dyn Write) -> CliResult<()> {
    let model_out = args.out.clone().or_else(|| cfg.path("out")).ok_or_else(|| usage("--out is required"))?;
    let d = GAConfig::default();
    let ga = GAConfig {
        population_size: pick(args.pop, cfg, "pop")?.unwrap_or(d.population_size),
        max_generations: pick(args.generations, cfg, "generations")?.unwrap_or(d.max_generations),
        stall_generations: pick(args.stall, cfg, "stall")?.unwrap_or(d.stall_generations),
        tournament_size: pick(args.tournament, cfg, "tournament")?.unwrap_or(d.tournament_size),
        crossover_prob: pick(args.crossover, cfg, "crossover")?.unwrap_or(d.crossover_prob),
        mutation_prob: pick(args.mutation, cfg, "mutation")?.unwrap_or(d.mutation_prob),
        elite_count: pick(args.elites, cfg, "elites")?.unwrap_or(d.elite_count),
        cut_bounds: CutBounds {
            min_cuts: pick(args.min_cuts, cfg, "min-cuts")?.unwrap_or(d.cut_bounds.min_cuts),
            max_cuts: pick(args.max_cuts, cfg, "max-cuts")?.unwrap_or(d.cut_bounds.max_cuts),
        },
        seed: pick(args.seed, cfg, "seed")?.unwrap_or(d.seed),
    };
    ga.validate().map_err(|e| usage(e.to_string()))?;
    let fp = FuzzyParams { ramp: pick(args.ramp, cfg, "ramp")?.unwrap_or(FuzzyParams::default().ramp) };
    let gd = GroupingConfig::default();
    let gcfg = GroupingConfig {
        pair_threshold: pick(args.pair_threshold, cfg, "pair-threshold")?.unwrap_or(gd.pair_threshold),
        region_threshold: pick(args.region_threshold, cfg, "region-threshold")?.unwrap_or(gd.region_threshold),
        region_overrides: BTreeMap::new(),
    };
    gcfg.validate().map_err(|e| usage(e.to_string()))?;

    let fixed: Option<Vec<GroupSpec>> = match args.groups_file.clone().or_else(|| cfg.path("groups-file")) {
        Some(p) => {
            let text = fs::read_to_string(&p)
                .map_err(|e| Failure::new(EXIT_DATA, format!("cannot read {}: {e}", p.display())))?;
            Some(parse_groups_file(&text).map_err(data_err)?)
        }
        None => None,
    };

    let data = load_data(&args.data, cfg)?;
    let run = pipeline::train(&data, &gcfg, &ga, fp, fixed.as_deref()).map_err(data_err)?;
    let report = evaluate(&data, &run.model).map_err(data_err)?;

    if let Some(parent) = model_out.parent().filter(|p| !p.as_os_str().is_empty()) {
        ensure_dir(parent)?;
    }
    save_model(&run.model, &model_out).map_err(model_err)?;

    let report_dir = args
        .report_dir
        .clone()
        .or_else(|| cfg.path("report-dir"))
        .unwrap_or_else(|| model_out.parent().map(Path::to_path_buf).unwrap_or_default());
    let report_dir = if report_dir.as_os_str().is_empty() { PathBuf::from(".") } else { report_dir };
    ensure_dir(&report_dir)?;
    write_file(&report_dir.join("pass1_confusion.tsv"), report.coarse.to_tsv().as_bytes())?;
    write_file(&report_dir.join("pass2_confusion.tsv"), report.two_pass.to_tsv().as_bytes())?;
    write_file(&report_dir.join("coarse_trace.tsv"), run.coarse_trace.to_tsv().as_bytes())?;
    let specs: Vec<GroupSpec> = run.model.groups.iter().map(|g| g.spec.clone()).collect();
    write_file(&report_dir.join("groups.txt"), write_groups_file(&specs).as_bytes())?;
    for (g, trace) in run.model.groups.iter().zip(&run.group_traces) {
        let name =
            format!("group_{}_trace.tsv", g.spec.members.iter().map(|l| l.to_string()).collect::<Vec<_>>().join("-"));
        write_file(&report_dir.join(name), trace.to_tsv().as_bytes())?;
    }

    let mut summary = accuracy_lines(report.coarse_accuracy, report.two_pass_accuracy);
    writeln!(summary, "coarse_chromosome\t{}", run.model.coarse.chromosome).unwrap();
    for g in &run.model.groups {
        writeln!(
            summary,
            "group\t{}\tregion={}\trate={}\tchromosome={}",
            fmt_labels(&g.spec.members),
            g.spec.region,
            g.group_rate,
            g.chromosome()
        )
        .unwrap();
    }
    let member_sets: Vec<Vec<crate::Label>> = run.model.groups.iter().map(|g| g.spec.members.clone()).collect();
    writeln!(summary, "ungrouped\t{}", fmt_labels(&ungrouped(&run.model.classes(), &member_sets))).unwrap();
    write_file(&report_dir.join("summary.txt"), summary.as_bytes())?;
    out.write_all(summary.as_bytes()).ok();
    Ok(())
}

fn cmd_evaluate(args: EvalArgs, cfg: &ConfigFile, out: &mut dyn Write) -> CliResult<()> {
    let model = load_model(&model_path(&args.model, cfg)?).map_err(model_err)?;
    let data = load_data(&args.data, cfg)?;
    let report = evaluate(&data, &model).map_err(data_err)?;
    let mut text = accuracy_lines(report.coarse_accuracy, report.two_pass_accuracy);
    for g in &report.group_rates {
        let rate = g.rate.map_or("-".to_string(), |r| r.to_string());
        writeln!(text, "group\t{}\trate={rate}", fmt_labels(&g.members)).unwrap();
    }
    text.push_str("\npass1_confusion\n");
    text.push_str(&report.coarse.to_tsv());
    text.push_str("\npass2_confusion\n");
    text.push_str(&report.two_pass.to_tsv());
    out.write_all(text.as_bytes()).ok();
    if let Some(dir) = args.report_dir.clone().or_else(|| cfg.path("report-dir")) {
        ensure_dir(&dir)?;
        write_file(&dir.join("pass1_confusion.tsv"), report.coarse.to_tsv().as_bytes())?;
        write_file(&dir.join("pass2_confusion.tsv"), report.two_pass.to_tsv().as_bytes())?;
    }
    debug_assert_eq!(accuracy(&report.coarse).ok(), Some(report.coarse_accuracy));
    Ok(())
}

fn fmt_scores(scores: &BTreeMap<crate::Label, f64>) -> String {
    scores.iter().map(|(l, s)| format!("{l}:{s}")).collect::<Vec<_>>().join(" ")
}

fn fmt_features(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn cmd_classify(args: ClassifyArgs, cfg: &ConfigFile, out: &mut dyn Write) -> CliResult<()> {
    let model = load_model(&model_path(&args.model, cfg)?).map_err(model_err)?;
    let raw = pgm::read(&args.image).map_err(data_err)?;
    let img = normalize(&raw, args.invert || cfg.flag("invert")?).map_err(data_err)?;
    let clf = TwoPassClassifier::new(&model).map_err(model_err)?;
    let t = clf.classify(&img).map_err(data_err)?;

    let mut text = String::new();
    writeln!(text, "final\t{}", t.final_prediction.label).unwrap();
    writeln!(text, "coarse\t{}", t.coarse_prediction.label).unwrap();
    writeln!(text, "group\t{}", t.group_used.as_deref().map_or("-".to_string(), fmt_labels)).unwrap();
    writeln!(text, "coarse_scores\t{}", fmt_scores(&t.coarse_prediction.scores)).unwrap();
    if t.group_used.is_some() {
        writeln!(text, "group_scores\t{}", fmt_scores(&t.final_prediction.scores)).unwrap();
    }
    if args.trace || cfg.flag("trace")? {
        let plan = PartitionPlan::new(&model.coarse.chromosome, model.fuzzy_params).map_err(model_err)?;
        writeln!(text, "coarse_features\t{}", fmt_features(plan.extract(&img).values())).unwrap();
        if let Some(members) = &t.group_used {
            let g = model.groups.iter().find(|g| &g.spec.members == members).expect("routed group exists");
            let plan = PartitionPlan::new(g.chromosome(), model.fuzzy_params).map_err(model_err)?;
            writeln!(text, "group_features\t{}", fmt_features(plan.extract(&img).values())).unwrap();
        }
    }
    out.write_all(text.as_bytes()).ok();
    Ok(())
}

/// 32×32 raster with every cut row and column drawn at 255 inside the
/// chromosome's region.
pub fn partition_raster(ch: &Chromosome) -> Vec<u8> {
    let mut px = vec![0u8; FRAME * FRAME];
    let r = ch.region;
    for &row in &ch.h_cuts {
        for c in r.left()..=r.right() {
            px[row * FRAME + c] = 255;
        }
    }
    for &col in &ch.v_cuts {
        for row in r.top()..=r.bottom() {
            px[row * FRAME + col] = 255;
        }
    }
    px
}

fn cmd_inspect(cmd: InspectCommand, cfg: &ConfigFile, out: &mut dyn Write) -> CliResult<()> {
    match cmd {
        InspectCommand::Overlaps { data, report_dir } => {
            let data = load_data(&data, cfg)?;
            let dir = report_dir.or_else(|| cfg.path("report-dir")).unwrap_or_else(|| PathBuf::from("."));
            ensure_dir(&dir)?;
            for o in class_overlaps(&data).map_err(data_err)? {
                let path = dir.join(format!("overlap_{}.pgm", o.class_id));
                pgm::write(&path, FRAME, FRAME, &o.image.to_bytes()).map_err(model_err)?;
                writeln!(out, "{}\t{}\t{}", o.class_id, o.sample_count, path.display()).ok();
            }
            Ok(())
        }
        InspectCommand::Partitions { model, chromosome, report_dir } => {
            let mut items: Vec<(String, Chromosome)> = Vec::new();
            match (chromosome, model.or_else(|| cfg.path("model"))) {
                (Some(text), _) => {
                    let ch: Chromosome = text.parse().map_err(data_err)?;
                    ch.ensure_valid(CutBounds::ANY).map_err(data_err)?;
                    items.push(("chromosome".into(), ch));
                }
                (None, Some(path)) => {
                    let m: TwoPassModel = load_model(&path).map_err(model_err)?;
                    items.push(("coarse".into(), m.coarse.chromosome.clone()));
                    for g in &m.groups {
                        let name = format!(
                            "group_{}",
                            g.spec.members.iter().map(|l| l.to_string()).collect::<Vec<_>>().join("-")
                        );
                        items.push((name, g.chromosome().clone()));
                    }
                }
                (None, None) => return Err(usage("inspect partitions needs --model or --chromosome")),
            }
            let dir = report_dir.or_else(|| cfg.path("report-dir")).unwrap_or_else(|| PathBuf::from("."));
            ensure_dir(&dir)?;
            let single = items.len() == 1 && items[0].0 == "chromosome";
            for (name, ch) in &items {
                let path = dir.join(format!("partitions_{name}.pgm"));
                pgm::write(&path, FRAME, FRAME, &partition_raster(ch)).map_err(model_err)?;
                if single {
                    writeln!(out, "{ch}").ok();
                } else {
                    writeln!(out, "{name}\t{ch}").ok();
                }
            }
            Ok(())
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                out.write_all(rendered.as_bytes()).ok();
            } else {
                err.write_all(rendered.as_bytes()).ok();
            }
            return code;
        }
    };
    let result = ConfigFile::load(cli.config.as_deref()).and_then(|cfg| match cli.command {
        Command::Train(a) => cmd_train(*a, &cfg, out),
        Command::Evaluate(a) => cmd_evaluate(a, &cfg, out),
        Command::Classify(a) => cmd_classify(a, &cfg, out),
        Command::Inspect(c) => cmd_inspect(c, &cfg, out),
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            writeln!(err, "error: {}", f.message).ok();
            f.code
        }
    }
}
