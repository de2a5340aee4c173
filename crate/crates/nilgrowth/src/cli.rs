//! Command-line front end.
//!
//! Exit codes: 0 success, 1 other failure, 2 usage error (including
//! arguments outside an operation's domain), 3 budget exceeded, 4
//! structural or verification failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nilgrowth_core::gcdsum::LatticeBallSpec;
use nilgrowth_core::quasi::{detect_quasi_polynomial, rational_implies_polynomial_check};
use nilgrowth_core::GroupSpec;
use serde::Serialize;

use crate::ball::{self, central_growth, enumerate_ball, enumerate_ball_parallel, GeneratingSet};
use crate::conjugacy::{conjugacy_growth_bounds, conjugacy_growth_exact, OraclePartition};
use crate::error::{NilError, Result};
use crate::manifest::{manifest_path, RunManifest};
use crate::series::{read_table, select_asymptotic_model, SeriesTable, Table};
use crate::{embeddings, gcd, io, twisted, verify};

pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_STRUCTURAL: i32 = 4;

const COLUMNS_HELP: &str = "\
CSV columns (lines starting with '#' carry metadata, including the manifest file name):
  ball        n, sphere (elements of length n), ball (elements of length <= n),
              central (powers of c of length <= n)
  conj        n, value (conjugacy classes meeting the n-ball)
  conj bounds n, lower, value, upper (value is the exact count)
  gcdsum      n, sum (gcd sum over the ball), normalized (sum / n^2 log n in
              dimension 2, sum / n^dim above), method (divisor or direct)
  twisted     n, value (twisted classes), value_wider (same with conjugator
              radius + 2; brute mode only)
  extension   n, value (classes of the extension), value_wider, base (classes
              of the base group)
JSON reports: growth, embeddings, series, verify.
Exit codes: 0 ok, 1 failure, 2 usage, 3 budget exceeded, 4 structural or verification failure.";

#[derive(Debug, Parser)]
#[command(name = "nilgrowth", version, about = "Growth and conjugacy growth experiments for Z^s x H_D", after_help = COLUMNS_HELP)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Group spec: a JSON file {"s","r","delta"} or one of H1, H2, H3, ZxH1, HD2.
    #[arg(long, global = true, default_value = "H1")]
    pub spec: String,
    /// Output file; a manifest is written to <out>.manifest.json. Stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Element cap for ball enumeration.
    #[arg(long, global = true, env = "NILGROWTH_BUDGET", default_value_t = ball::DEFAULT_BUDGET)]
    pub budget: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ball and sphere sizes by breadth-first search.
    Ball {
        #[arg(long, default_value_t = 8)]
        radius: u32,
        /// Generating set JSON {"label", "gens": [{"z","ab","k"}, ..]}; standard when absent.
        #[arg(long)]
        gens: Option<PathBuf>,
        #[arg(long)]
        parallel: bool,
    },
    /// Growth exponent fit of ball sizes.
    Growth {
        #[arg(long, default_value_t = 25)]
        radius: u32,
        /// Fit window A:B.
        #[arg(long, default_value = "10:25")]
        window: String,
        #[arg(long)]
        gens: Option<PathBuf>,
    },
    /// Conjugacy growth.
    Conj {
        #[arg(long, default_value_t = 8)]
        radius: u32,
        #[arg(long, value_enum, default_value_t = ConjMode::Exact)]
        mode: ConjMode,
        #[arg(long)]
        gens: Option<PathBuf>,
    },
    /// gcd sums over lattice balls.
    Gcdsum {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// cube or l1.
        #[arg(long, default_value = "cube")]
        norm: String,
        /// One or more radii, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "100")]
        radius: Vec<u64>,
        /// Offset vector, comma separated; zero when absent.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        offset: Vec<i64>,
    },
    /// Twisted conjugacy growth.
    Twisted {
        /// Automorphism JSON {"M", "kappa"} or one of identity, neg, swap, twist.
        #[arg(long, default_value = "twist")]
        auto: String,
        #[arg(long, value_enum, default_value_t = TwistedMode::Brute)]
        mode: TwistedMode,
        #[arg(long, default_value_t = 6)]
        radius: u32,
        /// Conjugator radius for brute force; radius + 2 when absent.
        #[arg(long)]
        conj_radius: Option<u32>,
    },
    /// Conjugacy growth of H x| Z/order.
    Extension {
        #[arg(long, default_value = "swap")]
        auto: String,
        #[arg(long, default_value_t = 2)]
        order: u32,
        #[arg(long, default_value_t = 6)]
        radius: u32,
        #[arg(long)]
        conj_radius: Option<u32>,
    },
    /// Commensurability embeddings of H_D and their indices.
    Embeddings {
        /// Also compare conjugacy growth of the subgroup and H_D up to this radius.
        #[arg(long)]
        radius: Option<u32>,
    },
    /// Sequence analysis of a CSV produced by another subcommand.
    Series {
        #[command(subcommand)]
        action: SeriesAction,
    },
    /// Run the invariant suite; nonzero exit on any failure.
    Verify {
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum SeriesAction {
    /// Look for an eventually quasi-polynomial fit.
    DetectQp {
        #[arg(long = "in")]
        input: PathBuf,
        /// Column to read; `value` or the last column when absent.
        #[arg(long)]
        column: Option<String>,
        #[arg(long, default_value_t = 4)]
        max_period: usize,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
    },
    /// Choose between n^d and n^d log n on a window.
    Fit {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        column: Option<String>,
        /// Fit window A:B.
        #[arg(long)]
        window: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConjMode {
    Exact,
    Oracle,
    Bounds,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TwistedMode {
    Brute,
    Structural,
}

pub fn exit_code(e: &NilError) -> i32 {
    if e.is_resource() {
        EXIT_RESOURCE
    } else if e.is_structural() {
        EXIT_STRUCTURAL
    } else if matches!(e, NilError::Usage(_) | NilError::Core(nilgrowth_core::Error::Domain(_))) {
        EXIT_USAGE
    } else {
        EXIT_FAILURE
    }
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn parse_window(s: &str) -> Result<(u64, u64)> {
    let bad = || NilError::Usage(format!("window {s:?} must look like A:B"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let a = a.trim().parse().map_err(|_| bad())?;
    let b = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn execute(cli: &Cli) -> Result<()> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.common.threads)
        .build()
        .map_err(|e| NilError::Usage(format!("thread pool: {e}")))?;
    pool.install(|| dispatch(cli))
}

/// What a subcommand produced.
enum Output {
    Csv(Table),
    Json(serde_json::Value),
}

fn load_gens(spec: &GroupSpec, path: &Option<PathBuf>) -> Result<GeneratingSet> {
    match path {
        Some(p) => io::load_gens(spec, p),
        None => Ok(GeneratingSet::standard(spec)),
    }
}

fn to_json(v: impl Serialize) -> Result<serde_json::Value> {
    Ok(serde_json::to_value(v)?)
}

fn metadata(spec: &GroupSpec, gens: &str, kind: &str) -> Vec<(String, String)> {
    vec![
        ("group".into(), spec.to_string()),
        ("generating_set".into(), gens.into()),
        ("kind".into(), kind.into()),
    ]
}

fn dispatch(cli: &Cli) -> Result<()> {
    let started = Instant::now();
    let common = &cli.common;
    let budget = common.budget;
    let needs_spec = !matches!(cli.command, Command::Series { .. });
    let spec = if needs_spec { Some(io::load_spec(&common.spec)?) } else { None };
    let name = match &cli.command {
        Command::Ball { .. } => "ball",
        Command::Growth { .. } => "growth",
        Command::Conj { .. } => "conj",
        Command::Gcdsum { .. } => "gcdsum",
        Command::Twisted { .. } => "twisted",
        Command::Extension { .. } => "extension",
        Command::Embeddings { .. } => "embeddings",
        Command::Series { action: SeriesAction::DetectQp { .. } } => "series detect-qp",
        Command::Series { action: SeriesAction::Fit { .. } } => "series fit",
        Command::Verify { .. } => "verify",
    };
    let mut manifest = RunManifest::new(name, spec.as_ref(), budget);
    manifest.param("spec", &common.spec);
    let mut verify_failed = None;

    let output = match &cli.command {
        Command::Ball {
            radius,
            gens,
            parallel,
        } => {
            let spec = spec.as_ref().expect("spec loaded");
            let gens = load_gens(spec, gens)?;
            manifest.param("radius", radius).param("gens", gens.label()).param("parallel", parallel);
            let table = if *parallel {
                enumerate_ball_parallel(spec, &gens, *radius, budget)?
            } else {
                enumerate_ball(spec, &gens, *radius, budget)?
            };
            let sphere = table.sphere_sizes();
            let cumulative = table.cumulative();
            let central = central_growth(&table);
            Output::Csv(Table {
                comments: metadata(spec, gens.label(), "ball"),
                headers: ["n", "sphere", "ball", "central"].map(String::from).to_vec(),
                rows: (0..=*radius as usize)
                    .map(|n| {
                        vec![
                            n.to_string(),
                            sphere[n].to_string(),
                            cumulative[n].to_string(),
                            central[n].to_string(),
                        ]
                    })
                    .collect(),
            })
        }
        Command::Growth { radius, window, gens } => {
            let spec = spec.as_ref().expect("spec loaded");
            let gens = load_gens(spec, gens)?;
            let (a, b) = parse_window(window)?;
            manifest.param("radius", radius).param("window", window).param("gens", gens.label());
            let table = enumerate_ball_parallel(spec, &gens, *radius, budget)?;
            let values = table.cumulative();
            let slope = ball::growth_exponent_fit(&values, a as usize..=b as usize)?;
            Output::Json(serde_json::json!({
                "group": spec.to_string(),
                "generating_set": gens.label(),
                "ball": values,
                "window": [a, b],
                "slope": slope,
                "bass_guivarch_exponent": spec.bass_guivarch_exponent(),
            }))
        }
        Command::Conj { radius, mode, gens } => {
            let spec = spec.as_ref().expect("spec loaded");
            let gens = load_gens(spec, gens)?;
            manifest.param("radius", radius).param("mode", mode).param("gens", gens.label());
            let table = enumerate_ball_parallel(spec, &gens, *radius, budget)?;
            match mode {
                ConjMode::Exact => {
                    let values = conjugacy_growth_exact(spec, &table)?;
                    let series = SeriesTable::new(
                        spec.to_string(),
                        gens.label(),
                        "conjugacy",
                        values.into_iter().map(u128::from).collect(),
                    );
                    Output::Csv(series.to_table(None))
                }
                ConjMode::Oracle => {
                    let values = OraclePartition::new(spec, &gens, *radius, budget)?.growth();
                    let series = SeriesTable::new(
                        spec.to_string(),
                        gens.label(),
                        "conjugacy oracle",
                        values.into_iter().map(u128::from).collect(),
                    );
                    Output::Csv(series.to_table(None))
                }
                ConjMode::Bounds => {
                    if gens.label() != GeneratingSet::standard(spec).label() {
                        return Err(NilError::Usage("bounds hold for the standard generating set only".into()));
                    }
                    let exact = conjugacy_growth_exact(spec, &table)?;
                    let rows = conjugacy_growth_bounds(spec, *radius, &central_growth(&table))?;
                    Output::Csv(Table {
                        comments: metadata(spec, gens.label(), "conjugacy bounds"),
                        headers: ["n", "lower", "value", "upper"].map(String::from).to_vec(),
                        rows: rows
                            .iter()
                            .map(|b| {
                                vec![
                                    b.m.to_string(),
                                    b.lower.to_string(),
                                    exact[b.m as usize].to_string(),
                                    b.upper.to_string(),
                                ]
                            })
                            .collect(),
                    })
                }
            }
        }
        Command::Gcdsum {
            dim,
            norm,
            radius,
            offset,
        } => {
            let norm = gcd::parse_norm(norm)?;
            let offset = if offset.is_empty() { vec![0; *dim] } else { offset.clone() };
            if offset.len() != *dim {
                return Err(NilError::Usage(format!("offset needs {dim} entries, got {}", offset.len())));
            }
            manifest
                .param("dim", dim)
                .param("norm", gcd::norm_label(norm))
                .param("radius", radius)
                .param("offset", &offset);
            let mut rows = Vec::new();
            for &n in radius {
                let ball = LatticeBallSpec::centred(*dim, n, norm).with_offset(&offset);
                let (sum, method) = gcd::gcd_sum(&ball, budget as u128)?;
                let method = serde_json::to_value(method)?;
                rows.push(vec![
                    n.to_string(),
                    sum.to_string(),
                    format!("{:.9}", sum as f64 / gcd::leading_scale(*dim, n)),
                    method.as_str().unwrap_or_default().to_string(),
                ]);
            }
            Output::Csv(Table {
                comments: vec![
                    ("dim".into(), dim.to_string()),
                    ("norm".into(), gcd::norm_label(norm).into()),
                    ("offset".into(), format!("{offset:?}")),
                ],
                headers: ["n", "sum", "normalized", "method"].map(String::from).to_vec(),
                rows,
            })
        }
        Command::Twisted {
            auto,
            mode,
            radius,
            conj_radius,
        } => {
            let spec = spec.as_ref().expect("spec loaded");
            let f = io::load_auto(spec, auto)?;
            let gens = GeneratingSet::standard(spec);
            let conj_radius = conj_radius.unwrap_or(radius + 2);
            manifest
                .param("auto", io::AutoJson::from_automorphism(&f))
                .param("mode", mode)
                .param("radius", radius);
            let kind = format!("twisted conjugacy ({auto})");
            match mode {
                TwistedMode::Brute => {
                    manifest.param("conj_radius", conj_radius);
                    let report = twisted::twisted_growth_bruteforce(&gens, &f, *radius, conj_radius, budget)?;
                    if !report.stable {
                        eprintln!("warning: counts changed when the conjugator radius grew; raise --conj-radius");
                    }
                    let mut comments = metadata(spec, gens.label(), &kind);
                    comments.push(("stable".into(), report.stable.to_string()));
                    comments.push(("max_classes_per_point".into(), report.max_classes_per_point.to_string()));
                    Output::Csv(Table {
                        comments,
                        headers: ["n", "value", "value_wider"].map(String::from).to_vec(),
                        rows: (0..=*radius as usize)
                            .map(|n| {
                                vec![
                                    n.to_string(),
                                    report.counts[n].to_string(),
                                    report.counts_wider[n].to_string(),
                                ]
                            })
                            .collect(),
                    })
                }
                TwistedMode::Structural => {
                    let table = enumerate_ball_parallel(spec, &gens, *radius, budget)?;
                    let values = twisted::twisted_growth_structural(&f, &table)?;
                    let series =
                        SeriesTable::new(spec.to_string(), gens.label(), kind, values.into_iter().map(u128::from).collect());
                    Output::Csv(series.to_table(None))
                }
            }
        }
        Command::Extension {
            auto,
            order,
            radius,
            conj_radius,
        } => {
            let spec = spec.as_ref().expect("spec loaded");
            let f = io::load_auto(spec, auto)?;
            let gens = GeneratingSet::standard(spec);
            let conj_radius = conj_radius.unwrap_or(radius + 2);
            manifest
                .param("auto", io::AutoJson::from_automorphism(&f))
                .param("order", order)
                .param("radius", radius)
                .param("conj_radius", conj_radius);
            let report = twisted::extension_conjugacy_growth(&gens, &f, *order, *radius, conj_radius, budget)?;
            let table = enumerate_ball(spec, &gens, *radius, budget)?;
            let base = conjugacy_growth_exact(spec, &table)?;
            let mut comments = metadata(spec, "standard + t", &format!("extension by Z/{order} ({auto})"));
            comments.push(("stable".into(), report.stable.to_string()));
            Output::Csv(Table {
                comments,
                headers: ["n", "value", "value_wider", "base"].map(String::from).to_vec(),
                rows: (0..=*radius as usize)
                    .map(|n| {
                        vec![
                            n.to_string(),
                            report.counts[n].to_string(),
                            report.counts_wider[n].to_string(),
                            base[n].to_string(),
                        ]
                    })
                    .collect(),
            })
        }
        Command::Embeddings { radius } => {
            let spec = spec.as_ref().expect("spec loaded");
            manifest.param("radius", radius);
            let report = embeddings::hd_embeddings(spec, budget)?;
            if !report.passed() {
                verify_failed = Some(format!("embedding checks failed: {report:?}"));
            }
            let growth = match radius {
                Some(n) => Some(embeddings::subgroup_growth_report(spec, *n, budget)?),
                None => None,
            };
            Output::Json(serde_json::json!({ "embeddings": to_json(&report)?, "growth": to_json(&growth)? }))
        }
        Command::Series { action } => match action {
            SeriesAction::DetectQp {
                input,
                column,
                max_period,
                max_degree,
            } => {
                manifest
                    .param("in", input)
                    .param("column", column)
                    .param("max_period", max_period)
                    .param("max_degree", max_degree);
                let values: Vec<i128> = read_input(input)?.sequence(column.as_deref())?;
                let nondecreasing = values.windows(2).all(|w| w[0] <= w[1]);
                let qp = detect_quasi_polynomial(&values, *max_period, *max_degree)?;
                let report = match qp {
                    None => serde_json::json!({ "found": false, "length": values.len() }),
                    Some(qp) => {
                        let verdict = rational_implies_polynomial_check(&qp, nondecreasing)?;
                        serde_json::json!({
                            "found": true,
                            "length": values.len(),
                            "period": qp.period,
                            "threshold": qp.threshold,
                            "polys": qp.polys.iter()
                                .map(|p| p.iter().map(|c| c.to_string()).collect::<Vec<_>>())
                                .collect::<Vec<_>>(),
                            "degree": verdict.degree,
                            "uniform_degree": verdict.uniform,
                            "nondecreasing": nondecreasing,
                        })
                    }
                };
                Output::Json(report)
            }
            SeriesAction::Fit { input, column, window } => {
                let w = parse_window(window)?;
                manifest.param("in", input).param("column", column).param("window", window);
                let values: Vec<f64> = read_input(input)?.sequence(column.as_deref())?;
                Output::Json(to_json(select_asymptotic_model(&values, w)?)?)
            }
        },
        Command::Verify { quick } => {
            let spec = spec.as_ref().expect("spec loaded");
            manifest.param("quick", quick);
            let report = verify::run_suite(spec, *quick, budget)?;
            for c in &report.checks {
                let mark = if c.passed { "ok  " } else { "FAIL" };
                eprintln!("{mark} {}: {}", c.name, c.detail);
            }
            if !report.passed() {
                let names: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
                verify_failed = Some(names.join(", "));
            }
            Output::Json(to_json(&report)?)
        }
    };

    manifest.wall_time_secs = started.elapsed().as_secs_f64();
    emit(output, common.out.as_deref(), &mut manifest)?;
    match verify_failed {
        Some(msg) => Err(NilError::Verification(msg)),
        None => Ok(()),
    }
}

fn read_input(path: &Path) -> Result<Table> {
    let file = std::fs::File::open(path).map_err(|e| NilError::io(path, e))?;
    read_table(std::io::BufReader::new(file))
}

fn emit(output: Output, out: Option<&Path>, manifest: &mut RunManifest) -> Result<()> {
    let Some(path) = out else {
        let stdout = std::io::stdout();
        return match output {
            Output::Csv(table) => table.write_csv(stdout.lock()),
            Output::Json(v) => {
                let mut lock = stdout.lock();
                serde_json::to_writer_pretty(&mut lock, &v)?;
                writeln!(lock).map_err(|e| NilError::io("<stdout>", e))
            }
        };
    };
    let mpath = manifest_path(path);
    let mname = mpath
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut buf = Vec::new();
    match output {
        Output::Csv(mut table) => {
            table.comments.insert(0, ("manifest".into(), mname));
            table.write_csv(&mut buf)?;
        }
        Output::Json(v) => {
            let wrapped = serde_json::json!({ "manifest": mname, "report": v });
            serde_json::to_writer_pretty(&mut buf, &wrapped)?;
            buf.push(b'\n');
        }
    }
    std::fs::write(path, buf).map_err(|e| NilError::io(path, e))?;
    manifest.outputs = vec![path.display().to_string()];
    manifest.write(&mpath)
}
