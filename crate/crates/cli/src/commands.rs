//! One function per subcommand. Each writes its files under the configured
//! output directory and returns a short summary for the terminal.

use std::fs;
use std::path::{Path, PathBuf};

use anomaly_core::data::{
    generate_synthetic, load_csv, minmax_normalize, stratified_split, write_csv, ColumnRole,
    Dataset, NormalizationParams, Schema,
};
use anomaly_core::eval::{confusion, fmt_percent, test_error, ConfusionMatrix, RocCurve};
use anomaly_core::ga::{compare, init_population, train_and_score, TrainingData};
use anomaly_core::labeling::{label_dataset, label_supervised, LabelingReport, SupervisedConfig};
use anomaly_core::mlp::{Mlp, Topology};
use anomaly_core::report;
use anomaly_core::{AnomalyLabel, Execution};
use anyhow::{anyhow, bail, Context, Result};

use crate::config::RunConfig;

/// Writes `content` to `dir/name`, creating parent directories.
fn write_out(dir: &Path, name: &str, content: &str) -> Result<()> {
    let path = dir.join(name);
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)
            .with_context(|| format!("creating directory {}", parent.display()))?;
    }
    fs::write(&path, content).with_context(|| format!("writing {}", path.display()))
}

fn input_path(cfg: &RunConfig, input: Option<&Path>) -> Result<PathBuf> {
    input
        .map(Path::to_path_buf)
        .or_else(|| cfg.data.input.clone())
        .ok_or_else(|| anyhow!("no input file: pass one or set data.input in the config"))
}

fn schema(cfg: &RunConfig) -> Schema {
    cfg.data.ignore.iter().fold(Schema::by_header(), |s, c| {
        s.with(c.clone(), ColumnRole::Ignore)
    })
}

fn load_input(cfg: &RunConfig, path: &Path) -> Result<Dataset> {
    load_csv(path, &schema(cfg)).with_context(|| format!("loading {}", path.display()))
}

fn dataset_name(path: &Path) -> String {
    path.file_stem()
        .map_or_else(|| "data".into(), |s| s.to_string_lossy().into_owned())
}

fn label_names() -> Vec<String> {
    AnomalyLabel::ALL
        .iter()
        .map(|l| l.token().to_string())
        .collect()
}

fn require_labels(ds: &Dataset, path: &Path) -> Result<Vec<usize>> {
    let labels = ds.labels().ok_or_else(|| {
        anyhow!(
            "loading: {} has no anomaly label for every sample; run `label` first",
            path.display()
        )
    })?;
    Ok(labels.into_iter().map(AnomalyLabel::index).collect())
}

pub fn cmd_synth(cfg: &RunConfig) -> Result<String> {
    let ds = generate_synthetic(&cfg.synth.spec(), cfg.seed).context("generating data")?;
    let path = cfg.out.join("synthetic.csv");
    fs::create_dir_all(&cfg.out)
        .with_context(|| format!("writing outputs: creating {}", cfg.out.display()))?;
    write_csv(&ds, &path).context("writing outputs")?;
    Ok(format!(
        "n={} d={} -> {}",
        ds.len(),
        ds.dim(),
        path.display()
    ))
}

fn feature_indices(ds: &Dataset, names: &[String]) -> Result<Vec<usize>> {
    names
        .iter()
        .map(|n| {
            ds.feature_names()
                .iter()
                .position(|f| f == n)
                .ok_or_else(|| anyhow!("unknown feature column '{n}'"))
        })
        .collect()
}

pub fn cmd_label(cfg: &RunConfig, input: Option<&Path>, relabel: bool) -> Result<String> {
    let path = input_path(cfg, input)?;
    let ds = load_input(cfg, &path)?;
    if ds.any_labels() && !relabel {
        bail!(
            "{} already has anomaly labels; pass --relabel to replace them",
            path.display()
        );
    }
    let name = dataset_name(&path);
    let mut text = String::new();
    let mut csv = format!("{}\n", LabelingReport::CSV_HEADER);

    let labeled = if ds.has_classes() {
        let scfg = SupervisedConfig {
            retained: feature_indices(&ds, &cfg.data.retained).context("labeling")?,
            discarded: feature_indices(&ds, &cfg.data.discarded).context("labeling")?,
            labeling: cfg.labeling_config(),
            per_class: cfg.class_labeling()?,
        };
        let sup = label_supervised(&ds, &scfg).context("labeling")?;
        for (class, rep) in &sup.reports {
            let sub = format!("{name}_class{class}");
            text.push_str(&format!("{sub}\n{}\n", rep.to_text()));
            csv.push_str(&rep.csv_row(&sub));
            csv.push('\n');
        }
        sup.dataset
    } else {
        let lab = label_dataset(&ds, &cfg.labeling_config()).context("labeling")?;
        text.push_str(&format!("{name}\n{}", lab.report.to_text()));
        csv.push_str(&lab.report.csv_row(&name));
        csv.push('\n');
        lab.dataset
    };

    fs::create_dir_all(&cfg.out)
        .with_context(|| format!("writing outputs: creating {}", cfg.out.display()))?;
    write_csv(&labeled, cfg.out.join("labeled.csv")).context("writing outputs")?;
    write_out(&cfg.out, "report.txt", &text).context("writing outputs")?;
    write_out(&cfg.out, "report.csv", &csv).context("writing outputs")?;

    let labels = labeled.labels().unwrap_or_default();
    let counts: Vec<String> = AnomalyLabel::ALL
        .iter()
        .map(|l| format!("{l} {}", labels.iter().filter(|x| *x == l).count()))
        .collect();
    Ok(format!(
        "labeled {} samples: {}",
        labeled.len(),
        counts.join(", ")
    ))
}

/// Labeled input, normalized and split, ready for training.
struct Prepared {
    data: TrainingData,
    normalization: NormalizationParams,
}

fn prepare(cfg: &RunConfig, input: Option<&Path>) -> Result<Prepared> {
    let path = input_path(cfg, input)?;
    let ds = load_input(cfg, &path)?;
    require_labels(&ds, &path)?;
    let (normalized, normalization) = minmax_normalize(&ds).context("normalization")?;
    let split =
        stratified_split(&normalized, &cfg.split_ratios()?, cfg.seed).context("splitting")?;
    let topology = Topology::new(ds.dim(), cfg.network.hidden, AnomalyLabel::COUNT)?;
    let data = TrainingData::from_labeled_split(topology, &split).context("splitting")?;
    Ok(Prepared {
        data,
        normalization,
    })
}

fn write_confusion(dir: &Path, prefix: &str, m: &ConfusionMatrix, title: &str) -> Result<()> {
    write_out(dir, &format!("{prefix}confusion.txt"), &m.to_text(title))?;
    write_out(dir, &format!("{prefix}confusion.csv"), &m.to_csv())?;
    write_out(
        dir,
        &format!("{prefix}metrics.csv"),
        &report::metrics_csv(m),
    )
}

/// Per-class ROC CSVs for each model plus one SVG per class overlaying them.
fn write_rocs(
    dir: &Path,
    models: &[(&str, &[Vec<f64>])],
    targets: &[usize],
    names: &[String],
) -> Result<()> {
    for (class, cname) in names.iter().enumerate() {
        let mut curves: Vec<(&str, RocCurve)> = Vec::new();
        for (model, outputs) in models {
            if let Some(c) = report::class_roc(outputs, targets, class)? {
                write_out(dir, &format!("roc/{cname}_{model}.csv"), &c.to_csv())?;
                curves.push((model, c));
            }
        }
        if !curves.is_empty() {
            let refs: Vec<(&str, &RocCurve)> = curves.iter().map(|(m, c)| (*m, c)).collect();
            let svg = report::roc_svg(&format!("ROC, class {cname} vs rest"), &refs);
            write_out(dir, &format!("roc/{cname}.svg"), &svg)?;
        }
    }
    Ok(())
}

fn history_csv(history: &[anomaly_core::mlp::EpochRecord]) -> String {
    let mut s = String::from("epoch,train_mse,validation_mse\n");
    for r in history {
        let v = r
            .validation_mse
            .map_or_else(String::new, |v| format!("{v:?}"));
        s.push_str(&format!("{},{:?},{v}\n", r.epoch, r.train_mse));
    }
    s
}

/// Trains one network from the same initial weights the conventional network
/// of `compare` uses.
pub fn cmd_train(cfg: &RunConfig, input: Option<&Path>) -> Result<String> {
    let p = prepare(cfg, input)?;
    let start = init_population(&cfg.ga_config(), &p.data.topology)
        .swap_remove(0)
        .genome;
    let (trained, m) =
        train_and_score(&start, &p.data, &cfg.training_config()).context("training")?;
    let out = &cfg.out;
    (|| -> Result<()> {
        write_out(out, "model.txt", &trained.model.to_text())?;
        write_out(out, "normalization.txt", &p.normalization.to_text())?;
        write_out(out, "history.csv", &history_csv(&trained.history))?;
        write_confusion(out, "", &m, "Test confusion matrix")
    })()
    .context("writing outputs")?;
    Ok(format!(
        "stopped: {} after {} epochs; test error {}",
        trained.stop_reason,
        trained.history.len(),
        fmt_percent(Some(test_error(&m)?))
    ))
}

pub fn cmd_compare(cfg: &RunConfig, input: Option<&Path>, exec: Execution) -> Result<String> {
    let p = prepare(cfg, input)?;
    let cmp = compare(&p.data, &cfg.training_config(), &cfg.ga_config(), exec)
        .context("GA comparison")?;
    let out = &cfg.out;
    let best_genome = Mlp::new(p.data.topology, cmp.run.best.genome.clone())?;
    (|| -> Result<()> {
        write_out(
            out,
            "summary.txt",
            &format!("{}\n", report::summary_line(&cmp)),
        )?;
        write_out(out, "comparison.txt", &report::comparison_text(&cmp))?;
        write_out(out, "comparison.csv", &report::comparison_csv(&cmp))?;
        write_out(out, "cycles.csv", &report::cycles_csv(&cmp.run))?;
        write_out(out, "best_genome.txt", &best_genome.to_text())?;
        write_out(
            out,
            "nn_model.txt",
            &cmp.conventional.trained.model.to_text(),
        )?;
        write_out(out, "ga_model.txt", &cmp.ga.trained.model.to_text())?;
        write_out(out, "normalization.txt", &p.normalization.to_text())?;
        write_confusion(
            out,
            "nn_",
            &cmp.conventional.confusion,
            "Conventional MLP test confusion matrix",
        )?;
        write_confusion(
            out,
            "ga_",
            &cmp.ga.confusion,
            "GA-initialized MLP test confusion matrix",
        )?;
        write_out(
            out,
            "rates.csv",
            &report::rates_csv(&[
                ("nn", &cmp.conventional.confusion),
                ("ga", &cmp.ga.confusion),
            ]),
        )?;
        write_rocs(
            out,
            &[
                ("nn", &cmp.conventional.test_outputs),
                ("ga", &cmp.ga.test_outputs),
            ],
            &p.data.test_classes,
            &p.data.class_names,
        )
    })()
    .context("writing outputs")?;
    Ok(report::summary_line(&cmp))
}

/// A saved model applied to a labeled file.
struct Scored {
    targets: Vec<usize>,
    outputs: Vec<Vec<f64>>,
    confusion: ConfusionMatrix,
}

fn score_model(
    cfg: &RunConfig,
    model_path: &Path,
    input: Option<&Path>,
    normalization: Option<&Path>,
) -> Result<Scored> {
    let model =
        Mlp::load(model_path).with_context(|| format!("loading model {}", model_path.display()))?;
    let path = input_path(cfg, input)?;
    let ds = load_input(cfg, &path)?;
    let targets = require_labels(&ds, &path)?;
    if model.topology.input_size != ds.dim() {
        bail!(
            "evaluation: model expects {} inputs but {} has {} features",
            model.topology.input_size,
            path.display(),
            ds.dim()
        );
    }
    if model.topology.output_size != AnomalyLabel::COUNT {
        bail!(
            "evaluation: model has {} outputs but there are {} anomaly labels",
            model.topology.output_size,
            AnomalyLabel::COUNT
        );
    }
    let params = match normalization {
        Some(p) => NormalizationParams::load(p)
            .with_context(|| format!("loading normalization {}", p.display()))?,
        None => NormalizationParams::fit(&ds).context("normalization")?,
    };
    if params.dim() != ds.dim() {
        bail!(
            "normalization: parameters cover {} features but {} has {}",
            params.dim(),
            path.display(),
            ds.dim()
        );
    }
    let scaled = params.apply(&ds).context("normalization")?;
    let outputs = scaled
        .samples()
        .iter()
        .map(|s| model.forward(&s.features))
        .collect::<anomaly_core::Result<Vec<_>>>()
        .context("evaluation")?;
    let predicted: Vec<usize> = outputs
        .iter()
        .map(|o| anomaly_core::mlp::argmax(o))
        .collect();
    let confusion = confusion(&targets, &predicted, AnomalyLabel::COUNT)
        .and_then(|m| m.with_names(label_names()))
        .context("evaluation")?;
    Ok(Scored {
        targets,
        outputs,
        confusion,
    })
}

pub fn cmd_eval(
    cfg: &RunConfig,
    model: &Path,
    input: Option<&Path>,
    normalization: Option<&Path>,
) -> Result<String> {
    let s = score_model(cfg, model, input, normalization)?;
    let out = &cfg.out;
    (|| -> Result<()> {
        write_confusion(out, "", &s.confusion, "Confusion matrix")?;
        write_out(
            out,
            "rates.csv",
            &report::rates_csv(&[("model", &s.confusion)]),
        )?;
        write_rocs(out, &[("model", &s.outputs)], &s.targets, &label_names())
    })()
    .context("writing outputs")?;
    Ok(format!(
        "{} samples, error {}",
        s.confusion.total(),
        fmt_percent(Some(test_error(&s.confusion)?))
    ))
}

pub fn cmd_roc(
    cfg: &RunConfig,
    model: &Path,
    input: Option<&Path>,
    normalization: Option<&Path>,
) -> Result<String> {
    let s = score_model(cfg, model, input, normalization)?;
    write_rocs(
        &cfg.out,
        &[("model", &s.outputs)],
        &s.targets,
        &label_names(),
    )
    .context("writing outputs")?;
    let aucs: Vec<String> = label_names()
        .iter()
        .enumerate()
        .filter_map(|(c, n)| {
            report::class_roc(&s.outputs, &s.targets, c)
                .ok()
                .flatten()
                .map(|r| format!("{n} AUC {:.3}", r.auc))
        })
        .collect();
    Ok(if aucs.is_empty() {
        "no class has both positive and negative samples".into()
    } else {
        aucs.join(", ")
    })
}
