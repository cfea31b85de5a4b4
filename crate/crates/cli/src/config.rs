//! Run configuration read from a sectioned TOML file.
//!
//! Every key is optional; a missing key takes the shipped default, so an
//! empty file (or no file at all) reproduces the reference setup.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};

use anomaly_core::data::{Blob, SplitRatios, SynthSpec};
use anomaly_core::ga::{FitnessMode, GaConfig};
use anomaly_core::labeling::LabelingConfig;
use anomaly_core::mlp::TrainingConfig;
use anyhow::{Context, Result};
use serde::Deserialize;

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Seeds clustering, splitting, weight initialization and the GA.
    pub seed: u64,
    /// Directory that receives every output file.
    pub out: PathBuf,
    pub data: DataSection,
    pub synth: SynthSection,
    pub labeling: LabelingSection,
    pub network: NetworkSection,
    pub training: TrainingSection,
    pub ga: GaSection,
    pub split: SplitSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            out: PathBuf::from("out"),
            data: DataSection::default(),
            synth: SynthSection::default(),
            labeling: LabelingSection::default(),
            network: NetworkSection::default(),
            training: TrainingSection::default(),
            ga: GaSection::default(),
            split: SplitSection::default(),
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct DataSection {
    pub input: Option<PathBuf>,
    /// Columns to skip when reading the input.
    pub ignore: Vec<String>,
    /// Supervised mode: features kept as the main attributes.
    pub retained: Vec<String>,
    /// Supervised mode: features folded into the per-sample weight.
    pub discarded: Vec<String>,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BlobSection {
    pub center: [f64; 2],
    pub spread: [f64; 2],
    pub count: usize,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct SynthSection {
    pub blobs: Vec<BlobSection>,
    pub scatter: usize,
    pub bounds_min: [f64; 2],
    pub bounds_max: [f64; 2],
}

impl Default for SynthSection {
    fn default() -> Self {
        let s = SynthSpec::five_cluster();
        SynthSection {
            blobs: s
                .blobs
                .iter()
                .map(|b| BlobSection {
                    center: b.center,
                    spread: b.spread,
                    count: b.count,
                })
                .collect(),
            scatter: s.scatter,
            bounds_min: s.bounds_min,
            bounds_max: s.bounds_max,
        }
    }
}

impl SynthSection {
    pub fn spec(&self) -> SynthSpec {
        SynthSpec {
            blobs: self
                .blobs
                .iter()
                .map(|b| Blob {
                    center: b.center,
                    spread: b.spread,
                    count: b.count,
                })
                .collect(),
            scatter: self.scatter,
            bounds_min: self.bounds_min,
            bounds_max: self.bounds_max,
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct LabelingSection {
    pub num_clusters: usize,
    pub knn_k: usize,
    pub pa_score_multiplier: f64,
    /// Supervised mode: overrides keyed by class id, e.g. `[labeling.class.0]`.
    pub class: BTreeMap<String, ClassLabeling>,
}

/// Per-class labeling overrides; unset keys inherit from `[labeling]`.
#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ClassLabeling {
    pub num_clusters: Option<usize>,
    pub knn_k: Option<usize>,
    pub pa_score_multiplier: Option<f64>,
}

impl Default for LabelingSection {
    fn default() -> Self {
        let d = LabelingConfig::default();
        LabelingSection {
            num_clusters: d.num_clusters,
            knn_k: d.knn_k,
            pa_score_multiplier: d.pa_score_multiplier,
            class: BTreeMap::new(),
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct NetworkSection {
    /// Hidden layer width; input and output sizes follow from the data.
    pub hidden: usize,
}

impl Default for NetworkSection {
    fn default() -> Self {
        NetworkSection { hidden: 10 }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct TrainingSection {
    pub max_epochs: usize,
    pub patience: usize,
    pub goal: f64,
    pub min_grad: f64,
    pub sigma: f64,
    pub lambda: f64,
}

impl Default for TrainingSection {
    fn default() -> Self {
        let d = TrainingConfig::default();
        TrainingSection {
            max_epochs: d.max_epochs,
            patience: d.patience,
            goal: d.goal,
            min_grad: d.min_grad,
            sigma: d.sigma,
            lambda: d.lambda,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum FitnessName {
    #[default]
    Overall,
    PerClassMean,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct GaSection {
    pub cycles: usize,
    pub population_size: usize,
    pub crossover_alpha: f64,
    pub mutation_rate: f64,
    pub selection_rate: f64,
    pub goal: f64,
    pub fitness: FitnessName,
}

impl Default for GaSection {
    fn default() -> Self {
        let d = GaConfig::default();
        GaSection {
            cycles: d.cycles,
            population_size: d.population_size,
            crossover_alpha: d.crossover_alpha,
            mutation_rate: d.mutation_rate,
            selection_rate: d.selection_rate,
            goal: d.goal,
            fitness: FitnessName::Overall,
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct SplitSection {
    pub train: f64,
    pub validation: f64,
    pub test: f64,
}

impl Default for SplitSection {
    fn default() -> Self {
        let d = SplitRatios::default();
        SplitSection {
            train: d.train,
            validation: d.validation,
            test: d.test,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks every nested configuration.
    pub fn validate(&self) -> Result<()> {
        self.labeling_config().validate()?;
        for c in self.class_labeling()?.values() {
            c.validate()?;
        }
        self.training_config().validate()?;
        self.ga_config().validate()?;
        self.split_ratios()?;
        anyhow::ensure!(
            self.network.hidden >= 1,
            "network.hidden must be at least 1"
        );
        Ok(())
    }

    pub fn labeling_config(&self) -> LabelingConfig {
        LabelingConfig {
            num_clusters: self.labeling.num_clusters,
            knn_k: self.labeling.knn_k,
            pa_score_multiplier: self.labeling.pa_score_multiplier,
            seed: self.seed,
        }
    }

    /// Per-class labeling configurations built from `[labeling.class.N]` tables.
    pub fn class_labeling(&self) -> Result<HashMap<usize, LabelingConfig>> {
        let base = self.labeling_config();
        self.labeling
            .class
            .iter()
            .map(|(k, o)| {
                let class: usize = k
                    .parse()
                    .with_context(|| format!("labeling.class.{k}: class ids are integers"))?;
                let cfg = LabelingConfig {
                    num_clusters: o.num_clusters.unwrap_or(base.num_clusters),
                    knn_k: o.knn_k.unwrap_or(base.knn_k),
                    pa_score_multiplier: o.pa_score_multiplier.unwrap_or(base.pa_score_multiplier),
                    seed: base.seed,
                };
                Ok((class, cfg))
            })
            .collect()
    }

    pub fn training_config(&self) -> TrainingConfig {
        let t = &self.training;
        TrainingConfig {
            max_epochs: t.max_epochs,
            patience: t.patience,
            goal: t.goal,
            min_grad: t.min_grad,
            sigma: t.sigma,
            lambda: t.lambda,
        }
    }

    pub fn ga_config(&self) -> GaConfig {
        let g = &self.ga;
        GaConfig {
            cycles: g.cycles,
            population_size: g.population_size,
            crossover_alpha: g.crossover_alpha,
            mutation_rate: g.mutation_rate,
            selection_rate: g.selection_rate,
            goal: g.goal,
            fitness: match g.fitness {
                FitnessName::Overall => FitnessMode::Overall,
                FitnessName::PerClassMean => FitnessMode::PerClassMean,
            },
            seed: self.seed,
        }
    }

    pub fn split_ratios(&self) -> Result<SplitRatios> {
        Ok(SplitRatios::new(
            self.split.train,
            self.split.validation,
            self.split.test,
        )?)
    }
}
