use crate::data::{Dataset, Split};
use crate::error::{Error, Result};
use crate::eval::{confusion, test_error, ConfusionMatrix};
use crate::label::AnomalyLabel;
use crate::mlp::{train_scg, Batch, Mlp, Topology, TrainedModel, TrainingConfig, WeightVector};

/// How a confusion matrix is reduced to a fitness value (lower is better).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FitnessMode {
    /// Fraction of misclassified test samples.
    #[default]
    Overall,
    /// Mean of `1 - recall` over the classes present in the test set.
    PerClassMean,
}

impl FitnessMode {
    pub fn score(self, m: &ConfusionMatrix) -> Result<f64> {
        match self {
            FitnessMode::Overall => test_error(m),
            FitnessMode::PerClassMean => {
                let present: Vec<f64> = (0..m.classes())
                    .filter(|&c| m.target_total(c) > 0)
                    .map(|c| 1.0 - m.count(c, c) as f64 / m.target_total(c) as f64)
                    .collect();
                if present.is_empty() {
                    return Err(Error::arg("per-class error of an empty confusion matrix"));
                }
                Ok(present.iter().sum::<f64>() / present.len() as f64)
            }
        }
    }
}

/// Train, validation and test batches plus the test targets as class indices.
#[derive(Clone, Debug)]
pub struct TrainingData {
    pub topology: Topology,
    pub train: Batch,
    pub validation: Batch,
    pub test_inputs: Vec<Vec<f64>>,
    pub test_classes: Vec<usize>,
    /// Display names for the output classes.
    pub class_names: Vec<String>,
}

impl TrainingData {
    pub fn new(
        topology: Topology,
        train: (&[Vec<f64>], &[usize]),
        validation: (&[Vec<f64>], &[usize]),
        test: (&[Vec<f64>], &[usize]),
    ) -> Result<Self> {
        let out = topology.output_size;
        if train.0.is_empty() {
            return Err(Error::arg("empty training split"));
        }
        if test.0.is_empty() {
            return Err(Error::arg("empty test split"));
        }
        for x in train.0.iter().chain(validation.0).chain(test.0) {
            if x.len() != topology.input_size {
                return Err(Error::arg(format!(
                    "network expects {} inputs but the data has {} features",
                    topology.input_size,
                    x.len()
                )));
            }
        }
        if test.0.len() != test.1.len() {
            return Err(Error::arg("test inputs and classes differ in length"));
        }
        if let Some(&c) = test.1.iter().find(|&&c| c >= out) {
            return Err(Error::arg(format!(
                "class {c} out of range for {out} outputs"
            )));
        }
        Ok(TrainingData {
            topology,
            train: Batch::one_hot(train.0, train.1, out)?,
            validation: Batch::one_hot(validation.0, validation.1, out)?,
            test_inputs: test.0.to_vec(),
            test_classes: test.1.to_vec(),
            class_names: (1..=out).map(|c| c.to_string()).collect(),
        })
    }

    /// Uses the anomaly labels of each split part as targets.
    pub fn from_labeled_split(topology: Topology, split: &Split) -> Result<Self> {
        let part = |ds: &Dataset, name: &str| -> Result<(Vec<Vec<f64>>, Vec<usize>)> {
            let classes = if ds.is_empty() {
                Vec::new()
            } else {
                ds.labels()
                    .ok_or_else(|| Error::arg(format!("{name} split has unlabeled samples")))?
                    .into_iter()
                    .map(AnomalyLabel::index)
                    .collect()
            };
            Ok((ds.owned_points(), classes))
        };
        let tr = part(&split.train, "training")?;
        let va = part(&split.validation, "validation")?;
        let te = part(&split.test, "test")?;
        let mut data = TrainingData::new(topology, (&tr.0, &tr.1), (&va.0, &va.1), (&te.0, &te.1))?;
        if topology.output_size == AnomalyLabel::COUNT {
            data.class_names = AnomalyLabel::ALL
                .iter()
                .map(|l| l.token().to_string())
                .collect();
        }
        Ok(data)
    }

    pub fn classes(&self) -> usize {
        self.topology.output_size
    }

    pub fn confusion_of(&self, model: &Mlp) -> Result<ConfusionMatrix> {
        let predicted = self
            .test_inputs
            .iter()
            .map(|x| model.predict_class(x))
            .collect::<Result<Vec<_>>>()?;
        confusion(&self.test_classes, &predicted, self.classes())?
            .with_names(self.class_names.clone())
    }
}

/// Trains from `genome` and returns the model with its test confusion matrix.
pub fn train_and_score(
    genome: &WeightVector,
    data: &TrainingData,
    cfg: &TrainingConfig,
) -> Result<(TrainedModel, ConfusionMatrix)> {
    let trained = train_scg(genome, &data.topology, &data.train, &data.validation, cfg)?;
    let m = data.confusion_of(&trained.model)?;
    Ok((trained, m))
}

/// Fitness of a genome; a genome whose training fails scores 1.0 (the worst).
pub fn evaluate_fitness(
    genome: &WeightVector,
    data: &TrainingData,
    cfg: &TrainingConfig,
    mode: FitnessMode,
) -> f64 {
    match train_and_score(genome, data, cfg).and_then(|(_, m)| mode.score(&m)) {
        Ok(f) => f,
        Err(e) => {
            log::warn!("fitness evaluation failed, scoring as 1.0: {e}");
            1.0
        }
    }
}
