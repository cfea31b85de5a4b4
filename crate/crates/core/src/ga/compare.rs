use super::fitness::{train_and_score, TrainingData};
use super::operators::init_population;
use super::run::{run_ga, GaRun};
use super::GaConfig;
use crate::error::Result;
use crate::eval::{test_error, ConfusionMatrix};
use crate::exec::Execution;
use crate::mlp::{TrainedModel, TrainingConfig};

/// A trained network and how it did on the test split.
#[derive(Clone, Debug)]
pub struct ModelOutcome {
    pub trained: TrainedModel,
    pub confusion: ConfusionMatrix,
    pub test_error: f64,
    /// Raw network outputs for each test sample.
    pub test_outputs: Vec<Vec<f64>>,
}

impl ModelOutcome {
    fn new(trained: TrainedModel, confusion: ConfusionMatrix, data: &TrainingData) -> Result<Self> {
        let test_outputs = data
            .test_inputs
            .iter()
            .map(|x| trained.model.forward(x))
            .collect::<Result<_>>()?;
        Ok(ModelOutcome {
            test_error: test_error(&confusion)?,
            trained,
            confusion,
            test_outputs,
        })
    }
}

#[derive(Clone, Debug)]
pub struct Comparison {
    /// Trained from the first individual of the GA's initial population.
    pub conventional: ModelOutcome,
    pub ga: ModelOutcome,
    pub run: GaRun,
}

/// Trains a conventionally initialized network and runs the GA on the same
/// data with the same training settings.
///
/// The conventional network starts from the same random weights as the GA's
/// first initial individual, so the two differ only by the search.
pub fn compare(
    data: &TrainingData,
    training: &TrainingConfig,
    ga: &GaConfig,
    exec: Execution,
) -> Result<Comparison> {
    ga.validate()?;
    let start = init_population(ga, &data.topology).swap_remove(0).genome;
    let (nn_model, nn_confusion) =
        train_and_score(&start, data, training).map_err(|e| e.in_stage("conventional training"))?;
    let conventional = ModelOutcome::new(nn_model, nn_confusion, data)?;
    let run = run_ga(ga, data, training, exec)?;
    let ga_outcome = ModelOutcome::new(run.best_model.clone(), run.best_confusion.clone(), data)?;
    Ok(Comparison {
        conventional,
        ga: ga_outcome,
        run,
    })
}
