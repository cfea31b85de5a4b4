//! Classification metrics: confusion matrices, precision/recall, test error,
//! one-vs-rest TPR/FPR, and ROC curves.
//!
//! Undefined ratios (zero denominators) are `None` and print as `NaN%`.

mod confusion;
mod roc;

pub use confusion::{
    confusion, fmt_percent, precision_recall, test_error, tpr_fpr, ClassMetrics, ConfusionMatrix,
    Rates,
};
pub use roc::{roc_curve, RocCurve, RocPoint};
