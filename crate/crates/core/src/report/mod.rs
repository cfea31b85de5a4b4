//! Plain-text, CSV and SVG renderings of evaluation results.
//!
//! Everything here returns strings so callers decide where files go; the
//! output depends only on the inputs, which keeps report trees byte-stable.

use std::fmt::Write as _;

use crate::error::Result;
use crate::eval::{fmt_percent, precision_recall, roc_curve, tpr_fpr, ConfusionMatrix, RocCurve};
use crate::ga::{Comparison, GaRun};

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NaN".into(), |x| format!("{x:?}"))
}

/// Per-class counts and rates: `class,precision,recall,tp,fn,fp,tn,tpr,fpr`.
pub fn metrics_csv(m: &ConfusionMatrix) -> String {
    let mut out = String::from("class,precision,recall,tp,fn,fp,tn,tpr,fpr\n");
    for (c, pr) in precision_recall(m).iter().enumerate() {
        let r = tpr_fpr(m, c);
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            m.names()[c],
            opt(pr.precision),
            opt(pr.recall),
            r.tp,
            r.fn_,
            r.fp,
            r.tn,
            opt(r.tpr),
            opt(r.fpr)
        );
    }
    out
}

/// TPR/FPR per (model, class), one row each.
pub fn rates_csv(models: &[(&str, &ConfusionMatrix)]) -> String {
    let mut out = String::from("model,class,tpr,fpr\n");
    for (name, m) in models {
        for c in 0..m.classes() {
            let r = tpr_fpr(m, c);
            let _ = writeln!(out, "{name},{},{},{}", m.names()[c], opt(r.tpr), opt(r.fpr));
        }
    }
    out
}

/// One-vs-rest ROC for `class`, scoring each sample by that output's activation.
///
/// Returns `None` when the test targets contain only one side of the split.
pub fn class_roc(
    outputs: &[Vec<f64>],
    targets: &[usize],
    class: usize,
) -> Result<Option<RocCurve>> {
    let positive: Vec<bool> = targets.iter().map(|&t| t == class).collect();
    if positive.iter().all(|&p| p) || !positive.iter().any(|&p| p) {
        return Ok(None);
    }
    let scores: Vec<f64> = outputs.iter().map(|o| o[class]).collect();
    roc_curve(&scores, &positive).map(Some)
}

const SVG_SIZE: f64 = 420.0;
const MARGIN: f64 = 50.0;
const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
];

/// Static SVG line chart of one or more ROC curves on the unit square.
pub fn roc_svg(title: &str, curves: &[(&str, &RocCurve)]) -> String {
    let plot = SVG_SIZE - 2.0 * MARGIN;
    let x = |v: f64| MARGIN + v * plot;
    let y = |v: f64| SVG_SIZE - MARGIN - v * plot;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" height="{SVG_SIZE}" viewBox="0 0 {SVG_SIZE} {SVG_SIZE}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">{}</text>"#,
        SVG_SIZE / 2.0,
        MARGIN / 2.0,
        escape(title)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{plot}" height="{plot}" fill="none" stroke="black"/>"#
    );
    for i in 0..=5 {
        let v = i as f64 / 5.0;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{v:.1}</text>"#,
            x(v),
            SVG_SIZE - MARGIN + 16.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="end">{v:.1}</text>"#,
            MARGIN - 6.0,
            y(v) + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">False positive rate</text>"#,
        SVG_SIZE / 2.0,
        SVG_SIZE - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">True positive rate</text>"#,
        SVG_SIZE / 2.0,
        SVG_SIZE / 2.0
    );
    let _ = writeln!(
        s,
        r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#999" stroke-dasharray="4 4"/>"##,
        x(0.0),
        y(0.0),
        x(1.0),
        y(1.0)
    );
    for (i, (name, curve)) in curves.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = curve
            .points
            .iter()
            .map(|p| format!("{:.2},{:.2}", x(p.fpr), y(p.tpr)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            pts.join(" ")
        );
        let ly = y(0.0) - 10.0 - 16.0 * (curves.len() - 1 - i) as f64;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{ly}" text-anchor="end" fill="{color}">{} (AUC {:.3})</text>"#,
            x(1.0) - 6.0,
            escape(name),
            curve.auc
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// `NN test error X%, GA test error Y%`.
pub fn summary_line(cmp: &Comparison) -> String {
    format!(
        "NN test error {}, GA test error {}",
        fmt_percent(Some(cmp.conventional.test_error)),
        fmt_percent(Some(cmp.ga.test_error))
    )
}

/// Summary, both confusion matrices and training details as text.
pub fn comparison_text(cmp: &Comparison) -> String {
    let mut s = summary_line(cmp);
    s.push_str("\n\n");
    s.push_str(
        &cmp.conventional
            .confusion
            .to_text("Conventional MLP test confusion matrix"),
    );
    let _ = writeln!(
        s,
        "stopped: {} after {} epochs (selected epoch {})\n",
        cmp.conventional.trained.stop_reason,
        cmp.conventional.trained.history.len(),
        cmp.conventional.trained.selected_epoch
    );
    s.push_str(
        &cmp.ga
            .confusion
            .to_text("GA-initialized MLP test confusion matrix"),
    );
    let _ = writeln!(
        s,
        "stopped: {} after {} epochs (selected epoch {})",
        cmp.ga.trained.stop_reason,
        cmp.ga.trained.history.len(),
        cmp.ga.trained.selected_epoch
    );
    let _ = writeln!(
        s,
        "GA: {} cycles, {} trained genomes, stop {}, best fitness {:?}",
        cmp.run.history.len(),
        cmp.run.evaluations,
        cmp.run.stop,
        cmp.run.best.fitness.unwrap_or(f64::NAN)
    );
    s
}

/// `model,test_error,stop_reason,epochs,selected_epoch`.
pub fn comparison_csv(cmp: &Comparison) -> String {
    let mut s = String::from("model,test_error,stop_reason,epochs,selected_epoch\n");
    for (name, o) in [("nn", &cmp.conventional), ("ga", &cmp.ga)] {
        let _ = writeln!(
            s,
            "{name},{:?},{},{},{}",
            o.test_error,
            o.trained.stop_reason,
            o.trained.history.len(),
            o.trained.selected_epoch
        );
    }
    s
}

/// `cycle,best_fitness,mean_fitness` rows.
pub fn cycles_csv(run: &GaRun) -> String {
    run.history_csv()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svg_is_static() {
        let c = roc_curve(&[0.9, 0.4, 0.6, 0.1], &[true, true, false, false]).unwrap();
        let svg = roc_svg("class <PA>", &[("nn", &c)]);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(!svg.contains("<script"));
        assert!(svg.contains("&lt;PA&gt;"));
        assert!(svg.contains("AUC 0.750"));
    }

    #[test]
    fn metrics_rows() {
        let m = crate::eval::confusion(&[0, 0, 1], &[0, 1, 1], 3).unwrap();
        let csv = metrics_csv(&m);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[1], "1,1.0,0.5,1,1,0,1,0.5,0.0");
        assert!(lines[3].starts_with("3,NaN,NaN,0,0,0,3"));
    }

    #[test]
    fn roc_skipped_for_absent_class() {
        let outs = vec![vec![0.1, 0.9], vec![0.8, 0.2]];
        assert!(class_roc(&outs, &[0, 0], 1).unwrap().is_none());
        assert!(class_roc(&outs, &[1, 0], 1).unwrap().is_some());
    }
}
