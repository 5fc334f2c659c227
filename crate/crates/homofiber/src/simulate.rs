//! Trajectory export.
//!
//! CSV columns: `t`, the representative row-major with real and imaginary
//! parts interleaved (`rep_i_j_re`, `rep_i_j_im`), the model point when the
//! space has one (`model_i_re`, … or `model_i_j_re`, …), and `speed`.

use std::io::Write;

use homofiber_core::{Matrix, ModelPoint, TrajectorySample};
use serde::Serialize;

use crate::config::OutputFormat;
use crate::document::MatrixDoc;
use crate::Result;

fn complex_columns(prefix: &str, index: &str) -> [String; 2] {
    [
        format!("{prefix}_{index}_re"),
        format!("{prefix}_{index}_im"),
    ]
}

fn matrix_columns(prefix: &str, n: usize) -> Vec<String> {
    (0..n)
        .flat_map(|i| (0..n).flat_map(move |j| complex_columns(prefix, &format!("{i}_{j}"))))
        .collect()
}

fn model_columns(point: &ModelPoint) -> Vec<String> {
    match point {
        ModelPoint::Vector(v) => (0..v.len())
            .flat_map(|i| complex_columns("model", &i.to_string()))
            .collect(),
        ModelPoint::Matrix(m) => matrix_columns("model", m.n()),
    }
}

/// Header row for samples shaped like `first`.
pub fn header(first: &TrajectorySample) -> Vec<String> {
    let mut cols = vec!["t".to_string()];
    cols.extend(matrix_columns("rep", first.representative.n()));
    if let Some(p) = &first.model_point {
        cols.extend(model_columns(p));
    }
    cols.push("speed".into());
    cols
}

/// One CSV row as numbers, in header order.
pub fn row(sample: &TrajectorySample) -> Vec<f64> {
    let mut out = vec![sample.t];
    out.extend(
        sample
            .representative
            .matrix()
            .as_slice()
            .iter()
            .flat_map(|z| [z.re, z.im]),
    );
    if let Some(p) = &sample.model_point {
        out.extend(p.flatten());
    }
    out.push(sample.speed);
    out
}

pub fn write_csv(samples: &[TrajectorySample], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if let Some(first) = samples.first() {
        w.write_record(header(first))?;
    }
    for s in samples {
        w.write_record(row(s).iter().map(|x| x.to_string()))?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[derive(Serialize)]
#[serde(rename_all = "snake_case")]
enum ModelTree {
    Vector(Vec<[f64; 2]>),
    Matrix(MatrixDoc),
}

#[derive(Serialize)]
struct SampleTree {
    t: f64,
    representative: MatrixDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    model: Option<ModelTree>,
    speed: f64,
}

fn matrix_tree(m: &Matrix) -> MatrixDoc {
    let n = m.n();
    (0..n)
        .map(|i| (0..n).map(|j| [m.get(i, j).re, m.get(i, j).im]).collect())
        .collect()
}

pub fn write_json_tree(samples: &[TrajectorySample], mut out: impl Write) -> Result<()> {
    let tree: Vec<SampleTree> = samples
        .iter()
        .map(|s| SampleTree {
            t: s.t,
            representative: matrix_tree(s.representative.matrix()),
            model: s.model_point.as_ref().map(|p| match p {
                ModelPoint::Vector(v) => {
                    ModelTree::Vector(v.iter().map(|z| [z.re, z.im]).collect())
                }
                ModelPoint::Matrix(m) => ModelTree::Matrix(matrix_tree(m)),
            }),
            speed: s.speed,
        })
        .collect();
    serde_json::to_writer_pretty(&mut out, &serde_json::json!({ "samples": tree }))?;
    out.write_all(b"\n").map_err(serde_json::Error::io)?;
    Ok(())
}

pub fn render(samples: &[TrajectorySample], format: OutputFormat) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    match format {
        OutputFormat::Csv => write_csv(samples, &mut buf)?,
        OutputFormat::JsonTree => write_json_tree(samples, &mut buf)?,
    }
    Ok(buf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::RunConfig;

    fn samples(count: usize) -> Vec<TrajectorySample> {
        let cfg = RunConfig {
            samples: count,
            ..Default::default()
        };
        let (m, _) = cfg.motion(&cfg.load_space().unwrap()).unwrap();
        cfg.times()
            .unwrap()
            .into_iter()
            .map(|t| m.evaluate(t))
            .collect()
    }

    #[test]
    fn csv_shape() {
        let text = String::from_utf8(render(&samples(2), OutputFormat::Csv).unwrap()).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        let cols: Vec<_> = lines[0].split(',').collect();
        // t, 2x2 complex representative, 2 complex model entries, speed.
        assert_eq!(cols.len(), 1 + 8 + 4 + 1);
        assert_eq!(cols[1], "rep_0_0_re");
        assert_eq!(cols[9], "model_0_re");
        assert_eq!(*cols.last().unwrap(), "speed");
        assert!(lines[1..]
            .iter()
            .all(|l| l.split(',').count() == cols.len()));
    }

    #[test]
    fn json_tree_shape() {
        let bytes = render(&samples(3), OutputFormat::JsonTree).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
        let s = v["samples"].as_array().unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s[0]["representative"].as_array().unwrap().len(), 2);
        assert!(s[0]["model"]["vector"].is_array());
    }
}
