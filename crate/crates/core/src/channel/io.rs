//! Channel file format.
//!
//! ```json
//! {
//!   "inputs": ["x0", "x1"],
//!   "dim": 2,
//!   "outputs": {
//!     "x0": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]],
//!     "x1": [[[0.5, 0.0], [0.0, -0.5]], [[0.0, 0.5], [0.5, 0.0]]]
//!   }
//! }
//! ```
//!
//! Each output is a `dim`×`dim` matrix in row-major order with `[re, im]`
//! entries. Parsing validates hermiticity, positivity and unit trace and
//! reports the offending input label on failure.

use super::{CQChannel, DensityOperator};
use crate::error::{Error, Result};
use crate::hermit::{ComplexMatrix, HermitianOperator};
use num_complex::Complex64;
use serde_json::Value;
use std::path::Path;

pub fn load_channel(path: &Path) -> Result<CQChannel> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| Error::parse(path.display().to_string(), format!("invalid JSON: {e}")))?;
    channel_from_json(&value).map_err(|e| match e {
        Error::Parse { context, detail } => Error::Parse {
            context: format!("{}: {}", path.display(), context),
            detail,
        },
        other => other,
    })
}

pub fn save_channel(path: &Path, phi: &CQChannel) -> Result<()> {
    let value = channel_to_json(phi);
    std::fs::write(path, serde_json::to_string_pretty(&value)? + "\n")?;
    Ok(())
}

pub fn channel_from_json(value: &Value) -> Result<CQChannel> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::parse("channel", "expected a JSON object"))?;
    let inputs: Vec<String> = obj
        .get("inputs")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::parse("channel", "missing \"inputs\" array"))?
        .iter()
        .map(|v| {
            v.as_str()
                .map(str::to_string)
                .ok_or_else(|| Error::parse("inputs", "labels must be strings"))
        })
        .collect::<Result<_>>()?;
    let dim = obj
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::parse("channel", "missing positive integer \"dim\""))?
        as usize;
    if dim == 0 {
        return Err(Error::parse("channel", "\"dim\" must be at least 1"));
    }
    let outputs_obj = obj
        .get("outputs")
        .and_then(Value::as_object)
        .ok_or_else(|| Error::parse("channel", "missing \"outputs\" object"))?;

    let mut outputs = Vec::with_capacity(inputs.len());
    for label in &inputs {
        let mat_value = outputs_obj.get(label).ok_or_else(|| {
            Error::parse(format!("output '{label}'"), "no matrix for this input label")
        })?;
        let mat = matrix_from_json(mat_value, dim, label)?;
        let herm = HermitianOperator::new(mat).map_err(|e| {
            Error::parse(format!("output '{label}'"), e.to_string())
        })?;
        let rho = DensityOperator::new(herm).map_err(|e| {
            Error::parse(format!("output '{label}'"), e.to_string())
        })?;
        outputs.push(rho);
    }
    if outputs_obj.len() != inputs.len() {
        return Err(Error::parse(
            "outputs",
            format!(
                "{} outputs provided for {} input labels",
                outputs_obj.len(),
                inputs.len()
            ),
        ));
    }
    CQChannel::new(inputs, outputs)
}

fn matrix_from_json(value: &Value, dim: usize, label: &str) -> Result<ComplexMatrix> {
    let rows = value.as_array().ok_or_else(|| {
        Error::parse(format!("output '{label}'"), "matrix must be an array of rows")
    })?;
    if rows.len() != dim {
        return Err(Error::parse(
            format!("output '{label}'"),
            format!("expected {dim} rows, got {}", rows.len()),
        ));
    }
    let mut data = Vec::with_capacity(dim * dim);
    for (i, row) in rows.iter().enumerate() {
        let cols = row.as_array().ok_or_else(|| {
            Error::parse(format!("output '{label}' row {i}"), "row must be an array")
        })?;
        if cols.len() != dim {
            return Err(Error::parse(
                format!("output '{label}' row {i}"),
                format!("expected {dim} entries, got {}", cols.len()),
            ));
        }
        for (j, entry) in cols.iter().enumerate() {
            let pair = entry.as_array().filter(|p| p.len() == 2).ok_or_else(|| {
                Error::parse(
                    format!("output '{label}' entry ({i},{j})"),
                    "entry must be a [re, im] pair",
                )
            })?;
            let re = pair[0].as_f64();
            let im = pair[1].as_f64();
            match (re, im) {
                (Some(re), Some(im)) if re.is_finite() && im.is_finite() => {
                    data.push(Complex64::new(re, im))
                }
                _ => {
                    return Err(Error::parse(
                        format!("output '{label}' entry ({i},{j})"),
                        "entries must be finite numbers",
                    ))
                }
            }
        }
    }
    ComplexMatrix::new(dim, dim, data)
}

pub fn channel_to_json(phi: &CQChannel) -> Value {
    let mut outputs = serde_json::Map::new();
    for (label, out) in phi.inputs().iter().zip(phi.outputs()) {
        let d = phi.out_dim();
        let rows: Vec<Value> = (0..d)
            .map(|i| {
                let cols: Vec<Value> = (0..d)
                    .map(|j| {
                        let z = out.operator().matrix().get(i, j);
                        serde_json::json!([z.re, z.im])
                    })
                    .collect();
                Value::Array(cols)
            })
            .collect();
        outputs.insert(label.clone(), Value::Array(rows));
    }
    serde_json::json!({
        "inputs": phi.inputs(),
        "dim": phi.out_dim(),
        "outputs": Value::Object(outputs),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let phi = sampling::random_cq_channel(&mut rng, 3, 2);
        let value = channel_to_json(&phi);
        let back = channel_from_json(&value).unwrap();
        assert_eq!(back.inputs(), phi.inputs());
        for x in 0..3 {
            assert!(back
                .output(x)
                .operator()
                .max_abs_diff(phi.output(x).operator())
                < 1e-12);
        }
    }

    #[test]
    fn rejects_non_hermitian_payload() {
        let value = serde_json::json!({
            "inputs": ["a"],
            "dim": 2,
            "outputs": {"a": [[[0.5, 0.0], [1.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]}
        });
        let err = channel_from_json(&value).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("output 'a'"), "located message: {msg}");
        assert!(msg.contains("Hermitian"), "cause in message: {msg}");
    }

    #[test]
    fn rejects_non_unit_trace() {
        let value = serde_json::json!({
            "inputs": ["a"],
            "dim": 2,
            "outputs": {"a": [[[0.9, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]}
        });
        let err = channel_from_json(&value).unwrap_err();
        assert!(err.to_string().contains("trace"));
    }

    #[test]
    fn rejects_missing_output() {
        let value = serde_json::json!({
            "inputs": ["a", "b"],
            "dim": 1,
            "outputs": {"a": [[[1.0, 0.0]]]}
        });
        let err = channel_from_json(&value).unwrap_err();
        assert!(err.to_string().contains("'b'"));
    }
}
