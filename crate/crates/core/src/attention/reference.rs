use super::matrix::{dot, Matrix};
use crate::error::{Error, Result};

/// `softmax(Q Kᵀ / √d + mask) V`, row by row, in plain `f64`.
///
/// `mask` holds additive logits (`0` or `-inf`). A row whose logits are
/// all `-inf` produces a zero vector.
pub fn reference_attention(q: &Matrix, k: &Matrix, v: &Matrix, mask: &Matrix) -> Result<Matrix> {
    if q.cols() != k.cols() {
        return Err(Error::ShapeError(format!(
            "query width {} != key width {}",
            q.cols(),
            k.cols()
        )));
    }
    if k.rows() != v.rows() {
        return Err(Error::ShapeError(format!("{} keys but {} values", k.rows(), v.rows())));
    }
    if mask.rows() != q.rows() || mask.cols() != k.rows() {
        return Err(Error::ShapeError(format!(
            "mask is {}x{}, expected {}x{}",
            mask.rows(),
            mask.cols(),
            q.rows(),
            k.rows()
        )));
    }

    let scale = 1.0 / (q.cols() as f64).sqrt();
    let mut out = Matrix::zeros(q.rows(), v.cols());
    let mut logits = vec![0.0; k.rows()];
    for i in 0..q.rows() {
        for (j, l) in logits.iter_mut().enumerate() {
            *l = dot(q.row(i), k.row(j)) * scale + mask[(i, j)];
        }
        let Some(weights) = softmax(&logits) else {
            continue;
        };
        let row = out.row_mut(i);
        for (j, w) in weights.iter().enumerate() {
            if *w != 0.0 {
                for (o, x) in row.iter_mut().zip(v.row(j)) {
                    *o += w * x;
                }
            }
        }
    }
    Ok(out)
}

/// Numerically stable softmax; `None` when nothing is finite.
pub(crate) fn softmax(logits: &[f64]) -> Option<Vec<f64>> {
    let max = logits
        .iter()
        .copied()
        .filter(|l| l.is_finite())
        .fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return None;
    }
    let mut w: Vec<f64> = logits
        .iter()
        .map(|&l| if l.is_finite() { (l - max).exp() } else { 0.0 })
        .collect();
    let sum: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= sum);
    Some(w)
}

/// Attention of one query over a subset of key/value rows.
pub(crate) fn attend(query: &[f64], keys: &Matrix, values: &Matrix, rows: &[usize]) -> Vec<f64> {
    let mut out = vec![0.0; values.cols()];
    if rows.is_empty() {
        return out;
    }
    let scale = 1.0 / (query.len() as f64).sqrt();
    let logits: Vec<f64> = rows.iter().map(|&r| dot(query, keys.row(r)) * scale).collect();
    let weights = softmax(&logits).expect("finite logits");
    for (&r, w) in rows.iter().zip(&weights) {
        for (o, x) in out.iter_mut().zip(values.row(r)) {
            *o += w * x;
        }
    }
    out
}
