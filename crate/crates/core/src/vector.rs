//! Plain `f64` slice helpers. Vectors are coefficient lists over the simple roots.

/// Largest absolute entry.
pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Coordinate sum, the linear functional `|v|₁` cutting out the hyperplane `V₁`.
pub fn coord_sum(v: &[f64]) -> f64 {
    v.iter().sum()
}

/// Entrywise comparison with a tolerance relative to the larger vector.
pub fn approx_eq(u: &[f64], v: &[f64], rel: f64) -> bool {
    let scale = 1.0f64.max(max_abs(u)).max(max_abs(v));
    u.len() == v.len() && u.iter().zip(v).all(|(a, b)| (a - b).abs() <= rel * scale)
}

/// Euclidean distance between coordinate vectors.
pub fn dist(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

/// Largest entrywise difference.
pub fn dist_inf(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
}

pub fn scale(v: &[f64], s: f64) -> Vec<f64> {
    v.iter().map(|x| x * s).collect()
}

/// `s·u + v`.
pub fn axpy(s: f64, u: &[f64], v: &[f64]) -> Vec<f64> {
    u.iter().zip(v).map(|(a, b)| s * a + b).collect()
}

pub fn add(u: &[f64], v: &[f64]) -> Vec<f64> {
    axpy(1.0, u, v)
}

pub fn neg(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| -x).collect()
}

/// Standard basis vector `e_i` of length `n`.
pub fn unit(n: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[i] = 1.0;
    v
}
