//! Normalized roots, limit roots and the imaginary cone.
//!
//! Points of `V₁` are coordinate vectors with coordinate sum one. The dot
//! action `w · x` is the normalization of `wx`.

use serde::{Deserialize, Serialize};

use crate::datum::{CoxeterDatum, SimpleSubset};
use crate::error::{Error, Result};
use crate::roots::{act, full_support_root, generate_roots, reflect_root, support, Root, RootSlice, Word};
use crate::subgroups::{classify_parabolic, CanonicalSet, ParabolicTag};
use crate::vector::{axpy, coord_sum, dist, max_abs, scale};

/// Tolerance on `|(x, x)|` for approximate isotropic points.
pub const DEFAULT_ISO_TOLERANCE: f64 = 1e-6;

/// Default iteration cap for [`reduce_to_K`].
pub const DEFAULT_MAX_ITER: usize = 10_000;

/// Default clustering radius for [`approx_limit_roots`].
pub const DEFAULT_CLUSTER_EPS: f64 = 1e-2;

/// Coordinates below this (relative to the largest) are outside the support.
pub const SUPPORT_TOL: f64 = 1e-7;

/// How a limit root arises.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Classification {
    /// Limit root of the affine standard parabolic `host` after applying
    /// `reducer`.
    AffineLimit { host: SimpleSubset, reducer: Word },
    /// Convex combination of the affine limit roots of pairwise orthogonal
    /// affine parabolics, after applying `reducer`.
    AffTypeSum {
        components: Vec<SimpleSubset>,
        weights: Vec<f64>,
        reducer: Word,
    },
    NonAffineType,
    Unresolved,
}

/// `#pos(η)` truncated to a slice, and whether it looked stable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosEstimate {
    pub count: usize,
    pub stabilized: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitPoint {
    pub coords: Vec<f64>,
    pub classification: Classification,
    pub pos_estimate: PosEstimate,
}

/// A group of normalized roots accumulating near `center`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub center: Vec<f64>,
    /// Normalized roots assigned to the cluster.
    pub members: Vec<Vec<f64>>,
    pub radius: f64,
    /// `|(c, c)|` for the center `c`.
    pub isotropy_defect: f64,
}

/// `v / |v|₁`.
pub fn normalize(v: &[f64]) -> Result<Vec<f64>> {
    let s = coord_sum(v);
    if s.abs() <= crate::datum::DEFAULT_TOLERANCE * 1.0f64.max(max_abs(v)) {
        return Err(Error::ZeroCoordinateSum);
    }
    Ok(scale(v, 1.0 / s))
}

/// Dot action `w · x = normalize(wx)`.
pub fn dot_act(d: &CoxeterDatum, w: &Word, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != d.rank() {
        return Err(Error::DimensionMismatch {
            expected: d.rank(),
            got: x.len(),
        });
    }
    w.validate(d.rank())?;
    normalize(&act(d, w, x))
}

/// Isotropic points of `span{x, y}` for unit vectors `x, y`, normalized and
/// restricted to the closed simplex (up to `tol`).
///
/// The quadratic `(sx + y, sx + y) = s² + 2Bs + 1` with `B = (x, y)` has real
/// roots iff `|B| ≥ 1`; its two roots multiply to one.
fn plane_isotropic_points(d: &CoxeterDatum, x: &[f64], y: &[f64], tol: f64) -> Vec<Vec<f64>> {
    let b = d.form(x, y);
    let disc = b * b - 1.0;
    if disc < -tol * b.abs().max(1.0) {
        return Vec::new();
    }
    let root = disc.max(0.0).sqrt();
    let s1 = -b + (-b).signum() * root;
    let candidates: Vec<f64> = if root == 0.0 { vec![s1] } else { vec![s1, 1.0 / s1] };
    candidates
        .into_iter()
        .filter_map(|s| normalize(&axpy(s, x, y)).ok())
        .filter(|p| p.iter().all(|&t| t >= -tol))
        .collect()
}

/// Limit roots of a canonical dihedral pair: none, one or two points.
pub fn dihedral_limit_roots(d: &CoxeterDatum, pair: &CanonicalSet) -> Vec<Vec<f64>> {
    if pair.len() != 2 {
        return Vec::new();
    }
    let (a, b) = (pair.roots()[0].coords(), pair.roots()[1].coords());
    let v = pair.value(0, 1);
    let tol = d.tolerance() * 100.0;
    if v.abs() < 1.0 - tol {
        return Vec::new();
    }
    if (v.abs() - 1.0).abs() <= tol {
        return normalize(&axpy(-v.signum(), a, b)).into_iter().collect();
    }
    let ch = v.abs();
    let sh = (ch * ch - 1.0).sqrt();
    let sign = -v.signum();
    [ch + sh, ch - sh]
        .iter()
        .filter_map(|s| normalize(&axpy(sign * s, a, b)).ok())
        .collect()
}

/// `c_i = sinh(iθ)/sinh θ` by the recurrence `c_{i+1} = 2 cosh θ c_i - c_{i-1}`.
pub fn chebyshev_coeff(i: usize, cosh_theta: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    if i == 0 {
        return 0.0;
    }
    for _ in 1..i {
        let next = 2.0 * cosh_theta * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Number of slice roots `x` with `(η, x) > ε`, and whether none of them
/// lies in the two deepest levels.
pub fn pos_count(d: &CoxeterDatum, eta: &[f64], slice: &RootSlice) -> PosEstimate {
    let tol = d.tolerance();
    let g: Vec<f64> = (0..d.rank()).map(|i| d.pair_simple(eta, i)).collect();
    let deep = slice.max_depth().saturating_sub(1);
    let deep_start = slice.level_range(deep).start;
    let mut count = 0;
    let mut stabilized = true;
    for (i, x) in slice.iter().enumerate() {
        let v: f64 = g.iter().zip(x.coords()).map(|(a, b)| a * b).sum();
        if v > tol * 1.0f64.max(max_abs(x.coords())) {
            count += 1;
            if i >= deep_start {
                stabilized = false;
            }
        }
    }
    PosEstimate { count, stabilized }
}

/// Membership in `𝒦 = {v ∈ cone(Π) : (v, a) ≤ 0 for all a ∈ Π}`.
#[allow(non_snake_case)]
pub fn in_K(d: &CoxeterDatum, v: &[f64]) -> bool {
    let tol = d.tolerance() * 1.0f64.max(max_abs(v));
    v.iter().all(|&x| x >= -tol) && (0..d.rank()).all(|i| d.pair_simple(v, i) <= tol)
}

/// Moves `η` into `𝒦` by the dot action, reflecting each step in the simple
/// root with the largest positive pairing (lowest index on ties).
///
/// Returns `(w, w · η)`. Failure to arrive within `max_iter` steps means
/// `η` was not recognized as a point of the imaginary cone.
#[allow(non_snake_case)]
pub fn reduce_to_K(d: &CoxeterDatum, eta: &[f64], max_iter: usize) -> Result<(Word, Vec<f64>)> {
    if eta.len() != d.rank() {
        return Err(Error::DimensionMismatch {
            expected: d.rank(),
            got: eta.len(),
        });
    }
    let tol = d.tolerance();
    let mut cur = normalize(eta)?;
    // Letters in the order applied; the word acts rightmost first.
    let mut applied: Vec<usize> = Vec::new();
    let word = |applied: &[usize]| Word::new(applied.iter().rev().copied().collect());
    for _ in 0..=max_iter {
        let scale = 1.0f64.max(max_abs(&cur));
        let mut best: Option<(usize, f64)> = None;
        for s in 0..d.rank() {
            let p = d.pair_simple(&cur, s);
            if p > tol * scale && best.is_none_or(|(_, q)| p > q) {
                best = Some((s, p));
            }
        }
        let Some((s, _)) = best else {
            if cur.iter().all(|&x| x >= -tol * scale) {
                return Ok((word(&applied), cur));
            }
            return Err(Error::InvalidArgument(
                "point has no positive pairing but lies outside cone(Π)".into(),
            ));
        };
        if applied.len() == max_iter {
            break;
        }
        d.reflect_simple_in_place(s, &mut cur);
        cur = normalize(&cur)?;
        applied.push(s);
    }
    Err(Error::BudgetExhausted {
        budget: max_iter,
        context: "reduction into the fundamental domain".into(),
    })
}

/// Limit root of a connected affine standard parabolic.
pub fn affine_limit_root(d: &CoxeterDatum, m: &SimpleSubset) -> Result<LimitPoint> {
    let ty = classify_parabolic(d, m)?;
    let Some(kernel) = ty.kernel_vector else {
        return Err(Error::NotAffine {
            subset: m.members().to_vec(),
        });
    };
    Ok(LimitPoint {
        coords: kernel,
        classification: Classification::AffineLimit {
            host: m.clone(),
            reducer: Word::identity(),
        },
        pos_estimate: PosEstimate {
            count: 0,
            stabilized: true,
        },
    })
}

/// Classifies an isotropic point of `V₁`.
///
/// The point is reduced into `𝒦`; a connected support of the reduced point
/// gives an affine limit root, a disconnected one a convex combination of
/// the component kernels. A point that does not reduce and whose `pos`
/// keeps growing with depth is of non-affine type.
pub fn classify_limit_root(d: &CoxeterDatum, eta: &[f64], slice: &RootSlice, max_iter: usize) -> Result<LimitPoint> {
    if eta.len() != d.rank() {
        return Err(Error::DimensionMismatch {
            expected: d.rank(),
            got: eta.len(),
        });
    }
    let value = d.form(eta, eta);
    if value.abs() > DEFAULT_ISO_TOLERANCE {
        return Err(Error::NotIsotropic { value });
    }
    let pos_estimate = pos_count(d, eta, slice);
    let classification = match reduce_to_K(d, eta, max_iter) {
        Ok((w, reduced)) => classify_reduced(d, &reduced, w),
        Err(Error::BudgetExhausted { .. }) if !pos_estimate.stabilized => Classification::NonAffineType,
        Err(_) => Classification::Unresolved,
    };
    Ok(LimitPoint {
        coords: eta.to_vec(),
        classification,
        pos_estimate,
    })
}

fn classify_reduced(d: &CoxeterDatum, reduced: &[f64], w: Word) -> Classification {
    let supp = support(reduced, SUPPORT_TOL);
    let components = d.graph_components(&supp);
    let mut kernels = Vec::with_capacity(components.len());
    for m in &components {
        match classify_parabolic(d, m) {
            Ok(t) if t.tag == ParabolicTag::Affine => kernels.push(t.kernel_vector.expect("affine kernel")),
            _ => return Classification::Unresolved,
        }
    }
    if components.len() == 1 {
        return Classification::AffineLimit { host: supp, reducer: w };
    }
    // Least squares over kernels with disjoint supports splits per component.
    let mut weights: Vec<f64> = kernels
        .iter()
        .map(|k| {
            let kk: f64 = k.iter().map(|x| x * x).sum();
            k.iter().zip(reduced).map(|(a, b)| a * b).sum::<f64>() / kk
        })
        .collect();
    let fit = kernels
        .iter()
        .zip(&weights)
        .fold(vec![0.0; d.rank()], |acc, (k, &l)| axpy(l, k, &acc));
    if dist(&fit, reduced) > DEFAULT_ISO_TOLERANCE {
        return Classification::Unresolved;
    }
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|l| *l /= total);
    Classification::AffTypeSum {
        components,
        weights,
        reducer: w,
    }
}

/// Approximates limit roots from the two deepest levels of the depth
/// `max_depth` slice.
///
/// Each deep root `x` is paired with the roots on its chain of ancestors in
/// the enumeration; whenever the plane of such a pair meets the isotropic
/// cone, its isotropic points are limit roots of a dihedral reflection
/// subgroup, and the one closest to `x̂` serves as the anchor of `x`. Roots
/// without an anchor are dropped. Anchors are grouped greedily in slice
/// order: each joins the first cluster whose leader lies within
/// `cluster_eps`. A finite group yields no clusters.
pub fn approx_limit_roots(
    d: &CoxeterDatum,
    max_depth: usize,
    min_depth: usize,
    cluster_eps: f64,
) -> Result<Vec<Cluster>> {
    if min_depth >= max_depth {
        return Err(Error::InvalidArgument(format!(
            "min depth {min_depth} must be below max depth {max_depth}"
        )));
    }
    if !(cluster_eps > 0.0) {
        return Err(Error::InvalidArgument("cluster radius must be positive".into()));
    }
    let slice = generate_roots(d, max_depth)?;
    Ok(cluster_slice(d, &slice, min_depth.max(max_depth - 1), cluster_eps))
}

/// Clustering step of [`approx_limit_roots`] on an existing slice, using
/// roots of depth at least `from_depth`.
pub fn cluster_slice(d: &CoxeterDatum, slice: &RootSlice, from_depth: usize, cluster_eps: f64) -> Vec<Cluster> {
    if slice.is_saturated() || from_depth > slice.max_depth() {
        return Vec::new();
    }
    let tol = 1e-6;
    let start = slice.level_range(from_depth).start;
    let mut anchored: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
    for i in start..slice.len() {
        let x = slice.get(i).coords();
        let Ok(xh) = normalize(x) else { continue };
        let mut best: Option<(f64, Vec<f64>)> = None;
        let mut p = slice.parent(i);
        while let Some(j) = p {
            for q in plane_isotropic_points(d, x, slice.get(j).coords(), tol) {
                let dq = dist(&q, &xh);
                if best.as_ref().is_none_or(|(b, _)| dq < *b) {
                    best = Some((dq, q));
                }
            }
            p = slice.parent(j);
        }
        if let Some((_, q)) = best {
            anchored.push((xh, q));
        }
    }

    let mut leaders: Vec<Vec<f64>> = Vec::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (k, (_, q)) in anchored.iter().enumerate() {
        match leaders.iter().position(|l| dist(l, q) <= cluster_eps) {
            Some(c) => groups[c].push(k),
            None => {
                leaders.push(q.clone());
                groups.push(vec![k]);
            }
        }
    }

    leaders
        .into_iter()
        .zip(groups)
        .map(|(leader, idx)| {
            let n = d.rank();
            let mean = idx
                .iter()
                .fold(vec![0.0; n], |acc, &k| axpy(1.0 / idx.len() as f64, &anchored[k].1, &acc));
            let spread = |c: &[f64]| idx.iter().map(|&k| dist(c, &anchored[k].1)).fold(0.0, f64::max);
            let (center, radius) = if spread(&mean) <= cluster_eps {
                let r = spread(&mean);
                (mean, r)
            } else {
                let r = spread(&leader);
                (leader, r)
            };
            Cluster {
                isotropy_defect: d.form(&center, &center).abs(),
                members: idx.iter().map(|&k| anchored[k].0.clone()).collect(),
                center,
                radius,
            }
        })
        .collect()
}

/// Roots whose normalizations converge to `Σ λ_i η_i`, where `η_i` is the
/// limit root of the affine component `M_i`.
///
/// With `x` a full-support root, `α_i` the first simple root of `M_i` and
/// `δ_i` the isotropic root of `M_i` with `α_i + δ_i` a root, the `n`-th
/// term is `Π_i r_{α_i + ℓ_i δ_i} · x`. Since
/// `r_{α+ℓδ} x = x + (p + ℓq)(α + ℓδ)` with `p = -2(x, α)` and
/// `q = -2(x, δ)`, the `δ_i` part grows like `ℓ_i² q_i`, so `ℓ_i` is roughly
/// proportional to `√(λ_i / (q_i |δ_i|₁))`; the integer is then chosen so
/// that the mass added to each component is closest to its weight.
/// Returns terms `n = 1..=steps`.
pub fn afftype_convex_sequence(
    d: &CoxeterDatum,
    components: &[SimpleSubset],
    weights: &[f64],
    steps: usize,
) -> Result<Vec<Root>> {
    if components.len() != weights.len() || components.is_empty() {
        return Err(Error::InvalidArgument("one weight per component is required".into()));
    }
    if weights.iter().any(|&l| !(l >= 0.0)) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument("weights must be nonnegative and sum to one".into()));
    }
    for (i, a) in components.iter().enumerate() {
        for b in &components[i + 1..] {
            if a.iter().any(|u| b.contains(u) || b.iter().any(|v| d.adjacent(u, v))) {
                return Err(Error::InvalidArgument(format!(
                    "components {:?} and {:?} are not orthogonal",
                    a.members(),
                    b.members()
                )));
            }
        }
    }
    let x = full_support_root(d, 0, None)?;

    struct Part {
        alpha: Vec<f64>,
        delta: Vec<f64>,
        lambda: f64,
        p: f64,
        q: f64,
        rate: f64,
    }
    let mut parts = Vec::new();
    for (m, &lambda) in components.iter().zip(weights) {
        if classify_parabolic(d, m)?.tag != ParabolicTag::Affine {
            return Err(Error::NotAffine {
                subset: m.members().to_vec(),
            });
        }
        if lambda == 0.0 {
            continue;
        }
        let a = m.members()[0];
        let alpha = crate::vector::unit(d.rank(), a);
        let delta = imaginary_step(d, m, a)?;
        let p = -2.0 * d.form(x.coords(), &alpha);
        let q = -2.0 * d.form(x.coords(), &delta);
        let q_eff = if q > d.tolerance() { q } else { 1.0 };
        parts.push(Part {
            rate: (lambda / (q_eff * coord_sum(&delta))).sqrt(),
            alpha,
            delta,
            lambda,
            p,
            q,
        });
    }
    // Mass added to the coordinates of component i by r_{α+ℓδ}.
    let mass = |part: &Part, ell: f64| (part.p + ell * part.q) * (1.0 + ell * coord_sum(&part.delta));
    let pace = (0..parts.len())
        .min_by(|&i, &j| parts[i].rate.total_cmp(&parts[j].rate))
        .expect("some weight is positive");

    let mut out = Vec::with_capacity(steps);
    for n in 1..=steps {
        // The slowest component takes ℓ = n; the others take the integer ℓ
        // whose added mass best matches their weight.
        let target = mass(&parts[pace], n as f64) / parts[pace].lambda;
        let mut y = x.clone();
        for (i, part) in parts.iter().enumerate() {
            let ell = if i == pace {
                n as f64
            } else {
                let nominal = (n as f64 * part.rate / parts[pace].rate).round() as usize;
                (nominal / 2..=2 * nominal + 2)
                    .map(|l| l.max(1) as f64)
                    .min_by(|&l1, &l2| {
                        let err = |l: f64| (mass(part, l) - part.lambda * target).abs();
                        err(l1).total_cmp(&err(l2))
                    })
                    .expect("nonempty range")
            };
            let axis = Root::from_coords(d, axpy(ell, &part.delta, &part.alpha))?;
            y = reflect_root(d, &axis, &y)?;
        }
        out.push(y);
    }
    Ok(out)
}

/// `δ = α + r_α β` for the shallowest root `β ≠ α` of `W_M` with `(α, β) ≥ 1`.
fn imaginary_step(d: &CoxeterDatum, m: &SimpleSubset, a: usize) -> Result<Vec<f64>> {
    let tol = d.tolerance();
    let key = |v: &[f64]| -> Vec<i64> { v.iter().map(|x| (x * 1e6).round() as i64).collect() };
    let alpha = crate::vector::unit(d.rank(), a);
    let mut level: Vec<Vec<f64>> = m.iter().map(|i| crate::vector::unit(d.rank(), i)).collect();
    let mut seen: std::collections::HashSet<Vec<i64>> = level.iter().map(|v| key(v)).collect();
    for _ in 0..crate::roots::EnumerationLimits::default().depth_cap {
        if let Some(beta) = level.iter().find(|r| **r != alpha && d.pair_simple(r, a) >= 1.0 - tol) {
            let mut gamma = beta.clone();
            d.reflect_simple_in_place(a, &mut gamma);
            gamma[a] += 1.0;
            return Ok(gamma);
        }
        let mut next = Vec::new();
        for r in &level {
            for s in m.iter() {
                if d.pair_simple(r, s) < -tol {
                    let mut z = r.clone();
                    d.reflect_simple_in_place(s, &mut z);
                    if seen.insert(key(&z)) {
                        next.push(z);
                    }
                }
            }
        }
        level = next;
    }
    Err(Error::NotAffine {
        subset: m.members().to_vec(),
    })
}
