//! Reflection subgroups: canonical generators, parabolic types, affine
//! detection and host parabolics.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::datum::{CoxeterDatum, SimpleSubset};
use crate::error::{Error, Result};
use crate::limits::{normalize, reduce_to_K, SUPPORT_TOL};
use crate::roots::{act, reflect_root, support, Root, RootSlice, Sign, Word};
use crate::vector::{add, approx_eq, coord_sum, max_abs};

/// Default number of closure rounds for [`dihedral_canonical_pair`].
pub const DEFAULT_CLOSURE_BUDGET: usize = 64;

/// Largest rank for which every subset is examined.
pub const PARABOLIC_RANK_CAP: usize = 20;

/// Whether a bilinear value between two canonical roots is admissible:
/// `-cos(π/n)` for some `n ≥ 2`, or at most `-1`.
pub fn is_canonical_value(v: f64, tol: f64) -> bool {
    let tol = tol * 1.0f64.max(v.abs());
    if v <= -1.0 + tol {
        return true;
    }
    if v > tol {
        return false;
    }
    let c = (-v).clamp(-1.0, 1.0);
    let n = (std::f64::consts::PI / c.acos()).round();
    n >= 2.0 && (v + (std::f64::consts::PI / n).cos()).abs() <= tol
}

/// A set of positive roots with its cached pairwise bilinear values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanonicalSet {
    roots: Vec<Root>,
    values: Vec<f64>,
}

impl CanonicalSet {
    pub fn new(d: &CoxeterDatum, roots: Vec<Root>) -> Self {
        let k = roots.len();
        let mut values = vec![0.0; k * k];
        for i in 0..k {
            for j in 0..k {
                values[i * k + j] = d.form(roots[i].coords(), roots[j].coords());
            }
        }
        CanonicalSet { roots, values }
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Cached `(roots[i], roots[j])`.
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.roots.len() + j]
    }

    /// First pair `(i, j)`, `i < j`, whose value is not admissible.
    pub fn first_violation(&self, tol: f64) -> Option<(usize, usize)> {
        let k = self.roots.len();
        (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .find(|&(i, j)| !is_canonical_value(self.value(i, j), tol))
    }

    pub fn is_canonical(&self, tol: f64) -> bool {
        self.first_violation(tol).is_none()
    }
}

/// Tolerance used for the canonical criterion on computed roots.
fn criterion_tol(d: &CoxeterDatum) -> f64 {
    d.tolerance() * 100.0
}

fn same_up_to_sign(x: &Root, y: &Root) -> bool {
    x.same_as(y) || x.same_as(&y.negated())
}

/// Coefficients of `z` in the basis `(x, y)` of their common plane.
fn plane_coords(x: &[f64], y: &[f64], z: &[f64]) -> (f64, f64) {
    let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
    let (xx, xy, yy) = (dot(x, x), dot(x, y), dot(y, y));
    let (zx, zy) = (dot(z, x), dot(z, y));
    let det = xx * yy - xy * xy;
    ((zx * yy - zy * xy) / det, (zy * xx - zx * xy) / det)
}

/// Canonical roots of the dihedral reflection subgroup `⟨r_x, r_y⟩`.
///
/// Positive subsystem roots are generated by closing `{x, y}` under `ρ_x`
/// and `ρ_y`, one word length per round, while the two angular extremes in
/// the plane `span{x, y}` are tracked. The search stops once the extremes
/// have not moved for two rounds and satisfy the canonical criterion.
pub fn dihedral_canonical_pair(d: &CoxeterDatum, x: &Root, y: &Root, budget: usize) -> Result<CanonicalSet> {
    let (xp, yp) = (x.positive(), y.positive());
    if same_up_to_sign(&xp, &yp) {
        return Ok(CanonicalSet::new(d, vec![xp]));
    }
    let tol = criterion_tol(d);
    if is_canonical_value(d.form(xp.coords(), yp.coords()), tol) {
        return Ok(CanonicalSet::new(d, vec![xp, yp]));
    }
    let angle = |z: &Root| {
        let (s, t) = plane_coords(xp.coords(), yp.coords(), z.coords());
        t.atan2(s)
    };
    let mut lo = (angle(&xp), xp.clone());
    let mut hi = (angle(&yp), yp.clone());
    if lo.0 > hi.0 {
        std::mem::swap(&mut lo, &mut hi);
    }
    let mut seen = vec![xp.clone(), yp.clone()];
    let mut frontier = seen.clone();
    let mut quiet = 0;
    for _ in 0..budget {
        let mut next = Vec::new();
        let mut moved = false;
        for z in &frontier {
            for g in [&xp, &yp] {
                let Ok(r) = reflect_root(d, g, z) else { continue };
                if Sign::of(r.coords(), d.tolerance()).is_none() {
                    continue;
                }
                let r = r.positive();
                if seen.iter().any(|s| s.same_as(&r)) {
                    continue;
                }
                let a = angle(&r);
                let slack = 1e-12 * (1.0 + a.abs());
                if a < lo.0 - slack {
                    lo = (a, r.clone());
                    moved = true;
                } else if a > hi.0 + slack {
                    hi = (a, r.clone());
                    moved = true;
                }
                seen.push(r.clone());
                next.push(r);
            }
        }
        frontier = next;
        quiet = if moved { 0 } else { quiet + 1 };
        if quiet >= 2 && is_canonical_value(d.form(lo.1.coords(), hi.1.coords()), tol) {
            return Ok(CanonicalSet::new(d, vec![lo.1, hi.1]));
        }
    }
    Err(Error::BudgetExhausted {
        budget,
        context: "dihedral extremes did not stabilize".into(),
    })
}

/// Canonical generators of the reflection subgroup generated by `Δ`.
///
/// Pairs violating the criterion are replaced by the canonical pair of the
/// dihedral subgroup they generate until none remain. `budget` bounds the
/// closure rounds per pair; the number of replacements is capped at
/// `budget · |Δ|²`.
pub fn canonicalize(d: &CoxeterDatum, delta: &[Root], budget: usize) -> Result<CanonicalSet> {
    if delta.is_empty() {
        return Err(Error::InvalidArgument("empty generating set".into()));
    }
    let mut work: Vec<Root> = Vec::new();
    let push = |work: &mut Vec<Root>, r: Root| {
        let r = r.positive();
        if !work.iter().any(|w| same_up_to_sign(w, &r)) {
            work.push(r);
        }
    };
    for r in delta {
        push(&mut work, r.clone());
    }
    let tol = criterion_tol(d);
    let cap = budget.max(1) * delta.len().max(2).pow(2);
    for _ in 0..cap {
        let set = CanonicalSet::new(d, work.clone());
        let Some((i, j)) = set.first_violation(tol) else {
            return Ok(set);
        };
        let pair = dihedral_canonical_pair(d, &work[i], &work[j], budget)?;
        work.remove(j);
        work.remove(i);
        for r in pair.roots {
            push(&mut work, r);
        }
    }
    Err(Error::BudgetExhausted {
        budget: cap,
        context: "canonicalization did not converge".into(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParabolicTag {
    Finite,
    Affine,
    Indefinite,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParabolicType {
    pub tag: ParabolicTag,
    /// Positive spanning vector of the Gram kernel, extended by zeros to the
    /// full rank and scaled to coordinate sum one; present iff affine.
    pub kernel_vector: Option<Vec<f64>>,
}

fn submatrix(d: &CoxeterDatum, m: &SimpleSubset) -> DMatrix<f64> {
    let idx = m.members();
    DMatrix::from_fn(idx.len(), idx.len(), |i, j| d.gram(idx[i], idx[j]))
}

/// Type of the standard parabolic subgroup `W_M` for connected `M`.
pub fn classify_parabolic(d: &CoxeterDatum, m: &SimpleSubset) -> Result<ParabolicType> {
    if m.is_empty() {
        return Err(Error::InvalidArgument("empty subset".into()));
    }
    if let Some(&i) = m.members().iter().find(|&&i| i >= d.rank()) {
        return Err(Error::IndexOutOfRange { index: i, rank: d.rank() });
    }
    if !d.is_connected(m) {
        return Err(Error::Disconnected {
            subset: m.members().to_vec(),
        });
    }
    let tol = d.tolerance();
    let eig = SymmetricEigen::new(submatrix(d, m));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let lam = eig.eigenvalues[order[0]];
    if lam > tol {
        return Ok(ParabolicType {
            tag: ParabolicTag::Finite,
            kernel_vector: None,
        });
    }
    if lam < -tol {
        return Ok(ParabolicType {
            tag: ParabolicTag::Indefinite,
            kernel_vector: None,
        });
    }
    if order.len() > 1 && eig.eigenvalues[order[1]].abs() <= tol {
        return Err(Error::DegenerateSpectrum(format!(
            "kernel of {:?} has dimension above one",
            m.members()
        )));
    }
    let mut k: Vec<f64> = eig.eigenvectors.column(order[0]).iter().copied().collect();
    if coord_sum(&k) < 0.0 {
        k.iter_mut().for_each(|x| *x = -*x);
    }
    let s = coord_sum(&k);
    if k.iter().any(|&x| x / s <= tol) {
        return Err(Error::DegenerateSpectrum(format!(
            "kernel vector of {:?} changes sign",
            m.members()
        )));
    }
    let mut full = vec![0.0; d.rank()];
    for (&i, x) in m.members().iter().zip(&k) {
        full[i] = x / s;
    }
    Ok(ParabolicType {
        tag: ParabolicTag::Affine,
        kernel_vector: Some(full),
    })
}

/// Connected subsets `M ⊆ Π` with `W_M` affine, in lexicographic order.
pub fn affine_standard_parabolics(d: &CoxeterDatum) -> Result<Vec<SimpleSubset>> {
    let n = d.rank();
    if n > PARABOLIC_RANK_CAP {
        return Err(Error::InvalidArgument(format!(
            "rank {n} exceeds the cap {PARABOLIC_RANK_CAP} for subset enumeration"
        )));
    }
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << n) {
        let m = SimpleSubset::new((0..n).filter(|i| mask >> i & 1 == 1));
        if !d.is_connected(&m) {
            continue;
        }
        if classify_parabolic(d, &m)?.tag == ParabolicTag::Affine {
            out.push(m);
        }
    }
    out.sort_by(|a, b| a.members().cmp(b.members()));
    Ok(out)
}

/// Whether a canonical pair generates an affine (infinite, value `-1`)
/// dihedral subgroup.
pub fn is_affine_dihedral(d: &CoxeterDatum, pair: &CanonicalSet) -> bool {
    pair.len() == 2 && (pair.value(0, 1) + 1.0).abs() <= criterion_tol(d)
}

/// First slice pair with `(x, y) ≤ -1 - ε`, generating an infinite
/// non-affine dihedral subgroup.
pub fn find_nonaffine_dihedral(d: &CoxeterDatum, slice: &RootSlice) -> Option<(Root, Root)> {
    let tol = d.tolerance();
    let roots = slice.roots();
    for i in 0..roots.len() {
        let g: Vec<f64> = (0..d.rank()).map(|k| d.pair_simple(roots[i].coords(), k)).collect();
        for y in &roots[i + 1..] {
            let v: f64 = g.iter().zip(y.coords()).map(|(a, b)| a * b).sum();
            if v <= -1.0 - tol * 1.0f64.max(v.abs()) {
                return Some((roots[i].clone(), y.clone()));
            }
        }
    }
    None
}

/// Affine standard parabolic hosting a conjugate of an affine dihedral
/// subgroup.
///
/// Returns `(w, N)` where `w` carries the subgroup's limit root into `𝒦`
/// and `N` is the support of the image; the conjugated generators
/// `w·a′, w·b′` are supported in `N` and `W_N` is affine.
pub fn host_parabolic(d: &CoxeterDatum, pair: &CanonicalSet, max_iter: usize) -> Result<(Word, SimpleSubset)> {
    if !is_affine_dihedral(d, pair) {
        return Err(Error::NotAffine {
            subset: Vec::new(),
        });
    }
    let (a, b) = (&pair.roots()[0], &pair.roots()[1]);
    let eta = normalize(&add(a.coords(), b.coords()))?;
    let (w, reduced) = reduce_to_K(d, &eta, max_iter)?;
    let host = support(&reduced, SUPPORT_TOL);
    let ty = classify_parabolic(d, &host)?;
    if ty.tag != ParabolicTag::Affine {
        return Err(Error::NotAffine {
            subset: host.members().to_vec(),
        });
    }
    for r in [a, b] {
        let image = act(d, &w, r.coords());
        let scale = max_abs(&image);
        let leaks = (0..d.rank()).any(|i| !host.contains(i) && image[i].abs() > SUPPORT_TOL * scale);
        if leaks {
            return Err(Error::InvalidArgument(format!(
                "conjugated generator {image:?} leaves the host {:?}",
                host.members()
            )));
        }
    }
    let kernel = ty.kernel_vector.expect("affine type carries a kernel vector");
    debug_assert!(approx_eq(&kernel, &reduced, 1e-6));
    Ok((w, host))
}
