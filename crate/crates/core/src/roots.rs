//! Roots, words and breadth-first enumeration of positive roots by depth.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::datum::{CoxeterDatum, SimpleSubset};
use crate::error::{Error, Result};
use crate::vector::{approx_eq, max_abs, unit};

/// Relative tolerance used when deciding that two computed roots coincide.
pub const SAME_ROOT_REL: f64 = 1e-7;

/// Quantum of the rounding used for hash keys of root coordinates.
pub const KEY_QUANTUM: f64 = 1e-6;

/// A word in the simple reflections.
///
/// `Word(vec![i, j, k])` stands for `r_i r_j r_k`; acting on a vector the
/// rightmost letter applies first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(letters: Vec<usize>) -> Self {
        Word(letters)
    }

    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Checks every letter is below `rank`.
    pub fn validate(&self, rank: usize) -> Result<()> {
        match self.0.iter().find(|&&l| l >= rank) {
            Some(&index) => Err(Error::IndexOutOfRange { index, rank }),
            None => Ok(()),
        }
    }

    /// The inverse word (letters reversed, since each letter is an involution).
    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().copied().collect())
    }

    /// The product `self · other`.
    pub fn then(&self, other: &Word) -> Self {
        Word(self.0.iter().chain(&other.0).copied().collect())
    }

    /// `r_letter · self`.
    pub fn prepend(&self, letter: usize) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(letter);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    /// `self · r_letter`.
    pub fn append(&self, letter: usize) -> Self {
        let mut v = self.0.clone();
        v.push(letter);
        Word(v)
    }

    /// `selfⁿ`.
    pub fn pow(&self, n: usize) -> Self {
        Word(self.0.repeat(n))
    }
}

impl From<Vec<usize>> for Word {
    fn from(v: Vec<usize>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    /// Sign of a vector in `cone(Π) ∪ -cone(Π)`; `None` for mixed or zero vectors.
    pub fn of(v: &[f64], tol: f64) -> Option<Sign> {
        let tol = tol * 1.0f64.max(max_abs(v));
        let nonneg = v.iter().all(|&x| x >= -tol);
        let nonpos = v.iter().all(|&x| x <= tol);
        let nonzero = v.iter().any(|&x| x.abs() > tol);
        match (nonneg, nonpos, nonzero) {
            (true, false, true) => Some(Sign::Positive),
            (false, true, true) => Some(Sign::Negative),
            _ => None,
        }
    }
}

/// A word realizing a root as `word · a_simple`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub simple: usize,
    pub word: Word,
}

/// A root given by its coordinates over the simple roots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Root {
    coords: Vec<f64>,
    sign: Sign,
    witness: Option<Witness>,
}

impl Root {
    /// The simple root `a_i`.
    pub fn simple(d: &CoxeterDatum, i: usize) -> Root {
        Root {
            coords: unit(d.rank(), i),
            sign: Sign::Positive,
            witness: Some(Witness {
                simple: i,
                word: Word::identity(),
            }),
        }
    }

    /// The root `word · a_simple`.
    pub fn from_witness(d: &CoxeterDatum, simple: usize, word: Word) -> Result<Root> {
        word.validate(d.rank())?;
        if simple >= d.rank() {
            return Err(Error::IndexOutOfRange {
                index: simple,
                rank: d.rank(),
            });
        }
        let coords = act(d, &word, &unit(d.rank(), simple));
        let sign = Sign::of(&coords, d.tolerance()).ok_or_else(|| {
            Error::InvalidArgument("word image has mixed signs".into())
        })?;
        Ok(Root {
            coords,
            sign,
            witness: Some(Witness { simple, word }),
        })
    }

    /// Wraps a coordinate vector that is known to be a root.
    ///
    /// Only unit length and a definite sign are checked; membership in `Φ`
    /// is the caller's responsibility (use [`descent`] to certify it).
    pub fn from_coords(d: &CoxeterDatum, coords: Vec<f64>) -> Result<Root> {
        if coords.len() != d.rank() {
            return Err(Error::DimensionMismatch {
                expected: d.rank(),
                got: coords.len(),
            });
        }
        let norm = d.form(&coords, &coords);
        let scale = 1.0f64.max(max_abs(&coords)).powi(2);
        if (norm - 1.0).abs() > SAME_ROOT_REL * scale {
            return Err(Error::InvalidArgument(format!(
                "vector has (x, x) = {norm}, not 1"
            )));
        }
        let sign = Sign::of(&coords, d.tolerance())
            .ok_or_else(|| Error::InvalidArgument("vector has mixed signs".into()))?;
        Ok(Root {
            coords,
            sign,
            witness: None,
        })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn is_positive(&self) -> bool {
        self.sign == Sign::Positive
    }

    pub fn witness(&self) -> Option<&Witness> {
        self.witness.as_ref()
    }

    /// Word depth, when the root carries a witness from enumeration or descent.
    pub fn depth(&self) -> Option<usize> {
        match self.sign {
            Sign::Positive => self.witness.as_ref().map(|w| w.word.len()),
            Sign::Negative => None,
        }
    }

    /// `-x`, realized as `w r_a · a` when `x = w · a`.
    pub fn negated(&self) -> Root {
        Root {
            coords: self.coords.iter().map(|x| -x).collect(),
            sign: match self.sign {
                Sign::Positive => Sign::Negative,
                Sign::Negative => Sign::Positive,
            },
            witness: self.witness.as_ref().map(|w| Witness {
                simple: w.simple,
                word: w.word.append(w.simple),
            }),
        }
    }

    /// The positive root among `±x`.
    pub fn positive(&self) -> Root {
        match self.sign {
            Sign::Positive => self.clone(),
            Sign::Negative => self.negated(),
        }
    }

    pub fn support(&self, tol: f64) -> SimpleSubset {
        support(&self.coords, tol)
    }

    /// Equality of coordinates up to [`SAME_ROOT_REL`].
    pub fn same_as(&self, other: &Root) -> bool {
        approx_eq(&self.coords, &other.coords, SAME_ROOT_REL)
    }
}

/// Indices whose coordinate exceeds `tol` in absolute value.
pub fn support(v: &[f64], tol: f64) -> SimpleSubset {
    SimpleSubset::new(v.iter().enumerate().filter(|(_, x)| x.abs() > tol).map(|(i, _)| i))
}

/// Applies `w` to `v`, rightmost letter first.
pub fn act(d: &CoxeterDatum, w: &Word, v: &[f64]) -> Vec<f64> {
    let mut out = v.to_vec();
    act_in_place(d, w, &mut out);
    out
}

pub fn act_in_place(d: &CoxeterDatum, w: &Word, v: &mut [f64]) {
    for &l in w.letters().iter().rev() {
        d.reflect_simple_in_place(l, v);
    }
}

/// Reflection of `v` in the hyperplane orthogonal to `axis`:
/// `v - 2 (v, x)/(x, x) x`.
pub fn reflect_vector(d: &CoxeterDatum, axis: &[f64], v: &[f64]) -> Result<Vec<f64>> {
    let xx = d.bilinear(axis, axis)?;
    let scale = 1.0f64.max(max_abs(axis)).powi(2);
    if xx.abs() <= d.tolerance() * scale {
        return Err(Error::IsotropicAxis);
    }
    let c = 2.0 * d.bilinear(v, axis)? / xx;
    Ok(v.iter().zip(axis).map(|(vi, xi)| vi - c * xi).collect())
}

/// `ρ_x v` for a root `x`.
pub fn reflect(d: &CoxeterDatum, x: &Root, v: &[f64]) -> Result<Vec<f64>> {
    reflect_vector(d, x.coords(), v)
}

/// `ρ_x y` for roots `x` and `y`, with the result tagged by sign.
pub fn reflect_root(d: &CoxeterDatum, x: &Root, y: &Root) -> Result<Root> {
    let coords = reflect(d, x, y.coords())?;
    let sign = Sign::of(&coords, d.tolerance())
        .ok_or_else(|| Error::InvalidArgument("reflected vector has mixed signs".into()))?;
    // r_x = w r_a w⁻¹ when x = w a.
    let witness = match (x.witness(), y.witness()) {
        (Some(wx), Some(wy)) => Some(Witness {
            simple: wy.simple,
            word: wx
                .word
                .append(wx.simple)
                .then(&wx.word.inverse())
                .then(&wy.word),
        }),
        _ => None,
    };
    Ok(Root {
        coords,
        sign,
        witness,
    })
}

/// Walks a root down to a simple root by reflections that lower the depth.
///
/// For a positive root `x ≠ a`, `(x, a) > 0` implies `r_a x` is positive
/// of depth one less. Returns the witness `x = w · a_simple`, whose length
/// is the depth of `x`, or `None` if `v` is not recognized as a root within
/// `max_steps` reflections.
pub fn descent(d: &CoxeterDatum, v: &[f64], max_steps: usize) -> Option<Witness> {
    let tol = d.tolerance();
    let sign = Sign::of(v, tol)?;
    let mut z: Vec<f64> = match sign {
        Sign::Positive => v.to_vec(),
        Sign::Negative => v.iter().map(|x| -x).collect(),
    };
    let mut letters = Vec::new();
    for _ in 0..=max_steps {
        if let Some(i) = as_simple(&z, tol) {
            let word = Word(letters);
            return Some(match sign {
                Sign::Positive => Witness { simple: i, word },
                Sign::Negative => Witness {
                    simple: i,
                    word: word.append(i),
                },
            });
        }
        let scale = 1.0f64.max(max_abs(&z));
        let (s, p) = (0..d.rank())
            .map(|s| (s, d.pair_simple(&z, s)))
            .fold((usize::MAX, 0.0), |best, (s, p)| if p > best.1 { (s, p) } else { best });
        if s == usize::MAX || p <= tol * scale {
            return None;
        }
        d.reflect_simple_in_place(s, &mut z);
        if Sign::of(&z, tol) != Some(Sign::Positive) {
            return None;
        }
        letters.push(s);
    }
    None
}

fn as_simple(z: &[f64], tol: f64) -> Option<usize> {
    let mut found = None;
    for (i, &x) in z.iter().enumerate() {
        if (x - 1.0).abs() <= tol * 1e3 {
            if found.is_some() {
                return None;
            }
            found = Some(i);
        } else if x.abs() > tol * 1e3 {
            return None;
        }
    }
    found
}

/// Inversion set `N(w) = {x ∈ Φ⁺ : w x ∈ Φ⁻}`.
#[derive(Debug, Clone, PartialEq)]
pub struct InversionSet {
    pub roots: Vec<Root>,
    /// Whether the word was reduced; then `roots.len()` is its length.
    pub reduced: bool,
}

/// Builds `N(w)` letter by letter using
/// `N(w r_a) = r_a N(w) ∪ {a}` when `a ∉ N(w)` and
/// `N(w r_a) = r_a (N(w) \ {a})` otherwise.
pub fn inversion_set(d: &CoxeterDatum, w: &Word) -> Result<InversionSet> {
    w.validate(d.rank())?;
    let mut set: Vec<Vec<f64>> = Vec::new();
    let mut reduced = true;
    for &a in w.letters() {
        let simple = unit(d.rank(), a);
        let pos = set.iter().position(|x| approx_eq(x, &simple, SAME_ROOT_REL));
        if let Some(p) = pos {
            set.remove(p);
            reduced = false;
        }
        for x in set.iter_mut() {
            d.reflect_simple_in_place(a, x);
        }
        if pos.is_none() {
            set.push(simple);
        }
    }
    let roots = set
        .into_iter()
        .map(|c| {
            let witness = descent(d, &c, 100_000);
            Root {
                sign: Sign::Positive,
                coords: c,
                witness,
            }
        })
        .collect();
    Ok(InversionSet { roots, reduced })
}

/// Caps applied while enumerating roots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationLimits {
    pub max_roots: usize,
    pub depth_cap: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            max_roots: 5_000_000,
            depth_cap: 40,
        }
    }
}

/// All positive roots of depth at most `max_depth`, deduplicated and indexed.
///
/// Roots are stored level by level in breadth-first order: within a level,
/// by parent index and then by the index of the simple reflection applied.
#[derive(Debug, Clone)]
pub struct RootSlice {
    datum: CoxeterDatum,
    max_depth: usize,
    roots: Vec<Root>,
    level_starts: Vec<usize>,
    parents: Vec<Option<usize>>,
    lookup: HashMap<Vec<i64>, Vec<usize>>,
}

impl RootSlice {
    pub fn datum(&self) -> &CoxeterDatum {
        &self.datum
    }

    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn get(&self, i: usize) -> &Root {
        &self.roots[i]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Root> {
        self.roots.iter()
    }

    /// Depth of the root stored at index `i`.
    pub fn depth_of(&self, i: usize) -> usize {
        self.level_starts.partition_point(|&s| s <= i) - 1
    }

    /// Index of the root one reflection shallower on the witness path.
    pub fn parent(&self, i: usize) -> Option<usize> {
        self.parents[i]
    }

    /// Roots of exactly depth `k`.
    pub fn level(&self, k: usize) -> &[Root] {
        &self.roots[self.level_range(k)]
    }

    pub fn level_range(&self, k: usize) -> std::ops::Range<usize> {
        if k > self.max_depth {
            return self.roots.len()..self.roots.len();
        }
        self.level_starts[k]..self.level_starts[k + 1]
    }

    /// Number of roots of depth at most `k`.
    pub fn count_up_to(&self, k: usize) -> usize {
        self.level_starts[(k + 1).min(self.max_depth + 1)]
    }

    /// Whether enumeration ran out of roots before `max_depth`, which happens
    /// exactly when the group is finite and all positive roots were found.
    pub fn is_saturated(&self) -> bool {
        self.max_depth > 0 && self.level_range(self.max_depth).is_empty()
    }

    /// Index of the stored root with the given coordinates, if any.
    pub fn find(&self, coords: &[f64]) -> Option<usize> {
        candidate_keys(coords).iter().find_map(|key| {
            self.lookup
                .get(key)?
                .iter()
                .copied()
                .find(|&i| approx_eq(self.roots[i].coords(), coords, SAME_ROOT_REL))
        })
    }

    /// Index of `x` or `-x`.
    pub fn find_up_to_sign(&self, coords: &[f64]) -> Option<usize> {
        self.find(coords).or_else(|| {
            let n: Vec<f64> = coords.iter().map(|x| -x).collect();
            self.find(&n)
        })
    }

    fn insert(&mut self, root: Root, parent: Option<usize>) -> bool {
        if self.find(root.coords()).is_some() {
            return false;
        }
        let key = dedup_key(root.coords());
        self.lookup.entry(key).or_default().push(self.roots.len());
        self.roots.push(root);
        self.parents.push(parent);
        true
    }
}

/// Hash key: coordinates rounded to a quantum that is `KEY_QUANTUM` for
/// vectors of size up to one and grows with the largest entry by powers of
/// two, so that accumulated relative error does not split equal roots. The
/// slack on `m` keeps integer coordinates carrying rounding noise, such as
/// `2 + 4e-16`, in the same bucket as the exact value.
fn dedup_key(v: &[f64]) -> Vec<i64> {
    let q = quantum(max_abs(v) * (1.0 - 1e-9));
    v.iter().map(|x| (x / q).round() as i64).collect()
}

fn quantum(m: f64) -> f64 {
    if m <= 1.0 {
        KEY_QUANTUM
    } else {
        KEY_QUANTUM * 2f64.powi(m.log2().ceil() as i32)
    }
}

/// Keys under which a root equal to `v` up to rounding may have been stored:
/// the key of `v` plus the alternatives for coordinates sitting near a
/// rounding half-step and for a largest entry near a bucket boundary.
fn candidate_keys(v: &[f64]) -> Vec<Vec<i64>> {
    const NEAR: f64 = 1e-3;
    const MAX_AMBIGUOUS: usize = 6;
    let m = max_abs(v);
    let mut quanta = vec![quantum(m * (1.0 - 1e-9))];
    for q in [quantum(m * (1.0 - 1e-7)), quantum(m * (1.0 + 1e-7))] {
        if !quanta.contains(&q) {
            quanta.push(q);
        }
    }
    let mut keys: Vec<Vec<i64>> = Vec::new();
    for q in quanta {
        let mut partial: Vec<Vec<i64>> = vec![Vec::with_capacity(v.len())];
        let mut ambiguous = 0;
        for x in v {
            let t = x / q;
            let r = t.round();
            let alt = if (t - t.floor() - 0.5).abs() < NEAR && ambiguous < MAX_AMBIGUOUS {
                ambiguous += 1;
                Some(if r > t { r - 1.0 } else { r + 1.0 })
            } else {
                None
            };
            let mut next = Vec::with_capacity(partial.len() * 2);
            for p in &partial {
                let mut a = p.clone();
                a.push(r as i64);
                next.push(a);
                if let Some(alt) = alt {
                    let mut b = p.clone();
                    b.push(alt as i64);
                    next.push(b);
                }
            }
            partial = next;
        }
        for k in partial {
            if !keys.contains(&k) {
                keys.push(k);
            }
        }
    }
    keys
}

/// Enumerates positive roots up to `max_depth` with the default limits.
pub fn generate_roots(d: &CoxeterDatum, max_depth: usize) -> Result<RootSlice> {
    generate_roots_with(d, max_depth, EnumerationLimits::default())
}

/// Breadth-first enumeration from `Π`.
///
/// A positive root `z` of depth `k` yields the depth-`k+1` root `r_s z`
/// exactly when `(z, a_s) < 0`, so each level is produced from the previous
/// one alone.
pub fn generate_roots_with(
    d: &CoxeterDatum,
    max_depth: usize,
    limits: EnumerationLimits,
) -> Result<RootSlice> {
    if max_depth > limits.depth_cap {
        return Err(Error::DepthCapExceeded {
            requested: max_depth,
            cap: limits.depth_cap,
        });
    }
    let n = d.rank();
    let tol = d.tolerance();
    let mut slice = RootSlice {
        datum: d.clone(),
        max_depth,
        roots: Vec::new(),
        level_starts: vec![0],
        parents: Vec::new(),
        lookup: HashMap::new(),
    };
    for i in 0..n {
        slice.insert(Root::simple(d, i), None);
    }
    slice.level_starts.push(slice.roots.len());

    for depth in 0..max_depth {
        let range = slice.level_range(depth);
        for idx in range {
            for s in 0..n {
                let z = &slice.roots[idx];
                let p = d.pair_simple(z.coords(), s);
                if p >= -tol {
                    continue;
                }
                let mut coords = z.coords().to_vec();
                coords[s] -= 2.0 * p;
                let witness = z.witness().map(|w| Witness {
                    simple: w.simple,
                    word: w.word.prepend(s),
                });
                let root = Root {
                    coords,
                    sign: Sign::Positive,
                    witness,
                };
                slice.insert(root, Some(idx));
                if slice.roots.len() > limits.max_roots {
                    return Err(Error::TooManyRoots {
                        limit: limits.max_roots,
                    });
                }
            }
        }
        slice.level_starts.push(slice.roots.len());
    }
    Ok(slice)
}

/// A positive root with full support, built from `start` by repeatedly
/// reflecting in a simple root adjacent to the current support.
///
/// `order` lists candidate simple roots by preference; by default the
/// smallest eligible index is taken.
pub fn full_support_root(d: &CoxeterDatum, start: usize, order: Option<&[usize]>) -> Result<Root> {
    let n = d.rank();
    if start >= n {
        return Err(Error::IndexOutOfRange { index: start, rank: n });
    }
    if !d.is_connected(&SimpleSubset::full(n)) {
        return Err(Error::Disconnected {
            subset: (0..n).collect(),
        });
    }
    let default_order: Vec<usize> = (0..n).collect();
    let order = order.unwrap_or(&default_order);
    let mut root = Root::simple(d, start);
    loop {
        let supp = root.support(d.tolerance());
        if supp.len() == n {
            return Ok(root);
        }
        let beta = order
            .iter()
            .copied()
            .chain(0..n)
            .find(|&b| !supp.contains(b) && supp.iter().any(|g| d.gram(b, g) < -d.tolerance()))
            .expect("connected graph has an edge leaving any proper subset");
        let mut coords = root.coords().to_vec();
        d.reflect_simple_in_place(beta, &mut coords);
        let witness = root.witness().map(|w| Witness {
            simple: w.simple,
            word: w.word.prepend(beta),
        });
        root = Root {
            coords,
            sign: Sign::Positive,
            witness,
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::vector::approx_eq;

    fn coords_eq(a: &[f64], b: &[f64]) -> bool {
        approx_eq(a, b, 1e-9)
    }

    #[test]
    fn lookup_ignores_noise_at_powers_of_two() {
        let d = corpus::affine_a2();
        let slice = generate_roots(&d, 4).unwrap();
        assert!(slice.find(&[4.4e-16, 1.0000000000000002, 0.0]).is_some());
        assert_eq!(dedup_key(&[2.0000000000000004, 1.0]), dedup_key(&[1.9999999999999998, 1.0]));
    }

    #[test]
    fn lookup_survives_half_step_rounding() {
        let d = corpus::hyperbolic_triangle(-1.01);
        let slice = generate_roots(&d, 6).unwrap();
        let mut v = vec![3.0804, 14.71127216, 31.7367697632];
        let i = slice.find(&v).expect("stored root");
        d.reflect_simple_in_place(2, &mut v);
        let j = slice.find(&v).expect("image is stored");
        assert!(slice.depth_of(j) < slice.depth_of(i));
    }

    #[test]
    fn reflections() {
        let d = corpus::affine_a1();
        let a = Root::simple(&d, 0);
        let b = Root::simple(&d, 1);
        assert!(coords_eq(&reflect(&d, &a, a.coords()).unwrap(), &[-1.0, 0.0]));
        assert!(coords_eq(&reflect(&d, &a, b.coords()).unwrap(), &[2.0, 1.0]));

        let e = corpus::bridged_affine_pair();
        let b = Root::simple(&e, 1);
        let c = Root::simple(&e, 2);
        let r = reflect(&e, &b, c.coords()).unwrap();
        assert!(coords_eq(&r, &[0.0, 1.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn isotropic_axis_rejected() {
        let d = corpus::affine_a1();
        assert_eq!(
            reflect_vector(&d, &[1.0, 1.0], &[1.0, 0.0]),
            Err(Error::IsotropicAxis)
        );
    }

    #[test]
    fn depth_zero_is_simple_roots() {
        for (_, d) in corpus::all() {
            let s = generate_roots(&d, 0).unwrap();
            assert_eq!(s.len(), d.rank());
            for (i, r) in s.iter().enumerate() {
                assert_eq!(r.coords(), unit(d.rank(), i).as_slice());
            }
        }
    }

    #[test]
    fn affine_dihedral_depth_two() {
        let d = corpus::affine_a1();
        let s = generate_roots(&d, 2).unwrap();
        let mut got: Vec<Vec<f64>> = s.iter().map(|r| r.coords().to_vec()).collect();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let want = vec![
            vec![0.0, 1.0],
            vec![1.0, 0.0],
            vec![1.0, 2.0],
            vec![2.0, 1.0],
            vec![2.0, 3.0],
            vec![3.0, 2.0],
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn slice_levels_and_parents() {
        let d = corpus::affine_a2();
        let s = generate_roots(&d, 5).unwrap();
        for i in 0..s.len() {
            let k = s.depth_of(i);
            assert_eq!(s.get(i).depth(), Some(k));
            match s.parent(i) {
                None => assert_eq!(k, 0),
                Some(p) => assert_eq!(s.depth_of(p) + 1, k),
            }
            assert_eq!(s.find(s.get(i).coords()), Some(i));
        }
        assert!(!s.is_saturated());
        assert!(generate_roots(&corpus::h3(), 20).unwrap().is_saturated());
        assert_eq!(generate_roots(&corpus::h3(), 20).unwrap().len(), 15);
    }

    #[test]
    fn caps() {
        let d = corpus::hyperbolic_triangle(-1.0);
        assert!(matches!(
            generate_roots(&d, 41),
            Err(Error::DepthCapExceeded { .. })
        ));
        let limits = EnumerationLimits {
            max_roots: 10,
            depth_cap: 40,
        };
        assert!(matches!(
            generate_roots_with(&d, 5, limits),
            Err(Error::TooManyRoots { limit: 10 })
        ));
    }

    #[test]
    fn act_closed_form_bridged_pair() {
        let d = corpus::bridged_affine_pair();
        // (r_a r_b r_e r_d)³ c
        let w = Word::new(vec![0, 1, 4, 3]).pow(3);
        let v = act(&d, &w, &unit(5, 2));
        assert!(coords_eq(&v, &[12.0, 9.0, 1.0, 9.0, 12.0]));
        assert_eq!(act(&d, &Word::identity(), &[0.5, 2.0, 0.0, 1.0, 3.0]), vec![0.5, 2.0, 0.0, 1.0, 3.0]);
    }

    #[test]
    fn inversion_sets() {
        let d = corpus::affine_a1();
        let n = inversion_set(&d, &Word::new(vec![0])).unwrap();
        assert_eq!(n.roots.len(), 1);
        assert!(n.reduced);
        assert_eq!(n.roots[0].coords(), &[1.0, 0.0]);

        assert!(inversion_set(&d, &Word::identity()).unwrap().roots.is_empty());

        let n = inversion_set(&d, &Word::new(vec![0, 1, 0])).unwrap();
        assert!(n.reduced);
        let mut got: Vec<Vec<f64>> = n.roots.iter().map(|r| r.coords().to_vec()).collect();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(got, vec![vec![1.0, 0.0], vec![2.0, 1.0], vec![3.0, 2.0]]);

        let n = inversion_set(&d, &Word::new(vec![0, 1, 1, 0, 1])).unwrap();
        assert!(!n.reduced);
        assert_eq!(n.roots.len(), 1);

        assert!(inversion_set(&d, &Word::new(vec![2])).is_err());
    }

    #[test]
    fn supports() {
        let d = corpus::bridged_affine_pair();
        assert_eq!(Root::simple(&d, 3).support(d.tolerance()), SimpleSubset::from([3]));
        let x = Root::from_witness(&d, 2, Word::new(vec![0, 1, 4, 3])).unwrap();
        assert_eq!(x.support(d.tolerance()), SimpleSubset::full(5));
        assert_eq!(support(&[2.0, 1.0], 1e-9), SimpleSubset::from([0, 1]));
    }

    #[test]
    fn full_support_by_preference() {
        let d = corpus::bridged_affine_pair();
        let x = full_support_root(&d, 2, Some(&[1, 0, 3, 4])).unwrap();
        assert!(coords_eq(x.coords(), &[2.0, 1.0, 1.0, 1.0, 2.0]));
        let w = x.witness().unwrap();
        assert!(coords_eq(
            &act(&d, &w.word, &unit(5, w.simple)),
            x.coords()
        ));

        let t = corpus::affine_a2();
        for start in 0..3 {
            let x = full_support_root(&t, start, None).unwrap();
            assert_eq!(x.support(1e-9).len(), 3);
            assert_eq!(x.depth(), Some(2));
        }
        let one = CoxeterDatum::new(1).unwrap();
        assert_eq!(full_support_root(&one, 0, None).unwrap().coords(), &[1.0]);

        let split = CoxeterDatum::new(2).unwrap();
        assert!(matches!(
            full_support_root(&split, 0, None),
            Err(Error::Disconnected { .. })
        ));
    }

    #[test]
    fn descent_recovers_depth() {
        let d = corpus::hyperbolic_triangle(-1.2);
        let s = generate_roots(&d, 6).unwrap();
        for (i, r) in s.iter().enumerate() {
            let w = descent(&d, r.coords(), 1000).unwrap();
            assert_eq!(w.word.len(), s.depth_of(i));
            let back = act(&d, &w.word, &unit(3, w.simple));
            assert!(approx_eq(&back, r.coords(), 1e-9));
            let neg = descent(&d, r.negated().coords(), 1000).unwrap();
            let back = act(&d, &neg.word, &unit(3, neg.simple));
            assert!(approx_eq(&back, r.negated().coords(), 1e-9));
        }
        assert!(descent(&d, &[1.0, -1.0, 0.0], 100).is_none());
        assert!(descent(&d, &[0.5, 0.5, 0.0], 100).is_none());
    }

    #[test]
    fn reflect_root_tracks_witness() {
        let d = corpus::hyperbolic_triangle(-1.0);
        let s = generate_roots(&d, 3).unwrap();
        let x = s.get(5);
        let y = s.get(7);
        let z = reflect_root(&d, x, y).unwrap();
        let w = z.witness().unwrap();
        assert!(approx_eq(&act(&d, &w.word, &unit(3, w.simple)), z.coords(), 1e-9));
    }
}
