//! Dominance between roots.
//!
//! `x dom y` when every group element sending `x` negative also sends `y`
//! negative. Two roots are comparable exactly when `(x, y) ≥ 1`; which one
//! dominates is settled here by exhibiting a word that refutes the other
//! direction.

use std::collections::{BTreeMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::datum::CoxeterDatum;
use crate::roots::{descent, Root, RootSlice, Sign, Word};
use crate::vector::max_abs;

/// Default word-length bound for orbit searches.
pub const DEFAULT_SEARCH_LEN: usize = 12;

/// Cap on distinct `(wx, wy)` states visited by the fallback search.
const STATE_CAP: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    None,
    FirstDominates,
    SecondDominates,
    Equal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceVerdict {
    pub relation: Relation,
    /// False when the direction could not be confirmed within the search
    /// budget and was guessed from depths.
    pub certified: bool,
    /// Word `w` refuting the rejected direction (one of `wx`, `wy` negative,
    /// the other positive).
    pub refutation: Option<Word>,
}

fn sign_of(d: &CoxeterDatum, v: &[f64]) -> Option<Sign> {
    Sign::of(v, d.tolerance())
}

/// Outcome of testing one word: whether it refutes `x dom y`, `y dom x`.
fn refutes(d: &CoxeterDatum, wx: &[f64], wy: &[f64]) -> (bool, bool) {
    match (sign_of(d, wx), sign_of(d, wy)) {
        (Some(Sign::Negative), Some(Sign::Positive)) => (true, false),
        (Some(Sign::Positive), Some(Sign::Negative)) => (false, true),
        _ => (false, false),
    }
}

/// Word sending the positive root `±z` to a negative simple root.
fn descent_word(d: &CoxeterDatum, z: &Root) -> Option<Word> {
    let pos = z.positive();
    let w = match pos.witness() {
        Some(w) => w.clone(),
        None => descent(d, pos.coords(), 100_000)?,
    };
    Some(w.word.inverse().prepend(w.simple))
}

/// Decides dominance between two roots.
///
/// Refutations are sought first among the descent words of `±x` and `±y`
/// (the descent word of the dominated root always refutes the reverse
/// direction), then by a breadth-first search over words of length at most
/// `search_len`.
pub fn dominance_between(d: &CoxeterDatum, x: &Root, y: &Root, search_len: usize) -> DominanceVerdict {
    if x.same_as(y) {
        return DominanceVerdict {
            relation: Relation::Equal,
            certified: true,
            refutation: None,
        };
    }
    let value = d.form(x.coords(), y.coords());
    if value < 1.0 - d.tolerance() {
        return DominanceVerdict {
            relation: Relation::None,
            certified: true,
            refutation: None,
        };
    }

    let mut not_x_dom_y: Option<Word> = None;
    let mut not_y_dom_x: Option<Word> = None;
    let record = |w: &Word, wx: &[f64], wy: &[f64], a: &mut Option<Word>, b: &mut Option<Word>| {
        let (rx, ry) = refutes(d, wx, wy);
        if rx && a.is_none() {
            *a = Some(w.clone());
        }
        if ry && b.is_none() {
            *b = Some(w.clone());
        }
    };

    let mut candidates = vec![Word::identity()];
    candidates.extend(descent_word(d, x));
    candidates.extend(descent_word(d, y));
    for w in candidates.iter().filter(|w| w.len() <= search_len) {
        let wx = crate::roots::act(d, w, x.coords());
        let wy = crate::roots::act(d, w, y.coords());
        record(w, &wx, &wy, &mut not_x_dom_y, &mut not_y_dom_x);
    }

    if not_x_dom_y.is_none() && not_y_dom_x.is_none() {
        orbit_search(d, x, y, search_len, |w, wx, wy| {
            record(w, wx, wy, &mut not_x_dom_y, &mut not_y_dom_x);
            not_x_dom_y.is_some() || not_y_dom_x.is_some()
        });
    }

    match (not_x_dom_y, not_y_dom_x) {
        (Some(w), None) => DominanceVerdict {
            relation: Relation::SecondDominates,
            certified: true,
            refutation: Some(w),
        },
        (None, Some(w)) => DominanceVerdict {
            relation: Relation::FirstDominates,
            certified: true,
            refutation: Some(w),
        },
        (Some(_), Some(_)) => DominanceVerdict {
            relation: Relation::None,
            certified: false,
            refutation: None,
        },
        (None, None) => {
            let depth = |r: &Root| {
                r.positive()
                    .depth()
                    .or_else(|| descent(d, r.positive().coords(), 100_000).map(|w| w.word.len()))
            };
            // Dominance never decreases depth; the guess follows that.
            let relation = match (x.sign(), y.sign(), depth(x), depth(y)) {
                (Sign::Positive, Sign::Positive, Some(a), Some(b)) if a >= b => Relation::FirstDominates,
                (Sign::Negative, Sign::Negative, Some(a), Some(b)) if a <= b => Relation::FirstDominates,
                (Sign::Positive, Sign::Negative, _, _) => Relation::FirstDominates,
                _ => Relation::SecondDominates,
            };
            DominanceVerdict {
                relation,
                certified: false,
                refutation: None,
            }
        }
    }
}

/// Breadth-first search over `(wx, wy)` for words of length ≤ `max_len`;
/// `visit` returns true to stop.
fn orbit_search<F>(d: &CoxeterDatum, x: &Root, y: &Root, max_len: usize, mut visit: F)
where
    F: FnMut(&Word, &[f64], &[f64]) -> bool,
{
    let key = |u: &[f64], v: &[f64]| -> Vec<i64> {
        let s = 1e6 / 1.0f64.max(max_abs(u)).max(max_abs(v));
        u.iter().chain(v).map(|t| (t * s).round() as i64).collect()
    };
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(key(x.coords(), y.coords()));
    queue.push_back((Word::identity(), x.coords().to_vec(), y.coords().to_vec()));
    while let Some((w, wx, wy)) = queue.pop_front() {
        if visit(&w, &wx, &wy) {
            return;
        }
        if w.len() == max_len {
            continue;
        }
        for s in 0..d.rank() {
            let mut nx = wx.clone();
            let mut ny = wy.clone();
            d.reflect_simple_in_place(s, &mut nx);
            d.reflect_simple_in_place(s, &mut ny);
            if seen.len() < STATE_CAP && seen.insert(key(&nx, &ny)) {
                queue.push_back((w.prepend(s), nx, ny));
            }
        }
    }
}

/// Truncation of `D(x)` to a slice.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DominatedSet {
    /// Slice indices of roots `y ≠ x` with `x dom y`.
    pub members: Vec<usize>,
    /// Members whose direction was not certified.
    pub uncertified: Vec<usize>,
}

/// Roots of the slice strictly dominated by the positive root `x`.
pub fn dominated_set(d: &CoxeterDatum, x: &Root, slice: &RootSlice, search_len: usize) -> DominatedSet {
    let gx: Vec<f64> = (0..d.rank()).map(|i| d.pair_simple(x.coords(), i)).collect();
    let mut out = DominatedSet::default();
    for (j, y) in slice.iter().enumerate() {
        let v: f64 = gx.iter().zip(y.coords()).map(|(a, b)| a * b).sum();
        if v < 1.0 - d.tolerance() || x.same_as(y) {
            continue;
        }
        let verdict = dominance_between(d, x, y, search_len);
        if verdict.relation == Relation::FirstDominates {
            out.members.push(j);
            if !verdict.certified {
                out.uncertified.push(j);
            }
        }
    }
    out
}

/// Positive roots of a slice sorted into the classes `D_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DnPartition {
    /// `n ↦` slice indices of roots dominating exactly `n` slice roots.
    pub classes: BTreeMap<usize, Vec<usize>>,
    /// Per root, the number of slice roots it dominates (a lower bound).
    pub counts: Vec<usize>,
    /// Per root, whether the count is the same when the slice is cut one
    /// level shallower; always false for the deepest level.
    pub stable: Vec<bool>,
    /// Pairs `(dominating, dominated)` whose direction was guessed.
    pub uncertified: Vec<(usize, usize)>,
    /// Certified dominance pairs `(dominating, dominated)`.
    pub edges: Vec<(usize, usize)>,
}

/// Computes `#D(x)` within the slice for every root and groups by count.
pub fn partition_dn(d: &CoxeterDatum, slice: &RootSlice, search_len: usize) -> DnPartition {
    let n = slice.len();
    let tol = d.tolerance();
    let images: Vec<Vec<f64>> = slice
        .iter()
        .map(|r| (0..d.rank()).map(|i| d.pair_simple(r.coords(), i)).collect())
        .collect();
    let mut counts = vec![0usize; n];
    let mut shallow_counts = vec![0usize; n];
    let cut = if slice.max_depth() == 0 {
        0
    } else {
        slice.count_up_to(slice.max_depth() - 1)
    };
    let mut uncertified = Vec::new();
    let mut edges = Vec::new();

    for i in 0..n {
        for j in i + 1..n {
            let v: f64 = images[i].iter().zip(slice.get(j).coords()).map(|(a, b)| a * b).sum();
            if v < 1.0 - tol {
                continue;
            }
            let verdict = dominance_between(d, slice.get(i), slice.get(j), search_len);
            let (hi, lo) = match verdict.relation {
                Relation::FirstDominates => (i, j),
                Relation::SecondDominates => (j, i),
                _ => continue,
            };
            counts[hi] += 1;
            if hi < cut && lo < cut {
                shallow_counts[hi] += 1;
            }
            if verdict.certified {
                edges.push((hi, lo));
            } else {
                uncertified.push((hi, lo));
            }
        }
    }

    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &c) in counts.iter().enumerate() {
        classes.entry(c).or_default().push(i);
    }
    let stable = (0..n)
        .map(|i| slice.max_depth() > 0 && i < cut && counts[i] == shallow_counts[i])
        .collect();
    DnPartition {
        classes,
        counts,
        stable,
        uncertified,
        edges,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::roots::generate_roots;

    fn root(d: &CoxeterDatum, c: &[f64]) -> Root {
        Root::from_coords(d, c.to_vec()).unwrap()
    }

    #[test]
    fn reflexive() {
        let d = corpus::affine_a1();
        let a = Root::simple(&d, 0);
        let v = dominance_between(&d, &a, &a, 12);
        assert_eq!(v.relation, Relation::Equal);
        assert!(v.certified);
    }

    #[test]
    fn affine_dihedral_direction() {
        let d = corpus::affine_a1();
        let x = root(&d, &[2.0, 1.0]);
        let a = Root::simple(&d, 0);
        let v = dominance_between(&d, &x, &a, 6);
        assert_eq!(v.relation, Relation::FirstDominates);
        assert!(v.certified);
        let w = v.refutation.unwrap();
        // w refutes "a dom x": w a negative, w x positive.
        assert_eq!(Sign::of(&crate::roots::act(&d, &w, a.coords()), 1e-9), Some(Sign::Negative));
        assert_eq!(Sign::of(&crate::roots::act(&d, &w, x.coords()), 1e-9), Some(Sign::Positive));

        let rev = dominance_between(&d, &a, &x, 6);
        assert_eq!(rev.relation, Relation::SecondDominates);
        // Negation reverses dominance.
        let neg = dominance_between(&d, &a.negated(), &x.negated(), 6);
        assert_eq!(neg.relation, Relation::FirstDominates);
    }

    /// Brute force: does some word of length ≤ `len` send `x` negative
    /// while keeping `y` positive?
    fn refuted_by_words(d: &CoxeterDatum, x: &Root, y: &Root, len: usize) -> bool {
        let mut layer = vec![(x.coords().to_vec(), y.coords().to_vec())];
        for _ in 0..=len {
            let mut next = Vec::new();
            for (wx, wy) in &layer {
                if refutes(d, wx, wy).0 {
                    return true;
                }
                for s in 0..d.rank() {
                    let (mut u, mut v) = (wx.clone(), wy.clone());
                    d.reflect_simple_in_place(s, &mut u);
                    d.reflect_simple_in_place(s, &mut v);
                    next.push((u, v));
                }
            }
            layer = next;
        }
        false
    }

    #[test]
    fn agrees_with_word_enumeration() {
        for d in [corpus::affine_a2(), corpus::affine_a1(), corpus::hyperbolic_triangle(-1.0)] {
            let s = generate_roots(&d, 2).unwrap();
            for i in 0..s.len() {
                for j in 0..s.len() {
                    let (x, y) = (s.get(i), s.get(j));
                    let v = dominance_between(&d, x, y, 12);
                    let comparable = d.form(x.coords(), y.coords()) >= 1.0 - 1e-9;
                    assert_eq!(v.relation != Relation::None, comparable);
                    if i == j || !comparable {
                        continue;
                    }
                    assert!(v.certified);
                    let x_dom_y = !refuted_by_words(&d, x, y, 7);
                    let y_dom_x = !refuted_by_words(&d, y, x, 7);
                    assert_eq!(v.relation == Relation::FirstDominates, x_dom_y);
                    assert_eq!(v.relation == Relation::SecondDominates, y_dom_x);
                }
            }
        }
        // c is dominated by a + b + 2c in the affine triangle.
        let d = corpus::affine_a2();
        let v = dominance_between(&d, &root(&d, &[1.0, 1.0, 2.0]), &Root::simple(&d, 2), 12);
        assert_eq!(v.relation, Relation::FirstDominates);
    }

    #[test]
    fn dominated_sets() {
        let d = corpus::affine_a1();
        let s0 = generate_roots(&d, 0).unwrap();
        assert!(dominated_set(&d, s0.get(0), &s0, 12).members.is_empty());

        let s = generate_roots(&d, 2).unwrap();
        let x = root(&d, &[3.0, 2.0]);
        let set = dominated_set(&d, &x, &s, 8);
        let mut got: Vec<Vec<f64>> = set.members.iter().map(|&i| s.get(i).coords().to_vec()).collect();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(got, vec![vec![1.0, 0.0], vec![2.0, 1.0]]);
        assert!(set.uncertified.is_empty());

        let e = corpus::bridged_affine_pair();
        let s = generate_roots(&e, 3).unwrap();
        assert!(dominated_set(&e, &Root::simple(&e, 2), &s, 12).members.is_empty());
    }

    #[test]
    fn partitions() {
        let d = corpus::a2();
        let s = generate_roots(&d, 5).unwrap();
        let p = partition_dn(&d, &s, 12);
        assert_eq!(p.classes.len(), 1);
        assert_eq!(p.classes[&0].len(), 3);

        let d = corpus::affine_a1();
        let s = generate_roots(&d, 6).unwrap();
        let p = partition_dn(&d, &s, 12);
        assert_eq!(p.counts[0], 0);
        assert_eq!(p.counts[1], 0);
        let i = s.find(&[2.0, 1.0]).unwrap();
        assert_eq!(p.counts[i], 1);
        assert!(p.stable[i]);
        assert!(p.uncertified.is_empty());
        // k(a+b)+a dominates the k shallower roots of the same family.
        let i = s.find(&[4.0, 3.0]).unwrap();
        assert_eq!(p.counts[i], 3);
    }
}
