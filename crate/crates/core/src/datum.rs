//! Coxeter data: bond labels, the Gram matrix of the bilinear form and the
//! Coxeter graph.
//!
//! The simple roots are always the standard basis of `ℝⁿ`, so a vector is
//! just its coefficient list over the simple roots and the bilinear form is
//! `uᵀ G v` for the Gram matrix `G`.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default comparison tolerance for floating point equalities.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Label on the edge between two simple roots.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Bond {
    /// Finite order `m ≥ 2` of `r_a r_b`; the form value is `-cos(π/m)`.
    Order(u32),
    /// Infinite order with an explicit form value `c ≤ -1`.
    Infinite(f64),
}

impl Bond {
    /// Value of the bilinear form between the two simple roots.
    pub fn form_value(self) -> f64 {
        match self {
            Bond::Order(m) => -(PI / m as f64).cos(),
            Bond::Infinite(c) => c,
        }
    }

    fn validate(self, i: usize, j: usize) -> Result<Self> {
        match self {
            Bond::Order(m) if m < 2 => Err(Error::InvalidBond {
                i,
                j,
                reason: format!("order {m} is below 2"),
            }),
            Bond::Infinite(c) if !(c <= -1.0) => Err(Error::InvalidBond {
                i,
                j,
                reason: format!("infinite bond value {c} must be at most -1"),
            }),
            b => Ok(b),
        }
    }
}

impl fmt::Display for Bond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bond::Order(m) => write!(f, "{m}"),
            Bond::Infinite(c) if *c == -1.0 => write!(f, "inf"),
            Bond::Infinite(c) => write!(f, "inf {c}"),
        }
    }
}

/// A subset of the simple roots, stored as sorted distinct indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SimpleSubset(Vec<usize>);

impl SimpleSubset {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        let set: BTreeSet<usize> = members.into_iter().collect();
        SimpleSubset(set.into_iter().collect())
    }

    pub fn full(rank: usize) -> Self {
        SimpleSubset((0..rank).collect())
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    /// Bitmask form, for ranks below 64.
    pub fn mask(&self) -> u64 {
        self.0.iter().fold(0, |m, &i| m | (1u64 << i))
    }
}

impl From<Vec<usize>> for SimpleSubset {
    fn from(v: Vec<usize>) -> Self {
        SimpleSubset::new(v)
    }
}

impl<const N: usize> From<[usize; N]> for SimpleSubset {
    fn from(v: [usize; N]) -> Self {
        SimpleSubset::new(v)
    }
}

/// A Coxeter datum with the simple roots realized as the standard basis.
///
/// Immutable after construction; all queries are pure.
#[derive(Debug, Clone, PartialEq)]
pub struct CoxeterDatum {
    rank: usize,
    bonds: Vec<Bond>,
    gram: Vec<f64>,
    names: Vec<String>,
    tolerance: f64,
}

impl CoxeterDatum {
    /// Rank-`n` datum with every pair of simple roots orthogonal.
    pub fn new(rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidArgument("rank must be positive".into()));
        }
        let mut gram = vec![0.0; rank * rank];
        for i in 0..rank {
            gram[i * rank + i] = 1.0;
        }
        Ok(CoxeterDatum {
            rank,
            bonds: vec![Bond::Order(2); rank * rank],
            gram,
            names: (0..rank).map(default_name).collect(),
            tolerance: DEFAULT_TOLERANCE,
        })
    }

    pub fn from_bonds(rank: usize, bonds: &[(usize, usize, Bond)]) -> Result<Self> {
        bonds
            .iter()
            .try_fold(Self::new(rank)?, |d, &(i, j, b)| d.with_bond(i, j, b))
    }

    /// Sets the label between `i` and `j`, overwriting any previous label.
    pub fn with_bond(mut self, i: usize, j: usize, bond: Bond) -> Result<Self> {
        self.check_index(i)?;
        self.check_index(j)?;
        if i == j {
            return Err(Error::InvalidBond {
                i,
                j,
                reason: "a simple root has no bond with itself".into(),
            });
        }
        let bond = bond.validate(i, j)?;
        let n = self.rank;
        self.bonds[i * n + j] = bond;
        self.bonds[j * n + i] = bond;
        let v = bond.form_value();
        self.gram[i * n + j] = v;
        self.gram[j * n + i] = v;
        Ok(self)
    }

    pub fn with_name(mut self, i: usize, name: impl Into<String>) -> Result<Self> {
        self.check_index(i)?;
        self.names[i] = name.into();
        Ok(self)
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        assert!(tolerance > 0.0, "tolerance must be positive");
        self.tolerance = tolerance;
        self
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn bond(&self, i: usize, j: usize) -> Bond {
        self.bonds[i * self.rank + j]
    }

    /// Gram entry `(a_i, a_j)`.
    pub fn gram(&self, i: usize, j: usize) -> f64 {
        self.gram[i * self.rank + j]
    }

    pub fn gram_row(&self, i: usize) -> &[f64] {
        &self.gram[i * self.rank..(i + 1) * self.rank]
    }

    pub fn gram_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rank, self.rank, &self.gram)
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Index of the simple root with the given display name.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// The bilinear form `uᵀ G v`, checking dimensions.
    pub fn bilinear(&self, u: &[f64], v: &[f64]) -> Result<f64> {
        for len in [u.len(), v.len()] {
            if len != self.rank {
                return Err(Error::DimensionMismatch {
                    expected: self.rank,
                    got: len,
                });
            }
        }
        Ok(self.form(u, v))
    }

    /// The bilinear form without the dimension check.
    #[inline]
    pub fn form(&self, u: &[f64], v: &[f64]) -> f64 {
        debug_assert_eq!(u.len(), self.rank);
        debug_assert_eq!(v.len(), self.rank);
        (0..self.rank).map(|i| u[i] * self.pair_simple(v, i)).sum()
    }

    /// `(a_i, v)` for the simple root `a_i`.
    #[inline]
    pub fn pair_simple(&self, v: &[f64], i: usize) -> f64 {
        self.gram_row(i).iter().zip(v).map(|(g, x)| g * x).sum()
    }

    /// Applies the simple reflection `r_i` to `v` in place.
    #[inline]
    pub fn reflect_simple_in_place(&self, i: usize, v: &mut [f64]) {
        let p = self.pair_simple(v, i);
        v[i] -= 2.0 * p;
    }

    /// Whether `a_i` and `a_j` are joined in the Coxeter graph.
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        i != j && self.gram(i, j).abs() > self.tolerance
    }

    /// Connected components of the Coxeter graph restricted to `subset`,
    /// each sorted, listed by smallest member.
    pub fn graph_components(&self, subset: &SimpleSubset) -> Vec<SimpleSubset> {
        let members = subset.members();
        let mut seen = vec![false; members.len()];
        let mut out = Vec::new();
        for start in 0..members.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            let mut comp = Vec::new();
            while let Some(k) = stack.pop() {
                comp.push(members[k]);
                for (l, &m) in members.iter().enumerate() {
                    if !seen[l] && self.adjacent(members[k], m) {
                        seen[l] = true;
                        stack.push(l);
                    }
                }
            }
            out.push(SimpleSubset::new(comp));
        }
        out
    }

    pub fn is_connected(&self, subset: &SimpleSubset) -> bool {
        self.graph_components(subset).len() <= 1
    }

    /// Serializes to the line-oriented datum format.
    pub fn to_text(&self) -> String {
        let mut s = format!("rank {}\n", self.rank);
        for i in 0..self.rank {
            for j in i + 1..self.rank {
                match self.bond(i, j) {
                    Bond::Order(2) => {}
                    b => s.push_str(&format!("bond {i} {j} {b}\n")),
                }
            }
        }
        for (i, n) in self.names.iter().enumerate() {
            if *n != default_name(i) {
                s.push_str(&format!("name {i} {n}\n"));
            }
        }
        s
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index < self.rank {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index,
                rank: self.rank,
            })
        }
    }
}

fn default_name(i: usize) -> String {
    format!("a{i}")
}

/// Parses the datum file format.
///
/// ```text
/// # comment
/// rank 3
/// bond 0 1 3
/// bond 1 2 inf -1.5
/// name 0 a
/// ```
///
/// Unlisted pairs have order 2. A repeated pair must repeat the same label.
pub fn parse_datum(text: &str) -> Result<CoxeterDatum> {
    let mut datum: Option<CoxeterDatum> = None;
    let mut seen: Vec<((usize, usize), Bond)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let syntax = |message: String| Error::Syntax { line, message };
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let parse_index = |tok: &str| -> Result<usize> {
            tok.parse::<usize>()
                .map_err(|_| syntax(format!("expected a root index, found `{tok}`")))
        };

        match (tokens[0], datum.as_mut()) {
            ("rank", None) => {
                if tokens.len() != 2 {
                    return Err(syntax("expected `rank <n>`".into()));
                }
                let n = tokens[1]
                    .parse::<usize>()
                    .map_err(|_| syntax(format!("invalid rank `{}`", tokens[1])))?;
                datum = Some(CoxeterDatum::new(n).map_err(|e| syntax(e.to_string()))?);
            }
            ("rank", Some(_)) => return Err(syntax("duplicate `rank` line".into())),
            (_, None) => return Err(syntax("the first line must be `rank <n>`".into())),
            ("bond", Some(d)) => {
                if !(4..=5).contains(&tokens.len()) {
                    return Err(syntax("expected `bond <i> <j> <m>` or `bond <i> <j> inf [c]`".into()));
                }
                let i = parse_index(tokens[1])?;
                let j = parse_index(tokens[2])?;
                let bond = match tokens[3] {
                    "inf" | "∞" => {
                        let c = match tokens.get(4) {
                            Some(t) => t
                                .parse::<f64>()
                                .map_err(|_| syntax(format!("invalid bond value `{t}`")))?,
                            None => -1.0,
                        };
                        Bond::Infinite(c)
                    }
                    t if tokens.len() == 4 => Bond::Order(
                        t.parse::<u32>()
                            .map_err(|_| syntax(format!("invalid bond order `{t}`")))?,
                    ),
                    _ => return Err(syntax("only `inf` bonds take a value".into())),
                };
                let key = (i.min(j), i.max(j));
                if let Some((_, prev)) = seen.iter().find(|(k, _)| *k == key) {
                    if *prev != bond {
                        return Err(Error::InvalidBond {
                            i,
                            j,
                            reason: format!("asymmetric labels {prev} and {bond}"),
                        });
                    }
                }
                seen.push((key, bond));
                *d = d.clone().with_bond(i, j, bond)?;
            }
            ("name", Some(d)) => {
                if tokens.len() != 3 {
                    return Err(syntax("expected `name <i> <label>`".into()));
                }
                let i = parse_index(tokens[1])?;
                *d = d.clone().with_name(i, tokens[2])?;
            }
            (other, Some(_)) => return Err(syntax(format!("unknown directive `{other}`"))),
        }
    }
    datum.ok_or(Error::Syntax {
        line: 0,
        message: "missing `rank` line".into(),
    })
}

impl FromStr for CoxeterDatum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_datum(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn parses_affine_dihedral() {
        let d = parse_datum("rank 2\nbond 0 1 inf -1\n").unwrap();
        assert_eq!(d.gram_matrix(), DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]));
    }

    #[test]
    fn no_bonds_is_identity() {
        let d = parse_datum("rank 2").unwrap();
        assert_eq!(d.gram_matrix(), DMatrix::identity(2, 2));
    }

    #[test]
    fn triangle_of_threes() {
        let d = parse_datum("rank 3\nbond 0 1 3\nbond 1 2 3\nbond 0 2 3").unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { -0.5 };
                assert!(close(d.gram(i, j), want));
            }
        }
    }

    #[test]
    fn comments_names_and_default_inf() {
        let d = parse_datum("# header\nrank 3 # trailing\n\nbond 0 2 inf\nname 0 x\n").unwrap();
        assert_eq!(d.gram(0, 2), -1.0);
        assert_eq!(d.name(0), "x");
        assert_eq!(d.name(1), "a1");
        assert_eq!(d.index_of("x"), Some(0));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_datum("bond 0 1 3"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_datum("rank 2\nbond 0 1 1"), Err(Error::InvalidBond { .. })));
        assert!(matches!(
            parse_datum("rank 2\nbond 0 1 inf -0.5"),
            Err(Error::InvalidBond { .. })
        ));
        assert!(matches!(
            parse_datum("rank 2\nbond 0 1 3\nbond 1 0 4"),
            Err(Error::InvalidBond { .. })
        ));
        assert!(matches!(parse_datum("rank 2\nbond 0 2 3"), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(parse_datum("rank 2\nbond 0 0 3"), Err(Error::InvalidBond { .. })));
        assert!(matches!(parse_datum("rank 2\nbond 0 1 x"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_datum("rank 2\nfoo"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_datum(""), Err(Error::Syntax { .. })));
        assert!(matches!(parse_datum("rank 0"), Err(Error::Syntax { .. })));
        // Repeating an identical label is fine.
        assert!(parse_datum("rank 2\nbond 0 1 3\nbond 1 0 3").is_ok());
    }

    #[test]
    fn text_round_trip() {
        let d = parse_datum("rank 4\nbond 0 1 5\nbond 1 2 inf -1.25\nbond 2 3 inf\nname 3 z").unwrap();
        assert_eq!(parse_datum(&d.to_text()).unwrap(), d);
    }

    #[test]
    fn bilinear_checks_dimensions() {
        let d = CoxeterDatum::new(2).unwrap();
        assert_eq!(
            d.bilinear(&[1.0], &[1.0, 0.0]),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        );
        assert_eq!(d.bilinear(&[1.0, 0.0], &[1.0, 0.0]), Ok(1.0));
    }

    #[test]
    fn components() {
        // a-b ∞, b-c 3, c-d 3, d-e ∞
        let d = CoxeterDatum::from_bonds(
            5,
            &[
                (0, 1, Bond::Infinite(-1.0)),
                (1, 2, Bond::Order(3)),
                (2, 3, Bond::Order(3)),
                (3, 4, Bond::Infinite(-1.0)),
            ],
        )
        .unwrap();
        let comps = d.graph_components(&SimpleSubset::from([0, 1, 3, 4]));
        assert_eq!(comps, vec![SimpleSubset::from([0, 1]), SimpleSubset::from([3, 4])]);
        assert_eq!(d.graph_components(&SimpleSubset::from([2])).len(), 1);
        assert!(d.graph_components(&SimpleSubset::default()).is_empty());
        assert!(d.is_connected(&SimpleSubset::full(5)));
    }
}
