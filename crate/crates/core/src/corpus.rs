//! Small named Coxeter data used throughout the tests, benches and CLI.

use crate::datum::{Bond, CoxeterDatum};

fn named(d: CoxeterDatum, names: &[&str]) -> CoxeterDatum {
    names
        .iter()
        .enumerate()
        .fold(d, |d, (i, n)| d.with_name(i, *n).expect("index in range"))
}

/// Rank-2 datum with `r_a r_b` of order `m`.
pub fn dihedral(m: u32) -> CoxeterDatum {
    named(
        CoxeterDatum::from_bonds(2, &[(0, 1, Bond::Order(m))]).expect("valid order"),
        &["a", "b"],
    )
}

/// Rank-2 datum with an infinite bond of value `c ≤ -1`.
pub fn infinite_dihedral(c: f64) -> CoxeterDatum {
    named(
        CoxeterDatum::from_bonds(2, &[(0, 1, Bond::Infinite(c))]).expect("c must be ≤ -1"),
        &["a", "b"],
    )
}

pub fn a2() -> CoxeterDatum {
    dihedral(3)
}

pub fn b2() -> CoxeterDatum {
    dihedral(4)
}

/// Icosahedral group, linear diagram 5 - 3.
pub fn h3() -> CoxeterDatum {
    named(
        CoxeterDatum::from_bonds(3, &[(0, 1, Bond::Order(5)), (1, 2, Bond::Order(3))]).unwrap(),
        &["a", "b", "c"],
    )
}

/// Affine Ã₁: the infinite dihedral group with `(a, b) = -1`.
pub fn affine_a1() -> CoxeterDatum {
    infinite_dihedral(-1.0)
}

/// Affine Ã₂: a triangle of order-3 bonds.
pub fn affine_a2() -> CoxeterDatum {
    named(
        CoxeterDatum::from_bonds(
            3,
            &[(0, 1, Bond::Order(3)), (1, 2, Bond::Order(3)), (0, 2, Bond::Order(3))],
        )
        .unwrap(),
        &["a", "b", "c"],
    )
}

/// Rank-3 triangle with all three bonds infinite of value `c`.
pub fn hyperbolic_triangle(c: f64) -> CoxeterDatum {
    named(
        CoxeterDatum::from_bonds(
            3,
            &[
                (0, 1, Bond::Infinite(c)),
                (1, 2, Bond::Infinite(c)),
                (0, 2, Bond::Infinite(c)),
            ],
        )
        .expect("c must be ≤ -1"),
        &["a", "b", "c"],
    )
}

/// Rank-5 chain `a ∞ b 3 c 3 d ∞ e` with `(a, b) = (d, e) = -1`.
///
/// Two orthogonal affine parabolics `{a, b}` and `{d, e}` joined through
/// `c`; the normalized roots `(r_a r_b r_e r_d)ⁿ c` accumulate at
/// `(a + b + d + e)/4`, which is not the limit of any affine subgroup.
pub fn bridged_affine_pair() -> CoxeterDatum {
    named(
        CoxeterDatum::from_bonds(
            5,
            &[
                (0, 1, Bond::Infinite(-1.0)),
                (1, 2, Bond::Order(3)),
                (2, 3, Bond::Order(3)),
                (3, 4, Bond::Infinite(-1.0)),
            ],
        )
        .unwrap(),
        &["a", "b", "c", "d", "e"],
    )
}

/// Every named datum, for suites that sweep the corpus.
pub fn all() -> Vec<(&'static str, CoxeterDatum)> {
    vec![
        ("a2", a2()),
        ("b2", b2()),
        ("h3", h3()),
        ("affine_a1", affine_a1()),
        ("affine_a2", affine_a2()),
        ("dihedral_inf_1.5", infinite_dihedral(-1.5)),
        ("triangle_inf_1", hyperbolic_triangle(-1.0)),
        ("triangle_inf_1.01", hyperbolic_triangle(-1.01)),
        ("bridged_affine_pair", bridged_affine_pair()),
    ]
}
