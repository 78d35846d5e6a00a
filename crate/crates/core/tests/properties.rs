use coxeter_limits::corpus;
use coxeter_limits::dominance::{dominance_between, Relation};
use coxeter_limits::limits::{
    approx_limit_roots, dot_act, in_K, normalize, reduce_to_K, DEFAULT_MAX_ITER,
};
use coxeter_limits::subgroups::{canonicalize, classify_parabolic, ParabolicTag};
use coxeter_limits::vector::{approx_eq, dist, dist_inf};
use coxeter_limits::{act, descent, generate_roots, parse_datum, Bond, CoxeterDatum, Root, SimpleSubset, Word};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn corpus_datum() -> impl Strategy<Value = CoxeterDatum> {
    let all = corpus::all();
    (0..all.len()).prop_map(move |i| corpus::all().swap_remove(i).1)
}

fn infinite_datum() -> impl Strategy<Value = CoxeterDatum> {
    prop_oneof![
        Just(corpus::affine_a1()),
        Just(corpus::affine_a2()),
        Just(corpus::infinite_dihedral(-1.5)),
        Just(corpus::hyperbolic_triangle(-1.0)),
        Just(corpus::bridged_affine_pair()),
    ]
}

fn word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..rank, 0..=max_len).prop_map(Word::new)
}

fn bond() -> impl Strategy<Value = Option<Bond>> {
    prop_oneof![
        Just(None),
        (3u32..8).prop_map(|m| Some(Bond::Order(m))),
        Just(Some(Bond::Infinite(-1.0))),
        (1.0f64..3.0).prop_map(|c| Some(Bond::Infinite(-c))),
    ]
}

/// Isotropic points of `𝒦` for data with an affine parabolic.
fn k_points() -> Vec<(CoxeterDatum, Vec<f64>)> {
    vec![
        (corpus::affine_a1(), vec![0.5, 0.5]),
        (corpus::affine_a2(), vec![1.0 / 3.0; 3]),
        (corpus::bridged_affine_pair(), vec![0.25, 0.25, 0.0, 0.25, 0.25]),
        (corpus::bridged_affine_pair(), vec![0.5, 0.5, 0.0, 0.0, 0.0]),
        (corpus::bridged_affine_pair(), vec![0.0, 0.0, 0.0, 0.5, 0.5]),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn datum_text_round_trips(rank in 2usize..5, bonds in prop::collection::vec(bond(), 6)) {
        let mut d = CoxeterDatum::new(rank).unwrap();
        let mut k = 0;
        for i in 0..rank {
            for j in i + 1..rank {
                if let Some(b) = bonds[k % bonds.len()] {
                    d = d.with_bond(i, j, b).unwrap();
                }
                k += 1;
            }
        }
        let back = parse_datum(&d.to_text()).unwrap();
        prop_assert_eq!(back.rank(), d.rank());
        for i in 0..rank {
            for j in 0..rank {
                prop_assert!((back.gram(i, j) - d.gram(i, j)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn reflections_preserve_the_form(d in corpus_datum(), seed in any::<u64>()) {
        let n = d.rank();
        let u: Vec<f64> = (0..n).map(|i| ((seed >> (8 * i)) & 0xff) as f64 / 64.0 - 2.0).collect();
        let v: Vec<f64> = (0..n).map(|i| ((seed >> (8 * i + 4)) & 0xff) as f64 / 32.0 - 4.0).collect();
        for s in 0..n {
            let (mut ru, mut rv) = (u.clone(), v.clone());
            d.reflect_simple_in_place(s, &mut ru);
            d.reflect_simple_in_place(s, &mut rv);
            prop_assert!((d.form(&ru, &rv) - d.form(&u, &v)).abs() < 1e-9);
            d.reflect_simple_in_place(s, &mut ru);
            prop_assert!(approx_eq(&ru, &u, 1e-12));
        }
    }

    #[test]
    fn descent_recovers_enumeration_depth(d in corpus_datum(), pick in any::<prop::sample::Index>()) {
        let slice = generate_roots(&d, 5).unwrap();
        let i = pick.index(slice.len());
        let w = descent(&d, slice.get(i).coords(), 1000).unwrap();
        prop_assert_eq!(w.word.len(), slice.depth_of(i));
        let back = act(&d, &w.word, &coxeter_limits::vector::unit(d.rank(), w.simple));
        prop_assert!(approx_eq(&back, slice.get(i).coords(), 1e-9));
    }

    #[test]
    fn normalized_roots_lie_in_the_simplex(d in corpus_datum()) {
        for r in generate_roots(&d, 6).unwrap().iter() {
            let p = normalize(r.coords()).unwrap();
            prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            prop_assert!(p.iter().all(|&t| (-1e-9..=1.0 + 1e-9).contains(&t)));
        }
    }

    #[test]
    fn dot_action_composes(k in 0usize..5, seed in any::<u64>()) {
        let (d, eta) = &k_points()[k];
        let n = d.rank();
        let letters: Vec<usize> = (0..12).map(|i| ((seed >> (5 * i)) as usize) % n).collect();
        let (w1, w2) = (Word::new(letters[..6].to_vec()), Word::new(letters[6..].to_vec()));
        let both = dot_act(d, &w1.then(&w2), eta).unwrap();
        let step = dot_act(d, &w1, &dot_act(d, &w2, eta).unwrap()).unwrap();
        prop_assert!(dist_inf(&both, &step) < 1e-9);
    }

    #[test]
    fn reduction_returns_the_fundamental_point(k in 0usize..5, w in word(5, 6)) {
        let (d, eta) = &k_points()[k];
        let w = Word::new(w.letters().iter().map(|&s| s % d.rank()).collect());
        prop_assert!(in_K(d, eta));
        let (idle, same) = reduce_to_K(d, eta, DEFAULT_MAX_ITER).unwrap();
        prop_assert!(idle.is_empty());
        prop_assert_eq!(&same, eta);
        let (_, back) = reduce_to_K(d, &dot_act(d, &w, eta).unwrap(), DEFAULT_MAX_ITER).unwrap();
        prop_assert!(dist_inf(&back, eta) < 1e-9);
    }

    /// The line through a normalized root and an isotropic point meets the
    /// isotropic cone exactly in that point and its reflection.
    #[test]
    fn lines_through_normalized_roots(k in 0usize..5, pick in any::<prop::sample::Index>()) {
        let (d, x) = &k_points()[k];
        let slice = generate_roots(d, 4).unwrap();
        let alpha = slice.get(pick.index(slice.len()));
        let ax = d.form(alpha.coords(), x);
        prop_assume!(ax.abs() > 1e-6);
        let a = normalize(alpha.coords()).unwrap();
        // q(t) = ((1 - t) â + t x, same) = A t² + B t + C.
        let (aa, ab) = (d.form(&a, &a), d.form(&a, x));
        let (qa, qb, qc) = (aa - 2.0 * ab, 2.0 * ab - 2.0 * aa, aa);
        let disc = qb * qb - 4.0 * qa * qc;
        prop_assert!(disc > 0.0);
        let mut pts: Vec<Vec<f64>> = [(-qb + disc.sqrt()) / (2.0 * qa), (-qb - disc.sqrt()) / (2.0 * qa)]
            .iter()
            .map(|t| a.iter().zip(x).map(|(u, v)| (1.0 - t) * u + t * v).collect())
            .collect();
        let image = dot_act(d, &Word::identity(), &coxeter_limits::reflect(d, alpha, x).unwrap()).unwrap();
        pts.sort_by(|p, q| dist(p, x).total_cmp(&dist(q, x)));
        prop_assert!(dist(&pts[0], x) < 1e-9);
        prop_assert!(dist(&pts[1], &image) < 1e-7);
    }

    #[test]
    fn canonical_output_satisfies_the_criterion(
        d in infinite_datum(),
        picks in prop::collection::vec(any::<prop::sample::Index>(), 3),
    ) {
        let slice = generate_roots(&d, 4).unwrap();
        let delta: Vec<Root> = picks.iter().map(|p| slice.get(p.index(slice.len())).clone()).collect();
        let set = canonicalize(&d, &delta, 64).unwrap();
        prop_assert!(set.is_canonical(1e-7));
    }

    /// `x dom y` is invariant under the group and reversed by negation.
    #[test]
    fn dominance_is_invariant(d in infinite_datum(), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>(), w in word(5, 4)) {
        let slice = generate_roots(&d, 4).unwrap();
        let (x, y) = (slice.get(i.index(slice.len())), slice.get(j.index(slice.len())));
        let v = dominance_between(&d, x, y, 12);
        prop_assume!(v.certified && v.relation == Relation::FirstDominates);
        let w = Word::new(w.letters().iter().map(|&s| s % d.rank()).collect());
        let wx = Root::from_coords(&d, act(&d, &w, x.coords())).unwrap();
        let wy = Root::from_coords(&d, act(&d, &w, y.coords())).unwrap();
        let moved = dominance_between(&d, &wx, &wy, 12);
        prop_assert_eq!(moved.relation, Relation::FirstDominates);
        let neg = dominance_between(&d, &y.negated(), &x.negated(), 12);
        prop_assert_eq!(neg.relation, Relation::FirstDominates);
    }
}

/// For `M = {a, b} ⊎ {d, e}` the Gram kernel is the sum of the component
/// kernels.
#[test]
fn radical_splits_over_components() {
    let d = corpus::bridged_affine_pair();
    let idx = [0usize, 1, 3, 4];
    let g = DMatrix::from_fn(4, 4, |i, j| d.gram(idx[i], idx[j]));
    let svd = g.clone().svd(false, true);
    let null = svd.singular_values.iter().filter(|s| s.abs() < 1e-9).count();
    assert_eq!(null, 2);
    for comp in [SimpleSubset::from([0, 1]), SimpleSubset::from([3, 4])] {
        let k = classify_parabolic(&d, &comp).unwrap().kernel_vector.unwrap();
        let sub: Vec<f64> = idx.iter().map(|&i| k[i]).collect();
        let gk = &g * nalgebra::DVector::from_vec(sub);
        assert!(gk.amax() < 1e-12);
    }
    assert_eq!(classify_parabolic(&d, &SimpleSubset::from(idx)).unwrap_err().to_string(),
        "the Coxeter graph restricted to [0, 1, 3, 4] is disconnected");
}

/// Limit roots of the affine standard parabolics are approached by the
/// computed clusters.
#[test]
fn affine_limits_are_accumulation_points() {
    let cases = [
        (corpus::bridged_affine_pair(), vec![0.5, 0.5, 0.0, 0.0, 0.0]),
        (corpus::bridged_affine_pair(), vec![0.0, 0.0, 0.0, 0.5, 0.5]),
        (corpus::affine_a2(), vec![1.0 / 3.0; 3]),
        (corpus::affine_a1(), vec![0.5, 0.5]),
    ];
    for (d, eta) in &cases {
        let ty = classify_parabolic(d, &coxeter_limits::support(eta, 1e-9)).unwrap();
        assert_eq!(ty.tag, ParabolicTag::Affine);
        let clusters = approx_limit_roots(d, 10, 0, 1e-2).unwrap();
        let near = clusters.iter().map(|c| dist(&c.center, eta)).fold(f64::INFINITY, f64::min);
        assert!(near <= 1e-2, "{eta:?} is {near} from every cluster");
    }
}

/// Cluster centers are close to the isotropic cone. Exponential growth caps
/// the depth for the rank-3 triangles and the rank-5 chain.
#[test]
fn cluster_centers_are_nearly_isotropic() {
    let cases = [
        (corpus::affine_a1(), 20),
        (corpus::affine_a2(), 20),
        (corpus::infinite_dihedral(-1.5), 20),
        (corpus::hyperbolic_triangle(-1.0), 11),
        (corpus::hyperbolic_triangle(-1.01), 11),
        (corpus::bridged_affine_pair(), 12),
    ];
    for (d, depth) in &cases {
        let clusters = approx_limit_roots(d, *depth, 0, 1e-2).unwrap();
        assert!(!clusters.is_empty());
        for c in &clusters {
            assert!(c.isotropy_defect < 0.05, "{:?} has |(c,c)| = {}", c.center, c.isotropy_defect);
        }
    }
}
