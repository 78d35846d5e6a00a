//! Invariant suite behind the `check` subcommand.

use std::fmt;

use coxeter_limits::dominance::{dominance_between, DominanceVerdict, Relation, DEFAULT_SEARCH_LEN};
use coxeter_limits::limits::{
    affine_limit_root, cluster_slice, dot_act, in_K, normalize, reduce_to_K, DEFAULT_CLUSTER_EPS, DEFAULT_MAX_ITER,
};
use coxeter_limits::subgroups::{affine_standard_parabolics, canonicalize, classify_parabolic, DEFAULT_CLOSURE_BUDGET};
use coxeter_limits::vector::{dist, dist_inf, unit};
use coxeter_limits::{act, descent, generate_roots, CoxeterDatum, Root, RootSlice, Word};

use crate::CliResult;

/// Depth cap for the quadratic pair checks.
const PAIR_DEPTH: usize = 4;
/// Roots fed pairwise to `canonicalize`.
const CANONICAL_ROOTS: usize = 10;
/// Word length of the orbit in the minimality probe.
const PROBE_LEN: usize = 6;
const CLUSTER_DEFECT: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    /// Reported only; never counted as a failure.
    Info,
}

#[derive(Debug, Clone)]
pub struct Line {
    pub name: &'static str,
    pub outcome: Outcome,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub lines: Vec<Line>,
}

impl Report {
    fn push(&mut self, name: &'static str, ok: bool, detail: String) {
        let outcome = if ok { Outcome::Pass } else { Outcome::Fail };
        self.lines.push(Line { name, outcome, detail });
    }

    pub fn failures(&self) -> usize {
        self.lines.iter().filter(|l| l.outcome == Outcome::Fail).count()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            let tag = match l.outcome {
                Outcome::Pass => "PASS",
                Outcome::Fail => "FAIL",
                Outcome::Info => "INFO",
            };
            writeln!(f, "{tag}\t{}\t{}", l.name, l.detail)?;
        }
        Ok(())
    }
}

/// Every root-level, dominance, subgroup and limit property on one datum.
pub fn run_suite(d: &CoxeterDatum, depth: usize) -> CliResult<Report> {
    let slice = generate_roots(d, depth)?;
    let mut report = Report::default();
    root_checks(d, &slice, &mut report);
    let small = generate_roots(d, depth.min(PAIR_DEPTH))?;
    dominance_checks(d, &small, &mut report);
    subgroup_checks(d, &small, &mut report)?;
    limit_checks(d, &slice, &mut report)?;
    Ok(report)
}

fn root_checks(d: &CoxeterDatum, slice: &RootSlice, report: &mut Report) {
    let tol = d.tolerance();
    let worst = slice
        .iter()
        .map(|r| (d.form(r.coords(), r.coords()) - 1.0).abs())
        .fold(0.0, f64::max);
    report.push("unit roots", worst <= 1e3 * tol, format!("{} roots, max |(x,x)-1| = {worst:.1e}", slice.len()));

    let negative = slice.iter().filter(|r| r.coords().iter().any(|&x| x < -tol)).count();
    report.push("positivity", negative == 0, format!("{negative} roots with a negative coordinate"));

    let outside = slice
        .iter()
        .filter_map(|r| normalize(r.coords()).ok())
        .filter(|p| (p.iter().sum::<f64>() - 1.0).abs() > tol || p.iter().any(|&x| !(-tol..=1.0 + tol).contains(&x)))
        .count();
    report.push("normalized roots in the simplex", outside == 0, format!("{outside} outside"));

    let mut bad_witness = 0;
    let mut bad_depth = 0;
    for (i, r) in slice.iter().enumerate() {
        match r.witness() {
            Some(w) => {
                let back = act(d, &w.word, &unit(d.rank(), w.simple));
                if dist_inf(&back, r.coords()) > 1e-9 * (1.0 + coxeter_limits::vector::max_abs(r.coords())) {
                    bad_witness += 1;
                }
            }
            None => bad_witness += 1,
        }
        if descent(d, r.coords(), 100_000).map(|w| w.word.len()) != Some(slice.depth_of(i)) {
            bad_depth += 1;
        }
    }
    report.push("witnesses realize roots", bad_witness == 0, format!("{bad_witness} mismatches"));
    report.push("descent length equals depth", bad_depth == 0, format!("{bad_depth} mismatches"));

    let mut missing = 0;
    for (i, r) in slice.iter().enumerate() {
        if slice.depth_of(i) >= slice.max_depth() {
            continue;
        }
        for s in 0..d.rank() {
            let mut v = r.coords().to_vec();
            d.reflect_simple_in_place(s, &mut v);
            let is_neg_simple = dist_inf(&v, &coxeter_limits::vector::neg(&unit(d.rank(), s))) < 1e-9;
            if !is_neg_simple && slice.find(&v).is_none() {
                missing += 1;
            }
        }
    }
    report.push("closure under simple reflections", missing == 0, format!("{missing} images missing"));
}

fn dominance_checks(d: &CoxeterDatum, slice: &RootSlice, report: &mut Report) {
    let tol = d.tolerance();
    let roots = slice.roots();
    let n = roots.len();
    let mut verdicts: Vec<Vec<Option<DominanceVerdict>>> = vec![vec![None; n]; n];
    let mut criterion = 0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let v = dominance_between(d, &roots[i], &roots[j], DEFAULT_SEARCH_LEN);
            let comparable = d.form(roots[i].coords(), roots[j].coords()) >= 1.0 - tol;
            if (v.relation != Relation::None) != comparable {
                criterion += 1;
            }
            verdicts[i][j] = Some(v);
        }
    }
    report.push("dominance iff pairing at least one", criterion == 0, format!("{} ordered pairs, {criterion} violations", n * n.saturating_sub(1)));

    let dom = |i: usize, j: usize| {
        verdicts[i][j]
            .as_ref()
            .is_some_and(|v| v.certified && v.relation == Relation::FirstDominates)
    };
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| dom(i, j))
        .collect();

    let mut negation = 0;
    let mut invariance = 0;
    for &(i, j) in &edges {
        let v = dominance_between(d, &roots[j].negated(), &roots[i].negated(), DEFAULT_SEARCH_LEN);
        if v.relation != Relation::FirstDominates {
            negation += 1;
        }
        for s in 0..d.rank() {
            let w = Word::new(vec![s]);
            let moved = |r: &Root| Root::from_coords(d, act(d, &w, r.coords()));
            let (Ok(x), Ok(y)) = (moved(&roots[i]), moved(&roots[j])) else {
                invariance += 1;
                continue;
            };
            if dominance_between(d, &x, &y, DEFAULT_SEARCH_LEN).relation != Relation::FirstDominates {
                invariance += 1;
            }
        }
    }
    report.push("negation reverses dominance", negation == 0, format!("{} certified pairs, {negation} violations", edges.len()));
    report.push("dominance is invariant", invariance == 0, format!("{invariance} violations"));

    let g = |i: usize, j: usize| d.form(roots[i].coords(), roots[j].coords());
    let mut chain = 0;
    for &(a, b) in &edges {
        for &(b2, c) in &edges {
            if b2 != b {
                continue;
            }
            if g(a, c) < g(b, c) - tol || g(a, b) > g(a, c) + tol {
                chain += 1;
            }
        }
    }
    report.push("chain inequalities", chain == 0, format!("{chain} violations"));

    let mut propagation = 0;
    for &(x, a) in &edges {
        for b in 0..n {
            if g(a, b) <= -1.0 && g(x, b) > -1.0 + tol {
                propagation += 1;
            }
        }
    }
    report.push("propagation below minus one", propagation == 0, format!("{propagation} violations"));
}

fn subgroup_checks(d: &CoxeterDatum, slice: &RootSlice, report: &mut Report) -> CliResult {
    let roots = &slice.roots()[..slice.len().min(CANONICAL_ROOTS)];
    let mut bad = 0;
    let mut failed = 0;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            match canonicalize(d, &[roots[i].clone(), roots[j].clone()], DEFAULT_CLOSURE_BUDGET) {
                Ok(set) if set.is_canonical(100.0 * d.tolerance()) => {}
                Ok(_) => bad += 1,
                Err(_) => failed += 1,
            }
        }
    }
    report.push(
        "canonical pairs satisfy the criterion",
        bad == 0 && failed == 0,
        format!("{bad} violations, {failed} budget failures"),
    );

    let list = affine_standard_parabolics(d)?;
    let mut bad_kernel = 0;
    for m in &list {
        let k = classify_parabolic(d, m)?.kernel_vector.unwrap_or_default();
        let null = m.iter().all(|i| d.pair_simple(&k, i).abs() < 1e-9);
        let positive = m.iter().all(|i| k[i] > d.tolerance());
        if !(null && positive) {
            bad_kernel += 1;
        }
    }
    report.push("affine kernels are positive null vectors", bad_kernel == 0, format!("{} affine parabolics", list.len()));
    Ok(())
}

fn words(rank: usize, max_len: usize) -> Vec<Word> {
    let mut all = vec![Word::identity()];
    let mut layer = vec![Word::identity()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| {
                (0..rank)
                    .filter(|&s| w.letters().first() != Some(&s))
                    .map(|s| w.prepend(s))
                    .collect::<Vec<_>>()
            })
            .collect();
        all.extend(layer.iter().cloned());
    }
    all
}

fn limit_checks(d: &CoxeterDatum, slice: &RootSlice, report: &mut Report) -> CliResult {
    let mut fixed = 0;
    let mut tested = 0;
    let parabolics = affine_standard_parabolics(d)?;
    for m in &parabolics {
        let eta = affine_limit_root(d, m)?.coords;
        if !in_K(d, &eta) {
            continue;
        }
        for w in words(d.rank(), 3) {
            tested += 1;
            let moved = dot_act(d, &w, &eta)?;
            match reduce_to_K(d, &moved, DEFAULT_MAX_ITER) {
                Ok((_, back)) if dist_inf(&back, &eta) < 1e-9 => {}
                _ => fixed += 1,
            }
        }
    }
    report.push("reduction returns the fundamental point", fixed == 0, format!("{tested} images, {fixed} misses"));

    let clusters = cluster_slice(d, slice, slice.max_depth().saturating_sub(1), DEFAULT_CLUSTER_EPS);
    let worst = clusters.iter().map(|c| c.isotropy_defect).fold(0.0, f64::max);
    report.push(
        "cluster centers are nearly isotropic",
        worst < CLUSTER_DEFECT,
        format!("{} clusters, max |(c,c)| = {worst:.1e}", clusters.len()),
    );

    if let Some(first) = clusters.first() {
        let orbit: Vec<Vec<f64>> = words(d.rank(), PROBE_LEN)
            .iter()
            .filter_map(|w| dot_act(d, w, &first.center).ok())
            .collect();
        let far = clusters
            .iter()
            .filter(|c| orbit.iter().all(|p| dist(p, &c.center) > DEFAULT_CLUSTER_EPS))
            .count();
        report.lines.push(Line {
            name: "minimality probe",
            outcome: Outcome::Info,
            detail: format!("{far} of {} centers missed by the orbit of the first", clusters.len()),
        });
    }
    Ok(())
}
