//! Subcommand implementations. Each writes a plain-text or JSON report.

use std::io::Write;

use coxeter_limits::dominance::partition_dn;
use coxeter_limits::limits::{
    approx_limit_roots, classify_limit_root, cluster_slice, normalize, Classification, LimitPoint,
    DEFAULT_ISO_TOLERANCE,
};
use coxeter_limits::subgroups::{
    affine_standard_parabolics, canonicalize, classify_parabolic, host_parabolic, CanonicalSet,
};
use coxeter_limits::{generate_roots, CoxeterDatum, Root, SimpleSubset};

use crate::record::{ClassificationRecord, ClusterRecord};
use crate::svg::{emit_svg, pca_text, PlotSpec, Projection};
use crate::{check, CliError, CliResult, Command};

pub(crate) fn fmt_vec(v: &[f64], sep: &str) -> String {
    v.iter().map(|x| format!("{:.6}", clean(*x))).collect::<Vec<_>>().join(sep)
}

/// Maps `-0.0` to `0.0` so that printed reports do not depend on the sign
/// of zero.
fn clean(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

fn names(d: &CoxeterDatum, s: &SimpleSubset) -> String {
    let parts: Vec<&str> = s.iter().map(|i| d.name(i)).collect();
    format!("{{{}}}", parts.join(", "))
}

pub fn dispatch(command: Command, out: &mut dyn Write) -> CliResult {
    match command {
        Command::Roots { source, depth } => roots(&source.load()?, depth, out),
        Command::Dominance {
            source,
            depth,
            search_len,
        } => dominance(&source.load()?, depth, search_len, out),
        Command::Subgroup {
            source,
            roots,
            depth,
            budget,
        } => subgroup(&source.load()?, &roots, depth, budget, out),
        Command::Parabolics { source } => parabolics(&source.load()?, out),
        Command::Limits {
            source,
            depth,
            min_depth,
            eps,
            json,
        } => limits(&source.load()?, depth, min_depth, eps, json, out),
        Command::Classify {
            source,
            point,
            depth,
            max_iter,
            json,
        } => classify(&source.load()?, &point, depth, max_iter, json, out),
        Command::Plot {
            source,
            depth,
            eps,
            projection,
            width,
            height,
            output,
        } => {
            let d = source.load()?;
            let slice = generate_roots(&d, depth)?;
            if !(eps > 0.0) {
                return Err(CliError::Usage("--eps must be positive".into()));
            }
            let clusters = cluster_slice(&d, &slice, depth.saturating_sub(1), eps);
            let spec = PlotSpec::for_slice(projection, &slice, width, height)?;
            let svg = emit_svg(&spec, &slice, &clusters);
            match output {
                Some(path) => {
                    std::fs::write(&path, svg)
                        .map_err(|e| CliError::Computation(format!("cannot write {}: {e}", path.display())))?;
                    if let Projection::Pca2 { mean, rows } = &spec.projection {
                        write!(out, "{}", pca_text(mean, rows))?;
                    }
                    writeln!(
                        out,
                        "wrote {} ({} roots, {} clusters)",
                        path.display(),
                        slice.len(),
                        clusters.len()
                    )?;
                }
                None => write!(out, "{svg}")?,
            }
            Ok(())
        }
        Command::Check { source, depth, list } => {
            if list {
                for (name, _) in coxeter_limits::corpus::all() {
                    writeln!(out, "{name}")?;
                }
                return Ok(());
            }
            let d = source.load()?;
            let report = check::run_suite(&d, depth)?;
            write!(out, "{report}")?;
            if report.failures() > 0 {
                return Err(CliError::Computation(format!("{} properties failed", report.failures())));
            }
            Ok(())
        }
    }
}

/// `depth \t coords \t word \t simple`, one positive root per line.
fn roots(d: &CoxeterDatum, depth: usize, out: &mut dyn Write) -> CliResult {
    let slice = generate_roots(d, depth)?;
    for (i, r) in slice.iter().enumerate() {
        let (word, simple) = match r.witness() {
            Some(w) => (w.word.to_string(), w.simple.to_string()),
            None => (String::new(), String::new()),
        };
        writeln!(out, "{}\t{}\t{}\t{}", slice.depth_of(i), fmt_vec(r.coords(), " "), word, simple)?;
    }
    Ok(())
}

fn dominance(d: &CoxeterDatum, depth: usize, search_len: usize, out: &mut dyn Write) -> CliResult {
    let slice = generate_roots(d, depth)?;
    let part = partition_dn(d, &slice, search_len);
    writeln!(out, "n\tsize\tstable\troots")?;
    for (n, members) in &part.classes {
        let stable = members.iter().filter(|&&i| part.stable[i]).count();
        let ids: Vec<String> = members.iter().map(usize::to_string).collect();
        writeln!(out, "{n}\t{}\t{stable}\t{}", members.len(), ids.join(" "))?;
    }
    writeln!(out, "dominance pairs: {}", part.edges.len())?;
    writeln!(out, "uncertified pairs: {}", part.uncertified.len())?;
    for (x, y) in &part.uncertified {
        writeln!(out, "{x}\t{y}")?;
    }
    Ok(())
}

/// Name of the dihedral group generated by two canonical roots with
/// pairing `v`.
fn dihedral_type(v: f64, tol: f64) -> String {
    if v <= -1.0 - tol {
        format!("infinite (c = {v:.6})")
    } else if v <= -1.0 + tol {
        "affine".into()
    } else {
        let m = (std::f64::consts::PI / (-v).clamp(-1.0, 1.0).acos()).round() as u64;
        format!("finite (m = {m})")
    }
}

fn subgroup(d: &CoxeterDatum, picks: &[usize], depth: usize, budget: usize, out: &mut dyn Write) -> CliResult {
    let slice = generate_roots(d, depth)?;
    let delta: Vec<Root> = picks
        .iter()
        .map(|&i| {
            (i < slice.len())
                .then(|| slice.get(i).clone())
                .ok_or_else(|| CliError::Usage(format!("root index {i} out of range, slice has {} roots", slice.len())))
        })
        .collect::<CliResult<_>>()?;
    let set = canonicalize(d, &delta, budget)?;
    writeln!(out, "canonical generators: {}", set.len())?;
    for (i, r) in set.roots().iter().enumerate() {
        writeln!(out, "{i}\t{}", fmt_vec(r.coords(), " "))?;
    }
    writeln!(out, "i\tj\tvalue\ttype")?;
    let tol = 100.0 * d.tolerance();
    for i in 0..set.len() {
        for j in i + 1..set.len() {
            let v = set.value(i, j);
            writeln!(out, "{i}\t{j}\t{:.6}\t{}", clean(v), dihedral_type(v, tol))?;
            if v.abs() <= 1.0 + tol && v <= -1.0 + tol {
                let pair = CanonicalSet::new(d, vec![set.roots()[i].clone(), set.roots()[j].clone()]);
                if let Ok((w, host)) = host_parabolic(d, &pair, coxeter_limits::limits::DEFAULT_MAX_ITER) {
                    writeln!(out, "\thost {} via [{}]", names(d, &host), w)?;
                }
            }
        }
    }
    Ok(())
}

fn parabolics(d: &CoxeterDatum, out: &mut dyn Write) -> CliResult {
    let list = affine_standard_parabolics(d)?;
    writeln!(out, "affine standard parabolics: {}", list.len())?;
    for m in &list {
        let ty = classify_parabolic(d, m)?;
        let k = ty.kernel_vector.unwrap_or_default();
        writeln!(out, "{}\t{}", names(d, m), fmt_vec(&k, " "))?;
    }
    Ok(())
}

fn describe(d: &CoxeterDatum, c: &Classification) -> String {
    match c {
        Classification::AffineLimit { host, reducer } => {
            format!("affine limit of {} via [{}]", names(d, host), reducer)
        }
        Classification::AffTypeSum {
            components,
            weights,
            reducer,
        } => {
            let parts: Vec<String> = components
                .iter()
                .zip(weights)
                .map(|(m, w)| format!("{w:.6}·{}", names(d, m)))
                .collect();
            format!("affine-type sum {} via [{}]", parts.join(" + "), reducer)
        }
        Classification::NonAffineType => "non-affine type".into(),
        Classification::Unresolved => "unresolved".into(),
    }
}

fn limits(d: &CoxeterDatum, depth: usize, min_depth: usize, eps: f64, json: bool, out: &mut dyn Write) -> CliResult {
    let clusters = approx_limit_roots(d, depth, min_depth, eps)?;
    let slice = generate_roots(d, depth)?;
    let classified: Vec<Option<LimitPoint>> = clusters
        .iter()
        .map(|c| {
            (c.isotropy_defect <= DEFAULT_ISO_TOLERANCE)
                .then(|| classify_limit_root(d, &c.center, &slice, coxeter_limits::limits::DEFAULT_MAX_ITER).ok())
                .flatten()
        })
        .collect();
    if json {
        let records: Vec<ClusterRecord> = clusters
            .iter()
            .zip(&classified)
            .map(|(c, p)| ClusterRecord::new(c, p.as_ref()))
            .collect();
        let text = serde_json::to_string_pretty(&records).map_err(|e| CliError::Computation(e.to_string()))?;
        writeln!(out, "{text}")?;
        return Ok(());
    }
    writeln!(out, "clusters: {}", clusters.len())?;
    writeln!(out, "center\tsize\tradius\tisotropy defect\tclass")?;
    for (c, p) in clusters.iter().zip(&classified) {
        let class = p.as_ref().map_or_else(|| "-".to_string(), |p| describe(d, &p.classification));
        writeln!(
            out,
            "{}\t{}\t{:.2e}\t{:.2e}\t{}",
            fmt_vec(&c.center, " "),
            c.members.len(),
            c.radius,
            c.isotropy_defect,
            class
        )?;
    }
    Ok(())
}

fn classify(
    d: &CoxeterDatum,
    point: &[f64],
    depth: usize,
    max_iter: usize,
    json: bool,
    out: &mut dyn Write,
) -> CliResult {
    if point.len() != d.rank() {
        return Err(CliError::Usage(format!(
            "--point has {} coordinates, the datum has rank {}",
            point.len(),
            d.rank()
        )));
    }
    let eta = normalize(point)?;
    let slice = generate_roots(d, depth)?;
    let p = classify_limit_root(d, &eta, &slice, max_iter)?;
    if json {
        let text = serde_json::to_string_pretty(&ClassificationRecord::from(&p))
            .map_err(|e| CliError::Computation(e.to_string()))?;
        writeln!(out, "{text}")?;
        return Ok(());
    }
    writeln!(out, "coords\t{}", fmt_vec(&p.coords, " "))?;
    writeln!(out, "classification\t{}", describe(d, &p.classification))?;
    writeln!(
        out,
        "pos\t{}{}",
        p.pos_estimate.count,
        if p.pos_estimate.stabilized { "" } else { " (growing)" }
    )?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dihedral_types() {
        assert_eq!(dihedral_type(-1.0, 1e-7), "affine");
        assert_eq!(dihedral_type(-1.5, 1e-7), "infinite (c = -1.500000)");
        assert_eq!(dihedral_type(-(std::f64::consts::PI / 5.0).cos(), 1e-7), "finite (m = 5)");
        assert_eq!(dihedral_type(0.0, 1e-7), "finite (m = 2)");
    }

    #[test]
    fn negative_zero_prints_as_zero() {
        assert_eq!(fmt_vec(&[-0.0, 0.5], " "), "0.000000 0.500000");
    }
}
