//! SVG pictures of normalized roots.

use std::fmt::Write as _;

use coxeter_limits::limits::{normalize, Cluster};
use coxeter_limits::{CoxeterDatum, RootSlice};
use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::{CliError, CliResult, ProjectionArg};

const MARGIN: f64 = 24.0;
const CONE_SAMPLES: usize = 720;
const ROOT_RADIUS: f64 = 2.0;
const CROSS_HALF: f64 = 6.0;

/// Linear map from `V₁` to the picture plane.
#[derive(Debug, Clone, PartialEq)]
pub enum Projection {
    /// Rank 2: `V₁` is a segment, drawn horizontally.
    Coords2,
    /// Rank 3: `V₁` is a triangle, drawn equilateral.
    Barycentric3,
    /// Principal components of the normalized roots: `rows · (x - mean)`.
    Pca2 { mean: Vec<f64>, rows: [Vec<f64>; 2] },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layers {
    pub roots: bool,
    pub clusters: bool,
    /// Only drawn for the barycentric projection.
    pub cone: bool,
}

impl Default for Layers {
    fn default() -> Self {
        Layers {
            roots: true,
            clusters: true,
            cone: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub projection: Projection,
    pub width: u32,
    pub height: u32,
    pub layers: Layers,
}

impl PlotSpec {
    /// Resolves the requested projection against the rank of the slice.
    pub fn for_slice(arg: ProjectionArg, slice: &RootSlice, width: u32, height: u32) -> CliResult<PlotSpec> {
        let rank = slice.datum().rank();
        let projection = match (arg, rank) {
            (ProjectionArg::Auto, 2) | (ProjectionArg::Coords2, 2) => Projection::Coords2,
            (ProjectionArg::Auto, 3) | (ProjectionArg::Barycentric3, 3) => Projection::Barycentric3,
            (ProjectionArg::Auto, _) | (ProjectionArg::Pca2, _) if rank >= 3 => pca(&normalized(slice)),
            _ => {
                return Err(CliError::Usage(format!(
                    "projection {arg:?} does not apply to rank {rank}"
                )))
            }
        };
        Ok(PlotSpec {
            projection,
            width,
            height,
            layers: Layers::default(),
        })
    }

    fn plane(&self, p: &[f64]) -> (f64, f64) {
        match &self.projection {
            Projection::Coords2 => (p[1], 0.5),
            Projection::Barycentric3 => (p[1] + 0.5 * p[2], p[2] * 3f64.sqrt() / 2.0),
            Projection::Pca2 { mean, rows } => {
                let dot = |r: &[f64]| r.iter().zip(p).zip(mean).map(|((a, x), m)| a * (x - m)).sum::<f64>();
                (dot(&rows[0]), dot(&rows[1]))
            }
        }
    }
}

fn normalized(slice: &RootSlice) -> Vec<Vec<f64>> {
    slice.iter().filter_map(|r| normalize(r.coords()).ok()).collect()
}

/// First two principal axes of a point cloud. Each axis is signed so its
/// largest entry is positive.
pub fn pca(points: &[Vec<f64>]) -> Projection {
    let n = points.first().map_or(0, Vec::len);
    let count = points.len().max(1) as f64;
    let mut mean = vec![0.0; n];
    for p in points {
        for (m, x) in mean.iter_mut().zip(p) {
            *m += x / count;
        }
    }
    let mut cov = DMatrix::zeros(n, n);
    for p in points {
        let c = DVector::from_iterator(n, p.iter().zip(&mean).map(|(x, m)| x - m));
        cov += &c * c.transpose() / count;
    }
    let eig = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let axis = |k: usize| -> Vec<f64> {
        let mut v: Vec<f64> = eig.eigenvectors.column(order[k]).iter().copied().collect();
        let lead = v.iter().copied().fold(0.0f64, |a, x| if x.abs() > a.abs() { x } else { a });
        if lead < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        v
    };
    Projection::Pca2 {
        mean,
        rows: [axis(0), axis(1)],
    }
}

/// Points of `{x ∈ V₁ : (x, x) = 0}` inside the simplex, as polylines.
///
/// Rays from the barycenter are intersected with the conic; each of the two
/// intersection branches is cut wherever it leaves the simplex.
pub fn cone_trace(d: &CoxeterDatum) -> Vec<Vec<Vec<f64>>> {
    if d.rank() != 3 {
        return Vec::new();
    }
    let g = vec![1.0 / 3.0; 3];
    let e1 = [1.0 / 2f64.sqrt(), -1.0 / 2f64.sqrt(), 0.0];
    let e2 = [1.0 / 6f64.sqrt(), 1.0 / 6f64.sqrt(), -2.0 / 6f64.sqrt()];
    let qg = d.form(&g, &g);
    let mut branches: [Vec<Vec<Vec<f64>>>; 2] = [vec![Vec::new()], vec![Vec::new()]];
    for k in 0..=CONE_SAMPLES {
        let th = std::f64::consts::TAU * k as f64 / CONE_SAMPLES as f64;
        let u: Vec<f64> = (0..3).map(|i| th.cos() * e1[i] + th.sin() * e2[i]).collect();
        let (a, b) = (d.form(&u, &u), d.form(&g, &u));
        let disc = b * b - a * qg;
        let mut ts: Vec<f64> = Vec::new();
        if a.abs() > 1e-12 && disc >= 0.0 {
            ts.extend([(-b - disc.sqrt()) / a, (-b + disc.sqrt()) / a]);
        } else if a.abs() <= 1e-12 && b.abs() > 1e-12 {
            ts.push(-qg / (2.0 * b));
        }
        ts.retain(|&t| t > 1e-6);
        ts.sort_by(f64::total_cmp);
        for (slot, branch) in branches.iter_mut().enumerate() {
            let point = ts
                .get(slot)
                .map(|t| (0..3).map(|i| g[i] + t * u[i]).collect::<Vec<f64>>())
                .filter(|p| p.iter().all(|&x| x >= -1e-9));
            match point {
                Some(p) => branch.last_mut().expect("nonempty").push(p),
                None if !branch.last().expect("nonempty").is_empty() => branch.push(Vec::new()),
                None => {}
            }
        }
    }
    branches.into_iter().flatten().filter(|l| l.len() > 1).collect()
}

/// The mean and the two projection rows, one per line.
pub fn pca_text(mean: &[f64], rows: &[Vec<f64>; 2]) -> String {
    let fmt = |v: &[f64]| crate::commands::fmt_vec(v, " ");
    format!("mean {}\nrow0 {}\nrow1 {}\n", fmt(mean), fmt(&rows[0]), fmt(&rows[1]))
}

/// `#rrggbb` along a blue to red ramp.
fn ramp(t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    let (r, g, b) = (40.0 + 200.0 * t, 80.0 + 60.0 * (1.0 - (2.0 * t - 1.0).abs()), 220.0 - 190.0 * t);
    format!("#{:02x}{:02x}{:02x}", r.round() as u8, g.round() as u8, b.round() as u8)
}

/// Renders the slice and clusters. The output depends only on the inputs.
pub fn emit_svg(spec: &PlotSpec, slice: &RootSlice, clusters: &[Cluster]) -> String {
    let d = slice.datum();
    let (w, h) = (spec.width as f64, spec.height as f64);
    let frame: Vec<Vec<f64>> = match spec.projection {
        Projection::Coords2 => vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        Projection::Barycentric3 => (0..3).map(|i| coxeter_limits::vector::unit(3, i)).collect(),
        Projection::Pca2 { .. } => {
            let mut pts = normalized(slice);
            pts.extend(clusters.iter().map(|c| c.center.clone()));
            pts
        }
    };
    let plane: Vec<(f64, f64)> = frame.iter().map(|p| spec.plane(p)).collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &plane {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (-1.0, 1.0, -1.0, 1.0);
    }
    let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let s = ((w - 2.0 * MARGIN).min(h - 2.0 * MARGIN)) / span;
    let px = |p: &[f64]| {
        let (x, y) = spec.plane(p);
        (w / 2.0 + s * (x - cx), h / 2.0 - s * (y - cy))
    };

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        spec.width, spec.height, spec.width, spec.height
    );
    if let Projection::Pca2 { mean, rows } = &spec.projection {
        let _ = writeln!(out, "<desc>{}</desc>", pca_text(mean, rows).trim_end().replace('\n', "; "));
    }
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);

    let _ = writeln!(out, r#"<g id="axes" stroke="gray" fill="none" stroke-width="1">"#);
    match spec.projection {
        Projection::Coords2 => {
            let (a, b) = (px(&[1.0, 0.0]), px(&[0.0, 1.0]));
            let _ = writeln!(out, r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#, a.0, a.1, b.0, b.1);
        }
        Projection::Barycentric3 => {
            let pts: Vec<String> = (0..3)
                .map(|i| {
                    let (x, y) = px(&coxeter_limits::vector::unit(3, i));
                    format!("{x:.3},{y:.3}")
                })
                .collect();
            let _ = writeln!(out, r#"<polygon points="{}"/>"#, pts.join(" "));
        }
        Projection::Pca2 { .. } => {
            let _ = writeln!(out, r#"<line x1="{m:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#, h / 2.0, w - MARGIN, h / 2.0, m = MARGIN);
            let _ = writeln!(out, r#"<line x1="{:.3}" y1="{m:.3}" x2="{:.3}" y2="{:.3}"/>"#, w / 2.0, w / 2.0, h - MARGIN, m = MARGIN);
        }
    }
    let _ = writeln!(out, "</g>");

    if spec.layers.cone && spec.projection == Projection::Barycentric3 {
        let _ = writeln!(out, r#"<g id="cone" stroke="dimgray" fill="none" stroke-width="1" stroke-dasharray="3,3">"#);
        for line in cone_trace(d) {
            let pts: Vec<String> = line
                .iter()
                .map(|p| {
                    let (x, y) = px(p);
                    format!("{x:.3},{y:.3}")
                })
                .collect();
            let _ = writeln!(out, r#"<polyline points="{}"/>"#, pts.join(" "));
        }
        let _ = writeln!(out, "</g>");
    }

    if spec.layers.roots {
        let _ = writeln!(out, r#"<g id="roots" stroke="none">"#);
        let top = slice.max_depth().max(1) as f64;
        for (i, r) in slice.iter().enumerate() {
            let Ok(p) = normalize(r.coords()) else { continue };
            let (x, y) = px(&p);
            let depth = slice.depth_of(i);
            let _ = writeln!(
                out,
                r#"<circle cx="{x:.3}" cy="{y:.3}" r="{ROOT_RADIUS}" fill="{}" data-depth="{depth}"/>"#,
                ramp(depth as f64 / top)
            );
        }
        let _ = writeln!(out, "</g>");
    }

    if spec.layers.clusters {
        let _ = writeln!(out, r#"<g id="clusters" stroke="black" stroke-width="1.5">"#);
        for c in clusters {
            let (x, y) = px(&c.center);
            let _ = writeln!(
                out,
                r#"<path class="cluster" d="M{:.3},{:.3}L{:.3},{:.3}M{:.3},{:.3}L{:.3},{:.3}"/>"#,
                x - CROSS_HALF,
                y - CROSS_HALF,
                x + CROSS_HALF,
                y + CROSS_HALF,
                x - CROSS_HALF,
                y + CROSS_HALF,
                x + CROSS_HALF,
                y - CROSS_HALF
            );
        }
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use coxeter_limits::{corpus, generate_roots};

    #[test]
    fn empty_slice_draws_axes_only() {
        let slice = generate_roots(&corpus::hyperbolic_triangle(-1.0), 0).unwrap();
        let mut spec = PlotSpec::for_slice(ProjectionArg::Auto, &slice, 200, 200).unwrap();
        spec.layers.roots = false;
        let svg = emit_svg(&spec, &slice, &[]);
        assert!(svg.starts_with("<?xml"));
        assert!(svg.contains("<polygon"));
        assert!(!svg.contains("<circle"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn projection_must_fit_rank() {
        let slice = generate_roots(&corpus::affine_a1(), 2).unwrap();
        assert!(PlotSpec::for_slice(ProjectionArg::Barycentric3, &slice, 100, 100).is_err());
        assert!(PlotSpec::for_slice(ProjectionArg::Pca2, &slice, 100, 100).is_err());
        let spec = PlotSpec::for_slice(ProjectionArg::Auto, &slice, 100, 100).unwrap();
        assert_eq!(spec.projection, Projection::Coords2);
    }

    #[test]
    fn cone_of_the_triangle_is_a_closed_curve() {
        let d = corpus::hyperbolic_triangle(-1.0);
        let lines = cone_trace(&d);
        assert!(!lines.is_empty());
        for p in lines.iter().flatten() {
            assert!(d.form(p, p).abs() < 1e-9);
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        // The conic touches each edge at its midpoint.
        let near = |m: &[f64]| lines.iter().flatten().any(|p| coxeter_limits::vector::dist(p, m) < 1e-2);
        assert!(near(&[0.5, 0.5, 0.0]) && near(&[0.0, 0.5, 0.5]) && near(&[0.5, 0.0, 0.5]));
    }

    #[test]
    fn affine_cone_is_a_single_point() {
        assert!(cone_trace(&corpus::affine_a2()).is_empty());
    }

    #[test]
    fn pca_axes_are_orthonormal() {
        let slice = generate_roots(&corpus::bridged_affine_pair(), 5).unwrap();
        let Projection::Pca2 { rows, .. } = pca(&normalized(&slice)) else { unreachable!() };
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        assert!((dot(&rows[0], &rows[0]) - 1.0).abs() < 1e-12);
        assert!(dot(&rows[0], &rows[1]).abs() < 1e-12);
    }

    #[test]
    fn ramp_ends() {
        assert_eq!(ramp(0.0), "#2850dc");
        assert_eq!(ramp(1.0), "#f0501e");
    }
}
