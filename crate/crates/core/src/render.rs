//! CSV and SVG output. Decimal values here are for display only.

use std::fmt::Write as _;

use crate::linalg::{format_rational, to_decimal, to_f64, Rational};
use crate::parametric::ParametricPath;
use crate::shadow::{Point2, Shadow};

pub const POLYGON_CSV_HEADER: &str = "k,y1_exact,y2_exact,y1_dec,y2_dec,preimage_codes";
pub const PATH_CSV_HEADER: &str = "k,lambda_exact,lambda_dec,code,vertex";

/// One row per hull vertex. `labels[i]` names input vertex `i`; preimages
/// are joined with `;`.
pub fn polygon_csv(shadow: &Shadow, labels: &[String], digits: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{POLYGON_CSV_HEADER}");
    for (k, (w, pre)) in shadow
        .polygon
        .vertices
        .iter()
        .zip(&shadow.preimages)
        .enumerate()
    {
        let names: Vec<&str> = pre.iter().map(|&i| labels[i].as_str()).collect();
        let _ = writeln!(
            out,
            "{k},{},{},{},{},{}",
            format_rational(&w.y1),
            format_rational(&w.y2),
            to_decimal(&w.y1, digits),
            to_decimal(&w.y2, digits),
            names.join(";")
        );
    }
    out
}

/// One row per path vertex; `lambda_k` is the breakpoint at which vertex `k`
/// becomes optimal (`-inf` for `k = 0`). Coordinates are `;`-separated.
pub fn path_csv(path: &ParametricPath, digits: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{PATH_CSV_HEADER}");
    for (k, step) in path.steps.iter().enumerate() {
        let (exact, dec) = if k == 0 {
            ("-inf".to_string(), "-inf".to_string())
        } else {
            let l = &path.pivots[k - 1].lambda;
            (format_rational(l), to_decimal(l, digits))
        };
        let code = step
            .code
            .as_ref()
            .map(ToString::to_string)
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{k},{exact},{dec},{code},{}",
            format_coords(&step.vertex)
        );
    }
    out
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 40.0;

/// Scales each axis independently onto the viewport; the Klee-Minty shadows
/// are many orders of magnitude thinner in `y1` than in `y2`.
struct Viewport {
    min: (f64, f64),
    span: (f64, f64),
}

impl Viewport {
    fn fit(points: &[&Point2]) -> Self {
        let xs: Vec<f64> = points.iter().map(|p| to_f64(&p.y1)).collect();
        let ys: Vec<f64> = points.iter().map(|p| to_f64(&p.y2)).collect();
        let range = |v: &[f64]| {
            let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let span = if hi > lo { hi - lo } else { 1.0 };
            (lo, span)
        };
        let (x0, xs) = range(&xs);
        let (y0, ys) = range(&ys);
        Viewport {
            min: (x0, y0),
            span: (xs, ys),
        }
    }

    fn map(&self, p: &Point2) -> (f64, f64) {
        let x = MARGIN + (to_f64(&p.y1) - self.min.0) / self.span.0 * (WIDTH - 2.0 * MARGIN);
        let y =
            HEIGHT - MARGIN - (to_f64(&p.y2) - self.min.1) / self.span.1 * (HEIGHT - 2.0 * MARGIN);
        (x, y)
    }
}

fn point_list(view: &Viewport, points: &[Point2]) -> String {
    points
        .iter()
        .map(|p| {
            let (x, y) = view.map(p);
            format!("{x:.3},{y:.3}")
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Polygon outline with vertex dots, optionally overlaid with the polyline
/// through `path`.
pub fn shadow_svg(polygon: &[Point2], path: Option<&[Point2]>) -> String {
    let all: Vec<&Point2> = polygon.iter().chain(path.unwrap_or(&[])).collect();
    let view = Viewport::fit(&all);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let tag = if polygon.len() >= 3 {
        "polygon"
    } else {
        "polyline"
    };
    let _ = writeln!(
        out,
        r##"<{tag} points="{}" fill="#dde8f4" stroke="#1f4e79" stroke-width="1.5"/>"##,
        point_list(&view, polygon)
    );
    if let Some(path) = path {
        let _ = writeln!(
            out,
            r##"<polyline points="{}" fill="none" stroke="#c0392b" stroke-width="1" stroke-dasharray="4 3"/>"##,
            point_list(&view, path)
        );
    }
    for p in polygon {
        let (x, y) = view.map(p);
        let _ = writeln!(
            out,
            r##"<circle cx="{x:.3}" cy="{y:.3}" r="3" fill="#1f4e79"/>"##
        );
    }
    let _ = writeln!(out, "</svg>");
    out
}

/// Labels for input vertices: their index.
pub fn index_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// Exact coordinates joined with `;`.
pub fn format_coords(x: &[Rational]) -> String {
    x.iter().map(format_rational).collect::<Vec<_>>().join(";")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};
    use crate::parametric::gass_saaty_path;
    use crate::polytope::{make_box, Basis, BoxBounds};
    use crate::shadow::{shadow_of_vertices, ProjectionPair};

    #[test]
    fn polygon_csv_rows() {
        let pp = ProjectionPair::new(vec![int(1), int(0)], vec![int(0), rat(1, 3)]).unwrap();
        let corners = BoxBounds::unit_cube(2).corners();
        let shadow = shadow_of_vertices(&pp, &corners).unwrap();
        let labels: Vec<String> = ["00", "10", "01", "11"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let csv = polygon_csv(&shadow, &labels, 4);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], POLYGON_CSV_HEADER);
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[1], "0,0,0,0,0,00");
        assert_eq!(lines[3], "2,1,1/3,1,0.3333,11");
    }

    #[test]
    fn path_csv_rows() {
        let p = make_box(&BoxBounds::new(vec![int(0)], vec![int(1)]).unwrap());
        let path = gass_saaty_path(&p, &[int(1)], &[int(1)], &Basis::new(vec![0])).unwrap();
        assert_eq!(
            path_csv(&path, 12),
            format!("{PATH_CSV_HEADER}\n0,-inf,-inf,,0\n1,-1,-1,,1\n")
        );
    }

    #[test]
    fn svg_contains_shapes() {
        let pts = vec![
            Point2::new(int(0), int(0)),
            Point2::new(int(1), int(0)),
            Point2::new(int(0), int(1)),
        ];
        let svg = shadow_svg(&pts, Some(&pts[..2]));
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("<polygon"));
        assert!(svg.contains("<polyline"));
        assert_eq!(svg.matches("<circle").count(), 3);
        assert!(svg.contains("40.000,560.000"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}
