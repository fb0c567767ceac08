use std::fmt::Write;

use super::{PlanePoint, RegionCurves};

const ARC_IDS: [&str; 3] = ["edge_arc_12", "edge_arc_13", "edge_arc_23"];

fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.12}")
    } else {
        "nan".to_string()
    }
}

/// Columns `curve_id,phi,r,x,y`; gaps are rows of `nan`.
pub fn to_csv(region: &RegionCurves) -> String {
    let mut out = String::from("curve_id,phi,r,x,y\n");
    let mut row = |id: &str, phi: f64, r: f64, p: PlanePoint| {
        let _ = writeln!(out, "{id},{},{},{},{}", num(phi), num(r), num(p.x), num(p.y));
    };
    for p in &region.vertex_triangle.points {
        let (r, phi) = p.polar();
        row("vertex_triangle", phi, r, *p);
    }
    for (arc, id) in region.edge_arcs.iter().zip(ARC_IDS) {
        for p in &arc.points {
            row(id, p.phi, p.r, p.point());
        }
    }
    for p in &region.hessian_circle.points {
        let (r, phi) = p.polar();
        row("hessian_circle", phi, r, *p);
    }
    for p in &region.cp_boundary {
        row("cp_boundary", p.phi, p.r, p.point());
    }
    out
}

const SIZE: f64 = 600.0;
const MARGIN: f64 = 40.0;

struct Frame {
    scale: f64,
}

impl Frame {
    fn new(region: &RegionCurves) -> Self {
        let mut extent: f64 = 0.0;
        let mut see = |p: PlanePoint| {
            if p.is_finite() {
                extent = extent.max(p.x.abs()).max(p.y.abs());
            }
        };
        region.vertex_triangle.points.iter().for_each(|p| see(*p));
        region.edge_arcs.iter().flat_map(|a| &a.points).for_each(|p| see(p.point()));
        region.hessian_circle.points.iter().for_each(|p| see(*p));
        region.cp_boundary.iter().for_each(|p| see(p.point()));
        if extent <= 0.0 {
            extent = 1.0;
        }
        Self {
            scale: (SIZE / 2.0 - MARGIN) / extent,
        }
    }

    fn map(&self, p: PlanePoint) -> (f64, f64) {
        (SIZE / 2.0 + self.scale * p.x, SIZE / 2.0 - self.scale * p.y)
    }
}

// Splits at non-finite points so gaps are never bridged.
fn polylines(out: &mut String, frame: &Frame, pts: impl Iterator<Item = PlanePoint>) {
    let mut run: Vec<(f64, f64)> = Vec::new();
    let flush = |run: &mut Vec<(f64, f64)>, out: &mut String| {
        if !run.is_empty() {
            let coords: Vec<String> = run.iter().map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
            let _ = writeln!(out, "    <polyline points=\"{}\"/>", coords.join(" "));
            run.clear();
        }
    };
    for p in pts {
        if p.is_finite() {
            run.push(frame.map(p));
        } else {
            flush(&mut run, out);
        }
    }
    flush(&mut run, out);
}

/// Standalone SVG, one `<g>` per curve family. The CP family is omitted
/// when empty.
pub fn to_svg(region: &RegionCurves) -> String {
    let frame = Frame::new(region);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {SIZE} {SIZE}\" width=\"{SIZE}\" height=\"{SIZE}\">"
    );
    let _ = writeln!(
        out,
        "  <title>a = {}, b = {}, c = {}</title>",
        region.a, region.b, region.c
    );
    let _ = writeln!(out, "  <rect width=\"{SIZE}\" height=\"{SIZE}\" fill=\"white\"/>");

    let mut families: Vec<(&str, &str, &str)> = vec![
        ("vertex-triangle", "blue", "vertex conditions"),
        ("edge-arcs", "red", "edge conditions"),
        ("hessian-circle", "green", "Hessian condition"),
    ];
    if !region.cp_boundary.is_empty() {
        families.push(("cp-boundary", "black", "complete positivity"));
    }

    for &(id, colour, _) in &families {
        let _ = writeln!(
            out,
            "  <g id=\"{id}\" fill=\"none\" stroke=\"{colour}\" stroke-width=\"1.5\">"
        );
        match id {
            "vertex-triangle" => polylines(&mut out, &frame, region.vertex_triangle.points.iter().copied()),
            "edge-arcs" => {
                for arc in &region.edge_arcs {
                    polylines(&mut out, &frame, arc.points.iter().map(|p| p.point()));
                }
            }
            "hessian-circle" => polylines(&mut out, &frame, region.hessian_circle.points.iter().copied()),
            _ => polylines(&mut out, &frame, region.cp_boundary.iter().map(|p| p.point())),
        }
        let _ = writeln!(out, "  </g>");
    }

    let _ = writeln!(out, "  <g id=\"legend\" font-family=\"sans-serif\" font-size=\"12\">");
    for (k, &(_, colour, label)) in families.iter().enumerate() {
        let y = 20.0 + 16.0 * k as f64;
        let _ = writeln!(
            out,
            "    <line x1=\"10\" y1=\"{:.3}\" x2=\"30\" y2=\"{:.3}\" stroke=\"{colour}\" stroke-width=\"2\"/>",
            y - 4.0,
            y - 4.0
        );
        let _ = writeln!(out, "    <text x=\"36\" y=\"{y:.3}\">{label}</text>");
    }
    let _ = writeln!(out, "  </g>");
    for (k, w) in region.warnings.iter().enumerate() {
        let _ = writeln!(
            out,
            "  <text class=\"warning\" x=\"10\" y=\"{:.3}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"darkred\">{}</text>",
            SIZE - 10.0 - 16.0 * k as f64,
            w.replace('&', "&amp;").replace('<', "&lt;")
        );
    }
    out.push_str("</svg>\n");
    out
}
