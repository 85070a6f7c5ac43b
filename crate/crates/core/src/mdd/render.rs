use std::fmt::Write;

use super::Mdd;

const CELL: u64 = 20;

/// SVG drawing of a planar diagram, one square per cube, origin at the
/// bottom left.
pub fn render_svg(h: &Mdd) -> Option<String> {
    if h.source().degree() != 2 {
        return None;
    }
    let width = h.points().iter().map(|p| p[0] + 1).max().unwrap_or(1);
    let height = h.points().iter().map(|p| p[1] + 1).max().unwrap_or(1);
    let (w_px, h_px) = (width * CELL + 2, height * CELL + 2);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w_px}" height="{h_px}" viewBox="0 0 {w_px} {h_px}">"#
    );
    for p in h.points() {
        let x = 1 + p[0] * CELL;
        let y = 1 + (height - 1 - p[1]) * CELL;
        let fill = if p[0] == 0 && p[1] == 0 {
            "#f4a261"
        } else {
            "#a8dadc"
        };
        let _ = writeln!(
            out,
            r##"  <rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{fill}" stroke="#1d3557" stroke-width="1"/>"##
        );
    }
    out.push_str("</svg>\n");
    Some(out)
}

/// Per-layer text rendering of a 3-dimensional diagram: one grid per value
/// of the third coordinate, rows indexed by the second coordinate (top row
/// highest), `#` for a cube and `.` for empty.
pub fn render_layers(h: &Mdd) -> Option<String> {
    if h.source().degree() != 3 {
        return None;
    }
    let max = |i: usize| h.points().iter().map(|p| p[i]).max().unwrap_or(0);
    let (mx, my, mz) = (max(0), max(1), max(2));
    let mut out = String::new();
    for z in 0..=mz {
        let _ = writeln!(out, "z={z}");
        for y in (0..=my).rev() {
            let row: String = (0..=mx)
                .map(|x| if h.contains(&[x, y, z]) { '#' } else { '.' })
                .collect();
            let _ = writeln!(out, "{row}");
        }
    }
    Some(out)
}

/// CSV with one row per cube: coordinates, norm, and the group element.
pub fn render_points_csv(h: &Mdd) -> String {
    let d = h.source().degree();
    let mut out = String::new();
    let header: Vec<String> = (1..=d).map(|i| format!("a{i}")).collect();
    let _ = writeln!(out, "{},norm,element", header.join(","));
    for p in h.points() {
        let coords: Vec<String> = p.iter().map(ToString::to_string).collect();
        let elem = super::phi(h.source(), p)
            .map(|e| e.to_string())
            .unwrap_or_default();
        let _ = writeln!(out, "{},{},\"{}\"", coords.join(","), super::norm(p), elem);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::CayleyDigraph;
    use crate::mdd::build_mdd;

    #[test]
    fn svg_has_one_rect_per_cube() {
        let h = build_mdd(&CayleyDigraph::from_parts(&[7], &[&[1], &[2]]).unwrap()).unwrap();
        let svg = render_svg(&h).unwrap();
        assert_eq!(svg.matches("<rect").count(), 7);
        assert!(render_layers(&h).is_none());
    }

    #[test]
    fn layers_count_cubes() {
        let g = CayleyDigraph::from_parts(&[16], &[&[1], &[4], &[5]]).unwrap();
        let h = build_mdd(&g).unwrap();
        let text = render_layers(&h).unwrap();
        assert_eq!(text.matches('#').count(), 16);
        let csv = render_points_csv(&h);
        assert_eq!(csv.lines().count(), 17);
        assert!(csv.starts_with("a1,a2,a3,norm,element"));
    }
}
