//! SVG rendering of regions and tilings. Lozenges are drawn as rhombi with
//! one fill per lattice direction; removed holes are shaded dark.

use crate::cell::TriCell;
use crate::count::Matching;
use crate::graph::DualGraph;
use crate::region::{build_hexagon, Region};

const SQRT3: f64 = 1.732_050_807_568_877_2;
const UNIT: f64 = 36.0;
const MARGIN: f64 = 18.0;

fn to_xy(p: (f64, f64)) -> (f64, f64) {
    (UNIT * (p.0 + p.1 / 2.0), -UNIT * p.1 * SQRT3 / 2.0)
}

fn corners_xy(cell: &TriCell) -> [(f64, f64); 3] {
    let cs = cell.corners();
    [0, 1, 2].map(|i| to_xy((cs[i].0 as f64, cs[i].1 as f64)))
}

struct Canvas {
    body: String,
    min_x: f64,
    min_y: f64,
    max_x: f64,
    max_y: f64,
}

impl Canvas {
    fn new() -> Canvas {
        Canvas {
            body: String::new(),
            min_x: f64::INFINITY,
            min_y: f64::INFINITY,
            max_x: f64::NEG_INFINITY,
            max_y: f64::NEG_INFINITY,
        }
    }

    fn polygon(&mut self, pts: &[(f64, f64)], fill: &str, stroke: &str, width: f64) {
        for &(x, y) in pts {
            self.min_x = self.min_x.min(x);
            self.min_y = self.min_y.min(y);
            self.max_x = self.max_x.max(x);
            self.max_y = self.max_y.max(y);
        }
        let points: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        self.body.push_str(&format!(
            "  <polygon points=\"{}\" fill=\"{}\" stroke=\"{}\" stroke-width=\"{:.2}\"/>\n",
            points.join(" "),
            fill,
            stroke,
            width
        ));
    }

    fn finish(self) -> String {
        let w = self.max_x - self.min_x + 2.0 * MARGIN;
        let h = self.max_y - self.min_y + 2.0 * MARGIN;
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
             viewBox=\"{:.2} {:.2} {:.2} {:.2}\" width=\"{:.0}\" height=\"{:.0}\">\n{}</svg>\n",
            self.min_x - MARGIN,
            self.min_y - MARGIN,
            w,
            h,
            w,
            h,
            self.body
        )
    }
}

/// The rhombus covering two adjacent cells: the union of their corners.
fn rhombus_xy(a: &TriCell, b: &TriCell) -> [(f64, f64); 4] {
    let mut pts: Vec<(i64, i64)> = a.corners().to_vec();
    for p in b.corners() {
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    debug_assert_eq!(pts.len(), 4);
    // order around the centroid
    let cx = pts.iter().map(|p| p.0 as f64).sum::<f64>() / 4.0;
    let cy = pts.iter().map(|p| p.1 as f64).sum::<f64>() / 4.0;
    pts.sort_by(|p, q| {
        let ap = (p.1 as f64 - cy).atan2(p.0 as f64 - cx);
        let aq = (q.1 as f64 - cy).atan2(q.0 as f64 - cx);
        ap.partial_cmp(&aq).unwrap()
    });
    [0, 1, 2, 3].map(|i| to_xy((pts[i].0 as f64, pts[i].1 as f64)))
}

/// Fill color by lozenge direction: the difference of the two cells' rows
/// and columns determines which of the three rhombus orientations this is.
fn rhombus_fill(a: &TriCell, b: &TriCell) -> &'static str {
    let (up, down) = if a.orient == crate::cell::Orientation::Up {
        (a, b)
    } else {
        (b, a)
    };
    if down.row == up.row && down.col == up.col {
        "#8dd3c7"
    } else if down.row == up.row {
        "#ffffb3"
    } else {
        "#bebada"
    }
}

/// Render a region, shading the removed hole cells, with an optional tiling
/// overlay.
pub fn render_svg(region: &Region, tiling: Option<(&DualGraph, &Matching)>) -> String {
    let mut canvas = Canvas::new();

    // hole shading: cells of the bounding hexagon missing from the region
    if let Some(p) = region.params() {
        let hexagon = build_hexagon(p.x, p.y, p.z);
        for cell in hexagon.cells() {
            if !region.contains(cell) {
                canvas.polygon(&corners_xy(cell), "#555555", "#333333", 0.8);
            }
        }
    }

    match tiling {
        None => {
            for cell in region.cells() {
                canvas.polygon(&corners_xy(cell), "#f4f4f4", "#999999", 0.8);
            }
        }
        Some((graph, matching)) => {
            for &e in matching.edges() {
                let (u, v) = graph.endpoints(e);
                let a = graph.cell(u).expect("embedded graph");
                let b = graph.cell(v).expect("embedded graph");
                canvas.polygon(&rhombus_xy(&a, &b), rhombus_fill(&a, &b), "#333333", 1.6);
            }
        }
    }

    canvas.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::sample_symmetric_matching;
    use crate::region::carve_bowtie;

    #[test]
    fn region_svg_is_well_formed() {
        let region = carve_bowtie(8, 10, 6, 2).unwrap();
        let svg = render_svg(&region, None);
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        // 368 cells plus 8 hole cells
        assert_eq!(svg.matches("<polygon").count(), 376);
    }

    #[test]
    fn tiling_overlay_draws_rhombi() {
        let region = carve_bowtie(4, 4, 4, 2).unwrap();
        let graph = DualGraph::from_region(&region);
        let m = sample_symmetric_matching(&graph).unwrap().unwrap();
        let svg = render_svg(&region, Some((&graph, &m)));
        // one rhombus per matched pair plus the hole shading
        assert_eq!(svg.matches("<polygon").count(), region.len() / 2 + 8);
    }
}
