//! SVG rendering of placement maps and tours.
//!
//! The region maps onto an 800-unit-wide viewport with preserved aspect
//! ratio and a fixed margin; the y axis is flipped so north is up.
//! Facilities draw as squares, customers as circles, assignments as purple
//! edges whose stroke width scales with the served fraction, and tours as a
//! closed polyline. The output is self-contained XML with no external
//! references.

use crate::instance::{FlpInstance, FlpSolution, Point2D};

const VIEW_WIDTH: f64 = 800.0;
const MARGIN: f64 = 40.0;
/// Assignment edges thinner than this fraction are omitted.
pub const EDGE_THRESHOLD: f64 = 1e-6;

/// What to draw on top of the instance marks.
pub enum Overlay<'a> {
    None,
    Assignment(&'a FlpSolution),
    Tour(&'a [usize]),
}

struct Viewport {
    scale: f64,
    x_min: f64,
    y_max: f64,
    width: f64,
    height: f64,
}

impl Viewport {
    fn for_instance(inst: &FlpInstance) -> Self {
        let region = inst.region;
        let scale = (VIEW_WIDTH - 2.0 * MARGIN) / region.width();
        Self {
            scale,
            x_min: region.x_min,
            y_max: region.y_max,
            width: VIEW_WIDTH,
            height: region.height() * scale + 2.0 * MARGIN,
        }
    }

    fn map(&self, p: Point2D) -> (f64, f64) {
        (
            MARGIN + (p.x - self.x_min) * self.scale,
            MARGIN + (self.y_max - p.y) * self.scale,
        )
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.3}")
}

/// Renders the instance and overlay to an SVG document string.
pub fn render_svg(inst: &FlpInstance, overlay: Overlay<'_>) -> String {
    let view = Viewport::for_instance(inst);
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" \
         viewBox=\"0 0 {w} {h}\">\n",
        w = fmt(view.width),
        h = fmt(view.height),
    ));
    svg.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>\n",
        fmt(view.width),
        fmt(view.height)
    ));
    svg.push_str(&format!(
        "  <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" \
         stroke=\"#888888\" stroke-width=\"1\"/>\n",
        fmt(MARGIN),
        fmt(MARGIN),
        fmt(view.width - 2.0 * MARGIN),
        fmt(view.height - 2.0 * MARGIN)
    ));

    match overlay {
        Overlay::None => {}
        Overlay::Assignment(solution) => {
            svg.push_str("  <g stroke=\"#9467bd\" stroke-opacity=\"0.8\">\n");
            for (i, facility) in inst.facilities.iter().enumerate() {
                for (j, customer) in inst.customers.iter().enumerate() {
                    let y = solution.assign[i][j];
                    if y > EDGE_THRESHOLD {
                        let (x1, y1) = view.map(facility.location);
                        let (x2, y2) = view.map(customer.location);
                        svg.push_str(&format!(
                            "    <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" \
                             stroke-width=\"{}\"/>\n",
                            fmt(x1),
                            fmt(y1),
                            fmt(x2),
                            fmt(y2),
                            fmt(0.4 + 2.6 * y)
                        ));
                    }
                }
            }
            svg.push_str("  </g>\n");
        }
        Overlay::Tour(order) => {
            // Closed polyline: first vertex repeated at the end.
            let mut points = String::new();
            for &idx in order.iter().chain(order.first()) {
                let (x, y) = view.map(inst.facilities[idx].location);
                points.push_str(&format!("{},{} ", fmt(x), fmt(y)));
            }
            svg.push_str(&format!(
                "  <polyline points=\"{}\" fill=\"none\" stroke=\"#2ca02c\" \
                 stroke-width=\"1.5\"/>\n",
                points.trim_end()
            ));
        }
    }

    svg.push_str("  <g fill=\"#d62728\">\n");
    for f in &inst.facilities {
        let (x, y) = view.map(f.location);
        svg.push_str(&format!(
            "    <rect x=\"{}\" y=\"{}\" width=\"9\" height=\"9\"/>\n",
            fmt(x - 4.5),
            fmt(y - 4.5)
        ));
    }
    svg.push_str("  </g>\n  <g fill=\"#1f77b4\">\n");
    for c in &inst.customers {
        let (x, y) = view.map(c.location);
        svg.push_str(&format!(
            "    <circle cx=\"{}\" cy=\"{}\" r=\"3.5\"/>\n",
            fmt(x),
            fmt(y)
        ));
    }
    svg.push_str("  </g>\n</svg>\n");
    svg
}
