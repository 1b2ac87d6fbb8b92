//! Minimal SVG plots: the domain, sampled points colored by label and the
//! reference boundary.

use std::fmt::Write;

use epsedge_core::{Domain, Label, Point2, ReferenceBoundary};

const WIDTH: f64 = 720.0;
const MARGIN: f64 = 24.0;
const INTERIOR: &str = "#1b7837";
const EXTERIOR: &str = "#b2182b";

struct Frame {
    domain: Domain,
    scale: f64,
}

impl Frame {
    fn new(domain: Domain) -> Self {
        Self {
            domain,
            scale: (WIDTH - 2.0 * MARGIN) / domain.width(),
        }
    }

    fn height(&self) -> f64 {
        self.domain.height() * self.scale + 2.0 * MARGIN
    }

    fn map(&self, p: Point2) -> (f64, f64) {
        (
            MARGIN + (p.x - self.domain.x_min) * self.scale,
            MARGIN + (self.domain.y_max - p.y) * self.scale,
        )
    }
}

pub fn render(
    title: &str,
    domain: Domain,
    points: &[(Point2, Label)],
    reference: Option<&ReferenceBoundary>,
) -> String {
    let frame = Frame::new(domain);
    let height = frame.height();
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height:.1}" viewBox="0 0 {WIDTH} {height:.1}">"#
    );
    let _ = writeln!(s, "<title>{}</title>", escape(title));
    let (x0, y0) = frame.map(Point2::new(domain.x_min, domain.y_max));
    let _ = writeln!(
        s,
        r#"<rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}" fill="white" stroke="black" stroke-width="1"/>"#,
        domain.width() * frame.scale,
        domain.height() * frame.scale
    );
    if let Some(r) = reference {
        for line in r.polylines() {
            let mut d = String::new();
            for (k, &p) in line.points.iter().enumerate() {
                let (x, y) = frame.map(p);
                let _ = write!(d, "{}{x:.2},{y:.2}", if k == 0 { "M" } else { " L" });
            }
            if line.closed {
                d.push_str(" Z");
            }
            let _ = writeln!(
                s,
                r##"<path d="{d}" fill="none" stroke="#4d4d4d" stroke-width="1"/>"##
            );
        }
    }
    let radius = (1.5f64).max(0.2 * frame.scale * domain.diagonal() / 500.0);
    for (label, color) in [(true, INTERIOR), (false, EXTERIOR)] {
        let _ = writeln!(s, r#"<g fill="{color}">"#);
        for &(p, _) in points.iter().filter(|(_, l)| *l == label) {
            let (x, y) = frame.map(p);
            let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="{radius:.2}"/>"#);
        }
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
