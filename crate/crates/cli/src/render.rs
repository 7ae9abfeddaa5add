//! Hand-emitted SVG drawings of a solution.

use std::fmt::Write as _;

use multicover::geometry::dist;
use multicover::{Error, Instance, Result, Solution};

/// Longer side of the drawing in pixels.
pub const SIZE_PX: f64 = 800.0;
/// Separation segments are drawn for center pairs closer than this times `ell`.
pub const SEGMENT_FACTOR: f64 = 1.5;
const DOT_PX: f64 = 3.0;
const POINT_PX: f64 = 4.0;

/// Fixed three-decimal formatting without negative zero.
fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

pub fn check_match(inst: &Instance, sol: &Solution) -> Result<()> {
    if sol.instance != inst.name {
        return Err(Error::Validation {
            field: "instance",
            reason: format!("solution is for `{}`, instance is `{}`", sol.instance, inst.name),
        });
    }
    if let Some(j) = sol.assignment.iter().flatten().find(|&&j| j >= inst.n()) {
        return Err(Error::Validation {
            field: "assignment",
            reason: format!("point index {j} out of range for {} points", inst.n()),
        });
    }
    Ok(())
}

struct Frame {
    min_x: f64,
    max_y: f64,
    scale: f64,
    width: f64,
    height: f64,
}

impl Frame {
    fn fit(inst: &Instance, sol: &Solution) -> Frame {
        let mut lo = (f64::INFINITY, f64::INFINITY);
        let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        let mut grow = |x: f64, y: f64, r: f64| {
            lo = (lo.0.min(x - r), lo.1.min(y - r));
            hi = (hi.0.max(x + r), hi.1.max(y + r));
        };
        for p in &inst.points {
            grow(p.x, p.y, 0.0);
        }
        for d in &sol.disks {
            grow(d.center.x, d.center.y, d.radius);
        }
        let span = (hi.0 - lo.0).max(hi.1 - lo.1).max(1.0);
        let pad = 0.05 * span;
        let (w, h) = (hi.0 - lo.0 + 2.0 * pad, hi.1 - lo.1 + 2.0 * pad);
        let scale = SIZE_PX / w.max(h);
        Frame {
            min_x: lo.0 - pad,
            max_y: hi.1 + pad,
            scale,
            width: (w * scale).round(),
            height: (h * scale).round(),
        }
    }

    fn x(&self, x: f64) -> String {
        num((x - self.min_x) * self.scale)
    }

    fn y(&self, y: f64) -> String {
        num((self.max_y - y) * self.scale)
    }

    fn len(&self, r: f64) -> String {
        num(r * self.scale)
    }
}

/// Points are `<rect>` markers labeled with their requirement, every disk is
/// exactly one `<circle>` (a filled dot for radius 0), and with `ell` set
/// each pair of centers closer than `1.5 * ell` gets a gray `<line>` and its
/// distance.
pub fn render_svg(inst: &Instance, sol: &Solution, ell: Option<f64>) -> Result<String> {
    check_match(inst, sol)?;
    let f = Frame::fit(inst, sol);
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = num(f.width),
        h = num(f.height)
    );
    let _ = writeln!(
        s,
        "<title>{} {} {} objective {}</title>",
        escape(&sol.instance),
        escape(&sol.method),
        sol.status,
        sol.objective
    );
    let _ = writeln!(s, r#"<rect class="background" x="0" y="0" width="100%" height="100%" fill="white"/>"#);

    if let Some(ell) = ell {
        s.push_str("<g class=\"separation\" stroke=\"gray\" stroke-width=\"1\">\n");
        for i in 0..sol.disks.len() {
            for j in i + 1..sol.disks.len() {
                let (a, b) = (sol.disks[i].center, sol.disks[j].center);
                let d = dist(&a, &b);
                if d >= SEGMENT_FACTOR * ell {
                    continue;
                }
                let _ = writeln!(
                    s,
                    r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                    f.x(a.x),
                    f.y(a.y),
                    f.x(b.x),
                    f.y(b.y)
                );
                let mid = a.midpoint(&b);
                let _ = writeln!(
                    s,
                    r#"<text x="{}" y="{}" font-size="11" fill="gray" stroke="none">{:.2}</text>"#,
                    f.x(mid.x),
                    f.y(mid.y),
                    d
                );
            }
        }
        s.push_str("</g>\n");
    }

    s.push_str("<g class=\"disks\">\n");
    for d in &sol.disks {
        if d.radius > 0.0 {
            let _ = writeln!(
                s,
                r##"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="#1f77b4" stroke-width="1.5"/>"##,
                f.x(d.center.x),
                f.y(d.center.y),
                f.len(d.radius)
            );
        } else {
            let _ = writeln!(
                s,
                r##"<circle class="dot" cx="{}" cy="{}" r="{}" fill="#d62728"/>"##,
                f.x(d.center.x),
                f.y(d.center.y),
                num(DOT_PX)
            );
        }
    }
    s.push_str("</g>\n");

    s.push_str("<g class=\"points\">\n");
    for (p, k) in inst.points.iter().zip(&inst.kappa) {
        let px = (p.x - f.min_x) * f.scale;
        let py = (f.max_y - p.y) * f.scale;
        let _ = writeln!(
            s,
            r#"<rect x="{}" y="{}" width="{w}" height="{w}" fill="black"/>"#,
            num(px - POINT_PX / 2.0),
            num(py - POINT_PX / 2.0),
            w = num(POINT_PX)
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="10">{k}</text>"#,
            num(px + POINT_PX),
            num(py - POINT_PX)
        );
    }
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}
