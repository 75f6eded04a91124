//! Static circle diagram with labeled fixed points.

use std::f64::consts::TAU;
use std::fmt::Write;

use circlerig::homeo::{classify, DynClass};
use circlerig::representation::Representation;
use circlerig::surface::Word;

const SIZE: f64 = 480.0;
const RADIUS: f64 = 170.0;

/// Labeled fixed points of the given words, sorted by angle.
pub fn labeled_points(rep: &Representation, words: &[Word]) -> anyhow::Result<Vec<(String, f64)>> {
    let mut pts = Vec::new();
    for w in words {
        let c = classify(&rep.evaluate_word(w)?, rep.tol())?;
        match &c {
            DynClass::Hyperbolic { attracting, repelling } => {
                pts.push((format!("{}+", w), attracting.angle()));
                pts.push((format!("{}-", w), repelling.angle()));
            }
            other => {
                for (k, p) in other.fixed_points().iter().enumerate() {
                    pts.push((format!("{}#{}", w, k + 1), p.angle()));
                }
            }
        }
    }
    pts.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    Ok(pts)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('\'', "&#39;")
}

/// Counterclockwise from the positive x-axis, so angle 0 is on the right.
pub fn render(points: &[(String, f64)]) -> String {
    let c = SIZE / 2.0;
    let at = |turns: f64, r: f64| (c + r * (TAU * turns).cos(), c - r * (TAU * turns).sin());
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r##"<circle cx="{c}" cy="{c}" r="{RADIUS}" fill="none" stroke="#000" stroke-width="1.5"/>"##);
    for (label, t) in points {
        let (x0, y0) = at(*t, RADIUS - 6.0);
        let (x1, y1) = at(*t, RADIUS + 6.0);
        let (lx, ly) = at(*t, RADIUS + 24.0);
        let anchor = if (TAU * t).cos() > 0.3 {
            "start"
        } else if (TAU * t).cos() < -0.3 {
            "end"
        } else {
            "middle"
        };
        let colour = if label.ends_with('+') { "#b2182b" } else { "#2166ac" };
        let _ = writeln!(
            s,
            r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y1:.2}" stroke="{colour}" stroke-width="2"/>"#
        );
        let _ = writeln!(
            s,
            r#"<text x="{lx:.2}" y="{ly:.2}" text-anchor="{anchor}" dominant-baseline="middle">{}</text>"#,
            escape(label)
        );
    }
    let order: Vec<&str> = points.iter().map(|p| p.0.as_str()).collect();
    let _ = writeln!(
        s,
        r#"<text x="8" y="{:.2}" font-size="10">ccw from 0: {}</text>"#,
        SIZE - 10.0,
        escape(&order.join(", "))
    );
    s.push_str("</svg>\n");
    s
}
