//! Self-contained SVG pictures of diagrams, ladders and critical values.

use std::f64::consts::TAU;
use std::fmt::Write;

use num_complex::Complex64 as C;

use crate::braid::BandLetter;
use crate::ladder::{path_points, LadderDiagram, LadderPath, PassCertificate};
use crate::polyloop::{arg_rates, CriticalData};
use crate::rampichini::Diagram;

const POS: &str = "#1f5fbf";
const NEG: &str = "#c0392b";
const FONT: &str = "font-family=\"sans-serif\"";

fn open(w: f64, h: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
         <rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n"
    )
}

fn label(l: BandLetter, x: f64, y: f64, colour: &str) -> String {
    let (i, j) = l.pair();
    let exp = if l.is_positive() {
        String::new()
    } else {
        "<tspan dy=\"-9\" font-size=\"8\">−1</tspan>".to_string()
    };
    format!(
        "<text x=\"{x:.1}\" y=\"{y:.1}\" {FONT} font-size=\"12\" fill=\"{colour}\">a<tspan dy=\"4\" font-size=\"9\">{i},{j}</tspan>{exp}</text>\n"
    )
}

/// The fundamental square with `φ` to the right and `t` upwards. Rising
/// curves are blue, falling ones red, and every piece carries its label.
pub fn diagram_svg(d: &Diagram) -> String {
    let (size, m) = (480.0, 48.0);
    let x = |phi: f64| m + phi / TAU * size;
    let y = |t: f64| m + (1.0 - t) * size;
    let mut s = open(size + 2.0 * m, size + 2.0 * m);
    let _ = writeln!(
        s,
        "<rect x=\"{m}\" y=\"{m}\" width=\"{size}\" height=\"{size}\" fill=\"none\" stroke=\"black\"/>"
    );
    for (text, px, py) in [
        ("0", m - 4.0, m + size + 16.0),
        ("2π", m + size - 8.0, m + size + 16.0),
        ("φ", m + size / 2.0, m + size + 32.0),
        ("1", m - 16.0, m + 4.0),
        ("t", m - 32.0, m + size / 2.0),
    ] {
        let _ = writeln!(s, "<text x=\"{px}\" y=\"{py}\" {FONT} font-size=\"13\">{text}</text>");
    }
    for p in d.pieces() {
        let colour = if d.curves[p.curve].sign > 0 { POS } else { NEG };
        let _ = writeln!(
            s,
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"{colour}\" stroke-width=\"2\"/>",
            x(p.from.0),
            y(p.from.1),
            x(p.to.0),
            y(p.to.1)
        );
        let (mx, my) = ((p.from.0 + p.to.0) / 2.0, (p.from.1 + p.to.1) / 2.0);
        s.push_str(&label(p.label, x(mx) + 4.0, y(my) - 4.0, colour));
    }
    for c in &d.crossings {
        let _ = writeln!(
            s,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"black\"/>",
            x(c.phi.rem_euclid(TAU)),
            y(c.t.rem_euclid(1.0))
        );
    }
    for e in &d.edge_crossings {
        let _ = writeln!(
            s,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"none\" stroke=\"black\"/>",
            x(e.phi.rem_euclid(TAU)),
            y(0.0)
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Vertical lines `1 … n` with one rung per letter, bottom to top; the
/// overpass is drawn in green and the underpass in orange.
pub fn ladder_svg(d: &LadderDiagram, passes: Option<&PassCertificate>) -> String {
    let (dx, dy, m) = (60.0, 16.0, 40.0);
    let top = d.top() as f64 + 1.0;
    let w = 2.0 * m + dx * (d.n.max(2) - 1) as f64;
    let h = 2.0 * m + dy * top;
    let x = |line: usize| m + dx * (line as f64 - 1.0);
    let y = |half: f64| h - m - dy * half;
    let mut s = open(w, h);
    for line in 1..=d.n {
        let _ = writeln!(
            s,
            "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n\
             <text x=\"{3}\" y=\"{4}\" {FONT} font-size=\"12\">{line}</text>",
            x(line),
            y(0.0),
            y(top),
            x(line) - 4.0,
            h - m + 16.0
        );
    }
    for (r, rung) in d.rungs.iter().enumerate() {
        let yy = y(LadderDiagram::height(r) as f64);
        let colour = if rung.sign > 0 { POS } else { NEG };
        let _ = writeln!(
            s,
            "<line x1=\"{}\" y1=\"{yy}\" x2=\"{}\" y2=\"{yy}\" stroke=\"{colour}\" stroke-width=\"3\"/>",
            x(rung.left),
            x(rung.right)
        );
        let l = BandLetter::new(rung.left, rung.right, rung.sign).expect("rung letters are valid");
        s.push_str(&label(l, x(rung.left) + 4.0, yy - 4.0, colour));
    }
    if let Some(c) = passes {
        let path = |p: &LadderPath, colour: &str, off: f64| {
            let pts: Vec<String> = path_points(d, p)
                .iter()
                .map(|&(l, hh)| format!("{:.1},{:.1}", x(l) + off, y(hh as f64)))
                .collect();
            format!(
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{colour}\" stroke-width=\"2\" stroke-dasharray=\"5,3\"/>\n",
                pts.join(" ")
            )
        };
        s.push_str(&path(&c.overpass, "#2e8b57", -3.0));
        s.push_str(&path(&c.underpass, "#e67e22", 3.0));
    }
    s.push_str("</svg>\n");
    s
}

/// Critical value trajectories in the plane around the origin, each
/// annotated with its winding number about 0.
pub fn critical_values_svg(cd: &CriticalData) -> String {
    let (size, m) = (480.0, 40.0);
    let reach = cd
        .values
        .iter()
        .flatten()
        .map(|v| v.norm())
        .fold(1e-9, f64::max)
        * 1.1;
    let to = |v: C| (m + size / 2.0 * (1.0 + v.re / reach), m + size / 2.0 * (1.0 - v.im / reach));
    let mut s = open(size + 2.0 * m, size + 2.0 * m);
    let (ox, oy) = to(C::new(0.0, 0.0));
    let _ = writeln!(
        s,
        "<line x1=\"{m}\" y1=\"{oy}\" x2=\"{}\" y2=\"{oy}\" stroke=\"#999\"/>\n\
         <line x1=\"{ox}\" y1=\"{m}\" x2=\"{ox}\" y2=\"{}\" stroke=\"#999\"/>\n\
         <circle cx=\"{ox}\" cy=\"{oy}\" r=\"3\" fill=\"black\"/>",
        m + size,
        m + size
    );
    let dt = TAU / cd.m as f64;
    let palette = ["#1f5fbf", "#c0392b", "#2e8b57", "#8e44ad", "#e67e22", "#16a085"];
    for (j, (vals, rates)) in cd.values.iter().zip(arg_rates(cd)).enumerate() {
        let colour = palette[j % palette.len()];
        let mut pts: Vec<String> = vals
            .iter()
            .map(|&v| {
                let (px, py) = to(v);
                format!("{px:.2},{py:.2}")
            })
            .collect();
        let (px, py) = to(cd.values[cd.wrap[j]][0]);
        pts.push(format!("{px:.2},{py:.2}"));
        let winding = rates.iter().sum::<f64>() * dt / TAU;
        let (lx, ly) = to(vals[0]);
        let _ = writeln!(
            s,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{colour}\" stroke-width=\"1.5\"/>\n\
             <text x=\"{:.1}\" y=\"{:.1}\" {FONT} font-size=\"12\" fill=\"{colour}\">v{} winds {winding:+.3}</text>",
            pts.join(" "),
            lx + 6.0,
            ly - 6.0,
            j + 1
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ladder::ladder_from_word;

    #[test]
    fn ladder_picture_has_one_rung_per_letter() {
        let d = ladder_from_word(&"n=3; 1:2 -2:3".parse().unwrap());
        let svg = ladder_svg(&d, None);
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("stroke-width=\"3\"").count(), 2);
        assert!(!svg.contains("href"));
    }
}
