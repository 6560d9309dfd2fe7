//! A static SVG chart of the color-count bounds against exact complexity as
//! functions of the number of classes `p`.

use std::fmt::Write;

use colorbound::rademacher::expected_abs_rademacher_sum;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;
const MAX_CURVE_POINTS: usize = 200;

/// Exact complexity of the most even split of `m` graphs into `p` classes.
pub fn most_uniform_exact(p: usize, m: usize) -> f64 {
    let (q, r) = (m / p, m % p);
    (r as f64 * expected_abs_rademacher_sum(q + 1) + (p - r) as f64 * expected_abs_rademacher_sum(q))
        / m as f64
}

/// Plots `sqrt(p/m)`, `sqrt(p/2m)` and the most-even exact value for
/// `p = 1..=m`, plus one labeled marker per `(name, p, exact)`.
pub fn bound_chart(m: usize, markers: &[(String, usize, f64)]) -> String {
    let m = m.max(1);
    let stride = m.div_ceil(MAX_CURVE_POINTS).max(1);
    let mut ps: Vec<usize> = (1..=m).step_by(stride).collect();
    if *ps.last().unwrap() != m {
        ps.push(m);
    }
    let x = |p: f64| {
        if m == 1 {
            MARGIN + (WIDTH - 2.0 * MARGIN) / 2.0
        } else {
            MARGIN + (p - 1.0) / (m as f64 - 1.0) * (WIDTH - 2.0 * MARGIN)
        }
    };
    let y = |v: f64| HEIGHT - MARGIN - v * (HEIGHT - 2.0 * MARGIN);
    let polyline = |f: &dyn Fn(usize) -> f64| {
        ps.iter()
            .map(|&p| format!("{:.2},{:.2}", x(p as f64), y(f(p))))
            .collect::<Vec<_>>()
            .join(" ")
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (x0, x1, y0, y1) = (x(1.0), x(m as f64), y(0.0), y(1.0));
    let _ = writeln!(out, r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y0:.2}" stroke="black"/>"#);
    let _ = writeln!(out, r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{y1:.2}" stroke="black"/>"#);
    let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">number of classes p (m = {m})</text>"#, (x0 + x1) / 2.0, HEIGHT - 15.0);
    for v in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{v:.2}</text>"#, x0 - 6.0, y(v) + 4.0);
    }
    let curves: [(&str, &str, Box<dyn Fn(usize) -> f64>); 3] = [
        ("sqrt(p/m)", "#c0392b", Box::new(|p| (p as f64 / m as f64).sqrt())),
        ("exact (even split)", "#2c3e50", Box::new(|p| most_uniform_exact(p, m))),
        ("sqrt(p/2m)", "#2980b9", Box::new(|p| (p as f64 / (2.0 * m as f64)).sqrt())),
    ];
    for (i, (name, color, f)) in curves.iter().enumerate() {
        let _ = writeln!(out, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, polyline(f.as_ref()));
        let ly = MARGIN + 14.0 * i as f64;
        let _ = writeln!(out, r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="1.5"/>"#, x0 + 10.0, x0 + 30.0);
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}">{name}</text>"#, x0 + 35.0, ly + 4.0);
    }
    for (name, p, exact) in markers {
        let (cx, cy) = (x(*p as f64), y(*exact));
        let _ = writeln!(out, r##"<circle cx="{cx:.2}" cy="{cy:.2}" r="4" fill="#27ae60"/>"##);
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}">{name} (p={p})</text>"#, cx + 6.0, cy - 6.0);
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_split_values() {
        assert_eq!(most_uniform_exact(2, 4), 0.5);
        assert_eq!(most_uniform_exact(4, 4), 1.0);
        assert_eq!(most_uniform_exact(2, 4), most_uniform_exact(2, 4));
        assert!((most_uniform_exact(3, 4) - (1.0 + 1.0 + 1.0) / 4.0).abs() < 1e-15);
    }

    #[test]
    fn chart_is_well_formed() {
        let svg = bound_chart(4, &[("wl".into(), 2, 0.5)]);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 3);
        assert!(svg.contains("wl (p=2)"));
        assert_eq!(svg, bound_chart(4, &[("wl".into(), 2, 0.5)]));
        assert!(bound_chart(1, &[]).contains("<polyline"));
        // large m keeps the curve size bounded
        let big = bound_chart(10_000, &[]);
        assert!(big.len() < 40_000);
    }
}
