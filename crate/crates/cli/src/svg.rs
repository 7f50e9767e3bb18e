//! Static SVG lattice drawings of filtered complexes.

use std::fmt::Write as _;

use cfk::FilteredComplex;

const CELL: i64 = 48;
const MARGIN: i64 = 36;
const RADIUS: i64 = 6;

/// Dot and arrow counts of a rendered diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiagramStats {
    pub dots: usize,
    pub arrows: usize,
}

/// Draws `U^{-k} g` at `(k, alexander + k)` for the layout column `k` of each
/// generator, with one arrow per differential component.
pub fn render(c: &FilteredComplex, title: &str) -> (String, DiagramStats) {
    let columns = c.layout_columns();
    let points: Vec<(i64, i64)> = c
        .generators()
        .iter()
        .zip(&columns)
        .map(|(g, &k)| (k, g.alexander + k))
        .collect();
    let arrows: Vec<((i64, i64), (i64, i64))> = c
        .arrows()
        .map(|a| {
            let from = points[a.source];
            let k = from.0 - a.upower;
            (from, (k, c.generator(a.target).alexander + k))
        })
        .collect();

    let mut i_lo = 0;
    let mut i_hi = 0;
    let mut j_lo = 0;
    let mut j_hi = 0;
    for &(i, j) in points.iter().chain(arrows.iter().map(|(_, to)| to)) {
        i_lo = i_lo.min(i);
        i_hi = i_hi.max(i);
        j_lo = j_lo.min(j);
        j_hi = j_hi.max(j);
    }
    let width = (i_hi - i_lo) * CELL + 2 * MARGIN;
    let height = (j_hi - j_lo) * CELL + 2 * MARGIN;
    let x = |i: i64| MARGIN + (i - i_lo) * CELL;
    let y = |j: i64| MARGIN + (j_hi - j) * CELL;

    let mut s = String::new();
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    writeln!(s, "  <title>{}</title>", escape(title)).unwrap();
    writeln!(
        s,
        r#"  <defs><marker id="head" markerWidth="8" markerHeight="8" refX="7" refY="4" orient="auto"><path d="M0,0 L8,4 L0,8 z" fill="black"/></marker></defs>"#
    )
    .unwrap();
    for i in i_lo..=i_hi {
        writeln!(
            s,
            r##"  <line class="grid" x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="#ddd"/>"##,
            x(i),
            y(j_hi),
            y(j_lo)
        )
        .unwrap();
    }
    for j in j_lo..=j_hi {
        writeln!(
            s,
            r##"  <line class="grid" x1="{1}" y1="{0}" x2="{2}" y2="{0}" stroke="#ddd"/>"##,
            y(j),
            x(i_lo),
            x(i_hi)
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"  <line class="axis" id="axis-i0" x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="gray" stroke-width="2"/>"#,
        x(0),
        y(j_hi) - MARGIN / 2,
        y(j_lo) + MARGIN / 2
    )
    .unwrap();
    writeln!(
        s,
        r#"  <line class="axis" id="axis-j0" x1="{1}" y1="{0}" x2="{2}" y2="{0}" stroke="gray" stroke-width="2"/>"#,
        y(0),
        x(i_lo) - MARGIN / 2,
        x(i_hi) + MARGIN / 2
    )
    .unwrap();
    writeln!(
        s,
        r#"  <text x="{}" y="{}" font-size="12">j</text>"#,
        x(0) + 4,
        y(j_hi) - MARGIN / 2 + 10
    )
    .unwrap();
    writeln!(
        s,
        r#"  <text x="{}" y="{}" font-size="12">i</text>"#,
        x(i_hi) + MARGIN / 2 - 8,
        y(0) - 4
    )
    .unwrap();

    for &((fi, fj), (ti, tj)) in &arrows {
        let (x1, y1, x2, y2) = shorten(x(fi), y(fj), x(ti), y(tj));
        writeln!(
            s,
            r#"  <line class="arrow" x1="{x1:.1}" y1="{y1:.1}" x2="{x2:.1}" y2="{y2:.1}" stroke="black" marker-end="url(#head)"/>"#
        )
        .unwrap();
    }
    for (g, &(i, j)) in c.generators().iter().zip(&points) {
        writeln!(
            s,
            r#"  <circle class="generator" cx="{}" cy="{}" r="{RADIUS}" fill="black"><title>{} (M={})</title></circle>"#,
            x(i),
            y(j),
            escape(&g.name),
            g.maslov
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    let stats = DiagramStats {
        dots: points.len(),
        arrows: arrows.len(),
    };
    (s, stats)
}

/// Trims both ends of a segment so it runs between dot boundaries.
fn shorten(x1: i64, y1: i64, x2: i64, y2: i64) -> (f64, f64, f64, f64) {
    let (dx, dy) = ((x2 - x1) as f64, (y2 - y1) as f64);
    let len = (dx * dx + dy * dy).sqrt();
    if len <= 2.0 * RADIUS as f64 {
        return (x1 as f64, y1 as f64, x2 as f64, y2 as f64);
    }
    let (ux, uy) = (dx / len, dy / len);
    let pad = RADIUS as f64 + 1.0;
    (
        x1 as f64 + ux * pad,
        y1 as f64 + uy * pad,
        x2 as f64 - ux * pad,
        y2 as f64 - uy * pad,
    )
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use cfk::filtered::from_staircase;
    use cfk::Staircase;

    #[test]
    fn unknot_is_one_dot() {
        let (doc, stats) = render(&from_staircase(&Staircase::unknot()), "unknot");
        assert_eq!(stats, DiagramStats { dots: 1, arrows: 0 });
        assert_eq!(doc.matches("<circle").count(), 1);
        assert!(doc.contains(r#"cx="36" cy="36""#));
    }

    #[test]
    fn escapes_names() {
        assert_eq!(escape("(a,b)<c>"), "(a,b)&lt;c&gt;");
    }
}
