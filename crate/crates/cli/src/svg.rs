//! Error-matrix heatmap as a standalone SVG document.

use std::fmt::Write;

use motifgae::eval::{ErrorMatrix, PATTERNS};
use motifgae::PatternLabel;

const CELL: f64 = 64.0;
const LEFT: f64 = 120.0;
const TOP: f64 = 110.0;

/// White for the row minimum fading to dark red for the row maximum, on a log scale
/// so that one large off-pattern error does not wash out the rest of the row.
fn shade(value: f64, lo: f64, hi: f64) -> String {
    let t = if hi > lo {
        ((value.ln_1p() - lo.ln_1p()) / (hi.ln_1p() - lo.ln_1p())).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let g = (255.0 * (1.0 - 0.85 * t)).round() as u8;
    let r = (255.0 * (1.0 - 0.35 * t)).round() as u8;
    format!("#{r:02x}{g:02x}{g:02x}")
}

pub fn heatmap(m: &ErrorMatrix) -> String {
    let width = LEFT + CELL * PATTERNS as f64 + 20.0;
    let height = TOP + CELL * PATTERNS as f64 + 20.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(
        s,
        r#"  <text x="{}" y="18" font-size="14" text-anchor="middle">GAE-{} reconstruction error (rows: trained, columns: evaluated)</text>"#,
        width / 2.0,
        m.encoder_kind.as_str().to_uppercase()
    );
    for (j, p) in PatternLabel::ALL.iter().enumerate() {
        let x = LEFT + CELL * (j as f64 + 0.5);
        let _ = writeln!(
            s,
            r#"  <text x="{x}" y="{}" text-anchor="start" transform="rotate(-40 {x} {})">{p}</text>"#,
            TOP - 8.0,
            TOP - 8.0
        );
        let y = TOP + CELL * (j as f64 + 0.5) + 4.0;
        let _ = writeln!(s, r#"  <text x="{}" y="{y}" text-anchor="end">{p}</text>"#, LEFT - 8.0);
    }
    let mins = m.row_argmin();
    for (i, row) in m.values.iter().enumerate() {
        let lo = row.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        for (j, &v) in row.iter().enumerate() {
            let (x, y) = (LEFT + CELL * j as f64, TOP + CELL * i as f64);
            let _ = writeln!(
                s,
                r##"  <rect class="cell" x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{}" stroke="#999999" stroke-width="0.5"/>"##,
                shade(v, lo, hi)
            );
            let _ = writeln!(
                s,
                r#"  <text x="{}" y="{}" text-anchor="middle">{v:.3}</text>"#,
                x + CELL / 2.0,
                y + CELL / 2.0 + 4.0
            );
        }
        let j = mins[i].index();
        let _ = writeln!(
            s,
            r##"  <rect class="row-min" x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#1a9850" stroke-width="4"/>"##,
            LEFT + CELL * j as f64 + 2.0,
            TOP + CELL * i as f64 + 2.0,
            CELL - 4.0,
            CELL - 4.0
        );
    }
    s.push_str("</svg>\n");
    s
}
