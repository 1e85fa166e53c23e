//! Deterministic SVG renderers for run artifacts, plus a reader for the
//! CSV tables they are built from, so every figure can be rebuilt from a
//! run directory alone.

use crate::Error;

/// A parsed CSV table: named header and one f64 column per field.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

impl Table {
    pub fn parse(text: &str) -> Result<Table, Error> {
        let mut lines = text.lines();
        let header: Vec<String> = lines
            .next()
            .ok_or_else(|| Error::domain("empty table"))?
            .split(',')
            .map(|s| s.trim().to_string())
            .collect();
        let mut columns = vec![Vec::new(); header.len()];
        for (k, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != header.len() {
                return Err(Error::domain(format!(
                    "row {} has {} cells, expected {}",
                    k + 2,
                    cells.len(),
                    header.len()
                )));
            }
            for (c, cell) in cells.iter().enumerate() {
                let v: f64 = cell.trim().parse().map_err(|_| {
                    Error::domain(format!("row {}, column {:?}: bad number {cell:?}", k + 2, header[c]))
                })?;
                columns[c].push(v);
            }
        }
        Ok(Table { header, columns })
    }

    pub fn column(&self, name: &str) -> Result<&[f64], Error> {
        self.header
            .iter()
            .position(|h| h == name)
            .map(|i| self.columns[i].as_slice())
            .ok_or_else(|| {
                Error::domain(format!("no column {name:?}, table has {:?}", self.header))
            })
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }
}

const W: f64 = 640.0;
const H: f64 = 360.0;
const M: f64 = 52.0;

struct Frame {
    x_lo: f64,
    x_hi: f64,
    y_lo: f64,
    y_hi: f64,
}

impl Frame {
    fn around(xs: &[f64], ys_list: &[&[f64]]) -> Frame {
        let mut f = Frame {
            x_lo: f64::INFINITY,
            x_hi: f64::NEG_INFINITY,
            y_lo: f64::INFINITY,
            y_hi: f64::NEG_INFINITY,
        };
        for &x in xs {
            f.x_lo = f.x_lo.min(x);
            f.x_hi = f.x_hi.max(x);
        }
        for ys in ys_list {
            for &y in *ys {
                f.y_lo = f.y_lo.min(y);
                f.y_hi = f.y_hi.max(y);
            }
        }
        // Degenerate spans still need a visible window.
        if !(f.x_hi > f.x_lo) {
            f.x_lo -= 0.5;
            f.x_hi += 0.5;
        }
        if !(f.y_hi > f.y_lo) {
            let pad = f.y_lo.abs() * 0.1 + 1e-6;
            f.y_lo -= pad;
            f.y_hi += pad;
        }
        f
    }

    fn px(&self, x: f64) -> f64 {
        M + (x - self.x_lo) / (self.x_hi - self.x_lo) * (W - 2.0 * M)
    }

    fn py(&self, y: f64) -> f64 {
        H - M - (y - self.y_lo) / (self.y_hi - self.y_lo) * (H - 2.0 * M)
    }

    fn polyline(&self, xs: &[f64], ys: &[f64], color: &str) -> String {
        let pts: Vec<String> = xs
            .iter()
            .zip(ys)
            .map(|(&x, &y)| format!("{:.2},{:.2}", self.px(x), self.py(y)))
            .collect();
        format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            pts.join(" ")
        )
    }
}

fn open_svg(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
         viewBox=\"0 0 {W} {H}\">\n\
         <rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n\
         <text x=\"{:.0}\" y=\"20\" text-anchor=\"middle\" font-family=\"monospace\" \
         font-size=\"13\">{title}</text>\n",
        W / 2.0
    )
}

fn axes(frame: &Frame, x_name: &str, y_name: &str) -> String {
    let mut s = format!(
        "<rect x=\"{M}\" y=\"{M}\" width=\"{:.0}\" height=\"{:.0}\" fill=\"none\" \
         stroke=\"black\" stroke-width=\"1\"/>\n",
        W - 2.0 * M,
        H - 2.0 * M
    );
    for (v, anchor, x, y) in [
        (frame.x_lo, "start", M, H - M + 16.0),
        (frame.x_hi, "end", W - M, H - M + 16.0),
    ] {
        s += &format!(
            "<text x=\"{x:.0}\" y=\"{y:.0}\" text-anchor=\"{anchor}\" font-family=\"monospace\" \
             font-size=\"11\">{v:.4}</text>\n"
        );
    }
    for (v, y) in [(frame.y_lo, H - M), (frame.y_hi, M + 4.0)] {
        s += &format!(
            "<text x=\"{:.0}\" y=\"{y:.0}\" text-anchor=\"end\" font-family=\"monospace\" \
             font-size=\"11\">{v:.4}</text>\n",
            M - 6.0
        );
    }
    s += &format!(
        "<text x=\"{:.0}\" y=\"{:.0}\" text-anchor=\"middle\" font-family=\"monospace\" \
         font-size=\"12\">{x_name}</text>\n",
        W / 2.0,
        H - 8.0
    );
    s += &format!(
        "<text x=\"14\" y=\"{:.0}\" text-anchor=\"middle\" font-family=\"monospace\" \
         font-size=\"12\" transform=\"rotate(-90 14 {:.0})\">{y_name}</text>\n",
        H / 2.0,
        H / 2.0
    );
    s
}

fn legend(entries: &[(&str, &str)]) -> String {
    let mut s = String::new();
    for (k, (name, color)) in entries.iter().enumerate() {
        let y = M + 16.0 + 16.0 * k as f64;
        s += &format!(
            "<line x1=\"{:.0}\" y1=\"{y:.0}\" x2=\"{:.0}\" y2=\"{y:.0}\" stroke=\"{color}\" \
             stroke-width=\"2\"/>\n<text x=\"{:.0}\" y=\"{:.0}\" font-family=\"monospace\" \
             font-size=\"11\">{name}</text>\n",
            W - M - 150.0,
            W - M - 130.0,
            W - M - 124.0,
            y + 4.0
        );
    }
    s
}

/// Final temperature profile with a colored strip underneath: blue at the
/// snapshot minimum, red at its maximum.
pub fn theta_strip(xs: &[f64], theta: &[f64], t: f64) -> String {
    assert_eq!(xs.len(), theta.len());
    let frame = Frame::around(xs, &[theta]);
    let mut svg = open_svg(&format!("temperature at t = {t:.6}"));
    svg += &axes(&frame, "x", "theta");
    svg += &frame.polyline(xs, theta, "#b22222");
    // Strip: one cell-wide rectangle per sample along the bottom edge.
    let strip_y = H - M + 22.0;
    let span = (frame.y_hi - frame.y_lo).max(1e-300);
    for (k, (&x, &th)) in xs.iter().zip(theta).enumerate() {
        let v = ((th - frame.y_lo) / span).clamp(0.0, 1.0);
        let r = (255.0 * v) as u8;
        let b = (255.0 * (1.0 - v)) as u8;
        let half = if xs.len() > 1 {
            (xs[1] - xs[0]) * 0.5
        } else {
            0.5
        };
        let x0 = frame.px(x - half);
        let x1 = frame.px(x + half);
        svg += &format!(
            "<rect x=\"{x0:.2}\" y=\"{strip_y:.2}\" width=\"{:.2}\" height=\"10\" \
             fill=\"rgb({r},64,{b})\"/>\n",
            (x1 - x0).max(0.1)
        );
        let _ = k;
    }
    svg += "</svg>\n";
    svg
}

/// Minimum temperature against the guaranteed lower bound over time.
pub fn bound_overlay(ts: &[f64], min_theta: &[f64], bound: &[f64]) -> String {
    assert!(ts.len() == min_theta.len() && ts.len() == bound.len());
    let frame = Frame::around(ts, &[min_theta, bound]);
    let mut svg = open_svg("minimum temperature vs guaranteed bound");
    svg += &axes(&frame, "t", "theta");
    svg += &frame.polyline(ts, min_theta, "#1f6fb2");
    svg += &frame.polyline(ts, bound, "#b22222");
    svg += &legend(&[("min theta", "#1f6fb2"), ("bound", "#b22222")]);
    svg += "</svg>\n";
    svg
}

/// Ballistic energy and its balance margin over time, each normalized to
/// its own range so both shapes stay readable on one canvas.
pub fn balance_chart(ts: &[f64], ballistic: &[f64], margin: &[f64]) -> String {
    assert!(ts.len() == ballistic.len() && ts.len() == margin.len());
    fn normalized(vs: &[f64]) -> (Vec<f64>, f64, f64) {
        let lo = vs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = vs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let span = if hi > lo { hi - lo } else { 1.0 };
        (vs.iter().map(|&v| (v - lo) / span).collect(), lo, hi)
    }
    let (nb, b_lo, b_hi) = normalized(ballistic);
    let (nm, m_lo, m_hi) = normalized(margin);
    let frame = Frame::around(ts, &[&[0.0, 1.0]]);
    let mut svg = open_svg("ballistic energy and balance margin (each normalized)");
    svg += &axes(&frame, "t", "normalized");
    svg += &frame.polyline(ts, &nb, "#1f6fb2");
    svg += &frame.polyline(ts, &nm, "#2e8b57");
    svg += &legend(&[("ballistic", "#1f6fb2"), ("margin", "#2e8b57")]);
    svg += &format!(
        "<text x=\"{M}\" y=\"{:.0}\" font-family=\"monospace\" font-size=\"10\">ballistic range \
         [{b_lo:.6e}, {b_hi:.6e}]; margin range [{m_lo:.6e}, {m_hi:.6e}]</text>\n",
        H - M + 34.0
    );
    svg += "</svg>\n";
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_round_trip_full_precision_numbers() {
        let text = format!(
            "t,x,rho\n{:.16e},{:.16e},{:.16e}\n{:.16e},{:.16e},{:.16e}\n",
            0.0,
            0.25,
            1.0 + 1e-15,
            0.1,
            0.75,
            2.0 / 3.0
        );
        let table = Table::parse(&text).unwrap();
        assert_eq!(table.header, vec!["t", "x", "rho"]);
        assert_eq!(table.rows(), 2);
        assert_eq!(table.column("rho").unwrap()[0], 1.0 + 1e-15);
        assert_eq!(table.column("rho").unwrap()[1], 2.0 / 3.0);
        assert!(table.column("missing").is_err());
    }

    #[test]
    fn ragged_rows_are_rejected() {
        assert!(Table::parse("a,b\n1.0\n").is_err());
        assert!(Table::parse("a,b\n1.0,2.0,3.0\n").is_err());
        assert!(Table::parse("a,b\n1.0,zebra\n").is_err());
    }

    #[test]
    fn charts_are_deterministic_and_well_formed() {
        let ts = [0.0, 0.1, 0.2, 0.3];
        let a = [1.0, 0.9, 0.85, 0.84];
        let b = [0.5, 0.45, 0.44, 0.44];
        let one = bound_overlay(&ts, &a, &b);
        let two = bound_overlay(&ts, &a, &b);
        assert_eq!(one, two);
        assert!(one.starts_with("<svg"));
        assert!(one.ends_with("</svg>\n"));
        assert_eq!(one.matches("<polyline").count(), 2);

        let strip = theta_strip(&[0.25, 0.5, 0.75], &[1.0, 1.2, 1.1], 0.5);
        assert!(strip.matches("<rect").count() >= 4);

        let bal = balance_chart(&ts, &a, &b);
        assert!(bal.contains("ballistic range"));
    }

    #[test]
    fn flat_series_still_render() {
        let ts = [0.0, 1.0];
        let flat = [2.0, 2.0];
        let svg = bound_overlay(&ts, &flat, &flat);
        assert!(svg.contains("<polyline"));
    }
}
