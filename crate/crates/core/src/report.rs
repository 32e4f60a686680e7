//! CSV and SVG rendering of census, evaluation-map, model and mass-check
//! results. Every writer returns a `String`; output is a pure function of
//! its inputs.

use std::fmt::Write as _;

use num_rational::BigRational;

use crate::census::{KsSummary, TraceHistogram};
use crate::mass::MassReport;
use crate::stats::ResidualTable;

pub const HISTOGRAM_HEADER: &str =
    "q,d,mode,smooth_only,seed,samples,total,t,x,count,density,ks_density,v_value,std_error";
pub const EVALMAP_HEADER: &str = "q,d,dim_Rd,N,rank,nullity,dim_Jd,kernel_is_J";
pub const DISTRIBUTION_HEADER: &str = "q,d,n,exact,brute_force";
pub const MODELS_HEADER: &str = "x,gauss,psi,B1,B2,B3,V1,V2,V3";
pub const RESIDUALS_HEADER: &str = "family,q,sigma,x,b,r1,r2,r3";
pub const MASS_HEADER: &str = "q,t,form_count,orbit_form_count,form_count_over_gl3,orbit_sum,equal";

/// A real number with exactly 12 significant digits: fixed notation when
/// `1e-4 <= |v| < 1e6`, scientific otherwise. Zero prints in fixed form.
pub fn fmt_real(v: f64) -> String {
    if v == 0.0 {
        return format!("{:.11}", 0.0);
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{:.11e}", v);
    let exp: i32 = sci[sci.find('e').expect("exponent marker") + 1..].parse().expect("exponent");
    if (-4..6).contains(&exp) {
        format!("{:.*}", (11 - exp) as usize, v)
    } else {
        sci
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_real).unwrap_or_default()
}

fn fmt_ratio(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn comment(command: &str) -> String {
    format!("# {command}\n")
}

pub fn histogram_csv(command: &str, hist: &TraceHistogram, summary: &KsSummary) -> String {
    let mut out = comment(command);
    out.push_str(HISTOGRAM_HEADER);
    out.push('\n');
    let seed = hist.seed.map(|s| s.to_string()).unwrap_or_default();
    let samples = hist.samples.map(|s| s.to_string()).unwrap_or_default();
    for r in &summary.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            hist.q(),
            hist.d,
            hist.mode.label(),
            hist.smooth_only,
            seed,
            samples,
            hist.total,
            r.t,
            fmt_real(r.x),
            r.count,
            fmt_real(r.density),
            fmt_opt(r.ks_density),
            fmt_real(r.v_value),
            fmt_opt(r.std_error),
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalRow {
    pub q: u32,
    pub d: u32,
    pub dim_rd: usize,
    pub n: usize,
    pub rank: usize,
    pub nullity: usize,
    pub dim_jd: usize,
    pub kernel_is_j: bool,
}

pub fn evalmap_csv(command: &str, rows: &[EvalRow]) -> String {
    let mut out = comment(command);
    out.push_str(EVALMAP_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.q, r.d, r.dim_rd, r.n, r.rank, r.nullity, r.dim_jd, r.kernel_is_j
        );
    }
    out
}

/// `(q, d, n, exact, brute_force)`.
pub type DistributionRow = (u32, u32, usize, Option<String>, Option<String>);

/// One row per `(q, d, n)`; `exact` or `brute_force` is empty where that
/// method does not apply.
pub fn distribution_csv(command: &str, rows: &[DistributionRow]) -> String {
    let mut out = comment(command);
    out.push_str(DISTRIBUTION_HEADER);
    out.push('\n');
    for (q, d, n, exact, brute) in rows {
        let _ = writeln!(
            out,
            "{q},{d},{n},{},{}",
            exact.as_deref().unwrap_or(""),
            brute.as_deref().unwrap_or("")
        );
    }
    out
}

/// `x, gauss, psi, B1..B3, V1..V3` per grid point.
pub fn models_csv(command: &str, rows: &[[f64; 9]]) -> String {
    let mut out = comment(command);
    out.push_str(MODELS_HEADER);
    out.push('\n');
    for r in rows {
        let cells: Vec<String> = r.iter().map(|&v| fmt_real(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn residuals_csv(command: &str, table: &ResidualTable) -> String {
    let mut out = comment(command);
    out.push_str(RESIDUALS_HEADER);
    out.push('\n');
    for r in &table.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.family.label(),
            fmt_real(r.q),
            fmt_real(r.sigma),
            fmt_real(r.x),
            fmt_real(r.b),
            fmt_real(r.r1),
            fmt_real(r.r2),
            fmt_real(r.r3),
        );
    }
    out
}

pub fn mass_csv(command: &str, report: &MassReport) -> String {
    let mut out = comment(command);
    out.push_str(MASS_HEADER);
    out.push('\n');
    for r in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            report.q,
            r.t,
            r.form_count,
            r.orbit_form_count,
            fmt_ratio(&r.by_forms),
            fmt_ratio(&r.by_orbits),
            r.equal
        );
    }
    out
}

/// A named polyline for [`line_chart`].
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(name: impl Into<String>, points: Vec<(f64, f64)>) -> Series {
        Series { name: name.into(), points }
    }
}

const PALETTE: [&str; 8] =
    ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

/// A static line chart with axes, five ticks per axis and a legend.
pub fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let (w, h) = (720.0, 480.0);
    let (left, right, top, bottom) = (70.0, 150.0, 40.0, 50.0);
    let pts = series.iter().flat_map(|s| s.points.iter().copied());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for (x, y) in pts.filter(|p| p.0.is_finite() && p.1.is_finite()) {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x0 > x1 {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 == x0 {
        x1 = x0 + 1.0;
    }
    if y1 == y0 {
        y1 = y0 + 1.0;
    }
    let pad = 0.05 * (y1 - y0);
    let (y0, y1) = (y0 - pad, y1 + pad);
    let px = |x: f64| left + (x - x0) / (x1 - x0) * (w - left - right);
    let py = |y: f64| h - bottom - (y - y0) / (y1 - y0) * (h - top - bottom);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(svg, r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#, w / 2.0, escape(title));
    let (ax0, ax1, ay0, ay1) = (left, w - right, h - bottom, top);
    let _ = writeln!(
        svg,
        r#"<path d="M{ax0:.2} {ay1:.2} L{ax0:.2} {ay0:.2} L{ax1:.2} {ay0:.2}" fill="none" stroke="black"/>"#
    );
    for i in 0..=4 {
        let fx = x0 + (x1 - x0) * i as f64 / 4.0;
        let fy = y0 + (y1 - y0) * i as f64 / 4.0;
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            px(fx),
            ay0 + 16.0,
            tick(fx)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            ax0 - 6.0,
            py(fy) + 4.0,
            tick(fy)
        );
    }
    if y0 < 0.0 && y1 > 0.0 {
        let _ = writeln!(
            svg,
            r##"<line x1="{ax0:.2}" y1="{0:.2}" x2="{ax1:.2}" y2="{0:.2}" stroke="#999" stroke-dasharray="4 3"/>"##,
            py(0.0)
        );
    }
    let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, (ax0 + ax1) / 2.0, h - 12.0, escape(x_label));
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
        (ay0 + ay1) / 2.0,
        (ay0 + ay1) / 2.0,
        escape(y_label)
    );
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = s
            .points
            .iter()
            .filter(|p| p.0.is_finite() && p.1.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            path.join(" ")
        );
        let ly = top + 10.0 + 18.0 * i as f64;
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"#,
            w - right + 10.0,
            w - right + 34.0
        );
        let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, w - right + 40.0, ly + 4.0, escape(&s.name));
    }
    svg.push_str("</svg>\n");
    svg
}

fn tick(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".to_string() } else { s.to_string() }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn significant(s: &str) -> usize {
        let mantissa = s.split('e').next().unwrap();
        let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
        digits.trim_start_matches('0').len()
    }

    #[test]
    fn real_formatting() {
        assert_eq!(fmt_real(0.398_942_280_401_432_7), "0.398942280401");
        assert_eq!(fmt_real(1.0), "1.00000000000");
        assert_eq!(fmt_real(-2.5), "-2.50000000000");
        assert_eq!(fmt_real(123456.789), "123456.789000");
        assert_eq!(fmt_real(1e-4), "0.000100000000000");
        assert_eq!(fmt_real(1e6), "1.00000000000e6");
        assert_eq!(fmt_real(3.2e-7), "3.20000000000e-7");
        assert_eq!(fmt_real(0.0), "0.00000000000");
        assert_eq!(fmt_real(-0.0), "0.00000000000");
        // Rounding up across a power of ten keeps 12 digits.
        assert_eq!(fmt_real(9.999_999_999_999_9), "10.0000000000");
        assert_eq!(fmt_real(999_999.999_999_9), "1.00000000000e6");
        for v in [0.000123456789012345, 5.5, 77.25, 0.01, 98765.4321, 1.5e-9, 2.5e12, -0.3] {
            assert_eq!(significant(&fmt_real(v)), 12, "{v}");
        }
    }

    #[test]
    fn ratio_formatting() {
        let r = BigRational::new(BigInt::from(6), BigInt::from(4));
        assert_eq!(fmt_ratio(&r), "3/2");
        assert_eq!(fmt_ratio(&BigRational::from_integer(BigInt::from(7))), "7");
    }

    #[test]
    fn chart_is_deterministic_svg() {
        let s = vec![
            Series::new("a", vec![(0.0, 0.0), (1.0, 1.0), (2.0, 0.5)]),
            Series::new("b<c", vec![(0.0, -1.0), (2.0, 1.0)]),
        ];
        let svg = line_chart("t", "x", "y", &s);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("b&lt;c"));
        assert_eq!(svg, line_chart("t", "x", "y", &s));
        assert!(line_chart("empty", "x", "y", &[]).contains("</svg>"));
    }
}
