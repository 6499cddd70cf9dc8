//! Learnability coefficient fields over the complex `z`-plane.
//!
//! Fields are evaluated with `h = 1` and `λ = z`; the coefficients depend on
//! `hλ` only, so one chart covers every `(λ, h)` pair with the same product.

use std::fmt::{self, Write as _};
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::butcher::ButcherTableau;
use crate::complex::{c64, C64};
use crate::error::{Error, Result};
use crate::learnability::{Coefficients, LearnabilitySolver, ProblemSpec, RootPolicy};
use crate::stability::{stability_function, RationalStabilityFunction};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Region {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Default for Region {
    fn default() -> Self {
        Self {
            re_min: -6.0,
            re_max: 2.0,
            im_min: -6.0,
            im_max: 6.0,
            nx: 600,
            ny: 600,
        }
    }
}

impl Region {
    pub fn new(re: (f64, f64), im: (f64, f64), nx: usize, ny: usize) -> Result<Self> {
        let r = Self {
            re_min: re.0,
            re_max: re.1,
            im_min: im.0,
            im_max: im.1,
            nx,
            ny,
        };
        r.check()?;
        Ok(r)
    }

    pub fn check(&self) -> Result<()> {
        let finite = [self.re_min, self.re_max, self.im_min, self.im_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidRegion("bounds must be finite".into()));
        }
        if self.re_min >= self.re_max || self.im_min >= self.im_max {
            return Err(Error::InvalidRegion(
                "need re_min < re_max and im_min < im_max".into(),
            ));
        }
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::InvalidRegion(
                "resolution must be at least 2x2".into(),
            ));
        }
        Ok(())
    }

    pub fn re(&self, i: usize) -> f64 {
        self.re_min + (self.re_max - self.re_min) * i as f64 / (self.nx - 1) as f64
    }

    pub fn im(&self, j: usize) -> f64 {
        self.im_min + (self.im_max - self.im_min) * j as f64 / (self.ny - 1) as f64
    }

    pub fn node(&self, i: usize, j: usize) -> C64 {
        c64(self.re(i), self.im(j))
    }

    /// Grid indices of the node closest to `z` (clamped to the region).
    pub fn nearest(&self, z: C64) -> (usize, usize) {
        let idx = |v: f64, lo: f64, hi: f64, n: usize| {
            let t = ((v - lo) / (hi - lo) * (n - 1) as f64).round();
            t.clamp(0.0, (n - 1) as f64) as usize
        };
        (
            idx(z.re, self.re_min, self.re_max, self.nx),
            idx(z.im, self.im_min, self.im_max, self.ny),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    LAlpha,
    LReal,
    LImag,
}

impl Metric {
    pub fn pick(&self, c: &Coefficients) -> Option<f64> {
        match self {
            Metric::LAlpha => c.l_alpha,
            Metric::LReal => c.l_real,
            Metric::LImag => c.l_imag,
        }
    }
}

impl FromStr for Metric {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l_alpha" | "alpha" => Ok(Metric::LAlpha),
            "l_real" | "real" => Ok(Metric::LReal),
            "l_imag" | "imag" => Ok(Metric::LImag),
            _ => Err(Error::InvalidArgument(format!("unknown metric `{s}`"))),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::LAlpha => "l_alpha",
            Metric::LReal => "l_real",
            Metric::LImag => "l_imag",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientField {
    pub method: String,
    pub region: Region,
    pub metric: Metric,
    pub policy: RootPolicy,
    /// Row-major, `values[j * nx + i]` at node `(re(i), im(j))`; `None` is undefined.
    pub values: Vec<Option<f64>>,
}

impl CoefficientField {
    pub fn value(&self, i: usize, j: usize) -> Option<f64> {
        self.values[j * self.region.nx + i]
    }

    /// Value at the node nearest to `z`.
    pub fn value_near(&self, z: C64) -> Option<f64> {
        let (i, j) = self.region.nearest(z);
        self.value(i, j)
    }

    /// `(z, value)` for every node, in CSV order.
    pub fn nodes(&self) -> impl Iterator<Item = (C64, Option<f64>)> + '_ {
        let nx = self.region.nx;
        self.values
            .iter()
            .enumerate()
            .map(move |(k, v)| (self.region.node(k % nx, k / nx), *v))
    }
}

pub fn evaluate_field(
    t: &ButcherTableau,
    region: &Region,
    metric: Metric,
    policy: RootPolicy,
) -> Result<CoefficientField> {
    evaluate_field_of(t.name(), &stability_function(t), region, metric, policy)
}

/// Field for a method given by its stability function. Nodes where the
/// solver fails are recorded as undefined.
pub fn evaluate_field_of(
    method: &str,
    stability: &RationalStabilityFunction,
    region: &Region,
    metric: Metric,
    policy: RootPolicy,
) -> Result<CoefficientField> {
    region.check()?;
    if policy == RootPolicy::All {
        return Err(Error::PolicyAll);
    }
    let solver = LearnabilitySolver::new(stability.clone());
    let values: Vec<Option<f64>> = (0..region.ny)
        .into_par_iter()
        .flat_map_iter(|j| {
            let solver = &solver;
            (0..region.nx).map(move |i| {
                ProblemSpec::new(region.node(i, j), 1.0)
                    .and_then(|spec| solver.solve(&spec, policy))
                    .ok()
                    .and_then(|r| metric.pick(&r.coefficients))
            })
        })
        .collect();
    Ok(CoefficientField {
        method: method.to_string(),
        region: *region,
        metric,
        policy,
        values,
    })
}

/// `re,im,value` rows, `im` varying slowest, 17 significant digits,
/// undefined values as an empty cell.
pub fn export_csv(field: &CoefficientField, mut out: impl Write) -> Result<()> {
    let mut buf = String::with_capacity(field.values.len() * 72);
    buf.push_str("re,im,value\n");
    for (z, v) in field.nodes() {
        write!(buf, "{:.16e},{:.16e},", z.re, z.im).expect("string write");
        if let Some(v) = v {
            write!(buf, "{v:.16e}").expect("string write");
        }
        buf.push('\n');
    }
    out.write_all(buf.as_bytes())?;
    Ok(())
}

pub fn to_csv_string(field: &CoefficientField) -> String {
    let mut out = Vec::new();
    export_csv(field, &mut out).expect("in-memory write");
    String::from_utf8(out).expect("ascii")
}

/// A field read back from CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvField {
    pub points: Vec<C64>,
    pub values: Vec<Option<f64>>,
}

pub fn parse_csv(text: &str) -> Result<CsvField> {
    let mut lines = text.lines();
    match lines.next() {
        Some("re,im,value") => {}
        other => return Err(Error::Csv(format!("bad header {other:?}"))),
    }
    let mut points = Vec::new();
    let mut values = Vec::new();
    for (n, line) in lines.enumerate() {
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 3 {
            return Err(Error::Csv(format!(
                "row {} has {} columns",
                n + 1,
                cols.len()
            )));
        }
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| Error::Csv(format!("row {}: bad number `{s}`", n + 1)))
        };
        points.push(c64(num(cols[0])?, num(cols[1])?));
        values.push(if cols[2].is_empty() {
            None
        } else {
            Some(num(cols[2])?)
        });
    }
    Ok(CsvField { points, values })
}

/// Default contour levels.
pub const DEFAULT_LEVELS: [f64; 4] = [1e-3, 1e-2, 1e-1, 1.0];

/// Floor applied before taking `log10`, so exact zeros stay finite.
const LOG_FLOOR: f64 = 1e-300;

pub type Segment = (C64, C64);

/// Marching-squares iso-segments of `log10(value)` at `log10(level)`.
/// Cells touching an undefined node are skipped.
pub fn contour_segments(field: &CoefficientField, level: f64) -> Vec<Segment> {
    let region = &field.region;
    let target = level.log10();
    let logv = |i: usize, j: usize| field.value(i, j).map(|v| v.max(LOG_FLOOR).log10());
    let mut segments = Vec::new();
    for j in 0..region.ny - 1 {
        for i in 0..region.nx - 1 {
            // corners counter-clockwise from bottom-left
            let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            let Some(v) = corners
                .iter()
                .map(|&(a, b)| logv(a, b))
                .collect::<Option<Vec<f64>>>()
            else {
                continue;
            };
            let pts: Vec<C64> = corners.iter().map(|&(a, b)| region.node(a, b)).collect();
            let above: Vec<bool> = v.iter().map(|&x| x > target).collect();
            let case = above
                .iter()
                .enumerate()
                .fold(0u8, |acc, (k, &a)| acc | ((a as u8) << k));
            if case == 0 || case == 15 {
                continue;
            }
            // crossing point on edge k (corner k to corner k+1)
            let cross = |k: usize| {
                let (a, b) = (k, (k + 1) % 4);
                let t = (target - v[a]) / (v[b] - v[a]);
                pts[a] + (pts[b] - pts[a]) * t
            };
            let edges: Vec<usize> = (0..4).filter(|&k| above[k] != above[(k + 1) % 4]).collect();
            if edges.len() == 2 {
                segments.push((cross(edges[0]), cross(edges[1])));
            } else {
                // saddle: pair edges by the cell-centre value
                let centre_above = v.iter().sum::<f64>() / 4.0 > target;
                if centre_above == above[0] {
                    segments.push((cross(0), cross(3)));
                    segments.push((cross(1), cross(2)));
                } else {
                    segments.push((cross(0), cross(1)));
                    segments.push((cross(2), cross(3)));
                }
            }
        }
    }
    segments
}

const PALETTE: [&str; 8] = [
    "#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666",
];

/// Static SVG 1.1 contour plot of the field at the given levels.
pub fn render_contours(field: &CoefficientField, levels: &[f64]) -> Result<String> {
    if levels.is_empty() {
        return Err(Error::InvalidLevels("need at least one level".into()));
    }
    if levels.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
        return Err(Error::InvalidLevels(
            "levels must be positive and finite".into(),
        ));
    }
    if levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidLevels(
            "levels must be strictly ascending".into(),
        ));
    }
    if field.values.iter().all(Option::is_none) {
        return Err(Error::AllUndefined);
    }

    let r = &field.region;
    let (width, height) = (640.0, 640.0);
    let (left, right, top, bottom) = (70.0, 150.0, 40.0, 60.0);
    let pw = width - left - right;
    let ph = height - top - bottom;
    let sx = |x: f64| left + (x - r.re_min) / (r.re_max - r.re_min) * pw;
    let sy = |y: f64| top + (r.im_max - y) / (r.im_max - r.im_min) * ph;

    let mut svg = String::new();
    let w = &mut svg;
    writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    writeln!(
        w,
        r#"<title>{} {} ({})</title>"#,
        field.method, field.metric, field.policy
    )
    .unwrap();
    writeln!(
        w,
        r#"<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>"#
    )
    .unwrap();
    writeln!(
        w,
        r#"<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black" stroke-width="1"/>"#
    )
    .unwrap();

    for (x, label) in ticks(r.re_min, r.re_max) {
        let px = sx(x);
        writeln!(
            w,
            r#"<line x1="{px:.3}" y1="{:.3}" x2="{px:.3}" y2="{:.3}" stroke="black"/><text x="{px:.3}" y="{:.3}" font-size="11" text-anchor="middle">{label}</text>"#,
            top + ph,
            top + ph + 5.0,
            top + ph + 18.0
        )
        .unwrap();
    }
    for (y, label) in ticks(r.im_min, r.im_max) {
        let py = sy(y);
        writeln!(
            w,
            r#"<line x1="{:.3}" y1="{py:.3}" x2="{left}" y2="{py:.3}" stroke="black"/><text x="{:.3}" y="{:.3}" font-size="11" text-anchor="end">{label}</text>"#,
            left - 5.0,
            left - 8.0,
            py + 4.0
        )
        .unwrap();
    }
    if r.re_min < 0.0 && r.re_max > 0.0 {
        writeln!(w, r##"<line x1="{0:.3}" y1="{top}" x2="{0:.3}" y2="{1:.3}" stroke="#bbbbbb" stroke-dasharray="4 3"/>"##, sx(0.0), top + ph).unwrap();
    }
    if r.im_min < 0.0 && r.im_max > 0.0 {
        writeln!(w, r##"<line x1="{left}" y1="{0:.3}" x2="{1:.3}" y2="{0:.3}" stroke="#bbbbbb" stroke-dasharray="4 3"/>"##, sy(0.0), left + pw).unwrap();
    }
    writeln!(
        w,
        r#"<text x="{:.3}" y="{:.3}" font-size="14" text-anchor="middle">Re z</text>"#,
        left + pw / 2.0,
        height - 15.0
    )
    .unwrap();
    writeln!(
        w,
        r#"<text x="18" y="{:.3}" font-size="14" text-anchor="middle" transform="rotate(-90 18 {:.3})">Im z</text>"#,
        top + ph / 2.0,
        top + ph / 2.0
    )
    .unwrap();

    for (k, &level) in levels.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let segs = contour_segments(field, level);
        let mut d = String::new();
        for (a, b) in &segs {
            write!(
                d,
                "M{:.3} {:.3}L{:.3} {:.3}",
                sx(a.re),
                sy(a.im),
                sx(b.re),
                sy(b.im)
            )
            .unwrap();
        }
        if !d.is_empty() {
            writeln!(
                w,
                r#"<path class="level" data-level="{level}" d="{d}" fill="none" stroke="{color}" stroke-width="1.2"/>"#
            )
            .unwrap();
        }
        let ly = top + 20.0 + 18.0 * k as f64;
        let lx = left + pw + 15.0;
        writeln!(
            w,
            r#"<line x1="{lx}" y1="{ly}" x2="{:.3}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{:.3}" y="{:.3}" font-size="11">{level:e}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0
        )
        .unwrap();
    }
    writeln!(w, "</svg>").unwrap();
    Ok(svg)
}

/// Round tick positions covering `[lo, hi]`.
fn ticks(lo: f64, hi: f64) -> Vec<(f64, String)> {
    let raw = (hi - lo) / 6.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let start = (lo / step).ceil() as i64;
    let end = (hi / step).floor() as i64;
    (start..=end)
        .map(|k| {
            let x = k as f64 * step;
            let label = if step >= 1.0 {
                format!("{x:.0}")
            } else {
                format!("{x}")
            };
            (x, label)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::butcher::builtin;

    fn constant_field(v: Option<f64>, nx: usize, ny: usize) -> CoefficientField {
        CoefficientField {
            method: "test".into(),
            region: Region::new((-1.0, 1.0), (-1.0, 1.0), nx, ny).unwrap(),
            metric: Metric::LAlpha,
            policy: RootPolicy::ClosestToLambda,
            values: vec![v; nx * ny],
        }
    }

    #[test]
    fn region_validation() {
        assert!(Region::new((1.0, 0.0), (0.0, 1.0), 3, 3).is_err());
        assert!(Region::new((0.0, 1.0), (0.0, 0.0), 3, 3).is_err());
        assert!(Region::new((0.0, 1.0), (0.0, 1.0), 1, 3).is_err());
        assert!(Region::new((0.0, f64::INFINITY), (0.0, 1.0), 3, 3).is_err());
        let r = Region::default();
        assert_eq!((r.nx, r.ny), (600, 600));
        assert_eq!(r.re(0), -6.0);
        assert_eq!(r.re(599), 2.0);
    }

    #[test]
    fn euler_field_undefined_at_origin() {
        let region = Region::new((-2.0, 2.0), (-3.0, 3.0), 11, 11).unwrap();
        let f = evaluate_field(
            &builtin("explicit_euler").unwrap(),
            &region,
            Metric::LAlpha,
            RootPolicy::ClosestToLambda,
        )
        .unwrap();
        assert_eq!(region.node(5, 5), c64(0.0, 0.0));
        assert_eq!(f.value(5, 5), None);
        // closed form |(e^z − 1)/z − 1| at every other node
        for (z, v) in f.nodes().filter(|(z, _)| z.norm() > 0.0) {
            let want = ((z.exp() - 1.0) / z - 1.0).norm();
            assert!((v.unwrap() - want).abs() < 1e-12 * want.max(1.0), "{z}");
        }
    }

    #[test]
    fn csv_layout() {
        let f = constant_field(Some(0.0), 2, 2);
        let csv = to_csv_string(&f);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], "re,im,value");
        // im slowest
        assert!(lines[1].starts_with("-1.0000000000000000e0,-1.0000000000000000e0,"));
        assert!(lines[2].starts_with("1.0000000000000000e0,-1.0000000000000000e0,"));

        let mut g = constant_field(Some(0.5), 2, 2);
        g.values[2] = None;
        let csv = to_csv_string(&g);
        assert!(csv.lines().nth(3).unwrap().ends_with(','));
        assert_eq!(
            to_csv_string(&constant_field(None, 11, 11)).lines().count(),
            122
        );
    }

    #[test]
    fn csv_parse_errors() {
        assert!(parse_csv("x,y\n").is_err());
        assert!(parse_csv("re,im,value\n1,2\n").is_err());
        assert!(parse_csv("re,im,value\n1,2,abc\n").is_err());
    }

    #[test]
    fn constant_field_has_no_contours() {
        let f = constant_field(Some(0.5), 5, 5);
        assert!(contour_segments(&f, 0.5).is_empty());
        let svg = render_contours(&f, &[0.5]).unwrap();
        assert!(svg.contains("Re z") && svg.contains("Im z"));
        assert!(!svg.contains(r#"class="level""#));
    }

    #[test]
    fn checkerboard_mask_blocks_every_cell() {
        let mut f = constant_field(Some(1.0), 6, 6);
        for j in 0..6 {
            for i in 0..6 {
                if (i + j) % 2 == 0 {
                    f.values[j * 6 + i] = None;
                } else {
                    f.values[j * 6 + i] = Some(if i % 3 == 0 { 10.0 } else { 0.01 });
                }
            }
        }
        assert!(contour_segments(&f, 0.1).is_empty());
    }

    #[test]
    fn masked_cells_are_skipped_but_neighbours_draw() {
        // values 10^(i-2) by column; node (2, 1) undefined
        let region = Region::new((0.0, 4.0), (0.0, 3.0), 5, 4).unwrap();
        let mut values: Vec<Option<f64>> = (0..20).map(|k| Some(10f64.powi(k % 5 - 2))).collect();
        values[5 + 2] = None;
        let f = CoefficientField {
            method: "ramp".into(),
            region,
            metric: Metric::LAlpha,
            policy: RootPolicy::ClosestToLambda,
            values,
        };
        // the 0.5 iso-line runs between columns 1 and 2; only the top cell
        // of that strip avoids the masked node
        let segs = contour_segments(&f, 0.5);
        assert_eq!(segs.len(), 1);
        let (a, b) = segs[0];
        for p in [a, b] {
            assert!(p.re > 1.0 && p.re < 2.0);
            assert!(p.im >= 2.0);
        }
    }

    #[test]
    fn render_rejects_bad_input() {
        let f = constant_field(Some(0.5), 3, 3);
        assert!(matches!(
            render_contours(&f, &[]),
            Err(Error::InvalidLevels(_))
        ));
        assert!(matches!(
            render_contours(&f, &[0.1, 0.1]),
            Err(Error::InvalidLevels(_))
        ));
        assert!(matches!(
            render_contours(&f, &[-1.0]),
            Err(Error::InvalidLevels(_))
        ));
        let g = constant_field(None, 3, 3);
        assert!(matches!(
            render_contours(&g, &[0.1]),
            Err(Error::AllUndefined)
        ));
    }

    #[test]
    fn all_policy_rejected() {
        let r = Region::new((-1.0, 1.0), (-1.0, 1.0), 3, 3).unwrap();
        assert!(matches!(
            evaluate_field(
                &builtin("rk4").unwrap(),
                &r,
                Metric::LAlpha,
                RootPolicy::All
            ),
            Err(Error::PolicyAll)
        ));
    }

    #[test]
    fn metric_parsing() {
        assert_eq!("l_alpha".parse::<Metric>().unwrap(), Metric::LAlpha);
        assert_eq!("L_REAL".parse::<Metric>().unwrap(), Metric::LReal);
        assert_eq!("imag".parse::<Metric>().unwrap(), Metric::LImag);
        assert!("bogus".parse::<Metric>().is_err());
    }
}
