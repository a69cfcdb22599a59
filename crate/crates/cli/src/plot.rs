//! Standalone SVG rendering for the two experiment figures: the ESS sweep
//! line plot (log-log) and proposal-cloud scatters over log-density
//! contours. Output is plain text with fixed float formatting, so a fixed
//! input always renders byte-identical files.

type Seg = ((f64, f64), (f64, f64));

fn px(v: f64) -> String {
    format!("{v:.2}")
}

// ---------------------------------------------------------------------------
// Sweep plot
// ---------------------------------------------------------------------------

pub struct SweepSeries {
    pub label: &'static str,
    pub color: &'static str,
    /// (delta, mean, p25, p75), ascending in delta.
    pub points: Vec<(f64, f64, f64, f64)>,
}

struct LogAxis {
    lo: f64, // log10 data range
    hi: f64,
    px_lo: f64,
    px_hi: f64,
}

impl LogAxis {
    fn new(lo: f64, hi: f64, px_lo: f64, px_hi: f64) -> Self {
        let (mut lo, mut hi) = (lo.log10(), hi.log10());
        if hi - lo < 1e-9 {
            lo -= 0.5;
            hi += 0.5;
        }
        let pad = 0.04 * (hi - lo);
        LogAxis {
            lo: lo - pad,
            hi: hi + pad,
            px_lo,
            px_hi,
        }
    }

    fn map(&self, v: f64) -> f64 {
        let t = (v.log10() - self.lo) / (self.hi - self.lo);
        self.px_lo + t * (self.px_hi - self.px_lo)
    }

    fn decade_ticks(&self) -> Vec<(f64, String)> {
        let first = self.lo.ceil() as i32;
        let last = self.hi.floor() as i32;
        (first..=last)
            .map(|e| (10f64.powi(e), format_pow10(e)))
            .collect()
    }
}

fn format_pow10(e: i32) -> String {
    if (-4..=5).contains(&e) {
        let v = 10f64.powi(e);
        if e >= 0 {
            format!("{v:.0}")
        } else {
            format!("{v:.*}", (-e) as usize)
        }
    } else {
        format!("1e{e}")
    }
}

/// Log-log line plot of mean min-ESS against step size, one line per
/// sampler with its interquartile band.
pub fn render_sweep_svg(series: &[SweepSeries], title: &str) -> String {
    let (width, height) = (860.0, 560.0);
    let (left, right, top, bottom) = (80.0, 670.0, 50.0, 495.0);

    let mut dmin = f64::INFINITY;
    let mut dmax = f64::NEG_INFINITY;
    let mut emin = f64::INFINITY;
    let mut emax = f64::NEG_INFINITY;
    for s in series {
        for &(d, mean, p25, p75) in &s.points {
            dmin = dmin.min(d);
            dmax = dmax.max(d);
            emin = emin.min(p25.min(mean)).max(f64::MIN_POSITIVE);
            emax = emax.max(p75.max(mean));
        }
    }
    if !dmin.is_finite() || !emin.is_finite() || emin <= 0.0 {
        dmin = 0.1;
        dmax = 1.0;
        emin = 1.0;
        emax = 10.0;
    }

    let x = LogAxis::new(dmin, dmax, left, right);
    let y = LogAxis::new(emin, emax, bottom, top); // inverted pixel direction

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\" font-family=\"sans-serif\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"28\" font-size=\"16\" text-anchor=\"middle\">{title}</text>\n",
        px((left + right) / 2.0)
    ));

    // gridlines and ticks
    for (v, label) in x.decade_ticks() {
        let xp = x.map(v);
        svg.push_str(&format!(
            "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#ddd\"/>\n",
            px(xp),
            px(top),
            px(bottom)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{label}</text>\n",
            px(xp),
            px(bottom + 18.0)
        ));
    }
    for (v, label) in y.decade_ticks() {
        let yp = y.map(v);
        svg.push_str(&format!(
            "<line x1=\"{1}\" y1=\"{0}\" x2=\"{2}\" y2=\"{0}\" stroke=\"#ddd\"/>\n",
            px(yp),
            px(left),
            px(right)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">{label}</text>\n",
            px(left - 8.0),
            px(yp + 4.0)
        ));
    }
    svg.push_str(&format!(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#333\"/>\n",
        px(left),
        px(top),
        px(right - left),
        px(bottom - top)
    ));

    // interquartile bands first so lines draw above them
    for s in series {
        if s.points.len() < 2 {
            continue;
        }
        let mut pts = String::new();
        for &(d, _, _, p75) in &s.points {
            pts.push_str(&format!("{},{} ", px(x.map(d)), px(y.map(p75))));
        }
        for &(d, _, p25, _) in s.points.iter().rev() {
            pts.push_str(&format!("{},{} ", px(x.map(d)), px(y.map(p25))));
        }
        svg.push_str(&format!(
            "<polygon points=\"{}\" fill=\"{}\" fill-opacity=\"0.15\" stroke=\"none\"/>\n",
            pts.trim_end(),
            s.color
        ));
    }
    for s in series {
        let mut pts = String::new();
        for &(d, mean, _, _) in &s.points {
            pts.push_str(&format!("{},{} ", px(x.map(d)), px(y.map(mean))));
        }
        svg.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>\n",
            pts.trim_end(),
            s.color
        ));
        for &(d, mean, _, _) in &s.points {
            svg.push_str(&format!(
                "<circle cx=\"{}\" cy=\"{}\" r=\"2.5\" fill=\"{}\"/>\n",
                px(x.map(d)),
                px(y.map(mean)),
                s.color
            ));
        }
    }

    // axis labels and legend
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\">step size δ (log scale)</text>\n",
        px((left + right) / 2.0),
        px(bottom + 40.0)
    ));
    svg.push_str(&format!(
        "<text x=\"20\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\" \
         transform=\"rotate(-90 20 {})\">min ESS across coordinates (log scale)</text>\n",
        px((top + bottom) / 2.0),
        px((top + bottom) / 2.0)
    ));
    for (i, s) in series.iter().enumerate() {
        let ly = top + 20.0 + 22.0 * i as f64;
        svg.push_str(&format!(
            "<rect x=\"{}\" y=\"{}\" width=\"16\" height=\"4\" fill=\"{}\"/>\n",
            px(right + 20.0),
            px(ly - 4.0),
            s.color
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"13\">{}</text>\n",
            px(right + 42.0),
            px(ly),
            s.label
        ));
    }

    svg.push_str("</svg>\n");
    svg
}

// ---------------------------------------------------------------------------
// Marching squares
// ---------------------------------------------------------------------------

/// Line segments of the `values == level` contour on a rectangular grid.
/// `values` is row-major over `ys × xs`; cells with non-finite corners are
/// skipped.
pub fn contour_segments(xs: &[f64], ys: &[f64], values: &[f64], level: f64) -> Vec<Seg> {
    assert_eq!(values.len(), xs.len() * ys.len());
    let nx = xs.len();
    let mut segs = Vec::new();

    for iy in 0..ys.len().saturating_sub(1) {
        for ix in 0..nx - 1 {
            let v00 = values[iy * nx + ix];
            let v10 = values[iy * nx + ix + 1];
            let v01 = values[(iy + 1) * nx + ix];
            let v11 = values[(iy + 1) * nx + ix + 1];
            if !(v00.is_finite() && v10.is_finite() && v01.is_finite() && v11.is_finite()) {
                continue;
            }
            let (x0, x1, y0, y1) = (xs[ix], xs[ix + 1], ys[iy], ys[iy + 1]);

            let lerp = |a: f64, b: f64| (level - a) / (b - a);
            // edge crossing points: bottom, right, top, left
            let b = || (x0 + lerp(v00, v10) * (x1 - x0), y0);
            let r = || (x1, y0 + lerp(v10, v11) * (y1 - y0));
            let t = || (x0 + lerp(v01, v11) * (x1 - x0), y1);
            let l = || (x0, y0 + lerp(v00, v01) * (y1 - y0));

            let case = (v00 > level) as u8
                | ((v10 > level) as u8) << 1
                | ((v11 > level) as u8) << 2
                | ((v01 > level) as u8) << 3;

            match case {
                0 | 15 => {}
                1 => segs.push((l(), b())),
                2 => segs.push((b(), r())),
                3 => segs.push((l(), r())),
                4 => segs.push((t(), r())),
                6 => segs.push((b(), t())),
                7 => segs.push((l(), t())),
                8 => segs.push((l(), t())),
                9 => segs.push((b(), t())),
                11 => segs.push((t(), r())),
                12 => segs.push((l(), r())),
                13 => segs.push((b(), r())),
                14 => segs.push((l(), b())),
                5 => {
                    // saddle: disambiguate with the cell center
                    if (v00 + v10 + v01 + v11) / 4.0 > level {
                        segs.push((l(), t()));
                        segs.push((b(), r()));
                    } else {
                        segs.push((l(), b()));
                        segs.push((t(), r()));
                    }
                }
                10 => {
                    if (v00 + v10 + v01 + v11) / 4.0 > level {
                        segs.push((l(), b()));
                        segs.push((t(), r()));
                    } else {
                        segs.push((l(), t()));
                        segs.push((b(), r()));
                    }
                }
                _ => unreachable!(),
            }
        }
    }
    segs
}

/// Contours of a scalar field at levels `max − drop` for each drop,
/// evaluated on a `grid_n × grid_n` grid over `bounds = (xmin, xmax, ymin,
/// ymax)`.
pub fn density_contours(
    f: impl Fn(f64, f64) -> f64,
    bounds: (f64, f64, f64, f64),
    grid_n: usize,
    level_drops: &[f64],
) -> Vec<Seg> {
    let (xmin, xmax, ymin, ymax) = bounds;
    let xs: Vec<f64> = (0..grid_n)
        .map(|i| xmin + (xmax - xmin) * i as f64 / (grid_n - 1) as f64)
        .collect();
    let ys: Vec<f64> = (0..grid_n)
        .map(|i| ymin + (ymax - ymin) * i as f64 / (grid_n - 1) as f64)
        .collect();
    let mut values = Vec::with_capacity(grid_n * grid_n);
    let mut vmax = f64::NEG_INFINITY;
    for &y in &ys {
        for &x in &xs {
            let v = f(x, y);
            if v.is_finite() {
                vmax = vmax.max(v);
            }
            values.push(v);
        }
    }
    if !vmax.is_finite() {
        return Vec::new();
    }
    level_drops
        .iter()
        .flat_map(|drop| contour_segments(&xs, &ys, &values, vmax - drop))
        .collect()
}

// ---------------------------------------------------------------------------
// Cloud plot
// ---------------------------------------------------------------------------

pub struct CloudPlot {
    pub title: String,
    pub xlabel: String,
    pub ylabel: String,
    pub color: &'static str,
    /// (xmin, xmax, ymin, ymax) in data coordinates.
    pub bounds: (f64, f64, f64, f64),
    pub contours: Vec<Seg>,
    pub accepted: Vec<(f64, f64)>,
    pub rejected: Vec<(f64, f64)>,
    pub anchors: Vec<(f64, f64)>,
}

struct LinAxis {
    lo: f64,
    hi: f64,
    px_lo: f64,
    px_hi: f64,
}

impl LinAxis {
    fn map(&self, v: f64) -> f64 {
        self.px_lo + (v - self.lo) / (self.hi - self.lo) * (self.px_hi - self.px_lo)
    }

    /// Ticks at a 1/2/5 × 10^k step giving roughly six divisions.
    fn ticks(&self) -> Vec<f64> {
        let range = self.hi - self.lo;
        let raw = range / 6.0;
        let mag = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 5.0, 10.0]
            .iter()
            .map(|m| m * mag)
            .find(|&s| s >= raw)
            .unwrap_or(mag * 10.0);
        let first = (self.lo / step).ceil() as i64;
        let last = (self.hi / step).floor() as i64;
        (first..=last).map(|k| k as f64 * step).collect()
    }
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let a = v.abs();
    if a >= 100.0 {
        format!("{v:.0}")
    } else if a >= 1.0 {
        let s = format!("{v:.1}");
        s.strip_suffix(".0").map(str::to_string).unwrap_or(s)
    } else {
        format!("{v:.2}")
    }
}

/// Scatter of proposals over log-density contours. Accepted proposals draw
/// solid, rejected ones faded; anchors are black crosses.
pub fn render_cloud_svg(plot: &CloudPlot) -> String {
    let (width, height) = (720.0, 640.0);
    let (left, right, top, bottom) = (70.0, 680.0, 50.0, 575.0);
    let (xmin, xmax, ymin, ymax) = plot.bounds;

    let x = LinAxis {
        lo: xmin,
        hi: xmax,
        px_lo: left,
        px_hi: right,
    };
    let y = LinAxis {
        lo: ymin,
        hi: ymax,
        px_lo: bottom,
        px_hi: top,
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\" font-family=\"sans-serif\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"28\" font-size=\"15\" text-anchor=\"middle\">{}</text>\n",
        px((left + right) / 2.0),
        plot.title
    ));

    for v in x.ticks() {
        let xp = x.map(v);
        svg.push_str(&format!(
            "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#eee\"/>\n",
            px(xp),
            px(top),
            px(bottom)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
            px(xp),
            px(bottom + 16.0),
            fmt_tick(v)
        ));
    }
    for v in y.ticks() {
        let yp = y.map(v);
        svg.push_str(&format!(
            "<line x1=\"{1}\" y1=\"{0}\" x2=\"{2}\" y2=\"{0}\" stroke=\"#eee\"/>\n",
            px(yp),
            px(left),
            px(right)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">{}</text>\n",
            px(left - 6.0),
            px(yp + 4.0),
            fmt_tick(v)
        ));
    }
    svg.push_str(&format!(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#333\"/>\n",
        px(left),
        px(top),
        px(right - left),
        px(bottom - top)
    ));

    svg.push_str("<g stroke=\"#999\" stroke-width=\"0.8\">\n");
    for &((ax, ay), (bx, by)) in &plot.contours {
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n",
            px(x.map(ax)),
            px(y.map(ay)),
            px(x.map(bx)),
            px(y.map(by))
        ));
    }
    svg.push_str("</g>\n");

    for (points, opacity) in [(&plot.rejected, "0.25"), (&plot.accepted, "0.85")] {
        svg.push_str(&format!(
            "<g fill=\"{}\" fill-opacity=\"{opacity}\">\n",
            plot.color
        ));
        for &(cx, cy) in points.iter() {
            svg.push_str(&format!(
                "<circle cx=\"{}\" cy=\"{}\" r=\"2.4\"/>\n",
                px(x.map(cx)),
                px(y.map(cy))
            ));
        }
        svg.push_str("</g>\n");
    }

    svg.push_str("<g stroke=\"black\" stroke-width=\"1.8\">\n");
    for &(ax, ay) in &plot.anchors {
        let (cx, cy) = (x.map(ax), y.map(ay));
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n",
            px(cx - 5.0),
            px(cy - 5.0),
            px(cx + 5.0),
            px(cy + 5.0)
        ));
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n",
            px(cx - 5.0),
            px(cy + 5.0),
            px(cx + 5.0),
            px(cy - 5.0)
        ));
    }
    svg.push_str("</g>\n");

    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
        px((left + right) / 2.0),
        px(bottom + 40.0),
        plot.xlabel
    ));
    svg.push_str(&format!(
        "<text x=\"20\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\" \
         transform=\"rotate(-90 20 {})\">{}</text>\n",
        px((top + bottom) / 2.0),
        px((top + bottom) / 2.0),
        plot.ylabel
    ));

    svg.push_str("</svg>\n");
    svg
}
