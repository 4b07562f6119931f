//! Static SVG figures: data points as circles, quantile boundaries as
//! polylines clipped to the viewport by generous ray extension, and
//! per-point depth labels on small samples.

use conequant::{DataSet, Halfspace, QuantileResult, Vec2};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const PALETTE: [&str; 5] = ["#1b6ca8", "#d1495b", "#2e933c", "#8a4f7d", "#c98c1e"];

struct Frame {
    xmin: f64,
    ymin: f64,
    sx: f64,
    sy: f64,
}

impl Frame {
    /// World rectangle to pixels, y flipped to mathematical orientation.
    fn map(&self, p: Vec2) -> (f64, f64) {
        (
            (p.x - self.xmin) * self.sx,
            HEIGHT - (p.y - self.ymin) * self.sy,
        )
    }
}

fn frame(window: [f64; 4]) -> Frame {
    let [mut xmin, mut xmax, mut ymin, mut ymax] = window;
    if xmax - xmin < 1e-12 {
        xmin -= 1.0;
        xmax += 1.0;
    }
    if ymax - ymin < 1e-12 {
        ymin -= 1.0;
        ymax += 1.0;
    }
    Frame {
        xmin,
        ymin,
        sx: WIDTH / (xmax - xmin),
        sy: HEIGHT / (ymax - ymin),
    }
}

/// Data bounding box with a 10% margin on every side, widened to include
/// the quantile corners so no boundary bend is cropped.
fn default_window(data: &DataSet, levels: &[(f64, QuantileResult)]) -> [f64; 4] {
    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    let mut grow = |p: Vec2| {
        xmin = xmin.min(p.x);
        xmax = xmax.max(p.x);
        ymin = ymin.min(p.y);
        ymax = ymax.max(p.y);
    };
    for &p in data.points() {
        grow(p);
    }
    for (_, q) in levels {
        for &v in &q.poly.vertices {
            grow(v);
        }
    }
    let mx = 0.1 * (xmax - xmin).max(1.0);
    let my = 0.1 * (ymax - ymin).max(1.0);
    [xmin - mx, xmax + mx, ymin - my, ymax + my]
}

fn boundary_points(q: &QuantileResult, reach: f64) -> Vec<Vec2> {
    let hrep = &q.poly.hrep;
    let mut corners = Vec::new();
    for pair in hrep.windows(2) {
        if let Some(c) = Halfspace::boundary_intersection(&pair[0], &pair[1], 1e-12) {
            corners.push(c);
        }
    }
    if corners.is_empty() {
        return corners;
    }
    let mut pts = Vec::with_capacity(corners.len() + 2);
    // The extreme facets run parallel to the recession generators, so the
    // unbounded edges leave the first and last corners along them.
    let d1 = q.poly.rec_dirs[0];
    let d2 = q.poly.rec_dirs[1];
    pts.push(corners[0] + d1 * (reach / d1.norm()));
    pts.extend(corners.iter().copied());
    let last = *corners.last().unwrap();
    pts.push(last + d2 * (reach / d2.norm()));
    pts
}

/// Renders the figure. Depth labels are drawn when `depths` is given, one
/// per data point in order.
pub fn plot(
    data: &DataSet,
    levels: &[(f64, QuantileResult)],
    depths: Option<&[usize]>,
    window: Option<[f64; 4]>,
) -> String {
    let window = window.unwrap_or_else(|| default_window(data, levels));
    let fr = frame(window);
    let reach = 4.0 * (window[1] - window[0]).max(window[3] - window[2]).max(1.0);
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    out.push_str("<rect width=\"800\" height=\"600\" fill=\"white\"/>\n");
    for (i, (p, q)) in levels.iter().enumerate() {
        let pts = boundary_points(q, reach);
        if pts.is_empty() {
            continue;
        }
        let coords: Vec<String> = pts
            .iter()
            .map(|&w| {
                let (x, y) = fr.map(w);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let color = PALETTE[i % PALETTE.len()];
        out.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" \
             points=\"{}\"><title>p = {p}</title></polyline>\n",
            coords.join(" ")
        ));
    }
    for &p in data.points() {
        let (x, y) = fr.map(p);
        out.push_str(&format!(
            "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3\" fill=\"#30343a\"/>\n"
        ));
    }
    if let Some(depths) = depths {
        for (&p, &k) in data.points().iter().zip(depths) {
            let (x, y) = fr.map(p);
            out.push_str(&format!(
                "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" \
                 font-size=\"10\" fill=\"#555555\">{k}</text>\n",
                x + 5.0,
                y - 5.0
            ));
        }
    }
    out.push_str("</svg>\n");
    out
}
