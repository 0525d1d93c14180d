//! Hand-rendered inline SVG histograms: 20 equal-width bins, no external
//! plotting dependency, byte-deterministic output.

/// Assign values to `bins` equal-width bins over [min, max]. The maximum
/// value lands in the last bin, so the counts always sum to `values.len()`.
pub(crate) fn bin_counts(values: &[f64], bins: usize) -> (Vec<usize>, f64, f64) {
    debug_assert!(bins > 0);
    let mut counts = vec![0usize; bins];
    if values.is_empty() {
        return (counts, 0.0, 0.0);
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = max - min;
    for &v in values {
        let slot = if width == 0.0 {
            0
        } else {
            (((v - min) / width) * bins as f64).floor() as usize
        };
        counts[slot.min(bins - 1)] += 1;
    }
    (counts, min, max)
}

const PLOT_WIDTH: f64 = 460.0;
const PLOT_HEIGHT: f64 = 260.0;
const MARGIN_LEFT: f64 = 46.0;
const MARGIN_RIGHT: f64 = 12.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 40.0;

/// Render one histogram as a standalone `<svg>` element.
pub(crate) fn histogram_svg(title: &str, values: &[f64], bins: usize) -> String {
    let (counts, min, max) = bin_counts(values, bins);
    let peak = counts.iter().copied().max().unwrap_or(0).max(1);

    let inner_width = PLOT_WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let inner_height = PLOT_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let bar_width = inner_width / bins as f64;
    let base_y = MARGIN_TOP + inner_height;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg class=\"histogram\" viewBox=\"0 0 {PLOT_WIDTH:.0} {PLOT_HEIGHT:.0}\" \
         width=\"{PLOT_WIDTH:.0}\" height=\"{PLOT_HEIGHT:.0}\" role=\"img\" \
         xmlns=\"http://www.w3.org/2000/svg\">\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"18\" class=\"plot-title\" text-anchor=\"middle\">{}</text>\n",
        PLOT_WIDTH / 2.0,
        super::html::escape(title)
    ));

    for (i, &count) in counts.iter().enumerate() {
        let height = inner_height * count as f64 / peak as f64;
        let x = MARGIN_LEFT + bar_width * i as f64;
        svg.push_str(&format!(
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\"><title>{} \
             instance(s)</title></rect>\n",
            x,
            base_y - height,
            (bar_width - 1.0).max(0.5),
            height,
            count
        ));
    }

    // axes
    svg.push_str(&format!(
        "<line x1=\"{MARGIN_LEFT:.1}\" y1=\"{base_y:.1}\" x2=\"{:.1}\" y2=\"{base_y:.1}\" \
         class=\"axis\"/>\n",
        MARGIN_LEFT + inner_width
    ));
    svg.push_str(&format!(
        "<line x1=\"{MARGIN_LEFT:.1}\" y1=\"{MARGIN_TOP:.1}\" x2=\"{MARGIN_LEFT:.1}\" \
         y2=\"{base_y:.1}\" class=\"axis\"/>\n"
    ));

    // tick labels: x range ends and midpoint, y zero and peak
    let mid = (min + max) / 2.0;
    for (value, frac) in [(min, 0.0), (mid, 0.5), (max, 1.0)] {
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" class=\"tick\" text-anchor=\"middle\">{value:.2}</text>\n",
            MARGIN_LEFT + inner_width * frac,
            base_y + 16.0
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" class=\"tick\" text-anchor=\"end\">0</text>\n",
        MARGIN_LEFT - 6.0,
        base_y + 4.0
    ));
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" class=\"tick\" text-anchor=\"end\">{peak}</text>\n",
        MARGIN_LEFT - 6.0,
        MARGIN_TOP + 4.0
    ));

    svg.push_str("</svg>\n");
    svg
}
