//! Static SVG scatter plot of a 2-D dataset, one marker per combination of
//! ground truth and prediction.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use oddkit_core::DataMatrix;

use crate::error::{CliError, Result};

const SIZE: f64 = 600.0;
const MARGIN: f64 = 40.0;
const LEGEND_WIDTH: f64 = 190.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Class {
    TrueInlier,
    MissedOutlier,
    FalseAlarm,
    CaughtOutlier,
}

impl Class {
    const ALL: [Class; 4] = [
        Class::TrueInlier,
        Class::FalseAlarm,
        Class::MissedOutlier,
        Class::CaughtOutlier,
    ];

    fn of(truth: u8, predicted: u8) -> Self {
        match (truth, predicted) {
            (0, 0) => Class::TrueInlier,
            (0, _) => Class::FalseAlarm,
            (_, 0) => Class::MissedOutlier,
            _ => Class::CaughtOutlier,
        }
    }

    fn css(self) -> &'static str {
        match self {
            Class::TrueInlier => "tn",
            Class::FalseAlarm => "fp",
            Class::MissedOutlier => "fn",
            Class::CaughtOutlier => "tp",
        }
    }

    fn label(self) -> &'static str {
        match self {
            Class::TrueInlier => "inlier, predicted inlier",
            Class::FalseAlarm => "inlier, predicted outlier",
            Class::MissedOutlier => "outlier, predicted inlier",
            Class::CaughtOutlier => "outlier, predicted outlier",
        }
    }

    fn marker(self, x: f64, y: f64) -> String {
        let css = self.css();
        match self {
            Class::TrueInlier => {
                format!(
                    r##"<circle class="pt {css}" cx="{x:.2}" cy="{y:.2}" r="3.5" fill="#1f77b4" fill-opacity="0.7"/>"##
                )
            }
            Class::FalseAlarm => format!(
                r##"<rect class="pt {css}" x="{:.2}" y="{:.2}" width="7" height="7" fill="#ff7f0e"/>"##,
                x - 3.5,
                y - 3.5
            ),
            Class::MissedOutlier => format!(
                r##"<polygon class="pt {css}" points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="#9467bd"/>"##,
                x,
                y - 4.5,
                x - 4.0,
                y + 3.5,
                x + 4.0,
                y + 3.5
            ),
            Class::CaughtOutlier => format!(
                r##"<path class="pt {css}" d="M{:.2},{:.2}L{:.2},{:.2}M{:.2},{:.2}L{:.2},{:.2}" stroke="#d62728" stroke-width="2"/>"##,
                x - 4.0,
                y - 4.0,
                x + 4.0,
                y + 4.0,
                x - 4.0,
                y + 4.0,
                x + 4.0,
                y - 4.0
            ),
        }
    }
}

pub fn render_scatter_svg(points: &DataMatrix, truth: &[u8], predicted: &[u8]) -> Result<String> {
    if points.cols() != 2 {
        return Err(CliError::Argument(format!(
            "scatter plots need exactly 2 features, got {}",
            points.cols()
        )));
    }
    if truth.len() != points.rows() || predicted.len() != points.rows() {
        return Err(CliError::Data(format!(
            "{} points but {} true and {} predicted labels",
            points.rows(),
            truth.len(),
            predicted.len()
        )));
    }
    let bounds = |j: usize| {
        let col = points.column(j);
        let lo = col.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi > lo {
            (lo, hi)
        } else {
            (lo - 1.0, hi + 1.0)
        }
    };
    let ((x0, x1), (y0, y1)) = (bounds(0), bounds(1));
    let span = SIZE - 2.0 * MARGIN;
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * span;
    let py = |y: f64| SIZE - MARGIN - (y - y0) / (y1 - y0) * span;

    let mut svg = String::new();
    let width = SIZE + LEGEND_WIDTH;
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{SIZE}" viewBox="0 0 {width} {SIZE}">"#
    )
    .unwrap();
    writeln!(
        svg,
        r#"<rect x="0" y="0" width="{width}" height="{SIZE}" fill="white"/>"#
    )
    .unwrap();
    writeln!(
        svg,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{span}" height="{span}" fill="none" stroke="#444"/>"##
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="{MARGIN}" y="{:.0}" font-family="sans-serif" font-size="11">x0: [{x0:.3}, {x1:.3}]   x1: [{y0:.3}, {y1:.3}]</text>"#,
        SIZE - 12.0
    )
    .unwrap();

    let mut present = [false; 4];
    for (i, row) in points.iter_rows().enumerate() {
        let class = Class::of(truth[i], predicted[i]);
        present[Class::ALL.iter().position(|&c| c == class).unwrap()] = true;
        svg.push_str(&class.marker(px(row[0]), py(row[1])));
        svg.push('\n');
    }

    svg.push_str("<g class=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n");
    let mut y = MARGIN + 10.0;
    for (class, _) in Class::ALL.iter().zip(present).filter(|(_, p)| *p) {
        let x = SIZE + 10.0;
        // legend markers use a distinct class so they are not counted as points
        svg.push_str(
            &class
                .marker(x, y)
                .replacen("class=\"pt ", "class=\"key ", 1),
        );
        writeln!(
            svg,
            "\n<text x=\"{:.0}\" y=\"{:.0}\">{}</text>",
            x + 12.0,
            y + 4.0,
            class.label()
        )
        .unwrap();
        y += 22.0;
    }
    svg.push_str("</g>\n</svg>\n");
    Ok(svg)
}

pub fn emit_scatter_plot(
    points: &DataMatrix,
    truth: &[u8],
    predicted: &[u8],
    path: &Path,
) -> Result<()> {
    let svg = render_scatter_svg(points, truth, predicted)?;
    fs::write(path, svg).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn classes(svg: &str) -> std::collections::BTreeSet<&str> {
        svg.match_indices("class=\"pt ")
            .map(|(i, m)| &svg[i + m.len()..i + m.len() + 2])
            .collect()
    }

    #[test]
    fn markers_follow_outcomes() {
        let pts = DataMatrix::from_rows(&[[0.0, 0.0], [1.0, 1.0], [2.0, 0.5], [3.0, 3.0]]).unwrap();
        let all = render_scatter_svg(&pts, &[0, 0, 1, 1], &[0, 1, 0, 1]).unwrap();
        assert_eq!(classes(&all).len(), 4);
        let correct = render_scatter_svg(&pts, &[0, 0, 1, 1], &[0, 0, 1, 1]).unwrap();
        assert_eq!(
            classes(&correct).into_iter().collect::<Vec<_>>(),
            vec!["tn", "tp"]
        );
        assert_eq!(correct.matches("<text").count(), 3);
    }

    #[test]
    fn needs_two_features() {
        let pts = DataMatrix::from_rows(&[[0.0, 0.0, 1.0]]).unwrap();
        assert!(matches!(
            render_scatter_svg(&pts, &[0], &[0]),
            Err(CliError::Argument(_))
        ));
    }

    #[test]
    fn constant_axis_does_not_divide_by_zero() {
        let pts = DataMatrix::from_rows(&[[1.0, 2.0], [1.0, 2.0]]).unwrap();
        let svg = render_scatter_svg(&pts, &[0, 1], &[0, 1]).unwrap();
        assert!(!svg.contains("NaN"));
    }
}
