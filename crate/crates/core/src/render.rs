//! SVG drawing of a certificate: positive- and negative-weight placements in
//! two panels, each region labeled with the summed weight of the copies
//! covering it.

use std::fmt::Write as _;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::certify::{Certificate, Placement};
use crate::rational::{fmt_rational, Rational};
use crate::tiles::WeightedTile;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderOptions {
    /// Pixels per unit length.
    pub scale: f64,
    pub margin: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            scale: 40.0,
            margin: 24.0,
        }
    }
}

fn placed(prototile: &WeightedTile, p: &Placement) -> WeightedTile {
    prototile
        .rescale(&p.scale)
        .expect("validated scale")
        .translate(&p.shift.0, &p.shift.1)
}

fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

struct Frame {
    x0: f64,
    y1: f64,
    width: f64,
    height: f64,
    opts: RenderOptions,
}

impl Frame {
    fn x(&self, offset: f64, u: &Rational) -> f64 {
        offset + self.opts.margin + (to_f64(u) - self.x0) * self.opts.scale
    }

    /// SVG y grows downward.
    fn y(&self, v: &Rational) -> f64 {
        2.0 * self.opts.margin + (self.y1 - to_f64(v)) * self.opts.scale
    }

    fn panel_width(&self) -> f64 {
        self.width * self.opts.scale + 2.0 * self.opts.margin
    }
}

fn panel(
    out: &mut String,
    frame: &Frame,
    offset: f64,
    title: &str,
    c: &Certificate,
    sign_positive: bool,
) {
    let chosen: Vec<&Placement> = c
        .placements
        .iter()
        .filter(|p| p.weight.is_positive() == sign_positive)
        .collect();
    let pieces: Vec<(Rational, crate::tiles::Rect)> = chosen
        .iter()
        .flat_map(|p| placed(&c.prototile, p).scale_weights(&p.weight).to_rects())
        .collect();
    let sum = WeightedTile::from_rects(&pieces);
    let s = frame.opts.scale;
    writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="14" text-anchor="middle">{}</text>"#,
        offset + frame.panel_width() / 2.0,
        frame.opts.margin,
        title
    )
    .unwrap();
    writeln!(out, "<g>").unwrap();
    for (r, w) in sum.cells() {
        let (x, y) = (frame.x(offset, r.x0()), frame.y(r.y1()));
        let (wd, ht) = (
            to_f64(&(r.x1() - r.x0())) * s,
            to_f64(&(r.y1() - r.y0())) * s,
        );
        let fill = if w.is_positive() {
            "#c6dbef"
        } else {
            "#fcbba1"
        };
        writeln!(
            out,
            r#"<rect x="{x:.2}" y="{y:.2}" width="{wd:.2}" height="{ht:.2}" fill="{fill}" stroke="none"/>"#
        )
        .unwrap();
        let font = (wd.min(ht) * 0.4).min(14.0);
        writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="{font:.2}" text-anchor="middle" dominant-baseline="middle">{}</text>"#,
            x + wd / 2.0,
            y + ht / 2.0,
            fmt_rational(w)
        )
        .unwrap();
    }
    writeln!(out, "</g>").unwrap();
    writeln!(out, r#"<g fill="none" stroke="black" stroke-width="1">"#).unwrap();
    for p in &chosen {
        for (r, _) in placed(&c.prototile, p).cells() {
            let (x, y) = (frame.x(offset, r.x0()), frame.y(r.y1()));
            let (wd, ht) = (
                to_f64(&(r.x1() - r.x0())) * s,
                to_f64(&(r.y1() - r.y0())) * s,
            );
            writeln!(
                out,
                r#"<rect x="{x:.2}" y="{y:.2}" width="{wd:.2}" height="{ht:.2}"/>"#
            )
            .unwrap();
        }
    }
    writeln!(out, "</g>").unwrap();
    let (ax, ay) = &c.target_anchor;
    let side = &c.target_side;
    writeln!(
        out,
        r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black" stroke-width="2" stroke-dasharray="6 4"/>"#,
        frame.x(offset, ax),
        frame.y(&(ay + side)),
        to_f64(side) * s,
        to_f64(side) * s
    )
    .unwrap();
}

/// Renders `c` as a standalone SVG document. Output depends only on the
/// certificate and the options.
pub fn render_certificate(c: &Certificate, opts: RenderOptions) -> String {
    let (ax, ay) = &c.target_anchor;
    let mut xs = vec![ax.clone(), ax + &c.target_side];
    let mut ys = vec![ay.clone(), ay + &c.target_side];
    for p in &c.placements {
        if let Some((x0, x1, y0, y1)) = placed(&c.prototile, p).bounding_box() {
            xs.extend([x0, x1]);
            ys.extend([y0, y1]);
        }
    }
    let min = |v: &[Rational]| v.iter().min().cloned().unwrap_or_else(Rational::zero);
    let max = |v: &[Rational]| v.iter().max().cloned().unwrap_or_else(Rational::zero);
    let frame = Frame {
        x0: to_f64(&min(&xs)),
        y1: to_f64(&max(&ys)),
        width: to_f64(&(max(&xs) - min(&xs))),
        height: to_f64(&(max(&ys) - min(&ys))),
        opts,
    };
    let pw = frame.panel_width();
    let total_w = 2.0 * pw;
    let total_h = frame.height * opts.scale + 3.0 * opts.margin;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total_w:.2}" height="{total_h:.2}" viewBox="0 0 {total_w:.2} {total_h:.2}" font-family="sans-serif">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    panel(&mut out, &frame, 0.0, "Tiles with positive weight", c, true);
    panel(&mut out, &frame, pw, "Tiles with negative weight", c, false);
    out.push_str("</svg>\n");
    out
}
