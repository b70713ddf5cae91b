//! Deterministic SVG dot map of per-zone crime intensity.
//!
//! One circle per ranked zone, placed by the gazetteer's normalized map
//! coordinates. Dots grow with the crime count up to a limit radius and
//! shift from orange toward pure red as the count approaches the maximum.
//! The writer emits attributes with exactly two decimal places and contains
//! no timestamps or randomness, so equal input renders byte-identical SVG.

use std::fmt::Write as _;

use thiserror::Error;

use crate::lexicon::{Gazetteer, LocationKind};

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("zone {0:?} has no gazetteer coordinates")]
    MissingCoordinates(String),
    #[error("bad color {0:?}, expected #RRGGBB")]
    BadColor(String),
}

/// 24-bit RGB color, formatted as uppercase `#RRGGBB`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rgb(pub u8, pub u8, pub u8);

impl Rgb {
    pub fn parse(text: &str) -> Result<Rgb, RenderError> {
        let hex = text.strip_prefix('#').unwrap_or(text);
        if hex.len() != 6 || !hex.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(RenderError::BadColor(text.to_string()));
        }
        let channel = |i: usize| u8::from_str_radix(&hex[i..i + 2], 16).unwrap();
        Ok(Rgb(channel(0), channel(2), channel(4)))
    }
}

impl std::fmt::Display for Rgb {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "#{:02X}{:02X}{:02X}", self.0, self.1, self.2)
    }
}

/// Dot sizing and color ramp. The defaults give radius
/// `min(3 + 1.5·(count − 1), 15)` and an orange-to-red ramp.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderOptions {
    pub min_radius: f64,
    pub radius_step: f64,
    pub max_radius: f64,
    /// Color at count 1 (when some zone has a higher count).
    pub ramp_from: Rgb,
    /// Color at the maximum count.
    pub ramp_to: Rgb,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            min_radius: 3.0,
            radius_step: 1.5,
            max_radius: 15.0,
            ramp_from: Rgb(0xFF, 0xA5, 0x00),
            ramp_to: Rgb(0xFF, 0x00, 0x00),
        }
    }
}

/// One circle of the map.
#[derive(Debug, Clone, PartialEq)]
pub struct DotSpec {
    pub zone: String,
    pub count: u64,
    /// Center, in canvas pixels.
    pub x: f64,
    pub y: f64,
    pub radius: f64,
    pub color: Rgb,
}

fn lerp_channel(from: u8, to: u8, t: f64) -> u8 {
    (from as f64 + (to as f64 - from as f64) * t).round() as u8
}

/// Place one dot per ranked zone. Zones are looked up in the gazetteer by
/// name, district first (rankings are district-level by default), then
/// thana, then division.
pub fn layout_dots(
    ranking: &[(String, u64)],
    gazetteer: &Gazetteer,
    canvas_w: u32,
    canvas_h: u32,
    options: &RenderOptions,
) -> Result<Vec<DotSpec>, RenderError> {
    let max_count = ranking.iter().map(|(_, n)| *n).max().unwrap_or(0);
    let mut dots = Vec::with_capacity(ranking.len());
    for (zone, count) in ranking {
        let location = [LocationKind::District, LocationKind::Thana, LocationKind::Division]
            .iter()
            .find_map(|&kind| gazetteer.find(zone, kind))
            .ok_or_else(|| RenderError::MissingCoordinates(zone.clone()))?;
        let radius = (options.min_radius
            + options.radius_step * (count.saturating_sub(1)) as f64)
            .min(options.max_radius);
        // single-count maps render the hot end of the ramp
        let t = if max_count > 1 {
            (*count as f64 - 1.0) / (max_count as f64 - 1.0)
        } else {
            1.0
        };
        let color = Rgb(
            lerp_channel(options.ramp_from.0, options.ramp_to.0, t),
            lerp_channel(options.ramp_from.1, options.ramp_to.1, t),
            lerp_channel(options.ramp_from.2, options.ramp_to.2, t),
        );
        dots.push(DotSpec {
            zone: zone.clone(),
            count: *count,
            x: location.map_x * canvas_w as f64,
            y: location.map_y * canvas_h as f64,
            radius,
            color,
        });
    }
    Ok(dots)
}

fn escape_xml(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Emit a standalone SVG 1.1 document: the optional background image, then
/// one circle per dot in ranking order, each titled "zone: count".
pub fn render_svg(
    dots: &[DotSpec],
    background: Option<&str>,
    canvas_w: u32,
    canvas_h: u32,
) -> Vec<u8> {
    let (w, h) = (canvas_w as f64, canvas_h as f64);
    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" xmlns:xlink=\"http://www.w3.org/1999/xlink\" \
         version=\"1.1\" width=\"{w:.2}\" height=\"{h:.2}\" viewBox=\"0 0 {w:.2} {h:.2}\">"
    );
    match background {
        Some(href) => {
            let _ = writeln!(
                svg,
                "  <image x=\"0.00\" y=\"0.00\" width=\"{w:.2}\" height=\"{h:.2}\" \
                 xlink:href=\"{}\"/>",
                escape_xml(href)
            );
        }
        None => {
            let _ = writeln!(
                svg,
                "  <rect x=\"0.00\" y=\"0.00\" width=\"{w:.2}\" height=\"{h:.2}\" \
                 fill=\"#F8F8F2\"/>"
            );
        }
    }
    for dot in dots {
        let _ = writeln!(
            svg,
            "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"{:.2}\" fill=\"{}\" fill-opacity=\"0.80\" \
             stroke=\"#5A0000\" stroke-width=\"0.50\"><title>{}: {}</title></circle>",
            dot.x,
            dot.y,
            dot.radius,
            dot.color,
            escape_xml(&dot.zone),
            dot.count
        );
    }
    svg.push_str("</svg>\n");
    svg.into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::parse_gazetteer;

    fn gazetteer() -> Gazetteer {
        parse_gazetteer(
            "name,kind,parent,map_x,map_y\n\
             ঢাকা,district,,0.45,0.40\n\
             সিলেট,district,,0.78,0.25\n",
            "t",
        )
        .unwrap()
    }

    fn rank(pairs: &[(&str, u64)]) -> Vec<(String, u64)> {
        pairs.iter().map(|(z, n)| (z.to_string(), *n)).collect()
    }

    #[test]
    fn radius_grows_from_minimum_and_clamps() {
        let options = RenderOptions::default();
        let g = gazetteer();
        let dots = layout_dots(&rank(&[("ঢাকা", 1)]), &g, 800, 1000, &options).unwrap();
        assert_eq!(dots[0].radius, 3.0);

        let dots = layout_dots(&rank(&[("ঢাকা", 1000)]), &g, 800, 1000, &options).unwrap();
        assert_eq!(dots[0].radius, 15.0);
    }

    #[test]
    fn hand_evaluated_sizes_and_colors() {
        let options = RenderOptions::default();
        let dots = layout_dots(
            &rank(&[("সিলেট", 5), ("ঢাকা", 1)]),
            &gazetteer(),
            800,
            1000,
            &options,
        )
        .unwrap();
        // radius(5) = min(3 + 1.5·4, 15) = 9
        assert_eq!(dots[0].radius, 9.0);
        assert_eq!(dots[0].color, Rgb(0xFF, 0x00, 0x00));
        assert_eq!(dots[1].color, Rgb(0xFF, 0xA5, 0x00));
        // placement scales the normalized coordinates
        assert!((dots[0].x - 0.78 * 800.0).abs() < 1e-9);
        assert!((dots[0].y - 0.25 * 1000.0).abs() < 1e-9);
    }

    #[test]
    fn single_count_map_renders_hot() {
        let dots = layout_dots(
            &rank(&[("ঢাকা", 1), ("সিলেট", 1)]),
            &gazetteer(),
            800,
            1000,
            &RenderOptions::default(),
        )
        .unwrap();
        assert!(dots.iter().all(|d| d.color == Rgb(0xFF, 0x00, 0x00)));
    }

    #[test]
    fn missing_zone_coordinates_reported() {
        let err = layout_dots(
            &rank(&[("কোথাও-না", 3)]),
            &gazetteer(),
            800,
            1000,
            &RenderOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, RenderError::MissingCoordinates(z) if z == "কোথাও-না"));
    }

    #[test]
    fn radius_and_red_are_monotone_in_count() {
        let options = RenderOptions::default();
        let g = gazetteer();
        let mut previous_radius = 0.0;
        for count in 1..40u64 {
            let dots = layout_dots(&rank(&[("ঢাকা", count)]), &g, 800, 1000, &options).unwrap();
            assert!(dots[0].radius >= previous_radius);
            assert!(dots[0].radius >= options.min_radius);
            assert!(dots[0].radius <= options.max_radius);
            previous_radius = dots[0].radius;
        }
        // red channel along a fixed ramp with growing count
        let mut previous_red = 0;
        for count in 1..=10u64 {
            let dots = layout_dots(
                &rank(&[("ঢাকা", count), ("সিলেট", 10)]),
                &g,
                800,
                1000,
                &options,
            )
            .unwrap();
            assert!(dots[0].color.0 >= previous_red);
            previous_red = dots[0].color.0;
        }
    }

    #[test]
    fn svg_is_deterministic_and_shaped() {
        let dots = layout_dots(
            &rank(&[("ঢাকা", 4), ("সিলেট", 2)]),
            &gazetteer(),
            800,
            1000,
            &RenderOptions::default(),
        )
        .unwrap();
        let first = render_svg(&dots, None, 800, 1000);
        let second = render_svg(&dots, None, 800, 1000);
        assert_eq!(first, second);

        let text = String::from_utf8(first).unwrap();
        assert_eq!(text.matches("<circle").count(), 2);
        assert!(text.contains("<title>ঢাকা: 4</title>"));
        assert!(text.contains("r=\"7.50\""));

        let empty = String::from_utf8(render_svg(&[], None, 800, 1000)).unwrap();
        assert!(empty.contains("<svg") && empty.ends_with("</svg>\n"));
        assert_eq!(empty.matches("<circle").count(), 0);

        let with_bg = String::from_utf8(render_svg(&dots, Some("bd_map.png"), 800, 1000)).unwrap();
        assert!(with_bg.contains("xlink:href=\"bd_map.png\""));
    }

    #[test]
    fn circle_centers_stay_inside_canvas() {
        let dots = layout_dots(
            &rank(&[("ঢাকা", 3), ("সিলেট", 1)]),
            &gazetteer(),
            640,
            480,
            &RenderOptions::default(),
        )
        .unwrap();
        for dot in dots {
            assert!(dot.x >= 0.0 && dot.x <= 640.0);
            assert!(dot.y >= 0.0 && dot.y <= 480.0);
        }
    }

    #[test]
    fn rgb_parsing_round_trips() {
        let c = Rgb::parse("#FFA500").unwrap();
        assert_eq!(c, Rgb(0xFF, 0xA5, 0x00));
        assert_eq!(c.to_string(), "#FFA500");
        assert!(Rgb::parse("#FFA50").is_err());
        assert!(Rgb::parse("orange").is_err());
    }
}
