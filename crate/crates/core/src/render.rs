//! SVG and JSON emission for patches.
//!
//! Both emitters quantize coordinates to 12 significant digits through the
//! same [`round_sig`] grid, which is what makes the render byte-identical
//! whether it starts from a freshly generated patch or from one parsed back
//! out of its JSON form.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::LatticeRank;
use crate::projection::PlanePoint;
use crate::tiling::{AcceptedPoint, BoundaryMode, LatticeKind, Patch, PatchKind, PlacedTile};

/// Styling for [`render_svg`].
#[derive(Debug, Clone)]
pub struct RenderStyle {
    /// Fill colors by class label. Classes not listed here get evenly
    /// spaced hues assigned by their position in the sorted label list.
    pub palette: BTreeMap<String, String>,
    /// Outline width in pixels.
    pub stroke_width: f64,
    /// Pixels per unit length; must be positive.
    pub scale: f64,
    /// Blank border around the drawing, in pixels.
    pub margin: f64,
}

impl Default for RenderStyle {
    fn default() -> Self {
        Self {
            palette: BTreeMap::new(),
            stroke_width: 1.0,
            scale: 40.0,
            margin: 16.0,
        }
    }
}

/// Round to 12 significant digits. Idempotent, and shared by the SVG and
/// JSON emitters so the two formats agree on every coordinate.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    let exp = x.abs().log10().floor() as i32;
    let factor = 10f64.powi(11 - exp);
    (x * factor).round() / factor
}

/// Deterministic default palette: evenly spaced hues in label order.
pub fn default_palette(labels: &[String]) -> BTreeMap<String, String> {
    let count = labels.len().max(1);
    labels
        .iter()
        .enumerate()
        .map(|(i, label)| {
            let hue = 360.0 * i as f64 / count as f64;
            (label.clone(), hsl_hex(hue, 0.55, 0.62))
        })
        .collect()
}

fn hsl_hex(h: f64, s: f64, l: f64) -> String {
    let c = (1.0 - (2.0 * l - 1.0).abs()) * s;
    let hp = h / 60.0;
    let x = c * (1.0 - (hp.rem_euclid(2.0) - 1.0).abs());
    let (r, g, b) = match hp as i32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = l - c / 2.0;
    let byte = |v: f64| ((v + m) * 255.0).round().clamp(0.0, 255.0) as u8;
    format!("#{:02x}{:02x}{:02x}", byte(r), byte(g), byte(b))
}

fn fmt_num(v: f64) -> String {
    format!("{}", round_sig(v))
}

/// Render a patch as an SVG document. One polygon per tile, filled by
/// class; a patch with points but no tiles draws the points as small
/// diamonds; an empty patch yields a valid document with a comment saying
/// why it is blank.
pub fn render_svg(patch: &Patch, style: &RenderStyle) -> Result<String> {
    if !style.scale.is_finite() || style.scale <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "render scale must be positive, got {}",
            style.scale
        )));
    }
    if !style.stroke_width.is_finite() || style.stroke_width < 0.0 {
        return Err(Error::InvalidInput(format!(
            "stroke width must be nonnegative, got {}",
            style.stroke_width
        )));
    }
    if !style.margin.is_finite() || style.margin < 0.0 {
        return Err(Error::InvalidInput(format!(
            "margin must be nonnegative, got {}",
            style.margin
        )));
    }

    let tiles: Vec<(&str, Vec<(f64, f64)>)> = patch
        .tiles
        .iter()
        .map(|t| {
            let verts = t
                .vertices
                .iter()
                .map(|v| (round_sig(v.x), round_sig(v.y)))
                .collect();
            (t.label.as_str(), verts)
        })
        .collect();
    let markers: Vec<(f64, f64)> = if tiles.is_empty() {
        patch
            .points
            .iter()
            .map(|p| (round_sig(p.position.x), round_sig(p.position.y)))
            .collect()
    } else {
        Vec::new()
    };

    let mut bounds: Option<(f64, f64, f64, f64)> = None;
    for &(x, y) in tiles.iter().flat_map(|(_, v)| v.iter()).chain(&markers) {
        bounds = Some(match bounds {
            None => (x, x, y, y),
            Some((x0, x1, y0, y1)) => (x0.min(x), x1.max(x), y0.min(y), y1.max(y)),
        });
    }

    let Some((min_x, max_x, min_y, max_y)) = bounds else {
        let note = match &patch.diagnostic {
            Some(d) => format!(" ({})", d.replace("--", "-")),
            None => String::new(),
        };
        return Ok(format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 64 64\" \
             width=\"64\" height=\"64\">\n<!-- empty patch: no accepted tiles \
             or points{note} -->\n</svg>\n"
        ));
    };

    let width = round_sig((max_x - min_x) * style.scale + 2.0 * style.margin);
    let height = round_sig((max_y - min_y) * style.scale + 2.0 * style.margin);
    let to_px = |x: f64, y: f64| {
        (
            round_sig((x - min_x) * style.scale + style.margin),
            round_sig((max_y - y) * style.scale + style.margin),
        )
    };

    let labels = patch.class_labels();
    let defaults = default_palette(&labels);
    let fill_for = |label: &str| -> &str {
        style
            .palette
            .get(label)
            .or_else(|| defaults.get(label))
            .map(String::as_str)
            .unwrap_or("#888888")
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {w} {h}\" \
         width=\"{w}\" height=\"{h}\">",
        w = fmt_num(width),
        h = fmt_num(height),
    );
    let _ = writeln!(
        out,
        "<g stroke=\"#20232a\" stroke-width=\"{}\" stroke-linejoin=\"round\">",
        fmt_num(style.stroke_width),
    );
    for (label, verts) in &tiles {
        let mut pts = String::new();
        for (i, &(x, y)) in verts.iter().enumerate() {
            let (px, py) = to_px(x, y);
            if i > 0 {
                pts.push(' ');
            }
            let _ = write!(pts, "{},{}", fmt_num(px), fmt_num(py));
        }
        let _ = writeln!(
            out,
            "<polygon points=\"{pts}\" fill=\"{}\"/>",
            fill_for(label),
        );
    }
    let half = round_sig((0.06 * style.scale).max(1.5));
    for &(x, y) in &markers {
        let (px, py) = to_px(x, y);
        let _ = writeln!(
            out,
            "<polygon points=\"{},{} {},{} {},{} {},{}\" fill=\"#39424e\"/>",
            fmt_num(px),
            fmt_num(round_sig(py - half)),
            fmt_num(round_sig(px + half)),
            fmt_num(py),
            fmt_num(px),
            fmt_num(round_sig(py + half)),
            fmt_num(round_sig(px - half)),
            fmt_num(py),
        );
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}

/// Serialize a patch to its JSON form. Beyond the core fields (`n`, `h`,
/// `lattice`, `shift`, `radius`, `tiles`), the object carries a `points`
/// array so point-only patches survive the round trip.
pub fn patch_to_json(patch: &Patch) -> Value {
    let tiles: Vec<Value> = patch
        .tiles
        .iter()
        .map(|t| {
            json!({
                "class": t.label,
                "vertices": t
                    .vertices
                    .iter()
                    .map(|v| json!([round_sig(v.x), round_sig(v.y)]))
                    .collect::<Vec<Value>>(),
                "source": t.source,
            })
        })
        .collect();
    let points: Vec<Value> = patch
        .points
        .iter()
        .map(|p| {
            json!({
                "coords": p.coords,
                "position": [round_sig(p.position.x), round_sig(p.position.y)],
                "index": p.index,
                "on_boundary": p.on_boundary,
            })
        })
        .collect();
    json!({
        "n": patch.rank.n(),
        "h": patch.rank.h(),
        "lattice": match patch.lattice {
            LatticeKind::Root => "root",
            LatticeKind::Weight => "weight",
        },
        "shift": patch
            .shift
            .iter()
            .map(|g| round_sig(*g))
            .collect::<Vec<f64>>(),
        "radius": round_sig(patch.radius),
        "tiles": tiles,
        "points": points,
    })
}

/// [`patch_to_json`] rendered as a stable pretty-printed string.
pub fn patch_json_string(patch: &Patch) -> String {
    let mut text = serde_json::to_string_pretty(&patch_to_json(patch))
        .expect("a patch serializes without fallible values");
    text.push('\n');
    text
}

fn field<'a>(obj: &'a serde_json::Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::InvalidInput(format!("patch JSON is missing {key:?}")))
}

fn as_f64(value: &Value, what: &str) -> Result<f64> {
    value
        .as_f64()
        .ok_or_else(|| Error::InvalidInput(format!("{what} must be a number")))
}

fn as_i64(value: &Value, what: &str) -> Result<i64> {
    value
        .as_i64()
        .ok_or_else(|| Error::InvalidInput(format!("{what} must be an integer")))
}

fn plane_point(value: &Value, what: &str) -> Result<PlanePoint> {
    let pair = value
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Error::InvalidInput(format!("{what} must be an [x, y] pair")))?;
    Ok(PlanePoint::new(
        as_f64(&pair[0], what)?,
        as_f64(&pair[1], what)?,
    ))
}

/// Parse a patch back out of its JSON form.
pub fn patch_from_json(text: &str) -> Result<Patch> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| Error::InvalidInput(format!("patch JSON does not parse: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::InvalidInput("patch JSON must be an object".into()))?;

    let n = as_i64(field(obj, "n")?, "n")?;
    if n < 1 {
        return Err(Error::InvalidInput(format!("rank n must be positive, got {n}")));
    }
    let rank = LatticeRank::new(n as usize)?;
    let h = as_i64(field(obj, "h")?, "h")?;
    if h != rank.h() as i64 {
        return Err(Error::InvalidInput(format!(
            "h must be n + 1 = {}, got {h}",
            rank.h()
        )));
    }
    let lattice = match field(obj, "lattice")?.as_str() {
        Some("root") => LatticeKind::Root,
        Some("weight") => LatticeKind::Weight,
        other => {
            return Err(Error::InvalidInput(format!(
                "lattice must be \"root\" or \"weight\", got {other:?}"
            )))
        }
    };
    let shift: Vec<f64> = field(obj, "shift")?
        .as_array()
        .ok_or_else(|| Error::InvalidInput("shift must be an array".into()))?
        .iter()
        .map(|v| as_f64(v, "shift entry"))
        .collect::<Result<_>>()?;
    if shift.len() != rank.n().saturating_sub(2) {
        return Err(Error::InvalidInput(format!(
            "shift must have {} entries for rank {}, got {}",
            rank.n().saturating_sub(2),
            rank.n(),
            shift.len()
        )));
    }
    let radius = as_f64(field(obj, "radius")?, "radius")?;
    if !(radius > 0.0) {
        return Err(Error::InvalidInput(format!(
            "radius must be positive, got {radius}"
        )));
    }

    let mut tiles = Vec::new();
    for entry in field(obj, "tiles")?
        .as_array()
        .ok_or_else(|| Error::InvalidInput("tiles must be an array".into()))?
    {
        let tile = entry
            .as_object()
            .ok_or_else(|| Error::InvalidInput("each tile must be an object".into()))?;
        let label = field(tile, "class")?
            .as_str()
            .ok_or_else(|| Error::InvalidInput("tile class must be a string".into()))?
            .to_owned();
        let vertices: Vec<PlanePoint> = field(tile, "vertices")?
            .as_array()
            .ok_or_else(|| Error::InvalidInput("tile vertices must be an array".into()))?
            .iter()
            .map(|v| plane_point(v, "tile vertex"))
            .collect::<Result<_>>()?;
        if vertices.len() < 3 {
            return Err(Error::InvalidInput(format!(
                "tile {label:?} has {} vertices; a tile needs at least 3",
                vertices.len()
            )));
        }
        let source: Vec<i64> = field(tile, "source")?
            .as_array()
            .ok_or_else(|| Error::InvalidInput("tile source must be an array".into()))?
            .iter()
            .map(|v| as_i64(v, "tile source entry"))
            .collect::<Result<_>>()?;
        tiles.push(PlacedTile {
            label,
            vertices,
            source,
        });
    }

    let mut points = Vec::new();
    if let Some(list) = obj.get("points").and_then(Value::as_array) {
        for entry in list {
            let point = entry
                .as_object()
                .ok_or_else(|| Error::InvalidInput("each point must be an object".into()))?;
            let coords: Vec<i64> = field(point, "coords")?
                .as_array()
                .ok_or_else(|| Error::InvalidInput("point coords must be an array".into()))?
                .iter()
                .map(|v| as_i64(v, "point coordinate"))
                .collect::<Result<_>>()?;
            points.push(AcceptedPoint {
                coords,
                position: plane_point(field(point, "position")?, "point position")?,
                index: as_i64(field(point, "index")?, "point index")?,
                on_boundary: field(point, "on_boundary")?.as_bool().ok_or_else(|| {
                    Error::InvalidInput("point on_boundary must be a boolean".into())
                })?,
            });
        }
    }

    let kind = if tiles.iter().any(|t| t.label.starts_with("triangle-")) {
        PatchKind::Triangular
    } else {
        PatchKind::Rhombic
    };
    let boundary_mode = if shift.iter().all(|g| *g == 0.0) {
        BoundaryMode::Closed
    } else {
        BoundaryMode::Excluded
    };
    Ok(Patch {
        rank,
        lattice,
        kind,
        radius,
        shift,
        tiles,
        points,
        boundary_mode,
        singular_count: 0,
        diagnostic: None,
    })
}
