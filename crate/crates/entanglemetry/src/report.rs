//! Stable serialization of profiles, geometry, measures, and campaign
//! results.
//!
//! Everything rides in a versioned envelope. JSON maps that carry cut
//! labels preserve insertion order (enumeration order), numbers use
//! serde_json's shortest-round-trip formatting, and serializing the same
//! payload twice yields identical bytes.

use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bipartition::ConcurrenceProfile;
use crate::error::{Error, Result};
use crate::geometry::QuadrilateralGeometry;
use crate::measures::{FillReport, GmeReport};
use crate::verify::CampaignResult;

/// Envelope schema understood by this build.
pub const SCHEMA_VERSION: &str = "1.0";

/// A JSON object whose key order is the insertion order.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedMap<V>(pub Vec<(String, V)>);

impl<V: Serialize> Serialize for OrderedMap<V> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (key, value) in &self.0 {
            map.serialize_entry(key, value)?;
        }
        map.end()
    }
}

impl<'de, V: Deserialize<'de>> Deserialize<'de> for OrderedMap<V> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct MapVisitor<V>(std::marker::PhantomData<V>);
        impl<'de, V: Deserialize<'de>> Visitor<'de> for MapVisitor<V> {
            type Value = OrderedMap<V>;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a JSON object")
            }
            fn visit_map<A: MapAccess<'de>>(
                self,
                mut access: A,
            ) -> std::result::Result<Self::Value, A::Error> {
                let mut entries = Vec::new();
                while let Some((key, value)) = access.next_entry()? {
                    entries.push((key, value));
                }
                Ok(OrderedMap(entries))
            }
        }
        deserializer.deserialize_map(MapVisitor(std::marker::PhantomData))
    }
}

/// One profile entry as serialized: `{c, c2, y?}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileEntryJson {
    pub c: f64,
    pub c2: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
}

/// Profile keyed by canonical cut labels in enumeration order.
pub type ProfileJson = OrderedMap<ProfileEntryJson>;

/// Builds the serializable profile map.
pub fn profile_json(profile: &ConcurrenceProfile) -> ProfileJson {
    OrderedMap(
        profile
            .entries()
            .iter()
            .map(|e| {
                (
                    e.cut.label(),
                    ProfileEntryJson {
                        c: e.concurrence,
                        c2: e.squared,
                        y: e.schmidt_weight,
                    },
                )
            })
            .collect(),
    )
}

/// One quadrilateral as serialized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometryJson {
    pub diagonal: String,
    /// Side lengths keyed by cut label, in perimeter order.
    pub sides: OrderedMap<f64>,
    pub diagonal_len: f64,
    pub areas: [f64; 2],
    pub vertices: [[f64; 2]; 4],
    pub degenerate: [bool; 2],
}

/// Converts the in-memory geometry to its JSON shape.
pub fn geometry_json(quad: &QuadrilateralGeometry) -> GeometryJson {
    let labels = [
        quad.triangle_1.labels[0].clone(),
        quad.triangle_1.labels[1].clone(),
        quad.triangle_2.labels[0].clone(),
        quad.triangle_2.labels[1].clone(),
    ];
    GeometryJson {
        diagonal: quad.diagonal_cut.label(),
        sides: OrderedMap(
            labels
                .into_iter()
                .zip(quad.side_lengths)
                .collect(),
        ),
        diagonal_len: quad.diagonal,
        areas: [quad.area_1, quad.area_2],
        vertices: quad.vertices,
        degenerate: quad.degenerate,
    }
}

/// The three quadrilaterals of a state in one mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometryReport {
    /// `"squared"` or `"concurrence"`.
    pub mode: String,
    pub quadrilaterals: Vec<GeometryJson>,
}

/// Report payload kinds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Profile {
        profile: ProfileJson,
    },
    Gme {
        report: GmeReport,
        profile: ProfileJson,
    },
    Fill {
        report: FillReport,
        profile: ProfileJson,
    },
    Geometry(GeometryReport),
    Campaign(CampaignResult),
}

/// Versioned wrapper around every serialized artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub schema_version: String,
    pub tool_version: String,
    pub inputs_echo: String,
    pub payload: Payload,
}

impl ReportEnvelope {
    pub fn new(inputs_echo: String, payload: Payload) -> Self {
        ReportEnvelope {
            schema_version: SCHEMA_VERSION.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            inputs_echo,
            payload,
        }
    }
}

/// Deterministic pretty-printed JSON bytes, newline terminated.
pub fn serialize(envelope: &ReportEnvelope) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(envelope).expect("report serialization is total");
    bytes.push(b'\n');
    bytes
}

/// Parses an envelope, gating on the schema version before decoding the
/// payload.
pub fn deserialize(bytes: &[u8]) -> Result<ReportEnvelope> {
    #[derive(Deserialize)]
    struct VersionProbe {
        schema_version: String,
    }
    let probe: VersionProbe =
        serde_json::from_slice(bytes).map_err(|e| Error::MalformedInput {
            message: e.to_string(),
        })?;
    if probe.schema_version != SCHEMA_VERSION {
        return Err(Error::SchemaMismatch {
            version: probe.schema_version,
        });
    }
    serde_json::from_slice(bytes).map_err(|e| Error::MalformedInput {
        message: e.to_string(),
    })
}

/// Renders the three quadrilaterals side by side as a self-contained SVG,
/// sides annotated with their cut labels.
pub fn render_svg(quads: &[QuadrilateralGeometry], title: &str) -> String {
    use std::fmt::Write;

    const SCALE: f64 = 130.0;
    const PAD: f64 = 0.55;
    const CAPTION: f64 = 34.0;

    struct Cell {
        width: f64,
        height: f64,
        min_x: f64,
        max_y: f64,
    }
    let cells: Vec<Cell> = quads
        .iter()
        .map(|q| {
            let xs: Vec<f64> = q.vertices.iter().map(|v| v[0]).collect();
            let ys: Vec<f64> = q.vertices.iter().map(|v| v[1]).collect();
            let min_x = xs.iter().cloned().fold(f64::INFINITY, f64::min) - PAD;
            let max_x = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + PAD;
            let min_y = ys.iter().cloned().fold(f64::INFINITY, f64::min) - PAD;
            let max_y = ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + PAD;
            Cell {
                width: (max_x - min_x) * SCALE,
                height: (max_y - min_y) * SCALE + CAPTION,
                min_x,
                max_y,
            }
        })
        .collect();

    let total_width: f64 = cells.iter().map(|c| c.width).sum::<f64>() + 40.0;
    let total_height: f64 = cells.iter().map(|c| c.height).fold(0.0, f64::max) + 50.0;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {:.1} {:.1}\" \
         font-family=\"monospace\" font-size=\"13\">",
        total_width, total_height
    );
    let _ = writeln!(svg, "  <title>{title}</title>");
    let _ = writeln!(
        svg,
        "  <text x=\"10\" y=\"20\" font-size=\"15\">{title}</text>",
    );

    let mut offset_x = 20.0;
    for (quad, cell) in quads.iter().zip(cells.iter()) {
        let to_screen = |p: [f64; 2]| -> (f64, f64) {
            (
                offset_x + (p[0] - cell.min_x) * SCALE,
                40.0 + (cell.max_y - p[1]) * SCALE,
            )
        };
        let pts: Vec<(f64, f64)> = quad.vertices.iter().map(|&v| to_screen(v)).collect();
        let _ = writeln!(
            svg,
            "  <polygon points=\"{}\" fill=\"#fff7c2\" fill-opacity=\"0.85\" \
             stroke=\"black\" stroke-width=\"1.6\"/>",
            pts.iter()
                .map(|(x, y)| format!("{x:.2},{y:.2}"))
                .collect::<Vec<_>>()
                .join(" ")
        );
        let _ = writeln!(
            svg,
            "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" \
             stroke=\"#4a90d9\" stroke-width=\"1.2\" stroke-dasharray=\"6 4\"/>",
            pts[0].0, pts[0].1, pts[2].0, pts[2].1
        );

        let side_labels = [
            (&quad.triangle_1.labels[0], pts[0], pts[1]),
            (&quad.triangle_1.labels[1], pts[1], pts[2]),
            (&quad.triangle_2.labels[0], pts[2], pts[3]),
            (&quad.triangle_2.labels[1], pts[3], pts[0]),
            (&quad.triangle_1.labels[2], pts[0], pts[2]),
        ];
        for (label, a, b) in side_labels {
            let _ = writeln!(
                svg,
                "  <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>",
                (a.0 + b.0) / 2.0,
                (a.1 + b.1) / 2.0 - 4.0,
                label
            );
        }
        let caption = format!(
            "diagonal {} = {:.4}{}",
            quad.diagonal_cut.label(),
            quad.diagonal,
            if quad.degenerate[0] || quad.degenerate[1] {
                " (degenerate)"
            } else {
                ""
            }
        );
        let _ = writeln!(
            svg,
            "  <text x=\"{:.2}\" y=\"{:.2}\">{}</text>",
            offset_x + 4.0,
            40.0 + cell.height - CAPTION + 22.0,
            caption
        );
        offset_x += cell.width;
    }
    svg.push_str("</svg>\n");
    svg
}
