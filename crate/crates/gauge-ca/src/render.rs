//! Deterministic renderings of trajectories: glyph rows, binary PPM, JSON.
//!
//! Rows are printed latest-first so that time runs upward, matching the usual
//! way spacetime diagrams of these systems are drawn.

use crate::ca::FullState;
use crate::error::Error;
use crate::perm::Color;

/// Glyph shown between cells for an identity link.
pub const LINK_IDENTITY_GLYPH: char = '|';
/// Glyph shown between cells for a non-identity link.
pub const LINK_ACTIVE_GLYPH: char = 'X';

const DEFAULT_GLYPHS: [char; 6] = ['.', '#', '+', 'o', 'x', '*'];
const DEFAULT_RGB: [[u8; 3]; 6] = [
    [255, 255, 255], // white
    [0, 0, 0],       // black
    [128, 128, 128], // gray
    [200, 60, 60],
    [60, 60, 200],
    [60, 200, 60],
];

/// Pixel block edge for one subcell in PPM output.
pub const PPM_BLOCK: usize = 8;

/// Maps each color to a text glyph and an RGB triple.
///
/// Textual form: `glyph:r,g,b` entries joined by `;`, one per color,
/// e.g. `.:255,255,255;#:0,0,0;+:128,128,128`.
#[derive(Debug, Clone)]
pub struct Palette {
    entries: Vec<(char, [u8; 3])>,
}

impl Palette {
    /// The built-in palette: white, black, gray, then three accent colors.
    pub fn default_for(colors: u8) -> Result<Palette, Error> {
        if usize::from(colors) > DEFAULT_GLYPHS.len() {
            return Err(Error::invalid(format!(
                "no default palette for {colors} colors; supply one with `palette =`"
            )));
        }
        Ok(Palette {
            entries: (0..usize::from(colors))
                .map(|i| (DEFAULT_GLYPHS[i], DEFAULT_RGB[i]))
                .collect(),
        })
    }

    pub fn parse(text: &str, colors: u8) -> Result<Palette, Error> {
        let entries = text
            .split(';')
            .map(|entry| {
                let (glyph, rgb) = entry.trim().split_once(':').ok_or_else(|| {
                    Error::invalid(format!("palette entry `{entry}` must look like glyph:r,g,b"))
                })?;
                let mut chars = glyph.chars();
                let glyph = match (chars.next(), chars.next()) {
                    (Some(c), None) => c,
                    _ => {
                        return Err(Error::invalid(format!(
                            "palette glyph `{glyph}` must be a single character"
                        )))
                    }
                };
                let parts = rgb
                    .split(',')
                    .map(|tok| {
                        tok.trim()
                            .parse::<u8>()
                            .map_err(|_| Error::invalid(format!("bad channel `{}`", tok.trim())))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                match parts.as_slice() {
                    [r, g, b] => Ok((glyph, [*r, *g, *b])),
                    _ => Err(Error::invalid(format!(
                        "palette entry `{entry}` needs exactly three channels"
                    ))),
                }
            })
            .collect::<Result<Vec<_>, Error>>()?;
        if entries.len() != usize::from(colors) {
            return Err(Error::invalid(format!(
                "palette has {} entries, expected {colors}",
                entries.len()
            )));
        }
        Ok(Palette { entries })
    }

    pub fn glyph(&self, c: Color) -> char {
        self.entries[usize::from(c)].0
    }

    pub fn rgb(&self, c: Color) -> [u8; 3] {
        self.entries[usize::from(c)].1
    }
}

/// One glyph row per state, latest state first. Each cell is its two subcell
/// glyphs followed by the glyph of the link to its right neighbour; the last
/// link wraps back to cell 0.
pub fn render_text(states: &[FullState], palette: &Palette) -> String {
    let mut out = String::new();
    for state in states.iter().rev() {
        for (x, cell) in state.psi().cells().iter().enumerate() {
            out.push(palette.glyph(cell.l));
            out.push(palette.glyph(cell.r));
            out.push(if state.field().link(x).is_identity() {
                LINK_IDENTITY_GLYPH
            } else {
                LINK_ACTIVE_GLYPH
            });
        }
        out.push('\n');
    }
    out
}

/// Binary P6 image, one `PPM_BLOCK`² block per subcell, latest state on top.
pub fn render_ppm(states: &[FullState], palette: &Palette) -> Vec<u8> {
    let len = states[0].len();
    let width = 2 * len * PPM_BLOCK;
    let height = states.len() * PPM_BLOCK;
    let mut out = format!("P6\n{width} {height}\n255\n").into_bytes();
    out.reserve(width * height * 3);
    for state in states.iter().rev() {
        let mut row = Vec::with_capacity(width * 3);
        for cell in state.psi().cells() {
            for c in [cell.l, cell.r] {
                let rgb = palette.rgb(c);
                for _ in 0..PPM_BLOCK {
                    row.extend_from_slice(&rgb);
                }
            }
        }
        for _ in 0..PPM_BLOCK {
            out.extend_from_slice(&row);
        }
    }
    out
}

/// The full state sequence in time order, states as textual literals.
pub fn render_json(states: &[FullState]) -> serde_json::Value {
    let first = &states[0];
    serde_json::json!({
        "K": first.color_count(),
        "L": first.len(),
        "steps": states.len() - 1,
        "states": states
            .iter()
            .map(|s| serde_json::json!({
                "psi": s.psi().to_string(),
                "field": s.field().to_string(),
            }))
            .collect::<Vec<_>>(),
    })
}
