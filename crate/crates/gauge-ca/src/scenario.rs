//! Line-oriented scenario files: `key = value`, one key per line, `#` for
//! comment lines. Keys: `K`, `L`, `steps`, `psi0`, `field0`, `theory`, and
//! optionally `gauge`, `seed`, `palette`.

use std::path::Path;

use crate::ca::{FullState, MatterConfig};
use crate::error::Error;
use crate::gauge::{self, GaugeField, GaugeTransform};
use crate::render::Palette;
use crate::theory;

/// A parsed and cross-validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub colors: u8,
    pub len: usize,
    pub steps: u32,
    pub psi0: MatterConfig,
    pub field0: GaugeField,
    /// Applied to the initial state (matter and field) before running.
    pub gauge: Option<GaugeTransform>,
    pub theory: String,
    pub seed: Option<u64>,
    pub palette: Palette,
}

impl Scenario {
    pub fn from_file(path: &Path) -> Result<Scenario, Error> {
        let text = std::fs::read_to_string(path)?;
        Scenario::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Scenario, Error> {
        let mut fields: Vec<(usize, String, String)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: line_no,
                field: "line".into(),
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            const KNOWN: &[&str] = &[
                "K", "L", "steps", "psi0", "field0", "gauge", "theory", "seed", "palette",
            ];
            if !KNOWN.contains(&key.as_str()) {
                return Err(Error::Parse {
                    line: line_no,
                    field: key.clone(),
                    message: format!("unknown key `{key}`"),
                });
            }
            if fields.iter().any(|(_, k, _)| k == &key) {
                return Err(Error::Parse {
                    line: line_no,
                    field: key.clone(),
                    message: "duplicate key".into(),
                });
            }
            fields.push((line_no, key, value));
        }

        let get = |key: &str| fields.iter().find(|(_, k, _)| k == key);
        let require = |key: &str| {
            get(key).ok_or_else(|| Error::Parse {
                line: 0,
                field: key.into(),
                message: "missing required key".into(),
            })
        };
        let parse_err = |line: usize, field: &str, message: String| Error::Parse {
            line,
            field: field.into(),
            message,
        };

        let (k_line, _, k_text) = require("K")?;
        let colors: u8 = k_text
            .parse()
            .ok()
            .filter(|&k| k >= 1)
            .ok_or_else(|| parse_err(*k_line, "K", format!("bad color count `{k_text}`")))?;

        let (l_line, _, l_text) = require("L")?;
        let len: usize = l_text
            .parse()
            .ok()
            .filter(|&l| l >= 1)
            .ok_or_else(|| parse_err(*l_line, "L", format!("bad ring length `{l_text}`")))?;

        let (s_line, _, s_text) = require("steps")?;
        let steps: u32 = s_text
            .parse()
            .map_err(|_| parse_err(*s_line, "steps", format!("bad step count `{s_text}`")))?;

        let (p_line, _, p_text) = require("psi0")?;
        let psi0 = MatterConfig::parse(p_text, colors)
            .map_err(|e| parse_err(*p_line, "psi0", e.to_string()))?;
        if psi0.len() != len {
            return Err(parse_err(
                *p_line,
                "psi0",
                format!("expected {len} cells, found {}", psi0.len()),
            ));
        }

        let (f_line, _, f_text) = require("field0")?;
        let field0 = GaugeField::parse(f_text, colors)
            .map_err(|e| parse_err(*f_line, "field0", e.to_string()))?;
        if field0.len() != len {
            return Err(parse_err(
                *f_line,
                "field0",
                format!("expected {len} links, found {}", field0.len()),
            ));
        }

        let gauge = match get("gauge") {
            None => None,
            Some((g_line, _, g_text)) => {
                let g = GaugeTransform::parse(g_text, colors)
                    .map_err(|e| parse_err(*g_line, "gauge", e.to_string()))?;
                if g.len() != len {
                    return Err(parse_err(
                        *g_line,
                        "gauge",
                        format!("expected {len} site operators, found {}", g.len()),
                    ));
                }
                Some(g)
            }
        };

        let (t_line, _, t_text) = require("theory")?;
        theory::lookup(t_text, len, colors)
            .map_err(|e| parse_err(*t_line, "theory", e.to_string()))?;
        let theory = t_text.clone();

        let seed = match get("seed") {
            None => None,
            Some((seed_line, _, seed_text)) => Some(seed_text.parse::<u64>().map_err(|_| {
                parse_err(*seed_line, "seed", format!("bad seed `{seed_text}`"))
            })?),
        };

        let palette = match get("palette") {
            None => Palette::default_for(colors)
                .map_err(|e| parse_err(0, "palette", e.to_string()))?,
            Some((pal_line, _, pal_text)) => Palette::parse(pal_text, colors)
                .map_err(|e| parse_err(*pal_line, "palette", e.to_string()))?,
        };

        Ok(Scenario {
            colors,
            len,
            steps,
            psi0,
            field0,
            gauge,
            theory,
            seed,
            palette,
        })
    }

    /// The state the run starts from, with the optional transform applied.
    pub fn initial_state(&self) -> FullState {
        let state = FullState::new(self.psi0.clone(), self.field0.clone())
            .expect("scenario validation matched dimensions");
        match &self.gauge {
            None => state,
            Some(g) => gauge::gauge_state(g, &state),
        }
    }
}
