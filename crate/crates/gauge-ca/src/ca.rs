//! Periodic matter configurations and the free (ungauged) transport rule.
//!
//! A site holds a two-part state `(l, r)`: the `l` value travels one site to
//! the left per step, the `r` value one site to the right. The ring wraps, so
//! everything lives on indices mod L.

use std::fmt;

use rand::Rng;

use crate::error::Error;
use crate::gauge::GaugeField;
use crate::perm::Color;

/// One site's internal state: a left-moving and a right-moving color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub l: Color,
    pub r: Color,
}

impl Cell {
    pub fn new(l: Color, r: Color) -> Cell {
        Cell { l, r }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.l, self.r)
    }
}

/// A ring of [`Cell`]s over a shared color count.
///
/// Textual form: cells joined by `;`, e.g. `1,0;0,0;2,1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatterConfig {
    cells: Vec<Cell>,
    colors: u8,
}

impl MatterConfig {
    pub fn new(cells: Vec<Cell>, colors: u8) -> Result<MatterConfig, Error> {
        if colors == 0 {
            return Err(Error::invalid("color count must be at least 1"));
        }
        if cells.is_empty() {
            return Err(Error::invalid("ring must have at least one cell"));
        }
        for (x, cell) in cells.iter().enumerate() {
            if cell.l >= colors || cell.r >= colors {
                return Err(Error::invalid(format!(
                    "cell {x} is {cell} but colors run 0..{colors}"
                )));
            }
        }
        Ok(MatterConfig { cells, colors })
    }

    /// A ring of `len` copies of one cell.
    pub fn filled(len: usize, colors: u8, cell: Cell) -> Result<MatterConfig, Error> {
        MatterConfig::new(vec![cell; len], colors)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the constructor rejects empty rings
    }

    pub fn color_count(&self) -> u8 {
        self.colors
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, x: usize) -> Cell {
        self.cells[x]
    }

    /// Parses the textual form, validating every color against `colors`.
    pub fn parse(text: &str, colors: u8) -> Result<MatterConfig, Error> {
        let cells = text
            .split(';')
            .map(|chunk| {
                let (l, r) = chunk
                    .split_once(',')
                    .ok_or_else(|| Error::invalid(format!("cell `{chunk}` must look like l,r")))?;
                let parse = |tok: &str| {
                    tok.trim()
                        .parse::<Color>()
                        .map_err(|_| Error::invalid(format!("bad color `{}` in cell", tok.trim())))
                };
                Ok(Cell::new(parse(l)?, parse(r)?))
            })
            .collect::<Result<Vec<_>, Error>>()?;
        MatterConfig::new(cells, colors)
    }
}

impl fmt::Display for MatterConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (x, cell) in self.cells.iter().enumerate() {
            if x > 0 {
                write!(f, ";")?;
            }
            write!(f, "{cell}")?;
        }
        Ok(())
    }
}

/// Matter together with the gauge field living on the links between sites.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FullState {
    pub(crate) psi: MatterConfig,
    pub(crate) field: GaugeField,
}

impl FullState {
    pub fn new(psi: MatterConfig, field: GaugeField) -> Result<FullState, Error> {
        if psi.len() != field.len() {
            return Err(Error::invalid(format!(
                "matter ring has {} sites but field has {} links",
                psi.len(),
                field.len()
            )));
        }
        if psi.color_count() != field.color_count() {
            return Err(Error::invalid(format!(
                "matter uses {} colors but field uses {}",
                psi.color_count(),
                field.color_count()
            )));
        }
        Ok(FullState { psi, field })
    }

    pub fn psi(&self) -> &MatterConfig {
        &self.psi
    }

    pub fn field(&self) -> &GaugeField {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.psi.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn color_count(&self) -> u8 {
        self.psi.color_count()
    }
}

impl fmt::Display for FullState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "psi={} field={}", self.psi, self.field)
    }
}

/// A named deterministic map on full states of fixed ring length and colors.
pub trait Theory {
    fn name(&self) -> &str;
    fn step(&self, state: &FullState) -> FullState;
}

/// One step of the free rule: each output cell takes its `l` from the right
/// neighbour and its `r` from the left neighbour.
pub fn step_r(psi: &MatterConfig) -> MatterConfig {
    let n = psi.len();
    let cells = (0..n)
        .map(|x| Cell {
            l: psi.cells[(x + 1) % n].l,
            r: psi.cells[(x + n - 1) % n].r,
        })
        .collect();
    MatterConfig {
        cells,
        colors: psi.colors,
    }
}

/// Inverse of [`step_r`]: shifts both streams back where they came from.
pub fn step_r_inverse(psi: &MatterConfig) -> MatterConfig {
    let n = psi.len();
    let cells = (0..n)
        .map(|x| Cell {
            l: psi.cells[(x + n - 1) % n].l,
            r: psi.cells[(x + 1) % n].r,
        })
        .collect();
    MatterConfig {
        cells,
        colors: psi.colors,
    }
}

/// A ring with every subcell drawn uniformly from the color set.
pub fn random_matter<R: Rng + ?Sized>(len: usize, colors: u8, rng: &mut R) -> MatterConfig {
    assert!(len >= 1 && colors >= 1);
    let cells = (0..len)
        .map(|_| Cell::new(rng.gen_range(0..colors), rng.gen_range(0..colors)))
        .collect();
    MatterConfig { cells, colors }
}
