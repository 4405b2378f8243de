//! The built-in theory registry.
//!
//! Four families are registered, looked up by name:
//!
//! * `R` — the free rule lifted to full states, links frozen and ignored.
//! * `T` — the gauged rule.
//! * `T-pre:<transform literal>` — gauge with a fixed transform, then `T`.
//! * `T-post:<transform literal>` — `T`, then gauge with a fixed transform.

use crate::ca::{self, FullState, MatterConfig, Theory};
use crate::error::Error;
use crate::gauge::{self, GaugeField, GaugeTransform};

/// The free rule acting on full states: matter steps as if no links existed,
/// the field is carried along untouched.
pub struct FreeTheory;

impl Theory for FreeTheory {
    fn name(&self) -> &str {
        "R"
    }

    fn step(&self, state: &FullState) -> FullState {
        FullState::new(ca::step_r(state.psi()), state.field().clone())
            .expect("dimensions preserved")
    }
}

/// The gauged rule on full states.
pub struct GaugedTheory;

impl Theory for GaugedTheory {
    fn name(&self) -> &str {
        "T"
    }

    fn step(&self, state: &FullState) -> FullState {
        gauge::step_t(state)
    }
}

/// A fixed gauge transform applied before every gauged step.
pub struct PreGauged {
    name: String,
    transform: GaugeTransform,
}

impl PreGauged {
    pub fn new(transform: GaugeTransform) -> PreGauged {
        PreGauged {
            name: format!("T-pre:{transform}"),
            transform,
        }
    }
}

impl Theory for PreGauged {
    fn name(&self) -> &str {
        &self.name
    }

    fn step(&self, state: &FullState) -> FullState {
        gauge::step_t(&gauge::gauge_state(&self.transform, state))
    }
}

/// A fixed gauge transform applied after every gauged step.
pub struct PostGauged {
    name: String,
    transform: GaugeTransform,
}

impl PostGauged {
    pub fn new(transform: GaugeTransform) -> PostGauged {
        PostGauged {
            name: format!("T-post:{transform}"),
            transform,
        }
    }
}

impl Theory for PostGauged {
    fn name(&self) -> &str {
        &self.name
    }

    fn step(&self, state: &FullState) -> FullState {
        gauge::gauge_state(&self.transform, &gauge::step_t(state))
    }
}

/// Resolves a registry name against a concrete ring length and color count
/// (needed to validate embedded transform literals).
pub fn lookup(name: &str, len: usize, colors: u8) -> Result<Box<dyn Theory>, Error> {
    if name == "R" {
        return Ok(Box::new(FreeTheory));
    }
    if name == "T" {
        return Ok(Box::new(GaugedTheory));
    }
    if let Some(literal) = name.strip_prefix("T-pre:") {
        let g = parse_transform(literal, len, colors)?;
        return Ok(Box::new(PreGauged::new(g)));
    }
    if let Some(literal) = name.strip_prefix("T-post:") {
        let g = parse_transform(literal, len, colors)?;
        return Ok(Box::new(PostGauged::new(g)));
    }
    Err(Error::invalid(format!(
        "unknown theory name `{name}` (expected R, T, T-pre:<transform> or T-post:<transform>)"
    )))
}

fn parse_transform(literal: &str, len: usize, colors: u8) -> Result<GaugeTransform, Error> {
    let g = GaugeTransform::parse(literal, colors)?;
    if g.len() != len {
        return Err(Error::invalid(format!(
            "theory transform has {} sites, expected {len}",
            g.len()
        )));
    }
    Ok(g)
}

/// Runs `theory` for `steps` steps and returns every state visited,
/// the initial one included.
pub fn trajectory(theory: &dyn Theory, initial: &FullState, steps: u32) -> Vec<FullState> {
    let mut states = Vec::with_capacity(steps as usize + 1);
    states.push(initial.clone());
    for _ in 0..steps {
        let next = theory.step(states.last().expect("nonempty"));
        states.push(next);
    }
    states
}

/// Convenience for tests and examples: a full state from literals.
pub fn state_from_literals(
    psi: &str,
    field: &str,
    colors: u8,
) -> Result<FullState, Error> {
    FullState::new(
        MatterConfig::parse(psi, colors)?,
        GaugeField::parse(field, colors)?,
    )
}
