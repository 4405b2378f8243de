//! The verification engine: decides gauge-invariance properties by
//! exhaustive or seeded randomized search, computes orbits (invariant sets)
//! of matter, field, and joint states, and checks theory equivalence both by
//! its definition and by the three-statement characterization.
//!
//! Exhaustive enumerations run in lexicographic order of the textual
//! serialization (matter cells, then field links), so a reported witness is
//! always the canonically smallest one found.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ca::{Cell, FullState, MatterConfig, Theory};
use crate::error::Error;
use crate::gauge::{self, GaugeField, GaugeTransform};
use crate::perm::{self, Color, Perm};

/// Default ceiling on evaluated cases for exhaustive searches.
pub const DEFAULT_CASE_BOUND: u128 = 10_000_000;

/// Default trial count for randomized searches.
pub const DEFAULT_TRIALS: u64 = 10_000;

/// Default seed for randomized searches.
pub const DEFAULT_SEED: u64 = 0;

/// How a check walks its domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Every state and transform of the domain, in lexicographic order.
    Exhaustive,
    /// `trials` independent samples from the seeded stream.
    Randomized { trials: u64, seed: u64 },
}

/// The (ring length, color count) a check runs over, plus its search mode.
#[derive(Debug, Clone)]
pub struct Domain {
    pub len: usize,
    pub colors: u8,
    pub mode: Mode,
    pub case_bound: u128,
}

impl Domain {
    pub fn exhaustive(len: usize, colors: u8) -> Domain {
        Domain {
            len,
            colors,
            mode: Mode::Exhaustive,
            case_bound: DEFAULT_CASE_BOUND,
        }
    }

    pub fn randomized(len: usize, colors: u8, trials: u64, seed: u64) -> Domain {
        Domain {
            len,
            colors,
            mode: Mode::Randomized { trials, seed },
            case_bound: DEFAULT_CASE_BOUND,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        })
    }
}

/// One side of a violated equality; matter-only for the field-indexed rule,
/// a full state otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SideValue {
    Matter(MatterConfig),
    Full(FullState),
}

impl SideValue {
    fn to_json(&self) -> serde_json::Value {
        match self {
            SideValue::Matter(m) => serde_json::json!({ "psi": m.to_string() }),
            SideValue::Full(s) => serde_json::json!({
                "psi": s.psi().to_string(),
                "field": s.field().to_string(),
            }),
        }
    }
}

impl fmt::Display for SideValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SideValue::Matter(m) => write!(f, "psi={m}"),
            SideValue::Full(s) => write!(f, "{s}"),
        }
    }
}

/// A concrete case exhibiting a violation. For equational checks all fields
/// are present; for simulation checks only the unsimulable input state is.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub state: FullState,
    pub transform: Option<GaugeTransform>,
    pub lhs: Option<SideValue>,
    pub rhs: Option<SideValue>,
}

impl Witness {
    pub fn to_json(&self) -> serde_json::Value {
        let mut obj = serde_json::json!({
            "state": {
                "psi": self.state.psi().to_string(),
                "field": self.state.field().to_string(),
            },
        });
        if let Some(g) = &self.transform {
            obj["transform"] = serde_json::Value::String(g.to_string());
        }
        if let Some(v) = &self.lhs {
            obj["lhs"] = v.to_json();
        }
        if let Some(v) = &self.rhs {
            obj["rhs"] = v.to_json();
        }
        obj
    }

    /// Key used to pick the canonically smallest witness independent of
    /// evaluation order.
    fn rank(&self) -> (FullState, Option<GaugeTransform>) {
        (self.state.clone(), self.transform.clone())
    }
}

/// Outcome of one check.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub verdict: Verdict,
    /// Cases examined: (state, transform) pairs for equational checks,
    /// input states for simulation-style checks.
    pub trials: u64,
    pub witness: Option<Witness>,
    pub elapsed: Duration,
}

impl CheckReport {
    fn pass(trials: u64, elapsed: Duration) -> CheckReport {
        CheckReport {
            verdict: Verdict::Pass,
            trials,
            witness: None,
            elapsed,
        }
    }

    fn fail(trials: u64, witness: Witness, elapsed: Duration) -> CheckReport {
        CheckReport {
            verdict: Verdict::Fail,
            trials,
            witness: Some(witness),
            elapsed,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut obj = serde_json::json!({
            "verdict": self.verdict.to_string(),
            "trials": self.trials,
            "elapsed_ms": self.elapsed.as_millis() as u64,
        });
        if let Some(w) = &self.witness {
            obj["witness"] = w.to_json();
        }
        obj
    }
}

fn ensure_cases(needed: u128, bound: u128) -> Result<(), Error> {
    if needed > bound {
        Err(Error::ResourceLimit { needed, bound })
    } else {
        Ok(())
    }
}

/// Index arithmetic over all states of a fixed (L, K): every matter ring,
/// field, transform, and full state gets a dense index whose order matches
/// the lexicographic order of the value.
struct StateSpace {
    len: usize,
    colors: u8,
    perms: Vec<Perm>,
}

impl StateSpace {
    fn new(len: usize, colors: u8) -> Result<StateSpace, Error> {
        if len == 0 {
            return Err(Error::invalid("ring length must be at least 1"));
        }
        let perms = perm::enumerate(colors)?;
        Ok(StateSpace { len, colors, perms })
    }

    fn cell_count(&self) -> u128 {
        u128::from(self.colors) * u128::from(self.colors)
    }

    fn matter_total(&self) -> u128 {
        self.cell_count()
            .checked_pow(self.len as u32)
            .unwrap_or(u128::MAX)
    }

    fn ring_total(&self) -> u128 {
        (self.perms.len() as u128)
            .checked_pow(self.len as u32)
            .unwrap_or(u128::MAX)
    }

    fn full_total(&self) -> u128 {
        self.matter_total()
            .checked_mul(self.ring_total())
            .unwrap_or(u128::MAX)
    }

    fn matter(&self, mut idx: u128) -> MatterConfig {
        let base = self.cell_count();
        let k = u128::from(self.colors);
        let mut cells = vec![Cell::new(0, 0); self.len];
        for x in (0..self.len).rev() {
            let d = idx % base;
            idx /= base;
            cells[x] = Cell::new((d / k) as Color, (d % k) as Color);
        }
        MatterConfig::new(cells, self.colors).expect("decoded cells valid")
    }

    fn perm_ring(&self, mut idx: u128) -> Vec<Perm> {
        let base = self.perms.len() as u128;
        let mut ring = vec![self.perms[0].clone(); self.len];
        for i in (0..self.len).rev() {
            ring[i] = self.perms[(idx % base) as usize].clone();
            idx /= base;
        }
        ring
    }

    fn field(&self, idx: u128) -> GaugeField {
        GaugeField::new(self.perm_ring(idx)).expect("decoded ring valid")
    }

    fn transform(&self, idx: u128) -> GaugeTransform {
        GaugeTransform::new(self.perm_ring(idx)).expect("decoded ring valid")
    }

    fn full(&self, idx: u128) -> FullState {
        let fields = self.ring_total();
        FullState::new(self.matter(idx / fields), self.field(idx % fields))
            .expect("decoded state valid")
    }

    fn matter_index(&self, m: &MatterConfig) -> u128 {
        let k = u128::from(self.colors);
        m.cells().iter().fold(0u128, |acc, c| {
            acc * self.cell_count() + u128::from(c.l) * k + u128::from(c.r)
        })
    }

    fn perm_rank(&self, p: &Perm) -> u128 {
        self.perms
            .binary_search(p)
            .expect("permutation belongs to the enumerated group") as u128
    }

    fn field_index(&self, a: &GaugeField) -> u128 {
        a.links().iter().fold(0u128, |acc, p| {
            acc * self.perms.len() as u128 + self.perm_rank(p)
        })
    }

    fn full_index(&self, s: &FullState) -> u128 {
        self.matter_index(s.psi()) * self.ring_total() + self.field_index(s.field())
    }

    fn all_transforms(&self) -> Vec<GaugeTransform> {
        (0..self.ring_total()).map(|i| self.transform(i)).collect()
    }

    /// Matter rings fixed pointwise by `g`: the product over sites of
    /// (fixed points of the site operator)².
    fn fixed_matter(&self, g: &GaugeTransform) -> u128 {
        g.sites()
            .iter()
            .map(|s| u128::from(s.fixed_points()) * u128::from(s.fixed_points()))
            .product()
    }

    /// Fields fixed by `g`: per link, the number of group elements `a` with
    /// `s_{i+1} ∘ a = a ∘ s_i`.
    fn fixed_field(&self, g: &GaugeTransform) -> u128 {
        let n = self.len;
        (0..n)
            .map(|i| {
                let left = g.site(i);
                let right = g.site((i + 1) % n);
                self.perms
                    .iter()
                    .filter(|a| right.compose(a) == a.compose(left))
                    .count() as u128
            })
            .product()
    }
}

/// All matter rings of the given shape, lexicographically ordered.
pub fn all_matter_configs(len: usize, colors: u8) -> Result<Vec<MatterConfig>, Error> {
    let space = StateSpace::new(len, colors)?;
    ensure_cases(space.matter_total(), DEFAULT_CASE_BOUND)?;
    Ok((0..space.matter_total()).map(|i| space.matter(i)).collect())
}

/// All gauge fields of the given shape, lexicographically ordered.
pub fn all_gauge_fields(len: usize, colors: u8) -> Result<Vec<GaugeField>, Error> {
    let space = StateSpace::new(len, colors)?;
    ensure_cases(space.ring_total(), DEFAULT_CASE_BOUND)?;
    Ok((0..space.ring_total()).map(|i| space.field(i)).collect())
}

/// All gauge transforms of the given shape, lexicographically ordered.
pub fn all_gauge_transforms(len: usize, colors: u8) -> Result<Vec<GaugeTransform>, Error> {
    let space = StateSpace::new(len, colors)?;
    ensure_cases(space.ring_total(), DEFAULT_CASE_BOUND)?;
    Ok(space.all_transforms())
}

/// All full states of the given shape, lexicographically ordered.
pub fn all_full_states(len: usize, colors: u8) -> Result<Vec<FullState>, Error> {
    let space = StateSpace::new(len, colors)?;
    ensure_cases(space.full_total(), DEFAULT_CASE_BOUND)?;
    Ok((0..space.full_total()).map(|i| space.full(i)).collect())
}

fn keep_smaller(current: Option<Witness>, candidate: Witness) -> Option<Witness> {
    Some(match current {
        None => candidate,
        Some(old) => {
            if candidate.rank() < old.rank() {
                candidate
            } else {
                old
            }
        }
    })
}

/// Checks `z(g) ∘ theory = theory ∘ g` over the domain: transforming then
/// stepping must equal stepping then applying the transported transform.
pub fn check_gauge_invariance<Z>(
    theory: &dyn Theory,
    z: Z,
    domain: &Domain,
) -> Result<CheckReport, Error>
where
    Z: Fn(&GaugeTransform) -> GaugeTransform,
{
    let started = Instant::now();
    match domain.mode {
        Mode::Exhaustive => {
            let space = StateSpace::new(domain.len, domain.colors)?;
            let cases = space
                .full_total()
                .checked_mul(space.ring_total())
                .unwrap_or(u128::MAX);
            ensure_cases(cases, domain.case_bound)?;
            let mut trials = 0u64;
            for si in 0..space.full_total() {
                let state = space.full(si);
                let stepped = theory.step(&state);
                for gi in 0..space.ring_total() {
                    let g = space.transform(gi);
                    trials += 1;
                    let lhs = gauge::gauge_state(&z(&g), &stepped);
                    let rhs = theory.step(&gauge::gauge_state(&g, &state));
                    if lhs != rhs {
                        let witness = Witness {
                            state,
                            transform: Some(g),
                            lhs: Some(SideValue::Full(lhs)),
                            rhs: Some(SideValue::Full(rhs)),
                        };
                        return Ok(CheckReport::fail(trials, witness, started.elapsed()));
                    }
                }
            }
            Ok(CheckReport::pass(trials, started.elapsed()))
        }
        Mode::Randomized { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut found: Option<Witness> = None;
            for _ in 0..trials {
                let state = gauge::random_full_state(domain.len, domain.colors, &mut rng);
                let g = gauge::random_transform(domain.len, domain.colors, &mut rng);
                let lhs = gauge::gauge_state(&z(&g), &theory.step(&state));
                let rhs = theory.step(&gauge::gauge_state(&g, &state));
                if lhs != rhs {
                    found = keep_smaller(
                        found,
                        Witness {
                            state,
                            transform: Some(g),
                            lhs: Some(SideValue::Full(lhs)),
                            rhs: Some(SideValue::Full(rhs)),
                        },
                    );
                }
            }
            Ok(match found {
                None => CheckReport::pass(trials, started.elapsed()),
                Some(w) => CheckReport::fail(trials, w, started.elapsed()),
            })
        }
    }
}

/// Checks the field-indexed invariance of the transported rule: gauging the
/// output equals stepping under the gauged field from gauged matter.
pub fn check_inhomogeneous(domain: &Domain) -> Result<CheckReport, Error> {
    check_inhomogeneous_with(gauge::gauge_field, domain)
}

/// Same check with a pluggable field action, so a deliberately broken action
/// can be shown to fail (and the real one to pass).
fn check_inhomogeneous_with<F>(field_action: F, domain: &Domain) -> Result<CheckReport, Error>
where
    F: Fn(&GaugeTransform, &GaugeField) -> GaugeField,
{
    let started = Instant::now();
    let evaluate = |state: &FullState, g: &GaugeTransform| {
        let lhs = gauge::gauge_matter(&gauge::z_map(g), &gauge::step_ra(state.field(), state.psi()));
        let rhs = gauge::step_ra(
            &field_action(g, state.field()),
            &gauge::gauge_matter(g, state.psi()),
        );
        (lhs, rhs)
    };
    match domain.mode {
        Mode::Exhaustive => {
            let space = StateSpace::new(domain.len, domain.colors)?;
            let cases = space
                .full_total()
                .checked_mul(space.ring_total())
                .unwrap_or(u128::MAX);
            ensure_cases(cases, domain.case_bound)?;
            let mut trials = 0u64;
            for si in 0..space.full_total() {
                let state = space.full(si);
                for gi in 0..space.ring_total() {
                    let g = space.transform(gi);
                    trials += 1;
                    let (lhs, rhs) = evaluate(&state, &g);
                    if lhs != rhs {
                        let witness = Witness {
                            state,
                            transform: Some(g),
                            lhs: Some(SideValue::Matter(lhs)),
                            rhs: Some(SideValue::Matter(rhs)),
                        };
                        return Ok(CheckReport::fail(trials, witness, started.elapsed()));
                    }
                }
            }
            Ok(CheckReport::pass(trials, started.elapsed()))
        }
        Mode::Randomized { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut found: Option<Witness> = None;
            for _ in 0..trials {
                let state = gauge::random_full_state(domain.len, domain.colors, &mut rng);
                let g = gauge::random_transform(domain.len, domain.colors, &mut rng);
                let (lhs, rhs) = evaluate(&state, &g);
                if lhs != rhs {
                    found = keep_smaller(
                        found,
                        Witness {
                            state,
                            transform: Some(g),
                            lhs: Some(SideValue::Matter(lhs)),
                            rhs: Some(SideValue::Matter(rhs)),
                        },
                    );
                }
            }
            Ok(match found {
                None => CheckReport::pass(trials, started.elapsed()),
                Some(w) => CheckReport::fail(trials, w, started.elapsed()),
            })
        }
    }
}

/// The set of states reachable from one state under every gauge transform,
/// kept sorted so the representative is the lexicographic minimum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit<T> {
    members: Vec<T>,
}

impl<T: Ord> Orbit<T> {
    fn from_set(set: BTreeSet<T>) -> Orbit<T> {
        Orbit {
            members: set.into_iter().collect(),
        }
    }

    pub fn members(&self) -> &[T] {
        &self.members
    }

    pub fn representative(&self) -> &T {
        &self.members[0]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false // orbits always contain the state itself
    }

    pub fn contains(&self, value: &T) -> bool {
        self.members.binary_search(value).is_ok()
    }
}

/// The invariant set of a matter ring.
pub fn orbit_matter(psi: &MatterConfig) -> Result<Orbit<MatterConfig>, Error> {
    let space = StateSpace::new(psi.len(), psi.color_count())?;
    ensure_cases(space.ring_total(), DEFAULT_CASE_BOUND)?;
    let mut set = BTreeSet::new();
    for gi in 0..space.ring_total() {
        set.insert(gauge::gauge_matter(&space.transform(gi), psi));
    }
    Ok(Orbit::from_set(set))
}

/// The invariant set of a gauge field.
pub fn orbit_field(a: &GaugeField) -> Result<Orbit<GaugeField>, Error> {
    let space = StateSpace::new(a.len(), a.color_count())?;
    ensure_cases(space.ring_total(), DEFAULT_CASE_BOUND)?;
    let mut set = BTreeSet::new();
    for gi in 0..space.ring_total() {
        set.insert(gauge::gauge_field(&space.transform(gi), a));
    }
    Ok(Orbit::from_set(set))
}

/// The invariant set of a full state under the synchronous action on matter
/// and field. Generally finer than the product of the separate orbits.
pub fn orbit_joint(state: &FullState) -> Result<Orbit<FullState>, Error> {
    let space = StateSpace::new(state.len(), state.color_count())?;
    ensure_cases(space.ring_total(), DEFAULT_CASE_BOUND)?;
    let mut set = BTreeSet::new();
    for gi in 0..space.ring_total() {
        set.insert(gauge::gauge_state(&space.transform(gi), state));
    }
    Ok(Orbit::from_set(set))
}

/// True when some gauge transform carries `a` to `b`.
pub fn same_orbit_matter(a: &MatterConfig, b: &MatterConfig) -> Result<bool, Error> {
    assert_eq!(a.len(), b.len(), "ring length mismatch");
    assert_eq!(a.color_count(), b.color_count(), "color count mismatch");
    let space = StateSpace::new(a.len(), a.color_count())?;
    ensure_cases(space.ring_total(), DEFAULT_CASE_BOUND)?;
    Ok((0..space.ring_total()).any(|gi| gauge::gauge_matter(&space.transform(gi), a) == *b))
}

/// True when some gauge transform carries `a` to `b`.
pub fn same_orbit_field(a: &GaugeField, b: &GaugeField) -> Result<bool, Error> {
    assert_eq!(a.len(), b.len(), "ring length mismatch");
    assert_eq!(a.color_count(), b.color_count(), "color count mismatch");
    let space = StateSpace::new(a.len(), a.color_count())?;
    ensure_cases(space.ring_total(), DEFAULT_CASE_BOUND)?;
    Ok((0..space.ring_total()).any(|gi| gauge::gauge_field(&space.transform(gi), a) == *b))
}

/// True when some gauge transform carries `a` to `b` acting on matter and
/// field synchronously.
pub fn same_orbit_joint(a: &FullState, b: &FullState) -> Result<bool, Error> {
    assert_eq!(a.len(), b.len(), "ring length mismatch");
    assert_eq!(a.color_count(), b.color_count(), "color count mismatch");
    let space = StateSpace::new(a.len(), a.color_count())?;
    ensure_cases(space.ring_total(), DEFAULT_CASE_BOUND)?;
    Ok((0..space.ring_total()).any(|gi| gauge::gauge_state(&space.transform(gi), a) == *b))
}

/// Which state space an orbit count partitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitKind {
    Matter,
    Joint,
}

/// Orbit counts from two independent routes; `direct` partitions the state
/// space, `burnside` averages fixed points over the group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrbitCount {
    pub direct: u64,
    pub burnside: u64,
}

impl OrbitCount {
    pub fn agree(&self) -> bool {
        self.direct == self.burnside
    }
}

/// Counts orbits of the chosen state space under the full gauge group.
pub fn count_orbits(len: usize, colors: u8, kind: OrbitKind) -> Result<OrbitCount, Error> {
    count_orbits_bounded(len, colors, kind, DEFAULT_CASE_BOUND)
}

/// [`count_orbits`] with an explicit bound on state-space and group size.
pub fn count_orbits_bounded(
    len: usize,
    colors: u8,
    kind: OrbitKind,
    bound: u128,
) -> Result<OrbitCount, Error> {
    let space = StateSpace::new(len, colors)?;
    let states = match kind {
        OrbitKind::Matter => space.matter_total(),
        OrbitKind::Joint => space.full_total(),
    };
    ensure_cases(states, bound)?;
    ensure_cases(space.ring_total(), bound)?;
    let transforms = space.all_transforms();

    // Route 1: sweep the state space, flooding each unvisited orbit.
    let mut visited = vec![false; states as usize];
    let mut direct = 0u64;
    for idx in 0..states {
        if visited[idx as usize] {
            continue;
        }
        direct += 1;
        match kind {
            OrbitKind::Matter => {
                let m = space.matter(idx);
                for g in &transforms {
                    let img = gauge::gauge_matter(g, &m);
                    visited[space.matter_index(&img) as usize] = true;
                }
            }
            OrbitKind::Joint => {
                let s = space.full(idx);
                for g in &transforms {
                    let img = gauge::gauge_state(g, &s);
                    visited[space.full_index(&img) as usize] = true;
                }
            }
        }
    }

    // Route 2: Burnside — the orbit count is the mean number of fixed states.
    let fixed_sum: u128 = transforms
        .iter()
        .map(|g| match kind {
            OrbitKind::Matter => space.fixed_matter(g),
            OrbitKind::Joint => space.fixed_matter(g) * space.fixed_field(g),
        })
        .sum();
    debug_assert_eq!(fixed_sum % space.ring_total(), 0);
    let burnside = (fixed_sum / space.ring_total()) as u64;

    Ok(OrbitCount { direct, burnside })
}

/// True when `t2(g(c))` lands in the gauge orbit of `t1(c)` for some `g`,
/// i.e. some pair (g, g') satisfies `g'(t1(c)) = t2(g(c))`.
fn simulated_at(
    t1: &dyn Theory,
    t2: &dyn Theory,
    c: &FullState,
    transforms: &[GaugeTransform],
) -> bool {
    let target = t1.step(c);
    let reachable: BTreeSet<FullState> = transforms
        .iter()
        .map(|g| gauge::gauge_state(g, &target))
        .collect();
    transforms
        .iter()
        .any(|g| reachable.contains(&t2.step(&gauge::gauge_state(g, c))))
}

/// Checks that `t1` is simulated by `t2`: every input admits transforms
/// (g, g') with `g'(t1(c)) = t2(g(c))`. Fails with an input admitting none.
pub fn check_simulates(
    t1: &dyn Theory,
    t2: &dyn Theory,
    domain: &Domain,
) -> Result<CheckReport, Error> {
    let started = Instant::now();
    let space = StateSpace::new(domain.len, domain.colors)?;
    let pair_cost = space
        .ring_total()
        .checked_mul(space.ring_total())
        .unwrap_or(u128::MAX);
    match domain.mode {
        Mode::Exhaustive => {
            let cases = space
                .full_total()
                .checked_mul(pair_cost)
                .unwrap_or(u128::MAX);
            ensure_cases(cases, domain.case_bound)?;
            let transforms = space.all_transforms();
            let mut trials = 0u64;
            for si in 0..space.full_total() {
                let c = space.full(si);
                trials += 1;
                if !simulated_at(t1, t2, &c, &transforms) {
                    let lhs = SideValue::Full(t1.step(&c));
                    let witness = Witness {
                        state: c,
                        transform: None,
                        lhs: Some(lhs),
                        rhs: None,
                    };
                    return Ok(CheckReport::fail(trials, witness, started.elapsed()));
                }
            }
            Ok(CheckReport::pass(trials, started.elapsed()))
        }
        Mode::Randomized { trials, seed } => {
            ensure_cases(pair_cost, domain.case_bound)?;
            let transforms = space.all_transforms();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut found: Option<Witness> = None;
            for _ in 0..trials {
                let c = gauge::random_full_state(domain.len, domain.colors, &mut rng);
                if !simulated_at(t1, t2, &c, &transforms) {
                    let lhs = SideValue::Full(t1.step(&c));
                    found = keep_smaller(
                        found,
                        Witness {
                            state: c,
                            transform: None,
                            lhs: Some(lhs),
                            rhs: None,
                        },
                    );
                }
            }
            Ok(match found {
                None => CheckReport::pass(trials, started.elapsed()),
                Some(w) => CheckReport::fail(trials, w, started.elapsed()),
            })
        }
    }
}

/// Mutual simulation.
pub fn check_equivalent(
    t1: &dyn Theory,
    t2: &dyn Theory,
    domain: &Domain,
) -> Result<CheckReport, Error> {
    let forward = check_simulates(t1, t2, domain)?;
    let backward = check_simulates(t2, t1, domain)?;
    Ok(CheckReport {
        verdict: if forward.passed() && backward.passed() {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        trials: forward.trials + backward.trials,
        witness: forward.witness.or(backward.witness),
        elapsed: forward.elapsed + backward.elapsed,
    })
}

/// The three statements whose equivalence characterizes simulation when the
/// transported transform is reversible and the site operators form a group.
#[derive(Debug, Clone)]
pub struct CharacterizationReport {
    /// Statement values over the whole domain, in order:
    /// 1. for every input some transform makes the outputs literally equal;
    /// 2. for every input and every input transform, some output transform
    ///    reconciles the two;
    /// 3. the simulation property itself (some pair of transforms per input).
    pub statements: [bool; 3],
    /// Pass means the three statements agreed (all true or all false).
    pub report: CheckReport,
}

/// Evaluates the three characterization statements independently and passes
/// when they agree on the domain.
pub fn check_characterization(
    t1: &dyn Theory,
    t2: &dyn Theory,
    domain: &Domain,
) -> Result<CharacterizationReport, Error> {
    let started = Instant::now();
    let space = StateSpace::new(domain.len, domain.colors)?;
    let pair_cost = space
        .ring_total()
        .checked_mul(space.ring_total())
        .unwrap_or(u128::MAX);

    let mut statements = [true; 3];
    let mut first_split: Option<Witness> = None;
    let mut trials = 0u64;

    let mut examine = |c: &FullState, transforms: &[GaugeTransform]| {
        let target = t1.step(c);
        let reachable: BTreeSet<FullState> = transforms
            .iter()
            .map(|g| gauge::gauge_state(g, &target))
            .collect();
        let mut plain = false;
        let mut every_input = true;
        let mut some_pair = false;
        for g in transforms {
            let out = t2.step(&gauge::gauge_state(g, c));
            if out == target {
                plain = true;
            }
            let hit = reachable.contains(&out);
            every_input &= hit;
            some_pair |= hit;
        }
        if first_split.is_none() && !(plain == every_input && every_input == some_pair) {
            first_split = Some(Witness {
                state: c.clone(),
                transform: None,
                lhs: None,
                rhs: None,
            });
        }
        statements[0] &= plain;
        statements[1] &= every_input;
        statements[2] &= some_pair;
    };

    match domain.mode {
        Mode::Exhaustive => {
            let cases = space
                .full_total()
                .checked_mul(pair_cost)
                .unwrap_or(u128::MAX);
            ensure_cases(cases, domain.case_bound)?;
            let transforms = space.all_transforms();
            for si in 0..space.full_total() {
                let c = space.full(si);
                trials += 1;
                examine(&c, &transforms);
            }
        }
        Mode::Randomized { trials: n, seed } => {
            ensure_cases(pair_cost, domain.case_bound)?;
            let transforms = space.all_transforms();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..n {
                let c = gauge::random_full_state(domain.len, domain.colors, &mut rng);
                trials += 1;
                examine(&c, &transforms);
            }
        }
    }

    let agree = statements[0] == statements[1] && statements[1] == statements[2];
    let report = if agree {
        CheckReport::pass(trials, started.elapsed())
    } else {
        // A split always leaves a state where a globally-true statement holds
        // and a globally-false one does not.
        match first_split {
            Some(w) => CheckReport::fail(trials, w, started.elapsed()),
            None => CheckReport {
                verdict: Verdict::Fail,
                trials,
                witness: None,
                elapsed: started.elapsed(),
            },
        }
    };
    Ok(CharacterizationReport { statements, report })
}

/// The fixed two-color demonstration that separate matter/field orbits are
/// coarser than the synchronous joint orbit.
///
/// Two states share their matter ring; their fields differ by the transform
/// that swaps the two colors at one site. Their separate matter and field
/// orbits coincide initially, yet after one gauged step the matter orbits
/// split. The joint orbits never falsely identify the pair: the joint
/// relation is the same before and after the step.
#[derive(Debug, Clone)]
pub struct Fig5Report {
    pub left_initial: FullState,
    pub right_initial: FullState,
    pub left_stepped: FullState,
    pub right_stepped: FullState,
    pub matter_equal_initial: bool,
    pub field_equal_initial: bool,
    pub matter_equal_stepped: bool,
    pub joint_equal_initial: bool,
    pub joint_equal_stepped: bool,
}

impl Fig5Report {
    /// The joint-orbit relation is preserved by the step.
    pub fn joint_consistent(&self) -> bool {
        self.joint_equal_initial == self.joint_equal_stepped
    }

    /// The four verdicts: equal matter orbits initially, equal field orbits
    /// initially, equal matter orbits after the step, joint consistency.
    pub fn verdicts(&self) -> [bool; 4] {
        [
            self.matter_equal_initial,
            self.field_equal_initial,
            self.matter_equal_stepped,
            self.joint_consistent(),
        ]
    }

    /// The demonstration succeeds when the verdicts read (true, true, false,
    /// true): the separate orbits agree before but not after, while the joint
    /// relation stays consistent.
    pub fn is_expected(&self) -> bool {
        self.verdicts() == [true, true, false, true]
    }

    pub fn to_json(&self) -> serde_json::Value {
        let state_json = |s: &FullState| {
            serde_json::json!({
                "psi": s.psi().to_string(),
                "field": s.field().to_string(),
            })
        };
        serde_json::json!({
            "left_initial": state_json(&self.left_initial),
            "right_initial": state_json(&self.right_initial),
            "left_stepped": state_json(&self.left_stepped),
            "right_stepped": state_json(&self.right_stepped),
            "matter_equal_initial": self.matter_equal_initial,
            "field_equal_initial": self.field_equal_initial,
            "matter_equal_stepped": self.matter_equal_stepped,
            "joint_equal_initial": self.joint_equal_initial,
            "joint_equal_stepped": self.joint_equal_stepped,
            "joint_consistent": self.joint_consistent(),
            "verdict": if self.is_expected() { "pass" } else { "fail" },
        })
    }
}

/// Builds the two states, steps them, and evaluates all orbit relations.
pub fn fig5_demo() -> Fig5Report {
    let colors = 2u8;
    let len = 4usize;
    let psi = MatterConfig::filled(len, colors, Cell::new(0, 0)).expect("valid ring");
    let field_left = GaugeField::identity(len, colors);
    let mut sites = vec![Perm::identity(colors); len];
    sites[1] = Perm::transposition(colors, 0, 1);
    let g = GaugeTransform::new(sites).expect("valid transform");
    let field_right = gauge::gauge_field(&g, &field_left);

    let left_initial = FullState::new(psi.clone(), field_left).expect("valid state");
    let right_initial = FullState::new(psi, field_right).expect("valid state");
    let left_stepped = gauge::step_t(&left_initial);
    let right_stepped = gauge::step_t(&right_initial);

    Fig5Report {
        matter_equal_initial: same_orbit_matter(left_initial.psi(), right_initial.psi())
            .expect("small domain"),
        field_equal_initial: same_orbit_field(left_initial.field(), right_initial.field())
            .expect("small domain"),
        matter_equal_stepped: same_orbit_matter(left_stepped.psi(), right_stepped.psi())
            .expect("small domain"),
        joint_equal_initial: same_orbit_joint(&left_initial, &right_initial)
            .expect("small domain"),
        joint_equal_stepped: same_orbit_joint(&left_stepped, &right_stepped)
            .expect("small domain"),
        left_initial,
        right_initial,
        left_stepped,
        right_stepped,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauge::{step_t, z_map};
    use crate::theory::{lookup, state_from_literals, FreeTheory, GaugedTheory};

    #[test]
    fn gauged_theory_is_invariant_exhaustively() {
        let report = check_gauge_invariance(&GaugedTheory, z_map, &Domain::exhaustive(2, 2)).unwrap();
        assert!(report.passed());
        assert_eq!(report.trials, 256, "64 states times 4 transforms");
    }

    #[test]
    fn free_theory_is_not_invariant_and_the_witness_replays() {
        let report = check_gauge_invariance(&FreeTheory, z_map, &Domain::exhaustive(2, 2)).unwrap();
        assert!(!report.passed());
        let w = report.witness.expect("fail reports carry a witness");
        let g = w.transform.expect("equational witness has a transform");
        let lhs = gauge::gauge_state(&z_map(&g), &FreeTheory.step(&w.state));
        let rhs = FreeTheory.step(&gauge::gauge_state(&g, &w.state));
        assert_ne!(lhs, rhs, "re-evaluating the witness reproduces the violation");
        assert_eq!(Some(SideValue::Full(lhs)), w.lhs);
        assert_eq!(Some(SideValue::Full(rhs)), w.rhs);
    }

    #[test]
    fn gauged_theory_is_invariant_randomized() {
        let domain = Domain::randomized(8, 3, 10_000, 0);
        let report = check_gauge_invariance(&GaugedTheory, z_map, &domain).unwrap();
        assert!(report.passed());
        assert_eq!(report.trials, 10_000);
    }

    #[test]
    fn transported_rule_is_inhomogeneously_invariant() {
        let report = check_inhomogeneous(&Domain::exhaustive(2, 2)).unwrap();
        assert!(report.passed());
        assert_eq!(report.trials, 256);
    }

    #[test]
    fn identity_transform_makes_both_sides_trivially_equal() {
        let s = state_from_literals("0,1;1,0", "[1,0];[0,1]", 2).unwrap();
        let g = GaugeTransform::identity(2, 2);
        let lhs = gauge::gauge_matter(&z_map(&g), &gauge::step_ra(s.field(), s.psi()));
        let rhs = gauge::step_ra(&gauge::gauge_field(&g, s.field()), &gauge::gauge_matter(&g, s.psi()));
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, gauge::step_ra(s.field(), s.psi()));
    }

    #[test]
    fn swapped_field_action_is_caught() {
        // Conjugating with the two site operators exchanged must fail.
        let broken = |g: &GaugeTransform, a: &GaugeField| {
            let n = a.len();
            let links = (0..n)
                .map(|i| {
                    g.site(i)
                        .compose(a.link(i))
                        .compose(&g.site((i + 1) % n).inverse())
                })
                .collect();
            GaugeField::new(links).unwrap()
        };
        let report = check_inhomogeneous_with(broken, &Domain::exhaustive(2, 2)).unwrap();
        assert!(!report.passed());
        let w = report.witness.expect("witness present");
        assert_ne!(w.lhs, w.rhs);
    }

    #[test]
    fn exhaustive_domain_bound_is_enforced() {
        let mut domain = Domain::exhaustive(2, 2);
        domain.case_bound = 10;
        match check_gauge_invariance(&GaugedTheory, z_map, &domain) {
            Err(Error::ResourceLimit { needed, bound }) => {
                assert_eq!(needed, 256);
                assert_eq!(bound, 10);
            }
            other => panic!("expected resource limit, got {other:?}"),
        }
    }

    #[test]
    fn orbit_of_a_diagonal_cell() {
        let psi = MatterConfig::parse("0,0", 3).unwrap();
        let orbit = orbit_matter(&psi).unwrap();
        let expected: Vec<MatterConfig> = ["0,0", "1,1", "2,2"]
            .iter()
            .map(|s| MatterConfig::parse(s, 3).unwrap())
            .collect();
        assert_eq!(orbit.members(), expected.as_slice());
        assert_eq!(orbit.representative(), &expected[0]);
    }

    #[test]
    fn orbit_of_a_mixed_cell_has_all_distinct_pairs() {
        let psi = MatterConfig::parse("0,1", 3).unwrap();
        let orbit = orbit_matter(&psi).unwrap();
        assert_eq!(orbit.len(), 6);
        assert!(orbit
            .members()
            .iter()
            .all(|m| m.cell(0).l != m.cell(0).r));
    }

    #[test]
    fn two_color_single_site_orbits_partition_the_cells() {
        let diagonal = orbit_matter(&MatterConfig::parse("0,0", 2).unwrap()).unwrap();
        let mixed = orbit_matter(&MatterConfig::parse("0,1", 2).unwrap()).unwrap();
        assert_eq!(diagonal.len(), 2);
        assert_eq!(mixed.len(), 2);
        assert!(diagonal.members().iter().all(|m| !mixed.contains(m)));
        assert_eq!(diagonal.len() + mixed.len(), 4);
    }

    #[test]
    fn joint_orbit_of_the_vacuum() {
        let s = state_from_literals("0,0;0,0", "[0,1];[0,1]", 2).unwrap();
        let orbit = orbit_joint(&s).unwrap();
        // Stabilizer is trivial, so the orbit has all four transforms' images.
        assert_eq!(orbit.len(), 4);
        assert!(orbit
            .members()
            .iter()
            .all(|m| m.psi().cells().iter().all(|c| c.l == c.r)));
        assert!(orbit.contains(&s));
    }

    #[test]
    fn gauging_stays_inside_the_joint_orbit() {
        let s = state_from_literals("0,1;1,0", "[1,0];[0,1]", 2).unwrap();
        for g in all_gauge_transforms(2, 2).unwrap() {
            assert!(same_orbit_joint(&s, &gauge::gauge_state(&g, &s)).unwrap());
        }
    }

    #[test]
    fn same_orbit_is_reflexive() {
        let psi = MatterConfig::parse("0,1;2,0", 3).unwrap();
        assert!(same_orbit_matter(&psi, &psi).unwrap());
    }

    #[test]
    fn orbit_counts_match_the_hand_computed_values() {
        let count = |len, colors| count_orbits(len, colors, OrbitKind::Matter).unwrap();
        assert_eq!(count(1, 2).direct, 2);
        assert_eq!(count(1, 3).direct, 2);
        assert_eq!(count(2, 2).direct, 4);
        assert!(count(1, 2).agree());
        assert!(count(1, 3).agree());
        assert!(count(2, 2).agree());
    }

    #[test]
    fn burnside_agrees_with_direct_partition_on_a_grid() {
        for len in 1..=2 {
            for colors in 1..=3 {
                for kind in [OrbitKind::Matter, OrbitKind::Joint] {
                    let count = count_orbits(len, colors, kind).unwrap();
                    assert!(
                        count.agree(),
                        "L={len} K={colors} {kind:?}: {count:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn orbits_partition_the_state_space() {
        // Disjoint cover with lexicographic representatives, checked over all
        // 64 full states.
        let states = all_full_states(2, 2).unwrap();
        let mut seen = BTreeSet::new();
        let mut orbit_count = 0;
        for s in &states {
            let orbit = orbit_joint(s).unwrap();
            assert!(orbit.contains(s));
            assert!(orbit.members().windows(2).all(|w| w[0] < w[1]));
            if orbit.representative() == s {
                orbit_count += 1;
                for m in orbit.members() {
                    assert!(seen.insert(m.clone()), "orbits must not overlap");
                }
            }
        }
        assert_eq!(seen.len(), states.len(), "orbits must cover the space");
        let direct = count_orbits(2, 2, OrbitKind::Joint).unwrap().direct;
        assert_eq!(orbit_count, direct);
    }

    #[test]
    fn same_orbit_is_an_equivalence_relation() {
        let states = all_full_states(2, 2).unwrap();
        for a in &states {
            assert!(same_orbit_joint(a, a).unwrap());
        }
        for a in states.iter().take(16) {
            for b in states.iter().take(16) {
                let ab = same_orbit_joint(a, b).unwrap();
                assert_eq!(ab, same_orbit_joint(b, a).unwrap());
                if ab {
                    for c in states.iter().take(16) {
                        if same_orbit_joint(b, c).unwrap() {
                            assert!(same_orbit_joint(a, c).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn the_gauged_step_respects_joint_orbits() {
        let states = all_full_states(2, 2).unwrap();
        for a in &states {
            for b in &states {
                if same_orbit_joint(a, b).unwrap() {
                    assert!(same_orbit_joint(&step_t(a), &step_t(b)).unwrap());
                }
            }
        }
    }

    #[test]
    fn every_theory_simulates_itself() {
        let report = check_simulates(&GaugedTheory, &GaugedTheory, &Domain::exhaustive(2, 2)).unwrap();
        assert!(report.passed());
        assert_eq!(report.trials, 64);
    }

    #[test]
    fn pre_gauged_theory_is_equivalent() {
        let t2 = lookup("T-pre:[1,0];[0,1]", 2, 2).unwrap();
        let domain = Domain::exhaustive(2, 2);
        assert!(check_simulates(&GaugedTheory, t2.as_ref(), &domain).unwrap().passed());
        assert!(check_simulates(t2.as_ref(), &GaugedTheory, &domain).unwrap().passed());
        assert!(check_equivalent(&GaugedTheory, t2.as_ref(), &domain).unwrap().passed());
    }

    #[test]
    fn scrambled_theory_is_not_a_simulation() {
        // The gauged step followed by a matter translation and a one-site
        // color relabel: no transform pair reconciles it with the gauged step.
        struct Scrambled;
        impl Theory for Scrambled {
            fn name(&self) -> &str {
                "scrambled"
            }
            fn step(&self, s: &FullState) -> FullState {
                let t = step_t(s);
                let n = t.psi().len();
                let k = t.psi().color_count();
                let mut cells: Vec<Cell> =
                    (0..n).map(|x| t.psi().cell((x + 1) % n)).collect();
                cells[0] = Cell::new((cells[0].l + 1) % k, (cells[0].r + 1) % k);
                FullState::new(
                    MatterConfig::new(cells, k).unwrap(),
                    t.field().clone(),
                )
                .unwrap()
            }
        }
        let report = check_simulates(&GaugedTheory, &Scrambled, &Domain::exhaustive(2, 2)).unwrap();
        assert!(!report.passed());
        let w = report.witness.expect("an unsimulable input is reported");
        // Replaying the witness confirms no (g, g') pair works.
        let transforms = all_gauge_transforms(2, 2).unwrap();
        assert!(!simulated_at(&GaugedTheory, &Scrambled, &w.state, &transforms));
    }

    #[test]
    fn free_theory_is_not_equivalent_to_the_gauged_one() {
        let report = check_equivalent(&GaugedTheory, &FreeTheory, &Domain::exhaustive(2, 2)).unwrap();
        assert!(!report.passed());
        assert!(report.witness.is_some());
    }

    #[test]
    fn characterization_statements_agree_for_a_pre_gauged_pair() {
        let t2 = lookup("T-pre:[1,0];[0,1]", 2, 2).unwrap();
        let outcome =
            check_characterization(&GaugedTheory, t2.as_ref(), &Domain::exhaustive(2, 2)).unwrap();
        assert_eq!(outcome.statements, [true, true, true]);
        assert!(outcome.report.passed());
    }

    #[test]
    fn characterization_statements_agree_for_the_free_pair() {
        let outcome =
            check_characterization(&GaugedTheory, &FreeTheory, &Domain::exhaustive(2, 2)).unwrap();
        assert_eq!(outcome.statements, [false, false, false]);
        assert!(outcome.report.passed());
    }

    #[test]
    fn fig5_demo_returns_the_expected_verdicts() {
        let report = fig5_demo();
        assert_eq!(report.verdicts(), [true, true, false, true]);
        assert!(report.is_expected());
        // The separate relation is inconsistent, the joint one is not.
        assert!(!report.joint_equal_initial);
        assert!(!report.joint_equal_stepped);
        // The stepped matter differs at the site right of the swapped one.
        assert_eq!(report.left_stepped.psi().cell(2), Cell::new(0, 0));
        assert_eq!(report.right_stepped.psi().cell(2), Cell::new(0, 1));
    }

    #[test]
    fn fig5_demo_is_deterministic() {
        let a = fig5_demo();
        let b = fig5_demo();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(
            serde_json::to_string(&a.to_json()).unwrap(),
            serde_json::to_string(&b.to_json()).unwrap()
        );
    }

    #[test]
    fn enumerations_are_lexicographic() {
        let matter = all_matter_configs(2, 2).unwrap();
        assert_eq!(matter.len(), 16);
        assert!(matter.windows(2).all(|w| w[0] < w[1]));

        let states = all_full_states(2, 2).unwrap();
        assert_eq!(states.len(), 64);
        assert!(states.windows(2).all(|w| w[0] < w[1]));

        let transforms = all_gauge_transforms(1, 3).unwrap();
        assert_eq!(transforms.len(), 6);
    }
}
