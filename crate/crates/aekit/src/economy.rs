//! Abstract-economy instances: per-player action grids, tabulated
//! constraint maps and preference maps, validation, and file I/O.
//!
//! # Problem file format
//!
//! A problem is UTF-8 JSON with four top-level keys:
//!
//! ```json
//! {
//!   "players": [{"id": "p1", "dim": 1, "grid": [[0.0], [1.0]]}],
//!   "constraints": {"p1": [{"at": [], "value": [[0.0], [1.0]]}]},
//!   "preferences": {"p1": [{"at": [[0.0]], "value": [[1.0]]},
//!                          {"at": [[1.0]], "value": []}]},
//!   "tolerances": {"dedup": 1e-12, "feas": 1e-9, "intersect": 1e-9, "gap_zero": 1e-9}
//! }
//! ```
//!
//! Players are ordered by id. A constraint entry's `at` lists the *other*
//! players' coordinates in id order; a preference entry's `at` lists all
//! players' coordinates in id order. Every combination of grid points must
//! appear exactly once in each table. Map values are arbitrary finite clouds
//! (not necessarily grid points); preference values may be empty.
//! `tolerances` is optional and fields default to dedup=1e-12, feas=1e-9,
//! intersect=1e-9, gap_zero=1e-9.

use std::collections::BTreeMap;
use std::fmt;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::jio::JsonValue;
use crate::setval::{FiniteCloud, Point};

/// Identifier of a player; players are canonically ordered by id.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlayerId(pub String);

impl PlayerId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for PlayerId {
    fn from(s: &str) -> Self {
        PlayerId(s.to_string())
    }
}

/// Tolerances that travel with a profile.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToleranceConfig {
    /// Two points closer than this are the same point.
    pub dedup: f64,
    /// Membership test `x_v ∈ A` (feasibility).
    pub feas: f64,
    /// Nonempty-intersection test between constraint and preference values.
    pub intersect: f64,
    /// Zero test for the gap function.
    pub gap_zero: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            dedup: 1e-12,
            feas: 1e-9,
            intersect: 1e-9,
            gap_zero: 1e-9,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("dedup", self.dedup),
            ("feas", self.feas),
            ("intersect", self.intersect),
            ("gap_zero", self.gap_zero),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidTolerance(format!(
                    "{name} must be a nonnegative finite real, got {v}"
                )));
            }
        }
        if self.gap_zero < self.feas {
            return Err(Error::InvalidTolerance(format!(
                "gap_zero ({}) must be at least feas ({})",
                self.gap_zero, self.feas
            )));
        }
        Ok(())
    }
}

/// A player's sampled action space.
#[derive(Clone, Debug, PartialEq)]
pub struct ActionSpace {
    id: PlayerId,
    grid: FiniteCloud,
}

impl ActionSpace {
    pub fn new(id: PlayerId, grid: FiniteCloud) -> Result<Self> {
        if grid.is_empty() {
            return Err(Error::validation(format!(
                "player `{id}` has an empty action grid"
            )));
        }
        Ok(ActionSpace { id, grid })
    }

    pub fn id(&self) -> &PlayerId {
        &self.id
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn grid(&self) -> &FiniteCloud {
        &self.grid
    }
}

/// One action per player, aligned with the profile's player order.
#[derive(Clone, Debug, PartialEq)]
pub struct ProfilePoint {
    components: Vec<Point>,
}

impl ProfilePoint {
    pub fn new(components: Vec<Point>) -> Self {
        ProfilePoint { components }
    }

    pub fn components(&self) -> &[Point] {
        &self.components
    }

    pub fn component(&self, player: usize) -> &Point {
        &self.components[player]
    }

    /// Concatenates all components into a single point of the product space.
    pub fn flatten(&self) -> Point {
        let coords: Vec<f64> = self
            .components
            .iter()
            .flat_map(|p| p.coords().iter().copied())
            .collect();
        Point::new(coords).expect("components are finite")
    }

    pub fn lex_cmp(&self, other: &ProfilePoint) -> std::cmp::Ordering {
        self.flatten().lex_cmp(&other.flatten())
    }
}

/// A complete abstract-economy instance on finite grids.
///
/// Tables are stored densely: for player `v`, constraint values are indexed
/// by the lexicographic rank of the other players' grid indices and
/// preference values by the rank of the full grid index. Iteration in rank
/// order is identical across runs and thread counts.
#[derive(Clone, Debug, PartialEq)]
pub struct EconomyProfile {
    players: Vec<ActionSpace>,
    /// `constraints[v][minus_rank]`
    constraints: Vec<Vec<FiniteCloud>>,
    /// `preferences[v][full_rank]`
    preferences: Vec<Vec<FiniteCloud>>,
    tolerances: ToleranceConfig,
}

impl EconomyProfile {
    /// Builds a profile from index-ordered tables. Structural requirements
    /// (player alignment, table lengths, value dimensions) are enforced here;
    /// nonemptiness of constraint values is left to [`validate_economy`].
    pub fn from_tables(
        players: Vec<ActionSpace>,
        constraints: Vec<Vec<FiniteCloud>>,
        preferences: Vec<Vec<FiniteCloud>>,
        tolerances: ToleranceConfig,
    ) -> Result<Self> {
        tolerances.validate()?;
        if players.is_empty() {
            return Err(Error::validation("at least one player is required"));
        }
        let mut sorted_ids: Vec<&PlayerId> = players.iter().map(|p| p.id()).collect();
        sorted_ids.dedup();
        if sorted_ids.len() != players.len() {
            return Err(Error::validation("duplicate player id"));
        }
        for w in players.windows(2) {
            if w[0].id() >= w[1].id() {
                return Err(Error::validation(
                    "players must be given in ascending id order",
                ));
            }
        }
        if constraints.len() != players.len() || preferences.len() != players.len() {
            return Err(Error::validation(
                "constraint/preference tables must cover every player",
            ));
        }
        let profile = EconomyProfile {
            players,
            constraints,
            preferences,
            tolerances,
        };
        for v in 0..profile.players.len() {
            let want_minus = profile.minus_len(v);
            if profile.constraints[v].len() != want_minus {
                return Err(Error::validation(format!(
                    "constraint table incomplete for player `{}`: {} entries, expected {}",
                    profile.players[v].id(),
                    profile.constraints[v].len(),
                    want_minus
                )));
            }
            let want_full = profile.full_len();
            if profile.preferences[v].len() != want_full {
                return Err(Error::validation(format!(
                    "preference table incomplete for player `{}`: {} entries, expected {}",
                    profile.players[v].id(),
                    profile.preferences[v].len(),
                    want_full
                )));
            }
            let dim = profile.players[v].dim();
            for value in profile.constraints[v].iter().chain(&profile.preferences[v]) {
                if value.dim() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: value.dim(),
                    });
                }
            }
        }
        Ok(profile)
    }

    pub fn players(&self) -> &[ActionSpace] {
        &self.players
    }

    pub fn player_count(&self) -> usize {
        self.players.len()
    }

    pub fn tolerances(&self) -> &ToleranceConfig {
        &self.tolerances
    }

    pub fn player_index(&self, id: &PlayerId) -> Result<usize> {
        self.players
            .iter()
            .position(|p| p.id() == id)
            .ok_or_else(|| Error::UnknownPlayer(id.to_string()))
    }

    pub fn grid_sizes(&self) -> Vec<usize> {
        self.players.iter().map(|p| p.grid().len()).collect()
    }

    /// Number of full grid profiles.
    pub fn full_len(&self) -> usize {
        self.players.iter().map(|p| p.grid().len()).product()
    }

    /// Number of reduced profiles over the players other than `v`.
    pub fn minus_len(&self, v: usize) -> usize {
        self.players
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != v)
            .map(|(_, p)| p.grid().len())
            .product()
    }

    /// Lexicographic rank of a full grid index (player 0 most significant).
    pub fn rank_full(&self, idx: &[usize]) -> usize {
        let mut rank = 0;
        for (i, p) in self.players.iter().enumerate() {
            rank = rank * p.grid().len() + idx[i];
        }
        rank
    }

    pub fn unrank_full(&self, mut rank: usize) -> Vec<usize> {
        let mut idx = vec![0; self.players.len()];
        for i in (0..self.players.len()).rev() {
            let size = self.players[i].grid().len();
            idx[i] = rank % size;
            rank /= size;
        }
        idx
    }

    pub fn rank_minus(&self, v: usize, minus_idx: &[usize]) -> usize {
        let mut rank = 0;
        let mut j = 0;
        for (i, p) in self.players.iter().enumerate() {
            if i == v {
                continue;
            }
            rank = rank * p.grid().len() + minus_idx[j];
            j += 1;
        }
        rank
    }

    /// Drops player `v`'s coordinate from a full index.
    pub fn minus_of_full(&self, v: usize, full_idx: &[usize]) -> Vec<usize> {
        full_idx
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != v)
            .map(|(_, &k)| k)
            .collect()
    }

    /// Reassembles a full index from player `v`'s grid index and the others'.
    pub fn full_from_parts(&self, v: usize, own: usize, minus_idx: &[usize]) -> Vec<usize> {
        let mut full = Vec::with_capacity(self.players.len());
        let mut j = 0;
        for i in 0..self.players.len() {
            if i == v {
                full.push(own);
            } else {
                full.push(minus_idx[j]);
                j += 1;
            }
        }
        full
    }

    pub fn grid_point(&self, v: usize, i: usize) -> &Point {
        &self.players[v].grid().points()[i]
    }

    pub fn point_at(&self, full_idx: &[usize]) -> ProfilePoint {
        ProfilePoint::new(
            full_idx
                .iter()
                .enumerate()
                .map(|(v, &i)| self.grid_point(v, i).clone())
                .collect(),
        )
    }

    /// Matches a point to a grid index of player `v` within the dedup
    /// tolerance.
    pub fn locate_point(&self, v: usize, p: &Point) -> Result<usize> {
        let grid = self.players[v].grid();
        if p.dim() != grid.dim() {
            return Err(Error::DimensionMismatch {
                expected: grid.dim(),
                found: p.dim(),
            });
        }
        grid.points()
            .iter()
            .position(|q| q.distance(p) <= self.tolerances.dedup)
            .ok_or_else(|| {
                Error::OffGrid(format!("{p} is not on player `{}`'s grid", self.players[v].id()))
            })
    }

    pub fn locate_profile(&self, x: &ProfilePoint) -> Result<Vec<usize>> {
        if x.components().len() != self.players.len() {
            return Err(Error::invalid(format!(
                "profile point has {} components, expected {}",
                x.components().len(),
                self.players.len()
            )));
        }
        x.components()
            .iter()
            .enumerate()
            .map(|(v, p)| self.locate_point(v, p))
            .collect()
    }

    pub fn constraint(&self, v: usize, minus_rank: usize) -> &FiniteCloud {
        &self.constraints[v][minus_rank]
    }

    pub fn preference(&self, v: usize, full_rank: usize) -> &FiniteCloud {
        &self.preferences[v][full_rank]
    }

    pub fn constraint_at(&self, v: usize, full_idx: &[usize]) -> &FiniteCloud {
        let minus = self.minus_of_full(v, full_idx);
        self.constraint(v, self.rank_minus(v, &minus))
    }

    pub fn preference_at(&self, v: usize, full_idx: &[usize]) -> &FiniteCloud {
        self.preference(v, self.rank_full(full_idx))
    }

    pub(crate) fn constraints_mut(&mut self) -> &mut Vec<Vec<FiniteCloud>> {
        &mut self.constraints
    }

    pub(crate) fn preferences_mut(&mut self) -> &mut Vec<Vec<FiniteCloud>> {
        &mut self.preferences
    }

    /// Same tables under a different tolerance configuration.
    pub fn with_tolerances(&self, tolerances: ToleranceConfig) -> Result<Self> {
        tolerances.validate()?;
        let mut out = self.clone();
        out.tolerances = tolerances;
        Ok(out)
    }

    /// True when both profiles live on the same players and grids.
    pub fn same_grids(&self, other: &EconomyProfile) -> bool {
        self.players == other.players
    }

    /// Splits a profile point into player `v`'s component and the rest.
    pub fn split(&self, x: &ProfilePoint, id: &PlayerId) -> Result<(Point, Vec<Point>)> {
        let v = self.player_index(id)?;
        if x.components().len() != self.players.len() {
            return Err(Error::invalid(format!(
                "profile point has {} components, expected {}",
                x.components().len(),
                self.players.len()
            )));
        }
        let own = x.component(v).clone();
        let rest = x
            .components()
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != v)
            .map(|(_, p)| p.clone())
            .collect();
        Ok((own, rest))
    }

    /// Inverse of [`split`](Self::split).
    pub fn recombine(&self, id: &PlayerId, own: Point, rest: &[Point]) -> Result<ProfilePoint> {
        let v = self.player_index(id)?;
        if rest.len() + 1 != self.players.len() {
            return Err(Error::invalid(format!(
                "reduced profile has {} components, expected {}",
                rest.len(),
                self.players.len() - 1
            )));
        }
        let mut components = Vec::with_capacity(self.players.len());
        let mut j = 0;
        for i in 0..self.players.len() {
            if i == v {
                components.push(own.clone());
            } else {
                components.push(rest[j].clone());
                j += 1;
            }
        }
        Ok(ProfilePoint::new(components))
    }
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct Violation {
    pub player: PlayerId,
    pub message: String,
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the nonempty-values requirement on every constraint value.
/// Table completeness is structural (enforced at construction), so a parsed
/// profile can only fail here through empty constraint values.
pub fn validate_economy(profile: &EconomyProfile) -> ValidationReport {
    let mut report = ValidationReport::default();
    for (v, player) in profile.players().iter().enumerate() {
        for rank in 0..profile.minus_len(v) {
            if profile.constraint(v, rank).is_empty() {
                report.violations.push(Violation {
                    player: player.id().clone(),
                    message: format!(
                        "constraint map of player `{}` has an empty value at reduced index {rank}; \
                         constraint maps must have nonempty values",
                        player.id()
                    ),
                });
            }
        }
    }
    report
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
pub(crate) struct RawPlayer {
    pub(crate) id: String,
    pub(crate) dim: usize,
    pub(crate) grid: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
struct RawEntry {
    at: Vec<Vec<f64>>,
    value: Vec<Vec<f64>>,
}

#[derive(Deserialize, Default, Clone, Copy)]
struct RawTolerances {
    dedup: Option<f64>,
    feas: Option<f64>,
    intersect: Option<f64>,
    gap_zero: Option<f64>,
}

impl RawTolerances {
    fn resolve(self) -> ToleranceConfig {
        let d = ToleranceConfig::default();
        ToleranceConfig {
            dedup: self.dedup.unwrap_or(d.dedup),
            feas: self.feas.unwrap_or(d.feas),
            intersect: self.intersect.unwrap_or(d.intersect),
            gap_zero: self.gap_zero.unwrap_or(d.gap_zero),
        }
    }
}

#[derive(Deserialize)]
struct RawProblem {
    players: Vec<RawPlayer>,
    constraints: BTreeMap<String, Vec<RawEntry>>,
    preferences: BTreeMap<String, Vec<RawEntry>>,
    #[serde(default)]
    tolerances: Option<RawTolerances>,
}

pub(crate) fn build_players(raw: &[RawPlayer], dedup: f64) -> Result<Vec<ActionSpace>> {
    let mut players = raw
        .iter()
        .map(|p| {
            let grid = FiniteCloud::from_coords_with_dedup(p.dim, &p.grid, dedup)
                .map_err(|e| Error::parse(format!("grid of player `{}`: {e}", p.id)))?;
            ActionSpace::new(PlayerId(p.id.clone()), grid)
        })
        .collect::<Result<Vec<_>>>()?;
    players.sort_by(|a, b| a.id().cmp(b.id()));
    Ok(players)
}

/// Locates a per-player coordinate list against a list of grids; used for
/// `at` keys in constraint, preference, and objective tables.
pub(crate) fn locate_tuple(
    grids: &[&FiniteCloud],
    coords: &[Vec<f64>],
    dedup: f64,
    context: &str,
) -> Result<Vec<usize>> {
    if coords.len() != grids.len() {
        return Err(Error::validation(format!(
            "{context}: `at` has {} components, expected {}",
            coords.len(),
            grids.len()
        )));
    }
    coords
        .iter()
        .zip(grids)
        .map(|(c, grid)| {
            let p = Point::new(c.clone())?;
            if p.dim() != grid.dim() {
                return Err(Error::DimensionMismatch {
                    expected: grid.dim(),
                    found: p.dim(),
                });
            }
            grid.points()
                .iter()
                .position(|q| q.distance(&p) <= dedup)
                .ok_or_else(|| Error::validation(format!("{context}: `at` point {p} is off-grid")))
        })
        .collect()
}

fn raw_to_profile(raw: RawProblem) -> Result<EconomyProfile> {
    let tolerances = raw.tolerances.unwrap_or_default().resolve();
    tolerances.validate()?;
    let players = build_players(&raw.players, tolerances.dedup)?;
    if players.is_empty() {
        return Err(Error::validation("at least one player is required"));
    }

    let scaffold = |v: usize, len: usize| -> Vec<Option<FiniteCloud>> {
        let _ = v;
        vec![None; len]
    };
    let full_len: usize = players.iter().map(|p| p.grid().len()).product();

    let mut constraints: Vec<Vec<Option<FiniteCloud>>> = Vec::new();
    let mut preferences: Vec<Vec<Option<FiniteCloud>>> = Vec::new();
    for (v, player) in players.iter().enumerate() {
        let minus_len: usize = players
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != v)
            .map(|(_, p)| p.grid().len())
            .product();
        constraints.push(scaffold(v, minus_len));
        preferences.push(scaffold(v, full_len));
        let _ = player;
    }

    for (key, entries) in &raw.constraints {
        let v = players
            .iter()
            .position(|p| p.id().as_str() == key)
            .ok_or_else(|| Error::UnknownPlayer(key.clone()))?;
        let minus_grids: Vec<&FiniteCloud> = players
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != v)
            .map(|(_, p)| p.grid())
            .collect();
        for entry in entries {
            let idx = locate_tuple(
                &minus_grids,
                &entry.at,
                tolerances.dedup,
                &format!("constraints of `{key}`"),
            )?;
            let mut rank = 0;
            for (k, grid) in idx.iter().zip(&minus_grids) {
                rank = rank * grid.len() + k;
            }
            if constraints[v][rank].is_some() {
                return Err(Error::validation(format!(
                    "constraints of `{key}`: duplicate entry at reduced index {rank}"
                )));
            }
            let value = FiniteCloud::from_coords_with_dedup(
                players[v].dim(),
                &entry.value,
                tolerances.dedup,
            )?;
            constraints[v][rank] = Some(value);
        }
    }

    for (key, entries) in &raw.preferences {
        let v = players
            .iter()
            .position(|p| p.id().as_str() == key)
            .ok_or_else(|| Error::UnknownPlayer(key.clone()))?;
        let all_grids: Vec<&FiniteCloud> = players.iter().map(|p| p.grid()).collect();
        for entry in entries {
            let idx = locate_tuple(
                &all_grids,
                &entry.at,
                tolerances.dedup,
                &format!("preferences of `{key}`"),
            )?;
            let mut rank = 0;
            for (k, grid) in idx.iter().zip(&all_grids) {
                rank = rank * grid.len() + k;
            }
            if preferences[v][rank].is_some() {
                return Err(Error::validation(format!(
                    "preferences of `{key}`: duplicate entry at index {rank}"
                )));
            }
            let value = FiniteCloud::from_coords_with_dedup(
                players[v].dim(),
                &entry.value,
                tolerances.dedup,
            )?;
            preferences[v][rank] = Some(value);
        }
    }

    let constraints = constraints
        .into_iter()
        .enumerate()
        .map(|(v, table)| {
            table
                .into_iter()
                .enumerate()
                .map(|(rank, value)| {
                    value.ok_or_else(|| {
                        Error::validation(format!(
                            "constraint table incomplete: player `{}` is missing reduced index {rank}",
                            players[v].id()
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let preferences = preferences
        .into_iter()
        .enumerate()
        .map(|(v, table)| {
            table
                .into_iter()
                .enumerate()
                .map(|(rank, value)| {
                    value.ok_or_else(|| {
                        Error::validation(format!(
                            "preference table incomplete: player `{}` is missing index {rank}",
                            players[v].id()
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    EconomyProfile::from_tables(players, constraints, preferences, tolerances)
}

/// Parses a problem file. Returns a structurally complete profile; run
/// [`validate_economy`] for the nonemptiness report.
pub fn parse_problem(text: &str) -> Result<EconomyProfile> {
    let raw: RawProblem = serde_json::from_str(text)?;
    raw_to_profile(raw)
}

pub(crate) fn profile_from_json_value(value: serde_json::Value) -> Result<EconomyProfile> {
    let raw: RawProblem = serde_json::from_value(value)?;
    raw_to_profile(raw)
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

pub(crate) fn cloud_json(cloud: &FiniteCloud) -> JsonValue {
    JsonValue::Arr(
        cloud
            .iter()
            .map(|p| JsonValue::floats(p.coords()))
            .collect(),
    )
}

pub(crate) fn point_json(point: &Point) -> JsonValue {
    JsonValue::floats(point.coords())
}

pub(crate) fn profile_point_json(x: &ProfilePoint) -> JsonValue {
    JsonValue::Arr(x.components().iter().map(point_json).collect())
}

pub(crate) fn tolerances_json(t: &ToleranceConfig) -> JsonValue {
    JsonValue::obj(vec![
        ("dedup", JsonValue::Num(t.dedup)),
        ("feas", JsonValue::Num(t.feas)),
        ("gap_zero", JsonValue::Num(t.gap_zero)),
        ("intersect", JsonValue::Num(t.intersect)),
    ])
}

pub(crate) fn problem_json(profile: &EconomyProfile) -> JsonValue {
    let players = JsonValue::Arr(
        profile
            .players()
            .iter()
            .map(|p| {
                JsonValue::obj(vec![
                    ("dim", JsonValue::Int(p.dim() as i64)),
                    ("grid", cloud_json(p.grid())),
                    ("id", JsonValue::Str(p.id().to_string())),
                ])
            })
            .collect(),
    );

    let mut constraints: Vec<(String, JsonValue)> = Vec::new();
    let mut preferences: Vec<(String, JsonValue)> = Vec::new();
    for (v, player) in profile.players().iter().enumerate() {
        let mut centries = Vec::new();
        for rank in 0..profile.minus_len(v) {
            let minus_idx = unrank_minus(profile, v, rank);
            let at: Vec<JsonValue> = minus_idx
                .iter()
                .enumerate()
                .map(|(j, &k)| {
                    let owner = owner_of_minus_slot(profile, v, j);
                    point_json(profile.grid_point(owner, k))
                })
                .collect();
            centries.push(JsonValue::obj(vec![
                ("at", JsonValue::Arr(at)),
                ("value", cloud_json(profile.constraint(v, rank))),
            ]));
        }
        constraints.push((player.id().to_string(), JsonValue::Arr(centries)));

        let mut pentries = Vec::new();
        for rank in 0..profile.full_len() {
            let full_idx = profile.unrank_full(rank);
            let at: Vec<JsonValue> = full_idx
                .iter()
                .enumerate()
                .map(|(u, &k)| point_json(profile.grid_point(u, k)))
                .collect();
            pentries.push(JsonValue::obj(vec![
                ("at", JsonValue::Arr(at)),
                ("value", cloud_json(profile.preference(v, rank))),
            ]));
        }
        preferences.push((player.id().to_string(), JsonValue::Arr(pentries)));
    }

    JsonValue::Obj(vec![
        ("players".into(), players),
        ("constraints".into(), JsonValue::Obj(constraints)),
        ("preferences".into(), JsonValue::Obj(preferences)),
        ("tolerances".into(), tolerances_json(profile.tolerances())),
    ])
}

fn owner_of_minus_slot(profile: &EconomyProfile, v: usize, slot: usize) -> usize {
    // Slot j of a reduced index covers the j-th player other than v.
    let mut j = 0;
    for i in 0..profile.player_count() {
        if i == v {
            continue;
        }
        if j == slot {
            return i;
        }
        j += 1;
    }
    unreachable!("slot within reduced index bounds")
}

fn unrank_minus(profile: &EconomyProfile, v: usize, mut rank: usize) -> Vec<usize> {
    let sizes: Vec<usize> = profile
        .players()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != v)
        .map(|(_, p)| p.grid().len())
        .collect();
    let mut idx = vec![0; sizes.len()];
    for i in (0..sizes.len()).rev() {
        idx[i] = rank % sizes[i];
        rank /= sizes[i];
    }
    idx
}

/// Canonical text form: sorted keys, entries in rank order, floats with 17
/// significant digits. `parse_problem(serialize_problem(p)) == p`.
pub fn serialize_problem(profile: &EconomyProfile) -> String {
    crate::jio::to_string(&problem_json(profile), false)
}
