//! Builds abstract economies from two common specializations: finite GNEPs
//! with an epsilon-improvement preference (objectives are costs, minimized)
//! and games whose preferences come from a strict-dominance relation.
//!
//! # GNEP file format
//!
//! ```json
//! {
//!   "players": [{"id": "p1", "dim": 1, "grid": [[0.0], [1.0]]}, ...],
//!   "objectives": {"p1": [{"at": [[0.0], [0.0]], "value": 1.0}, ...], ...},
//!   "constraints": {"p1": [{"at": [[0.0]], "value": [[0.0], [1.0]]}, ...], ...},
//!   "epsilon": 0.0,
//!   "tolerances": { ... }
//! }
//! ```
//!
//! `objectives` tables must cover the full grid; `constraints` and
//! `tolerances` follow the problem-file conventions. A relation file is the
//! same with `dominance` tables (profile -> cloud of strictly dominating
//! actions) in place of `objectives` and no `epsilon`.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::economy::{
    build_players, locate_tuple, ActionSpace, EconomyProfile, ToleranceConfig,
};
use crate::equilibrium::{EquilibriumSet, Method};
use crate::error::{Error, Result};
use crate::jio::JsonValue;
use crate::setval::{displacement, FiniteCloud};

/// A finite generalized Nash equilibrium problem with an epsilon slack.
#[derive(Clone, Debug)]
pub struct GnepSpec {
    players: Vec<ActionSpace>,
    /// `objectives[v][full_rank]`: player `v`'s cost at each full profile.
    objectives: Vec<Vec<f64>>,
    /// `constraints[v][minus_rank]`, as in [`EconomyProfile`].
    constraints: Vec<Vec<FiniteCloud>>,
    epsilon: f64,
    tolerances: ToleranceConfig,
}

impl GnepSpec {
    pub fn from_tables(
        players: Vec<ActionSpace>,
        objectives: Vec<Vec<f64>>,
        constraints: Vec<Vec<FiniteCloud>>,
        epsilon: f64,
        tolerances: ToleranceConfig,
    ) -> Result<Self> {
        if !(epsilon >= 0.0) {
            return Err(Error::invalid(format!(
                "epsilon must be nonnegative, got {epsilon}"
            )));
        }
        // Reuse the profile constructor for the structural checks, with
        // empty preference tables of the right shape.
        let full_len: usize = players.iter().map(|p| p.grid().len()).product();
        let placeholder: Vec<Vec<FiniteCloud>> = players
            .iter()
            .map(|p| vec![FiniteCloud::empty_with_dedup(p.dim(), tolerances.dedup); full_len])
            .collect();
        let probe = EconomyProfile::from_tables(
            players.clone(),
            constraints.clone(),
            placeholder,
            tolerances,
        )?;
        for (v, table) in objectives.iter().enumerate() {
            if table.len() != full_len {
                return Err(Error::validation(format!(
                    "objective table incomplete for player `{}`: {} entries, expected {full_len}",
                    probe.players()[v].id(),
                    table.len()
                )));
            }
            if let Some(bad) = table.iter().find(|x| !x.is_finite()) {
                return Err(Error::validation(format!(
                    "objective table of player `{}` contains non-finite value {bad}",
                    probe.players()[v].id()
                )));
            }
        }
        if objectives.len() != players.len() {
            return Err(Error::validation(
                "objective tables must cover every player",
            ));
        }
        Ok(GnepSpec {
            players,
            objectives,
            constraints,
            epsilon,
            tolerances,
        })
    }

    pub fn players(&self) -> &[ActionSpace] {
        &self.players
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn tolerances(&self) -> &ToleranceConfig {
        &self.tolerances
    }

    pub fn objective(&self, v: usize, full_rank: usize) -> f64 {
        self.objectives[v][full_rank]
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        if !(epsilon >= 0.0) {
            return Err(Error::invalid(format!(
                "epsilon must be nonnegative, got {epsilon}"
            )));
        }
        let mut out = self.clone();
        out.epsilon = epsilon;
        Ok(out)
    }
}

/// Preferences given directly as strict-dominance tables.
#[derive(Clone, Debug)]
pub struct RelationSpec {
    players: Vec<ActionSpace>,
    /// `dominance[v][full_rank]`: actions strictly dominating `x_v` at `x`.
    dominance: Vec<Vec<FiniteCloud>>,
    constraints: Vec<Vec<FiniteCloud>>,
    tolerances: ToleranceConfig,
}

impl RelationSpec {
    pub fn from_tables(
        players: Vec<ActionSpace>,
        dominance: Vec<Vec<FiniteCloud>>,
        constraints: Vec<Vec<FiniteCloud>>,
        tolerances: ToleranceConfig,
    ) -> Result<Self> {
        // Structural checks via the profile constructor; dominance tables
        // have the shape of preference tables.
        EconomyProfile::from_tables(
            players.clone(),
            constraints.clone(),
            dominance.clone(),
            tolerances,
        )?;
        Ok(RelationSpec {
            players,
            dominance,
            constraints,
            tolerances,
        })
    }

    pub fn players(&self) -> &[ActionSpace] {
        &self.players
    }
}

/// Reduces a GNEP to an abstract economy: the preference value at `x` is the
/// set of grid actions improving the player's cost by strictly more than
/// epsilon, and constraint maps carry over unchanged.
pub fn from_gnep(spec: &GnepSpec) -> Result<EconomyProfile> {
    // Shape helper for rank arithmetic shared with the economy profile.
    let full_len: usize = spec.players.iter().map(|p| p.grid().len()).product();
    let placeholder: Vec<Vec<FiniteCloud>> = spec
        .players
        .iter()
        .map(|p| {
            vec![FiniteCloud::empty_with_dedup(p.dim(), spec.tolerances.dedup); full_len]
        })
        .collect();
    let shape = EconomyProfile::from_tables(
        spec.players.clone(),
        spec.constraints.clone(),
        placeholder,
        spec.tolerances,
    )?;

    let mut preferences: Vec<Vec<FiniteCloud>> = Vec::with_capacity(spec.players.len());
    for (v, player) in spec.players.iter().enumerate() {
        let mut table = Vec::with_capacity(full_len);
        for rank in 0..full_len {
            let idx = shape.unrank_full(rank);
            let own_cost = spec.objectives[v][rank];
            let better: Vec<_> = player
                .grid()
                .points()
                .iter()
                .enumerate()
                .filter(|(y, _)| {
                    let alt = shape.full_from_parts(v, *y, &shape.minus_of_full(v, &idx));
                    spec.objectives[v][shape.rank_full(&alt)] < own_cost - spec.epsilon
                })
                .map(|(_, p)| p.clone())
                .collect();
            table.push(FiniteCloud::with_dedup(
                player.dim(),
                better,
                spec.tolerances.dedup,
            )?);
        }
        preferences.push(table);
    }
    EconomyProfile::from_tables(
        spec.players.clone(),
        spec.constraints.clone(),
        preferences,
        spec.tolerances,
    )
}

/// Uses dominance tables directly as preference maps. Rejects reflexive
/// tables (an action dominating itself would break the separation between
/// feasible actions and their preference sets).
pub fn from_relation(spec: &RelationSpec) -> Result<EconomyProfile> {
    let profile = EconomyProfile::from_tables(
        spec.players.clone(),
        spec.constraints.clone(),
        spec.dominance.clone(),
        spec.tolerances,
    )?;
    for rank in 0..profile.full_len() {
        let idx = profile.unrank_full(rank);
        for v in 0..profile.player_count() {
            let own = profile.grid_point(v, idx[v]);
            if displacement(own, profile.preference(v, rank))? == 0.0 {
                return Err(Error::invalid(format!(
                    "dominance table of player `{}` is reflexive at {}: an action cannot \
                     strictly dominate itself",
                    profile.players()[v].id(),
                    profile.point_at(&idx).flatten()
                )));
            }
        }
    }
    Ok(profile)
}

/// Direct enumeration of epsilon equilibria: a profile qualifies when every
/// player's action is feasible and within epsilon of the best feasible cost
/// against the others' actions. Serves as the independent oracle for
/// [`from_gnep`] composed with the equilibrium scan.
pub fn enumerate_eps_equilibria(spec: &GnepSpec) -> Result<EquilibriumSet> {
    let full_len: usize = spec.players.iter().map(|p| p.grid().len()).product();
    let placeholder: Vec<Vec<FiniteCloud>> = spec
        .players
        .iter()
        .map(|p| {
            vec![FiniteCloud::empty_with_dedup(p.dim(), spec.tolerances.dedup); full_len]
        })
        .collect();
    let shape = EconomyProfile::from_tables(
        spec.players.clone(),
        spec.constraints.clone(),
        placeholder,
        spec.tolerances,
    )?;
    let feas = spec.tolerances.feas;

    let mut points = Vec::new();
    'profiles: for rank in 0..full_len {
        let idx = shape.unrank_full(rank);
        for (v, player) in spec.players.iter().enumerate() {
            let a = shape.constraint_at(v, &idx);
            let own = shape.grid_point(v, idx[v]);
            if displacement(own, a)? > feas {
                continue 'profiles;
            }
            let minus = shape.minus_of_full(v, &idx);
            let mut best = f64::INFINITY;
            for (y, q) in player.grid().points().iter().enumerate() {
                if displacement(q, a)? <= feas {
                    let alt = shape.full_from_parts(v, y, &minus);
                    best = best.min(spec.objectives[v][shape.rank_full(&alt)]);
                }
            }
            if spec.objectives[v][rank] > best + spec.epsilon {
                continue 'profiles;
            }
        }
        points.push(shape.point_at(&idx));
    }
    Ok(EquilibriumSet {
        method: Method::EpsEnum,
        points,
        evaluations: None,
    })
}

// ---------------------------------------------------------------------------
// Parsing and serialization
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct RawObjectiveEntry {
    at: Vec<Vec<f64>>,
    value: f64,
}

#[derive(Deserialize)]
struct RawMapEntry {
    at: Vec<Vec<f64>>,
    value: Vec<Vec<f64>>,
}

#[derive(Deserialize, Default, Clone, Copy)]
struct RawTol {
    dedup: Option<f64>,
    feas: Option<f64>,
    intersect: Option<f64>,
    gap_zero: Option<f64>,
}

impl RawTol {
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
struct RawGnep {
    players: Vec<crate::economy::RawPlayer>,
    objectives: BTreeMap<String, Vec<RawObjectiveEntry>>,
    constraints: BTreeMap<String, Vec<RawMapEntry>>,
    #[serde(default)]
    epsilon: f64,
    #[serde(default)]
    tolerances: Option<RawTol>,
}

#[derive(Deserialize)]
struct RawRelation {
    players: Vec<crate::economy::RawPlayer>,
    dominance: BTreeMap<String, Vec<RawMapEntry>>,
    constraints: BTreeMap<String, Vec<RawMapEntry>>,
    #[serde(default)]
    tolerances: Option<RawTol>,
}

struct ParsedPlayers {
    players: Vec<ActionSpace>,
    full_len: usize,
}

fn parse_players(raw: &[crate::economy::RawPlayer], dedup: f64) -> Result<ParsedPlayers> {
    let players = build_players(raw, dedup)?;
    let full_len = players.iter().map(|p| p.grid().len()).product();
    Ok(ParsedPlayers { players, full_len })
}

fn constraints_from_raw(
    players: &[ActionSpace],
    raw: &BTreeMap<String, Vec<RawMapEntry>>,
    dedup: f64,
) -> Result<Vec<Vec<FiniteCloud>>> {
    let mut out: Vec<Vec<Option<FiniteCloud>>> = players
        .iter()
        .enumerate()
        .map(|(v, _)| {
            let len: usize = players
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != v)
                .map(|(_, p)| p.grid().len())
                .product();
            vec![None; len]
        })
        .collect();
    for (key, entries) in raw {
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
                dedup,
                &format!("constraints of `{key}`"),
            )?;
            let mut rank = 0;
            for (k, grid) in idx.iter().zip(&minus_grids) {
                rank = rank * grid.len() + k;
            }
            if out[v][rank].is_some() {
                return Err(Error::validation(format!(
                    "constraints of `{key}`: duplicate entry at reduced index {rank}"
                )));
            }
            out[v][rank] = Some(FiniteCloud::from_coords_with_dedup(
                players[v].dim(),
                &entry.value,
                dedup,
            )?);
        }
    }
    out.into_iter()
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
        .collect()
}

fn full_tables_from_raw(
    players: &[ActionSpace],
    raw: &BTreeMap<String, Vec<RawMapEntry>>,
    dedup: f64,
    full_len: usize,
    what: &str,
) -> Result<Vec<Vec<FiniteCloud>>> {
    let all_grids: Vec<&FiniteCloud> = players.iter().map(|p| p.grid()).collect();
    let mut out: Vec<Vec<Option<FiniteCloud>>> = players
        .iter()
        .map(|_| vec![None; full_len])
        .collect();
    for (key, entries) in raw {
        let v = players
            .iter()
            .position(|p| p.id().as_str() == key)
            .ok_or_else(|| Error::UnknownPlayer(key.clone()))?;
        for entry in entries {
            let idx = locate_tuple(&all_grids, &entry.at, dedup, &format!("{what} of `{key}`"))?;
            let mut rank = 0;
            for (k, grid) in idx.iter().zip(&all_grids) {
                rank = rank * grid.len() + k;
            }
            if out[v][rank].is_some() {
                return Err(Error::validation(format!(
                    "{what} of `{key}`: duplicate entry at index {rank}"
                )));
            }
            out[v][rank] = Some(FiniteCloud::from_coords_with_dedup(
                players[v].dim(),
                &entry.value,
                dedup,
            )?);
        }
    }
    out.into_iter()
        .enumerate()
        .map(|(v, table)| {
            table
                .into_iter()
                .enumerate()
                .map(|(rank, value)| {
                    value.ok_or_else(|| {
                        Error::validation(format!(
                            "{what} table incomplete: player `{}` is missing index {rank}",
                            players[v].id()
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect()
}

pub fn parse_gnep(text: &str) -> Result<GnepSpec> {
    let raw: RawGnep = serde_json::from_str(text)?;
    gnep_from_raw(raw)
}

pub(crate) fn gnep_from_json_value(value: serde_json::Value) -> Result<GnepSpec> {
    let raw: RawGnep = serde_json::from_value(value)?;
    gnep_from_raw(raw)
}

fn gnep_from_raw(raw: RawGnep) -> Result<GnepSpec> {
    let tolerances = raw.tolerances.unwrap_or_default().resolve();
    tolerances.validate()?;
    let ParsedPlayers { players, full_len } = parse_players(&raw.players, tolerances.dedup)?;
    if players.is_empty() {
        return Err(Error::validation("at least one player is required"));
    }
    let constraints = constraints_from_raw(&players, &raw.constraints, tolerances.dedup)?;
    let all_grids: Vec<&FiniteCloud> = players.iter().map(|p| p.grid()).collect();
    let mut objectives: Vec<Vec<Option<f64>>> =
        players.iter().map(|_| vec![None; full_len]).collect();
    for (key, entries) in &raw.objectives {
        let v = players
            .iter()
            .position(|p| p.id().as_str() == key)
            .ok_or_else(|| Error::UnknownPlayer(key.clone()))?;
        for entry in entries {
            let idx = locate_tuple(
                &all_grids,
                &entry.at,
                tolerances.dedup,
                &format!("objectives of `{key}`"),
            )?;
            let mut rank = 0;
            for (k, grid) in idx.iter().zip(&all_grids) {
                rank = rank * grid.len() + k;
            }
            if objectives[v][rank].is_some() {
                return Err(Error::validation(format!(
                    "objectives of `{key}`: duplicate entry at index {rank}"
                )));
            }
            objectives[v][rank] = Some(entry.value);
        }
    }
    let objectives = objectives
        .into_iter()
        .enumerate()
        .map(|(v, table)| {
            table
                .into_iter()
                .enumerate()
                .map(|(rank, value)| {
                    value.ok_or_else(|| {
                        Error::validation(format!(
                            "objective table incomplete: player `{}` is missing index {rank}",
                            players[v].id()
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    GnepSpec::from_tables(players, objectives, constraints, raw.epsilon, tolerances)
}

pub fn parse_relation(text: &str) -> Result<RelationSpec> {
    let raw: RawRelation = serde_json::from_str(text)?;
    let tolerances = raw.tolerances.unwrap_or_default().resolve();
    tolerances.validate()?;
    let ParsedPlayers { players, full_len } = parse_players(&raw.players, tolerances.dedup)?;
    if players.is_empty() {
        return Err(Error::validation("at least one player is required"));
    }
    let constraints = constraints_from_raw(&players, &raw.constraints, tolerances.dedup)?;
    let dominance = full_tables_from_raw(
        &players,
        &raw.dominance,
        tolerances.dedup,
        full_len,
        "dominance",
    )?;
    RelationSpec::from_tables(players, dominance, constraints, tolerances)
}

pub(crate) fn gnep_json(spec: &GnepSpec) -> JsonValue {
    let full_len: usize = spec.players.iter().map(|p| p.grid().len()).product();
    let placeholder: Vec<Vec<FiniteCloud>> = spec
        .players
        .iter()
        .map(|p| vec![FiniteCloud::empty_with_dedup(p.dim(), spec.tolerances.dedup); full_len])
        .collect();
    let shape = EconomyProfile::from_tables(
        spec.players.clone(),
        spec.constraints.clone(),
        placeholder,
        spec.tolerances,
    )
    .expect("spec was validated at construction");
    let problem = crate::economy::problem_json(&shape);
    let (players_json, constraints_json, tolerances_json) = match &problem {
        JsonValue::Obj(entries) => {
            let find = |key: &str| {
                entries
                    .iter()
                    .find(|(k, _)| k == key)
                    .map(|(_, v)| v.clone())
                    .expect("problem json has fixed keys")
            };
            (find("players"), find("constraints"), find("tolerances"))
        }
        _ => unreachable!("problem json is an object"),
    };
    let mut objectives = Vec::new();
    for (v, player) in spec.players.iter().enumerate() {
        let mut entries = Vec::new();
        for rank in 0..full_len {
            let idx = shape.unrank_full(rank);
            let at: Vec<JsonValue> = idx
                .iter()
                .enumerate()
                .map(|(u, &k)| crate::economy::point_json(shape.grid_point(u, k)))
                .collect();
            entries.push(JsonValue::obj(vec![
                ("at", JsonValue::Arr(at)),
                ("value", JsonValue::Num(spec.objectives[v][rank])),
            ]));
        }
        objectives.push((player.id().to_string(), JsonValue::Arr(entries)));
    }
    JsonValue::Obj(vec![
        ("players".into(), players_json),
        ("objectives".into(), JsonValue::Obj(objectives)),
        ("constraints".into(), constraints_json),
        ("epsilon".into(), JsonValue::Num(spec.epsilon)),
        ("tolerances".into(), tolerances_json),
    ])
}

/// Canonical GNEP text, mirroring the parser's schema.
pub fn serialize_gnep(spec: &GnepSpec) -> String {
    crate::jio::to_string(&gnep_json(spec), false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::ne_oracle;

    #[test]
    fn prisoners_dilemma_equilibria() {
        // Frozen by enumerating all four profiles by hand against the
        // epsilon-improvement definition.
        let pd0 = crate::gen::prisoners_dilemma(0.0);
        let reduced = from_gnep(&pd0).unwrap();
        let ne = ne_oracle(&reduced).unwrap();
        assert_eq!(ne.len(), 1);
        assert_eq!(ne.points[0].flatten().coords(), &[1.0, 1.0]);
        let enumerated = enumerate_eps_equilibria(&pd0).unwrap();
        assert_eq!(enumerated.points, ne.points);

        let pd1 = crate::gen::prisoners_dilemma(1.0);
        let ne1 = ne_oracle(&from_gnep(&pd1).unwrap()).unwrap();
        assert_eq!(ne1.len(), 4);
        assert_eq!(enumerate_eps_equilibria(&pd1).unwrap().len(), 4);
    }

    #[test]
    fn huge_epsilon_empties_every_preference() {
        // epsilon at least the objective range makes improvement impossible.
        let pd = crate::gen::prisoners_dilemma(3.0);
        let reduced = from_gnep(&pd).unwrap();
        for v in 0..reduced.player_count() {
            for rank in 0..reduced.full_len() {
                assert!(reduced.preference(v, rank).is_empty());
            }
        }
        let ne = ne_oracle(&reduced).unwrap();
        assert_eq!(ne.len(), reduced.full_len());
    }

    #[test]
    fn generated_preferences_are_irreflexive() {
        for seed in 0..40 {
            let spec = crate::gen::random_gnep(seed).with_epsilon(0.0).unwrap();
            let reduced = from_gnep(&spec).unwrap();
            for rank in 0..reduced.full_len() {
                let idx = reduced.unrank_full(rank);
                for v in 0..reduced.player_count() {
                    let own = reduced.grid_point(v, idx[v]);
                    assert!(
                        displacement(own, reduced.preference(v, rank)).unwrap() > 0.0
                            || reduced.preference(v, rank).is_empty()
                    );
                }
            }
        }
    }

    #[test]
    fn reduction_matches_direct_enumeration() {
        for seed in 0..60 {
            for eps in [0.0, 0.1, 0.5, 1.0] {
                let spec = crate::gen::random_gnep(seed).with_epsilon(eps).unwrap();
                let via_reduction = ne_oracle(&from_gnep(&spec).unwrap()).unwrap();
                let direct = enumerate_eps_equilibria(&spec).unwrap();
                assert_eq!(
                    via_reduction.points, direct.points,
                    "mismatch at seed {seed}, eps {eps}"
                );
            }
        }
    }

    #[test]
    fn epsilon_growth_never_drops_equilibria() {
        for seed in 60..90 {
            let spec = crate::gen::random_gnep(seed);
            let mut previous: Option<EquilibriumSet> = None;
            for eps in [0.0, 0.1, 0.5, 1.0] {
                let current =
                    enumerate_eps_equilibria(&spec.with_epsilon(eps).unwrap()).unwrap();
                if let Some(prev) = &previous {
                    for x in &prev.points {
                        assert!(current.contains(x));
                    }
                }
                previous = Some(current);
            }
        }
    }

    #[test]
    fn relation_route_matches_gnep_route_table_for_table() {
        // Induce the dominance relation from the objectives at epsilon 0 and
        // check the two constructions serialize identically.
        for seed in 90..110 {
            let spec = crate::gen::random_gnep(seed).with_epsilon(0.0).unwrap();
            let via_gnep = from_gnep(&spec).unwrap();
            let dominance: Vec<Vec<FiniteCloud>> = (0..via_gnep.player_count())
                .map(|v| {
                    (0..via_gnep.full_len())
                        .map(|rank| via_gnep.preference(v, rank).clone())
                        .collect()
                })
                .collect();
            let constraints: Vec<Vec<FiniteCloud>> = (0..via_gnep.player_count())
                .map(|v| {
                    (0..via_gnep.minus_len(v))
                        .map(|rank| via_gnep.constraint(v, rank).clone())
                        .collect()
                })
                .collect();
            let relation = RelationSpec::from_tables(
                via_gnep.players().to_vec(),
                dominance,
                constraints,
                *via_gnep.tolerances(),
            )
            .unwrap();
            let via_relation = from_relation(&relation).unwrap();
            assert_eq!(
                crate::economy::serialize_problem(&via_gnep),
                crate::economy::serialize_problem(&via_relation)
            );
        }
    }

    #[test]
    fn empty_dominance_accepts_every_feasible_profile() {
        let pd = crate::gen::prisoners_dilemma(0.0);
        let shape = from_gnep(&pd).unwrap();
        let empty: Vec<Vec<FiniteCloud>> = (0..shape.player_count())
            .map(|v| {
                (0..shape.full_len())
                    .map(|_| FiniteCloud::empty_with_dedup(shape.players()[v].dim(), 1e-12))
                    .collect()
            })
            .collect();
        let constraints: Vec<Vec<FiniteCloud>> = (0..shape.player_count())
            .map(|v| {
                (0..shape.minus_len(v))
                    .map(|rank| shape.constraint(v, rank).clone())
                    .collect()
            })
            .collect();
        let spec = RelationSpec::from_tables(
            shape.players().to_vec(),
            empty,
            constraints,
            *shape.tolerances(),
        )
        .unwrap();
        let reduced = from_relation(&spec).unwrap();
        assert_eq!(ne_oracle(&reduced).unwrap().len(), reduced.full_len());
    }

    #[test]
    fn full_dominance_empties_the_equilibrium_set() {
        let pd = crate::gen::prisoners_dilemma(0.0);
        let shape = from_gnep(&pd).unwrap();
        let dominance: Vec<Vec<FiniteCloud>> = (0..shape.player_count())
            .map(|v| {
                (0..shape.full_len())
                    .map(|rank| {
                        let idx = shape.unrank_full(rank);
                        let others: Vec<_> = shape.players()[v]
                            .grid()
                            .points()
                            .iter()
                            .filter(|p| p.distance(shape.grid_point(v, idx[v])) > 1e-9)
                            .cloned()
                            .collect();
                        FiniteCloud::with_dedup(shape.players()[v].dim(), others, 1e-12).unwrap()
                    })
                    .collect()
            })
            .collect();
        let constraints: Vec<Vec<FiniteCloud>> = (0..shape.player_count())
            .map(|v| {
                (0..shape.minus_len(v))
                    .map(|rank| shape.constraint(v, rank).clone())
                    .collect()
            })
            .collect();
        let spec = RelationSpec::from_tables(
            shape.players().to_vec(),
            dominance,
            constraints,
            *shape.tolerances(),
        )
        .unwrap();
        let reduced = from_relation(&spec).unwrap();
        assert!(ne_oracle(&reduced).unwrap().is_empty());
    }

    #[test]
    fn reflexive_dominance_is_rejected() {
        let pd = crate::gen::prisoners_dilemma(0.0);
        let shape = from_gnep(&pd).unwrap();
        let dominance: Vec<Vec<FiniteCloud>> = (0..shape.player_count())
            .map(|v| {
                (0..shape.full_len())
                    .map(|rank| {
                        let idx = shape.unrank_full(rank);
                        FiniteCloud::with_dedup(
                            shape.players()[v].dim(),
                            vec![shape.grid_point(v, idx[v]).clone()],
                            1e-12,
                        )
                        .unwrap()
                    })
                    .collect()
            })
            .collect();
        let constraints: Vec<Vec<FiniteCloud>> = (0..shape.player_count())
            .map(|v| {
                (0..shape.minus_len(v))
                    .map(|rank| shape.constraint(v, rank).clone())
                    .collect()
            })
            .collect();
        let spec = RelationSpec::from_tables(
            shape.players().to_vec(),
            dominance,
            constraints,
            *shape.tolerances(),
        )
        .unwrap();
        assert!(from_relation(&spec).is_err());
    }

    #[test]
    fn gnep_round_trip() {
        let pd = crate::gen::prisoners_dilemma(0.5);
        let text = serialize_gnep(&pd);
        let back = parse_gnep(&text).unwrap();
        assert_eq!(back.epsilon(), 0.5);
        assert_eq!(serialize_gnep(&back), text);
    }
}
