//! The single-leader multi-follower game: the leader picks an action `w`
//! from a finite grid, a signal map assigns each feasible `w` an abstract
//! economy for the followers, and the leader minimizes an objective over
//! the graph of the equilibrium response — all pairs `(w, x)` with `x` an
//! equilibrium of the signaled economy. The optimistic mode minimizes
//! jointly over `(w, x)`; the pessimistic mode assumes the worst
//! equilibrium response at each `w`.
//!
//! # Problem file format
//!
//! ```json
//! {
//!   "leader": {"dim": 1, "grid": [[0.0], [1.0]], "omega": [0, 1]},
//!   "objective": [{"w_index": 0, "at": [[0.0], [0.0]], "value": 1.5}, ...],
//!   "signal": {"kind": "per_w_files",
//!              "entries": [{"w_index": 0, "problem": { ... }},
//!                          {"w_index": 1, "path": "econ.json"}]}
//! }
//! ```
//!
//! The leader grid must be listed in canonical (sorted, deduplicated)
//! order; `omega` indexes into it. The alternative signal kind is
//! `{"kind": "gnep_family", "gnep": { ... }, "epsilons": [{"w_index", "epsilon"}]}`,
//! which reduces one GNEP at a per-`w` epsilon. All signaled economies must
//! share follower grids and tolerances, and the objective table must cover
//! every `(w in omega, full follower profile)` pair.

use std::fmt;

use rayon::prelude::*;
use serde::Deserialize;

use crate::economy::{validate_economy, EconomyProfile, ProfilePoint};
use crate::equilibrium::ne_oracle;
use crate::error::{Error, Result};
use crate::profiles::rho;
use crate::setval::{excess, FiniteCloud, Point, Window};

/// How the leader aggregates over the follower equilibria at each action.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Joint minimization over leader action and follower equilibrium.
    Optimistic,
    /// Worst follower equilibrium per leader action, then minimize.
    Pessimistic,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Optimistic => "optimistic",
            Mode::Pessimistic => "pessimistic",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "optimistic" => Ok(Mode::Optimistic),
            "pessimistic" => Ok(Mode::Pessimistic),
            other => Err(Error::invalid(format!(
                "mode must be optimistic or pessimistic, got `{other}`"
            ))),
        }
    }
}

/// How the signal map was declared; kept for serialization.
#[derive(Clone, Debug)]
pub enum SignalSpec {
    PerW,
    GnepFamily {
        gnep: crate::reductions::GnepSpec,
        epsilons: Vec<f64>,
    },
}

/// A single-leader multi-follower problem over finite grids.
#[derive(Clone, Debug)]
pub struct SlmfgProblem {
    leader_grid: FiniteCloud,
    /// Sorted, duplicate-free indices into the leader grid.
    omega: Vec<usize>,
    /// `objective[omega_pos][full follower rank]`.
    objective: Vec<Vec<f64>>,
    /// Signaled economy per omega position.
    signals: Vec<EconomyProfile>,
    spec: SignalSpec,
}

impl SlmfgProblem {
    pub fn new(
        leader_grid: FiniteCloud,
        omega: Vec<usize>,
        objective: Vec<Vec<f64>>,
        signals: Vec<EconomyProfile>,
        spec: SignalSpec,
    ) -> Result<Self> {
        if leader_grid.is_empty() {
            return Err(Error::validation("leader grid is empty"));
        }
        let mut seen = vec![false; leader_grid.len()];
        for &i in &omega {
            if i >= leader_grid.len() {
                return Err(Error::validation(format!(
                    "omega index {i} outside leader grid of size {}",
                    leader_grid.len()
                )));
            }
            if seen[i] {
                return Err(Error::validation(format!("omega index {i} repeated")));
            }
            seen[i] = true;
        }
        for pair in omega.windows(2) {
            if pair[0] > pair[1] {
                return Err(Error::validation(
                    "omega indices must be listed in ascending order",
                ));
            }
        }
        if signals.len() != omega.len() || objective.len() != omega.len() {
            return Err(Error::validation(
                "signal and objective tables must cover every omega entry",
            ));
        }
        if let Some(first) = signals.first() {
            for s in &signals[1..] {
                if !first.same_grids(s) {
                    return Err(Error::validation(
                        "signaled economies must share follower grids",
                    ));
                }
                if s.tolerances() != first.tolerances() {
                    return Err(Error::validation(
                        "signaled economies must share tolerances",
                    ));
                }
            }
            for (pos, table) in objective.iter().enumerate() {
                if table.len() != first.full_len() {
                    return Err(Error::validation(format!(
                        "objective table at omega position {pos} has {} entries, expected {}",
                        table.len(),
                        first.full_len()
                    )));
                }
                if let Some(bad) = table.iter().find(|x| !x.is_finite()) {
                    return Err(Error::validation(format!(
                        "objective table contains non-finite value {bad}"
                    )));
                }
            }
        }
        Ok(SlmfgProblem {
            leader_grid,
            omega,
            objective,
            signals,
            spec,
        })
    }

    pub fn leader_grid(&self) -> &FiniteCloud {
        &self.leader_grid
    }

    pub fn omega(&self) -> &[usize] {
        &self.omega
    }

    pub fn leader_point(&self, omega_pos: usize) -> &Point {
        &self.leader_grid.points()[self.omega[omega_pos]]
    }

    /// The economy signaled at omega position `pos`.
    pub fn signal(&self, pos: usize) -> &EconomyProfile {
        &self.signals[pos]
    }

    pub fn objective(&self, omega_pos: usize, full_rank: usize) -> f64 {
        self.objective[omega_pos][full_rank]
    }

    pub fn signal_spec(&self) -> &SignalSpec {
        &self.spec
    }
}

/// One vertex of the response graph.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphPair {
    pub omega_pos: usize,
    pub w: Point,
    pub x: ProfilePoint,
}

/// Enumerates the graph of the equilibrium response: for each feasible
/// leader action (in grid order) every equilibrium of the signaled economy
/// (in lexicographic order). Signaled economies that fail validation abort
/// with an error naming the leader action.
pub fn build_graph(problem: &SlmfgProblem) -> Result<Vec<GraphPair>> {
    let per_w: Vec<Result<Vec<GraphPair>>> = (0..problem.omega.len())
        .into_par_iter()
        .map(|pos| -> Result<Vec<GraphPair>> {
            let economy = problem.signal(pos);
            let report = validate_economy(economy);
            if !report.passed() {
                return Err(Error::validation(format!(
                    "signal at leader action {} is invalid: {}",
                    problem.leader_point(pos),
                    report.violations[0].message
                )));
            }
            let ne = ne_oracle(economy)?;
            Ok(ne
                .points
                .into_iter()
                .map(|x| GraphPair {
                    omega_pos: pos,
                    w: problem.leader_point(pos).clone(),
                    x,
                })
                .collect())
        })
        .collect();
    let mut graph = Vec::new();
    for chunk in per_w {
        graph.extend(chunk?);
    }
    Ok(graph)
}

#[derive(Clone, Debug)]
pub struct SlmfgSolution {
    pub mode: Mode,
    pub w: Point,
    pub x: ProfilePoint,
    pub value: f64,
    pub graph_size: usize,
    /// Equilibrium count per omega entry, in omega order.
    pub per_w_counts: Vec<usize>,
}

/// Minimizes the leader objective over the response graph. Returns `None`
/// (no solution) exactly when the graph is empty. Ties break toward the
/// lexicographically smallest `(w, x)`; in pessimistic mode the reported
/// `x` is the worst equilibrium at the chosen leader action.
pub fn solve_slmfg(problem: &SlmfgProblem, mode: Mode) -> Result<Option<SlmfgSolution>> {
    let graph = build_graph(problem)?;
    let mut per_w_counts = vec![0usize; problem.omega.len()];
    for pair in &graph {
        per_w_counts[pair.omega_pos] += 1;
    }
    if graph.is_empty() {
        return Ok(None);
    }

    let value_of = |pair: &GraphPair| -> f64 {
        let economy = problem.signal(pair.omega_pos);
        let rank = economy.rank_full(
            &economy
                .locate_profile(&pair.x)
                .expect("graph points are grid points"),
        );
        problem.objective(pair.omega_pos, rank)
    };

    let best = match mode {
        Mode::Optimistic => {
            let mut best: Option<(&GraphPair, f64)> = None;
            for pair in &graph {
                let value = value_of(pair);
                // Strict improvement only: graph order is lexicographic, so
                // the first minimum wins ties.
                if best.map_or(true, |(_, incumbent)| value < incumbent) {
                    best = Some((pair, value));
                }
            }
            best.map(|(pair, value)| (pair.clone(), value))
        }
        Mode::Pessimistic => {
            let mut best: Option<(GraphPair, f64)> = None;
            for pos in 0..problem.omega.len() {
                let mut worst: Option<(&GraphPair, f64)> = None;
                for pair in graph.iter().filter(|p| p.omega_pos == pos) {
                    let value = value_of(pair);
                    if worst.map_or(true, |(_, incumbent)| value > incumbent) {
                        worst = Some((pair, value));
                    }
                }
                if let Some((pair, value)) = worst {
                    if best
                        .as_ref()
                        .map_or(true, |(_, incumbent)| value < *incumbent)
                    {
                        best = Some((pair.clone(), value));
                    }
                }
            }
            best
        }
    };

    let (pair, value) = best.expect("graph is nonempty");
    Ok(Some(SlmfgSolution {
        mode,
        w: pair.w,
        x: pair.x,
        value,
        graph_size: graph.len(),
        per_w_counts,
    }))
}

#[derive(Clone, Debug)]
pub struct SignalProbeReport {
    /// Profile distance from each sequence member's signal to the target's.
    pub rho_trace: Vec<f64>,
    /// Excess of each member's equilibrium set from the target's.
    pub ne_excess_trace: Vec<f64>,
    pub tol: f64,
    pub verdict: crate::profiles::Verdict,
    pub window: Window,
}

/// Probes continuity of the signal map along a sequence of omega positions
/// converging to a target position: traces `rho` between signaled economies
/// and, as the composed-response witness, the equilibrium-set excesses.
/// Passes when every tail rho stays at or below `tol` (default: the
/// follower `feas` tolerance).
pub fn signal_continuity_probe(
    problem: &SlmfgProblem,
    sequence: &[usize],
    target: usize,
    window: Window,
    tol: Option<f64>,
) -> Result<SignalProbeReport> {
    if problem.omega.is_empty() {
        return Err(Error::invalid("problem has an empty feasible leader set"));
    }
    if target >= problem.omega.len() {
        return Err(Error::invalid(format!(
            "target omega position {target} outside 0..{}",
            problem.omega.len()
        )));
    }
    for &pos in sequence {
        if pos >= problem.omega.len() {
            return Err(Error::invalid(format!(
                "sequence omega position {pos} outside 0..{}",
                problem.omega.len()
            )));
        }
    }
    if window.end() > sequence.len() {
        return Err(Error::invalid(format!(
            "window {window} exceeds sequence length {}",
            sequence.len()
        )));
    }
    let hat = problem.signal(target);
    let tol = tol.unwrap_or(hat.tolerances().feas);
    let hat_ne = ne_oracle(hat)?;
    let hat_dim: usize = hat.players().iter().map(|p| p.dim()).sum();
    let hat_cloud = FiniteCloud::with_dedup(
        hat_dim,
        hat_ne.points.iter().map(|x| x.flatten()).collect(),
        hat.tolerances().dedup,
    )?;

    let mut rho_trace = Vec::with_capacity(window.len());
    let mut ne_excess_trace = Vec::with_capacity(window.len());
    for n in window.indices() {
        let member = problem.signal(sequence[n - 1]);
        rho_trace.push(rho(member, hat)?);
        let ne = ne_oracle(member)?;
        let cloud = FiniteCloud::with_dedup(
            hat_dim,
            ne.points.iter().map(|x| x.flatten()).collect(),
            member.tolerances().dedup,
        )?;
        ne_excess_trace.push(excess(&cloud, &hat_cloud)?);
    }
    let tail_ok = rho_trace[window.tail_start_pos()..]
        .iter()
        .all(|&r| r <= tol);
    Ok(SignalProbeReport {
        rho_trace,
        ne_excess_trace,
        tol,
        verdict: if tail_ok {
            crate::profiles::Verdict::Pass
        } else {
            crate::profiles::Verdict::Fail
        },
        window,
    })
}

// ---------------------------------------------------------------------------
// Parsing and serialization
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct RawLeader {
    dim: usize,
    grid: Vec<Vec<f64>>,
    omega: Vec<usize>,
}

#[derive(Deserialize)]
struct RawObjectiveRow {
    w_index: usize,
    at: Vec<Vec<f64>>,
    value: f64,
}

#[derive(Deserialize)]
struct RawSignalEntry {
    w_index: usize,
    #[serde(default)]
    problem: Option<serde_json::Value>,
    #[serde(default)]
    path: Option<String>,
}

#[derive(Deserialize)]
struct RawEpsilonEntry {
    w_index: usize,
    epsilon: f64,
}

#[derive(Deserialize)]
struct RawSignal {
    kind: String,
    #[serde(default)]
    entries: Option<Vec<RawSignalEntry>>,
    #[serde(default)]
    gnep: Option<serde_json::Value>,
    #[serde(default)]
    epsilons: Option<Vec<RawEpsilonEntry>>,
}

#[derive(Deserialize)]
struct RawSlmfg {
    leader: RawLeader,
    objective: Vec<RawObjectiveRow>,
    signal: RawSignal,
}

/// Parses a problem file. `dir` resolves signal entries given as paths.
pub fn parse_slmfg(text: &str, dir: Option<&std::path::Path>) -> Result<SlmfgProblem> {
    let raw: RawSlmfg = serde_json::from_str(text)?;
    let leader_grid = FiniteCloud::from_coords(raw.leader.dim, &raw.leader.grid)?;
    if leader_grid.len() != raw.leader.grid.len() {
        return Err(Error::validation(
            "leader grid contains duplicate points; omega indexing would be ambiguous",
        ));
    }
    for (i, row) in raw.leader.grid.iter().enumerate() {
        let p = Point::new(row.clone())?;
        if leader_grid.points()[i] != p {
            return Err(Error::validation(
                "leader grid must be listed in canonical (lexicographically sorted) order",
            ));
        }
    }
    let mut omega = raw.leader.omega.clone();
    omega.sort_unstable();

    let omega_pos = |w_index: usize| -> Result<usize> {
        omega
            .iter()
            .position(|&i| i == w_index)
            .ok_or_else(|| Error::validation(format!("w_index {w_index} is not in omega")))
    };

    let (signals, spec) = match raw.signal.kind.as_str() {
        "per_w_files" => {
            let entries = raw
                .signal
                .entries
                .ok_or_else(|| Error::parse("per_w_files signal needs `entries`"))?;
            let mut slots: Vec<Option<EconomyProfile>> = vec![None; omega.len()];
            for entry in entries {
                let pos = omega_pos(entry.w_index)?;
                if slots[pos].is_some() {
                    return Err(Error::validation(format!(
                        "duplicate signal entry for w_index {}",
                        entry.w_index
                    )));
                }
                let profile = match (entry.problem, entry.path) {
                    (Some(value), None) => crate::economy::profile_from_json_value(value)?,
                    (None, Some(path)) => {
                        let full = match dir {
                            Some(d) => d.join(&path),
                            None => std::path::PathBuf::from(&path),
                        };
                        let text = std::fs::read_to_string(&full).map_err(|e| {
                            Error::Parse(format!(
                                "cannot read signal file `{}`: {e}",
                                full.display()
                            ))
                        })?;
                        crate::economy::parse_problem(&text)?
                    }
                    _ => {
                        return Err(Error::parse(
                            "signal entry needs exactly one of `problem` or `path`",
                        ))
                    }
                };
                slots[pos] = Some(profile);
            }
            let signals = slots
                .into_iter()
                .enumerate()
                .map(|(pos, slot)| {
                    slot.ok_or_else(|| {
                        Error::validation(format!(
                            "signal entry missing for omega index {}",
                            omega[pos]
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            (signals, SignalSpec::PerW)
        }
        "gnep_family" => {
            let gnep_value = raw
                .signal
                .gnep
                .ok_or_else(|| Error::parse("gnep_family signal needs `gnep`"))?;
            let gnep = crate::reductions::gnep_from_json_value(gnep_value)?;
            let entries = raw
                .signal
                .epsilons
                .ok_or_else(|| Error::parse("gnep_family signal needs `epsilons`"))?;
            let mut slots: Vec<Option<f64>> = vec![None; omega.len()];
            for entry in entries {
                let pos = omega_pos(entry.w_index)?;
                if slots[pos].is_some() {
                    return Err(Error::validation(format!(
                        "duplicate epsilon entry for w_index {}",
                        entry.w_index
                    )));
                }
                slots[pos] = Some(entry.epsilon);
            }
            let epsilons = slots
                .into_iter()
                .enumerate()
                .map(|(pos, slot)| {
                    slot.ok_or_else(|| {
                        Error::validation(format!(
                            "epsilon entry missing for omega index {}",
                            omega[pos]
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let signals = epsilons
                .iter()
                .map(|&eps| crate::reductions::from_gnep(&gnep.with_epsilon(eps)?))
                .collect::<Result<Vec<_>>>()?;
            (signals, SignalSpec::GnepFamily { gnep, epsilons })
        }
        other => return Err(Error::parse(format!("unknown signal kind `{other}`"))),
    };

    if omega.is_empty() {
        // An empty feasible set is a degenerate but representable problem.
        if !raw.objective.is_empty() {
            return Err(Error::validation(
                "objective entries reference an empty omega",
            ));
        }
        return SlmfgProblem::new(leader_grid, omega, Vec::new(), Vec::new(), spec);
    }

    // The objective table is keyed by (w_index, follower profile).
    let first = &signals[0];
    let grids: Vec<&FiniteCloud> = first.players().iter().map(|p| p.grid()).collect();
    let mut objective: Vec<Vec<Option<f64>>> = vec![vec![None; first.full_len()]; omega.len()];
    for row in &raw.objective {
        let pos = omega_pos(row.w_index)?;
        let idx =
            crate::economy::locate_tuple(&grids, &row.at, first.tolerances().dedup, "objective")?;
        let mut rank = 0;
        for (k, grid) in idx.iter().zip(&grids) {
            rank = rank * grid.len() + k;
        }
        if objective[pos][rank].is_some() {
            return Err(Error::validation(format!(
                "objective: duplicate entry for w_index {} at rank {rank}",
                row.w_index
            )));
        }
        if !row.value.is_finite() {
            return Err(Error::validation(format!(
                "objective value at w_index {} is not finite",
                row.w_index
            )));
        }
        objective[pos][rank] = Some(row.value);
    }
    let objective = objective
        .into_iter()
        .enumerate()
        .map(|(pos, table)| {
            table
                .into_iter()
                .enumerate()
                .map(|(rank, value)| {
                    value.ok_or_else(|| {
                        Error::validation(format!(
                            "objective table incomplete: omega index {} is missing rank {rank}",
                            omega[pos]
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    SlmfgProblem::new(leader_grid, omega, objective, signals, spec)
}

/// Canonical problem text with inline signal economies.
pub fn serialize_slmfg(problem: &SlmfgProblem) -> String {
    use crate::jio::JsonValue;
    let leader = JsonValue::obj(vec![
        ("dim", JsonValue::Int(problem.leader_grid.dim() as i64)),
        ("grid", crate::economy::cloud_json(&problem.leader_grid)),
        (
            "omega",
            JsonValue::Arr(
                problem
                    .omega
                    .iter()
                    .map(|&i| JsonValue::Int(i as i64))
                    .collect(),
            ),
        ),
    ]);
    let mut objective_rows = Vec::new();
    for (pos, table) in problem.objective.iter().enumerate() {
        let economy = problem.signal(pos);
        for (rank, &value) in table.iter().enumerate() {
            let idx = economy.unrank_full(rank);
            let at: Vec<JsonValue> = idx
                .iter()
                .enumerate()
                .map(|(u, &k)| crate::economy::point_json(economy.grid_point(u, k)))
                .collect();
            objective_rows.push(JsonValue::obj(vec![
                ("at", JsonValue::Arr(at)),
                ("value", JsonValue::Num(value)),
                ("w_index", JsonValue::Int(problem.omega[pos] as i64)),
            ]));
        }
    }
    let signal = match problem.signal_spec() {
        SignalSpec::PerW => {
            let entries: Vec<JsonValue> = (0..problem.omega.len())
                .map(|pos| {
                    JsonValue::obj(vec![
                        (
                            "problem",
                            crate::economy::problem_json(problem.signal(pos)),
                        ),
                        ("w_index", JsonValue::Int(problem.omega[pos] as i64)),
                    ])
                })
                .collect();
            JsonValue::obj(vec![
                ("entries", JsonValue::Arr(entries)),
                ("kind", JsonValue::Str("per_w_files".into())),
            ])
        }
        SignalSpec::GnepFamily { gnep, epsilons } => {
            let eps_entries: Vec<JsonValue> = epsilons
                .iter()
                .enumerate()
                .map(|(pos, &eps)| {
                    JsonValue::obj(vec![
                        ("epsilon", JsonValue::Num(eps)),
                        ("w_index", JsonValue::Int(problem.omega[pos] as i64)),
                    ])
                })
                .collect();
            JsonValue::obj(vec![
                ("epsilons", JsonValue::Arr(eps_entries)),
                ("gnep", crate::reductions::gnep_json(gnep)),
                ("kind", JsonValue::Str("gnep_family".into())),
            ])
        }
    };
    let root = JsonValue::obj(vec![
        ("leader", leader),
        ("objective", JsonValue::Arr(objective_rows)),
        ("signal", signal),
    ]);
    crate::jio::to_string(&root, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent route to the optimistic solution: filter every
    /// `(omega position, grid profile)` pair through the certifier and take
    /// the lexicographically first minimum of the objective.
    fn filter_min_oracle(problem: &SlmfgProblem) -> Option<(Point, ProfilePoint, f64)> {
        let mut best: Option<(Point, ProfilePoint, f64)> = None;
        for pos in 0..problem.omega().len() {
            let economy = problem.signal(pos);
            for rank in 0..economy.full_len() {
                let x = economy.point_at(&economy.unrank_full(rank));
                if !crate::equilibrium::certify(economy, &x).unwrap().accepted {
                    continue;
                }
                let value = problem.objective(pos, rank);
                if best.as_ref().map_or(true, |(_, _, incumbent)| value < *incumbent) {
                    best = Some((problem.leader_point(pos).clone(), x, value));
                }
            }
        }
        best
    }

    #[test]
    fn single_leader_action_with_minimal_signal() {
        let problem = crate::gen::slmfg_with_single_signal();
        let graph = build_graph(&problem).unwrap();
        assert_eq!(graph.len(), 1);
        assert_eq!(graph[0].x.flatten().coords(), &[1.0]);
        let solution = solve_slmfg(&problem, Mode::Optimistic).unwrap().unwrap();
        assert_eq!(solution.graph_size, 1);
    }

    #[test]
    fn empty_omega_gives_empty_graph_and_no_solution() {
        let text = r#"{
            "leader": {"dim": 1, "grid": [[0.0], [1.0]], "omega": []},
            "objective": [],
            "signal": {"kind": "per_w_files", "entries": []}
        }"#;
        let problem = parse_slmfg(text, None).unwrap();
        assert!(build_graph(&problem).unwrap().is_empty());
        assert!(solve_slmfg(&problem, Mode::Optimistic).unwrap().is_none());
    }

    #[test]
    fn two_action_fixture_graph_sizes_and_solution() {
        // Leader action 0 carries the strict-improvement game (one
        // equilibrium, objective offset +10); action 1 carries the slack
        // variant where all four profiles are equilibria.
        let problem = crate::gen::two_action_dilemma_slmfg();
        let graph = build_graph(&problem).unwrap();
        let count0 = graph.iter().filter(|p| p.omega_pos == 0).count();
        let count1 = graph.iter().filter(|p| p.omega_pos == 1).count();
        assert_eq!((count0, count1), (1, 4));

        // Frozen by evaluating the five graph pairs by hand: mutual
        // cooperation at the second action costs 1 + 1 = 2, every other
        // pair costs more.
        let solution = solve_slmfg(&problem, Mode::Optimistic).unwrap().unwrap();
        assert_eq!(solution.value, 2.0);
        assert_eq!(solution.w.coords(), &[1.0]);
        assert_eq!(solution.x.flatten().coords(), &[0.0, 0.0]);
        assert_eq!(solution.per_w_counts, vec![1, 4]);
        assert_eq!(solution.graph_size, 5);

        // Pessimistic mode: worst at action 0 is 14, worst at action 1 is
        // mutual defection at 4; the leader prefers action 1.
        let pess = solve_slmfg(&problem, Mode::Pessimistic).unwrap().unwrap();
        assert_eq!(pess.value, 4.0);
        assert_eq!(pess.w.coords(), &[1.0]);
        assert_eq!(pess.x.flatten().coords(), &[1.0, 1.0]);
    }

    #[test]
    fn solver_matches_certify_filter_oracle() {
        for seed in 0..40 {
            let problem = crate::gen::random_slmfg(seed);
            let got = solve_slmfg(&problem, Mode::Optimistic).unwrap();
            let expected = filter_min_oracle(&problem);
            match (got, expected) {
                (None, None) => {}
                (Some(s), Some((w, x, value))) => {
                    assert_eq!(s.w, w, "seed {seed}");
                    assert_eq!(s.x, x, "seed {seed}");
                    assert_eq!(s.value, value, "seed {seed}");
                }
                (got, expected) => {
                    panic!("seed {seed}: solver {got:?} vs oracle {expected:?}")
                }
            }
        }
    }

    #[test]
    fn epsilon_growth_never_raises_the_optimum() {
        // Adding equilibria (raising epsilon in a reduced signal) can only
        // improve the optimistic leader.
        let base = crate::gen::prisoners_dilemma(0.0);
        let mut last = f64::INFINITY;
        for eps in [0.0, 0.5, 1.0] {
            let problem = crate::gen::slmfg_from_gnep(&base, &[eps]);
            let solution = solve_slmfg(&problem, Mode::Optimistic).unwrap().unwrap();
            assert!(solution.value <= last);
            last = solution.value;
        }
    }

    #[test]
    fn continuity_probe_on_constant_sequence() {
        let problem = crate::gen::two_action_dilemma_slmfg();
        let report = signal_continuity_probe(
            &problem,
            &[0, 0, 0, 0],
            0,
            Window::new(1, 4).unwrap(),
            None,
        )
        .unwrap();
        assert_eq!(report.verdict, crate::profiles::Verdict::Pass);
        assert!(report.rho_trace.iter().all(|&r| r == 0.0));
        assert!(report.ne_excess_trace.iter().all(|&e| e == 0.0));
    }

    #[test]
    fn continuity_probe_traces_planted_perturbations() {
        let (problem, magnitudes) = crate::gen::slmfg_with_geometric_signal(11);
        let len = magnitudes.len();
        let sequence: Vec<usize> = (1..=len).collect();
        let report = signal_continuity_probe(
            &problem,
            &sequence,
            0,
            Window::new(1, len).unwrap(),
            Some(1.0),
        )
        .unwrap();
        for (pos, expected) in magnitudes.iter().enumerate() {
            assert!(
                (report.rho_trace[pos] - expected).abs() <= 1e-12,
                "trace {} vs planted {}",
                report.rho_trace[pos],
                expected
            );
        }
    }

    #[test]
    fn slmfg_round_trip() {
        for seed in [0, 7] {
            let problem = crate::gen::random_slmfg(seed);
            let text = serialize_slmfg(&problem);
            let back = parse_slmfg(&text, None).unwrap();
            assert_eq!(serialize_slmfg(&back), text);
        }
    }

    #[test]
    fn non_canonical_leader_grid_is_rejected() {
        let text = r#"{
            "leader": {"dim": 1, "grid": [[1.0], [0.0]], "omega": [0]},
            "objective": [],
            "signal": {"kind": "per_w_files", "entries": []}
        }"#;
        assert!(parse_slmfg(text, None).is_err());
    }
}
