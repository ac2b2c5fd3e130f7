//! Deterministic instance generators for experiments, examples, and tests.
//!
//! Coordinates come from dyadic lattices (multiples of 0.25 and 0.5, all
//! exactly representable), so distances between distinct candidate points
//! stay at least 0.25 — far above the equality tolerances. Generated
//! preference values never contain the player's own action, which keeps
//! feasible actions separated from their preference sets by a lattice step;
//! that separation is what makes the gap route and the direct equilibrium
//! scan agree exactly on generated instances.
//!
//! Everything is seeded: the same seed yields the same instance on every
//! run and platform.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::economy::{
    ActionSpace, EconomyProfile, PlayerId, ProfilePoint, ToleranceConfig,
};
use crate::profiles::{Perturbation, ProfileFamily, Schedule};
use crate::reductions::GnepSpec;
use crate::setval::{FiniteCloud, Point};
use crate::slmfg::{SignalSpec, SlmfgProblem};

const COARSE_STEP: f64 = 0.5;
const FINE_STEP: f64 = 0.25;
const SPAN_STEPS: usize = 8; // coarse lattice 0.0 ..= 4.0

fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn coarse_axis() -> Vec<f64> {
    (0..=SPAN_STEPS).map(|i| i as f64 * COARSE_STEP).collect()
}

fn lattice(dim: usize, axis: &[f64]) -> Vec<Vec<f64>> {
    match dim {
        1 => axis.iter().map(|&x| vec![x]).collect(),
        2 => {
            let mut out = Vec::with_capacity(axis.len() * axis.len());
            for &x in axis {
                for &y in axis {
                    out.push(vec![x, y]);
                }
            }
            out
        }
        _ => panic!("generators support dimensions 1 and 2"),
    }
}

fn random_grid(rng: &mut ChaCha8Rng, dim: usize, size: usize) -> FiniteCloud {
    let candidates = lattice(dim, &coarse_axis());
    let chosen = rand::seq::index::sample(rng, candidates.len(), size)
        .into_iter()
        .map(|i| candidates[i].clone())
        .collect::<Vec<_>>();
    FiniteCloud::from_coords(dim, &chosen).expect("lattice points are finite")
}

/// Fine-lattice candidates inside the grid's bounding box.
fn fine_candidates(grid: &FiniteCloud) -> Vec<Point> {
    let dim = grid.dim();
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for p in grid.iter() {
        for (k, &c) in p.coords().iter().enumerate() {
            lo[k] = lo[k].min(c);
            hi[k] = hi[k].max(c);
        }
    }
    let axes: Vec<Vec<f64>> = (0..dim)
        .map(|k| {
            let mut axis = Vec::new();
            let mut j = (lo[k] / FINE_STEP).round() as i64;
            loop {
                let x = j as f64 * FINE_STEP;
                if x > hi[k] + 1e-9 {
                    break;
                }
                axis.push(x);
                j += 1;
            }
            if axis.is_empty() {
                axis.push(lo[k]);
            }
            axis
        })
        .collect();
    match dim {
        1 => axes[0].iter().map(|&x| Point::new(vec![x]).unwrap()).collect(),
        2 => {
            let mut out = Vec::new();
            for &x in &axes[0] {
                for &y in &axes[1] {
                    out.push(Point::new(vec![x, y]).unwrap());
                }
            }
            out
        }
        _ => unreachable!(),
    }
}

/// Random nonempty subset of the grid, occasionally enriched with one
/// off-grid fine-lattice point.
fn random_constraint_value(rng: &mut ChaCha8Rng, grid: &FiniteCloud) -> FiniteCloud {
    let mut points: Vec<Point> = grid
        .iter()
        .filter(|_| rng.gen_bool(0.5))
        .cloned()
        .collect();
    if points.is_empty() {
        let i = rng.gen_range(0..grid.len());
        points.push(grid.points()[i].clone());
    }
    if rng.gen_bool(0.3) {
        let fine = fine_candidates(grid);
        let i = rng.gen_range(0..fine.len());
        points.push(fine[i].clone());
    }
    FiniteCloud::new(grid.dim(), points).expect("values share the grid dimension")
}

/// Random preference value at a profile whose own component is `own`:
/// empty with probability `empty_prob`, otherwise a few fine-lattice points
/// never equal to `own`.
fn random_preference_value(
    rng: &mut ChaCha8Rng,
    grid: &FiniteCloud,
    own: &Point,
    empty_prob: f64,
) -> FiniteCloud {
    if rng.gen_bool(empty_prob) {
        return FiniteCloud::empty(grid.dim());
    }
    let fine: Vec<Point> = fine_candidates(grid)
        .into_iter()
        .filter(|p| p.distance(own) > 1e-9)
        .collect();
    if fine.is_empty() {
        return FiniteCloud::empty(grid.dim());
    }
    let size = rng.gen_range(1..=3usize.min(fine.len()));
    let points = rand::seq::index::sample(rng, fine.len(), size)
        .into_iter()
        .map(|i| fine[i].clone())
        .collect::<Vec<_>>();
    FiniteCloud::new(grid.dim(), points).expect("values share the grid dimension")
}

fn player_ids(count: usize) -> Vec<PlayerId> {
    (1..=count)
        .map(|i| PlayerId(format!("p{i}")))
        .collect()
}

struct Shape {
    players: Vec<ActionSpace>,
}

fn random_shape(
    rng: &mut ChaCha8Rng,
    player_range: std::ops::RangeInclusive<usize>,
    action_range: std::ops::RangeInclusive<usize>,
    allow_dim2: bool,
) -> Shape {
    let count = rng.gen_range(player_range);
    let players = player_ids(count)
        .into_iter()
        .map(|id| {
            let dim = if allow_dim2 && rng.gen_bool(0.25) { 2 } else { 1 };
            let size = rng.gen_range(action_range.clone());
            ActionSpace::new(id, random_grid(rng, dim, size)).expect("nonempty grid")
        })
        .collect();
    Shape { players }
}

fn random_tables(
    rng: &mut ChaCha8Rng,
    shape: &Shape,
    empty_prob: f64,
) -> (Vec<Vec<FiniteCloud>>, Vec<Vec<FiniteCloud>>) {
    let players = &shape.players;
    let full_len: usize = players.iter().map(|p| p.grid().len()).product();
    let mut constraints = Vec::with_capacity(players.len());
    let mut preferences = Vec::with_capacity(players.len());
    for (v, player) in players.iter().enumerate() {
        let minus_len: usize = players
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != v)
            .map(|(_, p)| p.grid().len())
            .product();
        constraints.push(
            (0..minus_len)
                .map(|_| random_constraint_value(rng, player.grid()))
                .collect::<Vec<_>>(),
        );
        let mut table = Vec::with_capacity(full_len);
        for rank in 0..full_len {
            let own = own_point(players, v, rank);
            table.push(random_preference_value(rng, player.grid(), &own, empty_prob));
        }
        preferences.push(table);
    }
    (constraints, preferences)
}

fn own_point(players: &[ActionSpace], v: usize, mut rank: usize) -> Point {
    // Decode player v's index out of the full-grid rank.
    let mut idx = vec![0usize; players.len()];
    for i in (0..players.len()).rev() {
        let size = players[i].grid().len();
        idx[i] = rank % size;
        rank /= size;
    }
    players[v].grid().points()[idx[v]].clone()
}

/// A random abstract economy: 2–3 players, 2–6 lattice actions each,
/// random constraint and preference tables. Preference values never contain
/// the player's own action.
pub fn random_economy(seed: u64) -> EconomyProfile {
    let mut rng = rng_from(seed.wrapping_mul(2).wrapping_add(1));
    let shape = random_shape(&mut rng, 2..=3, 2..=6, true);
    let (constraints, preferences) = random_tables(&mut rng, &shape, 0.3);
    EconomyProfile::from_tables(
        shape.players,
        constraints,
        preferences,
        ToleranceConfig::default(),
    )
    .expect("generated tables are structurally complete")
}

/// Three random table sets on one shared set of grids with one shared
/// preference-emptiness pattern; useful for metric-axiom checks where
/// infinite distances would trivialize the inequalities.
pub fn random_profile_triple(seed: u64) -> (EconomyProfile, EconomyProfile, EconomyProfile) {
    let mut rng = rng_from(seed.wrapping_mul(6700417).wrapping_add(3));
    let shape = random_shape(&mut rng, 2..=3, 2..=4, false);
    let full_len: usize = shape.players.iter().map(|p| p.grid().len()).product();
    let pattern: Vec<Vec<bool>> = shape
        .players
        .iter()
        .map(|_| (0..full_len).map(|_| rng.gen_bool(0.3)).collect())
        .collect();
    let make = |rng: &mut ChaCha8Rng| {
        let players = shape.players.clone();
        let mut constraints = Vec::new();
        let mut preferences = Vec::new();
        for (v, player) in players.iter().enumerate() {
            let minus_len: usize = players
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != v)
                .map(|(_, p)| p.grid().len())
                .product();
            constraints.push(
                (0..minus_len)
                    .map(|_| random_constraint_value(rng, player.grid()))
                    .collect::<Vec<_>>(),
            );
            let mut table = Vec::with_capacity(full_len);
            for rank in 0..full_len {
                if pattern[v][rank] {
                    table.push(FiniteCloud::empty(player.dim()));
                } else {
                    let own = own_point(&players, v, rank);
                    // Never empty here: retry draws until nonempty.
                    let mut value = random_preference_value(rng, player.grid(), &own, 0.0);
                    while value.is_empty() {
                        value = random_preference_value(rng, player.grid(), &own, 0.0);
                    }
                    table.push(value);
                }
            }
            preferences.push(table);
        }
        EconomyProfile::from_tables(
            players,
            constraints,
            preferences,
            ToleranceConfig::default(),
        )
        .expect("generated tables are structurally complete")
    };
    let a = make(&mut rng);
    let b = make(&mut rng);
    let c = make(&mut rng);
    (a, b, c)
}

/// A random economy with exactly one planted separation violation: some
/// feasible grid action that also appears in its own preference value.
/// Returns the profile together with the violating player and point.
pub fn planted_separation_violation(seed: u64) -> (EconomyProfile, PlayerId, ProfilePoint) {
    let mut rng = rng_from(seed.wrapping_mul(48271).wrapping_add(7));
    let mut profile = random_economy(seed.wrapping_add(900_000));
    let rank = rng.gen_range(0..profile.full_len());
    let v = rng.gen_range(0..profile.player_count());
    let idx = profile.unrank_full(rank);
    let own = profile.grid_point(v, idx[v]).clone();
    let minus = profile.minus_of_full(v, &idx);
    let minus_rank = profile.rank_minus(v, &minus);
    let dedup = profile.tolerances().dedup;

    let with_point = |cloud: &FiniteCloud, p: &Point| -> FiniteCloud {
        let mut points: Vec<Point> = cloud.iter().cloned().collect();
        points.push(p.clone());
        FiniteCloud::with_dedup(cloud.dim(), points, dedup).expect("same dimension")
    };
    let player = profile.players()[v].id().clone();
    let point = profile.point_at(&idx);
    profile.constraints_mut()[v][minus_rank] =
        with_point(&profile.constraints_mut()[v][minus_rank].clone(), &own);
    profile.preferences_mut()[v][rank] =
        with_point(&profile.preferences_mut()[v][rank].clone(), &own);
    (profile, player, point)
}

/// A random finite GNEP: dyadic objective tables, so objective differences
/// compare exactly against the epsilon values used in tests.
pub fn random_gnep(seed: u64) -> GnepSpec {
    let mut rng = rng_from(seed.wrapping_mul(1_000_003).wrapping_add(11));
    let shape = random_shape(&mut rng, 2..=2, 2..=4, false);
    let full_len: usize = shape.players.iter().map(|p| p.grid().len()).product();
    let objectives: Vec<Vec<f64>> = shape
        .players
        .iter()
        .map(|_| {
            (0..full_len)
                .map(|_| rng.gen_range(0..=16) as f64 * 0.125)
                .collect()
        })
        .collect();
    let constraints: Vec<Vec<FiniteCloud>> = shape
        .players
        .iter()
        .enumerate()
        .map(|(v, player)| {
            let minus_len: usize = shape
                .players
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != v)
                .map(|(_, p)| p.grid().len())
                .product();
            (0..minus_len)
                .map(|_| {
                    if rng.gen_bool(0.6) {
                        player.grid().clone()
                    } else {
                        let mut value = random_constraint_value(&mut rng, player.grid());
                        // Keep constraint values on the grid for GNEPs: the
                        // argmin ranges over grid actions.
                        let on_grid: Vec<Point> = value
                            .iter()
                            .filter(|p| player.grid().contains(p))
                            .cloned()
                            .collect();
                        if !on_grid.is_empty() {
                            value =
                                FiniteCloud::new(player.dim(), on_grid).expect("grid subset");
                        } else {
                            value = player.grid().clone();
                        }
                        value
                    }
                })
                .collect()
        })
        .collect();
    GnepSpec::from_tables(
        shape.players,
        objectives,
        constraints,
        0.0,
        ToleranceConfig::default(),
    )
    .expect("generated tables are structurally complete")
}

/// A family of regular profiles: a base economy with planted equilibria and
/// a joint constraint/preference shift that vanishes geometrically (ratio
/// 1/2, 25 steps). Moving both maps of a player by the same vector keeps
/// every member's improvement pattern equal to the base's.
pub fn random_regular_family(seed: u64) -> ProfileFamily {
    let mut rng = rng_from(seed.wrapping_mul(69_069).wrapping_add(13));
    let shape = random_shape(&mut rng, 2..=2, 2..=3, false);
    let (mut constraints, mut preferences) = random_tables(&mut rng, &shape, 0.4);
    let players = shape.players;
    let full_len: usize = players.iter().map(|p| p.grid().len()).product();

    // Plant one or two equilibria: own actions become feasible and the
    // preference values there are purged of constraint members.
    let plant_count = 1 + (rng.gen_bool(0.5) as usize);
    let planted = rand::seq::index::sample(&mut rng, full_len, plant_count.min(full_len));
    for rank in planted {
        let mut idx = vec![0usize; players.len()];
        let mut r = rank;
        for i in (0..players.len()).rev() {
            let size = players[i].grid().len();
            idx[i] = r % size;
            r /= size;
        }
        for v in 0..players.len() {
            let own = players[v].grid().points()[idx[v]].clone();
            let minus_sizes: Vec<usize> = players
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != v)
                .map(|(_, p)| p.grid().len())
                .collect();
            let minus_idx: Vec<usize> = idx
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != v)
                .map(|(_, &k)| k)
                .collect();
            let mut minus_rank = 0;
            for (k, size) in minus_idx.iter().zip(&minus_sizes) {
                minus_rank = minus_rank * size + k;
            }
            let a = &constraints[v][minus_rank];
            let mut a_points: Vec<Point> = a.iter().cloned().collect();
            a_points.push(own.clone());
            let enriched =
                FiniteCloud::new(a.dim(), a_points).expect("same dimension");
            constraints[v][minus_rank] = enriched;
            let a = &constraints[v][minus_rank];
            let kept: Vec<Point> = preferences[v][rank]
                .iter()
                .filter(|p| !a.contains(p))
                .cloned()
                .collect();
            preferences[v][rank] =
                FiniteCloud::new(players[v].dim(), kept).expect("same dimension");
        }
    }

    let base = EconomyProfile::from_tables(
        players,
        constraints,
        preferences,
        ToleranceConfig::default(),
    )
    .expect("generated tables are structurally complete");

    let vectors: Vec<Vec<f64>> = base
        .players()
        .iter()
        .map(|p| {
            (0..p.dim())
                .map(|_| {
                    let magnitude = [0.25, 0.5, 1.0][rng.gen_range(0..3)];
                    if rng.gen_bool(0.5) {
                        magnitude
                    } else {
                        -magnitude
                    }
                })
                .collect()
        })
        .collect();
    ProfileFamily::new(
        base,
        Perturbation::Shift { vectors },
        Schedule::Geometric {
            ratio: 0.5,
            count: 25,
            scale: 2.0_f64.powi(-5),
        },
        None,
    )
    .expect("shift vectors match player dimensions")
}

/// A random leader-follower problem: at most 5 leader actions, follower
/// grids at most 4x4, dyadic objective tables (ties are common, exercising
/// the lexicographic tie-break), and a signal that is either a list of
/// independent economies on shared grids or one GNEP reduced at per-action
/// epsilons.
pub fn random_slmfg(seed: u64) -> SlmfgProblem {
    let mut rng = rng_from(seed.wrapping_mul(134_775_813).wrapping_add(17));
    let leader_size = rng.gen_range(1..=5usize);
    let leader_grid = FiniteCloud::from_coords(
        1,
        &(0..leader_size)
            .map(|i| vec![i as f64 * COARSE_STEP])
            .collect::<Vec<_>>(),
    )
    .expect("ascending lattice");
    let mut omega: Vec<usize> = (0..leader_size).filter(|_| rng.gen_bool(0.8)).collect();
    omega.sort_unstable();

    let (signals, spec) = if rng.gen_bool(0.5) {
        let shape = random_shape(&mut rng, 2..=2, 2..=4, false);
        let signals: Vec<EconomyProfile> = omega
            .iter()
            .map(|_| {
                let (constraints, preferences) = random_tables(&mut rng, &shape, 0.3);
                EconomyProfile::from_tables(
                    shape.players.clone(),
                    constraints,
                    preferences,
                    ToleranceConfig::default(),
                )
                .expect("generated tables are structurally complete")
            })
            .collect();
        (signals, SignalSpec::PerW)
    } else {
        let gnep = random_gnep(seed.wrapping_add(31_337));
        let epsilons: Vec<f64> = omega
            .iter()
            .map(|_| [0.0, 0.125, 0.25, 0.5][rng.gen_range(0..4)])
            .collect();
        let signals = epsilons
            .iter()
            .map(|&eps| {
                crate::reductions::from_gnep(&gnep.with_epsilon(eps).expect("nonnegative"))
                    .expect("reduction of a valid spec")
            })
            .collect();
        (signals, SignalSpec::GnepFamily { gnep, epsilons })
    };

    let objective: Vec<Vec<f64>> = signals
        .iter()
        .map(|economy| {
            (0..economy.full_len())
                .map(|_| rng.gen_range(0..=16) as f64 * 0.125)
                .collect()
        })
        .collect();
    SlmfgProblem::new(leader_grid, omega, objective, signals, spec)
        .expect("generated problem is structurally complete")
}

// ---------------------------------------------------------------------------
// Named fixtures
// ---------------------------------------------------------------------------

/// One player on the grid {0, 1} with both actions always feasible; action 0
/// prefers 1 and action 1 prefers nothing. The unique equilibrium is 1.
pub fn tiny_economy() -> EconomyProfile {
    let id = PlayerId::from("p1");
    let grid = FiniteCloud::from_coords(1, &[vec![0.0], vec![1.0]]).unwrap();
    let player = ActionSpace::new(id, grid.clone()).unwrap();
    let constraints = vec![vec![grid.clone()]];
    let preferences = vec![vec![
        FiniteCloud::from_coords(1, &[vec![1.0]]).unwrap(),
        FiniteCloud::empty(1),
    ]];
    EconomyProfile::from_tables(
        vec![player],
        constraints,
        preferences,
        ToleranceConfig::default(),
    )
    .unwrap()
}

/// The symmetric prisoner's dilemma as a two-player GNEP with costs
/// f(C,C)=1, f(D,C)=0, f(C,D)=3, f(D,D)=2 (C encoded as 0, D as 1) and
/// unconstrained actions.
pub fn prisoners_dilemma(epsilon: f64) -> GnepSpec {
    let grid = FiniteCloud::from_coords(1, &[vec![0.0], vec![1.0]]).unwrap();
    let players = vec![
        ActionSpace::new(PlayerId::from("p1"), grid.clone()).unwrap(),
        ActionSpace::new(PlayerId::from("p2"), grid.clone()).unwrap(),
    ];
    // Rank order is (x1, x2) with x1 most significant: CC, CD, DC, DD.
    let f1 = vec![1.0, 3.0, 0.0, 2.0];
    let f2 = vec![1.0, 0.0, 3.0, 2.0];
    let constraints = vec![
        vec![grid.clone(), grid.clone()],
        vec![grid.clone(), grid.clone()],
    ];
    GnepSpec::from_tables(
        players,
        vec![f1, f2],
        constraints,
        epsilon,
        ToleranceConfig::default(),
    )
    .unwrap()
}

/// One leader action signaling [`tiny_economy`]; the objective prefers the
/// equilibrium action.
pub fn slmfg_with_single_signal() -> SlmfgProblem {
    let leader_grid = FiniteCloud::from_coords(1, &[vec![0.0]]).unwrap();
    let economy = tiny_economy();
    SlmfgProblem::new(
        leader_grid,
        vec![0],
        vec![vec![5.0, 3.0]],
        vec![economy],
        SignalSpec::PerW,
    )
    .unwrap()
}

/// Builds a leader-follower problem from one GNEP reduced at the given
/// per-action epsilons; the leader objective is the total follower cost.
pub fn slmfg_from_gnep(gnep: &GnepSpec, epsilons: &[f64]) -> SlmfgProblem {
    let leader_grid = FiniteCloud::from_coords(
        1,
        &(0..epsilons.len())
            .map(|i| vec![i as f64])
            .collect::<Vec<_>>(),
    )
    .unwrap();
    let signals: Vec<EconomyProfile> = epsilons
        .iter()
        .map(|&eps| crate::reductions::from_gnep(&gnep.with_epsilon(eps).unwrap()).unwrap())
        .collect();
    let objective: Vec<Vec<f64>> = signals
        .iter()
        .map(|economy| {
            (0..economy.full_len())
                .map(|rank| {
                    (0..economy.player_count())
                        .map(|v| gnep_objective(gnep, v, rank))
                        .sum()
                })
                .collect()
        })
        .collect();
    SlmfgProblem::new(
        leader_grid,
        (0..epsilons.len()).collect(),
        objective,
        signals,
        SignalSpec::GnepFamily {
            gnep: gnep.clone(),
            epsilons: epsilons.to_vec(),
        },
    )
    .unwrap()
}

fn gnep_objective(gnep: &GnepSpec, v: usize, rank: usize) -> f64 {
    gnep.objective(v, rank)
}

/// Two leader actions signaling the prisoner's dilemma at epsilon 0 and 1;
/// the leader pays the total follower cost plus an offset of 10 on the
/// first action.
pub fn two_action_dilemma_slmfg() -> SlmfgProblem {
    let gnep = prisoners_dilemma(0.0);
    let mut problem = slmfg_from_gnep(&gnep, &[0.0, 1.0]);
    let mut objective: Vec<Vec<f64>> = (0..2)
        .map(|pos| {
            (0..problem.signal(pos).full_len())
                .map(|rank| problem.objective(pos, rank))
                .collect()
        })
        .collect();
    for value in objective[0].iter_mut() {
        *value += 10.0;
    }
    let signals = vec![problem.signal(0).clone(), problem.signal(1).clone()];
    let spec = match problem.signal_spec() {
        SignalSpec::GnepFamily { gnep, epsilons } => SignalSpec::GnepFamily {
            gnep: gnep.clone(),
            epsilons: epsilons.clone(),
        },
        SignalSpec::PerW => SignalSpec::PerW,
    };
    problem = SlmfgProblem::new(
        problem.leader_grid().clone(),
        problem.omega().to_vec(),
        objective,
        signals,
        spec,
    )
    .unwrap();
    problem
}

/// A leader-follower problem whose signals drift geometrically away from
/// the signal at position 0: the profile distance from position `n` to
/// position 0 is exactly the returned magnitude `2 * 2^-n`.
pub fn slmfg_with_geometric_signal(count: usize) -> (SlmfgProblem, Vec<f64>) {
    let base = tiny_economy();
    let leader_grid = FiniteCloud::from_coords(
        1,
        &(0..=count)
            .map(|i| vec![i as f64 * FINE_STEP])
            .collect::<Vec<_>>(),
    )
    .unwrap();
    let mut signals = vec![base.clone()];
    let mut magnitudes = Vec::with_capacity(count);
    for n in 1..=count {
        let delta = 0.5_f64.powi(n as i32);
        let mut shifted = base.clone();
        for cloud in shifted.constraints_mut()[0].iter_mut() {
            *cloud = translate_cloud(cloud, delta);
        }
        for cloud in shifted.preferences_mut()[0].iter_mut() {
            *cloud = translate_cloud(cloud, delta);
        }
        signals.push(shifted);
        magnitudes.push(2.0 * delta);
    }
    let objective: Vec<Vec<f64>> = signals
        .iter()
        .map(|economy| (0..economy.full_len()).map(|r| r as f64).collect())
        .collect();
    let problem = SlmfgProblem::new(
        leader_grid,
        (0..=count).collect(),
        objective,
        signals,
        SignalSpec::PerW,
    )
    .unwrap();
    (problem, magnitudes)
}

fn translate_cloud(cloud: &FiniteCloud, delta: f64) -> FiniteCloud {
    let shift = vec![delta; cloud.dim()];
    let points: Vec<Point> = cloud
        .iter()
        .map(|p| {
            Point::new(
                p.coords()
                    .iter()
                    .zip(&shift)
                    .map(|(c, s)| c + s)
                    .collect(),
            )
            .unwrap()
        })
        .collect();
    FiniteCloud::with_dedup(cloud.dim(), points, cloud.dedup()).unwrap()
}

/// A random cloud on a continuous box, for metric experiments.
pub fn random_cloud(rng: &mut ChaCha8Rng, dim: usize, max_points: usize, span: f64) -> FiniteCloud {
    let count = rng.gen_range(1..=max_points);
    let rows: Vec<Vec<f64>> = (0..count)
        .map(|_| (0..dim).map(|_| rng.gen::<f64>() * span).collect())
        .collect();
    FiniteCloud::from_coords(dim, &rows).expect("finite draws")
}

/// Seeds a reproducible generator; re-exported so downstream code does not
/// need a direct dependency on the RNG crates.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    rng_from(seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::economy::validate_economy;

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(random_economy(42), random_economy(42));
        let (a1, _, _) = random_profile_triple(7);
        let (a2, _, _) = random_profile_triple(7);
        assert_eq!(a1, a2);
    }

    #[test]
    fn generated_economies_validate() {
        for seed in 0..50 {
            assert!(validate_economy(&random_economy(seed)).passed());
        }
    }

    #[test]
    fn generated_preferences_respect_own_action_exclusion() {
        for seed in 0..30 {
            let p = random_economy(seed);
            for rank in 0..p.full_len() {
                let idx = p.unrank_full(rank);
                for v in 0..p.player_count() {
                    let own = p.grid_point(v, idx[v]);
                    for q in p.preference(v, rank).iter() {
                        assert!(own.distance(q) > 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn planted_violation_is_unique() {
        for seed in 0..20 {
            let (profile, player, point) = planted_separation_violation(seed);
            let v = profile.player_index(&player).unwrap();
            let idx = profile.locate_profile(&point).unwrap();
            let rank = profile.rank_full(&idx);
            // The planted pair is a genuine violation.
            let own = profile.grid_point(v, idx[v]);
            assert!(profile.constraint_at(v, &idx).contains(own));
            assert!(profile.preference(v, rank).contains(own));
            // And it is the only zero-separation feasible pair.
            let feas = profile.tolerances().feas;
            for r in 0..profile.full_len() {
                let i = profile.unrank_full(r);
                for u in 0..profile.player_count() {
                    if (u, r) == (v, rank) {
                        continue;
                    }
                    let o = profile.grid_point(u, i[u]);
                    let a = profile.constraint_at(u, &i);
                    if crate::setval::displacement(o, a).unwrap() <= feas {
                        assert!(
                            crate::setval::displacement(o, profile.preference(u, r)).unwrap()
                                > 0.0
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn regular_families_share_improvement_patterns() {
        for seed in 0..10 {
            let family = random_regular_family(seed);
            let reference = crate::profiles::improvement_pattern(family.limit_or_base());
            for n in [1, 13, 25] {
                let member = family.member(n).unwrap();
                assert_eq!(crate::profiles::improvement_pattern(&member), reference);
            }
        }
    }

    #[test]
    fn regular_families_have_planted_limit_equilibria() {
        for seed in 0..10 {
            let family = random_regular_family(seed);
            let ne = crate::equilibrium::ne_oracle(family.limit_or_base()).unwrap();
            assert!(!ne.is_empty(), "seed {seed} planted no equilibrium");
        }
    }
}
