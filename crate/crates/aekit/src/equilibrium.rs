//! Equilibrium sets of abstract economies, computed two independent ways:
//! a direct scan of the defining conditions (the oracle route) and the zero
//! set of the gap function. The two must agree on every instance; the oracle
//! equivalence is part of the acceptance gate.
//!
//! A grid profile `x` is an equilibrium when every player's own action is
//! feasible (within `feas` of the constraint value) and no player can
//! improve (the minimum pairwise distance between the constraint value and
//! the preference value stays strictly above `intersect`). The equilibrium
//! set may be empty on arbitrary tabulated instances; that is a result, not
//! an error.

use std::fmt;

use rayon::prelude::*;

use crate::economy::{EconomyProfile, PlayerId, ProfilePoint};
use crate::error::Result;
use crate::gapfun::{gap_at_index, min_pair, GapEvaluation};
use crate::setval::{displacement, Point};

/// How an equilibrium set was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Direct scan of the equilibrium conditions.
    Oracle,
    /// Zero set of the gap function.
    Gap,
    /// Direct epsilon-argmin enumeration of a finite GNEP.
    EpsEnum,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Oracle => "oracle",
            Method::Gap => "gap",
            Method::EpsEnum => "eps-enum",
        })
    }
}

/// Lexicographically sorted, duplicate-free set of equilibrium profiles.
#[derive(Clone, Debug)]
pub struct EquilibriumSet {
    pub method: Method,
    pub points: Vec<ProfilePoint>,
    /// Gap breakdown per point; absent for the epsilon-argmin route, which
    /// never touches the gap machinery.
    pub evaluations: Option<Vec<GapEvaluation>>,
}

impl EquilibriumSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, x: &ProfilePoint) -> bool {
        self.points.iter().any(|p| p == x)
    }
}

/// Per-player residual breakdown backing an accept/reject decision.
#[derive(Clone, Debug)]
pub struct PlayerCertificate {
    pub player: PlayerId,
    /// Distance from the player's own action to the constraint value.
    pub feasibility_residual: f64,
    /// Minimum pairwise distance between constraint and preference values;
    /// `+inf` when either is empty.
    pub min_pair_distance: f64,
    /// A pair within the `intersect` tolerance, when one exists.
    pub violating_pair: Option<(Point, Point)>,
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub accepted: bool,
    pub players: Vec<PlayerCertificate>,
}

fn is_equilibrium_at(profile: &EconomyProfile, full_idx: &[usize]) -> bool {
    let t = profile.tolerances();
    (0..profile.player_count()).all(|v| {
        let a = profile.constraint_at(v, full_idx);
        let p = profile.preference_at(v, full_idx);
        let own = profile.grid_point(v, full_idx[v]);
        let feasible = displacement(own, a).expect("grid dims match") <= t.feas;
        feasible && min_pair(a, p).0 > t.intersect
    })
}

fn attach_evaluations(
    profile: &EconomyProfile,
    ranks: Vec<usize>,
    method: Method,
) -> Result<EquilibriumSet> {
    let mut points = Vec::with_capacity(ranks.len());
    let mut evaluations = Vec::with_capacity(ranks.len());
    for rank in ranks {
        let idx = profile.unrank_full(rank);
        let eval = gap_at_index(profile, &idx)?;
        points.push(eval.point.clone());
        evaluations.push(eval);
    }
    Ok(EquilibriumSet {
        method,
        points,
        evaluations: Some(evaluations),
    })
}

/// Exhaustive scan of the equilibrium conditions over the full grid.
pub fn ne_oracle(profile: &EconomyProfile) -> Result<EquilibriumSet> {
    let hits: Vec<usize> = (0..profile.full_len())
        .into_par_iter()
        .filter(|&rank| is_equilibrium_at(profile, &profile.unrank_full(rank)))
        .collect();
    attach_evaluations(profile, hits, Method::Oracle)
}

/// Equilibria as the sublevel set `gap <= gap_zero` of the gap function.
pub fn ne_via_gap(profile: &EconomyProfile) -> Result<EquilibriumSet> {
    let gap_zero = profile.tolerances().gap_zero;
    let flags: Vec<bool> = (0..profile.full_len())
        .into_par_iter()
        .map(|rank| -> Result<bool> {
            Ok(gap_at_index(profile, &profile.unrank_full(rank))?.gap <= gap_zero)
        })
        .collect::<Result<Vec<_>>>()?;
    let hits: Vec<usize> = flags
        .into_iter()
        .enumerate()
        .filter_map(|(rank, hit)| hit.then_some(rank))
        .collect();
    attach_evaluations(profile, hits, Method::Gap)
}

/// Full residual breakdown for one grid profile. `accepted` holds exactly
/// when the point belongs to the oracle equilibrium set.
pub fn certify(profile: &EconomyProfile, x: &ProfilePoint) -> Result<Certificate> {
    let full_idx = profile.locate_profile(x)?;
    let t = profile.tolerances();
    let mut players = Vec::with_capacity(profile.player_count());
    let mut accepted = true;
    for (v, player) in profile.players().iter().enumerate() {
        let a = profile.constraint_at(v, &full_idx);
        let p = profile.preference_at(v, &full_idx);
        let own = profile.grid_point(v, full_idx[v]);
        let feasibility_residual = displacement(own, a)?;
        let (min_pair_distance, pair) = min_pair(a, p);
        let intersecting = min_pair_distance <= t.intersect;
        if feasibility_residual > t.feas || intersecting {
            accepted = false;
        }
        players.push(PlayerCertificate {
            player: player.id().clone(),
            feasibility_residual,
            min_pair_distance,
            violating_pair: if intersecting {
                pair.map(|(a, b)| (a.clone(), b.clone()))
            } else {
                None
            },
        });
    }
    Ok(Certificate { accepted, players })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::economy::{parse_problem, validate_economy};

    #[test]
    fn minimal_profile_has_one_equilibrium() {
        let p = crate::gen::tiny_economy();
        let oracle = ne_oracle(&p).unwrap();
        assert_eq!(oracle.len(), 1);
        assert_eq!(oracle.points[0].component(0).coords(), &[1.0]);
        let via_gap = ne_via_gap(&p).unwrap();
        assert_eq!(via_gap.points, oracle.points);
    }

    #[test]
    fn empty_preferences_make_every_feasible_point_an_equilibrium() {
        let text = r#"{
            "players": [{"id": "p1", "dim": 1, "grid": [[0.0], [1.0], [2.0]]}],
            "constraints": {"p1": [{"at": [], "value": [[0.0], [1.0], [2.0]]}]},
            "preferences": {"p1": [
                {"at": [[0.0]], "value": []},
                {"at": [[1.0]], "value": []},
                {"at": [[2.0]], "value": []}
            ]}
        }"#;
        let p = parse_problem(text).unwrap();
        assert!(validate_economy(&p).passed());
        let ne = ne_oracle(&p).unwrap();
        assert_eq!(ne.len(), p.full_len());
    }

    #[test]
    fn certificates_match_oracle_membership() {
        let p = crate::gen::tiny_economy();
        let accepted = certify(&p, &p.point_at(&[1])).unwrap();
        assert!(accepted.accepted);
        assert_eq!(accepted.players[0].feasibility_residual, 0.0);
        assert!(accepted.players[0].min_pair_distance.is_infinite());
        assert!(accepted.players[0].violating_pair.is_none());

        let rejected = certify(&p, &p.point_at(&[0])).unwrap();
        assert!(!rejected.accepted);
        let (a, q) = rejected.players[0].violating_pair.clone().unwrap();
        assert_eq!(a.coords(), &[1.0]);
        assert_eq!(q.coords(), &[1.0]);
    }

    #[test]
    fn oracle_and_gap_routes_agree_on_random_instances() {
        for seed in 0..100 {
            let p = crate::gen::random_economy(seed);
            let oracle = ne_oracle(&p).unwrap();
            let gap = ne_via_gap(&p).unwrap();
            assert_eq!(
                oracle.points, gap.points,
                "routes disagree on generated instance {seed}"
            );
        }
    }

    #[test]
    fn certify_agrees_with_oracle_membership_on_random_instances() {
        for seed in 300..330 {
            let p = crate::gen::random_economy(seed);
            let ne = ne_oracle(&p).unwrap();
            for rank in 0..p.full_len() {
                let x = p.point_at(&p.unrank_full(rank));
                let cert = certify(&p, &x).unwrap();
                assert_eq!(cert.accepted, ne.contains(&x));
            }
        }
    }

    #[test]
    fn listed_equilibria_recertify_and_are_sorted() {
        for seed in 400..430 {
            let p = crate::gen::random_economy(seed);
            let ne = ne_oracle(&p).unwrap();
            for w in ne.points.windows(2) {
                assert_eq!(w[0].lex_cmp(&w[1]), std::cmp::Ordering::Less);
            }
            for x in &ne.points {
                assert!(certify(&p, x).unwrap().accepted);
            }
        }
    }
}
