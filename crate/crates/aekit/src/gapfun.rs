//! Improvement sets, per-player candidate maps, and the gap function.
//!
//! At a profile point `x`, player `v` is *improvable* when the constraint
//! value `A_v(x_-v)` and the preference value `P_v(x)` intersect up to the
//! `intersect` tolerance. The candidate map returns that tolerance
//! intersection when the player is improvable and the whole constraint value
//! otherwise; the gap at `x` is the largest distance from a player's own
//! action to her candidate set. The gap is nonnegative and vanishes (up to
//! `gap_zero`) exactly on the equilibrium set.

use rayon::prelude::*;

use crate::economy::{EconomyProfile, PlayerId, ProfilePoint};
use crate::error::{Error, Result};
use crate::setval::{displacement, FiniteCloud, Point};

/// Per-player slice of a gap evaluation.
#[derive(Clone, Debug)]
pub struct PlayerGap {
    pub player: PlayerId,
    /// Whether the point lies in this player's improvement set.
    pub improvement: bool,
    /// Candidate set: feasible improvements when any exist, otherwise the
    /// whole constraint value. Nonempty on valid profiles.
    pub candidates: FiniteCloud,
    /// Distance from the player's own action to the candidate set.
    pub residual: f64,
}

/// Gap function value at one profile point, with the per-player breakdown.
#[derive(Clone, Debug)]
pub struct GapEvaluation {
    pub point: ProfilePoint,
    pub players: Vec<PlayerGap>,
    /// `max` of the per-player residuals.
    pub gap: f64,
}

/// Minimum pairwise distance between two clouds, with the lexicographically
/// first pair attaining it. `(+inf, None)` when either cloud is empty.
pub(crate) fn min_pair<'a>(
    a: &'a FiniteCloud,
    b: &'a FiniteCloud,
) -> (f64, Option<(&'a Point, &'a Point)>) {
    let mut best = f64::INFINITY;
    let mut pair = None;
    for p in a.iter() {
        for q in b.iter() {
            let d = p.distance(q);
            if d < best {
                best = d;
                pair = Some((p, q));
            }
        }
    }
    (best, pair)
}

pub(crate) fn improvable_at_index(profile: &EconomyProfile, v: usize, full_idx: &[usize]) -> bool {
    let a = profile.constraint_at(v, full_idx);
    let p = profile.preference_at(v, full_idx);
    min_pair(a, p).0 <= profile.tolerances().intersect
}

/// Tests whether `x` lies in player `v`'s improvement set, returning a
/// witnessing pair `(a, p)` with `a` in the constraint value and `p` in the
/// preference value when it does.
pub fn improvement_membership(
    profile: &EconomyProfile,
    player: &PlayerId,
    x: &ProfilePoint,
) -> Result<(bool, Option<(Point, Point)>)> {
    let v = profile.player_index(player)?;
    let full_idx = profile.locate_profile(x)?;
    let a = profile.constraint_at(v, &full_idx);
    let p = profile.preference_at(v, &full_idx);
    let (d, pair) = min_pair(a, p);
    if d <= profile.tolerances().intersect {
        let (pa, pp) = pair.expect("finite min implies a pair");
        Ok((true, Some((pa.clone(), pp.clone()))))
    } else {
        Ok((false, None))
    }
}

pub(crate) fn candidate_set_at_index(
    profile: &EconomyProfile,
    v: usize,
    full_idx: &[usize],
) -> Result<FiniteCloud> {
    let a = profile.constraint_at(v, full_idx);
    let p = profile.preference_at(v, full_idx);
    let intersect = profile.tolerances().intersect;
    let cloud = if min_pair(a, p).0 <= intersect {
        // Tolerance intersection, kept inside the constraint value: the
        // points of A within `intersect` of P.
        let points: Vec<Point> = a
            .iter()
            .filter(|q| {
                p.iter()
                    .map(|r| q.distance(r))
                    .fold(f64::INFINITY, f64::min)
                    <= intersect
            })
            .cloned()
            .collect();
        FiniteCloud::with_dedup(a.dim(), points, a.dedup())?
    } else {
        a.clone()
    };
    if cloud.is_empty() {
        return Err(Error::Internal(format!(
            "candidate set of player `{}` is empty at index {:?}; the profile violates the \
             nonempty-constraint-values requirement",
            profile.players()[v].id(),
            full_idx
        )));
    }
    Ok(cloud)
}

/// Candidate map of one player at `x`: the tolerance intersection
/// `{a in A : d(a, P) <= intersect}` when the player is improvable, and the
/// constraint value otherwise. Always a nonempty subset of the constraint
/// value on valid profiles.
pub fn candidate_set(
    profile: &EconomyProfile,
    player: &PlayerId,
    x: &ProfilePoint,
) -> Result<FiniteCloud> {
    let v = profile.player_index(player)?;
    let full_idx = profile.locate_profile(x)?;
    candidate_set_at_index(profile, v, &full_idx)
}

pub(crate) fn gap_at_index(profile: &EconomyProfile, full_idx: &[usize]) -> Result<GapEvaluation> {
    let mut players = Vec::with_capacity(profile.player_count());
    let mut worst = 0.0_f64;
    for (v, player) in profile.players().iter().enumerate() {
        let improvement = improvable_at_index(profile, v, full_idx);
        let candidates = candidate_set_at_index(profile, v, full_idx)?;
        let own = profile.grid_point(v, full_idx[v]);
        let residual = displacement(own, &candidates)?;
        if residual > worst {
            worst = residual;
        }
        players.push(PlayerGap {
            player: player.id().clone(),
            improvement,
            candidates,
            residual,
        });
    }
    Ok(GapEvaluation {
        point: profile.point_at(full_idx),
        players,
        gap: worst,
    })
}

/// Evaluates the gap function at a grid point.
pub fn gap(profile: &EconomyProfile, x: &ProfilePoint) -> Result<GapEvaluation> {
    let full_idx = profile.locate_profile(x)?;
    gap_at_index(profile, &full_idx)
}

/// Evaluates the gap function over the whole grid, in lexicographic order.
/// The sweep runs in parallel; output order does not depend on the schedule.
pub fn gap_sweep(profile: &EconomyProfile) -> Result<Vec<GapEvaluation>> {
    (0..profile.full_len())
        .into_par_iter()
        .map(|rank| gap_at_index(profile, &profile.unrank_full(rank)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::economy::parse_problem;

    fn e1() -> EconomyProfile {
        crate::gen::tiny_economy()
    }

    #[test]
    fn improvement_membership_on_minimal_profile() {
        let p = e1();
        let id = PlayerId::from("p1");
        let x0 = p.point_at(&[0]);
        let (member, witness) = improvement_membership(&p, &id, &x0).unwrap();
        assert!(member);
        let (a, q) = witness.unwrap();
        assert_eq!(a.coords(), &[1.0]);
        assert_eq!(q.coords(), &[1.0]);

        let x1 = p.point_at(&[1]);
        let (member, witness) = improvement_membership(&p, &id, &x1).unwrap();
        assert!(!member);
        assert!(witness.is_none());
    }

    #[test]
    fn candidate_sets_on_minimal_profile() {
        let p = e1();
        let id = PlayerId::from("p1");
        let g0 = candidate_set(&p, &id, &p.point_at(&[0])).unwrap();
        assert_eq!(g0.len(), 1);
        assert_eq!(g0.points()[0].coords(), &[1.0]);
        let g1 = candidate_set(&p, &id, &p.point_at(&[1])).unwrap();
        assert_eq!(g1.len(), 2);
    }

    #[test]
    fn gap_values_on_minimal_profile() {
        let p = e1();
        let e0 = gap(&p, &p.point_at(&[0])).unwrap();
        assert_eq!(e0.gap, 1.0);
        assert_eq!(e0.players[0].residual, 1.0);
        let e1 = gap(&p, &p.point_at(&[1])).unwrap();
        assert_eq!(e1.gap, 0.0);
    }

    #[test]
    fn off_grid_point_is_rejected(){
        let p = e1();
        let off = ProfilePoint::new(vec![Point::new(vec![0.5]).unwrap()]);
        assert!(matches!(gap(&p, &off), Err(Error::OffGrid(_))));
    }

    #[test]
    fn candidates_stay_inside_constraint_value() {
        // Both branches of the candidate map return subsets of A.
        for seed in 0..30 {
            let p = crate::gen::random_economy(seed);
            for rank in 0..p.full_len() {
                let idx = p.unrank_full(rank);
                for v in 0..p.player_count() {
                    let g = candidate_set_at_index(&p, v, &idx).unwrap();
                    let a = p.constraint_at(v, &idx);
                    for q in g.iter() {
                        assert!(a.contains(q));
                    }
                    assert!(!g.is_empty());
                }
            }
        }
    }

    #[test]
    fn improvement_matches_pairwise_scan() {
        for seed in 100..140 {
            let p = crate::gen::random_economy(seed);
            let tol = p.tolerances().intersect;
            for rank in 0..p.full_len() {
                let idx = p.unrank_full(rank);
                let x = p.point_at(&idx);
                for (v, player) in p.players().iter().enumerate() {
                    let a = p.constraint_at(v, &idx);
                    let q = p.preference_at(v, &idx);
                    let brute = a
                        .iter()
                        .any(|pa| q.iter().any(|pq| pa.distance(pq) <= tol));
                    let (member, _) =
                        improvement_membership(&p, player.id(), &x).unwrap();
                    assert_eq!(member, brute);
                }
            }
        }
    }

    #[test]
    fn gap_is_nonnegative_and_bounded_by_feasibility() {
        for seed in 200..240 {
            let p = crate::gen::random_economy(seed);
            for eval in gap_sweep(&p).unwrap() {
                assert!(eval.gap >= 0.0);
                let idx = p.locate_profile(&eval.point).unwrap();
                let feasible_unimprovable = (0..p.player_count()).all(|v| {
                    let a = p.constraint_at(v, &idx);
                    let own = p.grid_point(v, idx[v]);
                    !improvable_at_index(&p, v, &idx)
                        && displacement(own, a).unwrap() <= p.tolerances().feas
                });
                if feasible_unimprovable {
                    assert!(eval.gap <= p.tolerances().feas);
                }
            }
        }
    }

    #[test]
    fn corrupted_profile_reports_internal_error() {
        let text = crate::economy::tests::e1_text()
            .replace("\"value\": [[0.0], [1.0]]", "\"value\": []");
        let p = parse_problem(&text).unwrap();
        let x = p.point_at(&[1]);
        assert!(matches!(
            candidate_set(&p, &PlayerId::from("p1"), &x),
            Err(Error::Internal(_))
        ));
    }
}
