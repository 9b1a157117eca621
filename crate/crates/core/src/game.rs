//! The Territorial Raider game.
//!
//! Every vertex holds one unit of resource and one player. A player either
//! stays home (defends) or raids a neighbor. With defended share `h` and
//! `occ(x)` the number of players standing on `x`:
//!
//! * defending player `v`: `h + (1-h)/occ(v)`
//! * raider of `t`: `1` if nobody raided `v` (else `0`), plus `(1-h)/occ(t)`
//!   when the owner of `t` defends or `1/occ(t)` when `t` was abandoned.
//!
//! All arithmetic is exact.

use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::{format_rational, is_unit_interval, to_big, Rational};

/// Game parameters: the defended share `h` in `[0, 1]`.
///
/// `h = 1` is accepted; no strict equilibrium exists there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GameParams {
    h: Rational,
}

impl GameParams {
    pub fn new(h: Rational) -> Result<Self> {
        if !is_unit_interval(&h) {
            return Err(Error::InvalidArgument(format!(
                "h must lie in [0, 1], got {}",
                format_rational(&h)
            )));
        }
        Ok(Self { h })
    }

    /// Convenience for `h = num/den`.
    pub fn ratio(num: i128, den: i128) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        Self::new(Rational::new(num, den))
    }

    pub fn h(&self) -> Rational {
        self.h
    }
}

impl fmt::Display for GameParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h={}", format_rational(&self.h))
    }
}

/// A pure strategy profile: `map[v]` is where player `v` goes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Profile {
    map: Vec<usize>,
    occupancy: Vec<u32>,
}

impl Profile {
    /// Builds a profile, checking that every strategy is home or a neighbor.
    pub fn new(g: &Graph, map: Vec<usize>) -> Result<Self> {
        if map.len() != g.n() {
            return Err(Error::InvalidArgument(format!(
                "profile has {} entries for {} vertices",
                map.len(),
                g.n()
            )));
        }
        for (v, &w) in map.iter().enumerate() {
            if w != v && !g.has_edge(v, w) {
                return Err(Error::Inadmissible {
                    vertex: v,
                    target: w,
                });
            }
        }
        Ok(Self::from_admissible(map))
    }

    /// Everybody defends.
    pub fn identity(n: usize) -> Self {
        Self::from_admissible((0..n).collect())
    }

    pub(crate) fn from_admissible(map: Vec<usize>) -> Self {
        let occupancy = occupancy_of(&map);
        Self { map, occupancy }
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn into_map(self) -> Vec<usize> {
        self.map
    }

    pub fn strategy(&self, v: usize) -> usize {
        self.map[v]
    }

    /// Number of players whose strategy is `w`.
    pub fn occupancy(&self, w: usize) -> u32 {
        self.occupancy[w]
    }

    pub fn occupancies(&self) -> &[u32] {
        &self.occupancy
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    pub fn defends(&self, v: usize) -> bool {
        self.map[v] == v
    }

    /// The same profile with player `v` switched to `target`.
    pub fn with_strategy(&self, g: &Graph, v: usize, target: usize) -> Result<Self> {
        let mut map = self.map.clone();
        map[v] = target;
        Self::new(g, map)
    }
}

pub(crate) fn occupancy_of(map: &[usize]) -> Vec<u32> {
    let mut occ = vec![0u32; map.len()];
    for &w in map {
        occ[w] += 1;
    }
    occ
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (v, w) in self.map.iter().enumerate() {
            if v > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}->{w}")?;
        }
        f.write_str("]")
    }
}

/// Payoff of player `v` standing on `target`, given the occupancy of its
/// home and of the target and whether the target's owner stayed home.
///
/// When `v` raids, `occ_home` counts only the other players on `v`.
pub(crate) fn payoff_from_counts(
    h: Rational,
    v: usize,
    target: usize,
    occ_home: u32,
    occ_target: u32,
    target_defended: bool,
) -> Rational {
    let one = Rational::from_integer(1);
    if target == v {
        return h + (one - h) / Rational::from_integer(occ_home as i128);
    }
    let base = if occ_home == 0 { one } else { Rational::zero() };
    let share = if target_defended { one - h } else { one };
    base + share / Rational::from_integer(occ_target as i128)
}

fn check_shape(g: &Graph, f: &Profile) -> Result<()> {
    if f.n() != g.n() {
        return Err(Error::InvalidArgument(format!(
            "profile has {} players, graph has {} vertices",
            f.n(),
            g.n()
        )));
    }
    Ok(())
}

/// `P_v(f)`.
pub fn payoff(g: &Graph, f: &Profile, params: &GameParams, v: usize) -> Result<Rational> {
    check_shape(g, f)?;
    if v >= g.n() {
        return Err(Error::InvalidArgument(format!("no player {v}")));
    }
    let t = f.strategy(v);
    if t != v && !g.has_edge(v, t) {
        return Err(Error::Inadmissible {
            vertex: v,
            target: t,
        });
    }
    Ok(payoff_from_counts(
        params.h,
        v,
        t,
        f.occupancy(v),
        f.occupancy(t),
        f.defends(t),
    ))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PayoffVector {
    pub payoffs: Vec<Rational>,
}

impl PayoffVector {
    /// Exact total; equals the player count for every admissible profile.
    pub fn total(&self) -> BigRational {
        self.payoffs
            .iter()
            .map(to_big)
            .fold(BigRational::zero(), |acc, x| acc + x)
    }

    pub fn get(&self, v: usize) -> Rational {
        self.payoffs[v]
    }
}

pub fn payoff_vector(g: &Graph, f: &Profile, params: &GameParams) -> Result<PayoffVector> {
    let payoffs = (0..g.n())
        .map(|v| payoff(g, f, params, v))
        .collect::<Result<_>>()?;
    Ok(PayoffVector { payoffs })
}

/// A unilateral strategy change and its effect on the deviating player.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deviation {
    pub player: usize,
    pub new_strategy: usize,
    pub old_payoff: Rational,
    pub new_payoff: Rational,
}

impl Deviation {
    pub fn is_profitable_or_tied(&self) -> bool {
        self.new_payoff >= self.old_payoff
    }
}

impl fmt::Display for Deviation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "player {} switching to {} moves from {} to {}",
            self.player,
            self.new_strategy,
            format_rational(&self.old_payoff),
            format_rational(&self.new_payoff)
        )
    }
}

/// Home first, then neighbors ascending.
pub fn strategies(g: &Graph, v: usize) -> impl Iterator<Item = usize> + '_ {
    std::iter::once(v).chain(g.neighbors(v).iter().copied())
}

/// Strategies of `v` in ascending vertex order.
pub fn strategies_ascending(g: &Graph, v: usize) -> Vec<usize> {
    let mut s: Vec<usize> = strategies(g, v).collect();
    s.sort_unstable();
    s
}

/// Every alternative strategy for player `v`, in ascending strategy order.
///
/// Deviation payoffs are derived from the current occupancy by moving one
/// player from the old target to the new one.
pub fn deviations(g: &Graph, f: &Profile, params: &GameParams, v: usize) -> Result<Vec<Deviation>> {
    let old_payoff = payoff(g, f, params, v)?;
    let current = f.strategy(v);
    let occ_after = |x: usize, b: usize| -> u32 {
        f.occupancy(x) - u32::from(x == current) + u32::from(x == b)
    };
    Ok(strategies_ascending(g, v)
        .into_iter()
        .filter(|&b| b != current)
        .map(|b| {
            let new_payoff = payoff_from_counts(
                params.h,
                v,
                b,
                occ_after(v, b),
                occ_after(b, b),
                b != v && f.defends(b),
            );
            Deviation {
                player: v,
                new_strategy: b,
                old_payoff,
                new_payoff,
            }
        })
        .collect())
}

/// The five payoff shapes, indexed by occupancy `1..=n`.
#[derive(Debug, Clone, Copy)]
enum Shape {
    Defend,
    RaidDefendedKept,
    RaidAbandonedKept,
    RaidDefendedLost,
    RaidAbandonedLost,
}

/// Every payoff value reachable on `n` players, replaced by its rank in
/// sorted order so equilibrium checks compare integers. Ranks order exactly
/// like the rationals they stand for.
#[derive(Debug, Clone)]
pub(crate) struct PayoffRanks {
    n: usize,
    ranks: Vec<u32>,
}

impl PayoffRanks {
    pub(crate) fn new(h: Rational, n: usize) -> Self {
        let one = Rational::from_integer(1);
        let shapes = [
            Shape::Defend,
            Shape::RaidDefendedKept,
            Shape::RaidAbandonedKept,
            Shape::RaidDefendedLost,
            Shape::RaidAbandonedLost,
        ];
        let mut values = Vec::with_capacity(5 * n);
        for shape in shapes {
            for k in 1..=n {
                let k = Rational::from_integer(k as i128);
                values.push(match shape {
                    Shape::Defend => h + (one - h) / k,
                    Shape::RaidDefendedKept => one + (one - h) / k,
                    Shape::RaidAbandonedKept => one + one / k,
                    Shape::RaidDefendedLost => (one - h) / k,
                    Shape::RaidAbandonedLost => one / k,
                });
            }
        }
        let mut sorted = values.clone();
        sorted.sort();
        sorted.dedup();
        let ranks = values
            .iter()
            .map(|x| sorted.binary_search(x).expect("value present") as u32)
            .collect();
        Self { n, ranks }
    }

    #[inline]
    pub(crate) fn rank(
        &self,
        v: usize,
        target: usize,
        occ_home: u32,
        occ_target: u32,
        target_defended: bool,
    ) -> u32 {
        let (shape, k) = if target == v {
            (Shape::Defend, occ_home)
        } else {
            let shape = match (occ_home == 0, target_defended) {
                (true, true) => Shape::RaidDefendedKept,
                (true, false) => Shape::RaidAbandonedKept,
                (false, true) => Shape::RaidDefendedLost,
                (false, false) => Shape::RaidAbandonedLost,
            };
            (shape, occ_target)
        };
        self.ranks[shape as usize * self.n + k as usize - 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family};

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    fn half() -> GameParams {
        GameParams::ratio(1, 2).unwrap()
    }

    #[test]
    fn params_range() {
        assert!(GameParams::ratio(0, 1).is_ok());
        assert!(GameParams::ratio(1, 1).is_ok());
        assert!(GameParams::ratio(-1, 10).is_err());
        assert!(GameParams::ratio(11, 10).is_err());
        assert!(GameParams::ratio(1, 0).is_err());
        assert_eq!(half().to_string(), "h=1/2");
    }

    #[test]
    fn profile_admissibility() {
        let p3 = generate(Family::Path, 3).unwrap();
        assert!(Profile::new(&p3, vec![1, 1, 1]).is_ok());
        assert_eq!(
            Profile::new(&p3, vec![2, 1, 1]),
            Err(Error::Inadmissible {
                vertex: 0,
                target: 2
            })
        );
        assert!(Profile::new(&p3, vec![0, 1]).is_err());
        let f = Profile::new(&p3, vec![1, 1, 1]).unwrap();
        assert_eq!(f.occupancies(), &[0, 3, 0]);
        assert_eq!(f.occupancies().iter().sum::<u32>(), 3);
        assert_eq!(f.to_string(), "[0->1 1->1 2->1]");
    }

    #[test]
    fn swap_pays_one() {
        let k2 = generate(Family::Complete, 2).unwrap();
        let f = Profile::new(&k2, vec![1, 0]).unwrap();
        for h in [r(0, 1), r(1, 2), r(99, 100)] {
            let params = GameParams::new(h).unwrap();
            assert_eq!(payoff(&k2, &f, &params, 0).unwrap(), r(1, 1));
        }
    }

    #[test]
    fn everyone_home_pays_one() {
        let c4 = generate(Family::Cycle, 4).unwrap();
        let f = Profile::identity(4);
        let pv = payoff_vector(&c4, &f, &GameParams::ratio(3, 10).unwrap()).unwrap();
        assert!(pv.payoffs.iter().all(|&p| p == r(1, 1)));
    }

    #[test]
    fn path_pile_up() {
        let p3 = generate(Family::Path, 3).unwrap();
        let f = Profile::new(&p3, vec![1, 1, 1]).unwrap();
        let pv = payoff_vector(&p3, &f, &GameParams::ratio(0, 1).unwrap()).unwrap();
        assert_eq!(pv.payoffs, vec![r(4, 3), r(1, 3), r(4, 3)]);
        assert_eq!(pv.total(), to_big(&r(3, 1)));
    }

    #[test]
    fn k2_one_raider() {
        let k2 = generate(Family::Complete, 2).unwrap();
        let f = Profile::new(&k2, vec![0, 0]).unwrap();
        let pv = payoff_vector(&k2, &f, &half()).unwrap();
        assert_eq!(pv.payoffs, vec![r(3, 4), r(5, 4)]);
        let swap = Profile::new(&k2, vec![1, 0]).unwrap();
        assert_eq!(
            payoff_vector(&k2, &swap, &half()).unwrap().payoffs,
            vec![r(1, 1); 2]
        );
    }

    #[test]
    fn c3_rotation() {
        let c3 = generate(Family::Cycle, 3).unwrap();
        let f = Profile::new(&c3, vec![1, 2, 0]).unwrap();
        let pv = payoff_vector(&c3, &f, &GameParams::ratio(0, 1).unwrap()).unwrap();
        assert_eq!(pv.payoffs, vec![r(1, 1); 3]);
    }

    #[test]
    fn abandoned_target_pays_two() {
        // 0 raids 1, 1 raids 2, nobody raids 0: 0 alone on abandoned 1
        let p3 = generate(Family::Path, 3).unwrap();
        let f = Profile::new(&p3, vec![1, 2, 2]).unwrap();
        assert_eq!(payoff(&p3, &f, &half(), 0).unwrap(), r(2, 1));
    }

    #[test]
    fn payoff_rejects_mismatch() {
        let k2 = generate(Family::Complete, 2).unwrap();
        let p3 = generate(Family::Path, 3).unwrap();
        let f = Profile::identity(3);
        assert!(payoff(&k2, &f, &half(), 0).is_err());
        assert!(payoff(&p3, &f, &half(), 3).is_err());
    }

    #[test]
    fn swap_deviations() {
        let k2 = generate(Family::Complete, 2).unwrap();
        let f = Profile::new(&k2, vec![1, 0]).unwrap();
        let h = r(3, 10);
        let params = GameParams::new(h).unwrap();
        let devs = deviations(&k2, &f, &params, 0).unwrap();
        assert_eq!(devs.len(), 1);
        assert_eq!(devs[0].new_strategy, 0);
        assert_eq!(devs[0].new_payoff, h + (r(1, 1) - h) / 2);
    }

    #[test]
    fn rotation_deviations() {
        let c4 = generate(Family::Cycle, 4).unwrap();
        let f = Profile::new(&c4, vec![1, 2, 3, 0]).unwrap();
        let h = r(1, 4);
        let devs = deviations(&c4, &f, &GameParams::new(h).unwrap(), 0).unwrap();
        let got: Vec<(usize, Rational)> = devs
            .iter()
            .map(|d| (d.new_strategy, d.new_payoff))
            .collect();
        assert_eq!(got, vec![(0, h + (r(1, 1) - h) / 2), (3, r(1, 2))]);
        assert!(devs.iter().all(|d| d.old_payoff == r(1, 1)));
    }

    #[test]
    fn deviations_match_recomputation() {
        let g = generate(Family::Complete, 4).unwrap();
        let params = GameParams::ratio(2, 7).unwrap();
        let f = Profile::new(&g, vec![1, 1, 2, 0]).unwrap();
        for v in 0..4 {
            for d in deviations(&g, &f, &params, v).unwrap() {
                let moved = f.with_strategy(&g, v, d.new_strategy).unwrap();
                assert_eq!(d.new_payoff, payoff(&g, &moved, &params, v).unwrap());
            }
        }
    }

    #[test]
    fn ranks_order_like_values() {
        let h = r(0, 1);
        let ranks = PayoffRanks::new(h, 4);
        // at h = 0, defending with 2 occupants ties raiding a shared target
        assert_eq!(ranks.rank(0, 0, 2, 2, true), ranks.rank(0, 1, 1, 2, false));
        // and a lone raider of a defended vertex earns 1 + 1 = 2, like an abandoned one
        assert_eq!(ranks.rank(0, 1, 0, 1, false), ranks.rank(0, 1, 0, 1, true));
        assert!(ranks.rank(0, 1, 0, 2, true) > ranks.rank(0, 0, 1, 1, true));
    }
}
