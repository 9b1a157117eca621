//! Strict Nash equilibria of the raider game and their correspondence with
//! graph derangements.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::derangement::{count_derangements, find_derangement, Derangement, COUNT_MAX};
use crate::error::{Error, Result};
use crate::game::{deviations, strategies_ascending, Deviation, GameParams, PayoffRanks, Profile};
use crate::graph::Graph;
use crate::rational::{format_rational, Rational};

/// Default cap on the number of admissible profiles enumerated.
pub const PROFILE_GUARD: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Strict,
    /// First deviation, in ascending (player, strategy) order, that does not
    /// strictly lower the deviator's payoff.
    NotStrict(Deviation),
}

impl Verdict {
    pub fn is_strict(&self) -> bool {
        matches!(self, Verdict::Strict)
    }

    pub fn counterexample(&self) -> Option<&Deviation> {
        match self {
            Verdict::Strict => None,
            Verdict::NotStrict(d) => Some(d),
        }
    }
}

/// Checks that every unilateral deviation strictly lowers the deviator's
/// payoff. Players without alternatives impose no constraint.
pub fn is_strict_nash(g: &Graph, f: &Profile, params: &GameParams) -> Result<Verdict> {
    for v in 0..g.n() {
        if let Some(d) = deviations(g, f, params, v)?
            .into_iter()
            .find(Deviation::is_profitable_or_tied)
        {
            return Ok(Verdict::NotStrict(d));
        }
    }
    Ok(Verdict::Strict)
}

/// Connected and at least two players.
pub fn check_game_graph(g: &Graph) -> Result<()> {
    if g.n() < 2 {
        return Err(Error::TooFewPlayers(g.n()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(())
}

/// Number of admissible profiles, `prod (deg(v) + 1)`, saturating.
pub fn profile_space_size(g: &Graph) -> u128 {
    (0..g.n()).fold(1u128, |acc, v| acc.saturating_mul(g.degree(v) as u128 + 1))
}

#[derive(Debug, Clone, Copy, Default)]
pub struct EnumerateOptions {
    /// Ignore [`PROFILE_GUARD`].
    pub force: bool,
}

/// All strict Nash equilibria, found by walking every admissible profile.
///
/// Profiles are visited as a mixed-radix counter with player 0 the most
/// significant digit and each player's strategies in ascending order, so the
/// output is sorted lexicographically by strategy map. The space is split
/// into chunks that may run on several threads; the result does not depend
/// on the thread count.
pub fn enumerate_strict_nash(g: &Graph, params: &GameParams) -> Result<Vec<Profile>> {
    enumerate_strict_nash_with(g, params, EnumerateOptions::default())
}

pub fn enumerate_strict_nash_with(
    g: &Graph,
    params: &GameParams,
    opts: EnumerateOptions,
) -> Result<Vec<Profile>> {
    check_game_graph(g)?;
    let total = profile_space_size(g);
    if !opts.force && total > PROFILE_GUARD {
        return Err(Error::GuardExceeded {
            what: "admissible profile count",
            got: total,
            limit: PROFILE_GUARD,
        });
    }
    let total = u64::try_from(total).map_err(|_| Error::GuardExceeded {
        what: "admissible profile count",
        got: total,
        limit: u64::MAX as u128,
    })?;

    let walker = Walker::new(g, params);
    const CHUNK: u64 = 1 << 14;
    let chunks = total.div_ceil(CHUNK);
    let found: Vec<Vec<Vec<usize>>> = (0..chunks)
        .into_par_iter()
        .map(|c| walker.scan(c * CHUNK, ((c + 1) * CHUNK).min(total)))
        .collect();
    Ok(found
        .into_iter()
        .flatten()
        .map(Profile::from_admissible)
        .collect())
}

struct Walker<'a> {
    g: &'a Graph,
    options: Vec<Vec<usize>>,
    ranks: PayoffRanks,
}

impl<'a> Walker<'a> {
    fn new(g: &'a Graph, params: &GameParams) -> Self {
        let options = (0..g.n()).map(|v| strategies_ascending(g, v)).collect();
        Self {
            g,
            options,
            ranks: PayoffRanks::new(params.h(), g.n()),
        }
    }

    /// Strict equilibria among profiles with index in `start..end`.
    fn scan(&self, start: u64, end: u64) -> Vec<Vec<usize>> {
        let n = self.g.n();
        let mut digits = vec![0usize; n];
        let mut rest = start;
        for v in (0..n).rev() {
            let radix = self.options[v].len() as u64;
            digits[v] = (rest % radix) as usize;
            rest /= radix;
        }
        let mut map: Vec<usize> = (0..n).map(|v| self.options[v][digits[v]]).collect();
        let mut occ = crate::game::occupancy_of(&map);
        let mut out = Vec::new();
        for idx in start..end {
            if self.is_strict(&map, &occ) {
                out.push(map.clone());
            }
            if idx + 1 == end {
                break;
            }
            // increment, least significant digit = last player
            let mut v = n - 1;
            loop {
                occ[map[v]] -= 1;
                digits[v] += 1;
                if digits[v] == self.options[v].len() {
                    digits[v] = 0;
                    map[v] = self.options[v][0];
                    occ[map[v]] += 1;
                    v -= 1;
                } else {
                    map[v] = self.options[v][digits[v]];
                    occ[map[v]] += 1;
                    break;
                }
            }
        }
        out
    }

    fn is_strict(&self, map: &[usize], occ: &[u32]) -> bool {
        for (v, &current) in map.iter().enumerate() {
            let old = self
                .ranks
                .rank(v, current, occ[v], occ[current], map[current] == current);
            for &b in &self.options[v] {
                if b == current {
                    continue;
                }
                let after = |x: usize| occ[x] - u32::from(x == current) + u32::from(x == b);
                let new = self
                    .ranks
                    .rank(v, b, after(v), after(b), b != v && map[b] == b);
                if new >= old {
                    return false;
                }
            }
        }
        true
    }
}

/// A derangement viewed as a strategy profile: every player raids its image.
pub fn derangement_to_profile(d: &Derangement) -> Profile {
    Profile::from_admissible(d.map().to_vec())
}

/// The profile as a derangement, if it is injective with no fixed points.
pub fn profile_to_derangement(g: &Graph, f: &Profile) -> Option<Derangement> {
    Derangement::new(g, f.map().to_vec()).ok()
}

/// The three conditions that cannot hold together at a strict equilibrium:
/// `v` raids some `w`, `w` has more than one occupant, and at most one
/// player stands on `v`.
pub fn lemma_conditions(f: &Profile, v: usize) -> (bool, bool, bool) {
    let w = f.strategy(v);
    (w != v, f.occupancy(w) > 1, f.occupancy(v) <= 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub h: String,
    pub kind: String,
    pub profile: Option<Vec<usize>>,
}

/// Outcome of checking existence agreement and set equality between
/// derangements and strict equilibria over a list of `h` values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    /// Canonical edge list.
    pub graph: String,
    pub n: usize,
    pub h_values: Vec<String>,
    pub derangement_exists: bool,
    pub derangement_count: String,
    /// Strict equilibria found, per `h`.
    pub ne_count: Vec<u64>,
    /// Whether the strict equilibria are exactly the derangements, per `h`.
    pub set_equal: Vec<bool>,
    /// `h` values where a derangement exists but, as expected at `h = 1`,
    /// no strict equilibrium does.
    pub boundary_exceptions: Vec<String>,
    pub violations: Vec<Violation>,
}

impl EquivalenceReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    /// One-line summary.
    pub fn summary(&self) -> String {
        let verdict = if self.holds() {
            "EQUIVALENCE HOLDS"
        } else {
            "EQUIVALENCE VIOLATED"
        };
        let counts = if self.ne_count.windows(2).all(|w| w[0] == w[1]) && !self.ne_count.is_empty()
        {
            format!("strict NE={} at each h", self.ne_count[0])
        } else {
            let parts: Vec<String> = self
                .h_values
                .iter()
                .zip(&self.ne_count)
                .map(|(h, c)| format!("{c} at h={h}"))
                .collect();
            format!("strict NE={}", parts.join(", "))
        };
        format!(
            "{verdict}; derangements={}; {counts}",
            self.derangement_count
        )
    }
}

/// Checks, for every `h`:
/// existence of a derangement iff a strict equilibrium exists, that every
/// strict equilibrium is a derangement, and that there are as many strict
/// equilibria as derangements (so the two sets coincide).
///
/// At `h = 1` the strict equilibrium set must be empty; a missing
/// equilibrium there is recorded as a boundary exception, not a violation.
pub fn verify_equivalence(
    g: &Graph,
    hs: &[GameParams],
    opts: EnumerateOptions,
) -> Result<EquivalenceReport> {
    check_game_graph(g)?;
    if g.n() > COUNT_MAX {
        return Err(Error::GuardExceeded {
            what: "equivalence check vertex count",
            got: g.n() as u128,
            limit: COUNT_MAX as u128,
        });
    }
    let exists = find_derangement(g).is_some();
    let count: BigUint = count_derangements(g)?;
    let one = Rational::from_integer(1);

    let mut report = EquivalenceReport {
        graph: g.to_edge_list(),
        n: g.n(),
        h_values: hs.iter().map(|p| format_rational(&p.h())).collect(),
        derangement_exists: exists,
        derangement_count: count.to_string(),
        ne_count: Vec::new(),
        set_equal: Vec::new(),
        boundary_exceptions: Vec::new(),
        violations: Vec::new(),
    };

    for params in hs {
        let h_str = format_rational(&params.h());
        let nes = enumerate_strict_nash_with(g, params, opts)?;
        let mut violate = |kind: &str, profile: Option<&Profile>| {
            report.violations.push(Violation {
                h: h_str.clone(),
                kind: kind.to_string(),
                profile: profile.map(|p| p.map().to_vec()),
            })
        };

        let mut all_derangements = true;
        for f in &nes {
            if profile_to_derangement(g, f).is_none() {
                all_derangements = false;
                violate("strict-ne-not-derangement", Some(f));
            }
        }
        let equal = all_derangements && BigUint::from(nes.len()) == count;

        if params.h() == one {
            if !nes.is_empty() {
                violate("strict-ne-at-h-1", nes.first());
            } else if exists {
                report.boundary_exceptions.push(h_str.clone());
            }
        } else {
            if exists != !nes.is_empty() {
                violate("existence-mismatch", None);
            }
            if all_derangements && !equal {
                violate("count-mismatch", None);
            }
        }
        report.ne_count.push(nes.len() as u64);
        report.set_equal.push(equal);
    }
    Ok(report)
}
