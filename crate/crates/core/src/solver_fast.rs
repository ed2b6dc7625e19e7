//! Fast solver: computes the Lower pure subgame-perfect equilibrium of a
//! binary game in polynomial time. Instead of sweeping a budget grid, each
//! node stores a compact interval profile — the finitely many budget cutoffs
//! where its outcome changes — and equilibria are computed only at the
//! critical points where some pair of child cutoffs could interact.
//!
//! Ties at equal bids are assumed to favor White throughout.

use crate::dyadic::Dyadic;
use crate::game::{BiddingGame, NodeId, OutcomeMap, Player, PreferenceOrder};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FastError {
    #[error("game has a node with more than two children")]
    NotBinary,
    #[error("profile for child {node} has not been computed yet")]
    ChildProfileMissing { node: u64 },
    #[error("budget {0} does not lie on the solver's dyadic scale")]
    OffGrid(String),
    #[error("game height {height} exceeds the exact-arithmetic range")]
    TooDeep { height: u32 },
    #[error("ascending auction failed to stabilize at node {node}")]
    AuctionStuck { node: u64 },
    #[error("malformed solution dump: {0}")]
    Format(String),
}

/// Budget-interval profile of one node: `cutoffs[a]` is the left endpoint of
/// interval `a` (the first is always 0), `t_star[a]` the equilibrium terminal
/// for budgets in that interval, and `a1`/`a2` each player's move as
/// (child, child interval index). Terminals carry the two-entry profile
/// (0, total) with empty action lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalProfile {
    /// Cutoffs in grid units (one unit = 2^-(height+2) of the total budget).
    cutoff_units: Vec<u64>,
    t_star: Vec<NodeId>,
    a1: Vec<(NodeId, usize)>,
    a2: Vec<(NodeId, usize)>,
}

impl IntervalProfile {
    pub fn len(&self) -> usize {
        self.cutoff_units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cutoff_units.is_empty()
    }

    pub fn cutoff_units(&self) -> &[u64] {
        &self.cutoff_units
    }

    pub fn outcomes(&self) -> &[NodeId] {
        &self.t_star
    }

    pub fn white_moves(&self) -> &[(NodeId, usize)] {
        &self.a1
    }

    pub fn black_moves(&self) -> &[(NodeId, usize)] {
        &self.a2
    }

    /// Interval index containing budget `units`: max a with cutoff[a] <= units.
    fn index_of(&self, units: u64) -> usize {
        self.cutoff_units.partition_point(|&c| c <= units) - 1
    }
}

/// Solved per-node interval profiles over the whole game.
#[derive(Clone, Debug)]
pub struct FastSolution {
    profiles: Vec<IntervalProfile>,
    /// Dyadic scale of one grid unit: budgets are `units / 2^scale`.
    scale: u32,
    epsilon: Dyadic,
}

impl FastSolution {
    pub fn epsilon(&self) -> &Dyadic {
        &self.epsilon
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn profile(&self, s: NodeId) -> &IntervalProfile {
        &self.profiles[s]
    }

    /// Total budget in grid units (always 2^scale; the budget total is 1).
    pub fn total_units(&self) -> u64 {
        1u64 << self.scale
    }

    pub fn cutoffs_of(&self, s: NodeId) -> Vec<Dyadic> {
        self.profiles[s]
            .cutoff_units
            .iter()
            .map(|&u| self.units_to_dyadic(u))
            .collect()
    }

    pub fn units_to_dyadic(&self, units: u64) -> Dyadic {
        Dyadic::unit(self.scale).scaled_by_int(units as i64)
    }

    fn dyadic_to_units(&self, b: &Dyadic) -> Result<u64, FastError> {
        if b.is_negative() {
            return Err(FastError::OffGrid(format!("budget {b} is negative")));
        }
        let units = b
            .units_at_scale(self.scale)
            .ok_or_else(|| FastError::OffGrid(format!("budget {b} finer than 2^-{}", self.scale)))?;
        u64::try_from(units)
            .ok()
            .filter(|&u| u <= self.total_units())
            .ok_or_else(|| FastError::OffGrid(format!("budget {b} outside [0, 1]")))
    }

    /// Equilibrium terminal at White budget `b1` (total 1), evaluated by
    /// exact interval membership on the root profile. Accepts budgets off
    /// the solver's grid; budgets outside [0, 1] clamp to the endpoints.
    pub fn query(&self, game: &BiddingGame, b1: &Dyadic) -> NodeId {
        let p = &self.profiles[game.root()];
        if b1.is_negative() {
            return p.t_star[0];
        }
        let idx = p
            .cutoff_units
            .partition_point(|&c| self.units_to_dyadic(c) <= *b1)
            .saturating_sub(1)
            .min(p.len() - 1);
        p.t_star[idx]
    }

    /// Root profile compressed to an outcome map; adjacent intervals whose
    /// terminals carry equal utility pairs are merged (keeping the first id).
    pub fn outcome_map(&self, game: &BiddingGame) -> OutcomeMap {
        let p = &self.profiles[game.root()];
        let mut cutoffs: Vec<Dyadic> = Vec::new();
        let mut outcomes: Vec<NodeId> = Vec::new();
        for (a, &t) in p.t_star.iter().enumerate() {
            let same = outcomes
                .last()
                .is_some_and(|&prev| game.utilities(prev) == game.utilities(t));
            if !same {
                cutoffs.push(self.units_to_dyadic(p.cutoff_units[a]));
                outcomes.push(t);
            }
        }
        OutcomeMap { cutoffs, outcomes, total: Dyadic::one() }
    }
}

struct Auction<'a> {
    game: &'a BiddingGame,
    profiles: &'a [IntervalProfile],
    ranks: &'a PreferenceOrder,
    /// Total budget in units; epsilon is 1 unit.
    total: i64,
    /// Sorted union of the children's cutoffs plus {0, total}: the only
    /// budget partitions at which any evaluated outcome can change.
    bounds: Vec<i64>,
}

/// Result of one cell auction: each player's move (child, child interval
/// index) and the equilibrium terminal.
type AuctionResult = ((NodeId, usize), (NodeId, usize), NodeId);

/// Sorted union of the children's cutoffs plus the range endpoints.
fn child_bounds(
    game: &BiddingGame,
    profiles: &[IntervalProfile],
    s: NodeId,
    total: i64,
) -> Result<Vec<i64>, FastError> {
    let mut bounds: Vec<i64> = vec![0, total];
    for &child in game.children(s) {
        let p = &profiles[child];
        if p.is_empty() {
            return Err(FastError::ChildProfileMissing { node: game.external_id(child) });
        }
        bounds.extend(p.cutoff_units.iter().map(|&c| c as i64));
    }
    bounds.sort_unstable();
    bounds.dedup();
    Ok(bounds)
}

impl<'a> Auction<'a> {
    fn outcome_at(&self, child: NodeId, units: i64) -> Result<(usize, NodeId), FastError> {
        let p = &self.profiles[child];
        if p.is_empty() {
            return Err(FastError::ChildProfileMissing { node: self.game.external_id(child) });
        }
        let a = p.index_of(units.clamp(0, self.total) as u64);
        Ok((a, p.t_star[a]))
    }

    /// `player`'s best child at White-budget partition `units`; ties resolve
    /// to the lowest child position.
    fn best(
        &self,
        kids: &[NodeId],
        player: Player,
        units: i64,
    ) -> Result<(NodeId, usize, NodeId), FastError> {
        let mut best: Option<(u32, NodeId, usize, NodeId)> = None;
        for &child in kids {
            let (a, t) = self.outcome_at(child, units)?;
            let r = self.ranks.rank(player, t);
            if best.as_ref().is_none_or(|&(br, ..)| r > br) {
                best = Some((r, child, a, t));
            }
        }
        let (_, child, a, t) = best.expect("internal nodes have children");
        Ok((child, a, t))
    }

    /// Lowest-bid equilibrium of the single auction at `s` with White budget
    /// `b` units: the ascending better-reply war from bids (0,0), with the
    /// mechanical climb compressed into jumps between partition boundaries.
    /// Both bids sit at level `x` with White the standing winner; Black
    /// probes `x+1`, White counters at the same level (ties favor White),
    /// and each side deviates only when strictly better off.
    fn run(&self, s: NodeId, b: i64) -> Result<AuctionResult, FastError> {
        let kids = self.game.children(s);
        let white_budget = b;
        let black_budget = self.total - b;
        let mut x: i64 = 0;
        let mut fuel = 4 * self.bounds.len() + 16;
        loop {
            if fuel == 0 {
                return Err(FastError::AuctionStuck { node: self.game.external_id(s) });
            }
            fuel -= 1;
            // State: White stands as winner with both bids at level x.
            let (wc, wa, wt) = self.best(kids, Player::White, b - x)?;
            // Black probes the minimal raise to x+1.
            let probe_black = if x + 1 > black_budget {
                None
            } else {
                Some(self.best(kids, Player::Black, b + x + 1)?)
            };
            let black_raises = probe_black.as_ref().is_some_and(|&(.., bt)| {
                self.ranks.rank(Player::Black, bt) > self.ranks.rank(Player::Black, wt)
            });
            if !black_raises {
                // White wins at bid x; Black's stale plan sits at his own
                // bid-x partition.
                let (bc, ba, _) = self.best(kids, Player::Black, b + x)?;
                return Ok(((wc, wa), (bc, ba), wt));
            }
            let (bc, ba, bt) = probe_black.unwrap();
            // White counters at x+1 (an equal bid wins her the tie).
            let white_counters = x + 1 <= white_budget && {
                let (.., wt_dev) = self.best(kids, Player::White, b - x - 1)?;
                self.ranks.rank(Player::White, wt_dev) > self.ranks.rank(Player::White, bt)
            };
            if !white_counters {
                // Black wins at bid x+1; White's stale plan is her bid-x
                // partition, already in (wc, wa).
                return Ok(((wc, wa), (bc, ba), bt));
            }
            // Both sides climb through level x+1. Jump to the next level at
            // which any evaluated outcome or affordability check can change:
            // the arguments b−y, b−y−1 (White) and b+y+1 (Black) crossing a
            // partition boundary, or a budget wall.
            let mut next = black_budget.min(white_budget);
            if let Some(c) = self.max_bound_le(b - x) {
                next = next.min(b - c + 1);
            }
            if let Some(c) = self.max_bound_le(b - x - 1) {
                next = next.min(b - c);
            }
            if let Some(d) = self.min_bound_gt(b + x + 1) {
                next = next.min(d - b - 1);
            }
            debug_assert!(next > x, "auction must climb");
            x = next.max(x + 1);
        }
    }

    fn max_bound_le(&self, v: i64) -> Option<i64> {
        let i = self.bounds.partition_point(|&c| c <= v);
        (i > 0).then(|| self.bounds[i - 1])
    }

    fn min_bound_gt(&self, v: i64) -> Option<i64> {
        self.bounds.get(self.bounds.partition_point(|&c| c <= v)).copied()
    }
}

/// Runs the single-node auction at White budget `b` using already-computed
/// child profiles, returning each player's (child, interval) move and the
/// equilibrium terminal. Exposed for tracing individual nodes; `b` must lie
/// on the solution's dyadic grid.
pub fn ascending_auction(
    game: &BiddingGame,
    solution: &FastSolution,
    s: NodeId,
    b: &Dyadic,
) -> Result<AuctionResult, FastError> {
    let ranks = PreferenceOrder::new(game);
    let total = solution.total_units() as i64;
    let auction = Auction {
        game,
        profiles: &solution.profiles,
        ranks: &ranks,
        total,
        bounds: child_bounds(game, &solution.profiles, s, total)?,
    };
    let units = solution.dyadic_to_units(b)?;
    auction.run(s, units as i64)
}

/// Computes the Lower-PSPE interval profiles of a binary game, children
/// first. At each internal node the candidate cutoffs are the pairwise
/// midpoints of the children's cutoffs (with a small halo, since auction
/// thresholds can sit one unit off a midpoint); the auction runs once per
/// candidate and consecutive equal outcomes are filtered out.
pub fn find_pspe_fast(game: &BiddingGame) -> Result<FastSolution, FastError> {
    if !game.is_binary() {
        return Err(FastError::NotBinary);
    }
    let height = game.height();
    if height > 50 {
        return Err(FastError::TooDeep { height });
    }
    let scale = height + 2;
    let total = 1u64 << scale;
    let ranks = PreferenceOrder::new(game);
    let empty = IntervalProfile {
        cutoff_units: Vec::new(),
        t_star: Vec::new(),
        a1: Vec::new(),
        a2: Vec::new(),
    };
    let mut profiles = vec![empty; game.num_nodes()];
    for &s in game.topo() {
        if game.is_terminal(s) {
            profiles[s] = IntervalProfile {
                cutoff_units: vec![0, total],
                t_star: vec![s, s],
                a1: Vec::new(),
                a2: Vec::new(),
            };
            continue;
        }
        let bounds = child_bounds(game, &profiles, s, total as i64)?;
        let mut zs: Vec<i64> = Vec::new();
        for (i, &cl) in bounds.iter().enumerate() {
            for &cr in &bounds[i..] {
                let mid = (cl + cr) / 2;
                for z in mid.saturating_sub(2)..=mid + 2 {
                    if (0..=total as i64).contains(&z) {
                        zs.push(z);
                    }
                }
            }
        }
        zs.sort_unstable();
        zs.dedup();
        let auction = Auction {
            game,
            profiles: &profiles,
            ranks: &ranks,
            total: total as i64,
            bounds,
        };
        let mut cutoff_units = Vec::new();
        let mut t_star: Vec<NodeId> = Vec::new();
        let mut a1 = Vec::new();
        let mut a2 = Vec::new();
        for &z in &zs {
            let (m1, m2, t) = auction.run(s, z)?;
            if t_star.last() == Some(&t) {
                continue;
            }
            cutoff_units.push(z as u64);
            t_star.push(t);
            a1.push(m1);
            a2.push(m2);
        }
        profiles[s] = IntervalProfile { cutoff_units, t_star, a1, a2 };
    }
    Ok(FastSolution { profiles, scale, epsilon: Dyadic::unit(scale) })
}

impl FastSolution {
    /// Serializes all profiles as CSV rows
    /// `node,a,F_num,F_scale,terminal,A1_child,A1_idx,A2_child,A2_idx`
    /// (external ids; move columns empty on terminal profiles).
    pub fn dump_csv(&self, game: &BiddingGame) -> String {
        let mut out = String::from("node,a,F_num,F_scale,terminal,A1_child,A1_idx,A2_child,A2_idx\n");
        for s in 0..self.profiles.len() {
            let p = &self.profiles[s];
            for a in 0..p.len() {
                let c = self.units_to_dyadic(p.cutoff_units[a]);
                let (m1, m2) = if p.a1.is_empty() {
                    (String::from(","), String::from(","))
                } else {
                    let f = |(child, idx): (NodeId, usize)| {
                        format!("{},{}", game.external_id(child), idx)
                    };
                    (f(p.a1[a]), f(p.a2[a]))
                };
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    game.external_id(s),
                    a,
                    c.numerator(),
                    c.scale(),
                    game.external_id(p.t_star[a]),
                    m1,
                    m2,
                ));
            }
        }
        out
    }

    /// Parses a `dump_csv` artifact back into a solution for `game`.
    pub fn load_csv(game: &BiddingGame, text: &str) -> Result<FastSolution, FastError> {
        let height = game.height();
        let scale = height + 2;
        let total = 1u64 << scale;
        let bad = |msg: String| FastError::Format(msg);
        let empty = IntervalProfile {
            cutoff_units: Vec::new(),
            t_star: Vec::new(),
            a1: Vec::new(),
            a2: Vec::new(),
        };
        let mut profiles = vec![empty; game.num_nodes()];
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim_end() == "node,a,F_num,F_scale,terminal,A1_child,A1_idx,A2_child,A2_idx" => {}
            other => return Err(bad(format!("unexpected header {other:?}"))),
        }
        let node_of = |field: &str| -> Result<NodeId, FastError> {
            let ext: u64 = field.parse().map_err(|_| bad(format!("bad node id {field:?}")))?;
            game.find_external(ext).ok_or_else(|| bad(format!("unknown node {ext}")))
        };
        for (lineno, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.trim_end().split(',').collect();
            if fields.len() != 9 {
                return Err(bad(format!("line {}: expected 9 fields", lineno + 2)));
            }
            let s = node_of(fields[0])?;
            let a: usize = fields[1].parse().map_err(|_| bad(format!("bad index {:?}", fields[1])))?;
            let p = &mut profiles[s];
            if a != p.len() {
                return Err(bad(format!("line {}: interval {} out of order", lineno + 2, a)));
            }
            let num: i64 = fields[2].parse().map_err(|_| bad(format!("bad cutoff {:?}", fields[2])))?;
            let sc: u32 = fields[3].parse().map_err(|_| bad(format!("bad scale {:?}", fields[3])))?;
            let cutoff = Dyadic::new(num, sc);
            let units = cutoff
                .units_at_scale(scale)
                .and_then(|u| u64::try_from(u).ok())
                .filter(|&u| u <= total)
                .ok_or_else(|| bad(format!("cutoff {cutoff} off the scale-{scale} grid")))?;
            if let Some(&last) = p.cutoff_units.last() {
                if units <= last {
                    return Err(bad(format!("line {}: cutoffs must increase", lineno + 2)));
                }
            } else if units != 0 {
                return Err(bad(format!("line {}: first cutoff must be 0", lineno + 2)));
            }
            p.cutoff_units.push(units);
            p.t_star.push(node_of(fields[4])?);
            let has_moves = !fields[5].is_empty();
            if has_moves != !fields[6].is_empty()
                || has_moves != !fields[7].is_empty()
                || has_moves != !fields[8].is_empty()
            {
                return Err(bad(format!("line {}: partial move fields", lineno + 2)));
            }
            if has_moves {
                let idx = |f: &str| -> Result<usize, FastError> {
                    f.parse().map_err(|_| bad(format!("bad move index {f:?}")))
                };
                p.a1.push((node_of(fields[5])?, idx(fields[6])?));
                p.a2.push((node_of(fields[7])?, idx(fields[8])?));
            } else if game.is_terminal(s) {
                // terminal rows carry no moves
            } else {
                return Err(bad(format!("line {}: internal node row lacks moves", lineno + 2)));
            }
        }
        for s in 0..game.num_nodes() {
            if profiles[s].is_empty() {
                return Err(bad(format!("node {} missing from dump", game.external_id(s))));
            }
        }
        Ok(FastSolution { profiles, scale, epsilon: Dyadic::unit(scale) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compilers::{compile_additive, fixture, Fixture, SsaSpec};
    use crate::game::GameBuilder;
    use crate::solver_grid::{find_lower_pspe_grid, GridConfig};

    fn dy(num: i64, scale: u32) -> Dyadic {
        Dyadic::new(num, scale)
    }

    fn pair_of(game: &BiddingGame, t: NodeId) -> (i64, i64) {
        let (u1, u2) = game.utilities(t).unwrap();
        let f = |u: &crate::game::Utility| i64::try_from(u.to_integer()).unwrap();
        (f(u1), f(u2))
    }

    fn single_auction() -> BiddingGame {
        let mut b = GameBuilder::new();
        let root = b.add_internal(vec![1, 2]);
        b.add_terminal_int(3, 0);
        b.add_terminal_int(0, 5);
        b.set_root(root);
        b.build().unwrap()
    }

    #[test]
    fn leaf_profiles_cover_the_whole_range() {
        let g = single_auction();
        let sol = find_pspe_fast(&g).unwrap();
        for t in [1, 2] {
            let p = sol.profile(t);
            assert_eq!(p.cutoff_units(), &[0, sol.total_units()]);
            assert_eq!(p.outcomes(), &[t, t]);
            assert!(p.white_moves().is_empty());
        }
    }

    #[test]
    fn single_auction_threshold_at_half() {
        let g = single_auction();
        let sol = find_pspe_fast(&g).unwrap();
        assert_eq!(sol.cutoffs_of(g.root()), vec![Dyadic::zero(), dy(1, 1)]);
        assert_eq!(pair_of(&g, sol.query(&g, &dy(1, 1))), (3, 0));
        assert_eq!(pair_of(&g, sol.query(&g, &dy(7, 4))), (0, 5));
        assert_eq!(pair_of(&g, sol.query(&g, &Dyadic::one())), (3, 0));
        assert_eq!(pair_of(&g, sol.query(&g, &Dyadic::zero())), (0, 5));
    }

    #[test]
    fn gtwo_equal_budgets_reach_five_five() {
        let g = fixture(Fixture::GTwo);
        let sol = find_pspe_fast(&g).unwrap();
        assert_eq!(pair_of(&g, sol.query(&g, &dy(1, 1))), (5, 5));
        let mu = sol.outcome_map(&g);
        let allowed = [(2, 2), (5, 5), (1, 9), (9, 1)];
        for &t in &mu.outcomes {
            assert!(allowed.contains(&pair_of(&g, t)));
        }
    }

    #[test]
    fn gmaj_white_takes_the_tie() {
        let g = fixture(Fixture::GMaj);
        let sol = find_pspe_fast(&g).unwrap();
        assert_eq!(pair_of(&g, sol.query(&g, &dy(1, 1))).0, 1);
        assert_eq!(pair_of(&g, sol.query(&g, &dy(15, 5))).0, 0);
        // The root auction at 1/2 itself reports a White win.
        let (_, _, t) = ascending_auction(&g, &sol, g.root(), &dy(1, 1)).unwrap();
        assert_eq!(pair_of(&g, t).0, 1);
        // Equal-utility twins merge in the outcome map: one Black interval,
        // one White interval.
        let mu = sol.outcome_map(&g);
        let pairs: Vec<(i64, i64)> = mu.outcomes.iter().map(|&t| pair_of(&g, t)).collect();
        assert_eq!(pairs, vec![(0, 1), (1, 0)]);
        assert_eq!(mu.cutoffs[1], dy(1, 1));
    }

    #[test]
    fn matches_grid_solver_on_binary_fixtures() {
        for f in [
            Fixture::GMaj,
            Fixture::GTwo,
            Fixture::Gk(3),
            Fixture::Gk(4),
            Fixture::HGame,
            Fixture::Centipede(4),
        ] {
            let g = fixture(f);
            let sol = find_pspe_fast(&g).unwrap();
            let (tables, _) = find_lower_pspe_grid(&g, &GridConfig::default()).unwrap();
            assert_eq!(sol.total_units(), tables.units() as u64);
            for c in 0..=tables.units() {
                let b = tables.bid_to_dyadic(c);
                let got = sol.query(&g, &b);
                let want = tables.t_star(g.root(), c);
                assert_eq!(got, want, "fixture {f:?} at {b}");
            }
        }
    }

    #[test]
    fn profile_sizes_respect_terminal_counts() {
        let g = fixture(Fixture::GTwo);
        let sol = find_pspe_fast(&g).unwrap();
        // Terminal count of each subgame bounds its profile length.
        let mut reach: Vec<std::collections::BTreeSet<NodeId>> = vec![Default::default(); g.num_nodes()];
        for &s in g.topo() {
            if g.is_terminal(s) {
                reach[s].insert(s);
            } else {
                let mut set = std::collections::BTreeSet::new();
                for &c in g.children(s) {
                    set.extend(reach[c].iter().copied());
                }
                reach[s] = set;
            }
        }
        for s in 0..g.num_nodes() {
            assert!(sol.profile(s).len() <= reach[s].len() + 1, "node {s}");
        }
    }

    #[test]
    fn root_outcomes_are_monotone_in_budget() {
        for f in [Fixture::GMaj, Fixture::GTwo, Fixture::Gk(4), Fixture::Centipede(6)] {
            let g = fixture(f);
            let sol = find_pspe_fast(&g).unwrap();
            let p = sol.profile(g.root());
            for w in p.outcomes().windows(2) {
                let (a1, a2) = pair_of(&g, w[0]);
                let (b1, b2) = pair_of(&g, w[1]);
                assert!(b1 >= a1, "fixture {f:?}: White value fell");
                assert!(b2 <= a2, "fixture {f:?}: Black value rose");
            }
        }
    }

    #[test]
    fn non_binary_games_are_rejected() {
        let g = fixture(Fixture::GBad);
        assert_eq!(find_pspe_fast(&g).unwrap_err(), FastError::NotBinary);
    }

    #[test]
    fn additive_dag_solves_fast_and_matches_grid_spot_checks() {
        let spec = SsaSpec::identical_items(6);
        let g = compile_additive(&spec).unwrap();
        let sol = find_pspe_fast(&g).unwrap();
        let (tables, _) = find_lower_pspe_grid(&g, &GridConfig::default()).unwrap();
        for c in (0..=tables.units()).step_by(7) {
            let b = tables.bid_to_dyadic(c);
            assert_eq!(sol.query(&g, &b), tables.t_star(g.root(), c));
        }
    }

    #[test]
    fn duplicated_child_means_free_move() {
        let mut b = GameBuilder::new();
        let root = b.add_internal(vec![1, 1]);
        let inner = b.add_internal(vec![2, 3]);
        b.add_terminal_int(4, 0);
        b.add_terminal_int(0, 4);
        b.set_root(root);
        assert_eq!(inner, 1);
        let g = b.build().unwrap();
        let sol = find_pspe_fast(&g).unwrap();
        // The root profile mirrors the inner auction's threshold.
        assert_eq!(sol.cutoffs_of(root), sol.cutoffs_of(inner));
        let (m1, m2, t) = ascending_auction(&g, &sol, root, &dy(3, 2)).unwrap();
        assert_eq!(m1, m2);
        assert_eq!(m1.0, inner);
        assert_eq!(pair_of(&g, t), (4, 0));
    }

    #[test]
    fn dump_and_load_round_trip() {
        let g = fixture(Fixture::GTwo);
        let sol = find_pspe_fast(&g).unwrap();
        let text = sol.dump_csv(&g);
        let back = FastSolution::load_csv(&g, &text).unwrap();
        for s in 0..g.num_nodes() {
            assert_eq!(sol.profile(s), back.profile(s), "node {s}");
        }
        assert_eq!(back.dump_csv(&g), text);
        // Tampered dumps are rejected.
        let broken = text.replace("node,a,", "n,a,");
        assert!(matches!(
            FastSolution::load_csv(&g, &broken),
            Err(FastError::Format(_))
        ));
    }

    #[test]
    fn query_accepts_off_grid_budgets_and_clamps() {
        let g = single_auction();
        let sol = find_pspe_fast(&g).unwrap();
        // Scale is height+2 = 3; budgets finer than 1/8 still resolve by
        // exact comparison against the cutoffs.
        assert_eq!(pair_of(&g, sol.query(&g, &dy(1, 4))), (0, 5));
        assert_eq!(pair_of(&g, sol.query(&g, &dy(31, 6))), (0, 5));
        assert_eq!(pair_of(&g, sol.query(&g, &dy(33, 6))), (3, 0));
        // Outside [0, 1] the budget clamps to the endpoints.
        assert_eq!(pair_of(&g, sol.query(&g, &dy(-1, 1))), (0, 5));
        assert_eq!(pair_of(&g, sol.query(&g, &dy(9, 3))), (3, 0));
    }

    #[test]
    fn auction_inputs_must_sit_on_the_grid() {
        let g = single_auction();
        let sol = find_pspe_fast(&g).unwrap();
        for b in [dy(1, 4), dy(-1, 1), dy(9, 3)] {
            assert!(matches!(
                ascending_auction(&g, &sol, g.root(), &b),
                Err(FastError::OffGrid(_))
            ));
        }
    }
}
