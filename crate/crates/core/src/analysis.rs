//! Equilibrium audits and forensics: independent deviation checking of solved
//! strategy tables, Pareto/monotonicity/surjectivity checks of outcome maps,
//! budget-interval quantization checks, price-trajectory extraction, and
//! exhaustive equilibrium enumeration on small discrete games.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::Serialize;

use crate::dyadic::Dyadic;
use crate::game::{
    pareto_set, BiddingGame, NodeId, OutcomeMap, Player, PreferenceOrder, TieBreak, Utility,
};
use crate::solver_grid::{play, GridConfig, GridMode, StrategyTables};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("strategy tables hold {found} budget units but the configuration needs {expected}")]
    IncompleteTables { expected: u32, found: u32 },
    #[error("budget or bid leaves the solved grid: {0}")]
    OffGrid(String),
    #[error("equilibrium enumeration exceeded {cap} candidate strategy rows at node {node}")]
    EnumerationOverflow { node: u64, cap: usize },
    #[error("equilibrium enumeration requires a tree-shaped game")]
    NotATree,
}

/// One concrete counterexample found by an audit.
#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    /// Which clause of the audited property failed.
    pub clause: String,
    /// External id of the game state involved, when state-specific.
    pub node: Option<u64>,
    /// White budget at which the failure occurs, when budget-specific.
    pub budget: Option<String>,
    pub expected: String,
    pub found: String,
}

/// Outcome of one audit. `pass` holds exactly when no violation was found;
/// recording stops at a cap but `violation_count` is always the full count.
#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub property: String,
    pub pass: bool,
    pub violation_count: u64,
    pub violations: Vec<Violation>,
}

const RECORD_CAP: usize = 128;

impl AuditReport {
    fn new(property: &str) -> Self {
        AuditReport {
            property: property.into(),
            pass: true,
            violation_count: 0,
            violations: Vec::new(),
        }
    }

    fn record(&mut self, v: Violation) {
        self.pass = false;
        self.violation_count += 1;
        if self.violations.len() < RECORD_CAP {
            self.violations.push(v);
        }
    }
}

fn pair_of(game: &BiddingGame, t: NodeId) -> (Utility, Utility) {
    game.utilities(t).expect("outcome must be a terminal").clone()
}

fn fmt_pair(p: &(Utility, Utility)) -> String {
    format!("({}, {})", p.0, p.1)
}

/// Deviation engine shared by the table auditor and the equilibrium
/// enumerator: evaluates best responses and profitable deviations against an
/// arbitrary subgame-outcome source `t_of(child, white_cell)`.
struct DevCtx<'a, F: Fn(NodeId, u32) -> NodeId> {
    game: &'a BiddingGame,
    ranks: &'a PreferenceOrder,
    tie: &'a TieBreak,
    units: u32,
    t_of: F,
}

impl<'a, F: Fn(NodeId, u32) -> NodeId> DevCtx<'a, F> {
    fn budget(&self, c: u32, p: Player) -> u32 {
        match p {
            Player::White => c,
            Player::Black => self.units - c,
        }
    }

    /// White's cell after `p` wins paying `bid` from White cell `c`.
    fn partition(&self, c: u32, p: Player, bid: u32) -> u32 {
        match p {
            Player::White => c - bid,
            Player::Black => c + bid,
        }
    }

    fn winner(&self, s: NodeId, b1: u32, b2: u32) -> Player {
        match b1.cmp(&b2) {
            Ordering::Greater => Player::White,
            Ordering::Less => Player::Black,
            Ordering::Equal => self.tie.at(s),
        }
    }

    fn min_winning_bid(&self, s: NodeId, p: Player, opponent_bid: u32) -> u32 {
        opponent_bid + u32::from(self.tie.at(s) != p)
    }

    /// `p`'s most preferred child at White cell `idx`; position order breaks
    /// rank ties.
    fn best(&self, s: NodeId, p: Player, idx: u32) -> (NodeId, NodeId) {
        let mut best: Option<(u32, NodeId, NodeId)> = None;
        for &child in self.game.children(s) {
            let t = (self.t_of)(child, idx);
            let r = self.ranks.rank(p, t);
            if best.as_ref().is_none_or(|&(br, _, _)| r > br) {
                best = Some((r, child, t));
            }
        }
        let (_, child, t) = best.expect("internal nodes have children");
        (child, t)
    }

    /// A winning re-bid strictly better for the current winner, if any.
    fn winner_rebid(
        &self,
        s: NodeId,
        c: u32,
        w: Player,
        bw: u32,
        bl: u32,
        t_cur: NodeId,
    ) -> Option<(u32, NodeId)> {
        let cur = self.ranks.rank(w, t_cur);
        for b in self.min_winning_bid(s, w, bl)..=self.budget(c, w) {
            if b == bw {
                continue;
            }
            let (_, t) = self.best(s, w, self.partition(c, w, b));
            if self.ranks.rank(w, t) > cur {
                return Some((b, t));
            }
        }
        None
    }

    /// The outcome after the winner deliberately loses the turn, if losing is
    /// possible and strictly better for them.
    fn winner_drop(&self, s: NodeId, c: u32, w: Player, bl: u32, t_cur: NodeId) -> Option<NodeId> {
        if bl == 0 && self.tie.at(s) == w {
            return None;
        }
        let l = w.other();
        let (_, t) = self.best(s, l, self.partition(c, l, bl));
        (self.ranks.rank(w, t) > self.ranks.rank(w, t_cur)).then_some(t)
    }

    /// An overbid with which the current loser takes the turn and strictly
    /// gains, if any.
    fn loser_overbid(
        &self,
        s: NodeId,
        c: u32,
        l: Player,
        bw: u32,
        t_cur: NodeId,
    ) -> Option<(u32, NodeId)> {
        let cur = self.ranks.rank(l, t_cur);
        for b in self.min_winning_bid(s, l, bw)..=self.budget(c, l) {
            let (_, t) = self.best(s, l, self.partition(c, l, b));
            if self.ranks.rank(l, t) > cur {
                return Some((b, t));
            }
        }
        None
    }

    /// Outcome of bid pair `(b1, b2)` at `(s, c)` when no player has a
    /// profitable deviation; `None` if the pair is unstable or infeasible.
    fn stable_outcome(&self, s: NodeId, c: u32, b1: u32, b2: u32) -> Option<NodeId> {
        if b1 > self.budget(c, Player::White) || b2 > self.budget(c, Player::Black) {
            return None;
        }
        let w = self.winner(s, b1, b2);
        let (bw, bl) = match w {
            Player::White => (b1, b2),
            Player::Black => (b2, b1),
        };
        let (_, t_cur) = self.best(s, w, self.partition(c, w, bw));
        if self.winner_rebid(s, c, w, bw, bl, t_cur).is_some() {
            return None;
        }
        if self.winner_drop(s, c, w, bl, t_cur).is_some() {
            return None;
        }
        if self.loser_overbid(s, c, w.other(), bw, t_cur).is_some() {
            return None;
        }
        Some(t_cur)
    }
}

/// Budget units the grid described by `cfg` must hold for `game`.
fn expected_units(game: &BiddingGame, cfg: &GridConfig) -> Result<u32, AnalysisError> {
    match &cfg.mode {
        GridMode::Continuous { epsilon } => {
            let eps = epsilon
                .clone()
                .unwrap_or_else(|| Dyadic::unit(game.height() + 2));
            if eps != Dyadic::unit(eps.scale()) {
                return Err(AnalysisError::OffGrid("epsilon must be 1/2^k".into()));
            }
            u32::try_from(1u64 << eps.scale().min(63))
                .map_err(|_| AnalysisError::OffGrid(format!("epsilon {eps} is too fine")))
        }
        GridMode::Discrete { total } => Ok(*total),
    }
}

/// Audits solved strategy tables as a pure subgame-perfect equilibrium,
/// clause by clause: at every (state, budget cell) the recorded bids must be
/// feasible, each player's recorded move must be a best response at their own
/// post-win budget partition, the recorded outcome must equal the winner's
/// continuation, the winner must gain from no alternative winning bid and
/// from deliberately losing the turn, and the loser must gain from no
/// overbid. All checks re-derive deviations from the children's rows and do
/// not trust how the tables were produced.
pub fn verify_pspe(
    game: &BiddingGame,
    tables: &StrategyTables,
    cfg: &GridConfig,
) -> Result<AuditReport, AnalysisError> {
    let expected = expected_units(game, cfg)?;
    if expected != tables.units() {
        return Err(AnalysisError::IncompleteTables {
            expected,
            found: tables.units(),
        });
    }
    let units = tables.units();
    let ctx = DevCtx {
        game,
        ranks: tables.ranks(),
        tie: tables.tie_break(),
        units,
        t_of: |child, idx| tables.t_star(child, idx),
    };
    let mut report = AuditReport::new("pspe");
    for &s in game.terminals() {
        for c in 0..=units {
            if tables.t_star(s, c) != s {
                report.record(Violation {
                    clause: "terminal-identity".into(),
                    node: Some(game.external_id(s)),
                    budget: Some(tables.bid_to_dyadic(c).to_string()),
                    expected: "a terminal maps to itself".into(),
                    found: format!("terminal {}", game.external_id(tables.t_star(s, c))),
                });
                break;
            }
        }
    }
    for s in 0..game.num_nodes() {
        if game.is_terminal(s) {
            continue;
        }
        let ext = game.external_id(s);
        for c in 0..=units {
            let budget = Some(tables.bid_to_dyadic(c).to_string());
            let (u1, ch1) = tables.white_action(s, c);
            let (u2, ch2) = tables.black_action(s, c);
            if u1 > c || u2 > units - c {
                report.record(Violation {
                    clause: "bid-feasibility".into(),
                    node: Some(ext),
                    budget,
                    expected: format!(
                        "bids within budgets ({}, {})",
                        tables.bid_to_dyadic(c),
                        tables.bid_to_dyadic(units - c)
                    ),
                    found: format!(
                        "bids ({}, {})",
                        tables.bid_to_dyadic(u1),
                        tables.bid_to_dyadic(u2)
                    ),
                });
                continue;
            }
            if !game.children(s).contains(&ch1) || !game.children(s).contains(&ch2) {
                report.record(Violation {
                    clause: "consistency".into(),
                    node: Some(ext),
                    budget,
                    expected: "recorded moves lead to children of the state".into(),
                    found: format!(
                        "moves to {} and {}",
                        game.external_id(ch1),
                        game.external_id(ch2)
                    ),
                });
                continue;
            }
            for (p, bid, ch) in [(Player::White, u1, ch1), (Player::Black, u2, ch2)] {
                let idx = ctx.partition(c, p, bid);
                let (_, t_best) = ctx.best(s, p, idx);
                let t_ch = tables.t_star(ch, idx);
                if tables.ranks().rank(p, t_ch) < tables.ranks().rank(p, t_best) {
                    report.record(Violation {
                        clause: "argmax".into(),
                        node: Some(ext),
                        budget: budget.clone(),
                        expected: format!(
                            "{p:?}'s move reaches an outcome as good as {}",
                            fmt_pair(&pair_of(game, t_best))
                        ),
                        found: format!(
                            "move to {} reaching {}",
                            game.external_id(ch),
                            fmt_pair(&pair_of(game, t_ch))
                        ),
                    });
                }
            }
            let w = ctx.winner(s, u1, u2);
            let (bw, bl, chw) = match w {
                Player::White => (u1, u2, ch1),
                Player::Black => (u2, u1, ch2),
            };
            let t_cur = tables.t_star(s, c);
            if tables.t_star(chw, ctx.partition(c, w, bw)) != t_cur {
                report.record(Violation {
                    clause: "consistency".into(),
                    node: Some(ext),
                    budget,
                    expected: "recorded outcome equals the winner's continuation".into(),
                    found: format!("outcome {}", game.external_id(t_cur)),
                });
                continue;
            }
            if let Some((b, t)) = ctx.winner_rebid(s, c, w, bw, bl, t_cur) {
                report.record(Violation {
                    clause: "winner-rebid".into(),
                    node: Some(ext),
                    budget: budget.clone(),
                    expected: format!("no winning re-bid beats {}", fmt_pair(&pair_of(game, t_cur))),
                    found: format!(
                        "{w:?} re-bids {} for {}",
                        tables.bid_to_dyadic(b),
                        fmt_pair(&pair_of(game, t))
                    ),
                });
            }
            if let Some(t) = ctx.winner_drop(s, c, w, bl, t_cur) {
                report.record(Violation {
                    clause: "winner-drop".into(),
                    node: Some(ext),
                    budget: budget.clone(),
                    expected: format!("losing the turn beats nothing past {}", fmt_pair(&pair_of(game, t_cur))),
                    found: format!("{w:?} drops the turn for {}", fmt_pair(&pair_of(game, t))),
                });
            }
            if let Some((b, t)) = ctx.loser_overbid(s, c, w.other(), bw, t_cur) {
                report.record(Violation {
                    clause: "loser-overbid".into(),
                    node: Some(ext),
                    budget,
                    expected: format!("no overbid beats {}", fmt_pair(&pair_of(game, t_cur))),
                    found: format!(
                        "{:?} overbids {} for {}",
                        w.other(),
                        tables.bid_to_dyadic(b),
                        fmt_pair(&pair_of(game, t))
                    ),
                });
            }
        }
    }
    Ok(report)
}

/// Every interval outcome of `mu` lies on the Pareto frontier, compared at
/// utility-pair level.
pub fn check_pareto_optimal(game: &BiddingGame, mu: &OutcomeMap) -> AuditReport {
    let mut report = AuditReport::new("pareto");
    let frontier: BTreeSet<(Utility, Utility)> = pareto_set(game)
        .into_iter()
        .map(|t| pair_of(game, t))
        .collect();
    for (j, &t) in mu.outcomes.iter().enumerate() {
        let pair = pair_of(game, t);
        if frontier.contains(&pair) {
            continue;
        }
        let witness = game.terminals().iter().copied().find(|&q| {
            let qp = pair_of(game, q);
            qp.0 >= pair.0 && qp.1 >= pair.1 && qp != pair
        });
        let found = match witness {
            Some(q) => format!(
                "{} dominated by {} at node {}",
                fmt_pair(&pair),
                fmt_pair(&pair_of(game, q)),
                game.external_id(q)
            ),
            None => fmt_pair(&pair),
        };
        report.record(Violation {
            clause: "pareto".into(),
            node: Some(game.external_id(t)),
            budget: Some(mu.cutoffs[j].to_string()),
            expected: "a Pareto-optimal utility pair".into(),
            found,
        });
    }
    report
}

/// White's utility weakly increases with her budget and Black's weakly
/// increases with his (so weakly decreases along rising White budget).
pub fn check_monotone(game: &BiddingGame, mu: &OutcomeMap) -> AuditReport {
    let mut report = AuditReport::new("monotone");
    for j in 1..mu.len() {
        let prev = pair_of(game, mu.outcomes[j - 1]);
        let cur = pair_of(game, mu.outcomes[j]);
        if cur.0 < prev.0 {
            report.record(Violation {
                clause: "white-monotone".into(),
                node: Some(game.external_id(mu.outcomes[j])),
                budget: Some(mu.cutoffs[j].to_string()),
                expected: format!("u1 >= {} from the interval below", prev.0),
                found: format!("u1 = {}", cur.0),
            });
        }
        if cur.1 > prev.1 {
            report.record(Violation {
                clause: "black-monotone".into(),
                node: Some(game.external_id(mu.outcomes[j])),
                budget: Some(mu.cutoffs[j].to_string()),
                expected: format!("u2 <= {} from the interval below", prev.1),
                found: format!("u2 = {}", cur.1),
            });
        }
    }
    report
}

/// Every Pareto-frontier utility pair is attained on some budget interval.
pub fn check_surjective(game: &BiddingGame, mu: &OutcomeMap) -> AuditReport {
    let mut report = AuditReport::new("surjective");
    let attained: BTreeSet<(Utility, Utility)> =
        mu.outcomes.iter().map(|&t| pair_of(game, t)).collect();
    let frontier: BTreeSet<(Utility, Utility)> = pareto_set(game)
        .into_iter()
        .map(|t| pair_of(game, t))
        .collect();
    for pair in frontier {
        if !attained.contains(&pair) {
            report.record(Violation {
                clause: "surjective".into(),
                node: None,
                budget: None,
                expected: format!("{} attained at some budget", fmt_pair(&pair)),
                found: "never attained".into(),
            });
        }
    }
    report
}

/// Quantization audit: the fine map changes utility pairs only at multiples
/// of `1/2^height`, and the two maps agree as step functions at utility-pair
/// level wherever either changes.
pub fn check_budget_intervals(
    game: &BiddingGame,
    fine: &OutcomeMap,
    coarse: &OutcomeMap,
) -> AuditReport {
    let mut report = AuditReport::new("budget-intervals");
    if fine.total != coarse.total {
        report.record(Violation {
            clause: "domain".into(),
            node: None,
            budget: None,
            expected: "maps over the same total budget".into(),
            found: format!("totals {} and {}", fine.total, coarse.total),
        });
        return report;
    }
    if fine.total == Dyadic::one() {
        let h = game.height();
        let mut prev: Option<(Utility, Utility)> = None;
        for (j, &t) in fine.outcomes.iter().enumerate() {
            let pair = pair_of(game, t);
            if j > 0 && prev.as_ref() != Some(&pair) && fine.cutoffs[j].units_at_scale(h).is_none()
            {
                report.record(Violation {
                    clause: "interval-width".into(),
                    node: Some(game.external_id(t)),
                    budget: Some(fine.cutoffs[j].to_string()),
                    expected: format!("outcome changes only at multiples of 1/2^{h}"),
                    found: format!("utility pair becomes {}", fmt_pair(&pair)),
                });
            }
            prev = Some(pair);
        }
    }
    let mut points: Vec<&Dyadic> = fine.cutoffs.iter().chain(coarse.cutoffs.iter()).collect();
    points.sort();
    points.dedup();
    for b in points {
        let pf = pair_of(game, fine.eval(b));
        let pc = pair_of(game, coarse.eval(b));
        if pf != pc {
            report.record(Violation {
                clause: "resolution-agreement".into(),
                node: Some(game.external_id(fine.eval(b))),
                budget: Some(b.to_string()),
                expected: format!("both resolutions give {}", fmt_pair(&pc)),
                found: format!("fine resolution gives {}", fmt_pair(&pf)),
            });
        }
    }
    report
}

/// Winning bid of each auction round along equilibrium play from the root at
/// White budget `b1`.
pub fn price_trajectory(
    game: &BiddingGame,
    tables: &StrategyTables,
    b1: &Dyadic,
) -> Result<Vec<Dyadic>, AnalysisError> {
    let trace = play(game, tables, b1).map_err(|e| AnalysisError::OffGrid(e.to_string()))?;
    Ok(trace
        .into_iter()
        .map(|r| match r.winner {
            Player::White => r.bid1,
            Player::Black => r.bid2,
        })
        .collect())
}

/// Interval of `mu` with maximum social welfare (u1 + u2); the lowest-budget
/// interval wins ties. Returns the interval index and its welfare.
pub fn max_welfare_interval(game: &BiddingGame, mu: &OutcomeMap) -> Option<(usize, Utility)> {
    let mut best: Option<(usize, Utility)> = None;
    for (j, &t) in mu.outcomes.iter().enumerate() {
        let p = pair_of(game, t);
        let w = p.0 + p.1;
        if best.as_ref().is_none_or(|(_, bw)| w > *bw) {
            best = Some((j, w));
        }
    }
    best
}

/// Exhaustively enumerates pure subgame-perfect equilibria of a tree game on
/// the integer budget grid `0..=total` (White wins ties) and returns, for
/// each White budget, the set of root outcomes across all of them.
///
/// Works bottom-up: a node's candidate strategy rows are all per-cell choices
/// of deviation-free bid pairs, taken over every combination of the
/// children's candidate rows; combinations leaving any cell without a stable
/// pair extend to no equilibrium and are discarded. `row_cap` bounds the
/// rows kept per node.
pub fn enumerate_pspe_outcomes(
    game: &BiddingGame,
    total: u32,
    row_cap: usize,
) -> Result<Vec<BTreeSet<NodeId>>, AnalysisError> {
    let n = game.num_nodes();
    let mut indeg = vec![0u32; n];
    for s in 0..n {
        for &ch in game.children(s) {
            indeg[ch] += 1;
        }
    }
    if indeg.iter().any(|&d| d > 1) {
        return Err(AnalysisError::NotATree);
    }
    let units = total;
    let ranks = PreferenceOrder::new(game);
    let tie = TieBreak::white();
    let mut rows: Vec<Vec<Vec<u32>>> = vec![Vec::new(); n];
    for &t in game.terminals() {
        rows[t] = vec![vec![t as u32; units as usize + 1]];
    }
    for &s in game.topo() {
        if game.is_terminal(s) {
            continue;
        }
        let kids = game.children(s);
        if kids.iter().any(|&k| rows[k].is_empty()) {
            continue;
        }
        let mut out: BTreeSet<Vec<u32>> = BTreeSet::new();
        let mut combo = vec![0usize; kids.len()];
        'combos: loop {
            let chosen: Vec<&Vec<u32>> = kids
                .iter()
                .zip(&combo)
                .map(|(&k, &i)| &rows[k][i])
                .collect();
            let t_of = |child: NodeId, idx: u32| -> NodeId {
                let pos = kids.iter().position(|&k| k == child).expect("child of s");
                chosen[pos][idx as usize] as NodeId
            };
            let ctx = DevCtx {
                game,
                ranks: &ranks,
                tie: &tie,
                units,
                t_of,
            };
            let mut cell_sets: Vec<Vec<u32>> = Vec::with_capacity(units as usize + 1);
            let mut dead = false;
            for c in 0..=units {
                let mut set = BTreeSet::new();
                for b1 in 0..=c {
                    for b2 in 0..=(units - c) {
                        if let Some(t) = ctx.stable_outcome(s, c, b1, b2) {
                            set.insert(t as u32);
                        }
                    }
                }
                if set.is_empty() {
                    dead = true;
                    break;
                }
                cell_sets.push(set.into_iter().collect());
            }
            if !dead {
                let mut count: u128 = 1;
                for set in &cell_sets {
                    count = count.saturating_mul(set.len() as u128);
                }
                if out.len() as u128 + count > row_cap as u128 {
                    return Err(AnalysisError::EnumerationOverflow {
                        node: game.external_id(s),
                        cap: row_cap,
                    });
                }
                let mut pick = vec![0usize; cell_sets.len()];
                loop {
                    out.insert(
                        pick.iter()
                            .zip(&cell_sets)
                            .map(|(&i, set)| set[i])
                            .collect(),
                    );
                    let mut k = 0;
                    while k < pick.len() {
                        pick[k] += 1;
                        if pick[k] < cell_sets[k].len() {
                            break;
                        }
                        pick[k] = 0;
                        k += 1;
                    }
                    if k == pick.len() {
                        break;
                    }
                }
            }
            let mut k = 0;
            while k < combo.len() {
                combo[k] += 1;
                if combo[k] < rows[kids[k]].len() {
                    break;
                }
                combo[k] = 0;
                k += 1;
            }
            if k == combo.len() {
                break 'combos;
            }
        }
        rows[s] = out.into_iter().collect();
    }
    let root_rows = &rows[game.root()];
    Ok((0..=units as usize)
        .map(|c| root_rows.iter().map(|r| r[c] as NodeId).collect())
        .collect())
}

/// Game-level monotonicity across equilibria: for any higher White budget
/// some equilibrium is at least as good for White as every equilibrium at any
/// lower budget, and symmetrically for Black. Equivalently, the per-budget
/// maximum of White's utility over `outcomes_per_cell` is weakly increasing,
/// and the maximum of Black's is weakly decreasing.
pub fn check_game_monotone(
    game: &BiddingGame,
    outcomes_per_cell: &[BTreeSet<NodeId>],
) -> AuditReport {
    let mut report = AuditReport::new("game-monotone");
    let best = |set: &BTreeSet<NodeId>, p: Player| -> Utility {
        set.iter()
            .map(|&t| {
                let pair = pair_of(game, t);
                match p {
                    Player::White => pair.0,
                    Player::Black => pair.1,
                }
            })
            .max()
            .expect("non-empty outcome set")
    };
    let mut prev: Option<(Utility, Utility)> = None;
    for (c, set) in outcomes_per_cell.iter().enumerate() {
        if set.is_empty() {
            report.record(Violation {
                clause: "existence".into(),
                node: None,
                budget: Some(c.to_string()),
                expected: "at least one equilibrium outcome".into(),
                found: "none".into(),
            });
            prev = None;
            continue;
        }
        let m1 = best(set, Player::White);
        let m2 = best(set, Player::Black);
        if let Some((p1, p2)) = &prev {
            if m1 < *p1 {
                report.record(Violation {
                    clause: "white-game-monotone".into(),
                    node: None,
                    budget: Some(c.to_string()),
                    expected: format!("best u1 >= {p1}"),
                    found: format!("best u1 = {m1}"),
                });
            }
            if m2 > *p2 {
                report.record(Violation {
                    clause: "black-game-monotone".into(),
                    node: None,
                    budget: Some(c.to_string()),
                    expected: format!("best u2 <= {p2}"),
                    found: format!("best u2 = {m2}"),
                });
            }
        }
        prev = Some((m1, m2));
    }
    report
}
