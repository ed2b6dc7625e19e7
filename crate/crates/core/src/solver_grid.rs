//! Grid solver: computes the Lower pure subgame-perfect equilibrium by
//! running an ascending better-reply auction at every (node, budget-cell)
//! pair over a discrete budget grid. Handles arbitrary branching and
//! configurable tie winners.

use num::rational::BigRational;
use num::{One, Signed};

use crate::dyadic::Dyadic;
use crate::game::{BiddingGame, NodeId, OutcomeMap, Player, PreferenceOrder, TieBreak};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SolverError {
    #[error("grid of {cells} cells exceeds the cap of {cap}")]
    GridTooLarge { cells: u64, cap: u64 },
    #[error("auction failed to stabilize at node {node}, budget cell {cell}")]
    NonConvergence { node: u64, cell: u32 },
    #[error("budget or bid leaves the solved grid: {0}")]
    OffGrid(String),
    #[error("script round {round} is infeasible")]
    InfeasibleBid { round: usize },
    #[error("script length does not match the path to a terminal")]
    WrongLength,
    #[error("epsilon must be 1/2^k for some k >= 0")]
    InvalidEpsilon,
}

/// Budget discretization: a dyadic grid over total budget 1, or integer
/// budgets 0..=M with bid unit 1.
#[derive(Clone, Debug)]
pub enum GridMode {
    /// Grid step `epsilon` (must be `1/2^k`); default 2^(-height-2).
    Continuous { epsilon: Option<Dyadic> },
    /// Integer budgets summing to `total`.
    Discrete { total: u32 },
}

#[derive(Clone, Debug)]
pub struct GridConfig {
    pub mode: GridMode,
    pub tie_break: TieBreak,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            mode: GridMode::Continuous { epsilon: None },
            tie_break: TieBreak::white(),
        }
    }
}

impl GridConfig {
    pub fn discrete(total: u32) -> Self {
        GridConfig {
            mode: GridMode::Discrete { total },
            tie_break: TieBreak::white(),
        }
    }

    pub fn with_epsilon(epsilon: Dyadic) -> Self {
        GridConfig {
            mode: GridMode::Continuous { epsilon: Some(epsilon) },
            tie_break: TieBreak::white(),
        }
    }
}

/// Maximum number of (node, cell) table entries.
const CELL_CAP: u64 = 1 << 24;

/// Per-cell deviation budget before declaring non-convergence.
fn deviation_cap(units: u32) -> u64 {
    8 * units as u64 + 64
}

/// Solved equilibrium tables over the budget grid: for every node and every
/// White budget cell, both players' bids, their chosen children, and the
/// resulting terminal.
#[derive(Clone, Debug)]
pub struct StrategyTables {
    units: u32,
    /// Budget represented by one grid unit (1 in discrete mode).
    step: Dyadic,
    discrete: bool,
    tie: TieBreak,
    ranks: PreferenceOrder,
    /// Terminal outcome per (node, cell); u32-packed node ids.
    tstar: Vec<Vec<u32>>,
    /// (bid in units, chosen child) per (node, cell); empty for terminals.
    a1: Vec<Vec<(u32, u32)>>,
    a2: Vec<Vec<(u32, u32)>>,
}

impl StrategyTables {
    /// Number of grid units in the total budget.
    pub fn units(&self) -> u32 {
        self.units
    }

    /// Budget step per unit as an exact dyadic.
    pub fn step(&self) -> &Dyadic {
        &self.step
    }

    pub fn is_discrete(&self) -> bool {
        self.discrete
    }

    pub fn tie_break(&self) -> &TieBreak {
        &self.tie
    }

    pub fn ranks(&self) -> &PreferenceOrder {
        &self.ranks
    }

    /// Total budget as a dyadic (1 in continuous mode, M in discrete).
    pub fn total(&self) -> Dyadic {
        self.step.scaled_by_int(self.units.into())
    }

    pub fn t_star(&self, s: NodeId, cell: u32) -> NodeId {
        self.tstar[s][cell as usize] as NodeId
    }

    /// White's equilibrium (bid units, child) at a cell. Panics on terminals.
    pub fn white_action(&self, s: NodeId, cell: u32) -> (u32, NodeId) {
        let (b, c) = self.a1[s][cell as usize];
        (b, c as NodeId)
    }

    pub fn black_action(&self, s: NodeId, cell: u32) -> (u32, NodeId) {
        let (b, c) = self.a2[s][cell as usize];
        (b, c as NodeId)
    }

    pub fn bid_to_dyadic(&self, units: u32) -> Dyadic {
        self.step.scaled_by_int(units.into())
    }

    /// Exact cell index of a dyadic budget, if it lies on the grid.
    pub fn cell_of(&self, budget: &Dyadic) -> Option<u32> {
        if budget.is_negative() {
            return None;
        }
        let units = budget.units_at_scale(self.step.scale())?;
        let units = u32::try_from(units).ok()?;
        (units <= self.units).then_some(units)
    }

    /// Step-function cell of an arbitrary rational budget in [0, total].
    pub fn cell_of_rational(&self, budget: &BigRational) -> Result<u32, SolverError> {
        if budget.is_negative() || *budget > self.total().to_rational() {
            return Err(SolverError::OffGrid(format!("budget {budget} outside [0, total]")));
        }
        let units = (budget / self.step.to_rational()).floor().to_integer();
        let units = u32::try_from(units).map_err(|_| {
            SolverError::OffGrid(format!("budget {budget} outside [0, total]"))
        })?;
        Ok(units.min(self.units))
    }

    /// Root outcomes compressed into budget intervals (runs of equal
    /// terminal ids merged).
    pub fn outcome_map(&self, game: &BiddingGame) -> OutcomeMap {
        let row = &self.tstar[game.root()];
        let mut cutoffs = vec![Dyadic::zero()];
        let mut outcomes = vec![row[0] as NodeId];
        for (c, &t) in row.iter().enumerate().skip(1) {
            if t != *outcomes.last().unwrap() as u32 {
                cutoffs.push(self.bid_to_dyadic(c as u32));
                outcomes.push(t as NodeId);
            }
        }
        OutcomeMap { cutoffs, outcomes, total: self.total() }
    }

    /// Forensics hook: overwrite one cell's recorded bid pair and moves, then
    /// recompute that cell's outcome from the children's rows. Ancestor rows
    /// are left untouched, so overriding below the root leaves stale outcomes
    /// above `s`; audits of hypothetical profiles should edit root cells.
    pub fn override_cell(
        &mut self,
        game: &BiddingGame,
        s: NodeId,
        cell: u32,
        white: (u32, NodeId),
        black: (u32, NodeId),
    ) {
        assert!(!game.is_terminal(s), "cannot override a terminal row");
        self.a1[s][cell as usize] = (white.0, white.1 as u32);
        self.a2[s][cell as usize] = (black.0, black.1 as u32);
        let (idx, child) = match auction_winner(&self.tie, s, white.0, black.0) {
            Player::White => (cell - white.0, white.1),
            Player::Black => (cell + black.0, black.1),
        };
        self.tstar[s][cell as usize] = self.tstar[child][idx as usize];
    }
}

/// Winner of an auction round at `s` under the configured tie rule.
fn auction_winner(tie: &TieBreak, s: NodeId, b1: u32, b2: u32) -> Player {
    match b1.cmp(&b2) {
        std::cmp::Ordering::Greater => Player::White,
        std::cmp::Ordering::Less => Player::Black,
        std::cmp::Ordering::Equal => tie.at(s),
    }
}

/// Lowest bid with which `player` beats `opponent_bid` at `s`.
fn min_winning_bid(tie: &TieBreak, s: NodeId, player: Player, opponent_bid: u32) -> u32 {
    opponent_bid + u32::from(tie.at(s) != player)
}

struct CellSolver<'a> {
    game: &'a BiddingGame,
    ranks: &'a PreferenceOrder,
    tie: &'a TieBreak,
    tstar: &'a [Vec<u32>],
    units: u32,
    binary: bool,
}

impl<'a> CellSolver<'a> {
    /// White-budget cell after `player` wins paying `bid` from White cell `c`.
    fn partition(&self, c: u32, player: Player, bid: u32) -> u32 {
        match player {
            Player::White => c - bid,
            Player::Black => c + bid,
        }
    }

    fn budget(&self, c: u32, player: Player) -> u32 {
        match player {
            Player::White => c,
            Player::Black => self.units - c,
        }
    }

    /// `player`'s best child at White-budget cell `idx` under the generic
    /// order; ties resolve to the lowest child position.
    fn best_child(&self, s: NodeId, player: Player, idx: u32) -> (NodeId, NodeId) {
        let mut best: Option<(u32, NodeId, NodeId)> = None;
        for &child in self.game.children(s) {
            let t = self.tstar[child][idx as usize] as NodeId;
            let r = self.ranks.rank(player, t);
            if best.as_ref().is_none_or(|&(br, _, _)| r > br) {
                best = Some((r, child, t));
            }
        }
        let (_, child, t) = best.expect("internal nodes have children");
        (child, t)
    }

    /// Runs the ascending better-reply auction for one cell and returns
    /// `(winner, winner bid, loser bid)`.
    fn solve(&self, s: NodeId, c: u32) -> Result<(Player, u32, u32), SolverError> {
        let mut b1 = 0u32;
        let mut b2 = 0u32;
        let mut budget_left = deviation_cap(self.units);
        let spend = |n: &mut u64| -> Result<(), SolverError> {
            if *n == 0 {
                return Err(SolverError::NonConvergence {
                    node: self.game.external_id(s),
                    cell: c,
                });
            }
            *n -= 1;
            Ok(())
        };

        'stabilize: loop {
            // Phase 1 (the core ascending loop): the loser tries the lowest
            // winning raise; accept while it strictly improves their outcome.
            loop {
                spend(&mut budget_left)?;
                let w = auction_winner(self.tie, s, b1, b2);
                let l = w.other();
                let bw = if w == Player::White { b1 } else { b2 };
                let (_, t_cur) = self.best_child(s, w, self.partition(c, w, bw));
                let m = min_winning_bid(self.tie, s, l, bw);
                if m > self.budget(c, l) {
                    break;
                }
                let (_, t_dev) = self.best_child(s, l, self.partition(c, l, m));
                if self.ranks.rank(l, t_cur) >= self.ranks.rank(l, t_dev) {
                    break;
                }
                match l {
                    Player::White => b1 = m,
                    Player::Black => b2 = m,
                }
            }
            if self.binary {
                // Outcomes of subgames are budget-monotone for each player,
                // so the lowest raise is the loser's best deviation, the
                // winner's bid is already their cheapest winning bid, and
                // losing on purpose cannot pay. Nothing more to check.
                break;
            }

            let w = auction_winner(self.tie, s, b1, b2);
            let l = w.other();
            let (bw, bl) = match w {
                Player::White => (b1, b2),
                Player::Black => (b2, b1),
            };
            let (_, t_cur) = self.best_child(s, w, self.partition(c, w, bw));
            let rank_cur_l = self.ranks.rank(l, t_cur);
            let rank_cur_w = self.ranks.rank(w, t_cur);

            // Phase 2: full overbid scan for the loser — with more than two
            // children, subgame outcomes need not be monotone, so a raise
            // beyond the minimum can succeed where the minimum failed.
            let start = min_winning_bid(self.tie, s, l, bw);
            for beta in start..=self.budget(c, l) {
                spend(&mut budget_left)?;
                let (_, t_dev) = self.best_child(s, l, self.partition(c, l, beta));
                if self.ranks.rank(l, t_dev) > rank_cur_l {
                    match l {
                        Player::White => b1 = beta,
                        Player::Black => b2 = beta,
                    }
                    continue 'stabilize;
                }
            }

            // Phase 3: winner re-bid scan — any other winning bid that gives
            // the winner a strictly better outcome (lowest such bid wins).
            let mut best: Option<(u32, u32)> = None; // (rank, bid)
            for beta in min_winning_bid(self.tie, s, w, bl)..=self.budget(c, w) {
                spend(&mut budget_left)?;
                let (_, t_re) = self.best_child(s, w, self.partition(c, w, beta));
                let r = self.ranks.rank(w, t_re);
                if best.is_none_or(|(br, _)| r > br) {
                    best = Some((r, beta));
                }
            }
            if let Some((r, beta)) = best {
                if r > rank_cur_w {
                    match w {
                        Player::White => b1 = beta,
                        Player::Black => b2 = beta,
                    }
                    continue 'stabilize;
                }
            }

            // Phase 4: winner drop — losing on purpose, leaving the loser to
            // win with their current bid. Impossible only when the loser
            // bids 0 against a tie-favored winner.
            let can_lose = bl > 0 || self.tie.at(s) != w;
            if can_lose {
                let (_, t_drop) = self.best_child(s, l, self.partition(c, l, bl));
                if self.ranks.rank(w, t_drop) > rank_cur_w {
                    match w {
                        Player::White => b1 = 0,
                        Player::Black => b2 = 0,
                    }
                    continue 'stabilize;
                }
            }
            break;
        }
        let w = auction_winner(self.tie, s, b1, b2);
        let (bw, bl) = match w {
            Player::White => (b1, b2),
            Player::Black => (b2, b1),
        };
        Ok((w, bw, bl))
    }
}

/// Computes Lower-PSPE strategy tables over the budget grid and the root
/// outcome map. Every node is solved in children-first order; each cell runs
/// an independent ascending auction from bids (0,0).
pub fn find_lower_pspe_grid(
    game: &BiddingGame,
    cfg: &GridConfig,
) -> Result<(StrategyTables, OutcomeMap), SolverError> {
    let (units, step, discrete) = match &cfg.mode {
        GridMode::Continuous { epsilon } => {
            let eps = match epsilon {
                Some(e) => validate_epsilon(e)?,
                None => Dyadic::unit(game.height() + 2),
            };
            let units = 1u64 << eps.scale();
            let units = u32::try_from(units).map_err(|_| SolverError::InvalidEpsilon)?;
            (units, eps, false)
        }
        GridMode::Discrete { total } => (*total, Dyadic::one(), true),
    };
    let cells = (units as u64 + 1) * game.num_nodes() as u64;
    if cells > CELL_CAP {
        return Err(SolverError::GridTooLarge { cells, cap: CELL_CAP });
    }
    let ranks = PreferenceOrder::new(game);
    let n = game.num_nodes();
    let mut tstar: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut a1: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n];
    let mut a2: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n];
    for &t in game.terminals() {
        tstar[t] = vec![t as u32; units as usize + 1];
    }
    let order: Vec<NodeId> = game
        .topo()
        .iter()
        .copied()
        .filter(|&s| !game.is_terminal(s))
        .collect();
    for &s in &order {
        let solver = CellSolver {
            game,
            ranks: &ranks,
            tie: &cfg.tie_break,
            tstar: &tstar,
            units,
            binary: game.children(s).len() <= 2,
        };
        let mut row_t = Vec::with_capacity(units as usize + 1);
        let mut row_a1 = Vec::with_capacity(units as usize + 1);
        let mut row_a2 = Vec::with_capacity(units as usize + 1);
        for c in 0..=units {
            let (w, bw, bl) = solver.solve(s, c)?;
            let (succ, t) = solver.best_child(s, w, solver.partition(c, w, bw));
            let (other, _) = solver.best_child(s, w.other(), solver.partition(c, w.other(), bl));
            row_t.push(t as u32);
            let (white, black) = match w {
                Player::White => ((bw, succ as u32), (bl, other as u32)),
                Player::Black => ((bl, other as u32), (bw, succ as u32)),
            };
            row_a1.push(white);
            row_a2.push(black);
        }
        tstar[s] = row_t;
        a1[s] = row_a1;
        a2[s] = row_a2;
    }
    let tables = StrategyTables {
        units,
        step,
        discrete,
        tie: cfg.tie_break.clone(),
        ranks,
        tstar,
        a1,
        a2,
    };
    let mu = tables.outcome_map(game);
    Ok((tables, mu))
}

fn validate_epsilon(eps: &Dyadic) -> Result<Dyadic, SolverError> {
    if *eps == Dyadic::unit(eps.scale()) {
        Ok(eps.clone())
    } else {
        Err(SolverError::InvalidEpsilon)
    }
}

/// Evaluates one auction round at `s` with explicit (possibly off-grid
/// rational) bids: the winner takes their preferred child at the post-payment
/// budget partition, read from the solved tables as a step function.
pub fn get_outcome(
    game: &BiddingGame,
    tables: &StrategyTables,
    s: NodeId,
    b1_budget: &BigRational,
    bid1: &BigRational,
    bid2: &BigRational,
) -> Result<NodeId, SolverError> {
    if game.is_terminal(s) {
        return Ok(s);
    }
    let total = tables.total().to_rational();
    let b2_budget = &total - b1_budget;
    if b1_budget.is_negative() || b2_budget.is_negative() {
        return Err(SolverError::OffGrid(format!("budget {b1_budget} outside [0, total]")));
    }
    if bid1.is_negative() || bid1 > b1_budget || bid2.is_negative() || *bid2 > b2_budget {
        return Err(SolverError::OffGrid("bid exceeds its budget".into()));
    }
    let winner = match bid1.cmp(bid2) {
        std::cmp::Ordering::Greater => Player::White,
        std::cmp::Ordering::Less => Player::Black,
        std::cmp::Ordering::Equal => tables.tie.at(s),
    };
    let after = match winner {
        Player::White => b1_budget - bid1,
        Player::Black => b1_budget + bid2,
    };
    let idx = tables.cell_of_rational(&after)?;
    let mut best: Option<(u32, NodeId)> = None;
    for &child in game.children(s) {
        let t = tables.t_star(child, idx);
        let r = tables.ranks.rank(winner, t);
        if best.is_none_or(|(br, _)| r > br) {
            best = Some((r, t));
        }
    }
    Ok(best.expect("internal node has children").1)
}

/// One protocol round in a mechanical replay.
#[derive(Clone, Debug)]
pub struct SimRound {
    pub state: NodeId,
    pub bid1: BigRational,
    pub bid2: BigRational,
    pub winner: Player,
    pub child: NodeId,
    /// Budgets after the winner pays the loser.
    pub budgets_after: (BigRational, BigRational),
}

/// Replays a bid script from the root with initial White budget `b1` (total
/// 1): each round the higher bid (ties per `tie`) wins, pays the loser, and
/// moves to the scripted child. No equilibrium logic; the script must end
/// exactly at a terminal.
pub fn simulate(
    game: &BiddingGame,
    b1: &BigRational,
    script: &[(BigRational, BigRational, NodeId)],
    tie: &TieBreak,
) -> Result<Vec<SimRound>, SolverError> {
    let mut state = game.root();
    let mut budget1 = b1.clone();
    let mut budget2 = BigRational::one() - b1;
    if budget1.is_negative() || budget2.is_negative() {
        return Err(SolverError::OffGrid(format!("budget {b1} outside [0, 1]")));
    }
    let mut trace = Vec::new();
    for (round, (bid1, bid2, child)) in script.iter().enumerate() {
        if game.is_terminal(state) {
            return Err(SolverError::WrongLength);
        }
        if bid1.is_negative() || bid1 > &budget1 || bid2.is_negative() || bid2 > &budget2 {
            return Err(SolverError::InfeasibleBid { round });
        }
        if !game.children(state).contains(child) {
            return Err(SolverError::InfeasibleBid { round });
        }
        let winner = match bid1.cmp(bid2) {
            std::cmp::Ordering::Greater => Player::White,
            std::cmp::Ordering::Less => Player::Black,
            std::cmp::Ordering::Equal => tie.at(state),
        };
        match winner {
            Player::White => {
                budget1 -= bid1;
                budget2 += bid1;
            }
            Player::Black => {
                budget1 += bid2;
                budget2 -= bid2;
            }
        }
        trace.push(SimRound {
            state,
            bid1: bid1.clone(),
            bid2: bid2.clone(),
            winner,
            child: *child,
            budgets_after: (budget1.clone(), budget2.clone()),
        });
        state = *child;
    }
    if !game.is_terminal(state) {
        return Err(SolverError::WrongLength);
    }
    Ok(trace)
}

/// One equilibrium round extracted from solved tables.
#[derive(Clone, Debug)]
pub struct PlayRound {
    pub state: NodeId,
    pub bid1: Dyadic,
    pub bid2: Dyadic,
    pub winner: Player,
    pub child: NodeId,
    /// White's budget cell after payment.
    pub white_after: Dyadic,
}

/// Follows both players' table strategies from the root at White budget
/// `b1`; the trace ends at the outcome-map terminal for `b1`.
pub fn play(
    game: &BiddingGame,
    tables: &StrategyTables,
    b1: &Dyadic,
) -> Result<Vec<PlayRound>, SolverError> {
    let mut cell = tables
        .cell_of(b1)
        .ok_or_else(|| SolverError::OffGrid(format!("budget {b1} not on the grid")))?;
    let mut state = game.root();
    let mut trace = Vec::new();
    while !game.is_terminal(state) {
        let (u1, child1) = tables.white_action(state, cell);
        let (u2, child2) = tables.black_action(state, cell);
        let winner = auction_winner(&tables.tie, state, u1, u2);
        let (child, next_cell) = match winner {
            Player::White => (child1, cell - u1),
            Player::Black => (child2, cell + u2),
        };
        trace.push(PlayRound {
            state,
            bid1: tables.bid_to_dyadic(u1),
            bid2: tables.bid_to_dyadic(u2),
            winner,
            child,
            white_after: tables.bid_to_dyadic(next_cell),
        });
        state = child;
        cell = next_cell;
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compilers::{compile_additive, fixture, Fixture, SsaSpec};
    use num::Zero;

    fn solve(game: &BiddingGame) -> (StrategyTables, OutcomeMap) {
        find_lower_pspe_grid(game, &GridConfig::default()).unwrap()
    }

    fn dy(num: i64, scale: u32) -> Dyadic {
        Dyadic::new(num, scale)
    }

    fn pair_of(game: &BiddingGame, t: NodeId) -> (i64, i64) {
        let (u1, u2) = game.utilities(t).unwrap();
        let to_int = |u: &crate::game::Utility| {
            assert!(u.is_integer());
            i64::try_from(u.to_integer()).unwrap()
        };
        (to_int(u1), to_int(u2))
    }

    #[test]
    fn gbad_outcome_map_matches_known_intervals() {
        let g = fixture(Fixture::GBad);
        assert_eq!(g.height(), 3);
        let (_, mu) = solve(&g);
        // Exact interval structure at epsilon = 1/32.
        assert_eq!(mu.total, Dyadic::one());
        let got: Vec<((i64, i64), Dyadic)> = mu
            .outcomes
            .iter()
            .zip(&mu.cutoffs)
            .map(|(&t, c)| (pair_of(&g, t), c.clone()))
            .collect();
        assert_eq!(
            got,
            vec![
                ((0, 9), Dyadic::zero()),
                ((1, 8), dy(12, 5)),
                ((2, 1), dy(16, 5)),
                ((10, 7), dy(28, 5)),
            ]
        );
        // Spot checks from the interval map.
        assert_eq!(pair_of(&g, mu.eval(&dy(4, 5))), (0, 9)); // B1 = 1/8
        assert_eq!(
            pair_of(&g, mu.eval_rat(&BigRational::new(4.into(), 5.into()))),
            (2, 1)
        ); // B1 = 0.8
        assert_eq!(pair_of(&g, mu.eval(&Dyadic::one())), (10, 7)); // B2 = 0
    }

    #[test]
    fn gtwo_equal_budgets_reach_five_five() {
        let g = fixture(Fixture::GTwo);
        let (tables, mu) = solve(&g);
        let half = dy(1, 1);
        assert_eq!(pair_of(&g, mu.eval(&half)), (5, 5));
        // The equilibrium path at 0.5 ends in the same terminal.
        let trace = play(&g, &tables, &half).unwrap();
        let last = trace.last().unwrap();
        assert_eq!(pair_of(&g, last.child), (5, 5));
    }

    #[test]
    fn gmaj_threshold_at_one_half() {
        let g = fixture(Fixture::GMaj);
        let (_, mu) = solve(&g);
        // White wins at exactly 1/2 (tie rule) and above; Black below.
        assert_eq!(pair_of(&g, mu.eval(&dy(1, 1))).0, 1);
        assert_eq!(pair_of(&g, mu.eval(&Dyadic::one())).0, 1);
        assert_eq!(pair_of(&g, mu.eval(&dy(15, 5))).0, 0);
        assert_eq!(pair_of(&g, mu.eval(&Dyadic::zero())).0, 0);
    }

    #[test]
    fn discrete_power_of_two_matches_continuous() {
        let g = fixture(Fixture::GMaj);
        let (ct, _) = solve(&g); // units = 2^5
        let (dt, _) = find_lower_pspe_grid(&g, &GridConfig::discrete(32)).unwrap();
        assert_eq!(ct.units(), dt.units());
        for s in 0..g.num_nodes() {
            for c in 0..=32 {
                assert_eq!(ct.t_star(s, c), dt.t_star(s, c));
                if !g.is_terminal(s) {
                    assert_eq!(ct.white_action(s, c), dt.white_action(s, c));
                    assert_eq!(ct.black_action(s, c), dt.black_action(s, c));
                }
            }
        }
    }

    #[test]
    fn play_agrees_with_outcome_map_everywhere() {
        for f in [Fixture::GMaj, Fixture::GBad, Fixture::GTwo, Fixture::Gk(3)] {
            let g = fixture(f);
            let (tables, mu) = solve(&g);
            for c in 0..=tables.units() {
                let b = tables.bid_to_dyadic(c);
                let trace = play(&g, &tables, &b).unwrap();
                let end = trace.last().map_or(g.root(), |r| r.child);
                assert_eq!(end, mu.eval(&b), "fixture {f:?} cell {c}");
            }
        }
    }

    #[test]
    fn get_outcome_handles_rational_bids() {
        let g = fixture(Fixture::GMaj);
        let (tables, _) = solve(&g);
        let rat = |p: i64, q: i64| BigRational::new(p.into(), q.into());
        // Root with budget 0.5: bids (0.2, 0.15) -> White wins, moves to
        // node 1 at budget 0.3; the result must match T* there.
        let t = get_outcome(&g, &tables, g.root(), &rat(1, 2), &rat(1, 5), &rat(3, 20)).unwrap();
        let cell = tables.cell_of_rational(&rat(3, 10)).unwrap();
        let expect = tables.t_star(1, cell);
        assert_eq!(t, expect);
        // Tie goes to White.
        let mut b = crate::game::GameBuilder::new();
        let root = b.add_internal(vec![1, 2]);
        b.add_terminal_int(3, 0);
        b.add_terminal_int(0, 5);
        b.set_root(root);
        let g = b.build().unwrap();
        let (tables, _) = solve(&g);
        let t = get_outcome(&g, &tables, root, &rat(1, 2), &rat(1, 2), &rat(1, 2)).unwrap();
        assert_eq!(pair_of(&g, t), (3, 0));
        let t = get_outcome(&g, &tables, root, &rat(1, 2), &rat(0, 1), &rat(1, 4)).unwrap();
        assert_eq!(pair_of(&g, t), (0, 5));
        // Bid above budget is rejected.
        assert!(matches!(
            get_outcome(&g, &tables, root, &rat(1, 2), &rat(3, 4), &rat(0, 1)),
            Err(SolverError::OffGrid(_))
        ));
    }

    #[test]
    fn simulate_replays_documented_majority_play() {
        let g = fixture(Fixture::GMaj);
        let rat = |p: i64, q: i64| BigRational::new(p.into(), q.into());
        let script = vec![
            (rat(1, 5), rat(3, 20), 1),    // (0.2, 0.15) -> White moves
            (rat(7, 50), rat(13, 50), 4),  // (0.14, 0.26) -> Black moves
            (rat(14, 25), rat(11, 25), 6), // (0.56, 0.44) -> White wins the game
        ];
        let trace = simulate(&g, &rat(1, 2), &script, &TieBreak::white()).unwrap();
        assert_eq!(trace.len(), 3);
        assert_eq!(trace[1].budgets_after, (rat(14, 25), rat(11, 25)));
        let last = &trace[2];
        assert_eq!(last.child, 6);
        assert_eq!(pair_of(&g, last.child), (1, 0));
        assert_eq!(last.budgets_after, (rat(0, 1), rat(1, 1)));
        // Wrong lengths are rejected.
        assert_eq!(
            simulate(&g, &rat(1, 2), &script[..2], &TieBreak::white()).unwrap_err(),
            SolverError::WrongLength
        );
        let mut long = script.clone();
        long.push((rat(0, 1), rat(0, 1), 6));
        assert_eq!(
            simulate(&g, &rat(1, 2), &long, &TieBreak::white()).unwrap_err(),
            SolverError::WrongLength
        );
        // Infeasible bids are rejected with the round index.
        let bad = vec![(rat(3, 4), rat(0, 1), 1)];
        assert_eq!(
            simulate(&g, &rat(1, 2), &bad, &TieBreak::white()).unwrap_err(),
            SolverError::InfeasibleBid { round: 0 }
        );
    }

    #[test]
    fn zero_bids_let_white_walk_the_tree() {
        let g = fixture(Fixture::GMaj);
        let zero = BigRational::zero();
        // White moves every round on ties: (0,0) -> (1,0) -> (2,0).
        let script = vec![
            (zero.clone(), zero.clone(), 1),
            (zero.clone(), zero.clone(), 3),
        ];
        let trace = simulate(&g, &BigRational::new(1.into(), 2.into()), &script, &TieBreak::white())
            .unwrap();
        assert!(trace.iter().all(|r| r.winner == Player::White));
        assert_eq!(pair_of(&g, trace.last().unwrap().child), (1, 0));
    }

    #[test]
    fn epsilon_must_be_unit_dyadic() {
        let g = fixture(Fixture::GTwo);
        let cfg = GridConfig::with_epsilon(dy(3, 5));
        assert_eq!(
            find_lower_pspe_grid(&g, &cfg).unwrap_err(),
            SolverError::InvalidEpsilon
        );
        let cfg = GridConfig::with_epsilon(dy(1, 4));
        let (tables, _) = find_lower_pspe_grid(&g, &cfg).unwrap();
        assert_eq!(tables.units(), 16);
    }

    #[test]
    fn grid_cap_enforced() {
        let spec = SsaSpec::identical_items(12);
        let g = compile_additive(&spec).unwrap();
        // height 12 -> units 2^14; 91 nodes -> ~1.5M cells: fine.
        let cells = (1u64 << 14) + 1;
        assert!(cells * g.num_nodes() as u64 <= CELL_CAP);
        let cfg = GridConfig::with_epsilon(Dyadic::unit(22));
        assert!(matches!(
            find_lower_pspe_grid(&g, &cfg),
            Err(SolverError::GridTooLarge { .. })
        ));
    }

    #[test]
    fn single_terminal_game_has_trivial_tables() {
        let mut b = crate::game::GameBuilder::new();
        let t = b.add_terminal_int(4, 7);
        b.set_root(t);
        let g = b.build().unwrap();
        let (tables, mu) = solve(&g);
        assert_eq!(mu.outcomes, vec![t]);
        assert_eq!(mu.cutoffs, vec![Dyadic::zero()]);
        assert!(play(&g, &tables, &dy(1, 1)).unwrap().is_empty());
    }

    #[test]
    fn per_state_ties_change_the_winner() {
        // Single auction over (3,0) vs (0,5), all budgets: with White-favored
        // ties White wins at exactly half; Black-favored flips that cell.
        let mut b = crate::game::GameBuilder::new();
        let root = b.add_internal(vec![1, 2]);
        b.add_terminal_int(3, 0);
        b.add_terminal_int(0, 5);
        b.set_root(root);
        let g = b.build().unwrap();
        let (_, mu_white) = solve(&g);
        let mut cfg = GridConfig::default();
        cfg.tie_break = TieBreak::Global(Player::Black);
        let (_, mu_black) = find_lower_pspe_grid(&g, &cfg).unwrap();
        let half = dy(1, 1);
        assert_eq!(pair_of(&g, mu_white.eval(&half)), (3, 0));
        assert_eq!(pair_of(&g, mu_black.eval(&half)), (0, 5));
        // Away from the boundary the tie rule is irrelevant.
        assert_eq!(
            pair_of(&g, mu_white.eval(&dy(3, 2))),
            pair_of(&g, mu_black.eval(&dy(3, 2)))
        );
    }

    #[test]
    fn additive_identical_items_equal_budget_play() {
        // Four identical items at budget 1/2 each (grid 1/64): Black concedes
        // the first item for one grid unit, White locks items 2 and 3 in
        // bidding wars, Black takes the last item from White's depleted
        // budget. Final split (2,2). Cross-checked against an independent
        // full enumeration of cell-game equilibria.
        let spec = SsaSpec::identical_items(4);
        let g = compile_additive(&spec).unwrap();
        let (tables, mu) = solve(&g);
        let half = Dyadic::new(1, 1);
        let trace = play(&g, &tables, &half).unwrap();
        assert_eq!(trace.len(), 4);
        let rounds: Vec<(Player, Dyadic)> = trace
            .iter()
            .map(|r| {
                let bid = match r.winner {
                    Player::White => r.bid1.clone(),
                    Player::Black => r.bid2.clone(),
                };
                (r.winner, bid)
            })
            .collect();
        assert_eq!(
            rounds,
            vec![
                (Player::Black, dy(1, 6)),
                (Player::White, dy(14, 6)),
                (Player::White, dy(12, 6)),
                (Player::Black, dy(8, 6)),
            ]
        );
        assert_eq!(pair_of(&g, mu.eval(&half)), (2, 2));
    }
}
