//! Critical-budget ("Richman") values for zero-sum win/lose bidding games,
//! plus the satisfaction-rank machinery used to audit allocation fairness.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};

use crate::dyadic::Dyadic;
use crate::game::{BiddingGame, NodeId, OutcomeMap, Player, Utility};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RichmanError {
    #[error("game graph is cyclic: {path:?}")]
    Cyclic { path: Vec<u64> },
    #[error("node {id} has no moves but no win label")]
    UnlabeledTerminal { id: u64 },
    #[error("game is not a full binary tree with all terminals at one depth")]
    NotFullBinary,
    #[error("move references unknown node {id}")]
    DanglingChild { id: u64 },
    #[error("duplicate node id {id}")]
    DuplicateId { id: u64 },
    #[error("no root specified")]
    NoRoot,
    #[error("invalid game file: {0}")]
    Format(String),
}

/// A zero-sum win/lose bidding game: a DAG where each player has their own
/// move list at every internal node and terminals name the winner.
#[derive(Clone, Debug)]
pub struct ZeroSumGame {
    root: NodeId,
    white_moves: Vec<Vec<NodeId>>,
    black_moves: Vec<Vec<NodeId>>,
    winner: Vec<Option<Player>>,
    labels: Vec<Option<String>>,
    external_ids: Vec<u64>,
    external_index: BTreeMap<u64, NodeId>,
    /// Children-first topological order over all nodes.
    topo: Vec<NodeId>,
}

impl ZeroSumGame {
    /// Builds and validates a game. `winner[s]` must be `Some` exactly at
    /// nodes with no moves; every internal node needs a move for each player.
    pub fn new(
        root: NodeId,
        white_moves: Vec<Vec<NodeId>>,
        black_moves: Vec<Vec<NodeId>>,
        winner: Vec<Option<Player>>,
        labels: Vec<Option<String>>,
        external_ids: Option<Vec<u64>>,
    ) -> Result<Self, RichmanError> {
        let n = white_moves.len();
        if black_moves.len() != n || winner.len() != n || labels.len() != n {
            return Err(RichmanError::Format("node arrays differ in length".into()));
        }
        let external_ids =
            external_ids.unwrap_or_else(|| (0..n as u64).collect());
        if external_ids.len() != n {
            return Err(RichmanError::Format("external id array differs in length".into()));
        }
        let mut external_index = BTreeMap::new();
        for (i, &e) in external_ids.iter().enumerate() {
            if external_index.insert(e, i).is_some() {
                return Err(RichmanError::DuplicateId { id: e });
            }
        }
        if root >= n {
            return Err(RichmanError::DanglingChild { id: root as u64 });
        }
        for s in 0..n {
            for &c in white_moves[s].iter().chain(&black_moves[s]) {
                if c >= n {
                    return Err(RichmanError::DanglingChild { id: c as u64 });
                }
            }
            let has_moves = !white_moves[s].is_empty() || !black_moves[s].is_empty();
            match winner[s] {
                Some(_) if has_moves => {
                    return Err(RichmanError::Format(format!(
                        "node {} is labeled but has moves",
                        external_ids[s]
                    )))
                }
                None if !has_moves => {
                    return Err(RichmanError::UnlabeledTerminal { id: external_ids[s] })
                }
                None if white_moves[s].is_empty() || black_moves[s].is_empty() => {
                    return Err(RichmanError::UnlabeledTerminal { id: external_ids[s] })
                }
                _ => {}
            }
        }
        let topo = toposort(n, &white_moves, &black_moves, &external_ids)?;
        Ok(ZeroSumGame {
            root,
            white_moves,
            black_moves,
            winner,
            labels,
            external_ids,
            external_index,
            topo,
        })
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn num_nodes(&self) -> usize {
        self.white_moves.len()
    }

    pub fn moves(&self, player: Player, s: NodeId) -> &[NodeId] {
        match player {
            Player::White => &self.white_moves[s],
            Player::Black => &self.black_moves[s],
        }
    }

    pub fn is_terminal(&self, s: NodeId) -> bool {
        self.winner[s].is_some()
    }

    pub fn winner(&self, s: NodeId) -> Option<Player> {
        self.winner[s]
    }

    pub fn label(&self, s: NodeId) -> Option<&str> {
        self.labels[s].as_deref()
    }

    pub fn external_id(&self, s: NodeId) -> u64 {
        self.external_ids[s]
    }

    pub fn find_external(&self, ext: u64) -> Option<NodeId> {
        self.external_index.get(&ext).copied()
    }

    /// Parses `{"root", "nodes": [{"id", "white_moves", "black_moves",
    /// "label"?}], "terminals": {"id": "white"|"black"}}`.
    pub fn from_json_str(s: &str) -> Result<Self, RichmanError> {
        let bad = |m: String| RichmanError::Format(m);
        let v: serde_json::Value =
            serde_json::from_str(s).map_err(|e| bad(e.to_string()))?;
        let obj = v
            .as_object()
            .ok_or_else(|| bad("top level must be an object".into()))?;
        for key in obj.keys() {
            if !matches!(key.as_str(), "root" | "nodes" | "terminals") {
                return Err(bad(format!("unknown key {key:?}")));
            }
        }
        let root_ext = obj
            .get("root")
            .and_then(|r| r.as_u64())
            .ok_or(RichmanError::NoRoot)?;
        let nodes = obj
            .get("nodes")
            .and_then(|c| c.as_array())
            .ok_or_else(|| bad("missing \"nodes\" array".into()))?;
        let terminals = obj
            .get("terminals")
            .and_then(|t| t.as_object())
            .ok_or_else(|| bad("missing \"terminals\" object".into()))?;

        // First pass: collect external ids in file order.
        let mut ext_ids: Vec<u64> = Vec::new();
        let mut raw: Vec<(u64, Vec<u64>, Vec<u64>, Option<String>)> = Vec::new();
        for node in nodes {
            let node = node
                .as_object()
                .ok_or_else(|| bad("node entries must be objects".into()))?;
            for key in node.keys() {
                if !matches!(key.as_str(), "id" | "white_moves" | "black_moves" | "label") {
                    return Err(bad(format!("unknown node key {key:?}")));
                }
            }
            let id = node
                .get("id")
                .and_then(|i| i.as_u64())
                .ok_or_else(|| bad("node missing integer \"id\"".into()))?;
            let get_moves = |key: &str| -> Result<Vec<u64>, RichmanError> {
                node.get(key)
                    .and_then(|m| m.as_array())
                    .ok_or_else(|| bad(format!("node {id} missing {key:?} array")))?
                    .iter()
                    .map(|c| c.as_u64().ok_or_else(|| bad(format!("bad move id {c}"))))
                    .collect()
            };
            let white = get_moves("white_moves")?;
            let black = get_moves("black_moves")?;
            let label = match node.get("label") {
                None => None,
                Some(l) => Some(
                    l.as_str()
                        .ok_or_else(|| bad("label must be a string".into()))?
                        .to_string(),
                ),
            };
            ext_ids.push(id);
            raw.push((id, white, black, label));
        }
        let mut term_ids: Vec<(u64, Player)> = Vec::new();
        for (id, w) in terminals {
            let id: u64 = id
                .parse()
                .map_err(|_| bad(format!("bad terminal id {id:?}")))?;
            let winner = match w.as_str() {
                Some("white") => Player::White,
                Some("black") => Player::Black,
                _ => return Err(bad(format!("terminal {id} winner must be \"white\" or \"black\""))),
            };
            ext_ids.push(id);
            term_ids.push((id, winner));
        }
        let mut index: BTreeMap<u64, NodeId> = BTreeMap::new();
        for (i, &e) in ext_ids.iter().enumerate() {
            if index.insert(e, i).is_some() {
                return Err(RichmanError::DuplicateId { id: e });
            }
        }
        let n = ext_ids.len();
        let mut white_moves = vec![Vec::new(); n];
        let mut black_moves = vec![Vec::new(); n];
        let mut winner = vec![None; n];
        let mut labels = vec![None; n];
        for (i, (_id, white, black, label)) in raw.into_iter().enumerate() {
            let resolve = |ids: Vec<u64>| -> Result<Vec<NodeId>, RichmanError> {
                ids.into_iter()
                    .map(|c| {
                        index
                            .get(&c)
                            .copied()
                            .ok_or(RichmanError::DanglingChild { id: c })
                    })
                    .collect()
            };
            white_moves[i] = resolve(white)?;
            black_moves[i] = resolve(black)?;
            labels[i] = label;
        }
        for (id, w) in term_ids {
            winner[index[&id]] = Some(w);
        }
        let root = *index
            .get(&root_ext)
            .ok_or(RichmanError::DanglingChild { id: root_ext })?;
        ZeroSumGame::new(root, white_moves, black_moves, winner, labels, Some(ext_ids))
    }

    /// Deterministic writer; inverse of [`ZeroSumGame::from_json_str`].
    pub fn to_json_string(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n");
        out.push_str(&format!("  \"root\": {},\n", self.external_ids[self.root]));
        out.push_str("  \"nodes\": [\n");
        let mut internal: Vec<NodeId> = (0..self.num_nodes())
            .filter(|&s| !self.is_terminal(s))
            .collect();
        internal.sort_by_key(|&s| self.external_ids[s]);
        for (i, &s) in internal.iter().enumerate() {
            let fmt_moves = |moves: &[NodeId]| {
                moves
                    .iter()
                    .map(|&c| self.external_ids[c].to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            out.push_str(&format!(
                "    {{\"id\": {}, \"white_moves\": [{}], \"black_moves\": [{}]",
                self.external_ids[s],
                fmt_moves(&self.white_moves[s]),
                fmt_moves(&self.black_moves[s]),
            ));
            if let Some(l) = &self.labels[s] {
                out.push_str(&format!(
                    ", \"label\": {}",
                    serde_json::Value::String(l.clone())
                ));
            }
            out.push('}');
            if i + 1 < internal.len() {
                out.push(',');
            }
            out.push('\n');
        }
        out.push_str("  ],\n");
        out.push_str("  \"terminals\": {\n");
        let mut terms: Vec<NodeId> = (0..self.num_nodes())
            .filter(|&s| self.is_terminal(s))
            .collect();
        terms.sort_by_key(|&s| self.external_ids[s]);
        for (i, &s) in terms.iter().enumerate() {
            out.push_str(&format!(
                "    \"{}\": \"{}\"",
                self.external_ids[s],
                self.winner[s].unwrap()
            ));
            if i + 1 < terms.len() {
                out.push(',');
            }
            out.push('\n');
        }
        out.push_str("  }\n}\n");
        out
    }
}

fn toposort(
    n: usize,
    white: &[Vec<NodeId>],
    black: &[Vec<NodeId>],
    ext: &[u64],
) -> Result<Vec<NodeId>, RichmanError> {
    // Iterative children-first DFS with an explicit stack; grey nodes on the
    // stack witness any cycle.
    let mut color = vec![0u8; n]; // 0 white, 1 grey, 2 black
    let mut order = Vec::with_capacity(n);
    for start in 0..n {
        if color[start] != 0 {
            continue;
        }
        let mut stack: Vec<(NodeId, usize)> = vec![(start, 0)];
        color[start] = 1;
        while let Some(&mut (s, ref mut next)) = stack.last_mut() {
            let kids: Vec<NodeId> = white[s]
                .iter()
                .chain(&black[s])
                .copied()
                .collect();
            if *next < kids.len() {
                let c = kids[*next];
                *next += 1;
                match color[c] {
                    0 => {
                        color[c] = 1;
                        stack.push((c, 0));
                    }
                    1 => {
                        let mut path: Vec<u64> =
                            stack.iter().map(|&(s, _)| ext[s]).collect();
                        let pos = stack.iter().position(|&(s, _)| s == c).unwrap();
                        path.drain(..pos);
                        path.push(ext[c]);
                        return Err(RichmanError::Cyclic { path });
                    }
                    _ => {}
                }
            } else {
                color[s] = 2;
                order.push(s);
                stack.pop();
            }
        }
    }
    Ok(order)
}

/// Exact critical-budget values per node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RichmanValues {
    values: Vec<BigRational>,
}

impl RichmanValues {
    pub fn at(&self, s: NodeId) -> &BigRational {
        &self.values[s]
    }

    pub fn root_value<'a>(&'a self, game: &ZeroSumGame) -> &'a BigRational {
        &self.values[game.root()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, &BigRational)> {
        self.values.iter().enumerate()
    }
}

/// Backward induction for the critical budget R(s): 0 at white-win
/// terminals, 1 at black-win terminals, and at internal nodes the average of
/// White's best (minimal) and Black's best (maximal) successor values.
/// `B_1 > R(root)` guarantees a White win.
pub fn richman_values(game: &ZeroSumGame) -> Result<RichmanValues, RichmanError> {
    let n = game.num_nodes();
    let mut values = vec![BigRational::zero(); n];
    for &s in &game.topo {
        values[s] = match game.winner(s) {
            Some(Player::White) => BigRational::zero(),
            Some(Player::Black) => BigRational::one(),
            None => {
                let lo = game
                    .moves(Player::White, s)
                    .iter()
                    .map(|&c| &values[c])
                    .min()
                    .expect("validated: internal nodes have white moves")
                    .clone();
                let hi = game
                    .moves(Player::Black, s)
                    .iter()
                    .map(|&c| &values[c])
                    .max()
                    .expect("validated: internal nodes have black moves")
                    .clone();
                (lo + hi) / BigRational::from_integer(BigInt::from(2))
            }
        };
    }
    Ok(RichmanValues { values })
}

/// Number of terminals `player` weakly disprefers to `t` (their own utility
/// only, `t` itself included). Panics if `t` is not a terminal.
pub fn satisfaction_rank(game: &BiddingGame, t: NodeId, player: Player) -> usize {
    let mine = own_utility(game, t, player);
    game.terminals()
        .iter()
        .filter(|&&q| own_utility(game, q, player) <= mine)
        .count()
}

fn own_utility(game: &BiddingGame, t: NodeId, player: Player) -> &Utility {
    let (u1, u2) = game
        .utilities(t)
        .expect("satisfaction rank requires a terminal");
    match player {
        Player::White => u1,
        Player::Black => u2,
    }
}

/// Relabels a general-sum game as win/lose for `player`: a terminal is a win
/// iff the player weakly prefers it to at least `m` terminals. Moves are the
/// original children for both sides.
pub fn to_win_lose(game: &BiddingGame, player: Player, m: usize) -> ZeroSumGame {
    let n = game.num_nodes();
    let mut white_moves = vec![Vec::new(); n];
    let mut black_moves = vec![Vec::new(); n];
    let mut winner = vec![None; n];
    let mut labels = vec![None; n];
    let mut ext = vec![0u64; n];
    for s in 0..n {
        ext[s] = game.external_id(s);
        labels[s] = game.label(s).map(str::to_string);
        if game.is_terminal(s) {
            let wins = satisfaction_rank(game, s, player) >= m;
            winner[s] = Some(if wins { player } else { player.other() });
        } else {
            white_moves[s] = game.children(s).to_vec();
            black_moves[s] = game.children(s).to_vec();
        }
    }
    ZeroSumGame::new(game.root(), white_moves, black_moves, winner, labels, Some(ext))
        .expect("valid games relabel to valid zero-sum games")
}

/// One failed satisfaction bound in an [`MstReport`].
#[derive(Clone, Debug, serde::Serialize)]
pub struct MstViolation {
    pub interval: usize,
    /// Interval bounds [low, high) (the last interval is closed).
    pub low: Dyadic,
    pub high: Dyadic,
    /// External id of the interval's outcome terminal.
    pub terminal: u64,
    pub player: Player,
    pub required: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct MstReport {
    pub intervals: usize,
    pub violations: Vec<MstViolation>,
}

impl MstReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Audits an outcome map against the satisfaction bounds: on a full binary
/// tree (every internal node two children, all terminals at one depth), the
/// outcome at budget split (B1, B2) must rank at least ⌈B1·|T|⌉ for White and
/// ⌈B2·|T|⌉ for Black. Each interval is checked at its binding budgets: the
/// supremum end for White, the closed lower end for Black.
pub fn mst_check(game: &BiddingGame, mu: &OutcomeMap) -> Result<MstReport, RichmanError> {
    check_full_binary_tree(game)?;
    let t_count = game.terminals().len();
    let t_big = BigInt::from(t_count);
    // Cache each player's sorted terminal utilities for rank counting.
    let rank_of = |t: NodeId, player: Player| satisfaction_rank(game, t, player);
    let mut violations = Vec::new();
    let n = mu.len();
    for i in 0..n {
        let low = mu.cutoffs[i].clone();
        let high = if i + 1 == n { mu.total.clone() } else { mu.cutoffs[i + 1].clone() };
        let t = mu.outcomes[i];
        // White's bound is largest approaching the upper end: for B1 in
        // [low, high), sup ⌈B1·|T|⌉ = high·|T| when integral (attained just
        // below high) else ⌈high·|T|⌉; the closed last interval attains it
        // at high itself.
        let hi_scaled = high.to_rational() * BigRational::from_integer(t_big.clone());
        let white_req = ceil_rational(&hi_scaled);
        // Black's bound binds at the closed lower end: B2 = total - low.
        let lo_scaled =
            (&mu.total - &low).to_rational() * BigRational::from_integer(t_big.clone());
        let black_req = ceil_rational(&lo_scaled);
        for (player, req) in [(Player::White, white_req), (Player::Black, black_req)] {
            let req = usize::try_from(req.max(BigInt::zero())).unwrap_or(usize::MAX);
            let rank = rank_of(t, player);
            if rank < req {
                violations.push(MstViolation {
                    interval: i,
                    low: low.clone(),
                    high: high.clone(),
                    terminal: game.external_id(t),
                    player,
                    required: req,
                    rank,
                });
            }
        }
    }
    Ok(MstReport { intervals: n, violations })
}

/// ⌈x⌉ for an exact rational.
fn ceil_rational(x: &BigRational) -> BigInt {
    x.ceil().to_integer()
}

fn check_full_binary_tree(game: &BiddingGame) -> Result<(), RichmanError> {
    // Tree: every node except the root has exactly one parent.
    let n = game.num_nodes();
    let mut parents = vec![0u32; n];
    for s in 0..n {
        for &c in game.children(s) {
            parents[c] += 1;
        }
    }
    for s in 0..n {
        let expected = u32::from(s != game.root());
        if parents[s] != expected {
            return Err(RichmanError::NotFullBinary);
        }
    }
    // Full and uniform-depth: internal nodes have two children and both
    // subtrees the same height.
    for s in 0..n {
        let kids = game.children(s);
        if kids.is_empty() {
            continue;
        }
        if kids.len() != 2 {
            return Err(RichmanError::NotFullBinary);
        }
        if game.height_of(kids[0]) != game.height_of(kids[1]) {
            return Err(RichmanError::NotFullBinary);
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Bidding Tic-Tac-Toe
// ---------------------------------------------------------------------------

const TTT_LINES: [u16; 8] = [
    0b000_000_111,
    0b000_111_000,
    0b111_000_000,
    0b001_001_001,
    0b010_010_010,
    0b100_100_100,
    0b100_010_001,
    0b001_010_100,
];

const TTT_FULL: u16 = 0b111_111_111;

fn ttt_winner(x: u16, o: u16) -> Option<Player> {
    if TTT_LINES.iter().any(|&l| x & l == l) {
        Some(Player::White)
    } else if TTT_LINES.iter().any(|&l| o & l == l) {
        Some(Player::Black)
    } else if x | o == TTT_FULL {
        // Draws count as Black wins: the value computed is the budget White
        // needs to guarantee an outright victory.
        Some(Player::Black)
    } else {
        None
    }
}

fn ttt_label(x: u16, o: u16) -> String {
    (0..9)
        .map(|i| {
            if x >> i & 1 == 1 {
                'x'
            } else if o >> i & 1 == 1 {
                'o'
            } else {
                '.'
            }
        })
        .collect()
}

/// Bidding Tic-Tac-Toe as a zero-sum game: states are board positions, each
/// player's moves place their own mark, and unfinished full boards count as
/// Black wins.
pub fn tictactoe() -> ZeroSumGame {
    // Enumerate reachable states (play stops at wins), then materialize with
    // ids in sorted (x, o) order for a deterministic game file.
    let mut seen = std::collections::BTreeSet::new();
    let mut frontier = vec![(0u16, 0u16)];
    seen.insert((0u16, 0u16));
    while let Some((x, o)) = frontier.pop() {
        if ttt_winner(x, o).is_some() {
            continue;
        }
        for i in 0..9 {
            let bit = 1u16 << i;
            if (x | o) & bit != 0 {
                continue;
            }
            for next in [(x | bit, o), (x, o | bit)] {
                if seen.insert(next) {
                    frontier.push(next);
                }
            }
        }
    }
    let states: Vec<(u16, u16)> = seen.into_iter().collect();
    let index: BTreeMap<(u16, u16), NodeId> =
        states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let n = states.len();
    let mut white_moves = vec![Vec::new(); n];
    let mut black_moves = vec![Vec::new(); n];
    let mut winner = vec![None; n];
    let mut labels = vec![None; n];
    for (i, &(x, o)) in states.iter().enumerate() {
        labels[i] = Some(ttt_label(x, o));
        if let Some(w) = ttt_winner(x, o) {
            winner[i] = Some(w);
            continue;
        }
        for bit in (0..9).map(|i| 1u16 << i) {
            if (x | o) & bit != 0 {
                continue;
            }
            white_moves[i].push(index[&(x | bit, o)]);
            black_moves[i].push(index[&(x, o | bit)]);
        }
    }
    ZeroSumGame::new(index[&(0, 0)], white_moves, black_moves, winner, labels, None)
        .expect("generated board graph is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compilers::{fixture, pad_to_balanced, Fixture};
    use crate::game::utility;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    fn majority_game() -> ZeroSumGame {
        to_win_lose(&fixture(Fixture::GMaj), Player::White, 3)
    }

    #[test]
    fn majority_values() {
        let zs = majority_game();
        let r = richman_values(&zs).unwrap();
        assert_eq!(r.at(zs.root()), &rat(1, 2));
        assert_eq!(r.at(1), &rat(1, 4)); // after one White round win
        assert_eq!(r.at(2), &rat(3, 4)); // after one Black round win
        assert_eq!(r.at(3), &rat(0, 1));
        assert_eq!(r.at(5), &rat(1, 1));
    }

    #[test]
    fn values_stay_in_unit_interval() {
        let zs = majority_game();
        let r = richman_values(&zs).unwrap();
        for (_, v) in r.iter() {
            assert!(*v >= rat(0, 1) && *v <= rat(1, 1));
        }
    }

    #[test]
    fn asymmetric_moves_respected() {
        // White may only move to a losing node; Black may only move to a
        // White win. R = (1 + 0)/2 = 1/2 even though the node sets differ.
        let zs = ZeroSumGame::new(
            0,
            vec![vec![1], vec![], vec![]],
            vec![vec![2], vec![], vec![]],
            vec![None, Some(Player::Black), Some(Player::White)],
            vec![None, None, None],
            None,
        )
        .unwrap();
        let r = richman_values(&zs).unwrap();
        assert_eq!(r.at(0), &rat(1, 2));
    }

    #[test]
    fn satisfaction_ranks_count_weak_preferences() {
        let g = fixture(Fixture::GBad);
        // Terminals: 1:(1,8), 2:(2,1), 4:(0,9), 6:(0,9), 7:(10,7).
        assert_eq!(satisfaction_rank(&g, 1, Player::Black), 3);
        assert_eq!(satisfaction_rank(&g, 7, Player::White), 5);
        assert_eq!(satisfaction_rank(&g, 2, Player::Black), 1);
        // Equal utilities count each other.
        assert_eq!(satisfaction_rank(&g, 4, Player::White), 2);
        assert_eq!(satisfaction_rank(&g, 4, Player::Black), 5);
    }

    #[test]
    fn win_lose_thresholds() {
        let g = fixture(Fixture::GBad);
        let all = to_win_lose(&g, Player::White, 0);
        for &t in g.terminals() {
            assert_eq!(all.winner(t), Some(Player::White));
        }
        let top = to_win_lose(&g, Player::White, g.terminals().len());
        for &t in g.terminals() {
            let expect = if g.utilities(t).unwrap().0 == utility(10) {
                Player::White
            } else {
                Player::Black
            };
            assert_eq!(top.winner(t), Some(expect), "terminal {t}");
        }
        // Black's perspective flips the labels.
        let black_top = to_win_lose(&g, Player::Black, g.terminals().len());
        let black_wins: usize = g
            .terminals()
            .iter()
            .filter(|&&t| black_top.winner(t) == Some(Player::Black))
            .count();
        assert_eq!(black_wins, 2); // the two (0,9) terminals tie at rank 5
    }

    #[test]
    fn tictactoe_critical_budget() {
        let zs = tictactoe();
        let r = richman_values(&zs).unwrap();
        assert_eq!(r.root_value(&zs), &rat(133, 256));
    }

    #[test]
    fn zero_sum_json_round_trip() {
        let zs = majority_game();
        let text = zs.to_json_string();
        let back = ZeroSumGame::from_json_str(&text).unwrap();
        assert_eq!(back.to_json_string(), text);
        let r1 = richman_values(&zs).unwrap();
        let r2 = richman_values(&back).unwrap();
        for s in 0..zs.num_nodes() {
            let ext = zs.external_id(s);
            assert_eq!(r1.at(s), r2.at(back.find_external(ext).unwrap()));
        }
    }

    #[test]
    fn json_rejects_malformed() {
        assert!(matches!(
            ZeroSumGame::from_json_str("{\"root\": 0, \"nodes\": [], \"terminals\": {}}"),
            Err(RichmanError::DanglingChild { id: 0 })
        ));
        let cyclic = r#"{
  "root": 0,
  "nodes": [
    {"id": 0, "white_moves": [1], "black_moves": [1]},
    {"id": 1, "white_moves": [0], "black_moves": [0]}
  ],
  "terminals": {}
}"#;
        assert!(matches!(
            ZeroSumGame::from_json_str(cyclic),
            Err(RichmanError::Cyclic { .. })
        ));
        let unlabeled = r#"{
  "root": 0,
  "nodes": [
    {"id": 0, "white_moves": [1], "black_moves": []}
  ],
  "terminals": {"1": "white"}
}"#;
        assert!(matches!(
            ZeroSumGame::from_json_str(unlabeled),
            Err(RichmanError::UnlabeledTerminal { id: 0 })
        ));
    }

    #[test]
    fn mst_requires_full_tree() {
        let g = fixture(Fixture::GTwo);
        let mu = OutcomeMap {
            cutoffs: vec![Dyadic::zero()],
            outcomes: vec![1],
            total: Dyadic::one(),
        };
        assert_eq!(mst_check(&g, &mu).unwrap_err(), RichmanError::NotFullBinary);
        // Shared nodes also disqualify.
        let g = fixture(Fixture::GMaj);
        assert_eq!(mst_check(&g, &mu).unwrap_err(), RichmanError::NotFullBinary);
        // A padded clone qualifies.
        let g = pad_to_balanced(&fixture(Fixture::GMaj)).unwrap();
        let mu = OutcomeMap {
            cutoffs: vec![Dyadic::zero(), Dyadic::new(1, 1)],
            outcomes: vec![g.terminals()[0], *g.terminals().last().unwrap()],
            total: Dyadic::one(),
        };
        assert!(mst_check(&g, &mu).is_ok());
    }

    #[test]
    fn mst_bounds_bind_at_interval_ends() {
        // Height-1 tree, terminals (0,1) and (1,0); outcome map gives the
        // White-best terminal only above 1/2.
        let mut b = crate::game::GameBuilder::new();
        let root = b.add_internal(vec![1, 2]);
        b.add_terminal_int(0, 1);
        b.add_terminal_int(1, 0);
        b.set_root(root);
        let g = b.build().unwrap();
        let half = Dyadic::new(1, 1);
        let mu = OutcomeMap {
            cutoffs: vec![Dyadic::zero(), half.clone()],
            outcomes: vec![1, 2],
            total: Dyadic::one(),
        };
        let report = mst_check(&g, &mu).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
        // Swapping the outcomes violates White's bound on the upper
        // interval and Black's on the lower.
        let mu = OutcomeMap {
            cutoffs: vec![Dyadic::zero(), half],
            outcomes: vec![2, 1],
            total: Dyadic::one(),
        };
        let report = mst_check(&g, &mu).unwrap();
        assert_eq!(report.violations.len(), 2);
    }
}
