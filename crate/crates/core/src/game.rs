//! Two-player extensive-form game DAGs with exact rational utilities,
//! the generic preference order over terminals, and Pareto-set computation.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::Zero;

use crate::dyadic::Dyadic;

/// Internal node index; dense, assigned at construction.
pub type NodeId = usize;

/// Exact rational utility.
pub type Utility = BigRational;

/// Convenience constructor for integer utilities.
pub fn utility(n: i64) -> Utility {
    BigRational::from_integer(BigInt::from(n))
}

/// The two bidders. White moves on won auctions and wins ties by default.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub enum Player {
    White,
    Black,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::White => Player::Black,
            Player::Black => Player::White,
        }
    }

    /// 0 for White, 1 for Black; used to index per-player arrays.
    pub fn index(self) -> usize {
        match self {
            Player::White => 0,
            Player::Black => 1,
        }
    }
}

impl std::fmt::Display for Player {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Player::White => write!(f, "white"),
            Player::Black => write!(f, "black"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GameError {
    #[error("cycle detected through nodes {path:?}")]
    CycleDetected { path: Vec<u64> },
    #[error("reference to undefined node {id}")]
    DanglingChild { id: u64 },
    #[error("non-terminal node {id} has no children")]
    EmptyMoveSet { id: u64 },
    #[error("terminal node {id} has no utilities")]
    MissingUtility { id: u64 },
    #[error("node {id} is not a terminal")]
    NotATerminal { id: u64 },
    #[error("node id {id} defined more than once")]
    DuplicateId { id: u64 },
    #[error("no root node set")]
    NoRoot,
    #[error("invalid game file: {0}")]
    Format(String),
}

/// A validated two-player bidding game: a DAG with ordered move lists and
/// exact utilities at terminals. Immutable after construction.
#[derive(Clone, Debug)]
pub struct BiddingGame {
    root: NodeId,
    children: Vec<Vec<NodeId>>,
    utilities: Vec<Option<(Utility, Utility)>>,
    labels: Vec<Option<String>>,
    external_ids: Vec<u64>,
    external_index: BTreeMap<u64, NodeId>,
    topo: Vec<NodeId>,
    heights: Vec<u32>,
    terminals: Vec<NodeId>,
}

impl BiddingGame {
    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn num_nodes(&self) -> usize {
        self.children.len()
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.children[id]
    }

    pub fn is_terminal(&self, id: NodeId) -> bool {
        self.children[id].is_empty()
    }

    pub fn utilities(&self, id: NodeId) -> Option<&(Utility, Utility)> {
        self.utilities[id].as_ref()
    }

    pub fn label(&self, id: NodeId) -> Option<&str> {
        self.labels[id].as_deref()
    }

    pub fn external_id(&self, id: NodeId) -> u64 {
        self.external_ids[id]
    }

    pub fn find_external(&self, ext: u64) -> Option<NodeId> {
        self.external_index.get(&ext).copied()
    }

    /// Children-first (post-order) traversal covering every node.
    pub fn topo(&self) -> &[NodeId] {
        &self.topo
    }

    /// Longest distance from `id` to a terminal below it.
    pub fn height_of(&self, id: NodeId) -> u32 {
        self.heights[id]
    }

    /// Height of the game: the maximum node height.
    pub fn height(&self) -> u32 {
        self.heights.iter().copied().max().unwrap_or(0)
    }

    /// True iff every non-terminal has at most two children.
    pub fn is_binary(&self) -> bool {
        self.children.iter().all(|c| c.len() <= 2)
    }

    /// Terminal ids in ascending internal order.
    pub fn terminals(&self) -> &[NodeId] {
        &self.terminals
    }

    /// Sum of both players' utilities at a terminal.
    pub fn social_welfare_rank(&self, t: NodeId) -> Result<Utility, GameError> {
        let (u1, u2) = self.utilities(t).ok_or(GameError::NotATerminal {
            id: self.external_ids[t],
        })?;
        Ok(u1 + u2)
    }
}

/// Incremental constructor for [`BiddingGame`]; `build` validates the DAG.
#[derive(Default)]
pub struct GameBuilder {
    children: Vec<Vec<NodeId>>,
    utilities: Vec<Option<(Utility, Utility)>>,
    labels: Vec<Option<String>>,
    external_ids: Vec<Option<u64>>,
    root: Option<NodeId>,
}

impl GameBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_terminal(&mut self, u1: Utility, u2: Utility) -> NodeId {
        self.children.push(Vec::new());
        self.utilities.push(Some((u1, u2)));
        self.labels.push(None);
        self.external_ids.push(None);
        self.children.len() - 1
    }

    pub fn add_terminal_int(&mut self, u1: i64, u2: i64) -> NodeId {
        self.add_terminal(utility(u1), utility(u2))
    }

    /// Adds an internal node. Child ids may reference nodes added later;
    /// bounds are checked in `build`.
    pub fn add_internal(&mut self, children: Vec<NodeId>) -> NodeId {
        self.children.push(children);
        self.utilities.push(None);
        self.labels.push(None);
        self.external_ids.push(None);
        self.children.len() - 1
    }

    pub fn set_label(&mut self, id: NodeId, label: impl Into<String>) {
        self.labels[id] = Some(label.into());
    }

    /// Replaces an internal node's child list; forward references allowed.
    pub fn set_children(&mut self, id: NodeId, children: Vec<NodeId>) {
        self.children[id] = children;
    }

    pub fn set_external_id(&mut self, id: NodeId, ext: u64) {
        self.external_ids[id] = Some(ext);
    }

    pub fn set_root(&mut self, id: NodeId) {
        self.root = Some(id);
    }

    pub fn build(self) -> Result<BiddingGame, GameError> {
        let n = self.children.len();
        let root = self.root.ok_or(GameError::NoRoot)?;
        if root >= n {
            return Err(GameError::DanglingChild { id: root as u64 });
        }
        let external_ids: Vec<u64> = self
            .external_ids
            .iter()
            .enumerate()
            .map(|(i, e)| e.unwrap_or(i as u64))
            .collect();
        let ext_of = |id: NodeId| external_ids[id];

        let mut external_index = BTreeMap::new();
        for (i, &e) in external_ids.iter().enumerate() {
            if external_index.insert(e, i).is_some() {
                return Err(GameError::DuplicateId { id: e });
            }
        }

        for (i, kids) in self.children.iter().enumerate() {
            for &c in kids {
                if c >= n {
                    return Err(GameError::DanglingChild { id: c as u64 });
                }
            }
            match (kids.is_empty(), self.utilities[i].is_some()) {
                (true, false) => return Err(GameError::MissingUtility { id: ext_of(i) }),
                (false, true) => {
                    return Err(GameError::Format(format!(
                        "node {} has both children and utilities",
                        ext_of(i)
                    )))
                }
                _ => {}
            }
        }

        // Empty move sets: a node built as internal with zero children is
        // indistinguishable from a terminal here, so GameBuilder cannot form
        // one; the JSON loader checks this case before building.

        let topo = toposort(&self.children, &external_ids)?;
        let mut heights = vec![0u32; n];
        for &id in &topo {
            heights[id] = self.children[id]
                .iter()
                .map(|&c| heights[c] + 1)
                .max()
                .unwrap_or(0);
        }
        let terminals: Vec<NodeId> = (0..n).filter(|&i| self.children[i].is_empty()).collect();

        Ok(BiddingGame {
            root,
            children: self.children,
            utilities: self.utilities,
            labels: self.labels,
            external_ids,
            external_index,
            topo,
            heights,
            terminals,
        })
    }
}

/// Children-first topological order over all nodes; errors with a cycle path.
fn toposort(children: &[Vec<NodeId>], external_ids: &[u64]) -> Result<Vec<NodeId>, GameError> {
    let n = children.len();
    // 0 = unvisited, 1 = on stack, 2 = done.
    let mut state = vec![0u8; n];
    let mut order = Vec::with_capacity(n);
    for start in 0..n {
        if state[start] != 0 {
            continue;
        }
        // Iterative DFS: (node, next child index).
        let mut stack: Vec<(NodeId, usize)> = vec![(start, 0)];
        state[start] = 1;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if *next < children[node].len() {
                let c = children[node][*next];
                *next += 1;
                match state[c] {
                    0 => {
                        state[c] = 1;
                        stack.push((c, 0));
                    }
                    1 => {
                        let pos = stack.iter().position(|&(s, _)| s == c).unwrap();
                        let mut path: Vec<u64> =
                            stack[pos..].iter().map(|&(s, _)| external_ids[s]).collect();
                        path.push(external_ids[c]);
                        return Err(GameError::CycleDetected { path });
                    }
                    _ => {}
                }
            } else {
                state[node] = 2;
                order.push(node);
                stack.pop();
            }
        }
    }
    Ok(order)
}

/// Compares two utility pairs for `player` under the generic order:
/// own utility first, the opponent's as tie-break; identical pairs are equal.
pub fn pair_cmp(player: Player, a: &(Utility, Utility), b: &(Utility, Utility)) -> Ordering {
    let (own_a, opp_a, own_b, opp_b) = match player {
        Player::White => (&a.0, &a.1, &b.0, &b.1),
        Player::Black => (&a.1, &a.0, &b.1, &b.0),
    };
    own_a.cmp(own_b).then_with(|| opp_a.cmp(opp_b))
}

/// Total preorder over terminals for each player: a player prefers higher own
/// utility, breaking ties toward the outcome better for the opponent.
/// Terminals with identical utility pairs compare equal.
///
/// Ranks are dense integers (higher = preferred), so all hot-path comparisons
/// are integer compares.
#[derive(Clone, Debug)]
pub struct PreferenceOrder {
    rank: [Vec<u32>; 2],
}

const NOT_TERMINAL: u32 = u32::MAX;

impl PreferenceOrder {
    pub fn new(game: &BiddingGame) -> Self {
        let mut rank = [
            vec![NOT_TERMINAL; game.num_nodes()],
            vec![NOT_TERMINAL; game.num_nodes()],
        ];
        for player in [Player::White, Player::Black] {
            let mut ts: Vec<NodeId> = game.terminals().to_vec();
            ts.sort_by(|&a, &b| {
                pair_cmp(player, game.utilities(a).unwrap(), game.utilities(b).unwrap())
                    .then(a.cmp(&b))
            });
            let mut next = 0u32;
            for (i, &t) in ts.iter().enumerate() {
                if i > 0 {
                    let prev = ts[i - 1];
                    if pair_cmp(
                        player,
                        game.utilities(prev).unwrap(),
                        game.utilities(t).unwrap(),
                    ) == Ordering::Less
                    {
                        next += 1;
                    }
                }
                rank[player.index()][t] = next;
            }
        }
        PreferenceOrder { rank }
    }

    /// Dense preference rank of terminal `t` for `player` (higher = preferred).
    pub fn rank(&self, player: Player, t: NodeId) -> u32 {
        let r = self.rank[player.index()][t];
        debug_assert_ne!(r, NOT_TERMINAL, "rank queried on non-terminal {t}");
        r
    }

    /// Generic-order comparison of two terminals for `player`.
    pub fn cmp(&self, player: Player, a: NodeId, b: NodeId) -> Ordering {
        self.rank(player, a).cmp(&self.rank(player, b))
    }
}

/// Generic-order comparison of terminals `t` vs `t2` for `player`:
/// `Greater` means `t` is strictly preferred.
pub fn prefers(
    game: &BiddingGame,
    player: Player,
    t: NodeId,
    t2: NodeId,
) -> Result<Ordering, GameError> {
    let ua = game
        .utilities(t)
        .ok_or(GameError::NotATerminal { id: game.external_id(t) })?;
    let ub = game
        .utilities(t2)
        .ok_or(GameError::NotATerminal { id: game.external_id(t2) })?;
    Ok(pair_cmp(player, ua, ub))
}

/// Terminals not strictly dominated: `t` is excluded iff some `t2` is strictly
/// preferred to it by both players. Terminals sharing an efficient utility
/// pair are all retained.
pub fn pareto_set(game: &BiddingGame) -> Vec<NodeId> {
    let order = PreferenceOrder::new(game);
    let mut ts: Vec<NodeId> = game.terminals().to_vec();
    // Sort by White's rank descending; sweep tracking the best Black rank seen
    // among strictly higher White ranks.
    ts.sort_by(|&a, &b| {
        order
            .rank(Player::White, b)
            .cmp(&order.rank(Player::White, a))
            .then(a.cmp(&b))
    });
    let mut result = Vec::new();
    let mut best_black_above: Option<u32> = None;
    let mut i = 0;
    while i < ts.len() {
        let r1 = order.rank(Player::White, ts[i]);
        let mut j = i;
        while j < ts.len() && order.rank(Player::White, ts[j]) == r1 {
            j += 1;
        }
        let group = &ts[i..j];
        for &t in group {
            let r2 = order.rank(Player::Black, t);
            if best_black_above.map_or(true, |best| r2 >= best) {
                result.push(t);
            }
        }
        let group_max = group
            .iter()
            .map(|&t| order.rank(Player::Black, t))
            .max()
            .unwrap();
        best_black_above = Some(match best_black_above {
            None => group_max + 1,
            Some(best) => best.max(group_max + 1),
        });
        i = j;
    }
    result.sort_unstable();
    result
}

// ---------------------------------------------------------------------------
// JSON serialization
// ---------------------------------------------------------------------------

fn utility_from_json(v: &serde_json::Value) -> Result<Utility, GameError> {
    match v {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(utility(i))
            } else {
                Err(GameError::Format(format!(
                    "utility {n} is not an exact integer (use \"p/q\" strings for rationals)"
                )))
            }
        }
        serde_json::Value::String(s) => parse_rational(s),
        other => Err(GameError::Format(format!("utility {other} must be an integer or string"))),
    }
}

/// Parses `p` or `p/q` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Utility, GameError> {
    let bad = || GameError::Format(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        None => {
            let p = BigInt::from_str(s.trim()).map_err(|_| bad())?;
            Ok(BigRational::from_integer(p))
        }
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
    }
}

/// Renders a utility as a JSON token: bare integer when exact, else `"p/q"`.
fn utility_to_json(u: &Utility) -> String {
    if u.denom() == &BigInt::from(1) {
        if let Some(i) = to_i64(u.numer()) {
            return i.to_string();
        }
    }
    format!("\"{}/{}\"", u.numer(), u.denom())
}

fn to_i64(b: &BigInt) -> Option<i64> {
    use num::ToPrimitive;
    b.to_i64()
}

/// Formats a rational for human-readable output: integer or `p/q`.
pub fn rational_display(u: &Utility) -> String {
    if u.denom() == &BigInt::from(1) {
        u.numer().to_string()
    } else {
        format!("{}/{}", u.numer(), u.denom())
    }
}

impl BiddingGame {
    /// Parses the structured game format:
    /// `{"root": id, "nodes": [{"id", "children", "label"?}], "terminals": {"id": [u1, u2]}}`.
    pub fn from_json_str(s: &str) -> Result<Self, GameError> {
        let v: serde_json::Value =
            serde_json::from_str(s).map_err(|e| GameError::Format(e.to_string()))?;
        let obj = v
            .as_object()
            .ok_or_else(|| GameError::Format("top level must be an object".into()))?;
        for key in obj.keys() {
            if !matches!(key.as_str(), "root" | "nodes" | "terminals") {
                return Err(GameError::Format(format!("unknown key {key:?}")));
            }
        }
        let root_ext = obj
            .get("root")
            .and_then(|r| r.as_u64())
            .ok_or_else(|| GameError::Format("missing or invalid \"root\"".into()))?;
        let nodes = obj
            .get("nodes")
            .and_then(|n| n.as_array())
            .ok_or_else(|| GameError::Format("missing \"nodes\" array".into()))?;
        let terminals = obj
            .get("terminals")
            .and_then(|t| t.as_object())
            .ok_or_else(|| GameError::Format("missing \"terminals\" object".into()))?;

        struct RawNode {
            ext: u64,
            children_ext: Vec<u64>,
            label: Option<String>,
        }
        let mut raw = Vec::with_capacity(nodes.len());
        for n in nodes {
            let n = n
                .as_object()
                .ok_or_else(|| GameError::Format("node entries must be objects".into()))?;
            for key in n.keys() {
                if !matches!(key.as_str(), "id" | "children" | "label") {
                    return Err(GameError::Format(format!("unknown node key {key:?}")));
                }
            }
            let ext = n
                .get("id")
                .and_then(|i| i.as_u64())
                .ok_or_else(|| GameError::Format("node missing integer \"id\"".into()))?;
            let kids = n
                .get("children")
                .and_then(|c| c.as_array())
                .ok_or_else(|| GameError::Format(format!("node {ext} missing \"children\"")))?;
            if kids.is_empty() {
                return Err(GameError::EmptyMoveSet { id: ext });
            }
            let children_ext = kids
                .iter()
                .map(|c| {
                    c.as_u64()
                        .ok_or_else(|| GameError::Format(format!("node {ext}: bad child id {c}")))
                })
                .collect::<Result<Vec<u64>, _>>()?;
            let label = match n.get("label") {
                None => None,
                Some(serde_json::Value::String(s)) => Some(s.clone()),
                Some(other) => {
                    return Err(GameError::Format(format!("node {ext}: bad label {other}")))
                }
            };
            raw.push(RawNode { ext, children_ext, label });
        }

        let mut term_entries: Vec<(u64, Utility, Utility)> = Vec::new();
        for (key, val) in terminals {
            let ext: u64 = key
                .parse()
                .map_err(|_| GameError::Format(format!("terminal key {key:?} is not an id")))?;
            let pair = val
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| GameError::Format(format!("terminal {ext} must map to [u1, u2]")))?;
            let u1 = utility_from_json(&pair[0])?;
            let u2 = utility_from_json(&pair[1])?;
            term_entries.push((ext, u1, u2));
        }
        term_entries.sort_by_key(|&(ext, _, _)| ext);

        let mut ext_to_internal: BTreeMap<u64, NodeId> = BTreeMap::new();
        let mut builder = GameBuilder::new();
        for r in &raw {
            let id = builder.add_internal(Vec::new());
            builder.set_external_id(id, r.ext);
            if let Some(l) = &r.label {
                builder.set_label(id, l.clone());
            }
            if ext_to_internal.insert(r.ext, id).is_some() {
                return Err(GameError::DuplicateId { id: r.ext });
            }
        }
        for (ext, u1, u2) in term_entries {
            let id = builder.add_terminal(u1, u2);
            builder.set_external_id(id, ext);
            if ext_to_internal.insert(ext, id).is_some() {
                return Err(GameError::DuplicateId { id: ext });
            }
        }
        for (i, r) in raw.iter().enumerate() {
            let kids = r
                .children_ext
                .iter()
                .map(|ce| {
                    ext_to_internal
                        .get(ce)
                        .copied()
                        .ok_or(GameError::DanglingChild { id: *ce })
                })
                .collect::<Result<Vec<NodeId>, _>>()?;
            builder.children[i] = kids;
        }
        let root = *ext_to_internal
            .get(&root_ext)
            .ok_or(GameError::DanglingChild { id: root_ext })?;
        builder.set_root(root);
        builder.build()
    }

    /// Deterministic writer for the structured game format. Nodes are sorted
    /// by external id, terminal keys ascend numerically; round-trips exactly.
    pub fn to_json_string(&self) -> String {
        let mut internal_nodes: Vec<NodeId> =
            (0..self.num_nodes()).filter(|&i| !self.is_terminal(i)).collect();
        internal_nodes.sort_by_key(|&i| self.external_ids[i]);
        let mut out = String::new();
        out.push_str("{\n");
        out.push_str(&format!("  \"root\": {},\n", self.external_ids[self.root]));
        out.push_str("  \"nodes\": [\n");
        for (pos, &i) in internal_nodes.iter().enumerate() {
            let kids: Vec<String> = self.children[i]
                .iter()
                .map(|&c| self.external_ids[c].to_string())
                .collect();
            out.push_str(&format!(
                "    {{\"id\": {}, \"children\": [{}]",
                self.external_ids[i],
                kids.join(", ")
            ));
            if let Some(l) = &self.labels[i] {
                out.push_str(&format!(", \"label\": {}", serde_json::Value::from(l.clone())));
            }
            out.push('}');
            if pos + 1 < internal_nodes.len() {
                out.push(',');
            }
            out.push('\n');
        }
        out.push_str("  ],\n");
        out.push_str("  \"terminals\": {\n");
        let mut terms: Vec<NodeId> = self.terminals.clone();
        terms.sort_by_key(|&i| self.external_ids[i]);
        for (pos, &t) in terms.iter().enumerate() {
            let (u1, u2) = self.utilities[t].as_ref().unwrap();
            out.push_str(&format!(
                "    \"{}\": [{}, {}]",
                self.external_ids[t],
                utility_to_json(u1),
                utility_to_json(u2)
            ));
            if pos + 1 < terms.len() {
                out.push(',');
            }
            out.push('\n');
        }
        out.push_str("  }\n}\n");
        out
    }
}

/// Per-state tie resolution: which player wins an equal-bid auction.
#[derive(Clone, Debug)]
pub enum TieBreak {
    /// The same player wins every tie (White is the paper-wide default).
    Global(Player),
    /// Per-node winners with a fallback for unlisted nodes.
    PerState {
        default: Player,
        map: BTreeMap<NodeId, Player>,
    },
}

impl TieBreak {
    pub fn white() -> Self {
        TieBreak::Global(Player::White)
    }

    pub fn at(&self, s: NodeId) -> Player {
        match self {
            TieBreak::Global(p) => *p,
            TieBreak::PerState { default, map } => map.get(&s).copied().unwrap_or(*default),
        }
    }

    /// Parses `{"default": "white"|"black", "states": {"<external id>": "white"|"black"}}`,
    /// resolving external ids against `game`.
    pub fn from_json_str(s: &str, game: &BiddingGame) -> Result<Self, GameError> {
        let v: serde_json::Value =
            serde_json::from_str(s).map_err(|e| GameError::Format(e.to_string()))?;
        let obj = v
            .as_object()
            .ok_or_else(|| GameError::Format("tie-break file must be an object".into()))?;
        for key in obj.keys() {
            if !matches!(key.as_str(), "default" | "states") {
                return Err(GameError::Format(format!("unknown tie-break key {key:?}")));
            }
        }
        let parse_player = |v: &serde_json::Value| -> Result<Player, GameError> {
            match v.as_str() {
                Some("white") => Ok(Player::White),
                Some("black") => Ok(Player::Black),
                _ => Err(GameError::Format(format!("bad player {v}"))),
            }
        };
        let default = match obj.get("default") {
            None => Player::White,
            Some(p) => parse_player(p)?,
        };
        let mut map = BTreeMap::new();
        if let Some(states) = obj.get("states") {
            let states = states
                .as_object()
                .ok_or_else(|| GameError::Format("\"states\" must be an object".into()))?;
            for (key, val) in states {
                let ext: u64 = key
                    .parse()
                    .map_err(|_| GameError::Format(format!("bad state id {key:?}")))?;
                let id = game
                    .find_external(ext)
                    .ok_or(GameError::DanglingChild { id: ext })?;
                map.insert(id, parse_player(val)?);
            }
        }
        Ok(TieBreak::PerState { default, map })
    }
}

/// Grid-independent step function from White's budget to outcome terminals:
/// `eval(B) = outcomes[j]` for `B` in `[cutoffs[j], cutoffs[j+1])`, with the
/// total budget included in the last interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutcomeMap {
    pub cutoffs: Vec<Dyadic>,
    pub outcomes: Vec<NodeId>,
    pub total: Dyadic,
}

impl OutcomeMap {
    /// Interval index containing budget `b` (clamped to the last interval at the total).
    pub fn interval_of(&self, b: &Dyadic) -> usize {
        debug_assert!(!b.is_negative() && *b <= self.total);
        match self.cutoffs.binary_search(b) {
            Ok(i) => i,
            Err(i) => i - 1,
        }
    }

    pub fn eval(&self, b: &Dyadic) -> NodeId {
        self.outcomes[self.interval_of(b)]
    }

    /// Step-function evaluation at an arbitrary exact rational budget.
    pub fn eval_rat(&self, b: &BigRational) -> NodeId {
        let idx = self
            .cutoffs
            .partition_point(|c| c.cmp_rational(b) != Ordering::Greater);
        self.outcomes[idx.saturating_sub(1)]
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> BiddingGame {
        // root -> {a, b}; both -> shared terminal; plus one more leaf each.
        let mut g = GameBuilder::new();
        let root = g.add_internal(vec![1, 2]);
        let a = g.add_internal(vec![3, 4]);
        let b = g.add_internal(vec![4, 5]);
        let t1 = g.add_terminal_int(3, 0);
        let shared = g.add_terminal_int(1, 1);
        let t2 = g.add_terminal_int(0, 3);
        assert_eq!((root, a, b, t1, shared, t2), (0, 1, 2, 3, 4, 5));
        g.set_root(root);
        g.set_label(root, "s0");
        g.build().unwrap()
    }

    #[test]
    fn builds_and_validates() {
        let g = diamond();
        assert_eq!(g.height(), 2);
        assert_eq!(g.height_of(3), 0);
        assert!(g.is_binary());
        assert_eq!(g.terminals(), &[3, 4, 5]);
        // Children-first order.
        let pos: Vec<usize> = {
            let mut p = vec![0; g.num_nodes()];
            for (i, &n) in g.topo().iter().enumerate() {
                p[n] = i;
            }
            p
        };
        for id in 0..g.num_nodes() {
            for &c in g.children(id) {
                assert!(pos[c] < pos[id]);
            }
        }
    }

    #[test]
    fn rejects_cycles() {
        let mut g = GameBuilder::new();
        let a = g.add_internal(vec![1]);
        let b = g.add_internal(vec![2]);
        let _c = g.add_internal(vec![0]);
        g.set_root(a);
        let err = g.build().unwrap_err();
        match err {
            GameError::CycleDetected { path } => {
                assert!(path.len() >= 2);
                assert_eq!(path.first(), path.last());
            }
            other => panic!("expected cycle, got {other:?}"),
        }
        let _ = b;
    }

    #[test]
    fn rejects_dangling_and_missing_root() {
        let mut g = GameBuilder::new();
        let a = g.add_internal(vec![7]);
        g.set_root(a);
        assert_eq!(g.build().unwrap_err(), GameError::DanglingChild { id: 7 });

        let mut g = GameBuilder::new();
        g.add_terminal_int(0, 0);
        assert_eq!(g.build().unwrap_err(), GameError::NoRoot);
    }

    #[test]
    fn single_terminal_game_is_valid() {
        let mut g = GameBuilder::new();
        let t = g.add_terminal_int(4, 2);
        g.set_root(t);
        let g = g.build().unwrap();
        assert_eq!(g.height(), 0);
        assert_eq!(g.social_welfare_rank(t).unwrap(), utility(6));
    }

    #[test]
    fn generic_preference_order() {
        let mut b = GameBuilder::new();
        let root = b.add_internal(vec![1, 2, 3, 4]);
        let t_a = b.add_terminal_int(5, 5); // 1
        let t_b = b.add_terminal_int(5, 3); // 2
        let t_c = b.add_terminal_int(2, 9); // 3
        let t_dup = b.add_terminal_int(5, 5); // 4: same pair as t_a
        b.set_root(root);
        let g = b.build().unwrap();
        assert_eq!(prefers(&g, Player::White, t_a, t_b).unwrap(), Ordering::Greater);
        assert_eq!(prefers(&g, Player::White, t_a, t_dup).unwrap(), Ordering::Equal);
        assert_eq!(prefers(&g, Player::White, t_c, t_b).unwrap(), Ordering::Less);
        assert_eq!(prefers(&g, Player::Black, t_c, t_a).unwrap(), Ordering::Greater);
        assert_eq!(prefers(&g, Player::Black, t_a, t_b).unwrap(), Ordering::Greater);
        assert!(prefers(&g, Player::White, root, t_a).is_err());

        let order = PreferenceOrder::new(&g);
        assert_eq!(order.rank(Player::White, t_a), order.rank(Player::White, t_dup));
        assert_eq!(order.cmp(Player::White, t_a, t_c), Ordering::Greater);
    }

    #[test]
    fn pareto_keeps_equal_pairs_and_matches_bruteforce() {
        let mut b = GameBuilder::new();
        let root = b.add_internal(vec![1, 2, 3, 4, 5]);
        b.add_terminal_int(1, 3); // 1
        b.add_terminal_int(2, 2); // 2
        b.add_terminal_int(3, 1); // 3
        b.add_terminal_int(2, 2); // 4: duplicate efficient pair
        b.add_terminal_int(1, 1); // 5: dominated
        b.set_root(root);
        let g = b.build().unwrap();
        assert_eq!(pareto_set(&g), vec![1, 2, 3, 4]);
    }

    #[test]
    fn pareto_excludes_weakly_dominated_distinct_pairs() {
        // (3,3) vs (4,3): equal for Black on own utility, but the generic
        // order strictly prefers (4,3) for both players.
        let mut b = GameBuilder::new();
        let root = b.add_internal(vec![1, 2]);
        b.add_terminal_int(3, 3);
        b.add_terminal_int(4, 3);
        b.set_root(root);
        let g = b.build().unwrap();
        assert_eq!(pareto_set(&g), vec![2]);
    }

    #[test]
    fn json_round_trip() {
        let g = diamond();
        let s = g.to_json_string();
        let g2 = BiddingGame::from_json_str(&s).unwrap();
        assert_eq!(g2.to_json_string(), s);
        assert_eq!(g2.num_nodes(), g.num_nodes());
        assert_eq!(g2.label(g2.find_external(0).unwrap()), Some("s0"));
    }

    #[test]
    fn json_rejects_floats_and_bad_shapes() {
        let bad = r#"{"root": 0, "nodes": [{"id": 0, "children": [1, 2]}],
                      "terminals": {"1": [0.5, 1], "2": [1, 0]}}"#;
        assert!(matches!(
            BiddingGame::from_json_str(bad),
            Err(GameError::Format(_))
        ));
        let empty_moves = r#"{"root": 0, "nodes": [{"id": 0, "children": []}], "terminals": {}}"#;
        assert_eq!(
            BiddingGame::from_json_str(empty_moves).unwrap_err(),
            GameError::EmptyMoveSet { id: 0 }
        );
        let dangling = r#"{"root": 0, "nodes": [{"id": 0, "children": [9]}], "terminals": {}}"#;
        assert_eq!(
            BiddingGame::from_json_str(dangling).unwrap_err(),
            GameError::DanglingChild { id: 9 }
        );
    }

    #[test]
    fn json_rational_utilities() {
        let s = r#"{"root": 0, "nodes": [{"id": 0, "children": [1, 2]}],
                    "terminals": {"1": ["7/3", 0], "2": [1, "-1/2"]}}"#;
        let g = BiddingGame::from_json_str(s).unwrap();
        let t1 = g.find_external(1).unwrap();
        assert_eq!(
            g.utilities(t1).unwrap().0,
            BigRational::new(BigInt::from(7), BigInt::from(3))
        );
        let rewritten = g.to_json_string();
        assert!(rewritten.contains("\"7/3\""));
        assert!(rewritten.contains("\"-1/2\""));
        let g2 = BiddingGame::from_json_str(&rewritten).unwrap();
        assert_eq!(g2.to_json_string(), rewritten);
    }

    #[test]
    fn outcome_map_lookup() {
        let m = OutcomeMap {
            cutoffs: vec![Dyadic::zero(), Dyadic::new(1, 2), Dyadic::new(3, 2)],
            outcomes: vec![10, 11, 12],
            total: Dyadic::one(),
        };
        assert_eq!(m.eval(&Dyadic::zero()), 10);
        assert_eq!(m.eval(&Dyadic::new(1, 2)), 11);
        assert_eq!(m.eval(&Dyadic::new(5, 3)), 11);
        assert_eq!(m.eval(&Dyadic::one()), 12);
        let four_fifths = BigRational::new(BigInt::from(4), BigInt::from(5));
        assert_eq!(m.eval_rat(&four_fifths), 12);
        let tenth = BigRational::new(BigInt::from(1), BigInt::from(10));
        assert_eq!(m.eval_rat(&tenth), 10);
    }

    #[test]
    fn tie_break_lookup() {
        let g = diamond();
        let tb = TieBreak::from_json_str(
            r#"{"default": "white", "states": {"2": "black"}}"#,
            &g,
        )
        .unwrap();
        assert_eq!(tb.at(0), Player::White);
        assert_eq!(tb.at(2), Player::Black);
        assert_eq!(TieBreak::white().at(5), Player::White);
    }
}
