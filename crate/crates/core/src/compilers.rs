//! Constructors for bidding games: sequential scrip auction (SSA) compilers,
//! bargaining lattices, tree transformations, and the hand-built example games
//! used throughout the test suite.

use std::collections::BTreeMap;

use crate::game::{utility, BiddingGame, GameBuilder, NodeId, Player, Utility};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CompileError {
    #[error("auction has {k} items, exceeding the cap of {cap}")]
    TooManyItems { k: u32, cap: u32 },
    #[error("additive valuations must be non-negative (item {item}, player {player})")]
    NegativeValue { item: usize, player: Player },
    #[error("value table for {player} has no entry for weight sums {tuple:?}")]
    MissingTableEntry { player: Player, tuple: Vec<u64> },
    #[error("ideal vectors and weights must have equal length")]
    LengthMismatch,
    #[error("bargaining frontier is empty")]
    EmptyFrontier,
    #[error("game is not binary")]
    NotBinary,
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
}

/// How bundle values are specified for a sequential scrip auction.
#[derive(Clone, Debug)]
pub enum Valuation {
    /// Explicit value per bundle (indexed by bitmask over items, bit j = item j).
    Table {
        v1: Vec<Utility>,
        v2: Vec<Utility>,
    },
    /// Per-item integer values, bundle value = sum.
    Additive { v1: Vec<i64>, v2: Vec<i64> },
    /// Per-item weight vectors; a player's utility is a function of the
    /// per-dimension weight sums over the items they won.
    MultiWeight {
        /// `weights[item][dim]`, all items sharing the dimension count.
        weights: Vec<Vec<u64>>,
        f1: BTreeMap<Vec<u64>, Utility>,
        f2: BTreeMap<Vec<u64>, Utility>,
    },
}

/// A sequential scrip auction: `k` items sold one-by-one in `order`, each via a
/// first-price auction whose winner pays the loser from a joint scrip budget.
#[derive(Clone, Debug)]
pub struct SsaSpec {
    pub k: u32,
    /// Sale order: `order[round]` is the 0-based item sold in that round.
    pub order: Vec<usize>,
    pub valuation: Valuation,
}

impl SsaSpec {
    pub fn new(k: u32, valuation: Valuation) -> Self {
        SsaSpec {
            k,
            order: (0..k as usize).collect(),
            valuation,
        }
    }

    /// Identical items worth 1 each to both players.
    pub fn identical_items(k: u32) -> Self {
        SsaSpec::new(
            k,
            Valuation::Additive {
                v1: vec![1; k as usize],
                v2: vec![1; k as usize],
            },
        )
    }

    fn validate(&self) -> Result<(), CompileError> {
        let k = self.k as usize;
        if self.order.len() != k {
            return Err(CompileError::InvalidSpec(format!(
                "order has {} entries for {k} items",
                self.order.len()
            )));
        }
        let mut seen = vec![false; k];
        for &item in &self.order {
            if item >= k || seen[item] {
                return Err(CompileError::InvalidSpec(format!(
                    "order is not a permutation of 0..{k}"
                )));
            }
            seen[item] = true;
        }
        match &self.valuation {
            Valuation::Table { v1, v2 } => {
                if k >= usize::BITS as usize {
                    return Err(CompileError::InvalidSpec(format!("table with k = {k} items")));
                }
                if v1.len() != 1 << k || v2.len() != 1 << k {
                    return Err(CompileError::InvalidSpec(format!(
                        "value tables must cover all {} bundles",
                        1usize << k
                    )));
                }
            }
            Valuation::Additive { v1, v2 } => {
                if v1.len() != k || v2.len() != k {
                    return Err(CompileError::InvalidSpec(
                        "additive values must list one value per item".into(),
                    ));
                }
                for (item, &v) in v1.iter().enumerate() {
                    if v < 0 {
                        return Err(CompileError::NegativeValue { item, player: Player::White });
                    }
                }
                for (item, &v) in v2.iter().enumerate() {
                    if v < 0 {
                        return Err(CompileError::NegativeValue { item, player: Player::Black });
                    }
                }
            }
            Valuation::MultiWeight { weights, f1, f2 } => {
                if weights.len() != k {
                    return Err(CompileError::InvalidSpec(
                        "multiweight must list one weight vector per item".into(),
                    ));
                }
                let q = weights.first().map_or(0, |w| w.len());
                if q == 0 && k > 0 {
                    return Err(CompileError::InvalidSpec(
                        "weight vectors must have dimension >= 1".into(),
                    ));
                }
                if weights.iter().any(|w| w.len() != q) {
                    return Err(CompileError::InvalidSpec(
                        "all weight vectors must share one dimension".into(),
                    ));
                }
                let _ = (f1, f2);
            }
        }
        Ok(())
    }

    /// Value of a bundle (bitmask over 0-based items) to `player`.
    fn bundle_value(&self, player: Player, mask: u64) -> Result<Utility, CompileError> {
        match &self.valuation {
            Valuation::Table { v1, v2 } => {
                let table = if player == Player::White { v1 } else { v2 };
                Ok(table[mask as usize].clone())
            }
            Valuation::Additive { v1, v2 } => {
                let values = if player == Player::White { v1 } else { v2 };
                let mut sum = 0i64;
                for (item, &v) in values.iter().enumerate() {
                    if mask >> item & 1 == 1 {
                        sum += v;
                    }
                }
                Ok(utility(sum))
            }
            Valuation::MultiWeight { weights, f1, f2 } => {
                let q = weights.first().map_or(0, |w| w.len());
                let mut sums = vec![0u64; q];
                for (item, w) in weights.iter().enumerate() {
                    if mask >> item & 1 == 1 {
                        for (dim, &x) in w.iter().enumerate() {
                            sums[dim] += x;
                        }
                    }
                }
                let table = if player == Player::White { f1 } else { f2 };
                table
                    .get(&sums)
                    .cloned()
                    .ok_or(CompileError::MissingTableEntry { player, tuple: sums })
            }
        }
    }
}

pub const NAIVE_ITEM_CAP: u32 = 20;

/// Compiles an SSA into the full balanced binary tree of height `k`:
/// the depth-`d` nodes are the allocations of the first `d` items in sale
/// order, child 0 giving the next item to White.
pub fn compile_naive(spec: &SsaSpec) -> Result<BiddingGame, CompileError> {
    compile_naive_with_cap(spec, NAIVE_ITEM_CAP)
}

pub fn compile_naive_with_cap(spec: &SsaSpec, cap: u32) -> Result<BiddingGame, CompileError> {
    spec.validate()?;
    if spec.k > cap {
        return Err(CompileError::TooManyItems { k: spec.k, cap });
    }
    let mut b = GameBuilder::new();
    // Bottom-up recursion: white_mask collects items won by White so far.
    fn node(
        b: &mut GameBuilder,
        spec: &SsaSpec,
        depth: usize,
        white_mask: u64,
    ) -> Result<NodeId, CompileError> {
        let k = spec.k as usize;
        if depth == k {
            let all: u64 = spec.order.iter().map(|&i| 1u64 << i).sum();
            let u1 = spec.bundle_value(Player::White, white_mask)?;
            let u2 = spec.bundle_value(Player::Black, all & !white_mask)?;
            return Ok(b.add_terminal(u1, u2));
        }
        let item_bit = 1u64 << spec.order[depth];
        let to_white = node(b, spec, depth + 1, white_mask | item_bit)?;
        let to_black = node(b, spec, depth + 1, white_mask)?;
        Ok(b.add_internal(vec![to_white, to_black]))
    }
    let root = node(&mut b, spec, 0, 0)?;
    b.set_root(root);
    Ok(b.build().expect("naive SSA tree is structurally valid"))
}

/// Compiles an additive SSA into the compressed DAG whose level-`j` states are
/// the distinct pairs of accumulated values after `j` sales. The per-level
/// state count is at most `(v1(K)+1) * (v2(K)+1)`.
pub fn compile_additive(spec: &SsaSpec) -> Result<BiddingGame, CompileError> {
    spec.validate()?;
    let (v1, v2) = match &spec.valuation {
        Valuation::Additive { v1, v2 } => (v1, v2),
        _ => {
            return Err(CompileError::InvalidSpec(
                "compile_additive requires an additive valuation".into(),
            ))
        }
    };
    let k = spec.k as usize;
    // Forward pass: reachable (m1, m2) states per level, in sorted order.
    let mut levels: Vec<Vec<(i64, i64)>> = vec![vec![(0, 0)]];
    for round in 0..k {
        let item = spec.order[round];
        let mut next: Vec<(i64, i64)> = levels[round]
            .iter()
            .flat_map(|&(m1, m2)| [(m1 + v1[item], m2), (m1, m2 + v2[item])])
            .collect();
        next.sort_unstable();
        next.dedup();
        levels.push(next);
    }
    // Backward pass: materialize nodes, terminals first.
    let mut b = GameBuilder::new();
    let mut ids: BTreeMap<(usize, i64, i64), NodeId> = BTreeMap::new();
    for &(m1, m2) in &levels[k] {
        let id = b.add_terminal(utility(m1), utility(m2));
        ids.insert((k, m1, m2), id);
    }
    for level in (0..k).rev() {
        let item = spec.order[level];
        for &(m1, m2) in &levels[level] {
            let to_white = ids[&(level + 1, m1 + v1[item], m2)];
            let to_black = ids[&(level + 1, m1, m2 + v2[item])];
            let id = b.add_internal(vec![to_white, to_black]);
            b.set_label(id, format!("L{level}:{m1},{m2}"));
            ids.insert((level, m1, m2), id);
        }
    }
    b.set_root(ids[&(0, 0, 0)]);
    Ok(b.build().expect("additive DAG is structurally valid"))
}

/// Compiles a multi-weight SSA: states carry both players' per-dimension
/// weight sums, and terminal utilities are table lookups on each player's own
/// sums.
pub fn compile_multiweight(spec: &SsaSpec) -> Result<BiddingGame, CompileError> {
    spec.validate()?;
    let weights = match &spec.valuation {
        Valuation::MultiWeight { weights, .. } => weights,
        _ => {
            return Err(CompileError::InvalidSpec(
                "compile_multiweight requires a multiweight valuation".into(),
            ))
        }
    };
    let k = spec.k as usize;
    let q = weights.first().map_or(1, |w| w.len());
    type State = (Vec<u64>, Vec<u64>);
    let mut levels: Vec<Vec<State>> = vec![vec![(vec![0; q], vec![0; q])]];
    for round in 0..k {
        let w = &weights[spec.order[round]];
        let mut next: Vec<State> = Vec::new();
        for (s1, s2) in &levels[round] {
            let mut g1 = s1.clone();
            for (dim, &x) in w.iter().enumerate() {
                g1[dim] += x;
            }
            next.push((g1, s2.clone()));
            let mut g2 = s2.clone();
            for (dim, &x) in w.iter().enumerate() {
                g2[dim] += x;
            }
            next.push((s1.clone(), g2));
        }
        next.sort_unstable();
        next.dedup();
        levels.push(next);
    }
    let mut b = GameBuilder::new();
    let mut ids: BTreeMap<(usize, State), NodeId> = BTreeMap::new();
    for state in &levels[k] {
        let u1 = lookup(spec, Player::White, &state.0)?;
        let u2 = lookup(spec, Player::Black, &state.1)?;
        let id = b.add_terminal(u1, u2);
        ids.insert((k, state.clone()), id);
    }
    for level in (0..k).rev() {
        let w = &weights[spec.order[level]];
        for state in &levels[level] {
            let mut g1 = state.0.clone();
            let mut g2 = state.1.clone();
            for (dim, &x) in w.iter().enumerate() {
                g1[dim] += x;
                g2[dim] += x;
            }
            let to_white = ids[&(level + 1, (g1, state.1.clone()))];
            let to_black = ids[&(level + 1, (state.0.clone(), g2))];
            let id = b.add_internal(vec![to_white, to_black]);
            ids.insert((level, state.clone()), id);
        }
    }
    b.set_root(ids[&(0, (vec![0; q], vec![0; q]))]);
    return Ok(b.build().expect("multiweight DAG is structurally valid"));

    fn lookup(spec: &SsaSpec, player: Player, sums: &[u64]) -> Result<Utility, CompileError> {
        match &spec.valuation {
            Valuation::MultiWeight { f1, f2, .. } => {
                let table = if player == Player::White { f1 } else { f2 };
                table
                    .get(sums)
                    .cloned()
                    .ok_or_else(|| CompileError::MissingTableEntry {
                        player,
                        tuple: sums.to_vec(),
                    })
            }
            _ => unreachable!("validated as multiweight"),
        }
    }
}

/// A coordinate both voters already agree on; fixed outside the auction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ForcedIssue {
    pub coordinate: usize,
    pub value: bool,
}

/// Result of reducing a two-voter multi-issue vote to an auction over the
/// disagreed coordinates.
#[derive(Clone, Debug)]
pub struct SinglePeakedCompilation {
    pub ssa: SsaSpec,
    /// Coordinates where the ideals agree, pre-set to the common value.
    pub forced: Vec<ForcedIssue>,
    /// 0-based coordinate behind each auction item.
    pub items: Vec<usize>,
}

/// Reduces two single-peaked voters (per-coordinate ideal bit + weight) to an
/// additive SSA over the coordinates they disagree on; winning an item sets
/// that coordinate to the winner's ideal.
pub fn compile_single_peaked(
    ideal_1: &[bool],
    ideal_2: &[bool],
    weights_1: &[i64],
    weights_2: &[i64],
) -> Result<SinglePeakedCompilation, CompileError> {
    let n = ideal_1.len();
    if ideal_2.len() != n || weights_1.len() != n || weights_2.len() != n {
        return Err(CompileError::LengthMismatch);
    }
    let mut items = Vec::new();
    let mut forced = Vec::new();
    let mut v1 = Vec::new();
    let mut v2 = Vec::new();
    for c in 0..n {
        if ideal_1[c] == ideal_2[c] {
            forced.push(ForcedIssue { coordinate: c, value: ideal_1[c] });
        } else {
            items.push(c);
            v1.push(weights_1[c]);
            v2.push(weights_2[c]);
        }
    }
    let k = items.len() as u32;
    let ssa = SsaSpec::new(k, Valuation::Additive { v1, v2 });
    ssa.validate()?;
    Ok(SinglePeakedCompilation { ssa, forced, items })
}

/// A bargaining problem over integer lattice utilities: each move raises one
/// player's utility by 1 and the game stops on the efficient frontier.
#[derive(Clone, Debug)]
pub struct BargainingSpec {
    /// Pareto frontier points; strictly decreasing in one coordinate as the
    /// other increases. The status-quo origin is (0,0).
    pub frontier: Vec<(i64, i64)>,
}

impl BargainingSpec {
    /// The full frontier {(0,n), (1,n-1), ..., (n,0)}.
    pub fn linear(n: i64) -> Self {
        BargainingSpec {
            frontier: (0..=n).map(|x| (x, n - x)).collect(),
        }
    }
}

/// Compiles a bargaining frontier into the lattice walk game from (0,0):
/// child 0 steps right (adds to player 1), child 1 steps up (adds to
/// player 2); moves may not leave the region under the frontier; frontier
/// points are terminal with their coordinates as utilities.
pub fn compile_bargaining(spec: &BargainingSpec) -> Result<BiddingGame, CompileError> {
    if spec.frontier.is_empty() {
        return Err(CompileError::EmptyFrontier);
    }
    let mut frontier = spec.frontier.clone();
    frontier.sort_unstable();
    for w in frontier.windows(2) {
        if w[0].0 == w[1].0 || w[0].1 <= w[1].1 {
            return Err(CompileError::InvalidSpec(
                "frontier must be strictly decreasing".into(),
            ));
        }
    }
    if frontier.iter().any(|&(x, y)| x < 0 || y < 0) {
        return Err(CompileError::InvalidSpec("frontier points must be non-negative".into()));
    }
    let is_frontier = |p: (i64, i64)| frontier.binary_search(&p).is_ok();
    let feasible =
        |p: (i64, i64)| frontier.iter().any(|&(fx, fy)| fx >= p.0 && fy >= p.1);
    if !feasible((0, 0)) {
        return Err(CompileError::InvalidSpec("origin is outside the frontier region".into()));
    }

    // Enumerate feasible lattice points by level (x+y), then build backward.
    let max_level = frontier.iter().map(|&(x, y)| x + y).max().unwrap();
    let mut by_level: Vec<Vec<(i64, i64)>> = Vec::new();
    for level in 0..=max_level {
        let mut pts: Vec<(i64, i64)> = (0..=level)
            .map(|x| (x, level - x))
            .filter(|&p| feasible(p))
            .collect();
        pts.sort_unstable();
        by_level.push(pts);
    }
    let mut b = GameBuilder::new();
    let mut ids: BTreeMap<(i64, i64), NodeId> = BTreeMap::new();
    for level in (0..=max_level).rev() {
        for &p in &by_level[level as usize] {
            if is_frontier(p) {
                let id = b.add_terminal(utility(p.0), utility(p.1));
                b.set_label(id, format!("({},{})", p.0, p.1));
                ids.insert(p, id);
            } else {
                let mut kids = Vec::new();
                for step in [(p.0 + 1, p.1), (p.0, p.1 + 1)] {
                    if let Some(&c) = ids.get(&step) {
                        kids.push(c);
                    }
                }
                if kids.is_empty() {
                    return Err(CompileError::InvalidSpec(format!(
                        "point ({},{}) has no feasible move",
                        p.0, p.1
                    )));
                }
                let id = b.add_internal(kids);
                b.set_label(id, format!("({},{})", p.0, p.1));
                ids.insert(p, id);
            }
        }
    }
    b.set_root(ids[&(0, 0)]);
    Ok(b.build().expect("bargaining lattice is structurally valid"))
}

/// Replaces every node with more than two children by a right-leaning chain of
/// binary nodes preserving child order; terminals and utilities are unchanged.
pub fn expand_to_binary(game: &BiddingGame) -> BiddingGame {
    let n = game.num_nodes();
    let mut b = GameBuilder::new();
    for id in 0..n {
        if game.is_terminal(id) {
            let (u1, u2) = game.utilities(id).unwrap();
            b.add_terminal(u1.clone(), u2.clone());
        } else {
            b.add_internal(Vec::new());
        }
        b.set_external_id(id, game.external_id(id));
        if let Some(l) = game.label(id) {
            b.set_label(id, l);
        }
    }
    let mut next_ext = (0..n).map(|i| game.external_id(i)).max().unwrap_or(0) + 1;
    let mut aux_children: Vec<(NodeId, Vec<NodeId>)> = Vec::new();
    let mut top_children: Vec<(NodeId, Vec<NodeId>)> = Vec::new();
    for id in 0..n {
        let kids = game.children(id);
        if kids.len() <= 2 {
            if !kids.is_empty() {
                top_children.push((id, kids.to_vec()));
            }
            continue;
        }
        // Chain: id keeps kids[0]; auxiliary nodes take over the rest.
        let mut tail: Vec<NodeId> = Vec::new();
        for _ in 0..kids.len() - 2 {
            let aux = b.add_internal(Vec::new());
            b.set_external_id(aux, next_ext);
            next_ext += 1;
            tail.push(aux);
        }
        let mut chain = Vec::new();
        chain.push((id, vec![kids[0], tail[0]]));
        for i in 0..tail.len() {
            let next = if i + 1 < tail.len() {
                vec![kids[i + 1], tail[i + 1]]
            } else {
                vec![kids[i + 1], kids[i + 2]]
            };
            chain.push((tail[i], next));
        }
        aux_children.extend(chain);
    }
    for (id, kids) in top_children.into_iter().chain(aux_children) {
        b.set_children(id, kids);
    }
    b.set_root(game.root());
    b.build().expect("binary expansion preserves validity")
}

/// Unfolds a binary game into a full balanced tree of the same height:
/// shared nodes are cloned per path, single-child nodes get a duplicated
/// child subtree, and early terminals grow balanced copy-subtrees.
pub fn pad_to_balanced(game: &BiddingGame) -> Result<BiddingGame, CompileError> {
    if !game.is_binary() {
        return Err(CompileError::NotBinary);
    }
    let h = game.height_of(game.root());
    let mut b = GameBuilder::new();
    fn copy(
        b: &mut GameBuilder,
        game: &BiddingGame,
        id: NodeId,
        depth_left: u32,
    ) -> NodeId {
        if depth_left == 0 {
            debug_assert!(game.is_terminal(id));
            let (u1, u2) = game.utilities(id).unwrap();
            return b.add_terminal(u1.clone(), u2.clone());
        }
        let kids = game.children(id);
        let (left_src, right_src) = match kids.len() {
            0 => (id, id),
            1 => (kids[0], kids[0]),
            _ => (kids[0], kids[1]),
        };
        let left = copy(b, game, left_src, depth_left - 1);
        let right = copy(b, game, right_src, depth_left - 1);
        b.add_internal(vec![left, right])
    }
    let root = copy(&mut b, game, game.root(), h);
    b.set_root(root);
    Ok(b.build().expect("padded tree is structurally valid"))
}

// ---------------------------------------------------------------------------
// Example games
// ---------------------------------------------------------------------------

/// The hand-built example games exercised throughout the test suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fixture {
    /// Three-round majority: the player moving twice wins. A DAG on the
    /// (times-played, times-played) grid.
    GMaj,
    /// Ternary-root game whose equilibrium outcome is Pareto-dominated at
    /// some budgets and non-monotone for Black.
    GBad,
    /// Small chain game with two distinct equilibria at equal budgets.
    GTwo,
    /// Two win-`k`-times-in-a-row chains with shared drop-out leaves.
    Gk(u32),
    /// Height-3 win/lose game with per-state tie winners (see
    /// [`hgame_tie_breaks`]); used to probe equilibrium non-existence.
    HGame,
    /// Stop-or-continue chain where the pot doubles each round.
    Centipede(u32),
}

impl Fixture {
    /// Canonical file-stem / CLI name, e.g. `gk4`, `centipede10`.
    pub fn name(self) -> String {
        match self {
            Fixture::GMaj => "gmaj".into(),
            Fixture::GBad => "gbad".into(),
            Fixture::GTwo => "gtwo".into(),
            Fixture::Gk(k) => format!("gk{k}"),
            Fixture::HGame => "hgame".into(),
            Fixture::Centipede(n) => format!("centipede{n}"),
        }
    }

    /// Parses a fixture name as accepted by the CLI.
    pub fn parse(name: &str) -> Result<Fixture, CompileError> {
        let bad = || CompileError::UnknownFixture(name.to_string());
        match name {
            "gmaj" => Ok(Fixture::GMaj),
            "gbad" => Ok(Fixture::GBad),
            "gtwo" => Ok(Fixture::GTwo),
            "hgame" => Ok(Fixture::HGame),
            _ => {
                if let Some(k) = name.strip_prefix("gk") {
                    let k: u32 = k.parse().map_err(|_| bad())?;
                    if k < 2 {
                        return Err(bad());
                    }
                    Ok(Fixture::Gk(k))
                } else if let Some(n) = name.strip_prefix("centipede") {
                    let n: u32 = n.parse().map_err(|_| bad())?;
                    if n < 1 {
                        return Err(bad());
                    }
                    Ok(Fixture::Centipede(n))
                } else {
                    Err(bad())
                }
            }
        }
    }
}

/// Builds a fixture game. Node ids are stable and documented per game.
pub fn fixture(which: Fixture) -> BiddingGame {
    match which {
        Fixture::GMaj => gmaj(),
        Fixture::GBad => gbad(),
        Fixture::GTwo => gtwo(),
        Fixture::Gk(k) => gk(k),
        Fixture::HGame => hgame(),
        Fixture::Centipede(n) => centipede(n),
    }
}

/// Majority game: ids 0:(0,0) root, 1:(1,0), 2:(0,1), 3:(2,0) [win White],
/// 4:(1,1) shared, 5:(0,2) [win Black], 6:(2,1) [White], 7:(1,2) [Black].
fn gmaj() -> BiddingGame {
    let mut b = GameBuilder::new();
    let s0 = b.add_internal(vec![1, 2]);
    let w1 = b.add_internal(vec![3, 4]);
    let b1 = b.add_internal(vec![4, 5]);
    let ww = b.add_terminal_int(1, 0);
    let mid = b.add_internal(vec![6, 7]);
    let bb = b.add_terminal_int(0, 1);
    let wbw = b.add_terminal_int(1, 0);
    let wbb = b.add_terminal_int(0, 1);
    for (id, label) in [
        (s0, "(0,0)"),
        (w1, "(1,0)"),
        (b1, "(0,1)"),
        (ww, "(2,0)"),
        (mid, "(1,1)"),
        (bb, "(0,2)"),
        (wbw, "(2,1)"),
        (wbb, "(1,2)"),
    ] {
        b.set_label(id, label);
    }
    b.set_root(s0);
    b.build().unwrap()
}

/// Ternary root over terminals (1,8), (2,1) and a sub-chain reaching (0,9)
/// twice and (10,7). Ids: 0 root, 1:(1,8), 2:(2,1), 3:x, 4:(0,9), 5:y,
/// 6:(0,9), 7:(10,7).
fn gbad() -> BiddingGame {
    let mut b = GameBuilder::new();
    let root = b.add_internal(vec![1, 2, 3]);
    b.add_terminal_int(1, 8);
    b.add_terminal_int(2, 1);
    let x = b.add_internal(vec![4, 5]);
    b.add_terminal_int(0, 9);
    let y = b.add_internal(vec![6, 7]);
    b.add_terminal_int(0, 9);
    b.add_terminal_int(10, 7);
    b.set_label(root, "s0");
    b.set_label(x, "x");
    b.set_label(y, "y");
    b.set_root(root);
    b.build().unwrap()
}

/// Chain with two equilibria at equal budgets. Ids: 0 root, 1:(2,2), 2:x,
/// 3:(5,5), 4:y, 5:(9,1), 6:(1,9).
fn gtwo() -> BiddingGame {
    let mut b = GameBuilder::new();
    let s0 = b.add_internal(vec![1, 2]);
    b.add_terminal_int(2, 2);
    let x = b.add_internal(vec![3, 4]);
    b.add_terminal_int(5, 5);
    let y = b.add_internal(vec![5, 6]);
    b.add_terminal_int(9, 1);
    b.add_terminal_int(1, 9);
    b.set_label(s0, "s0");
    b.set_label(x, "x");
    b.set_label(y, "y");
    b.set_root(s0);
    b.build().unwrap()
}

/// Two chains of length k-1 from the root; continuing to the end of either
/// chain yields a deep leaf ((7,9) below x, (9,7) below y), while every chain
/// node can instead drop to a shared side leaf ((8,1) on the x side, (1,8) on
/// the y side). Ids: 0 root; x-chain 1..=k-1; y-chain k..=2k-2; deep leaves
/// 2k-1 (x) and 2k (y); side leaves 2k+1 (x) and 2k+2 (y).
fn gk(k: u32) -> BiddingGame {
    assert!(k >= 2, "gk needs k >= 2");
    let k = k as usize;
    let deep_x = 2 * k - 1;
    let deep_y = 2 * k;
    let side_x = 2 * k + 1;
    let side_y = 2 * k + 2;
    let mut b = GameBuilder::new();
    let root = b.add_internal(vec![1, k]);
    b.set_label(root, "s0");
    for j in 1..k {
        let next = if j < k - 1 { j + 1 } else { deep_x };
        let id = b.add_internal(vec![next, side_x]);
        b.set_label(id, format!("x{j}"));
    }
    for j in 1..k {
        let next = if j < k - 1 { k + j } else { deep_y };
        let id = b.add_internal(vec![next, side_y]);
        b.set_label(id, format!("y{j}"));
    }
    let dx = b.add_terminal_int(7, 9);
    let dy = b.add_terminal_int(9, 7);
    let sx = b.add_terminal_int(8, 1);
    let sy = b.add_terminal_int(1, 8);
    assert_eq!((dx, dy, sx, sy), (deep_x, deep_y, side_x, side_y));
    b.set_root(root);
    b.build().unwrap()
}

/// Height-3 win/lose game built to have no equilibrium under its per-state
/// tie winners. Ids: 0 s0, 1 x, 2 y, 3 x', 4 y'; terminals 5,6,10 favor White
/// (1,-1) and 7,8,9 favor Black (-1,1).
fn hgame() -> BiddingGame {
    let mut b = GameBuilder::new();
    let s0 = b.add_internal(vec![1, 2]);
    let x = b.add_internal(vec![5, 3]);
    let y = b.add_internal(vec![8, 4]);
    let xp = b.add_internal(vec![6, 7]);
    let yp = b.add_internal(vec![9, 10]);
    b.add_terminal_int(1, -1); // 5: x stops white-high
    b.add_terminal_int(1, -1); // 6: x' white-high
    b.add_terminal_int(-1, 1); // 7: x' black-high
    b.add_terminal_int(-1, 1); // 8: y stops black-high
    b.add_terminal_int(-1, 1); // 9: y' black-high
    b.add_terminal_int(1, -1); // 10: y' white-high
    for (id, label) in [(s0, "s0"), (x, "x"), (y, "y"), (xp, "x'"), (yp, "y'")] {
        b.set_label(id, label);
    }
    b.set_root(s0);
    b.build().unwrap()
}

/// Tie winners for [`Fixture::HGame`], keyed by external node id: the root and
/// the y-side favor Black, the x-side favors White.
pub fn hgame_tie_breaks() -> BTreeMap<u64, Player> {
    BTreeMap::from([
        (0, Player::Black),
        (1, Player::White),
        (3, Player::White),
        (2, Player::Black),
        (4, Player::Black),
    ])
}

/// Stop-or-continue chain of `n` rounds where the pot doubles each round and
/// the player who stops collects one extra unit: stopping at round `r < n`
/// pays `(2^r + 1, 2^r)` when `r` is odd and `(2^r, 2^r + 1)` when even; at
/// round `n` both stopping and continuing pay the doubled pot, so exactly the
/// last two leaves are efficient. Ids: internals 0..n-1 (round j+1), stop
/// leaves n..2n-1, final continue leaf 2n.
fn centipede(n: u32) -> BiddingGame {
    assert!(n >= 1, "centipede needs n >= 1");
    let n = n as usize;
    let pot = |r: usize| -> (i64, i64) {
        let base = 1i64 << r;
        if r % 2 == 1 {
            (base + 1, base)
        } else {
            (base, base + 1)
        }
    };
    let mut b = GameBuilder::new();
    for j in 0..n {
        let stop_leaf = n + j;
        let next = if j + 1 < n { j + 1 } else { 2 * n };
        let id = b.add_internal(vec![stop_leaf, next]);
        b.set_label(id, format!("round{}", j + 1));
    }
    for j in 0..n {
        let (u1, u2) = pot(j + 1);
        b.add_terminal_int(u1, u2);
    }
    let (u1, u2) = pot(n);
    // The final continue leaf mirrors the final stop leaf's pot with the
    // bonus flipped to the other player.
    b.add_terminal_int(u2, u1);
    b.set_root(0);
    b.build().unwrap()
}

// ---------------------------------------------------------------------------
// SSA / bargaining file formats
// ---------------------------------------------------------------------------

impl SsaSpec {
    /// Parses `{"k", "order"? (1-based), "valuation": {"type": ...}}`.
    ///
    /// Valuation payloads: `table` carries `v1`/`v2` objects keyed by bundle
    /// bitmask; `additive` carries `v1`/`v2` integer arrays; `multiweight`
    /// carries `weights` (array of per-item arrays) and `f1`/`f2` objects
    /// keyed by comma-joined weight sums. All values are exact integers or
    /// `"p/q"` strings.
    pub fn from_json_str(s: &str) -> Result<Self, CompileError> {
        let bad = |m: String| CompileError::InvalidSpec(m);
        let v: serde_json::Value =
            serde_json::from_str(s).map_err(|e| bad(e.to_string()))?;
        let obj = v
            .as_object()
            .ok_or_else(|| bad("top level must be an object".into()))?;
        let k = obj
            .get("k")
            .and_then(|k| k.as_u64())
            .ok_or_else(|| bad("missing integer \"k\"".into()))? as u32;
        let order = match obj.get("order") {
            None => (0..k as usize).collect(),
            Some(o) => {
                let arr = o.as_array().ok_or_else(|| bad("\"order\" must be an array".into()))?;
                arr.iter()
                    .map(|x| {
                        x.as_u64()
                            .filter(|&i| i >= 1)
                            .map(|i| (i - 1) as usize)
                            .ok_or_else(|| bad(format!("bad order entry {x}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?
            }
        };
        let val = obj
            .get("valuation")
            .and_then(|v| v.as_object())
            .ok_or_else(|| bad("missing \"valuation\" object".into()))?;
        let typ = val
            .get("type")
            .and_then(|t| t.as_str())
            .ok_or_else(|| bad("valuation missing \"type\"".into()))?;
        let rational = |v: &serde_json::Value| -> Result<Utility, CompileError> {
            match v {
                serde_json::Value::Number(n) => n
                    .as_i64()
                    .map(utility)
                    .ok_or_else(|| bad(format!("value {n} is not an exact integer"))),
                serde_json::Value::String(s) => {
                    crate::game::parse_rational(s).map_err(|e| bad(e.to_string()))
                }
                other => Err(bad(format!("bad value {other}"))),
            }
        };
        let valuation = match typ {
            "table" => {
                if k >= 26 {
                    return Err(bad(format!("table valuation with k = {k} items")));
                }
                let read_table = |key: &str| -> Result<Vec<Utility>, CompileError> {
                    let t = val
                        .get(key)
                        .and_then(|t| t.as_object())
                        .ok_or_else(|| bad(format!("table valuation missing {key:?}")))?;
                    let mut out = vec![None; 1usize << k];
                    for (mask, v) in t {
                        let m: usize =
                            mask.parse().map_err(|_| bad(format!("bad bundle key {mask:?}")))?;
                        if m >= out.len() {
                            return Err(bad(format!("bundle {m} out of range for k={k}")));
                        }
                        out[m] = Some(rational(v)?);
                    }
                    out.into_iter()
                        .enumerate()
                        .map(|(m, v)| v.ok_or_else(|| bad(format!("bundle {m} missing from {key}"))))
                        .collect()
                };
                Valuation::Table { v1: read_table("v1")?, v2: read_table("v2")? }
            }
            "additive" => {
                let read = |key: &str| -> Result<Vec<i64>, CompileError> {
                    val.get(key)
                        .and_then(|a| a.as_array())
                        .ok_or_else(|| bad(format!("additive valuation missing {key:?}")))?
                        .iter()
                        .map(|x| x.as_i64().ok_or_else(|| bad(format!("bad item value {x}"))))
                        .collect()
                };
                Valuation::Additive { v1: read("v1")?, v2: read("v2")? }
            }
            "multiweight" => {
                let weights = val
                    .get("weights")
                    .and_then(|w| w.as_array())
                    .ok_or_else(|| bad("multiweight missing \"weights\"".into()))?
                    .iter()
                    .map(|row| {
                        row.as_array()
                            .ok_or_else(|| bad("weights rows must be arrays".into()))?
                            .iter()
                            .map(|x| x.as_u64().ok_or_else(|| bad(format!("bad weight {x}"))))
                            .collect::<Result<Vec<u64>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let read_f = |key: &str| -> Result<BTreeMap<Vec<u64>, Utility>, CompileError> {
                    let t = val
                        .get(key)
                        .and_then(|t| t.as_object())
                        .ok_or_else(|| bad(format!("multiweight missing {key:?}")))?;
                    let mut out = BTreeMap::new();
                    for (tuple, v) in t {
                        let sums = tuple
                            .split(',')
                            .map(|x| {
                                x.trim()
                                    .parse::<u64>()
                                    .map_err(|_| bad(format!("bad tuple key {tuple:?}")))
                            })
                            .collect::<Result<Vec<u64>, _>>()?;
                        out.insert(sums, rational(v)?);
                    }
                    Ok(out)
                };
                Valuation::MultiWeight { weights, f1: read_f("f1")?, f2: read_f("f2")? }
            }
            other => return Err(bad(format!("unknown valuation type {other:?}"))),
        };
        let spec = SsaSpec { k, order, valuation };
        spec.validate()?;
        Ok(spec)
    }
}

impl BargainingSpec {
    /// Parses `{"frontier": [[x, y], ...]}`.
    pub fn from_json_str(s: &str) -> Result<Self, CompileError> {
        let bad = |m: String| CompileError::InvalidSpec(m);
        let v: serde_json::Value =
            serde_json::from_str(s).map_err(|e| bad(e.to_string()))?;
        let pts = v
            .get("frontier")
            .and_then(|f| f.as_array())
            .ok_or_else(|| bad("missing \"frontier\" array".into()))?;
        let frontier = pts
            .iter()
            .map(|p| {
                let pair = p
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| bad(format!("bad frontier point {p}")))?;
                let x = pair[0].as_i64().ok_or_else(|| bad(format!("bad coordinate {}", pair[0])))?;
                let y = pair[1].as_i64().ok_or_else(|| bad(format!("bad coordinate {}", pair[1])))?;
                Ok((x, y))
            })
            .collect::<Result<Vec<_>, CompileError>>()?;
        Ok(BargainingSpec { frontier })
    }
}

/// Evaluates a bundle's worth under any valuation kind; used to cross-check
/// the DP compilers against the explicit tree.
pub fn bundle_value(
    spec: &SsaSpec,
    player: Player,
    mask: u64,
) -> Result<Utility, CompileError> {
    spec.bundle_value(player, mask)
}
