//! Seeded random game generators for property tests and self-test fixtures.
//! All generators are deterministic functions of the seed.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::game::{BiddingGame, GameBuilder, NodeId, Player};
use crate::richman::ZeroSumGame;

/// Random binary tree with at most `max_height` levels of auctions and
/// utilities that are distinct integers in [0,100] separately for each
/// player (generic preferences: no ties in either player's ranking).
pub fn random_binary_tree(seed: u64, max_height: u32) -> BiddingGame {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cap = (1usize << max_height.min(6)).min(48);
    let leaves = rng.gen_range(2..=cap.max(2));
    let mut u1: Vec<i64> = (0..=100).collect();
    let mut u2: Vec<i64> = (0..=100).collect();
    u1.shuffle(&mut rng);
    u2.shuffle(&mut rng);
    let mut pool = u1.into_iter().zip(u2).take(leaves);
    let mut b = GameBuilder::new();
    let root = grow_binary(&mut b, &mut rng, leaves, max_height, &mut pool);
    b.set_root(root);
    b.build().expect("generated tree is well formed")
}

fn grow_binary(
    b: &mut GameBuilder,
    rng: &mut ChaCha8Rng,
    leaves: usize,
    height: u32,
    pool: &mut impl Iterator<Item = (i64, i64)>,
) -> NodeId {
    if leaves == 1 {
        let (u1, u2) = pool.next().expect("utility pool sized to leaf count");
        return b.add_terminal_int(u1, u2);
    }
    // Split the leaf budget so both sides fit under the height limit.
    let cap = 1usize << (height - 1).min(20);
    let lo = leaves.saturating_sub(cap).max(1);
    let hi = (leaves - 1).min(cap);
    let left_leaves = rng.gen_range(lo..=hi);
    let l = grow_binary(b, rng, left_leaves, height - 1, pool);
    let r = grow_binary(b, rng, leaves - left_leaves, height - 1, pool);
    b.add_internal(vec![l, r])
}

/// Random tree with 2..=`max_branch` children per node, height ≤
/// `max_height`, and integer utilities in [0,100] with duplicates allowed
/// (exercises tie handling in the generic order).
pub fn random_tree(seed: u64, max_height: u32, max_branch: usize) -> BiddingGame {
    assert!(max_branch >= 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = GameBuilder::new();
    let root = grow_tree(&mut b, &mut rng, max_height, max_branch);
    b.set_root(root);
    b.build().expect("generated tree is well formed")
}

fn grow_tree(
    b: &mut GameBuilder,
    rng: &mut ChaCha8Rng,
    height: u32,
    max_branch: usize,
) -> NodeId {
    if height == 0 || rng.gen_ratio(1, 4) {
        return b.add_terminal_int(rng.gen_range(0..=100), rng.gen_range(0..=100));
    }
    let n = rng.gen_range(2..=max_branch);
    let kids: Vec<NodeId> = (0..n).map(|_| grow_tree(b, rng, height - 1, max_branch)).collect();
    b.add_internal(kids)
}

/// Full binary tree of exactly `height` levels (2^height terminals) with
/// per-player distinct utilities; `height` ≤ 6 keeps the pool in [0,100].
pub fn random_full_binary_tree(seed: u64, height: u32) -> BiddingGame {
    assert!(height <= 6, "utility pool supports at most 64 terminals");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let leaves = 1usize << height;
    let mut u1: Vec<i64> = (0..=100).collect();
    let mut u2: Vec<i64> = (0..=100).collect();
    u1.shuffle(&mut rng);
    u2.shuffle(&mut rng);
    let mut pool = u1.into_iter().zip(u2).take(leaves);
    let mut b = GameBuilder::new();
    let root = grow_full(&mut b, height, &mut pool);
    b.set_root(root);
    b.build().expect("generated tree is well formed")
}

fn grow_full(
    b: &mut GameBuilder,
    height: u32,
    pool: &mut impl Iterator<Item = (i64, i64)>,
) -> NodeId {
    if height == 0 {
        let (u1, u2) = pool.next().expect("utility pool sized to leaf count");
        return b.add_terminal_int(u1, u2);
    }
    let l = grow_full(b, height - 1, pool);
    let r = grow_full(b, height - 1, pool);
    b.add_internal(vec![l, r])
}

/// Random acyclic win/lose game with at most `max_nodes` nodes. Edges point
/// forward in node order, so sharing (DAG joins) arises naturally; every
/// internal node has one or two moves per player.
pub fn random_zero_sum_dag(seed: u64, max_nodes: usize) -> ZeroSumGame {
    assert!(max_nodes >= 3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(3..=max_nodes);
    let terminals = rng.gen_range(1..=2.min(n - 1));
    let first_terminal = n - terminals;
    let mut white_moves: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    let mut black_moves: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    let mut winner: Vec<Option<Player>> = vec![None; n];
    for s in 0..first_terminal {
        for moves in [&mut white_moves, &mut black_moves] {
            let k = rng.gen_range(1..=2);
            for _ in 0..k {
                moves[s].push(rng.gen_range(s + 1..n));
            }
            moves[s].dedup();
        }
    }
    for s in first_terminal..n {
        winner[s] = Some(if rng.gen_bool(0.5) { Player::White } else { Player::Black });
    }
    ZeroSumGame::new(0, white_moves, black_moves, winner, vec![None; n], None)
        .expect("generated dag is well formed")
}
