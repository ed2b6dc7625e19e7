//! Brute-force oracles shared by the integration tests, kept deliberately
//! independent of the library's own algorithms.

use num::rational::BigRational;
use num::{One, Zero};
use scripbid_core::richman::ZeroSumGame;
use scripbid_core::{BiddingGame, NodeId, Player, Utility};

/// Probability that Black wins the fair-coin random-turn version of `zs`
/// when both players play optimally. Computed by enumerating one player's
/// pure strategies exhaustively and best-responding with the other — not the
/// averaging recurrence the library uses. Panics if the two enumeration
/// orders disagree (the random-turn game must have a pure saddle point).
#[allow(dead_code)]
pub fn spinner_black_win_probability(zs: &ZeroSumGame) -> BigRational {
    let internal: Vec<NodeId> = (0..zs.num_nodes())
        .filter(|&s| !zs.is_terminal(s))
        .collect();
    let minimax = committed_value(zs, &internal, Player::White);
    let maximin = committed_value(zs, &internal, Player::Black);
    assert_eq!(minimax, maximin, "no pure saddle point");
    minimax
}

/// Optimal Black-win probability when `fixed` commits to a pure strategy
/// first (enumerated exhaustively) and the opponent best-responds.
fn committed_value(zs: &ZeroSumGame, internal: &[NodeId], fixed: Player) -> BigRational {
    let mut choice = vec![0usize; internal.len()];
    let mut best: Option<BigRational> = None;
    loop {
        let mut strategy = vec![usize::MAX; zs.num_nodes()];
        for (i, &s) in internal.iter().enumerate() {
            strategy[s] = zs.moves(fixed, s)[choice[i]];
        }
        let mut memo: Vec<Option<BigRational>> = vec![None; zs.num_nodes()];
        let v = response_value(zs, &strategy, fixed, zs.root(), &mut memo);
        best = Some(match best {
            None => v,
            Some(b) if fixed == Player::White => b.min(v),
            Some(b) => b.max(v),
        });
        let mut k = 0;
        while k < internal.len() {
            choice[k] += 1;
            if choice[k] < zs.moves(fixed, internal[k]).len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
        if k == internal.len() {
            break;
        }
    }
    best.expect("at least one strategy")
}

/// Black-win probability at `s` when `fixed` plays `strategy` and the
/// opponent best-responds, by memoized backward induction.
fn response_value(
    zs: &ZeroSumGame,
    strategy: &[usize],
    fixed: Player,
    s: NodeId,
    memo: &mut Vec<Option<BigRational>>,
) -> BigRational {
    if let Some(v) = &memo[s] {
        return v.clone();
    }
    let v = if zs.is_terminal(s) {
        match zs.winner(s).expect("terminal is labeled") {
            Player::Black => BigRational::one(),
            Player::White => BigRational::zero(),
        }
    } else {
        let committed = response_value(zs, strategy, fixed, strategy[s], memo);
        let free = fixed.other();
        let mut reply: Option<BigRational> = None;
        for &ch in zs.moves(free, s) {
            let v = response_value(zs, strategy, fixed, ch, memo);
            reply = Some(match reply {
                None => v,
                Some(acc) if free == Player::White => acc.min(v),
                Some(acc) => acc.max(v),
            });
        }
        let reply = reply.expect("non-terminals have moves");
        (committed + reply) / BigRational::from_integer(2.into())
    };
    memo[s] = Some(v.clone());
    v
}

/// O(|T|²) dominance filter over terminal ids: a terminal survives iff no
/// terminal's utility pair beats it in one coordinate without losing the
/// other.
#[allow(dead_code)]
pub fn brute_pareto_ids(game: &BiddingGame) -> Vec<NodeId> {
    let ts = game.terminals();
    let pair = |t: NodeId| game.utilities(t).expect("terminal");
    let mut out: Vec<NodeId> = ts
        .iter()
        .copied()
        .filter(|&t| {
            let p = pair(t);
            !ts.iter().any(|&q| {
                let qp = pair(q);
                qp.0 >= p.0 && qp.1 >= p.1 && qp != p
            })
        })
        .collect();
    out.sort_unstable();
    out
}

/// Utility pairs of the brute-force Pareto frontier.
#[allow(dead_code)]
pub fn brute_pareto_pairs(game: &BiddingGame) -> std::collections::BTreeSet<(Utility, Utility)> {
    brute_pareto_ids(game)
        .into_iter()
        .map(|t| game.utilities(t).expect("terminal").clone())
        .collect()
}
