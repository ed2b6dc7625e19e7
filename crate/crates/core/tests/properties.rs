//! Property-based checks of structural invariants: exact dyadic arithmetic,
//! preference-order laws, frontier computation, solver table shape, and
//! interval-profile geometry.

mod common;

use std::cmp::Ordering;
use std::collections::BTreeSet;

use proptest::prelude::*;
use scripbid_core::random::{random_binary_tree, random_tree};
use scripbid_core::richman::{satisfaction_rank, to_win_lose};
use scripbid_core::solver_fast::find_pspe_fast;
use scripbid_core::solver_grid::{find_lower_pspe_grid, GridConfig};
use scripbid_core::{pair_cmp, pareto_set, Dyadic, Player, PreferenceOrder};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dyadic_add_sub_round_trips(
        an in -1_000_000i64..1_000_000,
        ak in 0u32..20,
        bn in -1_000_000i64..1_000_000,
        bk in 0u32..20,
    ) {
        let a = Dyadic::new(an, ak);
        let b = Dyadic::new(bn, bk);
        prop_assert_eq!(&(&(&a + &b) - &b), &a);
        prop_assert_eq!(&(&(&a - &b) + &b), &a);
    }

    #[test]
    fn dyadic_order_matches_rational_order(
        an in -1_000_000i64..1_000_000,
        ak in 0u32..20,
        bn in -1_000_000i64..1_000_000,
        bk in 0u32..20,
    ) {
        let a = Dyadic::new(an, ak);
        let b = Dyadic::new(bn, bk);
        prop_assert_eq!(a.cmp(&b), a.to_rational().cmp(&b.to_rational()));
        prop_assert_eq!(a.cmp_rational(&b.to_rational()), a.cmp(&b));
        prop_assert_eq!(
            (&a + &b).to_rational(),
            a.to_rational() + b.to_rational()
        );
    }

    #[test]
    fn preference_order_is_total_transitive_and_antisymmetric(seed in 0u64..10_000) {
        let g = random_tree(seed, 3, 3);
        let ranks = PreferenceOrder::new(&g);
        let ts = g.terminals();
        for p in [Player::White, Player::Black] {
            for &a in ts {
                for &b in ts {
                    // Ranks realize the lexicographic pair comparison.
                    let ua = g.utilities(a).unwrap();
                    let ub = g.utilities(b).unwrap();
                    let by_rank = ranks.rank(p, a).cmp(&ranks.rank(p, b));
                    prop_assert_eq!(by_rank, pair_cmp(p, ua, ub));
                    // Antisymmetry: equal ranks force equal utility pairs.
                    if by_rank == Ordering::Equal {
                        prop_assert_eq!(ua, ub);
                    }
                    // Transitivity via a third terminal.
                    for &c in ts {
                        if pair_cmp(p, ua, ub) != Ordering::Less
                            && pair_cmp(p, ub, g.utilities(c).unwrap()) != Ordering::Less
                        {
                            prop_assert_ne!(
                                pair_cmp(p, ua, g.utilities(c).unwrap()),
                                Ordering::Less
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn pareto_set_matches_brute_force_filter(seed in 0u64..10_000) {
        // Wide shallow trees give frontiers with ties and interior points.
        let g = random_tree(seed, 4, 4);
        prop_assert_eq!(pareto_set(&g), common::brute_pareto_ids(&g));
    }

    #[test]
    fn grid_tables_respect_feasibility_and_consistency(seed in 0u64..10_000) {
        let g = random_tree(seed, 3, 3);
        let (tables, mu) = find_lower_pspe_grid(&g, &GridConfig::default()).unwrap();
        let units = tables.units();
        for s in 0..g.num_nodes() {
            for c in 0..=units {
                if g.is_terminal(s) {
                    prop_assert_eq!(tables.t_star(s, c), s);
                    continue;
                }
                let (b1, ch1) = tables.white_action(s, c);
                let (b2, ch2) = tables.black_action(s, c);
                prop_assert!(b1 <= c, "white bid exceeds budget");
                prop_assert!(b2 <= units - c, "black bid exceeds budget");
                prop_assert!(g.children(s).contains(&ch1));
                prop_assert!(g.children(s).contains(&ch2));
                let (winner_child, idx) = if b1 >= b2 {
                    (ch1, c - b1)
                } else {
                    (ch2, c + b2)
                };
                prop_assert_eq!(tables.t_star(s, c), tables.t_star(winner_child, idx));
            }
        }
        // The compressed map is a total step function on [0, 1].
        prop_assert_eq!(&mu.cutoffs[0], &Dyadic::zero());
        prop_assert!(mu.cutoffs.windows(2).all(|w| w[0] < w[1]));
        let distinct: BTreeSet<_> = mu.outcomes.iter().collect();
        prop_assert!(distinct.len() <= g.terminals().len());
    }

    #[test]
    fn outcome_map_cutoffs_lie_on_the_height_grid(seed in 0u64..10_000) {
        let g = random_binary_tree(seed, 5);
        let (_, mu) = find_lower_pspe_grid(&g, &GridConfig::default()).unwrap();
        let h = g.height();
        for cutoff in &mu.cutoffs {
            prop_assert!(
                cutoff.units_at_scale(h).is_some(),
                "cutoff {cutoff} off the 1/2^{h} grid"
            );
        }
    }

    #[test]
    fn interval_profiles_are_small_sorted_and_monotone(seed in 0u64..10_000) {
        let g = random_binary_tree(seed, 5);
        let sol = find_pspe_fast(&g).unwrap();
        let frontier_pairs = common::brute_pareto_pairs(&g);
        for s in 0..g.num_nodes() {
            let p = sol.profile(s);
            // Cutoffs strictly increasing from zero.
            prop_assert_eq!(p.cutoff_units()[0], 0);
            prop_assert!(p.cutoff_units().windows(2).all(|w| w[0] < w[1]));
            // Size bound: intervals never outnumber subgame terminals + 1.
            let subgame_terminals = count_subgame_terminals(&g, s);
            prop_assert!(p.len() <= subgame_terminals + 1, "profile too long");
            // Outcomes monotone: u1 weakly rises, u2 weakly falls.
            for w in p.outcomes().windows(2) {
                let a = g.utilities(w[0]).unwrap();
                let b = g.utilities(w[1]).unwrap();
                prop_assert!(b.0 >= a.0 && b.1 <= a.1);
            }
        }
        // Root outcomes all lie on the Pareto frontier.
        for &t in sol.profile(g.root()).outcomes() {
            prop_assert!(frontier_pairs.contains(g.utilities(t).unwrap()));
        }
        // Every cutoff is dyadic with scale at most the height.
        for cutoff in sol.cutoffs_of(g.root()) {
            prop_assert!(cutoff.units_at_scale(g.height()).is_some());
        }
    }

    #[test]
    fn win_lose_relabeling_respects_rank_thresholds(seed in 0u64..10_000) {
        let g = random_tree(seed, 3, 3);
        let terminals = g.terminals().len();
        for p in [Player::White, Player::Black] {
            let all = to_win_lose(&g, p, 0);
            let top = to_win_lose(&g, p, terminals);
            for &t in g.terminals() {
                prop_assert_eq!(all.winner(t), Some(p), "rank 0 admits every terminal");
                let r = satisfaction_rank(&g, t, p);
                prop_assert_eq!(top.winner(t) == Some(p), r >= terminals);
                let mid = to_win_lose(&g, p, r);
                prop_assert_eq!(mid.winner(t), Some(p), "a terminal meets its own rank");
            }
        }
    }
}

fn count_subgame_terminals(g: &scripbid_core::BiddingGame, s: scripbid_core::NodeId) -> usize {
    let mut seen = BTreeSet::new();
    let mut stack = vec![s];
    while let Some(x) = stack.pop() {
        if g.is_terminal(x) {
            seen.insert(x);
            continue;
        }
        for &ch in g.children(x) {
            stack.push(ch);
        }
    }
    seen.len()
}
