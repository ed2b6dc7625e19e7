use scripbid_core::compilers::{compile_additive, compile_bargaining, BargainingSpec, SsaSpec};
use scripbid_core::game::BiddingGame;
use scripbid_core::random::{random_binary_tree, random_tree};
use scripbid_core::solver_fast::find_pspe_fast;
use scripbid_core::solver_grid::{find_lower_pspe_grid, GridConfig};

fn check_all_nodes(name: &str, g: &BiddingGame) {
    let sol = find_pspe_fast(g).unwrap();
    let (tables, _) = find_lower_pspe_grid(g, &GridConfig::default()).unwrap();
    assert_eq!(sol.total_units(), tables.units() as u64, "{name}: unit mismatch");
    for s in 0..g.num_nodes() {
        if g.is_terminal(s) {
            continue;
        }
        let p = sol.profile(s);
        for c in 0..=tables.units() {
            let units = c as u64;
            let idx = p.cutoff_units().partition_point(|&x| x <= units) - 1;
            let fast_t = p.outcomes()[idx];
            let grid_t = tables.t_star(s, c);
            assert_eq!(
                fast_t, grid_t,
                "{name}: node {s} cell {c}/{}: fast {fast_t} grid {grid_t}\n  cutoffs {:?}\n  outcomes {:?}",
                tables.units(),
                p.cutoff_units(),
                p.outcomes()
            );
        }
    }
}

#[test]
fn stress_distinct_utility_trees() {
    for seed in 0..100 {
        let g = random_binary_tree(seed, 5);
        check_all_nodes(&format!("distinct seed {seed}"), &g);
    }
}

#[test]
fn stress_tie_heavy_trees() {
    for seed in 0..100 {
        let g = random_tree(seed, 5, 2);
        check_all_nodes(&format!("ties seed {seed}"), &g);
    }
}

#[test]
fn stress_small_utility_range_trees() {
    // Utilities in a tiny range make equal-value distinct terminals common.
    use scripbid_core::game::GameBuilder;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    fn grow(b: &mut GameBuilder, rng: &mut ChaCha8Rng, h: u32) -> usize {
        if h == 0 || rng.gen_ratio(1, 5) {
            return b.add_terminal_int(rng.gen_range(0..=2), rng.gen_range(0..=2));
        }
        let l = grow(b, rng, h - 1);
        let r = grow(b, rng, h - 1);
        b.add_internal(vec![l, r])
    }
    for seed in 0..150 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut b = GameBuilder::new();
        let root = grow(&mut b, &mut rng, 5);
        b.set_root(root);
        let g = b.build().unwrap();
        if g.is_terminal(g.root()) {
            continue;
        }
        check_all_nodes(&format!("tiny-range seed {seed}"), &g);
    }
}

#[test]
fn stress_compiled_dags() {
    // k = 7 already overflows the grid solver's cell cap; the exact-interval
    // solver is the only route past that point.
    for k in 2..=6 {
        let g = compile_additive(&SsaSpec::identical_items(k)).unwrap();
        check_all_nodes(&format!("additive k={k}"), &g);
    }
    // n = 16 needs 2^18 grid cells per node, past the grid cap as well.
    for n in [4, 7, 9, 11] {
        let g = compile_bargaining(&BargainingSpec::linear(n)).unwrap();
        check_all_nodes(&format!("bargaining n={n}"), &g);
    }
}
