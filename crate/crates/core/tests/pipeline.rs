use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use vaxprice::market::INTERIORITY_THRESHOLD;
use vaxprice::sweep::{read_rows_csv, write_rows_csv};
use vaxprice::{
    bundled_historical, default_sweep_grid, evaluate_point, load_historical, oracle_solve,
    run_sweep, solve, summarize, OracleOutcome, PriceBand, ReducedProblem, RowStatus,
    ScenarioConfig, SolveStatus, Tolerances,
};

fn problem(cfg: &ScenarioConfig) -> ReducedProblem {
    ReducedProblem::from_scenario(&bundled_historical(), cfg).unwrap()
}

/// (D, targets, costs, realized profits, which profits exceed their target)
type Reference = (f64, [f64; 2], [f64; 2], [f64; 2], [bool; 2]);

const REFERENCE: [Reference; 5] = [
    (
        174.5,
        [234.0, 41.4],
        [31.96, 31.96],
        [234.0, 90.2],
        [false, true],
    ),
    (
        157.05,
        [234.0, 41.4],
        [31.96, 31.96],
        [234.0, 41.4],
        [false, false],
    ),
    (
        174.5,
        [25.7, 41.4],
        [23.44, 31.96],
        [1015.9, 41.4],
        [true, false],
    ),
    (
        174.5,
        [234.0, 41.4],
        [23.44, 31.96],
        [1015.9, 41.4],
        [true, false],
    ),
    (
        157.05,
        [25.7, 496.0],
        [31.96, 23.44],
        [25.7, 496.0],
        [false, false],
    ),
];

#[test]
fn published_profits_bind_or_exceed_targets() {
    let tol = Tolerances::default();
    for (i, &(d, target, cost, profit, above)) in REFERENCE.iter().enumerate() {
        let cfg = ScenarioConfig::with_factors(i as u32 + 1, d, 0.75, target, cost);
        let sol = solve(&problem(&cfg), &tol).unwrap();
        assert_eq!(sol.status, SolveStatus::Interior, "scenario {}", i + 1);
        for m in 0..2 {
            if above[m] {
                assert!(
                    sol.realized_profit[m] > target[m] + 1.0,
                    "scenario {} m{m}",
                    i + 1
                );
                assert_abs_diff_eq!(sol.realized_profit[m], profit[m], epsilon = 0.1);
            } else {
                assert_abs_diff_eq!(sol.realized_profit[m], target[m], epsilon = 1e-6);
            }
        }
    }
}

#[test]
fn swapping_manufacturers_swaps_the_solution() {
    let tol = Tolerances::default();
    let cases = [
        ScenarioConfig::with_factors(1, 157.05, 0.75, [234.0, 41.4], [31.96, 31.96]),
        ScenarioConfig::with_factors(2, 174.5, 0.5, [25.7, 496.0], [6.6, 23.44]),
        ScenarioConfig::with_factors(3, 191.95, 0.25, [234.0, 234.0], [0.0, 31.96]),
        ScenarioConfig::with_factors(4, 174.5, 0.75, [2570.0, 41.4], [0.0, 0.0]),
    ];
    for cfg in &cases {
        let a = solve(&problem(cfg), &tol).unwrap();
        let b = solve(&problem(&cfg.swapped()), &tol).unwrap();
        assert_eq!(a.status, b.status, "scenario {}", cfg.scenario_id);
        if a.status.is_feasible() {
            assert_abs_diff_eq!(a.objective, b.objective, epsilon = 1e-3);
            assert_abs_diff_eq!(a.p_pub[0], b.p_pub[1], epsilon = 1e-3);
            assert_abs_diff_eq!(a.p_pub[1], b.p_pub[0], epsilon = 1e-3);
        }
    }
}

#[test]
fn solver_dominates_coarse_oracle() {
    let tol = Tolerances::default();
    let grid = default_sweep_grid();
    for id in [5usize, 200, 352, 517, 784, 1000, 1290] {
        let prob = problem(&grid[id - 1]);
        let sol = solve(&prob, &tol).unwrap();
        match oracle_solve(&prob, 400, &tol).unwrap() {
            OracleOutcome::Feasible { best } => {
                assert!(sol.status.is_feasible(), "scenario {id}");
                assert!(
                    sol.objective <= best.objective + tol.objective_gap,
                    "scenario {id}"
                );
            }
            OracleOutcome::Infeasible { closest } => {
                if !sol.status.is_feasible() {
                    assert!(closest.max_violation > tol.feasibility);
                }
            }
        }
    }
}

#[test]
fn oracle_is_sequentially_reproducible() {
    let tol = Tolerances::default();
    let prob = problem(&ScenarioConfig::with_factors(
        1,
        174.5,
        0.5,
        [234.0, 41.4],
        [6.6, 6.6],
    ));
    let a = oracle_solve(&prob, 301, &tol).unwrap();
    let b = oracle_solve(&prob, 301, &tol).unwrap();
    assert_eq!(a, b);
}

#[test]
fn sweep_rows_are_consistent_with_their_status() {
    let tol = Tolerances::default();
    let grid = default_sweep_grid();
    let records = bundled_historical();
    let rows = run_sweep(&grid, &records, 0, &tol).unwrap();
    assert_eq!(rows.len(), grid.len());
    for (row, cfg) in rows.iter().zip(&grid) {
        assert_eq!(row.scenario_id, cfg.scenario_id);
        assert!(row.error.is_none());
        if row.status == RowStatus::Infeasible {
            continue;
        }
        let ev = evaluate_point(&problem(cfg), row.p_pub);
        assert!(
            ev.max_violation <= tol.feasibility,
            "scenario {}",
            row.scenario_id
        );
        assert_abs_diff_eq!(
            ev.objective,
            row.objective,
            epsilon = 1e-9 * row.objective.max(1.0)
        );
        let interior = row
            .p_pub
            .iter()
            .chain(&row.q_pub)
            .all(|&v| v > INTERIORITY_THRESHOLD);
        assert_eq!(row.status == RowStatus::Interior, interior);
        for m in 0..2 {
            assert!(row.profit[m] >= row.target_profit[m] - tol.feasibility);
        }
    }
    let s = summarize(&rows, PriceBand::defaults());
    assert_eq!(s.n_total, s.n_infeasible + s.n_boundary + s.n_interior);
}

#[test]
fn sweep_csv_round_trips() {
    let grid: Vec<ScenarioConfig> = default_sweep_grid().into_iter().step_by(37).collect();
    let rows = run_sweep(&grid, &bundled_historical(), 2, &Tolerances::default()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.csv");
    write_rows_csv(&rows, std::fs::File::create(&path).unwrap()).unwrap();
    let back = read_rows_csv(std::fs::File::open(&path).unwrap()).unwrap();
    assert_eq!(back.len(), rows.len());
    for (a, b) in rows.iter().zip(&back) {
        assert_eq!(a.scenario_id, b.scenario_id);
        assert_eq!(a.status, b.status);
        assert_eq!(a.p_pub, b.p_pub);
        assert_eq!(a.profit, b.profit);
    }
}

#[test]
fn historical_file_matches_bundled_table() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/flu_prices.csv");
    assert_eq!(load_historical(path).unwrap(), bundled_historical());
}

fn scenario() -> impl Strategy<Value = ScenarioConfig> {
    (
        150.0f64..200.0,
        0.1f64..0.9,
        (0.0f64..800.0, 0.0f64..800.0),
        (0.0f64..35.0, 0.0f64..35.0),
    )
        .prop_map(|(d, g, (p1, p2), (c1, c2))| {
            ScenarioConfig::with_factors(1, d, g, [p1, p2], [c1, c2])
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn no_sampled_feasible_point_beats_the_solver(
        cfg in scenario(),
        probes in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 200),
    ) {
        let tol = Tolerances::default();
        let prob = problem(&cfg);
        let sol = solve(&prob, &tol).unwrap();
        let feasible_probe = probes
            .iter()
            .map(|&(x, y)| evaluate_point(&prob, [x * prob.p_max, y * prob.p_max]))
            .filter(|ev| ev.is_feasible(&tol))
            .min_by(|a, b| a.objective.total_cmp(&b.objective));
        if let Some(ev) = feasible_probe {
            prop_assert!(sol.status.is_feasible());
            prop_assert!(sol.objective <= ev.objective + tol.objective_gap);
        }
        if sol.status.is_feasible() {
            prop_assert!(sol.max_violation <= tol.feasibility);
            prop_assert!(sol.certificate.complete);
            prop_assert!(sol.certificate_gap <= tol.objective_gap);
            prop_assert!((sol.z - (sol.p_pub[0] - sol.p_pub[1]).abs()).abs() < 1e-12);
        } else {
            prop_assert!(sol.max_violation > tol.feasibility);
        }
    }
}
