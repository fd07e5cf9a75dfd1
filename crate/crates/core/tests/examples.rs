//! Every shipped example runs and produces sane numbers.

macro_rules! example {
    ($name:ident) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!("../examples/", stringify!($name), ".rs"));
        }
    };
}

example!(dimension);
example!(sweep_figure5);
example!(frontier);
example!(oracle);
example!(simulate);
example!(counting);
example!(symbolic);

#[test]
fn dimension_example() {
    let v = dimension::run_example().unwrap();
    assert!(v > 0.0 && v < shrinking_carpet::CarpetSpec::figure5().mcmullen_dimension());
}

#[test]
fn sweep_example_is_nonincreasing() {
    let csv = sweep_figure5::run_example().unwrap();
    let dims: Vec<f64> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(dims.len(), 25);
    assert!(dims.windows(2).all(|w| w[1] <= w[0] + 1e-9));
}

#[test]
fn frontier_example_is_decreasing() {
    let pts = frontier::run_example().unwrap();
    assert!(pts.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-12));
}

#[test]
fn oracle_example_brute_force_is_dominated() {
    for (_, brute, opt) in oracle::run_example().unwrap() {
        assert!(brute <= opt + 1e-9);
        assert!(opt - brute < 0.05);
    }
}

#[test]
fn simulate_example_matches_middle_scales() {
    let table = simulate::run_example().unwrap();
    for r in &table.rows[1..5] {
        assert!((r.simulated - r.predicted).abs() < 1e-6, "{r:?}");
    }
}

#[test]
fn counting_example_respects_bound() {
    for (_, c, b) in counting::run_example().unwrap() {
        assert!((c as f64) <= b);
    }
}

#[test]
fn symbolic_example() {
    let lm = symbolic::run_example().unwrap();
    assert!(lm < 0.0 && lm.is_finite());
}
