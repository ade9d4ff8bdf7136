//! Library numerics checked against independent implementations.

use statrs::distribution::{ChiSquared, ContinuousCDF, Discrete, Poisson as StatrsPoisson};
use statrs::function::gamma;

use scriptstat::complexity::runs_test_uniform;
use scriptstat::distributions::special::{chi_square_sf, gamma_q, ln_factorial, ln_gamma};
use scriptstat::distributions::{
    evaluate_fit, pool_open_tail, DfMode, Model, Poisson, SsGeometric,
};
use scriptstat::model::FrequencyTable;

fn close(a: f64, b: f64, rel: f64, abs: f64) -> bool {
    (a - b).abs() <= abs.max(rel * b.abs())
}

#[test]
fn chi_square_sf_matches_statrs() {
    for df in 1..=40u32 {
        let reference = ChiSquared::new(df as f64).unwrap();
        for i in 0..=200 {
            let x = i as f64 * 0.4;
            let ours = chi_square_sf(x, df).unwrap();
            let theirs = reference.sf(x);
            assert!(
                close(ours, theirs, 1e-9, 1e-13),
                "df={df} x={x}: {ours} vs {theirs}"
            );
        }
    }
}

#[test]
fn gamma_q_matches_statrs() {
    for &a in &[0.5, 1.0, 2.5, 7.0, 19.5] {
        for &x in &[0.01, 0.5, 1.0, 3.0, 8.0, 25.0] {
            let ours = gamma_q(a, x).unwrap();
            let theirs = gamma::gamma_ur(a, x);
            assert!(
                close(ours, theirs, 1e-10, 1e-14),
                "a={a} x={x}: {ours} vs {theirs}"
            );
        }
    }
}

#[test]
fn ln_gamma_matches_statrs() {
    for i in 1..=400 {
        let x = i as f64 * 0.125;
        assert!(
            close(ln_gamma(x), gamma::ln_gamma(x), 1e-12, 1e-12),
            "x={x}"
        );
    }
    for k in 0..=170u32 {
        let direct: f64 = (1..=k).map(|i| (i as f64).ln()).sum();
        assert!(close(ln_factorial(k), direct, 1e-12, 1e-12), "k={k}");
    }
}

#[test]
fn poisson_pmf_matches_statrs() {
    for &lambda in &[0.1, 1.0, 2.49, 2.4545, 7.3, 15.0] {
        let ours = Poisson::new(lambda).unwrap();
        let theirs = StatrsPoisson::new(lambda).unwrap();
        for x in 0..=40u32 {
            let a = ours.pmf(x);
            let b = theirs.pmf(x as u64);
            assert!(
                close(a, b, 1e-10, 1e-300),
                "lambda={lambda} x={x}: {a} vs {b}"
            );
        }
    }
}

#[test]
fn ss_geometric_pmf_matches_direct_formula() {
    for &(p, a) in &[
        (0.5737, 0.7105),
        (0.3, 0.2),
        (0.9, 9.0),
        (0.25, 1.0 / 3.0),
        (1.0, 0.0),
    ] {
        let model = SsGeometric::new(p, a).unwrap();
        for x in 1..=30u32 {
            let direct = p * (1.0 - p).powf(x as f64 - 1.0) * (1.0 + a * (x as f64 - 1.0 / p));
            let ours = model.pmf(x).unwrap();
            assert!(
                close(ours, direct.max(0.0), 1e-12, 1e-15),
                "p={p} a={a} x={x}: {ours} vs {direct}"
            );
        }
        // closed-form moments against truncated sums
        let (m1, m2) = (1..=2000u32).fold((0.0, 0.0), |(m1, m2), x| {
            let px = model.pmf(x).unwrap();
            (m1 + x as f64 * px, m2 + (x as f64).powi(2) * px)
        });
        assert!(close(model.mean(), m1, 1e-9, 1e-12));
        assert!(close(model.variance(), m2 - m1 * m1, 1e-9, 1e-12));
    }
    assert!(SsGeometric::new(1.0, 0.1).is_err());
    assert!(SsGeometric::new(0.5, 1.01).is_err());
    assert!(SsGeometric::new(0.0, 0.0).is_err());
}

#[test]
fn pooled_fit_matches_hand_computation() {
    let table = FrequencyTable::from_pairs([(0, 4), (1, 9), (2, 7), (3, 5), (4, 2)]).unwrap();
    let lambda = 1.7;
    let reference = StatrsPoisson::new(lambda).unwrap();
    let n = 27.0;
    let mut expected: Vec<f64> = (0..4).map(|x| n * reference.pmf(x)).collect();
    expected.push(n - expected.iter().sum::<f64>());
    let observed = [4.0, 9.0, 7.0, 5.0, 2.0];
    let chi: f64 = observed
        .iter()
        .zip(&expected)
        .map(|(o, e)| (o - e).powi(2) / e)
        .sum();

    let model = Model::from(Poisson::new(lambda).unwrap());
    let classes = pool_open_tail(&table, &model).unwrap();
    let fit = evaluate_fit(&table, model, DfMode::ClassesMinusOne).unwrap();
    assert_eq!(classes.len(), 5);
    for (c, e) in classes.iter().zip(&expected) {
        assert!(close(c.expected, *e, 1e-12, 1e-12));
    }
    assert!(close(fit.chi_square, chi, 1e-12, 1e-12));
    let sf = ChiSquared::new(fit.df as f64).unwrap().sf(fit.chi_square);
    assert!(close(fit.p_value.unwrap(), sf, 1e-9, 1e-13));
}

#[test]
fn runs_test_matches_wald_wolfowitz_moments() {
    // frequencies with a single long run above and one below
    let table =
        FrequencyTable::from_pairs([(1, 9), (2, 8), (3, 7), (4, 1), (5, 1), (6, 0)]).unwrap();
    let r = runs_test_uniform(&table).unwrap();
    let (n1, n2) = (3.0f64, 3.0f64);
    let n = n1 + n2;
    let mean = 2.0 * n1 * n2 / n + 1.0;
    let var = (mean - 1.0) * (mean - 2.0) / (n - 1.0);
    assert_eq!(r.runs, 2);
    assert_eq!((r.n1, r.n2), (3, 3));
    assert!(close(r.expected_runs, mean, 1e-12, 1e-12));
    assert!(close(r.sigma_runs, var.sqrt(), 1e-12, 1e-12));
    assert!(close(
        r.z,
        ((2.0 - mean).abs() - 0.5) / var.sqrt(),
        1e-12,
        1e-12
    ));
}
