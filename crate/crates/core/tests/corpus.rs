mod common;

use nfmertens::bounds::{verify_all, VerifyOptions};
use nfmertens::idealcount::ideal_count_sieve;
use nfmertens::mertens::{default_grid, mertens_table, quarter_decade_grid, ThetaConstant};
use nfmertens::splitting::{rational_primes, splitting_type, splitting_types_up_to};
use nfmertens::{kappa_exact, load_field, FieldDescriptor};

use common::{corpus, corpus_field, divisor_character_sums};

#[test]
fn corpus_loads_and_round_trips() {
    let fields = corpus();
    assert!(fields.len() >= 10);
    for (name, field) in &fields {
        let again = load_field(&field.to_descriptor_text()).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(&again, field, "{name}");
        assert_eq!(again.to_descriptor_text(), field.to_descriptor_text(), "{name}");
    }
}

#[test]
fn splitting_degrees_sum_to_field_degree() {
    for (name, field) in corpus() {
        let n = field.degree();
        for st in splitting_types_up_to(&field, 1e5).unwrap() {
            let total: u32 = st.pairs.iter().map(|&(e, f)| e * f).sum();
            assert_eq!(total, n, "{name} at p = {}", st.p);
            let inertia: u32 = st.inertia_degrees().sum();
            assert!(inertia <= n);
            for k in 1..=n {
                let with_k = st.inertia_degrees().filter(|&f| f == k).count() as u32;
                assert!(with_k <= n / k, "{name} at p = {}", st.p);
            }
        }
    }
}

#[test]
fn gaussian_split_primes_are_one_mod_four() {
    let gauss = corpus_field("gaussian");
    let x = 1e5;
    let split = splitting_types_up_to(&gauss, x)
        .unwrap()
        .into_iter()
        .filter(|st| st.pairs.len() == 2)
        .count();
    let oracle = rational_primes(x).iter().filter(|&&p| p % 4 == 1).count();
    assert_eq!(split, oracle);
}

fn is_squarefree(mut m: i64) -> bool {
    m = m.abs();
    let mut d = 2;
    while d * d <= m {
        if m % (d * d) == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn fundamental(d: i64) -> bool {
    match d.rem_euclid(4) {
        1 => d != 1 && is_squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m)
        }
        _ => false,
    }
}

#[test]
fn quadratic_sieve_matches_character_sums() {
    const LIMIT: usize = 100_000;
    let mut tested = 0;
    for d in -163i64..=163 {
        if !fundamental(d) {
            continue;
        }
        let poly = if d.rem_euclid(4) == 1 {
            format!("poly = [{}, -1, 1]", (1 - d) / 4)
        } else {
            format!("poly = [{}, 0, 1]", -d / 4)
        };
        let field = load_field(&poly).unwrap();
        assert_eq!(field.discriminant(), &d.into(), "{poly}");
        let row = ideal_count_sieve(&field, LIMIT as u64).unwrap();
        let oracle = divisor_character_sums(d, LIMIT);
        for m in 1..=LIMIT {
            assert_eq!(row.count_u64(m).unwrap() as i64, oracle[m], "disc {d}, n = {m}");
        }
        tested += 1;
    }
    assert_eq!(tested, 101);
}

#[test]
fn verify_all_passes_on_small_grid() {
    let grid = [10.0, 100.0, 1000.0];
    let options = VerifyOptions { truncation_x: 1e4, ..VerifyOptions::default() };
    for (name, field) in corpus() {
        let kappa = kappa_exact(&field).unwrap();
        let report = verify_all(&field, &grid, &kappa, &options).unwrap();
        let failures: Vec<_> = report.failures().map(|c| (&c.name, c.x)).collect();
        assert!(failures.is_empty(), "{name}: {failures:?}");
    }
}

#[test]
fn verify_all_full_grid_passes() {
    let grid = default_grid();
    for (name, field) in corpus() {
        let kappa = kappa_exact(&field).unwrap();
        for theta in [ThetaConstant::Classic, ThetaConstant::Broadbent] {
            let options = VerifyOptions { theta, ..VerifyOptions::default() };
            let report = verify_all(&field, &grid, &kappa, &options).unwrap();
            let failures: Vec<_> = report.failures().map(|c| (&c.name, c.x)).collect();
            assert!(failures.is_empty(), "{name}: {failures:?}");
        }
    }
}

#[test]
fn gaussian_report_contents() {
    let gauss = corpus_field("gaussian");
    let kappa = kappa_exact(&gauss).unwrap();
    let report = verify_all(&gauss, &[10.0, 100.0, 1000.0], &kappa, &VerifyOptions::default()).unwrap();
    assert!(report.all_passed());

    let painful = report
        .checks_named("lemma_painful_alpha2")
        .find(|c| c.x == Some(10.0))
        .unwrap();
    assert!((painful.quantity - 0.39944479573312176).abs() < 1e-14);
    assert!((painful.log_slack - (1.1f64 / 0.39944479573312176).ln()).abs() < 1e-12);
    assert!((painful.log_slack.exp() - 2.754).abs() < 1e-3);

    let envelope = report.checks_named("sunley_envelope").next().unwrap();
    assert!(envelope.log_slack > 60.0);

    let names = [
        "theta_rational",
        "theta_field",
        "legendre_chebyshev_identity",
        "product_error",
        "log_sum_error",
        "reciprocal_sum_error",
        "multipart_j1",
        "log_weighted_count",
        "first_power_sum",
        "higher_power_sum",
        "log_weighted_count_via_primes",
        "mertens_constant_upper",
        "mertens_constant_lower",
        "residue_zimmert_lower",
        "residue_louboutin_upper",
        "residue_stark_lower",
        "sunley_a_constants",
    ];
    for name in names {
        assert!(report.checks_named(name).next().is_some(), "missing {name}");
    }
    let json = serde_json::to_value(&report).unwrap();
    assert_eq!(json["degree"], 2);
    assert!(json["checks"].as_array().unwrap().len() > 50);
}

#[test]
fn failures_sort_first() {
    let gauss = corpus_field("gaussian");
    let kappa = nfmertens::Residue::user_supplied(5.0).unwrap();
    let options = VerifyOptions { identity_tolerance: -1.0, ..VerifyOptions::default() };
    let report = verify_all(&gauss, &[10.0, 100.0], &kappa, &options).unwrap();
    assert!(!report.all_passed());
    let first_pass = report.checks.iter().position(|c| c.pass).unwrap();
    assert!(report.checks[..first_pass].iter().all(|c| !c.pass));
    assert!(report.checks[first_pass..].iter().all(|c| c.pass));
    assert!(report.mertens_constant.approximate);
}

#[test]
fn running_sup_of_log_sum_error_settles() {
    let grid = quarter_decade_grid(4, 24);
    for (name, field) in corpus() {
        let kappa = kappa_exact(&field).unwrap();
        let table = mertens_table(&field, &grid, &kappa, 1e6).unwrap();
        let mut sup: f64 = 0.0;
        let sups: Vec<f64> = table
            .rows
            .iter()
            .map(|r| {
                sup = sup.max(r.a_k.abs());
                sup
            })
            .collect();
        assert!(sups.iter().all(|s| s.is_finite()), "{name}");
        let last = sups.len() - 1;
        for (a, b) in [(last - 8, last - 4), (last - 4, last)] {
            let change = (sups[b] - sups[a]) / sups[a];
            assert!(change < 0.1, "{name}: running sup grew by {change} over a decade");
        }
    }
}

#[test]
fn cubic_splitting_examples() {
    let cubic = corpus_field("cubic_23");
    assert_eq!(splitting_type(&cubic, 23).unwrap().pairs, vec![(1, 1), (2, 1)]);
    assert_eq!(splitting_type(&cubic, 5).unwrap().pairs, vec![(1, 1), (1, 2)]);
    assert_eq!(splitting_type(&cubic, 59).unwrap().pairs, vec![(1, 1), (1, 1), (1, 1)]);
    let cyclic = corpus_field("cyclic_cubic_49");
    assert_eq!(splitting_type(&cyclic, 7).unwrap().pairs, vec![(3, 1)]);
    assert_eq!(splitting_type(&cyclic, 13).unwrap().pairs, vec![(1, 1), (1, 1), (1, 1)]);
    assert_eq!(splitting_type(&cyclic, 2).unwrap().pairs, vec![(1, 3)]);
}

#[test]
fn rational_field_descriptor_matches_constructor() {
    let q = corpus_field("rational");
    let built = FieldDescriptor::rational();
    assert_eq!(q.degree(), 1);
    assert_eq!(kappa_exact(&q).unwrap().value, 1.0);
    assert_eq!(q.to_descriptor_text(), built.to_descriptor_text());
}
