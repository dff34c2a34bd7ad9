mod common;

use std::collections::BTreeMap;

use collabnet::corpus::{Corpus, PublicationRecord};
use collabnet::impact::{
    build_observations, read_observations_csv, write_observations_csv, CellKey, FwciBaselines,
};
use collabnet::lmm::{
    fit, format_estimate, normal_two_sided_p, significance_stars, LmmData, Method, INTERCEPT,
};
use collabnet::syngen::{generate, GenConfig};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn corpus(seed: u64) -> Corpus {
    let cfg = GenConfig {
        seed,
        n_papers: 3000,
        n_countries: 40,
        ..GenConfig::default()
    };
    Corpus::from_records(generate(&cfg).unwrap().records())
}

#[test]
fn fwci_cell_means_are_one() {
    let c = corpus(1);
    let base = FwciBaselines::from_corpus(&c);
    let mut cells: BTreeMap<CellKey, Vec<f64>> = BTreeMap::new();
    for r in c.records() {
        if let Ok(f) = base.fwci(r) {
            cells.entry(CellKey::of(r)).or_default().push(f);
        }
    }
    assert!(!cells.is_empty());
    for (key, v) in &cells {
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        assert!((mean - 1.0).abs() < 1e-12, "{key:?}: {mean}");
    }
}

#[test]
fn baselines_match_group_by() {
    let c = corpus(2);
    let base = FwciBaselines::from_corpus(&c);
    let mut sums: BTreeMap<CellKey, (u64, usize)> = BTreeMap::new();
    for r in c.records() {
        let e = sums.entry(CellKey::of(r)).or_default();
        e.0 += r.citations;
        e.1 += 1;
    }
    assert_eq!(base.len(), sums.len());
    for (k, (s, n)) in &sums {
        let b = base.get(k).unwrap();
        assert_eq!(b.papers, *n);
        assert!((b.mean_citations - *s as f64 / *n as f64).abs() < 1e-12);
    }
}

#[test]
fn observations_match_group_by() {
    let c = corpus(3);
    let base = FwciBaselines::from_corpus(&c);
    let records: Vec<&PublicationRecord> = c.records().collect();
    let set = build_observations(&records, &base);

    let mut groups: BTreeMap<(String, i32), Vec<f64>> = BTreeMap::new();
    let mut single = 0;
    let mut excluded = 0;
    for r in &records {
        if r.countries.len() < 2 {
            single += 1;
            continue;
        }
        match base.fwci(r) {
            Ok(f) => {
                let combo: Vec<&str> = r.countries.iter().map(String::as_str).collect();
                groups.entry((combo.join("-"), r.year)).or_default().push(f);
            }
            Err(_) => excluded += 1,
        }
    }
    assert_eq!(set.single_country, single);
    assert_eq!(set.exclusions.len(), excluded);
    assert_eq!(set.observations.len(), groups.len());
    for o in &set.observations {
        let v = &groups[&(o.combo_id(), o.year)];
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        assert_eq!(o.publication_count, v.len());
        assert_eq!(o.country_count, o.combo.len());
        assert!((o.mean_fwci - mean).abs() < 1e-12);
        assert!((o.log_fwci - (mean + 0.1).ln()).abs() < 1e-12);
    }
    assert_eq!(set.retained_records() + single + excluded, records.len());

    let mut buf = Vec::new();
    write_observations_csv(&set.observations, &mut buf).unwrap();
    let back = read_observations_csv(&buf[..]).unwrap();
    assert_eq!(back.len(), set.observations.len());
    for (a, b) in back.iter().zip(&set.observations) {
        assert_eq!(a.combo, b.combo);
        assert!((a.log_fwci - b.log_fwci).abs() < 1e-12);
    }
}

const BETA: [f64; 3] = [1.0, 0.5, -0.3];

fn simulated(groups: usize, size: usize, sigma_u2: f64, sigma2: f64, seed: u64) -> LmmData {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = Normal::new(0.0, sigma_u2.sqrt()).unwrap();
    let e = Normal::new(0.0, sigma2.sqrt()).unwrap();
    let x = Normal::new(0.0, 1.0).unwrap();
    let mut data = LmmData {
        response: Vec::new(),
        covariates: vec![Vec::new(), Vec::new()],
        column_names: vec![INTERCEPT.into(), "x1".into(), "x2".into()],
        groups: Vec::new(),
    };
    for g in 0..groups {
        let ug = u.sample(&mut rng);
        for _ in 0..size {
            let x1 = x.sample(&mut rng);
            let x2: f64 = rng.random_range(0.0..4.0);
            data.covariates[0].push(x1);
            data.covariates[1].push(x2);
            data.response
                .push(BETA[0] + BETA[1] * x1 + BETA[2] * x2 + ug + e.sample(&mut rng));
            data.groups.push(format!("g{g}"));
        }
    }
    data
}

#[test]
fn recovers_simulated_parameters() {
    let data = simulated(2000, 2, 0.5, 1.0, 7);
    let f = fit(&data, Method::Ml).unwrap();
    for (j, truth) in BETA.iter().enumerate() {
        assert!(
            (f.beta[j] - truth).abs() < 3.0 * f.se[j],
            "beta{j} {} ± {}",
            f.beta[j],
            f.se[j]
        );
    }
    assert!((f.sigma_u2 - 0.5).abs() < 0.05, "{}", f.sigma_u2);
    assert!((f.sigma2 - 1.0).abs() < 0.1, "{}", f.sigma2);
    assert!((f.aic - (2.0 * f.n_params() as f64 - 2.0 * f.loglik)).abs() < 1e-9);
    assert_eq!(f.n_groups, 2000);
}

#[test]
fn optimum_beats_dense_grid() {
    let data = simulated(300, 3, 0.5, 1.0, 8);
    let f = fit(&data, Method::Ml).unwrap();
    let at_fit = dense_ml_deviance(&data, f.psi);
    assert!((at_fit - (-2.0 * f.loglik)).abs() < 1e-6 * at_fit.abs().max(1.0));
    let mut best = dense_ml_deviance(&data, 0.0);
    for k in 0..200 {
        let psi = 10f64.powf(-4.0 + 6.0 * k as f64 / 199.0);
        best = best.min(dense_ml_deviance(&data, psi));
    }
    assert!(-2.0 * f.loglik <= best + 1e-6);
}

#[test]
fn no_group_structure_gives_ols() {
    // within each pair the noise is ±e, so every group residual mean is 0
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut data = LmmData {
        response: Vec::new(),
        covariates: vec![Vec::new()],
        column_names: vec![INTERCEPT.into(), "x".into()],
        groups: Vec::new(),
    };
    for g in 0..200 {
        let x: f64 = rng.random_range(0.0..5.0);
        let e: f64 = rng.random_range(-1.0..1.0);
        for s in [1.0, -1.0] {
            data.covariates[0].push(x);
            data.response.push(2.0 + 0.7 * x + s * e);
            data.groups.push(format!("g{g}"));
        }
    }
    let f = fit(&data, Method::Ml).unwrap();
    assert_eq!(f.sigma_u2, 0.0);
    let ols = ols(&data);
    for j in 0..2 {
        assert!((f.beta[j] - ols[j]).abs() < 1e-9);
    }
}

#[test]
fn reml_variances_are_not_smaller() {
    let data = simulated(150, 2, 0.5, 1.0, 10);
    let ml = fit(&data, Method::Ml).unwrap();
    let reml = fit(&data, Method::Reml).unwrap();
    assert!(reml.sigma2 + reml.sigma_u2 >= ml.sigma2 + ml.sigma_u2 - 1e-9);
}

#[test]
fn observation_order_does_not_matter() {
    let data = simulated(200, 2, 0.5, 1.0, 11);
    let mut idx: Vec<usize> = (0..data.response.len()).collect();
    idx.reverse();
    let shuffled = LmmData {
        response: idx.iter().map(|&i| data.response[i]).collect(),
        covariates: data
            .covariates
            .iter()
            .map(|c| idx.iter().map(|&i| c[i]).collect())
            .collect(),
        column_names: data.column_names.clone(),
        groups: idx.iter().map(|&i| data.groups[i].clone()).collect(),
    };
    let (a, b) = (
        fit(&data, Method::Ml).unwrap(),
        fit(&shuffled, Method::Ml).unwrap(),
    );
    for j in 0..3 {
        assert!((a.beta[j] - b.beta[j]).abs() < 1e-8);
    }
    assert!((a.loglik - b.loglik).abs() < 1e-8);
}

#[test]
fn prediction_uses_shrunken_group_mean() {
    let data = simulated(100, 3, 0.5, 1.0, 12);
    let f = fit(&data, Method::Ml).unwrap();
    let mut resid: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for i in 0..data.response.len() {
        let eta = f.beta[0] + f.beta[1] * data.covariates[0][i] + f.beta[2] * data.covariates[1][i];
        resid
            .entry(&data.groups[i])
            .or_default()
            .push(data.response[i] - eta);
    }
    let values = BTreeMap::from([("x1", 0.3), ("x2", 1.5)]);
    let fixed = f.beta[0] + f.beta[1] * 0.3 + f.beta[2] * 1.5;
    for (g, r) in &resid {
        let mean = r.iter().sum::<f64>() / r.len() as f64;
        let shrink = f.sigma_u2 / (f.sigma_u2 + f.sigma2 / r.len() as f64);
        let expected = fixed + shrink * mean;
        assert!((f.predict(&values, Some(g)).unwrap() - expected).abs() < 1e-9);
    }
    assert!((f.predict(&values, Some("unseen")).unwrap() - fixed).abs() < 1e-12);
    assert!(f.predict(&BTreeMap::from([("x1", 0.3)]), None).is_err());
}

#[test]
fn star_thresholds() {
    let z05 = 1.959_963_984_540_054;
    let z01 = 2.575_829_303_548_9;
    let z001 = 3.290_526_731_491_925_5;
    // erfc carries ~1e-11 relative error
    assert!((normal_two_sided_p(z05) - 0.05).abs() < 1e-10);
    assert!((normal_two_sided_p(z01) - 0.01).abs() < 1e-10);
    assert!((normal_two_sided_p(z001) - 0.001).abs() < 1e-10);
    assert_eq!(significance_stars(normal_two_sided_p(z05 * 1.001)), "*");
    assert_eq!(significance_stars(normal_two_sided_p(z05 * 0.999)), "");
    assert_eq!(significance_stars(normal_two_sided_p(z01 * 1.001)), "**");
    assert_eq!(significance_stars(normal_two_sided_p(z001 * 1.001)), "***");
    assert_eq!(format_estimate(-0.5, 0.1, 2), "-0.50*** (0.10)");
}

#[test]
fn rank_deficiency_is_reported() {
    let mut data = simulated(50, 2, 0.5, 1.0, 13);
    data.covariates[1] = data.covariates[0].iter().map(|x| 2.0 * x).collect();
    let err = fit(&data, Method::Ml).unwrap_err().to_string();
    assert!(err.contains("x1") && err.contains("x2"), "{err}");
}
