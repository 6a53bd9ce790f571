use super::*;
use rand::Rng;

#[test]
fn single_cluster_model() {
    let m = build_model(&[3], &[vec![0.5]]).unwrap();
    assert_eq!((m.n(), m.k()), (3, 1));
    assert_eq!(m.membership(), &[0, 0, 0]);
    let stats = m.stats();
    assert_eq!(stats.delta, f64::INFINITY);
    assert_eq!(stats.s_min, 3);
}

#[test]
fn validation_errors() {
    assert!(matches!(build_model(&[], &[]), Err(Error::InvalidModel(_))));
    assert!(matches!(build_model(&[2, 0], &[vec![0.1, 0.2], vec![0.2, 0.1]]), Err(Error::InvalidModel(_))));
    assert!(matches!(build_model(&[2, 2], &[vec![0.1, 0.2], vec![0.3, 0.1]]), Err(Error::InvalidModel(_))));
    assert!(matches!(build_model(&[2, 2], &[vec![1.1, 0.2], vec![0.2, 0.1]]), Err(Error::InvalidModel(_))));
    assert!(matches!(build_model(&[2], &[vec![f64::NAN]]), Err(Error::InvalidModel(_))));
    assert!(matches!(build_model(&[2, 2], &[vec![0.1, 0.2]]), Err(Error::InvalidModel(_))));
}

#[test]
fn canonical_layout() {
    let m = build_model(&[2, 1, 3], &[vec![0.0; 3], vec![0.0; 3], vec![0.0; 3]]).unwrap();
    assert_eq!(m.membership(), &[0, 0, 1, 2, 2, 2]);
}

#[test]
fn clique_separation() {
    let (n, p, s) = (400, 0.3, 25);
    let stats = presets::clique(n, p, s).unwrap().stats();
    assert!((stats.delta - (1.0 - p) * (s as f64).sqrt()).abs() < 1e-12);
}

#[test]
fn bipartition_separation_and_spectrum() {
    let (n, p, q) = (200, 0.5, 0.2);
    let stats = presets::bipartition(n, p, q).unwrap().stats();
    assert!((stats.delta - (p - q) * (n as f64).sqrt()).abs() < 1e-12);
    // Eigenvalues of the two-block matrix: (p ± q)·n/2.
    assert!((stats.singular_values[0] - (p + q) * 100.0).abs() < 1e-9);
    assert!((stats.lambda_k - (p - q) * 100.0).abs() < 1e-9);
    assert_eq!(stats.rank_p, 2);
    assert!((stats.sigma - 0.5).abs() < 1e-15);
}

#[test]
fn deterministic_bipartition_stats() {
    let stats = presets::bipartition(4, 1.0, 0.0).unwrap().stats();
    assert!((stats.delta - 2.0).abs() < 1e-15);
    assert_eq!(stats.sigma, 0.0);
}

#[test]
fn coloring_separation() {
    let (n, k, p) = (90, 3, 0.2);
    let stats = presets::coloring(n, k, p).unwrap().stats();
    assert!((stats.delta - p * (2.0 * n as f64 / k as f64).sqrt()).abs() < 1e-12);
}

#[test]
fn rank_deficient_block_matrix() {
    // Identical rows for clusters 0 and 1: rank 1.
    let m = build_model(&[5, 7], &[vec![0.3, 0.3], vec![0.3, 0.3]]).unwrap();
    let stats = m.stats();
    assert_eq!(stats.rank_p, 1);
    assert_eq!(stats.delta, 0.0);
    assert_eq!(stats.lambda_k, 0.0);
}

/// Brute-force statistics from the full expectation matrix, with
/// nalgebra's SVD as the reference for the spectrum.
fn brute_force_stats(m: &PlantedModel) -> (f64, Vec<f64>) {
    let p = m.expectation_matrix::<f64>();
    let n = m.n();
    let mut delta = f64::INFINITY;
    for u in 0..n {
        for v in 0..n {
            if m.membership()[u] != m.membership()[v] {
                let d: f64 = (0..n).map(|r| (p.get(r, u) - p.get(r, v)).powi(2)).sum::<f64>().sqrt();
                delta = delta.min(d);
            }
        }
    }
    let na = nalgebra::DMatrix::from_row_slice(n, n, p.as_slice());
    let mut sv: Vec<f64> = na.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    (delta, sv)
}

#[test]
fn stats_match_brute_force_on_random_three_block_models() {
    let mut rng = crate::seed::rng(77);
    for _ in 0..10 {
        let sizes: Vec<usize> = {
            let a = rng.random_range(3..15);
            let b = rng.random_range(3..15);
            vec![a, b, 30 - a - b]
        };
        let mut probs = vec![vec![0.0; 3]; 3];
        for i in 0..3 {
            for j in i..3 {
                let x: f64 = rng.random();
                probs[i][j] = x;
                probs[j][i] = x;
            }
        }
        let m = build_model(&sizes, &probs).unwrap();
        let stats = m.stats();
        let (delta, sv) = brute_force_stats(&m);
        assert!((stats.delta - delta).abs() < 1e-12, "{} vs {delta}", stats.delta);
        assert!((stats.lambda_k - sv[2]).abs() < 1e-9 * sv[0]);
        assert_eq!(stats.rank_p, sv.iter().filter(|&&s| s >= RANK_TOL * sv[0]).count());
    }
}

#[test]
fn sampling_extremes() {
    let full = build_model(&[6], &[vec![1.0]]).unwrap();
    assert_eq!(sample_graph(&full, 3).edge_count(), 15);
    let empty = build_model(&[3, 3], &[vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
    assert_eq!(sample_graph(&empty, 3).edge_count(), 0);
}

#[test]
fn sampling_is_deterministic_and_simple() {
    let m = presets::bipartition(60, 0.4, 0.1).unwrap();
    let a = sample_graph(&m, 11);
    let b = sample_graph(&m, 11);
    let c = sample_graph(&m, 12);
    assert_eq!(a, b);
    assert_ne!(a, c);
    for u in 0..60 {
        assert!(!a.has_edge(u, u));
        for v in 0..60 {
            assert_eq!(a.has_edge(u, v), a.has_edge(v, u));
        }
    }
}

#[test]
fn edge_count_concentrates() {
    let n = 2000;
    let m = build_model(&[n], &[vec![0.5]]).unwrap();
    let pairs = (n * (n - 1) / 2) as f64;
    let sd = (pairs * 0.25).sqrt();
    let inside = (0..100)
        .filter(|&s| ((sample_graph(&m, s).edge_count() as f64) - pairs / 2.0).abs() <= 3.0 * sd)
        .count();
    assert!(inside >= 99, "{inside}/100 within 3 sd");
}

#[test]
fn noise_matrix_examples() {
    let zero = build_model(&[4, 4], &[vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
    assert!(sample_noise_matrix(&zero, 1).as_slice().iter().all(|&x| x == 0.0));
    let one = build_model(&[5], &[vec![1.0]]).unwrap();
    assert!(sample_noise_matrix(&one, 1).as_slice().iter().all(|&x| x == 0.0));

    let n = 500;
    let half = build_model(&[n], &[vec![0.5]]).unwrap();
    let e = sample_noise_matrix(&half, 5);
    let pairs = (n * (n - 1) / 2) as f64;
    let mean: f64 = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).map(|(u, v)| e.get(u, v)).sum::<f64>() / pairs;
    assert!(mean.abs() <= 3.0 / pairs.sqrt());
}

#[test]
fn adjacency_is_expectation_plus_noise() {
    let m = build_model(&[7, 9, 4], &[vec![0.9, 0.1, 0.4], vec![0.1, 0.6, 0.2], vec![0.4, 0.2, 0.3]]).unwrap();
    let g = sample_graph(&m, 21);
    let e = noise_of(&m, &g);
    let p = m.expectation_matrix::<f64>();
    let a = g.adjacency_matrix::<f64>();
    for u in 0..m.n() {
        for v in 0..m.n() {
            if u != v {
                assert_eq!(a.get(u, v), p.get(u, v) + e.get(u, v));
            }
        }
    }
    assert_eq!(e, sample_noise_matrix(&m, 21));
}

#[test]
fn edge_list_round_trip() {
    let m = presets::bipartition(20, 0.5, 0.1).unwrap();
    let g = sample_graph(&m, 99);
    let text = g.to_edge_list();
    assert!(text.starts_with("# n=20 seed=99\n"));
    assert_eq!(Graph::from_edge_list(&text).unwrap(), g);
    assert!(Graph::from_edge_list("# n=3 seed=1\n0 0\n").is_err());
    assert!(Graph::from_edge_list("0 1\n").is_err());
}

#[test]
fn model_spec_parses_from_json() {
    let spec: ModelSpec = serde_json::from_str(r#"{"sizes":[2,3],"block_probs":[[0.5,0.1],[0.1,0.5]]}"#).unwrap();
    let m = spec.build().unwrap();
    assert_eq!(m.n(), 5);
    assert_eq!(m.spec(), spec);
}
