use std::collections::BTreeMap;

use kazlab::finite_models::hausdorff_young_ratio;
use kazlab::induction::{
    canonical, cocycle, in_fundamental_domain, int_length, int_mul, mat_mul, reconstruction_residual, reduce_to_domain,
    rotation, truncate_tail, LatticeMeasure, Mat2,
};
use kazlab::twostep::{convolve, FiniteGroupModel, FiniteMeasure};
use kazlab::zigzag::{axis_chain_bound, axis_chain_envelope, revalidate, zigzag_certificate, Point};
use num_complex::Complex64;
use proptest::prelude::*;

fn chamber(x: f64, y: f64) -> Point {
    let a1 = (2.0 * x + y) / 3.0;
    let a3 = -(x + 2.0 * y) / 3.0;
    [a1, -a1 - a3, a3]
}

fn sl2(r: f64, th1: f64, th2: f64) -> Mat2 {
    mat_mul(&mat_mul(&rotation(th1), &[[r.exp(), 0.0], [0.0, (-r).exp()]]), &rotation(th2))
}

fn measure(model: &FiniteGroupModel, weights: &[f64]) -> FiniteMeasure {
    let total: f64 = weights.iter().sum();
    let atoms = weights.iter().enumerate().map(|(g, w)| (g % model.order(), w / total));
    FiniteMeasure::from_atoms(model, atoms).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn certificates_revalidate_to_their_total(
        x1 in 0.0..25.0f64, y1 in 0.0..25.0f64, x2 in 0.0..25.0f64, y2 in 0.0..25.0f64,
        s in 0.0..0.2f64, l in 0.5..20.0f64,
    ) {
        let (a, b) = (chamber(x1, y1), chamber(x2, y2));
        if let Ok(cert) = zigzag_certificate(&a, &b, s, l) {
            prop_assert_eq!(revalidate(&cert).unwrap(), cert.total);
            if let (Some(first), Some(last)) = (cert.steps.first(), cert.steps.last()) {
                prop_assert_eq!(first.from, a);
                prop_assert_eq!(last.to, b);
            }
            prop_assert!(cert.steps.iter().all(|st| st.bound > 0.0));
        }
    }

    #[test]
    fn axis_chain_stays_under_envelope(r1 in 1.0..30.0f64, len in 0.0..30.0f64, s in 0.0..0.249f64, l in 0.1..10.0f64) {
        let bound = axis_chain_bound(r1, r1 + len, s, l).unwrap();
        prop_assert!(bound <= axis_chain_envelope(r1, s, l) * (1.0 + 1e-12));
    }

    #[test]
    fn convolution_preserves_mass_and_associates(
        w1 in prop::collection::vec(0.01..1.0f64, 1..8),
        w2 in prop::collection::vec(0.01..1.0f64, 1..8),
        w3 in prop::collection::vec(0.01..1.0f64, 1..8),
    ) {
        let model = FiniteGroupModel::symmetric(3).unwrap();
        let (a, b, c) = (measure(&model, &w1), measure(&model, &w2), measure(&model, &w3));
        let ab = convolve(&model, &a, &b).unwrap();
        prop_assert!((ab.mass() - 1.0).abs() < 1e-12);
        let left = convolve(&model, &ab, &c).unwrap();
        let right = convolve(&model, &a, &convolve(&model, &b, &c).unwrap()).unwrap();
        for g in 0..model.order() {
            let (u, v) = (left.atoms.get(&g).copied().unwrap_or(0.0), right.atoms.get(&g).copied().unwrap_or(0.0));
            prop_assert!((u - v).abs() < 1e-14);
        }
    }

    #[test]
    fn reduction_lands_in_domain_and_reconstructs(r in 0.0..6.0f64, th1 in 0.0..6.3f64, th2 in 0.0..6.3f64) {
        let g = sl2(r, th1, th2);
        let (w, gamma) = reduce_to_domain(&g).unwrap();
        prop_assert!(in_fundamental_domain(w.x, w.y));
        let back = mat_mul(&w.omega, &gamma.map(|row| row.map(|v| v as f64)));
        let scale = g.iter().flatten().fold(1.0f64, |m, v| m.max(v.abs()));
        for i in 0..2 {
            for j in 0..2 {
                prop_assert!((back[i][j] - g[i][j]).abs() <= 1e-9 * scale);
            }
        }
    }

    #[test]
    fn cocycle_identity_holds(
        r1 in 0.0..2.0f64, a1 in 0.0..6.3f64, b1 in 0.0..6.3f64,
        r2 in 0.0..2.0f64, a2 in 0.0..6.3f64, b2 in 0.0..6.3f64,
        r3 in 0.0..2.0f64, a3 in 0.0..6.3f64, b3 in 0.0..6.3f64,
    ) {
        let (g1, g2) = (sl2(r1, a1, b1), sl2(r2, a2, b2));
        let (w, _) = reduce_to_domain(&sl2(r3, a3, b3)).unwrap();
        let c2 = cocycle(&g2, &w).unwrap();
        let c1 = cocycle(&g1, &c2.g_dot_omega).unwrap();
        let c12 = cocycle(&mat_mul(&g1, &g2), &w).unwrap();
        prop_assert!(reconstruction_residual(&g2, &w, &c2) < 1e-9);
        prop_assert_eq!(canonical(&c12.alpha), canonical(&int_mul(&c1.alpha, &c2.alpha).unwrap()));
    }

    #[test]
    fn fourier_ratio_is_inverse_root_of_size(f in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..64)) {
        let f: Vec<Complex64> = f.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
        prop_assume!(f.iter().any(|z| z.norm() > 1e-3));
        let hy = hausdorff_young_ratio(&f).unwrap();
        prop_assert!((hy.ratio - (f.len() as f64).powf(-0.5)).abs() < 1e-12);
        prop_assert!((hy.constant - 1.0).abs() < 1e-12);
    }

    #[test]
    fn truncation_distance_is_twice_the_tail(
        ws in prop::collection::vec(0.01..1.0f64, 2..12),
        radius in 0.5..4.0f64,
    ) {
        let total: f64 = ws.iter().sum();
        let atoms: BTreeMap<_, _> =
            ws.iter().enumerate().map(|(k, w)| (canonical(&[[1, k as i64], [0, 1]]), w / total)).collect();
        let m0 = LatticeMeasure { atoms };
        prop_assume!(m0.atoms.keys().any(|g| int_length(g) <= radius));
        let (m, tail) = truncate_tail(&m0, radius).unwrap();
        prop_assert!((m.mass() - 1.0).abs() < 1e-12);
        prop_assert!(m.max_length() <= radius + 1e-12);
        prop_assert!((m.total_variation(&m0) - 2.0 * tail).abs() < 1e-12);
    }
}
