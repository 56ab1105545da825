//! Relations between the bounds that hold whatever the model.

use minimax_core::bounds::*;
use minimax_core::loss::LossSpec;
use minimax_core::models::{
    build_model, GaussianLocation, IsotropicGaussian, Params, ScalarAsVector, UniformScale, UniformScaleLimit,
    MODEL_IDS,
};
use minimax_core::numerics::Interval;

fn local_models() -> Vec<minimax_core::models::ModelInstance> {
    MODEL_IDS.iter().map(|id| build_model(id, &Params::new()).unwrap()).filter(|m| m.limit.is_some()).collect()
}

#[test]
fn moment_bound_at_half_split_is_the_two_point_bound() {
    for m in local_models() {
        let limit = m.require_limit().unwrap();
        let moment = theorem3_local(limit, 2.0, m.theta, DEFAULT_S_DOMAIN, RChoice::Fixed(0.5)).unwrap();
        let two = corollary1_local(limit, &LossSpec::mse(), m.theta, DEFAULT_S_DOMAIN, PriorChoice::Optimal).unwrap();
        let rel = (moment.value - two.value).abs() / two.value;
        assert!(rel < 1e-6, "{}: {} vs {}", m.id(), moment.value, two.value);
    }
}

#[test]
fn optimizing_the_split_never_loses() {
    for m in local_models() {
        let limit = m.require_limit().unwrap();
        for t in [1.5, 2.0, 3.0] {
            let fixed = theorem3_local(limit, t, m.theta, DEFAULT_S_DOMAIN, RChoice::Fixed(0.5)).unwrap();
            let free = theorem3_local(limit, t, m.theta, DEFAULT_S_DOMAIN, RChoice::Optimize).unwrap();
            assert!(free.value >= fixed.value - 1e-9, "{} t={t}", m.id());
        }
    }
}

#[test]
fn fixed_prior_is_dominated_by_optimal_prior() {
    for m in local_models() {
        let limit = m.require_limit().unwrap();
        let mse = LossSpec::mse();
        let best = corollary1_local(limit, &mse, m.theta, DEFAULT_S_DOMAIN, PriorChoice::Optimal).unwrap();
        for q in [0.2, 0.5, 0.7] {
            let fixed = corollary1_local(limit, &mse, m.theta, DEFAULT_S_DOMAIN, PriorChoice::Fixed(q)).unwrap();
            assert!(fixed.value <= best.value + 1e-9, "{} q={q}", m.id());
        }
    }
}

#[test]
fn argmax_reproduces_the_reported_value() {
    for m in local_models() {
        let limit = m.require_limit().unwrap();
        let mse = LossSpec::mse();
        let c1 = corollary1_local(limit, &mse, m.theta, DEFAULT_S_DOMAIN, PriorChoice::Optimal).unwrap();
        let again = corollary1_objective(limit, &mse, m.theta, c1.arg("s").unwrap(), PriorChoice::Optimal).unwrap();
        assert!((again - c1.value).abs() < 1e-9, "{}", m.id());

        let t3 = theorem3_local(limit, 3.0, m.theta, DEFAULT_S_DOMAIN, RChoice::Optimize).unwrap();
        let a = |k| t3.arg(k).unwrap();
        let again = theorem3_local_objective(limit, 3.0, m.theta, a("s"), a("q"), a("r"));
        assert!((again - t3.value).abs() < 1e-9, "{}", m.id());
    }
    let t4 = theorem4_local(&UniformScaleLimit, 1.0, ThreePointOptions::new(PairPriors::Balanced, DEFAULT_S_DOMAIN))
        .unwrap();
    let a = |k| t4.arg(k).unwrap();
    let again = theorem4_local_objective(&UniformScaleLimit, 1.0, a("s"), a("q"), a("r"), a("w"), a("u"), a("v"));
    assert!((again - t4.value).abs() < 1e-9);
}

#[test]
fn three_point_contains_the_two_point_case() {
    // One model per limit shape; the other local limits are Gaussian.
    for m in
        local_models().into_iter().filter(|m| ["uniform-scale", "uniform-location", "gauss-location"].contains(&m.id()))
    {
        let limit = m.require_limit().unwrap();
        let mut opts = ThreePointOptions::new(PairPriors::Optimized, DEFAULT_S_DOMAIN);
        let full = theorem4_local(limit, m.theta, opts).unwrap();
        opts.w_zero = true;
        let reduced = theorem4_local(limit, m.theta, opts).unwrap();
        assert!(reduced.value <= full.value + 1e-9, "{}", m.id());
    }
}

#[test]
fn balanced_pair_priors_are_dominated() {
    let g = build_model("gauss-location", &Params::new()).unwrap();
    for limit in [g.require_limit().unwrap(), &UniformScaleLimit] {
        let opt = theorem4_local(limit, 1.0, ThreePointOptions::new(PairPriors::Optimized, DEFAULT_S_DOMAIN)).unwrap();
        let bal = theorem4_local(limit, 1.0, ThreePointOptions::new(PairPriors::Balanced, DEFAULT_S_DOMAIN)).unwrap();
        assert!(bal.value <= opt.value + 1e-9);
    }
}

#[test]
fn exact_three_point_dominates_the_relaxation() {
    let exact = three_point_exact_uniform(1.0, DEFAULT_S_DOMAIN).unwrap();
    let relaxed =
        theorem4_local(&UniformScaleLimit, 1.0, ThreePointOptions::new(PairPriors::Optimized, DEFAULT_S_DOMAIN))
            .unwrap();
    assert!(exact.value > relaxed.value);
}

#[test]
fn antipodal_transform_is_the_two_point_bound() {
    let scalar = GaussianLocation::new(1.0).unwrap();
    let vector = ScalarAsVector(&scalar);
    let set = TransformSet::antipodal(1).unwrap();
    let mse = LossSpec::mse();
    for &(t0, t1, n) in &[(0.0, 1.0, 1u64), (-0.3, 0.4, 5), (2.0, 2.2, 30)] {
        let two = theorem1_two_point(&scalar, &mse, t0, t1, n).unwrap();
        let q = two.arg("q").unwrap();
        let tr = corollary2_transform(&vector, &mse, &set, &[t0], &[t1], 1, q, n).unwrap();
        assert!((tr.value - two.value).abs() < 1e-12, "{} vs {}", tr.value, two.value);
    }
}

#[test]
fn rotation_transform_respects_the_prior_envelope() {
    let vector = IsotropicGaussian::new(1.0, 2).unwrap();
    let set = TransformSet::rotations_2d(3).unwrap();
    let mse = LossSpec::mse();
    let (t0, t1) = ([0.3, 0.0], [-0.1, 0.2]);
    for k in 1..3 {
        for q in [0.2, 0.5, 0.8] {
            let r = corollary2_transform(&vector, &mse, &set, &t0, &t1, k, q, 4).unwrap();
            assert!(r.value > 0.0);
            let a = k as f64 / 3.0;
            let diff_norm = ((t0[0] - t1[0]).powi(2) + (t0[1] - t1[1]).powi(2)).sqrt();
            let envelope = diff_norm * diff_norm * q.min(1.0 - q) / (1.0 - a - q + 2.0 * a * q);
            assert!(r.value <= envelope + 1e-12);
        }
    }
}

#[test]
fn all_pairs_is_concave_in_the_weights() {
    let oracle = UniformScale;
    let mse = LossSpec::mse();
    let thetas = [1.0, 1.05, 1.1, 1.2];
    let (a, b) = ([0.1, 0.2, 0.3, 0.4], [0.4, 0.3, 0.2, 0.1]);
    let at = |lambda: f64| {
        let w: Vec<f64> = a.iter().zip(&b).map(|(x, y)| (1.0 - lambda) * x + lambda * y).collect();
        pairwise_allpairs_bound(&oracle, &mse, &thetas, &w, 10).unwrap().value
    };
    for i in 1..20 {
        let l = i as f64 / 20.0;
        let chord = 0.5 * (at(l - 0.05) + at(l + 0.05));
        assert!(at(l) >= chord - 1e-12, "lambda {l}");
    }
}

#[test]
fn two_point_ring_is_the_two_point_objective() {
    let oracle = GaussianLocation::new(1.0).unwrap();
    let mse = LossSpec::mse();
    let ring = pairwise_ring_bound(&oracle, &mse, &[0.0, 0.8], &[0.3, 0.7], 2).unwrap();
    let direct = theorem1_objective(&oracle, &mse, 0.0, 0.8, 2, 0.3).unwrap();
    assert!((ring.value - direct).abs() < 1e-14);
}

#[test]
fn finite_sample_moment_bound_approaches_the_local_one() {
    let oracle = UniformScale;
    let limit = UniformScaleLimit;
    let local = theorem3_local(&limit, 2.0, 1.0, DEFAULT_S_DOMAIN, RChoice::Optimize).unwrap().value;
    let n = 2000u64;
    let dom = Interval::new(1e-4, 0.02).unwrap();
    let finite = theorem3_moment(&oracle, 2.0, 1.0, dom, n, RChoice::Optimize).unwrap().value;
    let scaled = finite * (n as f64).powi(2);
    assert!((scaled - local).abs() / local < 5e-3, "{scaled} vs {local}");
}
