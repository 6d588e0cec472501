//! Exact suprema against brute-force evaluation on breakpoints, their
//! one-sided neighbours and a dense geometric grid.

mod common;

use common::{close, g_functions, Oracle};
use lindeberg_core::{
    esseen_fraction, lindeberg_l, rozovskii_fraction, DiscreteDistribution, FractionParams, GFunction, SumContext, M,
};
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn compare(ctx: &SumContext, eps: &[f64], gamma: &[f64]) -> Vec<String> {
    let gs = g_functions(ctx.bn());
    let funcs: Vec<GFunction> = gs.iter().map(|(_, g)| g.clone()).collect();
    let oracle = Oracle::new(ctx, eps, &funcs);
    let mut bad = Vec::new();
    for (name, g) in &gs {
        let w = oracle.weights(g);
        for &e in eps {
            for &y in gamma {
                let p = FractionParams::new(g.clone(), e, y).unwrap();
                let (fe, oe) = (esseen_fraction(ctx, &p).value, oracle.esseen(&w, e, y));
                let (fr, or) = (rozovskii_fraction(ctx, &p).value, oracle.rozovskii(&w, e, y));
                if !close(fe, oe, TOL) {
                    bad.push(format!("esseen {name} eps={e} gamma={y}: {fe} vs {oe}"));
                }
                if !close(fr, or, TOL) {
                    bad.push(format!("rozovskii {name} eps={e} gamma={y}: {fr} vs {or}"));
                }
            }
        }
    }
    bad
}

#[test]
fn step_functions_match_direct_sums() {
    let d = DiscreteDistribution::new(&[(-0.2, 0.8), (0.8, 0.2)]).unwrap();
    let ctx = SumContext::new(vec![d.clone(), DiscreteDistribution::symmetric_pm1(), d]).unwrap();
    let oracle = Oracle::new(&ctx, &[1.0], &[]);
    for &z in ctx.breakpoints().iter().chain(&[0.01, 0.3, 0.5, 0.9, 2.0, 10.0]) {
        for z in [z, z * (1.0 + 1e-9)] {
            assert!(close(lindeberg_l(&ctx, z), oracle.lindeberg(z), 1e-13), "L at {z}");
            assert!((M(&ctx, z) - oracle.third(z)).abs() < 1e-15, "M at {z}");
        }
    }
}

#[test]
fn hand_examples_agree() {
    let eps = [0.25, 0.5, 1.0, 2.5, f64::INFINITY];
    let gamma = [0.5, 1.0, 4.0, f64::INFINITY];
    let pm1 = SumContext::iid(&DiscreteDistribution::symmetric_pm1(), 1).unwrap();
    let two = SumContext::new(vec![DiscreteDistribution::new(&[(-0.2, 0.8), (0.8, 0.2)]).unwrap()]).unwrap();
    for ctx in [pm1, two] {
        let bad = compare(&ctx, &eps, &gamma);
        assert!(bad.is_empty(), "{bad:#?}");
    }
}

fn centered() -> impl Strategy<Value = DiscreteDistribution> {
    (0.05f64..4.0, -4.0f64..4.0, 0.05f64..0.6, 0.05f64..0.35).prop_filter_map("degenerate", |(a, b, pa, pb)| {
        let pc = 1.0 - pa - pb;
        let c = -(a * pa + b * pb) / pc;
        DiscreteDistribution::new(&[(a, pa), (b, pb), (c, pc)]).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_contexts_agree(ds in prop::collection::vec(centered(), 1..3), eps in 0.1f64..5.0) {
        let ctx = SumContext::new(ds).unwrap();
        let bad = compare(&ctx, &[eps, 1.0, f64::INFINITY], &[0.3, 1.0, 3.0]);
        prop_assert!(bad.is_empty(), "{:#?}", bad);
    }
}
