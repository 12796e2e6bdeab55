use criterion::{black_box, criterion_group, criterion_main, Criterion};

use credence::conjugate::{ConjugateModel, Likelihood, SampleSummary};
use credence::decision::TreeNode;
use credence::dist::Distribution;
use credence::elicit::{elicit, Constraint, ElicitFamily};
use credence::prob::ProbVector;

fn bench_posterior_update(c: &mut Criterion) {
    let prior = Distribution::gamma(9.108, 0.01012).unwrap();
    let model = ConjugateModel::new(Likelihood::Poisson, prior).unwrap();
    let data = SampleSummary::from_data(&[679.0, 703.0, 748.0, 739.0, 693.0]).unwrap();
    c.bench_function("conjugate_posterior_update", |b| {
        b.iter(|| model.posterior(black_box(&data)).unwrap())
    });
}

fn bench_quantile(c: &mut Criterion) {
    let post = Distribution::gamma(1391.108, 2.01012).unwrap();
    c.bench_function("gamma_quantile", |b| {
        b.iter(|| post.quantile(black_box(0.975)).unwrap())
    });
}

fn bench_hpd(c: &mut Criterion) {
    let post = Distribution::gamma(1391.108, 2.01012).unwrap();
    c.bench_function("hpd_region_95", |b| {
        b.iter(|| credence::hpd_region(black_box(&post), 0.95).unwrap())
    });
}

fn bench_count_mixture_cdf(c: &mut Criterion) {
    let pred = Distribution::poisson_gamma(1391.108, 2.01012, 1.0).unwrap();
    c.bench_function("count_mixture_cdf_750", |b| {
        b.iter(|| pred.cdf(black_box(750.0)).unwrap())
    });
}

fn bench_elicit(c: &mut Criterion) {
    let constraints = [
        Constraint::Mean(0.09),
        Constraint::IntervalMass {
            lo: 0.08,
            hi: 0.11,
            mass: 0.95,
        },
    ];
    c.bench_function("elicit_beta_mean_interval", |b| {
        b.iter(|| elicit(ElicitFamily::Beta, black_box(&constraints)).unwrap())
    });
}

fn bench_tree(c: &mut Criterion) {
    // balanced tree: alternating decision/chance levels
    fn build(depth: usize) -> TreeNode {
        if depth == 0 {
            return TreeNode::Terminal { utility: 1.0 };
        }
        if depth % 2 == 0 {
            TreeNode::Decision {
                branches: (0..3)
                    .map(|i| (format!("a{i}"), build(depth - 1)))
                    .collect(),
            }
        } else {
            TreeNode::Chance {
                branches: (0..3)
                    .map(|i| (format!("e{i}"), build(depth - 1)))
                    .collect(),
                probs: vec![0.2, 0.5, 0.3],
            }
        }
    }
    let tree = build(8);
    c.bench_function("solve_tree_depth_8", |b| {
        b.iter(|| credence::solve_tree(black_box(&tree)).unwrap())
    });
}

fn bench_discrepancy_quadrature(c: &mut Criterion) {
    let p = Distribution::gamma(8.0, 2.0).unwrap();
    let q = Distribution::normal_precision(4.0, 0.5).unwrap();
    c.bench_function("continuous_discrepancy", |b| {
        b.iter(|| credence::log_discrepancy_density(black_box(&p), black_box(&q)).unwrap())
    });
}

fn bench_grid_posterior(c: &mut Criterion) {
    let prior = credence::GridPrior::new(
        (1..100).map(|i| i as f64 / 100.0).collect(),
        vec![1.0 / 99.0; 99],
    )
    .unwrap();
    let data: Vec<f64> = (0..200).map(|i| if i % 3 == 0 { 1.0 } else { 0.0 }).collect();
    c.bench_function("grid_posterior_99x200", |b| {
        b.iter(|| {
            credence::grid_posterior(black_box(&prior), &Likelihood::Bernoulli, &data).unwrap()
        })
    });
}

fn bench_sampling(c: &mut Criterion) {
    let d = Distribution::gamma(2.0, 4.0).unwrap();
    c.bench_function("gamma_sample_1000", |b| {
        b.iter(|| d.sample(black_box(1000), 42).unwrap())
    });
}

fn bench_scoring(c: &mut Criterion) {
    let rule = credence::exam_rule(5).unwrap();
    let q = ProbVector::from_weights(vec![0.4, 0.3, 0.15, 0.1, 0.05]).unwrap();
    let p = ProbVector::from_weights(vec![0.25, 0.25, 0.2, 0.2, 0.1]).unwrap();
    c.bench_function("expected_score", |b| {
        b.iter(|| credence::expected_score(black_box(&rule), &q, &p).unwrap())
    });
}

criterion_group!(
    benches,
    bench_posterior_update,
    bench_quantile,
    bench_hpd,
    bench_count_mixture_cdf,
    bench_elicit,
    bench_tree,
    bench_discrepancy_quadrature,
    bench_grid_posterior,
    bench_sampling,
    bench_scoring
);
criterion_main!(benches);
