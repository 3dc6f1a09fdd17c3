#![allow(dead_code)]

use heavytail::rng::derive_seed;
use heavytail::{
    DagumParams, Dataset, DaviesParams, DistributionSpec, FiskParams, SinghMaddalaParams,
};

pub fn draws(spec: &DistributionSpec, n: usize, seed: u64) -> Dataset {
    Dataset::from_values(spec.sample(n, seed).unwrap()).unwrap()
}

pub fn seeds(master: u64, count: usize) -> impl Iterator<Item = u64> {
    (0..count as u64).map(move |i| derive_seed(master, i))
}

/// One moderate-tail parameter set per family.
pub fn reference_specs() -> Vec<DistributionSpec> {
    vec![
        DaviesParams::new(1.8972, 0.6331, 0.4997).unwrap().into(),
        SinghMaddalaParams::new(1.6208, 2.2040, 1.3613)
            .unwrap()
            .into(),
        DagumParams::new(1.9727, 2.0778, 0.7701).unwrap().into(),
        FiskParams::new(2.3, 0.7).unwrap().into(),
    ]
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
