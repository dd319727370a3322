//! Random objects shared by the integration suites.
#![allow(dead_code)]

use proptest::prelude::*;
use qtele::entanglement::{ChshSetting, DichotomicObservable};
use qtele::{ComplexMatrix, DensityMatrix, StateVector, C64};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian<R: Rng>(rng: &mut R) -> C64 {
    C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

/// Haar-distributed pure state.
pub fn random_state<R: Rng>(rng: &mut R, dim: usize) -> StateVector {
    StateVector::normalized((0..dim).map(|_| gaussian(rng)).collect()).unwrap()
}

/// `G G† / Tr(G G†)` with i.i.d. complex Gaussian `G`.
pub fn random_density<R: Rng>(rng: &mut R, dim: usize) -> DensityMatrix {
    let g = ComplexMatrix::new(dim, dim, (0..dim * dim).map(|_| gaussian(rng)).collect()).unwrap();
    let w = g.matmul(&g.adjoint()).unwrap();
    let tr = w.trace().unwrap().re;
    DensityMatrix::new(w.scale(C64::new(1.0 / tr, 0.0))).unwrap()
}

pub fn random_matrix<R: Rng>(rng: &mut R, dim: usize) -> ComplexMatrix {
    ComplexMatrix::new(dim, dim, (0..dim * dim).map(|_| gaussian(rng)).collect()).unwrap()
}

pub fn random_hermitian<R: Rng>(rng: &mut R, dim: usize) -> ComplexMatrix {
    random_matrix(rng, dim).hermitian_part()
}

/// Uniform on the unit sphere.
pub fn random_direction<R: Rng>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| StandardNormal.sample(rng));
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-6 {
            return v.map(|x| x / n);
        }
    }
}

pub fn random_observable<R: Rng>(rng: &mut R) -> DichotomicObservable {
    DichotomicObservable::from_direction(random_direction(rng)).unwrap()
}

pub fn random_setting<R: Rng>(rng: &mut R) -> ChshSetting {
    ChshSetting {
        a: random_observable(rng),
        a_prime: random_observable(rng),
        b: random_observable(rng),
        b_prime: random_observable(rng),
    }
}

/// Proptest strategy for unit vectors of dimension `dim`, from box-uniform
/// components rejected near zero norm.
pub fn unit_state(dim: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim)
        .prop_filter("norm too small", |v| v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3)
        .prop_map(|v| StateVector::normalized(v.into_iter().map(|(a, b)| C64::new(a, b)).collect()).unwrap())
}

pub fn matrix(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim * dim)
        .prop_map(move |v| ComplexMatrix::new(dim, dim, v.into_iter().map(|(a, b)| C64::new(a, b)).collect()).unwrap())
}

/// Gaussian-ensemble density matrix drawn from a proptest-chosen seed.
pub fn density(dim: usize) -> impl Strategy<Value = DensityMatrix> {
    any::<u64>().prop_map(move |s| random_density(&mut rng(s), dim))
}
