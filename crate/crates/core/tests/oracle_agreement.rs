use gmedim_core::criteria::{q0, qm};
use gmedim_core::oracle::{q0_two_copy, qm_two_copy};
use gmedim_core::states;
use gmedim_core::tensor::{DensityMatrix, SystemShape};

fn shape(n: usize, d: usize) -> SystemShape {
    SystemShape::new(n, d).unwrap()
}

fn check(rho: &DensityMatrix) -> f64 {
    let n = rho.shape().n();
    let mut worst = (q0(rho).unwrap().value - q0_two_copy(rho).unwrap()).abs();
    for m in 1..=n / 2 {
        worst = worst.max((qm(rho, m).unwrap().value - qm_two_copy(rho, m).unwrap()).abs());
    }
    worst
}

#[test]
fn named_states_agree() {
    let s = shape(3, 2);
    let mut named = vec![
        DensityMatrix::from_pure(&states::ghz(s, 2).unwrap()),
        DensityMatrix::from_pure(&states::w_state(s, 2).unwrap()),
        states::white_noise_mix(&states::ghz(s, 2).unwrap(), 0.5).unwrap(),
        states::maximally_mixed(s),
    ];
    let s3 = shape(3, 3);
    named.push(DensityMatrix::from_pure(&states::ghz(s3, 3).unwrap()));
    named.push(DensityMatrix::from_pure(&states::ghz(s3, 2).unwrap()));
    named.push(DensityMatrix::from_pure(&states::w_state(s3, 3).unwrap()));
    named.push(DensityMatrix::from_pure(&states::bisep_example(s3).unwrap()));
    named.push(states::rho_c(s3).unwrap());
    named.push(states::white_noise_mix(&states::w_state(s3, 3).unwrap(), 0.1).unwrap());
    let s4 = shape(4, 2);
    named.push(DensityMatrix::from_pure(&states::dicke(s4, 2, 2).unwrap()));
    named.push(DensityMatrix::from_pure(&states::ghz(s4, 2).unwrap()));
    for rho in &named {
        assert!(check(rho) <= 1e-10);
    }
}

#[test]
fn random_states_agree() {
    for (n, d) in [(3, 2), (3, 3), (4, 2)] {
        let s = shape(n, d);
        for seed in 0..10 {
            let rho = states::random_mixed(s, 1000 + seed, 4).unwrap();
            assert!(check(&rho) <= 1e-10);
        }
    }
}
