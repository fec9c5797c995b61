//! The λ-measures N_λ(J) = λ^{|J|}, their normalisation ν_λ, and total variation.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::EdgeSet;

/// Exact masses λ^{|J|} for each set.
pub fn n_lambda_mass(sets: &[EdgeSet], lambda: &BigRational) -> Result<Vec<BigRational>> {
    if !lambda.is_positive() {
        return Err(Error::InvalidInput("lambda must be positive".into()));
    }
    Ok(sets.iter().map(|j| num_traits::pow(lambda.clone(), j.count())).collect())
}

/// ν_λ: the normalised λ-masses.
pub fn nu_lambda(sets: &[EdgeSet], lambda: &BigRational) -> Result<Vec<BigRational>> {
    if sets.is_empty() {
        return Err(Error::EmptySupport("nu_lambda of an empty family".into()));
    }
    normalize(n_lambda_mass(sets, lambda)?)
}

pub fn normalize(masses: Vec<BigRational>) -> Result<Vec<BigRational>> {
    let total: BigRational = masses.iter().sum();
    if total.is_zero() {
        return Err(Error::EmptySupport("total mass is zero".into()));
    }
    Ok(masses.into_iter().map(|m| m / &total).collect())
}

/// ½ Σ |p(x) − q(x)| over a shared index.
pub fn tv_distance(p: &[BigRational], q: &[BigRational]) -> Result<BigRational> {
    if p.len() != q.len() {
        return Err(Error::InvalidInput("distributions on different supports".into()));
    }
    let s: BigRational = p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum();
    Ok(s / BigRational::from_integer(2.into()))
}

pub fn tv_distance_f64(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len(), "distributions on different supports");
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::rat;

    #[test]
    fn masses_and_normalisation() {
        let sets = vec![EdgeSet::from_ids(3, [0]), EdgeSet::from_ids(3, [1, 2])];
        assert_eq!(n_lambda_mass(&sets, &rat(1, 2)).unwrap(), vec![rat(1, 2), rat(1, 4)]);
        assert_eq!(nu_lambda(&sets, &rat(1, 2)).unwrap(), vec![rat(2, 3), rat(1, 3)]);
        assert_eq!(nu_lambda(&sets, &rat(1, 1)).unwrap(), vec![rat(1, 2), rat(1, 2)]);
        assert!(nu_lambda(&[], &rat(1, 1)).is_err());
        assert!(n_lambda_mass(&sets, &rat(0, 1)).is_err());
    }

    #[test]
    fn total_variation() {
        let p = vec![rat(1, 2), rat(1, 2)];
        assert_eq!(tv_distance(&p, &p).unwrap(), rat(0, 1));
        assert_eq!(tv_distance(&[rat(1, 1), rat(0, 1)], &[rat(0, 1), rat(1, 1)]).unwrap(), rat(1, 1));
        assert_eq!(tv_distance(&p, &[rat(1, 1), rat(0, 1)]).unwrap(), rat(1, 2));
        assert!((tv_distance_f64(&[0.5, 0.5], &[1.0, 0.0]) - 0.5).abs() < 1e-15);
    }
}
