//! Classical volume bounds: first minimum, Siegel's lemma, lattice point counts.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{BoundBreakdown, BoundName, Quantity};
use crate::arith::rational::{self, from_big};
use crate::arith::{laguerre_at_minus_two, nth_root_enclosure, PrecisionPolicy, Rational};
use crate::body::{ConvexBody, SectionData};
use crate::engine::{successive_minima, EngineSettings};
use crate::error::{Error, Result};
use crate::lattice::{kernel_lattice, matrix, Lattice};

/// Upper bound `(2^r det L / vol_r(K ∩ lin L))^(1/r)` on `lambda_1(K, L)`.
///
/// The section volume is taken from `section` when given and must be given
/// when `L` is not of full rank.
pub fn minkowski_first(
    body: &ConvexBody,
    lattice: &Lattice,
    section: Option<&SectionData>,
    policy: &PrecisionPolicy,
) -> Result<BoundBreakdown> {
    let r = lattice.rank();
    if r == 0 {
        return Err(Error::InvalidInput("the zero lattice has no minima".into()));
    }
    let vol = match section {
        Some(sec) => {
            let mut rows = sec.basis.clone();
            rows.extend(lattice.basis().iter().cloned());
            if sec.dim() != r || matrix::rank(&rows) != r {
                return Err(Error::InvalidInput("section subspace must be the linear hull of the lattice".into()));
            }
            sec.volume.clone()
        }
        None if lattice.is_full_rank() => body.volume(),
        None => {
            return Err(Error::HypothesisUnmet("a lower-rank lattice needs the section volume of its hull".into()))
        }
    };
    let r32 = r as u32;
    // (2^r det / vol)^(1/r) = (4^r det^2 / vol^2)^(1/(2r)) avoids the square root of det^2
    let q = rational::pow2(2 * r32) * lattice.det_squared() / (&vol * &vol);
    let value = nth_root_enclosure(&q, 2 * r32, policy);
    Ok(BoundBreakdown::new(BoundName::MinkowskiFirst, value)
        .with("rank", Quantity::Integer(BigInt::from(r)))
        .with("det_squared", Quantity::Exact(lattice.det_squared().clone()))
        .with("section_volume", Quantity::Exact(vol)))
}

/// Siegel bound `det(A A^T)^(1/(2(n-m)))` on the smallest maximum-norm nonzero
/// integer solution of `A z = 0`, with the exact minimum recorded for comparison.
pub fn siegel_bound(a: &[Vec<BigInt>], settings: &EngineSettings) -> Result<BoundBreakdown> {
    let m = a.len();
    let n = a.first().map(Vec::len).ok_or_else(|| Error::InvalidInput("empty matrix".into()))?;
    if m >= n {
        return Err(Error::InvalidInput(format!("need fewer rows than columns, got {m} x {n}")));
    }
    let kernel = kernel_lattice(a, n)?;
    let ar = matrix::to_rational(a);
    let det_aat = matrix::det(&matrix::gram(&ar));
    let value = nth_root_enclosure(&det_aat, 2 * (n - m) as u32, &settings.precision);
    let min = successive_minima(&ConvexBody::cube(n), &kernel, 1, settings)?;
    Ok(BoundBreakdown::new(BoundName::Siegel, value)
        .with("det_a_at", Quantity::Exact(det_aat))
        .with("kernel_det_squared", Quantity::Exact(kernel.det_squared().clone()))
        .with("min_sup_norm", Quantity::Exact(min.values[0].clone()))
        .with("shortest_kernel_vector", Quantity::List(min.witnesses[0].clone())))
}

fn full_rank_det(lattice: &Lattice) -> Result<Rational> {
    lattice
        .det()
        .ok_or_else(|| Error::HypothesisUnmet("the counting bounds need a full-rank lattice".into()))
}

fn check_lambda(lambda: &Rational) -> Result<()> {
    if lambda.is_negative() {
        return Err(Error::InvalidInput("lambda must be non-negative".into()));
    }
    Ok(())
}

/// Lower bound `2 floor(vol(lambda K) / (2^n det L)) + 1` on `|lambda K ∩ L|`.
pub fn vdc_lower(body: &ConvexBody, lattice: &Lattice, lambda: &Rational) -> Result<BigInt> {
    check_lambda(lambda)?;
    let det = full_rank_det(lattice)?;
    let n = lattice.dim() as u32;
    let ratio = rational::pow(lambda, n) * body.volume() / (rational::pow2(n) * det);
    Ok(ratio.floor().to_integer() * 2 + 1)
}

/// Upper bound `(2 / lambda_1(lambda K, L) + 1)^n` on `|lambda K ∩ L|`.
pub fn bhw_upper(body: &ConvexBody, lattice: &Lattice, lambda: &Rational, settings: &EngineSettings) -> Result<Rational> {
    check_lambda(lambda)?;
    full_rank_det(lattice)?;
    if lambda.is_zero() {
        return Ok(Rational::one());
    }
    let l1 = successive_minima(body, lattice, 1, settings)?.values.remove(0);
    // lambda_1(lambda K) = lambda_1(K) / lambda
    let base = rational::int(2) * lambda / l1 + Rational::one();
    Ok(rational::pow(&base, lattice.dim() as u32))
}

/// Upper bound `(n!/2^n) (vol(lambda K)/det L) L_n(-2)` on `|lambda K ∩ L|`,
/// valid when `lambda K` contains `n` linearly independent lattice points.
pub fn henze_upper(body: &ConvexBody, lattice: &Lattice, lambda: &Rational, settings: &EngineSettings) -> Result<Rational> {
    check_lambda(lambda)?;
    let det = full_rank_det(lattice)?;
    let n = lattice.dim();
    let ln = successive_minima(body, lattice, n, settings)?.values.remove(n - 1);
    if lambda < &ln {
        return Err(Error::HypothesisUnmet(format!(
            "lambda K spans fewer than n dimensions (lambda_n = {})",
            rational::fmt_rational(&ln)
        )));
    }
    let n32 = n as u32;
    let vol = rational::pow(lambda, n32) * body.volume();
    Ok(from_big(rational::factorial(n32)) / rational::pow2(n32) * vol / det * laguerre_at_minus_two(n32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat, Enclosure};

    fn ex14_body() -> ConvexBody {
        ConvexBody::new_box(vec![int(1), rat(2, 25)]).unwrap()
    }

    fn settings() -> EngineSettings {
        EngineSettings::default()
    }

    #[test]
    fn first_minimum_bounds() {
        let p = PrecisionPolicy::default();
        let z2 = Lattice::integer(2);
        let b = minkowski_first(&ConvexBody::cube(2), &z2, None, &p).unwrap();
        assert_eq!(b.value, Enclosure::exact(int(1)));
        let b = minkowski_first(&ex14_body(), &z2, None, &p).unwrap();
        assert!(b.lo() * b.lo() <= rat(25, 2) && b.hi() * b.hi() >= rat(25, 2));
        let two = Lattice::diagonal(&[int(2), int(2)]).unwrap();
        assert_eq!(minkowski_first(&ConvexBody::cube(2), &two, None, &p).unwrap().value, Enclosure::exact(int(2)));
    }

    #[test]
    fn first_minimum_with_section() {
        let p = PrecisionPolicy::default();
        let axis = Lattice::from_int_rows(2, &[vec![1, 0]]).unwrap();
        assert!(matches!(
            minkowski_first(&ConvexBody::cube(2), &axis, None, &p),
            Err(Error::HypothesisUnmet(_))
        ));
        let sec = ConvexBody::cube(2).coordinate_section(&[0]).unwrap();
        let b = minkowski_first(&ConvexBody::cube(2), &axis, Some(&sec), &p).unwrap();
        assert_eq!(b.value, Enclosure::exact(int(1)));
        let wrong = ConvexBody::cube(2).coordinate_section(&[1]).unwrap();
        assert!(minkowski_first(&ConvexBody::cube(2), &axis, Some(&wrong), &p).is_err());
    }

    #[test]
    fn siegel_fixtures() {
        let a = vec![vec![BigInt::from(1), BigInt::from(1), BigInt::from(1)]];
        let b = siegel_bound(&a, &settings()).unwrap();
        assert_eq!(b.exact("kernel_det_squared"), Some(&int(3)));
        assert_eq!(b.exact("min_sup_norm"), Some(&int(1)));
        assert!(b.value.width() <= rat(1, 1_000_000_000));
        // 3^(1/4) = 1.31607...
        assert!(b.lo() > &rat(1316, 1000) && b.hi() < &rat(1317, 1000));

        let a = vec![vec![BigInt::from(1), BigInt::from(0), BigInt::from(0)]];
        let b = siegel_bound(&a, &settings()).unwrap();
        assert_eq!(b.value, Enclosure::exact(int(1)));
        assert_eq!(b.exact("min_sup_norm"), Some(&int(1)));

        let a = vec![vec![BigInt::from(2), BigInt::from(1)]];
        let b = siegel_bound(&a, &settings()).unwrap();
        assert_eq!(b.exact("min_sup_norm"), Some(&int(2)));
        assert!(b.dominates(&int(2)));
        assert!(b.lo() * b.lo() <= int(5) && b.hi() * b.hi() >= int(5));

        let square = vec![vec![BigInt::from(1), BigInt::from(0)], vec![BigInt::from(0), BigInt::from(1)]];
        assert!(siegel_bound(&square, &settings()).is_err());
    }

    #[test]
    fn counting_bounds() {
        let k = ConvexBody::cube(2);
        let z2 = Lattice::integer(2);
        let s = settings();
        assert_eq!(vdc_lower(&k, &z2, &int(1)).unwrap(), BigInt::from(3));
        assert_eq!(bhw_upper(&k, &z2, &int(1), &s).unwrap(), int(9));
        assert_eq!(henze_upper(&k, &z2, &int(1), &s).unwrap(), int(14));
        assert_eq!(vdc_lower(&k, &z2, &int(2)).unwrap(), BigInt::from(9));
        assert_eq!(bhw_upper(&k, &z2, &int(2), &s).unwrap(), int(25));
        assert_eq!(vdc_lower(&k, &z2, &rat(1, 2)).unwrap(), BigInt::from(1));
        assert_eq!(bhw_upper(&k, &z2, &int(0), &s).unwrap(), int(1));
        assert!(matches!(henze_upper(&k, &z2, &rat(1, 2), &s), Err(Error::HypothesisUnmet(_))));
    }
}
