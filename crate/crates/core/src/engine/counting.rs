use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{successive_minima, EngineSettings, GaugeForms};
use crate::arith::rational::{self, to_f64};
use crate::arith::Rational;
use crate::body::ConvexBody;
use crate::error::{Error, Result};
use crate::lattice::{matrix, CosetMap, Lattice};

/// `|lambda K ∩ L|`, origin included.
pub fn count_points(body: &ConvexBody, lattice: &Lattice, lambda: &Rational, settings: &EngineSettings) -> Result<BigInt> {
    if lambda.is_negative() {
        return Err(Error::InvalidInput("lambda must be non-negative".into()));
    }
    let forms = GaugeForms::new(body, lattice)?;
    let half = forms.enumerate_half(lambda, settings.budget)?;
    Ok(BigInt::from(2 * half.len() + 1))
}

/// Number of cosets of `lattice / bar` met by `lambda K ∩ lattice`.
pub fn distinct_cosets_in_body(
    body: &ConvexBody,
    lattice: &Lattice,
    bar: &Lattice,
    lambda: &Rational,
    settings: &EngineSettings,
) -> Result<usize> {
    if lambda.is_negative() {
        return Err(Error::InvalidInput("lambda must be non-negative".into()));
    }
    let map = CosetMap::new(lattice, bar)?;
    let forms = GaugeForms::new(body, lattice)?;
    let half = forms.enumerate_half(lambda, settings.budget)?;
    let mut seen: HashSet<Vec<BigInt>> = HashSet::new();
    seen.insert(map.id_from_coords(&vec![BigInt::zero(); lattice.rank()]));
    for c in &half {
        seen.insert(map.id_from_coords(&c.z));
        let neg: Vec<BigInt> = c.z.iter().map(|v| -v).collect();
        seen.insert(map.id_from_coords(&neg));
    }
    Ok(seen.len())
}

/// Covering radius `max_i d_i / (2 a_i)` of a box with respect to `diag(d) Z^n`.
pub fn covering_radius_diagonal(body: &ConvexBody, lattice: &Lattice) -> Result<Rational> {
    let (Some(a), Some(d)) = (body.half_widths(), lattice.diagonal_entries()) else {
        return Err(Error::Unsupported(
            "exact covering radius needs a box and a lattice with diagonal canonical basis".into(),
        ));
    };
    if a.len() != d.len() {
        return Err(Error::DimensionMismatch { expected: d.len(), found: a.len() });
    }
    Ok(d.iter()
        .zip(a)
        .map(|(di, ai)| di.abs() / (ai * rational::int(2)))
        .max()
        .expect("positive dimension"))
}

/// Torus volume `lambda^n vol K` of `(lambda K) / bar`, valid while the
/// translates `lambda K + bar` do not overlap, i.e. `2 lambda <= lambda_1(K, bar)`.
pub fn torus_packing_volume(body: &ConvexBody, bar: &Lattice, lambda: &Rational, settings: &EngineSettings) -> Result<Rational> {
    if lambda.is_negative() {
        return Err(Error::InvalidInput("lambda must be non-negative".into()));
    }
    if !bar.is_full_rank() {
        return Err(Error::Unsupported("torus volumes need a full-rank lattice".into()));
    }
    let l1 = successive_minima(body, bar, 1, settings)?.values.remove(0);
    if lambda * rational::int(2) > l1 {
        return Err(Error::PackingViolated(format!(
            "2 * {} exceeds lambda_1 = {}; use the torus volume lower bound instead",
            rational::fmt_rational(lambda),
            rational::fmt_rational(&l1)
        )));
    }
    Ok(rational::pow(lambda, bar.dim() as u32) * body.volume())
}

/// Monte-Carlo estimate of the torus volume of `(lambda K) / bar`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorusEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

/// Samples uniform points of a fundamental cell of `bar` and tests whether their
/// class meets `lambda K`. Floating point, not certified.
pub fn torus_volume_estimate(
    body: &ConvexBody,
    bar: &Lattice,
    lambda: &Rational,
    samples: u64,
    seed: u64,
) -> Result<TorusEstimate> {
    if !bar.is_full_rank() || body.dim() != bar.dim() {
        return Err(Error::InvalidInput("need a full-rank lattice matching the body dimension".into()));
    }
    if samples == 0 {
        return Err(Error::InvalidInput("at least one sample is required".into()));
    }
    let n = bar.dim();
    let det = to_f64(&bar.det().expect("full rank"));
    let basis: Vec<Vec<f64>> = bar.basis().iter().map(|r| r.iter().map(to_f64).collect()).collect();
    let w = matrix::right_inverse(bar.basis(), n).expect("full rank");
    let reach: Vec<f64> = (0..n)
        .map(|i| {
            let col: Vec<Rational> = w.iter().map(|row| row[i].clone()).collect();
            to_f64(&(lambda * body.support(&col)))
        })
        .collect();
    let gauge = f64_gauge(body);
    let lam = to_f64(lambda);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0u64;
    let mut u = vec![0.0; n];
    for _ in 0..samples {
        for ui in u.iter_mut() {
            *ui = rng.gen::<f64>();
        }
        if class_meets(&u, &basis, &reach, lam, &gauge) {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    let std_error = det * (p * (1.0 - p) / samples as f64).sqrt();
    Ok(TorusEstimate { mean: det * p, std_error, samples, seed })
}

type GaugeFn = Box<dyn Fn(&[f64]) -> f64>;

fn f64_gauge(body: &ConvexBody) -> GaugeFn {
    match body {
        ConvexBody::Box { half_widths } => {
            let a: Vec<f64> = half_widths.iter().map(to_f64).collect();
            Box::new(move |x| x.iter().zip(&a).map(|(xi, ai)| xi.abs() / ai).fold(0.0, f64::max))
        }
        ConvexBody::Polytope(p) => {
            let c: Vec<Vec<f64>> = p.facets().iter().map(|r| r.iter().map(to_f64).collect()).collect();
            Box::new(move |x| {
                c.iter()
                    .map(|ck| ck.iter().zip(x).map(|(a, b)| a * b).sum::<f64>().abs())
                    .fold(0.0, f64::max)
            })
        }
    }
}

/// Whether some `z` in `Z^n` puts `(u - z) B` inside `lam K`.
fn class_meets(u: &[f64], basis: &[Vec<f64>], reach: &[f64], lam: f64, gauge: &GaugeFn) -> bool {
    let n = u.len();
    let lo: Vec<i64> = (0..n).map(|i| (u[i] - reach[i]).ceil() as i64).collect();
    let hi: Vec<i64> = (0..n).map(|i| (u[i] + reach[i]).floor() as i64).collect();
    if lo.iter().zip(&hi).any(|(l, h)| l > h) {
        return false;
    }
    let mut z = lo.clone();
    let mut x = vec![0.0; n];
    loop {
        x.iter_mut().for_each(|v| *v = 0.0);
        for (i, row) in basis.iter().enumerate() {
            let c = u[i] - z[i] as f64;
            for (xj, bj) in x.iter_mut().zip(row) {
                *xj += c * bj;
            }
        }
        if gauge(&x) <= lam {
            return true;
        }
        let mut i = 0;
        loop {
            if i == n {
                return false;
            }
            if z[i] < hi[i] {
                z[i] += 1;
                break;
            }
            z[i] = lo[i];
            i += 1;
        }
    }
}
