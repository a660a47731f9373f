//! Exact enumeration of lattice points of bounded gauge.
//!
//! A lattice point is `x = (1/D) sum z_i h_i` where `h_i` are the rows of the
//! integral HNF basis. The gauge is `max_k |<f_k, X>| / s_k` for integral forms
//! `f_k` and `X = D x`, so membership in `R K` is a set of integer threshold
//! tests on values that change by a fixed vector when one `z_i` steps by one.

use std::cmp::Ordering;

use num_bigint::{BigInt, ToBigInt};
use num_traits::{NumAssign, One, Signed, ToPrimitive, Zero};

use crate::arith::rational::{self, from_big};
use crate::arith::Rational;
use crate::body::ConvexBody;
use crate::error::{Error, Result};
use crate::lattice::{matrix, Lattice};

/// A lattice point in the positive half-space, first nonzero entry of `x` positive.
#[derive(Clone, Debug)]
pub(crate) struct Candidate {
    /// Coordinates with respect to the canonical basis.
    pub z: Vec<BigInt>,
    /// `denom * x`.
    pub scaled: Vec<BigInt>,
    pub gauge: Rational,
    norm_sq: BigInt,
}

impl Candidate {
    pub fn vector(&self, denom: &BigInt) -> Vec<Rational> {
        self.scaled.iter().map(|v| Rational::new(v.clone(), denom.clone())).collect()
    }

    /// Sort key: gauge, then Euclidean length, then the vector in decreasing
    /// lexicographic order (so `e_1` precedes `e_2`).
    pub fn cmp_key(&self, other: &Self) -> Ordering {
        self.gauge
            .cmp(&other.gauge)
            .then_with(|| self.norm_sq.cmp(&other.norm_sq))
            .then_with(|| other.scaled.cmp(&self.scaled))
    }
}

/// Gauge of `K` restricted to a lattice, expressed through integral forms.
pub(crate) struct GaugeForms {
    /// `forms[k][i] = <f_k, h_i>`.
    forms: Vec<Vec<BigInt>>,
    /// `gauge(x) = max_k |<f_k, X>| / scales[k]`.
    scales: Vec<Rational>,
    /// Coordinate bounds per unit radius: `|z_i| <= R * support[i]`.
    support: Vec<Rational>,
    int_basis: Vec<Vec<BigInt>>,
    denom: BigInt,
}

impl GaugeForms {
    pub fn new(body: &ConvexBody, lattice: &Lattice) -> Result<Self> {
        if body.dim() != lattice.dim() {
            return Err(Error::DimensionMismatch { expected: lattice.dim(), found: body.dim() });
        }
        let n = lattice.dim();
        let denom = lattice.denom().clone();
        let d = from_big(denom.clone());
        let mut raw_forms: Vec<Vec<BigInt>> = Vec::new();
        let mut scales = Vec::new();
        match body {
            ConvexBody::Box { half_widths } => {
                for (j, a) in half_widths.iter().enumerate() {
                    raw_forms.push((0..n).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect());
                    scales.push(a * &d);
                }
            }
            ConvexBody::Polytope(p) => {
                for c in p.facets() {
                    let e = rational::lcm_of_denominators(c.iter());
                    let er = from_big(e.clone());
                    raw_forms.push(c.iter().map(|x| (x * &er).to_integer()).collect());
                    scales.push(er * &d);
                }
            }
        }
        let int_basis = lattice.int_basis().to_vec();
        let forms = raw_forms
            .iter()
            .map(|f| int_basis.iter().map(|h| f.iter().zip(h).map(|(a, b)| a * b).sum()).collect())
            .collect();
        let support = if lattice.rank() == 0 {
            Vec::new()
        } else {
            let w = matrix::right_inverse(lattice.basis(), n).expect("independent basis");
            (0..lattice.rank())
                .map(|i| {
                    let col: Vec<Rational> = w.iter().map(|row| row[i].clone()).collect();
                    body.support(&col)
                })
                .collect()
        };
        Ok(Self { forms, scales, support, int_basis, denom })
    }

    pub fn denom(&self) -> &BigInt {
        &self.denom
    }

    fn gauge_of(&self, values: &[BigInt]) -> Rational {
        values
            .iter()
            .zip(&self.scales)
            .map(|(v, s)| from_big(v.abs()) / s)
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn coordinate_bounds(&self, radius: &Rational) -> Vec<BigInt> {
        self.support.iter().map(|h| (radius * h).floor().to_integer()).collect()
    }

    /// All lattice points with `0 < gauge <= radius` in the positive half-space,
    /// sorted by [`Candidate::cmp_key`].
    pub fn enumerate_half(&self, radius: &Rational, budget: u64) -> Result<Vec<Candidate>> {
        if radius.is_negative() {
            return Err(Error::InvalidInput("radius must be non-negative".into()));
        }
        let r = self.int_basis.len();
        if r == 0 {
            return Ok(Vec::new());
        }
        let bounds = self.coordinate_bounds(radius);
        let mut cells = &bounds[0] + 1;
        for m in &bounds[1..] {
            cells *= 2 * m + 1;
        }
        if cells > BigInt::from(budget) {
            return Err(Error::BudgetExceeded { needed: cells, budget });
        }
        // Largest magnitudes reached, to choose the machine-integer path.
        let value_cap: BigInt = self
            .forms
            .iter()
            .map(|f| f.iter().zip(&bounds).map(|(a, m)| a.abs() * m).sum::<BigInt>())
            .max()
            .unwrap_or_default();
        // thresholds above every reachable value are clamped
        let clamp: BigInt = &value_cap + BigInt::one();
        let thresholds: Vec<BigInt> =
            self.scales.iter().map(|s| (radius * s).floor().to_integer().min(clamp.clone())).collect();
        let limit = BigInt::one() << 60;
        let fits = value_cap < limit && bounds.iter().all(|m| m < &limit);
        let hits = if fits {
            walk::<i128>(&self.forms, &bounds, &thresholds)
        } else {
            walk::<BigInt>(&self.forms, &bounds, &thresholds)
        };

        let mut out: Vec<Candidate> = hits
            .into_iter()
            .map(|(z, values)| {
                let mut scaled: Vec<BigInt> = (0..self.int_basis[0].len())
                    .map(|j| z.iter().zip(&self.int_basis).map(|(c, h)| c * &h[j]).sum())
                    .collect();
                let mut z = z;
                if scaled.iter().find(|v| !v.is_zero()).is_some_and(Signed::is_negative) {
                    scaled.iter_mut().for_each(|v| *v = -&*v);
                    z.iter_mut().for_each(|v| *v = -&*v);
                }
                let norm_sq = scaled.iter().map(|v| v * v).sum();
                Candidate { z, scaled, gauge: self.gauge_of(&values), norm_sq }
            })
            .collect();
        out.sort_by(Candidate::cmp_key);
        Ok(out)
    }
}

trait WalkInt: Clone + Ord + Signed + NumAssign + ToBigInt {
    fn from_big(x: &BigInt) -> Self;
}

impl WalkInt for i128 {
    fn from_big(x: &BigInt) -> Self {
        x.to_i128().expect("checked range")
    }
}

impl WalkInt for BigInt {
    fn from_big(x: &BigInt) -> Self {
        x.clone()
    }
}

/// Odometer over `z_0 in [0, m_0]`, `z_i in [-m_i, m_i]`, keeping lexicographically
/// positive `z` whose form values pass every threshold.
fn walk<T: WalkInt>(forms: &[Vec<BigInt>], bounds: &[BigInt], thresholds: &[BigInt]) -> Vec<(Vec<BigInt>, Vec<BigInt>)> {
    let r = bounds.len();
    let nf = forms.len();
    let g: Vec<Vec<T>> = (0..r).map(|i| (0..nf).map(|k| T::from_big(&forms[k][i])).collect()).collect();
    let m: Vec<T> = bounds.iter().map(T::from_big).collect();
    let t: Vec<T> = thresholds.iter().map(T::from_big).collect();
    let lo: Vec<T> = (0..r).map(|i| if i == 0 { T::zero() } else { -m[i].clone() }).collect();
    let mut z: Vec<T> = lo.clone();
    let mut vals: Vec<T> = vec![T::zero(); nf];
    for (i, zi) in z.iter().enumerate() {
        for k in 0..nf {
            vals[k] += zi.clone() * g[i][k].clone();
        }
    }
    let mut hits = Vec::new();
    loop {
        if vals.iter().zip(&t).all(|(v, th)| v.abs() <= *th) {
            if let Some(first) = z.iter().find(|v| !v.is_zero()) {
                if first.is_positive() {
                    hits.push((
                        z.iter().map(|v| v.to_bigint().expect("integer")).collect(),
                        vals.iter().map(|v| v.to_bigint().expect("integer")).collect(),
                    ));
                }
            }
        }
        let mut i = r;
        loop {
            if i == 0 {
                return hits;
            }
            i -= 1;
            if z[i] < m[i] {
                z[i] += T::one();
                for k in 0..nf {
                    vals[k] += g[i][k].clone();
                }
                break;
            }
            let span = m[i].clone() - lo[i].clone();
            for k in 0..nf {
                vals[k] -= span.clone() * g[i][k].clone();
            }
            z[i] = lo[i].clone();
        }
    }
}

/// Incrementally grown set of linearly independent integer vectors.
#[derive(Clone, Debug, Default)]
pub(crate) struct IndependentSet {
    /// Echelon rows with their pivot columns.
    rows: Vec<(usize, Vec<Rational>)>,
}

impl IndependentSet {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v` if it is independent of the rows so far; returns whether it was added.
    pub fn insert(&mut self, v: &[BigInt]) -> bool {
        let mut w: Vec<Rational> = v.iter().map(|x| from_big(x.clone())).collect();
        for (p, row) in &self.rows {
            if w[*p].is_zero() {
                continue;
            }
            let f = &w[*p] / &row[*p];
            for (wj, rj) in w.iter_mut().zip(row) {
                *wj -= &f * rj;
            }
        }
        match w.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                self.rows.push((p, w));
                true
            }
            None => false,
        }
    }
}

/// Integer vectors of a coordinate lattice, used for forbidden-sublattice membership.
pub(crate) fn coordinate_sublattice(ambient: &Lattice, part: &Lattice) -> Result<Lattice> {
    let rows = part
        .basis()
        .iter()
        .map(|b| {
            ambient
                .coordinates(b)
                .map(|c| c.into_iter().map(from_big).collect::<Vec<Rational>>())
                .ok_or(Error::NotSublattice)
        })
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        // a rank-0 ambient has no candidates to test
        return Ok(Lattice::zero(ambient.rank().max(1)));
    }
    Lattice::new(ambient.rank(), rows)
}
