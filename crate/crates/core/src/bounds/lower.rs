//! Bounds for avoiding sublattices of lower rank.

use num_bigint::BigInt;
use num_traits::One;

use super::{BoundBreakdown, BoundName, Quantity};
use crate::arith::rational::{self, int};
use crate::arith::{ball_volume_enclosure, nth_root_enclosure, Enclosure, PrecisionPolicy, Rational};
use crate::body::{ConvexBody, SectionData};
use crate::engine::{successive_minima, EngineSettings};
use crate::error::{Error, Result};
use crate::lattice::{matrix, minors_vector, Lattice};

/// Exact inputs shared by the lower-rank avoidance bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerRankInputs {
    pub n: u32,
    pub det: Rational,
    pub volume: Rational,
    /// `lambda_1(K, L)`.
    pub lambda_1: Rational,
    /// `lambda_1(K, L_i)`; `None` for the zero lattice.
    pub part_lambdas: Vec<Option<Rational>>,
}

impl LowerRankInputs {
    fn inverse_sum(&self) -> Rational {
        self.part_lambdas.iter().flatten().map(|l| l.recip()).sum()
    }

    /// `beta` after rescaling `K` so that `lambda_1(K, L) = 1`.
    fn beta(&self) -> Rational {
        rational::pow(&int(6), self.n - 1) * &self.det / (rational::pow(&self.lambda_1, self.n - 1) * &self.volume)
            * self.inverse_sum()
    }

    /// `rho = 2^n det / vol` after the same rescaling.
    fn rho(&self) -> Rational {
        rational::pow2(self.n) * &self.det / (rational::pow(&self.lambda_1, self.n) * &self.volume)
    }
}

pub fn lower_rank_inputs(
    body: &ConvexBody,
    lattice: &Lattice,
    parts: &[Lattice],
    settings: &EngineSettings,
) -> Result<LowerRankInputs> {
    let n = lattice.dim();
    if !lattice.is_full_rank() || n < 2 {
        return Err(Error::HypothesisUnmet("need a full-rank lattice of dimension at least 2".into()));
    }
    for p in parts {
        if p.rank() >= n {
            return Err(Error::HypothesisUnmet("every forbidden sublattice must have rank below n".into()));
        }
        if !p.is_sublattice_of(lattice) {
            return Err(Error::NotSublattice);
        }
    }
    let lambda_1 = successive_minima(body, lattice, 1, settings)?.values.remove(0);
    let part_lambdas = parts
        .iter()
        .map(|p| {
            if p.rank() == 0 {
                Ok(None)
            } else {
                successive_minima(body, p, 1, settings).map(|r| Some(r.values[0].clone()))
            }
        })
        .collect::<Result<_>>()?;
    Ok(LowerRankInputs {
        n: n as u32,
        det: lattice.det().expect("full rank"),
        volume: body.volume(),
        lambda_1,
        part_lambdas,
    })
}

/// `6^(n-1) det/(lambda_1^(n-2) vol) sum_i 1/lambda_1(K, L_i) + (2^n det/vol)^(1/n)`.
///
/// Intermediates `beta`, `rho` and `gamma_bar` are taken after rescaling `K`
/// by `lambda_1(K, L)`; the final value is `lambda_1 * gamma_bar`.
pub fn thm_lower_from(inputs: &LowerRankInputs, policy: &PrecisionPolicy) -> BoundBreakdown {
    let beta = inputs.beta();
    let rho = inputs.rho();
    let root = nth_root_enclosure(&rho, inputs.n, &policy.tightened(4));
    let gamma_bar = root.add_rational(&beta);
    let value = gamma_bar.scale(&inputs.lambda_1);
    BoundBreakdown::new(BoundName::AvoidLowerRank, value)
        .with("beta", Quantity::Exact(beta))
        .with("rho", Quantity::Exact(rho))
        .with("gamma_bar", Quantity::Interval(gamma_bar))
        .with("lambda_1", Quantity::Exact(inputs.lambda_1.clone()))
        .with("part_lambda_1", Quantity::List(inputs.part_lambdas.iter().flatten().cloned().collect()))
        .with("inverse_sum", Quantity::Exact(inputs.inverse_sum()))
}

pub fn thm_lower_bound(
    body: &ConvexBody,
    lattice: &Lattice,
    parts: &[Lattice],
    settings: &EngineSettings,
) -> Result<BoundBreakdown> {
    Ok(thm_lower_from(&lower_rank_inputs(body, lattice, parts, settings)?, &settings.precision))
}

/// Bound on the `(j+1)`-th restricted minimum avoiding lower-rank sublattices:
/// `lambda_1 (beta + (alpha + rho^((n-j)/n))^(1/(n-j)))` with
/// `alpha = 3^j 2^(n-1) det / vol`, all after rescaling to `lambda_1(K, L) = 1`.
pub fn cor_higher_lower_from(inputs: &LowerRankInputs, j: usize, policy: &PrecisionPolicy) -> Result<BoundBreakdown> {
    let n = inputs.n;
    if j == 0 || j as u32 >= n {
        return Err(Error::InvalidInput(format!("j = {j} must lie in [1, {}]", n - 1)));
    }
    let j = j as u32;
    let beta = inputs.beta();
    let rho = inputs.rho();
    let alpha = rational::pow(&int(3), j) * rational::pow2(n - 1) * &inputs.det
        / (rational::pow(&inputs.lambda_1, n) * &inputs.volume);
    let local = policy.tightened(8);
    let inner = Enclosure::exact(rho.clone()).pow_ratio(n - j, n, &local).add_rational(&alpha);
    let gamma_bar = inner.nth_root(n - j, &local).add_rational(&beta);
    let value = gamma_bar.scale(&inputs.lambda_1);
    Ok(BoundBreakdown::new(BoundName::AvoidLowerRankHigher, value)
        .with("j", Quantity::Integer(BigInt::from(j)))
        .with("alpha", Quantity::Exact(alpha))
        .with("beta", Quantity::Exact(beta))
        .with("rho", Quantity::Exact(rho))
        .with("gamma_bar", Quantity::Interval(gamma_bar))
        .with("lambda_1", Quantity::Exact(inputs.lambda_1.clone())))
}

pub fn cor_higher_lower_bound(
    body: &ConvexBody,
    lattice: &Lattice,
    parts: &[Lattice],
    j: usize,
    settings: &EngineSettings,
) -> Result<BoundBreakdown> {
    cor_higher_lower_from(&lower_rank_inputs(body, lattice, parts, settings)?, j, &settings.precision)
}

/// `(3/2)^(r-1) r^r (sum_i 1/|v(L_i)|_inf + sqrt(s)) |v(L)|_inf + 1` for the cube `[-1, 1]^n`.
pub fn fukshansky_bound(
    body: &ConvexBody,
    lattice: &Lattice,
    parts: &[Lattice],
    policy: &PrecisionPolicy,
) -> Result<BoundBreakdown> {
    if !body.is_unit_cube() {
        return Err(Error::Unsupported("this bound is stated for the cube [-1, 1]^n only".into()));
    }
    if parts.is_empty() {
        return Err(Error::InvalidInput("at least one forbidden sublattice is required".into()));
    }
    let r = lattice.rank();
    if r == 0 {
        return Err(Error::InvalidInput("the zero lattice has no minima".into()));
    }
    let mut part_norms = Vec::with_capacity(parts.len());
    for p in parts {
        if p.rank() == 0 || p.rank() >= r {
            return Err(Error::HypothesisUnmet("forbidden sublattices must have rank in [1, rank L)".into()));
        }
        if !p.is_sublattice_of(lattice) {
            return Err(Error::NotSublattice);
        }
        part_norms.push(minors_vector(p)?.max_abs);
    }
    let v = minors_vector(lattice)?.max_abs;
    let s = parts.len() as i64;
    let sqrt_s = nth_root_enclosure(&int(s), 2, &policy.tightened(16));
    let inv: Rational = part_norms.iter().map(|x| x.recip()).sum();
    let r32 = r as u32;
    let c = rational::pow(&rational::rat(3, 2), r32 - 1) * rational::pow(&int(r as i64), r32) * &v;
    let value = sqrt_s.add_rational(&inv).scale(&c).add_rational(&Rational::one());
    Ok(BoundBreakdown::new(BoundName::Fukshansky, value)
        .with("minor_sup_norm", Quantity::Exact(v))
        .with("part_minor_sup_norms", Quantity::List(part_norms))
        .with("sqrt_s", Quantity::Interval(sqrt_s)))
}

/// `nu max_i {1, nu^(r-1) vol(K ∩ lin L_i)/(omega_r det L_i), (nu/lambda_1(K, L ∩ lin L_i))^((r-2)/2)}`
/// with `nu = 7 r (s omega_r det L / vol K)^(1/r)`, for sublattices of rank `r - 1`.
///
/// Section volumes and the minima of `L ∩ lin L_i` are supplied by the caller.
pub fn gaudron_bound(
    body: &ConvexBody,
    lattice: &Lattice,
    parts: &[Lattice],
    sections: &[SectionData],
    part_lambdas: &[Rational],
    policy: &PrecisionPolicy,
) -> Result<BoundBreakdown> {
    let r = lattice.rank();
    if !lattice.is_full_rank() || r < 2 {
        return Err(Error::HypothesisUnmet("need a full-rank lattice of dimension at least 2".into()));
    }
    if parts.is_empty() {
        return Err(Error::InvalidInput("at least one forbidden sublattice is required".into()));
    }
    if sections.len() != parts.len() || part_lambdas.len() != parts.len() {
        return Err(Error::InvalidInput("one section and one sub-minimum per forbidden sublattice are required".into()));
    }
    for (p, sec) in parts.iter().zip(sections) {
        if p.rank() != r - 1 {
            return Err(Error::HypothesisUnmet("every forbidden sublattice must have rank r - 1".into()));
        }
        if !p.is_sublattice_of(lattice) {
            return Err(Error::NotSublattice);
        }
        let mut rows = sec.basis.clone();
        rows.extend(p.basis().iter().cloned());
        if sec.dim() != r - 1 || matrix::rank(&rows) != r - 1 {
            return Err(Error::InvalidInput("section subspace must be the hull of its sublattice".into()));
        }
    }
    let local = policy.tightened(64);
    let r32 = r as u32;
    let s = parts.len() as i64;
    let omega = ball_volume_enclosure(r32, &local);
    let det = lattice.det().expect("full rank");
    let ratio = omega.scale(&(int(s) * det / body.volume()));
    let nu = ratio.nth_root(r32, &local).scale(&int(7 * r as i64));
    let mut worst = Enclosure::exact(Rational::one());
    for ((p, sec), l) in parts.iter().zip(sections).zip(part_lambdas) {
        let det_p = nth_root_enclosure(p.det_squared(), 2, &local);
        let second = nu.powi(r32 - 1).scale(&sec.volume).mul(&omega.mul(&det_p).recip());
        let third = if r == 2 {
            Enclosure::exact(Rational::one())
        } else {
            nu.scale(&l.recip()).pow_ratio(r32 - 2, 2, &local)
        };
        worst = worst.max(&second).max(&third);
    }
    let value = nu.mul(&worst);
    Ok(BoundBreakdown::new(BoundName::Gaudron, value)
        .with("nu", Quantity::Interval(nu))
        .with("omega_r", Quantity::Interval(omega))
        .with("max_term", Quantity::Interval(worst)))
}

/// `(s+1) mu` for the first restricted minimum and `(s+2) mu` for the others.
pub fn plank_bound(mu: &Rational, s: usize, j: usize) -> Result<Rational> {
    if j == 0 {
        return Err(Error::InvalidInput("j must be at least 1".into()));
    }
    let factor = if j == 1 { s + 1 } else { s + 2 };
    Ok(mu * int(factor as i64))
}
