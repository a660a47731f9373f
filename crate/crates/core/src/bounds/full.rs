//! Bounds for avoiding sublattices of full rank.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{BoundBreakdown, BoundName, Quantity};
use crate::arith::rational::{self, from_big, int};
use crate::arith::{nth_root_enclosure, Enclosure, PrecisionPolicy, Rational};
use crate::body::ConvexBody;
use crate::engine::{successive_minima, EngineSettings};
use crate::error::{Error, Result};
use crate::lattice::{m_value, union_covers, Lattice};

/// Exact inputs of the full-rank avoidance bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullRankInputs {
    pub n: u32,
    pub det: Rational,
    pub volume: Rational,
    pub s: usize,
    /// Intersection of the forbidden sublattices.
    pub bar: Lattice,
    pub det_bar: Rational,
    /// `sum_i det(bar)/det(L_i) - s + 1`.
    pub m: BigInt,
    pub index: BigInt,
    /// `lambda_1(K, bar)`.
    pub lambda_bar: Rational,
    /// `lambda_1(K, L)`.
    pub lambda_1: Rational,
}

impl FullRankInputs {
    /// `2^n det m / (lambda_1(K, bar)^(n-1) vol)`.
    fn lead(&self) -> Rational {
        rational::pow2(self.n) * &self.det * from_big(self.m.clone())
            / (rational::pow(&self.lambda_bar, self.n - 1) * &self.volume)
    }
}

fn check_full_parts(lattice: &Lattice, parts: &[Lattice]) -> Result<()> {
    if !lattice.is_full_rank() {
        return Err(Error::HypothesisUnmet("need a full-rank lattice".into()));
    }
    if parts.is_empty() {
        return Err(Error::InvalidInput("at least one forbidden sublattice is required".into()));
    }
    for p in parts {
        if !p.is_full_rank() || p.dim() != lattice.dim() {
            return Err(Error::HypothesisUnmet("every forbidden sublattice must have full rank".into()));
        }
        if !p.is_sublattice_of(lattice) {
            return Err(Error::NotSublattice);
        }
    }
    Ok(())
}

pub fn full_rank_inputs(
    body: &ConvexBody,
    lattice: &Lattice,
    parts: &[Lattice],
    settings: &EngineSettings,
) -> Result<FullRankInputs> {
    check_full_parts(lattice, parts)?;
    if union_covers(lattice, parts, settings.coset_cap)? {
        return Err(Error::EmptyAdmissibleSet);
    }
    let mv = m_value(lattice, parts)?;
    let lambda_bar = successive_minima(body, &mv.intersection, 1, settings)?.values.remove(0);
    let lambda_1 = successive_minima(body, lattice, 1, settings)?.values.remove(0);
    Ok(FullRankInputs {
        n: lattice.dim() as u32,
        det: lattice.det().expect("full rank"),
        volume: body.volume(),
        s: parts.len(),
        det_bar: mv.intersection.det().expect("full rank"),
        bar: mv.intersection,
        m: mv.m,
        index: mv.index,
        lambda_bar,
        lambda_1,
    })
}

/// `n^(-1/(n-1)) (n^n - 1) / n^n`, the additive constant of the improved form.
pub fn improved_constant(n: u32, policy: &PrecisionPolicy) -> Result<Enclosure> {
    if n < 2 {
        return Err(Error::Unsupported("the improved form needs n >= 2".into()));
    }
    let nn = rational::pow(&int(n as i64), n);
    let tail = (&nn - Rational::one()) / nn;
    Ok(nth_root_enclosure(&int(n as i64).recip(), n - 1, &policy.tightened(16)).scale(&tail))
}

/// `2^n det L / (lambda_1(K, bar)^(n-1) vol K) m + lambda_1(K, bar)`, a strict
/// upper bound on the first restricted minimum.
///
/// With one forbidden sublattice the additive term is `lambda_1(K, L)`. The
/// improved form replaces the additive term by `c_n lambda_1(K, bar)` with
/// `c_n` from [`improved_constant`] (or keeps `lambda_1(K, L)` when smaller and `s = 1`).
pub fn thm_full_from(inputs: &FullRankInputs, improved: bool, policy: &PrecisionPolicy) -> Result<BoundBreakdown> {
    let lead = inputs.lead();
    let plain_term = if inputs.s == 1 { inputs.lambda_1.clone() } else { inputs.lambda_bar.clone() };
    let (name, value, term) = if improved {
        let c = improved_constant(inputs.n, policy)?;
        let mut term = c.scale(&inputs.lambda_bar);
        if inputs.s == 1 && term.lo() >= &plain_term {
            term = Enclosure::exact(plain_term.clone());
        }
        (BoundName::AvoidFullRankImproved, term.add_rational(&lead), term)
    } else {
        (BoundName::AvoidFullRank, Enclosure::exact(&lead + &plain_term), Enclosure::exact(plain_term))
    };
    Ok(BoundBreakdown::new(name, value)
        .with("lead", Quantity::Exact(lead))
        .with("additive_term", Quantity::Interval(term))
        .with("m", Quantity::Integer(inputs.m.clone()))
        .with("index", Quantity::Integer(inputs.index.clone()))
        .with("det_bar", Quantity::Exact(inputs.det_bar.clone()))
        .with("lambda_bar", Quantity::Exact(inputs.lambda_bar.clone()))
        .with("lambda_1", Quantity::Exact(inputs.lambda_1.clone()))
        .with("improved", Quantity::Flag(improved)))
}

pub fn thm_full_bound(
    body: &ConvexBody,
    lattice: &Lattice,
    parts: &[Lattice],
    improved: bool,
    settings: &EngineSettings,
) -> Result<BoundBreakdown> {
    thm_full_from(&full_rank_inputs(body, lattice, parts, settings)?, improved, &settings.precision)
}

fn check_index(lattice: &Lattice, i: usize) -> Result<()> {
    if i == 0 || i > lattice.dim() {
        return Err(Error::InvalidInput(format!("i = {i} must lie in [1, {}]", lattice.dim())));
    }
    Ok(())
}

/// Upper bound on the `i`-th restricted minimum: the first-minimum bound plus
/// `lambda_i(K, bar)` for `i >= 2`.
///
/// The form `lead + lambda_1(K, bar) + lambda_(i-1)(K, bar)` is recorded as
/// `stated_form`; it is not a valid bound in general (see the tests).
pub fn cor_full_higher(
    body: &ConvexBody,
    lattice: &Lattice,
    parts: &[Lattice],
    i: usize,
    settings: &EngineSettings,
) -> Result<BoundBreakdown> {
    check_index(lattice, i)?;
    let inputs = full_rank_inputs(body, lattice, parts, settings)?;
    let base = thm_full_from(&inputs, false, &settings.precision)?;
    let base_value = base.hi().clone();
    let bar_minima = successive_minima(body, &inputs.bar, i, settings)?.values;
    let previous = if i == 1 { Rational::zero() } else { bar_minima[i - 2].clone() };
    let stated = inputs.lead() + &inputs.lambda_bar + previous;
    let value = if i == 1 { base_value.clone() } else { &base_value + &bar_minima[i - 1] };
    let mut out = BoundBreakdown::new(BoundName::AvoidFullRankHigher, Enclosure::exact(value))
        .with("i", Quantity::Integer(BigInt::from(i)))
        .with("first_minimum_bound", Quantity::Exact(base_value))
        .with("bar_minima", Quantity::List(bar_minima))
        .with("stated_form", Quantity::Exact(stated));
    for key in ["lead", "m", "lambda_bar", "lambda_1"] {
        if let Some(q) = base.get(key) {
            out = out.with(key, q.clone());
        }
    }
    Ok(out)
}

/// `2^n det L / (lambda_1(K, L_1)^(n-1) vol K) + lambda_1(K, L) + lambda_i(K, L)`
/// for a single proper full-rank sublattice.
pub fn cor_one_full_higher(
    body: &ConvexBody,
    lattice: &Lattice,
    part: &Lattice,
    i: usize,
    settings: &EngineSettings,
) -> Result<BoundBreakdown> {
    check_full_parts(lattice, std::slice::from_ref(part))?;
    check_index(lattice, i)?;
    if lattice.index_of(part)?.is_one() {
        return Err(Error::EmptyAdmissibleSet);
    }
    let n = lattice.dim() as u32;
    let det = lattice.det().expect("full rank");
    let l_part = successive_minima(body, part, 1, settings)?.values.remove(0);
    let minima = successive_minima(body, lattice, i, settings)?.values;
    let lead = rational::pow2(n) * det / (rational::pow(&l_part, n - 1) * body.volume());
    let value = &lead + &minima[0] + &minima[i - 1];
    Ok(BoundBreakdown::new(BoundName::AvoidSingleFullRankHigher, Enclosure::exact(value))
        .with("i", Quantity::Integer(BigInt::from(i)))
        .with("lead", Quantity::Exact(lead))
        .with("part_lambda_1", Quantity::Exact(l_part))
        .with("lambda_1", Quantity::Exact(minima[0].clone()))
        .with("lambda_i", Quantity::Exact(minima[i - 1].clone())))
}

/// Lower bound `min{(floor(lambda/l1) + rho^n) (l1/2)^n vol K, det bar}` on the
/// torus volume of `(lambda/2) K` modulo `bar`, with `l1 = lambda_1(K, bar)` and
/// `rho = lambda/l1 - floor(lambda/l1)`.
pub fn torus_volume_lower_bound(
    body: &ConvexBody,
    bar: &Lattice,
    lambda: &Rational,
    settings: &EngineSettings,
) -> Result<Rational> {
    if lambda.is_negative() {
        return Err(Error::InvalidInput("lambda must be non-negative".into()));
    }
    if !bar.is_full_rank() {
        return Err(Error::Unsupported("torus volumes need a full-rank lattice".into()));
    }
    if lambda.is_zero() {
        return Ok(Rational::zero());
    }
    let n = bar.dim() as u32;
    let l1 = successive_minima(body, bar, 1, settings)?.values.remove(0);
    let t = lambda / &l1;
    let q = t.floor();
    let rho = &t - &q;
    let packed = (q + rational::pow(&rho, n)) * rational::pow(&(&l1 / int(2)), n) * body.volume();
    Ok(packed.min(bar.det().expect("full rank")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::engine::{restricted_minima_doubling, ForbiddenCollection};

    fn settings() -> EngineSettings {
        EngineSettings::default()
    }

    fn lat(rows: &[&[i64]]) -> Lattice {
        Lattice::from_int_rows(rows[0].len(), &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    /// Body `[-1,1] x [-alpha,alpha]` and the sublattices `z_2 = 0 mod 2`, `z_1 = 0 mod p`.
    fn two_congruences(p: i64, alpha: Rational) -> (ConvexBody, Vec<Lattice>) {
        let k = ConvexBody::new_box(vec![int(1), alpha]).unwrap();
        (k, vec![lat(&[&[1, 0], &[0, 2]]), lat(&[&[p, 0], &[0, 1]])])
    }

    fn exact_restricted(k: &ConvexBody, parts: &[Lattice], i: usize) -> Rational {
        let z2 = Lattice::integer(2);
        let f = ForbiddenCollection::new(&z2, parts.to_vec()).unwrap();
        restricted_minima_doubling(k, &z2, &f, i, &settings()).unwrap().values[i - 1].clone()
    }

    #[test]
    fn avoid_full_rank_two_congruences() {
        let (k, parts) = two_congruences(5, rat(2, 25));
        let b = thm_full_bound(&k, &Lattice::integer(2), &parts, false, &settings()).unwrap();
        assert_eq!(b.value, Enclosure::exact(int(20)));
        assert_eq!(b.exact("lead"), Some(&int(15)));
        assert_eq!(b.exact("lambda_bar"), Some(&int(5)));
        assert_eq!(b.get("m"), Some(&Quantity::Integer(BigInt::from(6))));
        let exact = exact_restricted(&k, &parts, 1);
        assert_eq!(exact, rat(25, 2));
        assert!(&exact < b.lo());

        let imp = thm_full_bound(&k, &Lattice::integer(2), &parts, true, &settings()).unwrap();
        assert_eq!(imp.value, Enclosure::exact(rat(135, 8)));
        assert!(&exact < imp.lo());
    }

    #[test]
    fn avoid_single_full_rank() {
        let k = ConvexBody::cube(2);
        let z2 = Lattice::integer(2);
        let two = lat(&[&[2, 0], &[0, 2]]);
        let b = thm_full_bound(&k, &z2, std::slice::from_ref(&two), false, &settings()).unwrap();
        assert_eq!(b.value, Enclosure::exact(rat(3, 2)));
        let imp = thm_full_bound(&k, &z2, std::slice::from_ref(&two), true, &settings()).unwrap();
        assert!(imp.hi() <= b.hi());
        let c = cor_one_full_higher(&k, &z2, &two, 2, &settings()).unwrap();
        assert_eq!(c.value, Enclosure::exact(rat(5, 2)));
        let c1 = cor_one_full_higher(&k, &z2, &two, 1, &settings()).unwrap();
        assert_eq!(c1.value, Enclosure::exact(rat(5, 2)));
        assert!(matches!(cor_one_full_higher(&k, &z2, &z2, 1, &settings()), Err(Error::EmptyAdmissibleSet)));
    }

    #[test]
    fn improved_constants() {
        let p = PrecisionPolicy::default();
        assert_eq!(improved_constant(2, &p).unwrap(), Enclosure::exact(rat(3, 8)));
        // 3^(-1/2) * 26/27 = 0.55592...
        let c3 = improved_constant(3, &p).unwrap();
        let oracle = (26.0 / 27.0) / 3f64.sqrt();
        assert!((c3.midpoint_f64() - oracle).abs() < 1e-12);
        assert!(improved_constant(1, &p).is_err());
    }

    #[test]
    fn covering_union_is_rejected() {
        let z2 = Lattice::integer(2);
        let parts = vec![lat(&[&[1, 0], &[0, 2]]), lat(&[&[2, 0], &[0, 1]]), lat(&[&[1, 1], &[0, 2]])];
        assert!(matches!(
            thm_full_bound(&ConvexBody::cube(2), &z2, &parts, false, &settings()),
            Err(Error::EmptyAdmissibleSet)
        ));
    }

    #[test]
    fn higher_full_rank_two_congruences() {
        let (k, parts) = two_congruences(5, rat(2, 25));
        let z2 = Lattice::integer(2);
        let b = cor_full_higher(&k, &z2, &parts, 2, &settings()).unwrap();
        assert_eq!(b.exact("stated_form"), Some(&int(25)));
        assert_eq!(b.value, Enclosure::exact(int(45)));
        assert!(b.dominates(&exact_restricted(&k, &parts, 2)));
        let b1 = cor_full_higher(&k, &z2, &parts, 1, &settings()).unwrap();
        assert_eq!(b1.value, Enclosure::exact(int(20)));
        assert_eq!(b1.exact("stated_form"), Some(&int(20)));
    }

    #[test]
    fn stated_higher_form_fails_on_thin_box() {
        let k = ConvexBody::new_box(vec![int(1), rat(1, 100)]).unwrap();
        let parts = vec![lat(&[&[2, 0], &[0, 2]])];
        let b = cor_full_higher(&k, &Lattice::integer(2), &parts, 2, &settings()).unwrap();
        let exact = exact_restricted(&k, &parts, 2);
        assert_eq!(exact, int(100));
        assert_eq!(b.exact("stated_form"), Some(&int(54)));
        assert!(b.exact("stated_form").unwrap() < &exact);
        // 50 + lambda_1(K, Z^2) + lambda_2(K, 2Z^2) = 50 + 1 + 200
        assert_eq!(b.value, Enclosure::exact(int(251)));
        assert!(b.dominates(&exact));
    }

    #[test]
    fn torus_lower_bound_values() {
        let k = ConvexBody::cube(2);
        let three = lat(&[&[3, 0], &[0, 3]]);
        let s = settings();
        assert_eq!(torus_volume_lower_bound(&k, &three, &int(3), &s).unwrap(), int(9));
        assert_eq!(torus_volume_lower_bound(&k, &three, &rat(9, 2), &s).unwrap(), int(9));
        assert_eq!(torus_volume_lower_bound(&k, &three, &int(0), &s).unwrap(), int(0));
        // below lambda_1 it is the packing volume of (lambda/2) K
        assert_eq!(torus_volume_lower_bound(&k, &three, &int(2), &s).unwrap(), int(4));
        assert!(torus_volume_lower_bound(&k, &three, &int(-1), &s).is_err());
    }
}
