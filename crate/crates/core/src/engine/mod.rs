//! Successive minima and restricted successive minima by exact enumeration.

mod counting;
mod enumerate;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::rational::{self, serde_rational};
use crate::arith::{PrecisionPolicy, Rational};
use crate::body::ConvexBody;
use crate::bounds;
use crate::error::{Error, Result};
use crate::lattice::{union_covers, Lattice, DEFAULT_COSET_CAP};

pub use counting::{
    count_points, covering_radius_diagonal, distinct_cosets_in_body, torus_packing_volume, torus_volume_estimate,
    TorusEstimate,
};
pub(crate) use enumerate::{Candidate, GaugeForms, IndependentSet};

/// Default cap on the number of coordinate-box cells visited by one enumeration.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug)]
pub struct EngineSettings {
    pub budget: u64,
    pub precision: PrecisionPolicy,
    pub coset_cap: u64,
}

impl Default for EngineSettings {
    fn default() -> Self {
        Self { budget: DEFAULT_BUDGET, precision: PrecisionPolicy::default(), coset_cap: DEFAULT_COSET_CAP }
    }
}

impl EngineSettings {
    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_precision(mut self, precision: PrecisionPolicy) -> Self {
        self.precision = precision;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ForbiddenKind {
    /// Every member has rank below the ambient rank (also the empty collection).
    Lower,
    /// Every member has the ambient rank.
    Full,
    Mixed,
}

/// Sublattices `L_1, ..., L_s` of an ambient lattice whose union is excluded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForbiddenCollection {
    parts: Vec<Lattice>,
    kind: ForbiddenKind,
}

impl ForbiddenCollection {
    pub fn new(ambient: &Lattice, parts: Vec<Lattice>) -> Result<Self> {
        for p in &parts {
            if !p.is_sublattice_of(ambient) {
                return Err(Error::NotSublattice);
            }
        }
        let full = parts.iter().filter(|p| p.rank() == ambient.rank()).count();
        let kind = match full {
            0 => ForbiddenKind::Lower,
            f if f == parts.len() => ForbiddenKind::Full,
            _ => ForbiddenKind::Mixed,
        };
        Ok(Self { parts, kind })
    }

    pub fn empty() -> Self {
        Self { parts: Vec::new(), kind: ForbiddenKind::Lower }
    }

    pub fn parts(&self) -> &[Lattice] {
        &self.parts
    }

    pub fn kind(&self) -> ForbiddenKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Members of full rank in `ambient`.
    pub fn full_rank_parts(&self, ambient: &Lattice) -> Vec<Lattice> {
        self.parts.iter().filter(|p| p.rank() == ambient.rank()).cloned().collect()
    }
}

/// How the enumeration radius of a minima computation was justified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    Minkowski,
    AvoidLowerRank,
    AvoidFullRank,
    AvoidLowerRankHigher,
    AvoidFullRankHigher,
    Doubling,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    #[serde(with = "serde_rational")]
    pub radius: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimaResult {
    #[serde(with = "serde_rational::vec")]
    pub values: Vec<Rational>,
    #[serde(with = "serde_rational::matrix")]
    pub witnesses: Vec<Vec<Rational>>,
    pub certificate: Certificate,
}

/// A lattice point together with its gauge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePoint {
    pub vector: Vec<Rational>,
    pub gauge: Rational,
}

/// All nonzero `x` in the lattice with `gauge(x) <= radius`, sorted by gauge.
pub fn enumerate_points(
    body: &ConvexBody,
    lattice: &Lattice,
    radius: &Rational,
    settings: &EngineSettings,
) -> Result<Vec<LatticePoint>> {
    let forms = GaugeForms::new(body, lattice)?;
    let half = forms.enumerate_half(radius, settings.budget)?;
    let mut out = Vec::with_capacity(2 * half.len());
    for c in &half {
        let v = c.vector(forms.denom());
        let neg = v.iter().map(|x| -x).collect();
        out.push(LatticePoint { vector: v, gauge: c.gauge.clone() });
        out.push(LatticePoint { vector: neg, gauge: c.gauge.clone() });
    }
    Ok(out)
}

/// Membership test for the forbidden union, in lattice coordinates.
struct Admissibility {
    coordinate_parts: Vec<Lattice>,
}

impl Admissibility {
    fn new(lattice: &Lattice, forbidden: &ForbiddenCollection) -> Result<Self> {
        let coordinate_parts = forbidden
            .parts()
            .iter()
            .filter(|p| p.rank() > 0)
            .map(|p| enumerate::coordinate_sublattice(lattice, p))
            .collect::<Result<_>>()?;
        Ok(Self { coordinate_parts })
    }

    fn admits(&self, z: &[BigInt]) -> bool {
        !self.coordinate_parts.iter().any(|p| p.coordinates_of_integer(z).is_some())
    }
}

/// Greedy extraction of `k` independent admissible points from sorted candidates.
fn select(
    candidates: &[Candidate],
    k: usize,
    admissible: Option<&Admissibility>,
    denom: &BigInt,
) -> Option<(Vec<Rational>, Vec<Vec<Rational>>)> {
    let mut set = IndependentSet::default();
    let mut values = Vec::with_capacity(k);
    let mut witnesses = Vec::with_capacity(k);
    for c in candidates {
        if set.len() == k {
            break;
        }
        if admissible.is_some_and(|a| !a.admits(&c.z)) {
            continue;
        }
        if set.insert(&c.z) {
            values.push(c.gauge.clone());
            witnesses.push(c.vector(denom));
        }
    }
    (set.len() == k).then_some((values, witnesses))
}

fn check_k(lattice: &Lattice, k: usize) -> Result<()> {
    if k == 0 || k > lattice.rank() {
        return Err(Error::InvalidInput(format!(
            "k = {k} must lie in [1, {}] (the lattice rank)",
            lattice.rank()
        )));
    }
    Ok(())
}

/// Enumerates to `radius` and picks the first `k` independent (admissible) points.
///
/// With a `start` radius the enumeration grows by doubling from `start` and stops
/// at the first radius that already yields `k` points; every point of gauge at
/// most that radius is enumerated, so the result equals the one at `radius`.
fn certified(
    forms: &GaugeForms,
    radius: Rational,
    kind: CertificateKind,
    k: usize,
    admissible: Option<&Admissibility>,
    start: Option<Rational>,
    settings: &EngineSettings,
) -> Result<MinimaResult> {
    let mut r = start.map_or_else(|| radius.clone(), |s| s.min(radius.clone()));
    loop {
        let cands = forms.enumerate_half(&r, settings.budget)?;
        if let Some((values, witnesses)) = select(&cands, k, admissible, forms.denom()) {
            return Ok(MinimaResult { values, witnesses, certificate: Certificate { kind, radius } });
        }
        if r >= radius {
            return Err(Error::CertificateViolated { radius: rational::fmt_rational(&radius), wanted: k });
        }
        r = (r * rational::int(2)).min(radius.clone());
    }
}

/// Smallest gauge among the canonical basis vectors, an upper bound for `lambda_1`.
fn basis_gauge(body: &ConvexBody, lattice: &Lattice) -> Rational {
    lattice.basis().iter().map(|b| body.gauge(b)).min().unwrap_or_else(Rational::one)
}

/// `(2^n det / vol)^(1/n)` rounded up, for a full-rank lattice.
fn minkowski_radius(body: &ConvexBody, lattice: &Lattice, settings: &EngineSettings) -> Result<Rational> {
    Ok(bounds::minkowski_first(body, lattice, None, &settings.precision)?.hi().clone())
}

/// First `k` successive minima of `body` with respect to `lattice`.
///
/// Full-rank lattices are enumerated to the first-minimum volume bound and then
/// to `2^n det / (vol lambda_1^(n-1))`; lower-rank lattices use doubling radii.
pub fn successive_minima(body: &ConvexBody, lattice: &Lattice, k: usize, settings: &EngineSettings) -> Result<MinimaResult> {
    check_k(lattice, k)?;
    if !lattice.is_full_rank() {
        return minima_doubling(body, lattice, k, None, settings);
    }
    let forms = GaugeForms::new(body, lattice)?;
    let r1 = minkowski_radius(body, lattice, settings)?;
    let first = certified(&forms, r1.clone(), CertificateKind::Minkowski, 1, None, None, settings)?;
    if k == 1 {
        return Ok(first);
    }
    let n = lattice.dim() as u32;
    let det = lattice.det().expect("full rank");
    let l1 = &first.values[0];
    let r2 = rational::pow2(n) * det / (body.volume() * rational::pow(l1, n - 1));
    certified(&forms, r1.clone().max(r2), CertificateKind::Minkowski, k, None, Some(r1), settings)
}

fn minima_doubling(
    body: &ConvexBody,
    lattice: &Lattice,
    k: usize,
    admissible: Option<&Admissibility>,
    settings: &EngineSettings,
) -> Result<MinimaResult> {
    let forms = GaugeForms::new(body, lattice)?;
    let mut radius = if lattice.is_full_rank() {
        minkowski_radius(body, lattice, settings)?
    } else {
        basis_gauge(body, lattice)
    };
    loop {
        let cands = forms.enumerate_half(&radius, settings.budget)?;
        if let Some((values, witnesses)) = select(&cands, k, admissible, forms.denom()) {
            return Ok(MinimaResult {
                values,
                witnesses,
                certificate: Certificate { kind: CertificateKind::Doubling, radius },
            });
        }
        radius *= rational::int(2);
    }
}

fn check_admissible_nonempty(lattice: &Lattice, forbidden: &ForbiddenCollection, settings: &EngineSettings) -> Result<()> {
    let full = forbidden.full_rank_parts(lattice);
    if !full.is_empty() && union_covers(lattice, &full, settings.coset_cap)? {
        return Err(Error::EmptyAdmissibleSet);
    }
    Ok(())
}

/// Restricted minima with doubling radii, independent of any bound.
pub fn restricted_minima_doubling(
    body: &ConvexBody,
    lattice: &Lattice,
    forbidden: &ForbiddenCollection,
    k: usize,
    settings: &EngineSettings,
) -> Result<MinimaResult> {
    check_k(lattice, k)?;
    check_admissible_nonempty(lattice, forbidden, settings)?;
    let adm = Admissibility::new(lattice, forbidden)?;
    minima_doubling(body, lattice, k, Some(&adm), settings)
}

/// First `k` successive minima of `body` with respect to `lattice` minus the forbidden union.
///
/// The enumeration radius is the upper end of the matching avoidance bound for
/// pure collections in a full-rank lattice of dimension at least two, and
/// doubling otherwise.
pub fn restricted_minima(
    body: &ConvexBody,
    lattice: &Lattice,
    forbidden: &ForbiddenCollection,
    k: usize,
    settings: &EngineSettings,
) -> Result<MinimaResult> {
    check_k(lattice, k)?;
    check_admissible_nonempty(lattice, forbidden, settings)?;
    let adm = Admissibility::new(lattice, forbidden)?;
    if !lattice.is_full_rank() || lattice.dim() < 2 || forbidden.kind() == ForbiddenKind::Mixed {
        return minima_doubling(body, lattice, k, Some(&adm), settings);
    }
    let (radius, kind) = certificate_radius(body, lattice, forbidden, k, settings)?;
    let forms = GaugeForms::new(body, lattice)?;
    let start = minkowski_radius(body, lattice, settings)?;
    certified(&forms, radius, kind, k, Some(&adm), Some(start), settings)
}

fn certificate_radius(
    body: &ConvexBody,
    lattice: &Lattice,
    forbidden: &ForbiddenCollection,
    k: usize,
    settings: &EngineSettings,
) -> Result<(Rational, CertificateKind)> {
    let policy = &settings.precision;
    match forbidden.kind() {
        ForbiddenKind::Lower => {
            let inputs = bounds::lower_rank_inputs(body, lattice, forbidden.parts(), settings)?;
            if k == 1 {
                let b = bounds::thm_lower_from(&inputs, policy);
                Ok((b.hi().clone(), CertificateKind::AvoidLowerRank))
            } else {
                let b = bounds::cor_higher_lower_from(&inputs, k - 1, policy)?;
                Ok((b.hi().clone(), CertificateKind::AvoidLowerRankHigher))
            }
        }
        ForbiddenKind::Full => {
            let inputs = bounds::full_rank_inputs(body, lattice, forbidden.parts(), settings)?;
            let first = bounds::thm_full_from(&inputs, false, policy)?;
            if k == 1 {
                Ok((first.hi().clone(), CertificateKind::AvoidFullRank))
            } else {
                let lk = successive_minima(body, &inputs.bar, k, settings)?.values[k - 1].clone();
                Ok((first.hi() + lk, CertificateKind::AvoidFullRankHigher))
            }
        }
        ForbiddenKind::Mixed => unreachable!("mixed collections use doubling"),
    }
}

/// `lambda_i(K, L)` for a positive dilation factor: `lambda_i(mu K) = lambda_i(K) / mu`.
pub fn dilate_values(values: &[Rational], mu: &Rational) -> Vec<Rational> {
    assert!(mu.is_positive(), "dilation factor must be positive");
    values.iter().map(|v| v / mu).collect()
}

/// Whether `witnesses` are linearly independent, admissible and have the stated gauges.
pub fn witnesses_consistent(
    body: &ConvexBody,
    lattice: &Lattice,
    forbidden: &ForbiddenCollection,
    result: &MinimaResult,
) -> bool {
    if result.values.len() != result.witnesses.len() {
        return false;
    }
    let ordered = result.values.windows(2).all(|w| w[0] <= w[1]);
    let mut set = IndependentSet::default();
    result.values.iter().zip(&result.witnesses).all(|(v, w)| {
        let Some(z) = lattice.coordinates(w) else { return false };
        body.gauge(w) == *v
            && !z.iter().all(Zero::is_zero)
            && !forbidden.parts().iter().any(|p| p.contains(w))
            && set.insert(&z)
    }) && ordered
}

#[cfg(test)]
mod tests;
