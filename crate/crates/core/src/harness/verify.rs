//! Randomized verification: exact minima against every applicable bound.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::instance::{generate, kind_str, GeneratorParams, Instance};
use crate::arith::rational::from_big;
use crate::arith::{fmt_rational, rat, Rational};
use crate::bounds::{self, BoundBreakdown};
use crate::engine::{self, EngineSettings, ForbiddenCollection, ForbiddenKind, MinimaResult};
use crate::error::{Error, Result};
use crate::lattice::{m_value, Lattice};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Dilation factors checked on every instance.
const DILATIONS: [(i64, i64); 5] = [(1, 2), (2, 3), (3, 2), (2, 1), (5, 3)];

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    /// Instances per (dimension, kind) pair.
    pub trials: usize,
    pub dims: Vec<usize>,
    pub kinds: Vec<ForbiddenKind>,
    pub seed: u64,
    /// Largest number of forbidden sublattices drawn.
    pub max_parts: usize,
}

impl VerifyConfig {
    pub fn new(trials: usize, dims: Vec<usize>, kinds: Vec<ForbiddenKind>, seed: u64) -> Self {
        Self { trials, dims, kinds, seed, max_parts: 3 }
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidInput("trials must be positive".into()));
        }
        if self.dims.is_empty() || self.kinds.is_empty() {
            return Err(Error::InvalidInput("at least one dimension and one kind are required".into()));
        }
        if self.dims.iter().any(|n| !(2..=6).contains(n)) {
            return Err(Error::InvalidInput("dimensions must lie in [2, 6]".into()));
        }
        if self.max_parts < 2 {
            return Err(Error::InvalidInput("max_parts must be at least 2".into()));
        }
        Ok(())
    }

    /// Generator parameters of every instance, in a fixed order.
    pub fn instance_params(&self) -> Vec<GeneratorParams> {
        let mut out = Vec::new();
        for &kind in &self.kinds {
            for &n in &self.dims {
                for t in 0..self.trials {
                    let seed = self
                        .seed
                        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
                        .wrapping_add(((n as u64) << 48) ^ ((kind as u64) << 40) ^ t as u64);
                    let s = match kind {
                        ForbiddenKind::Mixed => 2 + t % (self.max_parts - 1),
                        _ => 1 + t % self.max_parts,
                    };
                    out.push(GeneratorParams::new(seed, n, s, kind));
                }
            }
        }
        out
    }
}

/// An exact value compared against the upper end of a bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub bound_name: String,
    pub target: String,
    #[serde(serialize_with = "ser_rational")]
    pub exact: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub bound_hi: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub ratio_hi: Rational,
    pub strict: bool,
    pub holds: bool,
}

impl Comparison {
    fn new(name: impl Into<String>, target: impl Into<String>, exact: &Rational, hi: &Rational, strict: bool) -> Self {
        let holds = if strict { exact < hi } else { exact <= hi };
        let ratio_hi = if exact.is_zero() { Rational::zero() } else { hi / exact };
        Self {
            bound_name: name.into(),
            target: target.into(),
            exact: exact.clone(),
            bound_hi: hi.clone(),
            ratio_hi,
            strict,
            holds,
        }
    }

    fn of(name: impl Into<String>, target: impl Into<String>, exact: &Rational, b: &BoundBreakdown) -> Self {
        Self::new(name, target, exact, b.hi(), false)
    }
}

/// A structural check that is not a bound comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub check: String,
    pub holds: bool,
    pub detail: String,
}

impl Verdict {
    fn new(check: impl Into<String>, holds: bool, detail: impl Into<String>) -> Self {
        Self { check: check.into(), holds, detail: detail.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceReport {
    pub id: String,
    pub n: usize,
    pub s: usize,
    pub kind: String,
    #[serde(serialize_with = "ser_rationals")]
    pub restricted_minima: Vec<Rational>,
    pub comparisons: Vec<Comparison>,
    pub verdicts: Vec<Verdict>,
    /// Values of the printed higher full-rank form that fall below the exact minimum.
    pub stated_form_failures: Vec<String>,
    pub error: Option<String>,
    pub budget_exceeded: bool,
}

impl InstanceReport {
    pub fn violations(&self) -> usize {
        self.comparisons.iter().filter(|c| !c.holds).count() + self.verdicts.iter().filter(|v| !v.holds).count()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BoundSummary {
    pub checks: usize,
    pub violations: usize,
    pub max_ratio: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub instances: usize,
    pub violations: usize,
    pub errors: usize,
    pub budget_exceeded: usize,
    pub stated_form_failures: usize,
    pub by_check: BTreeMap<String, BoundSummary>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub seed: u64,
    pub instances: Vec<InstanceReport>,
    pub summary: Summary,
}

impl VerificationReport {
    fn new(seed: u64, mut instances: Vec<InstanceReport>) -> Self {
        instances.sort_by(|a, b| a.id.cmp(&b.id));
        let mut summary = Summary { instances: instances.len(), ..Summary::default() };
        for r in &instances {
            summary.violations += r.violations();
            summary.errors += usize::from(r.error.is_some());
            summary.budget_exceeded += usize::from(r.budget_exceeded);
            summary.stated_form_failures += r.stated_form_failures.len();
            for c in &r.comparisons {
                let e = summary.by_check.entry(c.bound_name.clone()).or_default();
                e.checks += 1;
                e.violations += usize::from(!c.holds);
                let better = match &e.max_ratio {
                    None => true,
                    Some(prev) => crate::arith::parse_rational(prev).map_or(true, |p| c.ratio_hi > p),
                };
                if better {
                    e.max_ratio = Some(fmt_rational(&c.ratio_hi));
                }
            }
            for v in &r.verdicts {
                let e = summary.by_check.entry(v.check.clone()).or_default();
                e.checks += 1;
                e.violations += usize::from(!v.holds);
            }
        }
        Self { schema_version: REPORT_SCHEMA_VERSION, seed, instances, summary }
    }

    pub fn passed(&self) -> bool {
        self.summary.violations == 0 && self.summary.errors == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per bound comparison.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["instance_id", "n", "s", "kind", "exact_lambda", "bound_name", "bound_hi", "ratio_hi"])
            .map_err(csv_err)?;
        for r in &self.instances {
            for c in &r.comparisons {
                w.write_record([
                    r.id.as_str(),
                    &r.n.to_string(),
                    &r.s.to_string(),
                    &r.kind,
                    &fmt_rational(&c.exact),
                    &format!("{}[{}]", c.bound_name, c.target),
                    &fmt_rational(&c.bound_hi),
                    &fmt_rational(&c.ratio_hi),
                ])
                .map_err(csv_err)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidInput(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidInput(e.to_string())
}

fn ser_rational<S: serde::Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(x))
}

fn ser_rationals<S: serde::Serializer>(xs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(fmt_rational))
}

/// Generates the configured instances and checks each one; runs in parallel,
/// the report is sorted by instance id.
pub fn verify(config: &VerifyConfig, settings: &EngineSettings) -> Result<VerificationReport> {
    config.validate()?;
    let params = config.instance_params();
    let reports = params
        .par_iter()
        .map(|p| {
            let inst = generate(p)?;
            Ok(check_instance(&inst, settings))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::new(config.seed, reports))
}

/// Checks one instance; engine failures are recorded in the report.
pub fn check_instance(inst: &Instance, settings: &EngineSettings) -> InstanceReport {
    let mut report = InstanceReport {
        id: inst.id.clone(),
        n: inst.n(),
        s: inst.forbidden.len(),
        kind: kind_str(inst.forbidden.kind()).to_string(),
        restricted_minima: Vec::new(),
        comparisons: Vec::new(),
        verdicts: Vec::new(),
        stated_form_failures: Vec::new(),
        error: None,
        budget_exceeded: false,
    };
    if let Err(e) = run_checks(inst, settings, &mut report) {
        report.budget_exceeded = matches!(e, Error::BudgetExceeded { .. });
        report.error = Some(e.to_string());
    }
    report
}

fn run_checks(inst: &Instance, settings: &EngineSettings, report: &mut InstanceReport) -> Result<()> {
    let (k, l, f) = (&inst.body, &inst.lattice, &inst.forbidden);
    let n = inst.n();
    let exact = engine::restricted_minima(k, l, f, n, settings)?;
    let doubling = engine::restricted_minima_doubling(k, l, f, n, settings)?;
    let lam = exact.values.clone();
    report.restricted_minima = lam.clone();
    report.verdicts.push(Verdict::new(
        "certified_equals_doubling",
        doubling.values == lam,
        format!("{:?} vs {:?}", fmts(&lam), fmts(&doubling.values)),
    ));
    report.verdicts.push(Verdict::new(
        "witnesses_consistent",
        engine::witnesses_consistent(k, l, f, &exact),
        String::new(),
    ));

    let free = engine::successive_minima(k, l, n, settings)?;
    report.verdicts.push(Verdict::new(
        "restricted_at_least_unrestricted",
        lam.iter().zip(&free.values).all(|(a, b)| a >= b),
        format!("{:?} vs {:?}", fmts(&lam), fmts(&free.values)),
    ));
    let mink = bounds::minkowski_first(k, l, None, &settings.precision)?;
    report.comparisons.push(Comparison::of("minkowski_first", "lambda_1", &free.values[0], &mink));

    match f.kind() {
        ForbiddenKind::Lower => lower_checks(inst, &lam, settings, report)?,
        ForbiddenKind::Full => full_checks(inst, &lam, settings, report)?,
        ForbiddenKind::Mixed => {}
    }

    for (p, q) in DILATIONS {
        let mu = rat(p, q);
        let dilated = engine::restricted_minima(&k.dilate(&mu)?, l, f, n, settings)?;
        report.verdicts.push(Verdict::new(
            "dilation",
            dilated.values == engine::dilate_values(&lam, &mu),
            format!("mu = {}", fmt_rational(&mu)),
        ));
    }

    if !f.is_empty() {
        let fewer = ForbiddenCollection::new(l, f.parts()[1..].to_vec())?;
        let relaxed = engine::restricted_minima_doubling(k, l, &fewer, n, settings)?;
        report.verdicts.push(Verdict::new(
            "fewer_parts_not_larger",
            relaxed.values.iter().zip(&lam).all(|(a, b)| a <= b),
            format!("{:?}", fmts(&relaxed.values)),
        ));
    }

    counting_checks(inst, &free, settings, report)
}

fn lower_checks(inst: &Instance, lam: &[Rational], settings: &EngineSettings, report: &mut InstanceReport) -> Result<()> {
    let (k, l, parts) = (&inst.body, &inst.lattice, inst.forbidden.parts());
    let n = inst.n();
    let inputs = bounds::lower_rank_inputs(k, l, parts, settings)?;
    let thm = bounds::thm_lower_from(&inputs, &settings.precision);
    report.comparisons.push(Comparison::of("avoid_lower_rank", "lambda_1", &lam[0], &thm));
    for (j, value) in lam.iter().enumerate().take(n).skip(1) {
        let b = bounds::cor_higher_lower_from(&inputs, j, &settings.precision)?;
        report.comparisons.push(Comparison::of("avoid_lower_rank_higher", format!("lambda_{}", j + 1), value, &b));
    }

    // minor-vector bound, stated for the cube [-1, 1]^n
    let cube = crate::body::ConvexBody::cube(n);
    let f = &inst.forbidden;
    let cube_min = engine::restricted_minima(&cube, l, f, 1, settings)?;
    let fuk = bounds::fukshansky_bound(&cube, l, parts, &settings.precision)?;
    report.comparisons.push(Comparison::of("fukshansky", "lambda_1 (cube)", &cube_min.values[0], &fuk));

    // plank bound on the same instance with a diagonal lattice
    if let Some(p) = &inst.params {
        let mut diag = p.clone();
        diag.unimodular_steps = 0;
        let d = generate(&diag)?;
        if d.forbidden.kind() == ForbiddenKind::Lower {
            let mu = engine::covering_radius_diagonal(&d.body, &d.lattice)?;
            let exact = engine::restricted_minima(&d.body, &d.lattice, &d.forbidden, n, settings)?;
            for j in 1..=n {
                let hi = bounds::plank_bound(&mu, d.forbidden.len(), j)?;
                report.comparisons.push(Comparison::new(
                    "plank",
                    format!("lambda_{j} (diagonal)"),
                    &exact.values[j - 1],
                    &hi,
                    false,
                ));
            }
        }
    }
    Ok(())
}

fn full_checks(inst: &Instance, lam: &[Rational], settings: &EngineSettings, report: &mut InstanceReport) -> Result<()> {
    let (k, l, parts) = (&inst.body, &inst.lattice, inst.forbidden.parts());
    let n = inst.n();
    let inputs = bounds::full_rank_inputs(k, l, parts, settings)?;
    let plain = bounds::thm_full_from(&inputs, false, &settings.precision)?;
    let improved = bounds::thm_full_from(&inputs, true, &settings.precision)?;
    report.comparisons.push(Comparison::new("avoid_full_rank", "lambda_1", &lam[0], plain.lo(), true));
    report.comparisons.push(Comparison::of("avoid_full_rank_improved", "lambda_1", &lam[0], &improved));
    report.verdicts.push(Verdict::new(
        "improved_not_weaker",
        improved.hi() <= plain.hi(),
        format!("{} vs {}", fmt_rational(improved.hi()), fmt_rational(plain.hi())),
    ));
    for i in 1..=n {
        let b = bounds::cor_full_higher(k, l, parts, i, settings)?;
        report.comparisons.push(Comparison::of("avoid_full_rank_higher", format!("lambda_{i}"), &lam[i - 1], &b));
        if let Some(stated) = b.exact("stated_form") {
            if i >= 2 && stated < &lam[i - 1] {
                report.stated_form_failures.push(format!("lambda_{i}: {} < {}", fmt_rational(stated), fmt_rational(&lam[i - 1])));
            }
        }
    }
    for (idx, part) in parts.iter().enumerate() {
        let single = ForbiddenCollection::new(l, vec![part.clone()])?;
        let exact = engine::restricted_minima_doubling(k, l, &single, n, settings)?;
        for i in 1..=n {
            let b = bounds::cor_one_full_higher(k, l, part, i, settings)?;
            report.comparisons.push(Comparison::of(
                "avoid_single_full_rank_higher",
                format!("part {}, lambda_{i}", idx + 1),
                &exact.values[i - 1],
                &b,
            ));
        }
    }
    Ok(())
}

fn counting_checks(inst: &Instance, free: &MinimaResult, settings: &EngineSettings, report: &mut InstanceReport) -> Result<()> {
    let (k, l) = (&inst.body, &inst.lattice);
    let n = inst.n();
    for (label, lambda) in [("lambda_1", &free.values[0]), ("lambda_n", &free.values[n - 1])] {
        let count = from_big(engine::count_points(k, l, lambda, settings)?);
        let low = from_big(bounds::vdc_lower(k, l, lambda)?);
        report.verdicts.push(Verdict::new(
            "van_der_corput",
            low <= count,
            format!("{label}: {} <= {}", fmt_rational(&low), fmt_rational(&count)),
        ));
        let bhw = bounds::bhw_upper(k, l, lambda, settings)?;
        report.comparisons.push(Comparison::new("betke_henk_wills", format!("count at {label}"), &count, &bhw, false));
        if label == "lambda_n" {
            let h = bounds::henze_upper(k, l, lambda, settings)?;
            report.comparisons.push(Comparison::new("henze", "count at lambda_n", &count, &h, false));
        }
    }
    Ok(())
}

/// A bound evaluated on an instance, with the minimum it bounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TargetedBound {
    pub target: String,
    #[serde(flatten)]
    pub bound: BoundBreakdown,
}

/// Every bound that applies to the instance's collection kind.
pub fn applicable_bounds(inst: &Instance, settings: &EngineSettings) -> Result<Vec<TargetedBound>> {
    let (k, l, f) = (&inst.body, &inst.lattice, &inst.forbidden);
    let n = inst.n();
    let policy = &settings.precision;
    let mut out = Vec::new();
    let mut push = |target: String, bound: BoundBreakdown| out.push(TargetedBound { target, bound });
    if l.is_full_rank() {
        push("unrestricted lambda_1".into(), bounds::minkowski_first(k, l, None, policy)?);
    }
    if f.is_empty() {
        return Ok(out);
    }
    match f.kind() {
        ForbiddenKind::Lower => {
            let inputs = bounds::lower_rank_inputs(k, l, f.parts(), settings)?;
            push("lambda_1".into(), bounds::thm_lower_from(&inputs, policy));
            for j in 1..n {
                push(format!("lambda_{}", j + 1), bounds::cor_higher_lower_from(&inputs, j, policy)?);
            }
            if k.is_unit_cube() && f.parts().iter().all(|p| p.rank() > 0) {
                push("lambda_1".into(), bounds::fukshansky_bound(k, l, f.parts(), policy)?);
            }
        }
        ForbiddenKind::Full => {
            let inputs = bounds::full_rank_inputs(k, l, f.parts(), settings)?;
            push("lambda_1".into(), bounds::thm_full_from(&inputs, false, policy)?);
            if n >= 2 {
                push("lambda_1".into(), bounds::thm_full_from(&inputs, true, policy)?);
            }
            for i in 2..=n {
                push(format!("lambda_{i}"), bounds::cor_full_higher(k, l, f.parts(), i, settings)?);
            }
            if f.len() == 1 {
                for i in 1..=n {
                    push(format!("lambda_{i}"), bounds::cor_one_full_higher(k, l, &f.parts()[0], i, settings)?);
                }
            }
        }
        ForbiddenKind::Mixed => {}
    }
    Ok(out)
}

fn fmts(xs: &[Rational]) -> Vec<String> {
    xs.iter().map(fmt_rational).collect()
}

/// One instance of the coset-counting consequence of a large torus volume.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorusCase {
    pub id: String,
    #[serde(serialize_with = "ser_rational")]
    pub lambda: Rational,
    pub m: String,
    #[serde(serialize_with = "ser_rational")]
    pub packing_volume: Rational,
    pub cosets: usize,
    pub holds: bool,
}

/// Checks on `wanted` full-rank instances that a packing volume of
/// `(lambda/2) K` modulo the intersection of at least `m det L`, with
/// `m det L < det bar`, forces `lambda K ∩ L` to meet at least `m + 1` cosets.
/// Instances whose premise fails for every tried `lambda` are skipped.
pub fn torus_implication(wanted: usize, seed: u64, settings: &EngineSettings) -> Result<Vec<TorusCase>> {
    let mut out = Vec::new();
    let fractions = [rat(1, 1), rat(3, 4), rat(1, 2)];
    let mut t: u64 = 0;
    while out.len() < wanted {
        if t > 100 * wanted as u64 + 1000 {
            return Err(Error::InvalidInput("too few instances satisfy the premise".into()));
        }
        let n = 2 + (t % 2) as usize;
        let s = 1 + (t % 3) as usize;
        let inst = generate(&GeneratorParams::new(seed.wrapping_add(t), n, s, ForbiddenKind::Full))?;
        t += 1;
        let (k, l) = (&inst.body, &inst.lattice);
        let mv = m_value(l, inst.forbidden.parts())?;
        let bar: &Lattice = &mv.intersection;
        let det = l.det().expect("full rank");
        let det_bar = bar.det().expect("full rank");
        let lbar = engine::successive_minima(k, bar, 1, settings)?.values.remove(0);
        for frac in &fractions {
            let lambda = &lbar * frac;
            let half = &lambda / rat(2, 1);
            let packing = engine::torus_packing_volume(k, bar, &half, settings)?;
            let m = (&packing / &det).floor().to_integer().min(&mv.index - BigInt::one());
            if m < BigInt::one() {
                continue;
            }
            let md = from_big(m.clone()) * &det;
            if !(packing >= md && md < det_bar) {
                continue;
            }
            let cosets = engine::distinct_cosets_in_body(k, l, bar, &lambda, settings)?;
            let holds = BigInt::from(cosets) >= &m + BigInt::one();
            out.push(TorusCase { id: inst.id.clone(), lambda, m: m.to_string(), packing_volume: packing, cosets, holds });
            break;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let cfg = VerifyConfig::new(4, vec![2], vec![ForbiddenKind::Lower, ForbiddenKind::Full, ForbiddenKind::Mixed], 11);
        let r = verify(&cfg, &EngineSettings::default()).unwrap();
        assert_eq!(r.instances.len(), 12);
        assert!(r.passed(), "{:#?}", r.summary);
        let ids: Vec<_> = r.instances.iter().map(|i| i.id.clone()).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted);
        assert_eq!(r, verify(&cfg, &EngineSettings::default()).unwrap());
    }

    #[test]
    fn csv_columns() {
        let cfg = VerifyConfig::new(1, vec![2], vec![ForbiddenKind::Full], 3);
        let csv = verify(&cfg, &EngineSettings::default()).unwrap().to_csv().unwrap();
        let header = csv.lines().next().unwrap();
        assert_eq!(header, "instance_id,n,s,kind,exact_lambda,bound_name,bound_hi,ratio_hi");
        assert!(csv.lines().count() > 1);
    }

    #[test]
    fn zero_trials_rejected() {
        let cfg = VerifyConfig::new(0, vec![2], vec![ForbiddenKind::Full], 3);
        assert!(matches!(verify(&cfg, &EngineSettings::default()), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn torus_cases_hold() {
        let cases = torus_implication(5, 1, &EngineSettings::default()).unwrap();
        assert_eq!(cases.len(), 5);
        assert!(cases.iter().all(|c| c.holds), "{cases:#?}");
    }
}
