//! Golden fixtures with hand-derived expected values.

use num_bigint::BigInt;
use serde::Serialize;

use crate::arith::{fmt_rational, int, rat, Rational};
use crate::body::ConvexBody;
use crate::bounds::{self, BoundBreakdown};
use crate::engine::{self, EngineSettings, ForbiddenCollection};
use crate::error::Result;
use crate::lattice::{m_value, union_covers, Lattice};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub label: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

impl Check {
    fn new(label: impl Into<String>, expected: impl Into<String>, actual: impl Into<String>, pass: bool) -> Self {
        Self { label: label.into(), expected: expected.into(), actual: actual.into(), pass }
    }

    fn rational(label: impl Into<String>, expected: &Rational, actual: &Rational) -> Self {
        Self::new(label, fmt_rational(expected), fmt_rational(actual), expected == actual)
    }

    fn flag(label: impl Into<String>, expected: bool, actual: bool) -> Self {
        Self::new(label, expected.to_string(), actual.to_string(), expected == actual)
    }

    /// `value <= bound.hi`.
    fn dominated(label: impl Into<String>, value: &Rational, bound: &BoundBreakdown) -> Self {
        Self::new(
            label,
            format!("<= {}", fmt_rational(bound.hi())),
            fmt_rational(value),
            bound.dominates(value),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fixture {
    pub id: String,
    pub title: String,
    pub checks: Vec<Check>,
}

impl Fixture {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExamplesReport {
    pub schema_version: u32,
    pub fixtures: Vec<Fixture>,
}

impl ExamplesReport {
    pub fn passed(&self) -> bool {
        self.fixtures.iter().all(Fixture::passed)
    }

    pub fn failures(&self) -> Vec<(&str, &Check)> {
        self.fixtures
            .iter()
            .flat_map(|f| f.checks.iter().filter(|c| !c.pass).map(move |c| (f.id.as_str(), c)))
            .collect()
    }

    pub fn fixture(&self, id: &str) -> Option<&Fixture> {
        self.fixtures.iter().find(|f| f.id == id)
    }
}

fn lat(rows: &[&[i64]]) -> Lattice {
    Lattice::from_int_rows(rows[0].len(), &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
        .expect("fixture lattice")
}

/// `[-1,1] x [-alpha,alpha]` with `L_1 = {z_2 even}` and `L_2 = {z_1 = 0 mod p}`.
pub fn two_congruence_instance(p: i64, alpha: Rational) -> (ConvexBody, Lattice, Vec<Lattice>) {
    let body = ConvexBody::new_box(vec![int(1), alpha]).expect("positive widths");
    (body, Lattice::integer(2), vec![lat(&[&[1, 0], &[0, 2]]), lat(&[&[p, 0], &[0, 1]])])
}

/// The four sublattices `z_2 even`, `z_1 even`, `z_2 = 0 mod 3`, `z_1 = z_2 mod 2` of `Z^2`.
pub fn four_sublattices() -> Vec<Lattice> {
    vec![
        lat(&[&[1, 0], &[0, 2]]),
        lat(&[&[2, 0], &[0, 1]]),
        lat(&[&[1, 0], &[0, 3]]),
        lat(&[&[1, 1], &[0, 2]]),
    ]
}

fn two_congruences(settings: &EngineSettings) -> Result<Vec<Check>> {
    let (k, z2, parts) = two_congruence_instance(5, rat(2, 25));
    let f = ForbiddenCollection::new(&z2, parts.clone())?;
    let r = engine::restricted_minima(&k, &z2, &f, 1, settings)?;
    let thm = bounds::thm_full_bound(&k, &z2, &parts, false, settings)?;
    let imp = bounds::thm_full_bound(&k, &z2, &parts, true, settings)?;
    let bar = Lattice::intersect(&parts)?;
    let lbar = engine::successive_minima(&k, &bar, 1, settings)?;
    let witness_ok = r.witnesses[0] == vec![int(1), int(1)] || r.witnesses[0] == vec![int(1), int(-1)];
    Ok(vec![
        Check::rational("restricted lambda_1", &rat(25, 2), &r.values[0]),
        Check::new("witness", "(1, 1) up to tie policy", format!("{:?}", fmt_vec(&r.witnesses[0])), witness_ok),
        Check::rational("full-rank avoidance bound", &int(20), thm.hi()),
        Check::flag("bound is exact", true, thm.value.is_exact()),
        Check::rational("improved bound", &rat(135, 8), imp.hi()),
        Check::rational("lambda_1(K, bar)", &int(5), &lbar.values[0]),
        Check::rational("det bar", &int(10), &bar.det().expect("full rank")),
    ])
}

/// Tightness ratio `bound / exact` of the full-rank avoidance bound for `alpha = 2/p^2`.
pub fn sharpness_ratio(p: i64, settings: &EngineSettings) -> Result<(Rational, Rational, Rational)> {
    let (k, z2, parts) = two_congruence_instance(p, rat(2, p * p));
    let f = ForbiddenCollection::new(&z2, parts.clone())?;
    let exact = engine::restricted_minima(&k, &z2, &f, 1, settings)?.values.remove(0);
    let bound = bounds::thm_full_bound(&k, &z2, &parts, false, settings)?.hi().clone();
    let ratio = &bound / &exact;
    Ok((exact, bound, ratio))
}

pub const SHARPNESS_PRIMES: [i64; 4] = [5, 11, 23, 47];

fn sharpness(settings: &EngineSettings) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut previous: Option<Rational> = None;
    for p in SHARPNESS_PRIMES {
        let (exact, _, ratio) = sharpness_ratio(p, settings)?;
        checks.push(Check::rational(format!("p={p} exact"), &rat(p * p, 2), &exact));
        checks.push(Check::rational(format!("p={p} ratio"), &(int(1) + rat(3, p)), &ratio));
        if let Some(prev) = previous {
            checks.push(Check::flag(format!("p={p} ratio decreases"), true, ratio < prev));
        }
        previous = Some(ratio);
    }
    Ok(checks)
}

fn coverage(settings: &EngineSettings) -> Result<Vec<Check>> {
    let l = four_sublattices();
    let z2 = Lattice::integer(2);
    let first_three = &l[..3];
    let bar = Lattice::intersect(first_three)?;
    let mv = m_value(&z2, first_three)?;
    let cover = vec![l[0].clone(), l[1].clone(), l[3].clone()];
    Ok(vec![
        Check::rational("det of intersection", &int(12), &bar.det().expect("full rank")),
        Check::new("m", "14", mv.m.to_string(), mv.m == BigInt::from(14)),
        Check::flag("first, second, fourth cover", true, union_covers(&z2, &cover, settings.coset_cap)?),
        Check::flag("first three cover", false, union_covers(&z2, first_three, settings.coset_cap)?),
    ])
}

fn single_full_rank(settings: &EngineSettings) -> Result<Vec<Check>> {
    let k = ConvexBody::cube(2);
    let z2 = Lattice::integer(2);
    let two = lat(&[&[2, 0], &[0, 2]]);
    let f = ForbiddenCollection::new(&z2, vec![two.clone()])?;
    let exact = engine::restricted_minima(&k, &z2, &f, 2, settings)?;
    let first = bounds::thm_full_bound(&k, &z2, std::slice::from_ref(&two), false, settings)?;
    let second = bounds::cor_one_full_higher(&k, &z2, &two, 2, settings)?;
    Ok(vec![
        Check::rational("first-minimum bound", &rat(3, 2), first.hi()),
        Check::rational("exact restricted lambda_1", &int(1), &exact.values[0]),
        Check::rational("single-sublattice bound, i=2", &rat(5, 2), second.hi()),
        Check::rational("exact restricted lambda_2", &int(1), &exact.values[1]),
    ])
}

fn siegel(settings: &EngineSettings) -> Result<Vec<Check>> {
    let ones = vec![vec![BigInt::from(1); 3]];
    let b = bounds::siegel_bound(&ones, settings)?;
    let two_one = vec![vec![BigInt::from(2), BigInt::from(1)]];
    let c = bounds::siegel_bound(&two_one, settings)?;
    let tiny = rat(1, 1_000_000_000);
    let min_b = b.exact("min_sup_norm").cloned().unwrap_or_default();
    let min_c = c.exact("min_sup_norm").cloned().unwrap_or_default();
    Ok(vec![
        Check::rational("kernel det^2 of (1 1 1)", &int(3), b.exact("kernel_det_squared").unwrap_or(&int(0))),
        Check::rational("min sup-norm of (1 1 1) kernel", &int(1), &min_b),
        Check::dominated("(1 1 1) kernel vs 3^(1/4)", &min_b, &b),
        Check::flag("3^(1/4) width <= 1e-9", true, b.value.width() <= tiny),
        Check::rational("min sup-norm of (2 1) kernel", &int(2), &min_c),
        Check::dominated("(2 1) kernel vs sqrt 5", &min_c, &c),
        Check::flag("sqrt 5 width <= 1e-9", true, c.value.width() <= tiny),
    ])
}

fn counting(settings: &EngineSettings) -> Result<Vec<Check>> {
    let k = ConvexBody::cube(2);
    let z2 = Lattice::integer(2);
    let one = int(1);
    let count = engine::count_points(&k, &z2, &one, settings)?;
    let vdc = bounds::vdc_lower(&k, &z2, &one)?;
    Ok(vec![
        Check::new("count", "9", count.to_string(), count == BigInt::from(9)),
        Check::rational("upper bound from lambda_1", &int(9), &bounds::bhw_upper(&k, &z2, &one, settings)?),
        Check::new("volume lower bound", "3", vdc.to_string(), vdc == BigInt::from(3)),
        Check::rational("Laguerre upper bound", &int(14), &bounds::henze_upper(&k, &z2, &one, settings)?),
    ])
}

fn higher_full_rank(settings: &EngineSettings) -> Result<Vec<Check>> {
    let (k, z2, parts) = two_congruence_instance(5, rat(2, 25));
    let f = ForbiddenCollection::new(&z2, parts.clone())?;
    let exact = engine::restricted_minima_doubling(&k, &z2, &f, 2, settings)?;
    let b = bounds::cor_full_higher(&k, &z2, &parts, 2, settings)?;
    let thin = ConvexBody::new_box(vec![int(1), rat(1, 100)])?;
    let two = vec![lat(&[&[2, 0], &[0, 2]])];
    let g = ForbiddenCollection::new(&z2, two.clone())?;
    let thin_exact = engine::restricted_minima_doubling(&thin, &z2, &g, 2, settings)?;
    let t = bounds::cor_full_higher(&thin, &z2, &two, 2, settings)?;
    let stated_thin = t.exact("stated_form").cloned().unwrap_or_default();
    Ok(vec![
        Check::rational("stated form, i=2", &int(25), b.exact("stated_form").unwrap_or(&int(0))),
        Check::rational("corrected bound, i=2", &int(45), b.hi()),
        Check::rational("exact restricted lambda_2", &rat(25, 2), &exact.values[1]),
        Check::dominated("exact vs corrected", &exact.values[1], &b),
        Check::rational("thin box exact restricted lambda_2", &int(100), &thin_exact.values[1]),
        Check::rational("thin box stated form", &int(54), &stated_thin),
        Check::flag("thin box stated form is violated", true, stated_thin < thin_exact.values[1]),
        Check::dominated("thin box exact vs corrected", &thin_exact.values[1], &t),
    ])
}

fn lower_rank(settings: &EngineSettings) -> Result<Vec<Check>> {
    let k = ConvexBody::cube(2);
    let z2 = Lattice::integer(2);
    let axis = vec![lat(&[&[1, 0]])];
    let f = ForbiddenCollection::new(&z2, axis.clone())?;
    let exact = engine::restricted_minima(&k, &z2, &f, 2, settings)?;
    let thm = bounds::thm_lower_bound(&k, &z2, &axis, settings)?;
    let cor = bounds::cor_higher_lower_bound(&k, &z2, &axis, 1, settings)?;
    let fuk = bounds::fukshansky_bound(&k, &z2, &axis, &settings.precision)?;
    let mu = engine::covering_radius_diagonal(&k, &z2)?;
    Ok(vec![
        Check::rational("lower-rank avoidance bound", &rat(5, 2), thm.hi()),
        Check::rational("higher lower-rank bound, j=1", &int(4), cor.hi()),
        Check::rational("minor-vector bound", &int(13), fuk.hi()),
        Check::rational("plank bound", &int(1), &bounds::plank_bound(&mu, 1, 1)?),
        Check::rational("exact restricted lambda_1", &int(1), &exact.values[0]),
        Check::rational("exact restricted lambda_2", &int(1), &exact.values[1]),
    ])
}

fn torus(settings: &EngineSettings) -> Result<Vec<Check>> {
    let k = ConvexBody::cube(2);
    let z2 = Lattice::integer(2);
    let three = lat(&[&[3, 0], &[0, 3]]);
    let two = lat(&[&[2, 0], &[0, 2]]);
    let (thin, _, parts) = two_congruence_instance(5, rat(2, 25));
    let bar = Lattice::intersect(&parts)?;
    let mut checks = vec![
        Check::rational("packing volume 3Z^2, 3/2", &int(9), &engine::torus_packing_volume(&k, &three, &rat(3, 2), settings)?),
        Check::rational("packing volume 3Z^2, 1", &int(4), &engine::torus_packing_volume(&k, &three, &int(1), settings)?),
        Check::rational("packing volume Z^2, 1/2", &int(1), &engine::torus_packing_volume(&k, &z2, &rat(1, 2), settings)?),
        Check::rational("volume lower bound 3Z^2, 3", &int(9), &bounds::torus_volume_lower_bound(&k, &three, &int(3), settings)?),
        Check::rational("volume lower bound 3Z^2, 9/2", &int(9), &bounds::torus_volume_lower_bound(&k, &three, &rat(9, 2), settings)?),
        Check::rational("volume lower bound 3Z^2, 0", &int(0), &bounds::torus_volume_lower_bound(&k, &three, &int(0), settings)?),
    ];
    let cases = [("unit square, 2Z^2, 1", &k, &two, int(1), 4usize), ("unit square, 2Z^2, 0", &k, &two, int(0), 1), ("thin box, 5Z x 2Z, 1", &thin, &bar, int(1), 3)];
    for (label, body, sub, l, want) in cases {
        let got = engine::distinct_cosets_in_body(body, &z2, sub, &l, settings)?;
        checks.push(Check::new(format!("distinct cosets, {label}"), want.to_string(), got.to_string(), got == want));
    }
    Ok(checks)
}

fn fmt_vec(v: &[Rational]) -> Vec<String> {
    v.iter().map(fmt_rational).collect()
}

type FixtureFn = fn(&EngineSettings) -> Result<Vec<Check>>;

const FIXTURES: [(&str, &str, FixtureFn); 9] = [
    ("F1", "two congruences, p = 5, alpha = 2/25", two_congruences),
    ("F2", "sharpness sweep, alpha = 2/p^2", sharpness),
    ("F3", "four sublattices of Z^2: intersection, m and coverage", coverage),
    ("F4", "single full-rank sublattice 2Z^2 in the unit square", single_full_rank),
    ("F5", "kernel lattices of (1 1 1) and (2 1)", siegel),
    ("F6", "lattice point counting bounds in the unit square", counting),
    ("F7", "higher restricted minima avoiding full-rank sublattices", higher_full_rank),
    ("F8", "avoiding the x-axis in the unit square", lower_rank),
    ("F9", "torus volumes and coset counts", torus),
];

/// Runs every golden fixture; errors are reported as failed checks.
pub fn run_examples(settings: &EngineSettings) -> ExamplesReport {
    let fixtures = FIXTURES
        .iter()
        .map(|(id, title, f)| {
            let checks = f(settings)
                .unwrap_or_else(|e| vec![Check::new("evaluation", "no error", format!("error: {e}"), false)]);
            Fixture { id: id.to_string(), title: title.to_string(), checks }
        })
        .collect();
    ExamplesReport { schema_version: 1, fixtures }
}
