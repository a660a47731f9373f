use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::rational::{int, rat};
use crate::arith::Rational;
use crate::body::ConvexBody;
use crate::engine::{ForbiddenCollection, ForbiddenKind};
use crate::error::{Error, Result};
use crate::lattice::{saturate, union_covers, Lattice, DEFAULT_COSET_CAP};

/// Parameters of the random instance generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorParams {
    pub seed: u64,
    pub n: usize,
    pub s: usize,
    pub kind: ForbiddenKind,
    /// Half-widths are `p/q` with `1 <= p <= max_numerator`, `1 <= q <= max_denominator`.
    pub max_numerator: i64,
    pub max_denominator: i64,
    /// Diagonal entries of the lattice before the unimodular transform.
    pub max_diagonal: i64,
    /// Number of random elementary row operations applied to the diagonal basis.
    pub unimodular_steps: usize,
    /// Primes available for index-p forbidden sublattices.
    pub primes: Vec<i64>,
}

impl GeneratorParams {
    pub fn new(seed: u64, n: usize, s: usize, kind: ForbiddenKind) -> Self {
        Self {
            seed,
            n,
            s,
            kind,
            max_numerator: 6,
            max_denominator: 2,
            max_diagonal: 2,
            unimodular_steps: n,
            primes: vec![2, 3, 5],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub id: String,
    pub body: ConvexBody,
    pub lattice: Lattice,
    pub forbidden: ForbiddenCollection,
    pub params: Option<GeneratorParams>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceWire {
    id: String,
    body: ConvexBody,
    lattice: Lattice,
    forbidden: Vec<Lattice>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    params: Option<GeneratorParams>,
}

impl Instance {
    pub fn new(id: impl Into<String>, body: ConvexBody, lattice: Lattice, parts: Vec<Lattice>) -> Result<Self> {
        if body.dim() != lattice.dim() {
            return Err(Error::DimensionMismatch { expected: lattice.dim(), found: body.dim() });
        }
        if parts.iter().any(|p| p.dim() != lattice.dim()) {
            return Err(Error::InvalidInput("forbidden sublattices must live in the lattice's space".into()));
        }
        let forbidden = ForbiddenCollection::new(&lattice, parts)?;
        Ok(Self { id: id.into(), body, lattice, forbidden, params: None })
    }

    pub fn n(&self) -> usize {
        self.lattice.dim()
    }
}

impl Serialize for Instance {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        InstanceWire {
            id: self.id.clone(),
            body: self.body.clone(),
            lattice: self.lattice.clone(),
            forbidden: self.forbidden.parts().to_vec(),
            params: self.params.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Instance {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = InstanceWire::deserialize(d)?;
        if w.forbidden.len() > crate::json::MAX_INPUT_ROWS {
            return Err(D::Error::custom("too many forbidden sublattices"));
        }
        let mut inst = Instance::new(w.id, w.body, w.lattice, w.forbidden).map_err(D::Error::custom)?;
        inst.params = w.params;
        Ok(inst)
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    Ok(serde_json::from_str(text)?)
}

const MAX_RETRIES: usize = 200;

/// Deterministic random instance: a box, a unimodular transform of a diagonal
/// lattice and `s` forbidden sublattices of the requested kind, built in lattice
/// coordinates. Full-rank collections that cover the lattice are redrawn.
pub fn generate(params: &GeneratorParams) -> Result<Instance> {
    let n = params.n;
    if !(2..=6).contains(&n) {
        return Err(Error::InvalidInput(format!("n = {n} outside [2, 6]")));
    }
    if params.s == 0 {
        return Err(Error::InvalidInput("s must be at least 1".into()));
    }
    if params.kind == ForbiddenKind::Mixed && params.s < 2 {
        return Err(Error::InvalidInput("a mixed collection needs s >= 2".into()));
    }
    if params.max_numerator < 1 || params.max_denominator < 1 || params.max_diagonal < 1 {
        return Err(Error::InvalidInput("magnitude caps must be positive".into()));
    }
    if params.kind != ForbiddenKind::Lower && (params.primes.is_empty() || params.primes.iter().any(|&p| p < 2)) {
        return Err(Error::InvalidInput("full-rank sublattices need primes >= 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let widths = (0..n)
        .map(|_| rat(rng.gen_range(1..=params.max_numerator), rng.gen_range(1..=params.max_denominator)))
        .collect();
    let body = ConvexBody::new_box(widths)?;
    let lattice = random_lattice(&mut rng, params)?;
    for _ in 0..MAX_RETRIES {
        let parts = (0..params.s)
            .map(|i| {
                let full = match params.kind {
                    ForbiddenKind::Lower => false,
                    ForbiddenKind::Full => true,
                    ForbiddenKind::Mixed => i % 2 == 1,
                };
                if full {
                    congruence_sublattice(&mut rng, &lattice, &params.primes)
                } else {
                    primitive_sublattice(&mut rng, &lattice)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        if union_covers(&lattice, &parts, DEFAULT_COSET_CAP)? {
            continue;
        }
        let id = format!("{}-n{}-s{}-{}", kind_str(params.kind), n, params.s, params.seed);
        let mut inst = Instance::new(id, body, lattice, parts)?;
        inst.params = Some(params.clone());
        return Ok(inst);
    }
    Err(Error::InvalidInput(format!("no admissible collection after {MAX_RETRIES} draws")))
}

pub(crate) fn kind_str(kind: ForbiddenKind) -> &'static str {
    match kind {
        ForbiddenKind::Lower => "lower",
        ForbiddenKind::Full => "full",
        ForbiddenKind::Mixed => "mixed",
    }
}

fn random_lattice(rng: &mut ChaCha8Rng, params: &GeneratorParams) -> Result<Lattice> {
    let n = params.n;
    let mut rows: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let d = int(rng.gen_range(1..=params.max_diagonal));
            (0..n).map(|j| if i == j { d.clone() } else { Rational::zero() }).collect()
        })
        .collect();
    for _ in 0..params.unimodular_steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = int(*[-1, 1].choose(rng).expect("non-empty"));
        let add: Vec<Rational> = rows[j].iter().map(|x| x * &c).collect();
        for (x, a) in rows[i].iter_mut().zip(add) {
            *x += a;
        }
    }
    Lattice::new(n, rows)
}

/// `lattice ∩ span` of random small coordinate vectors, of rank in `[1, n-1]`.
fn primitive_sublattice(rng: &mut ChaCha8Rng, lattice: &Lattice) -> Result<Lattice> {
    let n = lattice.rank();
    let r = rng.gen_range(1..n);
    for _ in 0..MAX_RETRIES {
        let coords: Vec<Vec<BigInt>> = (0..r)
            .map(|_| (0..n).map(|_| BigInt::from(rng.gen_range(-2..=2i64))).collect())
            .collect();
        let points: Vec<Vec<Rational>> = coords.iter().map(|c| lattice.point(c)).collect();
        if crate::lattice::matrix::rank(&points) == r {
            return saturate(lattice, &points);
        }
    }
    Err(Error::InvalidInput("could not draw independent vectors".into()))
}

/// `{x in lattice : c . z(x) = 0 mod p}` for a random prime `p` and nonzero `c mod p`.
fn congruence_sublattice(rng: &mut ChaCha8Rng, lattice: &Lattice, primes: &[i64]) -> Result<Lattice> {
    let n = lattice.rank();
    let p = *primes.choose(rng).expect("non-empty");
    let mut c: Vec<i64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
    if c.iter().all(|&x| x == 0) {
        c[rng.gen_range(0..n)] = 1;
    }
    let pivot = c.iter().position(|&x| x != 0).expect("nonzero");
    // c_pivot is invertible mod p
    let inv = (1..p).find(|t| (c[pivot] * t).rem_euclid(p) == 1).expect("prime modulus");
    let mut gens: Vec<Vec<BigInt>> = Vec::with_capacity(n + 1);
    let mut pe = vec![BigInt::zero(); n];
    pe[pivot] = BigInt::from(p);
    gens.push(pe);
    for i in (0..n).filter(|&i| i != pivot) {
        let mut v = vec![BigInt::zero(); n];
        v[i] = BigInt::from(1);
        v[pivot] = BigInt::from((-c[i] * inv).rem_euclid(p));
        gens.push(v);
    }
    let points = gens.iter().map(|g| lattice.point(g)).collect();
    Lattice::from_generators(lattice.dim(), points)
}
