//! JSON wire formats and the text parsing entry points.
//!
//! Rationals are canonical strings (`"p/q"`, or `"p"` for integers). Lattices
//! are `{"ambient_dim": n, "basis": [[...], ...]}` and are emitted with their
//! canonical basis. Bodies are `{"type": "box", "halfwidths": [...]}` or
//! `{"type": "polytope", "facets": [...], "vertices": [...], "volume": "p/q"}`.

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::rational::serde_rational;
use crate::arith::Rational;
use crate::body::{ConvexBody, SymmetricPolytope};
use crate::engine::MinimaResult;
use crate::error::{Error, Result};
use crate::lattice::Lattice;

/// Largest ambient dimension accepted from text input.
pub const MAX_INPUT_DIM: usize = 12;
/// Largest number of rows (facets, vertices, generators) accepted from text input.
pub const MAX_INPUT_ROWS: usize = 512;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LatticeWire {
    ambient_dim: usize,
    #[serde(with = "serde_rational::matrix")]
    basis: Vec<Vec<Rational>>,
}

fn check_shape(dim: usize, rows: usize) -> Result<()> {
    if dim == 0 || dim > MAX_INPUT_DIM {
        return Err(Error::InvalidInput(format!("dimension {dim} outside [1, {MAX_INPUT_DIM}]")));
    }
    if rows > MAX_INPUT_ROWS {
        return Err(Error::InvalidInput(format!("{rows} rows exceed the limit of {MAX_INPUT_ROWS}")));
    }
    Ok(())
}

impl Serialize for Lattice {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LatticeWire { ambient_dim: self.dim(), basis: self.basis().to_vec() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Lattice {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = LatticeWire::deserialize(d)?;
        check_shape(w.ambient_dim, w.basis.len()).map_err(D::Error::custom)?;
        if w.basis.len() > w.ambient_dim {
            return Err(D::Error::custom("more basis rows than the ambient dimension"));
        }
        Lattice::new(w.ambient_dim, w.basis).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum BodyWire {
    Box {
        #[serde(with = "serde_rational::vec")]
        halfwidths: Vec<Rational>,
    },
    Polytope {
        #[serde(with = "serde_rational::matrix")]
        facets: Vec<Vec<Rational>>,
        #[serde(with = "serde_rational::matrix")]
        vertices: Vec<Vec<Rational>>,
        #[serde(with = "serde_rational")]
        volume: Rational,
    },
}

impl Serialize for ConvexBody {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ConvexBody::Box { half_widths } => BodyWire::Box { halfwidths: half_widths.clone() }.serialize(s),
            ConvexBody::Polytope(p) => BodyWire::Polytope {
                facets: p.facets().to_vec(),
                vertices: p.vertices().to_vec(),
                volume: p.volume().clone(),
            }
            .serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for ConvexBody {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match BodyWire::deserialize(d)? {
            BodyWire::Box { halfwidths } => {
                check_shape(halfwidths.len(), 0).map_err(D::Error::custom)?;
                ConvexBody::new_box(halfwidths).map_err(D::Error::custom)
            }
            BodyWire::Polytope { facets, vertices, volume } => {
                let dim = facets.first().map_or(0, Vec::len);
                check_shape(dim, facets.len().max(vertices.len())).map_err(D::Error::custom)?;
                SymmetricPolytope::new(facets, vertices, volume)
                    .map(ConvexBody::Polytope)
                    .map_err(D::Error::custom)
            }
        }
    }
}

pub fn parse_lattice(text: &str) -> Result<Lattice> {
    Ok(serde_json::from_str(text)?)
}

pub fn parse_body(text: &str) -> Result<ConvexBody> {
    Ok(serde_json::from_str(text)?)
}

pub fn parse_minima_result(text: &str) -> Result<MinimaResult> {
    let r: MinimaResult = serde_json::from_str(text)?;
    if r.values.len() != r.witnesses.len() {
        return Err(Error::InvalidInput("one witness per value is required".into()));
    }
    Ok(r)
}

/// Integer matrix as rows of decimal strings or JSON integers, e.g. `[["1","1","1"]]`.
pub fn parse_int_matrix(text: &str) -> Result<Vec<Vec<BigInt>>> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Entry {
        Int(i64),
        Text(String),
    }
    let raw: Vec<Vec<Entry>> = serde_json::from_str(text)?;
    let cols = raw.first().map_or(0, Vec::len);
    check_shape(cols, raw.len())?;
    if raw.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidInput("ragged matrix".into()));
    }
    raw.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|e| match e {
                    Entry::Int(i) => Ok(BigInt::from(i)),
                    Entry::Text(s) => {
                        let x = crate::arith::parse_rational(&s)?;
                        if !x.is_integer() {
                            return Err(Error::Parse(format!("not an integer: {s:?}")));
                        }
                        Ok(x.to_integer())
                    }
                })
                .collect()
        })
        .collect()
}
