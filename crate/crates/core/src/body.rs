//! Origin-symmetric rational convex bodies: axis boxes and symmetric polytopes.

use num_traits::{One, Signed, Zero};

use crate::arith::rational::{self, dot};
use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::lattice::matrix;

/// Largest dimension for which vertices are enumerated from the facet normals.
pub const VERTEX_ENUMERATION_MAX_DIM: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConvexBody {
    /// `prod [-a_i, a_i]`.
    Box { half_widths: Vec<Rational> },
    /// `{x : |<c_j, x>| <= 1 for all j}` with its vertex list and volume.
    Polytope(SymmetricPolytope),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricPolytope {
    facets: Vec<Vec<Rational>>,
    vertices: Vec<Vec<Rational>>,
    volume: Rational,
}

/// A linear subspace together with the volume of the body's section by it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionData {
    pub basis: Vec<Vec<Rational>>,
    pub volume: Rational,
}

impl SectionData {
    pub fn new(basis: Vec<Vec<Rational>>, volume: Rational) -> Result<Self> {
        if !volume.is_positive() {
            return Err(Error::InvalidInput("section volume must be positive".into()));
        }
        if basis.is_empty() || matrix::rank(&basis) < basis.len() {
            return Err(Error::InvalidInput("section basis must be non-empty and independent".into()));
        }
        Ok(Self { basis, volume })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

impl ConvexBody {
    pub fn new_box(half_widths: Vec<Rational>) -> Result<Self> {
        if half_widths.is_empty() {
            return Err(Error::InvalidInput("box needs at least one half-width".into()));
        }
        if half_widths.iter().any(|a| !a.is_positive()) {
            return Err(Error::InvalidInput("box half-widths must be positive".into()));
        }
        Ok(ConvexBody::Box { half_widths })
    }

    /// `[-1, 1]^n`.
    pub fn cube(n: usize) -> Self {
        ConvexBody::Box { half_widths: vec![Rational::one(); n] }
    }

    pub fn new_polytope(facets: Vec<Vec<Rational>>, vertices: Vec<Vec<Rational>>, volume: Rational) -> Result<Self> {
        Ok(ConvexBody::Polytope(SymmetricPolytope::new(facets, vertices, volume)?))
    }

    /// Polytope from its facet normals alone (dimension at most 3).
    pub fn polytope_from_facets(facets: Vec<Vec<Rational>>) -> Result<Self> {
        Ok(ConvexBody::Polytope(SymmetricPolytope::from_facets(facets)?))
    }

    /// `{x : sum |x_i| <= 1}`.
    pub fn cross_polytope(n: usize) -> Result<Self> {
        let mut facets = Vec::new();
        for mask in 0..(1u32 << (n - 1)) {
            let mut c = vec![Rational::one(); n];
            for (i, ci) in c.iter_mut().enumerate().skip(1) {
                if mask >> (i - 1) & 1 == 1 {
                    *ci = -Rational::one();
                }
            }
            facets.push(c);
        }
        let mut vertices = Vec::new();
        for i in 0..n {
            for s in [1, -1] {
                let mut v = vec![Rational::zero(); n];
                v[i] = rational::int(s);
                vertices.push(v);
            }
        }
        let volume = rational::pow2(n as u32) / rational::from_big(rational::factorial(n as u32));
        Self::new_polytope(facets, vertices, volume)
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::Box { half_widths } => half_widths.len(),
            ConvexBody::Polytope(p) => p.dim(),
        }
    }

    /// Minkowski functional: the least `t >= 0` with `x ∈ tK`.
    pub fn gauge(&self, x: &[Rational]) -> Rational {
        match self {
            ConvexBody::Box { half_widths } => x
                .iter()
                .zip(half_widths)
                .map(|(xi, a)| xi.abs() / a)
                .fold(Rational::zero(), |m, v| if v > m { v } else { m }),
            ConvexBody::Polytope(p) => p
                .facets
                .iter()
                .map(|c| dot(c, x).abs())
                .fold(Rational::zero(), |m, v| if v > m { v } else { m }),
        }
    }

    /// Support function `h_K(u) = max_{x ∈ K} <u, x>`.
    pub fn support(&self, u: &[Rational]) -> Rational {
        match self {
            ConvexBody::Box { half_widths } => u.iter().zip(half_widths).map(|(ui, a)| ui.abs() * a).sum(),
            ConvexBody::Polytope(p) => p
                .vertices
                .iter()
                .map(|v| dot(u, v))
                .fold(Rational::zero(), |m, v| if v > m { v } else { m }),
        }
    }

    pub fn volume(&self) -> Rational {
        match self {
            ConvexBody::Box { half_widths } => half_widths.iter().map(|a| a * rational::int(2)).product(),
            ConvexBody::Polytope(p) => p.volume.clone(),
        }
    }

    /// `tK` for `t > 0`.
    pub fn dilate(&self, t: &Rational) -> Result<Self> {
        if !t.is_positive() {
            return Err(Error::InvalidInput("dilation factor must be positive".into()));
        }
        Ok(match self {
            ConvexBody::Box { half_widths } => ConvexBody::Box { half_widths: half_widths.iter().map(|a| a * t).collect() },
            ConvexBody::Polytope(p) => ConvexBody::Polytope(SymmetricPolytope {
                facets: p.facets.iter().map(|c| c.iter().map(|x| x / t).collect()).collect(),
                vertices: p.vertices.iter().map(|v| v.iter().map(|x| x * t).collect()).collect(),
                volume: &p.volume * rational::pow(t, p.dim() as u32),
            }),
        })
    }

    pub fn half_widths(&self) -> Option<&[Rational]> {
        match self {
            ConvexBody::Box { half_widths } => Some(half_widths),
            ConvexBody::Polytope(_) => None,
        }
    }

    pub fn is_unit_cube(&self) -> bool {
        self.half_widths().is_some_and(|a| a.iter().all(One::is_one))
    }

    /// Section by the coordinate subspace spanned by `coords` (box bodies only).
    pub fn coordinate_section(&self, coords: &[usize]) -> Result<SectionData> {
        let ConvexBody::Box { half_widths } = self else {
            return Err(Error::Unsupported("coordinate sections are only computed for boxes".into()));
        };
        if coords.is_empty() {
            return Err(Error::InvalidInput("empty coordinate set".into()));
        }
        let n = half_widths.len();
        let mut sorted = coords.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != coords.len() || sorted.last().is_some_and(|&c| c >= n) {
            return Err(Error::InvalidInput("coordinate indices must be distinct and in range".into()));
        }
        let basis = sorted
            .iter()
            .map(|&c| (0..n).map(|j| if j == c { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        let volume = sorted.iter().map(|&c| &half_widths[c] * rational::int(2)).product();
        SectionData::new(basis, volume)
    }
}

impl SymmetricPolytope {
    pub fn new(facets: Vec<Vec<Rational>>, vertices: Vec<Vec<Rational>>, volume: Rational) -> Result<Self> {
        let n = check_facets(&facets)?;
        if vertices.iter().any(|v| v.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: vertices.iter().map(Vec::len).find(|&l| l != n).unwrap() });
        }
        for v in &vertices {
            let mut tight = 0;
            for c in &facets {
                let s = dot(c, v).abs();
                if s > Rational::one() {
                    return Err(Error::InvalidInput("vertex violates a facet constraint".into()));
                }
                if s.is_one() {
                    tight += 1;
                }
            }
            // each |<c,x>| <= 1 contributes two half-spaces, at most one tight
            if tight < n.div_ceil(2).max(1) || !is_vertex(&facets, v) {
                return Err(Error::InvalidInput("listed point is not a vertex".into()));
            }
            let neg: Vec<Rational> = v.iter().map(|x| -x).collect();
            if !vertices.contains(&neg) {
                return Err(Error::InvalidInput("vertex set is not symmetric".into()));
            }
        }
        let computed = triangulated_volume(&facets, &vertices);
        if !computed.is_positive() {
            return Err(Error::InvalidInput("polytope is not full-dimensional".into()));
        }
        if computed != volume {
            return Err(Error::InvalidInput(format!(
                "stated volume {} differs from the triangulation volume {}",
                rational::fmt_rational(&volume),
                rational::fmt_rational(&computed)
            )));
        }
        Ok(Self { facets, vertices, volume })
    }

    pub fn from_facets(facets: Vec<Vec<Rational>>) -> Result<Self> {
        let n = check_facets(&facets)?;
        if n > VERTEX_ENUMERATION_MAX_DIM {
            return Err(Error::Unsupported(format!(
                "vertex enumeration is limited to dimension {VERTEX_ENUMERATION_MAX_DIM}; supply vertices"
            )));
        }
        let vertices = enumerate_vertices(&facets, n);
        let volume = triangulated_volume(&facets, &vertices);
        Self::new(facets, vertices, volume)
    }

    pub fn dim(&self) -> usize {
        self.facets[0].len()
    }

    pub fn facets(&self) -> &[Vec<Rational>] {
        &self.facets
    }

    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    pub fn volume(&self) -> &Rational {
        &self.volume
    }
}

fn check_facets(facets: &[Vec<Rational>]) -> Result<usize> {
    let n = facets.first().map(Vec::len).ok_or_else(|| Error::InvalidInput("polytope needs facets".into()))?;
    if n == 0 {
        return Err(Error::InvalidInput("zero-dimensional polytope".into()));
    }
    if let Some(c) = facets.iter().find(|c| c.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: c.len() });
    }
    if facets.iter().any(|c| c.iter().all(Zero::is_zero)) {
        return Err(Error::InvalidInput("zero facet normal".into()));
    }
    if matrix::rank(facets) < n {
        return Err(Error::InvalidInput("facet normals do not span; the polytope is unbounded".into()));
    }
    Ok(n)
}

/// Signed tight-constraint normals at `v` span the space iff `v` is a vertex.
fn is_vertex(facets: &[Vec<Rational>], v: &[Rational]) -> bool {
    let tight: Vec<Vec<Rational>> = facets.iter().filter(|c| dot(c, v).abs().is_one()).cloned().collect();
    matrix::rank(&tight) == v.len()
}

fn enumerate_vertices(facets: &[Vec<Rational>], n: usize) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = Vec::new();
    let m = facets.len();
    for cols in crate::lattice::combinations(m, n) {
        let a: Vec<Vec<Rational>> = cols.iter().map(|&j| facets[j].clone()).collect();
        let Some(inv) = matrix::inverse(&a) else { continue };
        for signs in 0..(1u32 << n) {
            let rhs: Vec<Rational> = (0..n)
                .map(|i| if signs >> i & 1 == 1 { -Rational::one() } else { Rational::one() })
                .collect();
            // solve a x = rhs  =>  x = inv rhs
            let x: Vec<Rational> = (0..n).map(|i| dot(&inv[i], &rhs)).collect();
            if facets.iter().all(|c| dot(c, &x).abs() <= Rational::one()) && !out.contains(&x) {
                out.push(x);
            }
        }
    }
    out.sort();
    out
}

/// Volume by a pulling triangulation of the boundary, coned to the origin.
fn triangulated_volume(facets: &[Vec<Rational>], vertices: &[Vec<Rational>]) -> Rational {
    let n = facets[0].len();
    // every |<c,x>| <= 1 yields the facets <c,x> = 1 and <c,x> = -1
    let mut incidences: Vec<Vec<usize>> = Vec::new();
    for c in facets {
        for sign in [Rational::one(), -Rational::one()] {
            let s: Vec<usize> = (0..vertices.len()).filter(|&i| dot(c, &vertices[i]) == sign).collect();
            if affine_dim(vertices, &s) == Some(n - 1) && !incidences.contains(&s) {
                incidences.push(s);
            }
        }
    }
    let mut total = Rational::zero();
    for face in &incidences {
        for simplex in pull(vertices, face, n - 1, &incidences) {
            let m: Vec<Vec<Rational>> = simplex.iter().map(|&i| vertices[i].clone()).collect();
            total += matrix::det(&m).abs();
        }
    }
    total / rational::from_big(rational::factorial(n as u32))
}

fn pull(vertices: &[Vec<Rational>], face: &[usize], d: usize, facets: &[Vec<usize>]) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![vec![face[0]]];
    }
    let apex = face[0];
    let mut subfaces: Vec<Vec<usize>> = Vec::new();
    for g in facets {
        let t: Vec<usize> = face.iter().copied().filter(|i| g.contains(i)).collect();
        if t.len() < face.len() && !t.contains(&apex) && affine_dim(vertices, &t) == Some(d - 1) && !subfaces.contains(&t) {
            subfaces.push(t);
        }
    }
    let mut out = Vec::new();
    for t in subfaces {
        for mut s in pull(vertices, &t, d - 1, facets) {
            s.push(apex);
            out.push(s);
        }
    }
    out
}

fn affine_dim(vertices: &[Vec<Rational>], idx: &[usize]) -> Option<usize> {
    let (&first, rest) = idx.split_first()?;
    let diffs: Vec<Vec<Rational>> = rest
        .iter()
        .map(|&i| vertices[i].iter().zip(&vertices[first]).map(|(a, b)| a - b).collect())
        .collect();
    Some(if diffs.is_empty() { 0 } else { matrix::rank(&diffs) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use proptest::prelude::*;

    fn example_body() -> ConvexBody {
        ConvexBody::new_box(vec![int(1), rat(2, 25)]).unwrap()
    }

    #[test]
    fn gauges() {
        let k = example_body();
        assert_eq!(k.gauge(&[int(1), int(1)]), rat(25, 2));
        assert_eq!(k.gauge(&[int(0), int(0)]), int(0));
        assert_eq!(ConvexBody::cube(2).gauge(&[int(3), int(-2)]), int(3));
    }

    #[test]
    fn supports() {
        assert_eq!(ConvexBody::cube(2).support(&[int(1), int(1)]), int(2));
        assert_eq!(example_body().support(&[int(0), int(1)]), rat(2, 25));
        assert_eq!(example_body().support(&[int(0), int(0)]), int(0));
        let cross = ConvexBody::cross_polytope(2).unwrap();
        assert_eq!(cross.support(&[int(1), int(1)]), int(1));
    }

    #[test]
    fn volumes() {
        assert_eq!(ConvexBody::cube(2).volume(), int(4));
        assert_eq!(example_body().volume(), rat(8, 25));
        assert_eq!(ConvexBody::cross_polytope(2).unwrap().volume(), int(2));
        assert_eq!(ConvexBody::cross_polytope(3).unwrap().volume(), rat(4, 3));
        assert_eq!(ConvexBody::cross_polytope(4).unwrap().volume(), rat(2, 3));
    }

    #[test]
    fn polytope_from_facets_matches_known_bodies() {
        let cross = ConvexBody::polytope_from_facets(vec![vec![int(1), int(1)], vec![int(1), int(-1)]]).unwrap();
        assert_eq!(cross.volume(), int(2));
        // a hexagon: |x| <= 1, |y| <= 1, |x + y| <= 1
        let hex = ConvexBody::polytope_from_facets(vec![
            vec![int(1), int(0)],
            vec![int(0), int(1)],
            vec![int(1), int(1)],
        ])
        .unwrap();
        assert_eq!(hex.volume(), int(3));
        let cube = ConvexBody::polytope_from_facets(vec![
            vec![int(1), int(0), int(0)],
            vec![int(0), int(1), int(0)],
            vec![int(0), int(0), int(1)],
        ])
        .unwrap();
        assert_eq!(cube.volume(), int(8));
        let ConvexBody::Polytope(p) = &cube else { unreachable!() };
        assert_eq!(p.vertices().len(), 8);
    }

    #[test]
    fn rejects_inconsistent_polytopes() {
        let facets = vec![vec![int(1), int(1)], vec![int(1), int(-1)]];
        let vertices = vec![vec![int(1), int(0)], vec![int(-1), int(0)], vec![int(0), int(1)], vec![int(0), int(-1)]];
        assert!(ConvexBody::new_polytope(facets.clone(), vertices.clone(), int(3)).is_err());
        assert!(ConvexBody::new_polytope(facets.clone(), vertices[..3].to_vec(), int(2)).is_err());
        assert!(ConvexBody::new_polytope(facets, vertices, int(2)).is_ok());
        assert!(ConvexBody::polytope_from_facets(vec![vec![int(1), int(0)]]).is_err());
        assert!(ConvexBody::new_box(vec![int(1), int(0)]).is_err());
    }

    #[test]
    fn sections() {
        let s = ConvexBody::cube(3).coordinate_section(&[0, 1]).unwrap();
        assert_eq!(s.volume, int(4));
        assert_eq!(example_body().coordinate_section(&[0]).unwrap().volume, int(2));
        assert_eq!(example_body().coordinate_section(&[1]).unwrap().volume, rat(4, 25));
        let cross = ConvexBody::cross_polytope(2).unwrap();
        assert!(matches!(cross.coordinate_section(&[0]), Err(Error::Unsupported(_))));
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-20i64..=20, 1i64..=7).prop_map(|(p, q)| rat(p, q))
    }

    fn bodies() -> Vec<ConvexBody> {
        vec![
            example_body(),
            ConvexBody::new_box(vec![rat(3, 2), rat(1, 3)]).unwrap(),
            ConvexBody::cross_polytope(2).unwrap(),
            ConvexBody::polytope_from_facets(vec![vec![int(1), int(0)], vec![int(0), int(1)], vec![int(1), int(1)]]).unwrap(),
        ]
    }

    proptest! {
        #[test]
        fn gauge_is_symmetric_and_homogeneous(x in small_rat(), y in small_rat(), t in (1i64..9, 1i64..9)) {
            let t = rat(t.0, t.1);
            for k in bodies() {
                let v = vec![x.clone(), y.clone()];
                let neg: Vec<Rational> = v.iter().map(|a| -a).collect();
                let scaled: Vec<Rational> = v.iter().map(|a| a * &t).collect();
                prop_assert_eq!(k.gauge(&v), k.gauge(&neg));
                prop_assert_eq!(k.gauge(&scaled), &t * k.gauge(&v));
            }
        }

        #[test]
        fn gauge_matches_constraints(x in small_rat(), y in small_rat(), lam in (0i64..9, 1i64..5)) {
            let lam = rat(lam.0, lam.1);
            let v = vec![x, y];
            for k in bodies() {
                let inside = match &k {
                    ConvexBody::Box { half_widths } => v.iter().zip(half_widths).all(|(xi, a)| xi.abs() <= &lam * a),
                    ConvexBody::Polytope(p) => p.facets().iter().all(|c| dot(c, &v).abs() <= lam),
                };
                prop_assert_eq!(k.gauge(&v) <= lam, inside);
            }
        }

        #[test]
        fn support_dominates_unit_gauge_points(u0 in small_rat(), u1 in small_rat(), x in small_rat(), y in small_rat()) {
            let u = vec![u0, u1];
            let v = vec![x, y];
            for k in bodies() {
                let g = k.gauge(&v);
                if g.is_zero() { continue; }
                let on_boundary: Vec<Rational> = v.iter().map(|a| a / &g).collect();
                prop_assert!(dot(&u, &on_boundary) <= k.support(&u));
            }
        }

        #[test]
        fn volume_scales(t in (1i64..9, 1i64..9)) {
            let t = rat(t.0, t.1);
            for k in bodies() {
                prop_assert_eq!(k.dilate(&t).unwrap().volume(), k.volume() * rational::pow(&t, 2));
            }
        }
    }
}
