//! The compactified tropical hypersurface as a face poset.
//!
//! A face of the stratum `X_ρ` is dual to a cell of the triangulation
//! induced on the face `Δ_ρ` of the Newton polytope dual to the cone `ρ`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf2::{BitVector, Gf2Matrix, Subspace};
use crate::lattice::{
    coordinates_in_hnf, dual_fan, integral_annihilator_basis, validate_primitive, Fan,
    LatticePoint, Polytope, Triangulation,
};

/// Canonical identifier of a face: its sedentarity (ray indices of the
/// dual fan) and the dual cell (point indices).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FaceId {
    pub sedentarity: Vec<usize>,
    pub dual_cell: Vec<usize>,
}

impl FaceId {
    pub fn new(mut sedentarity: Vec<usize>, mut dual_cell: Vec<usize>) -> Self {
        sedentarity.sort_unstable();
        dual_cell.sort_unstable();
        FaceId {
            sedentarity,
            dual_cell,
        }
    }
}

impl Ord for FaceId {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.sedentarity.len(), &self.sedentarity, &self.dual_cell).cmp(&(
            other.sedentarity.len(),
            &other.sedentarity,
            &other.dual_cell,
        ))
    }
}

impl PartialOrd for FaceId {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

fn join(v: &[usize]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for FaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "sed{{{}}}/cell{{{}}}",
            join(&self.sedentarity),
            join(&self.dual_cell)
        )
    }
}

fn parse_index_set(s: &str, prefix: &str, whole: &str) -> Result<Vec<usize>> {
    let err = || Error::FaceIdSyntax(whole.to_string());
    let inner = s
        .trim()
        .strip_prefix(prefix)
        .and_then(|r| r.strip_prefix('{'))
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(err)?;
    let mut out = Vec::new();
    if !inner.trim().is_empty() {
        for part in inner.split(',') {
            let part = part.trim();
            if part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err());
            }
            out.push(part.parse::<usize>().map_err(|_| err())?);
        }
    }
    out.sort_unstable();
    let len = out.len();
    out.dedup();
    if out.len() != len {
        return Err(err());
    }
    Ok(out)
}

impl FromStr for FaceId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (sed, cell) = s
            .split_once('/')
            .ok_or_else(|| Error::FaceIdSyntax(s.to_string()))?;
        let dual_cell = parse_index_set(cell, "cell", s)?;
        if dual_cell.is_empty() {
            return Err(Error::FaceIdSyntax(s.to_string()));
        }
        Ok(FaceId {
            sedentarity: parse_index_set(sed, "sed", s)?,
            dual_cell,
        })
    }
}

/// How the torus is compactified: by the full dual fan of the Newton
/// polytope, not at all, or by an explicit list of cones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Compactification {
    Newton,
    Torus,
    /// Each cone is given by its ray generators.
    Cones(Vec<Vec<LatticePoint>>),
}

/// The subfan of the dual fan selected by a compactification. Ray indices
/// always refer to the full dual fan.
pub fn select_subfan(polytope: &Polytope, compactification: &Compactification) -> Result<Fan> {
    let full = dual_fan(polytope)?;
    match compactification {
        Compactification::Newton => Ok(full),
        Compactification::Torus => Ok(Fan::torus_only(full.rays)),
        Compactification::Cones(cones) => {
            let mut indexed = Vec::new();
            for cone in cones {
                let mut idx = Vec::new();
                for ray in cone {
                    let i = full.rays.iter().position(|r| r == ray).ok_or_else(|| {
                        Error::Fan(format!("{ray:?} is not a ray of the dual fan"))
                    })?;
                    idx.push(i);
                }
                idx.sort_unstable();
                if !full.contains_cone(&idx) {
                    return Err(Error::Fan(format!(
                        "{cone:?} is not a cone of the dual fan"
                    )));
                }
                indexed.push(idx);
            }
            Ok(Fan::closed(full.rays, indexed))
        }
    }
}

/// One torus orbit `TY_ρ` together with its lattice coordinates.
#[derive(Debug, Clone)]
pub struct Stratum {
    pub cone: Vec<usize>,
    /// Rank of the orbit lattice `Z^{n+1} / <rays>`.
    pub m: usize,
    /// Rows span the annihilator of the rays; `y = P x` are the orbit coordinates.
    pub lattice: Vec<LatticePoint>,
    /// Index of the dual face of the Newton polytope.
    pub polytope_face: usize,
    pub faces: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Face {
    pub id: FaceId,
    pub stratum: usize,
    pub dim: usize,
    pub ambient_dim: usize,
    pub bounded: bool,
    /// Codimension-one faces in the closure, same or deeper sedentarity.
    pub boundary: Vec<usize>,
    /// Faces having this one in their boundary.
    pub coboundary: Vec<usize>,
    pub parent: Option<usize>,
    /// Facets of the same stratum containing this face (itself for a facet).
    pub facets: Vec<usize>,
    /// Basis of `F_1`, the span of the tangent spaces of the adjacent facets, mod 2.
    pub tangent_basis: Vec<BitVector>,
    /// For a facet: the dual edge direction in orbit coordinates.
    pub edge_direction: Option<LatticePoint>,
}

impl Face {
    pub fn is_facet(&self) -> bool {
        self.dual_cell_dim() == 1
    }

    pub fn dual_cell_dim(&self) -> usize {
        self.id.dual_cell.len() - 1
    }

    pub fn sedentarity(&self) -> &[usize] {
        &self.id.sedentarity
    }

    pub fn tangent(&self) -> Subspace {
        Subspace::from_generators(self.ambient_dim, self.tangent_basis.iter().cloned())
    }
}

#[derive(Debug, Clone)]
pub struct TropicalComplex {
    /// Dimension of the hypersurface.
    pub n: usize,
    pub triangulation: Triangulation,
    pub polytope: Polytope,
    pub fan: Fan,
    pub complete: bool,
    pub strata: Vec<Stratum>,
    pub faces: Vec<Face>,
    index: BTreeMap<FaceId, usize>,
}

fn reduce(v: &[i64]) -> BitVector {
    let bits: Vec<u8> = v.iter().map(|x| x.rem_euclid(2) as u8).collect();
    BitVector::from_u8s(&bits)
}

/// Builds the tropical hypersurface dual to a primitive triangulation,
/// compactified in the toric variety of `fan` (a subfan of the dual fan of
/// the Newton polytope, ray indices as in the dual fan).
pub fn build_complex(t: &Triangulation, fan: &Fan) -> Result<TropicalComplex> {
    validate_primitive(t).map_err(Error::InvalidTriangulation)?;
    let polytope = t.polytope()?;
    let full = dual_fan(&polytope)?;
    if fan.rays != full.rays {
        return Err(Error::Fan(
            "ray list differs from the dual fan of the Newton polytope".into(),
        ));
    }
    for cone in &fan.cones {
        if !full.contains_cone(cone) {
            return Err(Error::Fan(format!("cone {cone:?} is not in the dual fan")));
        }
        if !fan.is_unimodular(cone) {
            return Err(Error::Fan(format!("cone {cone:?} is not unimodular")));
        }
    }
    let big_n = t.dim();
    let n = big_n - 1;
    let complete = fan.cones.len() == full.cones.len();

    let mut strata: Vec<Stratum> = Vec::new();
    for cone in &fan.cones {
        let rays: Vec<LatticePoint> = cone.iter().map(|&r| fan.rays[r].clone()).collect();
        let lattice = integral_annihilator_basis(&rays, big_n);
        let polytope_face = polytope
            .faces
            .iter()
            .position(|f| &f.facets == cone && f.dim == big_n - cone.len())
            .ok_or_else(|| Error::Fan(format!("no face of the polytope is dual to {cone:?}")))?;
        strata.push(Stratum {
            cone: cone.clone(),
            m: lattice.len(),
            lattice,
            polytope_face,
            faces: Vec::new(),
        });
    }
    let stratum_of: BTreeMap<Vec<usize>, usize> = strata
        .iter()
        .enumerate()
        .map(|(i, s)| (s.cone.clone(), i))
        .collect();

    let cells = t.cells();
    let mut ids: Vec<(FaceId, usize)> = Vec::new();
    for (si, s) in strata.iter().enumerate() {
        let pts = &polytope.faces[s.polytope_face].points;
        for c in &cells {
            if c.len() >= 2 && c.iter().all(|p| pts.binary_search(p).is_ok()) {
                ids.push((FaceId::new(s.cone.clone(), c.clone()), si));
            }
        }
    }
    ids.sort();
    let index: BTreeMap<FaceId, usize> = ids
        .iter()
        .enumerate()
        .map(|(i, (id, _))| (id.clone(), i))
        .collect();

    let mut faces: Vec<Face> = Vec::with_capacity(ids.len());
    for (id, si) in &ids {
        let s = &strata[*si];
        let cell_dim = id.dual_cell.len() - 1;
        let bounded = polytope.carrier_face(&id.dual_cell) == s.polytope_face;
        let edge_direction =
            if cell_dim == 1 {
                let d: LatticePoint = t.points[id.dual_cell[1]]
                    .iter()
                    .zip(&t.points[id.dual_cell[0]])
                    .map(|(a, b)| a - b)
                    .collect();
                Some(coordinates_in_hnf(&s.lattice, &d).ok_or_else(|| {
                    Error::Fan(format!("edge {id} is not parallel to its stratum"))
                })?)
            } else {
                None
            };
        faces.push(Face {
            id: id.clone(),
            stratum: *si,
            dim: s.m - cell_dim,
            ambient_dim: s.m,
            bounded,
            boundary: Vec::new(),
            coboundary: Vec::new(),
            parent: None,
            facets: Vec::new(),
            tangent_basis: Vec::new(),
            edge_direction,
        });
    }

    for (fi, (id, si)) in ids.iter().enumerate() {
        strata[*si].faces.push(fi);
        let cone = &id.sedentarity;
        let mut boundary = Vec::new();
        for c in &cells {
            if c.len() == id.dual_cell.len() + 1
                && id.dual_cell.iter().all(|p| c.binary_search(p).is_ok())
            {
                if let Some(&j) = index.get(&FaceId::new(cone.clone(), c.clone())) {
                    boundary.push(j);
                }
            }
        }
        for r in 0..fan.rays.len() {
            if cone.contains(&r) {
                continue;
            }
            let mut deeper = cone.clone();
            deeper.push(r);
            deeper.sort_unstable();
            if let Some(&j) = index.get(&FaceId::new(deeper.clone(), id.dual_cell.clone())) {
                if stratum_of.contains_key(&deeper) {
                    boundary.push(j);
                }
            }
        }
        boundary.sort_unstable();
        for &j in &boundary {
            faces[j].coboundary.push(fi);
        }
        faces[fi].boundary = boundary;
        if !cone.is_empty() {
            faces[fi].parent = index
                .get(&FaceId::new(Vec::new(), id.dual_cell.clone()))
                .copied();
        }
        let facets: Vec<usize> = id
            .dual_cell
            .iter()
            .enumerate()
            .flat_map(|(i, &a)| id.dual_cell[i + 1..].iter().map(move |&b| vec![a, b]))
            .filter_map(|e| index.get(&FaceId::new(cone.clone(), e)).copied())
            .collect();
        faces[fi].facets = facets;
    }
    for f in faces.iter_mut() {
        f.coboundary.sort_unstable();
    }

    for fi in 0..faces.len() {
        if let Some(d) = &faces[fi].edge_direction {
            let m = faces[fi].ambient_dim;
            let basis = integral_annihilator_basis(std::slice::from_ref(d), m);
            faces[fi].tangent_basis = basis.iter().map(|v| reduce(v)).collect();
        }
    }
    for fi in 0..faces.len() {
        if faces[fi].is_facet() {
            continue;
        }
        let m = faces[fi].ambient_dim;
        let mut span = Subspace::zero(m);
        for &g in &faces[fi].facets {
            for v in &faces[g].tangent_basis {
                span.insert(v.clone());
            }
        }
        faces[fi].tangent_basis = span.basis().to_vec();
    }

    Ok(TropicalComplex {
        n,
        triangulation: t.clone(),
        polytope,
        fan: fan.clone(),
        complete,
        strata,
        faces,
        index,
    })
}

impl TropicalComplex {
    pub fn face_index(&self, id: &FaceId) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownFace(id.to_string()))
    }

    pub fn face(&self, id: &FaceId) -> Result<&Face> {
        Ok(&self.faces[self.face_index(id)?])
    }

    pub fn stratum_index(&self, cone: &[usize]) -> Option<usize> {
        self.strata.iter().position(|s| s.cone == cone)
    }

    /// Faces of dimension `q`, in enumeration order.
    pub fn faces_of_dim(&self, q: usize) -> Vec<usize> {
        (0..self.faces.len())
            .filter(|&i| self.faces[i].dim == q)
            .collect()
    }

    /// Sedentarity-zero facets.
    pub fn top_facets(&self) -> Vec<usize> {
        (0..self.faces.len())
            .filter(|&i| self.faces[i].id.sedentarity.is_empty() && self.faces[i].is_facet())
            .collect()
    }

    pub fn is_boundary_pair(&self, sigma: usize, tau: usize) -> bool {
        self.faces[sigma].boundary.binary_search(&tau).is_ok()
    }

    /// Integer matrix `A` with `P_η = A P_ρ`, mapping orbit coordinates of
    /// `ρ` onto those of `η`.
    pub fn projection_integer(&self, rho: usize, eta: usize) -> Result<Vec<LatticePoint>> {
        let (a, b) = (&self.strata[rho], &self.strata[eta]);
        if !a.cone.iter().all(|r| b.cone.contains(r)) {
            return Err(Error::ConesNotNested);
        }
        b.lattice
            .iter()
            .map(|row| coordinates_in_hnf(&a.lattice, row).ok_or(Error::ConesNotNested))
            .collect()
    }

    /// The mod-2 projection `π_{ρη}` between strata (given by stratum index).
    pub fn projection_matrix(&self, rho: usize, eta: usize) -> Result<Gf2Matrix> {
        let a = self.projection_integer(rho, eta)?;
        let rows: Vec<Vec<u8>> = a
            .iter()
            .map(|r| r.iter().map(|x| x.rem_euclid(2) as u8).collect())
            .collect();
        if rows.is_empty() {
            return Ok(Gf2Matrix::zeros(0, self.strata[rho].m));
        }
        Ok(Gf2Matrix::from_rows(&rows))
    }

    /// Projection between the strata of two faces.
    pub fn face_projection(&self, sigma: usize, tau: usize) -> Result<Gf2Matrix> {
        self.projection_matrix(self.faces[sigma].stratum, self.faces[tau].stratum)
    }

    pub fn f1_basis(&self, id: &FaceId) -> Result<Subspace> {
        Ok(self.face(id)?.tangent())
    }

    /// Interior points of the Newton polytope used by the triangulation.
    pub fn interior_points(&self) -> Vec<usize> {
        (0..self.triangulation.points.len())
            .filter(|&i| !self.polytope.is_on_boundary(i))
            .collect()
    }

    pub fn all_ids(&self) -> impl Iterator<Item = &FaceId> {
        self.faces.iter().map(|f| &f.id)
    }
}

/// Coefficients of `χ(λ) = (1−λ)^k [(1−λ)^{m−k} − (−λ)^{m−k}]` with signs
/// removed: the expected `dim F_p` for `p = 0..=m`.
pub fn expected_multitangent_dims(k: usize, m: usize) -> Vec<i64> {
    fn mul(a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }
    let pow = |base: &[i64], e: usize| (0..e).fold(vec![1i64], |acc, _| mul(&acc, base));
    let one_minus = [1, -1];
    let mut inner = pow(&one_minus, m - k);
    let neg = pow(&[0, -1], m - k);
    if inner.len() < neg.len() {
        inner.resize(neg.len(), 0);
    }
    for (i, c) in neg.iter().enumerate() {
        inner[i] -= c;
    }
    let poly = mul(&pow(&one_minus, k), &inner);
    poly.iter()
        .enumerate()
        .map(|(p, c)| if p % 2 == 0 { *c } else { -*c })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{
        dilated_simplex_points, staircase_triangulation, standard_simplex_points,
    };

    pub(crate) fn simplex_complex(
        dim: usize,
        compactification: Compactification,
    ) -> TropicalComplex {
        let t = Triangulation::new(standard_simplex_points(dim), vec![(0..=dim).collect()]);
        let fan = select_subfan(&t.polytope().unwrap(), &compactification).unwrap();
        build_complex(&t, &fan).unwrap()
    }

    fn count(x: &TropicalComplex, sed: usize, dim: usize) -> usize {
        x.faces
            .iter()
            .filter(|f| f.id.sedentarity.len() == sed && f.dim == dim)
            .count()
    }

    #[test]
    fn face_id_round_trip() {
        let id = FaceId::new(vec![2, 0], vec![3, 1, 2]);
        assert_eq!(id.to_string(), "sed{0,2}/cell{1,2,3}");
        assert_eq!(id.to_string().parse::<FaceId>().unwrap(), id);
        assert_eq!(
            "sed{}/cell{0,1}".parse::<FaceId>().unwrap(),
            FaceId::new(vec![], vec![0, 1])
        );
        for bad in [
            "",
            "sed{}",
            "sed{/cell{}",
            "sed{1,1}/cell{}",
            "sed{a}/cell{}",
            "sed{1,}/cell{2}",
            "cell{}/sed{}",
        ] {
            assert!(bad.parse::<FaceId>().is_err(), "{bad}");
        }
    }

    #[test]
    fn plane_in_projective_space() {
        let x = simplex_complex(3, Compactification::Newton);
        assert_eq!(x.n, 2);
        assert_eq!(count(&x, 0, 0), 1);
        assert_eq!(count(&x, 0, 1), 4);
        assert_eq!(count(&x, 0, 2), 6);
        assert!(x.complete);
        for f in &x.faces {
            for &b in &f.boundary {
                assert_eq!(x.faces[b].dim + 1, f.dim);
            }
            if let Some(p) = f.parent {
                assert_eq!(x.faces[p].dim, f.dim + f.id.sedentarity.len());
            }
            if f.id.sedentarity.is_empty() && f.dim + 1 == x.n {
                assert_eq!(f.facets.len(), 3);
            }
        }
    }

    #[test]
    fn line_in_projective_plane() {
        let x = simplex_complex(2, Compactification::Newton);
        assert_eq!(count(&x, 0, 0), 1);
        assert_eq!(count(&x, 0, 1), 3);
        assert_eq!(count(&x, 1, 0), 3);
        assert_eq!(x.faces.len(), 7);
        assert!(x.faces.iter().filter(|f| f.dim == 1).all(|f| !f.bounded));
    }

    #[test]
    fn torus_only_has_no_boundary_strata() {
        let x = simplex_complex(2, Compactification::Torus);
        assert!(x.faces.iter().all(|f| f.id.sedentarity.is_empty()));
        assert_eq!(x.faces.len(), 4);
        assert!(!x.complete);
    }

    #[test]
    fn tangent_spaces_of_the_plane() {
        let x = simplex_complex(3, Compactification::Newton);
        // Facet dual to [v0, v3]: tangent e1, e2.
        let s12 = x.f1_basis(&FaceId::new(vec![], vec![0, 3])).unwrap();
        let expected = Subspace::from_generators(
            3,
            [
                BitVector::from_u8s(&[1, 0, 0]),
                BitVector::from_u8s(&[0, 1, 0]),
            ],
        );
        assert_eq!(s12, expected);
        let tau1 = x.f1_basis(&FaceId::new(vec![], vec![0, 2, 3])).unwrap();
        assert_eq!(tau1.dim(), 3);
        let line = simplex_complex(2, Compactification::Newton);
        assert_eq!(
            line.f1_basis(&FaceId::new(vec![], vec![0, 1, 2]))
                .unwrap()
                .dim(),
            2
        );
        assert!(x.f1_basis(&FaceId::new(vec![], vec![0, 9])).is_err());
    }

    #[test]
    fn projections_are_functorial() {
        let x = simplex_complex(3, Compactification::Newton);
        let ray = x
            .fan
            .rays
            .iter()
            .position(|r| r == &vec![-1, 0, 0])
            .unwrap();
        let eta = x.stratum_index(&[ray]).unwrap();
        let p = x.projection_matrix(0, eta).unwrap();
        assert_eq!(p.rows(), 2);
        assert_eq!(p.kernel().basis(), &[BitVector::from_u8s(&[1, 0, 0])]);
        assert_eq!(
            x.projection_matrix(eta, eta).unwrap(),
            Gf2Matrix::identity(2)
        );
        for (a, sa) in x.strata.iter().enumerate() {
            for (b, sb) in x.strata.iter().enumerate() {
                for (c, sc) in x.strata.iter().enumerate() {
                    let nested =
                        |u: &Stratum, v: &Stratum| u.cone.iter().all(|r| v.cone.contains(r));
                    if nested(sa, sb) && nested(sb, sc) {
                        let ab = x.projection_matrix(a, b).unwrap();
                        let bc = x.projection_matrix(b, c).unwrap();
                        assert_eq!(bc.mul(&ab), x.projection_matrix(a, c).unwrap());
                    }
                }
            }
        }
        let other = x.stratum_index(&[(ray + 1) % 4]).unwrap();
        assert!(matches!(
            x.projection_matrix(eta, other),
            Err(Error::ConesNotNested)
        ));
    }

    #[test]
    fn expected_dims_polynomial() {
        assert_eq!(expected_multitangent_dims(0, 2), vec![1, 2, 0]);
        assert_eq!(expected_multitangent_dims(2, 3), vec![1, 2, 1, 0]);
        assert_eq!(expected_multitangent_dims(1, 3), vec![1, 3, 2, 0]);
    }

    #[test]
    fn cubic_boundedness() {
        let t = staircase_triangulation(3);
        let fan = select_subfan(&t.polytope().unwrap(), &Compactification::Newton).unwrap();
        let x = build_complex(&t, &fan).unwrap();
        let bounded_edges = x
            .faces
            .iter()
            .filter(|f| f.id.sedentarity.is_empty() && f.dim == 1 && f.bounded)
            .count();
        assert_eq!(bounded_edges, 9);
        assert_eq!(x.interior_points().len(), 1);
    }

    #[test]
    fn explicit_cone_list() {
        let t = Triangulation::new(dilated_simplex_points(2, 1), vec![vec![0, 1, 2]]);
        let p = t.polytope().unwrap();
        let fan = select_subfan(&p, &Compactification::Cones(vec![vec![vec![-1, 0]]])).unwrap();
        let x = build_complex(&t, &fan).unwrap();
        assert_eq!(
            x.faces
                .iter()
                .filter(|f| !f.id.sedentarity.is_empty())
                .count(),
            1
        );
        assert!(select_subfan(&p, &Compactification::Cones(vec![vec![vec![1, 0]]])).is_err());
    }
}
