//! Plane curves: cycles of bounded regions, twisted edges, the pairing
//! matrix of the first differential, component counts and Haas' criterion.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::TropicalComplex;
use crate::error::{Error, Result};
use crate::gf2::{BitVector, Gf2Matrix};
use crate::lattice::LatticePoint;
use crate::phase::{phase_from_signs, AffineSignSpace, RealPhaseStructure, SignDistribution};

fn require_curve(x: &TropicalComplex) -> Result<()> {
    if x.n == 1 {
        Ok(())
    } else {
        Err(Error::NotACurve)
    }
}

fn diff(a: &[i64], b: &[i64]) -> [i64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn perp(v: [i64; 2]) -> [i64; 2] {
    [-v[1], v[0]]
}

fn det(u: [i64; 2], v: [i64; 2]) -> i64 {
    u[0] * v[1] - u[1] * v[0]
}

/// Half-plane then cross product: a total order by angle in `[0, 2π)`.
fn angle_cmp(u: [i64; 2], v: [i64; 2]) -> Ordering {
    let upper = |w: [i64; 2]| w[1] > 0 || (w[1] == 0 && w[0] > 0);
    match (upper(u), upper(v)) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => 0.cmp(&det(u, v)),
    }
}

/// Bounded sedentarity-zero edges, in face order.
pub fn bounded_edges(x: &TropicalComplex) -> Vec<usize> {
    x.top_facets()
        .into_iter()
        .filter(|&f| x.faces[f].bounded)
        .collect()
}

/// One cycle per interior lattice point: the edges of the curve dual to
/// the triangulation edges at that point, in angular order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleBasis {
    pub centers: Vec<usize>,
    pub cycles: Vec<Vec<usize>>,
}

pub fn cycle_basis(x: &TropicalComplex) -> Result<CycleBasis> {
    require_curve(x)?;
    let pts = &x.triangulation.points;
    let centers = x.interior_points();
    let mut cycles = Vec::new();
    for &v in &centers {
        let mut edges: Vec<(usize, [i64; 2])> = x
            .top_facets()
            .into_iter()
            .filter_map(|f| {
                let cell = &x.faces[f].id.dual_cell;
                let other = if cell[0] == v {
                    cell[1]
                } else if cell[1] == v {
                    cell[0]
                } else {
                    return None;
                };
                Some((f, diff(&pts[other], &pts[v])))
            })
            .collect();
        edges.sort_by(|a, b| angle_cmp(a.1, b.1));
        cycles.push(edges.into_iter().map(|(f, _)| f).collect());
    }
    Ok(CycleBasis { centers, cycles })
}

fn facet_at(x: &TropicalComplex, a: usize, b: usize) -> usize {
    x.face_index(&crate::complex::FaceId::new(vec![], vec![a, b]))
        .expect("triangle edges are faces")
}

/// The two triangles `[a, b, c]` adjacent to an interior edge `[a, b]`.
fn opposite_vertices(x: &TropicalComplex, edge: usize) -> Vec<usize> {
    let cell = &x.faces[edge].id.dual_cell;
    x.faces[edge]
        .boundary
        .iter()
        .filter(|&&t| x.faces[t].id.sedentarity.is_empty())
        .map(|&t| {
            *x.faces[t]
                .id
                .dual_cell
                .iter()
                .find(|v| !cell.contains(v))
                .expect("triangle has a third vertex")
        })
        .collect()
}

/// Outward primitive direction, at the vertex dual to `[p, q, r]`, of the
/// curve edge dual to `[p, r]`.
fn outward(pts: &[LatticePoint], p: usize, r: usize, q: usize) -> [i64; 2] {
    let nu = perp(diff(&pts[r], &pts[p]));
    let away = diff(&pts[p], &pts[q]);
    if nu[0] * away[0] + nu[1] * away[1] < 0 {
        [-nu[0], -nu[1]]
    } else {
        nu
    }
}

fn space(e: &RealPhaseStructure, f: usize) -> Result<&AffineSignSpace> {
    e.spaces
        .get(&f)
        .ok_or_else(|| Error::InvalidPhase(vec![format!("no sign space on facet {f}")]))
}

/// Whether the edge is twisted, by the half-plane rule, evaluated for every
/// sign vector of its space; also returns the endpoint-rule verdict.
fn edge_twist(x: &TropicalComplex, e: &RealPhaseStructure, edge: usize) -> Result<(bool, bool)> {
    let pts = &x.triangulation.points;
    let cell = &x.faces[edge].id.dual_cell;
    let (a, b) = (cell[0], cell[1]);
    let u = perp(diff(&pts[b], &pts[a]));
    let opposite = opposite_vertices(x, edge);
    if opposite.len() != 2 {
        return Err(Error::NotABoundedEdge(x.faces[edge].id.to_string()));
    }
    let own = space(e, edge)?;
    let mut verdict: Option<bool> = None;
    for eps in own.elements() {
        let mut sides = Vec::new();
        for &c in &opposite {
            let on_a = space(e, facet_at(x, a, c))?.contains(&eps);
            let on_b = space(e, facet_at(x, b, c))?.contains(&eps);
            let d = match (on_a, on_b) {
                (true, false) => outward(pts, a, c, b),
                (false, true) => outward(pts, b, c, a),
                _ => {
                    return Err(Error::InvalidPhase(vec![format!(
                        "no unique continuation of {} at the vertex dual to {:?}",
                        x.faces[edge].id,
                        [a, b, c]
                    )]))
                }
            };
            sides.push(det(u, d).signum());
        }
        let twisted = sides[0] * sides[1] < 0;
        match verdict {
            None => verdict = Some(twisted),
            Some(v) if v != twisted => {
                return Err(Error::TwistDisagreement(format!(
                    "twist of {} depends on the chosen sign vector",
                    x.faces[edge].id
                )))
            }
            _ => {}
        }
    }
    // Endpoint rule: the sign vectors shared with the edge dual to [a, c]
    // at both ends differ exactly on twisted edges.
    let meet = |c: usize| -> Result<BitVector> {
        let other = space(e, facet_at(x, a, c))?;
        let common: Vec<BitVector> = own
            .elements()
            .into_iter()
            .filter(|v| other.contains(v))
            .collect();
        if common.len() != 1 {
            return Err(Error::InvalidPhase(vec![format!(
                "edges {} and {} do not meet in one sign vector",
                x.faces[edge].id,
                x.faces[facet_at(x, a, c)].id
            )]));
        }
        Ok(common[0].clone())
    };
    let endpoint = meet(opposite[0])? != meet(opposite[1])?;
    Ok((verdict.expect("sign spaces are non-empty"), endpoint))
}

/// Twisted bounded edges of a real phase structure.
pub fn twists_from_phase(x: &TropicalComplex, e: &RealPhaseStructure) -> Result<Vec<usize>> {
    require_curve(x)?;
    let mut out = Vec::new();
    for edge in bounded_edges(x) {
        let (twisted, endpoint) = edge_twist(x, e, edge)?;
        if twisted != endpoint {
            return Err(Error::TwistDisagreement(format!(
                "half-plane and endpoint rules disagree on {}",
                x.faces[edge].id
            )));
        }
        if twisted {
            out.push(edge);
        }
    }
    Ok(out)
}

fn indicator(edges: &[usize], twists: &[usize]) -> BitVector {
    BitVector::from_bits(edges.iter().map(|e| twists.contains(e)))
}

/// Signs whose phase has exactly the given twists. Twisting is affine in
/// the signs over GF(2), so this is a linear solve.
pub fn signs_for_twists(x: &TropicalComplex, twists: &[usize]) -> Result<SignDistribution> {
    require_curve(x)?;
    let edges = bounded_edges(x);
    check_twist_set(x, twists)?;
    let points = x.triangulation.points.len();
    let twist_vector = |s: &SignDistribution| -> Result<BitVector> {
        let t = twists_from_phase(x, &phase_from_signs(x, s)?)?;
        Ok(indicator(&edges, &t))
    };
    let zero = SignDistribution {
        minus: vec![false; points],
    };
    let t0 = twist_vector(&zero)?;
    let mut columns = Vec::with_capacity(points);
    for i in 0..points {
        let mut s = zero.clone();
        s.minus[i] = true;
        columns.push(twist_vector(&s)?.xor(&t0));
    }
    let l = Gf2Matrix::from_columns(edges.len(), &columns);
    let target = indicator(&edges, twists).xor(&t0);
    let solution = l.solve(&target).ok_or(Error::InadmissibleTwists)?;
    let signs = SignDistribution {
        minus: (0..points).map(|i| solution.get(i)).collect(),
    };
    let mut realized = twists_from_phase(x, &phase_from_signs(x, &signs)?)?;
    let mut wanted = twists.to_vec();
    realized.sort_unstable();
    wanted.sort_unstable();
    if realized != wanted {
        return Err(Error::TwistDisagreement(
            "twisting is not affine in the signs".into(),
        ));
    }
    Ok(signs)
}

pub fn phase_for_twists(x: &TropicalComplex, twists: &[usize]) -> Result<RealPhaseStructure> {
    phase_from_signs(x, &signs_for_twists(x, twists)?)
}

fn check_twist_set(x: &TropicalComplex, twists: &[usize]) -> Result<()> {
    let edges = bounded_edges(x);
    for t in twists {
        if !edges.contains(t) {
            let name = x
                .faces
                .get(*t)
                .map_or_else(|| t.to_string(), |f| f.id.to_string());
            return Err(Error::NotABoundedEdge(name));
        }
    }
    Ok(())
}

fn edge_vector_mod2(x: &TropicalComplex, edge: usize) -> BitVector {
    x.faces[edge].tangent_basis[0].clone()
}

/// `Σ_{e ∈ T ∩ γ} v_e = 0 mod 2` on every basis cycle.
pub fn is_admissible(x: &TropicalComplex, twists: &[usize]) -> Result<bool> {
    let basis = cycle_basis(x)?;
    check_twist_set(x, twists)?;
    Ok(basis.cycles.iter().all(|cycle| {
        let mut sum = BitVector::zeros(2);
        for e in cycle.iter().filter(|e| twists.contains(e)) {
            sum.xor_assign(&edge_vector_mod2(x, *e));
        }
        sum.is_zero()
    }))
}

/// The first differential in the cycle basis and its dual basis:
/// `M_ii = |T ∩ γ_i|`, `M_ij = |T ∩ γ_i ∩ γ_j|`, mod 2.
pub fn d1_matrix(x: &TropicalComplex, twists: &[usize]) -> Result<Gf2Matrix> {
    if !is_admissible(x, twists)? {
        return Err(Error::InadmissibleTwists);
    }
    let basis = cycle_basis(x)?;
    Ok(d1_from_basis(&basis, twists))
}

fn d1_from_basis(basis: &CycleBasis, twists: &[usize]) -> Gf2Matrix {
    let g = basis.cycles.len();
    let mut m = Gf2Matrix::zeros(g, g);
    for i in 0..g {
        for j in 0..g {
            let shared: Vec<&usize> = basis.cycles[i]
                .iter()
                .filter(|e| i == j || basis.cycles[j].contains(e))
                .collect();
            assert!(
                i == j || shared.len() <= 1,
                "two bounded regions share more than one edge"
            );
            let count = shared.iter().filter(|e| twists.contains(e)).count();
            m.set(i, j, count % 2 == 1);
        }
    }
    m
}

/// Number of connected components of the real curve: `dim ker ∂_1 + 1`.
pub fn component_count(x: &TropicalComplex, twists: &[usize]) -> Result<usize> {
    let m = d1_matrix(x, twists)?;
    Ok(m.kernel().dim() + 1)
}

/// Bounded edges split into exposed ones (dual edge touching the boundary
/// of the polygon) and the rest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExposedEdges {
    pub exposed: Vec<usize>,
    pub hidden: Vec<usize>,
}

pub fn exposed_edges(x: &TropicalComplex) -> Result<ExposedEdges> {
    require_curve(x)?;
    let (exposed, hidden) = bounded_edges(x).into_iter().partition(|&e| {
        x.faces[e]
            .id
            .dual_cell
            .iter()
            .any(|&p| x.polytope.is_on_boundary(p))
    });
    Ok(ExposedEdges { exposed, hidden })
}

/// Haas' criterion: no twist on a non-exposed edge and an even number of
/// twists on every basis cycle.
pub fn haas_predicate(x: &TropicalComplex, twists: &[usize]) -> Result<bool> {
    if !is_admissible(x, twists)? {
        return Err(Error::InadmissibleTwists);
    }
    let hidden = exposed_edges(x)?.hidden;
    let basis = cycle_basis(x)?;
    Ok(twists.iter().all(|t| !hidden.contains(t))
        && basis
            .cycles
            .iter()
            .all(|c| c.iter().filter(|e| twists.contains(e)).count() % 2 == 0))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumeratedTwists {
    pub twists: Vec<usize>,
    pub components: usize,
    pub haas: bool,
}

pub const DEFAULT_CAP: usize = 20;

/// All admissible twist sets, with component counts and Haas' verdict.
pub fn enumerate_admissible(x: &TropicalComplex, cap: usize) -> Result<Vec<EnumeratedTwists>> {
    require_curve(x)?;
    let edges = bounded_edges(x);
    if edges.len() > cap {
        return Err(Error::CapExceeded {
            edges: edges.len(),
            cap,
        });
    }
    let basis = cycle_basis(x)?;
    let hidden = exposed_edges(x)?.hidden;
    let vectors: Vec<BitVector> = edges.iter().map(|&e| edge_vector_mod2(x, e)).collect();
    let position = |e: &usize| {
        edges
            .iter()
            .position(|f| f == e)
            .expect("cycle edges are bounded")
    };
    let cycles: Vec<Vec<usize>> = basis
        .cycles
        .iter()
        .map(|c| c.iter().map(position).collect())
        .collect();
    let hidden: Vec<usize> = hidden.iter().map(position).collect();
    let mut out: Vec<EnumeratedTwists> = (0..1u64 << edges.len())
        .into_par_iter()
        .filter_map(|mask| {
            let on = |i: usize| mask >> i & 1 == 1;
            for c in &cycles {
                let mut sum = BitVector::zeros(2);
                for &i in c.iter().filter(|&&i| on(i)) {
                    sum.xor_assign(&vectors[i]);
                }
                if !sum.is_zero() {
                    return None;
                }
            }
            let twists: Vec<usize> = (0..edges.len())
                .filter(|&i| on(i))
                .map(|i| edges[i])
                .collect();
            let m = d1_from_basis(&basis, &twists);
            let haas = hidden.iter().all(|&i| !on(i))
                && cycles
                    .iter()
                    .all(|c| c.iter().filter(|&&i| on(i)).count() % 2 == 0);
            Some(EnumeratedTwists {
                components: m.kernel().dim() + 1,
                twists,
                haas,
            })
        })
        .collect();
    out.sort_by(|a, b| a.twists.cmp(&b.twists));
    Ok(out)
}
