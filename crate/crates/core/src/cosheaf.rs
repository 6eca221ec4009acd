//! Cellular cosheaves over GF(2) on a tropical complex, their chain
//! complexes, and the multi-tangent cosheaves `F_p`.

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{expected_multitangent_dims, TropicalComplex};
use crate::error::{Error, Result};
use crate::gf2::{BitVector, Gf2Matrix, Subspace};

/// Which homology theory a chain complex computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flavor {
    Ordinary,
    BorelMoore,
}

impl Flavor {
    /// Ordinary homology for compact complexes, Borel-Moore otherwise.
    pub fn natural(x: &TropicalComplex) -> Flavor {
        if x.complete {
            Flavor::Ordinary
        } else {
            Flavor::BorelMoore
        }
    }
}

/// Lexicographically ordered `p`-subsets of `0..m`.
pub fn subsets(m: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if p <= m {
        rec(0, m, p, &mut Vec::new(), &mut out);
    }
    out
}

pub fn binomial(m: usize, p: usize) -> usize {
    if p > m {
        return 0;
    }
    (0..p).fold(1, |acc, i| acc * (m - i) / (i + 1))
}

/// `v_1 ∧ ... ∧ v_p` in the coordinates of `Λ^p GF(2)^m` (lexicographic
/// subsets): each entry is a `p x p` minor.
pub fn wedge(vectors: &[BitVector], m: usize) -> BitVector {
    let p = vectors.len();
    let rows: Vec<Vec<u8>> = vectors.iter().map(BitVector::to_u8s).collect();
    let all_rows: Vec<usize> = (0..p).collect();
    let mat = if p == 0 {
        Gf2Matrix::zeros(0, m)
    } else {
        Gf2Matrix::from_rows(&rows)
    };
    BitVector::from_bits(
        subsets(m, p)
            .iter()
            .map(|cols| mat.submatrix(&all_rows, cols).det()),
    )
}

/// The induced map `Λ^p A`.
pub fn exterior_power(a: &Gf2Matrix, p: usize) -> Gf2Matrix {
    let row_sets = subsets(a.rows(), p);
    let col_sets = subsets(a.cols(), p);
    let mut out = Gf2Matrix::zeros(row_sets.len(), col_sets.len());
    for (i, r) in row_sets.iter().enumerate() {
        for (j, c) in col_sets.iter().enumerate() {
            if a.submatrix(r, c).det() {
                out.set(i, j, true);
            }
        }
    }
    out
}

/// `F_p` of a face: the span, over adjacent facets of the same stratum, of
/// the `p`-th exterior powers of their tangent spaces.
pub fn multitangent_space(x: &TropicalComplex, face: usize, p: usize) -> Result<Subspace> {
    if p > x.n {
        return Err(Error::OutOfRange(format!("p = {p}")));
    }
    let f = &x.faces[face];
    let m = f.ambient_dim;
    let mut span = Subspace::zero(binomial(m, p));
    if p == 0 {
        span.insert(BitVector::from_u8s(&[1]));
        return Ok(span);
    }
    for &g in &f.facets {
        let basis = &x.faces[g].tangent_basis;
        for s in subsets(basis.len(), p) {
            let vs: Vec<BitVector> = s.iter().map(|&i| basis[i].clone()).collect();
            span.insert(wedge(&vs, m));
        }
    }
    Ok(span)
}

/// The cosheaf map `F_p(σ) → F_p(τ)` on ambient wedge coordinates.
pub fn multitangent_map(
    x: &TropicalComplex,
    sigma: usize,
    tau: usize,
    p: usize,
) -> Result<Gf2Matrix> {
    if !x.is_boundary_pair(sigma, tau) {
        return Err(Error::NotBoundaryPair(
            x.faces[tau].id.to_string(),
            x.faces[sigma].id.to_string(),
        ));
    }
    if p > x.n {
        return Err(Error::OutOfRange(format!("p = {p}")));
    }
    if x.faces[sigma].stratum == x.faces[tau].stratum {
        return Ok(Gf2Matrix::identity(binomial(x.faces[sigma].ambient_dim, p)));
    }
    Ok(exterior_power(&x.face_projection(sigma, tau)?, p))
}

/// A cosheaf on a tropical complex: a subspace of an ambient coordinate
/// space per face, and an ambient map per boundary pair. `maps[σ][k]`
/// belongs to the pair `(σ, faces[σ].boundary[k])`.
#[derive(Debug, Clone)]
pub struct CosheafData {
    pub spaces: Vec<Subspace>,
    pub maps: Vec<Vec<Gf2Matrix>>,
}

impl CosheafData {
    /// Builds a cosheaf from per-face spaces and a map rule.
    pub fn build<S, M>(x: &TropicalComplex, space: S, map: M) -> Result<Self>
    where
        S: Fn(usize) -> Result<Subspace> + Sync,
        M: Fn(usize, usize) -> Result<Gf2Matrix> + Sync,
    {
        let spaces = (0..x.faces.len())
            .into_par_iter()
            .map(&space)
            .collect::<Result<Vec<_>>>()?;
        let maps = (0..x.faces.len())
            .into_par_iter()
            .map(|s| {
                x.faces[s]
                    .boundary
                    .iter()
                    .map(|&t| map(s, t))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CosheafData { spaces, maps })
    }

    pub fn map(&self, x: &TropicalComplex, sigma: usize, tau: usize) -> Option<&Gf2Matrix> {
        let k = x.faces[sigma].boundary.iter().position(|&t| t == tau)?;
        Some(&self.maps[sigma][k])
    }

    /// Checks that maps land in the target spaces and that all squares
    /// `σ → τ_i → ρ` commute on `G(σ)`. Returns the violations.
    pub fn check(&self, x: &TropicalComplex) -> Vec<String> {
        let mut out = Vec::new();
        for (s, face) in x.faces.iter().enumerate() {
            for (k, &t) in face.boundary.iter().enumerate() {
                for b in self.spaces[s].basis() {
                    if !self.spaces[t].contains(&self.maps[s][k].mul_vec(b)) {
                        out.push(format!(
                            "map {} -> {} leaves the target space",
                            face.id, x.faces[t].id
                        ));
                        break;
                    }
                }
            }
            let mut seen: Vec<(usize, Gf2Matrix)> = Vec::new();
            for (k, &t) in face.boundary.iter().enumerate() {
                for (k2, &r) in x.faces[t].boundary.iter().enumerate() {
                    let comp = self.maps[t][k2].mul(&self.maps[s][k]);
                    if let Some((_, prev)) = seen.iter().find(|(rr, _)| *rr == r) {
                        let differs = self.spaces[s]
                            .basis()
                            .iter()
                            .any(|b| prev.mul_vec(b) != comp.mul_vec(b));
                        if differs {
                            out.push(format!(
                                "square {} -> {} does not commute",
                                face.id, x.faces[r].id
                            ));
                        }
                    } else {
                        seen.push((r, comp));
                    }
                }
            }
        }
        out
    }
}

/// The `F_p` cosheaf.
pub fn fp_cosheaf(x: &TropicalComplex, p: usize) -> Result<CosheafData> {
    CosheafData::build(
        x,
        |f| multitangent_space(x, f, p),
        |s, t| multitangent_map(x, s, t, p),
    )
}

/// Position of a face's basis inside a chain group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub face: usize,
    pub offset: usize,
    pub len: usize,
}

/// Graded GF(2) chain complex; `boundaries[q]: C_q → C_{q−1}`
/// (`boundaries[0]` has zero rows).
#[derive(Debug, Clone)]
pub struct ChainComplex {
    pub dims: Vec<usize>,
    pub boundaries: Vec<Gf2Matrix>,
    pub blocks: Vec<Vec<Block>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BettiTable {
    pub dims: Vec<usize>,
}

impl BettiTable {
    pub fn zeros(len: usize) -> Self {
        BettiTable { dims: vec![0; len] }
    }

    pub fn euler_char(&self) -> i64 {
        alternating(&self.dims)
    }

    pub fn total(&self) -> usize {
        self.dims.iter().sum()
    }
}

fn alternating(v: &[usize]) -> i64 {
    v.iter()
        .enumerate()
        .map(|(q, &d)| if q % 2 == 0 { d as i64 } else { -(d as i64) })
        .sum()
}

/// Assembles the cellular chain complex of a cosheaf and checks `∂² = 0`.
pub fn assemble_complex(
    x: &TropicalComplex,
    g: &CosheafData,
    flavor: Flavor,
) -> Result<ChainComplex> {
    if flavor == Flavor::Ordinary && !x.complete {
        return Err(Error::NonCompact);
    }
    let top = x.n;
    let mut blocks: Vec<Vec<Block>> = vec![Vec::new(); top + 1];
    let mut dims = vec![0; top + 1];
    let mut position = vec![0; x.faces.len()];
    for (i, f) in x.faces.iter().enumerate() {
        let len = g.spaces[i].dim();
        position[i] = dims[f.dim];
        blocks[f.dim].push(Block {
            face: i,
            offset: dims[f.dim],
            len,
        });
        dims[f.dim] += len;
    }
    let mut boundaries = vec![Gf2Matrix::zeros(0, dims[0])];
    for q in 1..=top {
        let mut d = Gf2Matrix::zeros(dims[q - 1], dims[q]);
        for b in &blocks[q] {
            let face = &x.faces[b.face];
            for (j, v) in g.spaces[b.face].basis().iter().enumerate() {
                for (k, &t) in face.boundary.iter().enumerate() {
                    let image = g.maps[b.face][k].mul_vec(v);
                    let coords = g.spaces[t].coordinates(&image).ok_or_else(|| {
                        Error::BrokenCosheaf(format!(
                            "image of {} in {} leaves the target space",
                            face.id, x.faces[t].id
                        ))
                    })?;
                    for c in coords.ones() {
                        d.set(
                            position[t] + c,
                            b.offset + j,
                            !d.get(position[t] + c, b.offset + j),
                        );
                    }
                }
            }
        }
        boundaries.push(d);
    }
    for q in 2..=top {
        if !boundaries[q - 1].mul(&boundaries[q]).is_zero() {
            return Err(Error::BrokenCosheaf(format!("∂∘∂ ≠ 0 in degree {q}")));
        }
    }
    Ok(ChainComplex {
        dims,
        boundaries,
        blocks,
    })
}

impl ChainComplex {
    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn boundary_ranks(&self) -> Vec<usize> {
        self.boundaries.par_iter().map(Gf2Matrix::rank).collect()
    }

    pub fn euler_char(&self) -> i64 {
        alternating(&self.dims)
    }
}

pub fn homology_dims(c: &ChainComplex) -> BettiTable {
    let ranks = c.boundary_ranks();
    let dims = (0..c.dims.len())
        .map(|q| c.dims[q] - ranks[q] - ranks.get(q + 1).copied().unwrap_or(0))
        .collect();
    BettiTable { dims }
}

pub fn euler_char(c: &ChainComplex) -> i64 {
    c.euler_char()
}

/// Tropical homology: `table[p].dims[q] = dim H_q(X; F_p)`.
pub fn tropical_homology(x: &TropicalComplex, flavor: Flavor) -> Result<Vec<BettiTable>> {
    (0..=x.n)
        .map(|p| {
            Ok(homology_dims(&assemble_complex(
                x,
                &fp_cosheaf(x, p)?,
                flavor,
            )?))
        })
        .collect()
}

/// `Σ_p χ(C(X; F_p))`, the value of `χ_y` at `y = −1`.
pub fn chi_y_at_minus_one(x: &TropicalComplex) -> Result<i64> {
    let flavor = Flavor::natural(x);
    let mut total = 0;
    for p in 0..=x.n {
        total += assemble_complex(x, &fp_cosheaf(x, p)?, flavor)?.euler_char();
    }
    Ok(total)
}

/// `(dim F_0(f), ..., dim F_n(f))`, checked against the closed formula.
pub fn euler_poly_face(x: &TropicalComplex, face: usize) -> Result<Vec<usize>> {
    let f = &x.faces[face];
    let dims: Vec<usize> = (0..=x.n)
        .map(|p| multitangent_space(x, face, p).map(|s| s.dim()))
        .collect::<Result<_>>()?;
    let expected = expected_multitangent_dims(f.dim, f.ambient_dim);
    for (p, &d) in dims.iter().enumerate() {
        let e = expected.get(p).copied().unwrap_or(0);
        if d as i64 != e {
            return Err(Error::BrokenCosheaf(format!(
                "dim F_{p}({}) = {d}, expected {e}",
                f.id
            )));
        }
    }
    Ok(dims)
}
