//! The augmentation filtration `K_p` of the sign cosheaf and the Viro maps
//! `bv_p: K_p → F_p`.

use crate::complex::TropicalComplex;
use crate::cosheaf::{
    assemble_complex, homology_dims, multitangent_map, multitangent_space, wedge, BettiTable,
    CosheafData, Flavor,
};
use crate::error::{Error, Result};
use crate::gf2::{BitVector, Gf2Matrix, Subspace};
use crate::phase::{
    extend_phase, sign_map, sign_space, w, AffineSignSpace, AuditReport, ExtendedPhase,
    RealPhaseStructure,
};

/// `y^S = Σ_{T ⊆ S} w_{θ + Σ_{i∈T} v_i}` for an anchor `θ` and a subset `S`
/// of a direction basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialElement {
    pub anchor: BitVector,
    pub directions: Vec<BitVector>,
}

impl MonomialElement {
    pub fn expand(&self) -> BitVector {
        let m = self.anchor.len();
        let mut out = BitVector::zeros(1 << m);
        for mask in 0..1usize << self.directions.len() {
            let mut eps = self.anchor.clone();
            for (i, v) in self.directions.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    eps.xor_assign(v);
                }
            }
            out.flip(eps.lex_index());
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.directions.len()
    }
}

/// Monomials `y^S`, `|S| ≥ p`, of an affine sign space.
pub fn monomials(space: &AffineSignSpace, p: usize) -> Vec<MonomialElement> {
    let basis = space.direction().basis();
    (0..1usize << basis.len())
        .filter(|mask| mask.count_ones() as usize >= p)
        .map(|mask| MonomialElement {
            anchor: space.base().clone(),
            directions: (0..basis.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| basis[i].clone())
                .collect(),
        })
        .collect()
}

/// `K_p` of a single affine sign space.
pub fn kp_of_space(space: &AffineSignSpace, p: usize) -> Subspace {
    Subspace::from_generators(
        1 << space.ambient_dim(),
        monomials(space, p).iter().map(MonomialElement::expand),
    )
}

/// `K_p(σ)` for a facet of any stratum.
pub fn kp_facet_space(
    x: &TropicalComplex,
    ext: &ExtendedPhase,
    facet: usize,
    p: usize,
) -> Result<Subspace> {
    let space = ext.facet_spaces[facet]
        .as_ref()
        .ok_or_else(|| Error::UnknownFace(format!("{} is not a facet", x.faces[facet].id)))?;
    Ok(kp_of_space(space, p))
}

/// `K_p(τ)`: the sum of `K_p` over the adjacent facets of the same stratum;
/// all of `S_E(τ)` for `p ≤ 0`.
pub fn kp_space(x: &TropicalComplex, ext: &ExtendedPhase, face: usize, p: i64) -> Result<Subspace> {
    if p <= 0 {
        return Ok(sign_space(x, ext, face));
    }
    let m = x.faces[face].ambient_dim;
    let mut out = Subspace::zero(1 << m);
    if p as usize > x.n {
        return Ok(out);
    }
    for &g in &x.faces[face].facets {
        for v in kp_facet_space(x, ext, g, p as usize)?.basis() {
            out.insert(v.clone());
        }
    }
    Ok(out)
}

/// `span{w_G : G a p-dimensional affine subspace of the space}`, by direct
/// enumeration. Exponential; only for cross-checks.
pub fn kp_bruteforce(space: &AffineSignSpace, p: usize) -> Subspace {
    let m = space.ambient_dim();
    let dir = space.direction();
    let mut subspaces: Vec<Subspace> = Vec::new();
    let nonzero: Vec<BitVector> = dir
        .elements()
        .into_iter()
        .filter(|v| !v.is_zero())
        .collect();
    let mut stack: Vec<(Subspace, usize)> = vec![(Subspace::zero(m), 0)];
    while let Some((s, start)) = stack.pop() {
        if s.dim() == p {
            if !subspaces.contains(&s) {
                subspaces.push(s);
            }
            continue;
        }
        for (i, v) in nonzero.iter().enumerate().skip(start) {
            if !s.contains(v) {
                let mut t = s.clone();
                t.insert(v.clone());
                stack.push((t, i + 1));
            }
        }
    }
    let mut out = Subspace::zero(1 << m);
    for s in &subspaces {
        for t in space.elements() {
            let mut g = BitVector::zeros(1 << m);
            for e in s.elements() {
                g.flip(e.xor(&t).lex_index());
            }
            out.insert(g);
        }
    }
    out
}

/// Generators of `K_p(τ)` with their images under `bv_p`.
fn bv_generators(
    x: &TropicalComplex,
    ext: &ExtendedPhase,
    face: usize,
    p: usize,
) -> (Vec<BitVector>, Vec<BitVector>) {
    let m = x.faces[face].ambient_dim;
    let target_len = crate::cosheaf::binomial(m, p);
    let mut sources = Vec::new();
    let mut images = Vec::new();
    for &g in &x.faces[face].facets {
        let space = ext.facet_spaces[g].as_ref().expect("facet space");
        for mono in monomials(space, p) {
            sources.push(mono.expand());
            images.push(if mono.degree() == p {
                wedge(&mono.directions, m)
            } else {
                BitVector::zeros(target_len)
            });
        }
    }
    (sources, images)
}

/// The Viro map `bv_p` on `K_p(τ)`, as an ambient matrix
/// `GF(2)^{2^m} → Λ^p GF(2)^m` that is valid on `K_p(τ)`.
pub fn bv_map(
    x: &TropicalComplex,
    ext: &ExtendedPhase,
    face: usize,
    p: usize,
) -> Result<Gf2Matrix> {
    let m = x.faces[face].ambient_dim;
    let target_len = crate::cosheaf::binomial(m, p);
    let (sources, images) = bv_generators(x, ext, face, p);
    let g = Gf2Matrix::from_columns(1 << m, &sources);
    let h = Gf2Matrix::from_columns(target_len, &images);
    for k in g.kernel().basis() {
        if !h.mul_vec(k).is_zero() {
            return Err(Error::BrokenCosheaf(format!(
                "bv_{p} is not well defined on {}",
                x.faces[face].id
            )));
        }
    }
    // Column at each pivot of K_p carries the image of that echelon basis
    // vector, so the matrix reads off echelon coordinates of v ∈ K_p.
    let kp = Subspace::from_generators(1 << m, sources.iter().cloned());
    let mut out = Gf2Matrix::zeros(target_len, 1 << m);
    for (b, &pivot) in kp.basis().iter().zip(kp.pivots()) {
        let c = g
            .solve(b)
            .expect("basis vector lies in the span of the generators");
        let image = h.mul_vec(&c);
        for i in image.ones() {
            out.set(i, pivot, true);
        }
    }
    Ok(out)
}

/// Applies `bv_p` to an element of `K_p(τ)`.
pub fn apply_bv(
    x: &TropicalComplex,
    ext: &ExtendedPhase,
    face: usize,
    p: usize,
    v: &BitVector,
) -> Result<BitVector> {
    let kp = kp_space(x, ext, face, p as i64)?;
    if !kp.contains(v) {
        return Err(Error::NotInSubspace(format!(
            "element is not in K_{p}({})",
            x.faces[face].id
        )));
    }
    Ok(bv_map(x, ext, face, p)?.mul_vec(v))
}

/// Checks exactness of `0 → K_{p+1} → K_p → F_p → 0` on every face,
/// naturality of `bv_p` and compatibility of `K_p` with the cosheaf maps.
pub fn verify_exact_commutative(
    x: &TropicalComplex,
    e: &RealPhaseStructure,
) -> Result<AuditReport> {
    let ext = extend_phase(x, e)?;
    let mut report = AuditReport::new("exactness");
    let faces = x.faces.len();
    let mut kp: Vec<Vec<Subspace>> = Vec::with_capacity(faces);
    let mut bv: Vec<Vec<Gf2Matrix>> = Vec::with_capacity(faces);
    for f in 0..faces {
        let spaces = (0..=x.n + 1)
            .map(|p| kp_space(x, &ext, f, p as i64))
            .collect::<Result<Vec<_>>>()?;
        let mut maps = Vec::new();
        for p in 0..=x.n {
            match bv_map(x, &ext, f, p) {
                Ok(m) => maps.push(m),
                Err(err) => {
                    report.check(false, || err.to_string());
                    maps.push(Gf2Matrix::zeros(
                        crate::cosheaf::binomial(x.faces[f].ambient_dim, p),
                        1 << x.faces[f].ambient_dim,
                    ));
                }
            }
        }
        kp.push(spaces);
        bv.push(maps);
    }
    for (f, face) in x.faces.iter().enumerate() {
        for p in 0..=x.n {
            let fp = multitangent_space(x, f, p)?;
            let image = Subspace::from_generators(
                fp.ambient_dim(),
                kp[f][p].basis().iter().map(|b| bv[f][p].mul_vec(b)),
            );
            report.check(image == fp, || {
                format!("bv_{p} on {} is not onto F_{p}", face.id)
            });
            let restricted = Gf2Matrix::from_columns(
                fp.ambient_dim(),
                &kp[f][p]
                    .basis()
                    .iter()
                    .map(|b| bv[f][p].mul_vec(b))
                    .collect::<Vec<_>>(),
            );
            let kernel = Subspace::from_generators(
                kp[f][p].ambient_dim(),
                restricted
                    .kernel()
                    .basis()
                    .iter()
                    .map(|c| kp[f][p].combination(c)),
            );
            report.check(kernel == kp[f][p + 1], || {
                format!("ker bv_{p} on {} differs from K_{}", face.id, p + 1)
            });
            report.check(kp[f][p].dim() - kp[f][p + 1].dim() == fp.dim(), || {
                format!("dim K_{p} − dim K_{} ≠ dim F_{p} on {}", p + 1, face.id)
            });
        }
        for &t in &face.boundary {
            let s_map = sign_map(x, f, t)?;
            for p in 0..=x.n {
                let f_map = multitangent_map(x, f, t, p)?;
                for b in kp[f][p].basis() {
                    let moved = s_map.mul_vec(b);
                    let inside = kp[t][p].contains(&moved);
                    report.check(inside, || {
                        format!(
                            "K_{p}({}) is not mapped into K_{p}({})",
                            face.id, x.faces[t].id
                        )
                    });
                    if inside {
                        let lhs = bv[t][p].mul_vec(&moved);
                        let rhs = f_map.mul_vec(&bv[f][p].mul_vec(b));
                        report.check(lhs == rhs, || {
                            format!(
                                "bv_{p} does not commute with {} -> {}",
                                face.id, x.faces[t].id
                            )
                        });
                    }
                }
            }
        }
    }
    Ok(report)
}

/// `K_p` as a subcosheaf of the sign cosheaf.
pub fn kp_cosheaf(x: &TropicalComplex, ext: &ExtendedPhase, p: i64) -> Result<CosheafData> {
    CosheafData::build(x, |f| kp_space(x, ext, f, p), |s, t| sign_map(x, s, t))
}

/// The quotient cosheaf `K_p / K_{p+1}`: each face carries the reduction of
/// `K_p` modulo the echelon basis of `K_{p+1}`.
pub fn quotient_cosheaf(x: &TropicalComplex, ext: &ExtendedPhase, p: i64) -> Result<CosheafData> {
    let upper: Vec<Subspace> = (0..x.faces.len())
        .map(|f| kp_space(x, ext, f, p + 1))
        .collect::<Result<_>>()?;
    CosheafData::build(
        x,
        |f| {
            let lower = kp_space(x, ext, f, p)?;
            Ok(Subspace::from_generators(
                lower.ambient_dim(),
                lower.basis().iter().map(|b| upper[f].reduce(b)),
            ))
        },
        |s, t| {
            let map = sign_map(x, s, t)?;
            let cols: Vec<BitVector> = (0..map.cols())
                .map(|i| upper[t].reduce(&map.column(i)))
                .collect();
            Ok(Gf2Matrix::from_columns(map.rows(), &cols))
        },
    )
}

/// `H_q(X; K_p, K_{p+1})` through the explicit quotient complex.
pub fn relative_homology(
    x: &TropicalComplex,
    e: &RealPhaseStructure,
    p: usize,
    flavor: Flavor,
) -> Result<BettiTable> {
    let ext = extend_phase(x, e)?;
    if p > x.n {
        return Ok(BettiTable::zeros(x.n + 1));
    }
    Ok(homology_dims(&assemble_complex(
        x,
        &quotient_cosheaf(x, &ext, p as i64)?,
        flavor,
    )?))
}

/// The indicator vector `w_G` of a set of sign vectors.
pub fn indicator(elements: &[BitVector]) -> BitVector {
    let m = elements.first().map_or(0, BitVector::len);
    let mut out = BitVector::zeros(1 << m);
    for e in elements {
        out.xor_assign(&w(e));
    }
    out
}
