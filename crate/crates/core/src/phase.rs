//! Real phase structures, the sign cosheaf and real Betti numbers.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use crate::complex::TropicalComplex;
use crate::cosheaf::{
    assemble_complex, homology_dims, multitangent_space, BettiTable, CosheafData, Flavor,
};
use crate::error::{Error, Result};
use crate::gf2::{BitVector, Gf2Matrix, Subspace};

/// A Viro sign per lattice point; `true` stands for `−`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignDistribution {
    pub minus: Vec<bool>,
}

impl SignDistribution {
    pub fn parse<S: AsRef<str>>(signs: &[S]) -> Result<Self> {
        let minus = signs
            .iter()
            .map(|s| match s.as_ref() {
                "+" => Ok(false),
                "-" => Ok(true),
                other => Err(Error::Instance(format!(
                    "sign must be \"+\" or \"-\", got {other:?}"
                ))),
            })
            .collect::<Result<_>>()?;
        Ok(SignDistribution { minus })
    }

    pub fn flipped(&self) -> Self {
        SignDistribution {
            minus: self.minus.iter().map(|b| !b).collect(),
        }
    }

    pub fn to_strings(&self) -> Vec<&'static str> {
        self.minus
            .iter()
            .map(|&m| if m { "-" } else { "+" })
            .collect()
    }
}

/// `base + direction`, with the base reduced modulo the direction so that
/// equal sets have equal representations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSignSpace {
    base: BitVector,
    direction: Subspace,
}

impl AffineSignSpace {
    pub fn new(base: BitVector, direction: Subspace) -> Self {
        assert_eq!(
            base.len(),
            direction.ambient_dim(),
            "base outside the ambient space"
        );
        let base = direction.reduce(&base);
        AffineSignSpace { base, direction }
    }

    pub fn base(&self) -> &BitVector {
        &self.base
    }

    pub fn direction(&self) -> &Subspace {
        &self.direction
    }

    pub fn ambient_dim(&self) -> usize {
        self.direction.ambient_dim()
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.direction.contains(&v.xor(&self.base))
    }

    pub fn elements(&self) -> Vec<BitVector> {
        let mut out: Vec<BitVector> = self
            .direction
            .elements()
            .iter()
            .map(|d| d.xor(&self.base))
            .collect();
        out.sort_by_key(BitVector::lex_index);
        out
    }

    pub fn image(&self, a: &Gf2Matrix) -> AffineSignSpace {
        let dir = Subspace::from_generators(
            a.rows(),
            self.direction.basis().iter().map(|b| a.mul_vec(b)),
        );
        AffineSignSpace::new(a.mul_vec(&self.base), dir)
    }
}

/// An affine sign space on every sedentarity-zero facet (keyed by face index).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealPhaseStructure {
    pub spaces: BTreeMap<usize, AffineSignSpace>,
}

fn edge_vector(x: &TropicalComplex, facet: usize) -> BitVector {
    let d = x.faces[facet]
        .edge_direction
        .as_ref()
        .expect("facet has a dual edge");
    BitVector::from_u8s(&d.iter().map(|v| v.rem_euclid(2) as u8).collect::<Vec<_>>())
}

/// Viro's rule: the facet dual to `[u, v]` gets `{ε : ε·(u − v) = c}` with
/// `c = 0` when the signs at `u` and `v` differ and `c = 1` otherwise.
pub fn phase_from_signs(
    x: &TropicalComplex,
    signs: &SignDistribution,
) -> Result<RealPhaseStructure> {
    let points = x.triangulation.points.len();
    if signs.minus.len() < points {
        return Err(Error::MissingSign(signs.minus.len()));
    }
    let mut spaces = BTreeMap::new();
    for f in x.top_facets() {
        let face = &x.faces[f];
        let (u, v) = (face.id.dual_cell[0], face.id.dual_cell[1]);
        let d = edge_vector(x, f);
        let base = if signs.minus[u] != signs.minus[v] {
            BitVector::zeros(d.len())
        } else {
            BitVector::unit(
                d.len(),
                d.first_one().expect("primitive edge is non-zero mod 2"),
            )
        };
        spaces.insert(f, AffineSignSpace::new(base, face.tangent()));
    }
    Ok(RealPhaseStructure { spaces })
}

/// Builds a phase from one base vector per sedentarity-zero facet.
pub fn phase_from_bases(
    x: &TropicalComplex,
    bases: &BTreeMap<usize, BitVector>,
) -> Result<RealPhaseStructure> {
    let mut spaces = BTreeMap::new();
    for f in x.top_facets() {
        let face = &x.faces[f];
        let base = bases.get(&f).ok_or_else(|| {
            Error::InvalidPhase(vec![format!("no sign vector given for facet {}", face.id)])
        })?;
        if base.len() != face.ambient_dim {
            return Err(Error::InvalidPhase(vec![format!(
                "sign vector for {} has length {}, expected {}",
                face.id,
                base.len(),
                face.ambient_dim
            )]));
        }
        spaces.insert(f, AffineSignSpace::new(base.clone(), face.tangent()));
    }
    if let Some(extra) = bases.keys().find(|k| !spaces.contains_key(k)) {
        return Err(Error::InvalidPhase(vec![format!(
            "{} is not a sedentarity-zero facet",
            x.faces[*extra].id
        )]));
    }
    Ok(RealPhaseStructure { spaces })
}

/// Checks the codimension-one matching condition: around every
/// sedentarity-zero face of dimension `n − 1`, every sign vector of the
/// three adjacent spaces lies in exactly two of them.
pub fn validate_phase(
    x: &TropicalComplex,
    e: &RealPhaseStructure,
) -> std::result::Result<(), Vec<String>> {
    let mut violations = Vec::new();
    for f in x.top_facets() {
        match e.spaces.get(&f) {
            None => violations.push(format!("facet {} has no sign space", x.faces[f].id)),
            Some(s) if s.direction() != &x.faces[f].tangent() => violations.push(format!(
                "sign space of {} is not parallel to its tangent space",
                x.faces[f].id
            )),
            _ => {}
        }
    }
    if !violations.is_empty() {
        return Err(violations);
    }
    for face in &x.faces {
        if !face.id.sedentarity.is_empty() || face.dim + 1 != x.n || face.dual_cell_dim() != 2 {
            continue;
        }
        let adjacent: Vec<&AffineSignSpace> = face.facets.iter().map(|g| &e.spaces[g]).collect();
        if adjacent.len() != 3 {
            violations.push(format!(
                "{} has {} adjacent facets, expected 3",
                face.id,
                adjacent.len()
            ));
            continue;
        }
        let mut union: Vec<BitVector> = adjacent.iter().flat_map(|s| s.elements()).collect();
        union.sort_by_key(BitVector::lex_index);
        union.dedup();
        for eps in union {
            let count = adjacent.iter().filter(|s| s.contains(&eps)).count();
            if count != 2 {
                violations.push(format!(
                    "sign vector {} lies in {count} of the spaces around {}",
                    bits(&eps),
                    face.id
                ));
            }
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

pub(crate) fn bits(v: &BitVector) -> String {
    v.to_u8s().iter().map(|b| char::from(b'0' + b)).collect()
}

/// Recovers a sign distribution (with the first point `+`) by propagating
/// along triangulation edges.
pub fn signs_from_phase(x: &TropicalComplex, e: &RealPhaseStructure) -> Result<SignDistribution> {
    let points = x.triangulation.points.len();
    let mut adjacency: Vec<Vec<(usize, bool)>> = vec![Vec::new(); points];
    for f in x.top_facets() {
        let cell = &x.faces[f].id.dual_cell;
        let space = e.spaces.get(&f).ok_or_else(|| {
            Error::InvalidPhase(vec![format!("facet {} has no sign space", x.faces[f].id)])
        })?;
        let differ = space.contains(&BitVector::zeros(space.ambient_dim()));
        adjacency[cell[0]].push((cell[1], differ));
        adjacency[cell[1]].push((cell[0], differ));
    }
    let mut signs: Vec<Option<bool>> = vec![None; points];
    let mut errors = Vec::new();
    for start in 0..points {
        if signs[start].is_some() {
            continue;
        }
        signs[start] = Some(false);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let su = signs[u].expect("visited");
            for &(v, differ) in &adjacency[u] {
                let want = su ^ differ;
                match signs[v] {
                    None => {
                        signs[v] = Some(want);
                        queue.push_back(v);
                    }
                    Some(sv) if sv != want => errors.push(format!(
                        "inconsistent sign at point {v} reached from point {u}"
                    )),
                    _ => {}
                }
            }
        }
    }
    if !errors.is_empty() {
        errors.sort();
        errors.dedup();
        return Err(Error::InvalidPhase(errors));
    }
    let result = SignDistribution {
        minus: signs
            .into_iter()
            .map(|s| s.expect("every point visited"))
            .collect(),
    };
    if &phase_from_signs(x, &result)? != e {
        return Err(Error::InvalidPhase(vec![
            "phase is not induced by any sign distribution".into(),
        ]));
    }
    Ok(result)
}

/// The phase extended to every face of every stratum.
#[derive(Debug, Clone)]
pub struct ExtendedPhase {
    /// Affine sign space of every facet of every stratum.
    pub facet_spaces: Vec<Option<AffineSignSpace>>,
    /// Union of the adjacent facet spaces, sorted by lexicographic index.
    pub sign_sets: Vec<Vec<BitVector>>,
}

pub fn extend_phase(x: &TropicalComplex, e: &RealPhaseStructure) -> Result<ExtendedPhase> {
    let mut facet_spaces: Vec<Option<AffineSignSpace>> = vec![None; x.faces.len()];
    for (i, f) in x.faces.iter().enumerate() {
        if !f.is_facet() {
            continue;
        }
        if f.id.sedentarity.is_empty() {
            facet_spaces[i] = Some(e.spaces.get(&i).cloned().ok_or_else(|| {
                Error::InvalidPhase(vec![format!("facet {} has no sign space", f.id)])
            })?);
        } else {
            let parent = f
                .parent
                .expect("a facet of positive sedentarity has a parent facet");
            let pi = x.projection_matrix(x.faces[parent].stratum, f.stratum)?;
            let space = e.spaces.get(&parent).ok_or_else(|| {
                Error::InvalidPhase(vec![format!(
                    "facet {} has no sign space",
                    x.faces[parent].id
                )])
            })?;
            facet_spaces[i] = Some(space.image(&pi));
        }
    }
    let sign_sets = x
        .faces
        .iter()
        .map(|f| {
            let mut set: Vec<BitVector> = f
                .facets
                .iter()
                .flat_map(|&g| facet_spaces[g].as_ref().expect("facet space").elements())
                .collect();
            set.sort_by_key(BitVector::lex_index);
            set.dedup();
            set
        })
        .collect();
    Ok(ExtendedPhase {
        facet_spaces,
        sign_sets,
    })
}

pub fn extended_sign_set(
    x: &TropicalComplex,
    e: &RealPhaseStructure,
    face: usize,
) -> Result<Vec<BitVector>> {
    Ok(extend_phase(x, e)?.sign_sets[face].clone())
}

/// The basis vector `w_ε` of `GF(2)^{2^m}`.
pub fn w(eps: &BitVector) -> BitVector {
    BitVector::unit(1 << eps.len(), eps.lex_index())
}

pub fn sign_space(x: &TropicalComplex, ext: &ExtendedPhase, face: usize) -> Subspace {
    let m = x.faces[face].ambient_dim;
    Subspace::from_generators(1 << m, ext.sign_sets[face].iter().map(w))
}

/// The ambient map `w_ε ↦ w_{π(ε)}` between the sign spaces of two faces.
pub fn sign_map(x: &TropicalComplex, sigma: usize, tau: usize) -> Result<Gf2Matrix> {
    if !x.is_boundary_pair(sigma, tau) {
        return Err(Error::NotBoundaryPair(
            x.faces[tau].id.to_string(),
            x.faces[sigma].id.to_string(),
        ));
    }
    let (ms, mt) = (x.faces[sigma].ambient_dim, x.faces[tau].ambient_dim);
    if x.faces[sigma].stratum == x.faces[tau].stratum {
        return Ok(Gf2Matrix::identity(1 << ms));
    }
    let pi = x.face_projection(sigma, tau)?;
    let mut out = Gf2Matrix::zeros(1 << mt, 1 << ms);
    for i in 0..1usize << ms {
        let image = pi.mul_vec(&BitVector::from_lex_index(ms, i));
        out.set(image.lex_index(), i, true);
    }
    Ok(out)
}

pub fn sign_cosheaf(x: &TropicalComplex, ext: &ExtendedPhase) -> Result<CosheafData> {
    CosheafData::build(x, |f| Ok(sign_space(x, ext, f)), |s, t| sign_map(x, s, t))
}

/// `dim H_q(X; S_E)`: the mod-2 Betti numbers of the patchworked hypersurface.
pub fn real_betti(
    x: &TropicalComplex,
    e: &RealPhaseStructure,
    flavor: Flavor,
) -> Result<BettiTable> {
    validate_phase(x, e).map_err(Error::InvalidPhase)?;
    let ext = extend_phase(x, e)?;
    let c = assemble_complex(x, &sign_cosheaf(x, &ext)?, flavor)?;
    Ok(homology_dims(&c))
}

/// Outcome of a family of numerical checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub name: String,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl AuditReport {
    pub fn new(name: &str) -> Self {
        AuditReport {
            name: name.to_string(),
            checked: 0,
            failures: Vec::new(),
        }
    }

    pub fn check(&mut self, ok: bool, failure: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(failure());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `dim S_E(τ) = 2^m − 2^k` and `Σ_p dim F_p(τ) = dim S_E(τ)` on
/// every face.
pub fn dimension_audit(x: &TropicalComplex, e: &RealPhaseStructure) -> Result<AuditReport> {
    let ext = extend_phase(x, e)?;
    let mut report = AuditReport::new("dimension");
    for (i, f) in x.faces.iter().enumerate() {
        let s = sign_space(x, &ext, i).dim();
        let expected = (1usize << f.ambient_dim) - (1usize << f.dim);
        report.check(s == expected, || {
            format!("dim S_E({}) = {s}, expected {expected}", f.id)
        });
        let fp: usize = (0..=x.n)
            .map(|p| multitangent_space(x, i, p).map(|v| v.dim()))
            .sum::<Result<usize>>()?;
        report.check(fp == s, || {
            format!("Σ dim F_p({}) = {fp} but dim S_E = {s}", f.id)
        });
    }
    Ok(report)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::complex::{Compactification, FaceId};
    use crate::cosheaf::tests::{cubic, simplex_complex};

    pub(crate) fn bv(s: &str) -> BitVector {
        BitVector::from_u8s(&s.bytes().map(|b| b - b'0').collect::<Vec<_>>())
    }

    pub(crate) fn plane_phase(x: &TropicalComplex) -> RealPhaseStructure {
        let bases: BTreeMap<usize, BitVector> = [
            ([0, 3], "000"),
            ([0, 2], "000"),
            ([0, 1], "000"),
            ([2, 3], "001"),
            ([1, 3], "100"),
            ([1, 2], "010"),
        ]
        .iter()
        .map(|(c, b)| {
            (
                x.face_index(&FaceId::new(vec![], c.to_vec())).unwrap(),
                bv(b),
            )
        })
        .collect();
        phase_from_bases(x, &bases).unwrap()
    }

    fn elements(x: &TropicalComplex, e: &RealPhaseStructure, cell: [usize; 2]) -> Vec<String> {
        let f = x.face_index(&FaceId::new(vec![], cell.to_vec())).unwrap();
        e.spaces[&f].elements().iter().map(bits).collect()
    }

    #[test]
    fn line_phase_from_signs() {
        let x = simplex_complex(2, Compactification::Newton);
        let signs = SignDistribution::parse(&["+", "-", "-"]).unwrap();
        let e = phase_from_signs(&x, &signs).unwrap();
        // σ1 is dual to [v0, v2], σ2 to [v0, v1], σ0 to [v1, v2].
        assert_eq!(elements(&x, &e, [0, 2]), vec!["00", "10"]);
        assert_eq!(elements(&x, &e, [0, 1]), vec!["00", "01"]);
        assert_eq!(elements(&x, &e, [1, 2]), vec!["01", "10"]);
        assert!(validate_phase(&x, &e).is_ok());
        assert_eq!(phase_from_signs(&x, &signs.flipped()).unwrap(), e);
        let back = signs_from_phase(&x, &e).unwrap();
        assert_eq!(back, signs);
        assert_eq!(
            real_betti(&x, &e, Flavor::Ordinary).unwrap().dims,
            vec![1, 1]
        );
        let diagonal = x
            .faces
            .iter()
            .position(|f| f.id.dual_cell == vec![1, 2] && !f.id.sedentarity.is_empty())
            .unwrap();
        let set: Vec<String> = extended_sign_set(&x, &e, diagonal)
            .unwrap()
            .iter()
            .map(bits)
            .collect();
        assert_eq!(set, vec!["1"]);
    }

    #[test]
    fn all_plus_avoids_the_origin() {
        let x = simplex_complex(2, Compactification::Newton);
        let e = phase_from_signs(&x, &SignDistribution::parse(&["+", "+", "+"]).unwrap()).unwrap();
        for s in e.spaces.values() {
            assert!(!s.contains(&BitVector::zeros(2)));
        }
        assert!(matches!(
            phase_from_signs(&x, &SignDistribution::parse(&["+"]).unwrap()),
            Err(Error::MissingSign(1))
        ));
    }

    #[test]
    fn plane_sign_cosheaf() {
        let x = simplex_complex(3, Compactification::Newton);
        let e = plane_phase(&x);
        assert!(validate_phase(&x, &e).is_ok());
        let signs = signs_from_phase(&x, &e).unwrap();
        assert_eq!(signs.to_strings(), vec!["+", "-", "-", "-"]);
        let ext = extend_phase(&x, &e).unwrap();
        let s12 = x.face_index(&FaceId::new(vec![], vec![0, 3])).unwrap();
        let tau1 = x.face_index(&FaceId::new(vec![], vec![0, 2, 3])).unwrap();
        assert_eq!(sign_space(&x, &ext, s12).dim(), 4);
        assert_eq!(sign_space(&x, &ext, tau1).dim(), 6);
        let set: Vec<String> = ext.sign_sets[tau1].iter().map(bits).collect();
        assert_eq!(set, vec!["000", "001", "010", "100", "101", "110"]);

        let ray = x
            .fan
            .rays
            .iter()
            .position(|r| r == &vec![-1, 0, 0])
            .unwrap();
        let rho2 = x.face_index(&FaceId::new(vec![ray], vec![0, 3])).unwrap();
        let rho_set: Vec<String> = ext.sign_sets[rho2].iter().map(bits).collect();
        assert_eq!(rho_set, vec!["00", "10"]);
        let map = sign_map(&x, s12, rho2).unwrap();
        let s = sign_space(&x, &ext, s12);
        let restricted = Gf2Matrix::from_columns(
            4,
            &s.basis().iter().map(|b| map.mul_vec(b)).collect::<Vec<_>>(),
        );
        let kernel: Vec<BitVector> = restricted
            .kernel()
            .basis()
            .iter()
            .map(|c| s.combination(c))
            .collect();
        let kernel = Subspace::from_generators(8, kernel);
        assert_eq!(kernel.dim(), 2);
        assert!(kernel.contains(&w(&bv("000")).xor(&w(&bv("100")))));

        assert_eq!(
            real_betti(&x, &e, Flavor::Ordinary).unwrap().dims,
            vec![1, 1, 1]
        );
        assert!(dimension_audit(&x, &e).unwrap().passed());
    }

    #[test]
    fn perturbed_phase_is_rejected() {
        let x = simplex_complex(3, Compactification::Newton);
        let mut e = plane_phase(&x);
        let s12 = x.face_index(&FaceId::new(vec![], vec![0, 3])).unwrap();
        let dir = e.spaces[&s12].direction().clone();
        e.spaces.insert(s12, AffineSignSpace::new(bv("001"), dir));
        assert!(validate_phase(&x, &e).is_err());
        assert!(signs_from_phase(&x, &e).is_err());
    }

    #[test]
    fn cubic_audit() {
        let x = cubic();
        let signs = SignDistribution::parse(&["+"; 10]).unwrap();
        let e = phase_from_signs(&x, &signs).unwrap();
        assert!(validate_phase(&x, &e).is_ok());
        assert!(dimension_audit(&x, &e).unwrap().passed());
    }
}
