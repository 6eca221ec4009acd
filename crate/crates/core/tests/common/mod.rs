#![allow(dead_code, clippy::needless_range_loop)]

use std::path::PathBuf;

use patchwork_core::complex::{build_complex, select_subfan, Compactification, TropicalComplex};
use patchwork_core::lattice::{
    dilated_simplex_points, staircase_triangulation, LatticePoint, Triangulation,
};

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

pub fn complex(t: &Triangulation, c: Compactification) -> TropicalComplex {
    let fan = select_subfan(&t.polytope().unwrap(), &c).unwrap();
    build_complex(t, &fan).unwrap()
}

fn cross(o: &LatticePoint, a: &LatticePoint, b: &LatticePoint) -> i64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Interior edges of a planar triangulation whose two triangles form a
/// strictly convex quadrilateral, with the opposite vertices.
pub fn flippable(t: &Triangulation) -> Vec<([usize; 2], usize, usize)> {
    let mut out = Vec::new();
    for [a, b] in t.edges() {
        let apex: Vec<usize> = t
            .simplices
            .iter()
            .filter(|s| s.contains(&a) && s.contains(&b))
            .map(|s| *s.iter().find(|&&v| v != a && v != b).unwrap())
            .collect();
        if let [c, d] = apex[..] {
            let p = &t.points;
            let sa = cross(&p[c], &p[d], &p[a]);
            let sb = cross(&p[c], &p[d], &p[b]);
            if sa != 0 && sb != 0 && (sa > 0) != (sb > 0) {
                out.push(([a, b], c, d));
            }
        }
    }
    out
}

pub fn flip(t: &Triangulation, choice: usize) -> Option<Triangulation> {
    let options = flippable(t);
    if options.is_empty() {
        return None;
    }
    let ([a, b], c, d) = options[choice % options.len()];
    let mut simplices: Vec<Vec<usize>> = t
        .simplices
        .iter()
        .filter(|s| !(s.contains(&a) && s.contains(&b)))
        .cloned()
        .collect();
    simplices.push(vec![a, c, d]);
    simplices.push(vec![b, c, d]);
    Some(Triangulation::new(t.points.clone(), simplices))
}

/// A primitive triangulation of `d` times the standard triangle reached
/// from the staircase by the given sequence of flips.
pub fn flipped_staircase(d: i64, choices: &[usize]) -> Triangulation {
    let mut t = staircase_triangulation(d);
    for &c in choices {
        if let Some(next) = flip(&t, c) {
            t = next;
        }
    }
    t
}

/// Twice the standard tetrahedron: four corner tetrahedra and the
/// octahedron split along one of its three diagonals.
pub fn twice_tetrahedron(diagonal: usize) -> Triangulation {
    let points = dilated_simplex_points(3, 2);
    let v: Vec<LatticePoint> = (0..4)
        .map(|i| (0..3).map(|j| (i == j + 1) as i64).collect())
        .collect();
    let at = |i: usize, j: usize| -> usize {
        let p: LatticePoint = (0..3).map(|k| v[i][k] + v[j][k]).collect();
        points.iter().position(|q| q == &p).unwrap()
    };
    let mut simplices = Vec::new();
    for i in 0..4 {
        let mut s = vec![at(i, i)];
        s.extend((0..4).filter(|&j| j != i).map(|j| at(i, j)));
        simplices.push(s);
    }
    let pairs = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];
    let [(a0, a1), (b0, b1)] = pairs[diagonal % 3];
    let rest: Vec<[(usize, usize); 2]> = pairs
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != diagonal % 3)
        .map(|(_, p)| *p)
        .collect();
    let ring = [rest[0][0], rest[1][0], rest[0][1], rest[1][1]];
    for k in 0..4 {
        let (c, d) = (ring[k], ring[(k + 1) % 4]);
        simplices.push(vec![at(a0, a1), at(b0, b1), at(c.0, c.1), at(d.0, d.1)]);
    }
    Triangulation::new(points, simplices)
}

use patchwork_core::cosheaf::{
    assemble_complex, fp_cosheaf, tropical_homology, CosheafData, Flavor,
};
use patchwork_core::filtration::{
    kp_bruteforce, kp_cosheaf, kp_of_space, relative_homology, verify_exact_commutative,
};
use patchwork_core::phase::{dimension_audit, extend_phase, sign_cosheaf, RealPhaseStructure};
use patchwork_core::spectral::{
    euler_from, page_audit, sharpness_from, spectral_sequence, transpose,
};

/// Violations of the structural properties of one phase, each tagged
/// with the letter of the property it breaks.
pub fn property_violations(x: &TropicalComplex, e: &RealPhaseStructure) -> Vec<(char, String)> {
    let mut out = Vec::new();
    let flavor = Flavor::natural(x);
    let ext = extend_phase(x, e).unwrap();

    let mut cosheaves: Vec<(String, CosheafData)> =
        vec![("S_E".into(), sign_cosheaf(x, &ext).unwrap())];
    for p in 0..=x.n + 1 {
        cosheaves.push((format!("K_{p}"), kp_cosheaf(x, &ext, p as i64).unwrap()));
    }
    for p in 0..=x.n {
        cosheaves.push((format!("F_{p}"), fp_cosheaf(x, p).unwrap()));
    }
    for (name, g) in &cosheaves {
        for v in g.check(x) {
            out.push(('a', format!("{name}: {v}")));
        }
        match assemble_complex(x, g, flavor) {
            Ok(c) => {
                for q in 2..=x.n {
                    if !c.boundaries[q - 1].mul(&c.boundaries[q]).is_zero() {
                        out.push(('a', format!("{name}: ∂² ≠ 0 in degree {q}")));
                    }
                }
            }
            Err(err) => out.push(('a', format!("{name}: {err}"))),
        }
    }

    let audit = dimension_audit(x, e).unwrap();
    out.extend(audit.failures.iter().map(|f| ('b', f.clone())));
    let exact = verify_exact_commutative(x, e).unwrap();
    out.extend(exact.failures.iter().map(|f| ('c', f.clone())));

    let report = spectral_sequence(x, e, flavor, None).unwrap();
    let trop: Vec<Vec<usize>> = tropical_homology(x, flavor)
        .unwrap()
        .iter()
        .map(|t| t.dims.clone())
        .collect();
    for p in 0..=x.n {
        let rel = relative_homology(x, e, p, flavor).unwrap();
        for q in 0..=x.n {
            let e1 = report.pages[0].dims[q][p];
            if e1 != rel.dims[q] || e1 != trop[p][q] {
                out.push((
                    'd',
                    format!(
                        "E^1_{{{q},{p}}} = {e1}, relative {}, tropical {}",
                        rel.dims[q], trop[p][q]
                    ),
                ));
            }
        }
    }
    for q in 0..=x.n {
        let total: usize = report.e_infinity[q].iter().sum();
        if total != report.real_betti[q] {
            out.push((
                'e',
                format!(
                    "Σ_p E^∞_{{{q},p}} = {total} ≠ b_{q} = {}",
                    report.real_betti[q]
                ),
            ));
        }
    }
    let chi = patchwork_core::cosheaf::chi_y_at_minus_one(x).unwrap();
    let euler = euler_from(&report, chi);
    if !euler.holds {
        out.push(('f', format!("{euler:?}")));
    }
    for w in report.pages.windows(2) {
        for q in 0..=x.n {
            for p in 0..=x.n {
                if w[1].dims[q][p] > w[0].dims[q][p] {
                    out.push(('g', format!("dim E^{}_{{{q},{p}}} grew", w[1].r)));
                }
            }
        }
    }
    out.extend(page_audit(&report).failures.into_iter().map(|f| ('g', f)));
    if flavor == Flavor::Ordinary {
        let sharp = sharpness_from(&report, &transpose(&trop));
        out.extend(sharp.unexpected.iter().map(|d| ('h', format!("{d:?}"))));
    }
    for (f, space) in ext.facet_spaces.iter().enumerate() {
        let Some(space) = space else { continue };
        if space.direction().dim() > 3 {
            continue;
        }
        for p in 0..=space.direction().dim() + 1 {
            if kp_of_space(space, p) != kp_bruteforce(space, p) {
                out.push((
                    'i',
                    format!("K_{p} of {} differs from enumeration", x.faces[f].id),
                ));
            }
        }
    }
    out
}
