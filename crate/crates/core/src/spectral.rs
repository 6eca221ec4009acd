//! The filtered sign complex `C(K_n) ⊂ ... ⊂ C(K_1) ⊂ C(S_E)` and its
//! spectral sequence, with the maximality and sharpness diagnostics.

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::TropicalComplex;
use crate::cosheaf::{
    assemble_complex, chi_y_at_minus_one, homology_dims, tropical_homology, ChainComplex, Flavor,
};
use crate::error::{Error, Result};
use crate::filtration::kp_space;
use crate::gf2::{preimage_subspace, BitVector, Subspace};
use crate::phase::{extend_phase, sign_cosheaf, validate_phase, AuditReport, RealPhaseStructure};

/// The sign chain complex with the subcomplexes `F_p C = C(K_p)`,
/// `p = 0..=n+1`, in global chain coordinates.
#[derive(Debug, Clone)]
pub struct FilteredChainComplex {
    pub complex: ChainComplex,
    /// `levels[p][q]` is `F_p C_q`.
    pub levels: Vec<Vec<Subspace>>,
}

impl FilteredChainComplex {
    pub fn n(&self) -> usize {
        self.complex.top()
    }

    /// `F_p C_q` for any integer `p`.
    pub fn level(&self, p: i64, q: usize) -> Subspace {
        if p <= 0 {
            Subspace::full(self.complex.dims[q])
        } else if p as usize >= self.levels.len() {
            Subspace::zero(self.complex.dims[q])
        } else {
            self.levels[p as usize][q].clone()
        }
    }

    /// Image of a subspace of `C_q` under `∂_q`.
    pub fn boundary_of(&self, q: usize, s: &Subspace) -> Subspace {
        if q == 0 {
            return Subspace::zero(0);
        }
        let d = &self.complex.boundaries[q];
        Subspace::from_generators(d.rows(), s.basis().iter().map(|b| d.mul_vec(b)))
    }
}

pub fn filtered_complex(
    x: &TropicalComplex,
    e: &RealPhaseStructure,
    flavor: Flavor,
) -> Result<FilteredChainComplex> {
    validate_phase(x, e).map_err(Error::InvalidPhase)?;
    let ext = extend_phase(x, e)?;
    let sheaf = sign_cosheaf(x, &ext)?;
    let complex = assemble_complex(x, &sheaf, flavor)?;
    let levels = (0..=x.n + 1)
        .into_par_iter()
        .map(|p| {
            (0..=x.n)
                .map(|q| {
                    let mut level = Subspace::zero(complex.dims[q]);
                    for block in &complex.blocks[q] {
                        let k = kp_space(x, &ext, block.face, p as i64)?;
                        for v in k.basis() {
                            let coords = sheaf.spaces[block.face]
                                .coordinates(v)
                                .expect("K_p lies in the sign space");
                            let mut chain = BitVector::zeros(complex.dims[q]);
                            for c in coords.ones() {
                                chain.set(block.offset + c, true);
                            }
                            level.insert(chain);
                        }
                    }
                    Ok(level)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let filtered = FilteredChainComplex { complex, levels };
    for p in 0..=x.n + 1 {
        for q in 1..=x.n {
            let image = filtered.boundary_of(q, &filtered.levels[p][q]);
            if !filtered.levels[p][q - 1].contains_subspace(&image) {
                return Err(Error::BrokenCosheaf(format!(
                    "∂ does not preserve C_{q}(K_{p})"
                )));
            }
        }
    }
    Ok(filtered)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Differential {
    pub page: usize,
    pub source: (usize, usize),
    pub target: (usize, usize),
    pub rank: usize,
}

/// One page `E^r`, with `dims[q][p] = dim E^r_{q,p}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Page {
    pub r: usize,
    pub dims: Vec<Vec<usize>>,
    /// Non-zero differentials leaving this page.
    pub differentials: Vec<Differential>,
}

impl Page {
    pub fn total(&self) -> usize {
        self.dims.iter().flatten().sum()
    }

    pub fn euler_char(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(q, row)| {
                let s: usize = row.iter().sum();
                if q % 2 == 0 {
                    s as i64
                } else {
                    -(s as i64)
                }
            })
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectralReport {
    pub n: usize,
    pub flavor: Flavor,
    pub pages: Vec<Page>,
    pub e_infinity: Vec<Vec<usize>>,
    /// First page from which every differential vanishes.
    pub degenerates_at: usize,
    pub real_betti: Vec<usize>,
    pub maximal: bool,
    /// `χ(E^0)`, the Euler characteristic of the associated graded chains.
    pub chi_e0: i64,
}

struct Bidegree {
    z: Subspace,
    b: Subspace,
}

fn z_space(f: &FilteredChainComplex, q: usize, p: i64, r: i64) -> Subspace {
    let fp = f.level(p, q);
    if r <= 0 || q == 0 {
        return fp;
    }
    let pre = preimage_subspace(&f.complex.boundaries[q], &f.level(p + r, q - 1))
        .expect("matching dimensions");
    fp.intersection(&pre).expect("matching dimensions")
}

fn bidegree(f: &FilteredChainComplex, q: usize, p: i64, r: i64) -> Bidegree {
    let z = z_space(f, q, p, r);
    let mut b = z_space(f, q, p + 1, r - 1);
    if q < f.n() {
        let upper = z_space(f, q + 1, p - r + 1, r - 1);
        for v in f.boundary_of(q + 1, &upper).basis() {
            b.insert(v.clone());
        }
    }
    Bidegree { z, b }
}

/// All pages `E^1 .. E^{R}` with `R = max_page` (default `n + 2`, after
/// which every differential vanishes).
pub fn spectral_from_filtered(
    f: &FilteredChainComplex,
    flavor: Flavor,
    max_page: Option<usize>,
) -> SpectralReport {
    let n = f.n();
    let last = max_page.unwrap_or(n + 2).max(1);
    let mut pages = Vec::new();
    for r in 1..=last {
        let grid: Vec<Vec<Bidegree>> = (0..=n)
            .into_par_iter()
            .map(|q| {
                (0..=n)
                    .map(|p| bidegree(f, q, p as i64, r as i64))
                    .collect()
            })
            .collect();
        let dims: Vec<Vec<usize>> = grid
            .iter()
            .map(|row| row.iter().map(|g| g.z.dim() - g.b.dim()).collect())
            .collect();
        let mut differentials = Vec::new();
        for q in 1..=n {
            for p in 0..=n {
                let tp = p + r;
                if tp > n {
                    continue;
                }
                let target = &grid[q - 1][tp].b;
                let mut sum = target.clone();
                for v in f.boundary_of(q, &grid[q][p].z).basis() {
                    sum.insert(v.clone());
                }
                let rank = sum.dim() - target.dim();
                if rank > 0 {
                    differentials.push(Differential {
                        page: r,
                        source: (q, p),
                        target: (q - 1, tp),
                        rank,
                    });
                }
            }
        }
        pages.push(Page {
            r,
            dims,
            differentials,
        });
    }
    let degenerates_at = (1..=pages.len())
        .find(|&r| pages[r - 1..].iter().all(|pg| pg.differentials.is_empty()))
        .unwrap_or(pages.len() + 1);
    let e_infinity = pages.last().expect("at least one page").dims.clone();
    let real_betti = homology_dims(&f.complex).dims;
    let maximal = pages[0].total() == real_betti.iter().sum::<usize>();
    let chi_e0 = f.complex.euler_char();
    SpectralReport {
        n,
        flavor,
        pages,
        e_infinity,
        degenerates_at,
        real_betti,
        maximal,
        chi_e0,
    }
}

pub fn spectral_sequence(
    x: &TropicalComplex,
    e: &RealPhaseStructure,
    flavor: Flavor,
    max_page: Option<usize>,
) -> Result<SpectralReport> {
    let f = filtered_complex(x, e, flavor)?;
    Ok(spectral_from_filtered(&f, flavor, max_page))
}

/// First-page degeneration, for compact hypersurfaces.
pub fn maximality(x: &TropicalComplex, e: &RealPhaseStructure) -> Result<bool> {
    if !x.complete {
        return Err(Error::NonCompact);
    }
    Ok(spectral_sequence(x, e, Flavor::Ordinary, None)?.maximal)
}

/// Whether a non-zero differential `E^r_{q,p} → E^r_{q−1,p+r}` has one of
/// the shapes permitted when `E^1` is supported on `p + q = n` and `p = q`.
pub fn allowed_shape(n: usize, d: &Differential) -> bool {
    let (q, p) = (d.source.0 as i64, d.source.1 as i64);
    let (n, r) = (n as i64, d.page as i64);
    (r == 1 && p + q == n) || (p + q == n && r == 2 * q - n - 1) || (p == q && r == n - 2 * q + 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowSharpness {
    pub q: usize,
    pub real_betti: usize,
    pub bound: usize,
    pub attained: bool,
    /// Non-zero differentials with source or target in row `q`.
    pub differentials: Vec<Differential>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SharpnessReport {
    /// `H_q(X; F_p) = 0` whenever `p + q ≠ n` and `p ≠ q`.
    pub vanishing_pattern: bool,
    pub hypotheses_verified: bool,
    pub rows: Vec<RowSharpness>,
    /// Observed non-zero differentials outside the permitted shapes.
    pub unexpected: Vec<Differential>,
}

pub fn sharpness_from(report: &SpectralReport, trop: &[Vec<usize>]) -> SharpnessReport {
    let n = report.n;
    let vanishing_pattern =
        (0..=n).all(|q| (0..=n).all(|p| p + q == n || p == q || trop[q][p] == 0));
    let all: Vec<&Differential> = report
        .pages
        .iter()
        .flat_map(|pg| pg.differentials.iter())
        .collect();
    let rows = (0..=n)
        .map(|q| {
            let bound: usize = report.pages[0].dims[q].iter().sum();
            RowSharpness {
                q,
                real_betti: report.real_betti[q],
                bound,
                attained: report.real_betti[q] == bound,
                differentials: all
                    .iter()
                    .filter(|d| d.source.0 == q || d.target.0 == q)
                    .map(|d| (*d).clone())
                    .collect(),
            }
        })
        .collect();
    let unexpected = if vanishing_pattern {
        all.iter()
            .filter(|d| !allowed_shape(n, d))
            .map(|d| (*d).clone())
            .collect()
    } else {
        Vec::new()
    };
    SharpnessReport {
        vanishing_pattern,
        hypotheses_verified: vanishing_pattern && report.flavor == Flavor::Ordinary,
        rows,
        unexpected,
    }
}

/// Per-row attainment of the bound `b_q ≤ Σ_p dim H_q(X; F_p)`, and the
/// differentials responsible when it fails.
pub fn sharpness_report(x: &TropicalComplex, e: &RealPhaseStructure) -> Result<SharpnessReport> {
    if !x.complete {
        return Err(Error::NonCompact);
    }
    let report = spectral_sequence(x, e, Flavor::Ordinary, None)?;
    let trop = transpose(
        &tropical_homology(x, Flavor::Ordinary)?
            .iter()
            .map(|t| t.dims.clone())
            .collect::<Vec<_>>(),
    );
    Ok(sharpness_from(&report, &trop))
}

/// `[p][q]` to `[q][p]`.
pub fn transpose(t: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let rows = t.first().map_or(0, Vec::len);
    (0..rows)
        .map(|q| t.iter().map(|row| row[q]).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EulerReport {
    pub page_chars: Vec<i64>,
    pub homology_char: i64,
    pub chi_y_at_minus_one: i64,
    pub holds: bool,
}

pub fn euler_from(report: &SpectralReport, chi_y: i64) -> EulerReport {
    let mut page_chars = vec![report.chi_e0];
    page_chars.extend(report.pages.iter().map(Page::euler_char));
    let homology_char = report
        .real_betti
        .iter()
        .enumerate()
        .map(|(q, &b)| if q % 2 == 0 { b as i64 } else { -(b as i64) })
        .sum();
    let holds = page_chars.iter().all(|&c| c == homology_char) && homology_char == chi_y;
    EulerReport {
        page_chars,
        homology_char,
        chi_y_at_minus_one: chi_y,
        holds,
    }
}

/// `χ(E^r)` is constant in `r` and equals both `χ(H(S_E))` and `χ_y(−1)`.
pub fn euler_invariance(x: &TropicalComplex, e: &RealPhaseStructure) -> Result<EulerReport> {
    let report = spectral_sequence(x, e, Flavor::natural(x), None)?;
    Ok(euler_from(&report, chi_y_at_minus_one(x)?))
}

/// Consistency checks of a spectral report: monotone pages, the
/// rank bookkeeping between pages and convergence.
pub fn page_audit(report: &SpectralReport) -> AuditReport {
    let mut audit = AuditReport::new("pages");
    let n = report.n;
    for w in report.pages.windows(2) {
        let (cur, next) = (&w[0], &w[1]);
        for q in 0..=n {
            for p in 0..=n {
                let out: usize = cur
                    .differentials
                    .iter()
                    .filter(|d| d.source == (q, p))
                    .map(|d| d.rank)
                    .sum();
                let inc: usize = cur
                    .differentials
                    .iter()
                    .filter(|d| d.target == (q, p))
                    .map(|d| d.rank)
                    .sum();
                audit.check(next.dims[q][p] <= cur.dims[q][p], || {
                    format!("dim E^{}_{{{q},{p}}} grew", next.r)
                });
                audit.check(next.dims[q][p] + out + inc == cur.dims[q][p], || {
                    format!(
                        "E^{}_{{{q},{p}}} is not the homology of E^{}",
                        next.r, cur.r
                    )
                });
            }
        }
    }
    for q in 0..=n {
        let total: usize = report.e_infinity[q].iter().sum();
        audit.check(total == report.real_betti[q], || {
            format!(
                "Σ_p E^∞_{{{q},p}} = {total} but b_{q} = {}",
                report.real_betti[q]
            )
        });
    }
    audit
}
