//! Lattice polytopes, triangulations and dual fans.
//!
//! All determinants and lattice bases are computed with arbitrary precision
//! integers; input coordinates are `i64`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A point of `Z^m`.
pub type LatticePoint = Vec<i64>;

fn big_rows(rows: &[LatticePoint]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

fn small(v: &BigInt) -> i64 {
    v.to_i64().expect("lattice coordinate overflows i64")
}

/// Determinant of a square integer matrix (fraction-free Bareiss elimination).
pub fn det(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Rank of an integer matrix.
pub fn integer_rank(rows: &[LatticePoint]) -> usize {
    let mut a = big_rows(rows);
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..a.len() {
            if a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone();
            let g = a[rank][c].clone();
            for j in 0..cols {
                a[r][j] = &a[r][j] * &g - &a[rank][j] * &f;
            }
        }
        rank += 1;
    }
    rank
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Gcd of all maximal minors of a `k x m` integer matrix with `k <= m`.
/// This is the index of the lattice spanned by the rows inside its
/// saturation, or zero when the rows are dependent.
pub fn maximal_minor_gcd(rows: &[LatticePoint]) -> BigInt {
    let k = rows.len();
    if k == 0 {
        return BigInt::one();
    }
    let m = rows[0].len();
    let big = big_rows(rows);
    let mut g = BigInt::zero();
    for cols in combinations(m, k) {
        let sub: Vec<Vec<BigInt>> = big
            .iter()
            .map(|r| cols.iter().map(|&c| r[c].clone()).collect())
            .collect();
        g = g.gcd(&det(&sub));
        if g.is_one() {
            break;
        }
    }
    g
}

/// `|det(v1 - v0, ..., v_{d} - v0)|` for `d + 1` points of `Z^d`.
pub fn normalized_volume(simplex: &[LatticePoint]) -> Result<BigInt> {
    let Some(first) = simplex.first() else {
        return Err(Error::WrongPointCount {
            expected: 1,
            found: 0,
        });
    };
    let d = first.len();
    if simplex.len() != d + 1 {
        return Err(Error::WrongPointCount {
            expected: d + 1,
            found: simplex.len(),
        });
    }
    let diffs: Vec<LatticePoint> = simplex[1..]
        .iter()
        .map(|p| p.iter().zip(first).map(|(a, b)| a - b).collect())
        .collect();
    Ok(det(&big_rows(&diffs)).abs())
}

/// Lattice volume of a simplex of any dimension, measured in the lattice of
/// its own affine span. Zero for affinely dependent points.
pub fn relative_volume(simplex: &[LatticePoint]) -> BigInt {
    let Some(first) = simplex.first() else {
        return BigInt::zero();
    };
    let diffs: Vec<LatticePoint> = simplex[1..]
        .iter()
        .map(|p| p.iter().zip(first).map(|(a, b)| a - b).collect())
        .collect();
    if integer_rank(&diffs) < diffs.len() {
        return BigInt::zero();
    }
    maximal_minor_gcd(&diffs)
}

/// Row Hermite normal form of the lattice spanned by `rows`: echelon form,
/// positive pivots, entries above each pivot reduced into `[0, pivot)`.
/// Zero rows are dropped.
pub fn hermite_normal_form(rows: &[LatticePoint]) -> Vec<LatticePoint> {
    let mut a = big_rows(rows);
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        // Euclid on column c among rows r.. until a single non-zero entry remains.
        loop {
            let nonzero: Vec<usize> = (r..a.len()).filter(|&i| !a[i][c].is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            let p = *nonzero
                .iter()
                .min_by_key(|&&i| a[i][c].abs())
                .expect("non-empty");
            a.swap(r, p);
            let mut done = true;
            for i in r + 1..a.len() {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                for j in 0..cols {
                    let v = &a[i][j] - &q * &a[r][j];
                    a[i][j] = v;
                }
                if !a[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < a.len() && !a[r][c].is_zero() {
            if a[r][c].is_negative() {
                for j in 0..cols {
                    a[r][j] = -&a[r][j];
                }
            }
            for i in 0..r {
                let q = a[i][c].div_floor(&a[r][c]);
                if !q.is_zero() {
                    for j in 0..cols {
                        let v = &a[i][j] - &q * &a[r][j];
                        a[i][j] = v;
                    }
                }
            }
            r += 1;
        }
    }
    a.truncate(r);
    a.iter()
        .map(|row| row.iter().map(small).collect())
        .collect()
}

/// A `Z`-basis (in Hermite normal form) of the saturated lattice
/// `{v in Z^m : <v, d> = 0 for all d in directions}`.
pub fn integral_annihilator_basis(directions: &[LatticePoint], m: usize) -> Vec<LatticePoint> {
    // Column operations D U = [H | 0] with U unimodular; the trailing
    // columns of U span the kernel and, U being invertible over Z, they
    // span a saturated lattice.
    let mut a = big_rows(directions);
    for row in &a {
        assert_eq!(row.len(), m, "direction outside Z^{m}");
    }
    let mut u: Vec<Vec<BigInt>> = (0..m)
        .map(|i| (0..m).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect();
    let mut pc = 0;
    for i in 0..a.len() {
        if pc == m {
            break;
        }
        for j in pc + 1..m {
            if a[i][j].is_zero() {
                continue;
            }
            let x0 = a[i][pc].clone();
            let y0 = a[i][j].clone();
            let eg = x0.extended_gcd(&y0);
            let (g, s, t) = (eg.gcd, eg.x, eg.y);
            let b1 = &x0 / &g;
            let b2 = &y0 / &g;
            // new_pc = s*col_pc + t*col_j ; new_j = -b2*col_pc + b1*col_j
            let mix = |mat: &mut Vec<Vec<BigInt>>| {
                for row in mat.iter_mut() {
                    let cp = row[pc].clone();
                    let cj = row[j].clone();
                    row[pc] = &s * &cp + &t * &cj;
                    row[j] = -&b2 * &cp + &b1 * &cj;
                }
            };
            mix(&mut a);
            mix(&mut u);
        }
        if !a[i][pc].is_zero() {
            pc += 1;
        }
    }
    let kernel: Vec<LatticePoint> = (pc..m)
        .map(|c| (0..m).map(|r| small(&u[r][c])).collect())
        .collect();
    hermite_normal_form(&kernel)
}

/// Coordinates `c` with `v = sum_i c_i basis_i`, for a basis in Hermite
/// normal form. `None` when `v` is not in the lattice.
pub fn coordinates_in_hnf(basis: &[LatticePoint], v: &[i64]) -> Option<Vec<i64>> {
    let mut rest: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
    let mut coords = Vec::with_capacity(basis.len());
    for b in basis {
        let p = b.iter().position(|&x| x != 0)?;
        let pb = BigInt::from(b[p]);
        let (q, r) = rest[p].div_rem(&pb);
        if !r.is_zero() {
            return None;
        }
        for (x, &y) in rest.iter_mut().zip(b) {
            *x -= &q * BigInt::from(y);
        }
        coords.push(small(&q));
    }
    rest.iter().all(Zero::is_zero).then_some(coords)
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sub(a: &[i64], b: &[i64]) -> LatticePoint {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Affine dimension of a point set (`-1` for the empty set is reported as `None`).
pub fn affine_dim(points: &[LatticePoint]) -> Option<usize> {
    let first = points.first()?;
    let diffs: Vec<LatticePoint> = points[1..].iter().map(|p| sub(p, first)).collect();
    Some(if diffs.is_empty() {
        0
    } else {
        integer_rank(&diffs)
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    /// Primitive outer normal.
    pub normal: LatticePoint,
    pub offset: i64,
    pub points: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolytopeFace {
    /// Indices of the supplied points lying on the face, sorted.
    pub points: Vec<usize>,
    pub dim: usize,
    /// Indices of the facets containing the face, sorted.
    pub facets: Vec<usize>,
}

/// The convex hull of a finite set of lattice points, with its face lattice.
#[derive(Debug, Clone)]
pub struct Polytope {
    pub points: Vec<LatticePoint>,
    pub dim: usize,
    /// Sorted lexicographically by outer normal.
    pub facets: Vec<Facet>,
    /// All non-empty faces including the polytope itself; sorted by
    /// (dimension, point set).
    pub faces: Vec<PolytopeFace>,
}

impl Polytope {
    /// Builds the polytope of a full-dimensional point set in `Z^d`.
    pub fn new(points: Vec<LatticePoint>) -> Result<Self> {
        let d = points.first().map_or(0, Vec::len);
        if d == 0 || points.iter().any(|p| p.len() != d) {
            return Err(Error::DegeneratePolytope);
        }
        if affine_dim(&points) != Some(d) {
            return Err(Error::DegeneratePolytope);
        }
        let mut normals: BTreeMap<LatticePoint, Facet> = BTreeMap::new();
        for subset in combinations(points.len(), d) {
            let base = &points[subset[0]];
            let diffs: Vec<LatticePoint> =
                subset[1..].iter().map(|&i| sub(&points[i], base)).collect();
            let ann = integral_annihilator_basis(&diffs, d);
            if ann.len() != 1 {
                continue;
            }
            let mut normal = ann[0].clone();
            let c = dot(&normal, base);
            let values: Vec<i64> = points.iter().map(|p| dot(&normal, p)).collect();
            let (offset, flip) = if values.iter().all(|&v| v <= c) {
                (c, false)
            } else if values.iter().all(|&v| v >= c) {
                (-c, true)
            } else {
                continue;
            };
            if flip {
                normal.iter_mut().for_each(|x| *x = -*x);
            }
            if normals.contains_key(&normal) {
                continue;
            }
            let on: Vec<usize> = (0..points.len())
                .filter(|&i| dot(&normal, &points[i]) == offset)
                .collect();
            normals.insert(
                normal.clone(),
                Facet {
                    normal,
                    offset,
                    points: on,
                },
            );
        }
        let facets: Vec<Facet> = normals.into_values().collect();

        let mut sets: BTreeSet<Vec<usize>> = facets.iter().map(|f| f.points.clone()).collect();
        loop {
            let current: Vec<Vec<usize>> = sets.iter().cloned().collect();
            let mut grew = false;
            for (i, a) in current.iter().enumerate() {
                for b in &current[i + 1..] {
                    let inter: Vec<usize> = a
                        .iter()
                        .copied()
                        .filter(|x| b.binary_search(x).is_ok())
                        .collect();
                    if !inter.is_empty() && sets.insert(inter) {
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        sets.insert((0..points.len()).collect());
        let mut faces: Vec<PolytopeFace> = sets
            .into_iter()
            .map(|pts| {
                let coords: Vec<LatticePoint> = pts.iter().map(|&i| points[i].clone()).collect();
                let dim = affine_dim(&coords).expect("non-empty face");
                let containing = facets
                    .iter()
                    .enumerate()
                    .filter(|(_, f)| pts.iter().all(|p| f.points.binary_search(p).is_ok()))
                    .map(|(k, _)| k)
                    .collect();
                PolytopeFace {
                    points: pts,
                    dim,
                    facets: containing,
                }
            })
            .collect();
        faces.sort_by(|a, b| (a.dim, &a.points).cmp(&(b.dim, &b.points)));
        Ok(Polytope {
            points,
            dim: d,
            facets,
            faces,
        })
    }

    /// Index of the face with exactly this point set.
    pub fn face_index(&self, points: &[usize]) -> Option<usize> {
        let mut sorted = points.to_vec();
        sorted.sort_unstable();
        self.faces.iter().position(|f| f.points == sorted)
    }

    /// Index of the smallest face containing all given points.
    pub fn carrier_face(&self, points: &[usize]) -> usize {
        self.faces
            .iter()
            .position(|f| points.iter().all(|p| f.points.binary_search(p).is_ok()))
            .expect("the polytope itself contains every point")
    }

    pub fn vertices(&self) -> Vec<usize> {
        self.faces
            .iter()
            .filter(|f| f.dim == 0)
            .map(|f| f.points[0])
            .collect()
    }

    pub fn is_on_boundary(&self, point: usize) -> bool {
        self.facets
            .iter()
            .any(|f| f.points.binary_search(&point).is_ok())
    }

    /// A triangulation of a face obtained by recursively coning from its
    /// first vertex; used only to measure volumes.
    fn pulling_simplices(&self, face: usize) -> Vec<Vec<usize>> {
        let f = &self.faces[face];
        if f.dim == 0 {
            return vec![vec![f.points[0]]];
        }
        let apex = self
            .faces
            .iter()
            .find(|g| g.dim == 0 && f.points.binary_search(&g.points[0]).is_ok())
            .map(|g| g.points[0])
            .expect("every face has a vertex");
        let mut out = Vec::new();
        for (k, g) in self.faces.iter().enumerate() {
            if g.dim + 1 != f.dim
                || g.points.binary_search(&apex).is_ok()
                || !g.points.iter().all(|p| f.points.binary_search(p).is_ok())
            {
                continue;
            }
            for mut s in self.pulling_simplices(k) {
                s.push(apex);
                out.push(s);
            }
        }
        out
    }

    /// Lattice volume of a face, normalized so a unimodular simplex has volume 1.
    pub fn face_volume(&self, face: usize) -> BigInt {
        self.pulling_simplices(face)
            .iter()
            .map(|s| {
                let pts: Vec<LatticePoint> = s.iter().map(|&i| self.points[i].clone()).collect();
                relative_volume(&pts)
            })
            .sum()
    }

    pub fn volume(&self) -> BigInt {
        self.face_volume(self.faces.len() - 1)
    }
}

/// A simplicial fan given by primitive ray generators and cones as sorted
/// ray-index sets (closed under taking subsets, the empty cone included).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    pub rays: Vec<LatticePoint>,
    pub cones: Vec<Vec<usize>>,
}

impl Fan {
    /// Adds every face of every given cone and sorts by (size, indices).
    pub fn closed(rays: Vec<LatticePoint>, cones: impl IntoIterator<Item = Vec<usize>>) -> Self {
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        all.insert(Vec::new());
        for mut c in cones {
            c.sort_unstable();
            c.dedup();
            for mask in 0..1usize << c.len() {
                all.insert(
                    c.iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, &r)| r)
                        .collect(),
                );
            }
        }
        let mut cones: Vec<Vec<usize>> = all.into_iter().collect();
        cones.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        Fan { rays, cones }
    }

    pub fn contains_cone(&self, cone: &[usize]) -> bool {
        self.cones.iter().any(|c| c == cone)
    }

    pub fn is_unimodular(&self, cone: &[usize]) -> bool {
        let gens: Vec<LatticePoint> = cone.iter().map(|&r| self.rays[r].clone()).collect();
        gens.is_empty() || (integer_rank(&gens) == gens.len() && maximal_minor_gcd(&gens).is_one())
    }

    /// The subfan of cones all of whose rays are listed.
    pub fn torus_only(rays: Vec<LatticePoint>) -> Self {
        Fan::closed(rays, [])
    }
}

/// The normal fan of a polytope, with rays the primitive outer facet
/// normals (sorted lexicographically) and one cone per proper face.
pub fn dual_fan(polytope: &Polytope) -> Result<Fan> {
    let rays: Vec<LatticePoint> = polytope.facets.iter().map(|f| f.normal.clone()).collect();
    let mut cones = Vec::new();
    for face in &polytope.faces {
        if face.facets.len() != polytope.dim - face.dim {
            return Err(Error::Fan(format!(
                "normal cone of face {:?} is not simplicial",
                face.points
            )));
        }
        cones.push(face.facets.clone());
    }
    Ok(Fan::closed(rays, cones))
}

/// A triangulation of the convex hull of `points`, of dimension
/// `points[0].len()`. Simplices are sorted index sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    pub points: Vec<LatticePoint>,
    pub simplices: Vec<Vec<usize>>,
}

impl Triangulation {
    pub fn new(points: Vec<LatticePoint>, simplices: Vec<Vec<usize>>) -> Self {
        let mut simplices: Vec<Vec<usize>> = simplices
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s
            })
            .collect();
        simplices.sort();
        Triangulation { points, simplices }
    }

    pub fn dim(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }

    pub fn polytope(&self) -> Result<Polytope> {
        Polytope::new(self.points.clone())
    }

    /// Every non-empty face of every simplex.
    pub fn cells(&self) -> BTreeSet<Vec<usize>> {
        let mut out = BTreeSet::new();
        for s in &self.simplices {
            for mask in 1..1usize << s.len() {
                out.insert(
                    s.iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, &v)| v)
                        .collect(),
                );
            }
        }
        out
    }

    /// Edges (1-cells) of the triangulation.
    pub fn edges(&self) -> Vec<[usize; 2]> {
        self.cells()
            .into_iter()
            .filter(|c| c.len() == 2)
            .map(|c| [c[0], c[1]])
            .collect()
    }
}

/// Checks that `t` is a triangulation of the convex hull of its points
/// (optionally: a primitive one). Returns the list of violations.
pub fn validate_triangulation(t: &Triangulation, require_primitive: bool) -> Vec<String> {
    let mut violations = Vec::new();
    let d = t.dim();
    let polytope = match t.polytope() {
        Ok(p) => p,
        Err(e) => return vec![e.to_string()],
    };
    let mut used = vec![false; t.points.len()];
    let mut total = BigInt::zero();
    let mut ridges: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for s in &t.simplices {
        let mut distinct = s.clone();
        distinct.dedup();
        if s.len() != d + 1 || distinct.len() != s.len() || s.iter().any(|&i| i >= t.points.len()) {
            violations.push(format!(
                "simplex {s:?} does not have {} distinct valid vertices",
                d + 1
            ));
            continue;
        }
        for &i in s {
            used[i] = true;
        }
        let pts: Vec<LatticePoint> = s.iter().map(|&i| t.points[i].clone()).collect();
        let vol = normalized_volume(&pts).expect("point count checked");
        if vol.is_zero() {
            violations.push(format!("simplex {s:?} is degenerate"));
            continue;
        }
        if require_primitive && !vol.is_one() {
            violations.push(format!(
                "simplex {s:?} has normalized volume {vol}, expected 1"
            ));
        }
        total += vol;
        for skip in 0..s.len() {
            let ridge: Vec<usize> = s
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &v)| v)
                .collect();
            *ridges.entry(ridge).or_default() += 1;
        }
    }
    for (i, u) in used.iter().enumerate() {
        if !u {
            violations.push(format!("point {i} is not used by any simplex"));
        }
    }
    if violations.is_empty() {
        let expected = polytope.volume();
        if total != expected {
            violations.push(format!(
                "simplex volumes sum to {total}, polytope volume is {expected}"
            ));
        }
        for (ridge, count) in &ridges {
            let on_boundary = polytope
                .facets
                .iter()
                .any(|f| ridge.iter().all(|p| f.points.binary_search(p).is_ok()));
            let expected = if on_boundary { 1 } else { 2 };
            if *count != expected {
                violations.push(format!(
                    "ridge {ridge:?} lies in {count} simplices, expected {expected}"
                ));
            }
        }
    }
    violations
}

pub fn validate_primitive(t: &Triangulation) -> std::result::Result<(), Vec<String>> {
    let v = validate_triangulation(t, true);
    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}

/// The triangulation induced on a face of the polytope, written in integral
/// coordinates of the face's own affine lattice. The returned map sends
/// local point indices back to indices of `t`.
pub fn induced_triangulation(
    t: &Triangulation,
    face: &[usize],
) -> Result<(Triangulation, Vec<usize>)> {
    let polytope = t.polytope()?;
    let fi = polytope
        .face_index(face)
        .ok_or_else(|| Error::InvalidTriangulation(vec![format!("{face:?} is not a face")]))?;
    let f = &polytope.faces[fi];
    let global = f.points.clone();
    let origin = &t.points[global[0]];
    let diffs: Vec<LatticePoint> = global.iter().map(|&i| sub(&t.points[i], origin)).collect();
    let normal_space = integral_annihilator_basis(&diffs, t.dim());
    let lattice = integral_annihilator_basis(&normal_space, t.dim());
    let local_points: Vec<LatticePoint> = diffs
        .iter()
        .map(|v| {
            coordinates_in_hnf(&lattice, v).expect("difference lies in its own saturated span")
        })
        .collect();
    let local_index: BTreeMap<usize, usize> =
        global.iter().enumerate().map(|(l, &g)| (g, l)).collect();
    let simplices = t
        .cells()
        .into_iter()
        .filter(|c| c.len() == f.dim + 1 && c.iter().all(|v| local_index.contains_key(v)))
        .map(|c| c.iter().map(|v| local_index[v]).collect())
        .collect();
    let local_points = if f.dim == 0 {
        vec![Vec::new()]
    } else {
        local_points
    };
    Ok((Triangulation::new(local_points, simplices), global))
}

/// Lattice points of `d` times the standard simplex in `Z^dim`, in
/// lexicographic order of coordinates.
pub fn dilated_simplex_points(dim: usize, d: i64) -> Vec<LatticePoint> {
    fn rec(dim: usize, left: i64, cur: &mut LatticePoint, out: &mut Vec<LatticePoint>) {
        if cur.len() == dim {
            out.push(cur.clone());
            return;
        }
        for x in 0..=left {
            cur.push(x);
            rec(dim, left - x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, d, &mut Vec::new(), &mut out);
    out
}

/// The vertices `0, e_1, ..., e_dim` of the standard simplex.
pub fn standard_simplex_points(dim: usize) -> Vec<LatticePoint> {
    (0..=dim)
        .map(|i| (0..dim).map(|j| (i == j + 1) as i64).collect())
        .collect()
}

/// The honeycomb ("staircase") triangulation of `d` times the standard
/// triangle: unit squares cut along their anti-diagonals.
pub fn staircase_triangulation(d: i64) -> Triangulation {
    let points = dilated_simplex_points(2, d);
    let index = |x: i64, y: i64| {
        points
            .iter()
            .position(|p| p == &vec![x, y])
            .expect("lattice point")
    };
    let mut simplices = Vec::new();
    for x in 0..d {
        for y in 0..d - x {
            simplices.push(vec![index(x, y), index(x + 1, y), index(x, y + 1)]);
            if x + y + 2 <= d {
                simplices.push(vec![index(x + 1, y), index(x, y + 1), index(x + 1, y + 1)]);
            }
        }
    }
    Triangulation::new(points.clone(), simplices)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[&[i64]]) -> Vec<LatticePoint> {
        v.iter().map(|p| p.to_vec()).collect()
    }

    #[test]
    fn normalized_volume_examples() {
        assert_eq!(
            normalized_volume(&pts(&[&[0, 0], &[1, 0], &[0, 1]])).unwrap(),
            BigInt::from(1)
        );
        assert_eq!(
            normalized_volume(&pts(&[&[0, 0], &[2, 0], &[0, 1]])).unwrap(),
            BigInt::from(2)
        );
        assert_eq!(
            normalized_volume(&pts(&[&[0, 0], &[1, 1], &[2, 2]])).unwrap(),
            BigInt::from(0)
        );
        assert!(matches!(
            normalized_volume(&pts(&[&[0, 0], &[1, 0]])),
            Err(Error::WrongPointCount { .. })
        ));
    }

    #[test]
    fn annihilator_examples() {
        assert_eq!(
            integral_annihilator_basis(&pts(&[&[0, 1]]), 2),
            pts(&[&[1, 0]])
        );
        assert_eq!(
            integral_annihilator_basis(&pts(&[&[1, -1, 0]]), 3),
            pts(&[&[1, 1, 0], &[0, 0, 1]])
        );
        assert_eq!(
            integral_annihilator_basis(&[], 3),
            pts(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])
        );
        // Saturation: the kernel of (2, 4) is spanned by (2, -1), not a multiple.
        assert_eq!(
            integral_annihilator_basis(&pts(&[&[2, 4]]), 2),
            pts(&[&[2, -1]])
        );
    }

    #[test]
    fn simplex_triangulation_is_primitive() {
        let t = Triangulation::new(
            pts(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]),
            vec![vec![0, 1, 2, 3]],
        );
        assert!(validate_primitive(&t).is_ok());
    }

    #[test]
    fn staircase_cubic_is_primitive() {
        let t = staircase_triangulation(3);
        assert_eq!(t.simplices.len(), 9);
        assert!(validate_primitive(&t).is_ok());
        assert_eq!(t.polytope().unwrap().volume(), BigInt::from(9));
    }

    #[test]
    fn volume_two_simplex_is_rejected() {
        let t = Triangulation::new(pts(&[&[0, 0], &[2, 0], &[0, 1]]), vec![vec![0, 1, 2]]);
        let v = validate_primitive(&t).unwrap_err();
        assert!(
            v.iter()
                .any(|m| m.contains("[0, 1, 2]") && m.contains("volume 2")),
            "{v:?}"
        );
    }

    #[test]
    fn overlapping_simplices_are_rejected() {
        // Two triangles covering the unit square twice over one half.
        let t = Triangulation::new(
            pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]),
            vec![vec![0, 1, 2], vec![0, 1, 3]],
        );
        assert!(validate_primitive(&t).is_err());
    }

    #[test]
    fn dual_fan_of_triangle() {
        let p = Polytope::new(pts(&[&[0, 0], &[1, 0], &[0, 1]])).unwrap();
        let fan = dual_fan(&p).unwrap();
        assert_eq!(fan.rays, pts(&[&[-1, 0], &[0, -1], &[1, 1]]));
        assert_eq!(fan.cones.iter().filter(|c| c.len() == 2).count(), 3);
    }

    #[test]
    fn dual_fan_of_tetrahedron_and_dilation() {
        let p = Polytope::new(dilated_simplex_points(3, 1)).unwrap();
        let fan = dual_fan(&p).unwrap();
        assert_eq!(fan.rays.len(), 4);
        assert_eq!(fan.cones.iter().filter(|c| c.len() == 2).count(), 6);
        assert_eq!(fan.cones.iter().filter(|c| c.len() == 3).count(), 4);
        for cone in &fan.cones {
            assert!(fan.is_unimodular(cone));
        }
        let p2 = Polytope::new(dilated_simplex_points(3, 2)).unwrap();
        assert_eq!(dual_fan(&p2).unwrap(), fan);
    }

    #[test]
    fn degenerate_polytope_is_an_error() {
        assert!(matches!(
            Polytope::new(pts(&[&[0, 0], &[1, 1], &[2, 2]])),
            Err(Error::DegeneratePolytope)
        ));
    }

    #[test]
    fn induced_triangulations() {
        let t = staircase_triangulation(3);
        let edge: Vec<usize> = (0..t.points.len())
            .filter(|&i| t.points[i][1] == 0)
            .collect();
        let (sub, global) = induced_triangulation(&t, &edge).unwrap();
        assert_eq!(sub.simplices.len(), 3);
        assert_eq!(global.len(), 4);
        assert!(validate_primitive(&sub).is_ok());

        let (vertex, _) = induced_triangulation(&t, &[0]).unwrap();
        assert_eq!(vertex.simplices, vec![vec![0]]);

        let tet = Triangulation::new(dilated_simplex_points(3, 1), vec![vec![0, 1, 2, 3]]);
        let tri: Vec<usize> = (0..4).filter(|&i| tet.points[i][2] == 0).collect();
        let (face, _) = induced_triangulation(&tet, &tri).unwrap();
        assert_eq!(face.simplices.len(), 1);
        assert!(validate_primitive(&face).is_ok());

        assert!(induced_triangulation(&t, &[0, 4]).is_err());
    }
}
