//! Pointed rational polyhedral cones in rank <= 3, with exact ray/facet
//! duality, membership, intersection, and Hilbert bases.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::{self, IntMat};
use crate::scalar::{Field, Rat};

use super::PicVector;

/// A pointed rational cone, stored with both generators and a supporting
/// description. `rays` are the primitive extreme rays (lex-sorted), `facets`
/// are inequality normals valid on the cone, and `equations` cut out the
/// linear span.
#[derive(Clone, Debug)]
pub struct Cone {
    ambient: usize,
    rays: Vec<PicVector>,
    facets: Vec<PicVector>,
    equations: Vec<PicVector>,
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.rays == other.rays
    }
}
impl Eq for Cone {}

impl Cone {
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rays(&self) -> &[PicVector] {
        &self.rays
    }

    pub fn facets(&self) -> &[PicVector] {
        &self.facets
    }

    pub fn equations(&self) -> &[PicVector] {
        &self.equations
    }

    pub fn dim(&self) -> usize {
        self.ambient - self.equations.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn positive_quadrant(n: usize) -> Cone {
        let rays: Vec<PicVector> = (0..n)
            .map(|i| {
                let mut v = vec![0i64; n];
                v[i] = 1;
                PicVector(v)
            })
            .collect();
        Cone::from_rays(n, &rays).expect("quadrant is pointed")
    }

    /// Build a cone from generators. Errors when the generators span a
    /// non-pointed cone or the ambient rank exceeds 3.
    pub fn from_rays(ambient: usize, gens: &[PicVector]) -> Result<Cone> {
        if ambient > 3 {
            return Err(Error::UnsupportedRank(ambient));
        }
        let mut prim: Vec<Vec<i64>> = gens
            .iter()
            .filter(|v| !v.is_zero())
            .map(|v| reduce_dir(&v.0))
            .collect();
        prim.sort();
        prim.dedup();
        for v in &prim {
            if v.len() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    got: v.len(),
                });
            }
        }
        if prim.is_empty() {
            return Ok(Cone::zero(ambient));
        }

        let (basis, to_span) = span_basis_from_vectors(ambient, &prim);
        let s = basis_cols(&basis);
        let rays_w: Vec<Vec<i64>> = prim.iter().map(|v| express_in_span(&basis, v)).collect();
        let facets_w = full_dim_facets(s, &rays_w)?;

        // extreme rays: tight on a rank s-1 subset of facets
        let mut extreme: Vec<Vec<i64>> = vec![];
        for (i, w) in rays_w.iter().enumerate() {
            let tight: IntMat = facets_w
                .iter()
                .filter(|f| dot(f, w) == 0)
                .cloned()
                .collect();
            if s <= 1 || matrix::int_rank(&tight) >= s - 1 {
                extreme.push(prim[i].clone());
            }
        }
        extreme.sort();
        extreme.dedup();

        let equations = span_equations(ambient, &basis);
        let mut facets: Vec<Vec<i64>> = facets_w
            .iter()
            .map(|fw| lift_functional(&to_span, fw))
            .collect();
        facets.sort();
        facets.dedup();

        Ok(Cone {
            ambient,
            rays: extreme.into_iter().map(PicVector).collect(),
            facets: facets.into_iter().map(PicVector).collect(),
            equations,
        })
    }

    /// Build a cone from a supporting description; the result is pointed or
    /// an error.
    pub fn from_inequalities(
        ambient: usize,
        ineqs: &[PicVector],
        eqs: &[PicVector],
    ) -> Result<Cone> {
        if ambient > 3 {
            return Err(Error::UnsupportedRank(ambient));
        }
        let dirs = feasible_directions(ambient, ineqs, eqs)?;
        Cone::from_rays(ambient, &dirs)
    }

    fn zero(ambient: usize) -> Cone {
        let equations = (0..ambient)
            .map(|i| {
                let mut v = vec![0i64; ambient];
                v[i] = 1;
                PicVector(v)
            })
            .collect();
        Cone {
            ambient,
            rays: vec![],
            facets: vec![],
            equations,
        }
    }

    pub fn contains(&self, v: &PicVector) -> bool {
        assert_eq!(v.len(), self.ambient, "dimension mismatch");
        self.equations.iter().all(|e| e.dot(v) == 0)
            && self.facets.iter().all(|f| f.dot(v) >= 0)
    }

    /// A lattice point in the relative interior (the sum of the extreme
    /// rays; the apex for the zero cone).
    pub fn relative_interior_point(&self) -> PicVector {
        let mut acc = PicVector::zero(self.ambient);
        for r in &self.rays {
            acc = &acc + r;
        }
        acc
    }

    /// A functional strictly positive on the cone minus the apex (sum of the
    /// facet normals). Requires a pointed cone of positive dimension.
    pub fn interior_functional(&self) -> PicVector {
        let mut acc = PicVector::zero(self.ambient);
        for f in &self.facets {
            acc = &acc + f;
        }
        acc
    }

    pub fn intersect(&self, other: &Cone) -> Result<Cone> {
        assert_eq!(self.ambient, other.ambient);
        let ineqs: Vec<PicVector> = self
            .facets
            .iter()
            .chain(&other.facets)
            .cloned()
            .collect();
        let eqs: Vec<PicVector> = self
            .equations
            .iter()
            .chain(&other.equations)
            .cloned()
            .collect();
        Cone::from_inequalities(self.ambient, &ineqs, &eqs)
    }

    /// Intersection with the halfspace `h >= 0`.
    pub fn cut(&self, h: &PicVector) -> Result<Cone> {
        let mut ineqs = self.facets.clone();
        ineqs.push(h.clone());
        Cone::from_inequalities(self.ambient, &ineqs, &self.equations)
    }

    /// Minimal generators of the monoid of lattice points, lex-sorted.
    pub fn hilbert_basis(&self) -> Result<Vec<PicVector>> {
        if self.rays.is_empty() {
            return Ok(vec![]);
        }
        let prim: Vec<Vec<i64>> = self.rays.iter().map(|r| r.0.clone()).collect();
        let (basis, _) = span_basis_from_vectors(self.ambient, &prim);
        let s = basis_cols(&basis);
        let rays_w: Vec<Vec<i64>> = prim.iter().map(|v| express_in_span(&basis, v)).collect();
        let facets_w = full_dim_facets(s, &rays_w)?;

        let simplices: Vec<Vec<usize>> = triangulate(s, &rays_w, &facets_w)?;
        let mut candidates: Vec<Vec<i64>> = rays_w.clone();
        for simplex in &simplices {
            let cols: Vec<Vec<i64>> = simplex.iter().map(|&i| rays_w[i].clone()).collect();
            candidates.extend(parallelepiped_points(s, &cols));
        }
        candidates.retain(|c| !c.iter().all(|&x| x == 0));
        candidates.retain(|c| facets_w.iter().all(|f| dot(f, c) >= 0));
        candidates.sort();
        candidates.dedup();

        let in_cone = |v: &[i64]| facets_w.iter().all(|f| dot(f, v) >= 0);
        let mut hb: Vec<Vec<i64>> = vec![];
        'outer: for c in &candidates {
            for y in &candidates {
                if y == c {
                    continue;
                }
                let diff: Vec<i64> = c.iter().zip(y).map(|(a, b)| a - b).collect();
                if !diff.iter().all(|&x| x == 0) && in_cone(&diff) {
                    continue 'outer;
                }
            }
            hb.push(c.clone());
        }

        let mut out: Vec<PicVector> = hb
            .iter()
            .map(|w| PicVector(apply_basis(&basis, w)))
            .collect();
        out.sort();
        Ok(out)
    }
}

/// True when the cone `{x : eqs x = 0, ineqs x >= 0}` is the origin only.
/// Unlike the `Cone` constructors this accepts non-pointed input.
pub fn constrained_directions_trivial(
    ambient: usize,
    ineqs: &[PicVector],
    eqs: &[PicVector],
) -> Result<bool> {
    if ambient > 3 {
        return Err(Error::UnsupportedRank(ambient));
    }
    match feasible_directions_allow_lines(ambient, ineqs, eqs)? {
        None => Ok(false), // nontrivial lineality
        Some(dirs) => Ok(dirs.is_empty()),
    }
}

// ---------------------------------------------------------------------------
// helpers

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Divide by the gcd of the entries, keeping the direction (unlike
/// `matrix::primitive`, which normalizes the sign).
fn reduce_dir(v: &[i64]) -> Vec<i64> {
    use num_integer::Integer;
    let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
    if g == 0 {
        v.to_vec()
    } else {
        v.iter().map(|&x| x / g).collect()
    }
}

fn basis_cols(basis: &IntMat) -> usize {
    basis.first().map_or(0, |r| r.len())
}

/// Saturated integer basis of the span of the given vectors, as the columns
/// of an `ambient x s` matrix, together with a left inverse (`s x ambient`)
/// used to lift functionals.
fn span_basis_from_vectors(ambient: usize, vecs: &[Vec<i64>]) -> (IntMat, IntMat) {
    // equations for the span: rational nullspace of the vector matrix
    let rows = matrix::int_to_rat(&vecs.to_vec());
    let ns = matrix::nullspace(&rows);
    let eqs: IntMat = ns.iter().map(|v| matrix::rat_to_primitive_int(v)).collect();
    let basis = kernel_lattice_basis(ambient, &eqs);
    let left_inv = saturated_left_inverse(&basis);
    (basis, left_inv)
}

/// Integer basis of `{x : E x = 0}` as columns of an `ambient x s` matrix.
fn kernel_lattice_basis(ambient: usize, eqs: &IntMat) -> IntMat {
    if eqs.is_empty() {
        return matrix::identity(ambient);
    }
    let (d, _u, v) = matrix::smith_normal_form(eqs);
    let r = (0..eqs.len().min(ambient))
        .filter(|&i| d[i][i] != 0)
        .count();
    // kernel basis = last ambient - r columns of v
    (0..ambient)
        .map(|i| (r..ambient).map(|j| v[i][j]).collect())
        .collect()
}

/// For a saturated `ambient x s` basis matrix `B`, an integer `s x ambient`
/// matrix `G` with `G B = I`.
fn saturated_left_inverse(basis: &IntMat) -> IntMat {
    let s = basis_cols(basis);
    if s == 0 {
        return vec![];
    }
    let (d, u, v) = matrix::smith_normal_form(basis);
    for i in 0..s {
        debug_assert_eq!(d[i][i].abs(), 1, "span basis must be saturated");
    }
    // u * basis * v = [D; 0] with D diagonal +-1, so
    // (v * D^-1 * [I 0] * u) * basis = I
    let ambient = basis.len();
    let mut top_u: IntMat = vec![vec![0; ambient]; s];
    for i in 0..s {
        for j in 0..ambient {
            top_u[i][j] = u[i][j] * d[i][i].signum();
        }
    }
    matrix::mat_mul(&v, &top_u)
}

fn express_in_span(basis: &IntMat, v: &[i64]) -> Vec<i64> {
    let s = basis_cols(basis);
    let a = matrix::int_to_rat(basis);
    let b: Vec<Rat> = v.iter().map(|&x| Rat::from_int(x)).collect();
    let x = matrix::solve(&a, &b).expect("vector lies in span");
    (0..s)
        .map(|i| {
            assert!(x[i].is_integer(), "span basis is saturated");
            i64::try_from(x[i].numer()).expect("desk scale")
        })
        .collect()
}

fn apply_basis(basis: &IntMat, w: &[i64]) -> Vec<i64> {
    basis.iter().map(|row| dot(row, w)).collect()
}

fn lift_functional(left_inv: &IntMat, fw: &[i64]) -> Vec<i64> {
    // h(B w) = fw . w  for  h = fw^T * left_inv
    let ambient = left_inv.first().map_or(0, |r| r.len());
    let mut h = vec![0i64; ambient];
    for (i, &c) in fw.iter().enumerate() {
        for j in 0..ambient {
            h[j] += c * left_inv[i][j];
        }
    }
    reduce_dir(&h)
}

fn span_equations(ambient: usize, basis: &IntMat) -> Vec<PicVector> {
    let s = basis_cols(basis);
    if s == ambient {
        return vec![];
    }
    let cols: IntMat = (0..s)
        .map(|j| (0..ambient).map(|i| basis[i][j]).collect())
        .collect();
    let rows = matrix::int_to_rat(&cols);
    let ns = matrix::nullspace(&rows);
    let mut eqs: Vec<Vec<i64>> = ns.iter().map(|v| matrix::rat_to_primitive_int(v)).collect();
    eqs.sort();
    eqs.into_iter().map(PicVector).collect()
}

/// Facet normals of the full-dimensional pointed cone spanned by `rays_w`
/// in `Z^s`. Errors when the cone is not pointed.
fn full_dim_facets(s: usize, rays_w: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let mut facets: Vec<Vec<i64>> = match s {
        0 => vec![],
        1 => {
            let pos = rays_w.iter().any(|r| r[0] > 0);
            let neg = rays_w.iter().any(|r| r[0] < 0);
            if pos && neg {
                return Err(Error::NonPointed);
            }
            vec![if pos { vec![1] } else { vec![-1] }]
        }
        2 => {
            let mut out = vec![];
            for r in rays_w {
                for n in [vec![-r[1], r[0]], vec![r[1], -r[0]]] {
                    if rays_w.iter().all(|x| dot(&n, x) >= 0) {
                        out.push(reduce_dir(&n));
                    }
                }
            }
            out
        }
        3 => {
            let mut out = vec![];
            for i in 0..rays_w.len() {
                for j in (i + 1)..rays_w.len() {
                    let n = cross(&rays_w[i], &rays_w[j]);
                    if n.iter().all(|&x| x == 0) {
                        continue;
                    }
                    if rays_w.iter().all(|x| dot(&n, x) >= 0) {
                        out.push(reduce_dir(&n));
                    } else if rays_w.iter().all(|x| dot(&n, x) <= 0) {
                        out.push(reduce_dir(&n.iter().map(|&x| -x).collect::<Vec<_>>()));
                    }
                }
            }
            // keep genuine facets: tight rays span a plane
            out.retain(|n| {
                let tight: IntMat = rays_w
                    .iter()
                    .filter(|r| dot(n, r) == 0)
                    .cloned()
                    .collect();
                matrix::int_rank(&tight) == 2
            });
            out
        }
        _ => return Err(Error::UnsupportedRank(s)),
    };
    facets.sort();
    facets.dedup();
    if s > 0 && matrix::int_rank(&facets) < s {
        return Err(Error::NonPointed);
    }
    Ok(facets)
}

fn cross(a: &[i64], b: &[i64]) -> Vec<i64> {
    vec![
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Extreme directions of `{x : eqs x = 0, ineqs x >= 0}`; errors on
/// non-pointed input.
fn feasible_directions(
    ambient: usize,
    ineqs: &[PicVector],
    eqs: &[PicVector],
) -> Result<Vec<PicVector>> {
    feasible_directions_allow_lines(ambient, ineqs, eqs)?.ok_or(Error::NonPointed)
}

/// As above but returns `None` when the region contains a line.
fn feasible_directions_allow_lines(
    ambient: usize,
    ineqs: &[PicVector],
    eqs: &[PicVector],
) -> Result<Option<Vec<PicVector>>> {
    let eqs_mat: IntMat = eqs.iter().map(|e| e.0.clone()).collect();
    let basis = kernel_lattice_basis(ambient, &eqs_mat);
    let s = basis_cols(&basis);
    if s == 0 {
        return Ok(Some(vec![]));
    }
    // restrict inequalities to span coordinates
    let mut ineqs_w: Vec<Vec<i64>> = ineqs
        .iter()
        .map(|h| {
            (0..s)
                .map(|j| (0..ambient).map(|i| h.0[i] * basis[i][j]).sum())
                .collect::<Vec<i64>>()
        })
        .filter(|hw: &Vec<i64>| hw.iter().any(|&x| x != 0))
        .map(|hw| reduce_dir(&hw))
        .collect();
    ineqs_w.sort();
    ineqs_w.dedup();

    // lineality: any direction on which every inequality vanishes
    if matrix::int_rank(&ineqs_w) < s {
        return Ok(None);
    }

    let mut candidates: Vec<Vec<i64>> = vec![];
    match s {
        1 => {
            candidates.push(vec![1]);
            candidates.push(vec![-1]);
        }
        2 => {
            for h in &ineqs_w {
                candidates.push(vec![h[1], -h[0]]);
                candidates.push(vec![-h[1], h[0]]);
            }
        }
        3 => {
            for i in 0..ineqs_w.len() {
                for j in (i + 1)..ineqs_w.len() {
                    let d = cross(&ineqs_w[i], &ineqs_w[j]);
                    if d.iter().any(|&x| x != 0) {
                        candidates.push(d.iter().map(|&x| -x).collect());
                        candidates.push(d);
                    }
                }
            }
        }
        _ => return Err(Error::UnsupportedRank(s)),
    }
    let mut dirs: Vec<PicVector> = candidates
        .into_iter()
        .filter(|c| ineqs_w.iter().all(|h| dot(h, c) >= 0))
        .map(|c| PicVector(apply_basis(&basis, &c)))
        .collect();
    dirs.sort();
    dirs.dedup();
    Ok(Some(dirs))
}

/// Order the extreme rays of a full-dimensional pointed cone so consecutive
/// rays share a facet, then fan out simplices from the first ray.
fn triangulate(s: usize, rays_w: &[Vec<i64>], facets_w: &[Vec<i64>]) -> Result<Vec<Vec<usize>>> {
    match s {
        0 | 1 => Ok(vec![]),
        2 => {
            // extreme rays of a planar pointed cone: exactly the two boundary
            // rays; the cone they span is the whole thing
            let extreme: Vec<usize> = (0..rays_w.len())
                .filter(|&i| facets_w.iter().any(|f| dot(f, &rays_w[i]) == 0))
                .collect();
            if extreme.len() == 1 {
                return Ok(vec![]);
            }
            Ok(vec![vec![extreme[0], extreme[1]]])
        }
        3 => {
            let n = rays_w.len();
            // adjacency: two rays sharing a facet
            let mut adj = vec![vec![]; n];
            for f in facets_w {
                let tight: Vec<usize> = (0..n).filter(|&i| dot(f, &rays_w[i]) == 0).collect();
                // a facet of a pointed 3d cone is a planar cone; its extreme
                // rays are the two boundary ones
                let boundary: Vec<usize> = tight
                    .iter()
                    .copied()
                    .filter(|&i| {
                        // extreme within the facet: tight on a second facet
                        facets_w
                            .iter()
                            .filter(|g| *g != f)
                            .any(|g| dot(g, &rays_w[i]) == 0)
                    })
                    .collect();
                if boundary.len() == 2 {
                    adj[boundary[0]].push(boundary[1]);
                    adj[boundary[1]].push(boundary[0]);
                }
            }
            // walk the cycle
            let start = 0usize;
            let mut order = vec![start];
            let mut prev = usize::MAX;
            let mut cur = start;
            loop {
                let next = adj[cur]
                    .iter()
                    .copied()
                    .find(|&x| x != prev)
                    .ok_or(Error::NonPointed)?;
                if next == start {
                    break;
                }
                order.push(next);
                prev = cur;
                cur = next;
                if order.len() > n {
                    return Err(Error::InvalidInput("bad facet cycle".into()));
                }
            }
            Ok((1..order.len() - 1)
                .map(|i| vec![order[0], order[i], order[i + 1]])
                .collect())
        }
        _ => Err(Error::UnsupportedRank(s)),
    }
}

/// Lattice points of `{sum t_i r_i : 0 <= t_i <= 1}` for `s` independent
/// columns in `Z^s`.
fn parallelepiped_points(s: usize, cols: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut lower = vec![0i64; s];
    let mut upper = vec![0i64; s];
    for r in cols {
        for i in 0..s {
            lower[i] += r[i].min(0);
            upper[i] += r[i].max(0);
        }
    }
    let a: Vec<Vec<Rat>> = (0..s)
        .map(|i| cols.iter().map(|c| Rat::from_int(c[i])).collect())
        .collect();
    let mut out = vec![];
    let mut point = vec![0i64; s];
    enumerate_box(&lower, &upper, 0, &mut point, &mut |p: &[i64]| {
        let b: Vec<Rat> = p.iter().map(|&x| Rat::from_int(x)).collect();
        if let Some(t) = matrix::solve(&a, &b) {
            let one = Rat::from_int(1);
            if t.iter().all(|ti| ti >= &Rat::zero() && ti <= &one) {
                out.push(p.to_vec());
            }
        }
    });
    out
}

fn enumerate_box(
    lower: &[i64],
    upper: &[i64],
    i: usize,
    point: &mut Vec<i64>,
    f: &mut impl FnMut(&[i64]),
) {
    if i == lower.len() {
        f(point);
        return;
    }
    for x in lower[i]..=upper[i] {
        point[i] = x;
        enumerate_box(lower, upper, i + 1, point, f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(v: &[i64]) -> PicVector {
        PicVector(v.to_vec())
    }

    #[test]
    fn quadrant_membership() {
        let nef = Cone::positive_quadrant(2);
        assert!(nef.contains(&pv(&[1, 0])));
        assert!(nef.contains(&pv(&[0, 0])));
        assert!(!nef.contains(&pv(&[-1, 1])));
    }

    #[test]
    fn eff_h2_cone() {
        let eff = Cone::from_rays(2, &[pv(&[1, 0]), pv(&[-2, 1]), pv(&[0, 1])]).unwrap();
        assert_eq!(eff.rays(), &[pv(&[-2, 1]), pv(&[1, 0])]);
        assert!(eff.contains(&pv(&[0, 1])));
        assert!(eff.contains(&pv(&[-2, 1])));
        assert!(!eff.contains(&pv(&[-3, 1])));
        assert!(!eff.contains(&pv(&[0, -1])));
    }

    #[test]
    fn non_pointed_rejected() {
        assert!(matches!(
            Cone::from_rays(2, &[pv(&[1, 0]), pv(&[-1, 0])]),
            Err(Error::NonPointed)
        ));
    }

    #[test]
    fn intersection_of_cones() {
        let a = Cone::from_rays(2, &[pv(&[1, 0]), pv(&[0, 1])]).unwrap();
        let b = Cone::from_rays(2, &[pv(&[1, 1]), pv(&[-1, 1])]).unwrap();
        let c = a.intersect(&b).unwrap();
        assert_eq!(c.rays(), &[pv(&[0, 1]), pv(&[1, 1])]);
    }

    #[test]
    fn hilbert_basis_quadrant_and_eff() {
        let nef = Cone::positive_quadrant(2);
        assert_eq!(nef.hilbert_basis().unwrap(), vec![pv(&[0, 1]), pv(&[1, 0])]);

        // Eff H_2 is unimodular, so its rays already generate the monoid
        let eff = Cone::from_rays(2, &[pv(&[1, 0]), pv(&[-2, 1])]).unwrap();
        assert_eq!(
            eff.hilbert_basis().unwrap(),
            vec![pv(&[-2, 1]), pv(&[1, 0])]
        );

        // a genuinely non-unimodular cone
        let c = Cone::from_rays(2, &[pv(&[1, 0]), pv(&[1, 3])]).unwrap();
        let hb = c.hilbert_basis().unwrap();
        assert_eq!(hb, vec![pv(&[1, 0]), pv(&[1, 1]), pv(&[1, 2]), pv(&[1, 3])]);
    }

    #[test]
    fn hilbert_basis_generates_in_box() {
        let c = Cone::from_rays(2, &[pv(&[2, 1]), pv(&[1, 3])]).unwrap();
        let hb = c.hilbert_basis().unwrap();
        // every lattice point of the cone in a box must be an N-combination
        for x in -6..=6i64 {
            for y in -6..=6i64 {
                let p = pv(&[x, y]);
                if !c.contains(&p) || p.is_zero() {
                    continue;
                }
                assert!(n_combination(&p, &hb, &c), "{p:?} not generated");
            }
        }
    }

    fn n_combination(p: &PicVector, hb: &[PicVector], c: &Cone) -> bool {
        if p.is_zero() {
            return true;
        }
        for h in hb {
            let d = p - h;
            if c.contains(&d) && n_combination(&d, hb, c) {
                return true;
            }
        }
        false
    }

    #[test]
    fn one_dimensional_cone() {
        let c = Cone::from_rays(1, &[pv(&[2])]).unwrap();
        assert_eq!(c.rays(), &[pv(&[1])]);
        assert_eq!(c.hilbert_basis().unwrap(), vec![pv(&[1])]);
    }

    #[test]
    fn ray_in_plane() {
        let c = Cone::from_rays(2, &[pv(&[1, 2])]).unwrap();
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&pv(&[2, 4])));
        assert!(!c.contains(&pv(&[-1, -2])));
        assert!(!c.contains(&pv(&[1, 1])));
        assert_eq!(c.hilbert_basis().unwrap(), vec![pv(&[1, 2])]);
    }

    #[test]
    fn three_dimensional_cone() {
        let c = Cone::from_rays(
            3,
            &[pv(&[1, 0, 0]), pv(&[0, 1, 0]), pv(&[0, 0, 1]), pv(&[1, 1, 1])],
        )
        .unwrap();
        // the fourth generator is interior, hence not extreme
        assert_eq!(
            c.rays(),
            &[pv(&[0, 0, 1]), pv(&[0, 1, 0]), pv(&[1, 0, 0])]
        );
        assert!(c.contains(&pv(&[2, 3, 1])));
        assert!(!c.contains(&pv(&[-1, 0, 0])));
        assert_eq!(
            c.hilbert_basis().unwrap(),
            vec![pv(&[0, 0, 1]), pv(&[0, 1, 0]), pv(&[1, 0, 0])]
        );
    }

    #[test]
    fn square_pyramid_cone() {
        let c = Cone::from_rays(
            3,
            &[
                pv(&[1, 0, 1]),
                pv(&[0, 1, 1]),
                pv(&[-1, 0, 1]),
                pv(&[0, -1, 1]),
            ],
        )
        .unwrap();
        assert_eq!(c.rays().len(), 4);
        assert_eq!(c.facets().len(), 4);
        let hb = c.hilbert_basis().unwrap();
        assert!(hb.contains(&pv(&[0, 0, 1])));
        assert_eq!(hb.len(), 5);
    }

    #[test]
    fn constrained_directions() {
        // x >= 0, y >= 0, x + y <= 0 forces the origin
        assert!(constrained_directions_trivial(
            2,
            &[pv(&[1, 0]), pv(&[0, 1]), pv(&[-1, -1])],
            &[]
        )
        .unwrap());
        // a halfplane is nontrivial (and contains no line through 0 only if...)
        assert!(!constrained_directions_trivial(2, &[pv(&[1, 0])], &[]).unwrap());
        // equations only: a line remains
        assert!(!constrained_directions_trivial(2, &[], &[pv(&[1, 0])]).unwrap());
    }
}
