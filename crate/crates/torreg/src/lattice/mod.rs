//! Integer lattice arithmetic: Picard and fine lattice vectors, degree maps
//! from ray matrices, the nef partial order, and minimal elements.

mod chamber;
mod cone;

pub use chamber::{chamber_complex, wall_witness, ChamberComplex, WallWitness};
pub use cone::{constrained_directions_trivial, Cone};

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{self, IntMat};
use crate::scalar::Field;

/// Element of the Picard lattice `Z^rho`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PicVector(pub Vec<i64>);

/// Element of the ray-indexed lattice `Z^n` (monomial exponents live here).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FineVector(pub Vec<i64>);

macro_rules! vector_impls {
    ($name:ident) => {
        impl $name {
            pub fn zero(len: usize) -> Self {
                $name(vec![0; len])
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn is_zero(&self) -> bool {
                self.0.iter().all(|&x| x == 0)
            }

            pub fn scaled(&self, k: i64) -> Self {
                $name(self.0.iter().map(|&x| k * x).collect())
            }

            pub fn dot(&self, other: &Self) -> i64 {
                assert_eq!(self.len(), other.len());
                self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
            }
        }

        impl Add for &$name {
            type Output = $name;
            fn add(self, rhs: &$name) -> $name {
                assert_eq!(self.len(), rhs.len());
                $name(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
            }
        }

        impl Sub for &$name {
            type Output = $name;
            fn sub(self, rhs: &$name) -> $name {
                assert_eq!(self.len(), rhs.len());
                $name(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
            }
        }

        impl Neg for &$name {
            type Output = $name;
            fn neg(self) -> $name {
                $name(self.0.iter().map(|&x| -x).collect())
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "(")?;
                for (i, x) in self.0.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt::Debug::fmt(self, f)
            }
        }
    };
}

vector_impls!(PicVector);
vector_impls!(FineVector);

/// Pic grading of a Cox ring, presented as the cokernel of the ray matrix.
#[derive(Clone, Debug)]
pub struct Grading {
    /// Picard rank.
    pub rank: usize,
    /// `rank x n` matrix; column `i` is the degree of the `i`-th variable.
    pub degree_map: IntMat,
    /// `n x rank` integer right inverse of the degree map.
    pub right_inverse: IntMat,
    /// Columns spanning the kernel of the degree map as a saturated lattice
    /// (one column per fan dimension).
    pub kernel_basis: IntMat,
}

impl Grading {
    pub fn degree(&self, exponents: &FineVector) -> PicVector {
        PicVector(
            self.degree_map
                .iter()
                .map(|row| row.iter().zip(&exponents.0).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    pub fn var_degree(&self, i: usize) -> PicVector {
        PicVector(self.degree_map.iter().map(|row| row[i]).collect())
    }

    pub fn num_vars(&self) -> usize {
        self.degree_map.first().map_or(0, |r| r.len())
    }

    /// One integer preimage of `b` under the degree map.
    pub fn fiber_point(&self, b: &PicVector) -> FineVector {
        FineVector(
            self.right_inverse
                .iter()
                .map(|row| row.iter().zip(&b.0).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }
}

/// Degree map of the Cox ring from the fan's ray matrix, computed as the
/// cokernel of the dual map via Smith normal form.
///
/// The Pic basis is canonicalized so that the degrees of a chosen subset of
/// variables become the standard basis: among all size-`rho` subsets of
/// columns with unimodular degree matrix, the one with the largest indices
/// (compared from the back) wins. On Hirzebruch surfaces this reproduces
/// `deg x_0 = deg x_2 = (1,0)`, `deg x_1 = (-t,1)`, `deg x_3 = (0,1)`.
pub fn cokernel_grading(rays: &[FineVector]) -> Result<Grading> {
    let n = rays.len();
    let d = rays.first().map_or(0, |r| r.len());
    for r in rays {
        if r.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: r.len(),
            });
        }
    }
    let b: IntMat = rays.iter().map(|r| r.0.clone()).collect();
    let (diag, u, _v) = matrix::smith_normal_form(&b);
    let mut rank_b = 0;
    for i in 0..d.min(n) {
        if diag[i][i] != 0 {
            if diag[i][i].abs() != 1 {
                return Err(Error::UnsupportedGrading);
            }
            rank_b += 1;
        }
    }
    if rank_b != d {
        return Err(Error::InvalidInput(
            "ray matrix does not have full rank (fan not complete)".into(),
        ));
    }
    let rho = n - d;
    let g0: IntMat = u[d..].to_vec();

    // canonical basis: largest-index unimodular column subset becomes identity
    let mut best: Option<Vec<usize>> = None;
    for subset in subsets_of_size(n, rho) {
        let m: IntMat = g0
            .iter()
            .map(|row| subset.iter().map(|&j| row[j]).collect())
            .collect();
        if int_det(&m).abs() == 1 {
            let better = match &best {
                None => true,
                Some(cur) => {
                    let a: Vec<i64> = subset.iter().rev().map(|&x| x as i64).collect();
                    let c: Vec<i64> = cur.iter().rev().map(|&x| x as i64).collect();
                    a > c
                }
            };
            if better {
                best = Some(subset.clone());
            }
        }
    }
    let degree_map = match best {
        Some(subset) => {
            let m: IntMat = g0
                .iter()
                .map(|row| subset.iter().map(|&j| row[j]).collect())
                .collect();
            let m_inv = int_inverse_unimodular(&m);
            matrix::mat_mul(&m_inv, &g0)
        }
        None => g0,
    };

    // right inverse: solve degree_map * R = I column by column over Q;
    // solutions are integral because the degree map is surjective over Z
    let a_rat = matrix::int_to_rat(&degree_map);
    let mut right_inverse = vec![vec![0i64; rho]; n];
    for j in 0..rho {
        let e: Vec<crate::scalar::Rat> = (0..rho)
            .map(|i| crate::scalar::Rat::from_int(i64::from(i == j)))
            .collect();
        let x = matrix::solve(&a_rat, &e).ok_or(Error::UnsupportedGrading)?;
        for (i, xi) in x.iter().enumerate() {
            if !xi.is_integer() {
                return Err(Error::UnsupportedGrading);
            }
            right_inverse[i][j] = rat_to_i64(xi);
        }
    }

    // kernel basis: column k of the ray matrix is the image of the k-th
    // lattice basis vector under the dual map, and these columns extend to a
    // Z-basis of Z^n, so they span the kernel of the degree map saturately
    let kernel_basis = b;
    Ok(Grading {
        rank: rho,
        degree_map,
        right_inverse,
        kernel_basis,
    })
}

fn rat_to_i64(x: &crate::scalar::Rat) -> i64 {
    i64::try_from(x.numer()).expect("entry exceeds i64 at desk scale")
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut cur = vec![];
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn int_det(m: &IntMat) -> i64 {
    let n = m.len();
    match n {
        0 => 1,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => {
            let mut det = 0i64;
            for j in 0..n {
                let minor: IntMat = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &x)| x)
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                det += sign * m[0][j] * int_det(&minor);
            }
            det
        }
    }
}

fn int_inverse_unimodular(m: &IntMat) -> IntMat {
    let n = m.len();
    let a = matrix::int_to_rat(m);
    let mut inv = vec![vec![0i64; n]; n];
    for j in 0..n {
        let e: Vec<crate::scalar::Rat> = (0..n)
            .map(|i| crate::scalar::Rat::from_int(i64::from(i == j)))
            .collect();
        let x = matrix::solve(&a, &e).expect("unimodular matrix is invertible");
        for i in 0..n {
            inv[i][j] = rat_to_i64(&x[i]);
        }
    }
    inv
}

/// `a <= b` in the partial order induced by the nef cone.
pub fn nef_leq(a: &PicVector, b: &PicVector, nef: &Cone) -> bool {
    nef.contains(&(b - a))
}

/// Minimal elements of a finite set under the nef partial order, lex-sorted.
pub fn minimal_elements(points: &[PicVector], nef: &Cone) -> Vec<PicVector> {
    let mut sorted: Vec<PicVector> = points.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut out = vec![];
    'outer: for p in &sorted {
        for q in &sorted {
            if q != p && nef_leq(q, p, nef) {
                continue 'outer;
            }
        }
        out.push(p.clone());
    }
    out
}

fn box_points(lower: &PicVector, upper: &PicVector) -> Vec<PicVector> {
    let mut out = vec![PicVector(vec![])];
    for (lo, hi) in lower.0.iter().zip(&upper.0) {
        out = out
            .into_iter()
            .flat_map(|p| {
                (*lo..=*hi).map(move |v| {
                    let mut q = p.clone();
                    q.0.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

/// Minimal common upper bounds of `points` in the cone partial order, found
/// by a widening grid search. `basis` must generate the cone's lattice-point
/// monoid, so that checking one basis step certifies minimality.
pub fn minimal_upper_bounds(
    points: &[PicVector],
    cone: &Cone,
    basis: &[PicVector],
) -> Vec<PicVector> {
    bounds_search(points, cone, basis, true)
}

/// Maximal common lower bounds; mirror of `minimal_upper_bounds`.
pub fn maximal_lower_bounds(
    points: &[PicVector],
    cone: &Cone,
    basis: &[PicVector],
) -> Vec<PicVector> {
    bounds_search(points, cone, basis, false)
}

fn bounds_search(
    points: &[PicVector],
    cone: &Cone,
    basis: &[PicVector],
    upper: bool,
) -> Vec<PicVector> {
    if points.is_empty() {
        return vec![];
    }
    let rho = points[0].len();
    let is_bound = |t: &PicVector| {
        points.iter().all(|p| {
            let diff = if upper { t - p } else { p - t };
            cone.contains(&diff)
        })
    };
    let extremal = |t: &PicVector| {
        !basis.iter().any(|h| {
            let step = if upper { t - h } else { t + h };
            is_bound(&step)
        })
    };
    let lo: Vec<i64> = (0..rho)
        .map(|k| points.iter().map(|p| p.0[k]).min().unwrap())
        .collect();
    let hi: Vec<i64> = (0..rho)
        .map(|k| points.iter().map(|p| p.0[k]).max().unwrap())
        .collect();
    let span = (0..rho).map(|k| hi[k] - lo[k]).max().unwrap_or(0);
    let spread = basis
        .iter()
        .flat_map(|h| h.0.iter().map(|v| v.abs()))
        .max()
        .unwrap_or(1);
    let mut pad = 2 * (span + spread) + 4;
    for _ in 0..6 {
        let (lower, upper_box) = if upper {
            (PicVector(lo.clone()), PicVector(hi.iter().map(|v| v + pad).collect()))
        } else {
            (PicVector(lo.iter().map(|v| v - pad).collect()), PicVector(hi.clone()))
        };
        let mut found: Vec<PicVector> = box_points(&lower, &upper_box)
            .into_iter()
            .filter(|t| is_bound(t) && extremal(t))
            .collect();
        if !found.is_empty() {
            found.sort();
            return found;
        }
        pad *= 2;
    }
    vec![]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hirz_rays(t: i64) -> Vec<FineVector> {
        vec![
            FineVector(vec![1, 0]),
            FineVector(vec![0, 1]),
            FineVector(vec![-1, t]),
            FineVector(vec![0, -1]),
        ]
    }

    #[test]
    fn hirzebruch_grading_is_canonical() {
        let g = cokernel_grading(&hirz_rays(2)).unwrap();
        assert_eq!(g.rank, 2);
        assert_eq!(g.var_degree(0), PicVector(vec![1, 0]));
        assert_eq!(g.var_degree(1), PicVector(vec![-2, 1]));
        assert_eq!(g.var_degree(2), PicVector(vec![1, 0]));
        assert_eq!(g.var_degree(3), PicVector(vec![0, 1]));
    }

    #[test]
    fn hirzebruch_grading_any_t() {
        for t in 1..=3 {
            let g = cokernel_grading(&hirz_rays(t)).unwrap();
            assert_eq!(g.var_degree(1), PicVector(vec![-t, 1]));
            assert_eq!(g.var_degree(3), PicVector(vec![0, 1]));
        }
    }

    #[test]
    fn p1_and_p2_gradings() {
        let g = cokernel_grading(&[FineVector(vec![1]), FineVector(vec![-1])]).unwrap();
        assert_eq!(g.rank, 1);
        assert_eq!(g.var_degree(0), PicVector(vec![1]));
        assert_eq!(g.var_degree(1), PicVector(vec![1]));

        let g = cokernel_grading(&[
            FineVector(vec![1, 0]),
            FineVector(vec![0, 1]),
            FineVector(vec![-1, -1]),
        ])
        .unwrap();
        assert_eq!(g.rank, 1);
        for i in 0..3 {
            assert_eq!(g.var_degree(i), PicVector(vec![1]));
        }
    }

    #[test]
    fn grading_postconditions() {
        let rays = hirz_rays(2);
        let g = cokernel_grading(&rays).unwrap();
        for col in 0..2 {
            let k = FineVector(g.kernel_basis.iter().map(|row| row[col]).collect());
            assert!(g.degree(&k).is_zero());
        }
        // right inverse really is a right inverse
        for j in 0..g.rank {
            let mut e = PicVector::zero(g.rank);
            e.0[j] = 1;
            let alpha = g.fiber_point(&e);
            assert_eq!(g.degree(&alpha), e);
        }
    }

    #[test]
    fn weighted_projective_grading() {
        // P(1,2,1): the cokernel is torsion-free even though the fan is
        // singular; smoothness is rejected separately in `toric`
        let g = cokernel_grading(&[
            FineVector(vec![1, 0]),
            FineVector(vec![0, 1]),
            FineVector(vec![-1, -2]),
        ])
        .unwrap();
        assert_eq!(g.rank, 1);
        assert_eq!(g.var_degree(0), PicVector(vec![1]));
        assert_eq!(g.var_degree(1), PicVector(vec![2]));
        assert_eq!(g.var_degree(2), PicVector(vec![1]));
    }

    #[test]
    fn minimal_elements_hirzebruch() {
        let nef = Cone::positive_quadrant(2);
        let pts = vec![
            PicVector(vec![1, 3]),
            PicVector(vec![2, 2]),
            PicVector(vec![3, 3]),
            PicVector(vec![2, 4]),
        ];
        let m = minimal_elements(&pts, &nef);
        assert_eq!(m, vec![PicVector(vec![1, 3]), PicVector(vec![2, 2])]);
        assert!(minimal_elements(&[], &nef).is_empty());
    }

    #[test]
    fn nef_leq_partial_order_axioms() {
        use rand::prelude::*;
        let nef = Cone::positive_quadrant(2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let rand_vec = |rng: &mut rand_chacha::ChaCha8Rng| {
            PicVector(vec![rng.gen_range(-5..=5), rng.gen_range(-5..=5)])
        };
        for _ in 0..200 {
            let a = rand_vec(&mut rng);
            let b = rand_vec(&mut rng);
            let c = rand_vec(&mut rng);
            assert!(nef_leq(&a, &a, &nef));
            if nef_leq(&a, &b, &nef) && nef_leq(&b, &a, &nef) {
                assert_eq!(a, b);
            }
            if nef_leq(&a, &b, &nef) && nef_leq(&b, &c, &nef) {
                assert!(nef_leq(&a, &c, &nef));
            }
        }
    }
}
