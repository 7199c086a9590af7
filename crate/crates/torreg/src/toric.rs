//! Smooth projective toric varieties from fan data: validation, the Cox
//! grading, the irrelevant ideal, and the nef/effective cones.
//!
//! Projectivity itself is not verified algorithmically — the caller asserts
//! it by using this type. Smoothness and completeness are checked, which is
//! enough for every fixture in this crate (Hirzebruch surfaces, projective
//! spaces and their products).

use num_integer::Integer;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::lattice::{cokernel_grading, Cone, FineVector, Grading, PicVector};

/// A complete simplicial fan in `Z^d`, `d <= 3`.
#[derive(Clone, Debug, Deserialize)]
pub struct Fan {
    pub rays: Vec<FineVector>,
    pub max_cones: Vec<Vec<usize>>,
}

impl Fan {
    pub fn from_json(text: &str) -> Result<Fan> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("fan JSON: {e}")))
    }

    pub fn dim(&self) -> usize {
        self.rays.first().map_or(0, |r| r.len())
    }
}

#[derive(Clone, Debug)]
pub struct ToricVariety {
    pub fan: Fan,
    pub grading: Grading,
    /// complement σ̂ of each maximal cone, as sorted ray indices
    pub irrelevant_complements: Vec<Vec<usize>>,
    pub nef: Cone,
    pub eff: Cone,
    /// minimal generators of the nef monoid, lex-sorted
    pub nef_gens: Vec<PicVector>,
}

impl ToricVariety {
    pub fn picard_rank(&self) -> usize {
        self.grading.rank
    }

    pub fn num_vars(&self) -> usize {
        self.fan.rays.len()
    }

    pub fn var_degrees(&self) -> Vec<PicVector> {
        (0..self.num_vars())
            .map(|i| self.grading.var_degree(i))
            .collect()
    }

    /// Generators of the irrelevant ideal: one squarefree exponent vector
    /// `x^{σ̂}` per maximal cone, in fan order.
    pub fn irrelevant_generators(&self) -> Vec<FineVector> {
        self.irrelevant_complements
            .iter()
            .map(|comp| {
                let mut e = vec![0i64; self.num_vars()];
                for &i in comp {
                    e[i] = 1;
                }
                FineVector(e)
            })
            .collect()
    }
}

pub fn build_variety(fan: Fan) -> Result<ToricVariety> {
    let d = fan.dim();
    let n = fan.rays.len();
    if d == 0 || d > 3 {
        return Err(Error::UnsupportedRank(d));
    }
    for (i, r) in fan.rays.iter().enumerate() {
        if r.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: r.len(),
            });
        }
        let g = r.0.iter().fold(0i64, |g, &x| g.gcd(&x));
        if g != 1 {
            return Err(Error::InvalidInput(format!("ray {i} is not primitive")));
        }
        if fan.rays[..i].contains(r) {
            return Err(Error::InvalidInput(format!("ray {i} duplicates an earlier ray")));
        }
    }
    if fan.max_cones.is_empty() {
        return Err(Error::InvalidInput("fan has no maximal cones".into()));
    }
    for (k, sigma) in fan.max_cones.iter().enumerate() {
        if sigma.iter().any(|&i| i >= n) {
            return Err(Error::InvalidInput(format!(
                "maximal cone {k} references a ray out of range"
            )));
        }
        let mut sorted = sigma.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != d || sigma.len() != d {
            return Err(Error::NonSmooth(k));
        }
        let m: Vec<Vec<i64>> = sigma.iter().map(|&i| fan.rays[i].0.clone()).collect();
        if det(&m).abs() != 1 {
            return Err(Error::NonSmooth(k));
        }
    }

    // completeness: each facet of a maximal cone is shared by exactly one
    // other maximal cone (for d=1 the shared face is the apex)
    let mut facet_counts: std::collections::HashMap<Vec<usize>, usize> = Default::default();
    for sigma in &fan.max_cones {
        let mut sorted = sigma.clone();
        sorted.sort();
        for drop in 0..d {
            let facet: Vec<usize> = sorted
                .iter()
                .enumerate()
                .filter(|&(p, _)| p != drop)
                .map(|(_, &i)| i)
                .collect();
            *facet_counts.entry(facet).or_insert(0) += 1;
        }
    }
    if let Some((facet, _)) = facet_counts.iter().find(|&(_, &c)| c != 2) {
        return Err(Error::IncompleteFan(facet.clone()));
    }

    let grading = cokernel_grading(&fan.rays)?;
    let rho = grading.rank;

    let irrelevant_complements: Vec<Vec<usize>> = fan
        .max_cones
        .iter()
        .map(|sigma| (0..n).filter(|i| !sigma.contains(i)).collect())
        .collect();

    let eff = Cone::from_rays(
        rho,
        &(0..n).map(|i| grading.var_degree(i)).collect::<Vec<_>>(),
    )?;
    let mut nef = eff.clone();
    for comp in &irrelevant_complements {
        let gens: Vec<PicVector> = comp.iter().map(|&i| grading.var_degree(i)).collect();
        let sigma_hat = Cone::from_rays(rho, &gens)?;
        nef = nef.intersect(&sigma_hat)?;
    }
    let nef_gens = nef.hilbert_basis()?;

    Ok(ToricVariety {
        fan,
        grading,
        irrelevant_complements,
        nef,
        eff,
        nef_gens,
    })
}

fn det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        3 => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
        _ => unreachable!("dimension checked by caller"),
    }
}

/// Hirzebruch surface fan `H_t`.
pub fn hirzebruch_fan(t: i64) -> Fan {
    Fan {
        rays: vec![
            FineVector(vec![1, 0]),
            FineVector(vec![0, 1]),
            FineVector(vec![-1, t]),
            FineVector(vec![0, -1]),
        ],
        max_cones: vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
    }
}

/// Fan of projective space `P^d`, `d <= 3`.
pub fn projective_space_fan(d: usize) -> Fan {
    let mut rays: Vec<FineVector> = (0..d)
        .map(|i| {
            let mut v = vec![0i64; d];
            v[i] = 1;
            FineVector(v)
        })
        .collect();
    rays.push(FineVector(vec![-1; d]));
    let max_cones = (0..=d)
        .map(|skip| (0..=d).filter(|&i| i != skip).collect())
        .collect();
    Fan { rays, max_cones }
}

/// Fan of `P^1 x P^1`.
pub fn p1xp1_fan() -> Fan {
    Fan {
        rays: vec![
            FineVector(vec![1, 0]),
            FineVector(vec![-1, 0]),
            FineVector(vec![0, 1]),
            FineVector(vec![0, -1]),
        ],
        max_cones: vec![vec![0, 2], vec![2, 1], vec![1, 3], vec![3, 0]],
    }
}
