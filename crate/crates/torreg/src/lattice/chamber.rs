//! Chamber decomposition of the effective cone and wall witnesses.
//!
//! The decomposition is the cell complex of the arrangement of hyperplanes
//! spanned by the degree vectors (rays in rank 2, pairwise spans in rank 3),
//! restricted to the effective cone. This refines every cone spanned by a
//! subset of the degree vectors, which is all downstream arguments need;
//! cells may be finer than the coarsest such fan.

use crate::error::{Error, Result};
use crate::matrix;

use super::cone::Cone;
use super::PicVector;

pub const DEFAULT_WITNESS_CAP: usize = 64;

#[derive(Clone, Debug)]
pub struct ChamberComplex {
    eff: Cone,
    chambers: Vec<Cone>,
    /// codimension-one cells shared by two chambers, with their indices
    walls: Vec<(Cone, (usize, usize))>,
    nef_index: Option<usize>,
}

impl ChamberComplex {
    pub fn eff(&self) -> &Cone {
        &self.eff
    }

    pub fn chambers(&self) -> &[Cone] {
        &self.chambers
    }

    pub fn walls(&self) -> &[(Cone, (usize, usize))] {
        &self.walls
    }

    pub fn nef_index(&self) -> Option<usize> {
        self.nef_index
    }

    /// Index of some chamber containing the point.
    pub fn chamber_containing(&self, v: &PicVector) -> Option<usize> {
        self.chambers.iter().position(|c| c.contains(v))
    }
}

/// Witness data for the wall-crossing argument: a chamber adjacent to the
/// nef chamber across `wall`, and a shift `w` in the wall's relative
/// interior placing the target degree (and its anchor translates) in the
/// chamber.
#[derive(Clone, Debug)]
pub struct WallWitness {
    pub chamber_index: usize,
    pub chamber: Cone,
    pub wall: Cone,
    pub w: PicVector,
}

/// Decompose the cone spanned by `degrees` along the hyperplane arrangement
/// they generate. When `nef` is given it is identified (and if necessary
/// merged) as a single chamber.
pub fn chamber_complex(degrees: &[PicVector], nef: Option<&Cone>) -> Result<ChamberComplex> {
    let ambient = degrees
        .first()
        .map(|v| v.len())
        .ok_or_else(|| Error::InvalidInput("no degree vectors".into()))?;
    if ambient > 3 {
        return Err(Error::UnsupportedRank(ambient));
    }
    let eff = Cone::from_rays(ambient, degrees)?;
    let dim = eff.dim();

    let mut cells = vec![eff.clone()];
    for n in arrangement_normals(ambient, degrees) {
        let h = PicVector(n);
        let mut next = vec![];
        for cell in cells {
            for half in [cell.cut(&h)?, cell.cut(&(-&h))?] {
                if half.dim() == dim {
                    next.push(half);
                }
            }
        }
        next.sort_by(|a, b| a.rays().cmp(b.rays()));
        next.dedup();
        cells = next;
    }

    let nef_index = match nef {
        None => None,
        Some(nef) => {
            let inside: Vec<usize> = (0..cells.len())
                .filter(|&i| cells[i].rays().iter().all(|r| nef.contains(r)))
                .collect();
            if inside.is_empty() {
                return Err(Error::InvalidInput(
                    "nef cone not covered by the chamber cells".into(),
                ));
            }
            let keep = inside[0];
            for &i in inside.iter().skip(1).rev() {
                cells.remove(i);
            }
            cells[keep] = nef.clone();
            Some(keep)
        }
    };

    let mut walls = vec![];
    for i in 0..cells.len() {
        for j in (i + 1)..cells.len() {
            let w = cells[i].intersect(&cells[j])?;
            if w.dim() + 1 == dim {
                walls.push((w, (i, j)));
            }
        }
    }

    Ok(ChamberComplex {
        eff,
        chambers: cells,
        walls,
        nef_index,
    })
}

fn arrangement_normals(ambient: usize, degrees: &[PicVector]) -> Vec<Vec<i64>> {
    let mut normals: Vec<Vec<i64>> = vec![];
    match ambient {
        0 | 1 => {}
        2 => {
            for r in degrees {
                let n = vec![-r.0[1], r.0[0]];
                if n.iter().any(|&x| x != 0) {
                    normals.push(matrix::primitive(&n));
                }
            }
        }
        3 => {
            for i in 0..degrees.len() {
                for j in (i + 1)..degrees.len() {
                    let (a, b) = (&degrees[i].0, &degrees[j].0);
                    let n = vec![
                        a[1] * b[2] - a[2] * b[1],
                        a[2] * b[0] - a[0] * b[2],
                        a[0] * b[1] - a[1] * b[0],
                    ];
                    if n.iter().any(|&x| x != 0) {
                        normals.push(matrix::primitive(&n));
                    }
                }
            }
        }
        _ => unreachable!("rank checked by caller"),
    }
    normals.sort();
    normals.dedup();
    normals
}

/// Find a chamber sharing a wall with the nef chamber and a shift `w` in the
/// wall's relative interior such that `d + w` and `d + w - a` for every
/// anchor `a` all land in that chamber.
pub fn wall_witness(
    d: &PicVector,
    anchors: &[PicVector],
    complex: &ChamberComplex,
    nef: &Cone,
) -> Result<WallWitness> {
    wall_witness_with_cap(d, anchors, complex, nef, DEFAULT_WITNESS_CAP)
}

pub fn wall_witness_with_cap(
    d: &PicVector,
    anchors: &[PicVector],
    complex: &ChamberComplex,
    nef: &Cone,
    cap: usize,
) -> Result<WallWitness> {
    if nef.contains(d) {
        return Err(Error::WitnessNotNeeded);
    }
    if complex.chamber_containing(d).is_none() {
        return Err(Error::OutsideEffectiveCone);
    }
    let nef_idx = complex
        .chambers
        .iter()
        .position(|c| c == nef)
        .ok_or_else(|| Error::InvalidInput("nef cone is not a chamber".into()))?;

    for (wall, (i, j)) in &complex.walls {
        let gamma_idx = match (*i == nef_idx, *j == nef_idx) {
            (true, _) => *j,
            (_, true) => *i,
            _ => continue,
        };
        let gamma = &complex.chambers[gamma_idx];
        let k = wall.rays().len();
        if k == 0 {
            continue;
        }
        // positive combinations of all wall rays stay in the relative interior
        for total in k..=cap {
            for combo in compositions(total, k) {
                let mut w = PicVector::zero(d.len());
                for (c, r) in combo.iter().zip(wall.rays()) {
                    w = &w + &r.scaled(*c as i64);
                }
                let shifted = d + &w;
                if !gamma.contains(&shifted) {
                    continue;
                }
                if anchors.iter().all(|a| gamma.contains(&(&shifted - a))) {
                    return Ok(WallWitness {
                        chamber_index: gamma_idx,
                        chamber: gamma.clone(),
                        wall: wall.clone(),
                        w,
                    });
                }
            }
        }
    }
    Err(Error::WitnessNotFound(cap))
}

/// All ways to write `total` as an ordered sum of `k` positive integers.
fn compositions(total: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 1 {
        return vec![vec![total]];
    }
    let mut out = vec![];
    for first in 1..=(total - k + 1) {
        for mut rest in compositions(total - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}
