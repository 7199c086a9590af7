//! Pic-graded monomial algebra over the Cox ring: graded pieces, ideal
//! powers, truncation generation tests, and the witness search showing that
//! a truncation fails to be generated in a single degree.

use std::str::FromStr;

use num_traits::Zero;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::lattice::{Cone, FineVector, PicVector};
use crate::matrix;
use crate::scalar::Rat;
use crate::toric::ToricVariety;

pub const DEFAULT_EXTRA_MONOMIAL_CAP: usize = 16;

/// Monomial of the Cox ring, identified with its exponent vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial(pub FineVector);

impl Monomial {
    pub fn one(n: usize) -> Monomial {
        Monomial(FineVector::zero(n))
    }

    pub fn degree(&self, x: &ToricVariety) -> PicVector {
        x.grading.degree(&self.0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0 .0.iter().zip(&other.0 .0).all(|(a, b)| a <= b)
    }

    /// Divisibility ignoring the coordinates in `inverted` (for localized
    /// graded pieces, where inverted variables carry any integer exponent).
    pub fn divides_outside(&self, exps: &FineVector, inverted: &[bool]) -> bool {
        self.0
             .0
            .iter()
            .zip(&exps.0)
            .zip(inverted)
            .all(|((a, b), &inv)| inv || a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(&self.0 + &other.0)
    }
}

/// Monomial ideal with a reduced generating set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialIdeal {
    gens: Vec<Monomial>,
}

#[derive(Deserialize)]
struct IdealJson {
    gens: Vec<Vec<i64>>,
}

impl MonomialIdeal {
    pub fn new(gens: Vec<Monomial>) -> MonomialIdeal {
        let mut reduced: Vec<Monomial> = vec![];
        let mut sorted = gens;
        sorted.sort();
        sorted.dedup();
        for g in &sorted {
            if !sorted.iter().any(|h| h != g && h.divides(g)) {
                reduced.push(g.clone());
            }
        }
        MonomialIdeal { gens: reduced }
    }

    pub fn from_json(text: &str) -> Result<MonomialIdeal> {
        let raw: IdealJson = serde_json::from_str(text)
            .map_err(|e| Error::InvalidInput(format!("ideal JSON: {e}")))?;
        for e in &raw.gens {
            if e.iter().any(|&x| x < 0) {
                return Err(Error::InvalidInput("negative exponent in ideal".into()));
            }
            if e.len() != raw.gens[0].len() {
                return Err(Error::InvalidInput("ragged exponent vectors".into()));
            }
        }
        Ok(MonomialIdeal::new(
            raw.gens
                .into_iter()
                .map(|e| Monomial(FineVector(e)))
                .collect(),
        ))
    }

    pub fn gens(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.gens.iter().any(|g| g.divides(m))
    }
}

/// `I^n`, generated by the reduced products of `n` generators.
pub fn ideal_power(ideal: &MonomialIdeal, n: usize) -> MonomialIdeal {
    assert!(n >= 1, "power must be positive");
    let mut products = vec![];
    let gens = ideal.gens();
    if gens.is_empty() {
        return ideal.clone();
    }
    fn rec(gens: &[Monomial], start: usize, left: usize, acc: &Monomial, out: &mut Vec<Monomial>) {
        if left == 0 {
            out.push(acc.clone());
            return;
        }
        for i in start..gens.len() {
            rec(gens, i, left - 1, &acc.mul(&gens[i]), out);
        }
    }
    rec(gens, 0, n, &Monomial::one(gens[0].0.len()), &mut products);
    MonomialIdeal::new(products)
}

/// A scalar multiple of a monomial: one entry of a presentation matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coeff: Rat,
    pub exp: FineVector,
}

/// Monomial module over the Cox ring, in one of the shapes the cohomology
/// routines understand. `Presented` is the cokernel of a map of free
/// modules `⊕ S(c_k) -> ⊕ S(a_j)` whose entries are scalar multiples of
/// monomials; the generator of the `j`-th summand sits in degree `-a_j`.
#[derive(Clone, Debug)]
pub enum MonomialModule {
    Free {
        twists: Vec<PicVector>,
    },
    Ideal {
        ideal: MonomialIdeal,
    },
    Quotient {
        ideal: MonomialIdeal,
    },
    Presented {
        twists: Vec<PicVector>,
        /// columns of the presentation matrix; each column has one term per
        /// free generator (zero coefficients allowed)
        relations: Vec<Vec<Term>>,
        torsion_free_assertion: bool,
    },
}

#[derive(Deserialize)]
struct TermJson {
    coeff: String,
    exp: Vec<i64>,
}

#[derive(Deserialize)]
struct ModuleJson {
    shifts: Vec<Vec<i64>>,
    relations: Vec<Vec<TermJson>>,
    #[serde(default)]
    torsion_free: bool,
}

impl MonomialModule {
    pub fn cox_ring(rank: usize) -> MonomialModule {
        MonomialModule::Free {
            twists: vec![PicVector::zero(rank)],
        }
    }

    pub fn torsion_free_assertion(&self) -> bool {
        match self {
            MonomialModule::Free { .. } | MonomialModule::Ideal { .. } => true,
            MonomialModule::Quotient { .. } => false,
            MonomialModule::Presented {
                torsion_free_assertion,
                ..
            } => *torsion_free_assertion,
        }
    }

    /// Degrees of the module generators (for `Ideal`, of the ideal's
    /// generating monomials).
    pub fn generator_degrees(&self, x: &ToricVariety) -> Vec<PicVector> {
        match self {
            MonomialModule::Free { twists } => twists.iter().map(|a| -a).collect(),
            MonomialModule::Ideal { ideal } => {
                ideal.gens().iter().map(|g| g.degree(x)).collect()
            }
            MonomialModule::Quotient { .. } => vec![PicVector::zero(x.picard_rank())],
            MonomialModule::Presented { twists, .. } => twists.iter().map(|a| -a).collect(),
        }
    }

    /// Parse `{"shifts": [[..]], "relations": [[{"coeff","exp"},..],..]}`.
    /// Shifts are the twists `a_j`; homogeneity of every column is checked
    /// against the variety's grading.
    pub fn from_json(text: &str, x: &ToricVariety) -> Result<MonomialModule> {
        let raw: ModuleJson = serde_json::from_str(text)
            .map_err(|e| Error::InvalidInput(format!("module JSON: {e}")))?;
        let rho = x.picard_rank();
        let twists: Vec<PicVector> = raw
            .shifts
            .into_iter()
            .map(|s| {
                if s.len() == rho {
                    Ok(PicVector(s))
                } else {
                    Err(Error::DimensionMismatch {
                        expected: rho,
                        got: s.len(),
                    })
                }
            })
            .collect::<Result<_>>()?;
        let mut relations = vec![];
        for (c, col) in raw.relations.iter().enumerate() {
            if col.len() != twists.len() {
                return Err(Error::InvalidInput(format!(
                    "relation column {c} has {} entries for {} generators",
                    col.len(),
                    twists.len()
                )));
            }
            let mut parsed = vec![];
            let mut col_twist: Option<PicVector> = None;
            for (j, t) in col.iter().enumerate() {
                let coeff = Rat::from_str(&t.coeff)
                    .map_err(|e| Error::InvalidInput(format!("coefficient: {e}")))?;
                if t.exp.len() != x.num_vars() {
                    return Err(Error::DimensionMismatch {
                        expected: x.num_vars(),
                        got: t.exp.len(),
                    });
                }
                if t.exp.iter().any(|&e| e < 0) && !coeff.is_zero() {
                    return Err(Error::InvalidInput("negative exponent in relation".into()));
                }
                let exp = FineVector(t.exp.clone());
                if !coeff.is_zero() {
                    // entry maps S(c) -> S(a_j) so deg = a_j - c
                    let c_twist = &twists[j] - &x.grading.degree(&exp);
                    match &col_twist {
                        None => col_twist = Some(c_twist),
                        Some(prev) if *prev != c_twist => {
                            return Err(Error::InvalidInput(format!(
                                "relation column {c} is not homogeneous"
                            )))
                        }
                        _ => {}
                    }
                }
                parsed.push(Term { coeff, exp });
            }
            relations.push(parsed);
        }
        Ok(MonomialModule::Presented {
            twists,
            relations,
            torsion_free_assertion: raw.torsion_free,
        })
    }
}

/// All monomials of `S_b`, lex-sorted on exponent vectors; empty when `b`
/// lies outside the effective cone. Finite because Eff X is pointed: a
/// functional positive on Eff bounds every exponent.
pub fn monomials_of_degree(x: &ToricVariety, b: &PicVector) -> Vec<Monomial> {
    let n = x.num_vars();
    let phi = x.eff.interior_functional();
    let weights: Vec<i64> = (0..n).map(|i| phi.dot(&x.grading.var_degree(i))).collect();
    debug_assert!(weights.iter().all(|&w| w > 0));

    let mut out = vec![];
    let mut exps = vec![0i64; n];
    fn rec(
        x: &ToricVariety,
        phi: &PicVector,
        weights: &[i64],
        i: usize,
        remaining: &PicVector,
        exps: &mut Vec<i64>,
        out: &mut Vec<Monomial>,
    ) {
        if i == weights.len() {
            if remaining.is_zero() {
                out.push(Monomial(FineVector(exps.clone())));
            }
            return;
        }
        let budget = phi.dot(remaining);
        if budget < 0 || !x.eff.contains(remaining) {
            return;
        }
        let deg_i = x.grading.var_degree(i);
        let max = budget / weights[i];
        for e in 0..=max {
            exps[i] = e;
            let rem = remaining - &deg_i.scaled(e);
            rec(x, phi, weights, i + 1, &rem, exps, out);
        }
        exps[i] = 0;
    }
    rec(x, &phi, &weights, 0, b, &mut exps, &mut out);
    out.sort();
    out
}

/// `dim_K M_b`.
pub fn hilbert_function(x: &ToricVariety, m: &MonomialModule, b: &PicVector) -> usize {
    match m {
        MonomialModule::Free { twists } => twists
            .iter()
            .map(|a| monomials_of_degree(x, &(b + a)).len())
            .sum(),
        MonomialModule::Ideal { ideal } => monomials_of_degree(x, b)
            .iter()
            .filter(|mono| ideal.contains(mono))
            .count(),
        MonomialModule::Quotient { ideal } => monomials_of_degree(x, b)
            .iter()
            .filter(|mono| !ideal.contains(mono))
            .count(),
        MonomialModule::Presented {
            twists, relations, ..
        } => {
            let target_bases: Vec<Vec<Monomial>> = twists
                .iter()
                .map(|a| monomials_of_degree(x, &(b + a)))
                .collect();
            let total: usize = target_bases.iter().map(|v| v.len()).sum();
            total - presentation_rank(x, twists, relations, b, &target_bases)
        }
    }
}

/// Rank of the degree-`b` piece of the presentation map.
fn presentation_rank(
    x: &ToricVariety,
    twists: &[PicVector],
    relations: &[Vec<Term>],
    b: &PicVector,
    target_bases: &[Vec<Monomial>],
) -> usize {
    // column offsets into the stacked target basis
    let mut offsets = vec![0usize; twists.len()];
    let mut total = 0usize;
    for (j, basis) in target_bases.iter().enumerate() {
        offsets[j] = total;
        total += basis.len();
    }
    let mut rows: Vec<Vec<Rat>> = vec![];
    for col in relations {
        // twist of the relation column, from any nonzero entry
        let Some((j0, t0)) = col
            .iter()
            .enumerate()
            .find(|(_, t)| !t.coeff.is_zero())
        else {
            continue;
        };
        let c_twist = &twists[j0] - &x.grading.degree(&t0.exp);
        for src in monomials_of_degree(x, &(b + &c_twist)) {
            let mut row = vec![Rat::zero(); total];
            for (j, t) in col.iter().enumerate() {
                if t.coeff.is_zero() {
                    continue;
                }
                let image = src.mul(&Monomial(t.exp.clone()));
                let pos = target_bases[j]
                    .binary_search(&image)
                    .expect("homogeneous entry lands in the degree piece");
                row[offsets[j] + pos] = t.coeff.clone();
            }
            rows.push(row);
        }
    }
    matrix::rank::<Rat>(rows)
}

/// Elements of a monomial-type module: (free-generator index, monomial).
fn module_monomials(
    x: &ToricVariety,
    m: &MonomialModule,
    b: &PicVector,
) -> Result<Vec<(usize, Monomial)>> {
    match m {
        MonomialModule::Free { twists } => Ok(twists
            .iter()
            .enumerate()
            .flat_map(|(j, a)| {
                monomials_of_degree(x, &(b + a))
                    .into_iter()
                    .map(move |mono| (j, mono))
            })
            .collect()),
        MonomialModule::Ideal { ideal } => Ok(monomials_of_degree(x, b)
            .into_iter()
            .filter(|mono| ideal.contains(mono))
            .map(|mono| (0, mono))
            .collect()),
        MonomialModule::Quotient { ideal } => Ok(monomials_of_degree(x, b)
            .into_iter()
            .filter(|mono| !ideal.contains(mono))
            .map(|mono| (0, mono))
            .collect()),
        MonomialModule::Presented { .. } => Err(Error::UnsupportedModuleShape(
            "truncation generation needs a monomial basis",
        )),
    }
}

/// Search the window for an element of `M_{>= d}` not generated by the
/// degree-`d` piece. `Ok(None)` is a window-certified "generated"; a witness
/// is the offending (degree, generator index, monomial).
///
/// A monomial lies in the truncation exactly when some divisor of it that is
/// itself a nonzero module element has degree `>= d` in the nef order; that
/// divisor condition — not merely `deg - d` effective — is what makes the
/// membership test sound.
pub fn truncation_ungenerated_witness(
    x: &ToricVariety,
    m: &MonomialModule,
    d: &PicVector,
    lower: &PicVector,
    upper: &PicVector,
) -> Result<Option<(PicVector, usize, Monomial)>> {
    let base = module_monomials(x, m, d)?;
    for b in window_points(lower, upper) {
        if !x.eff.contains(&(&b - d)) {
            continue;
        }
        for (j, mono) in module_monomials(x, m, &b)? {
            if !in_truncation(x, m, j, &mono, d) {
                continue;
            }
            let generated = base
                .iter()
                .any(|(j0, g)| *j0 == j && g.divides(&mono));
            if !generated {
                return Ok(Some((b, j, mono)));
            }
        }
    }
    Ok(None)
}

/// Does `(j, mono)` lie in `M_{>= d}`?
fn in_truncation(
    x: &ToricVariety,
    m: &MonomialModule,
    j: usize,
    mono: &Monomial,
    d: &PicVector,
) -> bool {
    let shift = match m {
        MonomialModule::Free { twists } => twists[j].clone(),
        _ => PicVector::zero(x.picard_rank()),
    };
    divisors(mono).iter().any(|g| {
        let in_module = match m {
            MonomialModule::Free { .. } => true,
            MonomialModule::Ideal { ideal } => ideal.contains(g),
            MonomialModule::Quotient { ideal } => !ideal.contains(g),
            MonomialModule::Presented { .. } => unreachable!("filtered by module_monomials"),
        };
        // element degree of g in summand j is deg g - twist_j
        in_module && x.nef.contains(&(&(&g.degree(x) - &shift) - d))
    })
}

/// All monomial divisors.
fn divisors(m: &Monomial) -> Vec<Monomial> {
    let mut out = vec![FineVector(vec![])];
    for &e in &m.0 .0 {
        let mut next = vec![];
        for p in &out {
            for v in 0..=e {
                let mut q = p.0.clone();
                q.push(v);
                next.push(FineVector(q));
            }
        }
        out = next;
    }
    out.into_iter().map(Monomial).collect()
}

/// All lattice points of the box `[lower, upper]`, lex order.
pub fn window_points(lower: &PicVector, upper: &PicVector) -> Vec<PicVector> {
    let mut out = vec![PicVector(vec![])];
    for (lo, hi) in lower.0.iter().zip(&upper.0) {
        let mut next = vec![];
        for p in &out {
            for v in *lo..=*hi {
                let mut q = p.0.clone();
                q.push(v);
                next.push(PicVector(q));
            }
        }
        out = next;
    }
    out
}

/// For a chamber Γ ≠ Nef and anchors in Γ∖Nef, find monomials `m_i` with
/// `deg m_i >= a_i` whose product is not in the ideal generated by the
/// monomials of degree `Σ a_i`. Existence is guaranteed; the cap bounds the
/// nef-combination search and exceeding it is reported, not silent.
pub fn extra_monomials_witness(
    x: &ToricVariety,
    gamma: &Cone,
    anchors: &[PicVector],
    cap: usize,
) -> Result<Vec<Monomial>> {
    if gamma == &x.nef {
        return Err(Error::InvalidInput("chamber equals the nef cone".into()));
    }
    for a in anchors {
        if !gamma.contains(a) || x.nef.contains(a) {
            return Err(Error::InvalidInput(
                "anchor not in the chamber minus nef".into(),
            ));
        }
    }
    if anchors.is_empty() {
        return Err(Error::InvalidInput("no anchors".into()));
    }
    let total_anchor = anchors
        .iter()
        .fold(PicVector::zero(x.picard_rank()), |acc, a| &acc + a);
    let base = monomials_of_degree(x, &total_anchor);

    // degrees to try per anchor: a_i + nef-combinations, by combination size
    let combos = nef_combinations(&x.nef_gens, cap);
    let mut choices: Vec<Vec<Monomial>> = vec![vec![]; anchors.len()];
    for s in 0..=cap {
        for (i, a) in anchors.iter().enumerate() {
            for combo in combos.iter().filter(|(size, _)| *size == s) {
                choices[i].extend(monomials_of_degree(x, &(a + &combo.1)));
            }
        }
        if let Some(found) = search_product(&choices, &base, &mut vec![]) {
            return Ok(found);
        }
    }
    Err(Error::WitnessNotFound(cap))
}

fn search_product(
    choices: &[Vec<Monomial>],
    base: &[Monomial],
    picked: &mut Vec<Monomial>,
) -> Option<Vec<Monomial>> {
    if picked.len() == choices.len() {
        let n = picked[0].0.len();
        let product = picked
            .iter()
            .fold(Monomial::one(n), |acc, m| acc.mul(m));
        if !base.iter().any(|g| g.divides(&product)) {
            return Some(picked.clone());
        }
        return None;
    }
    let i = picked.len();
    for m in &choices[i] {
        picked.push(m.clone());
        if let Some(found) = search_product(choices, base, picked) {
            return Some(found);
        }
        picked.pop();
    }
    None
}

/// All N-combinations of the given generators with coefficient sum <= cap,
/// tagged by their coefficient sum.
fn nef_combinations(gens: &[PicVector], cap: usize) -> Vec<(usize, PicVector)> {
    let rho = gens.first().map_or(0, |g| g.len());
    let mut out = vec![(0usize, PicVector::zero(rho))];
    let mut frontier = out.clone();
    for s in 1..=cap {
        let mut next = vec![];
        for (_, p) in &frontier {
            for g in gens {
                next.push((s, p + g));
            }
        }
        next.sort_by(|a, b| a.1.cmp(&b.1));
        next.dedup();
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Field;
    use crate::toric::{build_variety, hirzebruch_fan};

    fn h2() -> ToricVariety {
        build_variety(hirzebruch_fan(2)).unwrap()
    }

    fn mono(e: &[i64]) -> Monomial {
        Monomial(FineVector(e.to_vec()))
    }

    fn pv(v: &[i64]) -> PicVector {
        PicVector(v.to_vec())
    }

    #[test]
    fn graded_pieces_of_cox_ring() {
        let x = h2();
        let m = monomials_of_degree(&x, &pv(&[1, 0]));
        assert_eq!(m, vec![mono(&[0, 0, 1, 0]), mono(&[1, 0, 0, 0])]);
        assert_eq!(monomials_of_degree(&x, &pv(&[1, 1])).len(), 6);
        assert!(monomials_of_degree(&x, &pv(&[-1, 0])).is_empty());
    }

    #[test]
    fn hilbert_function_fixtures() {
        let x = h2();
        let quotient = MonomialModule::Quotient {
            ideal: MonomialIdeal::new(vec![mono(&[0, 0, 1, 0]), mono(&[0, 0, 0, 1])]),
        };
        assert_eq!(hilbert_function(&x, &quotient, &pv(&[1, 0])), 1);
        assert_eq!(hilbert_function(&x, &quotient, &pv(&[-1, 0])), 0);
        assert_eq!(hilbert_function(&x, &quotient, &pv(&[5, 3])), 1);

        let s = MonomialModule::cox_ring(2);
        assert_eq!(hilbert_function(&x, &s, &pv(&[1, 1])), 6);
        for b in window_points(&pv(&[-2, -2]), &pv(&[3, 3])) {
            assert_eq!(
                hilbert_function(&x, &s, &b),
                monomials_of_degree(&x, &b).len()
            );
        }
    }

    #[test]
    fn ideal_powers() {
        let x = h2();
        let i = MonomialIdeal::new(vec![mono(&[1, 0, 0, 1]), mono(&[0, 2, 4, 0])]);
        let sq = ideal_power(&i, 2);
        assert_eq!(
            sq.gens(),
            &[
                mono(&[0, 4, 8, 0]),
                mono(&[1, 2, 4, 1]),
                mono(&[2, 0, 0, 2]),
            ]
        );
        assert_eq!(ideal_power(&i, 1), i);

        let j = MonomialIdeal::new(vec![mono(&[1, 0, 0, 0]), mono(&[1, 0, 1, 0])]);
        // reduction collapses the dominated products
        assert_eq!(ideal_power(&j, 2).gens(), &[mono(&[2, 0, 0, 0])]);
        let _ = x;
    }

    #[test]
    fn ideal_power_multiplicativity() {
        use rand::prelude::*;
        let x = h2();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let k = rng.gen_range(1..=4);
            let gens: Vec<Monomial> = (0..k)
                .map(|_| mono(&[
                    rng.gen_range(0..=3),
                    rng.gen_range(0..=3),
                    rng.gen_range(0..=3),
                    rng.gen_range(0..=3),
                ]))
                .collect();
            let i = MonomialIdeal::new(gens);
            if i.is_zero() {
                continue;
            }
            let lhs = ideal_power(&i, 3);
            let sq = ideal_power(&i, 2);
            let prod: Vec<Monomial> = ideal_power(&i, 1)
                .gens()
                .iter()
                .flat_map(|a| sq.gens().iter().map(|b| a.mul(b)))
                .collect();
            assert_eq!(lhs, MonomialIdeal::new(prod));
        }
        let _ = x;
    }

    #[test]
    fn truncation_generation() {
        let x = h2();
        let s = MonomialModule::cox_ring(2);
        let lo = pv(&[-2, -2]);
        let hi = pv(&[4, 4]);

        let (deg, _, witness) = truncation_ungenerated_witness(&x, &s, &pv(&[-1, 1]), &lo, &hi)
            .unwrap()
            .expect("truncation at (-1,1) is not generated in one degree");
        // the witness replays: nothing in S_{(-1,1)} divides it
        assert!(x.eff.contains(&(&deg - &pv(&[-1, 1]))));
        for g in monomials_of_degree(&x, &pv(&[-1, 1])) {
            assert!(!g.divides(&witness));
        }
        // the specific classical witness: x3 in degree (0,1)
        assert!(monomials_of_degree(&x, &pv(&[-1, 1]))
            .iter()
            .all(|g| !g.divides(&mono(&[0, 0, 0, 1]))));

        assert!(truncation_ungenerated_witness(&x, &s, &pv(&[1, 1]), &lo, &hi)
            .unwrap()
            .is_none());
        assert!(truncation_ungenerated_witness(&x, &s, &pv(&[1, 0]), &lo, &hi)
            .unwrap()
            .is_none());
    }

    #[test]
    fn extra_monomials_fixtures() {
        let x = h2();
        let gamma = Cone::from_rays(2, &[pv(&[0, 1]), pv(&[-2, 1])]).unwrap();

        let w = extra_monomials_witness(&x, &gamma, &[pv(&[-1, 1])], 16).unwrap();
        assert_eq!(w, vec![mono(&[0, 0, 0, 1])]);

        let w2 =
            extra_monomials_witness(&x, &gamma, &[pv(&[-1, 1]), pv(&[-1, 1])], 16).unwrap();
        // the product must evade division by every monomial of degree (-2,2)
        let n = x.num_vars();
        let product = w2.iter().fold(Monomial::one(n), |acc, m| acc.mul(m));
        for g in monomials_of_degree(&x, &pv(&[-2, 2])) {
            assert!(!g.divides(&product));
        }
        for (m, a) in w2.iter().zip([pv(&[-1, 1]), pv(&[-1, 1])]) {
            assert!(x.nef.contains(&(&m.degree(&x) - &a)));
        }

        assert!(extra_monomials_witness(&x, &gamma, &[pv(&[1, 1])], 16).is_err());
    }

    #[test]
    fn module_json_parses_and_validates() {
        let x = h2();
        let text = r#"{
          "shifts": [[3,-3],[2,-2],[1,-2]],
          "relations": [[
            {"coeff": "1", "exp": [5,1,0,0]},
            {"coeff": "-1", "exp": [0,2,6,0]},
            {"coeff": "1", "exp": [0,2,5,0]}
          ]],
          "torsion_free": true
        }"#;
        let m = MonomialModule::from_json(text, &x).unwrap();
        let MonomialModule::Presented { twists, relations, torsion_free_assertion } = &m else {
            panic!("expected presented module");
        };
        assert_eq!(twists.len(), 3);
        assert_eq!(relations.len(), 1);
        assert!(torsion_free_assertion);
        assert_eq!(
            m.generator_degrees(&x),
            vec![pv(&[-3, 3]), pv(&[-2, 2]), pv(&[-1, 2])]
        );

        // non-homogeneous column rejected
        let bad = r#"{
          "shifts": [[0,0],[0,0]],
          "relations": [[
            {"coeff": "1", "exp": [1,0,0,0]},
            {"coeff": "1", "exp": [0,1,0,0]}
          ]]
        }"#;
        assert!(MonomialModule::from_json(bad, &x).is_err());
    }

    #[test]
    fn presented_hilbert_function() {
        let x = h2();
        // S(0,0) <- S(-1,0) by x0: cokernel is S/<x0> in each degree
        let m = MonomialModule::Presented {
            twists: vec![pv(&[0, 0])],
            relations: vec![vec![Term {
                coeff: Rat::from_int(1),
                exp: FineVector(vec![1, 0, 0, 0]),
            }]],
            torsion_free_assertion: false,
        };
        let q = MonomialModule::Quotient {
            ideal: MonomialIdeal::new(vec![mono(&[1, 0, 0, 0])]),
        };
        for b in window_points(&pv(&[-2, -2]), &pv(&[3, 3])) {
            assert_eq!(
                hilbert_function(&x, &m, &b),
                hilbert_function(&x, &q, &b),
                "degree {b:?}"
            );
        }
    }
}
